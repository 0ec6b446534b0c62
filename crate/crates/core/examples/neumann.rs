// Truncated Neumann series for a small perturbation of the identity.

use num::complex::Complex64;
use qlab::estimates::neumann_invert;
use qlab::{Kernel, MarkedGroup};

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("Z^1")?;
    let eps = 0.04;
    let gens = g.generators();
    let w = eps / gens.len() as f64;
    let step = Kernel::from_entries(&g, gens.into_iter().map(|s| (s, Complex64::new(w, 0.0))));
    let a = Kernel::identity(&g).sub(&step)?;

    let (s, rep) = neumann_invert(&a, 40)?;
    println!("S_40 has {} entries, propagation {}", s.support_len(), s.propagation());
    println!("residual |id - A S| = {:.3e} (bound {:.3e})", rep.residual, rep.residual_bound);
    println!("decay slope {:.3} (bound {:.3})", rep.slope, rep.slope_bound);
    println!("weighted norm of S {:.3e} vs bound {:.3e}", rep.norm_s, rep.norm_bound);
    for (r, mu) in rep.decay.iter().step_by(5) {
        println!("  mu_S({r}) <= {mu:.3e}");
    }
    Ok(())
}
