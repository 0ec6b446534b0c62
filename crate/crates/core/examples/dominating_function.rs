// The dominating function μ_A(R) of a random kernel, with lower and upper bounds.

use num::complex::Complex64;
use qlab::quasilocal::{dominating_profile, poly_mu_norm};
use qlab::random::{random_kernel, trial_rng};
use qlab::MarkedGroup;

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("Z^2")?;
    let pool = g.ball(5)?;
    let a = random_kernel::<Complex64, _>(&g, &pool, 8, &mut trial_rng(7, 0));
    println!("kernel with {} entries, propagation {}", a.support_len(), a.propagation());

    let radii: Vec<f64> = (2..=6).map(f64::from).collect();
    let window = g.ball(6 + a.propagation())?;
    let profile = dominating_profile(&a, 2.0, &window, &radii)?;
    for (r, b) in profile.radii.iter().zip(&profile.bounds) {
        println!("R = {r}:  {:.4e} <= mu(R) <= {:.4e}", b.lower, b.upper);
    }
    for n in 1..=3 {
        let norm = poly_mu_norm(&a, 2.0, n)?;
        println!("||A||_(mu,{n}) in [{:.4}, {:.4}]", norm.value.lower, norm.value.upper);
    }
    Ok(())
}
