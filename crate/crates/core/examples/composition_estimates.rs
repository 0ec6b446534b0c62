// Composition and power estimates for μ, checked on a handful of random kernels.

use num::complex::Complex64;
use qlab::estimates::{check_composition_estimate, check_power_estimate};
use qlab::random::{random_kernel, trial_rng};
use qlab::MarkedGroup;

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("F2")?;
    let pool = g.ball(4)?;
    let radii: Vec<f64> = (2..=12).map(f64::from).collect();
    for trial in 0..5 {
        let mut rng = trial_rng(1, trial);
        let a = random_kernel::<Complex64, _>(&g, &pool, 6, &mut rng);
        let b = random_kernel::<Complex64, _>(&g, &pool, 6, &mut rng);
        let comp = check_composition_estimate(&a, &b, 2.0, &radii)?;
        let power = check_power_estimate(&a, 3, 2.0, &radii)?;
        let tightest = comp.rows.iter().filter(|r| r.rhs_upper > 0.0).map(|r| r.lhs_lower / r.rhs_upper).fold(0.0, f64::max);
        println!(
            "trial {trial}: composition holds {} (tightest ratio {tightest:.3}), power n=3 holds {}",
            comp.holds(),
            power.holds()
        );
    }
    Ok(())
}
