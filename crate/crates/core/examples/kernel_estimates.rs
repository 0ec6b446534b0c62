// Tail-sum lemma and weighted corollary on random kernels.

use num::complex::Complex64;
use qlab::estimates::check_kernel_estimates;
use qlab::random::{random_kernel, trial_rng};
use qlab::MarkedGroup;

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("Z^1")?;
    let pool = g.ball(4)?;
    let mut failing = Vec::new();
    for trial in 0..50 {
        let a = random_kernel::<Complex64, _>(&g, &pool, 6, &mut trial_rng(3, trial));
        for n in 1..=3 {
            let rep = check_kernel_estimates(&a, 1.5, n)?;
            for row in rep.rows.iter().filter(|r| !r.pass) {
                failing.push((trial, n, row.check.clone(), row.lhs_lower, row.rhs_upper));
            }
        }
    }
    println!("{} failing rows out of 50 kernels x n = 1..3", failing.len());
    for (trial, n, check, lhs, rhs) in failing.iter().take(5) {
        println!("  trial {trial} n {n} {check}: {lhs:.4} vs {rhs:.4}");
    }
    Ok(())
}
