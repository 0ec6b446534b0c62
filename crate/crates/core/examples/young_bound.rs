// Weighted norms of χ(ω) against the Young-type bound.

use num::complex::Complex64;
use qlab::cyclic::{check_young_bound, random_tensor, TensorChain};
use qlab::random::trial_rng;
use qlab::MarkedGroup;

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("F2")?;
    let pool = g.ball(2)?;
    for n in 1..=2usize {
        let p = (n as f64 + 1.0) / n as f64;
        let omega: TensorChain<Complex64> = random_tensor(&g, &pool, n, 2, 3, &mut trial_rng(5, n as u64));
        for k in 1..=3 {
            let r = check_young_bound(&omega, k, p)?;
            println!("n {n} k {k} p {p:.3}: {:.4} <= {:.4} (C = {})  {}", r.lhs, r.rhs, r.constant_used, r.pass);
        }
    }
    Ok(())
}
