// Equivariant uniformly finite chains: boundary, weighted norms, Fréchet seminorms.

use qlab::random::trial_rng;
use qlab::uf::{random_chain, EquivariantChain};
use qlab::{GaussianRational, MarkedGroup};

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("Z^2")?;
    let pool = g.ball(3)?;
    let c: EquivariantChain<GaussianRational> = random_chain(&g, &pool, 2, 4, &mut trial_rng(2, 0));
    println!("degree {} chain with {} orbits", c.degree(), c.terms().len());
    for n in 0..=3 {
        println!("  n = {n}: weighted {:.4}, frechet {:.4}", c.weighted_norm(n), c.frechet_seminorm(n));
    }
    let b = c.boundary()?;
    println!("boundary has {} orbits; boundary of boundary is zero: {}", b.terms().len(), b.boundary()?.is_zero());
    Ok(())
}
