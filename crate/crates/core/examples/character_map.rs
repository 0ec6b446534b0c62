// The character map on tensors: exact chain-map and descent checks.

use qlab::cyclic::{check_chain_map, chi, random_tensor};
use qlab::random::trial_rng;
use qlab::{GaussianRational, MarkedGroup};

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("Z^1")?;
    let pool = g.ball(2)?;
    for degree in 1..=3 {
        let omega = random_tensor::<GaussianRational, _>(&g, &pool, degree, 2, 3, &mut trial_rng(11, degree as u64));
        let image = chi(&omega)?;
        let rep = check_chain_map(&omega)?;
        println!(
            "degree {degree}: {} tensor terms -> {} chain terms, chain map {}, descends {}",
            omega.terms().len(),
            image.terms().len(),
            rep.chain_map,
            rep.descends
        );
    }
    Ok(())
}
