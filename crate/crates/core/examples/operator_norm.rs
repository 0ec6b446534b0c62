// Two-sided enclosures of the ℓ^p operator norm of a convolution kernel.

use num::complex::Complex64;
use qlab::quasilocal::operator_norm;
use qlab::{Kernel, MarkedGroup};

fn main() -> qlab::Result<()> {
    let g = MarkedGroup::parse("F2")?;
    // the simple random walk operator: norm 1 on ℓ^1, and sqrt(3)/2 on ℓ^2 for F2
    let walk = Kernel::from_entries(&g, g.generators().into_iter().map(|s| (s, Complex64::new(0.25, 0.0))));
    for window in [2, 4, 6] {
        let ball = g.ball(window)?;
        for p in [1.0, 2.0] {
            let b = operator_norm(&walk, p, &ball)?;
            println!("p = {p}  window {window}:  {:.5} <= ||T|| <= {:.5}", b.lower, b.upper);
        }
    }
    println!("sqrt(3)/2 = {:.5}", 3f64.sqrt() / 2.0);
    Ok(())
}
