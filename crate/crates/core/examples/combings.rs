// Combings: fellow-traveler constants, length growth, quasi-geodesic check.

use qlab::combing::{fellow_traveler_constant, length_growth, quasi_geodesic_check, Combing, Scheme};
use qlab::MarkedGroup;

fn main() -> qlab::Result<()> {
    let cases = [("Z^2", Scheme::StraightLine), ("F2", Scheme::Geodesic), ("H3", Scheme::NaiveNormalForm)];
    for (spec, scheme) in cases {
        let g = MarkedGroup::parse(spec)?;
        let sigma = Combing::new(&g, scheme)?;
        let ft = fellow_traveler_constant(&sigma, 5)?;
        let growth = length_growth(&sigma, 5)?;
        let qg = quasi_geodesic_check(&sigma, 1.0, 0.0, 5)?;
        println!(
            "{spec} {scheme}: fellow-traveler {ft}, length exponent {:?}, geodesic {}, smallest (lambda, c) {:?}",
            growth.exponent.map(|e| (e * 100.0).round() / 100.0),
            qg.pass,
            qg.smallest
        );
    }
    Ok(())
}
