// Minimal integral fillings in a triangulated grid and the resulting Dehn table.

use qlab::filling::{block_boundary, dehn_profile, min_filling, DehnOptions, FiniteSimplicialComplex};

fn main() -> qlab::Result<()> {
    let k = FiniteSimplicialComplex::grid(4, 4);
    for side in 1..=3 {
        let b = block_boundary(4, 0, 0, side, side);
        let f = min_filling(&k, &b, 4)?;
        println!("{side}x{side} square: |b| = {}, filling size {:?}", b.size(), f.length());
    }

    let profile = dehn_profile(&FiniteSimplicialComplex::grid(3, 3), 1, 7, &DehnOptions::default())?;
    println!("k  d(k)  boundaries");
    for r in &profile.rows {
        println!("{:<2} {:<5} {}", r.k, r.value, r.boundaries);
    }
    Ok(())
}
