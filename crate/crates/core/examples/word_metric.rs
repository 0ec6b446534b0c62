// Balls and spheres in the word metric of a few marked groups.

use qlab::MarkedGroup;

fn main() -> qlab::Result<()> {
    for spec in ["Z^2", "F2", "H3", "Z/6"] {
        let g = MarkedGroup::parse(spec)?;
        let ball = g.ball(4)?;
        println!("{:<4} sphere sizes up to radius 4: {:?}", g.descriptor(), ball.sphere_sizes());
    }

    let h3 = MarkedGroup::parse("H3")?;
    let z = h3.parse_element("x y x^-1 y^-1")?;
    // the central commutator costs 4 letters but its square only 6
    let z2 = h3.multiply(&z, &z);
    println!("H3: |[x,y]| = {}, |[x,y]^2| = {}", h3.word_length(&z), h3.word_length(&z2));
    println!("normal form of [x,y]^2: {}", h3.format_word(&h3.to_word(&z2)));
    Ok(())
}
