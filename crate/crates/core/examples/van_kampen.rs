// Combinatorial areas of null-homotopic words in finite presentations.

use qlab::filling::{vankampen_area, Presentation};

fn main() -> qlab::Result<()> {
    let z2 = Presentation::parse("<a,b|[a,b]>")?;
    for m in 1..=3 {
        let w = z2.parse_word(&format!("[a^{m},b^{m}]"))?;
        println!("Z^2: area of {} = {:?}", z2.format_word(&w), vankampen_area(&z2, &w, 10)?);
    }
    let bs = Presentation::parse("<a,t|t a t^-1 a^-2>")?;
    let w = bs.parse_word("t a t^-1 a^-2")?;
    println!("BS(1,2): area of the relator = {:?}", vankampen_area(&bs, &w, 3)?);
    let free = bs.parse_word("a t")?;
    println!("BS(1,2): a t is not trivial, search gives {:?}", vankampen_area(&bs, &free, 3)?);
    Ok(())
}
