// Structural properties of `Q_{n,l}`: homogeneity in `z`, integer coefficients and
// the link between consecutive `n`.
//
// Run with `cargo run --example link_structure`.

use polycycle::poly::BlockKind;
use polycycle::recurrence::{link_property, q_family};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lower = q_family(3, 4)?;
    let upper = q_family(4, 4)?;
    for (k, q) in upper.polys.iter().enumerate() {
        let l = (k + 1) as u32;
        assert!(q.is_homogeneous_in(BlockKind::Z, l) && q.is_integral());
        println!("Q_{{4,{l}}}: {} terms, homogeneous of degree {l} in z, integral", q.len());
    }
    let checks = link_property(&upper, &lower)?;
    let holding = checks.iter().filter(|c| c.holds).count();
    println!("link property: {holding}/{} specializations reduce Q_4 to Q_3", checks.len());
    assert_eq!(holding, checks.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
