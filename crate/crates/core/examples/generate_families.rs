// Generate the polynomial families and check that specializing μ in `P_{n,l}`
// yields `Q_{n,l}`.
//
// Run with `cargo run --example generate_families`.

use polycycle::recurrence::{mu_specialize, p_family, q_family};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = q_family(2, 3)?;
    for l in 1..=3 {
        println!("Q_{{2,{l}}} = {}", q.get(l).expect("generated"));
    }
    let p = p_family(3, 3)?;
    let q3 = q_family(3, 3)?;
    for l in 1..=3 {
        let pl = p.get(l).expect("generated");
        println!("P_{{3,{l}}} has {} terms", pl.len());
        assert_eq!(&mu_specialize(pl)?, q3.get(l).expect("generated"));
    }
    println!("specializing mu reproduces Q_{{3,l}} for l = 1..3");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
