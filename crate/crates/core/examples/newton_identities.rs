// Vanishing power sums force every elementary symmetric polynomial to vanish,
// hence all variables to vanish.
//
// Run with `cargo run --example newton_identities`.

use polycycle::elimination::newton_no_common_zero;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d = newton_no_common_zero(3)?;
    for step in &d.steps {
        println!(
            "sigma_{} = {}",
            step.l,
            step.cofactors
                .iter()
                .enumerate()
                .map(|(i, c)| format!("({c})*p{}", i + 1))
                .collect::<Vec<_>>()
                .join(" + ")
        );
    }
    println!(
        "vieta {}, collapse to w^3 {}, only root 0 {}",
        d.vieta_holds, d.collapses_to_power, d.only_zero_root
    );
    assert!(d.no_common_zero);
    for m in 4..=8 {
        assert!(newton_no_common_zero(m)?.no_common_zero);
    }
    println!("no common nontrivial zero for m = 1..8");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
