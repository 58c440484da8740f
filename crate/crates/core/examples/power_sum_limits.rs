// Setting every λ equal collapses `Q_{n,l}` to a multiple of a power sum.
//
// Run with `cargo run --example power_sum_limits`.

use polycycle::recurrence::{power_sum_limit, power_sum_limit_by_substitution, power_sum_target};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for l in 1..5 {
        let limit = power_sum_limit(5, l)?;
        assert_eq!(limit, power_sum_target(5, l)?);
        assert_eq!(limit, power_sum_limit_by_substitution(5, l)?);
        println!("n = 5, l = {l}: {limit}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
