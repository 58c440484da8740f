// Scaled log-derivatives of a saddle map tend to `(−1)^{q−1}(q−1)!(λ−1)`, and
// `ln Δ'` diverges for a single saddle with `λ ≠ 1`.
//
// Run with `cargo run --example saddle_limits`.

use polycycle::poly::rat;
use polycycle::saddle::{divergence_probe_n1, geometric_grid, mu_limit_probe, PolycycleModel};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = PolycycleModel::from_json_str(r#"{"saddles": [{"lambda": "3/2", "corrections": ["1/2"]}], "precision_bits": 256, "jet_order": 6}"#)?;
    let grid = geometric_grid(&rat(1, 10), &rat(1, 10), 6);
    for q in 1..=4 {
        let rep = mu_limit_probe(&model, 1, q, &grid)?;
        println!(
            "q = {q}: target {}, raw error at 1e-6 {:.2e}, extrapolated error {:.2e}",
            rep.target, rep.estimate_errors[5], rep.error
        );
        assert!(rep.within(1e-8));
    }
    for lambda in ["2", "1/2", "1"] {
        let m = PolycycleModel::from_json_str(&format!(r#"{{"saddles": [{{"lambda": "{lambda}"}}], "jet_order": 2}}"#))?;
        let d = divergence_probe_n1(&m, 30)?;
        println!(
            "lambda = {lambda}: direction {}, tail slope {:.4}, passed {}",
            d.expected_direction, d.tail_slope, d.passed
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
