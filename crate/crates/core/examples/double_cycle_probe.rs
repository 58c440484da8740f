// Tune the offsets of a two-saddle chain so that `x0` is a double fixed point and
// watch the direction `(Z_1 : Z_2)` approach a coordinate axis as `x0 → 0`.
//
// Run with `cargo run --example double_cycle_probe`.

use polycycle::poly::rat;
use polycycle::saddle::{double_cycle_family_probe, geometric_grid, PolycycleModel};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = PolycycleModel::from_json_str(r#"{"saddles": [{"lambda": "2"}, {"lambda": "3"}], "jet_order": 3}"#)?;
    let rep = double_cycle_family_probe(&model, &geometric_grid(&rat(1, 10), &rat(1, 10), 6))?;
    for p in &rep.points {
        println!("x0 = {:>9}: min |z_i|/|z| = {:.3e}", p.x0, p.min_ratio);
    }
    assert!(rep.monotone_decreasing && rep.final_min_ratio < 1e-2);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
