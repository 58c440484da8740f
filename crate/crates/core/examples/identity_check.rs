// Derivatives of `ln Δ'` computed by jets agree with the symbolic `P_{n,l}`
// evaluated at the chain quantities `μ_{iq}` and `Z_i`.
//
// Run with `cargo run --example identity_check`.

use polycycle::poly::rat;
use polycycle::saddle::{chain, identity_check, random_model, to_float, PolycycleModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = PolycycleModel::from_json_str(r#"{"saddles": [{"lambda": "2"}, {"lambda": "3"}], "jet_order": 3}"#)?;
    let ch = chain(&model, &to_float(&rat(1, 10), model.precision_bits))?;
    println!(
        "Z = ({:.6}, {:.6}), first derivative of ln Δ' = {:.6}",
        ch.z[0].to_f64(),
        ch.z[1].to_f64(),
        ch.d[1].to_f64()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=4 {
        let rm = random_model(n, 5, 256, &mut rng)?;
        let rep = identity_check(&rm.model, &rm.x0, 4)?;
        println!("random model with {n} saddles at x0 = {}: max relative error {}", rm.x0, rep.max_rel_error);
        assert!(rep.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
