// Truncated Taylor jets in multi-precision arithmetic.
//
// Run with `cargo run --example jet_arithmetic`.

use polycycle::saddle::Jet;
use rug::Float;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prec = 128;
    let x = Jet::variable(&Float::with_val(prec, 0.5), 4);
    // g(x) = ln(1 + x) evaluated through exp and ln; h(x) = x^(3/2).
    let g = x.add_scalar(&Float::with_val(prec, 1)).ln()?;
    let h = x.powf(&Float::with_val(prec, 1.5))?;
    let prod = g.mul(&h);
    let ratio = prod.div(&h)?;
    println!("ln(1+x) at 1/2: {:?}", g.derivatives().iter().map(|d| d.to_f64()).collect::<Vec<_>>());
    println!(
        "(ln(1+x) * x^1.5) / x^1.5 recovers ln(1+x): {}",
        ratio.sub(&g).coeffs().iter().all(|c| c.clone().abs() < 1e-30)
    );

    // Composition: exp(ln(1+x)) = 1 + x.
    let outer = Jet::variable(g.value(), 4).exp();
    let back = Jet::compose(&outer, &g);
    println!(
        "exp(ln(1+x)) derivatives: {:?}",
        back.derivatives().iter().map(|d| d.to_f64()).collect::<Vec<_>>()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
