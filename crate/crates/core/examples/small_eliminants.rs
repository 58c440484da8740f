// Eliminants for one, two and three homogeneous variables, and the genericity
// polynomials built from them.
//
// Run with `cargo run --example small_eliminants`.

use polycycle::elimination::{eliminant_n2, eliminant_n3, eliminant_n4};
use polycycle::recurrence::{l_general, l_small};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e1 = eliminant_n2()?;
    println!("one variable: {}", e1.poly);
    let e2 = eliminant_n3()?;
    println!("two variables: {}", e2.factored.as_ref().expect("splits over the closed form"));
    assert!(e2.matches_closed_form());

    let e3 = eliminant_n4()?;
    println!("three variables, linear factor L = {}", e3.linear_factor);
    println!("reduced determinant = {}", e3.determinant_factored.as_ref().expect("splits"));
    println!("eliminant = {}", e3.r_star);
    assert!(e3.r_star.same_factors(&e3.closed_form));

    let generic = l_general(4, &e3.r_star)?;
    assert!(generic.same_factors(&l_small(4)?));
    println!("genericity polynomial for n = 4 has {} distinct factors", generic.distinct_factors().len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
