// Run a command in-process and render its JSON report; polynomials round-trip
// through their exact JSON form.
//
// Run with `cargo run --example reports`.

use polycycle::cli::{render, run, Command, Flags, Format, RunConfig};
use polycycle::poly::MPoly;
use polycycle::recurrence::q_family;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let flags = Flags {
        n: Some(2),
        l: Some(2),
        format: Format::Json,
        ..Flags::default()
    };
    let config = RunConfig::new(&Command::GenQ(flags), None)?;
    let outcome = run(&config)?;
    let report = render(&config, &outcome);
    println!("{}", report.lines().take(8).collect::<Vec<_>>().join("\n"));

    let q = q_family(2, 2)?.polys.remove(1);
    let text = q.to_json_string();
    assert_eq!(MPoly::from_json_str(&text)?, q);
    println!("Q_{{2,2}} as JSON: {} bytes", text.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
