// Sampled local error-bound modulus with a radius profile and CSV export.

use mpdc::errorbound::estimate_error_bound;
use mpdc::model::parse_model;
use mpdc::rational::qvec;

pub fn run() -> mpdc::Result<()> {
    let program = parse_model(include_str!("../programs/mpec_toy.prog"))?.into_program()?;
    let est = estimate_error_bound(&program, &qvec(&[0, 0]), 0.1, 200, 7)?;
    println!("kappa_hat = {:.9}", est.kappa_hat);
    for p in &est.profile {
        println!("  radius {:.4}: {:.9}", p.radius, p.kappa_hat);
    }
    let worst_gap = est.samples.iter().map(|s| s.partition_gap).fold(0.0, f64::max);
    println!("largest partition gap: {worst_gap:.1e}");
    let mut csv = Vec::new();
    est.write_csv(&mut csv)?;
    let text = String::from_utf8(csv).expect("csv is utf-8");
    for line in text.lines().take(3) {
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
