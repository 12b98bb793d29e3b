// Every constraint qualification at the origin of the three-dimensional two-piece example.

use mpdc::cq::{check_all, CheckConfig};
use mpdc::model::parse_model;
use mpdc::rational::qvec;

pub fn run() -> mpdc::Result<()> {
    let text = include_str!("../programs/twin_cones.prog");
    let program = parse_model(text)?.into_program()?;
    let x = qvec(&[0, 0, 0]);
    for report in check_all(&program, &x, &CheckConfig::default())? {
        println!("{:<7} {:<16} families={}", report.cq.as_str(), report.verdict.as_str(), report.families_checked);
        for note in &report.notes {
            println!("        {note}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
