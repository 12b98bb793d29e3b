// A relaxed-CPLD failure with its replayable witness, and the piecewise condition on the subsystems.

use mpdc::cq::{check_prcpld, check_rcpld, replay, CheckConfig};
use mpdc::model::parse_model;
use mpdc::rational::{fmt_q, fmt_vec, qvec};

pub fn run() -> mpdc::Result<()> {
    let program = parse_model(include_str!("../programs/twin_cones.prog"))?.into_program()?;
    let x = qvec(&[0, 0, 0]);
    let config = CheckConfig::default();
    let r = check_rcpld(&program, &x, &config)?;
    println!("RCPLD: {}", r.verdict.as_str());
    if let Some(w) = &r.witness {
        let c = w.candidate.as_ref().expect("dependence witnesses carry a multiplier");
        println!("  eta = {}, lambda_h = ({})", fmt_vec(&c.eta[0]), c.lambda_h.iter().map(fmt_q).collect::<Vec<_>>().join(", "));
        println!("  independent on radii {:?} along direction {}", w.levels, fmt_vec(&w.direction));
        println!("  replay: {}", replay(&program, &x, w, &config)?);
    }
    for part in program.admissible_partitions(&x)? {
        let sub = program.subsystem(&part)?;
        println!("subsystem C{}: RCPLD {}", part[0] + 1, check_rcpld(&sub, &x, &config)?.verdict.as_str());
    }
    println!("PRCPLD: {}", check_prcpld(&program, &x, &config)?.verdict.as_str());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
