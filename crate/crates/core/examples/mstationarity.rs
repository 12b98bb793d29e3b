// Branch-wise M-stationarity certificates for a complementarity-constrained objective.

use mpdc::model::parse_model;
use mpdc::rational::{fmt_vec, qvec};
use mpdc::stationarity::{all_certificates, check_mstationary};

pub fn run() -> mpdc::Result<()> {
    let program = parse_model(include_str!("../programs/mpec_toy.prog"))?.into_program()?;
    let origin = qvec(&[0, 0]);
    for cert in all_certificates(&program, &origin)? {
        println!("eta = {} (residual {:.1e}), verified: {}", fmt_vec(&cert.eta[0]), cert.residual, cert.verify(&program, &origin)?);
    }
    let off = qvec(&[1, 0]);
    println!("M-stationary at (1, 0): {}", check_mstationary(&program, &off)?.is_some());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
