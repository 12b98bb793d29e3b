// Regular and limiting normal cones of a union of two polyhedral cones.

use mpdc::disjunctive::{limiting_member, limiting_nc, regular_nc};
use mpdc::model::parse_model;
use mpdc::rational::{fmt_vec, qvec};

pub fn run() -> mpdc::Result<()> {
    let program = parse_model(include_str!("../programs/twin_cones.prog"))?.into_program()?;
    let block = &program.blocks[0];
    let origin = qvec(&[0, 0, 0]);
    println!("regular: {}", regular_nc(&block.set, &origin)?.describe());
    let lim = limiting_nc(&block.set, &origin)?;
    println!("limiting generators: {}", lim.rays.iter().map(|r| fmt_vec(r)).collect::<Vec<_>>().join(" "));
    for s in &lim.strata {
        println!("  near {}: {}", fmt_vec(&s.point), s.cone.describe());
    }
    for v in [qvec(&[0, 1, -1]), qvec(&[1, 0, 0])] {
        println!("{} in limiting cone: {}", fmt_vec(&v), limiting_member(&block.set, &origin, &v)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
