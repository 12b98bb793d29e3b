// Index sets, local reformulation and specialized checks for complementarity, vanishing and switching pairs.

use mpdc::cq::{check_prcpld, check_rcpld, CheckConfig, CqName};
use mpdc::model::{parse_model, ModelFile};
use mpdc::ortho::{check_ortho, classify, to_generic};
use mpdc::rational::qvec;

pub fn run() -> mpdc::Result<()> {
    let config = CheckConfig::default();
    for (name, text, x) in [
        ("curved complementarity", include_str!("../programs/mpec_curved.prog"), qvec(&[0, 0])),
        ("vanishing with equality", include_str!("../programs/mpvc_anchor.prog"), qvec(&[0, 0])),
        ("two switching pairs", include_str!("../programs/mpsc_pair.prog"), qvec(&[0, 0, 0])),
    ] {
        let ModelFile::Ortho(p) = parse_model(text)? else { unreachable!("orthogonal program files") };
        let sets = classify(&p, &x, config.feasibility_tol)?;
        let classes: Vec<&str> = sets.classes.iter().map(|c| c.as_str()).collect();
        let local = to_generic(&p, &x)?;
        println!("{name}: classes {classes:?}, {} block(s) kept", local.blocks.len());
        for (cq, generic) in [(CqName::Rcpld, check_rcpld(&local, &x, &config)?), (CqName::Prcpld, check_prcpld(&local, &x, &config)?)] {
            let special = check_ortho(&p, &x, cq, &config).expect("specialized path")?;
            println!("  {cq}: specialized {} / generic {}", special.verdict.as_str(), generic.verdict.as_str());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
