// Closed-form limiting normal cones of the complementarity, vanishing and switching sets.

use mpdc::disjunctive::limiting_nc;
use mpdc::ortho::{omega_nc, OrthoKind};
use mpdc::rational::{fmt_vec, qvec};

pub fn run() -> mpdc::Result<()> {
    for kind in [OrthoKind::Mpec, OrthoKind::Mpvc, OrthoKind::Mpsc] {
        for y in [qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[-1, 0]), qvec(&[0, 1])] {
            let Ok(closed) = omega_nc(kind, &y) else {
                println!("{} {}: outside", kind.as_str(), fmt_vec(&y));
                continue;
            };
            let generic = limiting_nc(&kind.set(), &y)?;
            let same = closed.cones().iter().all(|c| generic.cones().iter().any(|g| g.same_cone(c)))
                && closed.strata.len() == generic.strata.len();
            let cones: Vec<String> = closed.strata.iter().map(|s| s.cone.describe()).collect();
            println!("{} {}: {} (generic agrees: {same})", kind.as_str(), fmt_vec(&y), cones.join(" ∪ "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
