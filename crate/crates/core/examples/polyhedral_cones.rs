// Generators and facets of polyhedral cones, membership and Carathéodory reduction.

use mpdc::cq::caratheodory_reduce;
use mpdc::geometry::{cone_member, dd_hrep_to_vrep, dd_vrep_to_hrep, normal_cone, HRep, Polyhedron, Row};
use mpdc::rational::{fmt_vec, q, qvec};

pub fn run() -> mpdc::Result<()> {
    // The nonnegative quadrant cut by x <= y.
    let h = HRep { dim: 2, ineqs: vec![qvec(&[-1, 0]), qvec(&[0, -1]), qvec(&[1, -1])], eqs: vec![] };
    let k = dd_hrep_to_vrep(&h);
    println!("generators: {}", k.describe());
    let back = dd_vrep_to_hrep(&k);
    println!("facets: {}", back.ineqs.iter().map(|a| fmt_vec(a)).collect::<Vec<_>>().join(", "));
    for v in [qvec(&[1, 2]), qvec(&[2, 1])] {
        println!("{} in cone: {}", fmt_vec(&v), cone_member(&k, &v));
    }

    let box_ = Polyhedron::new(2, vec![Row::le(qvec(&[1, 0]), q(1)), Row::le(qvec(&[0, 1]), q(1))])?;
    println!("normal cone of the box at (1, 1): {}", normal_cone(&box_, &qvec(&[1, 1]))?.describe());

    let v = qvec(&[3, 3]);
    let extras = vec![(qvec(&[1, 0]), q(1)), (qvec(&[0, 1]), q(1)), (qvec(&[1, 1]), q(2))];
    let reduced = caratheodory_reduce(&v, &[], &extras)?;
    println!("(3, 3) reduced to extras {:?}", reduced.kept.iter().map(|(i, c)| (*i, c.to_string())).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
