// Exact rational linear programming.

use mpdc::lp::{Cmp, Lp, LpOutcome, VarKind};
use mpdc::rational::{fmt_q, fmt_vec, q, qvec};

pub fn run() -> mpdc::Result<()> {
    // maximize x + y subject to 3x + y <= 2, x + 3y <= 2, x, y >= 0.
    let mut lp = Lp::new(vec![VarKind::NonNeg; 2]);
    lp.row(qvec(&[3, 1]), Cmp::Le, q(2)).row(qvec(&[1, 3]), Cmp::Le, q(2)).maximize(qvec(&[1, 1]));
    match lp.solve() {
        LpOutcome::Optimal { x, value } => println!("optimum {} at {}", fmt_q(&value), fmt_vec(&x)),
        other => println!("{other:?}"),
    }
    let mut infeasible = Lp::new(vec![VarKind::Free]);
    infeasible.row(qvec(&[1]), Cmp::Ge, q(1)).row(qvec(&[1]), Cmp::Le, q(0));
    println!("x >= 1, x <= 0: {:?}", infeasible.solve());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
