use super::Expr;
use crate::rational::Q;
use num_traits::{One, Zero};

pub(super) fn mk_sum(mut terms: Vec<Expr>) -> Expr {
    terms.retain(|t| !t.is_zero());
    match terms.len() {
        0 => Expr::zero(),
        1 => terms.pop().unwrap(),
        _ => Expr::Sum(terms),
    }
}

fn mk_product(factors: Vec<Expr>) -> Expr {
    let mut c = Q::one();
    let mut rest = Vec::new();
    let mut stack = factors;
    stack.reverse();
    while let Some(f) = stack.pop() {
        match f {
            Expr::Const(k) => c *= k,
            Expr::Neg(inner) => {
                c = -c;
                stack.push(*inner);
            }
            Expr::Product(inner) => stack.extend(inner.into_iter().rev()),
            other => rest.push(other),
        }
    }
    if c.is_zero() {
        return Expr::zero();
    }
    if rest.is_empty() {
        return Expr::Const(c);
    }
    if c == -Q::one() {
        let inner = if rest.len() == 1 { rest.pop().unwrap() } else { Expr::Product(rest) };
        return Expr::Neg(Box::new(inner));
    }
    if !c.is_one() {
        rest.insert(0, Expr::Const(c));
    }
    if rest.len() == 1 {
        rest.pop().unwrap()
    } else {
        Expr::Product(rest)
    }
}

fn mk_neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        Expr::Product(fs) if matches!(fs.first(), Some(Expr::Const(_))) => {
            mk_product(std::iter::once(Expr::Const(-Q::one())).chain(fs).collect())
        }
        other => Expr::Neg(Box::new(other)),
    }
}

fn mk_pow(b: Expr, n: u32) -> Expr {
    match n {
        0 => Expr::Const(Q::one()),
        1 => b,
        _ => Expr::Pow(Box::new(b), n),
    }
}

pub(super) fn derivative(e: &Expr, k: usize) -> Expr {
    match e {
        Expr::Const(_) => Expr::zero(),
        Expr::Var(i) => Expr::Const(if *i == k { Q::one() } else { Q::zero() }),
        Expr::Sum(ts) => mk_sum(ts.iter().map(|t| derivative(t, k)).collect()),
        Expr::Product(fs) => {
            let mut terms = Vec::new();
            for i in 0..fs.len() {
                let d = derivative(&fs[i], k);
                if d.is_zero() {
                    continue;
                }
                let mut factors = fs.clone();
                factors[i] = d;
                terms.push(mk_product(factors));
            }
            mk_sum(terms)
        }
        Expr::Pow(b, n) => {
            let d = derivative(b, k);
            if *n == 0 || d.is_zero() {
                return Expr::zero();
            }
            mk_product(vec![Expr::Const(Q::from_integer((*n).into())), mk_pow((**b).clone(), n - 1), d])
        }
        Expr::Neg(b) => {
            let d = derivative(b, k);
            if d.is_zero() {
                d
            } else {
                mk_neg(d)
            }
        }
    }
}
