//! Polynomial expressions with rational coefficients.

mod diff;
mod parse;

pub use parse::{parse, parse_list};

use crate::linalg::Field;
use crate::rational::{fmt_q, Q};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Q),
    Var(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn constant(c: Q) -> Expr {
        Expr::Const(c)
    }

    pub fn zero() -> Expr {
        Expr::Const(Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    /// `Σ c_k e_k`, dropping zero coefficients.
    pub fn linear_combination(coeffs: &[Q], exprs: &[Expr]) -> Expr {
        let terms: Vec<Expr> = coeffs
            .iter()
            .zip(exprs)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| {
                if c.is_one() {
                    e.clone()
                } else if (-c).is_one() {
                    Expr::Neg(Box::new(e.clone()))
                } else {
                    Expr::Product(vec![Expr::Const(c.clone()), e.clone()])
                }
            })
            .collect();
        diff::mk_sum(terms)
    }

    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Sum(v) | Expr::Product(v) => v.iter().map(Expr::arity).max().unwrap_or(0),
            Expr::Pow(b, _) | Expr::Neg(b) => b.arity(),
        }
    }

    /// Total degree bound (exact for expressions without cancellation).
    pub fn degree(&self) -> u32 {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(_) => 1,
            Expr::Sum(v) => v.iter().map(Expr::degree).max().unwrap_or(0),
            Expr::Product(v) => v.iter().map(Expr::degree).sum(),
            Expr::Pow(b, n) => b.degree() * n,
            Expr::Neg(b) => b.degree(),
        }
    }

    pub fn eval<F: Field>(&self, x: &[F]) -> F {
        match self {
            Expr::Const(c) => F::from_q(c),
            Expr::Var(i) => x[*i].clone(),
            Expr::Sum(v) => v.iter().fold(F::fzero(), |acc, e| acc + e.eval(x)),
            Expr::Product(v) => v.iter().fold(F::fone(), |acc, e| acc * e.eval(x)),
            Expr::Pow(b, n) => pow(b.eval(x), *n),
            Expr::Neg(b) => -b.eval(x),
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }

    /// Partial derivative with respect to variable `k`.
    pub fn derivative(&self, k: usize) -> Expr {
        diff::derivative(self, k)
    }

    pub fn gradient(&self, dim: usize) -> VectorFunc {
        VectorFunc::new((0..dim).map(|k| self.derivative(k)).collect(), dim)
    }

    /// Coefficients and constant term when the expression is affine.
    pub fn affine_parts(&self, dim: usize) -> Option<(Vec<Q>, Q)> {
        if self.degree() > 1 {
            return None;
        }
        let zero = vec![Q::zero(); dim];
        let grad = self.gradient(dim).eval(&zero);
        Some((grad, self.eval(&zero)))
    }

    /// Renders with the given variable names; `parse` of the output yields `self` back.
    pub fn display(&self, names: &[String]) -> String {
        let mut s = String::new();
        print_expr(self, names, &mut s);
        s
    }
}

fn pow<F: Field>(mut b: F, mut n: u32) -> F {
    let mut acc = F::fone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * b.clone();
        }
        n >>= 1;
        if n > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

fn var_name(i: usize, names: &[String]) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))
}

fn print_expr(e: &Expr, names: &[String], out: &mut String) {
    match e {
        Expr::Sum(terms) if !terms.is_empty() => {
            for (i, t) in terms.iter().enumerate() {
                if i == 0 {
                    print_sum_term(t, names, out);
                    continue;
                }
                match t {
                    Expr::Neg(inner) => {
                        out.push_str(" - ");
                        match inner.as_ref() {
                            Expr::Product(_) => print_sum_term(inner, names, out),
                            _ => print_neg_body(inner, names, out),
                        }
                    }
                    Expr::Const(c) if c.is_negative() => {
                        out.push_str(" - ");
                        out.push_str(&fmt_q(&-c));
                    }
                    _ => {
                        out.push_str(" + ");
                        print_sum_term(t, names, out);
                    }
                }
            }
        }
        _ => print_sum_term(e, names, out),
    }
}

fn print_sum_term(e: &Expr, names: &[String], out: &mut String) {
    match e {
        Expr::Sum(_) => paren(e, names, out),
        Expr::Product(fs) if !fs.is_empty() => {
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                let negative = matches!(f, Expr::Neg(_)) || matches!(f, Expr::Const(c) if c.is_negative());
                if matches!(f, Expr::Sum(_) | Expr::Product(_)) || (i > 0 && negative) {
                    paren(f, names, out);
                } else {
                    print_unary(f, names, out);
                }
            }
        }
        _ => print_unary(e, names, out),
    }
}

fn print_neg_body(inner: &Expr, names: &[String], out: &mut String) {
    match inner {
        Expr::Sum(_) | Expr::Product(_) => paren(inner, names, out),
        Expr::Const(c) if c.is_negative() => paren(inner, names, out),
        _ => print_unary(inner, names, out),
    }
}

fn print_unary(e: &Expr, names: &[String], out: &mut String) {
    match e {
        Expr::Const(c) => out.push_str(&fmt_q(c)),
        Expr::Var(i) => out.push_str(&var_name(*i, names)),
        Expr::Neg(inner) => {
            out.push('-');
            print_neg_body(inner, names, out);
        }
        Expr::Pow(b, n) => {
            let atomic = match b.as_ref() {
                Expr::Var(_) => true,
                Expr::Const(c) => !c.is_negative() && c.is_integer(),
                _ => false,
            };
            if atomic {
                print_unary(b, names, out);
            } else {
                paren(b, names, out);
            }
            out.push('^');
            out.push_str(&n.to_string());
        }
        Expr::Sum(v) | Expr::Product(v) if v.is_empty() => {
            out.push_str(if matches!(e, Expr::Sum(_)) { "0" } else { "1" })
        }
        _ => paren(e, names, out),
    }
}

fn paren(e: &Expr, names: &[String], out: &mut String) {
    out.push('(');
    print_expr(e, names, out);
    out.push(')');
}

/// A map `R^input_dim -> R^output_dim` given componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorFunc {
    pub components: Vec<Expr>,
    pub input_dim: usize,
}

impl VectorFunc {
    pub fn new(components: Vec<Expr>, input_dim: usize) -> Self {
        debug_assert!(components.iter().all(|c| c.arity() <= input_dim));
        VectorFunc { components, input_dim }
    }

    pub fn identity(dim: usize) -> Self {
        VectorFunc::new((0..dim).map(Expr::Var).collect(), dim)
    }

    pub fn output_dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval<F: Field>(&self, x: &[F]) -> Vec<F> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.eval(x)
    }

    /// Symbolic Jacobian, one gradient per component.
    pub fn jacobian(&self) -> Jacobian {
        Jacobian { rows: self.components.iter().map(|c| c.gradient(self.input_dim)).collect() }
    }

    pub fn is_affine(&self) -> bool {
        self.components.iter().all(|c| c.degree() <= 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Jacobian {
    pub rows: Vec<VectorFunc>,
}

impl Jacobian {
    pub fn eval<F: Field>(&self, x: &[F]) -> Vec<Vec<F>> {
        self.rows.iter().map(|r| r.eval(x)).collect()
    }

    /// `J(x)^T beta`.
    pub fn transpose_apply<F: Field>(&self, x: &[F], beta: &[F]) -> Vec<F> {
        let rows = self.eval(x);
        let n = self.rows.first().map_or(0, |r| r.input_dim);
        (0..n)
            .map(|j| rows.iter().zip(beta).fold(F::fzero(), |acc, (r, b)| acc + r[j].clone() * b.clone()))
            .collect()
    }
}

/// Evaluates the Jacobian of `f` at `x` as a row-major matrix.
pub fn jacobian_at<F: Field>(f: &VectorFunc, x: &[F]) -> Vec<Vec<F>> {
    f.jacobian().eval(x)
}
