// Parse polynomial expressions, differentiate symbolically and evaluate exactly.

use mpdc::expr::parse;
use mpdc::rational::{fmt_q, fmt_vec, qf};

pub fn run() -> mpdc::Result<()> {
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let e = parse("x^2 + x*y - 3*z^3 + 1/2", &vars)?;
    println!("f = {}", e.display(&vars));
    let grad = e.gradient(vars.len());
    for (k, d) in grad.components.iter().enumerate() {
        println!("df/d{} = {}", vars[k], d.display(&vars));
    }
    let x = vec![qf(1, 2), qf(-1, 3), qf(2, 1)];
    println!("f{} = {}", fmt_vec(&x), fmt_q(&e.eval(&x)));
    println!("grad f = {}", fmt_vec(&grad.eval(&x)));
    println!("f(0.5, -0.3333, 2) ~ {:.6}", e.eval_f64(&[0.5, -1.0 / 3.0, 2.0]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
