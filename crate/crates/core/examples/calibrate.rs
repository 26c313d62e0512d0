//! Prints the d³-scaled residuals of `Q_d*` and `A_d* - Q_d*` over d ∈ [50, 400]
//! and the boundedness constant (twice the largest absolute residual).

use coulomb_sharp::exact::to_f64;
use coulomb_sharp::verification::asymptotic_residuals;

fn main() {
    let mut max_q: f64 = 0.0;
    let mut max_a: f64 = 0.0;
    for d in 50..=400u32 {
        let r = asymptotic_residuals(d, 40).expect("residuals");
        let (q, a) = (to_f64(&r.r_q).abs(), r.r_a.to_f64().abs());
        if d % 25 == 0 {
            println!("d={d:4} r_Q={q:.6} r_A={a:.6}");
        }
        max_q = max_q.max(q);
        max_a = max_a.max(a);
    }
    println!("max |r_Q| = {max_q:.6}");
    println!("max |r_A| = {max_a:.6}");
    println!("C* = {:.6}", 2.0 * max_q.max(max_a));
}
