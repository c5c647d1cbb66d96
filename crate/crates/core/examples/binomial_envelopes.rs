//! Exact log-binomials against the entropy envelope, the Stirling remainder
//! theta(z), and the two central-binomial tail inequalities.

use riclab::{binomial_envelope_theta, binomial_log_bound_check, log_binomial, shannon_entropy, stirling_theta};

fn main() -> riclab::Result<()> {
    let p = 60;
    println!("{:>3} {:>12} {:>12} {:>10}", "r", "ln C(p,r)", "envelope", "slack");
    for r in [1, 5, 10, 20, 30, 45, 59] {
        let exact = log_binomial(p, r)?;
        let env = binomial_envelope_theta(p, r)?.ln() + p as f64 * shannon_entropy(r as f64 / p as f64)?;
        println!("{r:>3} {exact:>12.5} {env:>12.5} {:>10.5}", env - exact);
    }

    println!();
    for z in [0.01, 0.1, 1.0, 10.0, 100.0] {
        println!("theta({z}) = {:.15}", stirling_theta(z)?);
    }

    println!();
    for (m, n) in [(10, 1), (10, 10), (100, 7), (500, 300)] {
        let (a, b) = binomial_log_bound_check(m, n)?;
        println!(
            "m={m:<4} n={n:<4} first {:>9.4} <= {:>9.4}   second {:>9.4} <= {:>9.4}",
            a.lhs, a.rhs, b.lhs, b.rhs
        );
    }
    Ok(())
}
