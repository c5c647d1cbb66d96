//! The constant chain behind the Rademacher deviation rate, and the resulting
//! tail bound for a few matrix sizes.

use riclab::fs::{fs_tail_bound, verify_constant_chain};

fn main() -> riclab::Result<()> {
    let report = verify_constant_chain();
    for e in &report.entries {
        let status = match (e.consistent, e.known_erratum) {
            (true, false) => "ok",
            (false, true) => "erratum, detected",
            _ => "MISMATCH",
        };
        println!("{:<52} {:>14.3} vs {:>10.1}  {status}", e.name, e.lhs, e.rhs);
    }

    println!();
    for (m_rows, n_cols) in [(60, 600), (200, 2000), (1000, 10_000)] {
        let t = fs_tail_bound(m_rows, n_cols, 0.05, 1.0)?;
        println!(
            "M={m_rows:<5} N={n_cols:<6} eps=0.05: ln bound {:>12.2}{}",
            t.log_bound,
            if t.vacuous { " (vacuous)" } else { "" }
        );
    }
    Ok(())
}
