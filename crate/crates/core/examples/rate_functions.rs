//! The four deviation rates at a fixed aspect ratio, their inverses, and the
//! union-bound level t0 each one produces.

use riclab::rate::union_level;
use riclab::{t_zero, GrowthPoint, RateModel};

fn main() -> riclab::Result<()> {
    let rhobar = 0.04;
    let models = [
        ("tw", RateModel::tw(1.0)),
        ("ds", RateModel::ds()),
        ("lr", RateModel::lr(1.0)),
        ("fs", RateModel::fs(837.0)),
    ];

    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "t", "tw", "ds", "lr", "fs");
    for t in [0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0] {
        print!("{t:>6}");
        for (_, m) in &models {
            print!(" {:>12.4e}", m.eval(rhobar, t)?);
        }
        println!();
    }

    let point = GrowthPoint::new(0.5, rhobar)?;
    let u = union_level(&point)?;
    println!("\nunion level H(rhobar*delta)/delta = {u:.6}");
    for (name, m) in &models {
        match t_zero(m, &point) {
            Ok(t0) => println!("  {name}: t0 = {t0:.6e}  (W(t0) = {:.6})", m.eval(rhobar, t0)?),
            Err(e) => println!("  {name}: {e}"),
        }
    }
    Ok(())
}
