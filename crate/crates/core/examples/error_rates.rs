//! Runs an experiment plan and prints the error table.
//!
//! ```text
//! cargo run --release --example error_rates -- crates/core/plans/test4.toml
//! ```

use mmdscan::experiments::{run_plan, ExperimentPlan};

fn main() -> mmdscan::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/plans/test1.toml").to_string());
    let mut plan = ExperimentPlan::from_path(&path)?;
    if std::env::args().nth(1).is_none() {
        plan.trials = 50;
    }
    let table = run_plan(&plan)?;

    println!("{:>5} {:>6} {:>7} {:>8} {:>7} {:>7}", "n", "I_min", "ratio", "t", "P_e", "se");
    for r in &table.rows {
        println!(
            "{:>5} {:>6} {:>7.2} {:>8.4} {:>7.3} {:>7.3}",
            r.n, r.i_min, r.i_min_ratio, r.t, r.p_e, r.std_error
        );
    }
    println!("seed {}", table.seed);
    Ok(())
}
