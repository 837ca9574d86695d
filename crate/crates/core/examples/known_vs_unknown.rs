//! Decaying threshold (unknown MMD) against a fixed threshold (known MMD),
//! both with I_min = ceil(n^0.9).

use mmdscan::experiments::{run_plan, ExperimentPlan};

fn main() -> mmdscan::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/plans");
    let mut unknown = ExperimentPlan::from_path(format!("{dir}/test5.toml"))?;
    let mut known = ExperimentPlan::from_path(format!("{dir}/test5_known.toml"))?;
    unknown.trials = 60;
    known.trials = 60;
    let unknown = run_plan(&unknown)?;
    let known = run_plan(&known)?;

    println!("{:>5} {:>6} {:>9} {:>12} {:>10}", "n", "I_min", "t_n", "P_e unknown", "P_e known");
    for (u, k) in unknown.rows.iter().zip(&known.rows) {
        println!(
            "{:>5} {:>6} {:>9.4} {:>12.3} {:>10.3}",
            u.n, u.i_min, u.t, u.p_e, k.p_e
        );
    }
    Ok(())
}
