//! Multiscale scan: dyadic pre-scan plus extensions, with diagnostics.

use mmdscan::experiments::{plant_instance, DistributionSpec};
use mmdscan::intervals::candidate_count;
use mmdscan::{scan, Algorithm, Interval, Kernel, TestConfig, ThresholdRule};

fn main() -> mmdscan::Result<()> {
    let p = DistributionSpec::gaussian(0.0, 0.5);
    let q = DistributionSpec::symmetric_gaussian_pair(2.0, 0.5);
    let kernel = Kernel::gaussian(1.0)?;

    for n in [256, 1024, 4096] {
        let i_min = (8.0 * (n as f64).ln()).round() as usize;
        let config = TestConfig::new(i_min, ThresholdRule::Fixed { t: 0.25 })
            .with_algorithm(Algorithm::Multiscale);
        let anomaly = Interval::new(n / 3, i_min);
        for planted in [false, true] {
            let series = plant_instance(&p, &q, n, planted.then_some(anomaly), n as u64)?;
            let out = scan(&series, &kernel, &config)?;
            let d = out.multiscale.as_ref().expect("multiscale diagnostics");
            println!(
                "n = {n:>4} I_min = {i_min:>2} {:>7}: {} via {:?}, kept {}/{} cells, {} evaluations (exhaustive: {})",
                if planted { "planted" } else { "null" },
                out.decision,
                out.trigger,
                d.prescan_kept,
                d.prescan_evaluated,
                out.evaluations,
                candidate_count(n, i_min)
            );
        }
    }
    Ok(())
}
