//! Per-interval statistics from precomputed Gram summaries.

use mmdscan::experiments::{plant_instance, DistributionSpec};
use mmdscan::{mmd2_unbiased, GramSummaries, Interval, Kernel, SummaryOptions};

fn main() -> mmdscan::Result<()> {
    let p = DistributionSpec::gaussian(0.0, 0.5);
    let q = DistributionSpec::symmetric_gaussian_pair(2.0, 0.5);
    let series = plant_instance(&p, &q, 64, Some(Interval::new(8, 16)), 7)?;
    let kernel = Kernel::gaussian(1.0)?;

    let dense = GramSummaries::build(&series, &kernel, SummaryOptions::dense())?;
    let streaming = GramSummaries::build(&series, &kernel, SummaryOptions::streaming())?;

    for interval in [Interval::new(8, 16), Interval::new(30, 16), Interval::new(0, 64)] {
        let direct = mmd2_unbiased(
            series.reference(),
            &series.observed()[interval.range()],
            &kernel,
        )?;
        println!(
            "{interval:>9}  dense {:+.6}  streaming {:+.6}  direct {:+.6}",
            dense.interval_statistic(&interval)?,
            streaming.interval_statistic(&interval)?,
            direct
        );
    }

    // Growing an interval one node at a time costs O(|I|) per step.
    let mut acc = streaming.accumulator(20);
    acc.grow_right();
    while acc.grow_left() && acc.start() > 4 {}
    println!("grown to {}: {:+.6}", acc.interval(), acc.statistic());
    Ok(())
}
