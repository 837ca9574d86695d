//! Unbiased MMD² between two sample sets, against the closed form.

use mmdscan::experiments::{sample, DistributionSpec};
use mmdscan::mmd::mmd2_population_gaussian;
use mmdscan::{mmd2_unbiased, Kernel};

fn main() -> mmdscan::Result<()> {
    let kernel = Kernel::gaussian(1.0)?;
    let p = DistributionSpec::gaussian(0.0, 1.0);
    let q = DistributionSpec::gaussian(1.0, 1.0);
    let exact = mmd2_population_gaussian(0.0, 1.0, 1.0, 1.0, 1.0)?;

    for m in [50, 200, 1000, 4000] {
        let x = sample(&p, m, 1)?;
        let y = sample(&q, m, 2)?;
        let same = sample(&p, m, 3)?;
        println!(
            "m = {m:>5}: N(0,1) vs N(1,1) {:+.5}   N(0,1) vs N(0,1) {:+.5}",
            mmd2_unbiased(&x, &y, &kernel)?,
            mmd2_unbiased(&x, &same, &kernel)?
        );
    }
    println!("population MMD² = {exact:.5}");
    // The estimator is unbiased, so it can dip below zero when p = q.
    Ok(())
}
