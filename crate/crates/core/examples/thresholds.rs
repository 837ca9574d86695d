use mmdscan::detector::{i_min_bound, threshold_decaying, threshold_known};
use mmdscan::experiments::{population_mmd2, DistributionSpec};
use mmdscan::Kernel;

fn main() -> mmdscan::Result<()> {
    let kernel = Kernel::gaussian(1.0)?;
    let p = DistributionSpec::gaussian(0.0, 0.5);
    let q = DistributionSpec::symmetric_gaussian_pair(2.0, 0.5);
    let mmd2 = population_mmd2(&p, &q, &kernel).expect("Gaussian family");
    println!("MMD²[p, q] = {mmd2:.4}, known-MMD threshold (δ = 0.5): {:.4}", threshold_known(mmd2, 0.5)?);

    println!("{:>6} {:>10} {:>18}", "n", "t_n", "I_min bound (t=.25)");
    for n in [50, 100, 500, 1000, 10_000, 1_000_000] {
        println!(
            "{n:>6} {:>10.4} {:>18}",
            threshold_decaying(n),
            i_min_bound(kernel.bound(), 0.25, 0.5, n)?
        );
    }
    Ok(())
}
