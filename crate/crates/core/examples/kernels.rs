use mmdscan::{Kernel, KernelKind};

fn main() -> mmdscan::Result<()> {
    let gaussian = Kernel::gaussian(1.0)?;
    let laplace = Kernel::new(KernelKind::Laplace, 1.0)?;

    println!("{:>6} {:>10} {:>10}", "d", "gaussian", "laplace");
    for d in [0.0, 0.5, 1.0, 2.0, 4.0] {
        println!(
            "{d:>6.1} {:>10.6} {:>10.6}",
            gaussian.evaluate(0.0, d)?,
            laplace.evaluate(0.0, d)?
        );
    }
    // Both kernels are bounded by K = 1, which enters the minimum-length bound.
    println!("bound K = {}", gaussian.bound());

    // Bandwidths must be positive; inputs must be finite.
    assert!(Kernel::gaussian(0.0).is_err());
    assert!(gaussian.evaluate(f64::NAN, 0.0).is_err());
    Ok(())
}
