use mmdscan::intervals::{candidate_count, extension_universe, extensions, DyadicGrid};
use mmdscan::Interval;

fn main() -> mmdscan::Result<()> {
    // n = 12 is laid out on 16 and clipped.
    let grid = DyadicGrid::new(12)?;
    for cell in grid.cells().iter().filter(|c| c.level >= 2) {
        let clipped = if cell.is_clipped() { " (clipped)" } else { "" };
        println!("level {} index {}: {}{clipped}", cell.level, cell.index, cell.interval);
    }

    let interval = Interval::new(3, 9);
    let core = grid.max_dyadic_within(&interval)?;
    println!("largest dyadic cell inside {interval} is {core}");

    let grid = DyadicGrid::new(64)?;
    let family = extensions(&Interval::new(16, 8), 2, &grid)?;
    println!("2-level extensions of {}: {} intervals", family.base, family.len());
    for m in family.members.iter().take(6) {
        println!("  round {} {}", m.round, m.interval);
    }

    for l in 1..=4 {
        println!(
            "n = 64, l = {l}: {} extension intervals vs {} candidates of length >= 2",
            extension_universe(&grid, l).len(),
            candidate_count(64, 2)
        );
    }
    Ok(())
}
