//! Porosity ladder at a fixed point, printed as the same CSV the CLI
//! emits. Ratios stay positive at every affordable scale because capsule
//! material sits within every scan radius of a near-boundary point.

use porous::construction::{Budgets, LevelSet, Window};
use porous::directions::DirectionSchedule;
use porous::geom::Point;
use porous::porosity::{scan_isotropic, write_scan_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Wider window so the coarsest scan scale still clears the fence.
    let window = Window::new(Point::ORIGIN, 1.0 / 16.0, 1.0 / 16.0)?;
    let ls = LevelSet::build(window, DirectionSchedule::diagonal(), Budgets::default(), 2)?;

    // A point hugging the level-1 capsule from outside: material sits
    // within every scan radius, so the whole ladder reports holes.
    let x = Point::new(0.0, 2.0f64.powi(-12) + 2.0f64.powi(-29));
    let scales: Vec<f64> = (6..=18).map(|e| 2.0f64.powi(-e)).collect();
    let records = scan_isotropic(&ls, 2, x, &scales)?;
    write_scan_csv(std::io::stdout().lock(), &records)?;

    let positive = records.iter().filter(|r| r.hole_radius > 0.0).count();
    assert_eq!(positive, records.len());
    eprintln!("{positive}/{} scales report a hole", records.len());
    Ok(())
}
