//! Cross-check the capsule builder against the brute-force reference,
//! which recomputes membership from the defining recursion without ever
//! materializing capsules. Demonstrates both the clean agreement and the
//! negative control: corrupt one dumped coordinate and the grid
//! comparison lights up.

use porous::construction::{Budgets, LevelSet, Window};
use porous::directions::DirectionSchedule;
use porous::geom::Point;
use porous::oracle::{compare_fields, default_band, Brute};
use porous::radius;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = DirectionSchedule::front_loaded(vec![(0, 1), (2, 1)])?;
    let window = Window::new(Point::ORIGIN, 1.0 / 32.0, 1.0 / 32.0)?;
    let ls = LevelSet::build(window, schedule.clone(), Budgets::default(), 2)?;
    let brute = Brute::new(schedule, 2);

    let clean = compare_fields(&ls, &brute, 2, 65, default_band(2))?;
    println!(
        "clean build:     {} pixels compared, {} in the boundary band, {} disagreements",
        clean.compared,
        clean.skipped,
        clean.disagreements.len()
    );
    assert!(clean.disagreements.is_empty());

    // Truncate every level-1 capsule by rewriting one endpoint bit
    // pattern in the dump, then reload. The file stays well-formed, the
    // geometry is silently wrong, and only the reference notices.
    let needle = format!("{:#018x}", (1.0f64 / 16.0 + 3.0 * radius(1)).to_bits());
    let moved = format!("{:#018x}", (1.0f64 / 256.0).to_bits());
    let bad = LevelSet::load(&ls.dump().replace(&needle, &moved))?;
    let caught = compare_fields(&bad, &brute, 2, 65, default_band(2))?;
    println!(
        "corrupted build: {} pixels compared, {} disagreements (first at pixel {:?})",
        caught.compared,
        caught.disagreements.len(),
        caught.disagreements.first().map(|d| (d.0, d.1))
    );
    assert!(!caught.disagreements.is_empty());
    Ok(())
}
