//! Inside a column bounded by adjacent lines of a run level, membership
//! is invariant under sliding along the run direction, and capsules of
//! the run levels keep their guaranteed separation from the column.
//! Both facts are sampled here over a run of two north levels.

use porous::construction::{Budgets, LevelSet, Window};
use porous::directions::DirectionSchedule;
use porous::geom::Point;
use porous::porosity::column_invariance_check;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = DirectionSchedule::front_loaded(vec![(0, 1), (2, 2)])?;
    let window = Window::new(Point::ORIGIN, 1.0 / 64.0, 1.0 / 128.0)?;
    let ls = LevelSet::build(window, schedule, Budgets::default(), 3)?;

    // Offset keeps the probe off the run-level lattice lines themselves.
    let x = Point::new(1.0 / 512.0 + 1.0 / 16384.0, 1.0 / 512.0);
    let report = column_invariance_check(&ls, 1, 2, x, 2000, 42)?;
    println!(
        "column through ({}, {}), levels {}..={}:",
        x.x,
        x.y,
        report.n + 1,
        report.n + report.levels_checked
    );
    println!(
        "  {} same-offset pairs compared ({} boundary skips): {} disagreements",
        report.pairs_checked, report.boundary_skips, report.pair_disagreements
    );
    println!(
        "  {} capsules checked against the column: {} separation violations, min separation {:.3e}",
        report.capsules_checked, report.column_violations, report.min_separation
    );
    assert_eq!(report.pair_disagreements, 0);
    assert_eq!(report.column_violations, 0);
    Ok(())
}
