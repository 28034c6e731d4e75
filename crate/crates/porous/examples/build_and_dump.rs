//! Build a two-level set, dump it, reload it, and prove the round trip
//! is byte-exact.

use porous::construction::{Budgets, LevelSet, Window};
use porous::directions::DirectionSchedule;
use porous::geom::Point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let window = Window::new(Point::ORIGIN, 1.0 / 32.0, 1.0 / 32.0)?;
    let schedule = DirectionSchedule::diagonal();
    let ls = LevelSet::build(window, schedule, Budgets::default(), 2)?;

    for n in 1..=ls.depth() {
        let lvl = ls.level(n);
        println!(
            "level {n}: {} lattice lines, {} surviving capsules, radius {}",
            lvl.ks.len(),
            lvl.caps.len(),
            lvl.radius
        );
    }

    let text = ls.dump();
    let path = std::env::temp_dir().join("porous_demo.lvl");
    std::fs::write(&path, &text)?;
    let reloaded = LevelSet::load(&std::fs::read_to_string(&path)?)?;
    assert_eq!(text, reloaded.dump(), "round trip must be byte-identical");
    println!("dump: {} bytes -> {} (reload verified)", text.len(), path.display());
    Ok(())
}
