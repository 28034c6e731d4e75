//! The headline contrast: at an insulated point inside a run of levels
//! sharing one direction, the isotropic scanner still finds holes, but
//! the directional scanner along the run direction finds nothing at all.
//! Scanned at r = 2^-12, matching a run of two east-pointing levels
//! placed right after level 1.

use porous::construction::{Budgets, LevelSet, Window};
use porous::directions::DirectionSchedule;
use porous::geom::Point;
use porous::porosity::{find_insulated_point, run_insulation, scan_directional, scan_isotropic, InsulationStatus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Levels: 1 east, then the run: 2 and 3 north (angle index 2).
    let schedule = DirectionSchedule::front_loaded(vec![(0, 1), (2, 2)])?;
    let run_dir = schedule.direction_at(2);
    let window = Window::new(Point::ORIGIN, 1.0 / 64.0, 1.0 / 128.0)?;
    let ls = LevelSet::build(window, schedule, Budgets::default(), 3)?;

    let w = Point::new(1.0 / 512.0, 1.0 / 512.0);
    let z = find_insulated_point(&ls, 1, w)?;
    match run_insulation(&ls, 2, 2, z)? {
        InsulationStatus::Holds { anchor } => println!(
            "insulated point ({:+.9}, {:+.9}) holds at anchor {anchor}",
            z.x, z.y
        ),
        other => println!("unexpected insulation status {other:?}"),
    }

    let scale = [1.0 / 4096.0];
    let iso = &scan_isotropic(&ls, 3, z, &scale)?[0];
    let dir = &scan_directional(&ls, 3, z, run_dir, &scale)?[0];
    println!("isotropic   r=2^-12: hole {:.3e}, ratio {:.3e}", iso.hole_radius, iso.ratio);
    println!("directional r=2^-12: hole {:.3e}, ratio {:.3e}", dir.hole_radius, dir.ratio);
    assert!(iso.hole_radius > 0.0);
    assert_eq!(dir.hole_radius, 0.0, "the run direction admits no hole");
    Ok(())
}
