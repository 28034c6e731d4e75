//! From an outside point, walk to the boundary and certify a full-radius
//! hole nearby. The hole radius always comes out as radius(n) minus the
//! global tolerance, and the center stays within a few spacings.

use porous::construction::{Budgets, LevelSet, Window};
use porous::directions::DirectionSchedule;
use porous::geom::Point;
use porous::porosity::{find_boundary_point_traced, find_hole};
use porous::{radius, spacing, TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let window = Window::new(Point::ORIGIN, 1.0 / 32.0, 1.0 / 32.0)?;
    // Level 1 east, level 2 north: generic points stay outside both.
    let schedule = DirectionSchedule::front_loaded(vec![(0, 1), (2, 1)])?;
    let ls = LevelSet::build(window, schedule, Budgets::default(), 2)?;

    let seeds = [
        Point::new(1.0 / 8192.0, 3.0 / 8192.0),
        Point::new(0.0111, 0.0039),
        Point::new(-0.0201, -0.0072),
    ];
    for n in 1..=2 {
        for x in seeds {
            let (z, case) = find_boundary_point_traced(&ls, n, x)?;
            let hole = find_hole(&ls, n, x)?;
            println!(
                "n={n} seed ({:+.5}, {:+.5}): boundary at ({:+.7}, {:+.7}) [{case:?}], \
                 hole r={:.3e} at ({:+.7}, {:+.7})",
                x.x, x.y, z.x, z.y, hole.radius, hole.center.x, hole.center.y
            );
            assert!(hole.radius >= radius(n) - TOL);
            assert!(x.dist(hole.center) < 4.0 * spacing(n));
        }
    }
    println!("all holes at full capsule radius, centers within 4 spacings");
    Ok(())
}
