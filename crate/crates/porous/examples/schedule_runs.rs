//! Direction schedules: the diagonal order visits every (angle, run
//! length) block exactly once, so each direction recurs with ever longer
//! runs; a front-loaded order drags a chosen run down to shallow levels
//! where building is cheap.

use porous::directions::{BlockOrder, DirectionSchedule};

fn print_levels(name: &str, s: &DirectionSchedule, upto: u64) {
    print!("{name:>12}:");
    for n in 1..=upto {
        let j = s.angle_index_at(n);
        let d = s.direction_at(n);
        print!(" {j}({:+.2},{:+.2})", d.x(), d.y());
    }
    println!();
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let diagonal = DirectionSchedule::diagonal();
    let front = DirectionSchedule::front_loaded(vec![(0, 1), (2, 3)])?;

    println!("angle index (direction) per level:");
    print_levels("diagonal", &diagonal, 12);
    print_levels("front-loaded", &front, 12);

    // Where does a run of three copies of angle 2 first start? The
    // location is the anchor level, the one just before the run.
    for (name, s) in [("diagonal", &diagonal), ("front-loaded", &front)] {
        let anchor = s.run_location(2, 3);
        println!(
            "{name}: run 2x3 occupies levels {}..={} (anchor {anchor}, covered: {})",
            anchor + 1,
            anchor + 3,
            s.run_covers(2, anchor, 3)
        );
        assert!(s.run_covers(2, anchor, 3));
    }

    // Block orders serialize to the same short names the CLI accepts.
    println!("orders: {} | {}", BlockOrder::Diagonal, front.block_order);
    Ok(())
}
