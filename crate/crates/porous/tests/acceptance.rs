//! Acceptance gate: eight go/no-go checks at their stated tolerances,
//! one printed pass/fail line per criterion (run with `--nocapture` to
//! watch them land). Builds are shared across criteria and sized so the
//! whole gate stays desk-scale: a wide depth-3 window hosts every
//! lattice-parallel clause, and two front-loaded run windows host the
//! directional ones.

use std::sync::OnceLock;
use std::time::Instant;

use porous::construction::{Budgets, LevelSet, Membership, Window};
use porous::directions::DirectionSchedule;
use porous::geom::{Dir, Point};
use porous::oracle::{compare_fields, default_band, Brute};
use porous::porosity::{
    column_invariance_check, find_boundary_point, find_hole, find_insulated_point,
    find_thick_center, is_insulated, run_insulation, scan_directional, scan_isotropic,
    write_scan_csv, InsulationStatus,
};
use porous::raster::{rasterize, RasterMode};
use porous::sampling::sample_out_points;
use porous::{radius, spacing, Error, TOL};

/// Floor for every isotropic ratio on the scale ladder: the constructive
/// candidate puts a (radius(m) - TOL)-ball at every scale in bracket m,
/// worst at the top of the deepest bracket used (spacing(3)):
/// 2^-6 - TOL / 2^-18 = 2^-6 - 2^-22.
const RATIO_FLOOR: f64 = 1.0 / 64.0 - 1.0 / (1u64 << 22) as f64;

fn report(num: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {num} ({name}): {}: {detail}",
        if pass { "pass" } else { "fail" }
    );
    assert!(pass, "criterion {num} ({name}) failed: {detail}");
}

fn build(
    center: (f64, f64),
    half: f64,
    pad: f64,
    schedule: DirectionSchedule,
    depth: u32,
) -> LevelSet {
    let w = Window::new(Point::new(center.0, center.1), half, pad).unwrap();
    LevelSet::build(w, schedule, Budgets::default(), depth).unwrap()
}

/// Depth 3 over a wide window: hosts every n <= 3 lattice clause. The
/// window is sized so the core keeps twice the largest ladder scale of
/// clearance at the sampling margin, and the padding swallows the
/// level-1 walk budget.
fn wide() -> &'static LevelSet {
    static CELL: OnceLock<LevelSet> = OnceLock::new();
    CELL.get_or_init(|| {
        build((0.0, 0.0), 1.0 / 16.0, 1.0 / 32.0, DirectionSchedule::diagonal(), 3)
    })
}
const WIDE_MARGIN: f64 = 1.0 / 32.0;

/// Depth 3 with levels 2..=3 running north after an east anchor level.
fn run2() -> &'static LevelSet {
    static CELL: OnceLock<LevelSet> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = DirectionSchedule::front_loaded(vec![(0, 1), (2, 2)]).unwrap();
        build((0.0, 0.0), 1.0 / 64.0, 1.0 / 128.0, s, 3)
    })
}

/// Depth 4 with levels 2..=4 running north after an east anchor level.
fn run3() -> &'static LevelSet {
    static CELL: OnceLock<LevelSet> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = DirectionSchedule::front_loaded(vec![(0, 1), (2, 3)]).unwrap();
        build((0.0, 0.0), 1.0 / 128.0, 1.0 / 128.0, s, 4)
    })
}

/// Criterion 1's stated window, reused by the determinism checks.
fn c1_config() -> (Window, DirectionSchedule, u32) {
    (
        Window::new(Point::new(0.0, 0.0), 1.0 / 32.0, 1.0 / 32.0).unwrap(),
        DirectionSchedule::diagonal(),
        2,
    )
}

#[test]
fn c1_oracle_equivalence() {
    let started = Instant::now();
    let (w, s, depth) = c1_config();
    let ls = LevelSet::build(w, s.clone(), Budgets::default(), depth).unwrap();
    let brute = Brute::with_memo(s, depth, true);
    let rep = compare_fields(&ls, &brute, depth, 256, default_band(depth)).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    let total = 256u64 * 256;
    let pass = rep.disagreements.is_empty()
        && rep.compared >= total * 9 / 10
        && elapsed < 300.0;
    report(
        1,
        "oracle equivalence",
        pass,
        &format!(
            "{} disagreements, {}/{total} cells compared outside the band, {elapsed:.1}s",
            rep.disagreements.len(),
            rep.compared
        ),
    );
}

#[test]
fn c2_boundary_walks_stay_local() {
    let ls = wide();
    let mut walks = 0u32;
    let mut failures = 0u32;
    for n in 1..=3 {
        let bound = 2.0 * spacing(n);
        for x in sample_out_points(ls, 3, 1000, WIDE_MARGIN, 0xC2 + n as u64).unwrap() {
            walks += 1;
            let z = find_boundary_point(ls, n, x).unwrap();
            let on_surface = ls.signed_distance(n, z).unwrap().abs() <= TOL;
            if !(x.dist(z) < bound && on_surface) {
                failures += 1;
            }
        }
    }
    report(
        2,
        "boundary point locality",
        failures == 0 && walks == 3000,
        &format!("{}/{walks} walks landed on the surface within 2 spacings", walks - failures),
    );
}

#[test]
fn c3_thick_centers_at_exact_radii() {
    // Radii are bit-exact dyadics on every build the gate touches.
    let mut radii_exact = true;
    for ls in [wide(), run2(), run3()] {
        for n in 1..=ls.depth() {
            let lvl = ls.level(n);
            radii_exact &= lvl.radius.to_bits() == radius(n).to_bits();
            radii_exact &= lvl.caps.iter().all(|c| c.r.to_bits() == radius(n).to_bits());
        }
    }

    let ls = wide();
    let mut centers = 0u32;
    let mut failures = 0u32;
    for n in 1..=3 {
        for x in sample_out_points(ls, 3, 1000, WIDE_MARGIN, 0xC3 + n as u64).unwrap() {
            centers += 1;
            let z = find_boundary_point(ls, n, x).unwrap();
            let hole = find_thick_center(ls, n, z).unwrap();
            let ok = hole.radius >= radius(n) - TOL
                && z.dist(hole.center) <= radius(n) + TOL
                && ls.ball_inside(n, hole.center, radius(n) - TOL).unwrap().is_some();
            if !ok {
                failures += 1;
            }
        }
    }
    report(
        3,
        "full-radius interior balls",
        radii_exact && failures == 0 && centers == 3000,
        &format!(
            "radii bit-exact: {radii_exact}; {}/{centers} centers hold a radius(n)-TOL ball",
            centers - failures
        ),
    );
}

#[test]
fn c4_holes_near_every_out_point_at_every_scale() {
    let ls = wide();
    let mut holes = 0u32;
    let mut hole_failures = 0u32;
    for n in 1..=3 {
        for x in sample_out_points(ls, 3, 1000, WIDE_MARGIN, 0xC4 + n as u64).unwrap() {
            holes += 1;
            let hole = find_hole(ls, n, x).unwrap();
            let ok = hole.radius >= radius(n) - TOL && x.dist(hole.center) < 4.0 * spacing(n);
            if !ok {
                hole_failures += 1;
            }
        }
    }

    // Dyadic rungs plus off-rung midpoints sweep every bracket
    // [radius(n), spacing(n)] for n <= 3.
    let mut scales: Vec<f64> = (6..=24).map(|k| 2f64.powi(-k)).collect();
    scales.extend((7..=24).map(|k| 1.5 * 2f64.powi(-k)));
    let mut scans = 0u64;
    let mut dead_scales = 0u64;
    let mut min_ratio = f64::INFINITY;
    for x in sample_out_points(ls, 3, 1000, WIDE_MARGIN, 0xC4).unwrap() {
        for rec in scan_isotropic(ls, 3, x, &scales).unwrap() {
            scans += 1;
            if rec.ratio <= 0.0 {
                dead_scales += 1;
            } else if rec.ratio < min_ratio {
                min_ratio = rec.ratio;
            }
        }
    }

    let pass = hole_failures == 0 && holes == 3000 && dead_scales == 0 && min_ratio >= RATIO_FLOOR;
    report(
        4,
        "certified holes at all scales",
        pass,
        &format!(
            "{}/{holes} constructive holes in bound; {scans} scans, {dead_scales} empty; \
             ladder ratio floor {min_ratio:.9} (golden floor {RATIO_FLOOR:.9})",
            holes - hole_failures
        ),
    );
}

/// Insulated points for one run build: walk from each seed, skip honest
/// exhaustion, and keep walks that stayed deep enough in the core to
/// host a scan at `scale`.
fn insulated_points(ls: &LevelSet, seeds: &[Point], scale: f64) -> Vec<Point> {
    let mut found = Vec::new();
    for &w in seeds {
        match find_insulated_point(ls, 1, w) {
            Ok(z) if ls.window.core().depth_inside(z) >= 2.0 * scale => found.push(z),
            Ok(_) | Err(Error::DepthExhausted) => {}
            Err(e) => panic!("insulated-point walk broke: {e}"),
        }
    }
    found
}

#[test]
fn c5_directional_scans_collapse_on_runs() {
    let started = Instant::now();
    let north = Dir::NORTH;
    let scale = spacing(2);
    let mut detail = String::new();
    let mut pass = true;

    for (ls, run_len, margin) in
        [(run2(), 2u32, 1.0 / 128.0), (run3(), 3, 1.0 / 256.0)]
    {
        let depth = 1 + run_len;
        let bound = 2f64.powi(-(6 * (1 + run_len as i32) - 1));
        let seeds = sample_out_points(ls, depth, 200, margin, 0xC5).unwrap();
        let points = insulated_points(ls, &seeds, scale);
        let mut max_dir = 0f64;
        let mut min_iso = f64::INFINITY;
        for &z in &points {
            assert_eq!(
                run_insulation(ls, 2, run_len, z).unwrap(),
                InsulationStatus::Holds { anchor: 1 }
            );
            let dir = &scan_directional(ls, depth, z, north, &[scale]).unwrap()[0];
            let iso = &scan_isotropic(ls, depth, z, &[scale]).unwrap()[0];
            max_dir = max_dir.max(dir.hole_radius);
            min_iso = min_iso.min(iso.ratio);
            pass &= dir.hole_radius <= bound && iso.ratio >= RATIO_FLOOR;
        }
        pass &= points.len() >= 100;
        detail.push_str(&format!(
            "N={run_len}: {}/200 points, max directional hole {max_dir:.3e} (bound {bound:.3e}), \
             min iso ratio {min_iso:.6}; ",
            points.len()
        ));
    }

    let elapsed = started.elapsed().as_secs_f64();
    pass &= elapsed < 600.0;
    report(5, "directional collapse on runs", pass, &format!("{detail}{elapsed:.1}s"));
}

#[test]
fn c6_membership_is_column_invariant_inside_runs() {
    let ls = run2();
    let mut pairs = 0u64;
    let mut bad_pairs = 0u64;
    let mut bad_capsules = 0u64;
    for (i, x) in [
        Point::new(3.7 / 16384.0, 1.0 / 512.0),
        Point::new(-2.9 / 16384.0, -1.0 / 700.0),
    ]
    .into_iter()
    .enumerate()
    {
        let rep = column_invariance_check(ls, 1, 2, x, 5000, 0xC6 + i as u64).unwrap();
        pairs += rep.pairs_checked;
        bad_pairs += rep.pair_disagreements;
        bad_capsules += rep.column_violations;
    }
    report(
        6,
        "column invariance",
        pairs == 10_000 && bad_pairs == 0 && bad_capsules == 0,
        &format!(
            "{pairs} pairs, {bad_pairs} membership disagreements, \
             {bad_capsules} separation violations"
        ),
    );
}

#[test]
fn c7_insulated_points_are_found_nearby() {
    let ls = wide();
    let seeds = sample_out_points(ls, 3, 100, WIDE_MARGIN, 0xC7).unwrap();
    let mut exhausted = 0u32;
    let mut false_certificates = 0u32;
    let mut far = 0u32;
    for &w in &seeds {
        match find_insulated_point(ls, 1, w) {
            Ok(z) => {
                let genuine = is_insulated(ls, 1, z).unwrap()
                    && ls.membership(3, z).unwrap() == Membership::Out;
                if !genuine {
                    false_certificates += 1;
                }
                if w.dist(z) >= 1.0 {
                    far += 1;
                }
            }
            Err(Error::DepthExhausted) => exhausted += 1,
            Err(e) => panic!("search errored instead of reporting exhaustion: {e}"),
        }
    }
    report(
        7,
        "insulated point density",
        exhausted <= 5 && false_certificates == 0 && far == 0,
        &format!(
            "{}/100 found within distance 1, {exhausted} exhausted (cap 5), \
             {false_certificates} false certificates",
            100 - exhausted
        ),
    );
}

#[test]
fn c8_outputs_are_byte_identical_across_runs() {
    let (w, s, depth) = c1_config();
    let a = LevelSet::build(w, s.clone(), Budgets::default(), depth).unwrap();
    let b = LevelSet::build(w, s, Budgets::default(), depth).unwrap();

    let dump_a = a.dump();
    let dumps_equal = dump_a == b.dump();
    let reload_stable = LevelSet::load(&dump_a).unwrap().dump() == dump_a;

    let mut pgms = Vec::new();
    for ls in [&a, &b, &a] {
        let raster = rasterize(ls, depth, 128, RasterMode::Distance).unwrap();
        pgms.push(raster.pgm_bytes());
    }
    let pgms_equal = pgms[0] == pgms[1] && pgms[0] == pgms[2];

    let x = Point::new(1.0 / 512.0 + 1.0 / 16384.0, 5.0 / 1024.0 + 3.0 / 16384.0);
    let scales = [spacing(2), 1.5 * spacing(2), spacing(3)];
    let mut csvs = Vec::new();
    for ls in [&a, &b, &a] {
        let mut buf = Vec::new();
        write_scan_csv(&mut buf, &scan_isotropic(ls, depth, x, &scales).unwrap()).unwrap();
        csvs.push(buf);
    }
    let csvs_equal = csvs[0] == csvs[1] && csvs[0] == csvs[2];

    report(
        8,
        "byte-identical reruns",
        dumps_equal && reload_stable && pgms_equal && csvs_equal && !csvs[0].is_empty(),
        &format!(
            "dump {} bytes, PGM {} bytes, CSV {} bytes, all stable across rebuilds and reloads",
            dump_a.len(),
            pgms[0].len(),
            csvs[0].len()
        ),
    );
}
