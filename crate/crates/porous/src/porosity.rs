//! Hole finders and porosity scanners.
//!
//! The construction leaves the complement riddled with capsule-interior
//! balls at every scale: from any outside point one can walk to the
//! boundary, slip inside the nearest capsule, and certify a ball there.
//! The walks below do exactly that, each returning a witness that is
//! re-verified through the query layer rather than trusted from the
//! arithmetic that produced it. The scanners measure hole sizes around a
//! point, either over all directions or along a fixed chord, and the
//! insulation predicates quantify clearance from low levels, which is
//! what kills directional porosity along a run of repeated directions.

use crate::construction::{BallCertificate, LevelSet, Membership};
use crate::geom::{segment_closest_params, Capsule, Dir, Point};
use crate::{radius, spacing, Error, Result, STANDOFF, TOL};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io;

/// Which branch of the boundary walk produced the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkCase {
    /// The line foot survived: step off the capsule side facing the seed.
    OnAxis,
    /// The foot was cut but stayed clear of the earlier union: project
    /// onto the nearest earlier capsule.
    Projected,
    /// The foot landed strictly inside the earlier union: bisect the
    /// segment from the seed.
    Bisected,
    /// The seed or the foot was already within tolerance of the surface.
    AlreadyThere,
}

/// Required padded clearance for a level-n boundary walk: worst-case
/// excursion plus the query reach the case analysis leans on. Level 1
/// needs almost nothing extra because there is no earlier structure.
/// Public so suite runners can size pads (or skip levels) up front.
pub fn walk_budget(n: u32) -> f64 {
    if n == 1 {
        0.75 * spacing(1)
    } else {
        4.0 * spacing(n)
    }
}

/// Walks from an outside point `x` to a point of the level-n union's
/// boundary at most `2 * spacing(n)` away: the nearest level-n line is
/// within half a spacing, and from its foot each case reaches a surface
/// within one more spacing. Errors: `Precondition` if `x` is inside,
/// `PaddingInsufficient` if the walk could leave the exact zone.
pub fn find_boundary_point(ls: &LevelSet, n: u32, x: Point) -> Result<Point> {
    find_boundary_point_traced(ls, n, x).map(|(z, _)| z)
}

/// Same walk, reporting which case fired. Useful for diagnostics and for
/// exercising every branch in tests.
pub fn find_boundary_point_traced(ls: &LevelSet, n: u32, x: Point) -> Result<(Point, WalkCase)> {
    if n == 0 || n > ls.depth() {
        return Err(Error::Precondition(format!(
            "boundary walk needs a built level, got {n} of depth {}",
            ls.depth()
        )));
    }
    match ls.raw_membership_checked(n, x)? {
        Membership::In => {
            return Err(Error::Precondition(format!(
                "boundary walk seed ({}, {}) is inside the union",
                x.x, x.y
            )))
        }
        Membership::Boundary => return Ok((x, WalkCase::AlreadyThere)),
        Membership::Out => {}
    }
    let budget = walk_budget(n);
    if ls.window.padded().depth_inside(x) < budget {
        return Err(Error::PaddingInsufficient(format!(
            "level-{n} walk needs {budget} of padded clearance around ({}, {})",
            x.x, x.y
        )));
    }

    let lvl = ls.level(n);
    let perp = lvl.dir.perp().vec();
    let across = perp.dot(x);
    let k = (across / lvl.spacing).round_ties_even() as i64;
    let y = x + perp * (k as f64 * lvl.spacing - across);

    // Case split on where the foot landed.
    let along = lvl.dir.dot(y);
    let on_tol = 1.0 / (1u64 << 48) as f64;
    let (_, _, params) = lvl.pieces(k);
    let idx = params.partition_point(|pc| pc.0 <= along);
    let on_axis = params[idx.saturating_sub(2)..(idx + 2).min(params.len())]
        .iter()
        .any(|pc| along >= pc.0 - on_tol && along <= pc.1 + on_tol);
    if on_axis {
        // The foot survived, so it carries a capsule of radius(n); its
        // boundary point facing x is exactly radius away. Survivors keep
        // a full spacing of clearance from everything else, so nothing
        // overlaps it.
        let side = if across - k as f64 * lvl.spacing >= 0.0 { 1.0 } else { -1.0 };
        let z = y + perp * (side * lvl.radius);
        return verified(ls, n, z, WalkCase::OnAxis);
    }

    let sd_prev = if n == 1 { f64::INFINITY } else { ls.raw_signed_distance(n - 1, y)? };
    if sd_prev > TOL {
        // The foot was cut, so the earlier union is within spacing(n);
        // its nearest surface point is a boundary point of the whole
        // union because level-n survivors keep their distance from it.
        let (m, ci, _) = ls
            .raw_nearest(n - 1, y)?
            .expect("a cut foot has earlier structure in reach");
        let cap = &ls.level(m).caps[ci as usize];
        let foot = cap.axis_foot(y);
        let d = y.dist(foot);
        let z = foot + (y - foot) * (cap.r / d);
        return verified(ls, n, z, WalkCase::Projected);
    }
    if sd_prev >= -TOL {
        return verified(ls, n, y, WalkCase::AlreadyThere);
    }

    // The foot is strictly inside: the segment from the outside seed to
    // it crosses the boundary; bisect on the signed distance.
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        let p = x.lerp(y, mid);
        let sd = ls.raw_signed_distance(n, p)?;
        if sd.abs() <= 0.5 * TOL {
            return verified(ls, n, p, WalkCase::Bisected);
        }
        if sd > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Degenerate("boundary bisection failed to converge".into()))
}

fn verified(ls: &LevelSet, n: u32, z: Point, case: WalkCase) -> Result<(Point, WalkCase)> {
    if ls.raw_membership_checked(n, z)? != Membership::Boundary {
        return Err(Error::Degenerate(format!(
            "walk landed off the boundary at ({}, {})",
            z.x, z.y
        )));
    }
    Ok((z, case))
}

/// A certified ball in the union's interior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hole {
    pub center: Point,
    pub radius: f64,
    pub certificate: BallCertificate,
}

/// From a point on (or in) the level-n union, steps toward the nearest
/// capsule axis far enough that a ball of radius `radius(n) - TOL` fits
/// inside that one capsule. Moves at most `radius(n) + TOL`.
pub fn find_thick_center(ls: &LevelSet, n: u32, x: Point) -> Result<Hole> {
    if n == 0 {
        return Err(Error::Precondition("no structure at depth 0".into()));
    }
    let (m, ci, sd) = ls
        .raw_nearest(n, x)?
        .ok_or_else(|| Error::Precondition("no structure in reach".into()))?;
    if sd > TOL {
        return Err(Error::Precondition(format!(
            "thick-center seed is {sd} outside the union"
        )));
    }
    let cap = &ls.level(m).caps[ci as usize];
    let foot = cap.axis_foot(x);
    let d = x.dist(foot);
    let step = radius(n) + TOL;
    // Inward by `step` puts the center at axis distance <= r_m - radius(n),
    // leaving exactly TOL of slack for the strict containment check.
    let center = if d <= step { foot } else { x + (foot - x) * (step / d) };
    let rho = radius(n) - TOL;
    let certificate = ls
        .ball_inside(n, center, rho)?
        .ok_or_else(|| Error::Degenerate("thick center failed to certify".into()))?;
    Ok(Hole { center, radius: rho, certificate })
}

/// Boundary walk followed by the inward step: from any outside seed this
/// yields a certified hole of radius `radius(n) - TOL` whose center is
/// within `2 * spacing(n)` of the seed.
pub fn find_hole(ls: &LevelSet, n: u32, x: Point) -> Result<Hole> {
    let z = find_boundary_point(ls, n, x)?;
    find_thick_center(ls, n, z)
}

/// Insulation at level s: the point is at least `3 * radius(s)` from the
/// level-s union, with the bound certified against the unbounded
/// construction. Level 0 is vacuously insulated.
pub fn is_insulated(ls: &LevelSet, s: u32, x: Point) -> Result<bool> {
    Ok(ls.dist_to_h_certified(s, x)? >= 3.0 * radius(s))
}

fn is_insulated_raw(ls: &LevelSet, s: u32, x: Point) -> Result<bool> {
    Ok(ls.raw_dist_certified(s, x)? >= 3.0 * radius(s))
}

/// Finds a point near `w` that is insulated at level `n` yet still
/// outside the full-depth union. Walks to the level-n boundary, steps an
/// eighth of a spacing off it (several step lengths are tried on both
/// sides), and if the landing spot happens to sit inside some deeper
/// capsule, exits that capsule radially; everything is re-certified
/// before returning. The result stays within `3 * spacing(n)` of `w`.
pub fn find_insulated_point(ls: &LevelSet, n: u32, w: Point) -> Result<Point> {
    let depth = ls.depth();
    if n == 0 || n > depth {
        return Err(Error::Precondition(format!(
            "insulation anchor {n} outside built depth {depth}"
        )));
    }
    let z0 = find_boundary_point(ls, n, w)?;
    let (m, ci, _) = ls
        .raw_nearest(n, z0)?
        .ok_or_else(|| Error::Degenerate("boundary point lost its capsule".into()))?;
    let cap = &ls.level(m).caps[ci as usize];
    let foot = cap.axis_foot(z0);
    let d = z0.dist(foot);
    if d == 0.0 {
        return Err(Error::Degenerate("boundary point collapsed onto an axis".into()));
    }
    let nhat = (z0 - foot) * (1.0 / d);
    let base = spacing(n) / 8.0;
    for mult in [1.0, 17.0 / 16.0, 9.0 / 8.0, 19.0 / 16.0, 5.0 / 4.0] {
        for sign in [1.0, -1.0] {
            let z1 = z0 + nhat * (sign * mult * base);
            if ls.raw_dist_certified(n, z1).map_or(true, |di| di < 3.0 * radius(n)) {
                continue;
            }
            let z = match ls.raw_membership_checked(depth, z1) {
                Ok(Membership::Out) => z1,
                Ok(_) => {
                    // Inside or on some deeper capsule: leave it radially.
                    // Deeper structure keeps nearly a full spacing of
                    // clearance around itself, so a standoff exit lands in
                    // open space.
                    let Ok(Some((dm, di, _))) = ls.raw_nearest(depth, z1) else {
                        continue;
                    };
                    let dcap = &ls.level(dm).caps[di as usize];
                    let dfoot = dcap.axis_foot(z1);
                    let dd = z1.dist(dfoot);
                    // Below the standoff the offset is projection crumbs,
                    // not a direction; exiting along it would slide down
                    // the axis and stay inside.
                    let out_dir = if dd > STANDOFF {
                        (z1 - dfoot) * (1.0 / dd)
                    } else {
                        axis_perp(dcap).unwrap_or(nhat)
                    };
                    dfoot + out_dir * (dcap.r + STANDOFF)
                }
                Err(_) => continue,
            };
            if !matches!(ls.raw_membership_checked(depth, z), Ok(Membership::Out)) {
                continue;
            }
            if is_insulated_raw(ls, n, z)? {
                return Ok(z);
            }
        }
    }
    Err(Error::DepthExhausted)
}

fn axis_perp(cap: &Capsule) -> Option<Point> {
    let axis = cap.b - cap.a;
    let len = axis.norm();
    if len == 0.0 {
        return None;
    }
    Some(Point::new(-axis.y / len, axis.x / len))
}

/// Outcome of looking for a direction run that insulates a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsulationStatus {
    /// Outside the union and insulated at an anchor whose following run
    /// of `len` levels all share direction `j`.
    Holds { anchor: u32 },
    /// Inside the union: insulation is moot.
    Fails,
    /// Outside, but no qualifying run fits in the built depth (or the
    /// point sits on a surface). A deeper build might still decide it.
    Undecided,
}

/// Searches the built depth for an anchor `a` such that levels
/// `a+1 ..= a+len` all run in direction index `j` and `x` is insulated
/// at `a`.
pub fn run_insulation(ls: &LevelSet, j: u64, len: u32, x: Point) -> Result<InsulationStatus> {
    if len == 0 {
        return Err(Error::Config("run length must be at least 1".into()));
    }
    let depth = ls.depth();
    match ls.membership(depth, x)? {
        Membership::In => return Ok(InsulationStatus::Fails),
        Membership::Boundary => return Ok(InsulationStatus::Undecided),
        Membership::Out => {}
    }
    if len <= depth {
        for anchor in 0..=(depth - len) {
            if ls.schedule.run_covers(j, anchor as u64, len as u64)
                && is_insulated(ls, anchor, x)?
            {
                return Ok(InsulationStatus::Holds { anchor });
            }
        }
    }
    Ok(InsulationStatus::Undecided)
}

/// One scanned scale: the best certified hole found near the point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRecord {
    pub point: Point,
    pub scale: f64,
    pub hole_radius: f64,
    pub hole_center: Point,
    /// hole_radius / scale; the porosity constant this scale witnesses.
    pub ratio: f64,
    pub certificate: Option<BallCertificate>,
}

fn check_scan(ls: &LevelSet, n: u32, x: Point, scales: &[f64]) -> Result<()> {
    for &r in scales {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Config(format!("scan scale {r} must be positive")));
        }
        let have = ls.window.core().depth_inside(x);
        if have < 2.0 * r {
            return Err(Error::ScaleBudget { scale: r, limit: have / 2.0 });
        }
    }
    if ls.membership(n, x)? != Membership::Out {
        return Err(Error::Precondition(format!(
            "scan point ({}, {}) is not outside the union",
            x.x, x.y
        )));
    }
    Ok(())
}

/// Walks every capsule whose axis comes within `band` of `x` (in the
/// level's own frame), shallow levels first, stopping once no deeper
/// level can beat the best hole found so far.
fn fold_candidates(
    ls: &LevelSet,
    n: u32,
    x: Point,
    r_eff: f64,
    mut eval: impl FnMut(&Capsule) -> Option<(f64, Point)>,
) -> Option<(f64, Point)> {
    let mut best: Option<(f64, Point)> = None;
    for m in 1..=n {
        let lvl = ls.level(m);
        if let Some((rho, _)) = best {
            // Level m holes are capped by its capsule radius, and radii
            // only shrink with depth.
            if rho >= lvl.radius {
                break;
            }
        }
        let band = r_eff + lvl.radius;
        let across = lvl.dir.perp().dot(x);
        let along = lvl.dir.dot(x);
        let (kb_lo, kb_hi) = lvl.k_bounds();
        let k_lo = (((across - band) / lvl.spacing).floor() as i64).max(kb_lo);
        let k_hi = (((across + band) / lvl.spacing).ceil() as i64).min(kb_hi);
        for k in k_lo..=k_hi {
            let (_, caps, params) = lvl.pieces(k);
            let start = params.partition_point(|pc| pc.1 < along - band);
            for (cap, pc) in caps[start..].iter().zip(&params[start..]) {
                if pc.0 > along + band {
                    break;
                }
                if let Some((rho, center)) = eval(cap) {
                    if best.map_or(true, |(b, _)| rho > b) {
                        best = Some((rho, center));
                    }
                }
            }
        }
    }
    best
}

fn certify(ls: &LevelSet, n: u32, x: Point, scale: f64, best: Option<(f64, Point)>) -> ScanRecord {
    match best {
        Some((rho, center)) => {
            let certificate = ls.ball_inside(n, center, (rho - TOL).max(0.0)).ok().flatten();
            ScanRecord {
                point: x,
                scale,
                hole_radius: rho,
                hole_center: center,
                ratio: rho / scale,
                certificate,
            }
        }
        None => ScanRecord {
            point: x,
            scale,
            hole_radius: 0.0,
            hole_center: x,
            ratio: 0.0,
            certificate: None,
        },
    }
}

/// The level whose capsule radius and spacing bracket the scale:
/// radius(m) <= r <= spacing(m), clamped to the queried depth. Dyadic
/// scales sit on a bracket edge and resolve to the deeper level.
fn bracket_level(r: f64, n: u32) -> u32 {
    let m = (-r.log2() / 6.0).floor() as i64;
    m.clamp(1, n as i64) as u32
}

/// For each scale r, the better of two certified holes. The local
/// candidate is the largest single-capsule ball whose center lies
/// within r of `x` (any direction); the center shifts straight toward
/// the chosen axis, so the optimum over centers is closed-form per
/// capsule, and the shave factor keeps it strictly within the scale
/// with room to certify. The constructive candidate walks to the
/// boundary at the scale's bracketing level and recenters onto the
/// nearest axis there; its center may sit up to four bracket spacings
/// away, but it lands a full-radius ball at every scale, so no scale
/// ever comes back empty-handed.
pub fn scan_isotropic(ls: &LevelSet, n: u32, x: Point, scales: &[f64]) -> Result<Vec<ScanRecord>> {
    check_scan(ls, n, x, scales)?;
    let shave = 1.0 - 1.0 / (1u64 << 20) as f64;
    Ok(scales
        .iter()
        .map(|&scale| {
            let r_eff = scale * shave;
            let best = fold_candidates(ls, n, x, r_eff, |cap| {
                let foot = cap.axis_foot(x);
                let d = x.dist(foot);
                let rho = cap.r - (d - r_eff).max(0.0);
                if rho <= 0.0 {
                    return None;
                }
                let center = if d == 0.0 { x } else { x + (foot - x) * (d.min(r_eff) / d) };
                Some((rho, center))
            });
            let local = certify(ls, n, x, scale, best);
            // A fence failure here only drops the constructive candidate;
            // the sampling margins of every shipped caller keep the walk
            // in bounds.
            match find_hole(ls, bracket_level(scale, n), x) {
                Ok(h) if h.radius > local.hole_radius => ScanRecord {
                    point: x,
                    scale,
                    hole_radius: h.radius,
                    hole_center: h.center,
                    ratio: h.radius / scale,
                    certificate: Some(h.certificate),
                },
                _ => local,
            }
        })
        .collect())
}

/// Same scan with the center confined to the chord through `x` along
/// `v`: the directional porosity witness. Per capsule the best chord
/// point is the closest approach of two segments.
pub fn scan_directional(
    ls: &LevelSet,
    n: u32,
    x: Point,
    v: Dir,
    scales: &[f64],
) -> Result<Vec<ScanRecord>> {
    check_scan(ls, n, x, scales)?;
    let shave = 1.0 - 1.0 / (1u64 << 20) as f64;
    Ok(scales
        .iter()
        .map(|&scale| {
            let r_eff = scale * shave;
            let a1 = x - v.vec() * r_eff;
            let b1 = x + v.vec() * r_eff;
            let best = fold_candidates(ls, n, x, r_eff, |cap| {
                let (s, _, d) = segment_closest_params(a1, b1, cap.a, cap.b);
                let rho = cap.r - d;
                if rho <= 0.0 {
                    return None;
                }
                Some((rho, a1.lerp(b1, s)))
            });
            certify(ls, n, x, scale, best)
        })
        .collect())
}

/// Writes scan records as CSV with a fixed header; floats use Rust's
/// shortest round-trip formatting, so identical records give identical
/// bytes.
pub fn write_scan_csv<W: io::Write>(mut w: W, records: &[ScanRecord]) -> io::Result<()> {
    writeln!(w, "px,py,scale,hole_radius,hole_x,hole_y,ratio,certificate")?;
    for r in records {
        let cert = match r.certificate {
            Some(BallCertificate::SingleCapsule) => "single",
            Some(BallCertificate::SampledCover) => "sampled",
            None => "none",
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.point.x, r.point.y, r.scale, r.hole_radius, r.hole_center.x, r.hole_center.y,
            r.ratio, cert
        )?;
    }
    Ok(())
}

/// Empirical check of column invariance between two adjacent lines of
/// the first run level: inside that strip, deeper run levels should look
/// like full-height columns (membership independent of the along-run
/// coordinate), and surviving run capsules outside the strip whose
/// column crosses uncovered strip points should keep their distance.
#[derive(Clone, Copy, Debug)]
pub struct ColumnReport {
    pub n: u32,
    pub levels_checked: u32,
    pub pairs_checked: u64,
    pub pair_disagreements: u64,
    pub boundary_skips: u64,
    pub capsules_checked: u64,
    pub column_violations: u64,
    /// Smallest surface-to-strip separation seen among capsules the
    /// claim applied to; infinite if none applied.
    pub min_separation: f64,
    /// The strip's across-span relative to the probe point.
    pub span: (f64, f64),
}

fn band_membership(ls: &LevelSet, lo: u32, hi: u32, p: Point) -> Membership {
    let mut best = f64::INFINITY;
    for lvl in &ls.levels[lo as usize - 1..hi as usize] {
        let (sd, _) = lvl.scan_nearest(p, best);
        if sd < best {
            best = sd;
        }
    }
    if best < -TOL {
        Membership::In
    } else if best > TOL {
        Membership::Out
    } else {
        Membership::Boundary
    }
}

pub fn column_invariance_check(
    ls: &LevelSet,
    n: u32,
    run_len: u32,
    x: Point,
    pairs: u64,
    seed: u64,
) -> Result<ColumnReport> {
    if run_len == 0 || n + run_len > ls.depth() {
        return Err(Error::Precondition(format!(
            "column check needs levels {}..={} built",
            n + 1,
            n + run_len
        )));
    }
    let v = ls.level(n + 1).dir;
    for m in n + 1..=n + run_len {
        if ls.level(m).dir != v {
            return Err(Error::Precondition(format!(
                "levels {} and {} do not share a direction",
                n + 1,
                m
            )));
        }
    }
    let vp = v.perp().vec();
    let s_run = spacing(n + 1);
    let across0 = vp.dot(x);
    let k_lo = (across0 / s_run).floor();
    let s1 = k_lo * s_run - across0;
    let s2 = (k_lo + 1.0) * s_run - across0;
    if s1.abs() <= TOL || s2.abs() <= TOL {
        return Err(Error::Degenerate(format!(
            "probe point sits on a level-{} line",
            n + 1
        )));
    }
    let h = s_run;
    let core = ls.window.core();
    for (a, b) in [(s1, -h), (s1, h), (s2, -h), (s2, h)] {
        let corner = x + vp * a + v.vec() * b;
        if !core.contains(corner) {
            return Err(Error::OutsideWindow { x: corner.x, y: corner.y });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pair_disagreements = 0u64;
    let mut boundary_skips = 0u64;
    for _ in 0..pairs {
        let a = s1 + (s2 - s1) * rng.random::<f64>();
        let b0 = -h + 2.0 * h * rng.random::<f64>();
        let b1 = -h + 2.0 * h * rng.random::<f64>();
        let y0 = x + vp * a + v.vec() * b0;
        let y1 = x + vp * a + v.vec() * b1;
        for m in n + 1..=n + run_len {
            let m0 = band_membership(ls, n + 1, m, y0);
            let m1 = band_membership(ls, n + 1, m, y1);
            if m0 == Membership::Boundary || m1 == Membership::Boundary {
                boundary_skips += 1;
            } else if m0 != m1 {
                pair_disagreements += 1;
            }
        }
    }

    let mut capsules_checked = 0u64;
    let mut column_violations = 0u64;
    let mut min_separation = f64::INFINITY;
    for m in n + 1..=n + run_len {
        let lvl = ls.level(m);
        let bound = spacing(m) - spacing(m + 1) - TOL;
        let reach = 2.0 * spacing(m);
        let (kb_lo, kb_hi) = lvl.k_bounds();
        let lo = ((across0 + s1 - lvl.radius - reach) / lvl.spacing).floor() as i64;
        let hi = ((across0 + s2 + lvl.radius + reach) / lvl.spacing).ceil() as i64;
        for k in lo.max(kb_lo)..=hi.min(kb_hi) {
            let a_line = k as f64 * lvl.spacing - across0;
            // The capsule's column can only meet the strip if its
            // across-interval overlaps it.
            if a_line + lvl.radius < s1 || a_line - lvl.radius > s2 {
                continue;
            }
            let (_, caps, _) = lvl.pieces(k);
            for cap in caps {
                let (ba, bb) = (v.dot(cap.a - x), v.dot(cap.b - x));
                let (b_lo, b_hi) = if ba <= bb { (ba, bb) } else { (bb, ba) };
                let da = (s1 - a_line).max(a_line - s2).max(0.0);
                let db = (b_lo - h).max(-h - b_hi).max(0.0);
                let d_surf = (da * da + db * db).sqrt() - lvl.radius;
                if d_surf <= 0.0 {
                    // Touches or enters the strip: not an outside capsule.
                    continue;
                }
                // Does its column cross an uncovered strip point?
                let a_probe = a_line.clamp(s1, s2);
                let mut uncovered = false;
                'probe: for ai in -1..=1 {
                    let a = (a_probe + ai as f64 * 0.25 * lvl.radius).clamp(s1, s2);
                    for bi in 0..17 {
                        let b = -h + 2.0 * h * (bi as f64) / 16.0;
                        let p = x + vp * a + v.vec() * b;
                        if band_membership(ls, n + 1, m, p) == Membership::Out {
                            uncovered = true;
                            break 'probe;
                        }
                    }
                }
                if !uncovered {
                    continue;
                }
                capsules_checked += 1;
                if d_surf < min_separation {
                    min_separation = d_surf;
                }
                if d_surf < bound {
                    column_violations += 1;
                }
            }
        }
    }

    Ok(ColumnReport {
        n,
        levels_checked: run_len,
        pairs_checked: pairs,
        pair_disagreements,
        boundary_skips,
        capsules_checked,
        column_violations,
        min_separation,
        span: (s1, s2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{Budgets, Window};
    use crate::directions::DirectionSchedule;

    fn build(fronts: Vec<(u64, u64)>, half: f64, pad: f64, depth: u32) -> LevelSet {
        let w = Window::new(Point::ORIGIN, half, pad).unwrap();
        let s = DirectionSchedule::front_loaded(fronts).unwrap();
        LevelSet::build(w, s, Budgets::default(), depth).unwrap()
    }

    fn depth1() -> LevelSet {
        build(vec![(0, 1), (2, 1)], 1.0 / 16.0, 1.0 / 32.0, 1)
    }

    fn depth2() -> LevelSet {
        build(vec![(0, 1), (2, 1)], 1.0 / 16.0, 1.0 / 32.0, 2)
    }

    #[test]
    fn boundary_walk_on_axis() {
        let ls = depth1();
        let x = Point::new(0.0, 1.0 / 128.0);
        let (z, case) = find_boundary_point_traced(&ls, 1, x).unwrap();
        assert_eq!(case, WalkCase::OnAxis);
        assert_eq!(z, Point::new(0.0, 1.0 / 4096.0));
        assert!(x.dist(z) <= 2.0 * spacing(1));
        // A seed already on the surface comes straight back.
        let on = Point::new(0.003, 1.0 / 4096.0);
        let (z2, case2) = find_boundary_point_traced(&ls, 1, on).unwrap();
        assert_eq!((z2, case2), (on, WalkCase::AlreadyThere));
    }

    #[test]
    fn boundary_walk_projects_into_a_cut() {
        let ls = depth2();
        // Foot lands on the level-2 line x = 0 inside the cut around the
        // level-1 capsule (the cut spans |y| < 2^-11), clear of it by
        // 2^-13: the walk projects onto the level-1 surface.
        let x = Point::new(1.0 / 8192.0, 3.0 / 8192.0);
        let (z, case) = find_boundary_point_traced(&ls, 2, x).unwrap();
        assert_eq!(case, WalkCase::Projected);
        assert_eq!(z, Point::new(0.0, 1.0 / 4096.0));
        assert!(x.dist(z) <= 2.0 * spacing(2));
    }

    #[test]
    fn boundary_walk_rejects_bad_seeds() {
        let ls = depth1();
        assert!(matches!(
            find_boundary_point(&ls, 1, Point::ORIGIN),
            Err(Error::Precondition(_))
        ));
        assert!(find_boundary_point(&ls, 2, Point::new(0.0, 0.01)).is_err());
        // A depth-2 build with pad at the legal floor leaves no room for
        // level-2 walks near the core edge.
        let w = Window::new(Point::ORIGIN, 1.0 / 16.0, 2.0 * spacing(2)).unwrap();
        let s = DirectionSchedule::front_loaded(vec![(0, 1), (2, 1)]).unwrap();
        let tight = LevelSet::build(w, s, Budgets::default(), 2).unwrap();
        let edge = Point::new(1.0 / 16.0 - 1.5 * spacing(2), 0.01);
        assert!(matches!(
            find_boundary_point(&tight, 2, edge),
            Err(Error::PaddingInsufficient(_))
        ));
    }

    #[test]
    fn thick_center_achieves_the_stated_radius() {
        let ls = depth2();
        let hole = find_hole(&ls, 1, Point::new(0.0, 1.0 / 128.0)).unwrap();
        assert_eq!(hole.center, Point::ORIGIN);
        assert_eq!(hole.radius, radius(1) - TOL);
        assert_eq!(hole.certificate, BallCertificate::SingleCapsule);
        // At level 2 the ball is smaller and the center tucks just inside
        // the level-1 surface.
        let seed = Point::new(1.0 / 8192.0, 3.0 / 8192.0);
        let hole2 = find_hole(&ls, 2, seed).unwrap();
        assert_eq!(hole2.radius, radius(2) - TOL);
        assert_eq!(hole2.center, Point::new(0.0, 1.0 / 4096.0 - radius(2) - TOL));
        assert_eq!(hole2.certificate, BallCertificate::SingleCapsule);
        assert!(seed.dist(hole2.center) <= 2.0 * spacing(2) + 1.0 / 4096.0);
    }

    #[test]
    fn walk_cases_all_fire_on_an_oblique_level() {
        // Three directions: level 3 runs at 45 degrees against the
        // cardinal levels 1 and 2, which is what makes the bisection
        // branch reachable: the foot of a just-outside seed can dip below
        // the level-1 surface. The window stays small; an oblique level-3
        // family is by far the densest part of a build.
        let ls = build(vec![(0, 1), (2, 1), (4, 1)], 1.0 / 64.0, 1.0 / 64.0, 3);
        let mut seen = [0u32; 3];
        let y0 = 1.0 / 4096.0 + 1.0 / (1u64 << 22) as f64;
        for i in 0..600 {
            let x = Point::new(i as f64 / (1u64 << 19) as f64, y0);
            let (z, case) = find_boundary_point_traced(&ls, 3, x).unwrap();
            match case {
                WalkCase::OnAxis => seen[0] += 1,
                WalkCase::Projected => seen[1] += 1,
                WalkCase::Bisected => seen[2] += 1,
                WalkCase::AlreadyThere => {}
            }
            assert!(x.dist(z) <= 2.0 * spacing(3), "walk escaped at seed {i}");
        }
        assert!(seen[1] > 0, "projection case never fired: {seen:?}");
        assert!(seen[2] > 0, "bisection case never fired: {seen:?}");
    }

    #[test]
    fn insulation_thresholds() {
        let ls = depth1();
        assert!(is_insulated(&ls, 1, Point::new(0.0, 1.0 / 128.0)).unwrap());
        assert!(!is_insulated(&ls, 1, Point::new(0.0, 2.0 / 4096.0)).unwrap());
        assert!(is_insulated(&ls, 0, Point::new(0.0, 2.0 / 4096.0)).unwrap());
    }

    #[test]
    fn insulated_points_near_a_run() {
        // Levels 2..3 both run north; anchor 1 is the run start.
        let ls = build(vec![(0, 1), (2, 2)], 1.0 / 64.0, 1.0 / 128.0, 3);
        for i in 0..5 {
            for j in 0..5 {
                let w = Point::new(
                    (i as f64 - 2.0) / (1u64 << 9) as f64,
                    (j as f64 - 2.0) / (1u64 << 9) as f64 + 1.0 / 1024.0,
                );
                let z = find_insulated_point(&ls, 1, w).unwrap();
                assert!(is_insulated(&ls, 1, z).unwrap());
                assert_eq!(ls.membership(3, z).unwrap(), Membership::Out);
                assert!(w.dist(z) < 3.0 * spacing(1));
            }
        }
    }

    #[test]
    fn insulated_point_walk_exits_axis_pinned_candidates() {
        // With parallel levels, the dyadic step lengths off a level-1
        // surface land candidates exactly on deep lattice axes. The
        // radial exit must treat the microscopic foot offset there as
        // noise; dividing by it slides along the axis and every
        // candidate dies inside its capsule.
        let w = Window::new(Point::ORIGIN, 1.0 / 16.0, 1.0 / 32.0).unwrap();
        let ls =
            LevelSet::build(w, DirectionSchedule::diagonal(), Budgets::default(), 3).unwrap();
        let z = find_insulated_point(&ls, 1, Point::new(0.0248745573, -0.0113879804)).unwrap();
        assert!(is_insulated(&ls, 1, z).unwrap());
        assert_eq!(ls.membership(3, z).unwrap(), Membership::Out);
    }

    #[test]
    fn run_insulation_statuses() {
        let ls = build(vec![(0, 1), (2, 2)], 1.0 / 64.0, 1.0 / 128.0, 3);
        let z = find_insulated_point(&ls, 1, Point::new(0.001, 0.0021)).unwrap();
        assert_eq!(
            run_insulation(&ls, 2, 2, z).unwrap(),
            InsulationStatus::Holds { anchor: 1 }
        );
        // Inside the level-1 capsule: moot.
        assert_eq!(run_insulation(&ls, 2, 2, Point::ORIGIN).unwrap(), InsulationStatus::Fails);
        // No east run of length 2 exists in this schedule prefix.
        assert_eq!(run_insulation(&ls, 0, 2, z).unwrap(), InsulationStatus::Undecided);
        // A run longer than the build can host is undecidable.
        assert_eq!(run_insulation(&ls, 2, 3, z).unwrap(), InsulationStatus::Undecided);
        assert!(run_insulation(&ls, 2, 0, z).is_err());
    }

    #[test]
    fn isotropic_scan_exact_values() {
        let ls = depth1();
        let x = Point::new(0.0, 1.0 / 128.0);
        let recs = scan_isotropic(&ls, 1, x, &[1.0 / 64.0, 1.0 / 128.0]).unwrap();
        // Scale 2^-6 reaches the axis locally: the full capsule radius,
        // which beats the constructive hole's TOL shave.
        assert_eq!(recs[0].hole_radius, 1.0 / 4096.0);
        assert_eq!(recs[0].hole_center, Point::ORIGIN);
        assert_eq!(recs[0].ratio, 1.0 / 64.0);
        assert_eq!(recs[0].certificate, Some(BallCertificate::SingleCapsule));
        assert!(x.dist(recs[0].hole_center) < recs[0].scale);
        // Scale 2^-7 falls short locally by the shave, so the
        // constructive candidate wins: full radius minus TOL, centered
        // on the axis one scale away.
        assert_eq!(recs[1].hole_radius, 1.0 / 4096.0 - TOL);
        assert_eq!(recs[1].hole_center, Point::ORIGIN);
        assert_eq!(recs[1].certificate, Some(BallCertificate::SingleCapsule));
        assert!(x.dist(recs[1].hole_center) <= 4.0 * spacing(1));
    }

    #[test]
    fn bracket_levels_follow_the_dyadic_ladder() {
        assert_eq!(bracket_level(1.0 / 64.0, 4), 1);
        assert_eq!(bracket_level(1.0 / 2048.0, 4), 1);
        assert_eq!(bracket_level(1.0 / 4096.0, 4), 2);
        assert_eq!(bracket_level(1.0 / 8192.0, 4), 2);
        assert_eq!(bracket_level(2f64.powi(-18), 4), 3);
        assert_eq!(bracket_level(2f64.powi(-24), 4), 4);
        // Clamped to the queried depth and to level 1 for huge scales.
        assert_eq!(bracket_level(2f64.powi(-24), 2), 2);
        assert_eq!(bracket_level(0.9, 3), 1);
    }

    #[test]
    fn directional_scan_collapses_along_the_family() {
        let ls = depth1();
        let x = Point::new(0.0, 1.0 / 128.0);
        let along = scan_directional(&ls, 1, x, Dir::EAST, &[1.0 / 64.0]).unwrap();
        assert_eq!(along[0].hole_radius, 0.0);
        assert_eq!(along[0].ratio, 0.0);
        assert_eq!(along[0].certificate, None);
        // The north chord crosses both the y = 0 and y = 1/64 axes; both
        // give a full-radius hole and rounding picks the winner.
        let across = scan_directional(&ls, 1, x, Dir::NORTH, &[1.0 / 64.0]).unwrap();
        assert!((across[0].hole_radius - 1.0 / 4096.0).abs() < 1e-15);
        let c = across[0].hole_center;
        assert!(c.x.abs() < 1e-12);
        assert!(c.y.abs() < 1e-12 || (c.y - 1.0 / 64.0).abs() < 1e-12);
        assert_eq!(across[0].certificate, Some(BallCertificate::SingleCapsule));
    }

    #[test]
    fn scan_preconditions() {
        let ls = depth1();
        assert!(matches!(
            scan_isotropic(&ls, 1, Point::new(1.0 / 16.0 - 1.0 / 256.0, 0.01), &[1.0 / 128.0]),
            Err(Error::ScaleBudget { .. })
        ));
        assert!(matches!(
            scan_isotropic(&ls, 1, Point::ORIGIN, &[1.0 / 1024.0]),
            Err(Error::Precondition(_))
        ));
        assert!(scan_isotropic(&ls, 1, Point::new(0.0, 0.01), &[0.0]).is_err());
    }

    #[test]
    fn column_check_is_clean_on_a_run() {
        let ls = build(vec![(0, 1), (2, 2)], 1.0 / 64.0, 1.0 / 128.0, 3);
        let x = Point::new(3.7 / (1u64 << 14) as f64, 1.0 / 512.0);
        let rep = column_invariance_check(&ls, 1, 2, x, 2000, 7).unwrap();
        assert_eq!(rep.pairs_checked, 2000);
        assert_eq!(rep.pair_disagreements, 0);
        assert_eq!(rep.column_violations, 0);
        assert!(rep.span.0 < 0.0 && rep.span.1 > 0.0);
        if rep.capsules_checked > 0 {
            assert!(rep.min_separation >= spacing(2) - spacing(3) - TOL);
        }
        // On-lattice probe points are degenerate.
        assert!(matches!(
            column_invariance_check(&ls, 1, 2, Point::new(4.0 / 4096.0, 0.0002), 10, 7),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn csv_bytes_are_deterministic() {
        let rec = ScanRecord {
            point: Point::new(1.0 / 128.0, 0.0),
            scale: 1.0 / 64.0,
            hole_radius: 1.0 / 4096.0,
            hole_center: Point::ORIGIN,
            ratio: 1.0 / 64.0,
            certificate: Some(BallCertificate::SingleCapsule),
        };
        let mut buf = Vec::new();
        write_scan_csv(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "px,py,scale,hole_radius,hole_x,hole_y,ratio,certificate\n\
             0.0078125,0,0.015625,0.000244140625,0,0,0.015625,single\n"
        );
        let mut buf2 = Vec::new();
        write_scan_csv(&mut buf2, &[rec]).unwrap();
        assert_eq!(text.as_bytes(), buf2);
    }
}

