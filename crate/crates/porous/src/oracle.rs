//! Brute-force reference queries, independent of the builder.
//!
//! Instead of materializing capsules, this walks the defining recursion
//! directly: a point of a level-m line survives iff its distance to the
//! union of earlier levels is at least spacing(m), and the level-m body
//! is the survivors fattened by radius(m). Distances to survivor sets
//! are measured by sampling lines on a fixed global grid (pitch
//! spacing(m+2)) and bisecting the survival predicate to locate interval
//! edges. The two implementations share only the primitive geometry, so
//! agreement between them checks the builder's cut algebra, its index,
//! and its windowing margins all at once.
//!
//! Being sampled, the reference can miss survivor islands shorter than
//! its pitch; comparisons therefore skip points within a small band of a
//! surface, and the stated pitch is part of the contract.

use crate::construction::{LevelSet, Membership};
use crate::directions::DirectionSchedule;
use crate::geom::{Dir, Line, Point};
use crate::{radius, spacing, Error, Result, TOL};
use dashmap::DashMap;

/// Sampling pitch along level-m lines: two subdivisions below the
/// level's own scale.
pub fn sample_pitch(m: u32) -> f64 {
    spacing(m + 2)
}

/// Default half-width of the agreement band: twice the coarsest pitch
/// that enters a depth-n comparison. Points closer than this to a
/// surface are where sampling may legitimately blur the answer.
pub fn default_band(n: u32) -> f64 {
    2.0 * sample_pitch(n)
}

pub struct Brute {
    pub schedule: DirectionSchedule,
    dirs: Vec<Dir>,
    memo: Option<DashMap<(u8, i64, i64), bool>>,
}

impl Brute {
    pub fn new(schedule: DirectionSchedule, max_level: u32) -> Brute {
        Brute::with_memo(schedule, max_level, true)
    }

    /// Memoization only caches survival booleans of grid samples; turning
    /// it off must not change any answer. Tests hold us to that.
    pub fn with_memo(schedule: DirectionSchedule, max_level: u32, memo: bool) -> Brute {
        let dirs = (1..=max_level.max(1)).map(|m| schedule.direction_at(m as u64)).collect();
        Brute { schedule, dirs, memo: memo.then(DashMap::new) }
    }

    fn dir(&self, m: u32) -> Dir {
        self.dirs[m as usize - 1]
    }

    /// Signed distance to the union of levels 1..=n as the recursion
    /// defines it (positive outside; magnitudes inside are capped by the
    /// containing radius, which is all membership needs).
    pub fn signed_distance(&self, n: u32, p: Point) -> f64 {
        self.dist_levels(n, p, f64::INFINITY)
    }

    pub fn membership(&self, n: u32, p: Point) -> Membership {
        let sd = self.signed_distance(n, p);
        if sd < -TOL {
            Membership::In
        } else if sd > TOL {
            Membership::Out
        } else {
            Membership::Boundary
        }
    }

    /// min over m <= hi of (distance from p to level-m survivors) - r_m.
    /// Values at or above `prune` may be reported loosely.
    fn dist_levels(&self, hi: u32, p: Point, prune: f64) -> f64 {
        let mut best = f64::INFINITY;
        for m in 1..=hi {
            let cand = self.level_dist(m, p, best.min(prune));
            if cand < best {
                best = cand;
            }
        }
        best
    }

    fn level_dist(&self, m: u32, p: Point, cutoff: f64) -> f64 {
        let dir = self.dir(m);
        let s = spacing(m);
        let r = radius(m);
        let across = dir.perp().dot(p);
        let k0 = (across / s).round_ties_even() as i64;
        let mut best = f64::INFINITY;
        let mut d = 0i64;
        loop {
            let thr = best.min(cutoff);
            let take = if d == 0 { 1 } else { 2 };
            let mut live = false;
            for &k in [k0 - d, k0 + d][..take].iter() {
                let gap = (across - k as f64 * s).abs() - r;
                if gap < thr {
                    live = true;
                    let cand = self.line_dist(m, k, p, thr);
                    if cand < best {
                        best = cand;
                    }
                }
            }
            if !live {
                break;
            }
            d += 1;
        }
        best
    }

    /// Distance from p to the surviving subset of lattice line (m, k),
    /// minus the level radius. Level 1 has no earlier structure, so the
    /// whole line survives and the answer is closed-form. Otherwise: if
    /// the foot of p survives, the perpendicular distance is exact; if
    /// not, scan the sample grid outward for the nearest survivor on each
    /// side and bisect the survival edge it sits behind.
    fn line_dist(&self, m: u32, k: i64, p: Point, cutoff: f64) -> f64 {
        let dir = self.dir(m);
        let s = spacing(m);
        let r = radius(m);
        let line = Line::new(dir, k as f64 * s);
        let perp_d = (dir.perp().dot(p) - k as f64 * s).abs();
        if perp_d - r >= cutoff {
            return f64::INFINITY;
        }
        if m == 1 {
            return perp_d - r;
        }
        let foot_t = dir.dot(p);
        if self.survives(m, line.point_at(foot_t)) {
            return perp_d - r;
        }
        let pitch = sample_pitch(m);
        let j0 = (foot_t / pitch).floor() as i64;
        let mut best = f64::INFINITY;
        for side in [1i64, -1] {
            let mut j = if side > 0 { j0 + 1 } else { j0 };
            let mut prev_dead = foot_t;
            let mut budget = 1u32 << 22;
            loop {
                budget -= 1;
                if budget == 0 {
                    break;
                }
                let t = j as f64 * pitch;
                let axial = (t - foot_t).abs();
                let reach = (perp_d * perp_d + axial * axial).sqrt() - r;
                if reach >= best.min(cutoff) {
                    break;
                }
                if self.survive_sample(m, k, j, &line) {
                    // The survivor interval's edge lies between the last
                    // dead parameter and this sample; the nearest
                    // surviving point is that edge.
                    let t_edge = self.bisect_edge(m, &line, prev_dead, t);
                    let axial = (t_edge - foot_t).abs();
                    let d = (perp_d * perp_d + axial * axial).sqrt() - r;
                    if d < best {
                        best = d;
                    }
                    break;
                }
                prev_dead = t;
                j += side;
            }
        }
        best
    }

    /// Survival edge between a dead and a surviving parameter, resolved
    /// to ~2^-46 so that distance comparisons at 2^-30 stay crisp.
    fn bisect_edge(&self, m: u32, line: &Line, mut dead: f64, mut alive: f64) -> f64 {
        for _ in 0..60 {
            if (alive - dead).abs() <= 1.0 / (1u64 << 46) as f64 {
                break;
            }
            let mid = 0.5 * (dead + alive);
            if self.survives(m, line.point_at(mid)) {
                alive = mid;
            } else {
                dead = mid;
            }
        }
        alive
    }

    /// The defining predicate: q on a level-m line is kept iff the union
    /// of levels below stays spacing(m) away. Exact for m <= 2 (level 1
    /// is closed-form), sampled below that.
    fn survives(&self, m: u32, q: Point) -> bool {
        if m <= 1 {
            return true;
        }
        let cut = spacing(m);
        self.dist_levels(m - 1, q, cut * 1.001) >= cut
    }

    fn survive_sample(&self, m: u32, k: i64, j: i64, line: &Line) -> bool {
        if let Some(memo) = &self.memo {
            if let Some(v) = memo.get(&(m as u8, k, j)) {
                return *v;
            }
            let v = self.survives(m, line.point_at(j as f64 * sample_pitch(m)));
            memo.insert((m as u8, k, j), v);
            v
        } else {
            self.survives(m, line.point_at(j as f64 * sample_pitch(m)))
        }
    }
}

/// Grid comparison of builder vs reference over the core window.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub resolution: u32,
    pub compared: u64,
    pub skipped: u64,
    /// (ix, iy, builder sd, reference sd) for every sign mismatch
    /// outside the band, capped at 64 entries.
    pub disagreements: Vec<(u32, u32, f64, f64)>,
}

/// Classifies every pixel center both ways and counts sign mismatches,
/// skipping pixels within `band` of a surface (by the builder's exact
/// distance), where the sampled reference may legitimately blur. Rows
/// are split across threads; the report is deterministic regardless.
pub fn compare_fields(
    ls: &LevelSet,
    brute: &Brute,
    n: u32,
    resolution: u32,
    band: f64,
) -> Result<CompareReport> {
    if resolution == 0 {
        return Err(Error::Config("comparison grid needs a positive resolution".into()));
    }
    let core = ls.window.core();
    let step = (core.max.x - core.min.x) / resolution as f64;
    let threads = std::thread::available_parallelism().map(|t| t.get()).unwrap_or(4).min(16);
    let chunk = (resolution as usize).div_ceil(threads);
    let mut rows: Vec<(u64, u64, Vec<(u32, u32, f64, f64)>)> = Vec::new();
    std::thread::scope(|sc| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let lo = (t * chunk).min(resolution as usize);
                let hi = ((t + 1) * chunk).min(resolution as usize);
                sc.spawn(move || {
                    let mut compared = 0u64;
                    let mut skipped = 0u64;
                    let mut bad = Vec::new();
                    for iy in lo..hi {
                        let y = core.min.y + (iy as f64 + 0.5) * step;
                        for ix in 0..resolution {
                            let x = core.min.x + (ix as f64 + 0.5) * step;
                            let p = Point::new(x, y);
                            let sd = ls.signed_distance(n, p).expect("pixel centers are in core");
                            if sd.abs() <= band {
                                skipped += 1;
                                continue;
                            }
                            compared += 1;
                            let bsd = brute.signed_distance(n, p);
                            if (sd < 0.0) != (bsd < 0.0) {
                                bad.push((ix as u32, iy as u32, sd, bsd));
                            }
                        }
                    }
                    (compared, skipped, bad)
                })
            })
            .collect();
        for h in handles {
            rows.push(h.join().expect("comparison worker panicked"));
        }
    });
    let mut report = CompareReport {
        resolution,
        compared: 0,
        skipped: 0,
        disagreements: Vec::new(),
    };
    for (c, s, bad) in rows {
        report.compared += c;
        report.skipped += s;
        for d in bad {
            if report.disagreements.len() < 64 {
                report.disagreements.push(d);
            }
        }
    }
    Ok(report)
}
