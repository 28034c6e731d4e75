//! Levelwise capsule construction. Level n lays a parallel family of lines
//! at spacing 2^(-6n), removes every stretch that comes within 2^(-6n) of
//! the union built so far, and fattens the survivors by 2^(-6(n+1)). All
//! queries run against the resulting per-level capsule lists through an
//! exact lattice index: capsules of one level live on parallel lattice
//! lines, so nearest-line plus binary search along the line is both faster
//! and easier to audit than a general spatial hash.

use crate::geom::{
    clip_line_to_aabb, line_capsule_interval, subtract_intervals, Aabb, Capsule, Dir, Interval,
    Line, Point,
};
use crate::directions::DirectionSchedule;
use crate::{radius, spacing, Error, Result, MAX_DEPTH, TOL};
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// Square region of interest. Queries are answered on the core square;
/// the pad keeps enough surrounding structure materialized that core
/// answers match an unbounded build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: Point,
    pub half_width: f64,
    pub pad: f64,
}

impl Window {
    pub fn new(center: Point, half_width: f64, pad: f64) -> Result<Window> {
        let w = Window { center, half_width, pad };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.center.x.is_finite()
            && self.center.y.is_finite()
            && self.half_width.is_finite()
            && self.half_width > 0.0
            && self.pad.is_finite()
            && self.pad > 0.0;
        if !ok {
            return Err(Error::Config(format!("degenerate window {self:?}")));
        }
        Ok(())
    }

    /// The pad must absorb the structure that can influence core queries
    /// at the deepest level: one spacing of exclusion plus one spacing of
    /// slack for walks that step off the core.
    pub fn validate_for_depth(&self, depth: u32) -> Result<()> {
        self.validate()?;
        if depth == 0 {
            return Ok(());
        }
        let floor = 2.0 * spacing(depth);
        if self.pad < floor {
            return Err(Error::PaddingInsufficient(format!(
                "pad {} is below the depth-{} floor {}",
                self.pad, depth, floor
            )));
        }
        Ok(())
    }

    pub fn core(&self) -> Aabb {
        Aabb::centered(self.center, self.half_width)
    }

    pub fn padded(&self) -> Aabb {
        Aabb::centered(self.center, self.half_width + self.pad)
    }

    pub fn in_core(&self, p: Point) -> bool {
        self.core().contains(p)
    }
}

/// Hard ceilings that turn runaway configurations into errors instead of
/// memory exhaustion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub max_lines_per_family: u64,
    pub max_capsules: u64,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets { max_lines_per_family: 1 << 20, max_capsules: 1 << 24 }
    }
}

/// Tri-state point classification with an explicit numerical fence: no
/// claim is made about points within TOL of a surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Boundary,
}

/// How a ball was certified to sit inside the union.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallCertificate {
    /// One capsule contains the closed ball outright: exact.
    SingleCapsule,
    /// Center plus 2^8 boundary samples all strictly inside: a sampled
    /// certificate, weaker than the single-capsule one.
    SampledCover,
}

/// One built level: a parallel capsule family on the lattice of lines
/// `across == k * spacing`, stored in (k, lo) order.
#[derive(Clone, Debug)]
pub struct Level {
    pub dir: Dir,
    pub spacing: f64,
    pub radius: f64,
    k_min: i64,
    /// Per-line index range into `caps`, one entry per lattice line.
    buckets: Vec<(u32, u32)>,
    pub caps: Vec<Capsule>,
    /// Lattice line of each capsule, parallel to `caps`.
    pub ks: Vec<i64>,
    /// Along-line parameter span of each axis, parallel to `caps`.
    params: Vec<(f64, f64)>,
}

impl Level {
    fn from_parts(
        dir: Dir,
        spacing: f64,
        radius: f64,
        k_min: i64,
        k_count: usize,
        caps: Vec<Capsule>,
        ks: Vec<i64>,
    ) -> Result<Level> {
        let params: Vec<(f64, f64)> = caps
            .iter()
            .map(|c| {
                let (a, b) = (dir.dot(c.a), dir.dot(c.b));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        let mut buckets = vec![(0u32, 0u32); k_count];
        let mut i = 0usize;
        for (bk, bucket) in buckets.iter_mut().enumerate() {
            let k = k_min + bk as i64;
            let start = i;
            while i < ks.len() && ks[i] == k {
                i += 1;
            }
            *bucket = (start as u32, i as u32);
        }
        if i != ks.len() {
            return Err(Error::Parse("capsules are not sorted by lattice line".into()));
        }
        Ok(Level { dir, spacing, radius, k_min, buckets, caps, ks, params })
    }

    pub fn k_bounds(&self) -> (i64, i64) {
        (self.k_min, self.k_min + self.buckets.len() as i64 - 1)
    }

    pub fn line(&self, k: i64) -> Line {
        Line::new(self.dir, k as f64 * self.spacing)
    }

    /// Capsules on lattice line `k`: (first index, capsules, along spans).
    pub fn pieces(&self, k: i64) -> (u32, &[Capsule], &[(f64, f64)]) {
        let bk = k - self.k_min;
        if bk < 0 || bk as usize >= self.buckets.len() {
            return (0, &[], &[]);
        }
        let (s, e) = self.buckets[bk as usize];
        (s, &self.caps[s as usize..e as usize], &self.params[s as usize..e as usize])
    }

    /// Exact nearest capsule: signed distance and index, first-best on
    /// ties. Values at or above `prune` may be reported loosely (anything
    /// >= prune), which keeps multi-level folds exact and fast.
    pub fn scan_nearest(&self, p: Point, prune: f64) -> (f64, Option<u32>) {
        let mut best = f64::INFINITY;
        let mut best_idx = None;
        if self.buckets.is_empty() {
            return (best, best_idx);
        }
        let along = self.dir.dot(p);
        let across = self.dir.perp().dot(p);
        let (k_lo, k_hi) = self.k_bounds();
        let k0 = (across / self.spacing).round_ties_even() as i64;
        let mut d = 0i64;
        loop {
            let thr = best.min(prune);
            let candidates = [k0 - d, k0 + d];
            let take = if d == 0 { 1 } else { 2 };
            let mut live = false;
            for &k in &candidates[..take] {
                // No capsule on line k can beat thr if even the infinite
                // line is too far.
                let gap = (across - k as f64 * self.spacing).abs() - self.radius;
                if gap < thr {
                    live = true;
                    if (k_lo..=k_hi).contains(&k) {
                        self.eval_line(k, along, p, &mut best, &mut best_idx);
                    }
                }
            }
            if !live || (k0 - d < k_lo && k0 + d > k_hi) {
                break;
            }
            d += 1;
        }
        (best, best_idx)
    }

    fn eval_line(&self, k: i64, along: f64, p: Point, best: &mut f64, best_idx: &mut Option<u32>) {
        let (base, caps, params) = self.pieces(k);
        if caps.is_empty() {
            return;
        }
        // Pieces on one line are collinear and disjoint, so the nearest
        // one flanks the along coordinate; a small window around the
        // partition point absorbs fp jitter in the stored spans.
        let idx = params.partition_point(|pc| pc.0 <= along);
        let lo = idx.saturating_sub(2);
        let hi = (idx + 2).min(caps.len());
        for (i, cap) in caps.iter().enumerate().take(hi).skip(lo) {
            let sd = cap.signed_distance(p);
            if sd < *best {
                *best = sd;
                *best_idx = Some(base + i as u32);
            }
        }
    }

    /// Collects the parameter intervals of `line` that come within
    /// `self.radius + inflate` of this level's capsules.
    fn cuts_for_line(&self, line: Line, extent: Interval, inflate: f64, out: &mut Vec<Interval>) {
        if self.caps.is_empty() {
            return;
        }
        let w = self.dir;
        let wp = w.perp();
        let reach = self.radius + inflate;
        let p0 = line.point_at(extent.lo);
        let p1 = line.point_at(extent.hi);
        let (a0, a1) = (wp.dot(p0), wp.dot(p1));
        let (amin, amax) = if a0 <= a1 { (a0, a1) } else { (a1, a0) };
        let (k_lo, k_hi) = self.k_bounds();
        let c_lo = (((amin - reach) / self.spacing).floor() as i64).max(k_lo);
        let c_hi = (((amax + reach) / self.spacing).ceil() as i64).min(k_hi);

        let coef = wp.dot(line.dir.vec());
        let parallel = coef.abs() < 1e-9;
        let (b0, b1) = (w.dot(p0), w.dot(p1));
        let (bmin, bmax) = if b0 <= b1 { (b0, b1) } else { (b1, b0) };
        let c0 = wp.dot(line.point_at(0.0));

        for k in c_lo..=c_hi {
            let (base, caps, params) = self.pieces(k);
            let _ = base;
            if caps.is_empty() {
                continue;
            }
            // Window of along-coordinates (this level's frame) whose
            // pieces can reach the line: for a transversal crossing an
            // axis point at along-distance q from the crossing sits at
            // q*sin(theta) from the line; for parallels the extent's
            // along image plus reach bounds everything.
            let (w_lo, w_hi) = if parallel {
                (bmin - reach, bmax + reach)
            } else {
                let t_c = (k as f64 * self.spacing - c0) / coef;
                let a_c = w.dot(line.point_at(t_c));
                let half = reach / coef.abs() * (1.0 + 1e-12) + 1e-18;
                (a_c - half, a_c + half)
            };
            let start = params.partition_point(|pc| pc.1 < w_lo);
            for (cap, pc) in caps[start..].iter().zip(&params[start..]) {
                if pc.0 > w_hi {
                    break;
                }
                if let Some(iv) = line_capsule_interval(line, cap, inflate) {
                    out.push(iv);
                }
            }
        }
    }
}

/// Lattice line indices of family `n` whose lines meet the closed box.
/// Boundary-touching lines are included.
fn lattice_range(dir: Dir, spacing: f64, bounds: Aabb) -> (i64, i64) {
    let n = dir.perp();
    let corners = [
        bounds.min,
        Point::new(bounds.max.x, bounds.min.y),
        Point::new(bounds.min.x, bounds.max.y),
        bounds.max,
    ];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in corners {
        let a = n.dot(c);
        lo = lo.min(a);
        hi = hi.max(a);
    }
    // The epsilon keeps exactly-touching lines in; overshooting lines are
    // clipped away later, so erring inclusive is safe.
    let eps = 1.0 / (1u64 << 20) as f64;
    (((lo / spacing) - eps).ceil() as i64, ((hi / spacing) + eps).floor() as i64)
}

/// The line family of level `n` clipped to the padded window: the lattice
/// `across == k * 2^(-6n)` in the direction the schedule assigns to `n`.
pub fn line_family(
    n: u32,
    window: &Window,
    schedule: &DirectionSchedule,
) -> Result<Vec<(i64, Line)>> {
    if n == 0 || n > MAX_DEPTH {
        return Err(Error::DepthCap { requested: n, max: MAX_DEPTH });
    }
    window.validate()?;
    let dir = schedule.direction_at(n as u64);
    let s = spacing(n);
    let (k_lo, k_hi) = lattice_range(dir, s, window.padded());
    let count = (k_hi - k_lo + 1).max(0) as u64;
    if count > (1 << 26) {
        return Err(Error::Budget { what: "lines", got: count, limit: 1 << 26 });
    }
    Ok((k_lo..=k_hi).map(|k| (k, Line::new(dir, k as f64 * s))).collect())
}

/// A finite-depth build: an immutable stack of levels answering exact
/// geometric queries on the core window. Queries take `&self` and the
/// structure is plain data, so shared references across threads are safe.
#[derive(Clone, Debug)]
pub struct LevelSet {
    pub window: Window,
    pub schedule: DirectionSchedule,
    pub budgets: Budgets,
    pub levels: Vec<Level>,
}

impl LevelSet {
    /// Builds levels 1..=depth. Depth 0 is legal and empty: every point
    /// is outside.
    pub fn build(
        window: Window,
        schedule: DirectionSchedule,
        budgets: Budgets,
        depth: u32,
    ) -> Result<LevelSet> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthCap { requested: depth, max: MAX_DEPTH });
        }
        window.validate_for_depth(depth)?;
        let mut ls = LevelSet { window, schedule, budgets, levels: Vec::new() };
        for n in 1..=depth {
            ls = ls.build_level(n)?;
        }
        Ok(ls)
    }

    /// Appends level `n`, which must be exactly one past the current
    /// depth. The level is laid out on the padded window inflated by
    /// 3 * radius(n): enough margin that every deeper level, and every
    /// core query, sees exactly the structure an unbounded build would
    /// have (the margins shrink 64x per level, so 3 covers the chain).
    pub fn build_level(mut self, n: u32) -> Result<LevelSet> {
        if n == 0 || n > MAX_DEPTH {
            return Err(Error::DepthCap { requested: n, max: MAX_DEPTH });
        }
        if n as usize != self.levels.len() + 1 {
            return Err(Error::Precondition(format!(
                "build_level({n}) on a depth-{} set",
                self.levels.len()
            )));
        }
        // The pad floor depends on the final depth and is enforced by
        // `build`; incremental callers own that choice. Sign exactness on
        // the core never depends on it: each level's build region extends
        // 3 radii past the padded window, which covers containment reach.
        let dir = self.schedule.direction_at(n as u64);
        let s = spacing(n);
        let r = radius(n);
        let region = self.window.padded().inflate(3.0 * r);
        let (k_lo, k_hi) = lattice_range(dir, s, region);
        let line_count = (k_hi - k_lo + 1).max(0) as u64;
        if line_count > self.budgets.max_lines_per_family {
            return Err(Error::Budget {
                what: "lines per family",
                got: line_count,
                limit: self.budgets.max_lines_per_family,
            });
        }

        let mut caps = Vec::new();
        let mut ks = Vec::new();
        let prior: u64 = self.levels.iter().map(|l| l.caps.len() as u64).sum();
        for k in k_lo..=k_hi {
            let line = Line::new(dir, k as f64 * s);
            let Some(extent) = clip_line_to_aabb(line, region) else {
                continue;
            };
            let mut cuts = Vec::new();
            for lvl in &self.levels {
                lvl.cuts_for_line(line, extent, s, &mut cuts);
            }
            for iv in subtract_intervals(extent, cuts) {
                caps.push(Capsule::new(line.point_at(iv.lo), line.point_at(iv.hi), r));
                ks.push(k);
            }
            if prior + caps.len() as u64 > self.budgets.max_capsules {
                return Err(Error::Budget {
                    what: "capsules",
                    got: prior + caps.len() as u64,
                    limit: self.budgets.max_capsules,
                });
            }
        }
        let k_count = (k_hi - k_lo + 1).max(0) as usize;
        self.levels.push(Level::from_parts(dir, s, r, k_lo, k_count, caps, ks)?);
        Ok(self)
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level(&self, n: u32) -> &Level {
        &self.levels[n as usize - 1]
    }

    fn check_query(&self, n: u32, p: Point) -> Result<()> {
        if n as usize > self.levels.len() {
            return Err(Error::Precondition(format!(
                "query at level {n} on a depth-{} set",
                self.levels.len()
            )));
        }
        if !self.window.in_core(p) {
            return Err(Error::OutsideWindow { x: p.x, y: p.y });
        }
        Ok(())
    }

    /// Signed distance from `p` to the union of levels 1..=n: negative
    /// inside, positive outside, +inf when n = 0. Exact to fp rounding
    /// for magnitudes below the pad; beyond that, truncation at the build
    /// boundary can only overstate it.
    pub fn signed_distance(&self, n: u32, p: Point) -> Result<f64> {
        self.check_query(n, p)?;
        let mut best = f64::INFINITY;
        for lvl in &self.levels[..n as usize] {
            let (sd, _) = lvl.scan_nearest(p, best);
            if sd < best {
                best = sd;
            }
        }
        Ok(best)
    }

    /// Distance from `p` to the union of levels 1..=n (0 inside).
    pub fn dist_to_h(&self, n: u32, p: Point) -> Result<f64> {
        Ok(self.signed_distance(n, p)?.max(0.0))
    }

    /// A lower bound on the distance that also holds for the unbounded
    /// construction: structure outside the build cannot be closer than
    /// the padded boundary.
    pub fn dist_to_h_certified(&self, n: u32, p: Point) -> Result<f64> {
        let d = self.dist_to_h(n, p)?;
        Ok(d.min(self.window.padded().depth_inside(p)))
    }

    pub fn membership(&self, n: u32, p: Point) -> Result<Membership> {
        let sd = self.signed_distance(n, p)?;
        Ok(if sd < -TOL {
            Membership::In
        } else if sd > TOL {
            Membership::Out
        } else {
            Membership::Boundary
        })
    }

    /// Nearest capsule among levels 1..=n: (level, capsule index, signed
    /// distance). Ties keep the shallowest level, then the build order.
    pub fn nearest_capsule(&self, n: u32, p: Point) -> Result<Option<(u32, u32, f64)>> {
        self.check_query(n, p)?;
        let mut best = f64::INFINITY;
        let mut found = None;
        for (li, lvl) in self.levels[..n as usize].iter().enumerate() {
            let (sd, idx) = lvl.scan_nearest(p, best);
            if sd < best {
                best = sd;
                found = Some((li as u32 + 1, idx.expect("finite sd has a witness"), sd));
            }
        }
        Ok(found)
    }

    /// Does the closed ball B(center, rho) sit inside the open union of
    /// levels 1..=n? Exact single-capsule containment is tried first
    /// (strictly: a boundary-grazing ball does not count); otherwise a
    /// sampled cover of the boundary circle, honestly flagged.
    pub fn ball_inside(&self, n: u32, center: Point, rho: f64) -> Result<Option<BallCertificate>> {
        if n as usize > self.levels.len() {
            return Err(Error::Precondition(format!(
                "query at level {n} on a depth-{} set",
                self.levels.len()
            )));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::Precondition(format!("ball radius {rho} invalid")));
        }
        if self.window.padded().depth_inside(center) < rho {
            return Err(Error::PaddingInsufficient(format!(
                "ball of radius {rho} leaves the padded window"
            )));
        }
        for lvl in &self.levels[..n as usize] {
            if lvl.radius <= rho {
                continue;
            }
            let across = lvl.dir.perp().dot(center);
            let along = lvl.dir.dot(center);
            // Containment needs axis distance < radius - rho << spacing,
            // so only the nearest lattice line can host the capsule.
            let k = (across / lvl.spacing).round_ties_even() as i64;
            let (_, caps, params) = lvl.pieces(k);
            if caps.is_empty() {
                continue;
            }
            let idx = params.partition_point(|pc| pc.0 <= along);
            for i in idx.saturating_sub(2)..(idx + 2).min(caps.len()) {
                let d = crate::geom::dist_point_segment(center, caps[i].a, caps[i].b);
                if d + rho < caps[i].r {
                    return Ok(Some(BallCertificate::SingleCapsule));
                }
            }
        }
        // Sampled fallback: center and 2^8 boundary points all strictly
        // inside. Queries may leave the core, so go straight to the
        // levels (the padded precondition above keeps them meaningful).
        if self.raw_membership(n, center) != Membership::In {
            return Ok(None);
        }
        for i in 0..256 {
            let phi = TAU * (i as f64) / 256.0;
            let q = center + Point::new(phi.cos(), phi.sin()) * rho;
            if self.raw_membership(n, q) != Membership::In {
                return Ok(None);
            }
        }
        Ok(Some(BallCertificate::SampledCover))
    }

    fn check_padded(&self, n: u32, p: Point) -> Result<()> {
        if n as usize > self.levels.len() {
            return Err(Error::Precondition(format!(
                "query at level {n} on a depth-{} set",
                self.levels.len()
            )));
        }
        if !self.window.padded().contains(p) {
            return Err(Error::OutsideWindow { x: p.x, y: p.y });
        }
        Ok(())
    }

    /// Walk-internal queries fence on the padded window instead of the
    /// core: intermediate walk points may leave the core, and padded
    /// answers are still exact for the short reaches walks use.
    pub(crate) fn raw_signed_distance(&self, n: u32, p: Point) -> Result<f64> {
        self.check_padded(n, p)?;
        let mut best = f64::INFINITY;
        for lvl in &self.levels[..n as usize] {
            let (sd, _) = lvl.scan_nearest(p, best);
            if sd < best {
                best = sd;
            }
        }
        Ok(best)
    }

    pub(crate) fn raw_membership_checked(&self, n: u32, p: Point) -> Result<Membership> {
        self.check_padded(n, p)?;
        Ok(self.raw_membership(n, p))
    }

    pub(crate) fn raw_nearest(&self, n: u32, p: Point) -> Result<Option<(u32, u32, f64)>> {
        self.check_padded(n, p)?;
        let mut best = f64::INFINITY;
        let mut found = None;
        for (li, lvl) in self.levels[..n as usize].iter().enumerate() {
            let (sd, idx) = lvl.scan_nearest(p, best);
            if sd < best {
                best = sd;
                found = Some((li as u32 + 1, idx.expect("finite sd has a witness"), sd));
            }
        }
        Ok(found)
    }

    /// Certified lower bound on the distance to the unbounded union,
    /// padded-fenced.
    pub(crate) fn raw_dist_certified(&self, n: u32, p: Point) -> Result<f64> {
        let d = self.raw_signed_distance(n, p)?.max(0.0);
        Ok(d.min(self.window.padded().depth_inside(p)))
    }

    /// Membership without the core-window fence; used internally where
    /// the padded precondition is already established.
    fn raw_membership(&self, n: u32, p: Point) -> Membership {
        let mut best = f64::INFINITY;
        for lvl in &self.levels[..n as usize] {
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

    /// Reference query path: a flat scan over every capsule, bypassing
    /// the lattice index. Used to validate index transparency.
    pub fn signed_distance_exhaustive(&self, n: u32, p: Point) -> Result<f64> {
        self.check_query(n, p)?;
        let mut best = f64::INFINITY;
        for lvl in &self.levels[..n as usize] {
            for cap in &lvl.caps {
                best = best.min(cap.signed_distance(p));
            }
        }
        Ok(best)
    }

    /// Versioned text serialization, bit-exact: floats are stored as hex
    /// bit patterns. `load(dump(ls))` reproduces every capsule bit for
    /// bit, and dumping again yields identical bytes.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let b = |f: f64| format!("{:#018x}", f.to_bits());
        writeln!(s, "porous levelset v1").unwrap();
        writeln!(s, "angle {}", self.schedule.angle_rule).unwrap();
        writeln!(s, "blocks {}", self.schedule.block_order).unwrap();
        writeln!(s, "center {} {}", b(self.window.center.x), b(self.window.center.y)).unwrap();
        writeln!(s, "half {}", b(self.window.half_width)).unwrap();
        writeln!(s, "pad {}", b(self.window.pad)).unwrap();
        writeln!(
            s,
            "budgets {} {}",
            self.budgets.max_lines_per_family, self.budgets.max_capsules
        )
        .unwrap();
        writeln!(s, "depth {}", self.levels.len()).unwrap();
        for (i, lvl) in self.levels.iter().enumerate() {
            writeln!(
                s,
                "level {} count {} dir {} {} spacing {} radius {}",
                i + 1,
                lvl.caps.len(),
                b(lvl.dir.x()),
                b(lvl.dir.y()),
                b(lvl.spacing),
                b(lvl.radius)
            )
            .unwrap();
            for (cap, k) in lvl.caps.iter().zip(&lvl.ks) {
                writeln!(
                    s,
                    "cap {} {} {} {} {}",
                    k,
                    b(cap.a.x),
                    b(cap.a.y),
                    b(cap.b.x),
                    b(cap.b.y)
                )
                .unwrap();
            }
        }
        writeln!(s, "end").unwrap();
        s
    }

    pub fn load(text: &str) -> Result<LevelSet> {
        let mut lines = text.lines();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("levelset dump ended before {what}")))
        };
        let header = next("header")?;
        if header != "porous levelset v1" {
            return Err(Error::Parse(format!("unknown levelset header '{header}'")));
        }
        let angle = field(next("angle")?, "angle")?.parse()?;
        let blocks = field(next("blocks")?, "blocks")?.parse()?;
        let schedule = DirectionSchedule::new(angle, blocks)?;
        let center = {
            let toks = fields(next("center")?, "center", 2)?;
            Point::new(parse_bits(&toks[0])?, parse_bits(&toks[1])?)
        };
        let half_width = parse_bits(&fields(next("half")?, "half", 1)?[0])?;
        let pad = parse_bits(&fields(next("pad")?, "pad", 1)?[0])?;
        let window = Window::new(center, half_width, pad)?;
        let budget_toks = fields(next("budgets")?, "budgets", 2)?;
        let budgets = Budgets {
            max_lines_per_family: parse_u64(&budget_toks[0])?,
            max_capsules: parse_u64(&budget_toks[1])?,
        };
        let depth: u32 = parse_u64(&fields(next("depth")?, "depth", 1)?[0])? as u32;
        if depth > MAX_DEPTH {
            return Err(Error::DepthCap { requested: depth, max: MAX_DEPTH });
        }

        let mut levels = Vec::new();
        for n in 1..=depth {
            let toks = fields(next("level header")?, "level", 9)?;
            if parse_u64(&toks[0])? != n as u64 {
                return Err(Error::Parse(format!("level headers out of order at {n}")));
            }
            if toks[1] != "count" || toks[3] != "dir" || toks[6] != "spacing" || toks[8] != "radius"
            {
                return Err(Error::Parse(format!("malformed level header for level {n}")));
            }
            let count = parse_u64(&toks[2])? as usize;
            let dir = Dir::new(parse_bits(&toks[4])?, parse_bits(&toks[5])?)?;
            let spacing = parse_bits(&toks[7])?;
            let radius = parse_bits(&toks[9])?;
            let mut caps = Vec::with_capacity(count);
            let mut ks = Vec::with_capacity(count);
            for _ in 0..count {
                let toks = fields(next("capsule")?, "cap", 5)?;
                ks.push(
                    toks[0]
                        .parse::<i64>()
                        .map_err(|e| Error::Parse(format!("bad lattice index: {e}")))?,
                );
                caps.push(Capsule::new(
                    Point::new(parse_bits(&toks[1])?, parse_bits(&toks[2])?),
                    Point::new(parse_bits(&toks[3])?, parse_bits(&toks[4])?),
                    radius,
                ));
            }
            if ks.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Parse(format!("level {n} capsules out of lattice order")));
            }
            let k_min = ks.first().copied().unwrap_or(0);
            let k_max = ks.last().copied().unwrap_or(0);
            let k_count = if ks.is_empty() { 0 } else { (k_max - k_min + 1) as usize };
            levels.push(Level::from_parts(dir, spacing, radius, k_min, k_count, caps, ks)?);
        }
        if next("end")? != "end" {
            return Err(Error::Parse("missing end marker".into()));
        }
        Ok(LevelSet { window, schedule, budgets, levels })
    }
}

fn field(line: &str, key: &str) -> Result<String> {
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("expected '{key} ...', got '{line}'")))?;
    Ok(rest.trim().to_string())
}

fn fields(line: &str, key: &str, want: usize) -> Result<Vec<String>> {
    let rest = field(line, key)?;
    let toks: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    if toks.len() < want {
        return Err(Error::Parse(format!("'{key}' line needs {want} fields, got '{line}'")));
    }
    Ok(toks)
}

fn parse_bits(tok: &str) -> Result<f64> {
    let h = tok
        .strip_prefix("0x")
        .ok_or_else(|| Error::Parse(format!("expected hex bits, got '{tok}'")))?;
    u64::from_str_radix(h, 16)
        .map(f64::from_bits)
        .map_err(|e| Error::Parse(format!("bad hex bits '{tok}': {e}")))
}

fn parse_u64(tok: &str) -> Result<u64> {
    tok.parse::<u64>().map_err(|e| Error::Parse(format!("bad integer '{tok}': {e}")))
}
