//! Points, directions, lines, and capsules: the only shapes the
//! construction ever touches, plus the interval algebra used to cut line
//! families against existing capsules.

use crate::{Error, Result};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point in the plane, doubling as a vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Z component of the cross product: signed parallelogram area.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A unit vector. `new` normalizes; the cardinal constants and `perp` are
/// exact, so axis-aligned geometry stays exact end to end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dir(Point);

impl Dir {
    pub const EAST: Dir = Dir(Point { x: 1.0, y: 0.0 });
    pub const NORTH: Dir = Dir(Point { x: 0.0, y: 1.0 });
    pub const WEST: Dir = Dir(Point { x: -1.0, y: 0.0 });
    pub const SOUTH: Dir = Dir(Point { x: 0.0, y: -1.0 });

    pub fn new(x: f64, y: f64) -> Result<Dir> {
        let n = (x * x + y * y).sqrt();
        if !n.is_finite() || n < 1e-12 {
            return Err(Error::Degenerate(format!("cannot normalize ({x}, {y})")));
        }
        Ok(Dir(Point::new(x / n, y / n)))
    }

    pub fn from_angle(theta: f64) -> Dir {
        Dir(Point::new(theta.cos(), theta.sin()))
    }

    pub fn x(self) -> f64 {
        self.0.x
    }

    pub fn y(self) -> f64 {
        self.0.y
    }

    pub fn vec(self) -> Point {
        self.0
    }

    /// Quarter turn counterclockwise: (x, y) -> (-y, x).
    pub fn perp(self) -> Dir {
        Dir(Point::new(-self.0.y, self.0.x))
    }

    pub fn flip(self) -> Dir {
        Dir(-self.0)
    }

    pub fn dot(self, p: Point) -> f64 {
        self.0.dot(p)
    }

    pub fn angle(self) -> f64 {
        self.0.y.atan2(self.0.x)
    }
}

/// An infinite line in normal form: `point_at(t) = t*dir + offset*dir.perp()`.
///
/// `offset` is the signed distance from the origin and `t` is arc length
/// along the line, so a parallel family shares `dir` and steps `offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub dir: Dir,
    pub offset: f64,
}

impl Line {
    pub fn new(dir: Dir, offset: f64) -> Line {
        Line { dir, offset }
    }

    pub fn point_at(self, t: f64) -> Point {
        self.dir.vec() * t + self.dir.perp().vec() * self.offset
    }

    /// Frame coordinates of `p`: (along, across). The line is the locus
    /// `across == self.offset`.
    pub fn coords_of(self, p: Point) -> (f64, f64) {
        (self.dir.dot(p), self.dir.perp().dot(p))
    }
}

/// Closest point to `p` on the closed segment [a, b].
pub fn segment_foot(p: Point, a: Point, b: Point) -> Point {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    p.dist(segment_foot(p, a, b))
}

/// Distance between two closed segments; zero when they cross.
pub fn dist_segment_segment(a1: Point, b1: Point, a2: Point, b2: Point) -> f64 {
    let d1 = b1 - a1;
    let d2 = b2 - a2;
    let s1 = d1.cross(a2 - a1);
    let s2 = d1.cross(b2 - a1);
    let s3 = d2.cross(a1 - a2);
    let s4 = d2.cross(b1 - a2);
    // Proper crossing needs strictly opposite signs on both sides. Every
    // touching or collinear case leaves an endpoint at distance zero from
    // the other segment, so falling through stays correct.
    if s1 * s2 < 0.0 && s3 * s4 < 0.0 {
        return 0.0;
    }
    dist_point_segment(a1, a2, b2)
        .min(dist_point_segment(b1, a2, b2))
        .min(dist_point_segment(a2, a1, b1))
        .min(dist_point_segment(b2, a1, b1))
}

/// Closest pair of parameters (s, t) in [0, 1]^2 between segments
/// [a1, b1] and [a2, b2], plus the distance they realize. Clamped
/// coordinate descent on the quadratic distance: project the unclamped
/// minimizer, then re-minimize each parameter against the other's clamp,
/// which is exact for this bilinear problem.
pub fn segment_closest_params(a1: Point, b1: Point, a2: Point, b2: Point) -> (f64, f64, f64) {
    let d1 = b1 - a1;
    let d2 = b2 - a2;
    let r = a1 - a2;
    let aa = d1.norm2();
    let ee = d2.norm2();
    let f = d2.dot(r);

    let (mut s, mut t);
    if aa == 0.0 && ee == 0.0 {
        (s, t) = (0.0, 0.0);
    } else if aa == 0.0 {
        s = 0.0;
        t = (f / ee).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if ee == 0.0 {
            t = 0.0;
            s = (-c / aa).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = aa * ee - b * b;
            s = if denom != 0.0 { ((b * f - c * ee) / denom).clamp(0.0, 1.0) } else { 0.0 };
            t = (b * s + f) / ee;
            if t < 0.0 {
                t = 0.0;
                s = (-c / aa).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / aa).clamp(0.0, 1.0);
            }
        }
    }
    let p1 = a1 + d1 * s;
    let p2 = a2 + d2 * t;
    (s, t, p1.dist(p2))
}

/// A closed axis segment fattened by radius `r`. Open or closed reading of
/// the fattened set is the caller's choice, imposed through strict or
/// tolerant comparisons on `signed_distance`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Capsule {
    pub a: Point,
    pub b: Point,
    pub r: f64,
}

impl Capsule {
    pub fn new(a: Point, b: Point, r: f64) -> Capsule {
        Capsule { a, b, r }
    }

    /// Negative inside, zero on the surface, positive outside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        dist_point_segment(p, self.a, self.b) - self.r
    }

    pub fn distance(&self, p: Point) -> f64 {
        self.signed_distance(p).max(0.0)
    }

    /// Closest point to `p` on the axis segment.
    pub fn axis_foot(&self, p: Point) -> Point {
        segment_foot(p, self.a, self.b)
    }

    pub fn axis_len(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn bbox(&self) -> Aabb {
        Aabb {
            min: Point::new(self.a.x.min(self.b.x) - self.r, self.a.y.min(self.b.y) - self.r),
            max: Point::new(self.a.x.max(self.b.x) + self.r, self.a.y.max(self.b.y) + self.r),
        }
    }
}

/// Axis-aligned box, closed on all sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: Point, max: Point) -> Aabb {
        Aabb { min, max }
    }

    pub fn centered(center: Point, half: f64) -> Aabb {
        Aabb {
            min: Point::new(center.x - half, center.y - half),
            max: Point::new(center.x + half, center.y + half),
        }
    }

    pub fn inflate(self, r: f64) -> Aabb {
        Aabb {
            min: Point::new(self.min.x - r, self.min.y - r),
            max: Point::new(self.max.x + r, self.max.y + r),
        }
    }

    pub fn contains(self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn center(self) -> Point {
        (self.min + self.max) * 0.5
    }

    /// Distance from `p` to the boundary when `p` is inside, else 0.
    pub fn depth_inside(self, p: Point) -> f64 {
        let dx = (p.x - self.min.x).min(self.max.x - p.x);
        let dy = (p.y - self.min.y).min(self.max.y - p.y);
        dx.min(dy).max(0.0)
    }
}

/// A parameter interval on a line. Empty when `hi <= lo`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn len(self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// Parameter range where `line` runs through `cap` fattened by `inflate`:
/// `{ t : dist(line.point_at(t), axis) < cap.r + inflate }`.
///
/// The capsule is a union of two end disks and the axis-aligned slab
/// between them, each convex, so each meets the line in one interval and
/// the pieces overlap wherever two of them meet the line. The result is a
/// single interval: the min/max envelope of the nonempty pieces. Tangent
/// or missing lines give `None`; a grazing contact has empty interior and
/// also gives `None`.
pub fn line_capsule_interval(line: Line, cap: &Capsule, inflate: f64) -> Option<Interval> {
    let r = cap.r + inflate;
    if r <= 0.0 {
        return None;
    }
    let v = line.dir;
    let n = v.perp();
    let base = n.vec() * line.offset;

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;

    for c in [cap.a, cap.b] {
        let u = v.dot(c - base);
        let w = n.dot(c - base);
        let d2 = r * r - w * w;
        if d2 > 0.0 {
            let s = d2.sqrt();
            lo = lo.min(u - s);
            hi = hi.max(u + s);
        }
    }

    let ab = cap.b - cap.a;
    let len = ab.norm();
    if len > 0.0 {
        let e = ab / len;
        let eperp = Point::new(-e.y, e.x);
        // In segment coordinates the line is affine: s(t) = t*(v.e) + cs,
        // q(t) = t*(v.e_perp) + cq. The open slab is 0 < s < len, |q| < r.
        let cs = (base - cap.a).dot(e);
        let cq = (base - cap.a).dot(eperp);
        let mut slo = f64::NEG_INFINITY;
        let mut shi = f64::INFINITY;
        let mut empty = false;
        for (coef, c0, mn, mx) in [(v.dot(e), cs, 0.0, len), (v.dot(eperp), cq, -r, r)] {
            if coef == 0.0 {
                if c0 <= mn || c0 >= mx {
                    empty = true;
                    break;
                }
            } else {
                let t0 = (mn - c0) / coef;
                let t1 = (mx - c0) / coef;
                let (a, b) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
                slo = slo.max(a);
                shi = shi.min(b);
            }
        }
        // Points with s exactly 0 or len but |q| < r sit inside an end
        // disk, so the strict slab loses nothing from the union.
        if !empty && slo < shi {
            lo = lo.min(slo);
            hi = hi.max(shi);
        }
    }

    (lo < hi).then_some(Interval { lo, hi })
}

/// Parameter range where the line lies inside the closed box, or `None`.
pub fn clip_line_to_aabb(line: Line, bounds: Aabb) -> Option<Interval> {
    let base = line.dir.perp().vec() * line.offset;
    let v = line.dir.vec();
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (b, d, mn, mx) in [
        (base.x, v.x, bounds.min.x, bounds.max.x),
        (base.y, v.y, bounds.min.y, bounds.max.y),
    ] {
        if d == 0.0 {
            if b < mn || b > mx {
                return None;
            }
        } else {
            let t0 = (mn - b) / d;
            let t1 = (mx - b) / d;
            let (a, z) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
            lo = lo.max(a);
            hi = hi.min(z);
        }
    }
    (lo <= hi).then_some(Interval { lo, hi })
}

/// Slivers below this length are numerical seams, not geometry; the
/// subtraction pipeline drops them.
pub const MIN_SLIVER: f64 = 1e-15;

/// Removes open cut intervals from a closed extent, returning the closed
/// survivors in increasing order.
///
/// Open cuts leave their endpoints behind, so a survivor may share an
/// endpoint with a cut; two cuts that touch leave only a single point
/// between them, which is dropped along with any sliver shorter than
/// [`MIN_SLIVER`].
pub fn subtract_intervals(extent: Interval, mut cuts: Vec<Interval>) -> Vec<Interval> {
    let mut out = Vec::new();
    if extent.is_empty() {
        return out;
    }
    cuts.retain(|c| !c.is_empty() && c.hi > extent.lo && c.lo < extent.hi);
    cuts.sort_by(|a, b| a.lo.total_cmp(&b.lo));

    let mut cursor = extent.lo;
    for c in cuts {
        if c.lo > cursor {
            push_survivor(&mut out, cursor, c.lo);
        }
        cursor = cursor.max(c.hi);
        if cursor >= extent.hi {
            return out;
        }
    }
    push_survivor(&mut out, cursor, extent.hi);
    out
}

fn push_survivor(out: &mut Vec<Interval>, lo: f64, hi: f64) {
    if hi - lo >= MIN_SLIVER {
        out.push(Interval { lo, hi });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinals_are_exact_under_perp() {
        assert_eq!(Dir::EAST.perp(), Dir::NORTH);
        assert_eq!(Dir::NORTH.perp(), Dir::WEST);
        assert_eq!(Dir::WEST.perp(), Dir::SOUTH);
        assert_eq!(Dir::SOUTH.perp(), Dir::EAST);
        assert_eq!(Dir::EAST.flip(), Dir::WEST);
    }

    #[test]
    fn line_frame_round_trips() {
        let line = Line::new(Dir::new(3.0, 4.0).unwrap(), 0.75);
        let p = line.point_at(2.5);
        let (along, across) = line.coords_of(p);
        assert!((along - 2.5).abs() < 1e-12);
        assert!((across - 0.75).abs() < 1e-12);
    }

    #[test]
    fn segment_distance_cases() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(2.0, 0.0);
        assert_eq!(dist_point_segment(Point::new(1.0, 3.0), a, b), 3.0);
        assert_eq!(dist_point_segment(Point::new(-3.0, 4.0), a, b), 5.0);
        assert_eq!(dist_point_segment(Point::new(5.0, 4.0), a, b), 5.0);
        // Degenerate segment is a point.
        assert_eq!(dist_point_segment(Point::new(3.0, 4.0), a, a), 5.0);
    }

    #[test]
    fn segment_segment_distance() {
        let o = Point::ORIGIN;
        // Crossing.
        assert_eq!(
            dist_segment_segment(
                Point::new(-1.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, -1.0),
                Point::new(0.0, 1.0),
            ),
            0.0
        );
        // T touch at an interior point.
        assert_eq!(
            dist_segment_segment(
                Point::new(-1.0, 0.0),
                Point::new(1.0, 0.0),
                o,
                Point::new(0.0, 2.0),
            ),
            0.0
        );
        // Parallel offset.
        assert_eq!(
            dist_segment_segment(
                Point::new(0.0, 0.0),
                Point::new(4.0, 0.0),
                Point::new(1.0, 2.0),
                Point::new(3.0, 2.0),
            ),
            2.0
        );
        // Collinear with a gap.
        assert_eq!(
            dist_segment_segment(
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(3.0, 0.0),
                Point::new(5.0, 0.0),
            ),
            2.0
        );
    }

    #[test]
    fn closest_params_match_segment_distance() {
        let cases = [
            // Crossing: zero distance at interior params.
            (
                Point::new(-1.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, -1.0),
                Point::new(0.0, 1.0),
            ),
            // Parallel offset.
            (Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(1.0, 2.0), Point::new(3.0, 2.0)),
            // Endpoint to interior.
            (Point::new(0.0, 1.0), Point::new(0.0, 3.0), Point::new(-2.0, 0.0), Point::new(2.0, 0.0)),
            // Skew.
            (Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 0.0), Point::new(3.0, -1.0)),
            // Degenerate: both points.
            (Point::new(1.0, 1.0), Point::new(1.0, 1.0), Point::new(4.0, 5.0), Point::new(4.0, 5.0)),
        ];
        for (a1, b1, a2, b2) in cases {
            let (s, t, d) = segment_closest_params(a1, b1, a2, b2);
            assert!((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t));
            let want = dist_segment_segment(a1, b1, a2, b2);
            assert!((d - want).abs() < 1e-12, "{d} vs {want}");
            let p1 = a1 + (b1 - a1) * s;
            let p2 = a2 + (b2 - a2) * t;
            assert!((p1.dist(p2) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn capsule_signed_distance_signs() {
        let cap = Capsule::new(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 0.5);
        assert_eq!(cap.signed_distance(Point::ORIGIN), -0.5);
        assert_eq!(cap.signed_distance(Point::new(0.0, 0.5)), 0.0);
        assert_eq!(cap.signed_distance(Point::new(0.0, 2.0)), 1.5);
        assert_eq!(cap.distance(Point::ORIGIN), 0.0);
    }

    #[test]
    fn chord_through_capsule_matches_closed_form() {
        // Horizontal line at y = 0.25 through a capsule of radius 0.5 on
        // [-1, 0] x {0} .. [1, 0]: each end disk contributes a half-chord
        // of sqrt(0.25 - 0.0625).
        let cap = Capsule::new(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 0.5);
        let line = Line::new(Dir::EAST, 0.25);
        let iv = line_capsule_interval(line, &cap, 0.0).unwrap();
        let half = 0.433_012_701_892_219_3_f64;
        assert!((iv.lo - (-1.0 - half)).abs() < 1e-15);
        assert!((iv.hi - (1.0 + half)).abs() < 1e-15);
        assert!((iv.len() - (2.0 + 2.0 * half)).abs() < 1e-15);
    }

    #[test]
    fn tangent_and_missing_lines_yield_none() {
        let cap = Capsule::new(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 0.5);
        assert_eq!(line_capsule_interval(Line::new(Dir::EAST, 0.5), &cap, 0.0), None);
        assert_eq!(line_capsule_interval(Line::new(Dir::EAST, 0.75), &cap, 0.0), None);
        // Vertical line tangent to the right end disk.
        let vert = Line::new(Dir::NORTH, -1.5);
        assert_eq!(line_capsule_interval(vert, &cap, 0.0), None);
    }

    #[test]
    fn perpendicular_chord_only_meets_the_slab() {
        let cap = Capsule::new(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 0.5);
        // Vertical line at x = 0: crosses the slab, misses both end disks.
        // Line dir NORTH has perp WEST, so offset -x maps to the plane x = x0.
        let line = Line::new(Dir::NORTH, 0.0);
        let iv = line_capsule_interval(line, &cap, 0.0).unwrap();
        assert!((iv.lo - (-0.5)).abs() < 1e-15);
        assert!((iv.hi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inflate_widens_the_cut() {
        let cap = Capsule::new(Point::new(0.0, 0.0), Point::new(0.0, 0.0), 0.25);
        let line = Line::new(Dir::EAST, 0.0);
        let plain = line_capsule_interval(line, &cap, 0.0).unwrap();
        let fat = line_capsule_interval(line, &cap, 0.25).unwrap();
        assert!((plain.len() - 0.5).abs() < 1e-15);
        assert!((fat.len() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn point_capsule_is_a_disk() {
        let cap = Capsule::new(Point::new(2.0, 1.0), Point::new(2.0, 1.0), 1.0);
        let line = Line::new(Dir::EAST, 1.0);
        let iv = line_capsule_interval(line, &cap, 0.0).unwrap();
        assert!((iv.lo - 1.0).abs() < 1e-15);
        assert!((iv.hi - 3.0).abs() < 1e-15);
    }

    #[test]
    fn clip_line_to_box() {
        let bounds = Aabb::centered(Point::ORIGIN, 1.0);
        let iv = clip_line_to_aabb(Line::new(Dir::EAST, 0.5), bounds).unwrap();
        assert_eq!((iv.lo, iv.hi), (-1.0, 1.0));
        assert_eq!(clip_line_to_aabb(Line::new(Dir::EAST, 1.5), bounds), None);
        let diag = Line::new(Dir::new(1.0, 1.0).unwrap(), 0.0);
        let iv = clip_line_to_aabb(diag, bounds).unwrap();
        assert!((iv.len() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn subtraction_basic_and_seams() {
        let extent = Interval::new(0.0, 10.0);
        let out = subtract_intervals(extent, vec![Interval::new(2.0, 3.0), Interval::new(5.0, 6.0)]);
        assert_eq!(
            out,
            vec![Interval::new(0.0, 2.0), Interval::new(3.0, 5.0), Interval::new(6.0, 10.0)]
        );

        // Touching cuts leave a single point, which is dropped.
        let out = subtract_intervals(
            Interval::new(0.0, 4.0),
            vec![Interval::new(1.0, 2.0), Interval::new(2.0, 3.0)],
        );
        assert_eq!(out, vec![Interval::new(0.0, 1.0), Interval::new(3.0, 4.0)]);

        // Overlapping and out-of-order cuts merge.
        let out = subtract_intervals(
            Interval::new(0.0, 4.0),
            vec![Interval::new(2.5, 3.5), Interval::new(1.0, 3.0), Interval::new(-5.0, 0.5)],
        );
        assert_eq!(out, vec![Interval::new(0.5, 1.0), Interval::new(3.5, 4.0)]);

        // Full coverage erases everything.
        assert!(subtract_intervals(Interval::new(0.0, 1.0), vec![Interval::new(-1.0, 2.0)])
            .is_empty());

        // No cuts: the extent survives whole.
        assert_eq!(
            subtract_intervals(Interval::new(0.0, 1.0), vec![]),
            vec![Interval::new(0.0, 1.0)]
        );
    }

    #[test]
    fn open_cut_keeps_closed_survivor_endpoints() {
        // A cut ending exactly at the extent start removes nothing.
        let out = subtract_intervals(Interval::new(0.0, 1.0), vec![Interval::new(-1.0, 0.0)]);
        assert_eq!(out, vec![Interval::new(0.0, 1.0)]);
        // Survivors keep the endpoints that open cuts exclude.
        let out = subtract_intervals(Interval::new(0.0, 1.0), vec![Interval::new(0.25, 0.75)]);
        assert_eq!(out, vec![Interval::new(0.0, 0.25), Interval::new(0.75, 1.0)]);
    }
}
