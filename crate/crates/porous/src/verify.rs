//! Named property suites over a built set.
//!
//! Each suite re-checks one of the crate's guarantees on seeded samples
//! and reports aggregate pass/fail cases. Property failures land in the
//! report (callers map them to exit code 1); configuration problems
//! (bad suite name, sampler starvation) surface as errors instead.

use crate::construction::{LevelSet, Membership};
use crate::oracle::{compare_fields, default_band, Brute};
use crate::porosity::{
    find_boundary_point, find_hole, find_insulated_point, find_thick_center, is_insulated,
    scan_isotropic, column_invariance_check, walk_budget,
};
use crate::sampling::{sample_out_points, sample_standoff_points};
use crate::{radius, spacing, Error, Result, TOL};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Boundary walks land on the surface close to their seeds.
    Boundary,
    /// Capsule radii are bit-exact and thick centers certify full-radius
    /// holes next to closure points.
    Thick,
    /// Holes near outside points at every level, plus positive porosity
    /// ratios along a scale ladder at near-boundary points.
    Holes,
    /// Insulated points exist near outside points, with honest
    /// depth-exhaustion accounting and no false certificates.
    Separation,
    /// Translation invariance and capsule separation inside a column of
    /// same-direction levels.
    Columns,
    /// Grid agreement with the brute-force reference recursion.
    Oracle,
    All,
}

pub const SUITE_NAMES: &str = "boundary, thick, holes, separation, columns, oracle, all";

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "boundary" => Suite::Boundary,
            "thick" => Suite::Thick,
            "holes" => Suite::Holes,
            "separation" => Suite::Separation,
            "columns" => Suite::Columns,
            "oracle" => Suite::Oracle,
            "all" => Suite::All,
            other => {
                return Err(Error::Config(format!(
                    "unknown suite {other:?} (expected one of: {SUITE_NAMES})"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Boundary => "boundary",
            Suite::Thick => "thick",
            Suite::Holes => "holes",
            Suite::Separation => "separation",
            Suite::Columns => "columns",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CaseResult {
    fn ok(name: impl Into<String>, detail: impl Into<String>) -> CaseResult {
        CaseResult { name: name.into(), pass: true, detail: detail.into() }
    }
    fn fail(name: impl Into<String>, detail: impl Into<String>) -> CaseResult {
        CaseResult { name: name.into(), pass: false, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: Suite,
    pub samples: u32,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let tag = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        let failed = self.cases.iter().filter(|c| !c.pass).count();
        out.push_str(&format!(
            "verdict: {} ({} cases, {} failed, suite={}, samples={}, seed={})\n",
            if failed == 0 { "pass" } else { "fail" },
            self.cases.len(),
            failed,
            self.suite,
            self.samples,
            self.seed
        ));
        out
    }
}

pub fn run_suites(ls: &LevelSet, suite: Suite, samples: u32, seed: u64) -> Result<VerifyReport> {
    if samples == 0 {
        return Err(Error::Config("sample count must be positive".into()));
    }
    let mut cases = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Boundary) {
        cases.extend(boundary_suite(ls, samples, seed)?);
    }
    if want(Suite::Thick) {
        cases.extend(thick_suite(ls, samples, seed)?);
    }
    if want(Suite::Holes) {
        cases.extend(holes_suite(ls, samples, seed)?);
    }
    if want(Suite::Separation) {
        cases.extend(separation_suite(ls, samples, seed)?);
    }
    if want(Suite::Columns) {
        cases.extend(columns_suite(ls, samples, seed)?);
    }
    if want(Suite::Oracle) {
        cases.extend(oracle_suite(ls)?);
    }
    Ok(VerifyReport { suite, samples, seed, cases })
}

/// Pad big enough for level-n walks from core seeds?
fn walkable(ls: &LevelSet, n: u32) -> bool {
    ls.window.pad >= walk_budget(n)
}

fn boundary_suite(ls: &LevelSet, samples: u32, seed: u64) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    for n in 1..=ls.depth() {
        let name = format!("boundary walk n={n}");
        if !walkable(ls, n) {
            cases.push(CaseResult::ok(
                name,
                format!("skipped: pad {} below walk budget {}", ls.window.pad, walk_budget(n)),
            ));
            continue;
        }
        let bound = 2.0 * spacing(n);
        let seeds = sample_out_points(ls, n, samples as usize, spacing(n).min(ls.window.half_width / 4.0), seed)?;
        let mut worst = 0.0f64;
        let mut bad = 0u32;
        let mut first = String::new();
        for x in &seeds {
            match find_boundary_point(ls, n, *x) {
                Ok(z) => {
                    let d = x.dist(z);
                    worst = worst.max(d);
                    let on = ls.membership(n, z)? == Membership::Boundary;
                    if d >= bound || !on {
                        bad += 1;
                        if first.is_empty() {
                            first = format!("; first at ({}, {}): dist {d}, on_surface {on}", x.x, x.y);
                        }
                    }
                }
                Err(e) => {
                    bad += 1;
                    if first.is_empty() {
                        first = format!("; first at ({}, {}): {e}", x.x, x.y);
                    }
                }
            }
        }
        let detail = format!(
            "{}/{} walks within 2*spacing({n}), max excursion {worst:.3e}{first}",
            samples - bad,
            samples
        );
        cases.push(if bad == 0 { CaseResult::ok(name, detail) } else { CaseResult::fail(name, detail) });
    }
    Ok(cases)
}

fn thick_suite(ls: &LevelSet, samples: u32, seed: u64) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let mut caps = 0u64;
    let mut off = 0u64;
    for m in 1..=ls.depth() {
        let want = radius(m).to_bits();
        for c in &ls.level(m).caps {
            caps += 1;
            if c.r.to_bits() != want {
                off += 1;
            }
        }
    }
    let detail = format!("{caps} capsules, {off} with off-pattern radii");
    cases.push(if off == 0 {
        CaseResult::ok("capsule radii exact", detail)
    } else {
        CaseResult::fail("capsule radii exact", detail)
    });

    for n in 1..=ls.depth() {
        let name = format!("thick centers n={n}");
        if !walkable(ls, n) {
            cases.push(CaseResult::ok(
                name,
                format!("skipped: pad {} below walk budget {}", ls.window.pad, walk_budget(n)),
            ));
            continue;
        }
        let seeds = sample_out_points(ls, n, samples as usize, spacing(n).min(ls.window.half_width / 4.0), seed ^ 0xA5)?;
        let mut bad = 0u32;
        let mut first = String::new();
        for x in &seeds {
            let res = find_boundary_point(ls, n, *x).and_then(|z| {
                let hole = find_thick_center(ls, n, z)?;
                Ok((z, hole))
            });
            match res {
                Ok((z, hole)) => {
                    let good = hole.radius >= radius(n) - TOL
                        && z.dist(hole.center) <= radius(n) + 2.0 * TOL;
                    if !good {
                        bad += 1;
                        if first.is_empty() {
                            first = format!(
                                "; first at ({}, {}): radius {}, step {}",
                                x.x,
                                x.y,
                                hole.radius,
                                z.dist(hole.center)
                            );
                        }
                    }
                }
                Err(e) => {
                    bad += 1;
                    if first.is_empty() {
                        first = format!("; first at ({}, {}): {e}", x.x, x.y);
                    }
                }
            }
        }
        let detail = format!("{}/{samples} certified at radius(n)-tol{first}", samples - bad);
        cases.push(if bad == 0 { CaseResult::ok(name, detail) } else { CaseResult::fail(name, detail) });
    }
    Ok(cases)
}

fn holes_suite(ls: &LevelSet, samples: u32, seed: u64) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    for n in 1..=ls.depth() {
        let name = format!("holes n={n}");
        if !walkable(ls, n) {
            cases.push(CaseResult::ok(
                name,
                format!("skipped: pad {} below walk budget {}", ls.window.pad, walk_budget(n)),
            ));
            continue;
        }
        let seeds = sample_out_points(ls, n, samples as usize, spacing(n).min(ls.window.half_width / 4.0), seed ^ 0x3C)?;
        let mut bad = 0u32;
        let mut first = String::new();
        for x in &seeds {
            match find_hole(ls, n, *x) {
                Ok(hole) => {
                    let good =
                        hole.radius >= radius(n) - TOL && x.dist(hole.center) < 4.0 * spacing(n);
                    if !good {
                        bad += 1;
                        if first.is_empty() {
                            first = format!(
                                "; first at ({}, {}): radius {}, center off {}",
                                x.x,
                                x.y,
                                hole.radius,
                                x.dist(hole.center)
                            );
                        }
                    }
                }
                Err(e) => {
                    bad += 1;
                    if first.is_empty() {
                        first = format!("; first at ({}, {}): {e}", x.x, x.y);
                    }
                }
            }
        }
        let detail = format!(
            "{}/{samples} holes of radius >= radius({n})-tol within 4*spacing({n}){first}",
            samples - bad
        );
        cases.push(if bad == 0 { CaseResult::ok(name, detail) } else { CaseResult::fail(name, detail) });
    }

    // Porosity ladder at near-boundary points: every affordable dyadic
    // scale from spacing(1) down to spacing(depth+1) must report a hole.
    let depth = ls.depth();
    if walkable(ls, depth) {
        let count = (samples as usize).min(200).max(1);
        let seeds = sample_standoff_points(ls, depth, count, 4.0 * spacing(depth), seed ^ 0x77)?;
        let core = ls.window.core();
        let lo_exp = 6 * (depth + 1);
        let mut scales = Vec::new();
        for e in 6..=lo_exp {
            scales.push((e, 1.0 / (1u64 << e) as f64));
        }
        let mut rows = 0u64;
        let mut skipped = 0u64;
        let mut zero = 0u64;
        let mut min_ratio = f64::INFINITY;
        let mut first = String::new();
        for p in &seeds {
            let room = core.depth_inside(*p);
            let usable: Vec<f64> =
                scales.iter().filter(|(_, s)| 2.0 * *s <= room).map(|&(_, s)| s).collect();
            skipped += (scales.len() - usable.len()) as u64;
            if usable.is_empty() {
                continue;
            }
            for rec in scan_isotropic(ls, depth, *p, &usable)? {
                rows += 1;
                if rec.hole_radius > 0.0 {
                    min_ratio = min_ratio.min(rec.ratio);
                } else {
                    zero += 1;
                    if first.is_empty() {
                        first = format!(
                            "; first empty scan at ({}, {}) scale {}",
                            p.x, p.y, rec.scale
                        );
                    }
                }
            }
        }
        let detail = format!(
            "{rows} scans, {zero} without a hole, min ratio {min_ratio:.3e}, {skipped} scales skipped by the core fence{first}"
        );
        cases.push(if zero == 0 && rows > 0 {
            CaseResult::ok("porosity ladder", detail)
        } else {
            CaseResult::fail("porosity ladder", detail)
        });
    } else {
        cases.push(CaseResult::ok(
            "porosity ladder",
            format!("skipped: pad {} below walk budget {}", ls.window.pad, walk_budget(depth)),
        ));
    }
    Ok(cases)
}

fn separation_suite(ls: &LevelSet, samples: u32, seed: u64) -> Result<Vec<CaseResult>> {
    let depth = ls.depth();
    let name = "insulated points n=1";
    if depth < 2 {
        return Ok(vec![CaseResult::ok(
            name,
            "skipped: needs depth >= 2 so an insulated point has a level to escape to",
        )]);
    }
    if !walkable(ls, 1) {
        return Ok(vec![CaseResult::ok(
            name,
            format!("skipped: pad {} below walk budget {}", ls.window.pad, walk_budget(1)),
        )]);
    }
    let margin = spacing(1).min(ls.window.half_width / 4.0);
    let seeds = sample_out_points(ls, depth, samples as usize, margin, seed ^ 0x9E)?;
    let mut exhausted = 0u32;
    let mut bad = 0u32;
    let mut first = String::new();
    let mut worst = 0.0f64;
    for w in &seeds {
        match find_insulated_point(ls, 1, *w) {
            Ok(z) => {
                let insulated = is_insulated(ls, 1, z)?;
                let out = ls.membership(depth, z)? == Membership::Out;
                let d = w.dist(z);
                worst = worst.max(d);
                if !insulated || !out || d >= 1.0 {
                    bad += 1;
                    if first.is_empty() {
                        first = format!(
                            "; first at ({}, {}): insulated {insulated}, outside {out}, dist {d}",
                            w.x, w.y
                        );
                    }
                }
            }
            Err(Error::DepthExhausted) => exhausted += 1,
            Err(e) => {
                bad += 1;
                if first.is_empty() {
                    first = format!("; first at ({}, {}): {e}", w.x, w.y);
                }
            }
        }
    }
    let cap = samples.div_ceil(20);
    let detail = format!(
        "{}/{samples} certified, {exhausted} depth-exhausted (cap {cap}), max dist {worst:.3e}{first}",
        samples - bad - exhausted
    );
    let pass = bad == 0 && exhausted <= cap;
    Ok(vec![if pass { CaseResult::ok(name, detail) } else { CaseResult::fail(name, detail) }])
}

/// First anchor `a` such that levels a+1 ..= a+len (len >= 2) share one
/// angle index within the built depth.
fn find_run(ls: &LevelSet) -> Option<(u32, u32, u64)> {
    let depth = ls.depth() as u64;
    let mut a = 0u64;
    while a + 2 <= depth {
        let j = ls.schedule.angle_index_at(a + 1);
        let mut len = 1u64;
        while a + len + 1 <= depth && ls.schedule.angle_index_at(a + len + 1) == j {
            len += 1;
        }
        if len >= 2 {
            return Some((a as u32, len as u32, j));
        }
        a += len;
    }
    None
}

fn columns_suite(ls: &LevelSet, samples: u32, seed: u64) -> Result<Vec<CaseResult>> {
    let name = "column invariance";
    let Some((anchor, len, _)) = find_run(ls) else {
        return Ok(vec![CaseResult::ok(
            name,
            "skipped: no run of two same-direction levels in the built depth",
        )]);
    };
    // The check is anchored at an outside point near the window center.
    let x = sample_out_points(ls, ls.depth(), 1, ls.window.half_width / 2.0, seed ^ 0x55)?[0];
    let pairs = samples as u64 * 20;
    let rep = column_invariance_check(ls, anchor, len, x, pairs, seed ^ 0x56)?;
    let detail = format!(
        "anchor {anchor} run {len}: {} pairs ({} boundary skips), {} disagreements; {} capsules, {} separation violations, min separation {:.3e}",
        rep.pairs_checked,
        rep.boundary_skips,
        rep.pair_disagreements,
        rep.capsules_checked,
        rep.column_violations,
        rep.min_separation
    );
    let pass = rep.pair_disagreements == 0 && rep.column_violations == 0;
    Ok(vec![if pass { CaseResult::ok(name, detail) } else { CaseResult::fail(name, detail) }])
}

fn oracle_suite(ls: &LevelSet) -> Result<Vec<CaseResult>> {
    // Depth capped at 2 here: the reference recursion is exact there and
    // cheap enough for a front-door suite.
    let n = ls.depth().min(2);
    let brute = Brute::new(ls.schedule.clone(), n);
    let rep = compare_fields(ls, &brute, n, 65, default_band(n))?;
    let total = 65u64 * 65;
    let detail = format!(
        "depth {n}: {} of {total} pixels compared, {} skipped in band, {} disagreements{}",
        rep.compared,
        rep.skipped,
        rep.disagreements.len(),
        rep.disagreements
            .first()
            .map(|(ix, iy, a, b)| format!("; first at pixel ({ix}, {iy}): builder {a}, reference {b}"))
            .unwrap_or_default()
    );
    let pass = rep.disagreements.is_empty() && rep.compared >= total / 2;
    Ok(vec![if pass {
        CaseResult::ok("oracle agreement", detail)
    } else {
        CaseResult::fail("oracle agreement", detail)
    }])
}
