//! Seeded point generators for suites and goldens.
//!
//! Everything here is deterministic given (window, depth, seed), which is
//! what lets verification runs and recorded manifests reproduce byte-
//! identical artifacts. Rejection loops carry hard attempt caps so a
//! misconfigured window fails loudly instead of spinning.

use crate::construction::{LevelSet, Membership};
use crate::geom::Point;
use crate::porosity::find_boundary_point;
use crate::{Error, Result, STANDOFF};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn uniform_in_core(ls: &LevelSet, rng: &mut ChaCha8Rng, edge_margin: f64) -> Result<Point> {
    let core = ls.window.core();
    let w = (core.max.x - core.min.x) - 2.0 * edge_margin;
    if w <= 0.0 {
        return Err(Error::Config(format!(
            "edge margin {edge_margin} leaves no room in a core of half-width {}",
            ls.window.half_width
        )));
    }
    let x = core.min.x + edge_margin + rng.random::<f64>() * w;
    let y = core.min.y + edge_margin + rng.random::<f64>() * w;
    Ok(Point::new(x, y))
}

/// `count` points of the core window, at least `edge_margin` from its
/// edge, that lie strictly outside the depth-n set.
pub fn sample_out_points(
    ls: &LevelSet,
    n: u32,
    count: usize,
    edge_margin: f64,
    seed: u64,
) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let cap = count.saturating_mul(10_000).max(10_000);
    while out.len() < count {
        attempts += 1;
        if attempts > cap {
            return Err(Error::Degenerate(format!(
                "only {} of {count} outside points found in {cap} draws",
                out.len()
            )));
        }
        let p = uniform_in_core(ls, &mut rng, edge_margin)?;
        if ls.membership(n, p)? == Membership::Out {
            out.push(p);
        }
    }
    Ok(out)
}

/// `count` points just outside the depth-n set: each is a walked boundary
/// point pushed outward by the standoff, so its distance to the set is
/// positive but tiny. These seed the small-scale porosity ladders.
pub fn sample_standoff_points(
    ls: &LevelSet,
    n: u32,
    count: usize,
    edge_margin: f64,
    seed: u64,
) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let cap = count.saturating_mul(10_000).max(10_000);
    while out.len() < count {
        attempts += 1;
        if attempts > cap {
            return Err(Error::Degenerate(format!(
                "only {} of {count} standoff points found in {cap} draws",
                out.len()
            )));
        }
        let x = uniform_in_core(ls, &mut rng, edge_margin)?;
        if ls.membership(n, x)? != Membership::Out {
            continue;
        }
        let z = match find_boundary_point(ls, n, x) {
            Ok(z) => z,
            Err(Error::PaddingInsufficient(_)) | Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        let Ok(Some((m, ci, _))) = ls.raw_nearest(n, z) else { continue };
        let cap = &ls.level(m).caps[ci as usize];
        let foot = cap.axis_foot(z);
        let d = z.dist(foot);
        if d <= 0.0 {
            continue;
        }
        let p = z + (z - foot) * (STANDOFF / d);
        if !ls.window.in_core(p) {
            continue;
        }
        if ls.membership(n, p)? == Membership::Out {
            out.push(p);
        }
    }
    Ok(out)
}
