//! Grayscale rasters of a built set, written as binary PGM (P5).
//!
//! Membership mode paints inside black, outside white, and the tolerance
//! shell mid-gray. Distance mode maps distance-to-the-set linearly onto
//! 0..=255, clipped at the level-1 spacing so the banding stays visible.
//! Pixels sample the core window at cell centers, row 0 at the top.

use crate::construction::{LevelSet, Membership};
use crate::geom::Point;
use crate::{spacing, Error, Result};
use std::io::{self, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RasterMode {
    Membership,
    Distance,
}

impl std::str::FromStr for RasterMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<RasterMode> {
        match s {
            "membership" => Ok(RasterMode::Membership),
            "distance" => Ok(RasterMode::Distance),
            other => Err(Error::Config(format!(
                "unknown raster mode {other:?} (expected membership or distance)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    /// Row-major, top row first.
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_pgm<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(&self.pgm_bytes())
    }
}

/// Clip for distance mode: one level-1 spacing saturates to white.
pub fn distance_clip() -> f64 {
    spacing(1)
}

pub fn rasterize(ls: &LevelSet, n: u32, resolution: u32, mode: RasterMode) -> Result<Raster> {
    if resolution == 0 {
        return Err(Error::Config("raster resolution must be positive".into()));
    }
    let core = ls.window.core();
    let step = (core.max.x - core.min.x) / resolution as f64;
    let clip = distance_clip();
    let shade = |p: Point| -> Result<u8> {
        Ok(match mode {
            RasterMode::Membership => match ls.membership(n, p)? {
                Membership::In => 0,
                Membership::Boundary => 128,
                Membership::Out => 255,
            },
            RasterMode::Distance => {
                let d = ls.dist_to_h(n, p)?.min(clip);
                (d / clip * 255.0).round() as u8
            }
        })
    };
    let threads = std::thread::available_parallelism().map(|t| t.get()).unwrap_or(4).min(16);
    let chunk = (resolution as usize).div_ceil(threads);
    let mut bands: Vec<Result<Vec<u8>>> = Vec::new();
    std::thread::scope(|sc| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let lo = (t * chunk).min(resolution as usize);
                let hi = ((t + 1) * chunk).min(resolution as usize);
                let shade = &shade;
                sc.spawn(move || {
                    let mut band = Vec::with_capacity((hi - lo) * resolution as usize);
                    for row in lo..hi {
                        // Row 0 sits at the top of the window.
                        let y = core.max.y - (row as f64 + 0.5) * step;
                        for col in 0..resolution {
                            let x = core.min.x + (col as f64 + 0.5) * step;
                            band.push(shade(Point::new(x, y))?);
                        }
                    }
                    Ok(band)
                })
            })
            .collect();
        for h in handles {
            bands.push(h.join().expect("raster worker panicked"));
        }
    });
    let mut pixels = Vec::with_capacity((resolution as usize).pow(2));
    for band in bands {
        pixels.extend_from_slice(&band?);
    }
    Ok(Raster { width: resolution, height: resolution, pixels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{Budgets, Window};
    use crate::directions::DirectionSchedule;

    fn stripes() -> LevelSet {
        let w = Window::new(Point::ORIGIN, 1.0 / 32.0, 1.0 / 32.0).unwrap();
        let sched = DirectionSchedule::front_loaded(vec![(0, 1)]).unwrap();
        LevelSet::build(w, sched, Budgets::default(), 1).unwrap()
    }

    #[test]
    fn membership_raster_shows_periodic_stripes() {
        // Core side 1/16 at 256 px puts the level-1 spacing at 64 px, so
        // rows repeat with period 64 and stripe rows are solid black.
        let ls = stripes();
        let r = rasterize(&ls, 1, 256, RasterMode::Membership).unwrap();
        let row = |i: usize| &r.pixels[i * 256..(i + 1) * 256];
        for i in 0..192 {
            assert_eq!(row(i), row(i + 64), "rows {i} and {} differ", i + 64);
        }
        let black_rows = (0..256).filter(|&i| row(i).iter().all(|&p| p == 0)).count();
        let white_rows = (0..256).filter(|&i| row(i).iter().all(|&p| p == 255)).count();
        assert!(black_rows > 0 && white_rows > black_rows);
        assert_eq!(black_rows + white_rows, 256, "unexpected gray rows");
    }

    #[test]
    fn distance_raster_matches_hand_values() {
        // 4x4 over a core of half-width 1/128: rows sit at |y| of 3/512
        // and 1/512, giving distances 23/4096 and 7/4096 to the axis
        // capsule, i.e. 92 and 28 after scaling by the 1/64 clip.
        let w = Window::new(Point::ORIGIN, 1.0 / 128.0, 1.0 / 32.0).unwrap();
        let sched = DirectionSchedule::front_loaded(vec![(0, 1)]).unwrap();
        let ls = LevelSet::build(w, sched, Budgets::default(), 1).unwrap();
        let r = rasterize(&ls, 1, 4, RasterMode::Distance).unwrap();
        let expect = [
            92, 92, 92, 92,
            28, 28, 28, 28,
            28, 28, 28, 28,
            92, 92, 92, 92,
        ];
        assert_eq!(r.pixels, expect);
        let bytes = r.pgm_bytes();
        assert!(bytes.starts_with(b"P5\n4 4\n255\n"));
        assert_eq!(bytes.len(), 11 + 16);
    }

    #[test]
    fn rasters_are_reproducible_and_fenced() {
        let ls = stripes();
        let a = rasterize(&ls, 1, 37, RasterMode::Distance).unwrap();
        let b = rasterize(&ls, 1, 37, RasterMode::Distance).unwrap();
        assert_eq!(a.pgm_bytes(), b.pgm_bytes());
        assert!(matches!(rasterize(&ls, 1, 0, RasterMode::Membership), Err(Error::Config(_))));
        assert!(matches!(rasterize(&ls, 2, 8, RasterMode::Membership), Err(Error::Precondition(_))));
    }
}
