//! Nested unions of thin capsules in the plane, built level by level from
//! families of parallel lines, together with scanners that certify how
//! porous the complement is.
//!
//! Each level lays down lines in one direction, keeps only the parts that
//! stay clear of everything built so far, and fattens the survivors into
//! capsules whose radius is a fixed fraction of the line spacing. The
//! resulting set has holes at every scale near every boundary point, but
//! the holes rotate with the level direction: no single direction works at
//! all scales. The scanners in [`porosity`] measure both effects, and
//! [`oracle`] cross-checks the construction with a brute-force rebuild.
//!
//! Start with the runnable examples (`cargo run --example build_and_dump`)
//! or the `porous` binary (`porous build --depth 2 ...`).

pub mod cli;
pub mod construction;
pub mod directions;
pub mod geom;
pub mod oracle;
pub mod porosity;
pub mod raster;
pub mod sampling;
pub mod verify;

/// Width of the band around capsule boundaries treated as numerically
/// undecidable: 2^-40. Distances are trusted only outside this band.
pub const TOL: f64 = 1.0 / (1u64 << 40) as f64;

/// Offsets used when a point must land strictly outside a capsule surface
/// rather than on it: 2^-30. Large against TOL, small against every
/// level's geometry.
pub const STANDOFF: f64 = 1.0 / (1u64 << 30) as f64;

/// Levels the builder accepts. Spacing shrinks by 2^-6 per level, so even
/// modest windows at depth 5 would need billions of capsules.
pub const MAX_DEPTH: u32 = 4;

/// Line spacing at a level: 2^(-6 n), exact in f64 for all supported n.
pub fn spacing(level: u32) -> f64 {
    debug_assert!(level >= 1 && 6 * level < 64);
    1.0 / (1u64 << (6 * level)) as f64
}

/// Capsule radius at a level: 2^(-6 (n+1)), one level's spacing finer.
pub fn radius(level: u32) -> f64 {
    spacing(level + 1)
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("depth {requested} exceeds the supported maximum {max}")]
    DepthCap { requested: u32, max: u32 },

    #[error("{what} budget exceeded: {got} > {limit}")]
    Budget {
        what: &'static str,
        got: u64,
        limit: u64,
    },

    #[error("point ({x}, {y}) lies outside the valid query region")]
    OutsideWindow { x: f64, y: f64 },

    #[error("window padding too small: {0}")]
    PaddingInsufficient(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("scan scale {scale} out of certified range (limit {limit})")]
    ScaleBudget { scale: f64, limit: f64 },

    #[error("insulated point search exhausted the built depth")]
    DepthExhausted,

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("bad configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_constants_are_exact() {
        assert_eq!(TOL, 2f64.powi(-40));
        assert_eq!(STANDOFF, 2f64.powi(-30));
        assert_eq!(spacing(1), 2f64.powi(-6));
        assert_eq!(spacing(2), 2f64.powi(-12));
        assert_eq!(spacing(3), 2f64.powi(-18));
        assert_eq!(spacing(4), 2f64.powi(-24));
        assert_eq!(radius(1), spacing(2));
        assert_eq!(radius(4), 2f64.powi(-30));
    }

    #[test]
    fn radius_is_strictly_inside_spacing() {
        for n in 1..=MAX_DEPTH {
            assert!(radius(n) * 64.0 == spacing(n));
        }
    }
}
