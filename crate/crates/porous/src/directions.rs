//! Deterministic direction schedules: a dense family of angles arranged in
//! blocks so that every direction recurs in arbitrarily long runs, with
//! closed-form queries for where a given run begins.

use crate::geom::Dir;
use crate::{Error, Result};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

/// Base-2 van der Corput value: the bit reversal of `j` placed after the
/// binary point. Dyadic, hence exact in f64, and dense in [0, 1).
pub fn vdc2(mut j: u64) -> f64 {
    let mut num = 0u64;
    let mut den = 1u64;
    while j > 0 {
        num = 2 * num + (j & 1);
        den *= 2;
        j >>= 1;
    }
    num as f64 / den as f64
}

/// Rule mapping an angle index to a point on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleRule {
    /// theta_j = 2*pi*vdc2(j): 0, pi, pi/2, 3*pi/2, pi/4, ...
    Vdc2,
}

impl AngleRule {
    /// Fraction of a full turn for angle index `j`.
    pub fn turn_fraction(self, j: u64) -> f64 {
        match self {
            AngleRule::Vdc2 => vdc2(j),
        }
    }

    /// Unit direction for angle index `j`. Quarter-turn fractions map to
    /// the exact cardinal constants so axis-aligned levels stay exact.
    pub fn direction(self, j: u64) -> Dir {
        let f = self.turn_fraction(j);
        let quarters = f * 4.0;
        if quarters == quarters.floor() {
            match quarters as u64 % 4 {
                0 => Dir::EAST,
                1 => Dir::NORTH,
                2 => Dir::WEST,
                _ => Dir::SOUTH,
            }
        } else {
            Dir::from_angle(TAU * f)
        }
    }
}

impl fmt::Display for AngleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleRule::Vdc2 => write!(f, "vdc2"),
        }
    }
}

impl FromStr for AngleRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<AngleRule> {
        match s {
            "vdc2" => Ok(AngleRule::Vdc2),
            other => Err(Error::Parse(format!("unknown angle rule '{other}'"))),
        }
    }
}

/// Order in which (angle index, run length) blocks are emitted. Block
/// (j, L) appends L consecutive copies of angle j to the level sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockOrder {
    /// Staircase over diagonals of constant j + L, j ascending within a
    /// diagonal: (0,1), (0,2), (1,1), (0,3), (1,2), (2,1), ...
    /// Every pair (j, L) appears exactly once.
    Diagonal,
    /// The listed blocks first, then the diagonal order with those exact
    /// pairs skipped. Lets a run of a chosen direction sit at small level
    /// numbers where deep windows are still affordable.
    FrontLoaded(Vec<(u64, u64)>),
}

fn diagonal_blocks() -> impl Iterator<Item = (u64, u64)> {
    (1u64..).flat_map(|s| (0..s).map(move |j| (j, s - j)))
}

impl BlockOrder {
    /// The infinite block stream in emission order.
    pub fn blocks(&self) -> Box<dyn Iterator<Item = (u64, u64)> + '_> {
        match self {
            BlockOrder::Diagonal => Box::new(diagonal_blocks()),
            BlockOrder::FrontLoaded(front) => Box::new(
                front
                    .iter()
                    .copied()
                    .chain(diagonal_blocks().filter(move |b| !front.contains(b))),
            ),
        }
    }
}

impl fmt::Display for BlockOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockOrder::Diagonal => write!(f, "diagonal"),
            BlockOrder::FrontLoaded(front) => {
                write!(f, "front:")?;
                for (i, (j, l)) in front.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{j}x{l}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for BlockOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<BlockOrder> {
        if s == "diagonal" {
            return Ok(BlockOrder::Diagonal);
        }
        if let Some(list) = s.strip_prefix("front:") {
            let mut front = Vec::new();
            for item in list.split(',') {
                let (j, l) = item
                    .split_once('x')
                    .ok_or_else(|| Error::Parse(format!("bad block '{item}', want JxL")))?;
                let j = j
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad block index '{j}': {e}")))?;
                let l = l
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad block length '{l}': {e}")))?;
                front.push((j, l));
            }
            return Ok(BlockOrder::FrontLoaded(front));
        }
        Err(Error::Parse(format!("unknown block order '{s}'")))
    }
}

/// Tetrahedral number: levels consumed by diagonals 1..=s.
fn tetra(s: u64) -> u64 {
    s * (s + 1) * (s + 2) / 6
}

/// The levelwise direction sequence, reproducible from two small names.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSchedule {
    pub angle_rule: AngleRule,
    pub block_order: BlockOrder,
}

impl DirectionSchedule {
    pub fn new(angle_rule: AngleRule, block_order: BlockOrder) -> Result<DirectionSchedule> {
        if let BlockOrder::FrontLoaded(front) = &block_order {
            for (i, b) in front.iter().enumerate() {
                if b.1 == 0 {
                    return Err(Error::Config(format!("front block {}x{} has length 0", b.0, b.1)));
                }
                if front[..i].contains(b) {
                    return Err(Error::Config(format!("duplicate front block {}x{}", b.0, b.1)));
                }
            }
        }
        Ok(DirectionSchedule { angle_rule, block_order })
    }

    pub fn diagonal() -> DirectionSchedule {
        DirectionSchedule { angle_rule: AngleRule::Vdc2, block_order: BlockOrder::Diagonal }
    }

    pub fn front_loaded(front: Vec<(u64, u64)>) -> Result<DirectionSchedule> {
        DirectionSchedule::new(AngleRule::Vdc2, BlockOrder::FrontLoaded(front))
    }

    /// Angle index of level `n` (1-based). Closed form for the diagonal
    /// order, block replay otherwise.
    pub fn angle_index_at(&self, n: u64) -> u64 {
        assert!(n >= 1, "levels are 1-based");
        match &self.block_order {
            BlockOrder::Diagonal => {
                // Smallest s with tetra(s) >= n, seeded from the cube root.
                let mut s = ((6.0 * n as f64).cbrt() as u64).max(1);
                while tetra(s) < n {
                    s += 1;
                }
                while s > 1 && tetra(s - 1) >= n {
                    s -= 1;
                }
                let mut rem = n - tetra(s - 1);
                let mut j = 0;
                loop {
                    let len = s - j;
                    if rem <= len {
                        return j;
                    }
                    rem -= len;
                    j += 1;
                }
            }
            BlockOrder::FrontLoaded(_) => self.angle_index_replay(n),
        }
    }

    /// Reference implementation of `angle_index_at` by walking the block
    /// stream. Used to cross-check the closed form.
    pub fn angle_index_replay(&self, n: u64) -> u64 {
        assert!(n >= 1, "levels are 1-based");
        let mut pos = 0u64;
        for (j, l) in self.block_order.blocks() {
            pos += l;
            if pos >= n {
                return j;
            }
        }
        unreachable!("block stream is infinite")
    }

    pub fn direction_at(&self, n: u64) -> Dir {
        self.angle_rule.direction(self.angle_index_at(n))
    }

    /// The anchor level n of the first block (j, L') with L' >= len: the
    /// schedule has angle j at every level n+1 ..= n+L'. Runs are
    /// block-aligned; adjacent blocks of the same angle are not merged.
    pub fn run_location(&self, j: u64, len: u64) -> u64 {
        assert!(len >= 1, "runs have positive length");
        match &self.block_order {
            BlockOrder::Diagonal => {
                // Blocks (j, 1), (j, 2), ... appear with increasing length,
                // so the first with length >= len is exactly (j, len).
                let s = j + len;
                tetra(s - 1) + j * s - j * j.saturating_sub(1) / 2
            }
            BlockOrder::FrontLoaded(_) => {
                let mut pos = 0u64;
                for (bj, bl) in self.block_order.blocks() {
                    if bj == j && bl >= len {
                        return pos;
                    }
                    pos += bl;
                }
                unreachable!("the diagonal tail contains every block")
            }
        }
    }

    /// True when levels n+1 ..= n+len all carry angle index j exactly.
    pub fn run_covers(&self, j: u64, n: u64, len: u64) -> bool {
        (1..=len).all(|i| self.angle_index_at(n + i) == j)
    }
}
