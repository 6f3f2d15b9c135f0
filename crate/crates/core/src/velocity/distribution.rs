//! Per-species distribution values on a velocity grid, and their file layouts.
//!
//! Binary layout (all little-endian):
//!
//! | offset | size      | content                                  |
//! |--------|-----------|------------------------------------------|
//! | 0      | 8         | magic `BGKDIST\0`                        |
//! | 8      | 4         | format version (`u32`, currently 1)      |
//! | 12     | 24        | node counts per axis (`u64` x 3)         |
//! | 36     | 24        | lower bounds (`f64` x 3)                 |
//! | 60     | 24        | upper bounds (`f64` x 3)                 |
//! | 84     | 8         | species mass (`f64`)                     |
//! | 92     | 8 * N     | values, row-major, z index fastest       |

use std::io::{self, Read, Write};

use super::grid::VelocityGrid;
use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;

pub const MAGIC: &[u8; 8] = b"BGKDIST\0";
pub const FORMAT_VERSION: u32 = 1;

/// Nonnegative values of one species' distribution function at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub values: Vec<f64>,
    pub mass: f64,
}

impl Distribution {
    pub fn zeros(grid: &VelocityGrid, mass: f64) -> Self {
        Distribution {
            values: vec![0.0; grid.len()],
            mass,
        }
    }

    pub fn from_fn(grid: &VelocityGrid, mass: f64, f: impl Fn(crate::vector::Vec3) -> f64) -> Self {
        Distribution {
            values: grid.nodes().map(f).collect(),
            mass,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `sum_v w |f - g|`.
    pub fn l1_distance(&self, other: &Distribution, grid: &VelocityGrid) -> f64 {
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .collect();
        grid.weight() * pairwise_sum(&diff)
    }

    /// Largest pointwise `|f - g|`.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn write_binary(&self, grid: &VelocityGrid, mut w: impl Write) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        for c in grid.counts() {
            w.write_all(&(c as u64).to_le_bytes())?;
        }
        for b in grid.lo().into_iter().chain(grid.hi()) {
            w.write_all(&b.to_le_bytes())?;
        }
        w.write_all(&self.mass.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(mut r: impl Read) -> Result<(VelocityGrid, Distribution)> {
        let bad = |msg: &str| Error::Io(io::Error::new(io::ErrorKind::InvalidData, msg.to_string()));
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(bad("not a distribution file"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        if u32::from_le_bytes(b4) != FORMAT_VERSION {
            return Err(bad("unsupported distribution format version"));
        }
        let mut b8 = [0u8; 8];
        let mut counts = [0usize; 3];
        for c in &mut counts {
            r.read_exact(&mut b8)?;
            *c = usize::try_from(u64::from_le_bytes(b8)).map_err(|_| bad("node count overflow"))?;
        }
        let mut read_f64 = |r: &mut dyn Read| -> io::Result<f64> {
            r.read_exact(&mut b8)?;
            Ok(f64::from_le_bytes(b8))
        };
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for x in lo.iter_mut().chain(hi.iter_mut()) {
            *x = read_f64(&mut r)?;
        }
        let mass = read_f64(&mut r)?;
        let grid = VelocityGrid::new(counts, lo, hi)?;
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            values.push(read_f64(&mut r)?);
        }
        Ok((grid, Distribution { values, mass }))
    }

    /// One row per node: `vx,vy,vz,f`, 17 significant digits.
    pub fn write_csv(&self, grid: &VelocityGrid, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "vx,vy,vz,f")?;
        for (idx, f) in self.values.iter().enumerate() {
            let v = grid.node(idx);
            writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", v.x(), v.y(), v.z(), f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip_is_exact() {
        let grid = VelocityGrid::new([4, 5, 6], [-1.0, -2.0, -0.5], [1.5, 2.0, 0.25]).unwrap();
        let f = Distribution::from_fn(&grid, 1.75, |v| (-(v.norm2())).exp() / 3.0);
        let mut buf = Vec::new();
        f.write_binary(&grid, &mut buf).unwrap();
        assert_eq!(buf.len(), 92 + 8 * grid.len());
        let (g2, f2) = Distribution::read_binary(buf.as_slice()).unwrap();
        assert_eq!(g2, grid);
        assert_eq!(f2, f);
    }

    #[test]
    fn rejects_foreign_files() {
        let junk = vec![0u8; 200];
        assert!(Distribution::read_binary(junk.as_slice()).is_err());
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let grid = VelocityGrid::cube(4, 1.0).unwrap();
        let f = Distribution::zeros(&grid, 1.0);
        let mut buf = Vec::new();
        f.write_csv(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + grid.len());
    }
}
