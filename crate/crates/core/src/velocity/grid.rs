use crate::error::{Error, Result};
use crate::params::SpeciesMoments;
use crate::reduce::pairwise_sum;
use crate::vector::Vec3;

/// Default half-width of the velocity box in thermal speeds.
pub const DEFAULT_RADIUS: f64 = 6.0;

/// Smallest admissible node count per axis.
pub const MIN_NODES: usize = 4;

/// Uniform tensor-product velocity grid with midpoint quadrature.
///
/// Nodes sit at cell centres `lo + (i + 1/2) h`, every node carries the same
/// weight `hx * hy * hz`, and values are stored row-major with the z index
/// running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    counts: [usize; 3],
    lo: [f64; 3],
    hi: [f64; 3],
    spacing: [f64; 3],
    axes: [Vec<f64>; 3],
    weight: f64,
}

impl VelocityGrid {
    pub fn new(counts: [usize; 3], lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        for d in 0..3 {
            if counts[d] < MIN_NODES {
                return Err(Error::InvalidGrid(format!(
                    "axis {d} has {} nodes, need at least {MIN_NODES}",
                    counts[d]
                )));
            }
            if !(lo[d].is_finite() && hi[d].is_finite() && hi[d] > lo[d]) {
                return Err(Error::InvalidGrid(format!(
                    "axis {d} bounds [{}, {}] are not an increasing finite interval",
                    lo[d], hi[d]
                )));
            }
        }
        let spacing: [f64; 3] = std::array::from_fn(|d| (hi[d] - lo[d]) / counts[d] as f64);
        let axes = std::array::from_fn(|d| {
            (0..counts[d])
                .map(|i| lo[d] + (i as f64 + 0.5) * spacing[d])
                .collect()
        });
        Ok(VelocityGrid {
            counts,
            lo,
            hi,
            spacing,
            axes,
            weight: spacing[0] * spacing[1] * spacing[2],
        })
    }

    /// Cubic grid `[-half_width, half_width]^3` with `n` nodes per axis.
    pub fn cube(n: usize, half_width: f64) -> Result<Self> {
        Self::new([n; 3], [-half_width; 3], [half_width; 3])
    }

    /// Bounding box covering `u_k ± radius * sqrt(T_k / m_k)` for every
    /// listed species `(moments, mass)`.
    pub fn build(species: &[(SpeciesMoments, f64)], radius: f64, counts: [usize; 3]) -> Result<Self> {
        if species.is_empty() {
            return Err(Error::EmptyMoments);
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidGrid(format!("safety radius must be positive, got {radius}")));
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for (s, m) in species {
            if !(s.t > 0.0) {
                return Err(Error::NonPositiveTemperature(s.t));
            }
            let width = radius * (s.t / m).sqrt();
            for d in 0..3 {
                lo[d] = lo[d].min(s.u[d] - width);
                hi[d] = hi[d].max(s.u[d] + width);
            }
        }
        Self::new(counts, lo, hi)
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn lo(&self) -> [f64; 3] {
        self.lo
    }

    pub fn hi(&self) -> [f64; 3] {
        self.hi
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn axis(&self, d: usize) -> &[f64] {
        &self.axes[d]
    }

    /// Quadrature weight shared by every node.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|d| self.hi[d] - self.lo[d]).product()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.counts[1] + j) * self.counts[2] + k
    }

    pub fn split_index(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.counts[2];
        let ij = idx / self.counts[2];
        [ij / self.counts[1], ij % self.counts[1], k]
    }

    pub fn node(&self, idx: usize) -> Vec3 {
        let [i, j, k] = self.split_index(idx);
        Vec3::new(self.axes[0][i], self.axes[1][j], self.axes[2][k])
    }

    /// Node velocities in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = Vec3> + '_ {
        (0..self.len()).map(move |idx| self.node(idx))
    }

    /// Index of the node mirrored through `v_x -> lo_x + hi_x - v_x`.
    pub fn mirror_x(&self, idx: usize) -> usize {
        let [i, j, k] = self.split_index(idx);
        self.index(self.counts[0] - 1 - i, j, k)
    }

    /// `sum_v w(v) values(v)` with the fixed pairwise order.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weight * pairwise_sum(values)
    }

    /// `sum_v w(v) g(v, values(v))`.
    pub fn integrate_with(&self, values: &[f64], g: impl Fn(Vec3, f64) -> f64) -> f64 {
        let buf: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(idx, &f)| g(self.node(idx), f))
            .collect();
        self.weight * pairwise_sum(&buf)
    }

    /// Largest `|v_x|` over the nodes.
    pub fn max_abs_vx(&self) -> f64 {
        self.axes[0].iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_box_volume() {
        let g = VelocityGrid::new([5, 6, 7], [-1.0, 0.0, 2.0], [1.0, 3.0, 2.5]).unwrap();
        let ones = vec![1.0; g.len()];
        assert!((g.integrate(&ones) - g.volume()).abs() < 1e-14 * g.volume());
        for d in 0..3 {
            assert!(g.axis(d).windows(2).all(|w| w[1] > w[0]));
        }
        assert!(g.weight() > 0.0);
    }

    #[test]
    fn unit_species_gives_six_sigma_box() {
        let s = SpeciesMoments::new(1.0, [0.0; 3], 1.0);
        let g = VelocityGrid::build(&[(s, 1.0)], 6.0, [8; 3]).unwrap();
        assert_eq!(g.lo(), [-6.0; 3]);
        assert_eq!(g.hi(), [6.0; 3]);
    }

    #[test]
    fn box_covers_disjoint_species() {
        let a = SpeciesMoments::new(1.0, [-10.0, 0.0, 0.0], 1.0);
        let b = SpeciesMoments::new(1.0, [10.0, 0.0, 0.0], 4.0);
        let g = VelocityGrid::build(&[(a, 1.0), (b, 1.0)], 6.0, [8; 3]).unwrap();
        assert_eq!(g.lo()[0], -16.0);
        assert_eq!(g.hi()[0], 22.0);
    }

    #[test]
    fn doubling_radius_doubles_widths() {
        let s = SpeciesMoments::new(1.0, [0.5, -1.0, 2.0], 2.0);
        let g1 = VelocityGrid::build(&[(s, 3.0)], 3.0, [8; 3]).unwrap();
        let g2 = VelocityGrid::build(&[(s, 3.0)], 6.0, [8; 3]).unwrap();
        for d in 0..3 {
            let w1 = g1.hi()[d] - g1.lo()[d];
            let w2 = g2.hi()[d] - g2.lo()[d];
            assert!((w2 - 2.0 * w1).abs() < 1e-13);
            let c1 = 0.5 * (g1.hi()[d] + g1.lo()[d]);
            let c2 = 0.5 * (g2.hi()[d] + g2.lo()[d]);
            assert!((c1 - c2).abs() < 1e-13);
        }
    }

    #[test]
    fn empty_species_list_is_an_error() {
        assert!(matches!(VelocityGrid::build(&[], 6.0, [8; 3]), Err(Error::EmptyMoments)));
    }

    #[test]
    fn too_few_nodes_rejected() {
        assert!(VelocityGrid::cube(3, 1.0).is_err());
    }

    #[test]
    fn index_round_trip_and_mirror() {
        let g = VelocityGrid::new([4, 5, 6], [-1.0; 3], [1.0; 3]).unwrap();
        for idx in 0..g.len() {
            let [i, j, k] = g.split_index(idx);
            assert_eq!(g.index(i, j, k), idx);
            let m = g.mirror_x(idx);
            assert!((g.node(m).x() + g.node(idx).x()).abs() < 1e-15);
            assert_eq!(g.mirror_x(m), idx);
        }
    }
}
