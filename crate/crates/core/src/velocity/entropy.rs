//! Boltzmann H functional and BGK entropy production on the grid.

use super::distribution::Distribution;
use super::grid::VelocityGrid;
use crate::bgk::{collision_terms, Attractors};
use crate::error::Result;
use crate::params::MixtureParams;
use crate::velocity::MaxwellianKind;

/// Floor applied to `f` inside logarithms only.
pub const LOG_FLOOR: f64 = 1e-300;

pub fn safe_ln(x: f64) -> f64 {
    x.max(LOG_FLOOR).ln()
}

fn x_ln_x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `sum_v w f ln f` for a single species.
pub fn h_single(f: &Distribution, grid: &VelocityGrid) -> f64 {
    grid.integrate_with(&f.values, |_, x| x_ln_x(x))
}

/// `sum_v w (f1 ln f1 + f2 ln f2)`.
pub fn h_functional(f1: &Distribution, f2: &Distribution, grid: &VelocityGrid) -> f64 {
    h_single(f1, grid) + h_single(f2, grid)
}

/// `sum_v w ln f_k Q` split by collision partner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyProduction {
    pub total: f64,
    /// Interspecies part `S(f1, f2)`.
    pub interspecies: f64,
    pub self1: f64,
    pub self2: f64,
}

pub fn entropy_production(
    f1: &Distribution,
    f2: &Distribution,
    grid: &VelocityGrid,
    params: &MixtureParams,
) -> Result<EntropyProduction> {
    let att = Attractors::compute(f1, f2, grid, params, MaxwellianKind::Discrete)?;
    Ok(entropy_production_with(f1, f2, grid, &att))
}

/// Entropy production against precomputed attractors.
pub fn entropy_production_with(
    f1: &Distribution,
    f2: &Distribution,
    grid: &VelocityGrid,
    att: &Attractors,
) -> EntropyProduction {
    let q = collision_terms(f1, f2, att);
    let ln1: Vec<f64> = f1.values.iter().map(|&x| safe_ln(x)).collect();
    let ln2: Vec<f64> = f2.values.iter().map(|&x| safe_ln(x)).collect();
    let dot = |l: &[f64], q: &[f64]| {
        let prod: Vec<f64> = l.iter().zip(q).map(|(a, b)| a * b).collect();
        grid.integrate(&prod)
    };
    let inter = dot(&ln1, &q.q12) + dot(&ln2, &q.q21);
    let total1 = dot(&ln1, &q.q1);
    let total2 = dot(&ln2, &q.q2);
    EntropyProduction {
        total: total1 + total2,
        interspecies: inter,
        self1: total1 - dot(&ln1, &q.q12),
        self2: total2 - dot(&ln2, &q.q21),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{preset, PresetAux, SpeciesMoments};
    use crate::velocity::{maxwellian_continuous, maxwellian_discrete, moments};

    #[test]
    fn unit_maxwellian_entropy_matches_closed_form() {
        let s = SpeciesMoments::new(1.0, [0.0; 3], 1.0);
        let grid = VelocityGrid::cube(64, 8.0).unwrap();
        let m = maxwellian_continuous(&s, 1.0, &grid).unwrap();
        let exact = (1.0 / (2.0 * std::f64::consts::PI).powf(1.5)).ln() - 1.5;
        assert!((exact + 4.2568).abs() < 1e-4);
        let zero = Distribution::zeros(&grid, 1.0);
        let h = h_functional(&m, &zero, &grid);
        assert!((h - exact).abs() < 1e-6, "{h} vs {exact}");
        assert_eq!(h, h_single(&m, &grid));
    }

    #[test]
    fn maxwellian_minimises_entropy_at_fixed_moments() {
        let grid = VelocityGrid::cube(24, 6.0).unwrap();
        let a = maxwellian_continuous(&SpeciesMoments::new(0.6, [0.8, 0.0, 0.0], 0.7), 1.0, &grid).unwrap();
        let b = maxwellian_continuous(&SpeciesMoments::new(0.4, [-0.5, 0.3, 0.0], 1.3), 1.0, &grid).unwrap();
        let f = Distribution { values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(), mass: 1.0 };
        let m = maxwellian_discrete(&moments(&f, &grid).unwrap(), 1.0, &grid).unwrap();
        assert!(h_single(&m, &grid) < h_single(&f, &grid));
    }

    fn hamel_grid() -> (MixtureParams, VelocityGrid) {
        let params = preset("hamel", 2.0, 1.0, PresetAux::default()).unwrap();
        let grid = VelocityGrid::cube(20, 6.0).unwrap();
        (params, grid)
    }

    #[test]
    fn common_equilibrium_produces_no_entropy() {
        let (params, grid) = hamel_grid();
        let f1 = maxwellian_discrete(&SpeciesMoments::new(1.0, [0.2, 0.0, 0.0], 1.0), 2.0, &grid).unwrap();
        let f2 = maxwellian_discrete(&SpeciesMoments::new(0.5, [0.2, 0.0, 0.0], 1.0), 1.0, &grid).unwrap();
        let s = entropy_production(&f1, &f2, &grid, &params).unwrap();
        assert!(s.total.abs() < 1e-10, "{s:?}");
    }

    #[test]
    fn velocity_mismatch_produces_strictly_negative_entropy() {
        let (params, grid) = hamel_grid();
        let f1 = maxwellian_discrete(&SpeciesMoments::new(1.0, [0.4, 0.0, 0.0], 1.0), 2.0, &grid).unwrap();
        let f2 = maxwellian_discrete(&SpeciesMoments::new(1.0, [-0.4, 0.0, 0.0], 1.0), 1.0, &grid).unwrap();
        let s = entropy_production(&f1, &f2, &grid, &params).unwrap();
        assert!(s.total < -1e-3, "{s:?}");
        assert!(s.interspecies < 0.0);
        assert!(s.self1.abs() < 1e-12 && s.self2.abs() < 1e-12);
    }
}
