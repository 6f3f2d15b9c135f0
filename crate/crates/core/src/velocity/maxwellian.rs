//! Maxwellians on the velocity grid.
//!
//! The continuous Maxwellian is sampled pointwise. The discrete one has the
//! same exponential-quadratic shape, `exp(a + b.xi + c|xi|^2)` in the scaled
//! variable `xi = (v - u) / sqrt(T/m)`, but its coefficients are tuned by
//! Newton's method until the *quadrature* moments reproduce `(n, u, T)`. With
//! those attractors every discrete exchange integral equals its closed form
//! up to roundoff.
//!
//! Because the exponent is a sum of per-axis terms, the grid function factors
//! into three 1D profiles; all Newton moments are products of 1D sums.

use super::distribution::Distribution;
use super::grid::VelocityGrid;
use crate::error::{Error, Result};
use crate::params::SpeciesMoments;
use crate::reduce::pairwise_sum;
use crate::vector::Vec3;

pub const MAX_NEWTON_ITERATIONS: usize = 50;

/// Relative moment residual at which the Newton iteration stops.
pub const NEWTON_TOLERANCE: f64 = 2e-15;

/// Residual below which a stagnating iteration is still accepted.
const STAGNATION_TOLERANCE: f64 = 1e-13;

/// Densities below this are treated as an empty species.
pub const DEGENERATE_DENSITY: f64 = 1e-14;

/// Zeroth, first and second moments of a distribution on the grid.
pub fn moments(f: &Distribution, grid: &VelocityGrid) -> Result<SpeciesMoments> {
    let n = grid.integrate(&f.values);
    if !(n >= DEGENERATE_DENSITY) {
        return Err(Error::DegenerateDensity { n });
    }
    let mut u = [0.0; 3];
    for (d, ud) in u.iter_mut().enumerate() {
        *ud = grid.integrate_with(&f.values, |v, fv| v[d] * fv) / n;
    }
    let u = Vec3(u);
    let spread = grid.integrate_with(&f.values, |v, fv| (v - u).norm2() * fv);
    Ok(SpeciesMoments {
        n,
        u,
        t: f.mass * spread / (3.0 * n),
    })
}

/// Pointwise Maxwellian `n (m / 2 pi T)^{3/2} exp(-m |v - u|^2 / 2T)`.
pub fn maxwellian_continuous(s: &SpeciesMoments, mass: f64, grid: &VelocityGrid) -> Result<Distribution> {
    if !(s.t > 0.0) {
        return Err(Error::NonPositiveTemperature(s.t));
    }
    let var = s.t / mass;
    let prefactor = s.n / (2.0 * std::f64::consts::PI * var).powf(1.5);
    let profiles: [Vec<f64>; 3] = std::array::from_fn(|d| {
        grid.axis(d)
            .iter()
            .map(|&v| (-(v - s.u[d]).powi(2) / (2.0 * var)).exp())
            .collect()
    });
    Ok(outer_product(grid, mass, prefactor, &profiles))
}

/// Coefficients of a moment-matched discrete Maxwellian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellianFit {
    pub target: SpeciesMoments,
    pub mass: f64,
    /// `exp(log_amplitude + drift . xi + curvature |xi|^2)`.
    pub log_amplitude: f64,
    pub drift: Vec3,
    pub curvature: f64,
    pub iterations: usize,
    pub residual: f64,
}

impl MaxwellianFit {
    fn scale(&self) -> f64 {
        (self.target.t / self.mass).sqrt()
    }

    fn profiles(&self, grid: &VelocityGrid) -> [Vec<f64>; 3] {
        profiles(grid, &self.target, self.scale(), self.drift, self.curvature)
    }

    pub fn evaluate(&self, grid: &VelocityGrid) -> Distribution {
        outer_product(grid, self.mass, self.log_amplitude.exp(), &self.profiles(grid))
    }
}

fn profiles(grid: &VelocityGrid, s: &SpeciesMoments, scale: f64, drift: Vec3, curvature: f64) -> [Vec<f64>; 3] {
    std::array::from_fn(|d| {
        grid.axis(d)
            .iter()
            .map(|&v| {
                let xi = (v - s.u[d]) / scale;
                (drift[d] * xi + curvature * xi * xi).exp()
            })
            .collect()
    })
}

fn outer_product(grid: &VelocityGrid, mass: f64, amplitude: f64, p: &[Vec<f64>; 3]) -> Distribution {
    let mut values = Vec::with_capacity(grid.len());
    for &gx in &p[0] {
        let ax = amplitude * gx;
        for &gy in &p[1] {
            let axy = ax * gy;
            for &gz in &p[2] {
                values.push(axy * gz);
            }
        }
    }
    Distribution { values, mass }
}

/// Per-axis normalised moments `E[xi^k]`, `k = 0..=4`, and the raw mass.
struct AxisMoments {
    mass: f64,
    mean: f64,
    second: f64,
    third: f64,
    fourth: f64,
}

fn axis_moments(nodes: &[f64], center: f64, scale: f64, h: f64, profile: &[f64]) -> AxisMoments {
    let mut buf: Vec<f64> = Vec::with_capacity(nodes.len());
    let mut sum_k = |k: i32| {
        buf.clear();
        buf.extend(nodes.iter().zip(profile).map(|(&v, &g)| {
            let xi = (v - center) / scale;
            xi.powi(k) * g
        }));
        h * pairwise_sum(&buf)
    };
    let s0 = sum_k(0);
    let s1 = sum_k(1);
    let s2 = sum_k(2);
    let s3 = sum_k(3);
    let s4 = sum_k(4);
    AxisMoments {
        mass: s0,
        mean: s1 / s0,
        second: s2 / s0,
        third: s3 / s0,
        fourth: s4 / s0,
    }
}

/// Moments of `exp(a + b.xi + c|xi|^2)` in the basis `(1, xi_x, xi_y, xi_z, |xi|^2)`,
/// normalised by `n`, and the corresponding Jacobian with respect to `(a, b, c)`.
fn newton_system(
    grid: &VelocityGrid,
    target: &SpeciesMoments,
    scale: f64,
    a: f64,
    b: Vec3,
    c: f64,
) -> Option<([f64; 5], [[f64; 5]; 5])> {
    let p = profiles(grid, target, scale, b, c);
    let ax: [AxisMoments; 3] = std::array::from_fn(|d| {
        axis_moments(grid.axis(d), target.u[d], scale, grid.spacing()[d], &p[d])
    });
    let m0 = a.exp() * ax[0].mass * ax[1].mass * ax[2].mass / target.n;
    if !(m0.is_finite() && m0 > 0.0) {
        return None;
    }
    let mu = [ax[0].mean, ax[1].mean, ax[2].mean];
    let nu = [ax[0].second, ax[1].second, ax[2].second];
    let q: f64 = nu.iter().sum();

    let mut e = [[0.0; 5]; 5];
    e[0][0] = 1.0;
    for d in 0..3 {
        e[0][1 + d] = mu[d];
        for k in 0..3 {
            e[1 + d][1 + k] = if d == k { nu[d] } else { mu[d] * mu[k] };
        }
        let others: f64 = (0..3).filter(|&k| k != d).map(|k| nu[k]).sum();
        e[1 + d][4] = ax[d].third + mu[d] * others;
    }
    e[0][4] = q;
    let mut fourth = 0.0;
    for d in 0..3 {
        fourth += ax[d].fourth;
        for k in 0..3 {
            if k != d {
                fourth += nu[d] * nu[k];
            }
        }
    }
    e[4][4] = fourth;
    for r in 0..5 {
        for s in 0..r {
            e[r][s] = e[s][r];
        }
    }

    let residual = [
        m0 - 1.0,
        m0 * mu[0],
        m0 * mu[1],
        m0 * mu[2],
        m0 * q - 3.0,
    ];
    let jac = e.map(|row| row.map(|x| m0 * x));
    if residual.iter().any(|r| !r.is_finite()) {
        return None;
    }
    Some((residual, jac))
}

fn max_norm(r: &[f64; 5]) -> f64 {
    r.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Gaussian elimination with partial pivoting on a 5x5 system.
fn solve5(mut a: [[f64; 5]; 5], mut b: [f64; 5]) -> Option<[f64; 5]> {
    for col in 0..5 {
        let piv = (col..5).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..5 {
            let factor = a[row][col] / a[col][col];
            for k in col..5 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 5];
    for row in (0..5).rev() {
        let tail: f64 = (row + 1..5).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Fits a discrete Maxwellian with moments `target` by damped Newton
/// iteration, starting from the continuous Maxwellian's coefficients.
pub fn fit_discrete_maxwellian(target: &SpeciesMoments, mass: f64, grid: &VelocityGrid) -> Result<MaxwellianFit> {
    if !(target.t > 0.0) {
        return Err(Error::NonPositiveTemperature(target.t));
    }
    if !(target.n > 0.0) {
        return Err(Error::DegenerateDensity { n: target.n });
    }
    let scale = (target.t / mass).sqrt();
    // Continuous normalisation in xi: n / (2 pi sigma^2)^{3/2} e^{-|xi|^2/2}.
    let mut a = target.n.ln() - 1.5 * (2.0 * std::f64::consts::PI * scale * scale).ln();
    let mut b = Vec3::ZERO;
    let mut c = -0.5;

    let fail = |iterations, residual| Error::NonResolvableMaxwellian { iterations, residual };
    let Some(mut system) = newton_system(grid, target, scale, a, b, c) else {
        return Err(fail(0, f64::INFINITY));
    };
    let mut res = max_norm(&system.0);
    for iter in 0..MAX_NEWTON_ITERATIONS {
        if res <= NEWTON_TOLERANCE {
            return Ok(MaxwellianFit { target: *target, mass, log_amplitude: a, drift: b, curvature: c, iterations: iter, residual: res });
        }
        let (r, jac) = system;
        let Some(step) = solve5(jac, r.map(|x| -x)) else {
            return Err(fail(iter, res));
        };
        // Backtrack until the residual decreases and the curvature stays negative.
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let na = a + lambda * step[0];
            let nb = b + lambda * Vec3::new(step[1], step[2], step[3]);
            let nc = c + lambda * step[4];
            if nc < 0.0 {
                if let Some(sys) = newton_system(grid, target, scale, na, nb, nc) {
                    let nres = max_norm(&sys.0);
                    if nres < res {
                        accepted = Some((na, nb, nc, sys, nres));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((na, nb, nc, sys, nres)) => {
                a = na;
                b = nb;
                c = nc;
                system = sys;
                res = nres;
            }
            None if res <= STAGNATION_TOLERANCE => {
                return Ok(MaxwellianFit { target: *target, mass, log_amplitude: a, drift: b, curvature: c, iterations: iter, residual: res });
            }
            None => return Err(fail(iter, res)),
        }
    }
    if res <= STAGNATION_TOLERANCE {
        return Ok(MaxwellianFit { target: *target, mass, log_amplitude: a, drift: b, curvature: c, iterations: MAX_NEWTON_ITERATIONS, residual: res });
    }
    Err(fail(MAX_NEWTON_ITERATIONS, res))
}

/// Moment-matched discrete Maxwellian with moments `target`.
pub fn maxwellian_discrete(target: &SpeciesMoments, mass: f64, grid: &VelocityGrid) -> Result<Distribution> {
    Ok(fit_discrete_maxwellian(target, mass, grid)?.evaluate(grid))
}

/// How attractor Maxwellians are realised on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaxwellianKind {
    /// Moment-matched; discrete conservation holds to roundoff.
    #[default]
    Discrete,
    /// Pointwise samples; moments carry the quadrature error.
    Continuous,
}

impl MaxwellianKind {
    pub fn build(self, target: &SpeciesMoments, mass: f64, grid: &VelocityGrid) -> Result<Distribution> {
        match self {
            MaxwellianKind::Discrete => maxwellian_discrete(target, mass, grid),
            MaxwellianKind::Continuous => maxwellian_continuous(target, mass, grid),
        }
    }
}
