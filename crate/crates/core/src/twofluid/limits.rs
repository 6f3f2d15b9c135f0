//! Residuals of the MHD limit systems on manufactured fields, and the two
//! vector identities used to reach the ideal-MHD conservation form.
//!
//! All fields depend on `x` only. With `A_{ij}` a tensor, `(div A)_i` is
//! `d/dx A_{ix}`, so `div(B (x) u - u (x) B)` reads `d/dx (B u_x - u B_x)`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::scaling::DimensionlessConstants;
use crate::error::{Error, Result};
use crate::vector::Vec3;

/// Width of the fourth-order central stencil.
pub const STENCIL_POINTS: usize = 5;

const EX: Vec3 = Vec3::new(1.0, 0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitSystem {
    /// Massless-electron, non-relativistic limit.
    Thm41,
    /// Additionally `C5 -> 0`, `C3/C2 -> 0`.
    Thm42,
    /// Ideal MHD in conservation form (`C1 = 1`, `C2 C5 = 1`).
    Thm43,
}

impl LimitSystem {
    pub fn name(self) -> &'static str {
        match self {
            LimitSystem::Thm41 => "thm41",
            LimitSystem::Thm42 => "thm42",
            LimitSystem::Thm43 => "thm43",
        }
    }
}

impl std::str::FromStr for LimitSystem {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "thm41" => Ok(LimitSystem::Thm41),
            "thm42" => Ok(LimitSystem::Thm42),
            "thm43" => Ok(LimitSystem::Thm43),
            other => Err(format!("unknown limit system '{other}' (expected thm41, thm42 or thm43)")),
        }
    }
}

/// Point values of the macroscopic fields. Also used for their time
/// derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSample {
    pub n: f64,
    pub u: Vec3,
    pub t_i: f64,
    pub t_e: f64,
    pub b: Vec3,
    pub e: Vec3,
    pub j: Vec3,
}

impl FieldSample {
    /// Total temperature `T_i + T_e`.
    pub fn t(&self) -> f64 {
        self.t_i + self.t_e
    }
}

pub trait ManufacturedSolution {
    fn sample(&self, x: f64, t: f64) -> FieldSample;
    /// Exact partial time derivative of every field.
    fn rate(&self, x: f64, t: f64) -> FieldSample;
}

/// Spatially and temporally constant fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformState(pub FieldSample);

impl ManufacturedSolution for UniformState {
    fn sample(&self, _x: f64, _t: f64) -> FieldSample {
        self.0
    }

    fn rate(&self, _x: f64, _t: f64) -> FieldSample {
        FieldSample::default()
    }
}

/// Exact ideal-MHD solution: a tangential layer in total-pressure balance
/// advected at constant normal speed, with `B_x = 0`, `E = -u x B` and
/// `j = curl B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvectedLayer {
    pub speed: f64,
    /// Constant total pressure `p + |B|^2/2`.
    pub total_pressure: f64,
    pub wavenumber: f64,
}

impl Default for AdvectedLayer {
    fn default() -> Self {
        AdvectedLayer { speed: 0.7, total_pressure: 1.0, wavenumber: 1.0 }
    }
}

struct LayerProfile {
    n: f64,
    uy: f64,
    by: f64,
    bz: f64,
}

impl AdvectedLayer {
    /// Profiles and their first two derivatives in the comoving coordinate.
    fn profile(&self, s: f64) -> [LayerProfile; 3] {
        let k = self.wavenumber;
        let (sn, cs) = (k * s).sin_cos();
        let (s2, c2) = (2.0 * k * s).sin_cos();
        [
            LayerProfile { n: 1.0 + 0.3 * sn, uy: 0.2 * s2, by: 0.5 * cs, bz: 0.4 * sn },
            LayerProfile { n: 0.3 * k * cs, uy: 0.4 * k * c2, by: -0.5 * k * sn, bz: 0.4 * k * cs },
            LayerProfile { n: -0.3 * k * k * sn, uy: -0.8 * k * k * s2, by: -0.5 * k * k * cs, bz: -0.4 * k * k * sn },
        ]
    }

    /// Fields and their derivative along the comoving coordinate.
    fn fields(&self, s: f64) -> (FieldSample, FieldSample) {
        let [v, d, dd] = self.profile(s);
        let p = self.total_pressure - 0.5 * (v.by * v.by + v.bz * v.bz);
        let dp = -(v.by * d.by + v.bz * d.bz);
        let t = p / v.n;
        let dt = (dp * v.n - p * d.n) / (v.n * v.n);
        let u = Vec3::new(self.speed, v.uy, 0.0);
        let du = Vec3::new(0.0, d.uy, 0.0);
        let b = Vec3::new(0.0, v.by, v.bz);
        let db = Vec3::new(0.0, d.by, d.bz);
        let value = FieldSample {
            n: v.n,
            u,
            t_i: 0.5 * t,
            t_e: 0.5 * t,
            b,
            e: -u.cross(b),
            j: Vec3::new(0.0, -d.bz, d.by),
        };
        let slope = FieldSample {
            n: d.n,
            u: du,
            t_i: 0.5 * dt,
            t_e: 0.5 * dt,
            b: db,
            e: -(du.cross(b) + u.cross(db)),
            j: Vec3::new(0.0, -dd.bz, dd.by),
        };
        (value, slope)
    }
}

impl ManufacturedSolution for AdvectedLayer {
    fn sample(&self, x: f64, t: f64) -> FieldSample {
        self.fields(x - self.speed * t).0
    }

    fn rate(&self, x: f64, t: f64) -> FieldSample {
        let d = self.fields(x - self.speed * t).1;
        let c = -self.speed;
        FieldSample {
            n: c * d.n,
            u: c * d.u,
            t_i: c * d.t_i,
            t_e: c * d.t_e,
            b: c * d.b,
            e: c * d.e,
            j: c * d.j,
        }
    }
}

/// Fields and exact time derivatives sampled on a periodic node grid
/// `x_i = i dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFields {
    pub dx: f64,
    pub values: Vec<FieldSample>,
    pub rates: Vec<FieldSample>,
}

impl SampledFields {
    pub fn from_solution(solution: &dyn ManufacturedSolution, cells: usize, length: f64, t: f64) -> Result<Self> {
        if cells < STENCIL_POINTS {
            return Err(Error::GridTooCoarse { cells, stencil: STENCIL_POINTS });
        }
        let dx = length / cells as f64;
        let xs = (0..cells).map(|i| i as f64 * dx);
        Ok(SampledFields {
            dx,
            values: xs.clone().map(|x| solution.sample(x, t)).collect(),
            rates: xs.map(|x| solution.rate(x, t)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Fourth-order periodic central derivative of a vector-valued grid function.
fn derivative(g: &[Vec3], dx: f64) -> Vec<Vec3> {
    let n = g.len() as isize;
    let at = |i: isize| g[i.rem_euclid(n) as usize];
    (0..n)
        .map(|i| (8.0 * (at(i + 1) - at(i - 1)) - (at(i + 2) - at(i - 2))) / (12.0 * dx))
        .collect()
}

/// One balance law written as `local + d/dx flux = 0` pointwise.
struct Equation {
    name: &'static str,
    local: Vec<Vec3>,
    flux: Vec<Vec3>,
}

impl Equation {
    fn new(name: &'static str, len: usize) -> Self {
        Equation { name, local: Vec::with_capacity(len), flux: Vec::with_capacity(len) }
    }

    fn push(&mut self, local: Vec3, flux: Vec3) {
        self.local.push(local);
        self.flux.push(flux);
    }

    fn norm(&self, dx: f64) -> f64 {
        let d = derivative(&self.flux, dx);
        self.local.iter().zip(&d).map(|(&l, &d)| (l + d).max_abs()).fold(0.0, f64::max)
    }
}

fn scalar(v: f64) -> Vec3 {
    Vec3::new(v, 0.0, 0.0)
}

/// Flux whose x-derivative is `curl v` for x-dependent fields.
fn curl_flux(v: Vec3) -> Vec3 {
    Vec3::new(0.0, -v.z(), v.y())
}

/// Per-equation max-norm residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitResidual {
    pub system: LimitSystem,
    pub cells: usize,
    pub dx: f64,
    pub equations: Vec<(&'static str, f64)>,
}

impl LimitResidual {
    pub fn norm(&self, name: &str) -> Option<f64> {
        self.equations.iter().find(|(n, _)| *n == name).map(|&(_, r)| r)
    }

    pub fn max_norm(&self) -> f64 {
        self.equations.iter().map(|&(_, r)| r).fold(0.0, f64::max)
    }
}

/// Residuals of `system` on sampled fields. `nu` is the nondimensional
/// collision frequency (`nu_ei = nu_ie`).
pub fn limit_residual(
    system: LimitSystem,
    fields: &SampledFields,
    c: &DimensionlessConstants,
    nu: f64,
) -> Result<LimitResidual> {
    let len = fields.len();
    if len < STENCIL_POINTS {
        return Err(Error::GridTooCoarse { cells: len, stencil: STENCIL_POINTS });
    }
    let names: &[&'static str] = match system {
        LimitSystem::Thm41 => &["mass", "momentum", "energy", "ohm", "electron-energy", "faraday", "div-b", "ampere"],
        LimitSystem::Thm42 => &["mass", "momentum", "energy", "ohm", "ohm-work", "ampere", "faraday", "div-b"],
        LimitSystem::Thm43 => &["mass", "momentum", "energy", "induction", "div-b"],
    };
    let mut eqs: Vec<Equation> = names.iter().map(|&n| Equation::new(n, len)).collect();
    let r32 = c.c3 / c.c2;

    for (s, d) in fields.values.iter().zip(&fields.rates) {
        let (n, u, b, e, j) = (s.n, s.u, s.b, s.e, s.j);
        let t = s.t();
        let dt = d.t();
        let ke = 0.5 * n * u.norm2();
        let d_nu = d.n * u + n * d.u;
        let d_ke = 0.5 * d.n * u.norm2() + n * u.dot(d.u);
        let d_thermal = 1.5 * (d.n * t + n * dt);
        let mass = (scalar(d.n), scalar(n * u.x()));
        let faraday = (d.b, curl_flux(e));
        let div_b = (Vec3::ZERO, scalar(b.x()));
        let ampere = (-j, curl_flux(b));
        let momentum = (d_nu - c.c2 * c.c5 * j.cross(b), c.c1 * n * t * EX + n * u.x() * u);
        let rows: Vec<(Vec3, Vec3)> = match system {
            LimitSystem::Thm41 => {
                let energy = (
                    scalar(c.c1 * d_thermal + d_ke - c.c2 * c.c5 * e.dot(j)),
                    scalar(
                        c.c1 * 2.5 * n * u.x() * (s.t_e - s.t_i) - c.c1 * c.c5 * 2.5 * t * j.x() + ke * u.x(),
                    ),
                );
                let ohm = (
                    c.c3 * n * (e + u.cross(b)) - c.c3 * c.c5 * j.cross(b) - c.c3 * r32 * c.c5 * nu * n * j,
                    r32 * c.c1 * n * s.t_e * EX,
                );
                let electron = (
                    scalar(
                        r32 * c.c1 * 1.5 * (d.n * s.t_e + n * d.t_e) + c.c3 * e.dot(n * u - c.c5 * j)
                            - c.c3 * r32 * c.c5 * nu * n * j.dot(u)
                            + c.c3 * r32 * c.c5 * c.c5 * 0.5 * nu * j.norm2()
                            - r32 * c.c3 * c.c1 * nu * 1.5 * n * n * (s.t_i - s.t_e),
                    ),
                    scalar(r32 * c.c1 * 2.5 * n * s.t_e * u.x() - r32 * c.c1 * c.c5 * 2.5 * s.t_e * j.x()),
                );
                vec![mass, momentum, energy, ohm, electron, faraday, div_b, ampere]
            }
            LimitSystem::Thm42 => {
                let energy = (
                    scalar(c.c1 * d_thermal + d_ke - c.c2 * c.c5 * e.dot(j)),
                    scalar(c.c1 * 2.5 * n * t * u.x() + ke * u.x()),
                );
                let ohm = (e + u.cross(b) - c.c3 * c.c5 / c.c2 * nu * j, Vec3::ZERO);
                let work = (scalar(e.dot(u) - c.c3 * c.c3 * c.c5 / c.c2 * nu * j.dot(u)), Vec3::ZERO);
                vec![mass, momentum, energy, ohm, work, ampere, faraday, div_b]
            }
            LimitSystem::Thm43 => {
                let p = n * t;
                let b2 = b.norm2();
                let momentum = (d_nu, n * u.x() * u + (p + 0.5 * b2) * EX - b.x() * b);
                let energy = (
                    scalar(d_ke + d_thermal + b.dot(d.b)),
                    scalar(ke * u.x() + 2.5 * p * u.x() + b2 * u.x() - b.x() * b.dot(u)),
                );
                let induction = (d.b, u.x() * b - b.x() * u);
                vec![mass, momentum, energy, induction, div_b]
            }
        };
        for (eq, (local, flux)) in eqs.iter_mut().zip(rows) {
            eq.push(local, flux);
        }
    }

    Ok(LimitResidual {
        system,
        cells: len,
        dx: fields.dx,
        equations: eqs.iter().map(|eq| (eq.name, eq.norm(fields.dx))).collect(),
    })
}

/// Residuals on `levels` successively doubled grids starting at `base_cells`.
#[allow(clippy::too_many_arguments)]
pub fn refinement_study(
    system: LimitSystem,
    solution: &dyn ManufacturedSolution,
    length: f64,
    t: f64,
    base_cells: usize,
    levels: usize,
    c: &DimensionlessConstants,
    nu: f64,
) -> Result<Vec<LimitResidual>> {
    (0..levels)
        .map(|l| {
            let fields = SampledFields::from_solution(solution, base_cells << l, length, t)?;
            limit_residual(system, &fields, c, nu)
        })
        .collect()
}

/// `log2` ratios of consecutive errors on grids refined by two.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// `sum amp cos(k . x + phase)` on the periodic square `[0, 2 pi)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMode {
    pub k: [f64; 2],
    pub amp: Vec3,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigField {
    pub offset: Vec3,
    pub modes: Vec<TrigMode>,
}

impl TrigField {
    pub fn constant(v: Vec3) -> Self {
        TrigField { offset: v, modes: Vec::new() }
    }

    /// Random smooth field with integer wavenumbers up to `kmax`. With
    /// `solenoidal`, each in-plane amplitude is orthogonal to its wavevector.
    pub fn random(rng: &mut ChaCha8Rng, modes: usize, kmax: i32, solenoidal: bool) -> Self {
        let mut out = TrigField { offset: Vec3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)), modes: Vec::with_capacity(modes) };
        while out.modes.len() < modes {
            let k = [rng.gen_range(-kmax..=kmax) as f64, rng.gen_range(-kmax..=kmax) as f64];
            if k == [0.0, 0.0] {
                continue;
            }
            let a: f64 = rng.gen_range(-0.5..0.5);
            let c: f64 = rng.gen_range(-0.5..0.5);
            let amp = if solenoidal {
                Vec3::new(a * k[1], -a * k[0], c)
            } else {
                Vec3::new(a, rng.gen_range(-0.5..0.5), c)
            };
            out.modes.push(TrigMode { k, amp, phase: rng.gen_range(0.0..std::f64::consts::TAU) });
        }
        out
    }

    pub fn value(&self, x: f64, y: f64) -> Vec3 {
        self.modes.iter().fold(self.offset, |acc, m| acc + (m.k[0] * x + m.k[1] * y + m.phase).cos() * m.amp)
    }

    /// `[d/dx F, d/dy F, d/dz F]`.
    pub fn jacobian(&self, x: f64, y: f64) -> [Vec3; 3] {
        let mut d = [Vec3::ZERO; 3];
        for m in &self.modes {
            let s = -(m.k[0] * x + m.k[1] * y + m.phase).sin();
            d[0] += s * m.k[0] * m.amp;
            d[1] += s * m.k[1] * m.amp;
        }
        d
    }

    pub fn divergence(&self, x: f64, y: f64) -> f64 {
        let d = self.jacobian(x, y);
        d[0].x() + d[1].y() + d[2].z()
    }
}

fn curl(d: &[Vec3; 3]) -> Vec3 {
    Vec3::new(d[1].z() - d[2].y(), d[2].x() - d[0].z(), d[0].y() - d[1].x())
}

/// Max deviations of the two identities on an `n x n` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductionCheck {
    pub cells: usize,
    /// `-curl(u x B)` against `div(B (x) u - u (x) B)`.
    pub induction: f64,
    /// `(curl B) x B` against `div(B (x) B - |B|^2 I / 2)`.
    pub lorentz: f64,
    /// Max `|div B|` of the supplied field.
    pub divergence: f64,
}

/// Exact left-hand sides against second-order central differences of the
/// tensor divergences. The Lorentz identity additionally needs `div B = 0`;
/// a nonzero divergence shows up there as an O(1) deviation.
pub fn induction_identity_check(u: &TrigField, b: &TrigField, cells: usize) -> Result<InductionCheck> {
    if cells < 3 {
        return Err(Error::GridTooCoarse { cells, stencil: 3 });
    }
    let h = std::f64::consts::TAU / cells as f64;
    let idx = |i: usize, j: usize| j * cells + i;
    let mut us = Vec::with_capacity(cells * cells);
    let mut bs = Vec::with_capacity(cells * cells);
    for j in 0..cells {
        for i in 0..cells {
            let (x, y) = (i as f64 * h, j as f64 * h);
            us.push(u.value(x, y));
            bs.push(b.value(x, y));
        }
    }
    // Tensor columns A_{.x}, A_{.y} at every node.
    let columns = |f: &dyn Fn(Vec3, Vec3) -> [Vec3; 2]| -> Vec<[Vec3; 2]> {
        us.iter().zip(&bs).map(|(&u, &b)| f(u, b)).collect()
    };
    let ind = columns(&|u, b| [u.x() * b - b.x() * u, u.y() * b - b.y() * u]);
    let lor = columns(&|_, b| {
        let half = 0.5 * b.norm2();
        [b.x() * b - half * EX, b.y() * b - half * Vec3::new(0.0, 1.0, 0.0)]
    });
    let div = |a: &[[Vec3; 2]], i: usize, j: usize| {
        let (ip, im) = ((i + 1) % cells, (i + cells - 1) % cells);
        let (jp, jm) = ((j + 1) % cells, (j + cells - 1) % cells);
        (a[idx(ip, j)][0] - a[idx(im, j)][0] + a[idx(i, jp)][1] - a[idx(i, jm)][1]) / (2.0 * h)
    };

    let mut out = InductionCheck { cells, induction: 0.0, lorentz: 0.0, divergence: 0.0 };
    for j in 0..cells {
        for i in 0..cells {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let (uv, bv) = (us[idx(i, j)], bs[idx(i, j)]);
            let (du, db) = (u.jacobian(x, y), b.jacobian(x, y));
            let dw = [0, 1, 2].map(|k| du[k].cross(bv) + uv.cross(db[k]));
            let lhs_ind = -curl(&dw);
            let lhs_lor = curl(&db).cross(bv);
            out.induction = out.induction.max((lhs_ind - div(&ind, i, j)).max_abs());
            out.lorentz = out.lorentz.max((lhs_lor - div(&lor, i, j)).max_abs());
            out.divergence = out.divergence.max(b.divergence(x, y).abs());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::f64::consts::TAU;

    fn unit() -> DimensionlessConstants {
        DimensionlessConstants { c1: 1.0, c2: 1.0, c3: 1.0, c4: 0.0, c5: 1.0, m: 0.0 }
    }

    fn quiet() -> UniformState {
        UniformState(FieldSample {
            n: 1.3,
            u: Vec3::ZERO,
            t_i: 0.8,
            t_e: 0.8,
            b: Vec3::new(0.4, -0.2, 0.9),
            e: Vec3::ZERO,
            j: Vec3::ZERO,
        })
    }

    #[test]
    fn constant_fields_have_zero_residual_in_every_system() {
        let c = DimensionlessConstants { c1: 0.7, c2: 1.9, c3: 0.3, c4: 0.0, c5: 0.6, m: 0.0 };
        let fields = SampledFields::from_solution(&quiet(), 16, TAU, 0.0).unwrap();
        for system in [LimitSystem::Thm41, LimitSystem::Thm42, LimitSystem::Thm43] {
            let r = limit_residual(system, &fields, &c, 1.5).unwrap();
            assert_eq!(r.max_norm(), 0.0, "{r:?}");
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        assert!(matches!(
            SampledFields::from_solution(&quiet(), 4, 1.0, 0.0),
            Err(Error::GridTooCoarse { cells: 4, stencil: 5 })
        ));
    }

    #[test]
    fn advected_layer_rates_match_finite_differences_in_time() {
        let layer = AdvectedLayer::default();
        let (x, t, h) = (0.9, 0.3, 1e-5);
        let r = layer.rate(x, t);
        let (p, m) = (layer.sample(x, t + h), layer.sample(x, t - h));
        let fd = |a: f64, b: f64| (a - b) / (2.0 * h);
        assert!((r.n - fd(p.n, m.n)).abs() < 1e-8);
        assert!((r.t_e - fd(p.t_e, m.t_e)).abs() < 1e-8);
        assert!((r.e - (p.e - m.e) / (2.0 * h)).max_abs() < 1e-8);
        assert!((r.j - (p.j - m.j) / (2.0 * h)).max_abs() < 1e-8);
    }

    #[test]
    fn advected_layer_current_is_curl_of_b() {
        let layer = AdvectedLayer::default();
        let (x, h) = (1.7, 1e-5);
        let s = layer.sample(x, 0.2);
        let (p, m) = (layer.sample(x + h, 0.2), layer.sample(x - h, 0.2));
        let db = (p.b - m.b) / (2.0 * h);
        assert!((s.j - Vec3::new(0.0, -db.z(), db.y())).max_abs() < 1e-8);
    }

    #[test]
    fn ideal_mhd_residual_converges_at_fourth_order() {
        let study = refinement_study(LimitSystem::Thm43, &AdvectedLayer::default(), TAU, 0.4, 16, 4, &unit(), 1.0).unwrap();
        let errors: Vec<f64> = study.iter().map(LimitResidual::max_norm).collect();
        assert!(errors[3] < 1e-5, "{errors:?}");
        for order in observed_orders(&errors) {
            assert!((3.7..4.4).contains(&order), "{errors:?}");
        }
        assert_eq!(study[3].norm("div-b"), Some(0.0));
    }

    #[test]
    fn ideal_mhd_solution_violates_resistive_ohm_law() {
        let fields = SampledFields::from_solution(&AdvectedLayer::default(), 64, TAU, 0.0).unwrap();
        let r = limit_residual(LimitSystem::Thm41, &fields, &unit(), 1.0).unwrap();
        assert!(r.norm("ohm").unwrap() > 0.1, "{r:?}");
        assert!(r.norm("ampere").unwrap() < 1e-5);
        assert!(r.norm("faraday").unwrap() < 1e-5);
    }

    #[test]
    fn thm42_ohm_law_is_ideal_when_resistivity_vanishes() {
        let c = DimensionlessConstants { c3: 0.0, ..unit() };
        let fields = SampledFields::from_solution(&AdvectedLayer::default(), 64, TAU, 0.0).unwrap();
        let r = limit_residual(LimitSystem::Thm42, &fields, &c, 1.0).unwrap();
        assert!(r.norm("ohm").unwrap() < 1e-15);
        assert!(r.norm("ohm-work").unwrap() < 1e-15);
        assert!(r.norm("mass").unwrap() < 1e-5);
    }

    #[test]
    fn constant_fields_satisfy_both_identities() {
        let u = TrigField::constant(Vec3::new(0.3, -1.0, 2.0));
        let b = TrigField::constant(Vec3::new(1.1, 0.4, -0.7));
        let r = induction_identity_check(&u, &b, 8).unwrap();
        assert!(r.induction < 1e-15 && r.lorentz < 1e-15);
    }

    #[test]
    fn identities_converge_at_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = TrigField::random(&mut rng, 4, 3, false);
        let b = TrigField::random(&mut rng, 4, 3, true);
        let checks: Vec<_> = [32, 64, 128].iter().map(|&n| induction_identity_check(&u, &b, n).unwrap()).collect();
        assert!(checks[0].divergence < 1e-12);
        for metric in [|c: &InductionCheck| c.induction, |c: &InductionCheck| c.lorentz] {
            let e: Vec<f64> = checks.iter().map(metric).collect();
            for order in observed_orders(&e) {
                assert!((1.8..2.3).contains(&order), "{e:?}");
            }
        }
    }

    #[test]
    fn divergence_is_detected_by_the_lorentz_identity() {
        let b0 = TrigField::constant(Vec3::new(0.5, 0.2, 0.1));
        let u = TrigField::constant(Vec3::ZERO);
        let bump = |eta: f64| {
            let mut b = b0.clone();
            b.modes.push(TrigMode { k: [1.0, 0.0], amp: Vec3::new(eta, 0.0, 0.0), phase: -std::f64::consts::FRAC_PI_2 });
            induction_identity_check(&u, &b, 128).unwrap()
        };
        let (small, large) = (bump(0.01), bump(0.1));
        assert!(large.divergence > 9.0 * small.divergence);
        assert!(small.lorentz > 1e-3);
        assert!(large.lorentz > 5.0 * small.lorentz);
    }
}
