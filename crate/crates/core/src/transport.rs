//! One space dimension, three velocity dimensions: free streaming in `x`
//! combined with BGK relaxation by operator splitting.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{MixtureParams, MomentPair};
use crate::relax::{KineticState, Scheme};
use crate::vector::Vec3;
use crate::velocity::{h_single, maxwellian_discrete, moments, Distribution, MaxwellianKind, VelocityGrid};

/// Largest admissible Courant number `dt max|v_x| / dx`.
pub const CFL_LIMIT: f64 = 1.0;

/// Entropy increases above this are flagged by [`EntropyBudget`].
pub const ENTROPY_FLAG_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    /// Zero-gradient ghost cells copied from the boundary cells.
    Outflow,
}

impl std::str::FromStr for Boundary {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "outflow" | "copy-outflow" => Ok(Boundary::Outflow),
            other => Err(format!("unknown boundary '{other}' (expected periodic or outflow)")),
        }
    }
}

/// Face reconstruction for the streaming flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reconstruction {
    /// First-order upwind; positivity preserving for Courant numbers up to 1.
    #[default]
    Upwind,
    /// Minmod-limited linear reconstruction. Positivity is not guaranteed.
    Minmod,
}

/// Time integrator of the streaming substep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StreamingIntegrator {
    ForwardEuler,
    /// Two-stage strong-stability-preserving Runge-Kutta (Heun form).
    #[default]
    SspRk2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Splitting {
    /// `T(dt/2) R(dt) T(dt/2)`.
    #[default]
    Strang,
    /// `T(dt) R(dt)`.
    Lie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransportOptions {
    pub splitting: Splitting,
    pub streaming: StreamingIntegrator,
    pub reconstruction: Reconstruction,
    pub relaxation: Scheme,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub f1: Distribution,
    pub f2: Distribution,
}

/// Two-species distributions on `cells` uniform cells of `[0, length]`.
#[derive(Debug, Clone)]
pub struct SpatialField {
    pub cells: Vec<Cell>,
    pub grid: VelocityGrid,
    pub params: MixtureParams,
    pub length: f64,
    pub boundary: Boundary,
    pub time: f64,
    pub attractors: MaxwellianKind,
}

/// Domain-integrated conserved quantities and H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalTotals {
    pub t: f64,
    pub mass1: f64,
    pub mass2: f64,
    pub momentum: Vec3,
    pub energy: f64,
    pub h: f64,
    pub min_value: f64,
}

impl SpatialField {
    /// Cells initialised with discrete Maxwellians whose moments are
    /// `profile(x)` at the cell centres.
    pub fn from_profile(
        cells: usize,
        length: f64,
        boundary: Boundary,
        grid: VelocityGrid,
        params: MixtureParams,
        profile: impl Fn(f64) -> MomentPair,
    ) -> Result<Self> {
        if cells < 2 || !(length > 0.0) {
            return Err(Error::InvalidGrid(format!("need at least 2 cells on a positive length, got {cells} on {length}")));
        }
        let dx = length / cells as f64;
        let cells = (0..cells)
            .map(|i| {
                let pair = profile((i as f64 + 0.5) * dx);
                Ok(Cell {
                    f1: maxwellian_discrete(&pair.s1, params.m1, &grid)?,
                    f2: maxwellian_discrete(&pair.s2, params.m2, &grid)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpatialField { cells, grid, params, length, boundary, time: 0.0, attractors: MaxwellianKind::Discrete })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells.len() as f64
    }

    pub fn cell_centre(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn courant(&self, dt: f64) -> f64 {
        dt * self.grid.max_abs_vx() / self.dx()
    }

    /// Largest stable streaming step.
    pub fn max_streaming_dt(&self) -> f64 {
        CFL_LIMIT * self.dx() / self.grid.max_abs_vx()
    }

    pub fn cell_moments(&self) -> Result<Vec<MomentPair>> {
        self.cells
            .iter()
            .map(|c| Ok(MomentPair::new(moments(&c.f1, &self.grid)?, moments(&c.f2, &self.grid)?)))
            .collect()
    }

    pub fn totals(&self) -> GlobalTotals {
        let g = &self.grid;
        let dx = self.dx();
        let (m1, m2) = (self.params.m1, self.params.m2);
        let per_cell: Vec<[f64; 7]> = self
            .cells
            .par_iter()
            .map(|c| {
                let mom = |d: usize| {
                    m1 * g.integrate_with(&c.f1.values, |v, f| v[d] * f) + m2 * g.integrate_with(&c.f2.values, |v, f| v[d] * f)
                };
                [
                    g.integrate(&c.f1.values),
                    g.integrate(&c.f2.values),
                    mom(0),
                    mom(1),
                    mom(2),
                    0.5 * m1 * g.integrate_with(&c.f1.values, |v, f| v.norm2() * f)
                        + 0.5 * m2 * g.integrate_with(&c.f2.values, |v, f| v.norm2() * f),
                    h_single(&c.f1, g) + h_single(&c.f2, g),
                ]
            })
            .collect();
        let sum = |k: usize| dx * crate::reduce::pairwise_sum_by(per_cell.len(), |i| per_cell[i][k]);
        let min_value = self.cells.iter().map(|c| c.f1.min().min(c.f2.min())).fold(f64::INFINITY, f64::min);
        GlobalTotals {
            t: self.time,
            mass1: sum(0),
            mass2: sum(1),
            momentum: Vec3::new(sum(2), sum(3), sum(4)),
            energy: sum(5),
            h: sum(6),
            min_value,
        }
    }

    /// Cell `i` with ghost cells supplied by the boundary condition.
    fn neighbour(cells: &[Cell], i: isize, boundary: Boundary) -> &Cell {
        let n = cells.len() as isize;
        let j = match boundary {
            Boundary::Periodic => i.rem_euclid(n),
            Boundary::Outflow => i.clamp(0, n - 1),
        };
        &cells[j as usize]
    }

    /// One explicit streaming stage `f - dt/dx (F_{i+1/2} - F_{i-1/2})`.
    fn streaming_stage(&self, cells: &[Cell], dt: f64, recon: Reconstruction) -> Vec<Cell> {
        let nu = dt / self.dx();
        let vx = self.grid.axis(0);
        let plane = self.grid.len() / vx.len();
        let bc = self.boundary;
        (0..cells.len())
            .into_par_iter()
            .map(|i| {
                let i = i as isize;
                let stencil: [&Cell; 5] = std::array::from_fn(|k| Self::neighbour(cells, i + k as isize - 2, bc));
                let update = |pick: fn(&Cell) -> &Distribution| -> Distribution {
                    let vals: [&[f64]; 5] = std::array::from_fn(|k| pick(stencil[k]).values.as_slice());
                    let mut out = vals[2].to_vec();
                    for (a, &v) in vx.iter().enumerate() {
                        let c = nu * v.abs();
                        for idx in a * plane..(a + 1) * plane {
                            let f = |k: usize| vals[k][idx];
                            out[idx] = match recon {
                                Reconstruction::Upwind => {
                                    let up = if v > 0.0 { f(1) } else { f(3) };
                                    f(2) + c * (up - f(2))
                                }
                                Reconstruction::Minmod => {
                                    let slope = |k: usize| minmod(f(k) - f(k - 1), f(k + 1) - f(k));
                                    if v > 0.0 {
                                        let right = f(2) + 0.5 * slope(2);
                                        let left = f(1) + 0.5 * slope(1);
                                        f(2) - c * (right - left)
                                    } else {
                                        let right = f(3) - 0.5 * slope(3);
                                        let left = f(2) - 0.5 * slope(2);
                                        f(2) - c * (left - right)
                                    }
                                }
                            };
                        }
                    }
                    Distribution { values: out, mass: pick(stencil[2]).mass }
                };
                Cell { f1: update(|c| &c.f1), f2: update(|c| &c.f2) }
            })
            .collect()
    }

    /// Streaming substep `df/dt + v_x df/dx = 0` over `dt`.
    pub fn transport_step(&self, dt: f64, integrator: StreamingIntegrator, recon: Reconstruction) -> Result<SpatialField> {
        let courant = self.courant(dt);
        if !(courant <= CFL_LIMIT) {
            return Err(Error::CflViolation { courant, limit: CFL_LIMIT });
        }
        let cells = match integrator {
            StreamingIntegrator::ForwardEuler => self.streaming_stage(&self.cells, dt, recon),
            StreamingIntegrator::SspRk2 => {
                let stage = self.streaming_stage(&self.cells, dt, recon);
                let second = self.streaming_stage(&stage, dt, recon);
                self.cells
                    .iter()
                    .zip(&second)
                    .map(|(a, b)| Cell { f1: average(&a.f1, &b.f1), f2: average(&a.f2, &b.f2) })
                    .collect()
            }
        };
        Ok(SpatialField { cells, time: self.time + dt, ..self.shell() })
    }

    /// Cell-wise space-homogeneous relaxation over `dt`.
    pub fn relax_step(&self, dt: f64, scheme: Scheme) -> Result<SpatialField> {
        let cells = self
            .cells
            .par_iter()
            .map(|c| {
                let mut state = KineticState::new(c.f1.clone(), c.f2.clone(), self.grid.clone(), self.params)?;
                state.attractors = self.attractors;
                let (next, _) = state.step(scheme, dt)?;
                Ok(Cell { f1: next.f1, f2: next.f2 })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpatialField { cells, time: self.time + dt, ..self.shell() })
    }

    fn shell(&self) -> SpatialField {
        SpatialField {
            cells: Vec::new(),
            grid: self.grid.clone(),
            params: self.params,
            length: self.length,
            boundary: self.boundary,
            time: self.time,
            attractors: self.attractors,
        }
    }

    pub fn split_step(&self, dt: f64, opts: TransportOptions) -> Result<SpatialField> {
        let stream = |f: &SpatialField, h| f.transport_step(h, opts.streaming, opts.reconstruction);
        let next = match opts.splitting {
            Splitting::Strang => {
                let a = stream(self, 0.5 * dt)?;
                let b = a.relax_step(dt, opts.relaxation)?;
                let mut c = stream(&b, 0.5 * dt)?;
                c.time = self.time + dt;
                c
            }
            Splitting::Lie => {
                let a = stream(self, dt)?;
                let mut b = a.relax_step(dt, opts.relaxation)?;
                b.time = self.time + dt;
                b
            }
        };
        Ok(next)
    }

    /// `transport(dt/2)`, `relax(dt)`, `transport(dt/2)` with the default
    /// streaming integrator and the frozen-coefficient exponential relaxation.
    pub fn strang_step(&self, dt: f64) -> Result<SpatialField> {
        self.split_step(dt, TransportOptions::default())
    }
}

impl SpatialField {
    /// Mirrors through `x -> L - x`, `v_x -> -v_x` (grid symmetric in `v_x`).
    pub fn mirrored(&self) -> SpatialField {
        let g = &self.grid;
        let flip = |f: &Distribution| Distribution {
            values: (0..g.len()).map(|idx| f.values[g.mirror_x(idx)]).collect(),
            mass: f.mass,
        };
        let cells = self.cells.iter().rev().map(|c| Cell { f1: flip(&c.f1), f2: flip(&c.f2) }).collect();
        SpatialField { cells, ..self.shell() }
    }
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

fn average(a: &Distribution, b: &Distribution) -> Distribution {
    Distribution {
        values: a.values.iter().zip(&b.values).map(|(x, y)| 0.5 * x + 0.5 * y).collect(),
        mass: a.mass,
    }
}

/// Per-step change of the domain-integrated H.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyBudget {
    pub h: Vec<f64>,
    pub increments: Vec<f64>,
    /// Steps whose increment exceeded [`ENTROPY_FLAG_TOLERANCE`].
    pub flagged: Vec<usize>,
    /// Only periodic runs are expected to be non-increasing.
    pub asserted: bool,
}

impl EntropyBudget {
    pub fn from_totals(totals: &[GlobalTotals], boundary: Boundary) -> Self {
        let h: Vec<f64> = totals.iter().map(|t| t.h).collect();
        let increments: Vec<f64> = h.windows(2).map(|w| w[1] - w[0]).collect();
        let flagged = increments
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > ENTROPY_FLAG_TOLERANCE)
            .map(|(i, _)| i)
            .collect();
        EntropyBudget { h, increments, flagged, asserted: boundary == Boundary::Periodic }
    }

    pub fn max_increment(&self) -> f64 {
        self.increments.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.flagged.is_empty()
    }
}

pub fn entropy_budget(series: &[SpatialField]) -> EntropyBudget {
    let totals: Vec<GlobalTotals> = series.iter().map(|f| f.totals()).collect();
    let bc = series.first().map_or(Boundary::Periodic, |f| f.boundary);
    EntropyBudget::from_totals(&totals, bc)
}

/// Result of [`run`]: totals after every step and periodic snapshots.
#[derive(Debug, Clone)]
pub struct TransportRun {
    pub totals: Vec<GlobalTotals>,
    pub snapshots: Vec<(f64, Vec<MomentPair>)>,
    pub final_field: SpatialField,
}

impl TransportRun {
    pub fn budget(&self) -> EntropyBudget {
        EntropyBudget::from_totals(&self.totals, self.final_field.boundary)
    }

    pub fn max_relative_drift(&self, column: impl Fn(&GlobalTotals) -> f64) -> f64 {
        let base = column(&self.totals[0]);
        let scale = base.abs().max(f64::MIN_POSITIVE);
        self.totals.iter().map(|t| (column(t) - base).abs() / scale).fold(0.0, f64::max)
    }

    /// One row of [`GlobalTotals`] per step.
    pub fn write_totals_csv(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "{TOTALS_HEADER}")?;
        for t in &self.totals {
            let cols = [t.t, t.mass1, t.mass2, t.momentum.x(), t.momentum.y(), t.momentum.z(), t.energy, t.h, t.min_value];
            let row: Vec<String> = cols.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

pub const TOTALS_HEADER: &str = "t,mass1,mass2,px,py,pz,energy,h,min_f";

pub const MOMENTS_HEADER: &str = "x,n1,u1x,u1y,u1z,T1,n2,u2x,u2y,u2z,T2";

/// Cell-centred moments of one snapshot.
pub fn write_moments_csv(moments: &[MomentPair], length: f64, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{MOMENTS_HEADER}")?;
    let dx = length / moments.len() as f64;
    for (i, p) in moments.iter().enumerate() {
        let (a, b) = (&p.s1, &p.s2);
        let cols = [(i as f64 + 0.5) * dx, a.n, a.u.x(), a.u.y(), a.u.z(), a.t, b.n, b.u.x(), b.u.y(), b.u.z(), b.t];
        let row: Vec<String> = cols.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Advances `steps` split steps, snapshotting cell moments every
/// `snapshot_every` steps (and at the end) when it is nonzero.
pub fn run(field: SpatialField, dt: f64, steps: usize, opts: TransportOptions, snapshot_every: usize) -> Result<TransportRun> {
    let mut field = field;
    let mut totals = vec![field.totals()];
    let mut snapshots = Vec::new();
    if snapshot_every > 0 {
        snapshots.push((field.time, field.cell_moments()?));
    }
    for step in 1..=steps {
        field = field.split_step(dt, opts)?;
        totals.push(field.totals());
        if snapshot_every > 0 && (step % snapshot_every == 0 || step == steps) {
            snapshots.push((field.time, field.cell_moments()?));
        }
    }
    Ok(TransportRun { totals, snapshots, final_field: field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{preset, PresetAux, SpeciesMoments};

    fn hamel() -> MixtureParams {
        preset("hamel", 2.0, 1.0, PresetAux::default()).unwrap()
    }

    fn grid() -> VelocityGrid {
        VelocityGrid::cube(12, 4.0).unwrap()
    }

    fn smooth(x: f64) -> MomentPair {
        let s = (2.0 * std::f64::consts::PI * x).sin();
        let c = (2.0 * std::f64::consts::PI * x).cos();
        MomentPair::new(
            SpeciesMoments::new(1.0 + 0.2 * s, [0.2 * c, 0.0, 0.0], 1.0 + 0.1 * c),
            SpeciesMoments::new(0.8 - 0.1 * c, [-0.1 * s, 0.1, 0.0], 1.0 + 0.1 * s),
        )
    }

    fn field(cells: usize, bc: Boundary, params: MixtureParams, profile: impl Fn(f64) -> MomentPair) -> SpatialField {
        SpatialField::from_profile(cells, 1.0, bc, grid(), params, profile).unwrap()
    }

    fn max_cell_diff(a: &SpatialField, b: &SpatialField) -> f64 {
        a.cells
            .iter()
            .zip(&b.cells)
            .map(|(x, y)| x.f1.max_abs_diff(&y.f1).max(x.f2.max_abs_diff(&y.f2)))
            .fold(0.0, f64::max)
    }

    #[test]
    fn uniform_field_is_unchanged_by_streaming() {
        let uniform = |_| smooth(0.0);
        for bc in [Boundary::Periodic, Boundary::Outflow] {
            let f = field(8, bc, hamel(), uniform);
            let dt = 0.5 * f.max_streaming_dt();
            let g = f.transport_step(dt, StreamingIntegrator::SspRk2, Reconstruction::Upwind).unwrap();
            assert!(max_cell_diff(&f, &g) < 1e-15);
        }
    }

    #[test]
    fn single_node_matches_scalar_upwind() {
        let g = grid();
        let params = MixtureParams::default();
        let node = g.index(9, 6, 6);
        let vx = g.node(node).x();
        assert!(vx > 0.0);
        let n = 10;
        let profile: Vec<f64> = (0..n).map(|i| if (3..6).contains(&i) { 1.0 + i as f64 } else { 0.0 }).collect();
        let cells = profile
            .iter()
            .map(|&p| {
                let mut f1 = Distribution::zeros(&g, 1.0);
                f1.values[node] = p;
                Cell { f1, f2: Distribution::zeros(&g, 1.0) }
            })
            .collect();
        let mut f = SpatialField { cells, grid: g, params, length: 1.0, boundary: Boundary::Periodic, time: 0.0, attractors: MaxwellianKind::Discrete };
        let dt = 0.3 * f.dx() / vx;
        let c = vx * dt / f.dx();
        let mut oracle = profile.clone();
        for _ in 0..7 {
            oracle = (0..n).map(|i| oracle[i] - c * (oracle[i] - oracle[(i + n - 1) % n])).collect();
            f = f.transport_step(dt, StreamingIntegrator::ForwardEuler, Reconstruction::Upwind).unwrap();
        }
        for i in 0..n {
            assert!((f.cells[i].f1.values[node] - oracle[i]).abs() < 1e-14);
        }
        let mass: f64 = f.cells.iter().map(|c| c.f1.values[node]).sum();
        assert!((mass - profile.iter().sum::<f64>()).abs() < 1e-13);
        // the centre of mass moved right
        let centre = |v: &dyn Fn(usize) -> f64| (0..n).map(|i| i as f64 * v(i)).sum::<f64>();
        assert!(centre(&|i| f.cells[i].f1.values[node]) > centre(&|i| profile[i]));
    }

    #[test]
    fn courant_above_one_is_rejected() {
        let f = field(8, Boundary::Periodic, hamel(), smooth);
        let dt = 1.01 * f.max_streaming_dt();
        assert!(matches!(
            f.transport_step(dt, StreamingIntegrator::ForwardEuler, Reconstruction::Upwind),
            Err(Error::CflViolation { .. })
        ));
    }

    #[test]
    fn outflow_pulse_loses_mass_monotonically() {
        let pulse = |x: f64| {
            let n = if (0.4..0.6).contains(&x) { 1.0 } else { 1e-8 };
            MomentPair::new(SpeciesMoments::new(n, [0.0; 3], 1.0), SpeciesMoments::new(n, [0.0; 3], 1.0))
        };
        let params = MixtureParams { nu11: 0.0, nu21: 0.0, nu22: 0.0, ..Default::default() };
        let mut f = field(20, Boundary::Outflow, params, pulse);
        let dt = 0.5 * f.max_streaming_dt();
        let mut masses = vec![f.totals().mass1];
        for _ in 0..60 {
            f = f.transport_step(dt, StreamingIntegrator::SspRk2, Reconstruction::Upwind).unwrap();
            masses.push(f.totals().mass1);
        }
        assert!(masses.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
        assert!(*masses.last().unwrap() < 0.9 * masses[0]);
    }

    #[test]
    fn periodic_split_steps_conserve_and_dissipate() {
        let f = field(16, Boundary::Periodic, hamel(), smooth);
        let dt = 0.9 * f.max_streaming_dt();
        for opts in [
            TransportOptions::default(),
            TransportOptions { splitting: Splitting::Lie, streaming: StreamingIntegrator::ForwardEuler, ..Default::default() },
        ] {
            let r = run(f.clone(), dt, 20, opts, 0).unwrap();
            assert!(r.max_relative_drift(|t| t.mass1) < 1e-13);
            assert!(r.max_relative_drift(|t| t.mass2) < 1e-13);
            assert!(r.max_relative_drift(|t| t.energy) < 1e-12);
            let p0 = r.totals[0].momentum.norm();
            assert!(r.totals.iter().all(|t| (t.momentum - r.totals[0].momentum).norm() < 1e-12 * p0));
            assert!(r.budget().is_non_increasing(), "{:?}", r.budget().max_increment());
            assert!(r.totals.iter().all(|t| t.min_value >= 0.0));
        }
    }

    #[test]
    fn no_collisions_reduces_to_pure_streaming() {
        let params = MixtureParams { nu11: 0.0, nu21: 0.0, nu22: 0.0, ..hamel() };
        let f = field(8, Boundary::Periodic, params, smooth);
        let dt = 0.8 * f.max_streaming_dt();
        let split = f.strang_step(dt).unwrap();
        let a = f.transport_step(0.5 * dt, StreamingIntegrator::SspRk2, Reconstruction::Upwind).unwrap();
        let b = a.transport_step(0.5 * dt, StreamingIntegrator::SspRk2, Reconstruction::Upwind).unwrap();
        assert_eq!(max_cell_diff(&split, &b), 0.0);
    }

    #[test]
    fn uniform_data_follows_homogeneous_relaxation() {
        let uniform = |_| smooth(0.3);
        let mut f = field(6, Boundary::Periodic, hamel(), uniform);
        let c = &f.cells[0];
        let mut s = KineticState::new(c.f1.clone(), c.f2.clone(), f.grid.clone(), f.params).unwrap();
        let dt = 0.8 * f.max_streaming_dt();
        for _ in 0..5 {
            f = f.strang_step(dt).unwrap();
            s = s.step_exponential(dt).unwrap();
        }
        for c in &f.cells {
            assert!(c.f1.max_abs_diff(&s.f1) < 1e-14 && c.f2.max_abs_diff(&s.f2) < 1e-14);
        }
    }

    #[test]
    fn mirror_symmetric_data_stays_symmetric() {
        // density even and x-velocity odd about x = 1/2, with a jump
        let riemann = |x: f64| {
            let (n, t) = if (x - 0.5).abs() < 0.25 { (1.0, 1.2) } else { (0.6, 0.8) };
            let ux = 0.3 * (2.0 * std::f64::consts::PI * x).sin();
            MomentPair::new(SpeciesMoments::new(n, [ux, 0.0, 0.0], t), SpeciesMoments::new(0.5 * n, [-ux, 0.0, 0.0], t))
        };
        let f = field(12, Boundary::Periodic, hamel(), riemann);
        assert!(max_cell_diff(&f, &f.mirrored()) < 1e-14);
        let mut g = f.clone();
        let dt = 0.8 * g.max_streaming_dt();
        for _ in 0..10 {
            g = g.strang_step(dt).unwrap();
        }
        assert!(max_cell_diff(&g, &g.mirrored()) < 1e-12);
        assert!(max_cell_diff(&g, &f) > 1e-3);
    }

    #[test]
    fn strang_splitting_is_second_order_in_time() {
        let f = field(16, Boundary::Periodic, hamel(), smooth);
        let opts = TransportOptions { relaxation: Scheme::ExponentialMidpoint, ..Default::default() };
        let t_end = 0.1;
        let moments_at = |steps: usize| {
            let r = run(f.clone(), t_end / steps as f64, steps, opts, 0).unwrap();
            r.final_field.cell_moments().unwrap()
        };
        let reference = moments_at(128);
        let err = |steps| {
            moments_at(steps)
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a.s1.t - b.s1.t).abs().max((a.s2.u - b.s2.u).max_abs()).max((a.s1.n - b.s1.n).abs()))
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(8), err(16));
        let order = (e1 / e2).log2();
        assert!((1.8..2.4).contains(&order), "order {order} ({e1}, {e2})");
    }

    #[test]
    fn minmod_reconstruction_conserves_mass() {
        let f = field(16, Boundary::Periodic, hamel(), smooth);
        let dt = 0.4 * f.max_streaming_dt();
        let g = f.transport_step(dt, StreamingIntegrator::SspRk2, Reconstruction::Minmod).unwrap();
        let (a, b) = (f.totals(), g.totals());
        assert!((a.mass1 - b.mass1).abs() < 1e-14 * a.mass1);
        assert!(max_cell_diff(&f, &g) > 0.0);
    }

    #[test]
    fn equilibrium_everywhere_has_zero_budget() {
        let eq = |_| MomentPair::new(SpeciesMoments::new(1.0, [0.0; 3], 1.0), SpeciesMoments::new(0.5, [0.0; 3], 1.0));
        let f = field(6, Boundary::Periodic, hamel(), eq);
        let dt = 0.5 * f.max_streaming_dt();
        let series = vec![f.clone(), f.strang_step(dt).unwrap()];
        let b = entropy_budget(&series);
        assert!(b.increments[0].abs() < 1e-13, "{b:?}");
        assert!(b.asserted);
    }
}
