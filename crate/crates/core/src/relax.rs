//! Space-homogeneous two-species relaxation.
//!
//! The exponential schemes split each operator as `Q_k = -L f_k + N_k(f)`
//! with a rate `L = max(lambda_1, lambda_2)` shared by both species and
//! `N_k = (L - lambda_k) f_k + lambda_k G_k >= 0`. Sharing `L` keeps the
//! update a single scalar multiple of `Q_k` for both species, so the discrete
//! exchange of momentum and energy cancels exactly, and every coefficient in
//! the update is nonnegative, so `f >= 0` is kept for any step.

use std::io::{self, Write};

use crate::bgk::{collision_terms, total_energy, total_momentum, Attractors};
use crate::error::{Error, Result};
use crate::params::{MixtureParams, MomentPair, SpeciesMoments};
use crate::vector::Vec3;
use crate::velocity::{
    entropy_production_with, h_functional, maxwellian_discrete, moments, Distribution, MaxwellianKind, VelocityGrid,
};

/// RK4 steps beyond `RK4_STABILITY / max lambda` are refused.
pub const RK4_STABILITY: f64 = 2.7;

/// Values below `-POSITIVITY_SLACK` after an RK4 step are reported.
pub const POSITIVITY_SLACK: f64 = 1e-12;

/// Default step as a fraction of the fastest relaxation time.
pub const DEFAULT_DT_FRACTION: f64 = 0.1;

/// `|S|` threshold and run length for declaring equilibrium.
pub const EQUILIBRIUM_PRODUCTION: f64 = 1e-12;
pub const EQUILIBRIUM_STREAK: usize = 10;

#[derive(Debug, Clone)]
pub struct KineticState {
    pub f1: Distribution,
    pub f2: Distribution,
    pub grid: VelocityGrid,
    pub params: MixtureParams,
    pub time: f64,
    pub attractors: MaxwellianKind,
}

/// Time integrators for the relaxation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// First-order exponential step with frozen attractors.
    #[default]
    Exponential,
    /// Second-order exponential midpoint (attractors refreshed at `dt/2`).
    ExponentialMidpoint,
    /// Classical Runge-Kutta reference integrator.
    Rk4,
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exponential" => Ok(Scheme::Exponential),
            "exponential-midpoint" => Ok(Scheme::ExponentialMidpoint),
            "rk4" => Ok(Scheme::Rk4),
            other => Err(format!("unknown scheme '{other}' (expected exponential, exponential-midpoint or rk4)")),
        }
    }
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Exponential => "exponential",
            Scheme::ExponentialMidpoint => "exponential-midpoint",
            Scheme::Rk4 => "rk4",
        }
    }
}

/// Lowest value seen after an RK4 step that went below `-POSITIVITY_SLACK`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityLoss {
    pub time: f64,
    pub min_value: f64,
}

impl KineticState {
    pub fn new(f1: Distribution, f2: Distribution, grid: VelocityGrid, params: MixtureParams) -> Result<Self> {
        if f1.len() != grid.len() || f2.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "distribution lengths {} and {} do not match the {} grid nodes",
                f1.len(),
                f2.len(),
                grid.len()
            )));
        }
        Ok(KineticState { f1, f2, grid, params, time: 0.0, attractors: MaxwellianKind::Discrete })
    }

    /// Both species initialised as discrete Maxwellians.
    pub fn from_moments(pair: &MomentPair, grid: VelocityGrid, params: MixtureParams) -> Result<Self> {
        let f1 = maxwellian_discrete(&pair.s1, params.m1, &grid)?;
        let f2 = maxwellian_discrete(&pair.s2, params.m2, &grid)?;
        Self::new(f1, f2, grid, params)
    }

    pub fn moments(&self) -> Result<MomentPair> {
        Ok(MomentPair::new(moments(&self.f1, &self.grid)?, moments(&self.f2, &self.grid)?))
    }

    pub fn attractors(&self) -> Result<Attractors> {
        Attractors::compute(&self.f1, &self.f2, &self.grid, &self.params, self.attractors)
    }

    /// Fastest total relaxation rate `max(lambda_1, lambda_2)`.
    pub fn max_rate(&self) -> Result<f64> {
        let m = self.moments()?;
        Ok(crate::bgk::RelaxationRates::new(&self.params, m.s1.n, m.s2.n).max_total())
    }

    pub fn default_dt(&self) -> Result<f64> {
        let rate = self.max_rate()?;
        Ok(if rate > 0.0 { DEFAULT_DT_FRACTION / rate } else { 1.0 })
    }

    pub fn total_momentum(&self) -> Vec3 {
        total_momentum(&self.f1, &self.f2, &self.grid)
    }

    pub fn total_energy(&self) -> f64 {
        total_energy(&self.f1, &self.f2, &self.grid)
    }

    pub fn h(&self) -> f64 {
        h_functional(&self.f1, &self.f2, &self.grid)
    }

    fn with_values(&self, f1: Vec<f64>, f2: Vec<f64>, dt: f64) -> KineticState {
        KineticState {
            f1: Distribution { values: f1, mass: self.f1.mass },
            f2: Distribution { values: f2, mass: self.f2.mass },
            grid: self.grid.clone(),
            params: self.params,
            time: self.time + dt,
            attractors: self.attractors,
        }
    }

    /// `(df1/dt, df2/dt)`.
    pub fn rhs(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let q = collision_terms(&self.f1, &self.f2, &self.attractors()?);
        Ok((q.q1, q.q2))
    }

    pub fn step_exponential(&self, dt: f64) -> Result<KineticState> {
        self.step_exponential_with(&self.attractors()?, dt)
    }

    /// First-order exponential step against precomputed attractors of `self`.
    pub fn step_exponential_with(&self, att: &Attractors, dt: f64) -> Result<KineticState> {
        check_dt(dt)?;
        let (f1, f2) = exponential_update(&self.f1, &self.f2, &self.f1, &self.f2, att, dt);
        Ok(self.with_values(f1, f2, dt))
    }

    pub fn step_exponential_midpoint(&self, dt: f64) -> Result<KineticState> {
        self.step_exponential_midpoint_with(&self.attractors()?, dt)
    }

    pub fn step_exponential_midpoint_with(&self, att: &Attractors, dt: f64) -> Result<KineticState> {
        check_dt(dt)?;
        let half = self.step_exponential_with(att, 0.5 * dt)?;
        let att_half = half.attractors()?;
        let (f1, f2) = exponential_update(&self.f1, &self.f2, &half.f1, &half.f2, &att_half, dt);
        Ok(self.with_values(f1, f2, dt))
    }

    /// Classical RK4 step; also returns the minimum value if it dipped below
    /// `-POSITIVITY_SLACK`.
    pub fn step_rk4(&self, dt: f64) -> Result<(KineticState, Option<PositivityLoss>)> {
        check_dt(dt)?;
        let bound = RK4_STABILITY / self.max_rate()?;
        if dt > bound {
            return Err(Error::StepTooLarge { dt, bound });
        }
        let stage = |base: &KineticState, k: &(Vec<f64>, Vec<f64>), h: f64| {
            base.with_values(axpy(&base.f1.values, h, &k.0), axpy(&base.f2.values, h, &k.1), 0.0)
        };
        let k1 = self.rhs()?;
        let k2 = stage(self, &k1, 0.5 * dt).rhs()?;
        let k3 = stage(self, &k2, 0.5 * dt).rhs()?;
        let k4 = stage(self, &k3, dt).rhs()?;
        let combine = |f: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
            (0..f.len())
                .map(|i| f[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
                .collect()
        };
        let f1 = combine(&self.f1.values, &k1.0, &k2.0, &k3.0, &k4.0);
        let f2 = combine(&self.f2.values, &k1.1, &k2.1, &k3.1, &k4.1);
        let next = self.with_values(f1, f2, dt);
        let min = next.f1.min().min(next.f2.min());
        let loss = (min < -POSITIVITY_SLACK).then_some(PositivityLoss { time: next.time, min_value: min });
        Ok((next, loss))
    }

    pub fn step(&self, scheme: Scheme, dt: f64) -> Result<(KineticState, Option<PositivityLoss>)> {
        match scheme {
            Scheme::Exponential => Ok((self.step_exponential(dt)?, None)),
            Scheme::ExponentialMidpoint => Ok((self.step_exponential_midpoint(dt)?, None)),
            Scheme::Rk4 => self.step_rk4(dt),
        }
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::NonFinite { name: "dt", value: dt })
    }
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| x + a * y).collect()
}

/// `e^{-L dt} f0 + phi (L - lambda_k) f_mid + phi lambda_k G_k(att)` per
/// species, with `phi = (1 - e^{-L dt}) / L`.
///
/// With `f_mid = f0` this is the frozen-coefficient step
/// `(1 - c_k) f0 + c_k G_k`, `c_k = phi lambda_k`.
pub fn exponential_update(
    f1: &Distribution,
    f2: &Distribution,
    mid1: &Distribution,
    mid2: &Distribution,
    att: &Attractors,
    dt: f64,
) -> (Vec<f64>, Vec<f64>) {
    let r = att.rates;
    let rate = r.max_total();
    if rate <= 0.0 {
        return (f1.values.clone(), f2.values.clone());
    }
    let decay = (-rate * dt).exp();
    let phi = -(-rate * dt).exp_m1() / rate;
    let species = |f: &Distribution, mid: &Distribution, lam: f64, g: Vec<f64>| -> Vec<f64> {
        let keep = phi * (rate - lam);
        let gain = phi * lam;
        let same = std::ptr::eq(f, mid);
        f.values
            .iter()
            .zip(&mid.values)
            .zip(&g)
            .map(|((&a, &m), &gv)| {
                if same {
                    (decay + keep) * a + gain * gv
                } else {
                    decay * a + keep * m + gain * gv
                }
            })
            .collect()
    };
    (
        species(f1, mid1, r.total1(), att.target1(mid1)),
        species(f2, mid2, r.total2(), att.target2(mid2)),
    )
}

/// Common velocity and temperature reached by a closed mixture, from
/// conservation of number, momentum and energy.
pub fn equilibrium_moments(initial: &MomentPair, params: &MixtureParams) -> (Vec3, f64) {
    let (s1, s2) = (&initial.s1, &initial.s2);
    let (rho1, rho2) = (params.m1 * s1.n, params.m2 * s2.n);
    let u = (rho1 * s1.u + rho2 * s2.u) / (rho1 + rho2);
    let energy = s1.energy(params.m1) + s2.energy(params.m2);
    let t = (energy - 0.5 * (rho1 + rho2) * u.norm2()) / (1.5 * (s1.n + s2.n));
    assert!(t > 0.0, "equilibrium temperature {t} is not positive");
    (u, t)
}

/// Common-equilibrium Maxwellians `(M1*, M2*)` predicted from `initial`.
pub fn equilibrium_maxwellians(
    initial: &MomentPair,
    params: &MixtureParams,
    grid: &VelocityGrid,
) -> Result<(Distribution, Distribution)> {
    let (u, t) = equilibrium_moments(initial, params);
    Ok((
        maxwellian_discrete(&SpeciesMoments { n: initial.s1.n, u, t }, params.m1, grid)?,
        maxwellian_discrete(&SpeciesMoments { n: initial.s2.n, u, t }, params.m2, grid)?,
    ))
}

/// One recorded row of a relaxation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub s1: SpeciesMoments,
    pub s2: SpeciesMoments,
    pub momentum: Vec3,
    pub energy: f64,
    pub h: f64,
    pub production: f64,
    pub dist1: f64,
    pub dist2: f64,
}

/// What `run` records and when it stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monitors {
    pub scheme: Scheme,
    /// Record every `every`-th step (the first and last are always kept).
    pub every: usize,
    pub stop_at_equilibrium: bool,
}

impl Default for Monitors {
    fn default() -> Self {
        Monitors { scheme: Scheme::Exponential, every: 1, stop_at_equilibrium: false }
    }
}

#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub rows: Vec<SeriesRow>,
    pub final_state: KineticState,
    pub steps_taken: usize,
    /// Time at which `|S|` first stayed below the equilibrium threshold for
    /// the required number of consecutive steps.
    pub equilibrium_time: Option<f64>,
    pub positivity_losses: Vec<PositivityLoss>,
}

pub const SERIES_HEADER: &str =
    "t,n1,u1x,u1y,u1z,T1,n2,u2x,u2y,u2z,T2,P_total_x,P_total_y,P_total_z,E_total,H,S_prod,dist1,dist2";

impl TimeSeries {
    pub fn write_csv(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "{SERIES_HEADER}")?;
        for r in &self.rows {
            let cols = [
                r.t, r.s1.n, r.s1.u[0], r.s1.u[1], r.s1.u[2], r.s1.t, r.s2.n, r.s2.u[0], r.s2.u[1], r.s2.u[2], r.s2.t,
                r.momentum[0], r.momentum[1], r.momentum[2], r.energy, r.h, r.production, r.dist1, r.dist2,
            ];
            let line: Vec<String> = cols.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// Largest relative drift of a column from its first value.
    pub fn max_relative_drift(&self, column: impl Fn(&SeriesRow) -> f64) -> f64 {
        let Some(first) = self.rows.first() else { return 0.0 };
        let base = column(first);
        let scale = base.abs().max(f64::MIN_POSITIVE);
        self.rows.iter().map(|r| (column(r) - base).abs() / scale).fold(0.0, f64::max)
    }

    /// Largest single-step increase of H.
    pub fn max_h_increase(&self) -> f64 {
        self.rows.windows(2).map(|w| w[1].h - w[0].h).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_production(&self) -> f64 {
        self.rows.iter().map(|r| r.production).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn record(state: &KineticState, att: &Attractors, eq: &(Distribution, Distribution)) -> SeriesRow {
    let s = entropy_production_with(&state.f1, &state.f2, &state.grid, att);
    SeriesRow {
        t: state.time,
        s1: att.moments.s1,
        s2: att.moments.s2,
        momentum: state.total_momentum(),
        energy: state.total_energy(),
        h: state.h(),
        production: s.total,
        dist1: state.f1.l1_distance(&eq.0, &state.grid),
        dist2: state.f2.l1_distance(&eq.1, &state.grid),
    }
}

/// Advances `state` by up to `steps` steps of size `dt`.
pub fn run(state: KineticState, dt: f64, steps: usize, monitors: Monitors) -> Result<TimeSeries> {
    let initial = state.moments()?;
    let eq = equilibrium_maxwellians(&initial, &state.params, &state.grid)?;
    let every = monitors.every.max(1);
    let mut rows = Vec::new();
    let mut losses = Vec::new();
    let mut streak = 0;
    let mut equilibrium_time = None;
    let mut state = state;
    let mut taken = 0;
    loop {
        let att = state.attractors()?;
        let row = record(&state, &att, &eq);
        let last = taken == steps;
        if taken % every == 0 || last {
            rows.push(row);
        }
        if row.production.abs() < EQUILIBRIUM_PRODUCTION {
            streak += 1;
            if streak >= EQUILIBRIUM_STREAK && equilibrium_time.is_none() {
                equilibrium_time = Some(state.time);
            }
        } else {
            streak = 0;
        }
        if last || (monitors.stop_at_equilibrium && equilibrium_time.is_some()) {
            if rows.last().map(|r| r.t) != Some(row.t) {
                rows.push(row);
            }
            break;
        }
        state = match monitors.scheme {
            Scheme::Exponential => state.step_exponential_with(&att, dt)?,
            Scheme::ExponentialMidpoint => state.step_exponential_midpoint_with(&att, dt)?,
            Scheme::Rk4 => {
                let (next, loss) = state.step_rk4(dt)?;
                losses.extend(loss);
                next
            }
        };
        taken += 1;
    }
    Ok(TimeSeries { rows, final_state: state, steps_taken: taken, equilibrium_time, positivity_losses: losses })
}
