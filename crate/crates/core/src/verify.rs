//! Seeded property suites behind `bgkmix verify`.
//!
//! Each suite measures one extremal value per property and compares it with a
//! fixed tolerance. Reports contain no timings, so identical seeds give
//! byte-identical output.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bgk::{Attractors, InterspeciesMoments};
use crate::error::Result;
use crate::params::{aap_energy_flux, aap_momentum_flux, aap_parameter_map, preset, MixtureParams, MomentPair, PresetAux, SpeciesMoments};
use crate::relax::{run, KineticState, Monitors, Scheme};
use crate::transport::Boundary;
use crate::twofluid::{
    exchange_fluxes, flux_consistency_with, induction_identity_check, mhd_step, observed_orders, refinement_study,
    AdvectedLayer, DimensionlessConstants, LimitResidual, LimitSystem, MhdState, Primitive, TrigField,
};
use crate::vector::Vec3;
use crate::velocity::{entropy_production_with, MaxwellianKind, VelocityGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Conservation,
    HTheorem,
    Positivity,
    Lemma21,
    Fluxes,
    AapEquivalence,
    MhdLimits,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::Conservation,
        Suite::HTheorem,
        Suite::Positivity,
        Suite::Lemma21,
        Suite::Fluxes,
        Suite::AapEquivalence,
        Suite::MhdLimits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Conservation => "conservation",
            Suite::HTheorem => "htheorem",
            Suite::Positivity => "positivity",
            Suite::Lemma21 => "lemma21",
            Suite::Fluxes => "fluxes",
            Suite::AapEquivalence => "aap-equivalence",
            Suite::MhdLimits => "mhd-limits",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Deliberate model defects, used to check that the suites catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Negates the `|u1 - u2|^2` coefficient of `T21`.
    FlipT21VelocityTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub property: &'static str,
    pub measured: f64,
    pub bound: Bound,
    pub tolerance: f64,
    /// Offending input, when there is one worth showing.
    pub example: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.tolerance,
            Bound::AtLeast => self.measured >= self.tolerance,
        }
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        write!(
            f,
            "{} {}/{}: measured {:.6e} {op} {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.property,
            self.measured,
            self.tolerance
        )?;
        if let Some(e) = &self.example {
            write!(f, " [{e}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub results: Vec<PropertyResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify suite={} seed={}", self.suite.name(), self.seed)?;
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} properties, {} failed", self.results.len(), failed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub mutation: Option<Mutation>,
}

pub fn verify(suite: Suite, seed: u64) -> Result<Report> {
    verify_with(suite, VerifyOptions { seed, mutation: None })
}

/// Runs `suite`. Every individual suite draws from its own stream, so a
/// suite's results do not depend on which others run with it.
pub fn verify_with(suite: Suite, opts: VerifyOptions) -> Result<Report> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::INDIVIDUAL.to_vec() } else { vec![suite] };
    let mut results = Vec::new();
    for (stream, s) in Suite::INDIVIDUAL.iter().enumerate() {
        if !suites.contains(s) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(stream as u64);
        let mut out = Vec::new();
        match s {
            Suite::Conservation => conservation(&mut rng, &mut out)?,
            Suite::HTheorem => htheorem(&mut rng, opts.mutation, &mut out)?,
            Suite::Positivity => positivity(&mut rng, &mut out)?,
            Suite::Lemma21 => lemma21(&mut rng, &mut out),
            Suite::Fluxes => fluxes(&mut rng, &mut out)?,
            Suite::AapEquivalence => aap_equivalence(&mut rng, &mut out),
            Suite::MhdLimits => mhd_limits(&mut rng, &mut out)?,
            Suite::All => unreachable!(),
        }
        results.extend(out.into_iter().map(|(property, measured, bound, tolerance, example)| PropertyResult {
            suite: s.name(),
            property,
            measured,
            bound,
            tolerance,
            example,
        }));
    }
    Ok(Report { suite, seed: opts.seed, results })
}

type Row = (&'static str, f64, Bound, f64, Option<String>);

fn at_most(property: &'static str, measured: f64, tolerance: f64) -> Row {
    (property, measured, Bound::AtMost, tolerance, None)
}

/// Admissible parameters with masses in `[0.1, 10]`, strictly inside the
/// H-theorem range.
pub fn random_params(rng: &mut ChaCha8Rng) -> MixtureParams {
    random_params_with_masses(rng, 0.1, 10.0)
}

/// Admissible parameters with masses in `[lo, hi]`. Kinetic checks use a
/// narrow mass range so one velocity grid resolves both species.
pub fn random_params_with_masses(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> MixtureParams {
    let m1 = rng.gen_range(lo..hi);
    let m2 = rng.gen_range(lo..hi);
    let epsilon = rng.gen_range(0.01..=1.0);
    let mut p = MixtureParams {
        m1,
        m2,
        nu11: rng.gen_range(0.0..2.0),
        nu21: rng.gen_range(0.1..2.0),
        nu22: rng.gen_range(0.0..2.0),
        epsilon,
        ..MixtureParams::default()
    };
    let lo = p.delta_lower_bound().max(0.0);
    p.delta = lo + rng.gen_range(0.0..1.0) * (1.0 - 1e-6 - lo);
    p.alpha = rng.gen_range(0.0..1.0 - 1e-6);
    p.gamma = rng.gen_range(0.0..=1.0) * p.gamma_upper_bound();
    p
}

pub fn random_species(rng: &mut ChaCha8Rng, speed: f64, t_min: f64) -> SpeciesMoments {
    SpeciesMoments::new(
        rng.gen_range(0.1..3.0),
        [rng.gen_range(-speed..speed), rng.gen_range(-speed..speed), rng.gen_range(-speed..speed)],
        rng.gen_range(t_min..3.0),
    )
}

pub fn random_pair(rng: &mut ChaCha8Rng, speed: f64, t_min: f64) -> MomentPair {
    MomentPair::new(random_species(rng, speed, t_min), random_species(rng, speed, t_min))
}

/// Parameters and moments mild enough for a 20-node grid to resolve every
/// Maxwellian involved.
fn kinetic_sample(rng: &mut ChaCha8Rng) -> (MixtureParams, MomentPair) {
    let params = random_params_with_masses(rng, 0.7, 1.5);
    let mut species = || {
        SpeciesMoments::new(
            rng.gen_range(0.3..2.0),
            [rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)],
            rng.gen_range(0.6..1.8),
        )
    };
    let pair = MomentPair::new(species(), species());
    (params, pair)
}

fn describe(p: &MixtureParams, pair: &MomentPair) -> String {
    format!(
        "m1={:.4} m2={:.4} eps={:.4} delta={:.4} alpha={:.4} gamma={:.4e} n=({:.3},{:.3}) u1=({:.3},{:.3},{:.3}) u2=({:.3},{:.3},{:.3}) T=({:.3},{:.3})",
        p.m1, p.m2, p.epsilon, p.delta, p.alpha, p.gamma, pair.s1.n, pair.s2.n,
        pair.s1.u.x(), pair.s1.u.y(), pair.s1.u.z(), pair.s2.u.x(), pair.s2.u.y(), pair.s2.u.z(),
        pair.s1.t, pair.s2.t
    )
}

/// Grid resolving both species and both interspecies Maxwellians.
fn grid_for(pair: &MomentPair, params: &MixtureParams, nodes: usize) -> Result<VelocityGrid> {
    let inter = InterspeciesMoments::new(pair, params);
    VelocityGrid::build(
        &[(pair.s1, params.m1), (pair.s2, params.m2), (inter.m12, params.m1), (inter.m21, params.m2)],
        6.0,
        [nodes; 3],
    )
}

/// Short relaxation runs from random disparate states.
fn kinetic_runs(rng: &mut ChaCha8Rng) -> Result<Vec<crate::relax::TimeSeries>> {
    let mut out = Vec::new();
    for k in 0..2 {
        let params = if k == 0 {
            let m1 = rng.gen_range(1.0..4.0);
            preset("hamel", m1, 1.0, PresetAux::default())?
        } else {
            random_params_with_masses(rng, 0.5, 2.0)
        };
        let pair = MomentPair::new(
            SpeciesMoments::new(rng.gen_range(0.5..1.5), [rng.gen_range(-0.4..0.4), 0.0, 0.0], rng.gen_range(0.7..1.4)),
            SpeciesMoments::new(rng.gen_range(0.5..1.5), [rng.gen_range(-0.4..0.4), 0.1, 0.0], rng.gen_range(0.7..1.4)),
        );
        let (u, t) = crate::relax::equilibrium_moments(&pair, &params);
        let light = params.m1.min(params.m2);
        let grid = VelocityGrid::build(
            &[(pair.s1, params.m1), (pair.s2, params.m2), (SpeciesMoments::new(1.0, u, t), light)],
            6.0,
            [16; 3],
        )?;
        let state = KineticState::from_moments(&pair, grid, params)?;
        let dt = state.default_dt()?;
        out.push(run(state, dt, 150, Monitors { scheme: Scheme::Exponential, every: 1, stop_at_equilibrium: false })?);
    }
    Ok(out)
}

fn conservation(rng: &mut ChaCha8Rng, out: &mut Vec<Row>) -> Result<()> {
    let (mut mass, mut momentum, mut energy) = (0.0f64, 0.0f64, 0.0f64);
    for series in kinetic_runs(rng)? {
        mass = mass.max(series.max_relative_drift(|r| r.s1.n)).max(series.max_relative_drift(|r| r.s2.n));
        let first = &series.rows[0];
        let p = &series.final_state.params;
        // Momentum is compared against the thermal momentum scale since the
        // total may vanish.
        let scale = (2.0 * first.energy * (p.m1 * first.s1.n + p.m2 * first.s2.n)).sqrt();
        for r in &series.rows {
            momentum = momentum.max((r.momentum - first.momentum).max_abs() / scale);
        }
        energy = energy.max(series.max_relative_drift(|r| r.energy));
    }
    out.push(at_most("mass-drift", mass, 1e-13));
    out.push(at_most("momentum-drift", momentum, 1e-11));
    out.push(at_most("energy-drift", energy, 1e-11));
    Ok(())
}

fn htheorem(rng: &mut ChaCha8Rng, mutation: Option<Mutation>, out: &mut Vec<Row>) -> Result<()> {
    let (mut h_increase, mut production) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    if mutation.is_none() {
        for series in kinetic_runs(rng)? {
            h_increase = h_increase.max(series.max_h_increase());
            production = production.max(series.max_production());
        }
        out.push(at_most("h-increase-per-step", h_increase, 1e-12));
        out.push(at_most("run-entropy-production", production, 1e-12));
    }

    let mut worst = (f64::NEG_INFINITY, None);
    for _ in 0..150 {
        let (params, pair) = kinetic_sample(rng);
        let mut inter = InterspeciesMoments::new(&pair, &params);
        if mutation == Some(Mutation::FlipT21VelocityTerm) {
            inter.m21.t -= 2.0 * params.t21_velocity_coefficient() * (pair.s1.u - pair.s2.u).norm2();
            // Keep the mutated attractor resolvable on the grid.
            if !(inter.m21.t > 0.25) {
                continue;
            }
        }
        let grid = VelocityGrid::build(
            &[(pair.s1, params.m1), (pair.s2, params.m2), (inter.m12, params.m1), (inter.m21, params.m2)],
            6.0,
            [20; 3],
        )?;
        let f1 = MaxwellianKind::Discrete.build(&pair.s1, params.m1, &grid)?;
        let f2 = MaxwellianKind::Discrete.build(&pair.s2, params.m2, &grid)?;
        let att = Attractors::with_interspecies(pair, inter, &grid, &params, MaxwellianKind::Discrete)?;
        let s = entropy_production_with(&f1, &f2, &grid, &att).total;
        if s > worst.0 {
            worst = (s, Some(describe(&params, &pair)));
        }
    }
    let example = if worst.0 > 1e-12 { worst.1 } else { None };
    out.push(("state-entropy-production", worst.0, Bound::AtMost, 1e-12, example));
    Ok(())
}

fn positivity(rng: &mut ChaCha8Rng, out: &mut Vec<Row>) -> Result<()> {
    let mut counterexamples = 0usize;
    let mut min_t = f64::INFINITY;
    for k in 0..10_000 {
        let params = random_params(rng);
        // Every tenth state has a vanishing temperature.
        let t_min = if k % 10 == 0 { 0.0 } else { 0.01 };
        let mut pair = random_pair(rng, 2.0, t_min);
        if k % 10 == 0 {
            pair.s1.t = 0.0;
        }
        let t = params.t12(&pair.s1, &pair.s2).min(params.t21(&pair.s1, &pair.s2));
        min_t = min_t.min(t);
        if t < 0.0 {
            counterexamples += 1;
        }
    }
    out.push(at_most("negative-interspecies-temperatures", counterexamples as f64, 0.0));
    out.push(("min-interspecies-temperature", min_t, Bound::AtLeast, 0.0, None));

    let mut negative = 0usize;
    for _ in 0..4 {
        let (params, pair) = kinetic_sample(rng);
        let state = KineticState::from_moments(&pair, grid_for(&pair, &params, 20)?, params)?;
        let rate = state.max_rate()?;
        for factor in [0.1, 1.0, 10.0] {
            let next = state.step_exponential(factor / rate)?;
            negative += next.f1.values.iter().chain(&next.f2.values).filter(|&&v| !(v >= 0.0)).count();
        }
    }
    out.push(at_most("negative-values-after-exponential-step", negative as f64, 0.0));
    Ok(())
}

/// `eps ln T12 + ln T21 - eps ln T1 - ln T2`.
pub fn lemma21_gap(params: &MixtureParams, pair: &MomentPair) -> f64 {
    let eps = params.epsilon;
    let (t12, t21) = (params.t12(&pair.s1, &pair.s2), params.t21(&pair.s1, &pair.s2));
    eps * t12.ln() + t21.ln() - eps * pair.s1.t.ln() - pair.s2.t.ln()
}

fn lemma21(rng: &mut ChaCha8Rng, out: &mut Vec<Row>) {
    let mut violations = 0usize;
    let mut worst = (f64::INFINITY, None);
    for _ in 0..10_000 {
        let params = random_params(rng);
        let pair = random_pair(rng, 2.0, 0.01);
        let gap = lemma21_gap(&params, &pair);
        if gap < -1e-12 {
            violations += 1;
        }
        if gap < worst.0 {
            worst = (gap, Some(describe(&params, &pair)));
        }
    }
    out.push(at_most("violations", violations as f64, 0.0));
    let example = if worst.0 < -1e-12 { worst.1 } else { None };
    out.push(("min-gap", worst.0, Bound::AtLeast, -1e-12, example));
}

fn fluxes(rng: &mut ChaCha8Rng, out: &mut Vec<Row>) -> Result<()> {
    let (mut mom, mut en) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let params = random_params(rng);
        let pair = random_pair(rng, 2.0, 0.01);
        let f = exchange_fluxes(&pair.s1, &pair.s2, &params);
        mom = mom.max(f.momentum_imbalance());
        en = en.max(f.energy_imbalance());
    }
    out.push(at_most("momentum-cancellation", mom, 1e-13));
    out.push(at_most("energy-cancellation", en, 1e-13));

    let mut deviation = 0.0f64;
    for _ in 0..3 {
        let (params, pair) = kinetic_sample(rng);
        let state = KineticState::from_moments(&pair, grid_for(&pair, &params, 20)?, params)?;
        let att = state.attractors()?;
        deviation = deviation.max(flux_consistency_with(&state, &att).max_relative_deviation);
    }
    out.push(at_most("quadrature-vs-closed-form", deviation, 1e-11));
    Ok(())
}

fn aap_equivalence(rng: &mut ChaCha8Rng, out: &mut Vec<Row>) {
    let (mut mom, mut en) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let m1 = rng.gen_range(0.1..10.0);
        let m2 = rng.gen_range(0.1..10.0);
        let x = rng.gen_range(0.0..1.0);
        let nu21 = rng.gen_range(0.1..2.0);
        let map = aap_parameter_map(x, m1, m2, 1.0, 1.0);
        let params = MixtureParams {
            m1,
            m2,
            nu21,
            epsilon: 1.0,
            delta: map.delta,
            alpha: map.alpha,
            gamma: map.gamma,
            ..MixtureParams::default()
        };
        let mut pair = random_pair(rng, 2.0, 0.01);
        pair.s1.n = 1.0;
        pair.s2.n = 1.0;
        let chi12 = x * params.nu12();
        let f = exchange_fluxes(&pair.s1, &pair.s2, &params);
        let m_ref = aap_momentum_flux(m1, m2, chi12, &pair.s1, &pair.s2);
        let e_ref = aap_energy_flux(m1, m2, chi12, &pair.s1, &pair.s2);
        mom = mom.max((f.momentum1 - m_ref).max_abs() / m_ref.max_abs().max(f64::MIN_POSITIVE));
        en = en.max((f.energy1 - e_ref).abs() / e_ref.abs().max(f64::MIN_POSITIVE));
    }
    out.push(at_most("momentum-flux", mom, 1e-12));
    out.push(at_most("energy-flux", en, 1e-12));

    let mut invalid = 0usize;
    for _ in 0..50 {
        let (m1, m2) = (rng.gen_range(0.01..100.0), rng.gen_range(0.01..100.0));
        let ok = preset("hamel", m1, m2, PresetAux::default()).and_then(|p| p.validate()).map(|r| r.is_valid());
        if !matches!(ok, Ok(true)) {
            invalid += 1;
        }
    }
    out.push(at_most("hamel-invalid-mass-pairs", invalid as f64, 0.0));
}

fn min_order(orders: &[f64]) -> f64 {
    orders.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Smallest observed order of the two identities over `{32, 64, 128, 256}`.
pub fn induction_orders(rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    let u = TrigField::random(rng, 4, 3, false);
    let b = TrigField::random(rng, 4, 3, true);
    let checks = [32, 64, 128, 256].map(|n| induction_identity_check(&u, &b, n));
    let checks: Vec<_> = checks.into_iter().collect::<Result<_>>()?;
    let ind: Vec<f64> = checks.iter().map(|c| c.induction).collect();
    let lor: Vec<f64> = checks.iter().map(|c| c.lorentz).collect();
    Ok((min_order(&observed_orders(&ind)), min_order(&observed_orders(&lor))))
}

/// Smallest observed order of the ideal-MHD residual over `32..256` cells.
pub fn thm43_order() -> Result<f64> {
    let unit = DimensionlessConstants { c1: 1.0, c2: 1.0, c3: 0.0, c4: 0.0, c5: 1.0, m: 0.0 };
    let study = refinement_study(
        LimitSystem::Thm43,
        &AdvectedLayer::default(),
        std::f64::consts::TAU,
        0.3,
        32,
        4,
        &unit,
        1.0,
    )?;
    let errors: Vec<f64> = study.iter().map(LimitResidual::max_norm).collect();
    Ok(min_order(&observed_orders(&errors)))
}

/// Largest change of any conserved sum over a periodic run, relative to the
/// largest sum of absolute cell values that component reaches.
pub fn mhd_sum_drift(state: &MhdState, steps: usize) -> Result<f64> {
    let components = |s: &MhdState| -> Vec<[f64; 7]> {
        s.cells.iter().map(|c| [c.n, c.m.x(), c.m.y(), c.m.z(), c.energy, c.b.y(), c.b.z()]).collect()
    };
    let abs_sums = |rows: &[[f64; 7]]| -> [f64; 7] {
        std::array::from_fn(|k| rows.iter().map(|r| r[k].abs()).sum())
    };
    let before = state.totals();
    let mut scale = abs_sums(&components(state));
    let mut s = state.clone();
    let mut worst = [0.0f64; 7];
    for _ in 0..steps {
        let dt = s.stable_dt(0.4);
        s = mhd_step(&s, dt)?;
        let now = s.totals();
        let sums = abs_sums(&components(&s));
        for k in 0..7 {
            scale[k] = scale[k].max(sums[k]);
            worst[k] = worst[k].max((now.0[k] - before.0[k]).abs());
        }
    }
    Ok((0..7).map(|k| if worst[k] == 0.0 { 0.0 } else { worst[k] / scale[k] }).fold(0.0, f64::max))
}

fn mhd_limits(rng: &mut ChaCha8Rng, out: &mut Vec<Row>) -> Result<()> {
    let (ind, lor) = induction_orders(rng)?;
    out.push(("induction-identity-order", ind, Bound::AtLeast, 1.8, None));
    out.push(("lorentz-identity-order", lor, Bound::AtLeast, 1.8, None));
    out.push(("thm43-residual-order", thm43_order()?, Bound::AtLeast, 3.7, None));

    let left = Primitive { n: 1.0, u: Vec3::ZERO, p: 1.0, b: Vec3::new(0.0, 1.0, 0.0) };
    let right = Primitive {
        n: rng.gen_range(0.1..0.5),
        u: Vec3::new(rng.gen_range(-0.5..0.5), 0.0, 0.0),
        p: rng.gen_range(0.1..0.5),
        b: Vec3::new(0.0, -1.0, rng.gen_range(-0.5..0.5)),
    };
    let state = MhdState::riemann(128, 1.0, 0.75, Boundary::Periodic, left, right)?;
    out.push(at_most("mhd-periodic-sum-drift", mhd_sum_drift(&state, 200)?, 1e-12));

    let p = Primitive { n: rng.gen_range(0.5..2.0), u: Vec3::new(0.3, -0.2, 0.1), p: 0.8, b: Vec3::new(0.75, 0.4, -0.3) };
    let c0 = MhdState::from_profile(64, 1.0, 0.75, Boundary::Periodic, |_| p)?;
    let mut c = c0.clone();
    let dt = c.stable_dt(0.4);
    for _ in 0..1000 {
        c = mhd_step(&c, dt)?;
    }
    let change = c
        .cells
        .iter()
        .zip(&c0.cells)
        .map(|(a, b)| (a.n - b.n).abs().max((a.m - b.m).max_abs()).max((a.energy - b.energy).abs()).max((a.b - b.b).max_abs()))
        .fold(0.0, f64::max);
    out.push(at_most("mhd-constant-state-change", change, 0.0));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::INDIVIDUAL.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn random_params_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let p = random_params(&mut rng);
            assert!(p.validate().unwrap().is_valid(), "{p:?}");
        }
    }

    #[test]
    fn lemma21_gap_vanishes_at_common_state() {
        let p = preset("hamel", 2.0, 1.0, PresetAux::default()).unwrap();
        let s = SpeciesMoments::new(1.0, [0.1, 0.0, 0.0], 1.3);
        assert!(lemma21_gap(&p, &MomentPair::new(s, s)).abs() < 1e-15);
    }

    #[test]
    fn cheap_suites_pass_and_are_deterministic() {
        for suite in [Suite::Lemma21, Suite::AapEquivalence, Suite::Positivity] {
            let a = verify(suite, 11).unwrap();
            let b = verify(suite, 11).unwrap();
            assert!(a.passed(), "{a}");
            assert_eq!(a.to_string(), b.to_string());
        }
    }

    #[test]
    fn flipped_t21_is_caught_by_htheorem_suite() {
        let opts = VerifyOptions { seed: 42, mutation: Some(Mutation::FlipT21VelocityTerm) };
        let r = verify_with(Suite::HTheorem, opts).unwrap();
        let failure = r.failures().next().expect("mutation must be detected");
        assert_eq!(failure.property, "state-entropy-production");
        assert!(failure.measured > 0.0 && failure.example.is_some(), "{r}");
    }

    #[test]
    fn report_lists_every_property() {
        let r = verify(Suite::Lemma21, 1).unwrap();
        let text = r.to_string();
        assert!(text.starts_with("verify suite=lemma21 seed=1\n"));
        assert!(text.contains("PASS lemma21/violations"));
        assert!(text.ends_with("2 properties, 0 failed\n"));
    }
}
