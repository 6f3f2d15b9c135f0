//! Mixture parameters, their admissibility constraints, named presets, and the
//! closed-form interspecies velocities and temperatures.
//!
//! Species 1 is the heavier (or less collisional) one: the interspecies
//! frequencies are tied by `nu12 = epsilon * nu21` with `0 < epsilon <= 1`.
//! Everything here is nondimensional and temperatures are in energy units, so
//! the pressure of a species is simply `n * T`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::vector::Vec3;

/// Distance from 1 that `alpha` and `delta` must keep when the strict entropy
/// dissipation hypothesis is enforced.
pub const H_THEOREM_MARGIN: f64 = 1e-12;

/// Number density, bulk velocity and temperature of one species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesMoments {
    pub n: f64,
    pub u: Vec3,
    pub t: f64,
}

impl SpeciesMoments {
    pub fn new(n: f64, u: impl Into<Vec3>, t: f64) -> Self {
        SpeciesMoments { n, u: u.into(), t }
    }

    pub fn pressure(&self) -> f64 {
        self.n * self.t
    }

    /// Kinetic plus thermal energy density of a species of mass `m`.
    pub fn energy(&self, m: f64) -> f64 {
        0.5 * m * self.n * self.u.norm2() + 1.5 * self.n * self.t
    }
}

/// Moments of both species, the state every macroscopic formula works on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub s1: SpeciesMoments,
    pub s2: SpeciesMoments,
}

impl MomentPair {
    pub fn new(s1: SpeciesMoments, s2: SpeciesMoments) -> Self {
        MomentPair { s1, s2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    pub m1: f64,
    pub m2: f64,
    pub nu11: f64,
    pub nu21: f64,
    pub nu22: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Require `alpha, delta < 1` so that entropy dissipation is strict.
    pub strict_h_theorem: bool,
}

impl Default for MixtureParams {
    fn default() -> Self {
        MixtureParams {
            m1: 1.0,
            m2: 1.0,
            nu11: 1.0,
            nu21: 1.0,
            nu22: 1.0,
            epsilon: 1.0,
            delta: 0.5,
            alpha: 0.5,
            gamma: 0.0,
            strict_h_theorem: true,
        }
    }
}

/// Identifies one admissibility inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    PositiveMass,
    NonNegativeFrequency,
    EpsilonPositive,
    EpsilonAtMostOne,
    AlphaRange,
    GammaNonNegative,
    DeltaLowerBound,
    DeltaAtMostOne,
    GammaUpperBound,
    StrictAlpha,
    StrictDelta,
}

impl Constraint {
    pub fn id(self) -> &'static str {
        match self {
            Constraint::PositiveMass => "positive-mass",
            Constraint::NonNegativeFrequency => "nonnegative-frequency",
            Constraint::EpsilonPositive => "epsilon-positive",
            Constraint::EpsilonAtMostOne => "epsilon-at-most-one",
            Constraint::AlphaRange => "alpha-range",
            Constraint::GammaNonNegative => "gamma-nonnegative",
            Constraint::DeltaLowerBound => "delta-lower-bound",
            Constraint::DeltaAtMostOne => "delta-at-most-one",
            Constraint::GammaUpperBound => "gamma-temperature-positivity-bound",
            Constraint::StrictAlpha => "strict-alpha",
            Constraint::StrictDelta => "strict-delta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    /// What was violated, e.g. `m1`.
    pub subject: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub note: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} = {} violates bound {}",
            self.constraint.id(),
            self.subject,
            self.measured,
            self.bound
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, c: Constraint) -> bool {
        self.violations.iter().any(|v| v.constraint == c)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {v}")?;
        }
        Ok(())
    }
}

impl MixtureParams {
    pub fn nu12(&self) -> f64 {
        self.epsilon * self.nu21
    }

    /// `(m1/m2) * epsilon`, the factor that maps `u12` structure onto `u21`.
    pub fn scaled_epsilon(&self) -> f64 {
        self.m1 / self.m2 * self.epsilon
    }

    /// Weight of `u2` when `u21` is written as a combination of `u2` and `u1`.
    pub fn delta_tilde(&self) -> f64 {
        1.0 - self.scaled_epsilon() * (1.0 - self.delta)
    }

    /// Smallest `delta` for which the `gamma` bound is nonnegative.
    pub fn delta_lower_bound(&self) -> f64 {
        let r = self.scaled_epsilon();
        (r - 1.0) / (1.0 + r)
    }

    /// Largest `gamma` keeping the interspecies temperature `T21` positive.
    /// Negative when `delta` lies outside its admissible range.
    pub fn gamma_upper_bound(&self) -> f64 {
        let r = self.scaled_epsilon();
        self.m1 / 3.0 * (1.0 - self.delta) * ((1.0 + r) * self.delta + 1.0 - r)
    }

    /// Coefficient of `|u1 - u2|^2` in `T21`.
    pub fn t21_velocity_coefficient(&self) -> f64 {
        let eps = self.epsilon;
        let r = self.scaled_epsilon();
        let d = self.delta;
        eps * self.m1 * (1.0 - d) * (r * (d - 1.0) + d + 1.0) / 3.0 - eps * self.gamma
    }

    fn fields(&self) -> [(&'static str, f64); 9] {
        [
            ("m1", self.m1),
            ("m2", self.m2),
            ("nu11", self.nu11),
            ("nu21", self.nu21),
            ("nu22", self.nu22),
            ("epsilon", self.epsilon),
            ("delta", self.delta),
            ("alpha", self.alpha),
            ("gamma", self.gamma),
        ]
    }

    /// Evaluates every admissibility inequality. Non-finite fields are a hard
    /// error rather than a violation.
    pub fn validate(&self) -> Result<ValidationReport> {
        for (name, value) in self.fields() {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        let mut report = ValidationReport::default();
        let mut push = |constraint, subject, measured, bound, note| {
            report.violations.push(Violation {
                constraint,
                subject,
                measured,
                bound,
                note,
            })
        };

        for (name, m) in [("m1", self.m1), ("m2", self.m2)] {
            if m <= 0.0 {
                push(Constraint::PositiveMass, name, m, 0.0, "masses must be positive");
            }
        }
        for (name, nu) in [("nu11", self.nu11), ("nu21", self.nu21), ("nu22", self.nu22)] {
            if nu < 0.0 {
                push(Constraint::NonNegativeFrequency, name, nu, 0.0, "");
            }
        }
        if self.epsilon <= 0.0 {
            push(Constraint::EpsilonPositive, "epsilon", self.epsilon, 0.0, "");
        }
        if self.epsilon > 1.0 {
            push(
                Constraint::EpsilonAtMostOne,
                "epsilon",
                self.epsilon,
                1.0,
                "exchange the labels of species 1 and 2 and use 1/epsilon",
            );
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            let bound = if self.alpha < 0.0 { 0.0 } else { 1.0 };
            push(Constraint::AlphaRange, "alpha", self.alpha, bound, "");
        }
        if self.gamma < 0.0 {
            push(Constraint::GammaNonNegative, "gamma", self.gamma, 0.0, "");
        }
        // The remaining bounds divide by the masses.
        if self.m1 > 0.0 && self.m2 > 0.0 {
            let lower = self.delta_lower_bound();
            if self.delta < lower {
                push(
                    Constraint::DeltaLowerBound,
                    "delta",
                    self.delta,
                    lower,
                    "gamma bound would be negative",
                );
            }
            if self.delta > 1.0 {
                push(Constraint::DeltaAtMostOne, "delta", self.delta, 1.0, "");
            }
            let gmax = self.gamma_upper_bound();
            if self.gamma > gmax {
                push(
                    Constraint::GammaUpperBound,
                    "gamma",
                    self.gamma,
                    gmax,
                    "interspecies temperature T21 could become negative",
                );
            }
        }
        if self.strict_h_theorem {
            let limit = 1.0 - H_THEOREM_MARGIN;
            if self.alpha > limit && self.alpha <= 1.0 {
                push(
                    Constraint::StrictAlpha,
                    "alpha",
                    self.alpha,
                    limit,
                    "entropy dissipation requires alpha != 1",
                );
            }
            if self.delta > limit && self.delta <= 1.0 {
                push(
                    Constraint::StrictDelta,
                    "delta",
                    self.delta,
                    limit,
                    "entropy dissipation requires delta != 1",
                );
            }
        }
        Ok(report)
    }

    /// Returns `self` if it passes [`validate`](Self::validate).
    pub fn validated(self) -> Result<Self> {
        let report = self.validate()?;
        if report.is_valid() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(report))
        }
    }

    pub fn u12(&self, u1: Vec3, u2: Vec3) -> Vec3 {
        mixture_velocity_u12(u1, u2, self.delta)
    }

    pub fn u21(&self, u1: Vec3, u2: Vec3) -> Vec3 {
        u2 - self.scaled_epsilon() * (1.0 - self.delta) * (u2 - u1)
    }

    pub fn t12(&self, s1: &SpeciesMoments, s2: &SpeciesMoments) -> f64 {
        self.alpha * s1.t + (1.0 - self.alpha) * s2.t + self.gamma * (s1.u - s2.u).norm2()
    }

    pub fn t21(&self, s1: &SpeciesMoments, s2: &SpeciesMoments) -> f64 {
        let mix = self.epsilon * (1.0 - self.alpha);
        self.t21_velocity_coefficient() * (s1.u - s2.u).norm2() + mix * s1.t + (1.0 - mix) * s2.t
    }
}

/// `delta * u1 + (1 - delta) * u2`.
pub fn mixture_velocity_u12(u1: Vec3, u2: Vec3, delta: f64) -> Vec3 {
    delta * u1 + (1.0 - delta) * u2
}

/// Named parameter families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    GrossKrook,
    Hamel,
    Plasma,
    Aap,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::GrossKrook => "gross-krook",
            Preset::Hamel => "hamel",
            Preset::Plasma => "plasma",
            Preset::Aap => "aap",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gross-krook" => Ok(Preset::GrossKrook),
            "hamel" => Ok(Preset::Hamel),
            "plasma" => Ok(Preset::Plasma),
            "aap" => Ok(Preset::Aap),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

/// Free inputs of a preset. Unset entries fall back to 1 for frequencies, to
/// the preset's own choice otherwise.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PresetAux {
    pub nu11: Option<f64>,
    pub nu21: Option<f64>,
    pub nu22: Option<f64>,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    /// `chi12 / nu12` for the single-relaxation-term mapping.
    pub chi_over_nu: Option<f64>,
    /// Densities entering the single-relaxation-term `gamma`.
    pub densities: Option<(f64, f64)>,
}

/// Builds the parameters of a named model family. The result is not
/// validated; call [`MixtureParams::validate`] on it.
pub fn preset(name: &str, m1: f64, m2: f64, aux: PresetAux) -> Result<MixtureParams> {
    let kind: Preset = name.parse()?;
    let mu = m1 / (m1 + m2);
    let base = MixtureParams {
        m1,
        m2,
        nu11: aux.nu11.unwrap_or(1.0),
        nu21: aux.nu21.unwrap_or(1.0),
        nu22: aux.nu22.unwrap_or(1.0),
        ..MixtureParams::default()
    };
    let params = match kind {
        Preset::GrossKrook => MixtureParams {
            epsilon: 1.0,
            delta: mu,
            alpha: aux.alpha.unwrap_or(0.5),
            gamma: aux.gamma.unwrap_or(0.0),
            ..base
        },
        Preset::Hamel => {
            let s2 = (m1 + m2) * (m1 + m2);
            MixtureParams {
                epsilon: 1.0,
                delta: mu,
                alpha: (m1 * m1 + m2 * m2) / s2,
                gamma: m1 * m2 / s2 * m2 / 3.0,
                ..base
            }
        }
        Preset::Plasma => {
            let nu22 = aux.nu22.unwrap_or(1.0);
            MixtureParams {
                nu21: nu22,
                nu22,
                nu11: (m2 / m1).sqrt() * nu22,
                epsilon: m2 / m1,
                delta: 0.0,
                alpha: m2 / (m1 + m2),
                gamma: 0.0,
                ..base
            }
        }
        Preset::Aap => {
            let (n1, n2) = aux.densities.unwrap_or((1.0, 1.0));
            let map = aap_parameter_map(aux.chi_over_nu.unwrap_or(0.5), m1, m2, n1, n2);
            MixtureParams {
                epsilon: aux.epsilon.unwrap_or(1.0),
                delta: map.delta,
                alpha: map.alpha,
                gamma: map.gamma,
                ..base
            }
        }
    };
    Ok(params)
}

/// Parameters reproducing the exchange fluxes of the single-relaxation-term
/// mixture model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AapMapping {
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// `chi/nu > 1`: gamma is negative and the mapping is inadmissible.
    pub negative_gamma: bool,
    /// gamma carries an `n1 * n2` factor, so it only matches the constant
    /// parameter it replaces at the densities it was evaluated for.
    pub density_dependent: bool,
}

pub fn aap_parameter_map(chi_over_nu: f64, m1: f64, m2: f64, n1: f64, n2: f64) -> AapMapping {
    let s = m1 + m2;
    let x = chi_over_nu;
    AapMapping {
        delta: 1.0 - 2.0 * m2 / s * x,
        alpha: 1.0 - 4.0 * m1 * m2 / (s * s) * x,
        gamma: 4.0 / 3.0 * m1 * m2 * m2 / (s * s) * x * n1 * n2 * (1.0 - x),
        negative_gamma: x > 1.0,
        density_dependent: n1 * n2 != 1.0,
    }
}

/// Momentum transferred to species 1 per unit time in the
/// single-relaxation-term model with interaction coefficient `chi12`.
pub fn aap_momentum_flux(m1: f64, m2: f64, chi12: f64, s1: &SpeciesMoments, s2: &SpeciesMoments) -> Vec3 {
    2.0 * m1 * m2 / (m1 + m2) * chi12 * s1.n * s2.n * (s2.u - s1.u)
}

/// Energy transferred to species 1 per unit time in the
/// single-relaxation-term model.
pub fn aap_energy_flux(m1: f64, m2: f64, chi12: f64, s1: &SpeciesMoments, s2: &SpeciesMoments) -> f64 {
    let s = m1 + m2;
    let bracket = -m1 / s * s1.u.norm2() + m2 / s * s2.u.norm2()
        + (m1 - m2) / s * s1.u.dot(s2.u)
        + 2.0 / s * 1.5 * (s2.t - s1.t);
    s1.n * s2.n * 2.0 * m2 * m1 * chi12 / s * bracket
}

/// Deviations from the expected interspecies behaviour at the mass-ratio
/// extremes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDiagnostic {
    /// `m1/(m1+m2) -> 0`: `|delta|, |alpha|, |gamma|`, all expected to vanish.
    pub light: [f64; 3],
    /// Equal masses: `|u12 - u21|` and `|T12 - T21|` on a probe state.
    pub equal: [f64; 2],
    /// `m1/(m1+m2) -> 1`: `|1 - delta|, |1 - alpha|, |gamma|`.
    pub heavy: [f64; 3],
}

impl LimitDiagnostic {
    pub fn max_light(&self) -> f64 {
        self.light.iter().fold(0.0_f64, |a, b| a.max(*b))
    }
    pub fn max_equal(&self) -> f64 {
        self.equal[0].max(self.equal[1])
    }
    pub fn max_heavy(&self) -> f64 {
        self.heavy.iter().fold(0.0_f64, |a, b| a.max(*b))
    }
}

/// Probes a parameter family `params_fn(m1, m2)` at mass fractions
/// `offset`, `1/2` and `1 - offset` (total mass 1).
pub fn limit_behavior(params_fn: impl Fn(f64, f64) -> MixtureParams, offset: f64) -> LimitDiagnostic {
    let light = params_fn(offset, 1.0 - offset);
    let heavy = params_fn(1.0 - offset, offset);
    let equal = params_fn(0.5, 0.5);

    let s1 = SpeciesMoments::new(1.0, [0.3, -0.2, 0.1], 1.3);
    let s2 = SpeciesMoments::new(0.7, [-0.4, 0.5, 0.0], 0.6);
    let du = (equal.u12(s1.u, s2.u) - equal.u21(s1.u, s2.u)).norm();
    let dt = (equal.t12(&s1, &s2) - equal.t21(&s1, &s2)).abs();

    LimitDiagnostic {
        light: [light.delta.abs(), light.alpha.abs(), light.gamma.abs()],
        equal: [du, dt],
        heavy: [
            (1.0 - heavy.delta).abs(),
            (1.0 - heavy.alpha).abs(),
            heavy.gamma.abs(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    fn sample() -> MixtureParams {
        MixtureParams {
            m1: 2.0,
            m2: 1.0,
            epsilon: 0.5,
            delta: 0.5,
            alpha: 0.5,
            gamma: 0.0,
            ..MixtureParams::default()
        }
    }

    #[test]
    fn hamel_is_valid() {
        let p = preset("hamel", 2.0, 1.0, PresetAux::default()).unwrap();
        assert!(p.validate().unwrap().is_valid());
    }

    #[test]
    fn hamel_values() {
        let p = preset("hamel", 2.0, 1.0, PresetAux::default()).unwrap();
        assert!(close(p.delta, 2.0 / 3.0, 1e-15));
        assert!(close(p.alpha, 5.0 / 9.0, 1e-15));
        assert!(close(p.gamma, 2.0 / 27.0, 1e-15));
        assert_eq!(p.epsilon, 1.0);
    }

    #[test]
    fn epsilon_zero_is_rejected() {
        let p = MixtureParams { epsilon: 0.0, ..sample() };
        let r = p.validate().unwrap();
        assert!(r.has(Constraint::EpsilonPositive));
    }

    #[test]
    fn epsilon_above_one_asks_for_relabeling() {
        let p = MixtureParams { epsilon: 2.0, ..sample() };
        let r = p.validate().unwrap();
        assert!(r.has(Constraint::EpsilonAtMostOne));
        assert!(r.to_string().contains("exchange the labels"));
    }

    #[test]
    fn gamma_above_bound_is_rejected() {
        let p = MixtureParams { gamma: 0.4, ..sample() };
        let r = p.validate().unwrap();
        let v = r
            .violations
            .iter()
            .find(|v| v.constraint == Constraint::GammaUpperBound)
            .unwrap();
        assert!(close(v.bound, 1.0 / 3.0, 1e-15));
        assert_eq!(v.measured, 0.4);
    }

    #[test]
    fn non_finite_is_hard_error() {
        let p = MixtureParams { alpha: f64::NAN, ..sample() };
        assert!(matches!(p.validate(), Err(Error::NonFinite { name: "alpha", .. })));
    }

    #[test]
    fn gamma_bound_values() {
        assert!(close(sample().gamma_upper_bound(), 1.0 / 3.0, 1e-15));
        assert_eq!(MixtureParams { delta: 1.0, ..sample() }.gamma_upper_bound(), 0.0);
        // epsilon = m2/m1 makes the bound (2 m1 / 3)(1 - delta) delta: positive
        // inside (0, 1) and zero at delta = 0
        let at_zero = MixtureParams { m1: 3.0, m2: 0.5, epsilon: 0.5 / 3.0, delta: 0.0, ..sample() };
        assert!(at_zero.gamma_upper_bound().abs() < 1e-15);
        for i in 1..100 {
            let d = i as f64 / 100.0;
            let p = MixtureParams { m1: 3.0, m2: 0.5, epsilon: 0.5 / 3.0, delta: d, ..sample() };
            assert!(p.gamma_upper_bound() > 0.0, "delta = {d}");
        }
    }

    #[test]
    fn strict_mode_excludes_unit_alpha_and_delta() {
        let p = MixtureParams { m1: 1.0, m2: 1.0, epsilon: 1.0, alpha: 1.0, delta: 1.0, ..sample() };
        let r = p.validate().unwrap();
        assert!(r.has(Constraint::StrictAlpha) && r.has(Constraint::StrictDelta));
        let relaxed = MixtureParams { strict_h_theorem: false, ..p };
        assert!(relaxed.validate().unwrap().is_valid());
    }

    #[test]
    fn u12_examples() {
        let u1 = Vec3::new(1.0, 0.0, 0.0);
        let u2 = Vec3::new(0.0, 2.0, 0.0);
        assert_eq!(mixture_velocity_u12(u1, u2, 1.0), u1);
        assert_eq!(mixture_velocity_u12(u1, u2, 0.0), u2);
        assert_eq!(mixture_velocity_u12(u1, u2, 0.25), Vec3::new(0.25, 1.5, 0.0));
    }

    #[test]
    fn u21_examples() {
        let p = sample();
        let u = Vec3::new(0.3, -1.0, 2.0);
        assert_eq!(p.u21(u, u), u);
        let u21 = p.u21(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(u21, Vec3::new(0.5, 0.0, 0.0));
    }

    #[test]
    fn t12_examples() {
        let p = MixtureParams { alpha: 0.5, gamma: 0.0, ..sample() };
        let s = |t, u: [f64; 3]| SpeciesMoments::new(1.0, u, t);
        assert_eq!(p.t12(&s(1.3, [0.1; 3]), &s(1.3, [0.1; 3])), 1.3);
        assert_eq!(p.t12(&s(1.0, [0.0; 3]), &s(3.0, [0.0; 3])), 2.0);
        let q = MixtureParams { alpha: 1.0, gamma: 0.1, ..sample() };
        assert!(close(q.t12(&s(1.0, [2.0, 0.0, 0.0]), &s(5.0, [0.0; 3])), 1.4, 1e-15));
    }

    #[test]
    fn t21_examples() {
        let p = sample();
        let a = SpeciesMoments::new(1.0, [0.2, 0.2, 0.2], 0.8);
        assert!(close(p.t21(&a, &a), 0.8, 1e-15));
        let s1 = SpeciesMoments::new(1.0, [1.0, 0.0, 0.0], 1.0);
        let s2 = SpeciesMoments::new(1.0, [0.0, 0.0, 0.0], 1.0);
        assert!(close(p.t21(&s1, &s2), 1.0 + 1.0 / 6.0, 1e-15));
    }

    #[test]
    fn preset_examples() {
        let gk = preset("gross-krook", 3.0, 7.0, PresetAux::default()).unwrap();
        assert_eq!(gk.epsilon, 1.0);
        assert!(close(gk.delta, 0.3, 1e-15));
        let plasma = preset("plasma", 1.0, 1.0, PresetAux { nu22: Some(2.5), ..Default::default() }).unwrap();
        for nu in [plasma.nu11, plasma.nu12(), plasma.nu21, plasma.nu22] {
            assert_eq!(nu, 2.5);
        }
        assert!(matches!(preset("bogus", 1.0, 1.0, PresetAux::default()), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn plasma_preset_frequency_ordering() {
        let (mi, me) = (1836.0, 1.0);
        let p = preset("plasma", mi, me, PresetAux { nu22: Some(1.0), ..Default::default() }).unwrap();
        assert!(close(p.nu11, (me / mi).sqrt(), 1e-15));
        assert!(close(p.nu12(), me / mi, 1e-15));
        assert!(p.validate().unwrap().is_valid());
    }

    #[test]
    fn aap_map_examples() {
        let m = aap_parameter_map(1e-300, 2.0, 1.0, 1.0, 1.0);
        assert!(close(m.delta, 1.0, 1e-15) && close(m.alpha, 1.0, 1e-15) && m.gamma.abs() < 1e-15);
        let m = aap_parameter_map(1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(m.delta.abs() < 1e-15 && m.alpha.abs() < 1e-15 && m.gamma.abs() < 1e-15);
        let m = aap_parameter_map(0.5, 2.0, 1.0, 1.0, 1.0);
        assert!(close(m.delta, 2.0 / 3.0, 1e-15));
        assert!(close(m.alpha, 5.0 / 9.0, 1e-15));
        assert!(close(m.gamma, 2.0 / 27.0, 1e-15));
        assert!(!m.negative_gamma && !m.density_dependent);
        assert!(aap_parameter_map(1.5, 2.0, 1.0, 1.0, 1.0).negative_gamma);
        assert!(aap_parameter_map(0.5, 2.0, 1.0, 2.0, 1.0).density_dependent);
    }

    #[test]
    fn delta_tilde_rewrites_u21() {
        let p = sample();
        let u1 = Vec3::new(0.7, -0.1, 3.0);
        let u2 = Vec3::new(-1.2, 0.4, 0.5);
        let dt = p.delta_tilde();
        let rewritten = dt * u2 + (1.0 - dt) * u1;
        assert!((rewritten - p.u21(u1, u2)).max_abs() < 1e-15);
    }

    #[test]
    fn hamel_limits() {
        let hamel = |m1, m2| preset("hamel", m1, m2, PresetAux::default()).unwrap();
        let d = limit_behavior(hamel, 1e-6);
        assert!(d.light[0] < 1e-5 && d.light[2] < 1e-5, "{d:?}");
        // alpha = (m1^2 + m2^2)/(m1 + m2)^2 tends to 1, not 0, for a light species 1
        assert!((d.light[1] - 1.0).abs() < 1e-5, "{d:?}");
        assert!(d.max_heavy() < 1e-5, "{d:?}");
        assert!(d.max_equal() < 1e-14, "{d:?}");
    }

    #[test]
    fn constant_delta_fails_limits() {
        let fixed = |m1, m2| MixtureParams { m1, m2, delta: 0.5, alpha: 0.5, ..MixtureParams::default() };
        let d = limit_behavior(fixed, 1e-6);
        assert!(d.max_light() >= 0.5 && d.max_heavy() >= 0.5);
    }
}
