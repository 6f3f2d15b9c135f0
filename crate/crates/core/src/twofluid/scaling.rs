//! Nondimensional constants of the ion-electron moment system and its
//! source terms.

use crate::error::{Error, Result};
use crate::params::SpeciesMoments;
use crate::vector::Vec3;

/// Relative mismatch above which a derived scale is reported.
pub const SCALE_CONSISTENCY_TOLERANCE: f64 = 1e-10;

/// Characteristic scales. `electric` and `mu0` are optional; when present,
/// `E = B u` and `B = mu0 x j` are checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub density: f64,
    pub temperature: f64,
    pub velocity: f64,
    pub length: f64,
    pub time: f64,
    pub magnetic: f64,
    pub current: f64,
    pub nu_ie: f64,
    pub ion_mass: f64,
    pub electron_mass: f64,
    pub charge: f64,
    pub light_speed: f64,
    pub electric: Option<f64>,
    pub mu0: Option<f64>,
}

impl Default for Scales {
    fn default() -> Self {
        Scales {
            density: 1.0,
            temperature: 1.0,
            velocity: 1.0,
            length: 1.0,
            time: 1.0,
            magnetic: 1.0,
            current: 1.0,
            nu_ie: 1.0,
            ion_mass: 1.0,
            electron_mass: 1.0,
            charge: 1.0,
            light_speed: 1.0,
            electric: None,
            mu0: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub m: f64,
}

/// A derived scale that disagrees with the value implied by the others.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleWarning {
    pub relation: &'static str,
    pub given: f64,
    pub implied: f64,
}

impl std::fmt::Display for ScaleWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: given {:e}, implied {:e}", self.relation, self.given, self.implied)
    }
}

pub fn dimensionless_constants(s: &Scales) -> Result<(DimensionlessConstants, Vec<ScaleWarning>)> {
    let named = [
        ("density", s.density),
        ("temperature", s.temperature),
        ("velocity", s.velocity),
        ("length", s.length),
        ("time", s.time),
        ("magnetic", s.magnetic),
        ("current", s.current),
        ("nu_ie", s.nu_ie),
        ("ion_mass", s.ion_mass),
        ("electron_mass", s.electron_mass),
        ("charge", s.charge),
        ("light_speed", s.light_speed),
    ];
    let optional = [("electric", s.electric), ("mu0", s.mu0)];
    for (name, value) in named.into_iter().chain(optional.into_iter().filter_map(|(n, v)| v.map(|v| (n, v)))) {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidScale { name, value });
        }
    }

    let mut warnings = Vec::new();
    let mut check = |relation, given: f64, implied: f64| {
        if (given - implied).abs() > SCALE_CONSISTENCY_TOLERANCE * given.abs().max(implied.abs()) {
            warnings.push(ScaleWarning { relation, given, implied });
        }
    };
    check("u = x / t", s.velocity, s.length / s.time);
    if let Some(e) = s.electric {
        check("E = B u", e, s.magnetic * s.velocity);
    }
    if let Some(mu0) = s.mu0 {
        check("B = mu0 x j", s.magnetic, mu0 * s.length * s.current);
    }

    let constants = DimensionlessConstants {
        c1: s.density * s.temperature / (s.ion_mass * s.density * s.velocity.powi(2)),
        c2: s.charge * s.magnetic * s.time / s.ion_mass,
        c3: s.nu_ie * s.density * s.time,
        c4: s.electron_mass / s.ion_mass,
        c5: s.current / (s.charge * s.density * s.velocity),
        m: (s.velocity / s.light_speed).powi(2),
    };
    Ok((constants, warnings))
}

/// Nondimensional collision frequencies. With the ion-electron frequency
/// scaled by `nu_ie` and the electron-ion one by `(m_i/m_e) nu_ie`, both
/// nondimensional values coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionRates {
    pub nu_ie: f64,
    pub nu_ei: f64,
}

impl CollisionRates {
    pub fn equal(nu: f64) -> Self {
        CollisionRates { nu_ie: nu, nu_ei: nu }
    }
}

/// Right-hand sides of the nondimensional ion and electron balance laws.
/// Lorentz and collisional contributions are kept apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceTerms {
    pub mass_i: f64,
    pub mass_e: f64,
    pub lorentz_momentum_i: Vec3,
    pub lorentz_momentum_e: Vec3,
    pub exchange_momentum_i: Vec3,
    pub exchange_momentum_e: Vec3,
    pub lorentz_energy_i: f64,
    pub lorentz_energy_e: f64,
    pub exchange_energy_i: f64,
    pub exchange_energy_e: f64,
}

impl SourceTerms {
    pub fn momentum_i(&self) -> Vec3 {
        self.lorentz_momentum_i + self.exchange_momentum_i
    }

    pub fn momentum_e(&self) -> Vec3 {
        self.lorentz_momentum_e + self.exchange_momentum_e
    }

    pub fn energy_i(&self) -> f64 {
        self.lorentz_energy_i + self.exchange_energy_i
    }

    pub fn energy_e(&self) -> f64 {
        self.lorentz_energy_e + self.exchange_energy_e
    }

    pub fn max_abs(&self) -> f64 {
        [
            self.mass_i.abs(),
            self.mass_e.abs(),
            self.momentum_i().max_abs(),
            self.momentum_e().max_abs(),
            self.energy_i().abs(),
            self.energy_e().abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn twofluid_source_terms(
    ion: &SpeciesMoments,
    electron: &SpeciesMoments,
    e_field: Vec3,
    b_field: Vec3,
    c: &DimensionlessConstants,
    rates: CollisionRates,
) -> SourceTerms {
    let (ni, ne) = (ion.n, electron.n);
    let (ui, ue) = (ion.u, electron.u);
    let nn = ne * ni;
    let thermal = 1.0 / (1.0 + c.c4) * c.c3 * c.c1 * 1.5 * nn;
    SourceTerms {
        mass_i: 0.0,
        mass_e: 0.0,
        lorentz_momentum_i: c.c2 * ni * (e_field + ui.cross(b_field)),
        lorentz_momentum_e: -c.c2 * ne * (e_field + ue.cross(b_field)),
        exchange_momentum_i: c.c3 * rates.nu_ie * nn * (ue - ui),
        exchange_momentum_e: c.c3 * rates.nu_ie * nn * (ui - ue),
        lorentz_energy_i: c.c2 * e_field.dot(ni * ui),
        lorentz_energy_e: -c.c2 * e_field.dot(ne * ue),
        exchange_energy_i: c.c3 * 0.5 * rates.nu_ie * nn * (ue.norm2() - ui.norm2())
            + thermal * rates.nu_ie * (electron.t - ion.t),
        exchange_energy_e: c.c3 * 0.5 * rates.nu_ei * nn * (ui.norm2() - ue.norm2())
            + thermal * rates.nu_ie * (ion.t - electron.t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_scales_give_unit_constants() {
        let (c, w) = dimensionless_constants(&Scales::default()).unwrap();
        assert!(w.is_empty());
        for v in [c.c1, c.c2, c.c3, c.c4, c.c5, c.m] {
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn proton_electron_mass_ratio() {
        let s = Scales { ion_mass: 1836.0, ..Default::default() };
        let (c, _) = dimensionless_constants(&s).unwrap();
        assert!((c.c4 - 5.45e-4).abs() < 1e-6);
    }

    #[test]
    fn slow_flow_is_nonrelativistic() {
        let s = Scales { velocity: 0.01, length: 0.01, ..Default::default() };
        let (c, w) = dimensionless_constants(&s).unwrap();
        assert!((c.m - 1e-4).abs() < 1e-18);
        assert!(w.is_empty());
    }

    #[test]
    fn inconsistent_scales_are_reported() {
        let s = Scales { velocity: 2.0, electric: Some(1.0), mu0: Some(3.0), ..Default::default() };
        let (_, w) = dimensionless_constants(&s).unwrap();
        let relations: Vec<_> = w.iter().map(|w| w.relation).collect();
        assert_eq!(relations, ["u = x / t", "E = B u", "B = mu0 x j"]);
    }

    #[test]
    fn non_positive_scale_is_an_error() {
        let s = Scales { charge: 0.0, ..Default::default() };
        assert!(matches!(dimensionless_constants(&s), Err(Error::InvalidScale { name: "charge", .. })));
    }

    fn constants() -> DimensionlessConstants {
        DimensionlessConstants { c1: 0.7, c2: 1.3, c3: 0.4, c4: 0.01, c5: 0.9, m: 1e-3 }
    }

    #[test]
    fn quiescent_equilibrium_has_no_sources() {
        let s = SpeciesMoments::new(1.2, [0.3, -0.1, 0.2], 0.8);
        let src = twofluid_source_terms(&s, &s, Vec3::ZERO, Vec3::ZERO, &constants(), CollisionRates::equal(1.7));
        assert_eq!(src.max_abs(), 0.0);
    }

    #[test]
    fn mass_sources_always_vanish() {
        let i = SpeciesMoments::new(1.0, [0.3, 0.0, 0.0], 1.0);
        let e = SpeciesMoments::new(1.0, [-0.2, 0.5, 0.0], 2.0);
        let src = twofluid_source_terms(&i, &e, Vec3::new(0.1, 0.2, 0.3), Vec3::new(1.0, 0.0, 0.5), &constants(), CollisionRates::equal(1.0));
        assert_eq!((src.mass_i, src.mass_e), (0.0, 0.0));
        assert!(src.max_abs() > 0.0);
    }

    #[test]
    fn collisional_exchange_cancels_between_species() {
        let c = constants();
        for k in 0..20 {
            let x = k as f64;
            let i = SpeciesMoments::new(1.0 + 0.1 * x.sin(), [x.cos(), 0.3, -0.2], 1.0 + 0.05 * x);
            let e = SpeciesMoments::new(0.9 + 0.1 * x.cos(), [0.1, x.sin(), 0.4], 2.0 - 0.05 * x);
            let src = twofluid_source_terms(&i, &e, Vec3::new(0.3, -0.2, 0.1), Vec3::new(0.0, 1.0, 0.2), &c, CollisionRates::equal(1.4));
            let scale = src.exchange_momentum_i.max_abs().max(src.exchange_energy_i.abs());
            assert!((src.exchange_momentum_i + src.exchange_momentum_e).max_abs() <= 1e-15 * scale);
            assert!((src.exchange_energy_i + src.exchange_energy_e).abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn lorentz_work_matches_force_power() {
        // magnetic force does no work: E . (n u) equals F . u for the full Lorentz force
        let c = constants();
        let i = SpeciesMoments::new(1.1, [0.4, -0.3, 0.2], 1.0);
        let e = SpeciesMoments::new(0.9, [-0.1, 0.2, 0.6], 1.0);
        let (ef, bf) = (Vec3::new(0.2, 0.1, -0.3), Vec3::new(0.5, -1.0, 0.7));
        let src = twofluid_source_terms(&i, &e, ef, bf, &c, CollisionRates::equal(1.0));
        assert!((src.lorentz_momentum_i.dot(i.u) - src.lorentz_energy_i).abs() < 1e-15);
        assert!((src.lorentz_momentum_e.dot(e.u) - src.lorentz_energy_e).abs() < 1e-15);
    }
}
