//! Closed-form momentum and energy exchange between the species, and their
//! agreement with quadrature of the discrete collision operators.

use crate::bgk::{collision_terms, Attractors};
use crate::error::Result;
use crate::params::{MixtureParams, SpeciesMoments};
use crate::relax::KineticState;
use crate::vector::Vec3;

/// Momentum and energy gained per unit time by each species from the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeFluxes {
    pub momentum1: Vec3,
    pub momentum2: Vec3,
    pub energy1: f64,
    pub energy2: f64,
    /// Largest single kinetic or thermal term entering the energy fluxes;
    /// the reference magnitude for their cancellation.
    pub energy_scale: f64,
}

impl ExchangeFluxes {
    /// `|P1 + P2|` relative to the larger of the two.
    pub fn momentum_imbalance(&self) -> f64 {
        relative(
            (self.momentum1 + self.momentum2).max_abs(),
            self.momentum1.max_abs().max(self.momentum2.max_abs()),
        )
    }

    pub fn energy_imbalance(&self) -> f64 {
        let scale = self.energy_scale.max(self.energy1.abs()).max(self.energy2.abs());
        relative((self.energy1 + self.energy2).abs(), scale)
    }

    fn max_abs(&self) -> f64 {
        self.momentum1
            .max_abs()
            .max(self.momentum2.max_abs())
            .max(self.energy1.abs())
            .max(self.energy2.abs())
    }
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Exchange fluxes expanded in the species moments.
pub fn exchange_fluxes(s1: &SpeciesMoments, s2: &SpeciesMoments, params: &MixtureParams) -> ExchangeFluxes {
    let (m1, m2) = (params.m1, params.m2);
    let (eps, d, a, g) = (params.epsilon, params.delta, params.alpha, params.gamma);
    let nu21 = params.nu21;
    let nn = s1.n * s2.n;
    let (u1, u2) = (s1.u, s2.u);
    let du2 = (u1 - u2).norm2();
    let r = params.scaled_epsilon() * (1.0 - d);

    let momentum1 = m1 * params.nu12() * nn * (1.0 - d) * (u2 - u1);
    // u21 - u2, formed without subtracting the nearly equal velocities
    let drift21 = -(m1 / m2) * eps * (1.0 - d) * (u2 - u1);
    let momentum2 = m2 * nu21 * nn * drift21;

    // |u12|^2 - |u1|^2 and |u21|^2 - |u2|^2 as (a - b).(a + b)
    let kinetic1 = ((1.0 - d) * (u2 - u1)).dot((1.0 + d) * u1 + (1.0 - d) * u2);
    let thermal1 = (1.0 - a) * (s2.t - s1.t) + g * du2;
    let (k1, h1) = (eps * nu21 * 0.5 * nn * m1 * kinetic1, 1.5 * eps * nu21 * nn * thermal1);
    let energy1 = k1 + h1;

    let kinetic2 = (-r * (u2 - u1)).dot(2.0 * u2 - r * (u2 - u1));
    let thermal2 = eps * (1.0 - a) * (s1.t - s2.t) + params.t21_velocity_coefficient() * du2;
    let (k2, h2) = (0.5 * nu21 * m2 * nn * kinetic2, 1.5 * nu21 * nn * thermal2);
    let energy2 = k2 + h2;

    let energy_scale = [k1, h1, k2, h2].into_iter().fold(0.0f64, |m, x| m.max(x.abs()));
    ExchangeFluxes { momentum1, momentum2, energy1, energy2, energy_scale }
}

/// Quadrature fluxes of a kinetic state next to their closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxConsistency {
    pub quadrature: ExchangeFluxes,
    pub closed_form: ExchangeFluxes,
    /// Largest component deviation relative to the largest closed-form flux.
    pub max_relative_deviation: f64,
    pub max_absolute_deviation: f64,
    /// Largest magnitude of the interspecies parts alone (zero without
    /// interspecies collisions).
    pub interspecies_magnitude: f64,
}

/// `int m_k v Q_k` and `int m_k |v|^2 / 2 Q_k` against [`exchange_fluxes`].
pub fn kinetic_flux_consistency(state: &KineticState) -> Result<FluxConsistency> {
    let att = state.attractors()?;
    Ok(flux_consistency_with(state, &att))
}

pub fn flux_consistency_with(state: &KineticState, att: &Attractors) -> FluxConsistency {
    let g = &state.grid;
    let q = collision_terms(&state.f1, &state.f2, att);
    let (m1, m2) = (state.params.m1, state.params.m2);
    let momentum = |q: &[f64], m: f64| Vec3(std::array::from_fn(|d| m * g.integrate_with(q, |v, x| v[d] * x)));
    let energy = |q: &[f64], m: f64| 0.5 * m * g.integrate_with(q, |v, x| v.norm2() * x);
    let quadrature = ExchangeFluxes {
        momentum1: momentum(&q.q1, m1),
        momentum2: momentum(&q.q2, m2),
        energy1: energy(&q.q1, m1),
        energy2: energy(&q.q2, m2),
        energy_scale: 0.0,
    };
    let inter = ExchangeFluxes {
        momentum1: momentum(&q.q12, m1),
        momentum2: momentum(&q.q21, m2),
        energy1: energy(&q.q12, m1),
        energy2: energy(&q.q21, m2),
        energy_scale: 0.0,
    };
    let closed_form = exchange_fluxes(&att.moments.s1, &att.moments.s2, &state.params);
    let abs = (quadrature.momentum1 - closed_form.momentum1)
        .max_abs()
        .max((quadrature.momentum2 - closed_form.momentum2).max_abs())
        .max((quadrature.energy1 - closed_form.energy1).abs())
        .max((quadrature.energy2 - closed_form.energy2).abs());
    FluxConsistency {
        quadrature,
        closed_form,
        max_relative_deviation: relative(abs, closed_form.max_abs()),
        max_absolute_deviation: abs,
        interspecies_magnitude: inter.max_abs(),
    }
}
