//! The two-species BGK collision operators.
//!
//! Species 1 relaxes toward its own Maxwellian `M1` at rate `nu11 n1` and
//! toward the interspecies Maxwellian `M12` at rate `nu12 n2`; species 2
//! likewise toward `M2` (`nu22 n2`) and `M21` (`nu21 n1`). The interspecies
//! Maxwellians carry the densities of their own species and the mixture
//! velocities/temperatures from [`MixtureParams`].

use crate::error::{Error, Result};
use crate::params::{MixtureParams, MomentPair, SpeciesMoments};
use crate::velocity::{moments, Distribution, MaxwellianKind, VelocityGrid};
use crate::vector::Vec3;

/// `nu_kl n_l` for the four relaxation terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationRates {
    pub self1: f64,
    pub inter1: f64,
    pub self2: f64,
    pub inter2: f64,
}

impl RelaxationRates {
    pub fn new(params: &MixtureParams, n1: f64, n2: f64) -> Self {
        RelaxationRates {
            self1: params.nu11 * n1,
            inter1: params.nu12() * n2,
            self2: params.nu22 * n2,
            inter2: params.nu21 * n1,
        }
    }

    pub fn total1(&self) -> f64 {
        self.self1 + self.inter1
    }

    pub fn total2(&self) -> f64 {
        self.self2 + self.inter2
    }

    pub fn max_total(&self) -> f64 {
        self.total1().max(self.total2())
    }
}

/// Macroscopic targets of the interspecies Maxwellians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterspeciesMoments {
    pub m12: SpeciesMoments,
    pub m21: SpeciesMoments,
}

impl InterspeciesMoments {
    pub fn new(pair: &MomentPair, params: &MixtureParams) -> Self {
        let (s1, s2) = (&pair.s1, &pair.s2);
        InterspeciesMoments {
            m12: SpeciesMoments {
                n: s1.n,
                u: params.u12(s1.u, s2.u),
                t: params.t12(s1, s2),
            },
            m21: SpeciesMoments {
                n: s2.n,
                u: params.u21(s1.u, s2.u),
                t: params.t21(s1, s2),
            },
        }
    }
}

/// The four attractor Maxwellians of a state, with the moments they were
/// built from.
#[derive(Debug, Clone)]
pub struct Attractors {
    pub moments: MomentPair,
    pub inter: InterspeciesMoments,
    pub rates: RelaxationRates,
    pub m1: Distribution,
    pub m2: Distribution,
    pub m12: Distribution,
    pub m21: Distribution,
}

impl Attractors {
    pub fn compute(
        f1: &Distribution,
        f2: &Distribution,
        grid: &VelocityGrid,
        params: &MixtureParams,
        kind: MaxwellianKind,
    ) -> Result<Self> {
        let pair = MomentPair::new(moments(f1, grid)?, moments(f2, grid)?);
        Self::from_moments(pair, grid, params, kind)
    }

    pub fn from_moments(
        pair: MomentPair,
        grid: &VelocityGrid,
        params: &MixtureParams,
        kind: MaxwellianKind,
    ) -> Result<Self> {
        let inter = InterspeciesMoments::new(&pair, params);
        Self::with_interspecies(pair, inter, grid, params, kind)
    }

    /// Builds attractors for explicitly given interspecies targets.
    pub fn with_interspecies(
        pair: MomentPair,
        inter: InterspeciesMoments,
        grid: &VelocityGrid,
        params: &MixtureParams,
        kind: MaxwellianKind,
    ) -> Result<Self> {
        for t in [inter.m12.t, inter.m21.t] {
            if !(t > 0.0) {
                return Err(Error::NonPositiveTemperature(t));
            }
        }
        Ok(Attractors {
            m1: kind.build(&pair.s1, params.m1, grid)?,
            m2: kind.build(&pair.s2, params.m2, grid)?,
            m12: kind.build(&inter.m12, params.m1, grid)?,
            m21: kind.build(&inter.m21, params.m2, grid)?,
            rates: RelaxationRates::new(params, pair.s1.n, pair.s2.n),
            moments: pair,
            inter,
        })
    }

    /// Rate-weighted attractor `G1 = (nu11 n1 M1 + nu12 n2 M12) / lambda1`;
    /// `f1` itself when species 1 does not relax.
    pub fn target1(&self, f1: &Distribution) -> Vec<f64> {
        blend(self.rates.self1, &self.m1, self.rates.inter1, &self.m12, f1)
    }

    pub fn target2(&self, f2: &Distribution) -> Vec<f64> {
        blend(self.rates.self2, &self.m2, self.rates.inter2, &self.m21, f2)
    }
}

fn blend(ra: f64, a: &Distribution, rb: f64, b: &Distribution, fallback: &Distribution) -> Vec<f64> {
    let total = ra + rb;
    if total <= 0.0 {
        return fallback.values.clone();
    }
    let (wa, wb) = (ra / total, rb / total);
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| wa * x + wb * y)
        .collect()
}

/// `Q11 + Q12` and `Q22 + Q21` evaluated at every node.
#[derive(Debug, Clone)]
pub struct CollisionTerms {
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    /// Interspecies parts alone, `nu12 n2 (M12 - f1)` and `nu21 n1 (M21 - f2)`.
    pub q12: Vec<f64>,
    pub q21: Vec<f64>,
}

pub fn collision_terms(f1: &Distribution, f2: &Distribution, att: &Attractors) -> CollisionTerms {
    let r = att.rates;
    let pair = |f: &Distribution, rs, ms: &Distribution, ri, mi: &Distribution| {
        let mut total = Vec::with_capacity(f.len());
        let mut inter = Vec::with_capacity(f.len());
        for ((&fv, &s), &i) in f.values.iter().zip(&ms.values).zip(&mi.values) {
            let qi = ri * (i - fv);
            total.push(rs * (s - fv) + qi);
            inter.push(qi);
        }
        (total, inter)
    };
    let (q1, q12) = pair(f1, r.self1, &att.m1, r.inter1, &att.m12);
    let (q2, q21) = pair(f2, r.self2, &att.m2, r.inter2, &att.m21);
    CollisionTerms { q1, q2, q12, q21 }
}

/// Total momentum `m1 int v f1 + m2 int v f2`.
pub fn total_momentum(f1: &Distribution, f2: &Distribution, grid: &VelocityGrid) -> Vec3 {
    Vec3(std::array::from_fn(|d| {
        f1.mass * grid.integrate_with(&f1.values, |v, f| v[d] * f)
            + f2.mass * grid.integrate_with(&f2.values, |v, f| v[d] * f)
    }))
}

/// Total energy `int m1/2 |v|^2 f1 + int m2/2 |v|^2 f2`.
pub fn total_energy(f1: &Distribution, f2: &Distribution, grid: &VelocityGrid) -> f64 {
    0.5 * f1.mass * grid.integrate_with(&f1.values, |v, f| v.norm2() * f)
        + 0.5 * f2.mass * grid.integrate_with(&f2.values, |v, f| v.norm2() * f)
}
