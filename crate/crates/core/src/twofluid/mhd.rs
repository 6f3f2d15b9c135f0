//! First-order Rusanov finite-volume solver for 1D ideal MHD with constant
//! normal field `B_x`.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::transport::Boundary;
use crate::vector::Vec3;

/// Ratio of specific heats implied by the `3/2 p` internal energy.
pub const GAS_GAMMA: f64 = 5.0 / 3.0;

/// Largest admissible Courant number.
pub const MHD_CFL_LIMIT: f64 = 0.45;

const EX: Vec3 = Vec3::new(1.0, 0.0, 0.0);

/// Conserved variables of one cell. `b.x()` equals the state's `bx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhdCell {
    pub n: f64,
    pub m: Vec3,
    pub energy: f64,
    pub b: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub n: f64,
    pub u: Vec3,
    pub p: f64,
    pub b: Vec3,
}

impl Primitive {
    pub fn to_conserved(self) -> MhdCell {
        MhdCell {
            n: self.n,
            m: self.n * self.u,
            energy: 0.5 * self.n * self.u.norm2() + 1.5 * self.p + 0.5 * self.b.norm2(),
            b: self.b,
        }
    }
}

impl MhdCell {
    pub fn velocity(&self) -> Vec3 {
        self.m / self.n
    }

    pub fn pressure(&self) -> f64 {
        (GAS_GAMMA - 1.0) * (self.energy - 0.5 * self.m.norm2() / self.n - 0.5 * self.b.norm2())
    }

    pub fn primitive(&self) -> Primitive {
        Primitive { n: self.n, u: self.velocity(), p: self.pressure(), b: self.b }
    }

    /// Fast magnetosonic speed along x.
    pub fn fast_speed(&self) -> f64 {
        let a2 = GAS_GAMMA * self.pressure().max(0.0) / self.n;
        let b2 = self.b.norm2() / self.n;
        let bx2 = self.b.x() * self.b.x() / self.n;
        let s = a2 + b2;
        (0.5 * (s + (s * s - 4.0 * a2 * bx2).max(0.0).sqrt())).sqrt()
    }

    fn max_speed(&self) -> f64 {
        (self.m.x() / self.n).abs() + self.fast_speed()
    }

    fn flux(&self) -> MhdCell {
        let u = self.velocity();
        let p = self.pressure();
        let b = self.b;
        let total = p + 0.5 * b.norm2();
        let b_tan = u.x() * b - b.x() * u;
        MhdCell {
            n: self.m.x(),
            m: u.x() * self.m + total * EX - b.x() * b,
            energy: (self.energy + total) * u.x() - b.x() * b.dot(u),
            b: Vec3::new(0.0, b_tan.y(), b_tan.z()),
        }
    }

    fn combine(&self, a: f64, o: &MhdCell, c: f64) -> MhdCell {
        MhdCell {
            n: a * self.n + c * o.n,
            m: a * self.m + c * o.m,
            energy: a * self.energy + c * o.energy,
            b: a * self.b + c * o.b,
        }
    }
}

fn rusanov(l: &MhdCell, r: &MhdCell) -> MhdCell {
    let s = l.max_speed().max(r.max_speed());
    let central = l.flux().combine(0.5, &r.flux(), 0.5);
    let jump = r.combine(1.0, l, -1.0);
    let f = central.combine(1.0, &jump, -0.5 * s);
    MhdCell { b: Vec3::new(0.0, f.b.y(), f.b.z()), ..f }
}

/// Domain sums of the conserved variables, `[n, m_x, m_y, m_z, E, B_y, B_z]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhdTotals(pub [f64; 7]);

#[derive(Debug, Clone, PartialEq)]
pub struct MhdState {
    pub cells: Vec<MhdCell>,
    pub bx: f64,
    pub length: f64,
    pub boundary: Boundary,
    pub time: f64,
}

impl MhdState {
    /// Cell-centred initial data from a primitive profile. The profile's
    /// `b.x` is replaced by `bx`.
    pub fn from_profile(
        cells: usize,
        length: f64,
        bx: f64,
        boundary: Boundary,
        profile: impl Fn(f64) -> Primitive,
    ) -> Result<Self> {
        if cells < 2 {
            return Err(Error::InvalidGrid(format!("MHD grid needs at least 2 cells, got {cells}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!("domain length must be positive, got {length}")));
        }
        let dx = length / cells as f64;
        let cells: Vec<MhdCell> = (0..cells)
            .map(|i| {
                let mut p = profile((i as f64 + 0.5) * dx);
                p.b = Vec3::new(bx, p.b.y(), p.b.z());
                p.to_conserved()
            })
            .collect();
        let state = MhdState { cells, bx, length, boundary, time: 0.0 };
        state.check()?;
        Ok(state)
    }

    /// Two constant states split at the domain midpoint.
    pub fn riemann(cells: usize, length: f64, bx: f64, boundary: Boundary, left: Primitive, right: Primitive) -> Result<Self> {
        Self::from_profile(cells, length, bx, boundary, |x| if x < 0.5 * length { left } else { right })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells.len() as f64
    }

    pub fn max_speed(&self) -> f64 {
        self.cells.iter().map(MhdCell::max_speed).fold(0.0, f64::max)
    }

    pub fn courant(&self, dt: f64) -> f64 {
        dt * self.max_speed() / self.dx()
    }

    /// Time step at Courant number `cfl`.
    pub fn stable_dt(&self, cfl: f64) -> f64 {
        cfl * self.dx() / self.max_speed()
    }

    pub fn totals(&self) -> MhdTotals {
        let mut t = [0.0; 7];
        for c in &self.cells {
            let row = [c.n, c.m.x(), c.m.y(), c.m.z(), c.energy, c.b.y(), c.b.z()];
            for (acc, v) in t.iter_mut().zip(row) {
                *acc += v;
            }
        }
        MhdTotals(t)
    }

    /// Reflection `x -> L - x` with the odd components negated.
    pub fn mirrored(&self) -> MhdState {
        let flip = |v: Vec3| Vec3::new(-v.x(), v.y(), v.z());
        let cells = self
            .cells
            .iter()
            .rev()
            .map(|c| MhdCell {
                n: c.n,
                m: flip(c.m),
                energy: c.energy,
                b: Vec3::new(c.b.x(), -c.b.y(), -c.b.z()),
            })
            .collect();
        MhdState { cells, ..self.clone() }
    }

    fn check(&self) -> Result<()> {
        for (i, c) in self.cells.iter().enumerate() {
            if !(c.n > 0.0) || !c.n.is_finite() {
                return Err(Error::MhdStepFailure { cell: i, reason: format!("density {} is not positive", c.n) });
            }
            let p = c.pressure();
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::MhdStepFailure { cell: i, reason: format!("pressure {p} is not positive") });
            }
        }
        Ok(())
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "x,n,ux,uy,uz,p,bx,by,bz,energy")?;
        let dx = self.dx();
        for (i, c) in self.cells.iter().enumerate() {
            let p = c.primitive();
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                (i as f64 + 0.5) * dx,
                p.n,
                p.u.x(),
                p.u.y(),
                p.u.z(),
                p.p,
                p.b.x(),
                p.b.y(),
                p.b.z(),
                c.energy
            )?;
        }
        Ok(())
    }
}

/// One forward-Euler Rusanov step.
pub fn mhd_step(state: &MhdState, dt: f64) -> Result<MhdState> {
    let courant = state.courant(dt);
    if !(courant <= MHD_CFL_LIMIT) {
        return Err(Error::CflViolation { courant, limit: MHD_CFL_LIMIT });
    }
    let cells = &state.cells;
    let n = cells.len();
    let at = |i: isize| -> &MhdCell {
        match state.boundary {
            Boundary::Periodic => &cells[i.rem_euclid(n as isize) as usize],
            Boundary::Outflow => &cells[i.clamp(0, n as isize - 1) as usize],
        }
    };
    // Face i sits between cells i-1 and i.
    let faces: Vec<MhdCell> = (0..=n as isize).into_par_iter().map(|i| rusanov(at(i - 1), at(i))).collect();
    let r = dt / state.dx();
    let updated: Vec<MhdCell> = cells
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let diff = faces[i + 1].combine(1.0, &faces[i], -1.0);
            let mut next = c.combine(1.0, &diff, -r);
            next.b = Vec3::new(c.b.x(), next.b.y(), next.b.z());
            next
        })
        .collect();
    let next = MhdState { cells: updated, time: state.time + dt, ..state.clone() };
    next.check()?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brio_wu(boundary: Boundary) -> MhdState {
        let left = Primitive { n: 1.0, u: Vec3::ZERO, p: 1.0, b: Vec3::new(0.0, 1.0, 0.0) };
        let right = Primitive { n: 0.125, u: Vec3::ZERO, p: 0.1, b: Vec3::new(0.0, -1.0, 0.0) };
        MhdState::riemann(100, 1.0, 0.75, boundary, left, right).unwrap()
    }

    #[test]
    fn pressure_round_trips_through_conserved_form() {
        let p = Primitive { n: 1.3, u: Vec3::new(0.2, -0.4, 0.1), p: 0.7, b: Vec3::new(0.5, 0.3, -0.2) };
        let c = p.to_conserved();
        assert!((c.pressure() - 0.7).abs() < 1e-15);
        assert!((c.velocity() - p.u).max_abs() < 1e-15);
    }

    #[test]
    fn fast_speed_reduces_to_sound_and_alfven_limits() {
        let hydro = Primitive { n: 2.0, u: Vec3::ZERO, p: 3.0, b: Vec3::ZERO }.to_conserved();
        assert!((hydro.fast_speed() - (GAS_GAMMA * 1.5f64).sqrt()).abs() < 1e-14);
        let cold = Primitive { n: 4.0, u: Vec3::ZERO, p: 1e-300, b: Vec3::new(2.0, 0.0, 0.0) }.to_conserved();
        assert!((cold.fast_speed() - 1.0).abs() < 1e-12);
        let perp = Primitive { n: 1.0, u: Vec3::ZERO, p: 0.6, b: Vec3::new(0.0, 1.0, 0.0) }.to_conserved();
        assert!((perp.fast_speed() - 2.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn constant_state_is_preserved_exactly() {
        let p = Primitive { n: 1.1, u: Vec3::new(0.3, -0.2, 0.5), p: 0.9, b: Vec3::new(0.4, 0.7, -0.3) };
        let s0 = MhdState::from_profile(32, 1.0, 0.4, Boundary::Periodic, |_| p).unwrap();
        let dt = s0.stable_dt(0.4);
        let mut s = s0.clone();
        for _ in 0..1000 {
            s = mhd_step(&s, dt).unwrap();
        }
        assert_eq!(s.cells, s0.cells);
    }

    #[test]
    fn periodic_sums_are_conserved() {
        let s0 = brio_wu(Boundary::Periodic);
        let before = s0.totals();
        let mut s = s0.clone();
        for _ in 0..200 {
            let dt = s.stable_dt(0.4);
            s = mhd_step(&s, dt).unwrap();
        }
        let after = s.totals();
        for (k, (a, b)) in before.0.iter().zip(after.0).enumerate() {
            let scale = s0.cells.len() as f64;
            assert!((a - b).abs() <= 1e-12 * scale, "component {k}: {a} vs {b}");
        }
        assert!(s.cells.iter().all(|c| c.b.x() == 0.75));
    }

    #[test]
    fn mirrored_riemann_problem_evolves_symmetrically() {
        let s0 = brio_wu(Boundary::Outflow);
        let (mut a, mut b) = (s0.clone(), s0.mirrored());
        for _ in 0..100 {
            let dt = a.stable_dt(0.4);
            a = mhd_step(&a, dt).unwrap();
            b = mhd_step(&b, dt).unwrap();
        }
        let am = a.mirrored();
        for (x, y) in am.cells.iter().zip(&b.cells) {
            let d = (x.n - y.n).abs().max((x.m - y.m).max_abs()).max((x.energy - y.energy).abs()).max((x.b - y.b).max_abs());
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn oversized_step_is_rejected() {
        let s = brio_wu(Boundary::Outflow);
        let dt = s.stable_dt(0.9);
        assert!(matches!(mhd_step(&s, dt), Err(Error::CflViolation { .. })));
    }

    #[test]
    fn vacuum_is_reported_with_cell_index() {
        let p = Primitive { n: 1.0, u: Vec3::ZERO, p: 1.0, b: Vec3::ZERO };
        let mut s = MhdState::from_profile(8, 1.0, 0.0, Boundary::Periodic, |_| p).unwrap();
        s.cells[3].energy = -1.0;
        assert!(matches!(s.check(), Err(Error::MhdStepFailure { cell: 3, .. })));
    }
}
