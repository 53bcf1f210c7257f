//! Numerical types, the constant `c(E)`, the central charge `Z_m(E)` and
//! exact phase comparison.
//!
//! For `E` with Chern data `(rk, c1, ch2)` and stability parameters `(beta, omega)`,
//!
//! ```text
//! Z_m(E) = rk * omega^2 * m^2 / 2 + c(E) + i * (c1.omega - rk * beta.omega) * m
//! c(E)   = -ch2 + c1.beta - rk * beta^2 / 2
//! ```
//!
//! Phases are never computed as angles when a decision is made. Ordering goes
//! through the sign of `Im(conj(Z_E) * Z_B)`, which for phases in `(0, 1]` is
//! negative exactly when `E` has the larger phase.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{EngineError, Result};
use crate::lattice::{ClassVec, LatticeModel};
use crate::rational::{int, q, Rational};

/// Central-charge weights `rho_d = -(-i)^d / d!`, as `(re, im)` pairs for `d = 0, 1, 2`.
/// Recorded for reference; the charge is evaluated in closed form.
pub const RHO: [(i64, i64, i64); 3] = [(-1, 0, 1), (0, 1, 1), (1, 0, 2)];

/// Perversity `p(d) = -floor(d / 2)` for `d = 0, 1, 2`.
pub const PERVERSITY: [i64; 3] = [0, 0, -1];

/// Numerical shadow `(rk, c1, ch2)` of an object of the derived category.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharVec {
    pub rk: i64,
    c1: ClassVec,
    ch2: Rational,
}

impl CharVec {
    pub fn new(rk: i64, c1: ClassVec, ch2: Rational) -> Result<Self> {
        if !c1.is_integral() {
            return Err(EngineError::NonIntegralC1);
        }
        Ok(CharVec { rk, c1, ch2 })
    }

    /// Builds from `(rk, c1, c2)` using `ch2 = c1^2 / 2 - c2`.
    pub fn from_c2(rk: i64, c1: ClassVec, c2: Rational, lattice: &LatticeModel) -> Result<Self> {
        let c1_sq = lattice.square(&c1)?;
        CharVec::new(rk, c1, c1_sq / int(2) - c2)
    }

    pub fn zero(lattice_rank: usize) -> Self {
        CharVec {
            rk: 0,
            c1: ClassVec::zero(lattice_rank),
            ch2: Rational::zero(),
        }
    }

    pub fn c1(&self) -> &ClassVec {
        &self.c1
    }

    pub fn ch2(&self) -> &Rational {
        &self.ch2
    }

    /// Derived view `c2 = c1^2 / 2 - ch2`.
    pub fn c2(&self, lattice: &LatticeModel) -> Result<Rational> {
        Ok(lattice.square(&self.c1)? / int(2) - &self.ch2)
    }

    pub fn add(&self, other: &CharVec) -> CharVec {
        CharVec {
            rk: self.rk + other.rk,
            c1: self.c1.add(&other.c1),
            ch2: &self.ch2 + &other.ch2,
        }
    }

    pub fn sub(&self, other: &CharVec) -> CharVec {
        CharVec {
            rk: self.rk - other.rk,
            c1: self.c1.sub(&other.c1),
            ch2: &self.ch2 - &other.ch2,
        }
    }

    /// Class of `E[1]`.
    pub fn neg(&self) -> CharVec {
        CharVec {
            rk: -self.rk,
            c1: self.c1.neg(),
            ch2: -&self.ch2,
        }
    }
}

impl fmt::Display for CharVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rk={}, c1={}, ch2={})", self.rk, self.c1, self.ch2)
    }
}

/// The pair `(beta, omega)` with cached pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityParams {
    lattice: LatticeModel,
    beta: ClassVec,
    omega: ClassVec,
    omega_sq: Rational,
    beta_omega: Rational,
    beta_sq: Rational,
}

impl StabilityParams {
    pub fn new(lattice: LatticeModel, beta: ClassVec, omega: ClassVec) -> Result<Self> {
        lattice.check_dim(&beta)?;
        lattice.check_dim(&omega)?;
        if !lattice.is_ample_numerical(&omega) {
            return Err(EngineError::NotAmple(omega.to_string()));
        }
        let omega_sq = lattice.square(&omega)?;
        let beta_omega = lattice.pairing(&beta, &omega)?;
        let beta_sq = lattice.square(&beta)?;
        Ok(StabilityParams {
            lattice,
            beta,
            omega,
            omega_sq,
            beta_omega,
            beta_sq,
        })
    }

    pub fn lattice(&self) -> &LatticeModel {
        &self.lattice
    }

    pub fn beta(&self) -> &ClassVec {
        &self.beta
    }

    pub fn omega(&self) -> &ClassVec {
        &self.omega
    }

    pub fn omega_sq(&self) -> &Rational {
        &self.omega_sq
    }

    pub fn beta_omega(&self) -> &Rational {
        &self.beta_omega
    }

    pub fn beta_sq(&self) -> &Rational {
        &self.beta_sq
    }

    /// `c1 . omega`
    pub fn degree(&self, e: &CharVec) -> Result<Rational> {
        self.lattice.pairing(&e.c1, &self.omega)
    }

    pub fn shadow(&self, e: &CharVec) -> Result<Shadow> {
        Ok(Shadow {
            rk: e.rk,
            x: self.degree(e)?,
            c: c_value(e, self)?,
        })
    }
}

/// Reduced datum `(rk, x = c1.omega, c = c(E))`: everything the charge depends on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shadow {
    pub rk: i64,
    pub x: Rational,
    pub c: Rational,
}

impl Shadow {
    pub fn new(rk: i64, x: Rational, c: Rational) -> Self {
        Shadow { rk, x, c }
    }

    /// `y = x - rk * beta.omega`, the coefficient of `i * m` in the charge.
    pub fn y(&self, p: &StabilityParams) -> Rational {
        &self.x - int(self.rk) * p.beta_omega()
    }

    pub fn sub(&self, other: &Shadow) -> Shadow {
        Shadow {
            rk: self.rk - other.rk,
            x: &self.x - &other.x,
            c: &self.c - &other.c,
        }
    }
}

impl fmt::Display for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rk={}, x={}, c={})", self.rk, self.x, self.c)
    }
}

/// Anything that reduces to a [`Shadow`] under fixed stability parameters.
pub trait NumericalClass {
    fn to_shadow(&self, p: &StabilityParams) -> Shadow;
}

impl NumericalClass for Shadow {
    fn to_shadow(&self, _p: &StabilityParams) -> Shadow {
        self.clone()
    }
}

impl NumericalClass for CharVec {
    fn to_shadow(&self, p: &StabilityParams) -> Shadow {
        // Lattice dimensions are checked when a CharVec meets parameters through
        // `StabilityParams::shadow`; here a mismatch is a programming error.
        p.shadow(self).expect("class and parameters live on the same lattice")
    }
}

/// `c(E) = -ch2 + c1.beta - rk * beta^2 / 2`.
pub fn c_value(e: &CharVec, p: &StabilityParams) -> Result<Rational> {
    let c1_beta = p.lattice.pairing(&e.c1, &p.beta)?;
    Ok(-&e.ch2 + c1_beta - int(e.rk) * &p.beta_sq / int(2))
}

/// `Z(m) = re2 * m^2 + re0 + i * im1 * m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChargeQuadratic {
    pub re2: Rational,
    pub im1: Rational,
    pub re0: Rational,
}

impl ChargeQuadratic {
    pub fn from_shadow(s: &Shadow, p: &StabilityParams) -> Self {
        ChargeQuadratic {
            re2: int(s.rk) * p.omega_sq() / int(2),
            im1: s.y(p),
            re0: s.c.clone(),
        }
    }

    /// `(Re Z(m), Im Z(m))`.
    pub fn eval(&self, m: &Rational) -> (Rational, Rational) {
        (&self.re2 * m * m + &self.re0, &self.im1 * m)
    }

    /// Phase in `(0, 1]` for display only; `None`-like variants outside the heart half-plane.
    pub fn display_phase(&self, m: &Rational) -> DisplayPhase {
        let (re, im) = self.eval(m);
        if im.is_positive() {
            let re = re.to_f64().unwrap_or(f64::NAN);
            let im = im.to_f64().unwrap_or(f64::NAN);
            DisplayPhase::Phase(im.atan2(re) / std::f64::consts::PI)
        } else if im.is_zero() && re.is_negative() {
            DisplayPhase::Phase(1.0)
        } else if im.is_zero() && re.is_zero() {
            DisplayPhase::Zero
        } else {
            DisplayPhase::NonHeart
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisplayPhase {
    Phase(f64),
    /// Charge lies outside the upper half-plane together with the negative reals.
    NonHeart,
    Zero,
}

pub fn central_charge(e: &impl NumericalClass, p: &StabilityParams) -> ChargeQuadratic {
    ChargeQuadratic::from_shadow(&e.to_shadow(p), p)
}

/// Slope `c1.omega / rk`; torsion classes sort above every finite slope.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slope {
    Finite(Rational),
    Torsion,
}

pub fn slope_mu(e: &impl NumericalClass, p: &StabilityParams) -> Slope {
    let s = e.to_shadow(p);
    if s.rk == 0 {
        Slope::Torsion
    } else {
        Slope::Finite(s.x / int(s.rk))
    }
}

/// Necessary condition `c1.omega >= rk * beta.omega` for membership in the tilted heart.
/// It is not sufficient.
pub fn heart_admissible(e: &impl NumericalClass, p: &StabilityParams) -> bool {
    !e.to_shadow(p).y(p).is_negative()
}

/// `Im(conj(Z_E(m)) * Z_B(m))`, evaluated directly from the two charges.
pub fn imag_cross(e: &Shadow, b: &Shadow, p: &StabilityParams, m: &Rational) -> Rational {
    let (re_e, im_e) = ChargeQuadratic::from_shadow(e, p).eval(m);
    let (re_b, im_b) = ChargeQuadratic::from_shadow(b, p).eval(m);
    re_e * im_b - im_e * re_b
}

/// Compares phases of `E` and `B` at `m`; `Greater` means `phi(E) > phi(B)`.
pub fn phase_compare(
    e: &impl NumericalClass,
    b: &impl NumericalClass,
    p: &StabilityParams,
    m: &Rational,
) -> Result<Ordering> {
    if !m.is_positive() {
        return Err(EngineError::NonPositiveParameter);
    }
    let cross = imag_cross(&e.to_shadow(p), &b.to_shadow(p), p, m);
    Ok(if cross.is_negative() {
        Ordering::Greater
    } else if cross.is_positive() {
        Ordering::Less
    } else {
        Ordering::Equal
    })
}

/// Both sides of the rearranged comparison
/// `(w^2 m^2 / 2)(rk_E x_B - rk_B x_E)  <  c_B y_E - c_E y_B`,
/// which holds exactly when `phi(E) > phi(B)`.
pub fn eb2_sides(e: &Shadow, b: &Shadow, p: &StabilityParams, m: &Rational) -> (Rational, Rational) {
    let lhs = p.omega_sq() * m * m / int(2) * (int(e.rk) * &b.x - int(b.rk) * &e.x);
    let rhs = &b.c * e.y(p) - &e.c * b.y(p);
    (lhs, rhs)
}

/// Half of `omega^2`, used throughout the wall formulas.
pub(crate) fn half_omega_sq(p: &StabilityParams) -> Rational {
    p.omega_sq() * q(1, 2)
}
