//! Large-volume moduli classification of a numerical type.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::charge::{CharVec, StabilityParams};
use crate::classical::WallXi;
use crate::error::{EngineError, Result};
use crate::lattice::LatticeModel;
use crate::rational::{ceil, int, Rational};

/// How `n` is read off a type `(0, 0, *)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TorsionConvention {
    /// `n = ch2`: a length-`n` sheaf has `ch2 = n`.
    #[default]
    Geometric,
    /// `n = c2`, literal reading of the type `(0, 0, n)`.
    C2,
}

impl TorsionConvention {
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "geometric" | "ch2" => Some(TorsionConvention::Geometric),
            "c2" => Some(TorsionConvention::C2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TorsionConvention::Geometric => "geometric",
            TorsionConvention::C2 => "c2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuliKind {
    SymmetricProduct(BigInt),
    SimpsonTorsion(CharVec),
    GiesekerSimpson(CharVec),
    DualGieseker(CharVec),
    Uhlenbeck(CharVec),
    OnWallUndetermined(WallXi),
    EmptyOrUnknown,
}

impl ModuliKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ModuliKind::SymmetricProduct(_) => "SymmetricProduct",
            ModuliKind::SimpsonTorsion(_) => "SimpsonTorsion",
            ModuliKind::GiesekerSimpson(_) => "GiesekerSimpson",
            ModuliKind::DualGieseker(_) => "DualGieseker",
            ModuliKind::Uhlenbeck(_) => "Uhlenbeck",
            ModuliKind::OnWallUndetermined(_) => "OnWallUndetermined",
            ModuliKind::EmptyOrUnknown => "EmptyOrUnknown",
        }
    }

    /// The type whose sheaf moduli describe the answer, if any.
    pub fn target_type(&self) -> Option<&CharVec> {
        match self {
            ModuliKind::SimpsonTorsion(t)
            | ModuliKind::GiesekerSimpson(t)
            | ModuliKind::DualGieseker(t)
            | ModuliKind::Uhlenbeck(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for ModuliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliKind::SymmetricProduct(n) => write!(f, "SymmetricProduct({n})"),
            ModuliKind::OnWallUndetermined(w) => write!(f, "OnWallUndetermined(xi={})", w.xi),
            ModuliKind::EmptyOrUnknown => f.write_str("EmptyOrUnknown"),
            other => write!(f, "{}({})", other.tag(), other.target_type().expect("typed branch")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliClass {
    pub kind: ModuliKind,
    pub notes: Vec<String>,
}

/// `(-r, c1, c1^2 - c2)`, i.e. `ch2 -> -ch2`. An involution.
pub fn dual_type(t: &CharVec) -> CharVec {
    CharVec::new(-t.rk, t.c1().clone(), -t.ch2().clone()).expect("c1 unchanged")
}

/// Total classification; `wall_check` is the result of `omega_on_wall` for `omega`.
pub fn classify_moduli(
    t: &CharVec,
    p: &StabilityParams,
    wall_check: Option<&WallXi>,
    convention: TorsionConvention,
) -> Result<ModuliClass> {
    let lattice = p.lattice();
    lattice.check_dim(t.c1())?;
    let mut notes = Vec::new();
    if t.rk == 0 {
        if t.c1().is_zero() {
            let n = match convention {
                TorsionConvention::Geometric => t.ch2().clone(),
                TorsionConvention::C2 => t.c2(lattice)?,
            };
            notes.push(format!("n read with the {} torsion convention", convention.name()));
            if n.is_integer() && !n.is_negative() {
                return Ok(ModuliClass {
                    kind: ModuliKind::SymmetricProduct(n.to_integer()),
                    notes,
                });
            }
            notes.push(format!("n = {n} is not a nonnegative integer"));
            return Ok(ModuliClass {
                kind: ModuliKind::EmptyOrUnknown,
                notes,
            });
        }
        notes.push("requires U = e^{-K_X/2}, i.e. beta = K_X/2".into());
        return Ok(ModuliClass {
            kind: ModuliKind::SimpsonTorsion(t.clone()),
            notes,
        });
    }
    let slope = lattice.pairing(t.c1(), p.omega())? / int(t.rk);
    let bw = p.beta_omega();
    if t.rk < 0 && &slope > bw {
        notes.push(format!("r < 0 with c1.omega/r = {slope} > beta.omega = {bw} is outside the classification"));
        return Ok(ModuliClass {
            kind: ModuliKind::EmptyOrUnknown,
            notes,
        });
    }
    if let Some(w) = wall_check {
        notes.push("omega lies on a classical wall; the chamber hypothesis fails".into());
        return Ok(ModuliClass {
            kind: ModuliKind::OnWallUndetermined(w.clone()),
            notes,
        });
    }
    notes.push("omega in a chamber relative to the searched box".into());
    let kind = if t.rk > 0 {
        ModuliKind::GiesekerSimpson(t.clone())
    } else if &slope < bw {
        ModuliKind::DualGieseker(dual_type(t))
    } else {
        ModuliKind::Uhlenbeck(dual_type(t))
    };
    Ok(ModuliClass { kind, notes })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub stratum_type: CharVec,
    pub c2: BigInt,
    pub sym_power: BigInt,
}

/// Strata `(r, c1, c2')` times `Sym^{c2 - c2'}` for `c2'` from `c2` down to the
/// discriminant cutoff `2 r c2' - (r-1) c1^2 >= 0`.
pub fn uhlenbeck_strata(t_tilde: &CharVec, lattice: &LatticeModel) -> Result<Vec<Stratum>> {
    if t_tilde.rk <= 0 {
        return Err(EngineError::RankNotPositive);
    }
    let c2 = t_tilde.c2(lattice)?;
    if !c2.is_integer() {
        return Err(EngineError::NonIntegralC2(c2.to_string()));
    }
    let c2 = c2.to_integer();
    let r = int(t_tilde.rk);
    let c1_sq = lattice.square(t_tilde.c1())?;
    let cutoff: Rational = (&r - int(1)) * c1_sq / (int(2) * r);
    let low = ceil(&cutoff);
    let mut out = Vec::new();
    let mut c2p = c2.clone();
    while c2p >= low {
        let stratum_type = CharVec::from_c2(
            t_tilde.rk,
            t_tilde.c1().clone(),
            Rational::from_integer(c2p.clone()),
            lattice,
        )?;
        out.push(Stratum {
            stratum_type,
            sym_power: &c2 - &c2p,
            c2: c2p.clone(),
        });
        c2p -= 1;
    }
    Ok(out)
}
