//! Classical walls `W^xi` of a numerical type in the ample cone.
//!
//! `xi = r F - s c1` with `F` integral and `0 < s < |r|`, subject to
//! `-(r^2/4)(2 r c2 - (r-1) c1^2) <= xi^2 < 0`. The wall is the hyperplane
//! `{alpha : alpha . xi = 0}`. Enumeration is restricted to lattices of rank at
//! most 2 and to a coordinate box, with a doubling probe reporting saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::charge::CharVec;
use crate::error::{EngineError, Result};
use crate::lattice::{ClassVec, LatticeModel};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallXi {
    pub xi: ClassVec,
    pub s: i64,
    /// `(xi + s c1) / r`.
    pub f: ClassVec,
    pub type_t: CharVec,
}

/// Lower end of the admissible range of `xi^2`.
pub fn xi_square_lower_bound(t: &CharVec, lattice: &LatticeModel) -> Result<Rational> {
    let r = int(t.rk);
    let c1_sq = lattice.square(t.c1())?;
    let c2 = t.c2(lattice)?;
    let disc = int(2) * &r * c2 - (&r - int(1)) * c1_sq;
    Ok(-(&r * &r) / int(4) * disc)
}

fn to_integers(v: &ClassVec) -> Option<Vec<BigInt>> {
    v.coords()
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

/// Whether `xi` with `s` defines a wall of type `t`.
pub fn xi_admissible(xi: &ClassVec, s: i64, t: &CharVec, lattice: &LatticeModel) -> Result<bool> {
    if t.rk == 0 {
        return Err(EngineError::RankZero);
    }
    lattice.check_dim(xi)?;
    lattice.check_dim(t.c1())?;
    let r = t.rk.unsigned_abs() as i64;
    if s <= 0 || s >= r {
        return Ok(false);
    }
    let Some(xi_int) = to_integers(xi) else {
        return Ok(false);
    };
    let c1_int = to_integers(t.c1()).ok_or(EngineError::NonIntegralC1)?;
    let modulus = BigInt::from(t.rk);
    let congruent = xi_int
        .iter()
        .zip(&c1_int)
        .all(|(x, c)| (x + BigInt::from(s) * c).is_multiple_of(&modulus));
    if !congruent {
        return Ok(false);
    }
    let sq = lattice.square(xi)?;
    if !sq.is_negative() {
        return Ok(false);
    }
    Ok(xi_square_lower_bound(t, lattice)? <= sq)
}

fn make_wall(xi: ClassVec, s: i64, t: &CharVec) -> WallXi {
    let r = int(t.rk);
    let f = xi.add(&t.c1().scale(&int(s))).scale(&(int(1) / r));
    WallXi {
        xi,
        s,
        f,
        type_t: t.clone(),
    }
}

/// Smallest `s` making `xi` admissible, if any.
fn first_admissible_s(xi: &ClassVec, t: &CharVec, lattice: &LatticeModel) -> Result<Option<i64>> {
    let r = t.rk.unsigned_abs() as i64;
    for s in 1..r {
        if xi_admissible(xi, s, t, lattice)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// First nonzero coordinate positive.
fn is_canonical_sign(xi: &ClassVec) -> bool {
    xi.coords()
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.is_positive())
}

fn check_rank(lattice: &LatticeModel) -> Result<()> {
    if lattice.rank() > 2 {
        return Err(EngineError::LatticeRankTooLarge(lattice.rank()));
    }
    Ok(())
}

/// Canonical admissible walls in the box `[-K, K]^rank`, in lexicographic order.
fn walls_in_box(t: &CharVec, lattice: &LatticeModel, box_bound: u32) -> Result<Vec<WallXi>> {
    if t.rk == 0 {
        return Err(EngineError::RankZero);
    }
    check_rank(lattice)?;
    let k = i64::from(box_bound);
    let rank = lattice.rank();
    let per_first: Vec<Result<Vec<WallXi>>> = (-k..=k)
        .into_par_iter()
        .map(|a| {
            let tails: Vec<Vec<i64>> = if rank == 1 {
                vec![vec![]]
            } else {
                (-k..=k).map(|b| vec![b]).collect()
            };
            let mut out = Vec::new();
            for tail in tails {
                let mut coords = vec![a];
                coords.extend(tail);
                let xi = ClassVec::from_ints(&coords);
                if !is_canonical_sign(&xi) {
                    continue;
                }
                if let Some(s) = first_admissible_s(&xi, t, lattice)? {
                    out.push(make_wall(xi, s, t));
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for chunk in per_first {
        all.extend(chunk?);
    }
    Ok(all)
}

/// Segment `[from, to]` in the ample cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub from: ClassVec,
    pub to: ClassVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionWalls {
    pub walls: Vec<WallXi>,
    pub box_bound: u32,
    /// Doubling the box does not change the answer.
    pub saturated: bool,
}

fn crosses(wall: &WallXi, seg: &Segment, lattice: &LatticeModel) -> Result<bool> {
    let a = lattice.pairing(&seg.from, &wall.xi)?;
    let b = lattice.pairing(&seg.to, &wall.xi)?;
    Ok(a.is_zero() || b.is_zero() || a.is_positive() != b.is_positive())
}

fn walls_meeting(t: &CharVec, lattice: &LatticeModel, seg: &Segment, box_bound: u32) -> Result<Vec<WallXi>> {
    let mut out = Vec::new();
    for w in walls_in_box(t, lattice, box_bound)? {
        if crosses(&w, seg, lattice)? {
            out.push(w);
        }
    }
    Ok(out)
}

/// Admissible walls within the box whose hyperplane meets the segment, one per sign class.
pub fn walls_through_region(
    t: &CharVec,
    lattice: &LatticeModel,
    region: &Segment,
    box_bound: u32,
) -> Result<RegionWalls> {
    check_rank(lattice)?;
    for end in [&region.from, &region.to] {
        lattice.check_dim(end)?;
        if !lattice.is_ample_numerical(end) {
            return Err(EngineError::NotAmple(format!("region endpoint {end} is outside the positive cone")));
        }
    }
    if box_bound == 0 {
        return Err(EngineError::InvalidBounds("box bound must be positive".into()));
    }
    let walls = walls_meeting(t, lattice, region, box_bound)?;
    let doubled = walls_meeting(t, lattice, region, box_bound.saturating_mul(2))?;
    Ok(RegionWalls {
        saturated: doubled == walls,
        walls,
        box_bound,
    })
}

/// A wall within the box containing `w`, or `None` ("in a chamber" relative to the box).
pub fn omega_on_wall(w: &ClassVec, t: &CharVec, lattice: &LatticeModel, box_bound: u32) -> Result<Option<WallXi>> {
    check_rank(lattice)?;
    lattice.check_dim(w)?;
    if !lattice.is_ample_numerical(w) {
        return Err(EngineError::NotAmple(format!("{w}")));
    }
    for wall in walls_in_box(t, lattice, box_bound)? {
        if lattice.pairing(w, &wall.xi)?.is_zero() {
            return Ok(Some(wall));
        }
    }
    Ok(None)
}

/// Type with inverted total Chern class: `(-r, -c1, c1^2 - c2)`, stored through `ch2 -> -ch2`.
pub fn inverse_chern_type(t: &CharVec) -> CharVec {
    CharVec::new(-t.rk, t.c1().neg(), -t.ch2().clone()).expect("negated integral c1 stays integral")
}

/// Recomputes admissibility of `xi` for the inverse Chern data and returns the verdict.
pub fn dual_wall_equivalence(xi: &ClassVec, s: i64, t: &CharVec, lattice: &LatticeModel) -> Result<bool> {
    if !xi_admissible(xi, s, t, lattice)? {
        return Err(EngineError::Precondition(format!("xi = {xi} with s = {s} is not a wall of type {t}")));
    }
    let dual = inverse_chern_type(t);
    Ok(first_admissible_s(xi, &dual, lattice)?.is_some())
}
