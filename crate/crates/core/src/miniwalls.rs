//! Potential mini-walls of a numerical type `t` along the ray `m in (0, +inf)`.
//!
//! A candidate destabilizer is reduced to its shadow `(rk, x, c)`. Its wall with
//! `t` is the positive root in `m^2` of
//!
//! ```text
//! Im(conj(Z_t) * Z_A)(m) = m * [ (w^2 m^2 / 2)(rk_t y_A - rk_A y_t) + (c_t y_A - c_A y_t) ]
//! ```
//!
//! Candidates are enumerated on exact discreteness grids:
//!
//! * `|rk| <= N` (the rank bound is an explicit parameter),
//! * `x = c1.omega` on the subgroup spanned by `omega . e_i`, constrained by the
//!   heart inequalities for `A` and for the complement `t - A`,
//! * `c` on an affine grid, inside the window forced by the wall lying in the
//!   queried interval and, at the Bogomolov filter levels, inside the bounds
//!   obtained from `c/rk >= -(x/rk - beta.omega)^2 / (2 w^2)` applied to pure
//!   decompositions of `A` (and of `t - A`).
//!
//! The result is a finite superset of the actual mini-walls, relative to `N`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::charge::{half_omega_sq, NumericalClass, Shadow, StabilityParams};
use crate::error::{EngineError, Result};
use crate::lattice::ClassVec;
use crate::rational::{ceil, floor, int, is_integer, rational_gcd, sqrt_upper, Rational};

/// Strength of the Bogomolov-type filtering applied to candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FilterLevel {
    /// Only the heart inequalities for `A` and `t - A`.
    HeartOnly,
    /// Additionally bound `c(A)` through pure decompositions of `A`.
    ASideBogomolov,
    /// Additionally bound `c(t - A)` the same way.
    BSideBogomolov,
}

impl FilterLevel {
    pub fn from_name(name: &str) -> Option<FilterLevel> {
        match name.to_ascii_lowercase().as_str() {
            "heart" | "heartonly" | "heart_only" => Some(FilterLevel::HeartOnly),
            "aside" | "a" | "asidebogomolov" => Some(FilterLevel::ASideBogomolov),
            "bside" | "b" | "bsidebogomolov" => Some(FilterLevel::BSideBogomolov),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterLevel::HeartOnly => "heart",
            FilterLevel::ASideBogomolov => "aside",
            FilterLevel::BSideBogomolov => "bside",
        }
    }
}

impl fmt::Display for FilterLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    rank_bound: u32,
    pub level: FilterLevel,
    /// Replaces the default `c`-grid step (the affine offset is kept).
    pub c_step: Option<Rational>,
}

impl SearchBounds {
    pub fn new(rank_bound: u32, level: FilterLevel) -> Result<Self> {
        if rank_bound == 0 {
            return Err(EngineError::InvalidBounds("rank bound must be at least 1".into()));
        }
        Ok(SearchBounds {
            rank_bound,
            level,
            c_step: None,
        })
    }

    /// Default rank bound `2|r| + 4`.
    pub fn default_for(rank: i64, level: FilterLevel) -> Self {
        let n = 2 * rank.unsigned_abs() + 4;
        SearchBounds {
            rank_bound: u32::try_from(n).unwrap_or(u32::MAX),
            level,
            c_step: None,
        }
    }

    pub fn with_c_step(mut self, step: Rational) -> Result<Self> {
        if !step.is_positive() {
            return Err(EngineError::InvalidBounds("c-grid step must be positive".into()));
        }
        self.c_step = Some(step);
        Ok(self)
    }

    pub fn rank_bound(&self) -> u32 {
        self.rank_bound
    }

    pub fn with_level(&self, level: FilterLevel) -> Self {
        SearchBounds {
            level,
            ..self.clone()
        }
    }
}

/// `[lo, hi]` in the `m` coordinate, or `[lo, +inf)` when `hi` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Option<Rational>,
}

impl Interval {
    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        let iv = Interval { lo, hi: Some(hi) };
        iv.validate()?;
        Ok(iv)
    }

    pub fn from(lo: Rational) -> Result<Self> {
        let iv = Interval { lo, hi: None };
        iv.validate()?;
        Ok(iv)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_positive() {
            return Err(EngineError::InvalidInterval(format!("lower end {} must be positive", self.lo)));
        }
        if let Some(hi) = &self.hi {
            if hi < &self.lo {
                return Err(EngineError::InvalidInterval(format!("{} > {}", self.lo, hi)));
            }
        }
        Ok(())
    }

    pub fn lo_sq(&self) -> Rational {
        &self.lo * &self.lo
    }

    pub fn hi_sq(&self) -> Option<Rational> {
        self.hi.as_ref().map(|h| h * h)
    }

    pub fn contains_sq(&self, m_sq: &Rational) -> bool {
        m_sq >= &self.lo_sq() && self.hi_sq().is_none_or(|h| m_sq <= &h)
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_some()
    }
}

/// A reduced destabilizer with the strongest filter level it passes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateShadow {
    pub shadow: Shadow,
    pub filter_level_passed: FilterLevel,
}

impl NumericalClass for CandidateShadow {
    fn to_shadow(&self, _p: &StabilityParams) -> Shadow {
        self.shadow.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiniWall {
    pub m_squared: Rational,
    pub witnesses: Vec<CandidateShadow>,
}

/// Positive root in `m^2` of `Im(conj(Z_E) * Z_A)(m) / m`, if any.
///
/// `None` when the phase relation does not depend on `m` (vanishing
/// denominator) or the root is not positive.
pub fn wall_of_pair(
    e: &impl NumericalClass,
    a: &impl NumericalClass,
    p: &StabilityParams,
) -> Option<Rational> {
    let e = e.to_shadow(p);
    let a = a.to_shadow(p);
    let (y_e, y_a) = (e.y(p), a.y(p));
    let denom = p.omega_sq() * (int(e.rk) * &y_a - int(a.rk) * &y_e);
    if denom.is_zero() {
        return None;
    }
    let m_sq = int(2) * (&a.c * &y_e - &e.c * &y_a) / denom;
    m_sq.is_positive().then_some(m_sq)
}

/// Admissible `c` range of one side, as the union over its decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
enum SideBounds {
    Empty,
    Range {
        lower: Option<Rational>,
        upper: Option<Rational>,
    },
}

impl SideBounds {
    fn everything() -> Self {
        SideBounds::Range {
            lower: None,
            upper: None,
        }
    }
}

/// Bounds on `c` for a shadow of rank `rk` and imaginary part `y`, taken over
/// decompositions `rk = p - n` into a T-part of rank `p` (slope above
/// `beta.omega`) and a shifted F-part of rank `n`, with `p + n <= cap`.
///
/// Pure parts obey the Bogomolov-Hodge bound; a mixed decomposition or a
/// torsion class leaves `c` unconstrained.
fn decomposition_bounds(rk: i64, y: &Rational, cap: u64, p: &StabilityParams) -> SideBounds {
    if y.is_negative() {
        return SideBounds::Empty;
    }
    let cap = cap.max(rk.unsigned_abs());
    let two_w2 = int(2) * p.omega_sq();
    let mut best: Option<SideBounds> = None;
    let mut j: u64 = 0;
    loop {
        let (pp, nn) = if rk >= 0 {
            (rk.unsigned_abs() + j, j)
        } else {
            (j, rk.unsigned_abs() + j)
        };
        if pp + nn > cap {
            break;
        }
        let piece = match (pp, nn) {
            (0, 0) => Some(SideBounds::everything()),
            (pp, 0) => y.is_positive().then(|| SideBounds::Range {
                lower: Some(-(y * y) / (&two_w2 * int(pp as i64))),
                upper: None,
            }),
            (0, nn) => Some(SideBounds::Range {
                lower: None,
                upper: Some(y * y / (&two_w2 * int(nn as i64))),
            }),
            _ => y.is_positive().then(SideBounds::everything),
        };
        if let Some(piece) = piece {
            best = Some(match best {
                None => piece,
                Some(prev) => union_hull(prev, piece),
            });
        }
        j += 1;
    }
    best.unwrap_or(SideBounds::Empty)
}

// Each rank admits at most one pure decomposition, so the union of the pieces
// is their convex hull.
fn union_hull(a: SideBounds, b: SideBounds) -> SideBounds {
    match (a, b) {
        (SideBounds::Empty, x) | (x, SideBounds::Empty) => x,
        (
            SideBounds::Range { lower: l1, upper: u1 },
            SideBounds::Range { lower: l2, upper: u2 },
        ) => SideBounds::Range {
            lower: match (l1, l2) {
                (Some(a), Some(b)) => Some(a.min(b)),
                _ => None,
            },
            upper: match (u1, u2) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            },
        },
    }
}

/// Residues `r = c1 mod M` on an integral lattice, with `M = lcm(2, den(beta . e_i))`.
///
/// For `c1 = r + M v` the value `c = c2 - c1^2/2 + c1.beta - rk beta^2/2` is
/// congruent to `-r^2/2 + r.beta - rk beta^2/2` modulo Z, and `c1.omega = x`
/// is solvable iff `x - r.omega` lies in `M g Z`, `g` the `x`-grid step.
struct Residues {
    x_modulus: Rational,
    /// `(r.omega, -r^2/2 + r.beta)` per residue class.
    classes: Vec<(Rational, Rational)>,
}

const MAX_RESIDUE_CLASSES: usize = 4096;

impl Residues {
    fn new(p: &StabilityParams, x_step: &Rational, beta_den: &BigInt) -> Result<Option<Self>> {
        let lattice = p.lattice();
        if !lattice.gram().iter().flatten().all(is_integer) {
            return Ok(None);
        }
        let modulus = BigInt::from(2).lcm(beta_den);
        let Ok(m) = usize::try_from(&modulus) else {
            return Ok(None);
        };
        let rank = lattice.rank();
        let count = (0..rank).try_fold(1usize, |acc, _| acc.checked_mul(m));
        if count.is_none_or(|c| c > MAX_RESIDUE_CLASSES) {
            return Ok(None);
        }
        let mut classes = Vec::new();
        let mut digits = vec![0usize; rank];
        loop {
            let r = ClassVec::new(digits.iter().map(|&d| int(d as i64)).collect());
            let r_omega = lattice.pairing(&r, p.omega())?;
            let base = -(lattice.square(&r)? / int(2)) + lattice.pairing(&r, p.beta())?;
            classes.push((r_omega, base));
            // Odometer over [0, M)^rank.
            let mut i = 0;
            while i < rank {
                digits[i] += 1;
                if digits[i] < m {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == rank {
                break;
            }
        }
        Ok(Some(Residues {
            x_modulus: Rational::from_integer(modulus) * x_step,
            classes,
        }))
    }

    /// Distinct offsets in `[0, 1)` of the `c` cosets compatible with `x`.
    fn offsets(&self, x: &Rational, rk_term: &Rational) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .classes
            .iter()
            .filter(|(r_omega, _)| is_integer(&((x - r_omega) / &self.x_modulus)))
            .map(|(_, base)| {
                let v = base + rk_term;
                let whole = Rational::from_integer(floor(&v));
                v - whole
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Precomputed data for one enumeration of `(t, params, bounds)`.
struct Enumerator<'a> {
    p: &'a StabilityParams,
    bounds: &'a SearchBounds,
    t: Shadow,
    y_t: Rational,
    x_step: Rational,
    residues: Option<Residues>,
    c_step_default: Rational,
}

/// One `(rk, x)` cell together with its `c` grid `offsets + step * Z`.
#[derive(Debug, Clone)]
struct Cell {
    rk: i64,
    x: Rational,
    y: Rational,
    /// `rk_t * x - rk * x_t`.
    denom: Rational,
    offsets: Vec<Rational>,
    step: Rational,
}

impl<'a> Enumerator<'a> {
    fn new(t: &impl NumericalClass, p: &'a StabilityParams, bounds: &'a SearchBounds) -> Result<Self> {
        let t = t.to_shadow(p);
        let y_t = t.y(p);
        let lattice = p.lattice();
        let omega_basis = lattice.pairings_with_basis(p.omega())?;
        let x_step = rational_gcd(&omega_basis);
        let gram_den = lattice
            .gram()
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
        let beta_den = lattice
            .pairings_with_basis(p.beta())?
            .iter()
            .fold(BigInt::one(), |acc, b| acc.lcm(b.denom()));
        let q_den = (gram_den * BigInt::from(2)).lcm(&beta_den);
        let residues = Residues::new(p, &x_step, &beta_den)?;
        Ok(Enumerator {
            p,
            bounds,
            t,
            y_t,
            x_step,
            residues,
            c_step_default: Rational::new(BigInt::one(), q_den),
        })
    }

    /// All `(rk, x)` cells with a nonvanishing wall denominator.
    fn cells(&self, rk: i64) -> Vec<Cell> {
        let bw = self.p.beta_omega();
        let lo = int(rk) * bw;
        let hi = &self.t.x - int(self.t.rk - rk) * bw;
        if lo > hi || self.x_step.is_zero() {
            return Vec::new();
        }
        let j_lo = ceil(&(&lo / &self.x_step));
        let j_hi = floor(&(&hi / &self.x_step));
        let mut out = Vec::new();
        let mut j = j_lo;
        while j <= j_hi {
            let x = Rational::from_integer(j.clone()) * &self.x_step;
            j += 1;
            let denom = int(self.t.rk) * &x - int(rk) * &self.t.x;
            if denom.is_zero() {
                continue;
            }
            let (offsets, step) = self.c_grid(rk, &x);
            if offsets.is_empty() {
                continue;
            }
            let y = &x - int(rk) * bw;
            out.push(Cell {
                rk,
                x,
                y,
                denom,
                offsets,
                step,
            });
        }
        out
    }

    /// Cosets `offset + step * Z` containing every realizable `c` in the cell.
    fn c_grid(&self, rk: i64, x: &Rational) -> (Vec<Rational>, Rational) {
        let rk_term = -(int(rk) * self.p.beta_sq() / int(2));
        match (&self.bounds.c_step, &self.residues) {
            (Some(step), _) => (vec![rk_term], step.clone()),
            (None, Some(res)) => (res.offsets(x, &rk_term), int(1)),
            (None, None) => (vec![rk_term], self.c_step_default.clone()),
        }
    }

    /// `c` for which the wall of the cell sits at `m_sq`.
    fn c_at(&self, cell: &Cell, m_sq: &Rational) -> Rational {
        (m_sq * half_omega_sq(self.p) * &cell.denom + &self.t.c * &cell.y) / &self.y_t
    }

    /// Admissible `c` interval for a cell at `level`; `Ok(None)` when empty.
    fn c_range(
        &self,
        cell: &Cell,
        interval: &Interval,
        level: FilterLevel,
    ) -> Result<Option<(Rational, Rational)>> {
        let at_lo = self.c_at(cell, &interval.lo_sq());
        let at_hi = interval.hi_sq().map(|h| self.c_at(cell, &h));
        let increasing = cell.denom.is_positive();
        let (mut lower, mut upper) = if increasing {
            (Some(at_lo), at_hi)
        } else {
            (at_hi, Some(at_lo))
        };
        let cap = u64::from(self.bounds.rank_bound);
        if level >= FilterLevel::ASideBogomolov {
            match decomposition_bounds(cell.rk, &cell.y, cap, self.p) {
                SideBounds::Empty => return Ok(None),
                SideBounds::Range { lower: l, upper: u } => {
                    tighten(&mut lower, l, true);
                    tighten(&mut upper, u, false);
                }
            }
        }
        if level >= FilterLevel::BSideBogomolov {
            let rk_b = self.t.rk - cell.rk;
            let y_b = &self.y_t - &cell.y;
            match decomposition_bounds(rk_b, &y_b, cap, self.p) {
                SideBounds::Empty => return Ok(None),
                SideBounds::Range { lower: l, upper: u } => {
                    // c = c_t - c_B
                    tighten(&mut upper, l.map(|l| &self.t.c - l), false);
                    tighten(&mut lower, u.map(|u| &self.t.c - u), true);
                }
            }
        }
        match (lower, upper) {
            (Some(l), Some(u)) => Ok((l <= u).then_some((l, u))),
            _ => Err(EngineError::Unbounded(format!(
                "c-window for candidates with rk={}, x={} is unbounded on [{}, +inf) at filter level {}; \
                 mixed decompositions admit no Bogomolov control at rank bound {}",
                cell.rk, cell.x, interval.lo, level, self.bounds.rank_bound
            ))),
        }
    }

    fn candidates_in_cell(&self, cell: &Cell, interval: &Interval) -> Result<Vec<CandidateShadow>> {
        let Some((lo, hi)) = self.c_range(cell, interval, self.bounds.level)? else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for offset in &cell.offsets {
            let j_lo = ceil(&((&lo - offset) / &cell.step));
            let j_hi = floor(&((&hi - offset) / &cell.step));
            let mut j = j_lo;
            while j <= j_hi {
                let c = offset + Rational::from_integer(j.clone()) * &cell.step;
                j += 1;
                let shadow = Shadow::new(cell.rk, cell.x.clone(), c);
                let level = self.strongest_level(cell, &shadow.c);
                out.push(CandidateShadow {
                    shadow,
                    filter_level_passed: level,
                });
            }
        }
        Ok(out)
    }

    fn strongest_level(&self, cell: &Cell, c: &Rational) -> FilterLevel {
        let cap = u64::from(self.bounds.rank_bound);
        let fits = |b: SideBounds, v: &Rational| match b {
            SideBounds::Empty => false,
            SideBounds::Range { lower, upper } => {
                lower.is_none_or(|l| v >= &l) && upper.is_none_or(|u| v <= &u)
            }
        };
        if !fits(decomposition_bounds(cell.rk, &cell.y, cap, self.p), c) {
            return FilterLevel::HeartOnly;
        }
        let c_b = &self.t.c - c;
        let y_b = &self.y_t - &cell.y;
        if !fits(decomposition_bounds(self.t.rk - cell.rk, &y_b, cap, self.p), &c_b) {
            return FilterLevel::ASideBogomolov;
        }
        FilterLevel::BSideBogomolov
    }

    fn ranks(&self) -> Vec<i64> {
        let n = i64::from(self.bounds.rank_bound);
        (-n..=n).collect()
    }

    fn run(&self, interval: &Interval) -> Result<Vec<CandidateShadow>> {
        if !self.y_t.is_positive() {
            return Ok(Vec::new());
        }
        let per_rank: Vec<Result<Vec<CandidateShadow>>> = self
            .ranks()
            .into_par_iter()
            .map(|rk| {
                let mut acc = Vec::new();
                for cell in self.cells(rk) {
                    acc.extend(self.candidates_in_cell(&cell, interval)?);
                }
                Ok(acc)
            })
            .collect();
        let mut all = Vec::new();
        for chunk in per_rank {
            all.extend(chunk?);
        }
        all.sort();
        Ok(all)
    }

    /// Multiple of the reduced denominator of every wall `m^2` produced by a cell.
    fn cell_denominator_bound(&self, cell: &Cell) -> BigInt {
        let c_den = cell
            .offsets
            .iter()
            .fold(cell.step.denom().clone(), |acc, o| acc.lcm(o.denom()));
        self.p.omega_sq().numer().abs()
            * cell.denom.numer().abs()
            * c_den
            * self.y_t.denom()
            * self.t.c.denom()
            * cell.y.denom()
    }
}

fn tighten(slot: &mut Option<Rational>, bound: Option<Rational>, is_lower: bool) {
    if let Some(b) = bound {
        *slot = Some(match slot.take() {
            None => b,
            Some(cur) if is_lower => cur.max(b),
            Some(cur) => cur.min(b),
        });
    }
}

fn check_interval(interval: &Interval, bounds: &SearchBounds) -> Result<()> {
    interval.validate()?;
    if !interval.is_bounded() && bounds.level < FilterLevel::BSideBogomolov {
        return Err(EngineError::Unbounded(format!(
            "an unbounded interval needs filter level bside, got {}",
            bounds.level
        )));
    }
    Ok(())
}

/// Finite list of candidate destabilizer shadows whose wall with `t` lies in the interval.
pub fn enumerate_candidates(
    t: &impl NumericalClass,
    p: &StabilityParams,
    bounds: &SearchBounds,
    interval: &Interval,
) -> Result<Vec<CandidateShadow>> {
    let en = Enumerator::new(t, p, bounds)?;
    if !en.y_t.is_positive() {
        return Ok(Vec::new());
    }
    check_interval(interval, bounds)?;
    en.run(interval)
}

/// Deduplicated potential mini-walls in the interval, ascending in `m^2`.
pub fn find_mini_walls(
    t: &impl NumericalClass,
    p: &StabilityParams,
    interval: &Interval,
    bounds: &SearchBounds,
) -> Result<Vec<MiniWall>> {
    let t_shadow = t.to_shadow(p);
    let candidates = enumerate_candidates(&t_shadow, p, bounds, interval)?;
    let mut walls: BTreeMap<Rational, Vec<CandidateShadow>> = BTreeMap::new();
    for cand in candidates {
        if let Some(m_sq) = wall_of_pair(&t_shadow, &cand.shadow, p) {
            debug_assert!(interval.contains_sq(&m_sq));
            if interval.contains_sq(&m_sq) {
                walls.entry(m_sq).or_default().push(cand);
            }
        }
    }
    Ok(walls
        .into_iter()
        .map(|(m_squared, mut witnesses)| {
            witnesses.sort();
            MiniWall {
                m_squared,
                witnesses,
            }
        })
        .collect())
}

/// Least common multiple of the per-cell denominator bounds over the search family.
///
/// Every wall `m^2` reported for the same arguments has a reduced denominator
/// dividing this number.
pub fn wall_denominator_bound(
    t: &impl NumericalClass,
    p: &StabilityParams,
    bounds: &SearchBounds,
) -> Result<BigInt> {
    let en = Enumerator::new(t, p, bounds)?;
    let mut acc = BigInt::one();
    for rk in en.ranks() {
        for cell in en.cells(rk) {
            acc = acc.lcm(&en.cell_denominator_bound(&cell));
        }
    }
    Ok(acc)
}

/// A piece of the interval in `m^2` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChamberCell {
    /// Open chamber `(lo_sq, hi_sq)`; `hi_sq = None` means `+inf`.
    Chamber {
        lo_sq: Rational,
        hi_sq: Option<Rational>,
    },
    Wall(MiniWall),
}

/// Alternating walls and open chambers covering the interval.
pub fn chamber_decomposition(
    t: &impl NumericalClass,
    p: &StabilityParams,
    interval: &Interval,
    bounds: &SearchBounds,
) -> Result<Vec<ChamberCell>> {
    let walls = find_mini_walls(t, p, interval, bounds)?;
    Ok(chambers_from_walls(interval, walls))
}

/// Splits the interval at the given walls (assumed sorted, inside the interval).
pub fn chambers_from_walls(interval: &Interval, walls: Vec<MiniWall>) -> Vec<ChamberCell> {
    let mut out = Vec::new();
    let mut cursor = interval.lo_sq();
    for wall in walls {
        if wall.m_squared > cursor {
            out.push(ChamberCell::Chamber {
                lo_sq: cursor.clone(),
                hi_sq: Some(wall.m_squared.clone()),
            });
        }
        cursor = wall.m_squared.clone();
        out.push(ChamberCell::Wall(wall));
    }
    match interval.hi_sq() {
        Some(hi) if hi > cursor => out.push(ChamberCell::Chamber {
            lo_sq: cursor,
            hi_sq: Some(hi),
        }),
        Some(_) => {}
        None => out.push(ChamberCell::Chamber {
            lo_sq: cursor,
            hi_sq: None,
        }),
    }
    out
}

/// Certified large-volume threshold relative to the search family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    /// Rational `M >= sqrt` of every wall found on `[base, +inf)`, and `M >= base`.
    pub value: Rational,
    /// Largest wall `m^2` found above `base`, if any.
    pub max_wall_sq: Option<Rational>,
    pub base: Rational,
    pub rank_bound: u32,
    pub walls_above_base: usize,
}

pub const DEFAULT_THRESHOLD_BASE: i64 = 1;

/// No candidate of the search family has a wall above the returned `M`.
pub fn large_volume_threshold(
    t: &impl NumericalClass,
    p: &StabilityParams,
    bounds: &SearchBounds,
    base: &Rational,
) -> Result<Threshold> {
    if bounds.level < FilterLevel::BSideBogomolov {
        return Err(EngineError::Unbounded(format!(
            "large-volume threshold needs filter level bside, got {}",
            bounds.level
        )));
    }
    let interval = Interval::from(base.clone())?;
    let walls = find_mini_walls(t, p, &interval, bounds)?;
    let max_wall_sq = walls.last().map(|w| w.m_squared.clone());
    let value = match &max_wall_sq {
        Some(m_sq) => {
            let root = exact_sqrt(m_sq).unwrap_or_else(|| sqrt_upper(m_sq, 32));
            root.max(base.clone())
        }
        None => base.clone(),
    };
    Ok(Threshold {
        value,
        max_wall_sq,
        base: base.clone(),
        rank_bound: bounds.rank_bound,
        walls_above_base: walls.len(),
    })
}

fn exact_sqrt(x: &Rational) -> Option<Rational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// Candidates of the family with strictly larger phase than `t` at `m`.
pub fn destabilizers_at(
    t: &impl NumericalClass,
    p: &StabilityParams,
    interval: &Interval,
    m: &Rational,
    bounds: &SearchBounds,
) -> Result<Vec<CandidateShadow>> {
    if !m.is_positive() {
        return Err(EngineError::NonPositiveParameter);
    }
    let t_shadow = t.to_shadow(p);
    let candidates = enumerate_candidates(&t_shadow, p, bounds, interval)?;
    let mut out = Vec::new();
    for cand in candidates {
        if crate::charge::phase_compare(&cand.shadow, &t_shadow, p, m)? == std::cmp::Ordering::Greater {
            out.push(cand);
        }
    }
    Ok(out)
}

/// The `x = c1.omega` grid step: generator of the group spanned by `omega . e_i`.
pub fn degree_step(p: &StabilityParams) -> Result<Rational> {
    let w = p.lattice().pairings_with_basis(p.omega())?;
    Ok(rational_gcd(&w))
}

/// Convenience constructor for the worked P2 fixture used across the test suites:
/// `beta = -H/2`, `omega = H`.
pub fn p2_half_shift() -> StabilityParams {
    StabilityParams::new(
        crate::lattice::LatticeModel::p2(),
        ClassVec::new(vec![crate::rational::q(-1, 2)]),
        ClassVec::from_ints(&[1]),
    )
    .expect("valid parameters")
}
