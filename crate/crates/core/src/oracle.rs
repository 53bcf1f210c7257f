//! Brute-force cross-check of the closed-form wall solver.
//!
//! The phase form `Im(conj(Z_E) * Z_A)` is rebuilt as a polynomial in `m` by
//! multiplying out `Re_E * Im_A - Im_E * Re_A`, then evaluated exactly on a
//! rational grid. Sign changes bracket the walls; brackets must match
//! [`wall_of_pair`] cell by cell.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::charge::{central_charge, NumericalClass, Shadow, StabilityParams};
use crate::error::{EngineError, Result};
use crate::miniwalls::{enumerate_candidates, find_mini_walls, wall_of_pair, Interval, SearchBounds};
use crate::rational::{int, Rational};

/// Dense polynomial, coefficient `i` multiplies `m^i`.
pub type Poly = Vec<Rational>;

fn poly_mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect()
}

pub fn poly_eval(p: &[Rational], m: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * m + c)
}

/// Coefficients `[a0, a1, a2, a3]` of `Im(conj(Z_E) * Z_A)` as a cubic in `m`.
pub fn imag_pair_polynomial(e: &impl NumericalClass, a: &impl NumericalClass, p: &StabilityParams) -> [Rational; 4] {
    let ze = central_charge(e, p);
    let za = central_charge(a, p);
    let re = |z: &crate::charge::ChargeQuadratic| vec![z.re0.clone(), Rational::zero(), z.re2.clone()];
    let im = |z: &crate::charge::ChargeQuadratic| vec![Rational::zero(), z.im1.clone()];
    let poly = poly_sub(&poly_mul(&re(&ze), &im(&za)), &poly_mul(&im(&ze), &re(&za)));
    let mut out: [Rational; 4] = Default::default();
    for (slot, c) in out.iter_mut().zip(poly) {
        *slot = c;
    }
    out
}

/// Grid `m_i = (u + i v) / w` with the cubic rescaled to integer coefficients,
/// so that `sign(f(m_i)) = sign(scaled_value(i))`.
struct IntegerGrid {
    u: BigInt,
    v: BigInt,
    w: BigInt,
    coeffs: [BigInt; 4],
}

impl IntegerGrid {
    fn new(poly: &[Rational; 4], lo: &Rational, step: &Rational) -> Self {
        let w = lo.denom().lcm(step.denom());
        let u = (lo * Rational::from_integer(w.clone())).to_integer();
        let v = (step * Rational::from_integer(w.clone())).to_integer();
        let l = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = std::array::from_fn(|k| {
            // a_k L w^(3-k) is integral and positive scaling preserves signs.
            (&poly[k] * Rational::from_integer(l.clone() * w.pow(3 - k as u32))).to_integer()
        });
        IntegerGrid { u, v, w, coeffs }
    }

    fn point(&self, i: &BigInt) -> Rational {
        Rational::new(&self.u + &self.v * i, self.w.clone())
    }

    /// `L w^3 f(m_i)`.
    fn scaled_value(&self, i: &BigInt) -> BigInt {
        let n = &self.u + &self.v * i;
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &n + c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub pair: (Shadow, Shadow),
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
    /// Grid cells `(m_lo, m_hi)` with a sign flip, or `(m, m)` at an exact zero.
    pub brackets: Vec<(Rational, Rational)>,
    /// Closed-form wall in `m^2`, when it lies in `[lo^2, hi^2]`.
    pub exact_m_squared: Option<Rational>,
    pub agreement: bool,
}

/// Exact sign scan of the phase form of `(E, A)` on `lo, lo + step, ..., hi`.
pub fn scan_sign_changes(
    e: &impl NumericalClass,
    a: &impl NumericalClass,
    p: &StabilityParams,
    lo: &Rational,
    hi: &Rational,
    step: &Rational,
) -> Result<ScanReport> {
    if !step.is_positive() {
        return Err(EngineError::InvalidBounds("scan step must be positive".into()));
    }
    if !lo.is_positive() || hi < lo {
        return Err(EngineError::InvalidInterval(format!("[{lo}, {hi}]")));
    }
    let e = e.to_shadow(p);
    let a = a.to_shadow(p);
    let poly = imag_pair_polynomial(&e, &a, p);
    let mut brackets = Vec::new();
    // Identically equal phases define no wall.
    if !poly.iter().all(Zero::is_zero) {
        let grid = IntegerGrid::new(&poly, lo, step);
        let mut prev: Option<(Rational, bool)> = None;
        let mut i = BigInt::zero();
        loop {
            let candidate = grid.point(&i);
            let at_end = &candidate >= hi;
            let (m_here, v) = if at_end {
                (hi.clone(), poly_eval(&poly, hi))
            } else {
                (candidate, Rational::from_integer(grid.scaled_value(&i)))
            };
            if v.is_zero() {
                brackets.push((m_here.clone(), m_here.clone()));
                prev = None;
            } else {
                let positive = v.is_positive();
                if let Some((m_prev, s_prev)) = &prev {
                    if *s_prev != positive {
                        brackets.push((m_prev.clone(), m_here.clone()));
                    }
                }
                prev = Some((m_here, positive));
            }
            if at_end {
                break;
            }
            i += 1;
        }
    }
    let exact = wall_of_pair(&e, &a, p).filter(|w| w >= &(lo * lo) && w <= &(hi * hi));
    let agreement = match &exact {
        None => brackets.is_empty(),
        Some(w) => brackets.len() == 1 && {
            let (b_lo, b_hi) = &brackets[0];
            &(b_lo * b_lo) <= w && w <= &(b_hi * b_hi)
        },
    };
    Ok(ScanReport {
        pair: (e, a),
        lo: lo.clone(),
        hi: hi.clone(),
        step: step.clone(),
        brackets,
        exact_m_squared: exact,
        agreement,
    })
}

/// Number of grid refinements attempted before a disagreement is reported.
pub const HALVING_PROBES: u32 = 4;

/// Default scan step: 1/128 of the interval length.
pub fn default_step(lo: &Rational, hi: &Rational) -> Rational {
    if hi > lo {
        (hi - lo) / int(128)
    } else {
        int(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub candidates: usize,
    pub walls: Vec<Rational>,
    pub bracketed_pairs: usize,
    pub step: Rational,
    pub mismatches: Vec<ScanReport>,
}

impl CrosscheckReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Scans every enumerated candidate against `t`; mismatches are retried on halved grids.
pub fn crosscheck_walls(
    t: &impl NumericalClass,
    p: &StabilityParams,
    interval: &Interval,
    bounds: &SearchBounds,
    step: Option<Rational>,
) -> Result<CrosscheckReport> {
    let Some(hi) = interval.hi.clone() else {
        return Err(EngineError::InvalidInterval("oracle scans need a bounded interval".into()));
    };
    let lo = interval.lo.clone();
    let step = step.unwrap_or_else(|| default_step(&lo, &hi));
    let t = t.to_shadow(p);
    let candidates = enumerate_candidates(&t, p, bounds, interval)?;
    let walls: Vec<Rational> = find_mini_walls(&t, p, interval, bounds)?
        .into_iter()
        .map(|w| w.m_squared)
        .collect();
    let scans: Vec<Result<ScanReport>> = candidates
        .par_iter()
        .map(|c| {
            let mut s = step.clone();
            let mut report = scan_sign_changes(&t, &c.shadow, p, &lo, &hi, &s)?;
            for _ in 0..HALVING_PROBES {
                if report.agreement {
                    break;
                }
                s /= int(2);
                report = scan_sign_changes(&t, &c.shadow, p, &lo, &hi, &s)?;
            }
            Ok(report)
        })
        .collect();
    let mut bracketed_pairs = 0;
    let mut mismatches = Vec::new();
    for scan in scans {
        let scan = scan?;
        if !scan.brackets.is_empty() {
            bracketed_pairs += 1;
        }
        if !scan.agreement {
            mismatches.push(scan);
        }
    }
    Ok(CrosscheckReport {
        candidates: candidates.len(),
        walls,
        bracketed_pairs,
        step,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::{imag_cross, CharVec};
    use crate::lattice::ClassVec;
    use crate::miniwalls::{p2_half_shift, FilterLevel};
    use crate::rational::q;

    fn fixture() -> CharVec {
        CharVec::new(0, ClassVec::from_ints(&[1]), q(-3, 2)).unwrap()
    }

    #[test]
    fn polynomial_of_the_worked_pair() {
        let p = p2_half_shift();
        let a = CharVec::new(1, ClassVec::from_ints(&[0]), int(0)).unwrap();
        let poly = imag_pair_polynomial(&fixture(), &a, &p);
        assert_eq!(poly, [int(0), q(5, 8), int(0), q(-1, 2)]);
        for m in [q(1, 3), int(1), q(7, 2)] {
            let ea = (fixture().to_shadow(&p), a.to_shadow(&p));
            assert_eq!(poly_eval(&poly, &m), imag_cross(&ea.0, &ea.1, &p, &m));
        }
    }

    #[test]
    fn trivial_polynomials() {
        let p = p2_half_shift();
        let e = fixture();
        assert!(imag_pair_polynomial(&e, &e, &p).iter().all(Zero::is_zero));
        let tors = CharVec::new(0, ClassVec::from_ints(&[2]), int(1)).unwrap();
        assert!(imag_pair_polynomial(&e, &tors, &p)[3].is_zero());
    }

    #[test]
    fn scan_brackets_the_fixture_root() {
        let p = p2_half_shift();
        let a = Shadow::new(1, int(0), q(-1, 8));
        let r = scan_sign_changes(&fixture(), &a, &p, &q(1, 2), &int(2), &q(1, 100)).unwrap();
        assert_eq!(r.brackets.len(), 1);
        let (lo, hi) = &r.brackets[0];
        assert!(lo * lo < q(5, 4) && q(5, 4) < hi * hi);
        assert!(r.agreement);
        let same = scan_sign_changes(&fixture(), &fixture(), &p, &q(1, 2), &int(2), &q(1, 100)).unwrap();
        assert!(same.brackets.is_empty() && same.agreement);
    }

    #[test]
    fn scan_records_exact_zero_on_grid() {
        let p = p2_half_shift();
        // Wall at m^2 = 1 for this candidate.
        let e = fixture();
        let a = Shadow::new(1, int(0), int(0));
        assert_eq!(wall_of_pair(&e, &a, &p), Some(int(1)));
        let r = scan_sign_changes(&e, &a, &p, &q(1, 2), &int(2), &q(1, 4)).unwrap();
        assert_eq!(r.brackets, vec![(int(1), int(1))]);
        assert!(r.agreement);
    }

    #[test]
    fn fixture_crosscheck_is_clean() {
        let p = p2_half_shift();
        let b = SearchBounds::new(1, FilterLevel::ASideBogomolov).unwrap();
        let iv = Interval::closed(q(1, 2), int(2)).unwrap();
        let r = crosscheck_walls(&fixture(), &p, &iv, &b, None).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.walls, vec![q(5, 4)]);
        assert_eq!(r.bracketed_pairs, 1);
        assert_eq!(r.step, q(3, 256));
    }
}
