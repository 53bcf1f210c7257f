//! Exact model of the numerical lattice of a surface.
//!
//! A [`LatticeModel`] is a rational symmetric Gram matrix of signature
//! `(1, rho - 1)` together with a reference ample class that picks the
//! component of the positive cone containing the ample cone.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{EngineError, Result};
use crate::rational::{int, is_integer, Rational};

/// A vector of rational coordinates in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVec(pub Vec<Rational>);

impl ClassVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        ClassVec(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ClassVec(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        ClassVec(vec![Rational::zero(); rank])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(is_integer)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> ClassVec {
        ClassVec(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &ClassVec) -> ClassVec {
        assert_eq!(self.len(), other.len(), "class vectors of different length");
        ClassVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ClassVec) -> ClassVec {
        assert_eq!(self.len(), other.len(), "class vectors of different length");
        ClassVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> ClassVec {
        ClassVec(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for ClassVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Shipped lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Projective plane: `gram = [1]`, ample class `H`.
    P2,
    /// Product of two projective lines: hyperbolic plane, ample class `(1, 1)`.
    P1xP1,
}

impl Preset {
    pub fn from_name(name: &str) -> Option<Preset> {
        match name.to_ascii_lowercase().as_str() {
            "p2" | "projective_plane" => Some(Preset::P2),
            "p1xp1" | "p1p1" | "quadric" => Some(Preset::P1xP1),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::P2 => "P2",
            Preset::P1xP1 => "P1xP1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeModel {
    gram: Vec<Vec<Rational>>,
    ample_ref: ClassVec,
}

impl LatticeModel {
    /// Validates symmetry, signature `(1, rho - 1)` and positivity of the reference class.
    #[allow(clippy::needless_range_loop)]
    pub fn new(gram: Vec<Vec<Rational>>, ample_ref: ClassVec) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return Err(EngineError::DimensionMismatch { expected: 1, got: 0 });
        }
        for row in &gram {
            if row.len() != rank {
                return Err(EngineError::DimensionMismatch {
                    expected: rank,
                    got: row.len(),
                });
            }
        }
        if ample_ref.len() != rank {
            return Err(EngineError::DimensionMismatch {
                expected: rank,
                got: ample_ref.len(),
            });
        }
        for i in 0..rank {
            for j in (i + 1)..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(EngineError::NotSymmetric { row: i, col: j });
                }
            }
        }
        let (positive, negative, zero) = inertia(&gram);
        if positive != 1 || zero != 0 {
            return Err(EngineError::BadSignature {
                positive,
                negative,
                zero,
                expected_negative: rank - 1,
            });
        }
        let lattice = LatticeModel { gram, ample_ref };
        let square = lattice.pairing(&lattice.ample_ref, &lattice.ample_ref)?;
        if !square.is_positive() {
            return Err(EngineError::NotAmple(format!(
                "reference class {} has square {square}",
                lattice.ample_ref
            )));
        }
        Ok(lattice)
    }

    pub fn preset(preset: Preset) -> Self {
        let (gram, ample) = match preset {
            Preset::P2 => (vec![vec![int(1)]], ClassVec::from_ints(&[1])),
            Preset::P1xP1 => (
                vec![vec![int(0), int(1)], vec![int(1), int(0)]],
                ClassVec::from_ints(&[1, 1]),
            ),
        };
        LatticeModel::new(gram, ample).expect("shipped presets are valid")
    }

    pub fn p2() -> Self {
        Self::preset(Preset::P2)
    }

    pub fn p1xp1() -> Self {
        Self::preset(Preset::P1xP1)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn ample_ref(&self) -> &ClassVec {
        &self.ample_ref
    }

    pub fn check_dim(&self, v: &ClassVec) -> Result<()> {
        if v.len() != self.rank() {
            return Err(EngineError::DimensionMismatch {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `a^T * gram * b`.
    pub fn pairing(&self, a: &ClassVec, b: &ClassVec) -> Result<Rational> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut total = Rational::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                total += ai * &self.gram[i][j] * bj;
            }
        }
        Ok(total)
    }

    pub fn square(&self, a: &ClassVec) -> Result<Rational> {
        self.pairing(a, a)
    }

    /// Pairings of `v` with each basis vector.
    pub fn pairings_with_basis(&self, v: &ClassVec) -> Result<Vec<Rational>> {
        self.check_dim(v)?;
        Ok((0..self.rank())
            .map(|i| {
                v.0.iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (j, vj)| acc + vj * &self.gram[j][i])
            })
            .collect())
    }

    /// Numerical ampleness proxy: positive square, same cone component as the reference class.
    pub fn is_ample_numerical(&self, w: &ClassVec) -> bool {
        match (self.square(w), self.pairing(w, &self.ample_ref)) {
            (Ok(sq), Ok(with_ref)) => sq.is_positive() && with_ref.is_positive(),
            _ => false,
        }
    }

    /// Upper bound `max(c^2, d^2) / w^2` for `alpha^2` over all `alpha` with `c <= alpha.w <= d`.
    pub fn hodge_square_bound(&self, w: &ClassVec, c: &Rational, d: &Rational) -> Result<Rational> {
        if c > d {
            return Err(EngineError::InvalidBounds(format!("c = {c} exceeds d = {d}")));
        }
        if !self.is_ample_numerical(w) {
            return Err(EngineError::NotAmple(w.to_string()));
        }
        let w2 = self.square(w)?;
        let cc = c * c;
        let dd = d * d;
        Ok(if cc > dd { cc } else { dd } / w2)
    }
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix via congruence diagonalization.
#[allow(clippy::needless_range_loop)]
pub fn inertia(gram: &[Vec<Rational>]) -> (usize, usize, usize) {
    let n = gram.len();
    let mut a: Vec<Vec<Rational>> = gram.to_vec();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, i, k);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // a[i][i] + 2 a[i][j] + a[j][j] = 2 a[i][j] != 0 after adding j into i.
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] += v;
            }
            for r in 0..n {
                let v = a[r][j].clone();
                a[r][i] += v;
            }
            swap_sym(&mut a, i, k);
        } else {
            zero += n - k;
            break;
        }
        let pivot = a[k][k].clone();
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in 0..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in 0..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        k += 1;
    }
    (pos, neg, zero)
}

fn swap_sym(a: &mut [Vec<Rational>], i: usize, k: usize) {
    if i == k {
        return;
    }
    a.swap(i, k);
    for row in a.iter_mut() {
        row.swap(i, k);
    }
}
