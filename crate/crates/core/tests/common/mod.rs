//! Test-only oracles and random instance generators.
//!
//! `first_principles_charge` expands `-exp(-(beta + i m omega)) ch(E)` in degree
//! two with hand-rolled complex rationals; it shares no code with the engine's
//! charge module.

#![allow(dead_code)]

use miniwalls_core::lattice::{ClassVec, LatticeModel};
use miniwalls_core::rational::{int, q, Rational};
use miniwalls_core::{CharVec, Shadow, StabilityParams};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cx {
    pub re: Rational,
    pub im: Rational,
}

impl Cx {
    pub fn new(re: Rational, im: Rational) -> Self {
        Cx { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Cx { re, im: int(0) }
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, k: &Rational) -> Cx {
        Cx::new(&self.re * k, &self.im * k)
    }

    pub fn conj(&self) -> Cx {
        Cx::new(self.re.clone(), -self.im.clone())
    }
}

fn dot(gram: &[Vec<Rational>], a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = int(0);
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            acc += ai * &gram[i][j] * bj;
        }
    }
    acc
}

/// `Z_m(E) = -[ch2 - D.c1 + rk D^2 / 2]` with `D = beta + i m omega` a complex class.
pub fn first_principles_charge(
    lattice: &LatticeModel,
    beta: &ClassVec,
    omega: &ClassVec,
    e: &CharVec,
    m: &Rational,
) -> Cx {
    let g = lattice.gram();
    let (b, w, c1) = (beta.coords(), omega.coords(), e.c1().coords());
    let d_c1 = Cx::new(dot(g, b, c1), m * dot(g, w, c1));
    let d_sq = Cx::new(dot(g, b, b), int(0))
        .add(&Cx::new(-(m * m) * dot(g, w, w), int(0)))
        .add(&Cx::new(int(0), int(2) * m * dot(g, b, w)));
    let degree_two = Cx::real(e.ch2().clone())
        .add(&d_c1.scale(&int(-1)))
        .add(&d_sq.scale(&(int(e.rk) / int(2))));
    degree_two.scale(&int(-1))
}

/// `Im(conj(Z_E) Z_B)` from first principles.
pub fn first_principles_cross(p: &StabilityParams, e: &CharVec, b: &CharVec, m: &Rational) -> Rational {
    let ze = first_principles_charge(p.lattice(), p.beta(), p.omega(), e, m);
    let zb = first_principles_charge(p.lattice(), p.beta(), p.omega(), b, m);
    ze.conj().mul(&zb).im
}

pub fn half_integer<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    q(rng.gen_range(2 * lo..=2 * hi), 2)
}

pub fn small_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    q(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn preset<R: Rng>(rng: &mut R) -> LatticeModel {
    if rng.gen_bool(0.5) {
        LatticeModel::p2()
    } else {
        LatticeModel::p1xp1()
    }
}

/// Integral ample class with small coordinates.
pub fn ample<R: Rng>(rng: &mut R, lattice: &LatticeModel) -> ClassVec {
    match lattice.rank() {
        1 => ClassVec::from_ints(&[rng.gen_range(1..=2)]),
        _ => ClassVec::from_ints(&[rng.gen_range(1..=2), rng.gen_range(1..=2)]),
    }
}

pub fn half_integral_class<R: Rng>(rng: &mut R, lattice: &LatticeModel, bound: i64) -> ClassVec {
    ClassVec::new((0..lattice.rank()).map(|_| half_integer(rng, -bound, bound)).collect())
}

pub fn integral_class<R: Rng>(rng: &mut R, lattice: &LatticeModel, bound: i64) -> ClassVec {
    let v: Vec<i64> = (0..lattice.rank()).map(|_| rng.gen_range(-bound..=bound)).collect();
    ClassVec::from_ints(&v)
}

pub fn params<R: Rng>(rng: &mut R, lattice: LatticeModel) -> StabilityParams {
    let beta = half_integral_class(rng, &lattice, 1);
    let omega = ample(rng, &lattice);
    StabilityParams::new(lattice, beta, omega).expect("ample by construction")
}

/// Type with integral `c2`, so `ch2 = c1^2/2 - c2`.
pub fn char_vec<R: Rng>(rng: &mut R, lattice: &LatticeModel, max_rank: i64) -> CharVec {
    let rk = rng.gen_range(-max_rank..=max_rank);
    let c1 = integral_class(rng, lattice, 2);
    let c2 = int(rng.gen_range(-3..=4));
    CharVec::from_c2(rk, c1, c2, lattice).expect("integral c1")
}

/// A type whose imaginary part `y` is positive, so walls can exist.
pub fn positive_type<R: Rng>(rng: &mut R, p: &StabilityParams, max_rank: i64) -> CharVec {
    loop {
        let t = char_vec(rng, p.lattice(), max_rank);
        let s = p.shadow(&t).expect("dimension matches");
        if s.y(p) > int(0) && s.y(p) <= int(4) {
            return t;
        }
    }
}

pub fn shadow_of(p: &StabilityParams, t: &CharVec) -> Shadow {
    p.shadow(t).expect("dimension matches")
}
