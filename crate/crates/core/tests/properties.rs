//! Property tests for the algebraic invariants of the engine.

mod common;

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use miniwalls_core::classical::{dual_wall_equivalence, walls_through_region, xi_admissible, Segment};
use miniwalls_core::lattice::{ClassVec, LatticeModel};
use miniwalls_core::moduli::uhlenbeck_strata;
use miniwalls_core::rational::{int, q, sqrt_lower, sqrt_upper, Rational};
use miniwalls_core::{
    central_charge, chamber_decomposition, destabilizers_at, dual_type, eb2_sides, enumerate_candidates,
    find_mini_walls, imag_cross, wall_of_pair, ChamberCell, CharVec, FilterLevel, Interval, SearchBounds, Shadow,
    StabilityParams,
};

use common::{first_principles_charge, shadow_of};

fn lattice_strategy() -> impl Strategy<Value = LatticeModel> {
    prop_oneof![Just(LatticeModel::p2()), Just(LatticeModel::p1xp1())]
}

fn class_strategy(rank: usize, bound: i64) -> impl Strategy<Value = ClassVec> {
    prop::collection::vec(-bound..=bound, rank).prop_map(|v| ClassVec::from_ints(&v))
}

fn half_class_strategy(rank: usize) -> impl Strategy<Value = ClassVec> {
    prop::collection::vec(-3i64..=3, rank).prop_map(|v| ClassVec::new(v.into_iter().map(|a| q(a, 2)).collect()))
}

fn params_strategy() -> impl Strategy<Value = StabilityParams> {
    lattice_strategy().prop_flat_map(|l| {
        let r = l.rank();
        (
            Just(l),
            half_class_strategy(r),
            prop::collection::vec(1i64..=3, r),
        )
            .prop_map(|(l, beta, w)| StabilityParams::new(l, beta, ClassVec::from_ints(&w)).unwrap())
    })
}

fn type_strategy(rank: usize, max_rk: i64) -> impl Strategy<Value = (i64, ClassVec, i64)> {
    (-max_rk..=max_rk, class_strategy(rank, 3), -4i64..=5)
}

fn make_type(l: &LatticeModel, (rk, c1, c2): (i64, ClassVec, i64)) -> CharVec {
    CharVec::from_c2(rk, c1, int(c2), l).unwrap()
}

/// Parameters plus two types on the same lattice.
fn pair_strategy() -> impl Strategy<Value = (StabilityParams, CharVec, CharVec)> {
    params_strategy().prop_flat_map(|p| {
        let r = p.lattice().rank();
        (Just(p), type_strategy(r, 3), type_strategy(r, 3)).prop_map(|(p, a, b)| {
            let l = p.lattice().clone();
            (p, make_type(&l, a), make_type(&l, b))
        })
    })
}

/// Parameters and a type with `0 < y <= 4`.
fn instance_strategy() -> impl Strategy<Value = (StabilityParams, CharVec)> {
    params_strategy()
        .prop_flat_map(|p| {
            let r = p.lattice().rank();
            (Just(p), type_strategy(r, 2))
        })
        .prop_map(|(p, raw)| {
            let t = make_type(&p.lattice().clone(), raw);
            (p, t)
        })
        .prop_filter("positive imaginary part", |(p, t)| {
            let y = shadow_of(p, t).y(p);
            y.is_positive() && y <= int(4)
        })
}

fn m_strategy() -> impl Strategy<Value = Rational> {
    (1i64..=80, 1i64..=16).prop_map(|(a, b)| q(a, b))
}

fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn wall_set(t: &CharVec, p: &StabilityParams, iv: &Interval, b: &SearchBounds) -> BTreeSet<Rational> {
    find_mini_walls(t, p, iv, b).unwrap().into_iter().map(|w| w.m_squared).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pairing_is_symmetric(l in lattice_strategy(), seed in prop::collection::vec(-9i64..=9, 4)) {
        let r = l.rank();
        let a = ClassVec::from_ints(&seed[..r]);
        let b = ClassVec::from_ints(&seed[2..2 + r]);
        prop_assert_eq!(l.pairing(&a, &b).unwrap(), l.pairing(&b, &a).unwrap());
    }

    #[test]
    fn hodge_index_bound(l in lattice_strategy(), nums in prop::collection::vec(-30i64..=30, 2), den in 1i64..=7,
                         w in prop::collection::vec(1i64..=5, 2)) {
        let r = l.rank();
        let alpha = ClassVec::new(nums[..r].iter().map(|&n| q(n, den)).collect());
        let omega = ClassVec::from_ints(&w[..r]);
        let aw = l.pairing(&alpha, &omega).unwrap();
        let bound = l.hodge_square_bound(&omega, &aw, &aw).unwrap();
        prop_assert!(l.square(&alpha).unwrap() <= bound);
    }

    #[test]
    fn charge_is_additive_and_matches_expansion((p, e, f) in pair_strategy(), m in m_strategy()) {
        let sum = e.add(&f);
        let (ze, zf, zs) = (central_charge(&e, &p), central_charge(&f, &p), central_charge(&sum, &p));
        prop_assert_eq!(&zs.re2, &(&ze.re2 + &zf.re2));
        prop_assert_eq!(&zs.re0, &(&ze.re0 + &zf.re0));
        prop_assert_eq!(&zs.im1, &(&ze.im1 + &zf.im1));
        let (re, im) = ze.eval(&m);
        let direct = first_principles_charge(p.lattice(), p.beta(), p.omega(), &e, &m);
        prop_assert_eq!(re, direct.re);
        prop_assert_eq!(im, direct.im);
    }

    #[test]
    fn phase_form_is_antisymmetric((p, e, b) in pair_strategy(), m in m_strategy()) {
        let (se, sb) = (shadow_of(&p, &e), shadow_of(&p, &b));
        prop_assert_eq!(imag_cross(&se, &sb, &p, &m), -imag_cross(&sb, &se, &p, &m));
        prop_assert!(imag_cross(&se, &se, &p, &m).is_zero());
    }

    #[test]
    fn eb2_rearrangement_is_exact((p, e, b) in pair_strategy(), m in m_strategy()) {
        let (se, sb) = (shadow_of(&p, &e), shadow_of(&p, &b));
        let cross = imag_cross(&se, &sb, &p, &m);
        let (lhs, rhs) = eb2_sides(&se, &sb, &p, &m);
        prop_assert_eq!(&cross, &(&m * (&lhs - &rhs)));
        prop_assert_eq!(cross.is_negative(), lhs < rhs);
    }

    #[test]
    fn wall_root_identity_and_sign_flip((p, e, a) in pair_strategy()) {
        let (se, sa) = (shadow_of(&p, &e), shadow_of(&p, &a));
        if let Some(w) = wall_of_pair(&se, &sa, &p) {
            prop_assert!(w.is_positive());
            let half_w2 = p.omega_sq() / int(2);
            let lhs = half_w2 * &w * (int(se.rk) * &sa.x - int(sa.rk) * &se.x);
            let rhs = &sa.c * se.y(&p) - &se.c * sa.y(&p);
            prop_assert_eq!(lhs, rhs);
            let below = sqrt_lower(&w, 16) * q(1023, 1024);
            let above = sqrt_upper(&w, 16) * q(1025, 1024);
            let s_below = sign(&imag_cross(&se, &sa, &p, &below));
            let s_above = sign(&imag_cross(&se, &sa, &p, &above));
            prop_assert!(s_below != 0 && s_below == -s_above);
        }
    }

    #[test]
    fn dual_type_is_an_involution(l in lattice_strategy(), rk in -6i64..=6, c1 in prop::collection::vec(-5i64..=5, 2),
                                  n in -40i64..=40, d in 1i64..=6) {
        let t = CharVec::new(rk, ClassVec::from_ints(&c1[..l.rank()]), q(n, d)).unwrap();
        prop_assert_eq!(dual_type(&dual_type(&t)), t);
    }

    #[test]
    fn strata_telescope(l in lattice_strategy(), rk in 1i64..=4, c1 in prop::collection::vec(-3i64..=3, 2), c2 in -2i64..=8) {
        let t = CharVec::from_c2(rk, ClassVec::from_ints(&c1[..l.rank()]), int(c2), &l).unwrap();
        let strata = uhlenbeck_strata(&t, &l).unwrap();
        for s in &strata {
            prop_assert_eq!(&s.sym_power + &s.c2, num_bigint::BigInt::from(c2));
            let disc = int(2 * rk) * Rational::from_integer(s.c2.clone()) - int(rk - 1) * l.square(t.c1()).unwrap();
            prop_assert!(!disc.is_negative());
        }
        prop_assert!(strata.windows(2).all(|w| w[0].c2 > w[1].c2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn filters_are_monotone((p, t) in instance_strategy(), n in 1u32..=2) {
        let iv = Interval::closed(q(1, 2), int(2)).unwrap();
        let sets: Vec<BTreeSet<Shadow>> = [FilterLevel::HeartOnly, FilterLevel::ASideBogomolov, FilterLevel::BSideBogomolov]
            .iter()
            .map(|&lv| {
                let b = SearchBounds::new(n, lv).unwrap();
                enumerate_candidates(&t, &p, &b, &iv).unwrap().into_iter().map(|c| c.shadow).collect()
            })
            .collect();
        prop_assert!(sets[2].is_subset(&sets[1]));
        prop_assert!(sets[1].is_subset(&sets[0]));
        // Tags on the weakest enumeration reproduce the stronger ones.
        let heart = enumerate_candidates(&t, &p, &SearchBounds::new(n, FilterLevel::HeartOnly).unwrap(), &iv).unwrap();
        let tagged: BTreeSet<Shadow> = heart
            .into_iter()
            .filter(|c| c.filter_level_passed >= FilterLevel::ASideBogomolov)
            .map(|c| c.shadow)
            .collect();
        prop_assert_eq!(&tagged, &sets[1]);
    }

    #[test]
    fn splitting_the_interval_preserves_walls((p, t) in instance_strategy(), cut in (3i64..=23).prop_map(|k| q(k, 8))) {
        let b = SearchBounds::new(2, FilterLevel::ASideBogomolov).unwrap();
        let whole = wall_set(&t, &p, &Interval::closed(q(1, 4), int(3)).unwrap(), &b);
        let mut merged = wall_set(&t, &p, &Interval::closed(q(1, 4), cut.clone()).unwrap(), &b);
        merged.extend(wall_set(&t, &p, &Interval::closed(cut, int(3)).unwrap(), &b));
        prop_assert_eq!(whole, merged);
    }

    #[test]
    fn destabilizers_are_constant_on_chambers((p, t) in instance_strategy()) {
        let b = SearchBounds::new(1, FilterLevel::ASideBogomolov).unwrap();
        let iv = Interval::closed(q(1, 2), int(2)).unwrap();
        let t_shadow = shadow_of(&p, &t);
        for cell in chamber_decomposition(&t, &p, &iv, &b).unwrap() {
            let ChamberCell::Chamber { lo_sq, hi_sq: Some(hi_sq) } = cell else { continue };
            let width = &hi_sq - &lo_sq;
            let m1 = sqrt_upper(&(&lo_sq + &width / int(4)), 40);
            let m2 = sqrt_lower(&(&lo_sq + &width * q(3, 4)), 40);
            if !(&m1 * &m1 > lo_sq && &m2 * &m2 < hi_sq && m1 < m2) {
                continue;
            }
            let d1 = destabilizers_at(&t_shadow, &p, &iv, &m1, &b).unwrap();
            let d2 = destabilizers_at(&t_shadow, &p, &iv, &m2, &b).unwrap();
            prop_assert_eq!(d1, d2);
        }
    }

    #[test]
    fn enumeration_is_deterministic_across_thread_counts((p, t) in instance_strategy()) {
        let b = SearchBounds::new(2, FilterLevel::HeartOnly).unwrap();
        let iv = Interval::closed(q(1, 2), int(2)).unwrap();
        let default = enumerate_candidates(&t, &p, &b, &iv).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| enumerate_candidates(&t, &p, &b, &iv).unwrap());
        prop_assert_eq!(default, single);
    }

    #[test]
    fn classical_walls_sign_symmetry_and_duality(rk in prop_oneof![-4i64..=-2, 2i64..=4],
                                                c1 in prop::collection::vec(-2i64..=2, 2), c2 in -2i64..=6) {
        let l = LatticeModel::p1xp1();
        let t = CharVec::from_c2(rk, ClassVec::from_ints(&c1), int(c2), &l).unwrap();
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let xi = ClassVec::from_ints(&[a, b]);
                for s in 1..rk.abs() {
                    let ok = xi_admissible(&xi, s, &t, &l).unwrap();
                    prop_assert_eq!(ok, xi_admissible(&xi.neg(), rk.abs() - s, &t, &l).unwrap());
                    if ok {
                        prop_assert!(dual_wall_equivalence(&xi, s, &t, &l).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn classical_walls_grow_with_the_region(rk in 2i64..=4, c1 in prop::collection::vec(-2i64..=2, 2), c2 in 0i64..=6,
                                            mid in 1i64..=4) {
        let l = LatticeModel::p1xp1();
        let t = CharVec::from_c2(rk, ClassVec::from_ints(&c1), int(c2), &l).unwrap();
        let inner = Segment { from: ClassVec::from_ints(&[mid, 2]), to: ClassVec::from_ints(&[2, mid]) };
        let outer = Segment { from: ClassVec::from_ints(&[mid + 3, 1]), to: ClassVec::from_ints(&[1, mid + 3]) };
        let small = walls_through_region(&t, &l, &inner, 6).unwrap();
        let big = walls_through_region(&t, &l, &outer, 6).unwrap();
        for w in &small.walls {
            prop_assert!(big.walls.iter().any(|v| v.xi == w.xi));
        }
    }
}
