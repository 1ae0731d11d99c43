//! Property suites shared by the `properties` and `acceptance` targets.
//!
//! Each suite runs `cases` randomized cases and returns a description of the
//! first (shrunk) failure.

#![allow(dead_code)]

use broken_stick::arith::{AffineBound, ArithOp, Polynomial, Rational};
use broken_stick::mc::{
    count_below_half, ordered_constraints_hold, polygon_feasible, sample_breaks, worker_rng, BreakSample,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const CASES: u32 = 1000;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=24).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn polynomial(max_len: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(Polynomial::new)
}

fn is_canonical_poly(p: &Polynomial) -> bool {
    p.coeffs().last().is_none_or(|c| !c.is_zero()) && p.coeffs().iter().all(Rational::is_canonical)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

pub fn rational_canonicality(cases: u32) -> Result<(), String> {
    check(
        cases,
        (rational(), rational(), nonzero_rational()),
        |(a, b, c)| {
            for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul] {
                let x = a.apply(op, &b).unwrap();
                prop_assert!(x.is_canonical());
                if x.is_zero() {
                    prop_assert_eq!(x.to_string(), "0/1");
                }
            }
            let q = a.apply(ArithOp::Div, &c).unwrap();
            prop_assert!(q.is_canonical());
            prop_assert_eq!(&q * &c, a.clone());
            prop_assert!(a.apply(ArithOp::Div, &Rational::zero()).is_err());
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
            Ok(())
        },
    )
}

pub fn polynomial_ring_axioms(cases: u32) -> Result<(), String> {
    check(
        cases,
        (polynomial(8), polynomial(8), polynomial(8)),
        |(p, q, r)| {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            let same = p.clone();
            prop_assert_eq!(&p - &same, Polynomial::zero());
            let prod = &p * &q;
            prop_assert!(is_canonical_poly(&prod) && is_canonical_poly(&(&p + &q)));
            if let (Some(dp), Some(dq)) = (p.degree(), q.degree()) {
                prop_assert_eq!(prod.degree(), Some(dp + dq));
            }
            Ok(())
        },
    )
}

pub fn antiderivative_round_trip(cases: u32) -> Result<(), String> {
    // degree up to 12
    check(cases, polynomial(13), |p| {
        let f = p.antiderivative();
        prop_assert_eq!(f.derivative(), p);
        prop_assert!(f.eval(&Rational::zero()).is_zero());
        prop_assert!(is_canonical_poly(&f));
        Ok(())
    })
}

pub fn affine_composition_laws(cases: u32) -> Result<(), String> {
    let inputs = (
        polynomial(8),
        rational(),
        rational(),
        rational(),
        rational(),
        rational(),
    );
    check(cases, inputs, |(p, a, b, a2, b2, x)| {
        prop_assert_eq!(p.compose_affine(&Rational::zero(), &Rational::one()), p.clone());
        let twice = p.compose_affine(&a, &b).compose_affine(&a2, &b2);
        let once = p.compose_affine(&(&a + &(&b * &a2)), &(&b * &b2));
        prop_assert_eq!(twice, once);
        let q = p.compose_affine(&a, &b);
        prop_assert_eq!(q.eval(&x), p.eval(&(&a + &(&b * &x))));
        if !b.is_zero() {
            prop_assert_eq!(q.degree(), p.degree());
        }
        Ok(())
    })
}

pub fn definite_integral_consistency(cases: u32) -> Result<(), String> {
    let inputs = (
        polynomial(8),
        rational(),
        rational(),
        rational(),
        rational(),
        rational(),
    );
    check(cases, inputs, |(p, lo, ls, hi, hs, x)| {
        let f = p.antiderivative();
        let constant = p.definite_integral(
            &AffineBound::constant(lo.clone()),
            &AffineBound::constant(hi.clone()),
        );
        prop_assert_eq!(constant.as_constant(), Some(f.eval(&hi) - f.eval(&lo)));

        let lower = AffineBound::new(lo, ls);
        let upper = AffineBound::new(hi, hs);
        let layer = p.definite_integral(&lower, &upper);
        prop_assert_eq!(layer.eval(&x), f.eval(&upper.eval(&x)) - f.eval(&lower.eval(&x)));
        Ok(())
    })
}

pub fn feasibility_permutation_invariance(cases: u32) -> Result<(), String> {
    let pieces = prop::collection::vec(0.0f64..1.0, 3..10).prop_map(|v| {
        let total: f64 = v.iter().sum();
        v.into_iter().map(|x| x / total).collect::<Vec<_>>()
    });
    check(cases, (pieces, any::<u64>()), |(pieces, perm_seed)| {
        let mut shuffled = pieces.clone();
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut worker_rng(perm_seed, 0));
        prop_assert_eq!(polygon_feasible(&pieces), polygon_feasible(&shuffled));
        let mut reversed = pieces.clone();
        reversed.reverse();
        prop_assert_eq!(polygon_feasible(&pieces), polygon_feasible(&reversed));
        Ok(())
    })
}

/// Both forms of the polygon condition on freshly sampled trials, 50 per case.
pub fn predicate_agreement(cases: u32) -> Result<(), String> {
    check(cases, (2u32..12, any::<u64>()), |(n, seed)| {
        let mut rng = worker_rng(seed, 0);
        for _ in 0..50 {
            let s = sample_breaks(n, &mut rng);
            let feasible = polygon_feasible(&s.piece_lengths);
            prop_assert_eq!(feasible, ordered_constraints_hold(&s.sorted_points));
            let sum: f64 = s.piece_lengths.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 8.0 * f64::EPSILON);
            if feasible {
                let k = count_below_half(&s.sorted_points);
                prop_assert!(k >= 1 && k < n as usize);
            }
        }
        Ok(())
    })
}

pub fn below_half_count_order_free(cases: u32) -> Result<(), String> {
    check(cases, prop::collection::vec(0.0f64..1.0, 2..10), |points| {
        let s = BreakSample::from_points(points.clone());
        prop_assert_eq!(
            count_below_half(&s.sorted_points),
            points.iter().filter(|&&x| x < 0.5).count()
        );
        Ok(())
    })
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const SUITES: [Suite; 8] = [
    ("rational canonicality", rational_canonicality),
    ("polynomial ring axioms", polynomial_ring_axioms),
    ("antiderivative/derivative round trip", antiderivative_round_trip),
    ("affine composition laws", affine_composition_laws),
    ("definite integral consistency", definite_integral_consistency),
    (
        "feasibility permutation invariance",
        feasibility_permutation_invariance,
    ),
    ("max-piece vs ordered predicate agreement", predicate_agreement),
    ("below-half count order independence", below_half_count_order_free),
];
