mod common;

use pencil_core::basechange::{
    compose, stabilizing_invariants, BaseChangeInvariants, BaseChangeSpec, FiberSummary, FibrationLedger,
};
use pencil_core::curvealg::{intersection_multiplicity, local_invariants, parse_germ, BivariatePoly};
use pencil_core::exact::gcd;
use pencil_core::sstable::verify_remark_beta;
use pencil_core::Rational;
use proptest::prelude::*;

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn rat(n: i64, d: u64) -> Rational {
    Rational::new(n, d)
}

/// Order in `t` of `f(x(t), y(t))` for monomial-plus-series parametrizations.
fn order_along(f: &BivariatePoly, x: &[(u32, i64)], y: &[(u32, i64)]) -> Option<u32> {
    // truncated power series in t as coefficient vectors
    const N: usize = 64;
    let series = |terms: &[(u32, i64)]| {
        let mut s = vec![Rational::zero(); N];
        for &(e, c) in terms {
            s[e as usize] += Rational::from(c);
        }
        s
    };
    let mul = |a: &[Rational], b: &[Rational]| {
        let mut out = vec![Rational::zero(); N];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().take(N - i) {
                out[i + j] += ai * bj;
            }
        }
        out
    };
    let pow = |s: &[Rational], k: u32| {
        let mut acc = vec![Rational::zero(); N];
        acc[0] = Rational::one();
        for _ in 0..k {
            acc = mul(&acc, s);
        }
        acc
    };
    let (xs, ys) = (series(x), series(y));
    let mut total = vec![Rational::zero(); N];
    for (&(i, j), c) in f.terms() {
        let term = mul(&pow(&xs, i), &pow(&ys, j));
        for (k, v) in term.into_iter().enumerate() {
            total[k] += c * &v;
        }
    }
    total.iter().position(|c| !c.is_zero()).map(|p| p as u32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn corpus_fiber_invariants(seed in any::<u64>()) {
        let g = common::random_fiber(seed);
        let fi = &g.analysis.invariants;
        prop_assert_eq!(r("12") * &fi.chi, &fi.c1sq + &fi.c2);
        prop_assert!(!fi.c1sq.is_negative() && !fi.c2.is_negative());
        prop_assert!(fi.c1sq <= r("2") * &fi.c2);
        prop_assert!(fi.c2 <= Rational::from(fi.e));
        let cover = &g.analysis.model.cover;
        prop_assert_eq!(cover.arithmetic_genus(), fi.genus as i64);
        if let Some(beta) = verify_remark_beta(&g.analysis.resolved, &g.analysis.model) {
            prop_assert_eq!(beta, fi.c_minus1.clone());
        }
    }

    #[test]
    fn local_invariant_relations(
        picks in proptest::sample::subsequence((0..common::BRANCHES.len()).collect::<Vec<_>>(), 1..=3),
        mults in proptest::collection::vec(1u64..=2, 3),
    ) {
        let eq: Vec<String> = picks
            .iter()
            .zip(&mults)
            .map(|(&b, &m)| format!("({})^{m}", common::BRANCHES[b].0))
            .collect();
        let germ = parse_germ(&eq.join("*")).unwrap();
        let inv = local_invariants(&germ).unwrap();
        prop_assert_eq!(inv.mu as i64, 2 * inv.delta as i64 - inv.k as i64 + 1);
        prop_assert!(Rational::from(inv.alpha) + &inv.beta <= Rational::from(inv.mu));
        prop_assert_eq!(inv.k, picks.len() as u64);
    }

    #[test]
    fn intersection_matches_parametrization(
        (p, q) in (1u32..=5, 1u32..=5).prop_filter("coprime", |(p, q)| gcd(*p as u64, *q as u64) == 1),
        (a, b) in (1u32..=4, 1u32..=4),
        c in -3i64..=3,
        e in 1u32..=4,
    ) {
        // f = x^p - y^q has the branch (t^q, t^p); g = x^a - c y^b - y^(b+e)
        // is cut along it
        let f = BivariatePoly::monomial(Rational::one(), p, 0).sub(&BivariatePoly::monomial(Rational::one(), 0, q));
        let g = BivariatePoly::monomial(Rational::one(), a, 0)
            .sub(&BivariatePoly::monomial(Rational::from(c), 0, b))
            .sub(&BivariatePoly::monomial(Rational::one(), 0, b + e));
        let oracle = order_along(&g, &[(q, 1)], &[(p, 1)]);
        match intersection_multiplicity(&f, &g) {
            Ok(i) => prop_assert_eq!(Some(i as u32), oracle),
            Err(_) => prop_assert_eq!(oracle, None),
        }
    }

    #[test]
    fn smooth_branch_against_cusp(k in 1u32..=4, n in 1u32..=6, c in 1i64..=3) {
        // smooth branch y = c x^k against the cusp-like x^2 - y^(2n+1)
        let branch = BivariatePoly::y().sub(&BivariatePoly::monomial(Rational::from(c), k, 0));
        let other = BivariatePoly::monomial(Rational::one(), 2, 0).sub(&BivariatePoly::monomial(Rational::one(), 0, 2 * n + 1));
        let oracle = order_along(&other, &[(1, 1)], &[(k, c)]).unwrap();
        prop_assert_eq!(intersection_multiplicity(&branch, &other).unwrap() as u32, oracle);
    }

    #[test]
    fn base_change_noether_and_slope(seed in any::<u64>(), factor in 1u64..=3) {
        let g = common::random_fiber(seed);
        prop_assume!(g.analysis.invariants.genus >= 2);
        let f = FiberSummary::from_analysis(&g.analysis, None);
        let sum = |v: &Rational| v + Rational::from(10);
        let (k2, chi) = (sum(&f.c1sq), sum(&f.chi));
        let e = r("12") * &chi - &k2;
        let ledger = FibrationLedger::new(g.analysis.invariants.genus, 1, k2, chi, e, vec![f.clone()]).unwrap();
        let bc = stabilizing_invariants(&ledger, &BaseChangeSpec::totally_ramified(f.m * factor, &[0])).unwrap();
        prop_assert_eq!(r("12") * &bc.chi_pi, &bc.k2_pi + &bc.e_pi);
        prop_assert!(bc.k2_pi <= r("8") * &bc.chi_pi);
        prop_assert!(bc.stabilizing);
        prop_assert_eq!((bc.k2_pi, bc.e_pi, bc.chi_pi), (f.c1sq, f.c2, f.chi));
    }

    #[test]
    fn compose_is_associative(
        v in proptest::collection::vec((1u64..=5, 0i64..=40, 1u64..=12, 0i64..=40, 1u64..=12, any::<bool>()), 3),
    ) {
        let bc: Vec<BaseChangeInvariants> = v
            .iter()
            .map(|&(d, kn, kd, cn, cd, s)| {
                let (k2, chi) = (rat(kn, kd), rat(cn, cd));
                let e = r("12") * &chi - &k2;
                BaseChangeInvariants::new(d, k2, e, chi, s)
            })
            .collect();
        let left = compose(&compose(&bc[0], &bc[1]), &bc[2]);
        let right = compose(&bc[0], &compose(&bc[1], &bc[2]));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(r("12") * &left.chi_pi, &left.k2_pi + &left.e_pi);
        prop_assert_eq!(compose(&bc[0], &BaseChangeInvariants::identity()), bc[0].clone());
    }
}

#[test]
fn parametrization_oracle_on_known_pair() {
    let f = parse_germ("x^2+y^3").unwrap().equation();
    let g = parse_germ("x^2-y^3").unwrap().equation();
    // x = t^3, y = -t^2 lies on f
    assert_eq!(order_along(&g, &[(3, 1)], &[(2, -1)]), Some(6));
    assert_eq!(intersection_multiplicity(&f, &g).unwrap(), 6);
}
