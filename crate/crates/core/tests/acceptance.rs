//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use pencil_core::basechange::{
    compose, horikawa_shift, isotriviality_invariants, pullback_ledger, stabilizing_invariants, BaseChangeInvariants,
    BaseChangeSpec, BranchEntry, FiberRef, FiberSummary, FibrationLedger,
};
use pencil_core::checks::{canonical_class_checks, fiber_checks, CheckStatus};
use pencil_core::curvealg::{local_invariants, parse_germ};
use pencil_core::exact::{bracket, lcm};
use pencil_core::fiber::{kodaira_elliptic, standard_configuration, KodairaType};
use pencil_core::fiber::{analyze, analyze_at_degree, numeric_basics, resolve_fiber, FiberConfig};
use pencil_core::quotsing::{k2_phi, node_chains, resolve_cyclic};
use pencil_core::sstable::verify_remark_beta;
use pencil_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config(text: &str) -> FiberConfig {
    FiberConfig::from_json(text).unwrap()
}

fn cusp() -> FiberConfig {
    config(
        r#"{"components": [{"id": "C", "multiplicity": 1, "geometric_genus": 2}],
            "singular_points": [{"kind": "germ", "local_equation": "x^2+y^3", "branch_map": ["C"]}]}"#,
    )
}

fn double() -> FiberConfig {
    config(r#"{"components": [{"id": "C", "multiplicity": 2, "geometric_genus": 2}]}"#)
}

fn criterion1() -> Outcome {
    let a = analyze(&cusp()).map_err(|e| e.to_string())?;
    let fi = &a.invariants;
    let got = (fi.c1sq.clone(), fi.c2.clone(), fi.chi.clone(), fi.c_minus1.clone());
    ensure(got == (r("1/6"), r("11/6"), r("1/6"), r("5/6")), || format!("got {got:?}"))?;
    let beta = verify_remark_beta(&a.resolved, &a.model);
    ensure(beta == Some(r("5/6")), || format!("beta sum {beta:?}"))?;
    Ok("c1^2=1/6 c2=11/6 chi=1/6 c_-1=5/6 beta-sum=5/6".into())
}

fn criterion2() -> Outcome {
    let a = analyze(&double()).map_err(|e| e.to_string())?;
    let fi = &a.invariants;
    let got = (fi.c1sq.clone(), fi.c2.clone(), fi.chi.clone());
    ensure(got == (r("4"), r("2"), r("1/2")), || format!("got {got:?}"))?;
    let rep = fiber_checks(&a);
    let e = rep.get("c1sq_le_2c2").ok_or("no c1sq_le_2c2 entry")?;
    ensure(e.status == CheckStatus::EqualityAttained, || format!("status {}", e.status))?;
    ensure(e.note.contains("confirmed"), || format!("equality not structurally confirmed: {}", e.note))?;
    Ok("c1^2=4 c2=2 chi=1/2, c1^2 = 2 c2 attained".into())
}

fn criterion3() -> Outcome {
    let cusp = FiberSummary::from_analysis(&analyze(&cusp()).map_err(|e| e.to_string())?, None);
    let double = FiberSummary::from_analysis(&analyze(&double()).map_err(|e| e.to_string())?, None);
    // the shift is affine in H, so two sample points pin it down
    for h in [r("0"), r("1"), r("-7/3")] {
        let a = horikawa_shift(&h, &cusp, 6);
        ensure(a == r("6") * &h + r("2"), || format!("cusp: H={h} gives {a}"))?;
        let b = horikawa_shift(&h, &double, 2);
        ensure(b == r("2") * &h - r("5"), || format!("2C: H={h} gives {b}"))?;
    }
    Ok("6H+2 and 2H-5".into())
}

fn criterion4() -> Outcome {
    for m in 1..=3 {
        for b in 0..=5 {
            let t = KodairaType::I { m, b };
            let e = kodaira_elliptic(&t);
            ensure(e.c1sq.is_zero() && e.c2.is_zero() && e.chi.is_zero(), || format!("{t}: {e:?}"))?;
        }
    }
    for b in 1..=5 {
        let t = KodairaType::IStar(b);
        let e = kodaira_elliptic(&t);
        ensure((e.c1sq.clone(), e.c2.clone(), e.chi.clone()) == (r("0"), r("6"), r("1/2")), || {
            format!("{t}: {e:?}")
        })?;
    }
    let others = KodairaType::others();
    for t in &others {
        let cfg = standard_configuration(t);
        let rf = resolve_fiber(&cfg).map_err(|e| format!("{t}: {e}"))?;
        let euler = numeric_basics(&cfg, &rf).map_err(|e| format!("{t}: {e}"))?.e;
        ensure(euler == t.euler_number(), || format!("{t}: engine e_F = {euler}"))?;
        let e = kodaira_elliptic(t);
        let want = (r("0"), Rational::from(euler), Rational::new(euler, 12u64));
        ensure((e.c1sq.clone(), e.c2.clone(), e.chi.clone()) == want, || format!("{t}: {e:?}"))?;
    }
    Ok(format!("mI_b, I*_b and {} other types", others.len()))
}

fn criterion5() -> Outcome {
    let mut n_checked = 0;
    for k in 2..=4u64 {
        for a in 1..=3u64 {
            for b in 1..=3u64 {
                let eq = format!("x^{a}*(x+y^{k})^{b}");
                let inv = local_invariants(&parse_germ(&eq).map_err(|e| e.to_string())?).map_err(|e| format!("{eq}: {e}"))?;
                let beta = Rational::one() - Rational::new(1u64, k)
                    + bracket(a, k * (a + b)).unwrap()
                    + bracket(b, k * (a + b)).unwrap();
                ensure(inv.alpha == k - 1 && inv.mu == 2 * k - 1 && inv.beta == beta, || {
                    format!("{eq}: alpha={} mu={} beta={} (want beta {beta})", inv.alpha, inv.mu, inv.beta)
                })?;
                n_checked += 1;
            }
        }
    }
    for k in 1..=4u64 {
        for n in 1..=3u64 {
            let eq = format!("(x^2+y^{})^{n}", 2 * k + 1);
            let inv = local_invariants(&parse_germ(&eq).map_err(|e| e.to_string())?).map_err(|e| format!("{eq}: {e}"))?;
            let beta = r("3/2") * (Rational::one() - Rational::new(1u64, 2 * k + 1));
            ensure(inv.alpha == k && inv.mu == 2 * k && inv.beta == beta, || {
                format!("{eq}: alpha={} mu={} beta={}", inv.alpha, inv.mu, inv.beta)
            })?;
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} germs"))
}

fn criterion6(corpus: &[common::Generated]) -> Outcome {
    ensure(corpus.len() >= 50, || format!("only {} fibers", corpus.len()))?;
    let mut germs = 0;
    for (i, g) in corpus.iter().enumerate() {
        let fi = &g.analysis.invariants;
        let b = &g.analysis.basics;
        let tag = || format!("fiber {i} {}", g.cfg.to_json());
        ensure(r("12") * &fi.chi == &fi.c1sq + &fi.c2, || format!("{}: Noether", tag()))?;
        ensure(!fi.c2.is_negative() && fi.c2 <= Rational::from(fi.e), || format!("{}: c2 range", tag()))?;
        ensure(fi.c1sq <= r("2") * &fi.c2, || format!("{}: c1^2 <= 2 c2", tag()))?;
        ensure(fi.c1sq <= Rational::from(4 * fi.genus as i64 - 4), || format!("{}: c1^2 <= 4g-4", tag()))?;
        ensure((b.alpha_total as i64) <= 2 * b.pa_red, || format!("{}: sum alpha <= 2 p_a", tag()))?;
        let zero = fi.c1sq.is_zero() && fi.c2.is_zero() && fi.chi.is_zero();
        ensure(zero == fi.semistable, || format!("{}: vanishing vs semistable", tag()))?;
        for p in &g.analysis.resolved.points {
            let inv = &p.invariants;
            ensure(Rational::from(inv.alpha) + &inv.beta <= Rational::from(inv.mu), || {
                format!("{}: alpha+beta <= mu", tag())
            })?;
            ensure(inv.mu as i64 == 2 * inv.delta as i64 - inv.k as i64 + 1, || format!("{}: mu = 2 delta - k + 1", tag()))?;
            germs += 1;
        }
    }
    let semistable = corpus.iter().filter(|g| g.analysis.invariants.semistable).count();
    Ok(format!("{} fibers ({semistable} semistable), {germs} points", corpus.len()))
}

fn criterion7(corpus: &[common::Generated]) -> Outcome {
    let mut n = 0;
    for g in corpus {
        for p in &g.analysis.resolved.points {
            let (Some(germ), Some(report)) = (&p.germ, &p.report) else { continue };
            let m = report.lcm_multiplicity().map_err(|e| e.to_string())?;
            for d in [m, 2 * m] {
                if d < 2 {
                    continue;
                }
                let k2 = k2_phi(germ, d).map_err(|e| e.to_string())?;
                let alpha = -k2 / Rational::from(d);
                ensure(alpha == Rational::from(p.invariants.alpha), || {
                    format!("{}: d={d} gives {alpha}, alpha={}", germ.equation(), p.invariants.alpha)
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} germ/degree pairs"))
}

fn criterion8() -> Outcome {
    let mut pairs = 0;
    for d in 2..=12u64 {
        let c = resolve_cyclic(d, 1, 1).map_err(|e| e.to_string())?;
        ensure(c.chains == vec![vec![-2; d as usize - 1]] && c.k2.is_zero(), || format!("d={d}: {c:?}"))?;
        let divisors: Vec<u64> = (1..=d).filter(|a| d % a == 0).collect();
        for &a in &divisors {
            for &b in &divisors {
                let (count, len) = node_chains(d, a, b).map_err(|e| e.to_string())?;
                let c = resolve_cyclic(d, a, b).map_err(|e| e.to_string())?;
                let ok = c.chains.len() as u64 == count
                    && c.chains.iter().all(|ch| ch.len() as u64 == len && ch.iter().all(|&s| s == -2));
                ensure(ok, || format!("d={d} a={a} b={b}: node_chains ({count},{len}) vs {:?}", c.chains))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("A_(d-1) for d=2..12, {pairs} divisor pairs"))
}

fn criterion9(corpus: &[common::Generated]) -> Outcome {
    for (i, g) in corpus.iter().enumerate() {
        let m = g.analysis.resolved.m;
        let a = analyze_at_degree(&g.cfg, Some(m)).map_err(|e| format!("fiber {i} at {m}: {e}"))?;
        let b = analyze_at_degree(&g.cfg, Some(2 * m)).map_err(|e| format!("fiber {i} at {}: {e}", 2 * m))?;
        ensure(a.invariants == b.invariants, || format!("fiber {i}: invariants differ between d={m} and d={}", 2 * m))?;
    }
    Ok(format!("{} fibers at M and 2M", corpus.len()))
}

/// A ledger around the given fibers with positive isotriviality invariants.
fn synthetic_ledger(rng: &mut ChaCha8Rng, g: u64, fibers: Vec<FiberSummary>) -> FibrationLedger {
    let sum_k: Rational = fibers.iter().map(|f| &f.c1sq).sum();
    let sum_chi: Rational = fibers.iter().map(|f| &f.chi).sum();
    let i_chi = Rational::from(rng.random_range(1..=20u64));
    let i_k = &i_chi * Rational::new(rng.random_range(0..=96u64), 8u64);
    let chi = sum_chi + &i_chi;
    let k2 = sum_k + i_k;
    let e = r("12") * &chi - &k2;
    FibrationLedger::new(g, rng.random_range(0..=3), k2, chi, e, fibers).unwrap()
}

fn criterion10(corpus: &[common::Generated]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pool: Vec<&common::Generated> = corpus
        .iter()
        .filter(|g| g.analysis.invariants.genus >= 2 && !g.analysis.invariants.semistable)
        .collect();
    ensure(!pool.is_empty(), || "no non-semistable fibers of genus >= 2".into())?;
    let mut ledgers = 0;
    for _ in 0..40 {
        let g = pool[rng.random_range(0..pool.len())].analysis.invariants.genus;
        let same: Vec<&&common::Generated> = pool.iter().filter(|x| x.analysis.invariants.genus == g).collect();
        let nf = rng.random_range(1..=3.min(same.len()));
        let fibers: Vec<FiberSummary> = (0..nf)
            .map(|_| FiberSummary::from_analysis(&same[rng.random_range(0..same.len())].analysis, None))
            .collect();
        let m = fibers.iter().fold(1, |acc, f| lcm(acc, f.m).unwrap());
        let d = m * rng.random_range(1..=2u64);
        let ledger = synthetic_ledger(&mut rng, g, fibers);
        // total ramification, or two points of index d/2 where M_F still divides
        let mut spec = BaseChangeSpec::totally_ramified(d, &(0..nf).collect::<Vec<_>>());
        for br in spec.branch.iter_mut() {
            if let FiberRef::Index(i) = br.fiber {
                if d % 2 == 0 && (d / 2) % ledger.fibers[i].m == 0 && rng.random_bool(0.5) {
                    br.profile = vec![d / 2, d / 2];
                }
            }
        }
        if spec.covering_euler(ledger.b) % 2 != 0 {
            spec.branch.push(BranchEntry {
                fiber: FiberRef::Smooth,
                profile: std::iter::once(2).chain(std::iter::repeat_n(1, d as usize - 2)).collect(),
                pullback: vec![],
            });
        }
        let bc = stabilizing_invariants(&ledger, &spec).map_err(|e| e.to_string())?;
        ensure(bc.stabilizing, || "oracle base change is not stabilizing".into())?;
        let pulled = pullback_ledger(&ledger, &spec).map_err(|e| e.to_string())?;
        let (a, b) = (
            isotriviality_invariants(&ledger).map_err(|e| e.to_string())?,
            isotriviality_invariants(&pulled).map_err(|e| e.to_string())?,
        );
        let dq = Rational::from(d);
        ensure(b.i_k == &dq * &a.i_k && b.i_chi == &dq * &a.i_chi && b.i_e == &dq * &a.i_e, || {
            format!("d={d}: {a:?} -> {b:?}")
        })?;
        ledgers += 1;
    }
    let random_bc = |rng: &mut ChaCha8Rng| {
        let q = |rng: &mut ChaCha8Rng| Rational::new(rng.random_range(0..=60u64), rng.random_range(1..=12u64));
        let (k2, chi) = (q(rng), q(rng));
        let e = r("12") * &chi - &k2;
        BaseChangeInvariants::new(rng.random_range(1..=6), k2, e, chi, rng.random_bool(0.7))
    };
    for _ in 0..200 {
        let (x, y, z) = (random_bc(&mut rng), random_bc(&mut rng), random_bc(&mut rng));
        let left = compose(&compose(&x, &y), &z);
        let right = compose(&x, &compose(&y, &z));
        ensure(left == right, || format!("compose not associative on {x:?} {y:?} {z:?}"))?;
    }
    Ok(format!("{ledgers} pullbacks scale by d, 200 associativity triples"))
}

/// Status an inequality `lhs <= rhs` should get.
fn expected_le(lhs: &Rational, rhs: &Rational) -> CheckStatus {
    match lhs.cmp(rhs) {
        std::cmp::Ordering::Less => CheckStatus::Pass,
        std::cmp::Ordering::Equal => CheckStatus::EqualityAttained,
        std::cmp::Ordering::Greater => CheckStatus::Fail,
    }
}

fn criterion11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut statuses = std::collections::BTreeSet::new();
    for _ in 0..300 {
        let g = rng.random_range(2..=5u64);
        let b = rng.random_range(0..=3u64);
        let s = rng.random_range(0..=6u64);
        let k2 = Rational::from(rng.random_range(1..=(8 * (g - 1) * (g - 1) * (2 * b + s + 2))));
        let chi = &k2 / r("4") + Rational::from(rng.random_range(0..=10u64));
        let e = r("12") * &chi - &k2;
        let mut l = FibrationLedger::new(g, b, k2.clone(), chi, e, vec![]).unwrap();
        l.s = s;
        let rep = canonical_class_checks(&l);
        let (gi, bi, si) = (g as i64, b as i64, s as i64);
        let cc = rep.get("canonical_class").ok_or("no canonical_class entry")?;
        let mut want = expected_le(&k2, &Rational::from((2 * gi - 2) * (2 * bi - 2 + 3 * si)));
        if want == CheckStatus::EqualityAttained && s > 0 {
            want = CheckStatus::Fail;
        }
        ensure(cc.status == want && !cc.is_conditional(), || format!("canonical_class: {cc:?}"))?;
        let base = 2 * bi - 2 + si;
        let vojta = expected_le(&k2, &Rational::from((2 * gi - 2) * base));
        let szpiro = if k2 < Rational::from(4 * gi * (gi - 1) * base) { CheckStatus::Pass } else { CheckStatus::Fail };
        let ev = expected_le(&k2, &Rational::from(8 * (gi - 1) * (gi - 1) * base));
        for (id, want) in [("vojta", vojta), ("szpiro", szpiro), ("esnault_viehweg", ev)] {
            let got = rep.get(id).ok_or_else(|| format!("no {id} entry"))?;
            ensure(got.status == want, || format!("{id}: {got:?}, want {want}"))?;
            statuses.insert((id, want == CheckStatus::Fail));
        }
        ensure(rep.failed() == (cc.status == CheckStatus::Fail || [vojta, szpiro, ev].contains(&CheckStatus::Fail)), || {
            "report verdict".into()
        })?;
    }
    ensure(statuses.len() == 6, || format!("random ledgers did not exercise both outcomes: {statuses:?}"))?;
    // a non-semistable ledger skips the semistable comparisons
    let cusp = FiberSummary::from_analysis(&analyze(&cusp()).unwrap(), None);
    let l = FibrationLedger::new(3, 1, r("10"), r("2"), r("14"), vec![cusp]).unwrap();
    let rep = canonical_class_checks(&l);
    ensure(rep.get("vojta").is_none() && !rep.skipped.is_empty(), || "vojta evaluated on a non-semistable ledger".into())?;
    Ok("300 synthetic ledgers".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (corpus, rejected) = common::corpus(2024, 60);
    let results: Vec<(usize, Outcome)> = vec![
        (1, criterion1()),
        (2, criterion2()),
        (3, criterion3()),
        (4, criterion4()),
        (5, criterion5()),
        (6, criterion6(&corpus)),
        (7, criterion7(&corpus)),
        (8, criterion8()),
        (9, criterion9(&corpus)),
        (10, criterion10(&corpus)),
        (11, criterion11()),
    ];
    let mut failed = 0;
    for (n, res) in &results {
        match res {
            Ok(msg) => println!("criterion {n:>2}: PASS  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {msg}");
            }
        }
    }
    let elapsed = start.elapsed();
    println!("corpus rejections: {rejected:?}");
    println!("{} passed, {failed} failed in {:.2}s", results.len() - failed, elapsed.as_secs_f64());
    if failed > 0 || elapsed.as_secs() >= 10 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
