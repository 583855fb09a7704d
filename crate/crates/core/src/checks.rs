//! Inequalities and equality characterizations evaluated on computed
//! invariants, each with a named verdict.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::basechange::{isotriviality_invariants, FibrationLedger};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::fiber::{FiberAnalysis, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    EqualityAttained,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::EqualityAttained => "equality-attained",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub status: CheckStatus,
    pub lhs: Rational,
    pub rhs: Rational,
    pub note: String,
    /// Hypothesis the claim needs that is not verified here; a failing
    /// conditional check does not make the report fail.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
}

impl CheckEntry {
    pub fn is_conditional(&self) -> bool {
        self.hypothesis.is_some()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
    /// Checks that could not be evaluated, with the reason.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl CheckReport {
    /// True iff some unconditional check failed.
    pub fn failed(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.status == CheckStatus::Fail && !e.is_conditional())
    }

    pub fn get(&self, id: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
        self.skipped.extend(other.skipped);
    }

    fn push(&mut self, id: &str, status: CheckStatus, lhs: Rational, rhs: Rational, note: impl Into<String>) -> &mut CheckEntry {
        self.entries.push(CheckEntry {
            id: id.to_string(),
            status,
            lhs,
            rhs,
            note: note.into(),
            hypothesis: None,
        });
        self.entries.last_mut().unwrap()
    }

    /// `lhs <= rhs`; `0 <= 0` is reported as a plain pass when `quiet_zero`.
    fn le(&mut self, id: &str, lhs: Rational, rhs: Rational, note: impl Into<String>, quiet_zero: bool) -> &mut CheckEntry {
        let status = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => CheckStatus::Pass,
            std::cmp::Ordering::Equal if quiet_zero && lhs.is_zero() => CheckStatus::Pass,
            std::cmp::Ordering::Equal => CheckStatus::EqualityAttained,
            std::cmp::Ordering::Greater => CheckStatus::Fail,
        };
        self.push(id, status, lhs, rhs, note)
    }

    fn lt(&mut self, id: &str, lhs: Rational, rhs: Rational, note: impl Into<String>) -> &mut CheckEntry {
        let status = if lhs < rhs { CheckStatus::Pass } else { CheckStatus::Fail };
        self.push(id, status, lhs, rhs, note)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{:<34} {:<18} {} vs {}", e.id, e.status, e.lhs, e.rhs)?;
            if !e.note.is_empty() {
                write!(f, "  ({})", e.note)?;
            }
            if let Some(h) = &e.hypothesis {
                write!(f, "  [assumes {h}]")?;
            }
            writeln!(f)?;
        }
        for s in &self.skipped {
            writeln!(f, "{:<34} skipped: {s}", "")?;
        }
        Ok(())
    }
}

fn r(n: i64) -> Rational {
    Rational::from(n)
}

/// Whether the fiber is `n F_red` with `F_red` having only nodes.
fn is_multiple_of_nodal(a: &FiberAnalysis) -> bool {
    let mut mults = a
        .resolved
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Strict)
        .map(|v| v.multiplicity);
    let first = mults.next();
    mults.all(|n| Some(n) == first) && a.resolved.points.iter().all(|p| p.invariants.mu <= 1)
}

/// Whether every multiple component is a smooth rational curve of
/// self-intersection `-2` (vacuously true for reduced fibers).
fn multiples_are_minus_two(a: &FiberAnalysis) -> bool {
    a.resolved.vertices.iter().enumerate().all(|(i, v)| {
        v.kind != VertexKind::Strict
            || v.multiplicity == 1
            || (a.basics.component_pa[i] == 0 && a.basics.self_intersections[i] == -2)
    })
}

pub fn fiber_checks(a: &FiberAnalysis) -> CheckReport {
    let fi = &a.invariants;
    let mut rep = CheckReport::default();
    let four_g_minus_4 = r(4 * fi.genus as i64 - 4);

    rep.le("c1sq_nonnegative", r(0), fi.c1sq.clone(), "", true);
    rep.le("c2_nonnegative", r(0), fi.c2.clone(), "", true);

    let two_c2 = &fi.c2 * r(2);
    let equal = fi.c1sq == two_c2;
    let structural = is_multiple_of_nodal(a);
    let (status, note) = match (equal, structural) {
        (true, true) if fi.c1sq.is_zero() => (CheckStatus::Pass, "semistable"),
        (true, true) => (CheckStatus::EqualityAttained, "F = n F_red with only nodes, confirmed"),
        (false, false) => (CheckStatus::Pass, ""),
        (true, false) => (CheckStatus::Fail, "equality without F = n F_red nodal"),
        (false, true) => (CheckStatus::Fail, "F = n F_red nodal but no equality"),
    };
    let status = if fi.c1sq > two_c2 { CheckStatus::Fail } else { status };
    rep.push("c1sq_le_2c2", status, fi.c1sq.clone(), two_c2, note);

    rep.le("c1sq_le_4g_minus_4", fi.c1sq.clone(), four_g_minus_4, "", true);
    rep.le("c2_le_euler", fi.c2.clone(), r(fi.e as i64), "", true);

    let two_pa = r(2 * fi.pa_red);
    let alpha = r(fi.alpha_total as i64);
    let e = rep.le("alpha_le_2pa_red", alpha, two_pa, "", false);
    if e.status == CheckStatus::EqualityAttained && fi.pa_red != 0 {
        e.status = CheckStatus::Fail;
        e.note = "equality requires p_a(F_red) = 0".into();
    }

    if multiples_are_minus_two(a) {
        rep.le("c1sq_le_c2_minus2_multiples", fi.c1sq.clone(), fi.c2.clone(), "", true);
    } else {
        rep.skipped
            .push("c1sq_le_c2_minus2_multiples: a multiple component is not a (-2)-curve".into());
    }
    rep
}

const MAXIMAL_SLOPE: &str = "f has maximal slope in a base-change-closed family";

pub fn slope_checks(ledger: &FibrationLedger) -> CheckReport {
    let mut rep = CheckReport::default();
    let non_ss: Vec<(usize, &crate::basechange::FiberSummary)> =
        ledger.fibers.iter().enumerate().filter(|(_, f)| !f.is_semistable()).collect();
    let name = |i: usize| ledger.fibers[i].label.clone().unwrap_or_else(|| format!("#{i}"));

    for &(i, f) in &non_ss {
        match f.lambda() {
            Some(l) => {
                let status = if !l.is_positive() || l > r(8) {
                    CheckStatus::Fail
                } else if l == r(8) {
                    CheckStatus::EqualityAttained
                } else {
                    CheckStatus::Pass
                };
                rep.push("fiber_slope_in_0_8", status, l, r(8), format!("fiber {}", name(i)));
            }
            None => {
                rep.push("fiber_slope_in_0_8", CheckStatus::Fail, f.c1sq.clone(), r(8), format!("fiber {}: chi_F = 0", name(i)));
            }
        }
    }
    if !non_ss.is_empty() {
        let k2: Rational = non_ss.iter().map(|(_, f)| &f.c1sq).sum();
        let chi: Rational = non_ss.iter().map(|(_, f)| &f.chi).sum();
        rep.le("k2_pi_le_8chi_pi", k2, r(8) * chi, "canonical stabilizing change over all fibers", true);
    }

    let Some(lambda) = ledger.lambda() else {
        rep.skipped.push("slope checks: chi_f = 0".into());
        return rep;
    };
    let g = ledger.g as i64;
    rep.le("slope_lower_bound", Rational::new(4 * g - 4, g), lambda.clone(), "4 - 4/g <= lambda_f", false)
        .hypothesis = Some("f relatively minimal".into());
    if ledger.hyperelliptic {
        let den = g * g / 2;
        rep.le(
            "hyperelliptic_upper_bound",
            lambda.clone(),
            r(12) - Rational::new(4 * g + 2, den),
            "lambda_f <= 12 - (4g+2)/[g^2/2]",
            false,
        );
    }

    if lambda > r(8) {
        rep.push(
            "high_slope_semistable",
            if non_ss.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail },
            r(non_ss.len() as i64),
            r(0),
            "non-semistable fibers when lambda_f > 8",
        )
        .hypothesis = Some(MAXIMAL_SLOPE.into());
        if !non_ss.is_empty() {
            match isotriviality_invariants(ledger) {
                Ok(iso) if iso.i_chi.is_positive() => {
                    let s = &iso.i_k / &iso.i_chi;
                    let status = if s > lambda { CheckStatus::Pass } else { CheckStatus::Fail };
                    rep.push("stabilized_slope_increases", status, s, lambda.clone(), "semistable model slope > lambda_f");
                }
                Ok(_) => rep.skipped.push("stabilized_slope_increases: f is isotrivial".into()),
                Err(e) => rep.skipped.push(format!("stabilized_slope_increases: {e}")),
            }
        }
    }
    if lambda > r(6) {
        for &(i, f) in &non_ss {
            match f.multiple_non_minus2 {
                Some(flag) => {
                    rep.push(
                        "slope_gt_6_multiple_component",
                        if flag { CheckStatus::Pass } else { CheckStatus::Fail },
                        r(flag as i64),
                        r(1),
                        format!("fiber {} has a multiple component that is not a (-2)-curve", name(i)),
                    )
                    .hypothesis = Some(MAXIMAL_SLOPE.into());
                }
                None => rep.skipped.push(format!(
                    "slope_gt_6_multiple_component: components of fiber {} unknown",
                    name(i)
                )),
            }
        }
    }
    rep
}

pub fn canonical_class_checks(ledger: &FibrationLedger) -> CheckReport {
    let mut rep = CheckReport::default();
    let g = ledger.g as i64;
    let b = ledger.b as i64;
    let s = ledger.s as i64;
    let k2 = ledger.k2_f.clone();
    // K_f^2 > 0 already rules out a locally trivial fibration
    let trivial = if k2.is_positive() {
        None
    } else {
        Some("f non-trivial".to_string())
    };

    let e = rep.le("canonical_class", k2.clone(), r((2 * g - 2) * (2 * b - 2 + 3 * s)), "K^2 <= (2g-2)(2b-2+3s)", false);
    if e.status == CheckStatus::EqualityAttained && s > 0 {
        e.status = CheckStatus::Fail;
        e.note = "equality forces s = 0".into();
    }
    e.hypothesis = trivial.clone();

    if ledger.semistable {
        let base = 2 * b - 2 + s;
        rep.le("vojta", k2.clone(), r((2 * g - 2) * base), "K^2 <= (2g-2)(2b-2+s)", false)
            .hypothesis = trivial.clone();
        rep.lt("szpiro", k2.clone(), r(4 * g * (g - 1) * base), "K^2 < 4g(g-1)(2b-2+s)")
            .hypothesis = trivial.clone();
        rep.le("esnault_viehweg", k2.clone(), r(8 * (g - 1) * (g - 1) * base), "K^2 <= 8(g-1)^2(2b-2+s)", false)
            .hypothesis = trivial;
    } else {
        rep.skipped
            .push("vojta/szpiro/esnault_viehweg: ledger is not semistable".into());
    }

    let mut sum_m = Rational::zero();
    let mut ok = true;
    for (i, f) in ledger.fibers.iter().enumerate() {
        let types: Result<Vec<AdeType>> = f.ade.iter().map(|t| t.parse()).collect();
        match types {
            Ok(types) => {
                let m: Rational = types.iter().map(miyaoka_m).sum();
                if let Some(euler) = f.euler {
                    let (v, _) = delta_sharp(&r(euler as i64), &types, ledger.g);
                    rep.le(
                        "delta_sharp_bound",
                        v,
                        r(4 * g - 3),
                        format!("fiber {}", f.label.clone().unwrap_or_else(|| format!("#{i}"))),
                        false,
                    );
                }
                sum_m += m;
            }
            Err(e) => {
                ok = false;
                rep.skipped.push(format!("miyaoka_bound: {e}"));
            }
        }
    }
    if ok {
        let rhs = r(3) * &ledger.e_f - sum_m + r((2 * g - 2) * (2 * b - 2).max(0));
        rep.le("miyaoka_bound", k2, rhs, "K^2 <= 3 sum delta# + (2g-2) max(2b-2, 0)", false)
            .hypothesis = Some("S of general type".into());
    }
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AdeType {
    A(u64),
    D(u64),
    E6,
    E7,
    E8,
}

impl FromStr for AdeType {
    type Err = Error;

    /// `A1`, `A_3`, `D4`, `E8`, ...
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownAdeType(s.to_string());
        let t = s.trim();
        let (head, rest) = t.split_at(t.chars().next().ok_or_else(bad)?.len_utf8());
        let r: u64 = rest.trim_start_matches('_').parse().map_err(|_| bad())?;
        match (head, r) {
            ("A", r) if r >= 1 => Ok(AdeType::A(r)),
            ("D", r) if r >= 4 => Ok(AdeType::D(r)),
            ("E", 6) => Ok(AdeType::E6),
            ("E", 7) => Ok(AdeType::E7),
            ("E", 8) => Ok(AdeType::E8),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(r) => write!(f, "A{r}"),
            AdeType::D(r) => write!(f, "D{r}"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E7 => write!(f, "E7"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

/// Miyaoka's weight `m(E)` of an ADE configuration.
pub fn miyaoka_m(t: &AdeType) -> Rational {
    match *t {
        AdeType::A(r) => Rational::from(3 * (r + 1)) - Rational::new(3, r + 1),
        AdeType::D(r) => Rational::from(3 * (r + 1)) - Rational::new(3, 4 * (r - 2)),
        AdeType::E6 => Rational::from(21) - Rational::new(1, 8),
        AdeType::E7 => Rational::from(24) - Rational::new(1, 16),
        AdeType::E8 => Rational::from(27) - Rational::new(1, 40),
    }
}

/// `delta# = e_F - (1/3) sum m(E)` and whether it is at most `4g - 3`.
pub fn delta_sharp(e_f: &Rational, ade: &[AdeType], g: u64) -> (Rational, bool) {
    let v = e_f - ade.iter().map(miyaoka_m).sum::<Rational>() / Rational::from(3);
    let ok = v <= Rational::from(4 * g as i64 - 3);
    (v, ok)
}
