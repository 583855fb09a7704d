//! Fibration-level ledger arithmetic: invariants of base changes, their
//! composition, isotriviality invariants, semistable slopes and Horikawa
//! numbers.

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::fiber::{self, FiberAnalysis, FiberConfig, FiberInvariants};

fn one() -> u64 {
    1
}

/// The base-change invariants of one singular fiber, plus the extra data some
/// checks need.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub c1sq: Rational,
    pub c2: Rational,
    pub chi: Rational,
    /// `M_F`, the least common multiple of the multiplicities in the embedded
    /// resolution.
    #[serde(default = "one")]
    pub m: u64,
    /// Euler defect `e_F`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<u64>,
    /// Whether some multiple component is not a `(-2)`-curve, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiple_non_minus2: Option<bool>,
    /// Disjoint ADE configurations declared on the fiber (`A1`, `D4`, `E8`, ...).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ade: Vec<String>,
}

impl FiberSummary {
    pub fn zero(label: Option<String>) -> Self {
        FiberSummary {
            label,
            c1sq: Rational::zero(),
            c2: Rational::zero(),
            chi: Rational::zero(),
            m: 1,
            euler: None,
            multiple_non_minus2: Some(false),
            ade: Vec::new(),
        }
    }

    pub fn is_semistable(&self) -> bool {
        self.c1sq.is_zero() && self.c2.is_zero() && self.chi.is_zero()
    }

    pub fn lambda(&self) -> Option<Rational> {
        self.c1sq.checked_div(&self.chi)
    }

    pub fn from_analysis(a: &FiberAnalysis, label: Option<String>) -> Self {
        let multiple_non_minus2 = a.resolved.vertices.iter().enumerate().any(|(i, v)| {
            v.kind == fiber::VertexKind::Strict
                && v.multiplicity > 1
                && !(a.basics.component_pa[i] == 0 && a.basics.self_intersections[i] == -2)
        });
        FiberSummary {
            multiple_non_minus2: Some(multiple_non_minus2),
            ..FiberSummary::from_invariants(&a.invariants, label)
        }
    }

    pub fn from_invariants(fi: &FiberInvariants, label: Option<String>) -> Self {
        FiberSummary {
            label,
            c1sq: fi.c1sq.clone(),
            c2: fi.c2.clone(),
            chi: fi.chi.clone(),
            m: fi.m,
            euler: Some(fi.e),
            multiple_non_minus2: None,
            ade: Vec::new(),
        }
    }

    fn name(&self, index: usize) -> String {
        self.label.clone().unwrap_or_else(|| format!("#{index}"))
    }

    fn validate(&self, index: usize) -> Result<()> {
        let name = self.name(index);
        if &self.c1sq + &self.c2 != Rational::from(12) * &self.chi {
            return Err(Error::InconsistentLedger(format!(
                "fiber {name}: 12 chi = {} but c1^2 + c2 = {}",
                Rational::from(12) * &self.chi,
                &self.c1sq + &self.c2
            )));
        }
        if self.c1sq.is_negative() || self.c2.is_negative() {
            return Err(Error::InconsistentLedger(format!(
                "fiber {name}: c1^2 and c2 must be nonnegative"
            )));
        }
        if self.m == 0 || (!self.is_semistable() && self.m < 2) {
            return Err(Error::InconsistentLedger(format!(
                "fiber {name}: a non-semistable fiber needs its lcm multiplicity m >= 2"
            )));
        }
        Ok(())
    }
}

/// A fiber in an input file: either its invariants, or a configuration from
/// which they are computed.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FiberEntry {
    Config {
        #[serde(default)]
        label: Option<String>,
        config: FiberConfig,
        #[serde(default)]
        ade: Vec<String>,
    },
    Summary(FiberSummary),
}

impl FiberEntry {
    pub fn summary(&self) -> Result<FiberSummary> {
        match self {
            FiberEntry::Summary(s) => Ok(s.clone()),
            FiberEntry::Config { label, config, ade } => {
                let a = fiber::analyze(config)?;
                Ok(FiberSummary {
                    ade: ade.clone(),
                    ..FiberSummary::from_analysis(&a, label.clone())
                })
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LedgerFile {
    g: u64,
    b: u64,
    chi_f: Rational,
    #[serde(rename = "K2_f")]
    k2_f: Rational,
    e_f: Rational,
    #[serde(default)]
    fibers: Vec<FiberEntry>,
    #[serde(default)]
    s: Option<u64>,
    #[serde(default)]
    semistable: Option<bool>,
    #[serde(default)]
    hyperelliptic: bool,
}

/// Relative invariants of a fibration of genus `g` over a curve of genus `b`,
/// with its singular fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationLedger {
    pub g: u64,
    pub b: u64,
    pub chi_f: Rational,
    #[serde(rename = "K2_f")]
    pub k2_f: Rational,
    pub e_f: Rational,
    pub fibers: Vec<FiberSummary>,
    /// Number of singular fibers; the listed ones plus possibly unlisted
    /// semistable ones.
    pub s: u64,
    pub semistable: bool,
    pub hyperelliptic: bool,
}

impl FibrationLedger {
    /// Builds and validates a ledger; `s` defaults to the number of listed
    /// fibers.
    pub fn new(g: u64, b: u64, k2_f: Rational, chi_f: Rational, e_f: Rational, fibers: Vec<FiberSummary>) -> Result<Self> {
        let semistable = fibers.iter().all(FiberSummary::is_semistable);
        let l = FibrationLedger {
            g,
            b,
            chi_f,
            k2_f,
            e_f,
            s: fibers.len() as u64,
            fibers,
            semistable,
            hyperelliptic: false,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: LedgerFile = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let fibers = raw.fibers.iter().map(FiberEntry::summary).collect::<Result<Vec<_>>>()?;
        let all_semistable = fibers.iter().all(FiberSummary::is_semistable);
        let l = FibrationLedger {
            g: raw.g,
            b: raw.b,
            chi_f: raw.chi_f,
            k2_f: raw.k2_f,
            e_f: raw.e_f,
            s: raw.s.unwrap_or(fibers.len() as u64),
            semistable: raw.semistable.unwrap_or(all_semistable),
            fibers,
            hyperelliptic: raw.hyperelliptic,
        };
        l.validate()?;
        Ok(l)
    }

    /// Noether equality, signs, and consistency of the declared fiber data.
    pub fn validate(&self) -> Result<()> {
        if self.g < 2 {
            return Err(Error::GenusOutOfRange(self.g as i64));
        }
        if &self.k2_f + &self.e_f != Rational::from(12) * &self.chi_f {
            return Err(Error::InconsistentLedger(format!(
                "Noether equality fails: 12 chi_f = {} but K_f^2 + e_f = {}",
                Rational::from(12) * &self.chi_f,
                &self.k2_f + &self.e_f
            )));
        }
        if self.k2_f.is_negative() || self.chi_f.is_negative() || self.e_f.is_negative() {
            return Err(Error::InconsistentLedger(
                "relative invariants must be nonnegative".into(),
            ));
        }
        if self.s < self.fibers.len() as u64 {
            return Err(Error::InconsistentLedger(format!(
                "s = {} but {} singular fibers are listed",
                self.s,
                self.fibers.len()
            )));
        }
        for (i, f) in self.fibers.iter().enumerate() {
            f.validate(i)?;
        }
        if self.semistable && self.fibers.iter().any(|f| !f.is_semistable()) {
            return Err(Error::InconsistentLedger(
                "ledger is marked semistable but lists a non-semistable fiber".into(),
            ));
        }
        Ok(())
    }

    pub fn lambda(&self) -> Option<Rational> {
        self.k2_f.checked_div(&self.chi_f)
    }
}

/// Fiber a branch point lies under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FiberRef {
    Index(usize),
    #[serde(serialize_with = "smooth_str")]
    Smooth,
}

fn smooth_str<S: serde::Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str("smooth")
}

impl<'de> Deserialize<'de> for FiberRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Index(usize),
            Name(String),
        }
        match Repr::deserialize(d)? {
            Repr::Index(i) => Ok(FiberRef::Index(i)),
            Repr::Name(s) if s == "smooth" => Ok(FiberRef::Smooth),
            Repr::Name(s) => Err(serde::de::Error::custom(format!(
                "expected a fiber index or \"smooth\", got \"{s}\""
            ))),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchEntry {
    pub fiber: FiberRef,
    /// Ramification indices of the points over the branch point.
    pub profile: Vec<u64>,
    /// Pullback fiber for each part of the profile, where it is not
    /// determined by the fiber itself.
    #[serde(default)]
    pub pullback: Vec<Option<FiberEntry>>,
}

impl BranchEntry {
    pub fn is_ramified(&self) -> bool {
        self.profile.iter().any(|&e| e > 1)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseChangeSpec {
    pub d: u64,
    #[serde(default)]
    pub branch: Vec<BranchEntry>,
}

impl BaseChangeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Degree-`d` change totally ramified over the listed fibers, plus one
    /// smooth fiber when Riemann–Hurwitz needs an extra branch point.
    pub fn totally_ramified(d: u64, fibers: &[usize]) -> Self {
        let mut branch: Vec<BranchEntry> = fibers
            .iter()
            .map(|&i| BranchEntry {
                fiber: FiberRef::Index(i),
                profile: vec![d],
                pullback: Vec::new(),
            })
            .collect();
        if d.is_multiple_of(2) && fibers.len() % 2 == 1 {
            branch.push(BranchEntry {
                fiber: FiberRef::Smooth,
                profile: vec![d],
                pullback: Vec::new(),
            });
        }
        BaseChangeSpec { d, branch }
    }

    /// `2 g(C~) - 2` by Riemann–Hurwitz.
    pub fn covering_euler(&self, b: u64) -> i128 {
        let d = self.d as i128;
        d * (2 * b as i128 - 2)
            + self
                .branch
                .iter()
                .map(|br| d - br.profile.len() as i128)
                .sum::<i128>()
    }

    pub fn validate(&self, ledger: &FibrationLedger) -> Result<()> {
        if self.d == 0 {
            return Err(Error::BaseChange("degree must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for (k, br) in self.branch.iter().enumerate() {
            if br.profile.is_empty() || br.profile.contains(&0) || br.profile.iter().sum::<u64>() != self.d {
                return Err(Error::BaseChange(format!(
                    "branch {k}: profile {:?} is not a partition of {}",
                    br.profile, self.d
                )));
            }
            if !br.pullback.is_empty() && br.pullback.len() != br.profile.len() {
                return Err(Error::BaseChange(format!(
                    "branch {k}: {} pullback entries for {} parts",
                    br.pullback.len(),
                    br.profile.len()
                )));
            }
            if let FiberRef::Index(i) = br.fiber {
                if i >= ledger.fibers.len() {
                    return Err(Error::UnknownFiber(i));
                }
                if !seen.insert(i) {
                    return Err(Error::BaseChange(format!("fiber {i} is branched over twice")));
                }
            }
        }
        let chi = self.covering_euler(ledger.b);
        if chi < -2 || chi % 2 != 0 {
            return Err(Error::BaseChange(format!(
                "Riemann-Hurwitz gives 2g - 2 = {chi} for the covering curve"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeInvariants {
    pub degree: u64,
    #[serde(rename = "K2_pi")]
    pub k2_pi: Rational,
    pub e_pi: Rational,
    pub chi_pi: Rational,
    /// All pullback fibers over the branch locus are semistable. For a
    /// composite, both stages are.
    pub stabilizing: bool,
    pub invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_pi: Option<Rational>,
}

impl BaseChangeInvariants {
    pub fn new(degree: u64, k2_pi: Rational, e_pi: Rational, chi_pi: Rational, stabilizing: bool) -> Self {
        let invariant = k2_pi.is_zero() && e_pi.is_zero() && chi_pi.is_zero();
        let lambda_pi = if chi_pi.is_positive() {
            Some(&k2_pi / &chi_pi)
        } else {
            None
        };
        BaseChangeInvariants {
            degree,
            k2_pi,
            e_pi,
            chi_pi,
            stabilizing,
            invariant,
            lambda_pi,
        }
    }

    /// The identity change of degree 1.
    pub fn identity() -> Self {
        Self::new(1, Rational::zero(), Rational::zero(), Rational::zero(), true)
    }
}

/// Pullback fiber over a point with ramification index `e` above `f`.
fn pullback_fiber(f: &FiberSummary, e: u64, supplied: Option<&FiberEntry>, at: &str) -> Result<FiberSummary> {
    if let Some(entry) = supplied {
        return entry.summary();
    }
    if f.is_semistable() || e.is_multiple_of(f.m) {
        Ok(FiberSummary::zero(None))
    } else if e == 1 {
        Ok(f.clone())
    } else {
        Err(Error::PullbackRequired(format!(
            "{at}: ramification index {e} is not a multiple of m = {}",
            f.m
        )))
    }
}

/// Pullback fibers of every ramified branch entry, with their fibers.
fn branched(ledger: &FibrationLedger, spec: &BaseChangeSpec) -> Result<Vec<(usize, Vec<FiberSummary>)>> {
    let mut out = Vec::new();
    for br in &spec.branch {
        let FiberRef::Index(i) = br.fiber else { continue };
        if !br.is_ramified() {
            continue;
        }
        let f = &ledger.fibers[i];
        let name = f.name(i);
        let pulls = br
            .profile
            .iter()
            .enumerate()
            .map(|(k, &e)| pullback_fiber(f, e, br.pullback.get(k).and_then(Option::as_ref), &format!("fiber {name}")))
            .collect::<Result<Vec<_>>>()?;
        out.push((i, pulls));
    }
    Ok(out)
}

/// `K^2_pi = c_1^2(B_pi) - c_1^2(R_pi)/d`, and likewise for `e` and `chi`,
/// where `B_pi` are the branched fibers and `R_pi` their pullbacks.
///
/// Pullbacks are determined without extra data when the ramification index
/// is a multiple of `M_F` (semistable) or 1 (a copy of `F`); anything else must
/// be supplied in the spec.
pub fn stabilizing_invariants(ledger: &FibrationLedger, spec: &BaseChangeSpec) -> Result<BaseChangeInvariants> {
    spec.validate(ledger)?;
    let d = Rational::from(spec.d);
    let (mut k2, mut e, mut chi) = (Rational::zero(), Rational::zero(), Rational::zero());
    let mut stabilizing = true;
    for (i, pulls) in branched(ledger, spec)? {
        let f = &ledger.fibers[i];
        k2 += &f.c1sq;
        e += &f.c2;
        chi += &f.chi;
        for p in pulls {
            stabilizing &= p.is_semistable();
            k2 -= &p.c1sq / &d;
            e -= &p.c2 / &d;
            chi -= &p.chi / &d;
        }
    }
    Ok(BaseChangeInvariants::new(spec.d, k2, e, chi, stabilizing))
}

/// Invariants of the composite of `outer` (applied first) and `inner`:
/// `K^2 = K^2_outer + K^2_inner / deg(outer)`, likewise for `e` and `chi`.
pub fn compose(outer: &BaseChangeInvariants, inner: &BaseChangeInvariants) -> BaseChangeInvariants {
    let d1 = Rational::from(outer.degree);
    BaseChangeInvariants::new(
        outer.degree * inner.degree,
        &outer.k2_pi + &inner.k2_pi / &d1,
        &outer.e_pi + &inner.e_pi / &d1,
        &outer.chi_pi + &inner.chi_pi / &d1,
        outer.stabilizing && inner.stabilizing,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotrivialityInvariants {
    #[serde(rename = "I_K")]
    pub i_k: Rational,
    #[serde(rename = "I_chi")]
    pub i_chi: Rational,
    #[serde(rename = "I_e")]
    pub i_e: Rational,
    pub isotrivial: bool,
}

/// `I_K = K_f^2 - sum c_1^2(F)`, `I_chi = chi_f - sum chi_F`,
/// `I_e = e_f - sum c_2(F)`. All three are nonnegative for an actual
/// fibration, and `I_K` or `I_chi` vanishes exactly for isotrivial ones.
pub fn isotriviality_invariants(ledger: &FibrationLedger) -> Result<IsotrivialityInvariants> {
    let i_k = &ledger.k2_f - ledger.fibers.iter().map(|f| &f.c1sq).sum::<Rational>();
    let i_chi = &ledger.chi_f - ledger.fibers.iter().map(|f| &f.chi).sum::<Rational>();
    let i_e = &ledger.e_f - ledger.fibers.iter().map(|f| &f.c2).sum::<Rational>();
    for (name, v) in [("I_K", &i_k), ("I_chi", &i_chi), ("I_e", &i_e)] {
        if v.is_negative() {
            return Err(Error::InconsistentLedger(format!(
                "{name} = {v} is negative; the fiber invariants cannot exceed the relative invariants"
            )));
        }
    }
    let isotrivial = i_k.is_zero() || i_chi.is_zero();
    Ok(IsotrivialityInvariants {
        i_k,
        i_chi,
        i_e,
        isotrivial,
    })
}

/// Slope of every semistable model: `I_K / I_chi`.
pub fn semistable_slope(ledger: &FibrationLedger) -> Result<Rational> {
    let iso = isotriviality_invariants(ledger)?;
    if iso.i_chi.is_zero() {
        return Err(Error::Isotrivial);
    }
    Ok(&iso.i_k / &iso.i_chi)
}

/// Slope of the pullback under a stabilizing change with invariants `bc`:
/// `(K_f^2 - K^2_pi) / (chi_f - chi_pi)`.
pub fn pullback_slope(ledger: &FibrationLedger, bc: &BaseChangeInvariants) -> Result<Rational> {
    let den = &ledger.chi_f - &bc.chi_pi;
    if den.is_zero() {
        return Err(Error::Isotrivial);
    }
    Ok((&ledger.k2_f - &bc.k2_pi) / den)
}

/// Horikawa number of the pullback of a genus-3 fiber under a base change of
/// degree `d` totally ramified over it: `d (H_F + (c_2 - 3 c_1^2) / 4)`.
pub fn horikawa_shift(h: &Rational, fi: &FiberSummary, d: u64) -> Rational {
    Rational::from(d) * (h + (&fi.c2 - Rational::from(3) * &fi.c1sq) / Rational::from(4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReidCheck {
    pub holds: bool,
    /// `K_f^2 - 3 chi_f - sum H_F`.
    pub defect: Rational,
}

/// Tests `K_f^2 - 3 chi_f = sum H_F` with one Horikawa number per listed fiber.
pub fn reid_sum_check(ledger: &FibrationLedger, h_values: &[Rational]) -> Result<ReidCheck> {
    if h_values.len() != ledger.fibers.len() {
        return Err(Error::BaseChange(format!(
            "{} Horikawa numbers for {} fibers",
            h_values.len(),
            ledger.fibers.len()
        )));
    }
    let defect = &ledger.k2_f - Rational::from(3) * &ledger.chi_f - h_values.iter().sum::<Rational>();
    Ok(ReidCheck {
        holds: defect.is_zero(),
        defect,
    })
}

/// Ledger of the pullback fibration under a stabilizing change, built fiber by
/// fiber: unbranched singular fibers appear `d` times, branched ones are
/// replaced by their pullbacks. Pullbacks that are semistable are listed with
/// zero invariants, so `s` of the result is an upper bound.
pub fn pullback_ledger(ledger: &FibrationLedger, spec: &BaseChangeSpec) -> Result<FibrationLedger> {
    let bc = stabilizing_invariants(ledger, spec)?;
    if !bc.stabilizing {
        return Err(Error::BaseChange("the pullback ledger needs a stabilizing base change".into()));
    }
    let branched = branched(ledger, spec)?;
    let mut fibers = Vec::new();
    for (i, f) in ledger.fibers.iter().enumerate() {
        match branched.iter().find(|(j, _)| *j == i) {
            Some((_, pulls)) => fibers.extend(pulls.iter().cloned()),
            None => fibers.extend(std::iter::repeat_n(f.clone(), spec.d as usize)),
        }
    }
    let d = Rational::from(spec.d);
    let b = (spec.covering_euler(ledger.b) + 2) / 2;
    let unlisted = (ledger.s - ledger.fibers.len() as u64) * spec.d;
    let l = FibrationLedger {
        g: ledger.g,
        b: b as u64,
        chi_f: &d * (&ledger.chi_f - &bc.chi_pi),
        k2_f: &d * (&ledger.k2_f - &bc.k2_pi),
        e_f: &d * (&ledger.e_f - &bc.e_pi),
        s: fibers.len() as u64 + unlisted,
        semistable: fibers.iter().all(FiberSummary::is_semistable),
        fibers,
        hyperelliptic: ledger.hyperelliptic,
    };
    l.validate()?;
    Ok(l)
}
