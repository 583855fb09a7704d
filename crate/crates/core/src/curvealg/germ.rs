use std::fmt;

use serde::Serialize;

use super::parse::parse_expr;
use super::poly::BivariatePoly;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// One reduced component of a germ together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermFactor {
    pub poly: BivariatePoly,
    pub multiplicity: u64,
}

/// A local curve `B = sum n_i B_i` at the origin: squarefree, pairwise coprime
/// factors with multiplicities.
///
/// Factors keep the order in which they are written; a written factor that
/// splits under squarefree decomposition contributes its pieces in
/// increasing multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGerm {
    pub factors: Vec<GermFactor>,
    /// Factors of the input that miss the origin; they are units locally.
    pub dropped: Vec<BivariatePoly>,
}

#[derive(Serialize)]
struct FactorRepr {
    poly: String,
    multiplicity: u64,
}

impl Serialize for CurveGerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CurveGerm", 2)?;
        let fs: Vec<FactorRepr> = self
            .factors
            .iter()
            .map(|f| FactorRepr {
                poly: f.poly.to_string(),
                multiplicity: f.multiplicity,
            })
            .collect();
        st.serialize_field("factors", &fs)?;
        let dropped: Vec<String> = self.dropped.iter().map(|p| p.to_string()).collect();
        st.serialize_field("dropped", &dropped)?;
        st.end()
    }
}

impl CurveGerm {
    /// Builds a germ from `(poly, multiplicity)` pieces, splitting them into a
    /// squarefree, pairwise coprime family.
    pub fn from_factors(pieces: impl IntoIterator<Item = (BivariatePoly, u64)>) -> Result<Self> {
        let mut list: Vec<(BivariatePoly, u64)> = Vec::new();
        for (p, m) in pieces {
            if p.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            let mut sf = p.squarefree_decomposition();
            sf.sort_by_key(|(_, i)| *i);
            for (q, i) in sf {
                let mult = (i as u64).checked_mul(m).ok_or(Error::Overflow("factor multiplicity"))?;
                list.push((q, mult));
            }
        }
        let list = coprime_refinement(list)?;
        let mut factors = Vec::new();
        let mut dropped = Vec::new();
        for (poly, multiplicity) in list {
            if poly.constant_term().is_zero() {
                factors.push(GermFactor { poly, multiplicity });
            } else {
                dropped.push(poly);
            }
        }
        Ok(CurveGerm { factors, dropped })
    }

    /// The reduced equation `prod f_i`.
    pub fn reduced(&self) -> BivariatePoly {
        self.factors
            .iter()
            .fold(BivariatePoly::one(), |acc, f| acc.mul(&f.poly))
    }

    /// The full equation `prod f_i^{n_i}` (dropped units excluded).
    pub fn equation(&self) -> BivariatePoly {
        self.factors
            .iter()
            .fold(BivariatePoly::one(), |acc, f| acc.mul(&f.poly.pow(f.multiplicity as u32)))
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplicity of the reduced germ at the origin.
    pub fn reduced_multiplicity(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| multiplicity_at(&f.poly, (&Rational::zero(), &Rational::zero())) as u64)
            .sum()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.dropped
            .iter()
            .map(|p| format!("factor {p} does not pass through the origin and was dropped"))
            .collect()
    }

    /// The sub-germ made of the factors with the given indices.
    pub fn restrict(&self, indices: &[usize]) -> CurveGerm {
        CurveGerm {
            factors: indices.iter().map(|&i| self.factors[i].clone()).collect(),
            dropped: Vec::new(),
        }
    }
}

impl fmt::Display for CurveGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|g| {
                if g.multiplicity == 1 {
                    format!("({})", g.poly)
                } else {
                    format!("({})^{}", g.poly, g.multiplicity)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Refines a list of squarefree polynomials into a pairwise coprime family,
/// adding multiplicities of shared parts.
fn coprime_refinement(mut list: Vec<(BivariatePoly, u64)>) -> Result<Vec<(BivariatePoly, u64)>> {
    list.retain(|(p, _)| !p.is_constant());
    'outer: loop {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let g = list[i].0.gcd(&list[j].0);
                if g.is_constant() {
                    continue;
                }
                let (pi, mi) = list[i].clone();
                let (pj, mj) = list[j].clone();
                let qi = pi.div_exact(&g).expect("gcd divides").normalized();
                let qj = pj.div_exact(&g).expect("gcd divides").normalized();
                let merged = mi.checked_add(mj).ok_or(Error::Overflow("factor multiplicity"))?;
                list[i] = (g, merged);
                list[j] = (qj, mj);
                list.insert(i + 1, (qi, mi));
                list.retain(|(p, _)| !p.is_constant());
                continue 'outer;
            }
        }
        return Ok(list);
    }
}

/// Parses a germ expression, expands each written factor and decomposes it.
pub fn parse_germ(text: &str) -> Result<CurveGerm> {
    let expr = parse_expr(text)?;
    let full = expr.expand();
    if full.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pieces = expr
        .written_factors()
        .into_iter()
        .map(|(e, k)| (e.expand(), k as u64));
    CurveGerm::from_factors(pieces)
}

/// Order of vanishing of `p` at `point` (0 if `p` does not vanish there).
pub fn multiplicity_at(p: &BivariatePoly, point: (&Rational, &Rational)) -> u32 {
    p.translate(point.0, point.1).order().unwrap_or(0)
}
