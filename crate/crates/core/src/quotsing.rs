//! Cyclic quotient singularities `z^d = x^a y^b` and the canonical-class
//! bookkeeping of cyclic covers branched along a germ.

use serde::Serialize;

use crate::curvealg::{embedded_resolution, CurveGerm, ResolutionReport};
use crate::error::{Error, Result};
use crate::exact::{gcd, lcm, mod_inverse, neg_cont_frac, Rational};

/// Minimal resolution of the normalization of `z^d = x^a y^b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainDescription {
    pub d: u64,
    pub a: u64,
    pub b: u64,
    /// Number of isomorphic singular points, `gcd(d, a, b)`.
    pub copies: u64,
    /// Coprime data `(d', a', b')` each copy reduces to.
    pub reduced: (u64, u64, u64),
    /// `q` and `q'` of the reduced singularity, absent when it is smooth.
    pub q: Option<(u64, u64)>,
    /// One entry per singular point: self-intersections of the exceptional
    /// chain. Empty entries are smooth points (A_0).
    pub chains: Vec<Vec<i64>>,
    /// `K^2` of the resolution, summed over all copies.
    pub k2: Rational,
}

impl ChainDescription {
    pub fn is_rational_double_points(&self) -> bool {
        self.chains.iter().flatten().all(|&s| s == -2)
    }
}

/// Jung–Hirzebruch resolution of `z^d = x^a y^b`.
pub fn resolve_cyclic(d: u64, a: u64, b: u64) -> Result<ChainDescription> {
    if d < 2 || a == 0 || b == 0 {
        return Err(Error::Domain(format!(
            "resolve_cyclic needs d >= 2 and a, b >= 1 (got d={d}, a={a}, b={b})"
        )));
    }
    let copies = gcd(d, gcd(a, b));
    let (d1, a1, b1) = (d / copies, a / copies, b / copies);
    let (ga, gb) = (gcd(d1, a1), gcd(d1, b1));
    let (dr, ar, br) = (d1 / (ga * gb), a1 / ga, b1 / gb);
    let (q, chain, k2_one) = if dr == 1 {
        (None, Vec::new(), Rational::zero())
    } else {
        let q = (dr - (br % dr) * mod_inverse(ar % dr, dr)? % dr) % dr;
        let qp = mod_inverse(q, dr)?;
        let cf = neg_cont_frac(dr, q)?;
        let excess: u64 = cf.terms().iter().map(|e| e - 2).sum();
        let minus_k2 = Rational::from(excess) + Rational::new(q + qp + 2, dr) - Rational::from(2);
        let chain = cf.terms().iter().map(|&e| -(e as i64)).collect();
        (Some((q, qp)), chain, -minus_k2)
    };
    Ok(ChainDescription {
        d,
        a,
        b,
        copies,
        reduced: (dr, ar, br),
        q,
        chains: vec![chain; copies as usize],
        k2: k2_one * Rational::from(copies),
    })
}

/// Number and length of the `A_n` chains over a node whose branches have
/// multiplicities `a` and `b` dividing `d`.
pub fn node_chains(d: u64, a: u64, b: u64) -> Result<(u64, u64)> {
    if a == 0 || b == 0 || d == 0 || !d.is_multiple_of(a) || !d.is_multiple_of(b) {
        return Err(Error::Domain(format!(
            "node_chains needs a | d and b | d (got d={d}, a={a}, b={b})"
        )));
    }
    let g = gcd(a, b);
    // [a, b] d / gcd(a, b) = d / lcm(a, b)
    Ok((g, d / lcm(a, b)? - 1))
}

/// Per-step term `m - 2 + ((m*, d) - m(d)) / d` of the canonical class formula.
fn step_coefficient(report: &ResolutionReport, step: usize, d: u64) -> Rational {
    let s = &report.steps[step];
    let m_d: u64 = s
        .curves
        .iter()
        .map(|c| c.order as u64 * gcd(d, c.multiplicity))
        .sum();
    Rational::from(s.m as i64 - 2) + Rational::new(gcd(s.m_star, d) as i64 - m_d as i64, d)
}

/// `K^2_phi` of the cyclic cover of degree `d` branched along the germ,
/// resolved through the embedded resolution.
pub fn k2_phi_from_report(report: &ResolutionReport, d: u64) -> Result<Rational> {
    if d < 2 {
        return Err(Error::Domain(format!("k2_phi needs d >= 2 (got {d})")));
    }
    let mut minus_k2 = Rational::zero();
    for i in 0..report.steps.len() {
        minus_k2 += step_coefficient(report, i, d).pow(2) * Rational::from(d);
    }
    for n in &report.nodes {
        minus_k2 -= resolve_cyclic(d, n.a, n.b)?.k2;
    }
    Ok(-minus_k2)
}

pub fn k2_phi(germ: &CurveGerm, d: u64) -> Result<Rational> {
    k2_phi_from_report(&embedded_resolution(germ)?, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvealg::parse_germ;

    #[test]
    fn a_d_minus_one() {
        for d in 2..=12 {
            let c = resolve_cyclic(d, 1, 1).unwrap();
            assert_eq!(c.chains, vec![vec![-2i64; d as usize - 1]]);
            assert!(c.k2.is_zero());
            assert_eq!(c.q, Some((d - 1, d - 1)));
        }
    }

    #[test]
    fn spec_examples() {
        let c = resolve_cyclic(6, 3, 6).unwrap();
        assert_eq!(c.chains, vec![Vec::<i64>::new(); 3]);
        assert!(c.k2.is_zero());
        let c = resolve_cyclic(4, 2, 2).unwrap();
        assert_eq!(c.chains, vec![vec![-2], vec![-2]]);
        assert!(c.k2.is_zero());
        assert_eq!(node_chains(6, 2, 6).unwrap(), (2, 0));
        assert_eq!(node_chains(6, 1, 6).unwrap(), (1, 0));
        assert_eq!(node_chains(2, 1, 1).unwrap(), (1, 1));
        assert_eq!(node_chains(4, 2, 2).unwrap(), (2, 1));
        assert!(node_chains(6, 4, 2).is_err());
    }

    #[test]
    fn non_rdp_case() {
        // z^5 = x y^2: q = 3, 5/3 = [2, 3], q' = 2, -K^2 = 1 + 7/5 - 2
        let c = resolve_cyclic(5, 1, 2).unwrap();
        assert_eq!(c.q, Some((3, 2)));
        assert_eq!(c.chains, vec![vec![-2, -3]]);
        assert_eq!(c.k2, Rational::new(-2, 5));
        assert!(!c.is_rational_double_points());
    }

    #[test]
    fn case_two_reduction() {
        // (d, a) = 2 reduces z^4 = x^2 y to z^2 = x y
        let c = resolve_cyclic(4, 2, 1).unwrap();
        assert_eq!(c.reduced, (2, 1, 1));
        assert_eq!(c.chains, vec![vec![-2]]);
    }

    #[test]
    fn k2_phi_examples() {
        let cusp = parse_germ("x^2+y^3").unwrap();
        assert_eq!(k2_phi(&cusp, 6).unwrap(), Rational::from(-6));
        let node = parse_germ("x*y").unwrap();
        for d in 2..8 {
            assert!(k2_phi(&node, d).unwrap().is_zero());
        }
        let tac = parse_germ("x*(x+y^2)").unwrap();
        assert_eq!(k2_phi(&tac, 4).unwrap(), Rational::from(-4));
    }
}
