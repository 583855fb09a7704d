use serde::Serialize;

use super::germ::CurveGerm;
use super::resolve::{embedded_resolution, ResolutionReport};
use crate::error::Result;
use crate::exact::{bracket, Rational};

/// Local invariants of a germ read off its embedded resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalInvariants {
    pub alpha: u64,
    pub beta: Rational,
    pub mu: u64,
    pub delta: u64,
    pub k: u64,
    pub nu: u64,
}

impl LocalInvariants {
    pub fn from_report(germ: &CurveGerm, report: &ResolutionReport) -> Result<Self> {
        let alpha = report.steps.iter().map(|s| (s.m - 2) * (s.m - 2)).sum();
        let twice_delta_excess: u64 = report.steps.iter().map(|s| (s.m - 1) * (s.m - 2)).sum();
        let k = report.branch_count();
        let mu = twice_delta_excess + k - 1;
        let delta = twice_delta_excess / 2 + k - 1;
        let mut beta = Rational::zero();
        for n in &report.nodes {
            beta += bracket(n.a, n.b)?;
        }
        Ok(LocalInvariants {
            alpha,
            beta,
            mu,
            delta,
            k,
            nu: germ.reduced_multiplicity(),
        })
    }
}

/// Computes alpha, beta, mu, delta, k and the multiplicity of the reduced germ.
pub fn local_invariants(germ: &CurveGerm) -> Result<LocalInvariants> {
    let report = embedded_resolution(germ)?;
    LocalInvariants::from_report(germ, &report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvealg::germ::parse_germ;

    fn inv(text: &str) -> LocalInvariants {
        local_invariants(&parse_germ(text).unwrap()).unwrap()
    }

    #[test]
    fn cusp() {
        let i = inv("x^2+y^3");
        assert_eq!((i.alpha, i.mu, i.delta, i.k, i.nu), (1, 2, 1, 1, 2));
        assert_eq!(i.beta, Rational::one());
    }

    #[test]
    fn tacnode() {
        let i = inv("x*(x+y^2)");
        assert_eq!((i.alpha, i.mu, i.delta, i.k), (1, 3, 2, 2));
        assert_eq!(i.beta, Rational::one());
    }

    #[test]
    fn node() {
        let i = inv("x*y");
        assert_eq!((i.alpha, i.mu, i.delta, i.k, i.nu), (0, 1, 1, 2, 2));
        assert_eq!(i.beta, Rational::one());
    }

    #[test]
    fn ordinary_quadruple_point() {
        let i = inv("x*y*(x-y)*(x+y)");
        assert_eq!((i.alpha, i.mu, i.delta, i.k), (4, 9, 6, 4));
    }

    #[test]
    fn smooth_non_reduced_point_has_no_invariants() {
        let i = inv("x^3");
        assert_eq!((i.alpha, i.mu, i.delta, i.k, i.nu), (0, 0, 0, 1, 1));
        assert!(i.beta.is_zero());
    }
}
