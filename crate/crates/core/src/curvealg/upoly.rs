//! Dense univariate polynomials over Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(Rational::one())
    }

    /// `t - root`
    pub fn linear(root: &Rational) -> Self {
        UPoly::new(vec![-root, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from(i))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let l = self.leading();
        self.scale(&l.recip())
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact univariate division");
        q
    }

    /// Squarefree decomposition (Yun): monic pairs `(a_i, i)` with `self = c * prod a_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0);
        let mut c = fp.div_exact(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = c.sub(&b.derivative());
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Rational roots with multiplicities, sorted increasingly, together with
    /// the cofactor that has no rational roots.
    pub fn rational_roots(&self) -> (Vec<(Rational, u32)>, UPoly) {
        let mut roots = Vec::new();
        if self.is_zero() {
            return (roots, UPoly::zero());
        }
        let mut rest = self.clone();
        for r in distinct_rational_roots(&self.squarefree_part()) {
            let lin = UPoly::linear(&r);
            let mut mult = 0;
            loop {
                let (q, rem) = rest.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            roots.push((r, mult));
        }
        (roots, rest)
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return self.monic();
        }
        self.div_exact(&self.gcd(&self.derivative())).monic()
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    fn sturm_count(chain: &[UPoly], lo: &Rational, hi: &Rational) -> usize {
        sign_changes(chain, lo) - sign_changes(chain, hi)
    }
}

fn sign_changes(chain: &[UPoly], t: &Rational) -> usize {
    let mut prev = 0i8;
    let mut changes = 0;
    for p in chain {
        let v = p.eval(t);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if prev != 0 && s != prev {
                changes += 1;
            }
            prev = s;
        }
    }
    changes
}

fn sturm_chain(p: &UPoly) -> Vec<UPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rational::one()));
    }
    chain
}

/// Distinct rational roots of a squarefree polynomial.
///
/// A rational root `r` of `sum c_i t^i` (integral, primitive, leading `a`)
/// makes `a r` a root of the monic integral polynomial `a^(n-1) p(s / a)`,
/// hence an integer. Those are located by Sturm bisection over integers.
fn distinct_rational_roots(p: &UPoly) -> Vec<Rational> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let ints = integral_coeffs(p);
    let lead = ints[n].clone();
    // monic integral transform: s^n + sum_{i<n} c_i a^(n-1-i) s^i
    let mut monic = Vec::with_capacity(n + 1);
    for (i, c) in ints.iter().enumerate() {
        if i == n {
            monic.push(Rational::one());
        } else {
            monic.push(Rational::from(c * lead.pow((n - 1 - i) as u32)));
        }
    }
    let q = UPoly::new(monic);
    let bound: BigInt = q.0[..n]
        .iter()
        .map(|c| c.numer().abs())
        .fold(BigInt::zero(), |a, b| a.max(b))
        + BigInt::one();
    let chain = sturm_chain(&q);
    let mut found = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let (lo_r, hi_r) = (Rational::from(lo.clone()), Rational::from(hi.clone()));
        if UPoly::sturm_count(&chain, &lo_r, &hi_r) == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if q.eval(&hi_r).is_zero() {
                found.push(Rational::new(hi.clone(), lead.clone()));
            }
            continue;
        }
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    found.sort();
    found
}

/// Scales to primitive integer coefficients with positive leading term.
fn integral_coeffs(p: &UPoly) -> Vec<BigInt> {
    let den = p
        .0
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p
        .0
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in &mut ints {
            *c = &*c / &g;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in &mut ints {
            *c = -&*c;
        }
    }
    ints
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
