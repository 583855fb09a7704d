//! Sparse bivariate polynomials over Q.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::upoly::UPoly;
use crate::exact::Rational;

/// Exponent pair `(i, j)` for the monomial `x^i y^j`.
pub type Monomial = (u32, u32);

/// Sparse polynomial in `x, y`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Minimal total degree of a monomial; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn degree_in_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }

    /// The homogeneous part of minimal degree.
    pub fn lowest_form(&self) -> BivariatePoly {
        match self.order() {
            None => Self::zero(),
            Some(k) => Self::from_terms(
                self.terms
                    .iter()
                    .filter(|(&(i, j), _)| i + j == k)
                    .map(|(&m, c)| (m, c.clone())),
            ),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&m, a)| (m, a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * x.pow(i) * y.pow(j))
            .sum()
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * Rational::from(i))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * Rational::from(j))),
        )
    }

    /// `f(x + a, y + b)`
    pub fn translate(&self, a: &Rational, b: &Rational) -> Self {
        if a.is_zero() && b.is_zero() {
            return self.clone();
        }
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let xs = binomial_shift(i, a);
            let ys = binomial_shift(j, b);
            for (k, xc) in xs.iter().enumerate() {
                if xc.is_zero() {
                    continue;
                }
                for (l, yc) in ys.iter().enumerate() {
                    out.add_term((k as u32, l as u32), c * xc * yc);
                }
            }
        }
        out
    }

    /// `f(x, x y)`
    pub fn chart_x(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((i + j, j), c.clone())))
    }

    /// `f(x y, y)`
    pub fn chart_y(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((i, i + j), c.clone())))
    }

    /// Exact division by `x^k`; panics if some monomial has lower x-degree.
    pub fn div_x_pow(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i.checked_sub(k).expect("inexact division by x^k"), j), c.clone()))
                .collect(),
        }
    }

    /// Exact division by `y^k`; panics if some monomial has lower y-degree.
    pub fn div_y_pow(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i, j.checked_sub(k).expect("inexact division by y^k")), c.clone()))
                .collect(),
        }
    }

    /// Leading term in lexicographic order (x before y).
    fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(&m, c)| (m, c))
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let ((da, db), dc) = divisor.leading()?;
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(((ra, rb), rc)) = rem.leading() {
            if ra < da || rb < db {
                return None;
            }
            let t = Self::monomial(rc / &dc, ra - da, rb - db);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Rescales to primitive integer coefficients with a positive leading
    /// (lexicographic) coefficient.
    pub fn normalized(&self) -> Self {
        let Some((_, lc)) = self.leading() else {
            return Self::zero();
        };
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num_gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&den / c.denom()))));
        let mut factor = Rational::new(den, num_gcd);
        if lc.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// View as a polynomial in `y` with coefficients in `Q[x]`.
    fn to_recursive(&self) -> Vec<UPoly> {
        let dy = self.degree_in_y().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); dy];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Rational::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(UPoly::new).collect()
    }

    fn from_recursive(rows: &[UPoly]) -> Self {
        Self::from_terms(rows.iter().enumerate().flat_map(|(j, row)| {
            row.coeffs()
                .iter()
                .enumerate()
                .map(move |(i, c)| ((i as u32, j as u32), c.clone()))
        }))
    }

    /// The y-content: gcd in `Q[x]` of the coefficients of powers of `y` (monic).
    pub fn content_y(&self) -> UPoly {
        self.to_recursive()
            .iter()
            .fold(UPoly::zero(), |acc, c| acc.gcd(c))
    }

    pub fn from_x_poly(p: &UPoly) -> Self {
        Self::from_recursive(std::slice::from_ref(p))
    }

    /// Greatest common divisor, normalized. Zero only when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let fa = self.to_recursive();
        let fb = other.to_recursive();
        let ca = content(&fa);
        let cb = content(&fb);
        let c = ca.gcd(&cb);
        let mut a = divide_rows(&fa, &ca);
        let mut b = divide_rows(&fb, &cb);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        let prim = loop {
            if b.len() <= 1 {
                break vec![UPoly::one()];
            }
            let r = pseudo_rem(&a, &b);
            if r.is_empty() {
                break b;
            }
            if r.len() == 1 {
                break vec![UPoly::one()];
            }
            let cr = content(&r);
            a = b;
            b = divide_rows(&r, &cr);
        };
        let prim = divide_rows(&prim, &content(&prim));
        Self::from_recursive(&prim)
            .mul(&Self::from_x_poly(&c))
            .normalized()
    }

    /// Squarefree decomposition `self = unit * prod f_i^i` with normalized,
    /// squarefree, pairwise coprime `f_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(BivariatePoly, u32)> {
        let mut out: Vec<(BivariatePoly, u32)> = Vec::new();
        if self.is_constant() {
            return out;
        }
        let cont = self.content_y();
        let prim = self.div_exact(&Self::from_x_poly(&cont)).expect("content divides");
        for (a, i) in cont.squarefree_decomposition() {
            out.push((Self::from_x_poly(&a).normalized(), i));
        }
        if !prim.is_constant() {
            // Yun in the y-direction; prim has no factors free of y.
            let fp = prim.partial_y();
            let a0 = prim.gcd(&fp);
            let mut b = prim.div_exact(&a0).expect("gcd divides");
            let mut c = fp.div_exact(&a0).expect("gcd divides");
            let mut d = c.sub(&b.partial_y());
            let mut i = 1;
            while !b.is_constant() {
                let a = b.gcd(&d);
                b = b.div_exact(&a).expect("gcd divides");
                c = d.div_exact(&a).expect("gcd divides");
                d = c.sub(&b.partial_y());
                if !a.is_constant() {
                    out.push((a.normalized(), i));
                }
                i += 1;
            }
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_decomposition().iter().all(|(_, i)| *i == 1)
    }
}

fn content(rows: &[UPoly]) -> UPoly {
    rows.iter().fold(UPoly::zero(), |acc, c| acc.gcd(c))
}

fn divide_rows(rows: &[UPoly], c: &UPoly) -> Vec<UPoly> {
    if c.is_zero() {
        return rows.to_vec();
    }
    rows.iter().map(|r| r.div_exact(c)).collect()
}

fn trim(rows: &mut Vec<UPoly>) {
    while rows.last().is_some_and(UPoly::is_zero) {
        rows.pop();
    }
}

/// Pseudo-remainder of `a` by `b` as polynomials in y over Q[x].
fn pseudo_rem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let n = b.len();
    let lb = b[n - 1].clone();
    while r.len() >= n {
        let shift = r.len() - n;
        let lr = r[r.len() - 1].clone();
        let mut next: Vec<UPoly> = r.iter().map(|c| c.mul(&lb)).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = next[k + shift].sub(&bc.mul(&lr));
        }
        trim(&mut next);
        r = next;
    }
    r
}

/// Coefficients of `(t + a)^n` in increasing degree.
fn binomial_shift(n: u32, a: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut binom = BigInt::one();
    for k in 0..=n {
        out.push(Rational::from(binom.clone()) * a.pow(n - k));
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    out
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut monos: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        monos.sort_by(|(a, _), (b, _)| (a.0 + a.1, b.0).cmp(&(b.0 + b.1, a.0)));
        for (k, (&(i, j), c)) in monos.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let var = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    if i > 0 {
                        parts.push(if i == 1 { "x".to_string() } else { format!("x^{i}") });
                    }
                    if j > 0 {
                        parts.push(if j == 1 { "y".to_string() } else { format!("y^{j}") });
                    }
                    parts.join("*")
                }
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}*{var}")?;
            } else {
                write!(f, "({mag})*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
