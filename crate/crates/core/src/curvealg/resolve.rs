//! Embedded resolution of plane curve germs by point blow-ups.
//!
//! Every local situation is kept in affine coordinates `(u, v)` centered at the
//! point under study. Exceptional curves through the point can only be the
//! axes `{u = 0}` and `{v = 0}`; strict transforms are carried as explicit
//! polynomials. Chart 1 is `(u, v) = (u, u v)` and chart 2 is `(u v, v)`; the
//! points of the new exceptional curve are the chart-1 points `(0, c)` plus the
//! chart-2 origin.

use std::fmt;

use serde::Serialize;

use super::germ::CurveGerm;
use super::poly::BivariatePoly;
use super::upoly::UPoly;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// A curve of the total transform: a strict transform of a germ factor or an
/// exceptional curve, numbered in order of creation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CurveId {
    Strict(usize),
    Exceptional(usize),
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveId::Strict(i) => write!(f, "B{i}"),
            CurveId::Exceptional(j) => write!(f, "E{j}"),
        }
    }
}

/// Order and total-transform multiplicity of one curve at a blow-up center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveAtCenter {
    pub curve: CurveId,
    pub order: u32,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionStep {
    /// Step whose exceptional curve contains this center (`None` for the base point).
    pub parent: Option<usize>,
    /// 0 for the original plane, 1 or 2 for the chart of the parent blow-up.
    pub chart: u8,
    pub center: (Rational, Rational),
    /// Multiplicity of the reduced total transform at the center.
    pub m: u64,
    /// Multiplicity of the total transform at the center.
    pub m_star: u64,
    pub curves: Vec<CurveAtCenter>,
    /// Index of the exceptional curve created by this blow-up.
    pub exceptional: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeRecord {
    pub a: u64,
    pub b: u64,
    pub owners: (CurveId, CurveId),
    /// Step on whose exceptional curve the node lies.
    pub on_step: Option<usize>,
    /// The node sits at a point whose coordinates are not rational.
    pub irrational: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalCurve {
    pub id: usize,
    pub multiplicity: u64,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub steps: Vec<ResolutionStep>,
    pub nodes: Vec<NodeRecord>,
    pub exceptional_curves: Vec<ExceptionalCurve>,
    /// Multiplicity `n_i` of every germ factor.
    pub factor_multiplicities: Vec<u64>,
    /// Number of analytic branches of every germ factor.
    pub branches: Vec<u64>,
}

impl ResolutionReport {
    /// Order of factor `i` at each step (0 where it does not pass).
    pub fn strict_branch_data(&self, factor: usize) -> Vec<u32> {
        self.steps
            .iter()
            .map(|s| {
                s.curves
                    .iter()
                    .find(|c| c.curve == CurveId::Strict(factor))
                    .map_or(0, |c| c.order)
            })
            .collect()
    }

    pub fn multiplicity_of(&self, id: CurveId) -> u64 {
        match id {
            CurveId::Strict(i) => self.factor_multiplicities[i],
            CurveId::Exceptional(j) => self.exceptional_curves[j].multiplicity,
        }
    }

    /// Local intersection number of two distinct factors, by Noether's formula
    /// over the centers of this resolution.
    pub fn intersection_number(&self, i: usize, j: usize) -> u64 {
        let through_steps: u64 = self
            .steps
            .iter()
            .map(|s| {
                let ord = |f: usize| {
                    s.curves
                        .iter()
                        .find(|c| c.curve == CurveId::Strict(f))
                        .map_or(0, |c| c.order as u64)
                };
                ord(i) * ord(j)
            })
            .sum();
        let direct = self
            .nodes
            .iter()
            .filter(|n| {
                n.owners == (CurveId::Strict(i), CurveId::Strict(j))
                    || n.owners == (CurveId::Strict(j), CurveId::Strict(i))
            })
            .count() as u64;
        through_steps + direct
    }

    pub fn branch_count(&self) -> u64 {
        self.branches.iter().sum()
    }

    /// Least common multiple of all multiplicities of the total transform.
    pub fn lcm_multiplicity(&self) -> Result<u64> {
        let mut l = 1u64;
        for n in self
            .factor_multiplicities
            .iter()
            .chain(self.exceptional_curves.iter().map(|e| &e.multiplicity))
        {
            l = crate::exact::lcm(l, *n)?;
        }
        Ok(l)
    }
}

struct Local {
    parent: Option<usize>,
    chart: u8,
    center: (Rational, Rational),
    exc_u: Option<usize>,
    exc_v: Option<usize>,
    strict: Vec<(usize, BivariatePoly)>,
}

struct Engine<'a> {
    names: Vec<String>,
    mults: &'a [u64],
    steps: Vec<ResolutionStep>,
    nodes: Vec<NodeRecord>,
    exceptional: Vec<ExceptionalCurve>,
}

/// Restriction of `p` to the line `x = 0`, as a polynomial in `y`.
fn restrict_x0(p: &BivariatePoly) -> UPoly {
    let deg = p.degree_in_y().unwrap_or(0) as usize;
    let mut cs = vec![Rational::zero(); deg + 1];
    for (&(i, j), c) in p.terms() {
        if i == 0 {
            cs[j as usize] = c.clone();
        }
    }
    UPoly::new(cs)
}

fn binary_quadratic_is_split(q: &BivariatePoly) -> bool {
    let a = q.coeff(2, 0);
    let b = q.coeff(1, 1);
    let c = q.coeff(0, 2);
    !(&b * &b - Rational::from(4) * &a * &c).is_zero()
}

/// True iff the reduced germ `p` has an ordinary double point at the origin.
pub fn is_ordinary_double(p: &BivariatePoly) -> bool {
    p.constant_term().is_zero() && p.order() == Some(2) && binary_quadratic_is_split(&p.lowest_form())
}

impl Engine<'_> {
    fn mult(&self, id: CurveId) -> u64 {
        match id {
            CurveId::Strict(i) => self.mults[i],
            CurveId::Exceptional(j) => self.exceptional[j].multiplicity,
        }
    }

    fn process(&mut self, local: Local) -> Result<()> {
        let orders: Vec<u32> = local
            .strict
            .iter()
            .map(|(_, p)| p.order().expect("strict transform is nonzero"))
            .collect();
        let excs: Vec<usize> = local.exc_u.iter().chain(local.exc_v.iter()).copied().collect();
        let m = excs.len() as u64 + orders.iter().map(|&o| o as u64).sum::<u64>();
        if m <= 1 {
            return Ok(());
        }
        if m == 2 {
            let mut cone = BivariatePoly::one();
            if local.exc_u.is_some() {
                cone = cone.mul(&BivariatePoly::x());
            }
            if local.exc_v.is_some() {
                cone = cone.mul(&BivariatePoly::y());
            }
            for (_, p) in &local.strict {
                cone = cone.mul(&p.lowest_form());
            }
            if binary_quadratic_is_split(&cone) {
                let mut owners: Vec<CurveId> = excs.iter().map(|&j| CurveId::Exceptional(j)).collect();
                for ((i, _), &o) in local.strict.iter().zip(&orders) {
                    for _ in 0..o {
                        owners.push(CurveId::Strict(*i));
                    }
                }
                let (x, y) = (owners[0], owners[1]);
                self.nodes.push(NodeRecord {
                    a: self.mult(x),
                    b: self.mult(y),
                    owners: (x, y),
                    on_step: local.parent,
                    irrational: false,
                });
                return Ok(());
            }
        }
        self.blow_up(local, &orders, m)
    }

    fn blow_up(&mut self, local: Local, orders: &[u32], m: u64) -> Result<()> {
        let mut curves = Vec::new();
        for j in local.exc_u.iter().chain(local.exc_v.iter()) {
            curves.push(CurveAtCenter {
                curve: CurveId::Exceptional(*j),
                order: 1,
                multiplicity: self.exceptional[*j].multiplicity,
            });
        }
        for ((i, _), &o) in local.strict.iter().zip(orders) {
            curves.push(CurveAtCenter {
                curve: CurveId::Strict(*i),
                order: o,
                multiplicity: self.mults[*i],
            });
        }
        let mut m_star = 0u64;
        for c in &curves {
            let t = (c.order as u64)
                .checked_mul(c.multiplicity)
                .ok_or(Error::Overflow("total transform multiplicity"))?;
            m_star = m_star
                .checked_add(t)
                .ok_or(Error::Overflow("total transform multiplicity"))?;
        }
        let step = self.steps.len();
        let e = self.exceptional.len();
        self.exceptional.push(ExceptionalCurve {
            id: e,
            multiplicity: m_star,
            step,
        });
        self.steps.push(ResolutionStep {
            parent: local.parent,
            chart: local.chart,
            center: local.center.clone(),
            m,
            m_star,
            curves,
            exceptional: e,
        });

        // chart 1
        let chart1: Vec<(usize, BivariatePoly, UPoly)> = local
            .strict
            .iter()
            .zip(orders)
            .map(|((i, p), &o)| {
                let q = p.chart_x().div_x_pow(o);
                let t = restrict_x0(&q);
                (*i, q, t)
            })
            .collect();
        let mut centers: Vec<Rational> = Vec::new();
        let mut cofactors: Vec<(usize, UPoly)> = Vec::new();
        for (i, _, t) in &chart1 {
            let (roots, rest) = t.rational_roots();
            centers.extend(roots.into_iter().map(|(r, _)| r));
            if !rest.is_constant() {
                cofactors.push((*i, rest));
            }
        }
        if local.exc_v.is_some() {
            centers.push(Rational::zero());
        }
        centers.sort();
        centers.dedup();

        for (k, (i, rest)) in cofactors.iter().enumerate() {
            let squarefree = rest.gcd(&rest.derivative()).is_constant();
            let isolated = cofactors
                .iter()
                .enumerate()
                .all(|(l, (_, other))| l == k || rest.gcd(other).is_constant());
            if !(squarefree && isolated) {
                return Err(Error::IrrationalCenter {
                    factor: self.names[*i].clone(),
                });
            }
            for _ in 0..rest.degree().unwrap_or(0) {
                self.nodes.push(NodeRecord {
                    a: m_star,
                    b: self.mults[*i],
                    owners: (CurveId::Exceptional(e), CurveId::Strict(*i)),
                    on_step: Some(step),
                    irrational: true,
                });
            }
        }

        let zero = Rational::zero();
        for c in centers {
            let strict: Vec<(usize, BivariatePoly)> = chart1
                .iter()
                .filter(|(_, _, t)| t.eval(&c).is_zero())
                .map(|(i, q, _)| (*i, q.translate(&zero, &c)))
                .collect();
            let exc_v = if c.is_zero() { local.exc_v } else { None };
            self.process(Local {
                parent: Some(step),
                chart: 1,
                center: (zero.clone(), c),
                exc_u: Some(e),
                exc_v,
                strict,
            })?;
        }

        // chart 2, origin only
        let strict: Vec<(usize, BivariatePoly)> = local
            .strict
            .iter()
            .zip(orders)
            .map(|((i, p), &o)| (*i, p.chart_y().div_y_pow(o)))
            .filter(|(_, q)| q.constant_term().is_zero())
            .collect();
        if local.exc_u.is_some() || !strict.is_empty() {
            self.process(Local {
                parent: Some(step),
                chart: 2,
                center: (zero.clone(), zero),
                exc_u: local.exc_u,
                exc_v: Some(e),
                strict,
            })?;
        }
        Ok(())
    }
}

/// Minimal embedded resolution of the germ at the origin: blow up every
/// singular point of the reduced total transform that is not an ordinary
/// double point.
pub fn embedded_resolution(germ: &CurveGerm) -> Result<ResolutionReport> {
    if germ.is_empty() {
        return Err(Error::NotThroughOrigin);
    }
    let mults: Vec<u64> = germ.factors.iter().map(|f| f.multiplicity).collect();
    let mut engine = Engine {
        names: germ.factors.iter().map(|f| f.poly.to_string()).collect(),
        mults: &mults,
        steps: Vec::new(),
        nodes: Vec::new(),
        exceptional: Vec::new(),
    };
    engine.process(Local {
        parent: None,
        chart: 0,
        center: (Rational::zero(), Rational::zero()),
        exc_u: None,
        exc_v: None,
        strict: germ
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| (i, f.poly.clone()))
            .collect(),
    })?;

    let mut branches = vec![0u64; mults.len()];
    if engine.steps.is_empty() {
        if engine.nodes.is_empty() {
            branches[0] = 1;
        }
        for n in &engine.nodes {
            for id in [n.owners.0, n.owners.1] {
                if let CurveId::Strict(i) = id {
                    branches[i] += 1;
                }
            }
        }
    } else {
        for n in &engine.nodes {
            if let (CurveId::Exceptional(_), CurveId::Strict(i)) | (CurveId::Strict(i), CurveId::Exceptional(_)) =
                n.owners
            {
                branches[i] += 1;
            }
        }
    }

    Ok(ResolutionReport {
        steps: engine.steps,
        nodes: engine.nodes,
        exceptional_curves: engine.exceptional,
        factor_multiplicities: mults,
        branches,
    })
}

/// Result of one blow-up of a germ at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub exceptional_multiplicity: u64,
    /// Strict transforms in chart `(x, x y)`, indexed by germ factor.
    pub chart1: Vec<BivariatePoly>,
    /// Strict transforms in chart `(x y, y)`.
    pub chart2: Vec<BivariatePoly>,
}

pub fn blow_up_once(germ: &CurveGerm) -> Result<BlowUp> {
    if germ.is_empty() {
        return Err(Error::NotThroughOrigin);
    }
    let mut m_star = 0u64;
    let mut chart1 = Vec::new();
    let mut chart2 = Vec::new();
    for f in &germ.factors {
        let o = f.poly.order().expect("nonzero factor");
        if !f.poly.constant_term().is_zero() {
            return Err(Error::NotThroughOrigin);
        }
        m_star = (o as u64)
            .checked_mul(f.multiplicity)
            .and_then(|t| t.checked_add(m_star))
            .ok_or(Error::Overflow("total transform multiplicity"))?;
        chart1.push(f.poly.chart_x().div_x_pow(o));
        chart2.push(f.poly.chart_y().div_y_pow(o));
    }
    Ok(BlowUp {
        exceptional_multiplicity: m_star,
        chart1,
        chart2,
    })
}
