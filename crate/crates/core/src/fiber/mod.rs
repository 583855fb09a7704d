//! Fiber configurations and their base-change invariants.
//!
//! A fiber is described by its components (multiplicity and geometric
//! genus) and its singular points, each either a plain node between two
//! components or a local germ whose factors are mapped to components.

mod kodaira;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::curvealg::{
    embedded_resolution, is_ordinary_double, local_invariants, parse_germ, CurveGerm, CurveId,
    LocalInvariants, ResolutionReport,
};
use crate::error::{Error, Result};
use crate::exact::{bracket, lcm, Rational};
use crate::sstable;

pub use kodaira::{kodaira_elliptic, standard_configuration, KodairaType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    pub multiplicity: u64,
    pub geometric_genus: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SingularPoint {
    /// Two smooth branches of the given components meeting transversally.
    Node {
        components: [String; 2],
        #[serde(default = "one")]
        local_intersection: u64,
    },
    /// A local equation at the point; `branch_map[i]` is the component of the
    /// `i`-th factor of the parsed germ.
    Germ {
        local_equation: String,
        branch_map: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberConfig {
    pub components: Vec<Component>,
    #[serde(default)]
    pub singular_points: Vec<SingularPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_genus: Option<u64>,
}

impl FiberConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn component_index(&self, id: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::Config(format!("unknown component '{id}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Strict,
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberVertex {
    pub label: String,
    pub multiplicity: u64,
    pub genus: u64,
    pub kind: VertexKind,
}

/// A node of the normal-crossing model; `a` and `b` are the multiplicities of
/// the components through it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberEdge {
    pub u: usize,
    pub v: usize,
    pub a: u64,
    pub b: u64,
}

/// Data attached to one singular point of the configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointData {
    pub invariants: LocalInvariants,
    /// Component index of every branch factor.
    pub factor_components: Vec<usize>,
    #[serde(skip)]
    pub germ: Option<CurveGerm>,
    #[serde(skip)]
    pub report: Option<ResolutionReport>,
}

/// Dual graph of the embedded resolution `F'` of a fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolvedFiber {
    pub vertices: Vec<FiberVertex>,
    pub edges: Vec<FiberEdge>,
    /// Least common multiple of all multiplicities of `F'`.
    pub m: u64,
    pub points: Vec<PointData>,
    pub warnings: Vec<String>,
}

impl ResolvedFiber {
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.v == v) as usize)
            .sum()
    }
}

fn check_connected(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<()> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for (a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    if (0..n).all(|x| find(&mut parent, x) == root) {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

/// Runs the embedded resolution at every singular point and assembles the
/// dual graph of `F'`.
pub fn resolve_fiber(cfg: &FiberConfig) -> Result<ResolvedFiber> {
    if cfg.components.is_empty() {
        return Err(Error::Config("a fiber needs at least one component".into()));
    }
    let mut seen = BTreeSet::new();
    for c in &cfg.components {
        if c.multiplicity == 0 {
            return Err(Error::Config(format!("component '{}' has multiplicity 0", c.id)));
        }
        if !seen.insert(c.id.as_str()) {
            return Err(Error::Config(format!("duplicate component id '{}'", c.id)));
        }
    }
    let mut vertices: Vec<FiberVertex> = cfg
        .components
        .iter()
        .map(|c| FiberVertex {
            label: c.id.clone(),
            multiplicity: c.multiplicity,
            genus: c.geometric_genus,
            kind: VertexKind::Strict,
        })
        .collect();
    let mut edges = Vec::new();
    let mut points = Vec::new();
    let mut warnings = Vec::new();

    for (p, sp) in cfg.singular_points.iter().enumerate() {
        match sp {
            SingularPoint::Node {
                components,
                local_intersection,
            } => {
                if *local_intersection != 1 {
                    return Err(Error::Config(format!(
                        "singular point {p}: a node has local intersection 1; \
                         describe higher contact with a germ"
                    )));
                }
                let u = cfg.component_index(&components[0])?;
                let v = cfg.component_index(&components[1])?;
                let (a, b) = (vertices[u].multiplicity, vertices[v].multiplicity);
                edges.push(FiberEdge { u, v, a, b });
                points.push(PointData {
                    invariants: LocalInvariants {
                        alpha: 0,
                        beta: bracket(a, b)?,
                        mu: 1,
                        delta: 1,
                        k: 2,
                        nu: 2,
                    },
                    factor_components: vec![u, v],
                    germ: None,
                    report: None,
                });
            }
            SingularPoint::Germ {
                local_equation,
                branch_map,
            } => {
                let germ = parse_germ(local_equation)?;
                warnings.extend(germ.warnings().into_iter().map(|w| format!("singular point {p}: {w}")));
                if germ.is_empty() {
                    return Err(Error::NotThroughOrigin);
                }
                if branch_map.len() != germ.factors.len() {
                    return Err(Error::Config(format!(
                        "singular point {p}: germ '{local_equation}' has {} factors ({germ}) \
                         but branch_map lists {}",
                        germ.factors.len(),
                        branch_map.len()
                    )));
                }
                let mut comps = Vec::new();
                for (f, id) in germ.factors.iter().zip(branch_map) {
                    let ci = cfg.component_index(id)?;
                    if f.multiplicity != cfg.components[ci].multiplicity {
                        return Err(Error::Config(format!(
                            "singular point {p}: factor {} has multiplicity {} but component '{id}' has multiplicity {}",
                            f.poly, f.multiplicity, cfg.components[ci].multiplicity
                        )));
                    }
                    comps.push(ci);
                }
                let report = embedded_resolution(&germ)?;
                let invariants = LocalInvariants::from_report(&germ, &report)?;
                let base = vertices.len();
                for e in &report.exceptional_curves {
                    vertices.push(FiberVertex {
                        label: format!("E{p}.{}", e.id),
                        multiplicity: e.multiplicity,
                        genus: 0,
                        kind: VertexKind::Exceptional,
                    });
                }
                let vertex_of = |id: CurveId| match id {
                    CurveId::Strict(i) => comps[i],
                    CurveId::Exceptional(j) => base + j,
                };
                for n in &report.nodes {
                    edges.push(FiberEdge {
                        u: vertex_of(n.owners.0),
                        v: vertex_of(n.owners.1),
                        a: n.a,
                        b: n.b,
                    });
                }
                points.push(PointData {
                    invariants,
                    factor_components: comps,
                    germ: Some(germ),
                    report: Some(report),
                });
            }
        }
    }

    check_connected(vertices.len(), edges.iter().map(|e| (e.u, e.v)))?;
    let mut m = 1;
    for v in &vertices {
        m = lcm(m, v.multiplicity)?;
    }
    Ok(ResolvedFiber {
        vertices,
        edges,
        m,
        points,
        warnings,
    })
}

/// Numerical data of a fiber that does not involve the semistable model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericBasics {
    #[serde(rename = "N")]
    pub n: u64,
    pub e: u64,
    pub mu_total: u64,
    pub fred_sq: i64,
    pub pa_red: i64,
    pub genus: u64,
    pub alpha_total: u64,
    pub beta_total: Rational,
    /// Self-intersection of every component, in input order.
    pub self_intersections: Vec<i64>,
    /// `Gamma_i . Gamma_j` for `i < j` (zero pairs omitted).
    #[serde(serialize_with = "pairs_as_list")]
    pub intersections: BTreeMap<(usize, usize), u64>,
    /// Arithmetic genus of every component.
    pub component_pa: Vec<u64>,
}

fn pairs_as_list<S: serde::Serializer>(
    map: &BTreeMap<(usize, usize), u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(map.iter().map(|(&(i, j), &n)| [i as u64, j as u64, n]))
}

pub fn numeric_basics(cfg: &FiberConfig, rf: &ResolvedFiber) -> Result<NumericBasics> {
    let l = cfg.components.len();
    let mut inter: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut extra_pa = vec![0u64; l];
    let mut mu_total = 0u64;
    let mut delta_total = 0u64;
    let mut alpha_total = 0u64;
    let mut beta_total = Rational::zero();

    for pd in &rf.points {
        mu_total += pd.invariants.mu;
        delta_total += pd.invariants.delta;
        alpha_total += pd.invariants.alpha;
        beta_total += &pd.invariants.beta;
        match (&pd.germ, &pd.report) {
            (Some(germ), Some(report)) => {
                let comps = &pd.factor_components;
                for i in 0..comps.len() {
                    for j in i + 1..comps.len() {
                        if comps[i] != comps[j] {
                            let key = (comps[i].min(comps[j]), comps[i].max(comps[j]));
                            *inter.entry(key).or_default() += report.intersection_number(i, j);
                        }
                    }
                }
                let distinct: BTreeSet<usize> = comps.iter().copied().collect();
                for c in distinct {
                    let idx: Vec<usize> = (0..comps.len()).filter(|&i| comps[i] == c).collect();
                    let delta = if idx.len() == comps.len() {
                        pd.invariants.delta
                    } else {
                        local_invariants(&germ.restrict(&idx))?.delta
                    };
                    extra_pa[c] += delta;
                }
            }
            _ => {
                let (u, v) = (pd.factor_components[0], pd.factor_components[1]);
                if u == v {
                    extra_pa[u] += 1;
                } else {
                    *inter.entry((u.min(v), u.max(v))).or_default() += 1;
                }
            }
        }
    }

    let mults: Vec<i64> = cfg.components.iter().map(|c| c.multiplicity as i64).collect();
    let mut self_int = Vec::with_capacity(l);
    for i in 0..l {
        let s: i64 = inter
            .iter()
            .filter_map(|(&(a, b), &x)| {
                if a == i {
                    Some(mults[b] * x as i64)
                } else if b == i {
                    Some(mults[a] * x as i64)
                } else {
                    None
                }
            })
            .sum();
        if s % mults[i] != 0 {
            return Err(Error::NonIntegralSelfIntersection {
                component: cfg.components[i].id.clone(),
                value: Rational::new(-s, mults[i]).to_string(),
            });
        }
        self_int.push(-s / mults[i]);
    }

    let component_pa: Vec<u64> = cfg
        .components
        .iter()
        .zip(&extra_pa)
        .map(|(c, x)| c.geometric_genus + x)
        .collect();
    for i in 0..l {
        if component_pa[i] == 0 && self_int[i] == -1 {
            return Err(Error::NotRelativelyMinimal(cfg.components[i].id.clone()));
        }
    }
    let two_g_minus_two: i64 = (0..l)
        .map(|i| mults[i] * (2 * component_pa[i] as i64 - 2 - self_int[i]))
        .sum();
    if two_g_minus_two % 2 != 0 {
        return Err(Error::Config(format!(
            "adjunction gives 2g - 2 = {two_g_minus_two}, which is odd"
        )));
    }
    let g = two_g_minus_two / 2 + 1;
    if g <= 0 {
        return Err(Error::GenusOutOfRange(g));
    }
    if let Some(declared) = cfg.declared_genus {
        if declared as i64 != g {
            return Err(Error::GenusMismatch {
                declared,
                computed: g,
            });
        }
    }
    let genus_sum: i64 = cfg.components.iter().map(|c| c.geometric_genus as i64).sum();
    let pa_red = genus_sum + delta_total as i64 - l as i64 + 1;
    let fred_sq = self_int.iter().sum::<i64>() + 2 * inter.values().map(|&x| x as i64).sum::<i64>();
    let n = g - pa_red;
    if n < 0 {
        return Err(Error::Config(format!(
            "p_a(F_red) = {pa_red} exceeds the fiber genus {g}"
        )));
    }
    Ok(NumericBasics {
        n: n as u64,
        e: 2 * n as u64 + mu_total,
        mu_total,
        fred_sq,
        pa_red,
        genus: g as u64,
        alpha_total,
        beta_total,
        self_intersections: self_int,
        intersections: inter,
        component_pa,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberInvariants {
    pub c1sq: Rational,
    pub c2: Rational,
    pub chi: Rational,
    pub c_minus1: Rational,
    #[serde(rename = "N")]
    pub n: u64,
    pub e: u64,
    pub mu_total: u64,
    pub fred_sq: i64,
    pub pa_red: i64,
    pub genus: u64,
    /// `M_F`.
    pub m: u64,
    pub alpha_total: u64,
    pub beta_total: Rational,
    pub semistable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Rational>,
}

impl FiberInvariants {
    /// The invariants with `c_{-1}` replaced; `chi` does not change.
    pub fn with_c_minus1(&self, c: &Rational) -> (Rational, Rational, Rational) {
        let c1sq = Rational::from(4 * self.n as i64 + self.fred_sq) + Rational::from(self.alpha_total) - c;
        let c2 = Rational::from(2 * self.n + self.mu_total) - &self.beta_total + c;
        let chi = (&c1sq + &c2) / Rational::from(12);
        (c1sq, c2, chi)
    }
}

/// Everything computed for one fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberAnalysis {
    pub resolved: ResolvedFiber,
    pub basics: NumericBasics,
    pub model: sstable::SemistableModel,
    pub invariants: FiberInvariants,
}

pub fn analyze(cfg: &FiberConfig) -> Result<FiberAnalysis> {
    analyze_at_degree(cfg, None)
}

/// Like [`analyze`], but builds the semistable model at degree `d` (a
/// multiple of `M_F`) instead of `M_F`.
pub fn analyze_at_degree(cfg: &FiberConfig, d: Option<u64>) -> Result<FiberAnalysis> {
    let rf = resolve_fiber(cfg)?;
    let basics = numeric_basics(cfg, &rf)?;
    if basics.genus < 2 {
        return Err(Error::GenusOutOfRange(basics.genus as i64));
    }
    let d = d.unwrap_or(rf.m);
    let model = sstable::semistable_model(&rf, d)?;
    let semistable = is_semistable_resolved(cfg, &rf);
    let mut inv = FiberInvariants {
        c1sq: Rational::zero(),
        c2: Rational::zero(),
        chi: Rational::zero(),
        c_minus1: model.c_minus1.clone(),
        n: basics.n,
        e: basics.e,
        mu_total: basics.mu_total,
        fred_sq: basics.fred_sq,
        pa_red: basics.pa_red,
        genus: basics.genus,
        m: rf.m,
        alpha_total: basics.alpha_total,
        beta_total: basics.beta_total.clone(),
        semistable,
        lambda: None,
    };
    let (c1sq, c2, chi) = inv.with_c_minus1(&model.c_minus1);
    inv.lambda = if chi.is_zero() {
        None
    } else {
        Some(&c1sq / &chi)
    };
    inv.c1sq = c1sq;
    inv.c2 = c2;
    inv.chi = chi;
    Ok(FiberAnalysis {
        resolved: rf,
        basics,
        model,
        invariants: inv,
    })
}

pub fn invariants(cfg: &FiberConfig) -> Result<FiberInvariants> {
    Ok(analyze(cfg)?.invariants)
}

fn is_semistable_resolved(cfg: &FiberConfig, rf: &ResolvedFiber) -> bool {
    cfg.components.iter().all(|c| c.multiplicity == 1)
        && rf.points.iter().all(|pd| match &pd.germ {
            None => true,
            Some(g) => g.reduced_multiplicity() <= 1 || is_ordinary_double(&g.reduced()),
        })
}

/// True iff all multiplicities are 1 and every singular point is a node.
pub fn is_semistable(cfg: &FiberConfig) -> bool {
    if cfg.components.iter().any(|c| c.multiplicity != 1) {
        return false;
    }
    cfg.singular_points.iter().all(|sp| match sp {
        SingularPoint::Node { .. } => true,
        SingularPoint::Germ { local_equation, .. } => match parse_germ(local_equation) {
            Ok(g) => g.reduced_multiplicity() <= 1 || is_ordinary_double(&g.reduced()),
            Err(_) => false,
        },
    })
}
