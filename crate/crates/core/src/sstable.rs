//! Semistable model of a fiber under the cyclic base change of degree `d`
//! totally ramified at the fiber's base point.
//!
//! The pullback of `F'` is described combinatorially: over a component of
//! multiplicity `n` lie cyclic covers of total degree `n`, and over a node
//! with branch multiplicities `(a, b)` lie `gcd(a, b)` chains of `(-2)`-curves.
//! Contracting rational leaves then yields the relatively minimal model.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{bracket, gcd, Rational};
use crate::fiber::{NumericBasics, ResolvedFiber};
use crate::quotsing::node_chains;

/// Where a vertex of the pullback graph comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VertexOrigin {
    /// Sheet `sheet` over vertex `vertex` of `F'`.
    Component { vertex: usize, sheet: u64 },
    /// Curve `position` of chain `chain` over edge `edge` of `F'`.
    Chain { edge: usize, chain: u64, position: u64 },
    /// Read from a graph description.
    External,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphVertex {
    pub label: String,
    pub genus: u64,
    pub multiplicity: u64,
    pub origin: VertexOrigin,
}

impl GraphVertex {
    pub fn is_rational(&self) -> bool {
        self.genus == 0
    }

    fn kind_name(&self) -> &'static str {
        match self.origin {
            VertexOrigin::Component { .. } => "component",
            VertexOrigin::Chain { .. } => "chain",
            VertexOrigin::External => "external",
        }
    }
}

/// Vertex-weighted multigraph; self-edges are allowed and count twice
/// towards the degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<(usize, usize)>,
    /// Edge of `F'` each edge lies over, when known.
    #[serde(skip)]
    pub edge_origin: Vec<Option<usize>>,
}

impl DualGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Arithmetic genus of the reduced nodal curve with this dual graph.
    pub fn arithmetic_genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>() + self.edges.len() as i64
            - self.vertices.len() as i64
            + 1
    }

    /// Line-oriented description:
    ///
    /// ```text
    /// vertex <index> <label> genus=<g> mult=<n> kind=<component|chain|external>
    /// edge <index> <index>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(
                out,
                "vertex {i} {} genus={} mult={} kind={}",
                v.label,
                v.genus,
                v.multiplicity,
                v.kind_name()
            );
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "edge {u} {v}");
        }
        out
    }

    /// Parses the format written by [`DualGraph::to_text`]. Blank lines and
    /// lines starting with `#` are ignored; vertex origins become `External`.
    pub fn from_text(text: &str) -> Result<DualGraph> {
        let mut g = DualGraph::default();
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let err = |msg: &str| Error::GraphFormat {
                line: line_no,
                msg: msg.to_string(),
            };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts[0] {
                "vertex" => {
                    if parts.len() < 3 {
                        return Err(err("expected 'vertex <index> <label> ...'"));
                    }
                    let idx: usize = parts[1].parse().map_err(|_| err("bad vertex index"))?;
                    if idx != g.vertices.len() {
                        return Err(err("vertex indices must be consecutive from 0"));
                    }
                    let mut v = GraphVertex {
                        label: parts[2].to_string(),
                        genus: 0,
                        multiplicity: 1,
                        origin: VertexOrigin::External,
                    };
                    for kv in &parts[3..] {
                        let (k, val) = kv.split_once('=').ok_or_else(|| err("expected key=value"))?;
                        match k {
                            "genus" => v.genus = val.parse().map_err(|_| err("bad genus"))?,
                            "mult" => v.multiplicity = val.parse().map_err(|_| err("bad multiplicity"))?,
                            "kind" => {}
                            _ => return Err(err("unknown vertex attribute")),
                        }
                    }
                    g.vertices.push(v);
                }
                "edge" => {
                    if parts.len() != 3 {
                        return Err(err("expected 'edge <index> <index>'"));
                    }
                    let u: usize = parts[1].parse().map_err(|_| err("bad edge endpoint"))?;
                    let v: usize = parts[2].parse().map_err(|_| err("bad edge endpoint"))?;
                    if u >= g.vertices.len() || v >= g.vertices.len() {
                        return Err(err("edge endpoint refers to an unknown vertex"));
                    }
                    g.edges.push((u, v));
                    g.edge_origin.push(None);
                }
                _ => return Err(err("expected 'vertex' or 'edge'")),
            }
        }
        Ok(g)
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemistableModel {
    pub degree: u64,
    /// Pullback graph before contraction.
    pub cover: DualGraph,
    /// Relatively minimal semistable fiber.
    pub graph: DualGraph,
    /// Indices (in `cover`) of the contracted vertices, in contraction order.
    pub contracted: Vec<usize>,
    pub contractions: u64,
    pub c_minus1: Rational,
    /// Number of nodes of the semistable fiber.
    pub e_count: u64,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// Whether removing edge `e` disconnects its endpoints in `F'`.
fn is_bridge(rf: &ResolvedFiber, e: usize) -> bool {
    let (s, t) = (rf.edges[e].u, rf.edges[e].v);
    if s == t {
        return false;
    }
    let mut adj = vec![Vec::new(); rf.vertices.len()];
    for (k, ed) in rf.edges.iter().enumerate() {
        if k != e {
            adj[ed.u].push(ed.v);
            adj[ed.v].push(ed.u);
        }
    }
    let mut seen = vec![false; rf.vertices.len()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(x) = stack.pop() {
        if x == t {
            return false;
        }
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    true
}

/// Partner multiplicities of the branches through each vertex.
fn partners(rf: &ResolvedFiber) -> Vec<Vec<u64>> {
    let mut p = vec![Vec::new(); rf.vertices.len()];
    for e in &rf.edges {
        p[e.u].push(e.b);
        p[e.v].push(e.a);
    }
    p
}

fn build_cover(rf: &ResolvedFiber, d: u64, counts: &[u64], partners: &[Vec<u64>]) -> Result<DualGraph> {
    let mut g = DualGraph::default();
    let mut first = Vec::with_capacity(rf.vertices.len());
    for (vi, v) in rf.vertices.iter().enumerate() {
        let n = v.multiplicity;
        let c = counts[vi];
        let mut twice: i128 = (n / c) as i128 * (2 * v.genus as i128 - 2);
        for &np in &partners[vi] {
            let pts = gcd(n, np);
            twice += (pts / c) as i128 * ((n / pts) as i128 - 1);
        }
        if twice < -2 || twice % 2 != 0 {
            return Err(Error::Config(format!(
                "Riemann-Hurwitz gives 2g - 2 = {twice} over component {}",
                v.label
            )));
        }
        first.push(g.vertices.len());
        for sheet in 0..c {
            g.vertices.push(GraphVertex {
                label: if c == 1 {
                    format!("{}~", v.label)
                } else {
                    format!("{}~{sheet}", v.label)
                },
                genus: (twice / 2 + 1) as u64,
                multiplicity: 1,
                origin: VertexOrigin::Component { vertex: vi, sheet },
            });
        }
    }
    for (ei, e) in rf.edges.iter().enumerate() {
        let (cu, cv) = (counts[e.u], counts[e.v]);
        if cu > 1 && cv > 1 && !is_bridge(rf, ei) {
            return Err(Error::AmbiguousAttachment(
                rf.vertices[e.u].label.clone(),
                rf.vertices[e.v].label.clone(),
            ));
        }
        let (chains, len) = node_chains(d, e.a, e.b)?;
        for j in 0..chains {
            let mut prev = first[e.u] + (j % cu) as usize;
            for pos in 0..len {
                let id = g.vertices.len();
                g.vertices.push(GraphVertex {
                    label: format!("{}-{}#{j}.{pos}", rf.vertices[e.u].label, rf.vertices[e.v].label),
                    genus: 0,
                    multiplicity: 1,
                    origin: VertexOrigin::Chain {
                        edge: ei,
                        chain: j,
                        position: pos,
                    },
                });
                g.edges.push((prev, id));
                g.edge_origin.push(Some(ei));
                prev = id;
            }
            g.edges.push((prev, first[e.v] + (j % cv) as usize));
            g.edge_origin.push(Some(ei));
        }
    }
    Ok(g)
}

/// Dual graph of the pullback of `F'` under the cyclic base change of degree
/// `d`, with the `A_n` chains over the nodes resolved.
///
/// The number of components over a rational vertex is the gcd of its
/// multiplicity and the multiplicities of its neighbours. Over a vertex of
/// positive genus it can be any divisor of that gcd; the unique choice giving a
/// connected fiber is taken, and if several are possible the monodromy is
/// reported as ambiguous.
pub fn cyclic_cover_graph(rf: &ResolvedFiber, d: u64) -> Result<DualGraph> {
    for v in &rf.vertices {
        if d == 0 || !d.is_multiple_of(v.multiplicity) {
            return Err(Error::DegreeNotDivisible {
                degree: d,
                multiplicity: v.multiplicity,
            });
        }
    }
    let partners = partners(rf);
    let mut choices: Vec<Vec<u64>> = Vec::new();
    for (vi, v) in rf.vertices.iter().enumerate() {
        let g = partners[vi].iter().fold(v.multiplicity, |acc, &p| gcd(acc, p));
        choices.push(if v.genus == 0 || g == 1 { vec![g] } else { divisors(g) });
    }
    let combos: u64 = choices.iter().map(|c| c.len() as u64).product();
    if combos > 4096 {
        let v = choices.iter().position(|c| c.len() > 1).unwrap();
        return Err(Error::AmbiguousMonodromy(rf.vertices[v].label.clone()));
    }

    let mut found: Option<DualGraph> = None;
    let mut counts: Vec<u64> = choices.iter().map(|c| c[0]).collect();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let g = build_cover(rf, d, &counts, &partners)?;
        if g.is_connected() {
            if found.is_some() {
                let v = choices.iter().position(|c| c.len() > 1).unwrap();
                return Err(Error::AmbiguousMonodromy(rf.vertices[v].label.clone()));
            }
            found = Some(g);
        }
        // next combination
        let mut k = 0;
        loop {
            if k == choices.len() {
                return found.ok_or(Error::Disconnected);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                counts[k] = choices[k][idx[k]];
                break;
            }
            idx[k] = 0;
            counts[k] = choices[k][0];
            k += 1;
        }
    }
}

/// Repeatedly removes rational vertices of degree at most one (the
/// `(-1)`-curves of a reduced fiber), lowest index first.
pub fn contract_minus_ones(cover: &DualGraph, d: u64) -> SemistableModel {
    let n = cover.vertices.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &cover.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut deg = cover.degrees();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut work: BTreeSet<usize> = (0..n)
        .filter(|&v| cover.vertices[v].is_rational() && deg[v] <= 1)
        .collect();
    let mut contracted = Vec::new();
    while let Some(v) = work.pop_first() {
        if !alive[v] || remaining == 1 {
            continue;
        }
        alive[v] = false;
        remaining -= 1;
        contracted.push(v);
        for &w in &adj[v] {
            if alive[w] {
                deg[w] -= 1;
                if cover.vertices[w].is_rational() && deg[w] <= 1 {
                    work.insert(w);
                }
            }
        }
    }
    let mut new_index = vec![usize::MAX; n];
    let mut graph = DualGraph::default();
    for v in 0..n {
        if alive[v] {
            new_index[v] = graph.vertices.len();
            graph.vertices.push(cover.vertices[v].clone());
        }
    }
    for (k, &(u, v)) in cover.edges.iter().enumerate() {
        if alive[u] && alive[v] {
            graph.edges.push((new_index[u], new_index[v]));
            graph.edge_origin.push(cover.edge_origin.get(k).copied().flatten());
        }
    }
    let contractions = contracted.len() as u64;
    SemistableModel {
        degree: d,
        e_count: graph.edges.len() as u64,
        cover: cover.clone(),
        graph,
        contracted,
        contractions,
        c_minus1: Rational::new(contractions, d),
    }
}

pub fn semistable_model(rf: &ResolvedFiber, d: u64) -> Result<SemistableModel> {
    Ok(contract_minus_ones(&cyclic_cover_graph(rf, d)?, d))
}

/// `c_2(F)` recomputed from the Euler numbers of the pullback fibers:
/// `e_F - (edges of the pullback)/d + c_{-1}`.
pub fn verify_c2(model: &SemistableModel, basics: &NumericBasics) -> Rational {
    Rational::from(basics.e) - Rational::new(model.cover.edges.len() as u64, model.degree) + &model.c_minus1
}

/// Sum of `[a, b]` over the nodes of `F'` all of whose pullback edges were
/// contracted. `None` when the cover graph carries no provenance.
pub fn verify_remark_beta(rf: &ResolvedFiber, model: &SemistableModel) -> Option<Rational> {
    let cover = &model.cover;
    if cover.edge_origin.len() != cover.edges.len() || cover.edge_origin.iter().any(Option::is_none) {
        return None;
    }
    let mut removed = vec![false; cover.vertices.len()];
    for &v in &model.contracted {
        removed[v] = true;
    }
    let mut fully = vec![true; rf.edges.len()];
    for (k, &(u, v)) in cover.edges.iter().enumerate() {
        let e = cover.edge_origin[k].unwrap();
        if !removed[u] && !removed[v] {
            fully[e] = false;
        }
    }
    let mut sum = Rational::zero();
    for (e, ok) in fully.into_iter().enumerate() {
        if ok {
            sum += bracket(rf.edges[e].a, rf.edges[e].b).ok()?;
        }
    }
    Some(sum)
}
