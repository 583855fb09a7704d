//! Random valid fibers for corpus-level tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use pencil_core::fiber::{analyze, Component, FiberAnalysis, FiberConfig, SingularPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Irreducible branches through the origin, with their degrees.
pub const BRANCHES: &[(&str, u32)] = &[
    ("x", 1),
    ("y", 1),
    ("x+y", 1),
    ("x-y", 1),
    ("x+2*y", 1),
    ("x-y^2", 2),
    ("y-x^2", 2),
    ("x+y^2", 2),
    ("x^2-y^3", 3),
    ("x^2+y^3", 3),
    ("y^2-x^3", 3),
    ("x^3-y^4", 4),
    ("x^2-y^5", 5),
];

pub struct Generated {
    pub cfg: FiberConfig,
    pub analysis: FiberAnalysis,
}

/// One attempt at a random fiber; may be invalid.
pub fn random_config(rng: &mut ChaCha8Rng) -> FiberConfig {
    let ncomp = rng.random_range(1..=3usize);
    let components: Vec<Component> = (0..ncomp)
        .map(|i| Component {
            id: format!("C{i}"),
            multiplicity: [1, 1, 1, 2, 3][rng.random_range(0..5)],
            geometric_genus: rng.random_range(0..=3),
        })
        .collect();
    let mut points = Vec::new();
    for _ in 0..rng.random_range(0..=2) {
        let nb = rng.random_range(1..=3usize);
        let mut chosen: Vec<usize> = Vec::new();
        while chosen.len() < nb {
            let b = rng.random_range(0..BRANCHES.len());
            if !chosen.contains(&b) {
                chosen.push(b);
            }
        }
        let owners: Vec<usize> = (0..nb).map(|_| rng.random_range(0..ncomp)).collect();
        let degree: u64 = chosen
            .iter()
            .zip(&owners)
            .map(|(&b, &o)| BRANCHES[b].1 as u64 * components[o].multiplicity)
            .sum();
        if degree > 6 {
            continue;
        }
        let eq: Vec<String> = chosen
            .iter()
            .zip(&owners)
            .map(|(&b, &o)| match components[o].multiplicity {
                1 => format!("({})", BRANCHES[b].0),
                n => format!("({})^{n}", BRANCHES[b].0),
            })
            .collect();
        points.push(SingularPoint::Germ {
            local_equation: eq.join("*"),
            branch_map: owners.iter().map(|&o| components[o].id.clone()).collect(),
        });
    }
    for _ in 0..rng.random_range(0..=2) {
        let a = rng.random_range(0..ncomp);
        let b = rng.random_range(0..ncomp);
        points.push(SingularPoint::Node {
            components: [components[a].id.clone(), components[b].id.clone()],
            local_intersection: 1,
        });
    }
    FiberConfig {
        components,
        singular_points: points,
        declared_genus: None,
    }
}

/// First valid fiber drawn from `seed`.
pub fn random_fiber(seed: u64) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cfg = random_config(&mut rng);
        if let Ok(analysis) = analyze(&cfg) {
            return Generated { cfg, analysis };
        }
    }
}

/// `want` valid fibers from a fixed seed, with a tally of rejection reasons.
pub fn corpus(seed: u64, want: usize) -> (Vec<Generated>, BTreeMap<String, usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut rejected = BTreeMap::new();
    let mut attempts = 0;
    while out.len() < want && attempts < 100 * want {
        attempts += 1;
        let cfg = random_config(&mut rng);
        match analyze(&cfg) {
            Ok(analysis) => out.push(Generated { cfg, analysis }),
            Err(e) => {
                let kind = format!("{e:?}");
                let kind = kind.split(['(', ' ', '{']).next().unwrap_or("").to_string();
                *rejected.entry(kind).or_insert(0) += 1;
            }
        }
    }
    (out, rejected)
}
