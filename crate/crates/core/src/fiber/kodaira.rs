use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{Component, FiberConfig, SingularPoint};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Kodaira type of a singular fiber of an elliptic fibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KodairaType {
    /// `mI_b`; `m = 1` is the reduced type `I_b`.
    I { m: u64, b: u64 },
    /// `I*_b`.
    IStar(u64),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Topological Euler number of the fiber.
    pub fn euler_number(&self) -> u64 {
        match *self {
            KodairaType::I { b, .. } => b,
            KodairaType::IStar(b) => b + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// The types that are neither `mI_b` nor `I*_b` with `b > 0`.
    pub fn others() -> Vec<KodairaType> {
        vec![
            KodairaType::II,
            KodairaType::III,
            KodairaType::IV,
            KodairaType::IStar(0),
            KodairaType::IVStar,
            KodairaType::IIIStar,
            KodairaType::IIStar,
        ]
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KodairaType::I { m: 1, b } => write!(f, "I{b}"),
            KodairaType::I { m, b } => write!(f, "{m}I{b}"),
            KodairaType::IStar(b) => write!(f, "I{b}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;

    /// Accepts `II`, `III`, `IV`, `II*`, `III*`, `IV*`, `I3`, `I_3`, `2I3`,
    /// `2I_3`, `I0*`, `I*2`, `I_2*` and `I*_2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownKodairaType(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "II" => return Ok(KodairaType::II),
            "III" => return Ok(KodairaType::III),
            "IV" => return Ok(KodairaType::IV),
            "II*" => return Ok(KodairaType::IIStar),
            "III*" => return Ok(KodairaType::IIIStar),
            "IV*" => return Ok(KodairaType::IVStar),
            _ => {}
        }
        let digits = t.chars().take_while(|c| c.is_ascii_digit()).count();
        let m: u64 = if digits == 0 { 1 } else { t[..digits].parse().map_err(|_| bad())? };
        let rest = t[digits..].strip_prefix('I').ok_or_else(bad)?;
        let star = rest.contains('*');
        let num: String = rest.chars().filter(|c| *c != '*' && *c != '_').collect();
        if rest.chars().filter(|c| *c == '*').count() > 1 || num.is_empty() || m == 0 {
            return Err(bad());
        }
        let b: u64 = num.parse().map_err(|_| bad())?;
        if star {
            if digits > 0 {
                return Err(bad());
            }
            Ok(KodairaType::IStar(b))
        } else {
            Ok(KodairaType::I { m, b })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticInvariants {
    pub c1sq: Rational,
    pub c2: Rational,
    pub chi: Rational,
}

/// Base-change invariants of an elliptic fiber of the given type.
pub fn kodaira_elliptic(t: &KodairaType) -> EllipticInvariants {
    let c2 = match *t {
        KodairaType::I { .. } => 0,
        KodairaType::IStar(b) if b > 0 => 6,
        other => other.euler_number(),
    };
    EllipticInvariants {
        c1sq: Rational::zero(),
        c2: Rational::from(c2),
        chi: Rational::new(c2, 12),
    }
}

fn comp(id: &str, n: u64, g: u64) -> Component {
    Component {
        id: id.to_string(),
        multiplicity: n,
        geometric_genus: g,
    }
}

fn node(a: &str, b: &str) -> SingularPoint {
    SingularPoint::Node {
        components: [a.to_string(), b.to_string()],
        local_intersection: 1,
    }
}

fn germ(eq: &str, map: &[&str]) -> SingularPoint {
    SingularPoint::Germ {
        local_equation: eq.to_string(),
        branch_map: map.iter().map(|s| s.to_string()).collect(),
    }
}

/// A tree of rational curves with the given multiplicities and edges.
fn tree(mults: &[(&str, u64)], edges: &[(&str, &str)]) -> FiberConfig {
    FiberConfig {
        components: mults.iter().map(|(id, n)| comp(id, *n, 0)).collect(),
        singular_points: edges.iter().map(|(a, b)| node(a, b)).collect(),
        declared_genus: Some(1),
    }
}

/// The usual configuration of curves realizing the type.
pub fn standard_configuration(t: &KodairaType) -> FiberConfig {
    match *t {
        KodairaType::I { m, b: 0 } => FiberConfig {
            components: vec![comp("E", m, 1)],
            singular_points: vec![],
            declared_genus: Some(1),
        },
        KodairaType::I { m, b: 1 } => FiberConfig {
            components: vec![comp("E", m, 0)],
            singular_points: vec![node("E", "E")],
            declared_genus: Some(1),
        },
        KodairaType::I { m, b } => {
            let ids: Vec<String> = (0..b).map(|i| format!("C{i}")).collect();
            FiberConfig {
                components: ids.iter().map(|id| comp(id, m, 0)).collect(),
                singular_points: (0..b as usize)
                    .map(|i| node(&ids[i], &ids[(i + 1) % b as usize]))
                    .collect(),
                declared_genus: Some(1),
            }
        }
        KodairaType::IStar(b) => {
            let ids: Vec<String> = (0..=b).map(|i| format!("T{i}")).collect();
            let mut components = vec![comp("A", 1, 0), comp("B", 1, 0), comp("C", 1, 0), comp("D", 1, 0)];
            components.extend(ids.iter().map(|id| comp(id, 2, 0)));
            let last = ids.last().unwrap();
            let mut singular_points = vec![node("A", &ids[0]), node("B", &ids[0]), node("C", last), node("D", last)];
            for w in ids.windows(2) {
                singular_points.push(node(&w[0], &w[1]));
            }
            FiberConfig {
                components,
                singular_points,
                declared_genus: Some(1),
            }
        }
        KodairaType::II => FiberConfig {
            components: vec![comp("C", 1, 0)],
            singular_points: vec![germ("x^2+y^3", &["C"])],
            declared_genus: Some(1),
        },
        KodairaType::III => FiberConfig {
            components: vec![comp("A", 1, 0), comp("B", 1, 0)],
            singular_points: vec![germ("x*(x-y^2)", &["A", "B"])],
            declared_genus: Some(1),
        },
        KodairaType::IV => FiberConfig {
            components: vec![comp("A", 1, 0), comp("B", 1, 0), comp("C", 1, 0)],
            singular_points: vec![germ("x*y*(x+y)", &["A", "B", "C"])],
            declared_genus: Some(1),
        },
        KodairaType::IVStar => tree(
            &[("Z", 3), ("A1", 2), ("A2", 1), ("B1", 2), ("B2", 1), ("C1", 2), ("C2", 1)],
            &[("Z", "A1"), ("A1", "A2"), ("Z", "B1"), ("B1", "B2"), ("Z", "C1"), ("C1", "C2")],
        ),
        KodairaType::IIIStar => tree(
            &[("L1", 1), ("L2", 2), ("L3", 3), ("Z", 4), ("R3", 3), ("R2", 2), ("R1", 1), ("T", 2)],
            &[("L1", "L2"), ("L2", "L3"), ("L3", "Z"), ("Z", "R3"), ("R3", "R2"), ("R2", "R1"), ("Z", "T")],
        ),
        KodairaType::IIStar => tree(
            &[("P1", 1), ("P2", 2), ("P3", 3), ("P4", 4), ("P5", 5), ("Z", 6), ("Q1", 4), ("Q2", 2), ("T", 3)],
            &[
                ("P1", "P2"),
                ("P2", "P3"),
                ("P3", "P4"),
                ("P4", "P5"),
                ("P5", "Z"),
                ("Z", "Q1"),
                ("Q1", "Q2"),
                ("Z", "T"),
            ],
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{numeric_basics, resolve_fiber};

    #[test]
    fn parse_tags() {
        assert_eq!("I3".parse::<KodairaType>().unwrap(), KodairaType::I { m: 1, b: 3 });
        assert_eq!("2I_0".parse::<KodairaType>().unwrap(), KodairaType::I { m: 2, b: 0 });
        assert_eq!("I0*".parse::<KodairaType>().unwrap(), KodairaType::IStar(0));
        assert_eq!("I*_2".parse::<KodairaType>().unwrap(), KodairaType::IStar(2));
        assert_eq!("III*".parse::<KodairaType>().unwrap(), KodairaType::IIIStar);
        assert!("V".parse::<KodairaType>().is_err());
        assert!("2I3*".parse::<KodairaType>().is_err());
        for t in KodairaType::others() {
            assert_eq!(t.to_string().parse::<KodairaType>().unwrap(), t);
        }
    }

    #[test]
    fn table() {
        let i = kodaira_elliptic(&KodairaType::I { m: 3, b: 4 });
        assert!(i.c1sq.is_zero() && i.c2.is_zero() && i.chi.is_zero());
        let i = kodaira_elliptic(&KodairaType::IStar(2));
        assert_eq!((i.c2, i.chi), (Rational::from(6), Rational::new(1, 2)));
        let i = kodaira_elliptic(&KodairaType::II);
        assert_eq!((i.c2, i.chi), (Rational::from(2), Rational::new(1, 6)));
    }

    #[test]
    fn standard_configurations_have_the_right_euler_number() {
        let mut all = KodairaType::others();
        all.extend([
            KodairaType::IStar(1),
            KodairaType::IStar(3),
            KodairaType::I { m: 1, b: 1 },
            KodairaType::I { m: 1, b: 2 },
            KodairaType::I { m: 2, b: 5 },
            KodairaType::I { m: 3, b: 0 },
        ]);
        for t in all {
            let cfg = standard_configuration(&t);
            let b = numeric_basics(&cfg, &resolve_fiber(&cfg).unwrap()).unwrap();
            assert_eq!(b.genus, 1, "{t}");
            assert_eq!(b.e, t.euler_number(), "{t}");
        }
    }
}
