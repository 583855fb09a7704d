use super::poly::BivariatePoly;
use super::upoly::UPoly;
use crate::error::{Error, Result};
use crate::exact::Rational;

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

/// Local intersection number of `f` and `g` at the origin, by Noether's
/// formula: the sum over common infinitely-near points of the products of
/// multiplicities of the strict transforms.
pub fn intersection_multiplicity(f: &BivariatePoly, g: &BivariatePoly) -> Result<u64> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let h = f.gcd(g);
    if !h.is_constant() && h.constant_term().is_zero() {
        return Err(Error::CommonFactor(h.to_string()));
    }
    noether(f, g)
}

fn noether(f: &BivariatePoly, g: &BivariatePoly) -> Result<u64> {
    if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
        return Ok(0);
    }
    let (mf, mg) = (f.order().unwrap(), g.order().unwrap());
    let mut total = (mf as u64)
        .checked_mul(mg as u64)
        .ok_or(Error::Overflow("intersection multiplicity"))?;

    let f1 = f.chart_x().div_x_pow(mf);
    let g1 = g.chart_x().div_x_pow(mg);
    let (tf, tg) = (restrict_x0(&f1), restrict_x0(&g1));
    let (roots_f, rest_f) = tf.rational_roots();
    let (_, rest_g) = tg.rational_roots();
    if !rest_f.gcd(&rest_g).is_constant() {
        return Err(Error::IrrationalCenter {
            factor: f.to_string(),
        });
    }
    let zero = Rational::zero();
    for (c, _) in roots_f {
        if tg.eval(&c).is_zero() {
            total += noether(&f1.translate(&zero, &c), &g1.translate(&zero, &c))?;
        }
    }
    let f2 = f.chart_y().div_y_pow(mf);
    let g2 = g.chart_y().div_y_pow(mg);
    total += noether(&f2, &g2)?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvealg::parse::parse_poly;

    fn i(f: &str, g: &str) -> u64 {
        intersection_multiplicity(&parse_poly(f).unwrap(), &parse_poly(g).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(i("x", "y"), 1);
        assert_eq!(i("x^2+y^3", "x"), 3);
        assert_eq!(i("x^2+y^3", "y"), 2);
        // x = t^3, y = -t^2 gives x^2 - y^3 = 2 t^6
        assert_eq!(i("x^2+y^3", "x^2-y^3"), 6);
        assert_eq!(i("x", "x+y^2"), 2);
        assert_eq!(i("x+1", "y"), 0);
        assert_eq!(i("y - x^5", "y"), 5);
    }

    #[test]
    fn common_factor() {
        let f = parse_poly("x*(x+y)").unwrap();
        let g = parse_poly("x*y").unwrap();
        assert!(matches!(intersection_multiplicity(&f, &g), Err(Error::CommonFactor(_))));
        // a shared factor away from the origin is a unit there
        let f = parse_poly("(x+1)*x").unwrap();
        let g = parse_poly("(x+1)*y").unwrap();
        assert_eq!(intersection_multiplicity(&f, &g).unwrap(), 1);
    }
}
