//! Jumping lines along a pencil of lines, through the determinant of a
//! square restricted section matrix.

use num_traits::Zero;

use super::poly::{rational_roots, Poly};
use crate::error::{Error, Result};
use crate::exact::det_q;
use crate::forms::{BinForm, DualLine, ProjPoint};
use crate::presentations::{restricted_matrix, Presentation};
use crate::{Integer, Rational};

/// Lines through `base` and `beta + u gamma`.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub base: ProjPoint,
    pub beta: ProjPoint,
    pub gamma: ProjPoint,
}

#[derive(Clone, Debug)]
pub struct PencilProbe {
    /// `det(u)`, exactly interpolated.
    pub poly: Poly,
    /// The determinant on the line through `base` and `gamma`, which is the
    /// leading coefficient when the form has its expected degree.
    pub at_infinity: Rational,
    pub roots: Vec<Rational>,
}

fn moving_point(pencil: &Pencil, u: &Rational) -> [Rational; 3] {
    let b = pencil.beta.to_rational();
    let g = pencil.gamma.to_rational();
    std::array::from_fn(|i| &b[i] + u * &g[i])
}

impl Pencil {
    pub fn new(base: ProjPoint, beta: ProjPoint, gamma: ProjPoint) -> Result<Self> {
        let d = crate::forms::det3_int(base.coords(), beta.coords(), gamma.coords());
        if d.is_zero() {
            return Err(Error::Invalid("pencil basis points are collinear".into()));
        }
        Ok(Pencil { base, beta, gamma })
    }

    pub fn line_at(&self, u: &Rational) -> Result<DualLine> {
        DualLine::through(self.base.clone(), ProjPoint::new(&moving_point(self, u))?)
    }
}

/// Determinant of the dual-side section map of `E(m)` restricted to the
/// line through the two raw coordinate vectors.
fn restricted_det(p: &Presentation, m: i64, a: &[Rational; 3], b: &[Rational; 3]) -> Result<Rational> {
    let rm: Vec<Vec<BinForm>> = p.matrix.iter().map(|r| r.iter().map(|f| f.restrict_to(a, b)).collect()).collect();
    let mat = restricted_matrix(&rm, &p.targets, &p.sources, m + p.chern.c1);
    if mat.rows() != mat.cols() {
        return Err(Error::Dimension(format!("restricted map at twist {m} is {}x{}", mat.rows(), mat.cols())));
    }
    det_q(&mat)
}

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let mut acc = vec![Rational::zero(); xs.len()];
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = vec![Rational::from_integer(Integer::from(1))];
        let mut denom = Rational::from_integer(Integer::from(1));
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let f = yi / denom;
        for (k, c) in basis.iter().enumerate() {
            acc[k] += c * &f;
        }
    }
    Poly::new(acc)
}

/// `det(u)` through `degree_bound + 1` samples, checked at two more, with
/// its rational roots.
pub fn probe(p: &Presentation, m: i64, pencil: &Pencil, degree_bound: usize) -> Result<PencilProbe> {
    let base = pencil.base.to_rational();
    let sample = |u: i64| -> Result<(Rational, Rational)> {
        let u = Rational::from_integer(Integer::from(u));
        let d = restricted_det(p, m, &base, &moving_point(pencil, &u))?;
        Ok((u, d))
    };
    let half = degree_bound as i64 / 2;
    let pts: Vec<(Rational, Rational)> = (-half..=degree_bound as i64 - half)
        .map(sample)
        .collect::<Result<_>>()?;
    let (xs, ys): (Vec<Rational>, Vec<Rational>) = pts.into_iter().unzip();
    let poly = interpolate(&xs, &ys);
    for u in [degree_bound as i64 - half + 1, -half - 1] {
        let (x, y) = sample(u)?;
        if poly.eval(&x) != y {
            return Err(Error::Inconsistent(format!("pencil determinant exceeds degree {degree_bound}")));
        }
    }
    let at_infinity = restricted_det(p, m, &base, &pencil.gamma.to_rational())?;
    let roots = if poly.is_zero() { Vec::new() } else { rational_roots(&poly) };
    Ok(PencilProbe { poly, at_infinity, roots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcubics::{tests::frame_config, CubicNet};
    use crate::presentations::{build_en, splitting_type};
    use crate::scalar::rat;

    #[test]
    fn interpolation_is_exact() {
        let xs: Vec<Rational> = (0..4).map(rat).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| x * x * x - rat(2) * x + rat(5)).collect();
        assert_eq!(interpolate(&xs, &ys), Poly::new(vec![rat(5), rat(-2), rat(0), rat(1)]));
    }

    #[test]
    fn roots_are_jumping_lines() {
        let net = CubicNet::new(&frame_config()).unwrap();
        let e2 = build_en(&net, 2).unwrap();
        let pencil = Pencil::new(
            ProjPoint::from_ints(1, 2, -1).unwrap(),
            ProjPoint::from_ints(3, -1, 2).unwrap(),
            ProjPoint::from_ints(-2, 5, 7).unwrap(),
        )
        .unwrap();
        let pr = probe(&e2, -3, &pencil, 12).unwrap();
        assert!(pr.poly.degree().unwrap() <= 6);
        for u in &pr.roots {
            let st = splitting_type(&e2, &pencil.line_at(u).unwrap()).unwrap();
            assert!(st.gap() >= 2, "{st:?}");
        }
        for u in [-2, 0, 5] {
            let u = rat(u);
            if !pr.poly.eval(&u).is_zero() {
                let st = splitting_type(&e2, &pencil.line_at(&u).unwrap()).unwrap();
                assert_eq!(st.gap(), 0);
            }
        }
    }
}
