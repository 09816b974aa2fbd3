//! Branch quartic on the dual plane, ramification sextic on the source
//! plane, and tangency certificates for lines against the quartic.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::det_q;
use crate::forms::{
    adjugate3, jacobian_det, monomial_index, monomials, square_certificate, BinForm, DualLine, FormJson, Plane,
    ProjPoint, TriForm,
};
use crate::netcubics::CubicNet;
use crate::{Integer, QMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchQuartic {
    pub q: TriForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpstairsSextic {
    pub s: TriForm,
}

/// `restrict(Q, line) = lambda * contact^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyCertificate {
    pub line: DualLine,
    pub lambda: Rational,
    pub contact: BinForm,
}

impl TangencyCertificate {
    pub fn verify(&self, quartic: &BranchQuartic) -> bool {
        match quartic.q.restrict(&self.line) {
            Ok(r) => !self.lambda.is_zero() && self.contact.multiply(&self.contact).scale(&self.lambda) == r,
            Err(_) => false,
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            line: LineJson::from(&self.line),
            lambda: self.lambda.to_string(),
            contact: self.contact.to_json(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct LineJson {
    pub equation: [String; 3],
    pub p: [String; 3],
    pub q: [String; 3],
}

impl From<&DualLine> for LineJson {
    fn from(l: &DualLine) -> Self {
        let s = |v: &[Integer; 3]| [v[0].to_string(), v[1].to_string(), v[2].to_string()];
        LineJson {
            equation: s(&l.equation()),
            p: s(l.p.coords()),
            q: s(l.q.coords()),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct CertificateJson {
    pub line: LineJson,
    pub lambda: String,
    pub contact: FormJson,
}

/// Symmetric matrix of linear forms in `α` with `xᵀ A(α) x = 2 Σ α_k C_k(x)`:
/// diagonal entries carry twice the square coefficients, off-diagonal
/// entries the mixed coefficients.
pub fn conic_matrix(net: &CubicNet) -> [[TriForm; 3]; 3] {
    let entry = |i: usize, j: usize| -> TriForm {
        let mut e = [0u32; 3];
        e[i] += 1;
        e[j] += 1;
        let factor = if i == j { Rational::from_integer(2.into()) } else { Rational::one() };
        let coeffs: [Rational; 3] = std::array::from_fn(|k| net.c[k].coefficient(&e) * &factor);
        TriForm::linear(&coeffs, Plane::Dual)
    };
    std::array::from_fn(|i| std::array::from_fn(|j| entry(i, j)))
}

/// Linear forms `ℓ_j(α) = Σ_i α_i M_ij`: the equation of the fiber line
/// `{Σ α_i X_i = 0}` in source coordinates.
pub fn fiber_line_forms(net: &CubicNet) -> [TriForm; 3] {
    let m = net.x_matrix();
    std::array::from_fn(|j| {
        let c: [Rational; 3] = std::array::from_fn(|i| m[(i, j)].clone());
        TriForm::linear(&c, Plane::Dual)
    })
}

/// The fiber line is tangent to the fiber conic: `ℓ(α)ᵀ adj(A(α)) ℓ(α) = 0`.
pub fn branch_quartic(net: &CubicNet) -> Result<BranchQuartic> {
    let a = conic_matrix(net);
    let adj = adjugate3(&a)?;
    let l = fiber_line_forms(net);
    let mut q = TriForm::zero(4, Plane::Dual);
    for i in 0..3 {
        for j in 0..3 {
            q = q.add(&l[i].multiply(&adj[i][j])?.multiply(&l[j])?)?;
        }
    }
    if q.is_zero() {
        return Err(Error::Degenerate("branch quartic vanishes identically".into()));
    }
    Ok(BranchQuartic { q: q.primitive() })
}

/// Jacobian determinant of the net.
pub fn branch_sextic(net: &CubicNet) -> Result<UpstairsSextic> {
    let s = jacobian_det(&net.delta[0], &net.delta[1], &net.delta[2])?;
    if s.is_zero() {
        return Err(Error::Degenerate("jacobian of the net vanishes identically".into()));
    }
    Ok(UpstairsSextic { s: s.primitive() })
}

/// Checks `Q(Δ0, Δ1, Δ2) = λ S²` as forms of degree 12 and returns `λ`.
pub fn pullback_identity(net: &CubicNet, quartic: &BranchQuartic, sextic: &UpstairsSextic) -> Result<Rational> {
    let lhs = quartic.q.compose(&net.delta)?;
    let rhs = sextic.s.multiply(&sextic.s)?;
    let idx = rhs
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Inconsistent("zero sextic".into()))?;
    let lambda = &lhs.coeffs()[idx] / &rhs.coeffs()[idx];
    if lambda.is_zero() || lhs != rhs.scale(&lambda) {
        return Err(Error::Inconsistent("Q∘Δ is not a multiple of S²".into()));
    }
    Ok(lambda)
}

/// Certificate of bitangency, or `None` when the restriction is not a
/// multiple of a square.
pub fn is_bitangent(line: &DualLine, quartic: &BranchQuartic) -> Result<Option<TangencyCertificate>> {
    let r = quartic.q.restrict(line)?;
    if r.is_zero() {
        return Err(Error::Degenerate(format!("{line:?} lies on the quartic")));
    }
    Ok(square_certificate(&r)?.map(|c| TangencyCertificate {
        line: line.clone(),
        lambda: c.lambda,
        contact: c.root,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Smoothness {
    /// The resultant of the three partial derivatives is nonzero.
    Smooth { macaulay_det: Rational },
    /// A common zero of the partials exists (a point when one was found).
    Singular { point: Option<ProjPoint> },
    Unknown { evidence: String },
}

/// Macaulay matrix of three ternary cubics at degree 7 (36x36), rows
/// assigned to the first `i` with `x_i^3` dividing the row monomial.
fn macaulay_matrix(f: &[TriForm; 3]) -> (QMatrix, Vec<usize>) {
    let mons = monomials(7);
    let n = mons.len();
    let mut m = QMatrix::zeros(n, n);
    let mut extraneous = Vec::new();
    for (r, e) in mons.iter().enumerate() {
        let big: Vec<usize> = (0..3).filter(|&i| e[i] >= 3).collect();
        if big.len() >= 2 {
            extraneous.push(r);
        }
        let i = big[0];
        let mut shift = *e;
        shift[i] -= 3;
        for (fe, c) in f[i].terms() {
            let col = monomial_index(&[fe[0] + shift[0], fe[1] + shift[1], fe[2] + shift[2]]);
            m[(r, col)] = c.clone();
        }
    }
    (m, extraneous)
}

/// Resultant of three ternary cubics as `det(Macaulay) / det(extraneous)`,
/// or `None` when the extraneous minor vanishes.
pub fn macaulay_resultant(f: &[TriForm; 3]) -> Result<Option<Rational>> {
    if f.iter().any(|g| g.degree() != 3) {
        return Err(Error::Invalid("resultant expects three cubics".into()));
    }
    let (m, ex) = macaulay_matrix(f);
    let sub = QMatrix::from_rows(
        &ex.iter()
            .map(|&r| ex.iter().map(|&c| m[(r, c)].clone()).collect())
            .collect::<Vec<_>>(),
    )?;
    let d_ex = det_q(&sub)?;
    if d_ex.is_zero() {
        return Ok(None);
    }
    Ok(Some(det_q(&m)? / d_ex))
}

fn permute_vars(f: &TriForm, perm: [usize; 3]) -> TriForm {
    let terms = f.terms().map(|(e, c)| {
        let mut p = [0; 3];
        for i in 0..3 {
            p[perm[i]] = e[i];
        }
        (p, c.clone())
    });
    TriForm::from_terms(f.degree(), f.plane(), terms.collect::<Vec<_>>()).expect("degree preserved")
}

/// Smoothness of a plane quartic. With `use_resultant` the verdict comes
/// from the resultant of the partials; otherwise a rational grid of
/// half-width `grid` is searched for singular points.
pub fn smoothness_probe(q: &TriForm, use_resultant: bool, grid: i64) -> Result<Smoothness> {
    if q.degree() != 4 {
        return Err(Error::Invalid("smoothness probe expects a quartic".into()));
    }
    if use_resultant {
        let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [1, 0, 2], [2, 1, 0]];
        // unimodular substitutions for forms whose extraneous minors vanish
        // in every variable order
        let shears: [[[i64; 3]; 3]; 3] = [
            [[1, 1, 0], [0, 1, 1], [1, 0, 1]],
            [[1, 2, -1], [0, 1, 3], [0, 0, 1]],
            [[2, 1, 1], [1, 1, 0], [1, 0, 2]],
        ];
        let mut candidates: Vec<TriForm> = perms.iter().map(|&p| permute_vars(q, p)).collect();
        for m in shears {
            let sub: [TriForm; 3] = std::array::from_fn(|i| {
                let c: [Rational; 3] = std::array::from_fn(|j| Rational::from_integer(m[i][j].into()));
                TriForm::linear(&c, q.plane())
            });
            candidates.push(q.compose(&sub)?);
        }
        for cand in candidates {
            let g = cand.gradient();
            if let Some(r) = macaulay_resultant(&g)? {
                return Ok(if r.is_zero() {
                    Smoothness::Singular { point: None }
                } else {
                    Smoothness::Smooth { macaulay_det: r }
                });
            }
        }
        return Ok(Smoothness::Unknown {
            evidence: "extraneous Macaulay minor vanished in every coordinate system tried".into(),
        });
    }
    let g = q.gradient();
    let mut tried = 0usize;
    for a in -grid..=grid {
        for b in -grid..=grid {
            for c in -grid..=grid {
                let Ok(p) = ProjPoint::from_ints(a, b, c) else { continue };
                if p.coords() != &[Integer::from(a), Integer::from(b), Integer::from(c)] {
                    continue;
                }
                tried += 1;
                if g.iter().all(|gi| gi.eval_point(&p).is_zero()) {
                    return Ok(Smoothness::Singular { point: Some(p) });
                }
            }
        }
    }
    Ok(Smoothness::Unknown {
        evidence: format!("no singular point among {tried} grid points of half-width {grid}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcubics::tests::{conic_line_config, frame_config};
    use crate::netcubics::{geiser, involution_partner};
    use crate::scalar::rat;

    fn dual(e: [u32; 3], c: i64) -> TriForm {
        TriForm::monomial(e, rat(c), Plane::Dual)
    }

    #[test]
    fn conic_matrix_re_expands() {
        let net = CubicNet::new(&frame_config()).unwrap();
        let a = conic_matrix(&net);
        let alpha = [rat(2), rat(-3), rat(5)];
        let x = [rat(1), rat(4), rat(-2)];
        let mut lhs = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a[i][j], a[j][i]);
                assert_eq!(a[i][j].degree(), 1);
                lhs += &x[i] * a[i][j].eval(&alpha) * &x[j];
            }
        }
        assert_eq!(lhs, rat(2) * net.c_at(&alpha).eval(&x));
    }

    #[test]
    fn quartic_sextic_and_pullback() {
        let net = CubicNet::new(&frame_config()).unwrap();
        let q = branch_quartic(&net).unwrap();
        let s = branch_sextic(&net).unwrap();
        assert_eq!(q.q.degree(), 4);
        assert_eq!(s.s.degree(), 6);
        for p in net.config.points() {
            assert!(s.s.eval_point(p).is_zero());
            for g in s.s.gradient() {
                assert!(g.eval_point(p).is_zero());
            }
        }
        let lambda = pullback_identity(&net, &q, &s).unwrap();
        assert!(!lambda.is_zero());
    }

    #[test]
    fn quartic_ignores_quadratic_syzygy_representative() {
        let net = CubicNet::new(&frame_config()).unwrap();
        let q = branch_quartic(&net).unwrap();
        for (a, b, c) in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1, 3), (-5, 4, 1)] {
            let l = TriForm::linear(&[rat(a), rat(b), rat(c)], Plane::Source);
            let shifted = net.with_quadratic_syzygy(net.shifted_c(&l).unwrap()).unwrap();
            assert_eq!(branch_quartic(&shifted).unwrap(), q);
        }
    }

    #[test]
    fn fixed_points_lie_on_both_curves() {
        let net = CubicNet::new(&conic_line_config()).unwrap();
        let q = branch_quartic(&net).unwrap();
        let s = branch_sextic(&net).unwrap();
        for p in [[4, 1, 2], [1, 9, 3]] {
            let x = ProjPoint::from_ints(p[0], p[1], p[2]).unwrap();
            assert!(involution_partner(&net, &x).unwrap().fixed);
            assert!(s.s.eval_point(&x).is_zero());
            assert!(q.q.eval_point(&geiser(&net, &x).unwrap()).is_zero());
        }
        // a generic point is neither fixed nor on the sextic
        let x = ProjPoint::from_ints(2, 7, -3).unwrap();
        assert!(!involution_partner(&net, &x).unwrap().fixed);
        assert!(!s.s.eval_point(&x).is_zero());
    }

    #[test]
    fn random_lines_are_not_bitangent() {
        let net = CubicNet::new(&frame_config()).unwrap();
        let q = branch_quartic(&net).unwrap();
        for k in 0..20i64 {
            let l = DualLine::from_equation_i64([k + 1, 3 * k - 7, 11 - 2 * k], Plane::Dual).unwrap();
            assert!(is_bitangent(&l, &q).unwrap().is_none(), "line {k}");
        }
    }

    #[test]
    fn probe_fermat_and_singular() {
        let fermat = dual([4, 0, 0], 1).add(&dual([0, 4, 0], 1)).unwrap().add(&dual([0, 0, 4], 1)).unwrap();
        assert!(matches!(smoothness_probe(&fermat, true, 0).unwrap(), Smoothness::Smooth { .. }));
        assert!(matches!(smoothness_probe(&fermat, false, 3).unwrap(), Smoothness::Unknown { .. }));
        let sing = dual([2, 2, 0], 1).add(&dual([0, 2, 2], 1)).unwrap().add(&dual([2, 0, 2], 1)).unwrap();
        assert!(!matches!(smoothness_probe(&sing, true, 0).unwrap(), Smoothness::Smooth { .. }));
        // singular at (0:0:1), then moved to (1:2:1)
        let mut node = TriForm::zero(4, Plane::Dual);
        for (k, e) in monomials(4).into_iter().enumerate() {
            if e[2] < 3 {
                node = node.add(&dual(e, (k as i64 * 7) % 11 - 5)).unwrap();
            }
        }
        let moved = node
            .compose(&[
                TriForm::linear(&[rat(1), rat(0), rat(-1)], Plane::Dual),
                TriForm::linear(&[rat(0), rat(1), rat(-2)], Plane::Dual),
                TriForm::var(2, Plane::Dual),
            ])
            .unwrap();
        assert!(matches!(smoothness_probe(&node, true, 0).unwrap(), Smoothness::Singular { .. }));
        assert!(matches!(smoothness_probe(&moved, true, 0).unwrap(), Smoothness::Singular { .. }));
        assert!(matches!(smoothness_probe(&sing, false, 2).unwrap(), Smoothness::Singular { point: Some(_) }));
    }

    #[test]
    fn branch_quartic_is_smooth() {
        let net = CubicNet::new(&frame_config()).unwrap();
        let q = branch_quartic(&net).unwrap();
        assert!(matches!(smoothness_probe(&q.q, true, 0).unwrap(), Smoothness::Smooth { .. }));
    }
}
