//! The 28 bitangents of the branch quartic from the point data: seven
//! images of the exceptional curves and 21 images of the joins `x_i x_j`.
//!
//! Point indices are 0-based throughout.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{det3_int, DualLine, FormJson, Plane, ProjPoint};
use crate::netcubics::{geiser, CubicNet};
use crate::ramification::{is_bitangent, BranchQuartic, LineJson, TangencyCertificate};
use crate::{Integer, QMatrix, Rational};

#[derive(Clone, Debug)]
pub struct AronholdRecord {
    pub index: usize,
    pub line: DualLine,
    pub certificate: TangencyCertificate,
}

#[derive(Clone, Debug)]
pub struct PairRecord {
    pub indices: (usize, usize),
    /// The join of the two points in the source plane.
    pub join: DualLine,
    pub line: DualLine,
    pub certificate: TangencyCertificate,
    /// Determinant of the three sampled images; zero by construction.
    pub collinearity_det: Integer,
}

#[derive(Clone, Debug)]
pub struct BitangentSet {
    pub aronhold: Vec<AronholdRecord>,
    pub pairs: Vec<PairRecord>,
}

/// Rows `∇Δ_j(x_i)`.
pub fn gradient_matrix(net: &CubicNet, i: usize) -> QMatrix {
    let x = net.config.point(i).to_rational();
    let rows: Vec<Vec<Rational>> = net
        .delta
        .iter()
        .map(|d| d.gradient().iter().map(|g| g.eval(&x)).collect())
        .collect();
    QMatrix::from_rows(&rows).expect("3x3")
}

/// Image of the exceptional curve over `x_i`: the column space of the
/// gradient matrix at `x_i`.
pub fn aronhold_line(net: &CubicNet, i: usize) -> Result<DualLine> {
    if i >= 7 {
        return Err(Error::Invalid(format!("point index {i} out of range")));
    }
    let g = gradient_matrix(net, i);
    let rank = crate::exact::rank_q(&g);
    if rank != 2 {
        return Err(Error::Degenerate(format!("gradient matrix at point {i} has rank {rank}")));
    }
    let x = net.config.point(i);
    if g.mul_vec(&x.to_rational())?.iter().any(|v| !v.is_zero()) {
        return Err(Error::Inconsistent(format!("gradient matrix at point {i} does not annihilate it")));
    }
    // two standard basis vectors completing x_i to a basis
    let unit = |k: usize| -> [Integer; 3] { std::array::from_fn(|j| Integer::from((j == k) as i64)) };
    let (a, b) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(a, b)| !det3_int(x.coords(), &unit(a), &unit(b)).is_zero())
        .expect("some pair of unit vectors is transverse");
    let col = |k: usize| -> Result<ProjPoint> { ProjPoint::new(&[g[(0, k)].clone(), g[(1, k)].clone(), g[(2, k)].clone()]) };
    DualLine::new(col(a)?, col(b)?, Plane::Dual)
}

/// Source-plane line through `x_i` and `x_j`.
pub fn join(net: &CubicNet, i: usize, j: usize) -> Result<DualLine> {
    DualLine::new(net.config.point(i).clone(), net.config.point(j).clone(), Plane::Source)
}

/// Parameters `1, -1, 2, -2, ...` for points `x_i + t x_j` on the join.
fn join_parameters() -> impl Iterator<Item = i64> {
    (1..).flat_map(|k| [k, -k])
}

/// Image of the join of `x_i` and `x_j`, with the collinearity determinant
/// of a third sampled image.
pub fn pair_line_with_check(net: &CubicNet, i: usize, j: usize) -> Result<(DualLine, Integer)> {
    if i == j || i >= 7 || j >= 7 {
        return Err(Error::Invalid(format!("bad index pair ({i}, {j})")));
    }
    let xi = net.config.point(i).to_rational();
    let xj = net.config.point(j).to_rational();
    let mut images: Vec<ProjPoint> = Vec::new();
    for t in join_parameters().take(64) {
        let t = Rational::from_integer(t.into());
        let p = ProjPoint::new(&std::array::from_fn(|k| &xi[k] + &t * &xj[k]))?;
        if net.is_base_point(&p) {
            continue;
        }
        let img = geiser(net, &p)?;
        if images.contains(&img) {
            continue;
        }
        images.push(img);
        if images.len() == 3 {
            break;
        }
    }
    if images.len() < 3 {
        return Err(Error::Degenerate(format!("join ({i}, {j}) yields fewer than three distinct images")));
    }
    let det = det3_int(images[0].coords(), images[1].coords(), images[2].coords());
    if !det.is_zero() {
        return Err(Error::Inconsistent(format!("images of the join ({i}, {j}) are not collinear")));
    }
    let line = DualLine::new(images[0].clone(), images[1].clone(), Plane::Dual)?;
    Ok((line, det))
}

pub fn pair_line(net: &CubicNet, i: usize, j: usize) -> Result<DualLine> {
    Ok(pair_line_with_check(net, i, j)?.0)
}

pub fn pair_indices() -> Vec<(usize, usize)> {
    (0..7).flat_map(|i| (i + 1..7).map(move |j| (i, j))).collect()
}

fn certify(line: &DualLine, quartic: &BranchQuartic, what: &str) -> Result<TangencyCertificate> {
    let cert = is_bitangent(line, quartic)?.ok_or_else(|| Error::Inconsistent(format!("{what} is not bitangent")))?;
    if !cert.verify(quartic) {
        return Err(Error::Inconsistent(format!("certificate for {what} does not re-expand")));
    }
    Ok(cert)
}

/// All 28 bitangents, each certified against the quartic.
pub fn all_28(net: &CubicNet, quartic: &BranchQuartic) -> Result<BitangentSet> {
    let aronhold = (0..7)
        .into_par_iter()
        .map(|i| {
            let line = aronhold_line(net, i)?;
            let certificate = certify(&line, quartic, &format!("aronhold line {i}"))?;
            Ok(AronholdRecord { index: i, line, certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = pair_indices()
        .into_par_iter()
        .map(|(i, j)| {
            let (line, collinearity_det) = pair_line_with_check(net, i, j)?;
            let certificate = certify(&line, quartic, &format!("pair line ({i}, {j})"))?;
            Ok(PairRecord {
                indices: (i, j),
                join: join(net, i, j)?,
                line,
                certificate,
                collinearity_det,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let set = BitangentSet { aronhold, pairs };
    let eqs: Vec<[Integer; 3]> = set.lines().iter().map(|l| l.equation()).collect();
    for a in 0..eqs.len() {
        for b in a + 1..eqs.len() {
            if eqs[a] == eqs[b] {
                return Err(Error::Inconsistent(format!("bitangents {a} and {b} coincide")));
            }
        }
    }
    Ok(set)
}

impl BitangentSet {
    /// The 28 lines, Aronhold lines first, then pairs in lexicographic order.
    pub fn lines(&self) -> Vec<DualLine> {
        self.aronhold
            .iter()
            .map(|r| r.line.clone())
            .chain(self.pairs.iter().map(|r| r.line.clone()))
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.aronhold
            .iter()
            .map(|r| format!("l{}", r.index))
            .chain(self.pairs.iter().map(|r| format!("l{}{}", r.indices.0, r.indices.1)))
            .collect()
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairRecord> {
        let key = (i.min(j), i.max(j));
        self.pairs.iter().find(|r| r.indices == key)
    }

    /// Pairwise intersections of the seven Aronhold lines.
    pub fn aronhold_vertices(&self) -> Result<Vec<ProjPoint>> {
        let mut out = Vec::with_capacity(21);
        for (i, j) in pair_indices() {
            out.push(ProjPoint::meet(
                &self.aronhold[i].line.equation(),
                &self.aronhold[j].line.equation(),
            )?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<BitangentJson> {
        let a = self.aronhold.iter().map(|r| BitangentJson {
            kind: "aronhold",
            indices: vec![r.index],
            line: LineJson::from(&r.line),
            lambda: r.certificate.lambda.to_string(),
            contact: r.certificate.contact.to_json(),
        });
        let p = self.pairs.iter().map(|r| BitangentJson {
            kind: "pair",
            indices: vec![r.indices.0, r.indices.1],
            line: LineJson::from(&r.line),
            lambda: r.certificate.lambda.to_string(),
            contact: r.certificate.contact.to_json(),
        });
        a.chain(p).collect()
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct BitangentJson {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub indices: Vec<usize>,
    pub line: LineJson,
    pub lambda: String,
    pub contact: FormJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcubics::tests::frame_config;
    use crate::netcubics::PointConfig;
    use crate::ramification::branch_quartic;
    use std::collections::BTreeSet;

    fn setup() -> (CubicNet, BranchQuartic) {
        let net = CubicNet::new(&frame_config()).unwrap();
        let q = branch_quartic(&net).unwrap();
        (net, q)
    }

    #[test]
    fn gradient_matrix_kills_the_point() {
        let (net, _) = setup();
        for i in 0..7 {
            let g = gradient_matrix(&net, i);
            assert_eq!(crate::exact::rank_q(&g), 2);
            assert!(g.mul_vec(&net.config.point(i).to_rational()).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn twenty_eight_certified_lines() {
        let (net, q) = setup();
        let set = all_28(&net, &q).unwrap();
        assert_eq!(set.aronhold.len(), 7);
        assert_eq!(set.pairs.len(), 21);
        let eqs: BTreeSet<_> = set.lines().iter().map(|l| l.equation()).collect();
        assert_eq!(eqs.len(), 28);
        for r in &set.aronhold {
            assert!(r.certificate.verify(&q));
        }
        for r in &set.pairs {
            assert!(r.certificate.verify(&q));
            assert!(r.collinearity_det.is_zero());
            let (i, j) = r.indices;
            assert!(!r.line.same_line(&set.aronhold[i].line));
            assert!(!r.line.same_line(&set.aronhold[j].line));
        }
        assert_eq!(set.aronhold_vertices().unwrap().iter().collect::<BTreeSet<_>>().len(), 21);
    }

    #[test]
    fn pair_lines_are_symmetric() {
        let (net, _) = setup();
        assert!(pair_line(&net, 1, 4).unwrap().same_line(&pair_line(&net, 4, 1).unwrap()));
        assert!(pair_line(&net, 2, 2).is_err());
    }

    #[test]
    fn line_through_one_contact_point_is_not_bitangent() {
        let (net, q) = setup();
        let l1 = aronhold_line(&net, 0).unwrap();
        let cert = is_bitangent(&l1, &q).unwrap().unwrap();
        // a rational contact point, if any, else a point of l1 off the contact scheme
        let roots: Vec<ProjPoint> = (-6i64..=6)
            .flat_map(|s| (-6i64..=6).map(move |t| (s, t)))
            .filter(|&(s, t)| (s, t) != (0, 0))
            .filter(|&(s, t)| cert.contact.eval(&Rational::from_integer(s.into()), &Rational::from_integer(t.into())).is_zero())
            .filter_map(|(s, t)| l1.point_at(&Rational::from_integer(s.into()), &Rational::from_integer(t.into())).ok())
            .collect();
        let anchor = roots.first().cloned().unwrap_or_else(|| l1.p.clone());
        for dir in [[1, 2, 3], [5, -1, 2], [-3, 7, 1]] {
            let other = ProjPoint::from_ints(dir[0], dir[1], dir[2]).unwrap();
            if l1.contains(&other) {
                continue;
            }
            let line = DualLine::through(anchor.clone(), other).unwrap();
            assert!(is_bitangent(&line, &q).unwrap().is_none());
        }
    }

    #[test]
    fn permuting_points_keeps_the_set() {
        let cfg = frame_config();
        let (net, q) = setup();
        let a: BTreeSet<_> = all_28(&net, &q).unwrap().lines().iter().map(|l| l.equation()).collect();
        let perm: PointConfig = cfg.permuted(&[3, 0, 6, 1, 5, 2, 4]).unwrap();
        let net2 = CubicNet::new(&perm).unwrap();
        let q2 = branch_quartic(&net2).unwrap();
        let b: BTreeSet<_> = all_28(&net2, &q2).unwrap().lines().iter().map(|l| l.equation()).collect();
        assert_eq!(a, b);
    }
}
