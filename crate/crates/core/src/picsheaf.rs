//! Divisor classes `n h + Σ t_i l_i` on the cover, their Chern classes after
//! push-forward, and the interpolation spaces that compute `h⁰` of every
//! twist directly upstairs.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{kernel_q, rank_q};
use crate::forms::{monomials, Exponent, Plane, ProjPoint, TriForm};
use crate::netcubics::{CubicNet, PointConfig};
use crate::{QMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PicClass {
    pub n: i64,
    pub t: [i64; 7],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChernPair {
    pub c1: i64,
    pub c2: i64,
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {:?})", self.n, self.t)
    }
}

impl fmt::Display for ChernPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c1, self.c2)
    }
}

impl ChernPair {
    /// Chern classes of `E(m)` for `E` with these classes.
    pub fn twisted(self, m: i64) -> ChernPair {
        ChernPair {
            c1: self.c1 + 2 * m,
            c2: self.c2 + m * self.c1 + m * m,
        }
    }

    /// Twist bringing `c1` into `{-1, 0}`, and the resulting pair.
    pub fn normalized(self) -> (i64, ChernPair) {
        let m = -(self.c1 + 1).div_euclid(2);
        (m, self.twisted(m))
    }
}

impl PicClass {
    pub fn new(n: i64, t: [i64; 7]) -> Self {
        PicClass { n, t }
    }

    /// Pullback of `O(n)` twisted down by the first `k` exceptional curves:
    /// the class realising `E_n^k`.
    pub fn e_nk(n: i64, k: usize) -> Self {
        let mut t = [0; 7];
        t.iter_mut().take(k).for_each(|v| *v = -1);
        PicClass { n, t }
    }

    pub fn e_n(n: i64) -> Self {
        Self::e_nk(n, 0)
    }

    pub fn t_sum(&self) -> i64 {
        self.t.iter().sum()
    }
}

pub fn chern(l: &PicClass) -> ChernPair {
    let s = l.t_sum();
    let sq: i64 = l.t.iter().map(|t| t * t).sum();
    let mut cross = 0;
    for i in 0..7 {
        for j in i + 1..7 {
            cross += l.t[i] * l.t[j];
        }
    }
    let n = l.n;
    ChernPair {
        c1: s + 3 * n - 2,
        c2: 4 * n * n - 3 * n + (3 * n - 1) * s + sq + cross,
    }
}

/// Class whose direct image is the `m`-th twist: `(n, t) ↦ (n + 3m, t − m)`.
pub fn twist_class(l: &PicClass, m: i64) -> PicClass {
    PicClass {
        n: l.n + 3 * m,
        t: l.t.map(|t| t - m),
    }
}

fn falling(e: u32, k: u32) -> i64 {
    (0..k).map(|i| (e - i) as i64).product()
}

/// Rows of the linear conditions "every partial of order `k` vanishes at
/// `x`" on degree-`d` forms.
fn partial_conditions(x: &[Rational; 3], d: u32, k: u32) -> Vec<Vec<Rational>> {
    let mons = monomials(d);
    monomials(k)
        .iter()
        .map(|beta| {
            mons.iter()
                .map(|e| {
                    if (0..3).any(|i| e[i] < beta[i]) {
                        return Rational::zero();
                    }
                    let c = falling(e[0], beta[0]) * falling(e[1], beta[1]) * falling(e[2], beta[2]);
                    let rest: Exponent = [e[0] - beta[0], e[1] - beta[1], e[2] - beta[2]];
                    let mut v = Rational::from_integer(c.into());
                    for i in 0..3 {
                        v *= num_traits::pow(x[i].clone(), rest[i] as usize);
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Conditions for vanishing to order `mult[i]` at each point. By Euler's
/// relation it suffices to kill the partials of order `mult[i] - 1` (or of
/// order `d`, which forces the form to vanish, when `mult[i] > d`).
pub fn condition_matrix(points: &[ProjPoint], d: u32, mult: &[u32]) -> QMatrix {
    let mut rows = Vec::new();
    for (p, &m) in points.iter().zip(mult) {
        if m == 0 {
            continue;
        }
        let k = (m - 1).min(d);
        rows.extend(partial_conditions(&p.to_rational(), d, k));
    }
    if rows.is_empty() {
        return QMatrix::zeros(0, monomials(d).len());
    }
    QMatrix::from_rows(&rows).expect("rectangular")
}

/// Basis of the degree-`d` forms vanishing to order `mult[i]` at `x_i`.
pub fn interpolation_space(cfg: &PointConfig, d: u32, mult: &[u32; 7]) -> Vec<TriForm> {
    let m = condition_matrix(cfg.points(), d, mult);
    if m.rows() == 0 {
        return monomials(d)
            .into_iter()
            .map(|e| TriForm::monomial(e, Rational::one(), Plane::Source))
            .collect();
    }
    kernel_q(&m)
        .into_iter()
        .map(|v| TriForm::from_coeffs(d, Plane::Source, v).expect("length"))
        .collect()
}

pub fn interpolation_dim(cfg: &PointConfig, d: u32, mult: &[u32; 7]) -> usize {
    let m = condition_matrix(cfg.points(), d, mult);
    monomials(d).len() - if m.rows() == 0 { 0 } else { rank_q(&m) }
}

/// Degree and vanishing orders of the forms representing sections of the
/// `m`-th twist, or `None` when the degree is negative.
pub fn slot_data(l: &PicClass, m: i64) -> Option<(u32, [u32; 7])> {
    let d = l.n + 3 * m;
    if d < 0 {
        return None;
    }
    Some((d as u32, l.t.map(|t| (m - t).max(0) as u32)))
}

/// `h⁰` of the `m`-th twist of the direct image of `l`.
pub fn h0_upstairs(cfg: &PointConfig, l: &PicClass, m: i64) -> usize {
    match slot_data(l, m) {
        None => 0,
        Some((d, mult)) => interpolation_dim(cfg, d, &mult),
    }
}

/// One twist of the section module: a basis of primitive integer forms and,
/// for each, the column where it alone among the basis is nonzero (so
/// coordinates can be read off).
#[derive(Clone, Debug)]
pub struct Slot {
    pub degree: Option<u32>,
    pub basis: Vec<TriForm>,
    pub free_columns: Vec<usize>,
}

impl Slot {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a form known to lie in the slot.
    pub fn coordinates(&self, f: &TriForm) -> Result<Vec<Rational>> {
        let c: Vec<Rational> = self
            .free_columns
            .iter()
            .zip(&self.basis)
            .map(|(&k, b)| &f.coeffs()[k] / &b.coeffs()[k])
            .collect();
        let mut back = TriForm::zero(f.degree(), Plane::Source);
        for (b, ci) in self.basis.iter().zip(&c) {
            back = back.add(&b.scale(ci))?;
        }
        if &back != f {
            return Err(Error::Inconsistent("form does not lie in the slot".into()));
        }
        Ok(c)
    }
}

fn build_slot(cfg: &PointConfig, l: &PicClass, m: i64) -> Slot {
    let Some((d, mult)) = slot_data(l, m) else {
        return Slot {
            degree: None,
            basis: Vec::new(),
            free_columns: Vec::new(),
        };
    };
    let cm = condition_matrix(cfg.points(), d, &mult);
    let ncols = monomials(d).len();
    let (pivots, kernel) = if cm.rows() == 0 {
        let id: Vec<Vec<Rational>> = (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        (Vec::new(), id)
    } else {
        let r = crate::exact::rref_q(&cm);
        let k = crate::linalg::kernel_from_rref(&r, ncols);
        (r.pivots, k)
    };
    let free_columns = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    Slot {
        degree: Some(d),
        basis: kernel
            .into_iter()
            .map(|v| {
                // the unit entry at the free column stays positive
                let ints = crate::exact::primitive_integer_vector(&v);
                TriForm::from_coeffs(d, Plane::Source, ints.into_iter().map(Rational::from_integer).collect())
                    .expect("length")
            })
            .collect(),
        free_columns,
    }
}

/// Sections of all twists in a window. Multiplication by the net is
/// available through [`GradedSections::action`].
#[derive(Clone, Debug)]
pub struct GradedSections {
    pub pic: PicClass,
    pub window: (i64, i64),
    pub slots: BTreeMap<i64, Slot>,
}

pub fn graded_module(net: &CubicNet, l: &PicClass, window: (i64, i64)) -> Result<GradedSections> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Invalid(format!("empty window {window:?}")));
    }
    let slots: BTreeMap<i64, Slot> = (lo..=hi)
        .into_par_iter()
        .map(|m| (m, build_slot(&net.config, l, m)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(GradedSections {
        pic: *l,
        window,
        slots,
    })
}

impl GradedSections {
    pub fn dim(&self, m: i64) -> usize {
        self.slots.get(&m).map_or(0, Slot::dim)
    }

    /// Matrix of multiplication by `Δ_j` from slot `m` to slot `m + 1`, one
    /// column per basis element.
    pub fn action(&self, net: &CubicNet, m: i64, j: usize) -> Result<QMatrix> {
        let (src, dst) = match (self.slots.get(&m), self.slots.get(&(m + 1))) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Invalid(format!("twist {m} has no successor in the window"))),
        };
        let mut cols = Vec::with_capacity(src.dim());
        for b in &src.basis {
            cols.push(dst.coordinates(&net.delta[j].multiply(b)?)?);
        }
        QMatrix::from_columns(dst.dim(), &cols)
    }

    /// `Δ_j Δ_k = Δ_k Δ_j` as maps from slot `m` to slot `m + 2`.
    pub fn action_commutes(&self, net: &CubicNet) -> Result<bool> {
        let (lo, hi) = self.window;
        for m in lo..hi - 1 {
            let a: Vec<QMatrix> = (0..3).map(|j| self.action(net, m, j)).collect::<Result<_>>()?;
            let b: Vec<QMatrix> = (0..3).map(|j| self.action(net, m + 1, j)).collect::<Result<_>>()?;
            for j in 0..3 {
                for k in j + 1..3 {
                    if &b[k] * &a[j] != &b[j] * &a[k] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcubics::tests::frame_config;

    #[test]
    fn chern_examples() {
        assert_eq!(chern(&PicClass::e_n(1)), ChernPair { c1: 1, c2: 1 });
        let e3 = chern(&PicClass::e_n(3));
        assert_eq!(e3, ChernPair { c1: 7, c2: 27 });
        assert_eq!(e3.twisted(-4), ChernPair { c1: -1, c2: 15 });
        assert_eq!(e3.normalized(), (-4, ChernPair { c1: -1, c2: 15 }));
        assert_eq!(chern(&PicClass::e_nk(2, 2)).normalized(), (-1, ChernPair { c1: 0, c2: 2 }));
        for c1 in -9..=9 {
            let (m, p) = ChernPair { c1, c2: 0 }.normalized();
            assert!(p.c1 == 0 || p.c1 == -1);
            assert_eq!(p.c1, c1 + 2 * m);
        }
        for m in -2..=2 {
            let c = chern(&PicClass::new(3 * m, [-m; 7]));
            // O(m) ⊕ O(m-2)
            assert_eq!(c, ChernPair { c1: 2 * m - 2, c2: m * (m - 2) });
        }
    }

    #[test]
    fn twist_class_examples() {
        let l = PicClass::new(2, [0, -1, 0, 3, 0, 1, -2]);
        assert_eq!(twist_class(&l, 0), l);
        for m in -3..=3 {
            assert_eq!(chern(&twist_class(&l, m)).c1, chern(&l).c1 + 2 * m);
            assert_eq!(chern(&twist_class(&l, m)), chern(&l).twisted(m));
        }
        for n in 0..5 {
            assert_eq!(twist_class(&PicClass::e_n(n - 3), 1), PicClass::new(n, [-1; 7]));
        }
    }

    #[test]
    fn interpolation_examples() {
        let cfg = frame_config();
        assert_eq!(interpolation_space(&cfg, 3, &[1; 7]).len(), 3);
        assert_eq!(interpolation_space(&cfg, 0, &[0; 7]).len(), 1);
        assert_eq!(interpolation_dim(&cfg, 5, &[1; 7]), 14);
        // a double point at each base point is too much for cubics
        assert_eq!(interpolation_dim(&cfg, 3, &[2; 7]), 0);
        // order beyond the degree forces zero
        assert_eq!(interpolation_dim(&cfg, 1, &[3, 0, 0, 0, 0, 0, 0]), 0);
        for f in interpolation_space(&cfg, 4, &[2, 1, 1, 0, 0, 0, 0]) {
            for g in f.gradient() {
                assert!(g.eval_point(cfg.point(0)).is_zero());
            }
            assert!(f.eval_point(cfg.point(1)).is_zero());
        }
    }

    #[test]
    fn h0_examples() {
        let cfg = frame_config();
        assert_eq!(h0_upstairs(&cfg, &PicClass::e_n(2), 0), 6);
        assert_eq!(h0_upstairs(&cfg, &PicClass::e_n(3), -1), 1);
        for n in 2..=4 {
            assert_eq!(h0_upstairs(&cfg, &PicClass::e_n(n), 1 - n), 0);
        }
    }

    #[test]
    fn graded_module_action() {
        let net = CubicNet::new(&frame_config()).unwrap();
        let l = PicClass::e_nk(2, 3);
        let gs = graded_module(&net, &l, (-1, 2)).unwrap();
        assert!(gs.action_commutes(&net).unwrap());
        for m in -1..=2 {
            assert_eq!(gs.dim(m), h0_upstairs(&net.config, &l, m));
        }
        let a = gs.action(&net, 0, 1).unwrap();
        assert_eq!((a.rows(), a.cols()), (gs.dim(1), gs.dim(0)));
        assert!(gs.action(&net, 2, 0).is_err());
    }
}
