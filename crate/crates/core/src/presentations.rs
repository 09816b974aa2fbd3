//! Free presentations `⊕ O(e_j) → ⊕ O(d_i) → E → 0` of rank-2 bundles on
//! the dual plane, their sections, and splitting types on lines.
//!
//! Matrix entries are forms in `α`; entry `(i, j)` has degree `d_i - e_j`.
//! Sections of `E(m)` are computed in one of two exact ways:
//!
//! * dual side: `E^∨ ≅ E(-c1)` for rank two, and `Hom(-, O)` is left exact,
//!   so `H⁰(E(m))` is the kernel of `g ↦ g·M` on rows of forms of degree
//!   `m + c1 - d_i`;
//! * resolution side: from `0 → F2 → F1 → F0 → E → 0`, the cokernel of
//!   `H⁰(F1(m)) → H⁰(F0(m))` plus `dim ker(H²(F2(m)) → H²(F1(m)))`, the
//!   latter computed through Serre duality as a map of `H⁰`s.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{kernel_q, rank_q, RowSpace};
use crate::forms::{monomial_index, monomials, BinForm, DualLine, Exponent, FormJson, Plane, ProjPoint, TriForm};
use crate::netcubics::CubicNet;
use crate::picsheaf::{graded_module, ChernPair, GradedSections, PicClass};
use crate::{QMatrix, Rational};

fn s_dim(k: i64) -> usize {
    if k < 0 {
        0
    } else {
        ((k + 1) * (k + 2) / 2) as usize
    }
}

/// Chern classes of `⊕ O(a_i)`.
fn chern_of_sum(twists: &[i64]) -> (i64, i64) {
    let c1: i64 = twists.iter().sum();
    let sq: i64 = twists.iter().map(|a| a * a).sum();
    (c1, (c1 * c1 - sq) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub targets: Vec<i64>,
    pub sources: Vec<i64>,
    /// Twists of the free kernel of the matrix, when it is not injective.
    pub syzygy_twists: Vec<i64>,
    pub matrix: Vec<Vec<TriForm>>,
    /// `F2 → F1`, one row per source and one column per syzygy.
    pub syzygy_matrix: Vec<Vec<TriForm>>,
    pub chern: ChernPair,
    pub provenance: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SplittingType {
    pub a: i64,
    pub b: i64,
}

impl SplittingType {
    pub fn gap(&self) -> i64 {
        self.a - self.b
    }

    pub fn c1(&self) -> i64 {
        self.a + self.b
    }
}

/// Largest `i ≥ 0` with `a - b ≥ 2i - ε`, where `ε = 0` for even `c1` and
/// `ε = -1` for odd `c1`.
pub fn jump_order(st: &SplittingType) -> i64 {
    let eps = if st.c1().rem_euclid(2) == 0 { 0 } else { -1 };
    ((st.gap() + eps).max(0)) / 2
}

/// Splittings that force tangency of order two: gap ≥ 4 for even `c1`,
/// gap ≥ 3 for odd `c1`.
pub fn meets_bitangency_threshold(st: &SplittingType) -> bool {
    if st.c1().rem_euclid(2) == 0 {
        st.gap() >= 4
    } else {
        st.gap() >= 3
    }
}

#[derive(Serialize)]
struct PresentationJson {
    targets: Vec<i64>,
    sources: Vec<i64>,
    syzygies: Vec<i64>,
    chern: ChernPair,
    provenance: String,
    matrix: Vec<Vec<FormJson>>,
}

fn check_entries(rows: &[i64], cols: &[i64], matrix: &[Vec<TriForm>], what: &str) -> Result<()> {
    if matrix.len() != rows.len() || matrix.iter().any(|r| r.len() != cols.len()) {
        return Err(Error::Dimension(format!("{what} shape does not match the twists")));
    }
    for (i, row) in matrix.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            if f.plane() != Plane::Dual {
                return Err(Error::TagMismatch(format!("{what} entry ({i}, {j}) is not a dual-plane form")));
            }
            let d = rows[i] - cols[j];
            if !f.is_zero() && (d < 0 || f.degree() as i64 != d) {
                return Err(Error::Invalid(format!("{what} entry ({i}, {j}) has degree {} but needs {d}", f.degree())));
            }
        }
    }
    Ok(())
}

/// Zero entries re-stored at their nominal degree, so products line up.
fn normalize_entries(rows: &[i64], cols: &[i64], matrix: Vec<Vec<TriForm>>) -> Vec<Vec<TriForm>> {
    matrix
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, f)| if f.is_zero() { TriForm::zero((rows[i] - cols[j]).max(0) as u32, Plane::Dual) } else { f })
                .collect()
        })
        .collect()
}

/// `c(F0) c(F2) / c(F1)`, truncated after degree two.
fn chern_of_resolution(f0: &[i64], f1: &[i64], f2: &[i64]) -> ChernPair {
    let (a1, a2) = chern_of_sum(f0);
    let (s1, s2) = chern_of_sum(f2);
    let (b1, b2) = chern_of_sum(f1);
    let (p1, p2) = (a1 + s1, a2 + s2 + a1 * s1);
    let c1 = p1 - b1;
    ChernPair { c1, c2: p2 - b2 - b1 * c1 }
}

impl Presentation {
    /// Presentation with an injective matrix.
    pub fn new(
        targets: Vec<i64>,
        sources: Vec<i64>,
        matrix: Vec<Vec<TriForm>>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        check_entries(&targets, &sources, &matrix, "matrix")?;
        let matrix = normalize_entries(&targets, &sources, matrix);
        Ok(Presentation {
            chern: chern_of_resolution(&targets, &sources, &[]),
            targets,
            sources,
            syzygy_twists: Vec::new(),
            matrix,
            syzygy_matrix: Vec::new(),
            provenance: provenance.into(),
        })
    }

    /// Declares the free kernel `F2 → F1` of the matrix; checks `M·N = 0`.
    pub fn with_syzygies(mut self, twists: Vec<i64>, syzygy_matrix: Vec<Vec<TriForm>>) -> Result<Self> {
        check_entries(&self.sources, &twists, &syzygy_matrix, "syzygy matrix")?;
        let n = normalize_entries(&self.sources, &twists, syzygy_matrix);
        for i in 0..self.targets.len() {
            for l in 0..twists.len() {
                let deg = (self.targets[i] - twists[l]).max(0) as u32;
                let mut acc = TriForm::zero(deg, Plane::Dual);
                for j in 0..self.sources.len() {
                    let (a, b) = (&self.matrix[i][j], &n[j][l]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.multiply(b)?)?;
                    }
                }
                if !acc.is_zero() {
                    return Err(Error::Inconsistent(format!("syzygy {l} not killed by row {i}")));
                }
            }
        }
        self.chern = chern_of_resolution(&self.targets, &self.sources, &twists);
        self.syzygy_twists = twists;
        self.syzygy_matrix = n;
        Ok(self)
    }

    pub fn rank(&self) -> i64 {
        self.targets.len() as i64 - self.sources.len() as i64 + self.syzygy_twists.len() as i64
    }

    fn entry_active(&self, i: usize, j: usize) -> bool {
        self.targets[i] >= self.sources[j] && !self.matrix[i][j].is_zero()
    }

    pub fn eval_at(&self, alpha: &[Rational; 3]) -> QMatrix {
        let rows: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|f| if f.is_zero() { Rational::zero() } else { f.eval(alpha) }).collect())
            .collect();
        if rows.is_empty() {
            return QMatrix::zeros(0, self.sources.len());
        }
        QMatrix::from_rows(&rows).expect("rectangular")
    }

    /// Rank of the matrix at `count` seeded random points must be
    /// `|targets| - 2`.
    pub fn check_generic_rank(&self, seed: u64, count: usize) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let want = self.targets.len() - 2;
        for _ in 0..count {
            let alpha: [Rational; 3] = std::array::from_fn(|_| Rational::from_integer(rng.gen_range(-50i64..=50).into()));
            if alpha.iter().all(Zero::is_zero) {
                continue;
            }
            let r = if self.sources.is_empty() { 0 } else { rank_q(&self.eval_at(&alpha)) };
            if r != want {
                return Err(Error::Inconsistent(format!(
                    "rank {r} at {alpha:?}, expected {want} ({})",
                    self.provenance
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = PresentationJson {
            targets: self.targets.clone(),
            sources: self.sources.clone(),
            syzygies: self.syzygy_twists.clone(),
            chern: self.chern,
            provenance: self.provenance.clone(),
            matrix: self.matrix.iter().map(|r| r.iter().map(TriForm::to_json).collect()).collect(),
        };
        serde_json::to_value(j).expect("serialisable")
    }
}

pub fn chern_from_presentation(p: &Presentation) -> ChernPair {
    p.chern
}

pub fn twist(p: &Presentation, m: i64) -> Presentation {
    Presentation {
        targets: p.targets.iter().map(|d| d + m).collect(),
        sources: p.sources.iter().map(|e| e + m).collect(),
        syzygy_twists: p.syzygy_twists.iter().map(|f| f + m).collect(),
        matrix: p.matrix.clone(),
        syzygy_matrix: p.syzygy_matrix.clone(),
        chern: p.chern.twisted(m),
        provenance: if m == 0 { p.provenance.clone() } else { format!("{}({m})", p.provenance) },
    }
}

/// `⊕ O(a_i)` with no relations.
pub fn line_bundle_sum(twists: &[i64]) -> Presentation {
    Presentation::new(
        twists.to_vec(),
        Vec::new(),
        twists.iter().map(|_| Vec::new()).collect(),
        format!("O{twists:?}"),
    )
    .expect("no entries to check")
}

fn alpha(i: usize) -> TriForm {
    TriForm::var(i, Plane::Dual)
}

/// Cotangent bundle as the cokernel of `O(-3) → O(-2)³`, `1 ↦ (α0, α1, α2)`.
pub fn cotangent() -> Presentation {
    Presentation::new(vec![-2; 3], vec![-3], (0..3).map(|i| vec![alpha(i)]).collect(), "Omega")
        .expect("valid Koszul presentation")
}

/// `T(-1)` as the cokernel of `O(-1) → O³`.
pub fn tangent_twisted() -> Presentation {
    Presentation::new(vec![0; 3], vec![-1], (0..3).map(|i| vec![alpha(i)]).collect(), "T(-1)")
        .expect("valid Euler presentation")
}

/// Entries of multiplication by a form `Σ_k α_k F_k(x)` (the `F_k` of a
/// common degree `e`) from degree-`(n - e)` forms in `x` to degree-`n`
/// forms in `x`, one column per source monomial.
fn multiplication_block(f: &[TriForm; 3], n: u32) -> Vec<Vec<TriForm>> {
    let e = f[0].degree();
    let tgt = monomials(n);
    let src = if n >= e { monomials(n - e) } else { Vec::new() };
    let mut cols: Vec<Vec<[Rational; 3]>> = Vec::with_capacity(src.len());
    for mu in &src {
        let mut col = vec![std::array::from_fn(|_| Rational::zero()); tgt.len()];
        for (k, fk) in f.iter().enumerate() {
            for (ex, c) in fk.terms() {
                let idx = monomial_index(&[ex[0] + mu[0], ex[1] + mu[1], ex[2] + mu[2]]);
                let slot: &mut [Rational; 3] = &mut col[idx];
                slot[k] += c;
            }
        }
        cols.push(col);
    }
    (0..tgt.len())
        .map(|r| cols.iter().map(|c| TriForm::linear(&c[r], Plane::Dual)).collect())
        .collect()
}

/// Presentation of the direct image of `O(n)` for `n ≥ 1`: targets the
/// degree-`n` forms in `x`, sources the degree-`(n-1)` forms (through the
/// fiber line) and degree-`(n-2)` forms (through the fiber conic), all
/// twisted by `-1`; the Koszul relation contributes a free kernel
/// `S_{n-3}(-2)`.
pub fn build_en(net: &CubicNet, n: i64) -> Result<Presentation> {
    if n < 1 {
        return Err(Error::Invalid(format!("build_en needs n ≥ 1, got {n}")));
    }
    let nn = n as u32;
    let xb = multiplication_block(&net.x, nn);
    let cb = if nn >= 2 { multiplication_block(&net.c_short, nn) } else { vec![Vec::new(); s_dim(n)] };
    let matrix: Vec<Vec<TriForm>> = xb.into_iter().zip(cb).map(|(mut a, b)| {
        a.extend(b);
        a
    }).collect();
    let sources = vec![-1; s_dim(n - 1) + s_dim(n - 2)];
    let mut p = Presentation::new(vec![0; s_dim(n)], sources, matrix, format!("E{n}"))?;
    if n >= 3 {
        // w ↦ (C(α) w, -X(α) w)
        let mut syz = multiplication_block(&net.c_short, nn - 1);
        syz.extend(multiplication_block(&net.x, nn - 2).into_iter().map(|r| r.iter().map(TriForm::neg).collect()));
        p = p.with_syzygies(vec![-2; s_dim(n - 3)], syz)?;
    }
    p.check_generic_rank(0xE0 + n as u64, 5)?;
    Ok(p)
}

/// `O ⊕ O(-2)`.
pub fn build_e0() -> Presentation {
    let mut p = line_bundle_sum(&[0, -2]);
    p.provenance = "E0".into();
    p
}

/// `E_n` for any integer `n`, with `E_{-n} = E_n(-3n)` for `n ≥ 1`.
pub fn build_e(net: &CubicNet, n: i64) -> Result<Presentation> {
    match n {
        0 => Ok(build_e0()),
        n if n > 0 => build_en(net, n),
        n => {
            let mut p = twist(&build_en(net, -n)?, 3 * n);
            p.provenance = format!("E{n}");
            Ok(p)
        }
    }
}

/// Coefficient vectors over degree-`k` monomials; `None` for `k < 0`.
fn monomials_or_empty(k: i64) -> Vec<Exponent> {
    if k < 0 {
        Vec::new()
    } else {
        monomials(k as u32)
    }
}

/// Matrix of a map `⊕ S_{a_i} → ⊕ S_{b_j}`, `(g_i) ↦ (Σ_i g_i·F_ij)`, with
/// `F_ij` of degree `b_j - a_i` (or absent).
fn action_matrix<'a>(
    in_deg: &[i64],
    out_deg: &[i64],
    entry: impl Fn(usize, usize) -> Option<&'a TriForm>,
) -> (QMatrix, Vec<(usize, Exponent)>) {
    let unknowns: Vec<(usize, Exponent)> = in_deg
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| monomials_or_empty(a).into_iter().map(move |e| (i, e)))
        .collect();
    let mut offsets = Vec::with_capacity(out_deg.len());
    let mut rows = 0;
    for &b in out_deg {
        offsets.push(rows);
        rows += s_dim(b);
    }
    let mut m = QMatrix::zeros(rows, unknowns.len());
    for (col, (i, mu)) in unknowns.iter().enumerate() {
        for (j, &b) in out_deg.iter().enumerate() {
            if b < 0 {
                continue;
            }
            let Some(f) = entry(*i, j) else { continue };
            if f.is_zero() {
                continue;
            }
            for (ex, c) in f.terms() {
                let idx = monomial_index(&[ex[0] + mu[0], ex[1] + mu[1], ex[2] + mu[2]]);
                m[(offsets[j] + idx, col)] += c;
            }
        }
    }
    (m, unknowns)
}

fn dual_side_matrix(p: &Presentation, k: i64) -> (QMatrix, Vec<(usize, Exponent)>) {
    let a: Vec<i64> = p.targets.iter().map(|d| k - d).collect();
    let b: Vec<i64> = p.sources.iter().map(|e| k - e).collect();
    action_matrix(&a, &b, |i, j| p.entry_active(i, j).then(|| &p.matrix[i][j]))
}

fn rank_or_zero(m: &QMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        0
    } else {
        rank_q(m)
    }
}

/// `h⁰(E(m))` as the kernel of `g ↦ g·M`; uses only right exactness of the
/// presentation.
pub fn h0_dual(p: &Presentation, m: i64) -> usize {
    let (mat, unknowns) = dual_side_matrix(p, m + p.chern.c1);
    unknowns.len() - rank_or_zero(&mat)
}

/// `h⁰(E(m))` from the resolution `0 → F2 → F1 → F0 → E → 0`.
pub fn h0_resolution(p: &Presentation, m: i64) -> usize {
    let a: Vec<i64> = p.sources.iter().map(|e| m + e).collect();
    let b: Vec<i64> = p.targets.iter().map(|d| m + d).collect();
    let (mat, _) = action_matrix(&a, &b, |j, i| p.entry_active(i, j).then(|| &p.matrix[i][j]));
    let coker = mat.rows() - rank_or_zero(&mat);
    // ker(H²(F2(m)) → H²(F1(m))), dual to H⁰(F1^∨(k)) → H⁰(F2^∨(k))
    let k = -m - 3;
    let h2: usize = p.syzygy_twists.iter().map(|f| s_dim(k - f)).sum();
    if h2 == 0 {
        return coker;
    }
    let a: Vec<i64> = p.sources.iter().map(|e| k - e).collect();
    let b: Vec<i64> = p.syzygy_twists.iter().map(|f| k - f).collect();
    let (dual, _) = action_matrix(&a, &b, |j, l| Some(&p.syzygy_matrix[j][l]));
    coker + h2 - rank_or_zero(&dual)
}

pub fn h0_presentation(p: &Presentation, m: i64) -> usize {
    h0_resolution(p, m)
}

/// Basis of `H⁰(E(m))` as rows `(g_i)` with `g·M = 0`, `g_i` of degree
/// `m + c1 - d_i`.
pub fn sections(p: &Presentation, m: i64) -> Vec<Vec<TriForm>> {
    let k = m + p.chern.c1;
    let (mat, unknowns) = dual_side_matrix(p, k);
    let kernel = if mat.rows() == 0 {
        (0..unknowns.len())
            .map(|c| (0..unknowns.len()).map(|r| if r == c { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        kernel_q(&mat)
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut row: Vec<TriForm> = p
                .targets
                .iter()
                .map(|d| TriForm::zero((k - d).max(0) as u32, Plane::Dual))
                .collect();
            for ((i, e), c) in unknowns.iter().zip(v) {
                if !c.is_zero() {
                    row[*i] = row[*i].add(&TriForm::monomial(*e, c, Plane::Dual)).expect("same degree");
                }
            }
            row
        })
        .collect()
}

/// True iff every component of the section row vanishes at the point.
pub fn section_vanishes_at(row: &[TriForm], point: &ProjPoint) -> bool {
    row.iter().all(|g| g.is_zero() || g.eval_point(point).is_zero())
}

/// Matrix of `g ↦ g·M|_line` for binary `g_i` of degree `k - d_i`.
pub(crate) fn restricted_matrix(rm: &[Vec<BinForm>], targets: &[i64], sources: &[i64], k: i64) -> QMatrix {
    let unknowns: Vec<(usize, i64)> = targets
        .iter()
        .enumerate()
        .flat_map(|(i, d)| (0..=k - d).map(move |u| (i, u)))
        .collect();
    let mut offsets = Vec::with_capacity(sources.len());
    let mut rows = 0usize;
    for e in sources {
        offsets.push(rows);
        rows += (k - e + 1).max(0) as usize;
    }
    let mut m = QMatrix::zeros(rows, unknowns.len());
    for (col, (i, u)) in unknowns.iter().enumerate() {
        for j in 0..sources.len() {
            let f = &rm[*i][j];
            if targets[*i] < sources[j] || f.is_zero() {
                continue;
            }
            for (s_exp, c) in f.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    m[(offsets[j] + *u as usize + s_exp, col)] += c;
                }
            }
        }
    }
    m
}

/// Kernel dimension, exactly or modulo a prime (then an upper bound).
fn kernel_dim(m: &QMatrix, exact: bool) -> usize {
    if m.cols() == 0 {
        return 0;
    }
    if m.rows() == 0 {
        return m.cols();
    }
    let r = if exact { None } else { crate::exact::rank_q_mod(m) };
    m.cols() - r.unwrap_or_else(|| rank_q(m))
}

fn expected_line_h0(st: &SplittingType, m: i64) -> usize {
    ((m + st.a + 1).max(0) + (m + st.b + 1).max(0)) as usize
}

/// Splitting type of `E` on a line, from the kernel of the restricted
/// dual-side map at each twist.
///
/// Ranks are first taken modulo a prime, which can only overstate kernel
/// dimensions. A zero modular kernel at `-a - 1` therefore proves `a` is no
/// larger; `a` is no smaller either when it is `⌈c1/2⌉`, and otherwise an
/// exact kernel at `-a` confirms it. Any modular value that disagrees with
/// the resulting pattern is recomputed exactly. The fiber rank is checked
/// at six points of the line.
pub fn splitting_type(p: &Presentation, line: &DualLine) -> Result<SplittingType> {
    splitting_type_widened(p, line, 0)
}

/// [`splitting_type`] with the scan floor lowered and the pattern check
/// widened by `extra` twists on each side.
pub fn splitting_type_widened(p: &Presentation, line: &DualLine, extra: i64) -> Result<SplittingType> {
    if line.plane != Plane::Dual {
        return Err(Error::TagMismatch("splitting type needs a dual-plane line".into()));
    }
    let pp = line.p.to_rational();
    let qq = line.q.to_rational();
    let rm: Vec<Vec<BinForm>> = p
        .matrix
        .iter()
        .map(|r| r.iter().map(|f| f.restrict_to(&pp, &qq)).collect())
        .collect();
    let want = p.targets.len() as i64 - 2;
    if want < 0 {
        return Err(Error::Invalid("presentation of rank above two".into()));
    }
    for (s, t) in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 3)] {
        if p.sources.is_empty() {
            break;
        }
        let sr = Rational::from_integer(s.into());
        let tr = Rational::from_integer(t.into());
        let rows: Vec<Vec<Rational>> = rm.iter().map(|r| r.iter().map(|f| f.eval(&sr, &tr)).collect()).collect();
        let fiber = QMatrix::from_rows(&rows)?;
        // the rank never exceeds its generic value, and reduction never raises it
        let rank = match crate::exact::rank_q_mod(&fiber) {
            Some(r) if r as i64 == want => r,
            _ => rank_q(&fiber),
        };
        if rank as i64 != want {
            return Err(Error::Inconsistent(format!(
                "fiber rank {rank} (expected {want}) at ({s}:{t}) on {line:?} for {}",
                p.provenance
            )));
        }
    }
    let c1 = p.chern.c1;
    let min_d = p.targets.iter().copied().min().unwrap_or(0);
    let lo = -(c1 - min_d) - extra.max(0);
    let hi = -(c1.div_euclid(2) + c1.rem_euclid(2));
    let dim = |m: i64, exact: bool| kernel_dim(&restricted_matrix(&rm, &p.targets, &p.sources, m + c1), exact);
    let scan = |exact: bool| {
        let mut m0 = hi;
        while m0 > lo && dim(m0 - 1, exact) > 0 {
            m0 -= 1;
        }
        m0
    };
    let mut m0 = scan(false);
    if m0 != hi && dim(m0, true) == 0 {
        m0 = scan(true);
    }
    // χ(E|ℓ(-⌈c1/2⌉)) ≥ 1 already forces a section at the top of the scan
    if m0 != hi && dim(m0, true) == 0 {
        return Err(Error::Inconsistent(format!("no sections on {line:?} within the scan bounds for {}", p.provenance)));
    }
    let st = SplittingType { a: -m0, b: c1 + m0 };
    let band = 2 + extra.max(0);
    for m in m0 - band..=m0 + band {
        let expect = expected_line_h0(&st, m);
        if dim(m, false) != expect && dim(m, true) != expect {
            return Err(Error::Inconsistent(format!(
                "pattern check failed at twist {m} on {line:?} for {}: expected {expect}",
                p.provenance
            )));
        }
    }
    Ok(st)
}

/// Lines `a·α = 0` with integer coefficients in `[-bound, bound]` from the
/// seeded generator.
pub fn seeded_lines(seed: u64, count: usize, bound: i64) -> Vec<DualLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let eq: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        if let Ok(l) = DualLine::from_equation_i64(eq, Plane::Dual) {
            if !out.iter().any(|o: &DualLine| o.same_line(&l)) {
                out.push(l);
            }
        }
    }
    out
}

pub const CANONICAL_LINE_SEED: u64 = 0x5EED_0010;

/// The fixed ten-line sample used by fingerprints.
pub fn canonical_lines() -> Vec<DualLine> {
    seeded_lines(CANONICAL_LINE_SEED, 10, 50)
}

/// Isomorphism surrogate: Chern classes, `h⁰` over a window of twists, and
/// the splitting types over the canonical lines (sorted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub chern: ChernPair,
    pub window: (i64, i64),
    pub h0: Vec<usize>,
    pub splittings: Vec<SplittingType>,
}

pub fn fingerprint(p: &Presentation, window: (i64, i64)) -> Result<Fingerprint> {
    let h0 = (window.0..=window.1)
        .into_par_iter()
        .map(|m| h0_presentation(p, m))
        .collect();
    let mut splittings = canonical_lines()
        .par_iter()
        .map(|l| splitting_type(p, l))
        .collect::<Result<Vec<_>>>()?;
    splittings.sort();
    Ok(Fingerprint {
        chern: p.chern,
        window,
        h0,
        splittings,
    })
}

// ---------------------------------------------------------------------------
// presentations from section modules

/// Multiplying forms by `α`-monomials means multiplying by products of the
/// net's cubics; these are cached per degree.
struct NetPowers<'a> {
    net: &'a CubicNet,
    cache: HashMap<Exponent, TriForm>,
}

impl<'a> NetPowers<'a> {
    fn new(net: &'a CubicNet) -> Self {
        NetPowers {
            net,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, mu: &Exponent) -> TriForm {
        if let Some(f) = self.cache.get(mu) {
            return f.clone();
        }
        let f = if mu.iter().sum::<u32>() == 0 {
            TriForm::constant(Rational::one(), Plane::Source)
        } else {
            let k = (0..3).find(|&k| mu[k] > 0).expect("nonzero exponent");
            let mut lower = *mu;
            lower[k] -= 1;
            self.get(&lower).multiply(&self.net.delta[k]).expect("same plane")
        };
        self.cache.insert(*mu, f.clone());
        f
    }
}

/// Minimal generators and relations of the section module over a window.
fn extract(net: &CubicNet, gs: &GradedSections) -> Result<Presentation> {
    let (lo, hi) = gs.window;
    let mut powers = NetPowers::new(net);
    let mut gens: Vec<(i64, TriForm)> = Vec::new();
    let mut rels: Vec<(i64, Vec<Rational>, Vec<(usize, Exponent)>)> = Vec::new();
    let mut prev_kernel: Vec<Vec<Rational>> = Vec::new();
    let mut prev_index: Vec<(usize, Exponent)> = Vec::new();
    for m in lo..=hi {
        let slot = &gs.slots[&m];
        let Some(deg) = slot.degree else {
            prev_kernel.clear();
            prev_index.clear();
            continue;
        };
        let nmon = monomials(deg).len();
        // images of existing generators
        let mut index: Vec<(usize, Exponent)> = Vec::new();
        let mut columns: Vec<Vec<Rational>> = Vec::new();
        for (k, (mk, g)) in gens.iter().enumerate() {
            for mu in monomials_or_empty(m - mk) {
                index.push((k, mu));
                columns.push(powers.get(&mu).multiply(g)?.coeffs().to_vec());
            }
        }
        let mut span = RowSpace::new(nmon);
        for c in &columns {
            span.insert(c);
        }
        for b in &slot.basis {
            if span.insert(b.coeffs()) {
                gens.push((m, b.clone()));
                index.push((gens.len() - 1, [0, 0, 0]));
                columns.push(b.coeffs().to_vec());
            }
        }
        if span.rank() != slot.dim() {
            return Err(Error::Inconsistent(format!("module slot {m} not spanned")));
        }
        // relations in this degree
        let kernel = if columns.is_empty() {
            Vec::new()
        } else {
            kernel_q(&QMatrix::from_columns(nmon, &columns)?)
        };
        let pos: HashMap<(usize, Exponent), usize> = index.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut known = RowSpace::new(index.len());
        for r in &prev_kernel {
            for j in 0..3 {
                let mut v = vec![Rational::zero(); index.len()];
                for ((k, mu), c) in prev_index.iter().zip(r) {
                    if c.is_zero() {
                        continue;
                    }
                    let mut up = *mu;
                    up[j] += 1;
                    v[pos[&(*k, up)]] += c;
                }
                known.insert(&v);
            }
        }
        for r in &kernel {
            if known.insert(r) {
                rels.push((m, r.clone(), index.clone()));
            }
        }
        prev_kernel = kernel;
        prev_index = index;
    }
    let targets: Vec<i64> = gens.iter().map(|(mk, _)| -mk).collect();
    let sources: Vec<i64> = rels.iter().map(|(mr, _, _)| -mr).collect();
    let mut matrix: Vec<Vec<TriForm>> = gens
        .iter()
        .map(|(mk, _)| {
            rels.iter()
                .map(|(mr, _, _)| TriForm::zero((mr - mk).max(0) as u32, Plane::Dual))
                .collect()
        })
        .collect();
    for (j, (_, r, index)) in rels.iter().enumerate() {
        for ((k, mu), c) in index.iter().zip(r) {
            if !c.is_zero() {
                matrix[*k][j] = matrix[*k][j].add(&TriForm::monomial(*mu, c.clone(), Plane::Dual))?;
            }
        }
    }
    Presentation::new(targets, sources, matrix, format!("graded{}", gs.pic))
}

/// First twist whose slot can be nonzero.
pub fn module_start(l: &PicClass) -> i64 {
    (-l.n).div_euclid(3) + if (-l.n).rem_euclid(3) == 0 { 0 } else { 1 }
}

/// Presentation of the direct image of a class, read off its section
/// module. The window starts at the first possibly nonzero twist and grows
/// until the presentation is unchanged by one more twist and reproduces
/// the section dimensions across the grown window.
pub fn presentation_from_graded(net: &CubicNet, gs: &GradedSections, max_retries: usize) -> Result<Presentation> {
    let l = gs.pic;
    let lo = module_start(&l).min(gs.window.0);
    let mut hi = gs.window.1.max(lo);
    let mut grown = if gs.window.0 <= lo {
        gs.clone()
    } else {
        graded_module(net, &l, (lo, hi))?
    };
    let mut current = extract(net, &grown)?;
    for _ in 0..=max_retries {
        // only the new twist is interpolated; earlier slots are kept
        let slot = graded_module(net, &l, (hi + 1, hi + 1))?.slots.remove(&(hi + 1)).expect("requested slot");
        grown.slots.insert(hi + 1, slot);
        grown.window = (lo, hi + 1);
        let next = extract(net, &grown)?;
        if next == current {
            let consistent = (lo..=hi + 1).all(|m| h0_presentation(&next, m) == grown.dim(m));
            if consistent && next.rank() == 2 {
                return Ok(next);
            }
        }
        current = next;
        hi += 1;
    }
    Err(Error::NotStabilized(max_retries))
}

/// Convenience: presentation of the direct image of `l`.
pub fn presentation_of_class(net: &CubicNet, l: &PicClass) -> Result<Presentation> {
    let lo = module_start(l);
    let gs = graded_module(net, l, (lo, lo + 3))?;
    presentation_from_graded(net, &gs, 6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcubics::tests::frame_config;
    use crate::picsheaf::{chern, h0_upstairs};

    fn net() -> CubicNet {
        CubicNet::new(&frame_config()).unwrap()
    }

    #[test]
    fn shapes_and_chern() {
        let net = net();
        let e2 = build_en(&net, 2).unwrap();
        assert_eq!((e2.targets.len(), e2.sources.len()), (6, 4));
        assert!(e2.sources.iter().all(|&e| e == -1));
        let e1 = build_en(&net, 1).unwrap();
        assert_eq!((e1.targets.len(), e1.sources.len()), (3, 1));
        for n in 1..=5 {
            let p = build_en(&net, n).unwrap();
            assert_eq!(p.chern, chern(&PicClass::e_n(n)), "n = {n}");
            assert_eq!(p.chern, ChernPair { c1: 3 * n - 2, c2: 4 * n * n - 3 * n });
        }
        assert_eq!(build_e0().chern, ChernPair { c1: -2, c2: 0 });
        let p = build_en(&net, 3).unwrap();
        assert_eq!(twist(&p, 0), p);
        for m in -3..=3 {
            assert_eq!(twist(&p, m).chern, p.chern.twisted(m));
        }
    }

    #[test]
    fn h0_values() {
        let net = net();
        let e2 = build_en(&net, 2).unwrap();
        assert_eq!(h0_presentation(&e2, 0), 6);
        assert_eq!(h0_presentation(&e2, 1), 14);
        let e3 = build_en(&net, 3).unwrap();
        assert_eq!(h0_presentation(&e3, -1), 1);
        assert_eq!(h0_dual(&e3, -1), 1);
        let e0 = build_e0();
        for m in -1..=2 {
            assert_eq!(h0_presentation(&e0, m), h0_upstairs(&net.config, &PicClass::e_n(0), m));
        }
    }

    #[test]
    fn both_h0_methods_agree() {
        let net = net();
        for n in 1..=4 {
            let p = build_en(&net, n).unwrap();
            let top = if n == 4 { -3 } else { 0 };
            for m in -n - 1..=top {
                assert_eq!(h0_resolution(&p, m), h0_dual(&p, m), "n = {n}, m = {m}");
            }
        }
        let p = build_en(&net, 2).unwrap();
        assert_eq!(h0_resolution(&p, 2), h0_dual(&p, 2));
    }

    #[test]
    fn syzygies_are_checked() {
        let net = net();
        let p = build_en(&net, 3).unwrap();
        assert_eq!(p.syzygy_twists, vec![-2]);
        let mut bad = p.syzygy_matrix.clone();
        bad[0][0] = bad[0][0].add(&alpha(0)).unwrap();
        let mut q = p.clone();
        q.syzygy_twists.clear();
        q.syzygy_matrix.clear();
        assert!(q.with_syzygies(vec![-2], bad).is_err());
    }

    #[test]
    fn koszul_section_vanishes_at_one_point() {
        // O(-1) → O³ by (α0, α1, α2): the row (α1, -α0, 0) kills the column
        let p = tangent_twisted();
        let row = vec![alpha(1), alpha(0).neg(), TriForm::zero(1, Plane::Dual)];
        let prod = row[0].multiply(&alpha(0)).unwrap().add(&row[1].multiply(&alpha(1)).unwrap()).unwrap();
        assert!(prod.is_zero());
        assert!(section_vanishes_at(&row, &ProjPoint::from_ints(0, 0, 1).unwrap()));
        assert!(!section_vanishes_at(&row, &ProjPoint::from_ints(1, 0, 0).unwrap()));
        assert!(!section_vanishes_at(&row, &ProjPoint::from_ints(1, 2, 3).unwrap()));
        assert_eq!(sections(&p, 0).len(), 3);
    }

    #[test]
    fn jump_orders() {
        assert_eq!(jump_order(&SplittingType { a: 2, b: 2 }), 0);
        assert_eq!(jump_order(&SplittingType { a: 4, b: 0 }), 2);
        assert_eq!(jump_order(&SplittingType { a: 1, b: -2 }), 1);
        assert!(meets_bitangency_threshold(&SplittingType { a: 1, b: -2 }));
        assert!(!meets_bitangency_threshold(&SplittingType { a: 3, b: 1 }));
        assert!(meets_bitangency_threshold(&SplittingType { a: 4, b: 0 }));
    }

    #[test]
    fn splitting_examples() {
        let net = net();
        let lines = seeded_lines(3, 4, 50);
        for l in &lines {
            assert_eq!(splitting_type(&build_e0(), l).unwrap(), SplittingType { a: 0, b: -2 });
            assert_eq!(splitting_type(&build_en(&net, 1).unwrap(), l).unwrap(), SplittingType { a: 1, b: 0 });
            assert_eq!(splitting_type(&build_en(&net, 2).unwrap(), l).unwrap(), SplittingType { a: 2, b: 2 });
            assert_eq!(splitting_type(&cotangent(), l).unwrap(), SplittingType { a: -1, b: -2 });
        }
        let l1 = crate::bitangents::aronhold_line(&net, 0).unwrap();
        assert_eq!(splitting_type(&build_en(&net, 2).unwrap(), &l1).unwrap(), SplittingType { a: 4, b: 0 });
        let r = l1.rebase([[2, 1], [1, 1]]).unwrap();
        assert_eq!(splitting_type(&build_en(&net, 2).unwrap(), &r).unwrap(), SplittingType { a: 4, b: 0 });
    }

    #[test]
    fn graded_round_trip_e2() {
        let net = net();
        let g = presentation_of_class(&net, &PicClass::e_n(2)).unwrap();
        assert_eq!(g.chern, ChernPair { c1: 4, c2: 10 });
        let w = (-3, 3);
        assert_eq!(fingerprint(&g, w).unwrap(), fingerprint(&build_en(&net, 2).unwrap(), w).unwrap());
    }

    #[test]
    fn cotangent_from_seven_exceptional_twists() {
        let net = net();
        let g = presentation_of_class(&net, &PicClass::e_nk(2, 7)).unwrap();
        assert_eq!(g.chern, ChernPair { c1: -3, c2: 3 });
        let w = (-3, 3);
        assert_eq!(fingerprint(&g, w).unwrap(), fingerprint(&cotangent(), w).unwrap());
    }
}
