//! Fraction-free elimination for rational matrices.
//!
//! Rows are scaled to primitive integer vectors and combined with
//! cross-multiplication, so no rational normalisation happens inside the
//! elimination loop. The reduced row-echelon form is unique, hence these
//! routines return exactly what [`crate::linalg::Matrix::rref`] returns on
//! the same input; they are just faster on the sizes this crate needs.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_from_rref, Rref};
use crate::{Integer, QMatrix, Rational};

fn content(row: &[Integer]) -> Integer {
    let mut g = Integer::zero();
    for v in row {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

fn make_primitive(row: &mut [Integer]) {
    let g = content(row);
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v = &*v / &g;
            }
        }
    }
}

/// Clear denominators of a rational vector, returning a primitive integer
/// vector proportional to it (same sign).
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Integer> {
    let mut l = Integer::one();
    for q in v {
        if !q.is_zero() {
            l = l.lcm(q.denom());
        }
    }
    let mut out: Vec<Integer> = v.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    make_primitive(&mut out);
    out
}

fn integer_rows(m: &QMatrix) -> Vec<Vec<Integer>> {
    (0..m.rows()).map(|r| primitive_integer_vector(m.row(r))).collect()
}

/// `target <- a*target - b*pivot_row` with `a, b` the reduced pivot ratio.
fn eliminate(target: &mut [Integer], pivot_row: &[Integer], col: usize, from: usize) {
    let a = &pivot_row[col];
    let b = &target[col];
    let g = a.gcd(b);
    let a = a / &g;
    let b = b / &g;
    let a_is_one = a.is_one();
    for c in 0..target.len() {
        let scaled = if a_is_one || target[c].is_zero() {
            std::mem::take(&mut target[c])
        } else {
            &target[c] * &a
        };
        target[c] = if c >= from && !pivot_row[c].is_zero() {
            scaled - &b * &pivot_row[c]
        } else {
            scaled
        };
    }
    make_primitive(target);
}

/// Row reduction on primitive integer rows. With `full` the rows above each
/// pivot are cleared too (Gauss-Jordan); otherwise only an echelon form.
fn reduce_rows(rows: &mut Vec<Vec<Integer>>, cols: usize, full: bool) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == n {
            break;
        }
        let Some(p) = (prow..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(p, prow);
        let (head, tail) = rows.split_at_mut(prow);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row exists");
        for r in below.iter_mut() {
            if !r[col].is_zero() {
                eliminate(r, pivot_row, col, col);
            }
        }
        if full {
            for r in head.iter_mut() {
                if !r[col].is_zero() {
                    eliminate(r, pivot_row, col, col);
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    pivots
}

/// Matrices with fewer entries than this are reduced directly.
const MODULAR_THRESHOLD: usize = 600;

fn rref_from_pivot_rows(pivots: Vec<usize>, pivot_rows: Vec<Vec<Rational>>, rows: usize, cols: usize) -> Rref<Rational> {
    let mut reduced = QMatrix::zeros(rows, cols);
    for (i, r) in pivot_rows.into_iter().enumerate() {
        for (c, v) in r.into_iter().enumerate() {
            reduced[(i, c)] = v;
        }
    }
    let rank = pivots.len();
    Rref {
        reduced,
        pivots,
        rank,
    }
}

/// Reduced row-echelon form by fraction-free elimination alone.
pub fn rref_fraction_free(m: &QMatrix) -> Rref<Rational> {
    let mut rows = integer_rows(m);
    let pivots = reduce_rows(&mut rows, m.cols(), true);
    let mut reduced = QMatrix::zeros(m.rows(), m.cols());
    for (i, &p) in pivots.iter().enumerate() {
        let lead = rows[i][p].clone();
        for c in 0..m.cols() {
            if !rows[i][c].is_zero() {
                reduced[(i, c)] = Rational::new(rows[i][c].clone(), lead.clone());
            }
        }
    }
    let rank = pivots.len();
    Rref {
        reduced,
        pivots,
        rank,
    }
}

/// Reduced row-echelon form of a rational matrix.
pub fn rref_q(m: &QMatrix) -> Rref<Rational> {
    if m.rows() * m.cols() >= MODULAR_THRESHOLD {
        let rows = integer_rows(m);
        if let Some((pivots, pr)) = crate::modular::rref_certified(&rows, m.cols()) {
            return rref_from_pivot_rows(pivots, pr, m.rows(), m.cols());
        }
    }
    rref_fraction_free(m)
}

pub fn rank_fraction_free(m: &QMatrix) -> usize {
    let mut rows = integer_rows(m);
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    reduce_rows(&mut rows, m.cols(), false).len()
}

/// Exact rank. Large matrices get a modular lower bound first; when that
/// is not already maximal, the side with the smaller nullity is reduced
/// with certification.
pub fn rank_q(m: &QMatrix) -> usize {
    if m.rows() * m.cols() < MODULAR_THRESHOLD {
        return rank_fraction_free(m);
    }
    let rows = integer_rows(m);
    let r0 = crate::modular::rank_lower_bound(&rows, m.cols());
    if r0 == m.rows().min(m.cols()) {
        return r0;
    }
    let certified = if m.cols() <= m.rows() {
        crate::modular::rref_certified(&rows, m.cols())
    } else {
        crate::modular::rref_certified(&integer_rows(&m.transpose()), m.rows())
    };
    match certified {
        Some((pivots, _)) => pivots.len(),
        None => rank_fraction_free(m),
    }
}

/// Rank of a matrix given directly as integer rows.
pub fn rank_integer_rows(mut rows: Vec<Vec<Integer>>, cols: usize) -> usize {
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    for r in rows.iter_mut() {
        make_primitive(r);
    }
    reduce_rows(&mut rows, cols, false).len()
}

/// Kernel basis in the same normal form as [`crate::linalg::Matrix::kernel_basis`].
pub fn kernel_q(m: &QMatrix) -> Vec<Vec<Rational>> {
    kernel_from_rref(&rref_q(m), m.cols())
}

/// Fraction-free (Bareiss) determinant.
pub fn det_q(m: &QMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    // row scale factors restore the rational determinant at the end
    let mut denom = Integer::one();
    let mut numer_scale = Integer::one();
    let mut a: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for r in 0..n {
        let mut l = Integer::one();
        for q in m.row(r) {
            if !q.is_zero() {
                l = l.lcm(q.denom());
            }
        }
        let row: Vec<Integer> = m.row(r).iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
        denom *= &l;
        a.push(row);
    }
    let mut prev = Integer::one();
    let mut sign = Integer::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = Integer::zero();
        }
        prev = a[k][k].clone();
    }
    numer_scale *= sign * &a[n - 1][n - 1];
    Ok(Rational::new(numer_scale, denom))
}

/// The Mersenne prime `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn integer_mod(x: &Integer) -> u64 {
    let r = x.mod_floor(&Integer::from(MODULUS));
    r.try_into().expect("reduced below the modulus")
}

/// Image of a rational number modulo [`MODULUS`]; `None` when the
/// denominator is divisible by it.
pub fn rational_mod(q: &Rational) -> Option<u64> {
    let d = integer_mod(q.denom());
    if d == 0 {
        return None;
    }
    Some(mul_mod(integer_mod(q.numer()), pow_mod(d, MODULUS - 2)))
}

/// Rank of a matrix over the prime field. Reduction modulo a prime never
/// raises the rank, so this is a lower bound for the rank over `Q`, and the
/// matching kernel dimension an upper bound.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, cols: usize) -> usize {
    let n = rows.len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(p, rank);
        let inv = pow_mod(rows[rank][col], MODULUS - 2);
        let pivot: Vec<u64> = rows[rank].iter().map(|&v| mul_mod(v, inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for c in col..cols {
                if pivot[c] != 0 {
                    row[c] = (row[c] + MODULUS - mul_mod(f, pivot[c])) % MODULUS;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// [`rank_mod`] of a rational matrix; `None` if a denominator vanishes.
pub fn rank_q_mod(m: &QMatrix) -> Option<usize> {
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        rows.push(m.row(r).iter().map(rational_mod).collect::<Option<Vec<u64>>>()?);
    }
    Some(rank_mod(rows, m.cols()))
}

/// Incrementally grown row space, kept fully reduced so membership tests
/// and coordinates are cheap.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<(usize, Vec<Integer>)>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn reduce_integer(&self, mut v: Vec<Integer>) -> Vec<Integer> {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                eliminate(&mut v, row, *p, 0);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim);
        let r = self.reduce_integer(primitive_integer_vector(v));
        r.iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false (and leaves the space unchanged) when `v` is
    /// already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim);
        self.insert_integer(primitive_integer_vector(v))
    }

    pub fn insert_integer(&mut self, v: Vec<Integer>) -> bool {
        let r = self.reduce_integer(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let mut r = r;
        if r[p].is_negative() {
            for x in r.iter_mut() {
                *x = -&*x;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                eliminate(row, &r, p, 0);
            }
        }
        self.rows.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, rank_cap: usize) -> QMatrix {
        // product of r x k and k x c integer matrices has rank <= k
        let k = rank_cap;
        let a = QMatrix::from_vec(r, k, (0..r * k).map(|_| rat(rng.gen_range(-4..=4))).collect()).unwrap();
        let b = QMatrix::from_vec(
            k,
            c,
            (0..k * c).map(|_| rat2(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect(),
        )
        .unwrap();
        &a * &b
    }

    #[test]
    fn fraction_free_rref_matches_field_rref() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..40 {
            let r = 1 + trial % 7;
            let c = 1 + (trial * 3) % 9;
            let m = random_matrix(&mut rng, r, c, 1 + trial % 5);
            let a = m.rref();
            let b = rref_q(&m);
            assert_eq!(a, b, "trial {trial}");
            assert_eq!(rank_q(&m), a.rank);
            assert_eq!(kernel_q(&m), m.kernel_basis());
        }
    }

    #[test]
    fn certified_modular_path_matches_fraction_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (r, c, k) in [(30, 40, 20), (40, 30, 25), (25, 25, 25), (36, 28, 9), (20, 60, 19)] {
            let m = random_matrix(&mut rng, r, c, k);
            assert!(r * c >= MODULAR_THRESHOLD);
            let fast = rref_q(&m);
            assert_eq!(fast, rref_fraction_free(&m), "{r}x{c} rank {k}");
            assert_eq!(rank_q(&m), fast.rank);
            assert_eq!(rank_q(&m.transpose()), fast.rank);
            assert_eq!(rank_fraction_free(&m), fast.rank);
        }
    }

    #[test]
    fn modular_rank_matches_on_small_entries() {
        // every minor is far below the modulus, so no prime is unlucky here
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..40 {
            let m = random_matrix(&mut rng, 1 + trial % 6, 1 + (trial * 5) % 7, 1 + trial % 4);
            assert_eq!(rank_q_mod(&m), Some(rank_q(&m)), "trial {trial}");
        }
        assert_eq!(rational_mod(&rat2(1, 2)).map(|h| (2 * h as u128 % MODULUS as u128) as u64), Some(1));
        let p = Rational::from_integer(Integer::from(MODULUS));
        assert_eq!(rational_mod(&(Rational::one() / p)), None);
    }

    #[test]
    fn bareiss_matches_elimination_and_adjugate_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..6 {
            let m = random_matrix(&mut rng, n, n, n);
            let d = det_q(&m).unwrap();
            assert_eq!(d, m.det().unwrap());
            let adj = m.adjugate().unwrap();
            let scaled = QMatrix::identity(n).scale(&d);
            assert_eq!(&m * &adj, scaled);
            assert_eq!(&adj * &m, scaled);
        }
    }

    #[test]
    fn row_space_membership() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(&[rat(1), rat(2), rat(0)]));
        assert!(s.insert(&[rat(0), rat2(1, 2), rat(1)]));
        assert!(!s.insert(&[rat(2), rat(5), rat(2)]));
        assert!(s.contains(&[rat(1), rat(3), rat(2)]));
        assert!(!s.contains(&[rat(0), rat(0), rat(1)]));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn rank_plus_nullity() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 5, 8, 3);
            assert_eq!(rank_q(&m) + kernel_q(&m).len(), 8);
            let r = rref_q(&m);
            assert_eq!(rref_q(&r.reduced).reduced, r.reduced);
        }
    }
}
