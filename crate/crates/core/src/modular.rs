//! Multi-modular row reduction with exact verification.
//!
//! The reduced row-echelon form is computed modulo a run of 31-bit primes,
//! combined by the Chinese remainder theorem and lifted by rational
//! reconstruction. A lift is accepted only after `M·w = 0` has been checked
//! over the integers for every kernel vector it implies. Since reduction
//! modulo a prime never raises the rank, that check pins the kernel, and
//! with it the exact reduced form.

use std::sync::OnceLock;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::{Integer, Rational};

const PRIME_COUNT: usize = 400;

fn is_prime_u32(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // bases 2, 7, 61 are deterministic below 2^32
    'witness: for a in [2u64, 7, 61] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Primes below `2^31`, descending.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut n = (1u64 << 31) - 1;
        while out.len() < PRIME_COUNT {
            if is_prime_u32(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn reduce(x: &Integer, p: u64) -> u64 {
    let r = x.mod_floor(&Integer::from(p));
    r.try_into().expect("below p")
}

/// Reduced row-echelon form modulo `p`: pivot columns and the pivot rows.
pub(crate) fn rref_mod(rows: &[Vec<Integer>], cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect();
    let n = a.len();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == n {
            break;
        }
        let Some(k) = (prow..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(k, prow);
        let inv = pow_mod(a[prow][col], p - 2, p);
        for v in a[prow].iter_mut().skip(col) {
            *v = *v * inv % p;
        }
        let pivot = std::mem::take(&mut a[prow]);
        let nz: Vec<usize> = (col..cols).filter(|&c| pivot[c] != 0).collect();
        for (r, row) in a.iter_mut().enumerate() {
            if r == prow || row[col] == 0 {
                continue;
            }
            let f = p - row[col];
            for &c in &nz {
                row[c] = (row[c] + f * pivot[c]) % p;
            }
        }
        a[prow] = pivot;
        pivots.push(col);
        prow += 1;
    }
    a.truncate(prow);
    (pivots, a)
}

/// Rank modulo the first prime; a lower bound for the rank over `Q`.
pub(crate) fn rank_lower_bound(rows: &[Vec<Integer>], cols: usize) -> usize {
    rref_mod(rows, cols, primes()[0]).0.len()
}

/// `n/d` with `|n|, d ≤ sqrt(N/2)` and `n ≡ a d (mod N)`, if any.
fn rational_reconstruction(a: &Integer, modulus: &Integer, bound: &Integer) -> Option<Rational> {
    let (mut r0, mut r1) = (modulus.clone(), a.clone());
    let (mut t0, mut t1) = (Integer::zero(), Integer::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Exact reduced row-echelon form of the integer rows, or `None` if the
/// lift did not verify within the prime budget.
pub(crate) fn rref_certified(rows: &[Vec<Integer>], cols: usize) -> Option<(Vec<usize>, Vec<Vec<Rational>>)> {
    let ps = primes();
    let mut pivots: Vec<usize> = Vec::new();
    // CRT images of the entries R[i][f] for free columns f
    let mut images: Vec<Vec<Integer>> = Vec::new();
    let mut modulus = Integer::one();
    let mut used = 0usize;
    let mut next_attempt = 1usize;
    let mut candidate: Option<Vec<Vec<Rational>>> = None;
    let mut free: Vec<usize> = Vec::new();
    for &p in ps {
        let (piv, red) = rref_mod(rows, cols, p);
        let better = piv.len() > pivots.len() || (piv.len() == pivots.len() && piv < pivots);
        if used == 0 || better {
            pivots = piv;
            free = (0..cols).filter(|c| !pivots.contains(c)).collect();
            images = red.iter().map(|r| free.iter().map(|&f| Integer::from(r[f])).collect()).collect();
            modulus = Integer::from(p);
            used = 1;
            next_attempt = 1;
            candidate = None;
        } else if piv != pivots {
            continue;
        } else {
            // a standing candidate that already agrees modulo p is checked exactly
            if let Some(c) = &candidate {
                let agrees = c.iter().zip(&red).all(|(crow, r)| {
                    crow.iter().zip(&free).all(|(q, &f)| {
                        let d = reduce(q.denom(), p);
                        d != 0 && reduce(q.numer(), p) == r[f] * d % p
                    })
                });
                if agrees && verify(rows, cols, &pivots, &free, c) {
                    let full = expand(c, &pivots, &free, cols);
                    return Some((pivots, full));
                }
                candidate = None;
            }
            let pz = Integer::from(p);
            let inv = {
                let m = reduce(&modulus, p);
                Integer::from(pow_mod(m, p - 2, p))
            };
            for (img, r) in images.iter_mut().zip(&red) {
                for (x, &f) in img.iter_mut().zip(&free) {
                    let diff = (Integer::from(r[f]) - &*x).mod_floor(&pz);
                    let k = (diff * &inv).mod_floor(&pz);
                    *x += &modulus * k;
                }
            }
            modulus *= &pz;
            used += 1;
        }
        if used >= next_attempt {
            next_attempt = used + used.div_ceil(2);
            let bound = (&modulus / Integer::from(2)).sqrt();
            let lifted: Option<Vec<Vec<Rational>>> = images
                .iter()
                .map(|img| img.iter().map(|x| rational_reconstruction(x, &modulus, &bound)).collect())
                .collect();
            candidate = lifted;
            if pivots.is_empty() || free.is_empty() {
                // nothing to lift: the form is zero or the identity block
                let c = candidate.clone().unwrap_or_default();
                if verify(rows, cols, &pivots, &free, &c) {
                    let full = expand(&c, &pivots, &free, cols);
                    return Some((pivots, full));
                }
            }
        }
    }
    None
}

fn expand(c: &[Vec<Rational>], pivots: &[usize], free: &[usize], cols: usize) -> Vec<Vec<Rational>> {
    pivots
        .iter()
        .enumerate()
        .map(|(i, &pc)| {
            let mut row = vec![Rational::zero(); cols];
            row[pc] = Rational::one();
            for (q, &f) in c.get(i).map(|r| r.as_slice()).unwrap_or(&[]).iter().zip(free) {
                row[f] = q.clone();
            }
            row
        })
        .collect()
}

/// Checks `M·w_f = 0` over the integers for the kernel vector `w_f` of each
/// free column, scaled by the common denominator of its entries. With the
/// rank bound from the primes this shows the reduced form is exact.
fn verify(rows: &[Vec<Integer>], cols: usize, pivots: &[usize], free: &[usize], c: &[Vec<Rational>]) -> bool {
    // a reduced form has R[i][f] = 0 unless the pivot of row i precedes f
    for (i, &pc) in pivots.iter().enumerate() {
        for (j, &f) in free.iter().enumerate() {
            if f < pc && !c[i][j].is_zero() {
                return false;
            }
        }
    }
    if pivots.len() + free.len() != cols {
        return false;
    }
    for (j, &f) in free.iter().enumerate() {
        let mut den = Integer::one();
        for row in c {
            den = den.lcm(row[j].denom());
        }
        // w_f = den e_f - Σ_i den R[i][f] e_{p_i}
        let w: Vec<(usize, Integer)> = pivots
            .iter()
            .zip(c)
            .filter(|(_, row)| !row[j].is_zero())
            .map(|(&pc, row)| (pc, -(row[j].numer() * (&den / row[j].denom()))))
            .collect();
        for r in rows {
            let mut acc = &r[f] * &den;
            for (pc, wv) in &w {
                if !r[*pc].is_zero() {
                    acc += &r[*pc] * wv;
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_distinct() {
        let ps = primes();
        assert_eq!(ps.len(), PRIME_COUNT);
        assert_eq!(ps[0], (1 << 31) - 1);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        for &p in &ps[..20] {
            assert!((2..50_000u64).all(|d| p % d != 0));
        }
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = Integer::from(1_000_003i64) * Integer::from(998_244_353i64);
        let bound = (&m / Integer::from(2)).sqrt();
        for (n, d) in [(3i64, 7i64), (-22, 5), (0, 1), (123_456, 789)] {
            let q = Rational::new(n.into(), d.into());
            let inv = Integer::from(d).extended_gcd(&m).x.mod_floor(&m);
            let img = (Integer::from(n) * inv).mod_floor(&m);
            assert_eq!(rational_reconstruction(&img, &m, &bound), Some(q));
        }
    }
}
