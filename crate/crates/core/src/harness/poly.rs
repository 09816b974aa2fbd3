//! Dense univariate polynomials over `Q`, just enough for exact rational
//! root extraction: Sturm sequences, bisection and simplest fractions.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::{Integer, Rational};

/// Coefficients from the constant term up, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(Integer::from(i)))
                .collect(),
        )
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    /// `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().expect("nonempty") / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Positive multiple with coprime integer coefficients.
    fn to_primitive_ints(&self) -> Vec<Integer> {
        let den = self.0.iter().fold(Integer::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<Integer> = self.0.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(Integer::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Sturm sequence, each term rescaled by a positive constant.
    fn sturm(&self) -> Vec<Vec<Integer>> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().expect("nonempty").is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            let r = Poly(r.0.iter().map(|c| -c).collect());
            let ints = r.to_primitive_ints();
            seq.push(Poly(ints.into_iter().map(Rational::from_integer).collect()));
        }
        seq.pop();
        seq.iter().map(Poly::to_primitive_ints).collect()
    }

    /// Integer bound on the absolute value of every real root.
    fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.0.iter().map(|c| c.abs() / &l).fold(Rational::zero(), |a, b| if b > a { b } else { a });
        Rational::from_integer((m + Rational::one()).ceil().to_integer())
    }
}

fn variations(seq: &[Vec<Integer>], x: &Rational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| sign_at(p, x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Simplest fraction (smallest denominator) in the closed interval.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let fl = lo.floor();
    if fl == *lo || fl + Rational::one() <= *hi {
        // an integer lies in the interval; take the one nearest zero
        if lo.is_positive() {
            return lo.ceil();
        }
        if hi.is_negative() {
            return hi.floor();
        }
        return Rational::zero();
    }
    // lo and hi share the integer part a; recurse on the reciprocals
    let a = lo.floor();
    let (l1, h1) = (lo - &a, hi - &a);
    let inner = simplest_between(&(Rational::one() / h1), &(Rational::one() / l1));
    a + Rational::one() / inner
}

/// Sign of `f(n/d)` for integer coefficients and `d > 0`, through the
/// homogenized form `Σ a_i n^i d^(deg-i)`.
fn sign_at(ints: &[Integer], x: &Rational) -> i8 {
    let (n, d) = (x.numer(), x.denom());
    let mut acc = Integer::zero();
    let mut dpow = Integer::one();
    for a in ints.iter().rev() {
        acc = acc * n + a * &dpow;
        dpow *= d;
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

/// All rational roots, by Sturm isolation of the simple real roots and
/// bisection below the spacing that rational roots must keep.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = p.squarefree();
    // clear denominators: a rational root n/d of the integer polynomial has d | lead
    let ints = f.to_primitive_ints();
    let lead = ints.last().expect("nonzero").abs();
    let width = Rational::new(Integer::one(), Integer::from(4) * &lead * &lead);
    let two = Rational::from_integer(Integer::from(2));
    let seq = f.sturm();
    let b = f.root_bound();
    let mut out = Vec::new();
    let mut isolated = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let count = variations(&seq, &lo) - variations(&seq, &hi);
        if count == 0 {
            continue;
        }
        if sign_at(&ints, &hi) == 0 {
            out.push(hi.clone());
            if count == 1 {
                continue;
            }
        }
        if count == 1 {
            isolated.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    // one simple root in (lo, hi), no root at hi: bisect on the sign of f
    for (mut lo, mut hi) in isolated {
        let s_hi = sign_at(&ints, &hi);
        for step in 0usize.. {
            let done = &hi - &lo < width;
            // the simplest fraction is costly; try it now and then to stop early
            if done || step % 64 == 63 {
                let c = simplest_between(&lo, &hi);
                if sign_at(&ints, &c) == 0 {
                    out.push(c);
                    break;
                }
            }
            if done {
                break;
            }
            let mid = (&lo + &hi) / &two;
            match sign_at(&ints, &mid) {
                0 => {
                    out.push(mid);
                    break;
                }
                s if s == s_hi => hi = mid,
                _ => lo = mid,
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat2};

    fn from_roots(roots: &[Rational], extra: &Poly) -> Poly {
        let mut p = extra.clone();
        for r in roots {
            let mut next = vec![Rational::zero(); p.0.len() + 1];
            for (i, c) in p.0.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            p = Poly::new(next);
        }
        p
    }

    #[test]
    fn finds_exactly_the_rational_roots() {
        // (u - 3/7)^2 (u + 5) (u - 1/2) (u^2 - 2)
        let irr = Poly::new(vec![rat(-2), rat(0), rat(1)]);
        let p = from_roots(&[rat2(3, 7), rat2(3, 7), rat(-5), rat2(1, 2)], &irr);
        assert_eq!(p.degree(), Some(6));
        assert_eq!(rational_roots(&p), vec![rat(-5), rat2(3, 7), rat2(1, 2)]);
        assert!(rational_roots(&irr).is_empty());
        assert_eq!(rational_roots(&Poly::new(vec![rat(0), rat(1)])), vec![rat(0)]);
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&rat2(3, 10), &rat2(4, 10)), rat2(1, 3));
        assert_eq!(simplest_between(&rat2(-7, 2), &rat2(-3, 1)), rat(-3));
        assert_eq!(simplest_between(&rat2(-1, 2), &rat2(1, 2)), rat(0));
        assert_eq!(simplest_between(&rat2(22, 7), &rat2(22, 7)), rat2(22, 7));
    }
}
