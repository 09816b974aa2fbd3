//! Homogeneous forms in three variables ([`TriForm`]) and two variables
//! ([`BinForm`]), projective points and lines.
//!
//! Ternary forms are stored densely in one global monomial order: graded
//! lexicographic with `x0 > x1 > x2`, so degree-`d` monomials run
//! `x0^d, x0^(d-1) x1, x0^(d-1) x2, x0^(d-2) x1^2, ...`. Binary forms are
//! indexed by the exponent of `s`: `coeffs[i]` multiplies `s^i t^(d-i)`.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::primitive_integer_vector;
use crate::{Integer, Rational};

/// Which plane a form lives on: the plane of the seven points (`x`) or the
/// plane of the net (`α`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Source,
    Dual,
}

pub type Exponent = [u32; 3];

pub fn monomial_count(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// Position of a monomial in the global order for its degree.
#[inline]
pub fn monomial_index(e: &Exponent) -> usize {
    let tail = (e[1] + e[2]) as usize;
    tail * (tail + 1) / 2 + e[2] as usize
}

pub fn monomials(d: u32) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

fn pow_rat(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriForm {
    degree: u32,
    plane: Plane,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for TriForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TriForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.plane {
            Plane::Source => "x",
            Plane::Dual => "a",
        };
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*{var}{i}")?,
                    _ => write!(f, "*{var}{i}^{k}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl TriForm {
    pub fn zero(degree: u32, plane: Plane) -> Self {
        TriForm {
            degree,
            plane,
            coeffs: vec![Rational::zero(); monomial_count(degree)],
        }
    }

    pub fn constant(c: Rational, plane: Plane) -> Self {
        TriForm {
            degree: 0,
            plane,
            coeffs: vec![c],
        }
    }

    /// The coordinate function `x_i` (or `α_i`).
    pub fn var(i: usize, plane: Plane) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, Rational::one(), plane)
    }

    pub fn monomial(e: Exponent, c: Rational, plane: Plane) -> Self {
        let mut f = Self::zero(e.iter().sum(), plane);
        f.coeffs[monomial_index(&e)] = c;
        f
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(c: &[Rational; 3], plane: Plane) -> Self {
        TriForm {
            degree: 1,
            plane,
            coeffs: c.to_vec(),
        }
    }

    pub fn from_terms(degree: u32, plane: Plane, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Result<Self> {
        let mut f = Self::zero(degree, plane);
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::Invalid(format!("exponent {e:?} in a degree-{degree} form")));
            }
            f.coeffs[monomial_index(&e)] += c;
        }
        Ok(f)
    }

    /// Coefficient vector in the global monomial order.
    pub fn from_coeffs(degree: u32, plane: Plane, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::Dimension(format!(
                "{} coefficients for a degree-{degree} form",
                coeffs.len()
            )));
        }
        Ok(TriForm { degree, plane, coeffs })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, e: &Exponent) -> &Rational {
        &self.coeffs[monomial_index(e)]
    }

    /// Nonzero terms in the global order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &Rational)> + '_ {
        monomials(self.degree)
            .into_iter()
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn with_plane(mut self, plane: Plane) -> Self {
        self.plane = plane;
        self
    }

    fn check_same(&self, other: &TriForm, what: &str) -> Result<()> {
        if self.plane != other.plane {
            return Err(Error::TagMismatch(format!("{what}: {:?} vs {:?}", self.plane, other.plane)));
        }
        Ok(())
    }

    pub fn add(&self, other: &TriForm) -> Result<TriForm> {
        self.check_same(other, "add")?;
        if self.is_zero() && self.degree != other.degree {
            return Ok(other.clone());
        }
        if other.is_zero() && self.degree != other.degree {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Invalid(format!("adding degrees {} and {}", self.degree, other.degree)));
        }
        Ok(TriForm {
            degree: self.degree,
            plane: self.plane,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &TriForm) -> Result<TriForm> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> TriForm {
        TriForm {
            degree: self.degree,
            plane: self.plane,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn neg(&self) -> TriForm {
        self.scale(&-Rational::one())
    }

    pub fn multiply(&self, other: &TriForm) -> Result<TriForm> {
        self.check_same(other, "multiply")?;
        let mut out = TriForm::zero(self.degree + other.degree, self.plane);
        let ma = monomials(self.degree);
        let mb = monomials(other.degree);
        for (ea, ca) in ma.iter().zip(&self.coeffs) {
            if ca.is_zero() {
                continue;
            }
            for (eb, cb) in mb.iter().zip(&other.coeffs) {
                if cb.is_zero() {
                    continue;
                }
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.coeffs[monomial_index(&e)] += ca * cb;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> TriForm {
        let mut out = TriForm::constant(Rational::one(), self.plane);
        for _ in 0..k {
            out = out.multiply(self).expect("same plane");
        }
        out
    }

    pub fn eval(&self, x: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in self.terms() {
            acc += c * pow_rat(&x[0], e[0]) * pow_rat(&x[1], e[1]) * pow_rat(&x[2], e[2]);
        }
        acc
    }

    pub fn eval_point(&self, p: &ProjPoint) -> Rational {
        self.eval(&p.to_rational())
    }

    pub fn partial(&self, var: usize) -> TriForm {
        if self.degree == 0 {
            return TriForm::zero(0, self.plane);
        }
        let mut out = TriForm::zero(self.degree - 1, self.plane);
        for (e, c) in self.terms() {
            if e[var] == 0 {
                continue;
            }
            let mut d = e;
            d[var] -= 1;
            out.coeffs[monomial_index(&d)] += c * Rational::from_integer(e[var].into());
        }
        out
    }

    pub fn gradient(&self) -> [TriForm; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    /// `f(g0, g1, g2)` for forms `g_i` of a common degree.
    pub fn compose(&self, g: &[TriForm; 3]) -> Result<TriForm> {
        let e = g[0].degree;
        if g.iter().any(|gi| gi.degree != e || gi.plane != g[0].plane) {
            return Err(Error::Invalid("composition needs equal-degree forms on one plane".into()));
        }
        let plane = g[0].plane;
        let powers: Vec<Vec<TriForm>> = g
            .iter()
            .map(|gi| {
                let mut v = vec![TriForm::constant(Rational::one(), plane)];
                for k in 1..=self.degree {
                    let next = v[k as usize - 1].multiply(gi).expect("same plane");
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = TriForm::zero(self.degree * e, plane);
        for (ex, c) in self.terms() {
            let term = powers[0][ex[0] as usize]
                .multiply(&powers[1][ex[1] as usize])?
                .multiply(&powers[2][ex[2] as usize])?;
            out = out.add(&term.scale(c))?;
        }
        Ok(out)
    }

    /// Leading coefficient in the global order (first nonzero).
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient;
    /// returns the scalar `k` with `self = k * primitive`.
    pub fn primitive_part(&self) -> (Rational, TriForm) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let ints = primitive_integer_vector(&self.coeffs);
        let mut ints = ints;
        if ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
            ints.iter_mut().for_each(|v| *v = -&*v);
        }
        let prim = TriForm {
            degree: self.degree,
            plane: self.plane,
            coeffs: ints.into_iter().map(Rational::from_integer).collect(),
        };
        let idx = prim.coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
        let k = &self.coeffs[idx] / &prim.coeffs[idx];
        (k, prim)
    }

    pub fn primitive(&self) -> TriForm {
        self.primitive_part().1
    }

    /// True when the forms agree up to a nonzero rational factor.
    pub fn proportional(&self, other: &TriForm) -> bool {
        self.degree == other.degree
            && self.plane == other.plane
            && !self.is_zero()
            && !other.is_zero()
            && self.primitive() == other.primitive()
    }

    /// `f(s p + t q)` as a binary form.
    pub fn restrict(&self, line: &DualLine) -> Result<BinForm> {
        if line.plane != self.plane {
            return Err(Error::TagMismatch(format!(
                "restricting a {:?} form to a {:?} line",
                self.plane, line.plane
            )));
        }
        let p = line.p.to_rational();
        let q = line.q.to_rational();
        Ok(self.restrict_to(&p, &q))
    }

    /// Restriction along an arbitrary (not necessarily normalised) basis.
    pub fn restrict_to(&self, p: &[Rational; 3], q: &[Rational; 3]) -> BinForm {
        // powers[k][j] = (s p_k + t q_k)^j
        let lin: Vec<BinForm> = (0..3)
            .map(|k| BinForm::from_coeffs(vec![q[k].clone(), p[k].clone()]))
            .collect();
        let powers: Vec<Vec<BinForm>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![BinForm::constant(Rational::one())];
                for j in 1..=self.degree {
                    let next = v[j as usize - 1].multiply(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = BinForm::zero(self.degree);
        for (e, c) in self.terms() {
            let term = powers[0][e[0] as usize]
                .multiply(&powers[1][e[1] as usize])
                .multiply(&powers[2][e[2] as usize]);
            for (i, v) in term.coeffs.iter().enumerate() {
                if !v.is_zero() {
                    out.coeffs[i] += c * v;
                }
            }
        }
        out
    }
}

/// Determinant of the 3x3 matrix of partial derivatives.
pub fn jacobian_det(f0: &TriForm, f1: &TriForm, f2: &TriForm) -> Result<TriForm> {
    if f0.plane != f1.plane || f1.plane != f2.plane {
        return Err(Error::TagMismatch("jacobian of forms on different planes".into()));
    }
    let g = [f0.gradient(), f1.gradient(), f2.gradient()];
    let m = |r: usize, c: usize| &g[r][c];
    det3(&[
        [m(0, 0).clone(), m(0, 1).clone(), m(0, 2).clone()],
        [m(1, 0).clone(), m(1, 1).clone(), m(1, 2).clone()],
        [m(2, 0).clone(), m(2, 1).clone(), m(2, 2).clone()],
    ])
}

/// Determinant of a 3x3 matrix of forms (cofactor expansion along row 0).
pub fn det3(m: &[[TriForm; 3]; 3]) -> Result<TriForm> {
    let c = adjugate3(m)?;
    let t0 = m[0][0].multiply(&c[0][0])?;
    let t1 = m[0][1].multiply(&c[1][0])?;
    let t2 = m[0][2].multiply(&c[2][0])?;
    t0.add(&t1)?.add(&t2)
}

/// Transposed cofactor matrix of a 3x3 matrix of forms.
pub fn adjugate3(m: &[[TriForm; 3]; 3]) -> Result<[[TriForm; 3]; 3]> {
    let cof = |r: usize, c: usize| -> Result<TriForm> {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let a = m[rs[0]][cs[0]].multiply(&m[rs[1]][cs[1]])?;
        let b = m[rs[0]][cs[1]].multiply(&m[rs[1]][cs[0]])?;
        let d = a.sub(&b)?;
        Ok(if (r + c) % 2 == 0 { d } else { d.neg() })
    };
    let mut out: Vec<Vec<TriForm>> = vec![Vec::new(), Vec::new(), Vec::new()];
    for r in 0..3 {
        for c in 0..3 {
            out[r].push(cof(c, r)?);
        }
    }
    let row = |v: &mut Vec<TriForm>| -> [TriForm; 3] {
        let c = v.pop().unwrap();
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        [a, b, c]
    };
    let r2 = row(&mut out[2]);
    let r1 = row(&mut out[1]);
    let r0 = row(&mut out[0]);
    Ok([r0, r1, r2])
}

// ---------------------------------------------------------------------------
// binary forms

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinForm {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i as usize];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*s^{i}*t^{}", d - i)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl BinForm {
    pub fn zero(degree: u32) -> Self {
        BinForm {
            coeffs: vec![Rational::zero(); degree as usize + 1],
        }
    }

    pub fn constant(c: Rational) -> Self {
        BinForm { coeffs: vec![c] }
    }

    /// `coeffs[i]` multiplies `s^i t^(d-i)`; the degree is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * pow_rat(s, i as u32) * pow_rat(t, d - i as u32))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn add(&self, other: &BinForm) -> BinForm {
        assert_eq!(self.degree(), other.degree(), "adding binary forms of different degree");
        BinForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> BinForm {
        BinForm {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn multiply(&self, other: &BinForm) -> BinForm {
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        BinForm { coeffs: out }
    }

    pub fn d_ds(&self) -> BinForm {
        if self.degree() == 0 {
            return BinForm::zero(0);
        }
        BinForm {
            coeffs: (1..self.coeffs.len())
                .map(|i| &self.coeffs[i] * Rational::from_integer((i as i64).into()))
                .collect(),
        }
    }

    pub fn d_dt(&self) -> BinForm {
        let d = self.degree() as usize;
        if d == 0 {
            return BinForm::zero(0);
        }
        BinForm {
            coeffs: (0..d)
                .map(|i| &self.coeffs[i] * Rational::from_integer(((d - i) as i64).into()))
                .collect(),
        }
    }

    /// Leading coefficient: that of the highest power of `s`.
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.iter().rev().find(|c| !c.is_zero())
    }

    pub fn primitive_part(&self) -> (Rational, BinForm) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let mut ints = primitive_integer_vector(&self.coeffs);
        if ints.iter().rev().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
            ints.iter_mut().for_each(|v| *v = -&*v);
        }
        let prim = BinForm {
            coeffs: ints.into_iter().map(Rational::from_integer).collect(),
        };
        let idx = prim.coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero");
        let k = &self.coeffs[idx] / &prim.coeffs[idx];
        (k, prim)
    }

    pub fn primitive(&self) -> BinForm {
        self.primitive_part().1
    }

    /// Power of `t` dividing the form.
    pub fn t_valuation(&self) -> u32 {
        let top = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        self.degree() - top as u32
    }

    /// Power of `s` dividing the form.
    pub fn s_valuation(&self) -> u32 {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0) as u32
    }

    /// Exact quotient `self / divisor`, or `None` if it does not divide.
    pub fn divide(&self, divisor: &BinForm) -> Option<BinForm> {
        if divisor.is_zero() || divisor.degree() > self.degree() {
            return None;
        }
        let (q, r) = Univariate::from_form(self).div_rem(&Univariate::from_form(divisor));
        if !r.is_zero() {
            return None;
        }
        let d = self.degree() - divisor.degree();
        if q.degree().is_some_and(|k| k > d as usize) {
            return None;
        }
        Some(q.homogenize(d))
    }
}

/// Univariate polynomial over Q in ascending order, trimmed.
#[derive(Clone, Debug, PartialEq)]
struct Univariate(Vec<Rational>);

impl Univariate {
    fn from_form(f: &BinForm) -> Self {
        let mut v = f.coeffs.clone();
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Univariate(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn homogenize(&self, d: u32) -> BinForm {
        let mut c = self.0.clone();
        c.resize(d as usize + 1, Rational::zero());
        BinForm { coeffs: c }
    }

    fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                Univariate(self.0.iter().map(|c| c / &l).collect())
            }
        }
    }

    fn div_rem(&self, d: &Univariate) -> (Univariate, Univariate) {
        let dd = d.degree().expect("nonzero divisor");
        let mut r = self.0.clone();
        let lead = d.0[dd].clone();
        let n = self.0.len();
        if n <= dd {
            return (Univariate(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        let mut q = Univariate(q);
        while q.0.last().is_some_and(Zero::is_zero) {
            q.0.pop();
        }
        let mut r = Univariate(r);
        while r.0.last().is_some_and(Zero::is_zero) {
            r.0.pop();
        }
        (q, r)
    }

    fn gcd(a: &Univariate, b: &Univariate) -> Univariate {
        let (mut a, mut b) = (a.monic(), b.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

/// Greatest common divisor, primitive with positive leading coefficient.
pub fn gcd_binary(u: &BinForm, v: &BinForm) -> Result<BinForm> {
    if u.is_zero() && v.is_zero() {
        return Err(Error::Invalid("gcd of two zero forms".into()));
    }
    if u.is_zero() {
        return Ok(v.primitive());
    }
    if v.is_zero() {
        return Ok(u.primitive());
    }
    let tv = u.t_valuation().min(v.t_valuation());
    let g = Univariate::gcd(&Univariate::from_form(u), &Univariate::from_form(v));
    let deg = g.degree().unwrap_or(0) as u32 + tv;
    Ok(g.homogenize(deg).primitive())
}

/// `q = λ b²` with `b` primitive, positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCertificate {
    pub lambda: Rational,
    pub root: BinForm,
}

impl SquareCertificate {
    pub fn verify(&self, q: &BinForm) -> bool {
        self.root.multiply(&self.root).scale(&self.lambda) == *q && !self.lambda.is_zero()
    }
}

fn certify_candidate(q: &BinForm, b: &BinForm) -> Option<SquareCertificate> {
    let b = b.primitive();
    let sq = b.multiply(&b);
    if sq.degree() != q.degree() {
        return None;
    }
    let i = sq.coeffs.iter().rposition(|c| !c.is_zero())?;
    let lambda = &q.coeffs[i] / &sq.coeffs[i];
    let cert = SquareCertificate { lambda, root: b };
    cert.verify(q).then_some(cert)
}

/// Decide whether an even-degree binary form is a rational multiple of a
/// square, returning the certificate when it is.
///
/// First candidate: the gcd of the two partial derivatives, which is the
/// square root when that root is squarefree. Otherwise the root is built
/// by matching coefficients from the top. A rational root exists whenever
/// `q` is the square of any complex form, so `None` is a genuine negative.
pub fn square_certificate(q: &BinForm) -> Result<Option<SquareCertificate>> {
    if q.is_zero() {
        return Err(Error::Invalid("square certificate of the zero form".into()));
    }
    let d = q.degree();
    if d % 2 != 0 {
        return Err(Error::Invalid(format!("square certificate of odd degree {d}")));
    }
    if d == 0 {
        return Ok(Some(SquareCertificate {
            lambda: q.coeffs[0].clone(),
            root: BinForm::constant(Rational::one()),
        }));
    }
    let ds = q.d_ds();
    let dt = q.d_dt();
    if !(ds.is_zero() && dt.is_zero()) {
        let g = gcd_binary(&ds, &dt)?;
        if g.degree() == d / 2 {
            if let Some(c) = certify_candidate(q, &g) {
                return Ok(Some(c));
            }
        }
    }
    // coefficient matching
    let tv = q.t_valuation();
    let sv = q.s_valuation();
    if tv % 2 != 0 || sv % 2 != 0 {
        return Ok(None);
    }
    let p = Univariate::from_form(q);
    let n = p.degree().expect("nonzero");
    let lead = p.0[n].clone();
    let e: Vec<Rational> = p.0.iter().map(|c| c / &lead).collect();
    let k = n / 2;
    // r = s^k + r_{k-1} s^{k-1} + ... + r_0
    let mut r = vec![Rational::zero(); k + 1];
    r[k] = Rational::one();
    let two = Rational::from_integer(2.into());
    for j in 1..=k {
        let mut acc = e[n - j].clone();
        for i in 1..j {
            acc -= &r[k - i] * &r[k - j + i];
        }
        r[k - j] = acc / &two;
    }
    let root = Univariate(r).homogenize(d / 2);
    Ok(certify_candidate(q, &root))
}

// ---------------------------------------------------------------------------
// points and lines

/// Point of the projective plane as a primitive integer vector whose first
/// nonzero entry is positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [Integer; 3],
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl ProjPoint {
    pub fn new(c: &[Rational; 3]) -> Result<Self> {
        if c.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("the zero vector is not a projective point".into()));
        }
        let mut v = primitive_integer_vector(c);
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v.iter_mut().for_each(|x| *x = -&*x);
        }
        let [a, b, c] = <[Integer; 3]>::try_from(v).expect("three coordinates");
        Ok(ProjPoint { coords: [a, b, c] })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(&[
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
            Rational::from_integer(c.into()),
        ])
    }

    pub fn from_integers(c: &[Integer; 3]) -> Result<Self> {
        Self::new(&[
            Rational::from_integer(c[0].clone()),
            Rational::from_integer(c[1].clone()),
            Rational::from_integer(c[2].clone()),
        ])
    }

    pub fn coords(&self) -> &[Integer; 3] {
        &self.coords
    }

    pub fn to_rational(&self) -> [Rational; 3] {
        [
            Rational::from_integer(self.coords[0].clone()),
            Rational::from_integer(self.coords[1].clone()),
            Rational::from_integer(self.coords[2].clone()),
        ]
    }

    pub fn cross(&self, other: &ProjPoint) -> [Integer; 3] {
        cross(&self.coords, &other.coords)
    }

    /// Point where two lines (given by equation vectors) meet.
    pub fn meet(a: &[Integer; 3], b: &[Integer; 3]) -> Result<Self> {
        Self::from_integers(&cross(a, b))
    }

    pub fn dot(&self, v: &[Integer; 3]) -> Integer {
        &self.coords[0] * &v[0] + &self.coords[1] * &v[1] + &self.coords[2] * &v[2]
    }
}

pub fn cross(a: &[Integer; 3], b: &[Integer; 3]) -> [Integer; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn det3_int(a: &[Integer; 3], b: &[Integer; 3], c: &[Integer; 3]) -> Integer {
    let x = cross(b, c);
    &a[0] * &x[0] + &a[1] * &x[1] + &a[2] * &x[2]
}

/// Line spanned by two distinct points, parameterised as `s p + t q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DualLine {
    pub p: ProjPoint,
    pub q: ProjPoint,
    pub plane: Plane,
}

impl fmt::Debug for DualLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line[{:?}, {:?}]", self.p, self.q)
    }
}

impl DualLine {
    pub fn new(p: ProjPoint, q: ProjPoint, plane: Plane) -> Result<Self> {
        if p == q {
            return Err(Error::Invalid(format!("line through a single point {p}")));
        }
        Ok(DualLine { p, q, plane })
    }

    pub fn through(p: ProjPoint, q: ProjPoint) -> Result<Self> {
        Self::new(p, q, Plane::Dual)
    }

    /// Line `a·α = 0` with a deterministic basis.
    pub fn from_equation(eq: &[Integer; 3], plane: Plane) -> Result<Self> {
        if eq.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("zero line equation".into()));
        }
        let m = crate::QMatrix::from_rows(&[eq.iter().map(|v| Rational::from_integer(v.clone())).collect()])?;
        let k = crate::exact::kernel_q(&m);
        let p = ProjPoint::new(&[k[0][0].clone(), k[0][1].clone(), k[0][2].clone()])?;
        let q = ProjPoint::new(&[k[1][0].clone(), k[1][1].clone(), k[1][2].clone()])?;
        Self::new(p, q, plane)
    }

    pub fn from_equation_i64(eq: [i64; 3], plane: Plane) -> Result<Self> {
        Self::from_equation(&[eq[0].into(), eq[1].into(), eq[2].into()], plane)
    }

    /// Normalised equation vector; equal lines have equal equations.
    pub fn equation(&self) -> [Integer; 3] {
        ProjPoint::from_integers(&self.p.cross(&self.q))
            .expect("distinct points span a line")
            .coords
            .clone()
    }

    pub fn same_line(&self, other: &DualLine) -> bool {
        self.equation() == other.equation()
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        x.dot(&self.equation()).is_zero()
    }

    pub fn point_at(&self, s: &Rational, t: &Rational) -> Result<ProjPoint> {
        let p = self.p.to_rational();
        let q = self.q.to_rational();
        ProjPoint::new(&[s * &p[0] + t * &q[0], s * &p[1] + t * &q[1], s * &p[2] + t * &q[2]])
    }

    /// Same line, basis changed by the invertible matrix `[[a, b], [c, d]]`:
    /// new `p = a p + b q`, new `q = c p + d q`.
    pub fn rebase(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0 {
            return Err(Error::Invalid("singular change of basis".into()));
        }
        let r = |x: i64| Rational::from_integer(x.into());
        let p = self.point_at(&r(m[0][0]), &r(m[0][1]))?;
        let q = self.point_at(&r(m[1][0]), &r(m[1][1]))?;
        Self::new(p, q, self.plane)
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FormJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

fn term_json(exp: Vec<u32>, c: &Rational) -> TermJson {
    TermJson {
        exp,
        num: c.numer().to_string(),
        den: c.denom().to_string(),
    }
}

fn parse_rational(t: &TermJson) -> Result<Rational> {
    let n: Integer = t.num.parse().map_err(|_| Error::Json(format!("bad numerator {}", t.num)))?;
    let d: Integer = t.den.parse().map_err(|_| Error::Json(format!("bad denominator {}", t.den)))?;
    if d.is_zero() {
        return Err(Error::Json("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

impl TriForm {
    pub fn to_json(&self) -> FormJson {
        FormJson {
            degree: self.degree,
            terms: self.terms().map(|(e, c)| term_json(e.to_vec(), c)).collect(),
        }
    }

    pub fn from_json(j: &FormJson, plane: Plane) -> Result<Self> {
        let mut f = TriForm::zero(j.degree, plane);
        for t in &j.terms {
            let e: Exponent = t
                .exp
                .as_slice()
                .try_into()
                .map_err(|_| Error::Json("ternary exponent needs three entries".into()))?;
            if e.iter().sum::<u32>() != j.degree {
                return Err(Error::Json(format!("exponent {e:?} in degree {}", j.degree)));
            }
            f.coeffs[monomial_index(&e)] += parse_rational(t)?;
        }
        Ok(f)
    }
}

impl BinForm {
    /// Terms as `[s-exponent, t-exponent]`, highest power of `s` first.
    pub fn to_json(&self) -> FormJson {
        let d = self.degree();
        FormJson {
            degree: d,
            terms: (0..=d)
                .rev()
                .filter(|&i| !self.coeffs[i as usize].is_zero())
                .map(|i| term_json(vec![i, d - i], &self.coeffs[i as usize]))
                .collect(),
        }
    }

    pub fn from_json(j: &FormJson) -> Result<Self> {
        let mut f = BinForm::zero(j.degree);
        for t in &j.terms {
            if t.exp.len() != 2 || t.exp[0] + t.exp[1] != j.degree {
                return Err(Error::Json(format!("bad binary exponent {:?}", t.exp)));
            }
            f.coeffs[t.exp[0] as usize] += parse_rational(t)?;
        }
        Ok(f)
    }
}

/// Integer content helper used by callers normalising integer vectors.
pub fn gcd_all(v: &[Integer]) -> Integer {
    v.iter().fold(Integer::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn x(i: usize) -> TriForm {
        TriForm::var(i, Plane::Source)
    }

    fn seeded_form(seed: u64, d: u32) -> TriForm {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let coeffs = (0..monomial_count(d))
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                rat(((state >> 33) % 11) as i64 - 5)
            })
            .collect();
        TriForm::from_coeffs(d, Plane::Source, coeffs).unwrap()
    }

    #[test]
    fn monomial_order_and_index_agree() {
        for d in 0..8 {
            for (i, e) in monomials(d).iter().enumerate() {
                assert_eq!(monomial_index(e), i);
            }
        }
        assert_eq!(monomials(2), vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]);
    }

    #[test]
    fn partial_and_eval() {
        let f = x(0).pow(3);
        assert_eq!(f.partial(0), x(0).pow(2).scale(&rat(3)));
        let g = x(0).multiply(&x(1)).unwrap().multiply(&x(2)).unwrap();
        assert_eq!(g.eval(&[rat(1), rat(1), rat(1)]), rat(1));
    }

    #[test]
    fn euler_identity_on_seeded_cubic() {
        let f = seeded_form(3, 3);
        let mut acc = TriForm::zero(3, Plane::Source);
        for i in 0..3 {
            acc = acc.add(&x(i).multiply(&f.partial(i)).unwrap()).unwrap();
        }
        assert_eq!(acc, f.scale(&rat(3)));
    }

    #[test]
    fn tag_mismatch_is_rejected() {
        let a = TriForm::var(0, Plane::Dual);
        assert!(matches!(x(0).multiply(&a), Err(Error::TagMismatch(_))));
        let line = DualLine::from_equation_i64([0, 0, 1], Plane::Dual).unwrap();
        assert!(x(0).restrict(&line).is_err());
    }

    #[test]
    fn restriction_basics() {
        let line = DualLine::new(
            ProjPoint::from_ints(1, 0, 0).unwrap(),
            ProjPoint::from_ints(0, 1, 0).unwrap(),
            Plane::Source,
        )
        .unwrap();
        assert_eq!(x(0).restrict(&line).unwrap(), BinForm::from_ints(&[0, 1]));
        let f = seeded_form(7, 4);
        let line = DualLine::new(
            ProjPoint::from_ints(1, 2, -1).unwrap(),
            ProjPoint::from_ints(3, 0, 5).unwrap(),
            Plane::Source,
        )
        .unwrap();
        let r = f.restrict(&line).unwrap();
        assert_eq!(r.degree(), 4);
        assert_eq!(r.eval(&rat(1), &rat(0)), f.eval_point(&line.p));
        assert_eq!(r.eval(&rat(0), &rat(1)), f.eval_point(&line.q));
    }

    #[test]
    fn jacobian_cases() {
        let j = jacobian_det(&x(0), &x(1), &x(2)).unwrap();
        assert_eq!(j, TriForm::constant(rat(1), Plane::Source));
        let f0 = seeded_form(1, 3);
        let f1 = seeded_form(2, 3);
        assert!(jacobian_det(&f0, &f1, &f0).unwrap().is_zero());
        let f2 = seeded_form(5, 3);
        assert_eq!(jacobian_det(&f0, &f1, &f2).unwrap().degree(), 6);
    }

    #[test]
    fn adjugate3_identity() {
        let m: [[TriForm; 3]; 3] = std::array::from_fn(|r| std::array::from_fn(|c| seeded_form((r * 3 + c) as u64, 1)));
        let adj = adjugate3(&m).unwrap();
        let det = det3(&m).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = TriForm::zero(3, Plane::Source);
                for k in 0..3 {
                    acc = acc.add(&m[r][k].multiply(&adj[k][c]).unwrap()).unwrap();
                }
                if r == c {
                    assert_eq!(acc, det);
                } else {
                    assert!(acc.is_zero());
                }
            }
        }
    }

    #[test]
    fn gcd_examples() {
        // s^2 t and s t^2
        let u = BinForm::from_ints(&[0, 0, 1, 0]);
        let v = BinForm::from_ints(&[0, 1, 0, 0]);
        assert_eq!(gcd_binary(&u, &v).unwrap(), BinForm::from_ints(&[0, 1, 0]));
        let s = BinForm::from_ints(&[0, 1]);
        let t = BinForm::from_ints(&[1, 0]);
        assert_eq!(gcd_binary(&s, &t).unwrap(), BinForm::from_ints(&[1]));
        assert!(gcd_binary(&BinForm::zero(2), &BinForm::zero(1)).is_err());
    }

    #[test]
    fn gcd_of_square_with_derivatives_has_root_degree() {
        for seed in 0..10u64 {
            let b = BinForm::from_ints(&[(seed as i64 % 5) - 2, 3, -(seed as i64) - 1]);
            let q = b.multiply(&b);
            let g = gcd_binary(&q, &gcd_binary(&q.d_ds(), &q.d_dt()).unwrap()).unwrap();
            assert!(g.degree() >= b.degree(), "seed {seed}");
        }
    }

    #[test]
    fn square_certificate_examples() {
        // (st)^2 = s^2 t^2
        let q = BinForm::from_ints(&[0, 0, 1, 0, 0]);
        let c = square_certificate(&q).unwrap().unwrap();
        assert_eq!(c.lambda, rat(1));
        assert_eq!(c.root, BinForm::from_ints(&[0, 1, 0]));
        // s^3 t
        let q = BinForm::from_ints(&[0, 0, 0, 1, 0]);
        assert!(square_certificate(&q).unwrap().is_none());
        // 4 (s^2 + t^2)^2
        let q = BinForm::from_ints(&[4, 0, 8, 0, 4]);
        let c = square_certificate(&q).unwrap().unwrap();
        assert_eq!(c.lambda, rat(4));
        assert_eq!(c.root, BinForm::from_ints(&[1, 0, 1]));
        // s^4: repeated root, found by coefficient matching
        let q = BinForm::from_ints(&[0, 0, 0, 0, 3]);
        let c = square_certificate(&q).unwrap().unwrap();
        assert_eq!(c.root, BinForm::from_ints(&[0, 0, 1]));
        assert!(square_certificate(&BinForm::zero(4)).is_err());
        // irreducible contact quadratic: 2 (s^2 - 2 t^2)^2
        let b = BinForm::from_ints(&[-2, 0, 1]);
        let q = b.multiply(&b).scale(&rat(-7));
        let c = square_certificate(&q).unwrap().unwrap();
        assert!(c.verify(&q));
    }

    #[test]
    fn division() {
        let a = BinForm::from_ints(&[1, 2]);
        let b = BinForm::from_ints(&[0, 3, -1]);
        let p = a.multiply(&b);
        assert_eq!(p.divide(&a).unwrap(), b);
        assert!(p.divide(&BinForm::from_ints(&[1, 1])).is_none());
        // t does not divide s^2
        assert!(BinForm::from_ints(&[0, 0, 1]).divide(&BinForm::from_ints(&[1, 0])).is_none());
    }

    #[test]
    fn points_and_lines() {
        let p = ProjPoint::new(&[rat(-2), rat(4), rat(0)]).unwrap();
        assert_eq!(p.coords(), &[Integer::from(1), Integer::from(-2), Integer::from(0)]);
        assert!(ProjPoint::from_ints(0, 0, 0).is_err());
        let l = DualLine::from_equation_i64([1, 2, 3], Plane::Dual).unwrap();
        assert!(l.contains(&l.p) && l.contains(&l.q));
        let r = l.rebase([[2, 1], [1, -1]]).unwrap();
        assert!(r.same_line(&l));
    }

    #[test]
    fn json_round_trip() {
        let f = seeded_form(9, 3).scale(&crate::scalar::rat2(1, 3)).with_plane(Plane::Dual);
        let j = serde_json::to_string(&f.to_json()).unwrap();
        let back: FormJson = serde_json::from_str(&j).unwrap();
        assert_eq!(TriForm::from_json(&back, Plane::Dual).unwrap(), f);
        let b = BinForm::from_ints(&[1, -2, 0, 5]);
        assert_eq!(BinForm::from_json(&b.to_json()).unwrap(), b);
    }

    fn small_form(d: u32) -> impl Strategy<Value = TriForm> {
        proptest::collection::vec(-4i64..=4, monomial_count(d))
            .prop_map(move |v| TriForm::from_coeffs(d, Plane::Source, v.into_iter().map(rat).collect()).unwrap())
    }

    fn small_line() -> impl Strategy<Value = DualLine> {
        (proptest::array::uniform3(-5i64..=5), proptest::array::uniform3(-5i64..=5))
            .prop_filter_map("distinct points", |(a, b)| {
                let p = ProjPoint::from_ints(a[0], a[1], a[2]).ok()?;
                let q = ProjPoint::from_ints(b[0], b[1], b[2]).ok()?;
                DualLine::new(p, q, Plane::Source).ok()
            })
    }

    proptest! {
        #[test]
        fn restriction_commutes_with_products(f in small_form(2), g in small_form(3), l in small_line()) {
            let lhs = f.multiply(&g).unwrap().restrict(&l).unwrap();
            let rhs = f.restrict(&l).unwrap().multiply(&g.restrict(&l).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn certificates_re_expand(b in proptest::collection::vec(-6i64..=6, 3), k in 1i64..9, neg in any::<bool>()) {
            let b = BinForm::from_ints(&b);
            prop_assume!(!b.is_zero());
            let lam = rat(if neg { -k } else { k });
            let q = b.multiply(&b).scale(&lam);
            let cert = square_certificate(&q).unwrap();
            prop_assert!(cert.as_ref().is_some_and(|c| c.verify(&q)));
        }

        #[test]
        fn certificate_presence_is_basis_invariant(b in proptest::collection::vec(-4i64..=4, 3), c in proptest::collection::vec(-4i64..=4, 5), square in any::<bool>(), m in proptest::array::uniform4(-3i64..=3)) {
            prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
            let q = if square { BinForm::from_ints(&b).multiply(&BinForm::from_ints(&b)) } else { BinForm::from_ints(&c) };
            prop_assume!(!q.is_zero());
            // substitute s -> a s + b t, t -> c s + d t
            let sub = |f: &BinForm| -> BinForm {
                let ls = BinForm::from_ints(&[m[1], m[0]]);
                let lt = BinForm::from_ints(&[m[3], m[2]]);
                let d = f.degree();
                let mut out = BinForm::zero(d);
                for (i, ci) in f.coeffs().iter().enumerate() {
                    let mut term = BinForm::constant(ci.clone());
                    for _ in 0..i { term = term.multiply(&ls); }
                    for _ in 0..(d as usize - i) { term = term.multiply(&lt); }
                    out = out.add(&term);
                }
                out
            };
            let q2 = sub(&q);
            prop_assert_eq!(square_certificate(&q).unwrap().is_some(), square_certificate(&q2).unwrap().is_some());
        }
    }
}
