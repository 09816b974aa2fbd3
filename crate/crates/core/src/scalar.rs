use std::fmt::Debug;

use num_traits::{Num, Signed};

use crate::Rational;

/// Scalars the dense linear algebra runs over.
///
/// Pivot selection asks [`Field::is_negligible`]; exact types answer with a
/// true zero test, floating point with an absolute tolerance.
pub trait Field: Num + Clone + Debug + std::ops::Neg<Output = Self> {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Field for Rational {}

impl Field for num_rational::Ratio<i128> {}

impl Field for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-10
    }
}

impl Field for f32 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-5
    }
}

/// Rationals that are integers, as an integer.
pub fn to_integer(q: &Rational) -> Option<crate::Integer> {
    if q.denom() == &crate::Integer::from(1) {
        Some(q.numer().clone())
    } else {
        None
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat2(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Lossy conversion, display only.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down until representable
            let nb = q.numer().bits() as i64;
            let db = q.denom().bits() as i64;
            let shift = (nb.max(db) - 1000).max(0) as usize;
            let n = (q.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::MAX);
            let v = if d == 0.0 { f64::INFINITY } else { n / d };
            if q.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}
