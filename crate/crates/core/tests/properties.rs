use std::sync::OnceLock;

use geiser_core::forms::{DualLine, Plane};
use geiser_core::harness::{rational_roots, Poly};
use geiser_core::netcubics::{CubicNet, PointConfig};
use geiser_core::picsheaf::{chern, twist_class, PicClass};
use geiser_core::presentations::{build_en, jump_order, line_bundle_sum, splitting_type, Presentation, SplittingType};
use geiser_core::scalar::rat;
use geiser_core::Rational;
use proptest::prelude::*;

fn e2() -> &'static Presentation {
    static E2: OnceLock<Presentation> = OnceLock::new();
    E2.get_or_init(|| build_en(&CubicNet::new(&PointConfig::seeded(1)).unwrap(), 2).unwrap())
}

fn class() -> impl Strategy<Value = PicClass> {
    (-6i64..=6, proptest::array::uniform7(-4i64..=4)).prop_map(|(n, t)| PicClass::new(n, t))
}

fn line() -> impl Strategy<Value = DualLine> {
    proptest::array::uniform3(-9i64..=9)
        .prop_filter("nonzero", |e| e.iter().any(|x| *x != 0))
        .prop_map(|e| DualLine::from_equation_i64(e, Plane::Dual).unwrap())
}

/// `f · (x - r)` on coefficient vectors, lowest degree first.
fn times_linear(f: &[Rational], r: &Rational) -> Vec<Rational> {
    let mut out = vec![rat(0); f.len() + 1];
    for (k, c) in f.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * r;
    }
    out
}

proptest! {
    #[test]
    fn twisting_the_class_twists_the_chern_pair(l in class(), m in -5i64..=5) {
        prop_assert_eq!(chern(&twist_class(&l, m)), chern(&l).twisted(m));
        prop_assert_eq!(twist_class(&twist_class(&l, m), -m), l);
    }

    #[test]
    fn normalization_lands_in_the_two_residues(l in class()) {
        let (m, c) = chern(&l).normalized();
        prop_assert!(c.c1 == 0 || c.c1 == -1);
        prop_assert_eq!(c, chern(&twist_class(&l, m)));
        // discriminant is twist invariant
        let disc = |c: geiser_core::picsheaf::ChernPair| c.c1 * c.c1 - 4 * c.c2;
        prop_assert_eq!(disc(c), disc(chern(&l)));
    }

    #[test]
    fn jump_order_is_monotone_in_the_gap(b in -10i64..10, gap in 0i64..20, more in 1i64..6) {
        let lo = SplittingType { a: b + gap, b };
        let hi = SplittingType { a: b + gap + 2 * more, b };
        prop_assert!(jump_order(&hi) >= jump_order(&lo) + more);
        prop_assert_eq!(jump_order(&lo) > 0, gap >= 2);
    }

    #[test]
    fn planted_rational_roots_are_found(
        roots in proptest::collection::btree_set((-40i64..=40, 1i64..=12), 0..5),
        c in 1i64..=7,
    ) {
        // x^2 + c has no rational root
        let mut f = vec![rat(c), rat(0), rat(1)];
        let mut want: Vec<Rational> = Vec::new();
        for &(p, q) in &roots {
            let r = Rational::new(p.into(), q.into());
            f = times_linear(&f, &r);
            want.push(r);
        }
        want.sort();
        want.dedup();
        let mut got = rational_roots(&Poly::new(f));
        got.sort();
        prop_assert_eq!(got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn direct_sums_split_as_given(a in -6i64..=6, b in -6i64..=6, l in line()) {
        let st = splitting_type(&line_bundle_sum(&[a, b]), &l).unwrap();
        prop_assert_eq!((st.a, st.b), (a.max(b), a.min(b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn splitting_ignores_the_line_parametrisation(
        l in line(),
        m in proptest::array::uniform4(-3i64..=3).prop_filter("invertible", |m| m[0] * m[3] != m[1] * m[2]),
    ) {
        let st = splitting_type(e2(), &l).unwrap();
        let moved = l.rebase([[m[0], m[1]], [m[2], m[3]]]).unwrap();
        prop_assert_eq!(splitting_type(e2(), &moved).unwrap(), st);
        prop_assert_eq!(st.c1(), e2().chern.c1);
    }
}
