//! Seven-point configurations, the net of cubics through them, its syzygies
//! and the Geiser map with its involution.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{kernel_q, rank_q};
use crate::forms::{det3_int, monomials, DualLine, Plane, ProjPoint, TriForm};
use num_integer::Integer as _;

use crate::{Integer, QMatrix, Rational};

/// Seven pairwise distinct points of the source plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    points: Vec<ProjPoint>,
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    points: Vec<[i64; 3]>,
}

impl PointConfig {
    pub fn new(points: Vec<ProjPoint>) -> Result<Self> {
        if points.len() != 7 {
            return Err(Error::Invalid(format!("expected 7 points, got {}", points.len())));
        }
        for i in 0..7 {
            for j in i + 1..7 {
                if points[i] == points[j] {
                    return Err(Error::Degenerate(format!("points {i} and {j} coincide")));
                }
            }
        }
        Ok(PointConfig { points })
    }

    pub fn from_ints(pts: &[[i64; 3]]) -> Result<Self> {
        let points = pts
            .iter()
            .map(|p| ProjPoint::from_ints(p[0], p[1], p[2]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i]
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ConfigJson = serde_json::from_str(s)?;
        Self::from_ints(&j.points)
    }

    pub fn to_json(&self) -> String {
        use num_traits::ToPrimitive;
        let points = self
            .points
            .iter()
            .map(|p| {
                let c = p.coords();
                [c[0].to_i64().unwrap_or(0), c[1].to_i64().unwrap_or(0), c[2].to_i64().unwrap_or(0)]
            })
            .collect();
        serde_json::to_string(&ConfigJson { points }).expect("serialisable")
    }

    /// Same points in a different order.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(perm.iter().map(|&i| self.points[i].clone()).collect())
    }

    /// Standard frame plus three points drawn from the seeded generator with
    /// coordinates in `[-5, 5]`, redrawn until the configuration is in
    /// general position.
    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];
        loop {
            let mut pts: Vec<[i64; 3]> = frame.to_vec();
            for _ in 0..3 {
                pts.push([rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
            }
            if let Ok(cfg) = Self::from_ints(&pts) {
                if validate_general_position(&cfg).is_ok() {
                    return cfg;
                }
            }
        }
    }
}

/// Matrix of the degree-`d` monomials evaluated at the points (one row per point).
pub fn evaluation_matrix(points: &[ProjPoint], d: u32) -> QMatrix {
    let mons = monomials(d);
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            mons.iter()
                .map(|e| TriForm::monomial(*e, Rational::one(), Plane::Source).eval_point(p))
                .collect()
        })
        .collect();
    QMatrix::from_rows(&rows).expect("rectangular")
}

/// Evidence gathered while accepting a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPosition {
    pub triples_checked: usize,
    pub sextuples_checked: usize,
    pub cubic_rank: usize,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// No three points collinear, no six on a conic, and the points impose
/// independent conditions on cubics.
pub fn validate_general_position(cfg: &PointConfig) -> Result<GeneralPosition> {
    let pts = cfg.points();
    let triples = subsets(7, 3);
    for t in &triples {
        let d = det3_int(pts[t[0]].coords(), pts[t[1]].coords(), pts[t[2]].coords());
        if d.is_zero() {
            return Err(Error::Degenerate(format!("points {:?} are collinear", t)));
        }
    }
    let sextuples = subsets(7, 6);
    for s in &sextuples {
        let sub: Vec<ProjPoint> = s.iter().map(|&i| pts[i].clone()).collect();
        if rank_q(&evaluation_matrix(&sub, 2)) < 6 {
            return Err(Error::Degenerate(format!("points {:?} lie on a conic", s)));
        }
    }
    let cubic_rank = rank_q(&evaluation_matrix(pts, 3));
    if cubic_rank != 7 {
        return Err(Error::Degenerate(format!("cubic evaluation matrix has rank {cubic_rank}")));
    }
    Ok(GeneralPosition {
        triples_checked: triples.len(),
        sextuples_checked: sextuples.len(),
        cubic_rank,
    })
}

/// Basis of the cubics through the seven points, from the kernel normal
/// form of the evaluation matrix, each scaled to a primitive integer form.
pub fn cubic_net(cfg: &PointConfig) -> Result<[TriForm; 3]> {
    let k = kernel_q(&evaluation_matrix(cfg.points(), 3));
    if k.len() != 3 {
        return Err(Error::Degenerate(format!("net of cubics has dimension {}", k.len())));
    }
    let mut it = k
        .into_iter()
        .map(|v| TriForm::from_coeffs(3, Plane::Source, v).map(|f| f.primitive()));
    Ok([it.next().unwrap()?, it.next().unwrap()?, it.next().unwrap()?])
}

/// Solutions `(F0, F1, F2)` of degree `e` to `Σ Δ_i F_i = 0`, as coefficient
/// vectors of length `3 * #monomials(e)` (block `i` holds `F_i`).
fn syzygy_space(delta: &[TriForm; 3], e: u32) -> Vec<Vec<Rational>> {
    let mons = monomials(e);
    let target = monomials(3 + e).len();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(3 * mons.len());
    for d in delta {
        for m in &mons {
            let prod = d
                .multiply(&TriForm::monomial(*m, Rational::one(), Plane::Source))
                .expect("same plane");
            cols.push(prod.coeffs().to_vec());
        }
    }
    let m = QMatrix::from_columns(target, &cols).expect("columns agree");
    kernel_q(&m)
}

fn split_triple(v: &[Rational], e: u32) -> [TriForm; 3] {
    let n = monomials(e).len();
    std::array::from_fn(|i| TriForm::from_coeffs(e, Plane::Source, v[i * n..(i + 1) * n].to_vec()).expect("block size"))
}

fn flatten(f: &[TriForm; 3]) -> Vec<Rational> {
    f.iter().flat_map(|g| g.coeffs().iter().cloned()).collect()
}

fn primitive_triple(v: &[Rational], e: u32) -> [TriForm; 3] {
    let mut ints = crate::exact::primitive_integer_vector(v);
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x < &crate::Integer::zero()) {
        ints.iter_mut().for_each(|x| *x = -&*x);
    }
    let q: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
    split_triple(&q, e)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// The net with its two syzygy columns.
#[derive(Clone, Debug)]
pub struct CubicNet {
    pub config: PointConfig,
    pub delta: [TriForm; 3],
    pub x: [TriForm; 3],
    pub c: [TriForm; 3],
    /// A quadratic syzygy of small height, congruent to `c` modulo the
    /// `l X`; the fiber conics differ by multiples of the fiber line, so
    /// anything built from the pair `(X, C)` up to that ambiguity may use it.
    pub c_short: [TriForm; 3],
    pub linear_syzygy_dim: usize,
    pub quadratic_syzygy_dim: usize,
}

/// Linear and quadratic syzygies `(X, C)` of the net.
pub fn syzygies(delta: &[TriForm; 3]) -> Result<([TriForm; 3], [TriForm; 3], usize, usize)> {
    let lin = syzygy_space(delta, 1);
    if lin.len() != 1 {
        return Err(Error::Degenerate(format!("linear syzygy space has dimension {}", lin.len())));
    }
    let x = primitive_triple(&lin[0], 1);
    let quad = syzygy_space(delta, 2);
    if quad.len() != 4 {
        return Err(Error::Degenerate(format!("quadratic syzygy space has dimension {}", quad.len())));
    }
    // the multiples l*X, l running over x0, x1, x2
    let multiples: Vec<Vec<Rational>> = (0..3)
        .map(|k| {
            let l = TriForm::var(k, Plane::Source);
            let t: [TriForm; 3] = std::array::from_fn(|i| l.multiply(&x[i]).expect("same plane"));
            flatten(&t)
        })
        .collect();
    // coefficients c of v = Σ c_a quad_a with <v, multiple_k> = 0
    let gram: Vec<Vec<Rational>> = multiples
        .iter()
        .map(|m| quad.iter().map(|q| dot(q, m)).collect())
        .collect();
    let sol = kernel_q(&QMatrix::from_rows(&gram)?);
    if sol.len() != 1 {
        return Err(Error::Inconsistent(format!("orthogonal complement has dimension {}", sol.len())));
    }
    let mut v = vec![Rational::zero(); quad[0].len()];
    for (c, q) in sol[0].iter().zip(&quad) {
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi += c * qi;
        }
    }
    let c = primitive_triple(&v, 2);
    Ok((x, c, lin.len(), quad.len()))
}

fn height(v: &[Integer]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

fn norm2(v: &[Integer]) -> Integer {
    v.iter().map(|x| x * x).sum()
}

/// Quadratic syzygy of small coefficient height outside the span of the
/// `l X`: the shortest kernel basis vector, then greedy integer size
/// reduction against `x_k X`.
fn short_quadratic_syzygy(delta: &[TriForm; 3], x: &[TriForm; 3]) -> Result<[TriForm; 3]> {
    let multiples: Vec<Vec<Integer>> = (0..3)
        .map(|k| {
            let l = TriForm::var(k, Plane::Source);
            let t: [TriForm; 3] = std::array::from_fn(|i| l.multiply(&x[i]).expect("same plane"));
            crate::exact::primitive_integer_vector(&flatten(&t))
        })
        .collect();
    let independent = |v: &[Integer]| {
        let mut rows = multiples.clone();
        rows.push(v.to_vec());
        crate::exact::rank_integer_rows(rows, v.len()) == 4
    };
    let mut v = syzygy_space(delta, 2)
        .iter()
        .map(|q| crate::exact::primitive_integer_vector(q))
        .filter(|q| independent(q))
        .min_by_key(|q| (height(q), norm2(q)))
        .ok_or_else(|| Error::Inconsistent("no quadratic syzygy outside the multiples of X".into()))?;
    loop {
        let mut improved = false;
        for w in &multiples {
            let ww = norm2(w);
            let vw: Integer = v.iter().zip(w).map(|(a, b)| a * b).sum();
            // nearest integer to <v, w> / <w, w>
            let r = (Integer::from(2) * &vw + &ww).div_floor(&(Integer::from(2) * &ww));
            if r.is_zero() {
                continue;
            }
            let cand: Vec<Integer> = v.iter().zip(w).map(|(a, b)| a - &r * b).collect();
            if norm2(&cand) < norm2(&v) {
                v = cand;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let q: Vec<Rational> = v.into_iter().map(Rational::from_integer).collect();
    Ok(primitive_triple(&q, 2))
}

fn sum_products(a: &[TriForm; 3], b: &[TriForm; 3]) -> TriForm {
    let mut acc = a[0].multiply(&b[0]).expect("same plane");
    for i in 1..3 {
        acc = acc.add(&a[i].multiply(&b[i]).expect("same plane")).expect("same degree");
    }
    acc
}

impl CubicNet {
    pub fn new(config: &PointConfig) -> Result<Self> {
        validate_general_position(config)?;
        let delta = cubic_net(config)?;
        let (x, c, ld, qd) = syzygies(&delta)?;
        let c_short = short_quadratic_syzygy(&delta, &x)?;
        let net = CubicNet {
            config: config.clone(),
            delta,
            x,
            c,
            c_short,
            linear_syzygy_dim: ld,
            quadratic_syzygy_dim: qd,
        };
        net.check_syzygies()?;
        Ok(net)
    }

    fn check_syzygies(&self) -> Result<()> {
        if !sum_products(&self.delta, &self.x).is_zero() {
            return Err(Error::Inconsistent("Σ Δ_i X_i does not vanish".into()));
        }
        if !sum_products(&self.delta, &self.c).is_zero() || !sum_products(&self.delta, &self.c_short).is_zero() {
            return Err(Error::Inconsistent("Σ Δ_i C_i does not vanish".into()));
        }
        Ok(())
    }

    /// The same net with another quadratic syzygy representative, e.g.
    /// `C + l X`. Rejected unless it is a syzygy independent of the `l X`.
    pub fn with_quadratic_syzygy(&self, c: [TriForm; 3]) -> Result<Self> {
        let mut net = self.clone();
        net.c = c;
        net.check_syzygies()?;
        let mut rows: Vec<Vec<Rational>> = (0..3)
            .map(|k| {
                let l = TriForm::var(k, Plane::Source);
                flatten(&std::array::from_fn(|i| l.multiply(&self.x[i]).expect("same plane")))
            })
            .collect();
        rows.push(flatten(&net.c));
        if rank_q(&QMatrix::from_rows(&rows)?) != 4 {
            return Err(Error::Invalid("quadratic syzygy is a multiple of the linear one".into()));
        }
        Ok(net)
    }

    /// `C + l X` for a linear form `l`.
    pub fn shifted_c(&self, l: &TriForm) -> Result<[TriForm; 3]> {
        let mut out = self.c.clone();
        for i in 0..3 {
            out[i] = out[i].add(&l.multiply(&self.x[i])?)?;
        }
        Ok(out)
    }

    /// Coefficient matrix of the linear syzygy: `X_i = Σ_j M[i][j] x_j`.
    pub fn x_matrix(&self) -> QMatrix {
        let rows: Vec<Vec<Rational>> = self.x.iter().map(|f| f.coeffs().to_vec()).collect();
        QMatrix::from_rows(&rows).expect("3x3")
    }

    /// `Σ α_i X_i` as a linear form on the source plane.
    pub fn x_at(&self, alpha: &[Rational; 3]) -> TriForm {
        combine(&self.x, alpha, 1)
    }

    /// `Σ α_i C_i` as a conic on the source plane.
    pub fn c_at(&self, alpha: &[Rational; 3]) -> TriForm {
        combine(&self.c, alpha, 2)
    }

    pub fn is_base_point(&self, x: &ProjPoint) -> bool {
        self.delta.iter().all(|d| d.eval_point(x).is_zero())
    }
}

fn combine(f: &[TriForm; 3], alpha: &[Rational; 3], degree: u32) -> TriForm {
    let mut acc = TriForm::zero(degree, Plane::Source);
    for (fi, a) in f.iter().zip(alpha) {
        acc = acc.add(&fi.scale(a)).expect("same degree");
    }
    acc
}

/// `x ↦ (Δ0(x) : Δ1(x) : Δ2(x))`.
pub fn geiser(net: &CubicNet, x: &ProjPoint) -> Result<ProjPoint> {
    let v = net.delta.each_ref().map(|d| d.eval_point(x));
    if v.iter().all(Zero::is_zero) {
        return Err(Error::BasePoint(format!("{x}")));
    }
    ProjPoint::new(&v)
}

/// Outcome of the involution: the other point of the fiber, or the point
/// itself when it lies on the ramification curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partner {
    pub point: ProjPoint,
    pub fixed: bool,
}

/// Coordinates `(s, t)` of a point `x = s p + t q` on the line.
pub fn line_coordinates(line: &DualLine, x: &ProjPoint) -> Result<(Rational, Rational)> {
    let pq = line.p.cross(&line.q);
    let xq = x.cross(&line.q);
    let xp = x.cross(&line.p);
    let k = (0..3)
        .find(|&k| !pq[k].is_zero())
        .ok_or_else(|| Error::Invalid("line basis is degenerate".into()))?;
    let s = Rational::new(xq[k].clone(), pq[k].clone());
    let t = Rational::new(-xp[k].clone(), pq[k].clone());
    // x must lie on the line
    let back = line.point_at(&s, &t)?;
    if &back != x {
        return Err(Error::Invalid(format!("{x} is not on the line")));
    }
    Ok((s, t))
}

/// Second intersection of the fiber line `{X(α) = 0}` with the fiber conic
/// `{C(α) = 0}`, where `α = geiser(x)`.
pub fn involution_partner(net: &CubicNet, x: &ProjPoint) -> Result<Partner> {
    let alpha = geiser(net, x)?.to_rational();
    let l = net.x_at(&alpha);
    if l.is_zero() {
        return Err(Error::Degenerate(format!("fiber line over the image of {x} is undefined")));
    }
    let eq = crate::exact::primitive_integer_vector(l.coeffs());
    let line = DualLine::from_equation(&[eq[0].clone(), eq[1].clone(), eq[2].clone()], Plane::Source)?;
    let conic = net.c_at(&alpha).restrict(&line)?;
    if conic.is_zero() {
        return Err(Error::Degenerate(format!("fiber conic contains the fiber line at {x}")));
    }
    let (s0, t0) = line_coordinates(&line, x)?;
    // linear factor vanishing at (s0 : t0) is t0 s - s0 t
    let known = crate::forms::BinForm::from_coeffs(vec![-s0.clone(), t0.clone()]);
    let other = conic
        .divide(&known)
        .ok_or_else(|| Error::Inconsistent(format!("{x} is not on its fiber conic")))?;
    // other = c1 s + c0 t vanishes at (c0 : -c1)
    let c0 = other.coeffs()[0].clone();
    let c1 = other.coeffs()[1].clone();
    let y = line.point_at(&c0, &-c1)?;
    let fixed = &y == x;
    Ok(Partner { point: y, fixed })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::rat;

    pub(crate) fn frame_config() -> PointConfig {
        PointConfig::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [2, -1, 1], [3, 1, -2]]).unwrap()
    }

    /// Five points on `x0 x1 = x2^2` and two on the line through the conic
    /// points `(4:1:2)` and `(1:9:3)`; those two conic points are fixed by
    /// the involution.
    pub(crate) fn conic_line_config() -> PointConfig {
        PointConfig::from_ints(&[[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 1, -1], [1, 4, 2], [3, -8, -1], [9, 11, 7]]).unwrap()
    }

    #[test]
    fn collinear_triple_rejected() {
        let cfg = PointConfig::from_ints(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 2, 3], [2, -1, 1], [3, 1, -2]]).unwrap();
        let err = validate_general_position(&cfg).unwrap_err();
        assert!(matches!(err, Error::Degenerate(ref m) if m.contains("[0, 1, 2]") && m.contains("collinear")));
    }

    #[test]
    fn coconic_six_rejected() {
        // (u^2 : v^2 : uv) lies on x0 x1 = x2^2
        let on_conic: Vec<[i64; 3]> = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)]
            .iter()
            .map(|&(u, v)| [u * u, v * v, u * v])
            .collect();
        let mut pts = on_conic.clone();
        pts.push([1, 3, -7]);
        let cfg = PointConfig::from_ints(&pts).unwrap();
        let err = validate_general_position(&cfg).unwrap_err();
        assert!(matches!(err, Error::Degenerate(ref m) if m.contains("conic")));
    }

    #[test]
    fn seeded_configs_are_accepted() {
        for seed in 0..3 {
            let cfg = PointConfig::seeded(seed);
            let gp = validate_general_position(&cfg).unwrap();
            assert_eq!((gp.triples_checked, gp.sextuples_checked, gp.cubic_rank), (35, 7, 7));
            assert_eq!(rank_q(&evaluation_matrix(cfg.points(), 3)), 7);
            assert_eq!(kernel_q(&evaluation_matrix(cfg.points(), 3)).len(), 3);
        }
    }

    #[test]
    fn net_and_syzygies() {
        let net = CubicNet::new(&frame_config()).unwrap();
        for d in &net.delta {
            for p in net.config.points() {
                assert!(d.eval_point(p).is_zero());
            }
        }
        let coeffs: Vec<Vec<Rational>> = net.delta.iter().map(|d| d.coeffs().to_vec()).collect();
        assert_eq!(rank_q(&QMatrix::from_rows(&coeffs).unwrap()), 3);
        assert_eq!((net.linear_syzygy_dim, net.quadratic_syzygy_dim), (1, 4));
        assert!(sum_products(&net.delta, &net.x).is_zero());
        assert!(sum_products(&net.delta, &net.c).is_zero());
        assert!(net.with_quadratic_syzygy(net.c.clone()).is_ok());
        let lx = net.shifted_c(&TriForm::var(0, Plane::Source)).unwrap();
        assert!(net.with_quadratic_syzygy(lx).is_ok());
        let pure: [TriForm; 3] = std::array::from_fn(|i| TriForm::var(1, Plane::Source).multiply(&net.x[i]).unwrap());
        assert!(net.with_quadratic_syzygy(pure).is_err());
    }

    #[test]
    fn net_ignores_point_order() {
        let cfg = frame_config();
        let a = cubic_net(&cfg).unwrap();
        let b = cubic_net(&cfg.permuted(&[6, 2, 4, 0, 5, 1, 3]).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn geiser_and_fibers() {
        let net = CubicNet::new(&frame_config()).unwrap();
        assert!(matches!(geiser(&net, net.config.point(0)), Err(Error::BasePoint(_))));
        for (i, p) in [[2, 3, 5], [1, -4, 7], [6, 1, 1], [0, 5, -3]].iter().enumerate() {
            let x = ProjPoint::from_ints(p[0], p[1], p[2]).unwrap();
            let a = geiser(&net, &x).unwrap().to_rational();
            assert!(net.x_at(&a).eval_point(&x).is_zero(), "point {i}");
            assert!(net.c_at(&a).eval_point(&x).is_zero(), "point {i}");
            let y = involution_partner(&net, &x).unwrap();
            assert!(!y.fixed);
            assert_ne!(y.point, x);
            assert_eq!(geiser(&net, &y.point).unwrap(), geiser(&net, &x).unwrap());
            let back = involution_partner(&net, &y.point).unwrap();
            assert_eq!(back.point, x);
        }
    }

    #[test]
    fn fixed_points_on_constructed_config() {
        let cfg = conic_line_config();
        let net = CubicNet::new(&cfg).unwrap();
        for p in [[4, 1, 2], [1, 9, 3]] {
            let x = ProjPoint::from_ints(p[0], p[1], p[2]).unwrap();
            let y = involution_partner(&net, &x).unwrap();
            assert!(y.fixed, "{x} should be fixed");
            assert_eq!(y.point, x);
        }
        let _ = rat(0);
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = PointConfig::seeded(4);
        assert_eq!(PointConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        assert!(PointConfig::from_json(r#"{"points": [[1,0,0]]}"#).is_err());
    }
}
