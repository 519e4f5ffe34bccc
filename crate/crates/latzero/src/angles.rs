//! Rational angles between integer vectors: the associated quadratic form,
//! its determinant identity, and angle-constrained vector searches.
//!
//! For a nonzero `a` in `Z^n` and an angle with `tan^2(theta) = q/p`, the
//! integer vectors at angle theta to `a` are exactly the nontrivial zeros
//! of the homogeneous form `p ||a||^2 sum x_i^2 - (p+q) (a.x)^2`. Right
//! angles are the solutions of the linear equation `a.x = 0` and are
//! handled by a separate path.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::bounds::{cassels_bound, BoundValue};
use crate::intmat::{det_exact, IntMatrix};
use crate::lattice::SublatticeSystem;
use crate::quadratic::QuadraticPolynomial;
use crate::solver::{find_avoiding_zero, minimal_point_in_box, Instance, SearchResult, SolveError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AngleError {
    ZeroVector,
    /// The two vectors are orthogonal; tan^2 is not defined.
    RightAngle,
    /// A right-angle spec cannot be used where an oblique angle is required.
    RightAngleSpec,
    /// tan^2 must be a positive rational for an oblique spec.
    InvalidRatio,
    DimensionMismatch,
    /// Avoiding searches require the standard lattice `Z^n`.
    NotStandardLattice,
    Solve(SolveError),
}

impl fmt::Display for AngleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleError::ZeroVector => write!(f, "zero vector has no direction"),
            AngleError::RightAngle => write!(f, "vectors are orthogonal (tan^2 undefined)"),
            AngleError::RightAngleSpec => write!(f, "right angle requires the linear-equation path"),
            AngleError::InvalidRatio => write!(f, "tan^2 must be a positive rational"),
            AngleError::DimensionMismatch => write!(f, "dimension mismatch"),
            AngleError::NotStandardLattice => {
                write!(f, "angle searches with sublattices require the standard lattice")
            }
            AngleError::Solve(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AngleError {}

impl From<SolveError> for AngleError {
    fn from(e: SolveError) -> Self {
        AngleError::Solve(e)
    }
}

/// A prescribed angle: either the right angle or an oblique angle encoded
/// by `tan^2(theta) = q/p` with coprime positive `p`, `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AngleSpec {
    Right,
    Oblique { p: BigInt, q: BigInt },
}

impl AngleSpec {
    /// Normalize a positive ratio `q/p` into a coprime oblique spec.
    pub fn oblique(p: BigInt, q: BigInt) -> Result<AngleSpec, AngleError> {
        if p.is_zero() || q.is_zero() {
            return Err(AngleError::InvalidRatio);
        }
        let (p, q) = if p.is_negative() { (-p, -q) } else { (p, q) };
        if q.is_negative() {
            return Err(AngleError::InvalidRatio);
        }
        let g = p.gcd(&q);
        Ok(AngleSpec::Oblique { p: p / &g, q: q / &g })
    }

    /// Build a spec from an exact `tan^2` value: zero is rejected (parallel
    /// vectors are not an angle spec).
    pub fn from_tan_sq(t: &BigRational) -> Result<AngleSpec, AngleError> {
        if !t.is_positive() {
            return Err(AngleError::InvalidRatio);
        }
        AngleSpec::oblique(t.denom().clone(), t.numer().clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Either of the two orientations theta / pi - theta.
    Any,
    /// Additionally require `a . b > 0`.
    AcuteSide,
}

/// The quadratic form whose nontrivial zeros are the vectors at the
/// prescribed oblique angle to the base vector.
#[derive(Debug, Clone)]
pub struct AngleForm {
    pub base: Vec<BigInt>,
    pub p: BigInt,
    pub q: BigInt,
    /// `||a||^2`.
    pub norm_sq: BigInt,
    pub form: QuadraticPolynomial,
    /// The existence guarantees of the theory need dimension >= 5; the
    /// algebra below is valid in any dimension.
    pub below_guarantee_dim: bool,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact `tan^2` of the angle between two integer vectors:
/// `(||a||^2 ||b||^2 - (a.b)^2) / (a.b)^2`.
pub fn tan_sq(a: &[BigInt], b: &[BigInt]) -> Result<BigRational, AngleError> {
    if a.len() != b.len() {
        return Err(AngleError::DimensionMismatch);
    }
    if a.iter().all(|v| v.is_zero()) || b.iter().all(|v| v.is_zero()) {
        return Err(AngleError::ZeroVector);
    }
    let ab = dot(a, b);
    if ab.is_zero() {
        return Err(AngleError::RightAngle);
    }
    let aa = dot(a, a);
    let bb = dot(b, b);
    let ab2 = &ab * &ab;
    Ok(BigRational::new(aa * bb - &ab2, ab2))
}

/// Build the angle form `p ||a||^2 I - (p+q) a a^T` for a nonzero base
/// vector and an oblique spec.
pub fn angle_form(a: &[BigInt], spec: &AngleSpec) -> Result<AngleForm, AngleError> {
    let (p, q) = match spec {
        AngleSpec::Right => return Err(AngleError::RightAngleSpec),
        AngleSpec::Oblique { p, q } => (p.clone(), q.clone()),
    };
    if a.iter().all(|v| v.is_zero()) {
        return Err(AngleError::ZeroVector);
    }
    let n = a.len();
    let t = dot(a, a);
    let pq = &p + &q;
    let mut m = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = -(&pq * &a[i] * &a[j]);
            if i == j {
                v += &p * &t;
            }
            m.set(i, j, v);
        }
    }
    let form = QuadraticPolynomial::homogeneous(m).expect("construction is symmetric");
    // height bound: |Q_{a,theta}| < 2 (p+q) ||a||^2, strict
    debug_assert!(form.height() < BigInt::from(2) * &pq * &t);
    Ok(AngleForm {
        base: a.to_vec(),
        p,
        q,
        norm_sq: t,
        form,
        below_guarantee_dim: n < 5,
    })
}

/// Exact determinant of the angle form matrix, by fraction-free
/// elimination.
pub fn angle_form_det(a: &[BigInt], spec: &AngleSpec) -> Result<BigInt, AngleError> {
    let af = angle_form(a, spec)?;
    Ok(det_exact(af.form.form()).expect("form matrix is square"))
}

/// The closed form `-p^(n-1) q ||a||^(2n)` the determinant must equal.
pub fn angle_form_det_formula(a: &[BigInt], spec: &AngleSpec) -> Result<BigInt, AngleError> {
    let af = angle_form(a, spec)?;
    let n = a.len() as u32;
    Ok(-af.p.pow(n - 1) * &af.q * af.norm_sq.pow(n))
}

/// Radius within which a vector at the prescribed angle is guaranteed to
/// exist (dimension >= 5): the isotropy bound evaluated at the height bound
/// `2 (p+q) ||a||^2` of the angle form.
pub fn guaranteed_radius(
    a: &[BigInt],
    spec: &AngleSpec,
    constant: &BigRational,
) -> Result<BoundValue, AngleError> {
    let af = angle_form(a, spec)?;
    let h = BigInt::from(2) * (&af.p + &af.q) * &af.norm_sq;
    Ok(cassels_bound(&h, a.len(), constant))
}

/// Radius within which an angle vector avoiding the union is guaranteed to
/// exist when one exists at all (dimension >= 5): the avoiding-zero bound
/// evaluated at the height bound of the angle form, with `det_omega_sq`
/// the squared determinant of the intersection sublattice.
pub fn guaranteed_avoiding_radius(
    a: &[BigInt],
    spec: &AngleSpec,
    det_omega_sq: &BigInt,
    constant: &BigRational,
) -> Result<BoundValue, AngleError> {
    let af = angle_form(a, spec)?;
    let h = BigInt::from(2) * (&af.p + &af.q) * &af.norm_sq;
    let n = a.len();
    crate::bounds::avoiding_zero_bound(det_omega_sq, &h, n, n, constant)
        .map_err(|e| AngleError::Solve(SolveError::InputTooLarge(e.to_string())))
}

fn to_i128_vec(a: &[BigInt]) -> Result<Vec<i128>, AngleError> {
    a.iter()
        .map(|v| v.to_i128())
        .collect::<Option<Vec<_>>>()
        .ok_or(AngleError::Solve(SolveError::InputTooLarge("vector exceeds i128".into())))
}

fn dot_i128(a: &[i128], b: &[i128]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        acc = acc.checked_add(x.checked_mul(*y)?)?;
    }
    Some(acc)
}

/// Minimal-sup-norm nontrivial zero of the angle form within `radius`,
/// ties lexicographic; with `Orientation::AcuteSide` additionally
/// `a . b > 0`. Every returned vector satisfies `tan_sq(a, b) = q/p`
/// exactly.
pub fn find_angle_vector(
    a: &[BigInt],
    spec: &AngleSpec,
    radius: &BigInt,
    orientation: Orientation,
    threads: usize,
) -> Result<Option<Vec<BigInt>>, AngleError> {
    let af = angle_form(a, spec)?;
    let small = crate::solver::small_poly_of(&af.form)
        .ok_or(AngleError::Solve(SolveError::InputTooLarge("form exceeds i128".into())))?;
    let a_small = to_i128_vec(a)?;
    if radius.is_negative() {
        return Ok(None);
    }
    let r = radius.to_i128().unwrap_or(i128::MAX);
    let found = minimal_point_in_box(a.len(), r, false, threads, |x| {
        let zero = matches!(small.eval(x), Some(0));
        if !zero {
            return false;
        }
        match orientation {
            Orientation::Any => true,
            Orientation::AcuteSide => matches!(dot_i128(&a_small, x), Some(d) if d > 0),
        }
    })
    .map_err(AngleError::Solve)?;
    let found: Option<Vec<BigInt>> =
        found.map(|x| x.into_iter().map(BigInt::from).collect());
    if let Some(b) = &found {
        debug_assert_eq!(
            tan_sq(a, b).expect("zero of the form has a.b != 0"),
            BigRational::new(af.q.clone(), af.p.clone())
        );
    }
    Ok(found)
}

/// Minimal nontrivial zero of the angle form outside the union of the
/// system's sublattices, via the avoiding-zero pipeline over `Z^n`.
pub fn find_angle_vector_avoiding(
    a: &[BigInt],
    spec: &AngleSpec,
    system: &SublatticeSystem,
    radius: &BigInt,
    threads: usize,
) -> Result<Option<SearchResult>, AngleError> {
    if system.parent().basis() != &IntMatrix::identity(a.len()) {
        return Err(AngleError::NotStandardLattice);
    }
    let af = angle_form(a, spec)?;
    let inst = Instance::new(system.clone(), af.form.clone()).map_err(AngleError::Solve)?;
    let report = find_avoiding_zero(&inst, radius, threads).map_err(AngleError::Solve)?;
    if let Some(res) = &report.result {
        debug_assert_eq!(
            tan_sq(a, &res.point).expect("zero of the form has a.b != 0"),
            BigRational::new(af.q.clone(), af.p.clone())
        );
    }
    Ok(report.result)
}

/// Minimal-norm nonzero integer solution of `a . x = 0` within `radius`,
/// optionally avoiding the union of a sublattice system over `Z^n`.
pub fn right_angle_vector(
    a: &[BigInt],
    system: Option<&SublatticeSystem>,
    radius: &BigInt,
    threads: usize,
) -> Result<Option<Vec<BigInt>>, AngleError> {
    if a.iter().all(|v| v.is_zero()) {
        return Err(AngleError::ZeroVector);
    }
    let testers = match system {
        Some(sys) => {
            if sys.parent().basis() != &IntMatrix::identity(a.len()) {
                return Err(AngleError::NotStandardLattice);
            }
            sys.coeffs()
                .iter()
                .map(crate::solver::coeff_tester)
                .collect::<Result<Vec<_>, _>>()
                .map_err(AngleError::Solve)?
        }
        None => Vec::new(),
    };
    let a_small = to_i128_vec(a)?;
    if radius.is_negative() {
        return Ok(None);
    }
    let r = radius.to_i128().unwrap_or(i128::MAX);
    let found = minimal_point_in_box(a.len(), r, false, threads, |x| {
        if !matches!(dot_i128(&a_small, x), Some(0)) {
            return false;
        }
        testers.iter().all(|t| !t.contains(x))
    })
    .map_err(AngleError::Solve)?;
    Ok(found.map(|x| x.into_iter().map(BigInt::from).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::Rng64;
    use crate::lattice::Lattice;
    use num_traits::One;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn biv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    fn e1(n: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        v[0] = BigInt::one();
        v
    }

    fn spec(p: i64, q: i64) -> AngleSpec {
        AngleSpec::oblique(bi(p), bi(q)).unwrap()
    }

    #[test]
    fn tan_sq_examples() {
        // 45 degrees: (2*1 - 1)/1 = 1
        assert_eq!(
            tan_sq(&e1(5), &biv(&[1, 1, 0, 0, 0])).unwrap(),
            BigRational::from_integer(bi(1))
        );
        // parallel: 0
        assert_eq!(tan_sq(&e1(5), &e1(5)).unwrap(), BigRational::zero());
        // (5*5 - 16)/16 = 9/16
        assert_eq!(
            tan_sq(&biv(&[1, 2, 0, 0, 0]), &biv(&[2, 1, 0, 0, 0])).unwrap(),
            BigRational::new(bi(9), bi(16))
        );
        assert_eq!(
            tan_sq(&e1(5), &biv(&[0, 1, 0, 0, 0])).unwrap_err(),
            AngleError::RightAngle
        );
        assert_eq!(tan_sq(&e1(5), &biv(&[0; 5])).unwrap_err(), AngleError::ZeroVector);
    }

    #[test]
    fn spec_normalization() {
        assert_eq!(spec(2, 4), AngleSpec::Oblique { p: bi(1), q: bi(2) });
        assert_eq!(
            AngleSpec::oblique(bi(-3), bi(-6)).unwrap(),
            AngleSpec::Oblique { p: bi(1), q: bi(2) }
        );
        assert!(AngleSpec::oblique(bi(1), bi(0)).is_err());
        assert!(AngleSpec::oblique(bi(-1), bi(2)).is_err());
        assert!(AngleSpec::from_tan_sq(&BigRational::zero()).is_err());
    }

    #[test]
    fn angle_form_examples() {
        // a = e1, p = q = 1: diag(-1, 1, 1, 1, 1)
        let af = angle_form(&e1(5), &spec(1, 1)).unwrap();
        let mut want = IntMatrix::identity(5);
        want.set(0, 0, bi(-1));
        assert_eq!(af.form.form(), &want);
        assert!(!af.below_guarantee_dim);

        // a = e1, p = 1, q = 3: diag(-3, 1, 1, 1, 1)
        let af = angle_form(&e1(5), &spec(1, 3)).unwrap();
        let mut want = IntMatrix::identity(5);
        want.set(0, 0, bi(-3));
        assert_eq!(af.form.form(), &want);

        // a = (1,1,0,0,0), p = q = 1: 2 I - 2 a a^T
        let af = angle_form(&biv(&[1, 1, 0, 0, 0]), &spec(1, 1)).unwrap();
        let m = af.form.form();
        assert_eq!(m.get(0, 0), &bi(0));
        assert_eq!(m.get(0, 1), &bi(-2));
        assert_eq!(m.get(1, 1), &bi(0));
        assert_eq!(m.get(2, 2), &bi(2));
        // pointwise: 2 sum x_i^2 - 2 (x1+x2)^2
        let x = biv(&[1, 2, 3, -1, 0]);
        let direct = bi(2) * bi(1 + 4 + 9 + 1) - bi(2) * bi(9);
        assert_eq!(af.form.evaluate(&x).unwrap(), direct);
    }

    #[test]
    fn angle_form_height_bound_strict() {
        let mut rng = Rng64::new(5);
        for _ in 0..100 {
            let n = 5 + rng.below(2) as usize;
            let a: Vec<BigInt> = (0..n).map(|_| bi(rng.range_i64(-10, 10))).collect();
            if a.iter().all(|v| v.is_zero()) {
                continue;
            }
            let p = bi(rng.range_i64(1, 5));
            let q = bi(rng.range_i64(1, 5));
            let sp = AngleSpec::oblique(p, q).unwrap();
            let af = angle_form(&a, &sp).unwrap();
            let rhs = bi(2) * (&af.p + &af.q) * &af.norm_sq;
            assert!(af.form.height() < rhs);
        }
    }

    #[test]
    fn det_identity_examples() {
        assert_eq!(angle_form_det(&e1(5), &spec(1, 1)).unwrap(), bi(-1));
        // a = (1,1,0,0,0), p=1, q=2: -q * t^5 = -2 * 32 = -64
        let a = biv(&[1, 1, 0, 0, 0]);
        assert_eq!(angle_form_det(&a, &spec(1, 2)).unwrap(), bi(-64));
        assert_eq!(angle_form_det_formula(&a, &spec(1, 2)).unwrap(), bi(-64));
    }

    #[test]
    fn det_identity_random() {
        let mut rng = Rng64::new(99);
        for _ in 0..50 {
            let n = 5 + rng.below(2) as usize;
            let a: Vec<BigInt> = (0..n).map(|_| bi(rng.range_i64(-10, 10))).collect();
            if a.iter().all(|v| v.is_zero()) {
                continue;
            }
            let sp = AngleSpec::oblique(bi(rng.range_i64(1, 9)), bi(rng.range_i64(1, 9))).unwrap();
            assert_eq!(angle_form_det(&a, &sp).unwrap(), angle_form_det_formula(&a, &sp).unwrap());
        }
    }

    #[test]
    fn angle_zero_identity_random() {
        // for random a, b with a.b != 0 and tan^2 > 0, b is a zero of the
        // form built from tan_sq(a, b)
        let mut rng = Rng64::new(17);
        let mut done = 0;
        while done < 100 {
            let n = 5 + rng.below(2) as usize;
            let a: Vec<BigInt> = (0..n).map(|_| bi(rng.range_i64(-6, 6))).collect();
            let b: Vec<BigInt> = (0..n).map(|_| bi(rng.range_i64(-6, 6))).collect();
            let Ok(t) = tan_sq(&a, &b) else { continue };
            if !t.is_positive() {
                continue;
            }
            let sp = AngleSpec::from_tan_sq(&t).unwrap();
            let af = angle_form(&a, &sp).unwrap();
            assert_eq!(af.form.evaluate(&b).unwrap(), bi(0), "a={a:?} b={b:?}");
            done += 1;
        }
    }

    #[test]
    fn scaling_invariance() {
        let a = biv(&[1, -2, 0, 1, 1]);
        let sp = spec(2, 3);
        let af1 = angle_form(&a, &sp).unwrap();
        let scaled: Vec<BigInt> = a.iter().map(|v| v * bi(3)).collect();
        let af9 = angle_form(&scaled, &sp).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(af9.form.form().get(i, j), &(af1.form.form().get(i, j) * bi(9)));
            }
        }
    }

    #[test]
    fn find_angle_vector_examples() {
        let z = find_angle_vector(&e1(5), &spec(1, 1), &bi(1), Orientation::Any, 1)
            .unwrap()
            .unwrap();
        assert_eq!(z, biv(&[-1, -1, 0, 0, 0]));

        let z = find_angle_vector(&e1(5), &spec(1, 1), &bi(1), Orientation::AcuteSide, 1)
            .unwrap()
            .unwrap();
        assert_eq!(z, biv(&[1, -1, 0, 0, 0]));

        // q/p = 3: needs three unit coordinates beside x1
        let z = find_angle_vector(&e1(5), &spec(1, 3), &bi(1), Orientation::Any, 1)
            .unwrap()
            .unwrap();
        assert_eq!(z, biv(&[-1, -1, -1, -1, 0]));
        assert_eq!(
            tan_sq(&e1(5), &z).unwrap(),
            BigRational::from_integer(bi(3))
        );
    }

    #[test]
    fn find_angle_vector_avoiding_examples() {
        let system = SublatticeSystem::new(
            Lattice::standard(5),
            vec![{
                let mut m = IntMatrix::identity(5);
                for i in 0..5 {
                    m.set(i, i, bi(2));
                }
                m
            }],
        )
        .unwrap();
        let res = find_angle_vector_avoiding(&e1(5), &spec(1, 1), &system, &bi(1), 1)
            .unwrap()
            .unwrap();
        assert_eq!(res.point, biv(&[-1, -1, 0, 0, 0]));

        // radius 0: nothing
        assert!(find_angle_vector_avoiding(&e1(5), &spec(1, 1), &system, &bi(0), 1)
            .unwrap()
            .is_none());

        // index-1 sublattice rejected
        let improper =
            SublatticeSystem::new(Lattice::standard(5), vec![IntMatrix::identity(5)]).unwrap();
        assert_eq!(
            find_angle_vector_avoiding(&e1(5), &spec(1, 1), &improper, &bi(1), 1).unwrap_err(),
            AngleError::Solve(SolveError::ImproperSublattice)
        );
    }

    #[test]
    fn right_angle_examples() {
        // first norm-1 solution in lexicographic order with x1 = 0
        let z = right_angle_vector(&e1(5), None, &bi(1), 1).unwrap().unwrap();
        assert_eq!(z, biv(&[0, -1, -1, -1, -1]));

        let z = right_angle_vector(&biv(&[1, 1, 0, 0, 0]), None, &bi(1), 1).unwrap().unwrap();
        assert_eq!(z, biv(&[-1, 1, -1, -1, -1]));

        assert!(right_angle_vector(&biv(&[1; 5]), None, &bi(0), 1).unwrap().is_none());
    }

    #[test]
    fn guaranteed_radius_matches_height_bound() {
        // e1 in Z^5, p=q=1: bound (2*2*1)^2 = 16
        let r = guaranteed_radius(&e1(5), &spec(1, 1), &BigRational::one()).unwrap();
        assert_eq!(r.exact.unwrap(), BigRational::from_integer(bi(16)));
    }

    #[test]
    fn guaranteed_avoiding_radius_exponents() {
        // det = 1, height bound 4: value 4^118 (the rank-5 exponent)
        let r = guaranteed_avoiding_radius(&e1(5), &spec(1, 1), &bi(1), &BigRational::one())
            .unwrap();
        assert_eq!(
            r.exact.unwrap(),
            BigRational::from_integer(BigInt::from(4).pow(118))
        );
        // det factor enters with exponent 2*118 + 1 (checked on det_sq = 4)
        let r = guaranteed_avoiding_radius(&e1(5), &spec(1, 1), &bi(4), &BigRational::one())
            .unwrap();
        let want = BigInt::from(2).pow(237) * BigInt::from(4).pow(118);
        assert_eq!(r.exact.unwrap(), BigRational::from_integer(want));
    }
}
