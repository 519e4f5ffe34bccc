//! Exact evaluators for the explicit norm bounds used by the searches,
//! with the implied constants exposed as a parameter (default 1).
//!
//! Every bound is represented as a [`BoundValue`]: an exact rational when
//! the value is representable, an outward-rounded rational upper estimate
//! when it is finite but irrational, and a directed log10 surrogate for the
//! astronomically large cases (the double-exponential binary bounds).
//! Comparisons against bounds are always exact rational comparisons with
//! rounding directions chosen so a passing check certifies the true
//! inequality or, for reported values, so the printed number is a valid
//! upper bound.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::intmat::{is_perfect_square, sqrt_rat_directed, Rounding};

/// Values with more decimal digits than this stay in log10 form.
const MAX_EXACT_DIGITS: u64 = 100_000;

const SQRT_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundError {
    /// Rank outside the domain of the bound.
    BadRank { rank: usize, min: usize },
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::BadRank { rank, min } => {
                write!(f, "bound requires rank >= {min}, got {rank}")
            }
        }
    }
}

impl std::error::Error for BoundError {}

/// Directed log10 estimate of a positive value.
#[derive(Debug, Clone, PartialEq)]
pub struct Log10 {
    pub value: BigRational,
    pub rounding: Rounding,
}

/// One evaluated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    /// Exact value when representable (perfect roots, integral exponents,
    /// fewer than 100k digits).
    pub exact: Option<BigRational>,
    /// Outward-rounded (>= true value) rational estimate; absent for
    /// astronomically large values.
    pub upper: Option<BigRational>,
    /// log10 of the value, rounded up.
    pub log10: Log10,
    /// The implied-constant parameter the bound was evaluated with.
    pub constant: BigRational,
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = &self.exact {
            if e.is_integer() {
                return write!(f, "{}", e.numer());
            }
            return write!(f, "{}/{}", e.numer(), e.denom());
        }
        if let Some(u) = &self.upper {
            return write!(f, "<= {} (rounded up)", format_rational_fixed(u, 6, Rounding::Up));
        }
        write!(f, "10^{} (log10 rounded up)", format_rational_fixed(&self.log10.value, 4, Rounding::Up))
    }
}

/// Fixed-point decimal rendering of a rational with directed rounding.
pub fn format_rational_fixed(r: &BigRational, places: u32, dir: Rounding) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = r * BigRational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let int = match dir {
        Rounding::Down => floor,
        Rounding::Up => {
            if BigRational::from_integer(floor.clone()) == scaled {
                floor
            } else {
                floor + 1
            }
        }
    };
    let neg = int.is_negative();
    let abs = int.abs();
    let digits = abs.to_string();
    let places = places as usize;
    let (whole, frac) = if digits.len() > places {
        let split = digits.len() - places;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        ("0".to_string(), format!("{digits:0>places$}"))
    };
    let sign = if neg { "-" } else { "" };
    format!("{sign}{whole}.{frac}")
}

/// Directed log10 of a positive integer.
fn log10_int_directed(n: &BigInt, dir: Rounding) -> BigRational {
    assert!(n.is_positive(), "log10 of nonpositive integer");
    let bits = n.bits();
    let approx = if bits <= 900 {
        n.to_f64().expect("fits in f64 range").log10()
    } else {
        let shift = bits - 64;
        let m: f64 = (n >> shift).to_f64().expect("64-bit mantissa");
        (m.log2() + shift as f64) * std::f64::consts::LOG10_2
    };
    let base = BigRational::from_float(approx).expect("finite float");
    // generous slack covering the float error, applied outward
    let slack = BigRational::from_float(approx.abs() * 1e-12 + 1e-9).expect("finite float");
    match dir {
        Rounding::Up => base + slack,
        Rounding::Down => base - slack,
    }
}

/// Directed log10 of a positive rational.
fn log10_rat_directed(r: &BigRational, dir: Rounding) -> BigRational {
    assert!(r.is_positive(), "log10 of nonpositive rational");
    match dir {
        Rounding::Up => {
            log10_int_directed(r.numer(), Rounding::Up) - log10_int_directed(r.denom(), Rounding::Down)
        }
        Rounding::Down => {
            log10_int_directed(r.numer(), Rounding::Down) - log10_int_directed(r.denom(), Rounding::Up)
        }
    }
}

/// Product of rational powers with a rational constant in front: the shape
/// every bound in this module takes.
struct PowProduct {
    constant: BigRational,
    factors: Vec<(BigRational, BigRational)>, // (base > 0, exponent >= 0)
}

impl PowProduct {
    fn new(constant: BigRational) -> Self {
        assert!(constant.is_positive(), "bound constant must be positive");
        PowProduct { constant, factors: Vec::new() }
    }

    fn pow(mut self, base: BigRational, exp: BigRational) -> Self {
        assert!(base.is_positive(), "bound base must be positive");
        assert!(!exp.is_negative(), "bound exponent must be nonnegative");
        self.factors.push((base, exp));
        self
    }

    fn log10_up(&self) -> BigRational {
        let mut total = log10_rat_directed(&self.constant, Rounding::Up);
        for (base, exp) in &self.factors {
            // exp >= 0, so rounding the log up rounds the term up for any base
            total += exp * log10_rat_directed(base, Rounding::Up);
        }
        total
    }

    /// Exact value when every factor is exactly representable and the
    /// result stays below the digit cap.
    fn exact(&self) -> Option<BigRational> {
        if self.log10_up() > BigRational::from_integer(BigInt::from(MAX_EXACT_DIGITS)) {
            return None;
        }
        let mut acc = self.constant.clone();
        for (base, exp) in &self.factors {
            acc *= pow_rational(base, exp)?;
        }
        Some(acc)
    }

    /// Outward-rounded rational value; like `exact` but half-integral
    /// exponents fall back to a directed square root.
    fn upper(&self) -> Option<BigRational> {
        if self.log10_up() > BigRational::from_integer(BigInt::from(MAX_EXACT_DIGITS)) {
            return None;
        }
        let mut acc = self.constant.clone();
        for (base, exp) in &self.factors {
            match pow_rational(base, exp) {
                Some(v) => acc *= v,
                None => {
                    // exponent p/2: base^floor(p/2) * sqrt(base) rounded up
                    if exp.denom() != &BigInt::from(2) {
                        return None;
                    }
                    let whole = exp.floor();
                    acc *= pow_rational(base, &whole)?;
                    acc *= sqrt_rat_directed(base, SQRT_BITS, Rounding::Up);
                }
            }
        }
        Some(acc)
    }

    fn build(self) -> BoundValue {
        let log10 = Log10 { value: self.log10_up(), rounding: Rounding::Up };
        BoundValue {
            exact: self.exact(),
            upper: self.upper(),
            log10,
            constant: self.constant,
        }
    }
}

/// `base^exp` when exactly representable: integral exponents always,
/// half-integral ones when the base is a perfect square, anything when the
/// base is 1.
fn pow_rational(base: &BigRational, exp: &BigRational) -> Option<BigRational> {
    if base.is_one() {
        return Some(BigRational::one());
    }
    if exp.is_zero() {
        return Some(BigRational::one());
    }
    if exp.is_integer() {
        let e = exp.numer().to_u32()?;
        return Some(BigRational::new(base.numer().pow(e), base.denom().pow(e)));
    }
    if exp.denom() == &BigInt::from(2) {
        let sn = is_perfect_square(base.numer())?;
        let sd = is_perfect_square(base.denom())?;
        let root = BigRational::new(sn, sd);
        let whole = exp.floor();
        let e = whole.numer().to_u32()?;
        let whole_pow = BigRational::new(base.numer().pow(e), base.denom().pow(e));
        return Some(whole_pow * root);
    }
    None
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_big(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// The Diophantine exponent: 2100 for rank 3, 84 for rank 4,
/// `5k + 19 + 74/(k-4)` for rank >= 5. Exact rational.
pub fn dietmann_exponent(k: usize) -> Result<BigRational, BoundError> {
    match k {
        0..=2 => Err(BoundError::BadRank { rank: k, min: 3 }),
        3 => Ok(rat(2100)),
        4 => Ok(rat(84)),
        _ => {
            let k64 = k as i64;
            Ok(rat(5 * k64 + 19) + BigRational::new(BigInt::from(74), BigInt::from(k64 - 4)))
        }
    }
}

/// Search radius guaranteed for a zero of a restricted polynomial of
/// height `height_g` in `k` variables: `(28 h)^(10 h)` for `k = 2` (with
/// constant 1), `C * h^dietmann_exponent(k)` for `k >= 3`.
pub fn dietmann_radius(
    height_g: &BigInt,
    k: usize,
    constant: &BigRational,
) -> Result<BoundValue, BoundError> {
    assert!(height_g >= &BigInt::one(), "height must be at least 1");
    if k < 2 {
        return Err(BoundError::BadRank { rank: k, min: 2 });
    }
    if k == 2 {
        let base = rat_big(&(BigInt::from(28) * height_g));
        let exp = rat_big(&(BigInt::from(10) * height_g));
        return Ok(PowProduct::new(BigRational::one()).pow(base, exp).build());
    }
    let r = dietmann_exponent(k)?;
    Ok(PowProduct::new(constant.clone()).pow(rat_big(height_g), r).build())
}

/// Binary-case radius `(28 |Q|)^(10 |Q|)`, exact.
pub fn kornhauser_radius(height_q: &BigInt) -> BoundValue {
    assert!(height_q >= &BigInt::one(), "height must be at least 1");
    let base = rat_big(&(BigInt::from(28) * height_q));
    let exp = rat_big(&(BigInt::from(10) * height_q));
    PowProduct::new(BigRational::one()).pow(base, exp).build()
}

/// Main avoiding-zero bound: `C * det(S)^(2 dietmann_exponent(k)+1) * |Q|^dietmann_exponent(k)` for
/// `k >= 3`, and the double-exponential form
/// `C * det(S) * (2408 n^2 det(S)^2 |Q|)^(860 n^2 det(S)^2 |Q|)` for
/// `k = 2`, where `det(S)^2` is the exact integer `det_omega_sq`.
pub fn avoiding_zero_bound(
    det_omega_sq: &BigInt,
    height_q: &BigInt,
    k: usize,
    n: usize,
    constant: &BigRational,
) -> Result<BoundValue, BoundError> {
    assert!(det_omega_sq >= &BigInt::one() && height_q >= &BigInt::one());
    if k < 2 {
        return Err(BoundError::BadRank { rank: k, min: 2 });
    }
    if k == 2 {
        let n2 = BigInt::from((n * n) as u64);
        let base = rat_big(&(BigInt::from(2408) * &n2 * det_omega_sq * height_q));
        let exp = rat_big(&(BigInt::from(860) * &n2 * det_omega_sq * height_q));
        return Ok(PowProduct::new(constant.clone())
            .pow(rat_big(det_omega_sq), BigRational::new(BigInt::one(), BigInt::from(2)))
            .pow(base, exp)
            .build());
    }
    let r = dietmann_exponent(k)?;
    // det(S)^(2 rho + 1) = det_omega_sq^(rho + 1/2) with rho the exponent
    let det_exp = &r + BigRational::new(BigInt::one(), BigInt::from(2));
    Ok(PowProduct::new(constant.clone())
        .pow(rat_big(det_omega_sq), det_exp)
        .pow(rat_big(height_q), r)
        .build())
}

/// Squared form of the outside-point bound:
/// `(4/3)^(k(k-1)) * k^2 * det_omega_sq`, exact.
pub fn outside_point_bound_sq(det_omega_sq: &BigInt, k: usize) -> BigRational {
    let e = (k * (k - 1)) as u32;
    let four_thirds = BigRational::new(BigInt::from(4).pow(e), BigInt::from(3).pow(e));
    four_thirds * rat((k * k) as i64) * rat_big(det_omega_sq)
}

/// Display form of the outside-point bound `(4/3)^(k(k-1)/2) * k * det(S)`.
pub fn outside_point_bound(det_omega_sq: &BigInt, k: usize) -> BoundValue {
    PowProduct::new(rat(k as i64))
        .pow(BigRational::new(BigInt::from(4), BigInt::from(3)), BigRational::new(BigInt::from((k * (k - 1)) as u64), BigInt::from(2)))
        .pow(rat_big(det_omega_sq), BigRational::new(BigInt::one(), BigInt::from(2)))
        .build()
}

/// Henk-Thiel style bound on the smallest point outside the union:
/// `(det(S)/l^(k-1)) * (sum 1/d_i - (m-1)/d + l^k/det(S))` with
/// `l = lambda_1(S)`. Exact rational when `det_omega_sq` is a perfect
/// square, otherwise outward-rounded. Strict upper-bound semantics.
pub fn henk_thiel_bound(
    det_omega_sq: &BigInt,
    lambda1: &BigInt,
    k: usize,
    indices: &[BigInt],
    index: &BigInt,
) -> BoundValue {
    assert!(lambda1.is_positive() && index.is_positive());
    let m = indices.len() as i64;
    let mut t = BigRational::zero();
    for d in indices {
        t += BigRational::new(BigInt::one(), d.clone());
    }
    t -= BigRational::new(BigInt::from(m - 1), index.clone());
    assert!(t.is_positive(), "coset mass term must be positive");
    let lam = rat_big(lambda1);
    let lam_pow_k = pow_rational(&lam, &rat(k as i64)).expect("integer power");
    let lam_pow_km1 = pow_rational(&lam, &rat(k as i64 - 1)).expect("integer power");
    let value_with = |det: BigRational| (det * &t + &lam_pow_k) / &lam_pow_km1;
    let (exact, upper) = match is_perfect_square(det_omega_sq) {
        Some(root) => {
            let v = value_with(rat_big(&root));
            (Some(v.clone()), Some(v))
        }
        None => {
            let up = sqrt_rat_directed(&rat_big(det_omega_sq), SQRT_BITS, Rounding::Up);
            (None, Some(value_with(up)))
        }
    };
    let log10 = Log10 {
        value: log10_rat_directed(upper.as_ref().expect("always finite"), Rounding::Up),
        rounding: Rounding::Up,
    };
    BoundValue { exact, upper, log10, constant: BigRational::one() }
}

/// Cassels-type bound `C * |F|^((n-1)/2)` for the smallest nontrivial zero
/// of an isotropic form.
pub fn cassels_bound(height_f: &BigInt, n: usize, constant: &BigRational) -> BoundValue {
    assert!(height_f >= &BigInt::one() && n >= 2);
    PowProduct::new(constant.clone())
        .pow(rat_big(height_f), BigRational::new(BigInt::from((n - 1) as u64), BigInt::from(2)))
        .build()
}

/// Exact bound on the height of a restricted polynomial built over a
/// reduced basis:
/// `(4/3)^(k(k-1)) * (n^2 (k+1)^2 + n(k+1) + 1) * n^2 k^2 * det_omega_sq * |Q|`.
pub fn restricted_height_bound(
    k: usize,
    n: usize,
    det_omega_sq: &BigInt,
    height_q: &BigInt,
) -> BoundValue {
    let e = (k * (k - 1)) as u32;
    let four_thirds = BigRational::new(BigInt::from(4).pow(e), BigInt::from(3).pow(e));
    let nk1 = (n * (k + 1)) as i64;
    let poly = rat(nk1 * nk1 + nk1 + 1);
    let scale = rat((n * n * k * k) as i64);
    let v = four_thirds * poly * scale * rat_big(det_omega_sq) * rat_big(height_q);
    let log10 = Log10 { value: log10_rat_directed(&v, Rounding::Up), rounding: Rounding::Up };
    BoundValue { exact: Some(v.clone()), upper: Some(v), log10, constant: BigRational::one() }
}

/// All bound values applicable to one instance, plus the brute-force truth
/// when known.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub k: usize,
    pub n: usize,
    pub det_omega_sq: BigInt,
    pub height_q: BigInt,
    pub cassels: Option<BoundValue>,
    pub kornhauser: Option<BoundValue>,
    pub dietmann: Option<BoundValue>,
    pub avoiding_zero: Option<BoundValue>,
    pub outside_point: Option<BoundValue>,
    pub henk_thiel: Option<BoundValue>,
    pub restricted_height: Option<BoundValue>,
    /// Smallest avoiding-zero norm found by brute force; `None` means
    /// unresolved below the search radius.
    pub true_min: Option<BigInt>,
    /// Smallest norm of a lattice point outside the union, when searched.
    pub true_outside_min: Option<BigInt>,
    pub search_radius: BigInt,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn one() -> BigRational {
        BigRational::one()
    }

    #[test]
    fn dietmann_exponent_spot_values() {
        assert_eq!(dietmann_exponent(3).unwrap(), rat(2100));
        assert_eq!(dietmann_exponent(4).unwrap(), rat(84));
        assert_eq!(dietmann_exponent(5).unwrap(), rat(118));
        assert_eq!(dietmann_exponent(6).unwrap(), rat(86));
        assert_eq!(dietmann_exponent(7).unwrap(), rat(54) + BigRational::new(bi(74), bi(3)));
        assert!(matches!(dietmann_exponent(2), Err(BoundError::BadRank { .. })));
        // matches the closed form for all small ranks
        for k in 5..=20usize {
            let want = rat(5 * k as i64 + 19) + BigRational::new(bi(74), bi(k as i64 - 4));
            assert_eq!(dietmann_exponent(k).unwrap(), want);
        }
    }

    #[test]
    fn kornhauser_exact_power() {
        let v = kornhauser_radius(&bi(1));
        let mut want = BigInt::one();
        for _ in 0..10 {
            want *= 28;
        }
        assert_eq!(v.exact.unwrap(), rat_big(&want));

        let v2 = kornhauser_radius(&bi(2));
        let mut want2 = BigInt::one();
        for _ in 0..20 {
            want2 *= 56;
        }
        let e2 = v2.exact.unwrap();
        assert_eq!(e2, rat_big(&want2));
        assert!(e2 > rat_big(&want));
    }

    #[test]
    fn dietmann_examples() {
        let v = dietmann_radius(&bi(1), 2, &one()).unwrap();
        assert_eq!(v.exact.unwrap(), rat_big(&BigInt::from(28).pow(10)));

        let v = dietmann_radius(&bi(1), 3, &one()).unwrap();
        assert_eq!(v.exact.unwrap(), one());

        // 2^2100 has ~632 digits: still exact, log10 = 2100*log10(2)
        let v = dietmann_radius(&bi(2), 3, &one()).unwrap();
        assert_eq!(v.exact.unwrap(), rat_big(&BigInt::from(2).pow(2100)));
        let lg = v.log10.value.to_f64().unwrap();
        assert!((lg - 2100.0 * 2f64.log10()).abs() < 1e-3);
        assert!(matches!(dietmann_radius(&bi(1), 1, &one()), Err(BoundError::BadRank { .. })));
    }

    #[test]
    fn avoiding_zero_bound_exponents_k3() {
        // detOmega_sq = 4 (det = 2), heightQ = 1: value = 2^(2*2100+1)
        let v = avoiding_zero_bound(&bi(4), &bi(1), 3, 3, &one()).unwrap();
        assert_eq!(v.exact.unwrap(), rat_big(&BigInt::from(2).pow(4201)));
        // heightQ exponent is dietmann_exponent(3) = 2100
        let v = avoiding_zero_bound(&bi(1), &bi(2), 3, 3, &one()).unwrap();
        assert_eq!(v.exact.unwrap(), rat_big(&BigInt::from(2).pow(2100)));
        // trivial case: everything 1
        let v = avoiding_zero_bound(&bi(1), &bi(1), 3, 4, &one()).unwrap();
        assert_eq!(v.exact.unwrap(), one());
    }

    #[test]
    fn avoiding_zero_bound_binary_case_oracle() {
        // k=2, n=2, det_sq=1, h=1: det(S) * 9632^3440
        let v = avoiding_zero_bound(&bi(1), &bi(1), 2, 2, &one()).unwrap();
        let want = rat_big(&BigInt::from(9632).pow(3440));
        assert_eq!(v.exact.clone().unwrap(), want);
        // log10 rounds the true value up
        let lg = v.log10.value.to_f64().unwrap();
        let true_lg = 3440.0 * 9632f64.log10();
        assert!(lg >= true_lg && lg - true_lg < 1e-3);
    }

    #[test]
    fn outside_point_bound_examples() {
        // k=2, det = 4: bound (4/3)*2*4 = 32/3, squared (16/9)*4*16 = 1024/9
        assert_eq!(outside_point_bound_sq(&bi(16), 2), BigRational::new(bi(1024), bi(9)));
        assert_eq!(outside_point_bound_sq(&bi(1), 2), BigRational::new(bi(64), bi(9)));
        // k=3, det = 2 -> (4/3)^6 * 9 * 4
        let want = BigRational::new(bi(4096 * 9 * 4), bi(729));
        assert_eq!(outside_point_bound_sq(&bi(4), 3), want);
        // display form squares back to the squared form for perfect squares
        let v = outside_point_bound(&bi(16), 2);
        let e = v.exact.unwrap();
        assert_eq!(&e * &e, outside_point_bound_sq(&bi(16), 2));
    }

    #[test]
    fn henk_thiel_worked_values() {
        // 2Z^2 in Z^2: det = 4, lambda = 2, one index 4 -> 2*(1/4 + 1) = 5/2
        let v = henk_thiel_bound(&bi(16), &bi(2), 2, &[bi(4)], &bi(4));
        assert_eq!(v.exact.unwrap(), BigRational::new(bi(5), bi(2)));
        // 3Z^2: det 9, lambda 3 -> 3*(1/9+1) = 10/3
        let v = henk_thiel_bound(&bi(81), &bi(3), 2, &[bi(9)], &bi(9));
        assert_eq!(v.exact.unwrap(), BigRational::new(bi(10), bi(3)));
        // m = 1: the -(m-1)/d term vanishes; same value when d_1 = d
        let v = henk_thiel_bound(&bi(16), &bi(2), 2, &[bi(4)], &bi(4));
        assert!(v.exact.is_some());
        // irrational det: upper estimate is outward
        let v = henk_thiel_bound(&bi(2), &bi(1), 2, &[bi(2)], &bi(2));
        assert!(v.exact.is_none());
        let up = v.upper.unwrap();
        // true value: sqrt(2)*(1/2) + 1 = 1.7071...
        let approx = up.to_f64().unwrap();
        assert!((1.70710678..1.70710679).contains(&approx));
    }

    #[test]
    fn cassels_examples() {
        let v = cassels_bound(&bi(2), 5, &one());
        assert_eq!(v.exact.unwrap(), rat(4));
        let v = cassels_bound(&bi(1), 7, &one());
        assert_eq!(v.exact.unwrap(), one());
        let v = cassels_bound(&bi(3), 5, &one());
        assert_eq!(v.exact.unwrap(), rat(9));
        // even n: exact only for perfect squares, upper is outward
        let v = cassels_bound(&bi(2), 4, &one());
        assert!(v.exact.is_none());
        let up = v.upper.unwrap();
        assert!(&up * &up >= rat(8) - rat(1) / rat(1_000_000));
        let v = cassels_bound(&bi(4), 4, &one());
        assert_eq!(v.exact.unwrap(), rat(8));
    }

    #[test]
    fn restricted_height_examples() {
        // k=2, n=2: (4/3)^2 * 43 * 16
        let v = restricted_height_bound(2, 2, &bi(1), &bi(1));
        assert_eq!(v.exact.unwrap(), BigRational::new(bi(16 * 43 * 16), bi(9)));
        // linear in heightQ
        let a = restricted_height_bound(2, 3, &bi(4), &bi(3)).exact.unwrap();
        let b = restricted_height_bound(2, 3, &bi(4), &bi(6)).exact.unwrap();
        assert_eq!(b, a * rat(2));
    }

    #[test]
    fn monotonicity_spots() {
        let c = one();
        let a = avoiding_zero_bound(&bi(1), &bi(2), 3, 3, &c).unwrap();
        let b = avoiding_zero_bound(&bi(1), &bi(4), 3, 3, &c).unwrap();
        assert!(a.exact.unwrap() < b.exact.unwrap());
        let a = dietmann_radius(&bi(3), 5, &c).unwrap();
        let b = dietmann_radius(&bi(5), 5, &c).unwrap();
        assert!(a.log10.value < b.log10.value);
        let a = outside_point_bound_sq(&bi(4), 2);
        let b = outside_point_bound_sq(&bi(9), 2);
        assert!(a < b);
    }

    #[test]
    fn huge_values_fall_back_to_log10() {
        // exponent pushes past the digit cap: no exact value, log10 present
        let big_h = BigInt::from(100_000i64);
        let v = kornhauser_radius(&big_h);
        assert!(v.exact.is_none());
        assert!(v.upper.is_none());
        assert!(v.log10.value > rat(1_000_000));
        assert_eq!(v.log10.rounding, Rounding::Up);
    }

    #[test]
    fn fixed_point_formatting() {
        let r = BigRational::new(bi(5), bi(2));
        assert_eq!(format_rational_fixed(&r, 4, Rounding::Up), "2.5000");
        let r = BigRational::new(bi(1), bi(3));
        assert_eq!(format_rational_fixed(&r, 4, Rounding::Up), "0.3334");
        assert_eq!(format_rational_fixed(&r, 4, Rounding::Down), "0.3333");
        let r = BigRational::new(bi(-1), bi(3));
        assert_eq!(format_rational_fixed(&r, 2, Rounding::Down), "-0.34");
    }
}
