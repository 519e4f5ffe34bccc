//! Exhaustive minimal-zero searches: zeros in boxes, the avoiding-zero
//! pipeline (reduce, intersect, enumerate cosets, restrict, search, map
//! back), the outside-point construction and the brute-force oracles that
//! cross-check them.
//!
//! Every search is deterministic: candidates are ordered by sup-norm first
//! and lexicographically on ambient coordinates second, and parallel runs
//! merge partial results through that same total order, so results are
//! identical at any thread count. A sequential path (threads <= 1) runs the
//! exact same enumeration without spawning.
//!
//! Interior arithmetic runs in checked `i128`; on the (desk-scale
//! unreachable) chance of overflow the search falls back to big integers or
//! reports `InputTooLarge` instead of ever returning a wrong answer.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::outside_point_bound_sq;
use crate::intmat::{hnf_lower, isqrt_floor, IntMatrix};
use crate::lattice::{
    coset_representatives, intersect_sublattices, member_normal_form, reduced_basis_with_transform,
    Lattice, LatticeError, SublatticeSystem,
};
use crate::quadratic::{QuadError, QuadraticPolynomial};

/// Cap on enumeration box volume per stage; beyond this the search reports
/// `InputTooLarge` rather than running for years.
const MAX_BOX_POINTS: u128 = 1 << 42;

/// Point filter for staged searches: (coefficients, ambient point) ->
/// accepted, or `None` on arithmetic overflow.
type Accept<'a> = &'a (dyn Fn(&[i128], &[i128]) -> Option<bool> + Sync);

/// Cap on materialized coset representatives in the pipeline.
const MAX_PIPELINE_COSETS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The quadratic part of the polynomial is singular.
    NotRegular,
    /// A sublattice has index 1 where the theorem requires proper ones.
    ImproperSublattice,
    /// The system has no sublattices but the entry point requires some.
    EmptySystem,
    /// Every coset representative lies in some sublattice of the union.
    CoveredByUnion,
    /// Shapes do not line up.
    DimensionMismatch,
    /// The instance is too large for exact exhaustive search.
    InputTooLarge(String),
    Lattice(LatticeError),
    Quad(QuadError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NotRegular => write!(f, "quadratic polynomial is not regular (det F = 0)"),
            SolveError::ImproperSublattice => write!(f, "sublattice of index 1 is not allowed here"),
            SolveError::EmptySystem => write!(f, "at least one sublattice is required"),
            SolveError::CoveredByUnion => write!(f, "the union of sublattices covers the lattice"),
            SolveError::DimensionMismatch => write!(f, "dimension mismatch"),
            SolveError::InputTooLarge(what) => write!(f, "input too large for exact search: {what}"),
            SolveError::Lattice(e) => write!(f, "{e}"),
            SolveError::Quad(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<LatticeError> for SolveError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::ImproperSublattice => SolveError::ImproperSublattice,
            other => SolveError::Lattice(other),
        }
    }
}

impl From<QuadError> for SolveError {
    fn from(e: QuadError) -> Self {
        SolveError::Quad(e)
    }
}

/// A search instance: lattice, sublattice system over it, and a quadratic
/// polynomial in the ambient dimension.
#[derive(Debug, Clone)]
pub struct Instance {
    system: SublatticeSystem,
    poly: QuadraticPolynomial,
}

impl Instance {
    pub fn new(system: SublatticeSystem, poly: QuadraticPolynomial) -> Result<Self, SolveError> {
        if poly.dim() != system.parent().ambient_dim() {
            return Err(SolveError::DimensionMismatch);
        }
        Ok(Instance { system, poly })
    }

    pub fn system(&self) -> &SublatticeSystem {
        &self.system
    }

    pub fn lattice(&self) -> &Lattice {
        self.system.parent()
    }

    pub fn poly(&self) -> &QuadraticPolynomial {
        &self.poly
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `|z| <= |c_i| + k |B| |z'|` from the decomposition.
    Assembly,
    /// Squared form of `(4/3)^(k(k-1)/2) k d Delta (1 + k |z'|)`.
    AssemblySquared,
    /// Squared outside-point bound `(4/3)^(k(k-1)) k^2 det(S)^2`.
    OutsidePoint,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Assembly => write!(f, "assembly"),
            BoundKind::AssemblySquared => write!(f, "assembly-squared"),
            BoundKind::OutsidePoint => write!(f, "outside-point"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub holds: bool,
}

/// A point found by one of the searches, with its exact norm and the bound
/// certificates it was checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub point: Vec<BigInt>,
    pub sup_norm: BigInt,
    /// Index of the producing coset in the full lexicographic enumeration.
    pub coset_index: Option<usize>,
    pub certificates: Vec<BoundCheck>,
}

/// Outcome of the avoiding-zero pipeline with its bookkeeping.
#[derive(Debug, Clone)]
pub struct AvoidReport {
    pub result: Option<SearchResult>,
    /// Total number of cosets of the intersection.
    pub index: BigInt,
    /// Representatives outside the union (candidates that were searched).
    pub admissible_cosets: usize,
    /// Coset indices whose restricted polynomial was singular; these were
    /// searched by direct ambient evaluation instead.
    pub singular_cosets: Vec<usize>,
    /// True when no representative avoids the union, i.e. the union covers
    /// the whole lattice and no avoiding zero exists at any radius.
    pub union_covers: bool,
}

// ---------------------------------------------------------------------------
// checked i128 internals

fn to_i128_vec(xs: &[BigInt]) -> Option<Vec<i128>> {
    xs.iter().map(|x| x.to_i128()).collect()
}

fn matrix_i128(m: &IntMatrix) -> Option<Vec<i128>> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(m.get(r, c).to_i128()?);
        }
    }
    Some(out)
}

fn sup_i128(x: &[i128]) -> i128 {
    x.iter().map(|v| v.abs()).max().unwrap_or(0)
}

/// Quadratic polynomial with coefficients small enough for checked i128
/// evaluation.
pub(crate) struct SmallPoly {
    n: usize,
    form: Vec<i128>,
    linear: Vec<i128>,
    constant: i128,
}

/// Checked-i128 mirror of a polynomial, for use by sibling modules.
pub(crate) fn small_poly_of(q: &QuadraticPolynomial) -> Option<SmallPoly> {
    SmallPoly::of(q)
}

/// Membership tester for a sublattice coefficient matrix, for use by
/// sibling modules.
pub(crate) fn coeff_tester(m: &IntMatrix) -> Result<CoeffTester, SolveError> {
    CoeffTester::of_coeff_matrix(m)
}

impl SmallPoly {
    fn of(q: &QuadraticPolynomial) -> Option<SmallPoly> {
        Some(SmallPoly {
            n: q.dim(),
            form: matrix_i128(q.form())?,
            linear: to_i128_vec(q.linear())?,
            constant: q.constant().to_i128()?,
        })
    }

    /// `Q(x)`, or `None` on overflow.
    pub(crate) fn eval(&self, x: &[i128]) -> Option<i128> {
        let n = self.n;
        let mut acc = self.constant;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row = self.linear[i];
            for j in 0..n {
                if x[j] == 0 {
                    continue;
                }
                row = row.checked_add(self.form[i * n + j].checked_mul(x[j])?)?;
            }
            acc = acc.checked_add(x[i].checked_mul(row)?)?;
        }
        Some(acc)
    }
}

/// Membership tester for a relation matrix in lower normal form, with an
/// i128 fast path and a big-integer fallback.
pub(crate) struct CoeffTester {
    k: usize,
    small: Option<Vec<i128>>,
    big: IntMatrix,
}

impl CoeffTester {
    fn of_coeff_matrix(m: &IntMatrix) -> Result<CoeffTester, SolveError> {
        let (v, _) = hnf_lower(m).map_err(|_| SolveError::Lattice(LatticeError::SingularSublattice))?;
        Ok(CoeffTester { k: v.rows(), small: matrix_i128(&v), big: v })
    }

    pub(crate) fn contains(&self, u: &[i128]) -> bool {
        if let Some(v) = &self.small {
            if let Some(ans) = Self::solve_i128(v, self.k, u) {
                return ans;
            }
        }
        let ub: Vec<BigInt> = u.iter().map(|&x| BigInt::from(x)).collect();
        member_normal_form(&self.big, &ub)
    }

    fn solve_i128(v: &[i128], k: usize, u: &[i128]) -> Option<bool> {
        let mut rest = u.to_vec();
        for i in (0..k).rev() {
            let vii = v[i * k + i];
            if rest[i].rem_euclid(vii) != 0 {
                return Some(false);
            }
            let q = rest[i].div_euclid(vii);
            if q != 0 {
                for c in 0..=i {
                    rest[c] = rest[c].checked_sub(q.checked_mul(v[i * k + c])?)?;
                }
            }
        }
        Some(true)
    }
}

/// Contiguous-chunk parallel map preserving item order in the output.
fn run_parallel<I, T, F>(threads: usize, items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync,
{
    let threads = threads.max(1);
    if threads == 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let chunk_size = items.len().div_ceil(threads);
    let mut chunks: Vec<Vec<I>> = Vec::new();
    let mut it = items.into_iter();
    loop {
        let chunk: Vec<I> = it.by_ref().take(chunk_size).collect();
        if chunk.is_empty() {
            break;
        }
        chunks.push(chunk);
    }
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| s.spawn(move || chunk.into_iter().map(f).collect::<Vec<T>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
    })
}

/// Visit all points of the sup-norm shell `|x| == r` in `dims` trailing
/// coordinates in lexicographic order; `touched` records whether an earlier
/// coordinate already attained `r`. Returns the first point accepted by
/// `visit`.
fn scan_shell_rec(
    prefix: &mut Vec<i128>,
    dims: usize,
    touched: bool,
    r: i128,
    visit: &mut impl FnMut(&[i128]) -> bool,
) -> bool {
    if dims == 0 {
        return visit(prefix);
    }
    if !touched && dims == 1 {
        for v in [-r, r] {
            prefix.push(v);
            let hit = visit(prefix);
            prefix.pop();
            if hit {
                return true;
            }
        }
        return false;
    }
    let mut v = -r;
    while v <= r {
        prefix.push(v);
        let hit = scan_shell_rec(prefix, dims - 1, touched || v.abs() == r, r, visit);
        prefix.pop();
        if hit {
            return true;
        }
        v += 1;
    }
    false
}

/// Split an inclusive range into at most `threads` contiguous chunks.
fn range_chunks(lo: i128, hi: i128, threads: usize) -> Vec<(i128, i128)> {
    if lo > hi {
        return Vec::new();
    }
    let parts = threads.max(1) as i128;
    let len = hi - lo + 1;
    let per = (len + parts - 1) / parts;
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + per - 1).min(hi);
        out.push((start, end));
        start = end + 1;
    }
    out
}

/// First `Some` produced over the range scanned in order, one worker per
/// contiguous chunk; each worker stops at its own first hit and the merge
/// respects range order, so the result is width-independent.
fn parallel_first<T, F>(threads: usize, lo: i128, hi: i128, f: F) -> Option<T>
where
    T: Send,
    F: Fn(i128) -> Option<T> + Sync,
{
    let chunks = range_chunks(lo, hi, threads);
    if chunks.len() <= 1 {
        let &(a, b) = chunks.first()?;
        return (a..=b).find_map(f);
    }
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> =
            chunks.into_iter().map(|(a, b)| s.spawn(move || (a..=b).find_map(f))).collect();
        handles.into_iter().filter_map(|h| h.join().expect("search worker panicked")).next()
    })
}

/// Minimal candidate produced over the range, one worker per contiguous
/// chunk, merged through the total (sup-norm, lex) order. Errors from any
/// chunk surface.
fn parallel_min<F>(
    threads: usize,
    lo: i128,
    hi: i128,
    f: F,
) -> Result<Option<Candidate>, SolveError>
where
    F: Fn(i128) -> Result<Option<Candidate>, SolveError> + Sync,
{
    let fold = |(a, b): (i128, i128)| -> Result<Option<Candidate>, SolveError> {
        let mut best: Option<Candidate> = None;
        for v in a..=b {
            if let Some(c) = f(v)? {
                if best.as_ref().is_none_or(|cur| c < *cur) {
                    best = Some(c);
                }
            }
        }
        Ok(best)
    };
    let chunks = range_chunks(lo, hi, threads);
    if chunks.len() <= 1 {
        return chunks.first().map_or(Ok(None), |&ch| fold(ch));
    }
    let fold = &fold;
    std::thread::scope(|s| {
        let handles: Vec<_> = chunks.into_iter().map(|ch| s.spawn(move || fold(ch))).collect();
        let mut best: Option<Candidate> = None;
        for h in handles {
            if let Some(c) = h.join().expect("search worker panicked")? {
                if best.as_ref().is_none_or(|cur| c < *cur) {
                    best = Some(c);
                }
            }
        }
        Ok(best)
    })
}

/// First point (in lexicographic order) of the shell `|x| == r` in `Z^n`
/// accepted by `pred`, searched with the given parallel width.
fn shell_first<F>(n: usize, r: i128, threads: usize, pred: &F) -> Option<Vec<i128>>
where
    F: Fn(&[i128]) -> bool + Sync,
{
    if r == 0 {
        let origin = vec![0i128; n];
        return pred(&origin).then_some(origin);
    }
    if n == 1 {
        return [-r, r].into_iter().find(|&v| pred(&[v])).map(|v| vec![v]);
    }
    parallel_first(threads, -r, r, |x0| {
        let mut prefix = vec![x0];
        let mut hit: Option<Vec<i128>> = None;
        scan_shell_rec(&mut prefix, n - 1, x0.abs() == r, r, &mut |x| {
            if pred(x) {
                hit = Some(x.to_vec());
                true
            } else {
                false
            }
        });
        hit
    })
}

fn shell_volume(n: usize, r: i128) -> Option<u128> {
    if r == 0 {
        return Some(1);
    }
    let width = 2u128.checked_mul(r as u128)?.checked_add(1)?;
    let full = width.checked_pow(n as u32)?;
    let inner = (width - 2).checked_pow(n as u32)?;
    Some(full - inner)
}

/// Minimal-sup-norm point of `Z^n` within `|x| <= radius` accepted by
/// `pred`, ties broken lexicographically. Shells are searched in order of
/// increasing radius so the first hit is minimal.
pub(crate) fn minimal_point_in_box<F>(
    n: usize,
    radius: i128,
    include_origin: bool,
    threads: usize,
    pred: F,
) -> Result<Option<Vec<i128>>, SolveError>
where
    F: Fn(&[i128]) -> bool + Sync,
{
    let start = if include_origin { 0 } else { 1 };
    let mut r = start;
    while r <= radius {
        if !shell_volume(n, r).is_some_and(|v| v <= MAX_BOX_POINTS) {
            return Err(SolveError::InputTooLarge(format!("shell of radius {r} in dimension {n}")));
        }
        if let Some(hit) = shell_first(n, r, threads, &pred) {
            return Ok(Some(hit));
        }
        r += 1;
    }
    Ok(None)
}

/// The zero of `q` of minimal sup-norm at most `radius`, ties broken
/// lexicographically on coordinates; `None` when no zero is in the box.
/// With `exclude_zero` the origin is never reported.
pub fn minimal_zero_in_box(
    q: &QuadraticPolynomial,
    radius: &BigInt,
    exclude_zero: bool,
    threads: usize,
) -> Result<Option<Vec<BigInt>>, SolveError> {
    if radius.is_negative() {
        return Ok(None);
    }
    let r = radius.to_i128().unwrap_or(i128::MAX);
    let poly = SmallPoly::of(q)
        .ok_or_else(|| SolveError::InputTooLarge("polynomial coefficients exceed i128".into()))?;
    let overflow = std::sync::atomic::AtomicBool::new(false);
    let found = minimal_point_in_box(q.dim(), r, !exclude_zero, threads, |x| match poly.eval(x) {
        Some(v) => v == 0,
        None => {
            overflow.store(true, std::sync::atomic::Ordering::Relaxed);
            false
        }
    })?;
    if overflow.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(SolveError::InputTooLarge("polynomial evaluation overflowed i128".into()));
    }
    Ok(found.map(|x| x.into_iter().map(BigInt::from).collect()))
}

// ---------------------------------------------------------------------------
// coefficient boxes

/// Per-coordinate bound on the coefficients of any lattice point within
/// ambient sup-norm `radius` of a center of sup-norm `center`:
/// `|u_j| <= sqrt(s_j * n) * (radius + center)`, rounded outward.
fn coeff_box_bounds(
    pinv_diag: &[BigRational],
    n: usize,
    center_plus_radius: &BigInt,
) -> Result<Vec<i128>, SolveError> {
    let mut bounds = Vec::with_capacity(pinv_diag.len());
    let reach = BigRational::from_integer(center_plus_radius * center_plus_radius)
        * BigRational::from_integer(BigInt::from(n as u64));
    for s in pinv_diag {
        let val = s * &reach;
        let ceil = val.ceil().to_integer();
        let b: BigInt = isqrt_floor(&ceil) + 1;
        let b = b
            .to_i128()
            .ok_or_else(|| SolveError::InputTooLarge("coefficient box exceeds i128".into()))?;
        bounds.push(b);
    }
    bounds
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(2 * b as u128 + 1))
        .filter(|&v| v <= MAX_BOX_POINTS)
        .ok_or_else(|| SolveError::InputTooLarge("coefficient box volume".into()))?;
    Ok(bounds)
}

/// Candidate ordered by (sup-norm, ambient lex).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    sup: i128,
    point: Vec<i128>,
    coeffs: Vec<i128>,
}

/// Scan one coefficient box slice (first coefficient fixed), returning the
/// minimal candidate passing all filters with `lo < |z| <= hi`.
#[allow(clippy::too_many_arguments)]
fn scan_coeff_slice(
    first: i128,
    bounds: &[i128],
    basis: &[i128], // n x k ambient basis, row-major
    n: usize,
    offset: Option<&[i128]>,
    lo: i128,
    hi: i128,
    accept: Accept<'_>,
) -> Result<Option<Candidate>, SolveError> {
    let k = bounds.len();
    let mut coeffs = vec![0i128; k];
    coeffs[0] = first;
    for c in 1..k {
        coeffs[c] = -bounds[c];
    }
    let mut best: Option<Candidate> = None;
    let mut point = vec![0i128; n];
    loop {
        // z = offset + B u, checked
        let mut ok = true;
        for r in 0..n {
            let mut acc: i128 = offset.map_or(0, |o| o[r]);
            for c in 0..k {
                match basis[r * k + c].checked_mul(coeffs[c]).and_then(|p| acc.checked_add(p)) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                return Err(SolveError::InputTooLarge("ambient point overflowed i128".into()));
            }
            point[r] = acc;
        }
        let sup = sup_i128(&point);
        if sup > lo && sup <= hi {
            match accept(&coeffs, &point) {
                Some(true) => {
                    let cand = Candidate { sup, point: point.clone(), coeffs: coeffs.clone() };
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
                Some(false) => {}
                None => return Err(SolveError::InputTooLarge("evaluation overflowed i128".into())),
            }
        }
        // odometer over coefficients 1..k (coefficient 0 is fixed)
        let mut pos = k;
        loop {
            if pos == 1 {
                return Ok(best);
            }
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] <= bounds[pos] {
                break;
            }
            coeffs[pos] = -bounds[pos];
        }
    }
}

/// Staged annulus search over an affine sublattice `{offset + B u}`.
/// Returns the candidate with minimal (sup-norm, ambient lex) among points
/// with `lo < |z| <= hi` passing `accept`.
#[allow(clippy::too_many_arguments)]
fn search_stage(
    pinv_diag: &[BigRational],
    basis_small: &[i128],
    n: usize,
    offset: Option<&[i128]>,
    center_sup: &BigInt,
    lo: i128,
    hi: i128,
    threads: usize,
    accept: Accept<'_>,
) -> Result<Option<Candidate>, SolveError> {
    let reach = center_sup + BigInt::from(hi);
    let bounds = coeff_box_bounds(pinv_diag, n, &reach)?;
    parallel_min(threads, -bounds[0], bounds[0], |first| {
        scan_coeff_slice(first, &bounds, basis_small, n, offset, lo, hi, accept)
    })
}

/// Radii for the staged annulus search: powers of two capped at `r_max`.
fn stages(r_max: i128) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    let mut lo = 0i128;
    let mut hi = 1i128;
    while lo < r_max {
        let capped = hi.min(r_max);
        out.push((lo, capped));
        lo = capped;
        hi = hi.saturating_mul(2);
    }
    out
}

fn radius_to_i128(r: &BigInt) -> i128 {
    if r.is_negative() {
        0
    } else {
        r.to_i128().unwrap_or(i128::MAX)
    }
}

// ---------------------------------------------------------------------------
// brute-force oracle

/// Basis used for sizing enumeration boxes: the certified reduced basis
/// when one is available, the original otherwise. The enumerated point set
/// is the whole lattice either way, so results do not depend on the choice.
fn conditioned(lat: &Lattice) -> (Lattice, IntMatrix) {
    match reduced_basis_with_transform(lat) {
        Ok(pair) => pair,
        Err(_) => (lat.clone(), IntMatrix::identity(lat.rank())),
    }
}

/// Direct enumeration of all lattice points with ambient sup-norm at most
/// `radius`: keep nonzero points outside every sublattice, optionally
/// filtered to zeros of `require_zero_of`, and return the minimal one under
/// (sup-norm, ambient lex). Exists to cross-check the pipeline.
fn bruteforce_search(
    system: &SublatticeSystem,
    require_zero_of: Option<&QuadraticPolynomial>,
    radius: &BigInt,
    threads: usize,
) -> Result<Option<SearchResult>, SolveError> {
    let (cond, transform) = conditioned(system.parent());
    let system = &system.rebased(cond, &transform)?;
    let lat = system.parent();
    let n = lat.ambient_dim();
    let poly = match require_zero_of {
        Some(q) => {
            if q.dim() != n {
                return Err(SolveError::DimensionMismatch);
            }
            Some(SmallPoly::of(q).ok_or_else(|| {
                SolveError::InputTooLarge("polynomial coefficients exceed i128".into())
            })?)
        }
        None => None,
    };
    let testers: Vec<CoeffTester> =
        system.coeffs().iter().map(CoeffTester::of_coeff_matrix).collect::<Result<_, _>>()?;
    let basis_small = matrix_i128(lat.basis())
        .ok_or_else(|| SolveError::InputTooLarge("basis entries exceed i128".into()))?;
    let pinv = lat.pinv_diag_sq();
    let accept = |coeffs: &[i128], point: &[i128]| -> Option<bool> {
        if point.iter().all(|&v| v == 0) {
            return Some(false);
        }
        if let Some(p) = &poly {
            if p.eval(point)? != 0 {
                return Some(false);
            }
        }
        Some(testers.iter().all(|t| !t.contains(coeffs)))
    };
    let r_max = radius_to_i128(radius);
    for (lo, hi) in stages(r_max) {
        let found = search_stage(
            &pinv,
            &basis_small,
            n,
            None,
            &BigInt::zero(),
            lo,
            hi,
            threads,
            &accept,
        )?;
        if let Some(c) = found {
            return Ok(Some(SearchResult {
                point: c.point.iter().map(|&v| BigInt::from(v)).collect(),
                sup_norm: BigInt::from(c.sup),
                coset_index: None,
                certificates: Vec::new(),
            }));
        }
    }
    Ok(None)
}

/// Brute-force minimal zero of the instance polynomial on the lattice,
/// avoiding the union of sublattices. `m = 0` degenerates to the plain
/// minimal nontrivial zero on the lattice.
pub fn bruteforce_avoiding_zero(
    inst: &Instance,
    radius: &BigInt,
    threads: usize,
) -> Result<Option<SearchResult>, SolveError> {
    bruteforce_search(inst.system(), Some(inst.poly()), radius, threads)
}

/// Brute-force minimal nonzero lattice point outside the union.
pub fn bruteforce_outside_point(
    system: &SublatticeSystem,
    radius: &BigInt,
    threads: usize,
) -> Result<Option<SearchResult>, SolveError> {
    bruteforce_search(system, None, radius, threads)
}

// ---------------------------------------------------------------------------
// the avoiding-zero pipeline

/// Data shared by the pipeline entry points after reduction and
/// intersection.
struct PipelineBase {
    reduced: Lattice,
    relation: IntMatrix,
    index: BigInt,
    reps: Vec<Vec<BigInt>>,
    /// Indices (into `reps`) of representatives outside the union.
    admissible: Vec<usize>,
}

fn pipeline_base(system: &SublatticeSystem) -> Result<PipelineBase, SolveError> {
    if system.is_empty() {
        return Err(SolveError::EmptySystem);
    }
    let (reduced, c) = reduced_basis_with_transform(system.parent())?;
    let rebased = system.rebased(reduced.clone(), &c)?;
    let relation = intersect_sublattices(&rebased)?;
    let index = crate::intmat::det_exact(&relation).expect("relation is square");
    if index.to_u64().is_none_or(|d| d > MAX_PIPELINE_COSETS) {
        return Err(SolveError::InputTooLarge(format!("{index} cosets")));
    }
    let dec = coset_representatives(&relation);
    let testers: Vec<CoeffTester> =
        rebased.coeffs().iter().map(CoeffTester::of_coeff_matrix).collect::<Result<_, _>>()?;
    let mut admissible = Vec::new();
    'reps: for (i, rep) in dec.reps.iter().enumerate() {
        let small = to_i128_vec(rep).expect("representative coordinates are below the index");
        for t in &testers {
            if t.contains(&small) {
                continue 'reps;
            }
        }
        admissible.push(i);
    }
    Ok(PipelineBase { reduced, relation, index, reps: dec.reps, admissible })
}

/// The avoiding-zero pipeline: reduce the basis, intersect the sublattices,
/// enumerate coset representatives, discard those inside the union,
/// restrict the polynomial to each surviving coset and search all of them
/// to the same ambient radius, returning the global minimum under
/// (sup-norm, ambient lex).
pub fn find_avoiding_zero(
    inst: &Instance,
    r_max: &BigInt,
    threads: usize,
) -> Result<AvoidReport, SolveError> {
    if !inst.poly().is_regular() {
        return Err(SolveError::NotRegular);
    }
    if inst.system().is_empty() {
        return Err(SolveError::EmptySystem);
    }
    if !inst.system().all_proper() {
        return Err(SolveError::ImproperSublattice);
    }
    let base = pipeline_base(inst.system())?;
    let k = base.reduced.rank();
    let n = base.reduced.ambient_dim();
    if base.admissible.is_empty() {
        return Ok(AvoidReport {
            result: None,
            index: base.index,
            admissible_cosets: 0,
            singular_cosets: Vec::new(),
            union_covers: true,
        });
    }

    // ambient basis of the intersection sublattice, reconditioned for
    // search-box sizing (any basis of the intersection works here, and a
    // reduced one only sharpens the height bound on the restrictions)
    let omega_lat = Lattice::new(base.reduced.sublattice_basis(&base.relation))?;
    let (omega_lat, _) = conditioned(&omega_lat);
    let omega_basis = omega_lat.basis().clone();
    let pinv = omega_lat.pinv_diag_sq();
    let basis_small = matrix_i128(&omega_basis)
        .ok_or_else(|| SolveError::InputTooLarge("sublattice basis exceeds i128".into()))?;

    struct Coset {
        rep_index: usize,
        offset: Vec<i128>,
        offset_sup: BigInt,
        restricted: Option<SmallPoly>, // None: singular, evaluate ambient Q
        rep_sup: BigInt,
    }

    let ambient_poly = SmallPoly::of(inst.poly())
        .ok_or_else(|| SolveError::InputTooLarge("polynomial coefficients exceed i128".into()))?;
    let mut cosets = Vec::with_capacity(base.admissible.len());
    let mut singular_cosets = Vec::new();
    for &i in &base.admissible {
        let rep = &base.reps[i];
        let c_amb = base.reduced.to_ambient(rep);
        let g = inst.poly().restrict(&omega_basis, &c_amb)?;
        let restricted = if g.is_regular() {
            Some(SmallPoly::of(&g).ok_or_else(|| {
                SolveError::InputTooLarge("restricted polynomial exceeds i128".into())
            })?)
        } else {
            singular_cosets.push(i);
            None
        };
        let offset = to_i128_vec(&c_amb)
            .ok_or_else(|| SolveError::InputTooLarge("coset offset exceeds i128".into()))?;
        let offset_sup = c_amb.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero);
        let rep_sup = offset_sup.clone();
        cosets.push(Coset { rep_index: i, offset, offset_sup, restricted, rep_sup });
    }

    let r_max_i = radius_to_i128(r_max);
    for (lo, hi) in stages(r_max_i) {
        // search every admissible coset to the same ambient radius, in
        // parallel, and merge by the shared total order
        let stage_results = run_parallel(threads, cosets.iter().collect::<Vec<_>>(), |coset| {
            let accept = |coeffs: &[i128], point: &[i128]| -> Option<bool> {
                match &coset.restricted {
                    Some(g) => Some(g.eval(coeffs)? == 0),
                    None => Some(ambient_poly.eval(point)? == 0),
                }
            };
            search_stage(
                &pinv,
                &basis_small,
                n,
                Some(&coset.offset),
                &coset.offset_sup,
                lo,
                hi,
                1, // parallelism is across cosets here
                &accept,
            )
            .map(|c| c.map(|c| (c, coset.rep_index, coset.rep_sup.clone())))
        });
        let mut best: Option<(Candidate, usize, BigInt)> = None;
        for r in stage_results {
            if let Some((c, rep_index, rep_sup)) = r? {
                if best.as_ref().is_none_or(|(b, _, _)| c < *b) {
                    best = Some((c, rep_index, rep_sup));
                }
            }
        }
        if let Some((cand, rep_index, rep_sup)) = best {
            let z_sup = BigInt::from(cand.sup);
            let zp_sup = BigInt::from(sup_i128(&cand.coeffs));
            let b_max = omega_basis.max_abs();
            let kk = BigInt::from(k as u64);
            // |z| <= |c_i| + k |B| |z'|
            let assembly = z_sup <= (&rep_sup + &kk * &b_max * &zp_sup);
            // squared: |z|^2 <= (4/3)^(k(k-1)) k^2 d^2 Delta^2 (1 + k|z'|)^2
            let det_omega_sq = &base.index * &base.index * base.reduced.gram_determinant();
            let reach = BigInt::one() + &kk * &zp_sup;
            let rhs = outside_point_bound_sq(&det_omega_sq, k)
                * BigRational::from_integer(&reach * &reach);
            let assembly_sq = BigRational::from_integer(&z_sup * &z_sup) <= rhs;
            return Ok(AvoidReport {
                result: Some(SearchResult {
                    point: cand.point.iter().map(|&v| BigInt::from(v)).collect(),
                    sup_norm: z_sup,
                    coset_index: Some(rep_index),
                    certificates: vec![
                        BoundCheck { kind: BoundKind::Assembly, holds: assembly },
                        BoundCheck { kind: BoundKind::AssemblySquared, holds: assembly_sq },
                    ],
                }),
                index: base.index,
                admissible_cosets: cosets.len(),
                singular_cosets,
                union_covers: false,
            });
        }
    }
    Ok(AvoidReport {
        result: None,
        index: base.index,
        admissible_cosets: cosets.len(),
        singular_cosets,
        union_covers: false,
    })
}

/// The outside-point construction: among the coset representatives of the
/// intersection (over the reduced basis), return the one outside the union
/// with minimal ambient sup-norm, ties lexicographic. Its norm is checked
/// against the squared outside-point bound.
pub fn point_outside_union(system: &SublatticeSystem) -> Result<SearchResult, SolveError> {
    if system.is_empty() {
        return Err(SolveError::EmptySystem);
    }
    let base = pipeline_base(system)?;
    if base.admissible.is_empty() {
        return Err(SolveError::CoveredByUnion);
    }
    let k = base.reduced.rank();
    let mut best: Option<(BigInt, Vec<BigInt>, usize)> = None;
    for &i in &base.admissible {
        let z = base.reduced.to_ambient(&base.reps[i]);
        let sup = z.iter().map(|v| v.abs()).max().expect("ambient dim > 0");
        let key = (sup, z);
        if best.as_ref().is_none_or(|(bs, bz, _)| (&key.0, &key.1) < (bs, bz)) {
            best = Some((key.0, key.1, i));
        }
    }
    let (sup, point, rep_index) = best.expect("admissible set nonempty");
    let det_omega_sq = &base.index * &base.index * base.reduced.gram_determinant();
    let holds = BigRational::from_integer(&sup * &sup) <= outside_point_bound_sq(&det_omega_sq, k);
    Ok(SearchResult {
        point,
        sup_norm: sup,
        coset_index: Some(rep_index),
        certificates: vec![BoundCheck { kind: BoundKind::OutsidePoint, holds }],
    })
}

/// `det(S)^2 = d^2 * Delta^2` of the intersection sublattice of the system,
/// together with the relation matrix (over the original basis) and the
/// index. Convenience for reports.
pub fn intersection_data(system: &SublatticeSystem) -> Result<(IntMatrix, BigInt, BigInt), SolveError> {
    let relation = intersect_sublattices(system)?;
    let index = crate::intmat::det_exact(&relation).expect("relation is square");
    let det_omega_sq = &index * &index * system.parent().gram_determinant();
    Ok((relation, index, det_omega_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::Rng64;
    use crate::lattice::first_minimum_sup;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn biv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    fn poly(f: &[&[i64]], l: &[i64], t: i64) -> QuadraticPolynomial {
        QuadraticPolynomial::new(IntMatrix::from_i64(f), biv(l), bi(t)).unwrap()
    }

    fn z2_system(subs: &[&[&[i64]]]) -> SublatticeSystem {
        SublatticeSystem::new(
            Lattice::standard(2),
            subs.iter().map(|m| IntMatrix::from_i64(m)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn minimal_zero_examples() {
        // x1^2 - x2^2: all norm-1 zeros are (+-1,+-1); lexicographic minimum
        let q = poly(&[&[1, 0], &[0, -1]], &[0, 0], 0);
        let z = minimal_zero_in_box(&q, &bi(3), true, 1).unwrap().unwrap();
        assert_eq!(z, biv(&[-1, -1]));

        // positive definite plus positive constant: no zero
        let q = poly(&[&[1, 0], &[0, 1]], &[0, 0], 1);
        assert_eq!(minimal_zero_in_box(&q, &bi(10), true, 1).unwrap(), None);

        // x1^2 + x2^2 - 2: zeros at (+-1,+-1)
        let q = poly(&[&[1, 0], &[0, 1]], &[0, 0], -2);
        let z = minimal_zero_in_box(&q, &bi(1), true, 1).unwrap().unwrap();
        assert_eq!(z, biv(&[-1, -1]));
    }

    #[test]
    fn minimal_zero_origin_handling() {
        let q = poly(&[&[1, 0], &[0, -1]], &[0, 0], 0);
        let z = minimal_zero_in_box(&q, &bi(2), false, 1).unwrap().unwrap();
        assert_eq!(z, biv(&[0, 0]));
        assert_eq!(minimal_zero_in_box(&q, &bi(-1), true, 1).unwrap(), None);
    }

    #[test]
    fn minimal_zero_thread_invariance() {
        let q = poly(&[&[1, 0, 0], &[0, -2, 1], &[0, 1, 1]], &[1, 0, -1], -3);
        let a = minimal_zero_in_box(&q, &bi(6), true, 1).unwrap();
        let b = minimal_zero_in_box(&q, &bi(6), true, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn avoid_zero_worked_example() {
        // Z^2, union = 2Z^2, Q = x1^2 - x2^2: minimal avoiding zero (-1,-1)
        let system = z2_system(&[&[&[2, 0], &[0, 2]]]);
        let inst = Instance::new(system, poly(&[&[1, 0], &[0, -1]], &[0, 0], 0)).unwrap();
        let rep = find_avoiding_zero(&inst, &bi(3), 1).unwrap();
        let res = rep.result.unwrap();
        assert_eq!(res.point, biv(&[-1, -1]));
        assert_eq!(res.sup_norm, bi(1));
        assert!(res.certificates.iter().all(|c| c.holds));
        assert_eq!(rep.index, bi(4));
        assert_eq!(rep.admissible_cosets, 3);
    }

    #[test]
    fn avoid_zero_parity_obstruction() {
        // union = {x : x1 + x2 even}: every zero (a, +-a) has even sum
        let system = z2_system(&[&[&[1, 1], &[0, 2]]]);
        let inst = Instance::new(system, poly(&[&[1, 0], &[0, -1]], &[0, 0], 0)).unwrap();
        let rep = find_avoiding_zero(&inst, &bi(10), 1).unwrap();
        assert!(rep.result.is_none());
        assert!(!rep.union_covers);
        // brute force agrees
        let system = z2_system(&[&[&[1, 1], &[0, 2]]]);
        let inst = Instance::new(system, poly(&[&[1, 0], &[0, -1]], &[0, 0], 0)).unwrap();
        assert!(bruteforce_avoiding_zero(&inst, &bi(10), 1).unwrap().is_none());
    }

    #[test]
    fn avoid_zero_inhomogeneous_example() {
        // Q = x1^2 + x2^2 - 2 x1, zeros (0,0),(2,0),(1,+-1); avoiding 2Z^2
        // leaves (1,+-1); lexicographic minimum (1,-1)
        let system = z2_system(&[&[&[2, 0], &[0, 2]]]);
        let inst = Instance::new(system, poly(&[&[1, 0], &[0, 1]], &[-2, 0], 0)).unwrap();
        let rep = find_avoiding_zero(&inst, &bi(3), 1).unwrap();
        assert_eq!(rep.result.unwrap().point, biv(&[1, -1]));
    }

    #[test]
    fn avoid_zero_rejects_bad_inputs() {
        let system = z2_system(&[&[&[2, 0], &[0, 2]]]);
        let sing = Instance::new(system, poly(&[&[1, 1], &[1, 1]], &[0, 0], 0)).unwrap();
        assert_eq!(find_avoiding_zero(&sing, &bi(3), 1).unwrap_err(), SolveError::NotRegular);

        let improper = z2_system(&[&[&[1, 0], &[0, 1]]]);
        let inst = Instance::new(improper, poly(&[&[1, 0], &[0, -1]], &[0, 0], 0)).unwrap();
        assert_eq!(
            find_avoiding_zero(&inst, &bi(3), 1).unwrap_err(),
            SolveError::ImproperSublattice
        );

        let empty = SublatticeSystem::new(Lattice::standard(2), vec![]).unwrap();
        let inst = Instance::new(empty, poly(&[&[1, 0], &[0, -1]], &[0, 0], 0)).unwrap();
        assert_eq!(find_avoiding_zero(&inst, &bi(3), 1).unwrap_err(), SolveError::EmptySystem);
    }

    #[test]
    fn bruteforce_degenerate_cases() {
        // m = 0: plain minimal nontrivial zero on the lattice
        let empty = SublatticeSystem::new(Lattice::standard(2), vec![]).unwrap();
        let inst = Instance::new(empty, poly(&[&[1, 0], &[0, -1]], &[0, 0], 0)).unwrap();
        let res = bruteforce_avoiding_zero(&inst, &bi(3), 1).unwrap().unwrap();
        assert_eq!(res.point, biv(&[-1, -1]));

        // radius 0: nothing (the origin is excluded)
        let system = z2_system(&[&[&[2, 0], &[0, 2]]]);
        let inst = Instance::new(system, poly(&[&[1, 0], &[0, -1]], &[0, 0], 0)).unwrap();
        assert!(bruteforce_avoiding_zero(&inst, &bi(0), 1).unwrap().is_none());
    }

    #[test]
    fn outside_point_examples() {
        // 2Z^2: representatives outside are (0,1),(1,0),(1,1); min is (0,1)
        let res = point_outside_union(&z2_system(&[&[&[2, 0], &[0, 2]]])).unwrap();
        assert_eq!(res.point, biv(&[0, 1]));
        assert!(res.certificates[0].holds);

        // 3Z^2: nine representatives, minimum (0,1)
        let res = point_outside_union(&z2_system(&[&[&[3, 0], &[0, 3]]])).unwrap();
        assert_eq!(res.point, biv(&[0, 1]));

        // three index-2 sublattices covering Z^2
        let covered = z2_system(&[
            &[&[2, 0], &[0, 1]], // x1 even
            &[&[1, 0], &[0, 2]], // x2 even
            &[&[1, 1], &[0, 2]], // x1 + x2 even
        ]);
        assert_eq!(point_outside_union(&covered).unwrap_err(), SolveError::CoveredByUnion);
    }

    #[test]
    fn singular_restrictions_fall_back_to_ambient_search() {
        // rank-2 lattice in Z^3 whose intersection basis is degenerate for
        // the form: every restricted polynomial is singular, so all cosets
        // go through the direct ambient evaluation path
        let parent = Lattice::new(IntMatrix::from_i64(&[&[1, 0], &[1, 0], &[0, 1]])).unwrap();
        let system =
            SublatticeSystem::new(parent, vec![IntMatrix::from_i64(&[&[2, 0], &[0, 2]])]).unwrap();
        let q = poly(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]], &[0, 0, 0], 0);
        let inst = Instance::new(system, q).unwrap();
        let rep = find_avoiding_zero(&inst, &bi(4), 1).unwrap();
        assert_eq!(rep.singular_cosets.len(), 3);
        let res = rep.result.unwrap();
        assert_eq!(res.point, biv(&[-1, -1, 0]));
        assert_eq!(res.sup_norm, bi(1));
        assert!(res.certificates.iter().all(|c| c.holds));
        // brute force agrees on the degenerate-restriction instance
        let bf = bruteforce_avoiding_zero(&inst, &bi(4), 1).unwrap().unwrap();
        assert_eq!(bf.point, res.point);
    }

    #[test]
    fn oracle_equivalence_random_small() {
        let mut rng = Rng64::new(1234);
        let mut tested = 0;
        while tested < 12 {
            let k = 2 + (rng.below(2) as usize);
            let parent = crate::gen::random_parent(&mut rng, k, k);
            let m = 1 + rng.below(2) as usize;
            let system = crate::gen::random_system(&mut rng, parent, m, 4);
            let q = crate::gen::random_regular_quadratic(&mut rng, k, 4);
            let inst = Instance::new(system, q).unwrap();
            let bf = bruteforce_avoiding_zero(&inst, &bi(8), 1).unwrap();
            let Some(bf) = bf else { continue };
            let pipe = find_avoiding_zero(&inst, &bi(8), 1).unwrap();
            let pipe = pipe.result.expect("pipeline must find what brute force found");
            assert_eq!(pipe.point, bf.point, "instance #{tested}");
            assert_eq!(pipe.sup_norm, bf.sup_norm);
            // avoidance soundness
            assert_eq!(inst.poly().evaluate(&pipe.point).unwrap(), bi(0));
            let coords = inst.lattice().coeffs_of_ambient(&pipe.point).unwrap();
            for mj in inst.system().coeffs() {
                assert!(!crate::lattice::member(mj, &coords).unwrap());
            }
            tested += 1;
        }
    }

    #[test]
    fn pipeline_thread_invariance() {
        let system = SublatticeSystem::new(
            Lattice::standard(3),
            vec![
                IntMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0], &[1, 0, 2]]),
                IntMatrix::from_i64(&[&[1, 1, 0], &[0, 2, 0], &[0, 0, 1]]),
            ],
        )
        .unwrap();
        let q = poly(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]], &[0, 0, -1], 0);
        let inst = Instance::new(system, q).unwrap();
        let a = find_avoiding_zero(&inst, &bi(6), 1).unwrap();
        let b = find_avoiding_zero(&inst, &bi(6), 4).unwrap();
        assert_eq!(a.result, b.result);
    }

    #[test]
    fn henk_thiel_consistency_worked_case() {
        // 2Z^2 in Z^2: minimal outside point has norm 1, bound is 5/2
        let system = z2_system(&[&[&[2, 0], &[0, 2]]]);
        let res = bruteforce_outside_point(&system, &bi(5), 1).unwrap().unwrap();
        assert_eq!(res.sup_norm, bi(1));
        let (relation, index, det_sq) = intersection_data(&system).unwrap();
        let omega = Lattice::new(system.parent().sublattice_basis(&relation)).unwrap();
        let lambda1 = first_minimum_sup(&omega);
        assert_eq!(lambda1, bi(2));
        let ht = crate::bounds::henk_thiel_bound(&det_sq, &lambda1, 2, system.indices(), &index);
        let bound = ht.exact.unwrap();
        assert_eq!(bound, BigRational::new(bi(5), bi(2)));
        assert!(BigRational::from_integer(res.sup_norm) < bound);
    }
}
