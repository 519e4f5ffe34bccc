//! Lattices in `Z^n`, finite-index sublattice systems, intersections,
//! coset enumeration, certified short bases and first minima.
//!
//! Conventions. A lattice stores its basis as the columns of an `n x k`
//! integer matrix. A sublattice of a rank-`k` lattice is given by a
//! nonsingular `k x k` coefficient matrix whose *rows* are the parent
//! coordinates of a sublattice basis; the sublattice itself is the set of
//! integer row-combinations of those rows, mapped through the parent basis.
//! Intersections are returned as lower-triangular relation matrices with
//! positive diagonal and reduced subdiagonal entries, so the coset count is
//! the product of the diagonal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::intmat::{
    adjugate, det_exact, hnf_lower, integer_kernel, unimodular_inverse, IntMatrix, MatError,
};

/// Hard cap on materialized coset representatives.
const MAX_REPS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// Rank must satisfy 2 <= k <= n.
    RankOutOfRange { rank: usize, ambient: usize },
    /// Basis columns are linearly dependent.
    DependentColumns,
    /// A sublattice coefficient matrix is singular.
    SingularSublattice,
    /// A sublattice has index 1 where a proper one is required.
    ImproperSublattice,
    /// Exhaustive basis reduction is only available for rank <= 4.
    RankTooLarge { rank: usize },
    /// The reduced basis failed its product-bound certificate (internal).
    ReductionFailed,
    /// Shape mismatch between an operand and the lattice.
    DimensionMismatch,
    /// Relation matrix is not in lower normal form.
    NotNormalForm,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::RankOutOfRange { rank, ambient } => {
                write!(f, "rank {rank} out of range for ambient dimension {ambient} (need 2 <= k <= n)")
            }
            LatticeError::DependentColumns => write!(f, "basis columns are linearly dependent"),
            LatticeError::SingularSublattice => write!(f, "sublattice coefficient matrix is singular"),
            LatticeError::ImproperSublattice => write!(f, "sublattice has index 1 (not proper)"),
            LatticeError::RankTooLarge { rank } => {
                write!(f, "exhaustive basis reduction supports rank <= 4, got {rank}")
            }
            LatticeError::ReductionFailed => write!(f, "reduced basis failed the product-bound certificate"),
            LatticeError::DimensionMismatch => write!(f, "dimension mismatch"),
            LatticeError::NotNormalForm => write!(f, "relation matrix is not in lower normal form"),
        }
    }
}

impl std::error::Error for LatticeError {}

impl From<MatError> for LatticeError {
    fn from(e: MatError) -> Self {
        match e {
            MatError::RankDeficient => LatticeError::SingularSublattice,
            _ => LatticeError::DimensionMismatch,
        }
    }
}

/// Full-rank lattice of rank `k` in `Z^n`, basis vectors as columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    gram_det: BigInt,
}

impl Lattice {
    pub fn new(basis: IntMatrix) -> Result<Self, LatticeError> {
        let n = basis.rows();
        let k = basis.cols();
        if k < 2 || k > n {
            return Err(LatticeError::RankOutOfRange { rank: k, ambient: n });
        }
        let gram_det = det_exact(&basis.gram()).expect("gram matrix is square");
        if !gram_det.is_positive() {
            return Err(LatticeError::DependentColumns);
        }
        Ok(Lattice { basis, gram_det })
    }

    /// The standard lattice `Z^n`.
    pub fn standard(n: usize) -> Self {
        Lattice::new(IntMatrix::identity(n)).expect("identity basis is valid for n >= 2")
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// det(A^T A) = det(Lattice)^2, always a positive integer.
    pub fn gram_determinant(&self) -> &BigInt {
        &self.gram_det
    }

    /// Map coefficient coordinates to the ambient point `A u`.
    pub fn to_ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis.mul_vec(coords)
    }

    /// Ambient basis matrix `A V^T` of the sublattice whose relation rows
    /// are given by `v` (columns are the sublattice basis vectors).
    pub fn sublattice_basis(&self, v: &IntMatrix) -> IntMatrix {
        self.basis.mul(&v.transpose())
    }

    /// Exact coefficients of an ambient point, or `None` when the point is
    /// not on the lattice.
    pub fn coeffs_of_ambient(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        if x.len() != self.ambient_dim() {
            return None;
        }
        // w = (A^T A)^-1 A^T x, computed as adj(G) A^T x / det(G)
        let g = self.basis.gram();
        let adj = adjugate(&g).expect("gram is square");
        let atx = self.basis.transpose().mul_vec(x);
        let num = adj.mul_vec(&atx);
        let mut w = Vec::with_capacity(self.rank());
        for v in num {
            let (q, r) = v.div_rem(&self.gram_det);
            if !r.is_zero() {
                return None;
            }
            w.push(q);
        }
        // for n > k the normal equations can solve points off the column
        // span; confirm the reconstruction
        if self.basis.mul_vec(&w) == x { Some(w) } else { None }
    }

    /// Diagonal of `(A^T A)^-1` as exact rationals. For any ambient `x = Au`
    /// the coefficients obey `u_j^2 <= s_j * ||x||^2`, which is what sizes
    /// every enumeration box in the crate.
    pub fn pinv_diag_sq(&self) -> Vec<BigRational> {
        let g = self.basis.gram();
        let adj = adjugate(&g).expect("gram is square");
        (0..self.rank())
            .map(|j| BigRational::new(adj.get(j, j).clone(), self.gram_det.clone()))
            .collect()
    }
}

/// A parent lattice together with finite-index sublattices given in parent
/// coordinates.
#[derive(Debug, Clone)]
pub struct SublatticeSystem {
    parent: Lattice,
    coeffs: Vec<IntMatrix>,
    indices: Vec<BigInt>,
}

impl SublatticeSystem {
    pub fn new(parent: Lattice, coeffs: Vec<IntMatrix>) -> Result<Self, LatticeError> {
        let k = parent.rank();
        let mut indices = Vec::with_capacity(coeffs.len());
        for m in &coeffs {
            if m.rows() != k || m.cols() != k {
                return Err(LatticeError::DimensionMismatch);
            }
            let d = det_exact(m)?.abs();
            if d.is_zero() {
                return Err(LatticeError::SingularSublattice);
            }
            indices.push(d);
        }
        Ok(SublatticeSystem { parent, coeffs, indices })
    }

    pub fn parent(&self) -> &Lattice {
        &self.parent
    }

    pub fn coeffs(&self) -> &[IntMatrix] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Indices `d_j = [parent : sublattice_j] = |det M_j|`.
    pub fn indices(&self) -> &[BigInt] {
        &self.indices
    }

    pub fn all_proper(&self) -> bool {
        self.indices.iter().all(|d| d > &BigInt::one())
    }

    /// Rewrite the coefficient matrices after a basis change of the parent:
    /// if `A' = A C`, coordinates transform by `u' = C^-1 u` and each
    /// coefficient matrix becomes `M (C^-1)^T`.
    pub fn rebased(&self, new_parent: Lattice, c: &IntMatrix) -> Result<Self, LatticeError> {
        let cinv = unimodular_inverse(c)?;
        let cinv_t = cinv.transpose();
        let coeffs = self.coeffs.iter().map(|m| m.mul(&cinv_t)).collect();
        SublatticeSystem::new(new_parent, coeffs)
    }
}

/// Triangular relation matrix of a finite-index sublattice plus its coset
/// representatives in parent coordinates, zero first, lexicographic.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    pub relation: IntMatrix,
    pub index: BigInt,
    pub reps: Vec<Vec<BigInt>>,
}

/// True iff `u` is an integer combination of the rows of the nonsingular
/// square matrix `m` (i.e. the coordinate vector lies on the sublattice).
pub fn member(m: &IntMatrix, u: &[BigInt]) -> Result<bool, LatticeError> {
    if !m.is_square() || m.rows() != u.len() {
        return Err(LatticeError::DimensionMismatch);
    }
    let (v, _) = hnf_lower(m).map_err(|_| LatticeError::SingularSublattice)?;
    Ok(member_normal_form(&v, u))
}

/// Membership test against a relation matrix already in lower normal form.
pub fn member_normal_form(v: &IntMatrix, u: &[BigInt]) -> bool {
    let k = v.rows();
    let mut rest: Vec<BigInt> = u.to_vec();
    for i in (0..k).rev() {
        let (q, r) = rest[i].div_rem(v.get(i, i));
        if !r.is_zero() {
            return false;
        }
        for c in 0..=i {
            rest[c] = &rest[c] - &q * v.get(i, c);
        }
    }
    true
}

/// Relation matrix (lower normal form) of the intersection of the row
/// lattices of the given nonsingular matrices.
pub fn intersect_matrices(mats: &[IntMatrix]) -> Result<IntMatrix, LatticeError> {
    let first = mats.first().ok_or(LatticeError::DimensionMismatch)?;
    let k = first.rows();
    for m in mats {
        if !m.is_square() || m.rows() != k {
            return Err(LatticeError::DimensionMismatch);
        }
        if det_exact(m)?.is_zero() {
            return Err(LatticeError::SingularSublattice);
        }
    }
    let mut acc = hnf_lower(first).map_err(|_| LatticeError::SingularSublattice)?.0;
    for m in &mats[1..] {
        acc = intersect_pair(&acc, m)?;
    }
    Ok(acc)
}

/// Intersection of two row lattices via the integer kernel of the stacked
/// block `(P^T | -M^T)`.
fn intersect_pair(p: &IntMatrix, m: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let k = p.rows();
    let pt = p.transpose();
    let mt = m.transpose();
    let mut block = IntMatrix::zero(k, 2 * k);
    for r in 0..k {
        for c in 0..k {
            block.set(r, c, pt.get(r, c).clone());
            block.set(r, k + c, -mt.get(r, c).clone());
        }
    }
    let ker = integer_kernel(&block);
    debug_assert_eq!(ker.rows(), k, "kernel of the intersection block must have rank k");
    let rows: Vec<Vec<BigInt>> = (0..ker.rows())
        .map(|r| {
            let y: Vec<BigInt> = ker.row(r)[..k].to_vec();
            p.vec_mul(&y)
        })
        .collect();
    let stacked = IntMatrix::from_rows(rows);
    Ok(hnf_lower(&stacked).map_err(|_| LatticeError::SingularSublattice)?.0)
}

/// Relation matrix of the intersection of all sublattices in the system.
pub fn intersect_sublattices(sys: &SublatticeSystem) -> Result<IntMatrix, LatticeError> {
    intersect_matrices(sys.coeffs())
}

/// Enumerate all coset representatives of the sublattice with relation
/// matrix `v` (lower normal form): tuples `(q_1, ..., q_k)` with
/// `0 <= q_j < v_jj`, in lexicographic order, zero tuple first.
pub fn coset_representatives(v: &IntMatrix) -> CosetDecomposition {
    assert!(v.is_lower_normal_form(), "relation matrix must be in lower normal form");
    let k = v.rows();
    let index = det_exact(v).expect("normal form is square");
    let bounds: Vec<u64> = (0..k)
        .map(|i| v.get(i, i).to_u64().filter(|&b| b <= MAX_REPS).unwrap_or_else(|| {
            panic!("coset index too large to materialize (diagonal entry {})", v.get(i, i))
        }))
        .collect();
    let total: u64 = bounds.iter().try_fold(1u64, |acc, &b| {
        acc.checked_mul(b).filter(|&t| t <= MAX_REPS)
    }).unwrap_or_else(|| panic!("coset index too large to materialize ({index} cosets)"));
    let mut reps = Vec::with_capacity(total as usize);
    let mut cur = vec![0u64; k];
    loop {
        reps.push(cur.iter().map(|&q| BigInt::from(q)).collect::<Vec<_>>());
        // odometer with the last coordinate fastest: lexicographic order
        let mut pos = k;
        loop {
            if pos == 0 {
                return CosetDecomposition { relation: v.clone(), index, reps };
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < bounds[pos] {
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// The `(4/3)^(k(k-1)) * gram_det` right side of the squared Hermite
/// product bound.
fn hermite_rhs_sq(k: usize, gram_det: &BigInt) -> BigRational {
    let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
    pow_rat(&four_thirds, (k * (k - 1)) as u32) * BigRational::from_integer(gram_det.clone())
}

fn pow_rat(r: &BigRational, e: u32) -> BigRational {
    BigRational::new(r.numer().pow(e), r.denom().pow(e))
}

fn norm_sq(x: &[BigInt]) -> BigInt {
    x.iter().map(|v| v * v).sum()
}

fn sup_norm(x: &[BigInt]) -> BigInt {
    x.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Check the squared Hermite product bound for the given basis columns.
pub fn satisfies_product_bound(basis: &IntMatrix, gram_det: &BigInt) -> bool {
    let k = basis.cols();
    let mut prod = BigRational::one();
    for j in 0..k {
        prod *= BigRational::from_integer(norm_sq(&basis.col(j)));
    }
    prod <= hermite_rhs_sq(k, gram_det)
}

/// Candidate vector in a greedy shortest-vector sweep.
struct Candidate {
    norm_sq: BigInt,
    ambient: Vec<BigInt>,
    coeffs: Vec<BigInt>,
}

/// Sign-normalize so the first nonzero ambient coordinate is positive.
fn normalize_sign(mut amb: Vec<BigInt>, mut coeffs: Vec<BigInt>) -> (Vec<BigInt>, Vec<BigInt>) {
    if let Some(first) = amb.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in amb.iter_mut() {
                *v = -v.clone();
            }
            for v in coeffs.iter_mut() {
                *v = -v.clone();
            }
        }
    }
    (amb, coeffs)
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    (&a.norm_sq, &a.ambient) < (&b.norm_sq, &b.ambient)
}

/// Shortest nonzero lattice vector satisfying `accept`, by exhaustive
/// enumeration of coefficient boxes of growing radius with an exact
/// pseudoinverse stopping certificate. `accept` must admit at least one
/// lattice vector or this will not terminate.
fn shortest_accepted(
    lat: &Lattice,
    accept: &dyn Fn(&[BigInt]) -> bool,
) -> Candidate {
    let k = lat.rank();
    let s_max = lat
        .pinv_diag_sq()
        .into_iter()
        .max()
        .expect("rank is positive");
    let mut best: Option<Candidate> = None;
    let mut radius: i64 = 1;
    loop {
        let mut cur = vec![-radius; k];
        'points: loop {
            let coeffs: Vec<BigInt> = cur.iter().map(|&c| BigInt::from(c)).collect();
            if !coeffs.iter().all(|c| c.is_zero()) {
                let ambient = lat.to_ambient(&coeffs);
                let (ambient, coeffs) = normalize_sign(ambient, coeffs);
                let cand = Candidate { norm_sq: norm_sq(&ambient), ambient, coeffs };
                if accept(&cand.coeffs) && best.as_ref().is_none_or(|b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    break 'points;
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] <= radius {
                    break;
                }
                cur[pos] = -radius;
            }
        }
        if let Some(b) = &best {
            // outside the box some |u_j| >= radius+1, so
            // ||x||^2 >= (radius+1)^2 / s_max; strict keeps ties inside
            let next = BigRational::from_integer(BigInt::from((radius + 1) * (radius + 1)));
            if BigRational::from_integer(b.norm_sq.clone()) * &s_max < next {
                return best.take().expect("checked above");
            }
        }
        radius += 1;
    }
}

/// gcd of all `i x i` minors of the stacked coefficient rows; equal to 1
/// exactly when the chosen vectors extend to a basis of the lattice.
fn primitive_extendable(rows: &[Vec<BigInt>], k: usize) -> bool {
    let i = rows.len();
    let mut cols: Vec<usize> = (0..i).collect();
    let mut g = BigInt::zero();
    loop {
        let mut sub = IntMatrix::zero(i, i);
        for (r, row) in rows.iter().enumerate() {
            for (c, &col) in cols.iter().enumerate() {
                sub.set(r, c, row[col].clone());
            }
        }
        g = g.gcd(&det_exact(&sub).expect("square minor"));
        if g == BigInt::one() {
            return true;
        }
        // next k-combination
        let mut pos = i;
        loop {
            if pos == 0 {
                return g == BigInt::one();
            }
            pos -= 1;
            cols[pos] += 1;
            if cols[pos] <= k - (i - pos) {
                for p in pos + 1..i {
                    cols[p] = cols[p - 1] + 1;
                }
                break;
            }
        }
    }
}

fn round_rational(r: &BigRational) -> BigInt {
    let shifted = r + BigRational::new(BigInt::one(), BigInt::from(2));
    shifted.floor().to_integer()
}

/// Exact-rational LLL reduction of the basis columns. Returns the
/// unimodular coefficient transform `C` (new basis = old basis * C).
/// With `delta = 7/8` the reduced basis provably satisfies the Hermite
/// product bound; the caller re-checks it exactly regardless.
fn lll_transform(lat: &Lattice) -> IntMatrix {
    let k = lat.rank();
    let n = lat.ambient_dim();
    let delta = BigRational::new(BigInt::from(7), BigInt::from(8));
    let mut cols: Vec<Vec<BigInt>> = (0..k).map(|j| lat.basis().col(j)).collect();
    let mut trans = IntMatrix::identity(k);

    // Gram-Schmidt coefficients and squared star norms, recomputed from
    // scratch after every change (ranks here are at most a handful)
    let gso = |cols: &[Vec<BigInt>]| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut mu = vec![vec![BigRational::zero(); k]; k];
        let mut star_sq = vec![BigRational::zero(); k];
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(k);
        for i in 0..k {
            let mut v: Vec<BigRational> =
                cols[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            for j in 0..i {
                let num: BigRational = (0..n)
                    .map(|r| BigRational::from_integer(cols[i][r].clone()) * &star[j][r])
                    .sum();
                let m = &num / &star_sq[j];
                for r in 0..n {
                    let sub = &m * &star[j][r];
                    v[r] -= sub;
                }
                mu[i][j] = m;
            }
            star_sq[i] = v.iter().map(|x| x * x).sum();
            star.push(v);
        }
        (mu, star_sq)
    };

    let sub_col = |cols: &mut Vec<Vec<BigInt>>, trans: &mut IntMatrix, i: usize, j: usize, r: &BigInt| {
        for t in 0..n {
            let s = r * &cols[j][t];
            cols[i][t] = &cols[i][t] - s;
        }
        for t in 0..k {
            let s = r * trans.get(t, j);
            trans.set(t, i, trans.get(t, i) - s);
        }
    };

    let mut i = 1usize;
    while i < k {
        // size-reduce column i against earlier columns, highest first
        for j in (0..i).rev() {
            let (mu, _) = gso(&cols);
            let r = round_rational(&mu[i][j]);
            if !r.is_zero() {
                sub_col(&mut cols, &mut trans, i, j, &r);
            }
        }
        let (mu, star_sq) = gso(&cols);
        let lovasz_rhs = (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &star_sq[i - 1];
        if star_sq[i] >= lovasz_rhs {
            i += 1;
        } else {
            cols.swap(i, i - 1);
            for t in 0..k {
                let a = trans.get(t, i).clone();
                let b = trans.get(t, i - 1).clone();
                trans.set(t, i, b);
                trans.set(t, i - 1, a);
            }
            i = i.max(2) - 1;
        }
    }
    debug_assert_eq!(det_exact(&trans).unwrap().abs(), BigInt::one());
    trans
}

/// Reduced basis together with the unimodular coefficient transform `C`
/// with `new_basis = old_basis * C`.
///
/// Strategy: return the input unchanged when it already certifies the
/// product bound; otherwise LLL-precondition and re-check; otherwise (rank
/// at most 4) run the exhaustive greedy shortest-vector sweep on the
/// preconditioned basis. The certificate is always re-verified exactly.
pub fn reduced_basis_with_transform(lat: &Lattice) -> Result<(Lattice, IntMatrix), LatticeError> {
    let k = lat.rank();
    if satisfies_product_bound(lat.basis(), lat.gram_determinant()) {
        return Ok((lat.clone(), IntMatrix::identity(k)));
    }
    let c_lll = lll_transform(lat);
    let lll_lat = Lattice::new(lat.basis().mul(&c_lll))?;
    if satisfies_product_bound(lll_lat.basis(), lll_lat.gram_determinant()) {
        return Ok((lll_lat, c_lll));
    }
    if k > 4 {
        return Err(LatticeError::RankTooLarge { rank: k });
    }
    // greedy sweep: each pick is the shortest vector that keeps the chosen
    // set extendable to a basis
    let mut chosen: Vec<Vec<BigInt>> = Vec::with_capacity(k);
    for _ in 0..k {
        let picked = {
            let chosen_ref = &chosen;
            shortest_accepted(&lll_lat, &move |coeffs: &[BigInt]| {
                let mut rows = chosen_ref.clone();
                rows.push(coeffs.to_vec());
                primitive_extendable(&rows, k)
            })
        };
        chosen.push(picked.coeffs);
    }
    let c2 = IntMatrix::from_rows(chosen).transpose();
    let c = c_lll.mul(&c2);
    debug_assert_eq!(det_exact(&c).unwrap().abs(), BigInt::one());
    let new_basis = lat.basis().mul(&c);
    let reduced = Lattice::new(new_basis)?;
    if !satisfies_product_bound(reduced.basis(), reduced.gram_determinant()) {
        return Err(LatticeError::ReductionFailed);
    }
    Ok((reduced, c))
}

/// Basis of the same lattice satisfying the squared Hermite product bound
/// `prod ||a_i||^2 <= (4/3)^(k(k-1)) * det(A^T A)`, certified exactly.
pub fn reduced_basis(lat: &Lattice) -> Result<Lattice, LatticeError> {
    reduced_basis_with_transform(lat).map(|(l, _)| l)
}

/// First successive minimum in the sup-norm: the smallest `|x|` over
/// nonzero lattice vectors, by exhaustive enumeration with an exact
/// stopping certificate. The basis is LLL-preconditioned first so the
/// certificate fires at a small radius; the minimum itself does not depend
/// on the basis.
pub fn first_minimum_sup(lat: &Lattice) -> BigInt {
    let lat = &match reduced_basis_with_transform(lat) {
        Ok((l, _)) => l,
        Err(_) => Lattice::new(lat.basis().mul(&lll_transform(lat))).unwrap_or_else(|_| lat.clone()),
    };
    let k = lat.rank();
    let n = BigInt::from(lat.ambient_dim());
    let s_max = lat.pinv_diag_sq().into_iter().max().expect("rank is positive");
    let mut best: Option<BigInt> = None;
    let mut radius: i64 = 1;
    loop {
        let mut cur = vec![-radius; k];
        'points: loop {
            if !cur.iter().all(|&c| c == 0) {
                let coeffs: Vec<BigInt> = cur.iter().map(|&c| BigInt::from(c)).collect();
                let s = sup_norm(&lat.to_ambient(&coeffs));
                if best.as_ref().is_none_or(|b| &s < b) {
                    best = Some(s);
                }
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    break 'points;
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] <= radius {
                    break;
                }
                cur[pos] = -radius;
            }
        }
        if let Some(b) = &best {
            // outside the box: |x|_sup^2 >= ||x||^2 / n >= (r+1)^2 / (n s_max)
            let next = BigRational::from_integer(BigInt::from((radius + 1) * (radius + 1)));
            let lhs = BigRational::from_integer(b * b * &n) * &s_max;
            if lhs < next {
                return best.take().expect("checked above");
            }
        }
        radius += 1;
    }
}

/// Convert an ambient `n x k` sublattice basis (columns) into parent
/// coordinates: rows of the result are the coefficient vectors. Fails when
/// some column is not on the parent lattice.
pub fn ambient_to_coeff(parent: &Lattice, ambient: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    if ambient.rows() != parent.ambient_dim() || ambient.cols() != parent.rank() {
        return Err(LatticeError::DimensionMismatch);
    }
    let mut rows = Vec::with_capacity(ambient.cols());
    for c in 0..ambient.cols() {
        let col = ambient.col(c);
        let w = parent.coeffs_of_ambient(&col).ok_or(LatticeError::DimensionMismatch)?;
        rows.push(w);
    }
    Ok(IntMatrix::from_rows(rows))
}
