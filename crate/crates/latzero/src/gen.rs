//! Seeded instance generation for the verification suite, the bench
//! harness and the test corpus.
//!
//! The generator is a hand-rolled splitmix64 so that identical seeds yield
//! byte-identical streams on every platform and toolchain, which the
//! determinism contract of the CLI depends on.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::intmat::{det_exact, IntMatrix};
use crate::lattice::{Lattice, SublatticeSystem};
use crate::quadratic::QuadraticPolynomial;

/// splitmix64 stream.
#[derive(Debug, Clone)]
pub struct Rng64 {
    state: u64,
}

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        // rejection to avoid modulo bias
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform value in `[lo, hi]` inclusive.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + self.below(span) as i64
    }

    /// Derive an independent substream; used to give each generated
    /// instance its own deterministic stream.
    pub fn fork(&mut self, tag: u64) -> Rng64 {
        Rng64::new(self.next_u64() ^ tag.wrapping_mul(0x9e3779b97f4a7c15))
    }
}

fn random_int_matrix(rng: &mut Rng64, rows: usize, cols: usize, max_abs: i64) -> IntMatrix {
    let data: Vec<Vec<BigInt>> = (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.range_i64(-max_abs, max_abs))).collect())
        .collect();
    IntMatrix::from_rows(data)
}

/// Random k-by-k coefficient matrix with `1 < |det| <= max_index`
/// (a proper finite-index sublattice in parent coordinates).
pub fn random_proper_coeff_matrix(rng: &mut Rng64, k: usize, max_index: i64) -> IntMatrix {
    loop {
        let m = random_int_matrix(rng, k, k, 2);
        let d = det_exact(&m).unwrap().abs();
        if d > BigInt::one() && d <= BigInt::from(max_index) {
            return m;
        }
    }
}

/// Random system of `count` proper sublattices over the given parent.
pub fn random_system(
    rng: &mut Rng64,
    parent: Lattice,
    count: usize,
    max_index: i64,
) -> SublatticeSystem {
    let k = parent.rank();
    let coeffs = (0..count).map(|_| random_proper_coeff_matrix(rng, k, max_index)).collect();
    SublatticeSystem::new(parent, coeffs).unwrap()
}

/// Random full-rank lattice of rank `k` in ambient dimension `n` with small
/// basis entries and a decently conditioned basis (keeps exhaustive search
/// boxes small). For `n == k` this is the standard lattice half the time.
pub fn random_parent(rng: &mut Rng64, k: usize, n: usize) -> Lattice {
    use num_rational::BigRational;
    let cond_cap = BigRational::from_integer(BigInt::from(2));
    if n == k && rng.below(2) == 0 {
        return Lattice::standard(n);
    }
    loop {
        let mut b = random_int_matrix(rng, n, k, 2);
        // nudge toward full rank: put a nonzero diagonal in the top block
        for i in 0..k {
            if b.get(i, i).is_zero() {
                b.set(i, i, BigInt::one());
            }
        }
        let Ok(lat) = Lattice::new(b) else { continue };
        if lat.pinv_diag_sq().iter().all(|s| s <= &cond_cap) {
            return lat;
        }
    }
}

/// Random instance with a planted avoiding zero: the polynomial is built
/// so that a small lattice point outside the union is a zero, which keeps
/// brute-force searches at small radii productive.
pub fn planted_avoiding_instance(
    rng: &mut Rng64,
    k: usize,
    n: usize,
    m: usize,
    max_index: i64,
    height: i64,
) -> crate::solver::Instance {
    loop {
        let parent = random_parent(rng, k, n);
        let coeffs: Vec<IntMatrix> =
            (0..m).map(|_| random_proper_coeff_matrix(rng, k, max_index)).collect();
        let system = SublatticeSystem::new(parent, coeffs).unwrap();
        // a small coefficient vector outside every sublattice
        let mut planted: Option<Vec<BigInt>> = None;
        for _ in 0..20 {
            let u: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.range_i64(-2, 2))).collect();
            if u.iter().all(|v| v.is_zero()) {
                continue;
            }
            if system.coeffs().iter().all(|mj| !crate::lattice::member(mj, &u).unwrap()) {
                planted = Some(u);
                break;
            }
        }
        let Some(u) = planted else { continue };
        let z = system.parent().to_ambient(&u);
        // now draw F, L and solve for t so that Q(z) = 0
        for _ in 0..30 {
            let mut f = IntMatrix::zero(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = BigInt::from(rng.range_i64(-height, height));
                    f.set(i, j, v.clone());
                    f.set(j, i, v);
                }
            }
            if det_exact(&f).unwrap().is_zero() {
                continue;
            }
            let l: Vec<BigInt> =
                (0..n).map(|_| BigInt::from(rng.range_i64(-height, height))).collect();
            let fz = f.mul_vec(&z);
            let quad: BigInt = z.iter().zip(&fz).map(|(a, b)| a * b).sum();
            let lin: BigInt = z.iter().zip(&l).map(|(a, b)| a * b).sum();
            let t = -(quad + lin);
            if t.abs() > BigInt::from(height) {
                continue;
            }
            let poly = QuadraticPolynomial::new(f, l, t).unwrap();
            return crate::solver::Instance::new(system, poly).unwrap();
        }
    }
}

/// Random regular quadratic polynomial of height at most `height`.
pub fn random_regular_quadratic(rng: &mut Rng64, n: usize, height: i64) -> QuadraticPolynomial {
    loop {
        let mut f = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in i..n {
                let v = BigInt::from(rng.range_i64(-height, height));
                f.set(i, j, v.clone());
                f.set(j, i, v);
            }
        }
        if det_exact(&f).unwrap().is_zero() {
            continue;
        }
        let l: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.range_i64(-height, height))).collect();
        let t = BigInt::from(rng.range_i64(-height, height));
        return QuadraticPolynomial::new(f, l, t).unwrap();
    }
}
