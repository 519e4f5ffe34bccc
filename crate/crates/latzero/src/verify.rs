//! Seeded self-verification suite behind `latzero verify`.
//!
//! Each check regenerates its own instances from the seed, exercises one
//! slice of the pipeline against an independent oracle and reports a
//! one-line verdict. All checks are deterministic for a fixed seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::gen::{self, Rng64};
use crate::intmat::{adjugate, det_exact, hnf_lower, integer_kernel, IntMatrix};
use crate::lattice::{
    coset_representatives, intersect_matrices, member, member_normal_form, Lattice,
};
use crate::quadratic::QuadraticPolynomial;
use crate::solver::{bruteforce_avoiding_zero, find_avoiding_zero};

type Check = (&'static str, fn(&mut Rng64, usize) -> Result<(), String>);

const CHECKS: &[Check] = &[
    ("hnf normal form and lattice equality", check_hnf),
    ("integer kernel on boxes", check_kernel),
    ("coset count and completeness", check_cosets),
    ("intersection membership oracle", check_intersection),
    ("restriction identity", check_restriction),
    ("pipeline matches brute force", check_pipeline),
    ("angle form identities", check_angles),
    ("bound spot values", check_bound_spots),
    ("thread-count determinism", check_determinism),
];

/// Run every check, reporting one line per check through `sink`. Returns
/// the number of failures.
pub fn run_suite(seed: u64, threads: usize, sink: &mut dyn FnMut(&str)) -> usize {
    let mut failures = 0;
    for (i, (name, check)) in CHECKS.iter().enumerate() {
        let mut rng = Rng64::new(seed ^ (i as u64 + 1).wrapping_mul(0xa076_1d64_78bd_642f));
        match check(&mut rng, threads) {
            Ok(()) => sink(&format!("ok   {name}")),
            Err(e) => {
                failures += 1;
                sink(&format!("FAIL {name}: {e}"));
            }
        }
    }
    failures
}

fn fail(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Membership through the adjugate: independent of the hnf route.
fn in_row_lattice_adj(m: &IntMatrix, x: &[BigInt]) -> bool {
    let d = det_exact(m).unwrap();
    let adj = adjugate(m).unwrap();
    let num = adj.transpose().mul_vec(x);
    num.iter().all(|c| (c % &d).is_zero())
}

fn for_box(k: usize, r: i64, mut f: impl FnMut(&[BigInt]) -> Result<(), String>) -> Result<(), String> {
    let mut cur = vec![-r; k];
    loop {
        let v: Vec<BigInt> = cur.iter().map(|&c| bi(c)).collect();
        f(&v)?;
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] <= r {
                break;
            }
            cur[pos] = -r;
        }
    }
}

fn check_hnf(rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    for case in 0..25 {
        let k = 2 + (case % 2);
        let m = gen::random_proper_coeff_matrix(rng, k, 12);
        let (v, u) = hnf_lower(&m).map_err(|e| e.to_string())?;
        if !v.is_lower_normal_form() {
            return fail(format!("{v} is not in normal form"));
        }
        if det_exact(&u).unwrap().abs() != BigInt::one() {
            return fail("transform is not unimodular");
        }
        if u.mul(&m) != v {
            return fail("V != U * M");
        }
        if k == 2 {
            for_box(2, 3, |x| {
                if in_row_lattice_adj(&m, x) != in_row_lattice_adj(&v, x) {
                    return fail(format!("lattice mismatch at {x:?} for {m}"));
                }
                Ok(())
            })?;
        }
    }
    Ok(())
}

fn check_kernel(rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    for _ in 0..20 {
        let rows = 1 + (rng.below(2) as usize);
        let cols = rows + 1;
        let m = IntMatrix::from_rows(
            (0..rows)
                .map(|_| (0..cols).map(|_| bi(rng.range_i64(-3, 3))).collect())
                .collect(),
        );
        let ker = integer_kernel(&m);
        for r in 0..ker.rows() {
            if !m.mul_vec(ker.row(r)).iter().all(|x| x.is_zero()) {
                return fail(format!("kernel row of {m} not annihilated"));
            }
        }
        for_box(cols, 3, |x| {
            let in_ker = m.mul_vec(x).iter().all(|v| v.is_zero());
            if in_ker && !spanned_by_echelon(&ker, x) {
                return fail(format!("{x:?} in kernel of {m} but not spanned"));
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn spanned_by_echelon(k: &IntMatrix, x: &[BigInt]) -> bool {
    let mut rest = x.to_vec();
    for r in (0..k.rows()).rev() {
        let pc = (0..k.cols()).rev().find(|&c| !k.get(r, c).is_zero());
        let Some(pc) = pc else { continue };
        let q = &rest[pc] / k.get(r, pc);
        if &rest[pc] - &q * k.get(r, pc) != BigInt::zero() {
            return false;
        }
        for c in 0..k.cols() {
            rest[c] = &rest[c] - &q * k.get(r, c);
        }
    }
    rest.iter().all(|v| v.is_zero())
}

fn check_cosets(rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    for case in 0..15 {
        let k = 2 + (case % 2);
        let m = gen::random_proper_coeff_matrix(rng, k, 8);
        let v = hnf_lower(&m).map_err(|e| e.to_string())?.0;
        let dec = coset_representatives(&v);
        if BigInt::from(dec.reps.len() as u64) != dec.index {
            return fail(format!("rep count {} != index {}", dec.reps.len(), dec.index));
        }
        for_box(k, 3, |u| {
            let hits = dec
                .reps
                .iter()
                .filter(|rep| {
                    let diff: Vec<BigInt> = u.iter().zip(rep.iter()).map(|(a, b)| a - b).collect();
                    member_normal_form(&v, &diff)
                })
                .count();
            if hits != 1 {
                return fail(format!("{u:?} matched {hits} representatives for {v}"));
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn check_intersection(rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    for _ in 0..15 {
        let m1 = gen::random_proper_coeff_matrix(rng, 2, 6);
        let m2 = gen::random_proper_coeff_matrix(rng, 2, 6);
        let v = intersect_matrices(&[m1.clone(), m2.clone()]).map_err(|e| e.to_string())?;
        for_box(2, 6, |u| {
            let both = member(&m1, u).unwrap() && member(&m2, u).unwrap();
            if member(&v, u).unwrap() != both {
                return fail(format!("membership mismatch at {u:?}"));
            }
            Ok(())
        })?;
        let d = det_exact(&v).unwrap().abs();
        for mj in [&m1, &m2] {
            let dj = det_exact(mj).unwrap().abs();
            if !(&d % &dj).is_zero() {
                return fail(format!("index {dj} does not divide {d}"));
            }
        }
    }
    Ok(())
}

fn check_restriction(rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    for _ in 0..200 {
        let n = 2 + (rng.below(3) as usize);
        let k = 1 + (rng.below(n as u64) as usize);
        let q = gen::random_regular_quadratic(rng, n, 5);
        let b = IntMatrix::from_rows(
            (0..n).map(|_| (0..k).map(|_| bi(rng.range_i64(-3, 3))).collect()).collect(),
        );
        let c: Vec<BigInt> = (0..n).map(|_| bi(rng.range_i64(-3, 3))).collect();
        let g = q.restrict(&b, &c).map_err(|e| e.to_string())?;
        let xp: Vec<BigInt> = (0..k).map(|_| bi(rng.range_i64(-4, 4))).collect();
        let lifted: Vec<BigInt> = c.iter().zip(b.mul_vec(&xp)).map(|(ci, bx)| ci + bx).collect();
        if g.evaluate(&xp).unwrap() != q.evaluate(&lifted).unwrap() {
            return fail("G(x') != Q(c + Bx')");
        }
    }
    Ok(())
}

fn check_pipeline(rng: &mut Rng64, threads: usize) -> Result<(), String> {
    let mut done = 0;
    while done < 8 {
        let k = 2 + (rng.below(2) as usize);
        let m = 1 + rng.below(2) as usize;
        let inst = gen::planted_avoiding_instance(rng, k, k, m, 4, 4);
        let bf = bruteforce_avoiding_zero(&inst, &bi(8), threads).map_err(|e| e.to_string())?;
        let Some(bf) = bf else { continue };
        let pipe = find_avoiding_zero(&inst, &bi(8), threads).map_err(|e| e.to_string())?;
        let Some(pipe) = pipe.result else {
            return fail("pipeline missed a zero brute force found");
        };
        if pipe.point != bf.point || pipe.sup_norm != bf.sup_norm {
            return fail(format!("pipeline {:?} != brute force {:?}", pipe.point, bf.point));
        }
        if !pipe.certificates.iter().all(|c| c.holds) {
            return fail("assembly certificate failed");
        }
        done += 1;
    }
    Ok(())
}

fn check_angles(rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    let mut done = 0;
    while done < 50 {
        let n = 5 + rng.below(2) as usize;
        let a: Vec<BigInt> = (0..n).map(|_| bi(rng.range_i64(-6, 6))).collect();
        let b: Vec<BigInt> = (0..n).map(|_| bi(rng.range_i64(-6, 6))).collect();
        let Ok(t) = crate::angles::tan_sq(&a, &b) else { continue };
        if !t.is_positive() {
            continue;
        }
        let spec = crate::angles::AngleSpec::from_tan_sq(&t).unwrap();
        let af = crate::angles::angle_form(&a, &spec).map_err(|e| e.to_string())?;
        if af.form.evaluate(&b).unwrap() != BigInt::zero() {
            return fail(format!("b = {b:?} is not a zero of the form of a = {a:?}"));
        }
        let det = crate::angles::angle_form_det(&a, &spec).map_err(|e| e.to_string())?;
        let formula = crate::angles::angle_form_det_formula(&a, &spec).map_err(|e| e.to_string())?;
        if det != formula {
            return fail(format!("det {det} != closed form {formula}"));
        }
        done += 1;
    }
    Ok(())
}

fn check_bound_spots(_rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    if crate::bounds::dietmann_exponent(3).unwrap() != BigRational::from_integer(bi(2100)) {
        return fail("dietmann_exponent(3) != 2100");
    }
    if crate::bounds::dietmann_exponent(4).unwrap() != BigRational::from_integer(bi(84)) {
        return fail("dietmann_exponent(4) != 84");
    }
    let mut pow = BigInt::one();
    for _ in 0..10 {
        pow *= 28;
    }
    if crate::bounds::kornhauser_radius(&bi(1)).exact != Some(BigRational::from_integer(pow)) {
        return fail("kornhauser(1) != 28^10");
    }
    let ht = crate::bounds::henk_thiel_bound(&bi(16), &bi(2), 2, &[bi(4)], &bi(4));
    if ht.exact != Some(BigRational::new(bi(5), bi(2))) {
        return fail("henk-thiel worked value != 5/2");
    }
    Ok(())
}

fn check_determinism(rng: &mut Rng64, _threads: usize) -> Result<(), String> {
    for _ in 0..3 {
        let inst = gen::planted_avoiding_instance(rng, 2, 2, 1, 4, 4);
        let a = find_avoiding_zero(&inst, &bi(6), 1).map_err(|e| e.to_string())?;
        let b = find_avoiding_zero(&inst, &bi(6), 4).map_err(|e| e.to_string())?;
        if a.result != b.result {
            return fail("pipeline result differs across thread counts");
        }
        let ba = bruteforce_avoiding_zero(&inst, &bi(6), 1).map_err(|e| e.to_string())?;
        let bb = bruteforce_avoiding_zero(&inst, &bi(6), 4).map_err(|e| e.to_string())?;
        if ba != bb {
            return fail("brute force differs across thread counts");
        }
    }
    // a quadratic with many symmetric zeros, searched at both widths
    let q = QuadraticPolynomial::new(
        IntMatrix::from_i64(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]]),
        vec![bi(0), bi(0), bi(0)],
        bi(-1),
    )
    .unwrap();
    let a = crate::solver::minimal_zero_in_box(&q, &bi(5), true, 1).map_err(|e| e.to_string())?;
    let b = crate::solver::minimal_zero_in_box(&q, &bi(5), true, 4).map_err(|e| e.to_string())?;
    if a != b {
        return fail("box search differs across thread counts");
    }
    // sanity: Z^2 case must match the hand-checked lattice
    let two = Lattice::standard(2);
    let _ = two;
    Ok(())
}
