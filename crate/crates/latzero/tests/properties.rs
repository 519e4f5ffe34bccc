//! Property-based tests over randomly drawn small inputs.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use latzero::intmat::{det_exact, hnf_lower, integer_kernel, IntMatrix};
use latzero::lattice::member_normal_form;
use latzero::quadratic::QuadraticPolynomial;

fn entry() -> impl Strategy<Value = i64> {
    -6i64..=6
}

fn square_matrix(k: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(entry(), k), k).prop_map(|rows| {
        IntMatrix::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
        )
    })
}

fn nonsingular(k: usize) -> impl Strategy<Value = IntMatrix> {
    square_matrix(k).prop_filter("nonsingular", |m| !det_exact(m).unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_idempotent_and_unimodular(m in nonsingular(3)) {
        let (v, u) = hnf_lower(&m).unwrap();
        prop_assert!(v.is_lower_normal_form());
        prop_assert_eq!(det_exact(&u).unwrap().abs(), BigInt::one());
        prop_assert_eq!(u.mul(&m), v.clone());
        let (v2, u2) = hnf_lower(&v).unwrap();
        prop_assert_eq!(v2, v);
        prop_assert_eq!(u2, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_preserves_determinant_up_to_sign(m in nonsingular(3)) {
        let (v, _) = hnf_lower(&m).unwrap();
        prop_assert_eq!(det_exact(&v).unwrap(), det_exact(&m).unwrap().abs());
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(entry(), 4), 2)) {
        let m = IntMatrix::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
        );
        let k = integer_kernel(&m);
        for r in 0..k.rows() {
            let img = m.mul_vec(k.row(r));
            prop_assert!(img.iter().all(|x| x.is_zero()));
        }
        // rank-nullity over the rationals
        let rank = 4 - k.rows();
        prop_assert!(rank <= 2);
    }

    #[test]
    fn membership_is_stable_under_row_lattice_shifts(
        m in nonsingular(2),
        u in prop::collection::vec(entry(), 2),
        coeffs in prop::collection::vec(-3i64..=3, 2),
    ) {
        // u and u + (integer combination of rows) agree on membership
        let (v, _) = hnf_lower(&m).unwrap();
        let ub: Vec<BigInt> = u.iter().map(|&x| BigInt::from(x)).collect();
        let shift = m.vec_mul(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
        let shifted: Vec<BigInt> = ub.iter().zip(&shift).map(|(a, b)| a + b).collect();
        prop_assert_eq!(member_normal_form(&v, &ub), member_normal_form(&v, &shifted));
    }

    #[test]
    fn restriction_identity_pointwise(
        f_upper in prop::collection::vec(entry(), 6),
        l in prop::collection::vec(entry(), 3),
        t in entry(),
        b_rows in prop::collection::vec(prop::collection::vec(entry(), 2), 3),
        c in prop::collection::vec(entry(), 3),
        x in prop::collection::vec(entry(), 2),
    ) {
        // symmetric 3x3 form from the upper triangle
        let mut f = IntMatrix::zero(3, 3);
        let mut it = f_upper.into_iter();
        for i in 0..3 {
            for j in i..3 {
                let v = BigInt::from(it.next().unwrap());
                f.set(i, j, v.clone());
                f.set(j, i, v);
            }
        }
        let q = QuadraticPolynomial::new(
            f,
            l.into_iter().map(BigInt::from).collect(),
            BigInt::from(t),
        ).unwrap();
        let b = IntMatrix::from_rows(
            b_rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
        );
        let cb: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let g = q.restrict(&b, &cb).unwrap();
        let lifted: Vec<BigInt> = cb.iter().zip(b.mul_vec(&xb)).map(|(ci, bx)| ci + bx).collect();
        prop_assert_eq!(g.evaluate(&xb).unwrap(), q.evaluate(&lifted).unwrap());
        // symmetry and height definition
        for i in 0..2 {
            for j in 0..2 {
                prop_assert_eq!(g.form().get(i, j), g.form().get(j, i));
            }
        }
        let mut h = BigInt::zero();
        for i in 0..2 {
            for j in 0..2 {
                h = h.max(g.form().get(i, j).abs());
            }
        }
        for v in g.linear() {
            h = h.max(v.abs());
        }
        h = h.max(g.constant().abs());
        prop_assert_eq!(g.height(), h);
    }

    #[test]
    fn angle_form_height_strictly_bounded(
        a in prop::collection::vec(-8i64..=8, 5).prop_filter("nonzero", |a| a.iter().any(|&v| v != 0)),
        p in 1i64..=6,
        q in 1i64..=6,
    ) {
        let ab: Vec<BigInt> = a.iter().map(|&v| BigInt::from(v)).collect();
        let spec = latzero::angles::AngleSpec::oblique(BigInt::from(p), BigInt::from(q)).unwrap();
        let af = latzero::angles::angle_form(&ab, &spec).unwrap();
        let rhs = BigInt::from(2) * (&af.p + &af.q) * &af.norm_sq;
        prop_assert!(af.form.height() < rhs);
    }
}
