//! Fixed-input tests with independently computed expected values: small
//! cohomology groups worked out by hand, a Smith form with known
//! invariants, Laurent ranks read off from visible row relations, and
//! series inverses with closed-form coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use tothom::complexes::{cohomology_int, cohomology_field, CochainComplex};
use tothom::linalg::{rank, smith_normal_form, Matrix};
use tothom::rings::{
    series_arith, series_invert, Elem, LaurentPoly, RingTag, Scalar, SeriesDir, SeriesOp,
    SeriesWindow,
};

fn zz(v: i64) -> Elem {
    Elem::Scalar(Scalar::int(v))
}

fn zz_matrix(rows: &[&[i64]]) -> Matrix {
    Matrix::from_rows(
        RingTag::ZZ,
        rows.iter()
            .map(|r| r.iter().copied().map(zz).collect())
            .collect(),
    )
    .unwrap()
}

/// The two-term complex `R -> R` given by multiplication by `v`, in
/// degrees 0 and 1.
fn times(ring: RingTag, v: i64) -> CochainComplex {
    let d = Matrix::scalar_diag(ring.clone(), 1, &Elem::Scalar(Scalar::int(v).cast(&ring).unwrap()));
    CochainComplex::new(
        ring,
        BTreeMap::from([(0, 1), (1, 1)]),
        BTreeMap::from([(0, d)]),
    )
    .unwrap()
}

#[test]
fn multiplication_by_two_over_small_prime_fields() {
    // Over F2 the map is zero, so both degrees survive; over F3 it is
    // invertible and everything cancels.
    let h2 = cohomology_field(&times(RingTag::Fp(2), 2)).unwrap();
    assert_eq!(h2.entries[&0].free_rank, 1);
    assert_eq!(h2.entries[&1].free_rank, 1);

    let h3 = cohomology_field(&times(RingTag::Fp(3), 2)).unwrap();
    assert!(h3.is_trivial());
}

#[test]
fn integer_cohomology_reports_invariant_factors() {
    // ZZ^2 -> ZZ^2 by diag(2, 3): injective, cokernel ZZ/2 + ZZ/3 = ZZ/6.
    let d = zz_matrix(&[&[2, 0], &[0, 3]]);
    let c = CochainComplex::new(
        RingTag::ZZ,
        BTreeMap::from([(0, 2), (1, 2)]),
        BTreeMap::from([(0, d)]),
    )
    .unwrap();
    let h = cohomology_int(&c).unwrap();
    assert_eq!(h.entries[&0].free_rank, 0);
    assert!(h.entries[&0].torsion.is_empty());
    assert_eq!(h.entries[&1].free_rank, 0);
    assert_eq!(h.entries[&1].torsion, vec![BigInt::from(6)]);

    // ZZ -> ZZ by 2: cokernel ZZ/2.
    let h = cohomology_int(&times(RingTag::ZZ, 2)).unwrap();
    assert_eq!(h.entries[&1].torsion, vec![BigInt::from(2)]);

    // ZZ -> ZZ by 0: both copies survive freely.
    let h = cohomology_int(&times(RingTag::ZZ, 0)).unwrap();
    assert_eq!(h.entries[&0].free_rank, 1);
    assert_eq!(h.entries[&1].free_rank, 1);
    assert!(h.entries[&1].torsion.is_empty());
}

#[test]
fn smith_form_of_a_fixed_matrix() {
    // gcd of the entries is 2 and |det| = 8, so the invariants are 2, 4.
    let a = zz_matrix(&[&[2, 4], &[6, 8]]);
    let sf = smith_normal_form(&a).unwrap();
    assert!(sf.check(&a));
    assert_eq!(
        sf.invariants(),
        vec![BigInt::from(2), BigInt::from(4)]
    );
}

#[test]
fn laurent_rank_fixed_cases() {
    let ring = RingTag::laurent(RingTag::ZZ).unwrap();
    let poly = |terms: &[(i64, i64)]| {
        Elem::Laurent(LaurentPoly::from_terms(
            terms.iter().map(|&(e, c)| (e, Scalar::int(c))),
        ))
    };

    // A single nonzero entry has rank 1 even though it is not a unit.
    let two_minus_z = Matrix::from_rows(ring.clone(), vec![vec![poly(&[(0, 2), (1, -1)])]]).unwrap();
    assert_eq!(rank(&two_minus_z).unwrap(), 1);

    // Second row is z^-1 times the first, so the rank drops to 1.
    let dependent = Matrix::from_rows(
        ring.clone(),
        vec![
            vec![poly(&[(1, 1)]), poly(&[(2, 1)])],
            vec![poly(&[(0, 1)]), poly(&[(1, 1)])],
        ],
    )
    .unwrap();
    assert_eq!(rank(&dependent).unwrap(), 1);

    // Distinct monomial diagonal: full rank.
    let diag = Matrix::from_rows(
        ring.clone(),
        vec![
            vec![poly(&[(3, 1)]), poly(&[])],
            vec![poly(&[]), poly(&[(-2, 5)])],
        ],
    )
    .unwrap();
    assert_eq!(rank(&diag).unwrap(), 2);

    assert_eq!(rank(&Matrix::zero(ring, 2, 3)).unwrap(), 0);
}

#[test]
fn geometric_series_inverts_one_minus_z() {
    // (1 - z)^-1 = 1 + z + z^2 + ... in ZZ((z)).
    let f = LaurentPoly::from_terms([(0, Scalar::int(1)), (1, Scalar::int(-1))]);
    let g = series_invert(&f, SeriesDir::Lt, 8).unwrap();
    for k in 0..=8 {
        assert_eq!(g.coeff(k), Some(Scalar::int(1)), "coefficient of z^{k}");
    }

    let fw = SeriesWindow::from_poly(&f, SeriesDir::Lt, RingTag::ZZ, 0, 1).unwrap();
    assert!(series_arith(&fw, &g, SeriesOp::Mul).unwrap().is_one());
}

#[test]
fn alternating_series_inverts_z_plus_z_squared() {
    // z + z^2 = z(1 + z), so the inverse starts at z^-1 and alternates:
    // z^-1 - 1 + z - z^2 + ...
    let f = LaurentPoly::from_terms([(1, Scalar::int(1)), (2, Scalar::int(1))]);
    let g = series_invert(&f, SeriesDir::Lt, 6).unwrap();
    for k in 0..=6 {
        let expected = if k % 2 == 0 { 1 } else { -1 };
        assert_eq!(g.coeff(k - 1), Some(Scalar::int(expected)));
    }

    let fw = SeriesWindow::from_poly(&f, SeriesDir::Lt, RingTag::ZZ, 1, 2).unwrap();
    assert!(series_arith(&fw, &g, SeriesOp::Mul).unwrap().is_one());
}
