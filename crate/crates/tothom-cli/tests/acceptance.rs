//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: pass/fail` line (visible with `--nocapture`) and
//! enforcing its time budget.

use std::collections::BTreeMap;
use std::time::Instant;

use tothom::complexes::{ChainMap, CochainComplex};
use tothom::linalg::Matrix;
use tothom::novikov::{mapping_torus, novikov_verdict_int, Certificate, DegreeVerdict, TorusVar};
use tothom::rings::{
    novikov_unit, series_arith, series_invert, Elem, LaurentPoly, RingTag, Scalar, SeriesDir,
    SeriesOp, SeriesWindow,
};
use tothom::suites::{
    cohomology_oracle_suite, contraction_suite, identification_suite, phi_roundtrip_suite,
    torus_field_suite, torus_int_iso_suite, GenShape,
};

fn report(criterion: u32, budget_ms: u128, run: impl FnOnce() -> Result<String, String>) {
    let started = Instant::now();
    let outcome = run();
    let elapsed = started.elapsed().as_millis();
    match &outcome {
        Ok(detail) => println!("criterion {}: pass ({}, {} ms)", criterion, detail, elapsed),
        Err(reason) => println!("criterion {}: fail ({})", criterion, reason),
    }
    let detail = outcome.unwrap_or_else(|reason| panic!("criterion {}: {}", criterion, reason));
    assert!(
        elapsed <= budget_ms,
        "criterion {} took {} ms, budget {} ms ({})",
        criterion,
        elapsed,
        budget_ms,
        detail
    );
}

/// The mapping torus of multiplication by 2 on `ZZ` in degree 0.
fn times_two_torus() -> CochainComplex {
    let c = CochainComplex::new(RingTag::ZZ, BTreeMap::from([(0, 1)]), BTreeMap::new()).unwrap();
    let two = Matrix::from_rows(RingTag::ZZ, vec![vec![Elem::Scalar(Scalar::int(2))]]).unwrap();
    let h = ChainMap::new(c.clone(), c.clone(), BTreeMap::from([(0, two)])).unwrap();
    mapping_torus(&c, &h, TorusVar::Z).unwrap()
}

fn two_minus_z() -> LaurentPoly {
    LaurentPoly::from_terms(vec![(0, Scalar::int(2)), (1, Scalar::int(-1))])
}

#[test]
fn criterion_1_times_two_torus_verdicts() {
    report(1, 1000, || {
        let t = times_two_torus();
        let neg = novikov_verdict_int(&t, SeriesDir::Rt).map_err(|e| e.to_string())?;
        if !neg.is_acyclic() {
            return Err("negative verdict is not acyclic".into());
        }
        for (n, v) in neg.per_degree() {
            match v {
                DegreeVerdict::Acyclic(Certificate::UnitDet { det, pivot_exp, pivot_coeff })
                    if *det == two_minus_z()
                        && *pivot_exp == 1
                        && *pivot_coeff == Scalar::int(-1) => {}
                other => return Err(format!("degree {}: unexpected certificate {:?}", n, other)),
            }
        }

        let pos = novikov_verdict_int(&t, SeriesDir::Lt).map_err(|e| e.to_string())?;
        let lt_pivot = novikov_unit(&two_minus_z(), SeriesDir::Lt).map_err(|e| e.to_string())?;
        if lt_pivot.unit || lt_pivot.pivot_coeff != Scalar::int(2) || lt_pivot.pivot_exp != 0 {
            return Err(format!("unexpected Lt pivot {:?}", lt_pivot));
        }
        match pos.per_degree().get(&0) {
            Some(DegreeVerdict::NonAcyclic(w))
                if w.presentation.as_deref() == Some("ZZ((z))/(2 - z)") => {}
            other => return Err(format!("degree 0: expected the presentation, got {:?}", other)),
        }

        // Over ZZ[z, z^-1] itself the units are the monomials ±z^k, and
        // 2 - z has two terms, so H^0 of the sum totalisation is nonzero.
        if two_minus_z().terms().count() != 2 {
            return Err("2 - z should have exactly two terms".into());
        }
        Ok("both directional verdicts and the H^0 presentation match".into())
    });
}

#[test]
fn criterion_2_series_inversion() {
    report(2, 1000, || {
        let f = two_minus_z();
        let g = series_invert(&f, SeriesDir::Rt, 10).map_err(|e| e.to_string())?;
        for k in 1..=10i64 {
            let want = Scalar::int(-(1i64 << (k - 1)));
            match g.coeff(-k) {
                Some(c) if c == want => {}
                other => return Err(format!("coefficient at z^{}: {:?}, want {}", -k, other, want)),
            }
        }
        let fw = SeriesWindow::from_poly(&f, SeriesDir::Rt, RingTag::ZZ, 0, 1)
            .map_err(|e| e.to_string())?;
        let prod = series_arith(&fw, &g, SeriesOp::Mul).map_err(|e| e.to_string())?;
        if !prod.is_one() {
            return Err(format!("product is {}, not 1", prod));
        }
        Ok("coefficients -1, -2, ..., -2^9 and exact multiply-back".into())
    });
}

#[test]
fn criterion_3_field_torus_suite() {
    report(3, 60_000, || {
        let suite = torus_field_suite(
            31,
            100,
            &[RingTag::Fp(2), RingTag::Fp(5)],
            &GenShape::default(),
        );
        if suite.all_ok() {
            Ok(suite.summary())
        } else {
            Err(first_failure(&suite))
        }
    });
}

#[test]
fn criterion_4_integer_iso_suite() {
    report(4, 10_000, || {
        let suite = torus_int_iso_suite(41, 20, &GenShape::default());
        if suite.all_ok() {
            Ok(suite.summary())
        } else {
            Err(first_failure(&suite))
        }
    });
}

#[test]
fn criterion_5_contraction_suites() {
    report(5, 60_000, || {
        let lt = contraction_suite(51, 50, SeriesDir::Lt);
        if !lt.all_ok() {
            return Err(first_failure(&lt));
        }
        let rt = contraction_suite(52, 50, SeriesDir::Rt);
        if !rt.all_ok() {
            return Err(first_failure(&rt));
        }
        Ok(format!("{}; {}", lt.summary(), rt.summary()))
    });
}

#[test]
fn criterion_6_identification_suite() {
    report(6, 10_000, || {
        let suite = identification_suite(61, 20);
        if suite.all_ok() {
            Ok(suite.summary())
        } else {
            Err(first_failure(&suite))
        }
    });
}

#[test]
fn criterion_7_module_round_trips() {
    report(7, 10_000, || {
        let suite = phi_roundtrip_suite(71, 100);
        if suite.all_ok() {
            Ok(suite.summary())
        } else {
            Err(first_failure(&suite))
        }
    });
}

#[test]
fn criterion_8_cohomology_oracle() {
    report(8, 30_000, || {
        let suite = cohomology_oracle_suite(81, 30);
        if suite.all_ok() {
            Ok(suite.summary())
        } else {
            Err(first_failure(&suite))
        }
    });
}

#[test]
fn criterion_9_negative_control() {
    report(9, 1000, || {
        let t = times_two_torus();
        let pos = novikov_verdict_int(&t, SeriesDir::Lt).map_err(|e| e.to_string())?;
        if !pos.has_non_acyclic() {
            return Err("the times-2 torus should refute positive acyclicity".into());
        }
        Ok("non-quasi-isomorphism breaks the positive half".into())
    });
}

fn first_failure(suite: &tothom::suites::SuiteReport) -> String {
    suite
        .samples
        .iter()
        .find(|s| !s.ok)
        .map(|s| format!("sample {} (seed {}): {}", s.index, s.seed, s.detail))
        .unwrap_or_else(|| "unknown failure".into())
}
