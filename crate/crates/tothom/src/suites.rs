//! Seeded property suites over randomly generated complexes.
//!
//! Each suite draws its samples deterministically (sample `i` uses seed
//! `base + i`), fans the checks out through [`par_map`] and reassembles
//! the reports in index order, so a suite run is reproducible byte for
//! byte with or without the `parallel` feature. A failing sample carries
//! a human-readable detail string; suites never panic on mathematical
//! counterexamples, they report them.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bicomplex::{
    contract_lt, contract_rt, torus_bicomplex, verify_witness, DoubleComplexWindow, TotCocycle,
};
use crate::complexes::{cohomology_field, CochainComplex};
use crate::gen::{random_complex_with_endo, GenParams, MapKind};
use crate::linalg::Matrix;
use crate::novikov::{
    check_tot_sum_is_torus, mapping_torus, novikov_cohomology_field, novikov_verdict_int, phi_fp,
    phi_fp_inverse, FpPresentation, TorusVar,
};
use crate::par::par_map;
use crate::rings::{Elem, RingTag, Scalar, SeriesDir, SeriesWindow};
use crate::{Error, Result};

/// Outcome of one sample of a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    /// Position of the sample within the suite run.
    pub index: usize,
    /// Seed the sample's generator was started from.
    pub seed: u64,
    /// Whether every assertion of the sample held.
    pub ok: bool,
    /// Empty on success; names the first failure otherwise.
    pub detail: String,
}

impl SampleReport {
    fn pass(index: usize, seed: u64) -> SampleReport {
        SampleReport {
            index,
            seed,
            ok: true,
            detail: String::new(),
        }
    }

    fn fail(index: usize, seed: u64, detail: String) -> SampleReport {
        SampleReport {
            index,
            seed,
            ok: false,
            detail,
        }
    }
}

/// Results of a whole suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    /// Suite name, stable across runs.
    pub name: String,
    /// Per-sample outcomes in index order.
    pub samples: Vec<SampleReport>,
}

impl SuiteReport {
    /// True when every sample passed.
    pub fn all_ok(&self) -> bool {
        self.samples.iter().all(|s| s.ok)
    }

    /// Number of failed samples.
    pub fn failure_count(&self) -> usize {
        self.samples.iter().filter(|s| !s.ok).count()
    }

    /// One-line human summary, e.g. `torus-field: 100/100 ok`.
    pub fn summary(&self) -> String {
        let passed = self.samples.len() - self.failure_count();
        format!("{}: {}/{} ok", self.name, passed, self.samples.len())
    }
}

fn run_suite(
    name: &str,
    seed: u64,
    samples: usize,
    check: impl Fn(usize, u64) -> std::result::Result<(), String> + Send + Sync,
) -> SuiteReport {
    let reports = par_map((0..samples).collect::<Vec<_>>(), |i| {
        let sample_seed = seed.wrapping_add(i as u64);
        match check(i, sample_seed) {
            Ok(()) => SampleReport::pass(i, sample_seed),
            Err(detail) => SampleReport::fail(i, sample_seed, detail),
        }
    });
    SuiteReport {
        name: name.into(),
        samples: reports,
    }
}

/// Degree window and rank cap for the complexes a suite generates.
#[derive(Debug, Clone, PartialEq)]
pub struct GenShape {
    pub lo: i64,
    pub hi: i64,
    pub max_rank: usize,
}

impl Default for GenShape {
    fn default() -> GenShape {
        GenShape { lo: -3, hi: 3, max_rank: 4 }
    }
}

impl GenShape {
    fn params(&self, ring: RingTag, map_kind: MapKind) -> GenParams {
        GenParams {
            ring,
            lo: self.lo,
            hi: self.hi,
            max_rank: self.max_rank,
            map_kind,
        }
    }
}

/// Mapping tori of quasi-isomorphisms over fields have vanishing Novikov
/// cohomology in both directions; the two directional reports must agree.
///
/// Sample `i` works over `rings[i % rings.len()]`.
pub fn torus_field_suite(
    seed: u64,
    samples: usize,
    rings: &[RingTag],
    shape: &GenShape,
) -> SuiteReport {
    run_suite("torus-field", seed, samples, |i, s| {
        let ring = rings[i % rings.len()].clone();
        if !ring.is_field() {
            return Err(format!("{} is not a field", ring));
        }
        let (c, h) = random_complex_with_endo(s, &shape.params(ring, MapKind::QuasiIso))
            .map_err(|e| e.to_string())?;
        let t = mapping_torus(&c, &h, TorusVar::Z).map_err(|e| e.to_string())?;
        let lt = novikov_cohomology_field(&t, SeriesDir::Lt).map_err(|e| e.to_string())?;
        let rt = novikov_cohomology_field(&t, SeriesDir::Rt).map_err(|e| e.to_string())?;
        if lt != rt {
            return Err("directional reports disagree".into());
        }
        match lt.entries.iter().find(|(_, h)| !h.is_trivial()) {
            None => Ok(()),
            Some((n, h)) => Err(format!(
                "H^{} has dimension {} on the torus of a quasi-isomorphism",
                n, h.free_rank
            )),
        }
    })
}

/// Mapping tori of unimodular chain isomorphisms over `ZZ` are certified
/// acyclic in both directions, with no degree left inconclusive.
pub fn torus_int_iso_suite(seed: u64, samples: usize, shape: &GenShape) -> SuiteReport {
    run_suite("torus-int-iso", seed, samples, |_, s| {
        let (c, h) =
            random_complex_with_endo(s, &shape.params(RingTag::ZZ, MapKind::UnimodularIso))
                .map_err(|e| e.to_string())?;
        let t = mapping_torus(&c, &h, TorusVar::Z).map_err(|e| e.to_string())?;
        for dir in [SeriesDir::Lt, SeriesDir::Rt] {
            let v = novikov_verdict_int(&t, dir).map_err(|e| e.to_string())?;
            if v.has_inconclusive() {
                return Err(format!("inconclusive degree in direction {:?}", dir));
            }
            if !v.is_acyclic() {
                return Err(format!("uncertified degree in direction {:?}", dir));
            }
        }
        Ok(())
    })
}

fn random_vector(ring: &RingTag, len: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    (0..len)
        .map(|_| {
            let v: i64 = rng.gen_range(-4..=4);
            Elem::Scalar(Scalar::int(v))
                .cast(ring)
                .expect("small integers embed in every base ring")
        })
        .collect()
}

fn add_vec(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

/// A total cocycle that is visibly a coboundary: the window differential
/// applied to a random cochain supported on columns `[p_lo, skip_hi]`.
fn random_coboundary(
    w: &DoubleComplexWindow,
    n: i64,
    zero_top_column: bool,
    rng: &mut ChaCha8Rng,
) -> TotCocycle {
    let (p_lo, p_hi) = w.p_window();
    let mut cochain: BTreeMap<i64, Vec<Elem>> = BTreeMap::new();
    for p in p_lo..=p_hi {
        if zero_top_column && p == p_hi {
            continue;
        }
        let len = w.rank(p, n - 1 - p);
        if len > 0 {
            cochain.insert(p, random_vector(w.ring(), len, rng));
        }
    }
    let mut comps = BTreeMap::new();
    for p in p_lo..=p_hi {
        let mut x = vec![Elem::zero(w.ring()); w.rank(p, n - p)];
        if let Some(v) = cochain.get(&p) {
            x = add_vec(&x, &w.dv(p, n - 1 - p).mul_vec(v));
        }
        if let Some(v) = cochain.get(&(p - 1)) {
            x = add_vec(&x, &w.dh(p - 1, n - p).mul_vec(v));
        }
        comps.insert(p, x);
    }
    TotCocycle::new(n, comps)
}

fn contraction_sample(
    ring: RingTag,
    map_kind: MapKind,
    dir: SeriesDir,
    seed: u64,
) -> std::result::Result<(), String> {
    let params = GenParams {
        ring,
        lo: -2,
        hi: 2,
        max_rank: 3,
        map_kind,
    };
    let (c, h) = random_complex_with_endo(seed, &params).map_err(|e| e.to_string())?;
    let (p_lo, p_hi) = (-4, 3);
    let w = torus_bicomplex(&c, &h, p_lo, p_hi).map_err(|e| e.to_string())?;
    let n = c.lo() - 1 + (c.hi() - c.lo()) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let x = random_coboundary(&w, n, dir == SeriesDir::Rt, &mut rng);
    let y = match dir {
        SeriesDir::Lt => contract_lt(&w, &x),
        SeriesDir::Rt => contract_rt(&w, &x),
    }
    .map_err(|e| format!("contraction failed: {}", e))?;
    verify_witness(&w, &x, &y).map_err(|e| format!("witness re-check failed: {}", e))
}

/// Cocycles on mapping-torus windows of quasi-isomorphisms contract, and
/// the produced witnesses satisfy the defining identity on re-check.
///
/// The `Lt` suite runs over `F_5`; the `Rt` suite alternates between `ZZ`
/// (with unimodular isomorphisms, where the closed-form row solver works
/// integrally) and `F_2`.
pub fn contraction_suite(seed: u64, samples: usize, dir: SeriesDir) -> SuiteReport {
    let name = match dir {
        SeriesDir::Lt => "contract-lt",
        SeriesDir::Rt => "contract-rt",
    };
    run_suite(name, seed, samples, |i, s| match dir {
        SeriesDir::Lt => contraction_sample(RingTag::Fp(5), MapKind::QuasiIso, dir, s),
        SeriesDir::Rt => {
            if i % 2 == 0 {
                contraction_sample(RingTag::ZZ, MapKind::UnimodularIso, dir, s)
            } else {
                contraction_sample(RingTag::Fp(2), MapKind::QuasiIso, dir, s)
            }
        }
    })
}

/// The totalisation of the torus column grid is the mapping torus, block
/// for block, for random complexes and self-maps over rotating base rings.
pub fn identification_suite(seed: u64, samples: usize) -> SuiteReport {
    let rings = [RingTag::ZZ, RingTag::QQ, RingTag::Fp(2), RingTag::Fp(3)];
    run_suite("torus-identification", seed, samples, |i, s| {
        let params = GenParams {
            ring: rings[i % rings.len()].clone(),
            lo: -2,
            hi: 2,
            max_rank: 3,
            map_kind: MapKind::Random,
        };
        let (c, h) = random_complex_with_endo(s, &params).map_err(|e| e.to_string())?;
        let p_lo = -2 - (i % 2) as i64;
        check_tot_sum_is_torus(&c, &h, p_lo, 2).map_err(|e| e.to_string())
    })
}

/// The four modules exercised by the coefficientwise-isomorphism suite.
fn presentation_fixtures() -> Vec<(&'static str, FpPresentation)> {
    let rows = |grid: Vec<Vec<i64>>, cols: usize| {
        let elems = grid
            .into_iter()
            .map(|r| r.into_iter().map(|v| Elem::Scalar(Scalar::int(v))).collect())
            .collect::<Vec<Vec<Elem>>>();
        if elems.is_empty() {
            Matrix::zero(RingTag::ZZ, 0, cols)
        } else {
            Matrix::from_rows(RingTag::ZZ, elems).expect("fixture rows are rectangular")
        }
    };
    vec![
        ("ZZ", FpPresentation::new(rows(vec![], 1)).unwrap()),
        ("ZZ/4", FpPresentation::new(rows(vec![vec![4]], 1)).unwrap()),
        (
            "ZZ+ZZ/4+ZZ/6",
            FpPresentation::new(rows(vec![vec![0, 4, 0], vec![0, 0, 6]], 3)).unwrap(),
        ),
        (
            "coker[[2,1],[0,3]]",
            FpPresentation::new(rows(vec![vec![2, 0], vec![1, 3]], 2)).unwrap(),
        ),
    ]
}

fn random_fp_element(
    m: &FpPresentation,
    dir: SeriesDir,
    rng: &mut ChaCha8Rng,
) -> Vec<(Vec<Scalar>, SeriesWindow)> {
    let t = m.generators();
    let terms = rng.gen_range(1..=3);
    (0..terms)
        .map(|_| {
            let rep: Vec<Scalar> = (0..t).map(|_| Scalar::int(rng.gen_range(-9i64..=9))).collect();
            let lo = rng.gen_range(-5i64..=0);
            let hi = lo + 7;
            let coeffs: BTreeMap<i64, Scalar> = (lo..=hi)
                .filter_map(|e| {
                    if rng.gen_range(0..2) == 0 {
                        Some((e, Scalar::int(rng.gen_range(-9i64..=9))))
                    } else {
                        None
                    }
                })
                .collect();
            let f = SeriesWindow::new(dir, RingTag::ZZ, lo, hi, coeffs)
                .expect("random coefficients stay inside the window");
            (rep, f)
        })
        .collect()
}

/// Round trips through the module-coefficient reassembly: applying the
/// inverse and reassembling again reproduces the canonical series exactly,
/// for every fixture module, in both directions.
pub fn phi_roundtrip_suite(seed: u64, samples: usize) -> SuiteReport {
    run_suite("phi-roundtrip", seed, samples, |_, s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        for (name, m) in presentation_fixtures() {
            for dir in [SeriesDir::Lt, SeriesDir::Rt] {
                let x = random_fp_element(&m, dir, &mut rng);
                let v = phi_fp(&m, &x, dir).map_err(|e| format!("{}: {}", name, e))?;
                let back = phi_fp_inverse(&m, &v).map_err(|e| format!("{}: {}", name, e))?;
                let again = phi_fp(&m, &back, dir).map_err(|e| format!("{}: {}", name, e))?;
                if v != again {
                    return Err(format!("{}: round trip drifted ({:?})", name, dir));
                }
            }
        }
        Ok(())
    })
}

/// Cohomology dimensions over a prime field by exhaustive vector
/// enumeration: `dim ker` is counted directly, `rank` via rank–nullity.
///
/// Exponential in the total rank — intended as an oracle for small inputs.
pub fn brute_force_cohomology_dims(c: &CochainComplex) -> Result<BTreeMap<i64, usize>> {
    let p = match c.ring() {
        RingTag::Fp(p) => *p,
        other => {
            return Err(Error::NotAField(
                "brute-force cohomology".into(),
                other.to_string(),
            ))
        }
    };
    let kernel_dim = |m: &Matrix| -> usize {
        let cols = m.cols();
        let mut count = 0u64;
        let total = (p as u64).pow(cols as u32);
        for code in 0..total {
            let mut rem = code;
            let v: Vec<Elem> = (0..cols)
                .map(|_| {
                    let digit = rem % p as u64;
                    rem /= p as u64;
                    Elem::Scalar(Scalar::fp(p, digit as i64))
                })
                .collect();
            if m.mul_vec(&v).iter().all(Elem::is_zero) {
                count += 1;
            }
        }
        let mut dim = 0;
        let mut pw = 1u64;
        while pw < count {
            pw *= p as u64;
            dim += 1;
        }
        assert_eq!(pw, count, "kernel size must be a power of the field order");
        dim
    };
    let mut out = BTreeMap::new();
    for n in c.lo()..=c.hi() {
        let ker = kernel_dim(&c.d(n));
        let below = c.rank(n - 1) - kernel_dim(&c.d(n - 1));
        out.insert(n, ker - below);
    }
    Ok(out)
}

/// Field cohomology by elimination agrees with the exhaustive enumeration
/// oracle on random complexes over `F_2` and `F_3` of total rank at most 10.
pub fn cohomology_oracle_suite(seed: u64, samples: usize) -> SuiteReport {
    run_suite("cohomology-oracle", seed, samples, |i, s| {
        let ring = if i % 2 == 0 { RingTag::Fp(2) } else { RingTag::Fp(3) };
        let params = GenParams {
            ring,
            lo: -2,
            hi: 2,
            max_rank: 2,
            map_kind: MapKind::Random,
        };
        let (c, _) = random_complex_with_endo(s, &params).map_err(|e| e.to_string())?;
        let fast = cohomology_field(&c).map_err(|e| e.to_string())?;
        let slow = brute_force_cohomology_dims(&c).map_err(|e| e.to_string())?;
        for n in c.lo()..=c.hi() {
            let got = fast.entries.get(&n).map(|h| h.free_rank).unwrap_or(0);
            let want = slow.get(&n).copied().unwrap_or(0);
            if got != want {
                return Err(format!(
                    "H^{}: elimination says {}, enumeration says {}",
                    n, got, want
                ));
            }
        }
        Ok(())
    })
}
