//! Deterministic pseudo-random complexes and chain self-maps.
//!
//! Rather than rejection-sampling the square-zero law, a generated complex
//! is a direct sum of elementary pieces — single free summands ("spheres")
//! and two-term segments with one differential entry ("discs") — so
//! validity holds by construction while cohomology still varies freely.
//! The self-map assigns every piece a scalar and adds cross-terms between
//! compatible pieces in a fixed triangular order, which solves the
//! commutation constraint degreewise: forced-zero components stay zero and
//! the free components are drawn at random. Everything is driven by a
//! seeded ChaCha stream, so equal seeds give equal output on every
//! platform.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complexes::{ChainMap, CochainComplex};
use crate::linalg::Matrix;
use crate::rings::{Elem, RingTag, Scalar};
use crate::{Error, Result};

/// How the generated self-map relates to the generated complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// Arbitrary commuting map; may be zero or singular in places.
    Random,
    /// Unit scalar on every piece, so the map is an isomorphism of
    /// complexes (in particular a quasi-isomorphism).
    QuasiIso,
    /// Diagonal entries drawn from ±1, so every degreewise determinant
    /// is ±1 — a chain isomorphism with unimodular components.
    UnimodularIso,
}

/// Shape parameters for [`random_complex_with_endo`].
#[derive(Debug, Clone)]
pub struct GenParams {
    /// Base ring of the complex (Laurent rings are rejected).
    pub ring: RingTag,
    /// Lowest degree the complex may occupy.
    pub lo: i64,
    /// Highest degree the complex may occupy.
    pub hi: i64,
    /// Cap on the rank in any single degree; zero forces the zero complex.
    pub max_rank: usize,
    /// Kind of self-map to produce.
    pub map_kind: MapKind,
}

/// One direct summand of a generated complex.
#[derive(Debug, Clone, PartialEq)]
enum Piece {
    /// A free rank-one module in a single degree.
    Sphere { deg: i64 },
    /// Two free rank-one modules in degrees `deg`, `deg + 1` joined by
    /// multiplication with `coeff`.
    Disc { deg: i64, coeff: Scalar },
}

impl Piece {
    fn occupies(&self, n: i64) -> bool {
        match self {
            Piece::Sphere { deg } => *deg == n,
            Piece::Disc { deg, .. } => *deg == n || *deg + 1 == n,
        }
    }
}

/// Any ring scalar with small numerator and denominator, zero included.
fn random_scalar(ring: &RingTag, rng: &mut ChaCha8Rng) -> Scalar {
    match ring {
        RingTag::ZZ => Scalar::int(rng.gen_range(-3i64..=3)),
        RingTag::QQ => Scalar::rat(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=3)),
        RingTag::Fp(p) => Scalar::fp(*p, rng.gen_range(0..*p) as i64),
        RingTag::Laurent(_) => unreachable!("generation is restricted to base rings"),
    }
}

/// A unit of the ring: ±1 over ZZ, small nonzero rationals, nonzero
/// residues.
fn random_unit(ring: &RingTag, rng: &mut ChaCha8Rng) -> Scalar {
    match ring {
        RingTag::ZZ => random_sign(rng),
        RingTag::QQ => {
            let sign = if rng.gen_range(0..2) == 0 { 1 } else { -1 };
            Scalar::rat(sign * rng.gen_range(1i64..=3), rng.gen_range(1i64..=3))
        }
        RingTag::Fp(p) => Scalar::fp(*p, rng.gen_range(1..*p) as i64),
        RingTag::Laurent(_) => unreachable!("generation is restricted to base rings"),
    }
}

fn random_sign(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::int(if rng.gen_range(0..2) == 0 { 1 } else { -1 })
}

/// Cross-terms between pieces are only free where the commutation
/// constraint imposes nothing: equal-degree spheres, or discs in the same
/// degrees with the same differential entry (then the same scalar on both
/// slots commutes through).
fn cross_compatible(target: &Piece, source: &Piece) -> bool {
    match (target, source) {
        (Piece::Sphere { deg: a }, Piece::Sphere { deg: b }) => a == b,
        (Piece::Disc { deg: a, coeff: ca }, Piece::Disc { deg: b, coeff: cb }) => {
            a == b && ca == cb
        }
        _ => false,
    }
}

/// Draws a valid complex and a commuting self-map from the seed.
///
/// The degree window and per-degree rank cap are respected exactly; with
/// `max_rank == 0` the result is the zero complex with the zero map. Equal
/// seeds and parameters give identical output.
pub fn random_complex_with_endo(
    seed: u64,
    params: &GenParams,
) -> Result<(CochainComplex, ChainMap)> {
    if !params.ring.is_base() {
        return Err(Error::Infeasible(
            "complex generation works over base rings only".into(),
        ));
    }
    params.ring.validate()?;
    if params.lo > params.hi {
        return Err(Error::Infeasible(format!(
            "empty degree window [{},{}]",
            params.lo, params.hi
        )));
    }
    let ring = params.ring.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (params.hi - params.lo + 1) as usize;

    let mut pieces: Vec<Piece> = Vec::new();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for _ in 0..(width * params.max_rank) {
        let wants_disc = params.hi > params.lo && rng.gen_range(0..5) >= 2;
        let piece = if wants_disc {
            let deg = rng.gen_range(params.lo..params.hi);
            let coeff = random_scalar(&ring, &mut rng);
            Piece::Disc { deg, coeff }
        } else {
            let deg = rng.gen_range(params.lo..=params.hi);
            Piece::Sphere { deg }
        };
        let fits = match &piece {
            Piece::Sphere { deg } => ranks.get(deg).copied().unwrap_or(0) < params.max_rank,
            Piece::Disc { deg, .. } => {
                ranks.get(deg).copied().unwrap_or(0) < params.max_rank
                    && ranks.get(&(deg + 1)).copied().unwrap_or(0) < params.max_rank
            }
        };
        if !fits {
            continue;
        }
        for n in params.lo..=params.hi {
            if piece.occupies(n) {
                *ranks.entry(n).or_insert(0) += 1;
            }
        }
        pieces.push(piece);
    }
    ranks.retain(|_, r| *r > 0);

    // Slot layout: within each degree, occupying pieces in index order.
    let slot = |n: i64, i: usize| -> usize {
        pieces[..i].iter().filter(|p| p.occupies(n)).count()
    };
    let rank_at = |n: i64| ranks.get(&n).copied().unwrap_or(0);

    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    for n in params.lo..params.hi {
        let (rows, cols) = (rank_at(n + 1), rank_at(n));
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut d = Matrix::zero(ring.clone(), rows, cols);
        for (i, piece) in pieces.iter().enumerate() {
            if let Piece::Disc { deg, coeff } = piece {
                if *deg == n {
                    d.set(slot(n + 1, i), slot(n, i), Elem::Scalar(coeff.clone()));
                }
            }
        }
        diffs.insert(n, d);
    }
    let c = CochainComplex::new(ring.clone(), ranks.clone(), diffs)
        .expect("piecewise differentials satisfy the square-zero law by construction");

    let diag: Vec<Scalar> = pieces
        .iter()
        .map(|_| match params.map_kind {
            MapKind::Random => random_scalar(&ring, &mut rng),
            MapKind::QuasiIso => random_unit(&ring, &mut rng),
            MapKind::UnimodularIso => random_sign(&mut rng),
        })
        .map(|s| match params.map_kind {
            MapKind::UnimodularIso => s.cast(&ring).expect("±1 lives in every base ring"),
            _ => s,
        })
        .collect();
    let mut cross: Vec<(usize, usize, Scalar)> = Vec::new();
    for i in 0..pieces.len() {
        for j in 0..i {
            if cross_compatible(&pieces[j], &pieces[i]) && rng.gen_range(0..3) == 0 {
                cross.push((j, i, random_scalar(&ring, &mut rng)));
            }
        }
    }

    let mut comps: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&n, &r) in &ranks {
        let mut h = Matrix::zero(ring.clone(), r, r);
        for (i, piece) in pieces.iter().enumerate() {
            if piece.occupies(n) {
                let s = slot(n, i);
                h.set(s, s, Elem::Scalar(diag[i].clone()));
            }
        }
        for (j, i, x) in &cross {
            if pieces[*i].occupies(n) {
                h.set(slot(n, *j), slot(n, *i), Elem::Scalar(x.clone()));
            }
        }
        comps.insert(n, h);
    }
    let h = ChainMap::new(c.clone(), c.clone(), comps)
        .expect("piecewise self-maps commute with the differential by construction");
    Ok((c, h))
}
