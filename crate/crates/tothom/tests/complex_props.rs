//! Structural properties of complexes, cones, and mapping tori over
//! seeded random inputs: Euler characteristics, shift behaviour, acyclic
//! cones, base change, and the torus rank pattern.

use tothom::complexes::{
    cohomology_field, cohomology_int, cone, is_quasi_iso, ChainMap, CochainComplex,
};
use tothom::gen::{random_complex_with_endo, GenParams, MapKind};
use tothom::novikov::{mapping_torus, TorusVar};
use tothom::rings::RingTag;

fn sample(seed: u64, ring: RingTag, kind: MapKind) -> (CochainComplex, ChainMap) {
    let params = GenParams {
        ring,
        lo: -3,
        hi: 3,
        max_rank: 4,
        map_kind: kind,
    };
    random_complex_with_endo(seed, &params).unwrap()
}

#[test]
fn euler_characteristic_matches_cohomology_over_fields() {
    for seed in 0..30 {
        let (c, _) = sample(seed, RingTag::Fp(5), MapKind::Random);
        let h = cohomology_field(&c).unwrap();
        let alternating: i64 = h
            .entries
            .iter()
            .map(|(n, d)| (-1i64).pow(n.rem_euclid(2) as u32) * d.free_rank as i64)
            .sum();
        assert_eq!(c.euler_characteristic(), alternating, "seed {seed}");
    }
}

#[test]
fn shifting_relocates_support_and_cohomology() {
    for seed in 0..10 {
        let (c, _) = sample(seed, RingTag::Fp(3), MapKind::Random);
        let s = c.shift(2);
        assert_eq!(s.lo(), c.lo() - 2);
        assert_eq!(s.hi(), c.hi() - 2);
        let before = cohomology_field(&c).unwrap();
        let after = cohomology_field(&s).unwrap();
        for (n, d) in &before.entries {
            assert_eq!(after.entries[&(n - 2)].free_rank, d.free_rank);
        }

        // An odd shift flips the differentials' signs but d*d = 0 and the
        // cohomology ranks are unaffected.
        let odd = c.shift(1);
        let h_odd = cohomology_field(&odd).unwrap();
        for (n, d) in &before.entries {
            assert_eq!(h_odd.entries[&(n - 1)].free_rank, d.free_rank);
        }
    }
}

#[test]
fn cone_of_the_identity_is_acyclic() {
    for seed in 0..10 {
        let (c, _) = sample(seed, RingTag::Fp(7), MapKind::Random);
        let cn = cone(&ChainMap::identity(&c));
        assert!(cohomology_field(&cn).unwrap().is_trivial(), "seed {seed}");
    }
    for seed in 0..10 {
        let (c, _) = sample(seed, RingTag::ZZ, MapKind::Random);
        let cn = cone(&ChainMap::identity(&c));
        assert!(cohomology_int(&cn).unwrap().is_trivial(), "seed {seed}");
    }
}

#[test]
fn rational_base_change_keeps_the_free_ranks() {
    for seed in 0..15 {
        let (c, _) = sample(seed, RingTag::ZZ, MapKind::Random);
        let over_zz = cohomology_int(&c).unwrap();
        let over_qq = cohomology_field(&c.base_change(&RingTag::QQ).unwrap()).unwrap();
        for (n, d) in &over_zz.entries {
            assert_eq!(
                over_qq.entries[n].free_rank, d.free_rank,
                "degree {n}, seed {seed}"
            );
        }
    }
}

#[test]
fn generated_quasi_isomorphisms_check_out() {
    for seed in 0..10 {
        let (_, h) = sample(seed, RingTag::Fp(5), MapKind::QuasiIso);
        assert!(is_quasi_iso(&h).unwrap(), "seed {seed}");
    }
}

#[test]
fn torus_ranks_add_adjacent_degrees() {
    for seed in 0..15 {
        let (c, h) = sample(seed, RingTag::ZZ, MapKind::Random);
        if c.is_zero_complex() {
            continue;
        }
        let t = mapping_torus(&c, &h, TorusVar::Z).unwrap();
        assert_eq!(t.ring(), &RingTag::laurent(RingTag::ZZ).unwrap());
        assert_eq!(t.lo(), c.lo() - 1);
        assert_eq!(t.hi(), c.hi());
        for m in t.lo()..=t.hi() {
            assert_eq!(t.rank(m), c.rank(m + 1) + c.rank(m), "degree {m}");
        }
    }
}
