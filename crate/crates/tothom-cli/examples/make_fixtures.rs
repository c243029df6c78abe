//! Regenerates the fixture files under `fixtures/`.
//!
//! Run `cargo run -p tothom-cli --example make_fixtures` after changing
//! the JSON forms; the files are committed, and the CLI tests compare
//! against them byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use tothom::bicomplex::{torus_bicomplex, DoubleComplexWindow, TotCocycle};
use tothom::complexes::{ChainMap, CochainComplex};
use tothom::json::{
    chain_map_to_value, cocycle_to_value, complex_to_value, to_canonical_string, window_to_value,
};
use tothom::linalg::Matrix;
use tothom::novikov::{mapping_torus, TorusVar};
use tothom::rings::{Elem, RingTag, Scalar};

fn write(dir: &Path, name: &str, v: &Value) {
    let path = dir.join(name);
    fs::write(&path, to_canonical_string(v)).expect("fixture directory is writable");
    println!("wrote {}", path.display());
}

/// `x = D(w)` for the cochain `w` supported on columns `[p_lo, p_hi - 1]`
/// with the deterministic entry pattern `(p + q + 3) mod 5`; a coboundary
/// is a cocycle, and leaving the top column empty keeps the row-wise
/// closed-form contraction applicable.
fn coboundary_fixture(w: &DoubleComplexWindow, n: i64) -> TotCocycle {
    let (p_lo, p_hi) = w.p_window();
    let mut cochain: BTreeMap<i64, Vec<Elem>> = BTreeMap::new();
    for p in p_lo..p_hi {
        let q = n - 1 - p;
        let len = w.rank(p, q);
        if len > 0 {
            let vals = (0..len)
                .map(|i| Elem::Scalar(Scalar::fp(5, (p + q + 3 + i as i64).rem_euclid(5))))
                .collect();
            cochain.insert(p, vals);
        }
    }
    let mut comps = BTreeMap::new();
    for p in p_lo..=p_hi {
        let mut x = vec![Elem::zero(w.ring()); w.rank(p, n - p)];
        if let Some(v) = cochain.get(&p) {
            let dv = w.dv(p, n - 1 - p).mul_vec(v);
            x = x.iter().zip(&dv).map(|(a, b)| a.add(b)).collect();
        }
        if let Some(v) = cochain.get(&(p - 1)) {
            let dh = w.dh(p - 1, n - p).mul_vec(v);
            x = x.iter().zip(&dh).map(|(a, b)| a.add(b)).collect();
        }
        comps.insert(p, x);
    }
    TotCocycle::new(n, comps)
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    fs::create_dir_all(dir.join("invalid")).expect("fixture directory is writable");

    // The integers in degree 0, the times-2 self-map, and its mapping torus.
    let c = CochainComplex::new(RingTag::ZZ, BTreeMap::from([(0, 1)]), BTreeMap::new()).unwrap();
    write(&dir, "c_z2.json", &complex_to_value(&c));

    let two = Matrix::from_rows(RingTag::ZZ, vec![vec![Elem::Scalar(Scalar::int(2))]]).unwrap();
    let h = ChainMap::new(c.clone(), c.clone(), BTreeMap::from([(0, two)])).unwrap();
    write(
        &dir,
        "h_times2.json",
        &chain_map_to_value(&h, "c_z2.json", "c_z2.json"),
    );

    let t = mapping_torus(&c, &h, TorusVar::Z).unwrap();
    write(&dir, "torus_x2.json", &complex_to_value(&t));

    write(
        &dir,
        "zero.json",
        &complex_to_value(&CochainComplex::zero_complex(RingTag::ZZ)),
    );

    // A torus window over F_5 with a contractible cocycle on it.
    let ring = RingTag::Fp(5);
    let d = Matrix::from_rows(ring.clone(), vec![vec![Elem::Scalar(Scalar::fp(5, 2))]]).unwrap();
    let c5 = CochainComplex::new(
        ring.clone(),
        BTreeMap::from([(0, 1), (1, 1)]),
        BTreeMap::from([(0, d)]),
    )
    .unwrap();
    let h5 = ChainMap::identity(&c5);
    let w = torus_bicomplex(&c5, &h5, -3, 2).unwrap();
    write(&dir, "bicomplex_f5.json", &window_to_value(&w));
    let x = coboundary_fixture(&w, 0);
    write(&dir, "cocycle_f5.json", &cocycle_to_value(&x, w.ring()));

    // Invalid documents, written literally since the constructors refuse
    // to build them.
    let one = json!({ "cols": 1, "entries": [["1"]], "rows": 1 });
    write(
        &dir.join("invalid"),
        "dd_nonzero.json",
        &json!({
            "diff": { "0": one, "1": one },
            "fmt": 1,
            "hi": 2,
            "lo": 0,
            "ranks": { "0": 1, "1": 1, "2": 1 },
            "ring": "ZZ",
        }),
    );
    write(
        &dir.join("invalid"),
        "bad_scalar.json",
        &json!({
            "diff": { "0": { "cols": 1, "entries": [["x"]], "rows": 1 } },
            "fmt": 1,
            "hi": 1,
            "lo": 0,
            "ranks": { "0": 1, "1": 1 },
            "ring": "ZZ",
        }),
    );
}
