use std::path::Path;

use profdecomp::decompose::{
    core_candidates, decompose_full, eta_surrogate, extract_cores, extract_scales, CoreOptions, DecomposeConfig,
    ScaleOptions,
};
use profdecomp::numerics::{Dimension, QuadOptions};
use profdecomp::synth::{
    elementary_profile, spread_remainder, AngularProfile, FamilyManifest, PatchOptions, Profile, ScaleLaw,
};

fn d1() -> Dimension {
    Dimension::new(1).unwrap()
}

fn bump() -> Profile {
    Profile::preset("bump").unwrap()
}

#[test]
fn single_concentration_gives_one_scale() {
    let n_list = [6u32, 8, 10, 12];
    let phi: Vec<AngularProfile> =
        n_list.iter().map(|n| elementary_profile(d1(), f64::from(n * n), [0.0, 0.0], &bump()).unwrap()).collect();
    let laws = [ScaleLaw::Named("n".into()), ScaleLaw::Named("n^2".into())];
    let ext = extract_scales(&phi, &n_list, &laws, &ScaleOptions::default(), &QuadOptions::default()).unwrap();
    assert_eq!(ext.scales.len(), 1);
    let s = &ext.scales[0];
    assert_eq!(s.law, "n^2");
    for (a, n) in s.alpha.iter().zip(&n_list) {
        let r = a / f64::from(n * n);
        assert!((0.5..=2.0).contains(&r), "ratio {r}");
    }
    assert!(!ext.exhausted);
}

#[test]
fn two_scales_are_separated() {
    let n_list = [5u32, 7, 9];
    let q = QuadOptions::default();
    let phi: Vec<AngularProfile> = n_list
        .iter()
        .map(|n| {
            let a = elementary_profile(d1(), f64::from(*n), [0.0, 0.0], &bump()).unwrap();
            a.sum(&elementary_profile(d1(), f64::from(n * n), [0.0, 0.0], &bump()).unwrap())
        })
        .collect();
    let laws = [ScaleLaw::Named("n".into()), ScaleLaw::Named("n^2".into())];
    let ext = extract_scales(&phi, &n_list, &laws, &ScaleOptions::default(), &q).unwrap();
    assert_eq!(ext.scales.len(), 2);
    let last = n_list.len() - 1;
    let (g1, g2) = (&ext.scales[0].components[last], &ext.scales[1].components[last]);
    let cross = g1.inner(g2, 0.0, 200.0, &q).unwrap().norm();
    assert!(cross < 1e-3, "cross {cross}");
}

#[test]
fn weak_remainder_gives_no_scale() {
    let r = spread_remainder(d1(), 0.01, 0, 8, 4).unwrap();
    let ext =
        extract_scales(&[r.clone(), r], &[1, 2], &[], &ScaleOptions::default(), &QuadOptions::default()).unwrap();
    assert!(ext.scales.is_empty());
}

#[test]
fn eta_prefers_true_core() {
    let q = QuadOptions::default();
    let phi = elementary_profile(d1(), 10.0, [0.0, 0.0], &bump()).unwrap();
    let cand = [[0.3, 0.1], [0.0, 0.0], [-0.5, 0.2]];
    let eta = eta_surrogate(&phi, &cand, &CoreOptions::default(), &q).unwrap();
    assert_eq!(eta.argmax, Some([0.0, 0.0]));
    assert!(eta.eta <= phi.norm_sq(&q).unwrap() * (1.0 + 1e-9));
    let zero = AngularProfile::zero(d1());
    assert_eq!(eta_surrogate(&zero, &cand, &CoreOptions::default(), &q).unwrap().eta, 0.0);
}

#[test]
fn offset_core_is_recovered() {
    let q = QuadOptions::default();
    let x = [0.3, -0.2];
    let phi = elementary_profile(d1(), 12.0, x, &bump()).unwrap();
    let cand = core_candidates(&phi, &PatchOptions::default(), 8).unwrap();
    assert!(cand.iter().any(|c| (c[0] - x[0]).hypot(c[1] - x[1]) < 0.02));
    let ce = extract_cores(&phi, 12.0, &CoreOptions::default(), &PatchOptions::default(), &q).unwrap();
    assert_eq!(ce.cores.len(), 1);
    let c = ce.cores[0].core;
    assert!((c[0] - x[0]).hypot(c[1] - x[1]) < 0.02, "{c:?}");
    let err = phi.difference(&ce.cores[0].phi.demodulated([-c[0], -c[1]])).norm_sq(&q).unwrap().sqrt();
    assert!(err < 0.05, "err {err}");
}

#[test]
fn two_close_cores_are_both_found() {
    // |x1 - x2| = e^{-α/2}: a = 1/2, and the profiles live on disjoint s-ranges
    let q = QuadOptions::default();
    let alpha: f64 = 10.0;
    let x2 = [(-alpha / 2.0).exp(), 0.0];
    let early = Profile::bump(0.3, 0.15).unwrap();
    let late = Profile::bump(1.0, 0.3).unwrap();
    let phi = elementary_profile(d1(), alpha, [0.0, 0.0], &early)
        .unwrap()
        .sum(&elementary_profile(d1(), alpha, x2, &late).unwrap());
    let ce = extract_cores(&phi, alpha, &CoreOptions::default(), &PatchOptions::default(), &q).unwrap();
    assert!(ce.cores.len() >= 2, "{:?}", ce.cores.iter().map(|c| c.core).collect::<Vec<_>>());
    let found = |x: [f64; 2]| ce.cores.iter().any(|c| (c.core[0] - x[0]).hypot(c.core[1] - x[1]) < 1e-3);
    assert!(found([0.0, 0.0]) && found(x2));
}

#[test]
fn zero_component_has_no_cores() {
    let z = AngularProfile::zero(d1());
    let ce = extract_cores(&z, 5.0, &CoreOptions::default(), &PatchOptions::default(), &QuadOptions::default())
        .unwrap();
    assert!(ce.cores.is_empty());
    assert!(ce.remainder.is_empty());
}

#[test]
fn pure_remainder_decomposes_to_nothing() {
    let m = FamilyManifest::from_json(
        r#"{"dimension": 1, "n_list": [2, 3, 4], "remainder": {"epsilon": 0.02, "k0": 0, "k1": 6, "seed": 1}}"#,
    )
    .unwrap();
    let fam = m.build(Path::new(".")).unwrap();
    let rep = decompose_full(&fam, &DecomposeConfig::default()).unwrap();
    assert!(rep.triples.is_empty());
    let q = QuadOptions::default();
    let diff = rep.remainders[2].difference(&rep.inputs[2]).norm_sq(&q).unwrap();
    assert!(diff < 1e-20);
}

#[test]
fn moser_family_yields_one_triple() {
    let m = FamilyManifest::from_json(r#"{"dimension": 1, "n_list": [40, 80, 160], "moser": "n"}"#).unwrap();
    let fam = m.build(Path::new(".")).unwrap();
    let cfg = DecomposeConfig {
        scales: ScaleOptions { r_w: 64.0, run_fraction: 0.01, ..ScaleOptions::default() },
        ..DecomposeConfig::default()
    };
    let rep = decompose_full(&fam, &cfg).unwrap();
    assert_eq!(rep.triples.len(), 1, "{:?}", rep.errors);
    let t = &rep.triples[0];
    let last = 2;
    let alpha = 160.0;
    let truth = elementary_profile(d1(), alpha, [0.0, 0.0], &Profile::preset("moser-L").unwrap()).unwrap();
    let q = QuadOptions::default();
    let err = truth.difference(t.parts[last].as_ref().unwrap()).norm_sq(&q).unwrap().sqrt();
    assert!(err <= 0.1, "L² error {err}");
    assert!(rep.ledger[last].relative < 0.05);
}
