use ifs_lab::certificate::{certify, chain_disk, condition_iii_worst, verify_chain, Variant, Verdict};
use ifs_lab::ifs::{overlap_itinerary, overlap_point, overlap_self_similarity, Letter};
use ifs_lab::landmarks::{all_landmarks, landmark, period_three_chain_exists, sector_inequalities, sector_s_contains};
use ifs_lab::{Complex, ParamSet};

#[test]
fn sector_landmarks_certify_in_m() {
    for id in 1..=4 {
        let lm = landmark(id).unwrap();
        let z = lm.root().unwrap();
        assert!(sector_s_contains(z));
        assert!(sector_inequalities(z).iter().all(|r| r.pass));
        let rep = certify(&lm.series, z, ParamSet::M).unwrap();
        assert_eq!(rep.verdict, Verdict::AccessibleM, "id {id}");
        assert!(rep.min_margin() > 1e-3, "id {id}: {}", rep.min_margin());
    }
}

#[test]
fn corollary_flags_follow_zero_counts() {
    for lm in all_landmarks() {
        let z = lm.root().unwrap();
        let rep = certify(&lm.series, z, ParamSet::M).unwrap();
        assert_eq!(rep.corollary, lm.expected.corollary_m0, "id {}", lm.id);
        if let Some(acc) = lm.expected.accessible_m {
            assert_eq!(rep.verdict.is_accessible(), acc, "id {}", lm.id);
        }
    }
}

#[test]
fn period_three_chain() {
    let lm = landmark(5).unwrap();
    let z = lm.root().unwrap();
    assert!(period_three_chain_exists(z).unwrap().iter().all(|r| r.pass));
    let g = verify_chain(&lm.series, z, 2, ParamSet::M).unwrap();
    assert!(g.all_pass());
    let b: Vec<_> = (0..4).map(|n| chain_disk(&lm.series, z, n).unwrap()).collect();
    // B_2 sits inside B_1 and touches its boundary: |ω₁ − ω₂| = |λ|² and
    // r₁ − r₂ = |λ|² exactly, so the open disk B_2 ⊂ B_1 with zero slack
    assert!((b[1].center - b[2].center).norm() - z.norm_sqr() < 1e-14);
    assert!(b[1].containment_margin(&b[2]).abs() < 1e-12);
    assert!(b[0].overlap_margin(&b[1]) > 0.0);
    assert!(b[2].overlap_margin(&b[3]) > 0.0);
}

#[test]
fn period_three_landmark_in_m0() {
    let lm = landmark(5).unwrap();
    let z = lm.root().unwrap();
    let rep = certify(&lm.series, z, ParamSet::M0).unwrap();
    assert_eq!(rep.verdict, Verdict::AccessibleM0, "{:?}", rep.verdict);
}

#[test]
fn unresolved_landmark_chain_is_broken() {
    let lm = landmark(6).unwrap();
    let z = lm.root().unwrap();
    let g = verify_chain(&lm.series, z, 3, ParamSet::M).unwrap();
    assert!(g.exists);
    assert!(!g.connected);
    assert!(g.levels.iter().all(|c| !c.intersects_next));
    // the first two levels still miss the instar; level 2 does not
    let disjoint: Vec<bool> = g.levels.iter().map(|c| c.disjoint).collect();
    assert_eq!(disjoint, [true, true, false]);
}

#[test]
fn algebra_matches_geometry() {
    for lm in all_landmarks() {
        let z = lm.root().unwrap();
        let p = lm.series.period();
        let g = verify_chain(&lm.series, z, 1, ParamSet::M).unwrap();
        for n in 0..p {
            let alg = condition_iii_worst(&lm.series, z, n, Variant::Doubled).unwrap().pass;
            assert_eq!(alg, g.level(n).unwrap().disjoint, "id {} n {n}", lm.id);
        }
    }
}

fn selfsim_residual(id: u8, zero_signs: &[Letter], k: usize) -> f64 {
    let lm = landmark(id).unwrap();
    let z = lm.root().unwrap();
    let len = lm.series.preperiod() + 3 + 3 * lm.series.period();
    let word = overlap_itinerary(&lm.series, zero_signs, len).unwrap();
    let xi = overlap_point(&lm.series, &word, z);
    overlap_self_similarity(&lm.series, z, xi, &word, 1, k).unwrap().max()
}

#[test]
fn overlap_self_similarity_residuals() {
    for k in 1..=2 {
        assert!(selfsim_residual(5, &[], k) <= 1e-10);
        assert!(selfsim_residual(2, &[Letter::Plus], k) <= 1e-10);
        assert!(selfsim_residual(2, &[Letter::Minus], k) <= 1e-10);
    }
}

#[test]
fn overlap_points() {
    let lm = landmark(2).unwrap();
    let z = lm.root().unwrap();
    let o = lm.series.overlap_set(z).unwrap();
    assert_eq!(o.points.len(), 2);
    for (xi, target) in o.points.iter().zip([-z.powu(3), z.powu(3)]) {
        assert!((xi - target).norm() < 1e-14);
    }
    let lm5 = landmark(5).unwrap();
    let o5 = lm5.series.overlap_set(lm5.root().unwrap()).unwrap();
    assert_eq!(o5.points, vec![Complex::new(0.0, 0.0)]);
}
