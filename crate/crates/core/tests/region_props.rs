use proptest::prelude::*;
use qbs::moments::point_subnormality_oracle;
use qbs::sweep::frontier_distance;
use qbs::{classify, JointSpectrum, RegionId};

const EPS: f64 = 1e-9;

fn verdict(sigma: &JointSpectrum, r: RegionId) -> bool {
    classify(sigma, r, EPS).unwrap().verdict
}

fn spectrum() -> impl Strategy<Value = JointSpectrum> {
    let lattice = prop::sample::select(vec![0.0, 0.3, 0.6, 0.8, 1.0, 1.2, 2.0]);
    let point = prop_oneof![
        (0.0f64..2.5, 0.0f64..2.5),
        (lattice.clone(), lattice),
        (0.0f64..std::f64::consts::FRAC_PI_2).prop_map(|a| (a.cos(), a.sin())),
    ];
    prop::collection::vec(point, 1..6).prop_map(|p| JointSpectrum::from_pairs(&p).unwrap())
}

proptest! {
    #[test]
    fn m_isometric_is_both(sigma in spectrum(), m in 1u32..=6) {
        prop_assert_eq!(
            verdict(&sigma, RegionId::MIsometric(m)),
            verdict(&sigma, RegionId::MContractive(m)) && verdict(&sigma, RegionId::MExpansive(m))
        );
    }

    #[test]
    fn isometry_is_contraction_and_expansion(sigma in spectrum()) {
        prop_assert_eq!(
            verdict(&sigma, RegionId::Isometry),
            verdict(&sigma, RegionId::Contraction) && verdict(&sigma, RegionId::Expansion)
        );
    }

    #[test]
    fn region_chain(sigma in spectrum()) {
        if verdict(&sigma, RegionId::TwoIsometry) {
            prop_assert!(verdict(&sigma, RegionId::MExpansive(2)));
        }
        if verdict(&sigma, RegionId::MExpansive(2)) {
            prop_assert!(verdict(&sigma, RegionId::Expansion));
        }
    }

    #[test]
    fn constant_e_reduces_to_contraction(ss in prop::collection::vec(0.0f64..1.5, 1..5), alpha in 0.01f64..1.5) {
        let pts: Vec<(f64, f64)> = ss.iter().map(|&s| (s, alpha)).collect();
        let sigma = JointSpectrum::from_pairs(&pts).unwrap();
        let max_s = ss.iter().copied().fold(0.0, f64::max);
        let m = max_s * max_s + alpha * alpha;
        prop_assume!((m - 1.0).abs() > 1e-6);
        prop_assert_eq!(verdict(&sigma, RegionId::Subnormal), verdict(&sigma, RegionId::Contraction));
        prop_assert_eq!(verdict(&sigma, RegionId::Subnormal), m <= 1.0);
    }

    #[test]
    fn outside_disk_with_large_s(pts in prop::collection::vec((0.0f64..3.0, 0.0f64..3.0), 1..5), s_big in 1.01f64..3.0, t in 0.0f64..2.0) {
        let mut pts: Vec<(f64, f64)> = pts.into_iter().filter(|p| p.0 * p.0 + p.1 * p.1 >= 1.0).collect();
        pts.push((s_big, t));
        let sigma = JointSpectrum::from_pairs(&pts).unwrap();
        prop_assert!(verdict(&sigma, RegionId::DeltaRegular));
        prop_assert!(!verdict(&sigma, RegionId::MExpansive(2)));
        prop_assert!(verdict(&sigma, RegionId::DualSubnormal));
    }

    #[test]
    fn oracle_agrees_away_from_frontier(s in 0.0f64..2.5, t in 0.0f64..2.5) {
        prop_assume!(frontier_distance(s, t) >= 1e-6);
        // With s > 1 the order-3 Hankel entries grow like s^14, and the relative
        // PSD tolerance hides violations with t below about 1e-2.
        prop_assume!(s <= 1.0 || t >= 0.02);
        let sigma = JointSpectrum::from_pairs(&[(s, t)]).unwrap();
        prop_assert_eq!(verdict(&sigma, RegionId::Subnormal), point_subnormality_oracle(s, t, 3).passed());
    }
}

#[test]
fn che_alias_matches_lattice_verdicts() {
    let sigma = JointSpectrum::from_pairs(&[(1.0, 0.5), (0.6, 0.8)]).unwrap();
    assert!(verdict(&sigma, RegionId::CompletelyHyperexpansive));
    let sigma = JointSpectrum::from_pairs(&[(2.0, 0.0)]).unwrap();
    assert!(!verdict(&sigma, RegionId::CompletelyHyperexpansive));
    assert!(verdict(&sigma, RegionId::DeltaRegular));
}
