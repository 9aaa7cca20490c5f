use std::sync::Arc;

use proptest::prelude::*;

use twostep_core::constructions::{
    half_split, half_split_target, linf, tile_torus, torus_bands, unordered_deviation,
    weighted_average,
};
use twostep_core::covers::{cover_r1, cover_r2, lift_cover, CoverPredicate};
use twostep_core::enumerate::sample_balanced;
use twostep_core::frac::q;
use twostep_core::region::{d_region, torus2_region, x_region};
use twostep_core::torus2::{type_census, verify_t2_claims, verify_t2_inequality};
use twostep_core::*;

#[test]
fn half_split_error_halves_when_k_doubles() {
    let cover = cover_r2(2).unwrap();
    let target = half_split_target(2, 2);
    let dev = |k| {
        let (c, _) = half_split(2, k, 2, &cover).unwrap();
        unordered_deviation(&p2(&c), &target)
    };
    let (d24, d48) = (dev(24), dev(48));
    assert!(d48 > q(0, 1));
    let ratio = &d24 / &d48;
    assert!(ratio >= q(3, 2) && ratio <= q(3, 1), "ratio {ratio}");
}

#[test]
fn extremal_colourings_meet_the_torus_bound() {
    for (r, k) in [(2, 24), (2, 48), (1, 30), (1, 50)] {
        let cover = if r == 1 { cover_r1(2) } else { cover_r2(2) }.unwrap();
        let (c, _) = half_split(2, k, r, &cover).unwrap();
        assert!(verify_t2_claims(&c).unwrap().passes(), "r={r} k={k}");
        let ineq = verify_t2_inequality(&c).unwrap();
        assert!(ineq.passes(), "r={r} k={k}: {}", ineq.to_json_value());
        // Swapping colours gives the mirrored point, which must satisfy it too.
        assert!(verify_t2_inequality(&c.swapped()).unwrap().passes());
    }
}

#[test]
fn tiling_error_shrinks_with_block_size() {
    let dev = |k| {
        let (a, _) = half_split(2, k, 2, &cover_r2(2).unwrap()).unwrap();
        let b = torus_bands(2, k).unwrap();
        let c = tile_torus(&a, &b, 1, 2).unwrap();
        let avg = weighted_average(&[(p2(&a), 1), (p2(&b), 3)]);
        linf(&p2(&c), &avg)
    };
    let (d12, d24) = (dev(12), dev(24));
    assert!(d24 < d12, "{d12} -> {d24}");
}

#[test]
fn file_formats_round_trip() {
    let g = Graph::cubic40();
    let back = Graph::from_json(&g.to_json()).unwrap();
    assert_eq!(back.edges(), g.edges());

    for region in [d_region(3).unwrap(), x_region(3).unwrap(), torus2_region()] {
        let back = ConvexRegion::from_json(&region.to_json()).unwrap();
        assert_eq!(back.vertices(), region.vertices());
    }

    let lifted = lift_cover(&cover_r1(2).unwrap(), 3).unwrap();
    let back = CoverPredicate::from_json(&lifted.to_json()).unwrap();
    assert_eq!(back, lifted);
    assert!(verify_on_torus(&back, 15, 3).unwrap().passes());
}

#[test]
fn found_covers_become_predicates() {
    let out = exhaustive_cover_search(2, 4, 4, SearchLimits::default()).unwrap();
    let pred = out.as_predicate(4).unwrap();
    let json = pred.to_json();
    let back = CoverPredicate::from_json(&json).unwrap();
    assert!(verify_on_torus(&back, 8, 4).unwrap().passes());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn census_partitions_b1(half in 3usize..6, seed in any::<u64>()) {
        let k = 2 * half;
        let g = Arc::new(Graph::torus(2, k).unwrap());
        let red = sample_balanced(g.n(), 1, seed).remove(0);
        let c = Colouring::new(g.clone(), red).unwrap();
        let census = type_census(&c).unwrap();
        let prof = c.degree_profile();
        prop_assert_eq!(census.t1 + census.t2 + census.t3, prof.blue[1]);
        prop_assert_eq!(census.y_size, prof.red[1] + prof.red[2] + prof.red[3]);
        let claims = verify_t2_claims(&c).unwrap();
        prop_assert!(claims.passes(), "{:?}", claims);
        prop_assert!(verify_t2_inequality(&c).unwrap().passes());
    }

    #[test]
    fn sampled_points_lie_in_container(seed in any::<u64>(), which in 0usize..3) {
        let g = Arc::new(match which {
            0 => Graph::cubic40(),
            1 => Graph::torus(3, 4).unwrap(),
            _ => Graph::c4_union(5).unwrap(),
        });
        let red = sample_balanced(g.n(), 1, seed).remove(0);
        let c = Colouring::new(g.clone(), red).unwrap();
        let region = d_region(g.d()).unwrap();
        prop_assert!(region.contains(&p2(&c).to_point()).is_inside());
    }
}
