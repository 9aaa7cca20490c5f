//! The benchmark inputs must be valid instances, or the timings mean nothing.

use twostep_core::constructions::half_split;
use twostep_core::covers::{cover_r1, cover_r2};
use twostep_core::*;

#[test]
fn benchmark_inputs_are_valid() {
    assert!(half_split(2, 48, 2, &cover_r2(2).unwrap()).is_ok());
    assert!(verify_on_torus(&cover_r1(2).unwrap(), 60, 1)
        .unwrap()
        .passes());
    assert!(!exhaustive_cover_search(2, 7, 3, SearchLimits::default())
        .unwrap()
        .is_found());
}
