//! The three routes to the class must agree exactly, and the structural
//! properties must hold on everything they produce.

use mbar_core::analysis::{asymptotic_scan, is_unimodal, ulc_check};
use mbar_core::formulas::{
    betti_table, betti_via_cnki, class_via_stirling, resolve_convention, Method,
};
use mbar_core::strata::{class_via_strata, stratum_count};
use mbar_core::{BigInt, BigRational};

#[test]
fn three_methods_agree_exactly_up_to_8() {
    let conv = resolve_convention(6).unwrap();
    for n in 3..=8u32 {
        let by_strata = class_via_strata(n).unwrap();
        let by_stirling = class_via_stirling(n, &conv).unwrap();
        assert_eq!(by_stirling, by_strata, "stirling vs strata at n={n}");
        for l in 0..=n - 3 {
            assert_eq!(
                betti_via_cnki(n, l).unwrap(),
                by_strata.coeff(l as usize),
                "rank formula vs strata at n={n}, l={l}"
            );
        }
    }
}

#[test]
fn dispatch_agrees_across_methods() {
    for n in 3..=8u32 {
        let s = betti_table(n, Method::Stirling).unwrap();
        let c = betti_table(n, Method::Cnki).unwrap();
        let o = betti_table(n, Method::Strata).unwrap();
        assert_eq!(s, c, "n={n}");
        assert_eq!(s, o, "n={n}");
    }
}

#[test]
fn hand_verified_anchors() {
    assert_eq!(stratum_count(5).unwrap(), BigInt::from(26));
    assert_eq!(class_via_strata(4).unwrap().to_string(), "1 + L");
    assert_eq!(class_via_strata(5).unwrap().to_string(), "1 + 5*L + L^2");
}

#[test]
fn structural_properties_hold_through_15() {
    for n in 3..=15u32 {
        let table = betti_table(n, Method::Stirling).unwrap();
        // construction already enforces symmetry, positivity, boundary ones
        assert!(is_unimodal(table.ranks()), "unimodal at n={n}");
        assert!(
            ulc_check(&table).all_hold,
            "normalized log-concavity at n={n}"
        );
    }
}

#[test]
fn scaled_asymptotic_error_stays_bounded_under_doubling() {
    // l = 1 with n doubling: n^2 |ratio - 1| peaks at the smallest n
    // (about 9 at n = 10) and collapses from there
    let report = asymptotic_scan(1, &[10, 20, 40, 80], Method::Cnki).unwrap();
    let bound = BigRational::from_integer(BigInt::from(16));
    for e in &report.entries {
        assert!(e.scaled <= bound, "scaled blew up at n={}", e.n);
    }
    for w in report.entries.windows(2) {
        assert!(w[1].scaled < w[0].scaled, "no decay at n={}", w[1].n);
    }
    assert_eq!(report.empirical_n, Some(20));
}
