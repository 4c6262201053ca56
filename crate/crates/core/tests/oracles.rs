mod common;

use std::collections::{BTreeSet, HashSet};

use isogroup::catalog;
use isogroup::dual::{little_group, rep_set, wave_orbits};
use isogroup::quotient::QuotientGroup;
use isogroup::splitting::{a_coeff, order_two_elements};

#[test]
fn m0_matches_box_oracle() {
    for entry in catalog::all() {
        let report = entry.spec.find_m0().unwrap();
        assert_eq!(common::brute_m0(&entry.spec, report.m0_bound), Some(report.m0), "{}", entry.name);
        assert_eq!(report.m0, entry.expected.m0, "{}", entry.name);
    }
}

#[test]
fn twist_power_normality_by_exponent() {
    let spec = catalog::twist_e8(1.0, 2f64.sqrt());
    for m in 1..=8 {
        assert_eq!(spec.is_power_normal(m), common::power_normal_by_box(&spec, m, 2), "m = {m}");
    }
    assert!(!spec.is_power_normal(2));
}

#[test]
fn quotient_orders_by_closure() {
    for entry in catalog::all() {
        let m0 = entry.expected.m0;
        for n in [m0, 2 * m0] {
            let q = QuotientGroup::build(&entry.spec, n).unwrap();
            let all = q.group.closure(&q.generator_indices());
            assert_eq!(all.len(), q.order(), "{} N={n}", entry.name);
        }
    }
}

#[test]
fn pg_orbits_match_mirror_oracle() {
    let spec = catalog::pg();
    let rs = rep_set(&spec, 0).unwrap();
    let lg = little_group(&spec, &rs, 0).unwrap();
    for n in 1..=6 {
        let got: HashSet<BTreeSet<(i64, i64)>> = wave_orbits(&spec, &lg, n as u64)
            .unwrap()
            .into_iter()
            .map(|l| l.members.into_iter().map(|m| (m[0], m[1])).collect())
            .collect();
        let want: HashSet<BTreeSet<(i64, i64)>> =
            common::mirror_orbits(n).into_iter().map(|o| o.into_iter().collect()).collect();
        assert_eq!(got, want, "N = {n}");
    }
}

#[test]
fn a_coeff_by_scan() {
    for n in 1..40i64 {
        for r in 1..=12i64 {
            if num_integer::Integer::gcd(&n, &r) != 1 {
                assert!(a_coeff(n, r).is_err());
                continue;
            }
            let want = (-n + 1..=0).find(|a| (a * r).rem_euclid(n) == 1 % n).unwrap();
            assert_eq!(a_coeff(n, r).unwrap(), want, "n = {n}, r = {r}");
        }
    }
}

#[test]
fn glide_has_no_involutions_but_mirror_does() {
    assert!(order_two_elements(&catalog::pg(), 6).is_empty());
    assert!(!order_two_elements(&catalog::pm(), 2).is_empty());
}

#[test]
fn class_count_equals_irrep_count() {
    for entry in catalog::all() {
        let q = QuotientGroup::build(&entry.spec, entry.expected.m0).unwrap();
        let irr = isogroup::repr::irreps(&q.group, 3).unwrap();
        assert_eq!(irr.irreps.len(), common::conjugacy_class_count(&q.group), "{}", entry.name);
        assert_eq!(irr.sum_of_squares(), q.order());
    }
}
