//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashSet;

use num_complex::Complex64;

use isogroup::group::{box_points, GroupSpec};
use isogroup::isometry::Isometry;
use isogroup::quotient::FiniteGroup;

/// All integer vectors in `[-b, b]^d`.
pub fn cube(d: usize, b: i64) -> Vec<Vec<i64>> {
    box_points(d, (2 * b + 1) as u64).map(|v| v.iter().map(|x| x - b).collect()).collect()
}

/// `t(n)` built by literal repeated multiplication of the lifts.
pub fn section_naive(spec: &GroupSpec, n: &[i64]) -> Isometry {
    let mut acc = Isometry::identity(spec.d1, spec.d2);
    for (g, &k) in spec.t_lifts.iter().zip(n) {
        let step = if k < 0 { g.inverse() } else { g.clone() };
        for _ in 0..k.abs() {
            acc = acc.compose(&step).unwrap();
        }
    }
    acc
}

fn power_naive(g: &Isometry, m: u64) -> Isometry {
    (0..m).fold(Isometry::identity(g.d1(), g.d2()), |acc, _| acc.compose(g).unwrap())
}

/// Membership in `T^m = {t^m : t ∈ T}`: the translation fixes the only
/// candidate root, which is then powered and compared.
fn in_power_set(spec: &GroupSpec, m: u64, g: &Isometry) -> bool {
    if !g.p.is_identity() {
        return false;
    }
    let Some(tau) = g.tau.to_ints() else { return false };
    if tau.iter().any(|x| x % m as i64 != 0) {
        return false;
    }
    let root: Vec<i64> = tau.iter().map(|x| x / m as i64).collect();
    power_naive(&section_naive(spec, &root), m).approx_equal(g, 1e-8)
}

/// `T^m ◁ G`, checked on a box of section exponents: closure under
/// products and inverses, and conjugation by every generator.
pub fn power_normal_by_box(spec: &GroupSpec, m: u64, b: i64) -> bool {
    let powers: Vec<Isometry> =
        cube(spec.d2, b).iter().map(|n| power_naive(&section_naive(spec, n), m)).collect();
    let gens = spec.generators();
    for x in &powers {
        if !in_power_set(spec, m, &x.inverse()) {
            return false;
        }
        for y in &powers {
            if !in_power_set(spec, m, &x.compose(y).unwrap()) {
                return false;
            }
        }
        for g in &gens {
            if !in_power_set(spec, m, &g.compose(x).unwrap().compose(&g.inverse()).unwrap()) {
                return false;
            }
        }
    }
    true
}

/// Least `m ≤ limit` passing the box test.
pub fn brute_m0(spec: &GroupSpec, limit: u64) -> Option<u64> {
    (1..=limit).find(|&m| power_normal_by_box(spec, m, 2))
}

pub fn conjugacy_class_count(g: &FiniteGroup) -> usize {
    let mut seen = vec![false; g.order()];
    let mut classes = 0;
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        classes += 1;
        for h in 0..g.order() {
            seen[g.conj(h, x)] = true;
        }
    }
    classes
}

/// `(1/16) Σ_n u(n) exp(2πi(a·n₁ + b·n₂)/4)` on the 4×4 grid.
pub fn dft_4x4(values: &[Complex64], a: i64, b: i64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for n1 in 0..4i64 {
        for n2 in 0..4i64 {
            let theta = 2.0 * std::f64::consts::PI * ((a * n1 + b * n2) as f64) / 4.0;
            s += values[(n1 * 4 + n2) as usize] * Complex64::from_polar(1.0, theta);
        }
    }
    s / 16.0
}

/// Orbits of `{0..n−1}^2` under `(j₁, j₂) ↦ (j₁, −j₂)`.
pub fn mirror_orbits(n: i64) -> Vec<HashSet<(i64, i64)>> {
    let mut out: Vec<HashSet<(i64, i64)>> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if out.iter().any(|o| o.contains(&(a, b))) {
                continue;
            }
            out.push([(a, b), (a, (-b).rem_euclid(n))].into_iter().collect());
        }
    }
    out
}
