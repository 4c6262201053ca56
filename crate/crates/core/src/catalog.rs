//! Built-in groups used as worked examples and regression fixtures.

use std::f64::consts::PI;

use crate::group::GroupSpec;
use crate::isometry::{Isometry, OrthoMatrix, DEFAULT_TOL};
use crate::rational::{IntMatrix, RatVec, Rational};

/// A catalog group together with the structure numbers it must reproduce.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: GroupSpec,
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub m0: u64,
    pub f_order: usize,
    pub rot_order: usize,
}

pub const NAMES: [&str; 8] = ["p1", "pm", "pg", "p3", "p4", "helix-C3", "screw-C4", "twistE8"];

pub fn names() -> &'static [&'static str] {
    &NAMES
}

pub fn get(name: &str) -> Option<CatalogEntry> {
    let (spec, expected) = match name {
        "p1" => (p1(), Expected { m0: 1, f_order: 1, rot_order: 1 }),
        "pm" => (pm(), Expected { m0: 1, f_order: 1, rot_order: 2 }),
        "pg" => (pg(), Expected { m0: 1, f_order: 1, rot_order: 2 }),
        "p3" => (p3(), Expected { m0: 1, f_order: 1, rot_order: 3 }),
        "p4" => (p4(), Expected { m0: 1, f_order: 1, rot_order: 4 }),
        "helix-C3" => (helix(3, 1.0), Expected { m0: 1, f_order: 3, rot_order: 2 }),
        "screw-C4" => (screw_c4(), Expected { m0: 1, f_order: 2, rot_order: 1 }),
        "twistE8" => (twist_e8(1.0, 2f64.sqrt()), Expected { m0: 4, f_order: 2, rot_order: 1 }),
        _ => return None,
    };
    let name = NAMES.iter().copied().find(|n| *n == name)?;
    Some(CatalogEntry { name, spec, expected })
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES.iter().filter_map(|n| get(n)).collect()
}

fn space_group(name: &str, reps: Vec<(IntMatrix, RatVec)>) -> GroupSpec {
    let d2 = reps[0].0.dim();
    let t_lifts = (0..d2).map(|i| Isometry::translation(0, RatVec::unit(d2, i))).collect();
    let p_reps = reps
        .into_iter()
        .map(|(p, tau)| Isometry::new(OrthoMatrix::identity(0), p, tau).unwrap())
        .collect();
    GroupSpec::new(name, 0, d2, DEFAULT_TOL, vec![], t_lifts, p_reps).unwrap()
}

/// Oblique lattice, translations only.
pub fn p1() -> GroupSpec {
    space_group("p1", vec![(IntMatrix::identity(2), RatVec::zeros(2))])
}

/// Mirror group, symmorphic.
pub fn pm() -> GroupSpec {
    space_group(
        "pm",
        vec![
            (IntMatrix::identity(2), RatVec::zeros(2)),
            (IntMatrix::diag(&[1, -1]), RatVec::zeros(2)),
        ],
    )
}

/// Glide group: the mirror carries the half translation `(1/2, 0)`.
pub fn pg() -> GroupSpec {
    space_group(
        "pg",
        vec![
            (IntMatrix::identity(2), RatVec::zeros(2)),
            (IntMatrix::diag(&[1, -1]), RatVec(vec![Rational::new(1, 2), Rational::zero()])),
        ],
    )
}

/// Threefold rotations of a hexagonal lattice, in lattice coordinates.
pub fn p3() -> GroupSpec {
    let r = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]).unwrap();
    let r2 = r.mul(&r);
    space_group(
        "p3",
        vec![
            (IntMatrix::identity(2), RatVec::zeros(2)),
            (r, RatVec::zeros(2)),
            (r2, RatVec::zeros(2)),
        ],
    )
}

/// Fourfold rotations of a square lattice.
pub fn p4() -> GroupSpec {
    let r = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
    let mut reps = vec![(IntMatrix::identity(2), RatVec::zeros(2))];
    let mut acc = r.clone();
    for _ in 0..3 {
        reps.push((acc.clone(), RatVec::zeros(2)));
        acc = acc.mul(&r);
    }
    space_group("p4", reps)
}

/// Helical group `⟨R(α) ⊕ (I₁, 1)⟩ · ⟨R(2π/n)⟩ · ⟨diag(1, −1) ⊕ (−I₁, 0)⟩`.
pub fn helix(order: usize, alpha: f64) -> GroupSpec {
    let f_elements =
        (0..order).map(|k| OrthoMatrix::rotation(2.0 * PI * k as f64 / order as f64)).collect();
    let t = Isometry::new(OrthoMatrix::rotation(alpha), IntMatrix::identity(1), RatVec::unit(1, 0))
        .unwrap();
    let flip = Isometry::new(OrthoMatrix::diag(&[1.0, -1.0]), IntMatrix::diag(&[-1]), RatVec::zeros(1))
        .unwrap();
    GroupSpec::new(
        &format!("helix-C{order}"),
        2,
        1,
        DEFAULT_TOL,
        f_elements,
        vec![t],
        vec![Isometry::identity(2, 1), flip],
    )
    .unwrap()
}

/// Screw axis whose section is `R(π/2) ⊕ t` with kernel `{I, R(π)}`.
pub fn screw_c4() -> GroupSpec {
    let t = Isometry::new(
        OrthoMatrix::rotation(PI / 2.0),
        IntMatrix::identity(1),
        RatVec::unit(1, 0),
    )
    .unwrap();
    GroupSpec::new(
        "screw-C4",
        2,
        1,
        DEFAULT_TOL,
        vec![OrthoMatrix::identity(2), OrthoMatrix::rotation(PI)],
        vec![t],
        vec![Isometry::identity(2, 1)],
    )
    .unwrap()
}

fn reflection_s() -> OrthoMatrix {
    OrthoMatrix::diag(&[1.0, -1.0])
}

/// Group in `E(8)` whose section elements do not commute:
/// `t₁' = R(α₁) ⊕ I₂ ⊕ S`, `t₂' = I₂ ⊕ R(α₂) ⊕ R(π/2)` over the square
/// lattice, with kernel `{I, I₄ ⊕ R(π/2)²}`.
pub fn twist_e8(alpha1: f64, alpha2: f64) -> GroupSpec {
    let i2 = OrthoMatrix::identity(2);
    let r3 = OrthoMatrix::rotation(PI / 2.0);
    let g1 = OrthoMatrix::direct_sum(&[OrthoMatrix::rotation(alpha1), i2.clone(), reflection_s()]);
    let g2 = OrthoMatrix::direct_sum(&[i2.clone(), OrthoMatrix::rotation(alpha2), r3.clone()]);
    let f1 = OrthoMatrix::direct_sum(&[OrthoMatrix::identity(4), r3.mul(&r3)]);
    let t_lifts = vec![
        Isometry::new(g1, IntMatrix::identity(2), RatVec::unit(2, 0)).unwrap(),
        Isometry::new(g2, IntMatrix::identity(2), RatVec::unit(2, 1)).unwrap(),
    ];
    GroupSpec::new(
        "twistE8",
        6,
        2,
        DEFAULT_TOL,
        vec![OrthoMatrix::identity(6), f1],
        t_lifts,
        vec![Isometry::identity(6, 2)],
    )
    .unwrap()
}

/// Resolves `catalog:<name>` references.
pub fn resolve(reference: &str) -> Option<CatalogEntry> {
    reference.strip_prefix("catalog:").and_then(get)
}
