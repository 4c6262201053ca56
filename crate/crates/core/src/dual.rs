//! Wave-vector labels for the irreducible representations of `G_N`.
//!
//! Dual vectors are kept in dual-lattice coordinates. A point operation `A`
//! acts on them through `A⁻ᵀ`, so `g·χ_k = χ_{A⁻ᵀk}`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{box_points, GroupSpec};
use crate::quotient::{QuotientGroup, Subgroup};
use crate::rational::{DualVector, IntMatrix, RatVec};
use crate::repr::{
    chi, dual_action, equivalent, induce, irreps_with_cap, mackey_irreducible, IrrepSet,
    Representation, DEFAULT_CAP,
};

/// The shifts `(1/m)ℤ^d ∩ [0,1)^d` as integer numerators.
pub fn shift_numerators(d: usize, m: u64) -> Vec<Vec<i64>> {
    box_points(d, m).collect()
}

/// Record of a discarded candidate: `p·candidate ≅ χ_k·classes[class]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub candidate: usize,
    pub class: usize,
    pub p: usize,
    pub k: DualVector,
}

/// Representatives of the irreps of `(TF)_{m₀}` modulo twisting by wave
/// characters and the action of `G`.
#[derive(Clone, Debug)]
pub struct RepSet {
    pub m: u64,
    pub quotient: QuotientGroup,
    pub tf: Subgroup,
    pub classes: Vec<Representation>,
    /// Index of each class among the solver's irreps.
    pub class_sources: Vec<usize>,
    pub provenance: Vec<Provenance>,
    pub candidates: IrrepSet,
}

pub fn rep_set(spec: &GroupSpec, seed: u64) -> Result<RepSet> {
    let m = spec.find_m0()?.m0;
    rep_set_at(spec, m, seed)
}

/// As [`rep_set`], with `m₀` supplied.
pub fn rep_set_at(spec: &GroupSpec, m: u64, seed: u64) -> Result<RepSet> {
    let quotient = QuotientGroup::build_with_m0(spec, m, m)?;
    let tf = quotient.tf_subgroup()?;
    let candidates = irreps_with_cap(&tf.group, seed, DEFAULT_CAP)?;
    let shifts: Vec<(DualVector, Vec<Complex64>)> = shift_numerators(spec.d2, m)
        .into_iter()
        .map(|j| {
            let k = RatVec::from_fraction(&j, m as i64);
            let values = chi(k.clone()).on_subgroup(&quotient, &tf);
            (k, values)
        })
        .collect();
    let mut classes: Vec<Representation> = Vec::new();
    let mut class_sources = Vec::new();
    let mut provenance = Vec::new();
    'candidates: for (ci, cand) in candidates.irreps.iter().enumerate() {
        for (class_idx, class) in classes.iter().enumerate() {
            if class.dim() != cand.dim() {
                continue;
            }
            for p in 0..spec.rot_order() {
                let acted = dual_action(&quotient, &tf, quotient.p_rep_index(p), cand);
                for (k, values) in &shifts {
                    if equivalent(&acted, &class.twist(values)) {
                        provenance.push(Provenance { candidate: ci, class: class_idx, p, k: k.clone() });
                        continue 'candidates;
                    }
                }
            }
        }
        classes.push(cand.clone());
        class_sources.push(ci);
    }
    Ok(RepSet { m, quotient, tf, classes, class_sources, provenance, candidates })
}

/// An element `(A⁻ᵀ, k)` of the little group, stored with its coset index.
#[derive(Clone, Debug, PartialEq)]
pub struct LittleElement {
    pub p: usize,
    pub dual_op: IntMatrix,
    pub shift: DualVector,
}

/// The little group `G_ρ`, modulo `L*`.
#[derive(Clone, Debug)]
pub struct LittleGroup {
    pub rho: usize,
    pub m: u64,
    pub elements: Vec<LittleElement>,
}

impl LittleGroup {
    /// Distinct point parts, as indices into `p_reps`.
    pub fn point_parts(&self) -> Vec<usize> {
        self.elements.iter().map(|e| e.p).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Pure translations `k` with `(I, k) ∈ G_ρ`, reduced to `[0,1)`.
    pub fn translations(&self, p_identity: usize) -> Vec<DualVector> {
        self.elements.iter().filter(|e| e.p == p_identity).map(|e| e.shift.clone()).collect()
    }

    fn contains(&self, op: &IntMatrix, shift: &DualVector) -> bool {
        let s = shift.fract_positive();
        self.elements.iter().any(|e| &e.dual_op == op && e.shift == s)
    }

    /// Closed under `(A, s)(B, t) = (AB, s + At)` modulo `L*`.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements.iter().all(|b| {
                self.contains(&a.dual_op.mul(&b.dual_op), &a.shift.add(&a.dual_op.apply(&b.shift)))
            })
        })
    }

    /// `L* ≤ trans(G_ρ) ≤ L*/m`.
    pub fn sandwich_holds(&self, p_identity: usize) -> bool {
        let trans = self.translations(p_identity);
        let d = self.elements.first().map_or(0, |e| e.shift.dim());
        trans.contains(&RatVec::zeros(d))
            && trans.iter().all(|k| k.scale(self.m as i64).is_integral())
    }

    /// Image of `j/N` under every element, as numerators modulo `N`.
    pub fn orbit_numerators(&self, j: &[i64], n: u64) -> BTreeSet<Vec<i64>> {
        let n = n as i64;
        self.elements
            .iter()
            .map(|e| {
                let aj = e.dual_op.apply_ints(j);
                let s = e.shift.scale(n).to_ints().expect("m divides N");
                aj.iter().zip(&s).map(|(a, b)| (a + b).rem_euclid(n)).collect()
            })
            .collect()
    }
}

pub fn little_group(spec: &GroupSpec, rs: &RepSet, rho: usize) -> Result<LittleGroup> {
    let r = &rs.classes[rho];
    let mut elements = Vec::new();
    let twists: Vec<(DualVector, Representation)> = shift_numerators(spec.d2, rs.m)
        .into_iter()
        .map(|j| {
            let k = RatVec::from_fraction(&j, rs.m as i64);
            let tw = r.twist(&chi(k.clone()).on_subgroup(&rs.quotient, &rs.tf));
            (k, tw)
        })
        .collect();
    for p in 0..spec.rot_order() {
        let acted = dual_action(&rs.quotient, &rs.tf, rs.quotient.p_rep_index(p), r);
        let dual_op = spec.p_reps[p].p.dual()?;
        for (k, tw) in &twists {
            if equivalent(&acted, tw) {
                elements.push(LittleElement { p, dual_op: dual_op.clone(), shift: k.clone() });
            }
        }
    }
    let lg = LittleGroup { rho, m: rs.m, elements };
    let id = spec.p_identity().expect("validated spec has a p identity");
    if !lg.is_closed() {
        return Err(Error::InternalInconsistency(format!("little group of class {rho} is not closed")));
    }
    if !lg.sandwich_holds(id) {
        return Err(Error::InternalInconsistency(format!(
            "translations of the little group of class {rho} escape L*/{}",
            rs.m
        )));
    }
    Ok(lg)
}

/// True when some non-identity point operation moves `k` by an element of `L*/m₀`.
pub fn null_set_member(spec: &GroupSpec, k: &DualVector, m0: u64) -> bool {
    let id = spec.p_identity();
    spec.p_reps.iter().enumerate().filter(|(i, _)| Some(*i) != id).any(|(_, rep)| {
        let a = rep.p.dual().expect("unimodular point operation");
        a.apply(k).sub(k).scale(m0 as i64).is_integral()
    })
}

/// Float version of [`null_set_member`].
pub fn null_set_member_f64(spec: &GroupSpec, k: &[f64], m0: u64, tol: f64) -> bool {
    let id = spec.p_identity();
    spec.p_reps.iter().enumerate().filter(|(i, _)| Some(*i) != id).any(|(_, rep)| {
        let a = rep.p.dual().expect("unimodular point operation");
        (0..k.len()).all(|r| {
            let v: f64 = (0..k.len()).map(|c| a.get(r, c) as f64 * k[c]).sum::<f64>() - k[r];
            let x = v * m0 as f64;
            (x - x.round()).abs() <= tol
        })
    })
}

/// One orbit of `(L*/N)/L*` under a little group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WaveLabel {
    pub rho: usize,
    pub k: DualVector,
    pub orbit_size: usize,
    pub in_null_set: bool,
    #[serde(skip)]
    pub members: Vec<Vec<i64>>,
}

/// Orbit partition of `(L*/N)/L*`; each label carries the lexicographically
/// least member.
pub fn wave_orbits(spec: &GroupSpec, lg: &LittleGroup, n: u64) -> Result<Vec<WaveLabel>> {
    if n == 0 || !n.is_multiple_of(lg.m) {
        return Err(Error::BadModulus { n, m0: lg.m });
    }
    let mut seen = BTreeSet::new();
    let mut labels = Vec::new();
    for j in box_points(spec.d2, n) {
        if seen.contains(&j) {
            continue;
        }
        let orbit = lg.orbit_numerators(&j, n);
        let rep = orbit.iter().next().expect("orbit contains j").clone();
        let k = RatVec::from_fraction(&rep, n as i64);
        let in_null_set = null_set_member(spec, &k, lg.m);
        seen.extend(orbit.iter().cloned());
        labels.push(WaveLabel {
            rho: lg.rho,
            k,
            orbit_size: orbit.len(),
            in_null_set,
            members: orbit.into_iter().collect(),
        });
    }
    Ok(labels)
}

/// Verdicts attached to an atlas.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtlasChecks {
    pub pairwise_inequivalent: bool,
    pub off_null_irreducible: bool,
    pub mackey_agrees: bool,
    pub null_flag_orbit_constant: bool,
    pub orbits_partition: bool,
    pub exhaustive: bool,
    pub every_irrep_covered: bool,
    pub sum_of_squares: usize,
    pub group_order: usize,
}

impl AtlasChecks {
    pub fn pass(&self) -> bool {
        self.pairwise_inequivalent
            && self.off_null_irreducible
            && self.mackey_agrees
            && self.null_flag_orbit_constant
            && self.orbits_partition
            && self.exhaustive
            && self.every_irrep_covered
            && self.sum_of_squares == self.group_order
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub rho_index: usize,
    pub orbit_rep: DualVector,
    pub orbit_size: usize,
    pub in_null_set: bool,
    pub induced_dim: usize,
    pub irreducible: bool,
    pub mackey: bool,
    /// Multiplicity of each irrep of `G_N` (in `irrep_dims` order).
    pub decomposition: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtlasReport {
    pub group: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub m0: u64,
    pub seed: u64,
    pub rep_set_size: usize,
    pub labels: Vec<AtlasEntry>,
    pub irrep_dims: Vec<usize>,
    pub checks: AtlasChecks,
    pub pass: bool,
}

/// Everything computed by [`enumerate_dual`], with the representations kept.
#[derive(Clone, Debug)]
pub struct DualAtlas {
    pub report: AtlasReport,
    pub quotient: QuotientGroup,
    pub rep_set: RepSet,
    pub wave_labels: Vec<WaveLabel>,
    pub induced: Vec<Representation>,
    pub irreps: IrrepSet,
}

/// Lifts a representation of `(TF)_m` to `(TF)_N` along the reduction map.
pub fn lift_to(rs: &RepSet, q: &QuotientGroup, tf: &Subgroup, r: &Representation) -> Representation {
    let map: Vec<usize> = tf
        .parent
        .iter()
        .map(|&g| {
            let coarse = q.project_index(g, &rs.quotient);
            rs.tf.local(coarse).expect("projection of (TF)_N lies in (TF)_m")
        })
        .collect();
    r.pull_back(&map)
}

pub fn enumerate_dual(spec: &GroupSpec, n: u64, seed: u64) -> Result<DualAtlas> {
    let rs = rep_set(spec, seed)?;
    if n == 0 || !n.is_multiple_of(rs.m) {
        return Err(Error::BadModulus { n, m0: rs.m });
    }
    let q = QuotientGroup::build_with_m0(spec, n, rs.m)?;
    let tf = q.tf_subgroup()?;
    let irr = irreps_with_cap(&q.group, seed, DEFAULT_CAP)?;

    let mut wave_labels = Vec::new();
    let mut induced = Vec::new();
    let mut entries = Vec::new();
    let mut orbits_partition = true;
    let mut null_flag_orbit_constant = true;
    let mut mackey_agrees = true;
    let mut off_null_irreducible = true;
    for rho in 0..rs.classes.len() {
        let lg = little_group(spec, &rs, rho)?;
        let labels = wave_orbits(spec, &lg, n)?;
        let total: usize = labels.iter().map(|l| l.orbit_size).sum();
        orbits_partition &= total == (n as usize).pow(spec.d2 as u32);
        let lifted = lift_to(&rs, &q, &tf, &rs.classes[rho]);
        for label in labels {
            null_flag_orbit_constant &= label.members.iter().all(|j| {
                null_set_member(spec, &RatVec::from_fraction(j, n as i64), rs.m) == label.in_null_set
            });
            let twisted = lifted.twist(&chi(label.k.clone()).on_subgroup(&q, &tf));
            let mackey = mackey_irreducible(&q, &tf, &twisted);
            let ind = induce(&q, &tf, &twisted);
            let irreducible = ind.is_irreducible();
            mackey_agrees &= mackey == irreducible;
            if !label.in_null_set {
                off_null_irreducible &= irreducible && mackey;
            }
            entries.push(AtlasEntry {
                rho_index: rho,
                orbit_rep: label.k.clone(),
                orbit_size: label.orbit_size,
                in_null_set: label.in_null_set,
                induced_dim: ind.dim(),
                irreducible,
                mackey,
                decomposition: irr.decompose(&ind),
            });
            induced.push(ind);
            wave_labels.push(label);
        }
    }

    let pairwise_inequivalent = (0..induced.len())
        .all(|a| (a + 1..induced.len()).all(|b| !equivalent(&induced[a], &induced[b])));
    // Each irrep of G_N must occur in exactly one induced representation.
    let occurrences: Vec<usize> = (0..irr.irreps.len())
        .map(|i| entries.iter().filter(|e| e.decomposition[i] > 0).count())
        .collect();
    let every_irrep_covered = occurrences.iter().all(|&c| c >= 1);
    let exhaustive = occurrences.iter().all(|&c| c == 1)
        && entries.iter().all(|e| {
            e.decomposition.iter().zip(irr.dims()).map(|(m, d)| m * d).sum::<usize>() == e.induced_dim
        });
    let checks = AtlasChecks {
        pairwise_inequivalent,
        off_null_irreducible,
        mackey_agrees,
        null_flag_orbit_constant,
        orbits_partition,
        exhaustive,
        every_irrep_covered,
        sum_of_squares: irr.sum_of_squares(),
        group_order: q.order(),
    };
    let report = AtlasReport {
        group: spec.name.clone(),
        n,
        m0: rs.m,
        seed: irr.seed,
        rep_set_size: rs.classes.len(),
        labels: entries,
        irrep_dims: irr.dims(),
        pass: checks.pass(),
        checks,
    };
    Ok(DualAtlas { report, quotient: q, rep_set: rs, wave_labels, induced, irreps: irr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn null_set_examples() {
        let pg = catalog::pg();
        assert!(null_set_member(&pg, &RatVec::from_fraction(&[1, 0], 3), 1));
        assert!(!null_set_member(&pg, &RatVec::from_fraction(&[1, 1], 3), 1));
        assert!(null_set_member_f64(&pg, &[1.0 / 3.0, 0.0], 1, 1e-9));
        assert!(!null_set_member_f64(&pg, &[1.0 / 3.0, 1.0 / 3.0], 1, 1e-9));
        assert!(!null_set_member(&catalog::p1(), &RatVec::zeros(2), 1));
    }

    #[test]
    fn pg_orbits_at_three() {
        let spec = catalog::pg();
        let rs = rep_set(&spec, 0).unwrap();
        assert_eq!(rs.classes.len(), 1);
        let lg = little_group(&spec, &rs, 0).unwrap();
        assert_eq!(lg.point_parts(), vec![0, 1]);
        let labels = wave_orbits(&spec, &lg, 3).unwrap();
        assert_eq!(labels.len(), 6);
        let singles = labels.iter().filter(|l| l.orbit_size == 1).count();
        assert_eq!(singles, 3);
        assert!(labels.iter().all(|l| l.in_null_set == (l.orbit_size == 1)));
    }

    #[test]
    fn helix_rep_set_merges_conjugate_characters() {
        let spec = catalog::helix(3, 1.0);
        let rs = rep_set(&spec, 0).unwrap();
        assert_eq!(rs.candidates.irreps.len(), 3);
        assert_eq!(rs.classes.len(), 2);
        assert_eq!(rs.provenance.len(), 1);
    }

    #[test]
    fn pg_atlas() {
        let atlas = enumerate_dual(&catalog::pg(), 3, 0).unwrap();
        let r = &atlas.report;
        assert!(r.pass, "{:?}", r.checks);
        assert_eq!(r.labels.len(), 6);
        assert_eq!(r.labels.iter().filter(|l| l.irreducible).count(), 3);
        assert!(r.labels.iter().filter(|l| !l.in_null_set).all(|l| l.irreducible && l.induced_dim == 2));
    }
}
