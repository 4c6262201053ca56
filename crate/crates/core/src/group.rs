//! Group specifications, normal forms `t(n)·f·p` and the structure invariant m₀.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{Isometry, IsometryRecord, OrthoMatrix, DEFAULT_ORDER_BOUND, DEFAULT_TOL};
use crate::rational::{divisors, IntMatrix, RatVec};

/// Generator-level description of a discrete group `G < O(d1) ⊕ S`.
///
/// `f_elements` lists the whole finite kernel `F` (as `O(d1)` blocks),
/// `t_lifts` are the lifts `g₁ … g_{d2}` of the lattice basis translations
/// that define the section `t(n) = g₁^{n₁} ⋯ g_{d2}^{n_{d2}}`, and `p_reps`
/// is a set of coset representatives of `G / TF`, one per point operation.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub name: String,
    pub d1: usize,
    pub d2: usize,
    pub tol: f64,
    pub f_elements: Vec<OrthoMatrix>,
    pub t_lifts: Vec<Isometry>,
    pub p_reps: Vec<Isometry>,
    /// Replaces `|F|²·|Aut(F)|` as the divisor-scan bound for m₀.
    pub m0_bound_override: Option<u64>,
}

/// Unique factorization `g = t(n)·f·p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm {
    pub n: Vec<i64>,
    pub f: usize,
    pub p: usize,
}

/// A failed axiom of a [`GroupSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

impl Violation {
    fn new(axiom: &str, detail: impl Into<String>) -> Self {
        Violation { axiom: axiom.to_string(), detail: detail.into() }
    }
}

/// m₀ together with the bound it was searched under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub m0: u64,
    pub m0_bound: u64,
    pub aut_f_order: u64,
    pub is_space_group: bool,
    pub f_order: usize,
    pub rot_order: usize,
}

/// JSON form of a group spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpecFile {
    pub name: String,
    pub d1: usize,
    pub d2: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub f_elements: Vec<Vec<Vec<f64>>>,
    pub t_lifts: Vec<TLiftRecord>,
    pub p_reps: Vec<IsometryRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0_bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TLiftRecord {
    pub q: Vec<Vec<f64>>,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl GroupSpecFile {
    pub fn to_spec(&self) -> Result<GroupSpec> {
        // Orthogonality is judged loosely here; validate_spec reports defects.
        let loose = 1e-6_f64.max(self.tol);
        let f_elements = self
            .f_elements
            .iter()
            .map(|rows| OrthoMatrix::from_rows(rows, loose))
            .collect::<Result<Vec<_>>>()?;
        let t_lifts = self
            .t_lifts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Isometry::new(
                    OrthoMatrix::from_rows(&t.q, loose)?,
                    IntMatrix::identity(self.d2),
                    RatVec::unit(self.d2, i),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let p_reps = self
            .p_reps
            .iter()
            .map(|r| r.to_isometry(loose))
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(&self.name, self.d1, self.d2, self.tol, f_elements, t_lifts, p_reps)
            .map(|s| s.with_m0_bound(self.m0_bound))
    }
}

impl From<&GroupSpec> for GroupSpecFile {
    fn from(spec: &GroupSpec) -> Self {
        GroupSpecFile {
            name: spec.name.clone(),
            d1: spec.d1,
            d2: spec.d2,
            tol: spec.tol,
            f_elements: spec.f_elements.iter().map(OrthoMatrix::rows).collect(),
            t_lifts: spec.t_lifts.iter().map(|t| TLiftRecord { q: t.q.rows() }).collect(),
            p_reps: spec.p_reps.iter().map(IsometryRecord::from).collect(),
            m0_bound: spec.m0_bound_override,
        }
    }
}

impl GroupSpec {
    /// Builds a spec after checking block dimensions. An empty `f_elements`
    /// list stands for the trivial kernel `{I_{d1}}`.
    pub fn new(
        name: &str,
        d1: usize,
        d2: usize,
        tol: f64,
        f_elements: Vec<OrthoMatrix>,
        t_lifts: Vec<Isometry>,
        p_reps: Vec<Isometry>,
    ) -> Result<Self> {
        let f_elements =
            if f_elements.is_empty() { vec![OrthoMatrix::identity(d1)] } else { f_elements };
        if let Some(bad) = f_elements.iter().find(|f| f.dim() != d1) {
            return Err(Error::DimensionMismatch(format!(
                "F element of size {} in a spec with d1 = {d1}",
                bad.dim()
            )));
        }
        for g in t_lifts.iter().chain(&p_reps) {
            if g.d1() != d1 || g.d2() != d2 {
                return Err(Error::DimensionMismatch(format!(
                    "generator with blocks ({}, {}) in a spec with ({d1}, {d2})",
                    g.d1(),
                    g.d2()
                )));
            }
        }
        if p_reps.is_empty() {
            return Err(Error::InvalidSpec("p_reps must contain the identity".into()));
        }
        Ok(GroupSpec {
            name: name.to_string(),
            d1,
            d2,
            tol,
            f_elements,
            t_lifts,
            p_reps,
            m0_bound_override: None,
        })
    }

    pub fn with_m0_bound(mut self, bound: Option<u64>) -> Self {
        self.m0_bound_override = bound;
        self
    }

    pub fn f_order(&self) -> usize {
        self.f_elements.len()
    }

    pub fn rot_order(&self) -> usize {
        self.p_reps.len()
    }

    /// Index of the identity in `F`.
    pub fn f_identity(&self) -> Option<usize> {
        self.f_elements.iter().position(|f| f.is_identity(self.tol))
    }

    /// Index of the representative of the identity coset `TF`.
    pub fn p_identity(&self) -> Option<usize> {
        self.p_reps.iter().position(|p| p.p.is_identity())
    }

    /// The subgroup `TF` as a spec of its own (same section, trivial point group).
    pub fn tf_slice(&self) -> GroupSpec {
        let mut s = self.clone();
        s.name = format!("{}/TF", self.name);
        s.p_reps = vec![Isometry::identity(self.d1, self.d2)];
        s
    }

    pub fn f_isometry(&self, f: usize) -> Isometry {
        Isometry { q: self.f_elements[f].clone(), ..Isometry::identity(self.d1, self.d2) }
    }

    /// All generators of `G`: the section lifts, `F` and the coset representatives.
    pub fn generators(&self) -> Vec<Isometry> {
        let mut g = self.t_lifts.clone();
        g.extend((0..self.f_order()).map(|f| self.f_isometry(f)));
        g.extend(self.p_reps.iter().cloned());
        g
    }

    /// `t(n) = g₁^{n₁} ⋯ g_{d2}^{n_{d2}}` in the fixed generator order.
    pub fn power_section(&self, n: &[i64]) -> Isometry {
        assert_eq!(n.len(), self.d2, "exponent vector length must equal d2");
        self.t_lifts
            .iter()
            .zip(n)
            .fold(Isometry::identity(self.d1, self.d2), |acc, (g, &k)| acc.mul(&g.pow(k)))
    }

    /// Reconstructs `t(n)·f·p`.
    pub fn element(&self, nf: &NormalForm) -> Isometry {
        self.power_section(&nf.n).mul(&self.f_isometry(nf.f)).mul(&self.p_reps[nf.p])
    }

    fn match_f(&self, q: &OrthoMatrix) -> Option<usize> {
        let (idx, diff) = self
            .f_elements
            .iter()
            .enumerate()
            .map(|(i, f)| (i, f.max_diff(q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        (diff <= self.tol).then_some(idx)
    }

    /// Factors `g = t(n)·f·p`: the point operation picks `p`, the remaining
    /// integral translation gives `n`, the leftover `O(d1)` block must be in `F`.
    pub fn normal_form(&self, g: &Isometry) -> Result<NormalForm> {
        if g.d1() != self.d1 || g.d2() != self.d2 {
            return Err(Error::DimensionMismatch("element does not match the spec".into()));
        }
        let p = self
            .p_reps
            .iter()
            .position(|r| r.p == g.p)
            .ok_or_else(|| Error::NotAMember(format!("point operation {:?} not in rot(S)", g.p)))?;
        let r = g.mul(&self.p_reps[p].inverse());
        debug_assert!(r.p.is_identity());
        let n = r
            .tau
            .to_ints()
            .ok_or_else(|| Error::NotAMember(format!("non-lattice translation {}", r.tau)))?;
        let s = self.power_section(&n).inverse().mul(&r);
        let f = self.match_f(&s.q).ok_or_else(|| {
            Error::NotAMember("residual O(d1) block matches no element of F".into())
        })?;
        Ok(NormalForm { n, f, p })
    }

    /// Checks every axiom of the spec; an empty list means the spec is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let tol = self.tol;

        if self.t_lifts.len() != self.d2 {
            out.push(Violation::new(
                "section",
                format!("expected {} t_lifts, found {}", self.d2, self.t_lifts.len()),
            ));
        }
        for (i, g) in self.t_lifts.iter().enumerate() {
            if !g.p.is_identity() || g.tau != RatVec::unit(self.d2, i) {
                out.push(Violation::new(
                    "section",
                    format!("t_lift {i} must project to the translation e_{i}"),
                ));
            }
        }
        for (i, f) in self.f_elements.iter().enumerate() {
            let d = f.orthogonality_defect();
            if d > tol {
                out.push(Violation::new("orthogonality", format!("F[{i}] defect {d:e}")));
            }
        }
        for (i, g) in self.t_lifts.iter().chain(&self.p_reps).enumerate() {
            let d = g.q.orthogonality_defect();
            if d > tol {
                out.push(Violation::new("orthogonality", format!("generator {i} defect {d:e}")));
            }
        }
        if !out.is_empty() {
            return out;
        }

        // F: identity, closure, inverses.
        if self.f_identity().is_none() {
            out.push(Violation::new("F identity", "F does not contain the identity"));
        }
        for (a, fa) in self.f_elements.iter().enumerate() {
            for (b, fb) in self.f_elements.iter().enumerate() {
                if self.match_f(&fa.mul(fb)).is_none() {
                    out.push(Violation::new(
                        "F not closed",
                        format!("F[{a}]·F[{b}] is not in F"),
                    ));
                }
            }
            if self.match_f(&fa.transpose()).is_none() {
                out.push(Violation::new("F not closed", format!("inverse of F[{a}] is not in F")));
            }
        }

        // Point group.
        let pid = self.p_identity();
        match pid {
            None => out.push(Violation::new("point group", "no representative with p = I")),
            Some(i) if !self.p_reps[i].is_identity(tol) => out.push(Violation::new(
                "point group",
                format!("representative {i} of the identity coset is not the identity"),
            )),
            _ => {}
        }
        for (i, a) in self.p_reps.iter().enumerate() {
            let det = a.p.det();
            if det != 1 && det != -1 {
                out.push(Violation::new("point group", format!("p_reps[{i}] has det {det}")));
                continue;
            }
            if a.p.order(DEFAULT_ORDER_BOUND).is_none() {
                out.push(Violation::new(
                    "point group",
                    format!("p_reps[{i}] has order above {DEFAULT_ORDER_BOUND}"),
                ));
            }
            for (j, b) in self.p_reps.iter().enumerate().skip(i + 1) {
                if a.p == b.p {
                    out.push(Violation::new(
                        "point group",
                        format!("p_reps[{i}] and p_reps[{j}] share a point operation"),
                    ));
                }
            }
            for (j, b) in self.p_reps.iter().enumerate() {
                let prod = a.p.mul(&b.p);
                if !self.p_reps.iter().any(|c| c.p == prod) {
                    out.push(Violation::new(
                        "point group",
                        format!("rot(p_reps[{i}])·rot(p_reps[{j}]) is not a point operation"),
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }

        // F is normal in G.
        for (gi, h) in self.t_lifts.iter().chain(&self.p_reps).enumerate() {
            for (fi, _) in self.f_elements.iter().enumerate() {
                let c = h.conjugate(&self.f_isometry(fi));
                if !c.is_spatial_identity() || self.match_f(&c.q).is_none() {
                    out.push(Violation::new(
                        "F not normal",
                        format!("generator {gi} conjugates F[{fi}] out of F"),
                    ));
                }
            }
        }

        // Commutators of the section lie in F.
        for i in 0..self.t_lifts.len() {
            for j in i + 1..self.t_lifts.len() {
                let (gi, gj) = (&self.t_lifts[i], &self.t_lifts[j]);
                let c = gi.mul(gj).mul(&gi.inverse()).mul(&gj.inverse());
                if !c.is_spatial_identity() || self.match_f(&c.q).is_none() {
                    out.push(Violation::new(
                        "section commutator",
                        format!("[t_{i}, t_{j}] does not lie in F"),
                    ));
                }
            }
        }

        // The presentation closes under products and conjugation.
        for (i, a) in self.p_reps.iter().enumerate() {
            for (j, b) in self.p_reps.iter().enumerate() {
                if let Err(e) = self.normal_form(&a.mul(b)) {
                    out.push(Violation::new(
                        "presentation closure",
                        format!("p_reps[{i}]·p_reps[{j}]: {e}"),
                    ));
                }
            }
            for (k, g) in self.t_lifts.iter().enumerate() {
                if let Err(e) = self.normal_form(&a.conjugate(g)) {
                    out.push(Violation::new(
                        "presentation closure",
                        format!("p_reps[{i}]·t_{k}·p_reps[{i}]⁻¹: {e}"),
                    ));
                }
            }
        }
        out
    }

    /// Multiplication table of `F` by index.
    pub fn f_table(&self) -> Result<Vec<Vec<usize>>> {
        self.f_elements
            .iter()
            .map(|a| {
                self.f_elements
                    .iter()
                    .map(|b| {
                        self.match_f(&a.mul(b))
                            .ok_or_else(|| Error::InvalidSpec("F is not closed".into()))
                    })
                    .collect()
            })
            .collect()
    }

    /// `|Aut(F)|` by backtracking over bijections that respect the table.
    pub fn aut_f_order(&self) -> Result<u64> {
        let table = self.f_table()?;
        Ok(count_automorphisms(&table))
    }

    /// `u^v = u₁^{v₁} ⋯ u_{d2}^{v_{d2}}` for `u_j = t(e_j)^m`.
    fn u_power(&self, u: &[Isometry], v: &[i64]) -> Isometry {
        u.iter()
            .zip(v)
            .fold(Isometry::identity(self.d1, self.d2), |acc, (g, &k)| acc.mul(&g.pow(k)))
    }

    /// Whether `T^m = {t^m : t ∈ T}` is a normal subgroup of `G`.
    ///
    /// Let `u_j = t(e_j)^m` and `U = ⟨u_j⟩`. Then `T^m ◁ G` iff the `u_j`
    /// are central in `TF`, `U` is closed under conjugation by the
    /// generators of `G`, and `t(n)^m = u^n` for `n ∈ {0..m−1}^{d2}`. The
    /// last condition extends to all `n` because `t(n + m·e_j) = t(n)·u_j`
    /// once `u_j` is central in `TF`.
    pub fn is_power_normal(&self, m: u64) -> bool {
        assert!(m >= 1, "exponent must be positive");
        let m = m as i64;
        let tol = self.tol;
        let u: Vec<Isometry> = self.t_lifts.iter().map(|g| g.pow(m)).collect();

        let tf_gens: Vec<Isometry> = self
            .t_lifts
            .iter()
            .cloned()
            .chain((0..self.f_order()).map(|f| self.f_isometry(f)))
            .collect();
        for uj in &u {
            for h in &tf_gens {
                if !uj.mul(h).approx_equal(&h.mul(uj), tol) {
                    return false;
                }
            }
        }

        for h in self.t_lifts.iter().chain(&self.p_reps) {
            for uj in &u {
                let c = h.conjugate(uj);
                if !c.p.is_identity() {
                    return false;
                }
                let Some(t) = c.tau.to_ints() else { return false };
                if t.iter().any(|x| x % m != 0) {
                    return false;
                }
                let v: Vec<i64> = t.iter().map(|x| x / m).collect();
                if !c.approx_equal(&self.u_power(&u, &v), tol) {
                    return false;
                }
            }
        }

        box_points(self.d2, m as u64).all(|n| {
            self.power_section(&n).pow(m).approx_equal(&self.u_power(&u, &n), tol)
        })
    }

    /// The least `m` dividing the bound with `T^m ◁ G`.
    pub fn find_m0(&self) -> Result<StructureReport> {
        let aut = self.aut_f_order()?;
        let f = self.f_order() as u64;
        let bound = self.m0_bound_override.unwrap_or(f * f * aut);
        let m0 = divisors(bound)
            .into_iter()
            .find(|&m| self.is_power_normal(m))
            .ok_or_else(|| {
                Error::InternalInconsistency(format!(
                    "no divisor of {bound} gives a normal power of the section"
                ))
            })?;
        Ok(StructureReport {
            m0,
            m0_bound: bound,
            aut_f_order: aut,
            is_space_group: self.d1 == 0,
            f_order: self.f_order(),
            rot_order: self.rot_order(),
        })
    }
}

/// Iterates `{0..m−1}^d` in lexicographic order (first coordinate slowest).
pub fn box_points(d: usize, m: u64) -> impl Iterator<Item = Vec<i64>> {
    let total = (m as usize).pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0i64; d];
        for slot in v.iter_mut().rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        v
    })
}

fn count_automorphisms(table: &[Vec<usize>]) -> u64 {
    let n = table.len();
    if n == 0 {
        return 1;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn consistent(table: &[Vec<usize>], image: &[usize], upto: usize) -> bool {
        for a in 0..=upto {
            for b in 0..=upto {
                let ab = table[a][b];
                if ab <= upto && table[image[a]][image[b]] != image[ab] {
                    return false;
                }
            }
        }
        true
    }
    fn go(table: &[Vec<usize>], image: &mut [usize], used: &mut [bool], k: usize) -> u64 {
        let n = table.len();
        if k == n {
            return u64::from(consistent(table, image, n - 1));
        }
        let mut count = 0;
        for c in 0..n {
            if used[c] {
                continue;
            }
            image[k] = c;
            used[c] = true;
            if consistent(table, image, k) {
                count += go(table, image, used, k + 1);
            }
            used[c] = false;
        }
        image[k] = usize::MAX;
        count
    }
    go(table, &mut image, &mut used, 0)
}
