//! Semidirect splittings `G_N = (T^m)_N ⋊ (T^n F P^(n))_N` for `N = nm`
//! with `n` coprime to `m` and to `|rot(S)|`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{box_points, GroupSpec, NormalForm};
use crate::isometry::{Isometry, IsometryRecord};
use crate::quotient::QuotientGroup;
use crate::rational::{extended_gcd, gcd, IntMatrix, LatticeVector, RatVec};

/// `τ̄(P,Q) = τ̃(P) + Pτ̃(Q) − τ̃(PQ)`, indexed by `p_reps` positions.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleTable {
    pub values: Vec<Vec<LatticeVector>>,
}

impl CocycleTable {
    pub fn get(&self, p: usize, q: usize) -> &LatticeVector {
        &self.values[p][q]
    }

    /// `Σ_Q τ̄(P,Q)`.
    pub fn row_sum(&self, p: usize) -> LatticeVector {
        let d = self.values[p][0].dim();
        self.values[p].iter().fold(RatVec::zeros(d), |acc, v| acc.add(v))
    }
}

fn point_index(spec: &GroupSpec, op: &IntMatrix) -> Result<usize> {
    spec.p_reps
        .iter()
        .position(|r| &r.p == op)
        .ok_or_else(|| Error::InvalidSpec("point operations of p_reps are not closed".into()))
}

pub fn cocycle(spec: &GroupSpec) -> Result<CocycleTable> {
    let r = spec.rot_order();
    let mut values = vec![Vec::with_capacity(r); r];
    for (a, pa) in spec.p_reps.iter().enumerate() {
        for pb in &spec.p_reps {
            let prod = point_index(spec, &pa.p.mul(&pb.p))?;
            let v = pa.tau.add(&pa.p.apply(&pb.tau)).sub(&spec.p_reps[prod].tau);
            if !v.is_integral() {
                return Err(Error::IntegralityViolation(format!(
                    "cocycle value {:?} is not a lattice vector",
                    v.to_strings()
                )));
            }
            values[a].push(v);
        }
    }
    Ok(CocycleTable { values })
}

/// Largest `ã ≤ 0` with `ã·r + b·n = 1` for some integer `b`.
pub fn a_coeff(n: i64, r: i64) -> Result<i64> {
    if n < 1 || r < 1 || gcd(n, r) != 1 {
        return Err(Error::NotCoprime { n, r });
    }
    let (_, x, _) = extended_gcd(r, n);
    let inv = x.rem_euclid(n);
    Ok(if inv == 0 { 0 } else { inv - n })
}

/// Lifts of `P_S^(n)` into `G`, one per point operation.
#[derive(Clone, Debug)]
pub struct ComplementSet {
    pub n: i64,
    pub a: i64,
    pub elements: Vec<Isometry>,
}

pub fn complement_set(spec: &GroupSpec, n: i64) -> Result<ComplementSet> {
    let r = spec.rot_order() as i64;
    let a = a_coeff(n, r)?;
    let table = cocycle(spec)?;
    let mut elements = Vec::with_capacity(spec.rot_order());
    for (p, rep) in spec.p_reps.iter().enumerate() {
        let v = table.row_sum(p).scale(-a);
        let shift = v.to_ints().expect("cocycle values are integral");
        elements.push(spec.power_section(&shift).mul(rep));
    }
    // Projections must form a group modulo nL.
    for x in &elements {
        for y in &elements {
            let xy = x.mul(y);
            let target = &elements[point_index(spec, &xy.p)?];
            let diff = xy.tau.sub(&target.tau);
            let ok = diff.is_integral()
                && diff.to_ints().expect("integral").iter().all(|c| c.rem_euclid(n) == 0);
            if !ok {
                return Err(Error::InternalInconsistency(format!(
                    "projections of P^({n}) are not closed modulo {n}L"
                )));
            }
        }
    }
    Ok(ComplementSet { n, a, elements })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    fn new(name: &str, pass: bool, witness: Option<String>) -> Self {
        CheckResult { name: name.to_string(), pass, witness }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificateOrders {
    pub group: usize,
    pub t_m: usize,
    pub complement: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitCertificate {
    pub group: String,
    pub m: u64,
    pub n: u64,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub a: i64,
    pub tau_tilde: Vec<RatVec>,
    pub complement_lifts: Vec<IsometryRecord>,
    pub orders: CertificateOrders,
    pub t_m_generators: Vec<NormalForm>,
    pub complement_generators: Vec<NormalForm>,
    pub direct_product: bool,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

fn unit_scaled(d: usize, i: usize, k: i64) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = k;
    v
}

pub fn split_quotient(spec: &GroupSpec, m: u64, n: u64) -> Result<SplitCertificate> {
    let m0 = spec.find_m0()?.m0;
    if m == 0 || !m.is_multiple_of(m0) {
        return Err(Error::BadModulus { n: m, m0 });
    }
    if gcd(n as i64, m as i64) != 1 {
        return Err(Error::NotCoprime { n: n as i64, r: m as i64 });
    }
    let comp = complement_set(spec, n as i64)?;
    let modulus = n * m;
    let q = QuotientGroup::build_with_m0(spec, modulus, m0)?;
    let g = &q.group;
    let d2 = spec.d2;

    let tm_gens: Vec<usize> =
        (0..d2).map(|i| q.section_index(&unit_scaled(d2, i, m as i64))).collect();
    let tm = g.closure(&tm_gens);

    let p_id = spec.p_identity().expect("validated spec has a p identity");
    let mut h_gens: Vec<usize> =
        (0..d2).map(|i| q.section_index(&unit_scaled(d2, i, n as i64))).collect();
    for f in 0..spec.f_order() {
        h_gens.push(q.index_of(&NormalForm { n: vec![0; d2], f, p: p_id }));
    }
    for c in &comp.elements {
        h_gens.push(q.index_of_isometry(c)?);
    }
    let h = g.closure(&h_gens);

    let mut checks = Vec::new();
    let tm_normal = g.is_normal(&tm);
    checks.push(CheckResult::new("t_m_normal", tm_normal, None));
    checks.push(CheckResult::new("t_m_abelian", g.is_abelian_on(&tm), None));
    let want_tm = (n as usize).pow(d2 as u32);
    checks.push(CheckResult::new(
        "t_m_order",
        tm.len() == want_tm,
        Some(format!("{} (expected {want_tm})", tm.len())),
    ));
    let bad_exp = tm.iter().find(|&&x| !(n as usize).is_multiple_of(g.element_order(x)));
    checks.push(CheckResult::new(
        "t_m_exponent",
        bad_exp.is_none(),
        bad_exp.map(|&x| format!("{:?} has order {}", q.elements[x], g.element_order(x))),
    ));
    let want_h = spec.f_order() * spec.rot_order() * (m as usize).pow(d2 as u32);
    checks.push(CheckResult::new(
        "complement_order",
        h.len() == want_h,
        Some(format!("{} (expected {want_h})", h.len())),
    ));
    let tm_set: HashSet<usize> = tm.iter().copied().collect();
    let common: Vec<usize> = h.iter().copied().filter(|x| tm_set.contains(x)).collect();
    checks.push(CheckResult::new(
        "trivial_intersection",
        common == vec![g.identity()],
        (common.len() > 1).then(|| format!("{} common elements", common.len())),
    ));
    let products: BTreeSet<usize> = tm.iter().flat_map(|&a| h.iter().map(move |&b| g.mul(a, b))).collect();
    checks.push(CheckResult::new(
        "order_product",
        tm.len() * h.len() == q.order() && products.len() == q.order(),
        Some(format!("{} = {} * {}", q.order(), tm.len(), h.len())),
    ));
    let direct_product = g.is_normal(&h);

    let pass = checks.iter().all(|c| c.pass);
    Ok(SplitCertificate {
        group: spec.name.clone(),
        m,
        n,
        modulus,
        a: comp.a,
        tau_tilde: spec.p_reps.iter().map(|p| p.tau.clone()).collect(),
        complement_lifts: comp.elements.iter().map(IsometryRecord::from).collect(),
        orders: CertificateOrders { group: q.order(), t_m: tm.len(), complement: h.len() },
        t_m_generators: tm_gens.iter().map(|&i| q.elements[i].clone()).collect(),
        complement_generators: h_gens.iter().map(|&i| q.elements[i].clone()).collect(),
        direct_product,
        checks,
        pass,
    })
}

/// Closure of normal forms under multiplication, computed with isometries.
fn closure_by_isometries(spec: &GroupSpec, modulus: u64, gens: &[NormalForm]) -> Result<Vec<NormalForm>> {
    let reduce = |nf: NormalForm| NormalForm {
        n: nf.n.iter().map(|x| x.rem_euclid(modulus as i64)).collect(),
        f: nf.f,
        p: nf.p,
    };
    let gen_isos: Vec<Isometry> = gens.iter().map(|g| spec.element(g)).collect();
    let id = reduce(spec.normal_form(&Isometry::identity(spec.d1, spec.d2))?);
    let mut seen: HashSet<NormalForm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let xi = spec.element(&x);
        for g in &gen_isos {
            let y = reduce(spec.normal_form(&xi.mul(g))?);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Re-checks a certificate from its generator lists without the Cayley table.
pub fn reverify(spec: &GroupSpec, cert: &SplitCertificate) -> Result<bool> {
    let modulus = cert.modulus;
    let tm = closure_by_isometries(spec, modulus, &cert.t_m_generators)?;
    let h = closure_by_isometries(spec, modulus, &cert.complement_generators)?;
    let order = QuotientGroup::expected_order(spec, modulus);
    let tm_set: HashSet<NormalForm> = tm.iter().cloned().collect();
    let reduce = |g: &Isometry| -> Result<NormalForm> {
        let nf = spec.normal_form(g)?;
        Ok(NormalForm { n: nf.n.iter().map(|x| x.rem_euclid(modulus as i64)).collect(), ..nf })
    };
    let intersection = h.iter().filter(|x| tm_set.contains(x)).count();
    let gens = spec.generators();
    let mut normal = true;
    for t in &tm {
        let ti = spec.element(t);
        for g in &gens {
            normal &= tm_set.contains(&reduce(&g.inverse().mul(&ti).mul(g))?);
        }
    }
    Ok(normal
        && intersection == 1
        && tm.len() * h.len() == order
        && tm.len() == cert.orders.t_m
        && h.len() == cert.orders.complement)
}

/// Elements outside `T` with `g² = id`, scanning exponents in `[-bound, bound]`.
pub fn order_two_elements(spec: &GroupSpec, bound: i64) -> Vec<NormalForm> {
    let f_id = spec.f_identity();
    let p_id = spec.p_identity();
    let mut out = Vec::new();
    for n in box_points(spec.d2, (2 * bound + 1) as u64) {
        let n: Vec<i64> = n.iter().map(|x| x - bound).collect();
        for f in 0..spec.f_order() {
            for p in 0..spec.rot_order() {
                if Some(f) == f_id && Some(p) == p_id {
                    continue;
                }
                let nf = NormalForm { n: n.clone(), f, p };
                let g = spec.element(&nf);
                if g.mul(&g).is_identity(spec.tol) {
                    out.push(nf);
                }
            }
        }
    }
    out
}
