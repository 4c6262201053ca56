//! Finite quotients `G_N = G / T^N` materialized on normal forms.

use std::collections::{HashMap, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{box_points, GroupSpec, NormalForm};
use crate::isometry::Isometry;

/// A finite group given by its Cayley table on indices `0..order`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
}

impl FiniteGroup {
    /// Builds the group from a row-major Cayley table.
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != order * order {
            return Err(Error::InternalInconsistency("Cayley table has the wrong size".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] as usize == a))
            .ok_or_else(|| Error::InternalInconsistency("Cayley table has no identity".into()))?;
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| table[a * order + b] as usize == identity)
                .ok_or_else(|| Error::InternalInconsistency(format!("element {a} has no inverse")))?;
            inverse[a] = b as u32;
        }
        Ok(FiniteGroup { order, table, inverse, identity })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g⁻¹·h·g`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut out = vec![self.identity];
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &s in sub {
            member[s] = true;
        }
        (0..self.order).all(|g| sub.iter().all(|&h| member[self.conj(g, h)]))
    }

    pub fn is_abelian_on(&self, sub: &[usize]) -> bool {
        sub.iter().all(|&a| sub.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_abelian(&self) -> bool {
        let all: Vec<usize> = (0..self.order).collect();
        self.is_abelian_on(&all)
    }

    /// Checks associativity, identity and inverse on `samples` random triples.
    pub fn spot_check_axioms<R: Rng>(&self, rng: &mut R, samples: usize) -> bool {
        (0..samples).all(|_| {
            let a = rng.gen_range(0..self.order);
            let b = rng.gen_range(0..self.order);
            let c = rng.gen_range(0..self.order);
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                && self.mul(a, self.identity) == a
                && self.mul(self.identity, a) == a
                && self.mul(a, self.inv(a)) == self.identity
        })
    }
}

/// A subgroup of a [`FiniteGroup`] with its own local indexing.
#[derive(Clone, Debug)]
pub struct Subgroup {
    /// Parent index of each local element.
    pub parent: Vec<usize>,
    local: Vec<Option<usize>>,
    pub group: FiniteGroup,
}

impl Subgroup {
    pub fn new(parent_group: &FiniteGroup, elements: Vec<usize>) -> Result<Self> {
        let mut local = vec![None; parent_group.order()];
        for (i, &e) in elements.iter().enumerate() {
            local[e] = Some(i);
        }
        let k = elements.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &elements {
            for &b in &elements {
                let ab = local[parent_group.mul(a, b)].ok_or_else(|| {
                    Error::InternalInconsistency("subgroup is not closed".into())
                })?;
                table.push(ab as u32);
            }
        }
        let group = FiniteGroup::from_table(k, table)?;
        Ok(Subgroup { parent: elements, local, group })
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn local(&self, parent_index: usize) -> Option<usize> {
        self.local[parent_index]
    }

    pub fn contains(&self, parent_index: usize) -> bool {
        self.local[parent_index].is_some()
    }
}

/// The finite group `G_N = G / T^N` on normal forms with `n ∈ {0..N−1}^{d2}`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub spec: GroupSpec,
    pub modulus: u64,
    pub m0: u64,
    pub elements: Vec<NormalForm>,
    isometries: Vec<Isometry>,
    pub group: FiniteGroup,
}

impl QuotientGroup {
    /// Materializes `G_N`; `N` must be a multiple of m₀.
    pub fn build(spec: &GroupSpec, modulus: u64) -> Result<Self> {
        let m0 = spec.find_m0()?.m0;
        Self::build_with_m0(spec, modulus, m0)
    }

    /// As [`QuotientGroup::build`], with m₀ already known.
    pub fn build_with_m0(spec: &GroupSpec, modulus: u64, m0: u64) -> Result<Self> {
        if modulus == 0 || !modulus.is_multiple_of(m0) {
            return Err(Error::BadModulus { n: modulus, m0 });
        }
        let elements = enumerate_normal_forms(spec, modulus);
        let isometries: Vec<Isometry> = elements.iter().map(|nf| spec.element(nf)).collect();
        let order = elements.len();
        let mut table = Vec::with_capacity(order * order);
        let shape = IndexShape::new(spec, modulus);
        for a in &isometries {
            for b in &isometries {
                let nf = spec.normal_form(&a.mul(b))?;
                table.push(shape.index(&nf) as u32);
            }
        }
        let group = FiniteGroup::from_table(order, table)?;
        Ok(QuotientGroup { spec: spec.clone(), modulus, m0, elements, isometries, group })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `N^{d2}·|F|·|rot(S)|`.
    pub fn expected_order(spec: &GroupSpec, modulus: u64) -> usize {
        (modulus as usize).pow(spec.d2 as u32) * spec.f_order() * spec.rot_order()
    }

    fn shape(&self) -> IndexShape {
        IndexShape::new(&self.spec, self.modulus)
    }

    /// Index of a normal form after reducing its exponents modulo `N`.
    pub fn index_of(&self, nf: &NormalForm) -> usize {
        self.shape().index(nf)
    }

    /// Index of the coset of an arbitrary group element.
    pub fn index_of_isometry(&self, g: &Isometry) -> Result<usize> {
        Ok(self.index_of(&self.spec.normal_form(g)?))
    }

    pub fn isometry(&self, index: usize) -> &Isometry {
        &self.isometries[index]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.group.mul(a, b)
    }

    pub fn identity(&self) -> usize {
        self.group.identity()
    }

    /// Index of the coset representative `p_reps[p]`.
    pub fn p_rep_index(&self, p: usize) -> usize {
        let f = self.spec.f_identity().expect("validated spec has an F identity");
        self.index_of(&NormalForm { n: vec![0; self.spec.d2], f, p })
    }

    /// Index of `t(n)`.
    pub fn section_index(&self, n: &[i64]) -> usize {
        let f = self.spec.f_identity().expect("validated spec has an F identity");
        let p = self.spec.p_identity().expect("validated spec has a p identity");
        self.index_of(&NormalForm { n: n.to_vec(), f, p })
    }

    /// Indices of the generators `t_lifts`, `F`, `p_reps`.
    pub fn generator_indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            (0..self.spec.d2).map(|i| self.section_index(&unit(self.spec.d2, i))).collect();
        let p_id = self.spec.p_identity().expect("validated spec has a p identity");
        for f in 0..self.spec.f_order() {
            out.push(self.index_of(&NormalForm { n: vec![0; self.spec.d2], f, p: p_id }));
        }
        for p in 0..self.spec.rot_order() {
            out.push(self.p_rep_index(p));
        }
        out
    }

    /// The normal subgroup `(TF)_N`.
    pub fn tf_subgroup(&self) -> Result<Subgroup> {
        let p_id = self.spec.p_identity().expect("validated spec has a p identity");
        let elems = (0..self.order()).filter(|&i| self.elements[i].p == p_id).collect();
        Subgroup::new(&self.group, elems)
    }

    /// Projects an element of `G_N` to `G_M` for `M | N`.
    pub fn project_index(&self, index: usize, coarse: &QuotientGroup) -> usize {
        coarse.index_of(&self.elements[index])
    }

    /// Counts `G_N` by breadth-first closure under right multiplication by the
    /// generators, computed with isometries rather than the Cayley table.
    pub fn count_by_generator_closure(spec: &GroupSpec, modulus: u64) -> Result<usize> {
        let shape = IndexShape::new(spec, modulus);
        let gens = spec.generators();
        let identity = spec.normal_form(&Isometry::identity(spec.d1, spec.d2))?;
        let mut seen: HashMap<usize, ()> = HashMap::new();
        seen.insert(shape.index(&identity), ());
        let mut queue = VecDeque::from([spec.element(&shape.reduce(&identity))]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let nf = shape.reduce(&spec.normal_form(&x.mul(g))?);
                let idx = shape.index(&nf);
                if seen.insert(idx, ()).is_none() {
                    queue.push_back(spec.element(&nf));
                }
            }
        }
        Ok(seen.len())
    }
}

fn unit(d: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// All normal forms of `G_N` in index order.
pub fn enumerate_normal_forms(spec: &GroupSpec, modulus: u64) -> Vec<NormalForm> {
    let mut out = Vec::with_capacity(QuotientGroup::expected_order(spec, modulus));
    for n in box_points(spec.d2, modulus) {
        for f in 0..spec.f_order() {
            for p in 0..spec.rot_order() {
                out.push(NormalForm { n: n.clone(), f, p });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
struct IndexShape {
    modulus: i64,
    f_order: usize,
    rot_order: usize,
}

impl IndexShape {
    fn new(spec: &GroupSpec, modulus: u64) -> Self {
        IndexShape { modulus: modulus as i64, f_order: spec.f_order(), rot_order: spec.rot_order() }
    }

    fn reduce(&self, nf: &NormalForm) -> NormalForm {
        NormalForm {
            n: nf.n.iter().map(|x| x.rem_euclid(self.modulus)).collect(),
            f: nf.f,
            p: nf.p,
        }
    }

    fn index(&self, nf: &NormalForm) -> usize {
        let lin = nf
            .n
            .iter()
            .fold(0usize, |acc, x| acc * self.modulus as usize + x.rem_euclid(self.modulus) as usize);
        (lin * self.f_order + nf.f) * self.rot_order + nf.p
    }
}
