//! Matrix-valued `T^N`-periodic functions and their Fourier transform over
//! the irreps of `G_N`.
//!
//! Functions are stored densely, one matrix per normal form of `G_N` in
//! enumeration order. The transform of `u` at `ρ` is
//! `(1/|G_N|) Σ u(g) ⊗ ρ(g)`, with row index `a·d_ρ + i`.

use num_complex::Complex64;
use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, NormalForm};
use crate::isometry::Isometry;
use crate::quotient::{enumerate_normal_forms, QuotientGroup};
use crate::repr::{matrix_to_pairs, pairs_to_matrix, CMatrix, IrrepSet};

/// A function on `G` invariant under right translation by `T^N`.
#[derive(Clone, Debug)]
pub struct PeriodicFunction {
    pub spec: GroupSpec,
    pub modulus: u64,
    pub shape: (usize, usize),
    pub values: Vec<CMatrix>,
}

fn frobenius(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

fn scale(m: CMatrix, s: f64) -> CMatrix {
    m * Complex64::new(s, 0.0)
}

fn index_in(spec: &GroupSpec, modulus: u64, nf: &NormalForm) -> usize {
    let n = modulus as i64;
    let lin = nf.n.iter().fold(0usize, |acc, x| acc * modulus as usize + x.rem_euclid(n) as usize);
    (lin * spec.f_order() + nf.f) * spec.rot_order() + nf.p
}

impl PeriodicFunction {
    pub fn zeros(spec: &GroupSpec, modulus: u64, shape: (usize, usize)) -> Self {
        let order = QuotientGroup::expected_order(spec, modulus);
        PeriodicFunction {
            spec: spec.clone(),
            modulus,
            shape,
            values: vec![CMatrix::zeros(shape.0, shape.1); order],
        }
    }

    pub fn from_fn<F: FnMut(usize, &NormalForm) -> CMatrix>(
        spec: &GroupSpec,
        modulus: u64,
        shape: (usize, usize),
        mut f: F,
    ) -> Result<Self> {
        let values: Vec<CMatrix> =
            enumerate_normal_forms(spec, modulus).iter().enumerate().map(|(i, nf)| f(i, nf)).collect();
        if values.iter().any(|v| v.shape() != shape) {
            return Err(Error::ShapeMismatch(format!("values are not {}x{}", shape.0, shape.1)));
        }
        Ok(PeriodicFunction { spec: spec.clone(), modulus, shape, values })
    }

    pub fn constant(spec: &GroupSpec, modulus: u64, value: CMatrix) -> Self {
        let shape = value.shape();
        let order = QuotientGroup::expected_order(spec, modulus);
        PeriodicFunction { spec: spec.clone(), modulus, shape, values: vec![value; order] }
    }

    /// Indicator of the coset `g·T^N`, scalar valued.
    pub fn delta(spec: &GroupSpec, modulus: u64, g: &NormalForm) -> Self {
        let mut u = Self::zeros(spec, modulus, (1, 1));
        u.values[index_in(spec, modulus, g)][(0, 0)] = Complex64::new(1.0, 0.0);
        u
    }

    pub fn random<R: Rng>(spec: &GroupSpec, modulus: u64, shape: (usize, usize), rng: &mut R) -> Self {
        let order = QuotientGroup::expected_order(spec, modulus);
        let values = (0..order)
            .map(|_| {
                CMatrix::from_fn(shape.0, shape.1, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
            })
            .collect();
        PeriodicFunction { spec: spec.clone(), modulus, shape, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, nf: &NormalForm) -> &CMatrix {
        &self.values[index_in(&self.spec, self.modulus, nf)]
    }

    /// The same function viewed as `T^{kN}`-periodic.
    pub fn lift(&self, modulus: u64) -> Result<PeriodicFunction> {
        if !modulus.is_multiple_of(self.modulus) {
            return Err(Error::Incompatible(format!(
                "period {} does not divide {modulus}",
                self.modulus
            )));
        }
        let values =
            enumerate_normal_forms(&self.spec, modulus).iter().map(|nf| self.at(nf).clone()).collect();
        Ok(PeriodicFunction { spec: self.spec.clone(), modulus, shape: self.shape, values })
    }

    pub fn max_diff(&self, other: &PeriodicFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).map(|z| z.norm()).max())
            .fold(0.0, f64::max)
    }

    fn compatible(&self, other: &PeriodicFunction) -> Result<()> {
        if self.spec.name != other.spec.name || self.spec.d2 != other.spec.d2 {
            return Err(Error::Incompatible(format!(
                "functions live on {} and {}",
                self.spec.name, other.spec.name
            )));
        }
        Ok(())
    }
}

/// `(1/|C_N|) Σ ⟨u(g), v(g)⟩` over a common period.
pub fn inner_product(u: &PeriodicFunction, v: &PeriodicFunction) -> Result<Complex64> {
    u.compatible(v)?;
    if u.shape != v.shape {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", u.shape, v.shape)));
    }
    let l = u.modulus.lcm(&v.modulus);
    let (ul, vl) = (u.lift(l)?, v.lift(l)?);
    let s: Complex64 = ul.values.iter().zip(&vl.values).map(|(a, b)| frobenius(a, b)).sum();
    Ok(s / ul.len() as f64)
}

/// Transform indexed by the irreps of one solver run on `G_N`.
#[derive(Clone, Debug)]
pub struct FourierTable {
    pub modulus: u64,
    pub shape: (usize, usize),
    pub seed: u64,
    pub dims: Vec<usize>,
    pub entries: Vec<CMatrix>,
}

impl FourierTable {
    pub fn zeros(q: &QuotientGroup, irr: &IrrepSet, shape: (usize, usize)) -> Self {
        let dims = irr.dims();
        let entries = dims.iter().map(|&d| CMatrix::zeros(shape.0 * d, shape.1 * d)).collect();
        FourierTable { modulus: q.modulus, shape, seed: irr.seed, dims, entries }
    }

    /// `Σ_ρ d_ρ ⟨A(ρ), B(ρ)⟩`.
    pub fn inner(&self, other: &FourierTable) -> Complex64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .zip(&self.dims)
            .map(|((a, b), &d)| frobenius(a, b) * d as f64)
            .sum()
    }

    pub fn max_diff(&self, other: &FourierTable) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).map(|z| z.norm()).max())
            .fold(0.0, f64::max)
    }
}

fn check_domain(q: &QuotientGroup, modulus: u64, len: usize) -> Result<()> {
    if q.modulus != modulus || q.order() != len {
        return Err(Error::Incompatible(format!(
            "function has period {modulus} but the quotient has N = {}",
            q.modulus
        )));
    }
    Ok(())
}

pub fn transform(u: &PeriodicFunction, q: &QuotientGroup, irr: &IrrepSet) -> Result<FourierTable> {
    check_domain(q, u.modulus, u.len())?;
    let inv = 1.0 / q.order() as f64;
    let entries = irr
        .irreps
        .iter()
        .map(|r| {
            let d = r.dim();
            let mut acc = CMatrix::zeros(u.shape.0 * d, u.shape.1 * d);
            for (g, ug) in u.values.iter().enumerate() {
                acc += ug.kronecker(r.matrix(g));
            }
            scale(acc, inv)
        })
        .collect();
    Ok(FourierTable { modulus: q.modulus, shape: u.shape, seed: irr.seed, dims: irr.dims(), entries })
}

/// `u(h)_{ab} = Σ_ρ d_ρ Σ_{ij} û(ρ)_{(a,i),(b,j)} conj(ρ(h)_{ij})`.
pub fn inverse_transform(t: &FourierTable, q: &QuotientGroup, irr: &IrrepSet) -> Result<PeriodicFunction> {
    if t.entries.len() != irr.irreps.len() || t.dims != irr.dims() {
        return Err(Error::Incompatible("table does not cover the irreps of G_N".into()));
    }
    if t.modulus != q.modulus {
        return Err(Error::Incompatible(format!("table has N = {} but quotient has {}", t.modulus, q.modulus)));
    }
    let (m, n) = t.shape;
    PeriodicFunction::from_fn(&q.spec, q.modulus, t.shape, |h, _| {
        let mut out = CMatrix::zeros(m, n);
        for (r, e) in irr.irreps.iter().zip(&t.entries) {
            let d = r.dim();
            let rh = r.matrix(h);
            for a in 0..m {
                for b in 0..n {
                    let mut s = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        for j in 0..d {
                            s += e[(a * d + i, b * d + j)] * rh[(i, j)].conj();
                        }
                    }
                    out[(a, b)] += s * d as f64;
                }
            }
        }
        out
    })
}

/// `(τ_g u)(h) = u(hg)`.
pub fn translate(u: &PeriodicFunction, q: &QuotientGroup, g: usize) -> Result<PeriodicFunction> {
    check_domain(q, u.modulus, u.len())?;
    let values = (0..q.order()).map(|h| u.values[q.mul(h, g)].clone()).collect();
    Ok(PeriodicFunction { spec: u.spec.clone(), modulus: u.modulus, shape: u.shape, values })
}

/// A finitely supported function on `G`, keyed by normal forms with
/// unreduced exponents.
#[derive(Clone, Debug)]
pub struct SummableFunction {
    pub shape: (usize, usize),
    pub support: Vec<(NormalForm, CMatrix)>,
}

impl SummableFunction {
    pub fn new(shape: (usize, usize), support: Vec<(NormalForm, CMatrix)>) -> Result<Self> {
        if support.iter().any(|(_, v)| v.shape() != shape) {
            return Err(Error::ShapeMismatch(format!("values are not {}x{}", shape.0, shape.1)));
        }
        Ok(SummableFunction { shape, support })
    }

    pub fn delta(g: NormalForm, shape: usize) -> Self {
        SummableFunction { shape: (shape, shape), support: vec![(g, CMatrix::identity(shape, shape))] }
    }
}

/// `(u * v)(g) = Σ_h u(h) v(h⁻¹g)`, evaluated with isometry arithmetic.
pub fn convolve(u: &SummableFunction, v: &PeriodicFunction) -> Result<PeriodicFunction> {
    if u.shape.1 != v.shape.0 {
        return Err(Error::ShapeMismatch(format!("{:?} cannot multiply {:?}", u.shape, v.shape)));
    }
    let spec = &v.spec;
    let hs: Vec<(Isometry, &CMatrix)> =
        u.support.iter().map(|(nf, val)| (spec.element(nf).inverse(), val)).collect();
    let nfs = enumerate_normal_forms(spec, v.modulus);
    let mut values = Vec::with_capacity(nfs.len());
    for nf in &nfs {
        let g = spec.element(nf);
        let mut acc = CMatrix::zeros(u.shape.0, v.shape.1);
        for (h_inv, uh) in &hs {
            let x = spec.normal_form(&h_inv.mul(&g))?;
            acc += *uh * v.at(&x);
        }
        values.push(acc);
    }
    Ok(PeriodicFunction { spec: spec.clone(), modulus: v.modulus, shape: (u.shape.0, v.shape.1), values })
}

/// `Σ_h u(h) ⊗ ρ(h)` with `ρ` evaluated through `G → G_N`.
pub fn transform_l1(u: &SummableFunction, q: &QuotientGroup, irr: &IrrepSet) -> FourierTable {
    let entries = irr
        .irreps
        .iter()
        .map(|r| {
            let d = r.dim();
            let mut acc = CMatrix::zeros(u.shape.0 * d, u.shape.1 * d);
            for (nf, val) in &u.support {
                acc += val.kronecker(r.matrix(q.index_of(nf)));
            }
            acc
        })
        .collect();
    FourierTable { modulus: q.modulus, shape: u.shape, seed: irr.seed, dims: irr.dims(), entries }
}

/// JSON function file with implicit zeros.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionFile {
    pub group: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub shape: [usize; 2],
    pub entries: Vec<FunctionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionEntry {
    pub n: Vec<i64>,
    pub f: usize,
    pub p: usize,
    pub value: Vec<Vec<[f64; 2]>>,
}

impl FunctionFile {
    pub fn from_function(u: &PeriodicFunction) -> Self {
        let entries = enumerate_normal_forms(&u.spec, u.modulus)
            .into_iter()
            .zip(&u.values)
            .filter(|(_, v)| v.iter().any(|z| z.norm() != 0.0))
            .map(|(nf, v)| FunctionEntry { n: nf.n, f: nf.f, p: nf.p, value: matrix_to_pairs(v) })
            .collect();
        FunctionFile { group: u.spec.name.clone(), n: u.modulus, shape: [u.shape.0, u.shape.1], entries }
    }

    pub fn to_function(&self, spec: &GroupSpec) -> Result<PeriodicFunction> {
        if self.group != spec.name {
            return Err(Error::Incompatible(format!(
                "function is on {} but the spec is {}",
                self.group, spec.name
            )));
        }
        if self.n == 0 {
            return Err(Error::Parse("period N must be positive".into()));
        }
        let shape = (self.shape[0], self.shape[1]);
        let mut u = PeriodicFunction::zeros(spec, self.n, shape);
        for e in &self.entries {
            if e.n.len() != spec.d2 || e.f >= spec.f_order() || e.p >= spec.rot_order() {
                return Err(Error::Incompatible(format!("entry {:?} is not a normal form of {}", e.n, spec.name)));
            }
            let v = pairs_to_matrix(&e.value)?;
            if v.shape() != shape {
                return Err(Error::ShapeMismatch(format!("entry {:?} has shape {:?}", e.n, v.shape())));
            }
            let idx = index_in(spec, self.n, &NormalForm { n: e.n.clone(), f: e.f, p: e.p });
            u.values[idx] = v;
        }
        Ok(u)
    }
}

/// JSON export of a [`FourierTable`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableFile {
    pub group: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub shape: [usize; 2],
    pub seed: u64,
    pub entries: Vec<TableEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub irrep: usize,
    pub dim: usize,
    pub value: Vec<Vec<[f64; 2]>>,
}

impl TableFile {
    pub fn from_table(group: &str, t: &FourierTable) -> Self {
        TableFile {
            group: group.to_string(),
            n: t.modulus,
            shape: [t.shape.0, t.shape.1],
            seed: t.seed,
            entries: t
                .entries
                .iter()
                .zip(&t.dims)
                .enumerate()
                .map(|(i, (e, &d))| TableEntry { irrep: i, dim: d, value: matrix_to_pairs(e) })
                .collect(),
        }
    }

    pub fn to_table(&self) -> Result<FourierTable> {
        let shape = (self.shape[0], self.shape[1]);
        let mut dims = Vec::new();
        let mut entries = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if e.irrep != i {
                return Err(Error::Parse(format!("table entry {i} is out of order")));
            }
            let m = pairs_to_matrix(&e.value)?;
            if m.shape() != (shape.0 * e.dim, shape.1 * e.dim) {
                return Err(Error::ShapeMismatch(format!("entry {i} has shape {:?}", m.shape())));
            }
            dims.push(e.dim);
            entries.push(m);
        }
        Ok(FourierTable { modulus: self.n, shape, seed: self.seed, dims, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::repr::irreps;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (QuotientGroup, IrrepSet) {
        let q = QuotientGroup::build(&catalog::pg(), 3).unwrap();
        let irr = irreps(&q.group, 0).unwrap();
        (q, irr)
    }

    #[test]
    fn delta_transforms_to_scaled_identity() {
        let (q, irr) = setup();
        let id = q.elements[q.identity()].clone();
        let t = transform(&PeriodicFunction::delta(&q.spec, 3, &id), &q, &irr).unwrap();
        for (e, &d) in t.entries.iter().zip(&t.dims) {
            assert!((e - CMatrix::identity(d, d) / Complex64::new(18.0, 0.0)).map(|z| z.norm()).max() < 1e-12);
        }
    }

    #[test]
    fn constant_only_hits_trivial() {
        let (q, irr) = setup();
        let one = PeriodicFunction::constant(&q.spec, 3, CMatrix::identity(1, 1));
        let t = transform(&one, &q, &irr).unwrap();
        let nonzero: Vec<usize> =
            (0..t.entries.len()).filter(|&i| t.entries[i].map(|z| z.norm()).max() > 1e-9).collect();
        assert_eq!(nonzero.len(), 1);
        assert!((t.entries[nonzero[0]][(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((inner_product(&one, &one).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn round_trip_and_plancherel() {
        let (q, irr) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = PeriodicFunction::random(&q.spec, 3, (2, 3), &mut rng);
        let v = PeriodicFunction::random(&q.spec, 3, (2, 3), &mut rng);
        let (tu, tv) = (transform(&u, &q, &irr).unwrap(), transform(&v, &q, &irr).unwrap());
        assert!(inverse_transform(&tu, &q, &irr).unwrap().max_diff(&u) < 1e-10);
        assert!((inner_product(&u, &v).unwrap() - tu.inner(&tv)).norm() < 1e-10);
    }

    #[test]
    fn delta_convolution_is_identity() {
        let (q, _) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = PeriodicFunction::random(&q.spec, 3, (2, 2), &mut rng);
        let id = q.elements[q.identity()].clone();
        let w = convolve(&SummableFunction::delta(id, 2), &v).unwrap();
        assert!(w.max_diff(&v) < 1e-15);
    }

    #[test]
    fn lift_preserves_inner_product() {
        let (q, _) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = PeriodicFunction::random(&q.spec, 3, (1, 2), &mut rng);
        let a = inner_product(&u, &u).unwrap();
        let b = inner_product(&u.lift(6).unwrap(), &u).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn function_file_round_trip() {
        let (q, _) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = PeriodicFunction::random(&q.spec, 3, (1, 1), &mut rng);
        let file = FunctionFile::from_function(&u);
        let json = serde_json::to_string(&file).unwrap();
        let back: FunctionFile = serde_json::from_str(&json).unwrap();
        assert!(back.to_function(&q.spec).unwrap().max_diff(&u) == 0.0);
    }
}
