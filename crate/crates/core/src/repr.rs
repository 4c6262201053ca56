//! Unitary representations of finite groups given by Cayley tables.
//!
//! Representations store the full table of matrices, one per group element.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotient::{FiniteGroup, QuotientGroup, Subgroup};
use crate::isometry::Isometry;
use crate::rational::{DualVector, Rational};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance for structural equalities (characters, irreducibility).
pub const STRUCT_TOL: f64 = 1e-6;
/// Largest group the irrep solver accepts by default.
pub const DEFAULT_CAP: usize = 4096;
/// Reseeds before the solver gives up.
pub const MAX_RESEEDS: usize = 8;

#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    matrices: Vec<CMatrix>,
}

impl Representation {
    pub fn new(dim: usize, matrices: Vec<CMatrix>) -> Result<Self> {
        if matrices.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::DimensionMismatch(format!("representation matrices are not {dim}x{dim}")));
        }
        Ok(Representation { dim, matrices })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self::from_scalars(&vec![Complex64::new(1.0, 0.0); group.order()])
    }

    /// One-dimensional representation from its values.
    pub fn from_scalars(values: &[Complex64]) -> Self {
        Representation {
            dim: 1,
            matrices: values.iter().map(|&v| CMatrix::from_element(1, 1, v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain_order(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    /// `(1/|G|) Σ |χ(g)|²`, equal to 1 exactly for irreducibles.
    pub fn character_norm(&self) -> f64 {
        let chi = self.character();
        chi.iter().map(|c| c.norm_sqr()).sum::<f64>() / chi.len() as f64
    }

    pub fn is_irreducible(&self) -> bool {
        (self.character_norm() - 1.0).abs() <= STRUCT_TOL
    }

    /// Largest deviation from `ρ(a)ρ(b) = ρ(ab)` over all pairs.
    pub fn homomorphism_defect(&self, group: &FiniteGroup) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..group.order() {
            for b in 0..group.order() {
                let d = (&self.matrices[a] * &self.matrices[b] - &self.matrices[group.mul(a, b)]).map(|z| z.norm()).max();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// As [`Representation::homomorphism_defect`], over random pairs.
    pub fn homomorphism_defect_sampled<R: Rng>(&self, group: &FiniteGroup, rng: &mut R, samples: usize) -> f64 {
        (0..samples)
            .map(|_| {
                let a = rng.gen_range(0..group.order());
                let b = rng.gen_range(0..group.order());
                (&self.matrices[a] * &self.matrices[b] - &self.matrices[group.mul(a, b)]).map(|z| z.norm()).max()
            })
            .fold(0.0, f64::max)
    }

    pub fn unitarity_defect(&self) -> f64 {
        let id = CMatrix::identity(self.dim, self.dim);
        self.matrices.iter().map(|m| (m.adjoint() * m - &id).map(|z| z.norm()).max()).fold(0.0, f64::max)
    }

    /// `U ρ(g) Uᴴ`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Representation {
        let uh = u.adjoint();
        Representation { dim: self.dim, matrices: self.matrices.iter().map(|m| u * m * &uh).collect() }
    }

    /// Pointwise product with a one-dimensional representation.
    pub fn twist(&self, chi: &[Complex64]) -> Representation {
        Representation {
            dim: self.dim,
            matrices: self.matrices.iter().zip(chi).map(|(m, &c)| m * c).collect(),
        }
    }

    /// Pulls back along a homomorphism given as an index map into this domain.
    pub fn pull_back(&self, map: &[usize]) -> Representation {
        Representation { dim: self.dim, matrices: map.iter().map(|&i| self.matrices[i].clone()).collect() }
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let d = self.dim + other.dim;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let mut m = CMatrix::zeros(d, d);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(b);
                m
            })
            .collect();
        Representation { dim: d, matrices }
    }

    pub fn to_record(&self, generators: &[usize], seed: Option<u64>) -> RepresentationRecord {
        RepresentationRecord {
            dim: self.dim,
            seed,
            generators: generators
                .iter()
                .map(|&g| GeneratorImage { element: g, matrix: matrix_to_pairs(&self.matrices[g]) })
                .collect(),
        }
    }
}

/// Serialized representation: images of generators plus the solver seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationRecord {
    pub dim: usize,
    pub seed: Option<u64>,
    pub generators: Vec<GeneratorImage>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub element: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn pairs_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::ShapeMismatch("ragged complex matrix".into()));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// `(1/|G|) Σ χ₁(g) conj(χ₂(g))`.
pub fn character_inner(chi1: &[Complex64], chi2: &[Complex64]) -> Complex64 {
    let s: Complex64 = chi1.iter().zip(chi2).map(|(a, b)| a * b.conj()).sum();
    s / chi1.len() as f64
}

pub fn characters_match(chi1: &[Complex64], chi2: &[Complex64], tol: f64) -> bool {
    chi1.len() == chi2.len() && chi1.iter().zip(chi2).all(|(a, b)| (a - b).norm() <= tol)
}

/// Unitary equivalence, decided by characters.
pub fn equivalent(r1: &Representation, r2: &Representation) -> bool {
    r1.dim == r2.dim && characters_match(&r1.character(), &r2.character(), STRUCT_TOL)
}

/// Multiplicity of the irreducible `irrep` in `r`, rounded.
pub fn multiplicity(r: &Representation, irrep: &Representation) -> usize {
    character_inner(&r.character(), &irrep.character()).re.round().max(0.0) as usize
}

/// Intertwiner `T` with `r1(g) T = T r2(g)`, found by averaging a random matrix.
pub fn intertwiner(group: &FiniteGroup, r1: &Representation, r2: &Representation, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = CMatrix::from_fn(r1.dim, r2.dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let mut acc = CMatrix::zeros(r1.dim, r2.dim);
    for g in 0..group.order() {
        acc += &r1.matrices[g] * &x * r2.matrices[g].adjoint();
    }
    acc / Complex64::new(group.order() as f64, 0.0)
}

/// Result of the irrep solver.
#[derive(Clone, Debug)]
pub struct IrrepSet {
    pub irreps: Vec<Representation>,
    /// Seed that produced the decomposition.
    pub seed: u64,
}

impl IrrepSet {
    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(Representation::dim).collect()
    }

    pub fn sum_of_squares(&self) -> usize {
        self.irreps.iter().map(|r| r.dim * r.dim).sum()
    }

    pub fn characters(&self) -> Vec<Vec<Complex64>> {
        self.irreps.iter().map(Representation::character).collect()
    }

    /// Index of the irrep equivalent to `r`, if any.
    pub fn find(&self, r: &Representation) -> Option<usize> {
        self.irreps.iter().position(|i| equivalent(i, r))
    }

    /// Multiplicities of every irrep in `r`.
    pub fn decompose(&self, r: &Representation) -> Vec<usize> {
        let chi = r.character();
        self.irreps
            .iter()
            .map(|i| character_inner(&chi, &i.character()).re.round().max(0.0) as usize)
            .collect()
    }
}

/// All irreducible unitary representations of `group`, one per class.
pub fn irreps(group: &FiniteGroup, seed: u64) -> Result<IrrepSet> {
    irreps_with_cap(group, seed, DEFAULT_CAP)
}

pub fn irreps_with_cap(group: &FiniteGroup, seed: u64, cap: usize) -> Result<IrrepSet> {
    if group.order() > cap {
        return Err(Error::CapExceeded { order: group.order(), cap });
    }
    for attempt in 0..MAX_RESEEDS as u64 {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        if let Some(irreps) = try_irreps(group, &mut rng) {
            return Ok(IrrepSet { irreps, seed: s });
        }
    }
    Err(Error::ConvergenceFailure(MAX_RESEEDS))
}

fn random_unit<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// One pass of the solver; `None` when the random element was degenerate.
fn try_irreps<R: Rng>(group: &FiniteGroup, rng: &mut R) -> Option<Vec<Representation>> {
    let order = group.order();
    // Hermitian element of the commutant of the left regular representation:
    // H[a][b] = c(a⁻¹b) with c(x⁻¹) = conj(c(x)).
    let mut c = vec![Complex64::new(0.0, 0.0); order];
    for x in 0..order {
        let xi = group.inv(x);
        if xi == x {
            c[x] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        } else if x < xi {
            c[x] = random_unit(rng);
            c[xi] = c[x].conj();
        }
    }
    let h = CMatrix::from_fn(order, order, |a, b| c[group.mul(group.inv(a), b)]);
    let eig = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..order).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut found: Vec<Representation> = Vec::new();
    let mut chars: Vec<Vec<Complex64>> = Vec::new();
    let mut total = 0usize;
    let mut start = 0;
    while start < order && total < order {
        let mut end = start + 1;
        while end < order && eig.eigenvalues[idx[end]] - eig.eigenvalues[idx[end - 1]] <= 1e-7 {
            end += 1;
        }
        let cols: Vec<usize> = idx[start..end].to_vec();
        start = end;
        let v = CMatrix::from_fn(order, cols.len(), |r, j| eig.eigenvectors[(r, cols[j])]);
        let chi = regular_block_character(group, &v);
        if chars.iter().any(|k| characters_match(k, &chi, STRUCT_TOL)) {
            continue;
        }
        let rep = regular_block(group, &v);
        for irr in split_irreducible(group, rep, rng, 0)? {
            let chi = irr.character();
            if !chars.iter().any(|k| characters_match(k, &chi, STRUCT_TOL)) {
                total += irr.dim * irr.dim;
                chars.push(chi);
                found.push(irr);
            }
        }
    }
    (total == order).then_some(found)
}

/// Character of `g ↦ Vᴴ L(g) V` where `L` permutes basis vectors `e_x ↦ e_{gx}`.
fn regular_block_character(group: &FiniteGroup, v: &CMatrix) -> Vec<Complex64> {
    let k = v.ncols();
    (0..group.order())
        .map(|g| {
            let mut s = Complex64::new(0.0, 0.0);
            for x in 0..group.order() {
                let gx = group.mul(g, x);
                for i in 0..k {
                    s += v[(gx, i)].conj() * v[(x, i)];
                }
            }
            s
        })
        .collect()
}

fn regular_block(group: &FiniteGroup, v: &CMatrix) -> Representation {
    let k = v.ncols();
    let matrices = (0..group.order())
        .map(|g| {
            CMatrix::from_fn(k, k, |i, j| {
                (0..group.order()).map(|x| v[(group.mul(g, x), i)].conj() * v[(x, j)]).sum()
            })
        })
        .collect();
    Representation { dim: k, matrices }
}

/// Splits an invariant block into irreducibles via averaged commutant elements.
fn split_irreducible<R: Rng>(
    group: &FiniteGroup,
    rep: Representation,
    rng: &mut R,
    depth: usize,
) -> Option<Vec<Representation>> {
    if rep.is_irreducible() {
        return Some(vec![rep]);
    }
    if depth > 8 || rep.character_norm() < 1.0 - STRUCT_TOL {
        return None;
    }
    let d = rep.dim;
    let mut x = CMatrix::from_fn(d, d, |_, _| random_unit(rng));
    x = &x + x.adjoint();
    let mut avg = CMatrix::zeros(d, d);
    for g in 0..group.order() {
        avg += rep.matrix(g) * &x * rep.matrix(g).adjoint();
    }
    avg /= Complex64::new(group.order() as f64, 0.0);
    let avg = (&avg + avg.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(avg);
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut out = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && eig.eigenvalues[idx[end]] - eig.eigenvalues[idx[end - 1]] <= 1e-7 {
            end += 1;
        }
        if end - start == d {
            return None;
        }
        let w = CMatrix::from_fn(d, end - start, |r, j| eig.eigenvectors[(r, idx[start + j])]);
        let wh = w.adjoint();
        let sub = Representation {
            dim: end - start,
            matrices: rep.matrices.iter().map(|m| &wh * m * &w).collect(),
        };
        out.extend(split_irreducible(group, sub, rng, depth + 1)?);
        start = end;
    }
    Some(out)
}

/// The wave character `χ_k(g) = exp(2πi⟨k, tau(g)⟩)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveCharacter {
    pub k: DualVector,
}

impl WaveCharacter {
    pub fn new(k: DualVector) -> Self {
        WaveCharacter { k }
    }

    /// Value on an element with exact translation part; the phase is reduced
    /// modulo 1 in exact arithmetic before conversion to floats.
    pub fn eval(&self, g: &Isometry) -> Complex64 {
        phase(&self.k.dot(&g.tau))
    }

    /// Values on the elements of a subgroup of a quotient.
    pub fn on_subgroup(&self, q: &QuotientGroup, sub: &Subgroup) -> Vec<Complex64> {
        sub.parent.iter().map(|&i| self.eval(q.isometry(i))).collect()
    }

    pub fn representation(&self, q: &QuotientGroup, sub: &Subgroup) -> Representation {
        Representation::from_scalars(&self.on_subgroup(q, sub))
    }
}

pub fn chi(k: DualVector) -> WaveCharacter {
    WaveCharacter::new(k)
}

/// `exp(2πi x)` with `x` reduced exactly to `[0, 1)`.
pub fn phase(x: &Rational) -> Complex64 {
    let t = x.fract_positive().to_f64();
    Complex64::from_polar(1.0, 2.0 * PI * t)
}

/// `(g·ρ)(h) = ρ(g⁻¹hg)` for `g ∈ G_N` and `ρ` on the normal subgroup `sub`.
pub fn dual_action(q: &QuotientGroup, sub: &Subgroup, g: usize, r: &Representation) -> Representation {
    let matrices = sub
        .parent
        .iter()
        .map(|&h| {
            let c = q.group.conj(g, h);
            r.matrix(sub.local(c).expect("subgroup is normal")).clone()
        })
        .collect();
    Representation { dim: r.dim, matrices }
}

/// Induction from `(TF)_N` to `G_N` with the spec's `p_reps` as coset representatives.
pub fn induce(q: &QuotientGroup, tf: &Subgroup, r: &Representation) -> Representation {
    let reps: Vec<usize> = (0..q.spec.rot_order()).map(|p| q.p_rep_index(p)).collect();
    induce_with(&q.group, tf, &reps, r)
}

/// Block `(i, j)` of `Ind ρ (g)` is `ρ̇(h_i⁻¹ g h_j)`.
pub fn induce_with(group: &FiniteGroup, sub: &Subgroup, coset_reps: &[usize], r: &Representation) -> Representation {
    let n = coset_reps.len();
    let d = r.dim;
    let matrices = (0..group.order())
        .map(|g| {
            let mut m = CMatrix::zeros(n * d, n * d);
            for (i, &hi) in coset_reps.iter().enumerate() {
                let left = group.mul(group.inv(hi), g);
                for (j, &hj) in coset_reps.iter().enumerate() {
                    if let Some(loc) = sub.local(group.mul(left, hj)) {
                        m.view_mut((i * d, j * d), (d, d)).copy_from(r.matrix(loc));
                    }
                }
            }
            m
        })
        .collect();
    Representation { dim: n * d, matrices }
}

/// Mackey criterion: no non-identity coset representative fixes `ρ` up to equivalence.
pub fn mackey_irreducible(q: &QuotientGroup, tf: &Subgroup, r: &Representation) -> bool {
    let id = q.spec.p_identity().expect("validated spec has a p identity");
    (0..q.spec.rot_order())
        .filter(|&p| p != id)
        .all(|p| !equivalent(&dual_action(q, tf, q.p_rep_index(p), r), r))
}
