//! Euclidean isometries in block form `O(d1) ⊕ E(d2)`.
//!
//! The `O(d1)` block is stored as a float matrix and compared with a
//! tolerance. The `E(d2)` block is stored exactly in lattice coordinates:
//! an integer point operation and a rational translation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{IntMatrix, LatticeVector, RatVec};

/// Default tolerance for orthogonality and float equality.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default bound on the order of a lattice point operation.
pub const DEFAULT_ORDER_BOUND: usize = 48;

/// Orthogonal `d1 × d1` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoMatrix(DMatrix<f64>);

impl OrthoMatrix {
    pub fn identity(dim: usize) -> Self {
        OrthoMatrix(DMatrix::identity(dim, dim))
    }

    /// Wraps a matrix, checking `‖QᵀQ − I‖_max ≤ tol`.
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "orthogonal block is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let q = OrthoMatrix(m);
        let dev = q.orthogonality_defect();
        if dev > tol {
            return Err(Error::InvalidSpec(format!(
                "matrix is not orthogonal (defect {dev:e})"
            )));
        }
        Ok(q)
    }

    /// Wraps a matrix without checking orthogonality.
    pub fn new_unchecked(m: DMatrix<f64>) -> Self {
        OrthoMatrix(m)
    }

    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("orthogonal block is not square".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]), tol)
    }

    /// Plane rotation by `angle`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        OrthoMatrix(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
    }

    pub fn diag(entries: &[f64]) -> Self {
        OrthoMatrix(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(entries)))
    }

    /// Block-diagonal sum of several orthogonal blocks.
    pub fn direct_sum(blocks: &[OrthoMatrix]) -> Self {
        let n: usize = blocks.iter().map(OrthoMatrix::dim).sum();
        let mut m = DMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            let d = b.dim();
            m.view_mut((off, off), (d, d)).copy_from(&b.0);
            off += d;
        }
        OrthoMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.0.row(i).iter().copied().collect()).collect()
    }

    pub fn mul(&self, other: &OrthoMatrix) -> OrthoMatrix {
        OrthoMatrix(&self.0 * &other.0)
    }

    pub fn transpose(&self) -> OrthoMatrix {
        OrthoMatrix(self.0.transpose())
    }

    pub fn max_diff(&self, other: &OrthoMatrix) -> f64 {
        (&self.0 - &other.0).amax()
    }

    pub fn approx_eq(&self, other: &OrthoMatrix, tol: f64) -> bool {
        self.dim() == other.dim() && self.max_diff(other) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&OrthoMatrix::identity(self.dim()), tol)
    }

    /// `‖QᵀQ − I‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        (self.0.transpose() * &self.0 - DMatrix::identity(n, n)).amax()
    }
}

/// A Euclidean isometry `q ⊕ (p, tau)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    pub q: OrthoMatrix,
    pub p: IntMatrix,
    pub tau: LatticeVector,
}

impl Isometry {
    pub fn new(q: OrthoMatrix, p: IntMatrix, tau: LatticeVector) -> Result<Self> {
        if p.dim() != tau.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point operation is {0}x{0} but translation has length {1}",
                p.dim(),
                tau.dim()
            )));
        }
        Ok(Isometry { q, p, tau })
    }

    pub fn identity(d1: usize, d2: usize) -> Self {
        Isometry {
            q: OrthoMatrix::identity(d1),
            p: IntMatrix::identity(d2),
            tau: RatVec::zeros(d2),
        }
    }

    /// Pure translation by a lattice vector.
    pub fn translation(d1: usize, v: LatticeVector) -> Self {
        Isometry { q: OrthoMatrix::identity(d1), p: IntMatrix::identity(v.dim()), tau: v }
    }

    pub fn d1(&self) -> usize {
        self.q.dim()
    }

    pub fn d2(&self) -> usize {
        self.p.dim()
    }

    fn check_dims(&self, other: &Isometry) -> Result<()> {
        if self.d1() != other.d1() || self.d2() != other.d2() {
            return Err(Error::DimensionMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.d1(),
                self.d2(),
                other.d1(),
                other.d2()
            )));
        }
        Ok(())
    }

    /// Product `self ∘ other`: `(A₁A₂, b₁ + A₁b₂)` in each block.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        self.check_dims(other)?;
        Ok(self.mul(other))
    }

    /// Product without the dimension check; callers guarantee matching blocks.
    pub(crate) fn mul(&self, other: &Isometry) -> Isometry {
        Isometry {
            q: self.q.mul(&other.q),
            p: self.p.mul(&other.p),
            tau: self.tau.add(&self.p.apply(&other.tau)),
        }
    }

    /// `(A⁻¹, −A⁻¹b)` in each block.
    pub fn inverse(&self) -> Isometry {
        let p_inv = self
            .p
            .inverse()
            .expect("lattice point operation is unimodular by construction");
        let tau = p_inv.apply(&self.tau).neg();
        Isometry { q: self.q.transpose(), p: p_inv, tau }
    }

    /// Integer power, negative exponents allowed.
    pub fn pow(&self, k: i64) -> Isometry {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Isometry::identity(self.d1(), self.d2());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Conjugate `self · x · self⁻¹`.
    pub fn conjugate(&self, x: &Isometry) -> Isometry {
        self.mul(x).mul(&self.inverse())
    }

    /// Exact equality of the `(p, tau)` block and `‖q − q'‖_max ≤ tol`.
    pub fn approx_equal(&self, other: &Isometry, tol: f64) -> bool {
        self.d1() == other.d1()
            && self.d2() == other.d2()
            && self.p == other.p
            && self.tau == other.tau
            && self.q.max_diff(&other.q) <= tol
    }

    /// True when the `E(d2)` block is the identity (the element lies in `F`'s block).
    pub fn is_spatial_identity(&self) -> bool {
        self.p.is_identity() && self.tau.is_zero()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.is_spatial_identity() && self.q.is_identity(tol)
    }
}

/// Serialized form of an isometry: row-major float rows for `q`, integer
/// rows for `p` and `"num/den"` strings for `tau`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryRecord {
    pub q: Vec<Vec<f64>>,
    pub p: Vec<Vec<i64>>,
    pub tau: RatVec,
}

impl From<&Isometry> for IsometryRecord {
    fn from(g: &Isometry) -> Self {
        IsometryRecord { q: g.q.rows(), p: g.p.rows(), tau: g.tau.clone() }
    }
}

impl IsometryRecord {
    pub fn to_isometry(&self, tol: f64) -> Result<Isometry> {
        let q = OrthoMatrix::from_rows(&self.q, tol)?;
        let p = IntMatrix::from_rows(&self.p)?;
        Isometry::new(q, p, self.tau.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn glide() -> Isometry {
        Isometry::new(
            OrthoMatrix::identity(0),
            IntMatrix::diag(&[1, -1]),
            RatVec(vec![Rational::new(1, 2), Rational::zero()]),
        )
        .unwrap()
    }

    #[test]
    fn translations_commute() {
        let a = Isometry::translation(0, RatVec::from_ints(&[1, 0]));
        let b = Isometry::translation(0, RatVec::from_ints(&[0, 1]));
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab, Isometry::translation(0, RatVec::from_ints(&[1, 1])));
        assert_eq!(ab, b.compose(&a).unwrap());
    }

    #[test]
    fn glide_squares_to_translation() {
        let g = glide();
        let g2 = g.compose(&g).unwrap();
        assert!(g2.approx_equal(&Isometry::translation(0, RatVec::from_ints(&[1, 0])), 0.0));
    }

    #[test]
    fn glide_inverse() {
        let g = glide();
        let inv = g.inverse();
        assert_eq!(inv.p, IntMatrix::diag(&[1, -1]));
        assert_eq!(inv.tau, RatVec(vec![Rational::new(-1, 2), Rational::zero()]));
        assert!(g.compose(&inv).unwrap().is_identity(1e-12));
        assert!(!g.approx_equal(&inv, 1e-9));
    }

    #[test]
    fn helix_powers() {
        let alpha = 1.0;
        let h = Isometry::new(
            OrthoMatrix::rotation(alpha),
            IntMatrix::identity(1),
            RatVec::from_ints(&[1]),
        )
        .unwrap();
        for n in [-3i64, 0, 1, 5, 12] {
            let expected = Isometry::new(
                OrthoMatrix::rotation(n as f64 * alpha),
                IntMatrix::identity(1),
                RatVec::from_ints(&[n]),
            )
            .unwrap();
            assert!(h.pow(n).approx_equal(&expected, 1e-12), "n = {n}");
        }
    }

    #[test]
    fn tolerance_equality() {
        let a = Isometry::new(OrthoMatrix::rotation(0.7), IntMatrix::identity(0), RatVec::zeros(0))
            .unwrap();
        let b = Isometry::new(
            OrthoMatrix::rotation(0.7 + 2e-12),
            IntMatrix::identity(0),
            RatVec::zeros(0),
        )
        .unwrap();
        assert!(a.approx_equal(&a, 0.0));
        assert!(a.approx_equal(&b, 1e-9));
        assert!(!a.approx_equal(&b, 1e-13));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Isometry::identity(1, 2);
        let b = Isometry::identity(2, 2);
        assert!(matches!(a.compose(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn non_orthogonal_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(OrthoMatrix::new(m, DEFAULT_TOL).is_err());
    }
}
