//! Minimal complex linear algebra over 2- and 4-dimensional spaces.
//!
//! Everything in this crate lives in dimension 2 or 4, so the types here are
//! fixed-size stack values rather than general matrices. All values are
//! immutable after construction and freely shareable across threads.

use num_complex::Complex;

use crate::scalar::Scalar;

/// Absolute tolerance for pure-math identities (unitarity, hermiticity).
pub const MATH_TOL: f64 = 1e-12;

/// Complex amplitude pair for a single photon in the (H, V) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVector2<T>(pub [Complex<T>; 2]);

/// Complex amplitude quadruple over |H₁H₂⟩, |H₁V₂⟩, |V₁H₂⟩, |V₁V₂⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVector4<T>(pub [Complex<T>; 4]);

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2<T> {
    rows: [[Complex<T>; 2]; 2],
}

/// Row-major 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4<T> {
    rows: [[Complex<T>; 4]; 4],
}

#[inline]
pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

impl<T: Scalar> ComplexVector2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>) -> Self {
        Self([a, b])
    }

    pub fn dot(&self, other: &Self) -> Complex<T> {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm(&self) -> T {
        self.dot(self).re.sqrt()
    }

    pub fn scaled(&self, k: Complex<T>) -> Self {
        Self([self.0[0] * k, self.0[1] * k])
    }
}

impl<T: Scalar> ComplexVector4<T> {
    pub fn new(c: [Complex<T>; 4]) -> Self {
        Self(c)
    }

    pub fn zero() -> Self {
        Self([czero(); 4])
    }

    /// Hermitian inner product ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn dot(&self, other: &Self) -> Complex<T> {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm() - T::one()).abs() <= tol
    }

    pub fn scaled(&self, k: Complex<T>) -> Self {
        let mut out = self.0;
        for c in &mut out {
            *c = *c * k;
        }
        Self(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.0;
        for (c, o) in out.iter_mut().zip(other.0.iter()) {
            *c = *c - *o;
        }
        Self(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Kronecker product of two single-photon amplitude pairs.
pub fn kron_vec<T: Scalar>(a: &ComplexVector2<T>, b: &ComplexVector2<T>) -> ComplexVector4<T> {
    ComplexVector4([
        a.0[0] * b.0[0],
        a.0[0] * b.0[1],
        a.0[1] * b.0[0],
        a.0[1] * b.0[1],
    ])
}

impl<T: Scalar> ComplexMatrix2<T> {
    pub fn from_rows(rows: [[Complex<T>; 2]; 2]) -> Self {
        Self { rows }
    }

    pub fn identity() -> Self {
        Self {
            rows: [[cone(), czero()], [czero(), cone()]],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.rows[r][c]
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = [[czero(); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                rows[r][c] = self.rows[c][r].conj();
            }
        }
        Self { rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut rows = [[czero(); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = czero();
                for k in 0..2 {
                    acc = acc + self.rows[r][k] * other.rows[k][c];
                }
                rows[r][c] = acc;
            }
        }
        Self { rows }
    }

    pub fn apply(&self, v: &ComplexVector2<T>) -> ComplexVector2<T> {
        ComplexVector2([
            self.rows[0][0] * v.0[0] + self.rows[0][1] * v.0[1],
            self.rows[1][0] * v.0[0] + self.rows[1][1] * v.0[1],
        ])
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                m = m.max((self.rows[r][c] - other.rows[r][c]).norm());
            }
        }
        m
    }

    /// Largest entry of |M†M − I|.
    pub fn unitarity_defect(&self) -> T {
        self.adjoint().mul(self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol
    }
}

impl<T: Scalar> ComplexMatrix4<T> {
    pub fn from_rows(rows: [[Complex<T>; 4]; 4]) -> Self {
        Self { rows }
    }

    pub fn zero() -> Self {
        Self {
            rows: [[czero(); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        let mut rows = [[czero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = cone();
        }
        Self { rows }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.rows[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.rows[r][c] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = [[czero(); 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                rows[r][c] = self.rows[c][r].conj();
            }
        }
        Self { rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut rows = [[czero(); 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = czero();
                for k in 0..4 {
                    acc = acc + self.rows[r][k] * other.rows[k][c];
                }
                rows[r][c] = acc;
            }
        }
        Self { rows }
    }

    pub fn apply(&self, v: &ComplexVector4<T>) -> ComplexVector4<T> {
        let mut out = [czero(); 4];
        for r in 0..4 {
            let mut acc = czero();
            for k in 0..4 {
                acc = acc + self.rows[r][k] * v.0[k];
            }
            out[r] = acc;
        }
        ComplexVector4(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut rows = self.rows;
        for r in 0..4 {
            for c in 0..4 {
                rows[r][c] = rows[r][c] + other.rows[r][c];
            }
        }
        Self { rows }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut rows = self.rows;
        for r in 0..4 {
            for c in 0..4 {
                rows[r][c] = rows[r][c] - other.rows[r][c];
            }
        }
        Self { rows }
    }

    pub fn scaled(&self, k: Complex<T>) -> Self {
        let mut rows = self.rows;
        for row in &mut rows {
            for e in row.iter_mut() {
                *e = *e * k;
            }
        }
        Self { rows }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).fold(czero(), |acc, i| acc + self.rows[i][i])
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                m = m.max((self.rows[r][c] - other.rows[r][c]).norm());
            }
        }
        m
    }

    /// Largest entry of |M − M†|.
    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// Largest entry of |M†M − I|.
    pub fn unitarity_defect(&self) -> T {
        self.adjoint().mul(self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &ComplexVector4<T>, b: &ComplexVector4<T>) -> Self {
        let mut rows = [[czero(); 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                rows[r][c] = a.0[r] * b.0[c].conj();
            }
        }
        Self { rows }
    }
}

/// Kronecker product: block (i, j) of the result equals `a[i][j] * b`.
pub fn kron<T: Scalar>(a: &ComplexMatrix2<T>, b: &ComplexMatrix2<T>) -> ComplexMatrix4<T> {
    let mut rows = [[czero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    rows[2 * i + k][2 * j + l] = a.get(i, j) * b.get(k, l);
                }
            }
        }
    }
    ComplexMatrix4 { rows }
}

/// Eigendecomposition of a 4×4 Hermitian matrix.
///
/// Eigenvalues are ascending; `vectors[k]` is the unit eigenvector for
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: [T; 4],
    pub vectors: [ComplexVector4<T>; 4],
}

/// Cyclic complex Jacobi diagonalization of a Hermitian 4×4 matrix.
///
/// The input is symmetrized once (`(M + M†)/2`) so callers may pass matrices
/// that are Hermitian only up to roundoff.
pub fn eigh4<T: Scalar>(m: &ComplexMatrix4<T>) -> HermitianEigen<T> {
    let half = Complex::new(T::of(0.5), T::zero());
    let mut a = m.add(&m.adjoint()).scaled(half);
    let mut v = ComplexMatrix4::identity();

    let scale = {
        let mut s = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                s = s.max(a.get(r, c).norm());
            }
        }
        s.max(T::one())
    };
    let stop = scale * T::of(1e-15) * T::of(4.0);

    for _sweep in 0..64 {
        let mut off = T::zero();
        for p in 0..4 {
            for q in (p + 1)..4 {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= stop {
                    continue;
                }
                let phi = apq.im.atan2(apq.re);
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // tan(2θ) = 2|a_pq| / (a_pp - a_qq); rotation zeroes (p, q).
                let theta = T::of(0.5) * (mag + mag).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                let eip = Complex::new(phi.cos(), phi.sin());
                let mut j = ComplexMatrix4::identity();
                j.set(p, p, Complex::new(c, T::zero()));
                j.set(q, q, Complex::new(c, T::zero()));
                j.set(p, q, -eip * s);
                j.set(q, p, eip.conj() * s);
                a = j.adjoint().mul(&a).mul(&j);
                v = v.mul(&j);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("finite eigenvalues")
    });

    let mut values = [T::zero(); 4];
    let mut vectors = [ComplexVector4::zero(); 4];
    for (k, &i) in order.iter().enumerate() {
        values[k] = a.get(i, i).re;
        vectors[k] = ComplexVector4([v.get(0, i), v.get(1, i), v.get(2, i), v.get(3, i)]);
    }
    HermitianEigen { values, vectors }
}
