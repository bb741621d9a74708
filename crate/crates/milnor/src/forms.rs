//! Dense symmetric bilinear forms: eigendecomposition, signature,
//! pseudo-orthonormalization, and membership in the indefinite orthogonal
//! group O(p,q).

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, DEFAULT_TOL};

/// The standard form I_{p,q} = diag(1,...,1,-1,...,-1) with p plus signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureMatrix {
    pub p: usize,
    pub q: usize,
}

impl SignatureMatrix {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// epsilon_i = +1 for i < p, -1 otherwise (0-based index).
    pub fn epsilon(&self, i: usize) -> f64 {
        if i < self.p {
            1.0
        } else {
            -1.0
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                self.epsilon(i)
            } else {
                0.0
            }
        })
    }
}

/// A nondegenerate symmetric bilinear form <x,y> = x^T A y on R^n.
///
/// Symmetry is required exactly at construction; nondegeneracy is checked
/// whenever the signature is computed.
#[derive(Debug, Clone)]
pub struct MetricTensor {
    entries: DMatrix<f64>,
}

impl MetricTensor {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        let n = entries.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[(i, j)] != entries[(j, i)] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn canonical(sig: SignatureMatrix) -> Self {
        Self {
            entries: sig.matrix(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.entries * y)[(0, 0)]
    }

    pub fn signature(&self, tol: f64) -> Result<SignatureMatrix> {
        signature(self, tol)
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order together with the orthogonal
/// matrix of corresponding eigenvectors (as columns), so that
/// A = Q diag(w) Q^T.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "symmetric_eigen requires a square matrix");
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);

    let scale = a.amax().max(1.0);
    let stop = f64::EPSILON * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m[(i, j)].abs());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::EPSILON * scale * 1e-2 {
                    continue;
                }
                // classic Jacobi rotation annihilating m[p][q]
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    // sort descending
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap());
    let w = DVector::from_fn(n, |i, _| m[(idx[i], idx[i])]);
    let q = DMatrix::from_fn(n, n, |i, j| v[(i, idx[j])]);
    (w, q)
}

/// Signature (p,q) of a nondegenerate symmetric form (Sylvester's law of
/// inertia). Eigenvalues within `tol` of zero are a degeneracy error.
pub fn signature(a: &MetricTensor, tol: f64) -> Result<SignatureMatrix> {
    let (w, _) = symmetric_eigen(a.entries());
    let mut p = 0;
    let mut q = 0;
    for &ev in w.iter() {
        if ev > tol {
            p += 1;
        } else if ev < -tol {
            q += 1;
        } else {
            return Err(Error::DegenerateMetric(ev));
        }
    }
    Ok(SignatureMatrix::new(p, q))
}

/// Congruence transformation g with g^T A g = I_{p,q}.
///
/// Built from the eigendecomposition A = Q D Q^T as g = Q |D|^{-1/2} P,
/// where P sorts the positive-eigenvalue directions first. Since
/// eigenvalues come out descending, P is the identity here; the convention
/// is fixed for reproducibility, any other choice differs by O(p,q).
pub fn pseudo_orthonormalize(a: &MetricTensor, tol: f64) -> Result<DMatrix<f64>> {
    let n = a.dim();
    let (w, q) = symmetric_eigen(a.entries());
    for &ev in w.iter() {
        if ev.abs() <= tol {
            return Err(Error::DegenerateMetric(ev));
        }
    }
    let scaling = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0 / w[i].abs().sqrt()
        } else {
            0.0
        }
    });
    Ok(q * scaling)
}

/// Membership test for O(p,q) = { g | g^T I_{p,q} g = I_{p,q} }.
pub fn is_in_o_pq(g: &DMatrix<f64>, sig: SignatureMatrix, tol: f64) -> bool {
    if g.nrows() != sig.dim() || g.ncols() != sig.dim() {
        return false;
    }
    let ipq = sig.matrix();
    let residual = g.transpose() * &ipq * g - &ipq;
    residual.amax() <= tol
}

/// Convenience wrapper with the default tolerance.
pub fn is_in_o_pq_default(g: &DMatrix<f64>, sig: SignatureMatrix) -> bool {
    is_in_o_pq(g, sig, DEFAULT_TOL)
}
