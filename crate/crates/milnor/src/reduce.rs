//! Reduction of invertible matrices to canonical representatives under the
//! double-coset actions Q1 x O(p,q) and its transpose, and of metrics to
//! their orbit label lambda in {0,1,2}.

use nalgebra::{DMatrix, RowDVector};

use crate::forms::{pseudo_orthonormalize, signature, MetricTensor, SignatureMatrix};
use crate::lie::{Family, LieAlgebra};
use crate::{Error, Result};

/// Normalization of a nonzero row pair under the right action of O(1,1):
/// (x,y) g = (a, lambda a) with a > 0 and lambda in {0,1,2}.
#[derive(Debug, Clone)]
pub struct O11Normalization {
    pub a: f64,
    pub lambda: u8,
    pub g: DMatrix<f64>,
    /// Set when x^2 - y^2 fell inside the relative tolerance band and the
    /// pair was classified as the lambda = 1 boundary case.
    pub boundary: bool,
}

/// Normalize (x,y) under O(1,1).
///
/// The three cases by the sign of x^2 - y^2:
/// - x^2 > y^2: a = sqrt(x^2 - y^2), g = (1/a) [[x,-y],[-y,x]], lambda = 0
/// - x^2 = y^2: g a sign-flip diagonal mapping to (|x|,|y|), a = |x|, lambda = 1
/// - x^2 < y^2: a = sqrt((y^2-x^2)/3), g = (1/(3a)) [[2y-x,y-2x],[y-2x,2y-x]],
///   lambda = 2
///
/// The boundary band is relative: |x^2 - y^2| <= tol (x^2 + y^2).
pub fn o11_normalize(x: f64, y: f64, tol: f64) -> Result<O11Normalization> {
    let s = x * x + y * y;
    if s == 0.0 {
        return Err(Error::ZeroPair);
    }
    let d = x * x - y * y;
    if d.abs() <= tol * s {
        // lambda = 1: |x| = |y| up to tolerance
        let g = DMatrix::from_row_slice(2, 2, &[x.signum(), 0.0, 0.0, y.signum()]);
        return Ok(O11Normalization {
            a: x.abs(),
            lambda: 1,
            g,
            boundary: d != 0.0,
        });
    }
    if d > 0.0 {
        let a = d.sqrt();
        let g = DMatrix::from_row_slice(2, 2, &[x / a, -y / a, -y / a, x / a]);
        Ok(O11Normalization {
            a,
            lambda: 0,
            g,
            boundary: false,
        })
    } else {
        let a = (-d / 3.0).sqrt();
        let g = DMatrix::from_row_slice(
            2,
            2,
            &[
                (2.0 * y - x) / (3.0 * a),
                (y - 2.0 * x) / (3.0 * a),
                (y - 2.0 * x) / (3.0 * a),
                (2.0 * y - x) / (3.0 * a),
            ],
        );
        Ok(O11Normalization {
            a,
            lambda: 2,
            g,
            boundary: false,
        })
    }
}

/// Constructive witness that a matrix (or a metric) lies in the orbit of
/// the canonical representative with label `lambda`:
/// left_factor * input * right_factor = g0.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub lambda: u8,
    pub g0: DMatrix<f64>,
    pub left_factor: DMatrix<f64>,
    pub right_factor: DMatrix<f64>,
    pub signature: SignatureMatrix,
    pub boundary: bool,
}

impl ReductionResult {
    /// Max residual of the factorization against the given input matrix.
    pub fn factorization_residual(&self, input: &DMatrix<f64>) -> f64 {
        (&self.left_factor * input * &self.right_factor - &self.g0).amax()
    }
}

/// Orthogonal matrix h with v h = (|v|, 0, ..., 0).
fn compress_to_first(v: &RowDVector<f64>) -> DMatrix<f64> {
    compress(v, 0)
}

/// Orthogonal matrix h with v h = (0, ..., 0, |v|).
fn compress_to_last(v: &RowDVector<f64>) -> DMatrix<f64> {
    compress(v, v.len() - 1)
}

fn compress(v: &RowDVector<f64>, target: usize) -> DMatrix<f64> {
    let m = v.len();
    let norm = v.norm();
    let mut h = DMatrix::<f64>::identity(m, m);
    if norm == 0.0 || m == 1 {
        if m == 1 && v[0] < 0.0 {
            h[(0, 0)] = -1.0;
        }
        return h;
    }
    // Householder reflector with the stable sign choice, then a column flip
    // to land on +|v|.
    let alpha = if v[target] >= 0.0 { -norm } else { norm };
    let mut u = v.transpose();
    u[target] -= alpha;
    let uu = u.norm_squared();
    if uu > 0.0 {
        h -= (2.0 / uu) * &u * u.transpose();
    }
    if alpha < 0.0 {
        for i in 0..m {
            h[(i, target)] = -h[(i, target)];
        }
    }
    h
}

/// Reduce an invertible matrix to I + lambda E_{1,n} under Q1 x O(p,q),
/// following the constructive double-coset argument step by step:
/// compress the first row's positive and negative parts with O(p) x O(q)
/// reflectors, normalize the surviving pair with O(1,1) embedded in the
/// (1, p+q) plane, then clear the first column and absorb the lower block
/// by Q1 elements on the left.
pub fn q1_reduce(g: &DMatrix<f64>, p: usize, q: usize, tol: f64) -> Result<ReductionResult> {
    let n = p + q;
    if p < 1 || q < 1 {
        return Err(Error::UnsupportedSignature(p, q));
    }
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.nrows(),
        });
    }
    if g.determinant().abs() <= tol {
        return Err(Error::SingularMatrix);
    }

    // step 1: first-row compression by block diag(h1, h2) in O(p) x O(q)
    let row_pos = RowDVector::from_iterator(p, (0..p).map(|j| g[(0, j)]));
    let row_neg = RowDVector::from_iterator(q, (p..n).map(|j| g[(0, j)]));
    let h1 = compress_to_first(&row_pos);
    let h2 = compress_to_last(&row_neg);
    let mut k1 = DMatrix::<f64>::zeros(n, n);
    k1.view_mut((0, 0), (p, p)).copy_from(&h1);
    k1.view_mut((p, p), (q, q)).copy_from(&h2);
    let g1 = g * &k1;

    // step 2: O(1,1) in the (1, p+q) coordinate plane
    let x = g1[(0, 0)];
    let y = g1[(0, n - 1)];
    let o11 = o11_normalize(x, y, tol)?;
    let mut embed = DMatrix::<f64>::identity(n, n);
    embed[(0, 0)] = o11.g[(0, 0)];
    embed[(0, n - 1)] = o11.g[(0, 1)];
    embed[(n - 1, 0)] = o11.g[(1, 0)];
    embed[(n - 1, n - 1)] = o11.g[(1, 1)];
    let g2 = &g1 * &embed;

    // step 3: clear the first column and normalize a to 1 from the left
    let a = o11.a;
    let mut l1 = DMatrix::<f64>::zeros(n, n);
    l1[(0, 0)] = 1.0 / a;
    for i in 1..n {
        l1[(i, 0)] = -g2[(i, 0)];
        l1[(i, i)] = a;
    }
    let g3 = &l1 * &g2;

    // step 4: absorb the lower-right block
    let alpha = g3.view((1, 1), (n - 1, n - 1)).into_owned();
    let alpha_inv = alpha.try_inverse().ok_or(Error::SingularMatrix)?;
    let mut l2 = DMatrix::<f64>::identity(n, n);
    l2.view_mut((1, 1), (n - 1, n - 1)).copy_from(&alpha_inv);

    let left = &l2 * &l1;
    let right = &k1 * &embed;

    let mut g0 = DMatrix::<f64>::identity(n, n);
    g0[(0, n - 1)] = f64::from(o11.lambda);

    Ok(ReductionResult {
        lambda: o11.lambda,
        g0,
        left_factor: left,
        right_factor: right,
        signature: SignatureMatrix::new(p, q),
        boundary: o11.boundary,
    })
}

/// Reduce under the transposed group: the representative set becomes
/// { I - lambda E_{n,1} }, obtained from q1_reduce applied to the inverse
/// transpose. If r.left * g^-T * r.right = u then
/// r.left^-T * g * r.right^-T = u^-T = I - lambda E_{n,1}.
pub fn dual_reduce(g: &DMatrix<f64>, p: usize, q: usize, tol: f64) -> Result<ReductionResult> {
    let n = p + q;
    let ginv_t = g
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix)?
        .transpose();
    let r = q1_reduce(&ginv_t, p, q, tol)?;

    let left = r
        .left_factor
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix)?
        .transpose();
    let right = r
        .right_factor
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix)?
        .transpose();

    let mut g0 = DMatrix::<f64>::identity(n, n);
    g0[(n - 1, 0)] = -f64::from(r.lambda);

    Ok(ReductionResult {
        lambda: r.lambda,
        g0,
        left_factor: left,
        right_factor: right,
        signature: r.signature,
        boundary: r.boundary,
    })
}

/// Classify a metric on one of the builtin families: pick g with
/// g^T A g = I_{p,q} (so the metric is the g-translate of the canonical
/// inner product) and reduce g under the matching group action.
pub fn reduce_metric(l: &LieAlgebra, a: &MetricTensor, tol: f64) -> Result<ReductionResult> {
    if a.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: a.dim(),
        });
    }
    let sig = signature(a, tol)?;
    match l.family {
        Some(Family::RealHyperbolic) => {
            if sig.p < 1 || sig.q < 1 {
                return Err(Error::UnsupportedSignature(sig.p, sig.q));
            }
            let g = pseudo_orthonormalize(a, tol)?;
            q1_reduce(&g, sig.p, sig.q, tol)
        }
        Some(Family::Heisenberg3) => {
            if (sig.p, sig.q) != (2, 1) {
                return Err(Error::UnsupportedSignature(sig.p, sig.q));
            }
            let g = pseudo_orthonormalize(a, tol)?;
            dual_reduce(&g, 2, 1, tol)
        }
        None => Err(Error::UnsupportedAlgebra),
    }
}

/// Metric whose reduction recovers the representative with the given label:
/// A = g0^-T I_{p,q} g0^-1 for the family's canonical g0.
pub fn synthesize_metric(l: &LieAlgebra, sig: SignatureMatrix, lambda: u8) -> Result<MetricTensor> {
    if lambda > 2 {
        return Err(Error::InvalidInput("lambda must be 0, 1, or 2".into()));
    }
    let n = l.dim();
    if sig.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: sig.dim(),
        });
    }
    let mut g0 = DMatrix::<f64>::identity(n, n);
    match l.family {
        Some(Family::RealHyperbolic) => {
            if sig.p < 1 || sig.q < 1 {
                return Err(Error::UnsupportedSignature(sig.p, sig.q));
            }
            g0[(0, n - 1)] = f64::from(lambda);
        }
        Some(Family::Heisenberg3) => {
            if (sig.p, sig.q) != (2, 1) {
                return Err(Error::UnsupportedSignature(sig.p, sig.q));
            }
            g0[(n - 1, 0)] = -f64::from(lambda);
        }
        None => return Err(Error::UnsupportedAlgebra),
    }
    let g0_inv = g0.try_inverse().ok_or(Error::SingularMatrix)?;
    let a = g0_inv.transpose() * sig.matrix() * &g0_inv;
    // symmetrize rounding noise so the exact-symmetry constructor accepts it
    let sym = 0.5 * (&a + a.transpose());
    MetricTensor::new(sym)
}
