//! Curvature of a left-invariant metric on an arbitrary Lie algebra: the
//! symmetric U-operator, the Levi-Civita connection (with an independent
//! Koszul-formula route), the curvature tensor, sectional/Ricci/scalar
//! curvature, and the classification flags (flat, constant curvature,
//! Einstein, algebraic Ricci soliton).

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::forms::{MetricTensor, SignatureMatrix};
use crate::lie::{basis_vector, derivation_space, LieAlgebra};
use crate::reduce::synthesize_metric;
use crate::{Error, Result};

/// Connection coefficients: table[i][j] is the coefficient vector of
/// nabla_{e_i} e_j in the working basis.
#[derive(Debug, Clone)]
pub struct ConnectionTable {
    pub dim: usize,
    table: Vec<DVector<f64>>,
}

impl ConnectionTable {
    pub fn entry(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.table[i * self.dim + j]
    }

    /// nabla_{e_i} applied to a constant-coefficient field.
    pub fn derive(&self, i: usize, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for j in 0..self.dim {
            if v[j] != 0.0 {
                out += v[j] * self.entry(i, j);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.table.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    pub fn max_difference(&self, other: &ConnectionTable) -> f64 {
        self.table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max)
    }

    /// Residuals of the torsion-free and metric-compatibility identities.
    pub fn torsion_residual(&self, l: &LieAlgebra) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let t = self.entry(i, j) - self.entry(j, i) - l.basis_bracket(i, j);
                worst = worst.max(t.amax());
            }
        }
        worst
    }

    pub fn compatibility_residual(&self, g: &DMatrix<f64>) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = (self.entry(i, j).transpose() * g * basis_vector(n, k))[(0, 0)];
                    let b = (basis_vector(n, j).transpose() * g * self.entry(i, k))[(0, 0)];
                    worst = worst.max((a + b).abs());
                }
            }
        }
        worst
    }
}

/// The symmetric operator defined by 2<U(x,y),z> = <[z,x],y> + <x,[z,y]>.
pub fn u_operator(
    l: &LieAlgebra,
    g: &DMatrix<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<DVector<f64>> {
    let n = l.dim();
    let g_inv = g.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    let mut rhs = DVector::zeros(n);
    for k in 0..n {
        let ek = basis_vector(n, k);
        let zk_x = l.bracket(&ek, x)?;
        let zk_y = l.bracket(&ek, y)?;
        rhs[k] = (zk_x.transpose() * g * y)[(0, 0)] + (x.transpose() * g * zk_y)[(0, 0)];
    }
    Ok(g_inv * rhs / 2.0)
}

/// Levi-Civita connection via nabla_x y = (1/2)[x,y] + U(x,y).
pub fn levi_civita(l: &LieAlgebra, g: &DMatrix<f64>) -> Result<ConnectionTable> {
    let n = l.dim();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let ei = basis_vector(n, i);
            let ej = basis_vector(n, j);
            let v = 0.5 * l.basis_bracket(i, j) + u_operator(l, g, &ei, &ej)?;
            table.push(v);
        }
    }
    Ok(ConnectionTable { dim: n, table })
}

/// Independent route: for left-invariant fields the Koszul formula reduces
/// to 2<nabla_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>.
pub fn levi_civita_koszul(l: &LieAlgebra, g: &DMatrix<f64>) -> Result<ConnectionTable> {
    let n = l.dim();
    let g_inv = g.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let ei = basis_vector(n, i);
            let ej = basis_vector(n, j);
            let mut rhs = DVector::zeros(n);
            for k in 0..n {
                let ek = basis_vector(n, k);
                let term1 = (l.basis_bracket(i, j).transpose() * g * &ek)[(0, 0)];
                let term2 = (l.bracket(&ej, &ek)?.transpose() * g * &ei)[(0, 0)];
                let term3 = (l.bracket(&ek, &ei)?.transpose() * g * &ej)[(0, 0)];
                rhs[k] = term1 - term2 + term3;
            }
            table.push(&g_inv * rhs / 2.0);
        }
    }
    Ok(ConnectionTable { dim: n, table })
}

/// Components R(e_i,e_j)e_k of the curvature tensor, with the convention
/// R(x,y) = [nabla_x, nabla_y] - nabla_{[x,y]}.
#[derive(Debug, Clone)]
pub struct CurvatureTensor {
    pub dim: usize,
    components: Vec<DVector<f64>>,
}

impl CurvatureTensor {
    pub fn component(&self, i: usize, j: usize, k: usize) -> &DVector<f64> {
        &self.components[(i * self.dim + j) * self.dim + k]
    }

    /// Trilinear extension R(x,y)z.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let cij = x[i] * y[j];
                if cij == 0.0 {
                    continue;
                }
                for k in 0..n {
                    if z[k] != 0.0 {
                        out += cij * z[k] * self.component(i, j, k);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    /// Max residual of the first Bianchi identity over basis triples.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = self.component(i, j, k)
                        + self.component(j, k, i)
                        + self.component(k, i, j);
                    worst = worst.max(s.amax());
                }
            }
        }
        worst
    }

    /// Max residual of the pair symmetry <R(x,y)z,w> = <R(z,w)x,y>.
    pub fn pair_symmetry_residual(&self, g: &DMatrix<f64>) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let a = (self.component(i, j, k).transpose() * g * basis_vector(n, m))
                            [(0, 0)];
                        let b = (self.component(k, m, i).transpose() * g * basis_vector(n, j))
                            [(0, 0)];
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
        worst
    }
}

pub fn curvature_tensor(conn: &ConnectionTable, l: &LieAlgebra) -> CurvatureTensor {
    let n = conn.dim;
    let mut components = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let bij = l.basis_bracket(i, j);
            for k in 0..n {
                let a = conn.derive(i, conn.entry(j, k));
                let b = conn.derive(j, conn.entry(i, k));
                let mut c = DVector::zeros(n);
                for m in 0..n {
                    if bij[m] != 0.0 {
                        c += bij[m] * conn.entry(m, k);
                    }
                }
                components.push(a - b - c);
            }
        }
    }
    CurvatureTensor { dim: n, components }
}

/// The rank-<=2 map (x wedge y) z = <y,z> x - <x,z> y, as a matrix.
pub fn wedge(g: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<f64> {
    x * (g * y).transpose() - y * (g * x).transpose()
}

/// Sectional curvature of the plane spanned by x, y:
/// K = <R(x,y)y,x> / (<x,x><y,y> - <x,y>^2).
pub fn sectional(
    g: &DMatrix<f64>,
    r: &CurvatureTensor,
    x: &DVector<f64>,
    y: &DVector<f64>,
    tol: f64,
) -> Result<f64> {
    let xx = (x.transpose() * g * x)[(0, 0)];
    let yy = (y.transpose() * g * y)[(0, 0)];
    let xy = (x.transpose() * g * y)[(0, 0)];
    let den = xx * yy - xy * xy;
    let scale = x.norm_squared() * y.norm_squared() * g.amax() * g.amax();
    if den.abs() <= tol * scale.max(1.0) {
        return Err(Error::DegeneratePlane);
    }
    let num = (r.apply(x, y, y).transpose() * g * x)[(0, 0)];
    Ok(num / den)
}

/// Ric(x,y) = trace of z -> R(z,x)y (basis independent).
pub fn ricci(r: &CurvatureTensor) -> DMatrix<f64> {
    let n = r.dim;
    DMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| r.component(k, i, j)[k]).sum::<f64>()
    })
}

/// Scalar curvature: trace of the Ricci operator g^{-1} Ric.
pub fn scalar_curvature(g: &DMatrix<f64>, ric: &DMatrix<f64>) -> Result<f64> {
    let g_inv = g.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    Ok((g_inv * ric).trace())
}

#[derive(Debug, Clone, Serialize)]
pub struct SolitonWitness {
    pub c: f64,
    /// Coordinates of the derivation part in the orthonormal derivation basis.
    pub derivation_coords: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureFlags {
    pub flat: bool,
    pub constant_k: Option<f64>,
    pub einstein: Option<f64>,
    pub einstein_residual: f64,
    pub algebraic_soliton: Option<SolitonWitness>,
    pub soliton_residual: f64,
}

#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub connection: ConnectionTable,
    pub riemann: CurvatureTensor,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
    pub flags: CurvatureFlags,
    /// Spread diagnostics from the plane-sampling constant-K test.
    pub sampled_k: Option<(f64, f64, f64)>, // (min, mean, max)
}

#[derive(Debug, Clone, Copy)]
pub struct CurvatureOptions {
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        Self {
            tol: crate::DEFAULT_TOL,
            seed: 0,
            samples: 200,
        }
    }
}

/// Full curvature report with classification flags.
///
/// Constant curvature is detected two ways that must agree: sampling of
/// random nondegenerate planes (spread <= 1e-6 (1+|mean|)) and the
/// entrywise identity R(x,y) = K x wedge y.
pub fn classify_curvature(
    l: &LieAlgebra,
    metric: &MetricTensor,
    opts: &CurvatureOptions,
) -> Result<CurvatureReport> {
    let n = l.dim();
    let g = metric.entries();
    metric.signature(opts.tol)?; // nondegeneracy gate

    let connection = levi_civita(l, g)?;
    let riemann = curvature_tensor(&connection, l);
    let ric = ricci(&riemann);
    let scalar = scalar_curvature(g, &ric)?;

    let flat = riemann.max_abs() <= 1e-9;

    // constant-K by plane sampling
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut kmin = f64::INFINITY;
    let mut kmax = f64::NEG_INFINITY;
    let mut ksum = 0.0;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < opts.samples && attempts < 50 * opts.samples.max(1) {
        attempts += 1;
        let x = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        match sectional(g, &riemann, &x, &y, 1e-6) {
            Ok(k) => {
                kmin = kmin.min(k);
                kmax = kmax.max(k);
                ksum += k;
                accepted += 1;
            }
            Err(Error::DegeneratePlane) => continue,
            Err(e) => return Err(e),
        }
    }
    let sampled_k = (accepted > 0).then(|| (kmin, ksum / accepted as f64, kmax));

    let constant_k = sampled_k.and_then(|(lo, mean, hi)| {
        if hi - lo > 1e-6 * (1.0 + mean.abs()) {
            return None;
        }
        // entrywise cross-check: R - K wedge = 0
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let w = wedge(g, &basis_vector(n, i), &basis_vector(n, j));
                for k in 0..n {
                    let res = mean * w.column(k) - riemann.component(i, j, k);
                    worst = worst.max(res.amax());
                }
            }
        }
        let scale = (1.0 + mean.abs()) * (1.0 + g.amax() * g.amax());
        (worst <= 1e-6 * scale).then_some(mean)
    });
    let constant_k = if flat { Some(0.0) } else { constant_k };

    // Einstein: Ric = (scalar/n) G
    let einstein_constant = scalar / n as f64;
    let einstein_residual = (&ric - einstein_constant * g).amax();
    let einstein = (einstein_residual <= 1e-8).then_some(einstein_constant);

    // algebraic Ricci soliton: Ric_op = c Id + D over the derivation space
    let g_inv = g.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    let ric_op = &g_inv * &ric;
    let der_basis = derivation_space(l);
    let ncols = 1 + der_basis.len();
    let mut system = DMatrix::<f64>::zeros(n * n, ncols);
    for r_idx in 0..n {
        for c_idx in 0..n {
            let row = c_idx * n + r_idx;
            system[(row, 0)] = if r_idx == c_idx { 1.0 } else { 0.0 };
            for (m, d) in der_basis.iter().enumerate() {
                system[(row, m + 1)] = d[(r_idx, c_idx)];
            }
        }
    }
    let rhs = DVector::from_fn(n * n, |row, _| ric_op[(row % n, row / n)]);
    let svd = system.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Inconsistency(e.to_string()))?;
    let fitted = &system * &sol;
    let soliton_residual = (fitted - &rhs).amax();
    let algebraic_soliton = (soliton_residual <= 1e-6).then(|| SolitonWitness {
        c: sol[0],
        derivation_coords: sol.iter().skip(1).copied().collect(),
        residual: soliton_residual,
    });

    Ok(CurvatureReport {
        connection,
        riemann,
        ricci: ric,
        scalar,
        flags: CurvatureFlags {
            flat,
            constant_k,
            einstein,
            einstein_residual,
            algebraic_soliton,
            soliton_residual,
        },
        sampled_k,
    })
}

/// Construct (lambda, k) and the metric on the real hyperbolic family whose
/// constant sectional curvature equals `target`: lambda is chosen by the
/// sign of the target (0 for negative, 1 for zero, 2 for positive) and the
/// scaling k makes k * K_0 = target, K_0 = -(lambda^2 eps_n + eps_1).
pub fn realize_curvature(
    target: f64,
    p: usize,
    q: usize,
) -> Result<(u8, f64, LieAlgebra, MetricTensor)> {
    if p < 1 || q < 1 {
        return Err(Error::UnsupportedSignature(p, q));
    }
    let l = crate::lie::rhn(p + q)?;
    let sig = SignatureMatrix::new(p, q);
    let (lambda, k) = if target == 0.0 {
        (1u8, 1.0)
    } else {
        let lambda = if target < 0.0 { 0u8 } else { 2u8 };
        let k0 = f64::from(lambda).powi(2) - 1.0; // -(lambda^2 eps_n + eps_1) with eps_1 = 1, eps_n = -1
        (lambda, target / k0)
    };
    // the frame is pseudo-orthonormal for k<,>, so <,> itself has Gram
    // (1/k) I_{p,q} in the frame basis: scale the representative metric
    let base = synthesize_metric(&l, sig, lambda)?;
    let a = MetricTensor::new(base.entries() / k)?;
    Ok((lambda, k, l, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::SignatureMatrix;
    use crate::frames::canonical_bracket;
    use crate::lie::{heisenberg3, rhn, Family, LieAlgebra};

    /// The frame-basis algebra of the real hyperbolic family for a given
    /// lambda: relations (i)-(iii) taken literally.
    fn rhn_frame_algebra(n: usize, lambda: u8) -> LieAlgebra {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let c = canonical_bracket(Family::RealHyperbolic, lambda, n, i, j);
                for k in 0..n {
                    if c[k] != 0.0 {
                        entries.push((i, j, k, c[k]));
                    }
                }
            }
        }
        LieAlgebra::from_structure_constants(n, &entries).unwrap()
    }

    fn h3_frame_algebra(lambda: u8) -> LieAlgebra {
        let mut entries = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let c = canonical_bracket(Family::Heisenberg3, lambda, 3, i, j);
                for k in 0..3 {
                    if c[k] != 0.0 {
                        entries.push((i, j, k, c[k]));
                    }
                }
            }
        }
        LieAlgebra::from_structure_constants(3, &entries).unwrap()
    }

    #[test]
    fn u_operator_on_rhn_frame() {
        // the closed forms: U(x1,x1) = lambda eps1 epsn xn,
        // U(x1,xi) = -(1/2) xi for middle i
        for (p, q) in [(2usize, 2usize), (3, 1), (1, 3)] {
            let n = p + q;
            let sig = SignatureMatrix::new(p, q);
            let g = sig.matrix();
            for lambda in 0..=2u8 {
                let l = rhn_frame_algebra(n, lambda);
                assert!(l.jacobi_check());
                let e1 = basis_vector(n, 0);
                let u11 = u_operator(&l, &g, &e1, &e1).unwrap();
                let mut expected = DVector::zeros(n);
                expected[n - 1] = f64::from(lambda) * sig.epsilon(0) * sig.epsilon(n - 1);
                assert!((u11 - expected).amax() < 1e-12);

                for i in 1..(n - 1) {
                    let ei = basis_vector(n, i);
                    let u1i = u_operator(&l, &g, &e1, &ei).unwrap();
                    assert!((u1i + 0.5 * &ei).amax() < 1e-12);
                }

                // symmetry U(x,y) = U(y,x) on a random-ish pair
                let x = DVector::from_fn(n, |i, _| (i as f64 + 1.0) * 0.3);
                let y = DVector::from_fn(n, |i, _| 1.0 - 0.2 * i as f64);
                let uxy = u_operator(&l, &g, &x, &y).unwrap();
                let uyx = u_operator(&l, &g, &y, &x).unwrap();
                assert!((uxy - uyx).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn u_operator_vanishes_on_abelian() {
        let l = LieAlgebra::abelian(4);
        let g = DMatrix::<f64>::identity(4, 4);
        let x = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        let u = u_operator(&l, &g, &x, &x).unwrap();
        assert_eq!(u.amax(), 0.0);
    }

    #[test]
    fn connection_on_rhn_frame_matches_closed_form() {
        let (p, q) = (2usize, 2usize);
        let n = p + q;
        let sig = SignatureMatrix::new(p, q);
        let g = sig.matrix();
        for lambda in 0..=2u8 {
            let l = rhn_frame_algebra(n, lambda);
            let conn = levi_civita(&l, &g).unwrap();
            let lam = f64::from(lambda);
            let e1n = sig.epsilon(0) * sig.epsilon(n - 1);
            for i in 1..(n - 1) {
                // nabla_{xi} x1 = -xi
                let mut expected = DVector::zeros(n);
                expected[i] = -1.0;
                assert!((conn.entry(i, 0) - &expected).amax() < 1e-12);
                // nabla_{x1} xi = 0
                assert!(conn.entry(0, i).amax() < 1e-12);
            }
            // nabla_{xn} xn = eps1 epsn x1
            let mut expected = DVector::zeros(n);
            expected[0] = e1n;
            assert!((conn.entry(n - 1, n - 1) - &expected).amax() < 1e-12);
            // nabla_{x1} x1 = lambda eps1 epsn xn
            let mut expected = DVector::zeros(n);
            expected[n - 1] = lam * e1n;
            assert!((conn.entry(0, 0) - &expected).amax() < 1e-12);
        }
    }

    #[test]
    fn koszul_route_agrees() {
        let sig = SignatureMatrix::new(2, 1);
        let g = sig.matrix();
        for l in [heisenberg3(), rhn(3).unwrap(), h3_frame_algebra(2)] {
            let a = levi_civita(&l, &g).unwrap();
            let b = levi_civita_koszul(&l, &g).unwrap();
            assert!(a.max_difference(&b) < 1e-12);
            assert!(a.torsion_residual(&l) < 1e-12);
            assert!(a.compatibility_residual(&g) < 1e-12);
        }
    }

    #[test]
    fn abelian_connection_and_curvature_vanish() {
        let l = LieAlgebra::abelian(3);
        let g = DMatrix::<f64>::identity(3, 3);
        let conn = levi_civita(&l, &g).unwrap();
        assert_eq!(conn.max_abs(), 0.0);
        let r = curvature_tensor(&conn, &l);
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn curvature_closed_form_on_rhn_frame() {
        for (p, q) in [(1usize, 1usize), (2, 2), (3, 1)] {
            let n = p + q;
            let sig = SignatureMatrix::new(p, q);
            let g = sig.matrix();
            for lambda in 0..=2u8 {
                let l = rhn_frame_algebra(n, lambda);
                let conn = levi_civita(&l, &g).unwrap();
                let r = curvature_tensor(&conn, &l);
                let factor =
                    f64::from(lambda).powi(2) * sig.epsilon(n - 1) + sig.epsilon(0);
                // R(x,y) = -(lambda^2 eps_n + eps_1) x wedge y, entrywise
                for i in 0..n {
                    for j in 0..n {
                        let w = wedge(&g, &basis_vector(n, i), &basis_vector(n, j));
                        for k in 0..n {
                            let expected = -factor * DVector::from(w.column(k).into_owned());
                            assert!(
                                (r.component(i, j, k) - expected).amax() < 1e-12,
                                "(p,q)=({p},{q}) lambda={lambda} at ({i},{j},{k})"
                            );
                        }
                    }
                }
                // curvature tensor symmetries
                assert!(r.bianchi_residual() < 1e-12);
                assert!(r.pair_symmetry_residual(&g) < 1e-12);
                // specific display: R(x1,xi)x1 = (lambda^2 eps_n + eps_1) eps_1 xi
                if n >= 3 {
                    let comp = r.component(0, 1, 0);
                    let mut expected = DVector::zeros(n);
                    expected[1] = factor * sig.epsilon(0);
                    assert!((comp - expected).amax() < 1e-12);
                    // R(x1,xi)xn = 0 for middle i
                    assert!(r.component(0, 1, n - 1).amax() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn wedge_basics() {
        let g = SignatureMatrix::new(1, 1).matrix();
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        assert_eq!(wedge(&g, &e1, &e1).amax(), 0.0);
        // (e1 wedge e2) e2 = <e2,e2> e1 = -e1
        let w = wedge(&g, &e1, &e2);
        assert!((&w * &e2 + &e1).amax() < 1e-15);
    }

    #[test]
    fn sectional_constant_on_rhn_frames() {
        let sig = SignatureMatrix::new(2, 2);
        let g = sig.matrix();
        for (lambda, expected) in [(0u8, -1.0), (1, 0.0), (2, 3.0)] {
            let l = rhn_frame_algebra(4, lambda);
            let conn = levi_civita(&l, &g).unwrap();
            let r = curvature_tensor(&conn, &l);
            let x = DVector::from_vec(vec![1.0, 0.5, 0.0, 0.2]);
            let y = DVector::from_vec(vec![0.0, 1.0, -0.3, 0.1]);
            let k = sectional(&g, &r, &x, &y, 1e-9).unwrap();
            assert!((k - expected).abs() < 1e-10, "lambda={lambda}: K={k}");
        }
    }

    #[test]
    fn sectional_riemannian_case_is_minus_one() {
        // q = 0 canonical metric on the real hyperbolic family
        let l = rhn(4).unwrap();
        let g = DMatrix::<f64>::identity(4, 4);
        let conn = levi_civita(&l, &g).unwrap();
        let r = curvature_tensor(&conn, &l);
        let x = DVector::from_vec(vec![1.0, 0.2, 0.3, 0.0]);
        let y = DVector::from_vec(vec![0.1, 1.0, 0.0, -0.5]);
        let k = sectional(&g, &r, &x, &y, 1e-9).unwrap();
        assert!((k + 1.0).abs() < 1e-10);
    }

    #[test]
    fn sectional_rejects_degenerate_plane() {
        let g = SignatureMatrix::new(1, 1).matrix();
        let l = LieAlgebra::abelian(2);
        let conn = levi_civita(&l, &g).unwrap();
        let r = curvature_tensor(&conn, &l);
        // linearly dependent pair spans no plane at all
        let x = DVector::from_vec(vec![1.0, 1.0]);
        let y = DVector::from_vec(vec![2.0, 2.0]);
        assert!(matches!(
            sectional(&g, &r, &x, &y, 1e-9),
            Err(Error::DegeneratePlane)
        ));
    }

    #[test]
    fn ricci_of_constant_curvature_metric() {
        let sig = SignatureMatrix::new(2, 2);
        let g = sig.matrix();
        for (lambda, k) in [(0u8, -1.0), (1, 0.0), (2, 3.0)] {
            let l = rhn_frame_algebra(4, lambda);
            let conn = levi_civita(&l, &g).unwrap();
            let r = curvature_tensor(&conn, &l);
            let ric = ricci(&r);
            // constant curvature forces Ric = (n-1) K g
            let expected = 3.0 * k * &g;
            assert!((ric - expected).amax() < 1e-12, "lambda={lambda}");
        }
    }

    #[test]
    fn classify_h3_trichotomy() {
        let l = heisenberg3();
        let sig = SignatureMatrix::new(2, 1);
        let opts = CurvatureOptions::default();

        // lambda = 1 is flat (hence trivially a soliton)
        let a = synthesize_metric(&l, sig, 1).unwrap();
        let rep = classify_curvature(&l, &a, &opts).unwrap();
        assert!(rep.flags.flat);
        assert_eq!(rep.flags.constant_k, Some(0.0));
        assert!(rep.flags.algebraic_soliton.is_some());

        // lambda = 0 and 2: not Einstein, but algebraic Ricci soliton
        for lambda in [0u8, 2] {
            let a = synthesize_metric(&l, sig, lambda).unwrap();
            let rep = classify_curvature(&l, &a, &opts).unwrap();
            assert!(!rep.flags.flat, "lambda={lambda}");
            assert!(rep.flags.einstein.is_none(), "lambda={lambda}");
            assert!(
                rep.flags.einstein_residual > 0.1,
                "lambda={lambda}: {}",
                rep.flags.einstein_residual
            );
            assert!(
                rep.flags.algebraic_soliton.is_some(),
                "lambda={lambda}: residual {}",
                rep.flags.soliton_residual
            );
        }
    }

    #[test]
    fn classify_rhn_constant_curvature() {
        let l = rhn(4).unwrap();
        let sig = SignatureMatrix::new(2, 2);
        let a = MetricTensor::canonical(sig);
        let rep = classify_curvature(&l, &a, &CurvatureOptions::default()).unwrap();
        assert!(!rep.flags.flat);
        let k = rep.flags.constant_k.expect("constant curvature");
        assert!((k + 1.0).abs() < 1e-9);
        // Einstein with constant (n-1)K... scalar/n normalization
        assert!(rep.flags.einstein.is_some());
    }

    #[test]
    fn classify_abelian_is_flat() {
        let l = LieAlgebra::abelian(3);
        let a = MetricTensor::canonical(SignatureMatrix::new(3, 0));
        let rep = classify_curvature(&l, &a, &CurvatureOptions::default()).unwrap();
        assert!(rep.flags.flat);
        assert_eq!(rep.flags.constant_k, Some(0.0));
        assert_eq!(rep.flags.einstein, Some(0.0));
    }

    #[test]
    fn realize_targets() {
        for target in [-7.0, -1.0, 0.0, 0.5, 3.0, 100.0] {
            let (lambda, _k, l, a) = realize_curvature(target, 2, 2).unwrap();
            if target < 0.0 {
                assert_eq!(lambda, 0);
            } else if target == 0.0 {
                assert_eq!(lambda, 1);
            } else {
                assert_eq!(lambda, 2);
            }
            let rep = classify_curvature(&l, &a, &CurvatureOptions::default()).unwrap();
            let k = rep.flags.constant_k.expect("constant curvature");
            assert!(
                (k - target).abs() <= 1e-8 * (1.0 + target.abs()),
                "target {target}: measured {k}"
            );
        }
    }

    #[test]
    fn scaling_law() {
        let l = rhn(3).unwrap();
        let sig = SignatureMatrix::new(2, 1);
        let a = MetricTensor::canonical(sig);
        let scaled = MetricTensor::new(4.0 * a.entries()).unwrap();

        let conn_a = levi_civita(&l, a.entries()).unwrap();
        let r_a = curvature_tensor(&conn_a, &l);
        let conn_s = levi_civita(&l, scaled.entries()).unwrap();
        let r_s = curvature_tensor(&conn_s, &l);

        let x = DVector::from_vec(vec![1.0, 0.3, 0.1]);
        let y = DVector::from_vec(vec![-0.2, 1.0, 0.4]);
        let ka = sectional(a.entries(), &r_a, &x, &y, 1e-9).unwrap();
        let ks = sectional(scaled.entries(), &r_s, &x, &y, 1e-9).unwrap();
        assert!((ks - ka / 4.0).abs() < 1e-12);
    }
}
