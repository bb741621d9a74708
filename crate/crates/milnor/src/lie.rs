//! Lie algebras given by structure constants: bracket evaluation, axiom
//! checks, the two builtin families, automorphism and parabolic-subgroup
//! membership, and the space of derivations.

use nalgebra::{DMatrix, DVector};

use crate::forms::symmetric_eigen;
use crate::{Error, Result};

/// Which builtin family an algebra came from, when any. The reduction
/// module only has representative sets wired for these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Solvable algebra of real hyperbolic space: [e1, ej] = ej for j >= 2.
    RealHyperbolic,
    /// 3-dimensional Heisenberg algebra: [e2, e3] = e1.
    Heisenberg3,
}

/// A Lie algebra of dimension n with bracket [e_i, e_j] = sum_k c_{ij}^k e_k.
///
/// Only the constants for i < j are stored; antisymmetry is structural.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    /// brackets[pair_index(i,j)] = [e_i, e_j] as a coefficient vector.
    brackets: Vec<DVector<f64>>,
    pub name: Option<String>,
    pub family: Option<Family>,
}

impl LieAlgebra {
    /// Build from a list of (i, j, k, c) with 0-based indices and i < j,
    /// meaning [e_i, e_j] += c e_k.
    pub fn from_structure_constants(
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let npairs = dim * (dim - 1) / 2;
        let mut brackets = vec![DVector::zeros(dim); npairs];
        for &(i, j, k, c) in entries {
            if i >= j || j >= dim || k >= dim {
                return Err(Error::InvalidInput(format!(
                    "structure constant index ({i},{j},{k}) out of range for dim {dim}"
                )));
            }
            brackets[pair_index(dim, i, j)][k] += c;
        }
        Ok(Self {
            dim,
            brackets,
            name: None,
            family: None,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_structure_constants(dim, &[]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// [e_i, e_j] for any pair of basis indices.
    pub fn basis_bracket(&self, i: usize, j: usize) -> DVector<f64> {
        if i == j {
            return DVector::zeros(self.dim);
        }
        if i < j {
            self.brackets[pair_index(self.dim, i, j)].clone()
        } else {
            -&self.brackets[pair_index(self.dim, j, i)]
        }
    }

    /// Bilinear, antisymmetric extension of the structure constants.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len().max(y.len()),
            });
        }
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let coeff = x[i] * y[j] - x[j] * y[i];
                if coeff != 0.0 {
                    out += coeff * &self.brackets[pair_index(self.dim, i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Max Jacobi-identity residual over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let ei = basis_vector(n, i);
                    let ej = basis_vector(n, j);
                    let ek = basis_vector(n, k);
                    let s = self.bracket(&self.basis_bracket(i, j), &ek).unwrap()
                        + self.bracket(&self.basis_bracket(j, k), &ei).unwrap()
                        + self.bracket(&self.basis_bracket(k, i), &ej).unwrap();
                    worst = worst.max(s.amax());
                }
            }
        }
        worst
    }

    pub fn jacobi_check(&self) -> bool {
        self.jacobi_residual() <= 1e-12
    }

    /// Structure constants in the basis given by the columns of `b`.
    pub fn change_basis(&self, b: &DMatrix<f64>) -> Result<LieAlgebra> {
        let n = self.dim;
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.nrows(),
            });
        }
        let b_inv = b.clone().try_inverse().ok_or(Error::SingularMatrix)?;
        let npairs = n * (n - 1) / 2;
        let mut brackets = vec![DVector::zeros(n); npairs];
        for i in 0..n {
            for j in (i + 1)..n {
                let bi = DVector::from(b.column(i).into_owned());
                let bj = DVector::from(b.column(j).into_owned());
                brackets[pair_index(n, i, j)] = &b_inv * self.bracket(&bi, &bj)?;
            }
        }
        Ok(LieAlgebra {
            dim: n,
            brackets,
            name: None,
            family: None,
        })
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn basis_vector(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// The Lie algebra of real hyperbolic n-space: [e1, ej] = ej for j >= 2.
pub fn rhn(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "the real hyperbolic family needs dimension >= 2".into(),
        ));
    }
    let entries: Vec<_> = (1..n).map(|j| (0usize, j, j, 1.0)).collect();
    let mut l = LieAlgebra::from_structure_constants(n, &entries)?;
    l.name = Some(format!("rhn({n})"));
    l.family = Some(Family::RealHyperbolic);
    Ok(l)
}

/// The 3-dimensional Heisenberg algebra: [e2, e3] = e1.
pub fn heisenberg3() -> LieAlgebra {
    let mut l = LieAlgebra::from_structure_constants(3, &[(1, 2, 0, 1.0)]).unwrap();
    l.name = Some("heisenberg3".into());
    l.family = Some(Family::Heisenberg3);
    l
}

/// g is an automorphism iff g[e_i,e_j] = [g e_i, g e_j] for all pairs.
pub fn is_automorphism(l: &LieAlgebra, g: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = l.dim();
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.nrows(),
        });
    }
    if g.determinant().abs() <= tol {
        return Err(Error::SingularMatrix);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let gi = DVector::from(g.column(i).into_owned());
            let gj = DVector::from(g.column(j).into_owned());
            let lhs = g * l.basis_bracket(i, j);
            let rhs = l.bracket(&gi, &gj)?;
            if (lhs - rhs).amax() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Q1: block lower-triangular with blocks (1, n-1), i.e. first row (*,0,...,0).
pub fn is_in_q1(g: &DMatrix<f64>, tol: f64) -> bool {
    (1..g.ncols()).all(|j| g[(0, j)].abs() <= tol)
}

/// Transpose of Q1: first column (*,0,...,0)^T.
pub fn is_in_q1_transpose(g: &DMatrix<f64>, tol: f64) -> bool {
    (1..g.nrows()).all(|i| g[(i, 0)].abs() <= tol)
}

/// Orthonormal basis (Frobenius inner product) of the space of derivations,
/// i.e. matrices D with D[x,y] = [Dx,y] + [x,Dy].
///
/// Computed as the null space of the constraint map on the n^2 entries of D,
/// via the eigendecomposition of the normal equations. The null-space cutoff
/// is 1e-9 relative to the largest singular value.
pub fn derivation_space(l: &LieAlgebra) -> Vec<DMatrix<f64>> {
    let n = l.dim();
    let ncols = n * n; // unknowns: D entries, column-major d_{rc} at index c*n + r
    let npairs = n * (n - 1) / 2;
    let nrows = npairs * n;
    let mut m = DMatrix::<f64>::zeros(nrows, ncols);

    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let cij = l.basis_bracket(i, j);
            // constraint components: (D c_ij)_k - ([De_i, e_j])_k - ([e_i, De_j])_k = 0
            for k in 0..n {
                // D c_ij term: sum_r D_{k r} c_r -> unknown (k, r)
                for r in 0..n {
                    m[(row + k, r * n + k)] += cij[r];
                }
            }
            // [De_i, e_j] = sum_r D_{r i} [e_r, e_j]
            for r in 0..n {
                let b = l.basis_bracket(r, j);
                for k in 0..n {
                    m[(row + k, i * n + r)] -= b[k];
                }
            }
            // [e_i, De_j] = sum_r D_{r j} [e_i, e_r]
            for r in 0..n {
                let b = l.basis_bracket(i, r);
                for k in 0..n {
                    m[(row + k, j * n + r)] -= b[k];
                }
            }
            row += n;
        }
    }

    let normal = m.transpose() * &m;
    let (w, q) = symmetric_eigen(&normal);
    let sigma_max = w[0].max(0.0).sqrt();
    // cutoff is relative to the top eigenvalue of the normal matrix; anything
    // tighter than ~eps*w[0] would miss true null directions
    let cutoff = if sigma_max > 0.0 {
        1e-12 * w[0]
    } else {
        f64::INFINITY
    };

    let mut basis = Vec::new();
    for idx in 0..ncols {
        if w[idx].abs() <= cutoff || sigma_max == 0.0 {
            let col = q.column(idx);
            let d = DMatrix::from_fn(n, n, |r, c| col[c * n + r]);
            basis.push(d);
        }
    }
    basis
}

/// Residual of the derivation identity for D against random-ish vectors is
/// checked in tests; this checks it on all basis pairs.
pub fn derivation_residual(l: &LieAlgebra, d: &DMatrix<f64>) -> f64 {
    let n = l.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = basis_vector(n, i);
            let ej = basis_vector(n, j);
            let lhs = d * l.basis_bracket(i, j);
            let rhs = l.bracket(&(d * &ei), &ej).unwrap() + l.bracket(&ei, &(d * &ej)).unwrap();
            worst = worst.max((lhs - rhs).amax());
        }
    }
    worst
}

/// Truncated power series for exp(D), summed to machine precision.
pub fn matrix_exp(d: &DMatrix<f64>) -> DMatrix<f64> {
    let n = d.nrows();
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..200 {
        term = (&term * d) / (k as f64);
        sum += &term;
        if term.amax() <= f64::EPSILON * sum.amax() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_vector(rng: &mut impl Rng, n: usize) -> DVector<f64> {
        DVector::from_fn(n, |_, _| rng.gen_range(-5.0..5.0))
    }

    #[test]
    fn rhn_bracket_relations() {
        let l = rhn(3).unwrap();
        let e1 = basis_vector(3, 0);
        let e2 = basis_vector(3, 1);
        assert_eq!(l.bracket(&e1, &e2).unwrap(), e2);
        // antisymmetry on equal arguments
        assert_eq!(l.bracket(&e2, &e2).unwrap().amax(), 0.0);
    }

    #[test]
    fn rhn_structure_constants() {
        let l = rhn(2).unwrap();
        assert_eq!(l.basis_bracket(0, 1), basis_vector(2, 1));

        let l = rhn(4).unwrap();
        for j in 1..4 {
            assert_eq!(l.basis_bracket(0, j), basis_vector(4, j));
        }
        for i in 1..4 {
            for j in (i + 1)..4 {
                assert_eq!(l.basis_bracket(i, j).amax(), 0.0);
            }
        }
    }

    #[test]
    fn heisenberg_bracket_relations() {
        let l = heisenberg3();
        let e1 = basis_vector(3, 0);
        let e2 = basis_vector(3, 1);
        let e3 = basis_vector(3, 2);
        assert_eq!(l.bracket(&e2, &e3).unwrap(), e1);
        assert_eq!(l.bracket(&e1, &e2).unwrap().amax(), 0.0);
        // e1 is central
        assert_eq!(l.bracket(&e1, &e3).unwrap().amax(), 0.0);
    }

    #[test]
    fn jacobi_holds_for_builtins() {
        for n in 2..=8 {
            assert!(rhn(n).unwrap().jacobi_check());
        }
        assert!(heisenberg3().jacobi_check());
    }

    #[test]
    fn jacobi_fails_for_bad_constants() {
        // [e1,e2]=e3, [e1,e3]=e2, [e2,e3]=e2: the cyclic sum for (e1,e2,e3)
        // is [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = e2 - e2 - e2 = -e2
        let l = LieAlgebra::from_structure_constants(
            3,
            &[(0, 1, 2, 1.0), (0, 2, 1, 1.0), (1, 2, 1, 1.0)],
        )
        .unwrap();
        assert!(!l.jacobi_check());
        assert!((l.jacobi_residual() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn automorphisms_of_rhn() {
        let l = rhn(4).unwrap();
        assert!(is_automorphism(&l, &DMatrix::identity(4, 4), 1e-9).unwrap());

        // first row (1,0,0,0), arbitrary first column below, invertible block
        let g = nalgebra::dmatrix![
            1.0, 0.0, 0.0, 0.0;
            2.0, 3.0, 1.0, 0.0;
           -1.0, 0.0, 2.0, 5.0;
            0.5, 1.0, 0.0, 1.0
        ];
        assert!(is_automorphism(&l, &g, 1e-9).unwrap());

        let mut bad = DMatrix::<f64>::identity(4, 4);
        bad[(0, 0)] = 2.0;
        assert!(!is_automorphism(&l, &bad, 1e-9).unwrap());
    }

    #[test]
    fn automorphisms_of_heisenberg() {
        let l = heisenberg3();
        // (1,1) entry = ad - bc, zeros below in column 1
        let (a, b, c, d) = (2.0, 1.0, 1.0, 3.0);
        let g = nalgebra::dmatrix![
            a * d - b * c, 4.0, -2.0;
            0.0, a, b;
            0.0, c, d
        ];
        assert!(is_automorphism(&l, &g, 1e-9).unwrap());

        let mut bad = g.clone();
        bad[(0, 0)] = 1.0;
        assert!(!is_automorphism(&l, &bad, 1e-9).unwrap());
    }

    #[test]
    fn q1_membership_patterns() {
        let mut g = DMatrix::<f64>::identity(4, 4);
        g[(1, 0)] = 3.0;
        assert!(is_in_q1(&g, 1e-9));
        assert!(!is_in_q1_transpose(&g, 1e-9));

        let mut g = DMatrix::<f64>::identity(4, 4);
        g[(0, 1)] = 3.0;
        assert!(!is_in_q1(&g, 1e-9));
        assert!(is_in_q1_transpose(&g, 1e-9));
    }

    #[test]
    fn scaled_automorphisms_of_rhn_lie_in_q1() {
        let l = rhn(3).unwrap();
        let phi = nalgebra::dmatrix![
            1.0, 0.0, 0.0;
            2.0, 1.0, 1.0;
           -1.0, 0.0, 2.0
        ];
        assert!(is_automorphism(&l, &phi, 1e-9).unwrap());
        for c in [-2.0, 0.5, 3.0] {
            assert!(is_in_q1(&(c * &phi), 1e-9));
        }
    }

    #[test]
    fn derivation_dimensions() {
        // brute-force oracle: dimension of the null space must match the
        // parameter counts of the automorphism groups
        assert_eq!(derivation_space(&LieAlgebra::abelian(3)).len(), 9);
        assert_eq!(derivation_space(&heisenberg3()).len(), 6);
        for n in 2..=5 {
            assert_eq!(derivation_space(&rhn(n).unwrap()).len(), n * (n - 1));
        }
    }

    #[test]
    fn derivations_satisfy_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for l in [rhn(4).unwrap(), heisenberg3()] {
            for d in derivation_space(&l) {
                assert!(derivation_residual(&l, &d) <= 1e-8);
                for _ in 0..20 {
                    let x = random_vector(&mut rng, l.dim());
                    let y = random_vector(&mut rng, l.dim());
                    let lhs = &d * l.bracket(&x, &y).unwrap();
                    let rhs = l.bracket(&(&d * &x), &y).unwrap()
                        + l.bracket(&x, &(&d * &y)).unwrap();
                    assert!((lhs - rhs).amax() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn exp_of_derivation_is_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in [rhn(3).unwrap(), heisenberg3()] {
            let basis = derivation_space(&l);
            for _ in 0..10 {
                let mut d = DMatrix::<f64>::zeros(l.dim(), l.dim());
                for b in &basis {
                    d += rng.gen_range(-0.5..0.5) * b;
                }
                let g = matrix_exp(&d);
                assert!(is_automorphism(&l, &g, 1e-7).unwrap());
            }
        }
    }

    #[test]
    fn derivation_basis_is_orthonormal() {
        let basis = derivation_space(&heisenberg3());
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let dot = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum::<f64>();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-9);
            }
        }
    }
}
