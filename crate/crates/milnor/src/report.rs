//! JSON problem descriptions consumed by the CLI and the machine-readable
//! reports it emits. Indices in files are 1-based, matching the e_1..e_n
//! basis notation; metric entries are row-major.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::curvature::SolitonWitness;
use crate::forms::MetricTensor;
use crate::lie::{heisenberg3, rhn, LieAlgebra};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AlgebraSpec {
    /// The real hyperbolic family of dimension n.
    Rhn { n: usize },
    /// The 3-dimensional Heisenberg algebra.
    Heisenberg3,
    /// Explicit structure constants: (i, j, k, c) means [e_i, e_j] += c e_k,
    /// with 1-based indices and i < j.
    Custom {
        dim: usize,
        brackets: Vec<(usize, usize, usize, f64)>,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Options {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub algebra: AlgebraSpec,
    /// n x n metric entries, row-major (nested rows).
    pub metric: Vec<Vec<f64>>,
    #[serde(default)]
    pub options: Options,
}

impl ProblemSpec {
    pub fn algebra(&self) -> Result<LieAlgebra> {
        match &self.algebra {
            AlgebraSpec::Rhn { n } => rhn(*n),
            AlgebraSpec::Heisenberg3 => Ok(heisenberg3()),
            AlgebraSpec::Custom { dim, brackets } => {
                let mut entries = Vec::with_capacity(brackets.len());
                for &(i, j, k, c) in brackets {
                    if i == 0 || j == 0 || k == 0 {
                        return Err(Error::InvalidInput(
                            "bracket indices are 1-based".into(),
                        ));
                    }
                    entries.push((i - 1, j - 1, k - 1, c));
                }
                let l = LieAlgebra::from_structure_constants(*dim, &entries)?;
                if !l.jacobi_check() {
                    return Err(Error::InvalidInput(format!(
                        "structure constants violate the Jacobi identity (residual {:e})",
                        l.jacobi_residual()
                    )));
                }
                Ok(l)
            }
        }
    }

    pub fn metric(&self) -> Result<MetricTensor> {
        let n = self.metric.len();
        if n == 0 || self.metric.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("metric must be a square array".into()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| self.metric[i][j]);
        MetricTensor::new(m)
    }

    pub fn tol(&self) -> f64 {
        self.options.tol.unwrap_or(crate::DEFAULT_TOL)
    }
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter()
        .map(|r| r.iter().copied().collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameSection {
    /// Frame vectors as rows of coordinates in the e-basis.
    pub vectors: Vec<Vec<f64>>,
    pub orthonormality_residual: f64,
    pub bracket_residual: f64,
    pub boundary_classified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RahmaniSection {
    pub case: u8,
    pub parameter: Option<f64>,
    pub basis: Vec<Vec<f64>>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureSection {
    pub flat: bool,
    pub constant_k: Option<f64>,
    /// -(lambda^2 eps_n + eps_1) k for the real hyperbolic family.
    pub predicted_constant_k: Option<f64>,
    pub sampled_k: Option<(f64, f64, f64)>,
    pub einstein: Option<f64>,
    pub einstein_residual: f64,
    pub algebraic_soliton: Option<SolitonWitness>,
    pub soliton_residual: f64,
    pub scalar: f64,
    pub ricci: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub spec: ProblemSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rahmani: Option<RahmaniSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureSection>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(spec: ProblemSpec, seed: u64, samples: usize) -> Self {
        let tol = spec.tol();
        Report {
            spec,
            signature: None,
            lambda: None,
            k: None,
            g0: None,
            factorization_residual: None,
            frame: None,
            rahmani: None,
            curvature: None,
            provenance: Provenance {
                tool: "milnor".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                seed,
                tol,
                samples,
            },
        }
    }
}
