//! Milnor frames: pseudo-orthonormal bases (up to a scaling k) whose bracket
//! tables contain the single parameter lambda, extracted from a reduction
//! witness, plus verification and the translation of Heisenberg frames into
//! Rahmani's classification bases.

use nalgebra::{DMatrix, DVector};

use crate::forms::{MetricTensor, SignatureMatrix};
use crate::lie::{is_automorphism, Family, LieAlgebra};
use crate::reduce::{reduce_metric, ReductionResult};
use crate::{Error, Result};

/// A basis x_1..x_n = phi g0 e_i, pseudo-orthonormal for k<,>, whose bracket
/// relations form the canonical one-parameter table of its family.
#[derive(Debug, Clone)]
pub struct MilnorFrame {
    pub algebra: LieAlgebra,
    pub metric: MetricTensor,
    /// Frame vectors as columns (coordinates in the e-basis).
    pub vectors: DMatrix<f64>,
    pub k: f64,
    pub lambda: u8,
    pub phi: DMatrix<f64>,
    pub g0: DMatrix<f64>,
    pub signature: SignatureMatrix,
    pub boundary: bool,
}

fn split_scalar_automorphism(
    l: &LieAlgebra,
    reduction: &ReductionResult,
    tol: f64,
) -> Result<(f64, DMatrix<f64>)> {
    let left_inv = reduction
        .left_factor
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix)?;
    let c = match l.family {
        // Aut elements have 1 in the (1,1) slot, so c is read off directly.
        Some(Family::RealHyperbolic) => left_inv[(0, 0)],
        // Aut elements have (1,1) entry equal to the determinant of their
        // lower-right 2x2 block; for c*phi this gives g11 * c = det(B).
        Some(Family::Heisenberg3) => {
            let b = left_inv.view((1, 1), (2, 2)).into_owned();
            let g11 = left_inv[(0, 0)];
            if g11.abs() <= tol {
                return Err(Error::Inconsistency(
                    "scalar extraction: vanishing (1,1) entry".into(),
                ));
            }
            b.determinant() / g11
        }
        None => return Err(Error::UnsupportedAlgebra),
    };
    if c.abs() <= tol {
        return Err(Error::Inconsistency("vanishing scalar factor".into()));
    }
    let phi = &left_inv / c;
    if !is_automorphism(l, &phi, 1e-7_f64.max(tol))? {
        return Err(Error::Inconsistency(
            "recovered factor is not an automorphism".into(),
        ));
    }
    Ok((c, phi))
}

fn build_frame(
    l: &LieAlgebra,
    a: &MetricTensor,
    reduction: ReductionResult,
    tol: f64,
) -> Result<MilnorFrame> {
    let (c, phi) = split_scalar_automorphism(l, &reduction, tol)?;
    let vectors = &phi * &reduction.g0;
    Ok(MilnorFrame {
        algebra: l.clone(),
        metric: a.clone(),
        vectors,
        k: c * c,
        lambda: reduction.lambda,
        phi,
        g0: reduction.g0,
        signature: reduction.signature,
        boundary: reduction.boundary,
    })
}

/// Milnor frame for a metric on the real hyperbolic family, p,q >= 1.
///
/// The resulting relations are [x1,xi] = xi, [x1,xn] = -lambda x1 + xn,
/// [xi,xn] = -lambda xi (middle indices i), all other brackets zero.
pub fn milnor_frame_rhn(l: &LieAlgebra, a: &MetricTensor, tol: f64) -> Result<MilnorFrame> {
    if l.family != Some(Family::RealHyperbolic) {
        return Err(Error::UnsupportedAlgebra);
    }
    let reduction = reduce_metric(l, a, tol)?;
    build_frame(l, a, reduction, tol)
}

/// Milnor frame for a Lorentzian metric on the Heisenberg algebra.
///
/// Relations: [x1,x2] = lambda (x1 + lambda x3), [x2,x3] = x1 + lambda x3,
/// [x3,x1] = 0.
pub fn milnor_frame_h3(l: &LieAlgebra, a: &MetricTensor, tol: f64) -> Result<MilnorFrame> {
    if l.family != Some(Family::Heisenberg3) {
        return Err(Error::UnsupportedAlgebra);
    }
    let reduction = reduce_metric(l, a, tol)?;
    build_frame(l, a, reduction, tol)
}

/// Dispatch on the builtin family.
pub fn milnor_frame(l: &LieAlgebra, a: &MetricTensor, tol: f64) -> Result<MilnorFrame> {
    match l.family {
        Some(Family::RealHyperbolic) => milnor_frame_rhn(l, a, tol),
        Some(Family::Heisenberg3) => milnor_frame_h3(l, a, tol),
        None => Err(Error::UnsupportedAlgebra),
    }
}

/// The canonical bracket table of (family, lambda): coefficients of
/// [x_i, x_j] in the frame basis, for i < j (0-based indices).
pub fn canonical_bracket(
    family: Family,
    lambda: u8,
    n: usize,
    i: usize,
    j: usize,
) -> DVector<f64> {
    let lam = f64::from(lambda);
    let mut out = DVector::zeros(n);
    match family {
        Family::RealHyperbolic => {
            if i == 0 && j < n - 1 {
                out[j] = 1.0;
            } else if i == 0 && j == n - 1 {
                out[0] = -lam;
                out[n - 1] = 1.0;
            } else if j == n - 1 {
                out[i] = -lam;
            }
        }
        Family::Heisenberg3 => {
            if (i, j) == (0, 1) {
                out[0] = lam;
                out[2] = lam * lam;
            } else if (i, j) == (1, 2) {
                out[0] = 1.0;
                out[2] = lam;
            }
        }
    }
    out
}

/// Residuals of the frame's defining invariants.
#[derive(Debug, Clone)]
pub struct FrameReport {
    /// max |k <x_i,x_j> - eps_i delta_ij|
    pub orthonormality_residual: f64,
    /// max over pairs of |[x_i,x_j] - canonical table| in the e-basis
    pub bracket_residual: f64,
}

impl FrameReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.orthonormality_residual <= tol && self.bracket_residual <= tol
    }
}

/// Check pseudo-orthonormality for k<,> and the full canonical bracket
/// table, including the vanishing of every off-table bracket.
pub fn verify_frame(f: &MilnorFrame) -> Result<FrameReport> {
    let n = f.algebra.dim();
    let family = f.algebra.family.ok_or(Error::UnsupportedAlgebra)?;

    let mut ortho = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let xi = DVector::from(f.vectors.column(i).into_owned());
            let xj = DVector::from(f.vectors.column(j).into_owned());
            let val = f.k * f.metric.apply(&xi, &xj);
            let expected = if i == j { f.signature.epsilon(i) } else { 0.0 };
            ortho = ortho.max((val - expected).abs());
        }
    }

    let mut bracket = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let xi = DVector::from(f.vectors.column(i).into_owned());
            let xj = DVector::from(f.vectors.column(j).into_owned());
            let actual = f.algebra.bracket(&xi, &xj)?;
            let expected = &f.vectors * canonical_bracket(family, f.lambda, n, i, j);
            bracket = bracket.max((actual - expected).amax());
        }
    }

    Ok(FrameReport {
        orthonormality_residual: ortho,
        bracket_residual: bracket,
    })
}

/// One of the three bracket-relation types in Rahmani's classification of
/// Lorentzian metrics on the Heisenberg group.
#[derive(Debug, Clone)]
pub struct RahmaniForm {
    /// Case number 1, 2, or 3.
    pub case: u8,
    /// Basis f1, f2, f3 as columns, in the e-basis.
    pub basis: DMatrix<f64>,
    /// alpha for case 1, gamma for case 2, none for case 3.
    pub parameter: Option<f64>,
}

/// Map a Heisenberg Milnor frame onto Rahmani's basis:
/// lambda = 0 -> case 1 with alpha = 1 (basis unchanged);
/// lambda = 1 -> case 3 with (f1,f2,f3) = (x2, -x1, x3);
/// lambda = 2 -> case 2 with gamma = 3 and f2, f3 the normalized
/// combinations (2 x1 + x3)/sqrt(3), (x1 + 2 x3)/sqrt(3).
pub fn rahmani_form(f: &MilnorFrame) -> Result<RahmaniForm> {
    if f.algebra.family != Some(Family::Heisenberg3) {
        return Err(Error::UnsupportedAlgebra);
    }
    let x1 = DVector::from(f.vectors.column(0).into_owned());
    let x2 = DVector::from(f.vectors.column(1).into_owned());
    let x3 = DVector::from(f.vectors.column(2).into_owned());
    let (case, cols, parameter) = match f.lambda {
        0 => (1, [x1, x2, x3], Some(1.0)),
        1 => (3, [x2, -x1, x3], None),
        2 => {
            let s = 3.0f64.sqrt();
            let f2 = (2.0 * &x1 + &x3) / s;
            let f3 = (&x1 + 2.0 * &x3) / s;
            (2, [x2, f2, f3], Some(3.0))
        }
        _ => unreachable!("lambda is always 0, 1, or 2"),
    };
    let mut basis = DMatrix::zeros(3, 3);
    for (j, col) in cols.iter().enumerate() {
        basis.set_column(j, col);
    }
    Ok(RahmaniForm {
        case,
        basis,
        parameter,
    })
}

/// Residual of the Rahmani bracket relations for a given form, against the
/// frame it came from. Zero (within tolerance) certifies the translation.
pub fn rahmani_residual(f: &MilnorFrame, form: &RahmaniForm) -> Result<f64> {
    let n = 3;
    let get = |j: usize| DVector::from(form.basis.column(j).into_owned());
    let (f1, f2, f3) = (get(0), get(1), get(2));
    let zero = DVector::zeros(n);
    // expected [f2,f3], [f3,f1], [f2,f1] per case
    let (e23, e31, e21) = match form.case {
        1 => (form.parameter.unwrap() * &f1, zero.clone(), zero.clone()),
        2 => (zero.clone(), zero.clone(), form.parameter.unwrap() * &f3),
        3 => (zero.clone(), &f2 - &f3, &f2 - &f3),
        _ => return Err(Error::InvalidInput("unknown Rahmani case".into())),
    };
    let l = &f.algebra;
    let mut worst = (l.bracket(&f2, &f3)? - e23).amax();
    worst = worst.max((l.bracket(&f3, &f1)? - e31).amax());
    worst = worst.max((l.bracket(&f2, &f1)? - e21).amax());
    // the basis must stay pseudo-orthonormal for k<,>
    for i in 0..n {
        for j in 0..n {
            let val = f.k * f.metric.apply(&get(i), &get(j));
            let expected = if i == j { f.signature.epsilon(i) } else { 0.0 };
            worst = worst.max((val - expected).abs());
        }
    }
    Ok(worst)
}
