//! Dense complex linear algebra: solves, Hermitian spectra, norms, square roots
//! and the Loewner order.

mod eigen;
mod lu;
mod matrix;
mod norms;
mod sqrt;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use lu::{inverse, lu_solve, Lu};
pub use matrix::ComplexMatrix;
pub use norms::{op_norm, singular_values, uinorm, NormKind};
pub use sqrt::principal_sqrt;

use crate::error::{Error, Result};

/// Normalized tolerance for Loewner-order and strict-positivity tests.
pub const TAU_LOEWNER: f64 = 1e-7;

/// Outcome of testing `X <= Y` in the Loewner order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoewnerVerdict {
    /// `lambda_min(Y - X) / (1 + ||X||_op + ||Y||_op)`.
    pub margin: f64,
    pub holds: bool,
}

fn symmetrized(h: &ComplexMatrix, what: &str) -> Result<ComplexMatrix> {
    h.ensure_finite()?;
    let defect = h.hermitian_defect();
    if defect > 1e-10 * (1.0 + h.norm_inf()) {
        return Err(Error::InvalidInput(format!(
            "{what} is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(h.hermitian_part())
}

fn spectral_radius_hermitian(h: &ComplexMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(h)?;
    Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
}

pub fn loewner_leq(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<LoewnerVerdict> {
    x.ensure_same_dim(y)?;
    let x = symmetrized(x, "left operand")?;
    let y = symmetrized(y, "right operand")?;
    let gap = hermitian_eigenvalues(&(&y - &x))?[0];
    let scale = 1.0 + spectral_radius_hermitian(&x)? + spectral_radius_hermitian(&y)?;
    let margin = gap / scale;
    Ok(LoewnerVerdict {
        margin,
        holds: margin >= -TAU_LOEWNER,
    })
}

/// `lambda_min(Re A) / (1 + ||A||_op)`, positive exactly when `A` is accretive.
pub fn accretivity_margin(a: &ComplexMatrix) -> Result<f64> {
    a.ensure_finite()?;
    let lo = hermitian_eigenvalues(&a.hermitian_part())?[0];
    Ok(lo / (1.0 + op_norm(a)?))
}

/// `||X - Y||_op / (1 + ||X||_op + ||Y||_op)`.
pub fn relative_deviation(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    x.ensure_same_dim(y)?;
    Ok(op_norm(&(x - y))? / (1.0 + op_norm(x)? + op_norm(y)?))
}
