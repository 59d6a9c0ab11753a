use super::{accretivity_margin, inverse, ComplexMatrix, TAU_LOEWNER};
use crate::error::{Error, Result};

const MAX_ITER: usize = 100;
const STEP_TOL: f64 = 1e-13;

/// Principal square root of an accretive matrix by the Denman–Beavers iteration.
///
/// The result has its spectrum in the open right half-plane and satisfies
/// `||X^2 - A||_inf <= 1e-9 (1 + ||A||_inf)`.
pub fn principal_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let margin = accretivity_margin(a)?;
    if margin <= TAU_LOEWNER {
        return Err(Error::precondition("square root needs an accretive matrix", margin));
    }
    let n = a.dim();
    let mut x = a.clone();
    let mut y = ComplexMatrix::identity(n);
    for _ in 0..MAX_ITER {
        let xi = inverse(&x)?;
        let yi = inverse(&y)?;
        let x_next = (&x + &yi).scale(0.5);
        let y_next = (&y + &xi).scale(0.5);
        let step = (&x_next - &x).norm_inf();
        let size = x.norm_inf();
        x = x_next;
        y = y_next;
        if step <= STEP_TOL * size {
            break;
        }
    }
    let residual = (&(&x * &x) - a).norm_inf();
    if residual > 1e-9 * (1.0 + a.norm_inf()) || !x.is_finite() {
        return Err(Error::numeric("Denman-Beavers square root", residual));
    }
    Ok(x)
}
