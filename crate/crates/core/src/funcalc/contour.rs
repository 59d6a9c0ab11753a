use std::f64::consts::PI;

use num_complex::Complex64;

use super::{scalar_eval, MonotoneFunction};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, inverse, op_norm, ComplexMatrix};
use crate::sector::{is_accretive, sectorial_angle};

pub const DEFAULT_CONTOUR_NODES: usize = 256;

/// Closed curve around the spectrum that avoids the branch cut `(-inf, 0]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DunfordContour {
    /// `center + radius e^{iθ}`.
    Circle { center: f64, radius: f64, nodes: usize },
    /// Image under `exp` of the ellipse `center + semi_re cos θ + i semi_im sin θ`,
    /// with `semi_im < π` so the curve never meets the negative axis.
    LogEllipse {
        center: f64,
        semi_re: f64,
        semi_im: f64,
        nodes: usize,
    },
}

impl DunfordContour {
    pub fn nodes(&self) -> usize {
        match *self {
            DunfordContour::Circle { nodes, .. } | DunfordContour::LogEllipse { nodes, .. } => nodes,
        }
    }

    /// Point `z(θ)` and derivative `dz/dθ` on the curve.
    pub fn point(&self, theta: f64) -> (Complex64, Complex64) {
        let e = Complex64::from_polar(1.0, theta);
        match *self {
            DunfordContour::Circle { center, radius, .. } => {
                (center + e * radius, Complex64::new(0.0, radius) * e)
            }
            DunfordContour::LogEllipse {
                center,
                semi_re,
                semi_im,
                ..
            } => {
                let w = Complex64::new(center + semi_re * theta.cos(), semi_im * theta.sin());
                let dw = Complex64::new(-semi_re * theta.sin(), semi_im * theta.cos());
                let z = w.exp();
                (z, z * dw)
            }
        }
    }

    /// Whether `z` lies strictly inside the curve.
    pub fn encloses(&self, z: Complex64) -> bool {
        match *self {
            DunfordContour::Circle { center, radius, .. } => (z - center).norm() < radius,
            DunfordContour::LogEllipse {
                center,
                semi_re,
                semi_im,
                ..
            } => {
                if z.im == 0.0 && z.re <= 0.0 {
                    return false;
                }
                let w = z.ln();
                ((w.re - center) / semi_re).powi(2) + (w.im / semi_im).powi(2) < 1.0
            }
        }
    }

    /// Whether the curve stays inside `C \ (-inf, 0]`.
    pub fn avoids_cut(&self) -> bool {
        match *self {
            DunfordContour::Circle { center, radius, .. } => center - radius > 0.0,
            DunfordContour::LogEllipse { semi_im, .. } => semi_im < PI,
        }
    }
}

fn accretive_data(a: &ComplexMatrix) -> Result<(f64, f64)> {
    let (ok, margin) = is_accretive(a);
    if !ok {
        return Err(Error::precondition("contour needs an accretive matrix", margin));
    }
    let m = hermitian_eigenvalues(&a.hermitian_part())?[0];
    Ok((m, op_norm(a)?))
}

/// Log-plane ellipse enclosing `{ m <= |z| <= ||A||_op, |arg z| <= alpha }`, which
/// contains every eigenvalue of the accretive matrix `A`.
pub fn choose_contour(a: &ComplexMatrix) -> Result<DunfordContour> {
    let (m, r) = accretive_data(a)?;
    let alpha = sectorial_angle(a)?;
    let (lo, hi) = (m.ln(), r.max(m).ln());
    let half_width = (hi - lo) / 2.0;
    let semi_im = (1.5 * alpha + 0.3).min((PI + 1.5 * alpha) / 2.0);
    Ok(DunfordContour::LogEllipse {
        center: (lo + hi) / 2.0,
        semi_re: 1.5 * half_width + 0.3,
        semi_im,
        nodes: DEFAULT_CONTOUR_NODES,
    })
}

/// Circle with `c = 1.05 max(R^2/m, 2m)` and `r = 1.02 sqrt(R^2 - 2cm + c^2)`.
///
/// Fails when the circle would reach the cut, which happens once `R/m` exceeds about 5.
pub fn circle_contour(a: &ComplexMatrix) -> Result<DunfordContour> {
    let (m, r_norm) = accretive_data(a)?;
    let center = 1.05 * (r_norm * r_norm / m).max(2.0 * m);
    let disc = r_norm * r_norm - 2.0 * center * m + center * center;
    let radius = if disc > 0.0 { 1.02 * disc.sqrt() } else { 0.5 * center };
    if center - radius <= 0.0 {
        return Err(Error::precondition("circle contour crosses the branch cut", center - radius));
    }
    Ok(DunfordContour::Circle {
        center,
        radius,
        nodes: DEFAULT_CONTOUR_NODES,
    })
}

/// `f(A) = (1/2πi) ∮ f(z) (zI - A)^{-1} dz` by the trapezoid rule in the curve parameter.
pub fn dunford_apply(f: &MonotoneFunction, a: &ComplexMatrix, contour: &DunfordContour) -> Result<ComplexMatrix> {
    let (ok, margin) = is_accretive(a);
    if !ok {
        return Err(Error::precondition("Dunford integral needs an accretive matrix", margin));
    }
    if !contour.avoids_cut() {
        return Err(Error::Parameter("contour meets the branch cut".into()));
    }
    let n = a.dim();
    let nodes = contour.nodes();
    if nodes < 16 {
        return Err(Error::Parameter(format!("contour needs at least 16 nodes, got {nodes}")));
    }
    let mut sum = ComplexMatrix::zeros(n);
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let (z, dz) = contour.point(theta);
        let resolvent = inverse(&(-a).shift(z)).map_err(|e| match e {
            Error::Singular { magnitude, .. } => Error::numeric("contour node hit the spectrum", magnitude),
            other => other,
        })?;
        sum.axpy(scalar_eval(f, z)? * dz, &resolvent);
    }
    Ok(sum.scale_complex(Complex64::new(0.0, -1.0 / nodes as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal_enclosed() {
        for a in [ComplexMatrix::identity(2), ComplexMatrix::from_real_diag(&[1.0, 4.0])] {
            for g in [choose_contour(&a).unwrap(), circle_contour(&a).unwrap()] {
                assert!(g.avoids_cut());
                for i in 0..a.dim() {
                    assert!(g.encloses(a[(i, i)]), "{g:?}");
                }
            }
        }
    }

    #[test]
    fn affine_function_is_exact() {
        let f = MonotoneFunction::arithmetic(0.3).unwrap();
        let a = ComplexMatrix::from_rows(&[
            vec![Complex64::new(2.0, 1.0), Complex64::new(0.5, 0.0)],
            vec![Complex64::new(0.0, 0.3), Complex64::new(1.0, -0.5)],
        ])
        .unwrap();
        let g = choose_contour(&a).unwrap();
        let r = dunford_apply(&f, &a, &g).unwrap();
        let expect = a.scale(0.3).shift(Complex64::new(0.7, 0.0));
        assert!((&r - &expect).max_abs() < 1e-10);
    }

    #[test]
    fn square_root_of_diagonal() {
        let f = MonotoneFunction::power(0.5).unwrap();
        let a = ComplexMatrix::from_real_diag(&[4.0, 9.0]);
        let r = dunford_apply(&f, &a, &choose_contour(&a).unwrap()).unwrap();
        assert!((&r - &ComplexMatrix::from_real_diag(&[2.0, 3.0])).max_abs() < 1e-10);
    }

    #[test]
    fn circle_rejected_for_wide_spectrum() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 8.0]);
        assert!(matches!(circle_contour(&a), Err(Error::Precondition { .. })));
        assert!(choose_contour(&a).unwrap().encloses(Complex64::new(8.0, 0.0)));
    }
}
