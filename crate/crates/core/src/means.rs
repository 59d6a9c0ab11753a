//! Binary means of accretive matrices: weighted harmonic, arithmetic and geometric
//! means, the Kubo–Ando type mean `σ_f`, and `♯_{-λ}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcalc::{
    apply_function_unchecked, gauss_jacobi_rule, order_change, MonotoneFunction, MAX_ORDER,
};
use crate::linalg::{
    hermitian_eigen, inverse, lu_solve, principal_sqrt, relative_deviation, ComplexMatrix,
};
use crate::sector::is_accretive;

/// Largest pairwise relative deviation tolerated between independent evaluation paths.
pub const PATH_TOL: f64 = 1e-8;

fn require_accretive(a: &ComplexMatrix, which: &str) -> Result<()> {
    let (ok, margin) = is_accretive(a);
    if ok {
        Ok(())
    } else {
        Err(Error::precondition(format!("{which} operand is not accretive"), margin))
    }
}

fn require_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    a.ensure_same_dim(b)?;
    require_accretive(a, "first")?;
    require_accretive(b, "second")
}

fn check_weight(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("weight {t} outside [0, 1]")))
    }
}

fn check_open(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("lambda = {lambda} must lie in (0, 1)")))
    }
}

fn singular_as_numeric(e: Error) -> Error {
    match e {
        Error::Singular { magnitude, .. } => Error::numeric("singular intermediate matrix", magnitude),
        other => other,
    }
}

/// `A !_t B` without preconditions; `t = 0, 1` return the endpoints.
pub fn harmonic_mean_unchecked(a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    // ((1-t) A^{-1} + t B^{-1})^{-1} = B ((1-t) B + t A)^{-1} A
    let mut mix = b.scale(1.0 - t);
    mix.axpy(Complex64::new(t, 0.0), a);
    Ok(b * &lu_solve(&mix, a).map_err(singular_as_numeric)?)
}

/// `A !_t B = ((1-t) A^{-1} + t B^{-1})^{-1}`.
pub fn harmonic_mean(a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    check_weight(t)?;
    require_pair(a, b)?;
    harmonic_mean_unchecked(a, b, t)
}

/// `A ∇_t B = (1-t) A + t B`.
pub fn arithmetic_mean(a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    check_weight(t)?;
    a.ensure_same_dim(b)?;
    let mut out = a.scale(1.0 - t);
    out.axpy(Complex64::new(t, 0.0), b);
    Ok(out)
}

// A^{1/2} g(A^{-1/2} B A^{-1/2}) A^{1/2} for Hermitian positive definite A and Hermitian B,
// with g the quadrature sum of f applied to the eigenvalues.
fn sigma_hermitian(a: &ComplexMatrix, b: &ComplexMatrix, f: &MonotoneFunction, order: usize) -> Result<Option<ComplexMatrix>> {
    let ea = hermitian_eigen(a)?;
    if ea.min() <= 0.0 {
        return Ok(None);
    }
    let half = ea.apply(f64::sqrt);
    let inv_half = ea.apply(|v| 1.0 / v.sqrt());
    let c = (&(&inv_half * b) * &inv_half).hermitian_part();
    let gc = apply_function_unchecked(f, &c, order)?;
    Ok(Some((&(&half * &gc) * &half).hermitian_part()))
}

/// The quadrature sum `Σ w_j A !_{t_j} B` at a fixed order, without preconditions or
/// convergence control.
pub fn sigma_mean_unchecked(a: &ComplexMatrix, b: &ComplexMatrix, f: &MonotoneFunction, order: usize) -> Result<ComplexMatrix> {
    a.ensure_same_dim(b)?;
    if a.hermitian_defect() == 0.0 && b.hermitian_defect() == 0.0 {
        if let Some(r) = sigma_hermitian(a, b, f, order)? {
            return Ok(r);
        }
    }
    let mut out = ComplexMatrix::zeros(a.dim());
    for (t, w) in f.measure.discretize(order)? {
        out.axpy(Complex64::new(w, 0.0), &harmonic_mean_unchecked(a, b, t)?);
    }
    Ok(out)
}

/// `A σ_f B = ∫ A !_t B dν_f(t)`, checked by doubling the quadrature order.
pub fn sigma_mean(a: &ComplexMatrix, b: &ComplexMatrix, f: &MonotoneFunction, order: usize) -> Result<ComplexMatrix> {
    require_pair(a, b)?;
    let value = sigma_mean_unchecked(a, b, f, order)?;
    if f.measure.density.is_some() {
        let check = sigma_mean_unchecked(a, b, f, (2 * order).min(MAX_ORDER))?;
        let change = order_change(&value, &check);
        if change > PATH_TOL {
            return Err(Error::numeric("mean quadrature did not converge under order doubling", change));
        }
    }
    Ok(value)
}

/// `S f(S^{-1} B S^{-1}) S` with `S = A^{1/2}`; `f` is evaluated on a matrix whose
/// spectrum is off the cut but which need not be accretive.
pub fn congruence_sigma(a: &ComplexMatrix, b: &ComplexMatrix, f: &MonotoneFunction, order: usize) -> Result<ComplexMatrix> {
    require_pair(a, b)?;
    let s = principal_sqrt(a)?;
    let s_inv = inverse(&s).map_err(singular_as_numeric)?;
    let inner = &(&s_inv * b) * &s_inv;
    let fm = apply_function_unchecked(f, &inner, order)?;
    Ok(&(&s * &fm) * &s)
}

/// Half-line integral `sin(λπ)/π ∫_0^∞ t^{λ-1} (A^{-1} + t B^{-1})^{-1} dt`
/// after `t = s/(1-s)`, evaluated on the Jacobi nodes of `dν_λ`.
pub fn half_line_geometric(a: &ComplexMatrix, b: &ComplexMatrix, lambda: f64, order: usize) -> Result<ComplexMatrix> {
    check_open(lambda)?;
    require_pair(a, b)?;
    let ai = inverse(a).map_err(singular_as_numeric)?;
    let bi = inverse(b).map_err(singular_as_numeric)?;
    let rule = gauss_jacobi_rule(lambda - 1.0, -lambda, order)?;
    let coeff = (lambda * PI).sin() / PI;
    let mut out = ComplexMatrix::zeros(a.dim());
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t = s / (1.0 - s);
        let mut m = ai.clone();
        m.axpy(Complex64::new(t, 0.0), &bi);
        let term = inverse(&m).map_err(singular_as_numeric)?;
        out.axpy(Complex64::new(coeff * w / (1.0 - s), 0.0), &term);
    }
    Ok(out)
}

/// The three evaluations of `A ♯_λ B`.
#[derive(Clone, Debug)]
pub struct GeometricPaths {
    /// `σ_f` with `f = power(λ)`.
    pub integral: ComplexMatrix,
    /// `A^{1/2} (A^{-1/2} B A^{-1/2})^λ A^{1/2}`.
    pub congruence: ComplexMatrix,
    /// The half-line integral.
    pub half_line: ComplexMatrix,
}

impl GeometricPaths {
    pub fn max_deviation(&self) -> Result<f64> {
        let d1 = relative_deviation(&self.integral, &self.congruence)?;
        let d2 = relative_deviation(&self.integral, &self.half_line)?;
        let d3 = relative_deviation(&self.congruence, &self.half_line)?;
        Ok(d1.max(d2).max(d3))
    }
}

pub fn geometric_paths(a: &ComplexMatrix, b: &ComplexMatrix, lambda: f64, order: usize) -> Result<GeometricPaths> {
    check_open(lambda)?;
    let f = MonotoneFunction::power(lambda)?;
    Ok(GeometricPaths {
        integral: sigma_mean(a, b, &f, order)?,
        congruence: congruence_sigma(a, b, &f, order)?,
        half_line: half_line_geometric(a, b, lambda, order)?,
    })
}

/// `A ♯_λ B`, returned from the measure integral after all three paths agree within
/// [`PATH_TOL`].
pub fn geometric_mean(a: &ComplexMatrix, b: &ComplexMatrix, lambda: f64, order: usize) -> Result<ComplexMatrix> {
    let paths = geometric_paths(a, b, lambda, order)?;
    let dev = paths.max_deviation()?;
    if dev > PATH_TOL {
        return Err(Error::numeric("geometric mean paths disagree", dev));
    }
    Ok(paths.integral)
}

/// Drury's formula `A ♯ B = ((2/π) ∫_0^∞ (tA + t^{-1}B)^{-1} dt/t)^{-1}`, mapped by
/// `u = t²/(1+t²)` to `(1/π) ∫_0^1 u^{-1/2} (1-u)^{-1/2} (uA + (1-u)B)^{-1} du`.
pub fn drury_half(a: &ComplexMatrix, b: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    require_pair(a, b)?;
    let eval = |order: usize| -> Result<ComplexMatrix> {
        let rule = gauss_jacobi_rule(-0.5, -0.5, order)?;
        let mut acc = ComplexMatrix::zeros(a.dim());
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let mut m = b.scale(1.0 - u);
            m.axpy(Complex64::new(u, 0.0), a);
            acc.axpy(Complex64::new(w / PI, 0.0), &inverse(&m).map_err(singular_as_numeric)?);
        }
        inverse(&acc).map_err(singular_as_numeric)
    };
    let value = eval(order)?;
    let check = eval((2 * order).min(MAX_ORDER))?;
    let change = order_change(&value, &check);
    if change > PATH_TOL {
        return Err(Error::numeric("Drury integral did not converge under order doubling", change));
    }
    Ok(value)
}

/// `A ♯_{-λ} B = A (A^{-1} ♯_λ B^{-1}) A` by its integral representation, without
/// preconditions or convergence control.
pub fn geometric_neg_unchecked(a: &ComplexMatrix, b: &ComplexMatrix, lambda: f64, order: usize) -> Result<ComplexMatrix> {
    let f = MonotoneFunction::power(lambda)?;
    let ai = inverse(a).map_err(singular_as_numeric)?;
    let bi = inverse(b).map_err(singular_as_numeric)?;
    let inner = sigma_mean_unchecked(&ai, &bi, &f, order)?;
    Ok(&(a * &inner) * a)
}

/// `A ♯_{-λ} B` for `λ ∈ (0, 1)` by the integral `A {∫ A^{-1} !_t B^{-1} dν_λ(t)} A`.
pub fn geometric_neg(a: &ComplexMatrix, b: &ComplexMatrix, lambda: f64, order: usize) -> Result<ComplexMatrix> {
    check_open(lambda)?;
    require_pair(a, b)?;
    let value = geometric_neg_unchecked(a, b, lambda, order)?;
    let check = geometric_neg_unchecked(a, b, lambda, (2 * order).min(MAX_ORDER))?;
    let change = order_change(&value, &check);
    if change > PATH_TOL {
        return Err(Error::numeric("quadrature did not converge under order doubling", change));
    }
    Ok(value)
}

/// `A^{1/2} (A^{-1/2} B A^{-1/2})^{-λ} A^{1/2}`, the inner power taken as the inverse of
/// the `power(λ)` functional calculus.
pub fn geometric_neg_congruence(a: &ComplexMatrix, b: &ComplexMatrix, lambda: f64, order: usize) -> Result<ComplexMatrix> {
    check_open(lambda)?;
    require_pair(a, b)?;
    let f = MonotoneFunction::power(lambda)?;
    let s = principal_sqrt(a)?;
    let s_inv = inverse(&s).map_err(singular_as_numeric)?;
    let inner = &(&s_inv * b) * &s_inv;
    let p = inverse(&apply_function_unchecked(&f, &inner, order)?).map_err(singular_as_numeric)?;
    Ok(&(&s * &p) * &s)
}
