//! Matrix monotone functions represented by their Hansen measures, and the matrix
//! functional calculus `f(A) = ∫ I !_t A dν_f(t)` for accretive `A`.

mod contour;
mod quadrature;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use contour::{choose_contour, circle_contour, dunford_apply, DunfordContour, DEFAULT_CONTOUR_NODES};
pub use quadrature::{gauss_jacobi_rule, QuadratureRule, MAX_ORDER, MIN_ORDER};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, lu_solve, ComplexMatrix, TAU_LOEWNER};
use crate::sector::is_accretive;

pub const DEFAULT_ORDER: usize = 80;
/// Largest relative change tolerated when the quadrature order is doubled.
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// Bounded continuous factor multiplying a Jacobi density.
#[derive(Clone)]
pub struct Smooth(pub Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl fmt::Debug for Smooth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Smooth(..)")
    }
}

/// `coeff * t^exp0 * (1 - t)^exp1 * smooth(t)` on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Density {
    pub coeff: f64,
    pub exp0: f64,
    pub exp1: f64,
    /// `None` means the constant 1.
    pub smooth: Option<Smooth>,
}

impl Density {
    pub fn jacobi(coeff: f64, exp0: f64, exp1: f64) -> Self {
        Density {
            coeff,
            exp0,
            exp1,
            smooth: None,
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        let s = self.smooth.as_ref().map_or(1.0, |g| (g.0)(t));
        self.coeff * t.powf(self.exp0) * (1.0 - t).powf(self.exp1) * s
    }
}

/// A probability measure on `[0, 1]`: point masses plus an optional Jacobi-type density.
#[derive(Clone, Debug, Default)]
pub struct MeasureSpec {
    /// `(position, weight)` pairs.
    pub atoms: Vec<(f64, f64)>,
    pub density: Option<Density>,
}

impl MeasureSpec {
    pub fn validate(&self) -> Result<()> {
        for (i, &(t, w)) in self.atoms.iter().enumerate() {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Parameter(format!("atom position {t} outside [0, 1]")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Parameter(format!("atom weight {w} must be positive")));
            }
            if self.atoms[..i].iter().any(|&(s, _)| s == t) {
                return Err(Error::Parameter(format!("duplicate atom at {t}")));
            }
        }
        if let Some(d) = &self.density {
            quadrature::check_exponents(d.exp0, d.exp1)?;
            if !(d.coeff > 0.0 && d.coeff.is_finite()) {
                return Err(Error::Parameter(format!("density coefficient {} must be positive", d.coeff)));
            }
        }
        Ok(())
    }

    /// Atoms followed by the weighted quadrature nodes of the density.
    pub fn discretize(&self, order: usize) -> Result<Vec<(f64, f64)>> {
        let mut out = self.atoms.clone();
        if let Some(d) = &self.density {
            let rule = gauss_jacobi_rule(d.exp0, d.exp1, order)?;
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let s = d.smooth.as_ref().map_or(1.0, |g| (g.0)(t));
                out.push((t, d.coeff * w * s));
            }
        }
        Ok(out)
    }
}

/// Total mass of the measure (atoms plus Gauss–Jacobi integral of the density).
pub fn measure_mass(nu: &MeasureSpec) -> Result<f64> {
    measure_mass_with_order(nu, DEFAULT_ORDER)
}

pub fn measure_mass_with_order(nu: &MeasureSpec, order: usize) -> Result<f64> {
    nu.validate()?;
    Ok(nu.discretize(order)?.iter().map(|&(_, w)| w).sum())
}

/// `∫ t dν(t)`, which equals `f'(1)` for the represented function.
pub fn measure_mean(nu: &MeasureSpec) -> Result<f64> {
    nu.validate()?;
    Ok(nu.discretize(DEFAULT_ORDER)?.iter().map(|&(t, w)| t * w).sum())
}

/// Closed forms of the catalog functions.
#[derive(Clone)]
pub enum ScalarForm {
    Power(f64),
    Arithmetic(f64),
    Harmonic(f64),
    Uniform,
    Custom(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for ScalarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarForm::Power(l) => write!(f, "Power({l})"),
            ScalarForm::Arithmetic(t) => write!(f, "Arithmetic({t})"),
            ScalarForm::Harmonic(t) => write!(f, "Harmonic({t})"),
            ScalarForm::Uniform => write!(f, "Uniform"),
            ScalarForm::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// A normalized matrix monotone function together with its representing measure.
#[derive(Clone, Debug)]
pub struct MonotoneFunction {
    pub name: String,
    pub param: Option<f64>,
    pub measure: MeasureSpec,
    pub scalar_form: ScalarForm,
    pub derivative_at_one: f64,
}

fn open_unit(what: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} = {x} must lie in (0, 1)")))
    }
}

impl MonotoneFunction {
    /// `z^λ`, measure `sin(λπ)/π · t^{λ-1} (1-t)^{-λ} dt`.
    pub fn power(lambda: f64) -> Result<Self> {
        open_unit("lambda", lambda)?;
        let coeff = (lambda * std::f64::consts::PI).sin() / std::f64::consts::PI;
        Ok(MonotoneFunction {
            name: "power".into(),
            param: Some(lambda),
            measure: MeasureSpec {
                atoms: vec![],
                density: Some(Density::jacobi(coeff, lambda - 1.0, -lambda)),
            },
            scalar_form: ScalarForm::Power(lambda),
            derivative_at_one: lambda,
        })
    }

    /// `(1 - t) + t z`, atoms at both endpoints.
    pub fn arithmetic(t: f64) -> Result<Self> {
        open_unit("t", t)?;
        Ok(MonotoneFunction {
            name: "arithmetic".into(),
            param: Some(t),
            measure: MeasureSpec {
                atoms: vec![(0.0, 1.0 - t), (1.0, t)],
                density: None,
            },
            scalar_form: ScalarForm::Arithmetic(t),
            derivative_at_one: t,
        })
    }

    /// `((1 - t) + t/z)^{-1}`, a single atom at `t`.
    pub fn harmonic(t: f64) -> Result<Self> {
        open_unit("t", t)?;
        Ok(MonotoneFunction {
            name: "harmonic".into(),
            param: Some(t),
            measure: MeasureSpec {
                atoms: vec![(t, 1.0)],
                density: None,
            },
            scalar_form: ScalarForm::Harmonic(t),
            derivative_at_one: t,
        })
    }

    /// `z ln z / (z - 1)`, Lebesgue measure on `[0, 1]`.
    pub fn uniform() -> Self {
        MonotoneFunction {
            name: "uniform".into(),
            param: None,
            measure: MeasureSpec {
                atoms: vec![],
                density: Some(Density::jacobi(1.0, 0.0, 0.0)),
            },
            scalar_form: ScalarForm::Uniform,
            derivative_at_one: 0.5,
        }
    }

    /// A user-supplied function given by its measure and closed form.
    pub fn custom(
        name: impl Into<String>,
        measure: MeasureSpec,
        scalar: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let mass = measure_mass(&measure)?;
        if (mass - 1.0).abs() > 1e-10 {
            return Err(Error::Parameter(format!("measure has mass {mass}, expected 1")));
        }
        let derivative_at_one = measure_mean(&measure)?;
        Ok(MonotoneFunction {
            name: name.into(),
            param: None,
            measure,
            scalar_form: ScalarForm::Custom(Arc::new(scalar)),
            derivative_at_one,
        })
    }

    /// Short label such as `power(0.5)` or `uniform`.
    pub fn label(&self) -> String {
        match self.param {
            Some(p) => format!("{}({})", self.name, p),
            None => self.name.clone(),
        }
    }
}

/// Looks up a catalog function: `power`, `arithmetic`, `harmonic` (each with a parameter in
/// (0, 1)) or `uniform`.
pub fn catalog(name: &str, param: Option<f64>) -> Result<MonotoneFunction> {
    let need = |p: Option<f64>| p.ok_or_else(|| Error::Parameter(format!("{name} needs a parameter")));
    match name {
        "power" => MonotoneFunction::power(need(param)?),
        "arithmetic" => MonotoneFunction::arithmetic(need(param)?),
        "harmonic" => MonotoneFunction::harmonic(need(param)?),
        "uniform" => Ok(MonotoneFunction::uniform()),
        _ => Err(Error::Parameter(format!("unknown function '{name}'"))),
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

/// `1 !_t z = ((1 - t) + t/z)^{-1}`.
fn harmonic_scalar(t: f64, z: Complex64) -> Complex64 {
    if t == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if t == 1.0 {
        z
    } else {
        z / (z * (1.0 - t) + t)
    }
}

fn uniform_scalar(z: Complex64) -> Complex64 {
    let u = z - 1.0;
    if u.norm() < 0.05 {
        // z ln z / (z - 1) = 1 + sum_k (-1)^{k+1} u^k / (k (k + 1))
        let mut sum = Complex64::new(1.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for k in 1..=18 {
            pow *= u;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += pow * (sign / (k * (k + 1)) as f64);
        }
        sum
    } else {
        z * z.ln() / u
    }
}

/// Closed-form principal-branch value `f(z)` for `z` off `(-inf, 0]`.
pub fn scalar_eval(f: &MonotoneFunction, z: Complex64) -> Result<Complex64> {
    if on_cut(z) || !z.is_finite() {
        return Err(Error::Domain(format!("{z}")));
    }
    Ok(match &f.scalar_form {
        ScalarForm::Power(l) => z.powf(*l),
        ScalarForm::Arithmetic(t) => z * *t + (1.0 - t),
        ScalarForm::Harmonic(t) => harmonic_scalar(*t, z),
        ScalarForm::Uniform => uniform_scalar(z),
        ScalarForm::Custom(g) => g(z),
    })
}

/// `∫ 1 !_t z dν_f(t)` by quadrature.
pub fn measure_scalar_eval(f: &MonotoneFunction, z: Complex64, order: usize) -> Result<Complex64> {
    if on_cut(z) || !z.is_finite() {
        return Err(Error::Domain(format!("{z}")));
    }
    Ok(f
        .measure
        .discretize(order)?
        .iter()
        .map(|&(t, w)| harmonic_scalar(t, z) * w)
        .sum())
}

fn require_accretive(a: &ComplexMatrix) -> Result<()> {
    let (ok, margin) = is_accretive(a);
    if ok {
        Ok(())
    } else {
        Err(Error::precondition("operand is not accretive", margin))
    }
}

fn harmonic_unit_raw(t: f64, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(a.dim()));
    }
    if t == 1.0 {
        return Ok(a.clone());
    }
    // ((1-t) I + t A^{-1})^{-1} = ((1-t) A + t I)^{-1} A
    let shifted = a.scale(1.0 - t).shift(Complex64::new(t, 0.0));
    lu_solve(&shifted, a).map_err(|e| match e {
        Error::Singular { magnitude, .. } => Error::numeric("singular harmonic-mean integrand", magnitude),
        other => other,
    })
}

/// `I !_t A = ((1 - t) I + t A^{-1})^{-1}`, with `I !_0 A = I` and `I !_1 A = A`.
pub fn harmonic_unit(t: f64, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("t = {t} outside [0, 1]")));
    }
    require_accretive(a)?;
    harmonic_unit_raw(t, a)
}

/// The quadrature sum of the integral representation at a fixed order, without
/// preconditions or convergence control.
///
/// Exactly Hermitian inputs are diagonalized first and the same sum is applied to
/// the eigenvalues.
pub fn apply_function_unchecked(f: &MonotoneFunction, a: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    a.ensure_finite()?;
    let pts = f.measure.discretize(order)?;
    if a.hermitian_defect() == 0.0 {
        let eig = hermitian_eigen(a)?;
        let vals: Vec<f64> = eig
            .values
            .iter()
            .map(|&v| {
                let z = Complex64::new(v, 0.0);
                pts.iter().map(|&(t, w)| (harmonic_scalar(t, z) * w).re).sum()
            })
            .collect();
        return Ok(eig.apply_values(&vals));
    }
    let mut out = ComplexMatrix::zeros(a.dim());
    for &(t, w) in &pts {
        out.axpy(Complex64::new(w, 0.0), &harmonic_unit_raw(t, a)?);
    }
    Ok(out)
}

/// Relative Frobenius change between two quadrature orders.
pub(crate) fn order_change(lo: &ComplexMatrix, hi: &ComplexMatrix) -> f64 {
    (lo - hi).norm_frobenius() / (1.0 + hi.norm_frobenius())
}

/// `f(A)` for accretive `A` via the harmonic-mean integral, at `order` nodes.
///
/// The sum is recomputed with twice as many nodes (capped at the maximum order) and a
/// relative change above [`CONVERGENCE_TOL`] is reported as a numeric failure. The
/// returned value is the one at `order`.
pub fn apply_function(f: &MonotoneFunction, a: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    require_accretive(a)?;
    let value = apply_function_unchecked(f, a, order)?;
    if f.measure.density.is_some() {
        let check = apply_function_unchecked(f, a, (2 * order).min(MAX_ORDER))?;
        let change = order_change(&value, &check);
        if change > CONVERGENCE_TOL {
            return Err(Error::numeric("quadrature did not converge under order doubling", change));
        }
    }
    let (ok, margin) = is_accretive(&value);
    if !ok && margin < -TAU_LOEWNER {
        return Err(Error::numeric("f(A) lost accretivity", margin));
    }
    Ok(value)
}
