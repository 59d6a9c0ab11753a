use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use statrs::function::beta::beta;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 512;

/// Gauss rule for the weight `t^exp0 (1 - t)^exp1` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

type RuleKey = (u64, u64, usize);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn check_exponents(exp0: f64, exp1: f64) -> Result<()> {
    if !(exp0 > -1.0 && exp1 > -1.0 && exp0.is_finite() && exp1.is_finite()) {
        return Err(Error::Parameter(format!(
            "Jacobi exponents ({exp0}, {exp1}) must both exceed -1"
        )));
    }
    Ok(())
}

/// Gauss–Jacobi rule built by Golub–Welsch; memoized per `(exp0, exp1, order)`.
pub fn gauss_jacobi_rule(exp0: f64, exp1: f64, order: usize) -> Result<Arc<QuadratureRule>> {
    check_exponents(exp0, exp1)?;
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::Parameter(format!(
            "quadrature order {order} outside [{MIN_ORDER}, {MAX_ORDER}]"
        )));
    }
    let key = (exp0.to_bits(), exp1.to_bits(), order);
    if let Some(rule) = cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(golub_welsch(exp0, exp1, order)?);
    cache().lock().unwrap().insert(key, Arc::clone(&rule));
    Ok(rule)
}

// Monic Jacobi recurrence on [-1, 1] for (1 - x)^a (1 + x)^b, mapped by t = (1 + x)/2.
// The exponent of t is b and that of (1 - t) is a.
fn golub_welsch(exp0: f64, exp1: f64, order: usize) -> Result<QuadratureRule> {
    let (a, b) = (exp1, exp0);
    let ab = a + b;
    let diag = |k: usize| -> f64 {
        let k = k as f64;
        if k == 0.0 {
            (b - a) / (ab + 2.0)
        } else {
            let s = 2.0 * k + ab;
            (b * b - a * a) / (s * (s + 2.0))
        }
    };
    let offdiag_sq = |k: usize| -> f64 {
        let k = k as f64;
        if k == 1.0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * k + ab;
            4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
        }
    };

    let n = order;
    let mut jm = ComplexMatrix::zeros(n);
    for i in 0..n {
        jm[(i, i)] = Complex64::new((1.0 + diag(i)) / 2.0, 0.0);
        if i + 1 < n {
            let e = offdiag_sq(i + 1).sqrt() / 2.0;
            jm[(i, i + 1)] = Complex64::new(e, 0.0);
            jm[(i + 1, i)] = Complex64::new(e, 0.0);
        }
    }
    let eig = hermitian_eigen(&jm)?;
    let mu0 = beta(exp0 + 1.0, exp1 + 1.0);
    let nodes = eig.values.clone();
    let first: Vec<f64> = (0..n).map(|j| eig.vectors[(0, j)].norm_sqr()).collect();
    let total: f64 = first.iter().sum();
    let weights: Vec<f64> = first.iter().map(|v| mu0 * v / total).collect();
    if nodes.iter().any(|&t| !(t > 0.0 && t < 1.0)) || weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::numeric("Gauss-Jacobi nodes left (0, 1)", f64::NAN));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order,
    })
}
