use std::fmt;
use std::str::FromStr;

use super::{hermitian_eigenvalues, ComplexMatrix};
use crate::error::{Error, Result};

/// Ascending singular values, computed from the spectrum of `A* A`.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    a.ensure_finite()?;
    let gram = &a.adjoint() * a;
    let ev = hermitian_eigenvalues(&gram)?;
    Ok(ev.into_iter().map(|v| v.max(0.0).sqrt()).collect())
}

/// Normalized unitarily invariant norms, each a symmetric gauge function of the singular values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Operator,
    Frobenius,
    Trace,
    /// Sum of the `k` largest singular values.
    KyFan(usize),
}

impl NormKind {
    /// Applies the gauge function to ascending singular values.
    pub fn gauge(&self, sv: &[f64]) -> Result<f64> {
        let n = sv.len();
        Ok(match *self {
            NormKind::Operator => sv.last().copied().unwrap_or(0.0),
            NormKind::Frobenius => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
            NormKind::Trace => sv.iter().sum(),
            NormKind::KyFan(k) => {
                if k == 0 || k > n {
                    return Err(Error::Parameter(format!("Ky Fan index {k} outside [1, {n}]")));
                }
                sv[n - k..].iter().sum()
            }
        })
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Operator => write!(f, "operator"),
            NormKind::Frobenius => write!(f, "frobenius"),
            NormKind::Trace => write!(f, "trace"),
            NormKind::KyFan(k) => write!(f, "kyfan:{k}"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    /// Parses `operator`, `frobenius`, `trace` or `kyfan:K`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "operator" => Ok(NormKind::Operator),
            "frobenius" => Ok(NormKind::Frobenius),
            "trace" => Ok(NormKind::Trace),
            _ => {
                let k = s
                    .strip_prefix("kyfan:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parameter(format!("unknown norm kind '{s}'")))?;
                if k == 0 {
                    return Err(Error::Parameter("Ky Fan index must be at least 1".into()));
                }
                Ok(NormKind::KyFan(k))
            }
        }
    }
}

pub fn uinorm(a: &ComplexMatrix, kind: NormKind) -> Result<f64> {
    if let NormKind::Frobenius = kind {
        a.ensure_finite()?;
        return Ok(a.norm_frobenius());
    }
    kind.gauge(&singular_values(a)?)
}

/// Spectral norm, the largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> Result<f64> {
    uinorm(a, NormKind::Operator)
}
