use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;
const OFF_TOL: f64 = 1e-14;

/// Spectral decomposition `H = U diag(values) U*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `U diag(g(values)) U*`, the Hermitian functional calculus.
    pub fn apply(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let gv: Vec<f64> = self.values.iter().map(|&v| g(v)).collect();
        self.apply_values(&gv)
    }

    /// `U diag(d) U*` for a real vector `d` paired with the eigenvalues.
    pub fn apply_values(&self, d: &[f64]) -> ComplexMatrix {
        let n = self.values.len();
        let u = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += u[(i, k)] * u[(j, k)].conj() * d[k];
                }
                if i == j {
                    out[(i, i)] = Complex64::new(s.re, 0.0);
                } else {
                    out[(i, j)] = s;
                    out[(j, i)] = s.conj();
                }
            }
        }
        out
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    h.ensure_finite()?;
    let defect = h.hermitian_defect();
    if defect > 1e-12 * (1.0 + h.norm_inf()) {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(h.hermitian_part())
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let a = check_hermitian(h)?;
    let (values, vectors) = jacobi(a, true)?;
    Ok(HermitianEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Ascending eigenvalues only; skips accumulating the rotations.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let a = check_hermitian(h)?;
    Ok(jacobi(a, false)?.0)
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(h: ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = h.dim();
    let fro = h.norm_frobenius();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let mut converged = n == 1 || fro == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let b = a[p * n + q];
                let absb = b.norm();
                if absb == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // rotation negligible relative to both diagonal entries
                if absb < 1e-18 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let e = b / absb;
                let ebar = e.conj();
                let tau = (aqq - app) / (2.0 * absb);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- A G with G = [[c, s], [-s ebar, c ebar]]
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * ebar * s;
                    a[k * n + q] = akp * s + akq * ebar * c;
                }
                // A <- G* A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * e * s;
                    a[q * n + k] = apk * s + aqk * e * c;
                }
                a[p * n + p] = Complex64::new(app - t * absb, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * absb, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * ebar * s;
                        v[(k, q)] = vkp * s + vkq * ebar * c;
                    }
                }
            }
        }
        converged = off_diagonal_mass(&a, n) <= OFF_TOL * fro;
    }
    if !converged {
        let off = off_diagonal_mass(&a, n);
        // rounding can stall a hair above the target; anything near machine precision is usable
        if off > 1e-12 * fro {
            return Err(Error::numeric("Jacobi sweeps did not converge", off / fro));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]));
    Ok((values, vectors))
}
