use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative pivot threshold below which a matrix is declared singular.
const PIVOT_TOL: f64 = 1e-13;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        a.ensure_finite()?;
        let n = a.dim();
        let scale = a.norm_inf();
        let tol = PIVOT_TOL * scale;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, mag) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if mag <= tol || mag == 0.0 {
                return Err(Error::Singular {
                    pivot: k,
                    magnitude: mag,
                });
            }
            lu.swap_rows(k, p);
            perm.swap(k, p);
            let inv = lu[(k, k)].inv();
            for i in (k + 1)..n {
                let l = lu[(i, k)] * inv;
                lu[(i, k)] = l;
                if l.re == 0.0 && l.im == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.lu.dim();
        assert_eq!(n, b.dim(), "dimension mismatch in solve");
        let mut x = ComplexMatrix::zeros(n);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for (i, &p) in self.perm.iter().enumerate() {
                col[i] = b[(p, c)];
            }
            self.solve_in_place(&mut col);
            for i in 0..n {
                x[(i, c)] = col[i];
            }
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.lu.dim();
        let mut x = ComplexMatrix::zeros(n);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for (i, &p) in self.perm.iter().enumerate() {
                col[i] = if p == c {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            self.solve_in_place(&mut col);
            for i in 0..n {
                x[(i, c)] = col[i];
            }
        }
        x
    }

    // forward then back substitution on an already permuted right-hand side
    fn solve_in_place(&self, col: &mut [Complex64]) {
        let n = col.len();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = col[i];
            for j in 0..i {
                s -= row[j] * col[j];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = col[i];
            for j in (i + 1)..n {
                s -= row[j] * col[j];
            }
            col[i] = s / row[i];
        }
    }
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.ensure_same_dim(b)?;
    b.ensure_finite()?;
    Ok(Lu::factor(a)?.solve(b))
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::factor(a)?.inverse())
}
