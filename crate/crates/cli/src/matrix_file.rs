use std::fs;
use std::path::Path;

use accretive::{ComplexMatrix, Error};
use serde::{Deserialize, Serialize};

/// On-disk matrix: real and imaginary parts as separate row arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        let n = a.dim();
        let row = |i: usize, part: fn(&num_complex::Complex64) -> f64| {
            (0..n).map(|j| part(&a[(i, j)])).collect::<Vec<f64>>()
        };
        MatrixFile {
            n,
            re: (0..n).map(|i| row(i, |z| z.re)).collect(),
            im: (0..n).map(|i| row(i, |z| z.im)).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, Error> {
        let square = |rows: &Vec<Vec<f64>>| rows.len() == self.n && rows.iter().all(|r| r.len() == self.n);
        if self.n == 0 || !square(&self.re) || !square(&self.im) {
            return Err(Error::InvalidInput(format!("re and im must both be {0}x{0}", self.n)));
        }
        ComplexMatrix::from_parts(&self.re, &self.im)
    }

    pub fn read(path: &Path) -> Result<ComplexMatrix, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let file: MatrixFile = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        file.to_matrix().map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn write(a: &ComplexMatrix, path: &Path) -> Result<(), String> {
        let mut text = serde_json::to_string_pretty(&MatrixFile::from_matrix(a)).map_err(|e| e.to_string())?;
        text.push('\n');
        fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
