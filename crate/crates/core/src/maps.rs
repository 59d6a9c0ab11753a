//! Positive linear maps `Φ: M_n -> M_r`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::sector::{random_unit_vector, sample_rng};

/// Dense `rows × cols` complex matrix, used for Kraus operators `V: C^r -> C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rect {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Rect {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {rows}x{cols} entries, got {}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("Kraus operator has non-finite entries".into()));
        }
        Ok(Rect { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    /// `V* A V`.
    fn sandwich(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let (n, r) = (self.rows, self.cols);
        // AV is n × r
        let mut av = vec![Complex64::new(0.0, 0.0); n * r];
        for i in 0..n {
            for k in 0..n {
                let aik = a[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..r {
                    av[i * r + j] += aik * self.get(k, j);
                }
            }
        }
        ComplexMatrix::from_fn(r, |p, q| (0..n).map(|i| self.get(i, p).conj() * av[i * r + q]).sum())
    }
}

/// The generator families of positive linear maps.
#[derive(Clone, Debug, PartialEq)]
pub enum PositiveLinearMap {
    /// `V* A V` for `V` with orthonormal columns.
    Compression(Rect),
    /// `Σ V_i* A V_i`.
    Kraus(Vec<Rect>),
    /// Block-diagonal restriction to the given index blocks (0-based).
    Pinching { dim: usize, blocks: Vec<Vec<usize>> },
    /// `<A x, x>` as a 1×1 matrix.
    VectorState(Vec<Complex64>),
    /// `tr(A)/n` as a 1×1 matrix.
    NormalizedTrace { dim: usize },
}

impl PositiveLinearMap {
    pub fn compression(v: Rect) -> Result<Self> {
        if v.cols > v.rows {
            return Err(Error::Parameter("compression needs at most as many columns as rows".into()));
        }
        Ok(PositiveLinearMap::Compression(v))
    }

    pub fn kraus(ops: Vec<Rect>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::Parameter("Kraus map needs at least one operator".into()))?;
        if ops.iter().any(|v| v.rows != first.rows || v.cols != first.cols) {
            return Err(Error::Parameter("Kraus operators must share one shape".into()));
        }
        Ok(PositiveLinearMap::Kraus(ops))
    }

    /// Pinching onto a partition of `0..dim`.
    pub fn pinching(dim: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; dim];
        for &i in blocks.iter().flatten() {
            if i >= dim || seen[i] {
                return Err(Error::Parameter(format!("blocks do not partition 0..{dim}")));
            }
            seen[i] = true;
        }
        if dim == 0 || seen.iter().any(|s| !s) {
            return Err(Error::Parameter(format!("blocks do not partition 0..{dim}")));
        }
        Ok(PositiveLinearMap::Pinching { dim, blocks })
    }

    pub fn vector_state(x: Vec<Complex64>) -> Result<Self> {
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if x.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("vector state needs a unit vector, norm {norm}")));
        }
        Ok(PositiveLinearMap::VectorState(x))
    }

    pub fn input_dim(&self) -> usize {
        match self {
            PositiveLinearMap::Compression(v) => v.rows,
            PositiveLinearMap::Kraus(ops) => ops[0].rows,
            PositiveLinearMap::Pinching { dim, .. } => *dim,
            PositiveLinearMap::VectorState(x) => x.len(),
            PositiveLinearMap::NormalizedTrace { dim } => *dim,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            PositiveLinearMap::Compression(v) => v.cols,
            PositiveLinearMap::Kraus(ops) => ops[0].cols,
            PositiveLinearMap::Pinching { dim, .. } => *dim,
            PositiveLinearMap::VectorState(_) | PositiveLinearMap::NormalizedTrace { .. } => 1,
        }
    }
}

/// `Φ(A)`.
pub fn apply_map(phi: &PositiveLinearMap, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != phi.input_dim() {
        return Err(Error::Parameter(format!(
            "map expects dimension {}, got {}",
            phi.input_dim(),
            a.dim()
        )));
    }
    Ok(match phi {
        PositiveLinearMap::Compression(v) => v.sandwich(a),
        PositiveLinearMap::Kraus(ops) => {
            let mut out = ComplexMatrix::zeros(ops[0].cols);
            for v in ops {
                out += &v.sandwich(a);
            }
            out
        }
        PositiveLinearMap::Pinching { dim, blocks } => {
            let mut out = ComplexMatrix::zeros(*dim);
            for block in blocks {
                for &i in block {
                    for &j in block {
                        out[(i, j)] = a[(i, j)];
                    }
                }
            }
            out
        }
        PositiveLinearMap::VectorState(x) => ComplexMatrix::scalar(a.inner(x)),
        PositiveLinearMap::NormalizedTrace { dim } => ComplexMatrix::scalar(a.trace() / *dim as f64),
    })
}

/// `||Φ(I) - I||_inf <= 1e-12`.
pub fn is_unital(phi: &PositiveLinearMap) -> bool {
    let n = phi.input_dim();
    let Ok(img) = apply_map(phi, &ComplexMatrix::identity(n)) else {
        return false;
    };
    (&img - &ComplexMatrix::identity(img.dim())).norm_inf() <= 1e-12
}

/// Families understood by [`random_map`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapVariant {
    Compression,
    Kraus,
    /// Kraus map with `Σ V_i* V_i != I`.
    KrausNonUnital,
    Pinching,
    VectorState,
    NormalizedTrace,
}

impl MapVariant {
    pub const ALL: [MapVariant; 6] = [
        MapVariant::Compression,
        MapVariant::Kraus,
        MapVariant::KrausNonUnital,
        MapVariant::Pinching,
        MapVariant::VectorState,
        MapVariant::NormalizedTrace,
    ];

    pub fn is_unital(&self) -> bool {
        !matches!(self, MapVariant::KrausNonUnital)
    }

    /// Output dimension used for an input of size `n` when none is requested.
    pub fn default_output_dim(&self, n: usize) -> usize {
        match self {
            MapVariant::Compression | MapVariant::Kraus | MapVariant::KrausNonUnital => n.div_ceil(2),
            MapVariant::Pinching => n,
            MapVariant::VectorState | MapVariant::NormalizedTrace => 1,
        }
    }
}

impl fmt::Display for MapVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapVariant::Compression => "compression",
            MapVariant::Kraus => "kraus",
            MapVariant::KrausNonUnital => "kraus_nonunital",
            MapVariant::Pinching => "pinching",
            MapVariant::VectorState => "vector_state",
            MapVariant::NormalizedTrace => "normalized_trace",
        })
    }
}

impl FromStr for MapVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapVariant::ALL
            .into_iter()
            .find(|v| v.to_string() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown map variant '{s}'")))
    }
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(rand_distr::StandardNormal);
    let im: f64 = rng.sample(rand_distr::StandardNormal);
    Complex64::new(re, im)
}

// Random `len × cols` matrix with orthonormal columns, as a row-major Vec.
fn random_isometry(rng: &mut impl Rng, len: usize, cols: usize) -> Vec<Complex64> {
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for _ in 0..cols {
        let mut v: Vec<Complex64> = (0..len).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &q {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        q.push(v);
    }
    (0..len * cols).map(|k| q[k % cols][k / cols]).collect()
}

const KRAUS_TERMS: usize = 3;

/// Draws a map of the requested family from a caller-provided generator.
pub fn random_map_with(rng: &mut impl Rng, dim_in: usize, dim_out: usize, variant: MapVariant) -> Result<PositiveLinearMap> {
    if dim_in == 0 || dim_out == 0 {
        return Err(Error::Parameter("map dimensions must be positive".into()));
    }
    match variant {
        MapVariant::Compression => {
            if dim_out > dim_in {
                return Err(Error::Parameter(format!(
                    "compression needs dim_out <= dim_in, got {dim_out} > {dim_in}"
                )));
            }
            let v = Rect::new(dim_in, dim_out, random_isometry(rng, dim_in, dim_out))?;
            PositiveLinearMap::compression(v)
        }
        MapVariant::Kraus | MapVariant::KrausNonUnital => {
            // stacking the operators gives an isometry, so Σ V_i* V_i = I
            let stacked = random_isometry(rng, KRAUS_TERMS * dim_in, dim_out);
            let block = dim_in * dim_out;
            let mut ops = Vec::with_capacity(KRAUS_TERMS);
            for k in 0..KRAUS_TERMS {
                let mut data = stacked[k * block..(k + 1) * block].to_vec();
                if variant == MapVariant::KrausNonUnital {
                    let s: f64 = rng.random_range(0.3..1.5);
                    data.iter_mut().for_each(|z| *z *= s);
                }
                ops.push(Rect::new(dim_in, dim_out, data)?);
            }
            PositiveLinearMap::kraus(ops)
        }
        MapVariant::Pinching => {
            if dim_out != dim_in {
                return Err(Error::Parameter("pinching needs dim_out == dim_in".into()));
            }
            let mut blocks = Vec::new();
            let mut start = 0;
            while start < dim_in {
                let len = rng.random_range(1..=(dim_in - start).min(3));
                blocks.push((start..start + len).collect());
                start += len;
            }
            PositiveLinearMap::pinching(dim_in, blocks)
        }
        MapVariant::VectorState | MapVariant::NormalizedTrace => {
            if dim_out != 1 {
                return Err(Error::Parameter(format!("{variant} maps into 1x1 matrices")));
            }
            if variant == MapVariant::VectorState {
                PositiveLinearMap::vector_state(random_unit_vector(rng, dim_in))
            } else {
                Ok(PositiveLinearMap::NormalizedTrace { dim: dim_in })
            }
        }
    }
}

/// Deterministic random map for `seed`.
pub fn random_map(dim_in: usize, dim_out: usize, variant: MapVariant, seed: u64) -> Result<PositiveLinearMap> {
    random_map_with(&mut ChaCha20Rng::seed_from_u64(seed), dim_in, dim_out, variant)
}

/// Map number `index` of the stream keyed by `seed`.
pub fn random_map_indexed(dim_in: usize, dim_out: usize, variant: MapVariant, seed: u64, index: u64) -> Result<PositiveLinearMap> {
    random_map_with(&mut sample_rng(seed, index), dim_in, dim_out, variant)
}
