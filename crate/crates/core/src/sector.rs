//! Accretivity and sector certification, and seeded generation of accretive ensembles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    accretivity_margin, hermitian_eigen, hermitian_eigenvalues, ComplexMatrix, TAU_LOEWNER,
};

/// Sector half-angle and real-part bounds `m I <= Re A <= M I`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorCertificate {
    pub alpha: f64,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
}

/// A seeded family of `count` random sectorial matrices of size `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub alpha_max: f64,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub count: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Parameter("ensemble dim must be at least 1".into()));
        }
        if self.count == 0 {
            return Err(Error::Parameter("ensemble count must be at least 1".into()));
        }
        if !(self.alpha_max >= 0.0 && self.alpha_max < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Parameter(format!(
                "alpha_max {} outside [0, pi/2)",
                self.alpha_max
            )));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::Parameter(format!("m = {} must be positive", self.m)));
        }
        if !(self.big_m >= self.m && self.big_m.is_finite()) {
            return Err(Error::Parameter(format!("M = {} must be at least m = {}", self.big_m, self.m)));
        }
        Ok(())
    }

    /// The positive-definite counterpart (`alpha_max = 0`).
    pub fn positive(&self) -> Self {
        EnsembleSpec {
            alpha_max: 0.0,
            ..*self
        }
    }
}

/// `(accretive, margin)` with margin `lambda_min(Re A) / (1 + ||A||_op)`.
pub fn is_accretive(a: &ComplexMatrix) -> (bool, f64) {
    match accretivity_margin(a) {
        Ok(margin) => (margin > TAU_LOEWNER, margin),
        Err(_) => (false, f64::NAN),
    }
}

fn require_accretive(a: &ComplexMatrix) -> Result<()> {
    let (ok, margin) = is_accretive(a);
    if ok {
        Ok(())
    } else {
        Err(Error::precondition("matrix is not accretive", margin))
    }
}

/// Least `alpha` with `W(A)` inside the sector `S_alpha`.
///
/// Computed as `atan` of the spectral radius of `P^{-1/2} (Im A) P^{-1/2}`, `P = Re A`.
pub fn sectorial_angle(a: &ComplexMatrix) -> Result<f64> {
    require_accretive(a)?;
    let p = hermitian_eigen(&a.hermitian_part())?;
    let p_inv_half = p.apply(|v| 1.0 / v.sqrt());
    let k = &(&p_inv_half * &a.imaginary_part()) * &p_inv_half;
    let ev = hermitian_eigenvalues(&k.hermitian_part())?;
    let rho = ev[0].abs().max(ev[ev.len() - 1].abs());
    Ok(rho.atan())
}

/// `(lambda_min(Re A), lambda_max(Re A))`.
pub fn re_bounds(a: &ComplexMatrix) -> Result<(f64, f64)> {
    require_accretive(a)?;
    let ev = hermitian_eigenvalues(&a.hermitian_part())?;
    Ok((ev[0], ev[ev.len() - 1]))
}

pub fn certify(a: &ComplexMatrix) -> Result<SectorCertificate> {
    let alpha = sectorial_angle(a)?;
    let (m, big_m) = re_bounds(a)?;
    Ok(SectorCertificate { alpha, m, big_m })
}

/// Independent generator for member `index` of the stream keyed by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_ginibre(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| gaussian(rng))
}

/// Haar-distributed unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_ginibre(rng, n);
    orthonormalize_columns(&g, n)
}

/// First `r` columns of the Q factor of `g` (modified Gram-Schmidt, reorthogonalized).
pub(crate) fn orthonormal_columns(g: &ComplexMatrix, r: usize) -> Vec<Vec<Complex64>> {
    let n = g.dim();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(r);
    for j in 0..r {
        let mut v: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        cols.push(v);
    }
    cols
}

fn orthonormalize_columns(g: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let cols = orthonormal_columns(g, n);
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

/// Random Hermitian positive semidefinite `G G* / n`, possibly rank deficient when `rank < n`.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> ComplexMatrix {
    let rank = rank.clamp(1, n);
    let g: Vec<Vec<Complex64>> = (0..rank)
        .map(|_| (0..n).map(|_| gaussian(rng)).collect())
        .collect();
    let p = ComplexMatrix::from_fn(n, |i, j| {
        g.iter().map(|col| col[i] * col[j].conj()).sum::<Complex64>() / n as f64
    });
    p.hermitian_part()
}

/// Random invertible matrix `U diag(s) V` with singular values `s` in `[0.5, 2]`.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let s: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..=2.0)).collect();
    &(&u * &ComplexMatrix::from_real_diag(&s)) * &v
}

/// Hermitian matrix with eigenvalues drawn uniformly from `[lo, hi]` in a Haar-random basis.
pub fn random_hermitian_spectrum(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let d: Vec<f64> = (0..n)
        .map(|_| if hi > lo { rng.random_range(lo..=hi) } else { lo })
        .collect();
    conjugate_diag(&u, &d)
}

fn conjugate_diag(u: &ComplexMatrix, d: &[f64]) -> ComplexMatrix {
    let n = u.dim();
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| u[(i, k)] * u[(j, k)].conj() * d[k]).sum()
    })
    .hermitian_part()
}

/// Draws `P^{1/2} (I + iT) P^{1/2}` with `m <= P <= M` and `||T||_op = u tan(alpha_max)`.
pub fn draw_sectorial(rng: &mut impl Rng, spec: &EnsembleSpec) -> ComplexMatrix {
    let n = spec.dim;
    let u = random_unitary(rng, n);
    let d: Vec<f64> = (0..n)
        .map(|_| {
            if spec.big_m > spec.m {
                rng.random_range(spec.m..=spec.big_m)
            } else {
                spec.m
            }
        })
        .collect();
    let p = conjugate_diag(&u, &d);
    if spec.alpha_max == 0.0 {
        return p;
    }
    let sqrt_d: Vec<f64> = d.iter().map(|v| v.sqrt()).collect();
    let p_half = conjugate_diag(&u, &sqrt_d);

    let g = random_ginibre(rng, n);
    let t_raw = (&g + &g.adjoint()).scale(0.5);
    let ev = hermitian_eigenvalues(&t_raw).expect("finite Hermitian matrix");
    let rho = ev[0].abs().max(ev[n - 1].abs());
    let target = rng.random::<f64>() * spec.alpha_max.tan();
    let t = if rho > 0.0 {
        t_raw.scale(target / rho)
    } else {
        t_raw
    };
    let h = (&(&p_half * &t) * &p_half).hermitian_part();
    &p + &h.scale_complex(Complex64::new(0.0, 1.0))
}

fn check_index(spec: &EnsembleSpec, index: usize) -> Result<()> {
    spec.validate()?;
    if index >= spec.count {
        return Err(Error::Parameter(format!(
            "index {index} outside ensemble of {} members",
            spec.count
        )));
    }
    Ok(())
}

/// Member `index` of the ensemble, a deterministic function of `(seed, index)`.
pub fn random_sectorial(spec: &EnsembleSpec, index: usize) -> Result<ComplexMatrix> {
    check_index(spec, index)?;
    Ok(draw_sectorial(&mut sample_rng(spec.seed, index as u64), spec))
}

/// Hermitian positive-definite member `index`, i.e. `random_sectorial` with `alpha_max = 0`.
pub fn random_pd(spec: &EnsembleSpec, index: usize) -> Result<ComplexMatrix> {
    random_sectorial(&spec.positive(), index)
}
