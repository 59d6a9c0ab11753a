#![allow(dead_code)]

use accretive::sector::EnsembleSpec;
use accretive::ComplexMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub const DIMS: [usize; 5] = [1, 2, 3, 5, 8];
pub const ANGLES: [f64; 4] = [
    0.0,
    std::f64::consts::FRAC_PI_6,
    std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_3,
];

pub fn spec(dim: usize, alpha_max: f64, count: usize, seed: u64) -> EnsembleSpec {
    EnsembleSpec {
        dim,
        alpha_max,
        m: 1.0,
        big_m: 4.0,
        count,
        seed,
    }
}

pub fn to_na(a: &ComplexMatrix) -> DMatrix<Complex64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a[(i, j)])
}

pub fn from_na(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), |i, j| m[(i, j)])
}

pub fn na_op_norm(m: &DMatrix<Complex64>) -> f64 {
    m.singular_values().max()
}

/// `||X - Y||_op / (1 + ||X||_op + ||Y||_op)` computed with nalgebra.
pub fn rel_dev(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let (x, y) = (to_na(x), to_na(y));
    na_op_norm(&(&x - &y)) / (1.0 + na_op_norm(&x) + na_op_norm(&y))
}

/// Hermitian functional calculus with nalgebra's eigensolver.
pub fn herm_apply(h: &ComplexMatrix, g: impl Fn(f64) -> f64) -> ComplexMatrix {
    let h = to_na(h);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(g(v), 0.0)));
    from_na(&(&eig.eigenvectors * d * eig.eigenvectors.adjoint()))
}

pub fn herm_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let h = to_na(h);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Smallest eigenvalue of `Y - X`, Hermitian parts taken.
pub fn gap(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    herm_eigenvalues(&(y - x).hermitian_part())[0]
}

pub fn na_inverse(a: &ComplexMatrix) -> ComplexMatrix {
    from_na(&to_na(a).try_inverse().expect("invertible"))
}

/// `A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}` for Hermitian positive definite `A`, `B`.
pub fn kubo_ando(a: &ComplexMatrix, b: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let half = herm_apply(a, f64::sqrt);
    let inv_half = herm_apply(a, |v| 1.0 / v.sqrt());
    let c = &(&inv_half * b) * &inv_half;
    &(&half * &herm_apply(&c, f)) * &half
}

/// Closed forms of the catalog functions on the positive axis.
pub fn scalar(name: &str, p: f64, x: f64) -> f64 {
    match name {
        "power" => x.powf(p),
        "arithmetic" => (1.0 - p) + p * x,
        "harmonic" => x / ((1.0 - p) * x + p),
        "uniform" => {
            if (x - 1.0).abs() < 1e-12 {
                1.0
            } else {
                x * x.ln() / (x - 1.0)
            }
        }
        _ => unreachable!("{name}"),
    }
}

/// Closed forms on the cut plane, principal branch.
pub fn scalar_complex(name: &str, p: f64, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match name {
        "power" => (z.ln() * p).exp(),
        "arithmetic" => one * (1.0 - p) + z * p,
        "harmonic" => z / (z * (1.0 - p) + p),
        "uniform" => z * z.ln() / (z - one),
        _ => unreachable!("{name}"),
    }
}

/// `(name, param)` pairs of the catalog functions under test.
pub const CATALOG: [(&str, f64); 6] = [
    ("power", 0.3),
    ("power", 0.5),
    ("power", 0.7),
    ("uniform", f64::NAN),
    ("harmonic", 0.4),
    ("arithmetic", 0.6),
];

pub fn catalog_fn(name: &str, p: f64) -> accretive::funcalc::MonotoneFunction {
    accretive::funcalc::catalog(name, (!p.is_nan()).then_some(p)).unwrap()
}

/// Least `phi` with `W(A)` in the sector of half-angle `phi`, by bisection on the
/// positivity of `sin(phi) Re A -/+ cos(phi) Im A`.
pub fn sector_angle_oracle(a: &ComplexMatrix) -> f64 {
    let re = a.hermitian_part();
    let im = a.imaginary_part();
    let inside = |phi: f64| {
        let (s, c) = phi.sin_cos();
        let up = &re.scale(s) - &im.scale(c);
        let down = &re.scale(s) + &im.scale(c);
        herm_eigenvalues(&up)[0] >= 0.0 && herm_eigenvalues(&down)[0] >= 0.0
    };
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    if inside(0.0) {
        return 0.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
