use num_complex::Complex64;
use rand::Rng;

use super::catalog::{CheckId, EnsembleKind, MapNeed};
use super::{kantorovich_constant, CheckParams};
use crate::error::{Error, Result};
use crate::funcalc::{apply_function_unchecked, scalar_eval, MonotoneFunction};
use crate::linalg::{inverse, loewner_leq, op_norm, relative_deviation, uinorm, ComplexMatrix, NormKind};
use crate::maps::{apply_map, random_map_indexed, PositiveLinearMap};
use crate::means::{
    arithmetic_mean, congruence_sigma, geometric_neg_congruence, geometric_neg_unchecked,
    half_line_geometric, harmonic_mean_unchecked, sigma_mean_unchecked, GeometricPaths as PathSet,
};
use crate::sector::{draw_sectorial, random_invertible, random_psd, random_unit_vector, sample_rng, sectorial_angle, EnsembleSpec};

/// Margin of one sample and whether it was flagged.
pub(super) struct SampleOutcome {
    pub margin: f64,
    pub flagged: bool,
}

// Per-sample generator streams; operands do not depend on the check, so checks sharing an
// ensemble see the same matrices.
const STREAMS: u64 = 8;
const STREAM_A: u64 = 0;
const STREAM_B: u64 = 1;
const STREAM_X: u64 = 2;
const STREAM_C: u64 = 3;
const STREAM_Q: u64 = 4;
const STREAM_S: u64 = 5;

fn stream(seed: u64, index: usize, which: u64) -> rand_chacha::ChaCha20Rng {
    sample_rng(seed, index as u64 * STREAMS + which)
}

fn scalar_margin(lhs: f64, rhs: f64) -> f64 {
    (rhs - lhs) / (1.0 + rhs.abs() + lhs.abs())
}

fn re(a: &ComplexMatrix) -> ComplexMatrix {
    a.hermitian_part()
}

fn leq(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    Ok(loewner_leq(&re(x), &re(y))?.margin)
}

fn inv(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    inverse(a).map_err(|e| match e {
        Error::Singular { magnitude, .. } => Error::numeric("singular operand", magnitude),
        other => other,
    })
}

// Ky Fan indices beyond the matrix size fall back to the trace norm.
fn norm(a: &ComplexMatrix, kind: NormKind) -> Result<f64> {
    let kind = match kind {
        NormKind::KyFan(k) if k > a.dim() => NormKind::KyFan(a.dim()),
        other => other,
    };
    uinorm(a, kind)
}

/// `a σ_f b = a f(b / a)` for scalars in the open right half-plane.
fn scalar_sigma(f: &MonotoneFunction, a: Complex64, b: Complex64) -> Result<Complex64> {
    Ok(a * scalar_eval(f, b / a)?)
}

fn real_f(f: &MonotoneFunction, x: f64) -> Result<f64> {
    Ok(scalar_eval(f, Complex64::new(x, 0.0))?.re)
}

/// `(m ∇_l M) / (m ♯_l M)` with `l = min(t, 1 - t)`.
fn gumus_constant(t: f64, m: f64, big_m: f64) -> f64 {
    let l = t.min(1.0 - t);
    ((1.0 - l) * m + l * big_m) / (m.powf(1.0 - l) * big_m.powf(l))
}

struct Sample<'a> {
    params: &'a CheckParams,
    spec: EnsembleSpec,
    index: usize,
    a: ComplexMatrix,
    b: ComplexMatrix,
    t: f64,
}

impl Sample<'_> {
    fn order(&self) -> usize {
        self.params.order
    }

    fn sigma(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        sigma_mean_unchecked(a, b, &self.params.f, self.order())
    }

    fn sigma_with(&self, f: &MonotoneFunction, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        sigma_mean_unchecked(a, b, f, self.order())
    }

    fn sharp(&self, a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        sigma_mean_unchecked(a, b, &MonotoneFunction::power(t)?, self.order())
    }

    fn har(&self, a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        harmonic_mean_unchecked(a, b, t)
    }

    fn ari(&self, a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        arithmetic_mean(a, b, t)
    }

    fn func(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        apply_function_unchecked(&self.params.f, a, self.order())
    }

    fn f_of(&self, x: f64) -> Result<f64> {
        real_f(&self.params.f, x)
    }

    fn g(&self) -> Result<&MonotoneFunction> {
        self.params
            .g
            .as_ref()
            .ok_or_else(|| Error::Parameter("check needs a second function g".into()))
    }

    fn norm_kind(&self) -> NormKind {
        self.params.norm.unwrap_or(NormKind::Operator)
    }

    fn map(&self) -> Result<PositiveLinearMap> {
        let mp = self
            .params
            .map
            .as_ref()
            .ok_or_else(|| Error::Parameter("check needs a positive linear map".into()))?;
        let n = self.spec.dim;
        let dim_out = mp.dim_out.unwrap_or_else(|| mp.variant.default_output_dim(n));
        random_map_indexed(n, dim_out, mp.variant, mp.seed, self.index as u64)
    }

    fn unit_vector(&self) -> Vec<Complex64> {
        random_unit_vector(&mut stream(self.spec.seed, self.index, STREAM_X), self.spec.dim)
    }

    fn second_weight(&self) -> f64 {
        stream(self.spec.seed, self.index, STREAM_S).random_range(0.05..0.95)
    }

    fn angle_a(&self) -> Result<f64> {
        sectorial_angle(&self.a)
    }

    fn angle_ab(&self) -> Result<f64> {
        Ok(self.angle_a()?.max(sectorial_angle(&self.b)?))
    }
}

/// Draws the operands of sample `index` and evaluates the margin of `id`.
pub(super) fn evaluate(id: CheckId, spec: &EnsembleSpec, params: &CheckParams, index: usize) -> Result<SampleOutcome> {
    let spec = match id.ensemble() {
        EnsembleKind::Sectorial => *spec,
        EnsembleKind::Positive => spec.positive(),
    };
    let a = draw_sectorial(&mut stream(spec.seed, index, STREAM_A), &spec);
    let b = draw_sectorial(&mut stream(spec.seed, index, STREAM_B), &spec);
    let s = Sample {
        params,
        spec,
        index,
        a,
        b,
        t: params.f.derivative_at_one,
    };
    let mut flagged = false;
    let margin = margin(id, &s, &mut flagged)?;
    if margin.is_nan() {
        return Err(Error::numeric("margin is not a number", f64::NAN));
    }
    Ok(SampleOutcome { margin, flagged })
}

fn check_map(id: CheckId, phi: &PositiveLinearMap) -> Result<()> {
    if id.map_need() == MapNeed::Unital && !crate::maps::is_unital(phi) {
        return Err(Error::Parameter(format!("{id} needs a unital map")));
    }
    Ok(())
}

fn margin(id: CheckId, s: &Sample, flagged: &mut bool) -> Result<f64> {
    use CheckId::*;
    let (a, b, t) = (&s.a, &s.b, s.t);
    let sec2 = |alpha: f64| 1.0 / alpha.cos().powi(2);
    Ok(match id {
        RealSuperadditive => leq(&s.sigma(&re(a), &re(b))?, &s.sigma(a, b)?)?,
        RealSectorReverse => {
            let k = sec2(s.angle_ab()?);
            leq(&s.sigma(a, b)?, &s.sigma(&re(a), &re(b))?.scale(k))?
        }
        Amgmhm => {
            let alpha = s.angle_ab()?;
            let c2 = alpha.cos().powi(2);
            let mid = s.sigma(a, b)?;
            let lo = leq(&s.har(a, b, t)?.scale(c2), &mid)?;
            let hi = leq(&mid, &s.ari(a, b, t)?.scale(sec2(alpha)))?;
            lo.min(hi)
        }
        MeanMonotone => {
            let alpha = s.angle_ab()?;
            let mut rng = stream(s.spec.seed, s.index, STREAM_Q);
            let n = s.spec.dim;
            let c = a + &random_psd(&mut rng, n, n).scale(s.spec.m);
            let d = b + &random_psd(&mut rng, n, n).scale(s.spec.m);
            let slack = alpha + 1e-10;
            *flagged = sectorial_angle(&c)? > slack || sectorial_angle(&d)? > slack;
            leq(&s.sigma(a, b)?, &s.sigma(&c, &d)?.scale(sec2(alpha)))?
        }
        Transformer => {
            let c = random_invertible(&mut stream(s.spec.seed, s.index, STREAM_C), s.spec.dim);
            let ch = c.adjoint();
            let lhs = &(&ch * &s.sigma(a, b)?) * &c;
            let rhs = s.sigma(&(&(&ch * a) * &c), &(&(&ch * b) * &c))?;
            -relative_deviation(&lhs, &rhs)?
        }
        Kantorovich => {
            let alpha = s.angle_ab()?;
            let phi = s.map()?;
            check_map(id, &phi)?;
            let x = apply_map(&phi, &re(&s.sigma(a, b)?))?;
            let y = apply_map(&phi, &re(&s.sigma_with(s.g()?, a, b)?))?;
            let lhs = op_norm(&(&x * &inv(&y)?))?;
            let rhs = kantorovich_constant(s.spec.m, s.spec.big_m)? / alpha.cos().powi(6);
            scalar_margin(lhs, rhs)
        }
        HarAndo => {
            let phi = s.map()?;
            check_map(id, &phi)?;
            let lhs = apply_map(&phi, &s.har(&re(a), &re(b), t)?)?;
            let rhs = s.har(&apply_map(&phi, a)?, &apply_map(&phi, b)?, t)?;
            leq(&lhs, &rhs)?
        }
        AndoSector => {
            let k = sec2(s.angle_ab()?);
            let phi = s.map()?;
            let lhs = apply_map(&phi, &s.sigma(a, b)?)?;
            let rhs = s.sigma(&apply_map(&phi, a)?, &apply_map(&phi, b)?)?;
            leq(&lhs, &rhs.scale(k))?
        }
        SigmaInner => {
            let k = sec2(s.angle_ab()?);
            let x = s.unit_vector();
            let lhs = s.sigma(a, b)?.inner(&x).re;
            let rhs = k * scalar_sigma(&s.params.f, a.inner(&x), b.inner(&x))?.re;
            scalar_margin(lhs, rhs)
        }
        SigmaNablaPhi => {
            let k = sec2(s.angle_ab()?);
            let phi = s.map()?;
            let lhs = apply_map(&phi, &s.sigma(a, b)?)?;
            let rhs = apply_map(&phi, &s.ari(a, b, t)?)?;
            leq(&lhs, &rhs.scale(k))?
        }
        FRealSuper => leq(&s.func(&re(a))?, &s.func(a)?)?,
        FRealReverse => {
            let k = sec2(s.angle_a()?);
            leq(&s.func(a)?, &s.func(&re(a))?.scale(k))?
        }
        ChoiSector => {
            let c2 = s.angle_a()?.cos().powi(2);
            let phi = s.map()?;
            check_map(id, &phi)?;
            let lhs = apply_map(&phi, &s.func(a)?)?.scale(c2);
            leq(&lhs, &s.func(&apply_map(&phi, a)?)?)?
        }
        FInner => {
            let k = sec2(s.angle_a()?);
            let x = s.unit_vector();
            let lhs = s.func(a)?.inner(&x).re;
            let rhs = k * scalar_eval(&s.params.f, a.inner(&x))?.re;
            scalar_margin(lhs, rhs)
        }
        FNabla => {
            let k = sec2(s.angle_ab()?);
            let lhs = s.ari(&s.func(a)?, &s.func(b)?, t)?;
            leq(&lhs, &s.func(&s.ari(a, b, t)?)?.scale(k))?
        }
        FSharpNabla => {
            let k = sec2(s.angle_ab()?).powi(2);
            let lhs = s.sharp(&s.func(a)?, &s.func(b)?, 0.5)?;
            leq(&lhs, &s.func(&s.ari(a, b, 0.5)?)?.scale(k))?
        }
        SharpRealSuper => leq(&s.sharp(&re(a), &re(b), t)?, &s.sharp(a, b, t)?)?,
        SharpSectorReverse => {
            let k = sec2(s.angle_ab()?);
            leq(&s.sharp(a, b, t)?, &s.sharp(&re(a), &re(b), t)?.scale(k))?
        }
        HarRealSuper => leq(&s.har(&re(a), &re(b), t)?, &s.har(a, b, t)?)?,
        HarSectorReverse => {
            let k = sec2(s.angle_ab()?);
            leq(&s.har(a, b, t)?, &s.har(&re(a), &re(b), t)?.scale(k))?
        }
        InvReal => leq(&inv(a)?, &inv(&re(a))?)?,
        InvSector => {
            let k = sec2(s.angle_a()?);
            leq(&inv(&re(a))?, &inv(a)?.scale(k))?
        }
        GumusA => {
            let kc = gumus_constant(t, s.spec.m, s.spec.big_m);
            leq(&s.ari(a, b, t)?, &s.sharp(a, b, t)?.scale(kc))?
        }
        GumusB => {
            let kc = gumus_constant(t, s.spec.m, s.spec.big_m);
            let k = sec2(s.angle_ab()?);
            leq(&s.sharp(a, b, t)?, &s.har(a, b, t)?.scale(k * kc))?
        }
        GumusC => {
            let kc = gumus_constant(t, s.spec.m, s.spec.big_m);
            let k = sec2(s.angle_ab()?);
            let shift = Complex64::new(s.spec.big_m * (kc - 1.0), 0.0);
            let mid = s.sharp(a, b, t)?;
            let lo = leq(&re(&s.ari(a, b, t)?).shift(-shift), &mid)?;
            let hi = leq(&mid, &re(&s.har(a, b, t)?).shift(shift).scale(k))?;
            lo.min(hi)
        }
        MixedGm => {
            let alpha = s.angle_ab()?;
            let g = s.sharp(&s.ari(a, b, 0.5)?, &s.har(a, b, 0.5)?, 0.5)?;
            let mid = s.sharp(a, b, 0.5)?;
            let lo = leq(&g.scale(alpha.cos().powi(3)), &mid)?;
            let hi = leq(&mid, &g.scale(sec2(alpha)))?;
            lo.min(hi)
        }
        MixedNs => {
            let k = sec2(s.angle_ab()?);
            let w = s.second_weight();
            let lhs = s.sharp(a, &s.ari(a, b, t)?, w)?;
            let rhs = s.ari(a, &s.sharp(a, b, w)?, t)?;
            leq(&lhs, &rhs.scale(k))?
        }
        NormRealSandwich => {
            let c = s.angle_a()?.cos();
            let kind = s.norm_kind();
            let (na, nr) = (norm(a, kind)?, norm(&re(a), kind)?);
            scalar_margin(c * na, nr).min(scalar_margin(nr, na))
        }
        FNormLower => {
            let kind = s.norm_kind();
            scalar_margin(s.f_of(norm(&re(a), kind)?)?, norm(&re(&s.func(a)?), kind)?)
        }
        FOpnormSandwich => {
            let k = sec2(s.angle_a()?);
            let fx = s.f_of(op_norm(&re(a))?)?;
            let mid = op_norm(&re(&s.func(a)?))?;
            scalar_margin(fx, mid).min(scalar_margin(mid, k * fx))
        }
        PhiSigmaNorm => {
            let c3 = s.angle_ab()?.cos().powi(3);
            let phi = s.map()?;
            check_map(id, &phi)?;
            let kind = s.norm_kind();
            let lhs = c3 * norm(&apply_map(&phi, &s.sigma(a, b)?)?, kind)?;
            let rhs = norm(&s.sigma(&apply_map(&phi, a)?, &apply_map(&phi, b)?)?, kind)?;
            scalar_margin(lhs, rhs)
        }
        PhiNablaNorm => {
            let c3 = s.angle_ab()?.cos().powi(3);
            let phi = s.map()?;
            let kind = s.norm_kind();
            let lhs = c3 * norm(&apply_map(&phi, &s.sigma(a, b)?)?, kind)?;
            let rhs = norm(&s.ari(&apply_map(&phi, a)?, &apply_map(&phi, b)?, t)?, kind)?;
            scalar_margin(lhs, rhs)
        }
        AndoZhan => {
            let k3 = s.angle_ab()?.cos().powi(-3);
            let kind = s.norm_kind();
            let lhs = norm(&s.func(&(a + b))?, kind)?;
            let rhs = k3 * norm(&(&s.func(a)? + &s.func(b)?), kind)?;
            scalar_margin(lhs, rhs)
        }
        FNablaNorm => {
            let c3 = s.angle_ab()?.cos().powi(3);
            let kind = s.norm_kind();
            let lhs = c3 * norm(&s.ari(&s.func(a)?, &s.func(b)?, t)?, kind)?;
            let rhs = norm(&s.func(&s.ari(a, b, t)?)?, kind)?;
            scalar_margin(lhs, rhs)
        }
        NormOfSigma => {
            let k3 = s.angle_ab()?.cos().powi(-3);
            let kind = s.norm_kind();
            let lhs = norm(&s.sigma(a, b)?, kind)?;
            let (na, nb) = (norm(a, kind)?, norm(b, kind)?);
            let rhs = k3 * scalar_sigma(&s.params.f, na.into(), nb.into())?.re;
            scalar_margin(lhs, rhs)
        }
        SigmaCongruence => -relative_deviation(&s.sigma(a, b)?, &congruence_sigma(a, b, &s.params.f, s.order())?)?,
        GeometricPaths => {
            let f = MonotoneFunction::power(t)?;
            let paths = PathSet {
                integral: s.sigma_with(&f, a, b)?,
                congruence: congruence_sigma(a, b, &f, s.order())?,
                half_line: half_line_geometric(a, b, t, s.order())?,
            };
            -paths.max_deviation()?
        }
        GeometricFlip => -relative_deviation(&s.sharp(a, b, t)?, &s.sharp(b, a, 1.0 - t)?)?,
        GeometricInverse => {
            let lhs = inv(&s.sharp(a, b, t)?)?;
            -relative_deviation(&lhs, &s.sharp(&inv(a)?, &inv(b)?, t)?)?
        }
        GeometricNeg => {
            let lhs = geometric_neg_unchecked(a, b, t, s.order())?;
            -relative_deviation(&lhs, &geometric_neg_congruence(a, b, t, s.order())?)?
        }
        PosJensen => {
            let x = s.unit_vector();
            scalar_margin(s.func(a)?.inner(&x).re, s.f_of(a.inner(&x).re)?)
        }
        PosSigmaInner => {
            let x = s.unit_vector();
            let lhs = s.sigma(a, b)?.inner(&x).re;
            let rhs = scalar_sigma(&s.params.f, a.inner(&x).re.into(), b.inner(&x).re.into())?.re;
            scalar_margin(lhs, rhs)
        }
        PosSigmaNorm => {
            let kind = s.norm_kind();
            let (na, nb) = (norm(a, kind)?, norm(b, kind)?);
            let rhs = scalar_sigma(&s.params.f, na.into(), nb.into())?.re;
            scalar_margin(norm(&s.sigma(a, b)?, kind)?, rhs)
        }
        PosAmgmhm => {
            let mid = s.sigma(a, b)?;
            leq(&s.har(a, b, t)?, &mid)?.min(leq(&mid, &s.ari(a, b, t)?)?)
        }
        PosAndo => {
            let phi = s.map()?;
            let lhs = apply_map(&phi, &s.sigma(a, b)?)?;
            leq(&lhs, &s.sigma(&apply_map(&phi, a)?, &apply_map(&phi, b)?)?)?
        }
        PosChoi => {
            let phi = s.map()?;
            check_map(id, &phi)?;
            leq(&apply_map(&phi, &s.func(a)?)?, &s.func(&apply_map(&phi, a)?)?)?
        }
        PosChoiInverse => {
            let phi = s.map()?;
            check_map(id, &phi)?;
            leq(&inv(&apply_map(&phi, a)?)?, &apply_map(&phi, &inv(a)?)?)?
        }
        PosAndoHiai => leq(&s.sharp(&s.func(a)?, &s.func(b)?, 0.5)?, &s.func(&s.ari(a, b, 0.5)?)?)?,
        PosFNorm => {
            let kind = s.norm_kind();
            scalar_margin(s.f_of(norm(a, kind)?)?, norm(&s.func(a)?, kind)?)
        }
        PosAndoZhan => {
            let kind = s.norm_kind();
            let lhs = norm(&s.func(&(a + b))?, kind)?;
            scalar_margin(lhs, norm(&(&s.func(a)? + &s.func(b)?), kind)?)
        }
        PosGumus => {
            let kc = gumus_constant(t, s.spec.m, s.spec.big_m);
            let shift = Complex64::new(s.spec.big_m * (kc - 1.0), 0.0);
            let (ar, sh, hr) = (s.ari(a, b, t)?, s.sharp(a, b, t)?, s.har(a, b, t)?);
            let m1 = leq(&ar, &sh.scale(kc))?;
            let m2 = leq(&sh, &hr.scale(kc))?;
            let m3 = leq(&re(&ar).shift(-shift), &sh)?;
            let m4 = leq(&sh, &re(&hr).shift(shift))?;
            m1.min(m2).min(m3).min(m4)
        }
        PosKantorovich => {
            let phi = s.map()?;
            check_map(id, &phi)?;
            let k = kantorovich_constant(s.spec.m, s.spec.big_m)?;
            let x = re(&apply_map(&phi, &s.sigma(a, b)?)?);
            let y = re(&apply_map(&phi, &s.sigma_with(s.g()?, a, b)?)?);
            leq(&(&x * &x), &(&y * &y).scale(k * k))?
        }
        PosSharpando => {
            let lhs = s.sharp(&s.ari(a, b, 0.5)?, &s.har(a, b, 0.5)?, 0.5)?;
            -relative_deviation(&lhs, &s.sharp(a, b, 0.5)?)?
        }
        PosTs => {
            let w = s.second_weight();
            let lhs = s.sharp(a, &s.ari(a, b, t)?, w)?;
            leq(&lhs, &s.ari(a, &s.sharp(a, b, w)?, t)?)?
        }
        PosAbNorm => {
            let kind = s.norm_kind();
            let sum = a + b;
            scalar_margin(norm(&(a * b), kind)?, 0.25 * norm(&(&sum * &sum), kind)?)
        }
        PosConcave => {
            let lhs = s.ari(&s.func(a)?, &s.func(b)?, t)?;
            leq(&lhs, &s.func(&s.ari(a, b, t)?)?)?
        }
    })
}
