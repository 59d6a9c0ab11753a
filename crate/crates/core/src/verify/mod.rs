//! Named numerical checks of the inequalities and identities for accretive, sectorial
//! and positive definite matrices, each reduced to a margin over a seeded ensemble.

mod catalog;
mod checks;

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

pub use catalog::{CheckId, CheckKind, EnsembleKind, FunctionUse, MapNeed};

use crate::error::{Error, Result};
use crate::funcalc::{MonotoneFunction, DEFAULT_ORDER};
use crate::linalg::{NormKind, TAU_LOEWNER};
use crate::maps::MapVariant;
use crate::sector::EnsembleSpec;

/// Largest relative deviation accepted by identity checks.
pub const TAU_EQ: f64 = 1e-8;

/// Seed of the built-in suite.
pub const DEFAULT_SEED: u64 = 20_201_107;
pub const SUITE_DIMS: [usize; 5] = [1, 2, 3, 5, 8];
pub const SUITE_ANGLES: [f64; 4] = [0.0, PI / 6.0, PI / 4.0, PI / 3.0];
pub const SUITE_SAMPLES: usize = 200;
pub const SUITE_M: (f64, f64) = (1.0, 4.0);
/// Quadrature order used by the default suite.
pub const SUITE_ORDER: usize = 32;

/// How a check draws its positive linear map: member `index` of the map stream `seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapParams {
    pub variant: MapVariant,
    /// Output dimension; the variant's default when absent.
    pub dim_out: Option<usize>,
    pub seed: u64,
}

/// Everything a check may need besides its ensemble.
#[derive(Clone, Debug)]
pub struct CheckParams {
    pub f: MonotoneFunction,
    pub g: Option<MonotoneFunction>,
    pub map: Option<MapParams>,
    pub norm: Option<NormKind>,
    /// Quadrature order for every mean and function evaluation.
    pub order: usize,
}

impl CheckParams {
    pub fn new(f: MonotoneFunction) -> Self {
        CheckParams {
            f,
            g: None,
            map: None,
            norm: None,
            order: DEFAULT_ORDER,
        }
    }

    pub fn with_g(mut self, g: MonotoneFunction) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_map(mut self, map: MapParams) -> Self {
        self.map = Some(map);
        self
    }

    pub fn with_norm(mut self, norm: NormKind) -> Self {
        self.norm = Some(norm);
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }
}

/// One line of a suite.
#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub check: CheckId,
    pub ensemble: EnsembleSpec,
    pub params: CheckParams,
}

/// Aggregated outcome of a check over an ensemble.
///
/// For order checks `min_margin` is the smallest normalized margin; for identity checks
/// it is the negated largest relative deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check: CheckId,
    pub ensemble: EnsembleSpec,
    pub function: String,
    pub second_function: Option<String>,
    pub map: Option<MapParams>,
    pub norm: Option<NormKind>,
    pub samples: usize,
    pub min_margin: f64,
    pub worst_index: usize,
    /// Samples whose auxiliary operands left the sector of the main operands.
    pub flagged: usize,
    pub pass: bool,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

/// `(M + m)^2 / (4 M m)`.
pub fn kantorovich_constant(m: f64, big_m: f64) -> Result<f64> {
    if !(m > 0.0 && big_m >= m && big_m.is_finite()) {
        return Err(Error::Parameter(format!("need 0 < m <= M, got m = {m}, M = {big_m}")));
    }
    Ok((big_m + m).powi(2) / (4.0 * big_m * m))
}

fn passes(kind: CheckKind, min_margin: f64) -> bool {
    match kind {
        CheckKind::Order => min_margin >= -TAU_LOEWNER,
        CheckKind::Identity => -min_margin <= TAU_EQ,
    }
}

/// Rejects parameters `run_check` cannot evaluate.
pub fn validate(id: CheckId, spec: &EnsembleSpec, params: &CheckParams) -> Result<()> {
    spec.validate()?;
    if id.ensemble() == EnsembleKind::Positive && spec.alpha_max != 0.0 {
        return Err(Error::Parameter(format!("{id} runs on positive ensembles, needs alpha_max = 0")));
    }
    let t = params.f.derivative_at_one;
    if id.function_use() != FunctionUse::Ignored && !(t > 0.0 && t < 1.0) {
        return Err(Error::Parameter(format!("{id} needs f'(1) in (0, 1), got {t}")));
    }
    if id.needs_second_function() {
        let g = params
            .g
            .as_ref()
            .ok_or_else(|| Error::Parameter(format!("{id} needs a second function g")))?;
        if (g.derivative_at_one - t).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "{id} needs f'(1) = g'(1), got {t} and {}",
                g.derivative_at_one
            )));
        }
    }
    match (id.map_need(), &params.map) {
        (MapNeed::None, _) => {}
        (_, None) => return Err(Error::Parameter(format!("{id} needs a positive linear map"))),
        (MapNeed::Unital, Some(mp)) if !mp.variant.is_unital() => {
            return Err(Error::Parameter(format!("{id} needs a unital map, got {}", mp.variant)))
        }
        _ => {}
    }
    Ok(())
}

/// Evaluates `id` on every member of the ensemble; samples run in parallel and are
/// aggregated in index order, so the report does not depend on the thread count.
///
/// The first failing sample aborts the check with its index in the error.
pub fn run_check(id: CheckId, spec: &EnsembleSpec, params: &CheckParams) -> Result<CheckReport> {
    validate(id, spec, params)?;
    let start = Instant::now();
    let outcomes: Vec<Result<checks::SampleOutcome>> = (0..spec.count)
        .into_par_iter()
        .map(|i| checks::evaluate(id, spec, params, i))
        .collect();
    let mut min_margin = f64::INFINITY;
    let mut worst_index = 0;
    let mut flagged = 0;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome.map_err(|e| match e {
            Error::NumericFailure { what, residual } => Error::NumericFailure {
                what: format!("sample {i}: {what}"),
                residual,
            },
            other => other,
        })?;
        if outcome.margin < min_margin {
            min_margin = outcome.margin;
            worst_index = i;
        }
        flagged += outcome.flagged as usize;
    }
    Ok(CheckReport {
        check: id,
        ensemble: *spec,
        function: params.f.label(),
        second_function: params.g.as_ref().map(|g| g.label()),
        map: params.map,
        norm: params.norm,
        samples: spec.count,
        min_margin,
        worst_index,
        flagged,
        pass: passes(id.kind(), min_margin),
        error: None,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs every entry; a failing entry yields a failed report and the suite continues.
pub fn run_suite(entries: &[SuiteEntry]) -> Vec<CheckReport> {
    entries
        .par_iter()
        .map(|e| {
            let start = Instant::now();
            run_check(e.check, &e.ensemble, &e.params).unwrap_or_else(|err| CheckReport {
                check: e.check,
                ensemble: e.ensemble,
                function: e.params.f.label(),
                second_function: e.params.g.as_ref().map(|g| g.label()),
                map: e.params.map,
                norm: e.params.norm,
                samples: 0,
                min_margin: f64::NAN,
                worst_index: 0,
                flagged: 0,
                pass: false,
                error: Some(err.to_string()),
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// power(0.3), power(0.5), power(0.7), uniform, harmonic(0.4), arithmetic(0.6).
pub fn suite_functions() -> Vec<MonotoneFunction> {
    let p = |l| MonotoneFunction::power(l).expect("valid exponent");
    vec![
        p(0.3),
        p(0.5),
        p(0.7),
        MonotoneFunction::uniform(),
        MonotoneFunction::harmonic(0.4).expect("valid weight"),
        MonotoneFunction::arithmetic(0.6).expect("valid weight"),
    ]
}

/// A catalog function other than `f` with the same derivative at 1.
pub fn kantorovich_partner(f: &MonotoneFunction) -> Result<MonotoneFunction> {
    let t = f.derivative_at_one;
    if t == 0.5 && f.name != "uniform" {
        Ok(MonotoneFunction::uniform())
    } else if f.name != "harmonic" {
        MonotoneFunction::harmonic(t)
    } else {
        MonotoneFunction::arithmetic(t)
    }
}

const SUITE_NORMS: [NormKind; 4] = [
    NormKind::Operator,
    NormKind::Frobenius,
    NormKind::Trace,
    NormKind::KyFan(2),
];

fn map_variants(need: MapNeed) -> Vec<MapVariant> {
    MapVariant::ALL
        .into_iter()
        .filter(|v| need != MapNeed::Unital || v.is_unital())
        .collect()
}

// Functions a check is run with: every suite function when the whole measure matters,
// one per distinct weight when only f'(1) does, and a single one otherwise.
fn functions_for(id: CheckId, all: &[MonotoneFunction]) -> Vec<MonotoneFunction> {
    match id.function_use() {
        FunctionUse::Full => all.to_vec(),
        FunctionUse::Weight => {
            let mut out: Vec<MonotoneFunction> = Vec::new();
            for f in all {
                if !out.iter().any(|g| g.derivative_at_one == f.derivative_at_one) {
                    out.push(f.clone());
                }
            }
            out
        }
        FunctionUse::Ignored => all[..1].to_vec(),
    }
}

/// The built-in suite: every check on dims {1, 2, 3, 5, 8} and angles
/// {0, π/6, π/4, π/3}, 200 samples each, `m = 1`, `M = 4`.
///
/// Positive-definite checks run on the `alpha = 0` ensembles only. Maps and norms rotate
/// through all variants across dimensions, angles and functions.
pub fn default_suite(order: usize) -> Vec<SuiteEntry> {
    let functions = suite_functions();
    let mut entries = Vec::new();
    for (di, &dim) in SUITE_DIMS.iter().enumerate() {
        for (ai, &alpha) in SUITE_ANGLES.iter().enumerate() {
            let spec = EnsembleSpec {
                dim,
                alpha_max: alpha,
                m: SUITE_M.0,
                big_m: SUITE_M.1,
                count: SUITE_SAMPLES,
                seed: DEFAULT_SEED,
            };
            for &id in CheckId::ALL {
                if id.ensemble() == EnsembleKind::Positive && alpha != 0.0 {
                    continue;
                }
                for (fi, f) in functions_for(id, &functions).into_iter().enumerate() {
                    let slot = di + ai + fi;
                    let mut params = CheckParams::new(f).with_order(order);
                    if id.needs_second_function() {
                        let g = kantorovich_partner(&params.f).expect("catalog weight");
                        params = params.with_g(g);
                    }
                    if id.map_need() != MapNeed::None {
                        let variants = map_variants(id.map_need());
                        params = params.with_map(MapParams {
                            variant: variants[slot % variants.len()],
                            dim_out: None,
                            seed: DEFAULT_SEED + 1,
                        });
                    }
                    if id.uses_norm() {
                        params = params.with_norm(SUITE_NORMS[slot % SUITE_NORMS.len()]);
                    }
                    entries.push(SuiteEntry {
                        check: id,
                        ensemble: spec,
                        params,
                    });
                }
            }
        }
    }
    entries
}
