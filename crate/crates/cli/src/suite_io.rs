use accretive::funcalc::catalog;
use accretive::linalg::NormKind;
use accretive::maps::MapVariant;
use accretive::sector::EnsembleSpec;
use accretive::verify::{
    self, kantorovich_partner, CheckId, CheckParams, CheckReport, MapParams, SuiteEntry,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub variant: String,
    /// Output dimension; the variant's default when absent.
    #[serde(default)]
    pub dims: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub id: String,
    pub dim: usize,
    pub alpha_max: f64,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub count: usize,
    pub seed: u64,
    pub function: FunctionSpec,
    /// Companion function for the Kantorovich checks; a catalog function with the same
    /// derivative at 1 when absent.
    #[serde(default)]
    pub second_function: Option<FunctionSpec>,
    #[serde(default)]
    pub map: Option<MapSpec>,
    #[serde(default)]
    pub norm: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfigFile {
    pub checks: Vec<CheckSpec>,
}

impl SuiteConfigFile {
    /// Resolves and validates every entry; the error names the offending entry.
    pub fn entries(&self, order: usize) -> Result<Vec<SuiteEntry>, String> {
        self.checks
            .iter()
            .enumerate()
            .map(|(i, c)| c.entry(order).map_err(|e| format!("checks[{i}]: {e}")))
            .collect()
    }
}

impl CheckSpec {
    fn entry(&self, order: usize) -> Result<SuiteEntry, String> {
        let check: CheckId = self.id.parse().map_err(|e: accretive::Error| e.to_string())?;
        let ensemble = EnsembleSpec {
            dim: self.dim,
            alpha_max: self.alpha_max,
            m: self.m,
            big_m: self.big_m,
            count: self.count,
            seed: self.seed,
        };
        let err = |e: accretive::Error| format!("{}: {e}", self.id);
        let f = catalog(&self.function.name, self.function.param).map_err(err)?;
        let mut params = CheckParams::new(f).with_order(order);
        if check.needs_second_function() {
            let g = match &self.second_function {
                Some(g) => catalog(&g.name, g.param),
                None => kantorovich_partner(&params.f),
            };
            params = params.with_g(g.map_err(err)?);
        }
        if let Some(m) = &self.map {
            let variant: MapVariant = m.variant.parse().map_err(err)?;
            params = params.with_map(MapParams {
                variant,
                dim_out: m.dims,
                seed: m.seed,
            });
        }
        if let Some(n) = &self.norm {
            params = params.with_norm(n.parse::<NormKind>().map_err(err)?);
        }
        verify::validate(check, &ensemble, &params).map_err(err)?;
        Ok(SuiteEntry {
            check,
            ensemble,
            params,
        })
    }
}

#[derive(Serialize)]
struct MapOut {
    variant: String,
    dims: Option<usize>,
    seed: u64,
}

#[derive(Serialize)]
struct ParamsOut {
    dim: usize,
    alpha_max: f64,
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    count: usize,
    seed: u64,
    function: String,
    second_function: Option<String>,
    map: Option<MapOut>,
    norm: Option<String>,
    order: usize,
}

#[derive(Serialize)]
struct CheckOut {
    id: CheckId,
    params: ParamsOut,
    samples: usize,
    min_margin: Option<f64>,
    worst_index: usize,
    flagged: usize,
    pass: bool,
    error: Option<String>,
    elapsed_ms: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    errors: usize,
    failing_ids: Vec<CheckId>,
    all_pass: bool,
    elapsed_ms: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    checks: Vec<CheckOut>,
    summary: Summary,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Report JSON with fixed key order. Timings are `null` unless `timings` is set.
pub fn render_report(
    entries: &[SuiteEntry],
    reports: &[CheckReport],
    timings: bool,
    total_ms: f64,
) -> String {
    let checks: Vec<CheckOut> = entries
        .iter()
        .zip(reports)
        .map(|(e, r)| CheckOut {
            id: r.check,
            params: ParamsOut {
                dim: r.ensemble.dim,
                alpha_max: r.ensemble.alpha_max,
                m: r.ensemble.m,
                big_m: r.ensemble.big_m,
                count: r.ensemble.count,
                seed: r.ensemble.seed,
                function: r.function.clone(),
                second_function: r.second_function.clone(),
                map: r.map.map(|m| MapOut {
                    variant: m.variant.to_string(),
                    dims: m.dim_out,
                    seed: m.seed,
                }),
                norm: r.norm.map(|n| n.to_string()),
                order: e.params.order,
            },
            samples: r.samples,
            min_margin: finite(r.min_margin),
            worst_index: r.worst_index,
            flagged: r.flagged,
            pass: r.pass,
            error: r.error.clone(),
            elapsed_ms: timings.then_some(r.elapsed_ms),
        })
        .collect();
    let mut failing_ids: Vec<CheckId> = reports.iter().filter(|r| !r.pass).map(|r| r.check).collect();
    failing_ids.sort();
    failing_ids.dedup();
    let passed = reports.iter().filter(|r| r.pass).count();
    let summary = Summary {
        total: reports.len(),
        passed,
        failed: reports.len() - passed,
        errors: reports.iter().filter(|r| r.error.is_some()).count(),
        all_pass: passed == reports.len(),
        failing_ids,
        elapsed_ms: timings.then_some(total_ms),
    };
    let mut text = serde_json::to_string_pretty(&Report { checks, summary }).expect("report serializes");
    text.push('\n');
    text
}
