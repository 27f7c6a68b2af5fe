use std::path::PathBuf;

use clap::ValueEnum;
use friedrichs_lab::operators::{
    bergman_project, f_squared_hinfty_series, hinfty_bound_series, norm_probe, FriedrichsMap,
};
use friedrichs_lab::quad2d::{counterexample_probe, default_cutoffs};
use friedrichs_lab::spaces::exponent_thresholds;
use friedrichs_lab::specfun::{itilde_comparator_plus, ln_itilde, ln_itilde_comparator_minus};
use friedrichs_lab::verify::{run_criterion, CRITERIA};
use friedrichs_lab::LaurentSeries64;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::config::{parse_domain, parse_range, parse_space, require};
use crate::error::{CliError, CliResult};
use crate::output::{f, json_report, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    /// Series text format (apply only).
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApplyMode {
    /// The Friedrichs map through its factor table.
    F,
    /// Its square.
    F2,
    /// Bergman projection of the conjugated input by quadrature.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    /// The L^p bound series S(p) on the exponential model.
    S,
    /// The F squared series on the exponential model.
    F2h,
}

/// Every key is optional on the command line so that a config file can supply it.
macro_rules! run_config {
    ($(#[$m:meta])* $name:ident { $( $(#[$fm:meta])* $field:ident : $ty:ty ),* $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                $(#[$fm])*
                #[arg(long)]
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }
    };
}

run_config!(ItildeConfig {
    /// Comma-separated evaluation points.
    #[arg(value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64>,
    tol: f64,
    format: Format,
    out: PathBuf,
});

run_config!(ThresholdsConfig {
    /// Dimension.
    n: u32,
    /// Diederich-Fornaess exponent, in (0, 1).
    eta: f64,
    /// Integrability exponent of the data, r > 2.
    r: f64,
    /// Target exponent to classify.
    p: f64,
    out: PathBuf,
});

run_config!(FactorsConfig {
    /// hartogs, exp-hartogs or power:<rho>.
    space: String,
    /// Inclusive degree range, e.g. -3..3.
    #[arg(allow_hyphen_values = true)]
    range: String,
    format: Format,
    out: PathBuf,
});

run_config!(ApplyConfig {
    space: String,
    /// Input series file.
    input: PathBuf,
    #[arg(value_enum)]
    mode: ApplyMode,
    /// Output degree window for mode b.
    truncation: u32,
    tol: f64,
    format: Format,
    out: PathBuf,
});

run_config!(SpectrumConfig {
    space: String,
    truncation: u32,
    out: PathBuf,
});

run_config!(ProbeConfig {
    space: String,
    /// Source exponent.
    q: f64,
    /// Target exponent.
    p: f64,
    truncation: u32,
    trials: usize,
    seed: u64,
    out: PathBuf,
});

run_config!(SeriesSumConfig {
    #[arg(value_enum)]
    kind: SumKind,
    p: f64,
    /// Largest index K.
    k: u32,
    tol: f64,
    format: Format,
    out: PathBuf,
});

run_config!(CounterexampleConfig {
    /// hartogs or exp-hartogs.
    domain: String,
    p: f64,
    /// Comma-separated, strictly decreasing, in (0, 1/2).
    #[arg(value_delimiter = ',')]
    cutoffs: Vec<f64>,
    tol: f64,
    format: Format,
    out: PathBuf,
});

run_config!(VerifyConfig {
    /// `all` or a comma-separated list of criterion ids.
    suite: String,
    out: PathBuf,
});

/// A rendered report and whether every required check held.
pub struct Outcome {
    pub body: String,
    pub ok: bool,
    /// Human summary for stderr.
    pub summary: Option<String>,
}

fn format_of(format: Option<Format>, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::key("format", format!("{f:?} is not available here")))
    }
}

#[derive(Serialize)]
struct ItildeRow {
    x: f64,
    value: f64,
    ln_value: f64,
    rel_error_estimate: f64,
    nodes_used: usize,
    converged: bool,
    /// `Ĩ(x)(x+1)` for `x >= 1`, `Ĩ(x) / ((1/2)^{|x|-1} Γ(|x|-1))` for `x <= -2`.
    comparator_ratio: Option<f64>,
}

pub fn itilde(mut cfg: ItildeConfig) -> CliResult<Outcome> {
    let xs = cfg
        .x
        .clone()
        .filter(|v| !v.is_empty())
        .ok_or_else(|| CliError::key("x", "required for this command"))?;
    let tol = *cfg.tol.get_or_insert(1e-12);
    let format = format_of(cfg.format, Format::Json, &[Format::Json, Format::Csv])?;
    let mut rows = Vec::new();
    for x in xs {
        let q = ln_itilde(x, tol)?;
        let comparator_ratio = if x >= 1.0 {
            Some((q.ln_value - itilde_comparator_plus(x)?.ln()).exp())
        } else if x <= -2.0 {
            Some((q.ln_value - ln_itilde_comparator_minus(-x)?).exp())
        } else {
            None
        };
        rows.push(ItildeRow {
            x,
            value: q.ln_value.exp(),
            ln_value: q.ln_value,
            rel_error_estimate: q.rel_error_estimate,
            nodes_used: q.nodes_used,
            converged: q.converged,
            comparator_ratio,
        });
    }
    let ok = rows.iter().all(|r| r.converged);
    let body = match format {
        Format::Csv => {
            let mut s = String::from("x,value,ln_value,rel_error_estimate,nodes_used,converged,comparator_ratio\n");
            for r in &rows {
                let c = r.comparator_ratio.map(f).unwrap_or_default();
                s.push_str(&format!(
                    "{},{},{},{},{},{},{c}\n",
                    f(r.x),
                    f(r.value),
                    f(r.ln_value),
                    f(r.rel_error_estimate),
                    r.nodes_used,
                    r.converged
                ));
            }
            s
        }
        _ => json_report(&Provenance::new("itilde", &cfg), &rows),
    };
    Ok(Outcome {
        body,
        ok,
        summary: None,
    })
}

pub fn thresholds(cfg: ThresholdsConfig) -> CliResult<Outcome> {
    let n = require(cfg.n, "n")?;
    let eta = require(cfg.eta, "eta")?;
    let report = exponent_thresholds(n, eta, cfg.r, cfg.p)?;
    let body = json_report(&Provenance::new("thresholds", &cfg), &report);
    Ok(Outcome {
        body,
        ok: true,
        summary: None,
    })
}

#[derive(Serialize)]
struct FactorRow {
    degree: i32,
    factor: f64,
    eigenvalue: f64,
    singular_value: f64,
}

pub fn factors(mut cfg: FactorsConfig) -> CliResult<Outcome> {
    let space = parse_space(cfg.space.get_or_insert_with(|| "hartogs".into()))?;
    let (lo, hi) = parse_range(cfg.range.get_or_insert_with(|| "-3..3".into()))?;
    let format = format_of(cfg.format, Format::Json, &[Format::Json, Format::Csv])?;
    let radius = lo.unsigned_abs().max(hi.unsigned_abs());
    let map = FriedrichsMap::new(space, radius)?;
    let mut rows = Vec::new();
    for m in lo..=hi {
        let eigenvalue = map.eigenvalue(m)?;
        rows.push(FactorRow {
            degree: m,
            factor: map.factor(m)?,
            eigenvalue,
            singular_value: eigenvalue.sqrt(),
        });
    }
    let body = match format {
        Format::Csv => {
            let mut s = String::from("degree,factor,eigenvalue,singular_value\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.degree,
                    f(r.factor),
                    f(r.eigenvalue),
                    f(r.singular_value)
                ));
            }
            s
        }
        _ => json_report(&Provenance::new("factors", &cfg), &rows),
    };
    Ok(Outcome {
        body,
        ok: true,
        summary: None,
    })
}

#[derive(Serialize)]
struct ApplyResult<'a> {
    series: &'a LaurentSeries64,
    refinement_change: Option<f64>,
    converged: bool,
}

pub fn apply(mut cfg: ApplyConfig) -> CliResult<Outcome> {
    let space = parse_space(cfg.space.get_or_insert_with(|| "hartogs".into()))?;
    let path = cfg
        .input
        .clone()
        .ok_or_else(|| CliError::key("input", "required for this command"))?;
    let mode = require(cfg.mode, "mode")?;
    let format = format_of(cfg.format, Format::Text, &[Format::Text, Format::Json])?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let input = LaurentSeries64::from_text(&text)?;
    let radius = input.max_abs_degree().max(1) as u32;
    let (series, change, converged) = match mode {
        ApplyMode::F => (FriedrichsMap::new(space, radius)?.apply(&input)?, None, true),
        ApplyMode::F2 => (FriedrichsMap::new(space, radius)?.apply_squared(&input)?, None, true),
        ApplyMode::B => {
            let truncation = *cfg.truncation.get_or_insert(radius);
            let tol = *cfg.tol.get_or_insert(1e-10);
            let g = |z: Complex<f64>| input.evaluate(z).map(|v| v.conj()).unwrap_or_default();
            let p = bergman_project(&space, g, truncation, tol)?;
            (p.series, Some(p.refinement_change), p.converged)
        }
    };
    let prov = Provenance::new("apply", &cfg);
    let body = match format {
        Format::Json => json_report(
            &prov,
            &ApplyResult {
                series: &series,
                refinement_change: change,
                converged,
            },
        ),
        _ => format!("{}{}", prov.comment_lines(), series.to_text()),
    };
    Ok(Outcome {
        body,
        ok: converged,
        summary: None,
    })
}

pub fn spectrum(mut cfg: SpectrumConfig) -> CliResult<Outcome> {
    let space = parse_space(cfg.space.get_or_insert_with(|| "hartogs".into()))?;
    let truncation = *cfg.truncation.get_or_insert(10);
    let report = FriedrichsMap::new(space, truncation)?.spectrum(truncation)?;
    let body = json_report(&Provenance::new("spectrum", &cfg), &report);
    Ok(Outcome {
        body,
        ok: true,
        summary: None,
    })
}

pub fn probe(mut cfg: ProbeConfig) -> CliResult<Outcome> {
    let space = parse_space(cfg.space.get_or_insert_with(|| "hartogs".into()))?;
    let q = require(cfg.q, "q")?;
    let p = require(cfg.p, "p")?;
    let seed = require(cfg.seed, "seed")?;
    let truncation = *cfg.truncation.get_or_insert(8);
    let trials = *cfg.trials.get_or_insert(32);
    let map = FriedrichsMap::new(space, truncation)?;
    let report = norm_probe(&map, q, p, truncation, trials, seed)?;
    let summary = if report.unbounded {
        "unbounded: a monomial of finite source norm has infinite image norm".to_string()
    } else {
        format!(
            "lower bound {:.12e} over {} evaluations",
            report.lower_bound, report.evaluations
        )
    };
    let body = json_report(&Provenance::new("probe", &cfg), &report);
    Ok(Outcome {
        body,
        ok: report.all_converged,
        summary: Some(summary),
    })
}

pub fn series_sum(mut cfg: SeriesSumConfig) -> CliResult<Outcome> {
    let kind = require(cfg.kind, "kind")?;
    let k = *cfg.k.get_or_insert(30);
    let tol = *cfg.tol.get_or_insert(1e-13);
    let format = format_of(cfg.format, Format::Json, &[Format::Json, Format::Csv])?;
    let report = match kind {
        SumKind::S => hinfty_bound_series(require(cfg.p, "p")?, k, tol)?,
        SumKind::F2h => {
            if cfg.p.is_some() {
                return Err(CliError::key("p", "not used by the f2h series"));
            }
            f_squared_hinfty_series(k, tol)?
        }
    };
    let body = match format {
        Format::Csv => {
            let mut s = String::from("k,partial_sum\n");
            for (kk, v) in &report.partial_sums {
                s.push_str(&format!("{kk},{}\n", f(*v)));
            }
            s
        }
        _ => json_report(&Provenance::new("series-sum", &cfg), &report),
    };
    Ok(Outcome {
        body,
        ok: report.all_converged,
        summary: Some(format!("{} = {:.15e} at K = {k}", report.name, report.sum())),
    })
}

pub fn counterexample(mut cfg: CounterexampleConfig) -> CliResult<Outcome> {
    let domain = parse_domain(cfg.domain.get_or_insert_with(|| "hartogs".into()))?;
    let p = require(cfg.p, "p")?;
    let cutoffs = cfg.cutoffs.get_or_insert_with(default_cutoffs).clone();
    let tol = *cfg.tol.get_or_insert(1e-10);
    let format = format_of(cfg.format, Format::Csv, &[Format::Json, Format::Csv])?;
    let report = counterexample_probe(&domain, p, &cutoffs, tol)?;
    let ok = report.rows.iter().all(|r| r.converged);
    let summary = format!(
        "L2: {} (spread {:.2e}); L^p: {} ({:.4} per halving, local slope {:.4})",
        if report.l2.cauchy { "Cauchy" } else { "not Cauchy" },
        report.l2.last_spread,
        if report.lp.divergent {
            "divergent"
        } else {
            "not divergent"
        },
        report.lp_increments.last().copied().unwrap_or(f64::NAN),
        report.oracle_slope,
    );
    let body = match format {
        Format::Csv => report.to_csv(),
        _ => json_report(&Provenance::new("counterexample", &cfg), &report),
    };
    Ok(Outcome {
        body,
        ok,
        summary: Some(summary),
    })
}

pub fn verify(mut cfg: VerifyConfig) -> CliResult<Outcome> {
    let suite = cfg.suite.get_or_insert_with(|| "all".into()).clone();
    let ids: Vec<u8> = if suite == "all" {
        CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        suite
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u8>()
                    .ok()
                    .filter(|id| CRITERIA.iter().any(|(i, _)| i == id))
                    .ok_or_else(|| CliError::key("suite", format!("unknown criterion {s:?}")))
            })
            .collect::<CliResult<_>>()?
    };
    let outcomes: Vec<_> = ids.iter().filter_map(|&id| run_criterion(id)).collect();
    let ok = outcomes.iter().all(|o| o.passed);
    let summary = outcomes.iter().map(|o| o.to_string()).collect::<String>();
    let body = json_report(&Provenance::new("verify", &cfg), &outcomes);
    Ok(Outcome {
        body,
        ok,
        summary: Some(summary.trim_end().to_string()),
    })
}
