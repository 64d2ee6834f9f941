use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mvbv_core::diagnostics::{
    convergence_trace, corollary3_check, lemma2_bound, modulus_of_continuity, rate_check,
    ConvergenceTrace, Lemma2Report, ModulusFlag, Psi, RateReport, TraceVerdict, MAX_SHIFTS,
};
use mvbv_core::kernels::lower_bound_check;
use mvbv_core::mvbv::{mvbv_scan, Verdict};
use mvbv_core::sequences::{make_family, CoefficientSequence};
use mvbv_core::synthesis::{reference_values, SynthesisPlan};
use serde::Serialize;

use crate::config::{Command, ExperimentConfig};
use crate::grid::GridSpec;
use crate::output::{fmt_g, json_summary, write_outputs, Table};
use crate::HarnessError;

#[derive(Debug, Parser)]
#[command(
    name = "mvbv",
    version,
    about = "L1 convergence experiments for Fourier series with MVBV coefficients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Scan the MVBV ratio over a grid of block starts m.
    CheckMvbv {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: Option<f64>,
        /// Grid of m values, `start:stop:xF`.
        #[arg(long)]
        m: Option<GridSpec>,
    },
    /// Tabulate kernel L1 norms against log k.
    Kernels {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<GridSpec>,
        /// Exit 1 if some ‖D_k‖ falls below (1/π) log k.
        #[arg(long)]
        check_lower_bound: bool,
        #[arg(long)]
        nodes_per_panel: Option<usize>,
    },
    /// Trace ‖f − S_n‖ next to the coefficient conditions.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<GridSpec>,
    },
    /// Compare errors and coefficients with a rate ψ_n.
    Rate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<GridSpec>,
        /// `inv_n`, `inv_sqrt`, `geometric` or `pow:<p>`.
        #[arg(long)]
        psi: Option<String>,
        /// Take ψ_n from the modulus of continuity of the r-th derivative.
        #[arg(long)]
        r: Option<u32>,
    },
    /// Modulus of continuity of the reference samples on a t grid.
    Modulus {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        t_points: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    /// Extra family parameter, `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Coefficient list for the `finite` family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
    /// JSON summary path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub nref_ratio: Option<u64>,
    #[arg(long)]
    pub m_ratio: Option<u64>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_owned(), v))
}

impl Common {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(f) = &self.family {
            cfg.family = Some(f.clone());
        }
        if let Some(a) = self.alpha {
            cfg.params.insert("alpha".into(), a);
        }
        if let Some(p) = self.phi {
            cfg.params.insert("phi".into(), p);
        }
        for (k, v) in &self.params {
            cfg.params.insert(k.clone(), *v);
        }
        if let Some(c) = &self.coeffs {
            cfg.coeffs = c.clone();
        }
        if let Some(p) = &self.out {
            cfg.output.out = Some(p.clone());
        }
        if let Some(p) = &self.csv {
            cfg.output.csv = Some(p.clone());
        }
        if let Some(p) = &self.out_dir {
            cfg.output.out_dir = Some(p.clone());
        }
        if let Some(mu) = self.mu {
            cfg.policy.mu = Some(mu);
        }
        if let Some(r) = self.nref_ratio {
            cfg.policy.nref_ratio = Some(r);
        }
        if let Some(r) = self.m_ratio {
            cfg.policy.m_ratio = Some(r);
        }
    }
}

/// Loads the config file if any and layers the flags on top.
pub fn resolve(sub: &Sub) -> Result<ExperimentConfig, HarnessError> {
    let (common, command) = match sub {
        Sub::CheckMvbv { common, .. } => (common, Command::CheckMvbv),
        Sub::Kernels { common, .. } => (common, Command::Kernels),
        Sub::Converge { common, .. } => (common, Command::Converge),
        Sub::Rate { common, .. } => (common, Command::Rate),
        Sub::Modulus { common, .. } => (common, Command::Modulus),
    };
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != command {
            return Err(HarnessError::Config(format!(
                "config file is for `{c}`, not `{command}`"
            )));
        }
    }
    cfg.command = Some(command);
    common.apply(&mut cfg);
    match sub {
        Sub::CheckMvbv { lambda, m, .. } => {
            cfg.check_mvbv.lambda = lambda.or(cfg.check_mvbv.lambda);
            cfg.check_mvbv.m = m.or(cfg.check_mvbv.m);
        }
        Sub::Kernels {
            k,
            check_lower_bound,
            nodes_per_panel,
            ..
        } => {
            cfg.kernels.k = k.or(cfg.kernels.k);
            if *check_lower_bound {
                cfg.kernels.check_lower_bound = Some(true);
            }
            cfg.kernels.nodes_per_panel = nodes_per_panel.or(cfg.kernels.nodes_per_panel);
        }
        Sub::Converge { n, .. } => cfg.converge.n = n.or(cfg.converge.n),
        Sub::Rate { n, psi, r, .. } => {
            cfg.rate.n = n.or(cfg.rate.n);
            if psi.is_some() {
                cfg.rate.psi = psi.clone();
            }
            cfg.rate.r = r.or(cfg.rate.r);
        }
        Sub::Modulus {
            n, t_max, t_points, ..
        } => {
            cfg.modulus.n = n.or(cfg.modulus.n);
            cfg.modulus.t_max = t_max.or(cfg.modulus.t_max);
            cfg.modulus.t_points = t_points.or(cfg.modulus.t_points);
        }
    }
    Ok(cfg)
}

const DEFAULT_M_GRID: GridSpec = GridSpec {
    start: 2,
    stop: 4096,
    factor: 2,
};
const DEFAULT_N_GRID: GridSpec = GridSpec {
    start: 16,
    stop: 1024,
    factor: 2,
};

/// Result of one subcommand before anything is written.
pub struct Outcome {
    pub table: Table,
    pub json: Vec<u8>,
    /// Set when a checked inequality failed.
    pub failure: Option<String>,
}

/// Runs the command described by a resolved config.
pub fn run_config(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let command = cfg
        .command
        .ok_or_else(|| HarnessError::Config("no command".into()))?;
    match command {
        Command::CheckMvbv => check_mvbv(cfg),
        Command::Kernels => kernels(cfg),
        Command::Converge => converge(cfg),
        Command::Rate => rate(cfg),
        Command::Modulus => modulus(cfg),
    }
}

/// Resolves, runs and writes; `Ok(Some(msg))` reports a failed check.
pub fn execute(cli: Cli) -> Result<Option<String>, HarnessError> {
    let cfg = resolve(&cli.command)?;
    let outcome = run_config(&cfg)?;
    let csv = outcome.table.to_bytes()?;
    write_outputs(
        cfg.command.expect("resolved"),
        &cfg.output,
        &csv,
        &outcome.json,
    )?;
    Ok(outcome.failure)
}

fn family(cfg: &ExperimentConfig) -> Result<CoefficientSequence, HarnessError> {
    Ok(make_family(&cfg.descriptor()?)?)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::BoundedEvidence => "bounded-evidence",
        Verdict::GrowthEvidence => "growth-evidence",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn check_mvbv(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let seq = family(cfg)?;
    let lambda = cfg.check_mvbv.lambda.unwrap_or(2.0);
    let grid = cfg.check_mvbv.m.unwrap_or(DEFAULT_M_GRID).values();
    let report = mvbv_scan(&seq, &grid, lambda)?;
    let mut table = Table::new(&["m", "ratio"]);
    for (m, r) in report.m_values.iter().zip(&report.ratios) {
        table.push(vec![m.to_string(), fmt_g(*r)]);
    }
    let verdict = verdict_name(report.verdict);
    let json = json_summary(Command::CheckMvbv, cfg, verdict, &report)?;
    Ok(Outcome {
        table,
        json,
        failure: None,
    })
}

fn kernels(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let grid = cfg.kernels.k.unwrap_or(DEFAULT_M_GRID).values();
    let nodes = cfg.kernels.nodes_per_panel.unwrap_or(32);
    let report = lower_bound_check(&grid, nodes)?;
    let mut table = Table::new(&["k", "norm_D", "norm_E", "log_k", "ratio_to_log"]);
    for r in &report.rows {
        table.push(vec![
            r.k.to_string(),
            fmt_g(r.norm_d),
            fmt_g(r.norm_e),
            fmt_g(r.log_k),
            fmt_g(r.ratio_to_log),
        ]);
    }
    let checked = cfg.kernels.check_lower_bound.unwrap_or(false);
    let verdict = match (checked, report.holds()) {
        (false, _) => "computed",
        (true, true) => "lower-bound-holds",
        (true, false) => "lower-bound-violated",
    };
    let failure = (checked && !report.holds())
        .then(|| format!("‖D_k‖ < (1/π) log k at k = {:?}", report.violations));
    let json = json_summary(Command::Kernels, cfg, verdict, &report)?;
    Ok(Outcome {
        table,
        json,
        failure,
    })
}

#[derive(Serialize)]
struct ConvergeReport {
    trace: ConvergenceTrace,
    lemma2: Vec<Lemma2Report>,
}

fn converge(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let seq = family(cfg)?;
    let grid = cfg.converge.n.unwrap_or(DEFAULT_N_GRID).values();
    let trace = convergence_trace(&seq, &grid, &cfg.plan_policy())?;
    let lemma2: Vec<Lemma2Report> = (0..grid.len())
        .map(|i| lemma2_bound(&seq, grid[i], trace.err[i], trace.tail[i], trace.flags[i]))
        .collect();
    let mut table = Table::new(&["n", "err", "err_bound", "coeff_log", "cond2", "flag"]);
    for (i, n) in grid.iter().enumerate() {
        table.push(vec![
            n.to_string(),
            fmt_g(trace.err[i]),
            fmt_g(trace.err_bound[i]),
            fmt_g(trace.coeff_log[i]),
            fmt_g(trace.cond2[i]),
            trace.flags[i].as_str().to_owned(),
        ]);
    }
    let failed: Vec<u64> = lemma2.iter().filter(|r| !r.pass).map(|r| r.n).collect();
    let failure =
        (!failed.is_empty()).then(|| format!("coefficient bound violated at n = {failed:?}"));
    let verdict = match trace.verdict {
        TraceVerdict::BothVanish => "both-vanish",
        TraceVerdict::BothPersist => "both-persist",
        TraceVerdict::Mismatch => "mismatch",
        TraceVerdict::Inconclusive => "inconclusive",
    };
    let json = json_summary(
        Command::Converge,
        cfg,
        verdict,
        &ConvergeReport { trace, lemma2 },
    )?;
    Ok(Outcome {
        table,
        json,
        failure,
    })
}

#[derive(Serialize)]
struct RateOutput<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_flags: Option<&'a [ModulusFlag]>,
    rate: &'a RateReport,
}

fn rate(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let seq = family(cfg)?;
    let grid = cfg.rate.n.unwrap_or(DEFAULT_N_GRID).values();
    let policy = cfg.plan_policy();
    let cor;
    let plain;
    let out = match cfg.rate.r {
        Some(r) => {
            if cfg.rate.psi.is_some() {
                return Err(HarnessError::Config(
                    "give either psi or r, not both".into(),
                ));
            }
            cor = corollary3_check(&seq, r, &grid, &policy)?;
            RateOutput {
                r: Some(r),
                omega: Some(&cor.omega),
                omega_flags: Some(&cor.omega_flags),
                rate: &cor.rate,
            }
        }
        None => {
            let psi = Psi::parse(cfg.rate.psi.as_deref().unwrap_or("inv_n"))?;
            plain = rate_check(&seq, &psi, &grid, policy.mu, &policy)?;
            RateOutput {
                r: None,
                omega: None,
                omega_flags: None,
                rate: &plain,
            }
        }
    };
    let report = out.rate;
    let mut table = Table::new(&["n", "psi", "ratio_err", "ratio_best", "ratio_coeff"]);
    for i in 0..report.n_grid.len() {
        table.push(vec![
            report.n_grid[i].to_string(),
            fmt_g(report.psi[i]),
            fmt_g(report.ratio_err[i]),
            fmt_g(report.ratio_best[i]),
            fmt_g(report.ratio_coeff[i]),
        ]);
    }
    let (verdict, failure) = match report.equivalence_consistent {
        None => ("doubling-fails", None),
        Some(true) => ("consistent", None),
        Some(false) => (
            "inconsistent",
            Some(format!(
                "rate equivalence broken: err bounded = {}, best bounded = {}, coeff bounded = {}",
                report.bounded_err, report.bounded_best, report.bounded_coeff
            )),
        ),
    };
    let json = json_summary(Command::Rate, cfg, verdict, &out)?;
    Ok(Outcome {
        table,
        json,
        failure,
    })
}

#[derive(Serialize)]
struct ModulusReport {
    n: u64,
    n_ref: u64,
    m: usize,
    t: Vec<f64>,
    omega: Vec<f64>,
    flags: Vec<ModulusFlag>,
    nondecreasing: bool,
}

fn modulus(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let seq = family(cfg)?;
    let n = cfg.modulus.n.unwrap_or(64);
    let t_max = cfg.modulus.t_max.unwrap_or(std::f64::consts::PI);
    let points = cfg.modulus.t_points.unwrap_or(16);
    if points < 2 {
        return Err(HarnessError::Config("t_points must be at least 2".into()));
    }
    let policy = cfg.plan_policy();
    let plan = SynthesisPlan::from_policy(n, &policy)?;
    let reference = reference_values(&seq, &plan, policy.k_cap)?;
    let mut report = ModulusReport {
        n,
        n_ref: plan.n_ref,
        m: plan.m,
        t: Vec::with_capacity(points),
        omega: Vec::with_capacity(points),
        flags: Vec::with_capacity(points),
        nondecreasing: true,
    };
    let mut table = Table::new(&["t", "omega"]);
    for i in 0..points {
        let t = t_max * i as f64 / (points - 1) as f64;
        let w = modulus_of_continuity(&reference.values, t, MAX_SHIFTS)?;
        table.push(vec![fmt_g(t), fmt_g(w.omega)]);
        report.t.push(t);
        report.omega.push(w.omega);
        report.flags.push(w.flag);
    }
    report.nondecreasing = report.omega.windows(2).all(|w| w[1] >= w[0]);
    let failure = (!report.nondecreasing).then(|| "omega decreased along the t grid".to_owned());
    let verdict = if report.nondecreasing {
        "nondecreasing"
    } else {
        "not-monotone"
    };
    let json = json_summary(Command::Modulus, cfg, verdict, &report)?;
    Ok(Outcome {
        table,
        json,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_args(args: &[&str]) -> Result<ExperimentConfig, HarnessError> {
        let cli = Cli::try_parse_from(args).map_err(|e| HarnessError::Config(e.to_string()))?;
        resolve(&cli.command)
    }

    #[test]
    fn flags_fill_config() {
        let cfg = resolve_args(&[
            "mvbv", "converge", "--family", "finite", "--coeffs", "1,-0.5", "--n", "1:8:x2",
            "--mu", "1.25",
        ])
        .unwrap();
        assert_eq!(cfg.command, Some(Command::Converge));
        assert_eq!(cfg.coeffs, vec![1.0, -0.5]);
        assert_eq!(cfg.converge.n.unwrap().values(), vec![1, 2, 4, 8]);
        assert_eq!(cfg.plan_policy().mu, 1.25);
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(
            &path,
            "family = \"inv_n\"\n[params]\n\n[check-mvbv]\nlambda = 3.0\nm = \"2:64:x2\"\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let cfg = resolve_args(&["mvbv", "check-mvbv", "--config", p, "--lambda", "2"]).unwrap();
        assert_eq!(cfg.check_mvbv.lambda, Some(2.0));
        assert_eq!(cfg.check_mvbv.m.unwrap().stop, 64);
        assert_eq!(cfg.family.as_deref(), Some("inv_n"));
        assert!(resolve_args(&["mvbv", "kernels", "--config", p]).is_ok());
        std::fs::write(&path, "command = \"rate\"\n").unwrap();
        assert!(resolve_args(&["mvbv", "kernels", "--config", p]).is_err());
    }

    #[test]
    fn params_and_alpha() {
        let cfg = resolve_args(&[
            "mvbv",
            "rate",
            "--family",
            "complex_sector",
            "--alpha",
            "2",
            "--param",
            "phi=0.25",
            "--psi",
            "inv_sqrt",
        ])
        .unwrap();
        assert_eq!(cfg.params["alpha"], 2.0);
        assert_eq!(cfg.params["phi"], 0.25);
        assert!(resolve_args(&["mvbv", "rate", "--param", "phi"]).is_err());
    }

    #[test]
    fn check_mvbv_outcome() {
        let cfg = resolve_args(&[
            "mvbv",
            "check-mvbv",
            "--family",
            "inv_n",
            "--m",
            "2:4096:x2",
        ])
        .unwrap();
        let out = run_config(&cfg).unwrap();
        assert_eq!(out.table.rows.len(), 12);
        assert!(out.failure.is_none());
        let v: serde_json::Value = serde_json::from_slice(&out.json).unwrap();
        assert_eq!(v["verdict"], "bounded-evidence");
        assert_eq!(v["tool"], "mvbv");
        assert_eq!(v["config"]["family"], "inv_n");
    }

    #[test]
    fn missing_family_is_config_error() {
        let cfg = resolve_args(&["mvbv", "converge"]).unwrap();
        assert!(matches!(run_config(&cfg), Err(HarnessError::Config(_))));
    }
}
