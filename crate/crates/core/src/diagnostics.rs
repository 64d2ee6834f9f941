//! Experiment runners tying coefficient conditions to `L¹` convergence of partial sums.
//!
//! Every limit is replaced by a trend over a finite `n` grid, so reports carry
//! the raw columns next to whatever verdict is derived from them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::mvbv::{condition_two_sum, Ratio, RatioFlag};
use crate::quadrature::l1_distance;
use crate::sequences::{abs_arg, CoefficientSequence};
use crate::synthesis::{
    reference_values, sample_coefficients, sample_partial_sum, sample_vallee_poussin, PlanPolicy,
    Reference, SynthesisPlan,
};
use crate::{floor_index, log_index, Complex, Error, Result};

/// Quality label attached to a computed row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RowFlag {
    Ok,
    /// No tail bound is known, so only the estimate is available.
    EstimateOnly,
    /// The tail bound decays slowly in `N_ref`; treat the row as trend evidence.
    SlowTail,
}

impl RowFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::EstimateOnly => "estimate-only",
            RowFlag::SlowTail => "slow-tail",
        }
    }

    fn of(reference: &Reference) -> Self {
        if reference.tail_bound.is_none() {
            RowFlag::EstimateOnly
        } else if reference.slow_tail {
            RowFlag::SlowTail
        } else {
            RowFlag::Ok
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TraceVerdict {
    BothVanish,
    BothPersist,
    Mismatch,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceTrace {
    pub n_grid: Vec<u64>,
    /// `‖f − S_n‖_L` against the reference.
    pub err: Vec<f64>,
    /// Reference tail bound, `None` when the family declares no tail.
    pub tail: Vec<Option<f64>>,
    /// `err` plus the reference tail bound.
    pub err_bound: Vec<f64>,
    /// `max(|f̂(n)|, |f̂(−n)|) log n`
    pub coeff_log: Vec<f64>,
    pub cond2: Vec<f64>,
    pub flags: Vec<RowFlag>,
    pub verdict: TraceVerdict,
}

/// Below this `last/first` ratio a column counts as vanishing.
pub const VANISH_RATIO: f64 = 0.5;

/// `Some(true)` for a vanishing column, `Some(false)` for a persisting one.
pub fn vanishes(first: f64, last: f64) -> Option<bool> {
    if !(first.is_finite() && last.is_finite()) || first < 0.0 || last < 0.0 {
        return None;
    }
    if first == 0.0 {
        return Some(last == 0.0);
    }
    Some(last / first < VANISH_RATIO)
}

/// Sign of `log(last/first)`, or `None` when the ratio is within 10% of 1.
pub fn co_trend_sign(first: f64, last: f64) -> Option<i8> {
    if !(first > 0.0 && last > 0.0) {
        return None;
    }
    let r = last / first;
    if (r - 1.0).abs() < 0.1 {
        None
    } else if r > 1.0 {
        Some(1)
    } else {
        Some(-1)
    }
}

fn check_grid(n_grid: &[u64]) -> Result<()> {
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("n grid is empty".into()));
    }
    if n_grid[0] == 0 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "n grid must be strictly increasing and start at n >= 1".into(),
        ));
    }
    Ok(())
}

fn coeff_log(seq: &CoefficientSequence, n: u64) -> f64 {
    let n = n as i64;
    seq.at(n).norm().max(seq.at(-n).norm()) * log_index(n)
}

struct RowContext {
    plan: SynthesisPlan,
    reference: Reference,
}

impl RowContext {
    fn new(seq: &CoefficientSequence, n: u64, policy: &PlanPolicy) -> Result<Self> {
        let plan = SynthesisPlan::from_policy(n, policy)?;
        let reference = reference_values(seq, &plan, policy.k_cap)?;
        Ok(RowContext { plan, reference })
    }

    fn err(&self, seq: &CoefficientSequence, n: u64) -> Result<f64> {
        let s = sample_partial_sum(seq, n, self.plan.m)?;
        l1_distance(&self.reference.values, &s)
    }

    fn proxy(&self, seq: &CoefficientSequence, n: u64, mu: f64) -> Result<f64> {
        let t = sample_vallee_poussin(seq, n, mu, self.plan.m)?;
        l1_distance(&self.reference.values, &t)
    }
}

pub fn convergence_trace(
    seq: &CoefficientSequence,
    n_grid: &[u64],
    policy: &PlanPolicy,
) -> Result<ConvergenceTrace> {
    check_grid(n_grid)?;
    let rows = n_grid.len();
    let mut trace = ConvergenceTrace {
        n_grid: n_grid.to_vec(),
        err: Vec::with_capacity(rows),
        tail: Vec::with_capacity(rows),
        err_bound: Vec::with_capacity(rows),
        coeff_log: Vec::with_capacity(rows),
        cond2: Vec::with_capacity(rows),
        flags: Vec::with_capacity(rows),
        verdict: TraceVerdict::Inconclusive,
    };
    for &n in n_grid {
        let ctx = RowContext::new(seq, n, policy)?;
        let err = ctx.err(seq, n)?;
        trace.err.push(err);
        trace.tail.push(ctx.reference.tail_bound);
        trace
            .err_bound
            .push(err + ctx.reference.tail_bound.unwrap_or(0.0));
        trace.coeff_log.push(coeff_log(seq, n));
        trace.cond2.push(condition_two_sum(seq, n, policy.mu)?);
        trace.flags.push(RowFlag::of(&ctx.reference));
    }
    let last = rows - 1;
    trace.verdict = match (
        vanishes(trace.err[0], trace.err[last]),
        vanishes(trace.coeff_log[0], trace.coeff_log[last]),
    ) {
        (Some(true), Some(true)) => TraceVerdict::BothVanish,
        (Some(false), Some(false)) => TraceVerdict::BothPersist,
        (Some(_), Some(_)) => TraceVerdict::Mismatch,
        _ => TraceVerdict::Inconclusive,
    };
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Lemma2Form {
    /// Coefficients on `(n, 2n]` are real and nonnegative.
    Sharp,
    /// Coefficients lie in a sector of half-angle `θ < π/2`.
    SectorCorrected,
    /// Outside any usable sector: `|Σ f̂(n+k)/k|` is bounded instead.
    Unconditional,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma2Report {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub err: f64,
    pub tail: Option<f64>,
    pub theta: f64,
    pub constant: f64,
    pub form: Lemma2Form,
    pub ratio: f64,
    pub pass: bool,
    pub flag: RowFlag,
}

/// `3/√π`, from `|Σ_{k=1}^n sin kx / k| ≤ 3√π` and `∫(f − S_n)φ_n = −2π Σ f̂(n+k)/k`.
pub const LEMMA2_CONSTANT: f64 = 1.692_568_750_643_269;

/// `Σ_{k=1}^{n} |f̂(n+k)|/k ≤ (3/(√π cos θ)) ‖f − S_n‖_L` with the error
/// taken as estimate plus tail bound.
pub fn lemma2_check(
    seq: &CoefficientSequence,
    n: u64,
    policy: &PlanPolicy,
) -> Result<Lemma2Report> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let ctx = RowContext::new(seq, n, policy)?;
    let err = ctx.err(seq, n)?;
    Ok(lemma2_bound(
        seq,
        n,
        err,
        ctx.reference.tail_bound,
        RowFlag::of(&ctx.reference),
    ))
}

/// The same inequality evaluated on an already computed error and tail bound.
pub fn lemma2_bound(
    seq: &CoefficientSequence,
    n: u64,
    err: f64,
    tail: Option<f64>,
    flag: RowFlag,
) -> Lemma2Report {
    let ni = n as i64;
    let theta = (ni + 1..=2 * ni)
        .map(|k| abs_arg(seq.at(k)))
        .fold(0.0, f64::max);
    let (form, constant) = if theta == 0.0 {
        (Lemma2Form::Sharp, LEMMA2_CONSTANT)
    } else if theta < 0.5 * PI {
        (Lemma2Form::SectorCorrected, LEMMA2_CONSTANT / theta.cos())
    } else {
        (Lemma2Form::Unconditional, LEMMA2_CONSTANT)
    };
    let lhs = match form {
        Lemma2Form::Unconditional => (1..=ni)
            .map(|k| seq.at(ni + k) / k as f64)
            .sum::<Complex>()
            .norm(),
        _ => (1..=ni).map(|k| seq.at(ni + k).norm() / k as f64).sum(),
    };
    let rhs = constant * (err + tail.unwrap_or(0.0));
    let r = Ratio::of(lhs, rhs);
    Lemma2Report {
        n,
        lhs,
        rhs,
        err,
        tail,
        theta,
        constant,
        form,
        ratio: r.value,
        pass: lhs <= rhs,
        flag,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NecessityRow {
    pub n: u64,
    /// `max(|f̂(2n)|, |f̂(2n+1)|) log n`
    pub lhs: f64,
    /// Window-average term, without its constant.
    pub i1: f64,
    /// `Σ_{j=1}^{J} |f̂(n+j)|/j`, without its constant.
    pub i2: f64,
    /// `lhs / (i1 + i2)`.
    pub c: f64,
    pub flag: RatioFlag,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NecessityReport {
    pub lambda: f64,
    pub rows: Vec<NecessityRow>,
    /// max/min of the finite nonzero `c` over the top half of the grid.
    pub spread: f64,
    pub bounded: bool,
}

/// Spread above which the empirical constant counts as growing.
pub const NECESSITY_SPREAD: f64 = 4.0;

/// Empirical constant in
///
/// ```text
/// |f̂(2n)| log n ≤ C [ (1/n) Σ_{j=[λ]+1}^{J} (1/j) Σ_{k=[(n+j)/λ]}^{[λ(n+j)]} |f̂(k)|
///                     + Σ_{j=1}^{J} |f̂(n+j)|/j ],     J = [n/(λ+1)²],
/// ```
///
/// with both sums taken literally. Only nonnegative indices are used.
pub fn necessity_check(
    seq: &CoefficientSequence,
    n_grid: &[u64],
    lambda: f64,
) -> Result<NecessityReport> {
    check_grid(n_grid)?;
    if !(lambda >= 2.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be >= 2, got {lambda}"
        )));
    }
    let abs = |k: i64| seq.at(k).norm();
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let ni = n as i64;
        let big_j = floor_index(n as f64 / ((lambda + 1.0) * (lambda + 1.0)));
        let lhs = abs(2 * ni).max(abs(2 * ni + 1)) * log_index(ni);
        let mut i1 = 0.0;
        for j in floor_index(lambda) + 1..=big_j {
            let m = (ni + j) as f64;
            let inner: f64 = (floor_index(m / lambda)..=floor_index(lambda * m))
                .map(abs)
                .sum();
            i1 += inner / j as f64;
        }
        i1 /= n as f64;
        let i2: f64 = (1..=big_j).map(|j| abs(ni + j) / j as f64).sum();
        let r = Ratio::of(lhs, i1 + i2);
        rows.push(NecessityRow {
            n,
            lhs,
            i1,
            i2,
            c: r.value,
            flag: r.flag,
        });
    }
    let top: Vec<f64> = rows[rows.len() / 2..]
        .iter()
        .filter(|r| r.flag == RatioFlag::Finite && r.c > 0.0)
        .map(|r| r.c)
        .collect();
    let any_infinite = rows[rows.len() / 2..]
        .iter()
        .any(|r| r.flag == RatioFlag::InfiniteRatio);
    let spread = if top.is_empty() {
        1.0
    } else {
        let hi = top.iter().copied().fold(0.0, f64::max);
        let lo = top.iter().copied().fold(f64::INFINITY, f64::min);
        hi / lo
    };
    Ok(NecessityReport {
        lambda,
        rows,
        spread,
        bounded: !any_infinite && spread < NECESSITY_SPREAD,
    })
}

/// `‖f − τ_{μn,n}(f)‖_L`, an upper proxy for the best approximation `E_n(f)_L` up to a factor depending on `μ`.
pub fn best_approx_proxy(
    seq: &CoefficientSequence,
    n: u64,
    mu: f64,
    policy: &PlanPolicy,
) -> Result<f64> {
    let policy = PlanPolicy { mu, ..*policy };
    let ctx = RowContext::new(seq, n, &policy)?;
    ctx.proxy(seq, n, mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ModulusFlag {
    Exact,
    /// `t` is below one grid step; the one-step value is returned.
    BelowGridStep,
    /// Too many shifts to try them all; an evenly strided subset was used.
    Strided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Modulus {
    pub omega: f64,
    pub flag: ModulusFlag,
}

fn shift_norm(values: &[Complex], s: usize) -> f64 {
    let m = values.len();
    let sum: f64 = (0..m)
        .map(|j| (values[(j + s) % m] - values[j]).norm())
        .sum();
    2.0 * PI / m as f64 * sum
}

/// `ω(f, t)_L = max_{0≤h≤t} ‖f(·+h) − f‖_L` over whole-step circular shifts of uniform samples.
pub fn modulus_of_continuity(values: &[Complex], t: f64, max_shifts: usize) -> Result<Modulus> {
    let m = values.len();
    if m < 16 {
        return Err(Error::InvalidArgument(format!(
            "need at least 16 samples, got {m}"
        )));
    }
    if !(0.0..=PI).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "t must lie in [0, pi], got {t}"
        )));
    }
    if max_shifts == 0 {
        return Err(Error::InvalidArgument("max_shifts must be >= 1".into()));
    }
    if t == 0.0 {
        return Ok(Modulus {
            omega: 0.0,
            flag: ModulusFlag::Exact,
        });
    }
    let step = 2.0 * PI / m as f64;
    let s_max = floor_index(t / step * (1.0 + 1e-12)) as usize;
    if s_max == 0 {
        return Ok(Modulus {
            omega: shift_norm(values, 1),
            flag: ModulusFlag::BelowGridStep,
        });
    }
    let (shifts, flag): (Vec<usize>, _) = if s_max <= max_shifts {
        ((1..=s_max).collect(), ModulusFlag::Exact)
    } else {
        let stride = s_max.div_ceil(max_shifts);
        let mut s: Vec<usize> = (1..=s_max / stride).map(|i| i * stride).collect();
        if s.last() != Some(&s_max) {
            s.push(s_max);
        }
        (s, ModulusFlag::Strided)
    };
    let omega = shifts
        .into_iter()
        .map(|s| shift_norm(values, s))
        .fold(0.0, f64::max);
    Ok(Modulus { omega, flag })
}

/// Comparison sequence `ψ_n` for rate checks.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Psi {
    /// `1/n`
    InvN,
    /// `(n+1)^{-1/2}`
    InvSqrt,
    /// `2^{-n}`
    Geometric,
    /// `(n+1)^{-p}`
    Power(f64),
    Tabulated {
        id: String,
        n: Vec<u64>,
        values: Vec<f64>,
    },
}

impl Psi {
    /// Parses `inv_n`, `inv_sqrt`, `geometric` or `pow:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "inv_n" => Ok(Psi::InvN),
            "inv_sqrt" => Ok(Psi::InvSqrt),
            "geometric" => Ok(Psi::Geometric),
            _ => s
                .strip_prefix("pow:")
                .and_then(|p| p.parse::<f64>().ok())
                .filter(|p| *p > 0.0 && p.is_finite())
                .map(Psi::Power)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown psi '{s}'"))),
        }
    }

    pub fn id(&self) -> String {
        match self {
            Psi::InvN => "inv_n".into(),
            Psi::InvSqrt => "inv_sqrt".into(),
            Psi::Geometric => "geometric".into(),
            Psi::Power(p) => format!("pow:{p}"),
            Psi::Tabulated { id, .. } => id.clone(),
        }
    }

    pub fn eval(&self, n: u64) -> Option<f64> {
        let x = n as f64;
        match self {
            Psi::InvN => (n > 0).then(|| 1.0 / x),
            Psi::InvSqrt => Some((x + 1.0).powf(-0.5)),
            Psi::Geometric => Some((-x * core::f64::consts::LN_2).exp()),
            Psi::Power(p) => Some((x + 1.0).powf(-p)),
            Psi::Tabulated {
                n: grid, values, ..
            } => grid.iter().position(|g| *g == n).map(|i| values[i]),
        }
    }
}

/// Smallest accepted `ψ_{2n}/ψ_n`.
pub const DOUBLING_FLOOR: f64 = 0.01;

/// `c ≤ ψ_{2n}/ψ_n ≤ 1` for every `n` in the grid where both values are available.
pub fn check_doubling(psi: &Psi, n_grid: &[u64], floor: f64) -> bool {
    let mut pairs = 0;
    for &n in n_grid {
        if let (Some(a), Some(b)) = (psi.eval(n), psi.eval(2 * n)) {
            pairs += 1;
            let r = b / a;
            if !(a > 0.0 && (floor..=1.0).contains(&r)) {
                return false;
            }
        }
    }
    pairs > 0
}

/// The top half of a column stays within twice the bottom half's maximum.
pub fn column_bounded(column: &[f64]) -> bool {
    if column.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let half = column.len() / 2;
    if half == 0 {
        return true;
    }
    let lo = column[..half].iter().copied().fold(0.0, f64::max);
    let hi = column[half..].iter().copied().fold(0.0, f64::max);
    hi <= 2.0 * lo
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateReport {
    pub psi_id: String,
    pub n_grid: Vec<u64>,
    pub psi: Vec<f64>,
    pub err: Vec<f64>,
    pub ratio_err: Vec<f64>,
    pub ratio_best: Vec<f64>,
    pub ratio_coeff: Vec<f64>,
    pub doubling_ok: bool,
    pub bounded_err: bool,
    pub bounded_best: bool,
    pub bounded_coeff: bool,
    /// `None` when the doubling condition fails and the equivalence says nothing.
    pub equivalence_consistent: Option<bool>,
    pub flags: Vec<RowFlag>,
}

pub fn rate_check(
    seq: &CoefficientSequence,
    psi: &Psi,
    n_grid: &[u64],
    mu: f64,
    policy: &PlanPolicy,
) -> Result<RateReport> {
    check_grid(n_grid)?;
    let mut psi_values = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        match psi.eval(n) {
            Some(v) if v > 0.0 && v.is_finite() => psi_values.push(v),
            _ => {
                return Err(Error::NonMonotoneRate(format!(
                    "psi '{}' is not positive at n = {n}",
                    psi.id()
                )))
            }
        }
    }
    if psi_values.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::NonMonotoneRate(format!(
            "psi '{}' increases on the n grid",
            psi.id()
        )));
    }
    let policy = PlanPolicy { mu, ..*policy };
    let mut report = RateReport {
        psi_id: psi.id(),
        n_grid: n_grid.to_vec(),
        psi: psi_values,
        err: Vec::new(),
        ratio_err: Vec::new(),
        ratio_best: Vec::new(),
        ratio_coeff: Vec::new(),
        doubling_ok: check_doubling(psi, n_grid, DOUBLING_FLOOR),
        bounded_err: false,
        bounded_best: false,
        bounded_coeff: false,
        equivalence_consistent: None,
        flags: Vec::new(),
    };
    for (&n, &p) in n_grid.iter().zip(&report.psi) {
        let ctx = RowContext::new(seq, n, &policy)?;
        let err = ctx.err(seq, n)?;
        report.err.push(err);
        report.ratio_err.push(err / p);
        report.ratio_best.push(ctx.proxy(seq, n, mu)? / p);
        report.ratio_coeff.push(coeff_log(seq, n) / p);
        report.flags.push(RowFlag::of(&ctx.reference));
    }
    report.bounded_err = column_bounded(&report.ratio_err);
    report.bounded_best = column_bounded(&report.ratio_best);
    report.bounded_coeff = column_bounded(&report.ratio_coeff);
    if report.doubling_ok {
        let rhs = report.bounded_best && report.bounded_coeff;
        report.equivalence_consistent = Some(report.bounded_err == rhs);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Corollary3Report {
    pub r: u32,
    /// `ω(f^{(r)}, 1/(n+1))_L` on the grid.
    pub omega: Vec<f64>,
    pub omega_flags: Vec<ModulusFlag>,
    pub rate: RateReport,
}

/// Shifts tried per modulus evaluation before striding.
pub const MAX_SHIFTS: usize = 4096;

/// Rate check against `ψ_n = (n+1)^{−r} ω(f^{(r)}, 1/(n+1))_L`.
pub fn corollary3_check(
    seq: &CoefficientSequence,
    r: u32,
    n_grid: &[u64],
    policy: &PlanPolicy,
) -> Result<Corollary3Report> {
    check_grid(n_grid)?;
    if r == 0 {
        return Err(Error::InvalidArgument(
            "r must be a positive integer".into(),
        ));
    }
    let summable = seq.degree().is_some()
        || seq
            .decay_exponent()
            .is_some_and(|beta| beta - r as f64 > 1.0);
    if !summable {
        return Err(Error::DerivativeNotSummable {
            family: seq.family_id().into(),
            r,
        });
    }
    let mut omega = Vec::with_capacity(n_grid.len());
    let mut omega_flags = Vec::with_capacity(n_grid.len());
    let mut values = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let plan = SynthesisPlan::from_policy(n, policy)?;
        let deriv = sample_coefficients(
            plan.n_ref,
            |k| seq.at(k) * Complex::new(0.0, k as f64).powi(r as i32),
            plan.m,
        )?;
        let w = modulus_of_continuity(&deriv, 1.0 / (n as f64 + 1.0), MAX_SHIFTS)?;
        omega.push(w.omega);
        omega_flags.push(w.flag);
        values.push(w.omega / (n as f64 + 1.0).powi(r as i32));
    }
    let psi = Psi::Tabulated {
        id: format!("omega_r{r}"),
        n: n_grid.to_vec(),
        values,
    };
    let rate = rate_check(seq, &psi, n_grid, policy.mu, policy)?;
    Ok(Corollary3Report {
        r,
        omega,
        omega_flags,
        rate,
    })
}
