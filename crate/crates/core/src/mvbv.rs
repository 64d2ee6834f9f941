//! Finite-range diagnostics for the mean value bounded variation condition
//!
//! ```text
//! Σ_{k=m}^{2m} |Δc_k|  ≤  C · (1/m) Σ_{k=[m/λ]}^{[λm]} |c_k|     for all m ≥ 1,
//! ```
//!
//! for the companion condition on `|Δf̂(k) − Δf̂(−k)| log k` over `[n, μn]`,
//! and for the `log`-weighted variation estimate over `[n, μn]`.
//!
//! A finite scan can only produce evidence, so every verdict is labelled as such.

use alloc::format;
use alloc::vec::Vec;

use crate::sequences::{CoefficientSequence, Side};
use crate::{floor_index, log_index, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RatioFlag {
    Finite,
    /// Denominator exactly zero, numerator not: ratio is `+∞`.
    InfiniteRatio,
    /// Both sums exactly zero: ratio is `0` by convention.
    ZeroOverZero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ratio {
    pub value: f64,
    pub flag: RatioFlag,
}

impl Ratio {
    pub(crate) fn of(num: f64, den: f64) -> Self {
        match (num == 0.0, den == 0.0) {
            (true, true) => Ratio {
                value: 0.0,
                flag: RatioFlag::ZeroOverZero,
            },
            (false, true) => Ratio {
                value: f64::INFINITY,
                flag: RatioFlag::InfiniteRatio,
            },
            _ => Ratio {
                value: num / den,
                flag: RatioFlag::Finite,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    BoundedEvidence,
    GrowthEvidence,
    Inconclusive,
}

/// Slope thresholds applied to the log-log trend of the ratio scan.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanThresholds {
    pub bounded_slope: f64,
    pub growth_slope: f64,
}

impl Default for ScanThresholds {
    fn default() -> Self {
        ScanThresholds {
            bounded_slope: 0.05,
            growth_slope: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MvbvReport {
    pub lambda: f64,
    pub m_values: Vec<u64>,
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
    pub trend_slope: f64,
    pub verdict: Verdict,
    pub flags: Vec<RatioFlag>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 2.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be >= 2, got {lambda}"
        )));
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 1.0 && mu < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "mu must lie in (1, 2), got {mu}"
        )));
    }
    Ok(())
}

/// Block variation over `[m, 2m]` divided by the windowed mean over `[[m/λ], [λm]]`.
pub fn mvbv_ratio(seq: &CoefficientSequence, m: u64, lambda: f64) -> Result<Ratio> {
    check_lambda(lambda)?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let m = m as i64;
    let numerator: f64 = (m..=2 * m).map(|k| seq.diff(k, Side::Plus).norm()).sum();
    let lo = floor_index(m as f64 / lambda);
    let hi = floor_index(lambda * m as f64);
    let window: f64 = (lo..=hi).map(|k| seq.at(k).norm()).sum();
    Ok(Ratio::of(numerator, window / m as f64))
}

/// Least-squares slope of `log y` against `log x`, skipping zero and infinite `y`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| **y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn mvbv_scan(seq: &CoefficientSequence, m_grid: &[u64], lambda: f64) -> Result<MvbvReport> {
    mvbv_scan_with(seq, m_grid, lambda, ScanThresholds::default())
}

/// Ratios over `m_grid` with a trend verdict.
pub fn mvbv_scan_with(
    seq: &CoefficientSequence,
    m_grid: &[u64],
    lambda: f64,
    thresholds: ScanThresholds,
) -> Result<MvbvReport> {
    check_lambda(lambda)?;
    if m_grid.is_empty() || m_grid[0] < 1 || m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "m grid must be nonempty, strictly increasing and start at >= 1".into(),
        ));
    }
    let mut ratios = Vec::with_capacity(m_grid.len());
    let mut flags = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        let r = mvbv_ratio(seq, m, lambda)?;
        ratios.push(r.value);
        flags.push(r.flag);
    }
    let sup_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let ms: Vec<f64> = m_grid.iter().map(|m| *m as f64).collect();
    let trend_slope = log_log_slope(&ms, &ratios);
    let any_infinite = flags.contains(&RatioFlag::InfiniteRatio);
    let verdict = if trend_slope >= thresholds.growth_slope {
        Verdict::GrowthEvidence
    } else if trend_slope <= thresholds.bounded_slope && !any_infinite {
        Verdict::BoundedEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(MvbvReport {
        lambda,
        m_values: m_grid.to_vec(),
        ratios,
        sup_ratio,
        trend_slope,
        verdict,
        flags,
    })
}

/// `Σ_{k=n}^{[μn]} |Δf̂(k) − Δf̂(−k)| log k`.
pub fn condition_two_sum(seq: &CoefficientSequence, n: u64, mu: f64) -> Result<f64> {
    if !seq.is_two_sided() {
        return Err(Error::OutOfSupport {
            index: -(n as i64) - 1,
        });
    }
    let n = n as i64;
    let upper = floor_index(mu * n as f64);
    if n < 1 || upper < n {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and [mu n] >= n (n = {n}, [mu n] = {upper})"
        )));
    }
    Ok((n..=upper)
        .map(|k| (seq.diff(k, Side::Plus) - seq.diff(k, Side::Minus)).norm() * log_index(k))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionTwoRow {
    pub mu: f64,
    /// Largest sum over the top half of the n grid.
    pub limsup_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionTwoReport {
    pub rows: Vec<ConditionTwoRow>,
    /// Estimates are nonincreasing as μ decreases and end below where they start (or are all 0).
    pub evidence: bool,
}

/// Table approximating `lim_{μ→1+} limsup_n` of [`condition_two_sum`].
pub fn condition_two_scan(
    seq: &CoefficientSequence,
    mu_list: &[f64],
    n_grid: &[u64],
) -> Result<ConditionTwoReport> {
    if mu_list.is_empty() || n_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "mu list and n grid must be nonempty".into(),
        ));
    }
    if mu_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidArgument(
            "mu list must be strictly decreasing".into(),
        ));
    }
    let top = &n_grid[n_grid.len() / 2..];
    let mut rows = Vec::with_capacity(mu_list.len());
    for &mu in mu_list {
        check_mu(mu)?;
        let mut best: f64 = 0.0;
        for &n in top {
            best = best.max(condition_two_sum(seq, n, mu)?);
        }
        rows.push(ConditionTwoRow {
            mu,
            limsup_estimate: best,
        });
    }
    let est: Vec<f64> = rows.iter().map(|r| r.limsup_estimate).collect();
    let nonincreasing = est.windows(2).all(|w| w[1] <= w[0]);
    let all_zero = est.iter().all(|v| *v == 0.0);
    let evidence = nonincreasing && (all_zero || est[est.len() - 1] < est[0]);
    Ok(ConditionTwoReport { rows, evidence })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma1Report {
    /// `Σ_{k=n}^{[μn]} |Δc_k| log k`
    pub lhs: f64,
    /// `max_{[n/λ] ≤ k ≤ [λn]} |c_k| log k`
    pub rhs_scale: f64,
    pub ratio: f64,
    pub flag: RatioFlag,
}

/// Compares the log-weighted variation on `[n, μn]` with the largest
/// `|c_k| log k` on the wider window `[n/λ, λn]`.
pub fn lemma1_check(
    seq: &CoefficientSequence,
    n: u64,
    mu: f64,
    lambda: f64,
) -> Result<Lemma1Report> {
    check_mu(mu)?;
    check_lambda(lambda)?;
    let lo = floor_index(n as f64 / lambda);
    if lo < 1 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} too small: [n/lambda] must be >= 1"
        )));
    }
    let n = n as i64;
    let upper = floor_index(mu * n as f64);
    let lhs: f64 = (n..=upper)
        .map(|k| seq.diff(k, Side::Plus).norm() * log_index(k))
        .sum();
    let hi = floor_index(lambda * n as f64);
    let rhs_scale = (lo..=hi)
        .map(|k| seq.at(k).norm() * log_index(k))
        .fold(0.0, f64::max);
    let r = Ratio::of(lhs, rhs_scale);
    Ok(Lemma1Report {
        lhs,
        rhs_scale,
        ratio: r.value,
        flag: r.flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{builtin_families, make_family, FamilyDescriptor, Symmetry};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn family(id: &str) -> CoefficientSequence {
        make_family(&FamilyDescriptor::new(id)).unwrap()
    }

    fn constant() -> CoefficientSequence {
        family("constant")
    }

    fn dyadic(lo: u32, hi: u32) -> Vec<u64> {
        (lo..=hi).map(|j| 1u64 << j).collect()
    }

    /// Independent double-loop evaluation of the ratio.
    fn naive_ratio(c: &dyn Fn(i64) -> f64, m: i64, lambda: f64) -> f64 {
        let mut num = 0.0;
        let mut k = m;
        while k <= 2 * m {
            num += (c(k + 1) - c(k)).abs();
            k += 1;
        }
        let lo = (m as f64 / lambda) as i64;
        let hi = (lambda * m as f64) as i64;
        let mut den = 0.0;
        for j in lo..=hi {
            den += c(j).abs();
        }
        num / (den / m as f64)
    }

    #[test]
    fn ratio_inv_n_m4() {
        // 5/36 over (1/4)(1/2 + ... + 1/8), frozen from the brute-force sums
        let r = mvbv_ratio(&family("inv_n"), 4, 2.0).unwrap();
        assert_eq!(r.flag, RatioFlag::Finite);
        assert_abs_diff_eq!(r.value, 0.323_400_323_400_323_4, epsilon = 1e-12);
    }

    #[test]
    fn ratio_matches_naive_oracle() {
        for seq in builtin_families() {
            let c = |k: i64| seq.coeff(k).unwrap().re;
            if seq.symmetry() != Symmetry::RealEven {
                continue;
            }
            for m in 1..=64 {
                for lambda in [2.0, 2.5, 3.0] {
                    let fast = mvbv_ratio(&seq, m, lambda).unwrap();
                    if fast.flag != RatioFlag::Finite {
                        continue;
                    }
                    let slow = naive_ratio(&c, m as i64, lambda);
                    assert!(
                        (fast.value - slow).abs() <= 1e-12 * slow.abs().max(1.0),
                        "{} m={m}",
                        seq.family_id()
                    );
                }
            }
        }
    }

    #[test]
    fn constant_sequence_has_zero_ratio() {
        let r = mvbv_ratio(&constant(), 7, 2.0).unwrap();
        assert_eq!(r.value, 0.0);
        let scan = mvbv_scan(&constant(), &dyadic(1, 12), 2.0).unwrap();
        assert_eq!(scan.sup_ratio, 0.0);
        assert_eq!(scan.verdict, Verdict::BoundedEvidence);
    }

    #[test]
    fn ratio_flags() {
        let zero = make_family(&FamilyDescriptor::new("finite").with_coeffs(&[0.0])).unwrap();
        assert_eq!(
            mvbv_ratio(&zero, 3, 2.0).unwrap().flag,
            RatioFlag::ZeroOverZero
        );
        // window [1, 2] is empty of mass but Δc_2 ≠ 0
        let spike =
            make_family(&FamilyDescriptor::new("finite").with_coeffs(&[0.0, 0.0, 0.0, 1.0]))
                .unwrap();
        let r = mvbv_ratio(&spike, 1, 2.0).unwrap();
        assert_eq!(r.flag, RatioFlag::InfiniteRatio);
        assert!(r.value.is_infinite());
        assert!(mvbv_ratio(&spike, 1, 1.5).is_err());
        assert!(mvbv_ratio(&spike, 0, 2.0).is_err());
    }

    #[test]
    fn lacunary_ratio_grows() {
        let s = family("lacunary_spike");
        let r16 = mvbv_ratio(&s, 16, 2.0).unwrap().value;
        let r64 = mvbv_ratio(&s, 64, 2.0).unwrap().value;
        assert!(r64 > r16);
    }

    #[test]
    fn scan_verdicts() {
        let grid = dyadic(1, 12);
        for id in ["inv_n", "inv_log", "inv_log_sq"] {
            let r = mvbv_scan(&family(id), &grid, 2.0).unwrap();
            assert_eq!(r.verdict, Verdict::BoundedEvidence, "{id}: {r:?}");
        }
        let r = mvbv_scan(&family("lacunary_spike"), &grid, 2.0).unwrap();
        assert_eq!(r.verdict, Verdict::GrowthEvidence);
        assert!(mvbv_scan(&family("inv_n"), &[], 2.0).is_err());
        assert!(mvbv_scan(&family("inv_n"), &[4, 2], 2.0).is_err());
    }

    #[test]
    fn oscillating_family_is_not_mvbv() {
        // (2 + (−1)^k)/k varies by ~2 log 2 on [m, 2m] while its window mean is ~2.77/m
        let r = mvbv_scan(&family("oscillating_mvbv"), &dyadic(1, 12), 2.0).unwrap();
        assert!(r.trend_slope > 0.9);
        assert_eq!(r.verdict, Verdict::GrowthEvidence);
    }

    #[test]
    fn scan_thresholds_are_configurable() {
        let t = ScanThresholds {
            bounded_slope: -1.0,
            growth_slope: 0.5,
        };
        let r = mvbv_scan_with(&family("inv_n"), &dyadic(1, 12), 2.0, t).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn condition_two_examples() {
        for seq in builtin_families() {
            if seq.symmetry() == Symmetry::RealEven {
                for n in [1u64, 5, 64, 300] {
                    for mu in [1.1, 1.5, 1.9] {
                        assert_eq!(condition_two_sum(&seq, n, mu).unwrap(), 0.0);
                    }
                }
            }
        }
        let one_sided = family("one_sided_inv_n");
        let v = condition_two_sum(&one_sided, 4, 1.5).unwrap();
        let expect = 4f64.ln() / 20.0 + 5f64.ln() / 30.0 + 6f64.ln() / 42.0;
        assert_abs_diff_eq!(v, expect, epsilon = 1e-15);
        assert_eq!(condition_two_sum(&one_sided, 1, 1.5).unwrap(), 0.0);
        assert!(condition_two_sum(&one_sided.restricted_to_nonneg(), 4, 1.5).is_err());
    }

    #[test]
    fn condition_two_scans() {
        let grid = dyadic(4, 10);
        let mus = [1.75, 1.5, 1.25, 1.1];
        let r = condition_two_scan(&family("inv_log"), &mus, &grid).unwrap();
        assert!(r.rows.iter().all(|row| row.limsup_estimate == 0.0));
        assert!(r.evidence);
        let sector_real =
            make_family(&FamilyDescriptor::new("complex_sector").with_param("phi", 0.0)).unwrap();
        let r = condition_two_scan(&sector_real, &mus, &grid).unwrap();
        assert!(r.rows.iter().all(|row| row.limsup_estimate == 0.0));
        let r = condition_two_scan(&family("one_sided_inv_n"), &mus, &grid).unwrap();
        assert!(r.rows.iter().all(|row| row.limsup_estimate > 0.0));
        assert!(r.evidence);
        assert!(condition_two_scan(&family("inv_n"), &[1.2, 1.5], &grid).is_err());
    }

    #[test]
    fn lemma1_examples() {
        let r = lemma1_check(&constant(), 64, 1.5, 2.0).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.ratio, 0.0);
        let inv_n = family("inv_n");
        let ratios: Vec<f64> = (6..=12)
            .map(|j| lemma1_check(&inv_n, 1 << j, 1.5, 2.0).unwrap().ratio)
            .collect();
        assert!(
            ratios.iter().all(|r| r.is_finite() && *r < 1.0),
            "{ratios:?}"
        );
        assert!(lemma1_check(&inv_n, 1, 1.5, 2.0).is_err());
        assert!(lemma1_check(&inv_n, 16, 2.0, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn ratio_is_scale_invariant_and_nonnegative(
            alpha in 0.01f64..100.0,
            m in 1u64..200,
            lambda in 2.0f64..4.0,
            idx in 0usize..5,
        ) {
            let ids = ["inv_n", "inv_log", "inv_log_sq", "oscillating_mvbv", "lacunary_spike"];
            let seq = family(ids[idx]);
            let a = mvbv_ratio(&seq, m, lambda).unwrap().value;
            let b = mvbv_ratio(&seq.scaled(alpha), m, lambda).unwrap().value;
            prop_assert!(a >= 0.0);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }
}
