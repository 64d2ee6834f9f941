//! L¹ norms `‖g‖_L = ∫_{−π}^{π} |g(x)| dx` of sampled and callable periodic functions.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Complex, Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum QuadMode {
    /// Rectangle rule on `x_j = −π + 2πj/M`.
    UniformTrapezoid { m: usize },
    /// Fixed-order Gauss–Legendre on every panel between breakpoints.
    PanelGauss { nodes_per_panel: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadSpec {
    pub mode: QuadMode,
    /// Sorted, strictly inside `(−π, π)`.
    pub breakpoints: Vec<f64>,
}

impl QuadSpec {
    pub fn uniform(m: usize) -> Result<Self> {
        let spec = QuadSpec {
            mode: QuadMode::UniformTrapezoid { m },
            breakpoints: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Panel rule; breakpoints are sorted and deduplicated here.
    pub fn panel_gauss(nodes_per_panel: usize, mut breakpoints: Vec<f64>) -> Result<Self> {
        breakpoints.sort_by(|a, b| a.total_cmp(b));
        breakpoints.dedup();
        let spec = QuadSpec {
            mode: QuadMode::PanelGauss { nodes_per_panel },
            breakpoints,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            QuadMode::UniformTrapezoid { m } if m < 16 || m % 2 != 0 => {
                return Err(Error::InvalidArgument(format!(
                    "uniform rule needs an even M >= 16, got {m}"
                )))
            }
            QuadMode::PanelGauss { nodes_per_panel } if nodes_per_panel < 4 => {
                return Err(Error::InvalidArgument(format!(
                    "need at least 4 nodes per panel, got {nodes_per_panel}"
                )))
            }
            _ => {}
        }
        if self
            .breakpoints
            .iter()
            .any(|b| !(b.is_finite() && -PI < *b && *b < PI))
        {
            return Err(Error::InvalidArgument(
                "breakpoints must lie strictly inside (-pi, pi)".into(),
            ));
        }
        if self.breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn has_breakpoint(&self, x: f64) -> bool {
        self.breakpoints
            .iter()
            .any(|b| (b - x).abs() <= 1e-15 * x.abs().max(1.0))
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `x_j = −π + 2πj/M`.
pub fn uniform_nodes(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| -PI + 2.0 * PI * j as f64 / m as f64)
}

/// `(2π/M) Σ |v_j|` over samples on the uniform grid.
pub fn l1_norm_sampled(values: &[Complex]) -> Result<f64> {
    let m = values.len();
    if m < 16 {
        return Err(Error::InvalidArgument(format!(
            "need at least 16 samples, got {m}"
        )));
    }
    let sum: f64 = values.iter().map(|v| v.norm()).sum();
    Ok(2.0 * PI / m as f64 * sum)
}

/// `‖a − b‖_L` for two sample vectors on the same grid.
pub fn l1_distance(a: &[Complex], b: &[Complex]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 16 {
        return Err(Error::InvalidArgument(format!(
            "need at least 16 samples, got {}",
            a.len()
        )));
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm()).sum();
    Ok(2.0 * PI / a.len() as f64 * sum)
}

/// `∫_{−π}^{π} |f|` by the rule in `spec`; panels are summed left to right.
pub fn l1_norm_callable<F>(mut f: F, spec: &QuadSpec) -> Result<f64>
where
    F: FnMut(f64) -> Complex,
{
    spec.validate()?;
    match spec.mode {
        QuadMode::UniformTrapezoid { m } => {
            let sum: f64 = uniform_nodes(m).map(|x| f(x).norm()).sum();
            Ok(2.0 * PI / m as f64 * sum)
        }
        QuadMode::PanelGauss { nodes_per_panel } => {
            let rule = GaussLegendre::new(nodes_per_panel);
            let mut edges = Vec::with_capacity(spec.breakpoints.len() + 2);
            edges.push(-PI);
            edges.extend_from_slice(&spec.breakpoints);
            edges.push(PI);
            let total = edges
                .windows(2)
                .map(|w| rule.integrate(w[0], w[1], |x| f(x).norm()))
                .sum();
            Ok(total)
        }
    }
}
