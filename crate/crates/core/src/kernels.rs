//! The Dirichlet kernel `D_k`, the modified conjugate kernel `D_k*` with its
//! breakpoint at `|x| = 1/n`, and `E_k = D_k + i D_k*`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::RangeInclusive;

use crate::quadrature::{l1_norm_callable, QuadMode, QuadSpec};
use crate::{Complex, Error, Result};

/// Below this `|x|` the Dirichlet kernel is summed as `1/2 + Σ cos jx`.
const SMALL_X: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelParams {
    /// Kernel order.
    pub k: u64,
    /// Breakpoint parameter of `D_k*`, at least 1.
    pub n: u64,
}

impl KernelParams {
    pub fn new(k: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "kernel parameter n must be >= 1".into(),
            ));
        }
        Ok(KernelParams { k, n })
    }

    pub fn breakpoint(&self) -> f64 {
        1.0 / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum KernelKind {
    D,
    E,
}

/// `D_k(x) = sin((2k+1)x/2) / (2 sin(x/2))`, with value `(2k+1)/2` at `x = 0`.
pub fn dirichlet(k: u64, x: f64) -> f64 {
    let ax = x.abs();
    if ax < SMALL_X {
        let mut acc = 0.5;
        for j in 1..=k {
            acc += (j as f64 * ax).cos();
        }
        acc
    } else {
        ((2 * k + 1) as f64 * ax * 0.5).sin() / (2.0 * (ax * 0.5).sin())
    }
}

/// `D_k*`: equal to `Σ_{j≤k} sin jx` for `|x| < 1/n`, and to
/// `−cos((2k+1)x/2) / (2 sin(x/2))` for `1/n ≤ |x| ≤ π`.
///
/// The two branches differ by `cos(x/2)/(2 sin(x/2))`; the breakpoint itself
/// takes the outer branch. `n = 0` is treated as `n = 1`.
pub fn conjugate_star(k: u64, n: u64, x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return 0.0;
    }
    let cut = 1.0 / n.max(1) as f64;
    let half_sin = (ax * 0.5).sin();
    let v = if ax < cut {
        // cos(x/2) − cos((2k+1)x/2) = 2 sin((k+1)x/2) sin(kx/2)
        ((k + 1) as f64 * ax * 0.5).sin() * (k as f64 * ax * 0.5).sin() / half_sin
    } else {
        -((2 * k + 1) as f64 * ax * 0.5).cos() / (2.0 * half_sin)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `E_k(x) = D_k(x) + i D_k*(x)`.
pub fn complex_kernel(k: u64, n: u64, x: f64) -> Complex {
    Complex::new(dirichlet(k, x), conjugate_star(k, n, x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityResiduals {
    /// `max |E_k(±x) − E_{k−1}(±x) − e^{±ikx}|`
    pub max_res_3: f64,
    /// `max |E_k(x) + E_k(−x) − 2 D_k(x)|`
    pub max_res_4: f64,
}

/// Uniform grid of `points` nodes on `(−π, π)` (half-step offset, so 0 is
/// never hit) plus nodes on both sides of and at `±1/n`.
pub fn identity_grid(n: u64, points: usize) -> Vec<f64> {
    let h = 2.0 * PI / points as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|j| -PI + (j as f64 + 0.5) * h)
        .filter(|x| x.abs() >= 1e-6)
        .collect();
    let cut = 1.0 / n.max(1) as f64;
    for s in [1.0, -1.0] {
        for f in [1.0 - 1e-3, 1.0, 1.0 + 1e-3] {
            grid.push(s * cut * f);
        }
    }
    grid
}

/// Residuals of the telescoping identity `E_k(±x) − E_{k−1}(±x) = e^{±ikx}`
/// and of `E_k(x) + E_k(−x) = 2D_k(x)` for `k` in `k_range ⊂ [n, 2n]`.
pub fn identity_residuals(
    n: u64,
    k_range: RangeInclusive<u64>,
    grid: &[f64],
) -> Result<IdentityResiduals> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if lo < n || hi > 2 * n || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "k range {lo}..={hi} must lie within [{n}, {}]",
            2 * n
        )));
    }
    if let Some(x) = grid.iter().find(|x| x.abs() < 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "grid point {x} is within 1e-6 of the origin"
        )));
    }
    let mut out = IdentityResiduals {
        max_res_3: 0.0,
        max_res_4: 0.0,
    };
    for k in k_range {
        for &x in grid {
            let (s, c) = (k as f64 * x).sin_cos();
            for (sx, e) in [(x, Complex::new(c, s)), (-x, Complex::new(c, -s))] {
                let r = complex_kernel(k, n, sx) - complex_kernel(k - 1, n, sx) - e;
                out.max_res_3 = out.max_res_3.max(r.norm());
            }
            let r4 = complex_kernel(k, n, x) + complex_kernel(k, n, -x)
                - Complex::new(2.0 * dirichlet(k, x), 0.0);
            out.max_res_4 = out.max_res_4.max(r4.norm());
        }
    }
    Ok(out)
}

/// Panel layout suited to `|D_k|` (panels between its zeros `2πj/(2k+1)`) or
/// `|E_k|` (panels split at `±1/n`, geometric outside, uniform inside).
pub fn kernel_quad_spec(
    kind: KernelKind,
    k: u64,
    n: u64,
    nodes_per_panel: usize,
) -> Result<QuadSpec> {
    let params = KernelParams::new(k, n)?;
    let mut bps = Vec::new();
    match kind {
        KernelKind::D => {
            let step = 2.0 * PI / (2 * k + 1) as f64;
            for j in 1..=k {
                let z = step * j as f64;
                bps.push(z);
                bps.push(-z);
            }
        }
        KernelKind::E => {
            let cut = params.breakpoint();
            let mut b = cut;
            while b < PI {
                bps.push(b);
                bps.push(-b);
                b *= 2.0;
            }
            let inner = (k as f64 * cut / PI).ceil().max(1.0) as usize;
            for i in 1..inner {
                let z = cut * i as f64 / inner as f64;
                bps.push(z);
                bps.push(-z);
            }
            bps.push(0.0);
        }
    }
    QuadSpec::panel_gauss(nodes_per_panel, bps)
}

/// `‖D_k‖_L` or `‖E_k‖_L` (complex modulus) under `quad`.
pub fn kernel_l1(kind: KernelKind, k: u64, n: u64, quad: &QuadSpec) -> Result<f64> {
    let params = KernelParams::new(k, n)?;
    match kind {
        KernelKind::D => l1_norm_callable(|x| Complex::new(dirichlet(k, x), 0.0), quad),
        KernelKind::E => {
            if matches!(quad.mode, QuadMode::PanelGauss { .. }) {
                let cut = params.breakpoint();
                if !(quad.has_breakpoint(cut) && quad.has_breakpoint(-cut)) {
                    return Err(Error::InvalidArgument(format!(
                        "panel rule for E_k must break at ±1/n = ±{cut}"
                    )));
                }
            }
            l1_norm_callable(|x| complex_kernel(k, n, x), quad)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LowerBoundRow {
    pub k: u64,
    pub norm_d: f64,
    /// `‖E_k‖_L` with breakpoint parameter `n = k`.
    pub norm_e: f64,
    pub log_k: f64,
    /// `(1/π) log k`
    pub bound: f64,
    /// `‖D_k‖_L / log k`
    pub ratio_to_log: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LowerBoundReport {
    pub rows: Vec<LowerBoundRow>,
    /// Orders where `‖D_k‖_L < (1/π) log k`; any entry means the quadrature is broken.
    pub violations: Vec<u64>,
}

impl LowerBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tabulates `‖D_k‖_L` against `(1/π) log k` for `k ≥ 2`.
pub fn lower_bound_check(k_grid: &[u64], nodes_per_panel: usize) -> Result<LowerBoundReport> {
    if let Some(k) = k_grid.iter().find(|k| **k < 2) {
        return Err(Error::InvalidArgument(format!(
            "lower bound needs k >= 2, got {k}"
        )));
    }
    let mut rows = Vec::with_capacity(k_grid.len());
    let mut violations = Vec::new();
    for &k in k_grid {
        let norm_d = kernel_l1(
            KernelKind::D,
            k,
            k,
            &kernel_quad_spec(KernelKind::D, k, k, nodes_per_panel)?,
        )?;
        let norm_e = kernel_l1(
            KernelKind::E,
            k,
            k,
            &kernel_quad_spec(KernelKind::E, k, k, nodes_per_panel)?,
        )?;
        let log_k = (k as f64).ln();
        let bound = log_k / PI;
        if norm_d < bound {
            violations.push(k);
        }
        rows.push(LowerBoundRow {
            k,
            norm_d,
            norm_e,
            log_k,
            bound,
            ratio_to_log: norm_d / log_k,
        });
    }
    Ok(LowerBoundReport { rows, violations })
}
