//! Two-sided complex coefficient sequences `n ↦ f̂(n)` and the registry of
//! built-in families.
//!
//! Cosine families are described by `a_0/2 + Σ a_k cos kx` and stored in
//! exponential form with `f̂(0) = a_0/2` and `f̂(±k) = a_k/2`.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::{Complex, Error, Result};

/// Identifiers accepted by [`make_family`].
pub const FAMILY_IDS: &[&str] = &[
    "inv_n",
    "inv_log",
    "inv_log_sq",
    "inv_pow",
    "oscillating_mvbv",
    "lacunary_spike",
    "finite",
    "complex_sector",
    "one_sided_inv_n",
    "constant",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Support {
    TwoSided,
    NonnegOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Symmetry {
    None,
    /// `f̂(−n) = f̂(n)`, all values real.
    RealEven,
    /// `f̂(−n) = conj f̂(n)`.
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn flipped(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// Named family plus its real parameters, as it appears in config files.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyDescriptor {
    #[cfg_attr(feature = "serde", serde(rename = "family"))]
    pub family_id: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub params: BTreeMap<String, f64>,
    /// Coefficient list, only for `finite`.
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub coeffs: Vec<f64>,
}

impl FamilyDescriptor {
    pub fn new(family_id: &str) -> Self {
        FamilyDescriptor {
            family_id: family_id.to_owned(),
            ..Default::default()
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    pub fn with_coeffs(mut self, coeffs: &[f64]) -> Self {
        self.coeffs = coeffs.to_vec();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    InvN,
    InvLog,
    InvLogSq,
    InvPow { alpha: f64 },
    Oscillating,
    Lacunary,
    Finite(Vec<f64>),
    ComplexSector { phi: f64, alpha: f64 },
    OneSidedInvN,
    Constant(Complex),
}

/// Nonincreasing majorant `g(k)` of one monotone piece of a coefficient tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// `scale · (k + offset)^(−alpha)`
    Power { scale: f64, alpha: f64, offset: f64 },
    /// `scale / log(k + 2)^power`
    InverseLog { scale: f64, power: i32 },
}

impl Envelope {
    pub fn eval(&self, k: u64) -> f64 {
        match *self {
            Envelope::Power {
                scale,
                alpha,
                offset,
            } => scale * (k as f64 + offset).powf(-alpha),
            Envelope::InverseLog { scale, power } => scale / (k as f64 + 2.0).ln().powi(power),
        }
    }
}

/// Tail piece `Σ_{k>N} g(k) e^{±ik(x − center)}` with `g` nonincreasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailComponent {
    pub side: Side,
    pub center: f64,
    pub envelope: Envelope,
}

/// What a family declares about `f − S_N`, used to bound the reference error.
#[derive(Debug, Clone, PartialEq)]
pub enum TailModel {
    /// Trigonometric polynomial of the given degree.
    Finite {
        degree: u64,
    },
    /// Sum of monotone pieces; summation by parts applies to each.
    Monotone(Vec<TailComponent>),
    /// Only `Σ |f̂(k)|²` over the tail is available.
    SquareSummable,
    Unknown,
}

/// Immutable two-sided coefficient sequence built from a registry family.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    descriptor: FamilyDescriptor,
    family: Family,
    support: Support,
    symmetry: Symmetry,
    scale: f64,
    reflected: bool,
}

fn invalid(family: &str, reason: &str) -> Error {
    Error::InvalidParams {
        family: family.to_owned(),
        reason: reason.to_owned(),
    }
}

fn check_keys(desc: &FamilyDescriptor, allowed: &[&str]) -> Result<()> {
    for key in desc.params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(invalid(
                &desc.family_id,
                &format!("unexpected parameter `{key}`"),
            ));
        }
    }
    for value in desc.params.values() {
        if !value.is_finite() {
            return Err(invalid(&desc.family_id, "parameters must be finite"));
        }
    }
    if desc.family_id != "finite" && !desc.coeffs.is_empty() {
        return Err(invalid(
            &desc.family_id,
            "only `finite` takes a coefficient list",
        ));
    }
    Ok(())
}

fn param(desc: &FamilyDescriptor, key: &str, default: f64) -> f64 {
    desc.params.get(key).copied().unwrap_or(default)
}

/// Builds a sequence from its descriptor.
pub fn make_family(desc: &FamilyDescriptor) -> Result<CoefficientSequence> {
    let id = desc.family_id.as_str();
    let (family, symmetry) = match id {
        "inv_n" => {
            check_keys(desc, &[])?;
            (Family::InvN, Symmetry::RealEven)
        }
        "inv_log" => {
            check_keys(desc, &[])?;
            (Family::InvLog, Symmetry::RealEven)
        }
        "inv_log_sq" => {
            check_keys(desc, &[])?;
            (Family::InvLogSq, Symmetry::RealEven)
        }
        "inv_pow" => {
            check_keys(desc, &["alpha"])?;
            let alpha = param(desc, "alpha", 1.0);
            if alpha <= 0.0 {
                return Err(invalid(id, "alpha must be positive"));
            }
            (Family::InvPow { alpha }, Symmetry::RealEven)
        }
        "oscillating_mvbv" => {
            check_keys(desc, &[])?;
            (Family::Oscillating, Symmetry::RealEven)
        }
        "lacunary_spike" => {
            check_keys(desc, &[])?;
            (Family::Lacunary, Symmetry::RealEven)
        }
        "finite" => {
            check_keys(desc, &[])?;
            if desc.coeffs.is_empty() {
                return Err(invalid(id, "coefficient list is empty"));
            }
            if desc.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(invalid(id, "coefficients must be finite"));
            }
            (Family::Finite(desc.coeffs.clone()), Symmetry::RealEven)
        }
        "complex_sector" => {
            check_keys(desc, &["phi", "alpha"])?;
            let phi = param(desc, "phi", 0.5);
            let alpha = param(desc, "alpha", 1.0);
            if phi.abs() >= FRAC_PI_2 {
                return Err(invalid(id, "|phi| must be below pi/2"));
            }
            if alpha <= 0.0 {
                return Err(invalid(id, "alpha must be positive"));
            }
            (Family::ComplexSector { phi, alpha }, Symmetry::Conjugate)
        }
        "one_sided_inv_n" => {
            check_keys(desc, &[])?;
            (Family::OneSidedInvN, Symmetry::None)
        }
        "constant" => {
            check_keys(desc, &["re", "im"])?;
            let c = Complex::new(param(desc, "re", 1.0), param(desc, "im", 0.0));
            let symmetry = if c.im == 0.0 {
                Symmetry::RealEven
            } else {
                Symmetry::None
            };
            (Family::Constant(c), symmetry)
        }
        _ => return Err(Error::UnknownFamily(desc.family_id.clone())),
    };
    Ok(CoefficientSequence {
        descriptor: desc.clone(),
        family,
        support: Support::TwoSided,
        symmetry,
        scale: 1.0,
        reflected: false,
    })
}

/// Every registry family with default parameters (`finite` uses `[1, 0.5, 0.25]`).
pub fn builtin_families() -> Vec<CoefficientSequence> {
    FAMILY_IDS
        .iter()
        .map(|id| {
            let mut desc = FamilyDescriptor::new(id);
            if *id == "finite" {
                desc.coeffs = alloc::vec![1.0, 0.5, 0.25];
            }
            make_family(&desc).expect("registry defaults are valid")
        })
        .collect()
}

impl Family {
    /// Value at index `n ≥ 0` on the positive side.
    fn positive(&self, n: u64) -> Complex {
        let k = n as f64;
        let re = |v: f64| Complex::new(v, 0.0);
        match self {
            Family::InvN => re(if n == 0 { 1.0 } else { 0.5 / k }),
            Family::OneSidedInvN => re(if n == 0 { 1.0 } else { 1.0 / k }),
            Family::InvLog => re(0.5 / (k + 2.0).ln()),
            Family::InvLogSq => re(0.5 / (k + 2.0).ln().powi(2)),
            Family::InvPow { alpha } => re(if n == 0 { 1.0 } else { 0.5 * k.powf(-alpha) }),
            Family::Oscillating => {
                if n == 0 {
                    re(1.0)
                } else {
                    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                    re(0.5 * (2.0 + sign) / k)
                }
            }
            Family::Lacunary => {
                if n >= 2 && n.is_power_of_two() {
                    re(0.5 / n.trailing_zeros() as f64)
                } else {
                    re(0.0)
                }
            }
            Family::Finite(c) => match usize::try_from(n).ok().and_then(|i| c.get(i)) {
                Some(&v) if n == 0 => re(v),
                Some(&v) => re(0.5 * v),
                None => re(0.0),
            },
            Family::ComplexSector { phi, alpha } => {
                let mag = 0.5 * (k + 1.0).powf(-alpha);
                if n == 0 {
                    re(mag)
                } else {
                    Complex::from_polar(mag, *phi)
                }
            }
            Family::Constant(c) => *c,
        }
    }

    fn value(&self, symmetry: Symmetry, n: i64) -> Complex {
        let m = n.unsigned_abs();
        if n >= 0 {
            return self.positive(m);
        }
        match (self, symmetry) {
            (Family::OneSidedInvN, _) => Complex::new(0.0, 0.0),
            (_, Symmetry::Conjugate) => self.positive(m).conj(),
            _ => self.positive(m),
        }
    }
}

impl CoefficientSequence {
    pub fn family_id(&self) -> &str {
        &self.descriptor.family_id
    }

    pub fn descriptor(&self) -> &FamilyDescriptor {
        &self.descriptor
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_two_sided(&self) -> bool {
        self.support == Support::TwoSided
    }

    /// `f̂(n)`.
    pub fn coeff(&self, n: i64) -> Result<Complex> {
        if n < 0 && !self.is_two_sided() {
            return Err(Error::OutOfSupport { index: n });
        }
        Ok(self.at(n))
    }

    /// `f̂(n)` without the support check.
    #[inline]
    pub(crate) fn at(&self, n: i64) -> Complex {
        let n = if self.reflected { -n } else { n };
        self.family.value(self.symmetry, n) * self.scale
    }

    /// `Δf̂(k) = f̂(k+1) − f̂(k)` on the plus side, `Δf̂(−k) = f̂(−k−1) − f̂(−k)` on the minus side.
    pub fn forward_difference(&self, k: u64, side: Side) -> Result<Complex> {
        let k = k as i64;
        match side {
            Side::Plus => Ok(self.at(k + 1) - self.at(k)),
            Side::Minus => {
                if !self.is_two_sided() {
                    return Err(Error::OutOfSupport { index: -k - 1 });
                }
                Ok(self.at(-k - 1) - self.at(-k))
            }
        }
    }

    #[inline]
    pub(crate) fn diff(&self, k: i64, side: Side) -> Complex {
        match side {
            Side::Plus => self.at(k + 1) - self.at(k),
            Side::Minus => self.at(-k - 1) - self.at(-k),
        }
    }

    /// `α · f̂`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.scale *= alpha;
        out
    }

    /// `n ↦ f̂(−n)`.
    pub fn reflected(&self) -> Self {
        let mut out = self.clone();
        out.reflected = !out.reflected;
        out
    }

    /// Same values, but negative indices become out of support.
    pub fn restricted_to_nonneg(&self) -> Self {
        let mut out = self.clone();
        out.support = Support::NonnegOnly;
        out
    }

    /// Exponent `β` with `|f̂(k)| ≍ k^(−β)`; `None` when the decay is not a power law.
    /// Trigonometric polynomials report `+∞`.
    pub fn decay_exponent(&self) -> Option<f64> {
        match &self.family {
            Family::InvN | Family::Oscillating | Family::OneSidedInvN => Some(1.0),
            Family::InvPow { alpha } | Family::ComplexSector { alpha, .. } => Some(*alpha),
            Family::Finite(_) => Some(f64::INFINITY),
            Family::Constant(_) => Some(0.0),
            Family::InvLog | Family::InvLogSq | Family::Lacunary => None,
        }
    }

    /// Highest index with a possibly nonzero coefficient, for trigonometric polynomials.
    pub fn degree(&self) -> Option<u64> {
        match &self.family {
            Family::Finite(c) => Some(
                c.iter()
                    .rposition(|v| *v != 0.0)
                    .map(|i| i as u64)
                    .unwrap_or(0),
            ),
            _ => None,
        }
    }

    pub fn tail_model(&self) -> TailModel {
        let scale = self.scale.abs();
        let both = |center: f64, envelope: Envelope| {
            alloc::vec![
                TailComponent {
                    side: Side::Plus,
                    center,
                    envelope,
                },
                TailComponent {
                    side: Side::Minus,
                    center: -center,
                    envelope,
                },
            ]
        };
        let power = |s: f64, alpha: f64, offset: f64| Envelope::Power {
            scale: s * scale,
            alpha,
            offset,
        };
        let mut components = match &self.family {
            Family::Finite(_) => {
                return TailModel::Finite {
                    degree: self.degree().unwrap_or(0),
                }
            }
            Family::Lacunary => return TailModel::SquareSummable,
            Family::Constant(_) => return TailModel::Unknown,
            Family::InvN => both(0.0, power(0.5, 1.0, 0.0)),
            Family::InvPow { alpha } => both(0.0, power(0.5, *alpha, 0.0)),
            Family::InvLog => both(
                0.0,
                Envelope::InverseLog {
                    scale: 0.5 * scale,
                    power: 1,
                },
            ),
            Family::InvLogSq => both(
                0.0,
                Envelope::InverseLog {
                    scale: 0.5 * scale,
                    power: 2,
                },
            ),
            // (2 + (−1)^k)/(2k) = 1/k + (−1)^k/(2k); the alternating part is centred at π.
            Family::Oscillating => {
                let mut c = both(0.0, power(1.0, 1.0, 0.0));
                c.extend(both(PI, power(0.5, 1.0, 0.0)));
                c
            }
            Family::ComplexSector { alpha, .. } => both(0.0, power(0.5, *alpha, 1.0)),
            Family::OneSidedInvN => alloc::vec![TailComponent {
                side: Side::Plus,
                center: 0.0,
                envelope: power(1.0, 1.0, 0.0),
            }],
        };
        if self.reflected {
            for c in &mut components {
                c.side = c.side.flipped();
                c.center = -c.center;
            }
        }
        TailModel::Monotone(components)
    }

    /// `Σ_{|k|>n} |f̂(k)|²` for families whose tail model is [`TailModel::SquareSummable`].
    pub fn square_tail(&self, n: u64) -> Option<f64> {
        match &self.family {
            Family::Lacunary => {
                // spikes at 2^j carry 1/(2j) on each side; Σ_{j>J} 1/(4j²) ≤ 1/(4J)
                const J_MAX: u32 = 1 << 20;
                let first = (64 - n.leading_zeros()).max(1);
                let mut sum = 0.0;
                for j in first..J_MAX {
                    let v = 0.5 / j as f64;
                    sum += 2.0 * v * v;
                }
                sum += 2.0 / (4.0 * J_MAX as f64);
                Some(sum * self.scale * self.scale)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sector {
    theta: f64,
}

impl Sector {
    /// Sector `K(θ) = {z : |arg z| ≤ θ}` with `0 ≤ θ < π/2`.
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "sector angle {theta} outside [0, pi/2)"
            )));
        }
        Ok(Sector { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SectorReport {
    pub max_arg: f64,
    pub pass: bool,
    pub worst_n: i64,
}

/// `|arg z|`, with `arg 0 = 0`.
pub fn abs_arg(z: Complex) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        0.0
    } else {
        z.im.atan2(z.re).abs()
    }
}

/// Largest `|arg f̂(n)|` over `0 ≤ n ≤ n_max`.
pub fn sector_margin(seq: &CoefficientSequence, sector: Sector, n_max: u64) -> SectorReport {
    let mut max_arg = 0.0;
    let mut worst_n = 0;
    for n in 0..=n_max as i64 {
        let a = abs_arg(seq.at(n));
        if a > max_arg {
            max_arg = a;
            worst_n = n;
        }
    }
    SectorReport {
        max_arg,
        pass: max_arg <= sector.theta(),
        worst_n,
    }
}
