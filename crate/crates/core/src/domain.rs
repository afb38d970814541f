//! Geometry, boundary conditions and the shared eigenpair record.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;

/// Default lower bound `b0` for boundary weights when none is configured.
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-12;

/// A bounded open interval `(a, b)`; traces are taken at the closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawInterval"))]
pub struct Interval {
    a: f64,
    b: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawInterval {
    a: f64,
    b: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawInterval> for Interval {
    type Error = Error;

    fn try_from(raw: RawInterval) -> Result<Self> {
        Interval::new(raw.a, raw.b)
    }
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let length = b - a;
        if !(a.is_finite() && b.is_finite() && length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    /// The interval `(0, length)`.
    pub fn with_length(length: f64) -> Result<Self> {
        Self::new(0.0, length)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Membership in the closed interval `[a, b]`.
    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub(crate) fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// Outward normal at an endpoint: `-1` at `a`, `+1` at `b`.
    pub fn outward_normal(&self, side: Side) -> f64 {
        match side {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    pub fn endpoint(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.a,
            Side::Right => self.b,
        }
    }
}

/// Endpoint of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Boundary condition family on an interval factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BcKind {
    Dirichlet,
    Neumann,
    Robin,
    Steklov,
}

impl BcKind {
    /// One-letter code used by combo names (`d`, `n`, `r`, `s`).
    pub fn code(&self) -> char {
        match self {
            BcKind::Dirichlet => 'd',
            BcKind::Neumann => 'n',
            BcKind::Robin => 'r',
            BcKind::Steklov => 's',
        }
    }
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BcKind::Dirichlet => "Dirichlet",
            BcKind::Neumann => "Neumann",
            BcKind::Robin => "Robin",
            BcKind::Steklov => "Steklov",
        })
    }
}

/// A boundary condition with its endpoint weights `(b_left, b_right)`.
///
/// Weights are present exactly for Robin and Steklov conditions. They are
/// not checked on construction; [`validate_spec`] reports violations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryCondition {
    pub kind: BcKind,
    pub weights: Option<(f64, f64)>,
}

impl BoundaryCondition {
    pub const fn dirichlet() -> Self {
        Self {
            kind: BcKind::Dirichlet,
            weights: None,
        }
    }

    pub const fn neumann() -> Self {
        Self {
            kind: BcKind::Neumann,
            weights: None,
        }
    }

    pub const fn robin(b_left: f64, b_right: f64) -> Self {
        Self {
            kind: BcKind::Robin,
            weights: Some((b_left, b_right)),
        }
    }

    pub const fn steklov(b_left: f64, b_right: f64) -> Self {
        Self {
            kind: BcKind::Steklov,
            weights: Some((b_left, b_right)),
        }
    }

    /// Weight at one endpoint; zero when the condition carries no weights.
    pub fn weight(&self, side: Side) -> f64 {
        match (self.weights, side) {
            (Some((l, _)), Side::Left) => l,
            (Some((_, r)), Side::Right) => r,
            (None, _) => 0.0,
        }
    }

    pub(crate) fn check_weights(&self, floor: f64) -> Result<()> {
        if let Some((l, r)) = self.weights {
            for (side, value) in [("left", l), ("right", r)] {
                if !(value >= floor && value > 0.0 && value.is_finite()) {
                    return Err(Error::WeightNotPositive { side, value, floor });
                }
            }
        }
        Ok(())
    }
}

/// Normalization applied to a family of interval eigenfunctions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum NormConvention {
    /// `∫ u² = 1`.
    L2Unit,
    /// `∫ u² + ∫ u'² = 1`.
    H1Unit,
    /// `∫ u'² + b_left u(a)² + b_right u(b)² = 1`.
    BUnit,
}

impl NormConvention {
    pub fn for_kind(kind: BcKind) -> Self {
        match kind {
            BcKind::Dirichlet => NormConvention::L2Unit,
            BcKind::Neumann => NormConvention::H1Unit,
            BcKind::Robin | BcKind::Steklov => NormConvention::BUnit,
        }
    }
}

/// Closed form of an interval eigenfunction in the local variable `t = x - a`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type"))]
pub enum ModeForm {
    /// `amplitude * sin(frequency * t)`
    Sine { amplitude: f64, frequency: f64 },
    /// `amplitude * cos(frequency * t)`
    Cosine { amplitude: f64, frequency: f64 },
    /// `amplitude * sin(frequency * t + phase)`
    PhasedSine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// `offset + slope * t`
    Affine { offset: f64, slope: f64 },
}

impl ModeForm {
    /// Value and first two derivatives at local coordinate `t`.
    pub fn eval_local(&self, t: f64) -> [f64; 3] {
        match *self {
            ModeForm::Sine {
                amplitude,
                frequency,
            } => {
                let (s, c) = (math::sin(frequency * t), math::cos(frequency * t));
                [
                    amplitude * s,
                    amplitude * frequency * c,
                    -amplitude * frequency * frequency * s,
                ]
            }
            ModeForm::Cosine {
                amplitude,
                frequency,
            } => {
                let (s, c) = (math::sin(frequency * t), math::cos(frequency * t));
                [
                    amplitude * c,
                    -amplitude * frequency * s,
                    -amplitude * frequency * frequency * c,
                ]
            }
            ModeForm::PhasedSine {
                amplitude,
                frequency,
                phase,
            } => {
                let arg = frequency * t + phase;
                let (s, c) = (math::sin(arg), math::cos(arg));
                [
                    amplitude * s,
                    amplitude * frequency * c,
                    -amplitude * frequency * frequency * s,
                ]
            }
            ModeForm::Affine { offset, slope } => [offset + slope * t, slope, 0.0],
        }
    }

    /// Angular frequency, zero for affine forms.
    pub fn frequency(&self) -> f64 {
        match *self {
            ModeForm::Sine { frequency, .. }
            | ModeForm::Cosine { frequency, .. }
            | ModeForm::PhasedSine { frequency, .. } => frequency,
            ModeForm::Affine { .. } => 0.0,
        }
    }

    pub(crate) fn rescale(&mut self, factor: f64) {
        match self {
            ModeForm::Sine { amplitude, .. }
            | ModeForm::Cosine { amplitude, .. }
            | ModeForm::PhasedSine { amplitude, .. } => *amplitude *= factor,
            ModeForm::Affine { offset, slope } => {
                *offset *= factor;
                *slope *= factor;
            }
        }
    }
}

/// One eigenpair of an interval problem: the eigenvalue (or Steklov value)
/// and the closed-form eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Eigenpair1D {
    pub index: usize,
    pub value: f64,
    pub form: ModeForm,
    pub norm_convention: NormConvention,
}

/// The rectangle `factor1 x factor2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RectangleDomain {
    pub factor1: Interval,
    pub factor2: Interval,
}

impl RectangleDomain {
    pub fn new(factor1: Interval, factor2: Interval) -> Self {
        Self { factor1, factor2 }
    }

    /// `(0, l1) x (0, l2)`.
    pub fn with_lengths(l1: f64, l2: f64) -> Result<Self> {
        Ok(Self::new(Interval::with_length(l1)?, Interval::with_length(l2)?))
    }

    pub fn unit_square() -> Self {
        Self::new(
            Interval { a: 0.0, b: 1.0 },
            Interval { a: 0.0, b: 1.0 },
        )
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.factor1.contains(x) && self.factor2.contains(y)
    }

    pub fn area(&self) -> f64 {
        self.factor1.length() * self.factor2.length()
    }
}

/// Boundary conditions on the two factors of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComboSpec {
    pub bc1: BoundaryCondition,
    pub bc2: BoundaryCondition,
}

impl ComboSpec {
    pub fn new(bc1: BoundaryCondition, bc2: BoundaryCondition) -> Self {
        Self { bc1, bc2 }
    }

    /// Two-letter name such as `dn` or `rs`.
    pub fn code(&self) -> String {
        let mut s = String::new();
        s.push(self.bc1.kind.code());
        s.push(self.bc2.kind.code());
        s
    }

    /// Both factors carry Dirichlet, Neumann or Robin conditions.
    pub fn is_single_parameter(&self) -> bool {
        self.bc1.kind != BcKind::Steklov && self.bc2.kind != BcKind::Steklov
    }

    /// `{D, N, R} x Steklov`.
    pub fn is_two_parameter(&self) -> bool {
        self.bc1.kind != BcKind::Steklov && self.bc2.kind == BcKind::Steklov
    }

    pub(crate) fn unsupported_reason(&self) -> Option<&'static str> {
        if self.bc1.kind == BcKind::Steklov {
            Some("Steklov on factor 1")
        } else {
            None
        }
    }

    pub(crate) fn require_single_parameter(&self) -> Result<()> {
        if self.is_single_parameter() {
            Ok(())
        } else {
            Err(Error::UnsupportedCombo(
                "expected a single-parameter combo from {D,N,R}x{D,N,R}".to_string(),
            ))
        }
    }

    pub(crate) fn require_two_parameter(&self) -> Result<()> {
        if let Some(reason) = self.unsupported_reason() {
            return Err(Error::UnsupportedCombo(reason.to_string()));
        }
        if self.is_two_parameter() {
            Ok(())
        } else {
            Err(Error::UnsupportedCombo(
                "expected a two-parameter combo {D,N,R}xSteklov".to_string(),
            ))
        }
    }
}

/// A violated standing hypothesis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Violation {
    /// A boundary weight below the floor `b0`.
    Positivity { factor: u8, side: Side, value: f64 },
    /// A Robin or Steklov condition without weights, or weights on a condition that takes none.
    MalformedWeights { factor: u8, kind: BcKind },
    UnsupportedCombo { reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Positivity {
                factor,
                side,
                value,
            } => write!(
                f,
                "positivity: factor {factor} {side} weight {value} is not >= b0 > 0"
            ),
            Violation::MalformedWeights { factor, kind } => {
                write!(f, "malformed weights on factor {factor} ({kind} condition)")
            }
            Violation::UnsupportedCombo { reason } => write!(f, "unsupported combo: {reason}"),
        }
    }
}

/// Outcome of [`validate_spec`]; empty iff every hypothesis holds.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub floor: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks boundary weights against [`DEFAULT_WEIGHT_FLOOR`] and the combo
/// against the supported set.
pub fn validate_spec(domain: &RectangleDomain, combo: &ComboSpec) -> ValidationReport {
    validate_spec_with_floor(domain, combo, DEFAULT_WEIGHT_FLOOR)
}

pub fn validate_spec_with_floor(
    _domain: &RectangleDomain,
    combo: &ComboSpec,
    floor: f64,
) -> ValidationReport {
    // Interval factors satisfy the regularity hypotheses by construction, so
    // only the weights and the combo itself can fail.
    let mut violations = Vec::new();
    for (factor, bc) in [(1u8, &combo.bc1), (2u8, &combo.bc2)] {
        let wants_weights = matches!(bc.kind, BcKind::Robin | BcKind::Steklov);
        match (wants_weights, bc.weights) {
            (true, Some((l, r))) => {
                for (side, value) in [(Side::Left, l), (Side::Right, r)] {
                    if !(value >= floor && value > 0.0 && value.is_finite()) {
                        violations.push(Violation::Positivity {
                            factor,
                            side,
                            value,
                        });
                    }
                }
            }
            (false, None) => {}
            _ => violations.push(Violation::MalformedWeights {
                factor,
                kind: bc.kind,
            }),
        }
    }
    if let Some(reason) = combo.unsupported_reason() {
        violations.push(Violation::UnsupportedCombo {
            reason: reason.to_string(),
        });
    }
    ValidationReport { floor, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn dirichlet_neumann_has_no_violations() {
        let domain = RectangleDomain::with_lengths(1.0, 2.0).unwrap();
        let combo = ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::neumann());
        let report = validate_spec(&domain, &combo);
        assert!(report.is_empty());
        assert_eq!(report.floor, DEFAULT_WEIGHT_FLOOR);
    }

    #[test]
    fn zero_robin_weight_violates_positivity() {
        let domain = RectangleDomain::unit_square();
        let combo = ComboSpec::new(
            BoundaryCondition::robin(0.0, 1.0),
            BoundaryCondition::dirichlet(),
        );
        let report = validate_spec(&domain, &combo);
        assert_eq!(report.violations.len(), 1);
        assert!(format!("{}", report.violations[0]).starts_with("positivity"));
    }

    #[test]
    fn steklov_on_first_factor_is_rejected() {
        let domain = RectangleDomain::unit_square();
        let combo = ComboSpec::new(
            BoundaryCondition::steklov(1.0, 1.0),
            BoundaryCondition::dirichlet(),
        );
        let report = validate_spec(&domain, &combo);
        assert_eq!(
            report.violations,
            [Violation::UnsupportedCombo {
                reason: "Steklov on factor 1".into()
            }]
        );
        assert_eq!(
            format!("{}", report.violations[0]),
            "unsupported combo: Steklov on factor 1"
        );
    }

    #[test]
    fn nan_and_negative_weights_are_reported_per_side() {
        let domain = RectangleDomain::unit_square();
        let combo = ComboSpec::new(
            BoundaryCondition::dirichlet(),
            BoundaryCondition::steklov(f64::NAN, -2.0),
        );
        let report = validate_spec(&domain, &combo);
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn floor_is_configurable() {
        let domain = RectangleDomain::unit_square();
        let combo = ComboSpec::new(
            BoundaryCondition::robin(0.5, 0.5),
            BoundaryCondition::robin(2.0, 2.0),
        );
        assert!(validate_spec(&domain, &combo).is_empty());
        let strict = validate_spec_with_floor(&domain, &combo, 1.0);
        assert_eq!(strict.violations.len(), 2);
        assert_eq!(strict.floor, 1.0);
    }

    #[test]
    fn malformed_weights_are_reported() {
        let domain = RectangleDomain::unit_square();
        let combo = ComboSpec::new(
            BoundaryCondition {
                kind: BcKind::Robin,
                weights: None,
            },
            BoundaryCondition {
                kind: BcKind::Dirichlet,
                weights: Some((1.0, 1.0)),
            },
        );
        assert_eq!(validate_spec(&domain, &combo).violations.len(), 2);
    }

    #[test]
    fn interval_rejects_degenerate_input() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        let i = Interval::new(-1.0, 3.0).unwrap();
        assert_eq!(i.length(), 4.0);
        assert!(i.contains(-1.0) && i.contains(3.0) && !i.contains(3.0 + 1e-15));
    }

    #[test]
    fn combo_codes() {
        let combo = ComboSpec::new(
            BoundaryCondition::robin(1.0, 1.0),
            BoundaryCondition::steklov(1.0, 2.0),
        );
        assert_eq!(combo.code(), "rs");
        assert!(combo.is_two_parameter());
        assert!(!combo.is_single_parameter());
    }
}
