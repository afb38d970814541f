//! Closed-form eigenpairs of the Laplacian on an interval.
//!
//! | condition | index base | values                          | normalization |
//! |-----------|------------|---------------------------------|---------------|
//! | Dirichlet | 1          | `(jπ/L)²`                       | `∫u² = 1`     |
//! | Neumann   | 1          | `((k-1)π/L)²`, constant first   | `H¹` unit     |
//! | Robin     | 1          | `ω_k²`, roots of the secular eq. | `[u,u]_b = 1` |
//! | Steklov   | 0          | `0` and `(1/b_l + 1/b_r)/L`      | `[u,u]_b = 1` |

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::domain::{BcKind, BoundaryCondition, Eigenpair1D, Interval, ModeForm, NormConvention};
use crate::domain::{Side, DEFAULT_WEIGHT_FLOOR};
use crate::error::{Error, Result};
use crate::math;
use crate::verify::quadrature::{default_order, QuadratureRule};

/// Maximum number of bisection steps per Robin branch.
pub const MAX_BISECTIONS: usize = 200;

/// Relative inward offset of Robin bracket endpoints from the poles.
const POLE_NUDGE: f64 = 1e-10;

/// Ordered eigenpairs of one interval problem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FactorBasis {
    pub interval: Interval,
    pub bc: BoundaryCondition,
    pub modes: Vec<Eigenpair1D>,
    pub count: usize,
}

impl FactorBasis {
    /// Index of the first mode: 0 for Steklov, 1 otherwise.
    pub fn first_index(&self) -> usize {
        first_index(self.bc.kind)
    }

    pub fn last_index(&self) -> usize {
        self.first_index() + self.count - 1
    }

    pub fn mode(&self, index: usize) -> Result<&Eigenpair1D> {
        let first = self.first_index();
        if index < first || index > self.last_index() {
            return Err(Error::IndexOutOfRange {
                index,
                first,
                last: self.last_index(),
            });
        }
        Ok(&self.modes[index - first])
    }

    pub fn value(&self, index: usize) -> Result<f64> {
        self.mode(index).map(|m| m.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.value).collect()
    }

    /// Value and derivative of mode `index` at `x`.
    pub fn eval(&self, index: usize, x: f64) -> Result<(f64, f64)> {
        let [v, d, _] = self.eval_full(index, x)?;
        Ok((v, d))
    }

    /// Value, first and second derivative of mode `index` at `x`.
    pub fn eval_full(&self, index: usize, x: f64) -> Result<[f64; 3]> {
        let mode = self.mode(index)?;
        self.interval.check(x)?;
        Ok(mode.form.eval_local(x - self.interval.a()))
    }

    /// Keeps the first `count` modes.
    pub fn truncated(&self, count: usize) -> Result<FactorBasis> {
        if count == 0 {
            return Err(Error::EmptyRequest);
        }
        if count > self.count {
            return Err(Error::IndexOutOfRange {
                index: self.first_index() + count - 1,
                first: self.first_index(),
                last: self.last_index(),
            });
        }
        Ok(FactorBasis {
            interval: self.interval,
            bc: self.bc,
            modes: self.modes[..count].to_vec(),
            count,
        })
    }
}

pub(crate) fn first_index(kind: BcKind) -> usize {
    if kind == BcKind::Steklov {
        0
    } else {
        1
    }
}

/// Mode `index` of `basis` at `x`, returning value and derivative.
pub fn eval_mode(basis: &FactorBasis, index: usize, x: f64) -> Result<(f64, f64)> {
    basis.eval(index, x)
}

/// Dispatches on the boundary condition. Steklov ignores `count` (an interval
/// has exactly two Steklov modes).
pub fn factor_modes(interval: Interval, bc: &BoundaryCondition, count: usize) -> Result<FactorBasis> {
    match bc.kind {
        BcKind::Dirichlet => dirichlet_modes(interval, count),
        BcKind::Neumann => neumann_modes(interval, count),
        BcKind::Robin => {
            let (l, r) = weights_of(bc)?;
            robin_modes(interval, l, r, count)
        }
        BcKind::Steklov => {
            let (l, r) = weights_of(bc)?;
            steklov_modes(interval, l, r)
        }
    }
}

fn weights_of(bc: &BoundaryCondition) -> Result<(f64, f64)> {
    bc.weights.ok_or(Error::WeightNotPositive {
        side: "left",
        value: 0.0,
        floor: DEFAULT_WEIGHT_FLOOR,
    })
}

/// `λ_j = (jπ/L)²`, `e_j(x) = sqrt(2/L) sin(jπ(x-a)/L)`.
pub fn dirichlet_modes(interval: Interval, count: usize) -> Result<FactorBasis> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let l = interval.length();
    let amplitude = math::sqrt(2.0 / l);
    let modes = (1..=count)
        .map(|j| {
            let frequency = j as f64 * PI / l;
            Eigenpair1D {
                index: j,
                value: frequency * frequency,
                form: ModeForm::Sine {
                    amplitude,
                    frequency,
                },
                norm_convention: NormConvention::L2Unit,
            }
        })
        .collect();
    finish(interval, BoundaryCondition::dirichlet(), modes)
}

/// Constant first mode with `λ_1 = 0`, then cosines `λ_k = ((k-1)π/L)²`,
/// each scaled to unit `H¹` norm so that `<f_k, f_k>_2 = 1 / (1 + λ_k)`.
pub fn neumann_modes(interval: Interval, count: usize) -> Result<FactorBasis> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let l = interval.length();
    let modes = (1..=count)
        .map(|k| {
            let frequency = (k - 1) as f64 * PI / l;
            let value = frequency * frequency;
            let l2 = if k == 1 { l } else { 0.5 * l };
            Eigenpair1D {
                index: k,
                value,
                form: ModeForm::Cosine {
                    amplitude: 1.0 / math::sqrt(l2 * (1.0 + value)),
                    frequency,
                },
                norm_convention: NormConvention::H1Unit,
            }
        })
        .collect();
    finish(interval, BoundaryCondition::neumann(), modes)
}

/// Robin eigenpairs for `u' = b_left u` at `a` and `u' + b_right u = 0` at `b`.
///
/// With `u(t) = sin(ωt + φ)`, `tan φ = ω / b_left`, the right-end condition
/// reduces to `cot(ωL) = (ω² - b_l b_r) / ((b_l + b_r) ω)`. The left side falls
/// from `+∞` to `-∞` between consecutive poles `(k-1)π/L, kπ/L` while the right
/// side increases, so each branch holds exactly one root, found by bisection.
pub fn robin_modes(interval: Interval, b_left: f64, b_right: f64, count: usize) -> Result<FactorBasis> {
    let bc = BoundaryCondition::robin(b_left, b_right);
    bc.check_weights(DEFAULT_WEIGHT_FLOOR)?;
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let l = interval.length();
    let mut modes = Vec::with_capacity(count);
    for k in 1..=count {
        let omega = robin_root(l, b_left, b_right, k)?;
        let value = omega * omega;
        let phase = math::atan2(omega, b_left);
        // ∫_0^L sin²(ωt + φ) dt, and [g, g]_b = λ <g, g>_2 fixes the amplitude.
        let end = omega * l + phase;
        let l2 = 0.5 * l - (math::sin(2.0 * end) - math::sin(2.0 * phase)) / (4.0 * omega);
        modes.push(Eigenpair1D {
            index: k,
            value,
            form: ModeForm::PhasedSine {
                amplitude: 1.0 / math::sqrt(value * l2),
                frequency: omega,
                phase,
            },
            norm_convention: NormConvention::BUnit,
        });
    }
    finish(interval, bc, modes)
}

/// Secular function `cot(ωL) - (ω² - b_l b_r) / ((b_l + b_r) ω)`.
pub fn robin_secular(length: f64, b_left: f64, b_right: f64, omega: f64) -> f64 {
    let arg = omega * length;
    math::cos(arg) / math::sin(arg) - (omega * omega - b_left * b_right) / ((b_left + b_right) * omega)
}

fn robin_root(length: f64, b_left: f64, b_right: f64, branch: usize) -> Result<f64> {
    let lo_pole = (branch - 1) as f64 * PI / length;
    let hi_pole = branch as f64 * PI / length;
    let nudge = POLE_NUDGE * (hi_pole - lo_pole);
    let mut lo = lo_pole + nudge;
    let mut hi = hi_pole - nudge;
    let f = |w: f64| robin_secular(length, b_left, b_right, w);
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::RootNotConverged {
            branch,
            iterations: 0,
        });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let v = f(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootNotConverged {
        branch,
        iterations: MAX_BISECTIONS,
    })
}

/// The two Steklov modes of `s'' = 0`, `-s'(a) = δ b_l s(a)`, `s'(b) = δ b_r s(b)`.
///
/// `s_0` is constant with `δ_0 = 0`; `s_1` is affine with `δ_1 = (1/b_l + 1/b_r)/L`,
/// vanishing at `a + 1/(δ_1 b_l)`. Both have unit `b`-norm.
pub fn steklov_modes(interval: Interval, b_left: f64, b_right: f64) -> Result<FactorBasis> {
    let bc = BoundaryCondition::steklov(b_left, b_right);
    bc.check_weights(DEFAULT_WEIGHT_FLOOR)?;
    let l = interval.length();
    let s0 = Eigenpair1D {
        index: 0,
        value: 0.0,
        form: ModeForm::Affine {
            offset: 1.0 / math::sqrt(b_left + b_right),
            slope: 0.0,
        },
        norm_convention: NormConvention::BUnit,
    };
    let delta = (1.0 / b_left + 1.0 / b_right) / l;
    let zero = 1.0 / (delta * b_left);
    let (left, right) = (-zero, l - zero);
    let norm2 = l + b_left * left * left + b_right * right * right;
    let c = 1.0 / math::sqrt(norm2);
    let s1 = Eigenpair1D {
        index: 1,
        value: delta,
        form: ModeForm::Affine {
            offset: -c * zero,
            slope: c,
        },
        norm_convention: NormConvention::BUnit,
    };
    finish(interval, bc, alloc::vec![s0, s1])
}

/// Applies the quadrature renormalization pass and packages the basis.
fn finish(interval: Interval, bc: BoundaryCondition, mut modes: Vec<Eigenpair1D>) -> Result<FactorBasis> {
    let max_index = modes.last().map_or(0, |m| m.index);
    let rule = QuadratureRule::gauss_legendre(default_order(max_index))?;
    let (ts, ws) = rule.mapped(0.0, interval.length());
    let (bl, br) = (bc.weight(Side::Left), bc.weight(Side::Right));
    for mode in &mut modes {
        let mut l2 = 0.0;
        let mut grad = 0.0;
        for (&t, &w) in ts.iter().zip(&ws) {
            let [v, d, _] = mode.form.eval_local(t);
            l2 += w * v * v;
            grad += w * d * d;
        }
        let norm2 = match mode.norm_convention {
            NormConvention::L2Unit => l2,
            NormConvention::H1Unit => l2 + grad,
            NormConvention::BUnit => {
                let va = mode.form.eval_local(0.0)[0];
                let vb = mode.form.eval_local(interval.length())[0];
                grad + bl * va * va + br * vb * vb
            }
        };
        mode.form.rescale(1.0 / math::sqrt(norm2));
    }
    let count = modes.len();
    Ok(FactorBasis {
        interval,
        bc,
        modes,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn quad(basis: &FactorBasis, i: usize, j: usize) -> (f64, f64) {
        let rule = QuadratureRule::gauss_legendre(64).unwrap();
        let iv = basis.interval;
        let l2 = rule.integrate(iv.a(), iv.b(), |x| basis.eval(i, x).unwrap().0 * basis.eval(j, x).unwrap().0);
        let gr = rule.integrate(iv.a(), iv.b(), |x| basis.eval(i, x).unwrap().1 * basis.eval(j, x).unwrap().1);
        (l2, gr)
    }

    #[test]
    fn dirichlet_values_on_unit_interval() {
        let basis = dirichlet_modes(unit(), 3).unwrap();
        let expected = [9.869604401089358, 39.47841760435743, 88.82643960980423];
        for (got, want) in basis.values().iter().zip(expected) {
            assert!((got - want).abs() <= 1e-12 * want);
        }
        let (_, grad) = quad(&basis, 1, 1);
        assert!((grad - basis.value(1).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_frequency_scales_with_length() {
        let basis = dirichlet_modes(Interval::new(0.0, 2.0).unwrap(), 1).unwrap();
        assert!((basis.value(1).unwrap() - PI * PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn neumann_ground_mode_is_unit_constant() {
        let basis = neumann_modes(unit(), 1).unwrap();
        assert_eq!(basis.value(1).unwrap(), 0.0);
        assert_eq!(eval_mode(&basis, 1, 0.25).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn neumann_second_mode_l2_norm() {
        let basis = neumann_modes(unit(), 3).unwrap();
        let lam = basis.value(2).unwrap();
        assert!((lam - PI * PI).abs() < 1e-13);
        let (l2, grad) = quad(&basis, 2, 2);
        assert!((l2 - 1.0 / (1.0 + PI * PI)).abs() < 1e-14);
        assert!((l2 + grad - 1.0).abs() < 1e-13);
        assert!(quad(&basis, 2, 3).0.abs() < 1e-15);
    }

    #[test]
    fn robin_unit_weights_first_root() {
        let basis = robin_modes(unit(), 1.0, 1.0, 2).unwrap();
        let omega = math::sqrt(basis.value(1).unwrap());
        assert!(omega > 1.0 && omega < PI / 2.0);
        let secular = 2.0 * math::cos(omega) + (1.0 / omega - omega) * math::sin(omega);
        assert!(secular.abs() < 1e-13);
        // high-precision root of 2 cos ω + (1/ω - ω) sin ω = 0
        assert!((basis.value(1).unwrap() - 1.7070529755509225).abs() < 1e-12);
        assert!((basis.value(2).unwrap() - 13.492357146504842).abs() < 1e-11);
    }

    #[test]
    fn robin_modes_are_orthogonal_in_both_products() {
        let basis = robin_modes(unit(), 1.0, 1.0, 2).unwrap();
        let (l2, grad) = quad(&basis, 1, 2);
        let (g1a, g2a) = (basis.eval(1, 0.0).unwrap().0, basis.eval(2, 0.0).unwrap().0);
        let (g1b, g2b) = (basis.eval(1, 1.0).unwrap().0, basis.eval(2, 1.0).unwrap().0);
        assert!(l2.abs() < 1e-14);
        assert!((grad + g1a * g2a + g1b * g2b).abs() < 1e-13);
    }

    #[test]
    fn robin_large_weights_approach_dirichlet() {
        let basis = robin_modes(unit(), 1e6, 1e6, 1).unwrap();
        assert!((basis.value(1).unwrap() - PI * PI).abs() < 1e-3);
    }

    #[test]
    fn robin_ground_value_increases_with_each_weight() {
        let grid = [0.1, 0.5, 1.0, 3.0, 10.0];
        for fixed in grid {
            let left: Vec<f64> = grid
                .iter()
                .map(|&b| robin_modes(unit(), b, fixed, 1).unwrap().value(1).unwrap())
                .collect();
            let right: Vec<f64> = grid
                .iter()
                .map(|&b| robin_modes(unit(), fixed, b, 1).unwrap().value(1).unwrap())
                .collect();
            assert!(left.windows(2).all(|w| w[0] < w[1]));
            assert!(right.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn robin_rejects_non_positive_weight() {
        assert!(matches!(
            robin_modes(unit(), 0.0, 1.0, 1),
            Err(Error::WeightNotPositive { side: "left", .. })
        ));
        assert!(robin_modes(unit(), 1.0, -1.0, 1).is_err());
    }

    #[test]
    fn robin_values_sit_one_per_branch() {
        let basis = robin_modes(Interval::new(-1.0, 2.0).unwrap(), 0.3, 7.0, 12).unwrap();
        for (k, m) in basis.modes.iter().enumerate() {
            let omega = math::sqrt(m.value);
            assert!(omega > k as f64 * PI / 3.0 && omega < (k + 1) as f64 * PI / 3.0);
        }
    }

    #[test]
    fn steklov_symmetric_unit_weights() {
        let basis = steklov_modes(unit(), 1.0, 1.0).unwrap();
        assert_eq!(basis.count, 2);
        assert_eq!(basis.first_index(), 0);
        assert_eq!(basis.value(0).unwrap(), 0.0);
        assert!((basis.value(1).unwrap() - 2.0).abs() < 1e-15);
        let c = math::sqrt(2.0 / 3.0);
        let (v, d) = eval_mode(&basis, 1, 0.0).unwrap();
        assert!((v + c / 2.0).abs() < 1e-15 && (d - c).abs() < 1e-15);
        assert!(basis.eval(1, 0.5).unwrap().0.abs() < 1e-15);
    }

    #[test]
    fn steklov_asymmetric_weights() {
        let basis = steklov_modes(unit(), 1.0, 2.0).unwrap();
        assert!((basis.value(1).unwrap() - 1.5).abs() < 1e-15);
        assert!(basis.eval(1, 2.0 / 3.0).unwrap().0.abs() < 1e-15);
        let (l2, _) = quad(&basis, 0, 1);
        assert!(l2.abs() > 1e-2);
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let basis = dirichlet_modes(unit(), 2).unwrap();
        assert!(matches!(basis.eval(0, 0.5), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(basis.eval(3, 0.5), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(basis.eval(1, 1.5), Err(Error::OutOfDomain { .. })));
        assert_eq!(eval_mode(&basis, 1, 0.5).unwrap().0, math::sqrt(2.0));
    }

    #[test]
    fn count_zero_is_rejected() {
        assert_eq!(dirichlet_modes(unit(), 0), Err(Error::EmptyRequest));
        assert_eq!(neumann_modes(unit(), 0), Err(Error::EmptyRequest));
    }
}
