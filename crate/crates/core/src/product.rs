//! Dyad eigenbases `u_jk(x, y) = e_j(x) f_k(y)` on a rectangle.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::domain::{BcKind, ComboSpec, RectangleDomain};
use crate::error::{Error, Result};
use crate::factor::{factor_modes, FactorBasis};
use crate::math;

/// A pair of factor mode indices with its combined eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DyadIndex {
    pub j: usize,
    pub k: usize,
    pub combined_value: f64,
}

/// Multipliers that turn a raw dyad into a unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairScaling {
    /// Makes the dyad `L²`-unit.
    pub l2_scale: f64,
    /// Makes the dyad unit in the combo's energy inner product.
    pub energy_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Scaling {
    Raw,
    L2,
    Energy,
}

/// Which energy inner product a combo's dyads are orthogonal in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EnergyForm {
    /// `∫∇u·∇v`.
    Gradient,
    /// `∫∇u·∇v + ∫uv`.
    H1,
    /// `∫∇u·∇v + ∫_∂ b u v dσ`.
    BWeighted,
}

impl EnergyForm {
    pub fn for_combo(combo: &ComboSpec) -> Self {
        use BcKind::*;
        match (combo.bc1.kind, combo.bc2.kind) {
            (Robin, _) | (_, Robin) | (Steklov, _) | (_, Steklov) => EnergyForm::BWeighted,
            (Neumann, Neumann) => EnergyForm::H1,
            _ => EnergyForm::Gradient,
        }
    }
}

/// Value and gradient of a dyad at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadValue {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
}

/// The dyad basis of a single-parameter combo, ordered by combined eigenvalue.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductBasis {
    pub combo: ComboSpec,
    pub domain: RectangleDomain,
    pub basis1: FactorBasis,
    pub basis2: FactorBasis,
    pub pairs: Vec<DyadIndex>,
    pub scalings: Vec<PairScaling>,
    pub energy_form: EnergyForm,
}

impl ProductBasis {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn scale(&self, position: usize, scaling: Scaling) -> f64 {
        match scaling {
            Scaling::Raw => 1.0,
            Scaling::L2 => self.scalings[position].l2_scale,
            Scaling::Energy => self.scalings[position].energy_scale,
        }
    }

    /// Position of `(j, k)` in [`ProductBasis::pairs`].
    pub fn position(&self, j: usize, k: usize) -> Option<usize> {
        self.pairs.iter().position(|p| p.j == j && p.k == k)
    }

    /// Evaluates the dyad at `position` with the requested scaling.
    pub fn eval(&self, position: usize, x: f64, y: f64, scaling: Scaling) -> Result<DyadValue> {
        let pair = self.pairs.get(position).ok_or(Error::IndexOutOfRange {
            index: position,
            first: 0,
            last: self.pairs.len().saturating_sub(1),
        })?;
        let s = self.scale(position, scaling);
        eval_raw(&self.basis1, &self.basis2, pair.j, pair.k, x, y, s)
    }
}

fn eval_raw(b1: &FactorBasis, b2: &FactorBasis, j: usize, k: usize, x: f64, y: f64, s: f64) -> Result<DyadValue> {
    let (e, de) = b1.eval(j, x)?;
    let (f, df) = b2.eval(k, y)?;
    Ok(DyadValue {
        value: s * e * f,
        dx: s * de * f,
        dy: s * e * df,
    })
}

/// Evaluates dyad `pair` of `basis` at `(x, y)`.
pub fn dyad_eval(basis: &ProductBasis, pair: &DyadIndex, x: f64, y: f64, scaling: Scaling) -> Result<DyadValue> {
    let s = match basis.position(pair.j, pair.k) {
        Some(p) => basis.scale(p, scaling),
        None if scaling == Scaling::Raw => 1.0,
        None => {
            let v1 = basis.basis1.value(pair.j)?;
            let v2 = basis.basis2.value(pair.k)?;
            let sc = pair_scaling(&basis.combo, v1, v2);
            if scaling == Scaling::L2 {
                sc.l2_scale
            } else {
                sc.energy_scale
            }
        }
    };
    eval_raw(&basis.basis1, &basis.basis2, pair.j, pair.k, x, y, s)
}

// Squared L² norm of a factor mode under its stored normalization.
fn l2_norm_sq(kind: BcKind, value: f64) -> f64 {
    match kind {
        BcKind::Dirichlet => 1.0,
        BcKind::Neumann => 1.0 / (1.0 + value),
        BcKind::Robin => 1.0 / value,
        // b-unit affine modes; the L² norm is not a closed-form scalar of δ
        BcKind::Steklov => f64::NAN,
    }
}

/// Scalings of the dyad with factor eigenvalues `v1`, `v2`.
pub fn pair_scaling(combo: &ComboSpec, v1: f64, v2: f64) -> PairScaling {
    let m = l2_norm_sq(combo.bc1.kind, v1) * l2_norm_sq(combo.bc2.kind, v2);
    let energy = match EnergyForm::for_combo(combo) {
        EnergyForm::H1 => v1 + v2 + 1.0,
        EnergyForm::Gradient | EnergyForm::BWeighted => v1 + v2,
    };
    PairScaling {
        l2_scale: 1.0 / math::sqrt(m),
        energy_scale: 1.0 / math::sqrt(energy * m),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    value: f64,
    j: usize,
    k: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.j.cmp(&other.j))
            .then(self.k.cmp(&other.k))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of a frontier walk: the pairs and the largest factor indices the
/// walk had to look at to certify them.
struct Frontier {
    pairs: Vec<DyadIndex>,
    max_j: usize,
    max_k: usize,
}

fn frontier(basis1: &FactorBasis, basis2: &FactorBasis, count: usize) -> Result<Frontier> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let (j0, k0) = (basis1.first_index(), basis2.first_index());
    let (j_last, k_last) = (basis1.last_index(), basis2.last_index());
    let value = |j: usize, k: usize| -> Result<f64> { Ok(basis1.value(j)? + basis2.value(k)?) };

    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Entry {
        value: value(j0, k0)?,
        j: j0,
        k: k0,
    }));
    let (mut max_j, mut max_k) = (j0, k0);
    let mut pairs = Vec::with_capacity(count);
    while let Some(Reverse(e)) = heap.pop() {
        pairs.push(DyadIndex {
            j: e.j,
            k: e.k,
            combined_value: e.value,
        });
        if pairs.len() == count {
            break;
        }
        // each cell is reached from its left neighbour, except the first
        // column, which is reached from below
        if e.k + 1 > k_last {
            return Err(Error::FrontierExhausted {
                factor: 2,
                required: e.k + 1 - k0 + 1,
                available: basis2.count,
            });
        }
        heap.push(Reverse(Entry {
            value: value(e.j, e.k + 1)?,
            j: e.j,
            k: e.k + 1,
        }));
        max_k = max_k.max(e.k + 1);
        if e.k == k0 {
            if e.j + 1 > j_last {
                return Err(Error::FrontierExhausted {
                    factor: 1,
                    required: e.j + 1 - j0 + 1,
                    available: basis1.count,
                });
            }
            heap.push(Reverse(Entry {
                value: value(e.j + 1, k0)?,
                j: e.j + 1,
                k: k0,
            }));
            max_j = max_j.max(e.j + 1);
        }
    }
    Ok(Frontier {
        pairs,
        max_j,
        max_k,
    })
}

/// The `count` smallest `λ₁ⱼ + λ₂ₖ`, ties broken by `(j, k)`.
pub fn enumerate_pairs(basis1: &FactorBasis, basis2: &FactorBasis, count: usize) -> Result<Vec<DyadIndex>> {
    frontier(basis1, basis2, count).map(|f| f.pairs)
}

/// Builds the first `count` dyads of a single-parameter combo.
///
/// Factor bases are grown until the frontier is certified and then trimmed to
/// the modes the frontier touched.
pub fn build_product_basis(combo: ComboSpec, domain: RectangleDomain, count: usize) -> Result<ProductBasis> {
    combo.require_single_parameter()?;
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let mut n1 = 8usize;
    let mut n2 = 8usize;
    loop {
        let b1 = factor_modes(domain.factor1, &combo.bc1, n1)?;
        let b2 = factor_modes(domain.factor2, &combo.bc2, n2)?;
        match frontier(&b1, &b2, count) {
            Ok(f) => {
                let basis1 = b1.truncated(f.max_j - b1.first_index() + 1)?;
                let basis2 = b2.truncated(f.max_k - b2.first_index() + 1)?;
                let scalings = f
                    .pairs
                    .iter()
                    .map(|p| {
                        let v1 = basis1.value(p.j).expect("pair within trimmed factor");
                        let v2 = basis2.value(p.k).expect("pair within trimmed factor");
                        pair_scaling(&combo, v1, v2)
                    })
                    .collect();
                return Ok(ProductBasis {
                    combo,
                    domain,
                    basis1,
                    basis2,
                    pairs: f.pairs,
                    scalings,
                    energy_form: EnergyForm::for_combo(&combo),
                });
            }
            Err(Error::FrontierExhausted {
                factor, required, ..
            }) => {
                if factor == 1 {
                    n1 = required.max(2 * n1);
                } else {
                    n2 = required.max(2 * n2);
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// A two-parameter eigenpair `(λ, δ)` of a `{D,N,R} x Steklov` combo.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoParamPair {
    pub lambda: f64,
    pub delta: f64,
    /// `combined_value` is `λ + δ`; it is only a label, not an eigenvalue.
    pub index: DyadIndex,
}

/// Dyads `e_j ⊗ s_k` of a two-parameter combo.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoParamFamily {
    pub combo: ComboSpec,
    pub domain: RectangleDomain,
    pub basis1: FactorBasis,
    pub basis2: FactorBasis,
    pub pairs: Vec<TwoParamPair>,
}

impl TwoParamFamily {
    pub fn eval(&self, j: usize, k: usize, x: f64, y: f64) -> Result<DyadValue> {
        eval_raw(&self.basis1, &self.basis2, j, k, x, y, 1.0)
    }
}

/// All pairs `(j, k)` with `j <= count1` and `k ∈ {0, 1}`, ordered by `(j, k)`.
pub fn two_param_pairs(combo: ComboSpec, domain: RectangleDomain, count1: usize) -> Result<TwoParamFamily> {
    combo.require_two_parameter()?;
    let basis1 = factor_modes(domain.factor1, &combo.bc1, count1)?;
    let basis2 = factor_modes(domain.factor2, &combo.bc2, 2)?;
    let mut pairs = Vec::with_capacity(2 * count1);
    for m1 in &basis1.modes {
        for m2 in &basis2.modes {
            pairs.push(TwoParamPair {
                lambda: m1.value,
                delta: m2.value,
                index: DyadIndex {
                    j: m1.index,
                    k: m2.index,
                    combined_value: m1.value + m2.value,
                },
            });
        }
    }
    Ok(TwoParamFamily {
        combo,
        domain,
        basis1,
        basis2,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{BoundaryCondition, Interval};
    use crate::factor::dirichlet_modes;
    use core::f64::consts::PI;

    fn dd() -> ComboSpec {
        ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::dirichlet())
    }

    #[test]
    fn first_pairs_split_degenerate_level_lexicographically() {
        let b = dirichlet_modes(Interval::new(0.0, 1.0).unwrap(), 10).unwrap();
        let pairs = enumerate_pairs(&b, &b, 3).unwrap();
        let jk: Vec<_> = pairs.iter().map(|p| (p.j, p.k)).collect();
        assert_eq!(jk, [(1, 1), (1, 2), (2, 1)]);
        assert!((pairs[0].combined_value - 2.0 * PI * PI).abs() < 1e-12);
        assert!((pairs[1].combined_value - 5.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn frontier_exhaustion_names_required_count() {
        let b = dirichlet_modes(Interval::new(0.0, 1.0).unwrap(), 2).unwrap();
        let err = enumerate_pairs(&b, &b, 4).unwrap_err();
        assert!(matches!(err, Error::FrontierExhausted { required: 3, available: 2, .. }));
    }

    #[test]
    fn build_grows_and_trims_factors() {
        let basis = build_product_basis(dd(), RectangleDomain::unit_square(), 60).unwrap();
        assert_eq!(basis.len(), 60);
        let maxj = basis.pairs.iter().map(|p| p.j).max().unwrap();
        assert!(basis.basis1.count >= maxj);
        // re-running on the trimmed factors certifies the same prefix
        let again = enumerate_pairs(&basis.basis1, &basis.basis2, 60).unwrap();
        assert_eq!(again, basis.pairs);
    }

    #[test]
    fn dd_energy_scale_of_first_dyad() {
        let basis = build_product_basis(dd(), RectangleDomain::unit_square(), 1).unwrap();
        assert!((basis.scalings[0].energy_scale - 1.0 / (2.0 * PI * PI).sqrt()).abs() < 1e-15);
        assert_eq!(basis.scalings[0].l2_scale, 1.0);
    }

    #[test]
    fn nn_constant_dyad() {
        let nn = ComboSpec::new(BoundaryCondition::neumann(), BoundaryCondition::neumann());
        let basis = build_product_basis(nn, RectangleDomain::unit_square(), 1).unwrap();
        assert_eq!(basis.scalings[0], PairScaling { l2_scale: 1.0, energy_scale: 1.0 });
        let v = basis.eval(0, 0.3, 0.9, Scaling::Raw).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        assert_eq!((v.dx, v.dy), (0.0, 0.0));
    }

    #[test]
    fn dyad_values_at_known_points() {
        let basis = build_product_basis(dd(), RectangleDomain::unit_square(), 1).unwrap();
        let p = basis.pairs[0];
        let v = dyad_eval(&basis, &p, 0.5, 0.5, Scaling::Raw).unwrap();
        assert!((v.value - 2.0).abs() < 1e-15);
        let v = dyad_eval(&basis, &p, 0.25, 0.5, Scaling::Raw).unwrap();
        assert!((v.value - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            dyad_eval(&basis, &p, 1.5, 0.5, Scaling::Raw),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn dn_energy_matches_closed_form() {
        let dn = ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::neumann());
        let basis = build_product_basis(dn, RectangleDomain::unit_square(), 10).unwrap();
        for (p, s) in basis.pairs.iter().zip(&basis.scalings) {
            let l2 = basis.basis2.value(p.k).unwrap();
            let grad_energy = p.combined_value / (1.0 + l2);
            assert!((s.energy_scale - 1.0 / grad_energy.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn two_param_rejects_single_parameter_combos() {
        assert!(two_param_pairs(dd(), RectangleDomain::unit_square(), 2).is_err());
        let sd = ComboSpec::new(BoundaryCondition::steklov(1.0, 1.0), BoundaryCondition::dirichlet());
        assert!(matches!(
            two_param_pairs(sd, RectangleDomain::unit_square(), 2),
            Err(Error::UnsupportedCombo(_))
        ));
        assert!(build_product_basis(sd, RectangleDomain::unit_square(), 2).is_err());
    }

    #[test]
    fn dirichlet_steklov_pairs() {
        let ds = ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::steklov(1.0, 1.0));
        let fam = two_param_pairs(ds, RectangleDomain::unit_square(), 1).unwrap();
        assert_eq!(fam.pairs.len(), 2);
        assert!((fam.pairs[0].lambda - PI * PI).abs() < 1e-12);
        assert!(fam.pairs[0].delta.abs() < 1e-15);
        assert!((fam.pairs[1].delta - 2.0).abs() < 1e-12);
        assert_eq!((fam.pairs[1].index.j, fam.pairs[1].index.k), (1, 1));
    }
}
