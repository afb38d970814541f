//! Independent checks of the eigen-identities: quadrature, weak residuals
//! against finite-element hats, Gram matrices and Parseval sums.

pub mod gram;
pub mod normalization;
pub mod parseval;
pub mod quadrature;
pub mod residual;
pub mod witness;

use alloc::vec::Vec;

use crate::domain::Side;
use crate::error::Result;
use crate::factor::FactorBasis;
use quadrature::QuadratureRule;

pub use gram::{gram, gram_factor, gram_product, GramBasis, GramReport, InnerProductKind};
pub use normalization::{normalization_checks, IdentityCheck};
pub use parseval::{parseval_check, ParsevalReport};
pub use quadrature::default_order;
pub use residual::{
    two_param_residual, two_param_residual_with, weak_residual_dyad, weak_residual_factor,
    weak_residual_factor_with, weak_residual_product, FACTOR_TEST_ELEMENTS, PRODUCT_TEST_ELEMENTS,
};
pub use witness::{nonorthogonality_witness, nonorthogonality_witness_with, WitnessReport};

/// Mode values and derivatives of a factor basis sampled at mapped
/// Gauss-Legendre nodes, plus endpoint values.
#[derive(Debug, Clone)]
pub(crate) struct FactorTable {
    pub first: usize,
    pub weights: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub derivs: Vec<Vec<f64>>,
    pub ends: Vec<(f64, f64)>,
    pub weight_left: f64,
    pub weight_right: f64,
}

impl FactorTable {
    pub fn new(basis: &FactorBasis, order: usize) -> Result<Self> {
        let rule = QuadratureRule::gauss_legendre(order)?;
        let iv = basis.interval;
        let (xs, weights) = rule.mapped(iv.a(), iv.b());
        let first = basis.first_index();
        let mut values = Vec::with_capacity(basis.count);
        let mut derivs = Vec::with_capacity(basis.count);
        let mut ends = Vec::with_capacity(basis.count);
        for idx in first..=basis.last_index() {
            let mut v = Vec::with_capacity(xs.len());
            let mut d = Vec::with_capacity(xs.len());
            for &x in &xs {
                let (a, b) = basis.eval(idx, x)?;
                v.push(a);
                d.push(b);
            }
            values.push(v);
            derivs.push(d);
            ends.push((basis.eval(idx, iv.a())?.0, basis.eval(idx, iv.b())?.0));
        }
        Ok(Self {
            first,
            weights,
            values,
            derivs,
            ends,
            weight_left: basis.bc.weight(Side::Left),
            weight_right: basis.bc.weight(Side::Right),
        })
    }

    /// Default order for the basis, see [`default_order`].
    pub fn for_basis(basis: &FactorBasis) -> Result<Self> {
        Self::new(basis, default_order(basis.last_index()))
    }

    fn row(&self, index: usize) -> usize {
        index - self.first
    }

    pub fn l2(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.values[self.row(i)], &self.values[self.row(j)]);
        weighted_dot(&self.weights, a, b)
    }

    pub fn grad(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.derivs[self.row(i)], &self.derivs[self.row(j)]);
        weighted_dot(&self.weights, a, b)
    }

    /// `∑ b u v` over the two endpoints.
    pub fn boundary(&self, i: usize, j: usize) -> f64 {
        let (ia, ib) = self.ends[self.row(i)];
        let (ja, jb) = self.ends[self.row(j)];
        self.weight_left * ia * ja + self.weight_right * ib * jb
    }
}

pub(crate) fn weighted_dot(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
}
