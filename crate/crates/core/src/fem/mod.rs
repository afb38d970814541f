//! Finite-element oracle: P1 on intervals, Q1 on rectangles, with direct
//! dense solvers for the resulting symmetric pencils.

pub mod linalg;
pub mod mesh;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

pub use linalg::{jacobi_eigen, tridiagonal_ql_eigen, Cholesky, SymEigen, SymMatrix};
pub use mesh::{assemble, Assembly, Mesh, MeshBc, MeshKind};

/// Reduced problems up to this order use cyclic Jacobi; larger ones use
/// Householder tridiagonalization with implicit QL.
pub const JACOBI_LIMIT: usize = 160;

/// Above this order [`lowest_values`] counts inertia on banded factorizations
/// instead of forming the dense reduced matrix.
pub const DENSE_LIMIT: usize = 1600;

/// One eigenpair of `A v = λ B v`; `vector` is `B`-orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct GevpPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

fn check_pencil(a: &SymMatrix, b: &SymMatrix, count: usize) -> Result<()> {
    if a.order != b.order {
        return Err(Error::DimensionMismatch {
            expected: a.order,
            found: b.order,
        });
    }
    if count > a.order {
        return Err(Error::TooManyEigenpairs {
            requested: count,
            order: a.order,
        });
    }
    if a.order == 0 {
        return Err(Error::NoUnknowns);
    }
    Ok(())
}

// C = L⁻¹ A L⁻ᵀ as a dense row-major matrix.
fn reduce(a: &SymMatrix, chol: &Cholesky) -> Vec<f64> {
    let n = a.order;
    // W = L⁻¹ A, one column of A at a time (A is symmetric, so column = row)
    let mut w = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        for (i, c) in col.iter_mut().enumerate() {
            *c = a.get(i, j);
        }
        chol.forward(&mut col);
        for i in 0..n {
            w[i * n + j] = col[i];
        }
    }
    // C = L⁻¹ Wᵀ; row i of W is column i of Wᵀ
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        col.copy_from_slice(&w[i * n..(i + 1) * n]);
        chol.forward(&mut col);
        for r in 0..n {
            c[r * n + i] = col[r];
        }
    }
    // symmetrize round-off
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (c[i * n + j] + c[j * n + i]);
            c[i * n + j] = v;
            c[j * n + i] = v;
        }
    }
    c
}

fn dense_eigen(c: &[f64], n: usize, with_vectors: bool) -> Result<SymEigen> {
    if n <= JACOBI_LIMIT {
        Ok(jacobi_eigen(c, n))
    } else {
        tridiagonal_ql_eigen(c, n, with_vectors)
    }
}

/// Lowest `count` eigenpairs of `A v = λ B v` with `B` positive definite.
///
/// Cholesky-reduces `B` and solves the standard symmetric problem densely.
pub fn solve_gevp(a: &SymMatrix, b: &SymMatrix, count: usize) -> Result<Vec<GevpPair>> {
    check_pencil(a, b, count)?;
    let n = a.order;
    let chol = Cholesky::factor(b)?;
    let c = reduce(a, &chol);
    let eig = dense_eigen(&c, n, true)?;
    Ok((0..count)
        .map(|i| {
            let mut v = eig.vector(i);
            chol.backward(&mut v);
            GevpPair {
                value: eig.values[i],
                vector: v,
            }
        })
        .collect())
}

/// Lowest `count` eigenvalues of `A v = λ B v`, without vectors.
pub fn solve_gevp_values(a: &SymMatrix, b: &SymMatrix, count: usize) -> Result<Vec<f64>> {
    check_pencil(a, b, count)?;
    let chol = Cholesky::factor(b)?;
    let c = reduce(a, &chol);
    let eig = dense_eigen(&c, a.order, false)?;
    Ok(eig.values[..count].to_vec())
}

/// Lowest `count` eigenvalues, choosing dense reduction for small pencils
/// and inertia bisection for large banded ones.
pub fn lowest_values(a: &SymMatrix, b: &SymMatrix, count: usize) -> Result<Vec<f64>> {
    if a.order <= DENSE_LIMIT {
        solve_gevp_values(a, b, count)
    } else {
        inertia_values(a, b, count)
    }
}

/// Solves `A x = rhs` for symmetric positive definite `A`.
pub fn solve_linear(a: &SymMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    Cholesky::factor(a)?.solve(rhs)
}

/// `‖A v − λ B v‖₂`.
pub fn gevp_residual(a: &SymMatrix, b: &SymMatrix, value: f64, vector: &[f64]) -> Result<f64> {
    let av = a.mul_vec(vector)?;
    let bv = b.mul_vec(vector)?;
    let r: Vec<f64> = av.iter().zip(&bv).map(|(x, y)| x - value * y).collect();
    Ok(linalg::norm2(&r))
}

/// Symmetric band stored by rows: `rows[i][k]` holds entry `(i, i - w + k)`.
struct Band {
    n: usize,
    w: usize,
    rows: Vec<f64>,
}

impl Band {
    fn shifted(a: &SymMatrix, b: &SymMatrix, sigma: f64, w: usize) -> Self {
        let n = a.order;
        let mut rows = vec![0.0; n * (w + 1)];
        for i in 0..n {
            let lo = i.saturating_sub(w);
            for j in lo..=i {
                rows[i * (w + 1) + (j + w - i)] = a.get(i, j) - sigma * b.get(i, j);
            }
        }
        Self { n, w, rows }
    }

    /// Number of negative pivots of `LDLᵀ` (Sylvester inertia).
    fn negative_pivots(mut self, tiny: f64) -> usize {
        let (n, w) = (self.n, self.w);
        let stride = w + 1;
        let mut d = vec![0.0; n];
        let mut negatives = 0;
        for i in 0..n {
            let lo = i.saturating_sub(w);
            // row i of L (unit diagonal), stored in place of row i of A
            for j in lo..i {
                let jlo = j.saturating_sub(w).max(lo);
                let mut s = self.rows[i * stride + (j + w - i)];
                for k in jlo..j {
                    s -= self.rows[i * stride + (k + w - i)] * d[k] * self.rows[j * stride + (k + w - j)];
                }
                self.rows[i * stride + (j + w - i)] = s / d[j];
            }
            let mut s = self.rows[i * stride + w];
            for k in lo..i {
                let l = self.rows[i * stride + (k + w - i)];
                s -= l * l * d[k];
            }
            if s.abs() < tiny {
                s = -tiny;
            }
            if s < 0.0 {
                negatives += 1;
            }
            d[i] = s;
        }
        negatives
    }
}

/// Lowest `count` eigenvalues by bisection on the Sylvester inertia of the
/// banded shifted matrix `A − σB`.
pub fn inertia_values(a: &SymMatrix, b: &SymMatrix, count: usize) -> Result<Vec<f64>> {
    check_pencil(a, b, count)?;
    let w = a.bandwidth().max(b.bandwidth());
    let scale = a.norm_inf().max(b.norm_inf()).max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    let below = |sigma: f64| Band::shifted(a, b, sigma, w).negative_pivots(tiny);

    // bracket [lo, hi] holding the wanted eigenvalues
    let bscale = b.norm_inf();
    let mut lo = -1.0;
    while below(lo) > 0 {
        lo *= 4.0;
        if !lo.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: 0, value: lo });
        }
    }
    let mut hi = 1.0_f64.max(a.norm_inf() / bscale.max(f64::MIN_POSITIVE));
    while below(hi) < count {
        hi *= 4.0;
        if !hi.is_finite() {
            return Err(Error::TooManyEigenpairs {
                requested: count,
                order: a.order,
            });
        }
    }

    let mut out = Vec::with_capacity(count);
    let mut left = lo;
    for k in 0..count {
        // smallest σ with more than k eigenvalues below it
        let (mut l, mut r) = (left, hi);
        while r - l > 1e-13 * r.abs().max(l.abs()).max(1e-300) {
            let mid = 0.5 * (l + r);
            if mid <= l || mid >= r {
                break;
            }
            if below(mid) > k {
                r = mid;
            } else {
                l = mid;
            }
        }
        let value = 0.5 * (l + r);
        out.push(value);
        left = l;
    }
    Ok(out)
}

/// Discrete Steklov pencil `K v = δ B v` restricted to discretely harmonic
/// functions: interior unknowns are eliminated by a Schur complement onto
/// the unknowns where `B` has a positive diagonal.
///
/// Vectors are returned on the full unknown set (harmonic extension) and are
/// `B`-orthonormal.
pub fn steklov_gevp(asm: &Assembly, count: usize) -> Result<Vec<GevpPair>> {
    let n = asm.unknowns();
    let boundary: Vec<usize> = (0..n).filter(|&i| asm.b.get(i, i) > 0.0).collect();
    let interior: Vec<usize> = (0..n).filter(|&i| asm.b.get(i, i) <= 0.0).collect();
    if boundary.is_empty() {
        return Err(Error::NoUnknowns);
    }
    if count > boundary.len() {
        return Err(Error::TooManyEigenpairs {
            requested: count,
            order: boundary.len(),
        });
    }
    let kgg = asm.k.submatrix(&boundary);
    let bgg = asm.b.submatrix(&boundary);
    let mut schur = kgg.clone();
    let mut lift: Vec<Vec<f64>> = Vec::new();
    if !interior.is_empty() {
        let kii = Cholesky::factor(&asm.k.submatrix(&interior))?;
        // columns of K_IΓ, then X = K_II⁻¹ K_IΓ
        for &g in boundary.iter() {
            let col: Vec<f64> = interior.iter().map(|&i| asm.k.get(i, g)).collect();
            lift.push(kii.solve(&col)?);
        }
        for (p, &gp) in boundary.iter().enumerate() {
            let kp: Vec<f64> = interior.iter().map(|&i| asm.k.get(i, gp)).collect();
            for q in 0..=p {
                let corr = linalg::dot(&kp, &lift[q]);
                schur.add(p, q, -corr);
            }
        }
    }
    let pairs = solve_gevp(&schur, &bgg, count)?;
    Ok(pairs
        .into_iter()
        .map(|pair| {
            let mut full = vec![0.0; n];
            for (p, &g) in boundary.iter().enumerate() {
                full[g] = pair.vector[p];
            }
            if !interior.is_empty() {
                for (r, &i) in interior.iter().enumerate() {
                    let s: f64 = (0..boundary.len()).map(|p| lift[p][r] * pair.vector[p]).sum();
                    full[i] = -s;
                }
            }
            GevpPair {
                value: pair.value,
                vector: full,
            }
        })
        .collect())
}

/// Relative change `(λ_h − λ) / λ`.
pub fn relative_error(approx: f64, exact: f64) -> f64 {
    (approx - exact) / exact
}

/// `‖v‖₂`.
pub fn norm(v: &[f64]) -> f64 {
    math::sqrt(linalg::dot(v, v))
}
