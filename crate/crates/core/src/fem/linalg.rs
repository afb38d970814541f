//! Dense symmetric matrices, envelope Cholesky and symmetric eigensolvers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Symmetric matrix stored as its packed lower triangle, row by row.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymMatrix {
    pub order: usize,
    pub entries: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![0.0; order * (order + 1) / 2],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from packed lower-triangular entries.
    pub fn from_lower(order: usize, entries: Vec<f64>) -> Result<Self> {
        let expected = order * (order + 1) / 2;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: entries.len(),
            });
        }
        Ok(Self { order, entries })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.entries[packed(i, j)]
        } else {
            self.entries[packed(j, i)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let p = if j <= i { packed(i, j) } else { packed(j, i) };
        self.entries[p] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let p = if j <= i { packed(i, j) } else { packed(j, i) };
        self.entries[p] += v;
    }

    /// Lower-triangular row `i`: entries `(i, 0..=i)`.
    #[inline]
    pub fn row_lower(&self, i: usize) -> &[f64] {
        &self.entries[packed(i, 0)..=packed(i, i)]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|v| v * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &SymMatrix, s: f64) -> Result<Self> {
        self.same_order(other)?;
        Ok(Self {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + s * b)
                .collect(),
        })
    }

    fn same_order(&self, other: &SymMatrix) -> Result<()> {
        if self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: x.len(),
            });
        }
        let mut y = vec![0.0; self.order];
        for i in 0..self.order {
            let row = self.row_lower(i);
            let mut acc = 0.0;
            for j in 0..i {
                acc += row[j] * x[j];
                y[j] += row[j] * x[i];
            }
            y[i] += acc + row[i] * x[i];
        }
        Ok(y)
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let ay = self.mul_vec(y)?;
        Ok(dot(x, &ay))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.order];
        for i in 0..self.order {
            let row = self.row_lower(i);
            for j in 0..i {
                sums[i] += row[j].abs();
                sums[j] += row[j].abs();
            }
            sums[i] += row[i].abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Column of the first nonzero entry in each lower row.
    pub fn envelope(&self) -> Vec<usize> {
        (0..self.order)
            .map(|i| self.row_lower(i).iter().position(|&v| v != 0.0).unwrap_or(i))
            .collect()
    }

    /// Half-bandwidth: `max_i (i - first_nonzero(i))`.
    pub fn bandwidth(&self) -> usize {
        self.envelope()
            .iter()
            .enumerate()
            .map(|(i, &f)| i - f)
            .max()
            .unwrap_or(0)
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().take(a + 1) {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.order;
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.get(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        d
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    math::sqrt(dot(a, a))
}

/// Lower Cholesky factor `A = L Lᵀ` that keeps the envelope of `A`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    factor: SymMatrix,
    first: Vec<usize>,
}

impl Cholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let n = a.order;
        let first = a.envelope();
        let mut l = SymMatrix::zeros(n);
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let start = fi.max(fj);
                let mut s = a.get(i, j);
                {
                    let ri = &l.entries[packed(i, 0)..packed(i, 0) + i + 1];
                    let rj = &l.entries[packed(j, 0)..packed(j, 0) + j + 1];
                    for k in start..j {
                        s -= ri[k] * rj[k];
                    }
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite { pivot: i, value: s });
                    }
                    l.entries[packed(i, i)] = math::sqrt(s);
                } else {
                    l.entries[packed(i, j)] = s / l.entries[packed(j, j)];
                }
            }
        }
        Ok(Self { factor: l, first })
    }

    pub fn order(&self) -> usize {
        self.factor.order
    }

    /// Solves `L y = b` in place.
    pub fn forward(&self, y: &mut [f64]) {
        let n = self.order();
        // leading zeros of the right-hand side stay zero
        let start = y.iter().position(|&v| v != 0.0).unwrap_or(n);
        for i in start..n {
            let row = self.factor.row_lower(i);
            let lo = self.first[i].max(start);
            let mut s = y[i];
            for k in lo..i {
                s -= row[k] * y[k];
            }
            y[i] = s / row[i];
        }
    }

    /// Solves `Lᵀ x = y` in place.
    pub fn backward(&self, x: &mut [f64]) {
        let n = self.order();
        for i in (0..n).rev() {
            let row = self.factor.row_lower(i);
            x[i] /= row[i];
            let xi = x[i];
            for k in self.first[i]..i {
                x[k] -= row[k] * xi;
            }
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        self.forward(&mut x);
        self.backward(&mut x);
        Ok(x)
    }
}

/// Eigen-decomposition of a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `i` is the eigenvector for `values[i]`.
    /// Empty when vectors were not requested.
    pub vectors: Vec<f64>,
    pub order: usize,
}

impl SymEigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        let n = self.order;
        (0..n).map(|r| self.vectors[r * n + i]).collect()
    }
}

/// Cyclic Jacobi rotations on a row-major dense symmetric matrix.
pub fn jacobi_eigen(dense: &[f64], n: usize) -> SymEigen {
    let mut a = dense.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    sorted(diag, v, n, true)
}

fn sorted(values: Vec<f64>, vectors: Vec<f64>, n: usize, with_vectors: bool) -> SymEigen {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let vals = order.iter().map(|&i| values[i]).collect();
    let vecs = if with_vectors {
        let mut out = vec![0.0; n * n];
        for r in 0..n {
            for (c, &src) in order.iter().enumerate() {
                out[r * n + c] = vectors[r * n + src];
            }
        }
        out
    } else {
        Vec::new()
    };
    SymEigen {
        values: vals,
        vectors: vecs,
        order: n,
    }
}

/// Householder reduction to tridiagonal form followed by implicit QL.
pub fn tridiagonal_ql_eigen(dense: &[f64], n: usize, with_vectors: bool) -> Result<SymEigen> {
    let mut z = dense.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiagonalize(&mut z, n, &mut d, &mut e, with_vectors);
    implicit_ql(&mut d, &mut e, &mut z, n, with_vectors)?;
    Ok(sorted(d, z, n, with_vectors))
}

// Householder tridiagonalization (the classic tred2 scheme on a row-major
// array). On exit `d` holds the diagonal, `e[1..]` the subdiagonal and, when
// requested, `z` the accumulated orthogonal transform.
fn householder_tridiagonalize(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], with_vectors: bool) {
    if n == 0 {
        return;
    }
    for j in 0..n {
        d[j] = z[(n - 1) * n + j];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = z[(i - 1) * n + j];
                z[i * n + j] = 0.0;
                z[j * n + i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = math::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for j in 0..i {
                e[j] = 0.0;
            }
            for j in 0..i {
                f = d[j];
                z[j * n + i] = f;
                g = e[j] + z[j * n + j] * f;
                for k in (j + 1)..i {
                    g += z[k * n + j] * d[k];
                    e[k] += z[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    z[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = z[(i - 1) * n + j];
                z[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }
    if with_vectors {
        for i in 0..(n - 1) {
            z[(n - 1) * n + i] = z[i * n + i];
            z[i * n + i] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = z[k * n + i + 1] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += z[k * n + i + 1] * z[k * n + j];
                    }
                    for k in 0..=i {
                        z[k * n + j] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                z[k * n + i + 1] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = z[(n - 1) * n + j];
            z[(n - 1) * n + j] = 0.0;
        }
        z[(n - 1) * n + n - 1] = 1.0;
    } else {
        // Only the diagonal is needed: it sits on the diagonal of the
        // partially reduced array.
        for j in 0..n {
            d[j] = z[j * n + j];
        }
    }
    e[0] = 0.0;
}

fn implicit_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize, with_vectors: bool) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NotPositiveDefinite {
                        pivot: l,
                        value: f64::NAN,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in (l + 2)..n {
                    d[i] -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if with_vectors {
                        for k in 0..n {
                            h = z[k * n + i + 1];
                            z[k * n + i + 1] = s * z[k * n + i] + c * h;
                            z[k * n + i] = c * z[k * n + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
