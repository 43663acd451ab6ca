//! Small dense linear algebra over either scalar regime.

use nalgebra::DMatrix;

use crate::field::{Field, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<K> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<K>,
}

impl<K: Field> DenseMatrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<K> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Self { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(K::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form with partial pivoting by modulus.
    /// Returns the pivot columns.
    pub fn rref(&mut self, tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let best = (r..self.rows)
                .filter(|&i| !self.get(i, c).is_negligible(tol))
                .max_by(|&a, &b| {
                    self.get(a, c)
                        .abs_f64()
                        .partial_cmp(&self.get(b, c).abs_f64())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else { continue };
            self.swap_rows(r, p);
            let inv = K::one() / self.get(r, c).clone();
            for j in c..self.cols {
                let v = self.get(r, j).clone() * inv.clone();
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_negligible(0.0) {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j).clone() - factor.clone() * self.get(r, j).clone();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Solves the square system `self * x = b` by elimination.
    pub fn solve(&self, b: &[K], tol: f64) -> Result<Vec<K>> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(Error::InvalidArgument("solve needs a square system".into()));
        }
        let n = self.rows;
        let mut aug = DenseMatrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let pivots = aug.rref(tol);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::RankDeficient(format!(
                "rank {} < {n}",
                pivots.iter().filter(|&&c| c < n).count()
            )));
        }
        Ok((0..n).map(|i| aug.get(i, n).clone()).collect())
    }

    pub fn determinant(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = K::one();
        for c in 0..n {
            let best = (c..n)
                .filter(|&i| !m.get(i, c).is_negligible(0.0))
                .max_by(|&a, &b| {
                    m.get(a, c)
                        .abs_f64()
                        .partial_cmp(&m.get(b, c).abs_f64())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else { return K::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = det * pivot.clone();
            for i in c + 1..n {
                let factor = m.get(i, c).clone() / pivot.clone();
                if factor.is_negligible(0.0) {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).clone() - factor.clone() * m.get(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Null space basis together with rank information.
#[derive(Debug, Clone)]
pub struct Kernel<K> {
    pub rank: usize,
    pub basis: Vec<Vec<K>>,
    /// Floating regime: smallest singular value relative to the largest.
    /// Exact regime: 0 when the kernel is nontrivial, 1 otherwise.
    pub smallest_ratio: f64,
}

pub(crate) fn exact_kernel<K: Field>(m: &DenseMatrix<K>) -> Kernel<K> {
    let mut r = m.clone();
    let pivots = r.rref(0.0);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![K::zero(); m.cols];
            v[fc] = K::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, fc).clone();
            }
            v
        })
        .collect::<Vec<_>>();
    Kernel {
        rank: pivots.len(),
        smallest_ratio: if basis.is_empty() { 1.0 } else { 0.0 },
        basis,
    }
}

pub(crate) fn svd_kernel<K: Field>(m: &DenseMatrix<K>, tol: f64) -> Kernel<K> {
    let cols = m.cols;
    // Pad with zero rows so the SVD exposes the full right singular basis.
    let rows = m.rows.max(cols);
    let mat = DMatrix::<C64>::from_fn(rows, cols, |i, j| {
        if i < m.rows {
            m.get(i, j).to_c64()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut basis = Vec::new();
    let mut rank = 0;
    for (i, &s) in sv.iter().enumerate() {
        if smax > 0.0 && s > tol * smax {
            rank += 1;
        } else {
            let v: Vec<K> = v_t
                .row(i)
                .iter()
                .map(|z| K::from_c64(z.conj()).expect("floating regime"))
                .collect();
            basis.push(v);
        }
    }
    Kernel {
        rank,
        basis,
        smallest_ratio: if smax > 0.0 { smin / smax } else { 0.0 },
    }
}

/// Sorted singular values (descending) of a complex matrix.
/// The Mersenne prime `2^61 − 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Rank modulo `MODULUS`, a lower bound for the rank over `Q`. `None`
/// when an entry has no residue.
pub fn rank_mod_p<K: Field>(m: &DenseMatrix<K>) -> Option<usize> {
    let p = MODULUS;
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).residue(p)).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(piv) = (rank..m.rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c], p);
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..m.cols {
                row[j] = (row[j] + p - mul_mod(f, pivot_row[j], p)) % p;
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    Some(rank)
}

pub fn singular_values(m: &DenseMatrix<C64>) -> Vec<f64> {
    let mat = DMatrix::<C64>::from_fn(m.rows, m.cols, |i, j| *m.get(i, j));
    let mut sv: Vec<f64> = mat.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn modular_rank_bounds_rational_rank() {
        let half = Q::new(1.into(), 2.into());
        let m = DenseMatrix::from_rows(vec![vec![half.clone(), q(1), q(0)], vec![q(1), q(2), q(0)], vec![q(0), q(0), q(3)]]);
        assert_eq!(rank_mod_p(&m), Some(2));
        assert_eq!(m.clone().rref(0.0).len(), 2);
        assert_eq!(half.residue(MODULUS).map(|h| mul_mod(h, 2, MODULUS)), Some(1));
        assert_eq!(rank_mod_p(&DenseMatrix::from_rows(vec![vec![C64::new(1.0, 0.0)]])), None);
    }

    #[test]
    fn exact_kernel_of_rank_one_matrix() {
        let m = DenseMatrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let k = Q::kernel(&m, 0.0);
        assert_eq!(k.rank, 1);
        assert_eq!(k.basis.len(), 2);
        for v in &k.basis {
            assert!(m.mul_vec(v).iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn svd_kernel_matches_exact() {
        let m = DenseMatrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(1.0, 1.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
        ]);
        let k = C64::kernel(&m, 1e-10);
        assert_eq!(k.rank, 2);
        assert_eq!(k.basis.len(), 1);
        let r = m.mul_vec(&k.basis[0]);
        assert!(r.iter().all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn solve_and_determinant() {
        let m = DenseMatrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(3)]]);
        assert_eq!(m.determinant(), q(5));
        let x = m.solve(&[q(3), q(5)], 0.0).unwrap();
        assert_eq!(x, vec![Q::new(4.into(), 5.into()), Q::new(7.into(), 5.into())]);
        let sing = DenseMatrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(sing.solve(&[q(1), q(1)], 0.0).is_err());
    }
}
