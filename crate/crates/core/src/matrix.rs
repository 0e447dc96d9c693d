//! Sparse symmetric operators and small dense matrices.
//!
//! [`SymmetricOperator`] is the carrier for every assembled discrete
//! operator: the 5-point Laplacian, the slit (double-cover) Laplacian, the
//! Robin family members, and the circle matrices. Entries are stored once
//! per (row, column) pair and mirrored on insertion, so the matrix is
//! symmetric bit-for-bit by construction.

use crate::error::{Error, Result};

/// Identifies what a matrix row stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DofLabel {
    /// Plain index (circle matrices, abstract chains).
    Index(usize),
    /// Lattice node of a grid operator.
    Lattice { ix: i64, iy: i64 },
    /// Sheet-tagged lattice node of an explicit double cover.
    Cover { ix: i64, iy: i64, sheet: u8 },
}

/// Real sparse symmetric matrix with an index map back to grid nodes.
#[derive(Debug, Clone)]
pub struct SymmetricOperator {
    dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
    labels: Vec<DofLabel>,
}

impl SymmetricOperator {
    /// Zero matrix with plain index labels.
    pub fn zeros(dim: usize) -> Self {
        Self::with_labels((0..dim).map(DofLabel::Index).collect())
    }

    /// Zero matrix with explicit row labels.
    pub fn with_labels(labels: Vec<DofLabel>) -> Self {
        let dim = labels.len();
        SymmetricOperator {
            dim,
            rows: vec![Vec::new(); dim],
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[DofLabel] {
        &self.labels
    }

    pub fn label(&self, row: usize) -> DofLabel {
        self.labels[row]
    }

    /// Add `value` to entry (i, j) and, when i ≠ j, the identical value to
    /// (j, i). This is the only mutation path, so transposed entries stay
    /// bitwise equal.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.dim && j < self.dim, "index out of range");
        Self::add_to_row(&mut self.rows[i], j, value);
        if i != j {
            Self::add_to_row(&mut self.rows[j], i, value);
        }
    }

    fn add_to_row(row: &mut Vec<(usize, f64)>, col: usize, value: f64) {
        match row.binary_search_by(|probe| probe.0.cmp(&col)) {
            Ok(pos) => row[pos].1 += value,
            Err(pos) => row.insert(pos, (col, value)),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by(|probe| probe.0.cmp(&j))
            .map(|pos| self.rows[i][pos].1)
            .unwrap_or(0.0)
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Largest |i − j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, _) in row {
                bw = bw.max(i.abs_diff(j));
            }
        }
        bw
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = 0.0;
            for &(j, v) in row {
                acc += v * x[j];
            }
            y[i] = acc;
        }
    }

    /// ‖A x − λ x‖₂.
    pub fn residual_norm(&self, x: &[f64], lambda: f64) -> f64 {
        let mut y = vec![0.0; self.dim];
        self.matvec(x, &mut y);
        y.iter()
            .zip(x)
            .map(|(yi, xi)| (yi - lambda * xi) * (yi - lambda * xi))
            .sum::<f64>()
            .sqrt()
    }

    /// Infinity norm (row-sum norm); cheap scale estimate.
    pub fn norm_inf(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Principal submatrix on `keep` (ascending, deduplicated indices),
    /// keeping the original labels.
    pub fn principal_submatrix(&self, keep: &[usize]) -> SymmetricOperator {
        let mut map = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut out = SymmetricOperator::with_labels(
            keep.iter().map(|&old| self.labels[old]).collect(),
        );
        for (new_i, &old_i) in keep.iter().enumerate() {
            for &(old_j, v) in &self.rows[old_i] {
                let new_j = map[old_j];
                if new_j != usize::MAX && new_j >= new_i {
                    out.add(new_i, new_j, v);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Maximum |entry(i,j) − entry(j,i)|; zero by construction, kept for
    /// assertions in tests.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                worst = worst.max((v - self.entry(j, i)).abs());
            }
        }
        worst
    }

    /// Nonzero off-diagonal count per row; the 5-point stencil keeps this ≤ 4.
    pub fn max_offdiag_per_row(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().filter(|&&(j, _)| j != i).count())
            .max()
            .unwrap_or(0)
    }
}

/// Dense symmetric matrix, row-major. Used for DN matrices and as the
/// workspace of the dense eigensolver.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = DenseMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Overwrite with the symmetric part (A + Aᵀ)/2.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Symmetric indefinite LDLᵀ factorization without pivoting, stored either
/// densely or within a band. Suited to shifted Laplacians whose shift keeps
/// clear of the spectrum; a pivot below tolerance reports
/// [`Error::FactorizationError`].
pub struct Ldlt {
    n: usize,
    bw: usize,
    /// Row i holds L(i, i-bw..i) followed by D(i) at position bw.
    band: Vec<f64>,
}

impl Ldlt {
    /// Factor A − shift·I where A is given as a [`SymmetricOperator`].
    pub fn factor(a: &SymmetricOperator, shift: f64) -> Result<Ldlt> {
        let n = a.dim();
        let bw = a.bandwidth();
        let width = bw + 1;
        let mut band = vec![0.0; n * width];
        for i in 0..n {
            for &(j, v) in a.row(i) {
                if j <= i {
                    let val = if i == j { v - shift } else { v };
                    band[i * width + (bw - (i - j))] = val;
                }
            }
        }
        Self::factor_band(n, bw, band, a.norm_inf().max(shift.abs()))
    }

    /// Factor a dense symmetric matrix (band = full).
    pub fn factor_dense(a: &DenseMatrix, shift: f64) -> Result<Ldlt> {
        let n = a.n();
        let bw = n.saturating_sub(1);
        let width = bw + 1;
        let mut band = vec![0.0; n * width];
        for i in 0..n {
            for j in 0..=i {
                let val = if i == j {
                    a.get(i, j) - shift
                } else {
                    0.5 * (a.get(i, j) + a.get(j, i))
                };
                band[i * width + (bw - (i - j))] = val;
            }
        }
        Self::factor_band(n, bw, band, a.norm_inf().max(shift.abs()))
    }

    fn factor_band(n: usize, bw: usize, mut band: Vec<f64>, scale: f64) -> Result<Ldlt> {
        let width = bw + 1;
        let pivot_tol = 1e-13 * scale.max(f64::MIN_POSITIVE);
        let mut d = vec![0.0; n];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            // L(i, j) = (A(i,j) - sum_k L(i,k) L(j,k) d_k) / d_j, k < j
            for j in lo..i {
                let mut s = band[i * width + (bw - (i - j))];
                let klo = lo.max(j.saturating_sub(bw));
                for k in klo..j {
                    s -= band[i * width + (bw - (i - k))]
                        * band[j * width + (bw - (j - k))]
                        * d[k];
                }
                band[i * width + (bw - (i - j))] = s / d[j];
            }
            let mut dd = band[i * width + bw];
            for k in lo..i {
                let l = band[i * width + (bw - (i - k))];
                dd -= l * l * d[k];
            }
            if dd.abs() <= pivot_tol {
                return Err(Error::FactorizationError {
                    pivot: dd,
                    index: i,
                });
            }
            d[i] = dd;
            band[i * width + bw] = dd;
        }
        Ok(Ldlt { n, bw, band })
    }

    /// Count of negative pivots; by Sylvester's law this is the number of
    /// eigenvalues of A − shift·I below zero.
    pub fn negative_pivots(&self) -> usize {
        let width = self.bw + 1;
        (0..self.n)
            .filter(|&i| self.band[i * width + self.bw] < 0.0)
            .count()
    }

    /// Solve (L D Lᵀ) x = b in place.
    pub fn solve(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let width = self.bw + 1;
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let mut s = b[i];
            for k in lo..i {
                s -= self.band[i * width + (self.bw - (i - k))] * b[k];
            }
            b[i] = s;
        }
        for i in 0..self.n {
            b[i] /= self.band[i * width + self.bw];
        }
        for i in (0..self.n).rev() {
            let hi = (i + self.bw).min(self.n - 1);
            let mut s = b[i];
            for k in (i + 1)..=hi {
                s -= self.band[k * width + (self.bw - (k - i))] * b[k];
            }
            b[i] = s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_mirrors_entries_bitwise() {
        let mut a = SymmetricOperator::zeros(3);
        a.add(0, 2, 1.0 / 3.0);
        a.add(1, 1, 2.0);
        assert_eq!(a.entry(0, 2).to_bits(), a.entry(2, 0).to_bits());
        assert_eq!(a.asymmetry(), 0.0);
    }

    #[test]
    fn ldlt_solves_small_system() {
        let mut a = SymmetricOperator::zeros(3);
        a.add(0, 0, 4.0);
        a.add(1, 1, 4.0);
        a.add(2, 2, 4.0);
        a.add(0, 1, -1.0);
        a.add(1, 2, -1.0);
        let f = Ldlt::factor(&a, 0.0).unwrap();
        let mut b = vec![1.0, 2.0, 3.0];
        f.solve(&mut b);
        let mut y = vec![0.0; 3];
        a.matvec(&b, &mut y);
        for (yi, want) in y.iter().zip([1.0, 2.0, 3.0]) {
            assert!((yi - want).abs() < 1e-12);
        }
    }

    #[test]
    fn ldlt_negative_pivots_match_inertia() {
        // diag(-1, 2, -3) has two negative eigenvalues
        let mut a = SymmetricOperator::zeros(3);
        a.add(0, 0, -1.0);
        a.add(1, 1, 2.0);
        a.add(2, 2, -3.0);
        let f = Ldlt::factor(&a, 0.0).unwrap();
        assert_eq!(f.negative_pivots(), 2);
    }

    #[test]
    fn ldlt_reports_singular_shift() {
        let mut a = SymmetricOperator::zeros(2);
        a.add(0, 0, 1.0);
        a.add(1, 1, 1.0);
        match Ldlt::factor(&a, 1.0) {
            Err(Error::FactorizationError { .. }) => {}
            other => panic!("expected factorization error, got {other:?}"),
        }
    }
}
