//! Compressed sparse row storage.
//!
//! Entries are kept row-major with ascending columns and no stored zeros,
//! so iteration order is canonical.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CsrMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Build from `(row, col, value)` triplets. Duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        for &(r, c, v) in &entries {
            if r >= rows || c >= cols {
                return Err(Error::Dimension(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::Dimension(format!("non-finite entry at ({r}, {c})")));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0; rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        let mut counts = vec![0usize; rows];
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
                continue;
            }
            last = Some((r, c));
            col_idx.push(c);
            values.push(v);
            counts[r] += 1;
        }
        for r in 0..rows {
            row_ptr[r + 1] = row_ptr[r] + counts[r];
        }
        let mut m = CsrMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        };
        m.prune_zeros();
        Ok(m)
    }

    fn prune_zeros(&mut self) {
        if self.values.iter().all(|&v| v != 0.0) {
            return;
        }
        let triplets: Vec<_> = self.iter().filter(|&(_, _, v)| v != 0.0).collect();
        let mut row_ptr = vec![0; self.rows + 1];
        for &(r, _, _) in &triplets {
            row_ptr[r + 1] += 1;
        }
        for r in 0..self.rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        self.row_ptr = row_ptr;
        self.col_idx = triplets.iter().map(|t| t.1).collect();
        self.values = triplets.iter().map(|t| t.2).collect();
    }

    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        if dense.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged dense matrix".into()));
        }
        Self::from_triplets(
            rows,
            cols,
            dense
                .iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (cols, vals) = self.row_slices(row);
        match cols.binary_search(&col) {
            Ok(i) => vals[i],
            Err(_) => 0.0,
        }
    }

    fn row_slices(&self, row: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[row]..self.row_ptr[row + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (cols, vals) = self.row_slices(row);
        cols.iter().copied().zip(vals.iter().copied())
    }

    /// All stored entries, row-major with ascending columns.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn row_dense(&self, row: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (c, v) in self.row(row) {
            out[c] = v;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row_dense(r)).collect()
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for (r, c, v) in self.iter() {
            let slot = next[c];
            col_idx[slot] = r;
            values[slot] = v;
            next[c] += 1;
        }
        CsrMatrix {
            rows: self.cols,
            cols: self.rows,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// `out = self · x`.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.cols, "matvec operand length");
        assert_eq!(out.len(), self.rows, "matvec output length");
        for (r, o) in out.iter_mut().enumerate() {
            *o = self.row(r).map(|(c, v)| v * x[c]).sum();
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.matvec_into(x, &mut out);
        out
    }

    /// Sparse product `self · rhs`.
    pub fn matmul(&self, rhs: &CsrMatrix) -> Result<CsrMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut triplets = Vec::new();
        let mut acc = vec![0.0; rhs.cols];
        let mut touched = vec![false; rhs.cols];
        let mut cols_used = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in rhs.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols_used.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols_used.sort_unstable();
            for &c in &cols_used {
                triplets.push((r, c, acc[c]));
                acc[c] = 0.0;
                touched[c] = false;
            }
            cols_used.clear();
        }
        CsrMatrix::from_triplets(self.rows, rhs.cols, triplets)
    }

    pub fn is_identical(&self, other: &CsrMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.row_ptr == other.row_ptr
            && self.col_idx == other.col_idx
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Format with 9 significant digits, like C's `%.9g`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{v:.decimals$}");
        trim_fraction(&fixed).to_string()
    } else {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = CsrMatrix::from_triplets(
            2,
            3,
            vec![(1, 2, 1.0), (0, 1, 2.0), (1, 2, 1.5), (0, 0, 0.0)],
        )
        .unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 2), 2.5);
        assert_eq!(m.get(0, 0), 0.0);
        let order: Vec<_> = m.iter().map(|(r, c, _)| (r, c)).collect();
        assert_eq!(order, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cancelling_duplicates_are_pruned() {
        let m =
            CsrMatrix::from_triplets(1, 2, vec![(0, 0, 1.0), (0, 0, -1.0), (0, 1, 3.0)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), 3.0);
    }

    #[test]
    fn rejects_out_of_bounds_and_nan() {
        assert!(CsrMatrix::from_triplets(1, 1, vec![(1, 0, 1.0)]).is_err());
        assert!(CsrMatrix::from_triplets(1, 1, vec![(0, 0, f64::NAN)]).is_err());
    }

    #[test]
    fn transpose_and_matvec() {
        let m = CsrMatrix::from_dense(&[vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]]).unwrap();
        let t = m.transpose();
        assert_eq!(
            t.to_dense(),
            vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 3.0]]
        );
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![3.0, 3.0]);
        assert!(t.transpose().is_identical(&m));
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = CsrMatrix::zeros(2, 3);
        let b = CsrMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(2.5), "2.5");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(2.5402265), "2.5402265");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1234567894.0), "1.23456789e+09");
        assert_eq!(format_sig9(0.000012345), "1.2345e-05");
        assert_eq!(format_sig9(-1.8325814637483102), "-1.83258146");
        assert_eq!(format_sig9(9.9999999999), "10");
    }
}
