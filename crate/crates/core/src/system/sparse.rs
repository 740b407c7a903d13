//! Compressed sparse column storage for the assembled operator.

/// Square sparse matrix in compressed column form with sorted, duplicate-free rows in
/// every column.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix {
    n: usize,
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CscMatrix {
    /// Builds the matrix from `(row, col, value)` entries. Entries are ordered by column,
    /// then row, keeping the input order among duplicates, and duplicates are summed in
    /// that order, so the result depends only on the input sequence.
    pub fn from_triplets(n: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut col_ptr = vec![0; n + 1];
        let mut row_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            assert!(r < n && c < n, "entry ({r}, {c}) outside a {n}x{n} matrix");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_idx.push(r);
                values.push(v);
                col_ptr[c + 1] += 1;
                last = Some((r, c));
            }
        }
        for c in 0..n {
            col_ptr[c + 1] += col_ptr[c];
        }
        Self { n, col_ptr, row_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    /// Iterates `(row, col, value)` in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |c| self.column(c).map(move |(r, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        match self.row_idx[range.clone()].binary_search(&r) {
            Ok(i) => self.values[range.start + i],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (c, &xc) in x.iter().enumerate() {
            for (r, v) in self.column(c) {
                y[r] += v * xc;
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |a_ij − a_ji| / max |a_ij|`, zero for an empty matrix.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let worst = self.entries().fold(0.0_f64, |m, (r, c, v)| m.max((v - self.get(c, r)).abs()));
        worst / scale
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_are_sorted_and_summed() {
        let a = CscMatrix::from_triplets(3, vec![(2, 0, 1.0), (0, 0, 2.0), (2, 0, 0.5), (1, 2, -1.0), (0, 2, 4.0)]);
        assert_eq!(a.col_ptr, vec![0, 2, 2, 4]);
        assert_eq!(a.row_idx, vec![0, 2, 0, 1]);
        assert_eq!(a.values, vec![2.0, 1.5, 4.0, -1.0]);
        assert_eq!(a.get(2, 0), 1.5);
        assert_eq!(a.get(1, 1), 0.0);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![6.0, -1.0, 1.5]);
        assert_eq!(a.symmetry_defect(), 2.5 / 4.0);
    }

    #[test]
    fn symmetric_matrix_has_no_defect() {
        let a = CscMatrix::from_triplets(2, vec![(0, 1, 3.0), (1, 0, 3.0), (0, 0, 1.0)]);
        assert_eq!(a.symmetry_defect(), 0.0);
        assert_eq!(a.diagonal(), vec![1.0, 0.0]);
        assert_eq!(a.to_dense()[(1, 0)], 3.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn csc_agrees_with_dense(
                n in 1usize..8,
                raw in prop::collection::vec((0usize..8, 0usize..8, -5.0f64..5.0), 0..40),
                x in prop::collection::vec(-1.0f64..1.0, 8),
            ) {
                let trip: Vec<_> = raw.iter().map(|&(r, c, v)| (r % n, c % n, v)).collect();
                let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
                for &(r, c, v) in &trip {
                    dense[(r, c)] += v;
                }
                let a = CscMatrix::from_triplets(n, trip);
                for r in 0..n {
                    for c in 0..n {
                        prop_assert!((a.get(r, c) - dense[(r, c)]).abs() <= 1e-12);
                    }
                }
                let y = a.mul_vec(&x[..n]);
                let z = &dense * nalgebra::DVector::from_column_slice(&x[..n]);
                for i in 0..n {
                    prop_assert!((y[i] - z[i]).abs() <= 1e-12);
                }
            }

            #[test]
            fn symmetrised_triplets_have_no_defect(
                raw in prop::collection::vec((0usize..6, 0usize..6, -5.0f64..5.0), 1..30),
            ) {
                let trip: Vec<_> = raw.iter().flat_map(|&(r, c, v)| [(r, c, v), (c, r, v)]).collect();
                prop_assert_eq!(CscMatrix::from_triplets(6, trip).symmetry_defect(), 0.0);
            }
        }
    }
}
