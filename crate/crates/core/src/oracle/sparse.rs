use std::collections::BTreeMap;

/// Exact integer matrix stored column by column. Every component of every
/// generating natural transformation is integral, so integer entries are
/// exact here.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: (0..n as u32).map(|i| vec![(i, 1)]).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        let mut m = SparseMatrix { rows, cols };
        m.normalize();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    fn normalize(&mut self) {
        for col in &mut self.cols {
            if col.len() <= 1 {
                col.retain(|&(_, v)| v != 0);
                continue;
            }
            let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
            for &(r, v) in col.iter() {
                *acc.entry(r).or_insert(0) += v;
            }
            *col = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        }
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "inner dimensions");
        let cols = rhs
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for &(k, v) in col {
                    for &(r, w) in &self.cols[k as usize] {
                        let e = acc.entry(r).or_insert(0);
                        *e = e.checked_add(v.checked_mul(w).expect("overflow")).expect("overflow");
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols }
    }

    /// `self + scale · rhs`.
    pub fn add_scaled(&self, rhs: &SparseMatrix, scale: i64) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()));
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<u32, i64> = a.iter().copied().collect();
                for &(r, v) in b {
                    *acc.entry(r).or_insert(0) += scale * v;
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols }
    }

    /// Dense row-major copy, for small matrices and display.
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                d[i as usize][j] = v;
            }
        }
        d
    }
}

impl PartialEq for SparseMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}

impl Eq for SparseMatrix {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_sum() {
        let a = SparseMatrix::from_columns(2, vec![vec![(0, 1), (1, 2)], vec![(1, 3)]]);
        let i = SparseMatrix::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(i.mul(&a), a);
        assert!(a.add_scaled(&a, -1).is_zero());
        assert_eq!(a.mul(&a).to_dense(), vec![vec![1, 0], vec![8, 9]]);
    }
}
