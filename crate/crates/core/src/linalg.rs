//! Gaussian elimination over GF(q): rank, reduced row echelon form, kernels
//! and particular solutions of `H x = s`.

use crate::field::Field;

/// Reduced row echelon form of a matrix together with the row operations
/// that produced it: `transform · original = reduced`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Vec<Vec<u8>>,
    pub pivots: Vec<usize>,
    pub transform: Vec<Vec<u8>>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn row_reduce(field: &Field, rows: &[Vec<u8>], ncols: usize) -> Echelon {
    let nrows = rows.len();
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let mut t: Vec<Vec<u8>> = (0..nrows)
        .map(|i| {
            let mut r = vec![0u8; nrows];
            r[i] = 1;
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        t.swap(row, p);
        let inv = field.inv(m[row][col]).unwrap();
        for x in m[row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for x in t[row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let (pivot_m, pivot_t) = (m[row].clone(), t[row].clone());
        for r in 0..nrows {
            if r != row && m[r][col] != 0 {
                let c = field.neg(m[r][col]);
                field.axpy(&mut m[r], c, &pivot_m);
                field.axpy(&mut t[r], c, &pivot_t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon {
        reduced: m,
        pivots,
        transform: t,
    }
}

pub fn rank(field: &Field, rows: &[Vec<u8>], ncols: usize) -> usize {
    let mut basis = IncrementalBasis::new(ncols);
    for r in rows {
        basis.insert(field, r);
    }
    basis.rank()
}

/// Basis of `{x : A x = 0}` for an `r × ncols` matrix `A`.
pub fn kernel_basis(field: &Field, ech: &Echelon, ncols: usize) -> Vec<Vec<u8>> {
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![0u8; ncols];
            x[free] = 1;
            for (i, &p) in ech.pivots.iter().enumerate() {
                x[p] = field.neg(ech.reduced[i][free]);
            }
            x
        })
        .collect()
}

/// Row-echelon basis built one vector at a time; used for ranks of large
/// word lists without materializing a matrix.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    ncols: usize,
    // each row is normalized so that its pivot entry is 1
    rows: Vec<(usize, Vec<u8>)>,
}

impl IncrementalBasis {
    pub fn new(ncols: usize) -> Self {
        IncrementalBasis {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Returns true when `v` was independent of the current span.
    pub fn insert(&mut self, field: &Field, v: &[u8]) -> bool {
        if self.is_full() {
            return false;
        }
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                field.axpy(&mut v, field.neg(c), row);
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = field.inv(v[p]).unwrap();
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
        // keep earlier rows reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                field.axpy(row, field.neg(c), &v);
            }
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let f = Field::new(3).unwrap();
        assert_eq!(rank(&f, &[vec![1, 1, 1], vec![2, 2, 2]], 3), 1);
        assert_eq!(rank(&f, &[vec![0, 0, 0]], 3), 0);
        assert_eq!(rank(&f, &[vec![1, 0, 2], vec![0, 1, 1], vec![1, 1, 0]], 3), 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = Field::new(5).unwrap();
        let a = vec![vec![1, 2, 3, 4, 0], vec![0, 1, 1, 1, 1]];
        let ech = row_reduce(&f, &a, 5);
        assert_eq!(ech.rank(), 2);
        let ker = kernel_basis(&f, &ech, 5);
        assert_eq!(ker.len(), 3);
        for k in &ker {
            for row in &a {
                let dot = row
                    .iter()
                    .zip(k)
                    .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                assert_eq!(dot, 0);
            }
        }
        assert_eq!(rank(&f, &ker, 5), 3);
    }

    #[test]
    fn transform_reproduces_reduced_form() {
        let f = Field::new(4).unwrap();
        let a = vec![vec![2, 3, 1, 0], vec![1, 1, 0, 3], vec![3, 2, 1, 3]];
        let ech = row_reduce(&f, &a, 4);
        for (i, trow) in ech.transform.iter().enumerate() {
            let mut acc = vec![0u8; 4];
            for (k, &c) in trow.iter().enumerate() {
                f.axpy(&mut acc, c, &a[k]);
            }
            assert_eq!(acc, ech.reduced[i]);
        }
    }
}
