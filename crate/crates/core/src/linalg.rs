//! Dense matrices over F_q with exact Gaussian elimination.

use std::fmt;

use crate::gf::{Fe, Field};

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl PartialEq for Matrix {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}\n{}", self.rows, self.cols, self.render())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Fe>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let rows = (0..self.rows)
            .map(|r| cols.iter().map(|&c| self.get(r, c)).collect())
            .collect();
        let mut m = Matrix::from_rows(&self.field, rows);
        m.cols = cols.len();
        m
    }

    /// Appends a column.
    pub fn with_column(&self, col: &[Fe]) -> Matrix {
        assert_eq!(col.len(), self.rows);
        let rows = (0..self.rows)
            .map(|r| {
                let mut v = self.row(r).to_vec();
                v.push(col[r]);
                v
            })
            .collect();
        Matrix::from_rows(&self.field, rows)
    }

    /// Row vector times matrix: the codeword of message `msg`.
    pub fn left_mul(&self, msg: &[Fe]) -> Vec<Fe> {
        let f = &*self.field;
        let mut out = vec![f.zero(); self.cols];
        for (r, &m) in msg.iter().enumerate() {
            if f.is_zero(m) {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(m, self.get(r, c)));
            }
        }
        out
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &*self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                m.set(r, j, f.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || f.is_zero(factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nonzero rows of the rref.
    pub fn row_space_basis(&self) -> Matrix {
        let (m, piv) = self.rref();
        let rows = (0..piv.len()).map(|r| m.row(r).to_vec()).collect::<Vec<_>>();
        let mut out = Matrix::from_rows(&self.field, rows);
        out.cols = self.cols;
        out
    }

    pub fn same_row_space(&self, other: &Matrix) -> bool {
        self.cols == other.cols && self.row_space_basis() == other.row_space_basis()
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Fe {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        det_in_place(&self.field, &mut self.data.clone(), self.rows)
    }

    /// Whether the submatrix on `rows` x `cols` is nonsingular.
    pub fn minor_nonsingular(&self, rows: &[usize], cols: &[usize]) -> bool {
        assert_eq!(rows.len(), cols.len());
        let mut buf: Vec<Fe> = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c)))
            .collect();
        !self.field.is_zero(det_in_place(&self.field, &mut buf, rows.len()))
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Fe>> {
        let f = &*self.field;
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Whitespace-separated grid in field notation, one row per line.
    pub fn render(&self) -> String {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|&e| self.field.render(e))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Gaussian elimination on a row-major `n x n` buffer.
pub(crate) fn det_in_place(f: &Field, a: &mut [Fe], n: usize) -> Fe {
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !f.is_zero(a[r * n + c])) else {
            return f.zero();
        };
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let piv = a[c * n + c];
        det = f.mul(det, piv);
        let inv = f.inv(piv).expect("pivot is nonzero");
        for r in c + 1..n {
            let factor = f.mul(a[r * n + c], inv);
            if f.is_zero(factor) {
                continue;
            }
            for j in c..n {
                a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[c * n + j]));
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    #[test]
    fn identity_rank_and_det() {
        let f = FieldCtx::of_order(9).unwrap();
        for k in 1..6 {
            let i = Matrix::identity(&f, k);
            assert_eq!(i.rank(), k);
            assert_eq!(i.det(), f.one());
        }
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = FieldCtx::of_order(7).unwrap();
        let e = |v: i64| f.from_int(v);
        let m = Matrix::from_rows(
            &f,
            vec![
                vec![e(1), e(2), e(3), e(4)],
                vec![e(2), e(4), e(6), e(1)],
                vec![e(3), e(6), e(2), e(5)],
            ],
        );
        let ns = m.nullspace();
        assert_eq!(ns.len() + m.rank(), 4);
        for v in ns {
            let mv = m.transpose().left_mul(&v);
            assert!(mv.iter().all(|&x| f.is_zero(x)));
        }
    }

    #[test]
    fn vandermonde_determinant() {
        let f = FieldCtx::of_order(8).unwrap();
        let pts: Vec<Fe> = f.elements().take(4).collect();
        let rows = (0..4).map(|i| pts.iter().map(|&a| f.pow(a, i)).collect()).collect();
        let v = Matrix::from_rows(&f, rows);
        let mut expect = f.one();
        for i in 0..4 {
            for j in i + 1..4 {
                expect = f.mul(expect, f.sub(pts[j], pts[i]));
            }
        }
        assert_eq!(v.det(), expect);
        assert!(v.minor_nonsingular(&[0, 1], &[2, 3]));
    }

    #[test]
    fn rref_is_idempotent_and_preserves_row_space() {
        let f = FieldCtx::of_order(4).unwrap();
        let w = f.generator();
        let m = Matrix::from_rows(
            &f,
            vec![
                vec![w, f.one(), f.zero()],
                vec![f.mul(w, w), w, f.zero()],
                vec![f.zero(), f.one(), w],
            ],
        );
        let (r, piv) = m.rref();
        assert_eq!(r.rref().0, r);
        assert_eq!(piv.len(), m.rank());
        assert!(m.same_row_space(&r));
    }
}
