//! Dense exact linear algebra over Q(i), plus determinants and adjugates of
//! polynomial matrices.

use std::fmt;

use num_traits::{One, Zero};

use crate::gaussian::GaussianRational as GR;
use crate::poly::{MultiPolynomial, Table};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GR>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![GR::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GR::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<GR>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<GR>]) -> Self {
        Self::from_rows(cols.to_vec()).transpose()
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| GR::from_int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<GR> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<GR> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GR>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn conj_transpose(&self) -> Self {
        let mut m = self.transpose();
        for x in &mut m.data {
            *x = x.conj();
        }
        m
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let p = a * &o[(k, j)];
                    m[(i, j)] += &p;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[GR]) -> Vec<GR> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum()).collect()
    }

    /// Rows of `self` followed by rows of `o`.
    pub fn stack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "stacking matrices of different widths");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Self::from_columns(&cols.iter().map(|&j| self.column(j)).collect::<Vec<_>>())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let d = &f * &m[(r, j)];
                        m[(i, j)] -= &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, in increasing
    /// free-column order.
    pub fn nullspace(&self) -> Vec<Vec<GR>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GR::zero(); self.cols];
                v[f] = GR::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(i, f)];
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> GR {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = GR::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else { return GR::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..m.cols {
                        let d = &f * &m[(c, j)];
                        m[(i, j)] -= &d;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = GR::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// One solution of `self · x = b`, `None` if inconsistent.
    pub fn solve(&self, b: &[GR]) -> Option<Vec<GR>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![GR::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = GR;
    fn index(&self, (i, j): (usize, usize)) -> &GR {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GR {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Rank over Q of vectors with real entries; imaginary parts, if any, are
/// treated as extra real coordinates.
pub fn real_rank(vectors: &[Vec<GR>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<GR>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| GR::from_real(x.re().clone())).chain(v.iter().map(|x| GR::from_real(x.im().clone()))).collect())
        .collect();
    Matrix::from_rows(rows).rank()
}

/// Determinant by cofactor expansion along the first row. Never divides.
pub fn poly_det(m: &[Vec<MultiPolynomial>], table: &Table) -> MultiPolynomial {
    let n = m.len();
    match n {
        0 => MultiPolynomial::one(table),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = MultiPolynomial::zero(table);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let t = &m[0][j] * &poly_det(&minor(m, 0, j), table);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<MultiPolynomial>], r: usize, c: usize) -> Vec<Vec<MultiPolynomial>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Classical adjugate: `adj[j][s] = (-1)^(j+s) det(minor(s, j))`, so that
/// `m · adj = adj · m = det(m) · I`.
pub fn poly_adjugate(m: &[Vec<MultiPolynomial>], table: &Table) -> Vec<Vec<MultiPolynomial>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![MultiPolynomial::one(table)]];
    }
    (0..n)
        .map(|j| {
            (0..n)
                .map(|s| {
                    let d = poly_det(&minor(m, s, j), table);
                    if (j + s) % 2 == 0 {
                        d
                    } else {
                        -&d
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableTable;

    #[test]
    fn inverse_and_nullspace() {
        let a = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(a.det(), GR::from_int(-2));
        let s = Matrix::from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(s.rank(), 1);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(s.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        assert!(s.solve(&[GR::one(), GR::zero()]).is_none());
    }

    #[test]
    fn complex_rank() {
        let i = GR::i();
        let m = Matrix::from_rows(vec![vec![GR::one(), i.clone()], vec![i.clone(), -GR::one()]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(real_rank(&[vec![GR::one()], vec![-GR::one()]]), 1);
    }

    #[test]
    fn adjugate_identity() {
        let t = VariableTable::plain(&["a", "b", "c"]);
        let v = |i| MultiPolynomial::var(&t, i);
        let one = MultiPolynomial::one(&t);
        let m = vec![
            vec![&one + &v(0), v(1), v(2)],
            vec![v(2), &one + &v(1), v(0)],
            vec![v(0).pow(2), v(1), &one + &v(2)],
        ];
        let adj = poly_adjugate(&m, &t);
        let d = poly_det(&m, &t);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = MultiPolynomial::zero(&t);
                for k in 0..3 {
                    acc = &acc + &(&m[i][k] * &adj[k][j]);
                }
                let want = if i == j { d.clone() } else { MultiPolynomial::zero(&t) };
                assert_eq!(acc, want);
            }
        }
    }
}
