//! Exact sparse matrices and Gaussian elimination over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-sparse rational matrix. Each row holds `(column, value)` pairs sorted by
/// column with no explicit zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Scalar)>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self
                .dense_row(r)
                .iter()
                .map(crate::scalar::pretty)
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Scalar::one())
    }

    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.data[i].push((i, c.clone()));
            }
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(nr, nc);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged dense matrix");
            m.data[i] = row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect();
        }
        m
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut acc: Vec<std::collections::BTreeMap<usize, Scalar>> =
            vec![Default::default(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet out of range");
            if v.is_zero() {
                continue;
            }
            let e = acc[r].entry(c).or_insert_with(Scalar::zero);
            *e += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let cols = columns.len();
        let trip = columns.iter().enumerate().flat_map(|(j, col)| {
            assert_eq!(col.len(), rows);
            col.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(i, v)| (i, j, v.clone()))
        });
        Self::from_triplets(rows, cols, trip)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row_entries(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.data[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(pos) => self.data[r][pos].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn dense_row(&self, r: usize) -> Vec<Scalar> {
        let mut row = vec![Scalar::zero(); self.cols];
        for (j, v) in &self.data[r] {
            row[*j] = v.clone();
        }
        row
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.dense_row(r)).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Matrix {
        let trip = self
            .data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (*j, i, v.clone())));
        Matrix::from_triplets(self.cols, self.rows, trip)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, v * c)).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    fn combine(&self, other: &Matrix, sign: bool) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        let mut data = Vec::with_capacity(self.rows);
        for (a, b) in self.data.iter().zip(&other.data) {
            let mut out = Vec::with_capacity(a.len() + b.len());
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
                let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
                if take_a {
                    out.push(a[i].clone());
                    i += 1;
                } else if take_b {
                    let v = if sign { b[j].1.clone() } else { -&b[j].1 };
                    out.push((b[j].0, v));
                    j += 1;
                } else {
                    let v = if sign {
                        &a[i].1 + &b[j].1
                    } else {
                        &a[i].1 - &b[j].1
                    };
                    if !v.is_zero() {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            data.push(out);
        }
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.combine(other, false)
    }

    /// `self + c * other`
    pub fn add_scaled(&self, other: &Matrix, c: &Scalar) -> Matrix {
        self.add(&other.scale(c))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut acc: Vec<Option<Scalar>> = vec![None; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let p = a * b;
                    match &mut acc[*j] {
                        Some(v) => *v += p,
                        slot @ None => {
                            *slot = Some(p);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if let Some(v) = acc[j].take() {
                    if !v.is_zero() {
                        out.push((j, v));
                    }
                }
            }
            touched.clear();
            data.push(out);
        }
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// `[self, other] = self*other - other*self`
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        self.data
            .iter()
            .map(|row| {
                let mut s = Scalar::zero();
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        s += a * &v[*j];
                    }
                }
                s
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = Vec::with_capacity(rows);
        for ra in &self.data {
            for rb in &other.data {
                let mut out = Vec::with_capacity(ra.len() * rb.len());
                for (ja, a) in ra {
                    for (jb, b) in rb {
                        out.push((ja * other.cols + jb, a * b));
                    }
                }
                data.push(out);
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Restricts `self` to an invariant subspace spanned by an echelon basis,
    /// returning the matrix of the restriction in that basis.
    pub fn restrict(&self, basis: &EchelonBasis) -> Result<Matrix> {
        let images: Vec<Vec<Scalar>> = basis.vectors().iter().map(|b| self.mul_vec(b)).collect();
        let mut cols = Vec::with_capacity(images.len());
        for img in &images {
            cols.push(basis.coordinates(img).ok_or_else(|| {
                Error::Invalid("subspace is not invariant under the operator".into())
            })?);
        }
        Ok(Matrix::from_columns(basis.len(), &cols))
    }
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * c).collect()
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

type SparseRow = Vec<(usize, Scalar)>;

/// `a - f * b` on sorted sparse rows.
fn sparse_axpy(a: &SparseRow, f: &Scalar, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sparse reduced row echelon form: rows sorted by pivot column, each with a
/// leading 1 and zeros in every other pivot column.
pub fn sparse_rref(rows: impl IntoIterator<Item = SparseRow>) -> (Vec<SparseRow>, Vec<usize>) {
    let mut input: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    input.sort_by_key(Vec::len);
    let mut pivots: std::collections::BTreeMap<usize, SparseRow> =
        std::collections::BTreeMap::new();
    for mut r in input {
        while let Some((c, lead)) = r.first().cloned() {
            match pivots.get(&c) {
                Some(p) => r = sparse_axpy(&r, &lead, p),
                None => {
                    let inv = Scalar::one() / lead;
                    r.iter_mut().for_each(|(_, v)| *v *= &inv);
                    pivots.insert(c, r);
                    break;
                }
            }
        }
    }
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for &c in &cols {
        let mut row = pivots.remove(&c).unwrap();
        let hits: Vec<(usize, Scalar)> = row[1..]
            .iter()
            .filter(|(j, _)| pivots.contains_key(j))
            .cloned()
            .collect();
        for (j, v) in hits {
            row = sparse_axpy(&row, &v, &pivots[&j]);
        }
        pivots.insert(c, row);
    }
    let piv: Vec<usize> = pivots.keys().copied().collect();
    (pivots.into_values().collect(), piv)
}

fn to_sparse(row: &[Scalar]) -> SparseRow {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

fn to_dense(row: &SparseRow, n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (i, v) in row {
        out[*i] = v.clone();
    }
    out
}

/// Reduced row echelon form in place (zero rows dropped); returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let (reduced, pivots) = sparse_rref(rows.iter().map(|r| to_sparse(r)));
    *rows = reduced.iter().map(|r| to_dense(r, ncols)).collect();
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut d = m.to_dense();
    rref(&mut d).len()
}

/// Basis of the null space `{v : m v = 0}`, one vector per free column.
pub fn kernel(m: &Matrix) -> Vec<Vec<Scalar>> {
    let n = m.cols();
    let (reduced, pivots) = sparse_rref(m.data.iter().cloned());
    let mut free_rows: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = (0..n)
        .filter(|c| pivots.binary_search(c).is_err())
        .map(|c| (c, Vec::new()))
        .collect();
    for (row, &pc) in reduced.iter().zip(&pivots) {
        for (j, v) in &row[1..] {
            if let Some(e) = free_rows.get_mut(j) {
                e.push((pc, -v.clone()));
            }
        }
    }
    free_rows
        .into_iter()
        .map(|(f, entries)| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (pc, x) in entries {
                v[pc] = x;
            }
            v
        })
        .collect()
}

/// Solves `m x = b`. Returns a particular solution and a kernel basis, or
/// `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    assert_eq!(m.rows(), b.len());
    let n = m.cols();
    let mut aug: Vec<Vec<Scalar>> = m
        .to_dense()
        .into_iter()
        .zip(b)
        .map(|(mut row, bi)| {
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[n].clone();
    }
    Some((x, kernel(m)))
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let mut aug: Vec<Vec<Scalar>> = m
        .to_dense()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Invalid("matrix is singular".into()));
    }
    let inv: Vec<Vec<Scalar>> = aug.into_iter().map(|row| row[n..].to_vec()).collect();
    Ok(Matrix::from_dense(&inv))
}

/// A subspace basis in reduced row echelon form (vectors stored as rows).
/// Pivot order follows the ambient basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonBasis {
    ambient: usize,
    vectors: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Scalar>>) -> Self {
        let mut rows: Vec<Vec<Scalar>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient))
            .filter(|v| !vec_is_zero(v))
            .collect();
        let pivots = rref(&mut rows);
        EchelonBasis {
            ambient,
            vectors: rows,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        EchelonBasis {
            ambient,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit_vector(ambient, i)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![Scalar::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in recon.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r += c * x;
                }
            }
        }
        (recon.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r += c * x;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn empty_inverse() {
        assert_eq!(inverse(&Matrix::zeros(0, 0)).unwrap().rows(), 0);
    }

    #[test]
    fn product_and_commutator() {
        let a = m(&[&[0, 1], &[0, 0]]);
        let b = m(&[&[0, 0], &[1, 0]]);
        let h = a.commutator(&b);
        assert_eq!(h, m(&[&[1, 0], &[0, -1]]));
        assert_eq!(a.mul(&a), Matrix::zeros(2, 2));
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(vec_is_zero(&a.mul_vec(v)));
        }
        let (x, _) = solve(&a, &[int(1), int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(1), int(2)]);
        assert!(solve(&a, &[int(1), int(3)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_err());
    }

    #[test]
    fn echelon_coordinates() {
        let b = EchelonBasis::span(
            3,
            vec![
                vec![int(1), int(1), int(0)],
                vec![int(2), int(2), int(0)],
                vec![int(0), int(1), int(1)],
            ],
        );
        assert_eq!(b.len(), 2);
        let v = vec![int(3), frac(7, 2), frac(1, 2)];
        let c = b.coordinates(&v).unwrap();
        assert_eq!(b.combine(&c), v);
        assert!(b.coordinates(&[int(1), int(0), int(0)]).is_none());
    }

    #[test]
    fn kron_shape() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let i = Matrix::identity(3);
        let k = a.kron(&i);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(4, 1), int(3));
    }
}
