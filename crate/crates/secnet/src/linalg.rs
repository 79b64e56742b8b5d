//! Dense matrices over a [`FieldSpec`]: rank, kernel/image bases, left
//! linear-system solving, uniformly random invertible matrices, greedy
//! independent-row selection, and entrywise field lifting.
//!
//! Everything is exact Gaussian elimination; matrices are value types and all
//! operations are pure. Entries are stored row-major as packed element codes.
//!
//! The test-vector literal format is rows of space-separated field-element
//! literals with `;` between rows, e.g. `1 0; 0 1`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{lift_element, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operands belong to different field specs")]
    SpecMismatch,
    #[error("no solution: target rows are outside the row space")]
    NoSolution,
    #[error("cannot parse matrix literal `{0}`")]
    BadLiteral(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Dense matrix over a field spec.
#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FqMatrix {
    pub fn zeros(spec: &FieldSpec, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix {
            spec: spec.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(spec: &FieldSpec, n: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row-major codes; every code must be a valid element.
    pub fn from_codes(
        spec: &FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<u64>,
    ) -> Result<FqMatrix, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!(
                "{}x{} needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for &c in &data {
            if c >= spec.order() {
                return Err(FieldError::CodeOutOfRange {
                    code: c,
                    order: spec.order(),
                }
                .into());
            }
        }
        Ok(FqMatrix {
            spec: spec.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(
        spec: &FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> FqMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FqMatrix {
            spec: spec.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Parses the `;`-row, space-entry literal format.
    pub fn parse(spec: &FieldSpec, text: &str) -> Result<FqMatrix, LinalgError> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for row_text in text.split(';') {
            let row: Result<Vec<u64>, _> = row_text
                .split_whitespace()
                .map(|tok| tok.parse::<u64>())
                .collect();
            let row = row.map_err(|_| LinalgError::BadLiteral(text.to_string()))?;
            rows.push(row);
        }
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::BadLiteral(text.to_string()));
        }
        let data: Vec<u64> = rows.iter().flatten().copied().collect();
        FqMatrix::from_codes(spec, rows.len(), cols, data)
    }

    /// Uniformly random matrix.
    pub fn random_uniform<R: Rng + ?Sized>(
        spec: &FieldSpec,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> FqMatrix {
        let data = (0..rows * cols).map(|_| spec.random_code(rng)).collect();
        FqMatrix {
            spec: spec.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Uniformly random member of GL(n, q) by rejection sampling: draw a
    /// uniform matrix, keep it when it is invertible. Conditioning a uniform
    /// draw on an event is exactly uniform on the event, and the density of
    /// GL(n, q) exceeds 1/4 for every q >= 2, so this terminates fast.
    pub fn random_invertible<R: Rng + ?Sized>(
        spec: &FieldSpec,
        n: usize,
        rng: &mut R,
    ) -> FqMatrix {
        loop {
            let m = FqMatrix::random_uniform(spec, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, code: u64) {
        debug_assert!(code < self.spec.order());
        self.data[i * self.cols + j] = code;
    }

    pub fn codes(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    fn check_same_spec(&self, other: &FqMatrix) -> Result<(), LinalgError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(LinalgError::SpecMismatch)
        }
    }

    pub fn add(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        self.check_same_spec(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "add {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.spec.add(a, b))
            .collect();
        Ok(FqMatrix {
            spec: self.spec.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        self.check_same_spec(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "sub {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.spec.sub(a, b))
            .collect();
        Ok(FqMatrix {
            spec: self.spec.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.spec.neg(a)).collect();
        FqMatrix {
            spec: self.spec.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        self.check_same_spec(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FqMatrix::zeros(&self.spec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, self.spec.add(cur, self.spec.mul(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.spec.mul(a, c)).collect();
        FqMatrix {
            spec: self.spec.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> FqMatrix {
        FqMatrix::from_fn(&self.spec, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        self.check_same_spec(other)?;
        if self.rows != other.rows {
            return Err(LinalgError::Dimension(format!(
                "hstack {} vs {} rows",
                self.rows, other.rows
            )));
        }
        Ok(FqMatrix::from_fn(
            &self.spec,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j)
                } else {
                    other.get(i, j - self.cols)
                }
            },
        ))
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        self.check_same_spec(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "vstack {} vs {} cols",
                self.cols, other.cols
            )));
        }
        Ok(FqMatrix::from_fn(
            &self.spec,
            self.rows + other.rows,
            self.cols,
            |i, j| {
                if i < self.rows {
                    self.get(i, j)
                } else {
                    other.get(i - self.rows, j)
                }
            },
        ))
    }

    pub fn select_rows(&self, indices: &[usize]) -> FqMatrix {
        FqMatrix::from_fn(&self.spec, indices.len(), self.cols, |i, j| {
            self.get(indices[i], j)
        })
    }

    pub fn select_cols(&self, indices: &[usize]) -> FqMatrix {
        FqMatrix::from_fn(&self.spec, self.rows, indices.len(), |i, j| {
            self.get(i, indices[j])
        })
    }

    /// Row-reduces in place; returns pivot column indices in order.
    fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(src) = (pivot_row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if src != pivot_row {
                for j in 0..self.cols {
                    let a = self.get(src, j);
                    let b = self.get(pivot_row, j);
                    self.set(src, j, b);
                    self.set(pivot_row, j, a);
                }
            }
            let inv = self
                .spec
                .inv(self.get(pivot_row, col))
                .expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.spec.mul(self.get(pivot_row, j), inv);
                self.set(pivot_row, j, v);
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let delta = self.spec.neg(self.spec.mul(factor, self.get(pivot_row, j)));
                    let v = self.spec.add(self.get(r, j), delta);
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        (m, pivots)
    }

    /// Rank over the spec's field.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right kernel {v : A v = 0}, returned as the columns of a
    /// cols x nullity matrix. dim kernel + rank = cols.
    pub fn kernel_basis(&self) -> FqMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = FqMatrix::zeros(&self.spec, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (prow, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, self.spec.neg(r.get(prow, fc)));
            }
        }
        basis
    }

    /// Basis of the column space: the columns of A at the pivot positions of
    /// its RREF.
    pub fn image_basis(&self) -> FqMatrix {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Greedy first-wins scan over rows: returns the indices of a maximal
    /// independent set of rows in row order, plus the selected submatrix.
    pub fn independent_rows(&self) -> (Vec<usize>, FqMatrix) {
        let mut indices = Vec::new();
        let mut echelon: Vec<Vec<u64>> = Vec::new();
        for i in 0..self.rows {
            let mut v = self.row(i).to_vec();
            // reduce against the accumulated echelon rows
            for e in &echelon {
                let lead = e.iter().position(|&c| c != 0).unwrap();
                if v[lead] != 0 {
                    let factor = v[lead];
                    for (vj, &ej) in v.iter_mut().zip(e.iter()) {
                        let delta = self.spec.neg(self.spec.mul(factor, ej));
                        *vj = self.spec.add(*vj, delta);
                    }
                }
            }
            if let Some(lead) = v.iter().position(|&c| c != 0) {
                let inv = self.spec.inv(v[lead]).unwrap();
                for vj in v.iter_mut() {
                    *vj = self.spec.mul(*vj, inv);
                }
                // keep echelon sorted by leading index
                let pos = echelon
                    .iter()
                    .position(|e| e.iter().position(|&c| c != 0).unwrap() > lead)
                    .unwrap_or(echelon.len());
                echelon.insert(pos, v);
                indices.push(i);
            }
        }
        let sub = self.select_rows(&indices);
        (indices, sub)
    }

    /// Entrywise lift into an extension of this matrix's spec. Rank is
    /// preserved because lifting is a field homomorphism.
    pub fn lift(&self, target: &FieldSpec) -> Result<FqMatrix, LinalgError> {
        // validate via one element, then copy codes (the embedding keeps them)
        lift_element(&self.spec.zero(), target)?;
        Ok(FqMatrix {
            spec: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        })
    }

    /// Literal form (`;`-separated rows of space-separated codes).
    pub fn to_literal(&self) -> String {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x{} over {}: {}]", self.rows, self.cols, self.spec, self.to_literal())
    }
}

/// Solves X * A = B for X, returning the particular solution with all free
/// variables set to zero. Fails with [`LinalgError::NoSolution`] when some
/// row of B lies outside the row space of A.
pub fn solve_left(a: &FqMatrix, b: &FqMatrix) -> Result<FqMatrix, LinalgError> {
    if a.spec != b.spec {
        return Err(LinalgError::SpecMismatch);
    }
    if a.cols != b.cols {
        return Err(LinalgError::Dimension(format!(
            "solve_left: A has {} cols, B has {}",
            a.cols, b.cols
        )));
    }
    // X A = B  <=>  A^T X^T = B^T; eliminate on [A^T | B^T]
    let at = a.transpose();
    let bt = b.transpose();
    let aug = at.hstack(&bt)?;
    let (r, pivots) = aug.rref();
    let na = at.cols(); // a.rows
    // pivot in the B block means inconsistency
    if pivots.iter().any(|&c| c >= na) {
        return Err(LinalgError::NoSolution);
    }
    let mut xt = FqMatrix::zeros(&a.spec, na, b.rows);
    for (prow, &pc) in pivots.iter().enumerate() {
        for j in 0..b.rows {
            xt.set(pc, j, r.get(prow, na + j));
        }
    }
    let x = xt.transpose();
    debug_assert_eq!(x.mul(a).unwrap(), *b);
    Ok(x)
}

/// Dimension of Im(A) n Im(B): rank A + rank B - rank [A|B].
pub fn image_intersection_dim(a: &FqMatrix, b: &FqMatrix) -> Result<usize, LinalgError> {
    let joint = a.hstack(b)?;
    Ok(a.rank() + b.rank() - joint.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rank_basics() {
        let f2 = gf(2);
        assert_eq!(FqMatrix::identity(&f2, 4).rank(), 4);
        assert_eq!(FqMatrix::zeros(&f2, 3, 5).rank(), 0);
        let m = FqMatrix::parse(&f2, "1 1; 1 1").unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_equals_transpose_rank_and_rank_nullity() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for spec in [gf(2), gf(3), gf(5)] {
            for _ in 0..50 {
                let r = rng.gen_range(1..5);
                let c = rng.gen_range(1..5);
                let m = FqMatrix::random_uniform(&spec, r, c, &mut rng);
                assert_eq!(m.rank(), m.transpose().rank());
                let k = m.kernel_basis();
                assert_eq!(k.cols() + m.rank(), m.cols());
                if k.cols() > 0 {
                    assert!(m.mul(&k).unwrap().is_zero());
                }
                let img = m.image_basis();
                assert_eq!(img.rank(), m.rank());
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let f2 = gf(2);
        assert_eq!(FqMatrix::identity(&f2, 3).kernel_basis().cols(), 0);
        assert_eq!(FqMatrix::zeros(&f2, 2, 2).kernel_basis().cols(), 2);
        let m = FqMatrix::parse(&f2, "1 1").unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!((k.get(0, 0), k.get(1, 0)), (1, 1));
    }

    #[test]
    fn solve_left_identity_and_zero() {
        let f3 = gf(3);
        let a = FqMatrix::identity(&f3, 3);
        let b = FqMatrix::parse(&f3, "1 2 0; 0 1 1").unwrap();
        assert_eq!(solve_left(&a, &b).unwrap(), b);

        let az = FqMatrix::zeros(&f3, 2, 2);
        let bz = FqMatrix::zeros(&f3, 2, 2);
        let x = solve_left(&az, &bz).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn solve_left_column_case() {
        let f2 = gf(2);
        // A = [[1],[1]], B = [[1]]: the particular solution must satisfy XA=B
        let a = FqMatrix::parse(&f2, "1; 1").unwrap();
        let b = FqMatrix::parse(&f2, "1").unwrap();
        let x = solve_left(&a, &b).unwrap();
        assert_eq!(x.mul(&a).unwrap(), b);
    }

    /// Exhaustive no-solution oracle: try every X.
    fn exhaustive_has_solution(a: &FqMatrix, b: &FqMatrix) -> bool {
        let q = a.spec().order();
        let cells = b.rows() * a.rows();
        let total = q.pow(cells as u32);
        for idx in 0..total {
            let mut v = idx;
            let x = FqMatrix::from_fn(a.spec(), b.rows(), a.rows(), |_, _| {
                let c = v % q;
                v /= q;
                c
            });
            if x.mul(a).unwrap() == *b {
                return true;
            }
        }
        false
    }

    #[test]
    fn solve_left_no_solution_vs_exhaustive() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for spec in [gf(2), gf(3)] {
            for _ in 0..60 {
                let ra = rng.gen_range(1..3);
                let c = rng.gen_range(1..3);
                let rb = rng.gen_range(1..3);
                let a = FqMatrix::random_uniform(&spec, ra, c, &mut rng);
                let b = FqMatrix::random_uniform(&spec, rb, c, &mut rng);
                match solve_left(&a, &b) {
                    Ok(x) => assert_eq!(x.mul(&a).unwrap(), b),
                    Err(LinalgError::NoSolution) => {
                        assert!(!exhaustive_has_solution(&a, &b), "A={a:?} B={b:?}")
                    }
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn random_invertible_properties() {
        let f2 = gf(2);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        // n=1 over GF(2): only [[1]]
        let m = FqMatrix::random_invertible(&f2, 1, &mut rng);
        assert_eq!(m.get(0, 0), 1);
        for _ in 0..20 {
            let m = FqMatrix::random_invertible(&f2, 3, &mut rng);
            assert_eq!(m.rank(), 3);
        }
    }

    #[test]
    fn random_invertible_uniform_over_gl2_f2() {
        // |GL(2,2)| = 6; 60000 draws, each frequency within 3 sigma of 1/6
        let f2 = gf(2);
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let mut counts = std::collections::HashMap::new();
        let n = 60_000usize;
        for _ in 0..n {
            let m = FqMatrix::random_invertible(&f2, 2, &mut rng);
            *counts.entry(m.codes().to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for (_, &c) in counts.iter() {
            assert!((c as f64 - n as f64 * p).abs() <= 3.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn independent_rows_examples() {
        let f2 = gf(2);
        let m = FqMatrix::identity(&f2, 3);
        assert_eq!(m.independent_rows().0, vec![0, 1, 2]);
        let m = FqMatrix::parse(&f2, "1 0; 1 0; 0 1").unwrap();
        let (idx, sub) = m.independent_rows();
        assert_eq!(idx, vec![0, 2]);
        assert_eq!(sub.rank(), 2);
        let z = FqMatrix::zeros(&f2, 2, 2);
        assert!(z.independent_rows().0.is_empty());
    }

    #[test]
    fn independent_rows_preserve_row_space() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..40 {
            let spec = gf(3);
            let m = FqMatrix::random_uniform(&spec, 4, 3, &mut rng);
            let (idx, sub) = m.independent_rows();
            assert_eq!(idx.len(), m.rank());
            assert_eq!(sub.rank(), sub.rows());
            // row space equality: every row of m is solvable from sub
            if sub.rows() > 0 {
                assert!(solve_left(&sub, &m).is_ok());
            } else {
                assert!(m.is_zero());
            }
        }
    }

    #[test]
    fn lift_preserves_rank_and_products() {
        let f2 = gf(2);
        let f16 = FieldSpec::extension(&f2, 4, None).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..100 {
            let m = FqMatrix::random_uniform(&f2, 4, 4, &mut rng);
            assert_eq!(m.lift(&f16).unwrap().rank(), m.rank());
        }
        assert_eq!(
            FqMatrix::identity(&f2, 3).lift(&f16).unwrap(),
            FqMatrix::identity(&f16, 3)
        );
        let f3 = gf(3);
        let f9 = FieldSpec::extension(&f3, 2, None).unwrap();
        for _ in 0..20 {
            let a = FqMatrix::random_uniform(&f3, 3, 3, &mut rng);
            let b = FqMatrix::random_uniform(&f3, 3, 3, &mut rng);
            assert_eq!(
                a.mul(&b).unwrap().lift(&f9).unwrap(),
                a.lift(&f9).unwrap().mul(&b.lift(&f9).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn literal_roundtrip() {
        let f5 = gf(5);
        let m = FqMatrix::parse(&f5, "1 2 3; 4 0 1").unwrap();
        let again = FqMatrix::parse(&f5, &m.to_literal()).unwrap();
        assert_eq!(m, again);
        assert!(FqMatrix::parse(&f5, "1 2; 3").is_err());
        assert!(FqMatrix::parse(&f5, "9").is_err());
    }

    #[test]
    fn image_intersection() {
        let f2 = gf(2);
        let a = FqMatrix::parse(&f2, "1; 0").unwrap();
        let b = FqMatrix::parse(&f2, "0; 1").unwrap();
        assert_eq!(image_intersection_dim(&a, &b).unwrap(), 0);
        assert_eq!(image_intersection_dim(&a, &a).unwrap(), 1);
    }
}
