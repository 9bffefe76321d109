//! Exact linear algebra over the rationals.
//!
//! Everything here works on dense matrices of arbitrary-precision rationals.
//! Subspaces are always stored by their reduced row echelon basis so that two
//! equal subspaces compare equal and repeated builds are bit-identical.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Build a rational from a machine integer.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Build the rational `num/den`. Panics on a zero denominator.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("vector is not in the span of the subspace")]
    NotInSpan,
    #[error("not a complex: composite of maps {0} and {1} is nonzero")]
    NotAComplex(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense row-major matrix over the rationals.
///
/// A matrix with `rows` rows and `cols` columns is read as a linear map from
/// a `cols`-dimensional space to a `rows`-dimensional space acting on column
/// vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    /// Builds a matrix from row vectors; all rows must share `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row);
        }
        RationalMatrix { rows: n, cols, entries }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Rational) {
        let e = &mut self.entries[r * self.cols + c];
        *e += v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.add_at(r, c, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> RationalMatrix {
        self.scale(&-Rational::one())
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &RationalMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Adds `block` into `self` at `(r0, c0)`.
    pub fn accumulate(&mut self, r0: usize, c0: usize, block: &RationalMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if !v.is_zero() {
                    self.add_at(r0 + r, c0 + c, v);
                }
            }
        }
    }

    /// The sub-block of rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> RationalMatrix {
        let mut out = Self::zeros(nr, nc);
        for r in 0..nr {
            for c in 0..nc {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    /// Tensor (Kronecker) product.
    pub fn kronecker(&self, rhs: &RationalMatrix) -> RationalMatrix {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a.is_zero() {
                    continue;
                }
                for rr in 0..rhs.rows {
                    for cc in 0..rhs.cols {
                        let b = rhs.get(rr, cc);
                        if !b.is_zero() {
                            out.set(r * rhs.rows + rr, c * rhs.cols + cc, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(p) = (pr..rows).find(|&r| !a.get(r, c).is_zero()) else {
            continue;
        };
        if p != pr {
            for k in 0..cols {
                a.entries.swap(p * cols + k, pr * cols + k);
            }
        }
        let inv = a.get(pr, c).recip();
        for k in c..cols {
            let v = a.get(pr, k) * &inv;
            a.set(pr, k, v);
        }
        let pivot_row: Vec<Rational> = a.row(pr).to_vec();
        for r in 0..rows {
            if r == pr {
                continue;
            }
            let f = a.get(r, c).clone();
            if f.is_zero() {
                continue;
            }
            for k in c..cols {
                if !pivot_row[k].is_zero() {
                    let v = a.get(r, k) - &f * &pivot_row[k];
                    a.set(r, k, v);
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    (a, pivots)
}

/// A linear subspace of `ℚ^ambient_dim`, stored by its reduced row echelon
/// basis (rows are basis vectors).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(&RationalMatrix::identity(ambient_dim))
    }

    /// Span of the rows of `generators`.
    pub fn span(generators: &RationalMatrix) -> Self {
        let (reduced, pivots) = rref(generators);
        let basis = reduced.block(0, 0, pivots.len(), generators.cols());
        Subspace {
            ambient_dim: generators.cols(),
            basis,
            pivots,
        }
    }

    pub fn span_of(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        Self::span(&RationalMatrix::from_rows(ambient_dim, vectors.to_vec()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        coordinates_in_span(self, v).is_ok()
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows: Vec<Vec<Rational>> = (0..self.dim()).map(|r| self.basis.row(r).to_vec()).collect();
        rows.extend((0..other.dim()).map(|r| other.basis.row(r).to_vec()));
        Subspace::span_of(self.ambient_dim, &rows)
    }

    /// Intersection of two subspaces of the same ambient space.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve a·B1 = b·B2, i.e. the kernel of [B1^T | -B2^T].
        let (d1, d2) = (self.dim(), other.dim());
        let mut stacked = RationalMatrix::zeros(self.ambient_dim, d1 + d2);
        stacked.place(0, 0, &self.basis.transpose());
        stacked.place(0, d1, &other.basis.transpose().neg());
        let ker = kernel_basis(&stacked);
        let coeffs = ker.basis().block(0, 0, ker.dim(), d1);
        Subspace::span(&coeffs.mul(&self.basis))
    }
}

/// The kernel `{v : m·v = 0}` as a canonical subspace of `ℚ^cols`.
pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    let (reduced, pivots) = rref(m);
    let cols = m.cols();
    let mut vectors = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -reduced.get(r, free).clone();
        }
        vectors.push(v);
    }
    Subspace::span_of(cols, &vectors)
}

/// Coefficients `c` with `c·basis = v`.
pub fn coordinates_in_span(s: &Subspace, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if v.len() != s.ambient_dim {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector of length {} in ambient dimension {}",
            v.len(),
            s.ambient_dim
        )));
    }
    let coeffs: Vec<Rational> = s.pivots.iter().map(|&p| v[p].clone()).collect();
    let mut rebuilt = vec![Rational::zero(); s.ambient_dim];
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (slot, b) in rebuilt.iter_mut().zip(s.basis.row(k)) {
            if !b.is_zero() {
                *slot += c * b;
            }
        }
    }
    if rebuilt.as_slice() != v {
        return Err(LinalgError::NotInSpan);
    }
    Ok(coeffs)
}

/// Coordinates of every column of `m` in the basis of `s`, as the columns of
/// the returned matrix.
pub fn coordinates_of_columns(s: &Subspace, m: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    let mut out = RationalMatrix::zeros(s.dim(), m.cols());
    for c in 0..m.cols() {
        let coords = coordinates_in_span(s, &m.column(c))?;
        for (r, x) in coords.into_iter().enumerate() {
            out.set(r, c, x);
        }
    }
    Ok(out)
}

/// Projection onto and section of the quotient `ℚ^ambient_dim / sub`.
///
/// The quotient basis is given by the non-pivot coordinates of the echelon
/// basis of `sub`; `projection·section` is the identity of the quotient and
/// `projection` annihilates `sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStructure {
    pub projection: RationalMatrix,
    pub section: RationalMatrix,
}

pub fn quotient_structure(ambient_dim: usize, sub: &Subspace) -> Result<QuotientStructure, LinalgError> {
    if sub.ambient_dim != ambient_dim {
        return Err(LinalgError::DimensionMismatch(format!(
            "subspace of ℚ^{} in ℚ^{ambient_dim}",
            sub.ambient_dim
        )));
    }
    let mut is_pivot = vec![false; ambient_dim];
    for &p in &sub.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
    let mut projection = RationalMatrix::zeros(free.len(), ambient_dim);
    let mut section = RationalMatrix::zeros(ambient_dim, free.len());
    for (t, &qc) in free.iter().enumerate() {
        projection.set(t, qc, Rational::one());
        section.set(qc, t, Rational::one());
        // v ↦ v - Σ_k v[p_k]·b_k, then read off coordinate qc.
        for (k, &p) in sub.pivots.iter().enumerate() {
            let b = sub.basis.get(k, qc);
            if !b.is_zero() {
                projection.set(t, p, -b.clone());
            }
        }
    }
    Ok(QuotientStructure { projection, section })
}

/// Homology dimensions of `C_0 → C_1 → … → C_m`, where `maps[k]: C_k → C_{k+1}`.
///
/// Returns one entry per space, `dim ker(maps[k]) − rank(maps[k−1])`.
pub fn complex_homology(space_dims: &[usize], maps: &[RationalMatrix]) -> Result<Vec<usize>, LinalgError> {
    if space_dims.len() != maps.len() + 1 {
        return Err(LinalgError::DimensionMismatch(format!(
            "{} spaces for {} maps",
            space_dims.len(),
            maps.len()
        )));
    }
    for (k, m) in maps.iter().enumerate() {
        if m.cols() != space_dims[k] || m.rows() != space_dims[k + 1] {
            return Err(LinalgError::DimensionMismatch(format!(
                "map {k} is {}x{} between spaces of dims {} and {}",
                m.rows(),
                m.cols(),
                space_dims[k],
                space_dims[k + 1]
            )));
        }
    }
    for k in 1..maps.len() {
        if !maps[k].mul(&maps[k - 1]).is_zero() {
            return Err(LinalgError::NotAComplex(k - 1, k));
        }
    }
    let ranks: Vec<usize> = maps.iter().map(RationalMatrix::rank).collect();
    Ok((0..space_dims.len())
        .map(|k| {
            let out = if k < maps.len() { ranks[k] } else { 0 };
            let inc = if k > 0 { ranks[k - 1] } else { 0 };
            space_dims[k] - out - inc
        })
        .collect())
}

/// True when every entry is an integer.
pub fn is_integral(m: &RationalMatrix) -> bool {
    m.entries().iter().all(|x| x.is_integer())
}

/// Largest absolute numerator, for diagnostics.
pub fn max_abs_numerator(m: &RationalMatrix) -> BigInt {
    m.entries().iter().map(|x| x.numer().abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Fraction-free (Bareiss) elimination over the integers.
    fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
        let mut prev = BigInt::one();
        let mut rank = 0;
        for c in 0..m {
            if rank == n {
                break;
            }
            let Some(p) = (rank..n).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            for r in rank + 1..n {
                for k in c + 1..m {
                    a[r][k] = (&a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k]) / &prev;
                }
                a[r][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }

    #[test]
    fn rref_identity() {
        let (r, p) = rref(&RationalMatrix::identity(2));
        assert_eq!(r, RationalMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = rref(&RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, RationalMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_rank_matches_bareiss_on_fixed_sample() {
        let rows = vec![
            vec![1, -2, 0, 2, 1, -1],
            vec![2, 1, -1, 0, 0, 2],
            vec![3, -1, -1, 2, 1, 1],
            vec![0, 2, 2, -2, 1, 0],
        ];
        let m = RationalMatrix::from_rows(6, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
        assert_eq!(m.rank(), bareiss_rank(&rows));
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&RationalMatrix::identity(3)).dim(), 0);
        let k = kernel_basis(&RationalMatrix::zeros(2, 3));
        assert_eq!(k, Subspace::full(3));
        let k = kernel_basis(&RationalMatrix::from_i64(&[&[1, -1, 0], &[0, 1, -1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis(), &RationalMatrix::from_i64(&[&[1, 1, 1]]));
    }

    #[test]
    fn kernel_brute_force_small_vectors() {
        let m = RationalMatrix::from_i64(&[&[1, -1, 0], &[0, 1, -1]]);
        let k = kernel_basis(&m);
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    let v = vec![q(a), q(b), q(c)];
                    let in_kernel = m.mul_vec(&v).iter().all(Zero::is_zero);
                    assert_eq!(in_kernel, k.contains(&v));
                }
            }
        }
    }

    #[test]
    fn coordinates() {
        let s = Subspace::full(2);
        assert_eq!(coordinates_in_span(&s, &[q(3), q(5)]).unwrap(), vec![q(3), q(5)]);
        let s = Subspace::span_of(3, &[vec![q(1), q(1), q(1)]]);
        assert_eq!(coordinates_in_span(&s, &[q(2), q(2), q(2)]).unwrap(), vec![q(2)]);
        assert_eq!(coordinates_in_span(&s, &[q(1), q(0), q(0)]), Err(LinalgError::NotInSpan));
    }

    #[test]
    fn quotient_examples() {
        let sub = Subspace::span_of(2, &[vec![q(1), q(1)]]);
        let qs = quotient_structure(2, &sub).unwrap();
        assert_eq!(qs.projection.rows(), 1);
        assert!(qs.projection.mul_vec(&[q(1), q(1)]).iter().all(Zero::is_zero));
        assert_eq!(qs.projection.mul(&qs.section), RationalMatrix::identity(1));

        let qs = quotient_structure(3, &Subspace::zero(3)).unwrap();
        assert_eq!(qs.projection, RationalMatrix::identity(3));

        let qs = quotient_structure(2, &Subspace::full(2)).unwrap();
        assert_eq!(qs.projection.rows(), 0);
    }

    #[test]
    fn homology_examples() {
        assert_eq!(complex_homology(&[1], &[]).unwrap(), vec![1]);
        assert_eq!(complex_homology(&[1, 1], &[RationalMatrix::identity(1)]).unwrap(), vec![0, 0]);
        let d0 = RationalMatrix::from_i64(&[&[1], &[1]]);
        let d1 = RationalMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(complex_homology(&[1, 2, 1], &[d0, d1]).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn homology_rejects_non_complex() {
        let d0 = RationalMatrix::from_i64(&[&[1], &[1]]);
        let d1 = RationalMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(complex_homology(&[1, 2, 1], &[d0, d1]), Err(LinalgError::NotAComplex(0, 1)));
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span_of(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Subspace::span_of(3, &[vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        assert_eq!(a.intersection(&b), Subspace::span_of(3, &[vec![q(0), q(1), q(0)]]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..=2, c), r))
    }

    fn to_matrix(rows: &[Vec<i64>]) -> RationalMatrix {
        let cols = rows[0].len();
        RationalMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    proptest! {
        #[test]
        fn rank_matches_fraction_free_oracle(rows in small_matrix()) {
            prop_assert_eq!(to_matrix(&rows).rank(), bareiss_rank(&rows));
        }

        #[test]
        fn rref_is_idempotent(rows in small_matrix()) {
            let (r1, p1) = rref(&to_matrix(&rows));
            let (r2, p2) = rref(&r1);
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(p1, p2);
        }

        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = to_matrix(&rows);
            let k = kernel_basis(&m);
            prop_assert_eq!(m.rank() + k.dim(), m.cols());
            for r in 0..k.dim() {
                prop_assert!(m.mul_vec(k.basis().row(r)).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn quotient_projection_section(rows in small_matrix()) {
            let m = to_matrix(&rows);
            let sub = Subspace::span(&m);
            let qs = quotient_structure(m.cols(), &sub).unwrap();
            let quotient_dim = m.cols() - sub.dim();
            prop_assert_eq!(qs.projection.mul(&qs.section), RationalMatrix::identity(quotient_dim));
            prop_assert!(qs.projection.mul(&sub.basis().transpose()).is_zero());
        }

        #[test]
        fn euler_characteristic_of_two_term_complex(rows in small_matrix()) {
            let m = to_matrix(&rows);
            let h = complex_homology(&[m.cols(), m.rows()], std::slice::from_ref(&m)).unwrap();
            prop_assert_eq!(m.cols() as i64 - m.rows() as i64, h[0] as i64 - h[1] as i64);
        }
    }
}
