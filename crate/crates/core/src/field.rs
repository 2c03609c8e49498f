//! Exact arithmetic over F2 and F3.
//!
//! Parity-check matrices are dense and tiny in this crate (a handful of rows
//! and columns), so everything is stored row-major in flat `Vec`s of `u8`
//! residues. Cone points live in [`RationalMatrix`], which keeps every entry
//! as a reduced fraction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default limit on `q^n` for [`enumerate_codewords`].
pub const DEFAULT_SCAN_BOUND: u128 = 531_441; // 3^12

/// The two supported prime fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub enum Field {
    F2,
    F3,
}

impl Field {
    pub fn from_q(q: u64) -> Result<Self> {
        match q {
            2 => Ok(Field::F2),
            3 => Ok(Field::F3),
            other => Err(Error::UnsupportedField(other)),
        }
    }

    #[inline]
    pub fn q(self) -> u8 {
        match self {
            Field::F2 => 2,
            Field::F3 => 3,
        }
    }

    /// Nonzero symbols `1..q`, in the order used for pseudocodeword rows.
    pub fn nonzero(self) -> impl Iterator<Item = u8> {
        1..self.q()
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.q()
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        (a * b) % self.q()
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        (self.q() - a) % self.q()
    }
}

impl TryFrom<u64> for Field {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        Field::from_q(q)
    }
}

impl From<Field> for u64 {
    fn from(f: Field) -> u64 {
        f.q() as u64
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.q())
    }
}

/// An element of F2 or F3.
///
/// Arithmetic between elements of different fields panics; mixing fields is
/// a programming error rather than bad input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u8,
    field: Field,
}

impl FieldElement {
    pub fn new(value: u64, field: Field) -> Result<Self> {
        if value >= field.q() as u64 {
            return Err(Error::InvalidFieldEntry { value, q: field.q() });
        }
        Ok(FieldElement { value: value as u8, field })
    }

    pub fn zero(field: Field) -> Self {
        FieldElement { value: 0, field }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Convenience constructor for a whole vector.
    pub fn vector(field: Field, values: &[u64]) -> Result<Vec<FieldElement>> {
        values.iter().map(|&v| FieldElement::new(v, field)).collect()
    }

    fn check(self, rhs: FieldElement) {
        assert_eq!(self.field, rhs.field, "arithmetic between different fields");
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement { value: self.field.add(self.value, rhs.value), field: self.field }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement { value: self.field.mul(self.value, rhs.value), field: self.field }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { value: self.field.neg(self.value), field: self.field }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense `rows x cols` matrix over F2 or F3.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl FieldMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&v| v >= field.q()) {
            return Err(Error::InvalidFieldEntry { value: bad as u64, q: field.q() });
        }
        Ok(FieldMatrix { field, rows, cols, entries })
    }

    /// Builds a matrix from nested rows; all rows must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(field: Field, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (j, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {j} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        FieldMatrix::new(field, rows.len(), cols, entries)
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) -> Result<()> {
        if value >= self.field.q() {
            return Err(Error::InvalidFieldEntry { value: value as u64, q: self.field.q() });
        }
        self.entries[row * self.cols + col] = value;
        Ok(())
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|j| self.row(j).to_vec()).collect()
    }

    /// The single row `H_j` as a `1 x n` matrix.
    pub fn row_matrix(&self, row: usize) -> FieldMatrix {
        FieldMatrix { field: self.field, rows: 1, cols: self.cols, entries: self.row(row).to_vec() }
    }

    /// Column indices of the nonzero entries of `row`.
    pub fn support(&self, row: usize) -> Vec<usize> {
        self.row(row).iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0).count()
    }

    pub fn column_weight(&self, col: usize) -> usize {
        (0..self.rows).filter(|&j| self.get(j, col) != 0).count()
    }

    pub fn row_weight(&self, row: usize) -> usize {
        self.row(row).iter().filter(|&&v| v != 0).count()
    }

    /// Reduced row echelon form together with the pivot columns.
    fn rref(&self) -> (Vec<Vec<u8>>, Vec<usize>) {
        let f = self.field;
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, p);
            // Every nonzero element of F2/F3 is its own inverse.
            let inv = m[r][c];
            for x in m[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            for i in 0..m.len() {
                if i != r && m[i][c] != 0 {
                    let factor = f.neg(m[i][c]);
                    let pivot_row = m[r].clone();
                    for (x, &p) in m[i].iter_mut().zip(&pivot_row) {
                        *x = f.add(*x, f.mul(factor, p));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        (m, pivots)
    }

    /// Rank over the underlying field, by Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel `{ c : c H^T = 0 }`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u8; self.cols];
                v[free] = 1;
                for (row, &p) in reduced.iter().zip(&pivots) {
                    v[p] = f.neg(row[free]);
                }
                v
            })
            .collect()
    }

    pub(crate) fn syndrome_raw(&self, c: &[u8]) -> Vec<u8> {
        let f = self.field;
        (0..self.rows)
            .map(|j| {
                self.row(j)
                    .iter()
                    .zip(c)
                    .fold(0u8, |acc, (&h, &x)| f.add(acc, f.mul(h, x)))
            })
            .collect()
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.rows {
            let row: Vec<String> = self.row(j).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `c H^T` over the matrix's field.
pub fn syndrome(h: &FieldMatrix, c: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if c.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against a matrix with {} columns",
            c.len(),
            h.cols()
        )));
    }
    if let Some(x) = c.iter().find(|x| x.field() != h.field()) {
        return Err(Error::FieldMismatch { expected: h.field().q(), found: x.field().q() });
    }
    let raw: Vec<u8> = c.iter().map(|x| x.value()).collect();
    Ok(h.syndrome_raw(&raw)
        .into_iter()
        .map(|value| FieldElement { value, field: h.field() })
        .collect())
}

pub fn is_codeword(h: &FieldMatrix, c: &[FieldElement]) -> Result<bool> {
    Ok(syndrome(h, c)?.iter().all(|s| s.is_zero()))
}

/// All codewords of the code checked by `h`, by scanning every vector of `F^n`.
///
/// The result is sorted lexicographically. Fails when `q^n` exceeds `bound`.
pub fn enumerate_codewords(h: &FieldMatrix, bound: u128) -> Result<Vec<Vec<u8>>> {
    let q = h.field().q();
    let needed = (q as u128).checked_pow(h.cols() as u32).unwrap_or(u128::MAX);
    if needed > bound {
        return Err(Error::BoundExceeded { needed, bound });
    }
    let mut out = Vec::new();
    let mut c = vec![0u8; h.cols()];
    loop {
        if h.syndrome_raw(&c).iter().all(|&s| s == 0) {
            out.push(c.clone());
        }
        // odometer, last coordinate fastest
        let mut pos = h.cols();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            c[pos] += 1;
            if c[pos] < q {
                break;
            }
            c[pos] = 0;
        }
    }
}

/// `(H v) mod modulus` with `H` read as a matrix of integers in `0..q`.
///
/// Products are summed over the integers before reducing; residues are in
/// `0..modulus`.
pub fn integer_syndrome_mod(h: &FieldMatrix, v: &[i64], modulus: i64) -> Result<Vec<i64>> {
    if v.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against a matrix with {} columns",
            v.len(),
            h.cols()
        )));
    }
    if modulus <= 0 {
        return Err(Error::Precondition(format!("modulus must be positive, got {modulus}")));
    }
    Ok((0..h.rows())
        .map(|j| {
            let total: i64 = h.row(j).iter().zip(v).map(|(&hji, &x)| hji as i64 * x).sum();
            total.rem_euclid(modulus)
        })
        .collect())
}

/// Dense matrix of exact rationals; every entry is kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational64>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<Rational64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rational matrix".into()));
        }
        RationalMatrix::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational64::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Rational64 {
        self.entries[row * self.cols + col]
    }

    pub fn entries(&self) -> &[Rational64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational64>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[_]>::to_vec).collect()
    }

    /// Least common multiple of all denominators (1 for an integer matrix).
    pub fn common_denominator(&self) -> i64 {
        self.entries.iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
    }

    pub fn scale(&self, factor: Rational64) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.denom().is_one())
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
