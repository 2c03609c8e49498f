//! Shared inputs for the benchmarks.

use pcw_core::{Field, FieldMatrix, PseudoMatrix};

/// `rows x cols` ternary matrix with a banded pattern of 1s and 2s.
pub fn banded(rows: usize, cols: usize, width: usize) -> FieldMatrix {
    let entries: Vec<Vec<u8>> = (0..rows)
        .map(|j| (0..cols).map(|i| if (i + cols - j) % cols < width { 1 + ((i + j) % 2) as u8 } else { 0 }).collect())
        .collect();
    FieldMatrix::from_rows(Field::F3, &entries).expect("entries are in range")
}

/// Single all-ones ternary row of length `n`.
pub fn ones_row(n: usize) -> FieldMatrix {
    FieldMatrix::from_rows(Field::F3, &[vec![1u8; n]]).expect("entries are in range")
}

/// Pseudocodeword matrix of a single all-ones row: symbol 1 at weight `a`, symbol 2 at weight `b` per column.
pub fn uniform_point(n: usize, a: u64, b: u64) -> PseudoMatrix {
    PseudoMatrix::from_rows(Field::F3, &[vec![a; n], vec![b; n]]).expect("valid shape")
}
