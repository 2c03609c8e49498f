//! Every cone point with the modular condition and small entries is realized
//! by the lifting construction.

use pcw_core::field::{Field, FieldMatrix};
use pcw_core::fixtures;
use pcw_core::oracle::{check_sufficiency, DEFAULT_BUDGET};

fn assert_sufficient(h: &FieldMatrix, bound: u64) {
    let report = check_sufficiency(h, bound, DEFAULT_BUDGET).unwrap();
    assert!(report.passed(), "{}", report.summary());
    assert!(report.checked > 0);
}

#[test]
fn ternary_fixture_code() {
    assert_sufficient(&fixtures::paper_4_2(), 3);
}

#[test]
fn ternary_single_rows() {
    for row in [[1u8, 1, 1, 0], [1, 2, 1, 2], [2, 2, 1, 0], [1, 0, 1, 1]] {
        let h = FieldMatrix::from_rows(Field::F3, &[row]).unwrap();
        assert_sufficient(&h, 3);
    }
    let h = FieldMatrix::from_rows(Field::F3, &[[1u8, 1, 1, 1]]).unwrap();
    assert_sufficient(&h, 4);
    let h = FieldMatrix::from_rows(Field::F3, &[[1u8, 1, 1, 1, 1]]).unwrap();
    assert_sufficient(&h, 2);
}

#[test]
fn ternary_two_rows() {
    for rows in [[[1u8, 1, 1, 0], [0, 1, 1, 1]], [[1, 2, 0, 1], [0, 1, 2, 2]], [[1, 1, 0, 0], [0, 0, 1, 1]]] {
        let h = FieldMatrix::from_rows(Field::F3, &rows).unwrap();
        assert_sufficient(&h, 3);
    }
}

#[test]
fn binary_codes() {
    for rows in [vec![vec![1u8, 1, 1]], vec![vec![1, 1, 1, 0], vec![0, 1, 1, 1]], vec![vec![1, 1, 1, 1, 1]]] {
        let h = FieldMatrix::from_rows(Field::F2, &rows).unwrap();
        assert_sufficient(&h, 4);
    }
}
