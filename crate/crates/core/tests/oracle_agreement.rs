//! Cross-checks between brute-force enumeration, the cone description and the
//! lifting construction.

use std::collections::BTreeSet;

use pcw_core::field::{Field, FieldMatrix};
use pcw_core::fixtures;
use pcw_core::lift::lift_full;
use pcw_core::oracle::{
    check_lemma_battery, check_necessity, enumerate_pseudocodeword_matrices, EnumerationOptions, DEFAULT_BUDGET,
};
use pcw_core::tanner::{pseudocodeword_matrix, PseudoMatrix};

fn canonical() -> EnumerationOptions {
    EnumerationOptions::default()
}

fn ternary(rows: &[&[u8]]) -> FieldMatrix {
    FieldMatrix::from_rows(Field::F3, rows).unwrap()
}

fn enumerate(h: &FieldMatrix, m: usize) -> BTreeSet<PseudoMatrix> {
    enumerate_pseudocodeword_matrices(h, m, canonical()).unwrap()
}

#[test]
fn enumerated_matrices_are_lifted() {
    for h in [ternary(&[&[1, 1, 1]]), ternary(&[&[1, 2, 1, 0]]), fixtures::paper_4_2()] {
        for m in 1..=2 {
            for f in enumerate(&h, m) {
                let r = lift_full(&h, &f).unwrap_or_else(|e| panic!("{f}: {e}"));
                assert_eq!(pseudocodeword_matrix(&r.labeling), f);
            }
        }
    }
}

#[test]
fn lifted_matrices_are_enumerated_at_their_degree() {
    let h = ternary(&[&[1, 1, 1]]);
    let f = PseudoMatrix::from_rows(Field::F3, &[[1u64, 0, 0], [0, 1, 0]]).unwrap();
    let r = lift_full(&h, &f).unwrap();
    assert_eq!(r.degree, 1);
    assert!(enumerate(&h, r.degree).contains(&f));

    let f = PseudoMatrix::from_rows(Field::F3, &[[2u64, 1, 0], [0, 1, 2]]).unwrap();
    let r = lift_full(&h, &f).unwrap();
    assert_eq!(r.degree, 4);
    assert!(enumerate(&h, r.degree).contains(&pseudocodeword_matrix(&r.labeling)));

    let h = fixtures::paper_4_2();
    let f = fixtures::paper_f();
    let r = lift_full(&h, &f).unwrap();
    assert_eq!(r.degree, 10);
    // degree 10 is out of reach; the fixture cover shows the matrix already at degree 4
    assert!(enumerate(&h, 4).contains(&f));
}

#[test]
fn every_degree_four_matrix_of_a_row_lifts() {
    let h = ternary(&[&[1, 1, 2]]);
    let found = enumerate(&h, 4);
    assert!(found.len() > 10);
    for f in found {
        assert_eq!(lift_full(&h, &f).unwrap().matrix(), f);
    }
}

#[test]
fn achievable_sets_grow_with_the_degree() {
    for h in [ternary(&[&[1, 1, 1]]), ternary(&[&[1, 2, 0, 1]])] {
        for m in 1..=2 {
            let small = enumerate(&h, m);
            let large = enumerate(&h, 2 * m);
            for f in small {
                assert!(large.contains(&f.scaled(2)), "{f} at degree {m}");
            }
        }
    }
}

#[test]
fn necessity_on_small_codes() {
    let full = EnumerationOptions { budget: DEFAULT_BUDGET, canonicalize: false };
    let r = check_necessity(&fixtures::paper_4_2(), 2, full).unwrap();
    assert!(r.passed(), "{}", r.summary());
    assert!(r.checked > 9);

    let h = FieldMatrix::from_rows(Field::F2, &[[1u8, 1, 1]]).unwrap();
    let r = check_necessity(&h, 3, full).unwrap();
    assert!(r.passed(), "{}", r.summary());

    let h = ternary(&[&[1, 2, 2, 1]]);
    let r = check_necessity(&h, 3, canonical()).unwrap();
    assert!(r.passed(), "{}", r.summary());
}

#[test]
fn canonical_and_full_enumeration_agree() {
    for h in [ternary(&[&[1, 1, 1]]), fixtures::paper_4_2()] {
        let full = EnumerationOptions { budget: DEFAULT_BUDGET, canonicalize: false };
        assert_eq!(enumerate(&h, 2), enumerate_pseudocodeword_matrices(&h, 2, full).unwrap());
    }
}

#[test]
fn lemma_battery_dispatch() {
    let single_columns = [ternary(&[&[1]]), ternary(&[&[2]])];
    let r = check_lemma_battery(&single_columns, 4, DEFAULT_BUDGET).unwrap();
    assert!(r.passed(), "{}", r.summary());

    let binary = FieldMatrix::from_rows(Field::F2, &[[1u8, 1, 1]]).unwrap();
    let r = check_lemma_battery(&[binary], 3, DEFAULT_BUDGET).unwrap();
    assert!(r.passed(), "{}", r.summary());
    assert_eq!(r.counts["binary_matrices"], 1);

    let r = check_lemma_battery(&[fixtures::paper_hs()], 3, DEFAULT_BUDGET).unwrap();
    assert!(r.passed(), "{}", r.summary());
}
