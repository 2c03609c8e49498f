use pcw_core::cone::{enumerate_cone, member_by_rows, member_k3, modular_residues, psi_map, support_normalize};
use pcw_core::field::{enumerate_codewords, syndrome, Field, FieldElement, FieldMatrix};
use pcw_core::lift::lift_full;
use pcw_core::tanner::{
    build_cover, build_tanner, lifted_parity_matrix, pseudocodeword_matrix, verify_pseudocodeword, CoverGraph,
    CoverLabeling, EdgePermutations, PseudoMatrix,
};
use proptest::prelude::*;

fn matrix(field: Field, rows: usize, cols: usize) -> impl Strategy<Value = FieldMatrix> {
    proptest::collection::vec(0..field.q(), rows * cols)
        .prop_map(move |e| FieldMatrix::new(field, rows, cols, e).unwrap())
}

fn ternary_matrix() -> impl Strategy<Value = FieldMatrix> {
    (1usize..=2, 2usize..=5).prop_flat_map(|(r, c)| matrix(Field::F3, r, c))
}

fn point(field: Field, cols: usize, max: u64) -> impl Strategy<Value = PseudoMatrix> {
    let rows = field.q() as usize - 1;
    proptest::collection::vec(0..=max, rows * cols).prop_map(move |e| {
        let rows: Vec<&[u64]> = e.chunks(cols).collect();
        PseudoMatrix::from_rows(field, &rows).unwrap()
    })
}

fn with_point(max: u64) -> impl Strategy<Value = (FieldMatrix, PseudoMatrix)> {
    ternary_matrix().prop_flat_map(move |h| {
        let cols = h.cols();
        (Just(h), point(Field::F3, cols, max))
    })
}

fn add(a: &PseudoMatrix, b: &PseudoMatrix) -> PseudoMatrix {
    let rows: Vec<Vec<u64>> =
        a.to_rows().iter().zip(b.to_rows()).map(|(x, y)| x.iter().zip(&y).map(|(p, q)| p + q).collect()).collect();
    PseudoMatrix::from_rows(a.field(), &rows).unwrap()
}

/// A random cover of `h` of degree `m`, chosen by `seed` permutation indices.
fn random_cover(h: &FieldMatrix, m: usize, seeds: &[usize]) -> CoverGraph {
    let tanner = build_tanner(h);
    let mut perms = EdgePermutations::new();
    for (k, e) in tanner.edges().iter().enumerate() {
        let mut perm: Vec<usize> = (0..m).collect();
        let mut s = seeds[k % seeds.len()].wrapping_add(k * 7919);
        for i in (1..m).rev() {
            perm.swap(i, s % (i + 1));
            s /= i + 1;
        }
        perms.insert((e.check, e.var), perm);
    }
    build_cover(&tanner, &perms, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cone_is_closed_under_scaling_and_sums((h, f) in with_point(4), g_seed in any::<u64>(), k in 1u64..5) {
        let cone = enumerate_cone(&h);
        let in_f = cone.contains(&f).unwrap();
        prop_assert_eq!(cone.contains(&f.scaled(k)).unwrap(), in_f);
        let g = {
            let rows: Vec<Vec<u64>> = f.to_rows().iter().map(|r| r.iter().enumerate()
                .map(|(i, x)| (x + (g_seed >> (i % 60)) % 3) % 5).collect()).collect();
            PseudoMatrix::from_rows(Field::F3, &rows).unwrap()
        };
        if in_f && cone.contains(&g).unwrap() {
            prop_assert!(cone.contains(&add(&f, &g)).unwrap());
        }
    }

    #[test]
    fn cone_is_intersection_of_row_cones((h, f) in with_point(5)) {
        prop_assert_eq!(member_k3(&h, &f).unwrap().is_member(), member_by_rows(&h, &f).unwrap());
    }

    #[test]
    fn psi_is_an_involution_and_preserves_membership((h, f) in with_point(5)) {
        for j in 0..h.rows() {
            let row = h.row_matrix(j);
            let g = psi_map(&row, &f).unwrap();
            prop_assert_eq!(&psi_map(&row, &g).unwrap(), &f);
            let hs = support_normalize(&row).unwrap();
            prop_assert_eq!(member_k3(&row, &f).unwrap().is_member(), member_k3(&hs, &g).unwrap().is_member());
            prop_assert_eq!(modular_residues(&row, &f).unwrap(), modular_residues(&hs, &g).unwrap());
        }
    }

    #[test]
    fn syndrome_is_linear(h in ternary_matrix(), a in proptest::collection::vec(0u64..3, 5), b in proptest::collection::vec(0u64..3, 5)) {
        let n = h.cols();
        let x = FieldElement::vector(Field::F3, &a[..n]).unwrap();
        let y = FieldElement::vector(Field::F3, &b[..n]).unwrap();
        let sum: Vec<_> = x.iter().zip(&y).map(|(p, q)| *p + *q).collect();
        let lhs = syndrome(&h, &sum).unwrap();
        let rhs: Vec<_> = syndrome(&h, &x).unwrap().into_iter().zip(syndrome(&h, &y).unwrap()).map(|(p, q)| p + q).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn codeword_count_matches_rank(h in ternary_matrix()) {
        let words = enumerate_codewords(&h, 1 << 20).unwrap();
        prop_assert_eq!(words.len(), 3usize.pow((h.cols() - h.rank()) as u32));
    }

    #[test]
    fn random_cover_codewords_satisfy_the_characterization(
        h in ternary_matrix(),
        m in 1usize..=3,
        seeds in proptest::collection::vec(any::<usize>(), 1..4),
        pick in any::<u64>(),
    ) {
        let cover = random_cover(&h, m, &seeds);
        let lifted = lifted_parity_matrix(&cover);
        let basis = lifted.kernel_basis();
        let mut word = vec![0u8; lifted.cols()];
        let mut p = pick;
        for b in &basis {
            let c = (p % 3) as u8;
            p /= 3;
            for (w, x) in word.iter_mut().zip(b) {
                *w = Field::F3.add(*w, Field::F3.mul(c, *x));
            }
        }
        let lab = CoverLabeling::from_vector(cover, &word).unwrap();
        prop_assert!(verify_pseudocodeword(&lab));
        let f = pseudocodeword_matrix(&lab);
        prop_assert!(member_k3(&h, &f).unwrap().is_member());
        prop_assert!(modular_residues(&h, &f).unwrap().iter().all(|&r| r == 0));
    }

    #[test]
    fn lift_round_trips((h, f) in with_point(4)) {
        let cone = enumerate_cone(&h);
        if cone.contains(&f).unwrap() && modular_residues(&h, &f).unwrap().iter().all(|&r| r == 0) {
            let r = lift_full(&h, &f).unwrap();
            prop_assert!(verify_pseudocodeword(&r.labeling));
            prop_assert_eq!(pseudocodeword_matrix(&r.labeling), f);
        } else {
            prop_assert!(lift_full(&h, &f).is_err());
        }
    }

    #[test]
    fn sums_of_codewords_lift(h in ternary_matrix(), picks in proptest::collection::vec(any::<usize>(), 1..5)) {
        let words = enumerate_codewords(&h, 1 << 20).unwrap();
        let f = picks.iter().fold(PseudoMatrix::zeros(Field::F3, h.cols()), |acc, &k| {
            add(&acc, &PseudoMatrix::indicator(Field::F3, &words[k % words.len()]))
        });
        let r = lift_full(&h, &f).unwrap();
        prop_assert_eq!(r.degree as u64, (3 * f.max_column_sum()).saturating_sub(2).max(1));
        prop_assert_eq!(pseudocodeword_matrix(&r.labeling), f);
    }

    #[test]
    fn constant_labelings_count_each_copy(h in ternary_matrix(), m in 1usize..=4, k in any::<usize>()) {
        let words = enumerate_codewords(&h, 1 << 20).unwrap();
        let c = &words[k % words.len()];
        let lab = CoverLabeling::constant(CoverGraph::trivial(&build_tanner(&h), m).unwrap(), c).unwrap();
        prop_assert!(verify_pseudocodeword(&lab));
        prop_assert_eq!(pseudocodeword_matrix(&lab), PseudoMatrix::indicator(Field::F3, c).scaled(m as u64));
    }

    #[test]
    fn binary_lift_round_trips(h in (1usize..=2, 2usize..=5).prop_flat_map(|(r, c)| matrix(Field::F2, r, c)), e in proptest::collection::vec(0u64..=4, 5)) {
        let f = PseudoMatrix::from_rows(Field::F2, &[&e[..h.cols()]]).unwrap();
        let cone = enumerate_cone(&h);
        if cone.contains(&f).unwrap() && modular_residues(&h, &f).unwrap().iter().all(|&r| r == 0) {
            let r = lift_full(&h, &f).unwrap();
            prop_assert_eq!(pseudocodeword_matrix(&r.labeling), f);
        }
    }
}
