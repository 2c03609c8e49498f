//! Exhaustive ground truth for small codes.
//!
//! Covers are enumerated through their per-edge permutations and the lifted
//! codes through a kernel basis, so the set of pseudocodeword matrices of a
//! given degree is computed exactly, independently of the cone inequalities
//! and of the lifting construction.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{
    critical_inequalities, enumerate_cone, enumerate_k3, member, modular_residues, psi_map, support_normalize,
    ConeSystem,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldMatrix, RationalMatrix};
use crate::io::MatrixDoc;
use crate::lift::{decompose_one_type, lift_full};
use crate::tanner::{build_tanner, is_valid_cover, pseudocodeword_matrix, verify_pseudocodeword, PseudoMatrix};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Upper bound on lifted-codeword evaluations.
    pub budget: u64,
    /// Fix the permutations on a spanning forest of the Tanner graph to the
    /// identity. Relabeling the copies of one endpoint of a forest edge turns
    /// its permutation into the identity without changing any count, so the
    /// set of matrices is unchanged.
    pub canonicalize: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { budget: DEFAULT_BUDGET, canonicalize: true }
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        out.push(perm.clone());
        // next lexicographic permutation
        let Some(k) = (0..m.saturating_sub(1)).rev().find(|&k| perm[k] < perm[k + 1]) else {
            return out;
        };
        let l = (k + 1..m).rev().find(|&l| perm[k] < perm[l]).expect("exists");
        perm.swap(k, l);
        perm[k + 1..].reverse();
    }
}

/// Base edges (as `(check, var)`) whose permutation is enumerated.
fn free_edges(h: &FieldMatrix, canonicalize: bool) -> Vec<(usize, usize)> {
    let tanner = build_tanner(h);
    let edges: Vec<(usize, usize)> = tanner.edges().iter().map(|e| (e.check, e.var)).collect();
    if !canonicalize {
        return edges;
    }
    // union-find over vars 0..n and checks n..n+m
    let n = h.cols();
    let mut parent: Vec<usize> = (0..n + h.rows()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    edges
        .into_iter()
        .filter(|&(j, i)| {
            let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
            if a == b {
                true
            } else {
                parent[a] = b;
                false
            }
        })
        .collect()
}

/// Number of covers visited for degree `m`.
pub fn cover_count(h: &FieldMatrix, m: usize, canonicalize: bool) -> u128 {
    let factorial: u128 = (1..=m as u128).product();
    let e = free_edges(h, canonicalize).len() as u32;
    factorial.checked_pow(e).unwrap_or(u128::MAX)
}

fn lifted_matrix(h: &FieldMatrix, m: usize, perm_of: &BTreeMap<(usize, usize), &[usize]>) -> FieldMatrix {
    let (rows, cols) = (h.rows() * m, h.cols() * m);
    let mut entries = vec![0u8; rows * cols];
    for j in 0..h.rows() {
        for i in h.support(j) {
            let label = h.get(j, i);
            match perm_of.get(&(j, i)) {
                Some(perm) => {
                    for (mu, &nu) in perm.iter().enumerate() {
                        entries[(j * m + nu) * cols + i * m + mu] = label;
                    }
                }
                None => {
                    for mu in 0..m {
                        entries[(j * m + mu) * cols + i * m + mu] = label;
                    }
                }
            }
        }
    }
    FieldMatrix::new(h.field(), rows, cols, entries).expect("consistent dimensions")
}

/// Counts of every codeword of the code spanned by `basis`, as pseudocodeword
/// matrices of an `n`-variable, degree-`m` cover.
fn matrices_of_span(field: Field, basis: &[Vec<u8>], n: usize, m: usize, out: &mut HashSet<PseudoMatrix>) {
    let q = field.q();
    let len = n * m;
    let mut word = vec![0u8; len];
    let mut digits = vec![0u8; basis.len()];
    loop {
        let mut f = PseudoMatrix::zeros(field, n);
        for i in 0..n {
            for &x in &word[i * m..(i + 1) * m] {
                if x != 0 {
                    let r = x as usize - 1;
                    f.set(r, i, f.get(r, i) + 1);
                }
            }
        }
        out.insert(f);
        // odometer: bumping a digit (including the wrap to 0) adds its basis vector once
        let mut d = 0;
        loop {
            if d == basis.len() {
                return;
            }
            for (w, &b) in word.iter_mut().zip(&basis[d]) {
                *w = field.add(*w, b);
            }
            digits[d] = (digits[d] + 1) % q;
            if digits[d] != 0 {
                break;
            }
            d += 1;
        }
    }
}

/// Every pseudocodeword matrix realized by some labeling of some degree-`m`
/// cover of the Tanner graph of `h`.
pub fn enumerate_pseudocodeword_matrices(
    h: &FieldMatrix,
    m: usize,
    options: EnumerationOptions,
) -> Result<BTreeSet<PseudoMatrix>> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let covers = cover_count(h, m, options.canonicalize);
    if covers > options.budget as u128 {
        return Err(Error::BudgetExceeded {
            budget: options.budget,
            context: format!("{covers} covers of degree {m}, each with at least one codeword"),
        });
    }
    let perms = permutations(m);
    let free = free_edges(h, options.canonicalize);
    let base = perms.len() as u64;
    let spent = AtomicU64::new(0);
    let over = AtomicBool::new(false);

    let sets: Vec<HashSet<PseudoMatrix>> = (0..covers as u64)
        .into_par_iter()
        .fold(HashSet::new, |mut acc, index| {
            if over.load(Ordering::Relaxed) {
                return acc;
            }
            let mut rest = index;
            let mut perm_of = BTreeMap::new();
            for &edge in &free {
                perm_of.insert(edge, perms[(rest % base) as usize].as_slice());
                rest /= base;
            }
            let lifted = lifted_matrix(h, m, &perm_of);
            let basis = lifted.kernel_basis();
            let words = (h.field().q() as u64).checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
            let total = spent.fetch_add(words, Ordering::Relaxed).saturating_add(words);
            if total > options.budget {
                over.store(true, Ordering::Relaxed);
                return acc;
            }
            matrices_of_span(h.field(), &basis, h.cols(), m, &mut acc);
            acc
        })
        .collect();
    if over.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            budget: options.budget,
            context: format!("lifted codewords of {covers} covers of degree {m}"),
        });
    }
    Ok(sets.into_iter().flatten().collect())
}

/// One counterexample or failure found by a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub matrix: Vec<Vec<u64>>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub theorem: String,
    #[serde(rename = "H")]
    pub h: MatrixDoc,
    #[serde(rename = "M_max", skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checked: u64,
    /// Named tallies, e.g. matrices found per degree.
    pub counts: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
}

impl Report {
    fn new(theorem: &str, h: &FieldMatrix) -> Self {
        Report {
            theorem: theorem.into(),
            h: MatrixDoc::from_matrix(h),
            m_max: None,
            entry_bound: None,
            seed: None,
            checked: 0,
            counts: BTreeMap::new(),
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: checked {}, violations {}",
            self.theorem,
            self.checked,
            self.violations.len()
        );
        for (k, v) in &self.counts {
            s.push_str(&format!("\n  {k}: {v}"));
        }
        for v in self.violations.iter().take(10) {
            s.push_str(&format!("\n  {:?}: {}", v.matrix, v.reason));
        }
        s
    }
}

fn theorem_tag(field: Field, part: &str) -> String {
    match field {
        Field::F2 => format!("1-{part}"),
        Field::F3 => format!("3-{part}"),
    }
}

/// Every enumerated pseudocodeword matrix of degree `1..=m_max` must lie in
/// the cone and satisfy the modular syndrome condition.
pub fn check_necessity(h: &FieldMatrix, m_max: usize, options: EnumerationOptions) -> Result<Report> {
    let mut report = Report::new(&theorem_tag(h.field(), "necessity"), h);
    report.m_max = Some(m_max);
    if h.rows() == 0 {
        return Ok(report);
    }
    let cone = enumerate_cone(h);
    for m in 1..=m_max {
        let found = enumerate_pseudocodeword_matrices(h, m, options)?;
        report.counts.insert(format!("matrices_M{m}"), found.len() as u64);
        for f in &found {
            report.checked += 1;
            let membership = cone.check(f)?;
            let residues = modular_residues(h, f)?;
            let mut reasons = Vec::new();
            if let Some(q) = membership.violated.first() {
                reasons.push(format!("violates {}", cone.render(q)));
            }
            if residues.iter().any(|&r| r != 0) {
                reasons.push(format!("syndrome residues {residues:?}"));
            }
            if !reasons.is_empty() {
                report.violations.push(Violation { matrix: f.to_rows(), degree: Some(m), reason: reasons.join("; ") });
            }
        }
    }
    Ok(report)
}

/// All integer matrices of the right shape with entries in `0..=bound`.
pub fn integer_matrices(field: Field, cols: usize, bound: u64) -> impl ParallelIterator<Item = PseudoMatrix> {
    let len = (field.q() as usize - 1) * cols;
    let radix = bound + 1;
    let total = radix.checked_pow(len as u32).expect("candidate count fits in u64");
    (0..total).into_par_iter().map(move |mut index| {
        let mut entries = vec![0u64; len];
        for e in entries.iter_mut() {
            *e = index % radix;
            index /= radix;
        }
        let rows: Vec<&[u64]> = entries.chunks(cols.max(1)).collect();
        if cols == 0 {
            PseudoMatrix::zeros(field, 0)
        } else {
            PseudoMatrix::from_rows(field, &rows).expect("shape")
        }
    })
}

fn candidate_count(field: Field, cols: usize, bound: u64) -> Option<u64> {
    (bound + 1).checked_pow(((field.q() as usize - 1) * cols) as u32)
}

fn realization_failure(h: &FieldMatrix, f: &PseudoMatrix) -> Option<String> {
    match lift_full(h, f) {
        Err(e) => Some(e.to_string()),
        Ok(result) => {
            let lab = &result.labeling;
            if !is_valid_cover(lab.cover()) {
                Some("invalid cover".into())
            } else if !verify_pseudocodeword(lab) {
                Some(format!("parity checks fail at {:?}", lab.failing_checks()))
            } else if pseudocodeword_matrix(lab) != *f {
                Some("realized matrix differs".into())
            } else {
                None
            }
        }
    }
}

/// Every integer matrix with entries up to `entry_bound` that lies in the
/// cone and satisfies the modular condition must be realized by `lift_full`.
pub fn check_sufficiency(h: &FieldMatrix, entry_bound: u64, budget: u64) -> Result<Report> {
    let mut report = Report::new(&theorem_tag(h.field(), "sufficiency"), h);
    report.entry_bound = Some(entry_bound);
    let candidates = candidate_count(h.field(), h.cols(), entry_bound).unwrap_or(u64::MAX);
    if candidates > budget {
        return Err(Error::BudgetExceeded { budget, context: format!("{candidates} candidate matrices") });
    }
    let cone = enumerate_cone(h);
    let results: Vec<(bool, Option<Violation>)> = integer_matrices(h.field(), h.cols(), entry_bound)
        .filter_map(|f| {
            let eligible = cone.contains(&f).ok()? && modular_residues(h, &f).ok()?.iter().all(|&r| r == 0);
            if !eligible {
                return None;
            }
            let violation = realization_failure(h, &f)
                .map(|reason| Violation { matrix: f.to_rows(), degree: None, reason });
            Some((true, violation))
        })
        .collect();
    report.counts.insert("candidates".into(), candidates);
    report.checked = results.len() as u64;
    let mut violations: Vec<Violation> = results.into_iter().filter_map(|(_, v)| v).collect();
    violations.sort_by(|a, b| a.matrix.cmp(&b.matrix));
    report.violations = violations;
    Ok(report)
}

/// Cone systems of a ternary matrix, its rows, and their normalized supports.
struct LemmaContext {
    h: FieldMatrix,
    whole: ConeSystem,
    rows: Vec<RowContext>,
}

struct RowContext {
    row: FieldMatrix,
    system: ConeSystem,
    hs: FieldMatrix,
    hs_system: ConeSystem,
}

impl LemmaContext {
    fn new(h: &FieldMatrix) -> Result<Self> {
        let rows = (0..h.rows())
            .map(|j| {
                let row = h.row_matrix(j);
                let hs = support_normalize(&row)?;
                Ok(RowContext { system: enumerate_k3(&row)?, hs_system: enumerate_k3(&hs)?, row, hs })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LemmaContext { h: h.clone(), whole: enumerate_k3(h)?, rows })
    }

    fn failures(&self, f: &PseudoMatrix) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let mut by_rows = true;
        for (j, ctx) in self.rows.iter().enumerate() {
            let in_row = ctx.system.contains(f)?;
            by_rows &= in_row;
            let g = psi_map(&ctx.row, f)?;
            if psi_map(&ctx.row, &g)? != *f {
                out.push(format!("psi is not an involution on row {}", j + 1));
            }
            if in_row != ctx.hs_system.contains(&g)? {
                out.push(format!("row {}: membership changes under psi", j + 1));
            }
            if !in_row || modular_residues(&ctx.hs, &g)?.iter().any(|&r| r != 0) {
                continue;
            }
            for q in critical_inequalities(&ctx.hs_system, &g) {
                let slack = q.slack(&g);
                if slack != 0 {
                    out.push(format!("row {}: critical {} inequality has slack {slack}", j + 1, q.kind));
                }
            }
            self.check_decomposition(j, ctx, &g, &mut out);
        }
        if self.whole.contains(f)? != by_rows {
            out.push("cone of H differs from intersection of row cones".into());
        }
        Ok(out)
    }

    /// Single-symbol points restricted to the support split into triples.
    fn check_decomposition(&self, j: usize, ctx: &RowContext, g: &PseudoMatrix, out: &mut Vec<String>) {
        let mut masked = g.clone();
        for i in (0..self.h.cols()).filter(|&i| ctx.hs.get(0, i) == 0) {
            masked.set(0, i, 0);
            masked.set(1, i, 0);
        }
        let single = masked.row(0).iter().all(|&x| x == 0) || masked.row(1).iter().all(|&x| x == 0);
        if !single || !ctx.hs_system.contains(&masked).unwrap_or(false) {
            return;
        }
        match decompose_one_type(&ctx.hs, &masked) {
            Ok(d) => {
                let symbol_row = d.symbol as usize - 1;
                let support = ctx.hs.support(0);
                let ok = d.sets.iter().all(|s| s.len() == 3 && s.iter().all(|i| support.contains(i)))
                    && (0..self.h.cols()).all(|i| d.multiplicity(i) as u64 == masked.get(symbol_row, i));
                if !ok {
                    out.push(format!("row {}: decomposition does not reproduce the counts", j + 1));
                }
            }
            Err(e) => out.push(format!("row {}: decomposition failed: {e}", j + 1)),
        }
    }
}

/// Runs the per-matrix structural checks over every ternary matrix in the
/// pool and every integer point with entries up to `entry_bound`. Binary
/// matrices get the binary necessity and sufficiency checks instead.
pub fn check_lemma_battery(pool: &[FieldMatrix], entry_bound: u64, budget: u64) -> Result<Report> {
    let first = pool.first().cloned().unwrap_or_else(|| FieldMatrix::zeros(Field::F3, 0, 0));
    let mut report = Report::new("lemma-battery", &first);
    report.entry_bound = Some(entry_bound);
    for (p, h) in pool.iter().enumerate() {
        if h.field() == Field::F2 {
            let nec = check_necessity(h, 3, EnumerationOptions { budget, canonicalize: true })?;
            let suf = check_sufficiency(h, entry_bound.min(3), budget)?;
            *report.counts.entry("binary_matrices".into()).or_default() += 1;
            report.checked += nec.checked + suf.checked;
            report.violations.extend(nec.violations.into_iter().chain(suf.violations));
            continue;
        }
        let candidates = candidate_count(h.field(), h.cols(), entry_bound).unwrap_or(u64::MAX);
        if candidates > budget {
            return Err(Error::BudgetExceeded { budget, context: format!("{candidates} points for pool entry {}", p + 1) });
        }
        let ctx = LemmaContext::new(h)?;
        let failures: Vec<Violation> = integer_matrices(h.field(), h.cols(), entry_bound)
            .flat_map_iter(|f| {
                let reasons = ctx.failures(&f).unwrap_or_else(|e| vec![e.to_string()]);
                reasons.into_iter().map(move |reason| Violation { matrix: f.to_rows(), degree: None, reason })
            })
            .collect();
        *report.counts.entry("ternary_matrices".into()).or_default() += 1;
        report.checked += candidates;
        report.violations.extend(failures);
    }
    Ok(report)
}

/// Uniformly random matrix over `field` with no all-zero row.
pub fn random_matrix(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize) -> FieldMatrix {
    let q = field.q();
    loop {
        let entries: Vec<u8> = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        let h = FieldMatrix::new(field, rows, cols, entries).expect("shape");
        if (0..rows).all(|j| h.row_weight(j) >= 2) {
            return h;
        }
    }
}

/// A random rational point of the cone of `h`, by rejection sampling over
/// entries `a/b` with `a <= 6` and `b <= 4`.
pub fn random_cone_point(rng: &mut ChaCha8Rng, h: &FieldMatrix) -> Result<RationalMatrix> {
    let rows = h.field().q() as usize - 1;
    for _ in 0..1_000_000 {
        let entries: Vec<Rational64> = (0..rows * h.cols())
            .map(|_| {
                if rng.gen_bool(0.25) {
                    Rational64::from_integer(0)
                } else {
                    Rational64::new(rng.gen_range(1..=6), rng.gen_range(1..=4))
                }
            })
            .collect();
        let z = RationalMatrix::new(rows, h.cols(), entries)?;
        if member(h, &z)?.is_member() && !z.entries().iter().all(|x| *x.numer() == 0) {
            return Ok(z);
        }
    }
    Err(Error::Precondition("no cone point found by rejection sampling".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::enumerate_codewords;
    use rand::SeedableRng;

    fn opts(canonicalize: bool) -> EnumerationOptions {
        EnumerationOptions { budget: DEFAULT_BUDGET, canonicalize }
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn degree_one_gives_codewords() {
        let h = FieldMatrix::from_rows(Field::F3, &[[1, 1, 1]]).unwrap();
        let found = enumerate_pseudocodeword_matrices(&h, 1, opts(true)).unwrap();
        let expected: BTreeSet<_> = enumerate_codewords(&h, 1 << 20)
            .unwrap()
            .iter()
            .map(|c| PseudoMatrix::indicator(Field::F3, c))
            .collect();
        assert_eq!(found.len(), 9);
        assert_eq!(found, expected);

        let h = FieldMatrix::from_rows(Field::F2, &[[1, 1]]).unwrap();
        let found = enumerate_pseudocodeword_matrices(&h, 1, opts(true)).unwrap();
        let rows: Vec<_> = found.iter().map(|f| f.to_rows()).collect();
        assert_eq!(rows, vec![vec![vec![0, 0]], vec![vec![1, 1]]]);
    }

    #[test]
    fn canonicalization_preserves_the_set() {
        let h = FieldMatrix::from_rows(Field::F3, &[[1, 2, 2, 1], [2, 0, 1, 2]]).unwrap();
        assert_eq!(cover_count(&h, 2, false), 128);
        assert_eq!(cover_count(&h, 2, true), 4);
        let full = enumerate_pseudocodeword_matrices(&h, 2, opts(false)).unwrap();
        let canon = enumerate_pseudocodeword_matrices(&h, 2, opts(true)).unwrap();
        assert_eq!(full, canon);
        assert!(full.contains(&PseudoMatrix::zeros(Field::F3, 4)));
    }

    #[test]
    fn budget_is_enforced() {
        let h = FieldMatrix::from_rows(Field::F3, &[[1, 2, 2, 1], [2, 0, 1, 2]]).unwrap();
        let tight = EnumerationOptions { budget: 10, canonicalize: false };
        assert!(matches!(enumerate_pseudocodeword_matrices(&h, 2, tight), Err(Error::BudgetExceeded { .. })));
        let tight = EnumerationOptions { budget: 10, canonicalize: true };
        assert!(matches!(enumerate_pseudocodeword_matrices(&h, 2, tight), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn empty_matrix_is_vacuous() {
        let h = FieldMatrix::zeros(Field::F3, 0, 3);
        let r = check_necessity(&h, 2, opts(true)).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 0);
    }

    #[test]
    fn binary_checks() {
        let h = FieldMatrix::from_rows(Field::F2, &[[1, 1, 1]]).unwrap();
        assert!(check_necessity(&h, 3, opts(true)).unwrap().passed());
        let s = check_sufficiency(&h, 3, DEFAULT_BUDGET).unwrap();
        assert!(s.passed(), "{}", s.summary());
        assert!(s.checked > 1);
    }

    #[test]
    fn report_json_shape() {
        let h = FieldMatrix::from_rows(Field::F3, &[[1, 1, 1]]).unwrap();
        let r = check_necessity(&h, 2, opts(true)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["theorem"], "3-necessity");
        assert_eq!(v["M_max"], 2);
        assert_eq!(v["violations"], serde_json::json!([]));
        assert_eq!(v["H"]["entries"], serde_json::json!([[1, 1, 1]]));
    }

    #[test]
    fn random_generation_is_seeded() {
        let h = FieldMatrix::from_rows(Field::F3, &[[1, 1, 1]]).unwrap();
        let a = random_cone_point(&mut ChaCha8Rng::seed_from_u64(7), &h).unwrap();
        let b = random_cone_point(&mut ChaCha8Rng::seed_from_u64(7), &h).unwrap();
        assert_eq!(a, b);
        let m = random_matrix(&mut ChaCha8Rng::seed_from_u64(1), Field::F3, 1, 4);
        assert!(m.row_weight(0) >= 2);
    }
}
