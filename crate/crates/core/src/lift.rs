//! Constructing graph covers that realize a given pseudocodeword matrix.
//!
//! For a single check row with entries in `{0, 1}` the construction works on
//! the remaining counts `F` and a degree `M = 3M' - 2` cover, where `M'` is the
//! largest column sum of `F`:
//!
//! 1. columns outside the support get their labels up front;
//! 2. while both symbols have mass on the support, one unit of symbol 1 at
//!    `k` and one unit of symbol 2 at `l` are joined to a fresh check copy,
//!    with `(k, l)` chosen so that every critical coordinate and pair is
//!    relieved;
//! 3. the surviving symbol is consumed in triples from the three largest
//!    entries;
//! 4. zero-labeled copies are matched to the check copies still missing a
//!    neighbor in their column.
//!
//! Each step in 2 and 3 touches at most three columns, each of which has at
//! most `M' - 1` other units, so a check copy free on all touched columns
//! always exists. Rows with entries equal to 2 are handled through the column
//! swap of [`psi_map`], and multi-row matrices by lifting every row with the
//! shared degree and aligning the copies of each column.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;

use crate::cone::{
    critical_in, enumerate_cone, enumerate_k3, member, modular_residues, psi_map, support_normalize, ConeSystem,
    CriticalReport,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldMatrix, RationalMatrix};
use crate::matching::perfect_matching;
use crate::tanner::{
    build_cover, build_tanner, is_valid_cover, pseudocodeword_matrix, verify_pseudocodeword, CoverLabeling,
    EdgePermutations, PseudoMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Stage2Pair,
    Stage3Triple,
    Stage4Fill,
}

/// One reduction step of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// Check row the step belongs to (always 0 for a single-row lift).
    pub row: usize,
    pub kind: StepKind,
    /// Columns touched, in the order `k, l` for pairs.
    pub coordinates: Vec<usize>,
    /// Variable copies that received a label (stage 4: the zero-labeled copies).
    pub copies: Vec<usize>,
    /// Symbol given to each copy.
    pub symbols: Vec<u8>,
    /// Check copy `v_mu` joined by a stage 2 or 3 step; stage 4 joins several.
    pub check_copies: Vec<usize>,
    /// Criticality of the counts before a stage-2 step.
    pub critical: Option<CriticalReport>,
    /// Remaining counts after the step.
    pub snapshot: PseudoMatrix,
}

impl TraceStep {
    pub fn edges_added(&self) -> usize {
        self.copies.len()
    }
}

/// How stage 2 picks among admissible `(k, l)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum PairSelection {
    /// Lexicographically smallest admissible pair.
    #[default]
    Lexicographic,
    /// Use these pairs for the first stage-2 steps, then fall back to the
    /// lexicographic rule. A scripted pair that is not admissible is an error.
    Scripted(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    pub labeling: CoverLabeling,
    /// Largest column sum of the input.
    pub m_prime: u64,
    /// Degree of the constructed cover.
    pub degree: usize,
    pub trace: Vec<TraceStep>,
}

impl LiftResult {
    pub fn matrix(&self) -> PseudoMatrix {
        pseudocodeword_matrix(&self.labeling)
    }
}

/// Index sets whose multiplicities reproduce a single-symbol count vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetDecomposition {
    pub symbol: u8,
    pub sets: Vec<BTreeSet<usize>>,
}

impl SetDecomposition {
    pub fn multiplicity(&self, i: usize) -> usize {
        self.sets.iter().filter(|s| s.contains(&i)).count()
    }
}

/// The cover degree used for a matrix with largest column sum `m_prime`.
pub fn cover_degree(field: Field, m_prime: u64) -> usize {
    let m = match field {
        Field::F3 => (3 * m_prime).saturating_sub(2),
        Field::F2 => (2 * m_prime).saturating_sub(1),
    };
    m.max(1) as usize
}

fn check_preconditions(h: &FieldMatrix, f: &PseudoMatrix) -> Result<()> {
    if f.field() != h.field() || f.cols() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} pseudocodeword matrix over {} against a {}x{} matrix over {}",
            f.rows(),
            f.cols(),
            f.field(),
            h.rows(),
            h.cols(),
            h.field()
        )));
    }
    let membership = enumerate_cone(h).check(f)?;
    if !membership.is_member() {
        return Err(Error::NotInCone { violated: membership.violated });
    }
    let residues = modular_residues(h, f)?;
    if residues.iter().any(|&r| r != 0) {
        return Err(Error::SyndromeCondition { residues });
    }
    Ok(())
}

fn require_binary_row(hs: &FieldMatrix) -> Result<()> {
    if hs.rows() != 1 || hs.field() != Field::F3 {
        return Err(Error::Precondition("expected a single ternary row".into()));
    }
    if hs.row(0).iter().any(|&v| v > 1) {
        return Err(Error::Precondition("row entries must be 0 or 1; apply psi_map first".into()));
    }
    Ok(())
}

/// Positions of the three largest entries of `values` over `support`, ties
/// broken by lowest index.
fn three_largest(values: &[u64], support: &[usize]) -> Option<[usize; 3]> {
    let mut order: Vec<usize> = support.iter().copied().filter(|&i| values[i] > 0).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(values[i]), i));
    (order.len() >= 3).then(|| [order[0], order[1], order[2]])
}

/// Splits the single nonzero row of `f` into triples of distinct indices.
pub fn decompose_one_type(hs: &FieldMatrix, f: &PseudoMatrix) -> Result<SetDecomposition> {
    require_binary_row(hs)?;
    let support = hs.support(0);
    if f.field() != Field::F3 || f.cols() != hs.cols() {
        return Err(Error::DimensionMismatch("pseudocodeword matrix does not match the row".into()));
    }
    let symbol = match (f.row(0).iter().any(|&x| x > 0), f.row(1).iter().any(|&x| x > 0)) {
        (true, true) => return Err(Error::Precondition("both rows of F are nonzero".into())),
        (false, true) => 2,
        _ => 1,
    };
    let mut values = f.row(symbol as usize - 1).to_vec();
    if let Some(i) = (0..values.len()).find(|i| values[*i] > 0 && hs.get(0, *i) == 0) {
        return Err(Error::Precondition(format!("nonzero entry in column {} outside the support", i + 1)));
    }
    let membership = enumerate_k3(hs)?.check(f)?;
    if !membership.is_member() {
        return Err(Error::NotInCone { violated: membership.violated });
    }
    let total: u64 = values.iter().sum();
    if !total.is_multiple_of(3) {
        return Err(Error::Precondition(format!("entries sum to {total}, not a multiple of 3")));
    }
    let mut sets = Vec::with_capacity(total as usize / 3);
    while values.iter().any(|&x| x > 0) {
        let triple = three_largest(&values, &support).ok_or_else(|| {
            Error::Precondition("fewer than three nonzero columns remain; input is not a cone point".into())
        })?;
        for &i in &triple {
            values[i] -= 1;
        }
        sets.push(triple.into_iter().collect());
    }
    Ok(SetDecomposition { symbol, sets })
}

/// Labels and check assignments of a single-row lift, before packaging.
struct RowLift {
    labels: Vec<Vec<u8>>,
    /// `check_of[i][mu]`: the check copy adjacent to `u_{i,mu}`.
    check_of: Vec<Vec<Option<usize>>>,
    trace: Vec<TraceStep>,
}

struct RowBuilder<'a> {
    hs: &'a FieldMatrix,
    system: ConeSystem,
    row: usize,
    support: Vec<usize>,
    degree: usize,
    remaining: PseudoMatrix,
    labels: Vec<Vec<u8>>,
    check_of: Vec<Vec<Option<usize>>>,
    /// `occupied[nu][i]`: check copy `nu` already has a neighbor in column `i`.
    occupied: Vec<Vec<bool>>,
    trace: Vec<TraceStep>,
}

impl<'a> RowBuilder<'a> {
    fn new(hs: &'a FieldMatrix, row: usize, f: &PseudoMatrix, degree: usize) -> Self {
        let n = hs.cols();
        let support = hs.support(0);
        let mut labels = vec![vec![0u8; degree]; n];
        for i in (0..n).filter(|i| hs.get(0, *i) == 0) {
            let mut mu = 0;
            for symbol in f.field().nonzero() {
                for _ in 0..f.symbol(symbol, i) {
                    labels[i][mu] = symbol;
                    mu += 1;
                }
            }
        }
        RowBuilder {
            hs,
            system: enumerate_cone(hs),
            row,
            support,
            degree,
            remaining: f.clone(),
            labels,
            check_of: vec![vec![None; degree]; n],
            occupied: vec![vec![false; n]; degree],
            trace: Vec::new(),
        }
    }

    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::LiftFailure { step: self.trace.len(), reason: reason.into(), trace: self.trace.clone() }
    }

    fn mass(&self, symbol: u8) -> u64 {
        self.support.iter().map(|&i| self.remaining.symbol(symbol, i)).sum()
    }

    /// Takes one unit of `symbol` from each column and joins the copies to a
    /// common free check copy.
    fn place(&mut self, units: &[(usize, u8)]) -> Result<(Vec<usize>, usize)> {
        let nu = (0..self.degree)
            .find(|&nu| units.iter().all(|&(i, _)| !self.occupied[nu][i]))
            .ok_or_else(|| self.fail(format!("no check copy free on columns {:?}", cols1(units))))?;
        let mut copies = Vec::with_capacity(units.len());
        for &(i, symbol) in units {
            let mu = self.remaining.column_sum(i) as usize - 1;
            let row = symbol as usize - 1;
            self.remaining.set(row, i, self.remaining.get(row, i) - 1);
            self.labels[i][mu] = symbol;
            self.check_of[i][mu] = Some(nu);
            self.occupied[nu][i] = true;
            copies.push(mu);
        }
        Ok((copies, nu))
    }

    fn assert_invariant(&self) -> Result<()> {
        let ok = self.system.contains(&self.remaining)?
            && modular_residues(self.hs, &self.remaining)?.iter().all(|&r| r == 0);
        if ok {
            Ok(())
        } else {
            Err(self.fail(format!("reduced matrix left the cone or the mod-3 class:\n{}", self.remaining)))
        }
    }

    fn admissible_pairs(&self, report: &CriticalReport) -> Vec<(usize, usize)> {
        let critical = report.critical_set();
        let mut out = Vec::new();
        for &k in &self.support {
            if self.remaining.symbol(1, k) == 0 {
                continue;
            }
            for &l in &self.support {
                if l == k || self.remaining.symbol(2, l) == 0 {
                    continue;
                }
                let covers_coords = critical.iter().all(|&c| c == k || c == l);
                let covers_t1 = report.pairs_type1.iter().all(|&(a, b)| a == k || b == k);
                let covers_t2 = report.pairs_type2.iter().all(|&(a, b)| a == l || b == l);
                if covers_coords && covers_t1 && covers_t2 {
                    out.push((k, l));
                }
            }
        }
        out
    }

    fn stage_two(&mut self, selection: &PairSelection) -> Result<()> {
        let mut script = match selection {
            PairSelection::Scripted(s) => s.iter().copied().collect::<std::collections::VecDeque<_>>(),
            PairSelection::Lexicographic => Default::default(),
        };
        while self.mass(1) > 0 && self.mass(2) > 0 {
            let report = critical_in(&self.system, &self.remaining);
            let admissible = self.admissible_pairs(&report);
            let (k, l) = match script.pop_front() {
                Some(pair) if admissible.contains(&pair) => pair,
                Some(pair) => {
                    return Err(self.fail(format!(
                        "scripted pair (k={}, l={}) is not admissible; admissible: {:?}",
                        pair.0 + 1,
                        pair.1 + 1,
                        admissible.iter().map(|&(a, b)| (a + 1, b + 1)).collect::<Vec<_>>()
                    )))
                }
                None => *admissible.first().ok_or_else(|| {
                    self.fail(format!("no admissible (k, l) for\n{}critical: {report:?}", self.remaining))
                })?,
            };
            let (copies, nu) = self.place(&[(k, 1), (l, 2)])?;
            self.trace.push(TraceStep {
                row: self.row,
                kind: StepKind::Stage2Pair,
                coordinates: vec![k, l],
                copies,
                symbols: vec![1, 2],
                check_copies: vec![nu],
                critical: Some(report),
                snapshot: self.remaining.clone(),
            });
            self.assert_invariant()?;
        }
        Ok(())
    }

    fn stage_three(&mut self, symbols: &[u8]) -> Result<()> {
        let live: Vec<u8> = symbols.iter().copied().filter(|&s| self.mass(s) > 0).collect();
        let beta = match live.as_slice() {
            [] => return Ok(()),
            [beta] => *beta,
            _ => return Err(self.fail("both symbols retain mass after stage 2")),
        };
        while self.mass(beta) > 0 {
            let values = self.remaining.row(beta as usize - 1).to_vec();
            let triple = three_largest(&values, &self.support)
                .ok_or_else(|| self.fail("fewer than three nonzero columns in stage 3"))?;
            let units: Vec<(usize, u8)> = triple.iter().map(|&i| (i, beta)).collect();
            let (copies, nu) = self.place(&units)?;
            self.trace.push(TraceStep {
                row: self.row,
                kind: StepKind::Stage3Triple,
                coordinates: triple.to_vec(),
                copies,
                symbols: vec![beta; 3],
                check_copies: vec![nu],
                critical: None,
                snapshot: self.remaining.clone(),
            });
            self.assert_invariant()?;
        }
        Ok(())
    }

    /// Binary analogue of stages 2 and 3: pairs from the two largest entries.
    fn binary_pairs(&mut self) -> Result<()> {
        while self.mass(1) > 0 {
            let values = self.remaining.row(0).to_vec();
            let mut order: Vec<usize> = self.support.iter().copied().filter(|&i| values[i] > 0).collect();
            order.sort_by_key(|&i| (std::cmp::Reverse(values[i]), i));
            if order.len() < 2 {
                return Err(self.fail("a single nonzero column remains"));
            }
            let (copies, nu) = self.place(&[(order[0], 1), (order[1], 1)])?;
            self.trace.push(TraceStep {
                row: self.row,
                kind: StepKind::Stage2Pair,
                coordinates: vec![order[0], order[1]],
                copies,
                symbols: vec![1, 1],
                check_copies: vec![nu],
                critical: None,
                snapshot: self.remaining.clone(),
            });
        }
        Ok(())
    }

    fn stage_four(&mut self) -> Result<()> {
        for idx in 0..self.support.len() {
            let i = self.support[idx];
            let free_copies: Vec<usize> = (0..self.degree).filter(|&mu| self.check_of[i][mu].is_none()).collect();
            let free_checks: Vec<usize> = (0..self.degree).filter(|&nu| !self.occupied[nu][i]).collect();
            if free_copies.len() != free_checks.len() {
                return Err(self.fail(format!(
                    "column {}: {} unmatched copies but {} open check copies",
                    i + 1,
                    free_copies.len(),
                    free_checks.len()
                )));
            }
            if free_copies.iter().any(|&mu| self.labels[i][mu] != 0) {
                return Err(self.fail(format!("column {}: a labeled copy was left unconnected", i + 1)));
            }
            let mate = perfect_matching(free_copies.len(), |_, _| true)
                .ok_or_else(|| self.fail("no perfect matching for zero-labeled copies"))?;
            let mut checks = Vec::with_capacity(mate.len());
            for (a, &b) in mate.iter().enumerate() {
                let (mu, nu) = (free_copies[a], free_checks[b]);
                self.check_of[i][mu] = Some(nu);
                self.occupied[nu][i] = true;
                checks.push(nu);
            }
            if !free_copies.is_empty() {
                self.trace.push(TraceStep {
                    row: self.row,
                    kind: StepKind::Stage4Fill,
                    coordinates: vec![i],
                    symbols: vec![0; free_copies.len()],
                    copies: free_copies,
                    check_copies: checks,
                    critical: None,
                    snapshot: self.remaining.clone(),
                });
            }
        }
        Ok(())
    }

    fn finish(self) -> RowLift {
        RowLift { labels: self.labels, check_of: self.check_of, trace: self.trace }
    }
}

fn cols1(units: &[(usize, u8)]) -> Vec<usize> {
    units.iter().map(|&(i, _)| i + 1).collect()
}

fn lift_row(hs: &FieldMatrix, row: usize, f: &PseudoMatrix, degree: usize, selection: &PairSelection) -> Result<RowLift> {
    let mut builder = RowBuilder::new(hs, row, f, degree);
    match hs.field() {
        Field::F3 => {
            builder.stage_two(selection)?;
            builder.stage_three(&[1, 2])?;
        }
        Field::F2 => builder.binary_pairs()?,
    }
    builder.stage_four()?;
    Ok(builder.finish())
}

fn package(
    h: &FieldMatrix,
    labels: Vec<Vec<u8>>,
    perms: EdgePermutations,
    degree: usize,
    m_prime: u64,
    trace: Vec<TraceStep>,
    target: &PseudoMatrix,
) -> Result<LiftResult> {
    let tanner = build_tanner(h);
    let cover = build_cover(&tanner, &perms, degree)?;
    let labeling = CoverLabeling::new(cover, labels)?;
    let realized = pseudocodeword_matrix(&labeling);
    let step = trace.len();
    let broken = |reason: String| Error::LiftFailure { step, reason, trace: trace.clone() };
    if !is_valid_cover(labeling.cover()) {
        return Err(broken("constructed graph is not a valid cover".into()));
    }
    if !verify_pseudocodeword(&labeling) {
        return Err(broken(format!("parity checks fail at {:?}", labeling.failing_checks())));
    }
    if &realized != target {
        return Err(broken(format!("realized matrix\n{realized}differs from the input")));
    }
    Ok(LiftResult { labeling, m_prime, degree, trace })
}

/// Lifts a single `{0,1}` ternary row.
pub fn lift_single_row(hs: &FieldMatrix, f: &PseudoMatrix, selection: &PairSelection) -> Result<LiftResult> {
    require_binary_row(hs)?;
    check_preconditions(hs, f)?;
    let m_prime = f.max_column_sum();
    let degree = cover_degree(Field::F3, m_prime);
    let lifted = lift_row(hs, 0, f, degree, selection)?;
    let perms = hs
        .support(0)
        .into_iter()
        .map(|i| ((0, i), lifted.check_of[i].iter().map(|c| c.expect("stage 4 completes")).collect()))
        .collect();
    package(hs, lifted.labels, perms, degree, m_prime, lifted.trace, f)
}

fn swap_symbols(label: u8) -> u8 {
    match label {
        1 => 2,
        2 => 1,
        x => x,
    }
}

/// Builds a cover of the full Tanner graph of `h` realizing `f`.
///
/// Each row is lifted separately (through `psi_map` and `support_normalize`
/// for ternary rows) with the shared degree, the copies of every column are
/// reordered so that labels ascend, and the per-row check copies are merged.
pub fn lift_full(h: &FieldMatrix, f: &PseudoMatrix) -> Result<LiftResult> {
    check_preconditions(h, f)?;
    let field = h.field();
    let m_prime = f.max_column_sum();
    let degree = cover_degree(field, m_prime);
    let n = h.cols();

    // canonical labels: each column's multiset in ascending order
    let mut canonical = vec![Vec::with_capacity(degree); n];
    for (i, labels) in canonical.iter_mut().enumerate() {
        let nonzero = f.column_sum(i) as usize;
        labels.resize(degree - nonzero, 0);
        for symbol in field.nonzero() {
            labels.extend(std::iter::repeat_n(symbol, f.symbol(symbol, i) as usize));
        }
    }

    let mut perms = EdgePermutations::new();
    let mut trace = Vec::new();
    for j in 0..h.rows() {
        let row = h.row_matrix(j);
        let (row_hs, row_f) = match field {
            Field::F3 => (support_normalize(&row)?, psi_map(&row, f)?),
            Field::F2 => (row.clone(), f.clone()),
        };
        let lifted = lift_row(&row_hs, j, &row_f, degree, &PairSelection::Lexicographic)?;
        for i in row.support(0) {
            let mut labels = lifted.labels[i].clone();
            if row.get(0, i) == 2 {
                labels.iter_mut().for_each(|x| *x = swap_symbols(*x));
            }
            let mut order: Vec<usize> = (0..degree).collect();
            order.sort_by_key(|&mu| (labels[mu], mu));
            debug_assert!(order.iter().map(|&mu| labels[mu]).eq(canonical[i].iter().copied()));
            let perm = order.iter().map(|&mu| lifted.check_of[i][mu].expect("stage 4 completes")).collect();
            perms.insert((j, i), perm);
        }
        trace.extend(lifted.trace);
    }
    package(h, canonical, perms, degree, m_prime, trace, f)
}

/// A scale `c` and an integer pseudocodeword matrix `F` with `c F` within
/// `epsilon` of a cone point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximation {
    pub scale: Rational64,
    pub matrix: PseudoMatrix,
    /// `c F - Z`, entrywise; all zero for rational input.
    pub residual: RationalMatrix,
}

impl Approximation {
    pub fn is_exact(&self) -> bool {
        self.residual.entries().iter().all(|x| *x.numer() == 0)
    }
}

/// Integer pseudocodeword matrix whose scaled copy hits the rational cone
/// point `z` exactly.
///
/// With `d` the common denominator of `z`, `F = q d z` is integral, still in
/// the cone, and every entry of `F_1 + 2 F_2` (or of `F` over F2) is a
/// multiple of `q`; the scale is `1/(q d)`.
pub fn approximate_cone_point(h: &FieldMatrix, z: &RationalMatrix, epsilon: Rational64) -> Result<Approximation> {
    if epsilon <= Rational64::from_integer(0) {
        return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
    }
    let membership = member(h, z)?;
    if !membership.is_member() {
        return Err(Error::NotInCone { violated: membership.violated });
    }
    let q = h.field().q() as i64;
    let d = z.common_denominator();
    let factor = Rational64::from_integer(q * d);
    let matrix = PseudoMatrix::from_rational(h.field(), &z.scale(factor))?;
    let scale = Rational64::new(1, q * d);
    let back = matrix.to_rational().scale(scale);
    let residual = RationalMatrix::new(
        z.rows(),
        z.cols(),
        back.entries().iter().zip(z.entries()).map(|(a, b)| a - b).collect(),
    )?;
    Ok(Approximation { scale, matrix, residual })
}
