//! Fundamental cones of a parity-check matrix.
//!
//! Every inequality is stored in homogeneous form `sum a_i^(alpha) f_i^(alpha) >= 0`
//! with integer coefficients, so membership of integer and rational points is
//! decided exactly. The generation order is deterministic: by check row, then
//! single-coordinate inequalities by coordinate (type one before type two),
//! then pair inequalities by pair, and the nonnegativity constraints last.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{integer_syndrome_mod, Field, FieldMatrix, RationalMatrix};
use crate::tanner::PseudoMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityKind {
    /// Binary check inequality `f_l <= sum_{i != l} f_i`.
    Check,
    SingleType1,
    SingleType2,
    PairType1,
    PairType2,
    Nonnegativity,
}

impl InequalityKind {
    pub fn is_trivial(self) -> bool {
        self == InequalityKind::Nonnegativity
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InequalityKind::Check => "check",
            InequalityKind::SingleType1 => "single-type1",
            InequalityKind::SingleType2 => "single-type2",
            InequalityKind::PairType1 => "pair-type1",
            InequalityKind::PairType2 => "pair-type2",
            InequalityKind::Nonnegativity => "nonnegativity",
        };
        f.write_str(s)
    }
}

/// One homogeneous inequality together with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeInequality {
    /// Check row `j`; `None` for nonnegativity constraints.
    pub row: Option<usize>,
    pub kind: InequalityKind,
    /// `[l]` for single-coordinate and nonnegativity constraints, `[k, l]` with
    /// `k < l` for pairs.
    pub indices: Vec<usize>,
    /// Symbol of a nonnegativity constraint.
    pub symbol: Option<u8>,
    /// `(q-1) x n` coefficients, row-major.
    pub coefficients: Vec<i64>,
    cols: usize,
}

impl ConeInequality {
    fn new(row: Option<usize>, kind: InequalityKind, indices: Vec<usize>, field: Field, cols: usize) -> Self {
        ConeInequality {
            row,
            kind,
            indices,
            symbol: None,
            coefficients: vec![0; (field.q() as usize - 1) * cols],
            cols,
        }
    }

    fn add(&mut self, symbol: u8, col: usize, coef: i64) {
        self.coefficients[(symbol as usize - 1) * self.cols + col] += coef;
    }

    pub fn coefficient(&self, symbol: u8, col: usize) -> i64 {
        self.coefficients[(symbol as usize - 1) * self.cols + col]
    }

    pub fn coefficient_rows(&self) -> Vec<Vec<i64>> {
        self.coefficients.chunks(self.cols.max(1)).map(<[i64]>::to_vec).collect()
    }

    /// `sum a f`, i.e. how far the point is from making this inequality tight.
    pub fn slack<P: ConePoint + ?Sized>(&self, point: &P) -> P::Scalar {
        let mut total = P::Scalar::zero();
        for (idx, &a) in self.coefficients.iter().enumerate() {
            if a != 0 {
                total = total + P::Scalar::from(a) * point.entry(idx / self.cols, idx % self.cols);
            }
        }
        total
    }

    pub fn holds<P: ConePoint + ?Sized>(&self, point: &P) -> bool {
        self.slack(point) >= P::Scalar::zero()
    }
}

/// Anything that can be plugged into a cone inequality.
pub trait ConePoint {
    type Scalar: Copy + PartialOrd + Zero + std::ops::Mul<Output = Self::Scalar> + From<i64>;
    fn shape(&self) -> (usize, usize);
    fn entry(&self, row: usize, col: usize) -> Self::Scalar;
}

impl ConePoint for PseudoMatrix {
    type Scalar = i64;
    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }
    #[inline]
    fn entry(&self, row: usize, col: usize) -> i64 {
        self.get(row, col) as i64
    }
}

impl ConePoint for RationalMatrix {
    type Scalar = Rational64;
    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }
    #[inline]
    fn entry(&self, row: usize, col: usize) -> Rational64 {
        self.get(row, col)
    }
}

/// The explicit inequality list of `K_2(H)` or `K_3(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSystem {
    h: FieldMatrix,
    inequalities: Vec<ConeInequality>,
}

/// Result of a membership test: the violated inequalities, if any.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Membership {
    pub checked: usize,
    pub violated: Vec<ConeInequality>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.violated.is_empty()
    }
}

impl ConeSystem {
    pub fn matrix(&self) -> &FieldMatrix {
        &self.h
    }

    pub fn inequalities(&self) -> &[ConeInequality] {
        &self.inequalities
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    /// Inequalities other than the nonnegativity constraints.
    pub fn nontrivial(&self) -> impl Iterator<Item = &ConeInequality> {
        self.inequalities.iter().filter(|q| !q.kind.is_trivial())
    }

    pub fn check<P: ConePoint + ?Sized>(&self, point: &P) -> Result<Membership> {
        let expected = (self.h.field().q() as usize - 1, self.h.cols());
        if point.shape() != expected {
            return Err(Error::DimensionMismatch(format!(
                "point is {}x{}, cone expects {}x{}",
                point.shape().0,
                point.shape().1,
                expected.0,
                expected.1
            )));
        }
        let violated = self.inequalities.iter().filter(|q| !q.holds(point)).cloned().collect();
        Ok(Membership { checked: self.inequalities.len(), violated })
    }

    pub fn contains<P: ConePoint + ?Sized>(&self, point: &P) -> Result<bool> {
        let expected = (self.h.field().q() as usize - 1, self.h.cols());
        if point.shape() != expected {
            return self.check(point).map(|m| m.is_member());
        }
        Ok(self.inequalities.iter().all(|q| q.holds(point)))
    }

    /// LaTeX-style rendering with the smaller side on the left.
    pub fn render(&self, q: &ConeInequality) -> String {
        render_inequality(&self.h, q)
    }

    pub fn render_text(&self) -> Vec<String> {
        self.inequalities.iter().map(|q| self.render(q)).collect()
    }
}

fn require_field(h: &FieldMatrix, field: Field) -> Result<()> {
    if h.field() != field {
        return Err(Error::WrongField { expected: field.q(), found: h.field().q() });
    }
    Ok(())
}

fn nonnegativity(field: Field, cols: usize) -> impl Iterator<Item = ConeInequality> {
    field.nonzero().flat_map(move |alpha| {
        (0..cols).map(move |i| {
            let mut q = ConeInequality::new(None, InequalityKind::Nonnegativity, vec![i], field, cols);
            q.symbol = Some(alpha);
            q.add(alpha, i, 1);
            q
        })
    })
}

/// Inequalities of the binary cone: one per `(j, l in I_j)` plus `f_i >= 0`.
pub fn enumerate_k2(h: &FieldMatrix) -> Result<ConeSystem> {
    require_field(h, Field::F2)?;
    let n = h.cols();
    let mut out = Vec::new();
    for j in 0..h.rows() {
        let support = h.support(j);
        for &l in &support {
            let mut q = ConeInequality::new(Some(j), InequalityKind::Check, vec![l], Field::F2, n);
            for &i in &support {
                q.add(1, i, if i == l { -1 } else { 1 });
            }
            out.push(q);
        }
    }
    out.extend(nonnegativity(Field::F2, n));
    Ok(ConeSystem { h: h.clone(), inequalities: out })
}

/// Inequalities of the ternary cone.
///
/// Per row `j`: two single-coordinate inequalities per `l in I_j`, two pair
/// inequalities per unordered pair `k < l` in `I_j`, and finally the `2n`
/// nonnegativity constraints. Symbol superscripts `2 H_{j,i}` are reduced
/// in F3.
pub fn enumerate_k3(h: &FieldMatrix) -> Result<ConeSystem> {
    require_field(h, Field::F3)?;
    let f = Field::F3;
    let n = h.cols();
    let mut out = Vec::new();
    for j in 0..h.rows() {
        let support = h.support(j);
        let s1 = |i: usize| h.get(j, i);
        let s2 = |i: usize| f.mul(2, h.get(j, i));
        for &l in &support {
            let mut t1 = ConeInequality::new(Some(j), InequalityKind::SingleType1, vec![l], f, n);
            let mut t2 = ConeInequality::new(Some(j), InequalityKind::SingleType2, vec![l], f, n);
            for &i in support.iter().filter(|&&i| i != l) {
                t1.add(s2(i), i, 2);
                t1.add(s1(i), i, 1);
                t2.add(s1(i), i, 2);
                t2.add(s2(i), i, 1);
            }
            t1.add(s1(l), l, -2);
            t1.add(s2(l), l, -1);
            t2.add(s2(l), l, -2);
            t2.add(s1(l), l, -1);
            out.push(t1);
            out.push(t2);
        }
        for (a, &k) in support.iter().enumerate() {
            for &l in &support[a + 1..] {
                let mut p1 = ConeInequality::new(Some(j), InequalityKind::PairType1, vec![k, l], f, n);
                let mut p2 = ConeInequality::new(Some(j), InequalityKind::PairType2, vec![k, l], f, n);
                for &i in &support {
                    if i != k && i != l {
                        p1.add(s1(i), i, 2);
                        p2.add(s2(i), i, 2);
                    }
                    p1.add(s2(i), i, 1);
                    p2.add(s1(i), i, 1);
                }
                for x in [k, l] {
                    p1.add(s1(x), x, -1);
                    p2.add(s2(x), x, -1);
                }
                out.push(p1);
                out.push(p2);
            }
        }
    }
    out.extend(nonnegativity(f, n));
    Ok(ConeSystem { h: h.clone(), inequalities: out })
}

/// The cone matching the matrix's field.
pub fn enumerate_cone(h: &FieldMatrix) -> ConeSystem {
    match h.field() {
        Field::F2 => enumerate_k2(h),
        Field::F3 => enumerate_k3(h),
    }
    .expect("field dispatch is exhaustive")
}

pub fn member_k3<P: ConePoint + ?Sized>(h: &FieldMatrix, point: &P) -> Result<Membership> {
    enumerate_k3(h)?.check(point)
}

pub fn member_k2<P: ConePoint + ?Sized>(h: &FieldMatrix, point: &P) -> Result<Membership> {
    enumerate_k2(h)?.check(point)
}

/// Membership in the cone of the matrix's own field.
pub fn member<P: ConePoint + ?Sized>(h: &FieldMatrix, point: &P) -> Result<Membership> {
    enumerate_cone(h).check(point)
}

/// Ternary membership decided row by row, as the intersection of the cones of
/// the single-row codes.
pub fn member_by_rows<P: ConePoint + ?Sized>(h: &FieldMatrix, point: &P) -> Result<bool> {
    require_field(h, Field::F3)?;
    if h.rows() == 0 {
        return enumerate_k3(h)?.contains(point);
    }
    for j in 0..h.rows() {
        if !enumerate_k3(&h.row_matrix(j))?.contains(point)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_single_row(row: &FieldMatrix) -> Result<()> {
    if row.rows() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a single row, got {} rows", row.rows())));
    }
    Ok(())
}

/// Swaps `f_i^(1)` and `f_i^(2)` in every column where the row has a 2.
pub fn psi_map(row: &FieldMatrix, f: &PseudoMatrix) -> Result<PseudoMatrix> {
    require_single_row(row)?;
    require_field(row, Field::F3)?;
    if f.field() != Field::F3 || f.cols() != row.cols() {
        return Err(Error::DimensionMismatch(format!(
            "psi needs a 2x{} matrix, got {}x{}",
            row.cols(),
            f.rows(),
            f.cols()
        )));
    }
    let mut out = f.clone();
    for i in 0..row.cols() {
        if row.get(0, i) == 2 {
            out.set(0, i, f.get(1, i));
            out.set(1, i, f.get(0, i));
        }
    }
    Ok(out)
}

/// Replaces every nonzero entry of the row by 1.
pub fn support_normalize(row: &FieldMatrix) -> Result<FieldMatrix> {
    require_single_row(row)?;
    let entries = row.row(0).iter().map(|&v| u8::from(v != 0)).collect();
    FieldMatrix::new(row.field(), 1, row.cols(), entries)
}

/// `H (F_1 + 2 F_2)^T mod 3`, or `H F^T mod 2` in the binary case.
pub fn modular_residues(h: &FieldMatrix, f: &PseudoMatrix) -> Result<Vec<i64>> {
    if f.field() != h.field() {
        return Err(Error::FieldMismatch { expected: h.field().q(), found: f.field().q() });
    }
    integer_syndrome_mod(h, &f.syndrome_weights(), h.field().q() as i64)
}

pub fn satisfies_modular_condition(h: &FieldMatrix, f: &PseudoMatrix) -> Result<bool> {
    Ok(modular_residues(h, f)?.iter().all(|&r| r == 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CriticalType {
    One,
    Two,
}

/// Critical coordinates and pairs of a single-row code.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    /// `(l, type)` for every critical coordinate.
    pub coordinates: BTreeSet<(usize, CriticalType)>,
    /// Critical pairs `(k, l)`, `k < l`, of type one.
    pub pairs_type1: BTreeSet<(usize, usize)>,
    /// Critical pairs of type two.
    pub pairs_type2: BTreeSet<(usize, usize)>,
}

impl CriticalReport {
    /// The set `S_c` of critical coordinates, of either type.
    pub fn critical_set(&self) -> BTreeSet<usize> {
        self.coordinates.iter().map(|&(l, _)| l).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty() && self.pairs_type1.is_empty() && self.pairs_type2.is_empty()
    }
}

fn is_critical(row: &FieldMatrix, f: &PseudoMatrix, q: &ConeInequality) -> bool {
    let s1 = |i: usize| row.get(0, i);
    let s2 = |i: usize| Field::F3.mul(2, row.get(0, i));
    let positive = match q.kind {
        InequalityKind::SingleType1 | InequalityKind::SingleType2 => f.column_sum(q.indices[0]) >= 1,
        InequalityKind::PairType1 => q.indices.iter().all(|&i| f.symbol(s1(i), i) >= 1),
        InequalityKind::PairType2 => q.indices.iter().all(|&i| f.symbol(s2(i), i) >= 1),
        InequalityKind::Check | InequalityKind::Nonnegativity => false,
    };
    positive && q.slack(f) < 3
}

/// Flags the critical coordinates and pairs of `f` against a single ternary row.
pub fn critical_analysis(row: &FieldMatrix, f: &PseudoMatrix) -> Result<CriticalReport> {
    require_single_row(row)?;
    let system = enumerate_k3(row)?;
    if f.field() != Field::F3 || f.cols() != row.cols() {
        return Err(Error::DimensionMismatch("pseudocodeword matrix does not match the row".into()));
    }
    Ok(critical_in(&system, f))
}

/// Critical analysis against an already enumerated single-row system.
pub(crate) fn critical_in(system: &ConeSystem, f: &PseudoMatrix) -> CriticalReport {
    let mut report = CriticalReport::default();
    for q in critical_inequalities(system, f) {
        match q.kind {
            InequalityKind::SingleType1 => {
                report.coordinates.insert((q.indices[0], CriticalType::One));
            }
            InequalityKind::SingleType2 => {
                report.coordinates.insert((q.indices[0], CriticalType::Two));
            }
            InequalityKind::PairType1 => {
                report.pairs_type1.insert((q.indices[0], q.indices[1]));
            }
            InequalityKind::PairType2 => {
                report.pairs_type2.insert((q.indices[0], q.indices[1]));
            }
            _ => unreachable!(),
        }
    }
    report
}

pub(crate) fn critical_inequalities<'a>(
    system: &'a ConeSystem,
    f: &'a PseudoMatrix,
) -> impl Iterator<Item = &'a ConeInequality> {
    system.nontrivial().filter(move |q| is_critical(system.matrix(), f, q))
}

/// Slack of every critical inequality of a cone point satisfying the mod-3
/// condition. Each slack is expected to be exactly zero.
pub fn critical_slacks(row: &FieldMatrix, f: &PseudoMatrix) -> Result<Vec<(ConeInequality, i64)>> {
    require_single_row(row)?;
    let system = enumerate_k3(row)?;
    let membership = system.check(f)?;
    if !membership.is_member() {
        return Err(Error::NotInCone { violated: membership.violated });
    }
    let residues = modular_residues(row, f)?;
    if residues.iter().any(|&r| r != 0) {
        return Err(Error::SyndromeCondition { residues });
    }
    Ok(critical_inequalities(&system, f).map(|q| (q.clone(), q.slack(f))).collect())
}

/// Full characterization verdict for a candidate pseudocodeword matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub field: Field,
    pub membership: Membership,
    /// Residues of the modular syndrome condition; `None` for non-integer input.
    pub residues: Option<Vec<i64>>,
}

impl Verdict {
    pub fn in_cone(&self) -> bool {
        self.membership.is_member()
    }

    pub fn is_integral(&self) -> bool {
        self.residues.is_some()
    }

    pub fn syndrome_ok(&self) -> bool {
        self.residues.as_ref().is_some_and(|r| r.iter().all(|&x| x == 0))
    }

    pub fn is_pseudocodeword(&self) -> bool {
        self.in_cone() && self.syndrome_ok()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial = self.membership.violated.iter().filter(|q| !q.kind.is_trivial()).count();
        if self.in_cone() {
            writeln!(f, "cone membership: yes ({} inequalities satisfied)", self.membership.checked)?;
        } else {
            writeln!(
                f,
                "cone violation: {} of {} inequalities fail ({} nontrivial)",
                self.membership.violated.len(),
                self.membership.checked,
                nontrivial
            )?;
        }
        match &self.residues {
            Some(r) => writeln!(f, "mod-{} syndrome: {:?}", self.field.q(), r)?,
            None => writeln!(f, "mod-{} syndrome: n/a (non-integer matrix)", self.field.q())?,
        }
        write!(f, "pseudocodeword: {}", if self.is_pseudocodeword() { "yes" } else { "no" })
    }
}

/// Cone membership plus, for integer input, the modular syndrome condition.
pub fn pseudocodeword_verdict(h: &FieldMatrix, z: &RationalMatrix) -> Result<Verdict> {
    let membership = member(h, z)?;
    let residues = if z.is_integral() && z.entries().iter().all(|x| *x.numer() >= 0) {
        let f = PseudoMatrix::from_rational(h.field(), z)?;
        Some(modular_residues(h, &f)?)
    } else {
        None
    };
    Ok(Verdict { field: h.field(), membership, residues })
}

fn term(symbol: Option<u8>, col: usize) -> String {
    match symbol {
        Some(a) => format!("f_{}^{{({a})}}", col + 1),
        None => format!("f_{}", col + 1),
    }
}

fn group(coef: u8, terms: &[String]) -> Option<String> {
    let prefix = if coef == 1 { String::new() } else { format!("{coef} ") };
    match terms.len() {
        0 => None,
        1 => Some(format!("{prefix}{}", terms[0])),
        _ => Some(format!("{prefix}( {} )", terms.join(" + "))),
    }
}

fn side(groups: &[Option<String>]) -> String {
    let parts: Vec<&str> = groups.iter().flatten().map(String::as_str).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn render_inequality(h: &FieldMatrix, q: &ConeInequality) -> String {
    if q.kind == InequalityKind::Nonnegativity {
        let sym = if h.field() == Field::F2 { None } else { q.symbol };
        return format!("{} \\ge 0", term(sym, q.indices[0]));
    }
    let j = q.row.expect("non-trivial inequalities carry a row");
    let support = h.support(j);
    if q.kind == InequalityKind::Check {
        let l = q.indices[0];
        let others: Vec<String> = support.iter().filter(|&&i| i != l).map(|&i| term(None, i)).collect();
        return format!("{} \\le {}", term(None, l), side(&[group(1, &others)]));
    }
    let s1 = |i: usize| Some(h.get(j, i));
    let s2 = |i: usize| Some(Field::F3.mul(2, h.get(j, i)));
    let except = |skip: &[usize], sym: &dyn Fn(usize) -> Option<u8>| -> Vec<String> {
        support.iter().filter(|i| !skip.contains(i)).map(|&i| term(sym(i), i)).collect()
    };
    let (small, large) = match q.kind {
        InequalityKind::SingleType1 => {
            let l = q.indices[0];
            (
                format!("2 {} + {}", term(s1(l), l), term(s2(l), l)),
                side(&[group(2, &except(&[l], &s2)), group(1, &except(&[l], &s1))]),
            )
        }
        InequalityKind::SingleType2 => {
            let l = q.indices[0];
            (
                format!("2 {} + {}", term(s2(l), l), term(s1(l), l)),
                side(&[group(2, &except(&[l], &s1)), group(1, &except(&[l], &s2))]),
            )
        }
        InequalityKind::PairType1 => {
            let (k, l) = (q.indices[0], q.indices[1]);
            (
                format!("{} + {}", term(s1(k), k), term(s1(l), l)),
                side(&[group(2, &except(&[k, l], &s1)), group(1, &except(&[], &s2))]),
            )
        }
        InequalityKind::PairType2 => {
            let (k, l) = (q.indices[0], q.indices[1]);
            (
                format!("{} + {}", term(s2(k), k), term(s2(l), l)),
                side(&[group(2, &except(&[k, l], &s2)), group(1, &except(&[], &s1))]),
            )
        }
        InequalityKind::Check | InequalityKind::Nonnegativity => unreachable!(),
    };
    format!("{small} \\le {large}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3(rows: &[&[u8]]) -> FieldMatrix {
        FieldMatrix::from_rows(Field::F3, rows).unwrap()
    }

    fn pm(rows: &[&[u64]]) -> PseudoMatrix {
        PseudoMatrix::from_rows(Field::F3, rows).unwrap()
    }

    fn paper_h() -> FieldMatrix {
        f3(&[&[1, 2, 2, 1], &[2, 0, 1, 2]])
    }

    #[test]
    fn k2_counts() {
        let h = FieldMatrix::from_rows(Field::F2, &[[1, 1, 1]]).unwrap();
        let sys = enumerate_k2(&h).unwrap();
        assert_eq!(sys.nontrivial().count(), 3);
        assert_eq!(sys.len(), 6);

        let h = FieldMatrix::from_rows(Field::F2, &[[1, 1, 0], [0, 0, 0]]).unwrap();
        assert_eq!(enumerate_k2(&h).unwrap().nontrivial().count(), 2);

        let h = FieldMatrix::from_rows(Field::F2, &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(enumerate_k2(&h).unwrap().nontrivial().count(), 4);

        assert!(matches!(enumerate_k2(&paper_h()), Err(Error::WrongField { .. })));
    }

    #[test]
    fn k2_membership() {
        let h = FieldMatrix::from_rows(Field::F2, &[[1, 1, 1]]).unwrap();
        let f = |v: &[u64]| PseudoMatrix::from_rows(Field::F2, &[v]).unwrap();
        assert!(member_k2(&h, &f(&[1, 1, 2])).unwrap().is_member());
        assert!(!member_k2(&h, &f(&[3, 1, 1])).unwrap().is_member());
        assert!(member_k2(&h, &f(&[0, 0, 0])).unwrap().is_member());
    }

    #[test]
    fn k3_count_on_paper_code() {
        let sys = enumerate_k3(&paper_h()).unwrap();
        assert_eq!(sys.nontrivial().count(), 32);
        assert_eq!(sys.len(), 40);
        assert!(matches!(
            enumerate_k3(&FieldMatrix::from_rows(Field::F2, &[[1, 1]]).unwrap()),
            Err(Error::WrongField { .. })
        ));
    }

    #[test]
    fn k3_first_row2_inequality() {
        let sys = enumerate_k3(&paper_h()).unwrap();
        let q = sys
            .inequalities()
            .iter()
            .find(|q| q.row == Some(1) && q.kind == InequalityKind::SingleType1 && q.indices == [0])
            .unwrap();
        // 2(f3^(2) + f4^(1)) + (f3^(1) + f4^(2)) - 2 f1^(2) - f1^(1) >= 0
        assert_eq!(q.coefficient_rows(), vec![vec![-1, 0, 1, 2], vec![-2, 0, 2, 1]]);
        assert_eq!(
            sys.render(q),
            "2 f_1^{(2)} + f_1^{(1)} \\le 2 ( f_3^{(2)} + f_4^{(1)} ) + ( f_3^{(1)} + f_4^{(2)} )"
        );
    }

    #[test]
    fn single_column_forces_zero() {
        let h = f3(&[&[1]]);
        let sys = enumerate_k3(&h).unwrap();
        for a in 0..5u64 {
            for b in 0..5u64 {
                let inside = sys.contains(&pm(&[&[a], &[b]])).unwrap();
                assert_eq!(inside, a == 0 && b == 0, "f = ({a}, {b})");
            }
        }
    }

    #[test]
    fn paper_matrix_is_member() {
        let f = pm(&[&[2, 2, 2, 2], &[2, 2, 0, 0]]);
        assert!(member_k3(&paper_h(), &f).unwrap().is_member());
        assert!(member_by_rows(&paper_h(), &f).unwrap());
        assert!(member_k3(&paper_h(), &PseudoMatrix::zeros(Field::F3, 4)).unwrap().is_member());

        let bad = pm(&[&[3, 0, 0, 0], &[0, 0, 0, 0]]);
        let m = member_k3(&paper_h(), &bad).unwrap();
        assert!(!m.is_member());
        assert!(m
            .violated
            .iter()
            .any(|q| q.indices == [0] && matches!(q.kind, InequalityKind::SingleType1 | InequalityKind::SingleType2)));
        assert!(!member_by_rows(&paper_h(), &bad).unwrap());
    }

    #[test]
    fn membership_dimension_errors() {
        let f = PseudoMatrix::zeros(Field::F3, 3);
        assert!(matches!(member_k3(&paper_h(), &f), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn psi_examples() {
        let row = f3(&[&[2, 0, 1, 2]]);
        let f = pm(&[&[2, 2, 2, 2], &[2, 2, 0, 0]]);
        let hat = psi_map(&row, &f).unwrap();
        assert_eq!(hat.to_rows(), vec![vec![2, 2, 2, 0], vec![2, 2, 0, 2]]);
        assert_eq!(psi_map(&row, &hat).unwrap(), f);
        assert_eq!(psi_map(&f3(&[&[1, 0, 1, 1]]), &f).unwrap(), f);
    }

    #[test]
    fn support_normalize_examples() {
        assert_eq!(support_normalize(&f3(&[&[2, 0, 1, 2]])).unwrap(), f3(&[&[1, 0, 1, 1]]));
        assert_eq!(support_normalize(&f3(&[&[0, 0, 0]])).unwrap(), f3(&[&[0, 0, 0]]));
        assert_eq!(support_normalize(&f3(&[&[1, 1, 1]])).unwrap(), f3(&[&[1, 1, 1]]));
        assert!(support_normalize(&paper_h()).is_err());
    }

    #[test]
    fn critical_analysis_of_paper_example() {
        let hs = f3(&[&[1, 0, 1, 1]]);
        let fhat = pm(&[&[2, 2, 2, 0], &[2, 2, 0, 2]]);
        let report = critical_analysis(&hs, &fhat).unwrap();
        assert_eq!(
            report.coordinates,
            [(0, CriticalType::One), (0, CriticalType::Two)].into_iter().collect()
        );
        assert_eq!(report.pairs_type1, [(0, 2)].into_iter().collect());
        assert_eq!(report.pairs_type2, [(0, 3)].into_iter().collect());

        let reduced = pm(&[&[2, 2, 1, 0], &[1, 2, 0, 2]]);
        assert_eq!(critical_analysis(&hs, &reduced).unwrap(), report);

        assert!(critical_analysis(&hs, &PseudoMatrix::zeros(Field::F3, 4)).unwrap().is_empty());
    }

    #[test]
    fn critical_slacks_are_zero_on_example() {
        let hs = f3(&[&[1, 0, 1, 1]]);
        let fhat = pm(&[&[2, 2, 2, 0], &[2, 2, 0, 2]]);
        let slacks = critical_slacks(&hs, &fhat).unwrap();
        // l=1 both types, pair {1,3} type one, pair {1,4} type two
        assert_eq!(slacks.len(), 4);
        assert!(slacks.iter().all(|(_, s)| *s == 0));
        let single = slacks.iter().find(|(q, _)| q.kind == InequalityKind::SingleType1).unwrap();
        assert_eq!(single.0.indices, vec![0]);

        let off_mod = pm(&[&[1, 0, 0, 0], &[0, 0, 0, 0]]);
        assert!(critical_slacks(&hs, &off_mod).is_err());
    }

    #[test]
    fn verdict_display() {
        let f = pm(&[&[2, 2, 2, 2], &[2, 2, 0, 0]]);
        let v = pseudocodeword_verdict(&paper_h(), &f.to_rational()).unwrap();
        assert!(v.is_pseudocodeword());
        assert_eq!(v.residues, Some(vec![0, 0]));
        assert!(v.to_string().ends_with("pseudocodeword: yes"));

        let bad = pm(&[&[3, 0, 0, 0], &[0, 0, 0, 0]]);
        let v = pseudocodeword_verdict(&paper_h(), &bad.to_rational()).unwrap();
        assert!(v.to_string().contains("cone violation"));
        assert!(!v.is_pseudocodeword());

        let half = f.to_rational().scale(Rational64::new(1, 4));
        let v = pseudocodeword_verdict(&paper_h(), &half).unwrap();
        assert!(v.in_cone() && !v.is_integral() && !v.is_pseudocodeword());
    }
}
