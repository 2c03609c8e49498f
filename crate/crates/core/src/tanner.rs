//! Tanner graphs, their finite covers, and graph-cover pseudocodewords.
//!
//! A degree-`M` cover is stored as an explicit edge list between copies
//! `u_{i,mu}` and `v_{j,nu}`. Covers produced by [`build_cover`] always satisfy
//! the cover axioms; covers read from disk may not, which is what
//! [`validate_cover`] is for. All copy indices are 0-based in this API.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::field::{Field, FieldMatrix, RationalMatrix};

/// One permutation per base edge, keyed by `(check j, variable i)`.
///
/// `perms[&(j, i)][mu] = nu` connects `u_{i,mu}` to `v_{j,nu}`.
pub type EdgePermutations = BTreeMap<(usize, usize), Vec<usize>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseEdge {
    pub check: usize,
    pub var: usize,
    pub label: u8,
}

/// Bipartite graph with one edge per nonzero entry of `H`, labeled by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    h: FieldMatrix,
    edges: Vec<BaseEdge>,
}

impl TannerGraph {
    pub fn matrix(&self) -> &FieldMatrix {
        &self.h
    }

    pub fn field(&self) -> Field {
        self.h.field()
    }

    pub fn num_vars(&self) -> usize {
        self.h.cols()
    }

    pub fn num_checks(&self) -> usize {
        self.h.rows()
    }

    /// Edges sorted by `(check, var)`.
    pub fn edges(&self) -> &[BaseEdge] {
        &self.edges
    }

    pub fn check_neighbors(&self, j: usize) -> impl Iterator<Item = &BaseEdge> {
        self.edges.iter().filter(move |e| e.check == j)
    }
}

pub fn build_tanner(h: &FieldMatrix) -> TannerGraph {
    let mut edges = Vec::with_capacity(h.nonzero_count());
    for j in 0..h.rows() {
        for i in 0..h.cols() {
            let label = h.get(j, i);
            if label != 0 {
                edges.push(BaseEdge { check: j, var: i, label });
            }
        }
    }
    TannerGraph { h: h.clone(), edges }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverEdge {
    pub check: usize,
    pub check_copy: usize,
    pub var: usize,
    pub var_copy: usize,
    pub label: u8,
}

/// An `M`-cover of a Tanner graph, as a list of edges between copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverGraph {
    base: TannerGraph,
    degree: usize,
    edges: Vec<CoverEdge>,
}

impl CoverGraph {
    /// Wraps an arbitrary edge list without checking the cover axioms.
    pub fn from_edges(base: TannerGraph, degree: usize, edges: Vec<CoverEdge>) -> Self {
        CoverGraph { base, degree, edges }
    }

    /// The trivial cover: `M` disjoint copies of the base graph.
    pub fn trivial(base: &TannerGraph, degree: usize) -> Result<Self> {
        let perms = base.edges().iter().map(|e| ((e.check, e.var), (0..degree).collect())).collect();
        build_cover(base, &perms, degree)
    }

    pub fn base(&self) -> &TannerGraph {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edges(&self) -> &[CoverEdge] {
        &self.edges
    }

    pub fn edges_mut(&mut self) -> &mut Vec<CoverEdge> {
        &mut self.edges
    }

    /// Recovers the per-edge permutations. Fails if the cover is not valid.
    pub fn permutations(&self) -> Result<EdgePermutations> {
        validate_cover(self).map_err(Error::InvalidCover)?;
        let mut perms: EdgePermutations = self
            .base
            .edges()
            .iter()
            .map(|e| ((e.check, e.var), vec![0; self.degree]))
            .collect();
        for e in &self.edges {
            perms.get_mut(&(e.check, e.var)).expect("validated")[e.var_copy] = e.check_copy;
        }
        Ok(perms)
    }
}

/// Builds the cover with edges `{u_{i,mu}, v_{j,perm(mu)}}` for every base edge.
pub fn build_cover(base: &TannerGraph, perms: &EdgePermutations, degree: usize) -> Result<CoverGraph> {
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    if perms.len() != base.edges().len() {
        let extra: Vec<_> = perms
            .keys()
            .filter(|(j, i)| !base.edges().iter().any(|e| e.check == *j && e.var == *i))
            .collect();
        return Err(Error::InvalidCover(format!(
            "expected {} permutations, got {} (extra keys {extra:?})",
            base.edges().len(),
            perms.len()
        )));
    }
    let mut edges = Vec::with_capacity(base.edges().len() * degree);
    for e in base.edges() {
        let perm = perms.get(&(e.check, e.var)).ok_or_else(|| {
            Error::InvalidCover(format!("missing permutation for edge (j={}, i={})", e.check + 1, e.var + 1))
        })?;
        check_permutation(perm, degree)
            .map_err(|msg| Error::InvalidCover(format!("edge (j={}, i={}): {msg}", e.check + 1, e.var + 1)))?;
        for (mu, &nu) in perm.iter().enumerate() {
            edges.push(CoverEdge { check: e.check, check_copy: nu, var: e.var, var_copy: mu, label: e.label });
        }
    }
    edges.sort_unstable();
    Ok(CoverGraph { base: base.clone(), degree, edges })
}

fn check_permutation(perm: &[usize], degree: usize) -> std::result::Result<(), String> {
    if perm.len() != degree {
        return Err(format!("permutation has length {}, expected {degree}", perm.len()));
    }
    let mut seen = vec![false; degree];
    for &x in perm {
        if x >= degree || seen[x] {
            return Err(format!("{perm:?} is not a permutation of 0..{degree}"));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Checks the cover axioms, returning the first violated rule.
///
/// Every cover edge must project onto a base edge with the same label, and
/// for each base edge the cover edges between its endpoint copies must form
/// a perfect matching.
pub fn validate_cover(cover: &CoverGraph) -> std::result::Result<(), String> {
    let m = cover.degree;
    if m == 0 {
        return Err("cover degree is zero".into());
    }
    let base = &cover.base;
    let mut var_side: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
    let mut check_side: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
    for e in base.edges() {
        var_side.insert((e.check, e.var), vec![0; m]);
        check_side.insert((e.check, e.var), vec![0; m]);
    }
    for e in &cover.edges {
        let name = format!(
            "edge u_{{{},{}}} - v_{{{},{}}}",
            e.var + 1,
            e.var_copy + 1,
            e.check + 1,
            e.check_copy + 1
        );
        if e.var_copy >= m || e.check_copy >= m {
            return Err(format!("{name}: copy index out of range for degree {m}"));
        }
        if e.check >= base.num_checks() || e.var >= base.num_vars() {
            return Err(format!("{name}: endpoints outside the base graph"));
        }
        let base_label = base.matrix().get(e.check, e.var);
        if base_label == 0 {
            return Err(format!("{name}: no base edge between u_{} and v_{}", e.var + 1, e.check + 1));
        }
        if e.label != base_label {
            return Err(format!("{name}: label {} differs from base label {base_label}", e.label));
        }
        var_side.get_mut(&(e.check, e.var)).unwrap()[e.var_copy] += 1;
        check_side.get_mut(&(e.check, e.var)).unwrap()[e.check_copy] += 1;
    }
    for ((j, i), counts) in &var_side {
        if let Some(mu) = counts.iter().position(|&c| c != 1) {
            return Err(format!(
                "u_{{{},{}}} has {} neighbors among copies of v_{} (expected 1)",
                i + 1,
                mu + 1,
                counts[mu],
                j + 1
            ));
        }
    }
    for ((j, i), counts) in &check_side {
        if let Some(nu) = counts.iter().position(|&c| c != 1) {
            return Err(format!(
                "v_{{{},{}}} has {} neighbors among copies of u_{} (expected 1)",
                j + 1,
                nu + 1,
                counts[nu],
                i + 1
            ));
        }
    }
    Ok(())
}

pub fn is_valid_cover(cover: &CoverGraph) -> bool {
    validate_cover(cover).is_ok()
}

/// The `Mm x Mn` parity-check matrix of the lifted code.
///
/// Row `j*M + nu` and column `i*M + mu` carry `H_{j,i}` iff `u_{i,mu}` is
/// adjacent to `v_{j,nu}`.
pub fn lifted_parity_matrix(cover: &CoverGraph) -> FieldMatrix {
    let m = cover.degree;
    let base = cover.base.matrix();
    let mut lifted = FieldMatrix::zeros(base.field(), base.rows() * m, base.cols() * m);
    for e in &cover.edges {
        lifted
            .set(e.check * m + e.check_copy, e.var * m + e.var_copy, e.label)
            .expect("labels come from the base field");
    }
    lifted
}

/// A cover together with a field label on every variable copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverLabeling {
    cover: CoverGraph,
    /// `labels[i][mu]` is the label of `u_{i,mu}`.
    labels: Vec<Vec<u8>>,
}

impl CoverLabeling {
    pub fn new(cover: CoverGraph, labels: Vec<Vec<u8>>) -> Result<Self> {
        let n = cover.base.num_vars();
        if labels.len() != n || labels.iter().any(|l| l.len() != cover.degree) {
            return Err(Error::DimensionMismatch(format!(
                "labels must be {n} lists of {} entries",
                cover.degree
            )));
        }
        let q = cover.base.field().q();
        if let Some(&bad) = labels.iter().flatten().find(|&&v| v >= q) {
            return Err(Error::InvalidFieldEntry { value: bad as u64, q });
        }
        Ok(CoverLabeling { cover, labels })
    }

    /// Labels every copy `u_{i,mu}` with `c_i`.
    pub fn constant(cover: CoverGraph, codeword: &[u8]) -> Result<Self> {
        let m = cover.degree;
        CoverLabeling::new(cover, codeword.iter().map(|&c| vec![c; m]).collect())
    }

    /// Labels from the flat vector `p = (p_{1,1}, ..., p_{1,M}, ..., p_{n,M})`.
    pub fn from_vector(cover: CoverGraph, p: &[u8]) -> Result<Self> {
        let m = cover.degree;
        let n = cover.base.num_vars();
        if p.len() != m * n {
            return Err(Error::DimensionMismatch(format!("label vector of length {} for M*n = {}", p.len(), m * n)));
        }
        CoverLabeling::new(cover, p.chunks(m).map(<[u8]>::to_vec).collect())
    }

    pub fn cover(&self) -> &CoverGraph {
        &self.cover
    }

    pub fn labels(&self) -> &[Vec<u8>] {
        &self.labels
    }

    pub fn labels_mut(&mut self) -> &mut Vec<Vec<u8>> {
        &mut self.labels
    }

    pub fn label(&self, var: usize, copy: usize) -> u8 {
        self.labels[var][copy]
    }

    pub fn into_parts(self) -> (CoverGraph, Vec<Vec<u8>>) {
        (self.cover, self.labels)
    }

    /// The flat vector `p` in `(i, mu)` order.
    pub fn label_vector(&self) -> Vec<u8> {
        self.labels.concat()
    }

    /// Check copies `(j, nu)` whose parity check is not satisfied.
    pub fn failing_checks(&self) -> Vec<(usize, usize)> {
        let field = self.cover.base.field();
        let m = self.cover.degree;
        let mut sums = vec![vec![0u8; m]; self.cover.base.num_checks()];
        for e in &self.cover.edges {
            if e.check < sums.len() && e.check_copy < m && e.var < self.labels.len() && e.var_copy < m {
                let term = field.mul(e.label, self.labels[e.var][e.var_copy]);
                sums[e.check][e.check_copy] = field.add(sums[e.check][e.check_copy], term);
            }
        }
        let mut out = Vec::new();
        for (j, row) in sums.iter().enumerate() {
            for (nu, &s) in row.iter().enumerate() {
                if s != 0 {
                    out.push((j, nu));
                }
            }
        }
        out
    }

    /// Graphviz rendering: variable copies as circles annotated with their
    /// label, check copies as squares.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph cover {\n");
        for (i, labels) in self.labels.iter().enumerate() {
            for (mu, l) in labels.iter().enumerate() {
                let _ = writeln!(s, "  u_{}_{} [shape=circle, label=\"u{},{}\\n({l})\"];", i + 1, mu + 1, i + 1, mu + 1);
            }
        }
        for j in 0..self.cover.base.num_checks() {
            for nu in 0..self.cover.degree {
                let _ = writeln!(s, "  v_{}_{} [shape=square, label=\"v{},{}\"];", j + 1, nu + 1, j + 1, nu + 1);
            }
        }
        for e in &self.cover.edges {
            let _ = writeln!(
                s,
                "  u_{}_{} -- v_{}_{} [label=\"[{}]\"];",
                e.var + 1,
                e.var_copy + 1,
                e.check + 1,
                e.check_copy + 1,
                e.label
            );
        }
        s.push_str("}\n");
        s
    }
}

/// True iff every check copy sees a zero weighted sum of its neighbors' labels.
pub fn verify_pseudocodeword(lab: &CoverLabeling) -> bool {
    lab.failing_checks().is_empty()
}

/// The `(q-1) x n` matrix of nonnegative counts `f_i^(alpha)`; row `alpha - 1`
/// holds symbol `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PseudoMatrix {
    field: Field,
    cols: usize,
    entries: Vec<u64>,
}

impl PseudoMatrix {
    pub fn zeros(field: Field, cols: usize) -> Self {
        PseudoMatrix { field, cols, entries: vec![0; (field.q() as usize - 1) * cols] }
    }

    pub fn from_rows<R: AsRef<[u64]>>(field: Field, rows: &[R]) -> Result<Self> {
        let expected = field.q() as usize - 1;
        if rows.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "a pseudocodeword matrix over {field} has {expected} rows, got {}",
                rows.len()
            )));
        }
        let cols = rows[0].as_ref().len();
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch("ragged pseudocodeword matrix".into()));
        }
        let entries = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Ok(PseudoMatrix { field, cols, entries })
    }

    /// Indicator matrix of a single vector: `f_i^(alpha) = [c_i = alpha]`.
    pub fn indicator(field: Field, c: &[u8]) -> Self {
        let mut f = PseudoMatrix::zeros(field, c.len());
        for (i, &x) in c.iter().enumerate() {
            if x != 0 {
                f.entries[(x as usize - 1) * c.len() + i] += 1;
            }
        }
        f
    }

    /// Converts an integral rational matrix with nonnegative entries.
    pub fn from_rational(field: Field, z: &RationalMatrix) -> Result<Self> {
        if z.rows() != field.q() as usize - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} rows, got {}",
                field.q() - 1,
                z.rows()
            )));
        }
        let mut f = PseudoMatrix::zeros(field, z.cols());
        for r in 0..z.rows() {
            for c in 0..z.cols() {
                let x = z.get(r, c);
                if !x.is_integer() || *x.numer() < 0 {
                    return Err(Error::NotInteger { row: r, col: c, value: x.to_string() });
                }
                f.set(r, c, *x.numer() as u64);
            }
        }
        Ok(f)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.field.q() as usize - 1
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry in row `row` (symbol `row + 1`) and column `col`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.cols + col]
    }

    /// `f_col^(symbol)` for a nonzero symbol.
    #[inline]
    pub fn symbol(&self, symbol: u8, col: usize) -> u64 {
        self.get(symbol as usize - 1, col)
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows()).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column_sum(&self, col: usize) -> u64 {
        (0..self.rows()).map(|r| self.get(r, col)).sum()
    }

    /// `max_i sum_alpha f_i^(alpha)`.
    pub fn max_column_sum(&self) -> u64 {
        (0..self.cols).map(|i| self.column_sum(i)).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, factor: u64) -> PseudoMatrix {
        PseudoMatrix {
            field: self.field,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::new(
            self.rows(),
            self.cols,
            self.entries.iter().map(|&x| Rational64::from_integer(x as i64)).collect(),
        )
        .expect("dimensions agree")
    }

    /// The integer vector whose residues form the modular syndrome condition:
    /// `F` itself over F2, `F_1 + 2 F_2` over F3.
    pub fn syndrome_weights(&self) -> Vec<i64> {
        (0..self.cols)
            .map(|i| (1..self.field.q()).map(|a| a as i64 * self.symbol(a, i) as i64).sum())
            .collect()
    }
}

impl fmt::Display for PseudoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows() {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn pseudocodeword_matrix(lab: &CoverLabeling) -> PseudoMatrix {
    let field = lab.cover.base.field();
    let mut f = PseudoMatrix::zeros(field, lab.labels.len());
    for (i, labels) in lab.labels.iter().enumerate() {
        for &x in labels {
            if x != 0 {
                let r = x as usize - 1;
                f.set(r, i, f.get(r, i) + 1);
            }
        }
    }
    f
}

/// `(1/M) F`, exactly.
pub fn normalize(f: &PseudoMatrix, degree: u64) -> Result<RationalMatrix> {
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    Ok(f.to_rational().scale(Rational64::new(1, degree as i64)))
}
