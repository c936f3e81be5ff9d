use super::poly::{enumerate_monomials, JetPoly, Monomial};
use super::{JetError, RingContext, Var, DEFAULT_DIM_CAP};
use num::{BigRational, Zero};
use std::collections::HashMap;

/// All monomials of degree <= trunc in a context, sorted ascending, with a
/// reverse index. The central working set for span construction.
pub(crate) struct MonomialTable {
    pub monos: Vec<Monomial>,
    pub index: HashMap<Monomial, u32>,
}

impl MonomialTable {
    pub fn new(ctx: &RingContext, trunc: usize, cap: usize) -> Result<MonomialTable, JetError> {
        let dim = ctx.jet_dim(trunc);
        if dim > cap {
            return Err(JetError::DimensionCap { dim, cap, ctx: *ctx, order: trunc });
        }
        let all: Vec<usize> = (0..ctx.vars()).collect();
        let monos = enumerate_monomials(ctx.vars(), &all, 0, trunc);
        debug_assert_eq!(monos.len(), dim);
        let index = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        Ok(MonomialTable { monos, index })
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }
}

/// Sparse vector over table ranks, sorted descending (leading entry first).
type SparseRow = Vec<(u32, BigRational)>;

fn row_of_poly(p: &JetPoly, table: &MonomialTable) -> SparseRow {
    let mut row: SparseRow = p
        .terms()
        .map(|(m, c)| (*table.index.get(m).expect("monomial within truncation"), c.clone()))
        .collect();
    row.sort_by(|a, b| b.0.cmp(&a.0));
    row
}

/// dst -= c * src, both sorted descending.
fn row_axpy(dst: &SparseRow, c: &BigRational, src: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j == src.len() || (i < dst.len() && dst[i].0 > src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i == dst.len() || src[j].0 > dst[i].0 {
            let v = -(c * &src[j].1);
            if !v.is_zero() {
                out.push((src[j].0, v));
            }
            j += 1;
        } else {
            let v = &dst[i].1 - &(c * &src[j].1);
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row-echelon accumulator keyed by pivot rank. Rows are kept
/// with leading coefficient 1 but are only back-substituted at finalize.
struct EchelonBuilder<'t> {
    table: &'t MonomialTable,
    rows: HashMap<u32, SparseRow>,
}

impl<'t> EchelonBuilder<'t> {
    fn new(table: &'t MonomialTable) -> Self {
        EchelonBuilder { table, rows: HashMap::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduce a row against current pivots.
    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            // Largest entry whose rank is pivoted.
            let hit = row
                .iter()
                .enumerate()
                .find(|(_, (rank, _))| self.rows.contains_key(rank))
                .map(|(i, (rank, _))| (i, *rank));
            match hit {
                None => return row,
                Some((i, rank)) => {
                    let c = row[i].1.clone();
                    let pivot_row = &self.rows[&rank];
                    row = row_axpy(&row, &c, pivot_row);
                }
            }
        }
    }

    /// Reduce and, when nonzero remains, record a new pivot. Returns true if
    /// the rank grew.
    fn insert(&mut self, row: SparseRow) -> bool {
        let red = self.reduce(row);
        if red.is_empty() {
            return false;
        }
        let lead = red[0].0;
        let inv = red[0].1.clone();
        let normalized: SparseRow = red
            .into_iter()
            .map(|(r, c)| (r, c / &inv))
            .collect();
        self.rows.insert(lead, normalized);
        true
    }

    /// Back-substitute into reduced row echelon form and convert to polys.
    fn finalize(self, ctx: RingContext, trunc: usize) -> SubspaceBasis {
        let mut pivot_ranks: Vec<u32> = self.rows.keys().copied().collect();
        pivot_ranks.sort_unstable();
        let mut reduced: HashMap<u32, SparseRow> = HashMap::with_capacity(self.rows.len());
        for &p in &pivot_ranks {
            let mut row = self.rows[&p].clone();
            // Tail entries are strictly below the lead; rows with smaller
            // pivots are fully reduced already, so one pass suffices.
            loop {
                let hit = row
                    .iter()
                    .skip(1)
                    .find(|(rank, _)| reduced.contains_key(rank))
                    .map(|(rank, c)| (*rank, c.clone()));
                match hit {
                    None => break,
                    Some((rank, c)) => {
                        row = row_axpy(&row, &c, &reduced[&rank]);
                    }
                }
            }
            reduced.insert(p, row);
        }
        let rows: Vec<JetPoly> = pivot_ranks
            .iter()
            .map(|p| {
                JetPoly::from_terms(
                    ctx,
                    trunc,
                    reduced[p]
                        .iter()
                        .map(|(rank, c)| (self.table.monos[*rank as usize].clone(), c.clone())),
                )
            })
            .collect();
        let pivots: Vec<Monomial> = pivot_ranks
            .iter()
            .map(|p| self.table.monos[*p as usize].clone())
            .collect();
        let pivot_index = pivots
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        SubspaceBasis { ctx, trunc, rows, pivots, pivot_index }
    }
}

/// One block of a module presentation: generators multiplied by all
/// monomials in `multiplier_vars` of degree at least `min_degree`.
///
/// `min_degree = 0` realizes subring coefficients, `min_degree = 1` a
/// maximal-ideal coefficient module; an empty `multiplier_vars` with
/// `min_degree = 0` contributes the bare generators (constant coefficients).
#[derive(Clone)]
pub struct SpanPart {
    pub generators: Vec<JetPoly>,
    pub multiplier_vars: Vec<Var>,
    pub min_degree: usize,
}

impl SpanPart {
    pub fn new(generators: Vec<JetPoly>, multiplier_vars: Vec<Var>, min_degree: usize) -> Self {
        SpanPart { generators, multiplier_vars, min_degree }
    }
}

/// Reduced basis of a linear subspace of a jet space.
///
/// Rows are in reduced row echelon form under the graded lexicographic
/// order, sorted by strictly increasing pivot monomial; membership is a
/// single reduction pass.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    ctx: RingContext,
    trunc: usize,
    rows: Vec<JetPoly>,
    pivots: Vec<Monomial>,
    pivot_index: HashMap<Monomial, usize>,
}

/// Result of a membership test against a [`SubspaceBasis`].
#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub contained: bool,
    /// Reduction remainder; zero exactly when contained.
    pub residue: JetPoly,
    /// Monomials of degree <= L that are not pivots: a basis of the
    /// cokernel.
    pub cobasis: Vec<Monomial>,
}

impl SubspaceBasis {
    pub fn empty(ctx: RingContext, trunc: usize) -> SubspaceBasis {
        SubspaceBasis { ctx, trunc, rows: Vec::new(), pivots: Vec::new(), pivot_index: HashMap::new() }
    }

    pub fn context(&self) -> RingContext {
        self.ctx
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    pub fn rows(&self) -> &[JetPoly] {
        &self.rows
    }

    pub fn pivots(&self) -> &[Monomial] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Whether the span is the whole jet space.
    pub fn is_full(&self) -> bool {
        self.rank() == self.ctx.jet_dim(self.trunc)
    }

    fn check_compat(&self, p: &JetPoly) -> Result<(), JetError> {
        if p.context() != self.ctx {
            return Err(JetError::ContextMismatch(p.context(), self.ctx));
        }
        if p.truncation() != self.trunc {
            return Err(JetError::TruncationMismatch(p.truncation(), self.trunc));
        }
        Ok(())
    }

    /// Reduce a jet against the basis; the remainder has no pivot monomials.
    pub fn reduce(&self, p: &JetPoly) -> Result<JetPoly, JetError> {
        self.check_compat(p)?;
        let mut residue = p.clone();
        loop {
            let hit = residue
                .terms()
                .rev()
                .find(|(m, _)| self.pivot_index.contains_key(*m))
                .map(|(m, c)| (m.clone(), c.clone()));
            match hit {
                None => return Ok(residue),
                Some((m, c)) => {
                    let row = &self.rows[self.pivot_index[&m]];
                    residue = residue.sub(&row.scale(&c))?;
                }
            }
        }
    }

    /// Exact membership test with residue and cokernel basis.
    pub fn contains(&self, p: &JetPoly) -> Result<MembershipReport, JetError> {
        let residue = self.reduce(p)?;
        Ok(MembershipReport {
            contained: residue.is_zero(),
            residue,
            cobasis: self.quotient_cobasis(),
        })
    }

    /// All monomials of degree <= L that are not pivots; their count is
    /// dim(J^L / span).
    pub fn quotient_cobasis(&self) -> Vec<Monomial> {
        let all: Vec<usize> = (0..self.ctx.vars()).collect();
        enumerate_monomials(self.ctx.vars(), &all, 0, self.trunc)
            .into_iter()
            .filter(|m| !self.pivot_index.contains_key(m))
            .collect()
    }

    /// dim(J^L / span) without materializing the cobasis.
    pub fn codim(&self) -> usize {
        self.ctx.jet_dim(self.trunc) - self.rank()
    }
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.trunc == other.trunc && self.rows == other.rows
    }
}

/// Row-reduced span of several module blocks, truncated at `trunc`.
///
/// The result is exactly the image under truncation of the module generated
/// by the parts: any germ coefficient decomposes into monomial multipliers,
/// and multipliers of degree above `trunc - ord(g)` only produce discarded
/// terms.
pub fn span_parts(
    ctx: RingContext,
    trunc: usize,
    parts: &[SpanPart],
    cap: usize,
) -> Result<SubspaceBasis, JetError> {
    let table = MonomialTable::new(&ctx, trunc, cap)?;
    let dim = table.len();
    let mut builder = EchelonBuilder::new(&table);

    for part in parts {
        for g in &part.generators {
            if g.context() != ctx {
                return Err(JetError::ContextMismatch(g.context(), ctx));
            }
            if g.truncation() != trunc {
                return Err(JetError::TruncationMismatch(g.truncation(), trunc));
            }
        }
    }

    // Single-term generators with monomial multipliers yield unit rows;
    // feed those first so later reductions are short.
    let mut phases: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (pi, part) in parts.iter().enumerate() {
        for (gi, g) in part.generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let phase = if g.num_terms() == 1 { 0 } else { 1 };
            phases[phase].push((pi, gi));
        }
    }

    'outer: for phase in &phases {
        for &(pi, gi) in phase {
            let part = &parts[pi];
            let g = &part.generators[gi];
            let ord = g.order().unwrap_or(trunc + 1);
            if ord > trunc {
                continue;
            }
            let mut positions: Vec<usize> = part
                .multiplier_vars
                .iter()
                .map(|v| ctx.position(*v))
                .collect::<Result<_, _>>()?;
            positions.sort_unstable();
            positions.dedup();
            let max_mult_deg = trunc - ord;
            if part.min_degree > max_mult_deg {
                continue;
            }
            let multipliers =
                enumerate_monomials(ctx.vars(), &positions, part.min_degree, max_mult_deg);
            for mu in &multipliers {
                let prod = g.mul_monomial(mu);
                if prod.is_zero() {
                    continue;
                }
                let row = row_of_poly(&prod, &table);
                builder.insert(row);
                if builder.rank() == dim {
                    break 'outer;
                }
            }
        }
    }

    Ok(builder.finalize(ctx, trunc))
}

/// Row-reduced span of `{ g * mu }` over monomial multipliers `mu` in
/// `multiplier_vars` with degree at least `min_degree`, truncated at `trunc`.
pub fn module_span(
    generators: &[JetPoly],
    multiplier_vars: &[Var],
    min_degree: usize,
    trunc: usize,
) -> Result<SubspaceBasis, JetError> {
    let ctx = match generators.first() {
        Some(g) => g.context(),
        None => return Ok(SubspaceBasis::empty(RingContext::new(0, 0, 0, 0), trunc)),
    };
    span_parts(
        ctx,
        trunc,
        &[SpanPart::new(generators.to_vec(), multiplier_vars.to_vec(), min_degree)],
        DEFAULT_DIM_CAP,
    )
}
