//! Reticular K tangent spaces, finite determinacy, P-K orbit tangents and
//! codimension.
//!
//! A corner germ `f0(x, y)` with `f0(0) = 0` is compared against the module
//! `<f0, x df0/dx>_E + M <df0/dy>`: full-ring coefficients on `f0` and the
//! Euler terms `x_i df0/dx_i`, maximal-ideal coefficients on the `y`
//! derivatives. The determinacy test is deliberately tri-state. The
//! sufficient inclusion
//! `M^{l+1} c M(<f0, x df0/dx> + M<df0/dy>) + M^{l+2}` certifies
//! `l`-determinacy; when it fails we can still refute determinacy by the
//! converse inclusion with full-ring coefficients, and otherwise the answer
//! at this order is genuinely unknown. The two inclusions do not coincide
//! and we do not pretend they do.

use crate::jetalg::{
    span_parts, JetError, JetPoly, Monomial, RingContext, SpanPart, SubspaceBasis, VarClass,
    DEFAULT_DIM_CAP,
};
use num::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum EquivalenceError {
    #[error("germ must vanish at the origin (constant term {0})")]
    NotAGerm(String),
    #[error("zero germ is degenerate for this operation")]
    ZeroGerm,
    #[error("expected a context with m = n = 0, got {0}")]
    BadContext(RingContext),
    #[error("expected a context with m = 0, got {0}")]
    TimeInContext(RingContext),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Tri-state outcome of a determinacy test at one order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeterminacyStatus {
    /// The sufficient inclusion holds: the germ is l-determined (or better).
    DeterminedAtMost(usize),
    /// The necessary inclusion fails: the germ is certainly not l-determined.
    NecessaryFailed(usize),
    /// Neither certificate applies at the tested order(s).
    Unknown(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminacyVerdict {
    pub order_tested: usize,
    pub status: DeterminacyStatus,
}

impl DeterminacyVerdict {
    pub fn determined_order(&self) -> Option<usize> {
        match self.status {
            DeterminacyStatus::DeterminedAtMost(l) => Some(l),
            _ => None,
        }
    }
}

fn require_germ(f0: &JetPoly) -> Result<(), EquivalenceError> {
    let c = f0.constant_term();
    if !c.is_zero() {
        return Err(EquivalenceError::NotAGerm(c.to_string()));
    }
    Ok(())
}

/// Euler terms `x_i * df/dx_i` for every corner variable.
pub(crate) fn euler_terms(f: &JetPoly) -> Result<Vec<JetPoly>, JetError> {
    let ctx = f.context();
    let mut out = Vec::with_capacity(ctx.r);
    for v in ctx.class_vars(VarClass::X) {
        let xv = JetPoly::variable(ctx, f.truncation(), v)?;
        out.push(xv.mul_truncated(&f.partial(v)?)?);
    }
    Ok(out)
}

pub(crate) fn y_partials(f: &JetPoly) -> Result<Vec<JetPoly>, JetError> {
    let ctx = f.context();
    ctx.class_vars(VarClass::Y)
        .into_iter()
        .map(|v| f.partial(v))
        .collect()
}

/// Tangent space of the reticular K orbit of `f0` in `J^L(r+k, 1)`:
/// `<f0, x df0/dx>_E(r;k) + M(r;k) <df0/dy>`, truncated at `L`.
pub fn reticular_k_tangent(f0: &JetPoly, l: usize) -> Result<SubspaceBasis, EquivalenceError> {
    let ctx = f0.context();
    if ctx.m != 0 || ctx.n != 0 {
        return Err(EquivalenceError::BadContext(ctx));
    }
    require_germ(f0)?;
    if f0.is_zero() {
        return Err(EquivalenceError::ZeroGerm);
    }
    let f = f0.retruncate(l);
    let mut full_ring = vec![f.clone()];
    full_ring.extend(euler_terms(&f)?);
    let parts = [
        SpanPart::new(full_ring, ctx.all_vars(), 0),
        SpanPart::new(y_partials(&f)?, ctx.all_vars(), 1),
    ];
    Ok(span_parts(ctx, l, &parts, DEFAULT_DIM_CAP)?)
}

/// Monomials of total degree exactly `d`.
fn monomials_of_degree(ctx: &RingContext, d: usize) -> Vec<Monomial> {
    let all: Vec<usize> = (0..ctx.vars()).collect();
    crate::jetalg::enumerate_monomials(ctx.vars(), &all, d, d)
}

fn all_contained(basis: &SubspaceBasis, monos: &[Monomial]) -> Result<bool, JetError> {
    let ctx = basis.context();
    for m in monos {
        let p = JetPoly::from_terms(
            ctx,
            basis.truncation(),
            [(m.clone(), num::BigRational::from_integer(1.into()))],
        );
        if !basis.reduce(&p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Test reticular K-l-determinacy of `f0`.
///
/// Computed exactly in `J^{l+1}`: truncation absorbs the `M^{l+2}` tail of
/// the sufficient inclusion, and a failure of the converse inclusion at
/// order `l+1` refutes determinacy outright.
pub fn is_k_l_determined(f0: &JetPoly, l: usize) -> Result<DeterminacyVerdict, EquivalenceError> {
    let ctx = f0.context();
    if ctx.m != 0 || ctx.n != 0 {
        return Err(EquivalenceError::BadContext(ctx));
    }
    require_germ(f0)?;
    if f0.is_zero() {
        // The zero germ spans nothing: no order ever suffices.
        return Ok(DeterminacyVerdict {
            order_tested: l,
            status: DeterminacyStatus::NecessaryFailed(l),
        });
    }
    let work = l + 1;
    let f = f0.retruncate(work);
    let targets = monomials_of_degree(&ctx, work);

    let mut full_ring = vec![f.clone()];
    full_ring.extend(euler_terms(&f)?);
    let partials = y_partials(&f)?;

    // Sufficient: M(<f0, x df0/dx> + M<df0/dy>) = M<f0, x df0/dx> + M^2<df0/dy>.
    let suff = span_parts(
        ctx,
        work,
        &[
            SpanPart::new(full_ring.clone(), ctx.all_vars(), 1),
            SpanPart::new(partials.clone(), ctx.all_vars(), 2),
        ],
        DEFAULT_DIM_CAP,
    )?;
    if all_contained(&suff, &targets)? {
        return Ok(DeterminacyVerdict {
            order_tested: l,
            status: DeterminacyStatus::DeterminedAtMost(l),
        });
    }

    // Necessary: <f0, x df0/dx>_E + M<df0/dy>.
    let nec = span_parts(
        ctx,
        work,
        &[
            SpanPart::new(full_ring, ctx.all_vars(), 0),
            SpanPart::new(partials, ctx.all_vars(), 1),
        ],
        DEFAULT_DIM_CAP,
    )?;
    if !all_contained(&nec, &targets)? {
        Ok(DeterminacyVerdict { order_tested: l, status: DeterminacyStatus::NecessaryFailed(l) })
    } else {
        Ok(DeterminacyVerdict { order_tested: l, status: DeterminacyStatus::Unknown(l) })
    }
}

pub const DEFAULT_L_MAX: usize = 12;

/// Smallest order certified by the sufficient test, scanning `l = 1..l_max`.
///
/// Rejects the zero germ and units outright: their determinacy question is
/// ill-posed for this scan.
pub fn determinacy_order(
    f0: &JetPoly,
    l_max: usize,
) -> Result<DeterminacyVerdict, EquivalenceError> {
    require_germ(f0)?;
    if f0.is_zero() {
        return Err(EquivalenceError::ZeroGerm);
    }
    for l in 1..=l_max {
        let v = is_k_l_determined(f0, l)?;
        if matches!(v.status, DeterminacyStatus::DeterminedAtMost(_)) {
            return Ok(v);
        }
    }
    Ok(DeterminacyVerdict { order_tested: l_max, status: DeterminacyStatus::Unknown(l_max) })
}

/// Tangent space of the reticular P-K orbit of `f(x, y, u)` in
/// `J^L(r+k+n, 1)`:
/// `<f, x df/dx>_E(r;k+n) + M(r;k+n)<df/dy> + M(n)<df/du>`.
pub fn reticular_pk_orbit_tangent(
    f: &JetPoly,
    l: usize,
) -> Result<SubspaceBasis, EquivalenceError> {
    let ctx = f.context();
    if ctx.m != 0 {
        return Err(EquivalenceError::TimeInContext(ctx));
    }
    require_germ(f)?;
    let f = f.retruncate(l);
    let mut full_ring = vec![f.clone()];
    full_ring.extend(euler_terms(&f)?);
    let u_partials: Vec<JetPoly> = ctx
        .class_vars(VarClass::U)
        .into_iter()
        .map(|v| f.partial(v))
        .collect::<Result<_, _>>()?;
    let parts = [
        SpanPart::new(full_ring, ctx.all_vars(), 0),
        SpanPart::new(y_partials(&f)?, ctx.all_vars(), 1),
        SpanPart::new(u_partials, ctx.class_vars(VarClass::U), 1),
    ];
    Ok(span_parts(ctx, l, &parts, DEFAULT_DIM_CAP)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct KCodimension {
    pub dim: usize,
    pub cobasis: Vec<String>,
    /// True when no cobasis monomial has degree >= L-1, a heuristic flag
    /// that the count no longer depends on the truncation order.
    pub stabilized: bool,
}

/// Dimension of `J^L` modulo the reticular K tangent space of `f0`.
pub fn k_codimension(f0: &JetPoly, l: usize) -> Result<KCodimension, EquivalenceError> {
    let basis = reticular_k_tangent(f0, l)?;
    let ctx = f0.context();
    let cobasis = basis.quotient_cobasis();
    let stabilized = !cobasis.iter().any(|m| m.degree() + 1 >= l);
    Ok(KCodimension {
        dim: cobasis.len(),
        cobasis: cobasis.iter().map(|m| m.render(&ctx)).collect(),
        stabilized,
    })
}

/// Hilbert-style sequence of the K tangent space: entry `i` is
/// `dim (M^i + T) / (M^{i+1} + T)`, computed as the difference of cokernel
/// dimensions of the tangent space at truncations `i` and `i-1`.
pub fn tangent_hilbert_sequence(f0: &JetPoly, l: usize) -> Result<Vec<usize>, EquivalenceError> {
    let mut dims = Vec::with_capacity(l + 1);
    let mut prev = 0usize;
    for i in 0..=l {
        let basis = reticular_k_tangent(&f0.retruncate(i), i)?;
        let q = basis.codim();
        dims.push(q - prev);
        prev = q;
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetalg::JetPoly;

    fn germ(s: &str, r: usize, k: usize, l: usize) -> JetPoly {
        let ctx = RingContext::new(r, k, 0, 0);
        JetPoly::parse(s, &ctx, l).unwrap()
    }

    #[test]
    fn tangent_of_x_cubed_is_the_ideal() {
        let f = germ("x^3", 1, 0, 5);
        let basis = reticular_k_tangent(&f, 5).unwrap();
        let pivots: Vec<String> =
            basis.pivots().iter().map(|m| m.render(&f.context())).collect();
        assert_eq!(pivots, vec!["x1^3", "x1^4", "x1^5"]);
    }

    #[test]
    fn tangent_of_y_squared() {
        let f = germ("y^2", 0, 1, 4);
        let basis = reticular_k_tangent(&f, 4).unwrap();
        let pivots: Vec<String> =
            basis.pivots().iter().map(|m| m.render(&f.context())).collect();
        assert_eq!(pivots, vec!["y1^2", "y1^3", "y1^4"]);
    }

    #[test]
    fn tangent_of_corner_cusp_contains_required_elements() {
        // f0 = xy + y^3 (r=1, k=1): the tangent must contain x*y (the Euler
        // term) and y*(x + 3y^2) (a maximal-ideal multiple of df/dy).
        let f = germ("x*y + y^3", 1, 1, 4);
        let ctx = f.context();
        let basis = reticular_k_tangent(&f, 4).unwrap();
        let xy = JetPoly::parse("x*y", &ctx, 4).unwrap();
        assert!(basis.contains(&xy).unwrap().contained);
        let w = JetPoly::parse("y*(x + 3*y^2)", &ctx, 4).unwrap();
        assert!(basis.contains(&w).unwrap().contained);
    }

    #[test]
    fn determinacy_of_x_cubed() {
        let f = germ("x^3", 1, 0, 6);
        let v2 = is_k_l_determined(&f, 2).unwrap();
        assert_eq!(v2.status, DeterminacyStatus::Unknown(2));
        let v3 = is_k_l_determined(&f, 3).unwrap();
        assert_eq!(v3.status, DeterminacyStatus::DeterminedAtMost(3));
        let order = determinacy_order(&f, 12).unwrap();
        assert_eq!(order.determined_order(), Some(3));
    }

    #[test]
    fn zero_germ_fails_necessarily() {
        let ctx = RingContext::new(1, 0, 0, 0);
        let f = JetPoly::zero(ctx, 4);
        let v = is_k_l_determined(&f, 3).unwrap();
        assert_eq!(v.status, DeterminacyStatus::NecessaryFailed(3));
        assert!(determinacy_order(&f, 12).is_err());
    }

    #[test]
    fn unit_is_rejected() {
        let f = germ("1 + x", 1, 0, 4);
        assert!(is_k_l_determined(&f, 2).is_err());
        assert!(reticular_k_tangent(&f, 4).is_err());
    }

    #[test]
    fn determinacy_of_y_cubed() {
        let f = germ("y^3", 0, 1, 6);
        let v = is_k_l_determined(&f, 3).unwrap();
        assert_eq!(v.status, DeterminacyStatus::DeterminedAtMost(3));
        assert_eq!(determinacy_order(&f, 12).unwrap().determined_order(), Some(3));
    }

    #[test]
    fn determinacy_of_d4_minus() {
        let f = germ("y1^2*y2 - y2^3", 0, 2, 6);
        assert_eq!(determinacy_order(&f, 12).unwrap().determined_order(), Some(3));
    }

    #[test]
    fn monotone_in_order() {
        for s in ["x^3", "x^4"] {
            let f = germ(s, 1, 0, 8);
            let first = determinacy_order(&f, 12).unwrap().determined_order().unwrap();
            for l in first..=7 {
                let v = is_k_l_determined(&f, l).unwrap();
                assert_eq!(v.status, DeterminacyStatus::DeterminedAtMost(l), "order {}", l);
            }
        }
    }

    #[test]
    fn pk_orbit_tangent_examples() {
        // f = y^3 + u1*y: tangent contains u1*(3y^2 + u1) and all of <f>.
        let ctx = RingContext::new(0, 1, 0, 1);
        let f = JetPoly::parse("y^3 + u1*y", &ctx, 4).unwrap();
        let basis = reticular_pk_orbit_tangent(&f, 4).unwrap();
        let w = JetPoly::parse("u1*(3*y^2 + u1)", &ctx, 4).unwrap();
        assert!(basis.contains(&w).unwrap().contained);
        let fy = JetPoly::parse("y*(y^3 + u1*y)", &ctx, 4).unwrap();
        assert!(basis.contains(&fy).unwrap().contained);

        // f = x^2 with an unused parameter: the du part contributes nothing.
        let ctx = RingContext::new(1, 0, 0, 1);
        let f = JetPoly::parse("x^2", &ctx, 4).unwrap();
        let basis = reticular_pk_orbit_tangent(&f, 4).unwrap();
        let u = JetPoly::parse("u1", &ctx, 4).unwrap();
        assert!(!basis.contains(&u).unwrap().contained);

        // f = y^2 + u1: M(n)<df/du> = {u1, u1^2, ...}.
        let ctx = RingContext::new(0, 1, 0, 1);
        let f = JetPoly::parse("y^2 + u1", &ctx, 4).unwrap();
        let basis = reticular_pk_orbit_tangent(&f, 4).unwrap();
        for s in ["u1", "u1^2", "u1^3"] {
            let p = JetPoly::parse(s, &ctx, 4).unwrap();
            assert!(basis.contains(&p).unwrap().contained, "{}", s);
        }
    }

    #[test]
    fn codimension_examples() {
        let f = germ("x^3", 1, 0, 6);
        let c = k_codimension(&f, 6).unwrap();
        assert_eq!(c.dim, 3);
        assert_eq!(c.cobasis, vec!["1", "x1", "x1^2"]);
        assert!(c.stabilized);

        let f = germ("y^3", 0, 1, 6);
        let c = k_codimension(&f, 6).unwrap();
        assert_eq!(c.dim, 3);
        assert_eq!(c.cobasis, vec!["1", "y1", "y1^2"]);

        // y1^3 with a second internal variable never stabilizes: the pure
        // y2 powers are never absorbed.
        let f = germ("y1^3", 0, 2, 7);
        let c = k_codimension(&f, 7).unwrap();
        assert!(!c.stabilized);
    }

    #[test]
    fn hilbert_sequence_of_d4() {
        let f = germ("y1^2*y2 + y2^3", 0, 2, 6);
        let h = tangent_hilbert_sequence(&f, 6).unwrap();
        assert_eq!(h, vec![1, 2, 3, 0, 0, 0, 0]);
        let f = germ("y1^2*y2 - y2^3", 0, 2, 6);
        assert_eq!(tangent_hilbert_sequence(&f, 6).unwrap(), h);
    }
}
