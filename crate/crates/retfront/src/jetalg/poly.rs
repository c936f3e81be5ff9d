use super::{JetError, RingContext, Var, VarClass};
use num::{BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector over the variables of a [`RingContext`], in global order.
///
/// Ordering is graded lexicographic: total degree first, ties broken by the
/// exponent of the latest variable that differs (so `x < y < t < u`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn from_exps(exps: Vec<u16>) -> Monomial {
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, pos: usize) -> u16 {
        self.exps[pos]
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Exponents projected onto a subset of positions kept, others dropped.
    pub fn project(&self, keep: &[usize]) -> Monomial {
        Monomial { exps: keep.iter().map(|&p| self.exps[p]).collect() }
    }

    pub fn render(&self, ctx: &RingContext) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (pos, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = ctx.var_name(ctx.var_at(pos));
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{}^{}", name, e));
            }
        }
        parts.join("*")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..self.exps.len()).rev() {
                match self.exps[i].cmp(&other.exps[i]) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

/// Enumerate all monomials over `positions` (subset of global positions,
/// total `nvars` variables) with total degree in `[min_deg, max_deg]`,
/// sorted ascending in the monomial order.
pub(crate) fn enumerate_monomials(
    nvars: usize,
    positions: &[usize],
    min_deg: usize,
    max_deg: usize,
) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn rec(
        positions: &[usize],
        at: usize,
        remaining: usize,
        exps: &mut Vec<u16>,
        min_deg: usize,
        max_deg: usize,
        out: &mut Vec<Monomial>,
    ) {
        if at == positions.len() {
            let deg = max_deg - remaining;
            if deg >= min_deg {
                out.push(Monomial::from_exps(exps.clone()));
            }
            return;
        }
        for e in 0..=remaining {
            exps[positions[at]] = e as u16;
            rec(positions, at + 1, remaining - e, exps, min_deg, max_deg, out);
        }
        exps[positions[at]] = 0;
    }
    rec(positions, 0, max_deg, &mut exps, min_deg, max_deg, &mut out);
    out.sort();
    out
}

/// A truncated polynomial: the `L`-jet of a germ, with exact rational
/// coefficients. Terms of total degree above the truncation order are
/// identically absent; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetPoly {
    ctx: RingContext,
    trunc: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl JetPoly {
    pub fn zero(ctx: RingContext, trunc: usize) -> JetPoly {
        JetPoly { ctx, trunc, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: RingContext, trunc: usize, c: BigRational) -> JetPoly {
        let mut p = JetPoly::zero(ctx, trunc);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.vars()), c);
        }
        p
    }

    pub fn one(ctx: RingContext, trunc: usize) -> JetPoly {
        JetPoly::constant(ctx, trunc, BigRational::one())
    }

    pub fn variable(ctx: RingContext, trunc: usize, v: Var) -> Result<JetPoly, JetError> {
        let pos = ctx.position(v)?;
        let mut p = JetPoly::zero(ctx, trunc);
        if trunc >= 1 {
            let mut exps = vec![0u16; ctx.vars()];
            exps[pos] = 1;
            p.terms.insert(Monomial::from_exps(exps), BigRational::one());
        }
        Ok(p)
    }

    pub fn from_terms<I>(ctx: RingContext, trunc: usize, it: I) -> JetPoly
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = JetPoly::zero(ctx, trunc);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn context(&self) -> RingContext {
        self.ctx
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Monomial, BigRational> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Monomial::one(self.ctx.vars()))
    }

    /// Coefficient of the degree-1 monomial in `v`.
    pub fn linear_coeff(&self, v: Var) -> Result<BigRational, JetError> {
        let pos = self.ctx.position(v)?;
        let mut exps = vec![0u16; self.ctx.vars()];
        exps[pos] = 1;
        Ok(self.coeff(&Monomial::from_exps(exps)))
    }

    /// Lowest total degree among stored terms (`None` for the zero jet).
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// Highest total degree among stored terms.
    pub fn top_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() || m.degree() > self.trunc {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_compat(&self, other: &JetPoly) -> Result<(), JetError> {
        if self.ctx != other.ctx {
            return Err(JetError::ContextMismatch(self.ctx, other.ctx));
        }
        if self.trunc != other.trunc {
            return Err(JetError::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn add(&self, other: &JetPoly) -> Result<JetPoly, JetError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &JetPoly) -> Result<JetPoly, JetError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> JetPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> JetPoly {
        if s.is_zero() {
            return JetPoly::zero(self.ctx, self.trunc);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * s;
        }
        out
    }

    /// Truncated product: terms of total degree above the truncation order
    /// are discarded.
    pub fn mul_truncated(&self, other: &JetPoly) -> Result<JetPoly, JetError> {
        self.check_compat(other)?;
        let mut out = JetPoly::zero(self.ctx, self.trunc);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > self.trunc {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiply by a bare monomial, truncating.
    pub fn mul_monomial(&self, m: &Monomial) -> JetPoly {
        let md = m.degree();
        let mut out = JetPoly::zero(self.ctx, self.trunc);
        for (ma, ca) in &self.terms {
            if ma.degree() + md > self.trunc {
                continue;
            }
            out.terms.insert(ma.mul(m), ca.clone());
        }
        out
    }

    /// Formal partial derivative. The result is kept at the same truncation
    /// order; degree-`L` terms of the derivative (which would come from
    /// degree-`L+1` terms of the jet) are absent.
    pub fn partial(&self, v: Var) -> Result<JetPoly, JetError> {
        let pos = self.ctx.position(v)?;
        let mut out = JetPoly::zero(self.ctx, self.trunc);
        for (m, c) in &self.terms {
            let e = m.exp(pos);
            if e == 0 {
                continue;
            }
            let mut exps: Vec<u16> = (0..m.nvars()).map(|p| m.exp(p)).collect();
            exps[pos] = e - 1;
            out.add_term(Monomial::from_exps(exps), c * BigRational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Drop terms above a new truncation order (or widen without new terms).
    pub fn retruncate(&self, trunc: usize) -> JetPoly {
        let mut out = JetPoly::zero(self.ctx, trunc);
        for (m, c) in &self.terms {
            if m.degree() <= trunc {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Substitute 0 for every variable of `class` and remove the class from
    /// the context (e.g. restricting an unfolding to `t = 0`).
    pub fn restrict_zero(&self, class: VarClass) -> JetPoly {
        let target = self.ctx.without(class);
        let keep: Vec<usize> = (0..self.ctx.vars())
            .filter(|&p| self.ctx.var_at(p).class != class)
            .collect();
        let drop: Vec<usize> = (0..self.ctx.vars())
            .filter(|&p| self.ctx.var_at(p).class == class)
            .collect();
        let mut out = JetPoly::zero(target, self.trunc);
        for (m, c) in &self.terms {
            if drop.iter().any(|&p| m.exp(p) > 0) {
                continue;
            }
            out.terms.insert(m.project(&keep), c.clone());
        }
        out
    }

    /// Compose with a substitution sending each variable to a jet in a
    /// common target context. Every image must vanish at the origin, which
    /// keeps truncation exact.
    pub fn compose(&self, images: &[JetPoly]) -> Result<JetPoly, JetError> {
        if images.len() != self.ctx.vars() {
            return Err(JetError::Invalid(format!(
                "compose: expected {} images, got {}",
                self.ctx.vars(),
                images.len()
            )));
        }
        if images.is_empty() {
            let ctx = RingContext::new(0, 0, 0, 0);
            return Ok(JetPoly::constant(ctx, self.trunc, self.constant_term()));
        }
        let tctx = images[0].ctx;
        let trunc = images[0].trunc;
        for im in images {
            if im.ctx != tctx {
                return Err(JetError::ContextMismatch(im.ctx, tctx));
            }
            if im.trunc != trunc {
                return Err(JetError::TruncationMismatch(im.trunc, trunc));
            }
            if !im.constant_term().is_zero() {
                return Err(JetError::Invalid(
                    "compose: substitution image has nonzero constant term".into(),
                ));
            }
        }
        // Memoized powers of each image.
        let mut powers: Vec<Vec<JetPoly>> =
            images.iter().map(|im| vec![JetPoly::one(tctx, trunc), im.clone()]).collect();
        let mut out = JetPoly::zero(tctx, trunc);
        for (m, c) in &self.terms {
            let mut term = JetPoly::constant(tctx, trunc, c.clone());
            for pos in 0..m.nvars() {
                let e = m.exp(pos) as usize;
                if e == 0 {
                    continue;
                }
                while powers[pos].len() <= e {
                    let last = powers[pos].last().unwrap();
                    let next = last.mul_truncated(&images[pos])?;
                    powers[pos].push(next);
                }
                term = term.mul_truncated(&powers[pos][e])?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at a point, in floating point. `vals` is indexed by global
    /// variable position.
    pub fn eval_f64(&self, vals: &[f64]) -> f64 {
        assert_eq!(vals.len(), self.ctx.vars());
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for pos in 0..m.nvars() {
                for _ in 0..m.exp(pos) {
                    t *= vals[pos];
                }
            }
            acc += t;
        }
        acc
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    bigint_to_f64(c.numer()) / bigint_to_f64(c.denom())
}

fn bigint_to_f64(v: &num::BigInt) -> f64 {
    use num::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m.render(&self.ctx))?;
            } else {
                write!(f, "{}*{}", abs, m.render(&self.ctx))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn mul_truncated_examples() {
        // (1 + x)(1 - x) at L=2 -> 1 - x^2
        let ctx = RingContext::new(1, 0, 0, 0);
        let x = JetPoly::variable(ctx, 2, Var::x(0)).unwrap();
        let one = JetPoly::one(ctx, 2);
        let a = one.add(&x).unwrap();
        let b = one.sub(&x).unwrap();
        let p = a.mul_truncated(&b).unwrap();
        let expect = one.sub(&x.mul_truncated(&x).unwrap()).unwrap();
        assert_eq!(p, expect);

        // x^2 * x^2 at L=3 -> 0
        let x2 = JetPoly::variable(ctx, 3, Var::x(0))
            .unwrap()
            .mul_truncated(&JetPoly::variable(ctx, 3, Var::x(0)).unwrap())
            .unwrap();
        assert!(x2.mul_truncated(&x2).unwrap().is_zero());

        // (y + y^2)^2 at L=3 -> y^2 + 2 y^3
        let ctx = RingContext::new(0, 1, 0, 0);
        let y = JetPoly::variable(ctx, 3, Var::y(0)).unwrap();
        let y2 = y.mul_truncated(&y).unwrap();
        let s = y.add(&y2).unwrap();
        let p = s.mul_truncated(&s).unwrap();
        let expect = y2.add(&y2.mul_truncated(&y).unwrap().scale(&rat(2))).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn partial_examples() {
        let ctx = RingContext::new(0, 1, 0, 0);
        let p = crate::jetalg::text::parse_poly("y^3", &ctx, 4).unwrap();
        assert_eq!(p.partial(Var::y(0)).unwrap().to_string(), "3*y1^2");

        let ctx = RingContext::new(1, 0, 1, 0);
        let p = crate::jetalg::text::parse_poly("x^3 + t*x^2", &ctx, 4).unwrap();
        let px = p.partial(Var::x(0)).unwrap();
        assert_eq!(px.to_string(), "2*x1*t1 + 3*x1^2");

        // Euler-type term x * d/dx (x^3) = 3 x^3
        let ctx = RingContext::new(1, 0, 0, 0);
        let p = crate::jetalg::text::parse_poly("x^3", &ctx, 4).unwrap();
        let x = JetPoly::variable(ctx, 4, Var::x(0)).unwrap();
        let e = x.mul_truncated(&p.partial(Var::x(0)).unwrap()).unwrap();
        assert_eq!(e.to_string(), "3*x1^3");
    }

    #[test]
    fn restrict_zero_drops_class() {
        let ctx = RingContext::new(1, 0, 1, 1);
        let p = crate::jetalg::text::parse_poly("x^3 + t*x^2 + u1*x", &ctx, 4).unwrap();
        let q = p.restrict_zero(VarClass::T);
        assert_eq!(q.context(), RingContext::new(1, 0, 0, 1));
        assert_eq!(q.to_string(), "x1^3 + x1*u1");
    }

    #[test]
    fn compose_linear_change() {
        // f = y^2 under y -> 2y gives 4y^2.
        let ctx = RingContext::new(0, 1, 0, 0);
        let f = crate::jetalg::text::parse_poly("y^2", &ctx, 4).unwrap();
        let img = JetPoly::variable(ctx, 4, Var::y(0)).unwrap().scale(&rat(2));
        let g = f.compose(&[img]).unwrap();
        assert_eq!(g.to_string(), "4*y1^2");
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::from_exps(vec![2, 0]); // x^2
        let b = Monomial::from_exps(vec![0, 1]); // y
        assert!(a > b);
        let c = Monomial::from_exps(vec![1, 1]); // xy
        let d = Monomial::from_exps(vec![0, 2]); // y^2
        assert!(d > c);
        assert!(c > a);
    }
}
