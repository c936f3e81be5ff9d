//! Exact truncated local-ring arithmetic and linear algebra over jet spaces.
//!
//! Germs live in rings `E(r; k+m+n)` of functions of corner variables
//! `x1..xr`, internal variables `y1..yk`, time variables `t1..tm` and
//! parameters `u1..un`. A germ is represented by its jet of some order `L`:
//! a sparse polynomial over exact rationals with every term of total degree
//! at most `L`. Linear subspaces of a jet space are kept in reduced row
//! echelon form under the graded lexicographic monomial order, which makes
//! membership and cokernel questions a single reduction pass.

mod poly;
mod span;
mod text;

pub use poly::{JetPoly, Monomial};
pub(crate) use poly::enumerate_monomials;
pub use span::{module_span, span_parts, MembershipReport, SpanPart, SubspaceBasis};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Default cap on the dimension of any jet space we materialize.
pub const DEFAULT_DIM_CAP: usize = 200_000;

/// Which block of the variable partition a variable belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarClass {
    /// Corner variables `x1..xr`, constrained to `x >= 0`.
    X,
    /// Internal variables `y1..yk`.
    Y,
    /// Time variables `t1..tm`.
    T,
    /// Parameter variables `u1..un`.
    U,
}

impl VarClass {
    pub const ALL: [VarClass; 4] = [VarClass::X, VarClass::Y, VarClass::T, VarClass::U];

    fn letter(self) -> char {
        match self {
            VarClass::X => 'x',
            VarClass::Y => 'y',
            VarClass::T => 't',
            VarClass::U => 'u',
        }
    }
}

/// A single variable: class plus zero-based index within the class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Var {
    pub class: VarClass,
    pub index: usize,
}

impl Var {
    pub fn x(i: usize) -> Var {
        Var { class: VarClass::X, index: i }
    }
    pub fn y(i: usize) -> Var {
        Var { class: VarClass::Y, index: i }
    }
    pub fn t(i: usize) -> Var {
        Var { class: VarClass::T, index: i }
    }
    pub fn u(i: usize) -> Var {
        Var { class: VarClass::U, index: i }
    }
}

/// The variable partition defining a ring `E(r; k+m+n)`.
///
/// Variables are globally ordered `x1..xr, y1..yk, t1..tm, u1..un`; the
/// monomial order is graded lexicographic with `x < y < t < u`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RingContext {
    /// Number of corner variables.
    pub r: usize,
    /// Number of internal (y) variables.
    pub k: usize,
    /// Number of time variables.
    pub m: usize,
    /// Number of parameter variables.
    pub n: usize,
}

impl RingContext {
    pub fn new(r: usize, k: usize, m: usize, n: usize) -> RingContext {
        RingContext { r, k, m, n }
    }

    /// Total number of variables.
    pub fn vars(&self) -> usize {
        self.r + self.k + self.m + self.n
    }

    fn class_count(&self, class: VarClass) -> usize {
        match class {
            VarClass::X => self.r,
            VarClass::Y => self.k,
            VarClass::T => self.m,
            VarClass::U => self.n,
        }
    }

    fn class_offset(&self, class: VarClass) -> usize {
        match class {
            VarClass::X => 0,
            VarClass::Y => self.r,
            VarClass::T => self.r + self.k,
            VarClass::U => self.r + self.k + self.m,
        }
    }

    /// Global position of a variable, or an error if it is out of range.
    pub fn position(&self, v: Var) -> Result<usize, JetError> {
        if v.index < self.class_count(v.class) {
            Ok(self.class_offset(v.class) + v.index)
        } else {
            Err(JetError::UnknownVariable(format!(
                "{}{} not in {}",
                v.class.letter(),
                v.index + 1,
                self
            )))
        }
    }

    /// Variable at a global position.
    pub fn var_at(&self, pos: usize) -> Var {
        debug_assert!(pos < self.vars());
        for class in VarClass::ALL {
            let off = self.class_offset(class);
            if pos < off + self.class_count(class) {
                return Var { class, index: pos - off };
            }
        }
        unreachable!()
    }

    /// All variables in global order.
    pub fn all_vars(&self) -> Vec<Var> {
        (0..self.vars()).map(|p| self.var_at(p)).collect()
    }

    /// Variables of one class.
    pub fn class_vars(&self, class: VarClass) -> Vec<Var> {
        (0..self.class_count(class)).map(|i| Var { class, index: i }).collect()
    }

    /// Display name of a variable (`x1`, `y2`, ...).
    pub fn var_name(&self, v: Var) -> String {
        format!("{}{}", v.class.letter(), v.index + 1)
    }

    /// Resolve a textual variable name.
    ///
    /// Accepts `x`, `y`, `t`, `u` with an optional 1-based index (a bare
    /// letter means index 1). `q<i>` is a synonym for `u<i>` and `z` for the
    /// last `u` variable, matching the convention that a generating family's
    /// parameters are `(q1..q_{n-1}, z)`.
    pub fn parse_var(&self, name: &str) -> Result<Var, JetError> {
        let bad = || JetError::UnknownVariable(format!("`{}` not in {}", name, self));
        let mut chars = name.chars();
        let letter = chars.next().ok_or_else(bad)?;
        let rest: String = chars.collect();
        let index = if rest.is_empty() {
            0
        } else {
            rest.parse::<usize>().ok().and_then(|i| i.checked_sub(1)).ok_or_else(bad)?
        };
        let var = match letter {
            'x' => Var::x(index),
            'y' => Var::y(index),
            't' => Var::t(index),
            'u' => Var::u(index),
            'q' => Var::u(index),
            'z' if rest.is_empty() => {
                if self.n == 0 {
                    return Err(bad());
                }
                Var::u(self.n - 1)
            }
            _ => return Err(bad()),
        };
        self.position(var).map_err(|_| bad())?;
        Ok(var)
    }

    /// Dimension of the jet space `J^l` = C(l + v, v), saturating.
    pub fn jet_dim(&self, l: usize) -> usize {
        let v = self.vars();
        let mut acc: u128 = 1;
        for i in 1..=v {
            acc = acc.saturating_mul((l + i) as u128) / i as u128;
            if acc > usize::MAX as u128 {
                return usize::MAX;
            }
        }
        acc as usize
    }

    /// Context with one variable class removed.
    pub fn without(&self, class: VarClass) -> RingContext {
        let mut c = *self;
        match class {
            VarClass::X => c.r = 0,
            VarClass::Y => c.k = 0,
            VarClass::T => c.m = 0,
            VarClass::U => c.n = 0,
        }
        c
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E(r={};k={},m={},n={})", self.r, self.k, self.m, self.n)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JetError {
    #[error("ring context mismatch: {0} vs {1}")]
    ContextMismatch(RingContext, RingContext),
    #[error("truncation order mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("unknown variable: {0}")]
    UnknownVariable(String),
    #[error("jet space dimension {dim} exceeds cap {cap} ({ctx} at order {order})")]
    DimensionCap { dim: usize, cap: usize, ctx: RingContext, order: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_positions_follow_block_order() {
        let ctx = RingContext::new(1, 2, 1, 3);
        assert_eq!(ctx.vars(), 7);
        assert_eq!(ctx.position(Var::x(0)).unwrap(), 0);
        assert_eq!(ctx.position(Var::y(1)).unwrap(), 2);
        assert_eq!(ctx.position(Var::t(0)).unwrap(), 3);
        assert_eq!(ctx.position(Var::u(2)).unwrap(), 6);
        assert!(ctx.position(Var::x(1)).is_err());
        assert_eq!(ctx.var_at(4), Var::u(0));
    }

    #[test]
    fn parse_var_aliases() {
        let ctx = RingContext::new(1, 1, 1, 3);
        assert_eq!(ctx.parse_var("x").unwrap(), Var::x(0));
        assert_eq!(ctx.parse_var("y1").unwrap(), Var::y(0));
        assert_eq!(ctx.parse_var("q2").unwrap(), Var::u(1));
        assert_eq!(ctx.parse_var("z").unwrap(), Var::u(2));
        assert!(ctx.parse_var("w").is_err());
        assert!(ctx.parse_var("y2").is_err());
    }

    #[test]
    fn jet_dims() {
        let ctx = RingContext::new(1, 0, 0, 0);
        assert_eq!(ctx.jet_dim(5), 6);
        let ctx = RingContext::new(0, 2, 0, 0);
        assert_eq!(ctx.jet_dim(3), 10);
        let big = RingContext::new(0, 2, 1, 5);
        assert_eq!(big.jet_dim(12), 125_970);
    }
}
