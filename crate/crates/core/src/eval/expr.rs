//! Expression values, three-valued logic and term comparison.

use std::cmp::Ordering;

use crate::algebra::CompareOp;
use crate::term::{Term, XSD_BOOLEAN};

/// The value of an expression: a term or a SPARQL error. All errors are
/// equal to each other; the reason is kept for diagnostics only.
#[derive(Debug, Clone)]
pub enum ExprValue {
    Term(Term),
    Error(String),
}

impl PartialEq for ExprValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExprValue::Term(a), ExprValue::Term(b)) => a == b,
            (ExprValue::Error(_), ExprValue::Error(_)) => true,
            _ => false,
        }
    }
}

impl Eq for ExprValue {}

impl ExprValue {
    pub fn error(reason: impl Into<String>) -> Self {
        ExprValue::Error(reason.into())
    }

    pub fn boolean(b: bool) -> Self {
        ExprValue::Term(Term::boolean(b))
    }

    pub fn is_error(&self) -> bool {
        matches!(self, ExprValue::Error(_))
    }
}

impl From<Truth> for ExprValue {
    fn from(t: Truth) -> Self {
        match t {
            Truth::True => ExprValue::boolean(true),
            Truth::False => ExprValue::boolean(false),
            Truth::Error => ExprValue::error("logical error"),
        }
    }
}

/// Kleene truth values, with errors in the middle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Error,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Error,
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Error,
        }
    }
}

impl std::ops::Not for Truth {
    type Output = Truth;

    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Error => Truth::Error,
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

/// Effective boolean value. Only boolean literals have one.
pub fn ebv(v: &ExprValue) -> Truth {
    match v {
        ExprValue::Term(t) => t.as_boolean().map_or(Truth::Error, Truth::from),
        ExprValue::Error(_) => Truth::Error,
    }
}

fn rdf_term_equal(a: &Term, b: &Term) -> ExprValue {
    if let (Some(x), Some(y)) = (a.as_integer(), b.as_integer()) {
        return ExprValue::boolean(x == y);
    }
    if a == b {
        return ExprValue::boolean(true);
    }
    match (a, b) {
        (Term::Literal { datatype: da, .. }, Term::Literal { datatype: db, .. }) => {
            // Distinct values of the same known datatype are unequal; any
            // other literal pair cannot be compared.
            let known = da.is_none() || da.as_deref() == Some(XSD_BOOLEAN);
            if da == db && known {
                ExprValue::boolean(false)
            } else {
                ExprValue::error(format!("cannot compare {a} and {b}"))
            }
        }
        _ => ExprValue::boolean(false),
    }
}

pub fn compare(op: CompareOp, a: &ExprValue, b: &ExprValue) -> ExprValue {
    let (ExprValue::Term(a), ExprValue::Term(b)) = (a, b) else {
        return ExprValue::error("comparison of an error");
    };
    match op {
        CompareOp::Eq => rdf_term_equal(a, b),
        CompareOp::Ne => (!ebv(&rdf_term_equal(a, b))).into(),
        _ => {
            let (Some(x), Some(y)) = (a.as_integer(), b.as_integer()) else {
                return ExprValue::error(format!("{a} {} {b} is not numeric", op.symbol()));
            };
            let ord = x.cmp(&y);
            ExprValue::boolean(match op {
                CompareOp::Lt => ord == Ordering::Less,
                CompareOp::Le => ord != Ordering::Greater,
                CompareOp::Gt => ord == Ordering::Greater,
                _ => ord != Ordering::Less,
            })
        }
    }
}

pub fn add(a: &ExprValue, b: &ExprValue) -> ExprValue {
    match (a, b) {
        (ExprValue::Term(a), ExprValue::Term(b)) => match (a.as_integer(), b.as_integer()) {
            (Some(x), Some(y)) => x
                .checked_add(y)
                .map_or_else(|| ExprValue::error("integer overflow"), |s| ExprValue::Term(Term::integer(s))),
            _ => ExprValue::error(format!("{a} + {b} is not numeric")),
        },
        _ => ExprValue::error("addition of an error"),
    }
}
