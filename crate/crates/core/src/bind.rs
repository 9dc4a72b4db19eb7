//! Correlating a pattern or expression with an outer solution.
//!
//! `bind` normalizes, substitutes the outer values into the input-role
//! variables recorded in `g`, restores the original names of the
//! output-role variables recorded in `d`, and joins the result with the
//! outer values of the in-domain variables.

use std::collections::BTreeSet;

use crate::algebra::{max_fresh_index, Expression, GraphPattern, TermPattern, VarMap, Variable};
use crate::normalize::{
    normalize_expression, normalize_pattern, Fragment, NormalizeError, NormalizeOptions, Normalization, Semantics,
    VarRenaming,
};
use crate::scope::in_domain;
use crate::solution::SolutionMapping;
use crate::term::Term;

/// One pass that performs both substitution steps and the final renaming
/// by `d`. `bound` is resolved in its own slot before any variable
/// occurrence is replaced, so it never receives a constant.
struct Substitution<'a> {
    d: &'a VarRenaming,
    g: &'a VarRenaming,
    mu: &'a SolutionMapping,
}

impl Substitution<'_> {
    fn value(&self, v: &Variable) -> Option<Result<&Term, &Variable>> {
        self.g.get(v).map(|orig| self.mu.get(orig).ok_or(orig))
    }
}

impl VarMap for Substitution<'_> {
    fn map_var(&mut self, v: &Variable) -> Variable {
        self.g
            .get(v)
            .or_else(|| self.d.get(v))
            .cloned()
            .unwrap_or_else(|| v.clone())
    }

    fn map_bound(&mut self, v: &Variable) -> Expression {
        match self.value(v) {
            Some(found) => Expression::Const(Term::boolean(found.is_ok())),
            None => Expression::Bound(self.map_var(v)),
        }
    }

    fn map_expr_var(&mut self, v: &Variable) -> Expression {
        match self.value(v) {
            Some(Ok(t)) => Expression::Const(t.clone()),
            Some(Err(orig)) => Expression::Var(orig.clone()),
            None => Expression::Var(self.map_var(v)),
        }
    }

    // g-keys never reach a BGP under S2 and S3 and S1 has no g, so this
    // arm only matters for hand-built normalizations.
    fn map_triple_var(&mut self, v: &Variable) -> TermPattern {
        match self.value(v) {
            Some(Ok(t)) => TermPattern::Term(t.clone()),
            Some(Err(orig)) => TermPattern::Var(orig.clone()),
            None => TermPattern::Var(self.map_var(v)),
        }
    }
}

pub fn substitute_pattern(n: &Normalization<GraphPattern>, mu: &SolutionMapping) -> GraphPattern {
    n.pattern.map_vars(&mut Substitution {
        d: &n.d,
        g: &n.g,
        mu,
    })
}

pub fn substitute_expression(n: &Normalization<Expression>, mu: &SolutionMapping) -> Expression {
    n.pattern.map_vars(&mut Substitution {
        d: &n.d,
        g: &n.g,
        mu,
    })
}

/// Applies `mu` to a normalization: `bound` over a g-key becomes a
/// constant, other g-key occurrences become the outer value (or the
/// original variable when unbound), and d-keys get their original names
/// back.
pub fn mapping_substitute(n: &Normalization<Fragment>, mu: &SolutionMapping) -> Fragment {
    let mut s = Substitution {
        d: &n.d,
        g: &n.g,
        mu,
    };
    match &n.pattern {
        Fragment::Pattern(p) => Fragment::Pattern(p.map_vars(&mut s)),
        Fragment::Expression(e) => Fragment::Expression(e.map_vars(&mut s)),
    }
}

/// `VALUES` over the variables of `doms` that `mu` binds, with `mu`'s
/// values as the single row. Without such variables this is the unit
/// pattern.
pub fn encode_values(mu: &SolutionMapping, doms: &BTreeSet<Variable>) -> GraphPattern {
    let (vars, row): (Vec<_>, Vec<_>) = mu
        .iter()
        .filter(|(v, _)| doms.contains(*v))
        .map(|(v, t)| (v.clone(), Some(t.clone())))
        .unzip();
    GraphPattern::Values { vars, rows: vec![row] }
}

/// Fresh names must not collide with the input nor with the keys of `mu`.
fn options_for(used: Option<u32>, mu: &SolutionMapping, opts: &NormalizeOptions) -> NormalizeOptions {
    let used = used.max(mu.keys().filter_map(Variable::fresh_index).max());
    NormalizeOptions {
        seed: used.map_or(opts.seed, |i| opts.seed.max(i + 1)),
        ..*opts
    }
}

pub fn bind_pattern(p: &GraphPattern, mu: &SolutionMapping, sem: Semantics, opts: &NormalizeOptions) -> GraphPattern {
    let opts = options_for(max_fresh_index(p), mu, opts);
    let n = normalize_pattern(p, sem, &opts);
    GraphPattern::join(substitute_pattern(&n, mu), encode_values(mu, &in_domain(p)))
}

/// Expressions have no in-domain variables, so there is nothing to join.
pub fn bind_expression(
    e: &Expression,
    mu: &SolutionMapping,
    sem: Semantics,
    opts: &NormalizeOptions,
) -> Result<Expression, NormalizeError> {
    let opts = options_for(max_fresh_index(e), mu, opts);
    let n = normalize_expression(e, sem, &opts)?;
    Ok(substitute_expression(&n, mu))
}

pub fn bind(
    fragment: &Fragment,
    mu: &SolutionMapping,
    sem: Semantics,
    opts: &NormalizeOptions,
) -> Result<Fragment, NormalizeError> {
    Ok(match fragment {
        Fragment::Pattern(p) => Fragment::Pattern(bind_pattern(p, mu, sem, opts)),
        Fragment::Expression(e) => Fragment::Expression(bind_expression(e, mu, sem, opts)?),
    })
}
