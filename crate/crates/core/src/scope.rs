//! In-domain variables: the variables a pattern's solutions may bind,
//! computed from syntax alone.

use std::collections::BTreeSet;

use crate::algebra::{Expression, GraphName, GraphPattern, Projection, TermPattern, Variable, Variables};

pub fn in_domain(p: &GraphPattern) -> BTreeSet<Variable> {
    use GraphPattern as P;
    match p {
        P::Bgp(ts) => ts
            .iter()
            .flat_map(|t| t.positions())
            .filter_map(TermPattern::as_var)
            .cloned()
            .collect(),
        P::Join(l, r) | P::Union(l, r) | P::Optional(l, r) => {
            let mut d = in_domain(l);
            d.extend(in_domain(r));
            d
        }
        P::Minus(l, _) => in_domain(l),
        P::Graph { name, inner } => {
            let mut d = in_domain(inner);
            if let GraphName::Var(v) = name {
                d.insert(v.clone());
            }
            d
        }
        P::Service { inner, .. } | P::Filter { inner, .. } => in_domain(inner),
        P::Bind { inner, var, .. } => {
            let mut d = in_domain(inner);
            d.insert(var.clone());
            d
        }
        P::Values { vars, .. } => vars.iter().cloned().collect(),
        P::SubSelect { projection, inner } => match projection {
            Projection::Star => in_domain(inner),
            Projection::Vars(vs) => vs.iter().cloned().collect(),
        },
    }
}

/// Replaces a `SELECT *` projection with the sorted in-domain variables of
/// its body. Other patterns are returned unchanged.
pub fn expand_star(p: &GraphPattern) -> GraphPattern {
    match p {
        GraphPattern::SubSelect {
            projection: Projection::Star,
            inner,
        } => GraphPattern::SubSelect {
            projection: Projection::Vars(sorted_by_name(in_domain(inner))),
            inner: inner.clone(),
        },
        _ => p.clone(),
    }
}

fn sorted_by_name(vars: BTreeSet<Variable>) -> Vec<Variable> {
    let mut vs: Vec<_> = vars.into_iter().collect();
    vs.sort_by_cached_key(Variable::name);
    vs
}

/// [`expand_star`] applied to every sub-select, including those inside
/// EXISTS bodies.
pub fn expand_stars(p: &GraphPattern) -> GraphPattern {
    use GraphPattern as P;
    let bx = |p: &GraphPattern| Box::new(expand_stars(p));
    match p {
        P::Bgp(_) | P::Values { .. } => p.clone(),
        P::Join(l, r) => P::Join(bx(l), bx(r)),
        P::Union(l, r) => P::Union(bx(l), bx(r)),
        P::Optional(l, r) => P::Optional(bx(l), bx(r)),
        P::Minus(l, r) => P::Minus(bx(l), bx(r)),
        P::Graph { name, inner } => P::Graph {
            name: name.clone(),
            inner: bx(inner),
        },
        P::Service { iri, inner } => P::Service {
            iri: iri.clone(),
            inner: bx(inner),
        },
        P::Filter { inner, condition } => P::Filter {
            inner: bx(inner),
            condition: expand_stars_expr(condition),
        },
        P::Bind { inner, expr, var } => P::Bind {
            inner: bx(inner),
            expr: expand_stars_expr(expr),
            var: var.clone(),
        },
        P::SubSelect { projection, inner } => expand_star(&P::SubSelect {
            projection: projection.clone(),
            inner: bx(inner),
        }),
    }
}

fn expand_stars_expr(e: &Expression) -> Expression {
    use Expression as E;
    let bx = |e: &Expression| Box::new(expand_stars_expr(e));
    match e {
        E::Const(_) | E::Var(_) | E::Bound(_) => e.clone(),
        E::Compare(op, l, r) => E::Compare(*op, bx(l), bx(r)),
        E::And(l, r) => E::And(bx(l), bx(r)),
        E::Or(l, r) => E::Or(bx(l), bx(r)),
        E::Add(l, r) => E::Add(bx(l), bx(r)),
        E::Not(x) => E::Not(bx(x)),
        E::Exists(p) => E::Exists(Box::new(expand_stars(p))),
    }
}

/// Sanity relation between the two variable sets: `in_domain(p) ⊆ vars(p)`.
pub fn domain_within_vars(p: &GraphPattern) -> bool {
    in_domain(p).is_subset(&p.vars())
}
