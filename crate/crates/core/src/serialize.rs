//! Concrete syntax for patterns and expressions. Output re-parses to an
//! identical tree: expressions are fully parenthesized and group members
//! are braced wherever adjacency would otherwise merge or re-associate them.

use crate::algebra::{Expression, GraphName, GraphPattern, Projection, TermPattern, TriplePattern};
use crate::term::Term;

/// Group body for `p`, without the outer braces.
pub fn serialize(p: &GraphPattern) -> String {
    body(p)
}

/// A full `SELECT` query; `p` must be a sub-select.
pub fn serialize_query(p: &GraphPattern) -> Option<String> {
    match p {
        GraphPattern::SubSelect { projection, inner } => Some(select(projection, inner)),
        _ => None,
    }
}

pub fn serialize_expression(e: &Expression) -> String {
    expr(e)
}

fn select(projection: &Projection, inner: &GraphPattern) -> String {
    let proj = match projection {
        Projection::Star => "*".to_owned(),
        Projection::Vars(vs) => vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
    };
    format!("SELECT {proj} WHERE {}", group(inner))
}

fn group(p: &GraphPattern) -> String {
    let b = body(p);
    if b.is_empty() {
        "{ }".to_owned()
    } else {
        format!("{{ {b} }}")
    }
}

fn body(p: &GraphPattern) -> String {
    use GraphPattern as P;
    match p {
        P::Bgp(ts) => ts.iter().map(triple).collect::<Vec<_>>().join(" "),
        P::Join(l, r) => {
            let left = match **l {
                P::Bgp(ref ts) if ts.is_empty() => "{ }".to_owned(),
                _ => prefix(l),
            };
            format!("{left} {}", element(r))
        }
        P::Optional(l, r) => join_words(&prefix(l), &format!("OPTIONAL {}", group(r))),
        P::Minus(l, r) => join_words(&prefix(l), &format!("MINUS {}", group(r))),
        P::Bind { inner, expr: e, var } => {
            join_words(&prefix(inner), &format!("BIND({} AS {var})", expr(e)))
        }
        P::Filter { inner, condition } => {
            join_words(&body(inner), &format!("FILTER({})", expr(condition)))
        }
        P::Union(..) | P::Graph { .. } | P::Service { .. } | P::Values { .. } | P::SubSelect { .. } => {
            element(p)
        }
    }
}

fn join_words(a: &str, b: &str) -> String {
    if a.is_empty() {
        b.to_owned()
    } else {
        format!("{a} {b}")
    }
}

/// Members that later members may extend. A trailing filter would capture
/// whatever follows it, so filtered patterns get their own braces.
fn prefix(p: &GraphPattern) -> String {
    match p {
        GraphPattern::Filter { .. } => group(p),
        _ => body(p),
    }
}

/// `p` as a single group member.
fn element(p: &GraphPattern) -> String {
    use GraphPattern as P;
    match p {
        P::Union(l, r) => format!("{} UNION {}", group(l), group(r)),
        P::Graph { name, inner } => {
            let name = match name {
                GraphName::Iri(iri) => Term::Iri(iri.clone()).to_string(),
                GraphName::Var(v) => v.to_string(),
            };
            format!("GRAPH {name} {}", group(inner))
        }
        P::Service { iri, inner } => format!("SERVICE {} {}", Term::Iri(iri.clone()), group(inner)),
        P::Values { vars, rows } => {
            let header = vars.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            let rows = rows
                .iter()
                .map(|row| {
                    let cells = row
                        .iter()
                        .map(|c| c.as_ref().map_or_else(|| "UNDEF".to_owned(), ToString::to_string))
                        .collect::<Vec<_>>()
                        .join(" ");
                    format!("({cells})")
                })
                .collect::<Vec<_>>()
                .join(" ");
            format!("VALUES ({header}) {{ {rows} }}")
        }
        P::SubSelect { projection, inner } => format!("{{ {} }}", select(projection, inner)),
        _ => group(p),
    }
}

fn triple(t: &TriplePattern) -> String {
    let pos = |tp: &TermPattern| match tp {
        TermPattern::Var(v) => v.to_string(),
        TermPattern::Term(t) => t.to_string(),
    };
    format!("{} {} {} .", pos(&t.subject), pos(&t.predicate), pos(&t.object))
}

fn expr(e: &Expression) -> String {
    use Expression as E;
    match e {
        E::Const(t) => t.to_string(),
        E::Var(v) => v.to_string(),
        E::Compare(op, l, r) => format!("({} {} {})", expr(l), op.symbol(), expr(r)),
        E::And(l, r) => format!("({} && {})", expr(l), expr(r)),
        E::Or(l, r) => format!("({} || {})", expr(l), expr(r)),
        E::Add(l, r) => format!("({} + {})", expr(l), expr(r)),
        E::Not(inner) => format!("!{}", parenthesized(inner)),
        E::Bound(v) => format!("bound({v})"),
        E::Exists(p) => format!("EXISTS {}", group(p)),
    }
}

fn parenthesized(e: &Expression) -> String {
    let s = expr(e);
    if s.starts_with('(') {
        s
    } else {
        format!("({s})")
    }
}
