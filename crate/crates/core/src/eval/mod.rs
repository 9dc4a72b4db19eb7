//! Evaluation of patterns and expressions over a dataset.
//!
//! EXISTS is evaluated per candidate solution: the body is correlated with
//! the solution through [`bind_pattern`] under the chosen semantics and
//! the result is tested for emptiness.

mod bgp;
mod expr;
mod ops;

use thiserror::Error;

pub use bgp::match_bgp;
pub use expr::{ebv, ExprValue, Truth};
pub use ops::{join, left_join, minus, union};

use crate::algebra::{Expression, GraphName, GraphPattern, Projection};
use crate::bind::bind_pattern;
use crate::normalize::{NormalizeOptions, Semantics};
use crate::scope::in_domain;
use crate::solution::{SolutionMapping, SolutionSet};
use crate::term::{Dataset, Graph, Term};

/// Failures that abort evaluation. Ordinary SPARQL expression errors are
/// values ([`ExprValue::Error`]) and never end up here.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("SERVICE evaluation unsupported (<{0}>)")]
    ServiceUnsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub semantics: Semantics,
    pub normalize: NormalizeOptions,
}

impl From<Semantics> for EvalOptions {
    fn from(semantics: Semantics) -> Self {
        EvalOptions {
            semantics,
            normalize: NormalizeOptions::default(),
        }
    }
}

/// Evaluates `p` with `graph` as the active graph.
pub fn eval_pattern(
    dataset: &Dataset,
    graph: &Graph,
    p: &GraphPattern,
    sem: Semantics,
) -> Result<SolutionSet, EvalError> {
    Evaluator::new(dataset, sem.into()).pattern(graph, p)
}

pub fn eval_pattern_with(
    dataset: &Dataset,
    graph: &Graph,
    p: &GraphPattern,
    opts: &EvalOptions,
) -> Result<SolutionSet, EvalError> {
    Evaluator::new(dataset, *opts).pattern(graph, p)
}

/// Evaluates `p` against the default graph.
pub fn eval_query(dataset: &Dataset, p: &GraphPattern, sem: Semantics) -> Result<SolutionSet, EvalError> {
    eval_pattern(dataset, dataset.default_graph(), p, sem)
}

pub fn eval_expr(
    e: &Expression,
    mu: &SolutionMapping,
    dataset: &Dataset,
    graph: &Graph,
    sem: Semantics,
) -> Result<ExprValue, EvalError> {
    Evaluator::new(dataset, sem.into()).expr(graph, e, mu)
}

struct Evaluator<'a> {
    dataset: &'a Dataset,
    opts: EvalOptions,
}

impl<'a> Evaluator<'a> {
    fn new(dataset: &'a Dataset, opts: EvalOptions) -> Self {
        Evaluator { dataset, opts }
    }

    fn pattern(&self, graph: &Graph, p: &GraphPattern) -> Result<SolutionSet, EvalError> {
        use GraphPattern as P;
        Ok(match p {
            P::Bgp(ts) => match_bgp(graph, ts),
            P::Join(l, r) => join(&self.pattern(graph, l)?, &self.pattern(graph, r)?),
            P::Union(l, r) => union(&self.pattern(graph, l)?, &self.pattern(graph, r)?),
            P::Minus(l, r) => minus(&self.pattern(graph, l)?, &self.pattern(graph, r)?),
            P::Optional(l, r) => {
                // Filters at the top of the optional side become the
                // left-join condition and see the merged solution.
                let mut conditions = Vec::new();
                let mut right = &**r;
                while let P::Filter { inner, condition } = right {
                    conditions.push(condition);
                    right = inner;
                }
                let left = self.pattern(graph, l)?;
                let right = self.pattern(graph, right)?;
                left_join(&left, &right, |m| {
                    for c in &conditions {
                        if ebv(&self.expr(graph, c, m)?) != Truth::True {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                })?
            }
            P::Graph { name, inner } => match name {
                GraphName::Iri(iri) => match self.dataset.named_graph(iri) {
                    Some(g) => self.pattern(g, inner)?,
                    None => SolutionSet::new(),
                },
                GraphName::Var(v) => {
                    let mut out = SolutionSet::new();
                    for (iri, g) in self.dataset.named_graphs() {
                        let Ok(term) = Term::iri(iri) else { continue };
                        let named = SolutionSet::from([SolutionMapping::from([(v.clone(), term)])]);
                        out.extend(join(&self.pattern(g, inner)?, &named));
                    }
                    out
                }
            },
            P::Service { iri, .. } => return Err(EvalError::ServiceUnsupported(iri.clone())),
            P::Filter { inner, condition } => {
                let mut out = SolutionSet::new();
                for mu in self.pattern(graph, inner)? {
                    if ebv(&self.expr(graph, condition, &mu)?) == Truth::True {
                        out.insert(mu);
                    }
                }
                out
            }
            P::Bind { inner, expr, var } => {
                let mut out = SolutionSet::new();
                for mut mu in self.pattern(graph, inner)? {
                    if let ExprValue::Term(t) = self.expr(graph, expr, &mu)? {
                        mu.entry(var.clone()).or_insert(t);
                    }
                    out.insert(mu);
                }
                out
            }
            P::Values { vars, rows } => rows
                .iter()
                .map(|row| {
                    vars.iter()
                        .zip(row)
                        .filter_map(|(v, cell)| cell.as_ref().map(|t| (v.clone(), t.clone())))
                        .collect()
                })
                .collect(),
            P::SubSelect { projection, inner } => {
                let keep = match projection {
                    Projection::Star => in_domain(inner),
                    Projection::Vars(vs) => vs.iter().cloned().collect(),
                };
                self.pattern(graph, inner)?
                    .into_iter()
                    .map(|mu| mu.into_iter().filter(|(k, _)| keep.contains(k)).collect())
                    .collect()
            }
        })
    }

    fn expr(&self, graph: &Graph, e: &Expression, mu: &SolutionMapping) -> Result<ExprValue, EvalError> {
        use Expression as E;
        Ok(match e {
            E::Const(t) => ExprValue::Term(t.clone()),
            E::Var(v) => match mu.get(v) {
                Some(t) => ExprValue::Term(t.clone()),
                None => ExprValue::error(format!("{v} is unbound")),
            },
            E::Bound(v) => ExprValue::boolean(mu.contains_key(v)),
            E::Compare(op, l, r) => expr::compare(*op, &self.expr(graph, l, mu)?, &self.expr(graph, r, mu)?),
            E::Add(l, r) => expr::add(&self.expr(graph, l, mu)?, &self.expr(graph, r, mu)?),
            E::And(l, r) => ebv(&self.expr(graph, l, mu)?).and(ebv(&self.expr(graph, r, mu)?)).into(),
            E::Or(l, r) => ebv(&self.expr(graph, l, mu)?).or(ebv(&self.expr(graph, r, mu)?)).into(),
            E::Not(x) => (!ebv(&self.expr(graph, x, mu)?)).into(),
            E::Exists(q) => {
                let correlated = bind_pattern(q, mu, self.opts.semantics, &self.opts.normalize);
                ExprValue::boolean(!self.pattern(graph, &correlated)?.is_empty())
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expression, parse_pattern, parse_query};
    use crate::solution::parse_mapping;
    use crate::turtle::parse_data;

    const FIG1: &str = ":a :parent :b . :b :parent :c . :c :parent :d .
                        :a :country :j . :b :country :j . :c :country :k .";

    fn rows(rs: &[&str]) -> SolutionSet {
        rs.iter().map(|r| parse_mapping(r).unwrap()).collect()
    }

    fn run(data: &str, query: &str, sem: Semantics) -> SolutionSet {
        eval_query(&parse_data(data).unwrap(), &parse_query(query).unwrap(), sem).unwrap()
    }

    #[test]
    fn listing_one_depends_on_semantics() {
        let q = "SELECT ?parent WHERE { ?parent :country :j
                 FILTER(EXISTS { SELECT ?child WHERE { ?child :parent ?parent } }) }";
        assert_eq!(run(FIG1, q, Semantics::S1), rows(&["?parent=:a", "?parent=:b"]));
        assert_eq!(run(FIG1, q, Semantics::S2), rows(&["?parent=:a", "?parent=:b"]));
        assert_eq!(run(FIG1, q, Semantics::S3), rows(&["?parent=:b"]));
    }

    #[test]
    fn optional_then_exists() {
        let data = ":a :p :b . :b :q :c . :c :r :d . :e :p :f . :f :q :g . :h :p :i .";
        let body = parse_pattern("{ ?x :p ?y } OPTIONAL { ?y :q ?z }").unwrap();
        let d = parse_data(data).unwrap();
        assert_eq!(
            eval_query(&d, &body, Semantics::S2).unwrap(),
            rows(&["?x=:a, ?y=:b, ?z=:c", "?x=:e, ?y=:f, ?z=:g", "?x=:h, ?y=:i"])
        );
        let q = "SELECT * WHERE { { { ?x :p ?y } OPTIONAL { ?y :q ?z } } FILTER ( EXISTS { ?z :r ?v } ) }";
        for sem in Semantics::ALL {
            assert_eq!(
                run(data, q, sem),
                rows(&["?x=:a, ?y=:b, ?z=:c", "?x=:h, ?y=:i"]),
                "{sem}"
            );
        }
    }

    #[test]
    fn tautology_needs_a_bound_variable() {
        let d = parse_data(FIG1).unwrap();
        let e = parse_expression("?parent = 1 || ?parent != 1").unwrap();
        let g = d.default_graph();
        assert!(eval_expr(&e, &SolutionMapping::new(), &d, g, Semantics::S2).unwrap().is_error());
        assert_eq!(
            eval_expr(&e, &parse_mapping("?parent=:a").unwrap(), &d, g, Semantics::S2).unwrap(),
            ExprValue::boolean(true)
        );
        let b = parse_expression("bound(?x)").unwrap();
        assert_eq!(
            eval_expr(&b, &SolutionMapping::new(), &d, g, Semantics::S1).unwrap(),
            ExprValue::boolean(false)
        );
    }

    #[test]
    fn optional_filter_sees_both_sides() {
        let d = parse_data(":a :p 1 . :a :q 2 . :b :p 3 . :b :q 1 .").unwrap();
        let p = parse_pattern("?s :p ?x OPTIONAL { ?s :q ?y FILTER(?y > ?x) }").unwrap();
        assert_eq!(
            eval_query(&d, &p, Semantics::S2).unwrap(),
            rows(&["?s=:a, ?x=1, ?y=2", "?s=:b, ?x=3"])
        );
    }

    #[test]
    fn graphs_and_bind() {
        let d = parse_data(":s :p 1 . GRAPH <urn:g> { :s :p 2 . } GRAPH <urn:h> { :s :p 3 . }").unwrap();
        let named = eval_query(&d, &parse_pattern("GRAPH ?g { :s :p ?o }").unwrap(), Semantics::S1).unwrap();
        assert_eq!(named, rows(&["?g=<urn:g>, ?o=2", "?g=<urn:h>, ?o=3"]));
        let fixed = eval_query(&d, &parse_pattern("GRAPH <urn:g> { :s :p ?o }").unwrap(), Semantics::S1).unwrap();
        assert_eq!(fixed, rows(&["?o=2"]));
        let missing = eval_query(&d, &parse_pattern("GRAPH <urn:x> { ?s ?p ?o }").unwrap(), Semantics::S1).unwrap();
        assert!(missing.is_empty());
        let bound = eval_query(&d, &parse_pattern(":s :p ?o BIND(?o + 1 AS ?n)").unwrap(), Semantics::S1).unwrap();
        assert_eq!(bound, rows(&["?o=1, ?n=2"]));
        let failed = eval_query(&d, &parse_pattern(":s :p ?o BIND(?o + :x AS ?n)").unwrap(), Semantics::S1).unwrap();
        assert_eq!(failed, rows(&["?o=1"]));
    }

    #[test]
    fn service_is_fatal() {
        let d = parse_data("").unwrap();
        let p = parse_pattern("SERVICE <urn:s> { ?s ?p ?o }").unwrap();
        assert_eq!(
            eval_query(&d, &p, Semantics::S2),
            Err(EvalError::ServiceUnsupported("urn:s".into()))
        );
    }

    #[test]
    fn values_rows_skip_undef() {
        let d = parse_data("").unwrap();
        let p = parse_pattern("VALUES (?x ?y) { (1 UNDEF) (2 3) }").unwrap();
        assert_eq!(eval_query(&d, &p, Semantics::S1).unwrap(), rows(&["?x=1", "?x=2, ?y=3"]));
    }
}
