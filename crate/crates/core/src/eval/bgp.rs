//! Basic graph pattern matching by backtracking.

use std::collections::BTreeMap;

use crate::algebra::{TermPattern, TriplePattern, Variable};
use crate::solution::{SolutionMapping, SolutionSet};
use crate::term::{Graph, Term, Triple};

// Blank nodes in a pattern behave as variables scoped to the BGP; they are
// matched like variables and left out of the solutions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Var(Variable),
    Blank(String),
}

fn slot(tp: &TermPattern) -> Result<Slot, &Term> {
    match tp {
        TermPattern::Var(v) => Ok(Slot::Var(v.clone())),
        TermPattern::Term(Term::Blank(b)) => Ok(Slot::Blank(b.clone())),
        TermPattern::Term(t) => Err(t),
    }
}

type Partial = BTreeMap<Slot, Term>;

fn unify(pattern: &TriplePattern, triple: &Triple, binding: &mut Partial) -> bool {
    let pairs = pattern.positions().into_iter().zip(triple.terms());
    for (tp, term) in pairs {
        match slot(tp) {
            Err(t) => {
                if t != term {
                    return false;
                }
            }
            Ok(s) => match binding.get(&s) {
                Some(bound) if bound != term => return false,
                Some(_) => {}
                None => {
                    binding.insert(s, term.clone());
                }
            },
        }
    }
    true
}

pub fn match_bgp(graph: &Graph, patterns: &[TriplePattern]) -> SolutionSet {
    let mut out = SolutionSet::new();
    extend(graph, patterns, Partial::new(), &mut out);
    out
}

fn extend(graph: &Graph, rest: &[TriplePattern], binding: Partial, out: &mut SolutionSet) {
    let Some((first, rest)) = rest.split_first() else {
        out.insert(
            binding
                .into_iter()
                .filter_map(|(s, t)| match s {
                    Slot::Var(v) => Some((v, t)),
                    Slot::Blank(_) => None,
                })
                .collect::<SolutionMapping>(),
        );
        return;
    };
    for triple in graph {
        let mut next = binding.clone();
        if unify(first, triple, &mut next) {
            extend(graph, rest, next, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GraphPattern;
    use crate::parser::parse_pattern;
    use crate::solution::parse_mapping;
    use crate::turtle::parse_data;

    fn bgp(text: &str) -> Vec<TriplePattern> {
        match parse_pattern(text).unwrap() {
            GraphPattern::Bgp(ts) => ts,
            other => panic!("not a BGP: {other:?}"),
        }
    }

    fn fig1() -> Graph {
        parse_data(
            ":a :parent :b . :b :parent :c . :c :parent :d .\n\
             :a :country :j . :b :country :j . :c :country :k .",
        )
        .unwrap()
        .default_graph()
        .clone()
    }

    #[test]
    fn parent_edges() {
        let got = match_bgp(&fig1(), &bgp("?child :parent ?parent"));
        let want: SolutionSet = ["?child=:a, ?parent=:b", "?child=:b, ?parent=:c", "?child=:c, ?parent=:d"]
            .iter()
            .map(|r| parse_mapping(r).unwrap())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn empty_bgp_has_one_empty_solution() {
        assert_eq!(match_bgp(&fig1(), &[]), SolutionSet::from([SolutionMapping::new()]));
        assert_eq!(match_bgp(&Graph::new(), &[]).len(), 1);
    }

    #[test]
    fn blank_nodes_are_existential() {
        let got = match_bgp(&fig1(), &bgp("?x :parent _:m . _:m :country :j"));
        assert_eq!(got, SolutionSet::from([parse_mapping("?x=:a").unwrap()]));
    }

    #[test]
    fn repeated_variable_must_agree() {
        let g = parse_data(":a :p :a . :a :p :b .").unwrap().default_graph().clone();
        assert_eq!(match_bgp(&g, &bgp("?x :p ?x")).len(), 1);
    }
}
