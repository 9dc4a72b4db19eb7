//! Seeded random generators and an independent BGP oracle shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use exists_lab::algebra::{CompareOp, GraphName, TermPattern, TriplePattern};
use exists_lab::term::{graph_terms, Graph, Triple};
use exists_lab::{Dataset, Expression, GraphPattern, SolutionMapping, SolutionSet, Term, Variable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];
pub const NAMED_GRAPHS: [&str; 2] = ["urn:g1", "urn:g2"];

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn node(&mut self) -> Term {
        Term::local(["a", "b", "c", "d"].choose(&mut self.rng).unwrap())
    }

    pub fn predicate(&mut self) -> Term {
        Term::local(["p", "q"].choose(&mut self.rng).unwrap())
    }

    pub fn object(&mut self) -> Term {
        if self.chance(0.2) {
            Term::integer(self.rng.gen_range(1..=2))
        } else {
            self.node()
        }
    }

    pub fn graph(&mut self, max: usize) -> Graph {
        let n = self.rng.gen_range(0..=max);
        (0..n)
            .map(|_| Triple::new(self.node(), self.predicate(), self.object()).unwrap())
            .collect()
    }

    /// A default graph of at most `max` triples and, sometimes, two small
    /// named graphs.
    pub fn dataset(&mut self, max: usize) -> Dataset {
        let default = self.graph(max);
        let mut named = BTreeMap::new();
        if self.chance(0.5) {
            for name in NAMED_GRAPHS {
                named.insert(name.to_string(), self.graph(4));
            }
        }
        Dataset::new(default, named)
    }

    pub fn var(&mut self) -> Variable {
        Variable::user(*VAR_NAMES.choose(&mut self.rng).unwrap())
    }

    pub fn vars(&mut self, max: usize) -> Vec<Variable> {
        let mut names = VAR_NAMES.to_vec();
        names.shuffle(&mut self.rng);
        let n = self.rng.gen_range(1..=max.min(names.len()));
        names[..n].iter().map(|n| Variable::user(*n)).collect()
    }

    pub fn triple_pattern(&mut self) -> TriplePattern {
        let s: TermPattern = if self.chance(0.6) { self.var().into() } else { self.node().into() };
        let p: TermPattern = if self.chance(0.15) {
            self.var().into()
        } else {
            self.predicate().into()
        };
        let o: TermPattern = if self.chance(0.6) { self.var().into() } else { self.object().into() };
        TriplePattern::new(s, p, o)
    }

    pub fn bgp(&mut self, max: usize) -> Vec<TriplePattern> {
        let n = self.rng.gen_range(1..=max);
        (0..n).map(|_| self.triple_pattern()).collect()
    }

    /// BGP, Join, Union, Optional and SubSelect only.
    pub fn core_pattern(&mut self, depth: usize) -> GraphPattern {
        if depth == 0 || self.chance(0.3) {
            return GraphPattern::Bgp(self.bgp(2));
        }
        match self.below(4) {
            0 => GraphPattern::join(self.core_pattern(depth - 1), self.core_pattern(depth - 1)),
            1 => GraphPattern::union(self.core_pattern(depth - 1), self.core_pattern(depth - 1)),
            2 => GraphPattern::optional(self.core_pattern(depth - 1), self.core_pattern(depth - 1)),
            _ => {
                let inner = self.core_pattern(depth - 1);
                self.sub_select(inner)
            }
        }
    }

    /// BGP, Join and Union only: the shapes on which all three
    /// normalizations coincide.
    pub fn plain_pattern(&mut self, depth: usize) -> GraphPattern {
        if depth == 0 || self.chance(0.3) {
            return GraphPattern::Bgp(self.bgp(2));
        }
        match self.below(3) {
            0 => GraphPattern::join(self.plain_pattern(depth - 1), self.plain_pattern(depth - 1)),
            1 => GraphPattern::union(self.plain_pattern(depth - 1), self.plain_pattern(depth - 1)),
            _ => GraphPattern::optional(self.plain_pattern(depth - 1), self.plain_pattern(depth - 1)),
        }
    }

    fn sub_select(&mut self, inner: GraphPattern) -> GraphPattern {
        if self.chance(0.2) {
            GraphPattern::select_star(inner)
        } else {
            let vars = self.vars(3);
            GraphPattern::select(vars, inner)
        }
    }

    /// Every pattern form except SERVICE, with expressions that may nest
    /// EXISTS.
    pub fn rich_pattern(&mut self, depth: usize) -> GraphPattern {
        if depth == 0 || self.chance(0.25) {
            return if self.chance(0.85) {
                GraphPattern::Bgp(self.bgp(2))
            } else {
                self.values()
            };
        }
        let sub = |g: &mut Self| g.rich_pattern(depth - 1);
        match self.below(9) {
            0 => GraphPattern::join(sub(self), sub(self)),
            1 => GraphPattern::union(sub(self), sub(self)),
            2 => GraphPattern::optional(sub(self), sub(self)),
            3 => GraphPattern::minus(sub(self), sub(self)),
            4 => {
                let inner = sub(self);
                self.sub_select(inner)
            }
            5 => {
                let inner = sub(self);
                let name = if self.chance(0.5) {
                    GraphName::Var(self.var())
                } else {
                    GraphName::Iri(NAMED_GRAPHS.choose(&mut self.rng).unwrap().to_string())
                };
                GraphPattern::Graph {
                    name,
                    inner: Box::new(inner),
                }
            }
            6 => {
                let inner = sub(self);
                let dom = exists_lab::in_domain(&inner);
                let free: Vec<_> = VAR_NAMES.iter().map(|n| Variable::user(*n)).filter(|v| !dom.contains(v)).collect();
                let expr = self.expression(1);
                match free.choose(&mut self.rng) {
                    Some(v) => GraphPattern::bind(inner, expr, v.clone()),
                    None => GraphPattern::filter(inner, expr),
                }
            }
            _ => {
                let inner = sub(self);
                let c = self.expression(2);
                GraphPattern::filter(inner, c)
            }
        }
    }

    pub fn values(&mut self) -> GraphPattern {
        let vars = self.vars(2);
        let rows = (0..self.rng.gen_range(1..=2))
            .map(|_| {
                vars.iter()
                    .map(|_| if self.chance(0.2) { None } else { Some(self.object()) })
                    .collect()
            })
            .collect();
        GraphPattern::Values { vars, rows }
    }

    pub fn expression(&mut self, depth: usize) -> Expression {
        let leaf_only = depth == 0;
        match if leaf_only { self.below(3) } else { self.below(8) } {
            0 => Expression::Bound(self.var()),
            1 => {
                let l = self.operand();
                let r = self.operand();
                let op = *[CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Ge]
                    .choose(&mut self.rng)
                    .unwrap();
                Expression::compare(op, l, r)
            }
            2 => Expression::compare(CompareOp::Eq, Expression::Var(self.var()), Expression::Const(self.object())),
            3 => Expression::and(self.expression(depth - 1), self.expression(depth - 1)),
            4 => Expression::or(self.expression(depth - 1), self.expression(depth - 1)),
            5 => Expression::not(self.expression(depth - 1)),
            6 => Expression::compare(
                CompareOp::Eq,
                Expression::Add(Box::new(self.operand()), Box::new(Expression::Const(Term::integer(1)))),
                Expression::Const(Term::integer(2)),
            ),
            _ => Expression::exists(self.exists_body(depth - 1)),
        }
    }

    fn exists_body(&mut self, depth: usize) -> GraphPattern {
        if depth > 0 && self.chance(0.3) {
            let inner = GraphPattern::Bgp(self.bgp(2));
            let c = self.expression(depth - 1);
            GraphPattern::filter(inner, c)
        } else {
            self.core_pattern(1)
        }
    }

    fn operand(&mut self) -> Expression {
        if self.chance(0.6) {
            Expression::Var(self.var())
        } else {
            Expression::Const(self.object())
        }
    }

    /// A mapping over at most `max` of the test variables.
    pub fn mapping(&mut self, max: usize) -> SolutionMapping {
        let n = self.rng.gen_range(0..=max);
        let mut names = VAR_NAMES.to_vec();
        names.shuffle(&mut self.rng);
        names[..n].iter().map(|v| (Variable::user(*v), self.object())).collect()
    }

    /// A mapping whose values are all blank nodes.
    pub fn blank_mapping(&mut self, max: usize) -> SolutionMapping {
        let n = self.rng.gen_range(1..=max);
        let mut names = VAR_NAMES.to_vec();
        names.shuffle(&mut self.rng);
        names[..n]
            .iter()
            .enumerate()
            .map(|(i, v)| (Variable::user(*v), Term::blank(format!("m{i}")).unwrap()))
            .collect()
    }
}

/// Enumerates every assignment of the pattern's variables and blank nodes
/// to terms of the graph and keeps those whose instantiation lies in the
/// graph.
pub fn brute_force_bgp(graph: &Graph, bgp: &[TriplePattern]) -> SolutionSet {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum Slot {
        Var(Variable),
        Blank(String),
    }
    let slot_of = |tp: &TermPattern| match tp {
        TermPattern::Var(v) => Some(Slot::Var(v.clone())),
        TermPattern::Term(Term::Blank(b)) => Some(Slot::Blank(b.clone())),
        TermPattern::Term(_) => None,
    };
    let slots: Vec<Slot> = bgp
        .iter()
        .flat_map(|t| t.positions())
        .filter_map(slot_of)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let universe: Vec<Term> = graph_terms(graph).into_iter().collect();
    let mut out = SolutionSet::new();
    if universe.is_empty() && !slots.is_empty() {
        return out;
    }
    let mut digits = vec![0usize; slots.len()];
    loop {
        let assignment: BTreeMap<&Slot, &Term> = slots.iter().zip(digits.iter().map(|&i| &universe[i])).collect();
        let value = |tp: &TermPattern| -> Term {
            match slot_of(tp) {
                Some(s) => assignment[&s].clone(),
                None => match tp {
                    TermPattern::Term(t) => t.clone(),
                    TermPattern::Var(_) => unreachable!(),
                },
            }
        };
        let matches = bgp.iter().all(|t| {
            Triple::new(value(&t.subject), value(&t.predicate), value(&t.object))
                .map(|triple| graph.contains(&triple))
                .unwrap_or(false)
        });
        if matches {
            out.insert(
                assignment
                    .iter()
                    .filter_map(|(s, t)| match s {
                        Slot::Var(v) => Some((v.clone(), (*t).clone())),
                        Slot::Blank(_) => None,
                    })
                    .collect(),
            );
        }
        // advance the odometer
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] < universe.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Join of two solution sets, written out from the definition.
pub fn naive_join(a: &SolutionSet, b: &SolutionSet) -> SolutionSet {
    let mut out = SolutionSet::new();
    for l in a {
        for r in b {
            if l.iter().all(|(k, v)| r.get(k).is_none_or(|w| w == v)) {
                let mut m = l.clone();
                m.extend(r.clone());
                out.insert(m);
            }
        }
    }
    out
}

impl Gen {
    /// Like [`Gen::bgp`] but some variable positions hold blank nodes.
    pub fn bgp_with_blanks(&mut self, max: usize) -> Vec<TriplePattern> {
        let mut bgp = self.bgp(max);
        for t in &mut bgp {
            for pos in [&mut t.subject, &mut t.object] {
                if matches!(pos, TermPattern::Var(_)) && self.chance(0.25) {
                    let label = ["b0", "b1"].choose(&mut self.rng).unwrap();
                    *pos = TermPattern::Term(Term::blank(*label).unwrap());
                }
            }
        }
        bgp
    }
}
