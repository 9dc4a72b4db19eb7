//! Abstract syntax for the query fragment: graph patterns and expressions.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::Term;

/// Name prefix reserved for variables invented by normalization.
pub const FRESH_PREFIX: &str = "__f";

/// A query variable. User variables come from query text; fresh ones are
/// minted by normalization and print as `?__f<n>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    User(String),
    Fresh(u32),
}

impl Variable {
    pub fn user(name: impl Into<String>) -> Self {
        Variable::User(name.into())
    }

    /// Maps reserved `__f<n>` names to fresh variables so printed
    /// normalizations read back unchanged.
    pub fn from_name(name: &str) -> Self {
        name.strip_prefix(FRESH_PREFIX)
            .filter(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|n| n.parse().ok())
            .map_or_else(|| Variable::User(name.to_owned()), Variable::Fresh)
    }

    pub fn is_fresh(&self) -> bool {
        matches!(self, Variable::Fresh(_))
    }

    pub fn fresh_index(&self) -> Option<u32> {
        match self {
            Variable::Fresh(n) => Some(*n),
            Variable::User(_) => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Variable::User(n) => n.clone(),
            Variable::Fresh(i) => format!("{FRESH_PREFIX}{i}"),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermPattern {
    Term(Term),
    Var(Variable),
}

impl TermPattern {
    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            TermPattern::Var(v) => Some(v),
            TermPattern::Term(_) => None,
        }
    }
}

impl From<Variable> for TermPattern {
    fn from(v: Variable) -> Self {
        TermPattern::Var(v)
    }
}

impl From<Term> for TermPattern {
    fn from(t: Term) -> Self {
        TermPattern::Term(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: TermPattern,
    pub object: TermPattern,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<TermPattern>,
        predicate: impl Into<TermPattern>,
        object: impl Into<TermPattern>,
    ) -> Self {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn positions(&self) -> [&TermPattern; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphName {
    Iri(String),
    Var(Variable),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Projection {
    Star,
    Vars(Vec<Variable>),
}

/// A graph pattern of the fragment. `Join` is written as adjacency in
/// query text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphPattern {
    Bgp(Vec<TriplePattern>),
    Join(Box<GraphPattern>, Box<GraphPattern>),
    Union(Box<GraphPattern>, Box<GraphPattern>),
    Optional(Box<GraphPattern>, Box<GraphPattern>),
    Minus(Box<GraphPattern>, Box<GraphPattern>),
    Graph {
        name: GraphName,
        inner: Box<GraphPattern>,
    },
    Service {
        iri: String,
        inner: Box<GraphPattern>,
    },
    Filter {
        inner: Box<GraphPattern>,
        condition: Expression,
    },
    Bind {
        inner: Box<GraphPattern>,
        expr: Expression,
        var: Variable,
    },
    /// Inline data; `None` cells are UNDEF.
    Values {
        vars: Vec<Variable>,
        rows: Vec<Vec<Option<Term>>>,
    },
    SubSelect {
        projection: Projection,
        inner: Box<GraphPattern>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }
}

/// Filter and BIND expressions. `NOT EXISTS` is `Not(Exists(..))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Const(Term),
    Var(Variable),
    Compare(CompareOp, Box<Expression>, Box<Expression>),
    And(Box<Expression>, Box<Expression>),
    Or(Box<Expression>, Box<Expression>),
    Not(Box<Expression>),
    Bound(Variable),
    Exists(Box<GraphPattern>),
    Add(Box<Expression>, Box<Expression>),
}

// Shorthand constructors; they keep tests and rewrite rules readable.
impl GraphPattern {
    pub fn bgp(triples: impl IntoIterator<Item = TriplePattern>) -> Self {
        GraphPattern::Bgp(triples.into_iter().collect())
    }

    pub fn join(l: GraphPattern, r: GraphPattern) -> Self {
        GraphPattern::Join(Box::new(l), Box::new(r))
    }

    pub fn union(l: GraphPattern, r: GraphPattern) -> Self {
        GraphPattern::Union(Box::new(l), Box::new(r))
    }

    pub fn optional(l: GraphPattern, r: GraphPattern) -> Self {
        GraphPattern::Optional(Box::new(l), Box::new(r))
    }

    pub fn minus(l: GraphPattern, r: GraphPattern) -> Self {
        GraphPattern::Minus(Box::new(l), Box::new(r))
    }

    pub fn filter(inner: GraphPattern, condition: Expression) -> Self {
        GraphPattern::Filter {
            inner: Box::new(inner),
            condition,
        }
    }

    pub fn bind(inner: GraphPattern, expr: Expression, var: Variable) -> Self {
        GraphPattern::Bind {
            inner: Box::new(inner),
            expr,
            var,
        }
    }

    pub fn select(vars: impl IntoIterator<Item = Variable>, inner: GraphPattern) -> Self {
        GraphPattern::SubSelect {
            projection: Projection::Vars(vars.into_iter().collect()),
            inner: Box::new(inner),
        }
    }

    pub fn select_star(inner: GraphPattern) -> Self {
        GraphPattern::SubSelect {
            projection: Projection::Star,
            inner: Box::new(inner),
        }
    }

    /// The VALUES pattern with no variables and one empty row: the join identity.
    pub fn unit() -> Self {
        GraphPattern::Values {
            vars: Vec::new(),
            rows: vec![Vec::new()],
        }
    }
}

impl Expression {
    pub fn var(v: Variable) -> Self {
        Expression::Var(v)
    }

    pub fn compare(op: CompareOp, l: Expression, r: Expression) -> Self {
        Expression::Compare(op, Box::new(l), Box::new(r))
    }

    pub fn and(l: Expression, r: Expression) -> Self {
        Expression::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Expression, r: Expression) -> Self {
        Expression::Or(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expression) -> Self {
        Expression::Not(Box::new(e))
    }

    pub fn exists(p: GraphPattern) -> Self {
        Expression::Exists(Box::new(p))
    }
}

/// Rewrites variable occurrences. The defaults rename every slot through
/// `map_var`; substitution overrides the expression and term slots.
pub trait VarMap {
    fn map_var(&mut self, v: &Variable) -> Variable;

    fn map_expr_var(&mut self, v: &Variable) -> Expression {
        Expression::Var(self.map_var(v))
    }

    fn map_bound(&mut self, v: &Variable) -> Expression {
        Expression::Bound(self.map_var(v))
    }

    fn map_triple_var(&mut self, v: &Variable) -> TermPattern {
        TermPattern::Var(self.map_var(v))
    }
}

impl<F: FnMut(&Variable) -> Variable> VarMap for F {
    fn map_var(&mut self, v: &Variable) -> Variable {
        self(v)
    }
}

impl GraphPattern {
    pub fn map_vars(&self, m: &mut impl VarMap) -> GraphPattern {
        use GraphPattern as P;
        let bx = |p: &GraphPattern, m: &mut _| Box::new(p.map_vars(m));
        match self {
            P::Bgp(ts) => P::Bgp(
                ts.iter()
                    .map(|t| {
                        let mut pos = |tp: &TermPattern| match tp {
                            TermPattern::Var(v) => m.map_triple_var(v),
                            TermPattern::Term(_) => tp.clone(),
                        };
                        TriplePattern {
                            subject: pos(&t.subject),
                            predicate: pos(&t.predicate),
                            object: pos(&t.object),
                        }
                    })
                    .collect(),
            ),
            P::Join(l, r) => P::Join(bx(l, m), bx(r, m)),
            P::Union(l, r) => P::Union(bx(l, m), bx(r, m)),
            P::Optional(l, r) => P::Optional(bx(l, m), bx(r, m)),
            P::Minus(l, r) => P::Minus(bx(l, m), bx(r, m)),
            P::Graph { name, inner } => P::Graph {
                name: match name {
                    GraphName::Var(v) => GraphName::Var(m.map_var(v)),
                    GraphName::Iri(_) => name.clone(),
                },
                inner: bx(inner, m),
            },
            P::Service { iri, inner } => P::Service {
                iri: iri.clone(),
                inner: bx(inner, m),
            },
            P::Filter { inner, condition } => P::Filter {
                inner: bx(inner, m),
                condition: condition.map_vars(m),
            },
            P::Bind { inner, expr, var } => P::Bind {
                inner: bx(inner, m),
                expr: expr.map_vars(m),
                var: m.map_var(var),
            },
            P::Values { vars, rows } => P::Values {
                vars: vars.iter().map(|v| m.map_var(v)).collect(),
                rows: rows.clone(),
            },
            P::SubSelect { projection, inner } => P::SubSelect {
                projection: match projection {
                    Projection::Star => Projection::Star,
                    Projection::Vars(vs) => Projection::Vars(vs.iter().map(|v| m.map_var(v)).collect()),
                },
                inner: bx(inner, m),
            },
        }
    }
}

impl Expression {
    pub fn map_vars(&self, m: &mut impl VarMap) -> Expression {
        use Expression as E;
        let bx = |e: &Expression, m: &mut _| Box::new(e.map_vars(m));
        match self {
            E::Const(_) => self.clone(),
            E::Var(v) => m.map_expr_var(v),
            E::Bound(v) => m.map_bound(v),
            E::Compare(op, l, r) => E::Compare(*op, bx(l, m), bx(r, m)),
            E::And(l, r) => E::And(bx(l, m), bx(r, m)),
            E::Or(l, r) => E::Or(bx(l, m), bx(r, m)),
            E::Add(l, r) => E::Add(bx(l, m), bx(r, m)),
            E::Not(e) => E::Not(bx(e, m)),
            E::Exists(p) => E::Exists(Box::new(p.map_vars(m))),
        }
    }
}

/// Variables in order of first occurrence (left to right, depth first).
pub trait Variables {
    fn visit_vars(&self, f: &mut dyn FnMut(&Variable));

    fn vars_in_order(&self) -> Vec<Variable> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if seen.insert(v.clone()) {
                out.push(v.clone());
            }
        });
        out
    }

    /// Every variable occurring anywhere, including EXISTS bodies,
    /// projections, VALUES headers and `bound` arguments.
    fn vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.clone());
        });
        out
    }
}

impl Variables for GraphPattern {
    fn visit_vars(&self, f: &mut dyn FnMut(&Variable)) {
        use GraphPattern as P;
        match self {
            P::Bgp(ts) => ts
                .iter()
                .flat_map(TriplePattern::positions)
                .filter_map(TermPattern::as_var)
                .for_each(&mut *f),
            P::Join(l, r) | P::Union(l, r) | P::Optional(l, r) | P::Minus(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
            P::Graph { name, inner } => {
                if let GraphName::Var(v) = name {
                    f(v);
                }
                inner.visit_vars(f);
            }
            P::Service { inner, .. } => inner.visit_vars(f),
            P::Filter { inner, condition } => {
                inner.visit_vars(f);
                condition.visit_vars(f);
            }
            P::Bind { inner, expr, var } => {
                inner.visit_vars(f);
                expr.visit_vars(f);
                f(var);
            }
            P::Values { vars, .. } => vars.iter().for_each(&mut *f),
            P::SubSelect { projection, inner } => {
                if let Projection::Vars(vs) = projection {
                    vs.iter().for_each(&mut *f);
                }
                inner.visit_vars(f);
            }
        }
    }
}

impl Variables for Expression {
    fn visit_vars(&self, f: &mut dyn FnMut(&Variable)) {
        use Expression as E;
        match self {
            E::Const(_) => {}
            E::Var(v) | E::Bound(v) => f(v),
            E::Compare(_, l, r) | E::And(l, r) | E::Or(l, r) | E::Add(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
            E::Not(e) => e.visit_vars(f),
            E::Exists(p) => p.visit_vars(f),
        }
    }
}

/// Largest fresh index occurring in `x`, if any.
pub fn max_fresh_index(x: &impl Variables) -> Option<u32> {
    let mut max = None;
    x.visit_vars(&mut |v| {
        if let Some(i) = v.fresh_index() {
            max = max.max(Some(i));
        }
    });
    max
}

/// Calls `f` on every triple pattern inside BGPs, including those nested in
/// EXISTS bodies.
pub fn visit_triples(p: &GraphPattern, f: &mut dyn FnMut(&TriplePattern)) {
    use GraphPattern as P;
    match p {
        P::Bgp(ts) => ts.iter().for_each(&mut *f),
        P::Join(l, r) | P::Union(l, r) | P::Optional(l, r) | P::Minus(l, r) => {
            visit_triples(l, f);
            visit_triples(r, f);
        }
        P::Graph { inner, .. } | P::Service { inner, .. } | P::SubSelect { inner, .. } => {
            visit_triples(inner, f)
        }
        P::Filter { inner, condition } => {
            visit_triples(inner, f);
            visit_expr_triples(condition, f);
        }
        P::Bind { inner, expr, .. } => {
            visit_triples(inner, f);
            visit_expr_triples(expr, f);
        }
        P::Values { .. } => {}
    }
}

pub fn visit_expr_triples(e: &Expression, f: &mut dyn FnMut(&TriplePattern)) {
    use Expression as E;
    match e {
        E::Const(_) | E::Var(_) | E::Bound(_) => {}
        E::Compare(_, l, r) | E::And(l, r) | E::Or(l, r) | E::Add(l, r) => {
            visit_expr_triples(l, f);
            visit_expr_triples(r, f);
        }
        E::Not(e) => visit_expr_triples(e, f),
        E::Exists(p) => visit_triples(p, f),
    }
}
