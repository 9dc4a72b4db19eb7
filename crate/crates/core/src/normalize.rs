//! Normalization of patterns and expressions into `(P′, d, g)`.
//!
//! `P′` uses only fresh variables. `d` records which fresh variables stand
//! for the in-domain variables of the input (its output role); `g` records
//! which fresh variables may be replaced by values of an outer solution
//! (its input role). The three semantics differ only in how they split
//! variables between the two roles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{
    max_fresh_index, visit_triples, CompareOp, Expression, GraphName, GraphPattern, Projection, TermPattern,
    Variable, Variables,
};
use crate::scope::{expand_star, expand_stars, in_domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semantics {
    S1,
    S2,
    S3,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::S1, Semantics::S2, Semantics::S3];
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::S1 => "s1",
            Semantics::S2 => "s2",
            Semantics::S3 => "s3",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown semantics `{0}` (expected s1, s2 or s3)")]
pub struct UnknownSemantics(String);

impl FromStr for Semantics {
    type Err = UnknownSemantics;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Semantics::S1),
            "s2" => Ok(Semantics::S2),
            "s3" => Ok(Semantics::S3),
            _ => Err(UnknownSemantics(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("S1 expression normalization undefined")]
    S1Expression,
}

/// A finite partial map between variables. As a `d` or `g` component the
/// keys are fresh and the values are the variables they stand for.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VarRenaming(BTreeMap<Variable, Variable>);

impl VarRenaming {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Variable) -> Option<&Variable> {
        self.0.get(v)
    }

    pub fn insert(&mut self, key: Variable, value: Variable) -> Option<Variable> {
        self.0.insert(key, value)
    }

    pub fn contains_key(&self, v: &Variable) -> bool {
        self.0.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Variable)> {
        self.0.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Variable> {
        self.0.keys()
    }

    pub fn range(&self) -> BTreeSet<Variable> {
        self.0.values().cloned().collect()
    }

    /// Some key mapped to `value`. Unique when the map is injective.
    pub fn key_for(&self, value: &Variable) -> Option<&Variable> {
        self.0.iter().find(|(_, v)| *v == value).map(|(k, _)| k)
    }

    pub fn is_injective(&self) -> bool {
        self.range().len() == self.0.len()
    }

    pub fn extend(&mut self, other: VarRenaming) {
        self.0.extend(other.0);
    }

    fn apply(&self, v: &Variable) -> Variable {
        self.0.get(v).cloned().unwrap_or_else(|| v.clone())
    }
}

impl FromIterator<(Variable, Variable)> for VarRenaming {
    fn from_iter<I: IntoIterator<Item = (Variable, Variable)>>(iter: I) -> Self {
        VarRenaming(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VarRenaming {
    type Item = (&'a Variable, &'a Variable);
    type IntoIter = std::collections::btree_map::Iter<'a, Variable, Variable>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Prints one `fresh <- original` line per entry.
impl fmt::Display for VarRenaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.0 {
            writeln!(f, "{k} <- {v}")?;
        }
        Ok(())
    }
}

/// Consistent renaming of variables by a [`VarRenaming`]. Applied to a
/// renaming it renames the keys.
pub trait Rename {
    fn renamed(&self, m: &VarRenaming) -> Self;
}

impl Rename for GraphPattern {
    fn renamed(&self, m: &VarRenaming) -> Self {
        self.map_vars(&mut |v: &Variable| m.apply(v))
    }
}

impl Rename for Expression {
    fn renamed(&self, m: &VarRenaming) -> Self {
        self.map_vars(&mut |v: &Variable| m.apply(v))
    }
}

impl Rename for VarRenaming {
    fn renamed(&self, m: &VarRenaming) -> Self {
        self.iter().map(|(k, v)| (m.apply(k), v.clone())).collect()
    }
}

/// Maps each key `y` of `g` whose image is also an image of `f` to the key
/// of `f` with that image. Renaming `g` by the result agrees with `f` on
/// the shared originals. `f` must be injective.
pub fn cr(f: &VarRenaming, g: &VarRenaming) -> VarRenaming {
    let inverse: BTreeMap<&Variable, &Variable> = f.iter().map(|(k, v)| (v, k)).collect();
    g.iter()
        .filter_map(|(y, v)| inverse.get(v).map(|x| (y.clone(), (*x).clone())))
        .collect()
}

/// `!(bound(x) && bound(y)) || x = y`: true unless both are bound to
/// different terms.
pub fn filter_link(x: &Variable, y: &Variable) -> Expression {
    Expression::or(
        Expression::not(Expression::and(
            Expression::Bound(x.clone()),
            Expression::Bound(y.clone()),
        )),
        Expression::compare(
            CompareOp::Eq,
            Expression::Var(x.clone()),
            Expression::Var(y.clone()),
        ),
    )
}

fn with_links(mut p: GraphPattern, links: Vec<(Variable, Variable)>) -> GraphPattern {
    for (x, y) in links {
        p = GraphPattern::filter(p, filter_link(&x, &y));
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Normalization<T> {
    pub pattern: T,
    pub d: VarRenaming,
    pub g: VarRenaming,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fragment {
    Pattern(GraphPattern),
    Expression(Expression),
}

impl Variables for Fragment {
    fn visit_vars(&self, f: &mut dyn FnMut(&Variable)) {
        match self {
            Fragment::Pattern(p) => p.visit_vars(f),
            Fragment::Expression(e) => e.visit_vars(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Lowest fresh index handed out. Indices already used by the input
    /// are always skipped.
    pub seed: u32,
    /// S3 only: correlate unprojected sub-select variables. Turning this
    /// off is a debugging aid; S3 then agrees with S2 on sub-selects.
    pub s3_select_links: bool,
    /// S3 only: correlate MINUS variables that the left side does not bind.
    pub s3_minus_links: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            s3_select_links: true,
            s3_minus_links: true,
        }
    }
}

impl NormalizeOptions {
    fn first_fresh(&self, used: Option<u32>) -> u32 {
        used.map_or(self.seed, |i| self.seed.max(i + 1))
    }
}

pub fn normalize(
    fragment: &Fragment,
    sem: Semantics,
    opts: &NormalizeOptions,
) -> Result<Normalization<Fragment>, NormalizeError> {
    Ok(match fragment {
        Fragment::Pattern(p) => {
            let n = normalize_pattern(p, sem, opts);
            Normalization {
                pattern: Fragment::Pattern(n.pattern),
                d: n.d,
                g: n.g,
            }
        }
        Fragment::Expression(e) => {
            let n = normalize_expression(e, sem, opts)?;
            Normalization {
                pattern: Fragment::Expression(n.pattern),
                d: n.d,
                g: n.g,
            }
        }
    })
}

pub fn normalize_pattern(p: &GraphPattern, sem: Semantics, opts: &NormalizeOptions) -> Normalization<GraphPattern> {
    let mut n = Normalizer::new(sem, *opts, max_fresh_index(p));
    let p = expand_stars(p);
    match sem {
        Semantics::S1 => n.s1(&p),
        Semantics::S2 | Semantics::S3 => n.pattern(&p),
    }
}

pub fn normalize_expression(
    e: &Expression,
    sem: Semantics,
    opts: &NormalizeOptions,
) -> Result<Normalization<Expression>, NormalizeError> {
    if sem == Semantics::S1 {
        return Err(NormalizeError::S1Expression);
    }
    let mut n = Normalizer::new(sem, *opts, max_fresh_index(e));
    Ok(n.expression(e))
}

pub fn norm_s1(p: &GraphPattern) -> Normalization<GraphPattern> {
    normalize_pattern(p, Semantics::S1, &NormalizeOptions::default())
}

pub fn norm_s2(p: &GraphPattern) -> Normalization<GraphPattern> {
    normalize_pattern(p, Semantics::S2, &NormalizeOptions::default())
}

pub fn norm_s3(p: &GraphPattern) -> Normalization<GraphPattern> {
    normalize_pattern(p, Semantics::S3, &NormalizeOptions::default())
}

struct Normalizer {
    sem: Semantics,
    opts: NormalizeOptions,
    next: u32,
}

impl Normalizer {
    fn new(sem: Semantics, opts: NormalizeOptions, used: Option<u32>) -> Self {
        Normalizer {
            sem,
            next: opts.first_fresh(used),
            opts,
        }
    }

    fn fresh(&mut self) -> Variable {
        let v = Variable::Fresh(self.next);
        self.next += 1;
        v
    }

    fn key_or_fresh(&mut self, d: &VarRenaming, v: &Variable) -> Variable {
        match d.key_for(v) {
            Some(k) => k.clone(),
            None => self.fresh(),
        }
    }

    /// One fresh variable per in-domain variable, recorded in `d`; every
    /// other variable gets an unrecorded fresh name. Scoping is ignored.
    fn s1(&mut self, p: &GraphPattern) -> Normalization<GraphPattern> {
        let dom = in_domain(p);
        let mut d = VarRenaming::new();
        let mut h = VarRenaming::new();
        for v in p.vars_in_order() {
            let x = self.fresh();
            if dom.contains(&v) {
                d.insert(x.clone(), v.clone());
            }
            h.insert(v, x);
        }
        Normalization {
            pattern: p.renamed(&h),
            d,
            g: VarRenaming::new(),
        }
    }

    fn fresh_for(&mut self, vars: impl IntoIterator<Item = Variable>) -> (VarRenaming, VarRenaming) {
        let mut d = VarRenaming::new();
        let mut inv = VarRenaming::new();
        for v in vars {
            if inv.contains_key(&v) {
                continue;
            }
            let x = self.fresh();
            d.insert(x.clone(), v.clone());
            inv.insert(v, x);
        }
        (d, inv)
    }

    fn pattern(&mut self, p: &GraphPattern) -> Normalization<GraphPattern> {
        use GraphPattern as P;
        match p {
            P::Bgp(_) => {
                let (d, inv) = self.fresh_for(p.vars_in_order());
                Normalization {
                    pattern: p.renamed(&inv),
                    d,
                    g: VarRenaming::new(),
                }
            }
            P::Join(l, r) | P::Union(l, r) | P::Optional(l, r) => {
                let q = self.pattern(l);
                let r = self.pattern(r);
                let f = cr(&q.d, &r.d);
                let right = Box::new(r.pattern.renamed(&f));
                let left = Box::new(q.pattern);
                let mut d = q.d;
                d.extend(r.d.renamed(&f));
                let mut g = q.g;
                g.extend(r.g);
                let pattern = match p {
                    P::Join(..) => P::Join(left, right),
                    P::Union(..) => P::Union(left, right),
                    _ => P::Optional(left, right),
                };
                Normalization { pattern, d, g }
            }
            P::Minus(l, r) => {
                let q = self.pattern(l);
                let r = self.pattern(r);
                let f = cr(&q.d, &r.d);
                let mut right = r.pattern.renamed(&f);
                let mut g = q.g;
                g.extend(r.g);
                if self.sem == Semantics::S3 && self.opts.s3_minus_links {
                    let mut links = Vec::new();
                    for (x, v) in r.d.iter().filter(|(x, _)| !f.contains_key(x)) {
                        let y = self.fresh();
                        g.insert(y.clone(), v.clone());
                        links.push((x.clone(), y));
                    }
                    right = with_links(right, links);
                }
                Normalization {
                    pattern: GraphPattern::minus(q.pattern, right),
                    d: q.d,
                    g,
                }
            }
            P::Graph { name, inner } => {
                let mut q = self.pattern(inner);
                let name = match name {
                    GraphName::Iri(_) => name.clone(),
                    GraphName::Var(v) => {
                        let x = self.key_or_fresh(&q.d, v);
                        q.d.insert(x.clone(), v.clone());
                        GraphName::Var(x)
                    }
                };
                Normalization {
                    pattern: P::Graph {
                        name,
                        inner: Box::new(q.pattern),
                    },
                    d: q.d,
                    g: q.g,
                }
            }
            P::Service { iri, inner } => {
                let q = self.pattern(inner);
                Normalization {
                    pattern: P::Service {
                        iri: iri.clone(),
                        inner: Box::new(q.pattern),
                    },
                    d: q.d,
                    g: q.g,
                }
            }
            P::Filter { inner, condition } => {
                let q = self.pattern(inner);
                let (condition, g) = self.correlate(&q, condition);
                Normalization {
                    pattern: GraphPattern::filter(q.pattern, condition),
                    d: q.d,
                    g,
                }
            }
            P::Bind { inner, expr, var } => {
                let q = self.pattern(inner);
                let (expr, g) = self.correlate(&q, expr);
                let x = self.key_or_fresh(&q.d, var);
                let mut d = q.d;
                d.insert(x.clone(), var.clone());
                Normalization {
                    pattern: GraphPattern::bind(q.pattern, expr, x),
                    d,
                    g,
                }
            }
            P::Values { vars, rows } => {
                let (d, inv) = self.fresh_for(vars.iter().cloned());
                Normalization {
                    pattern: P::Values {
                        vars: vars.iter().map(|v| inv.apply(v)).collect(),
                        rows: rows.clone(),
                    },
                    d,
                    g: VarRenaming::new(),
                }
            }
            P::SubSelect {
                projection: Projection::Star,
                ..
            } => self.pattern(&expand_star(p)),
            P::SubSelect {
                projection: Projection::Vars(vars),
                inner,
            } => {
                let q = self.pattern(inner);
                let mut d = VarRenaming::new();
                let mut projected = Vec::with_capacity(vars.len());
                for v in vars {
                    let x = self.key_or_fresh(&q.d, v);
                    d.insert(x.clone(), v.clone());
                    projected.push(x);
                }
                let mut g = q.g;
                let mut body = q.pattern;
                if self.sem == Semantics::S3 && self.opts.s3_select_links {
                    let mut links = Vec::new();
                    for (x, v) in q.d.iter().filter(|(_, v)| !vars.contains(v)) {
                        let y = self.fresh();
                        g.insert(y.clone(), v.clone());
                        links.push((x.clone(), y));
                    }
                    body = with_links(body, links);
                }
                Normalization {
                    pattern: GraphPattern::select(projected, body),
                    d,
                    g,
                }
            }
        }
    }

    /// Normalizes a FILTER or BIND expression and ties its variables to the
    /// pattern it is attached to. Entries of the expression's `g` that now
    /// name an in-domain variable of `q` are dropped: `d` already covers
    /// them.
    fn correlate(&mut self, q: &Normalization<GraphPattern>, e: &Expression) -> (Expression, VarRenaming) {
        let c = self.expression(e);
        let f = cr(&q.d, &c.g);
        let mut g = q.g.clone();
        g.extend(c.g.iter().filter(|(y, _)| !f.contains_key(y)).map(|(y, v)| (y.clone(), v.clone())).collect());
        (c.pattern.renamed(&f), g)
    }

    /// Variables outside EXISTS get one fresh name each. Each maximal
    /// EXISTS body is normalized on its own; its in-domain variables are
    /// then tied to expression variables through filter links, so that
    /// substitution reaches them without touching any BGP.
    fn expression(&mut self, e: &Expression) -> Normalization<Expression> {
        let mut table: BTreeMap<Variable, Variable> = BTreeMap::new();
        let mut outside = Vec::new();
        collect_outside_exists(e, &mut outside);
        for v in outside {
            table.entry(v).or_insert_with(|| self.fresh());
        }
        let pattern = self.rewrite_expression(e, &mut table);
        let g = table.into_iter().map(|(v, x)| (x, v)).collect();
        Normalization {
            pattern,
            d: VarRenaming::new(),
            g,
        }
    }

    fn rewrite_expression(&mut self, e: &Expression, table: &mut BTreeMap<Variable, Variable>) -> Expression {
        use Expression as E;
        let mut bx = |e: &Expression, s: &mut Self| Box::new(s.rewrite_expression(e, table));
        match e {
            E::Const(_) => e.clone(),
            E::Var(v) => E::Var(table[v].clone()),
            E::Bound(v) => E::Bound(table[v].clone()),
            E::Compare(op, l, r) => E::Compare(*op, bx(l, self), bx(r, self)),
            E::And(l, r) => E::And(bx(l, self), bx(r, self)),
            E::Or(l, r) => E::Or(bx(l, self), bx(r, self)),
            E::Add(l, r) => E::Add(bx(l, self), bx(r, self)),
            E::Not(x) => E::Not(bx(x, self)),
            E::Exists(q) => {
                let n = self.pattern(q);
                let mut f = VarRenaming::new();
                for (y, v) in &n.g {
                    match table.get(v) {
                        Some(t) => {
                            f.insert(y.clone(), t.clone());
                        }
                        None => {
                            table.insert(v.clone(), y.clone());
                        }
                    }
                }
                let mut links = Vec::new();
                for (x, v) in &n.d {
                    let y = match table.get(v) {
                        Some(y) => y.clone(),
                        None => {
                            let y = self.fresh();
                            table.insert(v.clone(), y.clone());
                            y
                        }
                    };
                    links.push((x.clone(), y));
                }
                E::Exists(Box::new(with_links(n.pattern.renamed(&f), links)))
            }
        }
    }
}

fn collect_outside_exists(e: &Expression, out: &mut Vec<Variable>) {
    use Expression as E;
    match e {
        E::Const(_) | E::Exists(_) => {}
        E::Var(v) | E::Bound(v) => out.push(v.clone()),
        E::Compare(_, l, r) | E::And(l, r) | E::Or(l, r) | E::Add(l, r) => {
            collect_outside_exists(l, out);
            collect_outside_exists(r, out);
        }
        E::Not(x) => collect_outside_exists(x, out),
    }
}

/// Renames fresh variables to `?__f0, ?__f1, …` in order of first
/// occurrence in the pattern, then in `d`, then in `g`. Two normalizations
/// are alpha-equivalent iff their canonical forms are equal.
pub fn canonical<T: Variables + Rename>(n: &Normalization<T>) -> Normalization<T> {
    let mut m = VarRenaming::new();
    let mut next = 0;
    let mut see = |v: &Variable| {
        if v.is_fresh() && !m.contains_key(v) {
            m.insert(v.clone(), Variable::Fresh(next));
            next += 1;
        }
    };
    n.pattern.visit_vars(&mut see);
    n.d.keys().for_each(&mut see);
    n.g.keys().for_each(&mut see);
    Normalization {
        pattern: n.pattern.renamed(&m),
        d: n.d.renamed(&m),
        g: n.g.renamed(&m),
    }
}

pub fn alpha_equivalent<T: Variables + Rename + PartialEq>(a: &Normalization<T>, b: &Normalization<T>) -> bool {
    canonical(a) == canonical(b)
}

impl Rename for Fragment {
    fn renamed(&self, m: &VarRenaming) -> Self {
        match self {
            Fragment::Pattern(p) => Fragment::Pattern(p.renamed(m)),
            Fragment::Expression(e) => Fragment::Expression(e.renamed(m)),
        }
    }
}

/// A broken well-formedness condition of a normalization.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("{0} occurs in the normalized pattern but is not fresh")]
    NotFresh(Variable),
    #[error("range of d is {found:?}, expected the in-domain variables {expected:?}")]
    NotSurjective {
        expected: BTreeSet<Variable>,
        found: BTreeSet<Variable>,
    },
    #[error("d is not injective")]
    NotInjective,
    #[error("{0} is a key of both d and g")]
    Overlap(Variable),
    #[error("g-key {0} occurs inside a basic graph pattern")]
    GKeyInBgp(Variable),
}

/// Checks the invariants every normalization of `original` must satisfy.
pub fn check(original: &GraphPattern, n: &Normalization<GraphPattern>, sem: Semantics) -> Result<(), Violation> {
    let input_vars = original.vars();
    for v in n.pattern.vars().into_iter().chain(n.d.keys().cloned()).chain(n.g.keys().cloned()) {
        // Inputs may already carry fresh names (nested evaluation); those
        // must not survive either.
        if !v.is_fresh() || input_vars.contains(&v) {
            return Err(Violation::NotFresh(v));
        }
    }
    let expected = in_domain(original);
    let found = n.d.range();
    if expected != found {
        return Err(Violation::NotSurjective { expected, found });
    }
    if !n.d.is_injective() {
        return Err(Violation::NotInjective);
    }
    if let Some(k) = n.g.keys().find(|k| n.d.contains_key(k)) {
        return Err(Violation::Overlap(k.clone()));
    }
    if sem != Semantics::S1 {
        let mut hit = None;
        visit_triples(&n.pattern, &mut |t| {
            for pos in t.positions() {
                if let TermPattern::Var(v) = pos {
                    if hit.is_none() && n.g.contains_key(v) {
                        hit = Some(v.clone());
                    }
                }
            }
        });
        if let Some(v) = hit {
            return Err(Violation::GKeyInBgp(v));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TriplePattern;
    use crate::parser::{parse_expression, parse_pattern};
    use crate::term::Term;

    fn u(n: &str) -> Variable {
        Variable::user(n)
    }

    fn f(i: u32) -> Variable {
        Variable::Fresh(i)
    }

    fn ren(pairs: &[(Variable, Variable)]) -> VarRenaming {
        pairs.iter().cloned().collect()
    }

    #[test]
    fn cr_examples() {
        assert_eq!(cr(&ren(&[(f(1), u("x"))]), &ren(&[(f(2), u("x"))])), ren(&[(f(2), f(1))]));
        assert_eq!(cr(&ren(&[(f(1), u("x"))]), &VarRenaming::new()), VarRenaming::new());
        assert_eq!(cr(&ren(&[(f(1), u("x"))]), &ren(&[(f(2), u("y"))])), VarRenaming::new());
    }

    #[test]
    fn renaming_keys() {
        let m = ren(&[(u("y"), u("x"))]);
        assert_eq!(ren(&[(u("y"), u("p"))]).renamed(&m), ren(&[(u("x"), u("p"))]));
        let e = parse_expression("?y = :c").unwrap();
        assert_eq!(e.renamed(&m), parse_expression("?x = :c").unwrap());
        let p = parse_pattern("?a :p ?y").unwrap();
        assert_eq!(p.renamed(&VarRenaming::new()), p);
    }

    #[test]
    fn filter_link_shape() {
        let e = filter_link(&f(1), &f(2));
        assert_eq!(e, parse_expression("!(bound(?__f1) && bound(?__f2)) || ?__f1 = ?__f2").unwrap());
    }

    #[test]
    fn worked_example() {
        let p = parse_pattern("{ :a :p ?x } { :b :q ?y FILTER(?y < ?x) }").unwrap();
        let expected = Normalization {
            pattern: parse_pattern("{ :a :p ?__f1 } { :b :q ?__f2 FILTER(?__f2 < ?__f3) }").unwrap(),
            d: ren(&[(f(1), u("x")), (f(2), u("y"))]),
            g: ren(&[(f(3), u("x"))]),
        };
        for sem in [Semantics::S2, Semantics::S3] {
            let n = normalize_pattern(&p, sem, &NormalizeOptions::default());
            assert!(alpha_equivalent(&n, &expected), "{sem}: {n:?}");
            check(&p, &n, sem).unwrap();
        }
    }

    #[test]
    fn s1_renames_locals_without_recording_them() {
        let p = parse_pattern("?child :parent ?parent").unwrap();
        let n = norm_s1(&p);
        assert_eq!(n.d, ren(&[(f(1), u("child")), (f(2), u("parent"))]));
        assert!(n.g.is_empty());
        let inner = parse_pattern("{ SELECT ?child WHERE { ?child :parent ?parent } }").unwrap();
        let n = norm_s1(&inner);
        assert_eq!(n.d.range(), BTreeSet::from([u("child")]));
        assert!(n.pattern.vars().iter().all(Variable::is_fresh));
        assert_eq!(n.pattern.vars().len(), 2);
        let empty = norm_s1(&GraphPattern::bgp([]));
        assert_eq!(empty.pattern, GraphPattern::bgp([]));
        assert!(empty.d.is_empty());
    }

    #[test]
    fn s2_filter_inside_sub_select() {
        let p = parse_pattern(
            "{ SELECT ?child WHERE { ?child :parent ?chparent FILTER(?chparent = ?parent) } }",
        )
        .unwrap();
        let n = norm_s2(&p);
        let expected = Normalization {
            pattern: parse_pattern(
                "{ SELECT ?__f1 WHERE { ?__f1 :parent ?__f2 FILTER(?__f2 = ?__f3) } }",
            )
            .unwrap(),
            d: ren(&[(f(1), u("child"))]),
            g: ren(&[(f(3), u("parent"))]),
        };
        assert!(alpha_equivalent(&n, &expected), "{n:?}");
    }

    #[test]
    fn s3_links_unprojected_variables() {
        let p = parse_pattern("{ SELECT ?child WHERE { ?child :parent ?parent } }").unwrap();
        let expected = Normalization {
            pattern: parse_pattern(
                "{ SELECT ?__f1 WHERE { ?__f1 :parent ?__f2 \
                 FILTER(!(bound(?__f2) && bound(?__f3)) || ?__f2 = ?__f3) } }",
            )
            .unwrap(),
            d: ren(&[(f(1), u("child"))]),
            g: ren(&[(f(3), u("parent"))]),
        };
        assert!(alpha_equivalent(&norm_s3(&p), &expected));
        // S2 keeps ?parent local.
        assert!(norm_s2(&p).g.is_empty());
        let off = NormalizeOptions {
            s3_select_links: false,
            ..Default::default()
        };
        assert!(alpha_equivalent(&normalize_pattern(&p, Semantics::S3, &off), &norm_s2(&p)));
    }

    #[test]
    fn s3_minus_links_right_only_variables() {
        let p = parse_pattern("?a :p ?b MINUS { ?b :q ?v }").unwrap();
        let s2 = norm_s2(&p);
        let s3 = norm_s3(&p);
        assert!(s2.g.is_empty());
        assert_eq!(s3.g.range(), BTreeSet::from([u("v")]));
        assert_eq!(s3.d.range(), BTreeSet::from([u("a"), u("b")]));
        let GraphPattern::Minus(_, right) = &s3.pattern else { panic!() };
        assert!(matches!(**right, GraphPattern::Filter { .. }));
        check(&p, &s3, Semantics::S3).unwrap();
    }

    #[test]
    fn exists_expression_links_both_variables() {
        let e = parse_expression("EXISTS { ?child :parent ?parent }").unwrap();
        let n = normalize_expression(&e, Semantics::S2, &NormalizeOptions::default()).unwrap();
        assert!(n.d.is_empty());
        assert_eq!(n.g.range(), BTreeSet::from([u("child"), u("parent")]));
        let Expression::Exists(body) = &n.pattern else { panic!() };
        let GraphPattern::Filter { inner, .. } = &**body else { panic!() };
        assert!(matches!(**inner, GraphPattern::Filter { .. }));
        let mut in_bgp = Vec::new();
        visit_triples(body, &mut |t| in_bgp.extend(t.positions().into_iter().filter_map(|p| p.as_var().cloned())));
        assert!(in_bgp.iter().all(|v| !n.g.contains_key(v)));
    }

    #[test]
    fn outside_variables_share_keys_with_exists_bodies() {
        let e = parse_expression("?x = 1 && EXISTS { ?y :p 2 FILTER(?x = ?y) }").unwrap();
        let n = normalize_expression(&e, Semantics::S2, &NormalizeOptions::default()).unwrap();
        // one key for ?x, one for ?y
        assert_eq!(n.g.len(), 2);
        assert!(n.g.is_injective());
    }

    #[test]
    fn s1_expression_is_rejected() {
        let e = parse_expression("bound(?x)").unwrap();
        assert_eq!(
            normalize(&Fragment::Expression(e), Semantics::S1, &NormalizeOptions::default()),
            Err(NormalizeError::S1Expression)
        );
    }

    #[test]
    fn fresh_indices_skip_those_in_the_input() {
        let p = GraphPattern::bgp([TriplePattern::new(f(7), Term::local("p"), u("x"))]);
        let n = norm_s2(&p);
        assert!(n.d.keys().all(|k| k.fresh_index().unwrap() >= 8));
        check(&p, &n, Semantics::S2).unwrap();
        let seeded = normalize_pattern(
            &p,
            Semantics::S2,
            &NormalizeOptions {
                seed: 100,
                ..Default::default()
            },
        );
        assert!(seeded.d.keys().all(|k| k.fresh_index().unwrap() >= 100));
    }

    #[test]
    fn graph_variable_reuses_its_key() {
        let p = parse_pattern("GRAPH ?g { ?g :p ?x }").unwrap();
        let n = norm_s2(&p);
        assert_eq!(n.d.len(), 2);
        let p = parse_pattern("GRAPH ?g { ?s :p ?x }").unwrap();
        assert_eq!(norm_s2(&p).d.len(), 3);
    }

    #[test]
    fn semantics_from_str() {
        assert_eq!("S3".parse::<Semantics>().unwrap(), Semantics::S3);
        assert!("s4".parse::<Semantics>().is_err());
    }
}
