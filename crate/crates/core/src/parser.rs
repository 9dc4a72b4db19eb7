//! Recursive-descent parser for the query fragment.
//!
//! ```text
//! query   := SELECT ( var+ | '*' ) WHERE? group
//! group   := '{' ( SELECT ... ) '}' | '{' member* '}'
//! member  := triples | group (UNION group)* | OPTIONAL group | MINUS group
//!          | GRAPH (var|iri) group | SERVICE iri group | FILTER constraint
//!          | BIND '(' expr AS var ')' | VALUES data
//! ```
//!
//! Group members combine left to right: adjacency joins, OPTIONAL and MINUS
//! take everything to their left, BIND extends it, and the group's FILTERs
//! wrap the finished group in order of appearance.

use std::collections::BTreeSet;

use crate::algebra::{
    CompareOp, Expression, GraphName, GraphPattern, Projection, TermPattern, TriplePattern,
    Variable,
};
use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::scope::in_domain;
use crate::term::{Term, DEFAULT_NAMESPACE, XSD_INTEGER};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("lexical or grammar error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("unsupported projection expression at line {line}, column {column}")]
    UnsupportedProjection { line: usize, column: usize },
}

/// Parses one `SELECT` query into a [`GraphPattern::SubSelect`].
pub fn parse_query(text: &str) -> Result<GraphPattern, ParseError> {
    let mut p = Parser::new(text)?;
    let q = p.select()?;
    p.finish()?;
    Ok(q)
}

/// Parses the members of a group without the surrounding braces; the inverse
/// of [`crate::serialize::serialize`].
pub fn parse_pattern(text: &str) -> Result<GraphPattern, ParseError> {
    let mut p = Parser::new(text)?;
    let g = p.group_body()?;
    p.finish()?;
    Ok(g)
}

pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expression()?;
    p.finish()?;
    Ok(e)
}

/// Parses a single term such as `:a`, `<urn:x>`, `1`, `"s"` or `_:b`.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a comma-separated list of `?var=term` pairs, e.g.
/// `?x=:a, ?y=1`. The empty string gives no pairs.
pub fn parse_bindings(text: &str) -> Result<Vec<(Variable, Term)>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out: Vec<(Variable, Term)> = Vec::new();
    while !p.cur.at_end() {
        if !out.is_empty() {
            p.cur.expect(&Tok::Comma)?;
        }
        let pos = p.cur.pos();
        let v = p.var()?;
        if out.iter().any(|(w, _)| *w == v) {
            return Err(SyntaxError::new(pos, format!("{v} bound twice")).into());
        }
        p.cur.expect(&Tok::Eq)?;
        out.push((v, p.term()?));
    }
    Ok(out)
}

struct Parser {
    cur: Cursor,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            cur: Cursor::new(text)?,
        })
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.cur.at_end() {
            Ok(())
        } else {
            Err(self.cur.unexpected("end of input").into())
        }
    }

    fn select(&mut self) -> Result<GraphPattern, ParseError> {
        self.cur.expect_keyword("SELECT")?;
        let projection = if self.cur.eat(&Tok::Star) {
            Projection::Star
        } else {
            let mut vars = Vec::new();
            let mut seen = BTreeSet::new();
            loop {
                let pos = self.cur.pos();
                match self.cur.peek() {
                    Some(Tok::Var(name)) => {
                        let v = Variable::from_name(name);
                        if !seen.insert(v.clone()) {
                            return Err(SyntaxError::new(
                                pos,
                                format!("duplicate projection variable {v}"),
                            )
                            .into());
                        }
                        vars.push(v);
                        self.cur.next();
                    }
                    Some(Tok::LParen) => {
                        return Err(ParseError::UnsupportedProjection {
                            line: pos.line,
                            column: pos.column,
                        })
                    }
                    _ => break,
                }
            }
            Projection::Vars(vars)
        };
        self.cur.eat_keyword("WHERE");
        let inner = self.group()?;
        Ok(GraphPattern::SubSelect {
            projection,
            inner: Box::new(inner),
        })
    }

    /// `{ ... }`, which may hold a sub-select.
    fn group(&mut self) -> Result<GraphPattern, ParseError> {
        self.cur.expect(&Tok::LBrace)?;
        let g = if self.cur.is_keyword("SELECT") {
            self.select()?
        } else {
            self.group_body()?
        };
        self.cur.expect(&Tok::RBrace)?;
        Ok(g)
    }

    fn group_body(&mut self) -> Result<GraphPattern, ParseError> {
        let mut acc: Option<GraphPattern> = None;
        let mut filters = Vec::new();
        fn join(acc: Option<GraphPattern>, x: GraphPattern) -> Option<GraphPattern> {
            Some(match acc {
                None => x,
                Some(a) => GraphPattern::join(a, x),
            })
        }
        let base = |acc: Option<GraphPattern>| acc.unwrap_or_else(|| GraphPattern::bgp([]));
        loop {
            match self.cur.peek() {
                None | Some(Tok::RBrace) => break,
                Some(Tok::Dot) => {
                    self.cur.next();
                }
                Some(Tok::LBrace) => {
                    let mut x = self.group()?;
                    while self.cur.eat_keyword("UNION") {
                        x = GraphPattern::union(x, self.group()?);
                    }
                    acc = join(acc, x);
                }
                Some(Tok::Word(w)) => match w.to_ascii_uppercase().as_str() {
                    "OPTIONAL" => {
                        self.cur.next();
                        let r = self.group()?;
                        acc = Some(GraphPattern::optional(base(acc), r));
                    }
                    "MINUS" => {
                        self.cur.next();
                        let r = self.group()?;
                        acc = Some(GraphPattern::minus(base(acc), r));
                    }
                    "GRAPH" => {
                        self.cur.next();
                        let name = match self.cur.peek() {
                            Some(Tok::Var(n)) => {
                                let v = Variable::from_name(n);
                                self.cur.next();
                                GraphName::Var(v)
                            }
                            _ => GraphName::Iri(self.iri()?),
                        };
                        let inner = Box::new(self.group()?);
                        acc = join(acc, GraphPattern::Graph { name, inner });
                    }
                    "SERVICE" => {
                        self.cur.next();
                        let iri = self.iri()?;
                        let inner = Box::new(self.group()?);
                        acc = join(acc, GraphPattern::Service { iri, inner });
                    }
                    "FILTER" => {
                        self.cur.next();
                        filters.push(self.constraint()?);
                    }
                    "BIND" => {
                        self.cur.next();
                        self.cur.expect(&Tok::LParen)?;
                        let expr = self.expression()?;
                        self.cur.expect_keyword("AS")?;
                        let pos = self.cur.pos();
                        let var = self.var()?;
                        self.cur.expect(&Tok::RParen)?;
                        let inner = base(acc);
                        if in_domain(&inner).contains(&var) {
                            return Err(SyntaxError::new(
                                pos,
                                format!("BIND target {var} is already in scope"),
                            )
                            .into());
                        }
                        acc = Some(GraphPattern::bind(inner, expr, var));
                    }
                    "VALUES" => {
                        self.cur.next();
                        let v = self.values()?;
                        acc = join(acc, v);
                    }
                    _ => {
                        let bgp = self.triples_block()?;
                        acc = join(acc, bgp);
                    }
                },
                Some(_) => {
                    let bgp = self.triples_block()?;
                    acc = join(acc, bgp);
                }
            }
        }
        Ok(filters
            .into_iter()
            .fold(base(acc), GraphPattern::filter))
    }

    fn starts_term(&self) -> bool {
        match self.cur.peek() {
            Some(
                Tok::Var(_)
                | Tok::IriRef(_)
                | Tok::PName { .. }
                | Tok::Blank(_)
                | Tok::Integer(_)
                | Tok::Str(_)
                | Tok::Minus
                | Tok::Plus,
            ) => true,
            Some(Tok::Word(w)) => w == "true" || w == "false",
            _ => false,
        }
    }

    fn triples_block(&mut self) -> Result<GraphPattern, ParseError> {
        let mut triples = Vec::new();
        loop {
            let subject = self.term_pattern()?;
            let predicate = self.term_pattern()?;
            let object = self.term_pattern()?;
            triples.push(TriplePattern {
                subject,
                predicate,
                object,
            });
            if !self.cur.eat(&Tok::Dot) || !self.starts_term() {
                break;
            }
        }
        Ok(GraphPattern::Bgp(triples))
    }

    fn term_pattern(&mut self) -> Result<TermPattern, ParseError> {
        if let Some(Tok::Var(_)) = self.cur.peek() {
            return Ok(TermPattern::Var(self.var()?));
        }
        if !self.starts_term() {
            return Err(self.cur.unexpected("a term or variable").into());
        }
        Ok(TermPattern::Term(self.term()?))
    }

    fn var(&mut self) -> Result<Variable, ParseError> {
        match self.cur.peek() {
            Some(Tok::Var(n)) => {
                let v = Variable::from_name(n);
                self.cur.next();
                Ok(v)
            }
            _ => Err(self.cur.unexpected("a variable").into()),
        }
    }

    fn iri(&mut self) -> Result<String, ParseError> {
        let pos = self.cur.pos();
        match self.term()? {
            Term::Iri(iri) => Ok(iri),
            other => Err(SyntaxError::new(pos, format!("expected an IRI, found {other}")).into()),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.cur.pos();
        let bad = |msg: String| ParseError::from(SyntaxError::new(pos, msg));
        let tok = self.cur.next().ok_or_else(|| self.cur.unexpected("a term"))?;
        Ok(match tok {
            Tok::IriRef(iri) => Term::Iri(iri),
            Tok::PName { prefix, local } if prefix.is_empty() => {
                Term::Iri(format!("{DEFAULT_NAMESPACE}{local}"))
            }
            Tok::PName { prefix, .. } => return Err(bad(format!("unknown prefix `{prefix}:`"))),
            Tok::Blank(label) => Term::Blank(label),
            Tok::Integer(digits) => Term::typed_literal(digits, XSD_INTEGER)
                .map_err(|e| bad(e.to_string()))?,
            sign @ (Tok::Minus | Tok::Plus) => match self.cur.next() {
                Some(Tok::Integer(digits)) => {
                    Term::typed_literal(format!("{sign}{digits}"), XSD_INTEGER)
                        .map_err(|e| bad(e.to_string()))?
                }
                _ => return Err(bad("expected digits after sign".into())),
            },
            Tok::Str(value) => {
                if self.cur.eat(&Tok::Caret2) {
                    let dt = self.iri()?;
                    Term::typed_literal(value, dt).map_err(|e| bad(e.to_string()))?
                } else {
                    Term::string(value)
                }
            }
            Tok::Word(w) if w == "true" => Term::boolean(true),
            Tok::Word(w) if w == "false" => Term::boolean(false),
            other => return Err(bad(format!("expected a term, found `{other}`"))),
        })
    }

    fn values(&mut self) -> Result<GraphPattern, ParseError> {
        let (vars, single) = if self.cur.eat(&Tok::LParen) {
            let mut vars = Vec::new();
            while !self.cur.eat(&Tok::RParen) {
                vars.push(self.var()?);
            }
            (vars, false)
        } else {
            (vec![self.var()?], true)
        };
        self.cur.expect(&Tok::LBrace)?;
        let mut rows = Vec::new();
        while !self.cur.eat(&Tok::RBrace) {
            if single {
                rows.push(vec![self.data_cell()?]);
                continue;
            }
            let pos = self.cur.pos();
            self.cur.expect(&Tok::LParen)?;
            let mut row = Vec::new();
            while !self.cur.eat(&Tok::RParen) {
                row.push(self.data_cell()?);
            }
            if row.len() != vars.len() {
                return Err(SyntaxError::new(
                    pos,
                    format!("VALUES row has {} cells for {} variables", row.len(), vars.len()),
                )
                .into());
            }
            rows.push(row);
        }
        Ok(GraphPattern::Values { vars, rows })
    }

    fn data_cell(&mut self) -> Result<Option<Term>, ParseError> {
        if self.cur.eat_keyword("UNDEF") {
            Ok(None)
        } else {
            self.term().map(Some)
        }
    }

    fn constraint(&mut self) -> Result<Expression, ParseError> {
        if self.cur.eat(&Tok::LParen) {
            let e = self.expression()?;
            self.cur.expect(&Tok::RParen)?;
            Ok(e)
        } else {
            self.primary()
        }
    }

    fn expression(&mut self) -> Result<Expression, ParseError> {
        let mut e = self.conjunction()?;
        while self.cur.eat(&Tok::OrOr) {
            e = Expression::or(e, self.conjunction()?);
        }
        Ok(e)
    }

    fn conjunction(&mut self) -> Result<Expression, ParseError> {
        let mut e = self.relational()?;
        while self.cur.eat(&Tok::AndAnd) {
            e = Expression::and(e, self.relational()?);
        }
        Ok(e)
    }

    fn relational(&mut self) -> Result<Expression, ParseError> {
        let l = self.additive()?;
        let op = match self.cur.peek() {
            Some(Tok::Eq) => CompareOp::Eq,
            Some(Tok::Ne) => CompareOp::Ne,
            Some(Tok::Lt) => CompareOp::Lt,
            Some(Tok::Le) => CompareOp::Le,
            Some(Tok::Gt) => CompareOp::Gt,
            Some(Tok::Ge) => CompareOp::Ge,
            _ => return Ok(l),
        };
        self.cur.next();
        Ok(Expression::compare(op, l, self.additive()?))
    }

    fn additive(&mut self) -> Result<Expression, ParseError> {
        let mut e = self.unary()?;
        while self.cur.peek() == Some(&Tok::Plus) {
            // `+5` right after an operand is addition, not a signed literal
            self.cur.next();
            e = Expression::Add(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.cur.eat(&Tok::Bang) {
            return Ok(Expression::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        if self.cur.eat(&Tok::LParen) {
            let e = self.expression()?;
            self.cur.expect(&Tok::RParen)?;
            return Ok(e);
        }
        if let Some(Tok::Var(_)) = self.cur.peek() {
            return Ok(Expression::Var(self.var()?));
        }
        if self.cur.eat_keyword("BOUND") {
            self.cur.expect(&Tok::LParen)?;
            let v = self.var()?;
            self.cur.expect(&Tok::RParen)?;
            return Ok(Expression::Bound(v));
        }
        if self.cur.eat_keyword("EXISTS") {
            return Ok(Expression::exists(self.group()?));
        }
        if self.cur.is_keyword("NOT")
            && matches!(self.cur.peek_at(1), Some(Tok::Word(w)) if w.eq_ignore_ascii_case("EXISTS"))
        {
            self.cur.next();
            self.cur.next();
            return Ok(Expression::not(Expression::exists(self.group()?)));
        }
        if self.starts_term() {
            return Ok(Expression::Const(self.term()?));
        }
        Err(self.cur.unexpected("an expression").into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Variable {
        Variable::user(n)
    }
    fn l(n: &str) -> TermPattern {
        TermPattern::Term(Term::local(n))
    }

    #[test]
    fn binding_lists() {
        assert_eq!(
            parse_bindings("?x=:a, ?y=1").unwrap(),
            vec![(v("x"), Term::local("a")), (v("y"), Term::integer(1))]
        );
        assert!(parse_bindings("").unwrap().is_empty());
        assert!(parse_bindings("?x=:a,?x=:b").is_err());
        assert!(parse_bindings("?x :a").is_err());
    }

    #[test]
    fn minimal_query() {
        let q = parse_query("SELECT * WHERE { ?x :p ?y }").unwrap();
        assert_eq!(
            q,
            GraphPattern::select_star(GraphPattern::bgp([TriplePattern::new(v("x"), l("p"), v("y"))]))
        );
    }

    #[test]
    fn filter_attaches_to_whole_group() {
        let q = parse_pattern("?a :p ?b FILTER(?a = 1) { ?b :q ?c }").unwrap();
        assert_eq!(
            q,
            GraphPattern::filter(
                GraphPattern::join(
                    GraphPattern::bgp([TriplePattern::new(v("a"), l("p"), v("b"))]),
                    GraphPattern::bgp([TriplePattern::new(v("b"), l("q"), v("c"))]),
                ),
                Expression::compare(CompareOp::Eq, Expression::Var(v("a")), Expression::Const(Term::integer(1))),
            )
        );
    }

    #[test]
    fn not_exists_is_negated_exists() {
        let e = parse_expression("NOT EXISTS { ?x :p ?y }").unwrap();
        assert!(matches!(e, Expression::Not(inner) if matches!(*inner, Expression::Exists(_))));
    }

    #[test]
    fn precedence() {
        let e = parse_expression("?a = 1 || ?a != 1 && bound(?b)").unwrap();
        assert!(matches!(e, Expression::Or(_, r) if matches!(*r, Expression::And(..))));
        let e = parse_expression("?a + -2 < 3").unwrap();
        assert!(matches!(e, Expression::Compare(CompareOp::Lt, l, _) if matches!(*l, Expression::Add(..))));
    }

    #[test]
    fn projection_expressions_are_rejected() {
        let err = parse_query("SELECT (?x + 1 AS ?y) WHERE { ?x :p ?z }").unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedProjection { .. }));
        assert!(err.to_string().contains("unsupported projection expression"));
    }

    #[test]
    fn grammar_errors() {
        assert!(parse_query("SELECT ?x ?x WHERE { ?x :p ?y }").is_err());
        assert!(parse_query("SELECT ?x WHERE { ?x :p }").is_err());
        assert!(parse_query("SELECT ?x WHERE { ?x ex:p ?y }").is_err());
        assert!(parse_query("SELECT ?x WHERE { ?x :p ?y BIND(1 AS ?x) }").is_err());
        assert!(parse_query("SELECT ?x WHERE { VALUES (?x ?y) { (1) } }").is_err());
        assert!(parse_query("SELECT ?x WHERE { ?x :p ?y } extra").is_err());
    }

    #[test]
    fn values_forms() {
        let p = parse_pattern("VALUES ?x { 1 UNDEF } VALUES () { () }").unwrap();
        assert_eq!(
            p,
            GraphPattern::join(
                GraphPattern::Values {
                    vars: vec![v("x")],
                    rows: vec![vec![Some(Term::integer(1))], vec![None]],
                },
                GraphPattern::unit(),
            )
        );
    }
}
