//! Turtle-lite: the small data syntax used for fixtures and user datasets.
//!
//! ```text
//! @prefix ex: <http://example.com/> .
//! :a :parent :b .            # `:` defaults to DEFAULT_NAMESPACE
//! GRAPH <http://g/1> { ex:x ex:p "lit"^^<http://dt> . }
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::term::{Dataset, Graph, Term, Triple, DEFAULT_NAMESPACE};

/// Parses a Turtle-lite document into a dataset.
pub fn parse_data(text: &str) -> Result<Dataset, SyntaxError> {
    let mut parser = DataParser {
        cur: Cursor::new(text)?,
        prefixes: HashMap::from([(String::new(), DEFAULT_NAMESPACE.to_owned())]),
    };
    let mut default = Graph::new();
    let mut named: BTreeMap<String, Graph> = BTreeMap::new();
    while !parser.cur.at_end() {
        if parser.cur.peek() == Some(&Tok::AtWord("prefix".into())) {
            parser.prefix_decl()?;
        } else if parser.cur.eat_keyword("GRAPH") {
            let pos = parser.cur.pos();
            let name = match parser.term()? {
                Term::Iri(iri) => iri,
                other => {
                    return Err(SyntaxError::new(
                        pos,
                        format!("graph name must be an IRI, found {other}"),
                    ))
                }
            };
            parser.cur.expect(&Tok::LBrace)?;
            let graph = named.entry(name).or_default();
            while !parser.cur.eat(&Tok::RBrace) {
                graph.insert(parser.triple(true)?);
            }
        } else {
            default.insert(parser.triple(false)?);
        }
    }
    Ok(Dataset::new(default, named))
}

/// Canonical serialization; `parse_data(&serialize_data(d)) == d`.
pub fn serialize_data(dataset: &Dataset) -> String {
    let mut out = format!("@prefix : <{DEFAULT_NAMESPACE}> .\n");
    for t in dataset.default_graph() {
        writeln!(out, "{t}").unwrap();
    }
    for (name, graph) in dataset.named_graphs() {
        writeln!(out, "GRAPH <{name}> {{").unwrap();
        for t in graph {
            writeln!(out, "  {t}").unwrap();
        }
        out.push_str("}\n");
    }
    out
}

struct DataParser {
    cur: Cursor,
    prefixes: HashMap<String, String>,
}

impl DataParser {
    fn prefix_decl(&mut self) -> Result<(), SyntaxError> {
        self.cur.next();
        let prefix = match self.cur.next() {
            Some(Tok::PName { prefix, local }) if local.is_empty() => prefix,
            _ => return Err(SyntaxError::new(self.cur.pos(), "expected `name:` after @prefix")),
        };
        let iri = match self.cur.next() {
            Some(Tok::IriRef(iri)) => iri,
            _ => return Err(SyntaxError::new(self.cur.pos(), "expected <iri> in @prefix")),
        };
        self.cur.expect(&Tok::Dot)?;
        self.prefixes.insert(prefix, iri);
        Ok(())
    }

    fn triple(&mut self, in_block: bool) -> Result<Triple, SyntaxError> {
        let pos = self.cur.pos();
        let s = self.term()?;
        let p_pos = self.cur.pos();
        let p = self.term()?;
        let o = self.term()?;
        // the final triple of a GRAPH block may omit its dot
        if !(in_block && self.cur.peek() == Some(&Tok::RBrace)) {
            self.cur.expect(&Tok::Dot)?;
        }
        if !p.is_iri() {
            return Err(SyntaxError::new(p_pos, format!("predicate must be an IRI, found {p}")));
        }
        Triple::new(s, p, o).map_err(|e| SyntaxError::new(pos, e.to_string()))
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let pos = self.cur.pos();
        let tok = self.cur.next().ok_or_else(|| self.cur.unexpected("a term"))?;
        let term = match tok {
            Tok::IriRef(iri) => Term::Iri(iri),
            Tok::PName { prefix, local } => match self.prefixes.get(&prefix) {
                Some(ns) => Term::Iri(format!("{ns}{local}")),
                None => return Err(SyntaxError::new(pos, format!("undeclared prefix `{prefix}:`"))),
            },
            Tok::Blank(label) => Term::Blank(label),
            Tok::Integer(digits) => Term::typed_literal(digits, crate::term::XSD_INTEGER)
                .map_err(|e| SyntaxError::new(pos, e.to_string()))?,
            sign @ (Tok::Minus | Tok::Plus) => match self.cur.next() {
                Some(Tok::Integer(digits)) => {
                    Term::typed_literal(format!("{sign}{digits}"), crate::term::XSD_INTEGER)
                        .map_err(|e| SyntaxError::new(pos, e.to_string()))?
                }
                _ => return Err(SyntaxError::new(pos, "expected digits after sign")),
            },
            Tok::Str(value) => {
                if self.cur.eat(&Tok::Caret2) {
                    let dt_pos = self.cur.pos();
                    match self.term()? {
                        Term::Iri(dt) => Term::typed_literal(value, dt)
                            .map_err(|e| SyntaxError::new(dt_pos, e.to_string()))?,
                        _ => return Err(SyntaxError::new(dt_pos, "datatype must be an IRI")),
                    }
                } else {
                    Term::string(value)
                }
            }
            Tok::Word(w) if w == "true" => Term::boolean(true),
            Tok::Word(w) if w == "false" => Term::boolean(false),
            other => return Err(SyntaxError::new(pos, format!("expected a term, found `{other}`"))),
        };
        Ok(term)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triple() {
        let d = parse_data(":a :parent :b .").unwrap();
        let expected =
            Triple::new(Term::local("a"), Term::local("parent"), Term::local("b")).unwrap();
        assert_eq!(d.default_graph().iter().collect::<Vec<_>>(), vec![&expected]);
    }

    #[test]
    fn empty_input() {
        assert!(parse_data("").unwrap().is_empty());
        assert!(parse_data("  # nothing here\n").unwrap().is_empty());
    }

    #[test]
    fn prefixes_literals_and_graphs() {
        let text = r#"
            @prefix ex: <http://ex.com/> .
            ex:s ex:p "hi" .
            ex:s ex:n -7 .
            ex:s ex:b true .
            ex:s ex:t "x"^^<http://dt> .
            _:b1 ex:p ex:o .
            GRAPH <http://g/1> { ex:s ex:p ex:o . ex:s ex:q ex:o }
            GRAPH <http://g/empty> { }
        "#;
        let d = parse_data(text).unwrap();
        assert_eq!(d.default_graph().len(), 5);
        assert_eq!(d.named_graph("http://g/1").unwrap().len(), 2);
        assert!(d.named_graph("http://g/empty").unwrap().is_empty());
        assert!(d.named_graph("http://g/none").is_none());
        assert_eq!(parse_data(&serialize_data(&d)).unwrap(), d);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_data(":a :p :b .\n:a 1 :b .").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
        assert!(err.message.contains("predicate"));
        let err = parse_data(":a :p :b").unwrap_err();
        assert!(err.message.contains("expected `.`"));
        assert!(parse_data("nope:a :p :b .").is_err());
        assert!(parse_data("\"s\" :p :b .").is_err());
    }
}
