//! RDF terms, triples, graphs and datasets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Namespace the bare `:` prefix expands to when a document does not bind it.
pub const DEFAULT_NAMESPACE: &str = "http://example.org/";

pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("blank node label must not be empty")]
    EmptyBlankLabel,
    #[error("`{0}` is not a valid integer lexical form")]
    BadInteger(String),
    #[error("`{0}` is not a valid boolean lexical form")]
    BadBoolean(String),
    #[error("triple predicate must be an IRI, found {0}")]
    NonIriPredicate(Term),
    #[error("triple subject must be an IRI or blank node, found {0}")]
    LiteralSubject(Term),
}

/// An RDF term. Equality is exact structural equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    /// A literal with its lexical form; `datatype` is `None` for plain strings.
    Literal {
        value: String,
        datatype: Option<String>,
    },
    Blank(String),
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Result<Self, TermError> {
        let iri = iri.into();
        if iri.is_empty() {
            return Err(TermError::EmptyIri);
        }
        Ok(Term::Iri(iri))
    }

    /// IRI in the default namespace, e.g. `Term::local("a")` is `:a`.
    pub fn local(name: &str) -> Self {
        Term::Iri(format!("{DEFAULT_NAMESPACE}{name}"))
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if label.is_empty() {
            return Err(TermError::EmptyBlankLabel);
        }
        Ok(Term::Blank(label))
    }

    pub fn string(value: impl Into<String>) -> Self {
        Term::Literal {
            value: value.into(),
            datatype: None,
        }
    }

    pub fn integer(value: i64) -> Self {
        Term::Literal {
            value: value.to_string(),
            datatype: Some(XSD_INTEGER.to_owned()),
        }
    }

    pub fn boolean(value: bool) -> Self {
        Term::Literal {
            value: value.to_string(),
            datatype: Some(XSD_BOOLEAN.to_owned()),
        }
    }

    /// Builds a typed literal, validating the lexical form of the datatypes
    /// the evaluator knows about.
    pub fn typed_literal(
        value: impl Into<String>,
        datatype: impl Into<String>,
    ) -> Result<Self, TermError> {
        let value = value.into();
        let datatype = datatype.into();
        match datatype.as_str() {
            XSD_INTEGER if parse_integer(&value).is_none() => {
                return Err(TermError::BadInteger(value))
            }
            XSD_BOOLEAN if value != "true" && value != "false" => {
                return Err(TermError::BadBoolean(value))
            }
            XSD_STRING => return Ok(Term::string(value)),
            _ => {}
        }
        Ok(Term::Literal {
            value,
            datatype: Some(datatype),
        })
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Term::Literal {
                value,
                datatype: Some(dt),
            } if dt == XSD_INTEGER => parse_integer(value),
            _ => None,
        }
    }

    pub fn as_boolean(&self) -> Option<bool> {
        match self {
            Term::Literal {
                value,
                datatype: Some(dt),
            } if dt == XSD_BOOLEAN => match value.as_str() {
                "true" => Some(true),
                "false" => Some(false),
                _ => None,
            },
            _ => None,
        }
    }

    /// The part after the default namespace, if this IRI can be written `:local`.
    pub fn default_local_name(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => iri
                .strip_prefix(DEFAULT_NAMESPACE)
                .filter(|local| is_local_name(local)),
            _ => None,
        }
    }
}

pub(crate) fn parse_integer(s: &str) -> Option<i64> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub(crate) fn is_local_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Compact concrete syntax shared by the query and data serializers:
/// `:local` for default-namespace IRIs, bare integers and booleans.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => match self.default_local_name() {
                Some(local) => write!(f, ":{local}"),
                None => write!(f, "<{iri}>"),
            },
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal { value, datatype } => match datatype.as_deref() {
                None => f.write_str(&escape_string(value)),
                Some(XSD_INTEGER) if parse_integer(value).is_some() => f.write_str(value),
                Some(XSD_BOOLEAN) if value == "true" || value == "false" => f.write_str(value),
                Some(dt) => write!(f, "{}^^<{dt}>", escape_string(value)),
            },
        }
    }
}

/// A data triple. Construction checks the positional constraints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        if subject.is_literal() {
            return Err(TermError::LiteralSubject(subject));
        }
        if !predicate.is_iri() {
            return Err(TermError::NonIriPredicate(predicate));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

pub type Graph = BTreeSet<Triple>;

/// Every term occurring in any position of `graph`.
pub fn graph_terms(graph: &Graph) -> BTreeSet<Term> {
    graph
        .iter()
        .flat_map(|t| t.terms())
        .cloned()
        .collect()
}

/// A default graph plus named graphs. Immutable once loaded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    default: Graph,
    named: BTreeMap<String, Graph>,
}

impl Dataset {
    pub fn new(default: Graph, named: BTreeMap<String, Graph>) -> Self {
        Dataset { default, named }
    }

    pub fn default_graph(&self) -> &Graph {
        &self.default
    }

    /// Named graph lookup; declared names always resolve, unknown names yield `None`.
    pub fn named_graph(&self, name: &str) -> Option<&Graph> {
        self.named.get(name)
    }

    pub fn named_graphs(&self) -> impl Iterator<Item = (&str, &Graph)> {
        self.named.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.default.len() + self.named.values().map(BTreeSet::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0 && self.named.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_terms_collapses_duplicates() {
        let a = Term::local("a");
        let p = Term::local("p");
        let g: Graph = [Triple::new(a.clone(), p.clone(), a.clone()).unwrap()].into();
        assert_eq!(graph_terms(&g), [a, p].into());
        assert!(graph_terms(&Graph::new()).is_empty());
    }

    #[test]
    fn triple_rejects_bad_positions() {
        let a = Term::local("a");
        assert!(matches!(
            Triple::new(a.clone(), Term::integer(1), a.clone()),
            Err(TermError::NonIriPredicate(_))
        ));
        assert!(matches!(
            Triple::new(Term::integer(1), a.clone(), a),
            Err(TermError::LiteralSubject(_))
        ));
    }

    #[test]
    fn integer_literals_validate() {
        assert!(Term::typed_literal("12", XSD_INTEGER).is_ok());
        assert!(Term::typed_literal("-3", XSD_INTEGER).is_ok());
        assert_eq!(
            Term::typed_literal("1.5", XSD_INTEGER),
            Err(TermError::BadInteger("1.5".into()))
        );
        assert_eq!(Term::iri(""), Err(TermError::EmptyIri));
        assert_eq!(Term::blank(""), Err(TermError::EmptyBlankLabel));
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(Term::local("a").to_string(), ":a");
        assert_eq!(Term::Iri("urn:x".into()).to_string(), "<urn:x>");
        assert_eq!(Term::integer(-4).to_string(), "-4");
        assert_eq!(Term::string("a\"b").to_string(), "\"a\\\"b\"");
        assert_eq!(Term::boolean(true).to_string(), "true");
    }
}
