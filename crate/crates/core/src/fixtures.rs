//! The ten reference queries, their two datasets and the expected result of
//! each query under each semantics.

use crate::algebra::{Expression, GraphPattern};
use crate::normalize::Semantics;
use crate::parser::{parse_query, ParseError};
use crate::solution::{parse_mapping, SolutionMapping, SolutionSet};
use crate::term::Dataset;
use crate::turtle::parse_data;

/// Family tree: three parent edges and three country edges.
pub const FAMILY_DATA: &str = "\
:a :parent :b .
:b :parent :c .
:c :parent :d .
:a :country :j .
:b :country :j .
:c :country :k .
";

/// Three chains of decreasing length over `:p`, `:q`, `:r`.
pub const CHAIN_DATA: &str = "\
:a :p :b .
:b :q :c .
:c :r :d .
:e :p :f .
:f :q :g .
:h :p :i .
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureData {
    Family,
    Chains,
}

impl FixtureData {
    pub fn text(self) -> &'static str {
        match self {
            FixtureData::Family => FAMILY_DATA,
            FixtureData::Chains => CHAIN_DATA,
        }
    }

    pub fn dataset(self) -> Dataset {
        parse_data(self.text()).expect("embedded data parses")
    }
}

const NAMED: [(&str, &str); 6] = [
    ("mu_a", "?parent=:a"),
    ("mu_b", "?parent=:b"),
    ("mu_abc", "?x=:a, ?y=:b, ?z=:c"),
    ("mu_efg", "?x=:e, ?y=:f, ?z=:g"),
    ("mu_hi", "?x=:h, ?y=:i"),
    ("mu_cd", "?z=:c, ?v=:d"),
];

/// The solution mappings the expected table is written in.
pub fn named_mapping(name: &str) -> Option<SolutionMapping> {
    NAMED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, m)| parse_mapping(m).expect("embedded mapping parses"))
}

/// Inverse of [`named_mapping`].
pub fn mapping_name(mu: &SolutionMapping) -> Option<&'static str> {
    NAMED
        .iter()
        .find(|(n, _)| named_mapping(n).as_ref() == Some(mu))
        .map(|(n, _)| *n)
}

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub id: u8,
    pub query: &'static str,
    pub data: FixtureData,
    /// Expected solutions for S1, S2 and S3, as mapping names.
    pub expected: [&'static [&'static str]; 3],
}

impl Fixture {
    pub fn parse(&self) -> Result<GraphPattern, ParseError> {
        parse_query(self.query)
    }

    pub fn expected_names(&self, sem: Semantics) -> &'static [&'static str] {
        self.expected[sem as usize]
    }

    pub fn expected(&self, sem: Semantics) -> SolutionSet {
        self.expected_names(sem)
            .iter()
            .map(|n| named_mapping(n).expect("known mapping name"))
            .collect()
    }
}

const AB: &[&str] = &["mu_a", "mu_b"];
const B: &[&str] = &["mu_b"];
const NONE: &[&str] = &[];
const ABC_HI: &[&str] = &["mu_abc", "mu_hi"];

pub const FIXTURES: [Fixture; 10] = [
    Fixture {
        id: 1,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { ?child :parent ?parent })}",
        data: FixtureData::Family,
        expected: [B, B, B],
    },
    Fixture {
        id: 2,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?parent }})}",
        data: FixtureData::Family,
        expected: [AB, AB, B],
    },
    Fixture {
        id: 3,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?chparent
                                  FILTER (?chparent = ?parent) }})}",
        data: FixtureData::Family,
        expected: [NONE, B, B],
    },
    Fixture {
        id: 4,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?chparent
                                  FILTER (bound(?parent)) }})}",
        data: FixtureData::Family,
        expected: [NONE, AB, AB],
    },
    Fixture {
        id: 5,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?chparent
                                  FILTER (?chparent = ?parent &&
                                          bound(?parent)) }})}",
        data: FixtureData::Family,
        expected: [NONE, B, B],
    },
    Fixture {
        id: 6,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child ?chparent
                          WHERE { ?child :parent ?chparent
                                  FILTER (?parent = 1 ||
                                          ?parent != 1 )}})}",
        data: FixtureData::Family,
        expected: [NONE, AB, AB],
    },
    Fixture {
        id: 7,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT *
                          WHERE { ?child :parent ?chparent
                                  FILTER (?parent = 1 ||
                                          ?parent != 1 )}})}",
        data: FixtureData::Family,
        expected: [NONE, AB, AB],
    },
    Fixture {
        id: 8,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?parent
                                  FILTER (?parent = :c)}})}",
        data: FixtureData::Family,
        expected: [AB, AB, NONE],
    },
    Fixture {
        id: 9,
        query: "SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?parent
                                  FILTER (EXISTS{?parent :parent :d})}})}",
        data: FixtureData::Family,
        expected: [AB, AB, NONE],
    },
    Fixture {
        id: 10,
        query: "SELECT *
WHERE { { { ?x :p ?y } OPTIONAL { ?y :q ?z } }
        FILTER ( EXISTS { ?z :r ?v } ) }",
        data: FixtureData::Chains,
        expected: [ABC_HI, ABC_HI, ABC_HI],
    },
];

pub fn fixture(id: u8) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.id == id)
}

/// The body of the first EXISTS in `p`, searching filters depth first.
pub fn exists_body(p: &GraphPattern) -> Option<&GraphPattern> {
    fn in_expr(e: &Expression) -> Option<&GraphPattern> {
        match e {
            Expression::Exists(q) => Some(q),
            Expression::Compare(_, l, r) | Expression::And(l, r) | Expression::Or(l, r) | Expression::Add(l, r) => {
                in_expr(l).or_else(|| in_expr(r))
            }
            Expression::Not(x) => in_expr(x),
            _ => None,
        }
    }
    use GraphPattern as P;
    match p {
        P::Filter { inner, condition } => in_expr(condition).or_else(|| exists_body(inner)),
        P::Bind { inner, expr, .. } => in_expr(expr).or_else(|| exists_body(inner)),
        P::Join(l, r) | P::Union(l, r) | P::Optional(l, r) | P::Minus(l, r) => {
            exists_body(l).or_else(|| exists_body(r))
        }
        P::Graph { inner, .. } | P::Service { inner, .. } | P::SubSelect { inner, .. } => exists_body(inner),
        P::Bgp(_) | P::Values { .. } => None,
    }
}
