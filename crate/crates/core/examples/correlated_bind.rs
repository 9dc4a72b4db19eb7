//! Correlate an EXISTS body with an outer solution under each semantics.

use exists_lab::fixtures::exists_body;
use exists_lab::solution::parse_mapping;
use exists_lab::{bind_pattern, parse_query, serialize, NormalizeOptions, Semantics};

fn main() {
    let query = parse_query(
        "SELECT ?parent WHERE { ?parent :country :j \
         FILTER(EXISTS { SELECT ?child WHERE { ?child :parent ?parent } }) }",
    )
    .expect("valid query");
    let body = exists_body(&query).expect("query has EXISTS");
    let mu = parse_mapping("?parent=:a").expect("valid mapping");
    for sem in Semantics::ALL {
        let bound = bind_pattern(body, &mu, sem, &NormalizeOptions::default());
        println!("{sem}: {}", serialize(&bound));
    }
}
