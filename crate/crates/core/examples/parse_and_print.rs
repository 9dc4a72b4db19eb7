//! Parse a query into the algebra and serialize it again.

use exists_lab::{parse_query, serialize};

fn main() {
    let text = "SELECT ?parent WHERE { ?parent :country :j FILTER(EXISTS { ?child :parent ?parent }) }";
    let query = parse_query(text).expect("valid query");
    println!("{query:#?}");
    println!("{}", serialize(&query));
}
