//! Evaluate one query under all three semantics and print JSON results.

use exists_lab::fixtures::FAMILY_DATA;
use exists_lab::results::{result_vars, to_json_string};
use exists_lab::{eval_query, parse_data, parse_query, Semantics};

fn main() {
    let data = parse_data(FAMILY_DATA).expect("valid data");
    let query = parse_query(
        "SELECT ?parent WHERE { ?parent :country :j \
         FILTER(EXISTS { SELECT ?child WHERE { ?child :parent ?parent } }) }",
    )
    .expect("valid query");
    for sem in Semantics::ALL {
        let solutions = eval_query(&data, &query, sem).expect("evaluates");
        println!("{sem}: {}", to_json_string(&result_vars(&query), &solutions));
    }
}
