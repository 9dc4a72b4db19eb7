//! Outer blank nodes are compared as values, never turned into
//! existentials inside a triple pattern.

use exists_lab::solution::parse_mapping;
use exists_lab::{bind_pattern, eval_query, parse_data, parse_pattern, serialize, NormalizeOptions, Semantics};

fn main() {
    let data = parse_data(":a :p :x .\n_:n :p :y .").expect("valid data");
    let body = parse_pattern("?s :p ?o FILTER(?s = ?t)").expect("valid pattern");
    let mu = parse_mapping("?t=_:other").expect("valid mapping");

    // Pasting the blank node into the triple would match every subject.
    let naive = parse_pattern("_:other :p ?o").expect("valid pattern");
    let naive_count = eval_query(&data, &naive, Semantics::S2).expect("evaluates").len();
    println!("naive: {} -> {naive_count} solutions", serialize(&naive));

    for sem in [Semantics::S2, Semantics::S3] {
        let bound = bind_pattern(&body, &mu, sem, &NormalizeOptions::default());
        let solutions = eval_query(&data, &bound, sem).expect("evaluates");
        println!("{sem}: {} -> {} solutions", serialize(&bound), solutions.len());
    }
}
