//! Normalize a join whose filter reads a variable bound on the other side.

use exists_lab::{normalize_pattern, parse_pattern, serialize, NormalizeOptions, Semantics};

fn main() {
    let p = parse_pattern("{ :a :p ?x } { :b :q ?y FILTER(?y < ?x) }").expect("valid pattern");
    for sem in Semantics::ALL {
        let n = normalize_pattern(&p, sem, &NormalizeOptions::default());
        println!("{sem}: {}", serialize(&n.pattern));
        println!("  d:");
        for (fresh, original) in n.d.iter() {
            println!("    {fresh} <- {original}");
        }
        println!("  g:");
        for (fresh, original) in n.g.iter() {
            println!("    {fresh} <- {original}");
        }
    }
}
