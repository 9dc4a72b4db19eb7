//! The variables a pattern can bind.

use exists_lab::{in_domain, parse_pattern};

fn main() {
    for text in [
        "{ ?x :p ?y } UNION { ?x :q ?z }",
        "{ ?x :p ?y } MINUS { ?y :q ?z }",
        "{ SELECT ?x WHERE { ?x :p ?y } }",
        "?x :p ?y FILTER(?w = 1)",
        "{ ?x :p ?y } BIND(?y + 1 AS ?z)",
    ] {
        let p = parse_pattern(text).expect("valid pattern");
        let vars: Vec<String> = in_domain(&p).iter().map(ToString::to_string).collect();
        println!("{text:<40} -> {}", vars.join(" "));
    }
}
