//! Result documents: SPARQL-JSON style and TSV.

use serde_json::{json, Map, Value};

use crate::algebra::{GraphPattern, Variable};
use crate::scope::in_domain;
use crate::solution::SolutionSet;
use crate::term::Term;

/// The variables a query can bind, sorted by name; used as the header.
pub fn result_vars(p: &GraphPattern) -> Vec<Variable> {
    let mut vs: Vec<_> = in_domain(p).into_iter().collect();
    vs.sort_by_cached_key(Variable::name);
    vs
}

fn term_json(t: &Term) -> Value {
    match t {
        Term::Iri(iri) => json!({"type": "uri", "value": iri}),
        Term::Blank(label) => json!({"type": "bnode", "value": label}),
        Term::Literal { value, datatype: None } => json!({"type": "literal", "value": value}),
        Term::Literal {
            value,
            datatype: Some(dt),
        } => json!({"type": "literal", "value": value, "datatype": dt}),
    }
}

pub fn to_json(vars: &[Variable], omega: &SolutionSet) -> Value {
    let bindings: Vec<Value> = omega
        .iter()
        .map(|mu| {
            let row: Map<String, Value> = mu.iter().map(|(v, t)| (v.name(), term_json(t))).collect();
            Value::Object(row)
        })
        .collect();
    json!({
        "head": {"vars": vars.iter().map(Variable::name).collect::<Vec<_>>()},
        "results": {"bindings": bindings},
    })
}

pub fn to_json_string(vars: &[Variable], omega: &SolutionSet) -> String {
    serde_json::to_string_pretty(&to_json(vars, omega)).expect("JSON values serialize")
}

/// Header of `?name` columns, then one line per solution; unbound cells
/// are empty.
pub fn to_tsv(vars: &[Variable], omega: &SolutionSet) -> String {
    let mut out = vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\t");
    out.push('\n');
    for mu in omega {
        let cells: Vec<String> = vars
            .iter()
            .map(|v| mu.get(v).map(Term::to_string).unwrap_or_default())
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_query;
    use crate::solution::parse_mapping;

    #[test]
    fn json_document_shape() {
        let vars = vec![Variable::user("parent"), Variable::user("n")];
        let omega: SolutionSet = [parse_mapping("?parent=:b, ?n=1").unwrap()].into();
        let doc = to_json(&vars, &omega);
        assert_eq!(doc["head"]["vars"], json!(["parent", "n"]));
        let row = &doc["results"]["bindings"][0];
        assert_eq!(row["parent"], json!({"type": "uri", "value": "http://example.org/b"}));
        assert_eq!(row["n"]["type"], "literal");
        assert_eq!(row["n"]["value"], "1");
        assert!(row["n"]["datatype"].as_str().unwrap().ends_with("#integer"));
    }

    #[test]
    fn empty_results() {
        let doc = to_json(&[], &SolutionSet::new());
        assert_eq!(doc["results"]["bindings"], json!([]));
    }

    #[test]
    fn header_is_sorted() {
        let q = parse_query("SELECT ?z ?a WHERE { ?a :p ?z }").unwrap();
        assert_eq!(result_vars(&q), vec![Variable::user("a"), Variable::user("z")]);
    }

    #[test]
    fn tsv_leaves_unbound_cells_empty() {
        let vars = vec![Variable::user("x"), Variable::user("y")];
        let omega: SolutionSet = [parse_mapping("?x=:h").unwrap()].into();
        assert_eq!(to_tsv(&vars, &omega), "?x\t?y\n:h\t\n");
    }
}
