//! Solution mappings and sets of them.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::Variable;
use crate::parser::{parse_bindings, ParseError};
use crate::term::Term;

/// A partial function from variables to terms; one result row.
pub type SolutionMapping = BTreeMap<Variable, Term>;

/// A duplicate-free set of solutions. Iteration order is the canonical
/// order used for output.
pub type SolutionSet = BTreeSet<SolutionMapping>;

/// True iff the two mappings agree on every shared variable.
pub fn compatible(a: &SolutionMapping, b: &SolutionMapping) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().all(|(k, v)| large.get(k).is_none_or(|w| w == v))
}

/// True iff the mappings share at least one variable.
pub fn shares_variable(a: &SolutionMapping, b: &SolutionMapping) -> bool {
    a.keys().any(|k| b.contains_key(k))
}

/// The union of two compatible mappings.
pub fn merge(a: &SolutionMapping, b: &SolutionMapping) -> SolutionMapping {
    let mut m = a.clone();
    m.extend(b.iter().map(|(k, v)| (k.clone(), v.clone())));
    m
}

/// `μ|vars`.
pub fn restrict(mu: &SolutionMapping, vars: &BTreeSet<Variable>) -> SolutionMapping {
    mu.iter()
        .filter(|(k, _)| vars.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// Parses `?x=:a, ?y=1` into a mapping.
pub fn parse_mapping(text: &str) -> Result<SolutionMapping, ParseError> {
    Ok(parse_bindings(text)?.into_iter().collect())
}

/// `{?x ↦ :a, ?y ↦ 1}`-style rendering with sorted keys.
pub fn format_mapping(mu: &SolutionMapping) -> String {
    let cells: Vec<String> = mu.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", cells.join(", "))
}

pub fn format_set(omega: &SolutionSet) -> String {
    let rows: Vec<String> = omega.iter().map(format_mapping).collect();
    format!("{{{}}}", rows.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(text: &str) -> SolutionMapping {
        parse_mapping(text).unwrap()
    }

    #[test]
    fn compatibility() {
        let cd = mu("?z=:c, ?v=:d");
        assert!(compatible(&SolutionMapping::new(), &cd));
        assert!(compatible(&mu("?z=:c"), &cd));
        assert!(!compatible(&mu("?z=:g"), &cd));
        assert!(compatible(&mu("?x=:a"), &cd));
    }

    #[test]
    fn restriction_and_merge() {
        let m = mu("?x=:a, ?y=:b");
        let only_x = BTreeSet::from([Variable::user("x")]);
        assert_eq!(restrict(&m, &only_x), mu("?x=:a"));
        assert_eq!(merge(&mu("?x=:a"), &mu("?y=:b")), m);
        assert!(shares_variable(&m, &mu("?y=:c")));
        assert!(!shares_variable(&m, &mu("?z=:c")));
    }

    #[test]
    fn formatting_is_sorted() {
        assert_eq!(format_mapping(&mu("?y=1, ?x=:a")), "{?x=:a, ?y=1}");
        assert_eq!(format_set(&SolutionSet::new()), "{}");
    }
}
