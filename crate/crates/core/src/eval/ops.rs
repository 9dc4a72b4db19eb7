//! Set-semantics algebra operators over solution sets.

use crate::solution::{compatible, merge, shares_variable, SolutionMapping, SolutionSet};

pub fn join(left: &SolutionSet, right: &SolutionSet) -> SolutionSet {
    let mut out = SolutionSet::new();
    for l in left {
        for r in right.iter().filter(|r| compatible(l, r)) {
            out.insert(merge(l, r));
        }
    }
    out
}

/// Left join whose merged rows must also satisfy `keep`. A left row
/// survives on its own when no merge is kept.
pub fn left_join<E>(
    left: &SolutionSet,
    right: &SolutionSet,
    mut keep: impl FnMut(&SolutionMapping) -> Result<bool, E>,
) -> Result<SolutionSet, E> {
    let mut out = SolutionSet::new();
    for l in left {
        let mut matched = false;
        for r in right.iter().filter(|r| compatible(l, r)) {
            let m = merge(l, r);
            if keep(&m)? {
                out.insert(m);
                matched = true;
            }
        }
        if !matched {
            out.insert(l.clone());
        }
    }
    Ok(out)
}

pub fn union(left: &SolutionSet, right: &SolutionSet) -> SolutionSet {
    left.union(right).cloned().collect()
}

/// Rows of `left` with no compatible row of `right` sharing a variable.
pub fn minus(left: &SolutionSet, right: &SolutionSet) -> SolutionSet {
    left.iter()
        .filter(|l| !right.iter().any(|r| shares_variable(l, r) && compatible(l, r)))
        .cloned()
        .collect()
}
