//! Exhaustive oracles for partitioned subgraph problems.

use crate::error::{guard, Result};
use crate::instances::{CliqueInstance, PsiInstance};

pub const HOST_VERTEX_LIMIT: usize = 14;

/// A colour-respecting embedding of the pattern graph, as one host vertex
/// per pattern vertex.
pub fn find_psi(inst: &PsiInstance, max_host: usize) -> Result<Option<Vec<usize>>> {
    guard("host vertex count", max_host, inst.h.len())?;
    let classes = inst.classes();
    let mut choice = Vec::with_capacity(inst.colors());
    Ok(if extend(inst, &classes, &mut choice) { Some(choice) } else { None })
}

fn extend(inst: &PsiInstance, classes: &[Vec<usize>], choice: &mut Vec<usize>) -> bool {
    let a = choice.len();
    if a == inst.colors() {
        return true;
    }
    for &v in &classes[a] {
        let ok = (0..a).all(|b| !inst.g.has_edge(a, b) || inst.h.has_edge(v, choice[b]));
        if ok {
            choice.push(v);
            if extend(inst, classes, choice) {
                return true;
            }
            choice.pop();
        }
    }
    false
}

pub fn brute_psi(inst: &PsiInstance) -> Result<bool> {
    Ok(find_psi(inst, HOST_VERTEX_LIMIT)?.is_some())
}

pub fn brute_clique(inst: &CliqueInstance) -> Result<bool> {
    brute_psi(&inst.to_psi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn examples() {
        let h = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = CliqueInstance::new(h, vec![0, 1, 2, 2], 3).unwrap();
        assert!(brute_clique(&inst).unwrap());
        let inst = CliqueInstance::new(Graph::new(4), vec![0, 1, 2, 2], 3).unwrap();
        assert!(!brute_clique(&inst).unwrap());
        let single = PsiInstance::new(Graph::new(1), Graph::new(2), vec![0, 0]).unwrap();
        assert!(brute_psi(&single).unwrap());
        let missing = PsiInstance::new(Graph::new(2), Graph::new(2), vec![0, 0]).unwrap();
        assert!(!brute_psi(&missing).unwrap());
        let big = PsiInstance::new(Graph::new(1), Graph::new(20), vec![0; 20]).unwrap();
        assert!(brute_psi(&big).is_err());
    }
}
