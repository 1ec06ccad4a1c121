//! Boundary-tree statistics.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::ShortestPathMap;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeStats {
    pub vertex: String,
    pub nodes: usize,
    /// Leaves of the tree.
    pub branches: usize,
    /// Faces the tree enters more than once.
    pub repeated_faces: usize,
    /// Faces one branch enters more than once.
    pub reentries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub trees: Vec<TreeStats>,
    /// Distinct branch crossings per face.
    pub per_face: Vec<usize>,
    pub max_branches_per_tree: usize,
}

pub fn branch_counts(spm: &ShortestPathMap) -> BranchReport {
    let visits: BTreeSet<(usize, usize, u32)> = spm.branch_visits.iter().copied().collect();
    let mut per_face = vec![0; spm.complex.faces.len()];
    let mut tree_faces: BTreeMap<(usize, usize), BTreeSet<(usize, u32)>> = BTreeMap::new();
    let mut branch_faces: BTreeMap<(usize, usize), BTreeSet<u32>> = BTreeMap::new();
    for &(b, f, hop) in &visits {
        let tree = spm.branches[b].tree;
        tree_faces.entry((tree, f)).or_default().insert((b, hop));
        branch_faces.entry((b, f)).or_default().insert(hop);
    }
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(b, f, _) in &visits {
        if seen.insert((b, f)) {
            per_face[f] += 1;
        }
    }
    let trees: Vec<TreeStats> = spm
        .trees
        .iter()
        .enumerate()
        .map(|(t, tr)| {
            let members: Vec<usize> = (0..spm.branches.len()).filter(|&b| spm.branches[b].tree == t).collect();
            TreeStats {
                vertex: spm.complex.vertices[tr.vertex].clone(),
                nodes: members.len(),
                branches: members.iter().filter(|&&b| spm.branches[b].children.is_empty()).count(),
                repeated_faces: tree_faces.iter().filter(|(k, v)| k.0 == t && v.len() > 1).count(),
                reentries: branch_faces.iter().filter(|(k, v)| spm.branches[k.0].tree == t && v.len() > 1).count(),
            }
        })
        .collect();
    let max_branches_per_tree = trees.iter().map(|t| t.branches).max().unwrap_or(0);
    BranchReport { trees, per_face, max_branches_per_tree }
}
