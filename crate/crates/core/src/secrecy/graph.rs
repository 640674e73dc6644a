use crate::pointprocess::PointSet;

/// Directed secure-edge adjacency over the legitimate points of one
/// realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ISGraph {
    pub legit: PointSet,
    pub eaves: PointSet,
    pub out_edges: Vec<Vec<usize>>,
}

impl ISGraph {
    pub fn node_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_edges[i].len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.out_edges.len()];
        for targets in &self.out_edges {
            for &j in targets {
                d[j] += 1;
            }
        }
        d
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.out_edges[i].binary_search(&j).is_ok()
    }

    /// All edges as (source, destination) pairs in source order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_edges.iter().enumerate().flat_map(|(i, t)| t.iter().map(move |&j| (i, j)))
    }

    /// Whether every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &ISGraph) -> bool {
        self.node_count() == other.node_count() && self.edges().all(|(i, j)| other.has_edge(i, j))
    }
}
