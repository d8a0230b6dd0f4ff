use std::sync::Arc;

use crate::ground::{GroundSet, VarSet};
use crate::model::CIModel;
use crate::statement::statements;
use crate::Result;

/// Simple undirected graph; `adj[v]` is the neighbour mask of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    ground: Arc<GroundSet>,
    adj: Vec<VarSet>,
}

impl UndirectedGraph {
    pub fn new(ground: Arc<GroundSet>) -> UndirectedGraph {
        let n = ground.len();
        UndirectedGraph { ground, adj: vec![0; n] }
    }

    pub fn complete(ground: Arc<GroundSet>) -> UndirectedGraph {
        let all = ground.all();
        let adj = (0..ground.len()).map(|v| all & !(1 << v)).collect();
        UndirectedGraph { ground, adj }
    }

    /// Edges given as label pairs.
    pub fn from_edges<S: AsRef<str>>(ground: Arc<GroundSet>, edges: &[(S, S)]) -> Result<UndirectedGraph> {
        let mut g = UndirectedGraph::new(ground);
        for (a, b) in edges {
            let (a, b) = (g.ground.var(a.as_ref())?, g.ground.var(b.as_ref())?);
            g.add_edge(a, b);
        }
        Ok(g)
    }

    /// Adds `a–b`; self-loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a] |= 1 << b;
            self.adj[b] |= 1 << a;
        }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn neighbours(&self, v: usize) -> VarSet {
        self.adj[v]
    }

    /// Variables reachable from `start` without entering `blocked`.
    pub fn reachable(&self, start: usize, blocked: VarSet) -> VarSet {
        let mut seen: VarSet = 1 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = self.adj[v] & !blocked & !seen;
            seen |= next;
            frontier |= next;
        }
        seen
    }

    /// `{ ij|K : every path between i and j meets K }`.
    pub fn separation_model(&self) -> CIModel {
        let n = self.ground.len();
        let idx = statements(n)
            .iter()
            .enumerate()
            .filter(|(_, s)| self.reachable(s.i as usize, s.k) >> s.j & 1 == 0)
            .map(|(k, _)| k);
        CIModel::from_indices(self.ground.clone(), idx).expect("indices come from the statement table")
    }
}
