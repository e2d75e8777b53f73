//! A small augmenting-path max-flow solver on integer capacities, used for
//! vertex-disjoint escape paths (vertices are split into in/out nodes).

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
}

#[derive(Debug, Default)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    /// Pushes up to `limit` units from `s` to `t` by shortest augmenting
    /// paths and returns the value reached.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        while total < limit {
            let mut pred = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            while let Some(x) = queue.pop_front() {
                if x == t {
                    reached = true;
                    break;
                }
                for &a in &self.adj[x] {
                    let y = self.arcs[a].to;
                    if self.arcs[a].cap > 0 && pred[y] == usize::MAX && y != s {
                        pred[y] = a;
                        queue.push_back(y);
                    }
                }
            }
            if !reached {
                break;
            }
            let mut bottleneck = limit - total;
            let mut y = t;
            while y != s {
                let a = pred[y];
                bottleneck = bottleneck.min(self.arcs[a].cap);
                y = self.arcs[a ^ 1].to;
            }
            let mut y = t;
            while y != s {
                let a = pred[y];
                self.arcs[a].cap -= bottleneck;
                self.arcs[a ^ 1].cap += bottleneck;
                y = self.arcs[a ^ 1].to;
            }
            total += bottleneck;
        }
        total
    }

    /// Units currently sent along the forward arc `from -> to` (summed over
    /// parallel arcs).
    pub fn flow_on(&self, from: usize, to: usize) -> i64 {
        self.adj[from]
            .iter()
            .filter(|&&a| a % 2 == 0 && self.arcs[a].to == to)
            .map(|&a| self.arcs[a ^ 1].cap)
            .sum()
    }

    /// Heads of forward arcs out of `from` that carry flow.
    pub fn flow_successors(&self, from: usize) -> Vec<usize> {
        self.adj[from]
            .iter()
            .filter(|&&a| a % 2 == 0 && self.arcs[a ^ 1].cap > 0)
            .map(|&a| self.arcs[a].to)
            .collect()
    }
}
