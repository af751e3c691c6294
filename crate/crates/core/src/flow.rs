//! Dinic max-flow, generic over the capacity type.
//!
//! Used with `u64` capacities for integer feasibility and with `BigRational`
//! for real-margin feasibility. Dinic's phase count is polynomial in the graph
//! size independent of capacity values, so exact rational flows terminate.

use num_traits::Zero;

pub(crate) trait FlowCap:
    Clone + Ord + Zero + std::ops::Sub<Output = Self> + std::ops::AddAssign + std::ops::SubAssign
{
}

impl<T> FlowCap for T where
    T: Clone + Ord + Zero + std::ops::Sub<Output = T> + std::ops::AddAssign + std::ops::SubAssign
{
}

pub(crate) struct Dinic<C> {
    adj: Vec<Vec<usize>>, // node -> edge ids
    to: Vec<usize>,
    cap: Vec<C>, // residual capacity per directed edge; edge e^1 is the reverse of e
}

impl<C: FlowCap> Dinic<C> {
    pub fn new(nodes: usize) -> Self {
        Dinic { adj: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, c: C) {
        let e = self.to.len();
        self.adj[u].push(e);
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(e + 1);
        self.to.push(u);
        self.cap.push(C::zero());
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [i32]) -> bool {
        level.fill(-1);
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if level[v] < 0 && self.cap[e] > C::zero() {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: C, level: &[i32], it: &mut [usize]) -> C {
        if u == t {
            return pushed;
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]];
            let v = self.to[e];
            if level[v] == level[u] + 1 && self.cap[e] > C::zero() {
                let amount = pushed.clone().min(self.cap[e].clone());
                let got = self.dfs(v, t, amount, level, it);
                if got > C::zero() {
                    self.cap[e] -= got.clone();
                    self.cap[e ^ 1] += got.clone();
                    return got;
                }
            }
            it[u] += 1;
        }
        C::zero()
    }

    pub fn max_flow(&mut self, s: usize, t: usize, limit: C) -> C {
        let n = self.adj.len();
        let mut flow = C::zero();
        let mut level = vec![-1; n];
        while self.bfs(s, t, &mut level) {
            let mut it = vec![0usize; n];
            loop {
                let room = limit.clone() - flow.clone();
                if room == C::zero() {
                    return flow;
                }
                let got = self.dfs(s, t, room, &level, &mut it);
                if got == C::zero() {
                    break;
                }
                flow += got;
            }
        }
        flow
    }
}

/// Feasibility of the bounded transport polytope: max flow equals the total.
/// `cap(i, j)` supplies the (already finitized) per-cell capacity.
pub(crate) fn transport_feasible<C: FlowCap>(
    r: &[C],
    c: &[C],
    cap: impl Fn(usize, usize) -> C,
) -> bool {
    let (m, n) = (r.len(), c.len());
    let mut total = C::zero();
    for x in r {
        total += x.clone();
    }
    let mut ctotal = C::zero();
    for x in c {
        ctotal += x.clone();
    }
    if total != ctotal {
        return false;
    }
    let source = 0;
    let sink = m + n + 1;
    let mut net = Dinic::new(m + n + 2);
    for (i, ri) in r.iter().enumerate() {
        net.add_edge(source, 1 + i, ri.clone());
    }
    for (j, cj) in c.iter().enumerate() {
        net.add_edge(1 + m + j, sink, cj.clone());
    }
    for i in 0..m {
        for j in 0..n {
            let k = cap(i, j);
            if k > C::zero() {
                net.add_edge(1 + i, 1 + m + j, k);
            }
        }
    }
    net.max_flow(source, sink, total.clone()) == total
}
