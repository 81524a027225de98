//! Layered dynamic graph and maximum linkings via unit-capacity max flow.

use std::collections::{BTreeSet, VecDeque};

use super::pattern::PatternMatrix;

/// Time-expanded graph of a pattern pair.
///
/// State copies `x_j^t` live on layers `t = 0..n-1` and output copies `y_j^t`
/// on layers `t = 1..n`. Optional functional edges `x_i^0 -> y_{p+j}^1` exist
/// only on the first layer.
#[derive(Clone, Debug)]
pub struct DynamicGraph {
    n: usize,
    outputs: usize,
    /// `(from, to)` state edges, applied between every pair of consecutive layers.
    state_edges: Vec<(usize, usize)>,
    /// `(state, output)` edges, applied from every state layer.
    output_edges: Vec<(usize, usize)>,
    /// `(state, extra output)` edges from layer 0 only.
    functional_edges: Vec<(usize, usize)>,
    extra_outputs: usize,
}

impl DynamicGraph {
    /// `D(A, C)`.
    pub fn new(a: &PatternMatrix, c: &PatternMatrix) -> Self {
        Self {
            n: a.nrows(),
            outputs: c.nrows(),
            state_edges: a.support().iter().map(|&(to, from)| (from, to)).collect(),
            output_edges: c.support().iter().map(|&(y, x)| (x, y)).collect(),
            functional_edges: Vec::new(),
            extra_outputs: 0,
        }
    }

    /// `D(A, C, F)`: `D(A, C)` plus first-layer edges `x_i^0 -> y_{p+j}^1`
    /// for every free `F[j][i]`.
    pub fn with_functional(a: &PatternMatrix, c: &PatternMatrix, f: &PatternMatrix) -> Self {
        let mut g = Self::new(a, c);
        g.functional_edges = f.support().iter().map(|&(y, x)| (x, y)).collect();
        g.extra_outputs = f.nrows();
        g
    }

    pub fn states(&self) -> usize {
        self.n
    }

    /// Maximum number of vertex-disjoint paths from the layer-0 state copies
    /// (minus `excluded`) to the output copies.
    pub fn max_linking(&self, excluded: &BTreeSet<usize>) -> usize {
        let n = self.n;
        if n == 0 {
            return 0;
        }
        let p = self.outputs;
        let state_in = |t: usize, j: usize| 2 * (t * n + j);
        let state_out = |t: usize, j: usize| 2 * (t * n + j) + 1;
        let y_base = 2 * n * n;
        let output = |t: usize, j: usize| y_base + (t - 1) * p + j;
        let extra_base = y_base + n * p;
        let source = extra_base + self.extra_outputs;
        let sink = source + 1;

        let mut net = FlowNetwork::new(sink + 1);
        for j in (0..n).filter(|j| !excluded.contains(j)) {
            net.add_edge(source, state_in(0, j));
        }
        for t in 0..n {
            for j in 0..n {
                net.add_edge(state_in(t, j), state_out(t, j));
            }
            if t + 1 < n {
                for &(from, to) in &self.state_edges {
                    net.add_edge(state_out(t, from), state_in(t + 1, to));
                }
            }
            for &(x, y) in &self.output_edges {
                net.add_edge(state_out(t, x), output(t + 1, y));
            }
        }
        for t in 1..=n {
            for j in 0..p {
                net.add_edge(output(t, j), sink);
            }
        }
        for &(x, y) in &self.functional_edges {
            net.add_edge(state_out(0, x), extra_base + y);
        }
        for j in 0..self.extra_outputs {
            net.add_edge(extra_base + j, sink);
        }
        net.max_flow(source, sink)
    }
}

/// Unit-capacity flow network solved with Dinic's algorithm.
#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        Self {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds a capacity-1 arc and its residual twin (`edge ^ 1`).
    pub(crate) fn add_edge(&mut self, from: usize, to: usize) {
        self.head[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(1);
        self.head[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(0);
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let nodes = self.head.len();
        let mut flow = 0;
        let mut level = vec![usize::MAX; nodes];
        let mut next = vec![0usize; nodes];
        loop {
            level.iter_mut().for_each(|l| *l = usize::MAX);
            level[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(v) = queue.pop_front() {
                for &e in &self.head[v] {
                    let w = self.to[e];
                    if self.cap[e] > 0 && level[w] == usize::MAX {
                        level[w] = level[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if level[sink] == usize::MAX {
                return flow;
            }
            next.iter_mut().for_each(|i| *i = 0);
            while self.augment(source, sink, &level, &mut next) {
                flow += 1;
            }
        }
    }

    /// Finds one augmenting path in the level graph (iterative DFS).
    fn augment(&mut self, source: usize, sink: usize, level: &[usize], next: &mut [usize]) -> bool {
        let mut path: Vec<usize> = Vec::new();
        let mut v = source;
        loop {
            if v == sink {
                for &e in &path {
                    self.cap[e] -= 1;
                    self.cap[e ^ 1] += 1;
                }
                return true;
            }
            let mut advanced = false;
            while next[v] < self.head[v].len() {
                let e = self.head[v][next[v]];
                let w = self.to[e];
                if self.cap[e] > 0 && level[w] == level[v] + 1 {
                    path.push(e);
                    v = w;
                    advanced = true;
                    break;
                }
                next[v] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the edge that led here
                next[v] = usize::MAX;
                match path.pop() {
                    Some(e) => {
                        v = self.to[e ^ 1];
                        next[v] += 1;
                    }
                    None => return false,
                }
            }
        }
    }
}
