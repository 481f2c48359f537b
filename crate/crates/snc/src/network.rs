//! Directed acyclic networks and edge-subset min cuts.
//!
//! The wiretap model measures cuts between the source and an *edge subset*
//! `A`: every edge of `A` is split at a fresh node, the split nodes feed a
//! super-sink through high-capacity edges, and an integral max flow on the
//! resulting unit-capacity graph yields both the min-cut capacity and the
//! source-side minimum cut. The source-side cut is the primary minimum cut:
//! the unique minimum cut separating the source from every other minimum
//! cut between the source and `A`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("unknown node id `{0}`")]
    UnknownNode(String),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("graph has a directed cycle")]
    Cyclic,
    #[error("source `{0}` has an incoming edge")]
    SourceHasIncoming(String),
    #[error("sink `{0}` has an outgoing edge")]
    SinkHasOutgoing(String),
    #[error("the source cannot be a sink")]
    SourceIsSink,
    #[error("at least one sink is required")]
    NoSinks,
    #[error("edge subset is empty")]
    EmptySet,
    #[error("security level {r} exceeds the network capacity C_min = {c_min}")]
    SecurityLevelTooHigh { r: usize, c_min: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// A sorted set of edge indices into the owning network's edge list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeSet(BTreeSet<usize>);

impl EdgeSet {
    pub fn empty() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        EdgeSet(indices.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// The collection `A_r` of primary edge subsets of size `r`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiretapCollection {
    pub r: usize,
    pub sets: Vec<EdgeSet>,
}

impl WiretapCollection {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EdgeSet> {
        self.sets.iter()
    }
}

/// A finite DAG with a single source and a nonempty sink set.
///
/// Edge order is canonical: the order edges were supplied in fixes all
/// matrix row/column indexing downstream. Parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    node_ids: Vec<String>,
    edges: Vec<Edge>,
    source: usize,
    sinks: BTreeSet<usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    topo_nodes: Vec<usize>,
    c_min: u64,
}

impl Network {
    /// Validates and builds a network.
    ///
    /// `edges` are `(edge id, tail id, head id)` triples in canonical order.
    pub fn new(
        node_ids: Vec<String>,
        edges: Vec<(String, String, String)>,
        source: &str,
        sinks: &[String],
    ) -> Result<Self, NetworkError> {
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, id) in node_ids.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(NetworkError::DuplicateNode(id.clone()));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| NetworkError::UnknownNode(id.to_string()));

        let source = lookup(source)?;
        if sinks.is_empty() {
            return Err(NetworkError::NoSinks);
        }
        let mut sink_set = BTreeSet::new();
        for t in sinks {
            let t = lookup(t)?;
            if t == source {
                return Err(NetworkError::SourceIsSink);
            }
            sink_set.insert(t);
        }

        let mut edge_list = Vec::with_capacity(edges.len());
        let mut seen_edge_ids = BTreeSet::new();
        for (id, tail, head) in &edges {
            if !seen_edge_ids.insert(id.clone()) {
                return Err(NetworkError::DuplicateEdge(id.clone()));
            }
            edge_list.push(Edge { id: id.clone(), tail: lookup(tail)?, head: lookup(head)? });
        }

        let n = node_ids.len();
        let mut in_edges = vec![Vec::new(); n];
        let mut out_edges = vec![Vec::new(); n];
        for (i, e) in edge_list.iter().enumerate() {
            out_edges[e.tail].push(i);
            in_edges[e.head].push(i);
        }

        if !in_edges[source].is_empty() {
            return Err(NetworkError::SourceHasIncoming(node_ids[source].clone()));
        }
        for &t in &sink_set {
            if !out_edges[t].is_empty() {
                return Err(NetworkError::SinkHasOutgoing(node_ids[t].clone()));
            }
        }

        // Kahn's algorithm; failure means a cycle
        let mut indeg: Vec<usize> = in_edges.iter().map(|v| v.len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo_nodes = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo_nodes.push(v);
            for &e in &out_edges[v] {
                let h = edge_list[e].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push_back(h);
                }
            }
        }
        if topo_nodes.len() != n {
            return Err(NetworkError::Cyclic);
        }

        let mut net = Network {
            node_ids,
            edges: edge_list,
            source,
            sinks: sink_set,
            in_edges,
            out_edges,
            topo_nodes,
            c_min: 0,
        };
        net.c_min = net
            .sinks
            .iter()
            .map(|&t| {
                if net.in_edges[t].is_empty() {
                    0
                } else {
                    let a = EdgeSet::from_indices(net.in_edges[t].iter().copied());
                    net.edge_set_flow(&a).0
                }
            })
            .min()
            .unwrap_or(0);
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_id(&self, v: usize) -> &str {
        &self.node_ids[v]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_ids.iter().position(|n| n == id)
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sinks(&self) -> impl Iterator<Item = usize> + '_ {
        self.sinks.iter().copied()
    }

    pub fn sink_count(&self) -> usize {
        self.sinks.len()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.sinks.contains(&v)
    }

    /// Incoming edges of `v` in canonical edge order.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Outgoing edges of `v` in canonical edge order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// Nodes in topological order (source first among its component).
    pub fn topo_nodes(&self) -> &[usize] {
        &self.topo_nodes
    }

    /// The multicast capacity: the smallest min-cut capacity from the
    /// source to any sink.
    pub fn c_min(&self) -> u64 {
        self.c_min
    }

    /// Builds an [`EdgeSet`] from edge ids.
    pub fn edge_set(&self, ids: &[&str]) -> Result<EdgeSet, NetworkError> {
        let mut set = BTreeSet::new();
        for id in ids {
            let e = self.edge_index(id).ok_or_else(|| NetworkError::UnknownEdge(id.to_string()))?;
            set.insert(e);
        }
        Ok(EdgeSet(set))
    }

    pub fn edge_set_ids(&self, a: &EdgeSet) -> Vec<&str> {
        a.iter().map(|e| self.edges[e].id.as_str()).collect()
    }

    /// Min-cut capacity between the source and the edge subset `a`, plus
    /// the source-side minimum cut mapped back to original edges.
    pub fn min_cut_to_edge_set(&self, a: &EdgeSet) -> Result<(u64, EdgeSet), NetworkError> {
        if a.is_empty() {
            return Err(NetworkError::EmptySet);
        }
        Ok(self.edge_set_flow(a))
    }

    /// An edge subset is regular when its size equals its min-cut capacity.
    pub fn is_regular(&self, a: &EdgeSet) -> Result<bool, NetworkError> {
        let (cap, _) = self.min_cut_to_edge_set(a)?;
        Ok(cap == a.len() as u64)
    }

    /// The unique minimum cut between the source and `a` that separates the
    /// source from every minimum cut between them.
    pub fn primary_min_cut(&self, a: &EdgeSet) -> Result<EdgeSet, NetworkError> {
        let (_, cut) = self.min_cut_to_edge_set(a)?;
        Ok(cut)
    }

    /// Enumerates the collection `A_r`: all primary edge subsets of size
    /// `r`. For `r = 0` this is the single empty set.
    pub fn primary_subsets(&self, r: usize) -> Result<WiretapCollection, NetworkError> {
        if r as u64 > self.c_min {
            return Err(NetworkError::SecurityLevelTooHigh { r, c_min: self.c_min });
        }
        if r == 0 {
            return Ok(WiretapCollection { r, sets: vec![EdgeSet::empty()] });
        }
        let mut sets = Vec::new();
        let mut combo: Vec<usize> = (0..r).collect();
        let m = self.edge_count();
        if r > m {
            return Ok(WiretapCollection { r, sets });
        }
        loop {
            let a = EdgeSet::from_indices(combo.iter().copied());
            let (cap, cut) = self.edge_set_flow(&a);
            if cap == r as u64 && cut == a {
                sets.push(a);
            }
            // next r-combination of 0..m in lexicographic order
            let mut i = r;
            loop {
                if i == 0 {
                    sets.sort();
                    return Ok(WiretapCollection { r, sets });
                }
                i -= 1;
                if combo[i] < m - (r - i) {
                    combo[i] += 1;
                    for j in i + 1..r {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Max flow from the source to the split super-sink for `a`, together
    /// with the source-side residual cut in original edge indices.
    fn edge_set_flow(&self, a: &EdgeSet) -> (u64, EdgeSet) {
        let n_nodes = self.node_count();
        let split_index: BTreeMap<usize, usize> =
            a.iter().enumerate().map(|(i, e)| (e, n_nodes + i)).collect();
        let super_sink = n_nodes + a.len();
        let mut flow = FlowGraph::new(super_sink + 1);
        let super_cap = self.edge_count() as u64 + 1;
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(&t_e) = split_index.get(&i) {
                flow.add_edge(e.tail, t_e, 1, Some(i));
                flow.add_edge(t_e, e.head, 1, Some(i));
                flow.add_edge(t_e, super_sink, super_cap, None);
            } else {
                flow.add_edge(e.tail, e.head, 1, Some(i));
            }
        }
        let value = flow.max_flow(self.source, super_sink);
        let reachable = flow.residual_reachable(self.source);
        let mut cut = BTreeSet::new();
        for arc in flow.arcs() {
            if let Some(orig) = arc.tag {
                if arc.cap > 0 && arc.flow == arc.cap && reachable[arc.from] && !reachable[arc.to] {
                    cut.insert(orig);
                }
            }
        }
        (value, EdgeSet(cut))
    }
}

struct Arc {
    from: usize,
    to: usize,
    cap: u64,
    flow: u64,
    tag: Option<usize>,
}

/// Unit-capacity max flow via BFS augmenting paths (Edmonds-Karp).
struct FlowGraph {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

impl FlowGraph {
    fn new(n: usize) -> Self {
        FlowGraph { adj: vec![Vec::new(); n], arcs: Vec::new() }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u64, tag: Option<usize>) {
        let fwd = self.arcs.len();
        self.arcs.push(Arc { from, to, cap, flow: 0, tag });
        self.arcs.push(Arc { from: to, to: from, cap: 0, flow: 0, tag: None });
        self.adj[from].push(fwd);
        self.adj[to].push(fwd + 1);
    }

    fn residual(&self, arc: usize) -> u64 {
        let a = &self.arcs[arc];
        if arc.is_multiple_of(2) {
            a.cap - a.flow
        } else {
            // reverse arc: residual equals the forward flow
            self.arcs[arc - 1].flow
        }
    }

    fn push(&mut self, arc: usize, amount: u64) {
        if arc.is_multiple_of(2) {
            self.arcs[arc].flow += amount;
        } else {
            self.arcs[arc - 1].flow -= amount;
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        loop {
            // BFS for a shortest augmenting path
            let mut pred: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(v) = queue.pop_front() {
                for &arc in &self.adj[v] {
                    let to = self.arc_to(arc);
                    if !seen[to] && self.residual(arc) > 0 {
                        seen[to] = true;
                        pred[to] = Some(arc);
                        if to == t {
                            break 'bfs;
                        }
                        queue.push_back(to);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut bottleneck = u64::MAX;
            let mut v = t;
            while v != s {
                let arc = pred[v].unwrap();
                bottleneck = bottleneck.min(self.residual(arc));
                v = self.arc_from(arc);
            }
            let mut v = t;
            while v != s {
                let arc = pred[v].unwrap();
                self.push(arc, bottleneck);
                v = self.arc_from(arc);
            }
            total += bottleneck;
        }
    }

    fn arc_to(&self, arc: usize) -> usize {
        self.arcs[arc].to
    }

    fn arc_from(&self, arc: usize) -> usize {
        self.arcs[arc].from
    }

    /// Nodes reachable from `s` in the residual graph after max flow.
    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &arc in &self.adj[v] {
                let to = self.arc_to(arc);
                if !seen[to] && self.residual(arc) > 0 {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    fn arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs.iter().step_by(2)
    }
}
