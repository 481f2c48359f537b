//! Shared fixtures: the two-sink benchmark network used throughout the
//! tests, its hand-specified kernels, brute-force graph oracles, and
//! random instance generators.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;

use snc::{
    EdgeSet, FieldSpec, LinearNetworkCode, Matrix, Network, Scalar, SecureCode, WiretapCollection,
};

pub fn f5() -> FieldSpec {
    FieldSpec::new(5).unwrap()
}

/// The 7-node, 11-edge two-sink benchmark network: the source feeds two
/// sinks directly and through a butterfly-style relay chain.
pub fn fig3() -> Arc<Network> {
    let nodes = ["s", "v1", "v2", "v3", "v4", "t1", "t2"];
    let edges = [
        ("e1", "s", "t1"),
        ("e2", "s", "v1"),
        ("e3", "s", "v2"),
        ("e4", "s", "t2"),
        ("e5", "v1", "t1"),
        ("e6", "v1", "v3"),
        ("e7", "v2", "v3"),
        ("e8", "v2", "t2"),
        ("e9", "v3", "v4"),
        ("e10", "v4", "t1"),
        ("e11", "v4", "t2"),
    ];
    Arc::new(
        Network::new(
            nodes.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(e, a, b)| (e.to_string(), a.to_string(), b.to_string()))
                .collect(),
            "s",
            &["t1".to_string(), "t2".to_string()],
        )
        .unwrap(),
    )
}

/// The benchmark 3-dimensional code on [`fig3`] over `F_5`.
pub fn fig3_code() -> LinearNetworkCode {
    let f = f5();
    let table: BTreeMap<String, Matrix> = [
        (
            "s".to_string(),
            Matrix::from_rows(&[vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![1, 1, 2, 2]], f).unwrap(),
        ),
        ("v1".to_string(), Matrix::from_rows(&[vec![1, 1]], f).unwrap()),
        ("v2".to_string(), Matrix::from_rows(&[vec![1, 1]], f).unwrap()),
        ("v3".to_string(), Matrix::from_rows(&[vec![4], vec![1]], f).unwrap()),
        ("v4".to_string(), Matrix::from_rows(&[vec![1, 1]], f).unwrap()),
    ]
    .into();
    LinearNetworkCode::load_kernels(fig3(), 3, f, &table).unwrap()
}

/// Expected global kernels of [`fig3_code`], edge by edge.
pub fn fig3_globals() -> Vec<Vec<Scalar>> {
    vec![
        vec![0, 1, 1], // e1
        vec![1, 0, 1], // e2
        vec![1, 0, 2], // e3
        vec![0, 1, 2], // e4
        vec![1, 0, 1], // e5
        vec![1, 0, 1], // e6
        vec![1, 0, 2], // e7
        vec![1, 0, 2], // e8
        vec![0, 0, 1], // e9
        vec![0, 0, 1], // e10
        vec![0, 0, 1], // e11
    ]
}

/// The rate-2, security-1 secure code on [`fig3`] with the identity
/// pre-coding matrix, plus its wiretap collection.
pub fn fig3_secure() -> (SecureCode, WiretapCollection) {
    let code = fig3_code();
    let coll = code.network().primary_subsets(1).unwrap();
    let sc = SecureCode::new(code, Matrix::identity(3, f5()), 2, 1, &coll).unwrap();
    (sc, coll)
}

pub fn edge_set(net: &Network, ids: &[&str]) -> EdgeSet {
    net.edge_set(ids).unwrap()
}

// ---------------------------------------------------------------------
// brute-force graph oracles (pure reachability, no flow machinery)
// ---------------------------------------------------------------------

/// Is `tail(e)` reachable from the source using only edges outside `cut`?
fn reaches_edge(net: &Network, cut: &EdgeSet, e: usize) -> bool {
    let target = net.edge(e).tail;
    let mut seen = vec![false; net.node_count()];
    seen[net.source()] = true;
    let mut stack = vec![net.source()];
    while let Some(v) = stack.pop() {
        if v == target {
            return true;
        }
        for &out in net.out_edges(v) {
            if cut.contains(out) {
                continue;
            }
            let h = net.edge(out).head;
            if !seen[h] {
                seen[h] = true;
                stack.push(h);
            }
        }
    }
    seen[target]
}

/// A cut between the source and the edge set `target` blocks every edge of
/// `target`: the edge is in the cut, or its tail is unreachable.
pub fn brute_is_cut(net: &Network, cut: &EdgeSet, target: &EdgeSet) -> bool {
    target.iter().all(|e| cut.contains(e) || !reaches_edge(net, cut, e))
}

fn subsets_of_size(m: usize, k: usize) -> Vec<EdgeSet> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    if k == 0 {
        return vec![EdgeSet::empty()];
    }
    loop {
        out.push(EdgeSet::from_indices(combo.iter().copied()));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] < m - (k - i) {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exhaustive min-cut search: the capacity and every minimum cut between
/// the source and `target`.
pub fn brute_min_cuts(net: &Network, target: &EdgeSet) -> (u64, Vec<EdgeSet>) {
    for k in 0..=net.edge_count() {
        let cuts: Vec<EdgeSet> = subsets_of_size(net.edge_count(), k)
            .into_iter()
            .filter(|c| brute_is_cut(net, c, target))
            .collect();
        if !cuts.is_empty() {
            return (k as u64, cuts);
        }
    }
    unreachable!("the full edge set always cuts");
}

/// The primary minimum cut by definition: the minimum cut that separates
/// the source from every minimum cut. Panics unless exactly one exists.
pub fn brute_primary_min_cut(net: &Network, target: &EdgeSet) -> EdgeSet {
    let (_, cuts) = brute_min_cuts(net, target);
    let primaries: Vec<&EdgeSet> =
        cuts.iter().filter(|c| cuts.iter().all(|d| brute_is_cut(net, c, d))).collect();
    assert_eq!(primaries.len(), 1, "primary minimum cut must be unique");
    primaries[0].clone()
}

/// Brute node min-cut: the smallest number of edges whose removal
/// disconnects the source from `t`.
pub fn brute_node_min_cut(net: &Network, t: usize) -> u64 {
    let reaches_node = |cut: &EdgeSet| -> bool {
        let mut seen = vec![false; net.node_count()];
        seen[net.source()] = true;
        let mut stack = vec![net.source()];
        while let Some(v) = stack.pop() {
            for &out in net.out_edges(v) {
                if cut.contains(out) {
                    continue;
                }
                let h = net.edge(out).head;
                if !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        seen[t]
    };
    for k in 0..=net.edge_count() {
        if subsets_of_size(net.edge_count(), k).iter().any(|c| !reaches_node(c)) {
            return k as u64;
        }
    }
    unreachable!("removing every edge always disconnects");
}

// ---------------------------------------------------------------------
// random instances
// ---------------------------------------------------------------------

/// A random DAG with at most 7 nodes and 10 edges, resampled until its
/// multicast capacity reaches `min_c_min`.
pub fn random_network(rng: &mut impl Rng, min_c_min: u64) -> Arc<Network> {
    loop {
        let n_nodes: usize = rng.gen_range(3..=7);
        let n_sinks: usize = rng.gen_range(1..=2usize.min(n_nodes - 2));
        let sink_start = n_nodes - n_sinks;
        let n_edges: usize = rng.gen_range(2..=10);
        let nodes: Vec<String> = (0..n_nodes).map(|i| format!("n{i}")).collect();
        let mut edges = Vec::with_capacity(n_edges);
        for i in 0..n_edges {
            let tail = rng.gen_range(0..sink_start);
            let head = rng.gen_range(tail + 1..n_nodes);
            edges.push((format!("e{}", i + 1), format!("n{tail}"), format!("n{head}")));
        }
        let sinks: Vec<String> = (sink_start..n_nodes).map(|i| format!("n{i}")).collect();
        let Ok(net) = Network::new(nodes, edges, "n0", &sinks) else {
            continue;
        };
        if net.c_min() >= min_c_min {
            return Arc::new(net);
        }
    }
}

/// A random invertible matrix.
pub fn random_invertible(rng: &mut impl Rng, n: usize, field: FieldSpec) -> Matrix {
    loop {
        let data: Vec<Scalar> = (0..n * n).map(|_| rng.gen_range(0..field.order())).collect();
        let m = Matrix::new(n, n, data, field).unwrap();
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// A random full-row-rank `m x n` matrix.
pub fn random_full_row_rank(rng: &mut impl Rng, m: usize, n: usize, field: FieldSpec) -> Matrix {
    assert!(m <= n);
    loop {
        let data: Vec<Scalar> = (0..m * n).map(|_| rng.gen_range(0..field.order())).collect();
        let mat = Matrix::new(m, n, data, field).unwrap();
        if mat.rank() == m {
            return mat;
        }
    }
}

/// All edge ids of a set, for readable assertions.
pub fn ids(net: &Network, set: &EdgeSet) -> BTreeSet<String> {
    set.iter().map(|e| net.edge(e).id.clone()).collect()
}
