//! Linear network codes: local kernels, global kernels, transmission,
//! decodability, and source-kernel transformations.
//!
//! A code is a map from each non-sink node `v` to its local encoding kernel,
//! an `|In(v)| x |Out(v)|` matrix. The source row index runs over the `n`
//! imaginary incoming edges, so its kernel is `n x |Out(s)|`. Intermediate
//! kernels are shared (`Arc`) between codes derived from one another, which
//! makes the local-encoding-preserving property structural.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LncError {
    #[error("input vector has length {got}, expected the code dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("kernel for node `{node}` has shape {got_rows}x{got_cols}, expected {rows}x{cols}")]
    ShapeMismatch { node: String, rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("missing kernel for non-sink node `{0}`")]
    MissingKernel(String),
    #[error("unexpected kernel for node `{0}`")]
    UnexpectedKernel(String),
    #[error("dimension {n} exceeds the network capacity C_min = {c_min}")]
    DimensionTooLarge { n: usize, c_min: u64 },
    #[error("no decodable code found within the retry budget")]
    ConstructionFailed,
    #[error("transformation matrix has {got} columns, expected {expected}")]
    TransformShape { expected: usize, got: usize },
    #[error("kernel field order {got} does not match the code field order {expected}")]
    FieldMismatch { expected: u64, got: u64 },
}

/// The global encoding kernels of a code: one column `n`-vector per edge,
/// indexed by canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalKernels {
    dimension: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl GlobalKernels {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kernel(&self, edge: usize) -> &[Scalar] {
        &self.vectors[edge]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Scalar>> {
        self.vectors.iter()
    }

    /// The matrix `[f_e : e in In(t)]` for a sink `t`.
    pub fn sink_matrix(&self, net: &Network, sink: usize, field: FieldSpec) -> Matrix {
        let cols: Vec<Vec<Scalar>> = net.in_edges(sink).iter().map(|&e| self.vectors[e].clone()).collect();
        Matrix::from_columns(self.dimension, &cols, field).expect("kernel shapes are consistent")
    }
}

/// An `n`-dimensional linear network code.
#[derive(Debug, Clone)]
pub struct LinearNetworkCode {
    network: Arc<Network>,
    field: FieldSpec,
    dimension: usize,
    kernels: BTreeMap<usize, Arc<Matrix>>,
}

impl PartialEq for LinearNetworkCode {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.field == other.field
            && self.network == other.network
            && self.kernels.len() == other.kernels.len()
            && self.kernels.iter().all(|(v, k)| other.kernels.get(v).is_some_and(|o| **o == **k))
    }
}

impl LinearNetworkCode {
    /// Wraps externally supplied kernels, one per non-sink node. The source
    /// kernel must have `n` rows; every other kernel `|In(v)|` rows; all
    /// kernels `|Out(v)|` columns.
    pub fn load_kernels(
        network: Arc<Network>,
        n: usize,
        field: FieldSpec,
        table: &BTreeMap<String, Matrix>,
    ) -> Result<Self, LncError> {
        let mut kernels = BTreeMap::new();
        for v in 0..network.node_count() {
            let id = network.node_id(v);
            if network.is_sink(v) {
                if table.contains_key(id) {
                    return Err(LncError::UnexpectedKernel(id.to_string()));
                }
                continue;
            }
            let kernel = table.get(id).ok_or_else(|| LncError::MissingKernel(id.to_string()))?;
            if kernel.field() != field {
                return Err(LncError::FieldMismatch {
                    expected: field.order(),
                    got: kernel.field().order(),
                });
            }
            let rows = if v == network.source() { n } else { network.in_edges(v).len() };
            let cols = network.out_edges(v).len();
            if kernel.rows() != rows || kernel.cols() != cols {
                return Err(LncError::ShapeMismatch {
                    node: id.to_string(),
                    rows,
                    cols,
                    got_rows: kernel.rows(),
                    got_cols: kernel.cols(),
                });
            }
            kernels.insert(v, Arc::new(kernel.clone()));
        }
        for id in table.keys() {
            if network.node_index(id).is_none() {
                return Err(LncError::UnexpectedKernel(id.clone()));
            }
        }
        Ok(LinearNetworkCode { network, field, dimension: n, kernels })
    }

    pub fn network(&self) -> &Arc<Network> {
        &self.network
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kernel(&self, node: usize) -> Option<&Arc<Matrix>> {
        self.kernels.get(&node)
    }

    pub fn source_kernel(&self) -> &Matrix {
        self.kernels
            .get(&self.network.source())
            .expect("a code always carries a source kernel")
    }

    /// Local coefficient for the adjacent pair `(d, e)`; at the source, `d`
    /// indexes the imaginary incoming edges `0..n`.
    fn coefficient(&self, node: usize, in_pos: usize, out_pos: usize) -> Scalar {
        self.kernels[&node].get(in_pos, out_pos)
    }

    /// Computes every global encoding kernel by the defining recursion,
    /// visiting nodes in topological order. The boundary vectors on the
    /// imaginary source in-edges are the standard basis.
    pub fn global_kernels(&self) -> GlobalKernels {
        let net = &self.network;
        let n = self.dimension;
        let mut vectors = vec![vec![0 as Scalar; n]; net.edge_count()];
        for &v in net.topo_nodes() {
            if net.is_sink(v) {
                continue;
            }
            for (out_pos, &e) in net.out_edges(v).iter().enumerate() {
                let mut acc = vec![0 as Scalar; n];
                if v == net.source() {
                    for (i, slot) in acc.iter_mut().enumerate() {
                        *slot = self.coefficient(v, i, out_pos);
                    }
                } else {
                    for (in_pos, &d) in net.in_edges(v).iter().enumerate() {
                        let c = self.coefficient(v, in_pos, out_pos);
                        if c == 0 {
                            continue;
                        }
                        for (row, acc_v) in acc.iter_mut().enumerate() {
                            *acc_v = self.field.add(*acc_v, self.field.mul(c, vectors[d][row]));
                        }
                    }
                }
                vectors[e] = acc;
            }
        }
        GlobalKernels { dimension: n, vectors }
    }

    /// Transmits the source input `x` through the network by the local
    /// recursion, returning the symbol carried on each edge.
    pub fn transmit(&self, x: &[Scalar]) -> Result<Vec<Scalar>, LncError> {
        if x.len() != self.dimension {
            return Err(LncError::DimensionMismatch { expected: self.dimension, got: x.len() });
        }
        let net = &self.network;
        let mut symbols = vec![0 as Scalar; net.edge_count()];
        for &v in net.topo_nodes() {
            if net.is_sink(v) {
                continue;
            }
            for (out_pos, &e) in net.out_edges(v).iter().enumerate() {
                let mut acc: Scalar = 0;
                if v == net.source() {
                    for (i, &xi) in x.iter().enumerate() {
                        acc = self.field.add(acc, self.field.mul(self.coefficient(v, i, out_pos), xi));
                    }
                } else {
                    for (in_pos, &d) in net.in_edges(v).iter().enumerate() {
                        acc = self
                            .field
                            .add(acc, self.field.mul(self.coefficient(v, in_pos, out_pos), symbols[d]));
                    }
                }
                symbols[e] = acc;
            }
        }
        Ok(symbols)
    }

    /// A code is decodable when every sink's stacked global kernels have
    /// rank equal to the code dimension.
    pub fn is_decodable(&self) -> bool {
        let globals = self.global_kernels();
        self.network
            .sinks()
            .all(|t| globals.sink_matrix(&self.network, t, self.field).rank() == self.dimension)
    }

    /// The transformation `Q . C_n`: the source kernel becomes `q * K_s`,
    /// every intermediate kernel is shared unchanged. The resulting global
    /// kernels equal `q * f_e` for every edge.
    pub fn transform(&self, q: &Matrix) -> Result<LinearNetworkCode, LncError> {
        if q.cols() != self.dimension {
            return Err(LncError::TransformShape { expected: self.dimension, got: q.cols() });
        }
        let mut kernels = self.kernels.clone();
        let source = self.network.source();
        let new_source = q.mul(self.source_kernel());
        kernels.insert(source, Arc::new(new_source));
        Ok(LinearNetworkCode {
            network: Arc::clone(&self.network),
            field: self.field,
            dimension: q.rows(),
            kernels,
        })
    }

    /// Whether `self` and `other` hold bit-identical kernels at every
    /// non-source, non-sink node.
    pub fn shares_intermediate_kernels(&self, other: &LinearNetworkCode) -> bool {
        let source = self.network.source();
        self.kernels
            .iter()
            .filter(|(&v, _)| v != source)
            .all(|(v, k)| other.kernels.get(v).is_some_and(|o| **o == **k))
    }

    /// Constructs a decodable `n`-dimensional code: seeded-random local
    /// coefficients with a bounded number of retries, then an exhaustive
    /// scan of all coefficient assignments for small enough search spaces.
    pub fn construct_decodable(
        network: Arc<Network>,
        n: usize,
        field: FieldSpec,
        seed: u64,
    ) -> Result<Self, LncError> {
        if n as u64 > network.c_min() {
            return Err(LncError::DimensionTooLarge { n, c_min: network.c_min() });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_RETRY_BUDGET {
            let code = Self::random(Arc::clone(&network), n, field, &mut rng);
            if code.is_decodable() {
                return Ok(code);
            }
        }
        if let Some(code) = Self::exhaustive_decodable_search(Arc::clone(&network), n, field) {
            return Ok(code);
        }
        Err(LncError::ConstructionFailed)
    }

    fn random(network: Arc<Network>, n: usize, field: FieldSpec, rng: &mut impl Rng) -> Self {
        let mut kernels = BTreeMap::new();
        for v in 0..network.node_count() {
            if network.is_sink(v) {
                continue;
            }
            let rows = if v == network.source() { n } else { network.in_edges(v).len() };
            let cols = network.out_edges(v).len();
            let data: Vec<Scalar> = (0..rows * cols).map(|_| rng.gen_range(0..field.order())).collect();
            kernels.insert(v, Arc::new(Matrix::new(rows, cols, data, field).expect("shape by construction")));
        }
        LinearNetworkCode { network, field, dimension: n, kernels }
    }

    /// Deterministic fallback: scans coefficient assignments in
    /// lexicographic order (earlier coefficients most significant) and
    /// returns the first decodable code, or `None` when the search space
    /// exceeds the budget or is exhausted.
    pub fn exhaustive_decodable_search(network: Arc<Network>, n: usize, field: FieldSpec) -> Option<Self> {
        let mut shapes: Vec<(usize, usize, usize)> = Vec::new(); // (node, rows, cols)
        let mut total = 0usize;
        for v in 0..network.node_count() {
            if network.is_sink(v) {
                continue;
            }
            let rows = if v == network.source() { n } else { network.in_edges(v).len() };
            let cols = network.out_edges(v).len();
            shapes.push((v, rows, cols));
            total += rows * cols;
        }
        let q = field.order();
        let space = (q as f64).powi(total as i32);
        if space > EXHAUSTIVE_SEARCH_LIMIT as f64 {
            return None;
        }
        let mut coeffs = vec![0 as Scalar; total];
        loop {
            let mut kernels = BTreeMap::new();
            let mut offset = 0;
            for &(v, rows, cols) in &shapes {
                let data = coeffs[offset..offset + rows * cols].to_vec();
                offset += rows * cols;
                kernels.insert(v, Arc::new(Matrix::new(rows, cols, data, field).expect("shape by construction")));
            }
            let code = LinearNetworkCode {
                network: Arc::clone(&network),
                field,
                dimension: n,
                kernels,
            };
            if code.is_decodable() {
                return Some(code);
            }
            let mut i = total;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }
}

const RANDOM_RETRY_BUDGET: usize = 64;
const EXHAUSTIVE_SEARCH_LIMIT: u64 = 1 << 22;
