//! Secure linear network codes and the local-encoding-preserving rate
//! reduction.
//!
//! A [`SecureCode`] pairs a decodable linear network code with an invertible
//! pre-coding matrix `Q` whose first `rate` columns span a space meeting
//! every wiretapped kernel space trivially. [`reduce_rate`] turns a
//! rate-`w` secure code into a rate-`(w-1)` one that keeps every
//! intermediate kernel, by choosing a single column vector `k`:
//!
//! 1. keep `w-1` independent truncated message columns,
//! 2. partition the wiretap collection by whether the kept truncations
//!    together with the wiretapped truncated kernels stay independent,
//! 3. pick `h` outside the dependent-side subspace sums,
//! 4. per independent-side set, solve for the coordinates of `h` and a
//!    scalar `theta_A`,
//! 5. pick a nonzero `theta` with `theta * theta_A != -1` everywhere, and
//! 6. set `k = theta * h`; the new source kernel and pre-coding matrix are
//!    `[I | k]` images of the old ones.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::{vector_outside_union, LinalgError, Matrix, Subspace};
use crate::lnc::{LinearNetworkCode, LncError};
use crate::network::{EdgeSet, Network, NetworkError, WiretapCollection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlncError {
    #[error("rate {rate} + security level {security} does not match the code dimension {dimension}")]
    DimensionMismatch { rate: usize, security: usize, dimension: usize },
    #[error("dimension {n} exceeds the network capacity C_min = {c_min}")]
    DimensionExceedsCapacity { n: usize, c_min: u64 },
    #[error("pre-coding matrix must be invertible {n}x{n}")]
    NotInvertible { n: usize },
    #[error("security condition fails on wiretap set {set}")]
    NotSecure { set: EdgeSet },
    #[error("code is not decodable")]
    NotDecodable,
    #[error("wiretap collection was built for security level {got}, expected {expected}")]
    CollectionMismatch { expected: usize, got: usize },
    #[error("edge subset is not on the independent side of the partition")]
    NotIndependent,
    #[error("rate is already zero")]
    RateExhausted,
    #[error("field of order {order} is too small: {reason}")]
    FieldTooSmall { order: u64, reason: String },
    #[error("pinned choice rejected: {0}")]
    InvalidPin(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Lnc(#[from] LncError),
}

/// A secure linear network code of rate `w` and security level `r` over a
/// code of dimension `n = w + r`.
///
/// The source input `x = (m, k)` is pre-encoded to `x' = x * Q^{-1}` and
/// then multicast with the underlying code; the first `w` columns of `Q`
/// carry the message, the last `r` the key.
#[derive(Debug, Clone, PartialEq)]
pub struct SecureCode {
    code: LinearNetworkCode,
    pre_matrix: Matrix,
    rate: usize,
    security_level: usize,
}

impl SecureCode {
    /// Validates every type invariant: dimension bookkeeping, an invertible
    /// `Q`, the security condition over `collection`, and decodability.
    pub fn new(
        code: LinearNetworkCode,
        pre_matrix: Matrix,
        rate: usize,
        security_level: usize,
        collection: &WiretapCollection,
    ) -> Result<Self, SlncError> {
        let n = code.dimension();
        if rate + security_level != n {
            return Err(SlncError::DimensionMismatch { rate, security: security_level, dimension: n });
        }
        if n as u64 > code.network().c_min() {
            return Err(SlncError::DimensionExceedsCapacity { n, c_min: code.network().c_min() });
        }
        if pre_matrix.rows() != n || pre_matrix.cols() != n || pre_matrix.inverse().is_err() {
            return Err(SlncError::NotInvertible { n });
        }
        if let Some(set) = check_security_witness(&code, &pre_matrix, rate, security_level, collection)? {
            return Err(SlncError::NotSecure { set });
        }
        if !code.is_decodable() {
            return Err(SlncError::NotDecodable);
        }
        Ok(SecureCode { code, pre_matrix, rate, security_level })
    }

    /// Wraps the parts without validating any invariant. Intended for
    /// verification tools that must be able to judge arbitrary pairings,
    /// including insecure or undecodable ones.
    pub fn new_unchecked(
        code: LinearNetworkCode,
        pre_matrix: Matrix,
        rate: usize,
        security_level: usize,
    ) -> Self {
        SecureCode { code, pre_matrix, rate, security_level }
    }

    pub fn code(&self) -> &LinearNetworkCode {
        &self.code
    }

    pub fn pre_matrix(&self) -> &Matrix {
        &self.pre_matrix
    }

    pub fn rate(&self) -> usize {
        self.rate
    }

    pub fn security_level(&self) -> usize {
        self.security_level
    }

    pub fn dimension(&self) -> usize {
        self.code.dimension()
    }

    pub fn field(&self) -> FieldSpec {
        self.code.field()
    }

    pub fn network(&self) -> &Arc<Network> {
        self.code.network()
    }
}

/// The trivial-intersection test behind the security condition: for every
/// wiretap set, the message columns and the wiretapped global kernels
/// together must have rank `rate + rank(kernels)`.
pub fn check_security(
    code: &LinearNetworkCode,
    pre_matrix: &Matrix,
    rate: usize,
    security_level: usize,
    collection: &WiretapCollection,
) -> Result<bool, SlncError> {
    Ok(check_security_witness(code, pre_matrix, rate, security_level, collection)?.is_none())
}

/// Like [`check_security`] but reports the first failing wiretap set.
///
/// The split `rate + security_level` need not exhaust the dimension here;
/// only the first `rate` columns of the pre-coding matrix matter to the
/// condition.
pub fn check_security_witness(
    code: &LinearNetworkCode,
    pre_matrix: &Matrix,
    rate: usize,
    security_level: usize,
    collection: &WiretapCollection,
) -> Result<Option<EdgeSet>, SlncError> {
    let n = code.dimension();
    if rate > n || pre_matrix.rows() != n || pre_matrix.cols() < rate {
        return Err(SlncError::DimensionMismatch { rate, security: security_level, dimension: n });
    }
    if collection.r != security_level {
        return Err(SlncError::CollectionMismatch { expected: security_level, got: collection.r });
    }
    let field = code.field();
    let globals = code.global_kernels();
    let message: Vec<Vec<Scalar>> = (0..rate).map(|j| pre_matrix.column(j)).collect();
    let b = Matrix::from_columns(n, &message, field).expect("column shapes agree");
    for set in collection.iter() {
        let kernels: Vec<Vec<Scalar>> = set.iter().map(|e| globals.kernel(e).to_vec()).collect();
        let f = Matrix::from_columns(n, &kernels, field).expect("column shapes agree");
        if b.hstack(&f).rank() != rate + f.rank() {
            return Ok(Some(set.clone()));
        }
    }
    Ok(None)
}

/// Constructs an invertible pre-coding matrix for the given rate and
/// security level by choosing columns in turn: each of the first `rate`
/// columns avoids every sum of the already-chosen span with a wiretapped
/// kernel space, and each remaining column merely avoids the chosen span.
/// Deterministic: every choice is the lexicographically smallest vector.
pub fn construct_q(
    code: &LinearNetworkCode,
    rate: usize,
    security_level: usize,
    collection: &WiretapCollection,
) -> Result<Matrix, SlncError> {
    let n = code.dimension();
    if rate + security_level != n {
        return Err(SlncError::DimensionMismatch { rate, security: security_level, dimension: n });
    }
    if collection.r != security_level {
        return Err(SlncError::CollectionMismatch { expected: security_level, got: collection.r });
    }
    let field = code.field();
    let globals = code.global_kernels();
    let wiretap_spans: Vec<Subspace> = collection
        .iter()
        .map(|set| {
            let vs: Vec<Vec<Scalar>> = set.iter().map(|e| globals.kernel(e).to_vec()).collect();
            Subspace::from_vectors(n, &vs, field)
        })
        .collect();

    let mut chosen = Subspace::zero(n, field);
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut avoid = vec![chosen.clone()];
        if i < rate {
            avoid.extend(wiretap_spans.iter().map(|l| chosen.sum(l)));
        }
        let b = vector_outside_union(n, &avoid, field).map_err(|e| match e {
            LinalgError::UnionCoversSpace { order } => SlncError::FieldTooSmall {
                order,
                reason: format!("no vector outside the union while choosing pre-coding column {}", i + 1),
            },
            other => panic!("unexpected linalg error: {other}"),
        })?;
        chosen = chosen.sum(&Subspace::from_vectors(n, std::slice::from_ref(&b), field));
        columns.push(b);
    }
    Ok(Matrix::from_columns(n, &columns, field).expect("column shapes agree"))
}

/// Splits the collection by whether the kept truncated message columns
/// together with the truncated wiretapped kernels have full rank `n-1`.
/// The independent side is returned second.
pub fn partition_wiretap_sets(
    kept_b_trunc: &[Vec<Scalar>],
    kernel_trunc: &[Vec<Scalar>],
    ambient: usize,
    field: FieldSpec,
    collection: &WiretapCollection,
) -> (Vec<EdgeSet>, Vec<EdgeSet>) {
    let mut dependent = Vec::new();
    let mut independent = Vec::new();
    for set in collection.iter() {
        let mut vs: Vec<Vec<Scalar>> = kept_b_trunc.to_vec();
        vs.extend(set.iter().map(|e| kernel_trunc[e].clone()));
        let m = Matrix::from_columns(ambient, &vs, field).expect("column shapes agree");
        if m.rank() == ambient {
            independent.push(set.clone());
        } else {
            dependent.push(set.clone());
        }
    }
    (dependent, independent)
}

/// Materializes the excluded set `K_A` for an independent-side wiretap set:
/// all combinations of the kept truncated columns and truncated kernels
/// whose last-component combination equals `-1`. Enumerates exactly the
/// `q^{n-2}` solutions of the affine constraint; empty when the constraint
/// has no solution. Desk-scale verification machinery only.
pub fn kappa_set(
    set: &EdgeSet,
    kept_b_trunc: &[Vec<Scalar>],
    kept_b_last: &[Scalar],
    kernel_trunc: &[Vec<Scalar>],
    kernel_last: &[Scalar],
    field: FieldSpec,
) -> Result<Vec<Vec<Scalar>>, SlncError> {
    let ambient = kept_b_trunc.first().map_or_else(
        || set.iter().next().map_or(0, |e| kernel_trunc[e].len()),
        |v| v.len(),
    );
    let mut basis: Vec<Vec<Scalar>> = kept_b_trunc.to_vec();
    basis.extend(set.iter().map(|e| kernel_trunc[e].clone()));
    let m = Matrix::from_columns(ambient, &basis, field).expect("column shapes agree");
    if m.cols() != ambient || m.rank() != ambient {
        return Err(SlncError::NotIndependent);
    }
    let mut functional: Vec<Scalar> = kept_b_last.to_vec();
    functional.extend(set.iter().map(|e| kernel_last[e]));

    let Some(pivot) = functional.iter().position(|&c| c != 0) else {
        return Ok(Vec::new());
    };
    let q = field.order();
    let pivot_inv = field.inv(functional[pivot]).expect("pivot is nonzero");
    let minus_one = field.neg(1);
    let free: Vec<usize> = (0..ambient).filter(|&i| i != pivot).collect();
    let mut assignment = vec![0 as Scalar; free.len()];
    let mut result = Vec::new();
    loop {
        let mut coeffs = vec![0 as Scalar; ambient];
        let mut partial: Scalar = 0;
        for (slot, &idx) in free.iter().enumerate() {
            coeffs[idx] = assignment[slot];
            partial = field.add(partial, field.mul(functional[idx], assignment[slot]));
        }
        coeffs[pivot] = field.mul(pivot_inv, field.sub(minus_one, partial));
        result.push(m.mul_col(&coeffs));
        let mut i = free.len();
        loop {
            if i == 0 {
                result.sort();
                return Ok(result);
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < q {
                break;
            }
            assignment[i] = 0;
        }
    }
}

/// The recorded choices of one rate-reduction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionContext {
    /// Positions (into the first `rate` columns of `Q`) of the kept message
    /// columns, in their original order.
    pub kept_columns: Vec<usize>,
    /// Position of the message column displaced to the key side.
    pub dropped_column: usize,
    /// Wiretap sets whose truncated vectors are dependent.
    pub a_prime: Vec<EdgeSet>,
    /// Wiretap sets whose truncated vectors stay independent.
    pub a_double_prime: Vec<EdgeSet>,
    pub h: Vec<Scalar>,
    pub theta_table: BTreeMap<EdgeSet, Scalar>,
    pub theta: Scalar,
    pub k: Vec<Scalar>,
}

/// Optional overrides reproducing a hand-picked reduction trace. Pins are
/// validated against the same legality constraints the canonical choices
/// satisfy before they are used.
#[derive(Debug, Clone, Default)]
pub struct ReduceOptions {
    pub pin_h: Option<Vec<Scalar>>,
    pub pin_theta: Option<Scalar>,
}

/// Greedy choice of the lexicographically first independent subset of size
/// `rate - 1` among the truncated message columns. Returns the kept
/// positions and the single dropped position.
pub(crate) fn keep_message_columns(
    truncated: &[Vec<Scalar>],
    ambient: usize,
    field: FieldSpec,
) -> (Vec<usize>, usize) {
    let rate = truncated.len();
    debug_assert!(rate >= 1);
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped = rate - 1;
    let mut span = Subspace::zero(ambient, field);
    for (j, v) in truncated.iter().enumerate() {
        if kept.len() == rate - 1 {
            dropped = j;
            break;
        }
        if span.contains(v) {
            dropped = j;
            continue;
        }
        span = span.sum(&Subspace::from_vectors(ambient, std::slice::from_ref(v), field));
        kept.push(j);
    }
    (kept, dropped)
}

/// One step of the rate-reduction algorithm: from a rate-`w` secure code to
/// a rate-`(w-1)` secure code with identical kernels at every non-source
/// node.
pub fn reduce_rate(
    sc: &SecureCode,
    collection: &WiretapCollection,
    opts: &ReduceOptions,
) -> Result<(SecureCode, ReductionContext), SlncError> {
    let rate = sc.rate();
    if rate == 0 {
        return Err(SlncError::RateExhausted);
    }
    if collection.r != sc.security_level() {
        return Err(SlncError::CollectionMismatch {
            expected: sc.security_level(),
            got: collection.r,
        });
    }
    let n = sc.dimension();
    let m = n - 1;
    let field = sc.field();
    let q_cols: Vec<Vec<Scalar>> = sc.pre_matrix.columns().collect();
    let globals = sc.code.global_kernels();
    let kernel_trunc: Vec<Vec<Scalar>> = globals.iter().map(|f| f[..m].to_vec()).collect();
    let kernel_last: Vec<Scalar> = globals.iter().map(|f| f[m]).collect();

    // line 1: keep rate-1 independent truncated message columns and move
    // the displaced one to the key side of Q
    let message_trunc: Vec<Vec<Scalar>> = q_cols[..rate].iter().map(|b| b[..m].to_vec()).collect();
    let (kept, dropped) = keep_message_columns(&message_trunc, m, field);
    let kept_b_trunc: Vec<Vec<Scalar>> = kept.iter().map(|&j| message_trunc[j].clone()).collect();
    let kept_b_last: Vec<Scalar> = kept.iter().map(|&j| q_cols[j][m]).collect();
    let mut perm: Vec<usize> = kept.clone();
    perm.push(dropped);
    perm.extend(rate..n);
    let permuted_q =
        Matrix::from_columns(n, &perm.iter().map(|&j| q_cols[j].clone()).collect::<Vec<_>>(), field)
            .expect("column shapes agree");

    // line 2
    let (a_prime, a_double_prime) =
        partition_wiretap_sets(&kept_b_trunc, &kernel_trunc, m, field, collection);

    // line 3
    let kept_span = Subspace::from_vectors(m, &kept_b_trunc, field);
    let avoid: Vec<Subspace> = a_prime
        .iter()
        .map(|set| {
            let vs: Vec<Vec<Scalar>> = set.iter().map(|e| kernel_trunc[e].clone()).collect();
            kept_span.sum(&Subspace::from_vectors(m, &vs, field))
        })
        .collect();
    let h = match &opts.pin_h {
        Some(h) => {
            if h.len() != m {
                return Err(SlncError::InvalidPin(format!(
                    "h has length {}, expected {m}",
                    h.len()
                )));
            }
            let h: Vec<Scalar> = h.iter().map(|&v| field.reduce(v)).collect();
            if let Some(bad) = avoid.iter().position(|s| s.contains(&h)) {
                return Err(SlncError::InvalidPin(format!(
                    "h lies in the excluded subspace sum of wiretap set {}",
                    a_prime[bad]
                )));
            }
            h
        }
        None => vector_outside_union(m, &avoid, field).map_err(|e| match e {
            LinalgError::UnionCoversSpace { order } => SlncError::FieldTooSmall {
                order,
                reason: "no vector outside the dependent-side subspace sums".into(),
            },
            other => panic!("unexpected linalg error: {other}"),
        })?,
    };

    // lines 4-6: coordinates of h in each independent-side basis
    let mut theta_table = BTreeMap::new();
    for set in &a_double_prime {
        let mut basis: Vec<Vec<Scalar>> = kept_b_trunc.clone();
        basis.extend(set.iter().map(|e| kernel_trunc[e].clone()));
        let basis_m = Matrix::from_columns(m, &basis, field).expect("column shapes agree");
        let coeffs = basis_m.solve_unique(&h).expect("independent-side vectors form a basis");
        let mut lasts: Vec<Scalar> = kept_b_last.clone();
        lasts.extend(set.iter().map(|e| kernel_last[e]));
        let theta_a = coeffs
            .iter()
            .zip(&lasts)
            .fold(0, |acc, (&c, &l)| field.add(acc, field.mul(c, l)));
        theta_table.insert(set.clone(), theta_a);
    }

    // line 7
    let minus_one = field.neg(1);
    let legal = |theta: Scalar| theta_table.values().all(|&ta| field.mul(theta, ta) != minus_one);
    let theta = match opts.pin_theta {
        Some(t) => {
            let t = field.reduce(t);
            if t == 0 {
                return Err(SlncError::InvalidPin("theta must be nonzero".into()));
            }
            if !legal(t) {
                return Err(SlncError::InvalidPin(
                    "theta * theta_A = -1 for some independent-side wiretap set".into(),
                ));
            }
            t
        }
        None => (1..field.order()).find(|&t| legal(t)).ok_or_else(|| SlncError::FieldTooSmall {
            order: field.order(),
            reason: "every nonzero scalar hits theta * theta_A = -1".into(),
        })?,
    };

    // line 8
    let k: Vec<Scalar> = h.iter().map(|&x| field.mul(theta, x)).collect();

    // lines 9-10: apply [I | k] to the source kernel and to Q
    let reduction = reduction_matrix(&k, field);
    let reduced_code = sc.code.transform(&reduction)?;
    let q_reduced = reduction.mul(&permuted_q);

    // line 11: drop the single non-pivot column; the greedy scan keeps the
    // kept message columns in place
    let pivots = q_reduced.pivot_columns();
    debug_assert_eq!(pivots.len(), m);
    let removed = (0..n).find(|c| !pivots.contains(c)).expect("rank is n-1");
    assert!(removed >= rate - 1, "kept truncated message columns stay independent");
    let final_cols: Vec<Vec<Scalar>> =
        (0..n).filter(|&c| c != removed).map(|c| q_reduced.column(c)).collect();
    let q_next = Matrix::from_columns(m, &final_cols, field).expect("column shapes agree");

    let next = SecureCode::new(reduced_code, q_next, rate - 1, sc.security_level(), collection)?;
    let ctx = ReductionContext {
        kept_columns: kept,
        dropped_column: dropped,
        a_prime,
        a_double_prime,
        h,
        theta_table,
        theta,
        k,
    };
    Ok((next, ctx))
}

/// The `(n-1) x n` matrix `[I_{n-1} | k]`.
pub fn reduction_matrix(k: &[Scalar], field: FieldSpec) -> Matrix {
    let m = k.len();
    let mut out = Matrix::zeros(m, m + 1, field);
    for (i, &ki) in k.iter().enumerate() {
        out.set(i, i, 1);
        out.set(i, m, ki);
    }
    out
}

/// A local-encoding-preserving family: one secure code per rate from
/// `C_min - r` down to `0`, all sharing every intermediate kernel.
#[derive(Debug, Clone)]
pub struct CodeFamily {
    pub security_level: usize,
    /// Members in descending rate order.
    pub members: Vec<SecureCode>,
}

impl CodeFamily {
    pub fn rates(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|m| m.rate())
    }

    pub fn member_at_rate(&self, rate: usize) -> Option<&SecureCode> {
        self.members.iter().find(|m| m.rate() == rate)
    }
}

/// Whether to enforce the sufficient field-size bound `q > max(|T|, |A_r|)`
/// up front, or to attempt the construction and fail only when a choice
/// set actually empties out. The bound is sufficient, not necessary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundMode {
    #[default]
    Strict,
    BestEffort,
}

#[derive(Debug, Clone, Default)]
pub struct FamilyOptions {
    pub seed: u64,
    pub bound_mode: BoundMode,
    /// Optional externally supplied base code of dimension `C_min`;
    /// otherwise a seeded construction is used.
    pub base_code: Option<LinearNetworkCode>,
}

/// Builds the full family for a fixed security level: a top code at rate
/// `C_min - r`, then repeated rate reductions down to rate `0`. Every
/// member is validated for security and decodability on construction.
pub fn build_family(
    network: Arc<Network>,
    security_level: usize,
    field: FieldSpec,
    options: &FamilyOptions,
) -> Result<CodeFamily, SlncError> {
    let c_min = network.c_min();
    let collection = network.primary_subsets(security_level)?;
    if options.bound_mode == BoundMode::Strict {
        let bound = (network.sink_count() as u64).max(collection.len() as u64);
        if field.order() <= bound {
            return Err(SlncError::FieldTooSmall {
                order: field.order(),
                reason: format!(
                    "order must exceed max(|T|, |A_r|) = {bound}; pass best-effort mode to attempt anyway"
                ),
            });
        }
    }
    let n = c_min as usize;
    let base = match &options.base_code {
        Some(code) => {
            if code.dimension() != n {
                return Err(SlncError::DimensionMismatch {
                    rate: n - security_level,
                    security: security_level,
                    dimension: code.dimension(),
                });
            }
            code.clone()
        }
        None => LinearNetworkCode::construct_decodable(Arc::clone(&network), n, field, options.seed)?,
    };
    let top_rate = n - security_level;
    let q = construct_q(&base, top_rate, security_level, &collection)?;
    let mut members = vec![SecureCode::new(base, q, top_rate, security_level, &collection)?];
    while members.last().expect("nonempty").rate() > 0 {
        let (next, _) = reduce_rate(members.last().expect("nonempty"), &collection, &ReduceOptions::default())?;
        members.push(next);
    }
    Ok(CodeFamily { security_level, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;
    use std::collections::BTreeMap as Map;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn diamond() -> Arc<Network> {
        // two parallel edges s->t via distinct relays
        Arc::new(
            Network::new(
                vec!["s".into(), "a".into(), "b".into(), "t".into()],
                vec![
                    ("e1".into(), "s".into(), "a".into()),
                    ("e2".into(), "s".into(), "b".into()),
                    ("e3".into(), "a".into(), "t".into()),
                    ("e4".into(), "b".into(), "t".into()),
                ],
                "s",
                &["t".into()],
            )
            .unwrap(),
        )
    }

    fn diamond_code() -> LinearNetworkCode {
        let table: Map<String, Matrix> = [
            ("s".to_string(), Matrix::from_rows(&[vec![1, 0], vec![0, 1]], f5()).unwrap()),
            ("a".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
            ("b".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
        ]
        .into();
        LinearNetworkCode::load_kernels(diamond(), 2, f5(), &table).unwrap()
    }

    #[test]
    fn secure_code_validates_rate_split() {
        let code = diamond_code();
        let coll = code.network().primary_subsets(1).unwrap();
        let err = SecureCode::new(code, Matrix::identity(2, f5()), 2, 1, &coll).unwrap_err();
        assert!(matches!(err, SlncError::DimensionMismatch { .. }));
    }

    #[test]
    fn security_check_catches_exposed_message_column() {
        let code = diamond_code();
        let coll = code.network().primary_subsets(1).unwrap();
        // message column equal to a wiretapped kernel leaks
        let q = Matrix::from_columns(2, &[vec![1, 0], vec![0, 1]], f5()).unwrap();
        let witness = check_security_witness(&code, &q, 1, 1, &coll).unwrap();
        assert_eq!(witness, Some(code.network().edge_set(&["e1"]).unwrap()));
        assert!(!check_security(&code, &q, 1, 1, &coll).unwrap());
    }

    #[test]
    fn zero_rate_is_always_secure() {
        let code = diamond_code();
        let coll = code.network().primary_subsets(2).unwrap();
        let q = Matrix::identity(2, f5());
        assert!(check_security(&code, &q, 0, 2, &coll).unwrap());
    }

    #[test]
    fn construct_q_satisfies_its_own_contract() {
        let code = diamond_code();
        let coll = code.network().primary_subsets(1).unwrap();
        let q = construct_q(&code, 1, 1, &coll).unwrap();
        assert!(q.inverse().is_ok());
        assert!(check_security(&code, &q, 1, 1, &coll).unwrap());
    }

    #[test]
    fn construct_q_with_no_security_constraints_is_invertible() {
        let code = diamond_code();
        let coll = code.network().primary_subsets(0).unwrap();
        let q = construct_q(&code, 2, 0, &coll).unwrap();
        assert!(q.inverse().is_ok());
    }

    #[test]
    fn partition_of_empty_collection_is_empty() {
        let coll = WiretapCollection { r: 1, sets: vec![] };
        let (dep, indep) = partition_wiretap_sets(&[vec![1, 0]], &[], 2, f5(), &coll);
        assert!(dep.is_empty() && indep.is_empty());
    }

    #[test]
    fn partition_with_too_few_vectors_is_all_dependent() {
        // ambient 3, but only 1 kept column and size-1 sets: rank <= 2 < 3
        let net = diamond();
        let coll = WiretapCollection {
            r: 1,
            sets: vec![net.edge_set(&["e1"]).unwrap(), net.edge_set(&["e2"]).unwrap()],
        };
        let kernel_trunc = vec![vec![1, 0, 0]; 4];
        let (dep, indep) = partition_wiretap_sets(&[vec![0, 1, 0]], &kernel_trunc, 3, f5(), &coll);
        assert_eq!(dep.len(), 2);
        assert!(indep.is_empty());
    }

    #[test]
    fn kappa_set_rejects_dependent_sets() {
        let net = diamond();
        let set = net.edge_set(&["e1"]).unwrap();
        let trunc = vec![vec![2, 0]; 4];
        let err = kappa_set(&set, &[vec![1, 0]], &[0], &trunc, &[1; 4], f5()).unwrap_err();
        assert_eq!(err, SlncError::NotIndependent);
    }

    #[test]
    fn kappa_set_is_empty_when_the_constraint_is_unsatisfiable() {
        let net = diamond();
        let set = net.edge_set(&["e1"]).unwrap();
        // all last components zero: no combination reaches -1
        let trunc = vec![vec![0, 1]; 4];
        let ks = kappa_set(&set, &[vec![1, 0]], &[0], &trunc, &[0; 4], f5()).unwrap();
        assert!(ks.is_empty());
    }

    #[test]
    fn reduce_rate_exhausted_at_zero() {
        let code = diamond_code();
        let coll = code.network().primary_subsets(1).unwrap();
        let q = construct_q(&code, 1, 1, &coll).unwrap();
        let sc = SecureCode::new(code, q, 1, 1, &coll).unwrap();
        let (zero, _) = reduce_rate(&sc, &coll, &ReduceOptions::default()).unwrap();
        assert_eq!(zero.rate(), 0);
        assert!(zero.code().is_decodable());
        let err = reduce_rate(&zero, &coll, &ReduceOptions::default()).unwrap_err();
        assert_eq!(err, SlncError::RateExhausted);
    }

    #[test]
    fn family_on_the_diamond() {
        let net = diamond();
        let fam = build_family(net, 1, f5(), &FamilyOptions::default()).unwrap();
        assert_eq!(fam.rates().collect::<Vec<_>>(), vec![1, 0]);
        for pair in fam.members.windows(2) {
            assert!(pair[0].code().shares_intermediate_kernels(pair[1].code()));
        }
    }

    #[test]
    fn strict_bound_mode_reports_the_violated_bound() {
        let net = diamond();
        // |T| = 1, |A_1| = 2 -> q must exceed 2; F_2 fails even before that
        let f3 = FieldSpec::new(3).unwrap();
        assert!(build_family(Arc::clone(&net), 1, f3, &FamilyOptions::default()).is_ok());
        let f2 = FieldSpec::new(2).unwrap();
        let err = build_family(net, 1, f2, &FamilyOptions::default()).unwrap_err();
        assert!(matches!(err, SlncError::FieldTooSmall { order: 2, .. }));
    }

    #[test]
    fn security_level_above_capacity() {
        let net = diamond();
        let err = build_family(net, 3, f5(), &FamilyOptions::default()).unwrap_err();
        assert!(matches!(err, SlncError::Network(NetworkError::SecurityLevelTooHigh { .. })));
    }
}
