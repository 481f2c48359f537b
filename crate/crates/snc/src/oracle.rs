//! Exhaustive verifiers, independent of the algebraic shortcuts they check.
//!
//! Secrecy is tested as distributional identity: for every wiretap set the
//! distribution of the observed symbols, over a uniform key, must be the
//! same for every message. Decodability is tested by enumerating every
//! (message, key) input and demanding that no two distinct messages ever
//! produce the same sink observation. Both run the real encoder (pre-code
//! by `Q^{-1}`, transmit by the local recursion) rather than any global
//! shortcut.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Scalar;
use crate::linalg::{Matrix, Subspace};
use crate::network::{EdgeSet, Network, WiretapCollection};
use crate::slnc::{keep_message_columns, SecureCode};

/// Default evaluation budget for the exhaustive checks.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive check needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

/// Every edge subset of size at most `r`, including the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllWiretapSets {
    pub r: usize,
    pub sets: Vec<EdgeSet>,
}

impl AllWiretapSets {
    pub fn new(net: &Network, r: usize) -> Self {
        let m = net.edge_count();
        let mut sets = vec![EdgeSet::empty()];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..r {
            let mut next = Vec::new();
            for combo in &frontier {
                let start = combo.last().map_or(0, |&l| l + 1);
                for e in start..m {
                    let mut bigger = combo.clone();
                    bigger.push(e);
                    sets.push(EdgeSet::from_indices(bigger.iter().copied()));
                    next.push(bigger);
                }
            }
            frontier = next;
        }
        sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        AllWiretapSets { r, sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Outcome of an exhaustive secrecy check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecrecyReport {
    pub passed: bool,
    /// Present exactly when the check failed.
    pub failing_set: Option<EdgeSet>,
    pub message_count: u64,
    pub key_count: u64,
}

fn pow_u128(base: u64, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// Enumerates all vectors of `F_q^len` in lexicographic order.
fn enumerate_vectors(q: u64, len: usize) -> impl Iterator<Item = Vec<Scalar>> {
    let total = pow_u128(q, len);
    (0..total).map(move |mut idx| {
        let mut v = vec![0 as Scalar; len];
        for slot in (0..len).rev() {
            v[slot] = (idx % q as u128) as Scalar;
            idx /= q as u128;
        }
        v
    })
}

/// Tabulates, for each wiretap set in `scope` and each message, the
/// distribution of the wiretapped symbols over a uniform key, and passes
/// only if the distribution never depends on the message.
pub fn exhaustive_secrecy(
    sc: &SecureCode,
    scope: &AllWiretapSets,
    budget: u64,
) -> Result<SecrecyReport, OracleError> {
    let field = sc.field();
    let q = field.order();
    let rate = sc.rate();
    let r = sc.security_level();
    let required = pow_u128(q, rate + r).saturating_mul(scope.sets.len() as u128);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let message_count = pow_u128(q, rate) as u64;
    let key_count = pow_u128(q, r) as u64;
    let q_inv = sc.pre_matrix().inverse().expect("pre-coding matrix is invertible");

    // transmit once per input, reuse across wiretap sets
    let mut observations: Vec<(Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    for m in enumerate_vectors(q, rate) {
        for k in enumerate_vectors(q, r) {
            let mut x = m.clone();
            x.extend(&k);
            let x_pre = q_inv.row_mul(&x);
            let symbols = sc.code().transmit(&x_pre).expect("input length matches dimension");
            observations.push((m.clone(), symbols));
        }
    }

    for set in &scope.sets {
        let mut per_message: BTreeMap<&[Scalar], BTreeMap<Vec<Scalar>, u64>> = BTreeMap::new();
        for (m, symbols) in &observations {
            let view: Vec<Scalar> = set.iter().map(|e| symbols[e]).collect();
            *per_message.entry(m).or_default().entry(view).or_insert(0) += 1;
        }
        let mut dists = per_message.values();
        if let Some(first) = dists.next() {
            if dists.any(|d| d != first) {
                return Ok(SecrecyReport {
                    passed: false,
                    failing_set: Some(set.clone()),
                    message_count,
                    key_count,
                });
            }
        }
    }
    Ok(SecrecyReport { passed: true, failing_set: None, message_count, key_count })
}

/// Zero-error message decoding, checked by collision: for every sink, no
/// two inputs with distinct messages may produce identical in-edge symbols.
pub fn exhaustive_decodability(sc: &SecureCode, budget: u64) -> Result<bool, OracleError> {
    let field = sc.field();
    let q = field.order();
    let rate = sc.rate();
    let r = sc.security_level();
    let net = sc.network().clone();
    let required = pow_u128(q, rate + r).saturating_mul(net.sink_count() as u128);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let q_inv = sc.pre_matrix().inverse().expect("pre-coding matrix is invertible");
    let mut decoded: Vec<BTreeMap<Vec<Scalar>, Vec<Scalar>>> = vec![BTreeMap::new(); net.node_count()];
    for m in enumerate_vectors(q, rate) {
        for k in enumerate_vectors(q, r) {
            let mut x = m.clone();
            x.extend(&k);
            let x_pre = q_inv.row_mul(&x);
            let symbols = sc.code().transmit(&x_pre).expect("input length matches dimension");
            for t in net.sinks() {
                let view: Vec<Scalar> = net.in_edges(t).iter().map(|&e| symbols[e]).collect();
                match decoded[t].get(&view) {
                    Some(prev) if prev != &m => return Ok(false),
                    Some(_) => {}
                    None => {
                        decoded[t].insert(view, m.clone());
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Exhaustively computes the set of valid reduction vectors `k`: those for
/// which the kept truncated message columns stay independent after the
/// `[I | k]` transformation and, per wiretap set, the transformed vectors
/// satisfy the side-appropriate rank condition. Ground truth for the
/// rate-reduction choices.
pub fn valid_k_oracle(
    sc: &SecureCode,
    collection: &WiretapCollection,
    budget: u64,
) -> Result<Vec<Vec<Scalar>>, OracleError> {
    let field = sc.field();
    let q = field.order();
    let n = sc.dimension();
    let m = n - 1;
    let required = pow_u128(q, m);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let rate = sc.rate();
    let globals = sc.code().global_kernels();
    let q_cols: Vec<Vec<Scalar>> = sc.pre_matrix().columns().collect();
    let message_trunc: Vec<Vec<Scalar>> = q_cols[..rate].iter().map(|b| b[..m].to_vec()).collect();
    let (kept, _) = keep_message_columns(&message_trunc, m, field);
    let kept_full: Vec<Vec<Scalar>> = kept.iter().map(|&j| q_cols[j].clone()).collect();

    // classify each wiretap set once, on the untransformed truncations
    let kept_trunc: Vec<Vec<Scalar>> = kept_full.iter().map(|b| b[..m].to_vec()).collect();
    let mut dependent_side: Vec<(&EdgeSet, Subspace)> = Vec::new();
    let mut independent_side: Vec<&EdgeSet> = Vec::new();
    for set in collection.iter() {
        let mut vs = kept_trunc.clone();
        vs.extend(set.iter().map(|e| globals.kernel(e)[..m].to_vec()));
        if Matrix::from_columns(m, &vs, field).expect("shapes agree").rank() == m {
            independent_side.push(set);
        } else {
            dependent_side.push((set, Subspace::from_vectors(m, &vs, field)));
        }
    }

    let transform = |v: &[Scalar], k: &[Scalar]| -> Vec<Scalar> {
        (0..m).map(|i| field.add(v[i], field.mul(v[m], k[i]))).collect()
    };

    let mut valid = Vec::new();
    'next_k: for k in enumerate_vectors(q, m) {
        // kept transformed message columns must keep rank rate-1
        let kept_k: Vec<Vec<Scalar>> = kept_full.iter().map(|b| transform(b, &k)).collect();
        if Matrix::from_columns(m, &kept_k, field).expect("shapes agree").rank() != rate.saturating_sub(1) {
            continue;
        }
        // dependent side: k itself must avoid the subspace sum
        for (_, span) in &dependent_side {
            if span.contains(&k) {
                continue 'next_k;
            }
        }
        // independent side: the transformed vectors must stay a basis
        for set in &independent_side {
            let mut vs = kept_k.clone();
            vs.extend(set.iter().map(|e| transform(globals.kernel(e), &k)));
            if Matrix::from_columns(m, &vs, field).expect("shapes agree").rank() != m {
                continue 'next_k;
            }
        }
        valid.push(k);
    }
    Ok(valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lnc::LinearNetworkCode;
    use crate::slnc::construct_q;
    use std::collections::BTreeMap as Map;
    use std::sync::Arc;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn diamond() -> Arc<Network> {
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

    fn diamond_secure() -> (SecureCode, WiretapCollection) {
        let net = diamond();
        let table: Map<String, Matrix> = [
            ("s".to_string(), Matrix::identity(2, f5())),
            ("a".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
            ("b".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
        ]
        .into();
        let code = LinearNetworkCode::load_kernels(Arc::clone(&net), 2, f5(), &table).unwrap();
        let coll = net.primary_subsets(1).unwrap();
        let q = construct_q(&code, 1, 1, &coll).unwrap();
        let sc = SecureCode::new(code, q, 1, 1, &coll).unwrap();
        (sc, coll)
    }

    #[test]
    fn all_wiretap_sets_counts() {
        let net = diamond();
        let scope = AllWiretapSets::new(&net, 2);
        // 1 + C(4,1) + C(4,2)
        assert_eq!(scope.len(), 1 + 4 + 6);
        assert_eq!(scope.sets[0], EdgeSet::empty());
    }

    #[test]
    fn secure_diamond_passes_secrecy_and_decoding() {
        let (sc, _) = diamond_secure();
        let scope = AllWiretapSets::new(sc.network(), 1);
        let report = exhaustive_secrecy(&sc, &scope, DEFAULT_BUDGET).unwrap();
        assert!(report.passed, "failing set: {:?}", report.failing_set);
        assert_eq!(report.failing_set, None);
        assert_eq!((report.message_count, report.key_count), (5, 5));
        assert!(exhaustive_decodability(&sc, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn leaky_code_is_caught_with_a_witness() {
        // identity Q: the message rides plainly on the first kernel
        let net = diamond();
        let table: Map<String, Matrix> = [
            ("s".to_string(), Matrix::identity(2, f5())),
            ("a".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
            ("b".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
        ]
        .into();
        let code = LinearNetworkCode::load_kernels(Arc::clone(&net), 2, f5(), &table).unwrap();
        let sc = SecureCode::new_unchecked(code, Matrix::identity(2, f5()), 1, 1);
        let scope = AllWiretapSets::new(sc.network(), 1);
        let report = exhaustive_secrecy(&sc, &scope, DEFAULT_BUDGET).unwrap();
        assert!(!report.passed);
        assert!(report.failing_set.is_some());
    }

    #[test]
    fn undecodable_code_fails_the_exhaustive_decoder() {
        let net = diamond();
        let table: Map<String, Matrix> = [
            ("s".to_string(), Matrix::zeros(2, 2, f5())),
            ("a".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
            ("b".to_string(), Matrix::from_rows(&[vec![1]], f5()).unwrap()),
        ]
        .into();
        let code = LinearNetworkCode::load_kernels(net, 2, f5(), &table).unwrap();
        assert!(!code.is_decodable());
        let sc = SecureCode::new_unchecked(code, Matrix::identity(2, f5()), 1, 1);
        assert!(!exhaustive_decodability(&sc, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn zero_rate_passes_vacuously() {
        let (sc, coll) = diamond_secure();
        let (zero, _) = crate::slnc::reduce_rate(&sc, &coll, &Default::default()).unwrap();
        let scope = AllWiretapSets::new(zero.network(), 1);
        assert!(exhaustive_secrecy(&zero, &scope, DEFAULT_BUDGET).unwrap().passed);
        assert!(exhaustive_decodability(&zero, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let (sc, _) = diamond_secure();
        let scope = AllWiretapSets::new(sc.network(), 1);
        let err = exhaustive_secrecy(&sc, &scope, 3).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { budget: 3, .. }));
        assert!(matches!(
            exhaustive_decodability(&sc, 1),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn valid_k_with_no_constraints_is_everything() {
        // rate 1 means no kept columns; empty collection means no sides
        let (sc, _) = diamond_secure();
        let empty = WiretapCollection { r: 1, sets: vec![] };
        let ks = valid_k_oracle(&sc, &empty, DEFAULT_BUDGET).unwrap();
        assert_eq!(ks.len(), 5);
    }

    #[test]
    fn reduction_k_is_oracle_valid() {
        let (sc, coll) = diamond_secure();
        let ks = valid_k_oracle(&sc, &coll, DEFAULT_BUDGET).unwrap();
        let (_, ctx) = crate::slnc::reduce_rate(&sc, &coll, &Default::default()).unwrap();
        assert!(ks.contains(&ctx.k));
    }
}
