//! Subcommand implementations.
//!
//! Exit-code discipline: 0 on success, 1 on parse/validation/verification
//! failures, 2 on capability failures (field too small, security level or
//! dimension beyond the network capacity).

use std::fs;
use std::path::Path;
use std::sync::Arc;

use snc::{
    build_family, check_security_witness, construct_q, exhaustive_decodability,
    exhaustive_secrecy, reduce_rate, AllWiretapSets, BoundMode, EdgeSet, FamilyOptions, FieldSpec,
    LinearNetworkCode, LncError, Network, NetworkError, ReduceOptions, Scalar, SecureCode,
    SlncError, DEFAULT_BUDGET,
};

use crate::formats;

pub struct Failure {
    pub exit_code: i32,
    pub message: String,
}

impl Failure {
    fn failed(message: impl Into<String>) -> Self {
        Failure { exit_code: 1, message: message.into() }
    }

    fn capability(message: impl Into<String>) -> Self {
        Failure { exit_code: 2, message: message.into() }
    }
}

impl From<formats::ParseError> for Failure {
    fn from(e: formats::ParseError) -> Self {
        Failure::failed(e.to_string())
    }
}

impl From<NetworkError> for Failure {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::SecurityLevelTooHigh { .. } => Failure::capability(e.to_string()),
            _ => Failure::failed(e.to_string()),
        }
    }
}

impl From<LncError> for Failure {
    fn from(e: LncError) -> Self {
        match e {
            LncError::DimensionTooLarge { .. } => Failure::capability(e.to_string()),
            _ => Failure::failed(e.to_string()),
        }
    }
}

impl From<SlncError> for Failure {
    fn from(e: SlncError) -> Self {
        match e {
            SlncError::FieldTooSmall { .. } | SlncError::DimensionExceedsCapacity { .. } => {
                Failure::capability(e.to_string())
            }
            SlncError::Network(inner) => inner.into(),
            SlncError::Lnc(inner) => inner.into(),
            other => Failure::failed(other.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::failed(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::failed(format!("cannot write {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<(Arc<Network>, FieldSpec), Failure> {
    let text = read_file(path)?;
    Ok(formats::parse_network(&text)?)
}

fn load_code(
    path: &Path,
    net: &Arc<Network>,
    field: FieldSpec,
) -> Result<LinearNetworkCode, Failure> {
    let text = read_file(path)?;
    Ok(formats::parse_kernels(&text, net, field)?)
}

fn set_ids(net: &Network, set: &EdgeSet) -> String {
    let ids: Vec<&str> = set.iter().map(|e| net.edge(e).id.as_str()).collect();
    format!("{{{}}}", ids.join(","))
}

fn oracle_budget() -> u64 {
    std::env::var("SNC_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

pub fn cmd_mincut(net_path: &Path, set: &[String]) -> Result<(), Failure> {
    let (net, _) = load_network(net_path)?;
    let ids: Vec<&str> = set.iter().map(|s| s.as_str()).collect();
    let a = net.edge_set(&ids)?;
    let (capacity, cut) = net.min_cut_to_edge_set(&a)?;
    let primary = net.primary_min_cut(&a)?;
    println!("edge set: {}", set_ids(&net, &a));
    println!("min-cut capacity: {capacity}");
    println!("minimum cut: {}", set_ids(&net, &cut));
    println!("regular: {}", if capacity == a.len() as u64 { "yes" } else { "no" });
    println!("primary minimum cut: {}", set_ids(&net, &primary));
    println!("primary: {}", if primary == a { "yes" } else { "no" });
    Ok(())
}

pub fn cmd_primary_sets(net_path: &Path, security: usize) -> Result<(), Failure> {
    let (net, _) = load_network(net_path)?;
    let coll = net.primary_subsets(security)?;
    println!("C_min: {}", net.c_min());
    println!("|A_{}| = {}", security, coll.len());
    for set in coll.iter() {
        println!("{}", set_ids(&net, set));
    }
    Ok(())
}

pub fn cmd_construct(
    net_path: &Path,
    dimension: Option<usize>,
    security: Option<usize>,
    seed: u64,
    kernels_out: Option<&Path>,
    q_out: Option<&Path>,
) -> Result<(), Failure> {
    let (net, field) = load_network(net_path)?;
    let n = dimension.unwrap_or(net.c_min() as usize);
    let code = LinearNetworkCode::construct_decodable(Arc::clone(&net), n, field, seed)?;
    println!("constructed a decodable {n}-dimensional code over F_{}", field.order());
    let kernel_text = formats::emit_kernels(&code);
    match kernels_out {
        Some(path) => {
            write_file(path, &kernel_text)?;
            println!("wrote kernels to {}", path.display());
        }
        None => print!("{kernel_text}"),
    }
    if let Some(r) = security {
        if r > n {
            return Err(Failure::failed(format!("security level {r} exceeds the dimension {n}")));
        }
        let coll = net.primary_subsets(r)?;
        let q = construct_q(&code, n - r, r, &coll)?;
        println!("pre-coding matrix for rate {} and security level {r}:", n - r);
        let q_text = formats::emit_matrix(&q);
        match q_out {
            Some(path) => {
                write_file(path, &q_text)?;
                println!("wrote pre-coding matrix to {}", path.display());
            }
            None => print!("{q_text}"),
        }
    }
    Ok(())
}

fn parse_pin_choices(tokens: &[String], field: FieldSpec) -> Result<ReduceOptions, Failure> {
    let mut opts = ReduceOptions::default();
    for token in tokens {
        let Some((key, value)) = token.split_once('=') else {
            return Err(Failure::failed(format!("pin `{token}` is not of the form key=value")));
        };
        match key {
            "h" => {
                let parsed: Result<Vec<Scalar>, _> =
                    value.split(',').map(|v| v.trim().parse::<Scalar>()).collect();
                opts.pin_h = Some(parsed.map_err(|_| {
                    Failure::failed(format!("pin h expects comma-separated scalars, got `{value}`"))
                })?);
            }
            "theta" => {
                opts.pin_theta = Some(value.trim().parse::<Scalar>().map_err(|_| {
                    Failure::failed(format!("pin theta expects a scalar, got `{value}`"))
                })?);
            }
            other => return Err(Failure::failed(format!("unknown pin `{other}` (use h= or theta=)"))),
        }
    }
    let _ = field;
    Ok(opts)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_reduce(
    net_path: &Path,
    kernels: &Path,
    q_path: &Path,
    rate: usize,
    security: usize,
    pin_choices: &[String],
    out_dir: Option<&Path>,
) -> Result<(), Failure> {
    let (net, field) = load_network(net_path)?;
    let code = load_code(kernels, &net, field)?;
    let q = formats::parse_matrix(&read_file(q_path)?, field)?;
    let coll = net.primary_subsets(security)?;
    let sc = SecureCode::new(code, q, rate, security, &coll)?;
    let opts = parse_pin_choices(pin_choices, field)?;
    let (next, ctx) = reduce_rate(&sc, &coll, &opts)?;

    println!("kept message columns: {:?}", ctx.kept_columns.iter().map(|c| c + 1).collect::<Vec<_>>());
    println!("displaced message column: {}", ctx.dropped_column + 1);
    let prime: Vec<String> = ctx.a_prime.iter().map(|s| set_ids(&net, s)).collect();
    let double: Vec<String> = ctx.a_double_prime.iter().map(|s| set_ids(&net, s)).collect();
    println!("dependent side: {}", prime.join(" "));
    println!("independent side: {}", double.join(" "));
    println!("h = {:?}", ctx.h);
    for (set, theta_a) in &ctx.theta_table {
        println!("theta_{} = {theta_a}", set_ids(&net, set));
    }
    println!("theta = {}", ctx.theta);
    println!("k = {:?}", ctx.k);
    println!("reduced to rate {} (dimension {})", next.rate(), next.dimension());

    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::failed(format!("cannot create {}: {e}", dir.display())))?;
        let kern_path = dir.join(format!("rate-{}.kern", next.rate()));
        write_file(&kern_path, &formats::emit_kernels(next.code()))?;
        let q_out = dir.join(format!("rate-{}.Q", next.rate()));
        write_file(&q_out, &formats::emit_matrix(next.pre_matrix()))?;
        println!("wrote {} and {}", kern_path.display(), q_out.display());
    } else {
        print!("{}", formats::emit_kernels(next.code()));
        print!("{}", formats::emit_matrix(next.pre_matrix()));
    }
    Ok(())
}

pub fn cmd_family(
    net_path: &Path,
    security: usize,
    seed: u64,
    kernels: Option<&Path>,
    best_effort: bool,
    out_dir: &Path,
) -> Result<(), Failure> {
    let (net, field) = load_network(net_path)?;
    let base_code = match kernels {
        Some(path) => Some(load_code(path, &net, field)?),
        None => None,
    };
    let coll = net.primary_subsets(security)?;
    let options = FamilyOptions {
        seed,
        bound_mode: if best_effort { BoundMode::BestEffort } else { BoundMode::Strict },
        base_code,
    };
    let family = build_family(Arc::clone(&net), security, field, &options)?;

    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::failed(format!("cannot create {}: {e}", out_dir.display())))?;

    let bound = (net.sink_count() as u64).max(coll.len() as u64);
    let mut report = String::new();
    report.push_str(&format!(
        "network: {} nodes, {} edges, C_min {}\n",
        net.node_count(),
        net.edge_count(),
        net.c_min()
    ));
    report.push_str(&format!("field order: {}\n", field.order()));
    report.push_str(&format!("security level: {}\n", security));
    report.push_str(&format!("|A_{}| = {}\n", security, coll.len()));
    report.push_str(&format!(
        "field-size bound q > max(|T|, |A_r|) = {bound}: {}\n",
        if field.order() > bound {
            "satisfied"
        } else if best_effort {
            "violated (best-effort construction succeeded)"
        } else {
            "violated"
        }
    ));

    let mut all_ok = true;
    for member in &family.members {
        let secure =
            check_security_witness(member.code(), member.pre_matrix(), member.rate(), security, &coll)?
                .is_none();
        let decodable = member.code().is_decodable();
        all_ok &= secure && decodable;
        report.push_str(&format!(
            "rate {}: dimension {}, security {}, decodability {}\n",
            member.rate(),
            member.dimension(),
            if secure { "PASS" } else { "FAIL" },
            if decodable { "PASS" } else { "FAIL" },
        ));
        let kern_path = out_dir.join(format!("rate-{}.kern", member.rate()));
        write_file(&kern_path, &formats::emit_kernels(member.code()))?;
        let q_path = out_dir.join(format!("rate-{}.Q", member.rate()));
        write_file(&q_path, &formats::emit_matrix(member.pre_matrix()))?;
    }
    let preserved = family
        .members
        .windows(2)
        .all(|w| w[0].code().shares_intermediate_kernels(w[1].code()));
    all_ok &= preserved;
    report.push_str(&format!(
        "local encoding preserved across all members: {}\n",
        if preserved { "yes" } else { "no" }
    ));
    report.push_str(&format!("RESULT: {}\n", if all_ok { "VERIFIED" } else { "FAILED" }));
    write_file(&out_dir.join("report.txt"), &report)?;
    print!("{report}");
    println!("wrote family files to {}", out_dir.display());
    if all_ok {
        Ok(())
    } else {
        Err(Failure::failed("family verification failed"))
    }
}

pub fn cmd_verify(
    net_path: &Path,
    kernels: &Path,
    q_path: &Path,
    rate: usize,
    security: usize,
    oracle: bool,
) -> Result<(), Failure> {
    let (net, field) = load_network(net_path)?;
    let code = load_code(kernels, &net, field)?;
    let n = code.dimension();
    if rate + security != n {
        println!("FAIL dimension: rate {rate} + security {security} != code dimension {n}");
        println!("RESULT: FAIL");
        return Err(Failure::failed(format!(
            "dimension {n} cannot afford rate {rate} with security level {security}"
        )));
    }
    let q = formats::parse_matrix(&read_file(q_path)?, field)?;
    if q.rows() != n || q.cols() != n || q.inverse().is_err() {
        println!("FAIL pre-coding matrix: must be invertible {n}x{n}");
        println!("RESULT: FAIL");
        return Err(Failure::failed("pre-coding matrix is not invertible"));
    }
    let coll = net.primary_subsets(security)?;

    let mut all_ok = true;
    match check_security_witness(&code, &q, rate, security, &coll)? {
        None => println!("PASS security condition on {} primary subsets", coll.len()),
        Some(set) => {
            all_ok = false;
            println!("FAIL security condition: wiretap set {} leaks", set_ids(&net, &set));
        }
    }
    if code.is_decodable() {
        println!("PASS decodability at every sink");
    } else {
        all_ok = false;
        println!("FAIL decodability");
    }

    if oracle {
        let budget = oracle_budget();
        let sc = SecureCode::new_unchecked(code, q, rate, security);
        let scope = AllWiretapSets::new(&net, security);
        match exhaustive_secrecy(&sc, &scope, budget) {
            Ok(report) if report.passed => {
                println!("PASS exhaustive secrecy over {} wiretap sets", scope.len())
            }
            Ok(report) => {
                all_ok = false;
                let set = report.failing_set.expect("failing set accompanies a failure");
                println!("FAIL exhaustive secrecy: wiretap set {} leaks", set_ids(&net, &set));
            }
            Err(e) => {
                all_ok = false;
                println!("FAIL exhaustive secrecy: {e}");
            }
        }
        match exhaustive_decodability(&sc, budget) {
            Ok(true) => println!("PASS exhaustive decodability"),
            Ok(false) => {
                all_ok = false;
                println!("FAIL exhaustive decodability: message collision found");
            }
            Err(e) => {
                all_ok = false;
                println!("FAIL exhaustive decodability: {e}");
            }
        }
    }
    println!("RESULT: {}", if all_ok { "PASS" } else { "FAIL" });
    if all_ok {
        Ok(())
    } else {
        Err(Failure { exit_code: 1, message: String::new() })
    }
}
