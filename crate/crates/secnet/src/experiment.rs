//! Experiment configuration and the trial runner behind `simulate` and
//! `mi-audit`.
//!
//! A scenario names a network (file or builtin builder), one or more
//! adversary placements (explicit edges, attacked nodes, or every node
//! subset up to a size), and code parameters. For each placement the runner
//! derives the channel parameters, reports the achievable rates, and runs
//! trials:
//!
//! - `robust` mode lifts the channel into the extension field chosen by the
//!   block-length schedule, draws a fresh key per trial, attacks the
//!   transmission with the configured strategy, and measures the decode
//!   failure rate against the `n^(m0+1)/q'` bound;
//! - `secrecy-only` mode composes the channel-adapted inner code with the
//!   modified-Toeplitz hash at redundancy `m2 n` (plus an optional
//!   `ceil(sqrt(n))` margin), measures exact leakage with the rank oracle
//!   (the passive attack suffices for any strategy), optionally searches the
//!   seed space for exact zero leakage, and checks correctness under the
//!   passive attack.
//!
//! Reports are line-oriented `key=value` records under `[config N]` headers
//! and are byte-identical for identical configs and seeds; wall-clock
//! timings are kept out of the normative lines.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::attack::{simulate, FnStrategy, Passive, RandomStrategy, Slot, Strategy};
use crate::field::FieldSpec;
use crate::hashing::{
    ceil_sqrt, leakage_bound, rates, ChannelAdaptedInner, HashSpec, SecureCode, ToeplitzSeed,
};
use crate::leakage::{
    leakage_of_secure_code, linear_leakage, theorem1_audit, compose_per_use, ExactBits,
    LinearCodeMaps,
};
use crate::linalg::FqMatrix;
use crate::net::{channel_params, AdversaryPlacement, ChannelParams, LinearNetwork};
use crate::robust::{decode, encode, keygen, lift_block, RobustCodeParams};
use crate::scenario::{circle_network, fig3_reconstruction};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Net(#[from] crate::net::NetError),
    #[error(transparent)]
    Scenario(#[from] crate::scenario::ScenarioError),
    #[error(transparent)]
    Robust(#[from] crate::robust::RobustError),
    #[error(transparent)]
    Hash(#[from] crate::hashing::HashError),
    #[error(transparent)]
    Leakage(#[from] crate::leakage::LeakageError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSource {
    pub file: Option<PathBuf>,
    pub builtin: Option<String>,
    pub field: Option<String>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub alice: Option<usize>,
    pub bob: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AdversarySpec {
    pub nodes: Option<Vec<String>>,
    /// 1-based edge indices.
    pub wiretap: Option<Vec<usize>>,
    /// 1-based edge indices.
    pub inject: Option<Vec<usize>>,
    /// Sweep every intermediate-node subset of size 0..=c.
    pub all_subsets_max: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    /// "robust" or "secrecy-only".
    pub mode: String,
    pub n: usize,
    /// Extension degree override for robust mode (default: the block
    /// schedule's t_n).
    pub t: Option<usize>,
    /// "random" (default), "passive", or "worst-case".
    pub strategy: Option<String>,
    /// Secrecy-only: search seeds for exact zero leakage (default true).
    pub seed_search: Option<bool>,
    /// Secrecy-only: include the ceil(sqrt(n)) hash margin (default false).
    pub sqrt_margin: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub trials: usize,
    pub report: Option<PathBuf>,
    pub network: NetworkSource,
    #[serde(default)]
    pub adversary: AdversarySpec,
    pub code: CodeConfig,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<ScenarioConfig, ExperimentError> {
        let cfg: ScenarioConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::Config("trials must be >= 1".into()));
        }
        match (&self.network.file, &self.network.builtin) {
            (Some(_), Some(_)) | (None, None) => Err(ExperimentError::Config(
                "network needs exactly one of `file` or `builtin`".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Resolves a network source to a network plus any adversary carried by the
/// file, and a printable description.
pub fn load_network(
    src: &NetworkSource,
) -> Result<(LinearNetwork, AdversaryPlacement, String), ExperimentError> {
    if let Some(path) = &src.file {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::Io {
            path: path.clone(),
            source: e,
        })?;
        let (net, adv) = LinearNetwork::parse(&text)?;
        return Ok((net, adv, format!("file:{}", path.display())));
    }
    let builtin = src.builtin.as_deref().unwrap_or_default();
    match builtin {
        "circle" => {
            let spec = FieldSpec::parse(src.field.as_deref().unwrap_or("GF(2)"))?;
            let (k, l) = (
                src.k
                    .ok_or_else(|| ExperimentError::Config("circle needs k".into()))?,
                src.l
                    .ok_or_else(|| ExperimentError::Config("circle needs l".into()))?,
            );
            let alice = src.alice.unwrap_or(1);
            let bob = src
                .bob
                .ok_or_else(|| ExperimentError::Config("circle needs bob".into()))?;
            let net = circle_network(&spec, k, l, alice, bob)?;
            Ok((
                net,
                AdversaryPlacement::empty(),
                format!("circle(k={k},l={l},alice={alice},bob={bob})"),
            ))
        }
        "fig3" => {
            let (net, _) = fig3_reconstruction();
            Ok((net, AdversaryPlacement::empty(), "fig3".into()))
        }
        other => Err(ExperimentError::Config(format!(
            "unknown builtin network `{other}`"
        ))),
    }
}

fn subsets_up_to(items: &[usize], c: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 1..=c.min(items.len()) {
        let mut next = Vec::new();
        for combo in &frontier {
            let start = combo.last().map_or(0, |&i| i + 1);
            for i in start..items.len() {
                let mut grown = combo.clone();
                grown.push(i);
                next.push(grown);
            }
        }
        out.extend(
            next.iter()
                .map(|ix| ix.iter().map(|&i| items[i]).collect::<Vec<_>>()),
        );
        frontier = next;
    }
    out
}

/// Expands an adversary spec into the list of placements to run, each with a
/// description.
pub fn expand_adversaries(
    net: &LinearNetwork,
    file_adv: &AdversaryPlacement,
    spec: &AdversarySpec,
) -> Result<Vec<(AdversaryPlacement, String)>, ExperimentError> {
    if let Some(c) = spec.all_subsets_max {
        let inter = net.intermediate_nodes();
        let mut out = Vec::new();
        for subset in subsets_up_to(&inter, c) {
            let names: Vec<String> = subset
                .iter()
                .map(|&i| net.node_names()[i].clone())
                .collect();
            let adv = net.node_to_edge(&subset)?;
            let label = if names.is_empty() {
                "none".to_string()
            } else {
                format!("nodes:{}", names.join("&"))
            };
            out.push((adv, label));
        }
        return Ok(out);
    }
    let mut adv = file_adv.clone();
    let mut parts = Vec::new();
    if !file_adv.is_empty() {
        parts.push("file".to_string());
    }
    if let Some(nodes) = &spec.nodes {
        adv = adv.union(&net.node_to_edge_named(nodes)?);
        parts.push(format!("nodes:{}", nodes.join("&")));
    }
    let to_zero_based = |v: &Vec<usize>| -> Result<Vec<usize>, ExperimentError> {
        v.iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| ExperimentError::Config("edge indices are 1-based".into()))
            })
            .collect()
    };
    if let Some(w) = &spec.wiretap {
        adv = adv.union(&AdversaryPlacement::new(to_zero_based(w)?, vec![]));
        parts.push(format!(
            "wiretap:{}",
            w.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        ));
    }
    if let Some(a) = &spec.inject {
        adv = adv.union(&AdversaryPlacement::new(vec![], to_zero_based(a)?));
        parts.push(format!(
            "inject:{}",
            a.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        ));
    }
    let label = if parts.is_empty() {
        "none".to_string()
    } else {
        parts.join(";")
    };
    Ok(vec![(adv, label)])
}

/// Everything measured for one adversary configuration.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub label: String,
    pub params: ChannelParams,
    pub rates: crate::hashing::Rates,
    pub mode: String,
    /// None when the mode's rate hypothesis fails.
    pub feasible: bool,
    pub infeasible_reason: Option<String>,
    pub qprime: Option<u64>,
    pub trials: usize,
    pub decode_failures: usize,
    pub success_rate: f64,
    pub ci95: (f64, f64),
    pub failure_bound: Option<f64>,
    pub leakage: Option<ExactBits>,
    pub leakage_bound_value: Option<f64>,
    pub seed_search_tried: usize,
    pub zero_leakage_seed_found: bool,
    pub qkd_keys_per_transmission: usize,
    pub wall_clock_ms: u128,
}

fn wilson_ci(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let p = successes as f64 / n as f64;
    let half = 1.96 * (p * (1.0 - p) / n as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

fn make_strategy(kind: &str, seed: u64, spec: &FieldSpec) -> Box<dyn Strategy + Send> {
    match kind {
        "passive" => Box::new(Passive),
        "worst-case" => {
            let q = spec.order();
            let spec = spec.clone();
            Box::new(FnStrategy(move |slot: Slot, prefix: &[u64]| {
                // feed observed symbols back and force distinct nonzero rows
                let base = prefix.last().copied().unwrap_or(0);
                let salt = 1 + (slot.transmission as u64 * 31 + slot.position as u64 * 7) % (q - 1).max(1);
                spec.add(base, salt % q)
            }))
        }
        _ => Box::new(RandomStrategy::new(seed, spec)),
    }
}

fn run_robust_config(
    cfg: &ScenarioConfig,
    net: &LinearNetwork,
    adv: &AdversaryPlacement,
    label: String,
) -> Result<TrialReport, ExperimentError> {
    let start = Instant::now();
    let tm = net.derive_transfer(adv)?;
    let params = channel_params(&tm);
    let r = rates(params.m0, params.m1, params.m2);
    let base = net.spec().clone();
    let n = cfg.code.n;
    let mut report = TrialReport {
        label,
        params,
        rates: r,
        mode: "robust".into(),
        feasible: r.robust_achievable && params.m0 > params.m1,
        infeasible_reason: None,
        qprime: None,
        trials: 0,
        decode_failures: 0,
        success_rate: 0.0,
        ci95: (0.0, 1.0),
        failure_bound: None,
        leakage: None,
        leakage_bound_value: None,
        seed_search_tried: 0,
        zero_leakage_seed_found: false,
        qkd_keys_per_transmission: net.edge_count(),
        wall_clock_ms: 0,
    };
    if !report.feasible {
        report.infeasible_reason = Some(format!(
            "robust rate needs m1 + m2 < m0, got m0={} m1={} m2={}",
            params.m0, params.m1, params.m2
        ));
        report.wall_clock_ms = start.elapsed().as_millis();
        return Ok(report);
    }
    let lifted = match cfg.code.t {
        Some(t) => FieldSpec::extension(&base, t, None)?,
        None => lift_block(&base, n.max(2), params.m0)?.spec,
    };
    let code_params = RobustCodeParams::new(&lifted, n, params.m0, params.m1, params.m3, params.m4)?;
    let tm_lifted = crate::net::TransferMatrices {
        k_b: tm.k_b.lift(&lifted)?,
        k_e: tm.k_e.lift(&lifted)?,
        h_b: tm.h_b.lift(&lifted)?,
        h_e: tm.h_e.lift(&lifted)?,
    };
    let strategy_kind = cfg.code.strategy.as_deref().unwrap_or("random").to_string();
    let failures: usize = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial as u64 + 1);
            let inst = keygen(&code_params, &mut rng);
            let message = FqMatrix::random_uniform(
                &lifted,
                code_params.message_rows(),
                n,
                &mut rng,
            );
            let (x, side) = encode(&message, &inst, &code_params).expect("dims fixed");
            let mut strategy = make_strategy(&strategy_kind, cfg.seed ^ trial as u64, &lifted);
            let out = simulate(&tm_lifted, adv, &x, strategy.as_mut()).expect("dims fixed");
            match decode(&out.y_b, &side, &code_params) {
                Ok(m) if m == message => 0,
                _ => 1,
            }
        })
        .sum();
    report.qprime = Some(lifted.order());
    report.trials = cfg.trials;
    report.decode_failures = failures;
    report.success_rate = (cfg.trials - failures) as f64 / cfg.trials as f64;
    report.ci95 = wilson_ci(cfg.trials - failures, cfg.trials);
    report.failure_bound = Some(code_params.f2_failure_bound());
    // exact leakage of the deterministic (stream-0) instance under the
    // passive attack; active attacks leak the same
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let inst = keygen(&code_params, &mut rng);
    let enc = inst.u0.mul(&code_params.embedding())?;
    let msg_map = FqMatrix::from_fn(
        &lifted,
        params.m3 * n,
        code_params.message_rows() * n,
        |i, j| {
            let (ui, r) = (i / params.m3, i % params.m3);
            let (uj, c) = (j / code_params.message_rows(), j % code_params.message_rows());
            if ui == uj {
                enc.get(r, c)
            } else {
                0
            }
        },
    );
    let a = compose_per_use(&tm_lifted.k_e, &msg_map, params.m3, n);
    let b = FqMatrix::zeros(&lifted, a.rows(), 0);
    report.leakage = Some(linear_leakage(&a, &b)?);
    report.wall_clock_ms = start.elapsed().as_millis();
    Ok(report)
}

fn run_secrecy_config(
    cfg: &ScenarioConfig,
    net: &LinearNetwork,
    adv: &AdversaryPlacement,
    label: String,
) -> Result<TrialReport, ExperimentError> {
    let start = Instant::now();
    let tm = net.derive_transfer(adv)?;
    let params = channel_params(&tm);
    let r = rates(params.m0, params.m1, params.m2);
    let spec = net.spec().clone();
    let n = cfg.code.n;
    let sqrt_margin = cfg.code.sqrt_margin.unwrap_or(false);
    let margin = if sqrt_margin { ceil_sqrt(n) } else { 0 };
    let k_n = params.m0 * n;
    let cut = params.m2 * n + margin;
    let mut report = TrialReport {
        label,
        params,
        rates: r,
        mode: "secrecy-only".into(),
        feasible: r.secrecy_achievable && cut < k_n,
        infeasible_reason: None,
        qprime: None,
        trials: 0,
        decode_failures: 0,
        success_rate: 0.0,
        ci95: (0.0, 1.0),
        failure_bound: None,
        leakage: None,
        leakage_bound_value: None,
        seed_search_tried: 0,
        zero_leakage_seed_found: false,
        qkd_keys_per_transmission: net.edge_count(),
        wall_clock_ms: 0,
    };
    if !report.feasible {
        report.infeasible_reason = Some(format!(
            "secrecy-only rate needs m2 < m0 (and a positive hash output), got m0={} m2={}",
            params.m0, params.m2
        ));
        report.wall_clock_ms = start.elapsed().as_millis();
        return Ok(report);
    }
    let hash = HashSpec::new(&spec, k_n, k_n - cut)?;
    let inner = ChannelAdaptedInner::new(&tm.k_b, n)?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let mut code = SecureCode::new(Box::new(inner), hash.clone(), ToeplitzSeed::random(&hash, &mut rng))?;
    // seed search for exact zero leakage
    let mut tried = 1usize;
    let mut leak = leakage_of_secure_code(&code, &tm.k_e)?;
    if cfg.code.seed_search.unwrap_or(true) {
        let budget = 512usize;
        while !leak.is_zero() && tried < budget {
            code.with_seed(ToeplitzSeed::random(&hash, &mut rng))?;
            leak = leakage_of_secure_code(&code, &tm.k_e)?;
            tried += 1;
        }
    }
    report.seed_search_tried = tried;
    report.zero_leakage_seed_found = leak.is_zero();
    report.leakage = Some(leak);
    report.leakage_bound_value = Some(
        leakage_bound(1.0, hash.output_len(), k_n, n, params.m2, spec.order(), Some((params.m6, params.m3)))?
            .bound,
    );
    // correctness under the passive attack
    let failures: usize = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial as u64 + 1);
            let msg: Vec<u64> = (0..code.hash_spec().output_len())
                .map(|_| spec.random_code(&mut rng))
                .collect();
            let scr: Vec<u64> = (0..code.hash_spec().redundancy())
                .map(|_| spec.random_code(&mut rng))
                .collect();
            let (x, side) = code.encode(&msg, &scr).expect("dims fixed");
            let mut passive = Passive;
            let out = simulate(&tm, adv, &x, &mut passive).expect("dims fixed");
            match code.decode(&out.y_b, &side) {
                Ok(m) if m == msg => 0,
                _ => 1,
            }
        })
        .sum();
    report.trials = cfg.trials;
    report.decode_failures = failures;
    report.success_rate = (cfg.trials - failures) as f64 / cfg.trials as f64;
    report.ci95 = wilson_ci(cfg.trials - failures, cfg.trials);
    report.wall_clock_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Full experiment outcome: one report per adversary configuration.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub network_label: String,
    pub seed: u64,
    pub reports: Vec<TrialReport>,
}

pub fn run_experiment(cfg: &ScenarioConfig) -> Result<ExperimentOutcome, ExperimentError> {
    cfg.validate()?;
    let (net, file_adv, network_label) = load_network(&cfg.network)?;
    let placements = expand_adversaries(&net, &file_adv, &cfg.adversary)?;
    let mut reports = Vec::with_capacity(placements.len());
    for (adv, label) in placements {
        let report = match cfg.code.mode.as_str() {
            "robust" => run_robust_config(cfg, &net, &adv, label)?,
            "secrecy-only" => run_secrecy_config(cfg, &net, &adv, label)?,
            other => {
                return Err(ExperimentError::Config(format!(
                    "unknown mode `{other}` (use robust or secrecy-only)"
                )))
            }
        };
        reports.push(report);
    }
    Ok(ExperimentOutcome {
        network_label,
        seed: cfg.seed,
        reports,
    })
}

impl ExperimentOutcome {
    /// The normative line format: deterministic for a fixed config and seed.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.reports.iter().enumerate() {
            let _ = writeln!(out, "[config {}]", i + 1);
            let _ = writeln!(out, "network={}", self.network_label);
            let _ = writeln!(out, "adversary={}", r.label);
            let _ = writeln!(out, "seed={}", self.seed);
            let p = r.params;
            for (k, v) in [
                ("m0", p.m0),
                ("m1", p.m1),
                ("m2", p.m2),
                ("m3", p.m3),
                ("m4", p.m4),
                ("m5", p.m5),
                ("m6", p.m6),
            ] {
                let _ = writeln!(out, "{k}={v}");
            }
            let _ = writeln!(out, "rate_robust={}", r.rates.robust_secure);
            let _ = writeln!(out, "rate_robust_achievable={}", r.rates.robust_achievable);
            let _ = writeln!(out, "rate_secrecy_only={}", r.rates.secrecy_only);
            let _ = writeln!(
                out,
                "rate_secrecy_achievable={}",
                r.rates.secrecy_achievable
            );
            let _ = writeln!(out, "mode={}", r.mode);
            let _ = writeln!(out, "qkd_keys_per_transmission={}", r.qkd_keys_per_transmission);
            if !r.feasible {
                let _ = writeln!(
                    out,
                    "status=infeasible reason={}",
                    r.infeasible_reason.as_deref().unwrap_or("unknown")
                );
                continue;
            }
            if let Some(q) = r.qprime {
                let _ = writeln!(out, "qprime={q}");
            }
            let _ = writeln!(out, "trials={}", r.trials);
            let _ = writeln!(out, "decode_failures={}", r.decode_failures);
            let _ = writeln!(out, "decode_success_rate={:.6}", r.success_rate);
            let _ = writeln!(
                out,
                "decode_success_ci95={:.6},{:.6}",
                r.ci95.0, r.ci95.1
            );
            if let Some(b) = r.failure_bound {
                let _ = writeln!(out, "failure_bound={b:.6e}");
            }
            if let Some(l) = &r.leakage {
                let _ = writeln!(out, "leakage_bits={:.6}", l.bits());
                if let Some(units) = l.log_q_units(2) {
                    let _ = writeln!(
                        out,
                        "leakage_log2_units={}/{}",
                        units.numer(),
                        units.denom()
                    );
                }
            }
            if let Some(b) = r.leakage_bound_value {
                let _ = writeln!(out, "leakage_bound={b:.6e}");
            }
            if r.mode == "secrecy-only" {
                let _ = writeln!(out, "seed_search_tried={}", r.seed_search_tried);
                let _ = writeln!(out, "zero_leakage_seed_found={}", r.zero_leakage_seed_found);
            }
            let _ = writeln!(out, "status=ok");
        }
        out
    }
}

// ---- mutual-information audit configuration ------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditSection {
    pub message_symbols: usize,
    pub scramble_symbols: usize,
    /// Strategy-space and enumeration cap (default 2^20).
    pub cap: Option<u64>,
    /// Channel uses (default 1).
    pub n: Option<usize>,
    /// Encoder literal, `m3*n x (message+scramble)` columns split
    /// message-first; identity when omitted (requires m3*n = a+b).
    pub encoder: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub network: NetworkSource,
    #[serde(default)]
    pub adversary: AdversarySpec,
    pub audit: AuditSection,
}

impl AuditConfig {
    pub fn from_toml(text: &str) -> Result<AuditConfig, ExperimentError> {
        Ok(toml::from_str(text)?)
    }
}

#[derive(Debug)]
pub struct AuditOutcome {
    pub network_label: String,
    pub reports: Vec<(String, crate::leakage::AuditReport)>,
}

pub fn run_mi_audit(cfg: &AuditConfig) -> Result<AuditOutcome, ExperimentError> {
    let (net, file_adv, network_label) = load_network(&cfg.network)?;
    let placements = expand_adversaries(&net, &file_adv, &cfg.adversary)?;
    let n = cfg.audit.n.unwrap_or(1);
    let cap = cfg.audit.cap.unwrap_or(1 << 20);
    let spec = net.spec().clone();
    let a = cfg.audit.message_symbols;
    let b = cfg.audit.scramble_symbols;
    let m3 = net.input_dim();
    let enc = match &cfg.audit.encoder {
        Some(lit) => FqMatrix::parse(&spec, lit)?,
        None => {
            if m3 * n != a + b {
                return Err(ExperimentError::Config(format!(
                    "identity encoder needs m3*n = message+scramble symbols ({} != {})",
                    m3 * n,
                    a + b
                )));
            }
            FqMatrix::identity(&spec, a + b)
        }
    };
    if enc.rows() != m3 * n || enc.cols() != a + b {
        return Err(ExperimentError::Config(format!(
            "encoder must be {}x{}, got {}x{}",
            m3 * n,
            a + b,
            enc.rows(),
            enc.cols()
        )));
    }
    let msg_map = enc.select_cols(&(0..a).collect::<Vec<_>>());
    let scr_map = enc.select_cols(&(a..a + b).collect::<Vec<_>>());
    let maps = LinearCodeMaps::new(msg_map, scr_map, m3, n)?;
    let mut reports = Vec::new();
    for (adv, label) in placements {
        let tm = net.derive_transfer(&adv)?;
        let report = theorem1_audit(&maps, &tm, &adv, cap)?;
        reports.push((label, report));
    }
    Ok(AuditOutcome {
        network_label,
        reports,
    })
}

impl AuditOutcome {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (label, r)) in self.reports.iter().enumerate() {
            let _ = writeln!(out, "[config {}]", i + 1);
            let _ = writeln!(out, "network={}", self.network_label);
            let _ = writeln!(out, "adversary={label}");
            let _ = writeln!(out, "passive_leakage_bits={:.6}", r.passive.bits());
            let _ = writeln!(out, "strategy_count={}", r.strategy_count);
            for rec in &r.records {
                let units = rec
                    .log_q_units
                    .map(|(n, d)| format!("{n}/{d}"))
                    .unwrap_or_else(|| "none".into());
                let _ = writeln!(
                    out,
                    "strategy={} leakage_bits={:.6} leakage_log_q_units={} pass={}",
                    rec.id, rec.bits, units, rec.matches_passive
                );
            }
            let _ = writeln!(out, "all_match={}", r.all_match);
        }
        out
    }

    pub fn all_match(&self) -> bool {
        self.reports.iter().all(|(_, r)| r.all_match)
    }
}
