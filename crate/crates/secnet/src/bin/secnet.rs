//! Command-line front end: channel parameters, rank-table validation, circle
//! network sweeps, experiment runs, the active-vs-passive leakage audit, the
//! universal hash check, and rate arithmetic.
//!
//! Reports go to stdout as `key=value` lines grouped under `[config N]`
//! headers (bit-exact under a fixed seed); timing notes go to stderr. Exit
//! codes: 0 when every check passes, 1 when any assertion or validation
//! fails, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use secnet::experiment::{
    expand_adversaries, load_network, run_experiment, run_mi_audit, AuditConfig, NetworkSource,
    ScenarioConfig,
};
use secnet::field::FieldSpec;
use secnet::hashing::{rates, universal2_check, HashSpec};
use secnet::net::channel_params;
use secnet::scenario::{circle_network, parse_expectations, table2_validate};

#[derive(Parser)]
#[command(name = "secnet", version, about = "secure network coding simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct NetworkArg {
    /// Network description file.
    #[arg(long)]
    network: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Derive Table-I channel parameters for a network and adversary.
    Params {
        #[command(flatten)]
        net: NetworkArg,
        /// Attacked intermediate nodes (adds to any adversary lines in the
        /// file).
        #[arg(long, value_delimiter = ',')]
        attack_nodes: Vec<String>,
    },
    /// Validate per-attacked-node (rank K_E, rank H_B) expectations.
    Table2 {
        #[command(flatten)]
        net: NetworkArg,
        /// Expectation file: lines `v(1) & v(3): 2, 4`.
        #[arg(long)]
        expect: PathBuf,
    },
    /// Build a circle QKD network and sweep attacked-node subsets.
    Circle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        alice: usize,
        #[arg(long)]
        bob: usize,
        /// Sweep every intermediate-node subset of size 0..=c.
        #[arg(long, default_value_t = 1)]
        attack_size: usize,
        /// Field literal.
        #[arg(long, default_value = "GF(2)")]
        field: String,
    },
    /// Run a scenario config (robust or secrecy-only trials).
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Exhaustive active-vs-passive leakage audit from a config.
    MiAudit {
        #[arg(long)]
        config: PathBuf,
    },
    /// Exhaustively verify the universal hash collision bound.
    HashCheck {
        #[arg(long)]
        kn: usize,
        #[arg(long)]
        kbar: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 1 << 20)]
        cap: u64,
    },
    /// Achievable-rate arithmetic from channel parameters.
    Rates {
        #[arg(long)]
        m0: usize,
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
    },
}

fn read_to_string(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Params { net, attack_nodes } => {
            let src = NetworkSource {
                file: Some(net.network),
                builtin: None,
                field: None,
                k: None,
                l: None,
                alice: None,
                bob: None,
            };
            let (network, file_adv, label) = load_network(&src).map_err(|e| e.to_string())?;
            let mut adv = file_adv;
            if !attack_nodes.is_empty() {
                adv = adv.union(
                    &network
                        .node_to_edge_named(&attack_nodes)
                        .map_err(|e| e.to_string())?,
                );
            }
            let tm = network.derive_transfer(&adv).map_err(|e| e.to_string())?;
            let p = channel_params(&tm);
            println!("[config 1]");
            println!("network={label}");
            println!("{}", format!("{p}").replace(' ', "\n"));
            let r = rates(p.m0, p.m1, p.m2);
            println!("rate_robust={}", r.robust_secure);
            println!("rate_secrecy_only={}", r.secrecy_only);
            Ok(true)
        }
        Command::Table2 { net, expect } => {
            let text = read_to_string(&net.network)?;
            let (network, _) =
                secnet::net::LinearNetwork::parse(&text).map_err(|e| e.to_string())?;
            let rows = parse_expectations(&read_to_string(&expect)?).map_err(|e| e.to_string())?;
            let report = table2_validate(&network, &rows).map_err(|e| e.to_string())?;
            println!("[config 1]");
            println!("network=file:{}", net.network.display());
            for v in &report.verdicts {
                println!(
                    "row={} expected={},{} computed={},{} pass={}",
                    v.row.nodes.join("&"),
                    v.row.rank_ke,
                    v.row.rank_hb,
                    v.computed_ke,
                    v.computed_hb,
                    v.pass
                );
            }
            println!("all_pass={}", report.all_pass());
            Ok(report.all_pass())
        }
        Command::Circle {
            k,
            l,
            alice,
            bob,
            attack_size,
            field,
        } => {
            let spec = FieldSpec::parse(&field).map_err(|e| e.to_string())?;
            let network = circle_network(&spec, k, l, alice, bob).map_err(|e| e.to_string())?;
            let sweep = secnet::experiment::AdversarySpec {
                nodes: None,
                wiretap: None,
                inject: None,
                all_subsets_max: Some(attack_size),
            };
            let placements =
                expand_adversaries(&network, &secnet::net::AdversaryPlacement::empty(), &sweep)
                    .map_err(|e| e.to_string())?;
            for (i, (adv, label)) in placements.iter().enumerate() {
                let tm = network.derive_transfer(adv).map_err(|e| e.to_string())?;
                let p = channel_params(&tm);
                let r = rates(p.m0, p.m1, p.m2);
                println!("[config {}]", i + 1);
                println!("network=circle(k={k},l={l},alice={alice},bob={bob})");
                println!("adversary={label}");
                println!("{}", format!("{p}").replace(' ', "\n"));
                println!("rate_robust={}", r.robust_secure);
                println!("rate_robust_achievable={}", r.robust_achievable);
                println!("rate_secrecy_only={}", r.secrecy_only);
                println!("rate_secrecy_achievable={}", r.secrecy_achievable);
            }
            Ok(true)
        }
        Command::Simulate { config } => {
            let cfg = ScenarioConfig::from_toml(&read_to_string(&config)?)
                .map_err(|e| e.to_string())?;
            let out = run_experiment(&cfg).map_err(|e| e.to_string())?;
            let rendered = out.render();
            print!("{rendered}");
            for r in &out.reports {
                eprintln!(
                    "# timing adversary={} wall_clock_ms={}",
                    r.label, r.wall_clock_ms
                );
            }
            if let Some(path) = &cfg.report {
                std::fs::write(path, &rendered)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            // every feasible robust config must respect the failure bound
            // within three binomial sigmas
            let ok = out.reports.iter().all(|r| {
                if !r.feasible || r.mode != "robust" {
                    return true;
                }
                match r.failure_bound {
                    Some(bound) => {
                        let p = bound.min(1.0);
                        let sigma = (p * (1.0 - p) / r.trials as f64).sqrt();
                        let rate = r.decode_failures as f64 / r.trials as f64;
                        rate <= p + 3.0 * sigma
                    }
                    None => true,
                }
            });
            Ok(ok)
        }
        Command::MiAudit { config } => {
            let cfg =
                AuditConfig::from_toml(&read_to_string(&config)?).map_err(|e| e.to_string())?;
            let out = run_mi_audit(&cfg).map_err(|e| e.to_string())?;
            print!("{}", out.render());
            Ok(out.all_match())
        }
        Command::HashCheck { kn, kbar, q, cap } => {
            let spec = FieldSpec::prime(q).map_err(|e| e.to_string())?;
            let h = HashSpec::new(&spec, kn, kbar).map_err(|e| e.to_string())?;
            let report = universal2_check(&h, cap).map_err(|e| e.to_string())?;
            println!("[config 1]");
            println!("k_n={kn}");
            println!("kbar_n={kbar}");
            println!("q={q}");
            println!("inputs_checked={}", report.inputs_checked);
            println!("seeds_checked={}", report.seeds_checked);
            println!(
                "max_collision={}/{}",
                report.max_collision.numer(),
                report.max_collision.denom()
            );
            println!("bound={}/{}", report.bound.numer(), report.bound.denom());
            println!("pass={}", report.pass());
            Ok(report.pass())
        }
        Command::Rates { m0, m1, m2 } => {
            let r = rates(m0, m1, m2);
            println!("[config 1]");
            println!("m0={m0}");
            println!("m1={m1}");
            println!("m2={m2}");
            println!("rate_robust={}", r.robust_secure);
            println!("rate_robust_achievable={}", r.robust_achievable);
            println!("rate_secrecy_only={}", r.secrecy_only);
            println!("rate_secrecy_achievable={}", r.secrecy_achievable);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
