use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};

use manobench::campaign::{self, CampaignConfig, CampaignError, KpiReport, TargetConfig};
use manobench::descriptor::{builtin_vcpe, nsd_to_json, package_to_json};
use manobench::drivers::{collect_metrics, nbi_serve, DriverError, EndpointConfig, NbiClient, ServeConfig};

const EXIT_CONFIG: u8 = 2;
const EXIT_TARGET: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "manobench", version, about = "Lifecycle benchmarking for NFV MANO systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign and write report.json, plot/ and metrics/.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        repetitions: Option<u32>,
    },
    /// Compare two reports (a - b).
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the simulated target of a sim campaign config over HTTP.
    ServeSim {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        token: Option<String>,
    },
    /// Dump every live instance's metric series as CSV.
    CollectMetrics {
        #[arg(long)]
        endpoint: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        token: Option<String>,
    },
    /// Write built-in descriptor fixtures.
    Fixtures {
        #[command(subcommand)]
        fixture: Fixture,
    },
}

#[derive(Subcommand)]
enum Fixture {
    /// The five-component vCPE service plus a campaign config using it.
    Vcpe {
        #[arg(long)]
        out: PathBuf,
    },
}

struct Failure(u8, String);

impl From<CampaignError> for Failure {
    fn from(e: CampaignError) -> Self {
        let code = match &e {
            CampaignError::Config(_) | CampaignError::UnreadableReport(_) | CampaignError::SchemaVersionMismatch { .. } => {
                EXIT_CONFIG
            }
            CampaignError::Target(DriverError::Io(_)) | CampaignError::Io(_) => EXIT_IO,
            CampaignError::Target(_) | CampaignError::Kpi(_) => EXIT_TARGET,
        };
        Failure(code, e.to_string())
    }
}

impl From<DriverError> for Failure {
    fn from(e: DriverError) -> Self {
        let code = match e {
            DriverError::Io(_) | DriverError::Csv(_) => EXIT_IO,
            _ => EXIT_TARGET,
        };
        Failure(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(EXIT_IO, e.to_string())
    }
}

fn run(config: &Path, out: &Path, seed: Option<u64>, repetitions: Option<u32>) -> Result<(), Failure> {
    let mut cfg = CampaignConfig::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(r) = repetitions {
        cfg.repetitions = r;
    }
    let report = campaign::run(&cfg, Some(out))?;
    println!("{}", out.join("report.json").display());
    if report.incomplete {
        return Err(Failure(EXIT_TARGET, format!("campaign incomplete: {}", report.errors.join("; "))));
    }
    Ok(())
}

fn compare(a: &Path, b: &Path, out: &Path) -> Result<(), Failure> {
    let c = campaign::compare(&KpiReport::read(a)?, &KpiReport::read(b)?);
    for w in &c.warnings {
        log::warn!("{w}");
    }
    for p in c.write(out)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn serve_sim(config: &Path, host: &str, port: u16, token: Option<String>) -> Result<(), Failure> {
    let cfg = CampaignConfig::load(config)?;
    let TargetConfig::Sim { sim, .. } = &cfg.target else {
        return Err(Failure(EXIT_CONFIG, "serve-sim needs a config with a sim target".into()));
    };
    let orch = campaign::build_sim(sim, campaign::repetition_seed(cfg.seed, 0))?;
    let server = nbi_serve(
        orch,
        ServeConfig {
            bind: format!("{host}:{port}"),
            auth_token: token,
            ..ServeConfig::default()
        },
    )?;
    info!("serving simulated target at {}", server.url());
    println!("{}", server.url());
    server.join();
    Ok(())
}

fn collect(endpoint: &str, out: &Path, token: Option<String>) -> Result<(), Failure> {
    let mut client = NbiClient::new(EndpointConfig {
        base_url: endpoint.trim_end_matches('/').to_string(),
        auth_token: token,
        ..EndpointConfig::default()
    });
    let files = collect_metrics(&mut client, out)?;
    if files.is_empty() {
        log::warn!("target reports no live instances");
    }
    for p in files {
        println!("{}", p.display());
    }
    Ok(())
}

fn fixtures_vcpe(out: &Path) -> Result<(), Failure> {
    let (nsd, packages) = builtin_vcpe();
    let pkg_dir = out.join("packages");
    fs::create_dir_all(&pkg_dir)?;
    let mut pkg_paths = Vec::new();
    for p in &packages {
        let rel = format!("packages/{}.json", p.vnfd.name);
        fs::write(out.join(&rel), package_to_json(p) + "\n")?;
        pkg_paths.push(rel);
    }
    fs::write(out.join("nsd.json"), nsd_to_json(&nsd) + "\n")?;
    let campaign = serde_json::json!({
        "campaign_name": "vcpe",
        "target": {"kind": "sim"},
        "descriptors": {"packages": pkg_paths, "nsd": "nsd.json"},
        "actions": [{"scale_out": "vGMUX"}],
        "repetitions": 1,
        "seed": 42,
        "aggregate_modes": ["Sum", "Makespan", "Mean", "P95"],
    });
    let text = serde_json::to_string_pretty(&campaign).expect("json values serialize");
    fs::write(out.join("campaign.json"), text + "\n")?;
    println!("{}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MANOBENCH_LOG", "info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, seed, repetitions } => run(&config, &out, seed, repetitions),
        Command::Compare { a, b, out } => compare(&a, &b, &out),
        Command::ServeSim { config, port, host, token } => serve_sim(&config, &host, port, token),
        Command::CollectMetrics { endpoint, out, token } => collect(&endpoint, &out, token),
        Command::Fixtures { fixture: Fixture::Vcpe { out } } => fixtures_vcpe(&out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            error!("{msg}");
            ExitCode::from(code)
        }
    }
}
