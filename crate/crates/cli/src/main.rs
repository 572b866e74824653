use std::collections::HashMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use cfq_core::confmap::{bogoliubov, doppler_experiment, ConformalMap, MapKind, QuadratureSpec};
use cfq_core::fock::{FockBasis, OnePacket};
use cfq_core::suite::{converge, run_suite_with, workers_from_env, SuiteConfig, ALL_SUITES};
use cfq_core::{Constants, DerivativeStencil, FrequencyGrid};

#[derive(Parser)]
#[command(name = "cfq", version, about = "Verify discretized conformal-field operator identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the check suites and write report.json.
    Verify {
        /// TOML config; built-in defaults when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// restrict to these suites (repeatable)
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// output directory (overrides the config)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refinement sweep as CSV on stdout (or --out).
    Converge {
        #[arg(long)]
        config: Option<PathBuf>,
        /// comma-separated mode counts, strictly increasing, e.g. 16,32,64
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bogoliubov coefficients of a map as CSV.
    Bogoliubov {
        /// e.g. `translation:b=0.7`, `dilation:lambda=0.5`,
        /// `homographic:a=1,b=0,c=0.1,d=1,domain=-5:5`,
        /// `perturbation:k=3,eps=1e-3,domain=-40:40`, `rindler:accel=1`
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 16)]
        modes: usize,
        #[arg(long, default_value_t = 0.25)]
        d_omega: f64,
    },
    /// Doppler shift of a Gaussian packet under eps T_2 (or T_1).
    Doppler {
        #[arg(long)]
        u0: f64,
        /// position spread sigma_u of the packet
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 64)]
        modes: usize,
        #[arg(long, default_value_t = 8.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 4.0)]
        omega_c: f64,
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// 2 for acceleration, 1 for a boost
        #[arg(long, default_value_t = 2)]
        generator: usize,
    },
}

fn load(config: &Option<PathBuf>) -> Result<SuiteConfig> {
    match config {
        Some(p) => SuiteConfig::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(SuiteConfig::default()),
    }
}

fn parse_sweep(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad sweep entry {x:?}")))
        .collect()
}

fn parse_map(spec: &str) -> Result<ConformalMap> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut kv = HashMap::new();
    let mut domain = (f64::NEG_INFINITY, f64::INFINITY);
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {part:?}"))?;
        if k == "domain" {
            let (lo, hi) = v.split_once(':').ok_or_else(|| anyhow!("domain is lo:hi"))?;
            domain = (lo.parse()?, hi.parse()?);
        } else {
            kv.insert(k.to_string(), v.parse::<f64>().with_context(|| format!("{k}={v}"))?);
        }
    }
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| anyhow!("map {kind} needs {k}"));
    let kind = match kind {
        "identity" => MapKind::Translation { b: 0.0 },
        "translation" => MapKind::Translation { b: get("b")? },
        "dilation" => MapKind::Dilation { lambda: get("lambda")? },
        "homographic" => MapKind::Homographic {
            a: get("a")?,
            b: get("b")?,
            c: get("c")?,
            d: get("d")?,
        },
        "perturbation" => MapKind::Perturbation {
            k: get("k")? as u32,
            eps: get("eps")?,
        },
        "rindler" => MapKind::Rindler { accel: get("accel")? },
        other => bail!("unknown map kind {other:?}"),
    };
    Ok(ConformalMap::on_domain(kind, domain.0, domain.1)?)
}

fn verify(config: &Option<PathBuf>, suites: Vec<String>, out: Option<PathBuf>) -> Result<bool> {
    let mut cfg = load(config)?;
    if !suites.is_empty() {
        cfg.suites = suites;
    }
    if let Some(o) = out {
        cfg.output_dir = o;
    }
    cfg.validate()
        .with_context(|| format!("known suites: {}", ALL_SUITES.join(", ")))?;
    let report = run_suite_with(&cfg, workers_from_env())?;
    let path = cfg.output_dir.join("report.json");
    report.write(&path)?;
    let mut stdout = io::stdout().lock();
    for r in &report.records {
        let status = if r.is_skipped() {
            "skip"
        } else if r.pass {
            "pass"
        } else {
            "FAIL"
        };
        writeln!(stdout, "{status} {:<44} rel_err {:.3e}  {:.2}s", r.check_id, r.rel_err, r.runtime_s)?;
    }
    let failed = report.failures().count();
    writeln!(
        stdout,
        "{} checks, {failed} failed; report at {}",
        report.records.len(),
        path.display()
    )?;
    Ok(failed == 0)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Verify { config, suites, out } => verify(&config, suites, out),
        Cmd::Converge { config, sweep, out } => {
            let mut cfg = load(&config)?;
            if let Some(s) = sweep {
                cfg.sweep.modes = parse_sweep(&s)?;
            }
            let table = converge(&cfg)?;
            match out {
                Some(p) => table.to_csv(File::create(&p).with_context(|| p.display().to_string())?)?,
                None => table.to_csv(io::stdout().lock())?,
            }
            Ok(true)
        }
        Cmd::Bogoliubov {
            map,
            out,
            modes,
            d_omega,
        } => {
            let m = parse_map(&map)?;
            let g = FrequencyGrid::new(modes, d_omega)?;
            let quad = if matches!(m.kind, MapKind::Rindler { .. }) {
                QuadratureSpec::rindler()
            } else {
                QuadratureSpec::default()
            };
            let pair = bogoliubov(&m, &g, &g, &quad)?;
            pair.to_csv(File::create(&out).with_context(|| out.display().to_string())?)?;
            eprintln!(
                "|beta| = {:.3e}, quadrature error {:.3e}, {} nodes",
                pair.beta_norm(),
                pair.meta.error_estimate,
                pair.meta.nodes
            );
            Ok(true)
        }
        Cmd::Doppler {
            u0,
            sigma,
            eps,
            modes,
            omega_max,
            omega_c,
            order,
            generator,
        } => {
            if !(sigma > 0.0) {
                bail!("--sigma must be positive");
            }
            let g = FrequencyGrid::with_max(modes, omega_max, Constants::default())?;
            let d = DerivativeStencil::new(&g, order)?;
            let p = OnePacket::gaussian(&g, omega_c, 1.0 / (2.0 * sigma), u0);
            let b = FockBasis::new(&g, 1)?;
            let r = doppler_experiment(&p, eps, &b, &d, generator)?;
            println!("{}", serde_json::to_string_pretty(&r)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("CFQ_WORKERS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
