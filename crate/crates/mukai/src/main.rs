use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use mukai::spec::{Bounds, SurfaceKindName, SurfaceSpec, VectorSpec};
use mukai::{parse_spec, run_batch, Check, InstanceSpec, Report, Status};

#[derive(Parser)]
#[command(name = "mukai", version, about = "Exact checks on Mukai lattices, Fourier–Mukai transforms and HN strata")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the per-check summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on a single instance.
    Check(CheckArgs),
    /// Run every instance of a TOML spec file.
    Batch { file: PathBuf },
    /// Derive the transform matrix and verify every transform identity.
    FmVerify {
        #[arg(long, default_value = "elliptic-k3")]
        surface: String,
        #[arg(long, default_value_t = 6)]
        rmax: i64,
        #[arg(long, default_value_t = 20)]
        amax: i64,
    },
    /// Enumerate walls and Harder–Narasimhan strata for a vector.
    Strata {
        /// Mukai vector as `r;x,y;s`.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
        #[arg(long)]
        parts: Option<usize>,
        /// A single wall class `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        wall: Option<String>,
    },
    /// Run checks on every valid `(r, s, a, b)` in a grid.
    Sweep {
        #[arg(long, default_value = "elliptic-k3")]
        surface: String,
        #[arg(long, default_value = "2..4")]
        r: String,
        #[arg(long, default_value = "2..4")]
        s: String,
        #[arg(long, default_value_t = 60)]
        ab_max: i64,
        #[arg(long, value_delimiter = ',', default_value = "orthogonality,exclusions")]
        checks: Vec<String>,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// `elliptic-k3`, `generic-k3:<degree>` or `elliptic:<chi_o>`.
    #[arg(long, default_value = "elliptic-k3")]
    surface: String,
    #[arg(long, requires_all = ["s", "a", "b"])]
    r: Option<i64>,
    #[arg(long)]
    s: Option<i64>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    b: Option<i64>,
    /// Mukai vector as `r;c1;s`.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    checks: Vec<String>,
    #[arg(long)]
    coeff_bound: Option<i64>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    r_max: Option<i64>,
    #[arg(long)]
    a_max: Option<i64>,
}

fn surface_spec(text: &str) -> Result<SurfaceSpec> {
    let (kind, arg) = match text.split_once(':') {
        Some((k, a)) => (k, Some(a.parse::<i64>().with_context(|| format!("surface argument {a:?}"))?)),
        None => (text, None),
    };
    let spec = match kind {
        "elliptic-k3" => SurfaceSpec {
            kind: SurfaceKindName::EllipticK3,
            degree: None,
            chi_o: None,
        },
        "generic-k3" => SurfaceSpec {
            kind: SurfaceKindName::GenericK3,
            degree: arg,
            chi_o: None,
        },
        "elliptic" => SurfaceSpec {
            kind: SurfaceKindName::Elliptic,
            degree: None,
            chi_o: arg,
        },
        other => bail!("unknown surface {other:?}"),
    };
    spec.build().map_err(anyhow::Error::msg)?;
    Ok(spec)
}

fn checks(names: &[String]) -> Result<Vec<Check>> {
    names
        .iter()
        .map(|n| Check::parse(n.trim()).with_context(|| format!("unknown check {n:?}")))
        .collect()
}

fn range(text: &str) -> Result<(i64, i64)> {
    match text.split_once("..") {
        Some((lo, hi)) => Ok((lo.parse()?, hi.parse()?)),
        None => {
            let v = text.parse()?;
            Ok((v, v))
        }
    }
}

fn pair(text: &str) -> Result<[i64; 2]> {
    let (x, y) = text.split_once(',').context("expected x,y")?;
    Ok([x.trim().parse()?, y.trim().parse()?])
}

fn validated(specs: Vec<InstanceSpec>) -> Result<Vec<InstanceSpec>> {
    for (i, s) in specs.iter().enumerate() {
        s.validate()
            .map_err(|(field, msg)| anyhow::anyhow!("instance {i}: {field}: {msg}"))?;
    }
    Ok(specs)
}

fn build(command: Command) -> Result<Vec<InstanceSpec>> {
    let specs = match command {
        Command::Batch { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            return parse_spec(&text).with_context(|| format!("parsing {}", file.display()));
        }
        Command::Check(args) => {
            let mut spec = InstanceSpec::new(surface_spec(&args.surface)?, checks(&args.checks)?);
            if let (Some(r), Some(s), Some(a), Some(b)) = (args.r, args.s, args.a, args.b) {
                spec.params = Some([r, s, a, b]);
            }
            spec.v = args.v.as_deref().map(VectorSpec::parse).transpose().map_err(anyhow::Error::msg)?;
            spec.w = args.w.as_deref().map(VectorSpec::parse).transpose().map_err(anyhow::Error::msg)?;
            spec.bounds = Bounds {
                coeff_bound: args.coeff_bound,
                m: args.m,
                r_max: args.r_max,
                a_max: args.a_max,
                ..Bounds::default()
            };
            vec![spec]
        }
        Command::FmVerify { surface, rmax, amax } => {
            let mut spec = InstanceSpec::new(surface_spec(&surface)?, vec![Check::FmVerify]);
            spec.bounds.r_max = Some(rmax);
            spec.bounds.a_max = Some(amax);
            vec![spec]
        }
        Command::Strata {
            v,
            coeff_bound,
            parts,
            wall,
        } => {
            let mut spec = InstanceSpec::new(surface_spec("elliptic-k3")?, vec![Check::Strata]);
            spec.v = Some(VectorSpec::parse(&v).map_err(anyhow::Error::msg)?);
            spec.bounds.coeff_bound = Some(coeff_bound);
            spec.bounds.parts = parts;
            spec.bounds.wall = wall.as_deref().map(pair).transpose()?;
            vec![spec]
        }
        Command::Sweep {
            surface,
            r,
            s,
            ab_max,
            checks: names,
        } => {
            let surface = surface_spec(&surface)?;
            let model = surface.build().map_err(anyhow::Error::msg)?;
            let wanted = checks(&names)?;
            let grid = mukai_core::duality::valid_params(&model, range(&r)?, range(&s)?, ab_max);
            grid.iter()
                .map(|p| {
                    let as_i64 = |n: &mukai_core::Int| i64::try_from(n).expect("small grid values");
                    let mut spec = InstanceSpec::new(surface.clone(), wanted.clone());
                    spec.params = Some([as_i64(&p.r), as_i64(&p.s), as_i64(&p.a), as_i64(&p.b)]);
                    spec
                })
                .collect()
        }
    };
    validated(specs)
}

fn summarize(report: &Report) {
    for (i, inst) in report.instances.iter().enumerate() {
        let label = inst.spec.name.clone().unwrap_or_else(|| format!("#{i}"));
        for (check, result) in &inst.results {
            let status = match result.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
                Status::Skipped => "skipped",
            };
            match &result.reason {
                Some(reason) => eprintln!("{label} {check}: {status} ({reason})"),
                None => eprintln!("{label} {check}: {status}"),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let specs = match build(cli.command) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = run_batch(specs);
    if !cli.quiet {
        summarize(&report);
    }
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
