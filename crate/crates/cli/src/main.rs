//! `obstructor`: build, certify and analyse obstructor complexes from the
//! command line.
//!
//! Exit codes: 0 success or pass, 2 mathematical negative, 1 usage or input
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use obstructor_core::certifier::check_parity;
use obstructor_core::cocycle::obstruction_vanishes;
use obstructor_core::constructors::{build_with_limit, ObstructorSpec};
use obstructor_core::deleted_product::DeletedProduct;
use obstructor_core::digest::sha256_hex;
use obstructor_core::geometry::{parse_rational, GeneralPositionMap, MapFile};
use obstructor_core::group::{actdim_statement, group_bound, Advisory, Bound};
use obstructor_core::{Complex, Error};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

const FLORES_CAP: u32 = 3;

/// `println!` that tolerates a closed stdout.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}
const SEED_ATTEMPTS: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "obstructor", version, about = "Certify obstructor complexes and van Kampen obstructions")]
struct Cli {
    /// Write a run manifest (inputs, map, verdict, output digests) here.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an obstructor spec from a construction expression.
    Build {
        /// points3 | vk(j) | flores(n) | cone(E) | join(E, E)
        #[arg(long)]
        expr: String,
        /// Lift the flores(n <= 3) size cap.
        #[arg(long)]
        allow_large: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the three obstructor conditions on a spec.
    Certify {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Total intersection count of Σ under a general-position map.
    Parity {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Mod-2 van Kampen obstruction of a complex in dimension m.
    Obstruction {
        /// A complex file, or a spec file whose complex is used.
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Dump the cells of the unordered deleted product.
    DumpDp {
        #[arg(long)]
        complex: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Lower bound on the obstructor dimension of a group expression.
    GroupBound {
        #[arg(long)]
        expr: String,
        /// Print the derivation tree.
        #[arg(long)]
        explain: bool,
        /// Geometric dimension, for the advisory upper bound.
        #[arg(long)]
        gdim: Option<u64>,
        /// Assert the group is torsion-free.
        #[arg(long)]
        torsion_free: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-run a manifest and check the outputs are byte-identical.
    Replay {
        #[arg(value_name = "MANIFEST")]
        path: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    /// Random moment-curve parameters from this seed; degenerate draws are retried.
    #[arg(long, conflicts_with = "params")]
    seed: Option<u64>,
    /// A map file, or comma-separated rationals (one per vertex, in id order).
    #[arg(long)]
    params: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize, Deserialize, Debug)]
struct RunManifest {
    command: String,
    args: Vec<String>,
    library_version: String,
    inputs: Vec<FileDigest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<MapFile>,
    verdict: String,
    exit_code: u8,
    outputs: Vec<FileDigest>,
}

#[derive(Default)]
struct Run {
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    map: Option<MapFile>,
    verdict: String,
    exit: u8,
}

impl Run {
    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        Ok(text)
    }

    /// Writes `json` to `out`, or prints it when there is no output file.
    fn emit(&mut self, out: Option<&Path>, json: &str, summary: &str) -> anyhow::Result<()> {
        match out {
            Some(path) => {
                let mut text = json.to_string();
                text.push('\n');
                fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
                self.outputs.push(FileDigest {
                    path: path.display().to_string(),
                    sha256: sha256_hex(text.as_bytes()),
                });
                say!("{summary}");
                say!("wrote {}", path.display());
            }
            None => say!("{json}"),
        }
        Ok(())
    }

    fn finish(&mut self, verdict: impl Into<String>, pass: bool) {
        self.verdict = verdict.into();
        self.exit = if pass { 0 } else { 2 };
    }
}

fn load_spec(run: &mut Run, path: &Path) -> anyhow::Result<ObstructorSpec> {
    let text = run.read(path)?;
    ObstructorSpec::from_json(&text).with_context(|| format!("invalid spec file {}", path.display()))
}

fn load_complex(run: &mut Run, path: &Path) -> anyhow::Result<Complex> {
    let text = run.read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))?;
    let parsed = match value.get("complex") {
        Some(inner) => Complex::from_file(&serde_json::from_value(inner.clone())?),
        None => Complex::from_file(&serde_json::from_value(value)?),
    };
    parsed.with_context(|| format!("invalid complex file {}", path.display()))
}

/// Evaluates `eval` on the selected map, retrying fresh random draws on
/// degenerate positions when a seed is given.
fn with_map<T>(
    run: &mut Run,
    k: &Complex,
    m: usize,
    args: &MapArgs,
    eval: impl Fn(Option<&GeneralPositionMap>) -> obstructor_core::Result<T>,
) -> anyhow::Result<T> {
    if let Some(seed) = args.seed {
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..SEED_ATTEMPTS {
            let f = GeneralPositionMap::random_moment(k, m, &mut rng);
            match eval(Some(&f)) {
                Err(Error::DegeneratePosition { .. }) => continue,
                result => {
                    run.map = Some(f.to_file());
                    return Ok(result?);
                }
            }
        }
        bail!("no general-position map found after {SEED_ATTEMPTS} draws from seed {seed}");
    }
    let f = match &args.params {
        None => None,
        Some(p) if Path::new(p).is_file() => {
            let text = run.read(Path::new(p))?;
            let file: MapFile = serde_json::from_str(&text).with_context(|| format!("invalid map file {p}"))?;
            Some(GeneralPositionMap::from_file(&file)?)
        }
        Some(p) => {
            let values = p
                .split(',')
                .map(|t| parse_rational(t.trim()))
                .collect::<obstructor_core::Result<Vec<_>>>()?;
            Some(GeneralPositionMap::moment(k, m, Some(&values))?)
        }
    };
    let f = match f {
        Some(f) => f,
        None => GeneralPositionMap::moment(k, m, None)?,
    };
    run.map = Some(f.to_file());
    Ok(eval(Some(&f))?)
}

fn execute(command: &Command, run: &mut Run) -> anyhow::Result<()> {
    match command {
        Command::Build { expr, allow_large, out } => {
            let cap = (!allow_large).then_some(FLORES_CAP);
            let spec = build_with_limit(expr, cap)?;
            let summary = format!(
                "{}: {} vertices, {} simplices, dimension {}, m = {}, |Σ| = {}",
                spec.provenance,
                spec.complex.vertex_count(),
                spec.complex.len(),
                spec.complex.dimension()?,
                spec.m(),
                spec.sigma.len()
            );
            run.emit(out.as_deref(), &spec.to_json(), &summary)?;
            run.finish("built", true);
        }
        Command::Certify { spec, map, out } => {
            let spec = load_spec(run, spec)?;
            let cert = with_map(run, &spec.complex, spec.m(), map, |f| spec.certify(f))?;
            let mut summary = format!(
                "verdict: {} (m = {}, |Σ| = {})\n",
                if cert.passed() { "obstructor" } else { "not an obstructor" },
                cert.m,
                cert.pair_count
            );
            summary.push_str(&format!("condition 1 (cycle): {:?}\n", cert.condition1));
            summary.push_str(&format!(
                "condition 2 (odd count): {} (count {})\n",
                if cert.condition2.pass { "pass" } else { "fail" },
                cert.condition2.count
            ));
            summary.push_str(&format!("condition 3 (evenness): {:?}\n", cert.condition3));
            summary.push_str(&cert.statement);
            run.emit(out.as_deref(), &cert.to_json(), &summary)?;
            run.finish(if cert.passed() { "obstructor" } else { "not_obstructor" }, cert.passed());
        }
        Command::Parity { spec, map, out } => {
            let spec = load_spec(run, spec)?;
            let check = with_map(run, &spec.complex, spec.m(), map, |f| check_parity(&spec.complex, &spec.sigma, f))?;
            let json = serde_json::to_string_pretty(&check)?;
            let summary = format!(
                "total intersection count {} ({})",
                check.count,
                if check.pass { "odd" } else { "even" }
            );
            run.emit(out.as_deref(), &json, &summary)?;
            run.finish(if check.pass { "odd" } else { "even" }, check.pass);
        }
        Command::Obstruction { complex, m, map, out } => {
            let k = load_complex(run, complex)?;
            let report = with_map(run, &k, *m, map, |f| obstruction_vanishes(&k, *m, f))?;
            let summary = if report.is_nonzero() {
                format!("NonzeroObstruction: K does not embed in R^{m} (nor in any contractible {m}-manifold)")
            } else {
                format!(
                    "VanishesMod2: the mod-2 class vanishes in dimension {m} ({} of {} cells carry 1); \
                     inconclusive for embeddability",
                    report.cochain_weight, report.cell_count
                )
            };
            run.emit(out.as_deref(), &report.to_json(), &summary)?;
            run.finish(
                if report.is_nonzero() { "nonzero_obstruction" } else { "vanishes_mod2" },
                report.is_nonzero(),
            );
        }
        Command::DumpDp { complex, out } => {
            let k = load_complex(run, complex)?;
            let dump = DeletedProduct::build(&k).dump();
            let counts: Vec<String> = dump.cells.iter().map(|d| format!("{}:{}", d.dimension, d.count)).collect();
            let summary = format!("deleted product cells by dimension {}", counts.join(" "));
            run.emit(out.as_deref(), &serde_json::to_string_pretty(&dump)?, &summary)?;
            run.finish("dumped", true);
        }
        Command::GroupBound {
            expr,
            explain,
            gdim,
            torsion_free,
            out,
        } => {
            let d = group_bound(expr)?;
            if *explain {
                say!("{}", d.explain().trim_end());
            }
            let advisory = Advisory {
                gdim: *gdim,
                torsion_free: *torsion_free,
            };
            let mut summary = format!("obdim({}) >= {}\n", d.group, d.bound);
            for diag in d.all_diagnostics() {
                summary.push_str(&format!("note: {diag}\n"));
            }
            summary.push_str(&actdim_statement(&d, &advisory));
            match out {
                Some(path) => run.emit(Some(path), &d.to_json(), &summary)?,
                None => {
                    say!("{summary}");
                    if *explain {
                        say!("{}", d.to_json());
                    }
                }
            }
            let bound = match d.bound {
                Bound::Finite(n) => n.to_string(),
                Bound::Unbounded => "unbounded".into(),
            };
            run.finish(format!("obdim>={bound}"), !d.semidirect_refused());
        }
        Command::Replay { .. } => unreachable!("handled in main"),
    }
    Ok(())
}

fn replay(path: &Path) -> anyhow::Result<u8> {
    let manifest: RunManifest = serde_json::from_str(
        &fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
    )
    .with_context(|| format!("invalid manifest {}", path.display()))?;
    if manifest.library_version != obstructor_core::VERSION {
        eprintln!(
            "warning: manifest written by library {}, running {}",
            manifest.library_version,
            obstructor_core::VERSION
        );
    }
    let cli = Cli::try_parse_from(std::iter::once("obstructor".to_string()).chain(manifest.args.iter().cloned()))
        .map_err(|e| anyhow!("manifest arguments do not parse: {e}"))?;
    let mut run = Run::default();
    execute(&cli.command, &mut run)?;
    let mut identical = run.exit == manifest.exit_code && run.inputs == manifest.inputs;
    if run.outputs != manifest.outputs {
        identical = false;
        for (want, got) in manifest.outputs.iter().zip(&run.outputs) {
            if want != got {
                eprintln!("{}: expected {}, got {}", want.path, want.sha256, got.sha256);
            }
        }
    }
    if identical {
        say!("replay reproduced {} output(s) byte-identically", run.outputs.len());
        Ok(0)
    } else {
        eprintln!("replay differs from the manifest");
        Ok(1)
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Build { .. } => "build",
        Command::Certify { .. } => "certify",
        Command::Parity { .. } => "parity",
        Command::Obstruction { .. } => "obstruction",
        Command::DumpDp { .. } => "dump-dp",
        Command::GroupBound { .. } => "group-bound",
        Command::Replay { .. } => "replay",
    }
}

/// Command-line arguments with `--manifest` and its value removed.
fn recorded_args() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--manifest" {
            args.next();
        } else if !a.starts_with("--manifest=") {
            out.push(a);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Command::Replay { path } = &cli.command {
        return match replay(path) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        };
    }
    let mut run = Run::default();
    if let Err(e) = execute(&cli.command, &mut run) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command: command_name(&cli.command).into(),
            args: recorded_args(),
            library_version: obstructor_core::VERSION.into(),
            inputs: run.inputs.clone(),
            map: run.map.clone(),
            verdict: run.verdict.clone(),
            exit_code: run.exit,
            outputs: run.outputs.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        if let Err(e) = fs::write(path, text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(run.exit)
}
