use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fbdecomp::batch::analyze_batch;
use fbdecomp::synth::{generate, GENERATORS};
use fbdecomp::{analyze_perf, decompose, fixtures, parse_netlist, Doping, NetlistConfig, PerfError, PerfParams};

/// Functional-block decomposition of CMOS op-amp netlists.
#[derive(Parser)]
#[command(name = "fbdecomp", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a netlist into functional blocks.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Include auxiliary blocks and recognition notes.
        #[arg(long)]
        verbose: bool,
        /// Exit with status 3 when recognition produced diagnostics.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Stage and overall gain from per-transistor gm/gd values.
    Perf {
        path: PathBuf,
        /// TOML file with one `[device] gm = .. gd = ..` table per transistor.
        #[arg(long)]
        params: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Generate block variants with a built-in composition rule.
    Synth {
        block: String,
        #[arg(long, value_enum, default_value_t = DopingArg::N)]
        doping: DopingArg,
        /// Write one .sp file per variant plus manifest.json here; print to stdout otherwise.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Decompose many netlists, in parallel when built with the `parallel` feature.
    Batch {
        paths: Vec<PathBuf>,
        /// Add the four built-in fixtures to the batch.
        #[arg(long)]
        fixtures: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Print a built-in fixture netlist.
    Fixture { name: String },
}

#[derive(Args)]
struct NetArgs {
    #[arg(long)]
    supply_vdd: Option<String>,
    #[arg(long)]
    supply_gnd: Option<String>,
    /// TOML netlist config (`vdd`, `gnd`, `[io]`).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DopingArg {
    N,
    P,
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

const IO: u8 = 1;
const PARSE: u8 = 2;
const STRICT: u8 = 3;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(IO, format!("{}: {e}", path.display())))
}

fn config(net: &NetArgs) -> Result<NetlistConfig, Failure> {
    let mut cfg = match &net.config {
        Some(p) => NetlistConfig::from_toml(&read(p)?).map_err(|e| fail(PARSE, format!("{}: {e}", p.display())))?,
        None => NetlistConfig::default(),
    };
    if let Some(v) = &net.supply_vdd {
        cfg.vdd = v.clone();
    }
    if let Some(g) = &net.supply_gnd {
        cfg.gnd = g.clone();
    }
    Ok(cfg)
}

fn load(path: &Path, net: &NetArgs) -> Result<fbdecomp::Netlist, Failure> {
    let cfg = config(net)?;
    let text = read(path)?;
    parse_netlist(&text, &cfg).map_err(|e| fail(PARSE, format!("{}: {e}", path.display())))
}

fn analyze(path: &Path, format: Format, verbose: bool, strict: bool, net: &NetArgs) -> Result<(), Failure> {
    let n = load(path, net)?;
    let d = decompose(&n);
    match format {
        Format::Text => print!("{}", d.to_text(verbose)),
        Format::Json => print!("{}", d.to_json(verbose)),
        Format::Dot => print!("{}", fbdecomp::dot::to_dot(&d)),
    }
    if strict && !d.diagnostics.is_empty() {
        return Err(fail(STRICT, format!("{} recognition diagnostic(s)", d.diagnostics.len())));
    }
    Ok(())
}

fn perf(path: &Path, params: &Path, format: ReportFormat, net: &NetArgs) -> Result<(), Failure> {
    let n = load(path, net)?;
    let p = PerfParams::from_toml(&read(params)?).map_err(|e| fail(PARSE, format!("{}: {e}", params.display())))?;
    let d = decompose(&n);
    let report = analyze_perf(&d, &p).map_err(|e| {
        let code = match e {
            PerfError::Format(_) => PARSE,
            _ => STRICT,
        };
        fail(code, e.to_string())
    })?;
    match format {
        ReportFormat::Text => print!("{}", report.to_text()),
        ReportFormat::Json => print!("{}", report.to_json()),
    }
    Ok(())
}

fn synth(block: &str, doping: DopingArg, out_dir: Option<&Path>) -> Result<(), Failure> {
    let dop = match doping {
        DopingArg::N => Doping::N,
        DopingArg::P => Doping::P,
    };
    let frags = generate(block, dop).map_err(|e| fail(PARSE, e.to_string()))?;
    let cfg = NetlistConfig::default();
    let Some(dir) = out_dir else {
        for f in &frags {
            println!("{}", f.to_spice(&cfg));
        }
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(|e| fail(IO, format!("{}: {e}", dir.display())))?;
    let mut variants = Vec::new();
    for f in &frags {
        let file = format!("{}.sp", f.id);
        let path = dir.join(&file);
        fs::write(&path, f.to_spice(&cfg)).map_err(|e| fail(IO, format!("{}: {e}", path.display())))?;
        variants.push(serde_json::json!({
            "id": f.id,
            "type": f.btype,
            "doping": f.doping,
            "file": file,
            "devices": f.devices.iter().map(|d| d.name.clone()).collect::<Vec<_>>(),
            "pins": f.pins,
        }));
    }
    let manifest = serde_json::json!({
        "generator": block,
        "doping": dop,
        "available": GENERATORS,
        "variants": variants,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
    let path = dir.join("manifest.json");
    fs::write(&path, text).map_err(|e| fail(IO, format!("{}: {e}", path.display())))?;
    println!("wrote {} variant(s) to {}", frags.len(), dir.display());
    Ok(())
}

fn batch(paths: &[PathBuf], with_fixtures: bool, format: ReportFormat, strict: bool, net: &NetArgs) -> Result<(), Failure> {
    let cfg = config(net)?;
    let mut inputs: Vec<(String, String)> = Vec::new();
    if with_fixtures {
        inputs.extend(fixtures::ALL.iter().map(|(n, t)| (n.to_string(), t.to_string())));
    }
    for p in paths {
        inputs.push((p.display().to_string(), read(p)?));
    }
    if inputs.is_empty() {
        return Err(fail(PARSE, "no inputs; pass netlist paths or --fixtures"));
    }
    let results = analyze_batch(&inputs, &cfg);
    let (mut parse_errors, mut diagnostics) = (0, 0);
    let mut json = Vec::new();
    for item in &results {
        match &item.result {
            Ok(d) => {
                diagnostics += d.diagnostics.len();
                match format {
                    ReportFormat::Text => println!(
                        "{}: {} stage(s), {} block(s), {} diagnostic(s)",
                        item.name,
                        d.stages.len(),
                        d.blocks().len(),
                        d.diagnostics.len()
                    ),
                    ReportFormat::Json => json.push(serde_json::json!({
                        "name": item.name,
                        "decomposition": d.to_json_value(false),
                    })),
                }
            }
            Err(e) => {
                parse_errors += 1;
                match format {
                    ReportFormat::Text => println!("{}: parse error: {e}", item.name),
                    ReportFormat::Json => json.push(serde_json::json!({ "name": item.name, "error": e.to_string() })),
                }
            }
        }
    }
    if let ReportFormat::Json = format {
        println!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
    }
    if parse_errors > 0 {
        return Err(fail(PARSE, format!("{parse_errors} netlist(s) failed to parse")));
    }
    if strict && diagnostics > 0 {
        return Err(fail(STRICT, format!("{diagnostics} recognition diagnostic(s)")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Command::Analyze {
            path,
            format,
            verbose,
            strict,
            net,
        } => analyze(&path, format, verbose, strict, &net),
        Command::Perf {
            path,
            params,
            format,
            net,
        } => perf(&path, &params, format, &net),
        Command::Synth { block, doping, out_dir } => synth(&block, doping, out_dir.as_deref()),
        Command::Batch {
            paths,
            fixtures,
            format,
            strict,
            net,
        } => batch(&paths, fixtures, format, strict, &net),
        Command::Fixture { name } => match fixtures::by_name(&name) {
            Some(text) => {
                print!("{text}");
                Ok(())
            }
            None => {
                let names: Vec<&str> = fixtures::ALL.iter().map(|(n, _)| *n).collect();
                Err(fail(PARSE, format!("unknown fixture `{name}`; available: {}", names.join(", "))))
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fbdecomp: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
