use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use strucspace::harness::{self, CheckResult, Corpus, HomSpec, Summary, Verdict};
use strucspace::module::parse_u64_list;
use strucspace::{ClassName, Limits, Module, ModuleSpec, StructureSpace, SubmoduleLattice};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "strucspace",
    version,
    about = "Structure spaces of finite modules over Z/nZ"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every submodule with its class memberships.
    Inspect {
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Describe one structure space.
    Space {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        class: ClassName,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the theorem checks on one module.
    Verify {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value = "all")]
        class: String,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the induced-map checks on one homomorphism.
    Hom {
        #[arg(long)]
        ring: u64,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        /// Generator images, `;`-separated, each a `,`-separated tuple.
        #[arg(long)]
        images: String,
        #[arg(long, default_value = "all")]
        class: String,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run every check on the built-in corpus.
    Corpus {
        #[arg(long, default_value_t = 24)]
        max_modulus: u64,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long)]
    ring: u64,
    /// Cyclic orders, comma-separated; empty for the zero module.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    orders: String,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    #[arg(long)]
    max_elements: Option<usize>,
    #[arg(long)]
    max_submodules: Option<usize>,
}

impl CapArgs {
    fn limits(self) -> Limits {
        let mut l = Limits::default();
        if let Some(e) = self.max_elements {
            l.max_elements = e;
        }
        if let Some(s) = self.max_submodules {
            l.max_submodules = s;
        }
        l
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random families per instance.
    #[arg(long, default_value_t = 100)]
    families: usize,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

impl ModuleArgs {
    fn spec(&self) -> Result<ModuleSpec> {
        Ok(ModuleSpec::new(self.ring, parse_u64_list(&self.orders)?))
    }

    fn lattice(&self) -> Result<(ModuleSpec, SubmoduleLattice)> {
        let spec = self.spec()?;
        let module = Module::from_spec(&spec)?;
        let lat = SubmoduleLattice::build(&module, self.caps.limits(), None)?;
        Ok((spec, lat))
    }
}

fn parse_classes(s: &str) -> Result<Vec<ClassName>> {
    if s == "all" {
        return Ok(ClassName::ALL.to_vec());
    }
    s.split(',')
        .map(|c| c.trim().parse::<ClassName>().map_err(Into::into))
        .collect()
}

#[derive(Serialize)]
struct Envelope<I, B> {
    tool_version: &'static str,
    instance: I,
    #[serde(flatten)]
    body: B,
}

#[derive(Serialize)]
struct ModuleInstance {
    module: ModuleSpec,
}

#[derive(Serialize)]
struct ClassInstance {
    module: ModuleSpec,
    class: String,
}

#[derive(Serialize)]
struct HomInstance {
    hom: HomSpec,
    class: String,
}

#[derive(Serialize)]
struct CorpusInstance {
    modules: usize,
    homs: usize,
    seed: u64,
    families: usize,
}

#[derive(Serialize)]
struct SubmoduleEntry {
    id: usize,
    label: String,
    size: usize,
    classes: BTreeMap<&'static str, bool>,
}

#[derive(Serialize)]
struct Submodules {
    submodules: Vec<SubmoduleEntry>,
}

#[derive(Serialize)]
struct SubbasisEntry {
    set: Vec<String>,
    witnesses: Vec<String>,
}

#[derive(Serialize)]
struct SpaceBody {
    points: Vec<String>,
    subbasis: Vec<SubbasisEntry>,
    point_closures: Vec<Vec<String>>,
    specialization: Vec<(String, String)>,
    separation: strucspace::topology::SeparationReport,
    spectral: strucspace::topology::SpectralReport,
    connected: bool,
    strong_disconnection: Option<(Vec<String>, Vec<String>)>,
    top_module: bool,
}

#[derive(Serialize)]
struct Space {
    space: SpaceBody,
}

#[derive(Serialize)]
struct Results {
    summary: Summary,
    results: Vec<CheckResult>,
}

fn emit(out: &OutArgs, text: String) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {path}")),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn inspect(module: &ModuleArgs, out: &OutArgs) -> Result<()> {
    let (spec, lat) = module.lattice()?;
    let entries: Vec<SubmoduleEntry> = lat
        .ids()
        .map(|id| SubmoduleEntry {
            id,
            label: lat.label(id).to_string(),
            size: lat.size(id),
            classes: ClassName::ALL
                .iter()
                .map(|&c| (c.as_str(), lat.is_in_class(id, c)))
                .collect(),
        })
        .collect();
    let text = match out.format {
        Format::Json => json(&Envelope {
            tool_version: TOOL_VERSION,
            instance: ModuleInstance { module: spec },
            body: Submodules {
                submodules: entries,
            },
        })?,
        Format::Dot => bail!("inspect has no dot output"),
        Format::Text => {
            let mut s = format!("{}: {} submodules\n", lat.module(), lat.len());
            for e in entries {
                let classes: Vec<&str> = ClassName::ALL
                    .iter()
                    .map(|c| c.as_str())
                    .filter(|c| e.classes[c])
                    .collect();
                s += &format!(
                    "{:>3} {:<24} |{}| {}\n",
                    e.id,
                    e.label,
                    e.size,
                    classes.join(" ")
                );
            }
            s
        }
    };
    emit(out, text)
}

fn labels(space: &StructureSpace<'_>, set: &strucspace::PointSet) -> Vec<String> {
    set.iter().map(|p| space.label(p).to_string()).collect()
}

fn dot(space: &StructureSpace<'_>) -> String {
    let mut s = String::from("digraph specialization {\n  rankdir=BT;\n");
    for p in 0..space.len() {
        s += &format!("  \"{}\";\n", space.label(p));
    }
    for (x, y) in space.specialization_preorder() {
        if x != y {
            s += &format!("  \"{}\" -> \"{}\";\n", space.label(x), space.label(y));
        }
    }
    s + "}\n"
}

fn space(module: &ModuleArgs, class: ClassName, out: &OutArgs) -> Result<()> {
    let (spec, lat) = module.lattice()?;
    let sp = StructureSpace::build(&lat, class);
    let text = match out.format {
        Format::Dot => dot(&sp),
        Format::Json | Format::Text => {
            let body = SpaceBody {
                points: (0..sp.len()).map(|p| sp.label(p).to_string()).collect(),
                subbasis: sp
                    .subbasis()
                    .iter()
                    .map(|b| SubbasisEntry {
                        set: labels(&sp, &b.set),
                        witnesses: b
                            .witnesses
                            .iter()
                            .map(|&w| lat.label(w).to_string())
                            .collect(),
                    })
                    .collect(),
                point_closures: (0..sp.len())
                    .map(|p| labels(&sp, sp.point_closure(p)))
                    .collect(),
                specialization: sp
                    .specialization_preorder()
                    .into_iter()
                    .map(|(x, y)| (sp.label(x).to_string(), sp.label(y).to_string()))
                    .collect(),
                separation: sp.separation_report(),
                spectral: sp.spectral_report(),
                connected: sp.is_connected(),
                strong_disconnection: sp
                    .strongly_disconnects()
                    .map(|(a, b)| (labels(&sp, &a), labels(&sp, &b))),
                top_module: strucspace::is_top_module(&lat, class).is_top,
            };
            if out.format == Format::Json {
                json(&Envelope {
                    tool_version: TOOL_VERSION,
                    instance: ClassInstance {
                        module: spec,
                        class: class.to_string(),
                    },
                    body: Space { space: body },
                })?
            } else {
                let sep = body.separation;
                let mut s = format!(
                    "D(M) for {class} over {}: {} points\n",
                    lat.module(),
                    sp.len()
                );
                s += &format!("points: {}\n", body.points.join(" "));
                for (p, cl) in body.points.iter().zip(&body.point_closures) {
                    s += &format!("  closure of {p}: {{{}}}\n", cl.join(","));
                }
                s += &format!(
                    "t0={} t1={} sober={} spectral={} connected={} top={}\n",
                    sep.t0,
                    sep.t1,
                    sep.sober,
                    body.spectral.spectral,
                    body.connected,
                    body.top_module
                );
                s
            }
        }
    };
    emit(out, text)
}

fn corpus_from(run: &RunArgs, caps: CapArgs, mut corpus: Corpus) -> Corpus {
    corpus.seed = run.seed;
    corpus.families = run.families;
    corpus.limits = caps.limits();
    corpus
}

/// Single-instance commands treat a skipped instance as a cap error.
fn report<I: Serialize>(
    instance: I,
    results: Vec<CheckResult>,
    out: &OutArgs,
    single: bool,
) -> Result<bool> {
    if single {
        if let Some(r) = results.iter().find(|r| r.verdict == Verdict::Skipped) {
            bail!("{}", r.witness.as_deref().unwrap_or("cap exceeded"));
        }
    }
    let summary = harness::summarize(&results);
    let failed = summary.fail > 0;
    let text = match out.format {
        Format::Json => json(&Envelope {
            tool_version: TOOL_VERSION,
            instance,
            body: Results { summary, results },
        })?,
        Format::Dot => bail!("check reports have no dot output"),
        Format::Text => {
            let mut s: String = results.iter().map(|r| format!("{r}\n")).collect();
            s += &format!(
                "pass {} / fail {} / hypothesis-not-met {} / info {} / skipped {}\n",
                summary.pass,
                summary.fail,
                summary.hypothesis_not_met,
                summary.info,
                summary.skipped
            );
            s
        }
    };
    emit(out, text)?;
    Ok(failed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Inspect { module, out } => inspect(&module, &out).map(|_| false),
        Command::Space { module, class, out } => space(&module, class, &out).map(|_| false),
        Command::Verify {
            module,
            class,
            run,
            out,
        } => {
            let spec = module.spec()?;
            let classes = parse_classes(&class)?;
            let corpus = corpus_from(&run, module.caps, Corpus::single(spec.clone(), classes));
            let results = harness::run_all(&corpus)?;
            report(
                ClassInstance {
                    module: spec,
                    class,
                },
                results,
                &out,
                true,
            )
        }
        Command::Hom {
            ring,
            src,
            dst,
            images,
            class,
            caps,
            run,
            out,
        } => {
            let images = images
                .split(';')
                .map(parse_u64_list)
                .collect::<strucspace::Result<Vec<_>>>()?;
            let spec = HomSpec::new(
                ModuleSpec::new(ring, parse_u64_list(&src)?),
                ModuleSpec::new(ring, parse_u64_list(&dst)?),
                images,
            );
            spec.build()?;
            let mut corpus = corpus_from(
                &run,
                caps,
                Corpus::single(spec.src.clone(), parse_classes(&class)?),
            );
            corpus.modules.clear();
            corpus.homs = vec![spec.clone()];
            let results = harness::run_all(&corpus)?;
            report(HomInstance { hom: spec, class }, results, &out, true)
        }
        Command::Corpus {
            max_modulus,
            caps,
            run,
            out,
        } => {
            let corpus = corpus_from(&run, caps, Corpus::standard(max_modulus));
            let results = harness::run_all(&corpus)?;
            let instance = CorpusInstance {
                modules: corpus.modules.len(),
                homs: corpus.homs.len(),
                seed: corpus.seed,
                families: corpus.families,
            };
            report(instance, results, &out, false)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", line.trim_start_matches("error: ").trim());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
