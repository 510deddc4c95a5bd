use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use certforge::bench::{bench_chain, ladder, with_big_stack, BenchRow, CSV_HEADER};
use certforge::cert::KernelCert;
use certforge::checker::{ccheck, CheckReport};
use certforge::ident::Ident;
use certforge::lp_export::{emit_module, emit_preamble, PREAMBLE_MODULE};
use certforge::sexp::Sexp;
use certforge::syntax::{parse_kernel, parse_task, parse_term, parse_type, print_kernel, print_task};
use certforge::task::Task;
use certforge::term::Term;
use certforge::types::Type;
use certforge::transforms::{
    certify, t_assert, t_axiom, t_blast, t_clear, t_construct, t_destruct, t_induction,
    t_inst_type, t_instantiate, t_intro, t_rewrite, t_split, t_swap, t_trivial, t_unfold,
    CertifyingTransform,
};

#[derive(Parser)]
#[command(name = "certforge", version, about = "Certifying transformations on proof tasks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck a task file, then print it back.
    Parse { file: PathBuf },
    /// Apply a transformation, check its certificate and write the resulting tasks.
    Transform(TransformArgs),
    /// Replay a kernel certificate against a task.
    Check(CheckArgs),
    /// Write the λΠ module for a checked application.
    Export(ExportArgs),
    /// Time blast and the checker on the chain family.
    Bench(BenchArgs),
}

#[derive(Args)]
struct TransformArgs {
    file: PathBuf,
    /// trivial, axiom, clear, swap, unfold, split, destruct, construct,
    /// assert, instantiate, inst-type, intro, rewrite, induction or blast.
    #[arg(long)]
    name: String,
    /// Premise names, in the order the transformation expects them.
    #[arg(long = "premise")]
    premises: Vec<String>,
    /// Witness or asserted formula.
    #[arg(long = "with")]
    with: Option<String>,
    /// Type instance for inst-type.
    #[arg(long = "type")]
    ty: Option<String>,
    /// Integer symbol for induction.
    #[arg(long)]
    var: Option<String>,
    /// Names for the two parts produced by destruct.
    #[arg(long, num_args = 2)]
    names: Option<Vec<String>>,
    /// Rewrite from right to left.
    #[arg(long)]
    rtl: bool,
    /// Explicit instantiation of the rewriting equality, one term per variable.
    #[arg(long = "inst")]
    inst: Vec<String>,
    /// Directory for the resulting task files; they are printed otherwise.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    emit_cert: Option<PathBuf>,
    #[arg(long)]
    emit_lp: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    task: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    /// Expected resulting tasks, compared in order with the derived leaves.
    #[arg(long, num_args = 1..)]
    leaves: Option<Vec<PathBuf>>,
}

#[derive(Args)]
struct ExportArgs {
    task: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    #[arg(long, num_args = 1..)]
    leaves: Option<Vec<PathBuf>>,
    /// Output path; the preamble is written in the same directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    /// CSV output path; standard output otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_big_stack(move || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Parse { file } => {
            let task = read_task(&file)?;
            print!("{}", print_task(&task));
            Ok(())
        }
        Command::Transform(args) => cmd_transform(args),
        Command::Check(args) => cmd_check(args),
        Command::Export(args) => cmd_export(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_task(path: &Path) -> Result<Task> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_task(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_kernel(path: &Path) -> Result<KernelCert> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_kernel(&text).with_context(|| format!("parsing {}", path.display()))
}

fn premise(args: &TransformArgs, k: usize) -> Result<Ident> {
    args.premises
        .get(k)
        .map(|p| Ident::new(p))
        .ok_or_else(|| anyhow!("`{}` needs {} --premise argument(s)", args.name, k + 1))
}

fn term_arg(task: &Task, text: Option<&String>, what: &str) -> Result<Term> {
    let text = text.ok_or_else(|| anyhow!("missing --{what}"))?;
    parse_term(text, &task.sig).with_context(|| format!("parsing `{text}`"))
}

fn select(args: &TransformArgs, task: &Task) -> Result<CertifyingTransform> {
    let p = |k| premise(args, k);
    Ok(match args.name.as_str() {
        "trivial" => t_trivial(p(0)?),
        "axiom" => t_axiom(p(0)?, p(1)?),
        "clear" => t_clear(p(0)?),
        "swap" => t_swap(p(0)?),
        "unfold" => t_unfold(p(0)?),
        "split" => t_split(p(0)?),
        "destruct" => {
            let names = args
                .names
                .as_ref()
                .map(|v| (Ident::new(&v[0]), Ident::new(&v[1])));
            t_destruct(p(0)?, names)
        }
        "construct" => t_construct(p(0)?, p(1)?, p(2)?),
        "assert" => t_assert(p(0)?, term_arg(task, args.with.as_ref(), "with")?),
        "instantiate" => t_instantiate(p(0)?, term_arg(task, args.with.as_ref(), "with")?),
        "inst-type" => {
            let text = args.ty.as_ref().ok_or_else(|| anyhow!("missing --type"))?;
            let mut ty = parse_type(text).with_context(|| format!("parsing `{text}`"))?;
            // A bare name declared by the task is its nullary type symbol.
            for v in ty.vars() {
                if task.types.arity(&v) == Some(0) {
                    ty = ty.subst(&v, &Type::App(v.clone(), vec![]));
                }
            }
            t_inst_type(p(0)?, ty)
        }
        "intro" => t_intro(p(0)?),
        "rewrite" => {
            let inst = if args.inst.is_empty() {
                None
            } else {
                let terms: Result<Vec<Term>> =
                    args.inst.iter().map(|t| term_arg(task, Some(t), "inst")).collect();
                Some(terms?)
            };
            t_rewrite(p(0)?, p(1)?, args.rtl, inst)
        }
        "induction" => {
            let var = args.var.as_ref().ok_or_else(|| anyhow!("missing --var"))?;
            t_induction(p(0)?, Ident::new(var), term_arg(task, args.with.as_ref(), "with")?)
        }
        "blast" => t_blast(),
        other => bail!("unknown transformation `{other}`"),
    })
}

fn cmd_transform(args: TransformArgs) -> Result<()> {
    let task = read_task(&args.file)?;
    let t = select(&args, &task)?;
    let certified = certify(&t, &task).with_context(|| format!("{} failed", args.name))?;
    if let Some(path) = &args.emit_cert {
        write_file(path, &print_kernel(&certified.kernel))?;
    }
    if let Some(path) = &args.emit_lp {
        write_module(path, &task, &certified.tasks, &certified.kernel)?;
    }
    let stem = args
        .file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "task".into());
    match &args.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (k, t) in certified.tasks.iter().enumerate() {
                let path = dir.join(format!("{stem}.{}.tsk", k + 1));
                write_file(&path, &print_task(t))?;
                println!("{}", path.display());
            }
        }
        None => {
            for (k, t) in certified.tasks.iter().enumerate() {
                println!("; task {}", k + 1);
                print!("{}", print_task(t));
            }
        }
    }
    eprintln!("validated: {} resulting task(s)", certified.tasks.len());
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_module(path: &Path, task: &Task, leaves: &[Task], cert: &KernelCert) -> Result<()> {
    let module = emit_module(task, leaves, cert).context("exporting")?;
    write_file(path, &module)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    write_file(&dir.join(format!("{PREAMBLE_MODULE}.lp")), &emit_preamble())
}

/// The derived leaves, checked against the given files when present.
fn checked_leaves(report: &CheckReport, leaves: Option<&[PathBuf]>) -> Result<Vec<Task>> {
    if let Some(f) = &report.failure {
        bail!("certificate rejected: {f}");
    }
    let Some(paths) = leaves else {
        return Ok(report.derived_leaves.clone());
    };
    let expected: Vec<Task> = paths.iter().map(|p| read_task(p)).collect::<Result<_>>()?;
    if expected.len() != report.derived_leaves.len() {
        bail!(
            "certificate has {} leaves but {} tasks were given",
            report.derived_leaves.len(),
            expected.len()
        );
    }
    for (k, (e, d)) in expected.iter().zip(&report.derived_leaves).enumerate() {
        if e != d {
            bail!("leaf {} differs from {}", k + 1, paths[k].display());
        }
    }
    Ok(expected)
}

fn report_record(report: &CheckReport) -> Sexp {
    let field = |k: &str, v: String| Sexp::list(vec![Sexp::atom(k), Sexp::atom(v)]);
    let mut items = vec![
        Sexp::atom("report"),
        field("ok", report.ok.to_string()),
        field("leaves", report.derived_leaves.len().to_string()),
    ];
    if let Some(f) = &report.failure {
        items.push(field("rule", f.rule.to_string()));
        let path = f.path.iter().map(|i| Sexp::atom(i.to_string())).collect();
        items.push(Sexp::list(vec![Sexp::atom("path"), Sexp::list(path)]));
    }
    Sexp::list(items)
}

fn cmd_check(args: CheckArgs) -> Result<()> {
    let task = read_task(&args.task)?;
    let cert = read_kernel(&args.cert)?;
    let report = ccheck(&cert, &task);
    let mut out = io::stdout().lock();
    match &report.failure {
        None => writeln!(out, "ok: {} leaf task(s)", report.derived_leaves.len())?,
        Some(f) => writeln!(out, "rejected: {f}")?,
    }
    writeln!(out, "{}", report_record(&report))?;
    checked_leaves(&report, args.leaves.as_deref())?;
    Ok(())
}

fn cmd_export(args: ExportArgs) -> Result<()> {
    let task = read_task(&args.task)?;
    let cert = read_kernel(&args.cert)?;
    let report = ccheck(&cert, &task);
    let leaves = checked_leaves(&report, args.leaves.as_deref())?;
    write_module(&args.out, &task, &leaves, &cert)?;
    println!("{}", args.out.display());
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.max_n < 5 {
        bail!("--max-n must be at least 5");
    }
    if args.runs == 0 {
        bail!("--runs must be positive");
    }
    let mut rows: Vec<BenchRow> = Vec::new();
    for n in ladder(args.max_n) {
        let row = bench_chain(n, args.runs).with_context(|| format!("n = {n}"))?;
        eprintln!(
            "n={:<5} transform={:.4}s cert={}B check={:.4}s",
            row.n, row.transform_s, row.cert_bytes, row.check_s
        );
        rows.push(row);
    }
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in &rows {
        w.write_record([
            r.n.to_string(),
            format!("{:.6}", r.transform_s),
            r.cert_bytes.to_string(),
            format!("{:.6}", r.check_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}
