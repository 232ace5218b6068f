use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use holc_cli::source::{SourceFile, ValRhs};
use holc_cli::{load_source, parse_subst_l1, parse_subst_l2, print_term};
use holc_core::models::{
    check_axioms, interp, load_finite_model, AxiomOutcome, FiniteModel, Label, SamplingPlan,
    TermModel, Valuation,
};
use holc_core::reduction::{beta_eq, normalize_traced, DEFAULT_STEP_BUDGET};
use holc_core::subst::{subst_l1, subst_l2};
use holc_core::typing::infer;

/// Kernel and checker for a simply typed lambda calculus with two-sorted
/// atoms and typed holes.
#[derive(Parser)]
#[command(name = "holc", version, about)]
struct Cli {
    /// Emit one machine-readable JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks; outputs are deterministic per seed
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Typecheck every definition in FILE and print its type
    Check { file: PathBuf },
    /// Print the beta-normal form of definition NAME
    Norm {
        file: PathBuf,
        name: String,
        /// Also print every contraction with its redex position
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether two definitions are beta-equal
    Eq {
        file: PathBuf,
        left: String,
        right: String,
    },
    /// Apply a substitution to definition NAME and print the result
    Subst {
        file: PathBuf,
        name: String,
        /// Level-1 substitution list, e.g. "'b := C, a := c"
        #[arg(long)]
        l1: Option<String>,
        /// Level-2 substitution list, e.g. "X := \a:t. a"
        #[arg(long)]
        l2: Option<String>,
    },
    /// Check the substitution axioms of a finite model file
    Axioms {
        model: PathBuf,
        /// Cap on sampled cells per axiom (declared tables stay exhaustive)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Interpret definition NAME under the file's valuation
    Interp {
        file: PathBuf,
        name: String,
        /// Interpret in a finite model instead of the term model
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

struct Outcome {
    text: String,
    json: serde_json::Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(msgs) => {
            if cli.json {
                println!("{}", json!({ "error": msgs }));
            } else {
                for m in msgs {
                    eprintln!("error: {m}");
                }
            }
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Vec<String>> {
    match &cli.cmd {
        Cmd::Check { file } => check_cmd(file),
        Cmd::Norm { file, name, trace } => norm_cmd(file, name, *trace),
        Cmd::Eq { file, left, right } => eq_cmd(file, left, right),
        Cmd::Subst {
            file,
            name,
            l1,
            l2,
        } => subst_cmd(file, name, l1.as_deref(), l2.as_deref()),
        Cmd::Axioms { model, samples } => axioms_cmd(model, *samples, cli.seed),
        Cmd::Interp { file, name, model } => interp_cmd(file, name, model.as_deref()),
    }
}

fn load(file: &Path) -> Result<SourceFile, Vec<String>> {
    load_source(file).map_err(|ds| ds.into_iter().map(|d| d.to_string()).collect())
}

fn lookup<'a>(file: &'a SourceFile, name: &str) -> Result<&'a holc_core::Term, Vec<String>> {
    file.def(name)
        .ok_or_else(|| vec![format!("no definition named `{name}`")])
}

fn check_cmd(path: &Path) -> Result<Outcome, Vec<String>> {
    let file = load(path)?;
    let mut lines = Vec::new();
    let mut defs = Vec::new();
    let mut ok = true;
    for (name, term) in &file.defs {
        match infer(&file.sig, &file.ctx, term) {
            Ok(ty) => {
                lines.push(format!("{name} : {ty}"));
                defs.push(json!({ "name": name, "type": ty.to_string() }));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{name} : error: {e}"));
                defs.push(json!({
                    "name": name,
                    "error": e.kind.to_string(),
                    "path": e.path.to_string(),
                }));
            }
        }
    }
    Ok(Outcome {
        text: lines.join("\n"),
        json: json!({ "command": "check", "ok": ok, "defs": defs }),
        ok,
    })
}

fn norm_cmd(path: &Path, name: &str, trace: bool) -> Result<Outcome, Vec<String>> {
    let file = load(path)?;
    let term = lookup(&file, name)?;
    let (nf, steps) = normalize_traced(&file.sig, &file.ctx, term, DEFAULT_STEP_BUDGET)
        .map_err(|e| vec![e.to_string()])?;
    let mut lines = Vec::new();
    if trace {
        lines.push(format!("start: {}", print_term(term)));
        for (i, step) in steps.steps.iter().enumerate() {
            lines.push(format!("{}. [{}] {}", i + 1, step.path, print_term(&step.term)));
        }
    }
    lines.push(print_term(&nf));
    let steps_json: Vec<serde_json::Value> = steps
        .steps
        .iter()
        .map(|s| json!({ "path": s.path.to_string(), "term": print_term(&s.term) }))
        .collect();
    Ok(Outcome {
        text: lines.join("\n"),
        json: json!({
            "command": "norm",
            "name": name,
            "normal_form": print_term(&nf),
            "steps": steps_json,
        }),
        ok: true,
    })
}

fn eq_cmd(path: &Path, left: &str, right: &str) -> Result<Outcome, Vec<String>> {
    let file = load(path)?;
    let lt = lookup(&file, left)?;
    let rt = lookup(&file, right)?;
    let equal = beta_eq(&file.sig, &file.ctx, lt, rt).map_err(|e| vec![e.to_string()])?;
    Ok(Outcome {
        text: if equal { "equal" } else { "not equal" }.to_string(),
        json: json!({ "command": "eq", "left": left, "right": right, "equal": equal }),
        ok: true,
    })
}

fn subst_cmd(
    path: &Path,
    name: &str,
    l1: Option<&str>,
    l2: Option<&str>,
) -> Result<Outcome, Vec<String>> {
    let file = load(path)?;
    let term = lookup(&file, name)?;
    let out = match (l1, l2) {
        (Some(list), None) => {
            let sigma = parse_subst_l1(list, &file.sig).map_err(|d| vec![d.to_string()])?;
            subst_l1(term, &sigma)
        }
        (None, Some(list)) => {
            let theta = parse_subst_l2(list, &file.sig).map_err(|d| vec![d.to_string()])?;
            subst_l2(term, &theta)
        }
        _ => return Err(vec!["give exactly one of --l1 or --l2".to_string()]),
    };
    Ok(Outcome {
        text: print_term(&out),
        json: json!({ "command": "subst", "name": name, "result": print_term(&out) }),
        ok: true,
    })
}

fn format_axiom(outcome: &AxiomOutcome<Label>) -> String {
    let name = if outcome.axiom.is_optional() {
        format!("{} (optional)", outcome.axiom)
    } else {
        outcome.axiom.to_string()
    };
    let cov = outcome.coverage;
    if cov.checked == 0 {
        return format!("{name}: no cells to check (skipped {})", cov.skipped);
    }
    match &outcome.witness {
        None => format!("{name}: holds (checked {}, skipped {})", cov.checked, cov.skipped),
        Some(w) => format!(
            "{name}: FAILS, witness z={} a={} x={} (got {}, wanted {}; checked {}, skipped {}, failed {})",
            w.element, w.atom, w.argument, w.lhs, w.rhs, cov.checked, cov.skipped, cov.failed
        ),
    }
}

fn axioms_cmd(path: &Path, samples: Option<usize>, seed: u64) -> Result<Outcome, Vec<String>> {
    let model = load_finite_model(path).map_err(|e| vec![e.to_string()])?;
    let plan = SamplingPlan {
        samples_per_axiom: samples.unwrap_or(200),
        seed,
        ..SamplingPlan::default()
    };
    let report = check_axioms(&model, &plan).map_err(|e| vec![e.to_string()])?;
    let mut lines = Vec::new();
    for note in model.partial_notes() {
        lines.push(format!("note: {note}"));
    }
    for outcome in &report.outcomes {
        lines.push(format_axiom(outcome));
    }
    let axioms_json: Vec<serde_json::Value> = report
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.axiom.to_string(),
                "optional": o.axiom.is_optional(),
                "holds": o.holds(),
                "checked": o.coverage.checked,
                "skipped": o.coverage.skipped,
                "failed": o.coverage.failed,
                "witness": o.witness.as_ref().map(|w| json!({
                    "element": w.element.to_string(),
                    "atom": w.atom.to_string(),
                    "argument": w.argument.to_string(),
                    "got": w.lhs.to_string(),
                    "wanted": w.rhs.to_string(),
                })),
            })
        })
        .collect();
    Ok(Outcome {
        text: lines.join("\n"),
        json: json!({
            "command": "axioms",
            "model": path.display().to_string(),
            "notes": model.partial_notes(),
            "axioms": axioms_json,
        }),
        ok: true,
    })
}

fn resolve_model(source: &Path, reference: &str) -> PathBuf {
    let p = Path::new(reference);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        source.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn interp_cmd(path: &Path, name: &str, model: Option<&Path>) -> Result<Outcome, Vec<String>> {
    let file = load(path)?;
    let term = lookup(&file, name)?;
    let model_path = model
        .map(|p| p.to_path_buf())
        .or_else(|| file.model_ref.as_ref().map(|r| resolve_model(path, r)));
    match model_path {
        None => {
            let m = TermModel::new(file.sig.clone());
            let mut val = Valuation::new();
            for entry in &file.vals {
                match &entry.rhs {
                    ValRhs::TermRhs(t) => {
                        let elem = m.element(&file.ctx, t).map_err(|e| {
                            vec![format!("{}: val {}: {e}", entry.span, entry.unknown)]
                        })?;
                        val.insert(entry.unknown.clone(), elem);
                    }
                    ValRhs::NameRhs(label) => {
                        return Err(vec![format!(
                            "{}: val {} = {label} names a model element; pass --model",
                            entry.span, entry.unknown
                        )])
                    }
                }
            }
            let elem = interp(&m, &val, &file.ctx, term).map_err(|e| vec![e.to_string()])?;
            let printed = print_term(elem.normal_form());
            Ok(Outcome {
                text: printed.clone(),
                json: json!({
                    "command": "interp",
                    "name": name,
                    "model": "term",
                    "element": printed,
                }),
                ok: true,
            })
        }
        Some(model_path) => {
            let fm: FiniteModel =
                load_finite_model(&model_path).map_err(|e| vec![e.to_string()])?;
            let mut val: Valuation<Label> = Valuation::new();
            for entry in &file.vals {
                match &entry.rhs {
                    ValRhs::NameRhs(label) => {
                        let label = Label(label.clone());
                        if !fm.elements().any(|l| *l == label) {
                            return Err(vec![format!(
                                "{}: val {}: model declares no element `{label}`",
                                entry.span, entry.unknown
                            )]);
                        }
                        val.insert(entry.unknown.clone(), label);
                    }
                    ValRhs::TermRhs(_) => {
                        return Err(vec![format!(
                            "{}: val {}: finite-model valuations use element labels",
                            entry.span, entry.unknown
                        )])
                    }
                }
            }
            let elem = interp(&fm, &val, &file.ctx, term).map_err(|e| vec![e.to_string()])?;
            Ok(Outcome {
                text: elem.to_string(),
                json: json!({
                    "command": "interp",
                    "name": name,
                    "model": model_path.display().to_string(),
                    "element": elem.to_string(),
                }),
                ok: true,
            })
        }
    }
}
