//! Command-line front end: check, translate, compare, refine, trace,
//! sculpt, generate, and encode over the JSON interchange documents.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict,
//! 2 any error.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use truecc::doc::{self, Document};
use truecc::equiv::{oracle_step_graph, st_h_bisimilar, st_hh_bisimilar, st_isomorphic};
use truecc::event::{EventId, Label};
use truecc::hda::{hda_hh_bisimilar, hda_isomorphic};
use truecc::refine::{refine, RefinementFunction};
use truecc::related::{
    config_into_st, config_into_st_filled, config_into_st_stable, event_into_st, st_into_config,
    st_into_event,
};
use truecc::st::{cc_equivalent_structures, StConfig, StStructure};
use truecc::stc::{chu3_decode, chu3_encode, chu4_decode, chu4_encode};
use truecc::translate::{
    hda_into_st, is_sculpture, sculpture_into_st, st_into_hda, st_into_sculpture, EventListing,
    SculptureSearch,
};

#[derive(Parser)]
#[command(name = "truecc", version, about = "Workbench for ST- and STC-structures, event and configuration structures, and higher dimensional automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareMode {
    Iso,
    H,
    Hh,
    Cc,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document and report its structural properties.
    Check {
        /// Input path, or - for stdin.
        input: String,
        /// Emit the step graph in DOT format instead of the report.
        #[arg(long)]
        dot: bool,
    },
    /// Apply one of the named translations.
    Translate {
        input: String,
        /// Map name: cintost, cintost2, cintost3, stintoc, eintost,
        /// stintoe, stintoh, hintost, sculpintost, stintosculpture,
        /// or unfold. Alternatively give --from/--to kinds.
        #[arg(long, conflicts_with_all = ["from", "to"])]
        map: Option<String>,
        /// Source kind, with --to: picks the canonical map for the pair.
        #[arg(long, requires = "to")]
        from: Option<String>,
        /// Target kind, with --from.
        #[arg(long, requires = "from")]
        to: Option<String>,
        /// Output path (stdout by default).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit the step graph of the result in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Decide an equivalence between two documents of the same kind.
    Compare {
        #[arg(long, value_enum)]
        mode: CompareMode,
        left: String,
        right: String,
    },
    /// Refine a structure by label-indexed replacement structures.
    Refine {
        input: String,
        /// Repeatable label=path bindings for the refinement function.
        #[arg(long = "image", value_name = "LABEL=PATH")]
        images: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate the rooted paths to a configuration and their traces.
    Trace {
        input: String,
        /// Target configuration as JSON: {"S":["a"],"T":[]}.
        #[arg(long)]
        target: String,
        /// Cap on the number of paths.
        #[arg(long, default_value_t = 1000)]
        bound: usize,
    },
    /// Search for a minimal-bulk sculpture presentation of an automaton.
    Sculpt {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit one of the named example structures.
    Generate {
        #[arg(long)]
        example: String,
        /// Size parameter for the parameterized generators.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode into (or decode from) a Chu space over 3 or 4.
    Encode {
        input: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
        chu: u8,
        /// Decode a chu document back into the structure instead.
        #[arg(long)]
        decode: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<Vec<u8>, String> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn write_output(path: &Option<PathBuf>, bytes: &[u8]) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    }
}

fn load(path: &str) -> Result<Document, String> {
    doc::load(&read_input(path)?).map_err(|e| e.to_string())
}

fn budget() -> u64 {
    std::env::var("TRUECC_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(2_000_000)
}

fn emit(value: &Value) -> Result<(), String> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| e.to_string())?;
    bytes.push(b'\n');
    std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { input, dot } => check(&input, dot),
        Command::Translate { input, map, from, to, output, dot } => {
            let map = match (map, from, to) {
                (Some(m), _, _) => m,
                (None, Some(f), Some(t)) => map_for_kinds(&f, &t)?.to_string(),
                _ => return Err("give --map, or both --from and --to".into()),
            };
            translate(&input, &map, &output, dot)
        }
        Command::Compare { mode, left, right } => compare(mode, &left, &right),
        Command::Refine { input, images, output } => run_refine(&input, &images, &output),
        Command::Trace { input, target, bound } => trace(&input, &target, bound),
        Command::Sculpt { input, output } => sculpt(&input, &output),
        Command::Generate { example, k, output } => generate(&example, k, &output),
        Command::Encode { input, chu, decode, output } => encode(&input, chu, decode, &output),
    }
}

/// The canonical map for a kind pair; config → st defaults to the
/// step-preserving filled-in translation.
fn map_for_kinds(from: &str, to: &str) -> Result<&'static str, String> {
    Ok(match (from, to) {
        ("config", "st") => "cintost2",
        ("st", "config") => "stintoc",
        ("event", "st") => "eintost",
        ("st", "event") => "stintoe",
        ("st", "hda") => "stintoh",
        ("hda", "st") => "hintost",
        ("st", "sculpture") => "stintosculpture",
        ("sculpture", "st") => "sculpintost",
        ("hda", "hda") => "unfold",
        (f, t) => return Err(format!("no canonical map from `{f}` to `{t}`")),
    })
}

fn config_json(st: &StStructure, c: StConfig) -> Value {
    let names = |m: truecc::event::EventSet| -> Vec<String> {
        m.iter().map(|e| st.event_id(e).to_string()).collect()
    };
    json!({"S": names(c.started), "T": names(c.terminated)})
}

fn check(input: &str, dot: bool) -> Result<ExitCode, String> {
    let bytes = read_input(input)?;
    // Automata get the lenient loader so degenerate examples still
    // produce a tagged report instead of a hard error.
    if let Ok((hda, tags)) = doc::load_lenient_hda(&bytes) {
        if dot {
            print!("{}", hda_dot(&hda));
            return Ok(ExitCode::SUCCESS);
        }
        let acyclic = hda.is_acyclic();
        let non_degenerate = hda.is_non_degenerate();
        let report = json!({
            "kind": "hda",
            "valid": tags.is_empty(),
            "degenerate_tags": tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "cells": hda.cell_count(),
            "acyclic": acyclic.is_ok(),
            "cycle": acyclic.err(),
            "nonDegenerate": non_degenerate.is_ok(),
            "degeneracyWitness": non_degenerate.err(),
        });
        emit(&report)?;
        return Ok(if tags.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let doc = doc::load(&bytes).map_err(|e| e.to_string())?;
    match &doc {
        Document::St(st) => {
            if dot {
                print!("{}", st_dot(st));
                return Ok(ExitCode::SUCCESS);
            }
            let rep = st.property_report();
            let witness = |w: &Option<truecc::st::ClosureWitness>| -> Value {
                match w {
                    None => Value::Null,
                    Some(w) => json!({
                        "first": config_json(st, w.first),
                        "second": config_json(st, w.second),
                        "bound": config_json(st, w.bound),
                        "missing": config_json(st, w.missing),
                    }),
                }
            };
            emit(&json!({
                "kind": "st",
                "valid": true,
                "mode": match rep.mode {
                    truecc::st::ValidationMode::Strict => "strict",
                    truecc::st::ValidationMode::Weak => "weak",
                },
                "events": st.event_count(),
                "configs": st.config_count(),
                "rooted": rep.rooted,
                "connected": rep.connected,
                "stranded": rep.stranded.map(|c| config_json(st, c)),
                "closedBoundedUnions": rep.closed_bounded_unions,
                "unionWitness": witness(&rep.union_witness),
                "closedBoundedIntersections": rep.closed_bounded_intersections,
                "intersectionWitness": witness(&rep.intersection_witness),
                "stable": rep.stable,
                "adjacentClosed": rep.adjacent_closed,
                "adjacencyWitness": rep.adjacency_witness.map(|w| json!({
                    "rule": w.rule,
                    "premise": w.premise.iter().map(|&c| config_json(st, c)).collect::<Vec<_>>(),
                    "missing": config_json(st, w.missing),
                })),
                "closedSingleEvents": rep.closed_single_events,
                "singleEventWitness": rep.single_event_witness.map(|w| json!({
                    "config": config_json(st, w.config),
                    "event": w.event.to_string(),
                    "missing": config_json(st, w.missing),
                })),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Document::Stc(stc) => {
            emit(&json!({
                "kind": "stc",
                "valid": true,
                "events": stc.event_count(),
                "configs": stc.config_count(),
                "maximalConfigs": stc.maximal_configs().iter().map(|&c| json!({
                    "S": c.started.iter().map(|e| stc.events()[e].id.to_string()).collect::<Vec<_>>(),
                    "T": c.terminated.iter().map(|e| stc.events()[e].id.to_string()).collect::<Vec<_>>(),
                    "C": c.canceled.iter().map(|e| stc.events()[e].id.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Document::Config(c) => {
            emit(&json!({
                "kind": "config",
                "valid": true,
                "events": c.events().len(),
                "configs": c.config_count(),
                "rooted": c.is_rooted(),
                "connected": c.is_connected(),
                "stable": c.is_stable(),
                "asyncSteps": c.async_steps().len(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Document::Event(e) => {
            emit(&json!({
                "kind": "event",
                "valid": true,
                "events": e.events().len(),
                "leftClosedConfigs": e.left_closed_configs().len(),
                "asyncSteps": e.async_steps().len(),
                "rooted": e.is_rooted(),
                "connected": e.is_connected(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Document::Sculpture(sc) => {
            emit(&json!({
                "kind": "sculpture",
                "valid": true,
                "bulkDim": sc.bulk_dim,
                "cells": sc.hda.cell_count(),
                "usedDirections": sc.used_directions().len(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Document::Chu(chu) => {
            emit(&json!({
                "kind": "chu",
                "valid": true,
                "K": chu.k,
                "events": chu.events.len(),
                "states": chu.states.len(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Document::Hda(_) => unreachable!("handled by the lenient loader"),
    }
}

fn st_dot(st: &StStructure) -> String {
    let g = oracle_step_graph(st);
    let mut out = String::from("digraph st {\n  rankdir=BT;\n");
    for (i, &c) in g.nodes.iter().enumerate() {
        out.push_str(&format!("  n{} [label=\"{}\"];\n", i, st.show_config(c)));
    }
    for (i, step, j) in &g.edges {
        let kind = match step.kind {
            truecc::st::StepKind::Start => "s",
            truecc::st::StepKind::Terminate => "t",
        };
        out.push_str(&format!("  n{i} -> n{j} [label=\"{}({})\"];\n", kind, step.label));
    }
    out.push_str("}\n");
    out
}

fn hda_dot(h: &truecc::hda::Hda) -> String {
    let mut out = String::from("digraph hda {\n  rankdir=BT;\n");
    for c in 0..h.cell_count() {
        let label = if h.dim(c) == 1 {
            format!("{} [{}]", h.id(c), h.label(c))
        } else {
            h.id(c).to_string()
        };
        out.push_str(&format!("  n{c} [label=\"{label}\"];\n"));
    }
    for c in 0..h.cell_count() {
        for step in h.steps_from(c) {
            let mark = match step.kind {
                truecc::hda::HdaStepKind::Up => "s",
                truecc::hda::HdaStepKind::Down => "t",
            };
            out.push_str(&format!("  n{c} -> n{} [label=\"{}{}\"];\n", step.to, mark, step.index));
        }
    }
    out.push_str("}\n");
    out
}

fn translate(
    input: &str,
    map: &str,
    output: &Option<PathBuf>,
    dot: bool,
) -> Result<ExitCode, String> {
    let doc = load(input)?;
    let result: Document = match (map, doc) {
        ("cintost", Document::Config(c)) => Document::St(config_into_st(&c)),
        ("cintost2", Document::Config(c)) => Document::St(config_into_st_filled(&c)),
        ("cintost3", Document::Config(c)) => {
            Document::St(config_into_st_stable(&c).map_err(|e| e.to_string())?)
        }
        ("stintoc", Document::St(st)) => Document::Config(st_into_config(&st)),
        ("eintost", Document::Event(e)) => Document::St(event_into_st(&e)),
        ("stintoe", Document::St(st)) => {
            Document::Event(st_into_event(&st).map_err(|e| e.to_string())?)
        }
        ("stintoh", Document::St(st)) => Document::Hda(
            st_into_hda(&st, &EventListing::default_for(&st)).map_err(|e| e.to_string())?,
        ),
        ("hintost", Document::Hda(h)) => Document::St(hda_into_st(&h).map_err(|e| e.to_string())?),
        ("sculpintost", Document::Sculpture(sc)) => {
            Document::St(sculpture_into_st(&sc).map_err(|e| e.to_string())?)
        }
        ("stintosculpture", Document::St(st)) => Document::Sculpture(
            st_into_sculpture(&st, &EventListing::default_for(&st)).map_err(|e| e.to_string())?,
        ),
        ("unfold", Document::Hda(h)) => {
            Document::Hda(h.history_unfolding().map_err(|e| e.to_string())?)
        }
        (name, doc) => {
            return Err(format!("map `{name}` does not apply to a {} document", doc.kind()))
        }
    };
    if dot {
        match &result {
            Document::St(st) => print!("{}", st_dot(st)),
            Document::Hda(h) => print!("{}", hda_dot(h)),
            other => return Err(format!("no DOT view for a {} document", other.kind())),
        }
        return Ok(ExitCode::SUCCESS);
    }
    write_output(output, &doc::save(&result))?;
    Ok(ExitCode::SUCCESS)
}

fn compare(mode: CompareMode, left: &str, right: &str) -> Result<ExitCode, String> {
    let (a, b) = (load(left)?, load(right)?);
    let (verdict, witness): (bool, Value) = match (mode, &a, &b) {
        (CompareMode::Iso, Document::St(a), Document::St(b)) => match st_isomorphic(a, b) {
            Some(m) => (
                true,
                Value::Object(
                    m.into_iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect(),
                ),
            ),
            None => (false, Value::Null),
        },
        (CompareMode::Iso, Document::Hda(a), Document::Hda(b)) => match hda_isomorphic(a, b) {
            Some(m) => (
                true,
                Value::Object(m.into_iter().map(|(k, v)| (k, Value::String(v))).collect()),
            ),
            None => (false, Value::Null),
        },
        (CompareMode::H, Document::St(a), Document::St(b)) => {
            let out = st_h_bisimilar(a, b).map_err(|e| e.to_string())?;
            (out.bisimilar, json!({"relationSize": out.relation.len(), "distinguishing": out.distinguishing}))
        }
        (CompareMode::Hh, Document::St(a), Document::St(b)) => {
            let out = st_hh_bisimilar(a, b).map_err(|e| e.to_string())?;
            (out.bisimilar, json!({"relationSize": out.relation.len(), "distinguishing": out.distinguishing}))
        }
        (CompareMode::Hh, Document::Hda(a), Document::Hda(b)) => {
            let out = hda_hh_bisimilar(a, b).map_err(|e| e.to_string())?;
            (out.bisimilar, json!({"relationSize": out.relation_size, "distinguishing": out.distinguishing}))
        }
        (CompareMode::Cc, Document::St(a), Document::St(b)) => {
            (cc_equivalent_structures(a, b), Value::Null)
        }
        _ => {
            return Err(format!(
                "mode does not apply to {} and {} documents",
                a.kind(),
                b.kind()
            ))
        }
    };
    emit(&json!({"equivalent": verdict, "witness": witness}))?;
    Ok(if verdict { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_refine(
    input: &str,
    images: &[String],
    output: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let Document::St(st) = load(input)? else {
        return Err("refine expects an st document".into());
    };
    let mut r = RefinementFunction::new();
    for binding in images {
        let (label, path) = binding
            .split_once('=')
            .ok_or_else(|| format!("bad --image binding `{binding}`, expected LABEL=PATH"))?;
        let Document::St(image) = load(path)? else {
            return Err(format!("refinement image `{path}` is not an st document"));
        };
        r.insert(Label::new(label), image);
    }
    let refined = refine(&st, &r, budget()).map_err(|e| e.to_string())?;
    write_output(output, &doc::save(&Document::St(refined)))?;
    Ok(ExitCode::SUCCESS)
}

fn trace(input: &str, target: &str, bound: usize) -> Result<ExitCode, String> {
    let Document::St(st) = load(input)? else {
        return Err("trace expects an st document".into());
    };
    let raw: Value = serde_json::from_str(target).map_err(|e| format!("bad target: {e}"))?;
    let part = |key: &str| -> Result<Vec<EventId>, String> {
        raw.get(key)
            .and_then(|v| v.as_array())
            .ok_or_else(|| format!("target misses \"{key}\""))?
            .iter()
            .map(|v| {
                v.as_str().map(EventId::new).ok_or_else(|| "event ids are strings".to_string())
            })
            .collect()
    };
    let s = st.set_of_ids(&part("S")?).map_err(|e| e.to_string())?;
    let t = st.set_of_ids(&part("T")?).map_err(|e| e.to_string())?;
    let target = StConfig::new(s, t);
    let paths = st.enumerate_rooted_paths(target, bound).map_err(|e| e.to_string())?;
    let traces: Vec<Value> = paths
        .iter()
        .map(|p| {
            let tr = st.st_trace(p).expect("rooted path");
            json!({
                "steps": p.steps.iter().map(|s| format!(
                    "{}{}({})",
                    match s.kind { truecc::st::StepKind::Start => "s", _ => "t" },
                    s.event, s.label
                )).collect::<Vec<_>>(),
                "trace": tr.iter().map(|e| format!("{}^{}", e.label, e.annotation)).collect::<Vec<_>>(),
            })
        })
        .collect();
    emit(&json!({"paths": paths.len(), "traces": traces}))?;
    Ok(ExitCode::SUCCESS)
}

fn sculpt(input: &str, output: &Option<PathBuf>) -> Result<ExitCode, String> {
    let Document::Hda(h) = load(input)? else {
        return Err("sculpt expects an hda document".into());
    };
    let opts = SculptureSearch { budget: budget(), ..SculptureSearch::default() };
    match is_sculpture(&h, opts).map_err(|e| e.to_string())? {
        Some(sc) => {
            write_output(output, &doc::save(&Document::Sculpture(sc)))?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            emit(&json!({"sculpture": false}))?;
            Ok(ExitCode::from(1))
        }
    }
}

fn generate(example: &str, k: usize, output: &Option<PathBuf>) -> Result<ExitCode, String> {
    use truecc::fixtures as fx;
    use truecc::stc as stc;
    let bytes = match example {
        "filled-square" => doc::save(&Document::St(fx::filled_square())),
        "empty-square" => doc::save(&Document::St(fx::empty_square())),
        "triangle" => doc::save(&Document::St(fx::triangle())),
        "chain" => doc::save(&Document::St(fx::chain_ab())),
        "choice" => doc::save(&Document::St(fx::choice_ab())),
        "parallel-switch" => doc::save(&Document::St(fx::parallel_switch())),
        "resolved-conflict" => doc::save(&Document::St(fx::resolved_conflict())),
        "asym-conflict-2" => doc::save(&Document::St(fx::asym_conflict_2ev())),
        "asym-conflict-3" => doc::save(&Document::St(fx::asym_conflict_3ev())),
        "shutdown-square" => doc::save(&Document::St(fx::shutdown_square_weak())),
        "asym-conflict-event" => {
            let st = fx::asym_conflict_2ev();
            doc::save(&Document::Event(st_into_event(&st).map_err(|e| e.to_string())?))
        }
        "square-config" => doc::save(&Document::Config(st_into_config(&fx::filled_square()))),
        "filled-square-hda" => doc::save(&Document::Hda(fx::filled_square_hda())),
        "empty-square-hda" => doc::save(&Document::Hda(fx::empty_square_hda())),
        "triangle-hda" => doc::save(&Document::Hda(fx::triangle_hda())),
        "angelic-hda" => doc::save(&Document::Hda(fx::angelic_choice_hda())),
        "demonic-hda" => doc::save(&Document::Hda(fx::demonic_choice_hda())),
        "speed-game-hda" => doc::save(&Document::Hda(fx::speed_game_hda())),
        "cylinder-hda" => doc::save(&Document::Hda(fx::cylinder_hda())),
        "cube-minus-face" => doc::save(&Document::Hda(fx::cube_minus_face_hda())),
        "cube-minus-face-dotted" => doc::save(&Document::Hda(fx::cube_minus_face_dotted_hda())),
        "cube-minus-face-unfolded-dotted" => {
            doc::save(&Document::Hda(fx::cube_minus_face_unfolded_dotted_hda()))
        }
        "shutdown-square-hda" => doc::save_raw_hda(&fx::shutdown_square_raw_hda()),
        "angelic" => doc::save(&Document::Stc(stc::gen_angelic())),
        "demonic" => doc::save(&Document::Stc(stc::gen_demonic())),
        "asym-conflict-stc" => doc::save(&Document::Stc(stc::gen_asym_conflict_stc())),
        "shutdown-backup" => doc::save(&Document::Stc(stc::gen_shutdown_backup(k))),
        "filled-square-chu" => doc::save(&Document::Chu(chu3_encode(&fx::filled_square()))),
        other => return Err(format!("unknown example `{other}`")),
    };
    write_output(output, &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn encode(input: &str, chu: u8, decode: bool, output: &Option<PathBuf>) -> Result<ExitCode, String> {
    let doc = load(input)?;
    let result = match (chu, decode, doc) {
        (3, false, Document::St(st)) => Document::Chu(chu3_encode(&st)),
        (4, false, Document::Stc(stc)) => Document::Chu(chu4_encode(&stc)),
        (3, true, Document::Chu(c)) => Document::St(chu3_decode(&c).map_err(|e| e.to_string())?),
        (4, true, Document::Chu(c)) => Document::Stc(chu4_decode(&c).map_err(|e| e.to_string())?),
        (k, dec, doc) => {
            return Err(format!(
                "cannot {} a {} document over {k}",
                if dec { "decode" } else { "encode" },
                doc.kind()
            ))
        }
    };
    write_output(output, &doc::save(&result))?;
    Ok(ExitCode::SUCCESS)
}
