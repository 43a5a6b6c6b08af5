//! The `ncmops` command line.
//!
//! Exit codes: 0 success, 1 mathematical failure or mismatch, 2 input error.

use crate::cfrac::{branched_structure, matricial_cf, scalar_branched_cf, MatricialData};
use crate::jacobi::{JacobiData, JacobiSpec};
use crate::ncpoly::Word;
use crate::omega::{OmegaKind, OmegaSpec, OmegaTree};
use crate::oracle::{gram_schmidt_mops, Cached, MomentFunctional, Oracle, OracleState};
use crate::prodstate::{moment_table, CoefficientMap, GramMatrix, ProductState, StateError};
use crate::rational::{parse_rational, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

#[derive(Parser, Debug)]
#[command(name = "ncmops", version, about = "Product-type states and monic orthogonal polynomials in two non-commuting variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an Omega tree, print its boundary and associativity.
    Validate(CommonArgs),
    /// All moments phi[x_w] with |w| <= order.
    Moments(CommonArgs),
    /// Gram matrix of the basis polynomials P_u, |u| <= order.
    Gram(CommonArgs),
    /// Moment series from a continued fraction.
    Cfrac(CfracArgs),
    /// Orthogonalize monomials against lower degrees and report MOPS.
    Mops(CompareArgs),
    /// Compare moment tables of a state against an oracle or a fraction.
    Compare(CompareArgs),
    /// q-Gaussian and tensor states, which are not of product type.
    Counterexample(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Jacobi parameters of the first measure: a JSON file, inline JSON or a preset name.
    #[arg(long, default_value = "semicircle")]
    pub jacobi1: String,
    /// Jacobi parameters of the second measure.
    #[arg(long, default_value = "semicircle")]
    pub jacobi2: String,
    /// Omega: a builtin name, a JSON file or inline JSON.
    #[arg(long, default_value = "free")]
    pub omega: String,
    /// Truncation order (degree) or depth.
    #[arg(long, default_value_t = 6)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Deformation parameter for the q-Gaussian state.
    #[arg(long)]
    pub q: Option<String>,
    /// Second state of the first pair, for c-free products.
    #[arg(long)]
    pub nu1: Option<String>,
    /// Second state of the second pair, for c-free products.
    #[arg(long)]
    pub nu2: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct CfracArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Engine::Scalar)]
    pub engine: Engine,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Left-hand state: the Omega product or the c-free map built from --nu1/--nu2.
    #[arg(long, value_enum, default_value_t = StateKind::Omega)]
    pub state: StateKind,
    /// Right-hand side: a reference product.
    #[arg(long)]
    pub oracle: Option<String>,
    /// Right-hand side: a continued-fraction engine.
    #[arg(long, value_enum)]
    pub engine: Option<Engine>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Scalar,
    Matricial,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Omega,
    Cfree,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Math(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Text of a file if `arg` names one, otherwise `arg` itself.
fn file_or_inline(arg: &str) -> Result<String, CliError> {
    let p = Path::new(arg);
    if !arg.trim_start().starts_with('{') && p.is_file() {
        std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

pub fn parse_jacobi(arg: &str) -> Result<JacobiData, CliError> {
    let text = file_or_inline(arg)?;
    let t = text.trim();
    if t.starts_with('{') {
        let spec: JacobiSpec = serde_json::from_str(t).map_err(|e| CliError::Input(format!("jacobi {arg}: {e}")))?;
        spec.build().map_err(input)
    } else {
        JacobiData::preset(t, &Default::default()).map_err(input)
    }
}

/// A builtin name takes the depth `default_depth`.
pub fn parse_omega(arg: &str, default_depth: usize) -> Result<OmegaTree, CliError> {
    let text = file_or_inline(arg)?;
    let t = text.trim();
    if t.starts_with('{') {
        let spec: OmegaSpec = serde_json::from_str(t).map_err(|e| CliError::Input(format!("omega {arg}: {e}")))?;
        match spec.build() {
            Ok(o) => Ok(o),
            Err(crate::omega::OmegaError::Invalid(v)) => Err(CliError::Math(
                serde_json::to_string(&json!({"valid": false, "violation": v})).unwrap(),
            )),
            Err(e) => Err(input(e)),
        }
    } else {
        OmegaTree::builtin(t, default_depth.max(1)).map_err(input)
    }
}

fn word_json(w: &Word) -> Value {
    json!(w.letters())
}

fn word_dots(w: &Word) -> String {
    w.letters().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(".")
}

/// One moment, serialized with `word` first.
#[derive(serde::Serialize)]
struct Row {
    word: Vec<u8>,
    value: String,
}

fn render_table(table: &BTreeMap<Word, Rational>, format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<Row> = table
                .iter()
                .map(|(w, v)| Row {
                    word: w.letters().to_vec(),
                    value: v.to_string(),
                })
                .collect();
            serde_json::to_string_pretty(&rows).unwrap() + "\n"
        }
        Format::Csv => {
            let mut s = String::from("word,value\n");
            for (w, v) in table {
                s += &format!("{},{}\n", word_dots(w), v);
            }
            s
        }
        Format::Pretty => {
            let mut s = String::new();
            for (w, v) in table {
                s += &format!("{:<20} {v}\n", w.to_string());
            }
            s
        }
    }
}

/// Every diagonal entry, zero or not, then the nonzero off-diagonal ones.
fn gram_cells(g: &GramMatrix) -> Vec<(usize, usize, Rational)> {
    let mut cells: Vec<_> = (0..g.words.len()).map(|k| (k, k, g.get(k, k))).collect();
    cells.extend(g.entries.iter().filter(|(r, c, _)| r != c).cloned());
    cells.sort_by_key(|(r, c, _)| (*r, *c));
    cells
}

fn render_gram(g: &GramMatrix, format: Format) -> String {
    let cells = gram_cells(g);
    match format {
        Format::Json => {
            let rows: Vec<Value> = cells
                .iter()
                .map(|(r, c, v)| json!({"row": word_json(&g.words[*r]), "col": word_json(&g.words[*c]), "value": v.to_string()}))
                .collect();
            serde_json::to_string_pretty(&json!({"diagonal": g.is_diagonal(), "entries": rows})).unwrap() + "\n"
        }
        Format::Csv => {
            let mut s = String::from("row,col,value\n");
            for (r, c, v) in &cells {
                s += &format!("{},{},{}\n", word_dots(&g.words[*r]), word_dots(&g.words[*c]), v);
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("diagonal: {}\n", g.is_diagonal());
            for (r, c, v) in &cells {
                s += &format!("<P{}, P{}> = {}\n", g.words[*r], g.words[*c], v);
            }
            s
        }
    }
}

struct Inputs {
    mu1: JacobiData,
    mu2: JacobiData,
}

fn inputs(a: &CommonArgs) -> Result<Inputs, CliError> {
    Ok(Inputs {
        mu1: parse_jacobi(&a.jacobi1)?,
        mu2: parse_jacobi(&a.jacobi2)?,
    })
}

/// Coefficient map of the selected left-hand state, deep enough for `order`.
fn left_map(a: &CommonArgs, kind: StateKind, ins: &Inputs) -> Result<CoefficientMap, CliError> {
    match kind {
        StateKind::Omega => {
            let omega = parse_omega(&a.omega, a.order)?;
            Ok(ProductState::new(omega, ins.mu1.clone(), ins.mu2.clone())?.map().clone())
        }
        StateKind::Cfree => {
            let (nu1, nu2) = nus(a)?;
            CoefficientMap::cfree(&ins.mu1, &nu1, &ins.mu2, &nu2, a.order.max(1)).map_err(input)
        }
    }
}

fn nus(a: &CommonArgs) -> Result<(JacobiData, JacobiData), CliError> {
    match (&a.nu1, &a.nu2) {
        (Some(n1), Some(n2)) => Ok((parse_jacobi(n1)?, parse_jacobi(n2)?)),
        _ => Err(CliError::Input("c-free products need both --nu1 and --nu2".into())),
    }
}

fn parse_q(a: &CommonArgs) -> Result<Rational, CliError> {
    let q = a.q.as_deref().ok_or_else(|| CliError::Input("--q is required".into()))?;
    parse_rational(q).map_err(input)
}

fn oracle_of(name: &str, a: &CommonArgs) -> Result<Oracle, CliError> {
    Ok(match name {
        "free" => Oracle::Free,
        "boolean" => Oracle::Boolean,
        "monotone" => Oracle::Monotone,
        "antimonotone" | "anti-monotone" => Oracle::Antimonotone,
        "tensor" => Oracle::Tensor,
        "cfree" | "c-free" => {
            let (nu1, nu2) = nus(a)?;
            Oracle::CFree { nu1, nu2 }
        }
        "q-gaussian" => Oracle::QGaussian(parse_q(a)?),
        other => {
            return Err(CliError::Input(format!(
                "unknown oracle {other:?}; expected one of {}",
                Oracle::NAMES.join(", ")
            )))
        }
    })
}

fn cmd_validate(a: &CommonArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = file_or_inline(&a.omega)?;
    let t = text.trim();
    let (words, depth, implicit, kind) = if t.starts_with('{') {
        let spec: OmegaSpec = serde_json::from_str(t).map_err(|e| CliError::Input(format!("omega: {e}")))?;
        match spec {
            OmegaSpec::Builtin { builtin, depth } => {
                let o = OmegaTree::builtin(&builtin, depth).map_err(input)?;
                (o.members().iter().cloned().collect::<Vec<_>>(), depth, false, o.kind())
            }
            OmegaSpec::Words {
                words,
                depth,
                implicit_runs,
            } => (words, depth, implicit_runs, OmegaKind::Custom),
        }
    } else {
        let o = OmegaTree::builtin(t, a.order.max(1)).map_err(input)?;
        (o.members().iter().cloned().collect(), o.depth(), false, o.kind())
    };
    let diagnosis = OmegaTree::diagnose(words.clone(), depth, implicit);
    let conditions: serde_json::Map<String, Value> = diagnosis
        .iter()
        .map(|(c, v)| {
            let name = serde_json::to_value(c).unwrap().as_str().unwrap().to_string();
            (name, json!({"ok": v.is_none(), "violation": v}))
        })
        .collect();
    let report = match OmegaTree::validate(words, depth, implicit, kind) {
        Ok(o) => {
            let boundary: Vec<Value> = o.boundary().iter().map(word_json).collect();
            json!({
                "valid": true,
                "builder": o.kind().name(),
                "depth": depth,
                "members": o.members().len(),
                "conditions": conditions,
                "boundary": boundary,
                "associative": o.is_associative(depth).map_err(input)?,
            })
        }
        Err(v) => json!({"valid": false, "depth": depth, "conditions": conditions, "violation": v}),
    };
    let valid = report["valid"].as_bool().unwrap();
    match a.format {
        Format::Pretty => {
            let mut s = format!("valid: {valid}\n");
            for (c, v) in &diagnosis {
                let c = serde_json::to_value(c).unwrap();
                let c = c.as_str().unwrap();
                match v {
                    None => s += &format!("  {c}: ok\n"),
                    Some(v) => s += &format!("  {c}: violated, witness {}\n", v.witness),
                }
            }
            if valid {
                s += &format!("boundary: {}\n", report["boundary"]);
                s += &format!("associative: {}\n", report["associative"]);
            }
            out.write_all(s.as_bytes()).map_err(input)?;
        }
        _ => writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).map_err(input)?,
    }
    if valid {
        Ok(())
    } else {
        Err(CliError::Math("omega is not admissible".into()))
    }
}

fn cmd_moments(a: &CommonArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ins = inputs(a)?;
    let cm = left_map(a, StateKind::Omega, &ins)?;
    let table = moment_table(&cm, a.order)?;
    out.write_all(render_table(&table, a.format).as_bytes()).map_err(input)
}

fn cmd_gram(a: &CommonArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ins = inputs(a)?;
    let omega = parse_omega(&a.omega, 2 * a.order)?;
    let st = ProductState::new(omega, ins.mu1, ins.mu2)?;
    let g = st.gram_matrix(a.order)?;
    out.write_all(render_gram(&g, a.format).as_bytes()).map_err(input)
}

fn series_table(s: &crate::ncpoly::NCSeries) -> BTreeMap<Word, Rational> {
    Word::all_up_to(s.alphabet() as u8, s.order())
        .into_iter()
        .map(|w| {
            let c = s.coefficient(&w);
            (w, c)
        })
        .collect()
}

fn cf_series(cm: &CoefficientMap, engine: Engine, order: usize) -> Result<crate::ncpoly::NCSeries, CliError> {
    match engine {
        Engine::Scalar => scalar_branched_cf(cm, order).map_err(input),
        Engine::Matricial => {
            let md = MatricialData::from_map(cm, order.div_ceil(2)).map_err(input)?;
            matricial_cf(&md, order).map_err(input)
        }
    }
}

fn cmd_cfrac(a: &CfracArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = &a.common;
    let ins = inputs(c)?;
    let cm = left_map(c, StateKind::Omega, &ins)?;
    let s = cf_series(&cm, a.engine, c.order)?;
    let mut text = String::new();
    if c.format == Format::Pretty {
        text += &branched_structure(&cm, c.order / 2).render();
        text += "\n";
    }
    text += &render_table(&series_table(&s), c.format);
    out.write_all(text.as_bytes()).map_err(input)
}

fn right_table(a: &CompareArgs, ins: &Inputs, left: &CoefficientMap) -> Result<(String, BTreeMap<Word, Rational>), CliError> {
    let c = &a.common;
    match (&a.oracle, a.engine) {
        (Some(name), None) => {
            let st = OracleState::new(oracle_of(name, c)?, ins.mu1.clone(), ins.mu2.clone());
            let table = Word::all_up_to(2, c.order)
                .into_iter()
                .map(|w| st.moment(&w).map(|v| (w, v)))
                .collect::<Result<_, _>>()?;
            Ok((format!("oracle {name}"), table))
        }
        (None, Some(engine)) => Ok((format!("{engine:?} continued fraction").to_lowercase(), series_table(&cf_series(left, engine, c.order)?))),
        _ => Err(CliError::Input("give exactly one of --oracle or --engine".into())),
    }
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = &a.common;
    let ins = inputs(c)?;
    let left = left_map(c, a.state, &ins)?;
    let lt = moment_table(&left, c.order)?;
    let (label, rt) = right_table(a, &ins, &left)?;
    let diffs: Vec<(&Word, &Rational, Rational)> = lt
        .iter()
        .filter_map(|(w, l)| {
            let r = rt.get(w).cloned().unwrap_or_default();
            (l != &r).then_some((w, l, r))
        })
        .collect();
    let first = diffs
        .first()
        .map(|(w, l, r)| json!({"word": word_json(w), "left": l.to_string(), "right": r.to_string()}));
    let report = json!({
        "against": label,
        "compared": lt.len(),
        "differences": diffs.len(),
        "agree": diffs.is_empty(),
        "first_difference": first,
    });
    match c.format {
        Format::Pretty => {
            let mut s = format!("{} words compared against {label}: {} differences\n", lt.len(), diffs.len());
            if let Some((w, l, r)) = diffs.first() {
                s += &format!("first difference at {w}: {l} vs {r}\n");
            }
            out.write_all(s.as_bytes()).map_err(input)?;
        }
        Format::Csv => {
            let mut s = String::from("word,left,right\n");
            for (w, l, r) in &diffs {
                s += &format!("{},{},{}\n", word_dots(w), l, r);
            }
            out.write_all(s.as_bytes()).map_err(input)?;
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).map_err(input)?,
    }
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(CliError::Math(format!("{} moments differ", diffs.len())))
    }
}

fn mops_json(phi: &dyn MomentFunctional, depth: usize) -> Result<(bool, Value), CliError> {
    let r = gram_schmidt_mops(phi, depth)?;
    let polys: serde_json::Map<String, Value> = r
        .polys
        .iter()
        .map(|(w, p)| (word_dots(w), Value::String(p.to_string())))
        .collect();
    Ok((
        r.is_mops,
        json!({
            "mops": r.is_mops,
            "witness": r.witness.as_ref().map(|(u, v)| json!([word_json(u), word_json(v)])),
            "witness_value": r.witness_value.as_ref().map(|v| v.to_string()),
            "polynomials": polys,
        }),
    ))
}

fn cmd_mops(a: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = &a.common;
    let ins = inputs(c)?;
    let (ok, report) = match &a.oracle {
        Some(name) => {
            let st = Cached::new(OracleState::new(oracle_of(name, c)?, ins.mu1.clone(), ins.mu2.clone()));
            mops_json(&st, c.order)?
        }
        None => {
            let left = left_map(&CommonArgs { order: 2 * c.order, ..c.clone() }, a.state, &ins)?;
            mops_json(&Cached::new(left), c.order)?
        }
    };
    write_report(c.format, &report, out)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Math("not a monic orthogonal polynomial system".into()))
    }
}

fn write_report(format: Format, report: &Value, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match format {
        Format::Pretty => pretty_value(report, 0),
        _ => serde_json::to_string_pretty(report).unwrap() + "\n",
    };
    out.write_all(text.as_bytes()).map_err(input)
}

fn pretty_value(v: &Value, indent: usize) -> String {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| match v {
                Value::Object(_) => format!("{pad}{k}:\n{}", pretty_value(v, indent + 2)),
                Value::String(s) => format!("{pad}{k}: {s}\n"),
                other => format!("{pad}{k}: {other}\n"),
            })
            .collect(),
        Value::String(s) => format!("{pad}{s}\n"),
        other => format!("{pad}{other}\n"),
    }
}

fn cmd_counterexample(a: &CommonArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let q = match &a.q {
        Some(q) => parse_rational(q).map_err(input)?,
        None => Rational::new(1.into(), 2.into()),
    };
    let depth = a.order.clamp(2, 3);
    let qs = Cached::new(OracleState::new(
        Oracle::QGaussian(q.clone()),
        JacobiData::semicircle(),
        JacobiData::semicircle(),
    ));
    let qr = gram_schmidt_mops(&qs, depth)?;
    let w12 = Word::from([1u8, 2]);
    let w21 = Word::from([2u8, 1]);
    let ip = qs.inner(&qr.polys[&w12], &qr.polys[&w21])?;
    let q121 = qr.polys.get(&Word::from([1u8, 2, 1])).map(|p| p.to_string());
    let ins = inputs(a)?;
    let ts = Cached::new(OracleState::new(Oracle::Tensor, ins.mu1, ins.mu2));
    let tr = gram_schmidt_mops(&ts, depth)?;
    let verdict = |b: bool| if b { "MOPS" } else { "not MOPS" };
    let report = json!({
        "q-gaussian": {
            "q": q.to_string(),
            "inner_Q12_Q21": ip.to_string(),
            "Q121": q121,
            "verdict": verdict(qr.is_mops),
            "witness": qr.witness.as_ref().map(|(u, v)| json!([word_json(u), word_json(v)])),
        },
        "tensor": {
            "verdict": verdict(tr.is_mops),
            "witness": tr.witness.as_ref().map(|(u, v)| json!([word_json(u), word_json(v)])),
            "witness_value": tr.witness_value.as_ref().map(|v| v.to_string()),
        },
    });
    write_report(a.format, &report, out)
}

/// Parse `args` and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a, out),
        Command::Moments(a) => cmd_moments(a, out),
        Command::Gram(a) => cmd_gram(a, out),
        Command::Cfrac(a) => cmd_cfrac(a, out),
        Command::Mops(a) => cmd_mops(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Counterexample(a) => cmd_counterexample(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let (CliError::Input(m) | CliError::Math(m)) = &e;
            let _ = writeln!(err, "error: {m}");
            e.code()
        }
    }
}
