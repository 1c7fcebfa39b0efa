//! Command-line front end. [`run`] parses arguments and returns the exit
//! code with the rendered report; the binary only prints it.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 validation failure,
//! 3 theorem hypotheses not met.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Map, Value};

use crate::decomp::{enumerate_s_with, gt_report, per_factor, tau, PerMode, SOptions};
use crate::error::{Error, Result};
use crate::initialdata::{is_proper, DataCounts, InitialData};
use crate::io::{
    class_label_form, load_data, load_manifold, parse_class_spec, parse_rational_vector,
    rational_text, ManifoldFile,
};
use crate::k3::{
    build_k3_lattice, kahler_chamber_check, pic_membership_certificate, picard_signature_check,
    ChamberResult, PeriodPoint,
};
use crate::knownvalues::{apply_rules, k3_vanishing, ru_genus0, ru_negative_dim, RuleQuery};
use crate::lattice::{IntegralLattice, LatticeClass};
use crate::rimtori::{refined_sum_check, rim_rank};

#[derive(Parser, Debug)]
#[command(name = "relgt", version, about = "Relative invariant bookkeeping for symplectic 4-manifolds")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants of a class, properness of initial data, and GT values.
    Invariant(InvariantArgs),
    /// The decompositions S(A) over a support.
    Decompose(DecomposeArgs),
    /// K3 lattice tools.
    #[command(subcommand)]
    K3(K3Command),
    /// Rank of the rim tori group and refined sum check.
    Rimtori(RimtoriArgs),
}

#[derive(Args, Debug)]
pub struct InvariantArgs {
    #[arg(long)]
    pub manifold: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub class: String,
    /// Initial data document. Without it GT is evaluated on `Upsilon^{l_A}`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value = "unit")]
    pub per_mode: PerMode,
    /// Evaluate one rule and fail if its hypotheses are not met.
    #[arg(long, value_enum)]
    pub rule: Option<RuleName>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    NegativeDimension,
    Genus0,
    K3Vanishing,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub manifold: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub class: String,
    /// `table`, or class specs separated by `;` (or by `,` when every item
    /// is a label combination).
    #[arg(long, default_value = "table", allow_hyphen_values = true)]
    pub support: String,
    /// Also require `d >= 0` of every component.
    #[arg(long)]
    pub nonneg_d: bool,
}

#[derive(Subcommand, Debug)]
pub enum K3Command {
    /// Count the vectors of square -2 (or 2) in a definite sublattice.
    Roots {
        /// `mE8` or `E8`.
        #[arg(long, default_value = "mE8")]
        sublattice: String,
        #[arg(long)]
        list: bool,
    },
    /// Check that kappa lies in a Kähler chamber for the period re + i im.
    KahlerCheck {
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        #[arg(long, allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Signature and moduli dimension of a Picard sublattice.
    Picard {
        /// Basis vectors; repeat the flag or separate with `;`.
        #[arg(long, required = true, allow_hyphen_values = true)]
        basis: Vec<String>,
    },
    /// How a class is realized as a divisor class.
    Certificate {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
}

#[derive(Args, Debug)]
pub struct RimtoriArgs {
    #[arg(long)]
    pub manifold: PathBuf,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse { .. } => 1,
        Error::TheoremHypotheses(_) => 3,
        _ => 2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Ordered key/value report.
#[derive(Default)]
struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: Map<String, Value> = self.fields.iter().cloned().collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                for (k, v) in &self.fields {
                    match v {
                        Value::String(x) => s.push_str(&format!("{k}: {x}\n")),
                        Value::Array(items) if items.iter().all(Value::is_string) => {
                            s.push_str(&format!("{k}: {}\n", items.len()));
                            for it in items {
                                s.push_str(&format!("  - {}\n", it.as_str().unwrap_or_default()));
                            }
                        }
                        other => s.push_str(&format!("{k}: {other}\n")),
                    }
                }
                s
            }
        }
    }
}

/// An error with the argument it came from.
struct Failure {
    context: Option<String>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { context: None, error }
    }
}

trait Context<T> {
    fn context(self, what: &str) -> std::result::Result<T, Failure>;
}

impl<T> Context<T> for Result<T> {
    fn context(self, what: &str) -> std::result::Result<T, Failure> {
        self.map_err(|error| Failure {
            context: Some(what.to_string()),
            error,
        })
    }
}

type Outcome = std::result::Result<(Report, i32), Failure>;

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CliOutput {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let outcome = match &cli.command {
        Command::Invariant(a) => cmd_invariant(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::K3(k) => cmd_k3(k),
        Command::Rimtori(a) => cmd_rimtori(a),
    };
    match outcome {
        Ok((report, code)) => CliOutput {
            code,
            stdout: report.render(cli.format),
            stderr: String::new(),
        },
        Err(f) => {
            let msg = match f.context {
                Some(c) => format!("error: {c}: {}\n", f.error),
                None => format!("error: {}\n", f.error),
            };
            CliOutput {
                code: exit_code(&f.error),
                stdout: String::new(),
                stderr: msg,
            }
        }
    }
}

fn q(x: &BigRational) -> Value {
    Value::String(rational_text(x))
}

fn manifold(path: &PathBuf) -> std::result::Result<ManifoldFile, Failure> {
    load_manifold(path).context(&format!("--manifold {}", path.display()))
}

fn exceptional_basis(file: &ManifoldFile, a: &LatticeClass) -> Result<Vec<LatticeClass>> {
    let n = file.model.rank();
    let mut out = Vec::new();
    for (i, &x) in a.coords().iter().enumerate() {
        let e = LatticeClass::basis(n, i);
        if x != 0 && file.model.is_exceptional(&e)? {
            out.push(e);
        }
    }
    Ok(out)
}

fn cmd_invariant(args: &InvariantArgs) -> Outcome {
    let file = manifold(&args.manifold)?;
    let m = &file.model;
    let lat = &m.lattice;
    let a = parse_class_spec(lat, &args.class).context("--class")?;
    let given = match &args.data {
        Some(p) => Some(load_data(p).context(&format!("--data {}", p.display()))?),
        None => None,
    };
    let mut r = Report::default();
    let mut code = 0;
    r.put("manifold", m.name.clone());
    r.put("class", class_label_form(lat, &a));
    r.put("coords", a.to_string());
    r.put("square", m.square(&a)?);
    r.put("K.A", m.k_dot(&a)?);
    r.put("d_A", m.d_of(&a)?.to_string());
    match m.genus_of(&a) {
        Ok(g) => r.put("genus", g),
        Err(e) => r.put("genus", format!("undefined ({e})")),
    }
    r.put("toroidal", m.is_toroidal(&a)?);
    r.put("multiply_toroidal", m.is_multiply_toroidal(&a)?);
    r.put("exceptional", m.is_exceptional(&a)?);

    let Some(v) = file.hypersurface.as_ref() else {
        if given.is_some() {
            return Err(Error::InvalidData("properness needs a hypersurface in the manifold file".into()).into());
        }
        return Ok((r, code));
    };
    let l_a = m.l_of(v, &a)?;
    r.put("V", class_label_form(lat, &v.class));
    r.put("l_A", l_a);
    r.put("stable_V", m.is_stable(v)?);
    match m.is_small(v, &a) {
        Ok(s) => r.put("small", s),
        Err(e) => r.put("small", format!("undefined ({e})")),
    }

    let data = match &given {
        Some(d) => d.clone(),
        None => InitialData::upsilon(&vec![1; l_a.max(0) as usize])?,
    };
    r.put("data", data.data_class().to_string());
    r.put("data_source", if given.is_some() { "file" } else { "default" });
    if given.is_some() {
        let report = is_proper(m, v, &a, &data)?;
        r.put("proper", report.is_proper());
        r.put(
            "proper_failures",
            report.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        );
        if !report.is_proper() {
            code = 2;
        }
    }

    if let Some(rule) = args.rule {
        let value = match rule {
            RuleName::NegativeDimension => ru_negative_dim(m, v, &a),
            RuleName::Genus0 => ru_genus0(m, v, &a, &data),
            RuleName::K3Vanishing => k3_vanishing(m, v, &a),
        }
        .context("--rule")?;
        r.put(
            "rule_value",
            value.map_or_else(|| "not determined".to_string(), |x| x.to_string()),
        );
    }

    let queries = [
        RuleQuery::Class {
            class: a.clone(),
            data: data.clone(),
        },
        RuleQuery::ExceptionalSum {
            classes: exceptional_basis(&file, &a)?,
        },
    ];
    let outcome = apply_rules(&file.table, m, v, &queries);
    r.put(
        "rules_applied",
        outcome
            .applied
            .iter()
            .map(|x| {
                let kept = x.overridden_by.map(|t| format!(" (table value {t} kept)")).unwrap_or_default();
                format!("{} {} = {}{kept}", x.rule, class_label_form(lat, &x.class), x.value)
            })
            .collect::<Vec<_>>(),
    );
    if !outcome.warnings.is_empty() {
        r.put("warnings", outcome.warnings.clone());
    }
    let table = outcome.table;
    if table.is_empty() {
        return Ok((r, code));
    }
    match table.ru(&a, &data.data_class()) {
        Some(x) => r.put("ru", x),
        None => r.put("ru", "none"),
    }
    match gt_report(m, v, &a, &data, &table) {
        Ok(g) => {
            r.put("gt_direct", g.direct.as_ref().map_or(Value::from("n/a"), q));
            r.put("gt_unit", q(&g.unit));
            r.put("gt_literal", q(&g.literal));
            r.put("per_mode", args.per_mode.to_string());
            let chosen = match args.per_mode {
                PerMode::Unit => &g.unit,
                PerMode::Literal => &g.literal,
            };
            r.put("gt", q(chosen));
            r.put("per_mode_discrepancy", g.discrepancy());
        }
        Err(e) => {
            r.put("gt_error", e.to_string());
            code = code.max(exit_code(&e));
        }
    }
    Ok((r, code))
}

fn split_support(spec: &str) -> Vec<String> {
    let t = spec.trim();
    let t = t
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .unwrap_or(t);
    if t.trim().is_empty() {
        return Vec::new();
    }
    let parts: Vec<&str> = if t.contains(';') {
        t.split(';').collect()
    } else if t.split(',').all(|p| p.chars().any(char::is_alphabetic)) {
        t.split(',').collect()
    } else {
        vec![t]
    };
    parts
        .into_iter()
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(String::from)
        .collect()
}

fn cmd_decompose(args: &DecomposeArgs) -> Outcome {
    let file = manifold(&args.manifold)?;
    let m = &file.model;
    let lat = &m.lattice;
    let a = parse_class_spec(lat, &args.class).context("--class")?;
    let support: Vec<LatticeClass> = if args.support.trim() == "table" {
        let mut table = file.table.clone();
        if let Some(v) = &file.hypersurface {
            let q = [RuleQuery::ExceptionalSum {
                classes: exceptional_basis(&file, &a)?,
            }];
            table = apply_rules(&table, m, v, &q).table;
        }
        table.support()
    } else {
        split_support(&args.support)
            .iter()
            .map(|s| parse_class_spec(lat, s))
            .collect::<Result<_>>()
            .context("--support")?
    };
    let opts = SOptions {
        require_nonneg_d: args.nonneg_d,
        omega: file.omega.clone(),
    };
    let s = enumerate_s_with(m, &a, &support, &opts)?;
    let mut r = Report::default();
    r.put("manifold", m.name.clone());
    r.put("class", class_label_form(lat, &a));
    r.put(
        "support",
        support.iter().map(|c| class_label_form(lat, c)).collect::<Vec<_>>(),
    );
    r.put("complete", s.complete);
    let pairs_text = |ps: &[(LatticeClass, u32)]| -> String {
        if ps.is_empty() {
            return "{}".into();
        }
        let items: Vec<String> = ps
            .iter()
            .map(|(c, k)| format!("({}, {k})", class_label_form(lat, c)))
            .collect();
        format!("{{{}}}", items.join(", "))
    };
    let mut lines = Vec::new();
    for y in &s.decompositions {
        let (t, _) = tau(m, y)?;
        let mut line = format!("{} tau={}", pairs_text(&y.pairs), pairs_text(&t));
        if let Some(v) = &file.hypersurface {
            let counts = vec![DataCounts::default(); y.pairs.len()];
            for mode in [PerMode::Unit, PerMode::Literal] {
                let p = per_factor(m, v, &a, y, &counts, mode)?;
                line.push_str(&format!(" per({mode})={}", rational_text(&p)));
            }
        }
        lines.push(line);
    }
    r.put("count", s.decompositions.len());
    r.put("decompositions", lines);
    Ok((r, 0))
}

fn definite_sublattice(name: &str) -> Result<(IntegralLattice, i64)> {
    match name.trim() {
        "mE8" | "-E8" | "E8(-1)" => Ok((IntegralLattice::e8().negated(), -2)),
        "E8" => Ok((IntegralLattice::e8(), 2)),
        other => Err(Error::parse(1, format!("unknown sublattice {other:?}; expected mE8 or E8"))),
    }
}

fn cmd_k3(cmd: &K3Command) -> Outcome {
    let k3 = build_k3_lattice();
    let mut r = Report::default();
    match cmd {
        K3Command::Roots { sublattice, list } => {
            let (l, sq) = definite_sublattice(sublattice).context("--sublattice")?;
            let roots = l.enumerate_square_classes(sq)?;
            r.put("sublattice", sublattice.trim());
            r.put("square", sq);
            r.put("roots", roots.len());
            if *list {
                r.put("vectors", roots.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            }
        }
        K3Command::KahlerCheck { kappa, re, im, bound } => {
            let kappa = parse_rational_vector(&k3, kappa).context("--kappa")?;
            let re = parse_rational_vector(&k3, re).context("--re")?;
            let im = parse_rational_vector(&k3, im).context("--im")?;
            let u = PeriodPoint::new(&k3, re, im)?;
            let res = kahler_chamber_check(&kappa, &u, *bound)?;
            r.put("bound", *bound);
            r.put("result", res.to_string());
            if let ChamberResult::Fail { witness: Some(w), .. } = &res {
                r.put("witness", class_label_form(&k3, w));
            }
        }
        K3Command::Picard { basis } => {
            let specs: Vec<String> = basis
                .iter()
                .flat_map(|b| b.split(';').map(|s| s.trim().to_string()).collect::<Vec<_>>())
                .filter(|s| !s.is_empty())
                .collect();
            let vecs: Vec<LatticeClass> = specs
                .iter()
                .map(|s| parse_class_spec(&k3, s))
                .collect::<Result<_>>()
                .context("--basis")?;
            let p = picard_signature_check(&vecs)?;
            let sig = format!("({},{})", p.signature.0, p.signature.1);
            r.put("rank", p.r);
            r.put("signature", sig.clone());
            r.put("nullity", p.nullity);
            r.put("moduli_dim", p.moduli_dim);
            r.put("hodge_index_ok", p.ok);
            r.put("summary", format!("{sig}, moduli dim {}", p.moduli_dim));
            if !p.ok {
                return Ok((r, 2));
            }
        }
        K3Command::Certificate { class } => {
            let a = parse_class_spec(&k3, class).context("--class")?;
            r.put("class", class_label_form(&k3, &a));
            r.put("square", k3.square(&a)?);
            r.put("certificate", pic_membership_certificate(&a)?.to_string());
        }
    }
    Ok((r, 0))
}

fn cmd_rimtori(args: &RimtoriArgs) -> Outcome {
    let file = manifold(&args.manifold)?;
    let m = &file.model;
    let v = file.require_hypersurface()?;
    let mut r = Report::default();
    r.put("manifold", m.name.clone());
    r.put("genus_V", v.genus);
    let Some(rim) = &file.rim else {
        if v.genus == 0 {
            r.put("rank", 0);
            return Ok((r, 0));
        }
        return Err(Error::InvalidData("no rim section for a hypersurface of positive genus".into()).into());
    };
    let p = &rim.presentation;
    if p.h1v_rank != 2 * v.genus as usize {
        return Err(Error::InvalidData(format!(
            "h1v_rank {} differs from 2 g(V) = {}",
            p.h1v_rank,
            2 * v.genus
        ))
        .into());
    }
    r.put("rank", rim_rank(p));
    r.put(
        "invariant_factors",
        Value::Array(p.invariant_factors().iter().map(|d| json!(d.to_string())).collect()),
    );
    r.put(
        "torsion",
        Value::Array(p.torsion().iter().map(|d| json!(d.to_string())).collect()),
    );
    let mut code = 0;
    if let Some(f) = &rim.refined {
        let ok = refined_sum_check(&f.table, f.base_value, &f.class)?;
        r.put("refined_class", class_label_form(&m.lattice, &f.class));
        r.put("refined_entries", f.table.len());
        r.put("refined_sum_check", ok);
        if !ok {
            code = 2;
        }
    }
    Ok((r, code))
}
