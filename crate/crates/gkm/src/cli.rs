use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkm_core::cohomology::{abbv_index, local_index_h_trace, structure_constants_h, verify_icanonical_h};
use gkm_core::equivariant::{require_gkm, LocalIndexTrace};
use gkm_core::gkm::{Direction, GkmGraph};
use gkm_core::kirwan::{self, project_k};
use gkm_core::ktheory::{atiyah_segal_index, local_index_k_trace, structure_constants_k, verify_icanonical_k};
use gkm_core::symcore::LocalRing;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::format::{self, Class, Poly};
use crate::registry::{self, Loaded};
use crate::verify::{self, Status};
use crate::{CliError, Mode};

#[derive(Parser, Debug)]
#[command(name = "gkm", version, about = "Canonical bases of equivariant K-theory and cohomology of toric manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum VerifyLevel {
    None,
    #[default]
    Fast,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntVector(pub Vec<BigInt>);

fn parse_vector(s: &str) -> Result<IntVector, String> {
    s.trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| format!("not an integer: {t:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(IntVector)
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Fixture name (cp1, cp2, cpn:k, hirzebruch, square) or input file
    #[arg(value_name = "SOURCE", conflicts_with_all = ["fixture", "input"])]
    pub source: Option<String>,
    #[arg(value_name = "MODE", value_enum, conflicts_with = "mode")]
    pub mode_arg: Option<Mode>,
    #[arg(long, conflicts_with = "input")]
    pub fixture: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Generic direction, e.g. "1,2"
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub xi: Option<IntVector>,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub verify: VerifyLevel,
}

impl Common {
    pub fn mode(&self) -> Mode {
        self.mode.or(self.mode_arg).unwrap_or(Mode::KTheory)
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        let xi = self.xi.as_ref().map(|v| v.0.as_slice());
        match (&self.source, &self.fixture, &self.input) {
            (Some(s), _, _) => registry::load(s, xi),
            (_, Some(f), _) => match gkm_core::fixtures::by_name(f) {
                Some(input) => registry::from_input(Some(f.clone()), input, xi),
                None => Err(CliError::Usage(format!(
                    "unknown fixture {f:?}; known: {}",
                    gkm_core::fixtures::names().join(", ")
                ))),
            },
            (_, _, Some(p)) => registry::load_file(p, xi),
            _ => Err(CliError::Usage("give a fixture name or an input file".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, orient and index the GKM graph
    Graph(Common),
    /// Validate the graph and, optionally, a class
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: Option<String>,
    },
    /// The i-canonical basis
    Basis(Common),
    /// Poincaré duals of the flow-up faces
    Pd(Common),
    /// GT classes (cohomology, index-increasing graphs only)
    Gt(Common),
    /// Local index of a class at a vertex
    LocalIndex {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: String,
        #[arg(long)]
        vertex: String,
    },
    /// Global index of a class
    Index {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: String,
    },
    /// Structure constants of the i-canonical basis
    Structure(Common),
    /// Kirwan map to the reduction just below the maximum of <psi, pi>
    Kirwan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        pi: IntVector,
        #[arg(long)]
        class: String,
    },
    /// Run the invariant suite on the graph
    Verify {
        #[command(flatten)]
        common: Common,
        /// Same as --verify full
        #[arg(long)]
        full: bool,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Graph(c) | Command::Basis(c) | Command::Pd(c) | Command::Gt(c) | Command::Structure(c) => c,
            Command::Check { common, .. }
            | Command::LocalIndex { common, .. }
            | Command::Index { common, .. }
            | Command::Kirwan { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}

/// A command's result in both renderings. `failure` is set when the report
/// is complete but the run should still exit nonzero.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, failure: None }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first), runs, and renders.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                let err = CliError::Usage(text.trim_end().to_string());
                Outcome { code: 2, stdout: String::new(), stderr: error_line(&err) }
            };
        }
    };
    let common = cli.command.common().clone();
    let (report, err) = match run(&cli.command) {
        Ok(r) => {
            let failure = r.failure;
            (Some(Report { failure: None, ..r }), failure)
        }
        Err(e) => (None, Some(e)),
    };
    let mut out = Outcome { code: 0, stdout: String::new(), stderr: String::new() };
    if let Some(r) = report {
        let rendered = r.render(common.format);
        match &common.out {
            Some(path) => {
                if let Err(e) = registry::write_text(path, &rendered) {
                    return Outcome { code: e.exit_code(), stdout: String::new(), stderr: error_line(&e) };
                }
            }
            None => out.stdout = rendered,
        }
    }
    if let Some(e) = err {
        out.code = e.exit_code();
        out.stderr = error_line(&e);
    }
    out
}

fn error_line(e: &CliError) -> String {
    let mut s = serde_json::to_string(&format::error_to_json(e)).expect("json values serialize");
    s.push('\n');
    s
}

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    let common = cmd.common();
    let loaded = common.load()?;
    let g = &loaded.graph;
    let mode = common.mode();
    match cmd {
        Command::Graph(_) => Ok(graph_report(g)),
        Command::Check { class, .. } => check(&loaded, mode, class.as_deref()),
        Command::Basis(_) => {
            let basis = registry::compute_basis(g, mode)?;
            if common.verify >= VerifyLevel::Fast {
                match &basis[..] {
                    [Class::K(_), ..] => verify_icanonical_k(g, &unwrap_k(&basis))?,
                    _ => verify_icanonical_h(g, &unwrap_h(&basis))?,
                }
            }
            if common.verify == VerifyLevel::Full {
                verify::round_trip(g, mode, &basis)?;
            }
            Ok(classes_report(g, mode, "tau", &basis))
        }
        Command::Pd(_) => {
            let classes = registry::poincare_duals(g, mode);
            if common.verify >= VerifyLevel::Fast {
                classes.iter().try_for_each(|c| require_class_gkm(g, c))?;
            }
            Ok(classes_report(g, mode, "eta", &classes))
        }
        Command::Gt(_) => {
            if mode != Mode::Cohomology && (common.mode.is_some() || common.mode_arg.is_some()) {
                return Err(CliError::Usage("GT classes exist only in cohomology".into()));
            }
            let classes = registry::gt_basis(g)?;
            if common.verify >= VerifyLevel::Fast {
                classes.iter().try_for_each(|c| require_class_gkm(g, c))?;
            }
            Ok(classes_report(g, Mode::Cohomology, "zeta", &classes))
        }
        Command::LocalIndex { class, vertex, .. } => {
            let c = loaded.class(class, mode)?;
            let q = loaded.vertex(vertex)?;
            Ok(match &c {
                Class::K(c) => trace_report(g, q, &local_index_k_trace(g, c, q)?, Poly::K),
                Class::H(c) => trace_report(g, q, &local_index_h_trace(g, c, q)?, Poly::H),
            })
        }
        Command::Index { class, .. } => {
            let c = loaded.class(class, mode)?;
            let (label, value) = match &c {
                Class::K(c) => ("Ind", Poly::K(atiyah_segal_index(g, c)?)),
                Class::H(c) => ("integral", Poly::H(abbv_index(g, c)?)),
            };
            Ok(Report::ok(
                json!({ "mode": mode.name(), "index": value.to_json() }),
                format!("{label} = {}\n", value.to_text()),
            ))
        }
        Command::Structure(_) => structure(g, mode),
        Command::Kirwan { pi, class, .. } => kirwan_report(&loaded, mode, &pi.0, class),
        Command::Verify { full, .. } => {
            let level = if *full { VerifyLevel::Full } else { common.verify };
            let rows = verify::run(&loaded, level);
            let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
            let mut report = verify::report(&rows);
            if failed > 0 {
                report.failure = Some(CliError::Verify { failed, total: rows.len() });
            }
            Ok(report)
        }
    }
}

pub(crate) fn unwrap_k(classes: &[Class]) -> Vec<gkm_core::ktheory::EquivClassK> {
    classes
        .iter()
        .filter_map(|c| match c {
            Class::K(c) => Some(c.clone()),
            Class::H(_) => None,
        })
        .collect()
}

pub(crate) fn unwrap_h(classes: &[Class]) -> Vec<gkm_core::cohomology::EquivClassH> {
    classes
        .iter()
        .filter_map(|c| match c {
            Class::H(c) => Some(c.clone()),
            Class::K(_) => None,
        })
        .collect()
}

pub(crate) fn require_class_gkm(g: &GkmGraph, c: &Class) -> Result<(), CliError> {
    match c {
        Class::K(c) => require_gkm(g, c)?,
        Class::H(c) => require_gkm(g, c)?,
    }
    Ok(())
}

fn ids(g: &GkmGraph, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|p| g.vertex(p).id.clone()).collect()
}

fn weights_text(ws: &[gkm_core::symcore::Weight]) -> String {
    let parts: Vec<String> = ws.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn graph_report(g: &GkmGraph) -> Report {
    let xi: Vec<Value> = g.xi().iter().map(format::int_to_json).collect();
    let witness = g.index_increasing_witness();
    let mut vertices = Vec::new();
    let mut text = String::new();
    let xi_text: Vec<String> = g.xi().iter().map(ToString::to_string).collect();
    let _ = writeln!(
        text,
        "rank {}, {} vertices, {} edges, xi = [{}]",
        g.rank(),
        g.len(),
        g.edges().len(),
        xi_text.join(",")
    );
    for (p, v) in g.vertices().iter().enumerate() {
        let up = ids(g, g.flow_face(p, Direction::Up));
        let down = ids(g, g.flow_face(p, Direction::Down));
        let closure = ids(g, g.upward_closure(p));
        let psi: Vec<String> = v.psi.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            text,
            "{}  psi=({})  mu={}  lambda={}  W+={}  W-={}  F={{{}}}  H={{{}}}  V+={{{}}}",
            v.id,
            psi.join(","),
            v.mu,
            v.lambda,
            weights_text(&v.wplus),
            weights_text(&v.wminus),
            up.join(","),
            down.join(","),
            closure.join(",")
        );
        vertices.push(json!({
            "id": v.id,
            "psi": v.psi.iter().map(format::rational_to_json).collect::<Vec<_>>(),
            "mu": format::rational_to_json(&v.mu),
            "lambda": v.lambda,
            "wplus": v.wplus.iter().map(format::weight_to_json).collect::<Vec<_>>(),
            "wminus": v.wminus.iter().map(format::weight_to_json).collect::<Vec<_>>(),
            "flow_up": up,
            "flow_down": down,
            "upward_closure": closure,
        }));
    }
    let mut edges = Vec::new();
    for e in g.edges() {
        let (s, d) = (&g.vertex(e.src).id, &g.vertex(e.dst).id);
        let _ = writeln!(text, "{s} -> {d}  w={}  m={}", e.weight, e.multiplicity);
        edges.push(json!({
            "src": s,
            "dst": d,
            "weight": format::weight_to_json(&e.weight),
            "multiplicity": format::rational_to_json(&e.multiplicity),
        }));
    }
    let witness_json = witness.map(|e| json!([g.vertex(e.src).id, g.vertex(e.dst).id]));
    match witness {
        None => text.push_str("index increasing: yes\n"),
        Some(e) => {
            let _ = writeln!(
                text,
                "index increasing: no (edge {} -> {})",
                g.vertex(e.src).id,
                g.vertex(e.dst).id
            );
        }
    }
    Report::ok(
        json!({
            "rank": g.rank(),
            "xi": xi,
            "vertices": vertices,
            "edges": edges,
            "index_increasing": witness.is_none(),
            "witness": witness_json,
        }),
        text,
    )
}

fn check(loaded: &Loaded, mode: Mode, class: Option<&str>) -> Result<Report, CliError> {
    let g = &loaded.graph;
    let mut text = format!("graph ok: {} vertices, {} edges, Delzant\n", g.len(), g.edges().len());
    let mut out = json!({ "graph": "ok" });
    if let Some(name) = class {
        let c = loaded.class(name, mode)?;
        require_class_gkm(g, &c)?;
        text.push_str("class ok: GKM conditions hold on every edge\n");
        out["class"] = json!("ok");
    }
    Ok(Report::ok(out, text))
}

fn classes_text(g: &GkmGraph, label: &str, classes: &[Class]) -> String {
    let mut text = String::new();
    for (p, c) in classes.iter().enumerate() {
        let _ = writeln!(text, "{label}[{}]", g.vertex(p).id);
        for (q, v) in g.vertices().iter().enumerate() {
            let _ = writeln!(text, "  {}: {}", v.id, c.value(q).to_text());
        }
    }
    text
}

fn classes_report(g: &GkmGraph, mode: Mode, label: &str, classes: &[Class]) -> Report {
    Report::ok(format::basis_to_json(g, mode, classes), classes_text(g, label, classes))
}

fn trace_report<R: LocalRing>(
    g: &GkmGraph,
    q: usize,
    t: &LocalIndexTrace<R>,
    wrap: impl Fn(R) -> Poly,
) -> Report {
    let id = &g.vertex(q).id;
    let f: Vec<Poly> = t.f.iter().cloned().map(&wrap).collect();
    let index = wrap(t.index.clone());
    let mut text = String::new();
    let _ = writeln!(text, "vertex {id}, lambda = {}", g.lambda(q));
    let _ = writeln!(text, "basis = {}", weights_text(&t.basis));
    for (j, fj) in f.iter().enumerate() {
        let _ = writeln!(text, "f{j} = {}", fj.to_text());
    }
    let _ = writeln!(text, "Ind_{id} = {}", index.to_text());
    Report::ok(
        json!({
            "vertex": id,
            "lambda": g.lambda(q),
            "basis": t.basis.iter().map(format::weight_to_json).collect::<Vec<_>>(),
            "f": f.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "index": index.to_json(),
        }),
        text,
    )
}

fn structure(g: &GkmGraph, mode: Mode) -> Result<Report, CliError> {
    let id = |p: usize| g.vertex(p).id.clone();
    let mut text = String::new();
    let triples = match mode {
        Mode::KTheory => {
            let basis = gkm_core::ktheory::icanonical_basis_k(g)?;
            let t = structure_constants_k(g, &basis)?;
            for (&(p, q, r), c) in &t.table {
                let _ = writeln!(text, "c({}, {}; {}) = {c}", id(p), id(q), id(r));
            }
            format::structure_to_json(g, &t, |c| Poly::K(c.clone()))
        }
        Mode::Cohomology => {
            let basis = gkm_core::cohomology::icanonical_basis_h(g)?;
            let t = structure_constants_h(g, &basis)?;
            for (&(p, q, r), c) in &t.table {
                let _ = writeln!(text, "c({}, {}; {}) = {c}", id(p), id(q), id(r));
            }
            format::structure_to_json(g, &t, |c| Poly::H(c.clone()))
        }
    };
    Ok(Report::ok(json!({ "mode": mode.name(), "structure": triples }), text))
}

fn kirwan_report(loaded: &Loaded, mode: Mode, pi: &[BigInt], class: &str) -> Result<Report, CliError> {
    let g = &loaded.graph;
    let setup = kirwan::reduced_fixed_data(g, pi)?;
    let c = loaded.class(class, mode)?;
    require_class_gkm(g, &c)?;
    let pi_text: Vec<String> = setup.pi.iter().map(ToString::to_string).collect();
    let top = &g.vertex(setup.top).id;
    let mut text = format!("pi = [{}], maximum {top}\n", pi_text.join(","));
    let mut points = Vec::new();
    for pt in &setup.reduced {
        let (at_top, at_source) = match &c {
            Class::H(c) => (
                Poly::H(kirwan::kirwan_restrict(g, &setup, c, pt)?),
                Poly::H(kirwan::kirwan_restrict_from_source(g, &setup, c, pt)?),
            ),
            Class::K(c) => {
                let proj = |v| {
                    project_k(v, &pt.edge_weight, &setup.pi)
                        .map(Poly::K)
                        .ok_or_else(|| gkm_core::kirwan::KirwanError::NotFreeAction {
                            source: g.vertex(pt.source).id.clone(),
                        })
                };
                (proj(c.value(setup.top))?, proj(c.value(pt.source))?)
            }
        };
        let src = &g.vertex(pt.source).id;
        let _ = writeln!(
            text,
            "{src} -> {top}  w={}  residual={}  kappa={}",
            pt.edge_weight,
            weights_text(&pt.residual),
            at_top.to_text()
        );
        if at_top != at_source {
            let _ = writeln!(text, "  from {src}: {}", at_source.to_text());
        }
        points.push(json!({
            "source": src,
            "edge_weight": format::weight_to_json(&pt.edge_weight),
            "residual": pt.residual.iter().map(format::weight_to_json).collect::<Vec<_>>(),
            "value": at_top.to_json(),
            "value_from_source": at_source.to_json(),
        }));
    }
    Ok(Report::ok(
        json!({
            "mode": mode.name(),
            "pi": setup.pi.iter().map(format::int_to_json).collect::<Vec<_>>(),
            "top": top,
            "points": points,
        }),
        text,
    ))
}
