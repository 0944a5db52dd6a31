//! Graph sources, vertex aliases and named classes.

use std::fs;
use std::path::Path;

use gkm_core::cohomology::{gt_class, icanonical_basis_h, poincare_dual_h, EquivClassH};
use gkm_core::equivariant::EquivClass;
use gkm_core::fixtures;
use gkm_core::gkm::{GkmGraph, GraphError, ToricInput};
use gkm_core::ktheory::{icanonical_basis_k, poincare_dual_k, EquivClassK};
use gkm_core::symcore::{LaurentPoly, Weight};
use num_bigint::BigInt;
use serde_json::Value;

use crate::format::{self, Class};
use crate::{CliError, Mode};

#[derive(Clone, Debug)]
pub struct Loaded {
    /// Fixture name, when the graph came from one.
    pub fixture: Option<String>,
    pub input: ToricInput,
    pub graph: GkmGraph,
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let io = |message: String| CliError::Io {
        path: path.display().to_string(),
        message,
    };
    let text = fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// A fixture name, or else a path to an input file.
pub fn load(source: &str, xi: Option<&[BigInt]>) -> Result<Loaded, CliError> {
    match fixtures::by_name(source) {
        Some(input) => from_input(Some(source.to_string()), input, xi),
        None => load_file(Path::new(source), xi),
    }
}

pub fn load_file(path: &Path, xi: Option<&[BigInt]>) -> Result<Loaded, CliError> {
    let input = format::parse_input(&read_json(path)?)?;
    from_input(None, input, xi)
}

pub fn from_input(fixture: Option<String>, mut input: ToricInput, xi: Option<&[BigInt]>) -> Result<Loaded, CliError> {
    if let Some(xi) = xi {
        input.xi = Some(xi.to_vec());
    }
    let graph = GkmGraph::from_input(&input)?;
    Ok(Loaded { fixture, input, graph })
}

impl Loaded {
    fn is_fixture(&self, name: &str) -> bool {
        self.fixture.as_deref() == Some(name)
    }

    /// A vertex id, or a fixture alias (`q` on `hirzebruch` is the vertex of
    /// the worked local-index example).
    pub fn vertex(&self, name: &str) -> Result<usize, CliError> {
        let id = match name {
            "q" if self.is_fixture("hirzebruch") => "p2",
            _ => name,
        };
        self.graph
            .index_of(id)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()).into())
    }

    /// `one`, `eta:<v>`, `tau:<v>`, `gt:<v>`, a fixture-specific name, or a
    /// class file.
    pub fn class(&self, name: &str, mode: Mode) -> Result<Class, CliError> {
        let g = &self.graph;
        if name == "one" {
            return Ok(match mode {
                Mode::KTheory => Class::K(EquivClassK::one(g)),
                Mode::Cohomology => Class::H(EquivClassH::one(g)),
            });
        }
        if let Some(v) = name.strip_prefix("eta:") {
            let p = self.vertex(v)?;
            return Ok(match mode {
                Mode::KTheory => Class::K(poincare_dual_k(g, p)),
                Mode::Cohomology => Class::H(poincare_dual_h(g, p)),
            });
        }
        if let Some(v) = name.strip_prefix("tau:") {
            let p = self.vertex(v)?;
            return Ok(compute_basis(g, mode)?.swap_remove(p));
        }
        if let Some(v) = name.strip_prefix("gt:") {
            if mode != Mode::Cohomology {
                return Err(CliError::Usage("GT classes exist only in cohomology".into()));
            }
            return Ok(Class::H(gt_class(g, self.vertex(v)?)?));
        }
        if name == "tau1" && self.is_fixture("hirzebruch") {
            if mode != Mode::KTheory {
                return Err(CliError::Usage("class tau1 is a K-theory class".into()));
            }
            return Ok(Class::K(hirzebruch_tau1(g)));
        }
        let path = Path::new(name);
        if !path.exists() {
            return Err(CliError::Usage(format!("unknown class {name:?} (and no such file)")));
        }
        Class::from_json(&read_json(path)?, g, mode)
    }
}

/// The second class of the Hirzebruch table as drawn:
/// `(0, 1 − e^{x+y}, (1 − e^{x−y})·e^y, 0)`.
pub fn hirzebruch_tau1(g: &GkmGraph) -> EquivClassK {
    let w = Weight::from_i64s;
    let mut values = vec![LaurentPoly::zero(2); g.len()];
    let at = |id: &str| g.index_of(id).expect("hirzebruch vertex");
    values[at("p1")] = LaurentPoly::one_minus_exp(&w(&[1, 1]));
    values[at("p2")] = LaurentPoly::one_minus_exp(&w(&[1, -1])).mul(&LaurentPoly::exp(&w(&[0, 1])));
    EquivClass::new(values)
}

pub fn compute_basis(g: &GkmGraph, mode: Mode) -> Result<Vec<Class>, CliError> {
    Ok(match mode {
        Mode::KTheory => icanonical_basis_k(g)?.into_iter().map(Class::K).collect(),
        Mode::Cohomology => icanonical_basis_h(g)?.into_iter().map(Class::H).collect(),
    })
}

pub fn poincare_duals(g: &GkmGraph, mode: Mode) -> Vec<Class> {
    (0..g.len())
        .map(|p| match mode {
            Mode::KTheory => Class::K(poincare_dual_k(g, p)),
            Mode::Cohomology => Class::H(poincare_dual_h(g, p)),
        })
        .collect()
}

pub fn gt_basis(g: &GkmGraph) -> Result<Vec<Class>, CliError> {
    (0..g.len()).map(|p| Ok(Class::H(gt_class(g, p)?))).collect()
}
