//! JSON file formats.
//!
//! Polynomials are arrays of `[coefficient, exponent]` pairs with the
//! coefficient as a decimal string, so any integer width survives. Exponents
//! are weight vectors in K-mode and multidegrees in H-mode.

use gkm_core::equivariant::{EquivClass, StructureConstants};
use gkm_core::gkm::{GkmGraph, ToricInput};
use gkm_core::symcore::{LaurentPoly, PolyH, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::Mode;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Format(msg.into())
}

fn integer(v: &Value) -> Result<BigInt, CliError> {
    let s = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(bad(format!("expected an integer, got {v}"))),
    };
    s.trim().parse().map_err(|_| bad(format!("not an integer: {s:?}")))
}

fn rational(v: &Value) -> Result<BigRational, CliError> {
    let s = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(bad(format!("expected a rational, got {v}"))),
    };
    s.trim().parse().map_err(|_| bad(format!("not a rational: {s:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

pub fn rational_to_json(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

/// Machine-size integers as JSON numbers, anything wider as a string.
pub fn int_to_json(c: &BigInt) -> Value {
    c.to_i64().map_or_else(|| Value::String(c.to_string()), Value::from)
}

pub fn weight_to_json(w: &Weight) -> Value {
    Value::Array(w.coords().iter().map(int_to_json).collect())
}

pub fn parse_input(v: &Value) -> Result<ToricInput, CliError> {
    let top = object(v, "input")?;
    let rank = top
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("\"rank\" must be a positive integer"))? as usize;
    let mut vertices = Vec::new();
    for vert in array(top.get("vertices").unwrap_or(&Value::Null), "\"vertices\"")? {
        let o = object(vert, "vertex")?;
        let id = o
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("vertex \"id\" must be a string"))?;
        let psi = array(o.get("psi").unwrap_or(&Value::Null), "vertex \"psi\"")?
            .iter()
            .map(rational)
            .collect::<Result<Vec<_>, _>>()?;
        vertices.push((id.to_string(), psi));
    }
    let edges = match top.get("edges") {
        None | Some(Value::Null) => None,
        Some(e) => Some(
            array(e, "\"edges\"")?
                .iter()
                .map(|pair| match pair.as_array().map(Vec::as_slice) {
                    Some([Value::String(a), Value::String(b)]) => Ok((a.clone(), b.clone())),
                    _ => Err(bad("each edge must be a pair of vertex ids")),
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let xi = match top.get("xi") {
        None | Some(Value::Null) => None,
        Some(x) => Some(array(x, "\"xi\"")?.iter().map(integer).collect::<Result<Vec<_>, _>>()?),
    };
    Ok(ToricInput { rank, vertices, edges, xi })
}

pub fn input_to_json(input: &ToricInput) -> Value {
    let mut top = Map::new();
    top.insert("rank".into(), json!(input.rank));
    top.insert(
        "vertices".into(),
        Value::Array(
            input
                .vertices
                .iter()
                .map(|(id, psi)| json!({"id": id, "psi": psi.iter().map(rational_to_json).collect::<Vec<_>>()}))
                .collect(),
        ),
    );
    if let Some(edges) = &input.edges {
        top.insert("edges".into(), json!(edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>()));
    }
    if let Some(xi) = &input.xi {
        top.insert("xi".into(), Value::Array(xi.iter().map(int_to_json).collect()));
    }
    Value::Object(top)
}

/// A polynomial in whichever ring the run uses.
#[derive(Clone, Debug, PartialEq)]
pub enum Poly {
    K(LaurentPoly),
    H(PolyH),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Class {
    K(EquivClass<LaurentPoly>),
    H(EquivClass<PolyH>),
}

impl Poly {
    pub fn to_json(&self) -> Value {
        match self {
            Poly::K(p) => Value::Array(
                p.terms()
                    .map(|(e, c)| json!([c.to_string(), weight_to_json(e)]))
                    .collect(),
            ),
            Poly::H(p) => Value::Array(p.terms().map(|(d, c)| json!([c.to_string(), d])).collect()),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Poly::K(p) => p.to_string(),
            Poly::H(p) => p.to_string(),
        }
    }

    pub fn from_json(v: &Value, mode: Mode, rank: usize) -> Result<Self, CliError> {
        let mut k = Vec::new();
        let mut h = Vec::new();
        for term in array(v, "polynomial")? {
            let [c, e] = term
                .as_array()
                .map(Vec::as_slice)
                .and_then(|s| <&[Value; 2]>::try_from(s).ok())
                .ok_or_else(|| bad("each term must be [coefficient, exponent]"))?;
            let exp = array(e, "exponent")?;
            if exp.len() != rank {
                return Err(bad(format!("exponent {e} has length {}, expected {rank}", exp.len())));
            }
            match mode {
                Mode::KTheory => {
                    let exp = exp.iter().map(integer).collect::<Result<Vec<_>, _>>()?;
                    k.push((Weight::new(exp), integer(c)?));
                }
                Mode::Cohomology => {
                    let exp = exp
                        .iter()
                        .map(|d| d.as_u64().and_then(|d| u32::try_from(d).ok()))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| bad(format!("degrees must be non-negative integers: {e}")))?;
                    h.push((exp, rational(c)?));
                }
            }
        }
        Ok(match mode {
            Mode::KTheory => Poly::K(LaurentPoly::from_terms(rank, k)),
            Mode::Cohomology => Poly::H(PolyH::from_terms(rank, h)),
        })
    }
}

impl Class {
    pub fn mode(&self) -> Mode {
        match self {
            Class::K(_) => Mode::KTheory,
            Class::H(_) => Mode::Cohomology,
        }
    }

    pub fn value(&self, p: usize) -> Poly {
        match self {
            Class::K(c) => Poly::K(c.value(p).clone()),
            Class::H(c) => Poly::H(c.value(p).clone()),
        }
    }

    /// `{ "<vertexId>": terms, … }` in ≺ order.
    pub fn values_to_json(&self, g: &GkmGraph) -> Value {
        let mut m = Map::new();
        for (p, v) in g.vertices().iter().enumerate() {
            m.insert(v.id.clone(), self.value(p).to_json());
        }
        Value::Object(m)
    }

    pub fn to_json(&self, g: &GkmGraph) -> Value {
        json!({ "class": self.values_to_json(g) })
    }

    pub fn values_from_json(v: &Value, g: &GkmGraph, mode: Mode) -> Result<Self, CliError> {
        let m = object(v, "class")?;
        for id in m.keys() {
            if g.index_of(id).is_none() {
                return Err(CliError::Graph(gkm_core::gkm::GraphError::UnknownVertex(id.clone())));
            }
        }
        let mut polys = Vec::with_capacity(g.len());
        for fp in g.vertices() {
            let poly = match m.get(&fp.id) {
                Some(t) => Poly::from_json(t, mode, g.rank())?,
                None => Poly::from_json(&json!([]), mode, g.rank())?,
            };
            polys.push(poly);
        }
        Ok(match mode {
            Mode::KTheory => Class::K(EquivClass::new(
                polys.into_iter().map(|p| match p { Poly::K(p) => p, Poly::H(_) => unreachable!() }).collect(),
            )),
            Mode::Cohomology => Class::H(EquivClass::new(
                polys.into_iter().map(|p| match p { Poly::H(p) => p, Poly::K(_) => unreachable!() }).collect(),
            )),
        })
    }

    pub fn from_json(v: &Value, g: &GkmGraph, mode: Mode) -> Result<Self, CliError> {
        let inner = object(v, "class file")?
            .get("class")
            .ok_or_else(|| bad("class file needs a \"class\" key"))?;
        Self::values_from_json(inner, g, mode)
    }
}

/// `{ "mode": …, "basis": { "<p>": { "<q>": terms } } }`.
pub fn basis_to_json(g: &GkmGraph, mode: Mode, basis: &[Class]) -> Value {
    let mut m = Map::new();
    for (p, c) in basis.iter().enumerate() {
        m.insert(g.vertex(p).id.clone(), c.values_to_json(g));
    }
    json!({ "mode": mode.name(), "basis": m })
}

pub fn basis_from_json(v: &Value, g: &GkmGraph) -> Result<(Mode, Vec<Class>), CliError> {
    let top = object(v, "basis file")?;
    let mode = top
        .get("mode")
        .and_then(Value::as_str)
        .and_then(Mode::from_name)
        .ok_or_else(|| bad("basis file needs \"mode\": \"ktheory\" or \"cohomology\""))?;
    let m = object(top.get("basis").unwrap_or(&Value::Null), "\"basis\"")?;
    if m.len() != g.len() {
        return Err(bad(format!("basis has {} classes, graph has {} vertices", m.len(), g.len())));
    }
    let basis = g
        .vertices()
        .iter()
        .map(|fp| {
            let c = m.get(&fp.id).ok_or_else(|| bad(format!("basis is missing vertex {}", fp.id)))?;
            Class::values_from_json(c, g, mode)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((mode, basis))
}

/// Triples `[p, q, r, terms]` for `τ_p·τ_q = Σ c_{pq}^r τ_r`, `p ≤ q`.
pub fn structure_to_json<R>(
    g: &GkmGraph,
    table: &StructureConstants<R>,
    wrap: impl Fn(&R) -> Poly,
) -> Value {
    let id = |p: usize| g.vertex(p).id.clone();
    Value::Array(
        table
            .table
            .iter()
            .map(|(&(p, q, r), c)| json!([id(p), id(q), id(r), wrap(c).to_json()]))
            .collect(),
    )
}

pub fn error_to_json(e: &CliError) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } })
}
