//! Self-dual quivers: structure, validation, dimension counts and the
//! bilinear data (Euler form, antisymmetrized form, sd virtual dimension).

use crate::classes::{DimVector, SdClass};
use crate::oracle::Calibration;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, thiserror::Error)]
pub enum QuiverError {
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("sign for {name:?} must be +1 or -1, got {value}")]
    BadSign { name: String, value: i64 },
    #[error("class {class} has {got} entries, quiver has {expected} vertices")]
    DimensionMismatch { class: String, got: usize, expected: usize },
    #[error("{class} is not a self-dual class: {reason}")]
    InvalidSdClass { class: String, reason: String },
    #[error("zero dimension vector has no slope")]
    ZeroClass,
    #[error("quiver {0:?} is uncalibrated; run the oracle calibration first")]
    Uncalibrated(String),
    #[error("quiver {0:?} is already calibrated")]
    AlreadyCalibrated(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Orbit of the vertex involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrbit {
    Pair(usize, usize),
    /// Fixed vertex with its sign u(i).
    Fixed(usize, i8),
}

/// Orbit of the edge involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrbit {
    Pair(usize, usize),
    /// Fixed edge with the sign v(a)·u(t(a)).
    Fixed(usize, i8),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexInvolution { vertex: String },
    EdgeInvolution { edge: String },
    Contravariance { edge: String },
    VertexSign { vertex: String },
    EdgeSign { edge: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexInvolution { vertex } => {
                write!(f, "vertex involution is not an involution at {vertex}")
            }
            Violation::EdgeInvolution { edge } => {
                write!(f, "edge involution is not an involution at {edge}")
            }
            Violation::Contravariance { edge } => {
                write!(f, "s({edge}^∨) ≠ t({edge})^∨ or t({edge}^∨) ≠ s({edge})^∨")
            }
            Violation::VertexSign { vertex } => write!(f, "u({vertex}) ≠ u({vertex}^∨)"),
            Violation::EdgeSign { edge } => {
                write!(f, "v({edge})·v({edge}^∨) ≠ u(s({edge}))·u(t({edge}))")
            }
        }
    }
}

#[derive(Debug)]
pub struct SelfDualQuiver {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_dual: Vec<usize>,
    edge_dual: Vec<usize>,
    u: Vec<i8>,
    v: Vec<i8>,
    calibration: OnceLock<Calibration>,
}

impl Clone for SelfDualQuiver {
    fn clone(&self) -> Self {
        SelfDualQuiver {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            vertex_dual: self.vertex_dual.clone(),
            edge_dual: self.edge_dual.clone(),
            u: self.u.clone(),
            v: self.v.clone(),
            calibration: self.calibration.clone(),
        }
    }
}

impl PartialEq for SelfDualQuiver {
    /// Structural equality; the calibration cache is ignored.
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name
            && self.vertices == o.vertices
            && self.edges == o.edges
            && self.vertex_dual == o.vertex_dual
            && self.edge_dual == o.edge_dual
            && self.u == o.u
            && self.v == o.v
    }
}

impl SelfDualQuiver {
    /// Builds a quiver without checking the self-dual axioms; see `validate`.
    /// Index vectors must be in range.
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<String>,
        edges: Vec<Edge>,
        vertex_dual: Vec<usize>,
        edge_dual: Vec<usize>,
        u: Vec<i8>,
        v: Vec<i8>,
    ) -> Self {
        let n = vertices.len();
        assert_eq!(vertex_dual.len(), n);
        assert_eq!(u.len(), n);
        assert_eq!(edge_dual.len(), edges.len());
        assert_eq!(v.len(), edges.len());
        assert!(vertex_dual.iter().all(|&j| j < n));
        assert!(edge_dual.iter().all(|&b| b < edges.len()));
        assert!(edges.iter().all(|e| e.source < n && e.target < n));
        SelfDualQuiver {
            name: name.into(),
            vertices,
            edges,
            vertex_dual,
            edge_dual,
            u,
            v,
            calibration: OnceLock::new(),
        }
    }

    /// One vertex, no edges, sign u.
    pub fn point(u: i8) -> Self {
        let name = if u > 0 { "point+" } else { "point-" };
        SelfDualQuiver::new(name, vec!["i".into()], vec![], vec![0], vec![], vec![u], vec![])
    }

    /// Two vertices i, j swapped by the involution, two edges i → j each fixed,
    /// with vertex sign u and edge signs v1, v2.
    pub fn a1_tilde(u: i8, v1: i8, v2: i8) -> Self {
        let s = |x: i8| if x > 0 { '+' } else { '-' };
        let edge = |name: &str| Edge { name: name.into(), source: 0, target: 1 };
        SelfDualQuiver::new(
            format!("A1~{}{}{}", s(u), s(v1), s(v2)),
            vec!["i".into(), "j".into()],
            vec![edge("a"), edge("b")],
            vec![1, 0],
            vec![0, 1],
            vec![u, u],
            vec![v1, v2],
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self, QuiverError> {
        let file: QuiverFile = serde_json::from_str(s)?;
        file.build()
    }

    pub fn to_json(&self) -> String {
        let mut inv = Maps::default();
        let mut signs = Maps::default();
        for (i, &j) in self.vertex_dual.iter().enumerate() {
            if i != j {
                inv.vertices.insert(self.vertices[i].clone(), self.vertices[j].clone());
            }
            signs.vertices.insert(self.vertices[i].clone(), self.u[i] as i64);
        }
        for (a, &b) in self.edge_dual.iter().enumerate() {
            if a != b {
                inv.edges.insert(self.edges[a].name.clone(), self.edges[b].name.clone());
            }
            signs.edges.insert(self.edges[a].name.clone(), self.v[a] as i64);
        }
        let file = QuiverFile {
            name: Some(self.name.clone()),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    name: e.name.clone(),
                    from: self.vertices[e.source].clone(),
                    to: self.vertices[e.target].clone(),
                })
                .collect(),
            involution: inv,
            signs,
        };
        serde_json::to_string_pretty(&file).expect("quiver serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn vertex_dual(&self, i: usize) -> usize {
        self.vertex_dual[i]
    }

    pub fn edge_dual(&self, a: usize) -> usize {
        self.edge_dual[a]
    }

    pub fn u(&self, i: usize) -> i8 {
        self.u[i]
    }

    pub fn v(&self, a: usize) -> i8 {
        self.v[a]
    }

    /// Every violated self-dual axiom; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let vn = |i: usize| self.vertices[i].clone();
        let en = |a: usize| self.edges[a].name.clone();
        for i in 0..self.num_vertices() {
            if self.vertex_dual[self.vertex_dual[i]] != i {
                out.push(Violation::VertexInvolution { vertex: vn(i) });
            }
        }
        for a in 0..self.edges.len() {
            if self.edge_dual[self.edge_dual[a]] != a {
                out.push(Violation::EdgeInvolution { edge: en(a) });
            }
        }
        for (a, e) in self.edges.iter().enumerate() {
            let d = &self.edges[self.edge_dual[a]];
            if d.source != self.vertex_dual[e.target] || d.target != self.vertex_dual[e.source] {
                out.push(Violation::Contravariance { edge: en(a) });
            }
        }
        for i in 0..self.num_vertices() {
            let j = self.vertex_dual[i];
            if i <= j && self.u[i] != self.u[j] {
                out.push(Violation::VertexSign { vertex: vn(i) });
            }
        }
        for (a, e) in self.edges.iter().enumerate() {
            let b = self.edge_dual[a];
            if a <= b && self.v[a] * self.v[b] != self.u[e.source] * self.u[e.target] {
                out.push(Violation::EdgeSign { edge: en(a) });
            }
        }
        out
    }

    pub fn vertex_orbits(&self) -> Vec<VertexOrbit> {
        (0..self.num_vertices())
            .filter_map(|i| {
                let j = self.vertex_dual[i];
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => Some(VertexOrbit::Pair(i, j)),
                    std::cmp::Ordering::Equal => Some(VertexOrbit::Fixed(i, self.u[i])),
                    std::cmp::Ordering::Greater => None,
                }
            })
            .collect()
    }

    pub fn edge_orbits(&self) -> Vec<EdgeOrbit> {
        (0..self.edges.len())
            .filter_map(|a| {
                let b = self.edge_dual[a];
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => Some(EdgeOrbit::Pair(a, b)),
                    std::cmp::Ordering::Equal => {
                        Some(EdgeOrbit::Fixed(a, self.v[a] * self.u[self.edges[a].target]))
                    }
                    std::cmp::Ordering::Greater => None,
                }
            })
            .collect()
    }

    fn check_len(&self, a: &DimVector) -> Result<(), QuiverError> {
        if a.len() != self.num_vertices() {
            return Err(QuiverError::DimensionMismatch {
                class: a.to_string(),
                got: a.len(),
                expected: self.num_vertices(),
            });
        }
        Ok(())
    }

    pub fn dim_vector(&self, entries: &[u32]) -> Result<DimVector, QuiverError> {
        let d = DimVector::new(entries.to_vec());
        self.check_len(&d)?;
        Ok(d)
    }

    pub fn sd_class(&self, entries: &[u32]) -> Result<SdClass, QuiverError> {
        self.to_sd_class(&DimVector::new(entries.to_vec()))
    }

    pub fn to_sd_class(&self, d: &DimVector) -> Result<SdClass, QuiverError> {
        self.check_len(d)?;
        let bad = |reason: String| QuiverError::InvalidSdClass { class: d.to_string(), reason };
        for i in 0..self.num_vertices() {
            let j = self.vertex_dual[i];
            if d[i] != d[j] {
                return Err(bad(format!("entries at {} and its dual differ", self.vertices[i])));
            }
            if i == j && self.u[i] < 0 && d[i] % 2 == 1 {
                return Err(bad(format!("odd entry at symplectic vertex {}", self.vertices[i])));
            }
        }
        Ok(SdClass(d.clone()))
    }

    /// Valid self-dual classes with total ≤ bound, including zero, in graded lex order.
    pub fn sd_classes(&self, bound: u32) -> Vec<SdClass> {
        let n = self.num_vertices();
        std::iter::once(DimVector::zero(n))
            .chain(DimVector::all_up_to(n, bound))
            .filter_map(|d| self.to_sd_class(&d).ok())
            .collect()
    }

    pub fn dual_vector(&self, a: &DimVector) -> DimVector {
        DimVector::new((0..a.len()).map(|i| a[self.vertex_dual[i]]).collect())
    }

    /// (dim V_α, dim G_α).
    pub fn dims(&self, a: &DimVector) -> (i64, i64) {
        let dv = self.edges.iter().map(|e| a[e.source] as i64 * a[e.target] as i64).sum();
        let dg = a.entries().iter().map(|&x| (x as i64) * (x as i64)).sum();
        (dv, dg)
    }

    /// (dim V^sd_θ, dim G^sd_θ).
    pub fn sd_dims(&self, t: &SdClass) -> (i64, i64) {
        let t = |i: usize| t[i] as i64;
        let mut dv = 0;
        for o in self.edge_orbits() {
            dv += match o {
                EdgeOrbit::Pair(a, _) => t(self.edges[a].source) * t(self.edges[a].target),
                EdgeOrbit::Fixed(a, s) => {
                    let x = t(self.edges[a].target);
                    if s > 0 {
                        x * (x + 1) / 2
                    } else {
                        x * (x - 1) / 2
                    }
                }
            };
        }
        let mut dg = 0;
        for o in self.vertex_orbits() {
            dg += match o {
                VertexOrbit::Pair(i, _) => t(i) * t(i),
                VertexOrbit::Fixed(i, s) if s > 0 => t(i) * (t(i) - 1) / 2,
                VertexOrbit::Fixed(i, _) => t(i) * (t(i) + 1) / 2,
            };
        }
        (dv, dg)
    }

    /// χ(α,β) = Σ α_i β_i − Σ_a α_{s(a)} β_{t(a)}.
    pub fn euler_form(&self, a: &DimVector, b: &DimVector) -> i64 {
        let diag: i64 = (0..a.len()).map(|i| a[i] as i64 * b[i] as i64).sum();
        let off: i64 = self.edges.iter().map(|e| a[e.source] as i64 * b[e.target] as i64).sum();
        diag - off
    }

    pub fn calibration(&self) -> Option<&Calibration> {
        self.calibration.get()
    }

    /// Installs a calibration. Only the first call succeeds.
    pub fn set_calibration(&self, c: Calibration) -> Result<(), QuiverError> {
        self.calibration.set(c).map_err(|_| QuiverError::AlreadyCalibrated(self.name.clone()))
    }

    /// Runs the oracle calibration if none is cached.
    pub fn ensure_calibrated(&self) -> Result<&Calibration, crate::oracle::CalibrationError> {
        if let Some(c) = self.calibration.get() {
            return Ok(c);
        }
        let report = crate::oracle::calibrate_signs(self, crate::oracle::DEFAULT_CALIBRATION_BOUND)?;
        let _ = self.calibration.set(report.calibration);
        Ok(self.calibration.get().expect("just set"))
    }

    pub fn forms(&self) -> Result<Forms<'_>, QuiverError> {
        let cal = self.calibration.get().ok_or_else(|| QuiverError::Uncalibrated(self.name.clone()))?;
        Ok(Forms::new(self, cal))
    }

    pub fn antisym_a(&self, a: &DimVector, b: &DimVector) -> Result<i64, QuiverError> {
        Ok(self.forms()?.a(a, b))
    }

    pub fn sd_vdim_b(&self, a: &DimVector, t: &SdClass) -> Result<HalfInt, QuiverError> {
        Ok(HalfInt(self.forms()?.b_doubled(a, t.as_dim())))
    }
}

/// Exact half-integer stored as its double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn to_integer(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

/// The calibrated bilinear data of a quiver: A and B as plain functions.
#[derive(Clone, Copy)]
pub struct Forms<'q> {
    quiver: &'q SelfDualQuiver,
    cal: &'q Calibration,
}

impl<'q> Forms<'q> {
    pub fn new(quiver: &'q SelfDualQuiver, cal: &'q Calibration) -> Self {
        assert_eq!(cal.kappa_doubled().len(), quiver.num_vertices());
        Forms { quiver, cal }
    }

    pub fn quiver(&self) -> &'q SelfDualQuiver {
        self.quiver
    }

    pub fn calibration(&self) -> &'q Calibration {
        self.cal
    }

    /// A(α,β) = orientation·(χ(β,α) − χ(α,β)).
    pub fn a(&self, a: &DimVector, b: &DimVector) -> i64 {
        let q = self.quiver;
        self.cal.orientation() * (q.euler_form(b, a) - q.euler_form(a, b))
    }

    /// 2κ(α).
    pub fn kappa_doubled(&self, a: &DimVector) -> i64 {
        self.cal.kappa_doubled().iter().zip(a.entries()).map(|(k, &x)| k * x as i64).sum()
    }

    /// 2B(α,θ) = 2A(α,θ) + A(α,α^∨) + 2κ(α).
    pub fn b_doubled(&self, a: &DimVector, t: &DimVector) -> i64 {
        2 * self.a(a, t) + self.a(a, &self.quiver.dual_vector(a)) + self.kappa_doubled(a)
    }

    /// B(α,θ); the calibration guarantees integrality.
    pub fn b(&self, a: &DimVector, t: &DimVector) -> i64 {
        let d = self.b_doubled(a, t);
        assert!(d % 2 == 0, "half-integral sd virtual dimension at {a}, {t}");
        d / 2
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeFile>,
    #[serde(default)]
    involution: Maps<String>,
    #[serde(default)]
    signs: Maps<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    name: String,
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Maps<T> {
    #[serde(default)]
    vertices: BTreeMap<String, T>,
    #[serde(default)]
    edges: BTreeMap<String, T>,
}

impl<T> Default for Maps<T> {
    fn default() -> Self {
        Maps { vertices: BTreeMap::new(), edges: BTreeMap::new() }
    }
}

fn sign(name: &str, value: i64) -> Result<i8, QuiverError> {
    match value {
        1 => Ok(1),
        -1 => Ok(-1),
        _ => Err(QuiverError::BadSign { name: name.into(), value }),
    }
}

impl QuiverFile {
    fn build(self) -> Result<SelfDualQuiver, QuiverError> {
        let mut vidx = BTreeMap::new();
        for (k, v) in self.vertices.iter().enumerate() {
            if vidx.insert(v.clone(), k).is_some() {
                return Err(QuiverError::DuplicateName(v.clone()));
            }
        }
        let vlook = |s: &str| vidx.get(s).copied().ok_or_else(|| QuiverError::UnknownVertex(s.into()));
        let mut edges = Vec::new();
        let mut eidx = BTreeMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            if eidx.insert(e.name.clone(), k).is_some() {
                return Err(QuiverError::DuplicateName(e.name.clone()));
            }
            edges.push(Edge { name: e.name.clone(), source: vlook(&e.from)?, target: vlook(&e.to)? });
        }
        let elook = |s: &str| eidx.get(s).copied().ok_or_else(|| QuiverError::UnknownEdge(s.into()));
        let mut vertex_dual: Vec<usize> = (0..self.vertices.len()).collect();
        for (a, b) in &self.involution.vertices {
            vertex_dual[vlook(a)?] = vlook(b)?;
        }
        let mut edge_dual: Vec<usize> = (0..edges.len()).collect();
        for (a, b) in &self.involution.edges {
            edge_dual[elook(a)?] = elook(b)?;
        }
        let mut u = vec![1; self.vertices.len()];
        for (a, &s) in &self.signs.vertices {
            u[vlook(a)?] = sign(a, s)?;
        }
        let mut v = vec![1; edges.len()];
        for (a, &s) in &self.signs.edges {
            v[elook(a)?] = sign(a, s)?;
        }
        Ok(SelfDualQuiver::new(
            self.name.unwrap_or_else(|| "quiver".into()),
            self.vertices,
            edges,
            vertex_dual,
            edge_dual,
            u,
            v,
        ))
    }
}
