//! Planar directed networks and their quantum transport matrices.
//!
//! A transport entry is the sum over directed paths from a source to a sink
//! of the Weyl-ordered monomial of the faces the path leaves on its right.
//! Edge exponents are stored directly ("algebraic" networks) or derived from
//! planar coordinates ("geometric" networks).

mod builders;
mod geometry;

pub use builders::{
    assemble_composite, build_bottleneck, build_composite, build_ladder, build_triangle,
    default_ladder, f_rp, hat_block_transport, hat_matrix, hat_inverse_power, CompositeBlocks,
    FrpMode, LadderSpec,
};
pub use geometry::{Geometry, PlanarBuilder};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncmat::QMatrix;
use crate::qalg::{QElem, SkewForm};

/// Directed edge with the face-multiset it contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub exponent: Vec<i64>,
}

/// Planar directed network with one quantum-torus generator per face.
#[derive(Clone, Debug)]
pub struct Network {
    form: Arc<SkewForm>,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    geometry: Option<Geometry>,
    max_cycle_uses: Option<usize>,
}

/// JSON-compatible network description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub generators: usize,
    pub epsilon2: Vec<Vec<i64>>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeFile>,
    pub sources: Vec<String>,
    pub sinks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cycle_uses: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub from: String,
    pub to: String,
    /// Omitted exponents are derived from the geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub coords: BTreeMap<String, [f64; 2]>,
    pub face_markers: Vec<[f64; 2]>,
    /// Boundary cycle in counterclockwise order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<String>,
}

impl Network {
    /// Validate and assemble a network.
    pub fn new(
        form: SkewForm,
        vertices: Vec<String>,
        edges: Vec<Edge>,
        sources: Vec<usize>,
        sinks: Vec<usize>,
        geometry: Option<Geometry>,
        max_cycle_uses: Option<usize>,
    ) -> Result<Self> {
        let nv = vertices.len();
        let n = form.rank();
        let invalid = |m: String| Err(Error::InvalidNetwork(m));
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return invalid(format!("duplicate vertex {v}"));
            }
        }
        for e in &edges {
            if e.from >= nv || e.to >= nv {
                return invalid("edge endpoint out of range".into());
            }
            if e.from == e.to {
                return invalid(format!("loop edge at {}", vertices[e.from]));
            }
            if e.exponent.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "edge {}->{} has exponent of length {}, expected {n}",
                    vertices[e.from],
                    vertices[e.to],
                    e.exponent.len()
                )));
            }
        }
        for &s in sources.iter().chain(&sinks) {
            if s >= nv {
                return invalid("boundary vertex out of range".into());
            }
        }
        for s in &sources {
            if sinks.contains(s) {
                return invalid(format!("{} is both a source and a sink", vertices[*s]));
            }
            if edges.iter().any(|e| e.to == *s) {
                return invalid(format!("source {} has an incoming edge", vertices[*s]));
            }
        }
        for t in &sinks {
            if edges.iter().any(|e| e.from == *t) {
                return invalid(format!("sink {} has an outgoing edge", vertices[*t]));
            }
        }
        if let Some(g) = &geometry {
            if g.coords.len() != nv {
                return invalid("geometry must give coordinates for every vertex".into());
            }
        }
        Ok(Self {
            form: Arc::new(form),
            vertices,
            edges,
            sources,
            sinks,
            geometry,
            max_cycle_uses,
        })
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn source_labels(&self) -> Vec<&str> {
        self.sources.iter().map(|&i| self.vertices[i].as_str()).collect()
    }

    pub fn sink_labels(&self) -> Vec<&str> {
        self.sinks.iter().map(|&i| self.vertices[i].as_str()).collect()
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    pub fn max_cycle_uses(&self) -> Option<usize> {
        self.max_cycle_uses
    }

    pub fn with_max_cycle_uses(mut self, k: Option<usize>) -> Self {
        self.max_cycle_uses = k;
        self
    }

    /// Same network over a different exchange form (used by negative controls).
    pub fn with_form(&self, form: SkewForm) -> Result<Self> {
        if form.rank() != self.form.rank() {
            return Err(Error::DimensionMismatch("replacement form has another rank".into()));
        }
        let mut out = self.clone();
        out.form = Arc::new(form);
        Ok(out)
    }

    fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (k, e) in self.edges.iter().enumerate() {
            out[e.from].push(k);
        }
        out
    }

    /// Topological order of all vertices, or `None` if there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let nv = self.vertices.len();
        let mut indeg = vec![0usize; nv];
        for e in &self.edges {
            indeg[e.to] += 1;
        }
        let out = self.out_edges();
        let mut stack: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
        stack.reverse();
        let mut order = Vec::with_capacity(nv);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &k in &out[v] {
                let w = self.edges[k].to;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        (order.len() == nv).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Transport from source `a` to sink `c` (indices into the ordered lists).
    pub fn transport_entry(&self, a: usize, c: usize) -> Result<QElem> {
        if a >= self.sources.len() || c >= self.sinks.len() {
            return Err(Error::DimensionMismatch(format!(
                "source {a} / sink {c} out of range ({} sources, {} sinks)",
                self.sources.len(),
                self.sinks.len()
            )));
        }
        let row = self.transport_from_source(a)?;
        Ok(row[c].clone())
    }

    /// Transport entries from one source to every sink.
    fn transport_from_source(&self, a: usize) -> Result<Vec<QElem>> {
        match self.topological_order() {
            Some(order) => Ok(self.acyclic_sweep(a, &order)),
            None => self.cyclic_enumeration(a),
        }
    }

    fn acyclic_sweep(&self, a: usize, order: &[usize]) -> Vec<QElem> {
        let out = self.out_edges();
        let mut val: Vec<Option<QElem>> = vec![None; self.vertices.len()];
        val[self.sources[a]] = Some(QElem::one(&self.form));
        for &v in order {
            let Some(x) = val[v].take() else { continue };
            for &k in &out[v] {
                let e = &self.edges[k];
                let y = x.shifted(&e.exponent);
                match &mut val[e.to] {
                    Some(acc) => acc.add_assign_scaled(&y, 1),
                    slot @ None => *slot = Some(y),
                }
            }
            val[v] = Some(x);
        }
        self.sinks
            .iter()
            .map(|&t| val[t].clone().unwrap_or_else(|| QElem::zero(&self.form)))
            .collect()
    }

    fn cyclic_enumeration(&self, a: usize) -> Result<Vec<QElem>> {
        let geom = self.geometry.as_ref().ok_or(Error::CyclicWithoutGeometry)?;
        if geom.boundary.is_empty() {
            return Err(Error::CyclicWithoutGeometry);
        }
        let bound = self.max_cycle_uses.ok_or(Error::TruncationRequired)?;
        let out = self.out_edges();
        let sink_pos: HashMap<usize, usize> =
            self.sinks.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut result = vec![QElem::zero(&self.form); self.sinks.len()];
        let mut uses = vec![0usize; self.edges.len()];
        let mut path = vec![self.sources[a]];
        let mut acc = vec![0i64; self.form.rank()];
        let src = self.sources[a];
        let mut err = None;
        self.dfs(
            src, &out, &sink_pos, bound, &mut uses, &mut path, &mut acc, &mut result, geom, &mut err,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(result),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        v: usize,
        out: &[Vec<usize>],
        sink_pos: &HashMap<usize, usize>,
        bound: usize,
        uses: &mut [usize],
        path: &mut Vec<usize>,
        acc: &mut Vec<i64>,
        result: &mut [QElem],
        geom: &Geometry,
        err: &mut Option<Error>,
    ) {
        if err.is_some() {
            return;
        }
        if let Some(&c) = sink_pos.get(&v) {
            match geom.path_sign(path) {
                Ok(sign) => {
                    let mono = QElem::weyl(acc, &self.form).expect("exponent length checked");
                    result[c].add_assign_scaled(&mono, sign);
                }
                Err(e) => *err = Some(e),
            }
            return;
        }
        for &k in &out[v] {
            if uses[k] >= bound {
                continue;
            }
            let e = &self.edges[k];
            uses[k] += 1;
            path.push(e.to);
            for (x, y) in acc.iter_mut().zip(&e.exponent) {
                *x += y;
            }
            self.dfs(e.to, out, sink_pos, bound, uses, path, acc, result, geom, err);
            for (x, y) in acc.iter_mut().zip(&e.exponent) {
                *x -= y;
            }
            path.pop();
            uses[k] -= 1;
        }
    }

    /// `#sinks x #sources` matrix with entry `(i, j)` the transport from
    /// source `j` to sink `i`.
    pub fn transport_matrix(&self) -> Result<QMatrix> {
        let mut m = QMatrix::zeros(self.sinks.len(), self.sources.len(), &self.form);
        for j in 0..self.sources.len() {
            let col = self.transport_from_source(j)?;
            for (i, e) in col.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        Ok(m)
    }

    /// Parse the JSON network format.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: NetworkFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn from_file(file: NetworkFile) -> Result<Self> {
        if file.epsilon2.len() != file.generators {
            return Err(Error::DimensionMismatch(format!(
                "epsilon2 has {} rows, generators = {}",
                file.epsilon2.len(),
                file.generators
            )));
        }
        let form = SkewForm::new(file.epsilon2)?;
        let index: HashMap<&str, usize> =
            file.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let look = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidNetwork(format!("unknown vertex {name}")))
        };
        let geometry = match &file.geometry {
            Some(g) => {
                let mut coords = Vec::with_capacity(file.vertices.len());
                for v in &file.vertices {
                    let c = g.coords.get(v).ok_or_else(|| {
                        Error::InvalidNetwork(format!("no coordinates for vertex {v}"))
                    })?;
                    coords.push(*c);
                }
                if g.face_markers.len() != file.generators {
                    return Err(Error::DimensionMismatch(format!(
                        "{} face markers for {} generators",
                        g.face_markers.len(),
                        file.generators
                    )));
                }
                let boundary =
                    g.boundary.iter().map(|b| look(b)).collect::<Result<Vec<_>>>()?;
                Some(Geometry { coords, face_markers: g.face_markers.clone(), boundary })
            }
            None => None,
        };
        let sources = file.sources.iter().map(|s| look(s)).collect::<Result<Vec<_>>>()?;
        let sinks = file.sinks.iter().map(|s| look(s)).collect::<Result<Vec<_>>>()?;
        let mut pairs = Vec::with_capacity(file.edges.len());
        for e in &file.edges {
            pairs.push((look(&e.from)?, look(&e.to)?));
        }
        let derived = if file.edges.iter().any(|e| e.exponent.is_none()) {
            let g = geometry.as_ref().ok_or_else(|| {
                Error::InvalidNetwork(
                    "edges without exponents need a geometry to derive them from".into(),
                )
            })?;
            Some(g.derive_exponents(&pairs, &sources)?)
        } else {
            None
        };
        let edges = file
            .edges
            .iter()
            .zip(&pairs)
            .enumerate()
            .map(|(k, (e, &(from, to)))| Edge {
                from,
                to,
                exponent: match &e.exponent {
                    Some(x) => x.clone(),
                    None => derived.as_ref().expect("derived above")[k].clone(),
                },
            })
            .collect();
        Network::new(form, file.vertices, edges, sources, sinks, geometry, file.max_cycle_uses)
    }

    pub fn to_file(&self) -> NetworkFile {
        let name = |i: usize| self.vertices[i].clone();
        NetworkFile {
            generators: self.form.rank(),
            epsilon2: self.form.rows(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    from: name(e.from),
                    to: name(e.to),
                    exponent: Some(e.exponent.clone()),
                })
                .collect(),
            sources: self.sources.iter().map(|&i| name(i)).collect(),
            sinks: self.sinks.iter().map(|&i| name(i)).collect(),
            geometry: self.geometry.as_ref().map(|g| GeometryFile {
                coords: self
                    .vertices
                    .iter()
                    .cloned()
                    .zip(g.coords.iter().copied())
                    .collect(),
                face_markers: g.face_markers.clone(),
                boundary: g.boundary.iter().map(|&i| name(i)).collect(),
            }),
            max_cycle_uses: self.max_cycle_uses,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("network serializes")
    }
}

/// The four blocks of a transport matrix: rows split `(m | n2)` (sinks),
/// columns split `(n1 | m)` (sources).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTransport {
    pub n1: usize,
    pub m: usize,
    pub n2: usize,
    /// `m x n1`
    pub m11: QMatrix,
    /// `m x m`
    pub m12: QMatrix,
    /// `n2 x n1`
    pub m21: QMatrix,
    /// `n2 x m`
    pub m22: QMatrix,
}

impl BlockTransport {
    pub fn split(mat: &QMatrix, n1: usize, m: usize, n2: usize) -> Result<Self> {
        if mat.rows() != m + n2 || mat.cols() != n1 + m {
            return Err(Error::DimensionMismatch(format!(
                "a {}x{} matrix does not split as ({n1}, {m}, {n2})",
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Self {
            n1,
            m,
            n2,
            m11: mat.submatrix(0, m, 0, n1)?,
            m12: mat.submatrix(0, m, n1, m)?,
            m21: mat.submatrix(m, n2, 0, n1)?,
            m22: mat.submatrix(m, n2, n1, m)?,
        })
    }

    /// Validate block shapes and forms.
    pub fn from_blocks(m11: QMatrix, m12: QMatrix, m21: QMatrix, m22: QMatrix) -> Result<Self> {
        let (m, n1) = (m11.rows(), m11.cols());
        let n2 = m21.rows();
        if m12.rows() != m || m12.cols() != m || m21.cols() != n1 || m22.rows() != n2 || m22.cols() != m
        {
            return Err(Error::DimensionMismatch("blocks do not form a transport matrix".into()));
        }
        for b in [&m12, &m21, &m22] {
            if **b.form() != **m11.form() {
                return Err(Error::FormMismatch);
            }
        }
        Ok(Self { n1, m, n2, m11, m12, m21, m22 })
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        self.m11.form()
    }

    pub fn assemble(&self) -> QMatrix {
        QMatrix::from_blocks(&self.m11, &self.m12, &self.m21, &self.m22)
            .expect("block shapes are validated on construction")
    }

    /// Every split `(n1, m, n2)` with all parts positive for a
    /// `rows x cols` transport matrix.
    pub fn admissible_splits(rows: usize, cols: usize) -> Vec<(usize, usize, usize)> {
        (1..cols.min(rows))
            .map(|m| (cols - m, m, rows - m))
            .filter(|&(n1, _, n2)| n1 >= 1 && n2 >= 1)
            .collect()
    }
}
