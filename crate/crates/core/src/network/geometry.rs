//! Planar bookkeeping: faces, face markers, edge exponents, the quiver form
//! of a trivalent network and the self-intersection sign of a path.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qalg::SkewForm;

use super::{Edge, Network};

const EPS: f64 = 1e-9;

/// Planar embedding data.
#[derive(Clone, Debug, PartialEq)]
pub struct Geometry {
    /// One point per vertex.
    pub coords: Vec<[f64; 2]>,
    /// One interior point per generator.
    pub face_markers: Vec<[f64; 2]>,
    /// Boundary cycle in counterclockwise order; may be empty.
    pub boundary: Vec<usize>,
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `Some(true)` for a proper crossing, `Some(false)` for disjoint segments,
/// `None` when an endpoint touches the other segment.
fn crossing(p: [f64; 2], q: [f64; 2], r: [f64; 2], s: [f64; 2]) -> Option<bool> {
    let d1 = cross(sub(q, p), sub(r, p));
    let d2 = cross(sub(q, p), sub(s, p));
    let d3 = cross(sub(s, r), sub(p, r));
    let d4 = cross(sub(s, r), sub(q, r));
    let proper = d1 * d2 < 0.0 && d3 * d4 < 0.0;
    if proper {
        return Some(true);
    }
    let touch = |d: f64, a: [f64; 2], b: [f64; 2], x: [f64; 2]| {
        d.abs() < EPS
            && x[0] >= a[0].min(b[0]) - EPS
            && x[0] <= a[0].max(b[0]) + EPS
            && x[1] >= a[1].min(b[1]) - EPS
            && x[1] <= a[1].max(b[1]) + EPS
    };
    if touch(d1, p, q, r) || touch(d2, p, q, s) || touch(d3, r, s, p) || touch(d4, r, s, q) {
        None
    } else {
        Some(false)
    }
}

impl Geometry {
    fn boundary_pos(&self, v: usize) -> Option<usize> {
        self.boundary.iter().position(|&b| b == v)
    }

    /// Boundary point just clockwise of the last source; every face marker
    /// is joined to it by a straight cut.
    pub fn junction(&self, sources: &[usize]) -> Result<[f64; 2]> {
        let last = *sources
            .last()
            .ok_or_else(|| Error::InvalidNetwork("network has no sources".into()))?;
        let pos = self.boundary_pos(last).ok_or_else(|| {
            Error::InvalidNetwork("deriving exponents needs the sources on the boundary cycle".into())
        })?;
        let len = self.boundary.len();
        let nb = self.boundary[(pos + len - 1) % len];
        let (a, b) = (self.coords[last], self.coords[nb]);
        Ok([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0])
    }

    /// Exponent of each `(from, to)` edge: for every face marker, the signed
    /// crossing of the edge with the cut from the marker to the junction.
    /// Summed along a path this counts the faces lying to its right.
    pub fn derive_exponents(
        &self,
        edges: &[(usize, usize)],
        sources: &[usize],
    ) -> Result<Vec<Vec<i64>>> {
        let j = self.junction(sources)?;
        let len = self.boundary.len();
        for (f, &p) in self.face_markers.iter().enumerate() {
            for i in 0..len {
                let a = self.coords[self.boundary[i]];
                let b = self.coords[self.boundary[(i + 1) % len]];
                let touches_j = cross(sub(b, a), sub(j, a)).abs() < EPS
                    && dot(sub(j, a), sub(j, b)) <= EPS;
                if touches_j {
                    continue;
                }
                if crossing(p, j, a, b) != Some(false) {
                    return Err(Error::InvalidNetwork(format!(
                        "the cut from face marker {f} leaves the disc before the junction"
                    )));
                }
            }
        }
        let mut out = Vec::with_capacity(edges.len());
        for &(u, w) in edges {
            let (a, b) = (self.coords[u], self.coords[w]);
            let t = sub(b, a);
            let mut vec = vec![0i64; self.face_markers.len()];
            for (f, &p) in self.face_markers.iter().enumerate() {
                match crossing(p, j, a, b) {
                    Some(true) => {
                        let d = sub(j, p);
                        vec[f] = if cross(d, t) > 0.0 { -1 } else { 1 };
                    }
                    Some(false) => {}
                    None => {
                        return Err(Error::InvalidNetwork(format!(
                            "degenerate geometry: the cut from face marker {f} touches an edge end"
                        )))
                    }
                }
            }
            out.push(vec);
        }
        Ok(out)
    }

    /// `(-1)^(self-intersections)` of a vertex path from a source to a sink.
    ///
    /// The path is closed by the clockwise boundary arc back to its source;
    /// the crossing parity of the closed curve is one more than its
    /// rotation number, and the arc adds no crossings.
    pub fn path_sign(&self, path: &[usize]) -> Result<i8> {
        let (s, t) = (path[0], *path.last().expect("nonempty path"));
        let (Some(ps), Some(pt)) = (self.boundary_pos(s), self.boundary_pos(t)) else {
            return Err(Error::CyclicWithoutGeometry);
        };
        let len = self.boundary.len();
        let mut pts: Vec<[f64; 2]> = path.iter().map(|&v| self.coords[v]).collect();
        let mut i = (pt + len - 1) % len;
        while i != ps {
            pts.push(self.coords[self.boundary[i]]);
            i = (i + len - 1) % len;
        }
        pts.dedup_by(|a, b| (a[0] - b[0]).abs() < EPS && (a[1] - b[1]).abs() < EPS);
        let n = pts.len();
        let mut total = 0.0;
        for k in 0..n {
            let e1 = sub(pts[(k + 1) % n], pts[k]);
            let e2 = sub(pts[(k + 2) % n], pts[(k + 1) % n]);
            let (c, d) = (cross(e1, e2), dot(e1, e2));
            if c.abs() < EPS && d < 0.0 {
                return Err(Error::InvalidNetwork("path doubles back on itself".into()));
            }
            total += c.atan2(d);
        }
        let rotation = (total / (2.0 * PI)).round() as i64;
        Ok(if (rotation + 1).rem_euclid(2) == 0 { 1 } else { -1 })
    }
}

/// Incremental construction of a geometric trivalent network whose faces,
/// exchange form and edge exponents are derived from the embedding.
#[derive(Default, Debug, Clone)]
pub struct PlanarBuilder {
    names: Vec<String>,
    coords: Vec<[f64; 2]>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    boundary: Vec<usize>,
}

/// A face of the planar graph: its half-edges in traversal order.
#[derive(Debug, Clone)]
struct Face {
    half_edges: Vec<(usize, usize)>,
    area: f64,
}

impl PlanarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>, x: f64, y: f64) -> usize {
        let name = name.into();
        let id = self.names.len();
        assert!(self.index.insert(name.clone(), id).is_none(), "duplicate vertex {name}");
        self.names.push(name);
        self.coords.push([x, y]);
        id
    }

    pub fn id(&self, name: &str) -> usize {
        self.index[name]
    }

    pub fn edge(&mut self, from: usize, to: usize) {
        self.edges.push((from, to));
    }

    pub fn sources(&mut self, s: Vec<usize>) {
        self.sources = s;
    }

    pub fn sinks(&mut self, s: Vec<usize>) {
        self.sinks = s;
    }

    /// Boundary cycle, counterclockwise.
    pub fn boundary(&mut self, b: Vec<usize>) {
        self.boundary = b;
    }

    fn angle(&self, v: usize, w: usize) -> f64 {
        let d = sub(self.coords[w], self.coords[v]);
        d[1].atan2(d[0])
    }

    /// Neighbours of every vertex in counterclockwise angular order, over the
    /// union of network edges and boundary segments.
    fn rotation_system(&self) -> Vec<Vec<usize>> {
        let n = self.names.len();
        let mut adj = vec![Vec::new(); n];
        let mut link = |a: usize, b: usize| {
            if !adj[a].contains(&b) {
                adj[a].push(b);
            }
            if !adj[b].contains(&a) {
                adj[b].push(a);
            }
        };
        for &(u, w) in &self.edges {
            link(u, w);
        }
        let len = self.boundary.len();
        for i in 0..len {
            link(self.boundary[i], self.boundary[(i + 1) % len]);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_by(|&a, &b| self.angle(v, a).total_cmp(&self.angle(v, b)));
        }
        adj
    }

    fn trace_faces(&self, rot: &[Vec<usize>]) -> (Vec<Face>, HashMap<(usize, usize), usize>) {
        let mut owner = HashMap::new();
        let mut faces = Vec::new();
        for u in 0..self.names.len() {
            for &v in &rot[u] {
                if owner.contains_key(&(u, v)) {
                    continue;
                }
                let mut half_edges = Vec::new();
                let (mut a, mut b) = (u, v);
                while !owner.contains_key(&(a, b)) {
                    owner.insert((a, b), faces.len());
                    half_edges.push((a, b));
                    let lst = &rot[b];
                    let i = lst.iter().position(|&x| x == a).expect("symmetric adjacency");
                    let c = lst[(i + lst.len() - 1) % lst.len()];
                    (a, b) = (b, c);
                }
                let area = half_edges
                    .iter()
                    .map(|&(a, b)| cross(self.coords[a], self.coords[b]))
                    .sum::<f64>()
                    / 2.0;
                faces.push(Face { half_edges, area });
            }
        }
        (faces, owner)
    }

    /// Derive faces, markers, the exchange form and edge exponents.
    pub fn finish(self) -> Result<Network> {
        let rot = self.rotation_system();
        let (faces, owner) = self.trace_faces(&rot);
        let interior: Vec<usize> = (0..faces.len()).filter(|&f| faces[f].area > EPS).collect();
        let gen_of: HashMap<usize, usize> =
            interior.iter().enumerate().map(|(g, &f)| (f, g)).collect();
        let n = interior.len();

        let markers: Vec<[f64; 2]> = interior
            .iter()
            .map(|&f| {
                let (a, b) = faces[f].half_edges[0];
                let (pa, pb) = (self.coords[a], self.coords[b]);
                let d = sub(pb, pa);
                let l = dot(d, d).sqrt();
                let t = 0.37;
                [
                    pa[0] + t * d[0] - 0.0123 * d[1] / l,
                    pa[1] + t * d[1] + 0.0123 * d[0] / l,
                ]
            })
            .collect();

        let mut indeg = vec![0usize; self.names.len()];
        let mut outdeg = vec![0usize; self.names.len()];
        for &(u, w) in &self.edges {
            outdeg[u] += 1;
            indeg[w] += 1;
        }
        let mut e2 = vec![vec![0i64; n]; n];
        for v in 0..self.names.len() {
            if self.boundary.contains(&v) || indeg[v] + outdeg[v] != 3 {
                continue;
            }
            let s = if indeg[v] == 1 { 1 } else { -1 };
            let cw: Vec<usize> = rot[v].iter().rev().copied().collect();
            let fs: Vec<usize> = cw
                .iter()
                .map(|&w| {
                    gen_of.get(&owner[&(v, w)]).copied().ok_or_else(|| {
                        Error::InvalidNetwork(format!(
                            "vertex {} touches the outer face",
                            self.names[v]
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            for k in 0..3 {
                let (a, b) = (fs[k], fs[(k + 1) % 3]);
                e2[a][b] += s;
                e2[b][a] -= s;
            }
        }
        let form = SkewForm::new(e2)?;
        let geometry = Geometry { coords: self.coords, face_markers: markers, boundary: self.boundary };
        let exps = geometry.derive_exponents(&self.edges, &self.sources)?;
        let edges = self
            .edges
            .iter()
            .zip(exps)
            .map(|(&(from, to), exponent)| Edge { from, to, exponent })
            .collect();
        Network::new(form, self.names, edges, self.sources, self.sinks, Some(geometry), None)
    }
}
