//! Oriented, weighted Tait graph on the unshaded regions and its Laplacian.
//!
//! At every crossing the two unshaded corners of a special diagram are the one
//! between the two incoming strands and the one between the two outgoing
//! strands. The edge runs from the former region to the latter and weighs `-1`
//! at a positive crossing, `+1` at a negative one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, FaceColor};
use crate::linalg::{rat, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaitError {
    #[error("diagram not accepted: {0}")]
    NotAccepted(&'static str),
    #[error("vertex {index} out of range for {n} vertices")]
    IndexOutOfRange { index: i64, n: usize },
    #[error("edge weight {0} is not +1 or -1")]
    BadWeight(i64),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is unbalanced at vertex {0}")]
    UnbalancedGraph(usize),
    #[error("invalid vertex order: {0}")]
    BadOrder(String),
    #[error("malformed edge list: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TaitEdge {
    pub tail: usize,
    pub head: usize,
    pub weight: i32,
    /// Source crossing, when the graph came from a diagram.
    pub crossing: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaitGraph {
    n: usize,
    edges: Vec<TaitEdge>,
    /// Face id of each vertex when built from a diagram.
    vertex_faces: Vec<usize>,
}

/// Edge-list interchange form `{n, edges: [[tail, head, weight], ...], order?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeListJson {
    pub n: usize,
    pub edges: Vec<[i64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

impl TaitGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[TaitEdge] {
        &self.edges
    }

    pub fn vertex_faces(&self) -> &[usize] {
        &self.vertex_faces
    }

    /// Builds a graph from raw parts, checking indices, weights and loops.
    pub fn new(n: usize, edges: Vec<TaitEdge>) -> Result<TaitGraph, TaitError> {
        for e in &edges {
            for v in [e.tail, e.head] {
                if v >= n {
                    return Err(TaitError::IndexOutOfRange { index: v as i64, n });
                }
            }
            if e.tail == e.head {
                return Err(TaitError::SelfLoop(e.tail));
            }
            if e.weight.abs() != 1 {
                return Err(TaitError::BadWeight(e.weight as i64));
            }
        }
        Ok(TaitGraph { n, edges, vertex_faces: Vec::new() })
    }

    /// Common weight of all edges, if there is one.
    pub fn uniform_weight(&self) -> Option<i32> {
        let w = self.edges.first()?.weight;
        self.edges.iter().all(|e| e.weight == w).then_some(w)
    }

    /// First vertex whose weighted in- and out-degree differ.
    pub fn unbalanced_vertex(&self) -> Option<usize> {
        let mut net = vec![0i64; self.n];
        for e in &self.edges {
            net[e.tail] += e.weight as i64;
            net[e.head] -= e.weight as i64;
        }
        net.iter().position(|&x| x != 0)
    }

    pub fn is_balanced(&self) -> bool {
        self.unbalanced_vertex().is_none()
    }

    /// Relabels vertices so that new vertex `i` is old vertex `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Result<TaitGraph, TaitError> {
        let mut inv = vec![usize::MAX; self.n];
        if order.len() != self.n {
            return Err(TaitError::BadOrder(format!("{} entries for {} vertices", order.len(), self.n)));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= self.n || inv[v] != usize::MAX {
                return Err(TaitError::BadOrder(format!("not a permutation at entry {i}")));
            }
            inv[v] = i;
        }
        Ok(TaitGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| TaitEdge { tail: inv[e.tail], head: inv[e.head], ..*e })
                .collect(),
            vertex_faces: if self.vertex_faces.is_empty() {
                Vec::new()
            } else {
                order.iter().map(|&v| self.vertex_faces[v]).collect()
            },
        })
    }

    pub fn to_edge_list(&self) -> EdgeListJson {
        EdgeListJson {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| [e.tail as i64, e.head as i64, e.weight as i64])
                .collect(),
            order: None,
        }
    }
}

/// Tait graph of an accepted diagram.
///
/// Vertices are the unshaded faces, ordered by the diagram's explicit order when
/// it carries one and by smallest incident arc label otherwise.
pub fn tait_graph(d: &Diagram) -> Result<TaitGraph, TaitError> {
    if let Some(reason) = d.validate().failure() {
        return Err(TaitError::NotAccepted(reason));
    }
    let unshaded: Vec<usize> = match d.tait_order() {
        Some(order) => {
            let count = d.unshaded_faces().count();
            if order.len() != count {
                return Err(TaitError::BadOrder(format!("{} entries for {count} unshaded faces", order.len())));
            }
            order.iter().map(|&arc| d.unshaded_face_of_arc(arc)).collect()
        }
        None => {
            let mut faces: Vec<(u32, usize)> = d
                .unshaded_faces()
                .map(|f| (*f.arcs.iter().min().expect("face without arcs"), f.id))
                .collect();
            faces.sort_unstable();
            faces.into_iter().map(|(_, id)| id).collect()
        }
    };
    let mut vertex_of_face = vec![usize::MAX; d.faces().len()];
    for (v, &f) in unshaded.iter().enumerate() {
        vertex_of_face[f] = v;
    }
    let mut edges = Vec::with_capacity(d.crossing_count());
    for (k, c) in d.crossings().iter().enumerate() {
        let tail_face = d.corner_face(k, c.in_corner());
        let head_face = d.corner_face(k, c.out_corner());
        debug_assert_eq!(d.faces()[tail_face].color, FaceColor::Unshaded);
        edges.push(TaitEdge {
            tail: vertex_of_face[tail_face],
            head: vertex_of_face[head_face],
            weight: -c.sign.value(),
            crossing: Some(k),
        });
    }
    let mut g = TaitGraph::new(unshaded.len(), edges)?;
    g.vertex_faces = unshaded;
    Ok(g)
}

/// `L_ii` is the weighted out-degree of `i`; `L_ij = -(weight of edges i→j)`.
pub fn laplacian(g: &TaitGraph) -> RationalMatrix {
    let n = g.vertex_count();
    let mut acc = vec![0i64; n * n];
    for e in g.edges() {
        let w = e.weight as i64;
        acc[e.tail * n + e.tail] += w;
        acc[e.tail * n + e.head] -= w;
    }
    RationalMatrix::from_fn(n, n, |i, j| rat(acc[i * n + j]))
}

/// Ingests an edge list; `strict` additionally rejects unbalanced graphs.
pub fn from_edge_list(spec: &EdgeListJson, strict: bool) -> Result<TaitGraph, TaitError> {
    let n = spec.n;
    let mut edges = Vec::with_capacity(spec.edges.len());
    for &[t, h, w] in &spec.edges {
        for v in [t, h] {
            if v < 0 || v as usize >= n {
                return Err(TaitError::IndexOutOfRange { index: v, n });
            }
        }
        if w != 1 && w != -1 {
            return Err(TaitError::BadWeight(w));
        }
        edges.push(TaitEdge { tail: t as usize, head: h as usize, weight: w as i32, crossing: None });
    }
    let mut g = TaitGraph::new(n, edges)?;
    if let Some(order) = &spec.order {
        g = g.reordered(order)?;
    }
    if strict {
        if let Some(v) = g.unbalanced_vertex() {
            return Err(TaitError::UnbalancedGraph(v));
        }
    }
    Ok(g)
}

pub fn parse_edge_list(text: &str, strict: bool) -> Result<TaitGraph, TaitError> {
    let spec: EdgeListJson = serde_json::from_str(text).map_err(|e| TaitError::Malformed(e.to_string()))?;
    from_edge_list(&spec, strict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn cycle(n: usize, w: i64) -> EdgeListJson {
        EdgeListJson { n, edges: (0..n).map(|i| [i as i64, ((i + 1) % n) as i64, w]).collect(), order: None }
    }

    #[test]
    fn cycle_laplacian() {
        let g = from_edge_list(&cycle(3, 1), true).unwrap();
        assert_eq!(laplacian(&g), RationalMatrix::from_i64(&[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]]));
    }

    #[test]
    fn single_vertex() {
        let g = TaitGraph::new(1, vec![]).unwrap();
        assert_eq!(laplacian(&g), RationalMatrix::from_i64(&[&[0]]));
    }

    #[test]
    fn parallel_edges_accumulate() {
        let spec = EdgeListJson { n: 2, edges: vec![[0, 1, 1], [0, 1, 1], [1, 0, 1], [1, 0, 1]], order: None };
        let g = from_edge_list(&spec, true).unwrap();
        assert_eq!(laplacian(&g), RationalMatrix::from_i64(&[&[2, -2], &[-2, 2]]));
    }

    #[test]
    fn edge_list_errors() {
        let unbalanced = EdgeListJson { n: 2, edges: vec![[0, 1, 1]], order: None };
        assert_eq!(from_edge_list(&unbalanced, true), Err(TaitError::UnbalancedGraph(0)));
        assert!(from_edge_list(&unbalanced, false).is_ok());
        let oob = EdgeListJson { n: 2, edges: vec![[0, 2, 1]], order: None };
        assert_eq!(from_edge_list(&oob, false), Err(TaitError::IndexOutOfRange { index: 2, n: 2 }));
        let lp = EdgeListJson { n: 2, edges: vec![[1, 1, 1]], order: None };
        assert_eq!(from_edge_list(&lp, false), Err(TaitError::SelfLoop(1)));
        let bw = EdgeListJson { n: 2, edges: vec![[0, 1, 3]], order: None };
        assert_eq!(from_edge_list(&bw, false), Err(TaitError::BadWeight(3)));
        assert!(matches!(parse_edge_list("{n:3}", false), Err(TaitError::Malformed(_))));
    }

    #[test]
    fn order_permutes_vertices() {
        let mut spec = cycle(3, 1);
        spec.order = Some(vec![2, 0, 1]);
        let g = from_edge_list(&spec, true).unwrap();
        // old 2 -> new 0, old 0 -> new 1, old 1 -> new 2
        assert_eq!(g.edges()[0].tail, 1);
        assert_eq!(g.edges()[0].head, 2);
        spec.order = Some(vec![0, 0, 1]);
        assert!(matches!(from_edge_list(&spec, true), Err(TaitError::BadOrder(_))));
    }

    #[test]
    fn standard_trefoil_is_a_negative_three_cycle() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let g = tait_graph(&d).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.uniform_weight(), Some(1));
        assert!(g.is_balanced());
        let mut out = [0; 3];
        for e in g.edges() {
            out[e.tail] += 1;
        }
        assert_eq!(out, [1, 1, 1]);
    }

    #[test]
    fn mirror_trefoil_has_weight_minus_one() {
        let d = parse_pd("X(4,2,5,1) X(2,6,3,5) X(6,4,1,3)").unwrap();
        let g = tait_graph(&d).unwrap();
        assert_eq!(g.uniform_weight(), Some(-1));
        assert_eq!(
            laplacian(&g),
            RationalMatrix::from_i64(&[&[-1, 1, 0], &[0, -1, 1], &[1, 0, -1]])
        );
    }

    #[test]
    fn rejects_unaccepted_diagrams() {
        let d = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(tait_graph(&d), Err(TaitError::NotAccepted("NotReduced")));
    }
}
