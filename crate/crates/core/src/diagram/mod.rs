//! Oriented link diagrams in PD form.
//!
//! A crossing lists its four incident arcs counterclockwise, starting at the
//! incoming under-strand, so the under-strand runs from slot 0 to slot 2. The
//! over-strand runs from slot 3 to slot 1 at a positive crossing and from slot 1
//! to slot 3 at a negative one (right-hand rule).
//!
//! Corner `i` of a crossing is the angle between slot `i` and slot `i + 1`.

mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

pub use parse::{parse_json_diagram, parse_pd, parse_pd_raw, DiagramJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("empty crossing list")]
    Empty,
    #[error("malformed input near {token:?}: {reason}")]
    MalformedSyntax { token: String, reason: String },
    #[error("arc {label} appears {count} times (expected 2)")]
    BadArcMultiplicity { label: u32, count: usize },
    #[error("the underlying 4-valent graph is disconnected")]
    DisconnectedDiagram,
    #[error("face tracing found {faces} faces, a sphere embedding needs {expected}")]
    NonPlanarRotation { faces: usize, expected: usize },
    #[error("strand orientations are inconsistent on component {component}")]
    InconsistentOrientation { component: usize },
    #[error("orientation list has {given} entries for {components} components")]
    BadOrientationCount { given: usize, components: usize },
    #[error("face adjacency is not bipartite")]
    NotBipartite,
    #[error("vertex order is invalid: {0}")]
    BadOrder(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub slots: [u32; 4],
    pub sign: Sign,
}

impl Crossing {
    /// Whether the strand at `slot` enters the crossing.
    pub fn is_incoming(&self, slot: u8) -> bool {
        match (slot % 4, self.sign) {
            (0, _) => true,
            (2, _) => false,
            (1, s) => s == Sign::Negative,
            (_, s) => s == Sign::Positive,
        }
    }

    /// Corner bounded by the two incoming strands.
    pub fn in_corner(&self) -> u8 {
        match self.sign {
            Sign::Positive => 3,
            Sign::Negative => 0,
        }
    }

    /// Corner bounded by the two outgoing strands.
    pub fn out_corner(&self) -> u8 {
        (self.in_corner() + 2) % 4
    }
}

/// A crossing slot: `index` counts counterclockwise from the incoming under-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub crossing: usize,
    pub index: u8,
}

impl Slot {
    pub fn new(crossing: usize, index: u8) -> Self {
        Slot { crossing, index: index % 4 }
    }

    pub fn opposite(self) -> Self {
        Slot::new(self.crossing, self.index + 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FaceColor {
    Shaded,
    Unshaded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    /// Corners met going once around the face, as `(crossing, corner)`.
    pub boundary: Vec<(usize, u8)>,
    /// Arcs on the boundary, in the same traversal.
    pub arcs: Vec<u32>,
    pub color: FaceColor,
    /// All boundary arcs run the same way around the face.
    pub coherent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertCircle {
    pub id: usize,
    pub arcs: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub alternating: bool,
    pub reduced: bool,
    pub special: bool,
    pub uniform_sign: bool,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.connected && self.alternating && self.reduced && self.special && self.uniform_sign
    }

    /// Machine-readable name of the first failed check.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.connected {
            Some("NotConnected")
        } else if !self.reduced {
            Some("NotReduced")
        } else if !self.alternating {
            Some("NotAlternating")
        } else if !self.special {
            Some("NotSpecial")
        } else if !self.uniform_sign {
            Some("NonUniformSign")
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    /// Both ends of every arc, indexed by `label - 1`.
    ends: Vec<[Slot; 2]>,
    /// Arc labels of each component in traversal order; components sorted by smallest label.
    components: Vec<Vec<u32>>,
    faces: Vec<Face>,
    corner_face: Vec<[usize; 4]>,
    tait_order: Option<Vec<u32>>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings && self.tait_order == other.tait_order
    }
}

impl Eq for Diagram {}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Ends of every arc for unoriented tuples with labels `1..=2n`.
fn arc_ends(tuples: &[[u32; 4]]) -> Vec<[Slot; 2]> {
    let mut partial: Vec<Vec<Slot>> = vec![Vec::with_capacity(2); tuples.len() * 2];
    for (k, t) in tuples.iter().enumerate() {
        for (s, &label) in t.iter().enumerate() {
            partial[label as usize - 1].push(Slot::new(k, s as u8));
        }
    }
    partial.into_iter().map(|v| [v[0], v[1]]).collect()
}

fn other_end_of(ends: &[[Slot; 2]], label: u32, at: Slot) -> Slot {
    let [a, b] = ends[label as usize - 1];
    if a == at {
        b
    } else {
        a
    }
}

type Orientation = (Vec<[bool; 4]>, Vec<[usize; 4]>, usize);

/// Direction of travel per slot, inferred from the under-strands.
///
/// Returns `incoming[k][s]` and the component index of every slot. Components
/// that only pass over crossings default to the direction in which their arc
/// labels increase.
fn infer_orientation(tuples: &[[u32; 4]]) -> Result<Orientation, DiagramError> {
    let ends = arc_ends(tuples);
    let n = tuples.len();
    let mut incoming = vec![[false; 4]; n];
    let mut comp = vec![[usize::MAX; 4]; n];
    // components are discovered in order of their smallest arc label
    let mut count = 0;
    for label in 1..=(2 * n) as u32 {
        let start = ends[label as usize - 1][0];
        if comp[start.crossing][start.index as usize] != usize::MAX {
            continue;
        }
        // arrivals along one direction of travel
        let mut arrivals = Vec::new();
        let mut arcs = Vec::new();
        let mut at = start;
        loop {
            arrivals.push(at);
            let dep = at.opposite();
            let arc = tuples[dep.crossing][dep.index as usize];
            arcs.push(arc);
            at = other_end_of(&ends, arc, dep);
            if at == start {
                break;
            }
        }
        let under_in = arrivals.iter().any(|s| s.index == 0);
        let under_out = arrivals.iter().any(|s| s.index == 2);
        let reverse = match (under_in, under_out) {
            (true, true) => return Err(DiagramError::InconsistentOrientation { component: count }),
            (true, false) => false,
            (false, true) => true,
            (false, false) => {
                let m = arcs.len();
                let p = (0..m).min_by_key(|&i| arcs[i]).unwrap_or(0);
                arcs[(p + 1) % m] > arcs[(p + m - 1) % m]
            }
        };
        for &a in &arrivals {
            let d = a.opposite();
            incoming[a.crossing][a.index as usize] = !reverse;
            incoming[d.crossing][d.index as usize] = reverse;
            comp[a.crossing][a.index as usize] = count;
            comp[d.crossing][d.index as usize] = count;
        }
        count += 1;
    }
    Ok((incoming, comp, count))
}

impl Diagram {
    /// Validates raw tuples: multiplicity, connectivity, orientation and planarity.
    pub fn from_json(raw: DiagramJson) -> Result<Diagram, DiagramError> {
        let DiagramJson { crossings, orientations, order } = raw;
        if crossings.is_empty() {
            return Err(DiagramError::Empty);
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for l in crossings.iter().flatten() {
            *counts.entry(*l).or_default() += 1;
        }
        if let Some((&label, &count)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(DiagramError::BadArcMultiplicity { label, count });
        }
        let relabel: HashMap<u32, u32> =
            counts.keys().enumerate().map(|(i, &l)| (l, i as u32 + 1)).collect();
        let tuples: Vec<[u32; 4]> = crossings.iter().map(|t| t.map(|l| relabel[&l])).collect();
        let order = order
            .map(|o| {
                o.iter()
                    .map(|l| {
                        relabel
                            .get(l)
                            .copied()
                            .ok_or_else(|| DiagramError::BadOrder(format!("unknown arc {l}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;

        check_connected(&tuples)?;
        let (mut incoming, comp, ncomp) = infer_orientation(&tuples)?;
        if let Some(dirs) = &orientations {
            if dirs.len() != ncomp {
                return Err(DiagramError::BadOrientationCount { given: dirs.len(), components: ncomp });
            }
            for (k, flags) in incoming.iter_mut().enumerate() {
                for s in 0..4 {
                    if dirs[comp[k][s]] < 0 {
                        flags[s] = !flags[s];
                    }
                }
            }
        }
        let oriented = tuples
            .iter()
            .zip(&incoming)
            .map(|(t, inc)| orient_crossing(*t, *inc))
            .collect();
        Diagram::assemble(oriented, order)
    }

    /// Builds a diagram from crossings that already carry their orientation.
    pub(crate) fn assemble(crossings: Vec<Crossing>, tait_order: Option<Vec<u32>>) -> Result<Diagram, DiagramError> {
        let n = crossings.len();
        if n == 0 {
            return Err(DiagramError::Empty);
        }
        let tuples: Vec<[u32; 4]> = crossings.iter().map(|c| c.slots).collect();
        let ends = arc_ends(&tuples);
        for (i, [a, b]) in ends.iter().enumerate() {
            let ia = crossings[a.crossing].is_incoming(a.index);
            let ib = crossings[b.crossing].is_incoming(b.index);
            if ia == ib {
                return Err(DiagramError::InconsistentOrientation { component: i });
            }
        }
        let mut d = Diagram {
            crossings,
            ends,
            components: Vec::new(),
            faces: Vec::new(),
            corner_face: vec![[usize::MAX; 4]; n],
            tait_order,
        };
        d.components = d.trace_components();
        d.trace_faces()?;
        d.color_faces()?;
        if let Some(order) = &d.tait_order {
            let mut seen = BTreeSet::new();
            for &l in order {
                if l == 0 || l as usize > d.arc_count() {
                    return Err(DiagramError::BadOrder(format!("unknown arc {l}")));
                }
                let f = d.unshaded_face_of_arc(l);
                if !seen.insert(f) {
                    return Err(DiagramError::BadOrder(format!("arc {l} names a face twice")));
                }
            }
        }
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.ends.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Arc labels of each component in orientation order.
    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn tait_order(&self) -> Option<&[u32]> {
        self.tait_order.as_deref()
    }

    pub fn with_tait_order(mut self, order: Option<Vec<u32>>) -> Result<Diagram, DiagramError> {
        self.tait_order = None;
        Diagram::assemble(self.crossings, order)
    }

    pub fn arc_at(&self, slot: Slot) -> u32 {
        self.crossings[slot.crossing].slots[slot.index as usize]
    }

    pub fn arc_ends(&self, label: u32) -> [Slot; 2] {
        self.ends[label as usize - 1]
    }

    /// The slot at the far end of the arc leaving `slot`.
    pub fn other_end(&self, slot: Slot) -> Slot {
        other_end_of(&self.ends, self.arc_at(slot), slot)
    }

    pub fn is_incoming(&self, slot: Slot) -> bool {
        self.crossings[slot.crossing].is_incoming(slot.index)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn corner_face(&self, crossing: usize, corner: u8) -> usize {
        self.corner_face[crossing][corner as usize % 4]
    }

    /// The two faces on either side of an arc, in the order of its ends.
    pub fn arc_faces(&self, label: u32) -> [usize; 2] {
        let [a, b] = self.arc_ends(label);
        // the face left of the dart leaving `a` holds corner (other end, index - 1)
        let fa = {
            let o = self.other_end(a);
            self.corner_face(o.crossing, (o.index + 3) % 4)
        };
        let fb = {
            let o = self.other_end(b);
            self.corner_face(o.crossing, (o.index + 3) % 4)
        };
        [fa, fb]
    }

    pub fn unshaded_face_of_arc(&self, label: u32) -> usize {
        let [a, b] = self.arc_faces(label);
        if self.faces[a].color == FaceColor::Unshaded {
            a
        } else {
            b
        }
    }

    fn trace_components(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.arc_count()];
        let mut out = Vec::new();
        for label in 1..=self.arc_count() as u32 {
            if seen[label as usize - 1] {
                continue;
            }
            let mut arcs = Vec::new();
            let mut cur = label;
            while !seen[cur as usize - 1] {
                seen[cur as usize - 1] = true;
                arcs.push(cur);
                let [a, b] = self.arc_ends(cur);
                let head = if self.is_incoming(a) { a } else { b };
                cur = self.arc_at(head.opposite());
            }
            out.push(arcs);
        }
        out
    }

    fn trace_faces(&mut self) -> Result<(), DiagramError> {
        let n = self.crossing_count();
        let mut faces = Vec::new();
        for k in 0..n {
            for s in 0..4u8 {
                // the dart leaving slot s lies in the face holding corner (far end, index - 1)
                let far = self.other_end(Slot::new(k, s));
                if self.corner_face[far.crossing][((far.index + 3) % 4) as usize] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut boundary = Vec::new();
                let mut arcs = Vec::new();
                let mut forward = Vec::new();
                let mut dart = Slot::new(k, s);
                loop {
                    let far = self.other_end(dart);
                    let corner = (far.index + 3) % 4;
                    if self.corner_face[far.crossing][corner as usize] != usize::MAX {
                        break;
                    }
                    self.corner_face[far.crossing][corner as usize] = id;
                    arcs.push(self.arc_at(dart));
                    forward.push(!self.is_incoming(dart));
                    boundary.push((far.crossing, corner));
                    dart = Slot::new(far.crossing, corner);
                }
                let coherent = forward.iter().all(|&f| f) || forward.iter().all(|&f| !f);
                faces.push(Face { id, boundary, arcs, color: FaceColor::Unshaded, coherent });
            }
        }
        let expected = n + 2;
        if faces.len() != expected {
            return Err(DiagramError::NonPlanarRotation { faces: faces.len(), expected });
        }
        self.faces = faces;
        Ok(())
    }

    /// Proper 2-coloring; the shaded class is the one whose faces are all
    /// coherently oriented (the Seifert-circle class), falling back to the class
    /// holding the coherent corners of crossing 0.
    fn color_faces(&mut self) -> Result<(), DiagramError> {
        let f = self.faces.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); f];
        for label in 1..=self.arc_count() as u32 {
            let [a, b] = self.arc_faces(label);
            if a == b {
                return Err(DiagramError::NotBipartite);
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut class = vec![u8::MAX; f];
        class[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if class[y] == u8::MAX {
                    class[y] = 1 - class[x];
                    queue.push_back(y);
                } else if class[y] == class[x] {
                    return Err(DiagramError::NotBipartite);
                }
            }
        }
        let all_coherent = |c: u8| (0..f).filter(|&i| class[i] == c).all(|i| self.faces[i].coherent);
        let shaded = if all_coherent(0) {
            0
        } else if all_coherent(1) {
            1
        } else {
            let c0 = &self.crossings[0];
            class[self.corner_face[0][((c0.in_corner() + 1) % 4) as usize]]
        };
        for (face, c) in self.faces.iter_mut().zip(class) {
            face.color = if c == shaded { FaceColor::Shaded } else { FaceColor::Unshaded };
        }
        Ok(())
    }

    pub fn shaded_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.color == FaceColor::Shaded)
    }

    pub fn unshaded_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.color == FaceColor::Unshaded)
    }

    /// Circles from the oriented smoothing of every crossing.
    pub fn seifert_circles(&self) -> Vec<SeifertCircle> {
        let mut seen = vec![false; self.arc_count()];
        let mut out = Vec::new();
        for label in 1..=self.arc_count() as u32 {
            if seen[label as usize - 1] {
                continue;
            }
            let mut arcs = Vec::new();
            let mut cur = label;
            while !seen[cur as usize - 1] {
                seen[cur as usize - 1] = true;
                arcs.push(cur);
                let [a, b] = self.arc_ends(cur);
                let head = if self.is_incoming(a) { a } else { b };
                let c = &self.crossings[head.crossing];
                // leave through the outgoing neighbor slot
                let next = if !c.is_incoming(head.index + 1) { head.index + 1 } else { head.index + 3 };
                cur = self.arc_at(Slot::new(head.crossing, next));
            }
            out.push(SeifertCircle { id: out.len(), arcs });
        }
        out
    }

    /// Seifert circles are unnested: every circle bounds a shaded face, i.e. the
    /// shaded class is coherently oriented (the unbounded region taken unshaded).
    pub fn is_special(&self) -> bool {
        self.shaded_faces().all(|f| f.coherent)
    }

    pub fn is_alternating(&self) -> bool {
        self.ends.iter().all(|[a, b]| (a.index + b.index) % 2 == 1)
    }

    /// Crossings meeting one face at two corners.
    pub fn nugatory_crossings(&self) -> Vec<usize> {
        (0..self.crossing_count())
            .filter(|&k| {
                let f = self.corner_face[k];
                (0..4).any(|i| (i + 1..4).any(|j| f[i] == f[j]))
            })
            .collect()
    }

    /// A circle meeting the diagram in two points separates it: two faces share two arcs.
    pub fn has_separating_circle(&self) -> bool {
        let mut pairs = BTreeSet::new();
        for label in 1..=self.arc_count() as u32 {
            let [a, b] = self.arc_faces(label);
            if !pairs.insert((a.min(b), a.max(b))) {
                return true;
            }
        }
        false
    }

    pub fn uniform_sign(&self) -> Option<Sign> {
        let s = self.crossings[0].sign;
        self.crossings.iter().all(|c| c.sign == s).then_some(s)
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            connected: true,
            alternating: self.is_alternating(),
            reduced: self.nugatory_crossings().is_empty() && !self.has_separating_circle(),
            special: self.is_special(),
            uniform_sign: self.uniform_sign().is_some(),
        }
    }

    /// Tuples plus the orientation flips needed to reproduce this diagram from them.
    pub fn to_json(&self) -> DiagramJson {
        let crossings: Vec<[u32; 4]> = self.crossings.iter().map(|c| c.slots).collect();
        let orientations = match infer_orientation(&crossings) {
            Ok((incoming, comp, ncomp)) => {
                let mut dirs = vec![1i8; ncomp];
                for (k, c) in self.crossings.iter().enumerate() {
                    for s in 0..4 {
                        if incoming[k][s] != c.is_incoming(s as u8) {
                            dirs[comp[k][s]] = -1;
                        }
                    }
                }
                dirs.contains(&-1).then_some(dirs)
            }
            Err(_) => None,
        };
        DiagramJson { crossings, orientations, order: self.tait_order.clone() }
    }

    pub fn to_pd_string(&self) -> String {
        let raw = self.to_json();
        let mut out: Vec<String> = raw
            .crossings
            .iter()
            .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
            .collect();
        let mut text = out.join(" ");
        if let Some(o) = raw.orientations {
            let items: Vec<String> = o.iter().map(|&x| if x > 0 { "+1".into() } else { "-1".into() }).collect();
            text.push_str(&format!("\norient: [{}]", items.join(", ")));
        }
        if let Some(o) = raw.order {
            out = o.iter().map(u32::to_string).collect();
            text.push_str(&format!("\norder: [{}]", out.join(", ")));
        }
        text
    }
}


fn check_connected(tuples: &[[u32; 4]]) -> Result<(), DiagramError> {
    let ends = arc_ends(tuples);
    let mut uf = UnionFind::new(tuples.len());
    for [a, b] in &ends {
        uf.union(a.crossing, b.crossing);
    }
    let root = uf.find(0);
    if (0..tuples.len()).all(|k| uf.find(k) == root) {
        Ok(())
    } else {
        Err(DiagramError::DisconnectedDiagram)
    }
}

/// Rotates a tuple to start at its incoming under-strand and reads off the sign.
fn orient_crossing(t: [u32; 4], incoming: [bool; 4]) -> Crossing {
    let start = if incoming[0] { 0 } else { 2 };
    let slots = [t[start], t[start + 1], t[(start + 2) % 4], t[(start + 3) % 4]];
    let over_in_at_last = incoming[(start + 3) % 4];
    Crossing { slots, sign: if over_in_at_last { Sign::Positive } else { Sign::Negative } }
}

/// Planar wiring used to rebuild diagrams after local surgery: per crossing, the
/// partner of each slot, which slots are incoming, and which axis is under.
#[derive(Debug, Clone)]
pub(crate) struct Wiring {
    pub link: Vec<[Slot; 4]>,
    pub incoming: Vec<[bool; 4]>,
    /// Under-strand occupies slots {1, 3} instead of {0, 2}.
    pub under_odd: Vec<bool>,
}

impl Wiring {
    pub fn of(d: &Diagram) -> Wiring {
        let n = d.crossing_count();
        Wiring {
            link: (0..n).map(|k| [0, 1, 2, 3].map(|s| d.other_end(Slot::new(k, s)))).collect(),
            incoming: (0..n).map(|k| [0, 1, 2, 3].map(|s| d.is_incoming(Slot::new(k, s)))).collect(),
            under_odd: vec![false; n],
        }
    }

    pub fn connect(&mut self, a: Slot, b: Slot) {
        self.link[a.crossing][a.index as usize] = b;
        self.link[b.crossing][b.index as usize] = a;
    }

    /// Labels arcs consecutively along each component and rebuilds the diagram.
    pub fn into_diagram(self) -> Result<Diagram, DiagramError> {
        let n = self.link.len();
        let mut label = vec![[0u32; 4]; n];
        let mut next = 1u32;
        for k in 0..n {
            for s in 0..4u8 {
                if label[k][s as usize] != 0 {
                    continue;
                }
                // start from the outgoing end of this arc
                let mut dep = if self.incoming[k][s as usize] { self.link[k][s as usize] } else { Slot::new(k, s) };
                while label[dep.crossing][dep.index as usize] == 0 {
                    let arr = self.link[dep.crossing][dep.index as usize];
                    label[dep.crossing][dep.index as usize] = next;
                    label[arr.crossing][arr.index as usize] = next;
                    next += 1;
                    dep = arr.opposite();
                }
            }
        }
        let crossings = (0..n)
            .map(|k| {
                let base = if self.under_odd[k] { 1 } else { 0 };
                let start = if self.incoming[k][base] { base } else { base + 2 };
                let slots = [0, 1, 2, 3].map(|i| label[k][(start + i) % 4]);
                let over_last = self.incoming[k][(start + 3) % 4];
                Crossing { slots, sign: if over_last { Sign::Positive } else { Sign::Negative } }
            })
            .collect();
        Diagram::assemble(crossings, None)
    }
}
