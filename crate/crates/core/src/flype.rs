//! Flype moves on PD diagrams and the orbit harness built on them.
//!
//! A flype takes a crossing `c` and a tangle `R` attached to it by two
//! adjacent slots, turns `R` over (a mirror of its rotation system with
//! over and under exchanged) and re-inserts `c` on the far side of `R`.
//!
//! Slot names used below, counterclockwise around the pivot starting at slot
//! `i`: `x, y, q, p`, where `q` and `p` enter the tangle. Around the tangle the
//! four boundary arcs read `r, p, q, s` counterclockwise, so `r` shares a face
//! with `p` and `x`, and `s` shares one with `q` and `y`.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Slot, Wiring};
use crate::invariants::{self, InvariantError};
use crate::linalg::{format_rational, Polynomial, Rational};
use crate::tait::{laplacian, tait_graph, TaitError};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlypeError {
    #[error("tangle is not an admissible flype of this diagram")]
    NotAdmissible,
    #[error("diagram not accepted: {0}")]
    NotAccepted(&'static str),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Tait(#[from] TaitError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// Crossings of a tangle, its boundary arcs `[r, p, q, s]` and the pivot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TangleRegion {
    pub crossings: Vec<usize>,
    pub boundary_arcs: [u32; 4],
    pub pivot: usize,
}

/// Resolved geometry of one flype.
struct Move {
    mask: Vec<bool>,
    pivot: usize,
    /// Pivot slot `i`.
    base: u8,
    /// Outside ends of `x` and `y`.
    x_out: Slot,
    y_out: Slot,
    /// Tangle ends of `p`, `q`, `r`, `s`.
    p_in: Slot,
    q_in: Slot,
    r_in: Slot,
    s_in: Slot,
    /// Outside ends of `r` and `s`.
    r_out: Slot,
    s_out: Slot,
}

fn cut_arcs_on_face(d: &Diagram, mask: &[bool], face: usize) -> Vec<u32> {
    let f = &d.faces()[face];
    let mut out: Vec<u32> = f
        .arcs
        .iter()
        .copied()
        .filter(|&a| {
            let [u, v] = d.arc_ends(a);
            mask[u.crossing] != mask[v.crossing]
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Splits a cut arc into its tangle end and outside end.
fn ends_across(d: &Diagram, mask: &[bool], arc: u32) -> (Slot, Slot) {
    let [u, v] = d.arc_ends(arc);
    if mask[u.crossing] {
        (u, v)
    } else {
        (v, u)
    }
}

fn resolve(d: &Diagram, mask: &[bool], pivot: usize) -> Option<Move> {
    if mask[pivot] {
        return None;
    }
    let into: Vec<u8> = (0..4u8).filter(|&s| mask[d.other_end(Slot::new(pivot, s)).crossing]).collect();
    let q_slot = match into.as_slice() {
        [a, b] if (a + 1) % 4 == *b => *a,
        [0, 3] => 3,
        _ => return None,
    };
    let base = (q_slot + 2) % 4;
    let at = |j: u8| Slot::new(pivot, base + j);
    let x_out = d.other_end(at(0));
    let y_out = d.other_end(at(1));
    if x_out.crossing == pivot || y_out.crossing == pivot {
        return None;
    }
    let p = d.arc_at(at(3));
    let q = d.arc_at(at(2));
    let top = cut_arcs_on_face(d, mask, d.corner_face(pivot, base + 3));
    let bottom = cut_arcs_on_face(d, mask, d.corner_face(pivot, base + 1));
    let r = match top.as_slice() {
        [a, b] if *a == p || *b == p => if *a == p { *b } else { *a },
        _ => return None,
    };
    let s = match bottom.as_slice() {
        [a, b] if *a == q || *b == q => if *a == q { *b } else { *a },
        _ => return None,
    };
    if r == s || r == q || s == p {
        return None;
    }
    let (r_in, r_out) = ends_across(d, mask, r);
    let (s_in, s_out) = ends_across(d, mask, s);
    Some(Move {
        mask: mask.to_vec(),
        pivot,
        base,
        x_out,
        y_out,
        p_in: d.other_end(at(3)),
        q_in: d.other_end(at(2)),
        r_in,
        s_in,
        r_out,
        s_out,
    })
}

fn rewire(d: &Diagram, m: &Move) -> Result<Diagram, DiagramError> {
    let old = Wiring::of(d);
    let mut w = old.clone();
    let refl = |s: Slot| if m.mask[s.crossing] { Slot::new(s.crossing, 4 - s.index) } else { s };
    for k in (0..d.crossing_count()).filter(|&k| m.mask[k]) {
        for j in 0..4u8 {
            let t = refl(Slot::new(k, j));
            let partner = old.link[k][j as usize];
            w.link[k][t.index as usize] = if m.mask[partner.crossing] { refl(partner) } else { partner };
            w.incoming[k][t.index as usize] = old.incoming[k][j as usize];
        }
        w.under_odd[k] = true;
    }
    let c = m.pivot;
    let at = |j: u8| Slot::new(c, m.base + j);
    w.connect(m.x_out, refl(m.q_in));
    w.connect(m.y_out, refl(m.p_in));
    w.connect(at(0), refl(m.s_in));
    w.connect(at(1), refl(m.r_in));
    w.connect(at(2), m.s_out);
    w.connect(at(3), m.r_out);
    for j in 0..4u8 {
        let partner = w.link[c][((m.base + j) % 4) as usize];
        w.incoming[c][((m.base + j) % 4) as usize] = !w.incoming[partner.crossing][partner.index as usize];
    }
    w.into_diagram()
}

fn region_of(d: &Diagram, m: &Move) -> TangleRegion {
    let at = |j: u8| Slot::new(m.pivot, m.base + j);
    TangleRegion {
        crossings: (0..m.mask.len()).filter(|&k| m.mask[k]).collect(),
        boundary_arcs: [d.arc_at(m.r_in), d.arc_at(at(3)), d.arc_at(at(2)), d.arc_at(m.s_in)],
        pivot: m.pivot,
    }
}

fn connected_within(d: &Diagram, mask: &[bool], want: bool) -> bool {
    let n = d.crossing_count();
    let Some(start) = (0..n).find(|&k| mask[k] == want) else {
        return false;
    };
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(k) = stack.pop() {
        for s in 0..4u8 {
            let o = d.other_end(Slot::new(k, s)).crossing;
            if mask[o] == want && !seen[o] {
                seen[o] = true;
                stack.push(o);
            }
        }
    }
    (0..n).all(|k| mask[k] != want || seen[k])
}

fn mask_of(n: usize, crossings: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &k in crossings {
        mask[k] = true;
    }
    mask
}

/// The tangle is cut off by exactly four arcs and neither side falls apart.
fn is_tangle(d: &Diagram, mask: &[bool]) -> bool {
    let n = d.crossing_count();
    let size = mask.iter().filter(|&&m| m).count();
    if size == 0 || size + 2 > n {
        return false;
    }
    let cut = (0..n)
        .filter(|&k| mask[k])
        .flat_map(|k| (0..4u8).map(move |s| Slot::new(k, s)))
        .filter(|&s| !mask[d.other_end(s).crossing])
        .count();
    cut == 4 && connected_within(d, mask, true) && connected_within(d, mask, false)
}

fn candidate(d: &Diagram, mask: &[bool], pivot: usize) -> Option<(TangleRegion, Diagram)> {
    let m = resolve(d, mask, pivot)?;
    let next = rewire(d, &m).ok()?;
    next.validate().accepted().then(|| (region_of(d, &m), next))
}

fn admissible_moves(d: &Diagram) -> Vec<(TangleRegion, Diagram)> {
    let n = d.crossing_count();
    if n < 3 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for bits in 1u64..(1u64 << n) - 1 {
        let mask: Vec<bool> = (0..n).map(|k| bits >> k & 1 == 1).collect();
        if !is_tangle(d, &mask) {
            continue;
        }
        out.extend((0..n).filter_map(|pivot| candidate(d, &mask, pivot)));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Every admissible flype: tangles with `1..=C-2` crossings cut off by four
/// arcs, each paired with a pivot meeting two of those arcs at adjacent slots,
/// kept when the rewritten diagram is accepted.
pub fn find_flypes(d: &Diagram) -> Vec<TangleRegion> {
    admissible_moves(d).into_iter().map(|(t, _)| t).collect()
}

pub fn apply_flype(d: &Diagram, t: &TangleRegion) -> Result<Diagram, FlypeError> {
    let n = d.crossing_count();
    if t.pivot >= n || t.crossings.iter().any(|&k| k >= n) || !t.crossings.windows(2).all(|w| w[0] < w[1]) {
        return Err(FlypeError::NotAdmissible);
    }
    let mask = mask_of(n, &t.crossings);
    if !is_tangle(d, &mask) {
        return Err(FlypeError::NotAdmissible);
    }
    match candidate(d, &mask, t.pivot) {
        Some((region, next)) if region == *t => Ok(next),
        _ => Err(FlypeError::NotAdmissible),
    }
}

/// Relabeling-invariant code: the least traversal code over all root slots.
pub fn canonical_form(d: &Diagram) -> Vec<u32> {
    let n = d.crossing_count();
    let mut best: Option<Vec<u32>> = None;
    for k in 0..n {
        for s in 0..4u8 {
            let code = traversal_code(d, Slot::new(k, s));
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

/// Breadth-first walk from `root`, reading each crossing counterclockwise from
/// the slot it was entered by and numbering arcs on first sight.
fn traversal_code(d: &Diagram, root: Slot) -> Vec<u32> {
    let n = d.crossing_count();
    let mut entry = vec![u8::MAX; n];
    let mut arc_id = vec![0u32; d.arc_count() + 1];
    let mut next = 1u32;
    let mut queue = std::collections::VecDeque::new();
    entry[root.crossing] = root.index;
    queue.push_back(root.crossing);
    let mut code = Vec::with_capacity(4 * n);
    while let Some(k) = queue.pop_front() {
        for j in 0..4u8 {
            let slot = Slot::new(k, entry[k] + j);
            let arc = d.arc_at(slot) as usize;
            if arc_id[arc] == 0 {
                arc_id[arc] = next;
                next += 1;
            }
            let far = d.other_end(slot);
            if entry[far.crossing] == u8::MAX {
                entry[far.crossing] = far.index;
                queue.push_back(far.crossing);
            }
            let flags = (d.is_incoming(slot) as u32) << 1 | slot.index.is_multiple_of(2) as u32;
            code.push(arc_id[arc] << 2 | flags);
        }
    }
    code
}

pub fn is_isomorphic(a: &Diagram, b: &Diagram) -> bool {
    a.crossing_count() == b.crossing_count() && canonical_form(a) == canonical_form(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RedFlag {
    pub depth: usize,
    pub tangle: TangleRegion,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub orbit_size: usize,
    pub fp_values: Vec<String>,
    pub char_polys: Vec<Vec<String>>,
    pub alexander: Vec<Vec<String>>,
    pub budget_exhausted: bool,
    pub red_flags: Vec<RedFlag>,
}

struct Invariants {
    fp: Rational,
    char_poly: Polynomial,
    alexander: Polynomial,
}

fn invariants_of(d: &Diagram) -> Result<Invariants, FlypeError> {
    let l = laplacian(&tait_graph(d)?);
    Ok(Invariants {
        fp: invariants::fp(&l)?,
        char_poly: crate::linalg::char_poly(&l).map_err(InvariantError::from)?,
        alexander: invariants::alexander(&l, 0)?.normalized,
    })
}

/// Breadth-first flype orbit up to `depth` moves, deduplicated by canonical
/// form and capped at `budget` distinct diagrams.
pub fn verify_invariance(d: &Diagram, depth: usize, budget: usize) -> Result<HarnessReport, FlypeError> {
    if let Some(reason) = d.validate().failure() {
        return Err(FlypeError::NotAccepted(reason));
    }
    let root = invariants_of(d)?;
    let sign = d.uniform_sign();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([canonical_form(d)]);
    let mut fps = BTreeSet::from([format_rational(&root.fp)]);
    let mut chars = BTreeSet::from([root.char_poly.to_strings()]);
    let mut alexs = BTreeSet::from([root.alexander.to_strings()]);
    let mut red_flags = Vec::new();
    let mut budget_exhausted = seen.len() > budget;
    let mut frontier = vec![d.clone()];
    for level in 1..=depth {
        if frontier.is_empty() || budget_exhausted {
            break;
        }
        let expanded: Vec<Vec<(TangleRegion, Diagram, Vec<u32>)>> = frontier
            .par_iter()
            .map(|f| {
                admissible_moves(f)
                    .into_iter()
                    .map(|(t, g)| {
                        let code = canonical_form(&g);
                        (t, g, code)
                    })
                    .collect()
            })
            .collect();
        let mut fresh = Vec::new();
        'merge: for batch in expanded {
            for (t, g, code) in batch {
                if seen.contains(&code) {
                    continue;
                }
                if seen.len() >= budget {
                    budget_exhausted = true;
                    break 'merge;
                }
                seen.insert(code);
                fresh.push((t, g));
            }
        }
        let computed: Vec<Result<Invariants, FlypeError>> = fresh.par_iter().map(|(_, g)| invariants_of(g)).collect();
        for ((t, g), inv) in fresh.iter().zip(computed) {
            let inv = inv?;
            let mut reasons = Vec::new();
            if inv.fp != root.fp {
                reasons.push(format!("fp {} differs from {}", format_rational(&inv.fp), format_rational(&root.fp)));
            }
            if inv.alexander != root.alexander {
                reasons.push("Alexander polynomial changed".to_string());
            }
            if g.crossing_count() != d.crossing_count() || g.uniform_sign() != sign {
                reasons.push("crossing data changed".to_string());
            }
            if !reasons.is_empty() {
                red_flags.push(RedFlag { depth: level, tangle: t.clone(), reason: reasons.join("; ") });
            }
            fps.insert(format_rational(&inv.fp));
            chars.insert(inv.char_poly.to_strings());
            alexs.insert(inv.alexander.to_strings());
        }
        frontier = fresh.into_iter().map(|(_, g)| g).collect();
    }
    Ok(HarnessReport {
        orbit_size: seen.len(),
        fp_values: fps.into_iter().collect(),
        char_polys: chars.into_iter().collect(),
        alexander: alexs.into_iter().collect(),
        budget_exhausted,
        red_flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::diagram::parse_pd;
    use crate::linalg::{permute_equivalent, ratio};

    fn lap(d: &Diagram) -> crate::linalg::RationalMatrix {
        laplacian(&tait_graph(d).unwrap())
    }

    #[test]
    fn bundled_tangle_takes_a_to_b() {
        let a = bundled::diagram("8a2A").unwrap();
        let b = bundled::diagram("8a2B").unwrap();
        let t = bundled::flype_tangle();
        assert!(find_flypes(&a).contains(&t));
        let g = apply_flype(&a, &t).unwrap();
        assert!(is_isomorphic(&g, &b));
        assert!(permute_equivalent(&lap(&g), &lap(&b)).is_some());
    }

    #[test]
    fn flype_back_restores_diagram() {
        for (name, d) in bundled::all() {
            for t in find_flypes(&d) {
                let g = apply_flype(&d, &t).unwrap();
                assert_eq!(g.crossing_count(), d.crossing_count(), "{name}");
                let back = find_flypes(&g)
                    .into_iter()
                    .any(|u| is_isomorphic(&apply_flype(&g, &u).unwrap(), &d));
                assert!(back, "{name}: no flype undoes {t:?}");
            }
        }
    }

    #[test]
    fn flypes_preserve_acceptance_and_invariants() {
        for (name, d) in bundled::all() {
            let base = invariants_of(&d).unwrap();
            for t in find_flypes(&d) {
                let g = apply_flype(&d, &t).unwrap();
                assert!(g.validate().accepted(), "{name} {t:?}");
                assert_eq!(g.uniform_sign(), d.uniform_sign());
                let inv = invariants_of(&g).unwrap();
                assert_eq!(inv.fp, base.fp, "{name} {t:?}");
                assert_eq!(inv.alexander, base.alexander, "{name} {t:?}");
            }
        }
    }

    #[test]
    fn trefoil_flypes_are_trivial() {
        let d = bundled::diagram("trefoil").unwrap();
        let t = find_flypes(&d);
        assert!(!t.is_empty());
        for r in &t {
            assert!(is_isomorphic(&apply_flype(&d, r).unwrap(), &d));
        }
        let report = verify_invariance(&d, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.orbit_size, 1);
        assert_eq!(report.fp_values, vec!["1"]);
        assert_eq!(report.char_polys.len(), 1);
    }

    #[test]
    fn two_crossing_link_has_no_flypes() {
        let hopf = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        assert!(find_flypes(&hopf).is_empty());
    }

    #[test]
    fn orbit_of_8a2a() {
        let d = bundled::diagram("8a2A").unwrap();
        let r = verify_invariance(&d, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.fp_values, vec!["8/3"]);
        assert!(r.char_polys.len() >= 2);
        assert_eq!(r.alexander.len(), 1);
        assert!(r.red_flags.is_empty());
        assert!(!r.budget_exhausted);
        assert_eq!(invariants_of(&d).unwrap().fp, ratio(8, 3));
    }

    #[test]
    fn budget_caps_exploration() {
        let d = bundled::diagram("8a2A").unwrap();
        let r = verify_invariance(&d, 4, 2).unwrap();
        assert_eq!(r.orbit_size, 2);
        assert!(r.budget_exhausted);
    }

    #[test]
    fn report_is_deterministic() {
        let d = bundled::diagram("8a2B").unwrap();
        let a = serde_json::to_string(&verify_invariance(&d, 2, DEFAULT_BUDGET).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_invariance(&d, 2, DEFAULT_BUDGET).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn foreign_tangle_rejected() {
        let d = bundled::diagram("8a2A").unwrap();
        let bad = TangleRegion { crossings: vec![0, 1], boundary_arcs: [1, 2, 3, 4], pivot: 7 };
        assert_eq!(apply_flype(&d, &bad), Err(FlypeError::NotAdmissible));
        let mut t = bundled::flype_tangle();
        t.pivot = 20;
        assert_eq!(apply_flype(&d, &t), Err(FlypeError::NotAdmissible));
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let b = parse_pd("X(3,6,4,1) X(5,2,6,3) X(1,4,2,5)").unwrap();
        let c = parse_pd("X(4,2,5,1) X(2,6,3,5) X(6,4,1,3)").unwrap();
        assert!(is_isomorphic(&a, &b));
        assert!(!is_isomorphic(&a, &c));
    }
}
