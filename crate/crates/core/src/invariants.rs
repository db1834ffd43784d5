//! The trace invariant `FP = tr(LᵀL⁺)` and the quantities checked against it.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    self, format_rational, is_integral, polynomial_det, rat, ratio, LinalgError, Polynomial, Rational, RationalMatrix,
};
use crate::tait::{laplacian, TaitGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("edge weights are not all equal")]
    NonUniformWeights,
    #[error("vertex {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("trace(L L+) = {trace} does not match rank {rank}")]
    RankMismatch { trace: String, rank: usize },
}

/// `tr(AᵀB) = Σ A_ij B_ij`.
fn frobenius_product(a: &RationalMatrix, b: &RationalMatrix) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = &a[(i, j)];
            if !x.is_zero() {
                acc += x * &b[(i, j)];
            }
        }
    }
    acc
}

/// `tr(Lᵀ L⁺)`.
pub fn fp(l: &RationalMatrix) -> Result<Rational, InvariantError> {
    let p = linalg::pseudoinverse(l)?;
    Ok(frobenius_product(l, &p))
}

/// `tr(L L⁺)`, checked to be the integer `rank(L)`.
pub fn rank_invariant(l: &RationalMatrix) -> Result<usize, InvariantError> {
    let p = linalg::pseudoinverse(l)?;
    rank_from(l, &p)
}

fn rank_from(l: &RationalMatrix, p: &RationalMatrix) -> Result<usize, InvariantError> {
    let t = (l * p).trace();
    let r = linalg::rank(l);
    if is_integral(&t) && t == rat(r as i64) {
        Ok(r)
    } else {
        Err(InvariantError::RankMismatch { trace: format_rational(&t), rank: r })
    }
}

/// `r_ij = L⁺_ii + L⁺_jj − 2 L⁺_ij` from a pseudoinverse.
pub fn resistance_from_pseudoinverse(p: &RationalMatrix) -> RationalMatrix {
    let two = rat(2);
    RationalMatrix::from_fn(p.rows(), p.cols(), |i, j| &p[(i, i)] + &p[(j, j)] - &two * &p[(i, j)])
}

pub fn resistance_matrix(l: &RationalMatrix) -> Result<RationalMatrix, InvariantError> {
    Ok(resistance_from_pseudoinverse(&linalg::pseudoinverse(l)?))
}

/// `(ω/2) Σ_e r(tail e, head e)`, parallel edges counted separately.
pub fn fp_via_resistance(g: &TaitGraph) -> Result<Rational, InvariantError> {
    let omega = match g.edges() {
        [] => 1,
        _ => g.uniform_weight().ok_or(InvariantError::NonUniformWeights)?,
    };
    let r = resistance_matrix(&laplacian(g))?;
    Ok(edge_resistance_sum(g, &r) * ratio(omega as i64, 2))
}

fn edge_resistance_sum(g: &TaitGraph, r: &RationalMatrix) -> Rational {
    g.edges().iter().map(|e| r[(e.tail, e.head)].clone()).sum()
}

/// `(tr(LᵀR), −2·FP)`; the two agree whenever `𝟙` lies in both kernels of `L`.
pub fn trace_identity_check(l: &RationalMatrix) -> Result<(Rational, Rational), InvariantError> {
    let p = linalg::pseudoinverse(l)?;
    let r = resistance_from_pseudoinverse(&p);
    Ok((frobenius_product(l, &r), rat(-2) * frobenius_product(l, &p)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alexander {
    /// `det(S − tSᵀ)` as computed.
    pub raw: Polynomial,
    /// `raw` times the unit `±t^k` making the constant term positive.
    pub normalized: Polynomial,
}

/// Deletes row and column `delete` to get `S`, then takes `det(S − tSᵀ)`.
pub fn alexander(l: &RationalMatrix, delete: usize) -> Result<Alexander, InvariantError> {
    let n = l.require_square()?;
    if delete >= n {
        return Err(InvariantError::IndexOutOfRange { index: delete, n });
    }
    let s = l.minor(delete);
    let m = s.rows();
    let rows = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| Polynomial::new(vec![s[(i, j)].clone(), -s[(j, i)].clone()]))
                .collect()
        })
        .collect();
    let raw = polynomial_det(rows);
    let normalized = raw.normalize_unit();
    Ok(Alexander { raw, normalized })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Checks {
    /// Trace formula agrees with the edge-resistance sum; `None` when the
    /// weights are not uniform or the graph is unbalanced.
    pub oracle: Option<bool>,
    pub trace_identity: bool,
    pub penrose: bool,
    pub balanced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub n: usize,
    pub omega: Option<i32>,
    pub fp: Rational,
    pub rank_inv: usize,
    pub laplacian: RationalMatrix,
    pub pseudoinverse: RationalMatrix,
    pub resistance: RationalMatrix,
    pub edge_resistance_sum: Rational,
    pub alexander: Alexander,
    pub char_poly: Polynomial,
    pub checks: Checks,
}

/// JSON shape of [`InvariantReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReportJson {
    pub n: usize,
    pub omega: Option<i32>,
    pub fp: String,
    pub rank: usize,
    pub char_poly: Vec<String>,
    pub alexander: Vec<String>,
    pub resistance: Vec<Vec<String>>,
    pub checks: Checks,
}

impl InvariantReport {
    pub fn to_json(&self) -> InvariantReportJson {
        InvariantReportJson {
            n: self.n,
            omega: self.omega,
            fp: format_rational(&self.fp),
            rank: self.rank_inv,
            char_poly: self.char_poly.to_strings(),
            alexander: self.alexander.normalized.to_strings(),
            resistance: self.resistance.to_strings(),
            checks: self.checks,
        }
    }
}

/// Every invariant of one graph, with the cross-checks between them.
pub fn report(g: &TaitGraph) -> Result<InvariantReport, InvariantError> {
    let l = laplacian(g);
    let n = g.vertex_count();
    let (pinv, (char_poly, alex)) = rayon::join(
        || linalg::pseudoinverse(&l),
        || rayon::join(|| linalg::char_poly(&l), || alexander(&l, 0)),
    );
    let p = pinv?;
    let char_poly = char_poly?;
    let alexander = if n == 0 {
        Alexander { raw: Polynomial::one(), normalized: Polynomial::one() }
    } else {
        alex?
    };
    let fp = frobenius_product(&l, &p);
    let rank_inv = rank_from(&l, &p)?;
    let resistance = resistance_from_pseudoinverse(&p);
    let edge_sum = edge_resistance_sum(g, &resistance);
    let omega = g.uniform_weight();
    let balanced = g.is_balanced();
    let oracle = match omega {
        Some(w) if balanced => Some(&edge_sum * ratio(w as i64, 2) == fp),
        _ => None,
    };
    let trace_identity = frobenius_product(&l, &resistance) == rat(-2) * &fp;
    Ok(InvariantReport {
        n,
        omega,
        fp,
        rank_inv,
        checks: Checks { oracle, trace_identity, penrose: true, balanced },
        laplacian: l,
        pseudoinverse: p,
        resistance,
        edge_resistance_sum: edge_sum,
        alexander,
        char_poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tait::{from_edge_list, EdgeListJson};

    fn cycle(n: usize, w: i64) -> TaitGraph {
        let spec = EdgeListJson { n, edges: (0..n).map(|i| [i as i64, ((i + 1) % n) as i64, w]).collect(), order: None };
        from_edge_list(&spec, true).unwrap()
    }

    fn two_cycle() -> TaitGraph {
        let spec = EdgeListJson { n: 2, edges: vec![[0, 1, 1], [1, 0, 1]], order: None };
        from_edge_list(&spec, true).unwrap()
    }

    #[test]
    fn cycles_have_fp_one() {
        for n in [3, 5, 7] {
            for w in [1, -1] {
                let g = cycle(n, w);
                assert_eq!(fp(&laplacian(&g)).unwrap(), rat(1), "n={n} w={w}");
                assert_eq!(fp_via_resistance(&g).unwrap(), rat(1));
            }
        }
    }

    #[test]
    fn three_cycle_edge_resistance() {
        let r = resistance_matrix(&laplacian(&cycle(3, 1))).unwrap();
        assert_eq!(r[(0, 1)], ratio(2, 3));
        assert_eq!(r[(1, 2)], ratio(2, 3));
        assert_eq!(r[(2, 0)], ratio(2, 3));
    }

    #[test]
    fn two_vertex_resistance() {
        let g = two_cycle();
        let r = resistance_matrix(&laplacian(&g)).unwrap();
        assert_eq!(r[(0, 1)], rat(1));
        assert_eq!(r.diagonal(), vec![rat(0), rat(0)]);
        assert_eq!(fp_via_resistance(&g).unwrap(), rat(1));
    }

    #[test]
    fn rank_invariant_examples() {
        assert_eq!(rank_invariant(&RationalMatrix::zeros(3, 3)).unwrap(), 0);
        assert_eq!(rank_invariant(&laplacian(&cycle(3, 1))).unwrap(), 2);
    }

    #[test]
    fn trace_identity_examples() {
        let (a, b) = trace_identity_check(&RationalMatrix::zeros(3, 3)).unwrap();
        assert_eq!((a, b), (rat(0), rat(0)));
        let (a, b) = trace_identity_check(&laplacian(&cycle(5, -1))).unwrap();
        assert_eq!((a, b), (rat(-2), rat(-2)));
    }

    #[test]
    fn nonuniform_weights_rejected() {
        let spec = EdgeListJson { n: 2, edges: vec![[0, 1, 1], [1, 0, -1]], order: None };
        let g = from_edge_list(&spec, false).unwrap();
        assert_eq!(fp_via_resistance(&g), Err(InvariantError::NonUniformWeights));
    }

    #[test]
    fn trefoil_alexander() {
        let l = laplacian(&cycle(3, -1));
        let a = alexander(&l, 2).unwrap();
        assert_eq!(a.normalized, Polynomial::from_i64(&[1, -1, 1]));
        for k in 0..3 {
            assert_eq!(alexander(&l, k).unwrap().normalized, a.normalized);
        }
        assert_eq!(
            alexander(&l, 3),
            Err(InvariantError::IndexOutOfRange { index: 3, n: 3 })
        );
    }

    #[test]
    fn report_for_cycle() {
        let r = report(&cycle(3, 1)).unwrap();
        assert_eq!(r.fp, rat(1));
        assert_eq!(r.rank_inv, 2);
        assert_eq!(r.alexander.normalized, Polynomial::from_i64(&[1, -1, 1]));
        assert_eq!(r.checks.oracle, Some(true));
        assert!(r.checks.trace_identity);
    }

    #[test]
    fn report_flags_unbalanced_input() {
        let spec = EdgeListJson { n: 3, edges: vec![[0, 1, 1], [1, 2, 1]], order: None };
        let r = report(&from_edge_list(&spec, false).unwrap()).unwrap();
        assert!(!r.checks.balanced);
        assert_eq!(r.checks.oracle, None);
    }

    fn sub_resistance(r: &RationalMatrix, idx: &[usize]) -> RationalMatrix {
        r.select(idx, idx)
    }

    #[test]
    fn schur_preserves_resistance_on_symmetric_graphs() {
        let spec = EdgeListJson {
            n: 4,
            edges: vec![[0, 1, 1], [1, 0, 1], [1, 2, 1], [2, 1, 1], [2, 3, 1], [3, 2, 1], [3, 0, 1], [0, 3, 1], [0, 2, 1], [2, 0, 1]],
            order: None,
        };
        let l = laplacian(&from_edge_list(&spec, true).unwrap());
        let boundary = [0, 1, 3];
        let s = linalg::schur_complement(&l, &boundary).unwrap();
        assert_eq!(resistance_matrix(&s).unwrap(), sub_resistance(&resistance_matrix(&l).unwrap(), &boundary));
    }

    #[test]
    fn schur_preserves_symmetrized_resistance_on_directed_graphs() {
        let g = crate::bundled::edge_lists().into_iter().find(|(n, _)| *n == "8a2A").unwrap().1;
        let l = laplacian(&g);
        let r = resistance_matrix(&l).unwrap();
        let mut checked = 0;
        for boundary in [vec![0, 1, 2], vec![0, 2, 4], vec![1, 3, 4], vec![0, 1, 2, 3]] {
            let Ok(s) = linalg::schur_complement(&l, &boundary) else { continue };
            let rs = resistance_matrix(&s).unwrap();
            let rr = sub_resistance(&r, &boundary);
            assert_eq!(&rs + &rs.transpose(), &rr + &rr.transpose(), "{boundary:?}");
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn alexander_degree_bound() {
        for (name, g) in crate::bundled::edge_lists() {
            let l = laplacian(&g);
            let a = alexander(&l, 0).unwrap().normalized;
            assert!(a.degree().unwrap() < g.vertex_count(), "{name}");
        }
        let g = crate::bundled::edge_lists().into_iter().find(|(n, _)| *n == "8a2A").unwrap().1;
        assert_eq!(alexander(&laplacian(&g), 0).unwrap().normalized.degree(), Some(4));
    }
}
