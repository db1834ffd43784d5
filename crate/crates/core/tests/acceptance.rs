//! Acceptance checks, one line per criterion. Run with `cargo test --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use knotres::bundled;
use knotres::diagram::Diagram;
use knotres::flype::{apply_flype, find_flypes, verify_invariance, DEFAULT_BUDGET};
use knotres::invariants::{alexander, fp, fp_via_resistance, rank_invariant, trace_identity_check};
use knotres::linalg::{self, penrose_conditions, rat, ratio, Polynomial, Rational, RationalMatrix};
use knotres::tait::{from_edge_list, laplacian, tait_graph, EdgeListJson, TaitGraph};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lap_of(name: &str) -> RationalMatrix {
    laplacian(&tait_graph(&bundled::diagram(name).unwrap()).unwrap())
}

const L_8A2A: [&[i64]; 5] = [
    &[-1, 1, 0, 0, 0],
    &[0, -2, 1, 1, 0],
    &[0, 0, -2, 1, 1],
    &[1, 0, 1, -2, 0],
    &[0, 1, 0, 0, -1],
];
const L_8A2B: [&[i64]; 5] = [
    &[-1, 1, 0, 0, 0],
    &[0, -2, 1, 0, 1],
    &[1, 0, -2, 1, 0],
    &[0, 1, 1, -2, 0],
    &[0, 0, 0, 1, -1],
];
const P75_8A2A: [&[i64]; 5] = [
    &[-48, -3, 12, 12, 27],
    &[12, -18, -3, -3, 12],
    &[17, 12, -23, 2, -8],
    &[-8, 12, 2, -23, 17],
    &[27, -3, 12, 12, -48],
];
const P75_8A2B: [&[i64]; 5] = [
    &[-44, -4, 16, 21, 11],
    &[16, -19, 1, 6, -4],
    &[-9, 6, -24, 6, 21],
    &[11, 1, -4, -24, 16],
    &[26, 16, 11, -9, -44],
];

fn laplacian_reproduction() -> Outcome {
    for (name, want) in [("8a2A", L_8A2A), ("8a2B", L_8A2B)] {
        let got = lap_of(name);
        ensure(got == RationalMatrix::from_i64(&want), || format!("{name}: got {got}"))?;
    }
    Ok("both 5x5 Laplacians match in bundled vertex order".into())
}

fn pseudoinverse_reproduction() -> Outcome {
    for (name, want) in [("8a2A", P75_8A2A), ("8a2B", P75_8A2B)] {
        let l = lap_of(name);
        let p = linalg::pseudoinverse(&l).map_err(|e| e.to_string())?;
        let scaled = p.scale(&rat(75));
        ensure(scaled == RationalMatrix::from_i64(&want), || format!("{name}: 75 L+ = {scaled}"))?;
        let conds = penrose_conditions(&l, &p);
        ensure(conds.iter().all(|&c| c), || format!("{name}: Penrose {conds:?}"))?;
    }
    Ok("75 L+ matches both printed matrices, all four Penrose conditions hold".into())
}

/// Greville's column recursion for the pseudoinverse.
fn greville(a: &RationalMatrix) -> RationalMatrix {
    let (m, n) = (a.rows(), a.cols());
    let col = |k: usize| -> Vec<Rational> { (0..m).map(|i| a[(i, k)].clone()).collect() };
    let dot = |u: &[Rational], v: &[Rational]| -> Rational { u.iter().zip(v).map(|(x, y)| x * y).sum() };
    // pinv rows: pinv[k] is the k-th row (length m)
    let a1 = col(0);
    let nn = dot(&a1, &a1);
    let mut pinv: Vec<Vec<Rational>> = if nn.is_zero() {
        vec![vec![Rational::zero(); m]]
    } else {
        vec![a1.iter().map(|x| x / &nn).collect()]
    };
    for k in 1..n {
        let ak = col(k);
        let d: Vec<Rational> = pinv.iter().map(|row| dot(row, &ak)).collect();
        let c: Vec<Rational> = (0..m)
            .map(|i| &ak[i] - (0..k).map(|j| &a[(i, j)] * &d[j]).sum::<Rational>())
            .collect();
        let cc = dot(&c, &c);
        let b: Vec<Rational> = if !cc.is_zero() {
            c.iter().map(|x| x / &cc).collect()
        } else {
            let scale = Rational::one() / (Rational::one() + dot(&d, &d));
            (0..m)
                .map(|i| &scale * (0..k).map(|j| &d[j] * &pinv[j][i]).sum::<Rational>())
                .collect()
        };
        for (j, row) in pinv.iter_mut().enumerate() {
            for i in 0..m {
                row[i] -= &d[j] * &b[i];
            }
        }
        pinv.push(b);
    }
    RationalMatrix::from_rows(pinv).unwrap()
}

fn brute_fp(l: &RationalMatrix) -> Rational {
    let p = greville(l);
    (0..l.rows()).flat_map(|i| (0..l.cols()).map(move |j| (i, j))).map(|(i, j)| &l[(i, j)] * &p[(i, j)]).sum()
}

fn fp_values() -> Outcome {
    for name in ["8a2A", "8a2B"] {
        let v = fp(&lap_of(name)).map_err(|e| e.to_string())?;
        ensure(v == ratio(8, 3), || format!("{name}: fp = {v}"))?;
    }
    for name in ["torus3", "torus5", "torus7"] {
        let l = lap_of(name);
        let v = fp(&l).map_err(|e| e.to_string())?;
        let oracle = brute_fp(&l);
        ensure(v == rat(1) && oracle == rat(1), || format!("{name}: fp = {v}, oracle = {oracle}"))?;
    }
    Ok("fp = 8/3 for 8a2A, 8a2B; fp = 1 for torus n = 3, 5, 7 (Greville oracle agrees)".into())
}

fn char_polys() -> Outcome {
    let lam = |c: &[i64]| Polynomial::from_i64(c);
    let want_a = lam(&[0, -15, -32, -24, -8, -1]);
    let want_b = lam(&[0, -15, -31, -24, -8, -1]);
    let a = linalg::char_poly(&lap_of("8a2A")).map_err(|e| e.to_string())?;
    let b = linalg::char_poly(&lap_of("8a2B")).map_err(|e| e.to_string())?;
    ensure(a == want_a, || format!("8a2A: {}", a.display_in("λ")))?;
    ensure(b == want_b, || format!("8a2B: {}", b.display_in("λ")))?;
    let differing: Vec<usize> = (0..=5).filter(|&k| a.coeff(k) != b.coeff(k)).collect();
    ensure(differing == vec![2], || format!("differing degrees {differing:?}"))?;
    Ok(format!("{} vs {}, differing only at λ^2", a.display_in("λ"), b.display_in("λ")))
}

/// Connected balanced multidigraphs without loops, up to `max_edges` arcs.
fn balanced_digraphs(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let arcs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut excess = vec![0i64; n];
    fn rec(
        idx: usize,
        arcs: &[(usize, usize)],
        left: usize,
        chosen: &mut Vec<(usize, usize)>,
        excess: &mut [i64],
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let need: i64 = excess.iter().filter(|&&e| e > 0).sum();
        if need as usize > left {
            return;
        }
        if idx == arcs.len() {
            if need == 0 && !chosen.is_empty() {
                out.push(chosen.clone());
            }
            return;
        }
        rec(idx + 1, arcs, left, chosen, excess, out);
        let (u, v) = arcs[idx];
        let mut pushed = 0;
        while pushed < left {
            chosen.push((u, v));
            excess[u] += 1;
            excess[v] -= 1;
            pushed += 1;
            rec(idx + 1, arcs, left - pushed, chosen, excess, out);
        }
        for _ in 0..pushed {
            chosen.pop();
        }
        excess[u] -= pushed as i64;
        excess[v] += pushed as i64;
    }
    rec(0, &arcs, max_edges, &mut chosen, &mut excess, &mut out);
    out.retain(|edges| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(u, v) in edges {
                if seen[u] != seen[v] {
                    seen[u] = true;
                    seen[v] = true;
                    changed = true;
                }
            }
        }
        seen.iter().all(|&s| s)
    });
    out
}

/// Smallest relabeled sorted edge list over all vertex permutations.
fn canonical(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (p[u], p[v])).collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn oracle_holds(g: &TaitGraph) -> Result<(), String> {
    let l = laplacian(g);
    let a = fp(&l).map_err(|e| e.to_string())?;
    let b = fp_via_resistance(g).map_err(|e| e.to_string())?;
    let (t, m) = trace_identity_check(&l).map_err(|e| e.to_string())?;
    ensure(a == b && t == m, || format!("{:?}: fp {a}, resistance {b}, tr(L^T R) {t}", g.to_edge_list().edges))
}

fn oracle_equivalence() -> Outcome {
    let mut bundled_count = 0;
    for (name, d) in bundled::all() {
        oracle_holds(&tait_graph(&d).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        bundled_count += 1;
    }
    for (name, g) in bundled::edge_lists() {
        oracle_holds(&g).map_err(|e| format!("{name}: {e}"))?;
        bundled_count += 1;
    }
    let single = EdgeListJson { n: 1, edges: vec![], order: None };
    oracle_holds(&from_edge_list(&single, true).unwrap())?;
    let mut classes = 1;
    for n in 2..=5 {
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for edges in balanced_digraphs(n, 8) {
            if !seen.insert(canonical(&edges, &perms)) {
                continue;
            }
            for w in [1i64, -1] {
                let spec = EdgeListJson {
                    n,
                    edges: edges.iter().map(|&(u, v)| [u as i64, v as i64, w]).collect(),
                    order: None,
                };
                oracle_holds(&from_edge_list(&spec, true).map_err(|e| e.to_string())?)?;
            }
        }
        classes += seen.len();
    }
    Ok(format!(
        "{bundled_count} bundled graphs and {classes} isomorphism classes of connected balanced digraphs (n <= 5, <= 8 edges, both weights)"
    ))
}

/// Accepted diagrams: bundled ones plus everything one flype away.
fn accepted_diagrams() -> Vec<(String, Diagram)> {
    let mut out = Vec::new();
    for (name, d) in bundled::all() {
        for (i, t) in find_flypes(&d).iter().enumerate() {
            out.push((format!("{name}/flype{i}"), apply_flype(&d, t).unwrap()));
        }
        out.push((name.to_string(), d));
    }
    out
}

fn rank_invariant_check() -> Outcome {
    let all = accepted_diagrams();
    for (name, d) in &all {
        let g = tait_graph(d).map_err(|e| format!("{name}: {e}"))?;
        let r = rank_invariant(&laplacian(&g)).map_err(|e| format!("{name}: {e}"))?;
        ensure(r + 1 == g.vertex_count(), || format!("{name}: rank {r}, n {}", g.vertex_count()))?;
    }
    Ok(format!("trace(L L+) = rank(L) = n - 1 on {} accepted diagrams", all.len()))
}

fn flype_harness() -> Outcome {
    let a = bundled::diagram("8a2A").unwrap();
    let flyped = apply_flype(&a, &bundled::flype_tangle()).map_err(|e| e.to_string())?;
    let l = laplacian(&tait_graph(&flyped).unwrap());
    let lb = lap_of("8a2B");
    let found = permutations(5).into_iter().find(|p| l.permute(p) == lb);
    ensure(found.is_some(), || format!("flyped Laplacian {l} is not a relabeling of L(8a2B)"))?;
    let report = verify_invariance(&a, 2, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(report.fp_values == vec!["8/3".to_string()], || format!("fp values {:?}", report.fp_values))?;
    ensure(report.char_polys.len() >= 2, || format!("char polys {:?}", report.char_polys))?;
    Ok(format!(
        "flype gives L(8a2B) under permutation {:?}; orbit of {} diagrams, fp values {:?}, {} characteristic polynomials",
        found.unwrap(),
        report.orbit_size,
        report.fp_values,
        report.char_polys.len()
    ))
}

/// Cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<Polynomial>]) -> Polynomial {
    if m.is_empty() {
        return Polynomial::one();
    }
    let mut acc = Polynomial::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &m[0][j] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn alexander_check() -> Outcome {
    let trefoil = laplacian(&tait_graph(&bundled::diagram("trefoil").unwrap()).unwrap());
    let delta = alexander(&trefoil, 0).map_err(|e| e.to_string())?.normalized;
    ensure(delta == Polynomial::from_i64(&[1, -1, 1]), || format!("trefoil: {}", delta.display_in("t")))?;
    let mut graphs: Vec<(String, TaitGraph)> =
        bundled::all().into_iter().map(|(n, d)| (n.to_string(), tait_graph(&d).unwrap())).collect();
    graphs.extend(bundled::edge_lists().into_iter().map(|(n, g)| (format!("{n} edge list"), g)));
    for (name, g) in &graphs {
        let l = laplacian(g);
        let first = alexander(&l, 0).map_err(|e| e.to_string())?.normalized;
        for k in 0..l.rows() {
            let a = alexander(&l, k).map_err(|e| e.to_string())?;
            ensure(a.normalized == first, || format!("{name}: deletion {k} gives {}", a.normalized.display_in("t")))?;
            if l.rows() <= 6 {
                let s = l.minor(k);
                let rows: Vec<Vec<Polynomial>> = (0..s.rows())
                    .map(|i| (0..s.rows()).map(|j| Polynomial::new(vec![s[(i, j)].clone(), -s[(j, i)].clone()])).collect())
                    .collect();
                ensure(cofactor_det(&rows) == a.raw, || format!("{name}: cofactor oracle disagrees at {k}"))?;
            }
        }
    }
    Ok(format!(
        "trefoil gives {}; every deletion agrees on {} bundled graphs",
        delta.display_in("t"),
        graphs.len()
    ))
}

fn algebraic_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut graphs: Vec<RationalMatrix> = bundled::all().iter().map(|(_, d)| laplacian(&tait_graph(d).unwrap())).collect();
    graphs.extend(bundled::edge_lists().iter().map(|(_, g)| laplacian(g)));
    for trial in 0..100 {
        let l = &graphs[rng.gen_range(0..graphs.len())];
        let base = fp(l).map_err(|e| e.to_string())?;
        let mut perm: Vec<usize> = (0..l.rows()).collect();
        perm.shuffle(&mut rng);
        let sign = if rng.gen_bool(0.5) { rat(-1) } else { rat(1) };
        let p = RationalMatrix::permutation_matrix(&perm);
        let conj = &(&p.transpose() * l) * &p;
        let fp_of = |m: &RationalMatrix| fp(m).map_err(|e| e.to_string());
        ensure(fp_of(&-l)? == base, || format!("trial {trial}: fp(-L)"))?;
        ensure(fp_of(&l.transpose())? == base, || format!("trial {trial}: fp(L^T)"))?;
        ensure(fp_of(&conj.scale(&sign))? == base, || format!("trial {trial}: fp(±P^T L P)"))?;
    }
    Ok("fp(-L) = fp(L^T) = fp(±P^T L P) = fp(L) over 100 seeded trials".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Laplacian reproduction", laplacian_reproduction),
        ("pseudoinverse reproduction", pseudoinverse_reproduction),
        ("fp values", fp_values),
        ("characteristic polynomials", char_polys),
        ("oracle equivalence", oracle_equivalence),
        ("rank invariant", rank_invariant_check),
        ("flype harness", flype_harness),
        ("Alexander polynomial", alexander_check),
        ("algebraic identities", algebraic_identities),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
