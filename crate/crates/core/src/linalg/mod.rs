//! Exact dense linear algebra over the rationals.

mod bareiss;
mod matrix;
mod poly;
mod rational;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use matrix::RationalMatrix;
pub use poly::Polynomial;
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};

pub(crate) use rational::is_integral;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("incompatible dimensions {left:?} and {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("rows have differing lengths")]
    Ragged,
    #[error("not a rational number: {0:?}")]
    BadEntry(String),
    #[error("matrix is singular")]
    Singular,
    #[error("interior block is singular")]
    SingularInterior,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("pseudoinverse violates Penrose condition {0}")]
    PenroseViolation(u8),
}

/// Rows scaled to integers; returns the rows and the product of the scale factors.
fn integer_rows(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = m
        .row_iter()
        .map(|row| {
            let k = rational::denominator_lcm(row);
            let ints = row
                .iter()
                .map(|q| q.numer() * (&k / q.denom()))
                .collect();
            scale *= k;
            ints
        })
        .collect();
    (rows, scale)
}

/// Exact rank by fraction-free row reduction.
pub fn rank(m: &RationalMatrix) -> usize {
    bareiss::rank(integer_rows(m).0)
}

/// Exact determinant by Bareiss elimination on the integer-scaled rows.
pub fn det(m: &RationalMatrix) -> Result<Rational, LinalgError> {
    m.require_square()?;
    let (rows, scale) = integer_rows(m);
    Ok(Rational::new(bareiss::determinant(rows), scale))
}

/// Gauss–Jordan inverse.
pub fn inverse(m: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    let n = m.require_square()?;
    let mut a = m.clone();
    let mut inv = RationalMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[(i, col)].is_zero()).ok_or(LinalgError::Singular)?;
        a.swap_rows(pivot, col);
        inv.swap_rows(pivot, col);
        let p = a[(col, col)].clone();
        for j in 0..n {
            a[(col, j)] /= &p;
            inv[(col, j)] /= &p;
        }
        for i in 0..n {
            if i == col || a[(i, col)].is_zero() {
                continue;
            }
            let f = a[(i, col)].clone();
            for j in 0..n {
                let (ac, ic) = (a[(col, j)].clone(), inv[(col, j)].clone());
                a[(i, j)] -= &f * ac;
                inv[(i, j)] -= &f * ic;
            }
        }
    }
    Ok(inv)
}

/// Reduced row echelon form and its pivot columns.
fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let lead = a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] /= &lead;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = a[(r, j)].clone();
                a[(i, j)] -= &f * v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Which of the four Penrose conditions hold for a candidate pseudoinverse `x` of `m`.
pub fn penrose_conditions(m: &RationalMatrix, x: &RationalMatrix) -> [bool; 4] {
    let mx = m * x;
    let xm = x * m;
    [
        &mx * m == *m,
        &xm * x == *x,
        mx.transpose() == mx,
        xm.transpose() == xm,
    ]
}

/// True when the all-ones vector spans both the kernel and the cokernel.
fn ones_is_null_vector(m: &RationalMatrix) -> bool {
    let n = m.rows();
    n > 0 && m.is_balanced() && rank(m) == n - 1
}

/// Moore–Penrose pseudoinverse, verified against all four Penrose conditions.
///
/// Balanced matrices of corank one (the Laplacian case) use
/// `(M + J/n)⁻¹ − J/n`; everything else goes through a rank factorization
/// `M = B·C`, `M⁺ = Cᵀ(CCᵀ)⁻¹(BᵀB)⁻¹Bᵀ`.
pub fn pseudoinverse(m: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    let n = m.require_square()?;
    let x = if ones_is_null_vector(m) {
        let j = RationalMatrix::ones(n, n).scale(&ratio(1, n as i64));
        &inverse(&(m + &j))? - &j
    } else {
        rank_factorization_pinv(m)?
    };
    if let Some(k) = penrose_conditions(m, &x).iter().position(|ok| !ok) {
        return Err(LinalgError::PenroseViolation(k as u8 + 1));
    }
    Ok(x)
}

fn rank_factorization_pinv(m: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    let (reduced, pivots) = rref(m);
    let r = pivots.len();
    if r == 0 {
        return Ok(RationalMatrix::zeros(m.cols(), m.rows()));
    }
    let all_rows: Vec<usize> = (0..m.rows()).collect();
    let all_cols: Vec<usize> = (0..m.cols()).collect();
    let b = m.select(&all_rows, &pivots);
    let c = reduced.select(&(0..r).collect::<Vec<_>>(), &all_cols);
    let ct = c.transpose();
    let bt = b.transpose();
    let left = inverse(&(&c * &ct))?;
    let right = inverse(&(&bt * &b))?;
    Ok(&(&(&ct * &left) * &right) * &bt)
}

/// `det(M − λI)` by the Faddeev–LeVerrier recurrence.
pub fn char_poly(m: &RationalMatrix) -> Result<Polynomial, LinalgError> {
    let n = m.require_square()?;
    // c[k] is the coefficient of λ^k in det(λI − M).
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut acc = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &acc;
        for i in 0..n {
            next[(i, i)] += &c[n + 1 - k];
        }
        acc = next;
        c[n - k] = -(m * &acc).trace() / rat(k as i64);
    }
    let p = Polynomial::new(c);
    Ok(if n % 2 == 1 { -&p } else { p })
}

/// Schur complement `M_ext − M_eb · M_int⁻¹ · M_ie` onto the `boundary` indices
/// (kept in the given order); the interior is every other index, ascending.
pub fn schur_complement(m: &RationalMatrix, boundary: &[usize]) -> Result<RationalMatrix, LinalgError> {
    let n = m.require_square()?;
    let mut is_boundary = vec![false; n];
    for &b in boundary {
        if b >= n {
            return Err(LinalgError::IndexOutOfRange { index: b, dim: n });
        }
        is_boundary[b] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&i| !is_boundary[i]).collect();
    let ext = m.select(boundary, boundary);
    if interior.is_empty() {
        return Ok(ext);
    }
    let eb = m.select(boundary, &interior);
    let ie = m.select(&interior, boundary);
    let int_inv = inverse(&m.select(&interior, &interior)).map_err(|e| match e {
        LinalgError::Singular => LinalgError::SingularInterior,
        other => other,
    })?;
    Ok(&ext - &(&(&eb * &int_inv) * &ie))
}

/// A permutation `p` with `a.permute(&p) == b`, found by backtracking.
pub fn permute_equivalent(a: &RationalMatrix, b: &RationalMatrix) -> Option<Vec<usize>> {
    fn extend(a: &RationalMatrix, b: &RationalMatrix, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = perm.len();
        if i == a.rows() {
            return true;
        }
        for t in 0..b.rows() {
            if used[t] || a[(i, i)] != b[(t, t)] {
                continue;
            }
            let fits = perm
                .iter()
                .enumerate()
                .all(|(j, &u)| a[(i, j)] == b[(t, u)] && a[(j, i)] == b[(u, t)]);
            if fits {
                perm.push(t);
                used[t] = true;
                if extend(a, b, perm, used) {
                    return true;
                }
                used[t] = false;
                perm.pop();
            }
        }
        false
    }
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return None;
    }
    let mut perm = Vec::with_capacity(a.rows());
    let mut used = vec![false; a.rows()];
    extend(a, b, &mut perm, &mut used).then_some(perm)
}

/// Determinant of a square matrix of polynomials.
pub(crate) fn polynomial_det(rows: Vec<Vec<Polynomial>>) -> Polynomial {
    bareiss::determinant(rows)
}
