//! Slow, exhaustive reference computations for tests.
//!
//! Nothing here shares an algorithmic path with the code it is used to
//! check: LP optima come from enumerating vertices, ML decisions from the
//! full codebook, redundant-check cuts from every subset of rows.

use lpdec_core::cuts::{brute_force_cuts_on, CheckRef, CutReport};
use lpdec_core::{CodewordSet, LinearProgram, ParityCheckCode};

/// Minimum of `c^T x` over the vertices of `lp`, or `None` when no vertex is
/// feasible. The program must have at least one finite bound per variable
/// and a bounded objective.
pub fn vertex_enumeration_optimum(lp: &LinearProgram) -> Option<f64> {
    let n = lp.n();
    let mut best: Option<f64> = None;
    let mut fixed = vec![None; n];
    enumerate_bounds(lp, 0, &mut fixed, &mut best);
    best
}

fn enumerate_bounds(lp: &LinearProgram, i: usize, fixed: &mut Vec<Option<f64>>, best: &mut Option<f64>) {
    if i == lp.n() {
        let free: Vec<usize> = (0..lp.n()).filter(|&k| fixed[k].is_none()).collect();
        let mut chosen = Vec::new();
        choose_rows(lp, &free, fixed, 0, &mut chosen, best);
        return;
    }
    let options = [None, Some(lp.lower(i)), Some(lp.upper(i))];
    for opt in options {
        if let Some(v) = opt {
            if !v.is_finite() {
                continue;
            }
        }
        fixed[i] = opt;
        enumerate_bounds(lp, i + 1, fixed, best);
    }
    fixed[i] = None;
}

fn choose_rows(
    lp: &LinearProgram,
    free: &[usize],
    fixed: &[Option<f64>],
    start: usize,
    chosen: &mut Vec<usize>,
    best: &mut Option<f64>,
) {
    if chosen.len() == free.len() {
        if let Some(x) = solve_vertex(lp, free, fixed, chosen) {
            if feasible(lp, &x) {
                let obj: f64 = lp.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.is_none_or(|b| obj < b) {
                    *best = Some(obj);
                }
            }
        }
        return;
    }
    let need = free.len() - chosen.len();
    for r in start..lp.rows().len() {
        if lp.rows().len() - r < need {
            break;
        }
        chosen.push(r);
        choose_rows(lp, free, fixed, r + 1, chosen, best);
        chosen.pop();
    }
}

/// Solves the chosen rows as equalities for the free variables.
fn solve_vertex(lp: &LinearProgram, free: &[usize], fixed: &[Option<f64>], rows: &[usize]) -> Option<Vec<f64>> {
    let f = free.len();
    let mut x: Vec<f64> = fixed.iter().map(|v| v.unwrap_or(0.0)).collect();
    if f == 0 {
        return Some(x);
    }
    let col_of = |i: usize| free.iter().position(|&k| k == i);
    let mut a = vec![vec![0.0; f + 1]; f];
    for (eq, &r) in rows.iter().enumerate() {
        let row = &lp.rows()[r];
        let mut rhs = row.rhs;
        for &(i, c) in &row.coeffs {
            match col_of(i) {
                Some(col) => a[eq][col] += c,
                None => rhs -= c * x[i],
            }
        }
        a[eq][f] = rhs;
    }
    for col in 0..f {
        let piv = (col..f).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))?;
        if a[piv][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..f {
            if r != col {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    for k in col..=f {
                        a[r][k] -= factor * a[col][k];
                    }
                }
            }
        }
    }
    for (col, &i) in free.iter().enumerate() {
        x[i] = a[col][f] / a[col][col];
    }
    Some(x)
}

fn feasible(lp: &LinearProgram, x: &[f64]) -> bool {
    let tol = 1e-9;
    (0..lp.n()).all(|i| x[i] >= lp.lower(i) - tol && x[i] <= lp.upper(i) + tol)
        && lp.rows().iter().all(|r| r.activity(x) <= r.rhs + tol * (1.0 + r.rhs.abs()))
}

/// `min over codewords w of llr^T w` and one minimizer.
pub fn ml_decode(codebook: &CodewordSet, llr: &[f64]) -> (f64, Vec<u8>) {
    codebook
        .iter()
        .map(|w| (cost(llr, &w), w))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("a codebook always contains the zero word")
}

pub fn cost(llr: &[f64], word: &[u8]) -> f64 {
    llr.iter().zip(word).map(|(g, &b)| g * b as f64).sum()
}

/// Support of the GF(2) sum of `checks`, by counting ones per column.
pub fn xor_support(code: &ParityCheckCode, checks: &[usize]) -> Vec<usize> {
    let mut count = vec![0usize; code.n()];
    for &j in checks {
        for &i in code.check_neighbors(j) {
            count[i] += 1;
        }
    }
    (0..code.n()).filter(|&i| count[i] % 2 == 1).collect()
}

/// Every subset `T` of at least two checks whose row sum has a violated
/// odd-subset inequality at `x`, with all such inequalities.
pub fn exhaustive_rpc_cuts(code: &ParityCheckCode, x: &[f64]) -> Vec<(Vec<usize>, Vec<CutReport>)> {
    let m = code.m();
    assert!(m <= 16, "exhaustive RPC search needs a small number of checks");
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        let checks: Vec<usize> = (0..m).filter(|&j| (mask >> j) & 1 == 1).collect();
        let support = xor_support(code, &checks);
        if support.is_empty() || support.len() > 20 {
            continue;
        }
        let cuts = brute_force_cuts_on(CheckRef::Redundant(checks.clone()), &support, x)
            .expect("support within enumeration limit");
        if !cuts.is_empty() {
            out.push((checks, cuts));
        }
    }
    out
}

fn is_fractional(v: f64) -> bool {
    v > lpdec_core::INT_TOL && v < 1.0 - lpdec_core::INT_TOL
}

/// Whether the subgraph formed by `checks` and their fractional neighbors
/// contains a cycle.
///
/// Union-find over the subgraph's edges: a cycle exists exactly when some
/// edge joins two nodes that are already connected.
pub fn has_fractional_cycle(code: &ParityCheckCode, checks: &[usize], x: &[f64]) -> bool {
    let n = code.n();
    // nodes: variables 0..n, checks n..n+m
    let mut parent: Vec<usize> = (0..n + code.m()).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for &j in checks {
        for &i in code.check_neighbors(j) {
            if !is_fractional(x[i]) {
                continue;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
            if a == b {
                return true;
            }
            parent[a] = b;
        }
    }
    false
}
