//! Parity-check inequalities and the separation oracle that finds the ones
//! violated at a point of the unit cube.
//!
//! For a check with neighborhood `N` and an odd subset `V` of `N` the
//! inequality is
//!
//! ```text
//! sum_{i in V} x_i - sum_{i in N \ V} x_i <= |V| - 1
//! ```
//!
//! At any `x` in `[0,1]^n` at most one of these can be violated per check,
//! and when one is, `V` consists of the largest entries of `x` on `N`. The
//! oracle therefore walks the odd prefixes of the neighborhood sorted by
//! decreasing value.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::code::ParityCheckCode;
use crate::error::{invalid, Error, Result};
use crate::lp::LpRow;

/// Minimum violation for an inequality to count as a cut.
pub const CUT_TOL: f64 = 1e-7;

/// Largest neighborhood for which all odd subsets are enumerated.
pub const MAX_ENUMERATED_DEGREE: usize = 20;

/// Which row of the (possibly extended) parity-check matrix an inequality
/// belongs to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckRef {
    /// Row `j` of `H`.
    Check(usize),
    /// Modulo-2 sum of the listed rows of `H`.
    Redundant(Vec<usize>),
}

/// A parity-check inequality `(N, V)` with `V` odd.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PcConstraint {
    pub check: CheckRef,
    /// Sorted variable indices of the row.
    pub neighborhood: Vec<usize>,
    /// Sorted odd-size subset of `neighborhood`.
    pub v_set: Vec<usize>,
}

impl PcConstraint {
    pub fn new(check: CheckRef, mut neighborhood: Vec<usize>, mut v_set: Vec<usize>) -> Result<Self> {
        neighborhood.sort_unstable();
        v_set.sort_unstable();
        let c = PcConstraint {
            check,
            neighborhood,
            v_set,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.v_set.len().is_multiple_of(2) {
            return Err(invalid(format!("|V| = {} is not odd", self.v_set.len())));
        }
        if self.neighborhood.windows(2).any(|w| w[0] >= w[1])
            || self.v_set.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(invalid("neighborhood and V must be sorted without repeats"));
        }
        if let Some(i) = self
            .v_set
            .iter()
            .find(|i| self.neighborhood.binary_search(i).is_err())
        {
            return Err(invalid(format!("variable {i} of V is not in N")));
        }
        Ok(())
    }

    fn in_v(&self, i: usize) -> bool {
        self.v_set.binary_search(&i).is_ok()
    }

    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.neighborhood
            .iter()
            .map(|&i| if self.in_v(i) { x[i] } else { -x[i] })
            .sum()
    }

    pub fn rhs(&self) -> f64 {
        (self.v_set.len() - 1) as f64
    }

    /// `lhs - rhs`; positive means violated.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.lhs(x) - self.rhs()
    }

    /// Whether a 0/1 word satisfies the inequality.
    pub fn holds_for_word(&self, word: &[u8]) -> bool {
        let lhs: i64 = self
            .neighborhood
            .iter()
            .map(|&i| {
                let b = word[i] as i64;
                if self.in_v(i) {
                    b
                } else {
                    -b
                }
            })
            .sum();
        lhs < self.v_set.len() as i64
    }

    pub fn to_row(&self) -> LpRow {
        let coeffs = self
            .neighborhood
            .iter()
            .map(|&i| (i, if self.in_v(i) { 1.0 } else { -1.0 }))
            .collect();
        LpRow::new(coeffs, self.rhs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintStatus {
    Slack,
    Active,
    Violated,
}

/// Classifies `c` at `x`: active when `|lhs - rhs| <= CUT_TOL`.
pub fn classify_constraint(c: &PcConstraint, x: &[f64]) -> Result<ConstraintStatus> {
    c.validate()?;
    if let Some(&i) = c.neighborhood.last() {
        if i >= x.len() {
            return Err(invalid(format!("variable {i} outside a point of length {}", x.len())));
        }
    }
    let gap = c.violation(x);
    Ok(if gap > CUT_TOL {
        ConstraintStatus::Violated
    } else if gap >= -CUT_TOL {
        ConstraintStatus::Active
    } else {
        ConstraintStatus::Slack
    })
}

/// A violated inequality and by how much.
#[derive(Debug, Clone, PartialEq)]
pub struct CutReport {
    pub constraint: PcConstraint,
    pub violation: f64,
}

/// How neighborhoods are put in decreasing order before the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortStrategy {
    /// One `O(n log n)` sort of `x`, then neighborhoods are filled in that order.
    #[default]
    Global,
    /// Each neighborhood sorted on its own; cheaper for sparse codes.
    PerCheck,
}

/// Decreasing value, ties by ascending index.
fn by_value_desc(x: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b))
}

/// The sorted sweep on a neighborhood already in decreasing order of `x`.
///
/// Tries `V` = the top 1, 3, 5, ... entries and stops as soon as the sum of
/// the top `v` entries is no longer above `v - 1`, since no larger prefix can
/// then be violated either.
pub fn sweep_sorted(check: CheckRef, sorted: &[usize], x: &[f64]) -> Option<CutReport> {
    let d = sorted.len();
    if d == 0 {
        return None;
    }
    let total: f64 = sorted.iter().map(|&i| x[i]).sum();
    let mut top = x[sorted[0]];
    let mut v = 1;
    loop {
        let gap = 2.0 * top - total - (v - 1) as f64;
        if gap > CUT_TOL {
            let mut neighborhood = sorted.to_vec();
            neighborhood.sort_unstable();
            let mut v_set = sorted[..v].to_vec();
            v_set.sort_unstable();
            let constraint = PcConstraint {
                check,
                neighborhood,
                v_set,
            };
            let violation = constraint.violation(x);
            return (violation > CUT_TOL).then_some(CutReport {
                constraint,
                violation,
            });
        }
        v += 2;
        if v > d {
            return None;
        }
        top += x[sorted[v - 2]] + x[sorted[v - 1]];
        if top <= (v - 1) as f64 {
            return None;
        }
    }
}

/// Sorts `support` by decreasing `x` and runs [`sweep_sorted`].
pub fn find_cut_on_support(check: CheckRef, support: &[usize], x: &[f64]) -> Option<CutReport> {
    let mut sorted = support.to_vec();
    sorted.sort_by(by_value_desc(x));
    sweep_sorted(check, &sorted, x)
}

/// The unique cut contributed by check `j` at `x`, if any.
pub fn find_cut_for_check(code: &ParityCheckCode, j: usize, x: &[f64]) -> Option<CutReport> {
    find_cut_on_support(CheckRef::Check(j), code.check_neighbors(j), x)
}

/// All cuts at `x`, at most one per check, in check order.
pub fn find_all_cuts(code: &ParityCheckCode, x: &[f64], strategy: SortStrategy) -> Vec<CutReport> {
    match strategy {
        SortStrategy::PerCheck => (0..code.m())
            .filter_map(|j| find_cut_for_check(code, j, x))
            .collect(),
        SortStrategy::Global => {
            let mut order: Vec<usize> = (0..code.n()).collect();
            order.sort_by(by_value_desc(x));
            let mut lists: Vec<Vec<usize>> = code
                .checks()
                .map(|row| Vec::with_capacity(row.len()))
                .collect();
            for &i in &order {
                for &j in code.var_neighbors(i) {
                    lists[j].push(i);
                }
            }
            lists
                .iter()
                .enumerate()
                .filter_map(|(j, sorted)| sweep_sorted(CheckRef::Check(j), sorted, x))
                .collect()
        }
    }
}

fn degree_guard(d: usize) -> Result<()> {
    if d > MAX_ENUMERATED_DEGREE {
        return Err(Error::Capacity {
            what: "odd-subset enumeration degree",
            limit: MAX_ENUMERATED_DEGREE,
            requested: d,
        });
    }
    Ok(())
}

/// Every odd-subset inequality of one row.
pub fn all_constraints(check: CheckRef, neighborhood: &[usize]) -> Result<Vec<PcConstraint>> {
    degree_guard(neighborhood.len())?;
    let mut neighborhood = neighborhood.to_vec();
    neighborhood.sort_unstable();
    let d = neighborhood.len();
    let mut out = Vec::with_capacity(1 << d.saturating_sub(1));
    for mask in 0u32..(1u32 << d) {
        if mask.count_ones() % 2 == 1 {
            let v_set = (0..d)
                .filter(|&b| (mask >> b) & 1 == 1)
                .map(|b| neighborhood[b])
                .collect();
            out.push(PcConstraint {
                check: check.clone(),
                neighborhood: neighborhood.clone(),
                v_set,
            });
        }
    }
    Ok(out)
}

/// Exhaustive separation over all odd subsets of a row.
pub fn brute_force_cuts_on(check: CheckRef, neighborhood: &[usize], x: &[f64]) -> Result<Vec<CutReport>> {
    degree_guard(neighborhood.len())?;
    let mut neighborhood = neighborhood.to_vec();
    neighborhood.sort_unstable();
    let d = neighborhood.len();
    let vals: Vec<f64> = neighborhood.iter().map(|&i| x[i]).collect();
    let total: f64 = vals.iter().sum();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << d) {
        let size = mask.count_ones();
        if size % 2 == 0 {
            continue;
        }
        let inside: f64 = (0..d).filter(|&b| (mask >> b) & 1 == 1).map(|b| vals[b]).sum();
        // cheap screen; survivors are re-evaluated exactly below
        if 2.0 * inside - total - (size as f64 - 1.0) <= CUT_TOL - 1e-9 {
            continue;
        }
        let v_set = (0..d)
            .filter(|&b| (mask >> b) & 1 == 1)
            .map(|b| neighborhood[b])
            .collect();
        let c = PcConstraint {
            check: check.clone(),
            neighborhood: neighborhood.clone(),
            v_set,
        };
        let violation = c.violation(x);
        if violation > CUT_TOL {
            out.push(CutReport {
                constraint: c,
                violation,
            });
        }
    }
    Ok(out)
}

/// Exhaustive separation for check `j`.
pub fn brute_force_cuts(code: &ParityCheckCode, j: usize, x: &[f64]) -> Result<Vec<CutReport>> {
    brute_force_cuts_on(CheckRef::Check(j), code.check_neighbors(j), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(n: &[usize], v: &[usize]) -> PcConstraint {
        PcConstraint::new(CheckRef::Check(0), n.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_constraint(&c(&[0, 1, 2], &[0]), &[1.0, 0.0, 0.0]).unwrap(),
            ConstraintStatus::Violated
        );
        assert_eq!(
            classify_constraint(&c(&[0, 1, 2], &[0, 1, 2]), &[1.0, 1.0, 0.0]).unwrap(),
            ConstraintStatus::Active
        );
        assert_eq!(
            classify_constraint(&c(&[0, 1, 2], &[0]), &[0.5, 0.5, 0.5]).unwrap(),
            ConstraintStatus::Slack
        );
    }

    #[test]
    fn classify_rejects_malformed() {
        assert!(PcConstraint::new(CheckRef::Check(0), vec![0, 1, 2], vec![0, 1]).is_err());
        assert!(PcConstraint::new(CheckRef::Check(0), vec![0, 1, 2], vec![5]).is_err());
        let bad = PcConstraint {
            check: CheckRef::Check(0),
            neighborhood: vec![0, 1, 2],
            v_set: vec![1, 2],
        };
        assert!(classify_constraint(&bad, &[0.0; 3]).is_err());
    }

    #[test]
    fn sweep_finds_top_three() {
        let x = [0.9, 0.9, 0.9, 0.1];
        let cut = find_cut_on_support(CheckRef::Check(0), &[0, 1, 2, 3], &x).unwrap();
        assert_eq!(cut.constraint.v_set, vec![0, 1, 2]);
        assert!((cut.violation - 0.6).abs() < 1e-12);
        let brute = brute_force_cuts_on(CheckRef::Check(0), &[0, 1, 2, 3], &x).unwrap();
        assert_eq!(brute.len(), 1);
        assert_eq!(brute[0].constraint, cut.constraint);
    }

    #[test]
    fn sweep_stops_on_growth_test() {
        let x = [0.9, 0.8, 0.3, 0.1];
        assert!(find_cut_on_support(CheckRef::Check(0), &[0, 1, 2, 3], &x).is_none());
        assert!(brute_force_cuts_on(CheckRef::Check(0), &[0, 1, 2, 3], &x)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn local_codeword_has_no_cut() {
        let x = [1.0, 1.0, 0.0, 0.0];
        assert!(find_cut_on_support(CheckRef::Check(0), &[0, 1, 2, 3], &x).is_none());
    }

    #[test]
    fn brute_force_examples() {
        let cuts = brute_force_cuts_on(CheckRef::Check(0), &[0, 1, 2], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].constraint.v_set, vec![0]);
        let half = [0.5; 5];
        assert!(brute_force_cuts_on(CheckRef::Check(0), &[0, 1, 2, 3, 4], &half)
            .unwrap()
            .is_empty());
        let wide: Vec<usize> = (0..21).collect();
        assert!(matches!(
            brute_force_cuts_on(CheckRef::Check(0), &wide, &[0.0; 21]),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn odd_degree_exhaustion() {
        // all ones on an odd neighborhood violates V = N only
        let x = [1.0; 3];
        let cut = find_cut_on_support(CheckRef::Check(0), &[0, 1, 2], &x).unwrap();
        assert_eq!(cut.constraint.v_set, vec![0, 1, 2]);
        // all ones on an even neighborhood is a local codeword
        assert!(find_cut_on_support(CheckRef::Check(0), &[0, 1, 2, 3], &[1.0; 4]).is_none());
    }

    #[test]
    fn constraint_row_shape() {
        let row = c(&[1, 3, 4], &[3]).to_row();
        assert_eq!(row.coeffs, vec![(1, -1.0), (3, 1.0), (4, -1.0)]);
        assert_eq!(row.rhs, 0.0);
    }

    #[test]
    fn constraint_count_per_check() {
        assert_eq!(all_constraints(CheckRef::Check(0), &[0, 1, 2, 3, 4, 5]).unwrap().len(), 32);
    }
}
