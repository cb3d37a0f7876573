//! Binary linear codes described by a sparse parity-check matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::gf2::{BitRow, Echelon};

/// Largest length for which [`enumerate_codewords`] will materialize the codebook.
pub const MAX_ENUMERATION_LENGTH: usize = 28;

/// A binary code given by its Tanner graph.
///
/// Check `j` constrains the variables in `check_neighbors(j)`; both adjacency
/// directions are kept sorted and are always consistent with each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckCode {
    n: usize,
    check_neighbors: Vec<Vec<usize>>,
    var_neighbors: Vec<Vec<usize>>,
}

impl ParityCheckCode {
    /// Builds a code from per-check variable lists. Lists are sorted; repeated
    /// or out-of-range indices are rejected.
    pub fn from_check_neighbors(n: usize, mut checks: Vec<Vec<usize>>) -> Result<Self> {
        let mut var_neighbors = vec![Vec::new(); n];
        for (j, row) in checks.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(invalid(format!("check {j} lists variable {} twice", w[0])));
            }
            for &i in row.iter() {
                if i >= n {
                    return Err(invalid(format!(
                        "check {j} references variable {i}, code length is {n}"
                    )));
                }
                var_neighbors[i].push(j);
            }
        }
        Ok(ParityCheckCode {
            n,
            check_neighbors: checks,
            var_neighbors,
        })
    }

    /// Builds a code from dense 0/1 rows of `H`.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("rows of H have different lengths"));
        }
        let checks = rows
            .iter()
            .map(|r| (0..n).filter(|&i| r[i] != 0).collect())
            .collect();
        Self::from_check_neighbors(n, checks)
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parity checks.
    pub fn m(&self) -> usize {
        self.check_neighbors.len()
    }

    pub fn check_neighbors(&self, j: usize) -> &[usize] {
        &self.check_neighbors[j]
    }

    pub fn var_neighbors(&self, i: usize) -> &[usize] {
        &self.var_neighbors[i]
    }

    pub fn checks(&self) -> impl ExactSizeIterator<Item = &[usize]> {
        self.check_neighbors.iter().map(Vec::as_slice)
    }

    pub fn max_check_degree(&self) -> usize {
        self.check_neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_var_degree(&self) -> usize {
        self.var_neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.check_neighbors.iter().map(Vec::len).sum()
    }

    /// True when `word` (0/1 entries) satisfies every check.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n
            && self
                .check_neighbors
                .iter()
                .all(|row| row.iter().filter(|&&i| word[i] != 0).count() % 2 == 0)
    }

    fn bit_rows(&self) -> Vec<BitRow> {
        self.check_neighbors
            .iter()
            .map(|row| BitRow::from_support(self.n, row))
            .collect()
    }

    /// GF(2) rank of the parity-check matrix.
    pub fn rank(&self) -> usize {
        Echelon::reduce(self.bit_rows(), self.n).rank()
    }

    /// Dimension `n - rank(H)`.
    pub fn dimension(&self) -> usize {
        self.n - self.rank()
    }

    /// A basis of the code (null space of `H`), one 0/1 vector per element.
    pub fn codeword_basis(&self) -> Vec<Vec<u8>> {
        Echelon::reduce(self.bit_rows(), self.n)
            .nullspace_basis()
            .into_iter()
            .map(|row| (0..self.n).map(|i| row.get(i) as u8).collect())
            .collect()
    }
}

/// Draws a uniformly random codeword as a random combination of `basis`.
pub fn random_codeword<R: Rng + ?Sized>(n: usize, basis: &[Vec<u8>], rng: &mut R) -> Vec<u8> {
    let mut word = vec![0u8; n];
    for b in basis {
        if rng.random::<bool>() {
            for (w, &bit) in word.iter_mut().zip(b) {
                *w ^= bit;
            }
        }
    }
    word
}

/// A redundant parity check: the modulo-2 sum of two or more rows of `H`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RpcRow {
    pub source_checks: Vec<usize>,
    pub support: Vec<usize>,
}

impl RpcRow {
    /// Rows with at most one variable cannot host a useful odd-subset cut.
    pub fn is_degenerate(&self) -> bool {
        self.support.len() <= 1
    }
}

/// Adds the rows `checks` of `H` over GF(2).
pub fn combine_rows(code: &ParityCheckCode, checks: &[usize]) -> Result<RpcRow> {
    let mut source: Vec<usize> = checks.to_vec();
    source.sort_unstable();
    source.dedup();
    if source.len() < 2 {
        return Err(invalid("a redundant parity check needs at least two distinct rows"));
    }
    if let Some(&bad) = source.iter().find(|&&j| j >= code.m()) {
        return Err(invalid(format!("check index {bad} out of range")));
    }
    let mut parity = vec![false; code.n()];
    for &j in &source {
        for &i in code.check_neighbors(j) {
            parity[i] ^= true;
        }
    }
    let support = (0..code.n()).filter(|&i| parity[i]).collect();
    Ok(RpcRow {
        source_checks: source,
        support,
    })
}

/// Every codeword of a short code, packed as bit masks (bit `i` = position `i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordSet {
    pub n: usize,
    pub k: usize,
    pub words: Vec<u32>,
}

impl CodewordSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn bits(&self, idx: usize) -> Vec<u8> {
        unpack(self.words[idx], self.n)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.words.iter().map(move |&w| unpack(w, self.n))
    }
}

fn unpack(word: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((word >> i) & 1) as u8).collect()
}

/// Enumerates the null space of `H` for codes with `n <= 28`.
pub fn enumerate_codewords(code: &ParityCheckCode) -> Result<CodewordSet> {
    if code.n() > MAX_ENUMERATION_LENGTH {
        return Err(Error::Capacity {
            what: "codeword enumeration length",
            limit: MAX_ENUMERATION_LENGTH,
            requested: code.n(),
        });
    }
    let basis: Vec<u32> = Echelon::reduce(code.bit_rows(), code.n())
        .nullspace_basis()
        .iter()
        .map(|row| row.ones().fold(0u32, |acc, i| acc | (1 << i)))
        .collect();
    let k = basis.len();
    let mut words = Vec::with_capacity(1 << k);
    for sel in 0u32..(1u32 << k) {
        let w = basis
            .iter()
            .enumerate()
            .filter(|(b, _)| (sel >> b) & 1 == 1)
            .fold(0u32, |acc, (_, &v)| acc ^ v);
        words.push(w);
    }
    words.sort_unstable();
    Ok(CodewordSet {
        n: code.n(),
        k,
        words,
    })
}

/// Random `(dv, dc)`-regular code; `m = n*dv/dc`.
pub fn random_regular_code(n: usize, dv: usize, dc: usize, seed: u64) -> Result<ParityCheckCode> {
    if dv < 1 || dc < 2 {
        return Err(invalid("need dv >= 1 and dc >= 2"));
    }
    if !(n * dv).is_multiple_of(dc) {
        return Err(invalid(format!("n*dv = {} is not divisible by dc = {dc}", n * dv)));
    }
    random_code(n, dv, n * dv / dc, seed)
}

/// Random code with variable degree `dv` and `m` checks whose degrees differ
/// by at most one.
///
/// Configuration model: variable sockets are paired with a seeded shuffle of
/// the check sockets, then double edges are removed by random edge swaps
/// (at most `10 * n * dv` attempts).
pub fn random_code(n: usize, dv: usize, m: usize, seed: u64) -> Result<ParityCheckCode> {
    if n == 0 || m == 0 || dv == 0 {
        return Err(invalid("n, m and dv must be positive"));
    }
    if dv > m {
        return Err(invalid(format!("dv = {dv} exceeds the number of checks {m}")));
    }
    let edges = n * dv;
    let (base, extra) = (edges / m, edges % m);
    if base + (extra > 0) as usize > n {
        return Err(invalid("check degree would exceed code length"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // socket s belongs to variable s / dv; sockets[s] is its check
    let mut sockets: Vec<usize> = (0..m)
        .flat_map(|j| core::iter::repeat_n(j, base + (j < extra) as usize))
        .collect();
    sockets.shuffle(&mut rng);

    let var_of = |s: usize| s / dv;
    let has_edge = |sockets: &[usize], v: usize, c: usize, skip: usize| {
        (v * dv..(v + 1) * dv).any(|s| s != skip && sockets[s] == c)
    };
    let budget = 10 * n * dv;
    let mut attempts = 0;
    loop {
        let dup = (0..edges).find(|&s| has_edge(&sockets, var_of(s), sockets[s], s));
        let Some(s1) = dup else { break };
        loop {
            if attempts == budget {
                return Err(Error::Construction(format!(
                    "double edges remain after {budget} swap attempts"
                )));
            }
            attempts += 1;
            let s2 = rng.random_range(0..edges);
            let (v1, c1, v2, c2) = (var_of(s1), sockets[s1], var_of(s2), sockets[s2]);
            if c1 == c2 || v1 == v2 {
                continue;
            }
            if has_edge(&sockets, v1, c2, s1) || has_edge(&sockets, v2, c1, s2) {
                continue;
            }
            sockets.swap(s1, s2);
            break;
        }
    }

    let mut checks = vec![Vec::new(); m];
    for (s, &c) in sockets.iter().enumerate() {
        checks[c].push(var_of(s));
    }
    ParityCheckCode::from_check_neighbors(n, checks)
}
