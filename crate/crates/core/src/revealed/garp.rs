use super::{CrossCostMatrix, ProbeResponseDataset};

/// Absolute tolerance on cross-cost comparisons. `a <= GARP_TOL` counts as a
/// weak revealed preference, `a < -GARP_TOL` as a strict one.
pub const GARP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarpVerdict {
    pub consistent: bool,
    /// Epoch indices `c_0, …, c_k` (0-based). Every hop `c_i -> c_{i+1}` is a
    /// weak revealed preference and the closing hop `c_k -> c_0` is strict.
    pub violating_cycle: Option<Vec<usize>>,
}

impl GarpVerdict {
    pub(crate) fn consistent() -> Self {
        Self { consistent: true, violating_cycle: None }
    }
}

pub fn check_garp(ds: &ProbeResponseDataset) -> GarpVerdict {
    check_cross_cost(&CrossCostMatrix::from_dataset(ds))
}

/// Warshall closure of the weak relation, then a search for a closed path
/// whose last hop is strict. O(N³).
pub fn check_cross_cost(a: &CrossCostMatrix) -> GarpVerdict {
    let closure = Closure::new(a);
    let n = a.len();
    for t in 0..n {
        for s in 0..n {
            if s != t && closure.reach[t * n + s] && a.get(s, t) < -GARP_TOL {
                let cycle = closure.path(t, s);
                return GarpVerdict { consistent: false, violating_cycle: Some(cycle) };
            }
        }
    }
    GarpVerdict::consistent()
}

pub(crate) struct Closure {
    pub n: usize,
    pub reach: Vec<bool>,
    next: Vec<usize>,
}

impl Closure {
    pub fn new(a: &CrossCostMatrix) -> Self {
        let n = a.len();
        let mut reach = vec![false; n * n];
        let mut next = vec![usize::MAX; n * n];
        for t in 0..n {
            for s in 0..n {
                if t == s || a.get(t, s) <= GARP_TOL {
                    reach[t * n + s] = true;
                    next[t * n + s] = s;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if !reach[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if reach[k * n + j] && !reach[i * n + j] {
                        reach[i * n + j] = true;
                        next[i * n + j] = next[i * n + k];
                    }
                }
            }
        }
        Self { n, reach, next }
    }

    /// Node sequence of a weak path from `from` to `to`, both included.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut out = vec![from];
        let mut cur = from;
        while cur != to {
            cur = self.next[cur * self.n + to];
            out.push(cur);
        }
        out
    }
}
