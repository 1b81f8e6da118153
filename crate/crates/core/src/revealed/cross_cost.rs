use super::ProbeResponseDataset;
use crate::{Error, Result};

/// `a[t][s]`: extra cost, at epoch `t`'s prices, of buying epoch `s`'s bundle
/// instead of its own. The diagonal is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CrossCostMatrix {
    pub fn from_dataset(ds: &ProbeResponseDataset) -> Self {
        Self::from_vectors(ds.probes(), ds.responses()).expect("dataset dimensions are validated")
    }

    /// Build from raw vectors without sign checks. Noisy responses or noisy
    /// probes go through here.
    pub fn from_vectors(probes: &[Vec<f64>], responses: &[Vec<f64>]) -> Result<Self> {
        let n = probes.len();
        if responses.len() != n {
            return Err(Error::Dimension(format!("{n} probes but {} responses", responses.len())));
        }
        if n == 0 {
            return Err(Error::InvalidInput("no epochs".into()));
        }
        let m = probes[0].len();
        if probes.iter().chain(responses).any(|v| v.len() != m) {
            return Err(Error::Dimension("probe/response dimensions differ".into()));
        }
        let mut data = vec![0.0; n * n];
        for t in 0..n {
            let alpha = &probes[t];
            let own = &responses[t];
            for s in 0..n {
                if s != t {
                    data[t * n + s] = alpha
                        .iter()
                        .zip(&responses[s])
                        .zip(own)
                        .map(|((a, bs), bt)| a * (bs - bt))
                        .sum();
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Build from an arbitrary off-diagonal cost; the diagonal is forced to zero.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for t in 0..n {
            for s in 0..n {
                if s != t {
                    data[t * n + s] = f(t, s);
                }
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, t: usize, s: usize) -> f64 {
        self.data[t * self.n + s]
    }

    /// Every off-diagonal entry shifted up by `phi`.
    pub fn relaxed(&self, phi: f64) -> Self {
        Self::from_fn(self.n, |t, s| self.get(t, s) + phi)
    }

    /// Largest `-a[t][s]` over `t != s`, floored at zero.
    pub fn max_shortfall(&self) -> f64 {
        let mut hi = 0.0f64;
        for t in 0..self.n {
            for s in 0..self.n {
                if s != t {
                    hi = hi.max(-self.get(t, s));
                }
            }
        }
        hi
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }
}
