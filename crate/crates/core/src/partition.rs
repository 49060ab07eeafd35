//! Breakpoint generators: uniform, geometric and seeded random partitions.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default span-ratio range of `random:N:seed`.
pub const DEFAULT_MAX_RATIO: f64 = 1e3;

/// Seeded generator used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `N` equal spans of `[0, 1]`.
pub fn uniform(n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// `N` spans growing by `ratio`, rescaled to `[0, 1]`.
pub fn geometric(n: usize, ratio: f64) -> Vec<f64> {
    from_spans((0..n).map(|k| ratio.powi(k as i32)))
}

/// `N` spans with lengths log-uniform in `[1, max_ratio]`, rescaled to `[0, 1]`.
pub fn random<R: Rng + ?Sized>(n: usize, max_ratio: f64, rng: &mut R) -> Vec<f64> {
    let top = max_ratio.max(1.0).ln();
    let spans: Vec<f64> = (0..n).map(|_| (rng.gen::<f64>() * top).exp()).collect();
    from_spans(spans)
}

/// Uniform integer breakpoints jittered by `U(−eps, eps)`, rescaled to `[0, 1]`.
pub fn jittered<R: Rng + ?Sized>(n: usize, eps: f64, rng: &mut R) -> Vec<f64> {
    let mut t: Vec<f64> = (0..=n)
        .map(|k| {
            let e = if k == 0 || k == n { 0.0 } else { rng.gen_range(-eps..=eps) };
            k as f64 + e
        })
        .collect();
    let scale = t[n];
    t.iter_mut().for_each(|v| *v /= scale);
    t
}

fn from_spans(spans: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut t = vec![0.0];
    for h in spans {
        let last = *t.last().unwrap();
        t.push(last + h);
    }
    let total = *t.last().unwrap();
    t.iter_mut().for_each(|v| *v /= total);
    *t.last_mut().unwrap() = 1.0;
    t
}

/// Textual partition description: `uniform:N`, `geometric:N:ratio`,
/// `random:N:seed`.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSpec {
    Uniform(usize),
    Geometric(usize, f64),
    Random(usize, u64),
}

impl PartitionSpec {
    pub fn spans(&self) -> usize {
        match *self {
            Self::Uniform(n) | Self::Geometric(n, _) | Self::Random(n, _) => n,
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::Uniform(n) => uniform(n),
            Self::Geometric(n, r) => geometric(n, r),
            Self::Random(n, seed) => random(n, DEFAULT_MAX_RATIO, &mut rng(seed)),
        }
    }
}

impl FromStr for PartitionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("unrecognised partition '{s}'"));
        let count = |p: &str| -> Result<usize> {
            match p.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(bad()),
            }
        };
        match parts.as_slice() {
            ["uniform", n] => Ok(Self::Uniform(count(n)?)),
            ["geometric", n, r] => {
                let r: f64 = r.parse().map_err(|_| bad())?;
                if !(r > 0.0 && r.is_finite()) {
                    return Err(bad());
                }
                Ok(Self::Geometric(count(n)?, r))
            }
            ["random", n, seed] => Ok(Self::Random(count(n)?, seed.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform(n) => write!(f, "uniform:{n}"),
            Self::Geometric(n, r) => write!(f, "geometric:{n}:{r}"),
            Self::Random(n, s) => write!(f, "random:{n}:{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["uniform:10", "geometric:5:1.5", "random:7:42"] {
            let p: PartitionSpec = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        for s in ["uniform:0", "uniform", "geometric:3:-1", "random:3", "foo:1"] {
            assert!(s.parse::<PartitionSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn generators_span_unit_interval() {
        let mut r = rng(7);
        for t in [uniform(6), geometric(6, 2.0), random(6, 1e6, &mut r), jittered(6, 0.2, &mut r)] {
            assert_eq!(t.len(), 7);
            assert_eq!(t[0], 0.0);
            assert_eq!(t[6], 1.0);
            assert!(t.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn random_is_seeded() {
        let a = PartitionSpec::Random(20, 3).breakpoints();
        let b = PartitionSpec::Random(20, 3).breakpoints();
        assert_eq!(a, b);
        let spans: Vec<f64> = a.windows(2).map(|w| w[1] - w[0]).collect();
        let (lo, hi) = spans
            .iter()
            .fold((f64::MAX, 0.0f64), |(l, h), &s| (l.min(s), h.max(s)));
        assert!(hi / lo <= 1e3 * (1.0 + 1e-9));
    }

    #[test]
    fn geometric_ratio() {
        let t = geometric(4, 3.0);
        let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        for w in h.windows(2) {
            assert!((w[1] / w[0] - 3.0).abs() < 1e-12);
        }
    }
}
