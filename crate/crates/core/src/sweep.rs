//! Exhaustive checks over the admissible triples in a cube `[0, N]³`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::construct::{realize, verify};
use crate::geom2d::VolumeTriple;

/// How a sweep evaluates its triples. `Parallel` needs the `parallel` feature
/// and runs serially without it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExecMode {
    #[default]
    Serial,
    Parallel,
}

impl ExecMode {
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Maps `f` over `items`, keeping input order in the output.
pub fn map_ordered<T, R, F>(items: &[T], mode: ExecMode, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Triples with `0 ≤ A, B, C ≤ bound` and `AC ≤ B²`, in lexicographic order.
pub fn admissible_triples(bound: u32) -> Vec<VolumeTriple> {
    let n = bound as i128;
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                if a * c <= b * b {
                    out.push(VolumeTriple::new(a, b, c));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub triple: VolumeTriple,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub bound: u32,
    pub checked: usize,
    pub failures: Vec<SweepFailure>,
    #[serde(with = "seconds")]
    pub wall_time: Duration,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Equal up to `wall_time`.
    pub fn same_outcome(&self, other: &SweepReport) -> bool {
        self.bound == other.bound && self.checked == other.checked && self.failures == other.failures
    }
}

mod seconds {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

/// Runs `check` on every admissible triple up to `bound`.
pub fn sweep_with<F>(bound: u32, mode: ExecMode, check: F) -> SweepReport
where
    F: Fn(VolumeTriple) -> Result<(), String> + Sync + Send,
{
    let start = Instant::now();
    let triples = admissible_triples(bound);
    let failures = map_ordered(&triples, mode, |&t| check(t).err().map(|message| SweepFailure { triple: t, message }))
        .into_iter()
        .flatten()
        .collect();
    SweepReport { bound, checked: triples.len(), failures, wall_time: start.elapsed() }
}

/// Realizes and verifies every admissible triple up to `bound`.
pub fn sweep_realize(bound: u32, mode: ExecMode) -> SweepReport {
    sweep_with(bound, mode, |t| {
        let r = realize(t).map_err(|e| e.to_string())?;
        let report = verify(&r.p, &r.q, t);
        if report.passed {
            Ok(())
        } else {
            Err(format!("computed {:?}", report.computed))
        }
    })
}
