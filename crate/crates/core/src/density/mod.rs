//! The dispersion/density condition checked at finite horizons.
//!
//! For a point `x` and each `n`, the checkers search the least `k` such that
//! for every `l` in `(k, l_max]` and every block index `i` (a real `i` in
//! `-n..n`, or a word `s` of length `n` on the Cantor space) some gap index
//! `j <= k` (or word `t` of length `k`) names a cell that misses the set.
//! Verdicts carry every witness, so they can be replayed against the raw
//! presentation.

pub mod cantor;
pub mod certificate;
pub mod extract;
pub mod real;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cantorsets::BitWord;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use cantor::{check_density_cantor, check_dispersion_cantor, compose_intersection_certificate, CantorChecker};
pub use certificate::{replay_cantor, replay_real, Certificate};
pub use extract::{extract_subsequence, refutation_to_witnesses, Extraction, ExtractionStage};
pub use real::{check_density_r, check_dispersion_r};

/// Identifies the tie-breaking rules used by every search: smallest `j`,
/// lexicographically least `t`, smallest `k`, most frequent then smallest
/// `i0`.
pub const POLICY_VERSION: &str = "tie-break/v1";

/// Finite bounds for the unbounded quantifiers and the oracle resolution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Horizons {
    pub n_max: u32,
    pub k_max: u32,
    pub l_max: u32,
    pub cantor_depth: u32,
    pub eps: Rational,
    pub delta: Rational,
    pub refute_min: u32,
}

impl Default for Horizons {
    fn default() -> Self {
        Horizons {
            n_max: 4,
            k_max: 32,
            l_max: 256,
            cantor_depth: 3,
            eps: Rational::new(1, 64),
            delta: Rational::new(1, 256),
            refute_min: 8,
        }
    }
}

impl Horizons {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Horizons(m.into()));
        if self.n_max < 1 {
            return bad("n_max must be at least 1");
        }
        if self.k_max < 1 {
            return bad("k_max must be at least 1");
        }
        if self.l_max <= self.k_max {
            return bad("l_max must exceed k_max");
        }
        if self.cantor_depth < 1 {
            return bad("cantor_depth must be at least 1");
        }
        if !self.delta.is_positive() || self.delta >= self.eps {
            return bad("resolution needs 0 < delta < eps");
        }
        if self.refute_min < 1 {
            return bad("refute_min must be at least 1");
        }
        Ok(())
    }
}

/// One certified stage: the chosen `k` and one witness per `(l, i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage<W> {
    pub n: u32,
    pub k: u32,
    pub witnesses: Vec<W>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<W, F> {
    Verified { stages: Vec<Stage<W>>, exact: bool },
    Refuted { n0: u32, witnesses: Vec<F>, exact: bool },
    Inconclusive { horizons: Horizons, reason: String },
}

impl<W, F> Verdict<W, F> {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Verdict::Verified { exact, .. } | Verdict::Refuted { exact, .. } => *exact,
            Verdict::Inconclusive { .. } => false,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Verified { .. } => "verified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    /// The certified `k` of stage `n`.
    pub fn k_at(&self, n: u32) -> Option<u32>
    where
        W: Clone,
    {
        match self {
            Verdict::Verified { stages, .. } => stages.iter().find(|s| s.n == n).map(|s| s.k),
            _ => None,
        }
    }
}

/// `(l, i, j)`: the window `(1/l)((i k + j - 1)/(n k), (i k + j)/(n k))` misses the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, i64, u32)", into = "(u32, i64, u32)")]
pub struct RealWitness {
    pub l: u32,
    pub i: i64,
    pub j: u32,
}

/// `(l, i)`: every cell of block `i` meets the set at scale `1/l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, i64)", into = "(u32, i64)")]
pub struct RealFailure {
    pub l: u32,
    pub i: i64,
}

/// `(l, s, t)`: the cylinder `U((x|l) s t)` misses the set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, BitWord, BitWord)", into = "(u32, BitWord, BitWord)")]
pub struct CantorWitness {
    pub l: u32,
    pub s: BitWord,
    pub t: BitWord,
}

/// `(l, s)`: every extension of `(x|l) s` by `k` bits meets the set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, BitWord)", into = "(u32, BitWord)")]
pub struct CantorFailure {
    pub l: u32,
    pub s: BitWord,
}

macro_rules! tuple_conv {
    ($ty:ident, ($($f:ident: $t:ty),*)) => {
        impl From<($($t),*)> for $ty {
            fn from(($($f),*): ($($t),*)) -> Self {
                $ty { $($f),* }
            }
        }
        impl From<$ty> for ($($t),*) {
            fn from(v: $ty) -> Self {
                ($(v.$f),*)
            }
        }
    };
}

tuple_conv!(RealWitness, (l: u32, i: i64, j: u32));
tuple_conv!(RealFailure, (l: u32, i: i64));
tuple_conv!(CantorWitness, (l: u32, s: BitWord, t: BitWord));
tuple_conv!(CantorFailure, (l: u32, s: BitWord));

pub type RealVerdict = Verdict<RealWitness, RealFailure>;
pub type CantorVerdict = Verdict<CantorWitness, CantorFailure>;

/// Running digest of every emptiness query a checker issues, in order.
#[derive(Clone, Default)]
pub struct Trace(Sha256);

impl Trace {
    pub fn new() -> Trace {
        Trace::default()
    }

    pub fn record(&mut self, parts: &[&[u8]]) {
        for p in parts {
            self.0.update((p.len() as u64).to_le_bytes());
            self.0.update(p);
        }
    }

    pub fn digest(self) -> String {
        hex::encode(self.0.finalize())
    }
}
