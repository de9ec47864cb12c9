//! Method identifiers for the ten sampling algorithms.

use std::fmt;
use std::str::FromStr;

/// Reservoir (fixed-size, unknown-length stream) methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReservoirMethod {
    /// Vitter's Algorithm R: uniform, without replacement, one variate per item.
    AlgR,
    /// Li's Algorithm L: same law as AlgR via skip counting, O(K log(N/K)) variates.
    AlgL,
    /// Park et al. skip-based uniform sampling with replacement.
    AlgRswrSkip,
    /// Efraimidis-Spirakis A-Res: weighted without replacement via priority keys.
    AlgARes,
    /// Efraimidis-Spirakis A-ExpJ: same law as A-Res via exponential jumps.
    AlgAExpJ,
    /// Weight-threshold skip sampling, weighted with replacement.
    AlgWrswrSkip,
}

impl ReservoirMethod {
    pub const ALL: [ReservoirMethod; 6] = [
        ReservoirMethod::AlgR,
        ReservoirMethod::AlgL,
        ReservoirMethod::AlgRswrSkip,
        ReservoirMethod::AlgARes,
        ReservoirMethod::AlgAExpJ,
        ReservoirMethod::AlgWrswrSkip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReservoirMethod::AlgR => "AlgR",
            ReservoirMethod::AlgL => "AlgL",
            ReservoirMethod::AlgRswrSkip => "AlgRSWRSKIP",
            ReservoirMethod::AlgARes => "AlgARes",
            ReservoirMethod::AlgAExpJ => "AlgAExpJ",
            ReservoirMethod::AlgWrswrSkip => "AlgWRSWRSKIP",
        }
    }

    pub fn weighted(self) -> bool {
        matches!(
            self,
            ReservoirMethod::AlgARes | ReservoirMethod::AlgAExpJ | ReservoirMethod::AlgWrswrSkip
        )
    }

    pub fn with_replacement(self) -> bool {
        matches!(
            self,
            ReservoirMethod::AlgRswrSkip | ReservoirMethod::AlgWrswrSkip
        )
    }
}

impl fmt::Display for ReservoirMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sequential (known-total, skip-ahead) methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequentialMethod {
    /// Vitter's Algorithm D: uniform without replacement, O(K) variates.
    AlgD,
    /// Shekelyan-Cormode hidden shuffle: same law as AlgD, high/low split.
    AlgHiddenShuffle,
    /// Bentley-Saxe sorted uniforms: uniform with replacement.
    AlgOrdSwr,
    /// Sorted weighted thresholds: weighted with replacement.
    AlgOrdWswr,
}

impl SequentialMethod {
    pub const ALL: [SequentialMethod; 4] = [
        SequentialMethod::AlgD,
        SequentialMethod::AlgHiddenShuffle,
        SequentialMethod::AlgOrdSwr,
        SequentialMethod::AlgOrdWswr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequentialMethod::AlgD => "AlgD",
            SequentialMethod::AlgHiddenShuffle => "AlgHiddenShuffle",
            SequentialMethod::AlgOrdSwr => "AlgORDSWR",
            SequentialMethod::AlgOrdWswr => "AlgORDWSWR",
        }
    }

    pub fn weighted(self) -> bool {
        matches!(self, SequentialMethod::AlgOrdWswr)
    }

    pub fn with_replacement(self) -> bool {
        matches!(
            self,
            SequentialMethod::AlgOrdSwr | SequentialMethod::AlgOrdWswr
        )
    }
}

impl fmt::Display for SequentialMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Any of the ten methods; used in sample metadata and CLI dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Reservoir(ReservoirMethod),
    Sequential(SequentialMethod),
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Reservoir(m) => m.name(),
            Method::Sequential(m) => m.name(),
        }
    }

    pub fn weighted(self) -> bool {
        match self {
            Method::Reservoir(m) => m.weighted(),
            Method::Sequential(m) => m.weighted(),
        }
    }

    pub fn with_replacement(self) -> bool {
        match self {
            Method::Reservoir(m) => m.with_replacement(),
            Method::Sequential(m) => m.with_replacement(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let all = ReservoirMethod::ALL
            .iter()
            .map(|&m| Method::Reservoir(m))
            .chain(SequentialMethod::ALL.iter().map(|&m| Method::Sequential(m)));
        for m in all {
            if m.name().eq_ignore_ascii_case(s) {
                return Ok(m);
            }
        }
        Err(format!("unknown method `{s}`"))
    }
}
