use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which dissimilarity drives the step size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMode {
    #[default]
    Hamming,
    /// `L - POS(P_B, P_W)`.
    PosRegion,
}

impl FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hamming" => Ok(DistanceMode::Hamming),
            "posregion" | "pos" => Ok(DistanceMode::PosRegion),
            other => Err(Error::Config(format!("unknown distance mode `{other}`"))),
        }
    }
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMode::Hamming => "hamming",
            DistanceMode::PosRegion => "posregion",
        })
    }
}

/// Objects x features at or below which the feature-proportional parameters apply.
pub const SMALL_TABLE_CELLS: usize = 15_000;

pub const DEFAULT_MAX_SHUFFLES: usize = 50;
pub const DEFAULT_STALL_SHUFFLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of memeplexes.
    pub memeplexes: usize,
    /// Frogs per memeplex.
    pub frogs_per_memeplex: usize,
    /// Evolution rounds per memeplex between shuffles.
    pub evolution_steps: usize,
    /// Submemeplex size.
    pub submemeplex: usize,
    /// Maximum step size in bits.
    pub max_step: usize,
    pub distance_mode: DistanceMode,
    pub max_shuffles: usize,
    /// Stop once the best (fitness, cardinality) is unchanged for this many shuffles.
    pub stall_shuffles: usize,
    pub rng_seed: u64,
}

impl SearchConfig {
    /// Total population `m * n`.
    pub fn population(&self) -> usize {
        self.memeplexes * self.frogs_per_memeplex
    }

    /// Feature-proportional parameters for small tables, fixed ones otherwise, clamped to
    /// `m >= 2`, `n >= 3`, `2 <= q <= n`, `1 <= s_max <= L`, `N >= 1`.
    pub fn auto(objects: usize, features: usize) -> Self {
        let l = features.max(1);
        let scaled = |k: f64| (k * l as f64 - 1e-9).ceil() as usize;
        let (m, n, evo, q, smax) = if objects.saturating_mul(l) <= SMALL_TABLE_CELLS {
            (scaled(2.20), scaled(0.70), scaled(0.50), scaled(0.45), scaled(0.50))
        } else {
            (30, 30, 5, 15, scaled(0.45))
        };
        let n = n.max(3);
        SearchConfig {
            memeplexes: m.max(2),
            frogs_per_memeplex: n,
            evolution_steps: evo.max(1),
            submemeplex: q.clamp(2, n),
            max_step: smax.clamp(1, l),
            distance_mode: DistanceMode::Hamming,
            max_shuffles: DEFAULT_MAX_SHUFFLES,
            stall_shuffles: DEFAULT_STALL_SHUFFLES,
            rng_seed: 0,
        }
    }

    /// The fixed large-table parameter set, regardless of table size.
    pub fn fixed(features: usize) -> Self {
        Self::auto(usize::MAX, features)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_distance(mut self, mode: DistanceMode) -> Self {
        self.distance_mode = mode;
        self
    }

    pub fn validate(&self, features: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.memeplexes < 2 {
            return bad(format!("need at least 2 memeplexes, got {}", self.memeplexes));
        }
        if self.frogs_per_memeplex < 3 {
            return bad(format!("need at least 3 frogs per memeplex, got {}", self.frogs_per_memeplex));
        }
        if self.submemeplex < 2 || self.submemeplex > self.frogs_per_memeplex {
            return bad(format!(
                "submemeplex size {} outside [2, {}]",
                self.submemeplex, self.frogs_per_memeplex
            ));
        }
        if self.max_step < 1 || self.max_step > features {
            return bad(format!("max step {} outside [1, {features}]", self.max_step));
        }
        if self.evolution_steps == 0 || self.max_shuffles == 0 || self.stall_shuffles == 0 {
            return bad("evolution steps, max shuffles and stall shuffles must be positive".into());
        }
        Ok(())
    }
}

/// Auto parameters for a table of `objects` x `features`.
pub fn auto_params(objects: usize, features: usize) -> SearchConfig {
    SearchConfig::auto(objects, features)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(c: &SearchConfig) -> (usize, usize, usize, usize, usize) {
        (c.memeplexes, c.frogs_per_memeplex, c.evolution_steps, c.submemeplex, c.max_step)
    }

    #[test]
    fn wine_uses_proportional_parameters() {
        let c = auto_params(178, 13);
        assert_eq!(tuple(&c), (29, 10, 7, 6, 7));
        c.validate(13).unwrap();
    }

    #[test]
    fn madelon_uses_fixed_parameters() {
        let c = auto_params(2000, 500);
        assert_eq!(tuple(&c), (30, 30, 5, 15, 225));
    }

    #[test]
    fn exact_products_are_not_rounded_up() {
        // 0.5 * 10 is exactly 5 and 2.2 * 10 is 22 despite binary rounding of 2.2
        let c = auto_params(10, 10);
        assert_eq!(tuple(&c), (22, 7, 5, 5, 5));
    }

    #[test]
    fn single_feature_is_clamped() {
        let c = auto_params(5, 1);
        assert_eq!(c.max_step, 1);
        assert_eq!(c.submemeplex, 2);
        assert_eq!(c.frogs_per_memeplex, 3);
        assert_eq!(c.memeplexes, 3);
        c.validate(1).unwrap();
    }

    #[test]
    fn fixed_set_for_small_tables() {
        let c = SearchConfig::fixed(13);
        assert_eq!(tuple(&c), (30, 30, 5, 15, 6));
    }

    #[test]
    fn validation_errors() {
        let mut c = auto_params(10, 10);
        c.submemeplex = c.frogs_per_memeplex + 1;
        assert!(c.validate(10).is_err());
        let mut c = auto_params(10, 10);
        c.max_step = 11;
        assert!(c.validate(10).is_err());
    }
}
