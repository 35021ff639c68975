//! Direct transcription of the fuzzy-rough definitions with nested loops, independent of
//! the library's similarity cache and fast positive-region path.

use frogsel::{DecisionTable, FeatureKind, FeatureMask};

pub fn population_variance(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64
}

/// Per-feature similarity in its unsimplified two-ratio form.
pub fn eta(kind: FeatureKind, sigma: f64, ax: f64, ay: f64) -> f64 {
    match kind {
        FeatureKind::Nominal => f64::from(u8::from(ax == ay)),
        FeatureKind::Real if sigma == 0.0 => 1.0,
        FeatureKind::Real => {
            let left = (ay - (ax - sigma)) / (ax - (ax - sigma));
            let right = ((ax + sigma) - ay) / ((ax + sigma) - ax);
            left.min(right).max(0.0)
        }
    }
}

fn t(p: f64, q: f64) -> f64 {
    (p + q - 1.0).max(0.0)
}

fn i(p: f64, q: f64) -> f64 {
    (1.0 - p + q).min(1.0)
}

pub struct Naive {
    pub sigmas: Vec<f64>,
}

impl Naive {
    /// Sigmas taken from the table, for tables preprocessed by the loader.
    pub fn from_table(table: &DecisionTable) -> Self {
        Naive {
            sigmas: table.features().iter().map(|f| f.sigma()).collect(),
        }
    }

    /// Sigmas recomputed as population variance of the raw values.
    pub fn with_variance(table: &DecisionTable) -> Self {
        Naive {
            sigmas: table.features().iter().map(|f| population_variance(f.values())).collect(),
        }
    }

    pub fn similarity(&self, table: &DecisionTable, mask: &FeatureMask, x: usize, y: usize) -> f64 {
        let mut acc: Option<f64> = None;
        for a in 0..table.feature_count() {
            if !mask.get(a) {
                continue;
            }
            let f = table.feature(a);
            let e = eta(f.kind(), self.sigmas[a], f.values()[x], f.values()[y]);
            acc = Some(acc.map_or(e, |v| t(v, e)));
        }
        acc.expect("non-empty mask")
    }

    /// `inf_y I(sim(x, y), membership(y))`.
    pub fn lower(&self, table: &DecisionTable, mask: &FeatureMask, x: usize, set: &[f64]) -> f64 {
        (0..table.objects())
            .map(|y| i(self.similarity(table, mask, x, y), set[y]))
            .fold(1.0, f64::min)
    }

    /// `sup_y T(sim(x, y), membership(y))`.
    pub fn upper(&self, table: &DecisionTable, mask: &FeatureMask, x: usize, set: &[f64]) -> f64 {
        (0..table.objects())
            .map(|y| t(self.similarity(table, mask, x, y), set[y]))
            .fold(0.0, f64::max)
    }

    pub fn positive(&self, table: &DecisionTable, mask: &FeatureMask, x: usize) -> f64 {
        let labels = table.decision().labels();
        (0..table.decision().classes())
            .map(|c| {
                let set: Vec<f64> = labels.iter().map(|&l| f64::from(u8::from(l == c))).collect();
                self.lower(table, mask, x, &set)
            })
            .fold(0.0, f64::max)
    }

    pub fn frdd(&self, table: &DecisionTable, mask: &FeatureMask) -> f64 {
        let n = table.objects();
        (0..n).map(|x| self.positive(table, mask, x)).sum::<f64>() / n as f64
    }
}

/// Every non-empty mask over `l` features.
pub fn all_masks(l: usize) -> impl Iterator<Item = FeatureMask> {
    (1u32..1 << l).map(move |bits| FeatureMask::from_bools(&(0..l).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>()))
}
