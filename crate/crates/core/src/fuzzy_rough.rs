//! Fuzzy-rough measures over a decision table.
//!
//! Similarity of two objects on a real feature `a` with spread `s = sigma_a`:
//!
//! ```text
//! eta_a(x, y) = max(min((a(y) - (a(x) - s)) / (a(x) - (a(x) - s)),
//!                       ((a(x) + s) - a(y)) / ((a(x) + s) - a(x))), 0)
//! ```
//!
//! Both denominators are `s`, so the relation is evaluated as `max(1 - |a(x) - a(y)| / s, 0)`,
//! which is exactly 1 on the diagonal and exactly symmetric. Subsets combine per-feature
//! similarities with the Lukasiewicz t-norm; approximations use the Lukasiewicz implicator.
//! Decision classes are crisp sets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::datatable::{DecisionTable, FeatureKind};
use crate::error::{Error, Result};
use crate::mask::FeatureMask;

/// `T(p, q) = max(p + q - 1, 0)`.
#[inline]
pub fn tnorm(p: f64, q: f64) -> f64 {
    (p + q - 1.0).max(0.0)
}

/// `I(p, q) = min(1 - p + q, 1)`.
#[inline]
pub fn implicator(p: f64, q: f64) -> f64 {
    (1.0 - p + q).min(1.0)
}

/// Similarity of two raw values on one feature.
///
/// A constant real feature (`sigma == 0`) cannot discriminate, so every pair is fully similar.
#[inline]
pub(crate) fn value_similarity(kind: FeatureKind, sigma: f64, ax: f64, ay: f64) -> f64 {
    match kind {
        FeatureKind::Nominal => {
            if ax == ay {
                1.0
            } else {
                0.0
            }
        }
        FeatureKind::Real if sigma > 0.0 => (1.0 - (ax - ay).abs() / sigma).max(0.0),
        FeatureKind::Real => 1.0,
    }
}

/// Similarity of objects `x` and `y` on a single feature.
pub fn feature_similarity(table: &DecisionTable, feature: usize, x: usize, y: usize) -> f64 {
    let col = table.feature(feature);
    let v = col.values();
    value_similarity(col.kind(), col.sigma(), v[x], v[y])
}

/// Similarity over a feature subset: per-feature similarities folded with the t-norm in
/// ascending feature order.
pub fn subset_similarity(table: &DecisionTable, mask: &FeatureMask, x: usize, y: usize) -> Result<f64> {
    mask.check_len(table.feature_count())?;
    let mut features = mask.ones();
    let first = features.next().ok_or(Error::EmptyMask)?;
    Ok(features.fold(feature_similarity(table, first, x, y), |acc, f| {
        tnorm(acc, feature_similarity(table, f, x, y))
    }))
}

/// Full `|U| x |U|` similarity relation for one subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn compute(table: &DecisionTable, mask: &FeatureMask) -> Result<Self> {
        let n = table.objects();
        let mut entries = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                entries.push(subset_similarity(table, mask, x, y)?);
            }
        }
        Ok(SimilarityMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.entries[x * self.n + y]
    }
}

/// Lower approximation membership of `x` in the fuzzy set with memberships `set`.
pub fn lower_approx_membership(
    table: &DecisionTable,
    mask: &FeatureMask,
    x: usize,
    set: &[f64],
) -> Result<f64> {
    let mut inf = 1.0f64;
    for (y, &mu) in set.iter().enumerate() {
        inf = inf.min(implicator(subset_similarity(table, mask, x, y)?, mu));
    }
    Ok(inf)
}

/// Upper approximation membership of `x` in the fuzzy set with memberships `set`.
pub fn upper_approx_membership(
    table: &DecisionTable,
    mask: &FeatureMask,
    x: usize,
    set: &[f64],
) -> Result<f64> {
    let mut sup = 0.0f64;
    for (y, &mu) in set.iter().enumerate() {
        sup = sup.max(tnorm(subset_similarity(table, mask, x, y)?, mu));
    }
    Ok(sup)
}

/// Fuzzy-rough dependency degree and the positive-region memberships behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrddValue {
    pub gamma_prime: f64,
    pub per_object_pos: Vec<f64>,
}

/// Where per-feature similarities come from during an FRDD evaluation.
pub(crate) enum Similarities<'t> {
    /// One row-major `n x n` matrix per feature.
    Precomputed(Vec<Vec<f64>>),
    OnTheFly(&'t DecisionTable),
}

impl<'t> Similarities<'t> {
    /// Precompute when `n^2 * L` doubles fit in `budget_bytes`.
    pub(crate) fn new(table: &'t DecisionTable, budget_bytes: u64) -> Self {
        let n = table.objects() as u64;
        let need = n * n * table.feature_count() as u64 * std::mem::size_of::<f64>() as u64;
        if need > budget_bytes {
            return Similarities::OnTheFly(table);
        }
        let n = table.objects();
        let matrices = table
            .features()
            .iter()
            .map(|col| {
                let v = col.values();
                let mut m = Vec::with_capacity(n * n);
                for x in 0..n {
                    for y in 0..n {
                        m.push(value_similarity(col.kind(), col.sigma(), v[x], v[y]));
                    }
                }
                m
            })
            .collect();
        Similarities::Precomputed(matrices)
    }

    pub(crate) fn is_precomputed(&self) -> bool {
        matches!(self, Similarities::Precomputed(_))
    }

    /// Overwrite `row[y]` with the similarity of `x` and `y` on `feature`.
    #[inline]
    fn fill_row(&self, feature: usize, x: usize, row: &mut [f64]) {
        match self {
            Similarities::Precomputed(m) => {
                let n = row.len();
                row.copy_from_slice(&m[feature][x * n..(x + 1) * n]);
            }
            Similarities::OnTheFly(t) => {
                let col = t.feature(feature);
                let v = col.values();
                for (y, r) in row.iter_mut().enumerate() {
                    *r = value_similarity(col.kind(), col.sigma(), v[x], v[y]);
                }
            }
        }
    }

    #[inline]
    fn fold_row(&self, feature: usize, x: usize, row: &mut [f64]) {
        match self {
            Similarities::Precomputed(m) => {
                let n = row.len();
                for (r, s) in row.iter_mut().zip(&m[feature][x * n..(x + 1) * n]) {
                    *r = tnorm(*r, *s);
                }
            }
            Similarities::OnTheFly(t) => {
                let col = t.feature(feature);
                let v = col.values();
                for (y, r) in row.iter_mut().enumerate() {
                    *r = tnorm(*r, value_similarity(col.kind(), col.sigma(), v[x], v[y]));
                }
            }
        }
    }
}

/// Positive-region membership of every object.
///
/// With crisp decision classes the implicator gives `I(eta, 1) = 1` and `I(eta, 0) = 1 - eta`,
/// so the lower approximation of class `c` at `x` is `1 - max{eta(x, y) : y not in c}`.
/// Taking per-class maxima once per object turns the sup over classes into an
/// `O(|U| * |P|)` pass per object.
pub(crate) fn positive_region(
    table: &DecisionTable,
    sims: &Similarities<'_>,
    mask: &FeatureMask,
) -> Vec<f64> {
    let n = table.objects();
    let labels = table.decision().labels();
    let classes = table.decision().classes();
    let selected = mask.indices();
    let Some((&first, rest)) = selected.split_first() else {
        return vec![0.0; n];
    };

    let mut row = vec![0.0; n];
    let mut class_max = vec![0.0f64; classes];
    (0..n)
        .map(|x| {
            sims.fill_row(first, x, &mut row);
            for &f in rest {
                sims.fold_row(f, x, &mut row);
            }
            class_max.iter_mut().for_each(|m| *m = 0.0);
            for (y, &eta) in row.iter().enumerate() {
                let m = &mut class_max[labels[y]];
                *m = m.max(eta);
            }
            // sup over classes c of (1 - max over the other classes)
            let mut best = 0.0f64;
            for c in 0..classes {
                let outside = class_max
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != c)
                    .map(|(_, &m)| m)
                    .fold(0.0f64, f64::max);
                best = best.max(1.0 - outside);
            }
            best
        })
        .collect()
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Fuzzy-rough dependency degree of the decision on the subset `mask`.
///
/// The empty subset has dependency 0.
pub fn frdd(table: &DecisionTable, mask: &FeatureMask) -> Result<FrddValue> {
    mask.check_len(table.feature_count())?;
    let per_object_pos = positive_region(table, &Similarities::OnTheFly(table), mask);
    Ok(FrddValue {
        gamma_prime: mean(&per_object_pos),
        per_object_pos,
    })
}

/// Crisp rough-set regions for an all-nominal subset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrispRegions {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    pub bnd: Vec<usize>,
    pub gamma: f64,
}

/// Positive, negative and boundary regions of the decision partition under the
/// indiscernibility relation of the selected nominal features.
pub fn crisp_regions(table: &DecisionTable, mask: &FeatureMask) -> Result<CrispRegions> {
    mask.check_len(table.feature_count())?;
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let selected = mask.indices();
    if let Some(&f) = selected
        .iter()
        .find(|&&f| table.feature(f).kind() != FeatureKind::Nominal)
    {
        return Err(Error::NotNominal(table.feature(f).name().to_string()));
    }

    let n = table.objects();
    let labels = table.decision().labels();
    let mut blocks: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let key = selected
            .iter()
            .map(|&f| table.feature(f).values()[x] as u64)
            .collect();
        blocks.entry(key).or_default().push(x);
    }

    let classes = table.decision().classes();
    let mut in_lower = vec![false; n];
    let mut in_upper = vec![false; n];
    for block in blocks.values() {
        let first = labels[block[0]];
        let pure = block.iter().all(|&x| labels[x] == first);
        for &x in block {
            // every block meets at least one class, so it lies in that class's upper approximation
            in_upper[x] = classes > 0;
            in_lower[x] = pure;
        }
    }
    let pos: Vec<usize> = (0..n).filter(|&x| in_lower[x]).collect();
    let neg = (0..n).filter(|&x| !in_upper[x]).collect();
    let bnd = (0..n).filter(|&x| in_upper[x] && !in_lower[x]).collect();
    let gamma = pos.len() as f64 / n as f64;
    Ok(CrispRegions { pos, neg, bnd, gamma })
}

/// `L - POS(a, b)`, with `POS` realized as the number of positions on which two frogs agree.
pub fn pos_dissimilarity(a: &FeatureMask, b: &FeatureMask) -> Result<usize> {
    b.check_len(a.len())?;
    let agreement = (0..a.len()).filter(|&i| a.get(i) == b.get(i)).count();
    Ok(a.len() - agreement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datatable::{DecisionColumn, FeatureColumn, SigmaMode};
    use approx::assert_abs_diff_eq;

    fn nominal_table(f: &[&str], d: &[&str]) -> DecisionTable {
        DecisionTable::new(
            "n",
            vec![FeatureColumn::nominal_from_labels("f", f)],
            DecisionColumn::from_labels("d", d).unwrap(),
        )
        .unwrap()
    }

    fn real_table(cols: &[&[f64]], d: &[&str]) -> DecisionTable {
        let features = cols
            .iter()
            .enumerate()
            .map(|(i, c)| FeatureColumn::real(format!("r{i}"), c.to_vec(), SigmaMode::Variance))
            .collect();
        DecisionTable::new("r", features, DecisionColumn::from_labels("d", d).unwrap()).unwrap()
    }

    #[test]
    fn connectives() {
        assert_eq!(tnorm(1.0, 0.5), 0.5);
        assert_eq!(tnorm(0.5, 0.5), 0.0);
        assert_eq!(implicator(1.0, 0.0), 0.0);
        assert_eq!(implicator(0.3, 1.0), 1.0);
        assert_eq!(implicator(0.0, 0.2), 1.0);
    }

    #[test]
    fn real_similarity_values() {
        assert_abs_diff_eq!(value_similarity(FeatureKind::Real, 0.2, 0.5, 0.6), 0.5, epsilon = 1e-12);
        assert_eq!(value_similarity(FeatureKind::Real, 0.2, 0.5, 0.5), 1.0);
        assert_eq!(value_similarity(FeatureKind::Real, 0.25, 0.5, 0.75), 0.0);
        assert_eq!(value_similarity(FeatureKind::Real, 0.2, 0.5, 0.9), 0.0);
        assert_eq!(value_similarity(FeatureKind::Real, 0.0, 0.5, 0.9), 1.0);
        assert_eq!(value_similarity(FeatureKind::Nominal, 0.0, 1.0, 2.0), 0.0);
    }

    #[test]
    fn subset_similarity_folds_tnorm() {
        // sigma of {0, 0.5, 1} (variance) is 1/6; pick values so per-feature similarities are known
        let t = real_table(&[&[0.0, 0.0, 1.0], &[0.0, 0.5, 1.0]], &["a", "b", "a"]);
        let s0 = feature_similarity(&t, 0, 0, 1);
        let s1 = feature_similarity(&t, 1, 0, 1);
        assert_eq!(s0, 1.0);
        let both = subset_similarity(&t, &FeatureMask::full(2), 0, 1).unwrap();
        assert_eq!(both, tnorm(s0, s1));
        assert_eq!(
            subset_similarity(&t, &FeatureMask::from_indices(2, &[1]), 0, 1).unwrap(),
            s1
        );
        assert!(matches!(
            subset_similarity(&t, &FeatureMask::empty(2), 0, 1),
            Err(Error::EmptyMask)
        ));
    }

    #[test]
    fn approximation_examples() {
        let t = nominal_table(&["a", "a", "b", "b"], &["0", "0", "1", "1"]);
        let m = FeatureMask::full(1);
        for x in 0..4 {
            assert_eq!(lower_approx_membership(&t, &m, x, &[1.0; 4]).unwrap(), 1.0);
            assert_eq!(upper_approx_membership(&t, &m, x, &[0.0; 4]).unwrap(), 0.0);
        }
        // eta(0,1) = 1 and mu(1) = 0
        assert_eq!(lower_approx_membership(&t, &m, 0, &[1.0, 0.0, 1.0, 1.0]).unwrap(), 0.0);
        // object 2 is similar only to 3
        assert_eq!(lower_approx_membership(&t, &m, 2, &[0.0, 0.0, 1.0, 1.0]).unwrap(), 1.0);

        let same = nominal_table(&["a"; 4], &["0", "0", "1", "1"]);
        assert_eq!(
            upper_approx_membership(&same, &m, 0, &[0.0, 0.0, 0.7, 0.0]).unwrap(),
            0.7
        );
    }

    #[test]
    fn frdd_examples() {
        let t = nominal_table(&["a", "a", "b", "b"], &["0", "0", "1", "1"]);
        assert_eq!(frdd(&t, &FeatureMask::full(1)).unwrap().gamma_prime, 1.0);
        let t = nominal_table(&["a", "a", "b", "b"], &["0", "1", "1", "1"]);
        let v = frdd(&t, &FeatureMask::full(1)).unwrap();
        assert_eq!(v.gamma_prime, 0.5);
        assert_eq!(v.per_object_pos, vec![0.0, 0.0, 1.0, 1.0]);
        assert_eq!(frdd(&t, &FeatureMask::empty(1)).unwrap().gamma_prime, 0.0);
        assert!(frdd(&t, &FeatureMask::full(2)).is_err());
    }

    #[test]
    fn single_class_table_is_fully_dependent() {
        let t = nominal_table(&["a", "b", "a"], &["z", "z", "z"]);
        assert_eq!(frdd(&t, &FeatureMask::full(1)).unwrap().gamma_prime, 1.0);
        let r = crisp_regions(&t, &FeatureMask::full(1)).unwrap();
        assert!(r.neg.is_empty());
        assert_eq!(r.gamma, 1.0);
    }

    #[test]
    fn crisp_region_examples() {
        let t = nominal_table(&["a", "a", "b", "b"], &["0", "0", "1", "1"]);
        let r = crisp_regions(&t, &FeatureMask::full(1)).unwrap();
        assert_eq!(r.pos, vec![0, 1, 2, 3]);
        assert!(r.bnd.is_empty());
        assert_eq!(r.gamma, 1.0);

        let t = nominal_table(&["a", "a", "b", "b"], &["0", "1", "1", "1"]);
        let r = crisp_regions(&t, &FeatureMask::full(1)).unwrap();
        assert_eq!(r.pos, vec![2, 3]);
        assert_eq!(r.bnd, vec![0, 1]);
        assert!(r.neg.is_empty());
        assert_eq!(r.gamma, 0.5);
    }

    #[test]
    fn crisp_regions_reject_real_features() {
        let t = real_table(&[&[0.1, 0.2]], &["a", "b"]);
        assert!(matches!(
            crisp_regions(&t, &FeatureMask::full(1)),
            Err(Error::NotNominal(_))
        ));
    }

    #[test]
    fn pos_dissimilarity_examples() {
        let a: FeatureMask = "11001010".parse().unwrap();
        let b: FeatureMask = "10101000".parse().unwrap();
        assert_eq!(pos_dissimilarity(&a, &b).unwrap(), 3);
        assert_eq!(pos_dissimilarity(&a, &a).unwrap(), 0);
        let c: FeatureMask = "00110101".parse().unwrap();
        assert_eq!(pos_dissimilarity(&a, &c).unwrap(), 8);
        assert!(pos_dissimilarity(&a, &FeatureMask::full(3)).is_err());
    }

    #[test]
    fn precomputed_and_on_the_fly_agree_bitwise() {
        let t = real_table(
            &[&[0.1, 0.4, 0.35, 0.9, 0.5], &[0.3, 0.2, 0.8, 0.75, 0.1]],
            &["a", "b", "a", "b", "a"],
        );
        let pre = Similarities::new(&t, u64::MAX);
        assert!(pre.is_precomputed());
        let fly = Similarities::new(&t, 0);
        assert!(!fly.is_precomputed());
        for bits in ["10", "01", "11"] {
            let m: FeatureMask = bits.parse().unwrap();
            let a = positive_region(&t, &pre, &m);
            let b = positive_region(&t, &fly, &m);
            assert_eq!(
                a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn similarity_matrix_diagonal_and_symmetry() {
        let t = real_table(&[&[0.1, 0.4, 0.35, 0.9]], &["a", "b", "a", "b"]);
        let s = SimilarityMatrix::compute(&t, &FeatureMask::full(1)).unwrap();
        for x in 0..s.n() {
            assert_eq!(s.get(x, x), 1.0);
            for y in 0..s.n() {
                assert_eq!(s.get(x, y), s.get(y, x));
            }
        }
    }
}
