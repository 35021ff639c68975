//! 1-nearest-neighbour cross-validation, a deterministic stand-in for external classifiers.

use log::warn;
use rand::seq::SliceRandom;

use crate::datatable::{DecisionTable, FeatureKind};
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::rng::seeded;

pub const DEFAULT_FOLDS: usize = 10;

/// Fold index for every object, and whether the split is stratified.
///
/// Each class is shuffled and dealt round-robin into the folds, continuing the deal across
/// classes so fold sizes differ by at most one. Falls back to a plain shuffled deal when a
/// class has fewer members than `folds`.
pub fn fold_assignment(labels: &[usize], folds: usize, seed: u64) -> Result<(Vec<usize>, bool)> {
    if folds < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {folds}")));
    }
    if labels.len() < folds {
        return Err(Error::Config(format!(
            "{} objects cannot fill {folds} folds",
            labels.len()
        )));
    }
    let mut rng = seeded(seed);
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &c) in labels.iter().enumerate() {
        members[c].push(i);
    }
    let stratified = members.iter().all(|m| m.is_empty() || m.len() >= folds);
    if !stratified {
        warn!("a class has fewer than {folds} members; using non-stratified folds");
        members = vec![(0..labels.len()).collect()];
    }
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for group in &mut members {
        group.shuffle(&mut rng);
        for &i in group.iter() {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok((assignment, stratified))
}

/// Mean fold accuracy of 1-NN on the selected features.
///
/// Real features are min-max scaled and compared by Euclidean distance, nominal features by
/// mismatch count; the two parts are added. Distance ties go to the lowest object index.
pub fn knn_cv_accuracy(table: &DecisionTable, mask: &FeatureMask, folds: usize, seed: u64) -> Result<f64> {
    let projected = table.project(mask)?;
    let labels = projected.decision().labels();
    let (assignment, _) = fold_assignment(labels, folds, seed)?;

    let columns: Vec<(FeatureKind, Vec<f64>)> = projected
        .features()
        .iter()
        .map(|f| {
            let v = f.values();
            match f.kind() {
                FeatureKind::Real => {
                    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let span = hi - lo;
                    let scaled = v
                        .iter()
                        .map(|x| if span > 0.0 { (x - lo) / span } else { 0.0 })
                        .collect();
                    (FeatureKind::Real, scaled)
                }
                FeatureKind::Nominal => (FeatureKind::Nominal, v.to_vec()),
            }
        })
        .collect();
    let distance = |a: usize, b: usize| {
        let mut sq = 0.0;
        let mut mismatches = 0.0;
        for (kind, v) in &columns {
            match kind {
                FeatureKind::Real => sq += (v[a] - v[b]).powi(2),
                FeatureKind::Nominal => mismatches += f64::from(u8::from(v[a] != v[b])),
            }
        }
        sq.sqrt() + mismatches
    };

    let mut total = 0.0;
    for fold in 0..folds {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..labels.len()).partition(|&i| assignment[i] == fold);
        let correct = test
            .iter()
            .filter(|&&t| {
                let nearest = train
                    .iter()
                    .copied()
                    .min_by(|&a, &b| distance(t, a).total_cmp(&distance(t, b)).then(a.cmp(&b)))
                    .expect("training split is non-empty");
                labels[nearest] == labels[t]
            })
            .count();
        total += correct as f64 / test.len() as f64;
    }
    Ok(total / folds as f64)
}
