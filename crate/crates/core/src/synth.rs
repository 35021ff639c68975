//! Seeded synthetic decision tables for tests, benchmarks and the acceptance suite.

use rand::Rng;

use crate::datatable::{DecisionColumn, DecisionTable, FeatureColumn, SigmaMode};
use crate::rng::seeded;

fn labels(classes: &[usize]) -> DecisionColumn {
    let k = classes.iter().max().map_or(1, |m| m + 1);
    DecisionColumn::new("class", classes.to_vec(), (0..k).map(|c| format!("c{c}")).collect())
        .expect("labels are in range")
}

fn nominal(name: String, codes: Vec<usize>, arity: usize) -> FeatureColumn {
    FeatureColumn::nominal(name, codes, (0..arity).map(|s| format!("v{s}")).collect())
}

fn build(name: String, features: Vec<FeatureColumn>, classes: &[usize]) -> DecisionTable {
    DecisionTable::new(name, features, labels(classes))
        .expect("generated columns have matching lengths")
        .with_preprocessing(SigmaMode::Variance, true)
}

/// All-nominal table with uniformly random values and labels.
pub fn random_nominal(objects: usize, features: usize, arity: usize, classes: usize, seed: u64) -> DecisionTable {
    let mut rng = seeded(seed);
    let cols = (0..features)
        .map(|f| {
            let codes = (0..objects).map(|_| rng.random_range(0..arity)).collect();
            nominal(format!("f{f}"), codes, arity)
        })
        .collect();
    let y: Vec<usize> = (0..objects).map(|_| rng.random_range(0..classes)).collect();
    build(format!("nominal-{seed}"), cols, &y)
}

/// Real columns with uniform values in [0, 1), followed by nominal columns of arity 3.
/// Returned without normalization so raw values and variance sigmas are kept.
pub fn random_mixed(objects: usize, real: usize, nominal_cols: usize, classes: usize, seed: u64) -> DecisionTable {
    let mut rng = seeded(seed);
    let mut cols = Vec::with_capacity(real + nominal_cols);
    for f in 0..real {
        let values = (0..objects).map(|_| rng.random::<f64>()).collect();
        cols.push(FeatureColumn::real(format!("r{f}"), values, SigmaMode::Variance));
    }
    for f in 0..nominal_cols {
        let codes = (0..objects).map(|_| rng.random_range(0..3)).collect();
        cols.push(nominal(format!("n{f}"), codes, 3));
    }
    let y: Vec<usize> = (0..objects).map(|_| rng.random_range(0..classes)).collect();
    DecisionTable::new(format!("mixed-{seed}"), cols, labels(&y)).expect("matching lengths")
}

fn banded<R: Rng>(rng: &mut R, high: bool) -> f64 {
    let v = rng.random_range(0..=6) as f64 / 20.0;
    if high {
        1.0 - v
    } else {
        v
    }
}

/// Two classes decided by feature 0, copied verbatim into feature 1, plus `noise` uniform
/// real columns. `{f0}` and `{f1}` are then both minimal reducts.
pub fn duplicate_feature(objects: usize, noise: usize, seed: u64) -> DecisionTable {
    let mut rng = seeded(seed);
    let y: Vec<usize> = (0..objects).map(|i| i % 2).collect();
    let informative: Vec<f64> = y.iter().map(|&c| banded(&mut rng, c == 1)).collect();
    let mut cols = vec![
        FeatureColumn::real("f0", informative.clone(), SigmaMode::Variance),
        FeatureColumn::real("f1", informative, SigmaMode::Variance),
    ];
    for f in 0..noise {
        let values = (0..objects).map(|_| rng.random_range(0..=20) as f64 / 20.0).collect();
        cols.push(FeatureColumn::real(format!("noise{f}"), values, SigmaMode::Variance));
    }
    build(format!("duplicate-{seed}"), cols, &y)
}

/// Small tables (6 to 12 features, 20 to 36 objects) whose class depends on a few hidden
/// features, cycling through four shapes by `index`:
/// XOR of two banded real features, one informative nominal feature, parity of three
/// mixed features, and XOR with two flipped labels so the best subset is not exact.
pub fn desk_table(index: u64) -> DecisionTable {
    let mut rng = seeded(0x5eed_0000 + index);
    let features = 6 + (index % 7) as usize;
    let objects = 20 + 4 * (index % 5) as usize;
    let shape = index % 4;
    let relevant: usize = match shape {
        1 => 1,
        2 => 3,
        _ => 2,
    };
    let mut positions: Vec<usize> = (0..features).collect();
    for i in 0..relevant {
        let j = rng.random_range(i..features);
        positions.swap(i, j);
    }
    let hidden = &positions[..relevant];

    let bits: Vec<Vec<bool>> = (0..objects)
        .map(|_| (0..relevant).map(|_| rng.random_bool(0.5)).collect())
        .collect();
    let mut y: Vec<usize> = bits
        .iter()
        .map(|b| match shape {
            1 => b[0] as usize,
            _ => b.iter().filter(|&&v| v).count() % 2,
        })
        .collect();
    if shape == 3 {
        for _ in 0..2 {
            let i = rng.random_range(0..objects);
            y[i] = 1 - y[i];
        }
    }

    let mut cols = Vec::with_capacity(features);
    for f in 0..features {
        let name = format!("a{f}");
        if let Some(h) = hidden.iter().position(|&p| p == f) {
            let nominal_col = shape == 1 || (shape == 2 && h == 2);
            if nominal_col {
                let codes = bits.iter().map(|b| b[h] as usize * 2 + rng.random_range(0..2)).collect();
                cols.push(nominal(name, codes, 4));
            } else {
                let values = bits.iter().map(|b| banded(&mut rng, b[h])).collect();
                cols.push(FeatureColumn::real(name, values, SigmaMode::Variance));
            }
        } else if f % 3 == 2 {
            let codes = (0..objects).map(|_| rng.random_range(0..3)).collect();
            cols.push(nominal(name, codes, 3));
        } else {
            let values = (0..objects).map(|_| rng.random_range(0..=20) as f64 / 20.0).collect();
            cols.push(FeatureColumn::real(name, values, SigmaMode::Variance));
        }
    }
    build(format!("desk-{index}"), cols, &y)
}
