//! The individual operators of a leap: partitioning, submemeplex sampling, step size and
//! the bitwise move toward a better frog.

use rand::seq::SliceRandom;
use rand::Rng;

use super::config::DistanceMode;
use crate::error::{Error, Result};
use crate::fitness::Frog;
use crate::fuzzy_rough::pos_dissimilarity;
use crate::mask::FeatureMask;

/// A subpopulation evolved independently between shuffles, kept sorted best-first.
#[derive(Debug, Clone, PartialEq)]
pub struct Memeplex {
    pub frogs: Vec<Frog>,
}

impl Memeplex {
    pub fn sort(&mut self) {
        crate::fitness::rank(&mut self.frogs);
    }

    pub fn len(&self) -> usize {
        self.frogs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frogs.is_empty()
    }
}

/// Deal a ranked population into `m` memeplexes: memeplex `k` receives ranks
/// `k, k + m, k + 2m, ...` (1-based).
pub fn partition(ranked: &[Frog], m: usize, n: usize) -> Result<Vec<Memeplex>> {
    if m == 0 || ranked.len() != m * n {
        return Err(Error::Config(format!(
            "cannot partition {} frogs into {m} memeplexes of {n}",
            ranked.len()
        )));
    }
    Ok((0..m)
        .map(|k| Memeplex {
            frogs: (0..n).map(|j| ranked[k + m * j].clone()).collect(),
        })
        .collect())
}

/// Triangular selection probabilities `p_j = 2 (n + 1 - j) / (n (n + 1))` for ranks `j = 1..n`.
pub fn submemeplex_weights(n: usize) -> Vec<f64> {
    let denom = (n * (n + 1)) as f64;
    (1..=n).map(|j| 2.0 * (n + 1 - j) as f64 / denom).collect()
}

/// Draw `q` distinct memeplex positions without replacement, weighted by rank.
/// Returned positions are ascending, so the first is `P_B` and the last is `P_W`.
pub fn sample_submemeplex<R: Rng + ?Sized>(n: usize, q: usize, rng: &mut R) -> Vec<usize> {
    assert!(q <= n, "submemeplex larger than memeplex");
    let weights = submemeplex_weights(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(q);
    for _ in 0..q {
        let total: f64 = remaining.iter().map(|&i| weights[i]).sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = remaining.len() - 1;
        for (slot, &i) in remaining.iter().enumerate() {
            if u < weights[i] {
                pick = slot;
                break;
            }
            u -= weights[i];
        }
        chosen.push(remaining.remove(pick));
    }
    chosen.sort_unstable();
    chosen
}

/// Distance between two frogs under the configured mode.
pub fn frog_distance(mode: DistanceMode, a: &FeatureMask, b: &FeatureMask) -> usize {
    match mode {
        DistanceMode::Hamming => a.hamming(b),
        DistanceMode::PosRegion => pos_dissimilarity(a, b).expect("frogs share one length"),
    }
}

/// `min(floor(u * dist), s_max)` for a uniform draw `u` in [0, 1).
pub fn step_size_from(dist: usize, max_step: usize, u: f64) -> usize {
    ((u * dist as f64).floor() as usize).min(max_step)
}

pub fn step_size<R: Rng + ?Sized>(dist: usize, max_step: usize, rng: &mut R) -> usize {
    step_size_from(dist, max_step, rng.random::<f64>())
}

/// Move `worst` toward `target` on the given differing positions.
///
/// Position `positions[j]` is copied from `target` iff `thresholds[j] > position_draws[j]`.
pub fn leap_with_draws(
    worst: &FeatureMask,
    target: &FeatureMask,
    positions: &[usize],
    thresholds: &[f64],
    position_draws: &[f64],
) -> FeatureMask {
    assert_eq!(positions.len(), thresholds.len());
    assert_eq!(positions.len(), position_draws.len());
    let mut out = worst.clone();
    for ((&i, &r), &p) in positions.iter().zip(thresholds).zip(position_draws) {
        if r > p {
            out.set(i, target.get(i));
        }
    }
    out
}

/// One leap of `worst` toward `target` with step `s`.
///
/// Thresholds are paired with `min(s, HD)` differing positions: all of them, in position
/// order, when `s >= HD`; otherwise a uniform random subset, again taken in position order.
/// Returns `None` when the move would select no feature.
pub fn leap<R: Rng + ?Sized>(
    worst: &FeatureMask,
    target: &FeatureMask,
    s: usize,
    rng: &mut R,
) -> Option<FeatureMask> {
    let mut diff = worst.differing(target);
    if s < diff.len() {
        diff.shuffle(rng);
        diff.truncate(s);
        diff.sort_unstable();
    }
    let thresholds: Vec<f64> = (0..diff.len()).map(|_| rng.random()).collect();
    let draws: Vec<f64> = (0..diff.len()).map(|_| rng.random()).collect();
    let moved = leap_with_draws(worst, target, &diff, &thresholds, &draws);
    (!moved.is_empty()).then_some(moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use approx::assert_abs_diff_eq;

    fn frogs(k: usize) -> Vec<Frog> {
        (0..k)
            .map(|i| Frog::new(FeatureMask::from_indices(8, &[i % 8]), 1.0 - i as f64 / 100.0))
            .collect()
    }

    #[test]
    fn partition_examples() {
        let ranked = frogs(6);
        let m = partition(&ranked, 3, 2).unwrap();
        assert_eq!(m[0].frogs, vec![ranked[0].clone(), ranked[3].clone()]);
        assert_eq!(m[2].frogs, vec![ranked[2].clone(), ranked[5].clone()]);

        let one = partition(&ranked, 1, 6).unwrap();
        assert_eq!(one[0].frogs, ranked);

        let singles = partition(&ranked, 6, 1).unwrap();
        assert!(singles.iter().zip(&ranked).all(|(m, f)| m.frogs == vec![f.clone()]));

        assert!(partition(&ranked, 4, 2).is_err());
    }

    #[test]
    fn triangular_weights() {
        let w = submemeplex_weights(3);
        assert_abs_diff_eq!(w[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w[2], 1.0 / 6.0, epsilon = 1e-15);
        for n in 1..20 {
            let w = submemeplex_weights(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(w[0], 2.0 / (n as f64 + 1.0), epsilon = 1e-15);
            assert_abs_diff_eq!(w[n - 1], 2.0 / (n * (n + 1)) as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn full_submemeplex_is_whole_memeplex() {
        let mut rng = seeded(1);
        assert_eq!(sample_submemeplex(5, 5, &mut rng), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn single_draw_follows_triangular_distribution() {
        let mut rng = seeded(7);
        let n = 4;
        let trials = 40_000;
        let mut hits = vec![0usize; n];
        for _ in 0..trials {
            hits[sample_submemeplex(n, 1, &mut rng)[0]] += 1;
        }
        for (h, p) in hits.iter().zip(submemeplex_weights(n)) {
            assert!((*h as f64 / trials as f64 - p).abs() < 0.01, "{hits:?}");
        }
    }

    #[test]
    fn step_size_examples() {
        assert_eq!(step_size_from(0, 5, 0.99), 0);
        assert_eq!(step_size_from(8, 3, 1.0 - f64::EPSILON), 3);
        assert_eq!(step_size_from(3, 5, 0.5), 1);
    }

    #[test]
    fn worked_leap_example() {
        let best: FeatureMask = "11001010".parse().unwrap();
        let worst: FeatureMask = "10101000".parse().unwrap();
        let positions = worst.differing(&best);
        assert_eq!(positions, vec![1, 2, 6]);
        let out = leap_with_draws(&worst, &best, &positions, &[0.11, 0.05, 0.96], &[0.74, 0.60, 0.79]);
        assert_eq!(out.to_string(), "10101010");
    }

    #[test]
    fn zero_step_and_identical_target_leave_mask_unchanged() {
        let mut rng = seeded(3);
        let best: FeatureMask = "11001010".parse().unwrap();
        let worst: FeatureMask = "10101000".parse().unwrap();
        assert_eq!(leap(&worst, &best, 0, &mut rng), Some(worst.clone()));
        assert_eq!(leap(&worst, &worst, 4, &mut rng), Some(worst.clone()));
    }

    #[test]
    fn leap_only_touches_differing_positions_and_moves_toward_target() {
        let mut rng = seeded(11);
        let best: FeatureMask = "1100101011".parse().unwrap();
        let worst: FeatureMask = "1010100001".parse().unwrap();
        for s in 0..=6 {
            if let Some(out) = leap(&worst, &best, s, &mut rng) {
                assert!(out.hamming(&best) <= worst.hamming(&best));
                assert!(worst.hamming(&best) - out.hamming(&best) <= s);
                assert_eq!(out.hamming(&worst) + out.hamming(&best), worst.hamming(&best));
            }
        }
    }

    #[test]
    fn infeasible_leap_is_reported() {
        // moving the only set bit of `worst` toward an empty target can clear it
        let worst: FeatureMask = "01".parse().unwrap();
        let target: FeatureMask = "00".parse().unwrap();
        let out = leap_with_draws(&worst, &target, &[1], &[0.9], &[0.1]);
        assert!(out.is_empty());
        let mut rng = seeded(0);
        let mut saw_none = false;
        for _ in 0..50 {
            saw_none |= leap(&worst, &target, 1, &mut rng).is_none();
        }
        assert!(saw_none);
    }

    #[test]
    fn distance_modes_agree_on_worked_pair() {
        let a: FeatureMask = "11001010".parse().unwrap();
        let b: FeatureMask = "10101000".parse().unwrap();
        assert_eq!(frog_distance(DistanceMode::Hamming, &a, &b), 3);
        assert_eq!(frog_distance(DistanceMode::PosRegion, &a, &b), 3);
    }
}
