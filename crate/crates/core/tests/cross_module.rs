use oscharm_core::conditions::{sz_condensed, sz_condition, Verdict};
use oscharm_core::dudley::{dudley_distance, CoefficientSequence};
use oscharm_core::geometry::SpherePair;
use oscharm_core::sampler::{field_covariance, sample_field};
use oscharm_core::spectral::{mehler_partial_sum, spectral_at};

#[test]
fn dudley_distance_is_covariance_increment() {
    let c = CoefficientSequence::power_log(0.75, 0.5, 1).unwrap();
    for d in [2u32, 3] {
        for r in [0.05, 0.3, 0.9] {
            let pair = SpherePair::unit(d, r).unwrap();
            let (x, y) = pair.representatives();
            let cov = field_covariance(d, &c, &[x, y], 80).unwrap();
            let increment = cov[(0, 0)] + cov[(1, 1)] - 2.0 * cov[(0, 1)];
            let delta = dudley_distance(&c, pair, 80).unwrap().value;
            assert!((delta * delta - increment).abs() <= 1e-12 * increment, "d={d} r={r}");
        }
    }
}

#[test]
fn sampled_increments_follow_dudley_distance() {
    let c = CoefficientSequence::power_log(1.0, 0.0, 1).unwrap();
    let pair = SpherePair::unit(2, 0.5).unwrap();
    let (x, y) = pair.representatives();
    let cov = field_covariance(2, &c, &[x.clone(), y.clone()], 48).unwrap();
    let s = sample_field(vec![x, y], cov, 40_000, 3).unwrap();
    let mean_sq: f64 = s
        .draws
        .row_iter()
        .map(|r| (r[0] - r[1]).powi(2))
        .sum::<f64>()
        / 40_000.0;
    let delta = dudley_distance(&c, pair, 48).unwrap().value;
    assert!((mean_sq / (delta * delta) - 1.0).abs() < 0.03, "{mean_sq} vs {}", delta * delta);
}

#[test]
fn mehler_diagonal_matches_level_sum() {
    let pair = SpherePair::unit(3, 0.0).unwrap();
    let (x, _) = pair.representatives();
    let m = mehler_partial_sum(3, 0.7, &x, &x, 40).unwrap();
    let direct: f64 = (0..=40)
        .map(|n| (-0.7 * (2 * n + 3) as f64).exp() * spectral_at(n, pair).unwrap())
        .sum();
    assert!((m.partial - direct).abs() <= 1e-14 * direct);
    assert!(m.deviation() <= m.tail_bound + 1e-15);
}

#[test]
fn condensed_and_direct_verdicts_agree() {
    for (b, expected) in [(1.5, Verdict::Converging), (0.5, Verdict::Diverging)] {
        let c = CoefficientSequence::power_log(0.0, b, 2).unwrap();
        assert_eq!(sz_condition(2, &c, 1 << 16).unwrap().verdict, expected);
        assert_eq!(sz_condensed(2, &c, 4).unwrap().verdict, expected);
    }
}
