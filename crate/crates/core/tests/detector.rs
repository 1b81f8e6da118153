use cogradar::detector::{
    decide, m_probe, m_response, min_perturbation, min_perturbation_probe, min_perturbation_response,
    relaxed_feasible, sample_m_probe, sample_m_response, type_i_lower_bound, Decision, EmpiricalCdf, NoiseModel,
    NoiseSampler, NoisyChannel, PHI_TOL,
};
use cogradar::revealed::CrossCostMatrix;
use cogradar::seeds::rng_for;
use cogradar::simulator::{generate_dataset, ResponderKind, ScenarioConfig, ScenarioKind};
use proptest::prelude::*;
use rand::Rng;

/// Smallest slack at which no strictly negative cycle remains: the negated
/// minimax cycle weight, via a bottleneck Floyd-Warshall.
fn bottleneck_phi(a: &CrossCostMatrix) -> f64 {
    let n = a.len();
    let mut d: Vec<Vec<f64>> =
        (0..n).map(|t| (0..n).map(|s| if s == t { f64::INFINITY } else { a.get(t, s) }).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].max(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let best_cycle = (0..n).map(|t| d[t][t]).fold(f64::INFINITY, f64::min);
    (-best_cycle).max(0.0)
}

fn noisy_dataset<R: Rng>(n: usize, m: usize, sigma: f64, rng: &mut R) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let probes: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random_range(0.01..0.05)).collect()).collect();
    let noise = NoiseModel::gaussian(sigma).unwrap();
    let clean: Vec<Vec<f64>> = probes.iter().map(|a| a.iter().map(|x| 1.0 / (m as f64 * x)).collect()).collect();
    (probes.clone(), noise.perturb(&clean, rng))
}

#[test]
fn phi_matches_bottleneck_oracle() {
    let mut rng = rng_for(21, &[]);
    for _ in 0..300 {
        let n = rng.random_range(2..=8);
        let (p, r) = noisy_dataset(n, 3, 2.0, &mut rng);
        let a = CrossCostMatrix::from_vectors(&p, &r).unwrap();
        let phi = min_perturbation(&a);
        let want = bottleneck_phi(&a);
        assert!((phi - want).abs() <= 2.0 * PHI_TOL, "bisection {phi} vs bottleneck {want}");
        assert!(phi <= a.max_shortfall());
        assert!(relaxed_feasible(&a, phi));
    }
}

#[test]
fn phi_matches_grid_scan() {
    let mut rng = rng_for(22, &[]);
    let step = 1e-6;
    for _ in 0..20 {
        let (p, r) = noisy_dataset(6, 2, 0.5, &mut rng);
        let a = CrossCostMatrix::from_vectors(&p, &r).unwrap();
        let phi = min_perturbation(&a);
        let mut k = 0u64;
        while !relaxed_feasible(&a, k as f64 * step) {
            k += 1;
        }
        let grid = k as f64 * step;
        assert!(phi <= grid + PHI_TOL && phi > grid - step - PHI_TOL, "{phi} vs grid {grid}");
    }
}

#[test]
fn feasibility_is_monotone_in_slack() {
    let mut rng = rng_for(23, &[]);
    for _ in 0..100 {
        let (p, r) = noisy_dataset(10, 3, 3.0, &mut rng);
        let a = CrossCostMatrix::from_vectors(&p, &r).unwrap();
        let hi = a.max_shortfall();
        let flags: Vec<bool> = (0..=200).map(|i| relaxed_feasible(&a, hi * i as f64 / 200.0)).collect();
        assert!(flags.windows(2).all(|w| w[1] || !w[0]));
        assert!(*flags.last().unwrap());
    }
}

#[test]
fn phi_examples() {
    let a = CrossCostMatrix::from_fn(2, |_, _| -1.0);
    assert!((min_perturbation(&a) - 1.0).abs() <= 2.0 * PHI_TOL);
    // rationalizable Cobb-Douglas data need no slack
    let probes = vec![vec![0.5, 1.0], vec![1.0, 0.5], vec![0.8, 0.8]];
    let responses: Vec<Vec<f64>> = probes.iter().map(|a: &Vec<f64>| a.iter().map(|x| 0.5 / x).collect()).collect();
    assert_eq!(min_perturbation_response(&probes, &responses).unwrap(), 0.0);
    assert_eq!(min_perturbation_probe(&probes, &responses).unwrap(), 0.0);
}

#[test]
fn phi_depends_only_on_cross_costs() {
    // Swapping the roles of probes and responses transposes nothing when both are symmetric in t.
    let x = vec![vec![1.0, 0.2], vec![0.3, 1.0]];
    let y = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
    let a1 = CrossCostMatrix::from_vectors(&x, &y).unwrap();
    assert_eq!(min_perturbation_response(&x, &y).unwrap(), min_perturbation(&a1));
    assert_eq!(min_perturbation_probe(&x, &y).unwrap(), min_perturbation(&a1));
}

#[test]
fn zero_noise_gives_degenerate_m() {
    let noise = NoiseModel::gaussian(0.0).unwrap();
    let probes = vec![vec![0.1, 0.2]; 5];
    let cdf = sample_m_response(&probes, &noise, 50, &mut rng_for(24, &[])).unwrap();
    assert!(cdf.samples().iter().all(|x| *x == 0.0));
    assert_eq!(cdf.eval(0.0), 1.0);
    assert_eq!(cdf.eval(-1e-300), 0.0);
    let cdf = sample_m_probe(&probes, &noise, 50, &mut rng_for(24, &[])).unwrap();
    assert!(cdf.samples().iter().all(|x| *x == 0.0));
}

#[test]
fn m_probe_vanishes_for_equal_responses() {
    let noise = NoiseModel::gaussian(3.0).unwrap();
    let cdf = sample_m_probe(&vec![vec![0.4, 0.6]; 6], &noise, 200, &mut rng_for(25, &[])).unwrap();
    assert!(cdf.samples().iter().all(|x| *x == 0.0));
}

#[test]
fn folded_normal_mean() {
    let noise = NoiseModel::gaussian(1.0).unwrap();
    let samples = 100_000;
    let cdf = sample_m_response(&[vec![1.0], vec![1.0]], &noise, samples, &mut rng_for(26, &[])).unwrap();
    let mean = cdf.mean();
    let var = cdf.samples().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    let se = (var / samples as f64).sqrt();
    let want = 2.0 / std::f64::consts::PI.sqrt();
    assert!((mean - want).abs() <= 3.0 * se, "{mean} vs {want} (se {se})");
}

/// Straightforward re-implementation: explicit noise matrix, explicit pair loop.
fn m_oracle<R: Rng>(x: &[Vec<f64>], sigma: f64, probe_side: bool, rng: &mut R) -> f64 {
    use rand_distr::{Distribution, Normal};
    let normal = Normal::new(0.0, sigma).unwrap();
    let n = x.len();
    let eps: Vec<Vec<f64>> = (0..n).map(|_| x[0].iter().map(|_| normal.sample(rng)).collect()).collect();
    let mut best = f64::NEG_INFINITY;
    for t in 0..n {
        for s in 0..n {
            if t == s {
                continue;
            }
            let v: f64 = (0..x[0].len())
                .map(|i| if probe_side { eps[t][i] * (x[t][i] - x[s][i]) } else { x[t][i] * (eps[t][i] - eps[s][i]) })
                .sum();
            best = best.max(v);
        }
    }
    best
}

#[test]
fn m_sampler_matches_reimplementation() {
    let mut rng = rng_for(27, &[0]);
    let x: Vec<Vec<f64>> = (0..8).map(|_| (0..3).map(|_| rng.random_range(0.1..1.0)).collect()).collect();
    let sigma = 0.7;
    let samples = 20_000;
    for probe_side in [false, true] {
        let noise = NoiseModel::gaussian(sigma).unwrap();
        let cdf = if probe_side {
            sample_m_probe(&x, &noise, samples, &mut rng_for(27, &[1]))
        } else {
            sample_m_response(&x, &noise, samples, &mut rng_for(27, &[1]))
        }
        .unwrap();
        let mut orng = rng_for(27, &[2]);
        let oracle: Vec<f64> = (0..samples).map(|_| m_oracle(&x, sigma, probe_side, &mut orng)).collect();
        let om = oracle.iter().sum::<f64>() / samples as f64;
        let var = oracle.iter().map(|v| (v - om).powi(2)).sum::<f64>() / samples as f64;
        let se = (2.0 * var / samples as f64).sqrt();
        assert!((cdf.mean() - om).abs() <= 4.0 * se, "{} vs {om}", cdf.mean());
    }
}

#[test]
fn m_statistic_direct_values() {
    let probes = vec![vec![1.0, 0.0], vec![0.0, 2.0]];
    let eps = vec![vec![0.5, 0.0], vec![0.0, -0.5]];
    // t=0,s=1: 1*(0.5-0) = 0.5 ; t=1,s=0: 2*(-0.5-0) = -1
    assert_eq!(m_response(&probes, &eps), 0.5);
    let responses = vec![vec![1.0, 1.0], vec![0.0, 3.0]];
    // t=0,s=1: 0.5*1 + 0*(-2) = 0.5 ; t=1,s=0: 0 + (-0.5)*2 = -1
    assert_eq!(m_probe(&responses, &eps), 0.5);
}

#[test]
fn decision_examples() {
    let cdf = EmpiricalCdf::from_samples((1..=100).map(|i| i as f64 / 100.0).collect()).unwrap();
    let out = decide(0.0, &cdf, 0.05).unwrap();
    assert_eq!((out.statistic, out.decision), (1.0, Decision::H0));
    let out = decide(5.0, &cdf, 0.05).unwrap();
    assert_eq!((out.statistic, out.decision), (0.0, Decision::H1));
    // statistic at or below gamma goes to H1
    let out = decide(0.95, &cdf, 0.05).unwrap();
    assert!((out.statistic - 0.05).abs() < 1e-12);
    assert_eq!(decide(0.965, &cdf, 0.05).unwrap().decision, Decision::H1);
}

proptest! {
    #[test]
    fn cdf_is_a_distribution_function(samples in prop::collection::vec(-5.0f64..5.0, 1..200), xs in prop::collection::vec(-6.0f64..6.0, 2..20)) {
        let cdf = EmpiricalCdf::from_samples(samples).unwrap();
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let vals: Vec<f64> = xs.iter().map(|x| cdf.eval(*x)).collect();
        prop_assert!(vals.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(cdf.eval(6.0), 1.0);
        prop_assert_eq!(cdf.eval(-6.0), 0.0);
    }

    #[test]
    fn lower_bound_is_a_probability(phi in 0.0f64..50.0, probes in prop::collection::vec(prop::collection::vec(0.0f64..3.0, 3), 1..20)) {
        let b = type_i_lower_bound(phi, &probes).unwrap();
        prop_assert!((0.0..=1.0).contains(&b));
    }
}

#[test]
fn lower_bound_examples() {
    for norm in [0.1, 1.0, 7.0] {
        let b = type_i_lower_bound(0.0, &[vec![norm]]).unwrap();
        assert!((b - 0.398_942_280_401_432_7).abs() < 1e-12);
    }
    assert!(type_i_lower_bound(1e3, &vec![vec![1.0, 1.0]; 10]).unwrap() < 1e-12);
}

#[test]
fn gaussian_lower_bound_holds_empirically() {
    let noise = NoiseModel::gaussian(1.0).unwrap();
    let mut rng = rng_for(28, &[]);
    for (probes, phi) in [(vec![vec![1.0]; 3], 2.0), (vec![vec![0.3, 0.4]; 8], 1.0)] {
        let samples = 20_000;
        let hits = (0..samples).filter(|_| m_response(&probes, &noise.draws(probes.len(), probes[0].len(), &mut rng)) >= phi).count();
        let p = hits as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        assert!(p >= type_i_lower_bound(phi, &probes).unwrap() - 3.0 * se);
    }
}

#[test]
fn inflating_phi_never_lowers_false_alarms() {
    let cfg = ScenarioConfig { responder: ResponderKind::Cognitive, ..ScenarioConfig::defaults(ScenarioKind::Beam) };
    let noise = NoiseModel::gaussian(0.05).unwrap();
    let (mut base, mut inflated) = (0, 0);
    for k in 0..500u64 {
        let mut rng = rng_for(29, &[k]);
        let ds = generate_dataset(&cfg, &mut rng).unwrap();
        let cdf = sample_m_response(ds.probes(), &noise, 200, &mut rng).unwrap();
        let noisy = noise.perturb(ds.responses(), &mut rng);
        let a = CrossCostMatrix::from_vectors(ds.probes(), &noisy).unwrap();
        let phi = min_perturbation(&a);
        let delta = 0.1 * a.max_shortfall();
        let h1 = |p: f64| decide(p, &cdf, 0.05).unwrap().decision == Decision::H1;
        assert!(!h1(phi) || h1(phi + delta));
        base += h1(phi) as usize;
        inflated += h1(phi + delta) as usize;
    }
    assert!(inflated >= base);
}

#[test]
fn channels_are_deterministic_under_seed() {
    let probes = vec![vec![0.02, 0.03], vec![0.04, 0.01], vec![0.03, 0.03]];
    let responses = vec![vec![10.0, 5.0], vec![5.0, 20.0], vec![8.0, 8.0]];
    let noise = NoiseModel::gaussian(0.1).unwrap();
    for ch in [NoisyChannel::Response, NoisyChannel::Probe] {
        let a = ch.perturbed_phi(&probes, &responses, &noise, &mut rng_for(30, &[])).unwrap();
        let b = ch.perturbed_phi(&probes, &responses, &noise, &mut rng_for(30, &[])).unwrap();
        assert_eq!(a, b);
        let c1 = ch.sample_m(&probes, &responses, &noise, 100, &mut rng_for(31, &[])).unwrap();
        let c2 = ch.sample_m(&probes, &responses, &noise, 100, &mut rng_for(31, &[])).unwrap();
        assert_eq!(c1, c2);
    }
}
