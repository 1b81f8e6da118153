use cogradar::tracker::symmetric_eigenvalues;
use cogradar::waveforms::{obs_noise_cov, WaveformFamily, WaveformSpec};

const CW: [WaveformFamily; 2] = [WaveformFamily::TriangularCw, WaveformFamily::GaussianCw];

#[test]
fn unit_constant_examples() {
    let unit = |f| WaveformSpec::new(f, 1.0).with_constants(1.0, 1.0, 1.0);
    assert_eq!(obs_noise_cov(&unit(WaveformFamily::TriangularCw)).unwrap().as_slice(), &[1.0 / 12.0, 0.0, 0.0, 2.5]);
    assert_eq!(obs_noise_cov(&unit(WaveformFamily::GaussianCw)).unwrap().as_slice(), &[0.5, 0.0, 0.0, 0.5]);
}

#[test]
fn chirp_without_sweep_is_gaussian_cw() {
    for lambda in [1e-6, 1e-3, 0.1, 1.0] {
        let g = obs_noise_cov(&WaveformSpec::new(WaveformFamily::GaussianCw, lambda)).unwrap();
        let c = obs_noise_cov(&WaveformSpec::new(WaveformFamily::GaussianLfmChirp, lambda)).unwrap();
        assert_eq!(g, c);
    }
}

#[test]
fn cw_determinant_does_not_depend_on_lambda() {
    let (c, fc, eta) = (3e8f64, 1e9f64, 2.0f64);
    let expected = [5.0 * c.powi(4) / (24.0 * fc * fc * eta * eta), c.powi(4) / (4.0 * fc * fc * eta * eta)];
    for (family, want) in CW.into_iter().zip(expected) {
        for lambda in [0.1, 1.0, 10.0] {
            let r = obs_noise_cov(&WaveformSpec::new(family, lambda).with_constants(c, fc, eta)).unwrap();
            assert!((r.determinant() - want).abs() <= 1e-12 * want, "{family:?} λ={lambda}");
        }
    }
}

#[test]
fn chirp_is_positive_definite_on_grid() {
    for i in 0..20 {
        let lambda = 1e-7 * 10f64.powf(i as f64 * 0.25);
        for j in 0..20 {
            let b = -1e12 + 2e12 * j as f64 / 19.0;
            let r = obs_noise_cov(&WaveformSpec::new(WaveformFamily::GaussianLfmChirp, lambda).with_chirp_rate(b)).unwrap();
            let ev = symmetric_eigenvalues(&r).unwrap();
            assert!(ev.iter().all(|e| *e > 0.0), "λ={lambda} b={b} eigenvalues {ev:?}");
        }
    }
}

#[test]
fn cw_variances_trade_off_in_lambda() {
    for family in CW {
        let covs: Vec<_> =
            [1e-6, 1e-5, 1e-4, 1e-3].iter().map(|l| obs_noise_cov(&WaveformSpec::new(family, *l)).unwrap()).collect();
        for w in covs.windows(2) {
            assert!(w[1][(0, 0)] > w[0][(0, 0)]);
            assert!(w[1][(1, 1)] < w[0][(1, 1)]);
        }
    }
}

#[test]
fn outputs_are_symmetric() {
    let r = obs_noise_cov(&WaveformSpec::new(WaveformFamily::GaussianLfmChirp, 1e-4).with_chirp_rate(3e9)).unwrap();
    assert_eq!(r[(0, 1)], r[(1, 0)]);
    assert!(r[(0, 1)] < 0.0);
}

#[test]
fn rejects_nonpositive_parameters() {
    for bad in [
        WaveformSpec::new(WaveformFamily::GaussianCw, -1.0),
        WaveformSpec::new(WaveformFamily::TriangularCw, 1.0).with_constants(0.0, 1.0, 1.0),
        WaveformSpec::new(WaveformFamily::TriangularCw, 1.0).with_constants(1.0, 0.0, 1.0),
        WaveformSpec::new(WaveformFamily::GaussianLfmChirp, 1.0).with_chirp_rate(f64::NAN),
    ] {
        assert!(obs_noise_cov(&bad).is_err());
    }
}
