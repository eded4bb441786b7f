//! Library estimators against brute-force Monte Carlo written from scratch
//! here: separate generator, explicit 2x2 complex arithmetic.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use relaycov::capacity::{estimate_c2, estimate_c3};
use relaycov::cooperation::{estimate_coop_sum_rate, low_snr_sum_rate};
use relaycov::{McConfig, ScenarioConfig};

type C = (f64, f64);

fn add(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

fn mul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn conj(a: C) -> C {
    (a.0, -a.1)
}

type M2 = [[C; 2]; 2];

fn draw(rng: &mut StdRng) -> M2 {
    let mut cn = || {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        (re / 2f64.sqrt(), im / 2f64.sqrt())
    };
    [[cn(), cn()], [cn(), cn()]]
}

/// `g·HH†` accumulated into `acc`.
fn accumulate(acc: &mut M2, h: &M2, g: f64) {
    for i in 0..2 {
        for j in 0..2 {
            let s = h[i]
                .iter()
                .zip(&h[j])
                .fold((0.0, 0.0), |s, (&a, &b)| add(s, mul(a, conj(b))));
            acc[i][j] = add(acc[i][j], (g * s.0, g * s.1));
        }
    }
}

/// `log2 det(I + Σ gₖ·HₖHₖ†)` for 2x2 channels.
fn log2det_identity_plus(terms: &[(f64, M2)]) -> f64 {
    let mut a: M2 = [[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]];
    for (g, h) in terms {
        accumulate(&mut a, h, *g);
    }
    let det = add(
        mul(a[0][0], a[1][1]),
        mul((-1.0, 0.0), mul(a[0][1], a[1][0])),
    );
    det.0.log2()
}

struct Stats {
    mean: f64,
    se: f64,
}

fn brute<F: FnMut(&mut StdRng) -> f64>(seed: u64, n: usize, mut f: F) -> Stats {
    let mut rng = StdRng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..n).map(|_| f(&mut rng)).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Stats {
        mean,
        se: (var / n as f64).sqrt(),
    }
}

fn within_three_se(lib_mean: f64, lib_se: f64, oracle: &Stats) -> bool {
    (lib_mean - oracle.mean).abs() <= 3.0 * (lib_se.powi(2) + oracle.se.powi(2)).sqrt()
}

const N: usize = 40_000;

#[test]
fn coop_sum_rate_matches_brute_force() {
    let scn = ScenarioConfig::default();
    let mc = McConfig::new(3, N, 8).unwrap();
    let lib = estimate_coop_sum_rate(&scn, 1.0, 1.0, 1.0, &mc).unwrap();
    // P/N = 5 per antenna on each of the three links at unit distance
    let oracle = brute(11, N, |rng| {
        let terms = [(5.0, draw(rng)), (5.0, draw(rng)), (5.0, draw(rng))];
        log2det_identity_plus(&terms)
    });
    assert!(
        within_three_se(lib.mean, lib.std_error, &oracle),
        "library {} ± {} vs oracle {} ± {}",
        lib.mean,
        lib.std_error,
        oracle.mean,
        oracle.se
    );
}

#[test]
fn mac_and_point_to_point_match_brute_force() {
    let scn = ScenarioConfig::default();
    let mc = McConfig::new(4, N, 8).unwrap();
    let (r_d, r_dr, alpha) = (1.3f64, 0.6f64, 3.52);
    let lib = estimate_c2(&scn, r_d, r_dr, &mc).unwrap();
    let oracle = brute(12, N, |rng| {
        log2det_identity_plus(&[
            (5.0 * r_d.powf(-alpha), draw(rng)),
            (5.0 * r_dr.powf(-alpha), draw(rng)),
        ])
    });
    assert!(
        within_three_se(lib.mean, lib.std_error, &oracle),
        "{} vs {}",
        lib.mean,
        oracle.mean
    );

    let lib = estimate_c3(&scn, 0.9, &mc).unwrap();
    let oracle = brute(13, N, |rng| {
        log2det_identity_plus(&[(5.0 * 0.9f64.powf(-alpha), draw(rng))])
    });
    assert!(
        within_three_se(lib.mean, lib.std_error, &oracle),
        "{} vs {}",
        lib.mean,
        oracle.mean
    );
}

#[test]
fn low_snr_monte_carlo_within_five_percent() {
    let rho = 1e-3;
    let oracle = brute(14, N, |rng| {
        log2det_identity_plus(&[(rho / 2.0, draw(rng))])
    });
    let closed = low_snr_sum_rate(2, rho).unwrap();
    assert!(
        (oracle.mean / closed - 1.0).abs() < 0.05,
        "{} vs {closed}",
        oracle.mean
    );
}
