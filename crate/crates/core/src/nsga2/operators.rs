//! Real-coded variation: simulated binary crossover and polynomial mutation.

use rand::Rng;

/// Parents closer than this are treated as equal and copied unchanged.
const MIN_PARENT_GAP: f64 = 1e-14;

/// SBX spread factor for a uniform draw `u ∈ [0, 1)`.
///
/// Inverse CDF of the density `0.5(η+1)β^η` on `[0, 1]` and
/// `0.5(η+1)/β^(η+2)` above 1.
pub fn sbx_spread_factor(u: f64, eta_c: f64) -> f64 {
    let e = 1.0 / (eta_c + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(e)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(e)
    }
}

/// Simulated binary crossover.
///
/// With probability `1 - p_c` the parents are returned unchanged. Otherwise
/// every variable gets its own spread factor and the children are clipped
/// to the box.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    p_c: f64,
    eta_c: f64,
    lower: &[f64],
    upper: &[f64],
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() >= p_c {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        let beta = sbx_spread_factor(rng.random::<f64>(), eta_c);
        let (a, b) = (p1[i], p2[i]);
        if (a - b).abs() < MIN_PARENT_GAP {
            continue;
        }
        c1[i] = (0.5 * ((1.0 + beta) * a + (1.0 - beta) * b)).clamp(lower[i], upper[i]);
        c2[i] = (0.5 * ((1.0 - beta) * a + (1.0 + beta) * b)).clamp(lower[i], upper[i]);
    }
    (c1, c2)
}

/// Normalized polynomial-mutation step for a uniform draw `u`, bounded so
/// the mutated value stays inside the box. `room_below` and `room_above`
/// are the distances to the bounds as fractions of the box width.
pub fn polynomial_perturbation(u: f64, room_below: f64, room_above: f64, eta_m: f64) -> f64 {
    let pow = 1.0 / (eta_m + 1.0);
    if u <= 0.5 {
        let xy = 1.0 - room_below;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta_m + 1.0);
        val.powf(pow) - 1.0
    } else {
        let xy = 1.0 - room_above;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta_m + 1.0);
        1.0 - val.powf(pow)
    }
}

/// Bounded polynomial mutation: each variable mutates independently with
/// probability `p_m`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    p_m: f64,
    eta_m: f64,
    lower: &[f64],
    upper: &[f64],
    rng: &mut R,
) {
    for i in 0..x.len() {
        if rng.random::<f64>() >= p_m {
            continue;
        }
        let width = upper[i] - lower[i];
        let below = (x[i] - lower[i]) / width;
        let above = (upper[i] - x[i]) / width;
        let delta = polynomial_perturbation(rng.random::<f64>(), below, above, eta_m);
        x[i] = (x[i] + delta * width).clamp(lower[i], upper[i]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Largest gap between the empirical CDF of `samples` and `cdf`.
    fn ks_distance(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        samples.sort_by(f64::total_cmp);
        let n = samples.len() as f64;
        samples
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let f = cdf(s);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    // Analytic SBX spread-factor CDF, integrated from the density.
    fn sbx_cdf(beta: f64, eta: f64) -> f64 {
        if beta <= 1.0 {
            0.5 * beta.powf(eta + 1.0)
        } else {
            1.0 - 0.5 * beta.powf(-(eta + 1.0))
        }
    }

    // Bounded polynomial-mutation CDF: density 0.5(η+1)(1-|δ|)^η truncated
    // to [-below, above], each half renormalized to mass 1/2.
    fn pm_cdf(d: f64, below: f64, above: f64, eta: f64) -> f64 {
        let lo = (1.0 - below).powf(eta + 1.0);
        let hi = (1.0 - above).powf(eta + 1.0);
        if d <= 0.0 {
            ((1.0 + d).powf(eta + 1.0) - lo) / (2.0 * (1.0 - lo))
        } else {
            0.5 + (1.0 - (1.0 - d).powf(eta + 1.0)) / (2.0 * (1.0 - hi))
        }
    }

    #[test]
    fn zero_crossover_probability_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, b) = ([0.1, 0.9], [0.7, 0.2]);
        for _ in 0..100 {
            let (c1, c2) = sbx_crossover(&a, &b, 0.0, 10.0, &[0.0; 2], &[1.0; 2], &mut rng);
            assert_eq!(c1, a);
            assert_eq!(c2, b);
        }
    }

    #[test]
    fn equal_parents_give_equal_children() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = [0.123456789, -2.5];
        for _ in 0..1000 {
            let (c1, c2) = sbx_crossover(&p, &p, 1.0, 10.0, &[-3.0; 2], &[3.0; 2], &mut rng);
            assert_eq!(c1, p);
            assert_eq!(c2, p);
        }
    }

    #[test]
    fn children_inside_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let p1 = [rng.random::<f64>(), rng.random::<f64>()];
            let p2 = [rng.random::<f64>(), rng.random::<f64>()];
            let (c1, c2) = sbx_crossover(&p1, &p2, 1.0, 2.0, &[0.0; 2], &[1.0; 2], &mut rng);
            assert!(c1.iter().chain(&c2).all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn spread_factor_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (p1, p2) = ([0.4], [0.6]);
        let betas: Vec<f64> = (0..100_000)
            .map(|_| {
                let (c1, c2) = sbx_crossover(&p1, &p2, 1.0, 10.0, &[0.0], &[1.0], &mut rng);
                (c2[0] - c1[0]).abs() / (p2[0] - p1[0])
            })
            .collect();
        let ks = ks_distance(betas, |b| sbx_cdf(b, 10.0));
        assert!(ks < 0.01, "KS = {ks}");
    }

    #[test]
    fn zero_mutation_probability_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut x = [0.3, -1.0, 2.0];
        polynomial_mutation(&mut x, 0.0, 10.0, &[-3.0; 3], &[3.0; 3], &mut rng);
        assert_eq!(x, [0.3, -1.0, 2.0]);
    }

    #[test]
    fn mutation_stays_in_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100_000 {
            let mut x = [rng.random::<f64>() * 6.0 - 3.0];
            polynomial_mutation(&mut x, 1.0, 1.0, &[-3.0], &[3.0], &mut rng);
            assert!((-3.0..=3.0).contains(&x[0]));
        }
        let mut edge = [3.0];
        for _ in 0..1000 {
            polynomial_mutation(&mut edge, 1.0, 10.0, &[-3.0], &[3.0], &mut rng);
            assert!((-3.0..=3.0).contains(&edge[0]));
        }
    }

    #[test]
    fn perturbation_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &x0 in &[0.5, 0.2, 0.9] {
            let deltas: Vec<f64> = (0..100_000)
                .map(|_| {
                    let mut x = [x0];
                    polynomial_mutation(&mut x, 1.0, 10.0, &[0.0], &[1.0], &mut rng);
                    x[0] - x0
                })
                .collect();
            let ks = ks_distance(deltas, |d| pm_cdf(d, x0, 1.0 - x0, 10.0));
            assert!(ks < 0.01, "x0 = {x0}: KS = {ks}");
        }
    }
}
