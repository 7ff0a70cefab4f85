//! One-dimensional sensing subspace codes.
//!
//! A ruler `d_1..d_M` on a grid of size `N` induces `N` codewords, the lines
//! spanned by the steering vectors `(alpha_n^d_1, ..., alpha_n^d_M)` with
//! `alpha_n = exp(j*pi*sin(theta_n))` and `sin(theta_n) = -1 + 2n/N` for the
//! 0-based grid index `n`. Pairwise ratios `conj(alpha_n) * alpha_n'` are
//! `N`-th roots of unity, so every distance reduces to the beampattern
//! `B[k] = |sum_m omega^(k*d_m)|^2` with `omega = exp(j*2*pi/N)`.
//!
//! Phases are always reduced as exact integers before conversion to floating
//! point, so large positions do not lose precision.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rulers::{Construction, Ruler};

/// `exp(j*2*pi*r/n)` for an integer phase already reduced into `0..n`.
fn root(r: u128, n: u128) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

fn lag_phase(k: u64, d: u64, n: u64) -> u128 {
    (k as u128 * d as u128) % n as u128
}

/// `alpha_n^d` for the 0-based grid index `n`: `exp(j*pi*d*(2n - N)/N)`.
fn steering_entry(n: usize, d: u64, big_n: u64) -> Complex64 {
    let two_n = 2 * big_n as i128;
    let t = (d as i128 * (2 * n as i128 - big_n as i128)).rem_euclid(two_n);
    root(t as u128, two_n as u128)
}

/// Grid value `alpha_n` for the 0-based index `n` in `0..N`.
pub fn grid_alpha(n: usize, big_n: usize) -> Result<Complex64> {
    if n >= big_n {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: big_n,
        });
    }
    Ok(steering_entry(n, 1, big_n as u64))
}

/// `sin(theta_n) = -1 + 2n/N`.
pub fn grid_sin_theta(n: usize, big_n: usize) -> f64 {
    -1.0 + 2.0 * n as f64 / big_n as f64
}

/// The code of a ruler with its `N` representative vectors.
///
/// Vectors are stored unnormalized (squared norm `M`), row-major.
#[derive(Debug, Clone)]
pub struct Codebook {
    ruler: Ruler,
    grid: usize,
    sensors: usize,
    alphas: Vec<Complex64>,
    vectors: Vec<Complex64>,
}

pub fn build_codebook(r: &Ruler) -> Result<Codebook> {
    Codebook::new(r.clone())
}

impl Codebook {
    pub fn new(ruler: Ruler) -> Result<Self> {
        let grid = usize::try_from(ruler.modulus()).map_err(|_| Error::TooLarge {
            what: "N",
            value: ruler.modulus(),
        })?;
        let sensors = ruler.len();
        grid.checked_mul(sensors)
            .filter(|&cells| cells <= 1 << 28)
            .ok_or(Error::TooLarge {
                what: "N*M",
                value: ruler.modulus(),
            })?;
        let big_n = ruler.modulus();
        let alphas = (0..grid).map(|n| steering_entry(n, 1, big_n)).collect();
        let vectors = (0..grid)
            .flat_map(|n| {
                ruler
                    .positions()
                    .iter()
                    .map(move |&d| steering_entry(n, d, big_n))
            })
            .collect();
        Ok(Self {
            ruler,
            grid,
            sensors,
            alphas,
            vectors,
        })
    }

    pub fn ruler(&self) -> &Ruler {
        &self.ruler
    }

    /// Number of codewords `N`.
    pub fn grid_size(&self) -> usize {
        self.grid
    }

    /// Ambient dimension `M`.
    pub fn sensors(&self) -> usize {
        self.sensors
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// Representative vector of codeword `n`.
    pub fn vector(&self, n: usize) -> &[Complex64] {
        &self.vectors[n * self.sensors..(n + 1) * self.sensors]
    }

    /// Arrival angle in radians of grid point `n`.
    pub fn theta(&self, n: usize) -> f64 {
        grid_sin_theta(n, self.grid).asin()
    }

    pub fn subspace_distance(&self, n1: usize, n2: usize) -> Result<f64> {
        subspace_distance(self, n1, n2)
    }

    pub fn beampattern(&self) -> Vec<f64> {
        beampattern(&self.ruler)
    }

    pub fn min_distance(&self) -> DistanceReport {
        min_distance(&self.ruler)
    }
}

/// `1 - |sum_m (conj(alpha_n1) alpha_n2)^d_m|^2 / M^2`, clamped to `[0, 1]`.
pub fn subspace_distance(cb: &Codebook, n1: usize, n2: usize) -> Result<f64> {
    let len = cb.grid;
    for index in [n1, n2] {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
    }
    let big_n = cb.ruler.modulus();
    let k = ((n2 + len - n1) % len) as u64;
    let sum: Complex64 = cb
        .ruler
        .positions()
        .iter()
        .map(|&d| root(lag_phase(k, d, big_n), big_n as u128))
        .sum();
    let m2 = (cb.sensors * cb.sensors) as f64;
    Ok((1.0 - sum.norm_sqr() / m2).clamp(0.0, 1.0))
}

/// Line-to-line distance computed directly from two spanning vectors:
/// `1 - |<u, v>|^2 / (|u|^2 |v|^2)`, i.e. `sin^2` of the principal angle.
pub fn principal_angle_distance_oracle(u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let nu = u.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    let nv = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let inner: Complex64 = u.iter().zip(v).map(|(a, b)| b.conj() * a / (nu * nv)).sum();
    Ok((1.0 - inner.norm_sqr()).clamp(0.0, 1.0))
}

/// Unweighted beampattern `B[k] = |sum_m omega^(k*d_m)|^2` for `k = 0..N`.
pub fn beampattern(r: &Ruler) -> Vec<f64> {
    let big_n = r.modulus();
    let roots: Vec<Complex64> = (0..big_n).map(|t| root(t as u128, big_n as u128)).collect();
    (0..big_n)
        .map(|k| {
            r.positions()
                .iter()
                .map(|&d| roots[lag_phase(k, d, big_n) as usize])
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect()
}

/// Minimum distance of a code together with the bounds that apply to it.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub m: usize,
    pub n: u64,
    /// `1 - max_offpeak_beampattern / M^2`, in `[0, 1]`.
    pub dmin: f64,
    /// Smallest lag `k != 0` attaining the off-peak maximum.
    pub argmin_lag: u64,
    /// A codeword pair at distance `dmin`: `(0, argmin_lag)`.
    pub argmin_pair: (usize, usize),
    pub max_offpeak_beampattern: f64,
    /// Welch limit on `dmin`, absent when `N <= M`.
    pub welch_upper: Option<f64>,
    /// `1 - 2/M` for Bose-Chowla rulers (a lower bound), `1 - 4/pi^2` for ULAs
    /// (an upper bound), absent for custom rulers.
    pub construction_bound: Option<f64>,
}

/// Exact minimum distance via a full beampattern scan.
pub fn min_distance(r: &Ruler) -> DistanceReport {
    let b = beampattern(r);
    let m = r.len();
    let m2 = (m * m) as f64;
    let max = b[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-9 * m2;
    let lag = b[1..]
        .iter()
        .position(|&v| v >= max - tie)
        .map_or(1, |i| i + 1);
    let construction_bound = match r.label() {
        Construction::BoseChowla { .. } => Some(bc_distance_bound(m as u64)),
        Construction::Ula => Some(ula_distance_bound()),
        Construction::Custom => None,
    };
    DistanceReport {
        m,
        n: r.modulus(),
        dmin: (1.0 - max / m2).clamp(0.0, 1.0),
        argmin_lag: lag as u64,
        argmin_pair: (0, lag),
        max_offpeak_beampattern: max,
        welch_upper: welch_upper_bound(r.modulus(), m as u64).ok(),
        construction_bound,
    }
}

/// Lower bound `1 - 2/M` on the minimum distance of a Bose-Chowla code.
pub fn bc_distance_bound(m: u64) -> f64 {
    1.0 - 2.0 / m as f64
}

/// Upper bound `1 - 4/pi^2` on the minimum distance of a ULA code with
/// `N = M^2 - 1`, `M > 3`.
pub fn ula_distance_bound() -> f64 {
    1.0 - 4.0 / (PI * PI)
}

/// Welch limit `1 - (N - M) / (M (N - 1))` on the minimum distance of `N`
/// lines in `C^M`.
pub fn welch_upper_bound(n: u64, m: u64) -> Result<f64> {
    if n <= m || m == 0 {
        return Err(Error::VacuousWelch { n, m });
    }
    let (n, m) = (n as f64, m as f64);
    Ok(1.0 - (n - m) / (m * (n - 1.0)))
}

/// Union bound on the decoder error probability,
/// `min(1, exp(-(M / 4 sigma^2) (1 - sqrt(1 - dmin))^2 + ln N))`,
/// for a unit-magnitude source.
pub fn pe_upper_bound(m: u64, n: u64, sigma: f64, dmin: f64) -> f64 {
    let dmin = dmin.clamp(0.0, 1.0);
    let gap = 1.0 - (1.0 - dmin).sqrt();
    if sigma == 0.0 {
        return if gap > 0.0 { 0.0 } else { 1.0 };
    }
    let exponent = -(m as f64) / (4.0 * sigma * sigma) * gap * gap + (n as f64).ln();
    exponent.exp().min(1.0)
}

/// [`pe_upper_bound`] evaluated at the Bose-Chowla distance guarantee `dmin = 1 - 2/M`.
pub fn bc_pe_upper_bound(m: u64, n: u64, sigma: f64) -> f64 {
    pe_upper_bound(m, n, sigma, bc_distance_bound(m).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulers::{bose_chowla, ula};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Direct floating-point evaluation of `|sum_m exp(j 2 pi k d_m / N)|^2`.
    fn naive_beampattern(r: &Ruler) -> Vec<f64> {
        let n = r.modulus() as f64;
        (0..r.modulus())
            .map(|k| {
                let (re, im) = r.positions().iter().fold((0.0, 0.0), |(re, im), &d| {
                    let phi = 2.0 * PI * (k as f64) * (d as f64) / n;
                    (re + phi.cos(), im + phi.sin())
                });
                re * re + im * im
            })
            .collect()
    }

    fn dirichlet(m: u64, n: u64, k: u64) -> f64 {
        let (m, n, k) = (m as f64, n as f64, k as f64);
        ((PI * m * k / n).sin() / (PI * k / n).sin()).powi(2)
    }

    #[test]
    fn grid_values() {
        assert!(close(
            (grid_alpha(0, 8).unwrap() - Complex64::new(-1.0, 0.0)).norm(),
            0.0,
            1e-15
        ));
        assert!(close(
            (grid_alpha(4, 8).unwrap() - Complex64::new(1.0, 0.0)).norm(),
            0.0,
            1e-15
        ));
        let expected = Complex64::from_polar(1.0, -0.75 * PI);
        assert!(close(
            (grid_alpha(1, 8).unwrap() - expected).norm(),
            0.0,
            1e-15
        ));
        assert_eq!(
            grid_alpha(8, 8),
            Err(Error::IndexOutOfRange { index: 8, len: 8 })
        );
        assert!(close(grid_sin_theta(1, 8), -0.75, 0.0));
    }

    #[test]
    fn codebook_vectors() {
        let cb = build_codebook(&ula(1, 5).unwrap()).unwrap();
        assert!(cb.vector(3).iter().all(|v| close(
            (v - Complex64::new(1.0, 0.0)).norm(),
            0.0,
            1e-15
        )));
        let cb = build_codebook(&ula(2, 4).unwrap()).unwrap();
        for v in cb.vector(2) {
            assert!(close((v - Complex64::new(1.0, 0.0)).norm(), 0.0, 1e-15));
        }
        let cb = build_codebook(&bose_chowla(3).unwrap()).unwrap();
        for n in 0..8 {
            let a = cb.alphas()[n];
            for (v, d) in cb.vector(n).iter().zip([1, 6, 7]) {
                assert!(close((v - a.powi(d)).norm(), 0.0, 1e-12));
            }
            let norm2: f64 = cb.vector(n).iter().map(Complex64::norm_sqr).sum();
            assert!(close(norm2, 3.0, 1e-12));
            assert!(close(a.norm(), 1.0, 1e-15));
        }
        assert!(close(cb.theta(4), 0.0, 1e-15));
    }

    #[test]
    fn distance_examples() {
        let cb = build_codebook(&bose_chowla(3).unwrap()).unwrap();
        assert_eq!(cb.subspace_distance(5, 5).unwrap(), 0.0);
        assert!(close(cb.subspace_distance(0, 2).unwrap(), 8.0 / 9.0, 1e-12));
        assert!(close(cb.subspace_distance(0, 1).unwrap(), 2.0 / 3.0, 1e-12));
        let cb = build_codebook(&ula(2, 3).unwrap()).unwrap();
        assert!(close(cb.subspace_distance(0, 1).unwrap(), 0.75, 1e-12));
        assert!(cb.subspace_distance(0, 3).is_err());
    }

    #[test]
    fn oracle_examples() {
        let u = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        assert!(close(
            principal_angle_distance_oracle(&u, &u).unwrap(),
            0.0,
            1e-15
        ));
        let v = [Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)];
        assert!(close(
            principal_angle_distance_oracle(&u, &v).unwrap(),
            1.0,
            1e-15
        ));
        let z = [Complex64::new(0.0, 0.0); 2];
        assert_eq!(
            principal_angle_distance_oracle(&u, &z),
            Err(Error::ZeroVector)
        );
        assert!(principal_angle_distance_oracle(&u, &u[..1]).is_err());
    }

    #[test]
    fn beampattern_examples() {
        let b = beampattern(&bose_chowla(3).unwrap());
        let expected = [9.0, 3.0, 1.0, 3.0, 1.0, 3.0, 1.0, 3.0];
        for (x, y) in b.iter().zip(expected) {
            assert!(close(*x, y, 1e-12));
        }
        for (m, n) in [(3u64, 8u64), (5, 24), (19, 360)] {
            let b = beampattern(&ula(m, n).unwrap());
            assert!(close(b[0], (m * m) as f64, 1e-9));
            for k in 1..n {
                assert!(
                    close(b[k as usize], dirichlet(m, n, k), 1e-9),
                    "M={m} N={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn beampattern_matches_naive_sum() {
        for q in [4u64, 5, 7, 8, 9, 11] {
            let r = bose_chowla(q).unwrap();
            for (a, b) in beampattern(&r).iter().zip(naive_beampattern(&r)) {
                assert!(close(*a, b, 1e-9));
            }
        }
    }

    #[test]
    fn min_distance_examples() {
        let rep = min_distance(&bose_chowla(3).unwrap());
        assert!(close(rep.dmin, 2.0 / 3.0, 1e-12));
        assert_eq!(rep.argmin_lag, 1);
        assert_eq!(rep.argmin_pair, (0, 1));
        assert!(close(rep.max_offpeak_beampattern, 3.0, 1e-12));
        assert!(close(rep.welch_upper.unwrap(), 1.0 - 5.0 / 21.0, 1e-12));
        assert!(close(rep.construction_bound.unwrap(), 1.0 / 3.0, 1e-15));

        // frozen from the Dirichlet closed form, evaluated independently
        let rep = min_distance(&ula(3, 8).unwrap());
        assert!(close(rep.dmin, 0.352396986139312, 1e-12));
        let rep = min_distance(&ula(19, 360).unwrap());
        assert!(close(rep.dmin, 0.009105228985605, 1e-12));
        assert!(rep.dmin <= ula_distance_bound());

        let rep = min_distance(&ula(1, 6).unwrap());
        assert_eq!(rep.dmin, 0.0);
        let rep = min_distance(&Ruler::custom(vec![0, 1, 3], 8).unwrap());
        assert_eq!(rep.construction_bound, None);
        assert_eq!(min_distance(&ula(2, 2).unwrap()).welch_upper, None);
    }

    #[test]
    fn bounds() {
        assert_eq!(bc_distance_bound(2), 0.0);
        assert!(close(bc_distance_bound(19), 0.894736842105263, 1e-12));
        assert!(close(ula_distance_bound(), 0.594715265430649, 1e-12));
        assert!(close(
            welch_upper_bound(8, 3).unwrap(),
            0.761904761904762,
            1e-12
        ));
        assert!(close(
            welch_upper_bound(360, 19).unwrap(),
            0.950007330303475,
            1e-12
        ));
        assert_eq!(
            welch_upper_bound(3, 3),
            Err(Error::VacuousWelch { n: 3, m: 3 })
        );
    }

    #[test]
    fn pe_bound_examples() {
        assert_eq!(pe_upper_bound(3, 8, 1.0, 0.0), 1.0);
        assert_eq!(pe_upper_bound(3, 8, 0.0, 0.5), 0.0);
        assert!(pe_upper_bound(3, 8, 1e-3, 0.5) < 1e-300);
        // hand evaluation: exp(-75 (1 - sqrt(1/3))^2 + ln 8)
        let v = pe_upper_bound(3, 8, 0.1, 2.0 / 3.0);
        assert!(close(v, 1.2151984357888841e-5, 1e-15));
        // bound at dmin = 1 - 2/M, M = 19, 10 dB
        let sigma = 10f64.powf(-0.5);
        assert!(close(
            bc_pe_upper_bound(19, 360, sigma),
            1.3857890619822674e-7,
            1e-20
        ));
    }
}
