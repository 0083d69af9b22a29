//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use fmq_core::two_qubit::XState;
use num_complex::Complex64;
use rand::Rng;

/// Eigenvalues of a 4×4 Hermitian matrix via the real 8×8 embedding
/// `[[Re, −Im], [Im, Re]]` and cyclic Jacobi rotations. Each eigenvalue
/// appears twice in the embedding; every other sorted value is returned.
pub fn hermitian4_eigenvalues(m: &[[Complex64; 4]; 4]) -> [f64; 4] {
    let mut a = [[0.0f64; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = m[i][j].re;
            a[i + 4][j + 4] = m[i][j].re;
            a[i][j + 4] = -m[i][j].im;
            a[i + 4][j] = m[i][j].im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..8)
            .flat_map(|i| (0..8).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..8 {
            for q in (p + 1)..8 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (rp, rq) = (a[p], a[q]);
                for k in 0..8 {
                    a[p][k] = c * rp[k] - s * rq[k];
                    a[q][k] = s * rp[k] + c * rq[k];
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..8).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    [ev[0], ev[2], ev[4], ev[6]]
}

fn entropy_bits(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|x| **x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

fn hermitian2_eigenvalues(a: f64, d: f64, off: Complex64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt();
    [mean + r, mean - r]
}

/// Conditional entropy of A after the projective measurement of B along the
/// Bloch direction (θ, φ). Index convention: `2·a + b`.
fn measured_conditional_entropy(rho: &[[Complex64; 4]; 4], theta: f64, phi: f64) -> f64 {
    let n = Complex64::from_polar(1.0, phi) * (0.5 * theta).sin();
    let up = [Complex64::new((0.5 * theta).cos(), 0.0), n];
    let down = [-n.conj(), Complex64::new((0.5 * theta).cos(), 0.0)];
    let mut total = 0.0;
    for v in [up, down] {
        // Unnormalised conditional state of A: ⟨v|_B ρ |v⟩_B.
        let mut s = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a1 in 0..2 {
            for a2 in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for b1 in 0..2 {
                    for b2 in 0..2 {
                        acc += v[b1].conj() * rho[2 * a1 + b1][2 * a2 + b2] * v[b2];
                    }
                }
                s[a1][a2] = acc;
            }
        }
        let p = s[0][0].re + s[1][1].re;
        if p <= 1e-15 {
            continue;
        }
        let ev = hermitian2_eigenvalues(s[0][0].re / p, s[1][1].re / p, s[0][1] / p);
        total += p * entropy_bits(&ev);
    }
    total
}

/// Discord with measurement on B: `S(ρ_B) − S(ρ) + min Σ p_k S(ρ_A|k)`,
/// minimised on a 100×100 (θ, φ) grid and refined by pattern search.
pub fn brute_force_discord(state: &XState) -> f64 {
    let rho = state.to_matrix();
    let p = &state.populations;
    let s_b = entropy_bits(&[p[0] + p[2], p[1] + p[3]]);
    let s_ab = entropy_bits(&hermitian4_eigenvalues(&rho));
    let n = 100;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..n {
        let theta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let v = measured_conditional_entropy(&rho, theta, phi);
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }
    let mut step = 0.05;
    while step > 1e-9 {
        let mut improved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = measured_conditional_entropy(&rho, best.1 + dt, best.2 + dp);
            if v < best.0 {
                best = (v, best.1 + dt, best.2 + dp);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (s_b - s_ab + best.0).max(0.0)
}

/// Random physical X state: Dirichlet-like populations and coherences
/// drawn uniformly inside the positivity discs.
pub fn random_x_state<R: Rng>(rng: &mut R) -> XState {
    let raw: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
    let sum: f64 = raw.iter().sum();
    let p = raw.map(|x| x / sum);
    let disc = |rng: &mut R, radius: f64| {
        Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
    };
    let c14 = disc(rng, (p[0] * p[3]).sqrt());
    let c23 = disc(rng, (p[1] * p[2]).sqrt());
    XState::new(p, c14, c23).expect("sampled inside the physical region")
}
