//! Timing suites for the command-line `bench` verb.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attacks::{centralizer_attack, commutator_offline, commutator_online, AttackConfig};
use crate::braid::{random_word, Braid};
use crate::ff::Fp64;
use crate::linalg::FieldMatrix;
use crate::lkrep::lk_of_braid;
use crate::pipeline::{params_with, MarginPolicy};
use crate::protocols::{simulate_centralizer, simulate_commutator, GenParams, MatrixGroup, Protocol, Public};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    MatrixAttacks,
    BraidCore,
    Lk,
}

impl Suite {
    pub fn from_name(s: &str) -> Option<Suite> {
        match s {
            "matrix-attacks" => Some(Suite::MatrixAttacks),
            "braid-core" => Some(Suite::BraidCore),
            "lk" => Some(Suite::Lk),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::MatrixAttacks => "matrix-attacks",
            Suite::BraidCore => "braid-core",
            Suite::Lk => "lk",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub suite: String,
    pub size: usize,
    pub operation: String,
    /// Mean wall time per repetition.
    pub millis: f64,
    pub reps: usize,
    /// Subspace dimension or output size, where meaningful.
    pub dim: usize,
}

fn row(suite: Suite, size: usize, op: &str, total: Duration, reps: usize, dim: usize) -> BenchRow {
    BenchRow {
        suite: suite.name().into(),
        size,
        operation: op.into(),
        millis: total.as_secs_f64() * 1e3 / reps as f64,
        reps,
        dim,
    }
}

/// Times `commutator_offline` on `k` random invertible `n × n` matrices over
/// `𝔽_{2^61−1}`; returns the time and `dim C(C(b_1, …, b_k))`.
pub fn time_commutator_offline(n: usize, k: usize, seed: u64) -> (Duration, usize) {
    let ctx = Fp64::new(Fp64::MERSENNE61).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b: Vec<_> = (0..k).map(|_| FieldMatrix::random_invertible(&ctx, n, &mut rng)).collect();
    let t = Instant::now();
    let dc = commutator_offline(&b, n);
    (t.elapsed(), dc.dim())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

fn matrix_attacks(n: usize, rng: &mut ChaCha8Rng) -> Vec<BenchRow> {
    let s = Suite::MatrixAttacks;
    let g = MatrixGroup::new(Fp64::new(Fp64::MERSENNE61).unwrap(), n);
    let gp = GenParams::default();
    let cfg = AttackConfig::default();
    let inst = simulate_commutator(&g, 4, 16, &gp, rng);
    let Public::Commutator(p) = &inst.public else { unreachable!() };
    let t = Instant::now();
    let dc = commutator_offline(&p.b_list, n);
    let off = t.elapsed();
    let t = Instant::now();
    let rep = commutator_online(p, &dc, &cfg, rng).expect("honest instance");
    let on = t.elapsed();
    let inst = simulate_centralizer(&g, 4, 16, &gp, rng);
    let Public::Centralizer(p) = &inst.public else { unreachable!() };
    let t = Instant::now();
    let cent = centralizer_attack(p, &cfg, rng).expect("honest instance");
    vec![
        row(s, n, "commutator_offline", off, 1, dc.dim()),
        row(s, n, "commutator_online", on, 1, rep.draws_used),
        row(s, n, "centralizer_attack", t.elapsed(), 1, cent.draws_used),
    ]
}

fn braid_core(n: usize, rng: &mut ChaCha8Rng) -> Vec<BenchRow> {
    let s = Suite::BraidCore;
    let reps = 200;
    let xs: Vec<Braid> = (0..reps)
        .map(|_| Braid::random(n, rng.gen_range(-3..=3), 4, rng))
        .collect();
    let t = Instant::now();
    let mut len = 0;
    for w in xs.windows(2) {
        len += w[0].mul(&w[1]).canonical_length();
    }
    let mul = t.elapsed();
    let t = Instant::now();
    for x in &xs {
        std::hint::black_box(x.inv());
    }
    let inv = t.elapsed();
    let words: Vec<_> = (0..reps).map(|_| random_word(n - 1, 20, rng)).collect();
    let t = Instant::now();
    for w in &words {
        std::hint::black_box(Braid::from_word(n, w).unwrap());
    }
    let nf = t.elapsed();
    vec![
        row(s, n, "mul", mul, reps - 1, len / (reps - 1)),
        row(s, n, "inv", inv, reps, 0),
        row(s, n, "normal_form_of_word20", nf, reps, 0),
    ]
}

fn lk(n: usize, rng: &mut ChaCha8Rng) -> Vec<BenchRow> {
    let s = Suite::Lk;
    let bound = 8;
    let params = params_with(
        Protocol::Commutator,
        n,
        1,
        1,
        1,
        bound,
        2 * bound as usize + 1,
        MarginPolicy::Standard,
        rng,
    )
    .expect("parameters");
    let reps = 10;
    let xs: Vec<Braid> = (0..reps).map(|_| Braid::random(n, -4, 8, rng)).collect();
    let t = Instant::now();
    for x in &xs {
        std::hint::black_box(lk_of_braid(x));
    }
    let exact = t.elapsed();
    let t = Instant::now();
    let imgs: Vec<_> = xs.iter().map(|x| params.lk().image(x)).collect();
    let modular = t.elapsed();
    let t = Instant::now();
    for m in &imgs {
        params.lk().lift(m, bound).expect("in range");
    }
    let lift = t.elapsed();
    vec![
        row(s, n, "lk_exact", exact, reps, params.n()),
        row(s, n, "lk_mod", modular, reps, params.d()),
        row(s, n, "lift", lift, reps, params.p().bits() as usize),
    ]
}

/// Runs `suite` at each size, sequentially.
pub fn run(suite: Suite, sizes: &[usize], seed: u64) -> Result<Vec<BenchRow>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        match suite {
            Suite::MatrixAttacks if n < 2 => return Err("matrix sizes must be at least 2".into()),
            Suite::BraidCore | Suite::Lk if !(3..=12).contains(&n) => {
                return Err("braid sizes must lie in 3..=12".into())
            }
            _ => {}
        }
        rows.extend(match suite {
            Suite::MatrixAttacks => matrix_attacks(n, &mut rng),
            Suite::BraidCore => braid_core(n, &mut rng),
            Suite::Lk => lk(n, &mut rng),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = [2.0f64, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x.powi(5))).collect();
        assert!((loglog_slope(&pts) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn suites_run_at_small_sizes() {
        assert_eq!(run(Suite::MatrixAttacks, &[4], 1).unwrap().len(), 3);
        assert_eq!(run(Suite::BraidCore, &[4], 1).unwrap().len(), 3);
        assert_eq!(run(Suite::Lk, &[3], 1).unwrap().len(), 3);
        assert!(run(Suite::Lk, &[40], 1).is_err());
    }
}
