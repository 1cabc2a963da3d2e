//! Linear centralizer attacks on matrix-group key exchange.
//!
//! Every engine reduces key recovery to linear systems in the entries of the
//! unknown matrices, restricted to centralizers that the public data already
//! determine, and then samples an invertible solution. Outputs are exact:
//! whenever an engine returns a key on an honest instance, it is the shared
//! key.

use std::time::{Duration, Instant};

use rand::Rng;
use thiserror::Error;

use crate::ff::Field;
use crate::protocols::{CentralizerPublic, CommutatorPublic, DhPublic, DoubleCosetPublic};
use crate::linalg::{
    centralizer_basis, double_centralizer_basis, linear_relations, random_invertible_in,
    solve_conjugacy_system, FieldMatrix, LinalgError, SampleConfig, Subspace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("no invertible solution after {attempts} attempts ({draws} draws)")]
    NoInvertibleFound { attempts: usize, draws: usize },
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Sampling and retry policy shared by all engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackConfig {
    pub sample: SampleConfig,
    /// Fresh sampling attempts before giving up.
    pub retries: usize,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            sample: SampleConfig::default(),
            retries: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Timings {
    pub offline: Duration,
    pub online: Duration,
}

#[derive(Debug, Clone)]
pub struct AttackReport<F: Field> {
    pub key: FieldMatrix<F>,
    pub draws_used: usize,
    /// Named subspace dimensions met along the way.
    pub offline_dims: Vec<(String, usize)>,
    pub elapsed: Duration,
    pub timings: Timings,
}

fn check_square<F: Field>(mats: &[&FieldMatrix<F>], n: usize) -> Result<(), AttackError> {
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(AttackError::Malformed(format!(
                "expected {n}×{n}, found {}×{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

/// Retries `random_invertible_in` with fresh randomness.
fn invertible_with_retries<F: Field, R: Rng + ?Sized>(
    space: &Subspace<F>,
    cfg: &AttackConfig,
    rng: &mut R,
    draws: &mut usize,
) -> Result<FieldMatrix<F>, AttackError> {
    for _ in 0..cfg.retries.max(1) {
        match random_invertible_in(space, &cfg.sample, rng) {
            Ok(s) => {
                *draws += s.draws;
                return Ok(s.matrix);
            }
            Err(LinalgError::NoInvertibleFound { tries }) => *draws += tries,
            Err(e) => return Err(e.into()),
        }
    }
    Err(AttackError::NoInvertibleFound {
        attempts: cfg.retries.max(1),
        draws: *draws,
    })
}

/// Solutions `(x, y)` of `x·p = q·y` with `x ∈ xs`, `y ∈ ys`, as coordinate
/// vectors over `xs ⊕ ys`.
fn coupled_solutions<F: Field>(
    xs: &Subspace<F>,
    ys: &Subspace<F>,
    p: &FieldMatrix<F>,
    q: &FieldMatrix<F>,
) -> Vec<Vec<F::Elem>> {
    let ctx = p.ctx();
    let mut mats: Vec<FieldMatrix<F>> = xs.matrices().iter().map(|x| x.mul(p)).collect();
    let neg_one = ctx.neg(&ctx.one());
    mats.extend(ys.matrices().iter().map(|y| q.mul(y).scale(&neg_one)));
    linear_relations(ctx, &mats)
}

/// Samples random combinations of `sols` until the chosen component is
/// invertible; returns `(x, y)`.
#[allow(clippy::too_many_arguments)]
fn sample_coupled<F: Field, R: Rng + ?Sized>(
    xs: &Subspace<F>,
    ys: &Subspace<F>,
    sols: &[Vec<F::Elem>],
    need_x_invertible: bool,
    cfg: &AttackConfig,
    rng: &mut R,
    draws: &mut usize,
) -> Result<(FieldMatrix<F>, FieldMatrix<F>), AttackError> {
    let ctx = xs.ctx();
    let n = xs.shape().0;
    cfg.sample.validate(ctx, n)?;
    let d1 = xs.dim();
    for _ in 0..cfg.retries.max(1) {
        for _ in 0..cfg.sample.max_tries {
            *draws += 1;
            let w: Vec<F::Elem> = sols.iter().map(|_| cfg.sample.draw(ctx, rng)).collect();
            let mut coords = vec![ctx.zero(); sols.first().map_or(0, |s| s.len())];
            for (wi, s) in w.iter().zip(sols) {
                for (c, si) in coords.iter_mut().zip(s) {
                    *c = ctx.add(c, &ctx.mul(wi, si));
                }
            }
            let x = xs.combine(&coords[..d1]);
            let y = ys.combine(&coords[d1..]);
            let target = if need_x_invertible { &x } else { &y };
            if target.is_invertible() {
                return Ok((x, y));
            }
        }
    }
    Err(AttackError::NoInvertibleFound {
        attempts: cfg.retries.max(1),
        draws: *draws,
    })
}

/// Offline phase of the Commutator attack: a basis of `C(C(b_1, …, b_k))`.
pub fn commutator_offline<F: Field>(b_list: &[FieldMatrix<F>], n: usize) -> Subspace<F> {
    let ctx = b_list[0].ctx();
    double_centralizer_basis(ctx, b_list, n)
}

/// Online phase of the Commutator attack. `dc` must be the output of
/// [`commutator_offline`] on `public.b_list`; returns `x⁻¹y⁻¹xy`.
pub fn commutator_online<F: Field, R: Rng + ?Sized>(
    public: &CommutatorPublic<FieldMatrix<F>>,
    dc: &Subspace<F>,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<AttackReport<F>, AttackError> {
    let start = Instant::now();
    let k = public.a_list.len();
    if k == 0
        || public.b_list.len() != k
        || public.a_conj.len() != k
        || public.b_conj.len() != k
    {
        return Err(AttackError::Malformed("public lists must be nonempty and of equal length".into()));
    }
    let n = public.a_list[0].rows();
    let all: Vec<&FieldMatrix<F>> = public
        .a_list
        .iter()
        .chain(&public.b_list)
        .chain(&public.a_conj)
        .chain(&public.b_conj)
        .collect();
    check_square(&all, n)?;
    let ctx = public.a_list[0].ctx();
    // b_i x = x b_i^a is solved by x = a
    let x_pairs: Vec<_> = public
        .b_list
        .iter()
        .cloned()
        .zip(public.b_conj.iter().cloned())
        .collect();
    let xs = solve_conjugacy_system(ctx, n, &x_pairs, None);
    // a_i y = y a_i^b inside C(C(b_i)) is solved by y = b
    let y_pairs: Vec<_> = public
        .a_list
        .iter()
        .cloned()
        .zip(public.a_conj.iter().cloned())
        .collect();
    let ys = solve_conjugacy_system(ctx, n, &y_pairs, Some(dc));
    let mut draws = 0;
    let x = invertible_with_retries(&xs, cfg, rng, &mut draws)?;
    let y = invertible_with_retries(&ys, cfg, rng, &mut draws)?;
    let key = x.inv()?.mul(&y.inv()?).mul(&x).mul(&y);
    let online = start.elapsed();
    Ok(AttackReport {
        key,
        draws_used: draws,
        offline_dims: vec![
            ("double_centralizer".into(), dc.dim()),
            ("x_solutions".into(), xs.dim()),
            ("y_solutions".into(), ys.dim()),
        ],
        elapsed: online,
        timings: Timings {
            offline: Duration::ZERO,
            online,
        },
    })
}

/// Both phases of the Commutator attack.
pub fn commutator_attack<F: Field, R: Rng + ?Sized>(
    public: &CommutatorPublic<FieldMatrix<F>>,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<AttackReport<F>, AttackError> {
    let start = Instant::now();
    let n = public
        .b_list
        .first()
        .ok_or_else(|| AttackError::Malformed("empty b_list".into()))?
        .rows();
    let dc = commutator_offline(&public.b_list, n);
    let offline = start.elapsed();
    let mut rep = commutator_online(public, &dc, cfg, rng)?;
    rep.timings.offline = offline;
    rep.elapsed = start.elapsed();
    Ok(rep)
}

/// Centralizer attack: solves `x·g = u·y` with `x ∈ C(g_list)` and
/// `y ∈ C(C(h_list))`, samples until `y` is invertible, returns `x·v·y⁻¹`.
pub fn centralizer_attack<F: Field, R: Rng + ?Sized>(
    public: &CentralizerPublic<FieldMatrix<F>>,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<AttackReport<F>, AttackError> {
    let start = Instant::now();
    let n = public.g.rows();
    let mut all = vec![&public.g, &public.u, &public.v];
    all.extend(public.g_list.iter().chain(&public.h_list));
    check_square(&all, n)?;
    let ctx = public.g.ctx();
    let xs = centralizer_basis(ctx, &public.g_list, n);
    let ys = double_centralizer_basis(ctx, &public.h_list, n);
    let offline = start.elapsed();
    let t1 = Instant::now();
    let sols = coupled_solutions(&xs, &ys, &public.g, &public.u);
    let mut draws = 0;
    let (x, y) = sample_coupled(&xs, &ys, &sols, false, cfg, rng, &mut draws)?;
    let key = x.mul(&public.v).mul(&y.inv()?);
    Ok(AttackReport {
        key,
        draws_used: draws,
        offline_dims: vec![
            ("centralizer_g".into(), xs.dim()),
            ("double_centralizer_h".into(), ys.dim()),
            ("coupled_solutions".into(), sols.len()),
        ],
        elapsed: start.elapsed(),
        timings: Timings {
            offline,
            online: t1.elapsed(),
        },
    })
}

/// DH-conjugacy attack: finds invertible `ã ∈ C(B)` with `g·ã = ã·g_a` and
/// returns `ã⁻¹·g_b·ã = g^{ab}`.
pub fn dh_conjugacy_attack<F: Field, R: Rng + ?Sized>(
    public: &DhPublic<FieldMatrix<F>>,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<AttackReport<F>, AttackError> {
    let start = Instant::now();
    let n = public.g.rows();
    let mut all = vec![&public.g, &public.g_a, &public.g_b];
    all.extend(public.b_gens.iter());
    check_square(&all, n)?;
    let ctx = public.g.ctx();
    let cb = centralizer_basis(ctx, &public.b_gens, n);
    let offline = start.elapsed();
    let t1 = Instant::now();
    let xs = solve_conjugacy_system(ctx, n, &[(public.g.clone(), public.g_a.clone())], Some(&cb));
    let mut draws = 0;
    let a = invertible_with_retries(&xs, cfg, rng, &mut draws)?;
    let key = a.inv()?.mul(&public.g_b).mul(&a);
    Ok(AttackReport {
        key,
        draws_used: draws,
        offline_dims: vec![
            ("centralizer_b".into(), cb.dim()),
            ("conjugator_solutions".into(), xs.dim()),
        ],
        elapsed: start.elapsed(),
        timings: Timings {
            offline,
            online: t1.elapsed(),
        },
    })
}

/// Double Coset attack: solves `x·u = g·y` with `x ∈ C(B₁)`, `y ∈ C(B₂)`,
/// samples until `x` is invertible, returns `x⁻¹·v·y`.
pub fn double_coset_attack<F: Field, R: Rng + ?Sized>(
    public: &DoubleCosetPublic<FieldMatrix<F>>,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<AttackReport<F>, AttackError> {
    let start = Instant::now();
    let n = public.g.rows();
    let mut all = vec![&public.g, &public.u, &public.v];
    all.extend(public.b1_gens.iter().chain(&public.b2_gens));
    check_square(&all, n)?;
    let ctx = public.g.ctx();
    let xs = centralizer_basis(ctx, &public.b1_gens, n);
    let ys = centralizer_basis(ctx, &public.b2_gens, n);
    let offline = start.elapsed();
    let t1 = Instant::now();
    let sols = coupled_solutions(&xs, &ys, &public.u, &public.g);
    let mut draws = 0;
    let (x, y) = sample_coupled(&xs, &ys, &sols, true, cfg, rng, &mut draws)?;
    let key = x.inv()?.mul(&public.v).mul(&y);
    Ok(AttackReport {
        key,
        draws_used: draws,
        offline_dims: vec![
            ("centralizer_b1".into(), xs.dim()),
            ("centralizer_b2".into(), ys.dim()),
            ("coupled_solutions".into(), sols.len()),
        ],
        elapsed: start.elapsed(),
        timings: Timings {
            offline,
            online: t1.elapsed(),
        },
    })
}

/// Stickel's KEP as a Double Coset instance with `B₁ = ⟨a⟩`, `B₂ = ⟨b⟩`
/// (scalars lie in every centralizer).
pub fn stickel_attack<F: Field, R: Rng + ?Sized>(
    g: &FieldMatrix<F>,
    a: &FieldMatrix<F>,
    b: &FieldMatrix<F>,
    u: &FieldMatrix<F>,
    v: &FieldMatrix<F>,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<AttackReport<F>, AttackError> {
    double_coset_attack(
        &DoubleCosetPublic {
            g: g.clone(),
            u: u.clone(),
            v: v.clone(),
            a1_gens: vec![a.clone()],
            b1_gens: vec![a.clone()],
            a2_gens: vec![b.clone()],
            b2_gens: vec![b.clone()],
        },
        cfg,
        rng,
    )
}
