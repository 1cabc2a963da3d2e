//! Full attack chains on braid-group instances: infimum reduction, parameter
//! selection, reduction of the Lawrence–Krammer image to `GL_n(𝔽)`, the matrix
//! attack, and exact lifting of the key's image.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use thiserror::Error;

use crate::attacks::{
    centralizer_attack, commutator_offline, commutator_online, dh_conjugacy_attack,
    double_coset_attack, AttackConfig, AttackError, AttackReport,
};
use crate::braid::Braid;
use crate::ff::{make_binomial_ext_ctx, prime, ExtCtx, FieldError, PrimeCtx};
use crate::linalg::FieldMatrix;
use crate::lkrep::{lk_dim, lk_of_braid, LkError, LkMatrix, LkMod};
use crate::protocols::{
    CentralizerPublic, CommutatorPublic, DhPublic, DoubleCosetPublic, Protocol,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Lk(#[from] LkError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("malformed instance: {0}")]
    Malformed(String),
}

/// How large the prime must be relative to the interval radius `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MarginPolicy {
    /// `p > 2^{N²(M+1)+1}`: twice the scaled coefficient bound stated
    /// alongside the Cheon–Jun theorem.
    #[default]
    Standard,
    /// `p > 2^{N²M+2NM+1}`: twice the bound that follows from the theorem's
    /// numerator and denominator bounds taken separately.
    Rigorous,
}

impl MarginPolicy {
    pub fn prime_bits(self, strands: usize, bound: u64) -> u64 {
        let n = strands as u64;
        match self {
            MarginPolicy::Standard => n * n * (bound + 1) + 1,
            MarginPolicy::Rigorous => n * n * bound + 2 * n * bound + 1,
        }
    }
}

/// Protocol bounds and the field they induce.
#[derive(Debug, Clone)]
pub struct AttackParams {
    pub protocol: Protocol,
    pub strands: usize,
    pub k: usize,
    pub m: usize,
    pub ell: usize,
    /// Interval radius `M` of the (reduced) key.
    pub bound: u64,
    lk: LkMod,
}

impl AttackParams {
    pub fn ctx(&self) -> &ExtCtx {
        self.lk.ctx()
    }

    pub fn lk(&self) -> &LkMod {
        &self.lk
    }

    /// Matrix size `C(N, 2)`.
    pub fn n(&self) -> usize {
        lk_dim(self.strands)
    }

    pub fn p(&self) -> &BigUint {
        self.ctx().p()
    }

    pub fn f(&self) -> &[BigUint] {
        self.ctx().f()
    }

    pub fn d(&self) -> usize {
        self.ctx().d()
    }
}

/// Interval radius `M` of the reduced key for each braid protocol.
pub fn key_bound(protocol: Protocol, m: usize, ell: usize) -> Option<u64> {
    let (m, ell) = (m as u64, ell as u64);
    match protocol {
        Protocol::Commutator => Some(4 * m * (ell + 1)),
        Protocol::Centralizer => Some((m + 2) * (4 * ell + 6)),
        // (ab)⁻¹g̃(ab), a₁b₁g̃a₂b₂: 4m Artin letters around g̃ ∈ [0, ℓ+1]
        Protocol::BraidDh | Protocol::DoubleCoset => Some(4 * m + ell + 1),
        Protocol::Stickel => None,
    }
}

/// Chooses `M` from the protocol bounds, the least prime `p ≡ 1 (mod d)`
/// above the margin, and the binomial modulus of degree `d = 2M+1`.
pub fn select_params<R: Rng + ?Sized>(
    protocol: Protocol,
    strands: usize,
    k: usize,
    m: usize,
    ell: usize,
    rng: &mut R,
) -> Result<AttackParams, PipelineError> {
    let bound = key_bound(protocol, m, ell).ok_or_else(|| {
        PipelineError::Malformed(format!("{protocol} has no braid-group pipeline"))
    })?;
    params_with(protocol, strands, k, m, ell, bound, 2 * bound as usize + 1, MarginPolicy::Standard, rng)
}

/// [`select_params`] with explicit `M`, `d` and margin, for experiments
/// and deliberate misparameterization.
#[allow(clippy::too_many_arguments)]
pub fn params_with<R: Rng + ?Sized>(
    protocol: Protocol,
    strands: usize,
    k: usize,
    m: usize,
    ell: usize,
    bound: u64,
    d: usize,
    margin: MarginPolicy,
    rng: &mut R,
) -> Result<AttackParams, PipelineError> {
    if strands < 2 {
        return Err(PipelineError::Malformed("need at least two strands".into()));
    }
    let lower = BigUint::one() << margin.prime_bits(strands, bound);
    let p = prime::next_prime_congruent_one(&lower, d as u64, rng);
    let ctx = make_binomial_ext_ctx(PrimeCtx::new(p)?, d)?;
    Ok(AttackParams {
        protocol,
        strands,
        k,
        m,
        ell,
        bound,
        lk: LkMod::new(&ctx, strands),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineTimings {
    /// Reduction, LK images and the attack's offline phase.
    pub offline: Duration,
    pub online: Duration,
    pub lift: Duration,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// Lifted LK image of the reduced key.
    pub lk_key: LkMatrix,
    /// Key recovered by the matrix attack, over `𝔽`.
    pub field_key: FieldMatrix<ExtCtx>,
    /// Central braid `Δ^{2j}` with `key = correction · reduced key`.
    pub correction: Braid,
    pub draws: usize,
    pub offline_dims: Vec<(String, usize)>,
    pub timings: PipelineTimings,
}

impl PipelineOutput {
    /// `LK(correction) · lk_key`, the image of the protocol's key.
    pub fn corrected_key(&self) -> LkMatrix {
        if self.correction.is_identity() {
            self.lk_key.clone()
        } else {
            lk_of_braid(&self.correction).mul(&self.lk_key)
        }
    }
}

fn split_central(x: &Braid) -> (i64, Braid) {
    x.central_decompose()
}

fn reduce_all(list: &[Braid]) -> (Vec<i64>, Vec<Braid>) {
    list.iter().map(split_central).unzip()
}

/// Replaces every public generator by its remainder with infimum in
/// `{0, 1}` and strips the same central factors off the conjugate lists.
/// The key `a⁻¹b⁻¹ab` is unchanged.
pub fn reduce_commutator_instance(public: &CommutatorPublic<Braid>) -> CommutatorPublic<Braid> {
    let n = public.a_list.first().map_or(2, Braid::n);
    let strip = |js: &[i64], conj: &[Braid]| -> Vec<Braid> {
        js.iter()
            .zip(conj)
            .map(|(&j, c)| Braid::delta_power(n, -2 * j).mul(c))
            .collect()
    };
    let (ja, a_list) = reduce_all(&public.a_list);
    let (jb, b_list) = reduce_all(&public.b_list);
    CommutatorPublic {
        a_conj: strip(&ja, &public.a_conj),
        b_conj: strip(&jb, &public.b_conj),
        a_list,
        b_list,
    }
}

/// Reduces `g`, the `g_i` and the `h_i` to infimum `{0, 1}`, then writes
/// `c_g⁻¹u = c·ũ` and `c_g⁻¹v = d·ṽ`. Returns the reduced transcript and the
/// central correction `c_g·c·d`, which multiplies the key recovered from the
/// reduced transcript back to `a₁b₁ga₂b₂`.
pub fn reduce_centralizer_instance(
    public: &CentralizerPublic<Braid>,
) -> (CentralizerPublic<Braid>, Braid) {
    let n = public.g.n();
    let (jg, g) = split_central(&public.g);
    let shift = Braid::delta_power(n, -2 * jg);
    let (jc, u) = split_central(&shift.mul(&public.u));
    let (jd, v) = split_central(&shift.mul(&public.v));
    let (_, g_list) = reduce_all(&public.g_list);
    let (_, h_list) = reduce_all(&public.h_list);
    (
        CentralizerPublic {
            g,
            u,
            v,
            g_list,
            h_list,
        },
        Braid::delta_power(n, 2 * (jg + jc + jd)),
    )
}

/// Reduces `g = c·g̃` and divides `g^a`, `g^b` by `c`; the key is `c·g̃^{ab}`.
pub fn reduce_dh_instance(public: &DhPublic<Braid>) -> (DhPublic<Braid>, Braid) {
    let n = public.g.n();
    let (j, g) = split_central(&public.g);
    let shift = Braid::delta_power(n, -2 * j);
    (
        DhPublic {
            g,
            g_a: shift.mul(&public.g_a),
            g_b: shift.mul(&public.g_b),
            a_gens: public.a_gens.clone(),
            b_gens: public.b_gens.clone(),
        },
        Braid::delta_power(n, 2 * j),
    )
}

/// Reduces `g = c·g̃` and divides `u`, `v` by `c`; the key is
/// `c·a₁b₁g̃a₂b₂`.
pub fn reduce_double_coset_instance(
    public: &DoubleCosetPublic<Braid>,
) -> (DoubleCosetPublic<Braid>, Braid) {
    let n = public.g.n();
    let (j, g) = split_central(&public.g);
    let shift = Braid::delta_power(n, -2 * j);
    (
        DoubleCosetPublic {
            g,
            u: shift.mul(&public.u),
            v: shift.mul(&public.v),
            ..public.clone()
        },
        Braid::delta_power(n, 2 * j),
    )
}

fn check_strands(params: &AttackParams, elems: &[&Braid]) -> Result<(), PipelineError> {
    for b in elems {
        if b.n() != params.strands {
            return Err(PipelineError::Malformed(format!(
                "braid on {} strands, parameters for {}",
                b.n(),
                params.strands
            )));
        }
    }
    Ok(())
}

fn images(params: &AttackParams, list: &[Braid]) -> Vec<FieldMatrix<ExtCtx>> {
    list.iter().map(|b| params.lk.image(b)).collect()
}

fn finish(
    params: &AttackParams,
    rep: AttackReport<ExtCtx>,
    correction: Braid,
    prep: Duration,
) -> Result<PipelineOutput, PipelineError> {
    let t = Instant::now();
    let lk_key = params.lk.lift(&rep.key, params.bound)?;
    Ok(PipelineOutput {
        lk_key,
        field_key: rep.key,
        correction,
        draws: rep.draws_used,
        offline_dims: rep.offline_dims,
        timings: PipelineTimings {
            offline: prep + rep.timings.offline,
            online: rep.timings.online,
            lift: t.elapsed(),
        },
    })
}

/// Commutator KEP: reduction, LK images, matrix attack, lift. `lk_key` is
/// `LK(a⁻¹b⁻¹ab)` exactly when the instance meets the bounds in `params`.
pub fn run_full_commutator_attack<R: Rng + ?Sized>(
    public: &CommutatorPublic<Braid>,
    params: &AttackParams,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<PipelineOutput, PipelineError> {
    let all: Vec<&Braid> = public
        .a_list
        .iter()
        .chain(&public.b_list)
        .chain(&public.a_conj)
        .chain(&public.b_conj)
        .collect();
    if all.is_empty() {
        return Err(PipelineError::Malformed("empty transcript".into()));
    }
    check_strands(params, &all)?;
    let t = Instant::now();
    let red = reduce_commutator_instance(public);
    let mx = CommutatorPublic {
        a_list: images(params, &red.a_list),
        b_list: images(params, &red.b_list),
        a_conj: images(params, &red.a_conj),
        b_conj: images(params, &red.b_conj),
    };
    let dc = commutator_offline(&mx.b_list, params.n());
    let prep = t.elapsed();
    let rep = commutator_online(&mx, &dc, cfg, rng)?;
    let n = params.strands;
    finish(params, rep, Braid::identity(n), prep)
}

/// Centralizer KEP: `corrected_key()` of the output is `LK(a₁b₁ga₂b₂)`.
pub fn run_full_centralizer_attack<R: Rng + ?Sized>(
    public: &CentralizerPublic<Braid>,
    params: &AttackParams,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<PipelineOutput, PipelineError> {
    let mut all = vec![&public.g, &public.u, &public.v];
    all.extend(public.g_list.iter().chain(&public.h_list));
    check_strands(params, &all)?;
    let t = Instant::now();
    let (red, correction) = reduce_centralizer_instance(public);
    let mx = CentralizerPublic {
        g: params.lk.image(&red.g),
        u: params.lk.image(&red.u),
        v: params.lk.image(&red.v),
        g_list: images(params, &red.g_list),
        h_list: images(params, &red.h_list),
    };
    let prep = t.elapsed();
    let rep = centralizer_attack(&mx, cfg, rng)?;
    finish(params, rep, correction, prep)
}

/// Braid Diffie–Hellman KEP: `corrected_key()` is `LK(g^{ab})`.
pub fn run_full_dh_attack<R: Rng + ?Sized>(
    public: &DhPublic<Braid>,
    params: &AttackParams,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<PipelineOutput, PipelineError> {
    let mut all = vec![&public.g, &public.g_a, &public.g_b];
    all.extend(public.a_gens.iter().chain(&public.b_gens));
    check_strands(params, &all)?;
    let t = Instant::now();
    let (red, correction) = reduce_dh_instance(public);
    let mx = DhPublic {
        g: params.lk.image(&red.g),
        g_a: params.lk.image(&red.g_a),
        g_b: params.lk.image(&red.g_b),
        a_gens: images(params, &red.a_gens),
        b_gens: images(params, &red.b_gens),
    };
    let prep = t.elapsed();
    let rep = dh_conjugacy_attack(&mx, cfg, rng)?;
    finish(params, rep, correction, prep)
}

/// Double Coset KEP: `corrected_key()` is `LK(a₁b₁ga₂b₂)`.
pub fn run_full_double_coset_attack<R: Rng + ?Sized>(
    public: &DoubleCosetPublic<Braid>,
    params: &AttackParams,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<PipelineOutput, PipelineError> {
    let mut all = vec![&public.g, &public.u, &public.v];
    all.extend(
        public
            .a1_gens
            .iter()
            .chain(&public.b1_gens)
            .chain(&public.a2_gens)
            .chain(&public.b2_gens),
    );
    check_strands(params, &all)?;
    let t = Instant::now();
    let (red, correction) = reduce_double_coset_instance(public);
    let mx = DoubleCosetPublic {
        g: params.lk.image(&red.g),
        u: params.lk.image(&red.u),
        v: params.lk.image(&red.v),
        a1_gens: images(params, &red.a1_gens),
        b1_gens: images(params, &red.b1_gens),
        a2_gens: images(params, &red.a2_gens),
        b2_gens: images(params, &red.b2_gens),
    };
    let prep = t.elapsed();
    let rep = double_coset_attack(&mx, cfg, rng)?;
    finish(params, rep, correction, prep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Perm;

    #[test]
    fn bounds_match_protocol_formulas() {
        assert_eq!(key_bound(Protocol::Commutator, 2, 2), Some(24));
        assert_eq!(key_bound(Protocol::Centralizer, 2, 2), Some(56));
        assert_eq!(key_bound(Protocol::Centralizer, 1, 2), Some(42));
        assert_eq!(key_bound(Protocol::Stickel, 1, 1), None);
        assert_eq!(MarginPolicy::Standard.prime_bits(4, 24), 401);
    }

    #[test]
    fn reduction_examples() {
        let n = 4;
        let p = Perm::simple(n, 1);
        let a = Braid::from_normal_form(n, 3, vec![p.clone()]).unwrap();
        let (j, t) = a.central_decompose();
        assert_eq!(j, 1);
        assert_eq!(t, Braid::from_normal_form(n, 1, vec![p.clone()]).unwrap());

        let g = Braid::from_normal_form(n, 0, vec![p.clone()]).unwrap();
        let pubc = CentralizerPublic {
            g: g.clone(),
            u: Braid::from_normal_form(n, 5, vec![p.clone()]).unwrap(),
            v: g.clone(),
            g_list: vec![g.clone()],
            h_list: vec![g.clone()],
        };
        let (red, corr) = reduce_centralizer_instance(&pubc);
        assert_eq!(corr, Braid::delta_power(n, 4));
        assert_eq!(red.u.inf(), 1);

        let fixed = CommutatorPublic {
            a_list: vec![g.clone()],
            b_list: vec![g.clone()],
            a_conj: vec![g.clone()],
            b_conj: vec![g],
        };
        assert_eq!(reduce_commutator_instance(&fixed), fixed);
    }
}
