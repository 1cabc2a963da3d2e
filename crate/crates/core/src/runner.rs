//! Simulation and attack entry points over JSON documents, shared by the
//! command-line tool and the tests.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::attacks::{
    centralizer_attack, commutator_attack, dh_conjugacy_attack, double_coset_attack,
    AttackConfig, AttackReport,
};
use crate::braid::Braid;
use crate::ff::Fp64;
use crate::io::{self, braid_to_json, hex_uint, lk_to_json, matrix_to_json, AnyInstance, GroupCodec};
use crate::linalg::SampleConfig;
use crate::lkrep::lk_of_braid;
use crate::pipeline::{
    run_full_centralizer_attack, run_full_commutator_attack, run_full_dh_attack,
    run_full_double_coset_attack, select_params, PipelineError, PipelineOutput,
};
use crate::protocols::{
    simulate_braid_dh, simulate_centralizer, simulate_commutator, simulate_double_coset,
    simulate_stickel, BraidGroup, GenParams, Group, MatrixGroup, Protocol, Public,
    SimulatedInstance,
};

#[derive(Debug, Error)]
pub enum RunError {
    /// Bad flags or an unusable combination of parameters.
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Malformed(#[from] io::IoError),
    #[error("attack failed: {0}")]
    AttackFailed(String),
}

impl RunError {
    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Invalid(_) => "invalid_configuration",
            RunError::Malformed(_) => "malformed_input",
            RunError::AttackFailed(_) => "attack_failed",
        }
    }
}

/// `braid:N` or `matrix:n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupArg {
    Braid(usize),
    Matrix(usize),
}

impl FromStr for GroupArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, size) = s
            .split_once(':')
            .ok_or_else(|| format!("expected braid:N or matrix:n, found {s:?}"))?;
        let size: usize = size.parse().map_err(|_| format!("bad size in {s:?}"))?;
        match kind {
            "braid" => Ok(GroupArg::Braid(size)),
            "matrix" => Ok(GroupArg::Matrix(size)),
            _ => Err(format!("unknown group kind {kind:?}")),
        }
    }
}

impl fmt::Display for GroupArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupArg::Braid(n) => write!(f, "braid:{n}"),
            GroupArg::Matrix(n) => write!(f, "matrix:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulateConfig {
    pub protocol: Protocol,
    pub group: GroupArg,
    pub k: usize,
    pub m: usize,
    pub ell: usize,
    pub seed: u64,
    /// Prime for matrix groups.
    pub prime: u64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            protocol: Protocol::Commutator,
            group: GroupArg::Braid(4),
            k: 2,
            m: 2,
            ell: 2,
            seed: 0,
            prime: Fp64::MERSENNE61,
        }
    }
}

fn sim<G: Group>(
    group: &G,
    cfg: &SimulateConfig,
    rng: &mut ChaCha8Rng,
) -> SimulatedInstance<G::Elem> {
    let gp = GenParams {
        ell: cfg.ell,
        ..GenParams::default()
    };
    match cfg.protocol {
        Protocol::Commutator => simulate_commutator(group, cfg.k, cfg.m, &gp, rng),
        Protocol::Centralizer => simulate_centralizer(group, cfg.k, cfg.m, &gp, rng),
        Protocol::BraidDh => simulate_braid_dh(group, cfg.k, cfg.m, &gp, rng),
        Protocol::DoubleCoset => simulate_double_coset(group, cfg.k, cfg.m, &gp, rng),
        Protocol::Stickel => unreachable!("validated by the caller"),
    }
}

/// Simulates one honest instance, deterministically in `cfg.seed`.
pub fn simulate(cfg: &SimulateConfig) -> Result<AnyInstance, RunError> {
    let invalid = |m: &str| Err(RunError::Invalid(m.into()));
    if cfg.k == 0 {
        return invalid("k must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut inst = match cfg.group {
        GroupArg::Braid(n) => {
            if !(2..=255).contains(&n) {
                return invalid("braid groups need 2 ≤ N ≤ 255");
            }
            if cfg.protocol == Protocol::Stickel {
                return invalid("stickel is defined over matrix groups only");
            }
            if cfg.protocol != Protocol::Commutator && n < 4 {
                return invalid("this protocol needs N ≥ 4 for commuting strand blocks");
            }
            let g = BraidGroup::new(n);
            let i = sim(&g, cfg, &mut rng);
            AnyInstance::Braid(g, i)
        }
        GroupArg::Matrix(n) => {
            if n == 0 || (cfg.protocol != Protocol::Commutator && n < 2) {
                return invalid("matrix size too small for this protocol");
            }
            let ctx = Fp64::new(cfg.prime).map_err(|e| RunError::Invalid(e.to_string()))?;
            let g = MatrixGroup::new(ctx, n);
            let i = if cfg.protocol == Protocol::Stickel {
                simulate_stickel(&g, cfg.m, &mut rng)
            } else {
                sim(&g, cfg, &mut rng)
            };
            AnyInstance::Matrix(g, i)
        }
    };
    match &mut inst {
        AnyInstance::Braid(_, i) => i.params.seed = Some(cfg.seed),
        AnyInstance::Matrix(_, i) => i.params.seed = Some(cfg.seed),
    }
    Ok(inst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackOptions {
    pub max_draws: usize,
    pub seed: u64,
}

impl Default for AttackOptions {
    fn default() -> Self {
        AttackOptions {
            max_draws: SampleConfig::default().max_tries,
            seed: 0,
        }
    }
}

/// An attack report: a deterministic body plus timings kept apart from it.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: Value,
    pub timings_ms: Value,
    pub verified: Option<bool>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut obj = self.body.as_object().cloned().unwrap_or_default();
        obj.insert("timings_ms".into(), self.timings_ms.clone());
        Value::Object(obj)
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn dims_json(dims: &[(String, usize)]) -> Value {
    Value::Object(dims.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect::<Map<_, _>>())
}

fn failed(e: impl fmt::Display) -> RunError {
    RunError::AttackFailed(e.to_string())
}

fn matrix_attack(
    inst: &SimulatedInstance<crate::linalg::FieldMatrix<Fp64>>,
    cfg: &AttackConfig,
    rng: &mut ChaCha8Rng,
) -> Result<AttackReport<Fp64>, RunError> {
    let rep = match &inst.public {
        Public::Commutator(p) => commutator_attack(p, cfg, rng),
        Public::Centralizer(p) => centralizer_attack(p, cfg, rng),
        Public::Dh(p) => dh_conjugacy_attack(p, cfg, rng),
        Public::DoubleCoset(p) => double_coset_attack(p, cfg, rng),
    };
    rep.map_err(failed)
}

fn braid_attack(
    g: &BraidGroup,
    inst: &SimulatedInstance<Braid>,
    cfg: &AttackConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(PipelineOutput, Value), RunError> {
    let p = inst.params;
    let params = select_params(inst.protocol, g.n, p.k, p.m, p.ell, rng).map_err(|e| match e {
        PipelineError::Malformed(m) => RunError::Invalid(m),
        other => failed(other),
    })?;
    let out = match &inst.public {
        Public::Commutator(x) => run_full_commutator_attack(x, &params, cfg, rng),
        Public::Centralizer(x) => run_full_centralizer_attack(x, &params, cfg, rng),
        Public::Dh(x) => run_full_dh_attack(x, &params, cfg, rng),
        Public::DoubleCoset(x) => run_full_double_coset_attack(x, &params, cfg, rng),
    }
    .map_err(failed)?;
    let pj = json!({
        "N": g.n, "k": p.k, "m": p.m, "ell": p.ell, "M": params.bound,
        "p": hex_uint(params.p()),
        "f": params.f().iter().map(hex_uint).collect::<Vec<_>>(),
    });
    Ok((out, pj))
}

/// Runs the engine matching the instance's protocol and group. Verification
/// happens when the instance carries its shared key.
pub fn attack(inst: &AnyInstance, opts: &AttackOptions) -> Result<Report, RunError> {
    if opts.max_draws == 0 {
        return Err(RunError::Invalid("max-draws must be positive".into()));
    }
    let cfg = AttackConfig {
        sample: SampleConfig {
            max_tries: opts.max_draws,
            sample_set_size: None,
        },
        ..AttackConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut body = Map::new();
    body.insert("protocol".into(), Value::from(inst.protocol().name()));
    let config = json!({"max_draws": opts.max_draws, "retries": cfg.retries, "seed": opts.seed});
    let (timings, verified) = match inst {
        AnyInstance::Matrix(g, i) => {
            let rep = matrix_attack(i, &cfg, &mut rng)?;
            body.insert("group".into(), g.group_to_json());
            let p = i.params;
            body.insert(
                "params".into(),
                json!({"n": g.n, "k": p.k, "m": p.m, "p": hex_uint(&num_bigint::BigUint::from(g.ctx.modulus()))}),
            );
            body.insert("key_field".into(), matrix_to_json(&rep.key));
            body.insert("draws".into(), Value::from(rep.draws_used));
            body.insert("dims".into(), dims_json(&rep.offline_dims));
            let verified = i.shared_key.as_ref().map(|k| *k == rep.key);
            (
                json!({"offline": ms(rep.timings.offline), "online": ms(rep.timings.online), "lift": 0.0}),
                verified,
            )
        }
        AnyInstance::Braid(g, i) => {
            let (out, pj) = braid_attack(g, i, &cfg, &mut rng)?;
            let key = out.corrected_key();
            body.insert("group".into(), g.group_to_json());
            body.insert("params".into(), pj);
            body.insert("key_lk".into(), lk_to_json(&key));
            body.insert("key_lk_reduced".into(), lk_to_json(&out.lk_key));
            body.insert("correction".into(), braid_to_json(&out.correction));
            body.insert("key_field".into(), matrix_to_json(&out.field_key));
            body.insert("draws".into(), Value::from(out.draws));
            body.insert("dims".into(), dims_json(&out.offline_dims));
            let verified = i.shared_key.as_ref().map(|k| lk_of_braid(k) == key);
            (
                json!({
                    "offline": ms(out.timings.offline),
                    "online": ms(out.timings.online),
                    "lift": ms(out.timings.lift),
                }),
                verified,
            )
        }
    };
    body.insert("verified".into(), verified.map_or(Value::Null, Value::from));
    body.insert("config".into(), config);
    Ok(Report {
        body: Value::Object(body),
        timings_ms: timings,
        verified,
    })
}
