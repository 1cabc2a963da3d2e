//! Invariant suites of every module at pinned sizes, for the `selfcheck` verb.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attacks::{
    centralizer_attack, commutator_attack, dh_conjugacy_attack, double_coset_attack, AttackConfig,
};
use crate::braid::Braid;
use crate::ff::{make_binomial_ext_ctx, Field, Fp64, PrimeCtx};
use crate::linalg::{centralizer_basis, double_centralizer_basis, FieldMatrix};
use crate::lkrep::{lk_bounds_check, lk_generator, lk_of_braid};
use crate::pipeline::{run_full_commutator_attack, select_params};
use crate::protocols::{
    simulate_braid_dh, simulate_centralizer, simulate_commutator, simulate_double_coset,
    simulate_stickel, verify_instance, BraidGroup, GenParams, MatrixGroup, Protocol, Public,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn field_axioms<F: Field>(ctx: &F, rng: &mut ChaCha8Rng, trials: usize) -> Result<(), String> {
    for _ in 0..trials {
        let (a, b, c) = (ctx.random(rng), ctx.random(rng), ctx.random(rng));
        let lhs = ctx.mul(&a, &ctx.add(&b, &c));
        let rhs = ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c));
        if lhs != rhs {
            return Err("distributivity".into());
        }
        if ctx.mul(&ctx.mul(&a, &b), &c) != ctx.mul(&a, &ctx.mul(&b, &c)) {
            return Err("associativity".into());
        }
        if !ctx.is_zero(&a) && !ctx.is_one(&ctx.mul(&a, &ctx.inv(&a).unwrap())) {
            return Err("inverse".into());
        }
    }
    Ok(())
}

fn check_ff(rng: &mut ChaCha8Rng) -> Result<(), String> {
    field_axioms(&Fp64::new(Fp64::MERSENNE61).unwrap(), rng, 1000)?;
    let ext = make_binomial_ext_ctx(PrimeCtx::new(BigUint::from(1_000_003u32)).unwrap(), 3)
        .map_err(|e| e.to_string())?;
    if !ext.modulus_is_irreducible() {
        return Err("binomial modulus not irreducible".into());
    }
    field_axioms(&ext, rng, 300)
}

fn check_linalg(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = Fp64::new(101).unwrap();
    for _ in 0..20 {
        let n = 4;
        let a = FieldMatrix::random(&ctx, n, n, rng);
        let b = FieldMatrix::random(&ctx, n, n, rng);
        let det = |m: &FieldMatrix<Fp64>| m.det().unwrap();
        if det(&a.mul(&b)) != ctx.mul(&det(&a), &det(&b)) {
            return Err("det is not multiplicative".into());
        }
        let c = centralizer_basis(&ctx, std::slice::from_ref(&a), n);
        if !c.matrices().iter().all(|x| x.commutes_with(&a)) {
            return Err("centralizer element does not commute".into());
        }
        if !double_centralizer_basis(&ctx, std::slice::from_ref(&a), n).contains(&a) {
            return Err("S ⊄ C(C(S))".into());
        }
    }
    Ok(())
}

fn check_braid(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 3..=5 {
        let d2 = Braid::delta_power(n, 2);
        for _ in 0..50 {
            let x = Braid::random(n, rng.gen_range(-3..=3), 3, rng);
            let y = Braid::random(n, rng.gen_range(-3..=3), 3, rng);
            if !x.mul(&x.inv()).is_identity() {
                return Err("x·x⁻¹ ≠ 1".into());
            }
            if d2.mul(&x) != x.mul(&d2) {
                return Err("Δ² not central".into());
            }
            if Braid::from_word(n, &x.mul(&y).to_word()).unwrap() != x.mul(&y) {
                return Err("word round trip".into());
            }
        }
        for i in 1..n - 1 {
            let l = Braid::from_word(n, &[(i, 1), (i + 1, 1), (i, 1)]).unwrap();
            let r = Braid::from_word(n, &[(i + 1, 1), (i, 1), (i + 1, 1)]).unwrap();
            if l != r {
                return Err("braid relation".into());
            }
        }
    }
    Ok(())
}

fn check_lk(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 3..=5 {
        for i in 1..n - 1 {
            let (a, b) = (lk_generator(n, i, 1).unwrap(), lk_generator(n, i + 1, 1).unwrap());
            if a.mul(&b).mul(&a) != b.mul(&a).mul(&b) {
                return Err(format!("braid relation fails in LK for N = {n}"));
            }
        }
        for _ in 0..10 {
            let x = Braid::random(n, rng.gen_range(-2..=2), 3, rng);
            if !lk_of_braid(&x).mul(&lk_of_braid(&x.inv())).is_identity() {
                return Err("LK(x)·LK(x⁻¹) ≠ I".into());
            }
            if !lk_bounds_check(&lk_of_braid(&x), x.interval().radius(), n).pass {
                return Err("bounds violated".into());
            }
        }
    }
    Ok(())
}

fn check_protocols_and_attacks(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = MatrixGroup::new(Fp64::new(Fp64::MERSENNE61).unwrap(), 6);
    let bg = BraidGroup::new(4);
    let gp = GenParams::default();
    let cfg = AttackConfig::default();
    let same = |k: &FieldMatrix<Fp64>, s: Option<&FieldMatrix<Fp64>>| {
        if Some(k) == s {
            Ok(())
        } else {
            Err("recovered key differs".to_string())
        }
    };
    for _ in 0..3 {
        verify_instance(&bg, &simulate_centralizer(&bg, 2, 2, &gp, rng))?;
        verify_instance(&bg, &simulate_double_coset(&bg, 2, 2, &gp, rng))?;
        let i = simulate_commutator(&g, 4, 16, &gp, rng);
        let Public::Commutator(p) = &i.public else { unreachable!() };
        same(&commutator_attack(p, &cfg, rng).map_err(|e| e.to_string())?.key, i.shared_key.as_ref())?;
        let i = simulate_centralizer(&g, 4, 16, &gp, rng);
        let Public::Centralizer(p) = &i.public else { unreachable!() };
        same(&centralizer_attack(p, &cfg, rng).map_err(|e| e.to_string())?.key, i.shared_key.as_ref())?;
        let i = simulate_braid_dh(&g, 4, 16, &gp, rng);
        let Public::Dh(p) = &i.public else { unreachable!() };
        same(&dh_conjugacy_attack(p, &cfg, rng).map_err(|e| e.to_string())?.key, i.shared_key.as_ref())?;
        for i in [simulate_double_coset(&g, 4, 16, &gp, rng), simulate_stickel(&g, 16, rng)] {
            let Public::DoubleCoset(p) = &i.public else { unreachable!() };
            same(&double_coset_attack(p, &cfg, rng).map_err(|e| e.to_string())?.key, i.shared_key.as_ref())?;
        }
    }
    Ok(())
}

fn check_pipeline(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let bg = BraidGroup::new(4);
    let params = select_params(Protocol::Commutator, 4, 2, 1, 1, rng).map_err(|e| e.to_string())?;
    for _ in 0..2 {
        let i = simulate_commutator(&bg, 2, 1, &GenParams { ell: 1, inf_range: (-3, 3) }, rng);
        let Public::Commutator(p) = &i.public else { unreachable!() };
        let out = run_full_commutator_attack(p, &params, &AttackConfig::default(), rng)
            .map_err(|e| e.to_string())?;
        if out.lk_key != lk_of_braid(i.shared_key.as_ref().unwrap()) {
            return Err("lifted key differs from LK(key)".into());
        }
    }
    Ok(())
}

/// Runs every suite with a fixed seed.
pub fn run_all() -> Vec<CheckResult> {
    type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;
    let checks: [(&'static str, Check); 6] = [
        ("ff", check_ff),
        ("linalg", check_linalg),
        ("braid", check_braid),
        ("lkrep", check_lk),
        ("protocols+attacks", check_protocols_and_attacks),
        ("pipeline", check_pipeline),
    ];
    checks
        .iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + i as u64);
            let r = f(&mut rng);
            CheckResult {
                name,
                pass: r.is_ok(),
                detail: r.err().unwrap_or_default(),
            }
        })
        .collect()
}
