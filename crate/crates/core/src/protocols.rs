//! Honest-party simulators for the five key-exchange protocols, over braid
//! groups and over matrix groups.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::braid::{eval_word, random_reduced_word, Braid, Word};
use crate::ff::Field;
use crate::linalg::FieldMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    Commutator,
    Centralizer,
    BraidDh,
    DoubleCoset,
    Stickel,
}

impl Protocol {
    pub const ALL: [Protocol; 5] = [
        Protocol::Commutator,
        Protocol::Centralizer,
        Protocol::BraidDh,
        Protocol::DoubleCoset,
        Protocol::Stickel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Commutator => "commutator",
            Protocol::Centralizer => "centralizer",
            Protocol::BraidDh => "braid-dh",
            Protocol::DoubleCoset => "double-coset",
            Protocol::Stickel => "stickel",
        }
    }

    pub fn from_name(s: &str) -> Option<Protocol> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Shape of public braid elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Canonical length of public elements.
    pub ell: usize,
    /// Inclusive range for the infimum of public elements.
    pub inf_range: (i64, i64),
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            ell: 2,
            inf_range: (-2, 2),
        }
    }
}

/// A platform group with the sampling primitives the simulators need.
pub trait Group {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// `x⁻¹·a·x`.
    fn conj(&self, a: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(&self.inv(x), a), x)
    }

    fn eval(&self, word: &[(usize, i8)], elems: &[Self::Elem]) -> Self::Elem {
        eval_word(word, elems, self.identity(), |a, b| self.mul(a, b), |a| self.inv(a))
    }

    fn random_public<R: Rng + ?Sized>(&self, gp: &GenParams, rng: &mut R) -> Self::Elem;

    /// Two generator lists that commute elementwise with each other.
    fn commuting_generators<R: Rng + ?Sized>(
        &self,
        k: usize,
        rng: &mut R,
    ) -> (Vec<Self::Elem>, Vec<Self::Elem>);

    /// A secret together with `k` public elements of its centralizer. The
    /// secret lives in the left block when `left`, else the right block;
    /// publics for opposite sides commute with each other's secrets.
    fn centralized<R: Rng + ?Sized>(
        &self,
        k: usize,
        gp: &GenParams,
        left: bool,
        rng: &mut R,
    ) -> (Self::Elem, Vec<Self::Elem>);
}

/// `B_N` with strand blocks `{1, …, ⌊N/2⌋}` and `{⌊N/2⌋+1, …, N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidGroup {
    pub n: usize,
}

impl BraidGroup {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "braid groups need at least two strands");
        BraidGroup { n }
    }

    fn half(&self) -> usize {
        self.n / 2
    }

    /// Artin generators of the left block.
    pub fn left_generators(&self) -> Vec<usize> {
        (1..self.half()).collect()
    }

    /// Artin generators of the right block.
    pub fn right_generators(&self) -> Vec<usize> {
        (self.half() + 1..self.n).collect()
    }

    fn require_blocks(&self) {
        assert!(self.n >= 4, "block constructions need N ≥ 4");
    }
}

impl Group for BraidGroup {
    type Elem = Braid;

    fn identity(&self) -> Braid {
        Braid::identity(self.n)
    }

    fn mul(&self, a: &Braid, b: &Braid) -> Braid {
        a.mul(b)
    }

    fn inv(&self, a: &Braid) -> Braid {
        a.inv()
    }

    fn random_public<R: Rng + ?Sized>(&self, gp: &GenParams, rng: &mut R) -> Braid {
        let inf = rng.gen_range(gp.inf_range.0..=gp.inf_range.1);
        Braid::random(self.n, inf, gp.ell, rng)
    }

    fn commuting_generators<R: Rng + ?Sized>(&self, _k: usize, _rng: &mut R) -> (Vec<Braid>, Vec<Braid>) {
        self.require_blocks();
        let gens = |js: Vec<usize>| -> Vec<Braid> {
            js.into_iter()
                .map(|j| Braid::generator(self.n, j, 1).unwrap())
                .collect()
        };
        (gens(self.left_generators()), gens(self.right_generators()))
    }

    fn centralized<R: Rng + ?Sized>(
        &self,
        k: usize,
        gp: &GenParams,
        left: bool,
        rng: &mut R,
    ) -> (Braid, Vec<Braid>) {
        self.require_blocks();
        let (own, other) = if left {
            (self.left_generators(), self.right_generators())
        } else {
            (self.right_generators(), self.left_generators())
        };
        let secret = Braid::random_in_generators(self.n, &own, gp.ell, rng);
        let publics = (0..k)
            .map(|_| {
                let body = if rng.gen_ratio(1, 3) {
                    if rng.gen() {
                        secret.clone()
                    } else {
                        secret.inv()
                    }
                } else {
                    Braid::random_in_generators(self.n, &other, gp.ell, rng)
                };
                Braid::delta_power(self.n, 2 * rng.gen_range(-1..=1)).mul(&body)
            })
            .collect();
        (secret, publics)
    }
}

/// `GL_n(𝔽)`, with block-diagonal constructions on sizes `⌊n/2⌋ + ⌈n/2⌉`.
#[derive(Debug, Clone)]
pub struct MatrixGroup<F: Field> {
    pub ctx: F,
    pub n: usize,
}

impl<F: Field> MatrixGroup<F> {
    pub fn new(ctx: F, n: usize) -> Self {
        assert!(n >= 1);
        MatrixGroup { ctx, n }
    }

    fn blocks(&self) -> (usize, usize) {
        assert!(self.n >= 2, "block constructions need n ≥ 2");
        (self.n / 2, self.n - self.n / 2)
    }

    fn nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> F::Elem {
        loop {
            let s = self.ctx.random(rng);
            if !self.ctx.is_zero(&s) {
                return s;
            }
        }
    }
}

impl<F: Field> Group for MatrixGroup<F> {
    type Elem = FieldMatrix<F>;

    fn identity(&self) -> FieldMatrix<F> {
        FieldMatrix::identity(&self.ctx, self.n)
    }

    fn mul(&self, a: &FieldMatrix<F>, b: &FieldMatrix<F>) -> FieldMatrix<F> {
        a.mul(b)
    }

    fn inv(&self, a: &FieldMatrix<F>) -> FieldMatrix<F> {
        a.inv().expect("group elements are invertible")
    }

    fn random_public<R: Rng + ?Sized>(&self, _gp: &GenParams, rng: &mut R) -> FieldMatrix<F> {
        FieldMatrix::random_invertible(&self.ctx, self.n, rng)
    }

    fn commuting_generators<R: Rng + ?Sized>(
        &self,
        k: usize,
        rng: &mut R,
    ) -> (Vec<FieldMatrix<F>>, Vec<FieldMatrix<F>>) {
        let (n1, n2) = self.blocks();
        let (i1, i2) = (
            FieldMatrix::identity(&self.ctx, n1),
            FieldMatrix::identity(&self.ctx, n2),
        );
        let left = (0..k)
            .map(|_| FieldMatrix::block_diag(&FieldMatrix::random_invertible(&self.ctx, n1, rng), &i2))
            .collect();
        let right = (0..k)
            .map(|_| FieldMatrix::block_diag(&i1, &FieldMatrix::random_invertible(&self.ctx, n2, rng)))
            .collect();
        (left, right)
    }

    fn centralized<R: Rng + ?Sized>(
        &self,
        k: usize,
        _gp: &GenParams,
        left: bool,
        rng: &mut R,
    ) -> (FieldMatrix<F>, Vec<FieldMatrix<F>>) {
        let (n1, n2) = self.blocks();
        let (own, other) = if left { (n1, n2) } else { (n2, n1) };
        let x = FieldMatrix::random_invertible(&self.ctx, own, rng);
        let place = |s: &FieldMatrix<F>, o: &FieldMatrix<F>| {
            if left {
                FieldMatrix::block_diag(s, o)
            } else {
                FieldMatrix::block_diag(o, s)
            }
        };
        let secret = place(&x, &FieldMatrix::identity(&self.ctx, other));
        let publics = (0..k)
            .map(|_| {
                let s = x.pow(rng.gen_range(0..=2)).unwrap().scale(&self.nonzero(rng));
                place(&s, &FieldMatrix::random_invertible(&self.ctx, other, rng))
            })
            .collect();
        (secret, publics)
    }
}

/// Public data of the Commutator KEP.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorPublic<E> {
    pub a_list: Vec<E>,
    pub b_list: Vec<E>,
    /// `a_i^b = b⁻¹a_ib`.
    pub a_conj: Vec<E>,
    /// `b_i^a = a⁻¹b_ia`.
    pub b_conj: Vec<E>,
}

/// Public data of the Centralizer KEP: `u = a₁ga₂`, `v = b₁gb₂`,
/// `g_list ⊆ C(a₁)`, `h_list ⊆ C(b₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerPublic<E> {
    pub g: E,
    pub u: E,
    pub v: E,
    pub g_list: Vec<E>,
    pub h_list: Vec<E>,
}

/// Public data of the Diffie–Hellman conjugacy KEP: `g_a = g^a`, `g_b = g^b`
/// with `a ∈ ⟨a_gens⟩`, `b ∈ ⟨b_gens⟩` and `[A, B] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DhPublic<E> {
    pub g: E,
    pub g_a: E,
    pub g_b: E,
    pub a_gens: Vec<E>,
    pub b_gens: Vec<E>,
}

/// Public data of the Double Coset KEP: `u = a₁ga₂`, `v = b₁gb₂` with
/// `[A₁, B₁] = [A₂, B₂] = 1`. Stickel's KEP uses `A₁ = B₁ = ⟨a⟩` and
/// `A₂ = B₂ = ⟨b⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleCosetPublic<E> {
    pub g: E,
    pub u: E,
    pub v: E,
    pub a1_gens: Vec<E>,
    pub b1_gens: Vec<E>,
    pub a2_gens: Vec<E>,
    pub b2_gens: Vec<E>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Public<E> {
    Commutator(CommutatorPublic<E>),
    Centralizer(CentralizerPublic<E>),
    Dh(DhPublic<E>),
    DoubleCoset(DoubleCosetPublic<E>),
}

/// Private data of an instance: named elements and the words that built them.
#[derive(Debug, Clone, PartialEq)]
pub struct Secrets<E> {
    pub elements: BTreeMap<String, E>,
    pub words: BTreeMap<String, Word>,
}

impl<E> Default for Secrets<E> {
    fn default() -> Self {
        Secrets {
            elements: BTreeMap::new(),
            words: BTreeMap::new(),
        }
    }
}

impl<E: Clone> Secrets<E> {
    pub fn get(&self, name: &str) -> Option<&E> {
        self.elements.get(name)
    }

    fn with(mut self, name: &str, e: &E) -> Self {
        self.elements.insert(name.into(), e.clone());
        self
    }

    fn with_word(mut self, name: &str, w: &Word) -> Self {
        self.words.insert(name.into(), w.clone());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimParams {
    pub k: usize,
    pub m: usize,
    pub ell: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedInstance<E> {
    pub protocol: Protocol,
    pub public: Public<E>,
    pub secrets: Option<Secrets<E>>,
    pub shared_key: Option<E>,
    pub params: SimParams,
}

impl<E: Clone> SimulatedInstance<E> {
    /// The attacker-facing view: public data and parameters only.
    pub fn public_only(&self) -> Self {
        SimulatedInstance {
            secrets: None,
            shared_key: None,
            ..self.clone()
        }
    }
}

fn keys_agree<G: Group>(alice: G::Elem, bob: G::Elem) -> G::Elem {
    assert_eq!(alice, bob, "Alice and Bob computed different keys");
    alice
}

/// Commutator KEP with `k` public elements per side and secret words of
/// length exactly `m`; the key is `a⁻¹b⁻¹ab`.
pub fn simulate_commutator<G: Group, R: Rng + ?Sized>(
    group: &G,
    k: usize,
    m: usize,
    gp: &GenParams,
    rng: &mut R,
) -> SimulatedInstance<G::Elem> {
    assert!(k >= 1);
    let a_list: Vec<_> = (0..k).map(|_| group.random_public(gp, rng)).collect();
    let b_list: Vec<_> = (0..k).map(|_| group.random_public(gp, rng)).collect();
    let v = random_reduced_word(k, m, rng);
    let w = random_reduced_word(k, m, rng);
    let a = group.eval(&v, &a_list);
    let b = group.eval(&w, &b_list);
    let a_conj: Vec<_> = a_list.iter().map(|x| group.conj(x, &b)).collect();
    let b_conj: Vec<_> = b_list.iter().map(|x| group.conj(x, &a)).collect();
    // Alice: a⁻¹·v(a_i^b) = a⁻¹b⁻¹ab; Bob: w(b_i^a)⁻¹·b = a⁻¹b⁻¹a·b
    let alice = group.mul(&group.inv(&a), &group.eval(&v, &a_conj));
    let bob = group.mul(&group.inv(&group.eval(&w, &b_conj)), &b);
    let key = keys_agree::<G>(alice, bob);
    SimulatedInstance {
        protocol: Protocol::Commutator,
        public: Public::Commutator(CommutatorPublic {
            a_list,
            b_list,
            a_conj,
            b_conj,
        }),
        secrets: Some(
            Secrets::default()
                .with("a", &a)
                .with("b", &b)
                .with_word("v", &v)
                .with_word("w", &w),
        ),
        shared_key: Some(key),
        params: SimParams {
            k,
            m,
            ell: gp.ell,
            seed: None,
        },
    }
}

/// Centralizer KEP; the key is `a₁b₁ga₂b₂`.
pub fn simulate_centralizer<G: Group, R: Rng + ?Sized>(
    group: &G,
    k: usize,
    m: usize,
    gp: &GenParams,
    rng: &mut R,
) -> SimulatedInstance<G::Elem> {
    assert!(k >= 1);
    let g = group.random_public(gp, rng);
    let (a1, g_list) = group.centralized(k, gp, true, rng);
    let (b2, h_list) = group.centralized(k, gp, false, rng);
    let wa2 = random_reduced_word(k, m, rng);
    let wb1 = random_reduced_word(k, m, rng);
    let a2 = group.eval(&wa2, &h_list);
    let b1 = group.eval(&wb1, &g_list);
    let u = group.mul(&group.mul(&a1, &g), &a2);
    let v = group.mul(&group.mul(&b1, &g), &b2);
    let alice = group.mul(&group.mul(&a1, &v), &a2);
    let bob = group.mul(&group.mul(&b1, &u), &b2);
    let key = keys_agree::<G>(alice, bob);
    SimulatedInstance {
        protocol: Protocol::Centralizer,
        public: Public::Centralizer(CentralizerPublic {
            g,
            u,
            v,
            g_list,
            h_list,
        }),
        secrets: Some(
            Secrets::default()
                .with("a1", &a1)
                .with("a2", &a2)
                .with("b1", &b1)
                .with("b2", &b2)
                .with_word("a2", &wa2)
                .with_word("b1", &wb1),
        ),
        shared_key: Some(key),
        params: SimParams {
            k,
            m,
            ell: gp.ell,
            seed: None,
        },
    }
}

/// Diffie–Hellman conjugacy KEP over commuting subgroups; the key is `g^{ab}`.
pub fn simulate_braid_dh<G: Group, R: Rng + ?Sized>(
    group: &G,
    k: usize,
    m: usize,
    gp: &GenParams,
    rng: &mut R,
) -> SimulatedInstance<G::Elem> {
    let (a_gens, b_gens) = group.commuting_generators(k, rng);
    let g = group.random_public(gp, rng);
    let wa = random_reduced_word(a_gens.len(), m, rng);
    let wb = random_reduced_word(b_gens.len(), m, rng);
    let a = group.eval(&wa, &a_gens);
    let b = group.eval(&wb, &b_gens);
    let g_a = group.conj(&g, &a);
    let g_b = group.conj(&g, &b);
    let key = keys_agree::<G>(group.conj(&g_b, &a), group.conj(&g_a, &b));
    SimulatedInstance {
        protocol: Protocol::BraidDh,
        public: Public::Dh(DhPublic {
            g,
            g_a,
            g_b,
            a_gens,
            b_gens,
        }),
        secrets: Some(
            Secrets::default()
                .with("a", &a)
                .with("b", &b)
                .with_word("a", &wa)
                .with_word("b", &wb),
        ),
        shared_key: Some(key),
        params: SimParams {
            k,
            m,
            ell: gp.ell,
            seed: None,
        },
    }
}

fn double_coset_from_parts<G: Group>(
    group: &G,
    protocol: Protocol,
    g: G::Elem,
    gens: [Vec<G::Elem>; 4],
    secrets: [G::Elem; 4],
    params: SimParams,
) -> SimulatedInstance<G::Elem> {
    let [a1_gens, b1_gens, a2_gens, b2_gens] = gens;
    let [a1, b1, a2, b2] = secrets;
    let u = group.mul(&group.mul(&a1, &g), &a2);
    let v = group.mul(&group.mul(&b1, &g), &b2);
    let alice = group.mul(&group.mul(&a1, &v), &a2);
    let bob = group.mul(&group.mul(&b1, &u), &b2);
    let key = keys_agree::<G>(alice, bob);
    SimulatedInstance {
        protocol,
        public: Public::DoubleCoset(DoubleCosetPublic {
            g,
            u,
            v,
            a1_gens,
            b1_gens,
            a2_gens,
            b2_gens,
        }),
        secrets: Some(
            Secrets::default()
                .with("a1", &a1)
                .with("a2", &a2)
                .with("b1", &b1)
                .with("b2", &b2),
        ),
        shared_key: Some(key),
        params,
    }
}

/// Double Coset KEP; the key is `a₁b₁ga₂b₂`.
pub fn simulate_double_coset<G: Group, R: Rng + ?Sized>(
    group: &G,
    k: usize,
    m: usize,
    gp: &GenParams,
    rng: &mut R,
) -> SimulatedInstance<G::Elem> {
    let (a1_gens, b1_gens) = group.commuting_generators(k, rng);
    let (a2_gens, b2_gens) = group.commuting_generators(k, rng);
    let g = group.random_public(gp, rng);
    let mut word_in = |gens: &[G::Elem]| group.eval(&random_reduced_word(gens.len(), m, rng), gens);
    let secrets = [
        word_in(&a1_gens),
        word_in(&b1_gens),
        word_in(&a2_gens),
        word_in(&b2_gens),
    ];
    double_coset_from_parts(
        group,
        Protocol::DoubleCoset,
        g,
        [a1_gens, b1_gens, a2_gens, b2_gens],
        secrets,
        SimParams {
            k,
            m,
            ell: gp.ell,
            seed: None,
        },
    )
}

/// Stickel's KEP: public `a`, `b`, `g`; each secret is a nonzero scalar times
/// a power of `a` (left side) or of `b` (right side) with exponent in `1..=m`.
pub fn simulate_stickel<F: Field, R: Rng + ?Sized>(
    group: &MatrixGroup<F>,
    m: usize,
    rng: &mut R,
) -> SimulatedInstance<FieldMatrix<F>> {
    let a = group.random_public(&GenParams::default(), rng);
    let b = group.random_public(&GenParams::default(), rng);
    let g = group.random_public(&GenParams::default(), rng);
    let mut power = |x: &FieldMatrix<F>, scaled: bool| {
        let e = rng.gen_range(1..=m.max(1) as i64);
        let p = x.pow(e).unwrap();
        if scaled {
            p.scale(&group.nonzero(rng))
        } else {
            p
        }
    };
    let secrets = [power(&a, true), power(&a, true), power(&b, false), power(&b, false)];
    double_coset_from_parts(
        group,
        Protocol::Stickel,
        g,
        [vec![a.clone()], vec![a], vec![b.clone()], vec![b]],
        secrets,
        SimParams {
            k: 1,
            m,
            ell: 0,
            seed: None,
        },
    )
}

/// Recomputes an instance from its secrets and checks the transcript, the
/// protocol's commutation promises and the shared key.
pub fn verify_instance<G: Group>(group: &G, inst: &SimulatedInstance<G::Elem>) -> Result<(), String> {
    let s = inst.secrets.as_ref().ok_or("instance has no secrets")?;
    let key = inst.shared_key.as_ref().ok_or("instance has no shared key")?;
    let get = |name: &str| s.get(name).cloned().ok_or(format!("missing secret {name}"));
    let commutes = |x: &G::Elem, y: &G::Elem| group.mul(x, y) == group.mul(y, x);
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what} failed")) };
    match &inst.public {
        Public::Commutator(p) => {
            let (a, b) = (get("a")?, get("b")?);
            for (x, y) in p.a_list.iter().zip(&p.a_conj) {
                check(group.conj(x, &b) == *y, "a_i^b")?;
            }
            for (x, y) in p.b_list.iter().zip(&p.b_conj) {
                check(group.conj(x, &a) == *y, "b_i^a")?;
            }
            let k = group.mul(&group.mul(&group.inv(&a), &group.inv(&b)), &group.mul(&a, &b));
            check(k == *key, "key")
        }
        Public::Centralizer(p) => {
            let (a1, a2, b1, b2) = (get("a1")?, get("a2")?, get("b1")?, get("b2")?);
            check(p.g_list.iter().all(|x| commutes(x, &a1)), "g_i ∈ C(a₁)")?;
            check(p.h_list.iter().all(|x| commutes(x, &b2)), "h_i ∈ C(b₂)")?;
            check(commutes(&a1, &b1) && commutes(&a2, &b2), "commuting secrets")?;
            check(group.mul(&group.mul(&a1, &p.g), &a2) == p.u, "u")?;
            check(group.mul(&group.mul(&b1, &p.g), &b2) == p.v, "v")?;
            let k = group.mul(&group.mul(&group.mul(&a1, &b1), &p.g), &group.mul(&a2, &b2));
            check(k == *key, "key")
        }
        Public::Dh(p) => {
            let (a, b) = (get("a")?, get("b")?);
            check(
                p.a_gens.iter().all(|x| p.b_gens.iter().all(|y| commutes(x, y))),
                "[A, B] = 1",
            )?;
            check(group.conj(&p.g, &a) == p.g_a && group.conj(&p.g, &b) == p.g_b, "g^a, g^b")?;
            check(group.conj(&p.g, &group.mul(&a, &b)) == *key, "key")
        }
        Public::DoubleCoset(p) => {
            let (a1, a2, b1, b2) = (get("a1")?, get("a2")?, get("b1")?, get("b2")?);
            let pairwise = |xs: &[G::Elem], ys: &[G::Elem]| {
                xs.iter().all(|x| ys.iter().all(|y| commutes(x, y)))
            };
            if inst.protocol == Protocol::Stickel {
                check(commutes(&a1, &p.a1_gens[0]) && commutes(&b1, &p.b1_gens[0]), "secrets in ⟨a⟩")?;
                check(commutes(&a2, &p.a2_gens[0]) && commutes(&b2, &p.b2_gens[0]), "secrets in ⟨b⟩")?;
            } else {
                check(pairwise(&p.a1_gens, &p.b1_gens), "[A₁, B₁] = 1")?;
                check(pairwise(&p.a2_gens, &p.b2_gens), "[A₂, B₂] = 1")?;
            }
            check(commutes(&a1, &b1) && commutes(&a2, &b2), "commuting secrets")?;
            check(group.mul(&group.mul(&a1, &p.g), &a2) == p.u, "u")?;
            check(group.mul(&group.mul(&b1, &p.g), &b2) == p.v, "v")?;
            let k = group.mul(&group.mul(&group.mul(&a1, &b1), &p.g), &group.mul(&a2, &b2));
            check(k == *key, "key")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fp64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simulators_are_honest() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bg = BraidGroup::new(4);
        let gp = GenParams::default();
        let mg = MatrixGroup::new(Fp64::new(101).unwrap(), 5);
        for _ in 0..5 {
            verify_instance(&bg, &simulate_commutator(&bg, 2, 2, &gp, &mut rng)).unwrap();
            verify_instance(&bg, &simulate_centralizer(&bg, 2, 2, &gp, &mut rng)).unwrap();
            verify_instance(&bg, &simulate_braid_dh(&bg, 2, 3, &gp, &mut rng)).unwrap();
            verify_instance(&bg, &simulate_double_coset(&bg, 2, 3, &gp, &mut rng)).unwrap();
            verify_instance(&mg, &simulate_commutator(&mg, 3, 4, &gp, &mut rng)).unwrap();
            verify_instance(&mg, &simulate_centralizer(&mg, 3, 4, &gp, &mut rng)).unwrap();
            verify_instance(&mg, &simulate_braid_dh(&mg, 3, 4, &gp, &mut rng)).unwrap();
            verify_instance(&mg, &simulate_double_coset(&mg, 3, 4, &gp, &mut rng)).unwrap();
            verify_instance(&mg, &simulate_stickel(&mg, 6, &mut rng)).unwrap();
        }
    }

    #[test]
    fn trivial_secrets_give_trivial_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let bg = BraidGroup::new(5);
        let inst = simulate_commutator(&bg, 3, 0, &GenParams::default(), &mut rng);
        assert!(inst.shared_key.unwrap().is_identity());
        let inst = simulate_centralizer(&bg, 3, 0, &GenParams { ell: 0, inf_range: (0, 0) }, &mut rng);
        // ell = 0 makes a₁ and b₂ trivial as well, so the key is g
        let Public::Centralizer(p) = &inst.public else { unreachable!() };
        assert_eq!(inst.shared_key.as_ref().unwrap(), &p.g);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let bg = BraidGroup::new(4);
        let gp = GenParams::default();
        let a = simulate_commutator(&bg, 2, 2, &gp, &mut ChaCha8Rng::seed_from_u64(7));
        let b = simulate_commutator(&bg, 2, 2, &gp, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        assert!(a.public_only().secrets.is_none());
    }
}
