//! JSON encodings. Integers of unbounded size are `"0x…"` hex strings
//! (with a leading `-` when negative); braid permutations are one-indexed.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Num;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::braid::{Braid, Perm, Word};
use crate::ff::{Field, Fp64};
use crate::linalg::FieldMatrix;
use crate::lkrep::{Dyadic, DyadicLaurent, LkMatrix};
use crate::protocols::{
    BraidGroup, CentralizerPublic, CommutatorPublic, DhPublic, DoubleCosetPublic, Group,
    MatrixGroup, Protocol, Public, Secrets, SimParams, SimulatedInstance,
};

#[derive(Debug, Error)]
#[error("malformed input: {0}")]
pub struct IoError(pub String);

pub type IoResult<T> = Result<T, IoError>;

fn bad<T>(msg: impl Into<String>) -> IoResult<T> {
    Err(IoError(msg.into()))
}

pub fn hex_uint(x: &BigUint) -> String {
    format!("0x{}", x.to_str_radix(16))
}

pub fn hex_int(x: &BigInt) -> String {
    match x.sign() {
        Sign::Minus => format!("-0x{}", x.magnitude().to_str_radix(16)),
        _ => hex_uint(x.magnitude()),
    }
}

pub fn parse_hex_uint(v: &Value) -> IoResult<BigUint> {
    let s = v.as_str().ok_or_else(|| IoError(format!("expected hex string, found {v}")))?;
    let digits = s
        .strip_prefix("0x")
        .ok_or_else(|| IoError(format!("hex string {s:?} lacks 0x prefix")))?;
    BigUint::from_str_radix(digits, 16).map_err(|e| IoError(format!("{s:?}: {e}")))
}

pub fn parse_hex_int(v: &Value) -> IoResult<BigInt> {
    let s = v.as_str().ok_or_else(|| IoError(format!("expected hex string, found {v}")))?;
    match s.strip_prefix('-') {
        Some(rest) => Ok(-BigInt::from(parse_hex_uint(&Value::from(rest))?)),
        None => Ok(BigInt::from(parse_hex_uint(v)?)),
    }
}

pub fn field(obj: &Value, key: &str) -> IoResult<Value> {
    obj.get(key)
        .cloned()
        .ok_or_else(|| IoError(format!("missing field {key:?}")))
}

pub fn as_u64(v: &Value, what: &str) -> IoResult<u64> {
    v.as_u64().ok_or_else(|| IoError(format!("{what}: expected unsigned integer, found {v}")))
}

pub fn as_i64(v: &Value, what: &str) -> IoResult<i64> {
    v.as_i64().ok_or_else(|| IoError(format!("{what}: expected integer, found {v}")))
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> IoResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| IoError(format!("{what}: expected array")))
}

/// `{"p": hex, "f": [hex, …]}`; `f` lists coefficients from the constant term.
pub fn field_to_json<F: Field>(ctx: &F) -> Value {
    json!({
        "p": hex_uint(&ctx.characteristic()),
        "f": ctx.modulus_poly().iter().map(hex_uint).collect::<Vec<_>>(),
    })
}

/// A prime-field element is a hex string; extension elements are arrays of
/// residues from the constant term.
pub fn elem_to_json<F: Field>(ctx: &F, a: &F::Elem) -> Value {
    let r = ctx.to_residues(a);
    if ctx.degree() == 1 {
        Value::from(hex_uint(&r[0]))
    } else {
        Value::from(r.iter().map(hex_uint).collect::<Vec<_>>())
    }
}

pub fn elem_from_json<F: Field>(ctx: &F, v: &Value) -> IoResult<F::Elem> {
    let residues = if ctx.degree() == 1 {
        vec![parse_hex_uint(v)?]
    } else {
        as_array(v, "field element")?
            .iter()
            .map(parse_hex_uint)
            .collect::<IoResult<Vec<_>>>()?
    };
    ctx.from_residues(&residues).map_err(|e| IoError(e.to_string()))
}

pub fn matrix_to_json<F: Field>(m: &FieldMatrix<F>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(|e| elem_to_json(m.ctx(), e)).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json<F: Field>(ctx: &F, v: &Value) -> IoResult<FieldMatrix<F>> {
    let rows = as_u64(&field(v, "rows")?, "rows")? as usize;
    let cols = as_u64(&field(v, "cols")?, "cols")? as usize;
    let entries = as_array(&field(v, "entries")?, "entries")?
        .iter()
        .map(|e| elem_from_json(ctx, e))
        .collect::<IoResult<Vec<_>>>()?;
    FieldMatrix::from_entries(ctx, rows, cols, entries).map_err(|e| IoError(e.to_string()))
}

pub fn braid_to_json(b: &Braid) -> Value {
    let factors: Vec<Vec<u64>> = b
        .factors()
        .iter()
        .map(|p| p.images().iter().map(|&x| x as u64 + 1).collect())
        .collect();
    json!({"n": b.n(), "inf": b.inf(), "factors": factors})
}

pub fn braid_from_json(v: &Value) -> IoResult<Braid> {
    let n = as_u64(&field(v, "n")?, "n")? as usize;
    if !(2..=255).contains(&n) {
        return bad(format!("unsupported strand count {n}"));
    }
    let inf = as_i64(&field(v, "inf")?, "inf")?;
    let factors = as_array(&field(v, "factors")?, "factors")?
        .iter()
        .map(|f| {
            let images = as_array(f, "factor")?
                .iter()
                .map(|x| {
                    let i = as_u64(x, "image")?;
                    if i == 0 || i > n as u64 {
                        return bad(format!("image {i} out of range 1..={n}"));
                    }
                    Ok((i - 1) as u8)
                })
                .collect::<IoResult<Vec<u8>>>()?;
            if images.len() != n {
                return bad("factor has wrong length");
            }
            Perm::from_images(images).ok_or_else(|| IoError("factor is not a permutation".into()))
        })
        .collect::<IoResult<Vec<_>>>()?;
    Braid::from_normal_form(n, inf, factors).map_err(|e| IoError(e.to_string()))
}

pub fn word_to_json(w: &Word) -> Value {
    Value::from(w.iter().map(|&(j, s)| json!([j, s])).collect::<Vec<_>>())
}

pub fn word_from_json(v: &Value) -> IoResult<Word> {
    as_array(v, "word")?
        .iter()
        .map(|l| {
            let pair = as_array(l, "letter")?;
            if pair.len() != 2 {
                return bad("letter must be [index, sign]");
            }
            let j = as_u64(&pair[0], "letter index")? as usize;
            let s = as_i64(&pair[1], "letter sign")?;
            if j == 0 || (s != 1 && s != -1) {
                return bad("letter index must be positive and sign ±1");
            }
            Ok((j, s as i8))
        })
        .collect()
}

/// Each entry is a list of `[exponent, "c", d]` triples for `c/2^d · t^exponent`.
pub fn lk_to_json(m: &LkMatrix) -> Value {
    let entries: Vec<Value> = m
        .entries()
        .iter()
        .map(|x| {
            Value::from(
                x.terms()
                    .map(|(e, c)| json!([e, hex_int(c.numerator()), c.exponent()]))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    json!({"strands": m.strands(), "entries": entries})
}

pub fn lk_from_json(v: &Value) -> IoResult<LkMatrix> {
    let strands = as_u64(&field(v, "strands")?, "strands")? as usize;
    let entries = as_array(&field(v, "entries")?, "entries")?
        .iter()
        .map(|x| {
            let terms = as_array(x, "entry")?
                .iter()
                .map(|t| {
                    let t = as_array(t, "term")?;
                    if t.len() != 3 {
                        return bad("term must be [exp, c, d]");
                    }
                    let d = as_u64(&t[2], "d")?;
                    let d = u32::try_from(d).map_err(|_| IoError("d too large".into()))?;
                    Ok((as_i64(&t[0], "exp")?, Dyadic::new(parse_hex_int(&t[1])?, d)))
                })
                .collect::<IoResult<Vec<_>>>()?;
            Ok(DyadicLaurent::from_terms(terms))
        })
        .collect::<IoResult<Vec<_>>>()?;
    LkMatrix::from_entries(strands, entries).map_err(|e| IoError(e.to_string()))
}

/// Encoding of a group's elements and of the group itself.
pub trait GroupCodec: Group {
    fn group_to_json(&self) -> Value;
    fn elem_to_json(&self, e: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> IoResult<Self::Elem>;

    fn list_to_json(&self, l: &[Self::Elem]) -> Value {
        Value::from(l.iter().map(|e| self.elem_to_json(e)).collect::<Vec<_>>())
    }

    fn list_from_json(&self, v: &Value) -> IoResult<Vec<Self::Elem>> {
        as_array(v, "element list")?
            .iter()
            .map(|e| self.elem_from_json(e))
            .collect()
    }
}

impl GroupCodec for BraidGroup {
    fn group_to_json(&self) -> Value {
        json!({"kind": "braid", "N": self.n})
    }

    fn elem_to_json(&self, e: &Braid) -> Value {
        braid_to_json(e)
    }

    fn elem_from_json(&self, v: &Value) -> IoResult<Braid> {
        let b = braid_from_json(v)?;
        if b.n() != self.n {
            return bad(format!("braid on {} strands in B_{}", b.n(), self.n));
        }
        Ok(b)
    }
}

impl<F: Field> GroupCodec for MatrixGroup<F> {
    fn group_to_json(&self) -> Value {
        json!({"kind": "matrix", "n": self.n, "field": field_to_json(&self.ctx)})
    }

    fn elem_to_json(&self, e: &FieldMatrix<F>) -> Value {
        matrix_to_json(e)
    }

    fn elem_from_json(&self, v: &Value) -> IoResult<FieldMatrix<F>> {
        let m = matrix_from_json(&self.ctx, v)?;
        if m.rows() != self.n || m.cols() != self.n {
            return bad(format!("expected {}×{} matrix", self.n, self.n));
        }
        if !m.is_invertible() {
            return bad("public matrix is singular");
        }
        Ok(m)
    }
}

/// A decoded instance over whichever platform group it names.
#[derive(Debug, Clone)]
pub enum AnyInstance {
    Braid(BraidGroup, SimulatedInstance<Braid>),
    Matrix(MatrixGroup<Fp64>, SimulatedInstance<FieldMatrix<Fp64>>),
}

impl AnyInstance {
    pub fn protocol(&self) -> Protocol {
        match self {
            AnyInstance::Braid(_, i) => i.protocol,
            AnyInstance::Matrix(_, i) => i.protocol,
        }
    }

    pub fn params(&self) -> SimParams {
        match self {
            AnyInstance::Braid(_, i) => i.params,
            AnyInstance::Matrix(_, i) => i.params,
        }
    }

    pub fn to_json(&self, with_secrets: bool) -> Value {
        match self {
            AnyInstance::Braid(g, i) => instance_to_json(g, i, with_secrets),
            AnyInstance::Matrix(g, i) => instance_to_json(g, i, with_secrets),
        }
    }
}

pub fn group_from_json(v: &Value) -> IoResult<GroupSpec> {
    match field(v, "kind")?.as_str() {
        Some("braid") => {
            let n = as_u64(&field(v, "N")?, "N")? as usize;
            if !(2..=255).contains(&n) {
                return bad(format!("unsupported strand count {n}"));
            }
            Ok(GroupSpec::Braid(BraidGroup::new(n)))
        }
        Some("matrix") => {
            let n = as_u64(&field(v, "n")?, "n")? as usize;
            if n == 0 {
                return bad("matrix size must be positive");
            }
            let f = field(v, "field")?;
            let p = parse_hex_uint(&field(&f, "p")?)?;
            let poly = field(&f, "f")?;
            if as_array(&poly, "f")?.len() != 2 {
                return bad("matrix groups are supported over prime fields only");
            }
            let p: u64 = p
                .try_into()
                .map_err(|_| IoError("matrix-group prime must fit in 64 bits".into()))?;
            let ctx = Fp64::new(p).map_err(|e| IoError(e.to_string()))?;
            Ok(GroupSpec::Matrix(MatrixGroup::new(ctx, n)))
        }
        _ => bad("group kind must be \"braid\" or \"matrix\""),
    }
}

#[derive(Debug, Clone)]
pub enum GroupSpec {
    Braid(BraidGroup),
    Matrix(MatrixGroup<Fp64>),
}

fn public_to_json<G: GroupCodec>(g: &G, p: &Public<G::Elem>) -> Value {
    let l = |x: &[G::Elem]| g.list_to_json(x);
    let e = |x: &G::Elem| g.elem_to_json(x);
    match p {
        Public::Commutator(p) => json!({
            "a_list": l(&p.a_list), "b_list": l(&p.b_list),
            "a_conj": l(&p.a_conj), "b_conj": l(&p.b_conj),
        }),
        Public::Centralizer(p) => json!({
            "g": e(&p.g), "u": e(&p.u), "v": e(&p.v),
            "g_list": l(&p.g_list), "h_list": l(&p.h_list),
        }),
        Public::Dh(p) => json!({
            "g": e(&p.g), "g_a": e(&p.g_a), "g_b": e(&p.g_b),
            "a_gens": l(&p.a_gens), "b_gens": l(&p.b_gens),
        }),
        Public::DoubleCoset(p) => json!({
            "g": e(&p.g), "u": e(&p.u), "v": e(&p.v),
            "a1_gens": l(&p.a1_gens), "b1_gens": l(&p.b1_gens),
            "a2_gens": l(&p.a2_gens), "b2_gens": l(&p.b2_gens),
        }),
    }
}

fn public_from_json<G: GroupCodec>(g: &G, protocol: Protocol, v: &Value) -> IoResult<Public<G::Elem>> {
    let e = |k: &str| g.elem_from_json(&field(v, k)?);
    let l = |k: &str| g.list_from_json(&field(v, k)?);
    let p = match protocol {
        Protocol::Commutator => {
            let p = CommutatorPublic {
                a_list: l("a_list")?,
                b_list: l("b_list")?,
                a_conj: l("a_conj")?,
                b_conj: l("b_conj")?,
            };
            let k = p.a_list.len();
            if k == 0 || p.b_list.len() != k || p.a_conj.len() != k || p.b_conj.len() != k {
                return bad("commutator lists must be nonempty and of equal length");
            }
            Public::Commutator(p)
        }
        Protocol::Centralizer => Public::Centralizer(CentralizerPublic {
            g: e("g")?,
            u: e("u")?,
            v: e("v")?,
            g_list: l("g_list")?,
            h_list: l("h_list")?,
        }),
        Protocol::BraidDh => Public::Dh(DhPublic {
            g: e("g")?,
            g_a: e("g_a")?,
            g_b: e("g_b")?,
            a_gens: l("a_gens")?,
            b_gens: l("b_gens")?,
        }),
        Protocol::DoubleCoset | Protocol::Stickel => Public::DoubleCoset(DoubleCosetPublic {
            g: e("g")?,
            u: e("u")?,
            v: e("v")?,
            a1_gens: l("a1_gens")?,
            b1_gens: l("b1_gens")?,
            a2_gens: l("a2_gens")?,
            b2_gens: l("b2_gens")?,
        }),
    };
    Ok(p)
}

pub fn params_to_json(p: &SimParams) -> Value {
    json!({"k": p.k, "m": p.m, "ell": p.ell, "seed": p.seed})
}

pub fn params_from_json(v: &Value) -> IoResult<SimParams> {
    let seed = match v.get("seed") {
        None | Some(Value::Null) => None,
        Some(s) => Some(as_u64(s, "seed")?),
    };
    Ok(SimParams {
        k: as_u64(&field(v, "k")?, "k")? as usize,
        m: as_u64(&field(v, "m")?, "m")? as usize,
        ell: as_u64(&field(v, "ell")?, "ell")? as usize,
        seed,
    })
}

pub fn instance_to_json<G: GroupCodec>(
    g: &G,
    inst: &SimulatedInstance<G::Elem>,
    with_secrets: bool,
) -> Value {
    let mut obj = Map::new();
    obj.insert("protocol".into(), Value::from(inst.protocol.name()));
    obj.insert("group".into(), g.group_to_json());
    obj.insert("public".into(), public_to_json(g, &inst.public));
    if with_secrets {
        if let Some(s) = &inst.secrets {
            let elements: Map<String, Value> = s
                .elements
                .iter()
                .map(|(k, v)| (k.clone(), g.elem_to_json(v)))
                .collect();
            let words: Map<String, Value> =
                s.words.iter().map(|(k, w)| (k.clone(), word_to_json(w))).collect();
            obj.insert("secrets".into(), json!({"elements": elements, "words": words}));
        }
        if let Some(k) = &inst.shared_key {
            obj.insert("shared_key".into(), g.elem_to_json(k));
        }
    }
    obj.insert("params".into(), params_to_json(&inst.params));
    Value::Object(obj)
}

pub fn instance_from_json_in<G: GroupCodec>(g: &G, v: &Value) -> IoResult<SimulatedInstance<G::Elem>> {
    let name = field(v, "protocol")?;
    let protocol = name
        .as_str()
        .and_then(Protocol::from_name)
        .ok_or_else(|| IoError(format!("unknown protocol {name}")))?;
    let public = public_from_json(g, protocol, &field(v, "public")?)?;
    let secrets = match v.get("secrets") {
        None | Some(Value::Null) => None,
        Some(s) => {
            let mut out = Secrets::default();
            if let Some(els) = s.get("elements").and_then(Value::as_object) {
                for (k, e) in els {
                    out.elements.insert(k.clone(), g.elem_from_json(e)?);
                }
            }
            if let Some(ws) = s.get("words").and_then(Value::as_object) {
                for (k, w) in ws {
                    out.words.insert(k.clone(), word_from_json(w)?);
                }
            }
            Some(out)
        }
    };
    let shared_key = match v.get("shared_key") {
        None | Some(Value::Null) => None,
        Some(k) => Some(g.elem_from_json(k)?),
    };
    Ok(SimulatedInstance {
        protocol,
        public,
        secrets,
        shared_key,
        params: params_from_json(&field(v, "params")?)?,
    })
}

pub fn instance_from_json(v: &Value) -> IoResult<AnyInstance> {
    match group_from_json(&field(v, "group")?)? {
        GroupSpec::Braid(g) => {
            let i = instance_from_json_in(&g, v)?;
            Ok(AnyInstance::Braid(g, i))
        }
        GroupSpec::Matrix(g) => {
            let i = instance_from_json_in(&g, v)?;
            Ok(AnyInstance::Matrix(g, i))
        }
    }
}

pub fn instance_from_str(s: &str) -> IoResult<AnyInstance> {
    let v: Value = serde_json::from_str(s).map_err(|e| IoError(e.to_string()))?;
    instance_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{make_binomial_ext_ctx, PrimeCtx};
    use crate::lkrep::lk_of_braid;
    use crate::protocols::{simulate_centralizer, simulate_commutator, GenParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hex_round_trips() {
        let x = BigInt::from(-255);
        assert_eq!(hex_int(&x), "-0xff");
        assert_eq!(parse_hex_int(&Value::from("-0xff")).unwrap(), x);
        assert!(parse_hex_uint(&Value::from("ff")).is_err());
    }

    #[test]
    fn element_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = Braid::random(5, -3, 4, &mut rng);
        assert_eq!(braid_from_json(&braid_to_json(&b)).unwrap(), b);
        let lk = lk_of_braid(&b);
        assert_eq!(lk_from_json(&lk_to_json(&lk)).unwrap(), lk);
        let ext = make_binomial_ext_ctx(PrimeCtx::new(BigUint::from(43u32)).unwrap(), 7).unwrap();
        let m = FieldMatrix::random(&ext, 2, 3, &mut rng);
        assert_eq!(matrix_from_json(&ext, &matrix_to_json(&m)).unwrap(), m);
        let w: Word = vec![(1, 1), (3, -1)];
        assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);
    }

    #[test]
    fn instance_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let bg = BraidGroup::new(4);
        let inst = simulate_centralizer(&bg, 2, 2, &GenParams::default(), &mut rng);
        let v = instance_to_json(&bg, &inst, true);
        let AnyInstance::Braid(_, back) = instance_from_json(&v).unwrap() else { panic!() };
        assert_eq!(back, inst);
        let hidden = instance_to_json(&bg, &inst, false);
        assert!(hidden.get("secrets").is_none() && hidden.get("shared_key").is_none());

        let mg = MatrixGroup::new(Fp64::new(Fp64::MERSENNE61).unwrap(), 3);
        let inst = simulate_commutator(&mg, 2, 3, &GenParams::default(), &mut rng);
        let v = instance_to_json(&mg, &inst, true);
        let AnyInstance::Matrix(_, back) = instance_from_json(&v).unwrap() else { panic!() };
        assert_eq!(back, inst);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(instance_from_str("{\"protocol\": \"commutator\"").is_err());
        assert!(braid_from_json(&json!({"n": 3, "inf": 0, "factors": [[1, 1, 2]]})).is_err());
        assert!(braid_from_json(&json!({"n": 3, "inf": 0, "factors": [[1, 2, 3]]})).is_err());
    }
}
