//! Dense univariate polynomials over ℤ_p with Montgomery-form coefficients.
//! Only what the field layer needs: division, gcd and inversion modulo `f`.

use super::mont::Mont;

pub(crate) type Poly = Vec<Vec<u64>>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| Mont::is_zero(c)) {
        p.pop();
    }
}

/// `(q, r)` with `a = q·b + r`, `deg r < deg b`. `b` must be nonzero and trimmed.
pub(crate) fn divmod(m: &Mont, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = b.len() - 1;
    let lead_inv = m.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![vec![0u64; m.limbs]; r.len() - db];
    let mut tmp = vec![0u64; m.limbs];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = m.mul_new(&r[r.len() - 1], &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            m.mul(&c, bj, &mut tmp);
            let slot = &mut r[k + j];
            let cur = slot.clone();
            m.sub(&cur, &tmp, slot);
        }
        q[k] = c;
        trim(&mut r);
        // leading term is cancelled exactly; trimming guarantees progress
    }
    trim(&mut q);
    (q, r)
}

fn sub_poly(m: &Mont, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = vec![0u64; m.limbs];
    let mut out = vec![vec![0u64; m.limbs]; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        m.sub(x, y, slot);
    }
    let mut out = out;
    trim(&mut out);
    out
}

fn mul_poly(m: &Mont, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let w = m.wide_len();
    let mut acc = vec![0u64; (a.len() + b.len() - 1) * w];
    for (i, ai) in a.iter().enumerate() {
        if Mont::is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let k = i + j;
            m.mul_acc(&mut acc[k * w..(k + 1) * w], ai, bj);
        }
    }
    let mut out: Poly = (0..a.len() + b.len() - 1)
        .map(|k| {
            let mut o = vec![0u64; m.limbs];
            m.redc(&mut acc[k * w..(k + 1) * w], &mut o);
            o
        })
        .collect();
    trim(&mut out);
    out
}

/// Monic gcd.
pub(crate) fn gcd(m: &Mont, a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divmod(m, &x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last() {
        let inv = m.inv(lead).unwrap();
        for c in x.iter_mut() {
            *c = m.mul_new(c, &inv);
        }
    }
    x
}

/// Inverse of `a` modulo `f` by the extended Euclidean algorithm; `None`
/// when `gcd(a, f) ≠ 1`.
pub(crate) fn inv_mod(m: &Mont, a: &Poly, f: &Poly) -> Option<Poly> {
    let mut r0 = f.clone();
    let mut r1 = a.clone();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Poly = Vec::new();
    let mut s1: Poly = vec![m.one.clone()];
    while r1.len() > 1 {
        let (q, r) = divmod(m, &r0, &r1);
        let s2 = sub_poly(m, &s0, &mul_poly(m, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r1.is_empty() {
        return None;
    }
    let c_inv = m.inv(&r1[0])?;
    let (_, s) = divmod(m, &s1, f);
    Some(s.iter().map(|c| m.mul_new(c, &c_inv)).collect())
}
