use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The dyadic rational `c / 2^d`. Canonical: `d = 0` or `c` odd.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    c: BigInt,
    d: u32,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            write!(f, "{}", self.c)
        } else {
            write!(f, "{}/2^{}", self.c, self.d)
        }
    }
}

impl Dyadic {
    pub fn new(c: BigInt, d: u32) -> Self {
        let mut x = Dyadic { c, d };
        x.normalize();
        x
    }

    pub fn int(c: i64) -> Self {
        Dyadic {
            c: BigInt::from(c),
            d: 0,
        }
    }

    fn normalize(&mut self) {
        if self.c.is_zero() {
            self.d = 0;
            return;
        }
        let tz = self.c.trailing_zeros().unwrap_or(0).min(self.d as u64) as u32;
        if tz > 0 {
            self.c >>= tz;
            self.d -= tz;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.c
    }

    pub fn exponent(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    /// Units of ℤ[1/2]: `±2^e`.
    pub fn is_unit(&self) -> bool {
        self.c.abs().is_one() || (!self.c.is_zero() && self.d == 0 && {
            let a = self.c.abs();
            let tz = a.trailing_zeros().unwrap_or(0);
            (a >> tz).is_one()
        })
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        let d = self.d.max(o.d);
        let c = (&self.c << (d - self.d)) + (&o.c << (d - o.d));
        Dyadic::new(c, d)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            c: -&self.c,
            d: self.d,
        }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.c * &o.c, self.d + o.d)
    }

    /// Inverse of a unit `±2^e`.
    pub fn inv_unit(&self) -> Option<Dyadic> {
        if !self.is_unit() {
            return None;
        }
        let sign = if self.c.is_negative() { -1 } else { 1 };
        let a = self.c.abs();
        let e = a.trailing_zeros().unwrap_or(0) as u32;
        // (±2^e / 2^d)⁻¹ = ±2^d / 2^e
        Some(Dyadic::new(BigInt::from(sign) << self.d, e))
    }
}

/// Element of ℤ[t^{±1}, 1/2], stored sparsely by exponent of `t`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DyadicLaurent {
    terms: BTreeMap<i64, Dyadic>,
}

impl fmt::Debug for DyadicLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({c:?})t^{e}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl DyadicLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Dyadic::int(1), 0)
    }

    pub fn monomial(c: Dyadic, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        DyadicLaurent { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Dyadic)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Dyadic)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    fn add_term(&mut self, e: i64, c: &Dyadic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = x.add(c);
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (e, c) in &o.terms {
            self.add_term(*e, c);
        }
    }

    pub fn neg(&self) -> Self {
        DyadicLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, &c1.mul(c2));
            }
        }
        out
    }

    /// `self += a·b`.
    pub fn add_mul(&mut self, a: &Self, b: &Self) {
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                self.add_term(e1 + e2, &c1.mul(c2));
            }
        }
    }

    /// Units are the monomials `±2^k t^e`.
    pub fn inv_unit(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(c.inv_unit()?, -e))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_canonical_form() {
        let half = Dyadic::new(BigInt::from(1), 1);
        assert_eq!(half.add(&half), Dyadic::int(1));
        assert_eq!(Dyadic::new(BigInt::from(12), 3), Dyadic::new(BigInt::from(3), 1));
        assert_eq!(Dyadic::new(BigInt::from(0), 5), Dyadic::int(0));
        assert_eq!(Dyadic::new(BigInt::from(6), 0).exponent(), 0);
        assert_eq!(half.inv_unit(), Some(Dyadic::int(2)));
        assert_eq!(Dyadic::int(-4).inv_unit(), Some(Dyadic::new(BigInt::from(-1), 2)));
        assert_eq!(Dyadic::int(3).inv_unit(), None);
    }

    #[test]
    fn laurent_arithmetic() {
        let t = DyadicLaurent::monomial(Dyadic::int(1), 1);
        let tinv = t.inv_unit().unwrap();
        assert_eq!(t.mul(&tinv), DyadicLaurent::one());
        let x = DyadicLaurent::one().add(&t);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.mul(&x).len(), 3);
        assert_eq!(x.inv_unit(), None);
    }
}
