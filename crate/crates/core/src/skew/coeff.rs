//! Coefficient fields for skew polynomials: a finite field `L ⊇ F_q`, or the
//! rational function field F_{q^d}(T).

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::base::{Embedding, Fe, Gf, Poly, RatFn, Tower};
use crate::error::{Error, Result};

pub trait CoeffField: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// `a^(q^k)`
    fn frob(&self, a: &Self::Elem, k: u32) -> Self::Elem;
    /// `a^(q^-k)`, available on perfect fields.
    fn frob_root(&self, a: &Self::Elem, k: u32) -> Option<Self::Elem>;
    fn is_perfect(&self) -> bool;
    /// The image of an F_q element (encoded in the tower's F_q).
    fn from_fq(&self, c: Fe) -> Self::Elem;
    /// The image of an F_{q^d} element, if the field contains F_{q^d}.
    fn from_fqd(&self, c: Fe) -> Option<Self::Elem>;
    fn q(&self) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// A finite field L = F_{q^m} with its embeddings of F_q and (when `d | m`) F_{q^d}.
#[derive(Clone, Debug)]
pub struct FiniteCoeff {
    pub field: Arc<Gf>,
    /// q = p^e
    pub e: u32,
    pub from_q: Embedding,
    pub from_qd: Option<Embedding>,
}

impl FiniteCoeff {
    /// `L = F_{p^(e*m)}`, compatible with the tower's embedding F_q ⊂ F_{q^d}.
    pub fn over_tower(tower: &Tower, m: u32) -> Result<FiniteCoeff> {
        let field = Gf::new(tower.p, tower.e * m)?;
        if m % tower.d == 0 {
            let from_qd = Embedding::new(&tower.fqd, &field)?;
            let from_q = tower.emb.then(&from_qd)?;
            Ok(FiniteCoeff { field, e: tower.e, from_q, from_qd: Some(from_qd) })
        } else {
            let from_q = Embedding::new(&tower.fq, &field)?;
            Ok(FiniteCoeff { field, e: tower.e, from_q, from_qd: None })
        }
    }

    /// A degree-`k` extension, with embeddings composed through `self`.
    pub fn extend(&self, k: u32) -> Result<(FiniteCoeff, Embedding)> {
        if k == 1 {
            return Ok((self.clone(), Embedding::identity(&self.field)?));
        }
        let big = Gf::new(self.field.p(), self.field.degree() * k)?;
        let emb = Embedding::new(&self.field, &big)?;
        let from_q = self.from_q.then(&emb)?;
        let from_qd = match &self.from_qd {
            Some(e) => Some(e.then(&emb)?),
            None => None,
        };
        Ok((FiniteCoeff { field: big, e: self.e, from_q, from_qd }, emb))
    }

    /// Degree of L over F_q.
    pub fn degree_over_fq(&self) -> u32 {
        self.field.degree() / self.e
    }
}

impl CoeffField for FiniteCoeff {
    type Elem = Fe;
    fn zero(&self) -> Fe {
        0
    }
    fn one(&self) -> Fe {
        1
    }
    fn is_zero(&self, a: &Fe) -> bool {
        *a == 0
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.field.add(*a, *b)
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        self.field.sub(*a, *b)
    }
    fn neg(&self, a: &Fe) -> Fe {
        self.field.neg(*a)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.field.mul(*a, *b)
    }
    fn inv(&self, a: &Fe) -> Option<Fe> {
        self.field.inv(*a)
    }
    fn frob(&self, a: &Fe, k: u32) -> Fe {
        self.field.frob_p(*a, self.e as u64 * k as u64)
    }
    fn frob_root(&self, a: &Fe, k: u32) -> Option<Fe> {
        let n = self.field.degree() as u64;
        let j = (self.e as u64 * k as u64) % n;
        Some(self.field.frob_p(*a, (n - j) % n))
    }
    fn is_perfect(&self) -> bool {
        true
    }
    fn from_fq(&self, c: Fe) -> Fe {
        self.from_q.apply(c)
    }
    fn from_fqd(&self, c: Fe) -> Option<Fe> {
        self.from_qd.as_ref().map(|e| e.apply(c))
    }
    fn q(&self) -> u64 {
        (self.field.p() as u64).pow(self.e)
    }
}

/// The field F_{q^d}(T); not perfect, so left division is unavailable.
#[derive(Clone, Debug)]
pub struct RatCoeff {
    pub tower: Tower,
}

impl RatCoeff {
    pub fn new(tower: &Tower) -> RatCoeff {
        RatCoeff { tower: tower.clone() }
    }
    pub fn poly(&self, p: Poly) -> RatFn {
        RatFn::from_poly(p)
    }
    /// Embed `a ∈ F_q[T]` (coefficients in F_q) into F_{q^d}(T).
    pub fn from_a(&self, a: &Poly) -> RatFn {
        RatFn::from_poly(a.map(|c| self.tower.emb.apply(c)))
    }
    pub fn t(&self) -> RatFn {
        RatFn::from_poly(Poly::t())
    }
}

impl CoeffField for RatCoeff {
    type Elem = RatFn;
    fn zero(&self) -> RatFn {
        RatFn::zero()
    }
    fn one(&self) -> RatFn {
        RatFn::one()
    }
    fn is_zero(&self, a: &RatFn) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        a.add(&self.tower.fqd, b)
    }
    fn sub(&self, a: &RatFn, b: &RatFn) -> RatFn {
        a.sub(&self.tower.fqd, b)
    }
    fn neg(&self, a: &RatFn) -> RatFn {
        a.neg(&self.tower.fqd)
    }
    fn mul(&self, a: &RatFn, b: &RatFn) -> RatFn {
        a.mul(&self.tower.fqd, b)
    }
    fn inv(&self, a: &RatFn) -> Option<RatFn> {
        a.inv(&self.tower.fqd).ok()
    }
    fn frob(&self, a: &RatFn, k: u32) -> RatFn {
        let qk = self.q().pow(k) as usize;
        a.frob_inflate(&self.tower.fqd, self.tower.e as u64 * k as u64, qk)
    }
    fn frob_root(&self, _a: &RatFn, _k: u32) -> Option<RatFn> {
        None
    }
    fn is_perfect(&self) -> bool {
        false
    }
    fn from_fq(&self, c: Fe) -> RatFn {
        RatFn::from_poly(Poly::constant(self.tower.emb.apply(c)))
    }
    fn from_fqd(&self, c: Fe) -> Option<RatFn> {
        Some(RatFn::from_poly(Poly::constant(c)))
    }
    fn q(&self) -> u64 {
        self.tower.q()
    }
}

/// Check that an element is nonzero before dividing.
pub fn inv_or_err<C: CoeffField>(f: &C, a: &C::Elem) -> Result<C::Elem> {
    f.inv(a).ok_or(Error::DivisionByZero)
}
