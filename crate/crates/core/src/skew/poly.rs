//! Skew polynomials `Σ a_i τ^i` with `τ b = b^q τ`.

use super::coeff::{inv_or_err, CoeffField};
use crate::error::{Error, Result};

/// Coefficients indexed by τ-power, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewPoly<E> {
    c: Vec<E>,
}

impl<E: Clone + PartialEq> SkewPoly<E> {
    pub fn from_coeffs<C: CoeffField<Elem = E>>(f: &C, mut c: Vec<E>) -> Self {
        while c.last().is_some_and(|x| f.is_zero(x)) {
            c.pop();
        }
        SkewPoly { c }
    }
    pub fn zero() -> Self {
        SkewPoly { c: Vec::new() }
    }
    pub fn constant<C: CoeffField<Elem = E>>(f: &C, a: E) -> Self {
        Self::from_coeffs(f, vec![a])
    }
    pub fn one<C: CoeffField<Elem = E>>(f: &C) -> Self {
        SkewPoly { c: vec![f.one()] }
    }
    /// `a τ^n`
    pub fn monomial<C: CoeffField<Elem = E>>(f: &C, a: E, n: usize) -> Self {
        let mut c = vec![f.zero(); n + 1];
        c[n] = a;
        Self::from_coeffs(f, c)
    }
    pub fn tau_pow<C: CoeffField<Elem = E>>(f: &C, n: usize) -> Self {
        Self::monomial(f, f.one(), n)
    }
    pub fn coeffs(&self) -> &[E] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lead(&self) -> Option<&E> {
        self.c.last()
    }
    /// Index of the lowest nonzero coefficient.
    pub fn valuation<C: CoeffField<Elem = E>>(&self, f: &C) -> Option<usize> {
        self.c.iter().position(|x| !f.is_zero(x))
    }
    pub fn coeff<C: CoeffField<Elem = E>>(&self, f: &C, i: usize) -> E {
        self.c.get(i).cloned().unwrap_or_else(|| f.zero())
    }
    pub fn constant_term<C: CoeffField<Elem = E>>(&self, f: &C) -> E {
        self.coeff(f, 0)
    }

    pub fn add<C: CoeffField<Elem = E>>(&self, f: &C, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(f, (0..n).map(|i| f.add(&self.coeff(f, i), &o.coeff(f, i))).collect())
    }
    pub fn sub<C: CoeffField<Elem = E>>(&self, f: &C, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(f, (0..n).map(|i| f.sub(&self.coeff(f, i), &o.coeff(f, i))).collect())
    }
    pub fn neg<C: CoeffField<Elem = E>>(&self, f: &C) -> Self {
        SkewPoly { c: self.c.iter().map(|x| f.neg(x)).collect() }
    }
    /// `a · self` (scalar on the left).
    pub fn lscale<C: CoeffField<Elem = E>>(&self, f: &C, a: &E) -> Self {
        Self::from_coeffs(f, self.c.iter().map(|x| f.mul(a, x)).collect())
    }

    pub fn mul<C: CoeffField<Elem = E>>(&self, f: &C, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.c.len() + o.c.len() - 1];
        let nz: Vec<usize> = (0..o.c.len()).filter(|&j| !f.is_zero(&o.c[j])).collect();
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for &j in &nz {
                let t = f.mul(a, &f.frob(&o.c[j], i as u32));
                out[i + j] = f.add(&out[i + j], &t);
            }
        }
        Self::from_coeffs(f, out)
    }

    /// `self = q · g + r` with `deg r < deg g`.
    pub fn right_divmod<C: CoeffField<Elem = E>>(&self, f: &C, g: &Self) -> Result<(Self, Self)> {
        let m = g.degree().ok_or(Error::DivisionByZero)?;
        let lead = g.lead().unwrap().clone();
        let mut r = self.c.clone();
        let mut q = vec![f.zero(); r.len().saturating_sub(m)];
        while r.len() > m {
            let n = r.len() - 1;
            if !f.is_zero(&r[n]) {
                let k = n - m;
                let c = f.mul(&r[n], &inv_or_err(f, &f.frob(&lead, k as u32))?);
                for (j, gj) in g.c.iter().enumerate() {
                    if !f.is_zero(gj) {
                        let t = f.mul(&c, &f.frob(gj, k as u32));
                        r[k + j] = f.sub(&r[k + j], &t);
                    }
                }
                q[k] = c;
            }
            r.pop();
        }
        Ok((Self::from_coeffs(f, q), Self::from_coeffs(f, r)))
    }

    /// `self = g · q + r` with `deg r < deg g`; needs a perfect field.
    pub fn left_divmod<C: CoeffField<Elem = E>>(&self, f: &C, g: &Self) -> Result<(Self, Self)> {
        if !f.is_perfect() {
            return Err(Error::NotPerfect("left division"));
        }
        let m = g.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = inv_or_err(f, g.lead().unwrap())?;
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some(n) = r.degree().filter(|&n| n >= m) {
            let c = f.frob_root(&f.mul(&lead_inv, r.lead().unwrap()), m as u32).unwrap();
            let term = Self::monomial(f, c, n - m);
            r = r.sub(f, &g.mul(f, &term));
            q = q.add(f, &term);
        }
        Ok((q, r))
    }

    /// Apply a coefficient map (e.g. a Galois automorphism or an embedding).
    pub fn map<F: CoeffField>(&self, f: &F, g: impl Fn(&E) -> F::Elem) -> SkewPoly<F::Elem> {
        SkewPoly::from_coeffs(f, self.c.iter().map(g).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Tower;
    use crate::skew::coeff::{FiniteCoeff, RatCoeff};

    fn f4() -> FiniteCoeff {
        let t = Tower::from_pqd(2, 1, 2).unwrap();
        FiniteCoeff::over_tower(&t, 2).unwrap()
    }

    #[test]
    fn defining_relation_and_example() {
        // over F_4 with q = 2: (τ+1)(τ+g) = τ² + (g²+1)τ + g
        let f = f4();
        let g = 2;
        let a = SkewPoly::from_coeffs(&f, vec![1, 1]);
        let b = SkewPoly::from_coeffs(&f, vec![g, 1]);
        let g2 = f.field.mul(g, g);
        assert_eq!(a.mul(&f, &b).coeffs(), &[g, f.field.add(g2, 1), 1]);
        let tau = SkewPoly::tau_pow(&f, 1);
        let c = SkewPoly::constant(&f, g);
        assert_eq!(tau.mul(&f, &c), SkewPoly::monomial(&f, g2, 1));
    }

    #[test]
    fn right_division_example() {
        // τ² = (τ - c^q)(τ + c) + c^(q+1)
        let t = Tower::from_pqd(3, 1, 2).unwrap();
        let f = FiniteCoeff::over_tower(&t, 2).unwrap();
        for c in 1..9u64 {
            let g = SkewPoly::from_coeffs(&f, vec![c, 1]);
            let (q, r) = SkewPoly::tau_pow(&f, 2).right_divmod(&f, &g).unwrap();
            let cq = f.frob(&c, 1);
            assert_eq!(q, SkewPoly::from_coeffs(&f, vec![f.neg(&cq), 1]));
            assert_eq!(r, SkewPoly::constant(&f, f.mul(&cq, &c)));
        }
    }

    #[test]
    fn left_division_reconstructs() {
        let f = f4();
        let a = SkewPoly::from_coeffs(&f, vec![1, 3, 2, 1, 3]);
        let g = SkewPoly::from_coeffs(&f, vec![2, 3, 2]);
        let (q, r) = a.left_divmod(&f, &g).unwrap();
        assert_eq!(g.mul(&f, &q).add(&f, &r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn rational_coefficients() {
        let t = Tower::from_pqd(3, 1, 2).unwrap();
        let f = RatCoeff::new(&t);
        let tt = f.t();
        let a = SkewPoly::from_coeffs(&f, vec![tt.clone(), f.zero(), f.one()]);
        let g = SkewPoly::from_coeffs(&f, vec![f.one(), tt.clone()]);
        let (q, r) = a.right_divmod(&f, &g).unwrap();
        assert_eq!(q.mul(&f, &g).add(&f, &r), a);
        assert!(a.left_divmod(&f, &g).is_err());
    }
}
