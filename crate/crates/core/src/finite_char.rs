//! Frobenius, endomorphism rings, automorphisms and supersingularity over finite fields.

use std::collections::HashSet;

use serde::Serialize;

use crate::base::amat::{self, PolyMat};
use crate::base::{linalg, Fe, Poly};
use crate::error::{Error, Result};
use crate::module::FiniteModule;
use crate::skew::solve::{combine, intertwiners, vectorize};
use crate::skew::{CoeffField, SkewMat, SkewPoly};

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusData {
    /// π = τ^n
    pub n: u32,
    /// [F̃ : F]
    pub degree: usize,
    /// a_0, .., a_{k-1} with π^k + Σ φ_{a_i} π^i = 0
    pub relation: Vec<String>,
    #[serde(skip)]
    pub coeffs: Vec<Poly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Supersingularity {
    pub prime: String,
    /// φ[p] connected
    pub connected: bool,
    /// some π^c lies in φ(A)
    pub pi_power: bool,
    pub pi_exponent: Option<usize>,
    /// rank_A End = d^2
    pub rank: bool,
    pub agree: bool,
    pub supersingular: bool,
    pub evidence: String,
}

#[derive(Clone, Debug)]
pub struct EndRing {
    pub bound: usize,
    pub fp_basis: Vec<SkewMat<Fe>>,
    pub fq_dim: usize,
    /// Hermite basis of the A-lattice, in φ_T-adic coordinates
    pub lattice: PolyMat,
    pub a_basis: Vec<SkewMat<Fe>>,
    pub a_rank: usize,
    pub closed: bool,
    /// every basis element has finite kernel
    pub isogenies: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutGroup {
    pub order: u64,
    /// order = q^r - 1
    pub r: Option<u32>,
    pub cyclic: bool,
    /// ∂ is injective with scalar image
    pub scalar_partial: bool,
    pub degree_searched: usize,
    #[serde(skip)]
    pub units: Vec<SkewMat<Fe>>,
}

/// φ_T-adic coordinates: `u = Σ_k R_k φ_T^k` with `deg R_k < d`, then F_q-coordinates in L.
struct Coords {
    rho: SkewPoly<Fe>,
    table: Vec<Vec<Fe>>,
    basis: Vec<Fe>,
}

impl FiniteModule {
    /// `n = [L : F_q]`, so that π = τ^n is the Frobenius.
    pub fn frobenius_exponent(&self) -> u32 {
        self.field.degree_over_fq()
    }

    pub fn frobenius(&self) -> SkewMat<Fe> {
        let f = &self.field;
        SkewMat::scalar_diag(f, &vec![SkewPoly::tau_pow(f, self.frobenius_exponent() as usize); self.d()])
    }

    fn fq_digit_basis(&self) -> Vec<Fe> {
        let p = self.field.field.p() as u64;
        (0..self.field.e).map(|l| p.pow(l)).collect()
    }

    /// F_p-coefficients `x` with `Σ x_i terms_i = target`.
    fn solve_combination(&self, terms: &[SkewMat<Fe>], target: &SkewMat<Fe>) -> Option<Vec<u32>> {
        let len = terms.iter().chain([target]).filter_map(|m| m.degree()).max().unwrap_or(0) + 1;
        let cols: Vec<Vec<u32>> = terms.iter().map(|t| vectorize(&self.field, t, len)).collect();
        linalg::solve(&cols, &vectorize(&self.field, target, len), self.field.field.p())
    }

    /// Terms `φ_{β T^j}` for `j < top` and β in the F_p-basis of F_q, each right-multiplied by `right`.
    fn a_terms(&self, top: usize, right: &SkewMat<Fe>) -> Vec<SkewMat<Fe>> {
        let mut out = Vec::new();
        for j in 0..top {
            for &b in &self.fq_digit_basis() {
                out.push(self.eval_a(&Poly::monomial(b, j)).mul(&self.field, right));
            }
        }
        out
    }

    fn decode_a(&self, x: &[u32], top: usize) -> Poly {
        let fq = &self.alg.tower.fq;
        let e = self.field.e as usize;
        Poly::new((0..top).map(|j| fq.from_digits(&x[j * e..(j + 1) * e])).collect())
    }

    /// Minimal relation of π over φ(A).
    pub fn frobenius_data(&self) -> Result<FrobeniusData> {
        let f = &self.field;
        let d = self.d();
        let n = self.frobenius_exponent() as usize;
        let pi = self.frobenius();
        let mut pows = vec![SkewMat::identity(f, d)];
        for k in 1..=d {
            pows.push(pows[k - 1].mul(f, &pi));
            let tops: Vec<usize> = (0..k).map(|i| (n * (k - i)).div_ceil(d) + 2).collect();
            let terms: Vec<SkewMat<Fe>> = (0..k).flat_map(|i| self.a_terms(tops[i], &pows[i])).collect();
            let Some(x) = self.solve_combination(&terms, &pows[k].neg(f)) else { continue };
            let mut coeffs = Vec::new();
            let mut at = 0;
            for &top in &tops {
                let w = top * f.e as usize;
                coeffs.push(self.decode_a(&x[at..at + w], top));
                at += w;
            }
            let mut acc = pows[k].clone();
            for (a, pw) in coeffs.iter().zip(&pows) {
                acc = acc.add(f, &self.eval_a(a).mul(f, pw));
            }
            if !acc.is_zero() {
                return Err(Error::Invariant("Frobenius relation does not vanish".into()));
            }
            if d % k != 0 {
                return Err(Error::Invariant(format!("[F~:F] = {k} does not divide d = {d}")));
            }
            return Ok(FrobeniusData {
                n: n as u32,
                degree: k,
                relation: coeffs.iter().map(|a| a.display().to_string()).collect(),
                coeffs,
            });
        }
        Err(Error::Bound("no relation of π over φ(A) of degree <= d".into()))
    }

    /// Least `c <= max_c` with `π^c = φ_a`, and that `a`.
    pub fn pi_power_in_a(&self, max_c: usize) -> Option<(usize, Poly)> {
        let f = &self.field;
        let d = self.d();
        let n = self.frobenius_exponent() as usize;
        let id = SkewMat::identity(f, d);
        let base = self.a_terms(n * max_c / d + 1, &id);
        let per = f.e as usize;
        for c in 1..=max_c {
            let top = n * c / d + 1;
            let target = SkewMat::scalar_diag(f, &vec![SkewPoly::tau_pow(f, n * c); d]);
            if let Some(x) = self.solve_combination(&base[..top * per], &target) {
                return Some((c, self.decode_a(&x, top)));
            }
        }
        None
    }

    /// π commutes with φ_b.
    pub fn frobenius_central(&self, b: &SkewMat<Fe>) -> bool {
        let f = &self.field;
        let pi = self.frobenius();
        pi.mul(f, b) == b.mul(f, &pi)
    }

    fn coords(&self) -> Result<Coords> {
        let f = &self.field;
        let d = self.d();
        let rho = self.phi_t.get(0, 0).clone();
        if rho.degree() != Some(d) || self.phi_t != SkewMat::scalar_diag(f, &vec![rho.clone(); d]) {
            return Err(Error::Precondition("φ_T must be a scalar diagonal of degree d".into()));
        }
        let g = &f.field;
        let n = f.degree_over_fq() as usize;
        let q = f.q();
        let w = g.generator().ok_or_else(|| Error::Config("L has no tabulated generator".into()))?;
        let basis: Vec<Fe> = (0..n).map(|i| g.pow(w, i as u64)).collect();
        let mut table = vec![Vec::new(); g.size() as usize];
        for idx in 0..g.size() {
            let mut c = Vec::with_capacity(n);
            let mut x = idx;
            for _ in 0..n {
                c.push(x % q);
                x /= q;
            }
            let v = c.iter().zip(&basis).fold(0, |acc, (&ci, &b)| g.add(acc, g.mul(f.from_fq(ci), b)));
            table[v as usize] = c;
        }
        if table.iter().any(|c| c.is_empty()) {
            return Err(Error::Invariant("powers of the generator are not an F_q-basis of L".into()));
        }
        Ok(Coords { rho, table, basis })
    }

    fn to_avec(&self, c: &Coords, u: &SkewMat<Fe>) -> Result<Vec<Poly>> {
        let f = &self.field;
        let d = self.d();
        let n = c.basis.len();
        let mut out = Vec::with_capacity(d * d * d * n);
        for row in u.entries() {
            for x in row {
                let mut digits = Vec::new();
                let mut rest = x.clone();
                while !rest.is_zero() {
                    let (qt, r) = rest.right_divmod(f, &c.rho)?;
                    digits.push(r);
                    rest = qt;
                }
                for t in 0..d {
                    for i in 0..n {
                        out.push(Poly::new(digits.iter().map(|r| c.table[r.coeff(f, t) as usize][i]).collect()));
                    }
                }
            }
        }
        Ok(out)
    }

    fn from_avec(&self, c: &Coords, v: &[Poly]) -> SkewMat<Fe> {
        let f = &self.field;
        let g = &f.field;
        let d = self.d();
        let n = c.basis.len();
        let top = v.iter().filter_map(|p| p.degree()).max().map_or(0, |x| x + 1);
        let mut rho_pows = vec![SkewPoly::one(f)];
        for k in 1..top {
            rho_pows.push(rho_pows[k - 1].mul(f, &c.rho));
        }
        let mut m = SkewMat::zero(d, d);
        for a in 0..d {
            for b in 0..d {
                let base = (a * d + b) * d * n;
                let mut acc = SkewPoly::zero();
                for (k, rk) in rho_pows.iter().enumerate() {
                    let coeffs: Vec<Fe> = (0..d)
                        .map(|t| {
                            (0..n).fold(0, |s, i| {
                                g.add(s, g.mul(f.from_fq(v[base + t * n + i].coeff(k)), c.basis[i]))
                            })
                        })
                        .collect();
                    acc = acc.add(f, &SkewPoly::from_coeffs(f, coeffs).mul(f, rk));
                }
                m.set(a, b, acc);
            }
        }
        m
    }

    fn generators(&self) -> [SkewMat<Fe>; 3] {
        [self.phi_t.clone(), self.phi_h.clone(), self.phi_z.clone()]
    }

    /// End_L(φ) from the endomorphisms of τ-degree `< bound` (default `3dn`), doubling the
    /// bound up to three times while the A-span is not closed under multiplication.
    pub fn end_ring(&self, bound: Option<usize>) -> Result<EndRing> {
        let f = &self.field;
        let fq = &self.alg.tower.fq;
        let d = self.d();
        let c = self.coords()?;
        let gens = self.generators();
        let mut b = bound.unwrap_or(3 * d * self.frobenius_exponent() as usize);
        let mut attempt = 0;
        loop {
            let fp_basis = intertwiners(f, &gens, &gens, b);
            let vecs: PolyMat = fp_basis.iter().map(|u| self.to_avec(&c, u)).collect::<Result<_>>()?;
            let lattice = amat::hermite_rows(fq, &vecs);
            let a_basis: Vec<SkewMat<Fe>> = lattice.iter().map(|v| self.from_avec(&c, v)).collect();
            let mut closed = true;
            'outer: for x in &a_basis {
                for y in &a_basis {
                    if amat::member(fq, &lattice, &self.to_avec(&c, &x.mul(f, y))?).is_none() {
                        closed = false;
                        break 'outer;
                    }
                }
            }
            if closed || attempt == 3 {
                let a_rank = lattice.len();
                if a_rank > d * d {
                    return Err(Error::Invariant(format!("End has A-rank {a_rank} > d^2")));
                }
                let isogenies = a_basis.iter().all(|u| u.scheme_order_exp(f).is_ok());
                return Ok(EndRing {
                    bound: b,
                    fq_dim: fp_basis.len() / f.e as usize,
                    fp_basis,
                    lattice,
                    a_basis,
                    a_rank,
                    closed,
                    isogenies,
                });
            }
            attempt += 1;
            b *= 2;
        }
    }

    /// `u` commutes with φ and lies in the A-span of `end`.
    pub fn end_contains(&self, end: &EndRing, u: &SkewMat<Fe>) -> Result<bool> {
        let c = self.coords()?;
        Ok(self.commutes(u) && amat::member(&self.alg.tower.fq, &end.lattice, &self.to_avec(&c, u)?).is_some())
    }

    /// Regular-trace discriminant of the A-order spanned by `basis` (which must be closed
    /// under multiplication and of rank d^2).
    pub fn order_discriminant(&self, basis: &[SkewMat<Fe>]) -> Result<Poly> {
        let f = &self.field;
        let fq = &self.alg.tower.fq;
        let d = self.d();
        if d as u32 % fq.p() == 0 {
            return Err(Error::Precondition("regular trace vanishes when p divides d".into()));
        }
        let c = self.coords()?;
        let vecs: PolyMat = basis.iter().map(|u| self.to_avec(&c, u)).collect::<Result<_>>()?;
        let lattice = amat::hermite_rows(fq, &vecs);
        let k = lattice.len();
        if k != d * d {
            return Err(Error::Precondition(format!("order has A-rank {k}, not d^2")));
        }
        let elems: Vec<SkewMat<Fe>> = lattice.iter().map(|v| self.from_avec(&c, v)).collect();
        let mut prod = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = self.to_avec(&c, &elems[i].mul(f, &elems[j]))?;
                prod[i][j] = amat::member(fq, &lattice, &v)
                    .ok_or_else(|| Error::Invariant("basis is not closed under multiplication".into()))?;
            }
        }
        let tr: Vec<Poly> =
            (0..k).map(|m| (0..k).fold(Poly::zero(), |acc, l| acc.add(fq, &prod[m][l][l]))).collect();
        let gram: PolyMat = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).fold(Poly::zero(), |acc, m| acc.add(fq, &prod[i][j][m].mul(fq, &tr[m]))))
                    .collect()
            })
            .collect();
        let det = amat::det(fq, &gram);
        if det.is_zero() {
            return Err(Error::Invariant("degenerate trace form".into()));
        }
        Ok(det.monic(fq))
    }

    pub fn end_discriminant(&self, end: &EndRing) -> Result<Poly> {
        self.order_discriminant(&end.a_basis)
    }

    /// Units of End found by enumerating endomorphisms of degree `<= D` while the space
    /// has at most `cap` elements.
    pub fn aut_group(&self, cap: u64) -> Result<AutGroup> {
        let f = &self.field;
        let g = &f.field;
        let p = g.p() as u64;
        let d = self.d();
        let gens = self.generators();
        let max_deg = d * self.frobenius_exponent() as usize;
        let mut units: Vec<SkewMat<Fe>> = Vec::new();
        let mut searched = 0;
        for deg in 0..=max_deg {
            let basis = intertwiners(f, &gens, &gens, deg + 1);
            let size = (basis.len() as u32).checked_mul(1).and_then(|k| p.checked_pow(k));
            if size.map_or(true, |s| s > cap) {
                if deg == 0 {
                    return Err(Error::Bound("constant endomorphisms exceed the enumeration cap".into()));
                }
                break;
            }
            units.clear();
            let mut x = vec![0u32; basis.len()];
            loop {
                let Some(pos) = x.iter().position(|&v| v + 1 < p as u32) else { break };
                x[pos] += 1;
                x[..pos].iter_mut().for_each(|v| *v = 0);
                let u = combine(f, &basis, &x);
                if u.is_unit(f)? {
                    units.push(u);
                }
            }
            searched = deg;
        }
        let order = units.len() as u64;
        let q = f.q();
        let r = (1..=d as u32).find(|&r| d as u32 % r == 0 && q.pow(r) - 1 == order);
        let id = SkewMat::identity(f, d);
        let cyclic = units.iter().any(|u| {
            let mut acc = u.clone();
            let mut k = 1;
            while acc != id && k <= order {
                acc = acc.mul(f, u);
                k += 1;
            }
            k == order
        });
        let mut images = HashSet::new();
        let scalar_partial = units.iter().all(|u| {
            let m = u.partial(f);
            let c = m[0][0];
            let scalar = (0..d).all(|i| (0..d).all(|j| m[i][j] == if i == j { c } else { 0 }));
            let faithful = c != 1 || *u == id;
            scalar && faithful && images.insert(c)
        });
        Ok(AutGroup { order, r, cyclic, scalar_partial, degree_searched: searched, units })
    }

    /// The three supersingularity criteria at the characteristic `p`.
    pub fn supersingularity(&self, p: &Poly, max_c: Option<usize>, end: Option<&EndRing>) -> Result<Supersingularity> {
        let f = &self.field;
        let fq = &self.alg.tower.fq;
        if p.monic(fq) != self.char_a {
            return Err(Error::Precondition(format!("({}) is not the characteristic", p.display())));
        }
        let d = self.d();
        let connected = self.eval_a(p).separable_rank_exp(f)? == 0;
        let bound = max_c.unwrap_or(d * (f.q().pow(d as u32) as usize - 1));
        let found = self.pi_power_in_a(bound);
        let owned;
        let end = match end {
            Some(e) => e,
            None => {
                owned = self.end_ring(None)?;
                &owned
            }
        };
        let rank = end.a_rank == d * d;
        let pi_power = found.is_some();
        let agree = connected == pi_power && pi_power == rank;
        if !agree {
            if !pi_power && connected {
                return Err(Error::Bound(format!("no power π^c with c <= {bound} lies in A")));
            }
            return Err(Error::Invariant(format!(
                "criteria disagree: connected={connected} pi_power={pi_power} rank={rank}"
            )));
        }
        let evidence = match &found {
            Some((c, a)) => format!("π^{c} = φ_({})", a.display()),
            None => format!("ordinary (bounded evidence, c <= {bound})"),
        };
        Ok(Supersingularity {
            prime: format!("({})", p.display()),
            connected,
            pi_power,
            pi_exponent: found.map(|x| x.0),
            rank,
            agree,
            supersingular: connected,
            evidence,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{maximal_discriminant, CyclicAlgebra, Place, QmodZ};
    use crate::base::Tower;
    use crate::module::FieldSpec;

    fn alg32() -> CyclicAlgebra {
        CyclicAlgebra::new(&Tower::from_pqd(3, 1, 2).unwrap(), &Poly::new(vec![2, 0, 1])).unwrap()
    }

    #[test]
    fn supersingular_quaternion_end_ring() {
        let a = alg32();
        let fq = &a.tower.fq;
        let phi = FiniteModule::standard_finite(&a, 2, 0).unwrap();
        let fr = phi.frobenius_data().unwrap();
        assert_eq!(fr.degree, 1);
        assert_eq!(fr.coeffs[0], Poly::new(vec![0, 2]));
        let end = phi.end_ring(None).unwrap();
        assert!(end.closed && end.isogenies);
        assert_eq!(end.a_rank, 4);
        let f = &phi.field;
        let h = phi.phi_h.clone();
        let kappa = phi.phi_z.mul(f, &SkewMat::scalar_diag(f, &vec![SkewPoly::tau_pow(f, 1); 2]));
        assert!(!phi.end_contains(&end, &h).unwrap());
        let hi = SkewMat::scalar_diag(f, &vec![SkewPoly::constant(f, f.from_fqd(a.tower.h).unwrap()); 2]);
        assert!(phi.end_contains(&end, &hi).unwrap());
        assert!(phi.end_contains(&end, &kappa).unwrap());
        let disc = phi.end_discriminant(&end).unwrap();
        let tr = Poly::t().mul(fq, &a.r);
        assert_eq!(disc, tr.mul(fq, &tr));
        let half = QmodZ::new(1, 2);
        let inv: Vec<(Place, QmodZ)> = [vec![0, 1], vec![1, 1], vec![2, 1]]
            .into_iter()
            .map(|c| (Place::Finite(Poly::new(c)), half))
            .chain([(Place::Infinity, half)])
            .collect();
        assert_eq!(maximal_discriminant(fq, 2, &inv), disc);
        let aut = phi.aut_group(1 << 12).unwrap();
        assert_eq!(aut.order, 8);
        assert_eq!(aut.r, Some(2));
        assert!(aut.cyclic && aut.scalar_partial);
        let s = phi.supersingularity(&Poly::t(), None, Some(&end)).unwrap();
        assert!(s.supersingular && s.agree && s.pi_exponent == Some(1));
        assert!(phi.frobenius_central(&phi.phi_z));
    }

    #[test]
    fn sub_order_discriminant() {
        let a = alg32();
        let fq = &a.tower.fq;
        let phi = FiniteModule::standard_finite(&a, 2, 0).unwrap();
        let f = &phi.field;
        let hi = SkewMat::scalar_diag(f, &vec![SkewPoly::constant(f, f.from_fqd(a.tower.h).unwrap()); 2]);
        let kappa = phi.phi_z.mul(f, &SkewMat::scalar_diag(f, &vec![SkewPoly::tau_pow(f, 1); 2]));
        let id = SkewMat::identity(f, 2);
        let basis = [id.clone(), hi.clone(), kappa.clone(), hi.mul(f, &kappa)];
        let disc = phi.order_discriminant(&basis).unwrap();
        let rt = a.r.mul(fq, &Poly::t());
        assert_eq!(disc, rt.mul(fq, &rt));
    }

    #[test]
    fn ordinary_quadratic() {
        let a = alg32();
        let p = Poly::new(vec![1, 0, 1]);
        let FieldSpec::Finite { m, t0 } = FieldSpec::for_characteristic(&a, &p).unwrap() else { panic!() };
        let phi = FiniteModule::standard_finite(&a, m, t0).unwrap();
        assert_eq!(phi.frobenius_data().unwrap().degree, 2);
        let end = phi.end_ring(None).unwrap();
        assert_eq!(end.a_rank, 2);
        let s = phi.supersingularity(&p, None, Some(&end)).unwrap();
        assert!(!s.supersingular && s.agree);
        let aut = phi.aut_group(1 << 12).unwrap();
        assert!(aut.r.is_some() && aut.cyclic && aut.scalar_partial);
    }
}

#[cfg(test)]
mod cubic {
    use super::*;
    use crate::algebra::CyclicAlgebra;
    use crate::base::Tower;

    #[test]
    fn cubic_supersingular_at_t() {
        let a = CyclicAlgebra::new(&Tower::from_pqd(3, 1, 3).unwrap(), &Poly::new(vec![1, 2, 2, 0, 2, 1, 1])).unwrap();
        let phi = FiniteModule::standard_finite(&a, 3, 0).unwrap();
        assert_eq!(phi.frobenius_data().unwrap().degree, 1);
        let end = phi.end_ring(None).unwrap();
        assert!(end.closed);
        assert_eq!(end.a_rank, 9);
        let s = phi.supersingularity(&Poly::t(), None, Some(&end)).unwrap();
        assert!(s.supersingular && s.agree);
        // p = 3 divides d: the regular trace form is identically zero
        assert!(phi.end_discriminant(&end).is_err());
        let aut = phi.aut_group(1 << 12).unwrap();
        assert_eq!((aut.order, aut.r), (26, Some(3)));
    }
}
