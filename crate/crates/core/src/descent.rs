//! Galois descent: cocycles, a constructive Hilbert 90 for GL_d(K[τ]), twisting, and
//! descent of a module to its field of moduli.

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::AlgElem;
use crate::base::{Embedding, Fe, Gf};
use crate::error::{Error, Result};
use crate::finite_char::AutGroup;
use crate::module::{Check, DsModule, FiniteModule};
use crate::skew::solve::{combine, intertwiners};
use crate::skew::{CoeffField, FiniteCoeff, SkewMat, SkewPoly};

/// `K / L` with `G = Gal(K/L)` generated by `σ: x ↦ x^|L|`, and the L-basis `α_j = w^j`.
#[derive(Clone, Debug)]
pub struct GaloisExtension {
    pub l: FiniteCoeff,
    pub k: FiniteCoeff,
    pub emb: Embedding,
    pub n: usize,
    pub basis: Vec<Fe>,
    coords: Vec<Vec<Fe>>,
}

impl GaloisExtension {
    pub fn new(l: &FiniteCoeff, n: u32) -> Result<GaloisExtension> {
        let (k, emb) = l.extend(n)?;
        Self::from_parts(l, k, emb)
    }

    pub fn from_parts(l: &FiniteCoeff, k: FiniteCoeff, emb: Embedding) -> Result<GaloisExtension> {
        let gk = &k.field;
        let n = (gk.degree() / l.field.degree()) as usize;
        let w = gk.generator().ok_or_else(|| Error::Bound("K has no tabulated generator".into()))?;
        let basis: Vec<Fe> = (0..n).map(|i| gk.pow(w, i as u64)).collect();
        let ls = l.field.size();
        let mut coords = vec![Vec::new(); gk.size() as usize];
        for idx in 0..gk.size() {
            let mut c = Vec::with_capacity(n);
            let mut x = idx;
            for _ in 0..n {
                c.push(x % ls);
                x /= ls;
            }
            let v = c.iter().zip(&basis).fold(0, |acc, (&ci, &b)| gk.add(acc, gk.mul(emb.apply(ci), b)));
            coords[v as usize] = c;
        }
        if coords.iter().any(|c| c.is_empty()) {
            return Err(Error::Invariant("powers of the generator are not an L-basis of K".into()));
        }
        Ok(GaloisExtension { l: l.clone(), k, emb, n, basis, coords })
    }

    /// `σ^i(x) = x^(|L|^i)`.
    pub fn sigma(&self, x: Fe, i: usize) -> Fe {
        self.k.field.frob_p(x, self.l.field.degree() as u64 * i as u64)
    }

    pub fn act(&self, m: &SkewMat<Fe>, i: usize) -> SkewMat<Fe> {
        m.galois_act(&self.k, |x| self.sigma(*x, i))
    }

    /// L-coordinates of `x` in the basis `α`.
    pub fn coords(&self, x: Fe) -> &[Fe] {
        &self.coords[x as usize]
    }

    /// `det(σ^i α_j) != 0`.
    pub fn dedekind(&self) -> bool {
        let m: Vec<Vec<Fe>> =
            (0..self.n).map(|i| self.basis.iter().map(|&a| self.sigma(a, i)).collect()).collect();
        field_det(&self.k.field, &m) != 0
    }

    pub fn lift(&self, m: &SkewMat<Fe>) -> SkewMat<Fe> {
        m.map(&self.k, |x| self.emb.apply(*x))
    }

    /// `m` with coefficients pulled back to L, if they all lie there.
    pub fn descend(&self, m: &SkewMat<Fe>) -> Option<SkewMat<Fe>> {
        let ok = m.entries().iter().flatten().all(|x| x.coeffs().iter().all(|&c| self.emb.preimage(c).is_some()));
        ok.then(|| m.map(&self.l, |x| self.emb.preimage(*x).unwrap()))
    }

    /// Left L[τ]-coordinates of `x ∈ K[τ]` in the basis `α`.
    fn to_l(&self, x: &SkewPoly<Fe>) -> Vec<SkewPoly<Fe>> {
        let deg = x.degree().map_or(0, |d| d + 1);
        let mut cs = vec![vec![0; deg]; self.n];
        for (i, &a) in x.coeffs().iter().enumerate() {
            let root = self.k.frob_root(&a, i as u32).unwrap();
            for (l, &c) in self.coords(root).iter().enumerate() {
                cs[l][i] = self.l.frob(&c, i as u32);
            }
        }
        cs.into_iter().map(|c| SkewPoly::from_coeffs(&self.l, c)).collect()
    }

    fn from_l(&self, ls: &[SkewPoly<Fe>]) -> SkewPoly<Fe> {
        let g = &self.k;
        let mut acc = SkewPoly::zero();
        for (l, x) in ls.iter().enumerate() {
            let lifted = x.map(g, |c| self.emb.apply(*c));
            acc = acc.add(g, &lifted.mul(g, &SkewPoly::constant(g, self.basis[l])));
        }
        acc
    }
}

fn field_rref(g: &Gf, m: &mut [Vec<Fe>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = g.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = g.mul(*x, inv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = g.sub(*x, g.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Determinant of a square matrix over a finite field.
pub fn field_det(g: &Gf, m: &[Vec<Fe>]) -> Fe {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a[i][c] != 0) else { return 0 };
        if pr != c {
            a.swap(c, pr);
            det = g.neg(det);
        }
        det = g.mul(det, a[c][c]);
        let inv = g.inv(a[c][c]).unwrap();
        for i in c + 1..n {
            let f = g.mul(a[i][c], inv);
            if f != 0 {
                for j in c..n {
                    let v = g.sub(a[i][j], g.mul(f, a[c][j]));
                    a[i][j] = v;
                }
            }
        }
    }
    det
}

/// Basis of `{x : m x = 0}` over a finite field.
pub fn field_kernel(g: &Gf, m: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let pivots = field_rref(g, &mut a);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = g.neg(a[r][free]);
            }
            v
        })
        .collect()
}

/// First pair `(i, j)` with `c_{i+j} != σ^i(c_j) c_i`, if any.
pub fn cocycle_check(ext: &GaloisExtension, c: &[SkewMat<Fe>]) -> Result<Option<(usize, usize)>> {
    let n = ext.n;
    if c.len() != n {
        return Err(Error::Config(format!("cocycle has {} values, |G| = {n}", c.len())));
    }
    for m in c {
        if !m.is_unit(&ext.k)? {
            return Err(Error::NotUnit);
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    Ok(pairs
        .par_iter()
        .find_first(|&&(i, j)| ext.act(&c[j], i).mul(&ext.k, &c[i]) != c[(i + j) % n])
        .copied())
}

/// `c_σ = σ(S)^{-1} S`.
pub fn coboundary(ext: &GaloisExtension, s: &SkewMat<Fe>) -> Result<Vec<SkewMat<Fe>>> {
    (0..ext.n)
        .map(|i| {
            let inv = ext.act(s, i).inverse(&ext.k)?.ok_or(Error::NotUnit)?;
            Ok(inv.mul(&ext.k, s))
        })
        .collect()
}

/// A random unit `U·L·D` (unitriangular factors with entries of degree `<= deg`).
pub fn random_unit(f: &FiniteCoeff, d: usize, deg: usize, rng: &mut impl Rng) -> SkewMat<Fe> {
    let size = f.field.size();
    let poly = |rng: &mut dyn rand::RngCore| {
        SkewPoly::from_coeffs(f, (0..=deg).map(|_| rng.gen_range(0..size)).collect())
    };
    let mut up = SkewMat::identity(f, d);
    let mut lo = SkewMat::identity(f, d);
    for i in 0..d {
        for j in 0..d {
            if i < j {
                up.set(i, j, poly(rng));
            } else if i > j {
                lo.set(i, j, poly(rng));
            }
        }
    }
    let diag: Vec<SkewPoly<Fe>> = (0..d).map(|_| SkewPoly::constant(f, rng.gen_range(1..size))).collect();
    up.mul(f, &lo).mul(f, &SkewMat::scalar_diag(f, &diag))
}

/// Rows of `Σ_σ σ(α_l) τ^k (row j of c_σ)`, in L[τ]-coordinates.
fn harvest(ext: &GaloisExtension, c: &[SkewMat<Fe>], top: usize) -> Vec<Vec<SkewPoly<Fe>>> {
    let f = &ext.k;
    let d = c[0].rows();
    let mut out = Vec::new();
    for k in 0..=top {
        for j in 0..d {
            for &a in &ext.basis {
                let mut row = Vec::with_capacity(d * ext.n);
                for col in 0..d {
                    let mut acc = SkewPoly::zero();
                    for (i, ci) in c.iter().enumerate() {
                        let m = SkewPoly::monomial(f, ext.sigma(a, i), k);
                        acc = acc.add(f, &m.mul(f, ci.get(j, col)));
                    }
                    row.extend(ext.to_l(&acc));
                }
                out.push(row);
            }
        }
    }
    out
}

/// `S ∈ GL_d(K[τ])` with `c_σ = σ(S)^{-1} S` for every σ.
pub fn hilbert90_solve(ext: &GaloisExtension, c: &[SkewMat<Fe>]) -> Result<SkewMat<Fe>> {
    if let Some((i, j)) = cocycle_check(ext, c)? {
        return Err(Error::Precondition(format!("cocycle condition fails at (σ^{i}, σ^{j})")));
    }
    let f = &ext.k;
    let l = &ext.l;
    let d = c[0].rows();
    let n = ext.n;
    let mut top = 2 * d;
    while top <= 64 {
        let rows = harvest(ext, c, top);
        let tri = SkewMat::from_rows(rows).triangular(l)?;
        let basis: Vec<Vec<SkewPoly<Fe>>> = tri
            .h
            .entries()
            .iter()
            .filter_map(|row| {
                let lead = row.iter().find(|x| !x.is_zero())?.lead()?;
                let inv = l.inv(lead)?;
                Some(row.iter().map(|x| x.lscale(l, &inv)).collect())
            })
            .collect();
        if basis.len() > d {
            return Err(Error::Invariant(format!("invariants have rank {} > d", basis.len())));
        }
        if basis.len() == d {
            let s = SkewMat::from_rows(
                basis.iter().map(|row| (0..d).map(|j| ext.from_l(&row[j * n..(j + 1) * n])).collect()).collect(),
            );
            if s.is_unit(f)? && (0..n).all(|i| ext.act(&s, i).mul(f, &c[i]) == s) {
                return Ok(s);
            }
        }
        top *= 2;
    }
    Err(Error::Invariant("no invariant basis found in the harvesting pool".into()))
}

/// The same module with coefficients mapped by a field embedding.
pub fn base_change(phi: &FiniteModule, field: &FiniteCoeff, g: impl Fn(Fe) -> Fe) -> FiniteModule {
    let m = |s: &SkewMat<Fe>| s.map(field, |x| g(*x));
    DsModule::from_generators(&phi.alg, field.clone(), g(phi.gamma_t), phi.char_a.clone(), m(&phi.phi_t), m(&phi.phi_h), m(&phi.phi_z))
}

/// `ψ = S φ S^{-1}`.
pub fn twist(phi: &FiniteModule, s: &SkewMat<Fe>) -> Result<FiniteModule> {
    let f = &phi.field;
    let inv = s.inverse(f)?.ok_or(Error::NotUnit)?;
    let c = |g: &SkewMat<Fe>| s.mul(f, g).mul(f, &inv);
    Ok(phi.with_generators(c(&phi.phi_t), c(&phi.phi_h), c(&phi.phi_z)))
}

/// `φ^{σ^i}`.
pub fn conjugate(phi: &FiniteModule, ext: &GaloisExtension, i: usize) -> FiniteModule {
    base_change(phi, &ext.k, |x| ext.sigma(x, i))
}

/// A unit `u` of least τ-degree with `u φ_g = ψ_g u`, first in enumeration order.
pub fn find_isomorphism(phi: &FiniteModule, psi: &FiniteModule, max_bound: usize, cap: u64) -> Result<Option<SkewMat<Fe>>> {
    let f = &phi.field;
    let p = f.field.p();
    let lhs = [phi.phi_t.clone(), phi.phi_h.clone(), phi.phi_z.clone()];
    let rhs = [psi.phi_t.clone(), psi.phi_h.clone(), psi.phi_z.clone()];
    for b in 1..=max_bound {
        let basis = intertwiners(f, &lhs, &rhs, b);
        let mut x = vec![0u32; basis.len()];
        let mut tried = 0u64;
        while tried < cap {
            let Some(pos) = x.iter().position(|&v| v + 1 < p) else { break };
            x[pos] += 1;
            x[..pos].iter_mut().for_each(|v| *v = 0);
            tried += 1;
            let u = combine(f, &basis, &x);
            if u.is_unit(f)? {
                return Ok(Some(u));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct Descent {
    /// the L-form
    pub module: FiniteModule,
    /// `ψ = S φ S^{-1}` over K'
    pub s: SkewMat<Fe>,
    pub aut_order: u64,
    /// [K' : K]
    pub ext_degree: u32,
    pub checks: Vec<Check>,
}

/// Descent knobs.
#[derive(Clone, Copy, Debug)]
pub struct DescentBounds {
    pub aut_cap: u64,
    pub iso_degree: usize,
    pub iso_cap: u64,
    pub max_field: u64,
}

impl Default for DescentBounds {
    fn default() -> Self {
        DescentBounds { aut_cap: 1 << 12, iso_degree: 8, iso_cap: 1 << 14, max_field: 1 << 20 }
    }
}

fn lambdas(phi: &FiniteModule, ext: &GaloisExtension, b: &DescentBounds) -> Result<Vec<SkewMat<Fe>>> {
    let f = &phi.field;
    let mut out = vec![SkewMat::identity(f, phi.d())];
    for i in 1..ext.n {
        let target = conjugate(phi, ext, i);
        let u = find_isomorphism(phi, &target, b.iso_degree, b.iso_cap)?
            .ok_or_else(|| Error::Precondition(format!("no isomorphism φ -> φ^(σ^{i}) found")))?;
        out.push(u);
    }
    Ok(out)
}

fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Normalize `λ_σ` by automorphisms into a strict cocycle, solve Hilbert 90 and twist.
/// `mu` are the scalars attached to each `λ_σ`; `correct(ζ)` is the automorphism scalar
/// that cancels the root-of-unity defect `ζ`.
fn normalize_and_descend(
    phi: &FiniteModule,
    ext: &GaloisExtension,
    aut: &AutGroup,
    lams: &[SkewMat<Fe>],
    mu: &[Fe],
    correct: impl Fn(&Gf, Fe) -> Fe,
    b: &DescentBounds,
) -> Result<Descent> {
    let gk = &ext.k.field;
    let n = ext.n;
    let h = aut.order;
    let x: Vec<Fe> = mu.iter().map(|&m| gk.pow(m, h)).collect();
    for i in 0..n {
        for j in 0..n {
            if x[(i + j) % n] != gk.mul(ext.sigma(x[j], i), x[i]) {
                return Err(Error::Invariant("μ^h is not a cocycle".into()));
            }
        }
    }
    // classical Hilbert 90: x_σ = b / σ(b)
    let bb = (1..gk.size())
        .map(|y| (0..n).fold(0, |acc, j| gk.add(acc, gk.mul(x[j], ext.sigma(y, j)))))
        .find(|&v| v != 0)
        .ok_or_else(|| Error::Invariant("Poincaré series vanishes identically".into()))?;
    // a = (b ℓ)^{1/h} for some ℓ ∈ L^×, in the least extension K' of K that has one
    let lsize = ext.l.field.size();
    let mut found = None;
    'ext: for kdeg in 1u32.. {
        if gk.size().checked_pow(kdeg).map_or(true, |s| s > b.max_field) {
            break;
        }
        let (big, e2) = ext.k.extend(kdeg)?;
        let g2 = &big.field;
        let order = g2.size() - 1;
        for ell in 1..lsize {
            let y = e2.apply(gk.mul(bb, ext.emb.apply(ell)));
            let s = g2.log(y).unwrap();
            let gg = gcd(h, order);
            if s % gg != 0 {
                continue;
            }
            let m = order / gg;
            let t = (s / gg) % m * inv_mod_u64((h / gg) % m, m).unwrap_or(0) % m;
            let a = g2.exp(t).unwrap();
            if g2.pow(a, h) == y {
                found = Some((kdeg, big, e2, a));
                break 'ext;
            }
        }
    }
    let (kdeg, big, e2, a) = found.ok_or_else(|| Error::Bound("h-th root needs a field beyond the cap".into()))?;
    let ext2 = GaloisExtension::from_parts(&ext.l, big.clone(), ext.emb.then(&e2)?)?;
    let g2 = &big.field;
    let phi2 = base_change(phi, &big, |v| e2.apply(v));
    let lift = |m: &SkewMat<Fe>| m.map(&big, |v| e2.apply(*v));
    let units: Vec<SkewMat<Fe>> = aut.units.iter().map(lift).collect();
    let mut c = Vec::with_capacity(ext2.n);
    for i in 0..ext2.n {
        let nu = g2.mul(a, g2.inv(ext2.sigma(a, i)).unwrap());
        let zeta = g2.mul(e2.apply(mu[i % n]), g2.inv(nu).unwrap());
        if g2.pow(zeta, h) != 1 {
            return Err(Error::Invariant("defect is not an h-th root of unity".into()));
        }
        let eps = correct(g2, zeta);
        let alpha = units
            .iter()
            .find(|u| u.partial(&big)[0][0] == eps)
            .ok_or_else(|| Error::Invariant("no automorphism with the required ∂".into()))?;
        c.push(lift(&lams[i % n]).mul(&big, alpha));
    }
    let s = hilbert90_solve(&ext2, &c)?;
    let psi = twist(&phi2, &s)?;
    let gens = [&psi.phi_t, &psi.phi_h, &psi.phi_z];
    let down: Option<Vec<SkewMat<Fe>>> = gens.iter().map(|m| ext2.descend(m)).collect();
    let down = down.ok_or_else(|| Error::Invariant("twisted module is not defined over L".into()))?;
    let gamma = ext2.emb.preimage(psi.gamma_t).ok_or(Error::FieldMismatch)?;
    let module = DsModule::from_generators(
        &phi.alg,
        ext.l.clone(),
        gamma,
        phi.char_a.clone(),
        down[0].clone(),
        down[1].clone(),
        down[2].clone(),
    );
    let mut checks = module.relation_checks();
    checks.push(module.partial_check());
    checks.push(Check::flag("S unit", s.is_unit(&big)?));
    checks.push(Check::flag(
        "S phi = psi S",
        [(&phi2.phi_t, &psi.phi_t), (&phi2.phi_h, &psi.phi_h), (&phi2.phi_z, &psi.phi_z)]
            .iter()
            .all(|(x, y)| s.mul(&big, x) == y.mul(&big, &s)),
    ));
    checks.push(Check::flag("psi^sigma = psi", gens.iter().all(|m| ext2.act(m, 1) == **m)));
    Ok(Descent { module, s, aut_order: h, ext_degree: kdeg, checks })
}

/// L-form of `φ` (over `ext.k`) when `gcd(d, q^r - 1) = 1` for `Aut(φ) ≅ F_{q^r}^×`.
pub fn descend_to_moduli_field(phi: &FiniteModule, ext: &GaloisExtension, b: &DescentBounds) -> Result<Descent> {
    let d = phi.d() as u64;
    let aut = phi.aut_group(b.aut_cap)?;
    if aut.r.is_none() || !aut.scalar_partial {
        return Err(Error::Invariant(format!("automorphism group of order {} is not F_q^r^x", aut.order)));
    }
    let h = aut.order;
    if gcd(d, h) != 1 {
        return Err(Error::Precondition(format!("gcd(d, q^r - 1) = gcd({d}, {h}) != 1")));
    }
    let lams = lambdas(phi, ext, b)?;
    let gk = &ext.k.field;
    let mu: Vec<Fe> = lams.iter().map(|u| field_det(gk, &u.partial(&ext.k))).collect();
    let dinv = inv_mod_u64(d % h.max(1), h.max(1)).unwrap_or(0);
    normalize_and_descend(phi, ext, &aut, &lams, &mu, |g, z| g.pow(g.inv(z).unwrap(), dinv), b)
}

/// `∂_{φ,K}(e)` for `e = Σ b_i ⊗ ℓ_i ∈ O_D ⊗ L`.
pub fn partial_of(phi: &FiniteModule, ext: &GaloisExtension, e: &[(AlgElem, Fe)]) -> Result<Vec<Vec<Fe>>> {
    let g = &ext.k.field;
    let d = phi.d();
    let mut acc = vec![vec![0; d]; d];
    for (b, ell) in e {
        let m = phi.evaluate(b)?.partial(&phi.field);
        let s = ext.emb.apply(*ell);
        for i in 0..d {
            for j in 0..d {
                acc[i][j] = g.add(acc[i][j], g.mul(s, m[i][j]));
            }
        }
    }
    Ok(acc)
}

/// `e = ℓ + z` with `ℓ ∈ L` the first value making `ker ∂(e)` a line.
pub fn splitting_element(phi: &FiniteModule, ext: &GaloisExtension) -> Result<Option<Vec<(AlgElem, Fe)>>> {
    let a = &phi.alg;
    for ell in 0..ext.l.field.size() {
        let e = vec![(a.one(), ell), (a.z(), 1)];
        if field_kernel(&ext.k.field, &partial_of(phi, ext, &e)?).len() == 1 {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// L-form of `φ` through a line `V = ker ∂(e)`; no coprimality condition.
pub fn descend_with_splitting(
    phi: &FiniteModule,
    ext: &GaloisExtension,
    e: &[(AlgElem, Fe)],
    b: &DescentBounds,
) -> Result<Descent> {
    let gk = &ext.k.field;
    let ker = field_kernel(gk, &partial_of(phi, ext, e)?);
    if ker.len() != 1 {
        return Err(Error::Precondition(format!("dim V(φ, e) = {}, need 1", ker.len())));
    }
    let omega = &ker[0];
    let aut = phi.aut_group(b.aut_cap)?;
    if aut.r.is_none() || !aut.scalar_partial {
        return Err(Error::Invariant(format!("automorphism group of order {} is not F_q^r^x", aut.order)));
    }
    let lams = lambdas(phi, ext, b)?;
    let mut mu = Vec::with_capacity(ext.n);
    for (i, u) in lams.iter().enumerate() {
        let m = u.partial(&ext.k);
        let v: Vec<Fe> = m.iter().map(|row| row.iter().zip(omega).fold(0, |s, (&x, &y)| gk.add(s, gk.mul(x, y)))).collect();
        let w: Vec<Fe> = omega.iter().map(|&x| ext.sigma(x, i)).collect();
        let j = w.iter().position(|&x| x != 0).unwrap();
        let scale = gk.mul(v[j], gk.inv(w[j]).unwrap());
        if v.iter().zip(&w).any(|(&x, &y)| x != gk.mul(scale, y)) {
            return Err(Error::Invariant("∂λ_σ does not map V to σ(V)".into()));
        }
        mu.push(scale);
    }
    normalize_and_descend(phi, ext, &aut, &lams, &mu, |g, z| g.inv(z).unwrap(), b)
}
