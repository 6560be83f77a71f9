//! Drinfeld-Stuhler O_D-modules `φ: O_D -> M_d(L[τ])` given by the images of the
//! generators T, h, z.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElem, CyclicAlgebra};
use crate::base::factor::roots;
use crate::base::{Fe, Poly};
use crate::error::{Error, Result};
use crate::skew::{CoeffField, FiniteCoeff, RatCoeff, SkewMat, SkewPoly};

/// Choice of A-field: a finite `L = F_{q^m}` with `γ(T) = t0`, or F_{q^d}(T) with `γ(T) = T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Finite { m: u32, t0: Fe },
    Generic,
}

impl FieldSpec {
    /// The smallest finite field containing F_{q^d} and a root of the prime `p`,
    /// with `γ(T)` the least such root.
    pub fn for_characteristic(alg: &CyclicAlgebra, p: &Poly) -> Result<FieldSpec> {
        let deg = p.degree().filter(|&k| k > 0).ok_or_else(|| Error::Config("characteristic must be a prime".into()))?;
        if !crate::base::factor::is_irreducible(&alg.tower.fq, p) {
            return Err(Error::Config(format!("{} is not irreducible", p.display())));
        }
        let d = alg.d() as u32;
        let m = lcm(d, deg as u32);
        let l = FiniteCoeff::over_tower(&alg.tower, m)?;
        let pl = p.map(|c| l.from_fq(c));
        let t0 = *roots(&l.field, &pl)?.first().ok_or_else(|| Error::Invariant("prime has no root".into()))?;
        Ok(FieldSpec::Finite { m, t0 })
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Check {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        Check { name: name.into(), pass: lhs == rhs, lhs, rhs }
    }
    pub fn flag(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), lhs: ok.to_string(), rhs: "true".into(), pass: ok }
    }
}

#[derive(Clone, Debug)]
pub struct DsModule<C: CoeffField> {
    pub alg: CyclicAlgebra,
    pub field: C,
    /// γ(T)
    pub gamma_t: C::Elem,
    /// The A-characteristic of L (zero for generic characteristic).
    pub char_a: Poly,
    pub phi_t: SkewMat<C::Elem>,
    pub phi_h: SkewMat<C::Elem>,
    pub phi_z: SkewMat<C::Elem>,
    /// Powers φ_h^j, j < d.
    h_pows: Vec<SkewMat<C::Elem>>,
}

pub type FiniteModule = DsModule<FiniteCoeff>;
pub type GenericModule = DsModule<RatCoeff>;

/// Minimal polynomial over F_q of `t0 ∈ L`.
pub fn min_poly(l: &FiniteCoeff, t0: Fe) -> Result<Poly> {
    let g = &l.field;
    let mut conj = vec![t0];
    loop {
        let next = l.frob(conj.last().unwrap(), 1);
        if next == t0 {
            break;
        }
        conj.push(next);
    }
    let mut acc = Poly::one();
    for c in conj {
        acc = acc.mul(g, &Poly::new(vec![g.neg(c), 1]));
    }
    let v: Option<Vec<Fe>> = acc.coeffs().iter().map(|&c| l.from_q.preimage(c)).collect();
    v.map(Poly::new).ok_or_else(|| Error::Invariant("minimal polynomial not over F_q".into()))
}

/// The rank-1 entry `γ(T) + τ^d` and the matrices of the standard shape.
fn standard_generators<C: CoeffField>(
    alg: &CyclicAlgebra,
    f: &C,
    gamma_t: &C::Elem,
) -> Result<(SkewMat<C::Elem>, SkewMat<C::Elem>, SkewMat<C::Elem>)> {
    let d = alg.d();
    let tower = &alg.tower;
    let mut rank1 = vec![f.zero(); d + 1];
    rank1[0] = gamma_t.clone();
    rank1[d] = f.one();
    let rank1 = SkewPoly::from_coeffs(f, rank1);
    let phi_t = SkewMat::scalar_diag(f, &vec![rank1.clone(); d]);
    let hs: Vec<SkewPoly<C::Elem>> = (0..d)
        .map(|i| {
            let c = f.from_fqd(tower.frobenius(tower.h, i as u64)).ok_or_else(|| Error::Config("L must contain F_{q^d}".into()))?;
            Ok(SkewPoly::constant(f, c))
        })
        .collect::<Result<_>>()?;
    let phi_h = SkewMat::scalar_diag(f, &hs);
    // φ_r for the rank-1 module: r(γ + τ^d)
    let mut phi_r = SkewPoly::zero();
    for &c in alg.r.coeffs().iter().rev() {
        phi_r = phi_r.mul(f, &rank1).add(f, &SkewPoly::constant(f, f.from_fq(c)));
    }
    let mut phi_z = SkewMat::zero(d, d);
    if d == 1 {
        phi_z.set(0, 0, phi_r);
    } else {
        for i in 0..d - 1 {
            phi_z.set(i, i + 1, SkewPoly::one(f));
        }
        phi_z.set(d - 1, 0, phi_r);
    }
    Ok((phi_t, phi_h, phi_z))
}

impl FiniteModule {
    /// standard module over `L = F_{q^m}` with `γ(T) = t0`.
    pub fn standard_finite(alg: &CyclicAlgebra, m: u32, t0: Fe) -> Result<FiniteModule> {
        let d = alg.d() as u32;
        if m == 0 || m % d != 0 {
            return Err(Error::Config(format!("L = F_q^{m} does not contain F_q^{d}")));
        }
        let l = FiniteCoeff::over_tower(&alg.tower, m)?;
        if t0 >= l.field.size() {
            return Err(Error::Config(format!("gamma(T) = {t0} is not an element of L")));
        }
        let char_a = min_poly(&l, t0)?;
        DsModule::standard(alg, l, t0, char_a)
    }

    pub fn from_spec(alg: &CyclicAlgebra, m: u32, t0: Fe) -> Result<FiniteModule> {
        Self::standard_finite(alg, m, t0)
    }
}

impl GenericModule {
    /// standard module over F_{q^d}(T) with `γ(T) = T`.
    pub fn standard_generic(alg: &CyclicAlgebra) -> Result<GenericModule> {
        let f = RatCoeff::new(&alg.tower);
        let t = f.t();
        DsModule::standard(alg, f, t, Poly::zero())
    }
}

impl<C: CoeffField> DsModule<C> {
    pub fn standard(alg: &CyclicAlgebra, field: C, gamma_t: C::Elem, char_a: Poly) -> Result<Self> {
        if !char_a.is_zero() && !char_a.gcd(&alg.tower.fq, &alg.r).is_one() {
            return Err(Error::Config(format!(
                "characteristic ({}) divides r = {}",
                char_a.display(),
                alg.r.display()
            )));
        }
        let (phi_t, phi_h, phi_z) = standard_generators(alg, &field, &gamma_t)?;
        let m = Self::from_generators(alg, field, gamma_t, char_a, phi_t, phi_h, phi_z);
        if let Some(c) = m.relation_checks().into_iter().find(|c| !c.pass) {
            return Err(Error::Invariant(format!("relation {} fails", c.name)));
        }
        Ok(m)
    }

    /// A module from arbitrary generator images (not verified).
    pub fn from_generators(
        alg: &CyclicAlgebra,
        field: C,
        gamma_t: C::Elem,
        char_a: Poly,
        phi_t: SkewMat<C::Elem>,
        phi_h: SkewMat<C::Elem>,
        phi_z: SkewMat<C::Elem>,
    ) -> Self {
        let d = alg.d();
        let mut h_pows = vec![SkewMat::identity(&field, d)];
        for j in 1..d {
            h_pows.push(h_pows[j - 1].mul(&field, &phi_h));
        }
        DsModule { alg: alg.clone(), field, gamma_t, char_a, phi_t, phi_h, phi_z, h_pows }
    }

    /// Replace the generator images, keeping everything else.
    pub fn with_generators(&self, phi_t: SkewMat<C::Elem>, phi_h: SkewMat<C::Elem>, phi_z: SkewMat<C::Elem>) -> Self {
        Self::from_generators(&self.alg, self.field.clone(), self.gamma_t.clone(), self.char_a.clone(), phi_t, phi_h, phi_z)
    }

    pub fn d(&self) -> usize {
        self.alg.d()
    }
    pub fn is_generic(&self) -> bool {
        self.char_a.is_zero()
    }

    fn scalar(&self, c: C::Elem) -> SkewMat<C::Elem> {
        SkewMat::scalar_diag(&self.field, &vec![SkewPoly::constant(&self.field, c); self.d()])
    }

    /// φ_c for a constant `c ∈ F_{q^d}`, as `Σ a_j φ_h^j`.
    pub fn eval_const(&self, c: Fe) -> SkewMat<C::Elem> {
        let f = &self.field;
        let mut acc = SkewMat::zero(self.d(), self.d());
        for (j, &a) in self.alg.tower.h_coords(c).iter().enumerate() {
            if a != 0 {
                let term = self.h_pows[j].map_entries(|x| x.lscale(f, &f.from_fq(a)));
                acc = acc.add(f, &term);
            }
        }
        acc
    }

    /// φ_y for `y ∈ F_{q^d}[T]`.
    pub fn eval_ok(&self, y: &Poly) -> SkewMat<C::Elem> {
        let f = &self.field;
        let mut acc = SkewMat::zero(self.d(), self.d());
        for &c in y.coeffs().iter().rev() {
            acc = acc.mul(f, &self.phi_t).add(f, &self.eval_const(c));
        }
        acc
    }

    /// φ_a for `a ∈ A`.
    pub fn eval_a(&self, a: &Poly) -> SkewMat<C::Elem> {
        self.eval_ok(&a.map(|c| self.alg.tower.emb.apply(c)))
    }

    /// φ_b for `b = Σ y_i z^i ∈ O_D`.
    pub fn evaluate(&self, b: &AlgElem) -> Result<SkewMat<C::Elem>> {
        if !self.alg.is_integral(b) {
            return Err(Error::NonIntegral);
        }
        let f = &self.field;
        let mut acc = SkewMat::zero(self.d(), self.d());
        for y in b.y.iter().rev() {
            acc = acc.mul(f, &self.phi_z).add(f, &self.eval_ok(y.num()));
        }
        Ok(acc)
    }

    /// The presentation relations as checks.
    pub fn relation_checks(&self) -> Vec<Check> {
        let f = &self.field;
        let tw = &self.alg.tower;
        let (t, h, z) = (&self.phi_t, &self.phi_h, &self.phi_z);
        let hq = self.eval_const(tw.frobenius(tw.h, 1));
        let mut out = vec![
            Check::flag("T*h = h*T", t.mul(f, h) == h.mul(f, t)),
            Check::flag("T*z = z*T", t.mul(f, z) == z.mul(f, t)),
            Check::flag("z*h = h^q*z", z.mul(f, h) == hq.mul(f, z)),
            Check::flag("z^d = r", z.pow(f, self.d() as u64) == self.eval_a(&self.alg.r)),
        ];
        // h satisfies its minimal polynomial: h^(q^d) = h through φ
        let hqd = self.eval_const(tw.frobenius(tw.h, self.d() as u64));
        out.push(Check::flag("h^(q^d) = h", hqd == *h));
        out
    }

    /// `∂(φ_T) = γ(T)·I`.
    pub fn partial_check(&self) -> Check {
        let f = &self.field;
        let want = self.scalar(self.gamma_t.clone()).partial(f);
        Check::flag("partial(phi_T) = gamma(T) I", self.phi_t.partial(f) == want)
    }

    /// One kernel-order check: `log_q #φ[b]` against `deg Nr(b)`.
    pub fn order_check(&self, label: &str, b: &AlgElem) -> Result<Check> {
        let s = self.evaluate(b)?;
        let lhs = match s.scheme_order_exp(&self.field) {
            Ok(k) => k.to_string(),
            Err(Error::InfiniteKernel) => "infinite".into(),
            Err(e) => return Err(e),
        };
        let nr = self.alg.norm_integral(b)?;
        Ok(Check::new(format!("order {label}"), lhs, nr.degree().unwrap()))
    }

    /// Relations, the ∂-condition and kernel orders on the generators plus `samples`
    /// random elements of coefficient degree `<= deg`.
    pub fn verify(&self, samples: usize, deg: usize, seed: u64) -> Result<Vec<Check>> {
        let mut checks = self.relation_checks();
        checks.push(self.partial_check());
        let a = &self.alg;
        let fixed = [("T", a.t()), ("h", a.h()), ("z", a.z()), ("h+z", a.add(&a.h(), &a.z()))];
        for (label, b) in fixed.iter() {
            checks.push(self.order_check(label, b)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut n = 0;
        while n < samples {
            let b = a.random_integral(&mut rng, deg);
            if a.is_zero(&b) {
                continue;
            }
            checks.push(self.order_check(&format!("sample {n}: {}", a.display(&b)), &b)?);
            n += 1;
        }
        Ok(checks)
    }

    /// `diag(φ_α, ..., φ_α)` for α ∈ {T, h} from the rank-1 O_K-module, each checked
    /// to commute with φ_T, φ_h, φ_z.
    pub fn cm_endomorphisms(&self) -> Result<Vec<(String, SkewMat<C::Elem>)>> {
        let f = &self.field;
        let d = self.d();
        let mut rank1 = vec![f.zero(); d + 1];
        rank1[0] = self.gamma_t.clone();
        rank1[d] = f.one();
        let e_t = SkewMat::scalar_diag(f, &vec![SkewPoly::from_coeffs(f, rank1); d]);
        let hk = f.from_fqd(self.alg.tower.h).ok_or(Error::FieldMismatch)?;
        let e_h = self.scalar(hk);
        let out = vec![("T".to_string(), e_t), ("h".to_string(), e_h)];
        for (name, u) in &out {
            if !self.commutes(u) {
                return Err(Error::Invariant(format!("CM endomorphism {name} does not commute")));
            }
        }
        Ok(out)
    }

    /// Whether `u` commutes with all generator images.
    pub fn commutes(&self, u: &SkewMat<C::Elem>) -> bool {
        let f = &self.field;
        [&self.phi_t, &self.phi_h, &self.phi_z].iter().all(|g| u.mul(f, g) == g.mul(f, u))
    }

    /// Whether φ_b is separable, with the norm criterion alongside.
    pub fn is_separable(&self, b: &AlgElem) -> Result<(bool, bool)> {
        let s = self.evaluate(b)?;
        let sep = s.separable_rank_exp(&self.field)? == s.scheme_order_exp(&self.field)?;
        let crit = self.char_a.is_zero() || {
            let nr = self.alg.norm_integral(b)?;
            !nr.rem(&self.alg.tower.fq, &self.char_a)?.is_zero()
        };
        Ok((sep, crit))
    }
}
