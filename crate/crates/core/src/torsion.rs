//! Torsion group schemes `φ[n]` over finite fields and their O_D-structure.

use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::AlgElem;
use crate::base::linalg::Span;
use crate::base::{Fe, Poly};
use crate::error::Result;
use crate::module::FiniteModule;
use crate::skew::points::{apply, kernel_points, KernelPoints};
use crate::skew::{CoeffField, SkewMat};

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub ideal: String,
    /// log_q of the group-scheme order
    pub order_exp: usize,
    /// log_q of the number of geometric points
    pub separable_exp: usize,
    pub points: usize,
    /// [M : L] for the field of definition of the points
    pub ext_degree: u32,
    pub invariant: bool,
    pub generator: Option<Vec<Fe>>,
}

pub struct Torsion {
    pub report: TorsionReport,
    pub kernel: Option<KernelPoints>,
}

/// Default cap on the number of enumerated points.
pub const POINT_CAP: u64 = 1 << 20;

impl FiniteModule {
    /// Geometric points of ker S.
    pub fn points_of(&self, s: &SkewMat<Fe>, max_ext: u32) -> Result<KernelPoints> {
        kernel_points(&self.field, s, max_ext, POINT_CAP)
    }

    fn act(&self, kp: &KernelPoints, s: &SkewMat<Fe>, x: &[Fe]) -> Vec<Fe> {
        apply(&kp.ext.field, self.field.e, &kp.emb, s, x)
    }

    /// The A-module elements `h^j z^i T^k` (k < deg n) spanning O_D/O_D n over F_q.
    fn quotient_basis(&self, n: &Poly) -> Vec<AlgElem> {
        let a = &self.alg;
        let mut out = Vec::new();
        for k in 0..n.degree().unwrap_or(0) {
            let tk = a.from_a(&Poly::monomial(1, k));
            for e in a.basis() {
                out.push(a.mul(&e, &tk));
            }
        }
        out
    }

    /// φ[n] for `n ∈ A` nonzero.
    pub fn torsion(&self, n: &Poly, max_ext: u32) -> Result<Torsion> {
        let f = &self.field;
        let s = self.eval_a(n);
        let order_exp = s.scheme_order_exp(f)?;
        let separable_exp = s.separable_rank_exp(f)?;
        let kp = self.points_of(&s, max_ext)?;
        let set: HashSet<&Vec<Fe>> = kp.points.iter().collect();
        let gens = [&self.phi_t, &self.phi_h, &self.phi_z];
        let invariant = kp
            .points
            .iter()
            .all(|x| gens.iter().all(|g| set.contains(&self.act(&kp, g, x))));
        let separable = !n.rem(&self.alg.tower.fq, &self.char_a)?.is_zero() || n.degree() == Some(0);
        let generator = if separable && invariant {
            self.cyclic_generator(n, &kp)?
        } else {
            None
        };
        let report = TorsionReport {
            ideal: format!("({})", n.display()),
            order_exp,
            separable_exp,
            points: kp.points.len(),
            ext_degree: kp.degree,
            invariant,
            generator,
        };
        Ok(Torsion { report, kernel: Some(kp) })
    }

    /// First point (in encoding order) whose O_D-orbit spans φ[n].
    fn cyclic_generator(&self, n: &Poly, kp: &KernelPoints) -> Result<Option<Vec<Fe>>> {
        let g = &kp.ext.field;
        let target = kp.basis.len();
        let ops: Vec<SkewMat<Fe>> =
            self.quotient_basis(n).iter().map(|b| self.evaluate(b)).collect::<Result<_>>()?;
        // F_p-basis of F_q inside M
        let fq_basis: Vec<Fe> = (0..self.field.e).map(|i| kp.ext.from_fq((g.p() as u64).pow(i))).collect();
        for x in &kp.points {
            let mut span = Span::new(g.p());
            'ops: for s in &ops {
                let y = self.act(kp, s, x);
                for &c in &fq_basis {
                    let v: Vec<u32> = y.iter().flat_map(|&t| g.digits(g.mul(c, t))).collect();
                    span.insert(&v);
                    if span.dim() == target {
                        break 'ops;
                    }
                }
            }
            if span.dim() == target {
                return Ok(Some(x.clone()));
            }
        }
        Ok(None)
    }

    /// A point `P ∈ ker φ_b` with `φ_h(P) ∉ ker φ_b`, if one exists.
    pub fn noninvariance_witness(&self, b: &AlgElem, max_ext: u32) -> Result<Option<Vec<Fe>>> {
        let s = self.evaluate(b)?;
        let kp = self.points_of(&s, max_ext)?;
        for x in &kp.points {
            let hx = self.act(&kp, &self.phi_h, x);
            if self.act(&kp, &s, &hx).iter().any(|&v| v != 0) {
                return Ok(Some(x.clone()));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CyclicAlgebra;
    use crate::base::Tower;
    use crate::module::FieldSpec;

    #[test]
    fn ordinary_t_torsion() {
        let a = CyclicAlgebra::new(&Tower::from_pqd(3, 1, 2).unwrap(), &Poly::new(vec![2, 0, 1])).unwrap();
        let FieldSpec::Finite { m, t0 } = FieldSpec::for_characteristic(&a, &Poly::new(vec![1, 0, 1])).unwrap() else {
            panic!()
        };
        let phi = FiniteModule::standard_finite(&a, m, t0).unwrap();
        let t = phi.torsion(&Poly::t(), 24).unwrap();
        assert_eq!(t.report.points, 81);
        assert_eq!(t.report.order_exp, 4);
        assert!(t.report.invariant);
        assert!(t.report.generator.is_some());
        let b = a.add(&a.h(), &a.z());
        assert!(phi.noninvariance_witness(&b, 24).unwrap().is_some());
        assert!(phi.noninvariance_witness(&a.t(), 24).unwrap().is_none());
        assert!(phi.noninvariance_witness(&a.one(), 24).unwrap().is_none());
    }

    #[test]
    fn supersingular_t_torsion_connected() {
        let a = CyclicAlgebra::new(&Tower::from_pqd(3, 1, 2).unwrap(), &Poly::new(vec![2, 0, 1])).unwrap();
        let phi = FiniteModule::standard_finite(&a, 2, 0).unwrap();
        let t = phi.torsion(&Poly::t(), 24).unwrap();
        assert_eq!(t.report.order_exp, 4);
        assert_eq!(t.report.separable_exp, 0);
        assert_eq!(t.report.points, 1);
        let one = phi.torsion(&Poly::one(), 4).unwrap();
        assert_eq!(one.report.points, 1);
        assert_eq!(one.report.order_exp, 0);
    }
}
