use proptest::prelude::*;

use ds_core::base::{Fe, Tower};
use ds_core::skew::{CoeffField, FiniteCoeff, SkewMat, SkewPoly};

fn field(p: u32, m: u32) -> FiniteCoeff {
    FiniteCoeff::over_tower(&Tower::from_pqd(p, 1, 1).unwrap(), m).unwrap()
}

fn poly(f: &FiniteCoeff, c: Vec<u64>) -> SkewPoly<Fe> {
    let n = f.field.size();
    SkewPoly::from_coeffs(f, c.into_iter().map(|x| x % n).collect())
}

fn coeffs() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..1000, 0..7)
}

fn fields() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![Just((2, 2)), Just((3, 2)), Just((3, 3))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ring_axioms((p, m) in fields(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = field(p, m);
        let (a, b, c) = (poly(&f, a), poly(&f, b), poly(&f, c));
        prop_assert_eq!(a.mul(&f, &b).mul(&f, &c), a.mul(&f, &b.mul(&f, &c)));
        prop_assert_eq!(a.mul(&f, &b.add(&f, &c)), a.mul(&f, &b).add(&f, &a.mul(&f, &c)));
        prop_assert_eq!(a.add(&f, &b).mul(&f, &c), a.mul(&f, &c).add(&f, &b.mul(&f, &c)));
        prop_assert_eq!(a.sub(&f, &a), SkewPoly::zero());
        prop_assert_eq!(SkewPoly::one(&f).mul(&f, &a), a.clone());
    }

    #[test]
    fn commutation_rule((p, m) in fields(), x in 0u64..1000, n in 0usize..4) {
        let f = field(p, m);
        let x = x % f.field.size();
        let lhs = SkewPoly::tau_pow(&f, n).mul(&f, &SkewPoly::constant(&f, x));
        let rhs = SkewPoly::monomial(&f, f.frob(&x, n as u32), n);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division((p, m) in fields(), a in coeffs(), b in coeffs()) {
        let f = field(p, m);
        let (a, b) = (poly(&f, a), poly(&f, b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.right_divmod(&f, &b).unwrap();
        prop_assert_eq!(q.mul(&f, &b).add(&f, &r), a.clone());
        prop_assert!(r.degree() < b.degree());
        let (q, r) = a.left_divmod(&f, &b).unwrap();
        prop_assert_eq!(b.mul(&f, &q).add(&f, &r), a);
        prop_assert!(r.degree() < b.degree());
    }

    #[test]
    fn diagonal_form_recomposes(n in 2usize..4, entries in prop::collection::vec(coeffs(), 9)) {
        let f = field(3, 2);
        let s = SkewMat::from_rows(
            (0..n).map(|i| (0..n).map(|j| poly(&f, entries[i * 3 + j].iter().take(3).copied().collect())).collect()).collect(),
        );
        let d = s.diagonal_form(&f).unwrap();
        let id = SkewMat::identity(&f, n);
        prop_assert_eq!(d.u.mul(&f, &s).mul(&f, &d.v), d.diag_matrix(&f));
        prop_assert_eq!(d.u.mul(&f, &d.u_inv), id.clone());
        prop_assert_eq!(d.v_inv.mul(&f, &d.v), id);
        // the kernel order is a two-sided invariant
        if let Some(k) = d.total_degree() {
            prop_assert_eq!(s.scheme_order_exp(&f).unwrap(), k);
        }
    }
}
