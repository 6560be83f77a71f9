//! One line per acceptance criterion; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ds_core::algebra::{maximal_discriminant, CyclicAlgebra, Place, QmodZ};
use ds_core::base::{Fe, Poly, Tower};
use ds_core::descent::{
    base_change, coboundary, descend_to_moduli_field, descend_with_splitting, find_isomorphism, hilbert90_solve,
    random_unit, splitting_element, twist, DescentBounds, GaloisExtension,
};
use ds_core::fixtures::{run_fixtures, SUPERSINGULAR_PAIRS};
use ds_core::module::{FieldSpec, FiniteModule, GenericModule};
use ds_core::parse::{parse_elem, parse_poly};
use ds_core::report::{cmd_supersingular, RunConfig};
use ds_core::skew::{CoeffField, FiniteCoeff, SkewMat, SkewPoly};
use ds_core::Error;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<T>(r: ds_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn algebra(q: u64, d: u32, r: &str) -> CyclicAlgebra {
    let p = (2..=q).find(|k| q % k == 0).unwrap();
    let e = (q as f64).log(p as f64).round() as u32;
    let tower = Tower::from_pqd(p as u32, e, d).unwrap();
    let r = parse_poly(&tower.fq, r).unwrap();
    CyclicAlgebra::new(&tower, &r).unwrap()
}

fn prime_field(p: u32, m: u32) -> FiniteCoeff {
    FiniteCoeff::over_tower(&Tower::from_pqd(p, 1, 1).unwrap(), m).unwrap()
}

fn rand_poly(f: &FiniteCoeff, rng: &mut ChaCha8Rng, deg: usize) -> SkewPoly<Fe> {
    let n = f.field.size();
    let len = rng.gen_range(0..=deg + 1);
    SkewPoly::from_coeffs(f, (0..len).map(|_| rng.gen_range(0..n)).collect())
}

fn rand_mat(f: &FiniteCoeff, rng: &mut ChaCha8Rng, n: usize, deg: usize) -> SkewMat<Fe> {
    SkewMat::from_rows((0..n).map(|_| (0..n).map(|_| rand_poly(f, rng, deg)).collect()).collect())
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0usize;
    for (p, m) in [(2, 2), (3, 2), (3, 3)] {
        let f = prime_field(p, m);
        let tau = SkewPoly::tau_pow(&f, 1);
        for _ in 0..3334 {
            let (a, b, c) = (rand_poly(&f, &mut rng, 5), rand_poly(&f, &mut rng, 5), rand_poly(&f, &mut rng, 5));
            let x = rng.gen_range(0..f.field.size());
            let xs = SkewPoly::constant(&f, x);
            ensure(a.mul(&f, &b).mul(&f, &c) == a.mul(&f, &b.mul(&f, &c)), "associativity")?;
            ensure(a.mul(&f, &b.add(&f, &c)) == a.mul(&f, &b).add(&f, &a.mul(&f, &c)), "left distributivity")?;
            ensure(a.add(&f, &b).mul(&f, &c) == a.mul(&f, &c).add(&f, &b.mul(&f, &c)), "right distributivity")?;
            ensure(tau.mul(&f, &xs) == SkewPoly::constant(&f, f.field.pow(x, p as u64)).mul(&f, &tau), "τx = x^p τ")?;
            let dab = a.mul(&f, &b).degree();
            let want = a.degree().zip(b.degree()).map(|(u, v)| u + v);
            ensure(dab == want, "degree additivity")?;
            if !b.is_zero() {
                let (q, r) = e2s(a.right_divmod(&f, &b))?;
                ensure(q.mul(&f, &b).add(&f, &r) == a && r.degree() < b.degree(), "right division")?;
                let (q, r) = e2s(a.left_divmod(&f, &b))?;
                ensure(b.mul(&f, &q).add(&f, &r) == a && r.degree() < b.degree(), "left division")?;
            }
            checked += 1;
        }
    }
    let f = prime_field(3, 2);
    let mut mats = 0;
    for n in [2, 3] {
        let id = SkewMat::identity(&f, n);
        for _ in 0..1000 {
            let s = rand_mat(&f, &mut rng, n, 2);
            let dfm = e2s(s.diagonal_form(&f))?;
            ensure(dfm.u.mul(&f, &s).mul(&f, &dfm.v) == dfm.diag_matrix(&f), "U S V = diag")?;
            ensure(dfm.u.mul(&f, &dfm.u_inv) == id && dfm.u_inv.mul(&f, &dfm.u) == id, "U invertible")?;
            ensure(dfm.v.mul(&f, &dfm.v_inv) == id && dfm.v_inv.mul(&f, &dfm.v) == id, "V invertible")?;
            ensure(dfm.u_inv.mul(&f, &dfm.diag_matrix(&f)).mul(&f, &dfm.v_inv) == s, "recomposition")?;
            mats += 1;
        }
    }
    Ok(format!("{checked} skew-polynomial samples over F_4, F_9, F_27; {mats} diagonal forms recomposed"))
}

fn criterion_2() -> Outcome {
    let mut out = Vec::new();
    for (q, d, r) in [(3, 2, "T^2+2"), (3, 3, "T^3-T")] {
        let a = algebra(q, d, r);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut n = 0;
        while n < 50 {
            let b = a.random_integral(&mut rng, 2);
            if a.is_zero(&b) {
                continue;
            }
            let idx = e2s(a.order_index_exp(&b))?;
            let norm = e2s(a.norm_integral(&b))?;
            ensure(idx == norm.degree().unwrap(), format!("index {idx} vs deg Nr {} for {}", norm.display(), a.display(&b)))?;
            n += 1;
        }
        out.push(format!("{n} elements on ({q},{d},{r})"));
    }
    Ok(out.join(", "))
}

fn criterion_3() -> Outcome {
    let mut out = Vec::new();
    for (q, d, r) in [(3, 2, "T^2+2"), (3, 3, "T^3-T"), (4, 2, "T^2+3T+2")] {
        let a = algebra(q, d, r);
        let fq = &a.tower.fq;
        let inv = a.invariants();
        let total = inv.iter().fold(QmodZ::zero(), |s, (_, v)| s.add(v));
        ensure(total.is_zero(), format!("invariants of ({q},{d},{r}) sum to {total}"))?;
        ensure(a.is_maximal(), format!("({q},{d},{r}) not maximal"))?;
        let oracle = a.r.pow(fq, (d * (d - 1)) as u64);
        let disc = e2s(a.trace_form_discriminant())?;
        ensure(disc == oracle, format!("trace disc {} vs r^(d(d-1))", disc.display()))?;
        out.push(format!("({q},{d},{r}) disc {}", disc.display()));
    }
    Ok(out.join("; "))
}

fn criterion_4() -> Outcome {
    let a = algebra(3, 2, "T^2+2");
    let generic = e2s(e2s(GenericModule::standard_generic(&a))?.verify(25, 2, 4))?;
    let ex23 = e2s(e2s(FiniteModule::standard_finite(&a, 2, 0))?.verify(25, 2, 4))?;
    let FieldSpec::Finite { m, t0 } = e2s(FieldSpec::for_characteristic(&a, &Poly::new(vec![1, 0, 1])))? else {
        return Err("no finite field for T^2+1".into());
    };
    let at_p = e2s(e2s(FiniteModule::standard_finite(&a, m, t0))?.verify(25, 2, 4))?;
    let mut n = 0;
    for (label, checks) in [("generic", &generic), ("char T", &ex23), ("char T^2+1", &at_p)] {
        let orders: Vec<_> = checks.iter().filter(|c| c.name.starts_with("order")).collect();
        ensure(orders.len() == 29, format!("{label}: {} order checks", orders.len()))?;
        if let Some(c) = checks.iter().find(|c| !c.pass) {
            return Err(format!("{label}: {} gave {} vs {}", c.name, c.lhs, c.rhs));
        }
        n += orders.len();
    }
    Ok(format!("{n} kernel orders match q^deg Nr(b) on the generic field and two finite fields"))
}

fn criterion_5() -> Outcome {
    let a = algebra(3, 2, "T^2+2");
    let FieldSpec::Finite { m, t0 } = e2s(FieldSpec::for_characteristic(&a, &Poly::new(vec![1, 0, 1])))? else {
        return Err("no finite field".into());
    };
    let phi = e2s(FiniteModule::standard_finite(&a, m, t0))?;
    let t = e2s(phi.torsion(&Poly::t(), 24))?.report;
    ensure(t.points == 81, format!("{} points", t.points))?;
    ensure(t.invariant, "not O_D-invariant")?;
    ensure(t.generator.is_some(), "no cyclic generator")?;
    let hz = e2s(parse_elem(&a, "h+z"))?;
    let w = e2s(phi.noninvariance_witness(&hz, 24))?;
    ensure(w.is_some(), "no witness for h+z")?;
    Ok(format!("81 points over F_3^{}, invariant, generator found, witness for h+z", t.ext_degree * m))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for (alg, p) in SUPERSINGULAR_PAIRS {
        let cfg = RunConfig { q: alg.0, d: alg.1, r: alg.2.into(), char_poly: Some(p.into()), ..RunConfig::default() };
        let rep = e2s(cmd_supersingular(&cfg))?;
        ensure(rep.result["agree"] == true && rep.pass, format!("criteria disagree at ({},{},{}) p = {p}", alg.0, alg.1, alg.2))?;
        let ss = rep.result["supersingular"] == true;
        if alg == ds_core::fixtures::ALG_32 && p == "T" {
            ensure(ss, "the char-T module is not supersingular")?;
        }
        lines.push(format!("{p}:{}", if ss { "ss" } else { "ord" }));
    }
    ensure(lines.len() >= 6, "fewer than 6 pairs")?;
    Ok(format!("{} pairs agree [{}]", lines.len(), lines.join(" ")))
}

fn criterion_7() -> Outcome {
    let a = algebra(3, 2, "T^2+2");
    let fq = &a.tower.fq;
    let phi = e2s(FiniteModule::standard_finite(&a, 2, 0))?;
    let f = &phi.field;
    let end = e2s(phi.end_ring(None))?;
    ensure(end.a_rank == 4 && end.closed, format!("rank {} closed {}", end.a_rank, end.closed))?;
    let hk = f.from_fqd(a.tower.h).unwrap();
    let hi = SkewMat::scalar_diag(f, &[SkewPoly::constant(f, hk), SkewPoly::constant(f, hk)]);
    let kappa = phi.phi_z.mul(f, &SkewMat::scalar_diag(f, &vec![SkewPoly::tau_pow(f, 1); 2]));
    ensure(e2s(phi.end_contains(&end, &hi))?, "h·I not in End")?;
    ensure(e2s(phi.end_contains(&end, &kappa))?, "κ_1 not in End")?;
    let aut = e2s(phi.aut_group(1 << 12))?;
    ensure(aut.order == 8, format!("Aut order {}", aut.order))?;
    let disc = e2s(phi.end_discriminant(&end))?;
    let tr = Poly::t().mul(fq, &a.r);
    ensure(disc == tr.mul(fq, &tr), format!("disc {}", disc.display()))?;
    // D̄ ramifies at the characteristic T, at ∞ and at the places of r
    let half = QmodZ::new(1, 2);
    let inv: Vec<(Place, QmodZ)> = ["T", "T+1", "T+2"]
        .iter()
        .map(|s| (Place::Finite(parse_poly(fq, s).unwrap()), half))
        .chain([(Place::Infinity, half)])
        .collect();
    ensure(maximal_discriminant(fq, 2, &inv) == disc, "disc differs from the maximal discriminant of D̄")?;
    Ok(format!("rank 4, h·I and κ_1 in End, |Aut| = 8, disc = {}", disc.display()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut n = 0;
    for (p, e) in [(3, 1), (2, 2)] {
        let l = FiniteCoeff::over_tower(&Tower::from_pqd(p, e, 1).unwrap(), 1).unwrap();
        let ext = e2s(GaloisExtension::new(&l, 2))?;
        for d in [2, 3] {
            for _ in 0..100 {
                let s0 = random_unit(&ext.k, d, 1, &mut rng);
                ensure(s0.degree().unwrap() <= 3, "S_0 has τ-degree above 3")?;
                let c = e2s(coboundary(&ext, &s0))?;
                let s = e2s(hilbert90_solve(&ext, &c))?;
                ensure(e2s(coboundary(&ext, &s))? == c, "cocycle of S differs from the input")?;
                ensure(e2s(s.is_unit(&ext.k))?, "S not a unit")?;
                for (i, ci) in c.iter().enumerate() {
                    ensure(ext.act(&s, i).mul(&ext.k, ci) == s, format!("σ^{i}(S) c ≠ S"))?;
                }
                let s0_inv = e2s(s0.inverse(&ext.k))?.ok_or("S_0 not a unit")?;
                ensure(ext.descend(&s.mul(&ext.k, &s0_inv)).is_some(), "S S_0^-1 not over L")?;
                // with c_σ = σ(S)^-1 S the G-fixed quotient is S S_0^-1; S_0^-1 S is not fixed in general
                n += 1;
            }
        }
    }
    Ok(format!("{n} coboundaries solved over F_9/F_3 and F_16/F_4"))
}

fn criterion_9() -> Outcome {
    let a = algebra(4, 2, "T^2+3T+2");
    let phi_l = e2s(FiniteModule::standard_finite(&a, 2, 0))?;
    let ext = e2s(GaloisExtension::new(&phi_l.field, 2))?;
    let phi_k = base_change(&phi_l, &ext.k, |v| ext.emb.apply(v));
    let mut s = SkewMat::identity(&ext.k, 2);
    s.set(0, 1, SkewPoly::monomial(&ext.k, ext.k.field.generator().unwrap(), 1));
    let hidden = e2s(twist(&phi_k, &s))?;
    ensure(ext.descend(&hidden.phi_z).is_none(), "fixture already over L")?;
    let b = DescentBounds::default();
    let moduli = e2s(descend_to_moduli_field(&hidden, &ext, &b))?;
    let e = e2s(splitting_element(&hidden, &ext))?.ok_or("no splitting element")?;
    let split = e2s(descend_with_splitting(&hidden, &ext, &e, &b))?;
    for (label, out) in [("moduli", &moduli), ("splitting", &split)] {
        if let Some(c) = out.checks.iter().find(|c| !c.pass) {
            return Err(format!("{label}: {}", c.name));
        }
        ensure(out.module.verify(5, 1, 9).map_or(false, |v| v.iter().all(|c| c.pass)), format!("{label}: verify"))?;
        if out.ext_degree == 1 {
            let back = base_change(&out.module, &ext.k, |v| ext.emb.apply(v));
            ensure(e2s(find_isomorphism(&hidden, &back, 8, 1 << 14))?.is_some(), format!("{label}: not K-isomorphic"))?;
        }
    }
    // q = 3, d = 2: Aut ≅ F_9^×, gcd(2, 8) ≠ 1
    let a3 = algebra(3, 2, "T^2+2");
    let phi3 = e2s(FiniteModule::standard_finite(&a3, 2, 0))?;
    let ext3 = e2s(GaloisExtension::new(&phi3.field, 2))?;
    let k3 = base_change(&phi3, &ext3.k, |v| ext3.emb.apply(v));
    let mut s3 = SkewMat::identity(&ext3.k, 2);
    s3.set(0, 1, SkewPoly::monomial(&ext3.k, ext3.k.field.generator().unwrap(), 1));
    let hidden3 = e2s(twist(&k3, &s3))?;
    match descend_to_moduli_field(&hidden3, &ext3, &b) {
        Err(Error::Precondition(_)) => {}
        other => return Err(format!("q = 3 gate: {:?}", other.map(|_| ()))),
    }
    Ok(format!(
        "q = 4 round trip by both methods (|Aut| = {}), q = 3 rejected by the gcd condition",
        moduli.aut_order
    ))
}

fn criterion_10() -> Outcome {
    let a = serde_json::to_string(&run_fixtures(10)).unwrap();
    let b = serde_json::to_string(&run_fixtures(10)).unwrap();
    ensure(a == b, "library runs differ")?;
    let bin = env!("CARGO_BIN_EXE_ds");
    let run = || {
        Command::new(bin)
            .args(["fixtures", "--seed", "10"])
            .env_remove("DS_SEED")
            .output()
            .map_err(|e| e.to_string())
    };
    let (x, y) = (run()?, run()?);
    ensure(x.status.success() && y.status.success(), "ds fixtures failed")?;
    ensure(x.stdout == y.stdout, "CLI runs differ")?;
    Ok(format!("{} bytes identical across runs", x.stdout.len()))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (i, f) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match res {
            Ok(msg) => println!("criterion {i:>2}: PASS ({ms} ms) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {i:>2}: FAIL ({ms} ms) {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
