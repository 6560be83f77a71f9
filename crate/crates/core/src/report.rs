//! Run configuration, instance construction and JSON reports for each command.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{CyclicAlgebra, QmodZ};
use crate::base::factor::roots;
use crate::base::{Fe, Poly, Tower};
use crate::descent::{
    base_change, cocycle_check, descend_to_moduli_field, descend_with_splitting, hilbert90_solve,
    splitting_element, twist, Descent, DescentBounds, GaloisExtension,
};
use crate::error::{Error, Result};
use crate::module::{Check, FieldSpec, FiniteModule, GenericModule};
use crate::parse::{parse_elem, parse_poly};
use crate::skew::{CoeffField, FiniteCoeff, SkewMat, SkewPoly};

pub const SCHEMA: &str = "ds-report/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub q: u64,
    pub d: u32,
    pub r: String,
    /// `generic` or `fq^m`
    pub field: Option<String>,
    pub gamma: Option<u64>,
    #[serde(rename = "char")]
    pub char_poly: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub deg: usize,
    pub max_ext: u32,
    pub end_bound: Option<usize>,
    pub pi_bound: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 3,
            d: 2,
            r: "T^2+2".into(),
            field: None,
            gamma: None,
            char_poly: None,
            seed: 0,
            samples: 25,
            deg: 2,
            max_ext: 24,
            end_bound: None,
            pi_bound: None,
        }
    }
}

/// `q = p^e`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    let p = (2..=q).find(|k| q % k == 0).ok_or_else(|| Error::Config(format!("q = {q} is not a prime power")))?;
    let mut e = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    if x != 1 {
        return Err(Error::Config(format!("q = {q} is not a prime power")));
    }
    Ok((p as u32, e))
}

fn parse_field(s: &str) -> Result<Option<u32>> {
    if s == "generic" {
        return Ok(None);
    }
    s.strip_prefix("fq^")
        .and_then(|m| m.parse().ok())
        .filter(|&m| m > 0)
        .map(Some)
        .ok_or_else(|| Error::Config(format!("field must be `generic` or `fq^m`, got `{s}`")))
}

impl RunConfig {
    pub fn algebra(&self) -> Result<CyclicAlgebra> {
        let (p, e) = prime_power(self.q)?;
        if self.d == 0 {
            return Err(Error::Config("d must be positive".into()));
        }
        let tower = Tower::from_pqd(p, e, self.d)?;
        let r = parse_poly(&tower.fq, &self.r)?;
        CyclicAlgebra::new(&tower, &r)
    }

    pub fn characteristic(&self, alg: &CyclicAlgebra) -> Result<Option<Poly>> {
        self.char_poly.as_deref().map(|s| parse_poly(&alg.tower.fq, s)).transpose()
    }

    pub fn field_spec(&self, alg: &CyclicAlgebra) -> Result<FieldSpec> {
        let m = self.field.as_deref().map(parse_field).transpose()?;
        match (m, self.characteristic(alg)?) {
            (Some(None), None) => Ok(FieldSpec::Generic),
            (Some(None), Some(_)) => Err(Error::Config("generic field has characteristic 0".into())),
            (None, None) if self.gamma.is_none() => Ok(FieldSpec::Generic),
            (None, None) => Err(Error::Config("--gamma needs --field fq^m".into())),
            (m, Some(p)) => {
                let spec = FieldSpec::for_characteristic(alg, &p)?;
                let FieldSpec::Finite { m: m0, .. } = spec else { unreachable!() };
                match m.flatten() {
                    None => Ok(spec),
                    Some(m) if m % m0 == 0 => {
                        let l = FiniteCoeff::over_tower(&alg.tower, m)?;
                        let t0 = roots(&l.field, &p.map(|c| l.from_fq(c)))?[0];
                        Ok(FieldSpec::Finite { m, t0 })
                    }
                    Some(m) => Err(Error::Config(format!("F_q^{m} contains no root of the characteristic"))),
                }
            }
            (Some(Some(m)), None) => Ok(FieldSpec::Finite { m, t0: self.gamma.unwrap_or(0) }),
        }
    }

    pub fn finite_module(&self) -> Result<FiniteModule> {
        let alg = self.algebra()?;
        match self.field_spec(&alg)? {
            FieldSpec::Finite { m, t0 } => FiniteModule::standard_finite(&alg, m, t0),
            FieldSpec::Generic => Err(Error::Config("this command needs a finite field (--field fq^m or --char)".into())),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub pass: bool,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, pass: bool, result: Value) -> Report {
        Report { schema: SCHEMA, command: command.into(), pass, result }
    }
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
    /// Exit status: 0 pass, 1 failed check.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Exit status for an error: 2 for usage, configuration and precondition errors, 1 otherwise.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse(_) | Error::Precondition(_) => 2,
        _ => 1,
    }
}

/// JSON form of a matrix over a finite field: `[row][col][τ-power]` encodings.
pub fn mat_json(m: &SkewMat<Fe>) -> Value {
    json!(m.entries().iter().map(|row| row.iter().map(|x| x.coeffs().to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn mat_from_json(f: &FiniteCoeff, v: &[Vec<Vec<u64>>]) -> Result<SkewMat<Fe>> {
    let size = f.field.size();
    let rows: Vec<Vec<SkewPoly<Fe>>> = v
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    if let Some(&bad) = c.iter().find(|&&x| x >= size) {
                        return Err(Error::Config(format!("{bad} is not a field element")));
                    }
                    Ok(SkewPoly::from_coeffs(f, c.clone()))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Config("matrix must be square and nonempty".into()));
    }
    Ok(SkewMat::from_rows(rows))
}

fn generic_mat_json(m: &SkewMat<crate::base::RatFn>) -> Value {
    let entry = |x: &SkewPoly<crate::base::RatFn>| -> Vec<String> {
        x.coeffs()
            .iter()
            .map(|c| {
                if c.den().is_one() {
                    c.num().display().to_string()
                } else {
                    format!("({})/({})", c.num().display(), c.den().display())
                }
            })
            .collect()
    };
    json!(m.entries().iter().map(|row| row.iter().map(entry).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn checks_json(checks: &[Check]) -> (bool, Value) {
    (checks.iter().all(|c| c.pass), json!(checks))
}

fn algebra_json(a: &CyclicAlgebra) -> Value {
    json!({
        "q": a.q(),
        "d": a.d(),
        "r": a.r.display().to_string(),
    })
}

fn finite_module_json(phi: &FiniteModule) -> Value {
    json!({
        "field": format!("F_{}", phi.field.field.size()),
        "gamma": phi.gamma_t,
        "char": phi.char_a.display().to_string(),
        "phi_T": mat_json(&phi.phi_t),
        "phi_h": mat_json(&phi.phi_h),
        "phi_z": mat_json(&phi.phi_z),
    })
}

fn generic_module_json(phi: &GenericModule) -> Value {
    json!({
        "field": "F_q^d(T)",
        "phi_T": generic_mat_json(&phi.phi_t),
        "phi_h": generic_mat_json(&phi.phi_h),
        "phi_z": generic_mat_json(&phi.phi_z),
    })
}

pub fn cmd_construct(cfg: &RunConfig) -> Result<Report> {
    let alg = cfg.algebra()?;
    let (pass, module) = match cfg.field_spec(&alg)? {
        FieldSpec::Generic => {
            let phi = GenericModule::standard_generic(&alg)?;
            (phi.relation_checks().iter().all(|c| c.pass), generic_module_json(&phi))
        }
        FieldSpec::Finite { m, t0 } => {
            let phi = FiniteModule::standard_finite(&alg, m, t0)?;
            (phi.relation_checks().iter().all(|c| c.pass), finite_module_json(&phi))
        }
    };
    Ok(Report::new("construct", pass, json!({"algebra": algebra_json(&alg), "module": module})))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Report> {
    let alg = cfg.algebra()?;
    let checks = match cfg.field_spec(&alg)? {
        FieldSpec::Generic => GenericModule::standard_generic(&alg)?.verify(cfg.samples, cfg.deg, cfg.seed)?,
        FieldSpec::Finite { m, t0 } => {
            FiniteModule::standard_finite(&alg, m, t0)?.verify(cfg.samples, cfg.deg, cfg.seed)?
        }
    };
    let (pass, v) = checks_json(&checks);
    Ok(Report::new("verify", pass, json!({"algebra": algebra_json(&alg), "checks": v})))
}

pub fn cmd_torsion(cfg: &RunConfig, n: &str, witness: Option<&str>) -> Result<Report> {
    let phi = cfg.finite_module()?;
    let n = parse_poly(&phi.alg.tower.fq, n)?;
    if n.is_zero() {
        return Err(Error::Config("torsion ideal must be nonzero".into()));
    }
    let t = phi.torsion(&n, cfg.max_ext)?;
    let mut result = BTreeMap::new();
    result.insert("torsion".to_string(), json!(t.report));
    let mut pass = t.report.order_exp == phi.d() * phi.d() * n.degree().unwrap();
    if let Some(w) = witness {
        let b = parse_elem(&phi.alg, w)?;
        let x = phi.noninvariance_witness(&b, cfg.max_ext)?;
        pass &= x.is_some();
        result.insert("witness".to_string(), json!({"b": w, "point": x}));
    }
    Ok(Report::new("torsion", pass, json!(result)))
}

pub fn cmd_norm(cfg: &RunConfig, b: &str) -> Result<Report> {
    let alg = cfg.algebra()?;
    let e = parse_elem(&alg, b)?;
    let nr = alg.nonreduced_norm(&e)?;
    let integral = alg.is_integral(&e);
    let mut result = json!({
        "b": alg.display(&e),
        "norm": if nr.den().is_one() { nr.num().display().to_string() } else {
            format!("({})/({})", nr.num().display(), nr.den().display())
        },
        "integral": integral,
    });
    let mut pass = true;
    if integral && !alg.is_zero(&e) {
        let idx = alg.order_index_exp(&e)?;
        let deg = alg.norm_integral(&e)?.degree().unwrap();
        result["order_index_log_q"] = json!(idx);
        result["norm_degree"] = json!(deg);
        pass = idx == deg;
    }
    Ok(Report::new("norm", pass, result))
}

pub fn cmd_invariants(cfg: &RunConfig) -> Result<Report> {
    let alg = cfg.algebra()?;
    let inv = alg.invariants();
    let total = inv.iter().fold(QmodZ::zero(), |acc, (_, v)| acc.add(v));
    let map: BTreeMap<String, String> = inv.iter().map(|(pl, v)| (pl.to_string(), v.to_string())).collect();
    Ok(Report::new("invariants", total.is_zero(), json!(map)))
}

pub fn cmd_maximal(cfg: &RunConfig) -> Result<Report> {
    let alg = cfg.algebra()?;
    let disc = alg.order_discriminant();
    let trace = alg.trace_form_discriminant()?;
    let max = alg.maximal_order_discriminant();
    let pass = alg.is_maximal() && trace == disc;
    Ok(Report::new(
        "maximal",
        pass,
        json!({
            "discriminant": disc.display().to_string(),
            "trace_form_discriminant": trace.display().to_string(),
            "maximal_discriminant": max.display().to_string(),
            "is_maximal": alg.is_maximal(),
        }),
    ))
}

pub fn cmd_supersingular(cfg: &RunConfig) -> Result<Report> {
    let phi = cfg.finite_module()?;
    let end = phi.end_ring(cfg.end_bound)?;
    let s = phi.supersingularity(&phi.char_a.clone(), cfg.pi_bound, Some(&end))?;
    let fr = phi.frobenius_data()?;
    let consistent = if s.supersingular { end.a_rank == phi.d() * phi.d() } else { end.a_rank == fr.degree };
    Ok(Report::new(
        "supersingular",
        s.agree && consistent,
        json!({
            "prime": s.prime,
            "criteria": {"connected": s.connected, "pi_power": s.pi_power, "rank": s.rank},
            "agree": s.agree,
            "supersingular": s.supersingular,
            "evidence": s.evidence,
            "frobenius": fr,
            "end": {"a_rank": end.a_rank, "fq_dim": end.fq_dim},
        }),
    ))
}

pub fn cmd_endring(cfg: &RunConfig) -> Result<Report> {
    let phi = cfg.finite_module()?;
    let f = &phi.field;
    let d = phi.d();
    let end = phi.end_ring(cfg.end_bound)?;
    let aut = phi.aut_group(1 << 12)?;
    let disc = if end.a_rank == d * d {
        phi.end_discriminant(&end).ok().map(|p| p.display().to_string())
    } else {
        None
    };
    let hk = f.from_fqd(phi.alg.tower.h).ok_or(Error::FieldMismatch)?;
    let h = SkewMat::scalar_diag(f, &vec![SkewPoly::constant(f, hk); d]);
    let kappa = phi.phi_z.mul(f, &SkewMat::scalar_diag(f, &vec![SkewPoly::tau_pow(f, d - 1); d]));
    let contains_h = phi.end_contains(&end, &h)?;
    let contains_kappa = phi.end_contains(&end, &kappa)?;
    let pass = end.closed && end.isogenies && aut.r.is_some() && aut.cyclic && aut.scalar_partial;
    Ok(Report::new(
        "endring",
        pass,
        json!({
            "end": {
                "bound": end.bound,
                "fq_dim": end.fq_dim,
                "a_rank": end.a_rank,
                "closed": end.closed,
                "discriminant": disc,
                "aut_order": aut.order,
                "contains_h": contains_h,
                "contains_kappa_1": contains_kappa,
            },
            "aut": aut,
        }),
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtSpec {
    pub p: u32,
    /// L = F_{p^e}
    pub e: u32,
    pub relative_degree: u32,
    /// q = p^q_exp (defaults to e, i.e. q = |L|)
    #[serde(default)]
    pub q_exp: Option<u32>,
}

impl ExtSpec {
    pub fn extension(&self) -> Result<GaloisExtension> {
        let qe = self.q_exp.unwrap_or(self.e);
        if qe == 0 || self.e % qe != 0 || self.relative_degree == 0 {
            return Err(Error::Config("extension needs F_q ⊆ L ⊆ K".into()));
        }
        let tower = Tower::from_pqd(self.p, qe, 1)?;
        let l = FiniteCoeff::over_tower(&tower, self.e / qe)?;
        GaloisExtension::new(&l, self.relative_degree)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct H90Bundle {
    pub ext: ExtSpec,
    pub d: usize,
    /// `σ^k` -> matrix
    pub cocycle: BTreeMap<String, Vec<Vec<Vec<u64>>>>,
}

fn sigma_index(key: &str) -> Result<usize> {
    let tail = key.rsplit('^').next().unwrap_or(key);
    match tail.parse() {
        Ok(k) => Ok(k),
        Err(_) if key == "σ" || key == "sigma" => Ok(1),
        Err(_) if key == "1" || key == "id" => Ok(0),
        Err(_) => Err(Error::Config(format!("bad cocycle key `{key}`"))),
    }
}

pub fn cmd_h90(bundle: &H90Bundle) -> Result<Report> {
    let ext = bundle.ext.extension()?;
    let mut c = vec![None; ext.n];
    for (k, v) in &bundle.cocycle {
        let i = sigma_index(k)?;
        if i >= ext.n {
            return Err(Error::Config(format!("σ^{i} outside a group of order {}", ext.n)));
        }
        let m = mat_from_json(&ext.k, v)?;
        if m.rows() != bundle.d {
            return Err(Error::Config("matrix size differs from d".into()));
        }
        c[i] = Some(m);
    }
    let c: Vec<SkewMat<Fe>> = c
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::Config(format!("missing σ^{i}"))))
        .collect::<Result<_>>()?;
    if let Some((i, j)) = cocycle_check(&ext, &c)? {
        return Ok(Report::new("h90", false, json!({"cocycle": false, "violation": [i, j]})));
    }
    let s = hilbert90_solve(&ext, &c)?;
    Ok(Report::new("h90", true, json!({"S": mat_json(&s), "verified": true})))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DescentMethod {
    Moduli,
    Splitting,
}

fn descent_json(out: &Descent) -> (bool, Value) {
    let (pass, checks) = checks_json(&out.checks);
    (
        pass,
        json!({
            "module": finite_module_json(&out.module),
            "aut_order": out.aut_order,
            "ext_degree": out.ext_degree,
            "S": mat_json(&out.s),
            "checks": checks,
        }),
    )
}

fn run_descent(phi: &FiniteModule, ext: &GaloisExtension, method: DescentMethod) -> Result<Descent> {
    let b = DescentBounds::default();
    match method {
        DescentMethod::Moduli => descend_to_moduli_field(phi, ext, &b),
        DescentMethod::Splitting => {
            let e = splitting_element(phi, ext)?
                .ok_or_else(|| Error::Precondition("no element e = ℓ + z with a one-dimensional V".into()))?;
            descend_with_splitting(phi, ext, &e, &b)
        }
    }
}

/// Build the standard module over L, move it to K = L^(rel) and conjugate by the
/// unit `I + β τ E_{0,1}` (β a generator of K), then descend back to L.
pub fn cmd_descend_fixture(cfg: &RunConfig, rel: u32, method: DescentMethod) -> Result<Report> {
    let phi_l = cfg.finite_module()?;
    let ext = GaloisExtension::new(&phi_l.field, rel)?;
    let phi_k = base_change(&phi_l, &ext.k, |v| ext.emb.apply(v));
    let d = phi_l.d();
    let mut s = SkewMat::identity(&ext.k, d);
    if d > 1 {
        s.set(0, 1, SkewPoly::monomial(&ext.k, ext.k.field.generator().unwrap(), 1));
    }
    let hidden = twist(&phi_k, &s)?;
    let out = run_descent(&hidden, &ext, method)?;
    let (pass, mut v) = descent_json(&out);
    v["input_over_L"] = json!(ext.descend(&hidden.phi_z).is_some() && ext.descend(&hidden.phi_h).is_some());
    Ok(Report::new("descend", pass, v))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DescendBundle {
    pub config: RunConfig,
    pub relative_degree: u32,
    pub method: DescentMethod,
    /// generator images over K: keys `T`, `h`, `z`
    pub generators: BTreeMap<String, Vec<Vec<Vec<u64>>>>,
}

pub fn cmd_descend(bundle: &DescendBundle) -> Result<Report> {
    let phi_l = bundle.config.finite_module()?;
    let ext = GaloisExtension::new(&phi_l.field, bundle.relative_degree)?;
    let get = |k: &str| {
        let v = bundle.generators.get(k).ok_or_else(|| Error::Config(format!("missing generator {k}")))?;
        mat_from_json(&ext.k, v)
    };
    let phi_k = base_change(&phi_l, &ext.k, |v| ext.emb.apply(v)).with_generators(get("T")?, get("h")?, get("z")?);
    if let Some(c) = phi_k.relation_checks().into_iter().find(|c| !c.pass) {
        return Err(Error::Config(format!("input module fails relation {}", c.name)));
    }
    let out = run_descent(&phi_k, &ext, bundle.method)?;
    let (pass, v) = descent_json(&out);
    Ok(Report::new("descend", pass, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_report() {
        let cfg = RunConfig::default();
        let r = cmd_invariants(&cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.result, json!({"(T+1)": "1/2", "(T+2)": "1/2", "inf": "0"}));
    }

    #[test]
    fn config_errors() {
        let bad = RunConfig { r: "T^2+".into(), ..RunConfig::default() };
        assert_eq!(error_exit_code(&cmd_invariants(&bad).unwrap_err()), 2);
        let bad = RunConfig { q: 6, ..RunConfig::default() };
        assert!(matches!(bad.algebra(), Err(Error::Config(_))));
        let bad = RunConfig { field: Some("fq^x".into()), ..RunConfig::default() };
        assert!(cmd_verify(&bad).is_err());
    }

    #[test]
    fn finite_verify_report() {
        let cfg = RunConfig { field: Some("fq^2".into()), gamma: Some(0), samples: 3, ..RunConfig::default() };
        assert!(cmd_verify(&cfg).unwrap().pass);
    }

    #[test]
    fn descend_bundle_and_fixture_agree() {
        let cfg = RunConfig {
            q: 4,
            r: "T^2+3T+2".into(),
            field: Some("fq^2".into()),
            gamma: Some(0),
            ..RunConfig::default()
        };
        let phi_l = cfg.finite_module().unwrap();
        let ext = GaloisExtension::new(&phi_l.field, 2).unwrap();
        let mut s = SkewMat::identity(&ext.k, 2);
        s.set(0, 1, SkewPoly::monomial(&ext.k, ext.k.field.generator().unwrap(), 1));
        let hidden = twist(&base_change(&phi_l, &ext.k, |v| ext.emb.apply(v)), &s).unwrap();
        let raw = |m: &SkewMat<Fe>| serde_json::from_value(mat_json(m)).unwrap();
        let bundle = DescendBundle {
            config: cfg.clone(),
            relative_degree: 2,
            method: DescentMethod::Moduli,
            generators: [("T", &hidden.phi_t), ("h", &hidden.phi_h), ("z", &hidden.phi_z)]
                .into_iter()
                .map(|(k, m)| (k.to_string(), raw(m)))
                .collect(),
        };
        let a = cmd_descend(&bundle).unwrap();
        let b = cmd_descend_fixture(&cfg, 2, DescentMethod::Moduli).unwrap();
        assert!(a.pass && b.pass);
        assert_eq!(a.result["module"], b.result["module"]);
        let mut broken = bundle;
        broken.generators.insert("h".into(), raw(&hidden.phi_t));
        assert!(matches!(cmd_descend(&broken), Err(Error::Config(_))));
    }
}
