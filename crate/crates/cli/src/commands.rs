use std::fs;
use std::time::Instant;

use anyhow::{Context, Result};
use bcdaha::exact::{RatFunc, Rational, Scalar};
use bcdaha::functors::{
    admissible_mus, build_daha, build_ddaha, parse_even_laurent, theta_star, y_lambda,
    FunctorError, FunctorOutput,
};
use bcdaha::glmodules::{CatalogKind, CatalogModule, ModuleError, SymmetricPair};
use bcdaha::presentations::{
    relation_set, shift_to_drinfeld, verify, Fault, Perturbed, Presentation, Representation,
    ShiftedRep, Status, VerificationReport,
};
use bcdaha::rootsys_dunkl::{commutativity_relations, monomial_domain, sample_params, DunklParams, LaurentRep};
use serde_json::{json, Value};

use crate::config::{
    config_error, BuildDahaArgs, BuildDdahaArgs, Cli, Command, Common, ConfigError, ThetaArgs,
    VerifyDunklArgs,
};

const DUNKL_LAW: &str = "dDAHA parameters (t, k1, k2, k3) equal the Dunkl parameters";
const TENSORFIELD_LAW: &str = "kappa1 = 1, kappa2 = -2*mu on the gl_2 tensor-field module of weight lambda";

/// Runs one command; `Ok(false)` means some relation did not hold.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::VerifyDunkl(a) => verify_dunkl(&a),
        Command::BuildDaha(a) => build_daha_cmd(&a),
        Command::BuildDdaha(a) => build_ddaha_cmd(&a),
        Command::Theta(a) => theta_cmd(&a),
    }
}

/// Size guards and input errors exit with 3; everything else is internal.
fn lift(e: FunctorError) -> anyhow::Error {
    match e {
        FunctorError::TooLarge { .. } | FunctorError::Invalid(_) | FunctorError::Module(_) => {
            ConfigError(e.to_string()).into()
        }
        other => other.into(),
    }
}

fn check_n(c: &Common) -> Result<()> {
    if c.n == 0 {
        return config_error("n must be at least 1");
    }
    if c.n > c.max_n {
        return config_error(format!("size guard: n = {} exceeds --max-n {}", c.n, c.max_n));
    }
    Ok(())
}

fn pair(c: &Common) -> Result<SymmetricPair> {
    SymmetricPair::new(c.p, c.q).map_err(|e: ModuleError| ConfigError(e.to_string()).into())
}

fn fault(c: &Common) -> Result<Option<Fault>> {
    c.inject_fault
        .as_deref()
        .map(|s| s.parse::<Fault>().map_err(|e| ConfigError(format!("--inject-fault {s:?}: {e}")).into()))
        .transpose()
}

fn scalar(name: &str, text: &str) -> Result<RatFunc> {
    text.parse::<RatFunc>().map_err(|e| ConfigError(format!("--{name} {text:?}: {e}")).into())
}

fn rational(name: &str, text: &str) -> Result<Rational> {
    match scalar(name, text)?.as_constant() {
        Some(r) => Ok(r),
        None => config_error(format!("--{name} must be a rational number, got {text:?}")),
    }
}

fn verify_with_fault<R: Representation>(
    rep: &R,
    fault: Option<&Fault>,
    rels: &[bcdaha::presentations::RelationExpression<R::Scalar>],
    domain: &[bcdaha::presentations::DomainVector<R::Vector>],
) -> Result<VerificationReport> {
    Ok(match fault {
        Some(f) => verify(&Perturbed::new(rep, f), rels, domain)?,
        None => verify(rep, rels, domain)?,
    })
}

fn summary(report: &VerificationReport) -> Value {
    json!({
        "relations": report.results.len(),
        "ok": report.count(Status::Ok),
        "fail": report.count(Status::Fail),
        "partial": report.count(Status::Partial),
        "checked": report.checked(),
        "skipped": report.skipped(),
    })
}

/// Adds run metadata, writes the artifact once and reports on stderr.
fn emit(command: &str, c: &Common, config: Value, mut doc: Value, report: &VerificationReport, start: Instant) -> Result<bool> {
    doc["command"] = json!(command);
    doc["seed"] = json!(c.seed);
    doc["config"] = config;
    doc["summary"] = summary(report);
    doc["skipped"] = json!(report.skipped());
    doc["status"] = json!(if report.all_ok() { "ok" } else if report.any_fail() { "fail" } else { "partial" });
    doc["wall_time_ms"] = if c.deterministic { Value::Null } else { json!(start.elapsed().as_millis() as u64) };
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match &c.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    for f in report.failures().take(5) {
        eprintln!(
            "FAIL {} at {} (residual {})",
            f.relation,
            f.witness.as_deref().unwrap_or("?"),
            f.residual.as_deref().unwrap_or("?")
        );
    }
    eprintln!(
        "{command}: {} of {} relations ok, {} checks, {} skipped",
        report.count(Status::Ok),
        report.results.len(),
        report.checked(),
        report.skipped()
    );
    Ok(report.all_ok())
}

fn verify_dunkl(a: &VerifyDunklArgs) -> Result<bool> {
    let start = Instant::now();
    check_n(&a.common)?;
    if a.window < 0 {
        return config_error("--window must be nonnegative");
    }
    let vectors = (2 * a.window as u128 + 1).checked_pow(a.common.n as u32).unwrap_or(u128::MAX);
    if vectors > a.common.max_domain as u128 {
        return config_error(format!(
            "size guard: {vectors} domain monomials exceed --max-domain {}",
            a.common.max_domain
        ));
    }
    let fault = fault(&a.common)?;
    let sample = sample_params(a.common.seed, 1).remove(0);
    let pick = |name: &str, given: &Option<String>, fallback: &Rational| -> Result<RatFunc> {
        match given {
            Some(text) => scalar(name, text),
            None if a.symbolic => Ok(RatFunc::symbol(name)),
            None => Ok(RatFunc::constant(fallback.clone())),
        }
    };
    let params = DunklParams {
        t: pick("t", &a.t, &sample.t)?,
        k1: pick("k1", &a.k1, &sample.k1)?,
        k2: pick("k2", &a.k2, &sample.k2)?,
        k3: pick("k3", &a.k3, &sample.k3)?,
    };
    let constants = [&params.t, &params.k1, &params.k2, &params.k3].map(|v| v.as_constant());
    let (report, entries) = match constants {
        [Some(t), Some(k1), Some(k2), Some(k3)] => dunkl_suites(a, DunklParams { t, k1, k2, k3 }, fault.as_ref())?,
        _ => dunkl_suites(a, params, fault.as_ref())?,
    };
    let doc = json!({
        "algebra": "dDAHA",
        "n": a.common.n,
        "window": a.window,
        "params": entries,
        "law": DUNKL_LAW,
        "report": report,
    });
    emit("verify-dunkl", &a.common, serde_json::to_value(a)?, doc, &report, start)
}

fn dunkl_suites<S: Scalar>(
    a: &VerifyDunklArgs,
    params: DunklParams<S>,
    fault: Option<&Fault>,
) -> Result<(VerificationReport, Value)> {
    let n = a.common.n;
    let pres = params.to_presentation_params();
    let entries: serde_json::Map<String, Value> =
        pres.entries().into_iter().map(|(k, v)| (k.to_string(), json!(v.to_export_string()))).collect();
    let rep = LaurentRep::new(n, params)?;
    let domain = monomial_domain::<S>(n, a.window);
    let mut report = verify_with_fault(&rep, fault, &commutativity_relations(n), &domain)?;
    report.extend(verify_with_fault(&rep, fault, &relation_set(Presentation::Lusztig, n, &pres), &domain)?);
    let drinfeld = relation_set(Presentation::Drinfeld, n, &pres);
    let shift = shift_to_drinfeld(n, &pres);
    report.extend(match fault {
        Some(f) => {
            let bad = Perturbed::new(&rep, f);
            verify(&ShiftedRep::new(&bad, shift), &drinfeld, &domain)?
        }
        None => verify(&ShiftedRep::new(&rep, shift), &drinfeld, &domain)?,
    });
    Ok((report, Value::Object(entries)))
}

fn functor_report<S: Scalar>(out: &FunctorOutput<S>, fault: Option<&Fault>) -> Result<VerificationReport> {
    let rels = relation_set(Presentation::Drinfeld, out.n, &out.params);
    verify_with_fault(&out.rep, fault, &rels, &out.domain())
}

fn build_daha_cmd(a: &BuildDahaArgs) -> Result<bool> {
    let start = Instant::now();
    check_n(&a.common)?;
    let pair = pair(&a.common)?;
    let fault = fault(&a.common)?;
    let n = a.common.n;
    let (doc, report) = if a.module == "tensorfield" {
        if (pair.p, pair.q) != (1, 1) {
            return config_error("the tensor-field module is a gl_2-module; use --p 1 --q 1");
        }
        let param = |name: &str, given: &Option<String>| -> Result<RatFunc> {
            match given {
                Some(text) => scalar(name, text),
                None if a.symbolic => Ok(RatFunc::symbol(name)),
                None => config_error(format!("--{name} is required unless --symbolic is set")),
            }
        };
        let (lambda, mu) = (param("lambda", &a.lambda)?, param("mu", &a.mu)?);
        match (lambda.as_constant(), mu.as_constant()) {
            (Some(l), Some(m)) => tensorfield(n, &l, &m, fault.as_ref())?,
            _ => tensorfield(n, &lambda, &mu, fault.as_ref())?,
        }
    } else {
        let kind: CatalogKind = a.module.parse().map_err(|e: ModuleError| ConfigError(e.to_string()))?;
        let module = CatalogModule::<Rational>::new(kind, pair.n()).map_err(|e| ConfigError(e.to_string()))?;
        let Some(text) = a.mu.as_deref() else {
            let mus = admissible_mus(&module, n, pair).map_err(lift)?;
            let list: Vec<String> = mus.iter().map(|m| m.to_string()).collect();
            return config_error(format!(
                "--mu is required for catalog modules; values with nonzero invariants: {}",
                list.join(", ")
            ));
        };
        let mu = rational("mu", text)?;
        let out = build_daha(&module, n, pair, &mu).map_err(lift)?;
        let report = functor_report(&out, fault.as_ref())?;
        let mut doc = out.to_json(Some(&report));
        doc["module"] = json!(a.module);
        if out.dim() == 0 {
            eprintln!("note: no invariant vectors at mu = {mu}; every relation holds vacuously");
        }
        (doc, report)
    };
    emit("build-daha", &a.common, serde_json::to_value(a)?, doc, &report, start)
}

fn tensorfield<S: Scalar>(n: usize, lambda: &S, mu: &S, fault: Option<&Fault>) -> Result<(Value, VerificationReport)> {
    let out = y_lambda(n, lambda, mu).map_err(lift)?;
    let report = functor_report(&out, fault)?;
    let mut doc = out.to_json(Some(&report));
    doc["module"] = json!("tensorfield");
    doc["lambda"] = json!(lambda.to_export_string());
    doc["law"] = json!(TENSORFIELD_LAW);
    Ok((doc, report))
}

/// σ = λ + μ from --sigma, from --lambda and --mu, or n/2 by default.
fn ddaha_sigma(a: &BuildDdahaArgs) -> Result<Rational> {
    match (&a.sigma, &a.lambda, &a.mu) {
        (Some(s), None, None) => rational("sigma", s),
        (None, Some(l), Some(m)) => Ok(rational("lambda", l)? + rational("mu", m)?),
        (None, None, None) => Ok(Rational::new(a.common.n as i64, 2)?),
        _ => config_error("give either --sigma or both --lambda and --mu"),
    }
}

fn build_ddaha_cmd(a: &BuildDdahaArgs) -> Result<bool> {
    let start = Instant::now();
    check_n(&a.common)?;
    pair(&a.common)?;
    let fault = fault(&a.common)?;
    let sigma = ddaha_sigma(a)?;
    let b = build_ddaha(a.common.p, a.common.q, a.common.n, a.window, &sigma, a.common.seed).map_err(lift)?;
    if b.dim() > a.common.max_domain {
        return config_error(format!("size guard: {} invariant vectors exceed --max-domain", b.dim()));
    }
    let rep = b.rep();
    let (relations, supporting) = match &fault {
        Some(f) => {
            let bad = Perturbed::new(&rep, f);
            (b.verify_relations(&bad).map_err(lift)?, b.verify_supporting(&bad).map_err(lift)?)
        }
        None => (b.verify_relations(&rep).map_err(lift)?, b.verify_supporting(&rep).map_err(lift)?),
    };
    let mut doc = b.to_json(&[("report", &relations), ("lemmas", &supporting)]);
    let mut all = relations.clone();
    all.extend(supporting);
    if b.dim() == 0 {
        doc["note"] = json!("no invariant vectors in this window; sigma must lie in n/2 + Z for N = 2");
    }
    emit("build-ddaha", &a.common, serde_json::to_value(a)?, doc, &all, start)
}

fn theta_cmd(a: &ThetaArgs) -> Result<bool> {
    let start = Instant::now();
    check_n(&a.common)?;
    let pair = pair(&a.common)?;
    let g = parse_even_laurent(&a.g).map_err(lift)?;
    let sigma = match (&a.sigma, &a.lambda, &a.mu) {
        (Some(s), None, None) => scalar("sigma", s)?,
        (None, l, m) => {
            let l = l.as_deref().map_or(Ok(RatFunc::symbol("lambda")), |t| scalar("lambda", t))?;
            let m = m.as_deref().map_or(Ok(RatFunc::symbol("mu")), |t| scalar("mu", t))?;
            l.add(&m)
        }
        _ => return config_error("give either --sigma or --lambda/--mu"),
    };
    if a.common.inject_fault.is_some() {
        return config_error("theta has no relation suite to perturb");
    }
    let ts = theta_star(&g, a.common.n, pair, &sigma).map_err(lift)?;
    let terms: Vec<String> = std::iter::once(format!("({})", ts.constant))
        .chain(ts.trace_coeffs.iter().map(|(k, c)| format!("({c})*tr(X^{k})")))
        .collect();
    eprintln!("theta*(sum_m g(X_m)) = {}", terms.join(" + "));
    let mut doc = ts.to_json();
    doc["n"] = json!(a.common.n);
    doc["p"] = json!(pair.p);
    doc["q"] = json!(pair.q);
    doc["sigma"] = json!(sigma.to_export_string());
    doc["law"] = json!("theta*(sum g(X_m)) = n*g(1) + c1*tr(g(X) - g(1)), c1 = n/N + (lambda+mu)(q-p)/2");
    emit("theta", &a.common, serde_json::to_value(a)?, doc, &VerificationReport::default(), start)
}
