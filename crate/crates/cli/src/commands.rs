use std::collections::BTreeMap;
use std::thread;

use falsetheta::congruence::{self, check_claim, claims_in, density_scan, theorem2_family, ClaimFamily};
use falsetheta::identities::{catalog, find, verify_pair_cached, IdentityEntry};
use falsetheta::{
    arith, parse, CoeffRing, CongruenceClaim, Error, Evaluator, Result, SeriesCache, TruncatedSeries,
    VerificationReport,
};
use serde_json::{json, Map, Value};

use crate::args::{Command, GlobalOpts};
use crate::output::{Body, Outcome};

pub const DEFAULT_TERMS: usize = 2000;

struct Ctx {
    terms: Option<usize>,
    modulus: Option<u64>,
    jobs: usize,
    cache: Option<SeriesCache>,
}

impl Ctx {
    fn new(g: &GlobalOpts) -> Result<Self> {
        let cache = g.cache_dir.as_ref().map(SeriesCache::new).transpose()?;
        let jobs = g.jobs.unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get())).max(1);
        Ok(Ctx { terms: g.terms, modulus: g.modulus, jobs, cache })
    }

    fn terms(&self) -> usize {
        self.terms.unwrap_or(DEFAULT_TERMS)
    }

    fn evaluate(&self, expr: &str, modulus: u64, order: usize) -> Result<TruncatedSeries> {
        let ring = CoeffRing::new(modulus)?;
        let e = parse(expr)?;
        let mut ev = match &self.cache {
            Some(c) => Evaluator::with_cache(ring, c.clone()),
            None => Evaluator::new(ring),
        };
        ev.evaluate(&e, order).map_err(|err| err.context(format!("evaluating {expr}")))
    }
}

/// Maps `f` over `items` on up to `jobs` threads, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|part| s.spawn(move || part.iter().map(f).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

pub fn run(command: &Command, global: &GlobalOpts) -> Result<Outcome> {
    let ctx = Ctx::new(global)?;
    match command {
        Command::Expand { expr } => expand(&ctx, expr),
        Command::VerifyId { name, lhs, rhs } => {
            verify_id(&ctx, name.as_deref(), lhs.as_deref(), rhs.as_deref())
        }
        Command::VerifyCong { series, step, offset, modulus, exclude_p, nmax } => {
            let mut claim = CongruenceClaim::build(
                series,
                *step,
                *offset,
                *modulus,
                None,
                ClaimFamily::Custom,
            )
            .or_else(|e| match (e, exclude_p) {
                // offsets past the step are allowed once an exclusion is given
                (Error::InvalidClaim(_), Some(p)) => {
                    CongruenceClaim::build(series, *step, *offset, *modulus, Some(*p), ClaimFamily::Custom)
                }
                (e, _) => Err(e),
            })?;
            if let Some(p) = exclude_p {
                claim = claim.with_exclusion(*p)?;
            }
            single_claim(&ctx, "verify-cong", claim, *nmax)
        }
        Command::Theorem1 { with_lemmas } => theorem1(&ctx, *with_lemmas),
        Command::Theorem2 { p, k, nmax } => single_claim(&ctx, "theorem2", theorem2_family(*p, *k)?, *nmax),
        Command::A1Formula { nmax } => a1_formula_check(&ctx, *nmax),
        Command::AuditValuation { p, k, nmax } => Ok(Outcome {
            command: "audit-valuation",
            params: params(&[("p", json!(p)), ("k", json!(k)), ("nmax", json!(nmax))]),
            body: Body::Reports(vec![arith::valuation_parity_audit(*p, *k, *nmax)?]),
        }),
        Command::Density { series, nmax } => density(&ctx, series, *nmax),
        Command::Catalog => Ok(Outcome {
            command: "catalog",
            params: Map::new(),
            body: Body::Catalog { identities: catalog(), claims: congruence::builtin_claims() },
        }),
    }
}

fn expand(ctx: &Ctx, expr: &str) -> Result<Outcome> {
    let modulus = ctx.modulus.unwrap_or(0);
    let order = ctx.terms();
    let s = ctx.evaluate(expr, modulus, order)?;
    let values = s.to_bigints().iter().map(|c| c.to_string()).collect();
    Ok(Outcome {
        command: "expand",
        params: params(&[("expr", json!(expr)), ("terms", json!(order)), ("mod", json!(modulus))]),
        body: Body::Coefficients { expr: parse(expr)?.to_string(), modulus, values },
    })
}

fn verify_id(ctx: &Ctx, name: Option<&str>, lhs: Option<&str>, rhs: Option<&str>) -> Result<Outcome> {
    let entries: Vec<IdentityEntry> = match (name, lhs, rhs) {
        (_, Some(l), Some(r)) => vec![IdentityEntry {
            name: format!("{l} = {r}"),
            lhs: l.to_string(),
            rhs: r.to_string(),
            modulus: ctx.modulus.unwrap_or(0),
            default_order: DEFAULT_TERMS,
        }],
        (Some(n), _, _) => vec![find(n).ok_or_else(|| Error::UnknownIdentity(n.to_string()))?],
        _ => catalog(),
    };
    let reports = par_map(&entries, ctx.jobs, |e| {
        // an explicit --mod overrides the entry's own modulus for named entries
        let modulus = if lhs.is_some() { e.modulus } else { ctx.modulus.unwrap_or(e.modulus) };
        let order = ctx.terms.unwrap_or(e.default_order);
        verify_pair_cached(&e.name, &e.lhs, &e.rhs, modulus, order, ctx.cache.clone())
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let mut p = vec![("terms", json!(ctx.terms))];
    if let Some(n) = name {
        p.push(("name", json!(n)));
    }
    if let (Some(l), Some(r)) = (lhs, rhs) {
        p.push(("lhs", json!(l)));
        p.push(("rhs", json!(r)));
    }
    p.push(("mod", json!(ctx.modulus)));
    Ok(Outcome { command: "verify-id", params: params(&p), body: Body::Reports(reports) })
}

/// Order and `n_max` for one claim: an explicit `nmax` fixes the order,
/// otherwise `n_max` is the largest one `--terms` supports.
fn claim_range(ctx: &Ctx, claim: &CongruenceClaim, nmax: Option<u64>) -> Result<(usize, u64)> {
    match nmax {
        Some(n) => {
            let order = claim.required_order(n).ok_or(Error::ExponentOverflow)?;
            let order = usize::try_from(order).map_err(|_| Error::ExponentOverflow)?;
            Ok((ctx.terms.map_or(order, |t| t.max(order)), n))
        }
        None => {
            let order = ctx.terms();
            Ok((order, claim.n_max_for_order(order)))
        }
    }
}

fn single_claim(
    ctx: &Ctx,
    command: &'static str,
    claim: CongruenceClaim,
    nmax: Option<u64>,
) -> Result<Outcome> {
    let (order, n_max) = claim_range(ctx, &claim, nmax)?;
    let modulus = ctx.modulus.unwrap_or(claim.modulus);
    let s = ctx.evaluate(&claim.series, modulus, order)?;
    let report = check_claim(&s, &claim, n_max)?;
    Ok(Outcome {
        command,
        params: params(&[
            ("series", json!(claim.series)),
            ("A", json!(claim.step)),
            ("B", json!(claim.offset)),
            ("M", json!(claim.modulus)),
            ("exclude_p", json!(claim.exclude_p)),
            ("nmax", json!(n_max)),
            ("terms", json!(order)),
            ("mod", json!(modulus)),
        ]),
        body: Body::Reports(vec![report]),
    })
}

fn theorem1(ctx: &Ctx, with_lemmas: bool) -> Result<Outcome> {
    let order = ctx.terms();
    let mut claims = claims_in(ClaimFamily::Conjecture);
    // series -> ring modulus; c5 follows --mod, lemma series use the lcm of their moduli
    let mut rings: BTreeMap<String, u64> = BTreeMap::new();
    rings.insert("c5".into(), ctx.modulus.unwrap_or(8));
    if with_lemmas {
        for family in [ClaimFamily::B1, ClaimFamily::B2, ClaimFamily::B3, ClaimFamily::BProd] {
            let fam = claims_in(family);
            let m = congruence::evaluation_modulus(&fam);
            rings.insert(fam[0].series.clone(), m);
            claims.extend(fam);
        }
    }
    let groups: Vec<(String, u64)> = rings.into_iter().collect();
    let series = par_map(&groups, ctx.jobs, |(name, m)| ctx.evaluate(name, *m, order));
    let series: BTreeMap<&str, TruncatedSeries> = groups
        .iter()
        .map(|(n, _)| n.as_str())
        .zip(series)
        .map(|(n, s)| s.map(|s| (n, s)))
        .collect::<Result<_>>()?;
    let reports =
        par_map(&claims, ctx.jobs, |c| check_claim(&series[c.series.as_str()], c, c.n_max_for_order(order)));
    let reports = reports.into_iter().collect::<Result<Vec<VerificationReport>>>()?;
    Ok(Outcome {
        command: "theorem1",
        params: params(&[
            ("terms", json!(order)),
            ("mod", json!(ctx.modulus.unwrap_or(8))),
            ("with_lemmas", json!(with_lemmas)),
        ]),
        body: Body::Reports(reports),
    })
}

fn a1_formula_check(ctx: &Ctx, nmax: u64) -> Result<Outcome> {
    let start = std::time::Instant::now();
    let order = usize::try_from(nmax).map_err(|_| Error::ExponentOverflow)?;
    let a1 = ctx.evaluate("a1", 0, order)?;
    let mut report = VerificationReport::new("a1-formula");
    for n in 0..nmax {
        let formula = arith::a1_formula(n)?;
        let coeff = a1.coeff(n as usize)?;
        if coeff != formula.into() {
            report.violations.push(falsetheta::Violation {
                n,
                value: formula.to_string(),
                expected: Some(coeff.to_string()),
            });
        }
        report.n_checked += 1;
    }
    report.elapsed = start.elapsed();
    Ok(Outcome {
        command: "a1-formula",
        params: params(&[("nmax", json!(nmax))]),
        body: Body::Reports(vec![report]),
    })
}

fn density(ctx: &Ctx, series: &str, nmax: u64) -> Result<Outcome> {
    let modulus = ctx.modulus.unwrap_or(2);
    if modulus < 2 {
        return Err(Error::InvalidModulus(modulus));
    }
    let order = usize::try_from(nmax.saturating_sub(1)).map_err(|_| Error::ExponentOverflow)?;
    let s = ctx.evaluate(series, modulus, order)?;
    let density = density_scan(&s, modulus, nmax)?;
    Ok(Outcome {
        command: "density",
        params: params(&[("series", json!(series)), ("mod", json!(modulus)), ("nmax", json!(nmax))]),
        body: Body::Density { series: series.to_string(), modulus, density },
    })
}
