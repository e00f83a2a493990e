//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use falsetheta::arith::{a1_formula, is_represented, QuadForm};
use falsetheta::congruence::{builtin_claims, check_claim, claims_in, theorem2_family, ClaimFamily};
use falsetheta::identities::{catalog, verify_identity, verify_pair};
use falsetheta::qfactory::{c_t_series, eta, theta_f, ThetaForm};
use falsetheta::{
    evaluate_str, parse, CoeffRing, CongruenceClaim, SeriesCache, Sign, SignedMonomial, TruncatedSeries,
};
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn claims_hold(series: &TruncatedSeries, claims: &[(CongruenceClaim, u64)]) -> Result<u64, String> {
    let mut checked = 0;
    for (c, n_max) in claims {
        let r = check_claim(series, c, *n_max).map_err(|e| format!("{c}: {e}"))?;
        if !r.passed() {
            return Err(format!("{c}: violation at n={}", r.violations[0].n));
        }
        if r.n_checked == 0 {
            return Err(format!("{c}: nothing checked"));
        }
        checked += r.n_checked;
    }
    Ok(checked)
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    if t > budget {
        Err(format!("took {t:?}, budget {budget:?}"))
    } else {
        Ok(t)
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_falsetheta")).args(args).output().expect("binary runs")
}

fn conj(step: u64, offset: u64, m: u64, n_max: u64) -> (CongruenceClaim, u64) {
    let c = claims_in(ClaimFamily::Conjecture)
        .into_iter()
        .find(|c| c.step == step && c.offset == offset && c.modulus == m)
        .expect("cataloged");
    (c, n_max)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let c5 = c_t_series(5, CoeffRing::modular(8).unwrap(), 8192).map_err(|e| e.to_string())?;
    let mut claims = vec![
        conj(32, 31, 8, 255),
        conj(128, 123, 8, 63),
        conj(512, 491, 8, 15),
        conj(64, 19, 4, 127),
        conj(256, 75, 4, 31),
    ];
    for i in [110, 138, 194, 19, 47, 75, 103, 159, 187] {
        claims.push(conj(196, i, 4, 40));
    }
    let n = claims_hold(&c5, &claims)?;
    let t = within(start, Duration::from_secs(30))?;
    let o = cli(&["theorem1", "--terms", "8192"]);
    if o.status.code() != Some(0) {
        return Err(format!("theorem1 exited with {:?}", o.status.code()));
    }
    Ok(format!("{} claims, {n} indices, {t:?}; CLI theorem1 exit 0", claims.len()))
}

fn criterion_2() -> Check {
    let ring4 = CoeffRing::modular(4).unwrap();
    let c5 = c_t_series(5, ring4, 8192).map_err(|e| e.to_string())?;
    let c9 = c_t_series(9, ring4, 8192).map_err(|e| e.to_string())?;
    let known = claims_in(ClaimFamily::Known);
    let pick = |s: &str, a: u64| known.iter().find(|c| c.series == s && c.step == a).unwrap().clone();
    let n = claims_hold(&c5, &[(pick("c5", 8), 1000), (pick("c5", 32), 255)])?
        + claims_hold(&c9, &[(pick("c9", 16), 500)])?;
    Ok(format!("3 claims, {n} indices"))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut total = 0;
    for (p, k, n_max) in [(7, 0, 280), (7, 1, 4), (23, 0, 100)] {
        let c = theorem2_family(p, k).map_err(|e| e.to_string())?;
        let order = c.required_order(n_max).unwrap() as usize;
        let s = c_t_series(5, CoeffRing::modular(4).unwrap(), order).map_err(|e| e.to_string())?;
        let r = check_claim(&s, &c, n_max).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("{c}: violation at n={}", r.violations[0].n));
        }
        if r.n_checked + r.n_skipped != n_max {
            return Err(format!("{c}: range not covered"));
        }
        total += r.n_checked;
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("p=7 k=0, p=7 k=1, p=23 k=0; {total} indices, {t:?}"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let entries = catalog();
    if entries.len() < 22 {
        return Err(format!("only {} entries", entries.len()));
    }
    for e in &entries {
        let order = if e.is_exact() { 1500 } else { 2000 };
        let r = verify_identity(e, order).map_err(|err| err.to_string())?;
        if !r.passed() {
            return Err(format!("{} fails at n={}", e.name, r.violations[0].n));
        }
    }
    let t = within(start, Duration::from_secs(20))?;
    Ok(format!("{} entries, {t:?}", entries.len()))
}

fn criterion_5() -> Check {
    let mut count = 0;
    let mut indices = 0;
    for family in [ClaimFamily::B1, ClaimFamily::B2, ClaimFamily::B3, ClaimFamily::BProd] {
        let claims: Vec<(CongruenceClaim, u64)> = claims_in(family)
            .into_iter()
            .map(|c| {
                let n = if family == ClaimFamily::BProd { 80 } else { c.recommended_n_max() };
                (c, n)
            })
            .collect();
        let order = claims.iter().map(|(c, n)| c.required_order(*n).unwrap()).max().unwrap() as usize;
        let m = falsetheta::congruence::evaluation_modulus(claims.iter().map(|(c, _)| c));
        let s = evaluate_str(&claims[0].0.series, order, m).map_err(|e| e.to_string())?;
        indices += claims_hold(&s, &claims)?;
        count += claims.len();
    }
    if count != 25 {
        return Err(format!("expected 25 lemma claims, found {count}"));
    }
    Ok(format!("{count} claims, {indices} indices"))
}

fn criterion_6() -> Check {
    let r = verify_pair("c5-decomposition", "c5", "b1-2*b2+4*b3", 8, 4000).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("mismatch at n={}", r.violations[0].n));
    }
    Ok(format!("{} coefficients", r.n_checked))
}

fn criterion_7() -> Check {
    let a1 = evaluate_str("f3^6/f1^2", 2000, 0).map_err(|e| e.to_string())?;
    for n in 0..=2000u64 {
        let w = a1_formula(n).map_err(|e| e.to_string())?;
        if a1.coeff(n as usize).unwrap() != w.into() {
            return Err(format!("differs at n={n}"));
        }
    }
    Ok("n = 0..=2000".into())
}

fn criterion_8() -> Check {
    let ring8 = CoeffRing::modular(8).unwrap();
    // reciprocal
    for (text, m) in [("psi(5)", 0), ("A+B", 8), ("f1*f3*f6", 0), ("theta(-q,-q^11)", 4)] {
        let s = evaluate_str(text, 1000, m).map_err(|e| e.to_string())?;
        let one = TruncatedSeries::one(s.ring(), 1000);
        if s.try_mul(&s.invert().unwrap()).unwrap() != one {
            return Err(format!("reciprocal of {text}"));
        }
    }
    // dissection reconstruction
    let c5 = c_t_series(5, CoeffRing::EXACT, 1200).unwrap();
    for m in 1..=12usize {
        let mut back = vec![num_zero(); 1201];
        for r in 0..m {
            for (n, c) in c5.dissect(m, r).to_bigints().into_iter().enumerate() {
                back[m * n + r] = c;
            }
        }
        if TruncatedSeries::from_bigints(CoeffRing::EXACT, back) != c5 {
            return Err(format!("{m}-dissection of c5"));
        }
    }
    // freshman family
    for e in 1..=3u32 {
        let ring = CoeffRing::modular(1 << e).unwrap();
        for k in 1..=3u32 {
            let l = eta(k, ring, 1000).unwrap().pow(1 << e).unwrap();
            let r = eta(2 * k, ring, 1000).unwrap().pow(1 << (e - 1)).unwrap();
            if l != r {
                return Err(format!("f{k}^{} mod {}", 1 << e, 1 << e));
            }
        }
    }
    // triple product
    for ea in 1..=3 {
        for eb in 1..=3 {
            for sa in [Sign::Plus, Sign::Minus] {
                for sb in [Sign::Plus, Sign::Minus] {
                    let a = SignedMonomial { sign: sa, exponent: ea };
                    let b = SignedMonomial { sign: sb, exponent: eb };
                    let s = theta_f(a, b, ThetaForm::Sum, CoeffRing::EXACT, 500).unwrap();
                    let p = theta_f(a, b, ThetaForm::Product, CoeffRing::EXACT, 500).unwrap();
                    if s != p {
                        return Err(format!("triple product at ({a},{b})"));
                    }
                }
            }
        }
    }
    // parity support
    let a2 = evaluate_str("a2", 2000, 2).unwrap();
    let b2 = evaluate_str("dissect(b2;4;3)", 2000, 2).unwrap();
    for n in 0..=2000u64 {
        if a2.residue(n as usize, 2).unwrap() == 1
            && !is_represented(QuadForm::TwiceSquarePlusSquare, 3 * n + 2)
        {
            return Err(format!("a2({n}) odd but 3n+2 not 2x^2+y^2"));
        }
        if b2.residue(n as usize, 2).unwrap() == 1 && !is_represented(QuadForm::SumOfSquares, 3 * n + 2) {
            return Err(format!("b2(4*{n}+3) odd but 3n+2 not x^2+y^2"));
        }
    }
    // cache round trip
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = SeriesCache::new(dir.path()).map_err(|e| e.to_string())?;
    for (text, ring) in [("c5", CoeffRing::EXACT), ("b1", ring8)] {
        let s = evaluate_str(text, 500, ring.modulus()).unwrap();
        cache.store(text, &s).map_err(|e| e.to_string())?;
        if cache.load(text, 500, ring).map_err(|e| e.to_string())? != Some(s) {
            return Err(format!("cache round trip of {text}"));
        }
    }
    // parser round trip over every cataloged expression
    let mut exprs = 0;
    let texts = catalog()
        .into_iter()
        .flat_map(|e| [e.lhs, e.rhs])
        .chain(builtin_claims().into_iter().map(|c| c.series));
    for text in texts {
        let e = parse(&text).map_err(|err| err.to_string())?;
        if parse(&e.to_string()).ok() != Some(e) {
            return Err(format!("round trip of {text}"));
        }
        exprs += 1;
    }
    Ok(format!(
        "reciprocal, dissection, freshman, triple product, parity support, cache, {exprs} parser round trips"
    ))
}

fn num_zero() -> num_bigint::BigInt {
    num_bigint::BigInt::from(0)
}

fn criterion_9() -> Check {
    let args = ["density", "--series", "1/psi(5)", "--mod", "2", "--nmax", "2000", "--format", "json"];
    let a = cli(&args);
    let b = cli(&args);
    if a.status.code() != Some(0) || a.stdout != b.stdout {
        return Err("density run failed or differed between runs".into());
    }
    let v: Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    let count = v["results"][0]["count"].as_u64().unwrap_or(0);
    // frozen regression value, matched by an independent integer recurrence
    if count != 1495 {
        return Err(format!("count {count}, frozen value 1495"));
    }
    Ok("1495 of 2000 coefficients even, identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("c5 mod 8 and mod 4 progressions, N = 8192", criterion_1),
        ("proven c5 and c9 congruences", criterion_2),
        ("prime-power family instances", criterion_3),
        ("identity catalog at default orders", criterion_4),
        ("b1, b2, b3 and b lemma congruences", criterion_5),
        ("c5 = b1 - 2 b2 + 4 b3 mod 8 to n = 4000", criterion_6),
        ("divisor-sum formula for a1(n), n <= 2000", criterion_7),
        ("property suites", criterion_8),
        ("density scan regression", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {title} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
