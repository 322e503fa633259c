use std::sync::Arc;

use ellkit::formal::{
    evaluate_at_character, hopf_invariants, inversion_twist, lowest_surviving_degree, prosystem_divisibility_check,
    reduce_mod_torsion_ideal, torsion_ideal_membership, torsion_points, QuasiLinearSet,
};
use ellkit::formal::{exp_minus_one, log_one_plus};
use ellkit::mellin::{
    build_mellin_complex, fiber_dims_at, fiber_dims_via_group_ring, generic_dims, jumping_locus_of, level_points,
    verify_quasilinear, MonodromyData,
};
use ellkit::padic::{binom_valuation, binom_valuation_closed_form, ExtensionKind, PadicScalar, RingParams};
use ellkit::tate::{
    certify_unit_ideal, format_rational_poly, graded_closure_check, weil_condition_check, Exponent, SigmaAction,
    TruncatedSeries,
};
use ellkit::Error;
use num_rational::Ratio;

use crate::problem::{parse_int_list, Block, Config, Fields};
use crate::CliError;

/// A decided verdict with the lines that support it.
pub struct Verdict {
    pub pass: bool,
    pub lines: Vec<String>,
}

type Outcome = Result<Verdict, CliError>;

const MAX_BINOM_RANGE: u64 = 1 << 16;

fn allowed(task: &str) -> &'static [&'static str] {
    match task {
        "unit-cert" => &["sigma", "g", "max-steps"],
        "grade-check" => &["sigma", "n", "generators"],
        "weil-check" => &["charpoly"],
        "explog" => &["t", "radius", "digits"],
        "group-law-check" => &["vars", "g", "a", "c"],
        "torsion" | "twist" => &["vars", "g", "level"],
        "divisibility" => &["m", "level"],
        "mellin" => &["data", "level"],
        "jump" => &["data", "i", "j", "level"],
        "verify-qlin" => &["data", "i", "j", "level", "set"],
        _ => &[],
    }
}

pub fn run_block(block: &Block, cfg: &Config) -> Outcome {
    let keys = allowed(&block.name);
    if let Some((k, _)) = block.fields.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
        return Err(CliError::Malformed(format!("line {}: unknown key `{k}` in [{}]", block.line, block.name)));
    }
    let mut f = Fields::new(block);
    let out = match block.name.as_str() {
        "unit-cert" => unit_cert(&mut f, cfg),
        "grade-check" => grade_check(&mut f, cfg),
        "weil-check" => weil_check(&mut f),
        "explog" => explog(&mut f, cfg),
        "group-law-check" => group_law_check(&mut f, cfg),
        "torsion" => torsion(&mut f, cfg),
        "divisibility" => divisibility(&mut f, cfg),
        "mellin" => mellin(&mut f, cfg),
        "jump" => jump(&mut f, cfg),
        "verify-qlin" => verify_qlin(&mut f, cfg),
        "twist" => twist(&mut f, cfg),
        other => return Err(CliError::Malformed(format!("unknown task `{other}`"))),
    }?;
    f.finish()?;
    Ok(out)
}

fn series_lines(g: &TruncatedSeries) -> Vec<String> {
    let text = g.to_string();
    let mut lines: Vec<String> = text.lines().skip(2).map(str::to_string).collect();
    if lines.is_empty() {
        lines.push("0".into());
    }
    lines
}

/// `[e]:c + [e]:c + ...`; the number of variables is taken from `vars` or the
/// first exponent.
fn parse_series(cfg: &Config, vars: Option<usize>, text: &str) -> Result<TruncatedSeries, CliError> {
    let mut terms = Vec::new();
    for t in text.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let (e, c) = t
            .split_once(':')
            .ok_or_else(|| CliError::Malformed(format!("expected `[exponent]:scalar`, got `{t}`")))?;
        let e = Exponent::parse(e).map_err(|e| CliError::Malformed(e.to_string()))?;
        if e.degree() > cfg.degree {
            return Err(CliError::Malformed(format!("monomial {e} exceeds degree {}", cfg.degree)));
        }
        let c = PadicScalar::parse_or_int(&cfg.params, c).map_err(|e| CliError::Malformed(e.to_string()))?;
        terms.push((e, c));
    }
    let b = match (vars, terms.first()) {
        (Some(b), _) => b,
        (None, Some((e, _))) => e.nvars(),
        (None, None) => return Err(CliError::Malformed("empty series needs `vars`".into())),
    };
    if let Some((e, _)) = terms.iter().find(|(e, _)| e.nvars() != b) {
        return Err(CliError::Malformed(format!("monomial {e} does not have {b} variables")));
    }
    TruncatedSeries::from_terms(&cfg.params, b, cfg.degree, terms).map_err(|e| CliError::Malformed(e.to_string()))
}

fn take_series(f: &mut Fields, cfg: &Config, vars: Option<usize>) -> Result<TruncatedSeries, CliError> {
    let vars = match (vars, f.take("vars")) {
        (Some(b), _) => Some(b),
        (None, Some(v)) => Some(v.trim().parse().map_err(|_| CliError::Malformed(format!("bad vars `{v}`")))?),
        (None, None) => None,
    };
    parse_series(cfg, vars, &f.require("g")?)
}

/// `[a1, a2]` for a diagonal action or `[[..],[..]]` for a matrix.
fn parse_sigma(params: &Arc<RingParams>, text: &str) -> Result<SigmaAction, CliError> {
    let t = text.trim();
    if t.starts_with("[[") {
        let inner = &t[1..t.len() - 1];
        let rows = inner
            .split(']')
            .map(|r| r.trim_start_matches(',').trim())
            .filter(|r| !r.is_empty())
            .map(parse_int_list)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SigmaAction::from_int_matrix(params, &rows)?)
    } else {
        Ok(SigmaAction::diagonal_ints(params, &parse_int_list(t)?)?)
    }
}

/// Coefficients low degree first, either as a list or as a polynomial in `x`
/// such as `x^2 - 3*x + 5`.
pub fn parse_poly(text: &str) -> Result<Vec<i64>, CliError> {
    let t = text.trim();
    if !t.contains('x') {
        return parse_int_list(t);
    }
    let bad = || CliError::Malformed(format!("bad polynomial `{t}`"));
    let spaced = t.replace(' ', "").replace('-', "+-");
    let mut coeffs: Vec<i64> = Vec::new();
    for term in spaced.split('+').filter(|s| !s.is_empty()) {
        let (c, d) = match term.split_once('x') {
            None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some((c, p)) => {
                let c = match c.trim_end_matches('*') {
                    "" => 1,
                    "-" => -1,
                    s => s.parse::<i64>().map_err(|_| bad())?,
                };
                let d = match p {
                    "" => 1,
                    p => p.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(bad)?,
                };
                (c, d)
            }
        };
        if coeffs.len() <= d {
            coeffs.resize(d + 1, 0);
        }
        coeffs[d] += c;
    }
    Ok(coeffs)
}

fn parse_ratio(text: &str) -> Result<Ratio<i64>, CliError> {
    let bad = || CliError::Malformed(format!("bad rational `{text}`"));
    match text.trim().split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(a, b))
        }
        None => Ok(Ratio::from_integer(text.trim().parse().map_err(|_| bad())?)),
    }
}

fn level(f: &mut Fields, cfg: &Config) -> Result<u32, CliError> {
    let n = cfg.level.unwrap_or(f.parsed("level", 1u32)?);
    if n == 0 {
        return Err(CliError::Malformed("level must be at least 1".into()));
    }
    Ok(n)
}

fn data(f: &mut Fields, cfg: &Config) -> Result<MonodromyData, CliError> {
    MonodromyData::parse(cfg.params.prime(), &f.require("data")?).map_err(|e| CliError::Malformed(e.to_string()))
}

fn ids(ids: &[Vec<u64>]) -> String {
    let items: Vec<String> = ids
        .iter()
        .map(|k| format!("[{}]", k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    items.join(" ")
}

fn dims(d: &[usize]) -> String {
    format!("[{}]", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn unit_cert(f: &mut Fields, cfg: &Config) -> Outcome {
    let sigma = parse_sigma(&cfg.params, &f.require("sigma")?)?;
    let g = take_series(f, cfg, Some(sigma.dim()))?;
    let max = f.parsed("max-steps", Exponent::all_up_to(sigma.dim(), cfg.degree).len())?;
    let cert = certify_unit_ideal(&g, &sigma, max)?;
    let pass = cert.verify()?;
    let mut lines = vec![format!("length={}", cert.len())];
    lines.extend(cert.to_string().lines().map(str::to_string));
    lines.push(format!("replay={}", if pass { "one" } else { "mismatch" }));
    Ok(Verdict { pass, lines })
}

fn grade_check(f: &mut Fields, cfg: &Config) -> Outcome {
    let sigma = parse_sigma(&cfg.params, &f.require("sigma")?)?;
    let n = f.parsed("n", cfg.degree + 1)?;
    let gens = f
        .require("generators")?
        .lines()
        .map(|l| parse_series(cfg, Some(sigma.dim()), l))
        .collect::<Result<Vec<_>, _>>()?;
    let v = graded_closure_check(&gens, &sigma, n)?;
    let mut lines = vec![
        format!("input_dim={} closure_dim={}", v.input_dim, v.closure_dim),
        format!("input_stable={} closure_stable={}", v.input_span_stable, v.closure_is_stable),
        format!("graded={} components_in_closure={}", v.graded, v.components_in_closure),
    ];
    lines.extend(v.closure_basis.iter().map(|p| format!("basis {}", format_rational_poly(p))));
    Ok(Verdict { pass: v.graded && v.closure_is_stable && v.components_in_closure, lines })
}

fn weil_check(f: &mut Fields) -> Outcome {
    let cp = parse_poly(&f.require("charpoly")?)?;
    let v = weil_condition_check(&cp).map_err(|e| CliError::Malformed(e.to_string()))?;
    Ok(Verdict { pass: v.pass(), lines: vec![v.to_string()] })
}

fn explog(f: &mut Fields, cfg: &Config) -> Outcome {
    let p = &cfg.params;
    let t = PadicScalar::parse_or_int(p, &f.require("t")?).map_err(|e| CliError::Malformed(e.to_string()))?;
    let radius = match f.take("radius") {
        Some(r) => parse_ratio(&r)?,
        None => Ratio::from_integer(if p.prime() == 2 { 2 } else { 1 }),
    };
    let digits = f.take("digits").map(|d| d.trim().parse::<u32>()).transpose();
    let digits = digits.map_err(|_| CliError::Malformed("bad `digits`".into()))?;
    let x = exp_minus_one(&t, radius)?;
    let back = log_one_plus(&x, radius)?;
    let e = PadicScalar::one(p).add(&x);
    let mut lines = vec![format!("exp(t) = {e}"), format!("log(exp(t)) = {back}")];
    if let Some(k) = digits {
        let rep = e.representative_mod(k)?;
        lines.push(format!("exp(t) mod {}^{k} = {}", p.prime(), ids(&[rep])));
    }
    Ok(Verdict { pass: back.eq_within_precision(&t), lines })
}

fn group_law_check(f: &mut Fields, cfg: &Config) -> Outcome {
    let g = take_series(f, cfg, None)?;
    let a = f.parsed("a", 1u32)?;
    let c = f.parsed("c", 1u32)?;
    let r = hopf_invariants(&g, a, c)?;
    Ok(Verdict { pass: r.pass(), lines: vec![r.to_string()] })
}

fn torsion(f: &mut Fields, cfg: &Config) -> Outcome {
    let p = &cfg.params;
    if p.kind() != ExtensionKind::Trivial {
        return Err(CliError::Malformed("torsion needs coefficients in Q_ell".into()));
    }
    let g = take_series(f, cfg, None)?;
    let n = level(f, cfg)?;
    let e = (p.prime() - 1) * p.prime().pow(n - 1);
    let pc = RingParams::cyclotomic(p.prime(), n, p.precision() * e as u32)?;
    let member = torsion_ideal_membership(&g, n)?;
    let chars = torsion_points(&pc, n, g.nvars())?;
    let mut zeros = 0;
    for chi in &chars {
        zeros += evaluate_at_character(&g, chi)?.is_zero() as usize;
    }
    let vanishes = zeros == chars.len();
    let mut lines = vec![
        format!("member={member}"),
        format!("vanishing at {zeros} of {} characters of order dividing {}^{n}", chars.len(), p.prime()),
    ];
    for (k, c) in reduce_mod_torsion_ideal(&g, n)? {
        if !c.is_zero() {
            lines.push(format!("reduction {} : {c}", dims(&k.iter().map(|&x| x as usize).collect::<Vec<_>>())));
        }
    }
    if member != vanishes {
        return Err(Error::Invariant(format!("membership {member} but vanishing {vanishes}")).into());
    }
    Ok(Verdict { pass: true, lines })
}

fn divisibility(f: &mut Fields, cfg: &Config) -> Outcome {
    let ell = cfg.params.prime();
    let m = f.parsed("m", 1u32)?;
    let n = level(f, cfg)?;
    let top = ell
        .checked_pow(n)
        .filter(|t| *t <= MAX_BINOM_RANGE)
        .ok_or_else(|| Error::BudgetExceeded(format!("{ell}^{n} binomial coefficients")))?;
    let mut bad = Vec::new();
    for r in 1..=top {
        if binom_valuation(ell, n, r)? != binom_valuation_closed_form(ell, n, r) {
            bad.push(r);
        }
    }
    let pro = prosystem_divisibility_check(ell, m, n)?;
    let lowest = lowest_surviving_degree(ell, m, n)?;
    let lines = vec![
        format!("binomial identity for 0 < r <= {top}: {}", if bad.is_empty() { "holds".into() } else { format!("fails at {bad:?}") }),
        format!("prosystem m={m} n={n}: {pro}; lowest surviving degree {lowest}"),
    ];
    Ok(Verdict { pass: bad.is_empty() && pro, lines })
}

fn mellin(f: &mut Fields, cfg: &Config) -> Outcome {
    let data = data(f, cfg)?;
    let n = level(f, cfg)?;
    let cx = build_mellin_complex(&data, cfg.degree, cfg.params.precision())?;
    let d2 = cx.check_d_squared()?;
    let generic = generic_dims(&cx)?;
    let mut lines = vec![
        format!("terms={}", dims(&cx.term_ranks())),
        format!("d^2=0: {d2}"),
        format!("generic={}", dims(&generic)),
    ];
    let mut agree = true;
    for id in level_points(data.ell(), n, data.nvars())? {
        let a = fiber_dims_at(&data, &id)?;
        let route = match fiber_dims_via_group_ring(&data, &id) {
            Ok(b) => {
                agree &= a == b;
                if a == b { "routes agree".to_string() } else { format!("group ring gives {}", dims(&b)) }
            }
            Err(Error::BudgetExceeded(_)) => "group ring route over budget".to_string(),
            Err(e) => return Err(e.into()),
        };
        lines.push(format!("fiber {}/{}^{n}: {}; {route}", ids(std::slice::from_ref(&id.exps)), data.ell(), dims(&a)));
    }
    Ok(Verdict { pass: d2 && agree, lines })
}

fn jump(f: &mut Fields, cfg: &Config) -> Outcome {
    let data = data(f, cfg)?;
    let i = f.parsed("i", 0usize)?;
    let j = f.parsed("j", 0usize)?;
    let n = level(f, cfg)?;
    let r = jumping_locus_of(&data, i, j, n)?;
    let mut lines = vec![r.to_string()];
    for (id, d) in &r.fibers {
        lines.push(format!("fiber {}: {}", ids(std::slice::from_ref(&id.exps)), dims(d)));
    }
    Ok(Verdict { pass: true, lines })
}

fn verify_qlin(f: &mut Fields, cfg: &Config) -> Outcome {
    let data = data(f, cfg)?;
    let i = f.parsed("i", 0usize)?;
    let j = f.parsed("j", 0usize)?;
    let n = level(f, cfg)?;
    let set = QuasiLinearSet::parse(data.ell(), data.nvars(), &f.require("set")?).map_err(|e| match e {
        Error::Parse(_) | Error::DimensionMismatch { .. } => CliError::Malformed(e.to_string()),
        e => e.into(),
    })?;
    let r = jumping_locus_of(&data, i, j, n)?;
    let v = verify_quasilinear(&r, &set, n)?;
    Ok(Verdict { pass: v.matches, lines: vec![r.to_string(), v.to_string()] })
}

fn twist(f: &mut Fields, cfg: &Config) -> Outcome {
    let g = take_series(f, cfg, None)?;
    let t = inversion_twist(&g)?;
    let back = inversion_twist(&t)?;
    let pass = back.eq_within_precision(&g);
    let mut lines = series_lines(&t);
    lines.push(format!("involution={pass}"));
    Ok(Verdict { pass, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(parse_poly("x - 1").unwrap(), vec![-1, 1]);
        assert_eq!(parse_poly("x^2 - 3*x + 5").unwrap(), vec![5, -3, 1]);
        assert_eq!(parse_poly("[-1, 0, 1]").unwrap(), vec![-1, 0, 1]);
        assert!(parse_poly("x^q").is_err());
    }

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("3/2").unwrap(), Ratio::new(3, 2));
        assert_eq!(parse_ratio(" 2 ").unwrap(), Ratio::from_integer(2));
        assert!(parse_ratio("1/0").is_err());
    }
}
