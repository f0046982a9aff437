use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use semple_core::codes::{
    self, derived_from_sgv, parse_code, pc_from_derived, sgv_from_derived, DerivedVector,
    RuleThreeReading, RvtCode, SmallGrowthVector, Tower,
};
use semple_core::cohomology::{betti_numbers, reduce, TowerPresentation};
use semple_core::curves::{characteristic_of, PuiseuxCharacteristic};
use semple_core::milnor::{
    cross_validate, find_curve_for_code, milnor_block, milnor_chain, BlockCode, ChainCode,
    CodeShape, SearchBounds, Witness,
};
use semple_core::prolong::{regularization_level, rvt_code, trace};
use semple_core::{Error, Letter};
use serde_json::{json, Value};

use crate::args::{self, Cli, Command};
use crate::parse::{parse_curve, parse_polynomial, CurveExpression};
use crate::{dispatch, CliError, EXIT_NOT_FOUND};

/// A successful command: its text rendering, its JSON document, and the
/// exit status (nonzero only for inconclusive reports).
pub struct Report {
    pub text: String,
    pub json: Value,
    pub status: i32,
    /// The text is already machine-readable and is printed in both modes.
    pub json_lines: bool,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            status: 0,
            json_lines: false,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Pc { curve } => pc(&curve_arg(curve, cli)?),
        Command::Rvt {
            curve,
            depth,
            max_depth,
        } => rvt(&curve_arg(curve, cli)?, *depth, *max_depth),
        Command::Prolong { curve, depth } => prolong(&curve_arg(curve, cli)?, *depth),
        Command::MultSeq { curve, max_depth } => mult_seq(&curve_arg(curve, cli)?, *max_depth),
        Command::Convert(c) => convert(c),
        Command::Validate { code, tower, rule3 } => {
            validate(code, tower.map(Tower::from), (*rule3).into())
        }
        Command::Count {
            tower,
            level,
            rule3,
        } => count((*tower).into(), *level, (*rule3).into()),
        Command::Milnor(m) => milnor(m),
        Command::Search { code, bounds } => search(code, *bounds),
        Command::Cohomology(c) => cohomology(c),
        Command::Corpus(args::Corpus::Run { file }) => corpus(file, cli),
    }
}

fn curve_arg(text: &str, cli: &Cli) -> Result<CurveExpression, CliError> {
    parse_curve(text, cli.trunc).map_err(CliError::Curve)
}

/// Undecided orders on a curve mean the precision ran out.
fn on_curve<T>(expr: &CurveExpression, r: semple_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        Error::IndeterminateOrder { .. } => CliError::Core(Error::TruncationTooSmall {
            trunc: expr.trunc,
            suggested: 2 * expr.trunc,
        }),
        other => CliError::Core(other),
    })
}

fn big(n: impl ToString) -> Value {
    Value::String(n.to_string())
}

fn joined<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn characteristic_json(pc: &PuiseuxCharacteristic) -> Value {
    json!({
        "characteristic": pc.to_string(),
        "lambda": pc.lambda(),
        "e": pc.e(),
        "genus": pc.genus(),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn pc(expr: &CurveExpression) -> Result<Report, CliError> {
    let pc = on_curve(expr, characteristic_of(&expr.germ))?;
    let body = json!({ "curve": expr.germ.to_string(), "trunc": expr.trunc });
    Ok(Report::new(
        pc.to_string(),
        merge(body, characteristic_json(&pc)),
    ))
}

fn rvt(expr: &CurveExpression, depth: Option<usize>, max_depth: usize) -> Result<Report, CliError> {
    let curve = expr.germ.to_string();
    match depth {
        Some(0) => Err(CliError::Usage("--depth must be positive".into())),
        Some(d) => {
            let code = codes::planar_string(&on_curve(expr, rvt_code(&expr.germ, d))?);
            Ok(Report::new(
                code.clone(),
                json!({ "curve": curve, "code": code, "depth": d }),
            ))
        }
        None => {
            let reg = on_curve(expr, regularization_level(&expr.germ, max_depth))?;
            let code = codes::planar_string(reg.code());
            Ok(Report::new(
                code.clone(),
                json!({ "curve": curve, "code": code, "level": reg.level }),
            ))
        }
    }
}

fn prolong(expr: &CurveExpression, depth: usize) -> Result<Report, CliError> {
    if depth == 0 {
        return Err(CliError::Usage("--depth must be positive".into()));
    }
    let rows = on_curve(expr, trace(&expr.germ, depth))?;
    let mut text = String::from("level   alpha    beta  letter  mult");
    for r in &rows {
        text.push('\n');
        text.push_str(&r.to_string());
    }
    let json = json!({
        "curve": expr.germ.to_string(),
        "trunc": expr.trunc,
        "rows": serde_json::to_value(&rows).expect("trace rows serialize"),
    });
    Ok(Report::new(text, json))
}

fn mult_seq(expr: &CurveExpression, max_depth: usize) -> Result<Report, CliError> {
    let reg = on_curve(expr, regularization_level(&expr.germ, max_depth))?;
    let mut seq = reg.multiplicities;
    if let Some(i) = seq.iter().position(|&m| m == 1) {
        seq.truncate(i + 1);
    }
    Ok(Report::new(
        joined(&seq, " "),
        json!({ "curve": expr.germ.to_string(), "sequence": seq }),
    ))
}

fn convert(c: &args::Convert) -> Result<Report, CliError> {
    match c {
        args::Convert::Der2pc { entries } => {
            let d = DerivedVector::new(entries.clone())?;
            let pc = pc_from_derived(&d)?;
            let body = json!({ "derived": entries });
            Ok(Report::new(
                pc.to_string(),
                merge(body, characteristic_json(&pc)),
            ))
        }
        args::Convert::Sgv2der { entries } => {
            let d = derived_from_sgv(&SmallGrowthVector::new(entries.clone())?)?;
            Ok(Report::new(
                joined(d.entries(), " "),
                json!({ "sgv": entries, "derived": d.entries() }),
            ))
        }
        args::Convert::Der2sgv { entries } => {
            let s = sgv_from_derived(&DerivedVector::new(entries.clone())?);
            Ok(Report::new(
                joined(s.dims(), " "),
                json!({ "derived": entries, "sgv": s.dims() }),
            ))
        }
    }
}

fn tower_name(t: Tower) -> &'static str {
    match t {
        Tower::Planar => "planar",
        Tower::Spatial => "spatial",
    }
}

fn rule3_name(r: RuleThreeReading) -> &'static str {
    match r {
        RuleThreeReading::L1Only => "l1",
        RuleThreeReading::AnyL => "any",
    }
}

fn validate(
    text: &str,
    tower: Option<Tower>,
    reading: RuleThreeReading,
) -> Result<Report, CliError> {
    let code = parse_code(text, tower)?;
    let violation = code.first_violation(reading);
    let rendered = match violation {
        None => "valid".to_string(),
        Some(i) => format!("invalid at index {i}"),
    };
    Ok(Report::new(
        rendered,
        json!({
            "code": code.to_string(),
            "tower": tower_name(code.tower()),
            "valid": violation.is_none(),
            "first_violation": violation,
        }),
    ))
}

fn count(tower: Tower, level: usize, reading: RuleThreeReading) -> Result<Report, CliError> {
    if level == 0 {
        return Err(CliError::Usage("--level must be positive".into()));
    }
    let n = codes::count_codes(level, tower, reading);
    Ok(Report::new(
        n.to_string(),
        json!({
            "tower": tower_name(tower),
            "level": level,
            "rule3": rule3_name(reading),
            "count": big(&n),
        }),
    ))
}

fn planar_code(text: &str) -> Result<Vec<Letter>, CliError> {
    match parse_code(text, None)? {
        RvtCode::Planar(w) => Ok(w),
        RvtCode::Spatial(_) => Err(CliError::Core(Error::MalformedCode(
            "only planar codes have witness curves".into(),
        ))),
    }
}

fn compact(w: &[Letter]) -> String {
    RvtCode::Planar(w.to_vec()).compact()
}

fn witness_json(w: &Witness) -> Value {
    let c = w.curve();
    json!({ "x": c.x().to_string(), "y": c.y().to_string() })
}

fn bounds_json(b: SearchBounds) -> Value {
    json!({ "max_a": b.max_a, "max_exponent": b.max_exponent })
}

fn milnor(m: &args::Milnor) -> Result<Report, CliError> {
    match m {
        args::Milnor::Block { s, k, u } => {
            let b = BlockCode::new(*s, *k, *u);
            let mu = milnor_block(&b);
            let grammatical = b.is_grammatical();
            let text = if grammatical {
                mu.to_string()
            } else {
                format!("{mu} (not grammatical)")
            };
            Ok(Report::new(
                text,
                json!({
                    "code": compact(&b.letters()),
                    "s": s, "k": k, "u": u,
                    "mu": big(&mu),
                    "grammatical": grammatical,
                }),
            ))
        }
        args::Milnor::Chain { pairs } => {
            let c = ChainCode::new(pairs.clone())?;
            let mu = milnor_chain(&c);
            Ok(Report::new(
                mu.to_string(),
                json!({ "code": compact(&c.letters()), "pairs": pairs, "mu": big(&mu) }),
            ))
        }
        args::Milnor::Check { code, bounds } => {
            let w = planar_code(code)?;
            let report = cross_validate(&w, *bounds)?;
            let shape = match report.shape {
                CodeShape::Block(_) => "block",
                CodeShape::Chain(_) => "chain",
            };
            let agree = report.agree();
            let witness_text = match &report.witness {
                Some(w) => w.curve().to_string(),
                None => format!("none within {bounds}"),
            };
            let text = format!(
                "code     {}\nshape    {shape}\nformula  {}\noracle   {}\nwitness  {witness_text}\nagree    {}",
                compact(&w),
                report.formula_mu,
                report.oracle_mu.map_or("-".to_string(), |m| m.to_string()),
                agree.map_or("inconclusive".to_string(), |a| a.to_string()),
            );
            let json = json!({
                "code": compact(&w),
                "shape": shape,
                "formula_mu": big(&report.formula_mu),
                "oracle_mu": report.oracle_mu.map(big),
                "witness": report.witness.as_ref().map(witness_json),
                "agree": agree,
                "search_bounds": bounds_json(report.search_bounds),
                "elapsed_ms": report.elapsed_ms as u64,
            });
            Ok(Report {
                status: if agree.is_some() { 0 } else { EXIT_NOT_FOUND },
                ..Report::new(text, json)
            })
        }
    }
}

fn search(code: &str, bounds: SearchBounds) -> Result<Report, CliError> {
    let w = planar_code(code)?;
    let found = find_curve_for_code(&w, bounds)?;
    Ok(Report::new(
        found.curve().to_string(),
        json!({
            "code": compact(&w),
            "witness": witness_json(&found),
            "a": found.a,
            "b": found.b,
            "c": found.c,
            "search_bounds": bounds_json(bounds),
        }),
    ))
}

fn presentation(p: &args::Presentation) -> Result<TowerPresentation, CliError> {
    let mut c1: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    for (k, coeffs) in &p.c1 {
        if c1.insert(*k, coeffs.clone()).is_some() {
            return Err(CliError::Usage(format!("--c1 given twice for level {k}")));
        }
    }
    Ok(TowerPresentation::new(p.levels, &c1)?)
}

fn cohomology(c: &args::Cohomology) -> Result<Report, CliError> {
    match c {
        args::Cohomology::Betti(p) => {
            let pres = presentation(p)?;
            let betti = betti_numbers(&pres);
            Ok(Report::new(
                joined(&betti, " "),
                json!({
                    "levels": pres.levels(),
                    "betti": betti.iter().map(big).collect::<Vec<_>>(),
                }),
            ))
        }
        args::Cohomology::Reduce {
            polynomial,
            presentation: p,
        } => {
            let pres = presentation(p)?;
            let poly = parse_polynomial(polynomial).map_err(CliError::Parse)?;
            let class = reduce(&poly, &pres)?;
            let terms: Vec<Value> = class
                .terms()
                .map(|(mask, coeff)| {
                    let gens: Vec<usize> = (0..64)
                        .filter(|b| (mask >> b) & 1 == 1)
                        .map(|b| b + 1)
                        .collect();
                    json!({ "monomial": gens, "coefficient": big(coeff) })
                })
                .collect();
            Ok(Report::new(
                class.to_string(),
                json!({
                    "input": poly.to_string(),
                    "levels": pres.levels(),
                    "normal_form": class.to_string(),
                    "terms": terms,
                }),
            ))
        }
        args::Cohomology::Product(p) => {
            let pres = presentation(p)?;
            let witness = pres.nontriviality_witness();
            let text = match &witness {
                None => "true".to_string(),
                Some((k, square)) => format!("false (x{k}^2 = {square})"),
            };
            Ok(Report::new(
                text,
                json!({
                    "levels": pres.levels(),
                    "product": pres.is_product_presentation(),
                    "witness": witness.map(|(k, square)| json!({
                        "generator": k,
                        "square": square.to_string(),
                    })),
                }),
            ))
        }
    }
}

/// One `<subcommand> | <args>` line turned into an argument vector.
pub fn corpus_argv(line: &str, cli: &Cli) -> Result<Vec<String>, String> {
    let (command, rest) = line
        .split_once('|')
        .ok_or_else(|| "expected '<subcommand> | <args>'".to_string())?;
    let words: Vec<String> = command.split_whitespace().map(String::from).collect();
    if words.is_empty() {
        return Err("missing subcommand".into());
    }
    if words[0] == "corpus" {
        return Err("corpus files cannot run other corpus files".into());
    }
    let rest = shlex::split(rest).ok_or_else(|| "unbalanced quotes in arguments".to_string())?;
    let mut argv = vec!["semple".to_string()];
    argv.extend(words);
    argv.extend(rest);
    argv.push("--json".into());
    if let Some(t) = cli.trunc {
        argv.push(format!("--trunc={t}"));
    }
    Ok(argv)
}

fn corpus(file: &std::path::Path, cli: &Cli) -> Result<Report, CliError> {
    let content = std::fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let tasks: Vec<(usize, &str)> = content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results: Vec<Value> = tasks
        .par_iter()
        .map(|&(line, task)| {
            let (exit, output) = match corpus_argv(task, cli) {
                Ok(argv) => {
                    let out = dispatch(&argv);
                    let value = serde_json::from_str(out.stdout.trim()).unwrap_or_else(|_| {
                        json!({ "error": { "kind": "usage", "exit": out.code, "message": out.stderr.trim() } })
                    });
                    (out.code, value)
                }
                Err(message) => (1, json!({ "error": { "kind": "usage", "exit": 1, "message": message } })),
            };
            json!({ "line": line, "task": task, "exit": exit, "output": output })
        })
        .collect();
    let text = results
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Report {
        json_lines: true,
        ..Report::new(text, Value::Array(results))
    })
}
