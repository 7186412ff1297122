//! Command handlers. Each writes its report to the given sink; exit codes
//! are decided by the error class in `main`.

use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{Map, Value};

use nicepair_core::classification::Classifier;
use nicepair_core::linalg::{
    coefficient_identity, condition_a, condition_b, git_stable, parse_matrices, parse_rational,
    random_omega, sample_generic_transformation, OmegaMatrix, ProjectiveConfig, RationalMatrix,
};
use nicepair_core::pair::{forced_chain, Genus, Pair, StepKind, WindowStatus};
use nicepair_core::verify::{self, VerifyConfig};
use nicepair_core::{predecessors_via_dual, predecessors_via_reduction, Predecessor};

use crate::args::{
    ChainArgs, ChainPolicy, Cli, Command, ConditionArgs, ConditionCheck, EnumerateArgs, Format,
    PairArg, PairQuery, PredecessorsArgs, StabilityArgs, VerifyArgs,
};
use crate::report::{
    chain_code, chain_text, diagram_code, json_int, pair_code, report_to_csv_row, report_to_json,
    report_to_text, REPORT_CSV_HEADER,
};
use crate::CliError;

type CmdResult = Result<(), CliError>;

pub fn run(cli: Cli, out: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Classify(a) => classify(&a, out),
        Command::Chain(a) => chain(&a, out),
        Command::Enumerate(a) => enumerate(&a, out),
        Command::Fine(a) => fine(&a, out),
        Command::Predecessors(a) => predecessors(&a, out),
        Command::Stability(a) => stability(&a, out),
        Command::Condition(a) => condition(&a, out),
        Command::Verify(a) => run_verify(&a, out),
    }
}

fn make_genus(g: &BigInt) -> Result<Genus, CliError> {
    Ok(Genus::new(g.clone())?)
}

fn make_pair(p: &PairArg) -> Result<Pair, CliError> {
    Ok(Pair::new(p.n.clone(), p.d.clone())?)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Matrices from a file: CSV by default, or the JSON mirror (an array of
/// matrices, each an array of rows, entries integers or `"p/q"` strings)
/// when the content starts with `[`.
fn load_matrices(path: &Path) -> Result<Vec<RationalMatrix>, CliError> {
    let text = read_input(path)?;
    if text.trim_start().starts_with('[') {
        matrices_from_json(&text)
    } else {
        Ok(parse_matrices(&text)?)
    }
}

fn matrices_from_json(text: &str) -> Result<Vec<RationalMatrix>, CliError> {
    let bad = |msg: String| CliError::Validation(msg);
    let value: Value =
        serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON matrix input: {e}")))?;
    let outer = value
        .as_array()
        .ok_or_else(|| bad("JSON matrix input must be an array of matrices".into()))?;
    let mut matrices = Vec::with_capacity(outer.len());
    for (mi, matrix) in outer.iter().enumerate() {
        let rows_v = matrix
            .as_array()
            .ok_or_else(|| bad(format!("matrix {mi} must be an array of rows")))?;
        let mut rows = Vec::with_capacity(rows_v.len());
        for (ri, row) in rows_v.iter().enumerate() {
            let cells = row
                .as_array()
                .ok_or_else(|| bad(format!("matrix {mi} row {ri} must be an array")))?;
            let mut parsed = Vec::with_capacity(cells.len());
            for (ci, cell) in cells.iter().enumerate() {
                let token = match cell {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    other => {
                        return Err(bad(format!(
                            "matrix {mi} row {ri} entry {ci}: expected an integer or \"p/q\" string, got {other}"
                        )))
                    }
                };
                let rational = parse_rational(&token).ok_or_else(|| {
                    bad(format!(
                        "matrix {mi} row {ri} entry {ci}: malformed rational token `{token}`"
                    ))
                })?;
                parsed.push(rational);
            }
            rows.push(parsed);
        }
        matrices.push(RationalMatrix::from_rows(rows)?);
    }
    Ok(matrices)
}

fn classify(a: &PairQuery, out: &mut dyn Write) -> CmdResult {
    let genus = make_genus(&a.genus)?;
    let pair = make_pair(&a.pair)?;
    let report = Classifier::new(genus).classify(&pair);
    match a.format {
        Format::Text => write!(out, "{}", report_to_text(&report))?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report_to_json(&report))?)?,
        Format::Csv => {
            writeln!(out, "{REPORT_CSV_HEADER}")?;
            writeln!(out, "{}", report_to_csv_row(&report))?;
        }
    }
    Ok(())
}

fn chain(a: &ChainArgs, out: &mut dyn Write) -> CmdResult {
    let genus = make_genus(&a.genus)?;
    let pair = make_pair(&a.pair)?;
    if pair.window_status(&genus) == WindowStatus::Outside {
        return Err(CliError::Validation(format!(
            "pair {} is outside the window for genus {}; no chain is defined",
            pair_code(&pair),
            genus
        )));
    }
    let (policy, chain) = match a.policy {
        ChainPolicy::Reduce => (
            "reduce",
            Some(forced_chain(&genus, &pair, StepKind::Reduce)?),
        ),
        ChainPolicy::Dual => (
            "dual",
            Some(forced_chain(&genus, &pair, StepKind::DualReduce)?),
        ),
        ChainPolicy::Nice => (
            "nice",
            Classifier::new(genus.clone()).is_nice(&pair).witness,
        ),
    };
    match a.format {
        Format::Text => match &chain {
            Some(c) => writeln!(out, "{}", chain_text(c))?,
            None => writeln!(
                out,
                "{} is not a nice pair; no witness chain",
                pair_code(&pair)
            )?,
        },
        Format::Json => {
            let mut m = Map::new();
            m.insert("genus".into(), json_int(genus.value()));
            m.insert("n".into(), json_int(pair.rank()));
            m.insert("d".into(), json_int(pair.degree()));
            m.insert("policy".into(), Value::String(policy.into()));
            m.insert(
                "steps".into(),
                chain.as_ref().map_or(Value::Null, |c| {
                    Value::Array(
                        c.steps
                            .iter()
                            .map(|s| {
                                let mut sm = Map::new();
                                sm.insert(
                                    "kind".into(),
                                    Value::String(
                                        match s.kind {
                                            StepKind::Reduce => "reduce",
                                            StepKind::DualReduce => "dual",
                                        }
                                        .into(),
                                    ),
                                );
                                sm.insert("n".into(), json_int(s.target.rank()));
                                sm.insert("d".into(), json_int(s.target.degree()));
                                sm.insert("k".into(), json_int(&s.k));
                                Value::Object(sm)
                            })
                            .collect(),
                    )
                }),
            );
            writeln!(out, "{}", serde_json::to_string(&Value::Object(m))?)?;
        }
        Format::Csv => match &chain {
            Some(c) => writeln!(out, "{}", chain_code(c))?,
            None => writeln!(out, "-")?,
        },
    }
    Ok(())
}

fn enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> CmdResult {
    let genus = make_genus(&a.genus)?;
    if a.n_max < BigInt::one() {
        return Err(CliError::Validation(format!(
            "--n-max must be at least 1, got {}",
            a.n_max
        )));
    }
    let cls = Classifier::new(genus);
    if a.format == Format::Csv {
        writeln!(out, "{REPORT_CSV_HEADER}")?;
    }
    for report in cls.enumerate(&a.n_max) {
        match a.format {
            Format::Text => writeln!(out, "{}", report_to_text(&report))?,
            Format::Json => writeln!(out, "{}", serde_json::to_string(&report_to_json(&report))?)?,
            Format::Csv => writeln!(out, "{}", report_to_csv_row(&report))?,
        }
    }
    Ok(())
}

fn fine(a: &PairQuery, out: &mut dyn Write) -> CmdResult {
    let genus = make_genus(&a.genus)?;
    let pair = make_pair(&a.pair)?;
    let outcome = Classifier::new(genus.clone()).is_fine(&pair)?;
    match a.format {
        Format::Text => {
            writeln!(out, "fine: {}", outcome.verdict)?;
            if let Some(diagram) = &outcome.witness {
                writeln!(out, "diagram: {}", diagram_code(diagram))?;
            }
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert("genus".into(), json_int(genus.value()));
            m.insert("n".into(), json_int(pair.rank()));
            m.insert("d".into(), json_int(pair.degree()));
            m.insert("fine".into(), Value::Bool(outcome.verdict));
            m.insert(
                "diagram".into(),
                outcome
                    .witness
                    .as_ref()
                    .map_or(Value::Null, |d| Value::String(diagram_code(d))),
            );
            writeln!(out, "{}", serde_json::to_string(&Value::Object(m))?)?;
        }
        Format::Csv => {
            writeln!(out, "genus,n,d,fine,diagram")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                genus,
                pair.rank(),
                pair.degree(),
                outcome.verdict,
                outcome.witness.as_ref().map_or("-".into(), diagram_code)
            )?;
        }
    }
    Ok(())
}

fn predecessors(a: &PredecessorsArgs, out: &mut dyn Write) -> CmdResult {
    let genus = make_genus(&a.genus)?;
    let target = make_pair(&a.pair)?;
    let via_reduce = predecessors_via_reduction(&genus, &target, &a.n_max)?;
    let via_dual = predecessors_via_dual(&genus, &target, &a.n_max)?;
    let json_pred = |p: &Predecessor| {
        let mut m = Map::new();
        m.insert("n".into(), json_int(p.pair.rank()));
        m.insert("d".into(), json_int(p.pair.degree()));
        m.insert("k".into(), json_int(&p.k));
        Value::Object(m)
    };
    match a.format {
        Format::Text => {
            writeln!(
                out,
                "predecessors of {} at genus {}",
                pair_code(&target),
                genus
            )?;
            for p in &via_reduce {
                writeln!(out, "reduce: {} k={}", pair_code(&p.pair), p.k)?;
            }
            for p in &via_dual {
                writeln!(out, "dual:   {} k={}", pair_code(&p.pair), p.k)?;
            }
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert("genus".into(), json_int(genus.value()));
            m.insert("n".into(), json_int(target.rank()));
            m.insert("d".into(), json_int(target.degree()));
            m.insert("n_max".into(), json_int(&a.n_max));
            m.insert(
                "via_reduce".into(),
                Value::Array(via_reduce.iter().map(json_pred).collect()),
            );
            m.insert(
                "via_dual".into(),
                Value::Array(via_dual.iter().map(json_pred).collect()),
            );
            writeln!(out, "{}", serde_json::to_string(&Value::Object(m))?)?;
        }
        Format::Csv => {
            writeln!(out, "kind,n,d,k")?;
            for p in &via_reduce {
                writeln!(out, "reduce,{},{},{}", p.pair.rank(), p.pair.degree(), p.k)?;
            }
            for p in &via_dual {
                writeln!(out, "dual,{},{},{}", p.pair.rank(), p.pair.degree(), p.k)?;
            }
        }
    }
    Ok(())
}

fn stability(a: &StabilityArgs, out: &mut dyn Write) -> CmdResult {
    let matrices = load_matrices(&a.input)?;
    if matrices.is_empty() {
        return Err(CliError::Validation("input contains no points".into()));
    }
    if a.format == Format::Csv {
        writeln!(out, "config,stable,violating_points")?;
    }
    for (i, m) in matrices.iter().enumerate() {
        let points = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        let config = ProjectiveConfig::new(a.ambient, points)?;
        let verdict = git_stable(&config);
        let witness_text = verdict.violating_subspace.as_ref().map(|w| {
            w.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(";")
        });
        match a.format {
            Format::Text => match &witness_text {
                None => writeln!(out, "config {i}: stable")?,
                Some(w) => writeln!(out, "config {i}: unstable, subspace holds points {w}")?,
            },
            Format::Json => {
                let mut jm = Map::new();
                jm.insert("config".into(), Value::from(i));
                jm.insert("stable".into(), Value::Bool(verdict.stable));
                jm.insert(
                    "violating_subspace".into(),
                    verdict
                        .violating_subspace
                        .as_ref()
                        .map_or(Value::Null, |w| {
                            Value::Array(w.iter().map(|&x| Value::from(x)).collect())
                        }),
                );
                writeln!(out, "{}", serde_json::to_string(&Value::Object(jm))?)?;
            }
            Format::Csv => writeln!(
                out,
                "{i},{},{}",
                verdict.stable,
                witness_text.as_deref().unwrap_or("-")
            )?,
        }
    }
    Ok(())
}

fn json_matrix(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| {
                Value::Array(
                    m.row(r)
                        .iter()
                        .map(|x| Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn condition(a: &ConditionArgs, out: &mut dyn Write) -> CmdResult {
    if a.sample {
        return condition_sample(a, out);
    }
    let Some(path) = &a.input else {
        return Err(CliError::Validation(
            "condition needs --input (or --sample)".into(),
        ));
    };
    let matrices = load_matrices(path)?;
    let (omega, phi) = match matrices.len() {
        0 => return Err(CliError::Validation("input contains no matrices".into())),
        1 => (None, &matrices[0]),
        _ => {
            let omega = OmegaMatrix::new(matrices[0].rows(), matrices[0].clone())?;
            (Some(omega), &matrices[1])
        }
    };
    let want_a = matches!(a.check, ConditionCheck::A | ConditionCheck::Both);
    let want_b = matches!(a.check, ConditionCheck::B | ConditionCheck::Both);
    if want_a && omega.is_none() && a.check == ConditionCheck::A {
        return Err(CliError::Validation(
            "condition A needs an omega matrix: put it before phi, separated by a blank line"
                .into(),
        ));
    }
    let a_result = match (&omega, want_a) {
        (Some(om), true) => Some(condition_a(om, phi)?),
        _ => None,
    };
    let b_result = if want_b {
        Some(condition_b(phi)?)
    } else {
        None
    };
    let identity = omega.as_ref().map(coefficient_identity);
    match a.format {
        Format::Text => {
            if let Some(holds) = a_result {
                writeln!(
                    out,
                    "condition A: {}",
                    if holds { "holds" } else { "fails" }
                )?;
            }
            if let Some(b) = &b_result {
                match &b.violating_rows {
                    None => writeln!(out, "condition B: holds")?,
                    Some(rows) => {
                        let rows: Vec<String> = rows.iter().map(ToString::to_string).collect();
                        writeln!(out, "condition B: fails at rows {{{}}}", rows.join(", "))?;
                    }
                }
            }
            if let Some(id) = &identity {
                writeln!(
                    out,
                    "coefficient identity: {} = {} ({})",
                    id.coefficient,
                    id.minor_product,
                    if id.equal { "holds" } else { "FAILS" }
                )?;
            }
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert(
                "condition_a".into(),
                a_result.map_or(Value::Null, Value::Bool),
            );
            m.insert(
                "condition_b".into(),
                b_result.as_ref().map_or(Value::Null, |b| {
                    let mut bm = Map::new();
                    bm.insert("holds".into(), Value::Bool(b.holds));
                    bm.insert(
                        "violating_rows".into(),
                        b.violating_rows.as_ref().map_or(Value::Null, |rows| {
                            Value::Array(rows.iter().map(|&r| Value::from(r)).collect())
                        }),
                    );
                    Value::Object(bm)
                }),
            );
            m.insert(
                "coefficient_identity".into(),
                identity.as_ref().map_or(Value::Null, |id| {
                    let mut im = Map::new();
                    im.insert(
                        "coefficient".into(),
                        Value::String(id.coefficient.to_string()),
                    );
                    im.insert(
                        "minor_product".into(),
                        Value::String(id.minor_product.to_string()),
                    );
                    im.insert("equal".into(), Value::Bool(id.equal));
                    Value::Object(im)
                }),
            );
            writeln!(out, "{}", serde_json::to_string(&Value::Object(m))?)?;
        }
        Format::Csv => {
            writeln!(out, "condition_a,condition_b,violating_rows,identity_equal")?;
            writeln!(
                out,
                "{},{},{},{}",
                a_result.map_or("-".into(), |v| v.to_string()),
                b_result
                    .as_ref()
                    .map_or("-".into(), |b| b.holds.to_string()),
                b_result
                    .as_ref()
                    .and_then(|b| b.violating_rows.as_ref())
                    .map_or("-".into(), |rows| {
                        rows.iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(";")
                    }),
                identity
                    .as_ref()
                    .map_or("-".into(), |id| id.equal.to_string()),
            )?;
        }
    }
    Ok(())
}

fn condition_sample(a: &ConditionArgs, out: &mut dyn Write) -> CmdResult {
    let omega = match (&a.input, a.genus, a.rank) {
        (Some(path), _, _) => {
            let matrices = load_matrices(path)?;
            let Some(first) = matrices.first() else {
                return Err(CliError::Validation("input contains no matrices".into()));
            };
            OmegaMatrix::new(first.rows(), first.clone())?
        }
        (None, Some(g), Some(n)) => random_omega(g, n, a.seed)?,
        _ => {
            return Err(CliError::Validation(
                "--sample needs --input, or both --genus and --rank".into(),
            ))
        }
    };
    let outcome = sample_generic_transformation(&omega, a.seed, a.trials)?;
    match a.format {
        Format::Text => {
            writeln!(
                out,
                "omega: {} x {} generic ({} blocks)",
                omega.genus_rows(),
                omega.points(),
                omega.blocks()
            )?;
            writeln!(
                out,
                "trials: {}{}",
                outcome.trials,
                if outcome.is_empty() {
                    " (empty run; rates are 1 by convention)"
                } else {
                    ""
                }
            )?;
            writeln!(out, "condition A rate: {}", outcome.condition_a_rate)?;
            writeln!(out, "condition B rate: {}", outcome.condition_b_rate)?;
            if let Some(f) = &outcome.first_failure {
                writeln!(
                    out,
                    "first failure: trial {} (A={}, B={})\n{}",
                    f.trial, f.condition_a, f.condition_b, f.phi
                )?;
            }
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert("trials".into(), Value::from(outcome.trials));
            m.insert("passes_a".into(), Value::from(outcome.passes_a));
            m.insert("passes_b".into(), Value::from(outcome.passes_b));
            m.insert(
                "condition_a_rate".into(),
                Value::String(outcome.condition_a_rate.to_string()),
            );
            m.insert(
                "condition_b_rate".into(),
                Value::String(outcome.condition_b_rate.to_string()),
            );
            m.insert(
                "first_failure".into(),
                outcome.first_failure.as_ref().map_or(Value::Null, |f| {
                    let mut fm = Map::new();
                    fm.insert("trial".into(), Value::from(f.trial));
                    fm.insert("condition_a".into(), Value::Bool(f.condition_a));
                    fm.insert("condition_b".into(), Value::Bool(f.condition_b));
                    fm.insert("phi".into(), json_matrix(&f.phi));
                    Value::Object(fm)
                }),
            );
            writeln!(out, "{}", serde_json::to_string(&Value::Object(m))?)?;
        }
        Format::Csv => {
            writeln!(out, "trials,passes_a,passes_b,rate_a,rate_b")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                outcome.trials,
                outcome.passes_a,
                outcome.passes_b,
                outcome.condition_a_rate,
                outcome.condition_b_rate
            )?;
        }
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = if a.quick {
        VerifyConfig::quick()
    } else {
        VerifyConfig {
            genus_min: a.genus_min,
            genus_max: a.genus_max,
            sweep_n_max: a.sweep_n_max,
            predecessor_n_max: a.predecessor_n_max,
            chain_walks: a.chain_walks,
            chain_seed: a.chain_seed,
            dimension_max: a.dimension_max,
            condition_b_cases: a.condition_b_cases,
            stability_cases: a.stability_cases,
            identity_cases: a.identity_cases,
            sample_trials: a.sample_trials,
            sample_seed: a.sample_seed,
            oracle_seed: a.oracle_seed,
        }
    };
    let outcomes = verify::run_all(&cfg).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut failed = 0;
    for o in &outcomes {
        writeln!(
            out,
            "criterion {:2} ({}): {} — {}",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        )?;
        if !o.passed {
            failed += 1;
        }
    }
    writeln!(
        out,
        "{} of {} criteria passed",
        outcomes.len() - failed,
        outcomes.len()
    )?;
    if failed > 0 {
        Err(CliError::VerifyFailed)
    } else {
        Ok(())
    }
}
