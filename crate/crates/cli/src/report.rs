//! Report serialization: JSON with a fixed key order, CSV with compact
//! step codes, and a human-readable text form. JSON and CSV parse back
//! into reports, and serialize -> parse -> serialize is the identity.
//!
//! Step codes are `R<k>` and `D<k>`; a chain is codes joined by `;`
//! (empty string for the empty chain). A diagram is its top pairs with
//! bracketed links between them and the terminal witness after `!`:
//!
//!   (67;342) [D51>(7;38)<D45] (60;307) ! R0;R22;R59

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{Map, Value};

use nicepair_core::classification::{
    gcd_corollary_holds, AdmissibleDiagram, ClassificationReport, DiagramLink,
};
use nicepair_core::pair::{
    apply_step, euler_characteristic, moduli_dimension, quotient_dimension_identity, Genus, Pair,
    ReductionChain, ReductionStep, StepKind, WindowStatus,
};

// ---------------------------------------------------------------------
// step / chain / diagram codes
// ---------------------------------------------------------------------

pub fn step_code(step: &ReductionStep) -> String {
    match step.kind {
        StepKind::Reduce => format!("R{}", step.k),
        StepKind::DualReduce => format!("D{}", step.k),
    }
}

pub fn chain_code(chain: &ReductionChain) -> String {
    chain
        .steps
        .iter()
        .map(step_code)
        .collect::<Vec<_>>()
        .join(";")
}

/// Replays a chain code from `start`, checking each shift against the
/// canonical step.
pub fn parse_chain_code(genus: &Genus, start: &Pair, code: &str) -> Result<ReductionChain, String> {
    let mut chain = ReductionChain::empty(genus.clone(), start.clone());
    let mut cur = start.clone();
    if code.trim().is_empty() {
        return Ok(chain);
    }
    for token in code.split(';') {
        let token = token.trim();
        let (kind, k_text) = match token.split_at_checked(1) {
            Some(("R", rest)) => (StepKind::Reduce, rest),
            Some(("D", rest)) => (StepKind::DualReduce, rest),
            _ => return Err(format!("bad step code `{token}`")),
        };
        let k: BigInt = k_text
            .parse()
            .map_err(|_| format!("bad shift in step code `{token}`"))?;
        let step = apply_step(genus, &cur, kind).map_err(|e| e.to_string())?;
        if step.k != k {
            return Err(format!(
                "step code `{token}` has shift {k}, canonical is {}",
                step.k
            ));
        }
        cur = step.target.clone();
        chain.steps.push(step);
    }
    Ok(chain)
}

pub fn pair_code(p: &Pair) -> String {
    format!("({};{})", p.rank(), p.degree())
}

fn parse_pair_code(code: &str) -> Result<Pair, String> {
    let inner = code
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| format!("bad pair code `{code}`"))?;
    let (n, d) = inner
        .split_once(';')
        .ok_or_else(|| format!("bad pair code `{code}`"))?;
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| format!("bad rank in `{code}`"))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| format!("bad degree in `{code}`"))?;
    Pair::new(n, d).map_err(|e| e.to_string())
}

pub fn diagram_code(diagram: &AdmissibleDiagram) -> String {
    let mut out = pair_code(&diagram.top[0]);
    for (link, next) in diagram.links.iter().zip(diagram.top.iter().skip(1)) {
        out.push_str(&format!(
            " [{}>{}<{}] {}",
            chain_code(&link.left_chain),
            pair_code(&link.meet),
            chain_code(&link.right_chain),
            pair_code(next)
        ));
    }
    out.push_str(" ! ");
    out.push_str(&chain_code(&diagram.terminal_nice_witness));
    out.trim_end().to_string()
}

/// Parses a diagram code back, replaying every chain.
pub fn parse_diagram_code(genus: &Genus, code: &str) -> Result<AdmissibleDiagram, String> {
    let (body, terminal) = code
        .rsplit_once('!')
        .ok_or_else(|| format!("diagram code lacks a terminal marker: `{code}`"))?;
    let mut top = Vec::new();
    let mut raw_links = Vec::new();
    for token in body.split_whitespace() {
        if let Some(inner) = token.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (left, rest) = inner
                .split_once('>')
                .ok_or_else(|| format!("bad link `{token}`"))?;
            let (meet, right) = rest
                .rsplit_once('<')
                .ok_or_else(|| format!("bad link `{token}`"))?;
            raw_links.push((left.to_string(), parse_pair_code(meet)?, right.to_string()));
        } else {
            top.push(parse_pair_code(token)?);
        }
    }
    if top.is_empty() || raw_links.len() + 1 != top.len() {
        return Err(format!(
            "diagram code has {} tops and {} links",
            top.len(),
            raw_links.len()
        ));
    }
    let mut links = Vec::new();
    for (i, (left, meet, right)) in raw_links.into_iter().enumerate() {
        let left_chain = parse_chain_code(genus, &top[i], &left)?;
        let right_chain = parse_chain_code(genus, &top[i + 1], &right)?;
        if *left_chain.end() != meet || *right_chain.end() != meet {
            return Err(format!(
                "link {i} chains do not meet at {}",
                pair_code(&meet)
            ));
        }
        links.push(DiagramLink {
            left_chain,
            right_chain,
            meet,
        });
    }
    let terminal_nice_witness =
        parse_chain_code(genus, top.last().expect("nonempty"), terminal.trim())?;
    let diagram = AdmissibleDiagram {
        genus: genus.clone(),
        top,
        links,
        terminal_nice_witness,
    };
    diagram.validate().map_err(|e| e.to_string())?;
    Ok(diagram)
}

// ---------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------

/// Exact integer as a JSON number (arbitrary precision).
pub fn json_int(n: &BigInt) -> Value {
    Value::Number(serde_json::from_str(&n.to_string()).expect("integer literal"))
}

fn json_pair(p: &Pair) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), json_int(p.rank()));
    m.insert("d".into(), json_int(p.degree()));
    Value::Object(m)
}

fn json_steps(chain: &ReductionChain) -> Value {
    Value::Array(
        chain
            .steps
            .iter()
            .map(|s| {
                let mut m = Map::new();
                m.insert(
                    "kind".into(),
                    Value::String(
                        match s.kind {
                            StepKind::Reduce => "reduce",
                            StepKind::DualReduce => "dual",
                        }
                        .into(),
                    ),
                );
                m.insert("n".into(), json_int(s.target.rank()));
                m.insert("d".into(), json_int(s.target.degree()));
                m.insert("k".into(), json_int(&s.k));
                Value::Object(m)
            })
            .collect(),
    )
}

fn json_diagram(diagram: &AdmissibleDiagram) -> Value {
    let mut m = Map::new();
    m.insert(
        "top".into(),
        Value::Array(diagram.top.iter().map(json_pair).collect()),
    );
    m.insert(
        "links".into(),
        Value::Array(
            diagram
                .links
                .iter()
                .map(|l| {
                    let mut lm = Map::new();
                    lm.insert("left".into(), json_steps(&l.left_chain));
                    lm.insert("meet".into(), json_pair(&l.meet));
                    lm.insert("right".into(), json_steps(&l.right_chain));
                    Value::Object(lm)
                })
                .collect(),
        ),
    );
    m.insert(
        "terminal".into(),
        json_steps(&diagram.terminal_nice_witness),
    );
    Value::Object(m)
}

/// The report as a JSON object with the fixed key order
/// {genus, n, d, window, gcd, nice, nice_chain, fine, fine_diagram,
/// newstead, dims}.
pub fn report_to_json(r: &ClassificationReport) -> Value {
    let mut m = Map::new();
    m.insert("genus".into(), json_int(r.genus.value()));
    m.insert("n".into(), json_int(r.pair.rank()));
    m.insert("d".into(), json_int(r.pair.degree()));
    m.insert("window".into(), Value::String(r.window.as_str().into()));
    m.insert("gcd".into(), json_int(&r.gcd_nd));
    m.insert("nice".into(), Value::Bool(r.is_nice));
    m.insert(
        "nice_chain".into(),
        r.nice_witness.as_ref().map_or(Value::Null, json_steps),
    );
    m.insert("fine".into(), Value::Bool(r.is_fine));
    m.insert(
        "fine_diagram".into(),
        r.fine_witness.as_ref().map_or(Value::Null, json_diagram),
    );
    m.insert("newstead".into(), Value::Bool(r.newstead_condition));

    let moduli = moduli_dimension(&r.genus, r.pair.rank()).expect("rank >= 1");
    let identity = quotient_dimension_identity(&r.genus, r.pair.rank()).expect("rank >= 1");
    let mut dims = Map::new();
    dims.insert("moduli".into(), json_int(&moduli));
    let mut qi = Map::new();
    qi.insert("lhs".into(), json_int(&identity.lhs));
    qi.insert("rhs".into(), json_int(&identity.rhs));
    qi.insert("equal".into(), Value::Bool(identity.equal));
    dims.insert("quotient_identity".into(), Value::Object(qi));
    m.insert("dims".into(), Value::Object(dims));

    Value::Object(m)
}

fn get<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value, String> {
    m.get(key).ok_or_else(|| format!("missing key `{key}`"))
}

fn int_from(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| format!("not an integer: {n}")),
        _ => Err(format!("expected a number, got {v}")),
    }
}

fn bool_from(v: &Value) -> Result<bool, String> {
    v.as_bool()
        .ok_or_else(|| format!("expected a bool, got {v}"))
}

fn pair_from(v: &Value) -> Result<Pair, String> {
    let m = v.as_object().ok_or("expected a pair object")?;
    Pair::new(int_from(get(m, "n")?)?, int_from(get(m, "d")?)?).map_err(|e| e.to_string())
}

fn steps_from(genus: &Genus, start: &Pair, v: &Value) -> Result<ReductionChain, String> {
    let arr = v.as_array().ok_or("expected a step array")?;
    let mut chain = ReductionChain::empty(genus.clone(), start.clone());
    let mut cur = start.clone();
    for s in arr {
        let m = s.as_object().ok_or("expected a step object")?;
        let kind = match get(m, "kind")?.as_str() {
            Some("reduce") => StepKind::Reduce,
            Some("dual") => StepKind::DualReduce,
            other => return Err(format!("bad step kind {other:?}")),
        };
        let target = Pair::new(int_from(get(m, "n")?)?, int_from(get(m, "d")?)?)
            .map_err(|e| e.to_string())?;
        let k = int_from(get(m, "k")?)?;
        let step = ReductionStep {
            kind,
            source: cur.clone(),
            target: target.clone(),
            k,
        };
        cur = target;
        chain.steps.push(step);
    }
    chain.validate().map_err(|e| e.to_string())?;
    Ok(chain)
}

/// Parses a report back from [`report_to_json`] output, replaying all
/// witnesses.
pub fn report_from_json(v: &Value) -> Result<ClassificationReport, String> {
    let m = v.as_object().ok_or("expected a report object")?;
    let genus = Genus::new(int_from(get(m, "genus")?)?).map_err(|e| e.to_string())?;
    let pair =
        Pair::new(int_from(get(m, "n")?)?, int_from(get(m, "d")?)?).map_err(|e| e.to_string())?;
    let window = match get(m, "window")?.as_str() {
        Some("in-window") => WindowStatus::InWindow,
        Some("terminal-divisible") => WindowStatus::TerminalDivisible,
        Some("terminal-line") => WindowStatus::TerminalLine,
        Some("outside") => WindowStatus::Outside,
        other => return Err(format!("bad window {other:?}")),
    };
    let gcd_nd = int_from(get(m, "gcd")?)?;
    let is_nice = bool_from(get(m, "nice")?)?;
    let nice_witness = match get(m, "nice_chain")? {
        Value::Null => None,
        v => Some(steps_from(&genus, &pair, v)?),
    };
    let is_fine = bool_from(get(m, "fine")?)?;
    let fine_witness = match get(m, "fine_diagram")? {
        Value::Null => None,
        v => {
            let dm = v.as_object().ok_or("expected a diagram object")?;
            let tops = get(dm, "top")?
                .as_array()
                .ok_or("expected a top array")?
                .iter()
                .map(pair_from)
                .collect::<Result<Vec<_>, _>>()?;
            if tops.is_empty() {
                return Err("diagram top row is empty".into());
            }
            let links_v = get(dm, "links")?
                .as_array()
                .ok_or("expected a link array")?;
            let mut links = Vec::new();
            for (i, lv) in links_v.iter().enumerate() {
                let lm = lv.as_object().ok_or("expected a link object")?;
                let meet = pair_from(get(lm, "meet")?)?;
                let left_chain = steps_from(&genus, &tops[i], get(lm, "left")?)?;
                let right_chain = steps_from(&genus, &tops[i + 1], get(lm, "right")?)?;
                links.push(DiagramLink {
                    left_chain,
                    right_chain,
                    meet,
                });
            }
            let terminal =
                steps_from(&genus, tops.last().expect("nonempty"), get(dm, "terminal")?)?;
            let diagram = AdmissibleDiagram {
                genus: genus.clone(),
                top: tops,
                links,
                terminal_nice_witness: terminal,
            };
            diagram.validate().map_err(|e| e.to_string())?;
            Some(diagram)
        }
    };
    let newstead_condition = bool_from(get(m, "newstead")?)?;
    Ok(ClassificationReport {
        gcd_corollary_holds: gcd_corollary_holds(&genus, &pair),
        genus,
        pair,
        window,
        gcd_nd,
        is_nice,
        nice_witness,
        is_fine,
        fine_witness,
        newstead_condition,
    })
}

// ---------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------

pub const REPORT_CSV_HEADER: &str =
    "genus,n,d,window,gcd,nice,nice_chain,fine,fine_diagram,newstead,dim_moduli,quot_lhs,quot_rhs,quot_equal";

/// One CSV row; absent witnesses flatten to `-`, the empty chain to the
/// empty cell.
pub fn report_to_csv_row(r: &ClassificationReport) -> String {
    let moduli = moduli_dimension(&r.genus, r.pair.rank()).expect("rank >= 1");
    let identity = quotient_dimension_identity(&r.genus, r.pair.rank()).expect("rank >= 1");
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.genus,
        r.pair.rank(),
        r.pair.degree(),
        r.window.as_str(),
        r.gcd_nd,
        r.is_nice,
        r.nice_witness.as_ref().map_or("-".into(), chain_code),
        r.is_fine,
        r.fine_witness.as_ref().map_or("-".into(), diagram_code),
        r.newstead_condition,
        moduli,
        identity.lhs,
        identity.rhs,
        identity.equal
    )
}

/// Parses one CSV row back into a report, replaying witness codes.
pub fn report_from_csv_row(row: &str) -> Result<ClassificationReport, String> {
    let cells: Vec<&str> = row.trim_end().split(',').collect();
    if cells.len() != 14 {
        return Err(format!("expected 14 cells, got {}", cells.len()));
    }
    let genus = Genus::new(
        cells[0]
            .parse::<BigInt>()
            .map_err(|_| format!("bad genus `{}`", cells[0]))?,
    )
    .map_err(|e| e.to_string())?;
    let pair = Pair::new(
        cells[1]
            .parse::<BigInt>()
            .map_err(|_| format!("bad rank `{}`", cells[1]))?,
        cells[2]
            .parse::<BigInt>()
            .map_err(|_| format!("bad degree `{}`", cells[2]))?,
    )
    .map_err(|e| e.to_string())?;
    let window = match cells[3] {
        "in-window" => WindowStatus::InWindow,
        "terminal-divisible" => WindowStatus::TerminalDivisible,
        "terminal-line" => WindowStatus::TerminalLine,
        "outside" => WindowStatus::Outside,
        other => return Err(format!("bad window `{other}`")),
    };
    let parse_bool = |cell: &str| -> Result<bool, String> {
        cell.parse().map_err(|_| format!("bad bool `{cell}`"))
    };
    let gcd_nd: BigInt = cells[4]
        .parse()
        .map_err(|_| format!("bad gcd `{}`", cells[4]))?;
    let is_nice = parse_bool(cells[5])?;
    let nice_witness = match cells[6] {
        "-" => None,
        code => Some(parse_chain_code(&genus, &pair, code)?),
    };
    let is_fine = parse_bool(cells[7])?;
    let fine_witness = match cells[8] {
        "-" => None,
        code => Some(parse_diagram_code(&genus, code)?),
    };
    let newstead_condition = parse_bool(cells[9])?;
    Ok(ClassificationReport {
        gcd_corollary_holds: gcd_corollary_holds(&genus, &pair),
        genus,
        pair,
        window,
        gcd_nd,
        is_nice,
        nice_witness,
        is_fine,
        fine_witness,
        newstead_condition,
    })
}

// ---------------------------------------------------------------------
// text
// ---------------------------------------------------------------------

pub fn chain_text(chain: &ReductionChain) -> String {
    let mut out = pair_code(&chain.start);
    for step in &chain.steps {
        out.push_str(&format!(
            " -{}-> {}",
            step_code(step),
            pair_code(&step.target)
        ));
    }
    out
}

pub fn report_to_text(r: &ClassificationReport) -> String {
    let g = &r.genus;
    let moduli = moduli_dimension(g, r.pair.rank()).expect("rank >= 1");
    let identity = quotient_dimension_identity(g, r.pair.rank()).expect("rank >= 1");
    let euler = euler_characteristic(g, &r.pair);
    let mut out = String::new();
    out.push_str(&format!(
        "pair:          {} at genus {}\n",
        pair_code(&r.pair),
        g
    ));
    out.push_str(&format!("window:        {}\n", r.window.as_str()));
    out.push_str(&format!("gcd(n,d):      {}\n", r.gcd_nd));
    out.push_str(&format!("euler char:    {euler}\n"));
    out.push_str(&format!("nice:          {}\n", r.is_nice));
    if let Some(chain) = &r.nice_witness {
        out.push_str(&format!("nice chain:    {}\n", chain_text(chain)));
    }
    out.push_str(&format!("fine:          {}\n", r.is_fine));
    if let Some(diagram) = &r.fine_witness {
        out.push_str(&format!("fine diagram:  {}\n", diagram_code(diagram)));
    }
    out.push_str(&format!("newstead:      {}\n", r.newstead_condition));
    let dg = r.pair.degree().gcd(g.value());
    let dng = (r.pair.degree() + r.pair.rank()).gcd(g.value());
    out.push_str(&format!(
        "gcd corollary: {} [gcd(d,g)={dg}, gcd(d+n,g)={dng}]\n",
        r.gcd_corollary_holds
    ));
    out.push_str(&format!("moduli dim:    {moduli}\n"));
    out.push_str(&format!(
        "quotient dim:  {} = {} (identity {})\n",
        identity.lhs,
        identity.rhs,
        if identity.equal { "holds" } else { "FAILS" }
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nicepair_core::classification::Classifier;

    fn genus(g: i64) -> Genus {
        Genus::new(g).unwrap()
    }

    fn pair(n: i64, d: i64) -> Pair {
        Pair::new(n, d).unwrap()
    }

    #[test]
    fn chain_codes_replay() {
        let g6 = genus(6);
        let cls = Classifier::new(g6.clone());
        let chain = cls.is_nice(&pair(15, 77)).witness.unwrap();
        let code = chain_code(&chain);
        assert_eq!(code, "R0;R71");
        let back = parse_chain_code(&g6, &pair(15, 77), &code).unwrap();
        assert_eq!(back, chain);
        assert!(parse_chain_code(&g6, &pair(15, 77), "R1;R71").is_err());
        assert!(parse_chain_code(&g6, &pair(15, 77), "X0").is_err());
    }

    #[test]
    fn terminal_line_report_shapes() {
        let cls = Classifier::new(genus(5));
        let report = cls.classify(&pair(1, 5));
        assert_eq!(report.window, WindowStatus::TerminalLine);
        assert!(report.is_nice);
        let json = report_to_json(&report);
        assert_eq!(json["window"], Value::String("terminal-line".into()));
        assert_eq!(json["nice_chain"], Value::Array(vec![]));
        let row = report_to_csv_row(&report);
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[6], "");
    }

    #[test]
    fn worked_example_csv_codes() {
        let cls = Classifier::new(genus(6));
        let report = cls.classify(&pair(60, 307));
        let chain = report.nice_witness.as_ref().unwrap();
        assert_eq!(chain_code(chain), "R0;R22;R59");
        let row = report_to_csv_row(&report);
        assert!(row.contains(",R0;R22;R59,"));
    }

    #[test]
    fn json_round_trip_is_identity() {
        let cls = Classifier::new(genus(6));
        for p in [
            pair(15, 77),
            pair(7, 38),
            pair(67, 342),
            pair(2, 12),
            pair(1, 6),
        ] {
            let report = cls.classify(&p);
            let v = report_to_json(&report);
            let text = serde_json::to_string(&v).unwrap();
            let back = report_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, report, "round trip broke on {p}");
            let again = serde_json::to_string(&report_to_json(&back)).unwrap();
            assert_eq!(again, text);
        }
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let cls = Classifier::new(genus(6));
        for p in [pair(15, 77), pair(7, 38), pair(67, 342), pair(1, 6)] {
            let report = cls.classify(&p);
            let row = report_to_csv_row(&report);
            let back = report_from_csv_row(&row).unwrap();
            assert_eq!(back, report);
            assert_eq!(report_to_csv_row(&back), row);
        }
    }

    #[test]
    fn diagram_code_round_trip() {
        let cls = Classifier::new(genus(6));
        let diagram = cls.is_fine(&pair(67, 342)).unwrap().witness.unwrap();
        let code = diagram_code(&diagram);
        let back = parse_diagram_code(&genus(6), &code).unwrap();
        assert_eq!(back, diagram);
    }

    #[test]
    fn big_integers_survive_json() {
        let huge: BigInt = "123456789012345678901234567890123".parse().unwrap();
        let v = json_int(&huge);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, huge.to_string());
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(int_from(&back).unwrap(), huge);
    }
}
