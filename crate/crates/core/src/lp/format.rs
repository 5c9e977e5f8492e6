//! LP-format text (objective, constraints, bounds, binaries) and a free-MPS
//! writer. The reader accepts exactly what the writer produces.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::model::{LinearModel, Row, Sense, VarKind, Variable};

const WRAP: usize = 100;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

fn write_expr(out: &mut String, head: &str, terms: &[(usize, f64)], vars: &[Variable]) -> usize {
    out.push_str(head);
    let mut width = head.len();
    for (k, &(i, c)) in terms.iter().enumerate() {
        let name = &vars[i].name;
        let mag = c.abs();
        let coef = if mag == 1.0 { String::new() } else { format!("{} ", num(mag)) };
        let piece = match (k, c < 0.0) {
            (0, false) => format!(" {coef}{name}"),
            (0, true) => format!(" - {coef}{name}"),
            (_, false) => format!(" + {coef}{name}"),
            (_, true) => format!(" - {coef}{name}"),
        };
        if width + piece.len() > WRAP && k > 0 {
            out.push_str("\n  ");
            width = 2;
        }
        out.push_str(&piece);
        width += piece.len();
    }
    width
}

pub fn write_lp(m: &LinearModel) -> String {
    let mut out = String::new();
    for c in &m.comments {
        let _ = writeln!(out, "\\ {c}");
    }
    out.push_str("Minimize\n");
    write_expr(&mut out, " obj:", &m.objective, &m.vars);
    out.push_str("\nSubject To\n");
    for r in &m.rows {
        let width = write_expr(&mut out, &format!(" {}:", r.name), &r.terms, &m.vars);
        let tail = format!(" {} {}", r.sense.symbol(), num(r.rhs));
        if width + tail.len() > WRAP {
            out.push_str("\n  ");
        }
        out.push_str(&tail);
        out.push('\n');
    }
    out.push_str("Bounds\n");
    for v in &m.vars {
        match v.upper {
            Some(u) => writeln!(out, " {} <= {} <= {}", num(v.lower), v.name, num(u)),
            None => writeln!(out, " {} >= {}", v.name, num(v.lower)),
        }
        .expect("write to string");
    }
    out.push_str("Binaries\n");
    for v in m.vars.iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    End,
}

fn is_number(tok: &str) -> bool {
    tok.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-') && tok.parse::<f64>().is_ok()
}

fn parse_num(tok: &str, line: usize) -> Result<f64, ParseError> {
    if !is_number(tok) {
        return Err(ParseError { line, msg: format!("expected a number, found `{tok}`") });
    }
    Ok(tok.parse().expect("checked"))
}

fn parse_sense(tok: &str) -> Option<Sense> {
    match tok {
        "<=" => Some(Sense::Le),
        ">=" => Some(Sense::Ge),
        "=" => Some(Sense::Eq),
        _ => None,
    }
}

struct RawRow {
    name: String,
    terms: Vec<(String, f64)>,
    sense: Sense,
    rhs: f64,
    line: usize,
}

/// Tokens of a section, each tagged with its line number.
type Tokens = Vec<(usize, String)>;

/// Parses `[sign] [coef] name` terms until a sense token or the end.
fn parse_terms(toks: &[(usize, String)], pos: &mut usize) -> Result<Vec<(String, f64)>, ParseError> {
    let mut terms = Vec::new();
    while *pos < toks.len() && parse_sense(&toks[*pos].1).is_none() {
        let line = toks[*pos].0;
        let mut sign = 1.0;
        if terms.is_empty() {
            if toks[*pos].1 == "-" {
                sign = -1.0;
                *pos += 1;
            }
        } else {
            match toks[*pos].1.as_str() {
                "+" => {}
                "-" => sign = -1.0,
                t => return Err(ParseError { line, msg: format!("expected `+` or `-`, found `{t}`") }),
            }
            *pos += 1;
        }
        let Some((_, tok)) = toks.get(*pos) else {
            return Err(ParseError { line, msg: "dangling sign".into() });
        };
        let mut coef = 1.0;
        if is_number(tok) {
            coef = parse_num(tok, line)?;
            *pos += 1;
        }
        let Some((_, name)) = toks.get(*pos) else {
            return Err(ParseError { line, msg: "missing variable name".into() });
        };
        if is_number(name) || parse_sense(name).is_some() || name == "+" || name == "-" || name.ends_with(':') {
            return Err(ParseError { line, msg: format!("bad variable name `{name}`") });
        }
        terms.push((name.clone(), sign * coef));
        *pos += 1;
    }
    Ok(terms)
}

pub fn parse_lp(text: &str) -> Result<LinearModel, ParseError> {
    let mut comments = Vec::new();
    let mut section = Section::Header;
    let mut obj_toks: Tokens = Vec::new();
    let mut row_toks: Tokens = Vec::new();
    let mut bounds: Vec<(usize, String)> = Vec::new();
    let mut binaries: Vec<(usize, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let next = match raw {
            "Minimize" if section == Section::Header => Some(Section::Objective),
            "Subject To" if section == Section::Objective => Some(Section::Constraints),
            "Bounds" if section == Section::Constraints => Some(Section::Bounds),
            "Binaries" if section == Section::Bounds => Some(Section::Binaries),
            "End" if section == Section::Binaries => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let toks = || raw.split_whitespace().map(move |t| (line, t.to_string()));
        match section {
            Section::Header => match raw.strip_prefix("\\ ") {
                Some(c) => comments.push(c.to_string()),
                None => return Err(ParseError { line, msg: format!("unexpected `{raw}` before Minimize") }),
            },
            Section::Objective => obj_toks.extend(toks()),
            Section::Constraints => row_toks.extend(toks()),
            Section::Bounds => bounds.push((line, raw.trim().to_string())),
            Section::Binaries => binaries.push((line, raw.trim().to_string())),
            Section::End => return Err(ParseError { line, msg: "content after End".into() }),
        }
    }
    if section != Section::End {
        return Err(ParseError { line: text.lines().count(), msg: "missing End".into() });
    }

    if obj_toks.first().map(|t| t.1.as_str()) != Some("obj:") {
        return Err(ParseError { line: 1, msg: "objective must start with `obj:`".into() });
    }
    let mut pos = 1;
    let obj = parse_terms(&obj_toks, &mut pos)?;
    if pos != obj_toks.len() {
        return Err(ParseError { line: obj_toks[pos].0, msg: "sense in objective".into() });
    }

    let mut raw_rows = Vec::new();
    let mut pos = 0;
    while pos < row_toks.len() {
        let (line, label) = &row_toks[pos];
        let Some(name) = label.strip_suffix(':') else {
            return Err(ParseError { line: *line, msg: format!("expected a row label, found `{label}`") });
        };
        pos += 1;
        let terms = parse_terms(&row_toks, &mut pos)?;
        let (sense, rhs) = match (row_toks.get(pos), row_toks.get(pos + 1)) {
            (Some((_, s)), Some((l, r))) => {
                (parse_sense(s).ok_or(ParseError { line: *l, msg: "missing sense".into() })?, parse_num(r, *l)?)
            }
            _ => return Err(ParseError { line: *line, msg: "incomplete row".into() }),
        };
        pos += 2;
        if terms.is_empty() {
            return Err(ParseError { line: *line, msg: format!("row `{name}` has no terms") });
        }
        raw_rows.push(RawRow { name: name.to_string(), terms, sense, rhs, line: *line });
    }

    let mut vars = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (line, b) in &bounds {
        let t: Vec<&str> = b.split_whitespace().collect();
        let (name, lower, upper) = match t.as_slice() {
            [lo, "<=", name, "<=", up] => (*name, parse_num(lo, *line)?, Some(parse_num(up, *line)?)),
            [name, ">=", lo] => (*name, parse_num(lo, *line)?, None),
            _ => return Err(ParseError { line: *line, msg: format!("bad bound `{b}`") }),
        };
        if index.insert(name.to_string(), vars.len()).is_some() {
            return Err(ParseError { line: *line, msg: format!("duplicate bound for `{name}`") });
        }
        vars.push(Variable { name: name.to_string(), kind: VarKind::Continuous, lower, upper });
    }
    for (line, name) in &binaries {
        let i = *index.get(name).ok_or(ParseError { line: *line, msg: format!("unknown binary `{name}`") })?;
        if vars[i].kind == VarKind::Binary {
            return Err(ParseError { line: *line, msg: format!("duplicate binary `{name}`") });
        }
        vars[i].kind = VarKind::Binary;
    }
    let resolve = |terms: Vec<(String, f64)>, line: usize| -> Result<Vec<(usize, f64)>, ParseError> {
        terms
            .into_iter()
            .map(|(n, c)| {
                index.get(&n).map(|&i| (i, c)).ok_or(ParseError { line, msg: format!("variable `{n}` has no bound") })
            })
            .collect()
    };
    let objective = resolve(obj, 1)?;
    let rows = raw_rows
        .into_iter()
        .map(|r| Ok(Row { terms: resolve(r.terms, r.line)?, name: r.name, sense: r.sense, rhs: r.rhs }))
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(LinearModel { comments, vars, objective, rows })
}

/// Free-format MPS. Binaries are declared with `BV` bounds.
pub fn write_mps(m: &LinearModel, name: &str) -> String {
    let mut out = String::new();
    for c in &m.comments {
        let _ = writeln!(out, "* {c}");
    }
    let _ = writeln!(out, "NAME {name}");
    out.push_str("ROWS\n N obj\n");
    for r in &m.rows {
        let t = match r.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let _ = writeln!(out, " {t} {}", r.name);
    }
    let mut columns: Vec<Vec<(&str, f64)>> = vec![Vec::new(); m.vars.len()];
    for &(i, c) in &m.objective {
        columns[i].push(("obj", c));
    }
    for r in &m.rows {
        for &(i, c) in &r.terms {
            columns[i].push((&r.name, c));
        }
    }
    out.push_str("COLUMNS\n");
    for (v, col) in m.vars.iter().zip(&columns) {
        for (row, c) in col {
            let _ = writeln!(out, " {} {row} {}", v.name, num(*c));
        }
    }
    out.push_str("RHS\n");
    for r in m.rows.iter().filter(|r| r.rhs != 0.0) {
        let _ = writeln!(out, " rhs {} {}", r.name, num(r.rhs));
    }
    out.push_str("BOUNDS\n");
    for v in &m.vars {
        match (v.kind, v.upper) {
            (VarKind::Binary, _) => {
                let _ = writeln!(out, " BV bnd {}", v.name);
            }
            (VarKind::Continuous, Some(u)) => {
                let _ = writeln!(out, " UP bnd {} {}", v.name, num(u));
            }
            (VarKind::Continuous, None) => {}
        }
        if v.kind == VarKind::Continuous && v.lower != 0.0 {
            let _ = writeln!(out, " LO bnd {} {}", v.name, num(v.lower));
        }
    }
    out.push_str("ENDATA\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::model::{Expr, ModelBuilder};
    use super::*;
    use proptest::prelude::*;

    fn sample() -> LinearModel {
        let mut b = ModelBuilder::new();
        b.comment("sample model");
        let x = b.binary("x(a,1)".into());
        let y = b.binary("y(a,b,2)".into());
        let z = b.continuous("z(1)".into());
        b.objective(x, 11.0);
        b.objective(z, 0.05);
        let mut e = Expr::new();
        e.add(x, 1.0).add(y, -1.0).add(z, -2.5);
        b.row("c(1)".into(), &e, Sense::Le, -3.0);
        let mut e = Expr::new();
        e.add(y, 1.0);
        b.row("c(2)".into(), &e, Sense::Eq, 1.0);
        b.finish()
    }

    #[test]
    fn writes_sections_in_order() {
        let text = write_lp(&sample());
        let expected = "\\ sample model\nMinimize\n obj: 11 x(a,1) + 0.05 z(1)\nSubject To\n \
                        c(1): x(a,1) - y(a,b,2) - 2.5 z(1) <= -3\n c(2): y(a,b,2) = 1\nBounds\n \
                        0 <= x(a,1) <= 1\n 0 <= y(a,b,2) <= 1\n z(1) >= 0\nBinaries\n x(a,1)\n y(a,b,2)\nEnd\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn round_trip_is_identical() {
        let m = sample();
        let text = write_lp(&m);
        let back = parse_lp(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(write_lp(&back), text);
    }

    #[test]
    fn reader_rejects_malformed_input() {
        let good = write_lp(&sample());
        assert!(parse_lp(&good.replace("End\n", "")).is_err());
        assert!(parse_lp(&good.replace(" z(1) >= 0\n", "")).is_err());
        assert!(parse_lp(&good.replace("<= -3", "<=")).is_err());
        assert!(parse_lp(&good.replace("c(2):", "c(2)")).is_err());
        assert!(parse_lp(&good.replace(" y(a,b,2)\nEnd", " w\nEnd")).is_err());
    }

    #[test]
    fn mps_declares_binaries_and_rhs() {
        let mps = write_mps(&sample(), "t");
        assert!(mps.contains(" BV bnd x(a,1)\n"));
        assert!(mps.contains(" rhs c(1) -3\n"));
        assert!(mps.contains(" L c(1)\n"));
        assert!(mps.ends_with("ENDATA\n"));
    }

    proptest! {
        #[test]
        fn random_models_round_trip(
            rows in proptest::collection::vec(
                (proptest::collection::vec((0usize..12, -1e3f64..1e3), 1..30), 0u8..3, -1e4f64..1e4),
                0..20,
            ),
            obj in proptest::collection::vec((0usize..12, -50f64..50.0), 0..12),
        ) {
            let mut b = ModelBuilder::new();
            let vars: Vec<usize> = (0..12)
                .map(|i| if i % 3 == 0 { b.continuous(format!("v({i})")) } else { b.binary(format!("b({i},x)")) })
                .collect();
            for (i, c) in obj {
                b.objective(vars[i], c);
            }
            for (k, (terms, sense, rhs)) in rows.into_iter().enumerate() {
                let mut e = Expr::new();
                for (i, c) in terms {
                    e.add(vars[i], c);
                }
                let sense = [Sense::Le, Sense::Ge, Sense::Eq][sense as usize];
                b.row(format!("r({k})"), &e, sense, rhs);
            }
            let m = b.finish();
            let text = write_lp(&m);
            let back = parse_lp(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(write_lp(&back), text);
        }
    }
}
