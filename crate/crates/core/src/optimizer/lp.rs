//! A reader for the subset of the LP file format that [`export_lp`] writes,
//! used to check exported models.
//!
//! [`export_lp`]: super::export_lp

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct LpParseError {
    pub line: usize,
    pub message: String,
}

/// Counts recovered from an LP file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpSummary {
    pub minimize: bool,
    pub objective_terms: usize,
    pub rows: usize,
    pub variables: usize,
    pub binaries: usize,
    pub generals: usize,
    pub bounds: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    General,
    Binary,
    End,
}

fn section_of(line: &str) -> Option<(Section, bool)> {
    match line.to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "minimum" | "min" => Some((Section::Objective, true)),
        "maximize" | "maximise" | "maximum" | "max" => Some((Section::Objective, false)),
        "subject to" | "such that" | "st" | "s.t." | "st." => Some((Section::Constraints, false)),
        "bounds" | "bound" => Some((Section::Bounds, false)),
        "general" | "generals" | "gen" => Some((Section::General, false)),
        "binary" | "binaries" | "bin" => Some((Section::Binary, false)),
        "end" => Some((Section::End, false)),
        _ => None,
    }
}

fn is_name(tok: &str) -> bool {
    let mut chars = tok.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || "_!\"#$%&()/,;?@'`{}|~".contains(c))
        && chars.all(|c| c.is_ascii_alphanumeric() || "_!\"#$%&()/,.;?@'`{}|~".contains(c))
}

fn is_number(tok: &str) -> bool {
    tok.parse::<f64>().is_ok()
}

fn is_relop(tok: &str) -> bool {
    matches!(tok, "<=" | ">=" | "=" | "<" | ">" | "=<" | "=>")
}

/// Parses one linear expression row (`[name:] terms [op rhs]`).
struct Expr {
    name: Option<String>,
    vars: Vec<String>,
    has_relop: bool,
}

fn parse_expr(tokens: &[(usize, String)], need_relop: bool) -> Result<Expr, LpParseError> {
    let err = |line: usize, message: String| LpParseError { line, message };
    let mut it = tokens.iter().peekable();
    let mut name = None;
    if let Some((_, first)) = it.peek() {
        if let Some(n) = first.strip_suffix(':') {
            name = Some(n.to_string());
            it.next();
        }
    }
    let mut vars = Vec::new();
    let mut has_relop = false;
    let mut pending_coef = false;
    while let Some((line, tok)) = it.next() {
        if is_relop(tok) {
            if pending_coef {
                return Err(err(*line, "coefficient without a variable".into()));
            }
            let (_, rhs) = it.next().ok_or_else(|| err(*line, "missing right-hand side".into()))?;
            let rhs = rhs.trim_start_matches('+');
            if !is_number(rhs) {
                return Err(err(*line, format!("right-hand side `{rhs}` is not a number")));
            }
            has_relop = true;
            if let Some((l, extra)) = it.next() {
                return Err(err(*l, format!("unexpected `{extra}` after the right-hand side")));
            }
            break;
        }
        match tok.as_str() {
            "+" | "-" => {
                if pending_coef {
                    return Err(err(*line, "sign after a coefficient".into()));
                }
            }
            t if is_number(t) => {
                if pending_coef {
                    return Err(err(*line, "two coefficients in a row".into()));
                }
                pending_coef = true;
            }
            t if is_name(t) => {
                vars.push(t.to_string());
                pending_coef = false;
            }
            t => return Err(err(*line, format!("unexpected token `{t}`"))),
        }
    }
    if pending_coef {
        return Err(err(
            tokens.last().map_or(0, |t| t.0),
            "coefficient without a variable".into(),
        ));
    }
    if need_relop && !has_relop {
        return Err(err(
            tokens.first().map_or(0, |t| t.0),
            "row has no relational operator".into(),
        ));
    }
    Ok(Expr { name, vars, has_relop })
}

fn tokenize(line: &str, lineno: usize, out: &mut Vec<(usize, String)>) {
    // operators may be glued to their neighbours
    let spaced = line
        .replace("<=", " <= ")
        .replace(">=", " >= ")
        .replace("=<", " =< ")
        .replace("=>", " => ");
    let mut pieces: Vec<String> = Vec::new();
    for raw in spaced.split_whitespace() {
        if matches!(raw, "<=" | ">=" | "=<" | "=>") {
            pieces.push(raw.to_string());
            continue;
        }
        let mut cur = String::new();
        for ch in raw.chars() {
            match ch {
                '+' | '-'
                    if cur.is_empty()
                        || cur.ends_with(['e', 'E']) && cur.chars().next().is_some_and(|c| c.is_ascii_digit()) =>
                {
                    if cur.is_empty() {
                        pieces.push(ch.to_string());
                    } else {
                        cur.push(ch);
                    }
                }
                '+' | '-' | '=' | '<' | '>' => {
                    if !cur.is_empty() {
                        pieces.push(std::mem::take(&mut cur));
                    }
                    pieces.push(ch.to_string());
                }
                ':' => {
                    cur.push(':');
                    pieces.push(std::mem::take(&mut cur));
                }
                _ => cur.push(ch),
            }
        }
        if !cur.is_empty() {
            pieces.push(cur);
        }
    }
    // fold a sign into a directly following right-hand-side number
    let mut i = 0;
    while i < pieces.len() {
        let glue = i + 1 < pieces.len()
            && (pieces[i] == "-" || pieces[i] == "+")
            && i > 0
            && is_relop(&pieces[i - 1])
            && is_number(&pieces[i + 1]);
        if glue {
            let merged = format!("{}{}", pieces[i], pieces[i + 1]);
            out.push((lineno, merged));
            i += 2;
        } else {
            out.push((lineno, pieces[i].clone()));
            i += 1;
        }
    }
}

/// Reads an LP file and counts its parts; fails on grammar violations.
pub fn parse_lp(text: &str) -> Result<LpSummary, LpParseError> {
    let mut summary = LpSummary::default();
    let mut section = Section::Start;
    let mut names: BTreeSet<String> = BTreeSet::new();
    let mut row_names: BTreeSet<String> = BTreeSet::new();
    let mut binaries: BTreeSet<String> = BTreeSet::new();
    let mut generals: BTreeSet<String> = BTreeSet::new();
    let mut objective: Vec<(usize, String)> = Vec::new();
    let mut row: Vec<(usize, String)> = Vec::new();

    let finish_row = |row: &mut Vec<(usize, String)>,
                      names: &mut BTreeSet<String>,
                      row_names: &mut BTreeSet<String>,
                      summary: &mut LpSummary|
     -> Result<(), LpParseError> {
        if row.is_empty() {
            return Ok(());
        }
        let expr = parse_expr(row, true)?;
        let line = row[0].0;
        let name = expr.name.ok_or(LpParseError {
            line,
            message: "unnamed row".into(),
        })?;
        if !row_names.insert(name.clone()) {
            return Err(LpParseError {
                line,
                message: format!("duplicate row name `{name}`"),
            });
        }
        names.extend(expr.vars);
        summary.rows += 1;
        row.clear();
        Ok(())
    };

    for (n, raw) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((next, minimize)) = section_of(line) {
            if section == Section::Constraints {
                finish_row(&mut row, &mut names, &mut row_names, &mut summary)?;
            }
            if next == Section::Objective {
                summary.minimize = minimize;
            }
            section = next;
            continue;
        }
        match section {
            Section::Start | Section::End => {
                return Err(LpParseError {
                    line: lineno,
                    message: format!("content outside a section: `{line}`"),
                })
            }
            Section::Objective => tokenize(line, lineno, &mut objective),
            Section::Constraints => {
                let mut toks = Vec::new();
                tokenize(line, lineno, &mut toks);
                // a new named row closes the previous one
                if toks.first().is_some_and(|t| t.1.ends_with(':')) {
                    finish_row(&mut row, &mut names, &mut row_names, &mut summary)?;
                }
                row.extend(toks);
            }
            Section::Bounds => {
                let mut toks = Vec::new();
                tokenize(line, lineno, &mut toks);
                let vars: Vec<&String> = toks
                    .iter()
                    .map(|t| &t.1)
                    .filter(|t| {
                        is_name(t)
                            && !t.eq_ignore_ascii_case("free")
                            && !t.eq_ignore_ascii_case("inf")
                            && !t.eq_ignore_ascii_case("infinity")
                    })
                    .collect();
                if vars.len() != 1 {
                    return Err(LpParseError {
                        line: lineno,
                        message: format!("bound line must name exactly one variable: `{line}`"),
                    });
                }
                names.insert(vars[0].clone());
                summary.bounds += 1;
            }
            Section::General | Section::Binary => {
                for tok in line.split_whitespace() {
                    if !is_name(tok) {
                        return Err(LpParseError {
                            line: lineno,
                            message: format!("`{tok}` is not a variable name"),
                        });
                    }
                    names.insert(tok.to_string());
                    if section == Section::General {
                        generals.insert(tok.to_string());
                    } else {
                        binaries.insert(tok.to_string());
                    }
                }
            }
        }
    }
    if section != Section::End {
        return Err(LpParseError {
            line: text.lines().count(),
            message: "missing End".into(),
        });
    }
    let obj = parse_expr(&objective, false)?;
    if obj.has_relop {
        return Err(LpParseError {
            line: objective.first().map_or(0, |t| t.0),
            message: "objective has a relational operator".into(),
        });
    }
    summary.objective_terms = obj.vars.len();
    names.extend(obj.vars);
    summary.variables = names.len();
    summary.binaries = binaries.len();
    summary.generals = generals.len();
    Ok(summary)
}
