//! Text formats: DIMACS CNF input, a line-oriented game format, and the
//! verification report.
//!
//! The game format is deliberately diffable:
//!
//! ```text
//! # comment
//! vertices 4
//! first enforcer
//! set 3 0 1 2
//! ```
//!
//! `first` is optional on input (Enforcer by default) and always emitted on
//! output, so serializing and re-parsing is the identity on valid specs.

use thiserror::Error;

use crate::model::{Constraint, GameSpec, Player, VertexId};
use crate::reduction::{Cnf, Literal, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Parses DIMACS CNF. Comment lines start with `c`; the `p cnf <vars>
/// <clauses>` header is mandatory; clauses are 0-terminated signed integers
/// and may span lines. A line holding just `%` ends the input (legacy corpus
/// convention).
pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut in_clause = false;
    let mut last_line = 1;

    'lines: for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        last_line = line_no;
        if line == "%" {
            break 'lines;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate 'p cnf' header"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let parsed = match tokens.as_slice() {
                ["p", "cnf", vars, count] => {
                    vars.parse::<u32>().ok().zip(count.parse::<usize>().ok())
                }
                _ => None,
            };
            match parsed {
                Some((vars, count)) => header = Some((vars, count)),
                None => return Err(err(line_no, format!("malformed header '{line}'"))),
            }
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(line_no, "clause data before 'p cnf' header"));
        };
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| err(line_no, format!("bad literal token '{token}'")))?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
                in_clause = false;
            } else {
                let magnitude = value.unsigned_abs();
                if magnitude > num_vars as u64 {
                    return Err(err(
                        line_no,
                        format!("literal {value} out of range ({num_vars} variables)"),
                    ));
                }
                current.push(Literal { var: (magnitude - 1) as u32, positive: value > 0 });
                in_clause = true;
            }
        }
    }

    let Some((num_vars, clause_count)) = header else {
        return Err(err(last_line, "missing 'p cnf' header"));
    };
    if in_clause {
        return Err(err(last_line, "unterminated final clause (missing 0)"));
    }
    if clauses.len() != clause_count {
        return Err(err(
            last_line,
            format!("clause count mismatch: header says {clause_count}, found {}", clauses.len()),
        ));
    }
    Ok(Cnf::new(num_vars, clauses))
}

fn player_keyword(p: Player) -> &'static str {
    match p {
        Player::Avoider => "avoider",
        Player::Enforcer => "enforcer",
    }
}

/// Parses the game format described in the module docs.
pub fn parse_game(text: &str) -> Result<GameSpec, ParseError> {
    let mut board: Option<u32> = None;
    let mut first: Option<Player> = None;
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut last_line = 1;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        last_line = line_no;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("vertices") => {
                if board.is_some() {
                    return Err(err(line_no, "duplicate 'vertices' line"));
                }
                let count = tokens
                    .next()
                    .and_then(|t| t.parse::<u32>().ok())
                    .ok_or_else(|| err(line_no, "expected 'vertices <count>'"))?;
                if tokens.next().is_some() {
                    return Err(err(line_no, "trailing tokens after vertex count"));
                }
                board = Some(count);
            }
            Some("first") => {
                if first.is_some() {
                    return Err(err(line_no, "duplicate 'first' line"));
                }
                first = Some(match tokens.next() {
                    Some("avoider") => Player::Avoider,
                    Some("enforcer") => Player::Enforcer,
                    _ => return Err(err(line_no, "expected 'first avoider' or 'first enforcer'")),
                });
            }
            Some("set") => {
                let Some(board_size) = board else {
                    return Err(err(line_no, "'set' before 'vertices'"));
                };
                let threshold = tokens
                    .next()
                    .and_then(|t| t.parse::<u32>().ok())
                    .ok_or_else(|| err(line_no, "expected 'set <threshold> <vertices...>'"))?;
                let mut members = Vec::new();
                for t in tokens {
                    let v = t
                        .parse::<u32>()
                        .map_err(|_| err(line_no, format!("bad vertex token '{t}'")))?;
                    if v >= board_size {
                        return Err(err(
                            line_no,
                            format!("vertex {v} out of range (board {board_size})"),
                        ));
                    }
                    members.push(VertexId(v));
                }
                let constraint = Constraint::new(members, threshold);
                if threshold == 0 {
                    return Err(err(line_no, "threshold 0 is below 1"));
                }
                if threshold as usize > constraint.members().len() {
                    return Err(err(
                        line_no,
                        format!("threshold {threshold} > set size {}", constraint.members().len()),
                    ));
                }
                constraints.push(constraint);
            }
            Some(other) => return Err(err(line_no, format!("unknown directive '{other}'"))),
            None => unreachable!("blank lines are skipped"),
        }
    }

    let Some(board_size) = board else {
        return Err(err(last_line, "missing 'vertices' line"));
    };
    Ok(GameSpec::new(board_size, constraints, first.unwrap_or(Player::Enforcer)))
}

/// Canonical text for a spec; members print in ascending order and the first
/// player is always explicit.
pub fn serialize_game(spec: &GameSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("vertices {}\n", spec.board_size));
    out.push_str(&format!("first {}\n", player_keyword(spec.default_first)));
    for c in &spec.constraints {
        out.push_str(&format!("set {}", c.threshold()));
        for v in c.members() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

/// One verification outcome, ready for the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportLine {
    Verified { name: String, report: VerifyReport },
    /// The instance could not be decided (unreadable, unparsable, or over
    /// budget); the run as a whole must not claim consistency.
    Failed { name: String, message: String },
}

/// Renders one line per instance; field order is part of the format.
pub fn write_report(lines: &[ReportLine]) -> String {
    let mut out = String::new();
    for line in lines {
        match line {
            ReportLine::Verified { name, report } => {
                out.push_str(&format!(
                    "{name} sat={} winner={} consistent={} nodes={} ms={}\n",
                    u8::from(report.sat),
                    match report.winner {
                        Player::Avoider => "A",
                        Player::Enforcer => "E",
                    },
                    u8::from(report.consistent),
                    report.nodes,
                    report.elapsed.as_millis(),
                ));
            }
            ReportLine::Failed { name, message } => {
                out.push_str(&format!("{name} error {message}\n"));
            }
        }
    }
    out
}
