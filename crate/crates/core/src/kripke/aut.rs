//! Aldebaran `.aut` reader and writer.
//!
//! ```text
//! des (initial, num_transitions, num_states)
//! (src, "label", dst)
//! ```
//! Labels may also appear unquoted. Duplicate transitions are merged.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::ParseError;
use crate::stateset::StateId;

/// Edge-labelled transition system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTs {
    pub num_states: usize,
    pub initial: StateId,
    pub edges: Vec<(StateId, String, StateId)>,
}

pub fn parse_aut(text: &str) -> Result<LabeledTs, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (initial, expected, num_states) = parse_header(header_line, header)?;
    if num_states == 0 || initial >= num_states {
        return Err(ParseError::StateOutOfRange {
            line: header_line,
            state: initial,
            num_states,
        });
    }

    let mut edges = Vec::with_capacity(expected);
    let mut seen = HashSet::with_capacity(expected);
    let mut actual = 0;
    let mut last_line = header_line;
    for (line, body) in lines {
        last_line = line;
        let (src, label, dst) = parse_transition(line, body)?;
        for s in [src, dst] {
            if s >= num_states {
                return Err(ParseError::StateOutOfRange {
                    line,
                    state: s,
                    num_states,
                });
            }
        }
        actual += 1;
        let edge = (src, label, dst);
        if seen.insert(edge.clone()) {
            edges.push(edge);
        }
    }
    if actual != expected {
        return Err(ParseError::TransitionCount {
            line: last_line,
            expected,
            actual,
        });
    }
    Ok(LabeledTs {
        num_states,
        initial,
        edges,
    })
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize, usize), ParseError> {
    let err = |reason: &str| ParseError::Header {
        line,
        reason: reason.to_string(),
    };
    let rest = text
        .strip_prefix("des")
        .ok_or_else(|| err("expected `des (initial, transitions, states)`"))?
        .trim();
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err("expected parenthesized triple"))?;
    let fields: Vec<&str> = inner.split(',').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(err("expected three fields"));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| err(&format!("`{s}` is not a nonnegative integer")))
    };
    Ok((num(fields[0])?, num(fields[1])?, num(fields[2])?))
}

fn parse_transition(line: usize, text: &str) -> Result<(usize, String, usize), ParseError> {
    let err = |reason: &str| ParseError::Transition {
        line,
        reason: reason.to_string(),
    };
    let inner = text
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err("expected `(src, label, dst)`"))?;
    let first = inner.find(',').ok_or_else(|| err("missing fields"))?;
    let last = inner
        .rfind(',')
        .filter(|&l| l > first)
        .ok_or_else(|| err("missing fields"))?;
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| err(&format!("`{}` is not a state index", s.trim())))
    };
    let src = num(&inner[..first])?;
    let dst = num(&inner[last + 1..])?;
    let raw = inner[first + 1..last].trim();
    let label = match raw.strip_prefix('"') {
        Some(r) => r
            .strip_suffix('"')
            .ok_or_else(|| err("unterminated label quote"))?,
        None => raw,
    };
    Ok((src, label.to_string(), dst))
}

pub fn write_aut(lts: &LabeledTs) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "des ({},{},{})",
        lts.initial,
        lts.edges.len(),
        lts.num_states
    );
    for (s, l, t) in &lts.edges {
        let _ = writeln!(out, "({s},\"{l}\",{t})");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_example() {
        let lts = parse_aut("des (0,2,2)\n(0,\"a\",1)\n(1,\"b\",0)").unwrap();
        assert_eq!(lts.num_states, 2);
        assert_eq!(lts.initial, 0);
        assert_eq!(
            lts.edges,
            vec![(0, "a".to_string(), 1), (1, "b".to_string(), 0)]
        );
    }

    #[test]
    fn no_edges() {
        let lts = parse_aut("des (0,0,1)").unwrap();
        assert_eq!(lts.num_states, 1);
        assert!(lts.edges.is_empty());
    }

    #[test]
    fn wrong_edge_count() {
        let err = parse_aut("des (0,3,2)\n(0,\"a\",1)\n(1,\"b\",0)\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::TransitionCount {
                line: 3,
                expected: 3,
                actual: 2
            }
        );
        assert!(err.to_string().contains("3 transitions but 2"));
    }

    #[test]
    fn out_of_range_reports_line() {
        let err = parse_aut("des (0,1,2)\n(0,\"a\",5)\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::StateOutOfRange {
                line: 2,
                state: 5,
                num_states: 2
            }
        );
    }

    #[test]
    fn malformed_header() {
        assert!(matches!(
            parse_aut("des 0,1,2\n"),
            Err(ParseError::Header { line: 1, .. })
        ));
        assert!(matches!(
            parse_aut("hello"),
            Err(ParseError::Header { line: 1, .. })
        ));
        assert_eq!(parse_aut("  \n"), Err(ParseError::MissingHeader));
    }

    #[test]
    fn unquoted_and_comma_labels() {
        let lts = parse_aut(
            "des (0, 3, 2)\n(0, i, 1)\n(1, \"SEND !1, !2\", 0)\n(1, \"SEND !1, !2\", 0)\n",
        )
        .unwrap();
        assert_eq!(lts.edges.len(), 2);
        assert_eq!(lts.edges[0].1, "i");
        assert_eq!(lts.edges[1].1, "SEND !1, !2");
    }

    #[test]
    fn write_then_parse() {
        let lts = parse_aut("des (1,2,3)\n(0,\"a\",1)\n(2,\"b c\",0)").unwrap();
        assert_eq!(parse_aut(&write_aut(&lts)).unwrap(), lts);
    }
}
