//! Native Kripke text format.
//!
//! ```text
//! # comment
//! states 3
//! label 0: p q
//! label 2: "atom with spaces"
//! 0 -> 1
//! 1 -> 2
//! ```
//! The `states` header comes first. Atoms are whitespace-separated; an atom
//! containing whitespace, `"`, `#`, `:` or `\` is written double-quoted with
//! `\"` and `\\` escapes. [`write_kripke`] emits label lines in state order
//! with atoms sorted by name, followed by transitions in `(source, target)`
//! order, so its output is a fixed point of parse-then-write.

use std::fmt::Write as _;

use super::{KripkeBuilder, KripkeStructure};
use crate::error::ParseError;

pub fn parse_kripke(text: &str) -> Result<KripkeStructure, ParseError> {
    let mut builder: Option<KripkeBuilder> = None;
    let mut num_states = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (keyword, rest) = body
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((body, ""));

        if keyword == "states" {
            if builder.is_some() {
                return Err(ParseError::Header {
                    line,
                    reason: "duplicate `states` header".into(),
                });
            }
            let count = strip_comment(rest);
            num_states = count.parse().map_err(|_| ParseError::Header {
                line,
                reason: format!("`{count}` is not a state count"),
            })?;
            builder = Some(KripkeBuilder::new(num_states));
            continue;
        }

        let b = builder.as_mut().ok_or_else(|| ParseError::Header {
            line,
            reason: "expected `states N` before any other line".into(),
        })?;
        let in_range = |state: usize| {
            if state < num_states {
                Ok(state)
            } else {
                Err(ParseError::StateOutOfRange {
                    line,
                    state,
                    num_states,
                })
            }
        };

        if keyword == "label" {
            let (state, atoms) = rest.split_once(':').ok_or_else(|| ParseError::Label {
                line,
                reason: "expected `label STATE: ATOMS`".into(),
            })?;
            let state = state
                .trim()
                .parse::<usize>()
                .map_err(|_| ParseError::Label {
                    line,
                    reason: format!("`{}` is not a state index", state.trim()),
                })?;
            let state = in_range(state)?;
            for atom in
                tokenize_atoms(atoms).map_err(|reason| ParseError::Label { line, reason })?
            {
                b.label(state, &atom);
            }
        } else if let Some((src, dst)) = strip_comment(body).split_once("->") {
            let num = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| ParseError::Transition {
                        line,
                        reason: format!("`{}` is not a state index", s.trim()),
                    })
            };
            let (src, dst) = (in_range(num(src)?)?, in_range(num(dst)?)?);
            b.edge(src, dst);
        } else {
            return Err(ParseError::Unrecognized {
                line,
                text: body.to_string(),
            });
        }
    }

    builder
        .ok_or(ParseError::MissingHeader)?
        .build()
        .map_err(|e| ParseError::Header {
            line: 0,
            reason: e.to_string(),
        })
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("").trim()
}

fn tokenize_atoms(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.peek() {
            None | Some('#') => return Ok(out),
            Some('"') => {
                chars.next();
                let mut atom = String::new();
                loop {
                    match chars.next() {
                        None => return Err("unterminated quoted atom".into()),
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some(c @ ('"' | '\\')) => atom.push(c),
                            _ => return Err("invalid escape in quoted atom".into()),
                        },
                        Some(c) => atom.push(c),
                    }
                }
                out.push(atom);
            }
            Some(_) => {
                let mut atom = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() {
                        break;
                    }
                    if c == '"' || c == '#' {
                        return Err(format!("unexpected `{c}` inside atom"));
                    }
                    atom.push(c);
                    chars.next();
                }
                out.push(atom);
            }
        }
    }
}

fn needs_quotes(atom: &str) -> bool {
    atom.is_empty()
        || atom
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '"' | '#' | ':' | '\\'))
}

fn push_atom(out: &mut String, atom: &str) {
    if needs_quotes(atom) {
        out.push('"');
        for c in atom.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
    } else {
        out.push_str(atom);
    }
}

pub fn write_kripke(ks: &KripkeStructure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "states {}", ks.num_states());
    for s in 0..ks.num_states() {
        if ks.labels(s).is_empty() {
            continue;
        }
        let mut names: Vec<&str> = ks
            .labels(s)
            .iter()
            .map(|&a| ks.atoms()[a].as_str())
            .collect();
        names.sort_unstable();
        let _ = write!(out, "label {s}:");
        for name in names {
            out.push(' ');
            push_atom(&mut out, name);
        }
        out.push('\n');
    }
    for (a, b) in ks.transitions() {
        let _ = writeln!(out, "{a} -> {b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_small() {
        let text =
            "# demo\nstates 3\nlabel 0: p q\nlabel 2: q # trailing\n0 -> 1\n1 -> 2 # c\n2 -> 2\n";
        let ks = parse_kripke(text).unwrap();
        assert_eq!(ks.num_states(), 3);
        assert_eq!(ks.num_transitions(), 3);
        assert_eq!(ks.atoms(), &["p".to_string(), "q".to_string()]);
        assert_eq!(ks.labels(2), &[1]);
        assert_eq!(
            write_kripke(&ks),
            "states 3\nlabel 0: p q\nlabel 2: q\n0 -> 1\n1 -> 2\n2 -> 2\n"
        );
    }

    #[test]
    fn quoted_atoms() {
        let text = "states 1\nlabel 0: \"a b\" \"x\\\"y\" ⊥state\n";
        let ks = parse_kripke(text).unwrap();
        assert_eq!(ks.atoms(), &["a b", "x\"y", "⊥state"]);
        let written = write_kripke(&ks);
        assert_eq!(written, "states 1\nlabel 0: \"a b\" \"x\\\"y\" ⊥state\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(
            parse_kripke("0 -> 1\n"),
            Err(ParseError::Header { line: 1, .. })
        ));
        assert!(matches!(
            parse_kripke("states 2\n0 -> 2\n"),
            Err(ParseError::StateOutOfRange {
                line: 2,
                state: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_kripke("states 2\nlabel x: p\n"),
            Err(ParseError::Label { line: 2, .. })
        ));
        assert!(matches!(
            parse_kripke("states 2\nfoo\n"),
            Err(ParseError::Unrecognized { line: 2, .. })
        ));
        assert_eq!(parse_kripke("# nothing\n"), Err(ParseError::MissingHeader));
    }

    fn arb_text() -> impl Strategy<Value = String> {
        (1usize..7)
            .prop_flat_map(|n| {
                let atoms = prop::sample::select(vec!["p", "q", "a b", "⊥state", "x:y"]);
                (
                    Just(n),
                    prop::collection::vec((0..n, atoms), 0..10),
                    prop::collection::vec((0..n, 0..n), 0..15),
                )
            })
            .prop_map(|(n, labels, edges)| {
                let mut b = KripkeBuilder::new(n);
                for (s, a) in labels {
                    b.label(s, a);
                }
                b.edges(edges);
                write_kripke(&b.build().unwrap())
            })
    }

    proptest! {
        #[test]
        fn writer_output_is_a_fixed_point(text in arb_text()) {
            let again = write_kripke(&parse_kripke(&text).unwrap());
            prop_assert_eq!(again, text);
        }
    }
}
