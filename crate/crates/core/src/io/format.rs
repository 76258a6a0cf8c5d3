//! Line-oriented net format.
//!
//! ```text
//! # comment
//! net <name>
//! place <id> <name> init=<uint>
//! trans <id> <name> kind=timed rate=<float>
//! trans <id> <name> kind=immediate weight=<float> prio=<uint>
//! arc <trans-id> <place-id> in|out|inhib mult=<uint>
//! ```
//!
//! Ids are free-form tokens that must be declared before use; dense indices
//! follow declaration order. Omitted attributes default to `init=0`,
//! `rate=1`, `weight=1`, `prio=1` and `mult=1`.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::net::{Arc, ArcKind, Diagnostic, PetriNet, Place, PlaceId, Transition, TransitionId, TransitionKind};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid net: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } => Some(*line),
            ParseError::Invalid(_) => None,
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: line[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: line[..s].chars().count() + 1 });
    }
    out
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> LineParser<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column, message: message.into() }
    }

    fn positional(&self, i: usize, what: &str) -> Result<&Token<'a>, ParseError> {
        self.tokens.get(i).ok_or_else(|| self.error(self.end_column, format!("missing {what}")))
    }

    /// `key=value` attributes from position `from` on.
    fn attributes(&self, from: usize, allowed: &[&str]) -> Result<HashMap<&'a str, (&'a str, usize)>, ParseError> {
        let mut out = HashMap::new();
        for tok in self.tokens.iter().skip(from) {
            let (key, value) = tok
                .text
                .split_once('=')
                .ok_or_else(|| self.error(tok.column, format!("expected key=value, found {:?}", tok.text)))?;
            if !allowed.contains(&key) {
                return Err(self.error(tok.column, format!("unknown attribute {key:?}")));
            }
            if out.insert(key, (value, tok.column)).is_some() {
                return Err(self.error(tok.column, format!("attribute {key:?} given twice")));
            }
        }
        Ok(out)
    }

    fn uint(&self, attrs: &HashMap<&str, (&str, usize)>, key: &str, default: u64) -> Result<u64, ParseError> {
        match attrs.get(key) {
            None => Ok(default),
            Some(&(v, col)) => v
                .parse()
                .map_err(|_| self.error(col, format!("{key} must be a nonnegative integer, found {v:?}"))),
        }
    }

    fn real<R: Scalar>(&self, attrs: &HashMap<&str, (&str, usize)>, key: &str) -> Result<Option<(R, usize)>, ParseError> {
        match attrs.get(key) {
            None => Ok(None),
            Some(&(v, col)) => R::parse_decimal(v)
                .map(|x| Some((x, col)))
                .ok_or_else(|| self.error(col, format!("{key} must be a decimal number, found {v:?}"))),
        }
    }
}

/// Parses a net without running structural validation.
///
/// Syntax errors, undefined or duplicate ids, duplicate arcs and nonpositive
/// numbers are still reported with their position.
pub fn parse_net_unchecked<R: Scalar>(text: &str) -> Result<PetriNet<R>, ParseError> {
    let mut name: Option<String> = None;
    let mut places: Vec<Place> = Vec::new();
    let mut transitions: Vec<Transition<R>> = Vec::new();
    let mut arcs: Vec<Arc> = Vec::new();
    let mut place_ids: HashMap<String, PlaceId> = HashMap::new();
    let mut transition_ids: HashMap<String, TransitionId> = HashMap::new();
    let mut seen_arcs = HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(head) = tokens.first() else {
            continue;
        };
        let head_text = head.text;
        let head_column = head.column;
        let lp = LineParser { line: lineno + 1, end_column: content.trim_end().chars().count() + 1, tokens };

        match head_text {
            "net" => {
                if name.is_some() {
                    return Err(lp.error(head_column, "net name declared twice"));
                }
                let first = lp.positional(1, "net name")?;
                let byte_start = content.char_indices().nth(first.column - 1).map_or(0, |(i, _)| i);
                name = Some(content[byte_start..].trim().to_string());
            }
            "place" => {
                let id = lp.positional(1, "place id")?;
                let pname = lp.positional(2, "place name")?;
                if place_ids.contains_key(id.text) {
                    return Err(lp.error(id.column, format!("duplicate place id {}", id.text)));
                }
                let attrs = lp.attributes(3, &["init"])?;
                let init = lp.uint(&attrs, "init", 0)?;
                let pid = PlaceId(places.len());
                place_ids.insert(id.text.to_string(), pid);
                places.push(Place { id: pid, name: pname.text.to_string(), initial_tokens: init });
            }
            "trans" => {
                let id = lp.positional(1, "transition id")?;
                let tname = lp.positional(2, "transition name")?;
                if transition_ids.contains_key(id.text) {
                    return Err(lp.error(id.column, format!("duplicate transition id {}", id.text)));
                }
                let attrs = lp.attributes(3, &["kind", "rate", "weight", "prio"])?;
                let kind = match attrs.get("kind") {
                    None | Some(&("timed", _)) => {
                        if let Some(&(_, col)) = attrs.get("weight").or(attrs.get("prio")) {
                            return Err(lp.error(col, "weight and prio apply to immediate transitions only"));
                        }
                        let rate = match lp.real::<R>(&attrs, "rate")? {
                            None => R::one(),
                            Some((r, col)) => {
                                if r <= R::zero() || r.is_non_finite() {
                                    return Err(lp.error(col, "nonpositive rate"));
                                }
                                r
                            }
                        };
                        TransitionKind::Timed { rate }
                    }
                    Some(&("immediate", _)) => {
                        if let Some(&(_, col)) = attrs.get("rate") {
                            return Err(lp.error(col, "rate applies to timed transitions only"));
                        }
                        let weight = match lp.real::<R>(&attrs, "weight")? {
                            None => R::one(),
                            Some((w, col)) => {
                                if w <= R::zero() || w.is_non_finite() {
                                    return Err(lp.error(col, "nonpositive weight"));
                                }
                                w
                            }
                        };
                        let prio = lp.uint(&attrs, "prio", 1)?;
                        let priority = u32::try_from(prio)
                            .ok()
                            .filter(|&p| p >= 1)
                            .ok_or_else(|| lp.error(attrs["prio"].1, "prio must be an integer >= 1"))?;
                        TransitionKind::Immediate { weight, priority }
                    }
                    Some(&(other, col)) => {
                        return Err(lp.error(col, format!("kind must be timed or immediate, found {other:?}")))
                    }
                };
                let tid = TransitionId(transitions.len());
                transition_ids.insert(id.text.to_string(), tid);
                transitions.push(Transition { id: tid, name: tname.text.to_string(), kind });
            }
            "arc" => {
                let t = lp.positional(1, "transition id")?;
                let p = lp.positional(2, "place id")?;
                let k = lp.positional(3, "arc kind")?;
                let transition = *transition_ids
                    .get(t.text)
                    .ok_or_else(|| lp.error(t.column, format!("undefined transition {}", t.text)))?;
                let place = *place_ids
                    .get(p.text)
                    .ok_or_else(|| lp.error(p.column, format!("undefined place {}", p.text)))?;
                let kind = match k.text {
                    "in" => ArcKind::Input,
                    "out" => ArcKind::Output,
                    "inhib" => ArcKind::Inhibitor,
                    other => return Err(lp.error(k.column, format!("arc kind must be in, out or inhib, found {other:?}"))),
                };
                let attrs = lp.attributes(4, &["mult"])?;
                let multiplicity = lp.uint(&attrs, "mult", 1)?;
                if multiplicity == 0 {
                    return Err(lp.error(attrs["mult"].1, "multiplicity must be at least 1"));
                }
                if !seen_arcs.insert((transition, place, kind)) {
                    return Err(lp.error(head_column, format!("duplicate {} arc {} {}", k.text, t.text, p.text)));
                }
                arcs.push(Arc { transition, place, kind, multiplicity });
            }
            other => return Err(lp.error(head_column, format!("unknown directive {other:?}"))),
        }
    }

    Ok(PetriNet::new(name.unwrap_or_else(|| "net".to_string()), places, transitions, arcs))
}

/// Parses and validates a net document.
pub fn parse_net<R: Scalar>(text: &str) -> Result<PetriNet<R>, ParseError> {
    let net = parse_net_unchecked(text)?;
    let diags = net.validate();
    if diags.is_empty() {
        Ok(net)
    } else {
        Err(ParseError::Invalid(diags))
    }
}

struct Canonical<'a, R>(&'a PetriNet<R>);

impl<R: Scalar> fmt::Display for Canonical<'_, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let net = self.0;
        writeln!(f, "net {}", net.name())?;
        for p in net.places() {
            writeln!(f, "place {} {} init={}", p.id, p.name, p.initial_tokens)?;
        }
        for t in net.transitions() {
            match t.kind {
                TransitionKind::Timed { rate } => {
                    writeln!(f, "trans {} {} kind=timed rate={}", t.id, t.name, rate.format_decimal())?
                }
                TransitionKind::Immediate { weight, priority } => writeln!(
                    f,
                    "trans {} {} kind=immediate weight={} prio={}",
                    t.id,
                    t.name,
                    weight.format_decimal(),
                    priority
                )?,
            }
        }
        let mut arcs = net.arcs().to_vec();
        arcs.sort_by_key(|a| (a.transition, a.place, a.kind));
        for a in arcs {
            writeln!(f, "arc {} {} {} mult={}", a.transition, a.place, a.kind.keyword(), a.multiplicity)?;
        }
        Ok(())
    }
}

/// Canonical text: places by id, transitions by id, arcs by (transition, place, kind).
pub fn serialize_net<R: Scalar>(net: &PetriNet<R>) -> String {
    let mut out = String::new();
    write!(out, "{}", Canonical(net)).expect("writing to a String cannot fail");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn two_line_document() {
        let net: PetriNet<f64> = parse_net("place p0 P0 init=1\ntrans t0 T0 kind=timed rate=1.0\n").unwrap();
        assert_eq!((net.place_count(), net.transition_count(), net.arcs().len()), (1, 1, 0));
        assert_eq!(net.places()[0].initial_tokens, 1);
    }

    #[test]
    fn undefined_place_names_the_line() {
        let text = "net x\nplace p0 P0 init=0\ntrans t0 T0 kind=timed rate=1\narc t0 p9 in mult=1\n";
        let err = parse_net::<f64>(text).unwrap_err();
        assert_eq!(err.line(), Some(4));
        let msg = err.to_string();
        assert!(msg.contains("undefined place p9"), "{msg}");
        assert!(msg.contains("column 8"), "{msg}");
    }

    #[test]
    fn positioned_errors() {
        let cases = [
            ("bogus directive\n", 1, "unknown directive"),
            ("place p0 P0 init=x\n", 1, "nonnegative integer"),
            ("place p0 A\nplace p0 B\n", 2, "duplicate place id"),
            ("trans t0 T kind=timed rate=0\n", 1, "nonpositive rate"),
            ("trans t0 T kind=weird\n", 1, "kind must be"),
            ("trans t0 T kind=immediate prio=0\n", 1, "prio must be"),
            ("place p0 P\ntrans t0 T\narc t0 p0 in\narc t0 p0 in mult=2\n", 4, "duplicate in arc"),
            ("place p0 P\ntrans t0 T\narc t0 p0 sideways\n", 3, "arc kind"),
            ("place p0\n", 1, "missing place name"),
        ];
        for (text, line, needle) in cases {
            let err = parse_net::<f64>(text).unwrap_err();
            assert_eq!(err.line(), Some(line), "{text:?}");
            assert!(err.to_string().contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn empty_document_is_invalid() {
        assert!(matches!(parse_net::<f64>("# nothing\n"), Err(ParseError::Invalid(_))));
    }

    #[test]
    fn comments_defaults_and_net_names_with_spaces() {
        let text = "net my grid  # trailing\nplace a A\ntrans b B kind=immediate\narc b a out\n";
        let net: PetriNet<f64> = parse_net(text).unwrap();
        assert_eq!(net.name(), "my grid");
        assert_eq!(net.transitions()[0].kind, TransitionKind::Immediate { weight: 1.0, priority: 1 });
        assert_eq!(net.arcs()[0].multiplicity, 1);
    }

    #[test]
    fn serialization_is_canonical_and_round_trips() {
        let text = "net n\nplace x X init=2\nplace y Y\ntrans u U kind=immediate weight=0.5 prio=3\ntrans v V kind=timed rate=2.25\narc v y out mult=1\narc u x inhib mult=4\narc u x in mult=2\n";
        let net: PetriNet<f64> = parse_net(text).unwrap();
        let once = serialize_net(&net);
        assert_eq!(
            once,
            "net n\nplace p0 X init=2\nplace p1 Y init=0\ntrans t0 U kind=immediate weight=0.500000 prio=3\ntrans t1 V kind=timed rate=2.250000\narc t0 p0 in mult=2\narc t0 p0 inhib mult=4\narc t1 p1 out mult=1\n"
        );
        let back: PetriNet<f64> = parse_net(&once).unwrap();
        assert!(back.structurally_eq(&net));
        assert_eq!(serialize_net(&back), once);
    }

    #[test]
    fn exact_rates_survive_the_format() {
        let net: PetriNet<Rational64> = parse_net("place p P\ntrans t T kind=timed rate=0.125\narc t p out\n").unwrap();
        assert_eq!(net.transitions()[0].kind, TransitionKind::Timed { rate: Rational64::new(1, 8) });
        let back: PetriNet<Rational64> = parse_net(&serialize_net(&net)).unwrap();
        assert!(back.structurally_eq(&net));
    }
}
