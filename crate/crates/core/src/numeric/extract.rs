use serde::{Deserialize, Serialize};

use super::Interval;

/// Comparator phrase attached to the noun phrase it constrains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericPhrase {
    pub noun_phrase: Vec<String>,
    pub interval: Interval,
    pub unit: Option<String>,
    /// Bracketed restatement in another unit, as in `10% [86 mmol/mol]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternate: Option<AlternateValue>,
    /// Character offsets `[start, end)` in the source text.
    pub source_span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternateValue {
    pub interval: Interval,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub phrases: Vec<NumericPhrase>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Word,
    Number(f64),
    Symbol,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    text: String,
    start: usize,
    end: usize,
}

const UNITS: &[(&str, &str)] = &[
    ("ml/min/1.73 m2", "mL/min/1.73 m2"),
    ("ml/min/1.73m2", "mL/min/1.73 m2"),
    ("mmol/mol", "mmol/mol"),
    ("mmol/l", "mmol/L"),
    ("µmol/l", "umol/L"),
    ("umol/l", "umol/L"),
    ("mg/dl", "mg/dL"),
    ("mg/mmol", "mg/mmol"),
    ("mg/g", "mg/g"),
    ("mg/l", "mg/L"),
    ("g/dl", "g/dL"),
    ("kg/m2", "kg/m2"),
    ("kg/m²", "kg/m2"),
    ("ml/min", "mL/min"),
    ("mm hg", "mmHg"),
    ("mmhg", "mmHg"),
    ("iu/l", "IU/L"),
    ("u/l", "U/L"),
    ("years", "years"),
    ("year", "years"),
    ("months", "months"),
    ("weeks", "weeks"),
    ("days", "days"),
    ("bpm", "bpm"),
    ("kg", "kg"),
    ("mg", "mg"),
    ("%", "%"),
];

const STOP: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "their", "his", "her", "its", "our",
    "your", "my", "whose", "who", "which", "what", "when", "where", "while", "if", "as", "or",
    "and", "but", "nor", "with", "without", "for", "of", "in", "on", "at", "to", "from", "by",
    "than", "then", "be", "is", "are", "was", "were", "been", "being", "have", "has", "had",
    "do", "does", "did", "should", "would", "could", "can", "may", "might", "must", "will",
    "shall", "very", "not", "no", "there", "it", "they", "them", "we", "you", "patient",
    "patients", "done", "considered", "recommended",
];

const BOUNDARY: &[&str] = &[
    "are", "is", "was", "were", "be", "been", "being", "remain", "remains", "remained", "stay",
    "stays", "still", "of", "at",
];

pub(crate) fn is_stopword(w: &str) -> bool {
    STOP.contains(&w)
}

fn normalize_word(w: &str) -> String {
    match w {
        "hba1c" | "hb1ac" => "a1c".to_string(),
        _ => w.to_string(),
    }
}

fn lex(chars: &[char], diagnostics: &mut Vec<Diagnostic>) -> Vec<Tok> {
    let mut toks = Vec::new();
    let mut i = 0;
    let n = chars.len();
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let negative = (c == '-' || c == '−')
            && i + 1 < n
            && chars[i + 1].is_ascii_digit()
            && (i == 0 || !chars[i - 1].is_alphanumeric());
        if c.is_ascii_digit() || negative {
            let start = i;
            let mut text = String::new();
            if negative {
                text.push('-');
                i += 1;
            }
            while i < n && (chars[i].is_ascii_digit() || chars[i] == ',') {
                if chars[i] == ',' {
                    let group = i + 4 <= n
                        && chars[i + 1..i + 4].iter().all(|d| d.is_ascii_digit())
                        && (i + 4 == n || !chars[i + 4].is_ascii_digit());
                    if !group {
                        break;
                    }
                } else {
                    text.push(chars[i]);
                }
                i += 1;
            }
            if i + 1 < n && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                text.push('.');
                i += 1;
                while i < n && chars[i].is_ascii_digit() {
                    text.push(chars[i]);
                    i += 1;
                }
                if i + 1 < n && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    let bad_start = start;
                    while i < n && (chars[i].is_ascii_digit() || chars[i] == '.') {
                        i += 1;
                    }
                    let raw: String = chars[bad_start..i].iter().collect();
                    diagnostics.push(Diagnostic {
                        offset: bad_start,
                        message: format!("malformed number {raw:?}"),
                    });
                    toks.push(Tok { kind: Kind::Symbol, text: raw, start: bad_start, end: i });
                    continue;
                }
            }
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => toks.push(Tok { kind: Kind::Number(v), text, start, end: i }),
                _ => {
                    diagnostics.push(Diagnostic {
                        offset: start,
                        message: format!("unparseable number {text:?}"),
                    });
                    toks.push(Tok { kind: Kind::Symbol, text, start, end: i });
                }
            }
            continue;
        }
        if c.is_alphabetic() {
            let start = i;
            while i < n
                && (chars[i].is_alphanumeric()
                    || (chars[i] == '-' && i + 1 < n && chars[i + 1].is_alphanumeric()))
            {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect::<String>().to_lowercase();
            toks.push(Tok { kind: Kind::Word, text, start, end: i });
            continue;
        }
        let start = i;
        let two: String = chars[i..(i + 2).min(n)].iter().collect();
        let text = if two == ">=" || two == "<=" || two == "=<" || two == "=>" {
            i += 2;
            match two.as_str() {
                "=<" => "<=".to_string(),
                "=>" => ">=".to_string(),
                _ => two,
            }
        } else {
            i += 1;
            c.to_string()
        };
        toks.push(Tok { kind: Kind::Symbol, text, start, end: i });
    }
    toks
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
    Between,
}

const PATTERNS: &[(&[&str], Op)] = &[
    (&["greater", "than", "or", "equal", "to"], Op::Ge),
    (&["more", "than", "or", "equal", "to"], Op::Ge),
    (&["higher", "than", "or", "equal", "to"], Op::Ge),
    (&["less", "than", "or", "equal", "to"], Op::Le),
    (&["lesser", "than", "or", "equal", "to"], Op::Le),
    (&["lower", "than", "or", "equal", "to"], Op::Le),
    (&["greater", "than"], Op::Gt),
    (&["more", "than"], Op::Gt),
    (&["higher", "than"], Op::Gt),
    (&["less", "than"], Op::Lt),
    (&["lesser", "than"], Op::Lt),
    (&["fewer", "than"], Op::Lt),
    (&["lower", "than"], Op::Lt),
    (&["at", "least"], Op::Ge),
    (&["at", "most"], Op::Le),
    (&["equal", "to"], Op::Eq),
    (&["equals"], Op::Eq),
    (&["between"], Op::Between),
    (&[">="], Op::Ge),
    (&["≥"], Op::Ge),
    (&["<="], Op::Le),
    (&["≤"], Op::Le),
    (&[">"], Op::Gt),
    (&["<"], Op::Lt),
    (&["="], Op::Eq),
];

fn match_comparator(toks: &[Tok], i: usize) -> Option<(Op, usize)> {
    PATTERNS.iter().find_map(|(words, op)| {
        let fits = words.len() <= toks.len() - i
            && words.iter().zip(&toks[i..]).all(|(w, t)| t.text == *w);
        fits.then_some((*op, words.len()))
    })
}

fn number_at(toks: &[Tok], i: usize) -> Option<f64> {
    match toks.get(i).map(|t| &t.kind) {
        Some(Kind::Number(v)) => Some(*v),
        _ => None,
    }
}

/// Matches a unit beginning at char offset `pos` (after spaces). Returns the
/// canonical unit and the char offset just past it.
fn unit_at(chars: &[char], lower: &[char], mut pos: usize) -> Option<(&'static str, usize)> {
    while pos < chars.len() && chars[pos] == ' ' {
        pos += 1;
    }
    UNITS.iter().find_map(|(pat, canon)| {
        let pat: Vec<char> = pat.chars().collect();
        let end = pos + pat.len();
        let boundary = end >= chars.len() || !chars[end].is_alphanumeric();
        (end <= lower.len() && lower[pos..end] == pat[..] && boundary).then_some((*canon, end))
    })
}

/// Index of the first token starting at or after char offset `pos`.
fn token_from(toks: &[Tok], pos: usize) -> usize {
    toks.iter().position(|t| t.start >= pos).unwrap_or(toks.len())
}

fn interval_for(op: Op, v: f64) -> Interval {
    match op {
        Op::Gt => Interval::greater_than(v),
        Op::Ge => Interval::at_least(v),
        Op::Lt => Interval::less_than(v),
        Op::Le => Interval::at_most(v),
        Op::Eq | Op::Between => Interval::point(v),
    }
}

fn noun_phrase_before(toks: &[Tok], comparator: usize) -> (Vec<String>, Option<usize>) {
    let mut j = comparator;
    while j > 0 {
        let t = &toks[j - 1];
        let skip = (t.kind == Kind::Word && BOUNDARY.contains(&t.text.as_str()))
            || (t.kind == Kind::Symbol && t.text == "(");
        if !skip {
            break;
        }
        j -= 1;
    }
    let mut words = Vec::new();
    let mut first_start = None;
    while j > 0 && words.len() < 4 {
        let t = &toks[j - 1];
        if t.kind != Kind::Word || is_stopword(&t.text) {
            break;
        }
        words.push(normalize_word(&t.text));
        first_start = Some(t.start);
        j -= 1;
    }
    words.reverse();
    (words, first_start)
}

struct Operand {
    value: f64,
    unit: Option<&'static str>,
    end_char: usize,
    next_tok: usize,
}

fn operand(toks: &[Tok], chars: &[char], lower: &[char], i: usize) -> Option<Operand> {
    let value = number_at(toks, i)?;
    let mut end_char = toks[i].end;
    let mut next_tok = i + 1;
    let mut unit = None;
    if let Some((u, end)) = unit_at(chars, lower, end_char) {
        unit = Some(u);
        end_char = end;
        next_tok = token_from(toks, end);
    }
    Some(Operand { value, unit, end_char, next_tok })
}

/// Finds comparator phrases such as `A1C levels are greater than 10%`.
pub fn extract_numeric_phrases(text: &str) -> Extraction {
    let chars: Vec<char> = text.chars().collect();
    let lower: Vec<char> = chars
        .iter()
        .map(|c| c.to_lowercase().next().unwrap_or(*c))
        .collect();
    let mut out = Extraction::default();
    let toks = lex(&chars, &mut out.diagnostics);

    let mut i = 0;
    while i < toks.len() {
        let Some((op, len)) = match_comparator(&toks, i) else {
            i += 1;
            continue;
        };
        let start_tok = i;
        let Some(first) = operand(&toks, &chars, &lower, i + len) else {
            if op != Op::Between || number_at(&toks, i + len).is_none() {
                out.diagnostics.push(Diagnostic {
                    offset: toks[i].start,
                    message: format!("comparator {:?} without a numeric operand", toks[i].text),
                });
            }
            i += len;
            continue;
        };

        let (interval, unit, mut end_char, mut next) = if op == Op::Between {
            let joiner = toks.get(first.next_tok).map(|t| t.text.as_str());
            let second = match joiner {
                Some("and") | Some("to") | Some("-") | Some("–") => {
                    operand(&toks, &chars, &lower, first.next_tok + 1)
                }
                _ => None,
            };
            let Some(second) = second else {
                out.diagnostics.push(Diagnostic {
                    offset: toks[i].start,
                    message: "\"between\" without a second bound".to_string(),
                });
                i = first.next_tok;
                continue;
            };
            (
                Interval::between(first.value, second.value),
                second.unit.or(first.unit),
                second.end_char,
                second.next_tok,
            )
        } else {
            (interval_for(op, first.value), first.unit, first.end_char, first.next_tok)
        };

        let mut alternate = None;
        if op != Op::Between {
            if let Some(open) = toks.get(next).filter(|t| t.text == "[" || t.text == "(") {
                let close = if open.text == "[" { "]" } else { ")" };
                if let Some(alt) = operand(&toks, &chars, &lower, next + 1) {
                    if toks.get(alt.next_tok).is_some_and(|t| t.text == close) {
                        alternate = Some(AlternateValue {
                            interval: interval_for(op, alt.value),
                            unit: alt.unit.map(str::to_string),
                        });
                        end_char = toks[alt.next_tok].end;
                        next = alt.next_tok + 1;
                    }
                }
            }
        }

        let (noun_phrase, noun_start) = noun_phrase_before(&toks, start_tok);
        out.phrases.push(NumericPhrase {
            noun_phrase,
            interval,
            unit: unit.map(str::to_string),
            alternate,
            source_span: (noun_start.unwrap_or(toks[start_tok].start), end_char),
        });
        i = next.max(i + 1);
    }
    out
}
