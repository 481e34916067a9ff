//! Tokenization and sentence splitting for guideline text.

/// Splits text into tokens for counting, idf weighting and BLEU.
pub trait Tokenizer: Send + Sync {
    /// Identifier recorded alongside any statistic produced with this tokenizer.
    fn name(&self) -> &str;

    fn tokenize(&self, text: &str) -> Vec<String>;

    fn count(&self, text: &str) -> usize {
        self.tokenize(text).len()
    }
}

/// Lowercases, splits on any run of non-alphanumeric characters and keeps
/// decimal numbers such as `16.7` as a single token.
#[derive(Debug, Clone, Copy, Default)]
pub struct WordTokenizer;

impl Tokenizer for WordTokenizer {
    fn name(&self) -> &str {
        "word-lowercase-v1"
    }

    fn tokenize(&self, text: &str) -> Vec<String> {
        let chars: Vec<char> = text.chars().collect();
        let mut tokens = Vec::new();
        let mut current = String::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_alphanumeric() {
                current.extend(c.to_lowercase());
            } else if c == '.'
                && !current.is_empty()
                && current.chars().all(|d| d.is_ascii_digit())
                && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
            {
                current.push('.');
            } else if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            i += 1;
        }
        if !current.is_empty() {
            tokens.push(current);
        }
        tokens
    }
}

const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "etc", "vs", "al", "dr", "mr", "mrs", "ms", "fig", "figs", "no", "approx", "mmol",
    "mg", "dl", "u.s", "st", "jr", "ref", "refs", "cf", "ca", "min", "max", "eq", "vol", "suppl",
];

const CLOSERS: &[char] = &[')', ']', '"', '\'', '\u{201d}', '\u{2019}'];

/// Splits on `.`, `?` or `!` followed by whitespace and an uppercase letter,
/// unless the word before a period is a known abbreviation.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (_, c) = chars[i];
        if matches!(c, '.' | '?' | '!') {
            let mut end = i + 1;
            while end < chars.len() && CLOSERS.contains(&chars[end].1) {
                end += 1;
            }
            let mut next = end;
            while next < chars.len() && chars[next].1.is_whitespace() {
                next += 1;
            }
            let boundary = next > end
                && next < chars.len()
                && starts_sentence(&chars[next..])
                && !(c == '.' && is_abbreviation(&chars[..i]));
            if boundary {
                let byte_end = chars.get(end).map_or(text.len(), |&(b, _)| b);
                push_trimmed(&mut out, &text[start..byte_end]);
                start = chars[next].0;
                i = next;
                continue;
            }
        }
        i += 1;
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn starts_sentence(rest: &[(usize, char)]) -> bool {
    let mut iter = rest.iter().map(|&(_, c)| c);
    match iter.next() {
        Some(c) if c.is_uppercase() => true,
        Some('"' | '\u{201c}' | '(') => iter.next().is_some_and(char::is_uppercase),
        _ => false,
    }
}

fn is_abbreviation(before: &[(usize, char)]) -> bool {
    let word: String = before
        .iter()
        .rev()
        .map(|&(_, c)| c)
        .take_while(|c| !c.is_whitespace() && *c != '(')
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect::<String>()
        .to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

fn push_trimmed(out: &mut Vec<String>, piece: &str) {
    let normalized = normalize_whitespace(piece);
    if !normalized.is_empty() {
        out.push(normalized);
    }
}

/// Collapses all whitespace runs to single spaces and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_tokenizer_lowercases_and_splits() {
        let t = WordTokenizer;
        assert_eq!(
            t.tokenize("A1C levels >10% [86 mmol/mol]"),
            vec!["a1c", "levels", "10", "86", "mmol", "mol"]
        );
    }

    #[test]
    fn decimals_stay_whole() {
        let t = WordTokenizer;
        assert_eq!(t.tokenize("16.7 mmol/L."), vec!["16.7", "mmol", "l"]);
        assert_eq!(t.tokenize("end. Next"), vec!["end", "next"]);
        assert_eq!(t.tokenize("v2.x"), vec!["v2", "x"]);
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(WordTokenizer.tokenize("  -- ").is_empty());
    }

    #[test]
    fn splits_on_terminal_punctuation_before_capital() {
        let s = split_sentences("First one. Second one? Third! fourth stays.");
        assert_eq!(s, vec!["First one.", "Second one?", "Third! fourth stays."]);
    }

    #[test]
    fn abbreviations_do_not_split() {
        let s = split_sentences("Use agents (e.g. Metformin) first. Then titrate, vs. Placebo arms.");
        assert_eq!(s, vec!["Use agents (e.g. Metformin) first.", "Then titrate, vs. Placebo arms."]);
        let s = split_sentences("Values of 16.7 mmol. Are rare.");
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn closing_brackets_stay_with_sentence() {
        let s = split_sentences("Risk falls (185). Benefit is shown.");
        assert_eq!(s, vec!["Risk falls (185).", "Benefit is shown."]);
        let s = split_sentences("He said \"stop.\" Then left.");
        assert_eq!(s, vec!["He said \"stop.\"", "Then left."]);
    }
}
