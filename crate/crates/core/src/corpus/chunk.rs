//! Greedy in-order packing of sentences into scorer-sized passages.

use serde::{Deserialize, Serialize};

use super::{CorpusError, GuidelineCorpus, Sentence, Tokenizer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassageSentence {
    pub id: String,
    pub text: String,
}

/// A run of consecutive sentences whose token total fits the scorer limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub id: String,
    pub sentences: Vec<PassageSentence>,
    pub token_count: usize,
    /// Set when a single sentence alone exceeds the limit.
    #[serde(default)]
    pub oversized: bool,
}

impl Passage {
    pub fn sentence_ids(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().map(|s| s.id.as_str())
    }

    pub fn contains(&self, sentence_id: &str) -> bool {
        self.sentences.iter().any(|s| s.id == sentence_id)
    }
}

/// Packs every corpus sentence, in document order, into passages of at most
/// `max_tokens` tokens.
pub fn chunk_passages(
    corpus: &GuidelineCorpus,
    tokenizer: &dyn Tokenizer,
    max_tokens: usize,
) -> Result<Vec<Passage>, CorpusError> {
    let sentences = corpus.sentences();
    chunk_sentences(sentences.iter(), tokenizer, max_tokens, "p")
}

/// Packs the given sentences greedily: a sentence joins the open passage when
/// the total stays within `max_tokens`, otherwise it opens a new one. A
/// sentence longer than the limit becomes its own passage flagged `oversized`.
///
/// Passage ids are `{id_prefix}{n:04}` counting from 1.
pub fn chunk_sentences<'a, I>(
    sentences: I,
    tokenizer: &dyn Tokenizer,
    max_tokens: usize,
    id_prefix: &str,
) -> Result<Vec<Passage>, CorpusError>
where
    I: IntoIterator<Item = &'a Sentence>,
{
    let items = sentences.into_iter().map(|s| PassageSentence {
        id: s.id.clone(),
        text: s.text.clone(),
    });
    rechunk(items, tokenizer, max_tokens, id_prefix)
}

/// [`chunk_sentences`] over already-extracted passage sentences.
pub fn rechunk(
    sentences: impl IntoIterator<Item = PassageSentence>,
    tokenizer: &dyn Tokenizer,
    max_tokens: usize,
    id_prefix: &str,
) -> Result<Vec<Passage>, CorpusError> {
    if max_tokens == 0 {
        return Err(CorpusError::ZeroMaxTokens);
    }

    let mut out: Vec<Passage> = Vec::new();
    let mut open: Vec<PassageSentence> = Vec::new();
    let mut open_tokens = 0usize;

    let flush = |out: &mut Vec<Passage>, sentences: Vec<PassageSentence>, tokens, oversized| {
        let id = format!("{id_prefix}{:04}", out.len() + 1);
        out.push(Passage {
            id,
            sentences,
            token_count: tokens,
            oversized,
        });
    };

    for item in sentences {
        let n = tokenizer.count(&item.text);
        if n > max_tokens {
            if !open.is_empty() {
                flush(&mut out, std::mem::take(&mut open), open_tokens, false);
                open_tokens = 0;
            }
            tracing::warn!(sentence = %item.id, tokens = n, max_tokens, "sentence exceeds passage limit");
            flush(&mut out, vec![item], n, true);
            continue;
        }
        if !open.is_empty() && open_tokens + n > max_tokens {
            flush(&mut out, std::mem::take(&mut open), open_tokens, false);
            open_tokens = 0;
        }
        open.push(item);
        open_tokens += n;
    }
    if !open.is_empty() {
        flush(&mut out, open, open_tokens, false);
    }
    Ok(out)
}
