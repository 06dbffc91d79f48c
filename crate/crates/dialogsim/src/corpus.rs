//! Dialog corpus ingestion and text normalization.
//!
//! Owns every raw-text decision shared by the downstream similarity code:
//! corpus file formats, tokenization, stopword filtering and per-turn word
//! counts. Two interchange formats are supported:
//!
//! * `jsonl` — one JSON object per line:
//!   `{"id": "...", "turns": [{"speaker": "...", "text": "..."}]}`
//! * `transcript` — dialogs start with a `=== <id>` header line, turns are
//!   `SPEAKER: text` lines, blank lines are ignored.
//!
//! Parsed corpora are immutable; everything here is safe to share across
//! threads.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One contiguous contribution by a single participant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Turn {
    /// Opaque participant tag, e.g. `"A"`.
    pub speaker: String,
    /// Raw utterance text. Never blank.
    pub text: String,
    /// 0-based position within the containing dialog.
    pub index: usize,
}

/// An ordered sequence of speaker-attributed turns; the unit of comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dialog {
    id: String,
    turns: Vec<Turn>,
}

impl Dialog {
    /// Builds a dialog from `(speaker, text)` pairs, assigning turn indices.
    ///
    /// Fails if `turns` is empty or any text is blank.
    pub fn new<I, S, T>(id: impl Into<String>, turns: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let id = id.into();
        let turns: Vec<Turn> = turns
            .into_iter()
            .enumerate()
            .map(|(index, (speaker, text))| Turn {
                speaker: speaker.into(),
                text: text.into(),
                index,
            })
            .collect();
        if turns.is_empty() {
            return Err(Error::EmptyDialog(id));
        }
        for turn in &turns {
            if turn.text.trim().is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("dialog '{}': turn {} has empty text", id, turn.index),
                });
            }
        }
        Ok(Self { id, turns })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    /// Number of turns; at least 1.
    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }
}

/// An ordered collection of dialogs with unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    dialogs: Vec<Dialog>,
}

impl Corpus {
    /// Wraps dialogs into a corpus, rejecting duplicate ids.
    pub fn new(dialogs: Vec<Dialog>) -> Result<Self> {
        let mut seen = HashSet::new();
        for dialog in &dialogs {
            if !seen.insert(dialog.id().to_string()) {
                return Err(Error::DuplicateId(dialog.id().to_string()));
            }
        }
        Ok(Self { dialogs })
    }

    pub fn dialogs(&self) -> &[Dialog] {
        &self.dialogs
    }

    pub fn len(&self) -> usize {
        self.dialogs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dialogs.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Dialog> {
        self.dialogs.iter().find(|d| d.id() == id)
    }

    /// Dialog ids in corpus order; used as matrix labels.
    pub fn labels(&self) -> Vec<String> {
        self.dialogs.iter().map(|d| d.id().to_string()).collect()
    }
}

/// Supported corpus file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Transcript,
}

#[derive(Serialize, Deserialize)]
struct TurnRecord {
    speaker: String,
    text: String,
}

#[derive(Serialize, Deserialize)]
struct DialogRecord {
    id: String,
    turns: Vec<TurnRecord>,
}

/// Parses a corpus from a byte stream, preserving dialog and turn order.
pub fn parse_corpus<R: Read>(input: R, format: CorpusFormat) -> Result<Corpus> {
    let reader = BufReader::new(input);
    match format {
        CorpusFormat::Jsonl => parse_jsonl(reader),
        CorpusFormat::Transcript => parse_transcript(reader),
    }
}

fn parse_jsonl<R: BufRead>(reader: R) -> Result<Corpus> {
    let mut dialogs = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: DialogRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        if record.turns.is_empty() {
            return Err(Error::EmptyDialog(record.id));
        }
        let dialog = Dialog::new(
            record.id.clone(),
            record.turns.into_iter().map(|t| (t.speaker, t.text)),
        )
        .map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: lineno, msg },
            other => other,
        })?;
        dialogs.push(dialog);
    }
    if dialogs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Corpus::new(dialogs)
}

fn parse_transcript<R: BufRead>(reader: R) -> Result<Corpus> {
    let mut dialogs: Vec<Dialog> = Vec::new();
    let mut current: Option<(String, Vec<(String, String)>)> = None;

    let close = |current: &mut Option<(String, Vec<(String, String)>)>,
                 dialogs: &mut Vec<Dialog>|
     -> Result<()> {
        if let Some((id, turns)) = current.take() {
            if turns.is_empty() {
                return Err(Error::EmptyDialog(id));
            }
            dialogs.push(Dialog::new(id, turns)?);
        }
        Ok(())
    };

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("===") {
            let id = rest.trim();
            if id.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "dialog header is missing an id".into(),
                });
            }
            close(&mut current, &mut dialogs)?;
            current = Some((id.to_string(), Vec::new()));
        } else if let Some((speaker, text)) = trimmed.split_once(':') {
            let Some((_, turns)) = current.as_mut() else {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "turn line before any `=== <id>` header".into(),
                });
            };
            let speaker = speaker.trim();
            let text = text.trim();
            if speaker.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "turn line has an empty speaker".into(),
                });
            }
            if text.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "turn line has empty text".into(),
                });
            }
            turns.push((speaker.to_string(), text.to_string()));
        } else {
            return Err(Error::Parse {
                line: lineno,
                msg: "expected `=== <id>` or `SPEAKER: text`".into(),
            });
        }
    }
    close(&mut current, &mut dialogs)?;
    if dialogs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Corpus::new(dialogs)
}

/// Writes a corpus in jsonl format; inverse of [`parse_corpus`] with
/// [`CorpusFormat::Jsonl`].
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut w: W) -> Result<()> {
    for dialog in corpus.dialogs() {
        let record = DialogRecord {
            id: dialog.id().to_string(),
            turns: dialog
                .turns()
                .iter()
                .map(|t| TurnRecord {
                    speaker: t.speaker.clone(),
                    text: t.text.clone(),
                })
                .collect(),
        };
        let line = serde_json::to_string(&record)
            .map_err(|e| Error::Format(format!("jsonl encode: {e}")))?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes a corpus in transcript format; inverse of [`parse_corpus`] with
/// [`CorpusFormat::Transcript`] for single-line, trimmed turn texts.
pub fn write_transcript<W: Write>(corpus: &Corpus, mut w: W) -> Result<()> {
    for dialog in corpus.dialogs() {
        writeln!(w, "=== {}", dialog.id())?;
        for turn in dialog.turns() {
            writeln!(w, "{}: {}", turn.speaker, turn.text)?;
        }
    }
    Ok(())
}

/// Lowercases and splits text into terms.
///
/// A term is a maximal run of letters and digits, plus apostrophes that sit
/// between two such characters, so contractions like `can't` stay whole.
pub fn tokenize(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let internal_apostrophe = c == '\''
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if c.is_alphanumeric() || internal_apostrophe {
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Number of whitespace-delimited words in the raw turn text.
///
/// Deliberately not the TF-IDF tokenizer: punctuation stays attached to its
/// word, matching how the per-turn word averages are defined.
pub fn word_count(turn: &Turn) -> usize {
    turn.text.split_whitespace().count()
}

/// A set of terms filtered out before any similarity computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stoplist {
    terms: HashSet<String>,
}

/// The embedded default list: classic English function words (pronouns,
/// determiners, auxiliaries, modals, prepositions, conjunctions). It contains
/// no contraction forms; the tokenizer keeps those as content-bearing terms.
const DEFAULT_STOPWORDS: &str = include_str!("stopwords_en.txt");

impl Stoplist {
    pub fn empty() -> Self {
        Self {
            terms: HashSet::new(),
        }
    }

    /// Builds a stoplist from terms; terms are expected to be lowercase.
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            terms: terms.into_iter().map(Into::into).collect(),
        }
    }

    /// Reads one lowercase term per line; blank lines are skipped.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let reader = BufReader::new(reader);
        let mut terms = HashSet::new();
        for line in reader.lines() {
            let line = line?;
            let term = line.trim();
            if !term.is_empty() {
                terms.insert(term.to_lowercase());
            }
        }
        Ok(Self { terms })
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Default for Stoplist {
    fn default() -> Self {
        Self::from_terms(DEFAULT_STOPWORDS.lines().filter(|l| !l.trim().is_empty()))
    }
}

/// Order-preserving stopword filter.
pub fn remove_stopwords(tokens: Vec<String>, stoplist: &Stoplist) -> Vec<String> {
    let mut tokens = tokens;
    tokens.retain(|t| !stoplist.contains(t));
    tokens
}

/// Tokenizes and stopword-filters in one step.
pub fn content_tokens(text: &str, stoplist: &Stoplist) -> Vec<String> {
    remove_stopwords(tokenize(text), stoplist)
}
