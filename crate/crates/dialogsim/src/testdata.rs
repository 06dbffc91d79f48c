//! Fixtures shared by the unit tests.

use crate::corpus::{Corpus, CorpusFormat, Dialog, parse_corpus};

/// The 8-turn worked example used across the crate's golden tests.
pub(crate) const DIALOG_EXTRACT: &str = "\
=== d1
A: You know right away what you want.
B: I know right away what we, what we want.
B: I keep hearing about it.
B: I keep hearing the advertisements of it.
A: You can't find them.
A: You can't find them.
B: and, i thought i would really miss that.
A: I would, too,
";

pub(crate) fn dialog_extract() -> Dialog {
    parse_corpus(DIALOG_EXTRACT.as_bytes(), CorpusFormat::Transcript)
        .unwrap()
        .dialogs()[0]
        .clone()
}

pub(crate) fn dialog(id: &str, turns: &[(&str, &str)]) -> Dialog {
    Dialog::new(id, turns.iter().map(|&(s, t)| (s, t))).unwrap()
}

pub(crate) fn corpus(dialogs: Vec<Dialog>) -> Corpus {
    Corpus::new(dialogs).unwrap()
}
