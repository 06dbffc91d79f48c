//! Shared fixtures for the integration tests: the worked 8-turn dialog and
//! a seeded synthetic corpus generator with mixed topic/structure signal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dialogsim::{Corpus, Dialog};

/// The 8-turn worked example.
pub const DIALOG_EXTRACT: &str = "\
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

const TOPICS: [&[&str]; 6] = [
    &[
        "recycling", "bins", "paper", "plastic", "bottles", "cans", "garbage", "landfill",
        "compost", "curbside", "pickup", "sorting", "glass", "aluminum", "newspapers",
        "cardboard", "trash", "reuse", "containers", "collection",
    ],
    &[
        "computer", "software", "keyboard", "screen", "programs", "printer", "modem", "files",
        "disk", "memory", "internet", "email", "laptop", "password", "windows", "mouse",
        "network", "database", "server", "code",
    ],
    &[
        "weather", "rain", "snow", "sunshine", "clouds", "storm", "temperature", "forecast",
        "wind", "humidity", "thunder", "drizzle", "freezing", "heat", "drought", "flood",
        "seasons", "winter", "summer", "spring",
    ],
    &[
        "cooking", "recipes", "oven", "dinner", "spices", "baking", "kitchen", "vegetables",
        "chicken", "pasta", "sauce", "grill", "dessert", "breakfast", "flavor", "ingredients",
        "salad", "soup", "roast", "leftovers",
    ],
    &[
        "baseball", "football", "playoffs", "team", "season", "coach", "stadium", "pitcher",
        "quarterback", "score", "innings", "league", "basketball", "tournament", "champions",
        "defense", "offense", "draft", "trade", "fans",
    ],
    &[
        "music", "guitar", "piano", "concert", "band", "songs", "album", "jazz", "orchestra",
        "drums", "melody", "lyrics", "singer", "radio", "vinyl", "chorus", "rhythm", "blues",
        "festival", "violin",
    ],
];

/// Function words; all of these are in the default stoplist.
const FILLERS: &[&str] = &[
    "the", "i", "you", "it", "a", "to", "of", "we", "and", "that", "is", "was", "in", "so",
    "but", "they", "have", "this", "just", "about",
];

/// Shared content vocabulary drawn across topics; widens the TF-IDF vectors.
const MISC_WORDS: usize = 240;

/// Generates `n_dialogs` dialogs with independent topic and structure
/// assignments.
///
/// Topic drives the word pool (textual signal); the structure class drives
/// turn count band, words per turn and the chance that a turn rephrases the
/// previous one (structural signal). Deterministic for a given seed.
pub fn synthetic_corpus(n_dialogs: usize, min_turns: usize, max_turns: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dialogs = Vec::with_capacity(n_dialogs);
    for d in 0..n_dialogs {
        let topic = TOPICS[rng.random_range(0..TOPICS.len())];
        let class = rng.random_range(0..4usize);
        let (lo, hi) = turn_band(min_turns, max_turns, class);
        let n_turns = rng.random_range(lo..=hi);
        let (word_lo, word_hi) = if class % 2 == 0 { (3, 6) } else { (8, 14) };
        let repeat_prob = if class < 2 { 0.05 } else { 0.45 };

        let mut turns: Vec<(String, String)> = Vec::with_capacity(n_turns);
        for t in 0..n_turns {
            let speaker = if t % 2 == 0 { "A" } else { "B" };
            let rephrase = t > 0 && rng.random::<f64>() < repeat_prob;
            let text = if rephrase {
                // Same content terms as the previous turn behind a fresh
                // filler, so the adjacent binary cosine stays at 1.
                let filler = FILLERS[rng.random_range(0..FILLERS.len())];
                format!("{filler} {}", turns[t - 1].1)
            } else {
                let n_words = rng.random_range(word_lo..=word_hi);
                let words: Vec<&str> = (0..n_words)
                    .map(|_| {
                        let roll = rng.random::<f64>();
                        if roll < 0.3 {
                            FILLERS[rng.random_range(0..FILLERS.len())]
                        } else if roll < 0.45 {
                            misc_word(rng.random_range(0..MISC_WORDS))
                        } else {
                            topic[rng.random_range(0..topic.len())]
                        }
                    })
                    .collect();
                words.join(" ")
            };
            turns.push((speaker.to_string(), text));
        }
        dialogs.push(Dialog::new(format!("d{d}"), turns).expect("non-empty synthetic dialog"));
    }
    Corpus::new(dialogs).expect("unique synthetic ids")
}

fn turn_band(min_turns: usize, max_turns: usize, class: usize) -> (usize, usize) {
    let span = max_turns - min_turns + 1;
    let lo = min_turns + class * span / 4;
    let hi = (min_turns + (class + 1) * span / 4).saturating_sub(1).max(lo);
    (lo, hi.min(max_turns))
}

fn misc_word(i: usize) -> &'static str {
    use std::sync::OnceLock;
    static WORDS: OnceLock<Vec<String>> = OnceLock::new();
    let words = WORDS.get_or_init(|| (0..MISC_WORDS).map(|i| format!("misc{i:03}")).collect());
    &words[i]
}
