//! Text preprocessing: lowercasing, punctuation stripping, optional
//! stop-word removal, and optional Porter suffix stemming.
//!
//! The pipeline is deterministic for a fixed input and options. Stemming and
//! stop-word removal are opt-in; the defaults only lowercase and split on
//! non-alphanumeric characters.

use std::collections::HashSet;

/// Compact English stop-word list for the opt-in filter.
const DEFAULT_STOP_WORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "from", "had", "has", "have",
    "he", "her", "his", "i", "if", "in", "into", "is", "it", "its", "my", "no", "not", "of", "on",
    "or", "our", "she", "so", "such", "that", "the", "their", "then", "there", "these", "they",
    "this", "to", "was", "we", "were", "will", "with", "you", "your",
];

#[derive(Debug, Clone)]
pub struct TokenizeOptions {
    pub lowercase: bool,
    pub stem: bool,
    /// `None` disables stop-word removal entirely.
    pub stop_words: Option<HashSet<String>>,
}

impl Default for TokenizeOptions {
    fn default() -> Self {
        Self {
            lowercase: true,
            stem: false,
            stop_words: None,
        }
    }
}

impl TokenizeOptions {
    pub fn default_stop_words() -> HashSet<String> {
        DEFAULT_STOP_WORDS.iter().map(|w| w.to_string()).collect()
    }

    pub fn with_default_stop_words(mut self) -> Self {
        self.stop_words = Some(Self::default_stop_words());
        self
    }

    pub fn with_stemming(mut self) -> Self {
        self.stem = true;
        self
    }
}

/// Splits `text` into normalized tokens. Empty input yields an empty list.
pub fn tokenize(text: &str, options: &TokenizeOptions) -> Vec<String> {
    let lowered;
    let source = if options.lowercase {
        lowered = text.to_lowercase();
        &lowered
    } else {
        text
    };
    source
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .filter(|t| match &options.stop_words {
            Some(set) => !set.contains(*t),
            None => true,
        })
        .map(|t| {
            if options.stem {
                porter_stem(t)
            } else {
                t.to_string()
            }
        })
        .collect()
}

/// Porter (1980) suffix stemmer over ASCII lowercase words. Words containing
/// non-ASCII characters or shorter than three letters pass through unchanged.
pub fn porter_stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()) {
        return word.to_string();
    }
    let mut w: Vec<u8> = word.bytes().collect();
    step_1a(&mut w);
    step_1b(&mut w);
    step_1c(&mut w);
    step_2(&mut w);
    step_3(&mut w);
    step_4(&mut w);
    step_5a(&mut w);
    step_5b(&mut w);
    String::from_utf8(w).expect("ascii stays ascii")
}

fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

/// Porter's measure: the number of vowel-consonant sequences in the stem.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let cons = is_consonant(w, i);
        if cons && prev_vowel {
            m += 1;
        }
        prev_vowel = !cons;
    }
    m
}

fn contains_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_consonant(w, i))
}

fn ends_double_consonant(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1)
}

/// `*o`: stem ends consonant-vowel-consonant where the final consonant is
/// not w, x, or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn ends_with(w: &[u8], suffix: &[u8]) -> bool {
    w.len() > suffix.len() && w.ends_with(suffix)
}

fn step_1a(w: &mut Vec<u8>) {
    if w.ends_with(b"sses") {
        w.truncate(w.len() - 2);
    } else if w.ends_with(b"ies") {
        w.truncate(w.len() - 2);
    } else if w.ends_with(b"ss") {
        // keep
    } else if w.ends_with(b"s") {
        w.truncate(w.len() - 1);
    }
}

fn step_1b(w: &mut Vec<u8>) {
    if ends_with(w, b"eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            w.truncate(w.len() - 1);
        }
        return;
    }
    let stripped = if ends_with(w, b"ed") && contains_vowel(&w[..w.len() - 2]) {
        w.truncate(w.len() - 2);
        true
    } else if ends_with(w, b"ing") && contains_vowel(&w[..w.len() - 3]) {
        w.truncate(w.len() - 3);
        true
    } else {
        false
    };
    if !stripped {
        return;
    }
    if w.ends_with(b"at") || w.ends_with(b"bl") || w.ends_with(b"iz") {
        w.push(b'e');
    } else if ends_double_consonant(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
        w.truncate(w.len() - 1);
    } else if measure(w) == 1 && ends_cvc(w) {
        w.push(b'e');
    }
}

fn step_1c(w: &mut [u8]) {
    let n = w.len();
    if n > 1 && w[n - 1] == b'y' && contains_vowel(&w[..n - 1]) {
        w[n - 1] = b'i';
    }
}

/// Applies the first (longest-suffix) matching rule whose measure condition
/// holds; a matching suffix with a failing condition blocks the whole step.
fn apply_rules(w: &mut Vec<u8>, min_measure: usize, rules: &[(&[u8], &[u8])]) {
    let mut candidate: Option<(usize, &[u8])> = None;
    for (suffix, replacement) in rules {
        if ends_with(w, suffix) {
            match candidate {
                Some((len, _)) if suffix.len() <= len => {}
                _ => candidate = Some((suffix.len(), replacement)),
            }
        }
    }
    if let Some((len, replacement)) = candidate {
        let stem_len = w.len() - len;
        if measure(&w[..stem_len]) > min_measure {
            w.truncate(stem_len);
            w.extend_from_slice(replacement);
        }
    }
}

fn step_2(w: &mut Vec<u8>) {
    apply_rules(
        w,
        0,
        &[
            (b"ational", b"ate"),
            (b"tional", b"tion"),
            (b"enci", b"ence"),
            (b"anci", b"ance"),
            (b"izer", b"ize"),
            (b"abli", b"able"),
            (b"alli", b"al"),
            (b"entli", b"ent"),
            (b"eli", b"e"),
            (b"ousli", b"ous"),
            (b"ization", b"ize"),
            (b"ation", b"ate"),
            (b"ator", b"ate"),
            (b"alism", b"al"),
            (b"iveness", b"ive"),
            (b"fulness", b"ful"),
            (b"ousness", b"ous"),
            (b"aliti", b"al"),
            (b"iviti", b"ive"),
            (b"biliti", b"ble"),
        ],
    );
}

fn step_3(w: &mut Vec<u8>) {
    apply_rules(
        w,
        0,
        &[
            (b"icate", b"ic"),
            (b"ative", b""),
            (b"alize", b"al"),
            (b"iciti", b"ic"),
            (b"ical", b"ic"),
            (b"ful", b""),
            (b"ness", b""),
        ],
    );
}

fn step_4(w: &mut Vec<u8>) {
    const SUFFIXES: &[&[u8]] = &[
        b"ement", b"ance", b"ence", b"able", b"ible", b"ment", b"ion", b"ant", b"ent", b"ism",
        b"ate", b"iti", b"ous", b"ive", b"ize", b"al", b"er", b"ic", b"ou",
    ];
    let mut candidate: Option<usize> = None;
    for suffix in SUFFIXES {
        if ends_with(w, suffix) {
            match candidate {
                Some(len) if suffix.len() <= len => {}
                _ => candidate = Some(suffix.len()),
            }
        }
    }
    if let Some(len) = candidate {
        let stem_len = w.len() - len;
        if &w[stem_len..] == b"ion"
            && !(stem_len > 0 && matches!(w[stem_len - 1], b's' | b't'))
        {
            return;
        }
        if measure(&w[..stem_len]) > 1 {
            w.truncate(stem_len);
        }
    }
}

fn step_5a(w: &mut Vec<u8>) {
    if w.last() == Some(&b'e') {
        let stem = &w[..w.len() - 1];
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            w.truncate(w.len() - 1);
        }
    }
}

fn step_5b(w: &mut Vec<u8>) {
    if measure(w) > 1 && ends_double_consonant(w) && w.last() == Some(&b'l') {
        w.truncate(w.len() - 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_no_tokens() {
        assert!(tokenize("", &TokenizeOptions::default()).is_empty());
        assert!(tokenize("  ,.!  ", &TokenizeOptions::default()).is_empty());
    }

    #[test]
    fn default_pipeline_lowercases_and_strips_punctuation() {
        let tokens = tokenize("Hello, WORLD! 42", &TokenizeOptions::default());
        assert_eq!(tokens, vec!["hello", "world", "42"]);
    }

    #[test]
    fn stemming_collapses_repeated_service() {
        let options = TokenizeOptions::default().with_stemming();
        let tokens = tokenize("Service, service!", &options);
        assert_eq!(tokens, vec!["servic", "servic"]);
    }

    #[test]
    fn stop_words_filter_before_stemming() {
        let mut options = TokenizeOptions::default().with_stemming();
        options.stop_words = Some(["the".to_string(), "was".to_string()].into_iter().collect());
        let tokens = tokenize("The manager was late", &options);
        assert_eq!(tokens, vec!["manag", "late"]);
    }

    #[test]
    fn stemmer_matches_classic_vectors() {
        let cases = [
            ("caresses", "caress"),
            ("ponies", "poni"),
            ("ties", "ti"),
            ("caress", "caress"),
            ("cats", "cat"),
            ("feed", "feed"),
            ("agreed", "agre"),
            ("plastered", "plaster"),
            ("motoring", "motor"),
            ("sing", "sing"),
            ("hopping", "hop"),
            ("falling", "fall"),
            ("filing", "file"),
            ("happy", "happi"),
            ("sky", "sky"),
            ("relational", "relat"),
            ("conditional", "condit"),
            ("vietnamization", "vietnam"),
            ("triplicate", "triplic"),
            ("formative", "form"),
            ("adoption", "adopt"),
            ("adjustment", "adjust"),
            ("controller", "control"),
            ("probate", "probat"),
            ("cease", "ceas"),
        ];
        for (input, expected) in cases {
            assert_eq!(porter_stem(input), expected, "stem of {input}");
        }
    }

    #[test]
    fn stemmer_reproduces_feedback_corpus_tokens() {
        let cases = [
            ("service", "servic"),
            ("delivery", "deliveri"),
            ("manager", "manag"),
            ("already", "alreadi"),
            ("because", "becaus"),
            ("payment", "payment"),
            ("cashier", "cashier"),
            ("redeem", "redeem"),
            ("offline", "offlin"),
            ("online", "onlin"),
            ("transaction", "transact"),
            ("quality", "qualiti"),
            ("immediately", "immedi"),
            ("late", "late"),
        ];
        for (input, expected) in cases {
            assert_eq!(porter_stem(input), expected, "stem of {input}");
        }
    }

    #[test]
    fn tokenization_is_deterministic() {
        let options = TokenizeOptions::default().with_stemming().with_default_stop_words();
        let text = "Deliveries were late, the manager apologized; refunds arriving immediately!";
        assert_eq!(tokenize(text, &options), tokenize(text, &options));
    }
}
