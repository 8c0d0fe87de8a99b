//! English morphology and sentence rendering: verb inflection, noun number,
//! articles, and a rule-based splitter into simple sentences.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

mod parse;
mod words;

pub use parse::split_simple;

/// English tense/aspect of a simple sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tense {
    Past,
    Present,
    Future,
    PastContinuous,
    PresentContinuous,
    PresentPerfect,
}

impl Tense {
    pub const ALL: [Tense; 6] = [
        Tense::Past,
        Tense::Present,
        Tense::Future,
        Tense::PastContinuous,
        Tense::PresentContinuous,
        Tense::PresentPerfect,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tense::Past => "past",
            Tense::Present => "present",
            Tense::Future => "future",
            Tense::PastContinuous => "past_continuous",
            Tense::PresentContinuous => "present_continuous",
            Tense::PresentPerfect => "present_perfect",
        }
    }

    /// Parses the snake_case label, also accepting spaces or hyphens.
    pub fn parse_label(s: &str) -> Option<Tense> {
        let key: String = s
            .trim()
            .to_lowercase()
            .chars()
            .map(|c| if c == ' ' || c == '-' { '_' } else { c })
            .collect();
        Tense::ALL.into_iter().find(|t| t.as_str() == key)
    }
}

impl fmt::Display for Tense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One subject-verb(-object) sentence with English lemmas.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleSentence {
    pub subject: String,
    pub verb: String,
    pub verb_tense: Tense,
    #[serde(default)]
    pub object: Option<String>,
}

/// Roles replaced by `[SUBJECT]`, `[VERB]` and `[OBJECT]` when rendering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Mask {
    pub subject: bool,
    pub verb: bool,
    pub object: bool,
}

impl SimpleSentence {
    /// Plain English rendering, e.g. `A bird will migrate.`
    pub fn render(&self, discourse: &mut Discourse) -> String {
        self.render_masked(discourse, Mask::default())
    }

    /// Rendering with masked roles replaced by role tokens; inflection is
    /// kept around the verb token (`is [VERB]-ing`).
    pub fn render_masked(&self, discourse: &mut Discourse, mask: Mask) -> String {
        let agr = agreement_of(&self.subject);
        let subject = discourse.noun_phrase(&self.subject);
        let subject = if mask.subject { "[SUBJECT]".to_string() } else { subject };
        let head = if mask.verb {
            VerbHead::Token("[VERB]")
        } else {
            VerbHead::Lemma(&self.verb)
        };
        let mut words = vec![subject, verb_phrase(head, self.verb_tense, false, agr)];
        if let Some(object) = &self.object {
            let np = discourse.noun_phrase(object);
            words.push(if mask.object { "[OBJECT]".to_string() } else { np });
        }
        sentence(&words)
    }
}

/// Person and number of a subject, as far as verb agreement cares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    FirstSingular,
    ThirdSingular,
    /// Plural subjects and `you`.
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerbForm {
    Base,
    ThirdSingular,
    Past,
    PastParticiple,
    PresentParticiple,
}

/// What fills the verb position: a real lemma, or an opaque token such as
/// `[VERB]` that is inflected by hyphenated endings (`[VERB]-ing`).
#[derive(Debug, Clone, Copy)]
pub enum VerbHead<'a> {
    Lemma(&'a str),
    Token(&'a str),
}

const SUBJECT_PRONOUNS: &[&str] = &["i", "you", "he", "she", "it", "we", "they", "this", "these", "that", "those"];
const OBJECT_PRONOUNS: &[&str] = &["me", "you", "him", "her", "it", "us", "them"];

pub fn is_pronoun(word: &str) -> bool {
    let w = word.to_lowercase();
    SUBJECT_PRONOUNS.contains(&w.as_str()) || OBJECT_PRONOUNS.contains(&w.as_str()) || w == "you and i"
}

/// Agreement class of a subject given as an English word or phrase.
pub fn agreement_of(subject: &str) -> Agreement {
    match subject.trim().to_lowercase().as_str() {
        "i" => Agreement::FirstSingular,
        "you" | "we" | "they" | "these" | "those" | "you and i" | "you all" => Agreement::Plural,
        _ => Agreement::ThirdSingular,
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn vowel_groups(w: &str) -> usize {
    let mut groups = 0;
    let mut prev = false;
    for (i, c) in w.chars().enumerate() {
        let v = is_vowel(c) || (c == 'y' && i > 0);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    groups
}

/// One-syllable consonant-vowel-consonant stems double their final consonant
/// before `-ed`/`-ing` (`stop` → `stopped`).
fn doubles_final(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    let n = c.len();
    n >= 3
        && vowel_groups(w) == 1
        && !is_vowel(c[n - 1])
        && !matches!(c[n - 1], 'w' | 'x' | 'y')
        && is_vowel(c[n - 2])
        && !is_vowel(c[n - 3])
}

fn ends_consonant_y(w: &str) -> bool {
    let mut it = w.chars().rev();
    matches!((it.next(), it.next()), (Some('y'), Some(p)) if !is_vowel(p))
}

fn inflect_word(verb: &str, form: VerbForm) -> String {
    if let Some(irr) = words::irregular(verb) {
        match form {
            VerbForm::Past => return irr.past.to_string(),
            VerbForm::PastParticiple => return irr.participle.to_string(),
            _ => {}
        }
    }
    match (verb, form) {
        ("be", VerbForm::ThirdSingular) => return "is".into(),
        ("have", VerbForm::ThirdSingular) => return "has".into(),
        _ => {}
    }
    match form {
        VerbForm::Base => verb.to_string(),
        VerbForm::ThirdSingular => {
            if ["s", "x", "z", "ch", "sh", "o"].iter().any(|s| verb.ends_with(s)) {
                format!("{verb}es")
            } else if ends_consonant_y(verb) {
                format!("{}ies", &verb[..verb.len() - 1])
            } else {
                format!("{verb}s")
            }
        }
        VerbForm::Past | VerbForm::PastParticiple => {
            if verb.ends_with('e') {
                format!("{verb}d")
            } else if ends_consonant_y(verb) {
                format!("{}ied", &verb[..verb.len() - 1])
            } else if doubles_final(verb) {
                format!("{verb}{}ed", verb.chars().last().unwrap())
            } else {
                format!("{verb}ed")
            }
        }
        VerbForm::PresentParticiple => {
            if let Some(stem) = verb.strip_suffix("ie") {
                format!("{stem}ying")
            } else if verb.len() > 2
                && verb.ends_with('e')
                && !["ee", "ye", "oe"].iter().any(|s| verb.ends_with(s))
                && verb != "be"
            {
                format!("{}ing", &verb[..verb.len() - 1])
            } else if doubles_final(verb) {
                format!("{verb}{}ing", verb.chars().last().unwrap())
            } else {
                format!("{verb}ing")
            }
        }
    }
}

/// Inflects a verb lemma. In multiword lemmas (`talk to`, `lie down`) only
/// the first word changes.
pub fn inflect(lemma: &str, form: VerbForm) -> String {
    let lemma = lemma.trim();
    match lemma.split_once(' ') {
        Some((head, rest)) => format!("{} {rest}", inflect_word(head, form)),
        None => inflect_word(lemma, form),
    }
}

fn head_form(head: VerbHead<'_>, form: VerbForm) -> String {
    match head {
        VerbHead::Lemma(l) => inflect(l, form),
        VerbHead::Token(t) => match form {
            VerbForm::Base => t.to_string(),
            VerbForm::ThirdSingular => format!("{t}-s"),
            VerbForm::Past | VerbForm::PastParticiple => format!("{t}-ed"),
            VerbForm::PresentParticiple => format!("{t}-ing"),
        },
    }
}

fn be_present(agr: Agreement) -> &'static str {
    match agr {
        Agreement::FirstSingular => "am",
        Agreement::ThirdSingular => "is",
        Agreement::Plural => "are",
    }
}

fn be_past(agr: Agreement) -> &'static str {
    match agr {
        Agreement::Plural => "were",
        _ => "was",
    }
}

/// The verb phrase for `head` in `tense`; `going_to` selects `is going to`
/// over `will` in the future.
pub fn verb_phrase(head: VerbHead<'_>, tense: Tense, going_to: bool, agr: Agreement) -> String {
    let is_be = matches!(head, VerbHead::Lemma("be"));
    match tense {
        Tense::Present if is_be => be_present(agr).to_string(),
        Tense::Past if is_be => be_past(agr).to_string(),
        Tense::Present => match agr {
            Agreement::ThirdSingular => head_form(head, VerbForm::ThirdSingular),
            _ => head_form(head, VerbForm::Base),
        },
        Tense::Past => head_form(head, VerbForm::Past),
        Tense::Future if going_to => {
            format!("{} going to {}", be_present(agr), head_form(head, VerbForm::Base))
        }
        Tense::Future => format!("will {}", head_form(head, VerbForm::Base)),
        Tense::PresentContinuous => {
            format!("{} {}", be_present(agr), head_form(head, VerbForm::PresentParticiple))
        }
        Tense::PastContinuous => format!("{} {}", be_past(agr), head_form(head, VerbForm::PresentParticiple)),
        Tense::PresentPerfect => {
            let aux = if agr == Agreement::ThirdSingular { "has" } else { "have" };
            format!("{aux} {}", head_form(head, VerbForm::PastParticiple))
        }
    }
}

fn pluralize_word(w: &str) -> String {
    if let Some(p) = words::irregular_plural(w) {
        return p.to_string();
    }
    if words::is_uncountable(w) || w.ends_with('s') && !w.ends_with("ss") {
        return w.to_string();
    }
    if let Some(p) = words::f_plural(w) {
        return p;
    }
    if ["ss", "x", "z", "ch", "sh"].iter().any(|s| w.ends_with(s)) {
        format!("{w}es")
    } else if ends_consonant_y(w) {
        format!("{}ies", &w[..w.len() - 1])
    } else {
        format!("{w}s")
    }
}

/// Plural of a noun lemma; in compounds only the last word changes.
pub fn pluralize(noun: &str) -> String {
    match noun.rsplit_once(' ') {
        Some((rest, last)) => format!("{rest} {}", pluralize_word(last)),
        None => pluralize_word(noun),
    }
}

/// Singular of a (possibly plural) noun.
pub fn singularize(noun: &str) -> String {
    let w = noun.to_lowercase();
    if let Some(s) = words::irregular_singular(&w) {
        return s.to_string();
    }
    if words::is_uncountable(&w) || words::is_plural_only(&w) {
        return w;
    }
    if let Some(s) = words::f_singular(&w) {
        return s;
    }
    if w.len() > 4 {
        if let Some(stem) = w.strip_suffix("ies") {
            return format!("{stem}y");
        }
        if let Some(stem) = w.strip_suffix("oes") {
            return format!("{stem}o");
        }
    }
    for end in ["sses", "xes", "zes", "ches", "shes"] {
        if w.ends_with(end) {
            return w[..w.len() - 2].to_string();
        }
    }
    if ["ss", "us", "is"].iter().any(|s| w.ends_with(s)) || w.len() <= 3 {
        return w;
    }
    w.strip_suffix('s').map(str::to_string).unwrap_or(w)
}

/// True for nouns that take plural agreement as written (`dogs`, `men`,
/// `pinenuts`).
pub fn is_plural_noun(noun: &str) -> bool {
    let w = noun.trim().to_lowercase();
    let last = w.rsplit(' ').next().unwrap_or(&w);
    words::is_plural_only(last) || singularize(last) != last
}

/// Base form of an inflected verb, or `None` if `word` is not a verb form
/// this module knows about.
pub fn lemmatize_verb(word: &str) -> Option<String> {
    let w = word.to_lowercase();
    if let Some(base) = words::irregular_base(&w) {
        return Some(base.to_string());
    }
    if words::is_verb(&w) {
        return Some(w);
    }
    let known = |s: &str| words::is_verb(s).then(|| s.to_string());
    let undouble = |s: &str| {
        let c: Vec<char> = s.chars().collect();
        let n = c.len();
        (n >= 2 && c[n - 1] == c[n - 2] && !matches!(c[n - 1], 'l' | 's' | 'z'))
            .then(|| c[..n - 1].iter().collect::<String>())
    };
    // One-letter stems only produce false hits (`bed`, `red`).
    let from_stem = |stem: &str| -> Option<String> {
        if stem.chars().count() < 2 {
            return None;
        }
        known(stem)
            .or_else(|| known(&format!("{stem}e")))
            .or_else(|| undouble(stem).and_then(|s| known(&s)))
    };
    if let Some(stem) = w.strip_suffix("ying") {
        if let Some(v) = known(&format!("{stem}ie")) {
            return Some(v);
        }
    }
    if let Some(stem) = w.strip_suffix("ing") {
        return from_stem(stem);
    }
    if let Some(stem) = w.strip_suffix("ied") {
        return known(&format!("{stem}y"));
    }
    if let Some(stem) = w.strip_suffix("ed") {
        return from_stem(stem);
    }
    if let Some(stem) = w.strip_suffix("ies") {
        return known(&format!("{stem}y")).or_else(|| known(&format!("{stem}ie")));
    }
    if let Some(stem) = w.strip_suffix("es") {
        if let Some(v) = known(stem) {
            return Some(v);
        }
    }
    if let Some(stem) = w.strip_suffix('s') {
        return known(stem);
    }
    None
}

pub fn indefinite_article(word: &str) -> &'static str {
    let w = word.to_lowercase();
    let an = match w.chars().next() {
        Some('a' | 'e' | 'i' | 'o') => true,
        Some('u') => !["uni", "use", "usu", "ute"].iter().any(|p| w.starts_with(p)),
        Some('h') => ["hour", "honest", "honor"].iter().any(|p| w.starts_with(p)),
        _ => false,
    };
    if an {
        "an"
    } else {
        "a"
    }
}

/// Tracks which nouns have been mentioned so that first mentions get an
/// indefinite article and later ones `the`.
#[derive(Debug, Default)]
pub struct Discourse {
    mentioned: HashSet<String>,
}

impl Discourse {
    pub fn new() -> Self {
        Self::default()
    }

    /// Noun phrase for a subject or object lemma. Pronouns are passed
    /// through; capitalized lemmas are treated as names and get no article.
    pub fn noun_phrase(&mut self, lemma: &str) -> String {
        let lemma = lemma.trim();
        if lemma.eq_ignore_ascii_case("i") {
            return "I".into();
        }
        if is_pronoun(lemma) {
            return lemma.to_lowercase();
        }
        if lemma.chars().next().is_some_and(char::is_uppercase) {
            return lemma.to_string();
        }
        let key = lemma.to_lowercase();
        if self.mentioned.insert(key) {
            format!("{} {lemma}", indefinite_article(lemma))
        } else {
            format!("the {lemma}")
        }
    }
}

/// Joins words into a sentence with an initial capital and a final period.
pub fn sentence(words: &[String]) -> String {
    let joined = words
        .iter()
        .map(|w| w.trim())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    let mut chars = joined.chars();
    let mut out = match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect::<String>(),
        None => String::new(),
    };
    if !out.ends_with(['.', '!', '?']) {
        out.push('.');
    }
    out
}
