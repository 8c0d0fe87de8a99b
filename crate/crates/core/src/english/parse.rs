//! Heuristic splitting of English text into subject-verb(-object) sentences.
//!
//! This is a shallow, dictionary-driven parser. It recognises auxiliary
//! chains, compound subjects and objects, shared-subject verb coordination,
//! reduced relatives (`two men walking their dogs`) and agentive passives,
//! and drops adjectives, adverbs and prepositional phrases.

use super::{lemmatize_verb, singularize, words, SimpleSentence, Tense};

const CLAUSE_BREAKS: &[&str] = &[
    ",", "and", "or", "but", "while", "when", "then", "because", "so", "after", "before", "as",
    "until", "although", "though", "if", "whereas", "whenever",
];
const COORDINATORS: &[&str] = &[",", "and", "or", "but"];

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "its", "our", "their",
    "some", "any", "every", "each", "no", "many", "much", "few", "several", "all", "both", "one",
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "another", "other",
    "'s", "her",
];

const PREPOSITIONS: &[&str] = &[
    "in", "on", "at", "to", "from", "with", "by", "for", "of", "into", "onto", "over", "under",
    "through", "during", "about", "around", "across", "against", "along", "among", "behind",
    "below", "beneath", "beside", "between", "beyond", "near", "off", "past", "since", "toward",
    "towards", "upon", "within", "without", "like", "inside", "outside", "up", "down", "out",
];

const ADVERBS: &[&str] = &[
    "yesterday", "today", "tomorrow", "tonight", "now", "here", "there", "always", "never",
    "often", "sometimes", "also", "very", "too", "well", "together", "again", "soon", "later",
    "already", "just", "still", "not", "first", "last", "next", "ever", "once", "twice", "away",
    "home", "fast", "hard", "outside", "inside", "south", "north", "east", "west", "upstream",
    "downstream", "back", "even", "really", "almost", "night", "morning", "week", "year",
];

const NOT_ADVERBS_LY: &[&str] = &["fly", "family", "lily", "belly", "jelly", "reply", "apply", "supply", "rally", "ally"];

const ADJECTIVES: &[&str] = &[
    "great", "good", "bad", "beautiful", "delicious", "tasty", "sour", "sweet", "red", "blue",
    "green", "white", "black", "broken", "dead", "heavy", "full", "open", "warm", "warmer",
    "cold", "hot", "big", "small", "little", "old", "new", "young", "happy", "sad", "quick",
    "slow", "bright", "dark", "late", "early", "migratory", "twinkling", "tall", "short", "long",
    "loud", "quiet", "pretty", "nice", "hungry", "tired", "angry", "whole", "entire", "favorite",
    "own", "best", "video", "parking", "night", "other",
];

const MEASURE_WORDS: &[&str] = &[
    "cup", "glass", "bowl", "piece", "slice", "bottle", "lot", "plate", "bag", "box", "kind",
    "pair", "bunch", "group", "loaf", "can", "jar",
];

const AUXILIARIES: &[&str] = &[
    "am", "is", "are", "was", "were", "be", "being", "been", "will", "shall", "has", "have", "had",
    "do", "does", "did", "can", "could", "would", "should", "may", "might", "must",
];

/// Two-word verbs whose particle is part of the lemma.
const PARTICLE_VERBS: &[&str] = &["lie down", "talk to", "listen to", "look at", "wait for", "pick up"];

const SUBJECT_FORMS: &[(&str, &str)] = &[
    ("me", "I"),
    ("i", "I"),
    ("him", "he"),
    ("her", "she"),
    ("us", "we"),
    ("them", "they"),
];
const OBJECT_FORMS: &[(&str, &str)] = &[
    ("i", "me"),
    ("he", "him"),
    ("she", "her"),
    ("we", "us"),
    ("they", "them"),
];
const PRONOUNS: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "someone",
    "everyone", "something", "nobody",
];

#[derive(Debug, Clone)]
struct Tok {
    text: String,
    lower: String,
    /// Index within the sentence.
    pos: usize,
}

fn is(list: &[&str], w: &str) -> bool {
    list.contains(&w)
}

fn is_adverb(w: &str) -> bool {
    is(ADVERBS, w) || (w.len() > 4 && w.ends_with("ly") && !is(NOT_ADVERBS_LY, w) && lemmatize_verb(w).is_none())
}

fn is_modifier(w: &str) -> bool {
    is(DETERMINERS, w) || is(ADJECTIVES, w) || w.chars().all(|c| c.is_ascii_digit())
}

fn expand_contractions(s: &str) -> String {
    let s = s.replace('\u{2019}', "'");
    let mut out = Vec::new();
    for word in s.split_whitespace() {
        let lower = word.to_lowercase();
        let expanded = match lower.trim_end_matches(['.', ',', '!', '?', ';']) {
            "can't" | "cannot" => Some("can not"),
            "won't" => Some("will not"),
            "i'm" => Some("I am"),
            "she's" => Some("she is"),
            "he's" => Some("he is"),
            "it's" => Some("it is"),
            "that's" => Some("that is"),
            "there's" => Some("there is"),
            _ => None,
        };
        if let Some(e) = expanded {
            let tail: String = word.chars().rev().take_while(|c| ".,!?;".contains(*c)).collect();
            out.push(format!("{e}{tail}"));
            continue;
        }
        let mut w = word.to_string();
        for (suffix, full) in [("n't", " not"), ("'ll", " will"), ("'re", " are"), ("'ve", " have"), ("'m", " am"), ("'d", " would"), ("'s", " 's")] {
            if let Some(idx) = w.to_lowercase().find(suffix) {
                w = format!("{}{}{}", &w[..idx], full, &w[idx + suffix.len()..]);
                break;
            }
        }
        out.push(w);
    }
    out.join(" ")
}

fn tokenize(sentence: &str) -> Vec<Tok> {
    let mut toks = Vec::new();
    for raw in expand_contractions(sentence).split_whitespace() {
        let trimmed = raw.trim_matches(|c: char| "\"()[]{}:".contains(c));
        let (word, comma) = match trimmed.strip_suffix(',') {
            Some(w) => (w, true),
            None => (trimmed, false),
        };
        let word = word.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'' && c != '-');
        if !word.is_empty() {
            toks.push(Tok {
                text: word.to_string(),
                lower: word.to_lowercase(),
                pos: toks.len(),
            });
        }
        if comma {
            toks.push(Tok {
                text: ",".into(),
                lower: ",".into(),
                pos: toks.len(),
            });
        }
    }
    toks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Base,
    ThirdSingular,
    Past,
    Participle,
    Ing,
}

fn form_of(word: &str, lemma: &str) -> Form {
    let irr = words::irregular(lemma);
    if word.ends_with("ing") && !lemma.ends_with("ing") {
        Form::Ing
    } else if word == lemma {
        Form::Base
    } else if irr.is_some_and(|i| i.past == word) {
        Form::Past
    } else if irr.is_some_and(|i| i.participle == word) {
        Form::Participle
    } else if word.ends_with("ed") {
        Form::Past
    } else {
        Form::ThirdSingular
    }
}

/// How a verb's tense is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TenseSpec {
    Fixed(Tense),
    /// Bare `-ing` form: continuous, in the time frame of the previous clause.
    Continuous,
    /// Base or present form that continues a coordinated verb phrase.
    Present { base_equals_past: bool, base: bool },
}

#[derive(Debug)]
struct VerbGroup {
    start: usize,
    /// Index just past the main verb (and any kept particle).
    end: usize,
    lemma: String,
    tense: TenseSpec,
    passive: bool,
}

fn verb_candidate(toks: &[Tok], j: usize, has_context: bool) -> bool {
    let w = &toks[j].lower;
    if is(PRONOUNS, w) || is(DETERMINERS, w) || lemmatize_verb(w).is_none() {
        return false;
    }
    if j > 0 && is_modifier(&toks[j - 1].lower) {
        return false;
    }
    if j == 0 && !has_context {
        if w.ends_with("ing") {
            return false;
        }
        if let Some(next) = toks.get(1) {
            if is(AUXILIARIES, &next.lower) || lemmatize_verb(&next.lower).is_some() && !is(PREPOSITIONS, &next.lower) && !is(DETERMINERS, &next.lower) {
                return false;
            }
        }
    }
    true
}

fn find_verb_group(toks: &[Tok], has_context: bool) -> Option<VerbGroup> {
    let n = toks.len();
    let start = (0..n).find(|&j| {
        let w = &toks[j].lower;
        (is(AUXILIARIES, w) && !(j > 0 && is_modifier(&toks[j - 1].lower)))
            || verb_candidate(toks, j, has_context)
    })?;
    let mut auxes: Vec<String> = Vec::new();
    let mut k = start;
    loop {
        while k < n && (toks[k].lower == "not" || is_adverb(&toks[k].lower) && k > start) {
            k += 1;
        }
        if k >= n {
            break;
        }
        let w = toks[k].lower.as_str();
        if is(AUXILIARIES, w) && k + 1 < n && !is(DETERMINERS, &toks[k + 1].lower) || is(AUXILIARIES, w) && k + 1 == n {
            auxes.push(w.to_string());
            k += 1;
            continue;
        }
        if w == "going"
            && toks.get(k + 1).is_some_and(|t| t.lower == "to")
            && toks.get(k + 2).is_some_and(|t| lemmatize_verb(&t.lower).as_deref() == Some(t.lower.as_str()))
            && auxes.iter().any(|a| is(&["am", "is", "are", "was", "were"], a))
        {
            auxes.push("going to".into());
            k += 2;
            continue;
        }
        break;
    }
    let main_is_verb = k < n && lemmatize_verb(&toks[k].lower).is_some() && !is(PRONOUNS, &toks[k].lower);
    let (main, lemma) = if main_is_verb {
        (k, lemmatize_verb(&toks[k].lower).unwrap())
    } else {
        let last = auxes.pop()?;
        if !is(&["am", "is", "are", "was", "were", "be", "been", "has", "have", "had", "do", "does", "did"], &last) {
            return None;
        }
        let lemma = lemmatize_verb(&last).unwrap_or(last);
        (k - 1, lemma)
    };
    let word = toks[main].lower.as_str();
    let form = if main_is_verb { form_of(word, &lemma) } else { Form::Base };
    let has = |set: &[&str]| auxes.iter().any(|a| set.contains(&a.as_str()));
    let be_present = has(&["am", "is", "are"]);
    let be_past = has(&["was", "were"]);
    let mut passive = false;
    let tense = if has(&["will", "shall", "going to"]) {
        TenseSpec::Fixed(Tense::Future)
    } else if has(&["has", "have"]) {
        TenseSpec::Fixed(Tense::PresentPerfect)
    } else if has(&["had", "did"]) {
        TenseSpec::Fixed(Tense::Past)
    } else if (be_present || be_past) && form == Form::Ing {
        TenseSpec::Fixed(if be_past { Tense::PastContinuous } else { Tense::PresentContinuous })
    } else if (be_present || be_past)
        && (matches!(form, Form::Past | Form::Participle)
            || form == Form::Base && words::irregular(&lemma).is_some_and(|i| i.participle == lemma))
    {
        passive = true;
        TenseSpec::Fixed(if be_past { Tense::Past } else { Tense::Present })
    } else if !auxes.is_empty() {
        TenseSpec::Fixed(if be_past { Tense::Past } else { Tense::Present })
    } else if !main_is_verb {
        // bare copula or possession
        TenseSpec::Fixed(if is(&["was", "were", "had", "did"], word) { Tense::Past } else { Tense::Present })
    } else {
        match form {
            Form::Past | Form::Participle => TenseSpec::Fixed(Tense::Past),
            Form::Ing => TenseSpec::Continuous,
            Form::ThirdSingular => TenseSpec::Present { base_equals_past: false, base: false },
            Form::Base => TenseSpec::Present {
                base_equals_past: words::irregular(&lemma).is_some_and(|i| i.past == lemma),
                base: true,
            },
        }
    };
    let mut end = main + 1;
    let mut lemma = lemma;
    if let Some(next) = toks.get(end) {
        let phrase = format!("{lemma} {}", next.lower);
        if is(PARTICLE_VERBS, &phrase) {
            lemma = phrase;
            end += 1;
        }
    }
    Some(VerbGroup {
        start,
        end,
        lemma,
        tense,
        passive,
    })
}

/// A noun phrase reduced to its head lemma.
fn noun_phrase(toks: &[Tok]) -> Option<String> {
    let content: Vec<&Tok> = toks
        .iter()
        .filter(|t| !is_adverb(&t.lower) && t.lower != ",")
        .collect();
    if let Some(p) = content.iter().find(|t| is(PRONOUNS, &t.lower)) {
        return Some(if p.lower == "i" { "I".into() } else { p.lower.clone() });
    }
    let head = content
        .iter()
        .rev()
        .find(|t| !is_modifier(&t.lower) && t.lower != "'s")
        .or_else(|| content.iter().rev().find(|t| is(ADJECTIVES, &t.lower)))?;
    let has_det = content.iter().any(|t| is(DETERMINERS, &t.lower));
    let capitalized = head.text.chars().next().is_some_and(char::is_uppercase);
    let singular = singularize(&head.lower);
    let name = capitalized && (head.pos > 0 || (!has_det && singular == head.lower));
    Some(if name { head.text.clone() } else { singular })
}

fn convert_pronoun(lemma: String, table: &[(&str, &str)]) -> String {
    let lower = lemma.to_lowercase();
    table
        .iter()
        .find(|(from, _)| *from == lower)
        .map(|(_, to)| to.to_string())
        .unwrap_or(lemma)
}

/// What follows the verb: the object, an optional passive agent, and the
/// start of a reduced relative clause modifying the object.
struct Rest {
    object: Option<String>,
    agent: Option<String>,
    relative: Option<usize>,
}

fn parse_rest(toks: &[Tok], from: usize, lemma: &str) -> Rest {
    let n = toks.len();
    let mut i = from;
    // a bare -ing right after the verb is a complement (`went hiking`)
    if i < n && toks[i].lower.ends_with("ing") && lemmatize_verb(&toks[i].lower).is_some() && lemma != "be" {
        i += 1;
    }
    let mut object_toks: Vec<Tok> = Vec::new();
    let mut agent = None;
    let mut relative = None;
    while i < n {
        let w = toks[i].lower.as_str();
        if w == "by" {
            agent = noun_phrase(&take_np(toks, i + 1));
            break;
        }
        if w == "of" && object_toks.last().is_some_and(|t| is(MEASURE_WORDS, &t.lower)) {
            object_toks.clear();
            i += 1;
            continue;
        }
        if is(PREPOSITIONS, w) || w == "," {
            break;
        }
        if w.ends_with("ing") && !object_toks.is_empty() && lemmatize_verb(w).is_some() {
            relative = Some(i);
            break;
        }
        if !object_toks.is_empty() && !is_modifier(&object_toks.last().unwrap().lower) && lemmatize_verb(w).is_some() && !is_modifier(w) {
            break;
        }
        object_toks.push(toks[i].clone());
        i += 1;
    }
    let object = noun_phrase(&object_toks).filter(|_| lemma != "be" || object_toks.iter().any(|t| is(DETERMINERS, &t.lower)));
    Rest { object, agent, relative }
}

fn take_np(toks: &[Tok], from: usize) -> Vec<Tok> {
    toks[from..]
        .iter()
        .take_while(|t| !is(PREPOSITIONS, &t.lower) && t.lower != ",")
        .cloned()
        .collect()
}

#[derive(Debug, Clone)]
struct Context {
    subjects: Vec<String>,
    tense: Tense,
    verb: String,
}

fn continuous_of(t: Tense) -> Tense {
    match t {
        Tense::Past | Tense::PastContinuous => Tense::PastContinuous,
        _ => Tense::PresentContinuous,
    }
}

fn resolve_tense(spec: TenseSpec, own_subject: Option<&str>, ctx: Option<&Context>) -> Tense {
    match spec {
        TenseSpec::Fixed(t) => t,
        TenseSpec::Continuous => ctx.map_or(Tense::PresentContinuous, |c| continuous_of(c.tense)),
        TenseSpec::Present { base, .. } if base && own_subject.is_none() && ctx.is_some() => ctx.unwrap().tense,
        TenseSpec::Present { base_equals_past, base } => {
            let third = own_subject.is_some_and(|s| super::agreement_of(s) == super::Agreement::ThirdSingular);
            if base && base_equals_past && third {
                Tense::Past
            } else {
                Tense::Present
            }
        }
    }
}

/// Parses one clause with a verb. Returns the context later coordinated
/// clauses inherit.
fn clause(
    toks: &[Tok],
    vg: VerbGroup,
    mut subjects: Vec<String>,
    ctx: Option<&Context>,
    out: &mut Vec<SimpleSentence>,
) -> Option<Context> {
    if let Some(s) = noun_phrase(&toks[..vg.start]) {
        subjects.push(s);
    }
    let own_subject = subjects.first().cloned();
    let tense = resolve_tense(vg.tense, own_subject.as_deref(), ctx);
    let mut rest = parse_rest(toks, vg.end, &vg.lemma);
    if subjects.is_empty() {
        match ctx {
            Some(c) => subjects = c.subjects.clone(),
            None => subjects.push(rest.object.take()?),
        }
    }
    let (subjects, object) = if vg.passive {
        let agent = rest.agent.take().unwrap_or_else(|| "someone".into());
        (vec![agent], subjects.first().cloned())
    } else {
        (subjects, rest.object.clone())
    };
    let subjects: Vec<String> = subjects.into_iter().map(|s| convert_pronoun(s, SUBJECT_FORMS)).collect();
    let object = object.map(|o| convert_pronoun(o, OBJECT_FORMS));
    for s in &subjects {
        out.push(SimpleSentence {
            subject: s.clone(),
            verb: vg.lemma.clone(),
            verb_tense: tense,
            object: object.clone(),
        });
    }
    let here = Context {
        subjects,
        tense,
        verb: vg.lemma.clone(),
    };
    if let (Some(start), Some(obj)) = (rest.relative, rest.object) {
        let rel = &toks[start..];
        if let Some(rvg) = find_verb_group(rel, true) {
            let rel_ctx = Context {
                subjects: vec![convert_pronoun(obj, SUBJECT_FORMS)],
                tense: continuous_of(tense),
                verb: String::new(),
            };
            return clause(rel, rvg, Vec::new(), Some(&rel_ctx), out).or(Some(here));
        }
    }
    Some(here)
}

fn split_pieces(toks: Vec<Tok>) -> Vec<(Option<String>, Vec<Tok>)> {
    let mut pieces = Vec::new();
    let mut conn = None;
    let mut cur = Vec::new();
    for t in toks {
        if is(CLAUSE_BREAKS, &t.lower) {
            if !cur.is_empty() {
                pieces.push((conn.take(), std::mem::take(&mut cur)));
            }
            // keep the strongest connector seen between two pieces
            if conn.as_deref().is_none_or(|c: &str| is(COORDINATORS, c)) {
                conn = Some(t.lower);
            }
        } else {
            cur.push(t);
        }
    }
    if !cur.is_empty() {
        pieces.push((conn, cur));
    }
    pieces
}

fn parse_sentence(text: &str, out: &mut Vec<SimpleSentence>) {
    let toks = tokenize(text);
    let pieces = split_pieces(toks);
    let has_verb: Vec<bool> = pieces
        .iter()
        .enumerate()
        .map(|(i, (_, p))| find_verb_group(p, i > 0).is_some())
        .collect();
    let mut pending: Vec<String> = Vec::new();
    let mut ctx: Option<Context> = None;
    for (i, (conn, piece)) in pieces.iter().enumerate() {
        let coordinated = conn.as_deref().is_none_or(|c| is(COORDINATORS, c));
        if has_verb[i] {
            let vg = find_verb_group(piece, ctx.is_some() || !pending.is_empty()).expect("checked above");
            let subjects = std::mem::take(&mut pending);
            if let Some(next) = clause(piece, vg, subjects, ctx.as_ref(), out) {
                ctx = Some(next);
            }
            continue;
        }
        let first = piece[0].lower.as_str();
        if is(PREPOSITIONS, first) || !coordinated || piece.iter().all(|t| is_adverb(&t.lower)) {
            continue;
        }
        let Some(np) = noun_phrase(piece) else { continue };
        let next_coordinated_verb = pieces
            .get(i + 1)
            .is_some_and(|(c, _)| c.as_deref().is_none_or(|c| is(COORDINATORS, c)))
            && has_verb.get(i + 1) == Some(&true);
        match &ctx {
            Some(c) if !next_coordinated_verb && !c.verb.is_empty() => {
                let object = convert_pronoun(np, OBJECT_FORMS);
                for s in &c.subjects {
                    out.push(SimpleSentence {
                        subject: s.clone(),
                        verb: c.verb.clone(),
                        verb_tense: c.tense,
                        object: Some(object.clone()),
                    });
                }
            }
            _ => pending.push(np),
        }
    }
}

/// Splits English text into simple sentences.
pub fn split_simple(text: &str) -> Vec<SimpleSentence> {
    let mut out = Vec::new();
    for sentence in text.split(['.', '!', '?', ';']) {
        if !sentence.trim().is_empty() {
            parse_sentence(sentence, &mut out);
        }
    }
    out
}
