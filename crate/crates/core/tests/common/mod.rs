//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::{Arc, Mutex};

use async_trait::async_trait;
use ovp_core::english::Tense;
use ovp_core::lexicon::Lexeme;
use ovp_core::llm::{ChatBackend, ChatRequest, LlmError, MockChat};
use ovp_core::ovp2en::{Number, StructuredSentence};
use ovp_core::{Category, Lexicon, Proximity, SentenceSelections, Slot, TenseTag};

pub fn block<F: std::future::Future>(f: F) -> F::Output {
    tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .unwrap()
        .block_on(f)
}

/// What a structured sentence says, recovered by gloss lookup alone.
#[derive(Debug)]
pub struct Decoded<'a> {
    pub subject: Vec<&'a Lexeme>,
    pub subject_proximity: Option<Proximity>,
    pub verb: Vec<&'a Lexeme>,
    pub tense: TenseTag,
    pub object: Vec<&'a Lexeme>,
    pub object_proximity: Option<Proximity>,
    pub object_pronoun: Vec<&'a Lexeme>,
}

fn split_qualifier(word: &str) -> (&str, Option<Proximity>) {
    for p in [Proximity::Proximal, Proximity::Distal] {
        if let Some(base) = word.strip_suffix(&format!(" ({})", p.as_str())) {
            return (base, Some(p));
        }
    }
    (word, None)
}

fn by_gloss<'a>(lex: &'a Lexicon, cats: &[Category], gloss: &str) -> Vec<&'a Lexeme> {
    lex.entries()
        .iter()
        .filter(|l| cats.contains(&l.category) && l.gloss == gloss)
        .collect()
}

pub fn decode<'a>(lex: &'a Lexicon, st: &StructuredSentence) -> Result<Decoded<'a>, String> {
    let [subj, rest @ ..] = st.parts.as_slice() else {
        return Err("no parts".into());
    };
    let (obj, verb) = match rest {
        [v] => (None, v),
        [o, v] => (Some(o), v),
        _ => return Err(format!("{} parts", st.parts.len())),
    };

    let (subject, subject_proximity) = match subj.positional {
        Some(p) => (by_gloss(lex, &[Category::Noun], &subj.word), Some(p)),
        None => {
            let (gloss, q) = split_qualifier(&subj.word);
            let mut c = by_gloss(lex, &[Category::SubjectPronoun], gloss);
            if let Some(q) = q {
                c.retain(|l| l.proximity == Some(q));
            }
            (c, None)
        }
    };

    let verb_cat = if obj.is_some() {
        Category::TransitiveVerb
    } else {
        Category::IntransitiveVerb
    };
    let verb_lx = by_gloss(lex, &[verb_cat], &verb.word);
    let tense = match (verb.tense.ok_or("verb without tense")?, verb.going_to) {
        (Tense::Past, false) => TenseTag::Past,
        (Tense::Present, false) => TenseTag::Present,
        (Tense::PresentContinuous | Tense::PastContinuous, false) => TenseTag::PresentContinuous,
        (Tense::Future, false) => TenseTag::Future,
        (Tense::Future, true) => TenseTag::FutureGoingTo,
        (Tense::PresentPerfect, false) => TenseTag::PresentPerfect,
        (t, g) => return Err(format!("impossible tense {t:?} going_to={g}")),
    };

    let (object, object_proximity, object_pronoun) = match obj {
        None => (vec![], None, vec![]),
        Some(o) => match o.positional {
            Some(p) => {
                let plural = o.number == Some(Number::Plural);
                let prefixes = lex
                    .entries()
                    .iter()
                    .filter(|l| {
                        l.category == Category::ObjectPronounPrefix
                            && l.proximity == Some(p)
                            && (l.plurality == Some(ovp_core::lexicon::Plurality::Plural)) == plural
                    })
                    .collect();
                (by_gloss(lex, &[Category::Noun], &o.word), Some(p), prefixes)
            }
            None => (vec![], None, by_gloss(lex, &[Category::ObjectPronounPrefix], &o.word)),
        },
    };
    Ok(Decoded {
        subject,
        subject_proximity,
        verb: verb_lx,
        tense,
        object,
        object_proximity,
        object_pronoun,
    })
}

/// Lexemes that differ at most in surface form (allomorphs and spelling
/// variants) carry the same meaning.
fn same_meaning(a: &Lexeme, b: &Lexeme) -> bool {
    a.category == b.category && a.gloss == b.gloss && a.proximity == b.proximity && a.plurality == b.plurality
}

fn check_slot(lex: &Lexicon, s: &SentenceSelections, slot: Slot, found: &[&Lexeme]) -> Result<(), String> {
    match s.get(slot) {
        None if found.is_empty() => Ok(()),
        None => Err(format!("{slot}: decoded {} lexemes from nothing", found.len())),
        Some(id) => {
            let original = lex.lookup(id).map_err(|e| e.to_string())?;
            if !found.iter().any(|l| l.id == original.id) {
                return Err(format!("{slot}: `{id}` not among decoded candidates"));
            }
            if let Some(other) = found.iter().find(|l| !same_meaning(l, original)) {
                return Err(format!("{slot}: `{id}` is ambiguous with `{}`", other.id));
            }
            Ok(())
        }
    }
}

fn suffix_proximity(lex: &Lexicon, s: &SentenceSelections, slot: Slot) -> Option<Proximity> {
    s.get(slot).and_then(|id| lex.lookup(id).ok()).and_then(|l| l.proximity)
}

/// Whether `encoded` determines every lexeme of `s` up to surface form, and
/// every proximity exactly.
pub fn check_lossless(lex: &Lexicon, s: &SentenceSelections, encoded: &StructuredSentence) -> Result<(), String> {
    let d = decode(lex, encoded)?;
    check_slot(lex, s, Slot::Subject, &d.subject)?;
    check_slot(lex, s, Slot::Verb, &d.verb)?;
    check_slot(lex, s, Slot::Object, &d.object)?;
    check_slot(lex, s, Slot::ObjectPronoun, &d.object_pronoun)?;
    if suffix_proximity(lex, s, Slot::SubjectSuffix) != d.subject_proximity {
        return Err("subject proximity lost".into());
    }
    if suffix_proximity(lex, s, Slot::ObjectSuffix) != d.object_proximity {
        return Err("object proximity lost".into());
    }
    let tense = lex.lookup(s.get(Slot::VerbTense).ok_or("no tense")?).map_err(|e| e.to_string())?;
    if tense.tense != Some(d.tense) {
        return Err(format!("tense {:?} decoded as {:?}", tense.tense, d.tense));
    }
    Ok(())
}

/// Extrapolated rank-biased overlap by direct summation over prefix sets.
pub fn rbo_oracle(a: &[usize], b: &[usize], p: f64) -> f64 {
    let (s, l) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (sn, ln) = (s.len(), l.len());
    let overlap = |d: usize| -> f64 {
        let x: HashSet<_> = s[..d.min(sn)].iter().collect();
        let y: HashSet<_> = l[..d.min(ln)].iter().collect();
        x.intersection(&y).count() as f64
    };
    let xs = overlap(sn);
    let xl = overlap(ln);
    let mut sum = 0.0;
    for d in 1..=ln {
        sum += overlap(d) / d as f64 * p.powi(d as i32);
    }
    for d in sn + 1..=ln {
        sum += xs * (d - sn) as f64 / (sn * d) as f64 * p.powi(d as i32);
    }
    (1.0 - p) / p * sum + ((xl - xs) / ln as f64 + xs / sn as f64) * p.powi(ln as i32)
}

/// Every ranking of length 1..=max_len over items 0..universe.
pub fn all_rankings(universe: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, universe: usize, max_len: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for x in 0..universe {
            if !prefix.contains(&x) {
                prefix.push(x);
                extend(prefix, universe, max_len, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), universe, max_len, &mut out);
    out
}

/// Lower-cased OVP stems of three or more letters, for leak scanning.
pub fn ovp_stems(lex: &Lexicon) -> HashSet<String> {
    lex.entries()
        .iter()
        .filter(|l| matches!(l.category, Category::Noun | Category::SubjectPronoun) || l.category.is_verb())
        .flat_map(|l| [Some(l.surface.clone()), l.lenited_surface.clone()])
        .flatten()
        .map(|s| s.to_lowercase())
        .filter(|s| s.chars().count() >= 3)
        .collect()
}

/// Words of `text` that are OVP stems.
pub fn ovp_words_in(text: &str, stems: &HashSet<String>) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !(c.is_alphabetic() || c == '\'' || c == '\u{0303}'))
        .filter(|w| stems.contains(*w))
        .map(str::to_string)
        .collect()
}

/// Mock chat that keeps every request it sees.
#[derive(Default, Clone)]
pub struct RecordingChat {
    pub seen: Arc<Mutex<Vec<ChatRequest>>>,
}

#[async_trait]
impl ChatBackend for RecordingChat {
    fn model_name(&self) -> &str {
        "recording-mock"
    }

    async fn complete(&self, request: &ChatRequest) -> Result<String, LlmError> {
        self.seen.lock().unwrap().push(request.clone());
        MockChat.complete(request).await
    }
}

/// The subject's gloss and the verb's lemma both appear in `english`,
/// inflected or not.
pub fn keywords_present(lex: &Lexicon, s: &SentenceSelections, english: &str) -> bool {
    use ovp_core::english::lemmatize_verb;
    use ovp_core::ovp2en::plain_word;
    let words: Vec<String> = english
        .to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect();
    let gloss = |slot| plain_word(&lex.lookup(s.get(slot).unwrap()).unwrap().gloss).to_lowercase();
    let subject = gloss(Slot::Subject);
    let subject_ok = subject.split(' ').all(|w| {
        words
            .iter()
            .any(|x| x == w || ovp_core::english::singularize(x) == w)
    });
    let verb = gloss(Slot::Verb);
    let head = verb.split(' ').next().unwrap_or_default().to_string();
    let verb_ok = words
        .iter()
        .any(|w| *w == head || lemmatize_verb(w).as_deref() == Some(head.as_str()));
    subject_ok && verb_ok
}
