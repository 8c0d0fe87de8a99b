//! English to OVP: segment the input into simple sentences, map each onto
//! the vocabulary (English lemmas in brackets fill the gaps), render OVP, and
//! translate the result back to English.

use std::collections::HashMap;
use std::path::Path;

use futures::future::join_all;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::english::{self, Discourse, Mask, SimpleSentence, Tense};
use crate::grammar::{Clause, ObjectPart, SentenceSelections, Stem, SubjectPart};
use crate::lexicon::{nfc, Category, Lexeme, Lexicon, Proximity, TenseTag};
use crate::llm::{complete_structured, ChatBackend, FunctionSpec, LlmError, PromptTemplate};
use crate::ovp2en::{encode_clause, render_english, EncodeOptions, StructuredSentence};

#[derive(Debug, thiserror::Error)]
pub enum En2OvpError {
    #[error("input is empty")]
    EmptyInput,
    #[error("segmentation failed: {0}")]
    Segmentation(LlmError),
    #[error("unknown prompt template `{0}`")]
    UnknownTemplate(String),
    #[error("synonym table: {0}")]
    Synonyms(String),
}

/// User-editable map from English lemmas to lexicon glosses
/// (`hike = "walk"`), consulted when an exact gloss match fails.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Synonyms(HashMap<String, String>);

impl Synonyms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, lemma: &str, gloss: &str) {
        self.0.insert(key(lemma), gloss.trim().to_string());
    }

    pub fn get(&self, lemma: &str) -> Option<&str> {
        self.0.get(&key(lemma)).map(String::as_str)
    }

    pub fn from_toml_str(src: &str) -> Result<Self, En2OvpError> {
        let raw: HashMap<String, String> = toml::from_str(src).map_err(|e| En2OvpError::Synonyms(e.to_string()))?;
        let mut s = Synonyms::new();
        for (k, v) in raw {
            s.insert(&k, &v);
        }
        Ok(s)
    }

    pub fn from_path(path: &Path) -> Result<Self, En2OvpError> {
        let src = std::fs::read_to_string(path).map_err(|e| En2OvpError::Synonyms(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&src)
    }
}

fn key(lemma: &str) -> String {
    nfc(lemma.trim()).to_lowercase()
}

#[derive(Debug, Clone, Default)]
pub struct En2OvpOptions {
    /// Segmentation template: `segment` or `segment-topic`.
    pub template: Option<String>,
    pub synonyms: Synonyms,
    pub encode: EncodeOptions,
}

fn segment_function() -> FunctionSpec {
    let tenses: Vec<&str> = Tense::ALL.iter().map(|t| t.as_str()).collect();
    FunctionSpec {
        name: "record_simple_sentences".into(),
        description: "Record the simple subject-verb(-object) sentences.".into(),
        parameters: json!({
            "type": "object",
            "properties": {
                "sentences": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "subject": {"type": "string"},
                            "verb": {"type": "string"},
                            "verb_tense": {"type": "string", "enum": tenses},
                            "object": {"type": ["string", "null"]}
                        },
                        "required": ["subject", "verb", "verb_tense", "object"]
                    }
                }
            },
            "required": ["sentences"]
        }),
    }
}

/// Splits English text into simple sentences with the chat backend.
pub async fn segment(
    input: &str,
    backend: &dyn ChatBackend,
    template: Option<&str>,
) -> Result<Vec<SimpleSentence>, En2OvpError> {
    let input = input.trim();
    if input.is_empty() {
        return Err(En2OvpError::EmptyInput);
    }
    let name = template.unwrap_or(PromptTemplate::SEGMENT);
    let template = PromptTemplate::builtin(name).ok_or_else(|| En2OvpError::UnknownTemplate(name.to_string()))?;
    let request = template.request(input).with_function(segment_function());
    let simples: Vec<SimpleSentence> = complete_structured(backend, &request)
        .await
        .map_err(En2OvpError::Segmentation)?;
    let simples: Vec<SimpleSentence> = simples
        .into_iter()
        .map(|s| SimpleSentence {
            subject: s.subject.trim().to_string(),
            verb: s.verb.trim().to_string(),
            verb_tense: s.verb_tense,
            object: s.object.map(|o| o.trim().to_string()).filter(|o| !o.is_empty()),
        })
        .collect();
    if simples.iter().any(|s| s.subject.is_empty() || s.verb.is_empty()) {
        return Err(En2OvpError::Segmentation(LlmError::Format {
            message: "simple sentence with empty subject or verb".into(),
            raw: serde_json::to_string(&simples).unwrap_or_default(),
        }));
    }
    Ok(simples)
}

/// Tense suffix used for an English tense. Both continuous tenses use `-ti`.
pub fn tense_tag(tense: Tense) -> TenseTag {
    match tense {
        Tense::Past => TenseTag::Past,
        Tense::Present => TenseTag::Present,
        Tense::Future => TenseTag::Future,
        Tense::PastContinuous | Tense::PresentContinuous => TenseTag::PresentContinuous,
        Tense::PresentPerfect => TenseTag::PresentPerfect,
    }
}

/// A simple sentence resolved against the lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedSentence<'a> {
    pub clause: Clause<'a>,
    /// The verb exists in the lexicon only with the other transitivity and
    /// became a placeholder.
    pub transitivity_mismatch: bool,
    /// A transitive verb used without an object (`uhu sawa-ti`, "she is
    /// cooking"). Renders fine but is not a builder sentence.
    pub bare_transitive: bool,
}

impl MappedSentence<'_> {
    pub fn placeholders(&self) -> Vec<&str> {
        self.clause.placeholders()
    }

    pub fn is_fully_mapped(&self) -> bool {
        self.placeholders().is_empty()
    }
}

/// Splits a leading demonstrative or article off a noun phrase and reports
/// the proximity it implies.
fn strip_determiner(phrase: &str) -> (String, Proximity) {
    let p = phrase.trim();
    let lower = p.to_lowercase();
    for (det, prox) in [
        ("this ", Proximity::Proximal),
        ("these ", Proximity::Proximal),
        ("that ", Proximity::Distal),
        ("those ", Proximity::Distal),
        ("the ", Proximity::Distal),
        ("a ", Proximity::Distal),
        ("an ", Proximity::Distal),
    ] {
        if lower.starts_with(det) {
            return (p[det.len()..].trim().to_string(), prox);
        }
    }
    (p.to_string(), Proximity::Distal)
}

fn lookup<'a>(lexicon: &'a Lexicon, synonyms: &Synonyms, lemma: &str, categories: &[Category]) -> Option<&'a Lexeme> {
    lexicon
        .find_by_gloss(lemma, categories)
        .or_else(|| synonyms.get(lemma).and_then(|g| lexicon.find_by_gloss(g, categories)))
}

fn noun_stem<'a>(lexicon: &'a Lexicon, synonyms: &Synonyms, lemma: &str) -> Stem<'a> {
    lookup(lexicon, synonyms, lemma, &[Category::Noun])
        .or_else(|| lookup(lexicon, synonyms, &english::singularize(lemma), &[Category::Noun]))
        .map_or_else(|| Stem::placeholder(lemma), Stem::Lexeme)
}

fn object_pronoun_form(word: &str) -> Option<&'static str> {
    Some(match word.to_lowercase().as_str() {
        "me" | "i" => "me",
        "him" | "he" | "her" | "she" | "it" => "him",
        "them" | "they" => "them",
        "us" | "we" => "us",
        "you" => "you",
        _ => return None,
    })
}

fn verb_lexeme<'a>(lexicon: &'a Lexicon, synonyms: &Synonyms, lemma: &str, category: Category) -> Option<&'a Lexeme> {
    let cats = [category];
    let direct = lookup(lexicon, synonyms, lemma, &cats).or_else(|| {
        english::lemmatize_verb(lemma).and_then(|base| lookup(lexicon, synonyms, &base, &cats))
    });
    direct.or_else(|| {
        // `talk` with an object is `talk to`
        let prefix = format!("{} ", key(lemma));
        lexicon
            .offered(category)
            .find(|e| e.gloss_keys().iter().any(|k| k.starts_with(&prefix)))
    })
}

/// Resolves each role of `simple` against the lexicon. Lemmas without a
/// match become placeholders; nouns are distal unless introduced by
/// `this`/`these`.
pub fn map_vocab<'a>(lexicon: &'a Lexicon, simple: &SimpleSentence, synonyms: &Synonyms) -> MappedSentence<'a> {
    let (subject_word, subject_prox) = strip_determiner(&simple.subject);
    let subject = match lookup(lexicon, synonyms, &subject_word, &[Category::SubjectPronoun]) {
        Some(p) => SubjectPart::Pronoun(p),
        None => SubjectPart::Noun {
            stem: noun_stem(lexicon, synonyms, &subject_word),
            suffix: lexicon
                .suffix(Category::SubjectSuffix, subject_prox)
                .expect("lexicon has subject suffixes"),
        },
    };

    let has_object = simple.object.is_some();
    let (category, other) = if has_object {
        (Category::TransitiveVerb, Category::IntransitiveVerb)
    } else {
        (Category::IntransitiveVerb, Category::TransitiveVerb)
    };
    let mut verb_lx = verb_lexeme(lexicon, synonyms, &simple.verb, category);
    let mut bare_transitive = false;
    if verb_lx.is_none() && !has_object {
        verb_lx = verb_lexeme(lexicon, synonyms, &simple.verb, other);
        bare_transitive = verb_lx.is_some();
    }
    let transitivity_mismatch = verb_lx.is_none() && verb_lexeme(lexicon, synonyms, &simple.verb, other).is_some();
    let verb = verb_lx.map_or_else(|| Stem::placeholder(&simple.verb), Stem::Lexeme);

    let mut object = None;
    let mut object_pronoun = None;
    if let Some(obj) = &simple.object {
        let pronoun = object_pronoun_form(obj.trim())
            .and_then(|form| lookup(lexicon, synonyms, form, &[Category::ObjectPronounPrefix]));
        match pronoun {
            Some(prefix) => object_pronoun = Some(prefix),
            None => {
                let (word, prox) = strip_determiner(obj);
                object = Some(ObjectPart {
                    stem: noun_stem(lexicon, synonyms, &word),
                    suffix: lexicon
                        .suffix(Category::ObjectSuffix, prox)
                        .expect("lexicon has object suffixes"),
                });
                object_pronoun = lexicon
                    .offered(Category::ObjectPronounPrefix)
                    .find(|p| p.proximity == Some(prox) && p.plurality == Some(crate::lexicon::Plurality::Singular));
            }
        }
    }

    let tense = lexicon
        .tense_suffix(tense_tag(simple.verb_tense))
        .expect("lexicon has every tense suffix");
    MappedSentence {
        clause: Clause {
            subject,
            verb,
            tense,
            object,
            object_pronoun,
        },
        transitivity_mismatch,
        bare_transitive,
    }
}

/// OVP for a mapped sentence, in translator word order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Built {
    /// Complete selections when every role mapped onto a builder sentence.
    pub selections: Option<SentenceSelections>,
    pub surface: String,
    pub placeholders: Vec<String>,
}

pub fn build_ovp(mapped: &MappedSentence<'_>) -> Built {
    Built {
        selections: mapped.clause.selections().filter(|_| !mapped.bare_transitive),
        surface: mapped.clause.render(crate::lexicon::WordOrder::translator()),
        placeholders: mapped.placeholders().into_iter().map(String::from).collect(),
    }
}

/// The simple sentence in English with roles that have no OVP vocabulary
/// replaced by `[SUBJECT]`, `[VERB]` or `[OBJECT]`.
pub fn comparator(simple: &SimpleSentence, mapped: &MappedSentence<'_>, discourse: &mut Discourse) -> String {
    let is_placeholder = |s: &Stem<'_>| matches!(s, Stem::Placeholder(_));
    let mask = Mask {
        subject: matches!(&mapped.clause.subject, SubjectPart::Noun { stem, .. } if is_placeholder(stem)),
        verb: is_placeholder(&mapped.clause.verb),
        object: mapped.clause.object.as_ref().is_some_and(|o| is_placeholder(&o.stem)),
    };
    simple.render_masked(discourse, mask)
}

/// Encodes the built sentence and renders it back into English.
pub async fn backwards(
    lexicon: &Lexicon,
    mapped: &MappedSentence<'_>,
    backend: &dyn ChatBackend,
    options: EncodeOptions,
) -> Result<(StructuredSentence, String), LlmError> {
    let structured = encode_clause(lexicon, &mapped.clause, options);
    let english = render_english(&structured, backend).await?;
    Ok((structured, english))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub simple: f64,
    pub comparator: f64,
    pub backwards: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemError {
    pub index: usize,
    pub message: String,
}

/// Everything produced for one English input. The per-sentence lists are
/// index-aligned with `simples`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub input: String,
    pub simples: Vec<SimpleSentence>,
    /// `simples` rendered as English sentences.
    pub simple_english: Vec<String>,
    pub comparators: Vec<String>,
    pub ovp_surfaces: Vec<String>,
    /// `None` where rendering failed; see `errors`.
    pub backwards: Vec<Option<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<ItemError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<Scores>,
    pub model_name: String,
    pub timestamp: String,
}

impl TranslationRecord {
    /// Sentences joined with single spaces, as compared against the input.
    pub fn simple_text(&self) -> String {
        self.simple_english.join(" ")
    }

    pub fn comparator_text(&self) -> String {
        self.comparators.join(" ")
    }

    pub fn backwards_text(&self) -> String {
        self.backwards.iter().flatten().cloned().collect::<Vec<_>>().join(" ")
    }
}

/// Runs the whole English to OVP pipeline on `input`. Scores are left empty.
pub async fn translate_english(
    lexicon: &Lexicon,
    input: &str,
    backend: &dyn ChatBackend,
    options: &En2OvpOptions,
) -> Result<TranslationRecord, En2OvpError> {
    let simples = segment(input, backend, options.template.as_deref()).await?;
    let mapped: Vec<MappedSentence<'_>> = simples
        .iter()
        .map(|s| map_vocab(lexicon, s, &options.synonyms))
        .collect();

    let mut plain = Discourse::new();
    let simple_english = simples.iter().map(|s| s.render(&mut plain)).collect();
    let mut masked = Discourse::new();
    let comparators = simples
        .iter()
        .zip(&mapped)
        .map(|(s, m)| comparator(s, m, &mut masked))
        .collect();
    let ovp_surfaces = mapped.iter().map(|m| build_ovp(m).surface).collect();

    let rendered = join_all(mapped.iter().map(|m| backwards(lexicon, m, backend, options.encode))).await;
    let mut back = Vec::with_capacity(rendered.len());
    let mut errors = Vec::new();
    for (index, r) in rendered.into_iter().enumerate() {
        match r {
            Ok((_, english)) => back.push(Some(english)),
            Err(e) => {
                errors.push(ItemError {
                    index,
                    message: e.to_string(),
                });
                back.push(None);
            }
        }
    }

    Ok(TranslationRecord {
        input: input.trim().to_string(),
        simples,
        simple_english,
        comparators,
        ovp_surfaces,
        backwards: back,
        errors,
        scores: None,
        model_name: backend.model_name().to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::validate;
    use crate::llm::{MockChat, ScriptedChat};

    fn lex() -> &'static Lexicon {
        Lexicon::embedded()
    }

    fn simple(s: &str, v: &str, t: Tense, o: Option<&str>) -> SimpleSentence {
        SimpleSentence {
            subject: s.into(),
            verb: v.into(),
            verb_tense: t,
            object: o.map(Into::into),
        }
    }

    fn block<F: std::future::Future>(f: F) -> F::Output {
        tokio::runtime::Builder::new_current_thread().build().unwrap().block_on(f)
    }

    fn surface(s: &SimpleSentence) -> String {
        build_ovp(&map_vocab(lex(), s, &Synonyms::new())).surface
    }

    #[test]
    fn builds_worked_examples() {
        assert_eq!(surface(&simple("I", "swim", Tense::PresentContinuous, None)), "nüü pahabi-ti.");
        assert_eq!(surface(&simple("she", "cook", Tense::PresentContinuous, None)), "uhu sawa-ti.");
        assert_eq!(surface(&simple("bird", "migrate", Tense::Future, None)), "[migrate]-wei tsiipa-uu.");
        assert_eq!(
            surface(&simple("I", "wash", Tense::Past, Some("dish"))),
            "[dish]-noka nüü u-[wash]-ku."
        );
    }

    #[test]
    fn objects_and_determiners() {
        let m = map_vocab(lex(), &simple("this dog", "see", Tense::Past, Some("that horse")), &Synonyms::new());
        assert_eq!(build_ovp(&m).surface, "isha'pugu-ii pugu-noka u-buni-ku.");
        let built = build_ovp(&m);
        assert_eq!(validate(lex(), built.selections.as_ref().unwrap()), crate::Verdict::Complete);
        let m = map_vocab(lex(), &simple("dog", "see", Tense::Past, Some("me")), &Synonyms::new());
        assert_eq!(m.clause.object_pronoun.unwrap().id, "op.me");
        assert!(m.clause.object.is_none());
        let m = map_vocab(lex(), &simple("dog", "talk", Tense::Past, Some("cat")), &Synonyms::new());
        assert_eq!(m.clause.verb.lexeme().unwrap().id, "vt.talk_to");
    }

    #[test]
    fn transitive_verb_without_object_is_used_bare() {
        let m = map_vocab(lex(), &simple("she", "cook", Tense::PresentContinuous, None), &Synonyms::new());
        assert!(m.bare_transitive && m.is_fully_mapped());
        assert!(m.clause.object_pronoun.is_none());
        assert_eq!(build_ovp(&m).selections, None);
    }

    #[test]
    fn transitivity_mismatch_becomes_placeholder() {
        let m = map_vocab(lex(), &simple("dog", "sit", Tense::Past, Some("chair")), &Synonyms::new());
        assert!(m.transitivity_mismatch);
        assert_eq!(m.placeholders(), ["sit"]);
    }

    #[test]
    fn synonyms_are_consulted_after_exact_match() {
        let mut syn = Synonyms::new();
        syn.insert("hike", "walk");
        let m = map_vocab(lex(), &simple("I", "hike", Tense::Past, None), &syn);
        assert_eq!(m.clause.verb.lexeme().unwrap().id, "vi.walk");
        let parsed = Synonyms::from_toml_str("hike = \"walk\"\n").unwrap();
        assert_eq!(parsed, syn);
    }

    #[test]
    fn comparator_masks_unknown_roles() {
        let s = simple("bird", "migrate", Tense::Future, None);
        let m = map_vocab(lex(), &s, &Synonyms::new());
        assert_eq!(comparator(&s, &m, &mut Discourse::new()), "A bird will [VERB].");
        let s = simple("woman", "wash", Tense::PresentContinuous, None);
        let m = map_vocab(lex(), &s, &Synonyms::new());
        assert_eq!(comparator(&s, &m, &mut Discourse::new()), "[SUBJECT] is [VERB]-ing.");
        let s = simple("dog", "eat", Tense::Present, Some("apple"));
        let m = map_vocab(lex(), &s, &Synonyms::new());
        assert_eq!(comparator(&s, &m, &mut Discourse::new()), s.render(&mut Discourse::new()));
    }

    #[test]
    fn end_to_end_with_mock() {
        let r = block(translate_english(lex(), "I am swimming.", &MockChat, &En2OvpOptions::default())).unwrap();
        assert_eq!(r.ovp_surfaces, ["nüü pahabi-ti."]);
        assert_eq!(r.simple_english, ["I am swimming."]);
        assert_eq!(r.comparators, ["I am swimming."]);
        assert_eq!(r.backwards, [Some("I am swimming.".to_string())]);

        let r = block(translate_english(lex(), "Birds will migrate and return.", &MockChat, &En2OvpOptions::default()))
            .unwrap();
        assert_eq!(r.ovp_surfaces, ["[migrate]-wei tsiipa-uu.", "[return]-wei tsiipa-uu."]);
        assert_eq!(r.backwards[0].as_deref(), Some("That bird will migrate."));
        assert_eq!(r.comparators, ["A bird will [VERB].", "The bird will [VERB]."]);
    }

    #[test]
    fn per_item_failures_are_recorded() {
        let chat = ScriptedChat::new([
            Ok(r#"[{"subject":"I","verb":"swim","verb_tense":"present"},{"subject":"I","verb":"run","verb_tense":"past"}]"#.to_string()),
            Ok("I swim.".to_string()),
            Err(LlmError::Backend { status: 500, body: "boom".into() }),
        ]);
        let r = block(translate_english(lex(), "I swim and ran.", &chat, &En2OvpOptions::default())).unwrap();
        assert_eq!(r.backwards.len(), 2);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].index, 1);
    }

    #[test]
    fn empty_input_and_bad_segmentation() {
        assert!(matches!(
            block(segment("  ", &MockChat, None)),
            Err(En2OvpError::EmptyInput)
        ));
        let chat = ScriptedChat::replying(["", ""]);
        assert!(matches!(
            block(segment("x", &chat, None)),
            Err(En2OvpError::Segmentation(_))
        ));
    }

    #[test]
    fn record_serializes_to_one_line() {
        let r = block(translate_english(lex(), "We are playing and laughing.", &MockChat, &En2OvpOptions::default()))
            .unwrap();
        let line = serde_json::to_string(&r).unwrap();
        assert!(!line.contains('\n'));
        let back: TranslationRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
