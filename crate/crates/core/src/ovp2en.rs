//! OVP to English: a complete sentence is encoded as an English-only
//! structured sentence and handed to a chat model for rendering.

use serde::{Deserialize, Serialize};

use crate::english::{self, Agreement, Tense, VerbHead};
use crate::grammar::{Clause, GrammarError, SentenceSelections, Stem, SubjectPart};
use crate::lexicon::{Lexeme, Lexicon, Plurality, Proximity, TenseTag};
use crate::llm::{ChatBackend, LlmError, PromptTemplate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartOfSpeech {
    Subject,
    Object,
    Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Number {
    Singular,
    Plural,
}

/// One role of a structured sentence. Nouns carry `positional`, verbs carry
/// `tense`. A noun object marked plural by its pronoun prefix carries
/// `number`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredPart {
    pub part_of_speech: PartOfSpeech,
    pub word: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positional: Option<Proximity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tense: Option<Tense>,
    /// Future spoken as `going to` rather than `will`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub going_to: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number: Option<Number>,
}

impl StructuredPart {
    fn new(part_of_speech: PartOfSpeech, word: impl Into<String>) -> Self {
        StructuredPart {
            part_of_speech,
            word: word.into(),
            positional: None,
            tense: None,
            going_to: false,
            number: None,
        }
    }
}

/// The English-only interlingua: subject, optional object, verb, in that
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredSentence {
    pub parts: Vec<StructuredPart>,
}

/// How the tense label of a verb appears in the rendering prompt.
pub fn tense_label(tense: Tense, going_to: bool) -> &'static str {
    match tense {
        Tense::PresentContinuous => "present continuous (-ing)",
        Tense::PastContinuous => "past continuous (was -ing)",
        Tense::Future if going_to => "future (going to)",
        Tense::Future => "future (will)",
        Tense::Past => "past",
        Tense::Present => "present",
        Tense::PresentPerfect => "present perfect",
    }
}

/// Inverse of [`tense_label`]; also accepts bare snake_case labels.
pub fn parse_tense_label(label: &str) -> Option<(Tense, bool)> {
    let label = label.trim();
    if label == "future (going to)" {
        return Some((Tense::Future, true));
    }
    let head = label.split(" (").next().unwrap_or(label);
    Tense::parse_label(head).map(|t| (t, false))
}

#[derive(Serialize, Deserialize)]
struct PromptPart {
    part_of_speech: PartOfSpeech,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positional: Option<Proximity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    number: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tense: Option<String>,
    word: String,
}

impl StructuredSentence {
    pub fn part(&self, pos: PartOfSpeech) -> Option<&StructuredPart> {
        self.parts.iter().find(|p| p.part_of_speech == pos)
    }

    pub fn subject(&self) -> Option<&StructuredPart> {
        self.part(PartOfSpeech::Subject)
    }

    pub fn verb(&self) -> Option<&StructuredPart> {
        self.part(PartOfSpeech::Verb)
    }

    pub fn object(&self) -> Option<&StructuredPart> {
        self.part(PartOfSpeech::Object)
    }

    /// Checks the shape: one subject, one verb, at most one object, tense on
    /// the verb only.
    pub fn check(&self) -> Result<(), String> {
        let count = |pos| self.parts.iter().filter(|p| p.part_of_speech == pos).count();
        if count(PartOfSpeech::Subject) != 1 || count(PartOfSpeech::Verb) != 1 {
            return Err("exactly one subject and one verb are required".into());
        }
        if count(PartOfSpeech::Object) > 1 {
            return Err("at most one object is allowed".into());
        }
        for p in &self.parts {
            if p.word.trim().is_empty() {
                return Err(format!("{:?} has an empty word", p.part_of_speech));
            }
            if p.tense.is_some() != (p.part_of_speech == PartOfSpeech::Verb) {
                return Err("tense belongs on the verb and only the verb".into());
            }
        }
        Ok(())
    }

    /// The user message sent to the rendering template.
    pub fn to_prompt(&self) -> String {
        let parts: Vec<PromptPart> = self
            .parts
            .iter()
            .map(|p| PromptPart {
                part_of_speech: p.part_of_speech,
                positional: p.positional,
                number: p.number,
                tense: p.tense.map(|t| tense_label(t, p.going_to).to_string()),
                word: p.word.clone(),
            })
            .collect();
        serde_json::to_string(&parts).expect("prompt parts serialize")
    }

    /// Parses a rendering prompt back into a structured sentence.
    pub fn from_prompt(text: &str) -> Result<StructuredSentence, String> {
        let parts: Vec<PromptPart> = crate::llm::parse_records(text)?;
        let parts = parts
            .into_iter()
            .map(|p| {
                let (tense, going_to) = match p.tense.as_deref() {
                    Some(label) => {
                        let (t, g) = parse_tense_label(label).ok_or_else(|| format!("unknown tense `{label}`"))?;
                        (Some(t), g)
                    }
                    None => (None, false),
                };
                Ok(StructuredPart {
                    part_of_speech: p.part_of_speech,
                    word: p.word,
                    positional: p.positional,
                    tense,
                    going_to,
                    number: p.number,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(StructuredSentence { parts })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncodeOptions {
    /// Render `-ti` as past continuous (`was eating`) instead of present
    /// continuous. The suffix covers both.
    pub ti_as_past_continuous: bool,
}

/// English tense for a tense suffix, and whether a future is `going to`.
pub fn tense_of(tag: TenseTag, options: EncodeOptions) -> (Tense, bool) {
    match tag {
        TenseTag::Past => (Tense::Past, false),
        TenseTag::Present => (Tense::Present, false),
        TenseTag::PresentContinuous if options.ti_as_past_continuous => (Tense::PastContinuous, false),
        TenseTag::PresentContinuous => (Tense::PresentContinuous, false),
        TenseTag::Future => (Tense::Future, false),
        TenseTag::FutureGoingTo => (Tense::Future, true),
        TenseTag::PresentPerfect => (Tense::PresentPerfect, false),
    }
}

/// The gloss of a subject pronoun, qualified with its proximity when another
/// pronoun shares the gloss (`he/she/it (distal)`).
fn pronoun_word(lexicon: &Lexicon, pronoun: &Lexeme) -> String {
    let shared = lexicon
        .by_category(pronoun.category)
        .any(|other| other.id != pronoun.id && !other.is_variant() && other.gloss == pronoun.gloss);
    match (shared, pronoun.proximity) {
        (true, Some(p)) => format!("{} ({})", pronoun.gloss, p.as_str()),
        _ => pronoun.gloss.clone(),
    }
}

fn stem_word(stem: &Stem<'_>) -> String {
    match stem {
        Stem::Lexeme(lx) => lx.gloss.clone(),
        Stem::Placeholder(_) => stem.surface(),
    }
}

/// Encodes a resolved clause. Placeholders keep their bracketed lemma.
pub fn encode_clause(lexicon: &Lexicon, clause: &Clause<'_>, options: EncodeOptions) -> StructuredSentence {
    let mut parts = Vec::with_capacity(3);
    parts.push(match &clause.subject {
        SubjectPart::Noun { stem, suffix } => StructuredPart {
            positional: suffix.proximity,
            ..StructuredPart::new(PartOfSpeech::Subject, stem_word(stem))
        },
        SubjectPart::Pronoun(p) => StructuredPart::new(PartOfSpeech::Subject, pronoun_word(lexicon, p)),
    });
    match (&clause.object, clause.object_pronoun) {
        (Some(obj), prefix) => {
            let plural = prefix.and_then(|p| p.plurality) == Some(Plurality::Plural);
            parts.push(StructuredPart {
                positional: obj.suffix.proximity,
                number: plural.then_some(Number::Plural),
                ..StructuredPart::new(PartOfSpeech::Object, stem_word(&obj.stem))
            });
        }
        (None, Some(prefix)) => parts.push(StructuredPart::new(PartOfSpeech::Object, prefix.gloss.clone())),
        (None, None) => {}
    }
    let tag = clause.tense.tense.expect("tense suffixes carry a tense tag");
    let (tense, going_to) = tense_of(tag, options);
    parts.push(StructuredPart {
        tense: Some(tense),
        going_to,
        ..StructuredPart::new(PartOfSpeech::Verb, stem_word(&clause.verb))
    });
    StructuredSentence { parts }
}

/// Encodes complete selections.
pub fn encode(
    lexicon: &Lexicon,
    selections: &SentenceSelections,
    options: EncodeOptions,
) -> Result<StructuredSentence, GrammarError> {
    let clause = Clause::from_selections(lexicon, selections)?;
    Ok(encode_clause(lexicon, &clause, options))
}

/// Removes placeholder brackets and parenthetical qualifiers and keeps the
/// first slash alternative: `he/she/it (distal)` → `he`, `[wash]` → `wash`.
pub fn plain_word(word: &str) -> String {
    let first = word.split('/').next().unwrap_or(word);
    let mut out = String::new();
    let mut depth = 0usize;
    for c in first.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '[' | ']' => {}
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out.split([',']).next().unwrap_or("").split_whitespace().collect::<Vec<_>>().join(" ")
}

fn demonstrative(p: Proximity, plural: bool) -> &'static str {
    match (p, plural) {
        (Proximity::Proximal, false) => "this",
        (Proximity::Proximal, true) => "these",
        (Proximity::Distal, false) => "that",
        (Proximity::Distal, true) => "those",
    }
}

/// A fixed English frame for a structured sentence:
/// `This/That <subject> <verb> <this/that object>.`
///
/// Used by the offline mock backend; pronouns take their first gloss
/// alternative (`he/she/it` → `he`).
pub fn template_english(structured: &StructuredSentence) -> Result<String, String> {
    structured.check()?;
    let subject = structured.subject().expect("checked");
    let verb = structured.verb().expect("checked");
    let (subject_np, agr) = match subject.positional {
        Some(p) => {
            let noun = plain_word(&subject.word);
            let plural = english::is_plural_noun(&noun);
            let agr = if plural { Agreement::Plural } else { Agreement::ThirdSingular };
            (format!("{} {noun}", demonstrative(p, plural)), agr)
        }
        None => {
            let pronoun = plain_word(&subject.word);
            let agr = english::agreement_of(&pronoun);
            (pronoun, agr)
        }
    };
    let lemma = plain_word(&verb.word);
    let mut words = vec![
        subject_np,
        english::verb_phrase(VerbHead::Lemma(&lemma), verb.tense.expect("checked"), verb.going_to, agr),
    ];
    if let Some(object) = structured.object() {
        let noun = plain_word(&object.word);
        words.push(match object.positional {
            Some(p) => {
                let plural = object.number == Some(Number::Plural);
                let noun = if plural { english::pluralize(&noun) } else { noun };
                format!("{} {noun}", demonstrative(p, plural || english::is_plural_noun(&noun)))
            }
            None => noun,
        });
    }
    Ok(english::sentence(&words))
}

/// Asks the chat backend to turn a structured sentence into English.
pub async fn render_english(structured: &StructuredSentence, backend: &dyn ChatBackend) -> Result<String, LlmError> {
    structured.check().map_err(LlmError::InvalidRequest)?;
    let template = PromptTemplate::builtin(PromptTemplate::RENDER).expect("render template ships");
    let raw = backend.complete(&template.request(&structured.to_prompt())).await?;
    let text = raw.trim().lines().next().unwrap_or("").trim().trim_matches('"').to_string();
    if text.is_empty() {
        return Err(LlmError::Format {
            message: "empty rendering".into(),
            raw,
        });
    }
    Ok(text)
}

#[derive(Debug, thiserror::Error)]
pub enum Ovp2EnError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Llm(#[from] LlmError),
}

/// The three artifacts of one OVP to English translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvpTranslation {
    pub surface: String,
    pub structured: StructuredSentence,
    pub english: String,
}

pub async fn translate_ovp(
    lexicon: &Lexicon,
    selections: &SentenceSelections,
    backend: &dyn ChatBackend,
    options: EncodeOptions,
) -> Result<OvpTranslation, Ovp2EnError> {
    let clause = Clause::from_selections(lexicon, selections)?;
    let surface = clause.render(lexicon.word_order());
    let structured = encode_clause(lexicon, &clause, options);
    let english = render_english(&structured, backend).await?;
    Ok(OvpTranslation {
        surface,
        structured,
        english,
    })
}
