//! Morphology, agreement and constituent order for OVP simple sentences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::{nfc, Category, Lexeme, Lexicon, LexiconError, Placement, Proximity, WordOrder};

#[derive(Debug, thiserror::Error)]
pub enum GrammarError {
    #[error("lexeme `{id}` is a {found}, expected {expected}")]
    Category {
        id: String,
        expected: &'static str,
        found: Category,
    },
    #[error("agreement: {0}")]
    Agreement(String),
    #[error("selections are not a complete sentence: {0}")]
    Validation(Verdict),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// The seven parts of speech a sentence is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Subject,
    SubjectSuffix,
    Verb,
    VerbTense,
    Object,
    ObjectSuffix,
    ObjectPronoun,
}

impl Slot {
    pub const ALL: [Slot; 7] = [
        Slot::Subject,
        Slot::SubjectSuffix,
        Slot::Verb,
        Slot::VerbTense,
        Slot::Object,
        Slot::ObjectSuffix,
        Slot::ObjectPronoun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Slot::Subject => "subject",
            Slot::SubjectSuffix => "subject_suffix",
            Slot::Verb => "verb",
            Slot::VerbTense => "verb_tense",
            Slot::Object => "object",
            Slot::ObjectSuffix => "object_suffix",
            Slot::ObjectPronoun => "object_pronoun",
        }
    }

    /// Lexeme categories that may fill this slot.
    pub fn categories(self) -> &'static [Category] {
        match self {
            Slot::Subject => &[Category::Noun, Category::SubjectPronoun],
            Slot::SubjectSuffix => &[Category::SubjectSuffix],
            Slot::Verb => &[Category::TransitiveVerb, Category::IntransitiveVerb],
            Slot::VerbTense => &[Category::TenseSuffix],
            Slot::Object => &[Category::Noun],
            Slot::ObjectSuffix => &[Category::ObjectSuffix],
            Slot::ObjectPronoun => &[Category::ObjectPronounPrefix],
        }
    }

    /// Slots whose validity depends on this one. Choosing a new value here
    /// clears any of them that stop fitting.
    pub fn downstream(self) -> &'static [Slot] {
        match self {
            Slot::Subject => &[Slot::SubjectSuffix],
            Slot::Verb => &[Slot::Object, Slot::ObjectSuffix, Slot::ObjectPronoun],
            _ => &[],
        }
    }

    pub fn is_core(self) -> bool {
        matches!(self, Slot::Subject | Slot::Verb | Slot::VerbTense)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Slot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Slot::ALL
            .into_iter()
            .find(|slot| slot.name() == s)
            .ok_or_else(|| format!("unknown slot `{s}`"))
    }
}

/// The builder state: one optional lexeme id per slot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentenceSelections {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject_suffix: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verb: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verb_tense: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_suffix: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_pronoun: Option<String>,
}

impl SentenceSelections {
    pub fn get(&self, slot: Slot) -> Option<&str> {
        self.field(slot).as_deref()
    }

    fn field(&self, slot: Slot) -> &Option<String> {
        match slot {
            Slot::Subject => &self.subject,
            Slot::SubjectSuffix => &self.subject_suffix,
            Slot::Verb => &self.verb,
            Slot::VerbTense => &self.verb_tense,
            Slot::Object => &self.object,
            Slot::ObjectSuffix => &self.object_suffix,
            Slot::ObjectPronoun => &self.object_pronoun,
        }
    }

    fn field_mut(&mut self, slot: Slot) -> &mut Option<String> {
        match slot {
            Slot::Subject => &mut self.subject,
            Slot::SubjectSuffix => &mut self.subject_suffix,
            Slot::Verb => &mut self.verb,
            Slot::VerbTense => &mut self.verb_tense,
            Slot::Object => &mut self.object,
            Slot::ObjectSuffix => &mut self.object_suffix,
            Slot::ObjectPronoun => &mut self.object_pronoun,
        }
    }

    pub fn set(&mut self, slot: Slot, id: Option<String>) {
        *self.field_mut(slot) = id;
    }

    pub fn with(mut self, slot: Slot, id: &str) -> Self {
        self.set(slot, Some(id.to_string()));
        self
    }

    pub fn is_set(&self, slot: Slot) -> bool {
        self.field(slot).is_some()
    }

    pub fn filled(&self) -> impl Iterator<Item = (Slot, &str)> {
        Slot::ALL
            .into_iter()
            .filter_map(|s| self.get(s).map(|id| (s, id)))
    }
}

/// A rule broken by a (possibly partial) set of selections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    UnknownLexeme { slot: Slot, id: String },
    WrongCategory { slot: Slot, id: String, category: Category },
    IntransitiveWithObject { slot: Slot },
    PronounSubjectWithSuffix,
    SuffixPronounDisagreement,
    PronounCannotAgreeWithNoun,
    MissingSubjectSuffix,
    MissingObjectPronoun,
    MissingObjectSuffix,
    MissingObject,
}

impl Violation {
    /// Slots involved in the violation that could be cleared to resolve it.
    pub fn slots(&self) -> Vec<Slot> {
        match self {
            Violation::UnknownLexeme { slot, .. }
            | Violation::WrongCategory { slot, .. }
            | Violation::IntransitiveWithObject { slot } => vec![*slot],
            Violation::PronounSubjectWithSuffix => vec![Slot::SubjectSuffix],
            Violation::SuffixPronounDisagreement => vec![Slot::ObjectSuffix, Slot::ObjectPronoun],
            Violation::PronounCannotAgreeWithNoun => vec![Slot::Object, Slot::ObjectPronoun],
            Violation::MissingSubjectSuffix => vec![Slot::SubjectSuffix],
            Violation::MissingObjectPronoun => vec![Slot::ObjectPronoun],
            Violation::MissingObjectSuffix => vec![Slot::ObjectSuffix],
            Violation::MissingObject => vec![Slot::Object],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownLexeme { slot, id } => write!(f, "{slot}: unknown lexeme `{id}`"),
            Violation::WrongCategory { slot, id, category } => {
                write!(f, "{slot}: `{id}` is a {category}")
            }
            Violation::IntransitiveWithObject { slot } => {
                write!(f, "intransitive verb takes no {}", slot.name().replace('_', " "))
            }
            Violation::PronounSubjectWithSuffix => f.write_str("pronoun subjects take no suffix"),
            Violation::SuffixPronounDisagreement => {
                f.write_str("object suffix and object pronoun disagree in proximity")
            }
            Violation::PronounCannotAgreeWithNoun => {
                f.write_str("object pronoun cannot refer to a noun object")
            }
            Violation::MissingSubjectSuffix => f.write_str("missing subject suffix"),
            Violation::MissingObjectPronoun => f.write_str("missing object pronoun"),
            Violation::MissingObjectSuffix => f.write_str("missing object suffix"),
            Violation::MissingObject => f.write_str("object suffix without an object"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "details", rename_all = "snake_case")]
pub enum Verdict {
    Complete,
    Incomplete(Vec<Slot>),
    Invalid(Vec<Violation>),
}

impl Verdict {
    pub fn is_complete(&self) -> bool {
        matches!(self, Verdict::Complete)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Complete => f.write_str("complete"),
            Verdict::Incomplete(slots) => {
                let names: Vec<_> = slots.iter().map(|s| s.name()).collect();
                write!(f, "incomplete (missing {})", names.join(", "))
            }
            Verdict::Invalid(v) => {
                let msgs: Vec<_> = v.iter().map(ToString::to_string).collect();
                write!(f, "invalid ({})", msgs.join("; "))
            }
        }
    }
}

struct Resolved<'a> {
    slots: [Option<&'a Lexeme>; 7],
}

impl<'a> Resolved<'a> {
    fn get(&self, slot: Slot) -> Option<&'a Lexeme> {
        self.slots[slot as usize]
    }
}

fn resolve<'a>(
    lexicon: &'a Lexicon,
    selections: &SentenceSelections,
    violations: &mut Vec<Violation>,
) -> Resolved<'a> {
    let mut slots = [None; 7];
    for (slot, id) in selections.filled() {
        match lexicon.get(id) {
            None => violations.push(Violation::UnknownLexeme {
                slot,
                id: id.to_string(),
            }),
            Some(lx) if !slot.categories().contains(&lx.category) => {
                violations.push(Violation::WrongCategory {
                    slot,
                    id: id.to_string(),
                    category: lx.category,
                })
            }
            Some(lx) => slots[slot as usize] = Some(lx),
        }
    }
    Resolved { slots }
}

/// Contradictions present in `selections`, ignoring anything merely missing.
pub fn conflicts(lexicon: &Lexicon, selections: &SentenceSelections) -> Vec<Violation> {
    let mut violations = Vec::new();
    let r = resolve(lexicon, selections, &mut violations);

    if r.get(Slot::Verb).is_some_and(Lexeme::is_intransitive) {
        for slot in [Slot::Object, Slot::ObjectSuffix, Slot::ObjectPronoun] {
            if selections.is_set(slot) {
                violations.push(Violation::IntransitiveWithObject { slot });
            }
        }
    }
    if r.get(Slot::Subject).is_some_and(Lexeme::is_pronoun) && selections.is_set(Slot::SubjectSuffix) {
        violations.push(Violation::PronounSubjectWithSuffix);
    }
    if let Some(prefix) = r.get(Slot::ObjectPronoun) {
        if let Some(suffix) = r.get(Slot::ObjectSuffix) {
            if !agreement_ok(suffix, prefix) {
                violations.push(Violation::SuffixPronounDisagreement);
            }
        } else if r.get(Slot::Object).is_some() && prefix.proximity.is_none() {
            violations.push(Violation::PronounCannotAgreeWithNoun);
        }
    }
    violations
}

/// Empty slots that must be filled before the selections form a sentence,
/// given what has been chosen so far.
pub fn missing_slots(lexicon: &Lexicon, selections: &SentenceSelections) -> Vec<Slot> {
    let mut ignored = Vec::new();
    let r = resolve(lexicon, selections, &mut ignored);
    let needs_object_pronoun = r.get(Slot::Verb).is_some_and(Lexeme::is_transitive)
        || selections.is_set(Slot::Object)
        || selections.is_set(Slot::ObjectSuffix);
    Slot::ALL
        .into_iter()
        .filter(|&slot| !selections.is_set(slot))
        .filter(|&slot| match slot {
            Slot::Subject | Slot::Verb | Slot::VerbTense => true,
            Slot::SubjectSuffix => r.get(Slot::Subject).is_some_and(Lexeme::is_noun),
            Slot::ObjectPronoun => needs_object_pronoun,
            Slot::ObjectSuffix => selections.is_set(Slot::Object),
            Slot::Object => selections.is_set(Slot::ObjectSuffix),
        })
        .collect()
}

/// Classifies `selections` as a complete sentence, an incomplete one (core
/// slots still empty) or an invalid one (contradictory choices, or a complete
/// core that lacks a mandatory affix).
pub fn validate(lexicon: &Lexicon, selections: &SentenceSelections) -> Verdict {
    let found = conflicts(lexicon, selections);
    if !found.is_empty() {
        return Verdict::Invalid(found);
    }
    let missing = missing_slots(lexicon, selections);
    if missing.is_empty() {
        Verdict::Complete
    } else if missing.iter().any(|s| s.is_core()) {
        Verdict::Incomplete(missing)
    } else {
        Verdict::Invalid(
            missing
                .into_iter()
                .map(|slot| match slot {
                    Slot::SubjectSuffix => Violation::MissingSubjectSuffix,
                    Slot::ObjectPronoun => Violation::MissingObjectPronoun,
                    Slot::ObjectSuffix => Violation::MissingObjectSuffix,
                    _ => Violation::MissingObject,
                })
                .collect(),
        )
    }
}

fn expect_category(lx: &Lexeme, expected: &[Category], name: &'static str) -> Result<(), GrammarError> {
    if expected.contains(&lx.category) {
        Ok(())
    } else {
        Err(GrammarError::Category {
            id: lx.id.clone(),
            expected: name,
            found: lx.category,
        })
    }
}

fn is_glottal(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02BC}')
}

/// Whether `-(n)eika`/`-(n)oka` surfaces with its `n` after `stem`.
fn object_suffix_takes_n(stem: &str, over: Option<bool>) -> bool {
    over.unwrap_or_else(|| !stem.chars().last().is_some_and(is_glottal))
}

fn suffix_surface(lexicon: &Lexicon, category: Category, proximity: Proximity) -> &str {
    // presence of both proximities is checked when the lexicon is loaded
    &lexicon
        .suffix(category, proximity)
        .expect("lexicon has both suffix proximities")
        .surface
}

pub fn attach_subject_suffix(
    lexicon: &Lexicon,
    noun: &Lexeme,
    proximity: Proximity,
) -> Result<String, GrammarError> {
    expect_category(noun, &[Category::Noun], "noun")?;
    Ok(format!(
        "{}-{}",
        noun.surface,
        suffix_surface(lexicon, Category::SubjectSuffix, proximity)
    ))
}

pub fn attach_object_suffix(
    lexicon: &Lexicon,
    noun: &Lexeme,
    proximity: Proximity,
) -> Result<String, GrammarError> {
    expect_category(noun, &[Category::Noun], "noun")?;
    let suffix = suffix_surface(lexicon, Category::ObjectSuffix, proximity);
    Ok(join_object_suffix(&noun.surface, suffix, noun.object_suffix_n))
}

fn join_object_suffix(stem: &str, suffix: &str, over: Option<bool>) -> String {
    if object_suffix_takes_n(stem, over) {
        format!("{stem}-n{suffix}")
    } else {
        format!("{stem}-{suffix}")
    }
}

/// The verb stem used after an object-pronoun prefix.
pub fn lenite(verb: &Lexeme) -> &str {
    verb.lenited_surface.as_deref().unwrap_or(&verb.surface)
}

pub fn compose_verb(
    verb: &Lexeme,
    object_pronoun: Option<&Lexeme>,
    tense: &Lexeme,
) -> Result<String, GrammarError> {
    expect_category(
        verb,
        &[Category::TransitiveVerb, Category::IntransitiveVerb],
        "verb",
    )?;
    expect_category(tense, &[Category::TenseSuffix], "tense suffix")?;
    match object_pronoun {
        Some(prefix) => {
            expect_category(prefix, &[Category::ObjectPronounPrefix], "object pronoun prefix")?;
            if !verb.is_transitive() {
                return Err(GrammarError::Agreement(format!(
                    "intransitive verb `{}` cannot take object pronoun `{}`",
                    verb.id, prefix.id
                )));
            }
            Ok(format!("{}-{}-{}", prefix.surface, lenite(verb), tense.surface))
        }
        None => Ok(format!("{}-{}", verb.surface, tense.surface)),
    }
}

/// True iff the object suffix and the object-pronoun prefix mark the same
/// proximity. Prefixes without proximity (first and second person) never
/// agree with a noun object.
pub fn agreement_ok(object_suffix: &Lexeme, object_pronoun: &Lexeme) -> bool {
    object_suffix.category == Category::ObjectSuffix
        && object_pronoun.category == Category::ObjectPronounPrefix
        && object_suffix.proximity.is_some()
        && object_suffix.proximity == object_pronoun.proximity
}

/// A noun, verb or object stem: either a lexeme or an English lemma standing
/// in for missing vocabulary, written `[lemma]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stem<'a> {
    Lexeme(&'a Lexeme),
    Placeholder(String),
}

impl<'a> Stem<'a> {
    pub fn placeholder(lemma: &str) -> Stem<'a> {
        Stem::Placeholder(nfc(lemma.trim()))
    }

    pub fn lexeme(&self) -> Option<&'a Lexeme> {
        match self {
            Stem::Lexeme(lx) => Some(lx),
            Stem::Placeholder(_) => None,
        }
    }

    pub fn surface(&self) -> String {
        match self {
            Stem::Lexeme(lx) => lx.surface.clone(),
            Stem::Placeholder(lemma) => format!("[{lemma}]"),
        }
    }

    fn lenited(&self) -> String {
        match self {
            Stem::Lexeme(lx) => lenite(lx).to_string(),
            Stem::Placeholder(lemma) => format!("[{lemma}]"),
        }
    }

    fn suffix_override(&self) -> Option<bool> {
        self.lexeme().and_then(|lx| lx.object_suffix_n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubjectPart<'a> {
    Noun { stem: Stem<'a>, suffix: &'a Lexeme },
    Pronoun(&'a Lexeme),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectPart<'a> {
    pub stem: Stem<'a>,
    pub suffix: &'a Lexeme,
}

/// A fully resolved sentence, ready to render.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause<'a> {
    pub subject: SubjectPart<'a>,
    pub verb: Stem<'a>,
    pub tense: &'a Lexeme,
    pub object: Option<ObjectPart<'a>>,
    pub object_pronoun: Option<&'a Lexeme>,
}

impl<'a> Clause<'a> {
    pub fn from_selections(
        lexicon: &'a Lexicon,
        selections: &SentenceSelections,
    ) -> Result<Clause<'a>, GrammarError> {
        let verdict = validate(lexicon, selections);
        if !verdict.is_complete() {
            return Err(GrammarError::Validation(verdict));
        }
        let get = |slot: Slot| selections.get(slot).map(|id| lexicon.lookup(id)).transpose();
        let subject = get(Slot::Subject)?.expect("complete");
        let subject = if subject.is_noun() {
            SubjectPart::Noun {
                stem: Stem::Lexeme(subject),
                suffix: get(Slot::SubjectSuffix)?.expect("complete"),
            }
        } else {
            SubjectPart::Pronoun(subject)
        };
        let object = match (get(Slot::Object)?, get(Slot::ObjectSuffix)?) {
            (Some(noun), Some(suffix)) => Some(ObjectPart {
                stem: Stem::Lexeme(noun),
                suffix,
            }),
            _ => None,
        };
        Ok(Clause {
            subject,
            verb: Stem::Lexeme(get(Slot::Verb)?.expect("complete")),
            tense: get(Slot::VerbTense)?.expect("complete"),
            object,
            object_pronoun: get(Slot::ObjectPronoun)?,
        })
    }

    /// The selections this clause was built from, or `None` if any stem is
    /// a placeholder.
    pub fn selections(&self) -> Option<SentenceSelections> {
        let mut sel = SentenceSelections::default();
        match &self.subject {
            SubjectPart::Noun { stem, suffix } => {
                sel.subject = Some(stem.lexeme()?.id.clone());
                sel.subject_suffix = Some(suffix.id.clone());
            }
            SubjectPart::Pronoun(p) => sel.subject = Some(p.id.clone()),
        }
        sel.verb = Some(self.verb.lexeme()?.id.clone());
        sel.verb_tense = Some(self.tense.id.clone());
        if let Some(obj) = &self.object {
            sel.object = Some(obj.stem.lexeme()?.id.clone());
            sel.object_suffix = Some(obj.suffix.id.clone());
        }
        sel.object_pronoun = self.object_pronoun.map(|p| p.id.clone());
        Some(sel)
    }

    /// English lemmas standing in for missing vocabulary, in sentence-role
    /// order (subject, verb, object).
    pub fn placeholders(&self) -> Vec<&str> {
        let subject = match &self.subject {
            SubjectPart::Noun { stem, .. } => Some(stem),
            SubjectPart::Pronoun(_) => None,
        };
        [subject, Some(&self.verb), self.object.as_ref().map(|o| &o.stem)]
            .into_iter()
            .flatten()
            .filter_map(|s| match s {
                Stem::Placeholder(lemma) => Some(lemma.as_str()),
                Stem::Lexeme(_) => None,
            })
            .collect()
    }

    fn verb_complex(&self) -> String {
        match self.object_pronoun {
            Some(prefix) => format!("{}-{}-{}", prefix.surface, self.verb.lenited(), self.tense.surface),
            None => format!("{}-{}", self.verb.surface(), self.tense.surface),
        }
    }

    fn subject_surface(&self) -> String {
        match &self.subject {
            SubjectPart::Noun { stem, suffix } => format!("{}-{}", stem.surface(), suffix.surface),
            SubjectPart::Pronoun(p) => p.surface.clone(),
        }
    }

    pub fn render(&self, order: WordOrder) -> String {
        let verb = self.verb_complex();
        let subject = self.subject_surface();
        let is_noun_subject = matches!(self.subject, SubjectPart::Noun { .. });
        let words = match &self.object {
            Some(obj) => {
                let object = join_object_suffix(&obj.stem.surface(), &obj.suffix.surface, obj.stem.suffix_override());
                if is_noun_subject {
                    [subject, object, verb]
                } else {
                    [object, subject, verb]
                }
                .to_vec()
            }
            None => {
                let placement = if is_noun_subject {
                    order.noun_subject_without_object
                } else {
                    order.pronoun_subject_without_object
                };
                match placement {
                    Placement::BeforeVerb => vec![subject, verb],
                    Placement::AfterVerb => vec![verb, subject],
                }
            }
        };
        nfc(&format!("{}.", words.join(" ")))
    }
}

/// Renders complete selections using the lexicon's configured word order.
pub fn render(lexicon: &Lexicon, selections: &SentenceSelections) -> Result<String, GrammarError> {
    render_with(lexicon, selections, lexicon.word_order())
}

pub fn render_with(
    lexicon: &Lexicon,
    selections: &SentenceSelections,
    order: WordOrder,
) -> Result<String, GrammarError> {
    Ok(Clause::from_selections(lexicon, selections)?.render(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> &'static Lexicon {
        Lexicon::embedded()
    }

    fn lx(id: &str) -> &'static Lexeme {
        lex().lookup(id).unwrap()
    }

    fn sel(pairs: &[(Slot, &str)]) -> SentenceSelections {
        pairs
            .iter()
            .fold(SentenceSelections::default(), |s, (slot, id)| s.with(*slot, id))
    }

    #[test]
    fn subject_suffixes() {
        let l = lex();
        assert_eq!(attach_subject_suffix(l, lx("n.cottontail"), Proximity::Distal).unwrap(), "tabuutsi'-uu");
        assert_eq!(attach_subject_suffix(l, lx("n.coyote"), Proximity::Proximal).unwrap(), "isha'-ii");
        assert_eq!(attach_subject_suffix(l, lx("n.wickiup"), Proximity::Distal).unwrap(), "toni-uu");
        assert!(matches!(
            attach_subject_suffix(l, lx("vt.see"), Proximity::Distal),
            Err(GrammarError::Category { .. })
        ));
    }

    #[test]
    fn object_suffixes_insert_n_after_vowels_only() {
        let l = lex();
        assert_eq!(attach_object_suffix(l, lx("n.fish"), Proximity::Distal).unwrap(), "pagwi-noka");
        assert_eq!(attach_object_suffix(l, lx("n.coyote"), Proximity::Distal).unwrap(), "isha'-oka");
        assert_eq!(attach_object_suffix(l, lx("n.pinenuts"), Proximity::Proximal).unwrap(), "tüba-neika");
        assert_eq!(attach_object_suffix(l, lx("n.apple"), Proximity::Proximal).unwrap(), "aaponu'-eika");
        assert!(attach_object_suffix(l, lx("sp.i"), Proximity::Distal).is_err());
    }

    #[test]
    fn object_suffix_override_wins() {
        let mut noun = lx("n.fish").clone();
        noun.object_suffix_n = Some(false);
        assert_eq!(attach_object_suffix(lex(), &noun, Proximity::Distal).unwrap(), "pagwi-oka");
    }

    #[test]
    fn lenition_uses_stored_stems() {
        assert_eq!(lenite(lx("vt.see")), "buni");
        assert_eq!(lenite(lx("vt.cook")), "zawa");
        assert_eq!(lenite(lx("vt.hear")), "naka");
        assert_eq!(lenite(lx("vt.find")), "dama'i");
    }

    #[test]
    fn verb_complexes() {
        assert_eq!(
            compose_verb(lx("vt.see"), Some(lx("op.him_distal")), lx("t.past")).unwrap(),
            "u-buni-ku"
        );
        assert_eq!(compose_verb(lx("vi.sneeze"), None, lx("t.future")).unwrap(), "kwisha'i-wei");
        assert_eq!(
            compose_verb(lx("vt.write"), Some(lx("op.them_proximal_mai")), lx("t.future_going_to")).unwrap(),
            "mai-w\u{303}ui-gaa-wei"
        );
        assert!(matches!(
            compose_verb(lx("vi.sit"), Some(lx("op.him_distal")), lx("t.past")),
            Err(GrammarError::Agreement(_))
        ));
        assert!(compose_verb(lx("vt.see"), None, lx("n.dog")).is_err());
    }

    #[test]
    fn agreement() {
        assert!(agreement_ok(lx("os.proximal"), lx("op.him_proximal_ma")));
        assert!(!agreement_ok(lx("os.distal"), lx("op.him_proximal_a")));
        assert!(agreement_ok(lx("os.distal"), lx("op.them_distal")));
        assert!(!agreement_ok(lx("os.distal"), lx("op.me")));
        assert!(!agreement_ok(lx("op.them_distal"), lx("os.distal")));
    }

    #[test]
    fn validate_examples() {
        let l = lex();
        let swim = sel(&[(Slot::Subject, "sp.i"), (Slot::Verb, "vi.swim"), (Slot::VerbTense, "t.present_continuous")]);
        assert_eq!(validate(l, &swim), Verdict::Complete);
        assert_eq!(
            validate(l, &SentenceSelections::default()),
            Verdict::Incomplete(vec![Slot::Subject, Slot::Verb, Slot::VerbTense])
        );
        let bare_noun = sel(&[(Slot::Subject, "n.coyote"), (Slot::Verb, "vi.sit"), (Slot::VerbTense, "t.present")]);
        assert_eq!(validate(l, &bare_noun), Verdict::Invalid(vec![Violation::MissingSubjectSuffix]));
    }

    #[test]
    fn validate_rejects_object_with_intransitive() {
        let s = sel(&[
            (Slot::Subject, "sp.i"),
            (Slot::Verb, "vi.sit"),
            (Slot::VerbTense, "t.present"),
            (Slot::Object, "n.horse"),
        ]);
        assert!(matches!(validate(lex(), &s), Verdict::Invalid(v)
            if v.contains(&Violation::IntransitiveWithObject { slot: Slot::Object })));
    }

    #[test]
    fn validate_reports_unknown_and_miscategorised_ids() {
        let s = sel(&[(Slot::Subject, "n.unicorn"), (Slot::Verb, "n.dog")]);
        match validate(lex(), &s) {
            Verdict::Invalid(v) => {
                assert!(matches!(v[0], Violation::UnknownLexeme { slot: Slot::Subject, .. }));
                assert!(matches!(v[1], Violation::WrongCategory { slot: Slot::Verb, .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transitive_without_pronoun_is_invalid() {
        let s = sel(&[(Slot::Subject, "sp.i"), (Slot::Verb, "vt.see"), (Slot::VerbTense, "t.past")]);
        assert_eq!(validate(lex(), &s), Verdict::Invalid(vec![Violation::MissingObjectPronoun]));
    }

    #[test]
    fn first_person_prefix_cannot_take_noun_object() {
        let s = sel(&[
            (Slot::Subject, "sp.you"),
            (Slot::Verb, "vt.see"),
            (Slot::VerbTense, "t.past"),
            (Slot::Object, "n.dog"),
            (Slot::ObjectSuffix, "os.distal"),
            (Slot::ObjectPronoun, "op.me"),
        ]);
        assert_eq!(validate(lex(), &s), Verdict::Invalid(vec![Violation::SuffixPronounDisagreement]));
    }

    #[test]
    fn render_examples() {
        let l = lex();
        let cottontail = sel(&[
            (Slot::Subject, "n.cottontail"),
            (Slot::SubjectSuffix, "ss.distal"),
            (Slot::Object, "n.pinenuts"),
            (Slot::ObjectSuffix, "os.distal"),
            (Slot::ObjectPronoun, "op.him_distal"),
            (Slot::Verb, "vt.see"),
            (Slot::VerbTense, "t.past"),
        ]);
        assert_eq!(render(l, &cottontail).unwrap(), "tabuutsi'-uu tüba-noka u-buni-ku.");
        let mosquito = sel(&[
            (Slot::Subject, "n.mosquito"),
            (Slot::SubjectSuffix, "ss.proximal"),
            (Slot::Object, "n.fish"),
            (Slot::ObjectSuffix, "os.distal"),
            (Slot::ObjectPronoun, "op.him_distal"),
            (Slot::Verb, "vt.cook"),
            (Slot::VerbTense, "t.present"),
        ]);
        assert_eq!(render(l, &mosquito).unwrap(), "wo'ada-ii pagwi-noka u-zawa-dü.");
        let swim = sel(&[(Slot::Subject, "sp.i"), (Slot::Verb, "vi.swim"), (Slot::VerbTense, "t.present_continuous")]);
        assert_eq!(render_with(l, &swim, WordOrder::translator()).unwrap(), "nüü pahabi-ti.");
        assert_eq!(render(l, &swim).unwrap(), "pahabi-ti nüü.");
    }

    #[test]
    fn render_requires_complete_selections() {
        let s = sel(&[(Slot::Subject, "sp.i")]);
        assert!(matches!(render(lex(), &s), Err(GrammarError::Validation(Verdict::Incomplete(_)))));
    }

    #[test]
    fn pronoun_subject_follows_noun_object() {
        let s = sel(&[
            (Slot::Subject, "sp.this"),
            (Slot::Object, "n.dog"),
            (Slot::ObjectSuffix, "os.proximal"),
            (Slot::ObjectPronoun, "op.them_proximal_mai"),
            (Slot::Verb, "vt.find"),
            (Slot::VerbTense, "t.past"),
        ]);
        assert_eq!(render(lex(), &s).unwrap(), "isha'pugu-neika ihi mai-dama'i-ku.");
    }

    #[test]
    fn placeholders_take_affixes_without_lenition() {
        let l = lex();
        let clause = Clause {
            subject: SubjectPart::Noun {
                stem: Stem::Lexeme(lx("n.bird")),
                suffix: lx("ss.distal"),
            },
            verb: Stem::placeholder("migrate"),
            tense: lx("t.future"),
            object: None,
            object_pronoun: None,
        };
        assert_eq!(clause.render(WordOrder::translator()), "[migrate]-wei tsiipa-uu.");
        let clause = Clause {
            subject: SubjectPart::Pronoun(lx("sp.i")),
            verb: Stem::placeholder("wash"),
            tense: lx("t.past"),
            object: Some(ObjectPart {
                stem: Stem::placeholder("dish"),
                suffix: l.suffix(Category::ObjectSuffix, Proximity::Distal).unwrap(),
            }),
            object_pronoun: Some(lx("op.him_distal")),
        };
        assert_eq!(clause.render(WordOrder::translator()), "[dish]-noka nüü u-[wash]-ku.");
    }

    #[test]
    fn slot_names_round_trip() {
        for slot in Slot::ALL {
            assert_eq!(slot.name().parse::<Slot>().unwrap(), slot);
        }
        assert!("adverb".parse::<Slot>().is_err());
    }
}
