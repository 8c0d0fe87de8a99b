//! Vocabulary entries and the lexicon file format.
//!
//! A lexicon is a TOML document with a `version`, a `[word_order]` table and
//! one `[[entry]]` table per lexeme. All strings are NFC-normalized on load so
//! that comparisons against user input never depend on how `ü` or `w̃` were
//! typed.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

const EMBEDDED_LEXICON: &str = include_str!("../data/lexicon.toml");

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("reading lexicon: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing lexicon: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("duplicate lexeme id `{0}`")]
    DuplicateId(String),
    #[error("lexicon has no entry of category {0}")]
    MissingCategory(Category),
    #[error("lexeme `{id}`: {reason}")]
    InvalidEntry { id: String, reason: String },
    #[error("unknown lexeme id `{0}`")]
    UnknownId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    TransitiveVerb,
    IntransitiveVerb,
    Noun,
    SubjectPronoun,
    ObjectPronounPrefix,
    SubjectSuffix,
    ObjectSuffix,
    TenseSuffix,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::TransitiveVerb,
        Category::IntransitiveVerb,
        Category::Noun,
        Category::SubjectPronoun,
        Category::ObjectPronounPrefix,
        Category::SubjectSuffix,
        Category::ObjectSuffix,
        Category::TenseSuffix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::TransitiveVerb => "transitive-verb",
            Category::IntransitiveVerb => "intransitive-verb",
            Category::Noun => "noun",
            Category::SubjectPronoun => "subject-pronoun",
            Category::ObjectPronounPrefix => "object-pronoun-prefix",
            Category::SubjectSuffix => "subject-suffix",
            Category::ObjectSuffix => "object-suffix",
            Category::TenseSuffix => "tense-suffix",
        }
    }

    pub fn is_verb(self) -> bool {
        matches!(self, Category::TransitiveVerb | Category::IntransitiveVerb)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether a referent is near (proximal) or far from (distal) the speaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Proximity {
    Proximal,
    Distal,
}

impl Proximity {
    pub fn as_str(self) -> &'static str {
        match self {
            Proximity::Proximal => "proximal",
            Proximity::Distal => "distal",
        }
    }

    pub fn flip(self) -> Proximity {
        match self {
            Proximity::Proximal => Proximity::Distal,
            Proximity::Distal => Proximity::Proximal,
        }
    }
}

impl fmt::Display for Proximity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plurality {
    Singular,
    Plural,
    Dual,
}

impl Plurality {
    pub fn as_str(self) -> &'static str {
        match self {
            Plurality::Singular => "singular",
            Plurality::Plural => "plural",
            Plurality::Dual => "dual",
        }
    }
}

/// The tense/aspect carried by one tense suffix. There is exactly one tag per
/// suffix; `Future` and `FutureGoingTo` share the English future tense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TenseTag {
    Past,
    Present,
    PresentContinuous,
    Future,
    FutureGoingTo,
    PresentPerfect,
}

impl TenseTag {
    pub const ALL: [TenseTag; 6] = [
        TenseTag::Past,
        TenseTag::Present,
        TenseTag::PresentContinuous,
        TenseTag::Future,
        TenseTag::FutureGoingTo,
        TenseTag::PresentPerfect,
    ];
}

/// One vocabulary entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexeme {
    pub id: String,
    /// OVP stem or affix, without hyphens at the edges.
    pub surface: String,
    /// English lemma or description. Slash-separated alternatives and a
    /// trailing parenthetical qualifier are allowed (`he/she/it`,
    /// `we (exclusive)`).
    pub gloss: String,
    pub category: Category,
    /// Stem used after an object-pronoun prefix (verbs only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lenited_surface: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plurality: Option<Plurality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proximity: Option<Proximity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tense: Option<TenseTag>,
    /// Marks an alternative spelling of another entry. Variants render like
    /// any other lexeme but are never offered by the sentence builder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_of: Option<String>,
    /// Forces (`true`) or suppresses (`false`) the `n` of `-(n)eika`/`-(n)oka`
    /// for this noun instead of deciding from the stem's final segment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_suffix_n: Option<bool>,
}

impl Lexeme {
    pub fn is_noun(&self) -> bool {
        self.category == Category::Noun
    }

    pub fn is_pronoun(&self) -> bool {
        self.category == Category::SubjectPronoun
    }

    pub fn is_transitive(&self) -> bool {
        self.category == Category::TransitiveVerb
    }

    pub fn is_intransitive(&self) -> bool {
        self.category == Category::IntransitiveVerb
    }

    pub fn is_variant(&self) -> bool {
        self.variant_of.is_some()
    }

    /// English keys this entry answers to: the gloss with any parenthetical
    /// removed, split on `/` and `,`, lowercased.
    ///
    /// `"us (dual), you and I"` yields `["us", "you and i"]`.
    pub fn gloss_keys(&self) -> Vec<String> {
        let mut stripped = String::with_capacity(self.gloss.len());
        let mut depth = 0usize;
        for c in self.gloss.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                _ if depth == 0 => stripped.push(c),
                _ => {}
            }
        }
        stripped
            .split(['/', ','])
            .map(|s| s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase())
            .filter(|s| !s.is_empty())
            .collect()
    }

    /// The first gloss alternative, as it would appear in an English sentence.
    pub fn display_gloss(&self) -> String {
        match self.gloss_keys().first() {
            Some(k) => k
                .split(' ')
                .map(|w| if w == "i" { "I" } else { w })
                .collect::<Vec<_>>()
                .join(" "),
            None => self.gloss.clone(),
        }
    }
}

/// Where the subject goes relative to the verb complex in sentences without a
/// noun object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    BeforeVerb,
    AfterVerb,
}

/// Constituent-order policy.
///
/// Sentences with a noun object always come out as
/// `[noun subject] object [pronoun subject] verb`; only sentences without a
/// noun object consult this policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordOrder {
    pub noun_subject_without_object: Placement,
    pub pronoun_subject_without_object: Placement,
}

impl WordOrder {
    /// Order produced by the interactive sentence builder:
    /// `tabuutsi'-uu tübinohi-ku`, `tünia-ku nüü`.
    pub const fn builder() -> Self {
        WordOrder {
            noun_subject_without_object: Placement::BeforeVerb,
            pronoun_subject_without_object: Placement::AfterVerb,
        }
    }

    /// Order produced by the English-to-OVP translator:
    /// `[migrate]-wei tsiipa-uu`, `nüü pahabi-ti`.
    pub const fn translator() -> Self {
        WordOrder {
            noun_subject_without_object: Placement::AfterVerb,
            pronoun_subject_without_object: Placement::BeforeVerb,
        }
    }
}

impl Default for WordOrder {
    fn default() -> Self {
        WordOrder::builder()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    version: String,
    #[serde(default)]
    word_order: Option<WordOrder>,
    #[serde(rename = "entry")]
    entries: Vec<Lexeme>,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    version: String,
    word_order: WordOrder,
    entries: Vec<Lexeme>,
    index: HashMap<String, usize>,
}

pub(crate) fn nfc(s: &str) -> String {
    s.nfc().collect()
}

impl Lexicon {
    /// The vocabulary shipped with this crate.
    pub fn embedded() -> &'static Lexicon {
        static LEXICON: OnceLock<Lexicon> = OnceLock::new();
        LEXICON.get_or_init(|| {
            Lexicon::from_toml_str(EMBEDDED_LEXICON).expect("embedded lexicon is valid")
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
        let text = std::fs::read_to_string(path)?;
        Lexicon::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Lexicon, LexiconError> {
        let file: LexiconFile = toml::from_str(text)?;
        let entries = file
            .entries
            .into_iter()
            .map(|mut e| {
                e.surface = nfc(&e.surface);
                e.gloss = nfc(&e.gloss);
                e.lenited_surface = e.lenited_surface.as_deref().map(nfc);
                e
            })
            .collect();
        Lexicon::new(file.version, file.word_order.unwrap_or_default(), entries)
    }

    pub fn new(
        version: String,
        word_order: WordOrder,
        entries: Vec<Lexeme>,
    ) -> Result<Lexicon, LexiconError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(LexiconError::DuplicateId(e.id.clone()));
            }
        }
        let lexicon = Lexicon {
            version,
            word_order,
            entries,
            index,
        };
        lexicon.check()?;
        Ok(lexicon)
    }

    fn check(&self) -> Result<(), LexiconError> {
        let invalid = |e: &Lexeme, reason: &str| LexiconError::InvalidEntry {
            id: e.id.clone(),
            reason: reason.to_string(),
        };
        for e in &self.entries {
            if e.surface.is_empty() || e.gloss.is_empty() {
                return Err(invalid(e, "surface and gloss must be non-empty"));
            }
            if e.lenited_surface.is_some() && !e.category.is_verb() {
                return Err(invalid(e, "only verbs carry a lenited surface"));
            }
            match e.category {
                Category::SubjectSuffix | Category::ObjectSuffix if e.proximity.is_none() => {
                    return Err(invalid(e, "suffixes must declare a proximity"));
                }
                Category::Noun if e.proximity.is_some() => {
                    return Err(invalid(e, "nouns carry no proximity"));
                }
                Category::TenseSuffix if e.tense.is_none() => {
                    return Err(invalid(e, "tense suffixes must declare a tense"));
                }
                _ => {}
            }
            if e.tense.is_some() && e.category != Category::TenseSuffix {
                return Err(invalid(e, "only tense suffixes declare a tense"));
            }
            if e.object_suffix_n.is_some() && !e.is_noun() {
                return Err(invalid(e, "object_suffix_n applies to nouns only"));
            }
            if let Some(base) = &e.variant_of {
                match self.get(base) {
                    Some(b) if b.category == e.category && !b.is_variant() => {}
                    _ => return Err(invalid(e, "variant_of must name a canonical entry of the same category")),
                }
            }
        }
        for cat in Category::ALL {
            if !self.entries.iter().any(|e| e.category == cat) {
                return Err(LexiconError::MissingCategory(cat));
            }
        }
        for prox in [Proximity::Proximal, Proximity::Distal] {
            for cat in [Category::SubjectSuffix, Category::ObjectSuffix] {
                if self.suffix(cat, prox).is_none() {
                    return Err(LexiconError::InvalidEntry {
                        id: cat.to_string(),
                        reason: format!("no {prox} suffix"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn word_order(&self) -> WordOrder {
        self.word_order
    }

    pub fn entries(&self) -> &[Lexeme] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Lexeme> {
        self.index.get(id).map(|&i| &self.entries[i])
    }

    pub fn lookup(&self, id: &str) -> Result<&Lexeme, LexiconError> {
        self.get(id).ok_or_else(|| LexiconError::UnknownId(id.to_string()))
    }

    pub fn by_category(&self, category: Category) -> impl Iterator<Item = &Lexeme> {
        self.entries.iter().filter(move |e| e.category == category)
    }

    /// Entries of `category` that the builder offers (variants excluded).
    pub fn offered(&self, category: Category) -> impl Iterator<Item = &Lexeme> {
        self.by_category(category).filter(|e| !e.is_variant())
    }

    /// The subject or object suffix with the given proximity.
    pub fn suffix(&self, category: Category, proximity: Proximity) -> Option<&Lexeme> {
        self.by_category(category)
            .find(|e| e.proximity == Some(proximity) && !e.is_variant())
    }

    pub fn tense_suffix(&self, tag: TenseTag) -> Option<&Lexeme> {
        self.by_category(Category::TenseSuffix)
            .find(|e| e.tense == Some(tag) && !e.is_variant())
    }

    /// First canonical entry among `categories` whose gloss answers to
    /// `lemma` (case-insensitive, NFC). Categories are searched in the order
    /// given, and entries in lexicon order.
    pub fn find_by_gloss(&self, lemma: &str, categories: &[Category]) -> Option<&Lexeme> {
        let key = nfc(lemma.trim()).to_lowercase();
        if key.is_empty() {
            return None;
        }
        categories.iter().find_map(|&cat| {
            self.offered(cat)
                .find(|e| e.gloss_keys().contains(&key))
        })
    }
}
