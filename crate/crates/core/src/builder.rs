//! Incremental sentence building: which lexemes may fill each slot given the
//! current selections, and seeded random generation of complete sentences.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grammar::{conflicts, missing_slots, SentenceSelections, Slot, Violation};
use crate::lexicon::{Lexeme, Lexicon, LexiconError};

#[derive(Debug, thiserror::Error)]
pub enum BuilderError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("`{id}` cannot fill {slot}: {reason}")]
    NotOffered { slot: Slot, id: String, reason: String },
    #[error("selections are contradictory: {}", describe(.0))]
    Contradiction(Vec<Violation>),
}

fn describe(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// The offered lexemes for one slot.
#[derive(Debug, Clone, Serialize)]
pub struct SlotChoices<'a> {
    pub slot: Slot,
    pub choices: Vec<&'a Lexeme>,
    /// The slot is empty and must be filled before the sentence is complete.
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locked_reason: Option<String>,
}

/// Result of [`apply_choice`]: the new selections plus any downstream slots
/// that were cleared because they no longer fit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Applied {
    pub selections: SentenceSelections,
    pub cleared: Vec<Slot>,
}

/// Sets `slot` and clears downstream slots that the new value contradicts.
fn with_choice(
    lexicon: &Lexicon,
    selections: &SentenceSelections,
    slot: Slot,
    id: &str,
) -> Applied {
    let mut next = selections.clone();
    next.set(slot, Some(id.to_string()));
    let mut cleared = Vec::new();
    let downstream = slot.downstream();
    if !downstream.is_empty() {
        for violation in conflicts(lexicon, &next) {
            for s in violation.slots() {
                if downstream.contains(&s) && next.is_set(s) {
                    next.set(s, None);
                    cleared.push(s);
                }
            }
        }
        cleared.sort();
    }
    Applied {
        selections: next,
        cleared,
    }
}

fn check_preconditions(lexicon: &Lexicon, selections: &SentenceSelections) -> Result<(), BuilderError> {
    for (_, id) in selections.filled() {
        lexicon.lookup(id)?;
    }
    let found = conflicts(lexicon, selections);
    if found.is_empty() {
        Ok(())
    } else {
        Err(BuilderError::Contradiction(found))
    }
}

fn candidates(lexicon: &Lexicon, slot: Slot) -> impl Iterator<Item = &Lexeme> {
    slot.categories().iter().flat_map(|&c| lexicon.offered(c))
}

/// Why `id` may not fill `slot`, or `None` if it may.
fn rejection(lexicon: &Lexicon, selections: &SentenceSelections, slot: Slot, id: &str) -> Option<Violation> {
    let applied = with_choice(lexicon, selections, slot, id);
    conflicts(lexicon, &applied.selections).into_iter().next()
}

fn slot_choices<'a>(
    lexicon: &'a Lexicon,
    selections: &SentenceSelections,
    slot: Slot,
    missing: &[Slot],
) -> SlotChoices<'a> {
    let mut choices = Vec::new();
    let mut first_rejection = None;
    for lx in candidates(lexicon, slot) {
        match rejection(lexicon, selections, slot, &lx.id) {
            None => choices.push(lx),
            Some(v) => {
                first_rejection.get_or_insert(v);
            }
        }
    }
    let locked_reason = if choices.is_empty() {
        Some(first_rejection.map_or_else(|| "no vocabulary".to_string(), |v| v.to_string()))
    } else {
        None
    };
    SlotChoices {
        slot,
        choices,
        required: missing.contains(&slot),
        locked_reason,
    }
}

/// The lexemes offered for every slot. Each offered choice, applied with
/// [`apply_choice`], leaves selections that can still be completed.
pub fn valid_choices<'a>(
    lexicon: &'a Lexicon,
    selections: &SentenceSelections,
) -> Result<Vec<SlotChoices<'a>>, BuilderError> {
    check_preconditions(lexicon, selections)?;
    let missing = missing_slots(lexicon, selections);
    Ok(Slot::ALL
        .into_iter()
        .map(|slot| slot_choices(lexicon, selections, slot, &missing))
        .collect())
}

/// Fills `slot` with `id`, clearing any downstream slot the choice
/// invalidates. Choices that clash with a peer slot are rejected.
pub fn apply_choice(
    lexicon: &Lexicon,
    selections: &SentenceSelections,
    slot: Slot,
    id: &str,
) -> Result<Applied, BuilderError> {
    check_preconditions(lexicon, selections)?;
    let lx = lexicon.lookup(id)?;
    let not_offered = |reason: String| BuilderError::NotOffered {
        slot,
        id: id.to_string(),
        reason,
    };
    if !slot.categories().contains(&lx.category) {
        return Err(not_offered(format!("`{id}` is a {}", lx.category)));
    }
    if lx.is_variant() {
        return Err(not_offered("spelling variants are not offered".to_string()));
    }
    let applied = with_choice(lexicon, selections, slot, id);
    match conflicts(lexicon, &applied.selections).first() {
        None => Ok(applied),
        Some(v) => Err(not_offered(v.to_string())),
    }
}

/// Empties `slot`. Downstream slots are left alone; they remain valid.
pub fn clear_choice(selections: &SentenceSelections, slot: Slot) -> SentenceSelections {
    let mut next = selections.clone();
    next.set(slot, None);
    next
}

/// Builds a complete sentence by repeatedly filling the first required slot
/// with a uniformly random offered lexeme. Transitive verbs get a noun object
/// on a fair coin flip. Deterministic for a given seed and lexicon.
pub fn random_sentence(lexicon: &Lexicon, seed: u64) -> SentenceSelections {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selections = SentenceSelections::default();
    let mut object_decided = false;
    loop {
        let missing = missing_slots(lexicon, &selections);
        let Some(&first) = missing.first() else {
            return selections;
        };
        let slot = if first == Slot::ObjectPronoun && !object_decided {
            object_decided = true;
            if rng.random_bool(0.5) {
                Slot::Object
            } else {
                first
            }
        } else {
            first
        };
        let offered = slot_choices(lexicon, &selections, slot, &missing).choices;
        let pick = offered
            .choose(&mut rng)
            .expect("every required slot has at least one offered choice");
        selections = with_choice(lexicon, &selections, slot, &pick.id).selections;
    }
}
