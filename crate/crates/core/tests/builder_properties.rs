use ovp_core::builder::{apply_choice, clear_choice, random_sentence, valid_choices};
use ovp_core::grammar::{conflicts, missing_slots, Clause};
use ovp_core::{render, validate, Category, Lexicon, SentenceSelections, Slot, Verdict};
use proptest::prelude::*;
use unicode_normalization::is_nfc;

fn lex() -> &'static Lexicon {
    Lexicon::embedded()
}

/// Follows `picks` through the builder: each pick chooses an open slot that
/// has offers, then one of its offered lexemes. Returns every state visited.
fn walk(picks: &[(usize, usize)]) -> Vec<SentenceSelections> {
    let mut s = SentenceSelections::default();
    let mut seen = vec![s.clone()];
    for &(slot_pick, lex_pick) in picks {
        let slots = valid_choices(lex(), &s).unwrap();
        let open: Vec<_> = slots
            .iter()
            .filter(|c| !s.is_set(c.slot) && !c.choices.is_empty())
            .collect();
        if open.is_empty() {
            break;
        }
        let c = open[slot_pick % open.len()];
        let id = &c.choices[lex_pick % c.choices.len()].id;
        s = apply_choice(lex(), &s, c.slot, id).unwrap().selections;
        seen.push(s.clone());
    }
    seen
}

/// Depth-first search for a completion using only offered choices.
fn completable(s: &SentenceSelections, depth: usize) -> bool {
    if validate(lex(), s).is_complete() {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let slots = valid_choices(lex(), s).unwrap();
    let Some(required) = slots.iter().find(|c| c.required) else {
        return false;
    };
    // Offered choices are interchangeable for completion within a category
    // class, so trying a few per slot keeps the search small.
    required.choices.iter().take(3).any(|lx| {
        let next = apply_choice(lex(), s, required.slot, &lx.id).unwrap().selections;
        completable(&next, depth - 1)
    })
}

#[test]
fn every_offer_from_the_empty_state_is_completable() {
    let empty = SentenceSelections::default();
    for c in valid_choices(lex(), &empty).unwrap() {
        for lx in &c.choices {
            let next = apply_choice(lex(), &empty, c.slot, &lx.id).unwrap().selections;
            assert!(completable(&next, 7), "{} = {} dead-ends", c.slot, lx.id);
        }
    }
}

#[test]
fn required_slots_always_have_offers_for_verb_pairs() {
    // Every verb with every subject kind leaves each required slot fillable.
    let subjects = ["n.coyote", "sp.i", "sp.they_distal", "sp.you_and_i"];
    for verb in lex()
        .offered(Category::TransitiveVerb)
        .chain(lex().offered(Category::IntransitiveVerb))
    {
        for subj in subjects {
            let s = SentenceSelections::default()
                .with(Slot::Subject, subj)
                .with(Slot::Verb, &verb.id);
            for c in valid_choices(lex(), &s).unwrap() {
                if c.required {
                    assert!(!c.choices.is_empty(), "{subj} {} leaves {} empty", verb.id, c.slot);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn walks_never_contradict_and_never_dead_end(picks in proptest::collection::vec((0usize..8, 0usize..64), 1..12)) {
        for s in walk(&picks) {
            prop_assert!(conflicts(lex(), &s).is_empty(), "{s:?}");
            let missing = missing_slots(lex(), &s);
            if missing.is_empty() {
                prop_assert_eq!(validate(lex(), &s), Verdict::Complete);
            } else {
                let slots = valid_choices(lex(), &s).unwrap();
                let fillable = missing.iter().all(|m| slots.iter().any(|c| c.slot == *m && !c.choices.is_empty()));
                prop_assert!(fillable, "dead end at {s:?}");
            }
        }
    }

    #[test]
    fn random_sentences_are_complete_nfc_and_reproducible(seed in any::<u64>()) {
        let s = random_sentence(lex(), seed);
        prop_assert_eq!(validate(lex(), &s), Verdict::Complete);
        prop_assert_eq!(&random_sentence(lex(), seed), &s);
        let surface = render(lex(), &s).unwrap();
        prop_assert!(is_nfc(&surface));
        prop_assert!(surface.ends_with('.'));
        prop_assert_eq!(surface, Clause::from_selections(lex(), &s).unwrap().render(lex().word_order()));
    }

    #[test]
    fn random_sentences_obey_agreement(seed in any::<u64>()) {
        let s = random_sentence(lex(), seed);
        let get = |slot| s.get(slot).map(|id| lex().lookup(id).unwrap());
        let subject = get(Slot::Subject).unwrap();
        let verb = get(Slot::Verb).unwrap();
        prop_assert_eq!(subject.is_pronoun(), get(Slot::SubjectSuffix).is_none());
        if verb.is_intransitive() {
            prop_assert!(get(Slot::Object).is_none() && get(Slot::ObjectSuffix).is_none() && get(Slot::ObjectPronoun).is_none());
        } else {
            let prefix = get(Slot::ObjectPronoun).unwrap();
            if let Some(suffix) = get(Slot::ObjectSuffix) {
                prop_assert!(get(Slot::Object).is_some());
                prop_assert_eq!(suffix.proximity, prefix.proximity);
            }
        }
    }

    #[test]
    fn clearing_a_slot_keeps_the_rest_consistent(seed in any::<u64>(), slot in 0usize..7) {
        let s = random_sentence(lex(), seed);
        let cleared = clear_choice(&s, Slot::ALL[slot]);
        prop_assert!(conflicts(lex(), &cleared).is_empty());
        prop_assert!(completable(&cleared, 4), "{cleared:?}");
    }

    #[test]
    fn upstream_choice_leaves_no_conflict(seed in any::<u64>(), pick in 0usize..64) {
        let s = random_sentence(lex(), seed);
        for slot in [Slot::Subject, Slot::Verb, Slot::Object] {
            let offers = valid_choices(lex(), &s).unwrap();
            let c = offers.iter().find(|c| c.slot == slot).unwrap();
            if c.choices.is_empty() {
                continue;
            }
            let id = &c.choices[pick % c.choices.len()].id;
            let applied = apply_choice(lex(), &s, slot, id).unwrap();
            prop_assert!(conflicts(lex(), &applied.selections).is_empty());
            for cleared in &applied.cleared {
                prop_assert!(!applied.selections.is_set(*cleared));
            }
        }
    }
}
