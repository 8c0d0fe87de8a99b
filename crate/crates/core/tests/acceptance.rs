//! One PASS/FAIL/SKIP line per acceptance criterion. Hermetic criteria fail
//! the run; live ones only report, and skip without configured endpoints.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{all_rankings, block, check_lossless, keywords_present, rbo_oracle};
use ovp_core::builder::random_sentence;
use ovp_core::config::{BackendMode, Config};
use ovp_core::en2ovp::{translate_english, En2OvpOptions, TranslationRecord};
use ovp_core::eval::{
    average_displacement, baseline, evaluate_embedding_model, normalized_cosine, rbo, score_record, EmbeddingBackend,
    MockEmbeddings, RankingBenchmark,
};
use ovp_core::llm::{ChatBackend, MockChat};
use ovp_core::ovp2en::{encode, translate_ovp, EncodeOptions};
use ovp_core::{fixtures, render, validate, Lexicon, SentenceSelections, Slot};
use unicode_normalization::is_nfc;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::*;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn lex() -> &'static Lexicon {
    Lexicon::embedded()
}

fn morphology() -> Outcome {
    let must = ["tabuutsi'-uu tüba-noka u-buni-ku.", "isha'-ii tübbi-neika mai-w̃ui-gaa-wei."];
    let start = Instant::now();
    let rows = fixtures::examples();
    let mut exact = 0;
    let mut wrong = Vec::new();
    for row in rows {
        match render(lex(), &row.selections) {
            Ok(s) if s == row.surface && is_nfc(&s) => exact += 1,
            Ok(s) => wrong.push(format!("{s} != {}", row.surface)),
            Err(e) => wrong.push(format!("{}: {e}", row.surface)),
        }
    }
    let elapsed = start.elapsed();
    let present = must.iter().all(|m| rows.iter().any(|r| r.surface == *m));
    verdict(
        wrong.is_empty() && exact >= 30 && present && elapsed < Duration::from_secs(1),
        format!("{exact}/{} rows byte-identical NFC in {elapsed:.2?}{}", rows.len(), first(&wrong)),
    )
}

fn first(errors: &[String]) -> String {
    errors.first().map(|e| format!("; first error: {e}")).unwrap_or_default()
}

fn builder_soundness() -> Outcome {
    let start = Instant::now();
    let (mut incomplete, mut intransitive_object, mut disagreement, mut pronoun_suffix) = (0, 0, 0, 0);
    for seed in 0..10_000 {
        let s = random_sentence(lex(), seed);
        if !validate(lex(), &s).is_complete() {
            incomplete += 1;
        }
        let get = |slot| s.get(slot).map(|id| lex().lookup(id).unwrap());
        let (subject, verb) = (get(Slot::Subject).unwrap(), get(Slot::Verb).unwrap());
        let object_part = [Slot::Object, Slot::ObjectSuffix, Slot::ObjectPronoun]
            .iter()
            .any(|&slot| s.is_set(slot));
        if verb.is_intransitive() && object_part {
            intransitive_object += 1;
        }
        if let (Some(suffix), Some(prefix)) = (get(Slot::ObjectSuffix), get(Slot::ObjectPronoun)) {
            if suffix.proximity != prefix.proximity {
                disagreement += 1;
            }
        }
        if subject.is_pronoun() && s.is_set(Slot::SubjectSuffix) {
            pronoun_suffix += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        incomplete + intransitive_object + disagreement + pronoun_suffix == 0 && elapsed < Duration::from_secs(10),
        format!(
            "10000 sentences in {elapsed:.2?}: incomplete={incomplete} intransitive+object={intransitive_object} \
             suffix/prefix disagreement={disagreement} pronoun+suffix={pronoun_suffix}"
        ),
    )
}

fn losslessness() -> Outcome {
    let mut errors = Vec::new();
    for seed in 0..10_000 {
        let s = random_sentence(lex(), seed);
        let result = encode(lex(), &s, EncodeOptions::default())
            .map_err(|e| e.to_string())
            .and_then(|st| check_lossless(lex(), &s, &st));
        if let Err(e) = result {
            errors.push(format!("seed {seed}: {e}"));
        }
    }
    verdict(
        errors.is_empty(),
        format!("{} of 10000 sentences decoded exactly{}", 10_000 - errors.len(), first(&errors)),
    )
}

fn metric_oracles() -> Outcome {
    let rankings = all_rankings(5, 5);
    let mut worst: f64 = 0.0;
    let mut pairs = 0usize;
    for p in [0.5, 0.9, 0.98] {
        for a in &rankings {
            for b in &rankings {
                let got = rbo(a, b, p).unwrap();
                worst = worst.max((got - rbo_oracle(a, b, p)).abs());
                pairs += 1;
            }
        }
    }
    let ten: Vec<usize> = (0..10).collect();
    let reversed: Vec<usize> = ten.iter().rev().copied().collect();
    let identical = average_displacement(&ten, &ten).unwrap();
    let flipped = average_displacement(&ten, &reversed).unwrap();
    let cos = [
        normalized_cosine(&[1.0, 2.0], &[2.0, 4.0]).unwrap(),
        normalized_cosine(&[1.0, 2.0], &[-1.0, -2.0]).unwrap(),
        normalized_cosine(&[1.0, 0.0], &[0.0, 3.0]).unwrap(),
    ];
    let cos_ok = (cos[0] - 1.0).abs() < 1e-12 && cos[1].abs() < 1e-12 && (cos[2] - 0.5).abs() < 1e-12;
    verdict(
        worst <= 1e-12 && identical == 0.0 && flipped == 5.0 && cos_ok,
        format!(
            "rbo max |err|={worst:.1e} over {pairs} ordered pairs; displacement {identical}/{flipped}; cosine {:.3}/{:.3}/{:.3}",
            cos[0], cos[1], cos[2]
        ),
    )
}

fn bracketed(text: &str) -> usize {
    text.matches('[').count()
}

fn masks(text: &str) -> usize {
    ["[SUBJECT]", "[VERB]", "[OBJECT]"].iter().map(|m| text.matches(m).count()).sum()
}

fn records_consistent(r: &TranslationRecord) -> Result<(), String> {
    let n = r.simples.len();
    let lens = [r.simple_english.len(), r.comparators.len(), r.ovp_surfaces.len(), r.backwards.len()];
    if n == 0 || lens.iter().any(|&l| l != n) {
        return Err(format!("{}: list lengths {n} vs {lens:?}", r.input));
    }
    for (ovp, comp) in r.ovp_surfaces.iter().zip(&r.comparators) {
        if bracketed(ovp) != masks(comp) {
            return Err(format!("{}: `{ovp}` vs `{comp}`", r.input));
        }
    }
    let s = r.scores.ok_or_else(|| format!("{}: unscored", r.input))?;
    if [s.simple, s.comparator, s.backwards].iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(format!("{}: score out of range {s:?}", r.input));
    }
    Ok(())
}

fn hermetic_end_to_end() -> Outcome {
    let start = Instant::now();
    let options = En2OvpOptions::default();
    let embed = MockEmbeddings::default();
    let sample = fixtures::dataset_sample();
    let mut errors = Vec::new();
    for entry in &sample {
        let result = block(async {
            let r = translate_english(lex(), &entry.text, &MockChat, &options)
                .await
                .map_err(|e| e.to_string())?;
            score_record(r, &embed).await.map_err(|e| e.to_string())
        });
        if let Err(e) = result.and_then(|r| records_consistent(&r)) {
            errors.push(e);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        errors.is_empty() && elapsed < Duration::from_secs(5),
        format!("{}/{} records consistent in {elapsed:.2?}{}", sample.len() - errors.len(), sample.len(), first(&errors)),
    )
}

fn placeholder_shape() -> Outcome {
    let r = block(translate_english(
        lex(),
        "Birds will migrate and return.",
        &MockChat,
        &En2OvpOptions::default(),
    ));
    let r = match r {
        Ok(r) => r,
        Err(e) => return Fail(e.to_string()),
    };
    let want = ["[migrate]-wei tsiipa-uu.", "[return]-wei tsiipa-uu."];
    let ok = r.ovp_surfaces == want && r.comparators.iter().all(|c| c.contains("[VERB]"));
    verdict(ok, format!("{:?} / {:?}", r.ovp_surfaces, r.comparators))
}

fn keyword_rate(chat: &dyn ChatBackend, n: u64) -> Result<f64, String> {
    let mut kept = 0;
    for seed in 0..n {
        let s: SentenceSelections = random_sentence(lex(), seed);
        let t = block(translate_ovp(lex(), &s, chat, EncodeOptions::default())).map_err(|e| e.to_string())?;
        if keywords_present(lex(), &s, &t.english) {
            kept += 1;
        }
    }
    Ok(kept as f64 / n as f64)
}

fn keyword_fidelity_mock() -> Outcome {
    match keyword_rate(&MockChat, 100) {
        Ok(rate) => verdict(rate == 1.0, format!("{:.0}% of 100 sentences keep subject and verb", rate * 100.0)),
        Err(e) => Fail(e),
    }
}

struct Live {
    chat: Option<Arc<dyn ChatBackend>>,
    embeddings: Option<Arc<dyn EmbeddingBackend>>,
}

fn live() -> Result<Live, String> {
    let config = Config::load(None).map_err(|e| e.to_string())?;
    let chat = match config.chat {
        Some(_) => Some(config.chat_backend(BackendMode::Live).map_err(|e| e.to_string())?),
        None => None,
    };
    let embeddings = config.embedding_backend(BackendMode::Live).map_err(|e| e.to_string())?;
    Ok(Live { chat, embeddings })
}

fn keyword_fidelity_live(live: &Live) -> Outcome {
    let Some(chat) = &live.chat else {
        return Skip("no chat endpoint (OVP_CHAT_URL)".into());
    };
    match keyword_rate(chat.as_ref(), 100) {
        Ok(rate) => verdict(rate >= 0.95, format!("{:.0}% of 100 sentences keep subject and verb", rate * 100.0)),
        Err(e) => Fail(e),
    }
}

fn ranking_table(live: &Live) -> Outcome {
    let Some(embed) = &live.embeddings else {
        return Skip("no embeddings endpoint (OVP_EMBED_URL)".into());
    };
    let start = Instant::now();
    let report = match block(evaluate_embedding_model(RankingBenchmark::appendix_b(), embed.as_ref(), 0.9)) {
        Ok(r) => r,
        Err(e) => return Fail(e.to_string()),
    };
    let elapsed = start.elapsed();
    let (d, r) = (report.displacement.mean, report.rbo.mean);
    verdict(
        (d - 0.933).abs() <= 0.05 && (r - 0.884).abs() <= 0.05 && elapsed < Duration::from_secs(120),
        format!("{}: displacement {d:.3} rbo {r:.3} in {elapsed:.1?}", report.model),
    )
}

fn baseline_stats(live: &Live) -> Outcome {
    let Some(embed) = &live.embeddings else {
        return Skip("no embeddings endpoint (OVP_EMBED_URL)".into());
    };
    let texts: Vec<String> = fixtures::dataset().iter().map(|e| e.text.clone()).collect();
    match block(baseline(&texts, embed.as_ref(), 20)) {
        Ok(b) => verdict(
            (b.mean - 0.574).abs() <= 0.05 && (b.std - 0.061).abs() <= 0.03,
            format!("{} pairs: mean {:.3} std {:.3} threshold {:.3}", b.pairs, b.mean, b.std, b.threshold),
        ),
        Err(e) => Fail(e.to_string()),
    }
}

fn worked_examples(live: &Live) -> Outcome {
    let (Some(chat), Some(embed)) = (&live.chat, &live.embeddings) else {
        return Skip("needs both chat and embeddings endpoints".into());
    };
    let run = |text: &str| {
        block(async {
            let r = translate_english(lex(), text, chat.as_ref(), &En2OvpOptions::default())
                .await
                .map_err(|e| e.to_string())?;
            score_record(r, embed.as_ref()).await.map_err(|e| e.to_string())
        })
    };
    let (swim, birds) = match (run("I am swimming."), run("Birds will migrate and return.")) {
        (Ok(a), Ok(b)) => (a.scores.unwrap(), b.scores.unwrap()),
        (Err(e), _) | (_, Err(e)) => return Fail(e),
    };
    let swim_ok = [swim.simple, swim.comparator, swim.backwards].iter().all(|&x| x >= 0.95);
    let birds_ok = birds.comparator <= birds.simple - 0.1;
    verdict(
        swim_ok && birds_ok,
        format!("swimming {swim:?}; migrate simple {:.3} comparator {:.3}", birds.simple, birds.comparator),
    )
}

fn main() {
    let mut hermetic_failures = 0;
    let mut report = |name: &str, hermetic: bool, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                if hermetic {
                    hermetic_failures += 1;
                }
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("{tag}  {name:<28} {detail}");
    };

    report("morphology-exactness", true, morphology());
    report("builder-soundness", true, builder_soundness());
    report("interlingua-losslessness", true, losslessness());
    report("metric-oracles", true, metric_oracles());
    report("hermetic-end-to-end", true, hermetic_end_to_end());
    report("placeholder-shape", true, placeholder_shape());
    report("keyword-fidelity-mock", true, keyword_fidelity_mock());
    match live() {
        Ok(l) => {
            report("keyword-fidelity-live", false, keyword_fidelity_live(&l));
            report("ranking-benchmark-live", false, ranking_table(&l));
            report("baseline-live", false, baseline_stats(&l));
            report("worked-examples-live", false, worked_examples(&l));
        }
        Err(e) => {
            for name in ["keyword-fidelity-live", "ranking-benchmark-live", "baseline-live", "worked-examples-live"] {
                report(name, false, Fail(format!("live config: {e}")));
            }
        }
    }

    if hermetic_failures > 0 {
        std::process::exit(1);
    }
}
