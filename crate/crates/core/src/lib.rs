//! Rule-based Owens Valley Paiute (OVP) sentence engine, LLM-assisted
//! translation pipelines that only ever show English to the language model,
//! and a semantic-similarity evaluation harness.

pub mod builder;
pub mod config;
pub mod en2ovp;
pub mod english;
pub mod eval;
pub mod fixtures;
pub mod grammar;
pub mod lexicon;
pub mod llm;
pub mod ovp2en;
pub mod service;


pub use grammar::{render, validate, SentenceSelections, Slot, Verdict, Violation};
pub use lexicon::{Category, Lexeme, Lexicon, Proximity, TenseTag};
