//! Seeded random (lexicon, sentence, grammar) instances for differential
//! testing. Instances are small: at most ten tokens, four grammar states and
//! `DEFAULT_PATH_LIMIT` lattice paths.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grammar::{GrammarClass, LocalGrammar, Transition};
use crate::lattice::DEFAULT_PATH_LIMIT;
use crate::lexicon::Lexicon;
use crate::tag_algebra::{CategoryPattern, FeatureSet, IncompleteTag};

const WORDS: &[&str] = &["la", "bel", "ami", "port", "vol", "ce"];
const CATEGORIES: &[&str] = &["N", "V", "A", "DET", "PRO"];
const ENTRY_FEATURES: &[&str] = &["", "ms", "fs", "mp", "P3s", "P1s:P3s", "Kms:Kfs", "W", "3ms"];
const PATTERN_FEATURES: &[&str] = &["s", "m", "P", "3s", "f", "Kms"];
const MAX_TOKENS: usize = 10;
const MAX_GRAMMAR_STATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Any,
    SimpleInputs,
    OutputImpliesInput,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub lexicon_source: String,
    pub lexicon: Lexicon,
    pub text: String,
    pub grammar: LocalGrammar,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(rng: &mut impl Rng, shape: Shape) -> Instance {
    let lexicon_source = lexicon_source(rng);
    let lexicon = Lexicon::load(&lexicon_source).expect("generated lexicon lines are well formed");
    // Resample until the oracle can enumerate the initial lattice.
    let text = loop {
        let t = sentence(rng);
        if lexicon.tag_text(&t).is_ok_and(|l| l.count_paths() <= DEFAULT_PATH_LIMIT as u128) {
            break t;
        }
    };
    let grammar = loop {
        let g = grammar(rng, shape);
        let ok = match shape {
            Shape::Any => true,
            Shape::SimpleInputs => g.classify() == GrammarClass::SimpleInputs,
            Shape::OutputImpliesInput => g.classify() == GrammarClass::OutputImpliesInput,
        };
        if ok {
            break g;
        }
    };
    Instance { lexicon_source, lexicon, text, grammar }
}

fn lexicon_source(rng: &mut impl Rng) -> String {
    let mut lines = Vec::new();
    for w in WORDS {
        for _ in 0..rng.gen_range(1..=3) {
            lines.push(entry_line(rng, w));
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let a = WORDS.choose(rng).unwrap();
        let b = WORDS.choose(rng).unwrap();
        lines.push(entry_line(rng, &format!("{a} {b}")));
    }
    lines.join("\n")
}

fn entry_line(rng: &mut impl Rng, surface: &str) -> String {
    let lemma = if rng.gen_bool(0.5) { surface.to_string() } else { format!("{}x", surface.replace(' ', "")) };
    let cat = CATEGORIES.choose(rng).unwrap();
    let feats = ENTRY_FEATURES.choose(rng).unwrap();
    let feats = if feats.is_empty() { String::new() } else { format!(":{feats}") };
    format!("{surface},{lemma}.{cat}{feats}")
}

fn sentence(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(1..=MAX_TOKENS);
    let mut tokens = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && rng.gen_bool(0.12) {
            tokens.push("-".to_string());
        } else {
            tokens.push(WORDS.choose(rng).unwrap().to_string());
        }
    }
    tokens.join(" ")
}

fn features(rng: &mut impl Rng) -> FeatureSet {
    FeatureSet::parse(PATTERN_FEATURES.choose(rng).unwrap()).unwrap()
}

fn lemma(rng: &mut impl Rng) -> String {
    let w = WORDS.choose(rng).unwrap();
    if rng.gen_bool(0.5) { w.to_string() } else { format!("{w}x") }
}

fn simple_pattern(rng: &mut impl Rng) -> IncompleteTag {
    if rng.gen_bool(0.15) {
        IncompleteTag::SeparatorLiteral('-')
    } else {
        IncompleteTag::SurfaceForm(WORDS.choose(rng).unwrap().to_string())
    }
}

fn any_pattern(rng: &mut impl Rng) -> IncompleteTag {
    match rng.gen_range(0..7) {
        0 | 1 => simple_pattern(rng),
        2 => IncompleteTag::CategoryOnly(CategoryPattern::new(*CATEGORIES.choose(rng).unwrap())),
        3 => IncompleteTag::CategoryFeatures(CategoryPattern::new(*CATEGORIES.choose(rng).unwrap()), features(rng)),
        4 => IncompleteTag::LemmaOnly(lemma(rng)),
        5 => IncompleteTag::LemmaFeatures(lemma(rng), features(rng)),
        _ => IncompleteTag::AnyWord,
    }
}

/// An output pattern at least as strict as `input`.
fn strengthen(rng: &mut impl Rng, input: &IncompleteTag) -> IncompleteTag {
    if rng.gen_bool(0.3) {
        return input.clone();
    }
    match input {
        IncompleteTag::CategoryOnly(c) => IncompleteTag::CategoryFeatures(c.clone(), features(rng)),
        IncompleteTag::LemmaOnly(l) => IncompleteTag::LemmaFeatures(l.clone(), features(rng)),
        IncompleteTag::AnyWord => IncompleteTag::SurfaceForm(WORDS.choose(rng).unwrap().to_string()),
        other => other.clone(),
    }
}

fn labels(rng: &mut impl Rng, shape: Shape) -> (IncompleteTag, IncompleteTag) {
    match shape {
        Shape::Any => (any_pattern(rng), any_pattern(rng)),
        Shape::SimpleInputs => (simple_pattern(rng), any_pattern(rng)),
        Shape::OutputImpliesInput => {
            if rng.gen_bool(0.3) {
                (simple_pattern(rng), any_pattern(rng))
            } else {
                let input = loop {
                    let p = any_pattern(rng);
                    if !p.is_surface_or_separator() {
                        break p;
                    }
                };
                let output = strengthen(rng, &input);
                (input, output)
            }
        }
    }
}

/// A chain `0 -> 1 -> ... -> k` ending in a final state, plus random extra
/// transitions (cycles included) among the same states.
fn grammar(rng: &mut impl Rng, shape: Shape) -> LocalGrammar {
    let k = rng.gen_range(1..MAX_GRAMMAR_STATES);
    let mut transitions = Vec::new();
    for s in 0..k {
        let (input, output) = labels(rng, shape);
        transitions.push(Transition { from: s, to: s + 1, input, output });
    }
    for _ in 0..rng.gen_range(0..=3) {
        let (input, output) = labels(rng, shape);
        transitions.push(Transition { from: rng.gen_range(0..=k), to: rng.gen_range(0..=k), input, output });
    }
    let mut finals = vec![k];
    if k > 1 && rng.gen_bool(0.3) {
        finals.push(rng.gen_range(1..k));
    }
    LocalGrammar::new("R", k + 1, 0, finals, transitions).expect("chain grammars are trim")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let a = instance(&mut rng(7), Shape::Any);
        let b = instance(&mut rng(7), Shape::Any);
        assert_eq!(a.lexicon_source, b.lexicon_source);
        assert_eq!(a.text, b.text);
        assert_eq!(a.grammar, b.grammar);
    }

    #[test]
    fn shapes_are_respected() {
        let mut r = rng(1);
        for _ in 0..50 {
            let i = instance(&mut r, Shape::SimpleInputs);
            assert_eq!(i.grammar.classify(), GrammarClass::SimpleInputs);
            let i = instance(&mut r, Shape::OutputImpliesInput);
            assert_eq!(i.grammar.classify(), GrammarClass::OutputImpliesInput);
            assert!(i.grammar.num_states() <= MAX_GRAMMAR_STATES);
            assert!(crate::lexicon::tokenize(&i.text).len() <= MAX_TOKENS);
            assert!(i.lexicon.tag_text(&i.text).is_ok());
        }
    }
}
