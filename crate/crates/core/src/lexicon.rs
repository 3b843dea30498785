//! Dictionary lookup and initial tagging.
//!
//! Lexicon lines follow the DELAF layout `surface,lemma.CAT(;SUB)*([+TRAIT])*(:FEATS)*`.
//! Several `:FEATS` groups are alternatives: `suis,suivre.V:P1s:P2s:Y2s`
//! stands for three complete tags. An empty lemma means the lemma equals the
//! surface. Compound entries have multi-token surfaces and are stored with a
//! `/`-joined lemma.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lattice::{Edge, Lattice};
use crate::tag_algebra::{
    is_separator, Category, CategoryInventory, CompleteTag, EdgeLabel, FeatureSet, TagError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("unknown word `{token}` at token {position}")]
    UnknownWord { token: String, position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexiconEntry {
    /// Lookup forms of the surface tokens; one token for simple words.
    pub tokens: Vec<String>,
    /// Surface as written in the dictionary.
    pub surface: String,
    pub lemma: String,
    pub category: Category,
    /// Empty for invariable words.
    pub alternatives: Vec<FeatureSet>,
}

impl LexiconEntry {
    /// One complete tag per feature alternative.
    pub fn expand(&self) -> Vec<CompleteTag> {
        let build = |fs: FeatureSet| {
            CompleteTag::new(self.surface.clone(), self.lemma.clone(), self.category.clone(), fs)
                .expect("entries are validated at load time")
        };
        if self.alternatives.is_empty() {
            vec![build(FeatureSet::empty())]
        } else {
            self.alternatives.iter().cloned().map(build).collect()
        }
    }

    pub fn is_compound(&self) -> bool {
        self.tokens.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    simple: BTreeMap<String, Vec<LexiconEntry>>,
    compounds: BTreeMap<String, Vec<LexiconEntry>>,
    categories: CategoryInventory,
}

impl Lexicon {
    pub fn load(text: &str) -> Result<Self, LexiconError> {
        Self::load_with_categories(text, CategoryInventory::default())
    }

    pub fn load_with_categories(text: &str, categories: CategoryInventory) -> Result<Self, LexiconError> {
        let mut lexicon = Lexicon { categories, ..Default::default() };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry = parse_line(line, &lexicon.categories)
                .map_err(|reason| LexiconError::Malformed { line: i + 1, reason })?;
            let (map, key) = if entry.is_compound() {
                (&mut lexicon.compounds, entry.tokens[0].clone())
            } else {
                (&mut lexicon.simple, entry.tokens[0].clone())
            };
            let bucket = map.entry(key).or_default();
            if !bucket.contains(&entry) {
                bucket.push(entry);
            }
        }
        Ok(lexicon)
    }

    pub fn categories(&self) -> &CategoryInventory {
        &self.categories
    }

    pub fn lookup(&self, token: &str) -> &[LexiconEntry] {
        self.simple.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Complete tags of a simple word, with the surface attached.
    pub fn tags_of(&self, token: &str) -> Vec<CompleteTag> {
        self.lookup(token).iter().flat_map(LexiconEntry::expand).collect()
    }

    pub fn compounds_starting_with(&self, token: &str) -> &[LexiconEntry] {
        self.compounds.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn simple_entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.simple.values().flatten()
    }

    pub fn compound_entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.compounds.values().flatten()
    }

    /// Tokenizes the text and builds its initial tagging lattice.
    pub fn tag_text(&self, text: &str) -> Result<Lattice, LexiconError> {
        build_initial_lattice(&tokenize(text), self)
    }
}

fn parse_line(line: &str, categories: &CategoryInventory) -> Result<LexiconEntry, String> {
    let (surface, rest) = line.split_once(',').ok_or("expected `surface,lemma.CODES`")?;
    let (lemma, codes) = rest.rsplit_once('.').ok_or("expected `.` before the category")?;
    let surface = surface.trim();
    if surface.is_empty() {
        return Err("empty surface".into());
    }
    let tokens: Vec<String> = tokenize(surface).into_iter().map(|t| t.text).collect();
    let lemma = if lemma.trim().is_empty() { surface } else { lemma.trim() };
    let lemma = lemma.split_whitespace().collect::<Vec<_>>().join("/");
    let mut groups = codes.split(':');
    let cat_text = groups.next().unwrap_or("");
    let probe = format!("<{lemma} {cat_text}>");
    let probe_tag = CompleteTag::parse_with_surface(&probe, surface, categories).map_err(|e| e.to_string())?;
    let mut alternatives = Vec::new();
    for g in groups {
        let fs = FeatureSet::parse(g).map_err(|e| e.to_string())?;
        CompleteTag::new(surface, lemma.clone(), probe_tag.category().clone(), fs.clone())
            .map_err(|e: TagError| e.to_string())?;
        if !alternatives.contains(&fs) {
            alternatives.push(fs);
        }
    }
    Ok(LexiconEntry {
        tokens,
        surface: surface.to_string(),
        lemma,
        category: probe_tag.category().clone(),
        alternatives,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Separator(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Lookup form: the text with a sentence-initial capital folded.
    pub text: String,
    /// As written.
    pub original: String,
    pub kind: TokenKind,
    pub position: usize,
}

/// Splits on whitespace; every separator character is a token of its own.
/// The first word of the text, and the first word after `.`, `!` or `?`,
/// has its initial capital folded for lookup.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut raw: Vec<(String, TokenKind)> = Vec::new();
    let mut word = String::new();
    let flush = |word: &mut String, raw: &mut Vec<(String, TokenKind)>| {
        if !word.is_empty() {
            raw.push((std::mem::take(word), TokenKind::Word));
        }
    };
    for ch in text.chars() {
        if ch.is_whitespace() {
            flush(&mut word, &mut raw);
        } else if is_separator(ch) {
            flush(&mut word, &mut raw);
            raw.push((ch.to_string(), TokenKind::Separator(ch)));
        } else {
            word.push(ch);
        }
    }
    flush(&mut word, &mut raw);

    let mut sentence_start = true;
    raw.into_iter()
        .enumerate()
        .map(|(position, (original, kind))| {
            let text = match kind {
                TokenKind::Word if sentence_start => {
                    sentence_start = false;
                    fold_initial(&original)
                }
                TokenKind::Word => original.clone(),
                TokenKind::Separator(c) => {
                    if matches!(c, '.' | '!' | '?') {
                        sentence_start = true;
                    }
                    original.clone()
                }
            };
            Token { text, original, kind, position }
        })
        .collect()
}

fn fold_initial(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) if first.is_uppercase() => first.to_lowercase().chain(chars).collect(),
        _ => word.to_string(),
    }
}

/// States are token boundaries `0..=n`. Each simple analysis gives an edge
/// `(i, i+1)`, each compound matching tokens `i..j` an edge `(i, j)`, each
/// separator an edge carrying the literal character.
pub fn build_initial_lattice(tokens: &[Token], lexicon: &Lexicon) -> Result<Lattice, LexiconError> {
    if tokens.is_empty() {
        return Ok(Lattice::single_state());
    }
    let mut edges = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        match tok.kind {
            TokenKind::Separator(c) => edges.push(Edge { from: i, to: i + 1, label: EdgeLabel::Separator(c) }),
            TokenKind::Word => {
                let key = if lexicon.lookup(&tok.text).is_empty() { &tok.original } else { &tok.text };
                let entries = lexicon.lookup(key);
                if entries.is_empty() {
                    return Err(LexiconError::UnknownWord { token: tok.original.clone(), position: i });
                }
                for entry in entries {
                    for tag in entry.expand() {
                        let tag = tag.with_surface(key.as_str()).expect("surface is a lexicon key");
                        edges.push(Edge { from: i, to: i + 1, label: EdgeLabel::Tag(tag) });
                    }
                }
                for key in [&tok.text, &tok.original] {
                    for entry in lexicon.compounds_starting_with(key) {
                        let n = entry.tokens.len();
                        let fits = i + n <= tokens.len()
                            && entry.tokens.iter().enumerate().all(|(k, t)| {
                                let tok = &tokens[i + k];
                                *t == tok.text || *t == tok.original
                            });
                        if fits {
                            edges.extend(entry.expand().into_iter().map(|tag| Edge {
                                from: i,
                                to: i + n,
                                label: EdgeLabel::Tag(tag),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(Lattice::new(tokens.len() + 1, 0, tokens.len(), edges).expect("token lattices are forward and consistent"))
}
