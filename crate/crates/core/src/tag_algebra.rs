//! Complete and incomplete grammatical tags.
//!
//! A complete tag is one fully specified analysis of a word occurrence
//! (`<suivre V:P2s>`); an incomplete tag is a pattern denoting every complete
//! tag that satisfies its constraints (`<V>`, `<prendre:s>`, `suis`, `<MOT>`).
//! The match relation between the two is [`conforms`].

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Characters that always form a token of their own.
pub const SEPARATORS: &[char] = &[
    '\'', '\u{2019}', '-', '.', ',', ';', ':', '!', '?', '(', ')', '"', '\u{ab}', '\u{bb}', '\u{2026}',
];

pub fn is_separator(ch: char) -> bool {
    SEPARATORS.contains(&ch)
}

/// Number of tokens a surface string occupies in tokenized text: every run of
/// non-separator, non-space characters counts once, every separator once.
pub fn surface_token_count(surface: &str) -> usize {
    let mut count = 0;
    let mut in_word = false;
    for ch in surface.chars() {
        if ch.is_whitespace() {
            in_word = false;
        } else if is_separator(ch) {
            in_word = false;
            count += 1;
        } else if !in_word {
            in_word = true;
            count += 1;
        }
    }
    count
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TagError {
    #[error("malformed tag `{text}`: {reason}")]
    Malformed { text: String, reason: String },
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("duplicate {kind} code in feature group `{group}`")]
    DuplicateFeature { kind: &'static str, group: String },
    #[error("empty tag")]
    Empty,
}

fn malformed(text: &str, reason: impl Into<String>) -> TagError {
    TagError::Malformed { text: text.to_string(), reason: reason.into() }
}

/// The set of main category codes known to a lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryInventory {
    codes: BTreeSet<String>,
}

impl Default for CategoryInventory {
    fn default() -> Self {
        Self::new(["V", "N", "A", "ADV", "PRO", "DET", "PREP", "CNJS", "CNJC", "XI", "INT"])
    }
}

impl CategoryInventory {
    pub fn new<I, S>(codes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { codes: codes.into_iter().map(Into::into).collect() }
    }

    /// One code per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, TagError> {
        let mut codes = BTreeSet::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !is_category_code(line) {
                return Err(malformed(line, "category codes are uppercase alphanumerics"));
            }
            codes.insert(line.to_string());
        }
        Ok(Self { codes })
    }

    pub fn contains(&self, code: &str) -> bool {
        self.codes.contains(code)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.codes.iter().map(String::as_str)
    }
}

fn is_category_code(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
}

/// Main category code plus secondary codes and bracketed traits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Category {
    pub main: String,
    pub subcats: Vec<String>,
    pub traits: Vec<String>,
}

impl Category {
    pub fn new(main: impl Into<String>) -> Self {
        Self { main: main.into(), subcats: Vec::new(), traits: Vec::new() }
    }

    /// Parses `CAT(;SUB)*([+TRAIT])*`.
    fn parse(text: &str, inventory: &CategoryInventory) -> Result<Self, TagError> {
        let main_end = text.find([';', '[']).unwrap_or(text.len());
        let main = text[..main_end].trim();
        if main.is_empty() {
            return Err(malformed(text, "missing category"));
        }
        if !inventory.contains(main) {
            return Err(TagError::UnknownCategory(main.to_string()));
        }
        let mut cat = Category::new(main);
        let mut rest = &text[main_end..];
        while let Some(r) = rest.strip_prefix(';') {
            let end = r.find([';', '[']).unwrap_or(r.len());
            let sub = r[..end].trim();
            if sub.is_empty() {
                return Err(malformed(text, "empty subcategory"));
            }
            if !cat.traits.is_empty() {
                return Err(malformed(text, "subcategory after trait"));
            }
            cat.subcats.push(sub.to_string());
            rest = &r[end..];
        }
        while let Some(r) = rest.strip_prefix('[') {
            let close = r.find(']').ok_or_else(|| malformed(text, "unclosed trait bracket"))?;
            let inner = r[..close].trim();
            let name = inner
                .strip_prefix('+')
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .ok_or_else(|| malformed(text, "trait must read [+NAME]"))?;
            cat.traits.push(name.to_string());
            rest = &r[close + 1..];
            if rest.starts_with(';') {
                return Err(malformed(text, "subcategory after trait"));
            }
        }
        if !rest.trim().is_empty() {
            return Err(malformed(text, format!("unexpected `{}`", rest.trim())));
        }
        Ok(cat)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.main)?;
        for s in &self.subcats {
            write!(f, ";{s}")?;
        }
        for t in &self.traits {
            write!(f, "[+{t}]")?;
        }
        Ok(())
    }
}

/// A category constraint inside an incomplete tag: the main code, plus any
/// subcategories the tag must also carry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryPattern {
    pub main: String,
    pub subcats: Vec<String>,
}

impl CategoryPattern {
    pub fn new(main: impl Into<String>) -> Self {
        Self { main: main.into(), subcats: Vec::new() }
    }

    pub fn matches(&self, cat: &Category) -> bool {
        self.main == cat.main && self.subcats.iter().all(|s| cat.subcats.contains(s))
    }

    /// Everything matched by `self` is matched by `other`.
    fn within(&self, other: &CategoryPattern) -> bool {
        self.main == other.main && other.subcats.iter().all(|s| self.subcats.contains(s))
    }
}

impl fmt::Display for CategoryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.main)?;
        for s in &self.subcats {
            write!(f, ";{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AtomClass {
    TenseMood,
    Person,
    Gender,
    Number,
}

fn atom_class(ch: char) -> Option<AtomClass> {
    match ch {
        'A'..='Z' => Some(AtomClass::TenseMood),
        '1' | '2' | '3' => Some(AtomClass::Person),
        'm' | 'f' | 'n' => Some(AtomClass::Gender),
        's' | 'p' => Some(AtomClass::Number),
        _ => None,
    }
}

fn atom_rank(ch: char) -> (u8, char) {
    let class = match atom_class(ch) {
        Some(AtomClass::TenseMood) => 0,
        Some(AtomClass::Person) => 1,
        Some(AtomClass::Gender) => 2,
        Some(AtomClass::Number) => 3,
        None => 4,
    };
    (class, ch)
}

/// Inflection codes as a set of single-character atoms; `P3s` is `{P, 3, s}`.
///
/// Atoms are kept in notation order (tense/mood, person, gender, number), so
/// printing a parsed group gives back the usual spelling.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureSet {
    atoms: Vec<char>,
}

impl FeatureSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parse(group: &str) -> Result<Self, TagError> {
        if group.is_empty() {
            return Err(malformed(group, "empty feature group"));
        }
        let mut atoms = Vec::new();
        for ch in group.chars() {
            if atom_class(ch).is_none() {
                return Err(malformed(group, format!("unknown feature code `{ch}`")));
            }
            if !atoms.contains(&ch) {
                atoms.push(ch);
            }
        }
        atoms.sort_by_key(|&c| atom_rank(c));
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[char] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: char) -> bool {
        self.atoms.contains(&atom)
    }

    pub fn is_subset(&self, other: &FeatureSet) -> bool {
        self.atoms.iter().all(|a| other.contains(*a))
    }

    /// At most one person, one gender and one number code.
    fn validate_complete(&self) -> Result<(), TagError> {
        for (class, kind) in [
            (AtomClass::Person, "person"),
            (AtomClass::Gender, "gender"),
            (AtomClass::Number, "number"),
        ] {
            if self.atoms.iter().filter(|&&a| atom_class(a) == Some(class)).count() > 1 {
                return Err(TagError::DuplicateFeature { kind, group: self.to_string() });
            }
        }
        Ok(())
    }
}

impl PartialOrd for FeatureSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FeatureSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.atoms.iter().map(|&c| atom_rank(c)).cmp(other.atoms.iter().map(|&c| atom_rank(c)))
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.atoms {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// One fully specified lexical analysis of a simple or compound word.
///
/// Field order drives the derived ordering: tags sort by surface, then lemma.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompleteTag {
    surface: String,
    lemma: String,
    category: Category,
    features: FeatureSet,
    compound: bool,
}

impl CompleteTag {
    pub fn new(
        surface: impl Into<String>,
        lemma: impl Into<String>,
        category: Category,
        features: FeatureSet,
    ) -> Result<Self, TagError> {
        let surface = surface.into();
        let lemma = lemma.into();
        if surface.trim().is_empty() || lemma.is_empty() {
            return Err(TagError::Empty);
        }
        if lemma.chars().any(char::is_whitespace) {
            return Err(malformed(&lemma, "compound lemmas are joined with `/`"));
        }
        features.validate_complete()?;
        let compound = surface_token_count(&surface) > 1;
        Ok(Self { surface, lemma, category, features, compound })
    }

    /// Parses `<lemma CAT(;SUB)*([+TRAIT])*(:FEATS)?>`; the surface defaults to
    /// the lemma with `/` read as a space.
    pub fn parse(text: &str, inventory: &CategoryInventory) -> Result<Self, TagError> {
        let (lemma, category, features) = parse_complete_parts(text, inventory)?;
        let surface = lemma.replace('/', " ");
        Self::new(surface, lemma, category, features)
    }

    pub fn parse_with_surface(
        text: &str,
        surface: &str,
        inventory: &CategoryInventory,
    ) -> Result<Self, TagError> {
        let (lemma, category, features) = parse_complete_parts(text, inventory)?;
        Self::new(surface, lemma, category, features)
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    pub fn category(&self) -> &Category {
        &self.category
    }

    pub fn features(&self) -> &FeatureSet {
        &self.features
    }

    pub fn is_compound(&self) -> bool {
        self.compound
    }

    pub fn with_surface(&self, surface: impl Into<String>) -> Result<Self, TagError> {
        Self::new(surface, self.lemma.clone(), self.category.clone(), self.features.clone())
    }
}

fn parse_complete_parts(
    text: &str,
    inventory: &CategoryInventory,
) -> Result<(String, Category, FeatureSet), TagError> {
    let inner = text
        .trim()
        .strip_prefix('<')
        .and_then(|t| t.strip_suffix('>'))
        .ok_or_else(|| malformed(text, "expected <lemma CAT...>"))?
        .trim();
    let (lemma, codes) = inner
        .split_once(char::is_whitespace)
        .ok_or_else(|| malformed(text, "missing category"))?;
    let codes = codes.trim();
    let (cat_part, feats) = match codes.split_once(':') {
        Some((c, f)) => (c, Some(f)),
        None => (codes, None),
    };
    let category = Category::parse(cat_part, inventory)?;
    let features = match feats {
        None => FeatureSet::empty(),
        Some(f) if f.contains(':') => {
            return Err(malformed(text, "several feature groups denote alternatives"))
        }
        Some(f) => FeatureSet::parse(f).map_err(|e| match e {
            TagError::Malformed { .. } => malformed(text, "empty or invalid feature group"),
            other => other,
        })?,
    };
    Ok((lemma.to_string(), category, features))
}

impl fmt::Display for CompleteTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} {}", self.lemma, self.category)?;
        if !self.features.is_empty() {
            write!(f, ":{}", self.features)?;
        }
        f.write_str(">")
    }
}

/// What a lattice edge carries: a complete tag or a literal separator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    Tag(CompleteTag),
    Separator(char),
}

impl EdgeLabel {
    pub fn surface(&self) -> String {
        match self {
            EdgeLabel::Tag(t) => t.surface.clone(),
            EdgeLabel::Separator(c) => c.to_string(),
        }
    }

    pub fn token_len(&self) -> usize {
        match self {
            EdgeLabel::Tag(t) => surface_token_count(&t.surface),
            EdgeLabel::Separator(_) => 1,
        }
    }

    pub fn as_tag(&self) -> Option<&CompleteTag> {
        match self {
            EdgeLabel::Tag(t) => Some(t),
            EdgeLabel::Separator(_) => None,
        }
    }

    /// Parses either a complete tag notation or a single separator character.
    pub fn parse(text: &str, surface: &str, inventory: &CategoryInventory) -> Result<Self, TagError> {
        let mut chars = text.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if is_separator(c) {
                return Ok(EdgeLabel::Separator(c));
            }
        }
        CompleteTag::parse_with_surface(text, surface, inventory).map(EdgeLabel::Tag)
    }
}

impl From<CompleteTag> for EdgeLabel {
    fn from(t: CompleteTag) -> Self {
        EdgeLabel::Tag(t)
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Tag(t) => t.fmt(f),
            EdgeLabel::Separator(c) => write!(f, "{c}"),
        }
    }
}

/// A constraint pattern over complete tags.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IncompleteTag {
    LemmaOnly(String),
    CategoryOnly(CategoryPattern),
    LemmaFeatures(String, FeatureSet),
    CategoryFeatures(CategoryPattern, FeatureSet),
    SurfaceForm(String),
    /// `<MOT>`: any simple word, never a compound or separator.
    AnyWord,
    SeparatorLiteral(char),
}

impl IncompleteTag {
    pub fn parse(text: &str, inventory: &CategoryInventory) -> Result<Self, TagError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(TagError::Empty);
        }
        if let Some(inner) = text.strip_prefix('<') {
            let inner = inner
                .strip_suffix('>')
                .ok_or_else(|| malformed(text, "unclosed `<`"))?
                .trim();
            if inner.is_empty() {
                return Err(TagError::Empty);
            }
            if inner.chars().any(char::is_whitespace) {
                return Err(malformed(text, "incomplete tags name a lemma or a category, not both"));
            }
            let (head, feats) = match inner.split_once(':') {
                Some((h, f)) if f.contains(':') => {
                    return Err(malformed(text, format!("several feature groups in `{h}`")))
                }
                Some((h, f)) => (h, Some(FeatureSet::parse(f).map_err(|_| malformed(text, "empty or invalid feature group"))?)),
                None => (inner, None),
            };
            if head.is_empty() {
                return Err(malformed(text, "missing lemma or category"));
            }
            if head == "MOT" {
                return match feats {
                    None => Ok(IncompleteTag::AnyWord),
                    Some(_) => Err(malformed(text, "<MOT> takes no features")),
                };
            }
            let main = head.split(';').next().unwrap_or(head);
            if inventory.contains(main) {
                let mut subs = head.split(';').skip(1);
                let pattern = CategoryPattern {
                    main: main.to_string(),
                    subcats: subs.by_ref().map(str::to_string).collect(),
                };
                if pattern.subcats.iter().any(String::is_empty) {
                    return Err(malformed(text, "empty subcategory"));
                }
                return Ok(match feats {
                    None => IncompleteTag::CategoryOnly(pattern),
                    Some(f) => IncompleteTag::CategoryFeatures(pattern, f),
                });
            }
            if head.contains(';') {
                return Err(TagError::UnknownCategory(main.to_string()));
            }
            return Ok(match feats {
                None => IncompleteTag::LemmaOnly(head.to_string()),
                Some(f) => IncompleteTag::LemmaFeatures(head.to_string(), f),
            });
        }
        let mut chars = text.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if is_separator(c) {
                return Ok(IncompleteTag::SeparatorLiteral(c));
            }
        }
        if text.chars().any(|c| is_separator(c) || c.is_whitespace() || c == '<' || c == '>') {
            return Err(malformed(text, "a surface form is a single simple word"));
        }
        Ok(IncompleteTag::SurfaceForm(text.to_string()))
    }

    pub fn is_surface_or_separator(&self) -> bool {
        matches!(self, IncompleteTag::SurfaceForm(_) | IncompleteTag::SeparatorLiteral(_))
    }

    /// Sound syntactic check that every complete tag conforming to `self`
    /// also conforms to `weaker`. A `false` answer may be a missed implication.
    pub fn implies(&self, weaker: &IncompleteTag) -> bool {
        use IncompleteTag::*;
        if self == weaker {
            return true;
        }
        match (weaker, self) {
            (AnyWord, SurfaceForm(_)) => true,
            (LemmaOnly(a), LemmaOnly(b) | LemmaFeatures(b, _)) => a == b,
            (LemmaFeatures(a, fa), LemmaFeatures(b, fb)) => a == b && fa.is_subset(fb),
            (CategoryOnly(a), CategoryOnly(b) | CategoryFeatures(b, _)) => b.within(a),
            (CategoryFeatures(a, fa), CategoryFeatures(b, fb)) => b.within(a) && fa.is_subset(fb),
            _ => false,
        }
    }
}

impl fmt::Display for IncompleteTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncompleteTag::LemmaOnly(l) => write!(f, "<{l}>"),
            IncompleteTag::CategoryOnly(c) => write!(f, "<{c}>"),
            IncompleteTag::LemmaFeatures(l, fs) => write!(f, "<{l}:{fs}>"),
            IncompleteTag::CategoryFeatures(c, fs) => write!(f, "<{c}:{fs}>"),
            IncompleteTag::SurfaceForm(s) => f.write_str(s),
            IncompleteTag::AnyWord => f.write_str("<MOT>"),
            IncompleteTag::SeparatorLiteral(c) => write!(f, "{c}"),
        }
    }
}

/// Does the edge label satisfy every constraint of the pattern?
pub fn conforms(label: &EdgeLabel, pattern: &IncompleteTag) -> bool {
    let tag = match (label, pattern) {
        (EdgeLabel::Separator(c), IncompleteTag::SeparatorLiteral(p)) => return c == p,
        (EdgeLabel::Separator(_), _) | (_, IncompleteTag::SeparatorLiteral(_)) => return false,
        (EdgeLabel::Tag(t), _) => t,
    };
    match pattern {
        IncompleteTag::LemmaOnly(l) => tag.lemma == *l,
        IncompleteTag::CategoryOnly(c) => c.matches(&tag.category),
        IncompleteTag::LemmaFeatures(l, fs) => tag.lemma == *l && fs.is_subset(&tag.features),
        IncompleteTag::CategoryFeatures(c, fs) => c.matches(&tag.category) && fs.is_subset(&tag.features),
        IncompleteTag::SurfaceForm(s) => !tag.compound && tag.surface == *s,
        IncompleteTag::AnyWord => !tag.compound,
        IncompleteTag::SeparatorLiteral(_) => unreachable!(),
    }
}

/// An ordered run of edge labels describing a contiguous span of text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TagSequence {
    pub items: Vec<EdgeLabel>,
}

impl TagSequence {
    pub fn new(items: Vec<EdgeLabel>) -> Self {
        Self { items }
    }

    /// Same text with the same delimitation into simple and compound words.
    pub fn equivalent(&self, other: &TagSequence) -> bool {
        self.items.len() == other.items.len()
            && self.items.iter().zip(&other.items).all(|(a, b)| a.surface() == b.surface())
    }
}

impl fmt::Display for TagSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            item.fmt(f)?;
        }
        Ok(())
    }
}

/// Splits a tag-sequence line (`<ne XI> <faire V:P3s>-<il PRO:3ms>`) into
/// notation items: bracketed tags and single separator characters.
pub fn split_sequence_notation(line: &str) -> Result<Vec<String>, TagError> {
    let mut items = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c == '<' {
            let close = line[i..].find('>').ok_or_else(|| malformed(&line[i..], "unclosed `<`"))?;
            items.push(line[i..i + close + 1].to_string());
            while chars.peek().is_some_and(|&(j, _)| j <= i + close) {
                chars.next();
            }
        } else if is_separator(c) {
            items.push(c.to_string());
        } else {
            let mut end = line.len();
            while let Some(&(j, d)) = chars.peek() {
                if d.is_whitespace() || d == '<' || is_separator(d) {
                    end = j;
                    break;
                }
                chars.next();
            }
            items.push(line[i..end].to_string());
        }
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv() -> CategoryInventory {
        CategoryInventory::default()
    }

    fn tag(t: &str, surface: &str) -> EdgeLabel {
        EdgeLabel::Tag(CompleteTag::parse_with_surface(t, surface, &inv()).unwrap())
    }

    fn pat(t: &str) -> IncompleteTag {
        IncompleteTag::parse(t, &inv()).unwrap()
    }

    #[test]
    fn parses_complete_tags() {
        let t = CompleteTag::parse("<suivre V:P2s>", &inv()).unwrap();
        assert_eq!(t.lemma(), "suivre");
        assert_eq!(t.category().main, "V");
        assert_eq!(t.features().atoms(), &['P', '2', 's']);
        assert!(!t.is_compound());

        let t = CompleteTag::parse("<coup/fumant N;NA:ms>", &inv()).unwrap();
        assert_eq!(t.lemma(), "coup/fumant");
        assert_eq!(t.category().subcats, vec!["NA"]);
        assert_eq!(t.features().atoms(), &['m', 's']);
        assert!(t.is_compound());
        assert_eq!(t.surface(), "coup fumant");

        let t = CompleteTag::parse("<ne XI[+ Préd]>", &inv()).unwrap();
        assert_eq!(t.category().traits, vec!["Préd"]);
        assert_eq!(t.to_string(), "<ne XI[+Préd]>");
    }

    #[test]
    fn rejects_malformed_complete_tags() {
        assert!(matches!(CompleteTag::parse("<être V:>", &inv()), Err(TagError::Malformed { .. })));
        assert!(matches!(CompleteTag::parse("<être>", &inv()), Err(TagError::Malformed { .. })));
        assert!(matches!(CompleteTag::parse("<être ZZ>", &inv()), Err(TagError::UnknownCategory(_))));
        assert!(matches!(CompleteTag::parse("<suivre V:P1s:P2s>", &inv()), Err(TagError::Malformed { .. })));
        assert!(matches!(
            CompleteTag::parse("<x V:P12s>", &inv()),
            Err(TagError::DuplicateFeature { kind: "person", .. })
        ));
        assert!(matches!(CompleteTag::parse("suivre V", &inv()), Err(TagError::Malformed { .. })));
    }

    #[test]
    fn parses_incomplete_tags() {
        let v = CategoryPattern::new("V");
        assert_eq!(pat("<V:3s>"), IncompleteTag::CategoryFeatures(v.clone(), FeatureSet::parse("3s").unwrap()));
        assert_eq!(pat("<V>"), IncompleteTag::CategoryOnly(v));
        assert_eq!(pat("suis"), IncompleteTag::SurfaceForm("suis".into()));
        assert_eq!(pat("-"), IncompleteTag::SeparatorLiteral('-'));
        assert_eq!(pat("<MOT>"), IncompleteTag::AnyWord);
        assert_eq!(pat("<prendre>"), IncompleteTag::LemmaOnly("prendre".into()));
        assert_eq!(
            pat("<prendre:P3s>"),
            IncompleteTag::LemmaFeatures("prendre".into(), FeatureSet::parse("P3s").unwrap())
        );
        assert_eq!(pat("<coup/fumant>"), IncompleteTag::LemmaOnly("coup/fumant".into()));
        assert_eq!(IncompleteTag::parse("", &inv()), Err(TagError::Empty));
        assert!(IncompleteTag::parse("<V:>", &inv()).is_err());
        assert!(IncompleteTag::parse("<V:P:s>", &inv()).is_err());
        assert!(IncompleteTag::parse("fait-il", &inv()).is_err());
    }

    #[test]
    fn conformity_examples() {
        let suivre = tag("<suivre V:P2s>", "suis");
        let etre = tag("<être V:P1s>", "suis");
        assert!(conforms(&suivre, &pat("<suivre>")));
        assert!(conforms(&suivre, &pat("<V>")));
        assert!(conforms(&etre, &pat("<être>")));
        assert!(conforms(&etre, &pat("<V:P>")));
        assert!(!conforms(&suivre, &pat("<être>")));
        assert!(conforms(&etre, &pat("suis")));
        assert!(conforms(&tag("<suivre V:P1s>", "suis"), &pat("suis")));
        assert!(conforms(&suivre, &pat("suis")));
        assert!(!conforms(&suivre, &pat("suit")));

        let coup = tag("<coup/fumant N;NA:ms>", "coup fumant");
        assert!(!conforms(&coup, &pat("<MOT>")));
        assert!(conforms(&coup, &pat("<N>")));
        assert!(conforms(&coup, &pat("<N;NA>")));
        assert!(conforms(&coup, &pat("<coup/fumant:ms>")));
        assert!(!conforms(&coup, &pat("coup")));
        assert!(conforms(&suivre, &pat("<MOT>")));

        // subcategories and traits are invisible to a bare category pattern
        assert!(conforms(&tag("<ne XI[+Préd]>", "ne"), &pat("<XI>")));

        let hyphen = EdgeLabel::Separator('-');
        assert!(conforms(&hyphen, &pat("-")));
        assert!(!conforms(&hyphen, &pat("?")));
        assert!(!conforms(&hyphen, &pat("<MOT>")));
        assert!(!conforms(&suivre, &pat("-")));
    }

    #[test]
    fn equivalence_examples() {
        let seq = |items: &[(&str, &str)]| TagSequence::new(items.iter().map(|(t, s)| tag(t, s)).collect());
        let a = seq(&[("<superbe N:fs>", "superbe"), ("<gaulliste A:fs>", "gaulliste")]);
        let b = seq(&[("<superbe A:fs>", "superbe"), ("<gaulliste N:fs>", "gaulliste")]);
        assert!(a.equivalent(&b));
        let c = seq(&[("<pomme/de/terre N;NDN:fs>", "pomme de terre"), ("<cuire V:Kfs>", "cuite")]);
        let d = seq(&[("<pomme N:fs>", "pomme"), ("<de PREP>", "de"), ("<terre/cuite N;NA:fs>", "terre cuite")]);
        assert!(!c.equivalent(&d));
        assert!(c.equivalent(&c));
    }

    #[test]
    fn implication_criterion() {
        assert!(pat("<V:3s>").implies(&pat("<V>")));
        assert!(pat("<V>").implies(&pat("<V>")));
        assert!(!pat("<V>").implies(&pat("<V:3s>")));
        assert!(!pat("<PRO>").implies(&pat("<DET>")));
        assert!(pat("lui").implies(&pat("<MOT>")));
        assert!(!pat("<N>").implies(&pat("<MOT>")));
        assert!(pat("<prendre:P3s>").implies(&pat("<prendre:s>")));
    }

    #[test]
    fn token_counts() {
        assert_eq!(surface_token_count("fait"), 1);
        assert_eq!(surface_token_count("sur le moment"), 3);
        assert_eq!(surface_token_count("c'est-à-dire"), 7);
        assert_eq!(surface_token_count("-"), 1);
    }

    #[test]
    fn splits_sequence_lines() {
        let items = split_sequence_notation("<ne XI[+ Préd]> <faire V:P3s>-<il PRO:3ms> ?").unwrap();
        assert_eq!(items, vec!["<ne XI[+ Préd]>", "<faire V:P3s>", "-", "<il PRO:3ms>", "?"]);
    }
}
