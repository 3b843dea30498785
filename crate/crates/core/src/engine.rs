//! Grammar application.
//!
//! A grammar accepts a tagging of a sentence when the tagging splits into
//! consecutive blocks of two kinds:
//!
//! * a *matched* block follows an initial-to-final transducer path: each tag
//!   conforms to the transition's output, and the lattice holds, over the
//!   same span, a tag conforming to the transition's input;
//! * a *free* block is one tag whose start state is not [matchable]: no
//!   tagging of the text starting there fits any input sequence.
//!
//! [`filter`] keeps exactly the accepted paths of a lattice by running the
//! lattice in product with this block structure. [`filter_oracle`] does the
//! same by brute-force enumeration and exists to cross-check it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::grammar::{GrammarClass, GrammarState, LocalGrammar, Transition};
use crate::lattice::{Edge, Lattice, LatticeError, Path, StateId};
use crate::lexicon::{Lexicon, LexiconError};
use crate::tag_algebra::{conforms, split_sequence_notation, EdgeLabel, IncompleteTag};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("the edge sequence is not a path of the lattice")]
    NotAPath,
    #[error("grammar `{name}` is {actual:?}, this rule needs {required}")]
    WrongClass { name: String, actual: GrammarClass, required: &'static str },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// For each lattice state: does some tagging of the text starting there fit
/// an input sequence of the grammar?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchableIndex(Vec<bool>);

impl MatchableIndex {
    pub fn get(&self, state: StateId) -> bool {
        self.0[state]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

pub fn matchable(lattice: &Lattice, grammar: &LocalGrammar) -> MatchableIndex {
    let n = lattice.num_states();
    let gs = grammar.num_states();
    // reach[q][s]: an input-conforming walk from q completes the grammar from s
    let mut reach = vec![vec![false; gs]; n];
    for q in (0..n).rev() {
        for s in 0..gs {
            reach[q][s] = lattice.outgoing(q).iter().any(|e| {
                grammar.outgoing(s).iter().any(|t| {
                    conforms(&e.label, &t.input) && (grammar.is_final(t.to) || reach[e.to][t.to])
                })
            });
        }
    }
    MatchableIndex(reach.iter().map(|row| row[grammar.initial()]).collect())
}

/// A block of a decomposition, in path edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Block {
    /// Edges `start..end` follow the listed grammar transitions.
    Matched { start: usize, end: usize, transitions: Vec<usize> },
    /// A single edge at an unmatchable state.
    Free { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
}

impl Decomposition {
    pub fn matched_count(&self) -> usize {
        self.blocks.iter().filter(|b| matches!(b, Block::Matched { .. })).count()
    }

    pub fn free_count(&self) -> usize {
        self.blocks.iter().filter(|b| matches!(b, Block::Free { .. })).count()
    }

    /// Block sizes in order, e.g. `[1, 1, 7, 1, 1]`.
    pub fn shape(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Matched { start, end, .. } => end - start,
                Block::Free { .. } => 1,
            })
            .collect()
    }
}

/// Back-pointer of a search layer: previous mode, transition used, and
/// whether a matched block closed on this edge.
type Parent = (Mode, Option<usize>, bool);

/// A grammar bound to the lattice it is applied to, with the derived data
/// every acceptance query needs.
pub struct Application<'a> {
    grammar: &'a LocalGrammar,
    lattice: &'a Lattice,
    matchable: MatchableIndex,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Mode {
    Free,
    In(GrammarState),
}

impl<'a> Application<'a> {
    pub fn new(grammar: &'a LocalGrammar, lattice: &'a Lattice) -> Self {
        Self { grammar, lattice, matchable: matchable(lattice, grammar) }
    }

    pub fn matchable(&self) -> &MatchableIndex {
        &self.matchable
    }

    /// The edge may stand at this transducer step: it conforms to the
    /// output, and a tag over the same span conforms to the input.
    fn fits(&self, edge: &Edge, t: &Transition) -> bool {
        conforms(&edge.label, &t.output)
            && self.lattice.parallel(edge.from, edge.to).iter().any(|w| conforms(&w.label, &t.input))
    }

    fn step(&self, mode: Mode) -> GrammarState {
        match mode {
            Mode::Free => self.grammar.initial(),
            Mode::In(s) => s,
        }
    }

    /// Successor modes after consuming `edge` from `mode`, with the grammar
    /// transition used (None for a free block).
    fn successors(&self, mode: Mode, edge: &Edge) -> Vec<(Mode, Option<usize>)> {
        let mut out = Vec::new();
        if mode == Mode::Free && !self.matchable.get(edge.from) {
            out.push((Mode::Free, None));
        }
        let s = self.step(mode);
        let base = self.grammar.transitions().partition_point(|t| t.from < s);
        for (k, t) in self.grammar.outgoing(s).iter().enumerate() {
            if self.fits(edge, t) {
                out.push((Mode::In(t.to), Some(base + k)));
                if self.grammar.is_final(t.to) {
                    out.push((Mode::Free, Some(base + k)));
                }
            }
        }
        out
    }

    pub fn accepts(&self, path: &Path) -> Result<bool, EngineError> {
        Ok(self.decompose(path)?.is_some())
    }

    /// A witness decomposition of an accepted path, or `None` if rejected.
    pub fn decompose(&self, path: &Path) -> Result<Option<Decomposition>, EngineError> {
        if !self.lattice.is_path(path) {
            return Err(EngineError::NotAPath);
        }
        let m = path.len();
        let mut layers: Vec<BTreeMap<Mode, Parent>> = vec![BTreeMap::new(); m + 1];
        layers[0].insert(Mode::Free, (Mode::Free, None, false));
        for (i, edge) in path.edges.iter().enumerate() {
            let current: Vec<Mode> = layers[i].keys().copied().collect();
            for mode in current {
                for (next, t) in self.successors(mode, edge) {
                    let closes = next == Mode::Free && t.is_some();
                    layers[i + 1].entry(next).or_insert((mode, t, closes));
                }
            }
        }
        if !layers[m].contains_key(&Mode::Free) {
            return Ok(None);
        }
        let mut blocks = Vec::new();
        let mut mode = Mode::Free;
        let mut open: Option<(usize, Vec<usize>)> = None;
        for i in (1..=m).rev() {
            let (prev, t, closes) = layers[i][&mode];
            match t {
                None => blocks.push(Block::Free { index: i - 1 }),
                Some(t) => {
                    if closes {
                        open = Some((i, Vec::new()));
                    }
                    let (end, ts) = open.as_mut().expect("a matched edge lies inside a block");
                    ts.push(t);
                    if prev == Mode::Free {
                        let mut ts = std::mem::take(ts);
                        ts.reverse();
                        blocks.push(Block::Matched { start: i - 1, end: *end, transitions: ts });
                        open = None;
                    }
                }
            }
            mode = prev;
        }
        blocks.reverse();
        Ok(Some(Decomposition { blocks }))
    }

    /// Where acceptance breaks down: the furthest block boundary reachable
    /// from the start, and the longest grammar-conforming run attempted
    /// from there (including the edge that fails).
    fn diagnose(&self, path: &Path) -> (usize, usize) {
        let m = path.len();
        let mut reached = vec![false; m + 1];
        let mut layer: Vec<Mode> = vec![Mode::Free];
        reached[0] = true;
        let mut furthest = 0;
        for (i, edge) in path.edges.iter().enumerate() {
            let mut next: Vec<Mode> = Vec::new();
            for &mode in &layer {
                for (succ, _) in self.successors(mode, edge) {
                    if !next.contains(&succ) {
                        next.push(succ);
                    }
                }
            }
            if next.contains(&Mode::Free) {
                furthest = i + 1;
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        let mut depth = 0;
        let mut frontier = vec![self.grammar.initial()];
        while furthest + depth < m && !frontier.is_empty() {
            let edge = &path.edges[furthest + depth];
            let next: Vec<GrammarState> = frontier
                .iter()
                .flat_map(|&s| self.grammar.outgoing(s).iter().filter(|t| self.fits(edge, t)).map(|t| t.to))
                .collect();
            if next.is_empty() {
                break;
            }
            depth += 1;
            frontier = next;
        }
        (furthest, (furthest + depth + 1).min(m))
    }

    /// The accepted paths, as a deterministic minimal lattice.
    pub fn filter(&self) -> Filtered {
        let l = self.lattice;
        if l.is_empty_language() {
            return Filtered { lattice: Lattice::empty_language(), emptied: true };
        }
        let mut ids: HashMap<(StateId, Mode), usize> = HashMap::new();
        let mut nodes: Vec<(StateId, Mode)> = Vec::new();
        let mut edges = Vec::new();
        let mut intern = |key: (StateId, Mode), nodes: &mut Vec<(StateId, Mode)>| {
            *ids.entry(key).or_insert_with(|| {
                nodes.push(key);
                nodes.len() - 1
            })
        };
        let start = intern((l.initial(), Mode::Free), &mut nodes);
        let mut cursor = 0;
        while cursor < nodes.len() {
            let (q, mode) = nodes[cursor];
            for edge in l.outgoing(q) {
                for (next, _) in self.successors(mode, edge) {
                    let target = intern((edge.to, next), &mut nodes);
                    edges.push(Edge { from: cursor, to: target, label: edge.label.clone() });
                }
            }
            cursor += 1;
        }
        let accept = intern((l.final_state(), Mode::Free), &mut nodes);
        let product = Lattice::from_unordered(nodes.len(), start, accept, edges)
            .expect("the product with an acyclic lattice is acyclic");
        let lattice = product.minimize();
        let emptied = lattice.is_empty_language();
        Filtered { lattice, emptied }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtered {
    pub lattice: Lattice,
    /// Set when no path survived.
    pub emptied: bool,
}

pub fn accepts(grammar: &LocalGrammar, path: &Path, lattice: &Lattice) -> Result<bool, EngineError> {
    Application::new(grammar, lattice).accepts(path)
}

pub fn decompose(grammar: &LocalGrammar, path: &Path, lattice: &Lattice) -> Result<Option<Decomposition>, EngineError> {
    Application::new(grammar, lattice).decompose(path)
}

pub fn filter(grammar: &LocalGrammar, lattice: &Lattice) -> Filtered {
    Application::new(grammar, lattice).filter()
}

/// Applies each grammar in turn, re-deriving matchable states and witness
/// edges from the previous result.
pub fn filter_sequential(grammars: &[LocalGrammar], lattice: &Lattice) -> Filtered {
    let mut current = lattice.clone();
    for g in grammars {
        current = filter(g, &current).lattice;
    }
    let emptied = current.is_empty_language();
    Filtered { lattice: current, emptied }
}

/// Enumerates every path, keeps the accepted ones and rebuilds a lattice
/// from them as a prefix tree with one shared final state.
pub fn filter_oracle(grammar: &LocalGrammar, lattice: &Lattice, limit: usize) -> Result<Lattice, EngineError> {
    let paths = lattice.enumerate_paths(limit);
    if paths.overflow {
        return Err(LatticeError::Overflow(limit).into());
    }
    let app = Application::new(grammar, lattice);
    let mut survivors = Vec::new();
    for p in &paths.paths {
        if app.accepts(p)? {
            survivors.push(p.labels());
        }
    }
    Ok(prefix_tree(&survivors))
}

fn prefix_tree(sequences: &[Vec<EdgeLabel>]) -> Lattice {
    if sequences.is_empty() {
        return Lattice::empty_language();
    }
    const ROOT: usize = 0;
    const FINAL: usize = 1;
    let mut children: BTreeMap<(usize, EdgeLabel), usize> = BTreeMap::new();
    let mut next = 2;
    for seq in sequences {
        let mut node = ROOT;
        for (k, label) in seq.iter().enumerate() {
            let last = k + 1 == seq.len();
            node = *children.entry((node, label.clone())).or_insert_with(|| {
                if last {
                    FINAL
                } else {
                    next += 1;
                    next - 1
                }
            });
        }
    }
    if sequences.iter().any(Vec::is_empty) {
        return Lattice::single_state();
    }
    let edges = children.into_iter().map(|((from, label), to)| Edge { from, to, label }).collect();
    Lattice::from_unordered(next, ROOT, FINAL, edges).expect("a prefix tree is acyclic")
}

/// The rule for grammars whose inputs are all simple forms: a matched block
/// conforms to an input and its output sequence; a free tag starts where the
/// text itself begins no input sequence.
pub fn accepts_case_a(grammar: &LocalGrammar, path: &Path, lattice: &Lattice) -> Result<bool, EngineError> {
    if grammar.classify() != GrammarClass::SimpleInputs {
        return Err(EngineError::WrongClass {
            name: grammar.name().to_string(),
            actual: grammar.classify(),
            required: "simple-form inputs",
        });
    }
    let states = path.states(lattice.initial());
    let free: Vec<bool> = states.iter().map(|&q| !text_begins_input(grammar, lattice, q, grammar.initial())).collect();
    partition(grammar, path, &free)
}

/// The rule for grammars whose outputs imply their inputs: a matched block
/// conforms to an input and its output sequence; a free tag starts where no
/// tagging of the text fits an input sequence.
pub fn accepts_case_b(grammar: &LocalGrammar, path: &Path, lattice: &Lattice) -> Result<bool, EngineError> {
    if grammar.classify() == GrammarClass::General {
        return Err(EngineError::WrongClass {
            name: grammar.name().to_string(),
            actual: GrammarClass::General,
            required: "outputs implying inputs",
        });
    }
    let index = matchable(lattice, grammar);
    let states = path.states(lattice.initial());
    let free: Vec<bool> = states.iter().map(|&q| !index.get(q)).collect();
    partition(grammar, path, &free)
}

fn partition(grammar: &LocalGrammar, path: &Path, free: &[bool]) -> Result<bool, EngineError> {
    let m = path.len();
    // can[i]: the suffix from edge i splits into valid blocks
    let mut can = vec![false; m + 1];
    can[m] = true;
    for i in (0..m).rev() {
        if free[i] && can[i + 1] {
            can[i] = true;
            continue;
        }
        can[i] = block_ends(grammar, &path.edges[i..]).into_iter().any(|len| can[i + len]);
    }
    Ok(can[0])
}

/// Lengths of the blocks starting at the first edge that conform to both the
/// input and the output of some initial-to-final grammar path.
fn block_ends(grammar: &LocalGrammar, edges: &[Edge]) -> Vec<usize> {
    let mut ends = Vec::new();
    let mut frontier = vec![grammar.initial()];
    for (k, edge) in edges.iter().enumerate() {
        let mut next = Vec::new();
        for s in frontier {
            for t in grammar.outgoing(s) {
                if conforms(&edge.label, &t.input) && conforms(&edge.label, &t.output) && !next.contains(&t.to) {
                    next.push(t.to);
                }
            }
        }
        if next.iter().any(|&s| grammar.is_final(s)) {
            ends.push(k + 1);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    ends
}

/// Does the text starting at `q` spell out an input sequence, reading one
/// simple word or separator per step?
fn text_begins_input(grammar: &LocalGrammar, lattice: &Lattice, q: StateId, s: GrammarState) -> bool {
    grammar.outgoing(s).iter().any(|t| {
        lattice.outgoing(q).iter().any(|e| {
            let spelled = match (&t.input, &e.label) {
                (IncompleteTag::SurfaceForm(form), EdgeLabel::Tag(tag)) => !tag.is_compound() && tag.surface() == form,
                (IncompleteTag::SeparatorLiteral(c), EdgeLabel::Separator(d)) => c == d,
                _ => false,
            };
            spelled && (grammar.is_final(t.to) || text_begins_input(grammar, lattice, e.to, t.to))
        })
    })
}

/// One sentence of a silence-test corpus: text plus its gold tagging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub id: String,
    pub text: String,
    /// Tag notations and separator characters, in order.
    pub gold: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("corpus line {line}: {reason}")]
pub struct CorpusFormatError {
    pub line: usize,
    pub reason: String,
}

/// Reads alternating `T:` text and `G:` gold lines. Blank lines and `#`
/// comments are skipped. Items are numbered from 1.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusItem>, CorpusFormatError> {
    let mut items = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(t) = line.strip_prefix("T:") {
            if pending.is_some() {
                return Err(CorpusFormatError { line: i + 1, reason: "expected a G: line".into() });
            }
            pending = Some((i + 1, t.trim().to_string()));
        } else if let Some(g) = line.strip_prefix("G:") {
            let (_, text) = pending
                .take()
                .ok_or_else(|| CorpusFormatError { line: i + 1, reason: "G: line without T: line".into() })?;
            let gold = split_sequence_notation(g)
                .map_err(|e| CorpusFormatError { line: i + 1, reason: e.to_string() })?;
            items.push(CorpusItem { id: (items.len() + 1).to_string(), text, gold });
        } else {
            return Err(CorpusFormatError { line: i + 1, reason: "lines start with T: or G:".into() });
        }
    }
    if let Some((line, _)) = pending {
        return Err(CorpusFormatError { line, reason: "T: line without G: line".into() });
    }
    Ok(items)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub sentence: String,
    pub grammar: String,
    /// Path edge indices `start..end` around the failure.
    pub span: (usize, usize),
    /// Surfaces over the span.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusProblem {
    pub sentence: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SilenceReport {
    pub violations: Vec<Violation>,
    pub corpus_errors: Vec<CorpusProblem>,
}

impl SilenceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SilenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "SILENCE {} {}-{} {}", v.sentence, v.span.0, v.span.1, v.grammar)?;
        }
        for c in &self.corpus_errors {
            writeln!(f, "CORPUS-ERROR {} {}", c.sentence, c.reason)?;
        }
        Ok(())
    }
}

/// Checks that no gold tagging is rejected. In sequential mode each grammar
/// sees the lattice left by the previous ones.
pub fn silence_check(grammars: &[LocalGrammar], sequential: bool, corpus: &[CorpusItem], lexicon: &Lexicon) -> SilenceReport {
    let mut report = SilenceReport::default();
    let union;
    let stages: &[LocalGrammar] = if sequential || grammars.len() <= 1 {
        grammars
    } else {
        union = LocalGrammar::union(grammars).expect("non-empty grammar list");
        std::slice::from_ref(&union)
    };
    for item in corpus {
        let problem = |reason: String| CorpusProblem { sentence: item.id.clone(), reason };
        let lattice = match lexicon.tag_text(&item.text) {
            Ok(l) => l,
            Err(e @ LexiconError::UnknownWord { .. }) | Err(e @ LexiconError::Malformed { .. }) => {
                report.corpus_errors.push(problem(e.to_string()));
                continue;
            }
        };
        let Some(gold) = lattice.find_path(&item.gold) else {
            report.corpus_errors.push(problem("gold tagging is not a path of the initial lattice".into()));
            continue;
        };
        let mut current = lattice;
        for g in stages {
            let app = Application::new(g, &current);
            let Some(path) = current.find_path(&item.gold) else { break };
            if !app.accepts(&path).expect("path was found in this lattice") {
                let (start, end) = app.diagnose(&path);
                let text = gold.edges[start..end].iter().map(|e| e.label.surface()).collect::<Vec<_>>().join(" ");
                report.violations.push(Violation { sentence: item.id.clone(), grammar: g.name().to_string(), span: (start, end), text });
                break;
            }
            current = app.filter().lattice;
        }
    }
    report
}
