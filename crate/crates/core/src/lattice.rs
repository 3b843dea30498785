//! Acyclic tag lattices.
//!
//! A [`Lattice`] is a finite acyclic automaton whose edges carry complete
//! tags or separators. States are numbered topologically (every edge goes
//! from a lower to a higher state number). Each state also sits at a fixed
//! token offset from the initial state, so edges between the same pair of
//! states always span the same stretch of text.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tag_algebra::{CategoryInventory, EdgeLabel, TagError};

pub type StateId = usize;

pub const DEFAULT_PATH_LIMIT: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("edge {from}->{to} does not go forward")]
    NotForward { from: StateId, to: StateId },
    #[error("state {0} out of range")]
    StateOutOfRange(StateId),
    #[error("the lattice has a cycle")]
    Cyclic,
    #[error("state {0} is reached at two different token offsets")]
    InconsistentOffsets(StateId),
    #[error("more than {0} paths")]
    Overflow(usize),
    #[error("bad lattice document: {0}")]
    Document(String),
    #[error(transparent)]
    Tag(#[from] TagError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: StateId,
    pub to: StateId,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    num_states: usize,
    initial: StateId,
    final_state: StateId,
    /// Sorted by (from, to, label), no duplicates.
    edges: Vec<Edge>,
}

/// An initial-to-final walk.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub edges: Vec<Edge>,
}

impl Path {
    pub fn labels(&self) -> Vec<EdgeLabel> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// State sequence q0..qm.
    pub fn states(&self, initial: StateId) -> Vec<StateId> {
        let mut states = vec![initial];
        states.extend(self.edges.iter().map(|e| e.to));
        states
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", e.label)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paths {
    pub paths: Vec<Path>,
    /// Set when enumeration stopped at the limit.
    pub overflow: bool,
}

impl Lattice {
    /// Builds a lattice from topologically numbered states.
    pub fn new(
        num_states: usize,
        initial: StateId,
        final_state: StateId,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, LatticeError> {
        if num_states == 0 {
            return Ok(Self::empty_language());
        }
        for s in [initial, final_state] {
            if s >= num_states {
                return Err(LatticeError::StateOutOfRange(s));
            }
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            if e.to >= num_states {
                return Err(LatticeError::StateOutOfRange(e.to));
            }
            if e.from >= e.to {
                return Err(LatticeError::NotForward { from: e.from, to: e.to });
            }
        }
        edges.sort();
        edges.dedup();
        let lattice = Self { num_states, initial, final_state, edges };
        lattice.offsets()?;
        Ok(lattice)
    }

    /// Builds a lattice from arbitrarily numbered states, renumbering them
    /// topologically.
    pub fn from_unordered(
        num_states: usize,
        initial: StateId,
        final_state: StateId,
        edges: Vec<Edge>,
    ) -> Result<Self, LatticeError> {
        let mut indegree = vec![0usize; num_states];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); num_states];
        for e in &edges {
            if e.from >= num_states || e.to >= num_states {
                return Err(LatticeError::StateOutOfRange(e.from.max(e.to)));
            }
            indegree[e.to] += 1;
            out[e.from].push(e.to);
        }
        // Kahn with a min-heap keeps the numbering stable.
        let mut ready: BTreeSet<usize> = (0..num_states).filter(|&s| indegree[s] == 0).collect();
        let mut order = Vec::with_capacity(num_states);
        while let Some(s) = ready.pop_first() {
            order.push(s);
            for &t in &out[s] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        if order.len() != num_states {
            return Err(LatticeError::Cyclic);
        }
        let mut rank = vec![0; num_states];
        for (i, &s) in order.iter().enumerate() {
            rank[s] = i;
        }
        let edges = edges
            .into_iter()
            .map(|e| Edge { from: rank[e.from], to: rank[e.to], label: e.label });
        if num_states == 0 {
            return Ok(Self::empty_language());
        }
        Self::new(num_states, rank[initial], rank[final_state], edges)
    }

    /// The automaton with no states, recognizing nothing.
    pub fn empty_language() -> Self {
        Self { num_states: 0, initial: 0, final_state: 0, edges: Vec::new() }
    }

    /// One state, no edges: the lattice of an empty sentence.
    pub fn single_state() -> Self {
        Self { num_states: 1, initial: 0, final_state: 0, edges: Vec::new() }
    }

    pub fn is_empty_language(&self) -> bool {
        self.num_states == 0
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn outgoing(&self, state: StateId) -> &[Edge] {
        let lo = self.edges.partition_point(|e| e.from < state);
        let hi = self.edges.partition_point(|e| e.from <= state);
        &self.edges[lo..hi]
    }

    /// All edges sharing the given source and target.
    pub fn parallel(&self, from: StateId, to: StateId) -> &[Edge] {
        let out = self.outgoing(from);
        let lo = out.partition_point(|e| e.to < to);
        let hi = out.partition_point(|e| e.to <= to);
        &out[lo..hi]
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.edges.binary_search(edge).is_ok()
    }

    /// Token offset of every state reachable from the initial state.
    pub fn offsets(&self) -> Result<Vec<Option<usize>>, LatticeError> {
        let mut offset = vec![None; self.num_states];
        if self.num_states == 0 {
            return Ok(offset);
        }
        offset[self.initial] = Some(0);
        for e in &self.edges {
            if let Some(o) = offset[e.from] {
                let next = o + e.label.token_len();
                match offset[e.to] {
                    None => offset[e.to] = Some(next),
                    Some(existing) if existing != next => {
                        return Err(LatticeError::InconsistentOffsets(e.to))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(offset)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states];
        if self.num_states == 0 {
            return seen;
        }
        seen[self.initial] = true;
        for e in &self.edges {
            if seen[e.from] {
                seen[e.to] = true;
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states];
        if self.num_states == 0 {
            return seen;
        }
        seen[self.final_state] = true;
        for e in self.edges.iter().rev() {
            if seen[e.to] {
                seen[e.from] = true;
            }
        }
        seen
    }

    /// Is the edge sequence an initial-to-final walk of this lattice?
    pub fn is_path(&self, path: &Path) -> bool {
        if self.is_empty_language() {
            return false;
        }
        let mut at = self.initial;
        for e in &path.edges {
            if e.from != at || !self.contains_edge(e) {
                return false;
            }
            at = e.to;
        }
        at == self.final_state
    }

    /// Number of initial-to-final paths, saturating.
    pub fn count_paths(&self) -> u128 {
        if self.num_states == 0 {
            return 0;
        }
        let mut count = vec![0u128; self.num_states];
        count[self.final_state] = 1;
        for e in self.edges.iter().rev() {
            count[e.from] = count[e.from].saturating_add(count[e.to]);
        }
        count[self.initial]
    }

    /// Paths in lexicographic edge order, stopping after `limit`.
    pub fn enumerate_paths(&self, limit: usize) -> Paths {
        let mut out = Paths { paths: Vec::new(), overflow: false };
        if self.num_states == 0 || limit == 0 {
            out.overflow = limit == 0 && self.num_states > 0;
            return out;
        }
        let co = self.coreachable();
        let mut stack: Vec<Edge> = Vec::new();
        self.walk(self.initial, &co, &mut stack, limit, &mut out);
        out
    }

    fn walk(&self, state: StateId, co: &[bool], stack: &mut Vec<Edge>, limit: usize, out: &mut Paths) {
        if out.overflow {
            return;
        }
        if state == self.final_state {
            if out.paths.len() == limit {
                out.overflow = true;
                return;
            }
            out.paths.push(Path { edges: stack.clone() });
        }
        for e in self.outgoing(state) {
            if !co[e.to] {
                continue;
            }
            stack.push(e.clone());
            self.walk(e.to, co, stack, limit, out);
            stack.pop();
            if out.overflow {
                return;
            }
        }
    }

    /// Set of label sequences, failing when there are more than `limit`.
    pub fn language(&self, limit: usize) -> Result<BTreeSet<Vec<EdgeLabel>>, LatticeError> {
        let paths = self.enumerate_paths(limit);
        if paths.overflow {
            return Err(LatticeError::Overflow(limit));
        }
        Ok(paths.paths.iter().map(Path::labels).collect())
    }

    /// Drops every state and edge that lies on no initial-to-final path.
    pub fn trim(&self) -> Lattice {
        let fwd = self.reachable();
        let bwd = self.coreachable();
        let live: Vec<bool> = fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect();
        if self.num_states == 0 || !live[self.initial] {
            return Self::empty_language();
        }
        let mut index = vec![usize::MAX; self.num_states];
        let mut n = 0;
        for s in 0..self.num_states {
            if live[s] {
                index[s] = n;
                n += 1;
            }
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| live[e.from] && live[e.to])
            .map(|e| Edge { from: index[e.from], to: index[e.to], label: e.label.clone() })
            .collect();
        Self { num_states: n, initial: index[self.initial], final_state: index[self.final_state], edges }
    }

    pub fn is_trim(&self) -> bool {
        let fwd = self.reachable();
        let bwd = self.coreachable();
        self.num_states == 0 || fwd.iter().zip(&bwd).all(|(a, b)| *a && *b)
    }

    pub fn is_deterministic(&self) -> bool {
        self.edges.windows(2).all(|w| !(w[0].from == w[1].from && w[0].label == w[1].label))
    }

    /// Deterministic minimal automaton for the same set of label sequences.
    pub fn minimize(&self) -> Lattice {
        let trimmed = self.trim();
        if trimmed.is_empty_language() {
            return trimmed;
        }
        let dfa = trimmed.determinize();
        dfa.merge_equivalent()
    }

    /// Subset construction; subsets of one lattice state set. Labels are
    /// opaque symbols.
    fn determinize(&self) -> Lattice {
        let start = vec![self.initial];
        let mut ids: BTreeMap<Vec<StateId>, StateId> = BTreeMap::new();
        let mut queue = vec![start.clone()];
        ids.insert(start, 0);
        let mut edges = Vec::new();
        let mut finals = Vec::new();
        while let Some(set) = queue.pop() {
            let id = ids[&set];
            if set.contains(&self.final_state) {
                finals.push(id);
            }
            let mut by_label: BTreeMap<&EdgeLabel, BTreeSet<StateId>> = BTreeMap::new();
            for &s in &set {
                for e in self.outgoing(s) {
                    by_label.entry(&e.label).or_default().insert(e.to);
                }
            }
            for (label, targets) in by_label {
                let targets: Vec<StateId> = targets.into_iter().collect();
                let next = ids.len();
                let tid = *ids.entry(targets.clone()).or_insert_with(|| {
                    queue.push(targets);
                    next
                });
                edges.push(Edge { from: id, to: tid, label: label.clone() });
            }
        }
        // Offsets are consistent, so no label sequence is a strict prefix of
        // another accepted one and the final subset is a single sink.
        debug_assert_eq!(finals.len(), 1);
        Lattice::from_unordered(ids.len(), 0, finals[0], edges).expect("subsets of an acyclic lattice are acyclic")
    }

    /// Merges states with identical right languages, bottom-up over a
    /// deterministic acyclic automaton.
    fn merge_equivalent(&self) -> Lattice {
        type Signature = (bool, Vec<(EdgeLabel, usize)>);
        let mut class = vec![0usize; self.num_states];
        let mut registry: HashMap<Signature, usize> = HashMap::new();
        for s in (0..self.num_states).rev() {
            let sig: Signature = (
                s == self.final_state,
                self.outgoing(s).iter().map(|e| (e.label.clone(), class[e.to])).collect(),
            );
            let next = registry.len();
            class[s] = *registry.entry(sig).or_insert(next);
        }
        let mut edges = BTreeSet::new();
        for e in &self.edges {
            edges.insert(Edge { from: class[e.from], to: class[e.to], label: e.label.clone() });
        }
        Lattice::from_unordered(registry.len(), class[self.initial], class[self.final_state], edges.into_iter().collect())
            .expect("quotient of an acyclic automaton is acyclic")
    }

    /// Structural equality of the recognized label-sequence sets, by
    /// enumeration under `limit`.
    pub fn language_equal(&self, other: &Lattice, limit: usize) -> Result<bool, LatticeError> {
        Ok(self.language(limit)? == other.language(limit)?)
    }

    /// Finds the path whose labels print as the given notation items
    /// (complete tags or separator characters).
    pub fn find_path(&self, items: &[String]) -> Option<Path> {
        if self.num_states == 0 {
            return None;
        }
        let mut stack = Vec::new();
        if self.find_from(self.initial, items, &mut stack) {
            Some(Path { edges: stack })
        } else {
            None
        }
    }

    fn find_from(&self, state: StateId, items: &[String], stack: &mut Vec<Edge>) -> bool {
        let Some((head, rest)) = items.split_first() else {
            return state == self.final_state;
        };
        let wanted = normalize_notation(head);
        for e in self.outgoing(state) {
            if e.label.to_string() == wanted {
                stack.push(e.clone());
                if self.find_from(e.to, rest, stack) {
                    return true;
                }
                stack.pop();
            }
        }
        false
    }

    /// Graphviz rendering; one edge statement per transition.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=LR;\n");
        if self.num_states > 0 {
            let _ = writeln!(s, "  node [shape=circle];");
            let _ = writeln!(s, "  {} [shape=doublecircle];", self.final_state);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", e.from, e.to, dot_escape(&e.label.to_string()));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        let doc = LatticeDoc {
            states: self.num_states,
            initial: self.initial,
            r#final: self.final_state,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc { from: e.from, to: e.to, surface: e.label.surface(), tag: e.label.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("lattice documents always serialize")
    }

    pub fn from_json(text: &str, inventory: &CategoryInventory) -> Result<Self, LatticeError> {
        let doc: LatticeDoc = serde_json::from_str(text).map_err(|e| LatticeError::Document(e.to_string()))?;
        let edges = doc
            .edges
            .iter()
            .map(|e| Ok(Edge { from: e.from, to: e.to, label: EdgeLabel::parse(&e.tag, &e.surface, inventory)? }))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        if doc.states == 0 {
            return Ok(Self::empty_language());
        }
        if doc.initial >= doc.states || doc.r#final >= doc.states {
            return Err(LatticeError::StateOutOfRange(doc.initial.max(doc.r#final)));
        }
        Self::from_unordered(doc.states, doc.initial, doc.r#final, edges)
    }

    /// Readable listing of the alternatives: a single tag per line where there
    /// is no choice, `(a + b)` where several tags share a span, and a
    /// bracketed `+` block where a compound competes with a run of simple
    /// words.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        if self.num_states == 0 || self.edges.is_empty() {
            return out;
        }
        let edges: Vec<&Edge> = self.trim_refs();
        let offsets = self.offsets().unwrap_or_default();
        let order = |s: StateId| (offsets.get(s).copied().flatten().unwrap_or(0), s);
        render_region(&edges, self.initial, self.final_state, &order, &mut out);
        out
    }

    fn trim_refs(&self) -> Vec<&Edge> {
        let fwd = self.reachable();
        let bwd = self.coreachable();
        self.edges.iter().filter(|e| fwd[e.from] && bwd[e.to]).collect()
    }
}

fn normalize_notation(item: &str) -> String {
    // `[+ Préd]` and `[+Préd]` denote the same trait
    item.replace("[+ ", "[+")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn render_region(
    edges: &[&Edge],
    from: StateId,
    to: StateId,
    order: &dyn Fn(StateId) -> (usize, StateId),
    out: &mut String,
) {
    // Cut states: visited by every path through the region.
    let mut inner: BTreeSet<(usize, StateId)> = BTreeSet::new();
    for e in edges {
        for s in [e.from, e.to] {
            if s != from && s != to {
                inner.insert(order(s));
            }
        }
    }
    let cuts: Vec<StateId> = inner
        .iter()
        .filter(|&&(_, s)| {
            let k = order(s);
            !edges.iter().any(|e| order(e.from) < k && k < order(e.to))
        })
        .map(|&(_, s)| s)
        .collect();
    let mut bounds = vec![from];
    bounds.extend(cuts);
    bounds.push(to);
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ka, kb) = (order(a), order(b));
        let segment: Vec<&Edge> =
            edges.iter().copied().filter(|e| order(e.from) >= ka && order(e.to) <= kb).collect();
        let direct: Vec<&Edge> = segment.iter().copied().filter(|e| e.from == a && e.to == b).collect();
        let rest: Vec<&Edge> = segment.iter().copied().filter(|e| !(e.from == a && e.to == b)).collect();
        let rest = trim_between(&rest, a, b);
        if rest.is_empty() {
            let _ = writeln!(out, "{}", group(&direct));
        } else if direct.is_empty() && has_cut(&rest, a, b, order) {
            render_region(&rest, a, b, order, out);
        } else {
            out.push_str("(\n");
            for g in delaf_groups(&direct) {
                let _ = writeln!(out, "{g}\n+");
            }
            if has_cut(&rest, a, b, order) {
                render_region(&rest, a, b, order, out);
            } else {
                let mut first = true;
                for p in region_paths(&rest, a, b) {
                    if !first {
                        out.push_str("+\n");
                    }
                    first = false;
                    let line: Vec<String> = p.iter().map(|e| group(&[*e])).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            }
            out.push_str(")\n");
        }
    }
}

fn group(edges: &[&Edge]) -> String {
    let labels = delaf_groups(edges);
    if labels.len() == 1 {
        labels[0].clone()
    } else {
        format!("({})", labels.join(" + "))
    }
}

/// Parallel tags in dictionary notation, one item per (lemma, category) with
/// the feature alternatives re-joined: `suivre.V:P1s:P2s:Y2s`.
fn delaf_groups(edges: &[&Edge]) -> Vec<String> {
    let mut groups: Vec<(String, String, Vec<String>)> = Vec::new();
    for e in edges {
        let (lemma, cat, feats) = match &e.label {
            EdgeLabel::Separator(c) => (c.to_string(), String::new(), String::new()),
            EdgeLabel::Tag(t) => {
                let cat = t.category().to_string().replace("[+", "[+ ");
                (t.lemma().to_string(), cat, t.features().to_string())
            }
        };
        match groups.iter_mut().find(|(l, c, _)| *l == lemma && *c == cat) {
            Some((_, _, fs)) => fs.push(feats),
            None => groups.push((lemma, cat, vec![feats])),
        }
    }
    groups.sort_by_key(|(l, c, _)| (collation_key(l), collation_key(c)));
    groups
        .into_iter()
        .map(|(lemma, cat, mut fs)| {
            fs.sort_by_key(|f| feature_rank(f));
            if cat.is_empty() {
                return lemma;
            }
            let mut text = format!("{lemma}.{cat}");
            for f in fs.iter().filter(|f| !f.is_empty()) {
                text.push(':');
                text.push_str(f);
            }
            text
        })
        .collect()
}

/// Dictionary order of feature groups: masculine before feminine, singular
/// before plural (`pas.N:ms:mp`).
fn feature_rank(f: &str) -> Vec<u32> {
    f.chars()
        .map(|c| match c {
            'm' => 1,
            'f' => 2,
            'n' => 3,
            's' => 4,
            'p' => 5,
            other => 10 + other as u32,
        })
        .collect()
}

/// Sort key folding the accented letters of French onto their base letter.
fn collation_key(s: &str) -> (String, String) {
    let folded = s
        .chars()
        .map(|c| match c {
            'à' | 'â' | 'ä' => 'a',
            'é' | 'è' | 'ê' | 'ë' => 'e',
            'î' | 'ï' => 'i',
            'ô' | 'ö' => 'o',
            'ù' | 'û' | 'ü' => 'u',
            'ç' => 'c',
            'ÿ' => 'y',
            other => other,
        })
        .collect();
    (folded, s.to_string())
}

fn has_cut(edges: &[&Edge], a: StateId, b: StateId, order: &dyn Fn(StateId) -> (usize, StateId)) -> bool {
    edges.iter().flat_map(|e| [e.from, e.to]).filter(|&s| s != a && s != b).any(|s| {
        let k = order(s);
        !edges.iter().any(|e| order(e.from) < k && k < order(e.to))
    })
}

fn trim_between<'a>(edges: &[&'a Edge], a: StateId, b: StateId) -> Vec<&'a Edge> {
    let mut fwd: BTreeSet<StateId> = BTreeSet::from([a]);
    let mut changed = true;
    while changed {
        changed = false;
        for e in edges {
            if fwd.contains(&e.from) && fwd.insert(e.to) {
                changed = true;
            }
        }
    }
    let mut bwd: BTreeSet<StateId> = BTreeSet::from([b]);
    changed = true;
    while changed {
        changed = false;
        for e in edges {
            if bwd.contains(&e.to) && bwd.insert(e.from) {
                changed = true;
            }
        }
    }
    edges.iter().copied().filter(|e| fwd.contains(&e.from) && bwd.contains(&e.to)).collect()
}

fn region_paths<'a>(edges: &[&'a Edge], a: StateId, b: StateId) -> Vec<Vec<&'a Edge>> {
    fn go<'a>(edges: &[&'a Edge], at: StateId, b: StateId, stack: &mut Vec<&'a Edge>, out: &mut Vec<Vec<&'a Edge>>) {
        if at == b {
            out.push(stack.clone());
            return;
        }
        for e in edges.iter().filter(|e| e.from == at) {
            stack.push(e);
            go(edges, e.to, b, stack, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    go(edges, a, b, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct LatticeDoc {
    states: usize,
    initial: StateId,
    r#final: StateId,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    from: StateId,
    to: StateId,
    surface: String,
    tag: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tag_algebra::CompleteTag;

    fn t(notation: &str, surface: &str) -> EdgeLabel {
        EdgeLabel::Tag(CompleteTag::parse_with_surface(notation, surface, &CategoryInventory::default()).unwrap())
    }

    fn e(from: StateId, to: StateId, label: EdgeLabel) -> Edge {
        Edge { from, to, label }
    }

    /// a (b|c) d, with the two middle branches written as separate states.
    fn split_branches() -> Lattice {
        Lattice::new(
            5,
            0,
            4,
            vec![
                e(0, 1, t("<a N>", "a")),
                e(1, 2, t("<b N>", "b")),
                e(1, 3, t("<c N>", "b")),
                e(2, 4, t("<d N>", "d")),
                e(3, 4, t("<d N>", "d")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_edge_has_one_path() {
        let l = Lattice::new(2, 0, 1, vec![e(0, 1, t("<a N>", "a"))]).unwrap();
        assert_eq!(l.enumerate_paths(10).paths.len(), 1);
        assert_eq!(l.count_paths(), 1);
    }

    #[test]
    fn empty_sentence_has_one_empty_path() {
        let l = Lattice::single_state();
        let p = l.enumerate_paths(10);
        assert_eq!(p.paths, vec![Path { edges: vec![] }]);
        assert!(l.is_path(&Path { edges: vec![] }));
    }

    #[test]
    fn rejects_backward_edges_and_bad_offsets() {
        assert!(matches!(
            Lattice::new(2, 0, 1, vec![e(1, 0, t("<a N>", "a"))]),
            Err(LatticeError::NotForward { .. })
        ));
        // one token vs two tokens landing on the same state
        assert!(matches!(
            Lattice::new(3, 0, 2, vec![e(0, 2, t("<a N>", "a")), e(0, 1, t("<b N>", "b")), e(1, 2, t("<c N>", "c"))]),
            Err(LatticeError::InconsistentOffsets(2))
        ));
        assert!(matches!(
            Lattice::from_unordered(2, 0, 1, vec![e(0, 1, t("<a N>", "a")), e(1, 0, t("<a N>", "a"))]),
            Err(LatticeError::Cyclic)
        ));
    }

    #[test]
    fn trim_removes_dead_branch() {
        let l = Lattice::new(
            4,
            0,
            2,
            vec![e(0, 1, t("<a N>", "a")), e(1, 2, t("<b N>", "b")), e(1, 3, t("<x N>", "x"))],
        )
        .unwrap();
        assert!(!l.is_trim());
        let before = l.language(100).unwrap();
        let trimmed = l.trim();
        assert!(trimmed.is_trim());
        assert_eq!(trimmed.num_states(), 3);
        assert_eq!(trimmed.edges().len(), 2);
        assert_eq!(trimmed.language(100).unwrap(), before);
        assert_eq!(split_branches().trim(), split_branches());
    }

    #[test]
    fn trim_of_empty_language() {
        let l = Lattice::new(3, 0, 2, vec![e(0, 1, t("<a N>", "a"))]).unwrap();
        let trimmed = l.trim();
        assert!(trimmed.is_empty_language());
        assert_eq!(trimmed.enumerate_paths(10).paths.len(), 0);
    }

    #[test]
    fn minimize_merges_shared_suffix() {
        let l = split_branches();
        let m = l.minimize();
        assert_eq!(m.num_states(), 4);
        assert_eq!(m.edges().len(), 4);
        assert!(m.is_deterministic());
        assert!(l.language_equal(&m, 100).unwrap());
        let mm = m.minimize();
        assert_eq!((mm.num_states(), mm.edges().len()), (m.num_states(), m.edges().len()));
    }

    #[test]
    fn minimize_singleton_is_fixed_point() {
        let l = Lattice::new(2, 0, 1, vec![e(0, 1, t("<a N>", "a"))]).unwrap();
        assert_eq!(l.minimize(), l);
        assert_eq!(Lattice::single_state().minimize(), Lattice::single_state());
    }

    #[test]
    fn determinize_merges_same_label_branches() {
        let l = Lattice::new(
            4,
            0,
            3,
            vec![
                e(0, 1, t("<a N>", "a")),
                e(0, 2, t("<a N>", "a")),
                e(1, 3, t("<b N>", "b")),
                e(2, 3, t("<c N>", "b")),
            ],
        )
        .unwrap();
        assert_eq!(l.enumerate_paths(10).paths.len(), 2);
        let m = l.minimize();
        assert!(m.is_deterministic());
        assert_eq!(m.num_states(), 3);
        assert!(l.language_equal(&m, 10).unwrap());
    }

    #[test]
    fn enumeration_respects_limit() {
        let l = split_branches();
        let p = l.enumerate_paths(1);
        assert_eq!(p.paths.len(), 1);
        assert!(p.overflow);
        assert_eq!(l.language(1), Err(LatticeError::Overflow(1)));
        assert!(!l.enumerate_paths(2).overflow);
    }

    #[test]
    fn dot_is_deterministic_and_header_only_when_empty() {
        assert_eq!(Lattice::empty_language().to_dot(), "digraph lattice {\n  rankdir=LR;\n}\n");
        let l = split_branches();
        assert_eq!(l.to_dot(), l.clone().to_dot());
        assert_eq!(l.to_dot().matches(" -> ").count(), 5);
    }

    #[test]
    fn json_round_trip() {
        let l = split_branches();
        let back = Lattice::from_json(&l.to_json(), &CategoryInventory::default()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn finds_paths_by_notation() {
        let l = split_branches();
        let items: Vec<String> = ["<a N>", "<c N>", "<d N>"].iter().map(|s| s.to_string()).collect();
        let p = l.find_path(&items).unwrap();
        assert!(l.is_path(&p));
        assert_eq!(p.edges[1].to, 3);
        assert!(l.find_path(&items[..2]).is_none());
    }
}
