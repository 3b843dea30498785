//! Local disambiguation grammars.
//!
//! A [`LocalGrammar`] is a finite transducer whose transitions pair an input
//! pattern with an output pattern, both incomplete tags. Input sequences pick
//! out the stretches of text a grammar applies to; the associated output
//! sequences constrain how those stretches may be tagged.
//!
//! Grammar documents are TOML:
//!
//! ```toml
//! name = "T3"
//! states = [0, 1, 2]
//! initial = 0
//! finals = [2]
//!
//! [[transitions]]
//! from = 0
//! to = 1
//! in = "ne"
//! out = "<XI>"
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tag_algebra::{CategoryInventory, IncompleteTag, TagError};

pub type GrammarState = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("bad grammar document: {0}")]
    Document(String),
    #[error("transition {index}: {source}")]
    Label { index: usize, source: TagError },
    #[error("state {0} is not declared")]
    UnknownState(i64),
    #[error("state {0} is unreachable from the initial state")]
    Unreachable(i64),
    #[error("no final state is reachable from state {0}")]
    Dead(i64),
    #[error("grammar has no final state")]
    NoFinal,
    #[error("union of no grammars")]
    EmptyUnion,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: GrammarState,
    pub to: GrammarState,
    pub input: IncompleteTag,
    pub output: IncompleteTag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGrammar {
    name: String,
    num_states: usize,
    initial: GrammarState,
    finals: Vec<bool>,
    /// Sorted by source state.
    transitions: Vec<Transition>,
}

/// How simple a grammar's acceptance rule can be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GrammarClass {
    /// Every input label is a simple form or a separator.
    SimpleInputs,
    /// On every transition, either the input is a simple form or separator,
    /// or conforming to the output implies conforming to the input.
    OutputImpliesInput,
    General,
}

impl LocalGrammar {
    pub fn new(
        name: impl Into<String>,
        num_states: usize,
        initial: GrammarState,
        finals: impl IntoIterator<Item = GrammarState>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, GrammarError> {
        let mut final_flags = vec![false; num_states];
        for f in finals {
            *final_flags.get_mut(f).ok_or(GrammarError::UnknownState(f as i64))? = true;
        }
        if initial >= num_states {
            return Err(GrammarError::UnknownState(initial as i64));
        }
        let mut transitions: Vec<Transition> = transitions.into_iter().collect();
        for t in &transitions {
            for s in [t.from, t.to] {
                if s >= num_states {
                    return Err(GrammarError::UnknownState(s as i64));
                }
            }
        }
        transitions.sort();
        transitions.dedup();
        let g = Self { name: name.into(), num_states, initial, finals: final_flags, transitions };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GrammarError> {
        if !self.finals.iter().any(|&f| f) {
            return Err(GrammarError::NoFinal);
        }
        let fwd = self.reachable();
        let bwd = self.coreachable();
        for s in 0..self.num_states {
            if !fwd[s] {
                return Err(GrammarError::Unreachable(s as i64));
            }
            if !bwd[s] {
                return Err(GrammarError::Dead(s as i64));
            }
        }
        Ok(())
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for t in self.outgoing(s) {
                if !seen[t.to] {
                    seen[t.to] = true;
                    stack.push(t.to);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let mut seen = self.finals.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for t in &self.transitions {
                if seen[t.to] && !seen[t.from] {
                    seen[t.from] = true;
                    changed = true;
                }
            }
        }
        seen
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> GrammarState {
        self.initial
    }

    pub fn is_final(&self, s: GrammarState) -> bool {
        self.finals[s]
    }

    pub fn finals(&self) -> impl Iterator<Item = GrammarState> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(s, _)| s)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, s: GrammarState) -> &[Transition] {
        let lo = self.transitions.partition_point(|t| t.from < s);
        let hi = self.transitions.partition_point(|t| t.from <= s);
        &self.transitions[lo..hi]
    }

    pub fn from_toml(text: &str, inventory: &CategoryInventory) -> Result<Self, GrammarError> {
        let doc: GrammarDoc = toml::from_str(text).map_err(|e| GrammarError::Document(e.to_string()))?;
        let ids: BTreeMap<i64, usize> = doc.states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        if ids.len() != doc.states.len() {
            return Err(GrammarError::Document("duplicate state id".into()));
        }
        let id = |s: i64| ids.get(&s).copied().ok_or(GrammarError::UnknownState(s));
        let mut transitions = Vec::new();
        for (index, t) in doc.transitions.iter().enumerate() {
            let parse = |text: &str| IncompleteTag::parse(text, inventory).map_err(|source| GrammarError::Label { index, source });
            transitions.push(Transition { from: id(t.from)?, to: id(t.to)?, input: parse(&t.input)?, output: parse(&t.output)? });
        }
        let finals = doc.finals.iter().map(|&f| id(f)).collect::<Result<Vec<_>, _>>()?;
        Self::new(doc.name, doc.states.len(), id(doc.initial)?, finals, transitions).map_err(|e| match e {
            GrammarError::Unreachable(s) => GrammarError::Unreachable(doc.states[s as usize]),
            GrammarError::Dead(s) => GrammarError::Dead(doc.states[s as usize]),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        let doc = GrammarDoc {
            name: self.name.clone(),
            states: (0..self.num_states as i64).collect(),
            initial: self.initial as i64,
            finals: self.finals().map(|s| s as i64).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| TransitionDoc {
                    from: t.from as i64,
                    to: t.to as i64,
                    input: t.input.to_string(),
                    output: t.output.to_string(),
                })
                .collect(),
        };
        toml::to_string(&doc).expect("grammar documents always serialize")
    }

    /// Shares one initial and one final state among all members (`T1|T2`).
    ///
    /// Member initial states without incoming transitions, and member finals
    /// without outgoing ones, are fused outright; otherwise their transitions
    /// are copied onto the shared states so no member's language changes.
    pub fn union(grammars: &[LocalGrammar]) -> Result<LocalGrammar, GrammarError> {
        if grammars.is_empty() {
            return Err(GrammarError::EmptyUnion);
        }
        const INITIAL: GrammarState = 0;
        const FINAL: GrammarState = 1;
        let mut next = 2;
        let mut transitions = Vec::new();
        for g in grammars {
            let offset = next;
            next += g.num_states;
            let has_incoming = |s| g.transitions.iter().any(|t| t.to == s);
            let initial_kept = has_incoming(g.initial);
            for t in &g.transitions {
                let mut sources = Vec::new();
                if t.from == g.initial {
                    sources.push(INITIAL);
                }
                if t.from != g.initial || initial_kept {
                    sources.push(offset + t.from);
                }
                let mut targets = Vec::new();
                if g.finals[t.to] {
                    targets.push(FINAL);
                }
                if !g.finals[t.to] || !g.outgoing(t.to).is_empty() {
                    targets.push(offset + t.to);
                }
                for &from in &sources {
                    for &to in &targets {
                        transitions.push(Transition { from, to, input: t.input.clone(), output: t.output.clone() });
                    }
                }
            }
        }
        let name = grammars.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join("|");
        Ok(Self::trimmed(name, next, INITIAL, [FINAL], transitions))
    }

    /// Builds a grammar after dropping useless states; used where the raw
    /// construction may leave some behind.
    fn trimmed(
        name: String,
        num_states: usize,
        initial: GrammarState,
        finals: impl IntoIterator<Item = GrammarState>,
        transitions: Vec<Transition>,
    ) -> LocalGrammar {
        let raw = LocalGrammar {
            name: name.clone(),
            num_states,
            initial,
            finals: {
                let mut f = vec![false; num_states];
                for s in finals {
                    f[s] = true;
                }
                f
            },
            transitions,
        };
        let fwd = raw.reachable();
        let bwd = raw.coreachable();
        let mut index = vec![usize::MAX; num_states];
        let mut n = 0;
        for s in 0..num_states {
            if (fwd[s] && bwd[s]) || s == initial {
                index[s] = n;
                n += 1;
            }
        }
        let transitions = raw
            .transitions
            .iter()
            .filter(|t| index[t.from] != usize::MAX && index[t.to] != usize::MAX && bwd[t.to])
            .map(|t| Transition { from: index[t.from], to: index[t.to], input: t.input.clone(), output: t.output.clone() });
        let finals: Vec<GrammarState> = raw.finals().filter(|&s| index[s] != usize::MAX).map(|s| index[s]).collect();
        let mut g = LocalGrammar { name, num_states: n, initial: index[initial], finals: vec![false; n], transitions: Vec::new() };
        for f in finals {
            g.finals[f] = true;
        }
        g.transitions = transitions.collect();
        g.transitions.sort();
        g.transitions.dedup();
        g
    }

    pub fn classify(&self) -> GrammarClass {
        if self.transitions.iter().all(|t| t.input.is_surface_or_separator()) {
            GrammarClass::SimpleInputs
        } else if self
            .transitions
            .iter()
            .all(|t| t.input.is_surface_or_separator() || t.output.implies(&t.input))
        {
            GrammarClass::OutputImpliesInput
        } else {
            GrammarClass::General
        }
    }

    /// Input-label sequences of initial-to-final paths with at most
    /// `max_len` transitions.
    pub fn input_sequences(&self, max_len: usize) -> BTreeSet<Vec<IncompleteTag>> {
        let mut out = BTreeSet::new();
        let mut stack = Vec::new();
        self.collect_inputs(self.initial, max_len, &mut stack, &mut out);
        out
    }

    fn collect_inputs(
        &self,
        s: GrammarState,
        budget: usize,
        stack: &mut Vec<IncompleteTag>,
        out: &mut BTreeSet<Vec<IncompleteTag>>,
    ) {
        if self.finals[s] && !stack.is_empty() {
            out.insert(stack.clone());
        }
        if budget == 0 {
            return;
        }
        for t in self.outgoing(s) {
            stack.push(t.input.clone());
            self.collect_inputs(t.to, budget - 1, stack, out);
            stack.pop();
        }
    }

    /// (input, output) pair sequences of paths with at most `max_len`
    /// transitions.
    pub fn pair_sequences(&self, max_len: usize) -> BTreeSet<Vec<(IncompleteTag, IncompleteTag)>> {
        fn go(
            g: &LocalGrammar,
            s: GrammarState,
            budget: usize,
            stack: &mut Vec<(IncompleteTag, IncompleteTag)>,
            out: &mut BTreeSet<Vec<(IncompleteTag, IncompleteTag)>>,
        ) {
            if g.finals[s] && !stack.is_empty() {
                out.insert(stack.clone());
            }
            if budget == 0 {
                return;
            }
            for t in g.outgoing(s) {
                stack.push((t.input.clone(), t.output.clone()));
                go(g, t.to, budget - 1, stack, out);
                stack.pop();
            }
        }
        let mut out = BTreeSet::new();
        go(self, self.initial, max_len, &mut Vec::new(), &mut out);
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph \"{}\" {{\n  rankdir=LR;\n", self.name.replace('"', "\\\""));
        let _ = writeln!(s, "  node [shape=circle];");
        for f in self.finals() {
            let _ = writeln!(s, "  {f} [shape=doublecircle];");
        }
        for t in &self.transitions {
            let label = format!("{} / {}", t.input, t.output).replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", t.from, t.to, label);
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GrammarDoc {
    name: String,
    states: Vec<i64>,
    initial: i64,
    finals: Vec<i64>,
    #[serde(default)]
    transitions: Vec<TransitionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TransitionDoc {
    from: i64,
    to: i64,
    #[serde(rename = "in")]
    input: String,
    #[serde(rename = "out")]
    output: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv() -> CategoryInventory {
        CategoryInventory::default()
    }

    fn p(t: &str) -> IncompleteTag {
        IncompleteTag::parse(t, &inv()).unwrap()
    }

    fn linear(name: &str, pairs: &[(&str, &str)]) -> LocalGrammar {
        let transitions = pairs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| Transition { from: i, to: i + 1, input: p(a), output: p(b) });
        LocalGrammar::new(name, pairs.len() + 1, 0, [pairs.len()], transitions).unwrap()
    }

    #[test]
    fn loads_toml_document() {
        let doc = r#"
name = "T3"
states = [10, 11, 12]
initial = 10
finals = [12]

[[transitions]]
from = 10
to = 11
in = "ne"
out = "<XI>"

[[transitions]]
from = 11
to = 12
in = "<V>"
out = "<V>"
"#;
        let g = LocalGrammar::from_toml(doc, &inv()).unwrap();
        assert_eq!(g.num_states(), 3);
        assert_eq!(g.transitions().len(), 2);
        assert_eq!(g.classify(), GrammarClass::OutputImpliesInput);
        let back = LocalGrammar::from_toml(&g.to_toml(), &inv()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rejects_bad_documents() {
        let no_final = "name = \"x\"\nstates = [0, 1]\ninitial = 0\nfinals = []\n[[transitions]]\nfrom = 0\nto = 1\nin = \"a\"\nout = \"<N>\"\n";
        assert_eq!(LocalGrammar::from_toml(no_final, &inv()), Err(GrammarError::NoFinal));
        let unreachable = "name = \"x\"\nstates = [0, 1, 2]\ninitial = 0\nfinals = [1, 2]\n[[transitions]]\nfrom = 0\nto = 1\nin = \"a\"\nout = \"<N>\"\n";
        assert_eq!(LocalGrammar::from_toml(unreachable, &inv()), Err(GrammarError::Unreachable(2)));
        let bad_label = "name = \"x\"\nstates = [0, 1]\ninitial = 0\nfinals = [1]\n[[transitions]]\nfrom = 0\nto = 1\nin = \"<V:>\"\nout = \"<N>\"\n";
        assert!(matches!(LocalGrammar::from_toml(bad_label, &inv()), Err(GrammarError::Label { index: 0, .. })));
    }

    #[test]
    fn cycles_are_allowed_and_bounded() {
        let g = LocalGrammar::new(
            "loop",
            2,
            0,
            [1],
            vec![
                Transition { from: 0, to: 1, input: p("a"), output: p("<N>") },
                Transition { from: 1, to: 1, input: p("b"), output: p("<N>") },
            ],
        )
        .unwrap();
        let seqs = g.input_sequences(3);
        assert_eq!(seqs.len(), 3);
        assert!(seqs.iter().all(|s| s.len() <= 3));
    }

    #[test]
    fn classification() {
        let t1 = linear("T1", &[("de", "<PREP>"), ("ce", "<PRO>")]);
        assert_eq!(t1.classify(), GrammarClass::SimpleInputs);
        let t2 = linear("T2", &[("<V>", "<V:3s>"), ("-", "-"), ("il", "<PRO>")]);
        assert_eq!(t2.classify(), GrammarClass::OutputImpliesInput);
        let t7 = linear("T7", &[("<DET>", "<PRO>"), ("ne", "<XI>")]);
        assert_eq!(t7.classify(), GrammarClass::General);
    }

    #[test]
    fn union_shares_initial_and_final() {
        let t2 = linear("T2", &[("<V>", "<V:3s>"), ("-", "-"), ("il", "<PRO>")]);
        let t3 = linear("T3", &[("ne", "<XI>"), ("<V>", "<V>")]);
        let u = LocalGrammar::union(&[t2.clone(), t3.clone()]).unwrap();
        assert_eq!(u.name(), "T2|T3");
        // 2 + 3 interior states of T2 and T3 are gone: 1 + 2 + 1 + 1 shared
        assert_eq!(u.num_states(), 2 + 2 + 1);
        assert_eq!(u.finals().count(), 1);
        let mut expected = t2.input_sequences(5);
        expected.extend(t3.input_sequences(5));
        assert_eq!(u.input_sequences(5), expected);
        assert_eq!(u.classify(), GrammarClass::OutputImpliesInput);

        let single = LocalGrammar::union(std::slice::from_ref(&t3)).unwrap();
        assert_eq!(single.pair_sequences(5), t3.pair_sequences(5));
        assert_eq!(LocalGrammar::union(&[]), Err(GrammarError::EmptyUnion));
    }

    #[test]
    fn union_keeps_looping_members_apart() {
        // a final state with a self-loop must not leak its loop into the other member
        let looping = LocalGrammar::new(
            "L",
            2,
            0,
            [1],
            vec![
                Transition { from: 0, to: 1, input: p("a"), output: p("<N>") },
                Transition { from: 1, to: 1, input: p("b"), output: p("<N>") },
            ],
        )
        .unwrap();
        let other = linear("O", &[("c", "<N>")]);
        let u = LocalGrammar::union(&[looping.clone(), other.clone()]).unwrap();
        let mut expected = looping.pair_sequences(4);
        expected.extend(other.pair_sequences(4));
        assert_eq!(u.pair_sequences(4), expected);
    }

    #[test]
    fn dot_renders_pairs() {
        let t3 = linear("T3", &[("ne", "<XI>"), ("<V>", "<V>")]);
        let dot = t3.to_dot();
        assert!(dot.contains("label=\"ne / <XI>\""));
        assert_eq!(dot, t3.to_dot());
    }
}
