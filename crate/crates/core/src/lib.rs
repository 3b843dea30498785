//! Lexical disambiguation with local grammars.
//!
//! Text is first tagged by dictionary lookup into an acyclic lattice holding
//! every a-priori tagging ([`lexicon`], [`lattice`]). Local grammars, finite
//! transducers over incomplete tags ([`grammar`]), then remove taggings they
//! reject without ever removing one they accept ([`engine`]).

pub mod cli;
pub mod engine;
pub mod grammar;
pub mod lattice;
pub mod lexicon;
pub mod random;
pub mod tag_algebra;

pub use engine::{accepts, filter, filter_oracle, matchable, Application, Decomposition, Filtered, MatchableIndex};
pub use grammar::{GrammarClass, LocalGrammar, Transition};
pub use lattice::{Edge, Lattice, Path, DEFAULT_PATH_LIMIT};
pub use lexicon::{tokenize, Lexicon};
pub use tag_algebra::{conforms, CategoryInventory, CompleteTag, EdgeLabel, IncompleteTag, TagSequence};
