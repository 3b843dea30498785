#![allow(dead_code)]

use std::path::PathBuf;

use lexdis::tag_algebra::split_sequence_notation;
use lexdis::{CategoryInventory, Lattice, LocalGrammar, Lexicon, Path};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn inventory() -> CategoryInventory {
    CategoryInventory::parse(&std::fs::read_to_string(fixture("categories.txt")).unwrap()).unwrap()
}

pub fn lexicon() -> Lexicon {
    let text = std::fs::read_to_string(fixture("lexicon.dic")).unwrap();
    Lexicon::load_with_categories(&text, inventory()).unwrap()
}

pub fn grammar(name: &str) -> LocalGrammar {
    let text = std::fs::read_to_string(fixture(&format!("grammars/{name}.toml"))).unwrap();
    LocalGrammar::from_toml(&text, &inventory()).unwrap()
}

pub fn union(names: &[&str]) -> LocalGrammar {
    let gs: Vec<LocalGrammar> = names.iter().map(|n| grammar(n)).collect();
    LocalGrammar::union(&gs).unwrap()
}

pub fn lattice(text: &str) -> Lattice {
    lexicon().tag_text(text).unwrap()
}

/// The path of `l` spelled by a `<lemma CAT:f> - <...>` sequence.
pub fn path(l: &Lattice, seq: &str) -> Path {
    let items = split_sequence_notation(seq).unwrap();
    l.find_path(&items).unwrap_or_else(|| panic!("no path for {seq}"))
}

pub const SENTENCES: &[&str] = &[
    "Je ne me le suis pas fait confirmer sur le moment",
    "Cela vient de ce que je ne me le suis pas fait confirmer aussitôt",
    "Ne fait-il les comptes que pour rendre service ?",
    "Ne lui dis pas",
    "Mais aucun ne peut dépasser cette limite",
    "Pourquoi me pressent-il de le lui dire ?",
    "Il traverse le chemin de fer.",
];

pub const GRAMMARS: &[&str] = &["T1", "T2", "T3", "T4", "T5", "T6", "T7"];

pub const CELA_VIENT: &str = "<cela PRO:ms> <venir V:P3s> <de PREP> <ce PRO:3s> <que CNJS> <je PRO:1s> <ne XI> \
    <me PRO:1s> <le PRO:3ms> <être V:P1s> <pas ADV> <faire V:Kms> <confirmer V:W> <aussitôt ADV>";
pub const FAIT_IL_VERB: &str = "<ne XI[+ Préd]> <faire V:P3s>-<il PRO:3ms> <le DET:mp> <compte N:mp> <que CNJS> \
    <pour PREP> <rendre V:W> <service N:ms> ?";
pub const FAIT_IL_NOUN: &str = "<ne XI[+ Préd]> <fait N:ms>-<il PRO:3ms> <le DET:mp> <compte N:mp> <que CNJS> \
    <pour PREP> <rendre V:W> <service N:ms> ?";
pub const NE_LUI: &str = "<ne XI> <lui PRO:3s> <dire V:Y2s> <pas ADV>";
pub const NE_LUIRE: &str = "<ne XI> <luire V:Kms> <dire V:Y2s> <pas ADV>";
pub const POURQUOI_LUIRE: &str = "<pourquoi ADV> <me PRO:1s> <presser V:P3p>-<il PRO:3ms> <de PREP> <le PRO:3ms> \
    <luire V:Kms> <dire V:W> ?";
pub const AUCUN_PRO: &str = "<mais CNJC> <aucun PRO:ms> <ne XI> <pouvoir V:P3s> <dépasser V:W> <ce DET:fs> <limite N:fs>";
pub const AUCUN_DET: &str = "<mais CNJC> <aucun DET:ms> <ne XI> <pouvoir V:P3s> <dépasser V:W> <ce DET:fs> <limite N:fs>";
