mod common;

use common::*;
use lexdis::engine::{accepts_case_a, accepts_case_b, decompose, silence_check, parse_corpus};
use lexdis::{accepts, LocalGrammar, filter, filter_oracle, matchable, GrammarClass, DEFAULT_PATH_LIMIT};

const LISTING: &str = "\
je.PRO:1s
(ne.XI + ne.XI[+ Préd])
me.PRO:1s
(le.DET:ms + le.PRO:3ms)
(être.V:P1s + suivre.V:P1s:P2s:Y2s)
(pas.ADV + pas.N:ms:mp + pas.XI)
(faire.V:Kms:P3s + fait.A:ms + fait.N:ms + fait.XI[+ Préd])
confirmer.V:W
(
sur/le/moment.ADV;PDETC
+
(sur.A:ms + sur.PREP)
(le.DET:ms + le.PRO:3ms)
moment.N:ms
)
";

#[test]
fn initial_tagging_listing() {
    let l = lattice("Je ne me le suis pas fait confirmer sur le moment");
    assert_eq!(l.listing(), LISTING);
    let suivre = l.edges().iter().filter(|e| e.label.as_tag().is_some_and(|t| t.lemma() == "suivre")).count();
    assert_eq!(suivre, 3);
    assert_eq!(l.count_paths(), 1600);
}

#[test]
fn compound_and_simple_paths_coexist() {
    let l = lattice("Il traverse le chemin de fer.");
    let compound: Vec<_> = l.edges().iter().filter(|e| e.label.token_len() == 3).collect();
    assert_eq!(compound.len(), 1);
    assert_eq!(compound[0].label.to_string(), "<chemin/de/fer N:ms>");
    let split = path(&l, "<il PRO:3ms> <traverser V:P3s> <le DET:ms> <chemin N:ms> <de PREP> <fer N:ms> .");
    assert_eq!(split.len(), 7);
    let traverse: Vec<String> = l
        .edges()
        .iter()
        .filter(|e| e.label.surface() == "traverse")
        .filter_map(|e| e.label.as_tag().map(|t| t.category().main.clone()))
        .collect();
    assert!(traverse.contains(&"N".to_string()) && traverse.contains(&"V".to_string()));
    // il × traverse (1 N + 3 V) × le (2) × (compound + simple) × .
    assert_eq!(l.count_paths(), 4 * 2 * 2);

    let g = LocalGrammar::from_toml(
        r#"
name = "V"
states = [0, 1, 2]
initial = 0
finals = [2]
transitions = [
  { from = 0, to = 1, in = "il", out = "<PRO>" },
  { from = 1, to = 2, in = "traverse", out = "<V>" },
]
"#,
        &inventory(),
    )
    .unwrap();
    let oracle = filter_oracle(&g, &l, DEFAULT_PATH_LIMIT).unwrap();
    assert!(filter(&g, &l).lattice.language_equal(&oracle, DEFAULT_PATH_LIMIT).unwrap());
    let survivors = oracle.enumerate_paths(DEFAULT_PATH_LIMIT).paths;
    assert_eq!(survivors.len(), 3 * 2 * 2);
    assert!(survivors.iter().all(|p| p.labels()[1].as_tag().unwrap().lemma() == "traverser"));
    assert!(survivors.iter().any(|p| p.len() == 5) && survivors.iter().any(|p| p.len() == 7));
}

#[test]
fn t1_decomposes_around_the_clitic_run() {
    let l = lattice("Cela vient de ce que je ne me le suis pas fait confirmer aussitôt");
    let g = grammar("T1");
    let p = path(&l, CELA_VIENT);
    assert!(accepts(&g, &p, &l).unwrap());
    assert!(accepts_case_a(&g, &p, &l).unwrap());
    assert_eq!(g.classify(), GrammarClass::SimpleInputs);
    let d = decompose(&g, &p, &l).unwrap().unwrap();
    assert_eq!(d.shape(), vec![1, 1, 7, 1, 1, 1, 1, 1]);
    let m = matchable(&l, &g);
    let before_de = p.states(l.initial())[2];
    for s in 0..l.num_states() {
        assert_eq!(m.get(s), s == before_de, "state {s}");
    }
}

#[test]
fn t1_filter_fixes_the_matched_portion() {
    let l = lattice("Cela vient de ce que je ne me le suis pas fait confirmer aussitôt");
    let f = filter(&grammar("T1"), &l);
    assert!(!f.emptied);
    let expected = ["PREP", "PRO", "CNJS", "PRO", "XI", "PRO", "PRO"];
    for p in f.lattice.enumerate_paths(DEFAULT_PATH_LIMIT).paths {
        let cats: Vec<String> =
            p.labels()[2..9].iter().map(|t| t.as_tag().unwrap().category().main.clone()).collect();
        assert_eq!(cats, expected);
    }
}

#[test]
fn verb_after_ne_accepted_noun_rejected() {
    let l = lattice("Ne fait-il les comptes que pour rendre service ?");
    let (t2, t3) = (grammar("T2"), grammar("T3"));
    assert_eq!(t2.classify(), GrammarClass::OutputImpliesInput);
    assert_eq!(t3.classify(), GrammarClass::OutputImpliesInput);
    let good = path(&l, FAIT_IL_VERB);
    let bad = path(&l, FAIT_IL_NOUN);
    assert!(accepts(&t2, &good, &l).unwrap());
    assert!(accepts_case_b(&t2, &good, &l).unwrap());
    assert!(accepts(&t3, &good, &l).unwrap());
    assert!(!accepts(&t3, &bad, &l).unwrap());
    assert!(!accepts_case_b(&t3, &bad, &l).unwrap());
    assert!(accepts_case_a(&t3, &bad, &l).is_err());
}

#[test]
fn union_of_accepting_grammars_can_reject() {
    let l = lattice("Ne fait-il les comptes que pour rendre service ?");
    let p = path(&l, FAIT_IL_VERB);
    let u = union(&["T2", "T3"]);
    assert_eq!(u.name(), "T2|T3");
    assert!(!accepts(&u, &p, &l).unwrap());
}

#[test]
fn union_rescues_each_reading_of_lui() {
    let l = lattice("Ne lui dis pas");
    let good = path(&l, NE_LUI);
    let bad = path(&l, NE_LUIRE);
    let (t3, t4, u) = (grammar("T3"), grammar("T4"), union(&["T3", "T4"]));
    assert!(!accepts(&t3, &good, &l).unwrap());
    assert!(accepts(&t4, &good, &l).unwrap());
    assert!(accepts(&u, &good, &l).unwrap());
    assert!(!accepts(&t4, &bad, &l).unwrap());
    assert!(accepts(&u, &bad, &l).unwrap());
    assert!(matchable(&l, &t3).get(l.initial()));
}

#[test]
fn union_of_rejecting_grammars_can_accept() {
    let l = lattice("Pourquoi me pressent-il de le lui dire ?");
    let p = path(&l, POURQUOI_LUIRE);
    assert!(!accepts(&grammar("T5"), &p, &l).unwrap());
    assert!(!accepts(&grammar("T6"), &p, &l).unwrap());
    let u = union(&["T5", "T6"]);
    assert!(accepts(&u, &p, &l).unwrap());
    assert_eq!(decompose(&u, &p, &l).unwrap().unwrap().shape(), vec![1, 3, 1, 2, 1, 1, 1]);
}

#[test]
fn witness_from_another_reading() {
    let l = lattice("Mais aucun ne peut dépasser cette limite");
    let t7 = grammar("T7");
    assert_eq!(t7.classify(), GrammarClass::General);
    assert!(accepts(&t7, &path(&l, AUCUN_PRO), &l).unwrap());
    assert!(!accepts(&t7, &path(&l, AUCUN_DET), &l).unwrap());
    assert!(accepts_case_b(&t7, &path(&l, AUCUN_PRO), &l).is_err());
}

#[test]
fn silence_on_ne_lui() {
    let corpus = parse_corpus(&std::fs::read_to_string(fixture("corpus/ne_lui.txt")).unwrap()).unwrap();
    let lex = lexicon();
    let report = silence_check(&[grammar("T3")], false, &corpus, &lex);
    assert_eq!(report.to_string(), "SILENCE 1 0-2 T3\n");
    let report = silence_check(&[grammar("T3"), grammar("T4")], false, &corpus, &lex);
    assert!(report.is_clean());
    assert!(silence_check(&[grammar("T3")], false, &[], &lex).is_clean());
}
