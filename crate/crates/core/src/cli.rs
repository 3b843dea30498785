//! The `lexdis` command line: `tag`, `apply`, `check` and `diff-oracle`.
//!
//! Exit codes: 0 ok, 1 silence violations (or an oracle mismatch), 2 unknown
//! word, 3 empty result, 4 bad grammar, lexicon or corpus, 5 enumeration
//! overflow.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::engine::{filter, filter_oracle, filter_sequential, parse_corpus, silence_check, EngineError, Filtered};
use crate::grammar::LocalGrammar;
use crate::lattice::{Lattice, LatticeError, DEFAULT_PATH_LIMIT};
use crate::lexicon::{Lexicon, LexiconError};
use crate::random::{self, Shape};
use crate::tag_algebra::CategoryInventory;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SILENCE: i32 = 1;
pub const EXIT_UNKNOWN_WORD: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;
pub const EXIT_OVERFLOW: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "lexdis", version, about = "Lexical disambiguation with local grammars")]
pub struct Args {
    #[arg(long, global = true, value_name = "F")]
    pub lexicon: Option<PathBuf>,
    /// One category code per line; defaults to the built-in inventory.
    #[arg(long, global = true, value_name = "F")]
    pub categories: Option<PathBuf>,
    #[arg(long = "grammar", global = true, value_name = "F")]
    pub grammars: Vec<PathBuf>,
    /// Apply grammars one after the other instead of as a union.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Paths)]
    pub format: Format,
    /// Path enumeration limit.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_PATH_LIMIT)]
    pub limit: usize,
    /// diff-oracle: check random instances starting at this seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// diff-oracle: number of random instances.
    #[arg(long, global = true, value_name = "N", default_value_t = 100)]
    pub instances: usize,
    /// check: emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Initial tagging. Reads one sentence per stdin line when TEXT is absent.
    Tag { text: Option<String> },
    /// Filter the initial tagging with the grammars.
    Apply { text: Option<String> },
    /// Report gold taggings of a corpus that the grammars reject.
    Check { corpus: PathBuf },
    /// Compare the filter against brute-force enumeration.
    DiffOracle { text: Option<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Paths,
    Lattice,
    Dot,
    Report,
}

/// A failure that ends the run with a specific exit code.
struct Exit(i32, String);

impl From<LexiconError> for Exit {
    fn from(e: LexiconError) -> Self {
        match e {
            LexiconError::UnknownWord { .. } => Exit(EXIT_UNKNOWN_WORD, e.to_string()),
            LexiconError::Malformed { .. } => Exit(EXIT_BAD_INPUT, format!("lexicon: {e}")),
        }
    }
}

impl From<EngineError> for Exit {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Lattice(LatticeError::Overflow(_)) => Exit(EXIT_OVERFLOW, e.to_string()),
            other => Exit(EXIT_BAD_INPUT, other.to_string()),
        }
    }
}

pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run_from(std::env::args_os(), &mut stdin.lock(), &mut stdout, &mut stderr)
}

/// Parses `argv` (program name first) and runs. Usage errors exit 4.
pub fn run_from<I, T>(argv: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Args::try_parse_from(argv) {
        Ok(args) => run(&args, input, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_BAD_INPUT
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            }
        }
    }
}

pub fn run(args: &Args, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut ctx = Ctx { args, out, code: EXIT_OK };
    let result = match &args.command {
        Command::Tag { text } => sentences(text, input).and_then(|ts| ctx.tag(&ts)),
        Command::Apply { text } => sentences(text, input).and_then(|ts| ctx.apply(&ts)),
        Command::Check { corpus } => ctx.check(corpus),
        Command::DiffOracle { text } => match args.seed {
            Some(seed) => ctx.diff_random(seed),
            None => sentences(text, input).and_then(|ts| ctx.diff(&ts)),
        },
    };
    let code = ctx.code;
    match result {
        Ok(()) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "lexdis: {msg}");
            code
        }
    }
}

fn sentences(text: &Option<String>, input: &mut dyn BufRead) -> Result<Vec<String>, Exit> {
    if let Some(t) = text {
        return Ok(vec![t.clone()]);
    }
    let mut lines = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| Exit(EXIT_BAD_INPUT, format!("stdin: {e}")))?;
        if !line.trim().is_empty() {
            lines.push(line);
        }
    }
    Ok(lines)
}

fn read(path: &FsPath) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| Exit(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))
}

struct Ctx<'a> {
    args: &'a Args,
    out: &'a mut dyn Write,
    code: i32,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) -> Result<(), Exit> {
        self.out.write_all(text.as_bytes()).map_err(|e| Exit(EXIT_BAD_INPUT, format!("output: {e}")))
    }

    fn inventory(&self) -> Result<CategoryInventory, Exit> {
        match &self.args.categories {
            None => Ok(CategoryInventory::default()),
            Some(p) => CategoryInventory::parse(&read(p)?)
                .map_err(|e| Exit(EXIT_BAD_INPUT, format!("{}: {e}", p.display()))),
        }
    }

    fn lexicon(&self) -> Result<Lexicon, Exit> {
        let path = self.args.lexicon.as_ref().ok_or_else(|| Exit(EXIT_BAD_INPUT, "--lexicon is required".into()))?;
        Lexicon::load_with_categories(&read(path)?, self.inventory()?)
            .map_err(|e| Exit(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))
    }

    fn grammars(&self) -> Result<Vec<LocalGrammar>, Exit> {
        if self.args.grammars.is_empty() {
            return Err(Exit(EXIT_BAD_INPUT, "at least one --grammar is required".into()));
        }
        let inv = self.inventory()?;
        self.args
            .grammars
            .iter()
            .map(|p| LocalGrammar::from_toml(&read(p)?, &inv).map_err(|e| Exit(EXIT_BAD_INPUT, format!("{}: {e}", p.display()))))
            .collect()
    }

    /// The union of the grammars, or `None` in sequential mode.
    fn combined(&self, grammars: &[LocalGrammar]) -> Result<Option<LocalGrammar>, Exit> {
        if self.args.sequential {
            return Ok(None);
        }
        LocalGrammar::union(grammars).map(Some).map_err(|e| Exit(EXIT_BAD_INPUT, e.to_string()))
    }

    fn render(&self, lattice: &Lattice) -> Result<String, Exit> {
        Ok(match self.args.format {
            Format::Paths => lattice.listing(),
            Format::Lattice => format!("{}\n", lattice.to_json()),
            Format::Dot => lattice.to_dot(),
            Format::Report => {
                let n = lattice.count_paths();
                format!("states {} edges {} paths {n}\n", lattice.num_states(), lattice.edges().len())
            }
        })
    }

    fn tag(&mut self, texts: &[String]) -> Result<(), Exit> {
        let lexicon = self.lexicon()?;
        for text in texts {
            let lattice = lexicon.tag_text(text)?;
            let rendered = self.render(&lattice)?;
            self.emit(&rendered)?;
        }
        Ok(())
    }

    fn apply(&mut self, texts: &[String]) -> Result<(), Exit> {
        let lexicon = self.lexicon()?;
        let grammars = self.grammars()?;
        let union = self.combined(&grammars)?;
        for text in texts {
            let lattice = lexicon.tag_text(text)?;
            let Filtered { lattice: filtered, emptied } = match &union {
                Some(g) => filter(g, &lattice),
                None => filter_sequential(&grammars, &lattice),
            };
            let rendered = if self.args.format == Format::Report {
                format!("paths {} -> {}\n", lattice.count_paths(), filtered.count_paths())
            } else {
                self.render(&filtered)?
            };
            self.emit(&rendered)?;
            if emptied && lattice.num_states() > 0 {
                self.code = EXIT_EMPTY;
            }
        }
        if self.code == EXIT_EMPTY {
            return Err(Exit(EXIT_EMPTY, "warning: the grammars rejected every tagging of a sentence".into()));
        }
        Ok(())
    }

    fn check(&mut self, corpus_path: &FsPath) -> Result<(), Exit> {
        let lexicon = self.lexicon()?;
        let grammars = self.grammars()?;
        let corpus = parse_corpus(&read(corpus_path)?)
            .map_err(|e| Exit(EXIT_BAD_INPUT, format!("{}: {e}", corpus_path.display())))?;
        let report = silence_check(&grammars, self.args.sequential, &corpus, &lexicon);
        let rendered = if self.args.json {
            format!("{}\n", serde_json::to_string_pretty(&report).expect("reports serialize"))
        } else {
            report.to_string()
        };
        self.emit(&rendered)?;
        if !report.violations.is_empty() {
            self.code = EXIT_SILENCE;
        }
        Ok(())
    }

    fn diff(&mut self, texts: &[String]) -> Result<(), Exit> {
        let lexicon = self.lexicon()?;
        let grammars = self.grammars()?;
        let union = self.combined(&grammars)?;
        let limit = self.args.limit;
        for text in texts {
            let lattice = lexicon.tag_text(text)?;
            let equal = match &union {
                Some(g) => same_language(&filter(g, &lattice).lattice, &filter_oracle(g, &lattice, limit)?, limit)?,
                None => {
                    // Each stage sees the previous stage's lattice, so the
                    // oracle chain continues from the same (minimal) automaton
                    // the filter chain produces, not from its own prefix tree.
                    let mut oracle = lattice.clone();
                    for g in &grammars {
                        oracle = filter_oracle(g, &oracle, limit)?.minimize();
                    }
                    same_language(&filter_sequential(&grammars, &lattice).lattice, &oracle, limit)?
                }
            };
            self.verdict(equal, None)?;
        }
        Ok(())
    }

    fn diff_random(&mut self, seed: u64) -> Result<(), Exit> {
        let limit = self.args.limit;
        for i in 0..self.args.instances as u64 {
            let s = seed.wrapping_add(i);
            let inst = random::instance(&mut random::rng(s), Shape::Any);
            let lattice = inst.lexicon.tag_text(&inst.text)?;
            let oracle = filter_oracle(&inst.grammar, &lattice, limit)?;
            let equal = same_language(&filter(&inst.grammar, &lattice).lattice, &oracle, limit)?;
            if !equal {
                return self.verdict(false, Some(s));
            }
        }
        self.verdict(true, None)
    }

    fn verdict(&mut self, equal: bool, seed: Option<u64>) -> Result<(), Exit> {
        let line = match (equal, seed) {
            (true, _) => "EQUAL\n".to_string(),
            (false, None) => "DIFFERENT\n".to_string(),
            (false, Some(s)) => format!("DIFFERENT seed {s}\n"),
        };
        if !equal {
            self.code = EXIT_SILENCE;
        }
        self.emit(&line)
    }
}

fn same_language(a: &Lattice, b: &Lattice, limit: usize) -> Result<bool, Exit> {
    a.language_equal(b, limit).map_err(|e| Exit::from(EngineError::from(e)))
}
