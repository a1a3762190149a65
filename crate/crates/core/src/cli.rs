//! The `hgpd` command line: fixtures, conversions and verification reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
//! or schema errors. A file argument of `-` reads standard input.

use crate::document::{emit, parse, Document, MapDocument};
use crate::equivalence::{
    bounded_one_morita_search, fiber_product_two_groupoid, is_equivalence, is_one_equivalence, MoritaOutcome,
    StrictTwoGroupoidMap,
};
use crate::groupoid::{compose_bibundles, verify_bibundle, verify_groupoid, FiniteGroup, FiniteGroupoid};
use crate::report::Report;
use crate::simplicial::{verify_n_groupoid, TruncatedSimplicialSet};
use crate::stacky::{from_two_groupoid, inverse_bibundle, ordinary_groupoid_stacky, to_two_groupoid, verify_stacky};
use crate::two_groupoid::{cech_fixture, crossed_module_fixture, groupoid_nerve, nerve2, truncate_to_data, verify_two_groupoid, CrossedModule};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::{Read, Write};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "hgpd", version, about = "Finite higher groupoids: verify, convert and compare")]
pub struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify a document against the laws of its kind.
    Check {
        #[arg(default_value = "-")]
        file: String,
        /// Interpret the document as this kind.
        #[arg(long = "as", value_enum)]
        as_kind: Option<Kind>,
        /// Also check the Kan conditions of an n-groupoid.
        #[arg(long)]
        n_groupoid: Option<usize>,
        /// Highest dimension for the Kan conditions.
        #[arg(long)]
        up_to: Option<usize>,
    },
    /// Nerve of a groupoid or of 2-groupoid data, up to level N.
    Nerve {
        #[arg(default_value = "-")]
        file: String,
        #[arg(short = 'N', long = "level")]
        level: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// First three layers and m tables of a 2-groupoid simplicial set.
    Truncate {
        #[arg(default_value = "-")]
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stacky groupoid from 2-groupoid data or from an ordinary groupoid.
    ToStacky {
        #[arg(default_value = "-")]
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// 2-groupoid data from a stacky groupoid.
    FromStacky {
        #[arg(default_value = "-")]
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Whether a map is an equivalence (or a 1-equivalence) of the given degree.
    Equiv {
        map: String,
        #[arg(long)]
        one: bool,
        /// Defaults to 2 for maps of 2-groupoid data and 1 otherwise.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Levelwise fiber product of two maps of 2-groupoid data with a common target.
    FiberProduct {
        first: String,
        second: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Composite `E ⊗ F` of two bibundles.
    ComposeBibundle {
        first: String,
        second: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The inverse bibundle derived from a stacky groupoid's multiplication.
    InverseBibundle {
        #[arg(default_value = "-")]
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a built-in fixture: point, pair:K, group:cyclic:M, xmod:Z2Z2, cech, ordinary-groupoid[:pair:K].
    Fixture {
        name: String,
        /// For `cech`: the points, then one comma-separated list per chart.
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bounded search for a 1-Morita equivalence between two 2-groupoids.
    MoritaSearch {
        first: String,
        second: String,
        #[arg(long, default_value_t = 8)]
        bound: usize,
        /// Write the middle 2-groupoid of a found zig-zag here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Simplicial,
    TwoGroupoid,
    Groupoid,
    Bibundle,
    Stacky,
}

/// Failure of a command: 1 for failed laws, 2 for unusable input.
enum Failure {
    Law(String),
    Input(String),
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn read(&mut self, file: &str) -> Result<Document, Failure> {
        let text = if file == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{file}: {e}")))?
        };
        parse(&text).map_err(|e| Failure::Input(format!("{file}: {e}")))
    }

    fn write(&mut self, doc: &Document, output: &Option<PathBuf>) -> Outcome {
        let text = emit(doc);
        match output {
            Some(p) if p.as_os_str() != "-" => {
                std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
            }
            _ => self.stdout.write_all(text.as_bytes()).map_err(|e| Failure::Input(e.to_string()))?,
        }
        Ok(0)
    }

    fn report(&mut self, r: &Report) -> Outcome {
        let text = if self.json {
            let mut v = serde_json::to_value(r).expect("reports serialize");
            v["verdict"] = r.verdict().into();
            serde_json::to_string_pretty(&v).expect("reports serialize") + "\n"
        } else {
            r.to_string()
        };
        self.stdout.write_all(text.as_bytes()).map_err(|e| Failure::Input(e.to_string()))?;
        Ok(if r.passed() { 0 } else { 1 })
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run(args: impl IntoIterator<Item = String>, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, stdout, json: cli.json };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure::Law(msg)) => {
            let _ = writeln!(stderr, "FAIL: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn wrong_kind(file: &str, doc: &Document, want: &str) -> Failure {
    Failure::Input(format!("{file}: expected a {want} document, found {}", doc.kind()))
}

fn two_groupoid_map(file: &str, doc: Document) -> Result<StrictTwoGroupoidMap, Failure> {
    match doc {
        Document::Map(MapDocument::TwoGroupoid(f)) => Ok(f),
        other => Err(wrong_kind(file, &other, "map of 2-groupoid data")),
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Check { file, as_kind, n_groupoid, up_to } => {
            let doc = io.read(&file)?;
            check(&file, doc, as_kind, n_groupoid, up_to, io)
        }
        Command::Nerve { file, level, output } => {
            let nerve = match io.read(&file)? {
                Document::Groupoid(g) => groupoid_nerve(&g, level),
                Document::TwoGroupoid(d) => nerve2(&d, level).map_err(Failure::Law)?,
                other => return Err(wrong_kind(&file, &other, "groupoid or two_groupoid")),
            };
            io.write(&Document::Simplicial(nerve), &output)
        }
        Command::Truncate { file, output } => match io.read(&file)? {
            Document::Simplicial(x) => {
                let d = truncate_to_data(&x).map_err(|e| Failure::Law(e.to_string()))?;
                io.write(&Document::TwoGroupoid(d), &output)
            }
            other => Err(wrong_kind(&file, &other, "simplicial")),
        },
        Command::ToStacky { file, output } => {
            let d = match io.read(&file)? {
                Document::TwoGroupoid(x) => from_two_groupoid(&x).map_err(Failure::Law)?,
                Document::Groupoid(g) => {
                    let r = verify_groupoid(&g);
                    if !r.passed() {
                        return io.report(&r);
                    }
                    ordinary_groupoid_stacky(&g)
                }
                other => return Err(wrong_kind(&file, &other, "two_groupoid or groupoid")),
            };
            io.write(&Document::Stacky(Box::new(d)), &output)
        }
        Command::FromStacky { file, output } => match io.read(&file)? {
            Document::Stacky(d) => {
                let x = to_two_groupoid(&d).map_err(Failure::Law)?;
                io.write(&Document::TwoGroupoid(x), &output)
            }
            other => Err(wrong_kind(&file, &other, "stacky")),
        },
        Command::Equiv { map, one, degree } => {
            let f = match io.read(&map)? {
                Document::Map(MapDocument::Simplicial(f)) => (f, degree.unwrap_or(1)),
                Document::Map(MapDocument::TwoGroupoid(f)) => (f.as_simplicial(), degree.unwrap_or(2)),
                other => return Err(wrong_kind(&map, &other, "map")),
            };
            io.report(&if one { is_one_equivalence(&f.0, f.1) } else { is_equivalence(&f.0, f.1) })
        }
        Command::FiberProduct { first, second, output } => {
            let f = two_groupoid_map(&first, io.read(&first)?)?;
            let g = two_groupoid_map(&second, io.read(&second)?)?;
            let fp = fiber_product_two_groupoid(&f, &g).map_err(Failure::Input)?;
            let mut r = Report::new("fiber product");
            r.absorb("product", verify_two_groupoid(&fp.product));
            if r.passed() {
                r.absorb("first projection", is_equivalence(&fp.left.as_simplicial(), 2));
                r.absorb("second projection", is_equivalence(&fp.right.as_simplicial(), 2));
            }
            if !r.passed() {
                return io.report(&r);
            }
            io.write(&Document::TwoGroupoid(fp.product), &output)
        }
        Command::ComposeBibundle { first, second, output } => {
            let e = match io.read(&first)? {
                Document::Bibundle(e) => e,
                other => return Err(wrong_kind(&first, &other, "bibundle")),
            };
            let f = match io.read(&second)? {
                Document::Bibundle(f) => f,
                other => return Err(wrong_kind(&second, &other, "bibundle")),
            };
            for (name, b) in [(&first, &e), (&second, &f)] {
                let r = verify_bibundle(b);
                if !r.passed() {
                    return Err(Failure::Law(format!("{name}: {}", r.first_failure().map_or(String::new(), |c| c.law.clone()))));
                }
            }
            let c = compose_bibundles(&e, &f).map_err(Failure::Input)?;
            io.write(&Document::Bibundle(c), &output)
        }
        Command::InverseBibundle { file, output } => match io.read(&file)? {
            Document::Stacky(d) => {
                let r = verify_stacky(&d);
                if !r.passed() {
                    return io.report(&r);
                }
                io.write(&Document::Bibundle(inverse_bibundle(&d)), &output)
            }
            other => Err(wrong_kind(&file, &other, "stacky")),
        },
        Command::Fixture { name, params, output } => {
            let doc = fixture(&name, &params).map_err(Failure::Input)?;
            io.write(&doc, &output)
        }
        Command::MoritaSearch { first, second, bound, output } => {
            let mut load = |file: &str| match io.read(file)? {
                Document::TwoGroupoid(x) => Ok(x),
                other => Err(wrong_kind(file, &other, "two_groupoid")),
            };
            let (x, y) = (load(&first)?, load(&second)?);
            for (file, d) in [(&first, &x), (&second, &y)] {
                let r = verify_two_groupoid(d);
                if !r.passed() {
                    return Err(Failure::Law(format!("{file} is not 2-groupoid data")));
                }
            }
            let mut r = Report::new(format!("1-Morita search with at most {bound} middle 1-cells"));
            match bounded_one_morita_search(&x, &y, bound) {
                MoritaOutcome::Witness(w) => {
                    r.pass("zig-zag of 1-equivalences found", "morita.search");
                    if output.is_some() {
                        io.write(&Document::TwoGroupoid(w.z), &output)?;
                    }
                }
                MoritaOutcome::Obstructed(why) => r.fail("1-Morita equivalent", "morita.invariants", why),
                MoritaOutcome::Exhausted => r.fail("zig-zag of 1-equivalences found", "morita.search", "no witness within the bound"),
            }
            io.report(&r)
        }
    }
}

fn kan_subject(doc: &Document, up_to: Option<usize>) -> Result<TruncatedSimplicialSet, Failure> {
    let top = up_to.unwrap_or(4);
    match doc {
        Document::Simplicial(x) => Ok(x.clone()),
        Document::Groupoid(g) => Ok(groupoid_nerve(g, top)),
        Document::TwoGroupoid(d) => nerve2(d, top).map_err(Failure::Law),
        other => Err(Failure::Input(format!("no simplicial set underlies a {} document", other.kind()))),
    }
}

fn check(file: &str, doc: Document, as_kind: Option<Kind>, n_groupoid: Option<usize>, up_to: Option<usize>, io: &mut Io) -> Outcome {
    let mut r = match (&doc, as_kind) {
        (Document::Simplicial(x), None | Some(Kind::Simplicial)) => x.verify(),
        (Document::TwoGroupoid(d), Some(Kind::Simplicial)) => d.layers.verify(),
        (Document::TwoGroupoid(d), None | Some(Kind::TwoGroupoid)) => verify_two_groupoid(d),
        (Document::Groupoid(g), None | Some(Kind::Groupoid)) => verify_groupoid(g),
        (Document::Bibundle(e), None | Some(Kind::Bibundle)) => verify_bibundle(e),
        (Document::Stacky(d), None | Some(Kind::Stacky)) => verify_stacky(d),
        (Document::Map(MapDocument::Simplicial(f)), None) => f.verify(),
        (Document::Map(MapDocument::TwoGroupoid(f)), None) => f.verify(),
        (_, Some(k)) => return Err(wrong_kind(file, &doc, &format!("{k:?}").to_lowercase())),
    };
    if let Some(n) = n_groupoid {
        if r.passed() {
            let x = kan_subject(&doc, up_to)?;
            let top = up_to.unwrap_or(x.top());
            r.absorb("", verify_n_groupoid(&x, n, top).map_err(|e| Failure::Input(e.to_string()))?);
        }
    }
    io.report(&r)
}

/// Built-in fixtures by name, with parameters after `:`.
pub fn fixture(name: &str, params: &[String]) -> Result<Document, String> {
    let parts: Vec<&str> = name.split(':').collect();
    let number = |s: &str| s.parse::<usize>().map_err(|_| format!("\"{s}\" is not a size")).and_then(|k| if k == 0 { Err("sizes start at 1".into()) } else { Ok(k) });
    let xmod = |cm: CrossedModule| crossed_module_fixture(&cm).map(Document::TwoGroupoid).map_err(|e| e.to_string());
    match parts[..] {
        ["point"] => xmod(CrossedModule::trivial(FiniteGroup::trivial(), FiniteGroup::trivial())),
        ["pair", k] => Ok(Document::Groupoid(FiniteGroupoid::pair(number(k)?))),
        ["group", "cyclic", m] => Ok(Document::Groupoid(FiniteGroupoid::from_group(&FiniteGroup::cyclic(number(m)?)))),
        ["xmod", "Z2Z2"] => xmod(CrossedModule::klein_trivial()),
        ["cech"] => {
            let (points, cover): (Vec<String>, Vec<Vec<String>>) = match params {
                [] => (
                    ["a", "b", "c"].map(String::from).to_vec(),
                    vec![vec!["a".into(), "b".into()], vec!["b".into(), "c".into()]],
                ),
                [points, charts @ ..] => {
                    let split = |s: &String| s.split(',').map(String::from).collect::<Vec<_>>();
                    (split(points), charts.iter().map(split).collect())
                }
            };
            let c = cech_fixture(&points, &cover, 2).map_err(|e| e.to_string())?;
            Ok(Document::Map(MapDocument::Simplicial(c.projection)))
        }
        ["ordinary-groupoid"] => Ok(Document::Stacky(Box::new(ordinary_groupoid_stacky(&FiniteGroupoid::pair(2))))),
        ["ordinary-groupoid", "pair", k] => Ok(Document::Stacky(Box::new(ordinary_groupoid_stacky(&FiniteGroupoid::pair(number(k)?))))),
        ["ordinary-groupoid", "group", "cyclic", m] => {
            Ok(Document::Stacky(Box::new(ordinary_groupoid_stacky(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(number(m)?))))))
        }
        _ => Err(format!("unknown fixture \"{name}\"; try point, pair:K, group:cyclic:M, xmod:Z2Z2, cech, ordinary-groupoid")),
    }
}
