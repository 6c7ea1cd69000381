use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gknot_core::format::{
    parse_document, parse_element_list, parse_element_pairs, parse_homomorphism, DiagramEntry, Document,
};
use gknot_core::functors::{self, Quotient, Subgroup};
use gknot_core::invariants::{self, InvariantOptions, NaOptions, TrivialQuotient};
use gknot_core::surface::{self, RotationSystem};
use gknot_core::{Error, SearchBudget, SearchOutcome};

mod report;

use report::Report;

#[derive(Parser)]
#[command(name = "gknot", version, about = "Free knots with group-labeled vertices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,

    /// Worker threads for search and enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// State cap for orbit canonicalization.
    #[arg(long, global = true, default_value_t = invariants::DEFAULT_ORBIT_CAP)]
    orbit_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quotienting {
    /// Drop terms with at least one trivial component.
    AtLeastOne,
    /// Drop terms whose shadow is exactly one trivial component plus the rest.
    ExactlyOne,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check diagram files.
    Validate { files: Vec<PathBuf> },
    /// Every invariant that applies to each diagram.
    Invariants { file: PathBuf },
    /// Parity bracket of Z2 diagrams.
    Bracket { file: PathBuf },
    /// Group bracket.
    Gbracket { file: PathBuf },
    /// Delta (sum over all vertices) or its pair-keyed refinement.
    Delta {
        file: PathBuf,
        /// One combination per pair {g, g^-1}.
        #[arg(long)]
        split: bool,
        /// Only vertices labeled g or g^-1.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, value_enum, default_value_t = Quotienting::AtLeastOne)]
        trivial: Quotienting,
    },
    /// Covering over the quotient by a subgroup of an abelian group.
    Cover {
        file: PathBuf,
        /// Comma separated subgroup elements.
        #[arg(long)]
        subgroup: String,
        /// Section images as `coset member=image, ...`.
        #[arg(long)]
        section: Option<String>,
    },
    /// Delete the vertices labeled outside a subgroup.
    Project {
        file: PathBuf,
        #[arg(long)]
        subgroup: String,
    },
    /// Relabel along a homomorphism read from a file.
    Pushforward {
        file: PathBuf,
        #[arg(long)]
        hom: PathBuf,
    },
    /// Look for a move path between two diagrams.
    Search {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 6)]
        vertex_budget: usize,
        #[arg(long, default_value_t = 100_000)]
        node_budget: usize,
    },
    /// Faces and genus of an embedding given by the rotation stanza.
    Faces { file: PathBuf },
    /// Group presentation read off a checkerboard embedding.
    Presentation { file: PathBuf },
    /// Classes of good diagrams with k vertices and their minimality status.
    Enumerate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 6)]
        vertex_budget: usize,
        #[arg(long, default_value_t = 10_000)]
        node_budget: usize,
    },
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<Document, Error> {
    parse_document(&read(path)?).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Domain(format!("{}:{pos}: {msg}", path.display())),
        other => other,
    })
}

fn load_one(path: &PathBuf) -> Result<DiagramEntry, Error> {
    let mut doc = load(path)?;
    if doc.diagrams.len() != 1 {
        return Err(Error::Domain(format!("{}: expected one diagram, found {}", path.display(), doc.diagrams.len())));
    }
    Ok(doc.diagrams.remove(0))
}

fn for_each(
    path: &PathBuf,
    mut f: impl FnMut(&DiagramEntry, &mut Report) -> Result<(), Error>,
) -> Result<Report, Error> {
    let doc = load(path)?;
    let mut r = Report::default();
    r.line(doc.group.to_text());
    for (i, d) in doc.diagrams.iter().enumerate() {
        r.begin_diagram(i, &d.diagram);
        f(d, &mut r)?;
        r.end_diagram();
    }
    Ok(r)
}

fn options(cli: &Cli, trivial: TrivialQuotient) -> InvariantOptions {
    InvariantOptions { orbit_cap: cli.orbit_cap, trivial }
}

fn subgroup(group: &gknot_core::GroupSpec, text: &str) -> Result<Subgroup, Error> {
    Subgroup::new(group, &parse_element_list(group, text)?)
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let opts = options(cli, TrivialQuotient::AtLeastOne);
    match &cli.command {
        Command::Validate { files } => {
            let mut r = Report::default();
            for path in files {
                let doc = load(path)?;
                r.line(format!("file {}", path.display()));
                r.line(doc.group.to_text());
                for (i, d) in doc.diagrams.iter().enumerate() {
                    r.begin_diagram(i, &d.diagram);
                    r.end_diagram();
                }
            }
            Ok(r)
        }
        Command::Invariants { file } => for_each(file, |d, r| {
            let k = &d.diagram;
            let one = k.shadow().component_count() == 1;
            if one && k.group().order() == Some(2) && k.group().is_abelian() {
                r.combination("bracket", &invariants::parity_bracket(k)?);
            }
            r.combination("gbracket", &invariants::group_bracket_with(k, &opts)?);
            if one {
                r.combination("delta", &invariants::delta_with(k, &opts)?);
                for (pair, c) in invariants::delta_full_with(k, &opts)? {
                    r.combination(&format!("delta {pair}"), &c);
                }
                r.field("lower_bound", invariants::crossing_lower_bound_with(k, &opts)?);
            }
            Ok(())
        }),
        Command::Bracket { file } => for_each(file, |d, r| {
            r.combination("bracket", &invariants::parity_bracket(&d.diagram)?);
            Ok(())
        }),
        Command::Gbracket { file } => for_each(file, |d, r| {
            r.combination("gbracket", &invariants::group_bracket_with(&d.diagram, &opts)?);
            Ok(())
        }),
        Command::Delta { file, split, pair, trivial } => {
            let trivial = match trivial {
                Quotienting::AtLeastOne => TrivialQuotient::AtLeastOne,
                Quotienting::ExactlyOne => TrivialQuotient::ExactlyOne,
            };
            let opts = options(cli, trivial);
            for_each(file, |d, r| {
                let k = &d.diagram;
                if let Some(p) = pair {
                    let g = k.group().parse_element(p)?;
                    let key = k.group().inversion_pair_key(&g)?;
                    r.combination(&format!("delta {key}"), &invariants::delta_g_with(k, &key, &opts)?);
                } else if *split {
                    for (pair, c) in invariants::delta_full_with(k, &opts)? {
                        r.combination(&format!("delta {pair}"), &c);
                    }
                } else {
                    r.combination("delta", &invariants::delta_with(k, &opts)?);
                }
                Ok(())
            })
        }
        Command::Cover { file, subgroup: sub, section } => for_each(file, |d, r| {
            let s = subgroup(d.diagram.group(), sub)?;
            let t = match section {
                Some(text) => Some(Quotient::new(&s)?.section(&parse_element_pairs(d.diagram.group(), text)?)?),
                None => None,
            };
            let c = functors::cover(&d.diagram, &s, t.as_ref())?;
            r.field("sheets", c.sheets);
            r.field("cover_components", c.graph.shadow().component_count());
            let lifts: Vec<String> = c.lifts.iter().map(|&(v, i)| format!("{}^{i}", d.names[v])).collect();
            r.field("lifts", lifts.join(" "));
            let mixed: Vec<String> = (0..c.graph.vertex_count())
                .filter(|&v| functors::is_mixed(c.graph.shadow(), v))
                .map(|v| lifts[v].clone())
                .collect();
            r.field("mixed", mixed.join(" "));
            r.diagram("cover", &c.graph);
            Ok(())
        }),
        Command::Project { file, subgroup: sub } => for_each(file, |d, r| {
            let s = subgroup(d.diagram.group(), sub)?;
            r.diagram("projection", &functors::project(&d.diagram, &s)?);
            Ok(())
        }),
        Command::Pushforward { file, hom } => {
            let hom_text = read(hom)?;
            for_each(file, |d, r| {
                let h = parse_homomorphism(&hom_text, d.diagram.group())?;
                r.diagram("pushforward", &functors::pushforward(&d.diagram, &h)?);
                Ok(())
            })
        }
        Command::Search { first, second, vertex_budget, node_budget } => {
            let (a, b) = (load_one(first)?, load_one(second)?);
            let mut r = Report::default();
            r.begin_diagram(0, &a.diagram);
            r.end_diagram();
            r.begin_diagram(1, &b.diagram);
            r.end_diagram();
            let budget = SearchBudget { vertex_budget: *vertex_budget, node_budget: *node_budget };
            match gknot_core::equivalence_search(&a.diagram, &b.diagram, budget)? {
                SearchOutcome::Proven(path) => {
                    r.field("result", "proven");
                    r.field("length", path.steps.len());
                    r.block("path", path.to_text(a.diagram.group()));
                }
                SearchOutcome::NotFoundWithinBudget { expanded } => {
                    r.field("result", "not found within budget");
                    r.field("expanded", expanded);
                    r.code = 2;
                }
            }
            Ok(r)
        }
        Command::Faces { file } => for_each(file, |d, r| {
            let rot = rotation(d);
            let emb = surface::faces(d.diagram.shadow(), &rot)?;
            r.field("rotation", rotation_text(d, &rot));
            r.field("faces", emb.face_count());
            r.field("genus", emb.genus());
            for (i, f) in emb.faces.iter().enumerate() {
                let corners: Vec<String> = f.iter().map(|&h| format!("{}.{}", d.names[h / 4], h % 4)).collect();
                r.field(&format!("face {i}"), corners.join(" "));
            }
            let colors = surface::checkerboard_coloring(d.diagram.shadow(), &rot)?;
            r.field("checkerboard", match colors {
                Some(c) => c.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>(),
                None => "no".to_string(),
            });
            Ok(())
        }),
        Command::Presentation { file } => for_each(file, |d, r| {
            let rot = rotation(d);
            let o = d
                .diagram
                .orientation()
                .ok_or_else(|| Error::Domain("a presentation needs a good diagram".into()))?;
            let p = surface::presentation(d.diagram.shadow(), &rot, o)?;
            r.field("rotation", rotation_text(d, &rot));
            let gens: Vec<String> = (0..p.generators.len()).map(|v| d.names[v].clone()).collect();
            r.field("gens", gens.join(" "));
            for rel in &p.relators {
                let w: Vec<&str> = rel.iter().map(|&v| d.names[v].as_str()).collect();
                r.field("rel", w.join(" "));
            }
            r.field("abelianization", surface::abelianization(&p));
            Ok(())
        }),
        Command::Enumerate { group, vertices, vertex_budget, node_budget } => {
            let g = gknot_core::GroupSpec::parse(group)?;
            let na = NaOptions {
                invariants: opts,
                search: SearchBudget { vertex_budget: *vertex_budget, node_budget: *node_budget },
            };
            let mut r = Report::default();
            r.line(g.to_text());
            for (i, e) in invariants::na_enumeration(&g, *vertices, &na)?.iter().enumerate() {
                r.begin_diagram(i, &e.diagram);
                r.field("lower_bound", e.lower_bound);
                r.field("status", format!("{:?}", e.status));
                if let Some(k) = &e.equivalent_to {
                    r.field("equivalent_to", k);
                }
                r.end_diagram();
            }
            Ok(r)
        }
    }
}

fn rotation(d: &DiagramEntry) -> RotationSystem {
    d.rotation.clone().unwrap_or_else(|| RotationSystem::uniform(d.diagram.vertex_count()))
}

fn rotation_text(d: &DiagramEntry, rot: &RotationSystem) -> String {
    let parts: Vec<String> = rot.bits.iter().enumerate().map(|(v, &b)| format!("{}={}", d.names[v], b as u8)).collect();
    parts.join(", ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                OutputFormat::Text => print!("{}", r.text),
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&r.json()).expect("json")),
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            match cli.format {
                OutputFormat::Text => eprintln!("error: {e}"),
                OutputFormat::Json => println!("{}", json!({ "error": e.to_string() })),
            }
            ExitCode::from(if e.is_budget() { 2 } else { 1 })
        }
    }
}
