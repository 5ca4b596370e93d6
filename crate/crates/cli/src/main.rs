use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use surfrep::attainable::{lpq, AttainableSetDescription};
use surfrep::complex::ComplexSpec;
use surfrep::covers::{enumerate_covers, EnumerationOptions, SurfaceAssembly};
use surfrep::encoding::{export_json, parse_class, parse_complex, parse_rational, parse_weights, print_class, print_complex, print_weights};
use surfrep::homology::{h2_group, validate_class, ClassExpression};
use surfrep::instances::builtin;
use surfrep::pipeline::{run_attainable, stabilization_report, BoundSource, PipelineError, PipelineOptions};
use surfrep::render::{render_ascii, render_svg};
use surfrep::weights::{degree_bound, validate_weight_function, LinkCycle, WeightFunction};

#[derive(Parser)]
#[command(name = "surfrep", version, about = "Attainable sets of surface representatives of H₂ classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a complex.
    Validate(Common),
    /// Second homology, or a check of `--class`.
    Homology(Common),
    /// Check a weight function.
    Weights(Common),
    /// Enumerate cellwise coverings without folds up to a degree bound.
    Enumerate(Common),
    /// Compute the attainable set of a class.
    Attainable(Common),
    /// Evaluate l_{p,q} on the attainable set.
    Lpq {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// χ⁻(nα)/n and 2g(nα)/n for n = 1..N.
    Stable {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n: u64,
        /// Comma-separated degree bounds for α, 2α, …; the last one repeats.
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Print a built-in complex, or its default class or weights.
    Gen {
        name: String,
        #[arg(long, value_enum, default_value_t = GenPart::Complex)]
        emit: GenPart,
    },
    /// Draw an attainable-set description (JSON, as printed by `attainable --format json`).
    Render {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        #[arg(long)]
        window: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Complex file, `-` for stdin, or a built-in such as `@handlebody`.
    input: String,
    /// Class as `X=1,Y=-2`; built-ins supply a default.
    #[arg(long, allow_hyphen_values = true)]
    class: Option<String>,
    /// Weight file with `cell.component.position = p/q` lines.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    max_degree: Option<u64>,
    /// χ⁻ × g window for pictures, e.g. `8x6`.
    #[arg(long)]
    window: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    no_prune: bool,
    #[arg(long, env = "GENUS_THREADS", default_value_t = 1)]
    threads: usize,
    /// Write one witness surface per point as JSON.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    /// Drop non-orientable cells first.
    #[arg(long)]
    orientable_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenPart {
    Complex,
    Class,
    Weights,
}

enum Failure {
    /// The input was understood but the computation says no.
    Domain(String),
    Usage(String),
}

type Outcome = Result<String, Failure>;

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_source(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{input}: {e}")))
}

struct Loaded {
    complex: ComplexSpec,
    class: Option<ClassExpression>,
    weights: Option<WeightFunction>,
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    let mut loaded = if c.input.starts_with('@') {
        let b = builtin(&c.input).map_err(|e| Failure::Usage(e.to_string()))?;
        Loaded {
            complex: b.complex,
            class: b.class,
            weights: b.weights,
        }
    } else {
        Loaded {
            complex: parse_complex(&read_source(&c.input)?).map_err(domain)?,
            class: None,
            weights: None,
        }
    };
    if let Some(text) = &c.class {
        loaded.class = Some(parse_class(text, &loaded.complex).map_err(domain)?);
    }
    if let Some(path) = &c.weights {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        loaded.weights = Some(parse_weights(&text, &loaded.complex).map_err(domain)?);
    }
    Ok(loaded)
}

fn options(c: &Common) -> PipelineOptions {
    PipelineOptions {
        enumeration: EnumerationOptions {
            prune: !c.no_prune,
            threads: c.threads.max(1),
            ..EnumerationOptions::default()
        },
        restrict_orientable: c.orientable_only,
    }
}

fn class_of(l: &Loaded) -> Result<&ClassExpression, Failure> {
    l.class
        .as_ref()
        .ok_or_else(|| Failure::Usage("--class is required for this input".into()))
}

/// `--max-degree` overrides a built-in's weights; the zero class needs
/// neither.
fn bound_of(c: &Common, l: &Loaded, class: &ClassExpression) -> Result<BoundSource, Failure> {
    if c.weights.is_some() && c.max_degree.is_some() {
        return Err(Failure::Usage("give only one of --weights and --max-degree".into()));
    }
    match (c.max_degree, &l.weights) {
        (Some(d), _) => Ok(BoundSource::MaxDegree(d)),
        (None, Some(w)) => Ok(BoundSource::Weights(w.clone())),
        (None, None) if class.values().all(|&n| n == 0) => Ok(BoundSource::MaxDegree(0)),
        (None, None) => Err(Failure::Usage("give --weights or --max-degree".into())),
    }
}

fn pipeline_error(e: PipelineError) -> Failure {
    match e {
        PipelineError::InvalidWeights(report) => {
            Failure::Domain(format!("weight function is invalid:\n{}", export_json(&*report)))
        }
        e => Failure::Domain(e.to_string()),
    }
}

fn parse_window(w: &Option<String>, d: &AttainableSetDescription) -> Result<(i64, i64), Failure> {
    match w {
        Some(text) => {
            let (a, b) = text
                .split_once(['x', 'X', '×'])
                .ok_or_else(|| Failure::Usage(format!("window `{text}` is not WxH")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Failure::Usage(format!("window `{text}` is not WxH")))
            };
            Ok((num(a)?, num(b)?))
        }
        None => {
            let chi = d.minima.iter().map(|m| m.chi_minus).max().unwrap_or(0);
            let g = d.minima.iter().map(|m| m.genus).max().unwrap_or(0);
            Ok((chi + 8, g + 4))
        }
    }
}

fn show_description(d: &AttainableSetDescription, format: Format, window: &Option<String>) -> Outcome {
    Ok(match format {
        Format::Json => export_json(d),
        Format::Ascii => {
            let (w, h) = parse_window(window, d)?;
            render_ascii(d, w, h)
        }
        Format::Svg => {
            let (w, h) = parse_window(window, d)?;
            render_svg(d, w, h)
        }
        Format::Text => {
            let minima: Vec<String> = d.minima.iter().map(|m| format!("({},{})", m.chi_minus, m.genus)).collect();
            let mut s = format!("minima: {}\n", minima.join(" "));
            s += &format!("chi_minus: {}\ngenus: {}\nn0: {}\n", d.chi_minus, d.genus, d.n0);
            s += &format!("g_c: {}\nchi_c: {}\n", d.g_c, d.chi_c);
            s += &format!("sphere_case: {}\nbound_used: {}\ncertified: {}", d.sphere_case, d.bound_used, d.certified);
            s
        }
    })
}

fn write_witnesses(path: &Option<PathBuf>, witnesses: Vec<&SurfaceAssembly>) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, export_json(&witnesses) + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(c) => {
            let l = load(&c)?;
            let k = &l.complex;
            Ok(match c.format {
                Format::Json => export_json(&serde_json::json!({
                    "valid": true,
                    "zero_cells": k.zero_cells().len(),
                    "one_cells": k.one_cells().len(),
                    "two_cells": k.two_cells().len(),
                })),
                _ => format!(
                    "ok: {} 0-cells, {} 1-cells, {} 2-cells",
                    k.zero_cells().len(),
                    k.one_cells().len(),
                    k.two_cells().len()
                ),
            })
        }
        Command::Homology(c) => {
            let l = load(&c)?;
            if let (Some(_), Some(class)) = (&c.class, &l.class) {
                let h = validate_class(&l.complex, class).map_err(domain)?;
                return Ok(match c.format {
                    Format::Json => export_json(&h.coefficients),
                    _ => format!("cycle: {}", print_class(&h.coefficients)),
                });
            }
            let h = h2_group(&l.complex);
            Ok(match c.format {
                Format::Json => export_json(&h),
                _ => {
                    let mut s = format!("rank: {}\ncells: {}", h.rank, h.cells.join(" "));
                    for b in &h.basis {
                        let row: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                        s += &format!("\n[{}]", row.join(" "));
                    }
                    s
                }
            })
        }
        Command::Weights(c) => {
            let l = load(&c)?;
            let w = l
                .weights
                .as_ref()
                .ok_or_else(|| Failure::Usage("--weights is required for this input".into()))?;
            let report = validate_weight_function(&l.complex, w).map_err(domain)?;
            let text = match c.format {
                Format::Json => export_json(&report),
                _ => {
                    let mut s = format!("valid: {}", report.valid);
                    for (x, v) in &report.chi_w {
                        s += &format!("\nchi_w {x} = {v}");
                    }
                    for (v, m) in &report.min_link_cycle {
                        let m = match m {
                            LinkCycle::Min { weight, .. } => weight.to_string(),
                            LinkCycle::Negative { .. } => "negative".into(),
                            LinkCycle::None => "none".into(),
                        };
                        s += &format!("\nmin link cycle {v} = {m}");
                    }
                    for f in &report.failures {
                        s += &format!("\nfailure: {}", serde_json::to_string(f).unwrap());
                    }
                    s
                }
            };
            if report.valid {
                Ok(text)
            } else {
                Err(Failure::Domain(text))
            }
        }
        Command::Enumerate(c) => {
            let l = load(&c)?;
            let class = class_of(&l)?;
            let alpha = validate_class(&l.complex, class).map_err(domain)?;
            let bound = match bound_of(&c, &l, class)? {
                BoundSource::MaxDegree(d) => d,
                BoundSource::Weights(w) => {
                    degree_bound(&l.complex, &w, &alpha).map_err(domain)?.c
                }
            };
            if alpha.is_zero() {
                return Err(Failure::Domain("the zero class has no coverings to enumerate".into()));
            }
            let e = enumerate_covers(&l.complex, &alpha, bound, &options(&c).enumeration).map_err(domain)?;
            write_witnesses(&c.witness_out, e.points.values().map(|r| &r.witness).collect())?;
            Ok(match c.format {
                Format::Json => export_json(&e),
                _ => {
                    let mut s = format!("total_degree_bound: {}\nwitnesses: {}", e.total_degree_bound, e.witnesses());
                    for (p, r) in &e.points {
                        s += &format!("\n({},{},{}) x{}", p.chi_minus, p.genus, p.n0, r.witnesses);
                    }
                    s
                }
            })
        }
        Command::Attainable(c) => {
            let l = load(&c)?;
            let class = class_of(&l)?;
            let bound = bound_of(&c, &l, class)?;
            let r = run_attainable(&l.complex, class, &bound, &options(&c)).map_err(pipeline_error)?;
            write_witnesses(&c.witness_out, r.enumeration.points.values().map(|r| &r.witness).collect())?;
            show_description(&r.description, c.format, &c.window)
        }
        Command::Lpq { common: c, p, q } => {
            let l = load(&c)?;
            let class = class_of(&l)?;
            let bound = bound_of(&c, &l, class)?;
            let rational = |s: &str| parse_rational(s).ok_or_else(|| Failure::Usage(format!("`{s}` is not a rational")));
            let (p, q) = (rational(&p)?, rational(&q)?);
            let r = run_attainable(&l.complex, class, &bound, &options(&c)).map_err(pipeline_error)?;
            let v = lpq(&r.description, &p, &q);
            Ok(match c.format {
                Format::Json => export_json(&serde_json::json!({
                    "p": p.to_string(),
                    "q": q.to_string(),
                    "value": v.to_string(),
                    "certified": r.description.certified,
                })),
                _ => v.to_string(),
            })
        }
        Command::Stable { common: c, n, bounds } => {
            let l = load(&c)?;
            let class = class_of(&l)?;
            let sources: Vec<BoundSource> = match bounds {
                Some(list) => list
                    .split(',')
                    .map(|b| {
                        b.trim()
                            .parse()
                            .map(BoundSource::MaxDegree)
                            .map_err(|_| Failure::Usage(format!("bad bound `{b}`")))
                    })
                    .collect::<Result<_, _>>()?,
                None => vec![bound_of(&c, &l, class)?],
            };
            let report = stabilization_report(&l.complex, class, n, &sources, &options(&c)).map_err(pipeline_error)?;
            Ok(match c.format {
                Format::Json => export_json(&report),
                _ => {
                    let mut s = String::from("n chi_minus genus chi/n 2g/n certified");
                    for r in &report.rows {
                        s += &format!(
                            "\n{} {} {} {} {} {}",
                            r.n, r.chi_minus, r.genus, r.chi_ratio, r.genus_ratio, r.certified
                        );
                    }
                    s += &format!("\nestimated stable cone: {} <= chi <= 2g", report.chi_estimate);
                    s
                }
            })
        }
        Command::Gen { name, emit } => {
            let b = builtin(&name).map_err(|e| Failure::Usage(e.to_string()))?;
            match emit {
                GenPart::Complex => Ok(print_complex(&b.complex)),
                GenPart::Class => b
                    .class
                    .map(|c| print_class(&c))
                    .ok_or_else(|| Failure::Domain(format!("{name} has no default class"))),
                GenPart::Weights => b
                    .weights
                    .map(|w| print_weights(&w).trim_end().to_string())
                    .ok_or_else(|| Failure::Domain(format!("{name} has no weight function"))),
            }
        }
        Command::Render { input, format, window } => {
            let d: AttainableSetDescription = serde_json::from_str(&read_source(&input)?)
                .map_err(|e| Failure::Usage(format!("{input}: {e}")))?;
            show_description(&d, format, &window)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            // a closed pipe (`| head`) is not an error
            let _ = writeln!(io::stdout(), "{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
