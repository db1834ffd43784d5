mod batch;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use knotres::flype::{apply_flype, find_flypes, verify_invariance, TangleRegion, DEFAULT_BUDGET};
use knotres::invariants::{self, alexander};
use knotres::linalg::{self, format_rational, Polynomial, RationalMatrix};
use knotres::tait::{laplacian, tait_graph};
use serde_json::{json, Value};

use error::CliError;
use input::InputArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "knotres", version, about = "Exact resistance invariants of special alternating diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value = "json", global = true)]
    output: Output,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a diagram is connected, reduced, alternating, special and uniformly signed.
    Validate(InputArgs),
    /// Print the oriented Tait graph as an edge list.
    Tait(InputArgs),
    /// Weighted directed Laplacian of the Tait graph.
    Laplacian(InputArgs),
    /// The trace invariant tr(L^T L+).
    Fp(InputArgs),
    /// Every invariant and cross-check at once.
    Report(InputArgs),
    /// Alexander polynomial from a deleted-vertex minor of the Laplacian.
    Alexander {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        delete_vertex: usize,
    },
    /// Characteristic polynomial det(L - λI).
    Charpoly(InputArgs),
    /// Effective resistance matrix from the pseudoinverse.
    Resistance(InputArgs),
    /// List admissible flypes.
    FlypeList(InputArgs),
    /// Apply one flype, chosen by tangle spec or by its index in `flype-list`.
    FlypeApply {
        #[command(flatten)]
        input: InputArgs,
        /// Tangle JSON, inline or as a file path.
        #[arg(long, conflicts_with = "flype_index", required_unless_present = "flype_index")]
        tangle: Option<String>,
        #[arg(long)]
        flype_index: Option<usize>,
    },
    /// Explore the flype orbit and compare invariants across it.
    Orbit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// FP of every diagram in a manifest, grouped by value.
    Batch {
        /// Manifest of `name path` lines; defaults to the bundled one.
        manifest: Option<PathBuf>,
    },
}

fn strings(m: &RationalMatrix) -> Value {
    json!(m.to_strings())
}

fn matrix_table(m: &RationalMatrix) -> String {
    let cells = m.to_strings();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| row.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

fn kv_table(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn poly_json(p: &Polynomial, var: &str) -> Value {
    json!({ "coefficients": p.to_strings(), "display": p.display_in(var) })
}

/// Output of one command: a JSON value and its table rendering.
struct Rendered {
    json: Value,
    table: String,
}

fn run(command: Command) -> Result<Rendered, CliError> {
    Ok(match command {
        Command::Validate(args) => {
            let d = input::load_diagram(&args)?;
            let v = d.validate();
            let report = json!({
                "connected": v.connected,
                "alternating": v.alternating,
                "reduced": v.reduced,
                "special": v.special,
                "uniform_sign": v.uniform_sign,
                "accepted": v.accepted(),
                "crossings": d.crossing_count(),
                "components": d.component_count(),
                "writhe": d.writhe(),
            });
            if let Some(reason) = v.failure() {
                let mut e = CliError::new(reason, format!("diagram not accepted: {reason}"));
                e.report = Some(report);
                return Err(e);
            }
            let table = kv_table(&[
                ("connected", v.connected.to_string()),
                ("alternating", v.alternating.to_string()),
                ("reduced", v.reduced.to_string()),
                ("special", v.special.to_string()),
                ("uniform_sign", v.uniform_sign.to_string()),
                ("accepted", "true".into()),
            ]);
            Rendered { json: report, table }
        }
        Command::Tait(args) => {
            let g = input::load_graph(&args)?;
            let el = g.to_edge_list();
            let table = el.edges.iter().map(|[t, h, w]| format!("{t} -> {h}  {w:+}\n")).collect();
            Rendered { json: serde_json::to_value(&el).expect("edge list serializes"), table }
        }
        Command::Laplacian(args) => {
            let l = laplacian(&input::load_graph(&args)?);
            Rendered { json: json!({ "laplacian": strings(&l) }), table: matrix_table(&l) }
        }
        Command::Fp(args) => {
            let v = invariants::fp(&laplacian(&input::load_graph(&args)?))?;
            let s = format_rational(&v);
            Rendered { table: format!("{s}\n"), json: json!({ "fp": s }) }
        }
        Command::Report(args) => {
            let r = invariants::report(&input::load_graph(&args)?)?;
            let j = r.to_json();
            let table = kv_table(&[
                ("n", j.n.to_string()),
                ("omega", j.omega.map_or("mixed".into(), |w| w.to_string())),
                ("fp", j.fp.clone()),
                ("rank", j.rank.to_string()),
                ("char_poly", r.char_poly.display_in("λ")),
                ("alexander", r.alexander.normalized.display_in("t")),
                ("balanced", j.checks.balanced.to_string()),
                ("oracle", j.checks.oracle.map_or("n/a".into(), |b| b.to_string())),
                ("trace_identity", j.checks.trace_identity.to_string()),
                ("penrose", j.checks.penrose.to_string()),
            ]);
            Rendered { json: serde_json::to_value(&j).expect("report serializes"), table }
        }
        Command::Alexander { input: args, delete_vertex } => {
            let a = alexander(&laplacian(&input::load_graph(&args)?), delete_vertex)?;
            Rendered {
                table: format!("{}\n", a.normalized.display_in("t")),
                json: json!({
                    "alexander": a.normalized.to_strings(),
                    "raw": a.raw.to_strings(),
                    "display": a.normalized.display_in("t"),
                    "delete_vertex": delete_vertex,
                }),
            }
        }
        Command::Charpoly(args) => {
            let p = linalg::char_poly(&laplacian(&input::load_graph(&args)?))?;
            Rendered { table: format!("{}\n", p.display_in("λ")), json: json!({ "char_poly": poly_json(&p, "λ") }) }
        }
        Command::Resistance(args) => {
            let r = invariants::resistance_matrix(&laplacian(&input::load_graph(&args)?))?;
            Rendered { json: json!({ "resistance": strings(&r) }), table: matrix_table(&r) }
        }
        Command::FlypeList(args) => {
            let d = accepted(&args)?;
            let list = find_flypes(&d);
            let table = list
                .iter()
                .enumerate()
                .map(|(i, t)| format!("{i:>3}  pivot {:>2}  arcs {:?}  crossings {:?}\n", t.pivot, t.boundary_arcs, t.crossings))
                .collect();
            Rendered { json: json!({ "flypes": list }), table }
        }
        Command::FlypeApply { input: args, tangle, flype_index } => {
            let d = accepted(&args)?;
            let t = match (tangle, flype_index) {
                (Some(spec), _) => parse_tangle(&spec)?,
                (None, Some(i)) => find_flypes(&d)
                    .into_iter()
                    .nth(i)
                    .ok_or_else(|| CliError::new("NotAdmissible", format!("no flype with index {i}")))?,
                (None, None) => return Err(CliError::usage("one of --tangle, --flype-index is required")),
            };
            let next = apply_flype(&d, &t)?;
            let pd = next.to_pd_string();
            Rendered {
                table: format!("{pd}\n"),
                json: json!({ "tangle": t, "pd": pd, "diagram": next.to_json() }),
            }
        }
        Command::Orbit { input: args, depth, budget } => {
            let d = input::load_diagram(&args)?;
            let r = verify_invariance(&d, depth, budget)?;
            let table = kv_table(&[
                ("orbit_size", r.orbit_size.to_string()),
                ("fp_values", r.fp_values.join(", ")),
                ("char_polys", r.char_polys.len().to_string()),
                ("alexander", r.alexander.len().to_string()),
                ("budget_exhausted", r.budget_exhausted.to_string()),
                ("red_flags", r.red_flags.len().to_string()),
            ]);
            Rendered { json: serde_json::to_value(&r).expect("report serializes"), table }
        }
        Command::Batch { manifest } => {
            let path = manifest.unwrap_or_else(|| input::data_dir().join("manifest.txt"));
            let path = input::resolve_path(&path);
            let text = input::read_file(&path)?;
            let base = path.parent().map(PathBuf::from).unwrap_or_default();
            let entries = batch::parse_manifest(&text, &base)?;
            let report = batch::run(&entries);
            Rendered { table: batch::table(&report), json: serde_json::to_value(&report).expect("report serializes") }
        }
    })
}

fn accepted(args: &InputArgs) -> Result<knotres::diagram::Diagram, CliError> {
    let d = input::load_diagram(args)?;
    tait_graph(&d)?;
    Ok(d)
}

fn parse_tangle(spec: &str) -> Result<TangleRegion, CliError> {
    let text = if spec.trim_start().starts_with('{') { spec.to_string() } else { input::read_file(spec.as_ref())? };
    serde_json::from_str(&text).map_err(|e| CliError::new("MalformedSyntax", format!("tangle: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            match cli.output {
                Output::Json => println!("{}", out.json),
                Output::Table => print!("{}", out.table),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            if e.usage {
                eprintln!("error: {}", e.message);
            } else {
                println!("{}", serde_json::to_string(&e).expect("error serializes"));
            }
            ExitCode::from(code)
        }
    }
}
