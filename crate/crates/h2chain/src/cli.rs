//! Command-line interface. [`run_cli`] takes the argument list and output
//! streams so tests can drive it in-process.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use h2chain_core::model::{has_errors, validate_scenario, Commodity, Product, Scenario, Severity};
use h2chain_core::well_to_border::BorderPrice;

use crate::dataset::{load_scenario, read_scenario, scenario_hash, ScenarioError};
use crate::report::{self, PricesFile, RunManifest};
use crate::run::{self, RunError, WtbRequest, DEMAND_LADDER_GWH};

#[derive(Debug, Parser)]
#[command(name = "h2chain", version, about = "Green hydrogen and ammonia import supply-chain costing")]
struct Cli {
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "H2CHAIN_JOBS", default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a scenario directory and list every finding.
    Validate { dir: PathBuf },
    /// Size export plants and price each commodity at the border.
    Wtb(WtbArgs),
    /// Optimize inland distribution for the scenario's consumer sites.
    Btc(BtcArgs),
    /// Optimize the generic 10 x 10 demand-distance grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct WtbArgs {
    dir: PathBuf,
    /// Year to price; repeat for several. Defaults to every scenario year.
    #[arg(long = "year")]
    years: Vec<u16>,
    /// Commodity to price (NH3, LH2, GH2); repeat for several.
    #[arg(long = "commodity")]
    commodities: Vec<String>,
    /// Border demand in TWh per year, overriding demand.csv.
    #[arg(long)]
    demand_twh: Option<f64>,
    /// Stop the exported curves once they cover this many TWh.
    #[arg(long)]
    curve_extent_twh: Option<f64>,
    /// Also write every site LP in LP text format under OUT/lp.
    #[arg(long)]
    dump_lp: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[group(id = "price_source", required = true, multiple = false, args = ["prices", "inline_wtb"])]
struct PriceSource {
    /// prices.json written by `wtb` for the same scenario.
    #[arg(long)]
    prices: Option<PathBuf>,
    /// Compute border prices first instead of reading them.
    #[arg(long)]
    inline_wtb: bool,
}

#[derive(Debug, Args)]
struct BtcArgs {
    dir: PathBuf,
    #[arg(long)]
    year: u16,
    #[command(flatten)]
    source: PriceSource,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProductArg {
    Ammonia,
    Hydrogen,
}

impl From<ProductArg> for Product {
    fn from(p: ProductArg) -> Self {
        match p {
            ProductArg::Ammonia => Product::Ammonia,
            ProductArg::Hydrogen => Product::Hydrogen,
        }
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    dir: PathBuf,
    #[arg(long)]
    year: u16,
    #[arg(long, value_enum)]
    product: ProductArg,
    #[command(flatten)]
    source: PriceSource,
    #[arg(long)]
    out: PathBuf,
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 1 model or data error, 2 I/O error.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return e.exit_code();
        }
    };
    let jobs = cli.jobs;
    let result = match cli.command {
        Command::Validate { dir } => return cmd_validate(&dir, out),
        Command::Wtb(a) => run::with_jobs(jobs, || cmd_wtb(&a, jobs)),
        Command::Btc(a) => run::with_jobs(jobs, || cmd_btc(&a, jobs)),
        Command::Sweep(a) => run::with_jobs(jobs, || cmd_sweep(&a, jobs)),
    };
    match result {
        Ok(lines) => {
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn cmd_validate(dir: &Path, out: &mut dyn Write) -> i32 {
    let s = match read_scenario(dir) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return if e.is_io() { 2 } else { 1 };
        }
    };
    let findings = validate_scenario(&s);
    for f in &findings {
        let _ = writeln!(out, "{f}");
    }
    let errors = findings.iter().filter(|f| f.severity == Severity::Error).count();
    let _ = writeln!(out, "{errors} errors, {} warnings", findings.len() - errors);
    i32::from(has_errors(&findings))
}

fn load(dir: &Path) -> Result<(Scenario, String), RunError> {
    let s = load_scenario(dir)?;
    let hash = scenario_hash(&s);
    Ok((s, hash))
}

fn write_manifest(out: &Path, mut m: RunManifest, outputs: Vec<String>, jobs: usize) -> Result<(), RunError> {
    m.flags.insert("jobs".into(), jobs.to_string());
    m.outputs = outputs;
    report::write_file(out, "manifest.json", &m.to_json())
}

fn cmd_wtb(a: &WtbArgs, jobs: usize) -> Result<Vec<String>, RunError> {
    let (s, hash) = load(&a.dir)?;
    let years = if a.years.is_empty() { s.years.clone() } else { a.years.clone() };
    let commodities = if a.commodities.is_empty() {
        s.commodities.clone()
    } else {
        a.commodities
            .iter()
            .map(|c| Commodity::parse(c).ok_or_else(|| RunError::Usage(format!("unknown commodity '{c}'"))))
            .collect::<Result<_, _>>()?
    };
    if let Some(d) = a.demand_twh {
        if !(d > 0.0 && d.is_finite()) {
            return Err(RunError::Usage(format!("demand {d} TWh must be positive")));
        }
    }
    let req = WtbRequest {
        years,
        commodities,
        demand_mwh: a.demand_twh.map(|d| d * 1e6),
    };
    let markets = run::run_wtb(&s, &req)?;

    let mut outputs = Vec::new();
    let mut lines = Vec::new();
    let extent = a.curve_extent_twh.map(|t| t * 1e6);
    for m in &markets {
        let name = report::supply_curve_file_name(m.curve.commodity, m.curve.year);
        report::write_file(&a.out, &name, &report::supply_curve_csv(&hash, &m.curve, extent))?;
        outputs.push(name);
        lines.push(format!(
            "{} {}: {:.2} EUR/MWh at {:.3} TWh (marginal site {})",
            m.price.commodity,
            m.price.year,
            m.price.price,
            m.price.demand / 1e6,
            m.price.marginal_site
        ));
    }
    report::write_file(&a.out, "prices.json", &PricesFile::new(&hash, &markets).to_json())?;
    outputs.push("prices.json".into());

    if a.dump_lp {
        let dir = a.out.join("lp");
        for &y in &req.years {
            for &c in &req.commodities {
                for (site, text) in run::site_lps(&s, c, y)? {
                    let name = format!("{}_{y}_{site}.lp", c.token());
                    report::write_file(&dir, &name, &text)?;
                    outputs.push(format!("lp/{name}"));
                }
            }
        }
    }

    let mut m = RunManifest::new(&hash, "wtb");
    m.flags.insert("years".into(), join(&req.years));
    m.flags.insert(
        "commodities".into(),
        req.commodities.iter().map(|c| c.symbol()).collect::<Vec<_>>().join(","),
    );
    if let Some(d) = a.demand_twh {
        m.flags.insert("demand_twh".into(), d.to_string());
    }
    if let Some(e) = a.curve_extent_twh {
        m.flags.insert("curve_extent_twh".into(), e.to_string());
    }
    m.notes.push("supply curves cover the full potential unless --curve-extent-twh is given".into());
    write_manifest(&a.out, m, outputs, jobs)?;
    Ok(lines)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Border prices for `year`, read or recomputed. Inline runs also write
/// `prices.json` next to the other outputs.
fn prices_for(
    s: &Scenario,
    hash: &str,
    year: u16,
    src: &PriceSource,
    out: &Path,
    outputs: &mut Vec<String>,
) -> Result<Vec<BorderPrice>, RunError> {
    if let Some(path) = &src.prices {
        let text = fs::read_to_string(path).map_err(|e| RunError::Io(format!("cannot read {}: {e}", path.display())))?;
        let file = PricesFile::parse(&text)
            .map_err(|e| RunError::Scenario(ScenarioError::SchemaViolation {
                file: path.display().to_string(),
                line: None,
                column: None,
                message: e,
            }))?;
        if file.scenario_hash != hash {
            return Err(RunError::HashMismatch {
                expected: hash.to_string(),
                found: file.scenario_hash,
            });
        }
        return file.border_prices().map_err(RunError::Usage);
    }
    let req = WtbRequest {
        years: vec![year],
        commodities: s.commodities.clone(),
        demand_mwh: None,
    };
    let markets = run::run_wtb(s, &req)?;
    report::write_file(out, "prices.json", &PricesFile::new(hash, &markets).to_json())?;
    outputs.push("prices.json".into());
    Ok(markets.into_iter().map(|m| m.price).collect())
}

const NH3_PIPELINE_NOTE: &str =
    "domestic NH3 pipeline throughput and capacity factor come from transport_pipeline.csv; the bundled value reuses the GH2 reference throughput at capacity factor 1";

fn source_flags(m: &mut RunManifest, src: &PriceSource) {
    match &src.prices {
        Some(p) => m.flags.insert("prices".into(), p.display().to_string()),
        None => m.flags.insert("inline_wtb".into(), "true".into()),
    };
}

fn cmd_btc(a: &BtcArgs, jobs: usize) -> Result<Vec<String>, RunError> {
    let (s, hash) = load(&a.dir)?;
    let mut outputs = Vec::new();
    let prices = prices_for(&s, &hash, a.year, &a.source, &a.out, &mut outputs)?;
    let results = run::run_btc(&s, a.year, &prices)?;
    report::write_file(&a.out, "consumer_costs.csv", &report::consumer_costs_csv(&hash, &results))?;
    outputs.push("consumer_costs.csv".into());

    let mut m = RunManifest::new(&hash, "btc");
    m.flags.insert("year".into(), a.year.to_string());
    source_flags(&mut m, &a.source);
    m.notes.push(NH3_PIPELINE_NOTE.into());
    write_manifest(&a.out, m, outputs, jobs)?;
    Ok(results
        .iter()
        .map(|r| format!("{}: {} at {:.2} EUR/MWh", r.consumer.name, run::plan_label(r), r.per_mwh.total))
        .collect())
}

fn cmd_sweep(a: &SweepArgs, jobs: usize) -> Result<Vec<String>, RunError> {
    let (s, hash) = load(&a.dir)?;
    let mut outputs = Vec::new();
    let prices = prices_for(&s, &hash, a.year, &a.source, &a.out, &mut outputs)?;
    let product: Product = a.product.into();
    let cells = run::run_sweep(&s, a.year, product, &prices)?;
    report::write_file(&a.out, "modes.csv", &report::modes_csv(&hash, &cells))?;
    report::write_file(&a.out, "heatmap.csv", &report::heatmap_csv(&hash, &cells))?;
    outputs.extend(["modes.csv".to_string(), "heatmap.csv".to_string()]);

    let mut m = RunManifest::new(&hash, "sweep");
    m.flags.insert("year".into(), a.year.to_string());
    m.flags.insert("product".into(), product.token().into());
    source_flags(&mut m, &a.source);
    m.notes.push(format!(
        "demand ladder {} GWh/a is an assumed logarithmic interpolation between 10 and 10000 GWh/a",
        join(&DEMAND_LADDER_GWH)
    ));
    m.notes.push("generic sites use one import node, so every route has the same distance".into());
    m.notes.push(NH3_PIPELINE_NOTE.into());
    write_manifest(&a.out, m, outputs, jobs)?;
    Ok(vec![format!("{} cells written to {}", cells.len(), a.out.display())])
}
