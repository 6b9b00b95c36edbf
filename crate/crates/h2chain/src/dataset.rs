//! Reading and writing scenario directories.
//!
//! A scenario is a directory holding `scenario.conf` (TOML) and a fixed set
//! of CSV tables. [`scenario_files`] renders a scenario into its canonical
//! text form; loading that text back yields the same scenario bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use csv::StringRecord;
use h2chain_core::model::{
    has_errors, validate_scenario, Commodity, ConsumerSite, Constants, CountryFinance, DemandSpec, Finding, Mode,
    Product, ResourceProfile, Route, Scenario, SiteKey, StorageKind, StorageParams, Tech, TechCost, Technology,
    WeightedHour,
};
use h2chain_core::transport::{LandsideParams, PipelineParams, PipelineScope, ShipParams};
use serde::{Deserialize, Serialize};

pub const CONF: &str = "scenario.conf";
pub const PROFILE_DIR: &str = "profiles";

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    MissingFile(PathBuf),
    Io { path: PathBuf, message: String },
    /// Malformed table or config: bad header, unparsable cell, duplicate key.
    SchemaViolation { file: String, line: Option<usize>, column: Option<String>, message: String },
    /// A row points at something that does not exist.
    CrossRef { file: String, line: Option<usize>, message: String },
    /// A value outside its physical range.
    Unit { file: String, line: usize, column: String, message: String },
    /// Parsed fine but violates scenario invariants.
    Invalid(Vec<Finding>),
}

impl ScenarioError {
    /// True for failures to read the directory at all.
    pub fn is_io(&self) -> bool {
        matches!(self, ScenarioError::MissingFile(_) | ScenarioError::Io { .. })
    }

    fn schema(file: &str, line: Option<usize>, column: Option<&str>, message: impl Into<String>) -> Self {
        ScenarioError::SchemaViolation {
            file: file.to_string(),
            line,
            column: column.map(str::to_string),
            message: message.into(),
        }
    }
}

fn locate(f: &mut fmt::Formatter<'_>, file: &str, line: Option<usize>, column: Option<&str>) -> fmt::Result {
    write!(f, "{file}")?;
    if let Some(l) = line {
        write!(f, " line {l}")?;
    }
    if let Some(c) = column {
        write!(f, " column {c}")?;
    }
    Ok(())
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::MissingFile(p) => write!(f, "missing file {}", p.display()),
            ScenarioError::Io { path, message } => write!(f, "cannot read {}: {message}", path.display()),
            ScenarioError::SchemaViolation { file, line, column, message } => {
                write!(f, "schema violation in ")?;
                locate(f, file, *line, column.as_deref())?;
                write!(f, ": {message}")
            }
            ScenarioError::CrossRef { file, line, message } => {
                write!(f, "unresolved reference in ")?;
                locate(f, file, *line, None)?;
                write!(f, ": {message}")
            }
            ScenarioError::Unit { file, line, column, message } => {
                write!(f, "unit error in ")?;
                locate(f, file, Some(*line), Some(column))?;
                write!(f, ": {message}")
            }
            ScenarioError::Invalid(findings) => {
                let errors: Vec<String> = findings
                    .iter()
                    .filter(|x| x.severity == h2chain_core::model::Severity::Error)
                    .map(|x| x.to_string())
                    .collect();
                write!(f, "invalid scenario: {}", errors.join("; "))
            }
        }
    }
}

impl std::error::Error for ScenarioError {}

pub type Result<T, E = ScenarioError> = std::result::Result<T, E>;

// ---------------------------------------------------------------- config

/// File names inside the scenario directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileNames {
    pub technologies: String,
    pub storage: String,
    pub countries: String,
    pub potentials: String,
    pub profiles: String,
    pub transport_ship: String,
    pub transport_pipeline: String,
    pub transport_landside: String,
    pub consumers: String,
    pub demand: String,
}

impl Default for FileNames {
    fn default() -> Self {
        Self {
            technologies: "technologies.csv".into(),
            storage: "storage.csv".into(),
            countries: "countries.csv".into(),
            potentials: "potentials.csv".into(),
            profiles: PROFILE_DIR.into(),
            transport_ship: "transport_ship.csv".into(),
            transport_pipeline: "transport_pipeline.csv".into(),
            transport_landside: "transport_landside.csv".into(),
            consumers: "consumers.csv".into(),
            demand: "demand.csv".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ConfConstants {
    desalination_eur_per_mwh: f64,
    electricity_price_eur_per_mwh: f64,
    importer_wacc: f64,
    wagons_per_train: u32,
    consumer_conversion_hours: f64,
    electrolyzer_bound_uses_conversion_eff: bool,
    variable_motion_costs_per_mwh: bool,
    apply_through_boiloff: bool,
}

impl Default for ConfConstants {
    fn default() -> Self {
        Constants::default().into()
    }
}

impl From<Constants> for ConfConstants {
    fn from(c: Constants) -> Self {
        Self {
            desalination_eur_per_mwh: c.desalination_eur_per_mwh,
            electricity_price_eur_per_mwh: c.electricity_price_eur_per_mwh,
            importer_wacc: c.importer_wacc,
            wagons_per_train: c.wagons_per_train,
            consumer_conversion_hours: c.consumer_conversion_hours,
            electrolyzer_bound_uses_conversion_eff: c.electrolyzer_bound_uses_conversion_eff,
            variable_motion_costs_per_mwh: c.variable_motion_costs_per_mwh,
            apply_through_boiloff: c.apply_through_boiloff,
        }
    }
}

impl From<ConfConstants> for Constants {
    fn from(c: ConfConstants) -> Self {
        Self {
            desalination_eur_per_mwh: c.desalination_eur_per_mwh,
            electricity_price_eur_per_mwh: c.electricity_price_eur_per_mwh,
            importer_wacc: c.importer_wacc,
            wagons_per_train: c.wagons_per_train,
            consumer_conversion_hours: c.consumer_conversion_hours,
            electrolyzer_bound_uses_conversion_eff: c.electrolyzer_bound_uses_conversion_eff,
            variable_motion_costs_per_mwh: c.variable_motion_costs_per_mwh,
            apply_through_boiloff: c.apply_through_boiloff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Conf {
    years: Vec<u16>,
    commodities: Vec<String>,
    #[serde(default)]
    constants: ConfConstants,
    #[serde(default)]
    files: FileNames,
}

// ---------------------------------------------------------------- tables

struct Table {
    file: String,
    columns: BTreeMap<String, usize>,
    rows: Vec<StringRecord>,
}

fn read_text(path: &Path) -> Result<String> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(ScenarioError::MissingFile(path.to_path_buf())),
        Err(e) => Err(ScenarioError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }),
    }
}

impl Table {
    fn parse(file: &str, text: &str, required: &[&str]) -> Result<Table> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header = rdr
            .headers()
            .map_err(|e| ScenarioError::schema(file, Some(1), None, e.to_string()))?
            .clone();
        let mut columns = BTreeMap::new();
        for (i, h) in header.iter().enumerate() {
            if columns.insert(h.to_string(), i).is_some() {
                return Err(ScenarioError::schema(file, Some(1), Some(h), "duplicate column"));
            }
        }
        for r in required {
            if !columns.contains_key(*r) {
                return Err(ScenarioError::schema(file, Some(1), Some(r), "required column missing"));
            }
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize);
                ScenarioError::schema(file, line, None, e.to_string())
            })?;
            rows.push(rec);
        }
        Ok(Table {
            file: file.to_string(),
            columns,
            rows,
        })
    }

    fn read(dir: &Path, name: &str, required: &[&str]) -> Result<Table> {
        let text = read_text(&dir.join(name))?;
        Table::parse(name, &text, required)
    }

    fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        self.rows.iter().map(move |rec| Row {
            table: self,
            line: rec.position().map_or(0, |p| p.line() as usize),
            rec,
        })
    }
}

struct Row<'a> {
    table: &'a Table,
    rec: &'a StringRecord,
    line: usize,
}

impl Row<'_> {
    fn str(&self, col: &str) -> &str {
        self.table.columns.get(col).and_then(|&i| self.rec.get(i)).unwrap_or("")
    }

    fn schema(&self, col: &str, message: impl Into<String>) -> ScenarioError {
        ScenarioError::schema(&self.table.file, Some(self.line), Some(col), message)
    }

    fn unit(&self, col: &str, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Unit {
            file: self.table.file.clone(),
            line: self.line,
            column: col.to_string(),
            message: message.into(),
        }
    }

    fn cross(&self, message: impl Into<String>) -> ScenarioError {
        ScenarioError::CrossRef {
            file: self.table.file.clone(),
            line: Some(self.line),
            message: message.into(),
        }
    }

    fn opt_f64(&self, col: &str) -> Result<Option<f64>> {
        let s = self.str(col);
        if s.is_empty() || s == "-" {
            return Ok(None);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(self.schema(col, format!("'{s}' is not a finite number"))),
        }
    }

    fn f64(&self, col: &str) -> Result<f64> {
        self.opt_f64(col)?.ok_or_else(|| self.schema(col, "value missing"))
    }

    /// A number that must not be negative, e.g. a cost.
    fn nonneg(&self, col: &str) -> Result<f64> {
        let v = self.f64(col)?;
        if v < 0.0 {
            return Err(self.unit(col, format!("{v} is negative")));
        }
        Ok(v)
    }

    /// A decimal read in a larger unit and converted exactly, e.g. GWh to MWh.
    fn scaled(&self, col: &str, pow10: i32) -> Result<Option<f64>> {
        let s = self.str(col);
        if s.is_empty() || s == "-" {
            return Ok(None);
        }
        let v = shift_decimal(s, pow10)
            .and_then(|t| t.parse::<f64>().ok())
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.schema(col, format!("'{s}' is not a finite number")))?;
        Ok(Some(v))
    }

    fn int<T: std::str::FromStr>(&self, col: &str) -> Result<T> {
        let s = self.str(col);
        s.parse::<T>()
            .map_err(|_| self.schema(col, format!("'{s}' is not a valid integer")))
    }

    fn year(&self) -> Result<u16> {
        self.int("year")
    }

    fn token<T>(&self, col: &str, parse: impl Fn(&str) -> Option<T>) -> Result<T> {
        let s = self.str(col);
        parse(s).ok_or_else(|| self.schema(col, format!("unknown value '{s}'")))
    }
}

/// Moves the decimal point of a number literal by `pow10` places and
/// renders it in plain notation. Exact: no binary rounding is involved.
pub fn shift_decimal(text: &str, pow10: i32) -> Option<String> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    // value = digits * 10^e
    let mut digits: String = format!("{int}{frac}");
    let mut e = exp.checked_add(pow10)?.checked_sub(frac.len() as i32)?;
    let trimmed = digits.trim_start_matches('0');
    digits = if trimmed.is_empty() { "0".into() } else { trimmed.to_string() };
    if digits == "0" {
        return Some("0".into());
    }
    while e < 0 && digits.ends_with('0') {
        digits.pop();
        e += 1;
    }
    if e.unsigned_abs() > 400 {
        return None;
    }
    let plain = if e >= 0 {
        format!("{digits}{}", "0".repeat(e as usize))
    } else {
        let point = digits.len() as i32 + e;
        if point > 0 {
            format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
        } else {
            format!("0.{}{digits}", "0".repeat((-point) as usize))
        }
    };
    Some(if neg { format!("-{plain}") } else { plain })
}

/// Number in a larger unit, exactly: `value / 10^pow10` as decimal text.
fn unscaled(v: f64, pow10: i32) -> String {
    shift_decimal(&format!("{v:e}"), -pow10).unwrap_or_else(|| v.to_string())
}

// ---------------------------------------------------------------- columns

const TECH_COLS: [&str; 7] = [
    "technology",
    "year",
    "capex_eur_per_kw",
    "opex_frac",
    "lifetime_y",
    "efficiency",
    "power_demand",
];
const STORAGE_COLS: [&str; 8] = [
    "kind",
    "year",
    "capex_eur_per_mwh",
    "opex_frac",
    "efficiency",
    "lifetime_y",
    "e2p_hours",
    "tank_eur_per_mwh",
];
const COUNTRY_COLS: [&str; 5] = ["country", "wacc", "capex_index", "sea_distance_km", "pipeline_distance_km"];
const POTENTIAL_COLS: [&str; 5] = ["country", "tech", "class", "band", "potential_mw"];
const PROFILE_COLS: [&str; 3] = ["hour", "cf", "weight"];
const SHIP_COLS: [&str; 13] = [
    "commodity",
    "capex_eur",
    "opex_frac",
    "lifetime_y",
    "operating_eur_per_h",
    "available_hours",
    "velocity_kmh",
    "fuel_mwh_per_km",
    "fuel_eur_per_mwh",
    "payload_mwh",
    "load_time_h",
    "flash_loss",
    "boiloff_per_h",
];
const PIPELINE_COLS: [&str; 9] = [
    "scope",
    "capex_eur_per_km",
    "opex_frac",
    "lifetime_y",
    "capacity_factor",
    "annual_throughput_mwh",
    "electricity_demand",
    "electricity_price",
    "loss_per_100km",
];
const LANDSIDE_COLS: [&str; 19] = [
    "mode",
    "commodity",
    "year",
    "trailer_capex",
    "trailer_lifetime_y",
    "tractor_capex",
    "tractor_lifetime_y",
    "opex_frac",
    "payload_mwh",
    "speed_kmh",
    "load_time_h",
    "driver_eur_per_h",
    "fuel_mwh_per_km",
    "fuel_eur_per_mwh",
    "freight_eur_per_km",
    "throughput_loss",
    "through_boiloff",
    "boiloff_per_day",
    "operating_hours",
];
const CONSUMER_BASE: [&str; 2] = ["name", "product"];
const CONSUMER_DIST: [(&str, Route); 4] = [
    ("dist_truck_km", Route::Truck),
    ("dist_rail_km", Route::Rail),
    ("dist_gh2pipe_km", Route::Gh2Pipeline),
    ("dist_nh3pipe_km", Route::Nh3Pipeline),
];
const DEMAND_COLS: [&str; 2] = ["year", "demand_twh"];

/// Profile file name of a site, relative to the profile directory.
pub fn profile_file_name(site: &SiteKey) -> String {
    format!("{site}.csv")
}

// ---------------------------------------------------------------- loading

fn dup<K: Ord>(map: &mut BTreeMap<K, ()>, key: K, row: &Row<'_>, what: &str) -> Result<()> {
    if map.insert(key, ()).is_some() {
        return Err(row.schema(what, "duplicate entry"));
    }
    Ok(())
}

fn parse_tech(t: &Table) -> Result<BTreeMap<(Tech, u16), TechCost>> {
    let mut out = BTreeMap::new();
    for r in t.rows() {
        let tech = r.token("technology", Tech::parse)?;
        let year = r.year()?;
        let cost = TechCost {
            capex_eur_per_kw: r.nonneg("capex_eur_per_kw")?,
            opex_frac: r.f64("opex_frac")?,
            lifetime_y: r.f64("lifetime_y")?,
            efficiency: r.f64("efficiency")?,
            power_demand: r.f64("power_demand")?,
        };
        if out.insert((tech, year), cost).is_some() {
            return Err(r.schema("technology", format!("duplicate entry for {tech} {year}")));
        }
    }
    Ok(out)
}

fn parse_storage(t: &Table) -> Result<BTreeMap<(StorageKind, u16), StorageParams>> {
    let mut out = BTreeMap::new();
    for r in t.rows() {
        let kind = r.token("kind", StorageKind::parse)?;
        let year = r.year()?;
        let p = StorageParams {
            capex_eur_per_mwh: r.nonneg("capex_eur_per_mwh")?,
            opex_frac: r.f64("opex_frac")?,
            efficiency: r.f64("efficiency")?,
            lifetime_y: r.f64("lifetime_y")?,
            e2p_hours: r.opt_f64("e2p_hours")?.unwrap_or(0.0),
            tank_eur_per_mwh: r.opt_f64("tank_eur_per_mwh")?.unwrap_or(0.0),
        };
        if out.insert((kind, year), p).is_some() {
            return Err(r.schema("kind", format!("duplicate entry for {} {year}", kind.token())));
        }
    }
    Ok(out)
}

fn parse_countries(t: &Table) -> Result<Vec<CountryFinance>> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for r in t.rows() {
        let country = r.str("country").to_string();
        if country.is_empty() || !country.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(r.schema("country", format!("'{country}' is not a plain identifier")));
        }
        dup(&mut seen, country.clone(), &r, "country")?;
        out.push(CountryFinance {
            country,
            wacc: r.f64("wacc")?,
            capex_index: r.f64("capex_index")?,
            sea_distance_km: r.opt_f64("sea_distance_km")?,
            pipeline_distance_km: r.opt_f64("pipeline_distance_km")?,
        });
    }
    Ok(out)
}

fn parse_profile(file: &str, text: &str, site: SiteKey, potential_mw: f64) -> Result<ResourceProfile> {
    let t = Table::parse(file, text, &PROFILE_COLS)?;
    let mut hours = Vec::with_capacity(t.rows.len());
    for (i, r) in t.rows().enumerate() {
        let h: usize = r.int("hour")?;
        if h != i {
            return Err(r.schema("hour", format!("expected hour {i}, found {h}")));
        }
        let cf = r.f64("cf")?;
        if !(0.0..=1.0).contains(&cf) {
            return Err(r.unit("cf", format!("capacity factor {cf} outside [0, 1]")));
        }
        let weight = r.nonneg("weight")?;
        hours.push(WeightedHour {
            capacity_factor: cf,
            weight,
        });
    }
    Ok(ResourceProfile {
        site,
        potential_mw,
        hours,
    })
}

fn parse_profiles(dir: &Path, names: &FileNames, potentials: &Table, countries: &[CountryFinance]) -> Result<Vec<ResourceProfile>> {
    let pdir = dir.join(&names.profiles);
    let listing = match fs::read_dir(&pdir) {
        Ok(l) => l,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(ScenarioError::MissingFile(pdir)),
        Err(e) => {
            return Err(ScenarioError::Io {
                path: pdir,
                message: e.to_string(),
            })
        }
    };
    let mut on_disk: BTreeMap<String, PathBuf> = BTreeMap::new();
    for entry in listing {
        let entry = entry.map_err(|e| ScenarioError::Io {
            path: pdir.clone(),
            message: e.to_string(),
        })?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.ends_with(".csv") {
            on_disk.insert(name, entry.path());
        }
    }

    let mut out: Vec<ResourceProfile> = Vec::new();
    let mut seen = BTreeMap::new();
    for r in potentials.rows() {
        let country = r.str("country").to_string();
        if !countries.iter().any(|c| c.country == country) {
            return Err(r.cross(format!("country {country} not in countries table")));
        }
        let site = SiteKey {
            country,
            technology: r.token("tech", Technology::parse)?,
            resource_class: r.int("class")?,
            shore_band: r.int("band")?,
        };
        dup(&mut seen, site.clone(), &r, "country")?;
        let potential = r.nonneg("potential_mw")?;
        let name = profile_file_name(&site);
        let path = on_disk
            .remove(&name)
            .ok_or_else(|| ScenarioError::MissingFile(pdir.join(&name)))?;
        let text = read_text(&path)?;
        let rel = format!("{}/{name}", names.profiles);
        out.push(parse_profile(&rel, &text, site, potential)?);
    }
    if let Some(name) = on_disk.keys().next() {
        return Err(ScenarioError::CrossRef {
            file: format!("{}/{name}", names.profiles),
            line: None,
            message: format!("profile has no row in {}", names.potentials),
        });
    }
    out.sort_by(|a, b| a.site.cmp(&b.site));
    Ok(out)
}

fn parse_ships(t: &Table) -> Result<BTreeMap<Commodity, ShipParams>> {
    let mut out = BTreeMap::new();
    for r in t.rows() {
        let c = r.token("commodity", Commodity::parse)?;
        let p = ShipParams {
            capex_eur: r.nonneg("capex_eur")?,
            opex_frac: r.f64("opex_frac")?,
            lifetime_y: r.f64("lifetime_y")?,
            operating_eur_per_h: r.f64("operating_eur_per_h")?,
            available_hours: r.f64("available_hours")?,
            velocity_kmh: r.f64("velocity_kmh")?,
            fuel_mwh_per_km: r.f64("fuel_mwh_per_km")?,
            fuel_eur_per_mwh: r.f64("fuel_eur_per_mwh")?,
            payload_mwh: r.f64("payload_mwh")?,
            load_time_h: r.f64("load_time_h")?,
            flash_loss: r.f64("flash_loss")?,
            boiloff_per_h: r.f64("boiloff_per_h")?,
        };
        if out.insert(c, p).is_some() {
            return Err(r.schema("commodity", format!("duplicate ship for {}", c.token())));
        }
    }
    Ok(out)
}

fn parse_pipelines(t: &Table) -> Result<BTreeMap<PipelineScope, PipelineParams>> {
    let mut out = BTreeMap::new();
    for r in t.rows() {
        let scope = r.token("scope", PipelineScope::parse)?;
        let p = PipelineParams {
            capex_eur_per_km: r.nonneg("capex_eur_per_km")?,
            opex_frac: r.f64("opex_frac")?,
            lifetime_y: r.f64("lifetime_y")?,
            capacity_factor: r.f64("capacity_factor")?,
            annual_throughput_mwh: r.f64("annual_throughput_mwh")?,
            electricity_demand: r.f64("electricity_demand")?,
            electricity_price: r.f64("electricity_price")?,
            loss_per_100km: r.f64("loss_per_100km")?,
        };
        if out.insert(scope, p).is_some() {
            return Err(r.schema("scope", format!("duplicate pipeline {}", scope.token())));
        }
    }
    Ok(out)
}

fn parse_landside(t: &Table) -> Result<BTreeMap<(Mode, Commodity, u16), LandsideParams>> {
    let mut out = BTreeMap::new();
    for r in t.rows() {
        let mode = r.token("mode", Mode::parse)?;
        let c = r.token("commodity", Commodity::parse)?;
        let year = r.year()?;
        let p = LandsideParams {
            trailer_capex: r.nonneg("trailer_capex")?,
            trailer_lifetime_y: r.f64("trailer_lifetime_y")?,
            tractor_capex: r.nonneg("tractor_capex")?,
            tractor_lifetime_y: r.f64("tractor_lifetime_y")?,
            opex_frac: r.f64("opex_frac")?,
            payload_mwh: r.f64("payload_mwh")?,
            speed_kmh: r.f64("speed_kmh")?,
            load_time_h: r.f64("load_time_h")?,
            driver_eur_per_h: r.f64("driver_eur_per_h")?,
            fuel_mwh_per_km: r.f64("fuel_mwh_per_km")?,
            fuel_eur_per_mwh: r.f64("fuel_eur_per_mwh")?,
            freight_eur_per_km: r.f64("freight_eur_per_km")?,
            throughput_loss: r.f64("throughput_loss")?,
            through_boiloff: r.f64("through_boiloff")?,
            boiloff_per_day: r.f64("boiloff_per_day")?,
            operating_hours: r.f64("operating_hours")?,
        };
        if out.insert((mode, c, year), p).is_some() {
            return Err(r.schema("mode", format!("duplicate entry for {mode} {} {year}", c.token())));
        }
    }
    Ok(out)
}

/// `demand_<year>_gwh` columns in header order.
fn demand_columns(t: &Table) -> Result<Vec<(u16, String)>> {
    let mut out = Vec::new();
    for name in t.columns.keys() {
        if let Some(y) = name.strip_prefix("demand_").and_then(|s| s.strip_suffix("_gwh")) {
            let year = y
                .parse::<u16>()
                .map_err(|_| ScenarioError::schema(&t.file, Some(1), Some(name), "demand column needs a year"))?;
            out.push((year, name.clone()));
        }
    }
    Ok(out)
}

fn parse_consumers(t: &Table) -> Result<Vec<ConsumerSite>> {
    let years = demand_columns(t)?;
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for r in t.rows() {
        let name = r.str("name").to_string();
        if name.is_empty() {
            return Err(r.schema("name", "empty name"));
        }
        dup(&mut seen, name.clone(), &r, "name")?;
        let product = r.token("product", Product::parse)?;
        let mut demand_mwh = BTreeMap::new();
        for (y, col) in &years {
            if let Some(v) = r.scaled(col, 3)? {
                demand_mwh.insert(*y, v);
            }
        }
        let mut distances_km = BTreeMap::new();
        for (col, route) in CONSUMER_DIST {
            if let Some(d) = r.opt_f64(col)? {
                distances_km.insert(route, d);
            }
        }
        out.push(ConsumerSite {
            name,
            product,
            demand_mwh,
            distances_km,
        });
    }
    Ok(out)
}

fn parse_demand(t: &Table) -> Result<Vec<DemandSpec>> {
    let mut out = Vec::new();
    let mut seen = BTreeMap::new();
    for r in t.rows() {
        let year = r.year()?;
        dup(&mut seen, year, &r, "year")?;
        out.push(DemandSpec {
            year,
            annual_demand_mwh: r.scaled("demand_twh", 6)?.ok_or_else(|| r.schema("demand_twh", "value missing"))?,
        });
    }
    Ok(out)
}

fn parse_conf(text: &str) -> Result<(Scenario, FileNames)> {
    let conf: Conf = toml::from_str(text).map_err(|e| ScenarioError::schema(CONF, None, None, e.message().to_string()))?;
    let mut commodities = Vec::new();
    for c in &conf.commodities {
        let c = Commodity::parse(c)
            .ok_or_else(|| ScenarioError::schema(CONF, None, Some("commodities"), format!("unknown commodity '{c}'")))?;
        if commodities.contains(&c) {
            return Err(ScenarioError::schema(CONF, None, Some("commodities"), "duplicate commodity"));
        }
        commodities.push(c);
    }
    let mut years = conf.years.clone();
    years.sort_unstable();
    if years.windows(2).any(|w| w[0] == w[1]) {
        return Err(ScenarioError::schema(CONF, None, Some("years"), "duplicate year"));
    }
    let s = Scenario {
        years: conf.years,
        commodities,
        constants: conf.constants.into(),
        ..Scenario::default()
    };
    Ok((s, conf.files))
}

/// Parses a scenario directory without checking scenario-level invariants.
/// Malformed cells, out-of-range physical values and dangling references
/// are still rejected here, with the offending file and line.
pub fn read_scenario(dir: &Path) -> Result<Scenario> {
    let (mut s, names) = parse_conf(&read_text(&dir.join(CONF))?)?;
    s.tech_costs = parse_tech(&Table::read(dir, &names.technologies, &TECH_COLS)?)?;
    s.storage = parse_storage(&Table::read(dir, &names.storage, &STORAGE_COLS)?)?;
    s.finance = parse_countries(&Table::read(dir, &names.countries, &COUNTRY_COLS)?)?;
    let potentials = Table::read(dir, &names.potentials, &POTENTIAL_COLS)?;
    s.profiles = parse_profiles(dir, &names, &potentials, &s.finance)?;
    s.ships = parse_ships(&Table::read(dir, &names.transport_ship, &SHIP_COLS)?)?;
    s.pipelines = parse_pipelines(&Table::read(dir, &names.transport_pipeline, &PIPELINE_COLS)?)?;
    s.landside = parse_landside(&Table::read(dir, &names.transport_landside, &LANDSIDE_COLS)?)?;
    let mut consumer_cols: Vec<&str> = CONSUMER_BASE.to_vec();
    consumer_cols.extend(CONSUMER_DIST.iter().map(|(c, _)| *c));
    s.consumers = parse_consumers(&Table::read(dir, &names.consumers, &consumer_cols)?)?;
    s.demand = parse_demand(&Table::read(dir, &names.demand, &DEMAND_COLS)?)?;
    Ok(s)
}

/// Reads and fully validates a scenario directory.
pub fn load_scenario(dir: &Path) -> Result<Scenario> {
    let s = read_scenario(dir)?;
    let findings = validate_scenario(&s);
    if has_errors(&findings) {
        return Err(ScenarioError::Invalid(findings));
    }
    Ok(s)
}

// ---------------------------------------------------------------- writing

struct CsvOut(csv::Writer<Vec<u8>>);

impl CsvOut {
    fn new(header: &[&str]) -> Self {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        CsvOut(w)
    }

    fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.0.write_record(fields).expect("in-memory write");
    }

    fn finish(self) -> String {
        String::from_utf8(self.0.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }
}

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Canonical text of every file of a scenario, keyed by path relative to the
/// scenario directory. Standard file names are used.
pub fn scenario_files(s: &Scenario) -> BTreeMap<String, String> {
    let names = FileNames::default();
    let mut files = BTreeMap::new();

    let conf = Conf {
        years: s.years.clone(),
        commodities: s.commodities.iter().map(|c| c.symbol().to_string()).collect(),
        constants: s.constants.into(),
        files: names.clone(),
    };
    files.insert(CONF.to_string(), toml::to_string(&conf).expect("config serializes"));

    let mut t = CsvOut::new(&TECH_COLS);
    for (&(tech, year), c) in &s.tech_costs {
        t.row([
            tech.token().to_string(),
            year.to_string(),
            num(c.capex_eur_per_kw),
            num(c.opex_frac),
            num(c.lifetime_y),
            num(c.efficiency),
            num(c.power_demand),
        ]);
    }
    files.insert(names.technologies.clone(), t.finish());

    let mut t = CsvOut::new(&STORAGE_COLS);
    for (&(kind, year), p) in &s.storage {
        t.row([
            kind.token().to_string(),
            year.to_string(),
            num(p.capex_eur_per_mwh),
            num(p.opex_frac),
            num(p.efficiency),
            num(p.lifetime_y),
            num(p.e2p_hours),
            num(p.tank_eur_per_mwh),
        ]);
    }
    files.insert(names.storage.clone(), t.finish());

    let mut t = CsvOut::new(&COUNTRY_COLS);
    for c in &s.finance {
        t.row([
            c.country.clone(),
            num(c.wacc),
            num(c.capex_index),
            opt(c.sea_distance_km),
            opt(c.pipeline_distance_km),
        ]);
    }
    files.insert(names.countries.clone(), t.finish());

    let mut t = CsvOut::new(&POTENTIAL_COLS);
    let mut profiles: Vec<&ResourceProfile> = s.profiles.iter().collect();
    profiles.sort_by(|a, b| a.site.cmp(&b.site));
    for p in &profiles {
        t.row([
            p.site.country.clone(),
            p.site.technology.token().to_string(),
            p.site.resource_class.to_string(),
            p.site.shore_band.to_string(),
            num(p.potential_mw),
        ]);
        let mut h = CsvOut::new(&PROFILE_COLS);
        for (i, w) in p.hours.iter().enumerate() {
            h.row([i.to_string(), num(w.capacity_factor), num(w.weight)]);
        }
        files.insert(format!("{}/{}", names.profiles, profile_file_name(&p.site)), h.finish());
    }
    files.insert(names.potentials.clone(), t.finish());

    let mut t = CsvOut::new(&SHIP_COLS);
    for (c, p) in &s.ships {
        t.row([
            c.symbol().to_string(),
            num(p.capex_eur),
            num(p.opex_frac),
            num(p.lifetime_y),
            num(p.operating_eur_per_h),
            num(p.available_hours),
            num(p.velocity_kmh),
            num(p.fuel_mwh_per_km),
            num(p.fuel_eur_per_mwh),
            num(p.payload_mwh),
            num(p.load_time_h),
            num(p.flash_loss),
            num(p.boiloff_per_h),
        ]);
    }
    files.insert(names.transport_ship.clone(), t.finish());

    let mut t = CsvOut::new(&PIPELINE_COLS);
    for (scope, p) in &s.pipelines {
        t.row([
            scope.token().to_string(),
            num(p.capex_eur_per_km),
            num(p.opex_frac),
            num(p.lifetime_y),
            num(p.capacity_factor),
            num(p.annual_throughput_mwh),
            num(p.electricity_demand),
            num(p.electricity_price),
            num(p.loss_per_100km),
        ]);
    }
    files.insert(names.transport_pipeline.clone(), t.finish());

    let mut t = CsvOut::new(&LANDSIDE_COLS);
    for (&(mode, c, year), p) in &s.landside {
        t.row([
            mode.token().to_string(),
            c.symbol().to_string(),
            year.to_string(),
            num(p.trailer_capex),
            num(p.trailer_lifetime_y),
            num(p.tractor_capex),
            num(p.tractor_lifetime_y),
            num(p.opex_frac),
            num(p.payload_mwh),
            num(p.speed_kmh),
            num(p.load_time_h),
            num(p.driver_eur_per_h),
            num(p.fuel_mwh_per_km),
            num(p.fuel_eur_per_mwh),
            num(p.freight_eur_per_km),
            num(p.throughput_loss),
            num(p.through_boiloff),
            num(p.boiloff_per_day),
            num(p.operating_hours),
        ]);
    }
    files.insert(names.transport_landside.clone(), t.finish());

    let mut years: Vec<u16> = s.consumers.iter().flat_map(|c| c.demand_mwh.keys().copied()).collect();
    years.sort_unstable();
    years.dedup();
    let demand_cols: Vec<String> = years.iter().map(|y| format!("demand_{y}_gwh")).collect();
    let mut header: Vec<&str> = CONSUMER_BASE.to_vec();
    header.extend(demand_cols.iter().map(String::as_str));
    header.extend(CONSUMER_DIST.iter().map(|(c, _)| *c));
    let mut t = CsvOut::new(&header);
    for c in &s.consumers {
        let mut row = vec![c.name.clone(), c.product.token().to_string()];
        for y in &years {
            row.push(c.demand_mwh.get(y).map(|&v| unscaled(v, 3)).unwrap_or_default());
        }
        for (_, route) in CONSUMER_DIST {
            row.push(opt(c.distances_km.get(&route).copied()));
        }
        t.row(row);
    }
    files.insert(names.consumers.clone(), t.finish());

    let mut t = CsvOut::new(&DEMAND_COLS);
    for d in &s.demand {
        t.row([d.year.to_string(), unscaled(d.annual_demand_mwh, 6)]);
    }
    files.insert(names.demand.clone(), t.finish());

    files
}

/// Writes the canonical form of a scenario into `dir`, creating it.
pub fn save_scenario(s: &Scenario, dir: &Path) -> Result<()> {
    let io = |path: &Path, e: std::io::Error| ScenarioError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    for (name, text) in scenario_files(s) {
        let path = dir.join(&name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io(parent, e))?;
        }
        fs::write(&path, text).map_err(|e| io(&path, e))?;
    }
    Ok(())
}

/// SHA-256 over the canonical files, so formatting differences in the input
/// do not change it.
pub fn scenario_hash(s: &Scenario) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for (name, text) in scenario_files(s) {
        h.update((name.len() as u64).to_le_bytes());
        h.update(name.as_bytes());
        h.update((text.len() as u64).to_le_bytes());
        h.update(text.as_bytes());
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_shifts_are_exact() {
        assert_eq!(shift_decimal("9.75", 3).as_deref(), Some("9750"));
        assert_eq!(shift_decimal("306", 6).as_deref(), Some("306000000"));
        assert_eq!(shift_decimal("1.5e-2", 3).as_deref(), Some("15"));
        assert_eq!(shift_decimal("8", -3).as_deref(), Some("0.008"));
        assert_eq!(shift_decimal("-0.00", 3).as_deref(), Some("0"));
        assert_eq!(shift_decimal("abc", 3), None);
        assert_eq!(shift_decimal(".", 3), None);
        for v in [0.1, 9750.0, 1e-7, 123456.789, 3.0e15] {
            let text = unscaled(v, 3);
            assert_eq!(shift_decimal(&text, 3).unwrap().parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn reports_line_and_column() {
        let t = Table::parse("x.csv", "a,b\n1,2\n3,oops\n", &["a", "b"]).unwrap();
        let r = t.rows().nth(1).unwrap();
        match r.f64("b") {
            Err(ScenarioError::SchemaViolation { line, column, .. }) => {
                assert_eq!(line, Some(3));
                assert_eq!(column.as_deref(), Some("b"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Table::parse("x.csv", "a\n1\n", &["a", "b"]),
            Err(ScenarioError::SchemaViolation { .. })
        ));
    }
}
