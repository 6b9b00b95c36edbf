//! Domain types shared by both models, plus scenario validation.
//!
//! Units are normalized everywhere: euros, MWh, MW, km, hours and years.
//! The one exception is technology capex, which stays in €/kW as tabulated.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math::abs;
use crate::transport::{LandsideParams, PipelineParams, PipelineScope, ShipParams};

/// Hours in the modelled year; profile weights must sum to this.
pub const HOURS_PER_YEAR: f64 = 8760.0;
/// Width of one distance-to-shore band.
pub const SHORE_BAND_KM: f64 = 250.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Commodity {
    Ammonia,
    LiquidHydrogen,
    GaseousHydrogen,
}

impl Commodity {
    pub const ALL: [Commodity; 3] = [Commodity::Ammonia, Commodity::LiquidHydrogen, Commodity::GaseousHydrogen];

    pub fn token(self) -> &'static str {
        match self {
            Commodity::Ammonia => "ammonia",
            Commodity::LiquidHydrogen => "liquid_hydrogen",
            Commodity::GaseousHydrogen => "gaseous_hydrogen",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Commodity::Ammonia => "NH3",
            Commodity::LiquidHydrogen => "LH2",
            Commodity::GaseousHydrogen => "GH2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        Commodity::ALL
            .into_iter()
            .find(|c| c.token().eq_ignore_ascii_case(s) || c.symbol().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Commodity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Renewable generation technology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Technology {
    Pv,
    WindOnshore,
    WindOffshoreShallow,
    WindOffshoreDeep,
}

impl Technology {
    pub const ALL: [Technology; 4] = [
        Technology::Pv,
        Technology::WindOnshore,
        Technology::WindOffshoreShallow,
        Technology::WindOffshoreDeep,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Technology::Pv => "pv",
            Technology::WindOnshore => "wind_onshore",
            Technology::WindOffshoreShallow => "wind_offshore_shallow",
            Technology::WindOffshoreDeep => "wind_offshore_deep",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Technology::ALL.into_iter().find(|t| t.token().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Technology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Every technology with a row in the technology cost table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tech {
    Renewable(Technology),
    Electrolysis,
    HaberBosch,
    Liquefaction,
    Cracking,
    Regasification,
}

impl Tech {
    pub fn token(self) -> &'static str {
        match self {
            Tech::Renewable(t) => t.token(),
            Tech::Electrolysis => "electrolysis",
            Tech::HaberBosch => "haber_bosch",
            Tech::Liquefaction => "liquefaction",
            Tech::Cracking => "cracking",
            Tech::Regasification => "regasification",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if let Some(t) = Technology::parse(s) {
            return Some(Tech::Renewable(t));
        }
        [
            Tech::Electrolysis,
            Tech::HaberBosch,
            Tech::Liquefaction,
            Tech::Cracking,
            Tech::Regasification,
        ]
        .into_iter()
        .find(|t| t.token().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Tech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Inland transport mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Truck,
    Rail,
    Pipeline,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Truck, Mode::Rail, Mode::Pipeline];

    pub fn token(self) -> &'static str {
        match self {
            Mode::Truck => "truck",
            Mode::Rail => "rail",
            Mode::Pipeline => "pipeline",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Mode::ALL.into_iter().find(|m| m.token().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// What a consumer site ultimately uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Product {
    Ammonia,
    Hydrogen,
}

impl Product {
    pub fn token(self) -> &'static str {
        match self {
            Product::Ammonia => "ammonia",
            Product::Hydrogen => "hydrogen",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ammonia" | "nh3" => Some(Product::Ammonia),
            "hydrogen" | "h2" => Some(Product::Hydrogen),
            _ => None,
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One production opportunity: country, technology, resource class and
/// distance-to-shore band. Ordered lexicographically in that field order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteKey {
    pub country: String,
    pub technology: Technology,
    /// Quality bin 1..=5.
    pub resource_class: u8,
    /// Each band is [`SHORE_BAND_KM`] of inland pipeline.
    pub shore_band: u32,
}

impl SiteKey {
    pub fn inland_distance_km(&self) -> f64 {
        self.shore_band as f64 * SHORE_BAND_KM
    }
}

impl fmt::Display for SiteKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_{}_{}_{}",
            self.country, self.technology, self.resource_class, self.shore_band
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedHour {
    pub capacity_factor: f64,
    pub weight: f64,
}

/// Capacity-factor series over a reduced horizon whose weights scale it to
/// one year.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceProfile {
    pub site: SiteKey,
    pub potential_mw: f64,
    pub hours: Vec<WeightedHour>,
}

impl ResourceProfile {
    pub fn total_weight(&self) -> f64 {
        self.hours.iter().map(|h| h.weight).sum()
    }

    /// Annual full-load hours.
    pub fn full_load_hours(&self) -> f64 {
        self.hours.iter().map(|h| h.capacity_factor * h.weight).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TechCost {
    pub capex_eur_per_kw: f64,
    pub opex_frac: f64,
    pub lifetime_y: f64,
    /// Output per input.
    pub efficiency: f64,
    /// Electricity per unit output, zero where not applicable.
    pub power_demand: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StorageKind {
    Battery,
    SaltCavernGh2,
    TankNh3,
    TankLh2,
}

impl StorageKind {
    pub const ALL: [StorageKind; 4] = [
        StorageKind::Battery,
        StorageKind::SaltCavernGh2,
        StorageKind::TankNh3,
        StorageKind::TankLh2,
    ];

    pub fn token(self) -> &'static str {
        match self {
            StorageKind::Battery => "battery",
            StorageKind::SaltCavernGh2 => "salt_cavern_gh2",
            StorageKind::TankNh3 => "tank_nh3",
            StorageKind::TankLh2 => "tank_lh2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        StorageKind::ALL.into_iter().find(|k| k.token().eq_ignore_ascii_case(s.trim()))
    }

    /// Tank that holds a transported commodity, if any.
    pub fn tank_for(c: Commodity) -> Option<Self> {
        match c {
            Commodity::Ammonia => Some(StorageKind::TankNh3),
            Commodity::LiquidHydrogen => Some(StorageKind::TankLh2),
            Commodity::GaseousHydrogen => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StorageParams {
    pub capex_eur_per_mwh: f64,
    pub opex_frac: f64,
    pub efficiency: f64,
    pub lifetime_y: f64,
    /// Energy-to-power ratio in hours (battery only).
    pub e2p_hours: f64,
    /// Storage cost per MWh of throughput (tanks only).
    pub tank_eur_per_mwh: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryFinance {
    pub country: String,
    pub wacc: f64,
    /// Multiplier on renewable capex.
    pub capex_index: f64,
    /// Sea route to the import terminal; `None` means no shipping route.
    pub sea_distance_km: Option<f64>,
    /// International pipeline route; `None` means not pipeline-reachable.
    pub pipeline_distance_km: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandSpec {
    pub year: u16,
    pub annual_demand_mwh: f64,
}

/// Which distance column of the consumer table a route uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    Truck,
    Rail,
    Gh2Pipeline,
    Nh3Pipeline,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Truck, Route::Rail, Route::Gh2Pipeline, Route::Nh3Pipeline];

    /// Route used by a commodity travelling by a mode; `None` for invalid pairings.
    pub fn for_option(c: Commodity, m: Mode) -> Option<Route> {
        match (c, m) {
            (Commodity::Ammonia | Commodity::LiquidHydrogen, Mode::Truck) => Some(Route::Truck),
            (Commodity::Ammonia | Commodity::LiquidHydrogen, Mode::Rail) => Some(Route::Rail),
            (Commodity::Ammonia, Mode::Pipeline) => Some(Route::Nh3Pipeline),
            (Commodity::GaseousHydrogen, Mode::Pipeline) => Some(Route::Gh2Pipeline),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsumerSite {
    pub name: String,
    pub product: Product,
    /// Annual demand per scenario year, MWh.
    pub demand_mwh: BTreeMap<u16, f64>,
    /// Missing routes are unavailable at the site.
    pub distances_km: BTreeMap<Route, f64>,
}

impl ConsumerSite {
    pub fn demand(&self, year: u16) -> f64 {
        self.demand_mwh.get(&year).copied().unwrap_or(0.0)
    }
}

/// Scalar settings and modelling switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Desalination and water transport, € per MWh of hydrogen.
    pub desalination_eur_per_mwh: f64,
    /// Average electricity price for pipelines and consumer-side conversion.
    pub electricity_price_eur_per_mwh: f64,
    /// Financing rate for ships, import pipelines and inland fleets.
    pub importer_wacc: f64,
    pub wagons_per_train: u32,
    /// Bound electrolyzer throughput by `Q/eta_conv` instead of `Q/eta_new`.
    pub electrolyzer_bound_uses_conversion_eff: bool,
    /// Bill fuel, freight and driver costs per transported MWh instead of at
    /// full utilization inside the per-unit cost.
    pub variable_motion_costs_per_mwh: bool,
    /// Apply the per-load "through boil-off" in addition to the daily rate.
    pub apply_through_boiloff: bool,
    /// Full-load hours of consumer-side conversion plants.
    pub consumer_conversion_hours: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            desalination_eur_per_mwh: 1.0,
            electricity_price_eur_per_mwh: 53.0,
            importer_wacc: 0.08,
            wagons_per_train: 20,
            electrolyzer_bound_uses_conversion_eff: false,
            variable_motion_costs_per_mwh: false,
            apply_through_boiloff: true,
            consumer_conversion_hours: HOURS_PER_YEAR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub years: Vec<u16>,
    pub commodities: Vec<Commodity>,
    pub profiles: Vec<ResourceProfile>,
    pub tech_costs: BTreeMap<(Tech, u16), TechCost>,
    pub storage: BTreeMap<(StorageKind, u16), StorageParams>,
    pub finance: Vec<CountryFinance>,
    pub ships: BTreeMap<Commodity, ShipParams>,
    pub pipelines: BTreeMap<PipelineScope, PipelineParams>,
    pub landside: BTreeMap<(Mode, Commodity, u16), LandsideParams>,
    pub demand: Vec<DemandSpec>,
    pub consumers: Vec<ConsumerSite>,
    pub constants: Constants,
}

impl Scenario {
    pub fn finance_for(&self, country: &str) -> Option<&CountryFinance> {
        self.finance.iter().find(|f| f.country == country)
    }

    pub fn tech(&self, tech: Tech, year: u16) -> Option<&TechCost> {
        self.tech_costs.get(&(tech, year))
    }

    pub fn storage_for(&self, kind: StorageKind, year: u16) -> Option<&StorageParams> {
        self.storage.get(&(kind, year))
    }

    pub fn demand_for(&self, year: u16) -> Option<f64> {
        self.demand.iter().find(|d| d.year == year).map(|d| d.annual_demand_mwh)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    /// What the finding is about, e.g. a profile or table row.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}: {}: {}", self.subject, self.message)
    }
}

struct Findings(Vec<Finding>);

impl Findings {
    fn error(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.0.push(Finding {
            severity: Severity::Error,
            subject: subject.into(),
            message: message.into(),
        });
    }

    fn warn(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.0.push(Finding {
            severity: Severity::Warning,
            subject: subject.into(),
            message: message.into(),
        });
    }

    fn range(&mut self, subject: &str, field: &str, v: f64, lo: f64, hi: f64) {
        if !(v >= lo && v <= hi) {
            self.error(subject, format!("{field} = {v} outside [{lo}, {hi}]"));
        }
    }

    fn positive(&mut self, subject: &str, field: &str, v: f64) {
        if !(v > 0.0 && v.is_finite()) {
            self.error(subject, format!("{field} = {v} must be positive"));
        }
    }
}

/// Checks every typed invariant and cross-reference. The list is empty iff
/// the scenario is valid; order is deterministic (table order, then row order).
pub fn validate_scenario(s: &Scenario) -> Vec<Finding> {
    let mut f = Findings(Vec::new());
    let inf = f64::INFINITY;

    if s.years.is_empty() {
        f.error("scenario", "no years configured");
    }
    for &y in &s.years {
        if y != 2030 && y != 2040 {
            f.warn("scenario", format!("year {y} has no reference data (2030 and 2040 do)"));
        }
    }
    if s.commodities.is_empty() {
        f.error("scenario", "no commodities configured");
    }
    let c = &s.constants;
    f.range("constants", "desalination_eur_per_mwh", c.desalination_eur_per_mwh, 0.0, inf);
    f.range("constants", "electricity_price_eur_per_mwh", c.electricity_price_eur_per_mwh, 0.0, inf);
    if !(c.importer_wacc >= 0.0 && c.importer_wacc < 1.0) {
        f.error("constants", format!("importer_wacc = {} outside [0, 1)", c.importer_wacc));
    }
    if c.wagons_per_train == 0 {
        f.error("constants", "wagons_per_train must be at least 1");
    }
    f.range("constants", "consumer_conversion_hours", c.consumer_conversion_hours, 1.0, HOURS_PER_YEAR);

    // profiles
    let mut seen: BTreeMap<&SiteKey, usize> = BTreeMap::new();
    for p in &s.profiles {
        let subj = format!("profile {}", p.site);
        if let Some(prev) = seen.insert(&p.site, 0) {
            let _ = prev;
            f.error(&subj, "duplicate site");
        }
        if !(1..=5).contains(&p.site.resource_class) {
            f.error(&subj, format!("resource class {} outside 1..=5", p.site.resource_class));
        }
        f.range(&subj, "potential_mw", p.potential_mw, 0.0, inf);
        if p.hours.is_empty() {
            f.error(&subj, "no hours");
        }
        let mut bad_cf = 0usize;
        let mut bad_w = 0usize;
        for h in &p.hours {
            if !(h.capacity_factor >= 0.0 && h.capacity_factor <= 1.0) {
                bad_cf += 1;
            }
            if !(h.weight >= 0.0 && h.weight.is_finite()) {
                bad_w += 1;
            }
        }
        if bad_cf > 0 {
            f.error(&subj, format!("{bad_cf} capacity factors outside [0, 1]"));
        }
        if bad_w > 0 {
            f.error(&subj, format!("{bad_w} negative or non-finite weights"));
        }
        let tw = p.total_weight();
        if !(abs(tw - HOURS_PER_YEAR) <= 1e-6) {
            f.error(&subj, format!("weights sum to {tw}, expected {HOURS_PER_YEAR}"));
        }
        if s.finance_for(&p.site.country).is_none() {
            f.error(&subj, format!("country {} has no finance entry", p.site.country));
        }
        for &y in &s.years {
            if s.tech(Tech::Renewable(p.site.technology), y).is_none() {
                f.error(&subj, format!("no cost entry for {} in {y}", p.site.technology));
            }
        }
    }

    // technology costs
    for (&(tech, year), t) in &s.tech_costs {
        let subj = format!("technology {tech} {year}");
        f.range(&subj, "capex_eur_per_kw", t.capex_eur_per_kw, 0.0, inf);
        f.range(&subj, "opex_frac", t.opex_frac, 0.0, 1.0);
        f.range(&subj, "lifetime_y", t.lifetime_y, 1.0, inf);
        if !(t.efficiency > 0.0 && t.efficiency <= 1.01) {
            f.error(&subj, format!("efficiency = {} outside (0, 1.01]", t.efficiency));
        }
        f.range(&subj, "power_demand", t.power_demand, 0.0, inf);
    }
    for &y in &s.years {
        let mut needed: Vec<Tech> = Vec::new();
        if !s.profiles.is_empty() {
            needed.push(Tech::Electrolysis);
        }
        if s.commodities.contains(&Commodity::Ammonia) {
            needed.push(Tech::HaberBosch);
        }
        if s.commodities.contains(&Commodity::LiquidHydrogen) {
            needed.push(Tech::Liquefaction);
        }
        if !s.consumers.is_empty() {
            needed.extend([Tech::HaberBosch, Tech::Cracking, Tech::Regasification]);
        }
        needed.sort();
        needed.dedup();
        for t in needed {
            if s.tech(t, y).is_none() {
                f.error("technologies", format!("missing {t} for {y}"));
            }
        }
    }

    // storage
    for (&(kind, year), p) in &s.storage {
        let subj = format!("storage {} {year}", kind.token());
        f.range(&subj, "capex_eur_per_mwh", p.capex_eur_per_mwh, 0.0, inf);
        f.range(&subj, "opex_frac", p.opex_frac, 0.0, 1.0);
        f.range(&subj, "lifetime_y", p.lifetime_y, 1.0, inf);
        f.range(&subj, "tank_eur_per_mwh", p.tank_eur_per_mwh, 0.0, inf);
        if kind == StorageKind::Battery {
            if !(p.efficiency > 0.0 && p.efficiency <= 1.0) {
                f.error(&subj, format!("efficiency = {} outside (0, 1]", p.efficiency));
            }
            f.positive(&subj, "e2p_hours", p.e2p_hours);
            if p.e2p_hours != 6.0 {
                f.warn(&subj, format!("energy-to-power ratio {} differs from the reference 6 h", p.e2p_hours));
            }
            if p.efficiency != 0.98 {
                f.warn(&subj, format!("efficiency {} differs from the reference 0.98", p.efficiency));
            }
        } else if p.efficiency != 1.0 {
            f.error(&subj, format!("non-battery storage efficiency must be 1, got {}", p.efficiency));
        }
    }
    for &y in &s.years {
        if !s.profiles.is_empty() && s.storage_for(StorageKind::Battery, y).is_none() {
            f.error("storage", format!("missing battery for {y}"));
        }
        for &cm in &s.commodities {
            if let Some(k) = StorageKind::tank_for(cm) {
                if s.storage_for(k, y).is_none() {
                    f.error("storage", format!("missing {} for {y}", k.token()));
                }
            }
        }
        if !s.consumers.is_empty() {
            for k in [StorageKind::TankNh3, StorageKind::TankLh2] {
                if s.storage_for(k, y).is_none() {
                    f.error("storage", format!("missing {} for {y}", k.token()));
                }
            }
        }
    }

    // countries
    for c in &s.finance {
        let subj = format!("country {}", c.country);
        if !(c.wacc >= 0.0 && c.wacc < 1.0) {
            f.error(&subj, format!("wacc = {} outside [0, 1)", c.wacc));
        }
        f.positive(&subj, "capex_index", c.capex_index);
        if let Some(d) = c.sea_distance_km {
            f.range(&subj, "sea_distance_km", d, 0.0, inf);
        }
        if let Some(d) = c.pipeline_distance_km {
            f.range(&subj, "pipeline_distance_km", d, 0.0, inf);
        }
        if c.sea_distance_km.is_none() && c.pipeline_distance_km.is_none() {
            f.warn(&subj, "no export route");
        }
    }

    // transport
    for (cm, p) in &s.ships {
        let subj = format!("ship {}", cm.token());
        if *cm == Commodity::GaseousHydrogen {
            f.error(&subj, "gaseous hydrogen is not shipped");
        }
        for msg in p.check() {
            f.error(&subj, msg);
        }
    }
    for &cm in &s.commodities {
        if cm != Commodity::GaseousHydrogen && !s.ships.contains_key(&cm) {
            f.error("transport_ship", format!("missing ship for {}", cm.token()));
        }
    }
    for (scope, p) in &s.pipelines {
        let subj = format!("pipeline {}", scope.token());
        for msg in p.check() {
            f.error(&subj, msg);
        }
    }
    if !s.profiles.is_empty() && !s.pipelines.contains_key(&PipelineScope::DomesticGh2) {
        f.error("transport_pipeline", "missing domestic_gh2 pipeline");
    }
    if s.commodities.contains(&Commodity::GaseousHydrogen)
        && s.finance.iter().any(|c| c.pipeline_distance_km.is_some())
        && !s.pipelines.contains_key(&PipelineScope::InternationalGh2)
    {
        f.error("transport_pipeline", "missing international_gh2 pipeline");
    }
    if !s.consumers.is_empty() && !s.pipelines.contains_key(&PipelineScope::DomesticNh3) {
        f.error("transport_pipeline", "missing domestic_nh3 pipeline");
    }
    for (&(mode, cm, year), p) in &s.landside {
        let subj = format!("landside {} {} {year}", mode.token(), cm.token());
        if Route::for_option(cm, mode).is_none() || mode == Mode::Pipeline {
            f.error(&subj, format!("{cm} cannot travel by {mode}"));
        }
        for msg in p.check() {
            f.error(&subj, msg);
        }
    }
    if !s.consumers.is_empty() {
        for &y in &s.years {
            for mode in [Mode::Truck, Mode::Rail] {
                for cm in [Commodity::Ammonia, Commodity::LiquidHydrogen] {
                    if !s.landside.contains_key(&(mode, cm, y)) {
                        f.error("transport_landside", format!("missing {mode} {} for {y}", cm.token()));
                    }
                }
            }
        }
    }

    // demand
    for d in &s.demand {
        let subj = format!("demand {}", d.year);
        f.positive(&subj, "annual_demand", d.annual_demand_mwh);
        if !s.years.contains(&d.year) {
            f.error(&subj, "year is not configured");
        }
    }
    for &y in &s.years {
        if s.demand.iter().filter(|d| d.year == y).count() > 1 {
            f.error("demand", format!("duplicate demand for {y}"));
        }
    }

    // consumers
    for c in &s.consumers {
        let subj = format!("consumer {}", c.name);
        for (&y, &d) in &c.demand_mwh {
            if !(d >= 0.0 && d.is_finite()) {
                f.error(&subj, format!("demand {d} for {y} must be non-negative"));
            }
        }
        for (r, &d) in &c.distances_km {
            if !(d >= 0.0 && d.is_finite()) {
                f.error(&subj, format!("{r:?} distance {d} must be non-negative"));
            }
        }
        if c.distances_km.is_empty() {
            f.error(&subj, "no available mode");
        }
    }

    f.0
}

pub fn has_errors(findings: &[Finding]) -> bool {
    findings.iter().any(|f| f.severity == Severity::Error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        for c in Commodity::ALL {
            assert_eq!(Commodity::parse(c.token()), Some(c));
            assert_eq!(Commodity::parse(c.symbol()), Some(c));
        }
        for t in Technology::ALL {
            assert_eq!(Tech::parse(t.token()), Some(Tech::Renewable(t)));
        }
        for k in StorageKind::ALL {
            assert_eq!(StorageKind::parse(k.token()), Some(k));
        }
        assert_eq!(Product::parse("H2"), Some(Product::Hydrogen));
    }

    #[test]
    fn site_keys_order_lexicographically() {
        let a = SiteKey {
            country: "AA".into(),
            technology: Technology::WindOnshore,
            resource_class: 1,
            shore_band: 0,
        };
        let b = SiteKey {
            country: "AA".into(),
            technology: Technology::WindOnshore,
            resource_class: 2,
            shore_band: 0,
        };
        let c = SiteKey {
            country: "AB".into(),
            technology: Technology::Pv,
            resource_class: 1,
            shore_band: 0,
        };
        assert!(a < b && b < c);
        assert_eq!(b.inland_distance_km(), 0.0);
    }

    #[test]
    fn valid_pairings_match_the_six_distribution_modes() {
        let valid: Vec<(Commodity, Mode)> = Commodity::ALL
            .into_iter()
            .flat_map(|c| Mode::ALL.into_iter().map(move |m| (c, m)))
            .filter(|&(c, m)| Route::for_option(c, m).is_some())
            .collect();
        assert_eq!(valid.len(), 6);
        assert!(!valid.contains(&(Commodity::GaseousHydrogen, Mode::Truck)));
        assert!(!valid.contains(&(Commodity::LiquidHydrogen, Mode::Pipeline)));
    }
}
