//! Report files. CSV reports start with a `# scenario_hash: ...` comment
//! line; JSON reports carry the hash as a field. Only `manifest.json`
//! contains a timestamp, so reruns reproduce every other file byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use h2chain_core::model::{Commodity, SiteKey, Technology};
use h2chain_core::well_to_border::{BorderPrice, CostComponents, SupplyCurve};
use serde::{Deserialize, Serialize};

use crate::run::{plan_label, ConsumerResult, MarketResult, RunError, SweepCell, DEMAND_LADDER_GWH, DISTANCES_KM};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn csv_text(hash: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8");
    format!("# scenario_hash: {hash}\n{body}")
}

/// Reads the hash from the first line of a report CSV.
pub fn csv_hash(text: &str) -> Option<&str> {
    text.lines().next()?.strip_prefix("# scenario_hash: ").map(str::trim)
}

pub fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), RunError> {
    fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))
}

fn components_map(c: &CostComponents) -> BTreeMap<String, f64> {
    CostComponents::NAMES
        .iter()
        .zip(c.values())
        .map(|(n, v)| (n.to_string(), v))
        .collect()
}

fn components_from(m: &BTreeMap<String, f64>) -> Result<CostComponents, String> {
    let mut v = [0.0; 8];
    for (i, n) in CostComponents::NAMES.iter().enumerate() {
        v[i] = *m.get(*n).ok_or_else(|| format!("component {n} missing"))?;
    }
    Ok(CostComponents::from_values(v))
}

// ---------------------------------------------------------------- supply curves

pub fn supply_curve_file_name(c: Commodity, year: u16) -> String {
    format!("supply_curve_{}_{year}.csv", c.token())
}

/// Steps up to the one that covers `extent` MWh (all when `None`).
pub fn supply_curve_csv(hash: &str, curve: &SupplyCurve, extent: Option<f64>) -> String {
    let mut header = vec![
        "country",
        "technology",
        "resource_class",
        "shore_band",
        "tier",
        "quantity_mwh",
        "cumulative_mwh",
        "marginal_cost_eur_per_mwh",
    ];
    header.extend(CostComponents::NAMES);
    let mut rows = Vec::new();
    for s in &curve.steps {
        let mut r = vec![
            s.site.country.clone(),
            s.site.technology.token().to_string(),
            s.site.resource_class.to_string(),
            s.site.shore_band.to_string(),
            s.tier.to_string(),
            s.quantity.to_string(),
            s.cumulative.to_string(),
            s.marginal_cost.to_string(),
        ];
        r.extend(s.components.values().iter().map(f64::to_string));
        rows.push(r);
        if extent.is_some_and(|e| s.cumulative >= e) {
            break;
        }
    }
    csv_text(hash, &header, rows)
}

// ---------------------------------------------------------------- prices

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub country: String,
    pub technology: String,
    pub resource_class: u8,
    pub shore_band: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceRecord {
    pub commodity: String,
    pub year: u16,
    pub demand_mwh: f64,
    pub price_eur_per_mwh: f64,
    pub marginal_site: SiteRecord,
    pub marginal_components: BTreeMap<String, f64>,
    pub average_components: BTreeMap<String, f64>,
    pub average_cost_eur_per_mwh: f64,
    pub supplier_mix_mwh: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricesFile {
    pub scenario_hash: String,
    pub tool_version: String,
    pub prices: Vec<PriceRecord>,
}

impl PricesFile {
    pub fn new(hash: &str, markets: &[MarketResult]) -> Self {
        let prices = markets
            .iter()
            .map(|m| {
                let p = &m.price;
                PriceRecord {
                    commodity: p.commodity.symbol().to_string(),
                    year: p.year,
                    demand_mwh: p.demand,
                    price_eur_per_mwh: p.price,
                    marginal_site: SiteRecord {
                        country: p.marginal_site.country.clone(),
                        technology: p.marginal_site.technology.token().to_string(),
                        resource_class: p.marginal_site.resource_class,
                        shore_band: p.marginal_site.shore_band,
                    },
                    marginal_components: components_map(&p.marginal_components),
                    average_components: components_map(&m.decomposition.average),
                    average_cost_eur_per_mwh: m.decomposition.average_cost,
                    supplier_mix_mwh: p.supplier_mix.clone(),
                }
            })
            .collect();
        PricesFile {
            scenario_hash: hash.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            prices,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("prices serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn border_prices(&self) -> Result<Vec<BorderPrice>, String> {
        self.prices
            .iter()
            .map(|r| {
                let commodity = Commodity::parse(&r.commodity).ok_or_else(|| format!("unknown commodity {}", r.commodity))?;
                let technology = Technology::parse(&r.marginal_site.technology)
                    .ok_or_else(|| format!("unknown technology {}", r.marginal_site.technology))?;
                Ok(BorderPrice {
                    commodity,
                    year: r.year,
                    demand: r.demand_mwh,
                    price: r.price_eur_per_mwh,
                    marginal_site: SiteKey {
                        country: r.marginal_site.country.clone(),
                        technology,
                        resource_class: r.marginal_site.resource_class,
                        shore_band: r.marginal_site.shore_band,
                    },
                    marginal_components: components_from(&r.marginal_components)?,
                    supplier_mix: r.supplier_mix_mwh.clone(),
                })
            })
            .collect()
    }
}

// ---------------------------------------------------------------- consumers

fn units_text(r: &ConsumerResult) -> String {
    let parts: Vec<String> = r
        .plan
        .active()
        .map(|a| format!("{} {}={}", a.imported.symbol(), a.mode.token(), a.units))
        .collect();
    parts.join("; ")
}

pub fn consumer_costs_csv(hash: &str, results: &[ConsumerResult]) -> String {
    let header = [
        "site",
        "product",
        "year",
        "demand_mwh",
        "delivered_mwh",
        "plan",
        "units",
        "total_cost_eur",
        "total_eur_per_mwh",
        "procurement_eur_per_mwh",
        "transport_eur_per_mwh",
        "storage_eur_per_mwh",
        "conversion_eur_per_mwh",
    ];
    let rows = results.iter().map(|r| {
        let c = &r.per_mwh;
        vec![
            r.consumer.name.clone(),
            r.consumer.product.token().to_string(),
            r.year.to_string(),
            r.consumer.demand(r.year).to_string(),
            r.plan.delivered.to_string(),
            plan_label(r),
            units_text(r),
            r.plan.total_cost.to_string(),
            c.total.to_string(),
            c.procurement.to_string(),
            c.transport.to_string(),
            c.storage.to_string(),
            c.conversion.to_string(),
        ]
    });
    csv_text(hash, &header, rows)
}

// ---------------------------------------------------------------- sweep

pub fn modes_csv(hash: &str, cells: &[SweepCell]) -> String {
    let header = ["product", "year", "demand_gwh", "distance_km", "mode", "units"];
    let rows = cells.iter().map(|c| {
        vec![
            c.result.consumer.product.token().to_string(),
            c.result.year.to_string(),
            c.demand_gwh.to_string(),
            c.distance_km.to_string(),
            c.label(),
            units_text(&c.result),
        ]
    });
    csv_text(hash, &header, rows)
}

/// €/MWh delivered, demands down, distances across.
pub fn heatmap_csv(hash: &str, cells: &[SweepCell]) -> String {
    let cols: Vec<String> = DISTANCES_KM.iter().map(|d| format!("{d}km")).collect();
    let mut header = vec!["demand_gwh"];
    header.extend(cols.iter().map(String::as_str));
    let rows = DEMAND_LADDER_GWH.iter().map(|&d| {
        let mut r = vec![d.to_string()];
        for &x in &DISTANCES_KM {
            let v = cells
                .iter()
                .find(|c| c.demand_gwh == d && c.distance_km == x)
                .map(|c| c.result.per_mwh.total.to_string())
                .unwrap_or_default();
            r.push(v);
        }
        r
    });
    csv_text(hash, &header, rows)
}

// ---------------------------------------------------------------- manifest

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario_hash: String,
    pub tool_version: String,
    pub timestamp: String,
    pub command: String,
    pub flags: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    /// Modelling assumptions a reader of the outputs should know about.
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(hash: &str, command: &str) -> Self {
        RunManifest {
            scenario_hash: hash.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command: command.to_string(),
            flags: BTreeMap::new(),
            outputs: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
