//! Model runs over a loaded scenario: border prices, consumer plans and the
//! generic demand-distance sweep. Work is spread over a rayon pool; results
//! are merged in input order, so they never depend on the thread count.

use std::collections::BTreeMap;
use std::fmt;

use h2chain_core::consumer::{cost_breakdown, plan_for_consumer, DistributionOption, DistributionPlan, PlanCostPerMwh};
use h2chain_core::error::ModelError;
use h2chain_core::model::{Commodity, ConsumerSite, Product, ResourceProfile, Route, Scenario, SiteKey};
use h2chain_core::well_to_border::{
    build_site_lp, build_supply_curve, decompose_price, price_at, size_plant, BorderPrice, PlantDesign,
    PriceDecomposition, SiteCosts, SupplyCurve,
};
use rayon::prelude::*;

use crate::dataset::ScenarioError;

/// Annual demand levels of the generic grid, GWh.
pub const DEMAND_LADDER_GWH: [f64; 10] = [10.0, 20.0, 40.0, 100.0, 200.0, 400.0, 1000.0, 2000.0, 4000.0, 10000.0];
/// Distances from the import node of the generic grid, km.
pub const DISTANCES_KM: [f64; 10] = [5.0, 100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0, 900.0];

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Scenario(ScenarioError),
    Model(ModelError),
    Io(String),
    /// A prices file made from a different scenario.
    HashMismatch { expected: String, found: String },
    Usage(String),
}

impl RunError {
    /// 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => 2,
            RunError::Scenario(e) if e.is_io() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Scenario(e) => write!(f, "{e}"),
            RunError::Model(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "{e}"),
            RunError::HashMismatch { expected, found } => {
                write!(f, "prices belong to scenario {found}, not {expected}")
            }
            RunError::Usage(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ScenarioError> for RunError {
    fn from(e: ScenarioError) -> Self {
        RunError::Scenario(e)
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        RunError::Model(e)
    }
}

/// Runs `f` on a pool of `jobs` threads (0 = rayon's default).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Border prices and curves for one (commodity, year).
#[derive(Debug, Clone, PartialEq)]
pub struct MarketResult {
    pub curve: SupplyCurve,
    pub price: BorderPrice,
    pub decomposition: PriceDecomposition,
    /// Sites left out of the curve, with the reason.
    pub skipped: Vec<(SiteKey, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WtbRequest {
    pub years: Vec<u16>,
    pub commodities: Vec<Commodity>,
    /// Overrides the scenario demand, MWh.
    pub demand_mwh: Option<f64>,
}

fn site_design(s: &Scenario, p: &ResourceProfile, c: Commodity, y: u16) -> Result<Option<PlantDesign>, ModelError> {
    let costs = match SiteCosts::resolve(s, &p.site, c, y) {
        Ok(k) => k,
        Err(ModelError::NoExportRoute(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    match size_plant(p, &costs, c, y) {
        Ok(d) => Ok(Some(d)),
        Err(ModelError::DegenerateSite(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Sized plants of one (commodity, year) market.
#[derive(Debug, Clone, PartialEq)]
pub struct SizedMarket {
    pub commodity: Commodity,
    pub year: u16,
    pub designs: Vec<PlantDesign>,
    pub skipped: Vec<(SiteKey, String)>,
}

/// Sizes every site for every (year, commodity), year-major. Runs inside the
/// caller's rayon pool.
pub fn size_markets(s: &Scenario, years: &[u16], commodities: &[Commodity]) -> Result<Vec<SizedMarket>, RunError> {
    let mut tasks = Vec::new();
    for &y in years {
        for &c in commodities {
            for p in &s.profiles {
                tasks.push((y, c, p));
            }
        }
    }
    let designs: Vec<Result<Option<PlantDesign>, ModelError>> =
        tasks.par_iter().map(|&(y, c, p)| site_design(s, p, c, y)).collect();

    let mut out: Vec<SizedMarket> = Vec::new();
    for (&(y, c, p), d) in tasks.iter().zip(designs) {
        if !out.last().is_some_and(|m| m.year == y && m.commodity == c) {
            out.push(SizedMarket {
                commodity: c,
                year: y,
                designs: Vec::new(),
                skipped: Vec::new(),
            });
        }
        let slot = out.last_mut().expect("pushed above");
        match d? {
            Some(d) => slot.designs.push(d),
            None => slot.skipped.push((p.site.clone(), String::from("no route or no output"))),
        }
    }
    Ok(out)
}

/// Supply curve and price of a sized market at `demand` MWh.
pub fn price_market(m: &SizedMarket, demand: f64) -> Result<MarketResult, RunError> {
    let curve = build_supply_curve(m.commodity, m.year, &m.designs);
    let price = price_at(&curve, demand)?;
    let decomposition = decompose_price(&curve, demand)?;
    Ok(MarketResult {
        curve,
        price,
        decomposition,
        skipped: m.skipped.clone(),
    })
}

/// Sizes and prices every requested market at its demand.
pub fn run_wtb(s: &Scenario, req: &WtbRequest) -> Result<Vec<MarketResult>, RunError> {
    let sized = size_markets(s, &req.years, &req.commodities)?;
    sized
        .iter()
        .map(|m| {
            let demand = req
                .demand_mwh
                .or_else(|| s.demand_for(m.year))
                .ok_or_else(|| RunError::Usage(format!("no demand for {}; pass --demand-twh", m.year)))?;
            price_market(m, demand)
        })
        .collect()
}

/// Site LPs in LP text format, one per site, for cross-checking with other
/// solvers, posed at the first output level of the sizing path.
pub fn site_lps(s: &Scenario, commodity: Commodity, year: u16) -> Result<Vec<(SiteKey, String)>, RunError> {
    let mut out = Vec::new();
    for p in &s.profiles {
        let costs = match SiteCosts::resolve(s, &p.site, commodity, year) {
            Ok(k) => k,
            Err(ModelError::NoExportRoute(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let ceiling = costs.eta_el * costs.eta_new() * p.full_load_hours();
        let (lp, _) = build_site_lp(p, &costs, 1e-3 * ceiling);
        out.push((p.site.clone(), lp.to_lp_format()));
    }
    Ok(out)
}

/// One consumer's optimized plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsumerResult {
    pub consumer: ConsumerSite,
    pub year: u16,
    pub options: Vec<DistributionOption>,
    pub plan: DistributionPlan,
    pub per_mwh: PlanCostPerMwh,
}

fn empty_plan(c: &ConsumerSite, year: u16) -> DistributionPlan {
    DistributionPlan {
        consumer: c.name.clone(),
        year,
        demand: 0.0,
        allocations: Vec::new(),
        total_cost: 0.0,
        breakdown: Default::default(),
        delivered: 0.0,
    }
}

pub fn run_consumer(s: &Scenario, c: &ConsumerSite, year: u16, prices: &[BorderPrice]) -> Result<ConsumerResult, ModelError> {
    if c.demand(year) <= 0.0 {
        return Ok(ConsumerResult {
            consumer: c.clone(),
            year,
            options: Vec::new(),
            plan: empty_plan(c, year),
            per_mwh: PlanCostPerMwh::default(),
        });
    }
    let (options, plan) = plan_for_consumer(c, year, prices, s)?;
    let per_mwh = cost_breakdown(&plan);
    Ok(ConsumerResult {
        consumer: c.clone(),
        year,
        options,
        plan,
        per_mwh,
    })
}

/// Plans for every consumer of the scenario, in scenario order.
pub fn run_btc(s: &Scenario, year: u16, prices: &[BorderPrice]) -> Result<Vec<ConsumerResult>, RunError> {
    let results: Vec<Result<ConsumerResult, ModelError>> =
        s.consumers.par_iter().map(|c| run_consumer(s, c, year, prices)).collect();
    Ok(results.into_iter().collect::<Result<Vec<_>, _>>()?)
}

/// A generic site: one import node for every commodity, so every route has
/// the same distance.
pub fn generic_consumer(product: Product, year: u16, demand_gwh: f64, distance_km: f64) -> ConsumerSite {
    ConsumerSite {
        name: format!("generic_{}_{demand_gwh}gwh_{distance_km}km", product.token()),
        product,
        demand_mwh: BTreeMap::from([(year, demand_gwh * 1000.0)]),
        distances_km: Route::ALL.iter().map(|&r| (r, distance_km)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub demand_gwh: f64,
    pub distance_km: f64,
    pub result: ConsumerResult,
}

impl SweepCell {
    pub fn label(&self) -> String {
        plan_label(&self.result)
    }
}

/// Options in use, e.g. `NH3 rail + LH2 truck`; `none` for an empty plan.
pub fn plan_label(r: &ConsumerResult) -> String {
    let parts: Vec<String> = r
        .plan
        .active()
        .map(|a| format!("{} {}", a.imported.symbol(), a.mode.token()))
        .collect();
    if parts.is_empty() {
        String::from("none")
    } else {
        parts.join(" + ")
    }
}

/// The 10 x 10 generic grid, demand-major.
pub fn run_sweep(s: &Scenario, year: u16, product: Product, prices: &[BorderPrice]) -> Result<Vec<SweepCell>, RunError> {
    let cells: Vec<(f64, f64)> = DEMAND_LADDER_GWH
        .iter()
        .flat_map(|&d| DISTANCES_KM.iter().map(move |&x| (d, x)))
        .collect();
    let results: Vec<Result<SweepCell, ModelError>> = cells
        .par_iter()
        .map(|&(d, x)| {
            let c = generic_consumer(product, year, d, x);
            run_consumer(s, &c, year, prices).map(|result| SweepCell {
                demand_gwh: d,
                distance_km: x,
                result,
            })
        })
        .collect();
    Ok(results.into_iter().collect::<Result<Vec<_>, _>>()?)
}
