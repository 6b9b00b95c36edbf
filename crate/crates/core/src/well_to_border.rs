//! Well-to-border model: per-site plant sizing, merit-order supply curves,
//! border prices and their decomposition.
//!
//! Every site LP is homogeneous of degree one apart from the renewable
//! potential, so a site's cost per MWh is constant until its renewable
//! capacity is exhausted. Sorting sites by that cost reproduces the dual of
//! the demand row in the joint LP over all sites, which
//! [`build_monolithic_lp`] keeps around for validation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{ModelError, Result};
use crate::lp::{self, LpProblem, LpSolution, Sense, SolverOptions};
use crate::math::{abs, close};
use crate::model::{Commodity, ResourceProfile, Scenario, SiteKey, StorageKind, Tech};
use crate::transport::{annualize, pipeline_cost_per_mwh, ship_unit_cost, PipelineScope};

/// Output per MWh of hydrogen-equivalent electricity when the conversion
/// step draws `q_conv` MWh of power per MWh of product from the same plant.
pub fn combined_conversion_efficiency(eta_el: f64, eta_conv: f64, q_conv: f64) -> f64 {
    eta_conv / (1.0 + q_conv * eta_conv * eta_el)
}

/// Cost per MWh of delivered commodity, split by origin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostComponents {
    pub electricity: f64,
    pub battery: f64,
    pub electrolysis: f64,
    pub conversion: f64,
    pub desalination: f64,
    pub inland_transport: f64,
    pub international_transport: f64,
    pub storage_tank: f64,
}

impl CostComponents {
    pub const NAMES: [&'static str; 8] = [
        "electricity",
        "battery",
        "electrolysis",
        "conversion",
        "desalination",
        "inland_transport",
        "international_transport",
        "storage_tank",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.electricity,
            self.battery,
            self.electrolysis,
            self.conversion,
            self.desalination,
            self.inland_transport,
            self.international_transport,
            self.storage_tank,
        ]
    }

    pub fn from_values(v: [f64; 8]) -> Self {
        Self {
            electricity: v[0],
            battery: v[1],
            electrolysis: v[2],
            conversion: v[3],
            desalination: v[4],
            inland_transport: v[5],
            international_transport: v[6],
            storage_tank: v[7],
        }
    }

    pub fn total(&self) -> f64 {
        self.values().iter().sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::from_values(self.values().map(|v| v * k))
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &Self, k: f64) -> Self {
        let a = self.values();
        let b = other.values();
        Self::from_values(core::array::from_fn(|i| a[i] + k * b[i]))
    }
}

/// Site cost coefficients for one commodity and year, already annualized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteCosts {
    /// € per MW and year.
    pub res_annual: f64,
    pub battery_annual: f64,
    pub electrolyzer_annual: f64,
    pub conversion_annual: f64,
    pub eta_el: f64,
    pub eta_conv: f64,
    pub q_conv: f64,
    pub eta_batt: f64,
    pub e2p_hours: f64,
    pub battery_allowed: bool,
    /// € per MWh of hydrogen.
    pub desalination: f64,
    pub inland_transport: f64,
    /// € per MWh of commodity.
    pub international_transport: f64,
    pub storage_tank: f64,
    pub electrolyzer_bound_uses_conversion_eff: bool,
}

impl SiteCosts {
    pub fn eta_new(&self) -> f64 {
        combined_conversion_efficiency(self.eta_el, self.eta_conv, self.q_conv)
    }

    /// Variable cost per MWh of commodity output.
    pub fn variable_per_mwh(&self) -> f64 {
        (self.desalination + self.inland_transport) / self.eta_new() + self.international_transport + self.storage_tank
    }

    pub fn without_battery(mut self) -> Self {
        self.battery_allowed = false;
        self
    }

    /// Looks up and annualizes everything a site needs.
    pub fn resolve(s: &Scenario, site: &SiteKey, commodity: Commodity, year: u16) -> Result<SiteCosts> {
        let missing = |what: &str| ModelError::MissingData(format!("{what} for {site} in {year}"));
        let fin = s.finance_for(&site.country).ok_or_else(|| missing("country finance"))?;
        let res = s.tech(Tech::Renewable(site.technology), year).ok_or_else(|| missing("renewable cost"))?;
        let el = s.tech(Tech::Electrolysis, year).ok_or_else(|| missing("electrolysis cost"))?;
        let batt = s.storage_for(StorageKind::Battery, year).ok_or_else(|| missing("battery"))?;
        let k = &s.constants;

        let res_annual = annualize(res.capex_eur_per_kw * 1000.0 * fin.capex_index, res.opex_frac, res.lifetime_y, fin.wacc);
        let battery_annual = annualize(batt.capex_eur_per_mwh * batt.e2p_hours, batt.opex_frac, batt.lifetime_y, fin.wacc);
        let electrolyzer_annual = annualize(el.capex_eur_per_kw * 1000.0, el.opex_frac, el.lifetime_y, fin.wacc);

        let (conversion_annual, eta_conv, q_conv) = match commodity {
            Commodity::GaseousHydrogen => (0.0, 1.0, 0.0),
            Commodity::Ammonia | Commodity::LiquidHydrogen => {
                let tech = if commodity == Commodity::Ammonia { Tech::HaberBosch } else { Tech::Liquefaction };
                let t = s.tech(tech, year).ok_or_else(|| missing(tech.token()))?;
                (
                    annualize(t.capex_eur_per_kw * 1000.0, t.opex_frac, t.lifetime_y, fin.wacc),
                    t.efficiency,
                    t.power_demand,
                )
            }
        };

        let inland_transport = if site.shore_band == 0 {
            0.0
        } else {
            let p = s
                .pipelines
                .get(&PipelineScope::DomesticGh2)
                .ok_or_else(|| missing("domestic pipeline"))?;
            pipeline_cost_per_mwh(p, site.inland_distance_km(), fin.wacc)
        };
        let no_route = || ModelError::NoExportRoute(format!("{site} ({})", commodity.symbol()));
        let (international_transport, storage_tank) = match commodity {
            Commodity::GaseousHydrogen => {
                let d = fin.pipeline_distance_km.ok_or_else(no_route)?;
                let p = s
                    .pipelines
                    .get(&PipelineScope::InternationalGh2)
                    .ok_or_else(|| missing("international pipeline"))?;
                (pipeline_cost_per_mwh(p, d, k.importer_wacc), 0.0)
            }
            Commodity::Ammonia | Commodity::LiquidHydrogen => {
                let d = fin.sea_distance_km.ok_or_else(no_route)?;
                let ship = s.ships.get(&commodity).ok_or_else(|| missing("ship"))?;
                let tank_kind = StorageKind::tank_for(commodity).unwrap_or(StorageKind::TankNh3);
                let tank = s.storage_for(tank_kind, year).ok_or_else(|| missing(tank_kind.token()))?;
                (ship_unit_cost(ship, d, k.importer_wacc), tank.tank_eur_per_mwh)
            }
        };

        Ok(SiteCosts {
            res_annual,
            battery_annual,
            electrolyzer_annual,
            conversion_annual,
            eta_el: el.efficiency,
            eta_conv,
            q_conv,
            eta_batt: batt.efficiency,
            e2p_hours: batt.e2p_hours,
            battery_allowed: true,
            desalination: k.desalination_eur_per_mwh,
            inland_transport,
            international_transport,
            storage_tank,
            electrolyzer_bound_uses_conversion_eff: k.electrolyzer_bound_uses_conversion_eff,
        })
    }
}

/// € per MWh charged. Far below any real cost; it only stops the solver from
/// cycling curtailed energy through the battery at zero cost.
pub const CHARGE_TIEBREAK: f64 = 1e-8;

const PER_HOUR: usize = 5;
const RES: usize = 0;
const CHARGE: usize = 1;
const DISCHARGE: usize = 2;
const SOC: usize = 3;
const OUTPUT: usize = 4;

/// Column and row positions of one site inside an LP.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteLpIndex {
    pub cap_res: usize,
    pub cap_batt: usize,
    /// Peak hourly output; electrolyzer and conversion capacities follow
    /// from it through fixed ratios, so one capacity row per hour suffices.
    pub cap_peak: usize,
    pub el_per_peak: f64,
    pub conv_per_peak: f64,
    first_hour: usize,
    pub hours: usize,
    /// Equality row fixing weighted annual output; site LPs only.
    pub output_row: Option<usize>,
}

impl SiteLpIndex {
    pub fn q_res(&self, h: usize) -> usize {
        self.first_hour + h * PER_HOUR + RES
    }
    pub fn charge(&self, h: usize) -> usize {
        self.first_hour + h * PER_HOUR + CHARGE
    }
    pub fn discharge(&self, h: usize) -> usize {
        self.first_hour + h * PER_HOUR + DISCHARGE
    }
    pub fn soc(&self, h: usize) -> usize {
        self.first_hour + h * PER_HOUR + SOC
    }
    pub fn q_conv(&self, h: usize) -> usize {
        self.first_hour + h * PER_HOUR + OUTPUT
    }
    pub fn electrolyzer(&self, x: &[f64]) -> f64 {
        x[self.cap_peak] * self.el_per_peak
    }
    pub fn conversion(&self, x: &[f64]) -> f64 {
        x[self.cap_peak] * self.conv_per_peak
    }

    /// Weighted annual commodity output of a solution.
    pub fn annual_output(&self, profile: &ResourceProfile, x: &[f64]) -> f64 {
        profile.hours.iter().enumerate().map(|(h, w)| w.weight * x[self.q_conv(h)]).sum()
    }

    /// Annual cost of a solution split by component.
    pub fn annual_costs(&self, profile: &ResourceProfile, c: &SiteCosts, x: &[f64]) -> CostComponents {
        let out = self.annual_output(profile, x);
        let eta_new = c.eta_new();
        CostComponents {
            electricity: c.res_annual * x[self.cap_res],
            battery: c.battery_annual * x[self.cap_batt],
            electrolysis: c.electrolyzer_annual * self.electrolyzer(x),
            conversion: c.conversion_annual * self.conversion(x),
            desalination: c.desalination / eta_new * out,
            inland_transport: c.inland_transport / eta_new * out,
            international_transport: c.international_transport * out,
            storage_tank: c.storage_tank * out,
        }
    }
}

fn add_site_block(p: &mut LpProblem, profile: &ResourceProfile, c: &SiteCosts, res_upper: f64, tag: &str) -> SiteLpIndex {
    let inf = f64::INFINITY;
    let batt_upper = if c.battery_allowed { inf } else { 0.0 };
    let cap_res = p.add_column(format!("{tag}cap_res"), c.res_annual, 0.0, res_upper);
    let cap_batt = p.add_column(format!("{tag}cap_batt"), c.battery_annual, 0.0, batt_upper);
    let el_div = if c.electrolyzer_bound_uses_conversion_eff { c.eta_conv } else { c.eta_new() };
    let (el_per_peak, conv_per_peak) = (1.0 / el_div, 1.0 / c.eta_conv);
    let peak_cost = c.electrolyzer_annual * el_per_peak + c.conversion_annual * conv_per_peak;
    let cap_peak = p.add_column(format!("{tag}cap_peak"), peak_cost, 0.0, inf);
    let first_hour = p.num_columns();
    let var = c.variable_per_mwh();
    for (h, wh) in profile.hours.iter().enumerate() {
        // in, out and SOC are pinned to zero in the first hour
        let first = if h == 0 { 0.0 } else { inf };
        p.add_column(format!("{tag}q_res_{h}"), 0.0, 0.0, inf);
        p.add_column(format!("{tag}b_in_{h}"), wh.weight * CHARGE_TIEBREAK, 0.0, first);
        p.add_column(format!("{tag}b_out_{h}"), 0.0, 0.0, first);
        p.add_column(format!("{tag}soc_{h}"), 0.0, 0.0, first);
        p.add_column(format!("{tag}q_conv_{h}"), wh.weight * var, 0.0, inf);
    }
    let idx = SiteLpIndex {
        cap_res,
        cap_batt,
        cap_peak,
        el_per_peak,
        conv_per_peak,
        first_hour,
        hours: profile.hours.len(),
        output_row: None,
    };

    let k = c.eta_el * c.eta_new();
    for (h, wh) in profile.hours.iter().enumerate() {
        let (q_res, b_in, b_out, soc, q) = (idx.q_res(h), idx.charge(h), idx.discharge(h), idx.soc(h), idx.q_conv(h));
        p.add_row(
            format!("{tag}balance_{h}"),
            [(q, 1.0), (q_res, -k), (b_in, k), (b_out, -k)],
            Sense::Eq,
            0.0,
        );
        p.add_row(format!("{tag}res_{h}"), [(q_res, 1.0), (cap_res, -wh.capacity_factor)], Sense::Le, 0.0);
        p.add_row(format!("{tag}peak_{h}"), [(q, 1.0), (cap_peak, -1.0)], Sense::Le, 0.0);
        if h > 0 {
            p.add_row(format!("{tag}charge_{h}"), [(b_in, 1.0), (cap_batt, -1.0)], Sense::Le, 0.0);
            p.add_row(format!("{tag}discharge_{h}"), [(b_out, 1.0), (cap_batt, -1.0)], Sense::Le, 0.0);
            p.add_row(format!("{tag}soc_cap_{h}"), [(soc, 1.0), (cap_batt, -c.e2p_hours)], Sense::Le, 0.0);
            p.add_row(
                format!("{tag}soc_{h}"),
                [
                    (soc, 1.0),
                    (idx.soc(h - 1), -1.0),
                    (b_in, -c.eta_batt),
                    (b_out, 1.0 / c.eta_batt),
                ],
                Sense::Eq,
                0.0,
            );
        }
    }
    idx
}

/// Site LP over one MW of renewable potential: `CAP^RES` lives in [0, 1] and
/// an equality row fixes weighted annual output to `annual_output`.
pub fn build_site_lp(profile: &ResourceProfile, costs: &SiteCosts, annual_output: f64) -> (LpProblem, SiteLpIndex) {
    let mut p = LpProblem::new();
    let mut idx = add_site_block(&mut p, profile, costs, 1.0, "");
    let coeffs: Vec<(usize, f64)> = profile
        .hours
        .iter()
        .enumerate()
        .map(|(h, w)| (idx.q_conv(h), w.weight))
        .collect();
    idx.output_row = Some(p.add_row("output", coeffs, Sense::Eq, annual_output));
    (p, idx)
}

/// Hourly operation per MW of renewable capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourDispatch {
    pub res: f64,
    pub charge: f64,
    pub discharge: f64,
    pub soc: f64,
    pub output: f64,
}

/// Installed capacities per MW of renewable capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacities {
    pub res_mw: f64,
    pub battery_mw: f64,
    pub electrolyzer_mw: f64,
    pub conversion_mw: f64,
}

/// Additional output a site can deliver at a higher marginal cost once its
/// renewable potential is used up, by oversizing downstream equipment to
/// catch peaks that would otherwise be curtailed.
#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    /// MWh per year for the whole site.
    pub quantity: f64,
    pub marginal_cost: f64,
    pub components: CostComponents,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantDesign {
    pub site: SiteKey,
    pub commodity: Commodity,
    pub year: u16,
    pub potential_mw: f64,
    pub capacities: Capacities,
    /// MWh of commodity per MW of renewable capacity.
    pub annual_output: f64,
    /// € per MWh at the border.
    pub unit_cost: f64,
    pub components: CostComponents,
    pub max_annual_output: f64,
    /// Dearer output beyond `max_annual_output`, in increasing cost order.
    pub extensions: Vec<Extension>,
    pub dispatch: Vec<HourDispatch>,
}

fn group_segments(segs: &[lp::RhsSegment]) -> Vec<(usize, usize)> {
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for (i, s) in segs.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if close(segs[g.0].dual, s.dual, 1e-9) => g.1 = i,
            _ => groups.push((i, i)),
        }
    }
    groups
}

/// Sizes one plant. The optimal cost per MWh is constant while renewable
/// capacity is below potential; the end of that ray gives the design.
pub fn size_plant(profile: &ResourceProfile, costs: &SiteCosts, commodity: Commodity, year: u16) -> Result<PlantDesign> {
    size_plant_with(profile, costs, commodity, year, &SolverOptions::default())
}

pub fn size_plant_with(
    profile: &ResourceProfile,
    costs: &SiteCosts,
    commodity: Commodity,
    year: u16,
    opts: &SolverOptions,
) -> Result<PlantDesign> {
    let flh = profile.full_load_hours();
    let ceiling = costs.eta_el * costs.eta_new() * flh;
    if !(ceiling > 0.0) {
        return Err(ModelError::DegenerateSite(format!("{}", profile.site)));
    }
    let (p, idx) = build_site_lp(profile, costs, 1e-3 * ceiling);
    let row = idx.output_row.unwrap_or(0);
    let path = lp::parametric_rhs(&p, row, 2.0 * ceiling, opts)?;
    if !path.initial.is_optimal() {
        return Err(ModelError::Infeasible(format!("site LP for {} is {:?}", profile.site, path.initial.status)));
    }
    let segs = &path.segments;
    if segs.is_empty() {
        return Err(ModelError::DegenerateSite(format!("{}", profile.site)));
    }
    let groups = group_segments(segs);

    let (_, ray_last) = groups[0];
    let x = &segs[ray_last].primal_end;
    let cap_res = x[idx.cap_res];
    if !(cap_res > 0.0) {
        return Err(ModelError::DegenerateSite(format!("{}", profile.site)));
    }
    // normalize to one MW of renewable capacity
    let s = 1.0 / cap_res;
    let annual_output = idx.annual_output(profile, x) * s;
    let components = idx.annual_costs(profile, costs, x).scaled(s / annual_output);
    let unit_cost = components.total();
    let capacities = Capacities {
        res_mw: 1.0,
        battery_mw: x[idx.cap_batt] * s,
        electrolyzer_mw: idx.electrolyzer(x) * s,
        conversion_mw: idx.conversion(x) * s,
    };
    let dispatch = (0..idx.hours)
        .map(|h| HourDispatch {
            res: x[idx.q_res(h)] * s,
            charge: x[idx.charge(h)] * s,
            discharge: x[idx.discharge(h)] * s,
            soc: x[idx.soc(h)] * s,
            output: x[idx.q_conv(h)] * s,
        })
        .collect();

    let mut extensions = Vec::new();
    for &(a, b) in &groups[1..] {
        let xa = &segs[a].primal_start;
        let xb = &segs[b].primal_end;
        let dq = segs[b].rhs_end - segs[a].rhs_start;
        if !(dq > 1e-9 * ceiling) {
            continue;
        }
        let comps = idx
            .annual_costs(profile, costs, xb)
            .add_scaled(&idx.annual_costs(profile, costs, xa), -1.0)
            .scaled(1.0 / dq);
        extensions.push(Extension {
            quantity: dq * profile.potential_mw,
            marginal_cost: comps.total(),
            components: comps,
        });
    }

    Ok(PlantDesign {
        site: profile.site.clone(),
        commodity,
        year,
        potential_mw: profile.potential_mw,
        capacities,
        annual_output,
        unit_cost,
        components,
        max_annual_output: annual_output * profile.potential_mw,
        extensions,
        dispatch,
    })
}

/// Outcome of sizing every site of a scenario for one commodity and year.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SizingRun {
    pub designs: Vec<PlantDesign>,
    /// Sites left out, e.g. without an export route or without any output.
    pub skipped: Vec<(SiteKey, ModelError)>,
}

/// Sizes one site of a scenario. Sites that cannot supply the commodity
/// come back as `Ok(None)`.
pub fn size_site(s: &Scenario, profile: &ResourceProfile, commodity: Commodity, year: u16) -> Result<PlantDesign> {
    let costs = SiteCosts::resolve(s, &profile.site, commodity, year)?;
    size_plant(profile, &costs, commodity, year)
}

pub fn size_all(s: &Scenario, commodity: Commodity, year: u16) -> Result<SizingRun> {
    let mut run = SizingRun::default();
    for p in &s.profiles {
        match size_site(s, p, commodity, year) {
            Ok(d) => run.designs.push(d),
            Err(e @ (ModelError::NoExportRoute(_) | ModelError::DegenerateSite(_))) => run.skipped.push((p.site.clone(), e)),
            Err(e) => return Err(e),
        }
    }
    Ok(run)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupplyStep {
    pub site: SiteKey,
    /// 0 for the main design, k for its k-th extension.
    pub tier: u32,
    pub quantity: f64,
    pub marginal_cost: f64,
    pub components: CostComponents,
    /// Quantity up to and including this step.
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupplyCurve {
    pub commodity: Commodity,
    pub year: u16,
    pub steps: Vec<SupplyStep>,
}

impl SupplyCurve {
    pub fn total(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.cumulative)
    }
}

/// Merit order over all designs and their extensions, ties broken by site
/// key. The result does not depend on input order.
pub fn build_supply_curve(commodity: Commodity, year: u16, designs: &[PlantDesign]) -> SupplyCurve {
    let mut steps: Vec<SupplyStep> = Vec::new();
    for d in designs {
        steps.push(SupplyStep {
            site: d.site.clone(),
            tier: 0,
            quantity: d.max_annual_output,
            marginal_cost: d.unit_cost,
            components: d.components,
            cumulative: 0.0,
        });
        for (k, e) in d.extensions.iter().enumerate() {
            steps.push(SupplyStep {
                site: d.site.clone(),
                tier: k as u32 + 1,
                quantity: e.quantity,
                marginal_cost: e.marginal_cost,
                components: e.components,
                cumulative: 0.0,
            });
        }
    }
    steps.retain(|s| s.quantity > 0.0);
    steps.sort_by(|a, b| {
        a.marginal_cost
            .total_cmp(&b.marginal_cost)
            .then_with(|| a.site.cmp(&b.site))
            .then_with(|| a.tier.cmp(&b.tier))
    });
    let mut cum = 0.0;
    for s in &mut steps {
        cum += s.quantity;
        s.cumulative = cum;
    }
    SupplyCurve { commodity, year, steps }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorderPrice {
    pub commodity: Commodity,
    pub year: u16,
    pub demand: f64,
    pub price: f64,
    pub marginal_site: SiteKey,
    pub marginal_components: CostComponents,
    /// MWh per exporting country.
    pub supplier_mix: BTreeMap<String, f64>,
}

const EDGE: f64 = 1e-12;

/// Quantity taken from each step when demand is filled greedily, and the
/// index of the marginal step.
pub fn dispatch(curve: &SupplyCurve, demand: f64) -> Result<(Vec<f64>, usize)> {
    let total = curve.total();
    if curve.steps.is_empty() || demand > total * (1.0 + EDGE) {
        return Err(ModelError::DemandExceedsSupply { demand, supply: total });
    }
    let demand = demand.max(0.0);
    let marginal = curve
        .steps
        .iter()
        .position(|s| demand <= s.cumulative * (1.0 + EDGE))
        .unwrap_or(curve.steps.len() - 1);
    let mut taken = alloc::vec![0.0; curve.steps.len()];
    let mut left = demand;
    for (i, s) in curve.steps.iter().enumerate().take(marginal + 1) {
        let q = if i == marginal { left } else { s.quantity.min(left) };
        taken[i] = q.max(0.0);
        left -= taken[i];
    }
    Ok((taken, marginal))
}

/// Border price at `demand`: the cost of the step holding the last MWh. At an
/// exact step edge the cheaper step sets the price.
pub fn price_at(curve: &SupplyCurve, demand: f64) -> Result<BorderPrice> {
    let (taken, m) = dispatch(curve, demand)?;
    let mut supplier_mix: BTreeMap<String, f64> = BTreeMap::new();
    for (s, &q) in curve.steps.iter().zip(&taken) {
        if q > 0.0 {
            *supplier_mix.entry(s.site.country.clone()).or_insert(0.0) += q;
        }
    }
    let step = &curve.steps[m];
    Ok(BorderPrice {
        commodity: curve.commodity,
        year: curve.year,
        demand,
        price: step.marginal_cost,
        marginal_site: step.site.clone(),
        marginal_components: step.components,
        supplier_mix,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceDecomposition {
    pub price: f64,
    pub marginal: CostComponents,
    /// Quantity-weighted over the dispatched mix.
    pub average: CostComponents,
    pub average_cost: f64,
}

pub fn decompose_price(curve: &SupplyCurve, demand: f64) -> Result<PriceDecomposition> {
    let (taken, m) = dispatch(curve, demand)?;
    let marginal = curve.steps[m].components;
    let total: f64 = taken.iter().sum();
    let average = if total > 0.0 {
        curve
            .steps
            .iter()
            .zip(&taken)
            .fold(CostComponents::default(), |acc, (s, &q)| acc.add_scaled(&s.components, q / total))
    } else {
        marginal
    };
    Ok(PriceDecomposition {
        price: curve.steps[m].marginal_cost,
        marginal,
        average,
        average_cost: average.total(),
    })
}

/// Joint LP over several sites coupled by one demand row.
#[derive(Debug, Clone, PartialEq)]
pub struct MonolithicLp {
    pub problem: LpProblem,
    pub demand_row: usize,
    pub sites: Vec<SiteLpIndex>,
}

pub fn build_monolithic_lp(sites: &[(&ResourceProfile, &SiteCosts)], demand: f64) -> MonolithicLp {
    let mut p = LpProblem::new();
    let mut idx = Vec::with_capacity(sites.len());
    for (i, (profile, costs)) in sites.iter().enumerate() {
        idx.push(add_site_block(&mut p, profile, costs, profile.potential_mw, &format!("s{i}_")));
    }
    let mut coeffs = Vec::new();
    for ((profile, _), ix) in sites.iter().zip(&idx) {
        for (h, w) in profile.hours.iter().enumerate() {
            coeffs.push((ix.q_conv(h), w.weight));
        }
    }
    let demand_row = p.add_row("demand", coeffs, Sense::Eq, demand);
    MonolithicLp {
        problem: p,
        demand_row,
        sites: idx,
    }
}

/// Shadow price of the demand row.
pub fn dual_price(sol: &LpSolution, demand_row: usize) -> f64 {
    sol.duals[demand_row]
}

/// Largest violation of the balance, capacity and storage constraints by a
/// design's retained hourly operation.
pub fn design_residual(d: &PlantDesign, profile: &ResourceProfile, c: &SiteCosts) -> f64 {
    let k = c.eta_el * c.eta_new();
    let el_div = if c.electrolyzer_bound_uses_conversion_eff { c.eta_conv } else { c.eta_new() };
    let cap = &d.capacities;
    let mut worst: f64 = 0.0;
    let mut bump = |v: f64| worst = worst.max(v);
    for (h, (x, wh)) in d.dispatch.iter().zip(&profile.hours).enumerate() {
        bump(abs(x.output - k * (x.res - x.charge + x.discharge)));
        bump(x.res - wh.capacity_factor * cap.res_mw);
        bump(x.output / el_div - cap.electrolyzer_mw);
        bump(x.output / c.eta_conv - cap.conversion_mw);
        bump(x.charge - cap.battery_mw);
        bump(x.discharge - cap.battery_mw);
        bump(x.soc - c.e2p_hours * cap.battery_mw);
        for v in [x.res, x.charge, x.discharge, x.soc, x.output] {
            bump(-v);
        }
        if h == 0 {
            bump(abs(x.soc));
        } else {
            let prev = d.dispatch[h - 1].soc;
            bump(abs(x.soc - prev - c.eta_batt * x.charge + x.discharge / c.eta_batt));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Technology, WeightedHour};
    use alloc::vec;

    fn key(country: &str, band: u32) -> SiteKey {
        SiteKey {
            country: country.into(),
            technology: Technology::Pv,
            resource_class: 1,
            shore_band: band,
        }
    }

    fn costs() -> SiteCosts {
        SiteCosts {
            res_annual: 40_000.0,
            battery_annual: 60_000.0,
            electrolyzer_annual: 90_000.0,
            conversion_annual: 100_000.0,
            eta_el: 0.67,
            eta_conv: 0.85,
            q_conv: 0.29,
            eta_batt: 0.98,
            e2p_hours: 6.0,
            battery_allowed: true,
            desalination: 1.0,
            inland_transport: 0.0,
            international_transport: 6.0,
            storage_tank: 1.7,
            electrolyzer_bound_uses_conversion_eff: false,
        }
    }

    fn day_night(potential: f64) -> ResourceProfile {
        let hours = (0..24)
            .map(|h| WeightedHour {
                capacity_factor: if (7..19).contains(&h) { 0.2 + 0.05 * (6 - (h as i32 - 12).abs()) as f64 } else { 0.0 },
                weight: 365.0,
            })
            .collect();
        ResourceProfile {
            site: key("AA", 0),
            potential_mw: potential,
            hours,
        }
    }

    #[test]
    fn combined_efficiency_reference_value() {
        let v = combined_conversion_efficiency(0.67, 0.85, 0.29);
        assert!(abs(v - 0.85 / (1.0 + 0.29 * 0.85 * 0.67)) < 1e-15);
        assert!(abs(v - 0.7295) < 1e-4);
        assert_eq!(combined_conversion_efficiency(0.67, 0.9, 0.0), 0.9);
        assert_eq!(combined_conversion_efficiency(0.67, 1.0, 0.0), 1.0);
    }

    #[test]
    fn flat_profile_needs_no_battery() {
        let p = ResourceProfile {
            site: key("AA", 0),
            potential_mw: 10.0,
            hours: vec![
                WeightedHour {
                    capacity_factor: 1.0,
                    weight: 365.0
                };
                24
            ],
        };
        let d = size_plant(&p, &costs(), Commodity::Ammonia, 2030).unwrap();
        assert!(d.capacities.battery_mw.abs() < 1e-9);
        assert!(close(d.unit_cost, d.components.total(), 1e-12));
        assert!(close(d.max_annual_output, 10.0 * d.annual_output, 1e-12));
    }

    #[test]
    fn design_satisfies_its_constraints() {
        let p = day_night(5.0);
        let c = costs();
        let d = size_plant(&p, &c, Commodity::Ammonia, 2030).unwrap();
        assert!(design_residual(&d, &p, &c) <= 1e-6);
        assert_eq!(d.dispatch[0].soc, 0.0);
        assert!(d.annual_output > 0.0);
    }

    #[test]
    fn all_zero_profile_is_degenerate() {
        let mut p = day_night(1.0);
        for h in &mut p.hours {
            h.capacity_factor = 0.0;
        }
        assert!(matches!(
            size_plant(&p, &costs(), Commodity::Ammonia, 2030),
            Err(ModelError::DegenerateSite(_))
        ));
    }

    fn step(country: &str, cost: f64, q: f64) -> PlantDesign {
        PlantDesign {
            site: key(country, 0),
            commodity: Commodity::Ammonia,
            year: 2030,
            potential_mw: 1.0,
            capacities: Capacities {
                res_mw: 1.0,
                battery_mw: 0.0,
                electrolyzer_mw: 0.0,
                conversion_mw: 0.0,
            },
            annual_output: q,
            unit_cost: cost,
            components: CostComponents {
                electricity: cost,
                ..CostComponents::default()
            },
            max_annual_output: q,
            extensions: Vec::new(),
            dispatch: Vec::new(),
        }
    }

    #[test]
    fn price_reads_the_marginal_step() {
        let designs = [step("CC", 30.0, 5.0), step("AA", 10.0, 5.0), step("BB", 20.0, 5.0)];
        let curve = build_supply_curve(Commodity::Ammonia, 2030, &designs);
        let cum: Vec<f64> = curve.steps.iter().map(|s| s.cumulative).collect();
        assert_eq!(cum, vec![5.0, 10.0, 15.0]);
        let p = price_at(&curve, 7.0).unwrap();
        assert_eq!(p.price, 20.0);
        assert_eq!(p.supplier_mix.get("AA"), Some(&5.0));
        assert_eq!(p.supplier_mix.get("BB"), Some(&2.0));
        assert_eq!(p.supplier_mix.get("CC"), None);
        assert_eq!(price_at(&curve, 5.0).unwrap().price, 10.0);
        let zero = price_at(&curve, 0.0).unwrap();
        assert_eq!(zero.price, 10.0);
        assert!(zero.supplier_mix.is_empty());
        assert!(matches!(price_at(&curve, 16.0), Err(ModelError::DemandExceedsSupply { .. })));
    }

    #[test]
    fn single_step_marginal_equals_average() {
        let curve = build_supply_curve(Commodity::Ammonia, 2030, &[step("AA", 12.0, 3.0)]);
        let d = decompose_price(&curve, 2.0).unwrap();
        assert_eq!(d.marginal, d.average);
        assert_eq!(d.price, 12.0);
    }
}
