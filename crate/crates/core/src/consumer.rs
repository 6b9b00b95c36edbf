//! Border-to-consumer distribution: integer transport units per
//! (commodity, mode) option, chosen per consumer site at minimum total cost.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ModelError, Result};
use crate::math::{abs, ceil, floor};
use crate::model::{Commodity, ConsumerSite, Mode, Route, Scenario, StorageKind, Tech};
use crate::transport::{
    chain_efficiency, landside_unit, pipeline_unit, ConversionPlants, LandsideOptions, PipelineScope,
    TransportUnitEconomics,
};
use crate::well_to_border::BorderPrice;

/// Canonical option order; ties between equal-cost plans go to the
/// lexicographically smallest unit vector in this order.
pub const OPTION_ORDER: [(Commodity, Mode); 6] = [
    (Commodity::Ammonia, Mode::Truck),
    (Commodity::Ammonia, Mode::Rail),
    (Commodity::Ammonia, Mode::Pipeline),
    (Commodity::LiquidHydrogen, Mode::Truck),
    (Commodity::LiquidHydrogen, Mode::Rail),
    (Commodity::GaseousHydrogen, Mode::Pipeline),
];

/// Largest enumeration space `brute_force_plan` accepts.
pub const BRUTE_FORCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionOption {
    pub imported: Commodity,
    pub mode: Mode,
    pub consumer: String,
    pub distance_km: f64,
    /// € per unit and year.
    pub unit_cost_per_year: f64,
    /// MWh one unit can load per year.
    pub effective_capacity: f64,
    /// Border price, € per MWh.
    pub procurement_price: f64,
    pub storage_cost_per_mwh: f64,
    pub conversion_cost_per_mwh: f64,
    /// Motion costs billed per transported MWh; zero unless switched on.
    pub variable_cost_per_mwh: f64,
    /// Delivered product per transported MWh.
    pub chain_eff: f64,
}

impl DistributionOption {
    /// Cost of one transported MWh apart from the units themselves.
    pub fn rate(&self) -> f64 {
        self.procurement_price + self.storage_cost_per_mwh + self.conversion_cost_per_mwh + self.variable_cost_per_mwh
    }

    /// Units needed to cover `demand` with this option alone.
    pub fn unit_bound(&self, demand: f64) -> u64 {
        let per_unit = self.chain_eff * self.effective_capacity;
        if demand <= 0.0 {
            return 0;
        }
        if !(per_unit > 0.0) {
            return 0;
        }
        ceil(demand / per_unit - 1e-12) as u64
    }

    fn usable(&self) -> bool {
        self.chain_eff > 0.0 && self.effective_capacity > 0.0
    }
}

/// What one option carries in a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub imported: Commodity,
    pub mode: Mode,
    pub units: u64,
    pub transported: f64,
    pub procured: f64,
    pub delivered: f64,
}

/// Annual € by cost component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub procurement: f64,
    pub transport: f64,
    pub storage: f64,
    pub conversion: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.procurement + self.transport + self.storage + self.conversion
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionPlan {
    pub consumer: String,
    pub year: u16,
    pub demand: f64,
    /// One entry per option, in the order the options were given.
    pub allocations: Vec<Allocation>,
    pub total_cost: f64,
    pub breakdown: CostBreakdown,
    pub delivered: f64,
}

impl DistributionPlan {
    pub fn units(&self) -> Vec<u64> {
        self.allocations.iter().map(|a| a.units).collect()
    }

    /// Options that carry anything.
    pub fn active(&self) -> impl Iterator<Item = &Allocation> {
        self.allocations.iter().filter(|a| a.units > 0 || a.transported > 0.0)
    }

    /// Quantity procured per commodity.
    pub fn procured(&self, c: Commodity) -> f64 {
        self.allocations.iter().filter(|a| a.imported == c).map(|a| a.procured).sum()
    }
}

/// € per delivered MWh.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanCostPerMwh {
    pub total: f64,
    pub procurement: f64,
    pub transport: f64,
    pub storage: f64,
    pub conversion: f64,
}

fn price_for(prices: &[BorderPrice], c: Commodity, year: u16) -> Option<f64> {
    prices.iter().find(|p| p.commodity == c && p.year == year).map(|p| p.price)
}

/// Prices every valid distribution mode the site has a distance for.
pub fn build_options(
    consumer: &ConsumerSite,
    year: u16,
    prices: &[BorderPrice],
    scenario: &Scenario,
) -> Result<Vec<DistributionOption>> {
    let k = &scenario.constants;
    let wacc = k.importer_wacc;
    let tech = |t: Tech| {
        scenario
            .tech(t, year)
            .copied()
            .ok_or_else(|| ModelError::MissingData(format!("{} costs for {year}", t.token())))
    };
    let plants = ConversionPlants {
        cracking: tech(Tech::Cracking)?,
        regasification: tech(Tech::Regasification)?,
        haber_bosch: tech(Tech::HaberBosch)?,
        wacc,
        electricity_price: k.electricity_price_eur_per_mwh,
        full_load_hours: k.consumer_conversion_hours,
    };
    let landside_opts = LandsideOptions {
        wagons_per_train: k.wagons_per_train,
        apply_through_boiloff: k.apply_through_boiloff,
        variable_motion_costs_per_mwh: k.variable_motion_costs_per_mwh,
    };

    let mut out = Vec::new();
    for (imported, mode) in OPTION_ORDER {
        let Some(route) = Route::for_option(imported, mode) else {
            continue;
        };
        let Some(&d) = consumer.distances_km.get(&route) else {
            continue;
        };
        if !d.is_finite() || d < 0.0 {
            continue;
        }
        let price = price_for(prices, imported, year)
            .ok_or_else(|| ModelError::MissingData(format!("{imported} border price for {year}")))?;
        let econ: TransportUnitEconomics = match mode {
            Mode::Pipeline => {
                let scope = match imported {
                    Commodity::GaseousHydrogen => PipelineScope::DomesticGh2,
                    _ => PipelineScope::DomesticNh3,
                };
                let p = scenario
                    .pipelines
                    .get(&scope)
                    .ok_or_else(|| ModelError::MissingData(format!("{} pipeline", scope.token())))?;
                pipeline_unit(p, d, wacc, k.variable_motion_costs_per_mwh)
            }
            Mode::Truck | Mode::Rail => {
                let p = scenario
                    .landside
                    .get(&(mode, imported, year))
                    .ok_or_else(|| ModelError::MissingData(format!("{mode} {imported} fleet for {year}")))?;
                landside_unit(p, mode, imported, d, wacc, &landside_opts)?
            }
        };
        let storage = match (mode, StorageKind::tank_for(imported)) {
            (Mode::Truck | Mode::Rail, Some(kind)) => scenario
                .storage_for(kind, year)
                .map(|s| s.tank_eur_per_mwh)
                .ok_or_else(|| ModelError::MissingData(format!("{} storage for {year}", kind.token())))?,
            _ => 0.0,
        };
        let chain = chain_efficiency(imported, mode, consumer.product, econ.delivery_efficiency, &plants)?;
        // losses enter once, through the chain efficiency
        let loadable = if econ.delivery_efficiency > 0.0 {
            econ.effective_capacity / econ.delivery_efficiency
        } else {
            0.0
        };
        out.push(DistributionOption {
            imported,
            mode,
            consumer: consumer.name.clone(),
            distance_km: d,
            unit_cost_per_year: econ.unit_cost_per_year,
            effective_capacity: loadable,
            procurement_price: price,
            storage_cost_per_mwh: storage,
            conversion_cost_per_mwh: chain.conversion_cost_per_mwh,
            variable_cost_per_mwh: econ.variable_cost_per_mwh,
            chain_eff: chain.efficiency,
        });
    }
    if !out.iter().any(DistributionOption::usable) {
        return Err(ModelError::NoFeasibleOption(consumer.name.clone()));
    }
    Ok(out)
}

/// Cheapest transported quantities for fixed unit counts: fill options by
/// ascending cost per delivered MWh. `None` when the units cannot cover the
/// demand.
fn fill(options: &[DistributionOption], order: &[usize], units: &[u64], demand: f64) -> Option<(f64, Vec<f64>)> {
    let mut q = vec![0.0; options.len()];
    let mut cost: f64 = options.iter().zip(units).map(|(o, &u)| o.unit_cost_per_year * u as f64).sum();
    let mut remaining = demand;
    for &o in order {
        if remaining <= 0.0 {
            break;
        }
        let opt = &options[o];
        let can = units[o] as f64 * opt.effective_capacity * opt.chain_eff;
        if can <= 0.0 {
            continue;
        }
        let take = can.min(remaining);
        let t = if take == can { units[o] as f64 * opt.effective_capacity } else { take / opt.chain_eff };
        q[o] = t;
        cost += t * opt.rate();
        remaining -= take;
    }
    if remaining > 1e-12 * demand {
        return None;
    }
    Some((cost, q))
}

fn fill_order(options: &[DistributionOption]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..options.len()).filter(|&o| options[o].usable()).collect();
    order.sort_by(|&a, &b| {
        let ra = options[a].rate() / options[a].chain_eff;
        let rb = options[b].rate() / options[b].chain_eff;
        ra.total_cmp(&rb).then(a.cmp(&b))
    });
    order
}

fn tolerance(cost: f64) -> f64 {
    1e-9 * (1.0 + abs(cost))
}

/// Continuous relaxation with `lo <= I <= hi`: a fractional knapsack where
/// units already forced in cost nothing extra per MWh and further capacity
/// carries its unit cost spread over the capacity.
fn relax(options: &[DistributionOption], lo: &[u64], hi: &[u64], demand: f64) -> Option<(f64, Vec<f64>)> {
    struct Piece {
        option: usize,
        deliverable: f64,
        per_delivered: f64,
    }
    let mut pieces = Vec::new();
    let mut base = 0.0;
    for (o, opt) in options.iter().enumerate() {
        base += opt.unit_cost_per_year * lo[o] as f64;
        if !opt.usable() {
            continue;
        }
        let per_unit = opt.effective_capacity * opt.chain_eff;
        if lo[o] > 0 {
            pieces.push(Piece {
                option: o,
                deliverable: lo[o] as f64 * per_unit,
                per_delivered: opt.rate() / opt.chain_eff,
            });
        }
        if hi[o] > lo[o] {
            pieces.push(Piece {
                option: o,
                deliverable: (hi[o] - lo[o]) as f64 * per_unit,
                per_delivered: (opt.unit_cost_per_year / opt.effective_capacity + opt.rate()) / opt.chain_eff,
            });
        }
    }
    pieces.sort_by(|a, b| a.per_delivered.total_cmp(&b.per_delivered).then(a.option.cmp(&b.option)));
    let mut delivered = vec![0.0; options.len()];
    let mut cost = base;
    let mut remaining = demand;
    for p in &pieces {
        if remaining <= 0.0 {
            break;
        }
        let take = p.deliverable.min(remaining);
        delivered[p.option] += take;
        cost += take * p.per_delivered;
        remaining -= take;
    }
    if remaining > 1e-12 * demand {
        return None;
    }
    let units = options
        .iter()
        .enumerate()
        .map(|(o, opt)| {
            let need = if opt.usable() { delivered[o] / (opt.effective_capacity * opt.chain_eff) } else { 0.0 };
            need.max(lo[o] as f64)
        })
        .collect();
    Some((cost, units))
}

fn near_integer(x: f64) -> bool {
    abs(x - libm::round(x)) <= 1e-9 * (1.0 + abs(x))
}

struct Search<'a> {
    options: &'a [DistributionOption],
    order: Vec<usize>,
    demand: f64,
    best: Option<(f64, Vec<u64>)>,
}

impl Search<'_> {
    fn offer(&mut self, units: Vec<u64>) {
        if let Some((cost, _)) = fill(self.options, &self.order, &units, self.demand) {
            let better = match &self.best {
                None => true,
                Some((b, _)) => cost < *b,
            };
            if better {
                self.best = Some((cost, units));
            }
        }
    }

    /// Depth-first branch and bound, down branch first; `cap` prunes nodes
    /// whose bound exceeds an externally known target.
    fn branch(&mut self, lo: Vec<u64>, hi: Vec<u64>, cap: Option<f64>) {
        let mut stack = vec![(lo, hi)];
        while let Some((lo, hi)) = stack.pop() {
            let Some((bound, relaxed)) = relax(self.options, &lo, &hi, self.demand) else {
                continue;
            };
            let limit = match (&self.best, cap) {
                (Some((b, _)), Some(c)) => b.min(c),
                (Some((b, _)), None) => *b,
                (None, Some(c)) => c,
                (None, None) => f64::INFINITY,
            };
            if bound > limit + tolerance(limit) {
                continue;
            }
            let rounded: Vec<u64> = relaxed
                .iter()
                .map(|&x| if near_integer(x) { libm::round(x) as u64 } else { ceil(x) as u64 })
                .collect();
            let split = relaxed.iter().position(|&x| !near_integer(x));
            self.offer(rounded);
            let Some(o) = split else {
                continue;
            };
            let x = relaxed[o];
            let mut down_hi = hi.clone();
            down_hi[o] = floor(x) as u64;
            let mut up_lo = lo.clone();
            up_lo[o] = ceil(x) as u64;
            stack.push((up_lo, hi));
            stack.push((lo, down_hi));
        }
    }
}

fn bounds(options: &[DistributionOption], demand: f64) -> Vec<u64> {
    options.iter().map(|o| if o.usable() { o.unit_bound(demand) } else { 0 }).collect()
}

/// Minimum cost over unit vectors in `[lo, hi]`, if any is feasible.
fn solve_within(options: &[DistributionOption], order: &[usize], lo: Vec<u64>, hi: Vec<u64>, demand: f64, cap: Option<f64>) -> Option<(f64, Vec<u64>)> {
    let mut s = Search {
        options,
        order: order.to_vec(),
        demand,
        best: None,
    };
    s.branch(lo, hi, cap);
    s.best
}

fn empty_plan(options: &[DistributionOption], demand: f64) -> DistributionPlan {
    assemble(options, &vec![0; options.len()], &vec![0.0; options.len()], demand)
}

fn assemble(options: &[DistributionOption], units: &[u64], q: &[f64], demand: f64) -> DistributionPlan {
    let mut breakdown = CostBreakdown::default();
    let mut allocations = Vec::with_capacity(options.len());
    let mut delivered = 0.0;
    for (o, opt) in options.iter().enumerate() {
        let t = q[o];
        breakdown.procurement += t * opt.procurement_price;
        breakdown.transport += units[o] as f64 * opt.unit_cost_per_year + t * opt.variable_cost_per_mwh;
        breakdown.storage += t * opt.storage_cost_per_mwh;
        breakdown.conversion += t * opt.conversion_cost_per_mwh;
        let d = t * opt.chain_eff;
        delivered += d;
        allocations.push(Allocation {
            imported: opt.imported,
            mode: opt.mode,
            units: units[o],
            transported: t,
            procured: t,
            delivered: d,
        });
    }
    DistributionPlan {
        consumer: options.first().map(|o| o.consumer.clone()).unwrap_or_default(),
        year: 0,
        demand,
        allocations,
        total_cost: breakdown.total(),
        breakdown,
        delivered,
    }
}

/// Globally optimal integer units by branch and bound, ties broken towards
/// the lexicographically smallest unit vector.
pub fn optimize_plan(options: &[DistributionOption], demand: f64) -> Result<DistributionPlan> {
    if !(demand >= 0.0) || !demand.is_finite() {
        return Err(ModelError::Infeasible(format!("demand {demand}")));
    }
    if demand == 0.0 {
        return Ok(empty_plan(options, demand));
    }
    if !options.iter().any(DistributionOption::usable) {
        return Err(ModelError::NoFeasibleOption(
            options.first().map(|o| o.consumer.clone()).unwrap_or_default(),
        ));
    }
    let order = fill_order(options);
    let hi = bounds(options, demand);
    let lo = vec![0; options.len()];
    let (best, _) = solve_within(options, &order, lo.clone(), hi.clone(), demand, None)
        .ok_or_else(|| ModelError::Infeasible(String::from("no unit vector covers the demand")))?;
    let target = best + tolerance(best);

    // fix options one at a time at their smallest value that still reaches the optimum
    let (mut lo, mut hi) = (lo, hi);
    for o in 0..options.len() {
        let mut v = lo[o];
        loop {
            let (mut l, mut h) = (lo.clone(), hi.clone());
            l[o] = v;
            h[o] = v;
            if let Some((c, _)) = solve_within(options, &order, l, h, demand, Some(target)) {
                if c <= target {
                    break;
                }
            }
            v += 1;
            if v > hi[o] {
                return Err(ModelError::Infeasible(String::from("tie-break search lost the optimum")));
            }
        }
        lo[o] = v;
        hi[o] = v;
    }
    let (_, q) = fill(options, &order, &lo, demand)
        .ok_or_else(|| ModelError::Infeasible(String::from("chosen units do not cover the demand")))?;
    Ok(assemble(options, &lo, &q, demand))
}

/// Exhaustive enumeration of every unit vector within the single-option
/// bounds. Used as an oracle for `optimize_plan` on small instances.
pub fn brute_force_plan(options: &[DistributionOption], demand: f64) -> Result<DistributionPlan> {
    if !(demand >= 0.0) || !demand.is_finite() {
        return Err(ModelError::Infeasible(format!("demand {demand}")));
    }
    if demand == 0.0 {
        return Ok(empty_plan(options, demand));
    }
    if !options.iter().any(DistributionOption::usable) {
        return Err(ModelError::NoFeasibleOption(
            options.first().map(|o| o.consumer.clone()).unwrap_or_default(),
        ));
    }
    let hi = bounds(options, demand);
    let space: f64 = hi.iter().map(|&u| u as f64 + 1.0).product();
    if space > BRUTE_FORCE_LIMIT {
        return Err(ModelError::InstanceTooLarge(space));
    }
    let order = fill_order(options);
    let n = options.len();

    // odometer over vectors in lexicographic order, last option fastest
    let visit = |f: &mut dyn FnMut(&[u64]) -> bool| {
        let mut v = vec![0u64; n];
        loop {
            if !f(&v) {
                return;
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if v[i] < hi[i] {
                    v[i] += 1;
                    break;
                }
                v[i] = 0;
            }
        }
    };

    let mut best = f64::INFINITY;
    visit(&mut |v| {
        if let Some((c, _)) = fill(options, &order, v, demand) {
            best = best.min(c);
        }
        true
    });
    if !best.is_finite() {
        return Err(ModelError::Infeasible(String::from("no unit vector covers the demand")));
    }
    let target = best + tolerance(best);
    let mut chosen = None;
    visit(&mut |v| {
        if let Some((c, q)) = fill(options, &order, v, demand) {
            if c <= target {
                chosen = Some((v.to_vec(), q));
                return false;
            }
        }
        true
    });
    let (units, q) = chosen.ok_or_else(|| ModelError::Infeasible(String::from("optimum vanished")))?;
    Ok(assemble(options, &units, &q, demand))
}

/// Cost of the plan per delivered MWh by component.
pub fn cost_breakdown(plan: &DistributionPlan) -> PlanCostPerMwh {
    let d = plan.delivered;
    if !(d > 0.0) {
        return PlanCostPerMwh::default();
    }
    let b = &plan.breakdown;
    PlanCostPerMwh {
        total: plan.total_cost / d,
        procurement: b.procurement / d,
        transport: b.transport / d,
        storage: b.storage / d,
        conversion: b.conversion / d,
    }
}

/// Best plan restricted to a single option; `None` when it cannot serve.
pub fn single_mode_plan(options: &[DistributionOption], index: usize, demand: f64) -> Option<DistributionPlan> {
    let opt = options.get(index)?;
    if demand > 0.0 && !opt.usable() {
        return None;
    }
    let mut units = vec![0; options.len()];
    units[index] = opt.unit_bound(demand);
    let order = fill_order(options);
    let (_, q) = fill(options, &order, &units, demand)?;
    Some(assemble(options, &units, &q, demand))
}

/// Optimizes one consumer site for one year.
pub fn plan_for_consumer(
    consumer: &ConsumerSite,
    year: u16,
    prices: &[BorderPrice],
    scenario: &Scenario,
) -> Result<(Vec<DistributionOption>, DistributionPlan)> {
    let options = build_options(consumer, year, prices, scenario)?;
    let mut plan = optimize_plan(&options, consumer.demand(year))?;
    plan.consumer = consumer.name.clone();
    plan.year = year;
    Ok((options, plan))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opt(imported: Commodity, mode: Mode, unit: f64, cap: f64, price: f64, eff: f64) -> DistributionOption {
        DistributionOption {
            imported,
            mode,
            consumer: String::from("site"),
            distance_km: 100.0,
            unit_cost_per_year: unit,
            effective_capacity: cap,
            procurement_price: price,
            storage_cost_per_mwh: 0.0,
            conversion_cost_per_mwh: 0.0,
            variable_cost_per_mwh: 0.0,
            chain_eff: eff,
        }
    }

    #[test]
    fn zero_demand_is_empty() {
        let o = [opt(Commodity::Ammonia, Mode::Truck, 1000.0, 87.0, 100.0, 1.0)];
        let p = optimize_plan(&o, 0.0).unwrap();
        assert_eq!(p.units(), [0]);
        assert_eq!(p.total_cost, 0.0);
    }

    #[test]
    fn ceil_law() {
        let o = [opt(Commodity::Ammonia, Mode::Truck, 1000.0, 87.0, 100.0, 1.0)];
        assert_eq!(optimize_plan(&o, 87.0).unwrap().units(), [1]);
        assert_eq!(optimize_plan(&o, 88.0).unwrap().units(), [2]);
        assert_eq!(brute_force_plan(&o, 88.0).unwrap().units(), [2]);
    }

    #[test]
    fn half_efficiency_doubles_transport() {
        let o = [opt(Commodity::Ammonia, Mode::Rail, 10.0, 1000.0, 50.0, 0.5)];
        let p = optimize_plan(&o, 100.0).unwrap();
        assert!((p.allocations[0].transported - 200.0).abs() < 1e-9);
        assert!((p.delivered - 100.0).abs() < 1e-9);
    }

    #[test]
    fn mixes_modes_when_cheaper() {
        // a cheap small unit tops up a big one
        let o = [
            opt(Commodity::Ammonia, Mode::Truck, 100.0, 10.0, 50.0, 1.0),
            opt(Commodity::Ammonia, Mode::Rail, 5000.0, 1000.0, 50.0, 1.0),
        ];
        let p = optimize_plan(&o, 1005.0).unwrap();
        assert_eq!(p.units(), [1, 1]);
        let b = brute_force_plan(&o, 1005.0).unwrap();
        assert_eq!(b.units(), p.units());
    }

    #[test]
    fn lexicographic_tie_break() {
        let o = [
            opt(Commodity::Ammonia, Mode::Truck, 100.0, 10.0, 50.0, 1.0),
            opt(Commodity::Ammonia, Mode::Rail, 100.0, 10.0, 50.0, 1.0),
        ];
        let p = optimize_plan(&o, 20.0).unwrap();
        assert_eq!(p.units(), [0, 2]);
        assert_eq!(brute_force_plan(&o, 20.0).unwrap().units(), [0, 2]);
    }

    #[test]
    fn too_large_for_enumeration() {
        let o = [
            opt(Commodity::Ammonia, Mode::Truck, 1.0, 1.0, 50.0, 1.0),
            opt(Commodity::Ammonia, Mode::Rail, 1.0, 1.0, 50.0, 1.0),
        ];
        assert!(matches!(brute_force_plan(&o, 5000.0), Err(ModelError::InstanceTooLarge(_))));
    }

    #[test]
    fn breakdown_sums() {
        let mut a = opt(Commodity::LiquidHydrogen, Mode::Truck, 300.0, 40.0, 120.0, 0.9);
        a.storage_cost_per_mwh = 4.0;
        a.conversion_cost_per_mwh = 7.0;
        let p = optimize_plan(&[a], 100.0).unwrap();
        let c = cost_breakdown(&p);
        let sum = c.procurement + c.transport + c.storage + c.conversion;
        assert!((sum - c.total).abs() <= 1e-9 * c.total);
        assert_eq!(p.units(), [3]);
    }
}
