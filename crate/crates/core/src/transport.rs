//! Transport and conversion economics: annuities, shipping, pipelines,
//! truck and rail fleets, and consumer-side reconversion.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{ModelError, Result};
use crate::math::powf;
use crate::model::{Commodity, Mode, Product, TechCost, HOURS_PER_YEAR};

/// Capital recovery factor.
pub fn crf(wacc: f64, lifetime_y: f64) -> f64 {
    if wacc == 0.0 {
        1.0 / lifetime_y
    } else {
        wacc / (1.0 - powf(1.0 + wacc, -lifetime_y))
    }
}

/// Annual capital charge plus fixed O&M.
pub fn annualize(capex: f64, opex_frac: f64, lifetime_y: f64, wacc: f64) -> f64 {
    capex * crf(wacc, lifetime_y) + opex_frac * capex
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShipParams {
    pub capex_eur: f64,
    pub opex_frac: f64,
    pub lifetime_y: f64,
    pub operating_eur_per_h: f64,
    pub available_hours: f64,
    pub velocity_kmh: f64,
    pub fuel_mwh_per_km: f64,
    pub fuel_eur_per_mwh: f64,
    pub payload_mwh: f64,
    /// Per loading or unloading.
    pub load_time_h: f64,
    pub flash_loss: f64,
    /// Fraction lost per voyage hour.
    pub boiloff_per_h: f64,
}

impl ShipParams {
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.payload_mwh > 0.0) {
            out.push(format!("payload {} must be positive", self.payload_mwh));
        }
        if !(self.velocity_kmh > 0.0) {
            out.push(format!("velocity {} must be positive", self.velocity_kmh));
        }
        if !(self.available_hours > 0.0 && self.available_hours <= HOURS_PER_YEAR) {
            out.push(format!("available hours {} outside (0, 8760]", self.available_hours));
        }
        if !(self.load_time_h > 0.0) {
            out.push(format!("load time {} must be positive", self.load_time_h));
        }
        if !(self.lifetime_y >= 1.0) {
            out.push(format!("lifetime {} below one year", self.lifetime_y));
        }
        for (name, v) in [("flash loss", self.flash_loss), ("boil-off", self.boiloff_per_h)] {
            if !(0.0..1.0).contains(&v) {
                out.push(format!("{name} {v} outside [0, 1)"));
            }
        }
        for (name, v) in [
            ("capex", self.capex_eur),
            ("opex", self.opex_frac),
            ("operating cost", self.operating_eur_per_h),
            ("fuel demand", self.fuel_mwh_per_km),
            ("fuel cost", self.fuel_eur_per_mwh),
        ] {
            if !(v >= 0.0) {
                out.push(format!("{name} {v} must be non-negative"));
            }
        }
        out
    }
}

/// Cost per delivered MWh of one ship serving a route of `distance_km`.
pub fn ship_unit_cost(p: &ShipParams, distance_km: f64, wacc: f64) -> f64 {
    let voyage_h = distance_km / p.velocity_kmh;
    let round_trip = 2.0 * voyage_h + 2.0 * p.load_time_h;
    let trips = p.available_hours / round_trip;
    let delivered = p.payload_mwh * (1.0 - p.flash_loss) * powf(1.0 - p.boiloff_per_h, voyage_h);
    let fixed = annualize(p.capex_eur, p.opex_frac, p.lifetime_y, wacc);
    let operating = p.operating_eur_per_h * p.available_hours;
    let fuel = p.fuel_mwh_per_km * 2.0 * distance_km * p.fuel_eur_per_mwh * trips;
    (fixed + operating + fuel) / (trips * delivered)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PipelineScope {
    InternationalGh2,
    DomesticGh2,
    DomesticNh3,
}

impl PipelineScope {
    pub const ALL: [PipelineScope; 3] = [
        PipelineScope::InternationalGh2,
        PipelineScope::DomesticGh2,
        PipelineScope::DomesticNh3,
    ];

    pub fn token(self) -> &'static str {
        match self {
            PipelineScope::InternationalGh2 => "international_gh2",
            PipelineScope::DomesticGh2 => "domestic_gh2",
            PipelineScope::DomesticNh3 => "domestic_nh3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        PipelineScope::ALL.into_iter().find(|p| p.token().eq_ignore_ascii_case(s.trim()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineParams {
    pub capex_eur_per_km: f64,
    pub opex_frac: f64,
    pub lifetime_y: f64,
    pub capacity_factor: f64,
    pub annual_throughput_mwh: f64,
    /// MWh of electricity per MWh transported per km.
    pub electricity_demand: f64,
    pub electricity_price: f64,
    /// Fraction lost per 100 km.
    pub loss_per_100km: f64,
}

impl PipelineParams {
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.annual_throughput_mwh > 0.0) {
            out.push(format!("throughput {} must be positive", self.annual_throughput_mwh));
        }
        if !(self.capacity_factor > 0.0 && self.capacity_factor <= 1.0) {
            out.push(format!("capacity factor {} outside (0, 1]", self.capacity_factor));
        }
        if !(self.lifetime_y >= 1.0) {
            out.push(format!("lifetime {} below one year", self.lifetime_y));
        }
        if !(0.0..1.0).contains(&self.loss_per_100km) {
            out.push(format!("loss {} outside [0, 1)", self.loss_per_100km));
        }
        for (name, v) in [
            ("capex", self.capex_eur_per_km),
            ("opex", self.opex_frac),
            ("electricity demand", self.electricity_demand),
            ("electricity price", self.electricity_price),
        ] {
            if !(v >= 0.0) {
                out.push(format!("{name} {v} must be non-negative"));
            }
        }
        out
    }

    pub fn delivery_efficiency(&self, distance_km: f64) -> f64 {
        (1.0 - self.loss_per_100km * distance_km / 100.0).max(0.0)
    }
}

/// Levelized cost of a fully used pipeline per MWh transported.
pub fn pipeline_cost_per_mwh(p: &PipelineParams, distance_km: f64, wacc: f64) -> f64 {
    let capital = annualize(p.capex_eur_per_km * distance_km, p.opex_frac, p.lifetime_y, wacc);
    capital / (p.annual_throughput_mwh * p.capacity_factor) + p.electricity_demand * distance_km * p.electricity_price
}

/// One truck or rail configuration for a commodity and year.
///
/// For rail the "tractor" fields describe the locomotive and the trailer
/// fields one wagon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandsideParams {
    pub trailer_capex: f64,
    pub trailer_lifetime_y: f64,
    pub tractor_capex: f64,
    pub tractor_lifetime_y: f64,
    pub opex_frac: f64,
    /// Per trailer or wagon.
    pub payload_mwh: f64,
    pub speed_kmh: f64,
    pub load_time_h: f64,
    pub driver_eur_per_h: f64,
    pub fuel_mwh_per_km: f64,
    pub fuel_eur_per_mwh: f64,
    pub freight_eur_per_km: f64,
    pub throughput_loss: f64,
    /// Per-load boil-off on top of the daily rate.
    pub through_boiloff: f64,
    pub boiloff_per_day: f64,
    pub operating_hours: f64,
}

impl LandsideParams {
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [("payload", self.payload_mwh), ("speed", self.speed_kmh)] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} {v} must be positive"));
            }
        }
        if !(self.operating_hours > 0.0 && self.operating_hours <= HOURS_PER_YEAR) {
            out.push(format!("operating hours {} outside (0, 8760]", self.operating_hours));
        }
        for (name, v) in [("trailer lifetime", self.trailer_lifetime_y), ("tractor lifetime", self.tractor_lifetime_y)] {
            if !(v >= 1.0) {
                out.push(format!("{name} {v} below one year"));
            }
        }
        for (name, v) in [
            ("throughput loss", self.throughput_loss),
            ("through boil-off", self.through_boiloff),
            ("daily boil-off", self.boiloff_per_day),
        ] {
            if !(0.0..1.0).contains(&v) {
                out.push(format!("{name} {v} outside [0, 1)"));
            }
        }
        for (name, v) in [
            ("trailer capex", self.trailer_capex),
            ("tractor capex", self.tractor_capex),
            ("opex", self.opex_frac),
            ("load time", self.load_time_h),
            ("driver wage", self.driver_eur_per_h),
            ("fuel use", self.fuel_mwh_per_km),
            ("fuel cost", self.fuel_eur_per_mwh),
            ("freight rate", self.freight_eur_per_km),
        ] {
            if !(v >= 0.0) {
                out.push(format!("{name} {v} must be non-negative"));
            }
        }
        out
    }
}

/// Economics of one integer transport unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportUnitEconomics {
    pub unit_cost_per_year: f64,
    /// MWh per year one unit can deliver, losses included.
    pub effective_capacity: f64,
    /// Delivered per loaded MWh.
    pub delivery_efficiency: f64,
    /// Distance-driven costs per transported MWh. Zero unless motion costs
    /// are billed per MWh instead of inside `unit_cost_per_year`.
    pub variable_cost_per_mwh: f64,
}

/// Switches that change how landside units are costed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandsideOptions {
    pub wagons_per_train: u32,
    pub apply_through_boiloff: bool,
    pub variable_motion_costs_per_mwh: bool,
}

impl Default for LandsideOptions {
    fn default() -> Self {
        Self {
            wagons_per_train: 20,
            apply_through_boiloff: true,
            variable_motion_costs_per_mwh: false,
        }
    }
}

/// A truck is one tractor with one trailer; a train is one locomotive with
/// `wagons_per_train` wagons.
pub fn landside_unit(
    p: &LandsideParams,
    mode: Mode,
    commodity: Commodity,
    distance_km: f64,
    wacc: f64,
    opts: &LandsideOptions,
) -> Result<TransportUnitEconomics> {
    let trailers = match (mode, commodity) {
        (Mode::Truck, Commodity::Ammonia | Commodity::LiquidHydrogen) => 1.0,
        (Mode::Rail, Commodity::Ammonia | Commodity::LiquidHydrogen) => opts.wagons_per_train as f64,
        _ => return Err(ModelError::InvalidPairing(commodity, mode)),
    };
    let transit_h = distance_km / p.speed_kmh;
    let round_trip = 2.0 * transit_h + 2.0 * p.load_time_h;
    let trips = p.operating_hours / round_trip;

    let through = if opts.apply_through_boiloff { 1.0 - p.through_boiloff } else { 1.0 };
    let daily = (1.0 - p.boiloff_per_day * transit_h / 24.0).max(0.0);
    let delivery_efficiency = (1.0 - p.throughput_loss) * through * daily;
    let loaded = trips * p.payload_mwh * trailers;
    let effective_capacity = loaded * delivery_efficiency;

    let capital = trailers * annualize(p.trailer_capex, p.opex_frac, p.trailer_lifetime_y, wacc)
        + annualize(p.tractor_capex, p.opex_frac, p.tractor_lifetime_y, wacc);
    let labor = p.driver_eur_per_h * p.operating_hours;
    let per_trip_km = 2.0 * distance_km;
    let motion = trips * per_trip_km * (p.fuel_mwh_per_km * p.fuel_eur_per_mwh + p.freight_eur_per_km);

    let (unit_cost_per_year, variable_cost_per_mwh) = if opts.variable_motion_costs_per_mwh {
        let per_mwh = if loaded > 0.0 { (labor + motion) / loaded } else { 0.0 };
        (capital, per_mwh)
    } else {
        (capital + labor + motion, 0.0)
    };
    Ok(TransportUnitEconomics {
        unit_cost_per_year,
        effective_capacity,
        delivery_efficiency,
        variable_cost_per_mwh,
    })
}

/// One pipeline sized to the reference throughput. Electricity for
/// compression is billed at full utilization like landside motion costs.
pub fn pipeline_unit(
    p: &PipelineParams,
    distance_km: f64,
    wacc: f64,
    variable_motion_costs_per_mwh: bool,
) -> TransportUnitEconomics {
    let carried = p.annual_throughput_mwh * p.capacity_factor;
    let delivery_efficiency = p.delivery_efficiency(distance_km);
    let capital = annualize(p.capex_eur_per_km * distance_km, p.opex_frac, p.lifetime_y, wacc);
    let power_per_mwh = p.electricity_demand * distance_km * p.electricity_price;
    let (unit_cost_per_year, variable_cost_per_mwh) = if variable_motion_costs_per_mwh {
        (capital, power_per_mwh)
    } else {
        (capital + power_per_mwh * carried, 0.0)
    };
    TransportUnitEconomics {
        unit_cost_per_year,
        effective_capacity: carried * delivery_efficiency,
        delivery_efficiency,
        variable_cost_per_mwh,
    }
}

/// Consumer-side conversion plants, costed per MWh of input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionPlants {
    pub cracking: TechCost,
    pub regasification: TechCost,
    pub haber_bosch: TechCost,
    pub wacc: f64,
    pub electricity_price: f64,
    pub full_load_hours: f64,
}

impl ConversionPlants {
    /// € per MWh of plant input. Capacity is sized on input; power demand is
    /// per unit of output for synthesis and per unit of input for reconversion.
    fn per_input_mwh(&self, t: &TechCost, power_per_output: bool) -> f64 {
        let capital = annualize(t.capex_eur_per_kw * 1000.0, t.opex_frac, t.lifetime_y, self.wacc);
        let power = if power_per_output { t.power_demand * t.efficiency } else { t.power_demand };
        capital / self.full_load_hours + power * self.electricity_price
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainEfficiency {
    /// Delivered product per transported MWh.
    pub efficiency: f64,
    /// Conversion cost per transported MWh.
    pub conversion_cost_per_mwh: f64,
}

/// Combines transport delivery efficiency with terminal conversion into the
/// desired product.
pub fn chain_efficiency(
    imported: Commodity,
    mode: Mode,
    desired: Product,
    transport_efficiency: f64,
    plants: &ConversionPlants,
) -> Result<ChainEfficiency> {
    if crate::model::Route::for_option(imported, mode).is_none() {
        return Err(ModelError::InvalidPairing(imported, mode));
    }
    let (eff, cost) = match (imported, desired) {
        (Commodity::Ammonia, Product::Ammonia) | (Commodity::GaseousHydrogen, Product::Hydrogen) => (1.0, 0.0),
        (Commodity::Ammonia, Product::Hydrogen) => {
            (plants.cracking.efficiency, plants.per_input_mwh(&plants.cracking, false))
        }
        (Commodity::LiquidHydrogen, Product::Hydrogen) => (
            plants.regasification.efficiency,
            plants.per_input_mwh(&plants.regasification, false),
        ),
        (Commodity::GaseousHydrogen, Product::Ammonia) => {
            (plants.haber_bosch.efficiency, plants.per_input_mwh(&plants.haber_bosch, true))
        }
        (Commodity::LiquidHydrogen, Product::Ammonia) => {
            let r = plants.regasification.efficiency;
            (
                r * plants.haber_bosch.efficiency,
                plants.per_input_mwh(&plants.regasification, false) + r * plants.per_input_mwh(&plants.haber_bosch, true),
            )
        }
    };
    Ok(ChainEfficiency {
        efficiency: transport_efficiency * eff,
        // plants are fed what survives transport
        conversion_cost_per_mwh: cost * transport_efficiency,
    })
}
