use h2chain_core::model::{Commodity, Mode, Product, TechCost};
use h2chain_core::transport::*;
use proptest::prelude::*;

fn ship_nh3() -> ShipParams {
    ShipParams {
        capex_eur: 83_835_432.0,
        opex_frac: 0.04,
        lifetime_y: 25.0,
        operating_eur_per_h: 607.0,
        available_hours: 8000.0,
        velocity_kmh: 30.0,
        fuel_mwh_per_km: 0.69,
        fuel_eur_per_mwh: 170.0,
        payload_mwh: 311_664.0,
        load_time_h: 54.0,
        flash_loss: 0.0,
        boiloff_per_h: 0.0,
    }
}

fn ship_lh2() -> ShipParams {
    ShipParams {
        capex_eur: 410_687_496.0,
        velocity_kmh: 33.0,
        fuel_mwh_per_km: 0.0,
        payload_mwh: 366_663.0,
        flash_loss: 0.0001,
        boiloff_per_h: 0.002 / 24.0,
        ..ship_nh3()
    }
}

fn gh2_pipe() -> PipelineParams {
    PipelineParams {
        capex_eur_per_km: 1_146_105.0,
        opex_frac: 0.05,
        lifetime_y: 40.0,
        capacity_factor: 0.9,
        annual_throughput_mwh: 9_266_574.0,
        electricity_demand: 0.00002,
        electricity_price: 53.0,
        loss_per_100km: 0.0,
    }
}

fn landside(mode: Mode, c: Commodity) -> LandsideParams {
    let lh2 = c == Commodity::LiquidHydrogen;
    let truck = mode == Mode::Truck;
    LandsideParams {
        trailer_capex: if lh2 { 965_699.0 } else { 212_242.0 },
        trailer_lifetime_y: 12.0,
        tractor_capex: if truck { 201_630.0 } else { 2_980_900.0 },
        tractor_lifetime_y: if truck { 5.0 } else { 12.0 },
        opex_frac: 0.02,
        payload_mwh: if lh2 { 133.0 } else { 87.0 },
        speed_kmh: 50.0,
        load_time_h: 1.5,
        driver_eur_per_h: if truck { 38.0 } else { 0.0 },
        fuel_mwh_per_km: if truck { 0.0023 } else { 0.0 },
        fuel_eur_per_mwh: 140.0,
        freight_eur_per_km: if truck { 0.0 } else { 4.75 },
        throughput_loss: 0.01,
        through_boiloff: if lh2 { 0.005 } else { 0.0 },
        boiloff_per_day: if lh2 { 0.003 } else { 0.0 },
        operating_hours: if truck { 2000.0 } else { 8000.0 },
    }
}

fn tech(capex: f64, eff: f64, power: f64, life: f64) -> TechCost {
    TechCost {
        capex_eur_per_kw: capex,
        opex_frac: 0.04,
        lifetime_y: life,
        efficiency: eff,
        power_demand: power,
    }
}

fn plants() -> ConversionPlants {
    ConversionPlants {
        cracking: tech(764.0, 0.78, 0.05, 25.0),
        regasification: tech(812.0, 0.9, 0.01, 30.0),
        haber_bosch: tech(1101.0, 0.85, 0.29, 25.0),
        wacc: 0.08,
        electricity_price: 53.0,
        full_load_hours: 8760.0,
    }
}

const PAIRS: [(Mode, Commodity); 4] = [
    (Mode::Truck, Commodity::Ammonia),
    (Mode::Truck, Commodity::LiquidHydrogen),
    (Mode::Rail, Commodity::Ammonia),
    (Mode::Rail, Commodity::LiquidHydrogen),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn costs_grow_and_capacity_shrinks_with_distance(d in 1.0f64..2000.0, step in 0.0f64..500.0, wacc in 0.0f64..0.2) {
        let e = d + step;
        for ship in [ship_nh3(), ship_lh2()] {
            let a = ship_unit_cost(&ship, d, wacc);
            let b = ship_unit_cost(&ship, e, wacc);
            prop_assert!(a >= 0.0 && a <= b * (1.0 + 1e-12));
        }
        let a = pipeline_cost_per_mwh(&gh2_pipe(), d, wacc);
        let b = pipeline_cost_per_mwh(&gh2_pipe(), e, wacc);
        prop_assert!(a >= 0.0 && a <= b * (1.0 + 1e-12));
        for variable in [false, true] {
            let opts = LandsideOptions { variable_motion_costs_per_mwh: variable, ..LandsideOptions::default() };
            for (mode, c) in PAIRS {
                let p = landside(mode, c);
                let u = landside_unit(&p, mode, c, d, wacc, &opts).unwrap();
                let v = landside_unit(&p, mode, c, e, wacc, &opts).unwrap();
                prop_assert!(u.unit_cost_per_year >= 0.0 && u.variable_cost_per_mwh >= 0.0);
                prop_assert!(u.unit_cost_per_year <= v.unit_cost_per_year * (1.0 + 1e-12));
                prop_assert!(u.variable_cost_per_mwh <= v.variable_cost_per_mwh * (1.0 + 1e-12) + 1e-15);
                prop_assert!(u.effective_capacity > 0.0);
                prop_assert!(v.effective_capacity <= u.effective_capacity * (1.0 + 1e-12));
            }
            let u = pipeline_unit(&gh2_pipe(), d, wacc, variable);
            let v = pipeline_unit(&gh2_pipe(), e, wacc, variable);
            prop_assert!(u.unit_cost_per_year <= v.unit_cost_per_year * (1.0 + 1e-12));
            prop_assert!(v.effective_capacity <= u.effective_capacity * (1.0 + 1e-12));
        }
    }

    #[test]
    fn per_mwh_costs_are_continuous(d in 0.0f64..5000.0) {
        let h = 1e-7;
        prop_assert!(rel(ship_unit_cost(&ship_nh3(), d, 0.08), ship_unit_cost(&ship_nh3(), d + h, 0.08)) < 1e-8);
        prop_assert!(rel(ship_unit_cost(&ship_lh2(), d, 0.08), ship_unit_cost(&ship_lh2(), d + h, 0.08)) < 1e-8);
        prop_assert!(rel(pipeline_cost_per_mwh(&gh2_pipe(), d, 0.08), pipeline_cost_per_mwh(&gh2_pipe(), d + h, 0.08)) < 1e-8);
    }

    #[test]
    fn chain_efficiency_is_a_fraction(d in 1.0f64..1500.0, product_h2 in any::<bool>()) {
        let product = if product_h2 { Product::Hydrogen } else { Product::Ammonia };
        for c in Commodity::ALL {
            for mode in Mode::ALL {
                let transport_eff = match (c, mode) {
                    (Commodity::GaseousHydrogen, Mode::Pipeline) => pipeline_unit(&gh2_pipe(), d, 0.08, false).delivery_efficiency,
                    (_, Mode::Pipeline) => 1.0,
                    (Commodity::GaseousHydrogen, _) => 1.0,
                    _ => landside_unit(&landside(mode, c), mode, c, d, 0.08, &LandsideOptions::default()).unwrap().delivery_efficiency,
                };
                match chain_efficiency(c, mode, product, transport_eff, &plants()) {
                    Ok(ch) => {
                        prop_assert!(ch.efficiency > 0.0 && ch.efficiency <= 1.0);
                        prop_assert!(ch.conversion_cost_per_mwh >= 0.0);
                    }
                    Err(_) => prop_assert!(matches!(
                        (c, mode),
                        (Commodity::GaseousHydrogen, Mode::Truck | Mode::Rail) | (Commodity::LiquidHydrogen, Mode::Pipeline)
                    )),
                }
            }
        }
    }
}

#[test]
fn reconversion_efficiencies() {
    let p = plants();
    let same = chain_efficiency(Commodity::Ammonia, Mode::Truck, Product::Ammonia, 0.99, &p).unwrap();
    assert_eq!(same.efficiency, 0.99);
    assert_eq!(same.conversion_cost_per_mwh, 0.0);
    let cracked = chain_efficiency(Commodity::Ammonia, Mode::Rail, Product::Hydrogen, 0.99, &p).unwrap();
    assert!(rel(cracked.efficiency, 0.78 * 0.99) < 1e-15);
    let regas = chain_efficiency(Commodity::LiquidHydrogen, Mode::Truck, Product::Hydrogen, 0.97, &p).unwrap();
    assert!(rel(regas.efficiency, 0.9 * 0.97) < 1e-15);
    let hb = chain_efficiency(Commodity::GaseousHydrogen, Mode::Pipeline, Product::Ammonia, 1.0, &p).unwrap();
    assert!(rel(hb.efficiency, 0.85) < 1e-15);
    assert!(hb.conversion_cost_per_mwh > 0.29 * 0.85 * 53.0);
}

#[test]
fn zero_distance_ship_is_fixed_cost_over_port_turns() {
    let p = ship_nh3();
    let fixed = annualize(p.capex_eur, p.opex_frac, p.lifetime_y, 0.08) + p.operating_eur_per_h * p.available_hours;
    let want = fixed / (p.available_hours / (2.0 * p.load_time_h) * p.payload_mwh);
    assert!(rel(ship_unit_cost(&p, 0.0, 0.08), want) < 1e-12);
}
