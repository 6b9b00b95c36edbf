#![allow(dead_code)]

pub mod lp_check;
pub mod physics;

use h2chain_core::model::{ResourceProfile, SiteKey, Technology, WeightedHour};
use h2chain_core::well_to_border::SiteCosts;
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_site(rng: &mut StdRng, i: usize, hours: usize) -> (ResourceProfile, SiteCosts) {
    let wind = rng.gen_bool(0.5);
    site_with(rng, site_key(i, wind), wind, hours)
}

pub fn site_with(rng: &mut StdRng, key: SiteKey, wind: bool, hours: usize) -> (ResourceProfile, SiteCosts) {
    let w = 8760.0 / hours as f64;
    let hours = (0..hours)
        .map(|h| {
            let cf = if wind {
                rng.gen_range(0.0..1.0)
            } else {
                let x = (h % 24) as f64;
                if (6.0..18.0).contains(&x) {
                    (std::f64::consts::PI * (x - 6.0) / 12.0).sin() * rng.gen_range(0.5..1.0)
                } else {
                    0.0
                }
            };
            WeightedHour {
                capacity_factor: cf,
                weight: w,
            }
        })
        .collect();
    let profile = ResourceProfile {
        site: key,
        potential_mw: rng.gen_range(10.0..1000.0),
        hours,
    };
    let costs = SiteCosts {
        res_annual: rng.gen_range(30_000.0..120_000.0),
        battery_annual: rng.gen_range(20_000.0..80_000.0),
        electrolyzer_annual: rng.gen_range(60_000.0..120_000.0),
        conversion_annual: rng.gen_range(50_000.0..150_000.0),
        eta_el: 0.67,
        eta_conv: 0.85,
        q_conv: 0.29,
        eta_batt: 0.98,
        e2p_hours: 6.0,
        battery_allowed: true,
        desalination: 1.0,
        inland_transport: rng.gen_range(0.0..5.0),
        international_transport: rng.gen_range(2.0..10.0),
        storage_tank: 1.7,
        electrolyzer_bound_uses_conversion_eff: false,
    };
    (profile, costs)
}

/// Site `i` of a 2 countries x 2 technologies x 2 classes grid.
pub fn grid_site(rng: &mut StdRng, i: usize, hours: usize) -> (ResourceProfile, SiteCosts) {
    let wind = i / 2 % 2 == 1;
    let key = SiteKey {
        country: format!("C{}", i % 2),
        technology: if wind { Technology::WindOnshore } else { Technology::Pv },
        resource_class: (i / 4 % 2) as u8 + 1,
        shore_band: 0,
    };
    site_with(rng, key, wind, hours)
}

fn site_key(i: usize, wind: bool) -> SiteKey {
    SiteKey {
        country: format!("C{}", i % 2),
        technology: if wind { Technology::WindOnshore } else { Technology::Pv },
        resource_class: (i % 5) as u8 + 1,
        shore_band: i as u32,
    }
}

/// Random distribution options and a demand. One reference option sees a
/// demand of 0.5 to 50 times its per-unit delivery; the others are sized so
/// the brute-force space stays below one million vectors.
pub fn random_instance(
    rng: &mut StdRng,
    n: usize,
) -> (Vec<h2chain_core::consumer::DistributionOption>, f64) {
    use h2chain_core::consumer::{DistributionOption, OPTION_ORDER};
    let mut picks: Vec<usize> = (0..6).collect();
    while picks.len() > n {
        let k = rng.gen_range(0..picks.len());
        picks.remove(k);
    }
    let reference = rng.gen_range(0..n);
    let ref_cap: f64 = rng.gen_range(10.0..1000.0);
    let ref_eff: f64 = rng.gen_range(0.5..1.0);
    let demand = ref_cap * ref_eff * rng.gen_range(0.5..50.0);
    let ref_bound = (demand / (ref_cap * ref_eff)).ceil() + 1.0;
    let rest = (1e6 / ref_bound).powf(1.0 / (n.max(2) - 1) as f64).floor() - 1.0;
    let options = picks
        .iter()
        .enumerate()
        .map(|(k, &o)| {
            let (imported, mode) = OPTION_ORDER[o];
            let eff = if k == reference { ref_eff } else { rng.gen_range(0.5..1.0) };
            let cap = if k == reference {
                ref_cap
            } else {
                // at most `rest` units needed to cover the demand alone
                demand / (eff * rest.max(1.0)) * rng.gen_range(1.0..4.0)
            };
            DistributionOption {
                imported,
                mode,
                consumer: String::from("site"),
                distance_km: 100.0,
                unit_cost_per_year: cap * rng.gen_range(1.0..40.0),
                effective_capacity: cap,
                procurement_price: rng.gen_range(40.0..200.0),
                storage_cost_per_mwh: rng.gen_range(0.0..5.0),
                conversion_cost_per_mwh: rng.gen_range(0.0..30.0),
                variable_cost_per_mwh: 0.0,
                chain_eff: eff,
            }
        })
        .collect();
    (options, demand)
}
