//! Consumer plans on the bundled scenario with its own 2030 border prices.

mod common;

use std::fs;
use std::sync::OnceLock;

use common::{cli, desk_copy};
use h2chain::core::consumer::{build_options, single_mode_plan};
use h2chain::core::model::{Commodity, Mode, Product};
use h2chain::dataset::load_scenario;
use h2chain::report::PricesFile;
use h2chain::run::generic_consumer;

struct Run {
    _dir: tempfile::TempDir,
    costs: Vec<csv::StringRecord>,
    header: csv::StringRecord,
    prices: PricesFile,
}

/// `btc --inline-wtb` for 2030 with BASF's demand set to zero.
fn run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| {
        let t = desk_copy();
        let consumers = t.path().join("consumers.csv");
        let text = fs::read_to_string(&consumers).unwrap().replacen("BASF,ammonia,3844,", "BASF,ammonia,0,", 1);
        fs::write(&consumers, text).unwrap();
        let out = t.path().join("out");
        let o = cli(&["btc", t.path().to_str().unwrap(), "--year", "2030", "--inline-wtb", "--out", out.to_str().unwrap()]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let text = fs::read_to_string(out.join("consumer_costs.csv")).unwrap();
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = r.headers().unwrap().clone();
        let costs = r.records().map(Result::unwrap).collect();
        let prices = PricesFile::parse(&fs::read_to_string(out.join("prices.json")).unwrap()).unwrap();
        Run {
            _dir: t,
            costs,
            header,
            prices,
        }
    })
}

fn field<'a>(r: &'a Run, row: &'a csv::StringRecord, name: &str) -> &'a str {
    let i = r.header.iter().position(|h| h == name).unwrap();
    &row[i]
}

fn num(r: &Run, row: &csv::StringRecord, name: &str) -> f64 {
    field(r, row, name).parse().unwrap()
}

fn row<'a>(r: &'a Run, site: &str) -> &'a csv::StringRecord {
    r.costs.iter().find(|x| field(r, x, "site") == site).unwrap()
}

#[test]
fn every_site_gets_a_row_whose_parts_add_up() {
    let r = run();
    assert_eq!(r.costs.len(), 14);
    for x in &r.costs {
        let parts: f64 = ["procurement", "transport", "storage", "conversion"]
            .iter()
            .map(|p| num(r, x, &format!("{p}_eur_per_mwh")))
            .sum();
        let total = num(r, x, "total_eur_per_mwh");
        assert!((parts - total).abs() <= 1e-9 * (1.0 + total), "{x:?}");
    }
}

#[test]
fn zero_demand_site_costs_nothing() {
    let r = run();
    let x = row(r, "BASF");
    assert_eq!(num(r, x, "total_cost_eur"), 0.0);
    assert_eq!(field(r, x, "plan"), "none");
    assert_eq!(field(r, x, "units"), "");
}

#[test]
fn fueling_stations_are_served_by_truck() {
    let r = run();
    for site in ["Fueling Station Berlin", "Fueling Station Muenchen"] {
        let plan = field(r, row(r, site), "plan");
        assert!(plan.split(" + ").all(|p| p.ends_with(" truck")), "{site}: {plan}");
    }
}

#[test]
fn ammonia_rail_beats_liquid_hydrogen_for_a_large_ammonia_site() {
    let r = run();
    let s = load_scenario(&common::desk_dir()).unwrap();
    let prices = r.prices.border_prices().unwrap();
    let c = generic_consumer(Product::Ammonia, 2030, 1000.0, 400.0);
    let options = build_options(&c, 2030, &prices, &s).unwrap();
    let demand = c.demand(2030);
    let cost = |imported, mode| {
        let i = options.iter().position(|o| o.imported == imported && o.mode == mode).unwrap();
        single_mode_plan(&options, i, demand).unwrap().total_cost
    };
    let rail = cost(Commodity::Ammonia, Mode::Rail);
    for mode in [Mode::Truck, Mode::Rail] {
        assert!(rail < cost(Commodity::LiquidHydrogen, mode), "NH3 rail {rail} vs LH2 {mode}");
    }
}
