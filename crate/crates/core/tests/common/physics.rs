use h2chain_core::well_to_border::{PlantDesign, SiteCosts};

/// Everything a sized plant's dispatch does against its physics, recomputed
/// from the site costs.
pub fn physical_violations(d: &PlantDesign, c: &SiteCosts) -> Vec<String> {
    let mut out = Vec::new();
    // oracle for the conversion efficiency under auxiliary power demand
    let eta_new = c.eta_conv / (1.0 + c.q_conv * c.eta_conv * c.eta_el);
    let k = c.eta_el * eta_new;
    let first = &d.dispatch[0];
    if first.soc != 0.0 || first.charge != 0.0 || first.discharge != 0.0 {
        out.push(format!("first hour battery not idle: {first:?}"));
    }
    for (h, x) in d.dispatch.iter().enumerate() {
        let cap = d.capacities.battery_mw;
        if x.soc > c.e2p_hours * cap * (1.0 + 1e-9) + 1e-9 {
            out.push(format!("hour {h}: soc {} above {}", x.soc, c.e2p_hours * cap));
        }
        let residual = x.output - k * (x.res - x.charge + x.discharge);
        if residual.abs() > 1e-6 {
            out.push(format!("hour {h}: balance residual {residual}"));
        }
        if x.charge.min(x.discharge) > 1e-9 {
            out.push(format!("hour {h}: charges {} and discharges {}", x.charge, x.discharge));
        }
        if h > 0 {
            let prev = d.dispatch[h - 1].soc;
            let soc = prev + c.eta_batt * x.charge - x.discharge / c.eta_batt;
            if (soc - x.soc).abs() > 1e-6 {
                out.push(format!("hour {h}: soc {} vs recursion {soc}", x.soc));
            }
        }
    }
    out
}
