//! Seeded random netlists and parameter sets for property tests, oracles and
//! benchmarks. The generator leans toward structures the recognizers care
//! about: rail-sourced devices, diodes, and pairs sharing a source.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netlist::Netlist;
use crate::perf::{PerfParams, SmallSignal};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub devices: usize,
    /// Internal nets to draw from, besides the rails.
    pub nets: usize,
    pub diode_prob: f64,
    pub rail_source_prob: f64,
    pub pair_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            devices: 10,
            nets: 8,
            diode_prob: 0.3,
            rail_source_prob: 0.5,
            pair_prob: 0.2,
        }
    }
}

/// SPICE text for a random transistor netlist. Both rails are always used,
/// and the output is a pure function of `seed` and `cfg`.
pub fn random_netlist(seed: u64, cfg: &GenConfig) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nets: Vec<String> = (1..=cfg.nets.max(2)).map(|i| format!("N{i}")).collect();
    let mut out = String::new();
    let mut k = 0;
    let mut emit = |out: &mut String, nmos: bool, d: &str, g: &str, s: &str| {
        k += 1;
        let (bulk, model) = if nmos { ("GND", "nmos") } else { ("VDD", "pmos") };
        out.push_str(&format!("M{k} {d} {g} {s} {bulk} {model}\n"));
    };
    let pick = |rng: &mut ChaCha8Rng, not: &[&str]| -> String {
        loop {
            let n = nets.choose(rng).expect("nets").clone();
            if !not.contains(&n.as_str()) {
                return n;
            }
        }
    };

    let mut placed = 0;
    while placed < cfg.devices.max(2) {
        let nmos = match placed {
            0 => true,
            1 => false,
            _ => rng.gen_bool(0.5),
        };
        let rail = if nmos { "GND" } else { "VDD" };
        if placed >= 2 && placed + 1 < cfg.devices && rng.gen_bool(cfg.pair_prob) {
            let s = pick(&mut rng, &[]);
            let (g1, g2) = (pick(&mut rng, &[&s]), pick(&mut rng, &[&s]));
            let (d1, d2) = (pick(&mut rng, &[&s]), pick(&mut rng, &[&s]));
            emit(&mut out, nmos, &d1, &g1, &s);
            emit(&mut out, nmos, &d2, &g2, &s);
            placed += 2;
            continue;
        }
        let s = if placed < 2 || rng.gen_bool(cfg.rail_source_prob) {
            rail.to_string()
        } else {
            pick(&mut rng, &[])
        };
        let d = pick(&mut rng, &[&s]);
        let g = if rng.gen_bool(cfg.diode_prob) {
            d.clone()
        } else {
            pick(&mut rng, &[&s])
        };
        emit(&mut out, nmos, &d, &g, &s);
        placed += 1;
    }
    out
}

/// gm in [1e-5, 1e-3] S and gd in [1e-7, 1e-5] S for every transistor.
pub fn random_params(n: &Netlist, seed: u64) -> PerfParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = PerfParams::new();
    for dev in n.devices().iter().filter(|d| d.doping().is_some()) {
        let v = SmallSignal {
            gm: 10f64.powf(rng.gen_range(-5.0..-3.0)),
            gd: 10f64.powf(rng.gen_range(-7.0..-5.0)),
        };
        p.insert(&dev.name, v).expect("positive and finite");
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_netlist, NetlistConfig};

    #[test]
    fn seeded_and_parseable() {
        let cfg = GenConfig::default();
        for seed in 0..50 {
            let a = random_netlist(seed, &cfg);
            assert_eq!(a, random_netlist(seed, &cfg));
            let n = parse_netlist(&a, &NetlistConfig::default()).unwrap();
            assert_eq!(n.transistor_count(), cfg.devices);
            assert_eq!(random_params(&n, seed).len(), cfg.devices);
        }
        assert_ne!(random_netlist(1, &cfg), random_netlist(2, &cfg));
    }
}
