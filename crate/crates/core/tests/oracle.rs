//! Recognizer output against the brute-force oracle in `common`.

mod common;

use common::{compare, Names, Oracle};
use fbdecomp::gen::{random_netlist, GenConfig};
use fbdecomp::{fixtures, parse_netlist, BlockType, NetlistConfig};
use std::collections::BTreeSet;

fn check(label: &str, text: &str) {
    let (want, have) = compare(text);
    assert_eq!(have, want, "{label}\n{text}");
}

#[test]
fn fixtures_match_oracle() {
    for (name, text) in fixtures::ALL {
        check(name, text);
    }
}

#[test]
fn random_netlists_match_oracle() {
    let mut nonempty = 0;
    for seed in 0..300u64 {
        let cfg = GenConfig {
            devices: 6 + (seed % 9) as usize,
            nets: 4 + (seed % 5) as usize,
            ..GenConfig::default()
        };
        let text = random_netlist(seed, &cfg);
        let n = parse_netlist(&text, &NetlistConfig::default()).unwrap();
        if !Oracle::new(&n).run().is_empty() {
            nonempty += 1;
        }
        check(&format!("seed {seed}"), &text);
    }
    // the corpus must actually exercise the recognizers
    assert!(nonempty > 100, "{nonempty}");
}

#[test]
fn oracle_sees_the_telescopic_mirror() {
    let n = parse_netlist(fixtures::TELESCOPIC, &NetlistConfig::default()).unwrap();
    let got = Oracle::new(&n).run();
    let nmirror: Names = ["MN1", "MN2", "MN3", "MN4"].iter().map(|s| s.to_string()).collect();
    assert!(got[&BlockType::Cm].contains(&nmirror));
    let cdp: Names = ["MP1", "MP2", "MP3", "MP4"].iter().map(|s| s.to_string()).collect();
    assert_eq!(got[&BlockType::Cdp], BTreeSet::from([cdp]));
}
