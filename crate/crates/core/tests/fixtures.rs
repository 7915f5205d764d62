use std::collections::BTreeSet;

use fbdecomp::{decompose, fixtures, parse_netlist, BlockType, Child, Decomposition, NetId, NetlistConfig};

fn dec(text: &str) -> Decomposition {
    decompose(&parse_netlist(text, &NetlistConfig::default()).unwrap())
}

fn nets_of(d: &Decomposition, block: usize) -> BTreeSet<NetId> {
    let n = d.netlist();
    d.child_tree_devices(block)
        .into_iter()
        .flat_map(|t| {
            let dev = n.device(t);
            dev.pin_names().iter().filter_map(|&p| dev.pin(p)).collect::<Vec<_>>()
        })
        .collect()
}

#[test]
fn fixtures_have_no_diagnostics() {
    for (name, text) in fixtures::ALL {
        let d = dec(text);
        assert!(d.diagnostics.is_empty(), "{name}: {:?}", d.diagnostics);
        assert_eq!(d.of_type(BlockType::Opamp).count(), 1, "{name}");
    }
}

#[test]
fn non_inverting_stages_recheck() {
    for (name, text) in fixtures::ALL {
        let d = dec(text);
        let n = d.netlist();
        for st in d.stages.iter().filter(|s| !matches!(s.stype, BlockType::AInvC | BlockType::AInvV)) {
            let tc = d.block(st.tc);
            let load = st.load.expect("non-inverting stage has a load");
            let load_nets = nets_of(&d, load);
            // every pair drain feeds the load
            for (role, net) in &tc.pins {
                if role.starts_with("out_") {
                    assert!(load_nets.contains(net), "{name}: {role} of {} misses the load", tc.id);
                }
            }
            // the stage bias drives a tail of the transconductance
            let tails: BTreeSet<NetId> = tc.pins.iter().filter(|(r, _)| r.starts_with("s_")).map(|(_, v)| *v).collect();
            let bias = d.block(st.bias);
            for c in &bias.children {
                let Child::Block(b) = c else { panic!("bias child is a block") };
                let s = d.block(*b).stack.as_ref().expect("bias stack");
                assert!(tails.contains(&s.drain(n)), "{name}: {} not on a tail", d.block(*b).id);
            }
            assert_eq!(bias.doping, tc.doping, "{name}: bias and tc doping");
            let tc_devs: BTreeSet<usize> = tc.devices.iter().copied().collect();
            assert!(d.block(load).devices.iter().all(|t| !tc_devs.contains(t)), "{name}");
        }
    }
}

#[test]
fn inverting_stages_follow_their_predecessor() {
    for (name, text) in fixtures::ALL {
        let d = dec(text);
        for st in &d.stages {
            let Some(k) = st.ordinal else { continue };
            if k == 1 {
                assert!(matches!(st.stype, BlockType::AS | BlockType::AC), "{name}");
                continue;
            }
            let gate = d.block(st.block).pins["in_1"];
            let fed = d.stages.iter().any(|p| p.ordinal == Some(k - 1) && p.outputs.contains(&gate));
            assert!(fed, "{name}: stage {} input is not an output of stage {}", d.block(st.block).id, k - 1);
        }
    }
}

#[test]
fn symmetrical_n5_keeps_its_relevant_assignments() {
    let d = dec(fixtures::SYMMETRICAL);
    let m = d.membership_types("N5").unwrap();
    assert_eq!(m[&2], BTreeSet::from([BlockType::Cb, BlockType::Cm, BlockType::Inv]));
}

#[test]
fn folded_cascode_gcc_memberships() {
    let d = dec(fixtures::FOLDED_CASCODE_CMFB);
    for dev in ["P3", "P4"] {
        let m = d.membership_types(dev).unwrap();
        assert!(m[&2].contains(&BlockType::Fcdp), "{dev}: {m:?}");
    }
    let gcc = d.of_type(BlockType::Gcc).count();
    assert_eq!(gcc, 1);
}

#[test]
fn stage_ids_follow_ordinals() {
    let d = dec(fixtures::SYMMETRICAL);
    let ids: Vec<&str> = d.stages.iter().map(|s| d.block(s.block).id.as_str()).collect();
    assert_eq!(ids, ["a_1", "a_2_1", "a_2_2", "a_3"]);
    let d = dec(fixtures::FOLDED_CASCODE_CMFB);
    assert!(d.block_by_id("a_CMFB").is_some());
}

#[test]
fn verbose_json_exposes_auxiliaries_only_when_asked() {
    let d = dec(fixtures::FOLDED_CASCODE_CMFB);
    let quiet = d.to_json(false);
    let loud = d.to_json(true);
    let ids = |text: &str| -> Vec<String> {
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        v["levels"]["2"]["blocks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|b| b["id"].as_str().unwrap().to_string())
            .collect()
    };
    assert!(!ids(&quiet).iter().any(|i| i.starts_with("ts_")));
    assert!(ids(&loud).iter().any(|i| i == "ts_1"));
    assert!(loud.contains("\"notes\"") && !quiet.contains("\"notes\""));
}
