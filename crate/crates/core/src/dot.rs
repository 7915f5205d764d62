//! Graphviz rendering of a decomposition. Blocks from HL3 upward become
//! nested clusters; HL2 and HL1 blocks become record nodes inside them.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::block::{Child, Decomposition};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

struct Emitter<'a> {
    dec: &'a Decomposition,
    placed: BTreeSet<usize>,
    out: String,
}

impl Emitter<'_> {
    fn node(&mut self, idx: usize, indent: usize) {
        let b = self.dec.block(idx);
        let devices = self.dec.device_names(&b.devices).join(" ");
        let _ = writeln!(
            self.out,
            "{:indent$}{} [shape=record, label={}];",
            "",
            quote(&b.id),
            quote(&format!("{{{} | {}}}", b.id, devices)),
            indent = indent
        );
        self.placed.insert(idx);
    }

    fn block(&mut self, idx: usize, indent: usize) {
        if self.placed.contains(&idx) {
            return;
        }
        let b = self.dec.block(idx);
        if b.level() <= 2 {
            self.node(idx, indent);
            return;
        }
        self.placed.insert(idx);
        let pad = " ".repeat(indent);
        let label = match b.variant {
            Some(v) => format!("{} ({}, {})", b.id, b.btype, v),
            None => format!("{} ({})", b.id, b.btype),
        };
        let _ = writeln!(self.out, "{pad}subgraph {} {{", quote(&format!("cluster_{}", b.id)));
        let _ = writeln!(self.out, "{pad}  label={};", quote(&label));
        let children = b.children.clone();
        for c in children {
            match c {
                Child::Block(i) => self.block(i, indent + 2),
                Child::Device(d) => {
                    let name = &self.dec.netlist().device(d).name;
                    let _ = writeln!(self.out, "{pad}  {};", quote(name));
                }
            }
        }
        let _ = writeln!(self.out, "{pad}}}");
    }
}

/// Renders the HL4 structure as DOT. Output is deterministic.
pub fn to_dot(dec: &Decomposition) -> String {
    let mut e = Emitter {
        dec,
        placed: BTreeSet::new(),
        out: String::from("graph decomposition {\n  compound=true;\n  node [fontsize=10];\n"),
    };
    // The HL5 opamp would just wrap everything, so drawing starts at HL4.
    for i in (0..dec.blocks().len()).filter(|&i| dec.block(i).level() == 4) {
        e.block(i, 2);
    }
    // HL2 blocks outside every stage, e.g. on an unrecognized circuit.
    for i in 0..dec.blocks().len() {
        if dec.block(i).level() == 2 && !e.placed.contains(&i) && !dec.block(i).btype.is_auxiliary() {
            e.node(i, 2);
        }
    }
    // Stage-to-stage signal flow.
    let n = dec.netlist();
    for st in &dec.stages {
        for other in &dec.stages {
            let src = dec.block(st.block);
            let dst = dec.block(other.block);
            if st.block == other.block {
                continue;
            }
            let input = ["in_1", "in_2"].iter().filter_map(|k| dst.pins.get(*k)).copied().collect::<Vec<_>>();
            for net in &st.outputs {
                if input.contains(net) {
                    let _ = writeln!(
                        e.out,
                        "  {} -- {} [label={}, ltail={}, lhead={}];",
                        quote(&src.id),
                        quote(&dst.id),
                        quote(n.net_name(*net)),
                        quote(&format!("cluster_{}", src.id)),
                        quote(&format!("cluster_{}", dst.id)),
                    );
                }
            }
        }
    }
    e.out.push_str("}\n");
    e.out
}
