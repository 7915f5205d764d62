//! Functional-block data model shared by all recognizers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::BlockError;
use crate::netlist::{Doping, NetId, Netlist};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockType {
    #[serde(rename = "nt")]
    Nt,
    #[serde(rename = "dt")]
    Dt,
    #[serde(rename = "cap")]
    Cap,
    #[serde(rename = "ts")]
    Ts,
    #[serde(rename = "gcc")]
    Gcc,
    #[serde(rename = "vb")]
    Vb,
    #[serde(rename = "cb")]
    Cb,
    #[serde(rename = "cm")]
    Cm,
    #[serde(rename = "dp")]
    Dp,
    #[serde(rename = "cdp")]
    Cdp,
    #[serde(rename = "fcdp")]
    Fcdp,
    #[serde(rename = "inv")]
    Inv,
    #[serde(rename = "tc_s")]
    TcS,
    #[serde(rename = "tc_c")]
    TcC,
    #[serde(rename = "tc_CMFB")]
    TcCmfb,
    #[serde(rename = "tc_inv")]
    TcInv,
    #[serde(rename = "l")]
    Load,
    #[serde(rename = "l_p")]
    LoadPart,
    #[serde(rename = "b_v")]
    BiasV,
    #[serde(rename = "b_c")]
    BiasC,
    #[serde(rename = "b_s")]
    StageBias,
    #[serde(rename = "a_s")]
    AS,
    #[serde(rename = "a_c")]
    AC,
    #[serde(rename = "a_CMFB")]
    ACmfb,
    #[serde(rename = "a_inv_c")]
    AInvC,
    #[serde(rename = "a_inv_v")]
    AInvV,
    #[serde(rename = "b_O")]
    CircuitBias,
    #[serde(rename = "c_C")]
    CompCap,
    #[serde(rename = "c_L")]
    LoadCap,
    #[serde(rename = "opamp")]
    Opamp,
}

impl BlockType {
    pub const ALL: [BlockType; 30] = [
        BlockType::Nt,
        BlockType::Dt,
        BlockType::Cap,
        BlockType::Ts,
        BlockType::Gcc,
        BlockType::Vb,
        BlockType::Cb,
        BlockType::Cm,
        BlockType::Dp,
        BlockType::Cdp,
        BlockType::Fcdp,
        BlockType::Inv,
        BlockType::TcS,
        BlockType::TcC,
        BlockType::TcCmfb,
        BlockType::TcInv,
        BlockType::Load,
        BlockType::LoadPart,
        BlockType::BiasV,
        BlockType::BiasC,
        BlockType::StageBias,
        BlockType::AS,
        BlockType::AC,
        BlockType::ACmfb,
        BlockType::AInvC,
        BlockType::AInvV,
        BlockType::CircuitBias,
        BlockType::CompCap,
        BlockType::LoadCap,
        BlockType::Opamp,
    ];

    pub fn level(self) -> u8 {
        use BlockType::*;
        match self {
            Nt | Dt | Cap => 1,
            Ts | Gcc | Vb | Cb | Cm | Dp | Cdp | Fcdp | Inv => 2,
            TcS | TcC | TcCmfb | TcInv | Load | LoadPart | BiasV | BiasC | StageBias => 3,
            AS | AC | ACmfb | AInvC | AInvV | CircuitBias | CompCap | LoadCap => 4,
            Opamp => 5,
        }
    }

    /// Auxiliary HL2 blocks only shown as constituents.
    pub fn is_auxiliary(self) -> bool {
        matches!(self, BlockType::Ts | BlockType::Gcc)
    }

    pub fn is_stage(self) -> bool {
        use BlockType::*;
        matches!(self, AS | AC | ACmfb | AInvC | AInvV)
    }

    pub fn name(self) -> &'static str {
        use BlockType::*;
        match self {
            Nt => "nt",
            Dt => "dt",
            Cap => "cap",
            Ts => "ts",
            Gcc => "gcc",
            Vb => "vb",
            Cb => "cb",
            Cm => "cm",
            Dp => "dp",
            Cdp => "cdp",
            Fcdp => "fcdp",
            Inv => "inv",
            TcS => "tc_s",
            TcC => "tc_c",
            TcCmfb => "tc_CMFB",
            TcInv => "tc_inv",
            Load => "l",
            LoadPart => "l_p",
            BiasV => "b_v",
            BiasC => "b_c",
            StageBias => "b_s",
            AS => "a_s",
            AC => "a_c",
            ACmfb => "a_CMFB",
            AInvC => "a_inv_c",
            AInvV => "a_inv_v",
            CircuitBias => "b_O",
            CompCap => "c_C",
            LoadCap => "c_L",
            Opamp => "opamp",
        }
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Substrate type of a block: n, p or mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockDoping {
    #[serde(rename = "n")]
    N,
    #[serde(rename = "p")]
    P,
    #[serde(rename = "u")]
    Mixed,
}

impl From<Doping> for BlockDoping {
    fn from(d: Doping) -> Self {
        match d {
            Doping::N => BlockDoping::N,
            Doping::P => BlockDoping::P,
        }
    }
}

impl fmt::Display for BlockDoping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockDoping::N => "n",
            BlockDoping::P => "p",
            BlockDoping::Mixed => "u",
        })
    }
}

/// Doping of a set of devices; capacitors are ignored.
pub fn doping_of(netlist: &Netlist, devices: &[usize]) -> Option<BlockDoping> {
    let mut found: Option<Doping> = None;
    for &d in devices {
        if let Some(dop) = netlist.device(d).doping() {
            match found {
                None => found = Some(dop),
                Some(prev) if prev != dop => return Some(BlockDoping::Mixed),
                _ => {}
            }
        }
    }
    found.map(BlockDoping::from)
}

/// Ordered transistor stack, bottom (source side) first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stack(pub Vec<usize>);

impl Stack {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn devices(&self) -> &[usize] {
        &self.0
    }

    pub fn bottom(&self) -> usize {
        self.0[0]
    }

    pub fn top(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn source(&self, n: &Netlist) -> NetId {
        n.device(self.bottom()).s()
    }

    pub fn drain(&self, n: &Netlist) -> NetId {
        n.device(self.top()).d()
    }

    /// Gate nets bottom to top.
    pub fn gates<'a>(&'a self, n: &'a Netlist) -> impl Iterator<Item = NetId> + 'a {
        self.0.iter().map(move |&t| n.device(t).g())
    }

    pub fn gate(&self, n: &Netlist, l: usize) -> NetId {
        n.device(self.0[l]).g()
    }

    pub fn doping(&self, n: &Netlist) -> Option<Doping> {
        n.device(self.bottom()).doping()
    }

    pub fn contains(&self, dev: usize) -> bool {
        self.0.contains(&dev)
    }

    pub fn device_set(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    pub fn names(&self, n: &Netlist) -> Vec<String> {
        self.0.iter().map(|&d| n.device(d).name.clone()).collect()
    }
}

/// Pin map of a transistor stack: `s`, `d`, and indexed `g_l`, `d_l`, `s_l`
/// bottom to top.
pub fn stack_pins(n: &Netlist, stack: &Stack) -> Result<BTreeMap<String, NetId>, BlockError> {
    if stack.is_empty() {
        return Err(BlockError::MalformedStack("empty stack".into()));
    }
    let mut doping = None;
    for (i, &t) in stack.0.iter().enumerate() {
        let dev = n.device(t);
        let dop = dev
            .doping()
            .ok_or_else(|| BlockError::MalformedStack(format!("{} is not a transistor", dev.name)))?;
        if *doping.get_or_insert(dop) != dop {
            return Err(BlockError::MalformedStack(format!("{} has different doping", dev.name)));
        }
        if i > 0 && n.device(stack.0[i - 1]).d() != dev.s() {
            return Err(BlockError::MalformedStack(format!(
                "source of {} is not on the drain of {}",
                dev.name,
                n.device(stack.0[i - 1]).name
            )));
        }
    }
    let mut pins = BTreeMap::new();
    pins.insert("s".to_string(), stack.source(n));
    pins.insert("d".to_string(), stack.drain(n));
    for (i, &t) in stack.0.iter().enumerate() {
        let dev = n.device(t);
        pins.insert(format!("g_{}", i + 1), dev.g());
        pins.insert(format!("d_{}", i + 1), dev.d());
        pins.insert(format!("s_{}", i + 1), dev.s());
    }
    Ok(pins)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Child {
    Block(usize),
    Device(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalBlock {
    pub id: String,
    pub btype: BlockType,
    /// Structural form of a stage bias (`b_c`/`b_v`) or circuit bias (`b_v`).
    pub variant: Option<BlockType>,
    /// `None` only for capacitor blocks.
    pub doping: Option<BlockDoping>,
    pub children: Vec<Child>,
    pub pins: BTreeMap<String, NetId>,
    /// All descendant devices, sorted.
    pub devices: Vec<usize>,
    /// Ordered stack for stack-shaped blocks (ts, vb, cb, tc_inv).
    pub stack: Option<Stack>,
}

impl FunctionalBlock {
    pub fn level(&self) -> u8 {
        self.btype.level()
    }

    pub fn has_device(&self, dev: usize) -> bool {
        self.devices.binary_search(&dev).is_ok()
    }
}

/// Doping of a block; capacitor blocks have none.
pub fn block_doping(n: &Netlist, block: &FunctionalBlock) -> Result<BlockDoping, BlockError> {
    doping_of(n, &block.devices).ok_or_else(|| BlockError::NoTransistors(block.id.clone()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subjects: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Note {
    pub rule: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub block: usize,
    pub stype: BlockType,
    pub tc: usize,
    pub load: Option<usize>,
    pub bias: usize,
    /// 1 for the first stage, n+1 for a stage fed by stage n; `None` for CMFB.
    pub ordinal: Option<u32>,
    pub outputs: Vec<NetId>,
    /// Maximal transistor stacks harvested as load (non-inverting stages).
    pub load_stacks: Vec<Stack>,
}

/// Result of the recognition pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    netlist: Netlist,
    blocks: Vec<FunctionalBlock>,
    pub stages: Vec<StageRecord>,
    pub diagnostics: Vec<Diagnostic>,
    pub notes: Vec<Note>,
    /// Passes made by the bias fixed-point loop.
    pub bias_passes: usize,
    counters: BTreeMap<BlockType, usize>,
}

impl Decomposition {
    pub fn new(netlist: Netlist) -> Self {
        Decomposition {
            netlist,
            blocks: Vec::new(),
            stages: Vec::new(),
            diagnostics: Vec::new(),
            notes: Vec::new(),
            bias_passes: 0,
            counters: BTreeMap::new(),
        }
    }

    pub fn netlist(&self) -> &Netlist {
        &self.netlist
    }

    pub fn blocks(&self) -> &[FunctionalBlock] {
        &self.blocks
    }

    pub fn block(&self, idx: usize) -> &FunctionalBlock {
        &self.blocks[idx]
    }

    pub fn block_by_id(&self, id: &str) -> Option<&FunctionalBlock> {
        self.blocks.iter().find(|b| b.id == id)
    }

    pub fn of_type(&self, t: BlockType) -> impl Iterator<Item = &FunctionalBlock> + '_ {
        self.blocks.iter().filter(move |b| b.btype == t)
    }

    pub fn at_level(&self, level: u8) -> impl Iterator<Item = &FunctionalBlock> + '_ {
        self.blocks.iter().filter(move |b| b.level() == level)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub(crate) fn next_id(&mut self, t: BlockType) -> String {
        let k = self.counters.entry(t).or_insert(0);
        *k += 1;
        format!("{}_{}", t.name(), k)
    }

    /// Adds a block, deriving its device set and doping from the children.
    pub(crate) fn add(
        &mut self,
        btype: BlockType,
        children: Vec<Child>,
        pins: BTreeMap<String, NetId>,
        stack: Option<Stack>,
    ) -> usize {
        let id = self.next_id(btype);
        self.add_with_id(id, btype, children, pins, stack)
    }

    pub(crate) fn add_with_id(
        &mut self,
        id: String,
        btype: BlockType,
        children: Vec<Child>,
        pins: BTreeMap<String, NetId>,
        stack: Option<Stack>,
    ) -> usize {
        let mut devices = BTreeSet::new();
        for c in &children {
            match *c {
                Child::Device(d) => {
                    devices.insert(d);
                }
                Child::Block(b) => devices.extend(self.blocks[b].devices.iter().copied()),
            }
        }
        let devices: Vec<usize> = devices.into_iter().collect();
        let doping = doping_of(&self.netlist, &devices);
        self.blocks.push(FunctionalBlock {
            id,
            btype,
            variant: None,
            doping,
            children,
            pins,
            devices,
            stack,
        });
        self.blocks.len() - 1
    }

    pub(crate) fn set_id(&mut self, idx: usize, id: String) {
        self.blocks[idx].id = id;
    }

    pub(crate) fn set_variant(&mut self, idx: usize, variant: BlockType) {
        self.blocks[idx].variant = Some(variant);
    }

    pub(crate) fn diagnose(&mut self, code: &str, message: String, subjects: Vec<String>) {
        self.diagnostics.push(Diagnostic {
            code: code.to_string(),
            message,
            subjects,
        });
    }

    pub(crate) fn note(&mut self, rule: &str, message: String) {
        self.notes.push(Note {
            rule: rule.to_string(),
            message,
        });
    }

    /// Block ids containing `device`, grouped by hierarchy level. Auxiliary
    /// blocks are only listed when `verbose` is set.
    pub fn memberships(
        &self,
        device: &str,
        verbose: bool,
    ) -> Result<BTreeMap<u8, Vec<String>>, BlockError> {
        let dev = self
            .netlist
            .device_index(device)
            .ok_or_else(|| BlockError::UnknownDevice(device.to_string()))?;
        Ok(self.memberships_of(dev, verbose))
    }

    pub fn memberships_of(&self, dev: usize, verbose: bool) -> BTreeMap<u8, Vec<String>> {
        let mut out: BTreeMap<u8, Vec<String>> = BTreeMap::new();
        for b in &self.blocks {
            if (!verbose && b.btype.is_auxiliary()) || !b.has_device(dev) {
                continue;
            }
            out.entry(b.level()).or_default().push(b.id.clone());
        }
        out
    }

    /// Membership by block type rather than id.
    pub fn membership_types(&self, device: &str) -> Result<BTreeMap<u8, BTreeSet<BlockType>>, BlockError> {
        let dev = self
            .netlist
            .device_index(device)
            .ok_or_else(|| BlockError::UnknownDevice(device.to_string()))?;
        let mut out: BTreeMap<u8, BTreeSet<BlockType>> = BTreeMap::new();
        for b in &self.blocks {
            if !b.btype.is_auxiliary() && b.has_device(dev) {
                out.entry(b.level()).or_default().insert(b.btype);
            }
        }
        Ok(out)
    }

    /// Blocks of a level that are not nested inside another block of the
    /// same level (load parts sit inside their load).
    pub fn outermost_at_level(&self, level: u8) -> Vec<usize> {
        let nested: BTreeSet<usize> = self
            .blocks
            .iter()
            .filter(|b| b.level() == level)
            .flat_map(|b| b.children.iter())
            .filter_map(|c| match *c {
                Child::Block(i) if self.blocks[i].level() == level => Some(i),
                _ => None,
            })
            .collect();
        (0..self.blocks.len())
            .filter(|i| self.blocks[*i].level() == level && !nested.contains(i))
            .collect()
    }

    /// Devices that appear in more than one outermost block on a level.
    pub fn partition_violations(&self, level: u8) -> Vec<String> {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for i in self.outermost_at_level(level) {
            for &d in &self.blocks[i].devices {
                *count.entry(d).or_default() += 1;
            }
        }
        count
            .into_iter()
            .filter(|(d, c)| *c > 1 && self.netlist.device(*d).is_mosfet())
            .map(|(d, _)| self.netlist.device(d).name.clone())
            .collect()
    }

    /// Flattened device occurrences below `idx`; each device should occur once.
    pub fn child_tree_devices(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut todo = vec![idx];
        while let Some(b) = todo.pop() {
            for c in &self.blocks[b].children {
                match *c {
                    Child::Device(d) => out.push(d),
                    Child::Block(i) => todo.push(i),
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn stage_by_id(&self, id: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| self.blocks[s.block].id == id)
    }

    pub fn device_names(&self, devices: &[usize]) -> Vec<String> {
        devices.iter().map(|&d| self.netlist.device(d).name.clone()).collect()
    }

    pub fn child_ids(&self, idx: usize) -> Vec<String> {
        self.blocks[idx]
            .children
            .iter()
            .map(|c| match *c {
                Child::Device(d) => self.netlist.device(d).name.clone(),
                Child::Block(b) => self.blocks[b].id.clone(),
            })
            .collect()
    }

    /// Human-readable listing, one block per line, grouped by level.
    pub fn to_text(&self, verbose: bool) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for level in 1..=5u8 {
            let blocks: Vec<usize> = (0..self.blocks.len())
                .filter(|&i| self.blocks[i].level() == level && (verbose || !self.blocks[i].btype.is_auxiliary()))
                .collect();
            if blocks.is_empty() {
                continue;
            }
            let _ = writeln!(out, "HL{level}");
            for i in blocks {
                let b = &self.blocks[i];
                let variant = b.variant.map(|v| format!(" ({v})")).unwrap_or_default();
                let doping = b.doping.map(|d| format!(" [{d}]")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "  {:<10} {}{}{}: {} | {}",
                    b.id,
                    b.btype,
                    variant,
                    doping,
                    self.child_ids(i).join(" "),
                    self.device_names(&b.devices).join(" ")
                );
            }
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "diagnostic [{}]: {}", d.code, d.message);
        }
        if verbose {
            for n in &self.notes {
                let _ = writeln!(out, "note [{}]: {}", n.rule, n.message);
            }
        }
        out
    }

    /// Serialized form: `{levels: {1: {blocks: [...]}, ...}, membership: {...}, ...}`.
    pub fn to_json_value(&self, verbose: bool) -> serde_json::Value {
        let n = &self.netlist;
        let mut levels: BTreeMap<String, JsonLevel> = BTreeMap::new();
        for level in 1..=5u8 {
            levels.insert(level.to_string(), JsonLevel { blocks: Vec::new() });
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if !verbose && b.btype.is_auxiliary() {
                continue;
            }
            let entry = levels.get_mut(&b.level().to_string()).expect("level");
            entry.blocks.push(JsonBlock {
                id: b.id.clone(),
                btype: b.btype,
                variant: b.variant,
                doping: b.doping,
                children: self.child_ids(i),
                pins: b
                    .pins
                    .iter()
                    .map(|(k, v)| (k.clone(), n.net_name(*v).to_string()))
                    .collect(),
            });
        }
        let membership = n
            .devices()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let m = self
                    .memberships_of(i, verbose)
                    .into_iter()
                    .map(|(l, ids)| (l.to_string(), ids))
                    .collect();
                (d.name.clone(), m)
            })
            .collect();
        let stages = self
            .stages
            .iter()
            .map(|s| JsonStage {
                id: self.blocks[s.block].id.clone(),
                stype: s.stype,
                ordinal: s.ordinal,
                tc: self.blocks[s.tc].id.clone(),
                load: s.load.map(|l| self.blocks[l].id.clone()),
                bias: self.blocks[s.bias].id.clone(),
                outputs: s.outputs.iter().map(|o| n.net_name(*o).to_string()).collect(),
            })
            .collect();
        let out = JsonDecomposition {
            levels,
            membership,
            stages,
            diagnostics: self.diagnostics.clone(),
            notes: if verbose { Some(self.notes.clone()) } else { None },
        };
        serde_json::to_value(out).expect("serializable")
    }

    pub fn to_json(&self, verbose: bool) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value(verbose)).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
struct JsonLevel {
    blocks: Vec<JsonBlock>,
}

#[derive(Serialize)]
struct JsonBlock {
    id: String,
    #[serde(rename = "type")]
    btype: BlockType,
    #[serde(skip_serializing_if = "Option::is_none")]
    variant: Option<BlockType>,
    doping: Option<BlockDoping>,
    children: Vec<String>,
    pins: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct JsonStage {
    id: String,
    #[serde(rename = "type")]
    stype: BlockType,
    ordinal: Option<u32>,
    tc: String,
    load: Option<String>,
    bias: String,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct JsonDecomposition {
    levels: BTreeMap<String, JsonLevel>,
    membership: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    stages: Vec<JsonStage>,
    diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    notes: Option<Vec<Note>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_netlist, NetlistConfig};

    fn netlist(text: &str) -> Netlist {
        parse_netlist(text, &NetlistConfig::default()).unwrap()
    }

    #[test]
    fn every_type_has_one_level() {
        for t in BlockType::ALL {
            assert!((1..=5).contains(&t.level()), "{t}");
        }
        assert_eq!(BlockType::Ts.level(), 2);
        assert_eq!(BlockType::Gcc.level(), 2);
        assert_eq!(BlockType::CircuitBias.level(), 4);
    }

    #[test]
    fn single_transistor_stack_pins() {
        let n = netlist("MN5 OUT IN GND GND nmos\nMP VDD IN VDD VDD pmos\n");
        let t = n.device_index("N5").unwrap();
        let pins = stack_pins(&n, &Stack(vec![t])).unwrap();
        assert_eq!(n.net_name(pins["s"]), "GND");
        assert_eq!(n.net_name(pins["d"]), "OUT");
        assert_eq!(n.net_name(pins["g_1"]), "IN");
    }

    #[test]
    fn three_transistor_chain_pins() {
        let n = netlist(
            "M1 A G1 GND GND nmos\nM2 B G2 A GND nmos\nM3 C G3 B GND nmos\nMP C C VDD VDD pmos\n",
        );
        let s = Stack(vec![
            n.device_index("M1").unwrap(),
            n.device_index("M2").unwrap(),
            n.device_index("M3").unwrap(),
        ]);
        let pins = stack_pins(&n, &s).unwrap();
        assert_eq!(n.net_name(pins["d"]), "C");
        assert_eq!(n.net_name(pins["s"]), "GND");
        assert_eq!(n.net_name(pins["g_2"]), "G2");
        assert_eq!(n.net_name(pins["s_3"]), "B");
        assert_ne!(pins["s"], pins["d"]);
    }

    #[test]
    fn broken_chain_is_rejected() {
        let n = netlist("M1 A G1 GND GND nmos\nM2 B G2 X GND nmos\nMP VDD A VDD VDD pmos\n");
        let s = Stack(vec![n.device_index("M1").unwrap(), n.device_index("M2").unwrap()]);
        assert!(matches!(stack_pins(&n, &s), Err(BlockError::MalformedStack(_))));
        let mixed = Stack(vec![n.device_index("M1").unwrap(), n.device_index("MP").unwrap()]);
        assert!(stack_pins(&n, &mixed).is_err());
    }

    #[test]
    fn doping_algebra() {
        let n = netlist(
            "MN1 A B GND GND nmos\nMN3 C D A GND nmos\nMP3 E F VDD VDD pmos\nMP4 G F VDD VDD pmos\nC1 A GND 1p\n",
        );
        let idx = |s: &str| n.device_index(s).unwrap();
        let mut d = Decomposition::new(n.clone());
        let nn = d.add(BlockType::Ts, vec![Child::Device(idx("MN1")), Child::Device(idx("MN3"))], BTreeMap::new(), None);
        let pp = d.add(BlockType::Ts, vec![Child::Device(idx("MP3")), Child::Device(idx("MP4"))], BTreeMap::new(), None);
        let mixed = d.add(BlockType::Load, vec![Child::Block(nn), Child::Block(pp)], BTreeMap::new(), None);
        let cap = d.add(BlockType::Cap, vec![Child::Device(idx("C1"))], BTreeMap::new(), None);
        assert_eq!(block_doping(&n, d.block(nn)).unwrap(), BlockDoping::N);
        assert_eq!(block_doping(&n, d.block(pp)).unwrap(), BlockDoping::P);
        assert_eq!(block_doping(&n, d.block(mixed)).unwrap(), BlockDoping::Mixed);
        assert!(matches!(block_doping(&n, d.block(cap)), Err(BlockError::NoTransistors(_))));
        assert_eq!(d.block(mixed).id, "l_1");
    }
}
