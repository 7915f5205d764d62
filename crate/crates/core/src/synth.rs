//! Rule-driven generation of block implementations.
//!
//! A [`CompositionRule`] names a list of slots, each filled from a set of
//! candidate implementations, and wires the chosen implementations together.
//! [`compose`] enumerates the full cross product. The built-in generators
//! cover the small HL2 blocks (biases, mirrors, differential pair, inverter).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::block::{BlockDoping, BlockType};
use crate::error::SynthError;
use crate::netlist::{parse_netlist, Doping, NetlistConfig};

/// One transistor of a generated fragment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FragDevice {
    pub name: String,
    pub doping: Doping,
    pub d: String,
    pub g: String,
    pub s: String,
}

/// A generated structural implementation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub id: String,
    #[serde(rename = "type")]
    pub btype: BlockType,
    pub doping: BlockDoping,
    pub devices: Vec<FragDevice>,
    /// Devices that make up the block itself; anything else is support
    /// circuitry such as a tail source.
    pub core: Vec<String>,
    /// Pin role to net name.
    pub pins: BTreeMap<String, String>,
}

impl Fragment {
    /// Single normal (`Nt`) or diode (`Dt`) transistor with pins `d`, `g`, `s`.
    pub fn primitive(btype: BlockType, doping: Doping) -> Fragment {
        let (d, g) = match btype {
            BlockType::Dt => ("D", "D"),
            _ => ("D", "G"),
        };
        let dev = FragDevice {
            name: "M1".into(),
            doping,
            d: d.into(),
            g: g.into(),
            s: "S".into(),
        };
        let pins = [("d", d), ("g", g), ("s", "S")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Fragment {
            id: format!("{}_{}", btype.name(), doping_tag(doping)),
            btype,
            doping: doping.into(),
            devices: vec![dev],
            core: vec!["M1".into()],
            pins,
        }
    }

    pub fn device_names(&self) -> BTreeSet<String> {
        self.devices.iter().map(|d| d.name.clone()).collect()
    }

    /// SPICE cards for the fragment. Bulks go to the doping's rail.
    pub fn to_spice(&self, cfg: &NetlistConfig) -> String {
        let mut out = format!("* {} ({})\n", self.id, self.btype);
        for d in &self.devices {
            let (bulk, model) = match d.doping {
                Doping::N => (&cfg.gnd, "nmos"),
                Doping::P => (&cfg.vdd, "pmos"),
            };
            out.push_str(&format!("{} {} {} {} {} {}\n", d.name, d.d, d.g, d.s, bulk, model));
        }
        out
    }
}

fn doping_tag(d: Doping) -> &'static str {
    match d {
        Doping::N => "n",
        Doping::P => "p",
    }
}

/// Which doping a slot accepts, relative to the rule's doping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DopingFilter {
    Same,
    Opposite,
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub name: String,
    pub allowed: Vec<BlockType>,
    pub doping: DopingFilter,
    /// Whether the slot's devices belong to the generated block proper.
    pub core: bool,
}

impl Slot {
    pub fn new(name: &str, allowed: &[BlockType]) -> Slot {
        Slot {
            name: name.into(),
            allowed: allowed.to_vec(),
            doping: DopingFilter::Same,
            core: true,
        }
    }

    pub fn opposite(mut self) -> Slot {
        self.doping = DopingFilter::Opposite;
        self
    }

    pub fn support(mut self) -> Slot {
        self.core = false;
        self
    }
}

/// A wire end in a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Endpoint {
    Pin { slot: String, pin: String },
    /// Supply rail of the rule's doping (ground for n, vdd for p).
    Rail,
    /// The other supply rail.
    OppositeRail,
    /// Named external port.
    Port(String),
}

impl Endpoint {
    pub fn pin(slot: &str, pin: &str) -> Endpoint {
        Endpoint::Pin {
            slot: slot.into(),
            pin: pin.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionRule {
    pub name: String,
    pub btype: BlockType,
    pub slots: Vec<Slot>,
    pub connections: Vec<(Endpoint, Endpoint)>,
    /// Pin roles of the result and where they attach.
    pub exports: Vec<(String, Endpoint)>,
}

impl CompositionRule {
    fn invalid(&self, msg: impl Into<String>) -> SynthError {
        SynthError::InvalidRule {
            rule: self.name.clone(),
            msg: msg.into(),
        }
    }

    /// Checks that every endpoint names a declared slot and slot names are unique.
    pub fn validate(&self) -> Result<(), SynthError> {
        let mut names = BTreeSet::new();
        for s in &self.slots {
            if !names.insert(s.name.as_str()) {
                return Err(self.invalid(format!("duplicate slot `{}`", s.name)));
            }
            if s.allowed.is_empty() {
                return Err(self.invalid(format!("slot `{}` allows no block type", s.name)));
            }
        }
        if self.slots.is_empty() {
            return Err(self.invalid("no slots"));
        }
        let ends = self
            .connections
            .iter()
            .flat_map(|(a, b)| [a, b])
            .chain(self.exports.iter().map(|(_, e)| e));
        for e in ends {
            match e {
                Endpoint::Pin { slot, pin } => {
                    if !names.contains(slot.as_str()) {
                        return Err(self.invalid(format!("undeclared slot `{slot}`")));
                    }
                    if pin.is_empty() {
                        return Err(self.invalid(format!("empty pin role on slot `{slot}`")));
                    }
                }
                Endpoint::Port(p) if p.is_empty() => return Err(self.invalid("empty port name")),
                _ => {}
            }
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Net naming priority when several names merge: rails, then ports, then
/// internal nets. Ties go to the lexically smallest name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum NetKey {
    Rail(String),
    Port(String),
    Internal(String),
}

impl NetKey {
    fn label(&self) -> &str {
        match self {
            NetKey::Rail(s) | NetKey::Port(s) | NetKey::Internal(s) => s,
        }
    }
}

struct NetTable {
    keys: Vec<NetKey>,
    index: BTreeMap<NetKey, usize>,
}

impl NetTable {
    fn id(&mut self, k: NetKey) -> usize {
        if let Some(&i) = self.index.get(&k) {
            return i;
        }
        self.keys.push(k.clone());
        self.index.insert(k, self.keys.len() - 1);
        self.keys.len() - 1
    }
}

fn rail(d: Doping, cfg: &NetlistConfig) -> String {
    match d {
        Doping::N => cfg.gnd.clone(),
        Doping::P => cfg.vdd.clone(),
    }
}

/// Enumerates every combination of slot implementations, in odometer order
/// with the last slot varying fastest.
pub fn compose(
    rule: &CompositionRule,
    doping: Doping,
    sets: &[Vec<Fragment>],
) -> Result<Vec<Fragment>, SynthError> {
    rule.validate()?;
    if sets.len() != rule.slots.len() {
        return Err(rule.invalid(format!(
            "{} slots but {} implementation sets",
            rule.slots.len(),
            sets.len()
        )));
    }
    for (slot, set) in rule.slots.iter().zip(sets) {
        if set.is_empty() {
            return Err(SynthError::EmptySlot(slot.name.clone()));
        }
        for imp in set {
            if !slot.allowed.contains(&imp.btype) {
                return Err(rule.invalid(format!(
                    "slot `{}` does not accept {} implementation `{}`",
                    slot.name, imp.btype, imp.id
                )));
            }
            let want = match slot.doping {
                DopingFilter::Same => Some(BlockDoping::from(doping)),
                DopingFilter::Opposite => Some(BlockDoping::from(doping.opposite())),
                DopingFilter::Any => None,
            };
            if want.is_some_and(|w| w != imp.doping) {
                return Err(rule.invalid(format!(
                    "implementation `{}` in slot `{}` has the wrong doping",
                    imp.id, slot.name
                )));
            }
        }
    }

    let cfg = NetlistConfig::default();
    let total: usize = sets.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut choice = vec![0usize; sets.len()];
    for k in 1..=total {
        let chosen: Vec<&Fragment> = choice.iter().zip(sets).map(|(&c, s)| &s[c]).collect();
        out.push(build(rule, doping, &cfg, &chosen, &choice, k)?);
        for i in (0..choice.len()).rev() {
            choice[i] += 1;
            if choice[i] < sets[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
    Ok(out)
}

fn build(
    rule: &CompositionRule,
    doping: Doping,
    cfg: &NetlistConfig,
    chosen: &[&Fragment],
    choice: &[usize],
    k: usize,
) -> Result<Fragment, SynthError> {
    let mut table = NetTable {
        keys: Vec::new(),
        index: BTreeMap::new(),
    };
    let slot_pos: BTreeMap<&str, usize> = rule
        .slots
        .iter()
        .enumerate()
        .map(|(i, s)| (s.name.as_str(), i))
        .collect();
    let rails = [cfg.vdd.clone(), cfg.gnd.clone()];
    let local = |slot: &str, net: &str| -> NetKey {
        // Rails inside an implementation stay rails.
        if rails.iter().any(|r| r == net) {
            NetKey::Rail(net.to_string())
        } else {
            NetKey::Internal(format!("{slot}_{net}"))
        }
    };

    let mut devices = Vec::new();
    let mut core = Vec::new();
    for (i, (slot, imp)) in rule.slots.iter().zip(chosen).enumerate() {
        for (j, d) in imp.devices.iter().enumerate() {
            let name = format!("M{}{}_{}", slot.name, choice[i] + 1, j + 1);
            let nets = [&d.d, &d.g, &d.s].map(|n| table.id(local(&slot.name, n)));
            if slot.core && imp.core.contains(&d.name) {
                core.push(name.clone());
            }
            devices.push((name, d.doping, nets));
        }
    }

    let resolve = |table: &mut NetTable, e: &Endpoint| -> Result<usize, SynthError> {
        Ok(match e {
            Endpoint::Rail => table.id(NetKey::Rail(rail(doping, cfg))),
            Endpoint::OppositeRail => table.id(NetKey::Rail(rail(doping.opposite(), cfg))),
            Endpoint::Port(p) => table.id(NetKey::Port(p.clone())),
            Endpoint::Pin { slot, pin } => {
                let imp = chosen[slot_pos[slot.as_str()]];
                let net = imp.pins.get(pin).ok_or_else(|| SynthError::PinMismatch {
                    slot: slot.clone(),
                    implementation: imp.id.clone(),
                    pin: pin.clone(),
                })?;
                table.id(local(slot, net))
            }
        })
    };

    let mut wires = Vec::new();
    for (a, b) in &rule.connections {
        wires.push((resolve(&mut table, a)?, resolve(&mut table, b)?));
    }
    let mut exports = Vec::new();
    for (role, e) in &rule.exports {
        exports.push((role.clone(), resolve(&mut table, e)?));
    }

    let mut uf = UnionFind {
        parent: (0..table.keys.len()).collect(),
    };
    for (a, b) in wires {
        uf.union(a, b);
    }
    let mut best: BTreeMap<usize, NetKey> = BTreeMap::new();
    for (i, key) in table.keys.iter().enumerate() {
        let r = uf.find(i);
        match best.get(&r) {
            Some(cur) if cur <= key => {}
            _ => {
                best.insert(r, key.clone());
            }
        }
    }
    let mut rails_at: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
    for (i, key) in table.keys.iter().enumerate() {
        if let NetKey::Rail(r) = key {
            rails_at.entry(uf.find(i)).or_default().insert(r);
        }
    }
    if rails_at.values().any(|s| s.len() > 1) {
        return Err(rule.invalid("connections short the supply rails"));
    }
    let mut name_of = |i: usize| -> String { best[&uf.find(i)].label().to_string() };

    let devices: Vec<FragDevice> = devices
        .into_iter()
        .map(|(name, dop, [d, g, s])| FragDevice {
            name,
            doping: dop,
            d: name_of(d),
            g: name_of(g),
            s: name_of(s),
        })
        .collect();
    let pins = exports.into_iter().map(|(r, i)| (r, name_of(i))).collect();
    let dopings: BTreeSet<Doping> = devices.iter().map(|d| d.doping).collect();
    let doping = if dopings.len() == 1 {
        BlockDoping::from(*dopings.iter().next().expect("nonempty"))
    } else {
        BlockDoping::Mixed
    };
    Ok(Fragment {
        id: format!("{}_{}_{}", rule.name, block_doping_tag(doping), k),
        btype: rule.btype,
        doping,
        devices,
        core,
        pins,
    })
}

fn block_doping_tag(d: BlockDoping) -> &'static str {
    match d {
        BlockDoping::N => "n",
        BlockDoping::P => "p",
        BlockDoping::Mixed => "u",
    }
}

use BlockType::{Cb, Cm, Dp, Dt, Inv, Nt, Ts, Vb};

fn pin(slot: &str, p: &str) -> Endpoint {
    Endpoint::pin(slot, p)
}

fn exports(list: &[(&str, Endpoint)]) -> Vec<(String, Endpoint)> {
    list.iter().map(|(r, e)| (r.to_string(), e.clone())).collect()
}

/// Rule for a stack of `len` (1 or 2) transistors whose slots accept `lower`
/// and `upper`.
pub fn stack_rule(name: &str, btype: BlockType, lower: &[BlockType], upper: Option<&[BlockType]>) -> CompositionRule {
    let mut slots = vec![Slot::new("s1", lower)];
    let mut connections = vec![(pin("s1", "s"), Endpoint::Rail)];
    let mut ex = vec![
        ("s", pin("s1", "s")),
        ("g_1", pin("s1", "g")),
    ];
    match upper {
        Some(up) => {
            slots.push(Slot::new("s2", up));
            connections.push((pin("s1", "d"), pin("s2", "s")));
            ex.push(("g_2", pin("s2", "g")));
            ex.push(("d", pin("s2", "d")));
        }
        None => ex.push(("d", pin("s1", "d"))),
    }
    CompositionRule {
        name: name.into(),
        btype,
        slots,
        connections,
        exports: exports(&ex),
    }
}

fn prims(types: &[BlockType], d: Doping) -> Vec<Fragment> {
    types.iter().map(|&t| Fragment::primitive(t, d)).collect()
}

/// Current bias: one transistor, or two with the lower one normal or diode.
pub fn current_bias(d: Doping) -> Result<Vec<Fragment>, SynthError> {
    let mut out = compose(&stack_rule("current-bias-1", Cb, &[Nt], None), d, &[prims(&[Nt], d)])?;
    out.extend(current_bias_two(d)?);
    Ok(out)
}

/// The two-transistor current bias variants only.
pub fn current_bias_two(d: Doping) -> Result<Vec<Fragment>, SynthError> {
    compose(
        &stack_rule("current-bias-2", Cb, &[Nt, Dt], Some(&[Nt])),
        d,
        &[prims(&[Nt, Dt], d), prims(&[Nt], d)],
    )
}

/// Voltage bias: a diode, or a diode above a normal or diode transistor.
pub fn voltage_bias(d: Doping) -> Result<Vec<Fragment>, SynthError> {
    let mut out = compose(&stack_rule("voltage-bias-1", Vb, &[Dt], None), d, &[prims(&[Dt], d)])?;
    out.extend(compose(
        &stack_rule("voltage-bias-2", Vb, &[Nt, Dt], Some(&[Dt])),
        d,
        &[prims(&[Nt, Dt], d), prims(&[Dt], d)],
    )?);
    Ok(out)
}

pub fn simple_mirror(d: Doping) -> Result<Vec<Fragment>, SynthError> {
    let rule = CompositionRule {
        name: "simple-current-mirror".into(),
        btype: Cm,
        slots: vec![Slot::new("v", &[Dt]), Slot::new("c", &[Nt])],
        connections: vec![
            (pin("v", "s"), Endpoint::Rail),
            (pin("c", "s"), Endpoint::Rail),
            (pin("v", "g"), pin("c", "g")),
        ],
        exports: exports(&[("in", pin("v", "d")), ("out", pin("c", "d")), ("s", Endpoint::Rail)]),
    };
    compose(&rule, d, &[prims(&[Dt], d), prims(&[Nt], d)])
}

pub fn cascode_mirror(d: Doping) -> Result<Vec<Fragment>, SynthError> {
    let rule = CompositionRule {
        name: "cascode-current-mirror".into(),
        btype: Cm,
        slots: vec![
            Slot::new("v1", &[Dt]),
            Slot::new("v2", &[Dt]),
            Slot::new("c1", &[Nt]),
            Slot::new("c2", &[Nt]),
        ],
        connections: vec![
            (pin("v1", "s"), Endpoint::Rail),
            (pin("c1", "s"), Endpoint::Rail),
            (pin("v1", "d"), pin("v2", "s")),
            (pin("c1", "d"), pin("c2", "s")),
            (pin("v1", "g"), pin("c1", "g")),
            (pin("v2", "g"), pin("c2", "g")),
        ],
        exports: exports(&[("in", pin("v2", "d")), ("out", pin("c2", "d")), ("s", Endpoint::Rail)]),
    };
    let p = |t| prims(&[t], d);
    compose(&rule, d, &[p(Dt), p(Dt), p(Nt), p(Nt)])
}

/// Simple differential pair with a single-transistor tail biased from port `VB`.
pub fn diff_pair(d: Doping) -> Result<Vec<Fragment>, SynthError> {
    let rule = CompositionRule {
        name: "diff-pair".into(),
        btype: Dp,
        slots: vec![
            Slot::new("a", &[Nt]),
            Slot::new("b", &[Nt]),
            Slot::new("t", &[Nt]).support(),
        ],
        connections: vec![
            (pin("a", "s"), pin("b", "s")),
            (pin("a", "s"), pin("t", "d")),
            (pin("t", "s"), Endpoint::Rail),
            (pin("t", "g"), Endpoint::Port("VB".into())),
        ],
        exports: exports(&[
            ("g_1", pin("a", "g")),
            ("g_2", pin("b", "g")),
            ("d_1", pin("a", "d")),
            ("d_2", pin("b", "d")),
            ("s", pin("a", "s")),
            ("vb", pin("t", "g")),
        ]),
    };
    let p = |t| prims(&[t], d);
    compose(&rule, d, &[p(Nt), p(Nt), p(Nt)])
}

/// Normal-transistor stacks of one and two devices, used as inverter halves.
fn nt_stacks(d: Doping) -> Result<Vec<Fragment>, SynthError> {
    let mut out = compose(&stack_rule("stack-1", Ts, &[Nt], None), d, &[prims(&[Nt], d)])?;
    out.extend(compose(
        &stack_rule("stack-2", Ts, &[Nt], Some(&[Nt])),
        d,
        &[prims(&[Nt], d), prims(&[Nt], d)],
    )?);
    Ok(out)
}

/// Analog inverter: a p stack over an n stack, each of one or two normal
/// transistors.
pub fn inverter() -> Result<Vec<Fragment>, SynthError> {
    let rule = CompositionRule {
        name: "inverter".into(),
        btype: Inv,
        slots: vec![Slot::new("p", &[Ts]), Slot::new("n", &[Ts]).opposite()],
        connections: vec![
            (pin("p", "s"), Endpoint::Rail),
            (pin("n", "s"), Endpoint::OppositeRail),
            (pin("p", "d"), pin("n", "d")),
        ],
        exports: exports(&[
            ("out", pin("p", "d")),
            ("in_p", pin("p", "g_1")),
            ("in_n", pin("n", "g_1")),
        ]),
    };
    compose(&rule, Doping::P, &[nt_stacks(Doping::P)?, nt_stacks(Doping::N)?])
}

/// Names accepted by [`generate`].
pub const GENERATORS: [&str; 6] = [
    "current-bias",
    "voltage-bias",
    "simple-current-mirror",
    "cascode-current-mirror",
    "diff-pair",
    "inverter",
];

/// Runs a built-in generator by name. `inverter` ignores the doping.
pub fn generate(name: &str, d: Doping) -> Result<Vec<Fragment>, SynthError> {
    match name {
        "current-bias" => current_bias(d),
        "voltage-bias" => voltage_bias(d),
        "simple-current-mirror" => simple_mirror(d),
        "cascode-current-mirror" => cascode_mirror(d),
        "diff-pair" => diff_pair(d),
        "inverter" => inverter(),
        _ => Err(SynthError::UnknownGenerator {
            name: name.into(),
            available: GENERATORS.iter().map(|s| s.to_string()).collect(),
        }),
    }
}

/// Wraps a fragment in a minimal harness so the recognizer has what it needs
/// to see the block: a matching bias chain for lone biases, a diode for a
/// tail gate, and a capacitor so both rails are used.
pub fn harness(frag: &Fragment, expected: BlockType) -> Result<String, SynthError> {
    let cfg = NetlistConfig::default();
    let mut text = frag.to_spice(&cfg);
    let doping = match frag.doping {
        BlockDoping::N => Doping::N,
        BlockDoping::P => Doping::P,
        BlockDoping::Mixed => Doping::N,
    };
    let (bulk, model) = match doping {
        Doping::N => (cfg.gnd.clone(), "nmos"),
        Doping::P => (cfg.vdd.clone(), "pmos"),
    };
    let rail = rail(doping, &cfg);
    let gates = |frag: &Fragment| -> Vec<String> {
        (1..)
            .map_while(|i| frag.pins.get(&format!("g_{i}")).cloned())
            .collect()
    };
    match expected {
        BlockType::Cb => {
            let g = gates(frag);
            if g.is_empty() {
                return Err(SynthError::Harness(format!("{} exports no gates", frag.id)));
            }
            let mut below = rail.clone();
            for (i, gate) in g.iter().enumerate() {
                text.push_str(&format!("MH{} {gate} {gate} {below} {bulk} {model}\n", i + 1));
                below = gate.clone();
            }
        }
        BlockType::Vb => {
            let g = gates(frag);
            if g.is_empty() {
                return Err(SynthError::Harness(format!("{} exports no gates", frag.id)));
            }
            let mut below = rail.clone();
            for (i, gate) in g.iter().enumerate() {
                let drain = if i + 1 == g.len() { "HOUT".to_string() } else { format!("HX{}", i + 1) };
                text.push_str(&format!("MH{} {drain} {gate} {below} {bulk} {model}\n", i + 1));
                below = drain;
            }
        }
        BlockType::Dp => {
            let vb = frag
                .pins
                .get("vb")
                .ok_or_else(|| SynthError::Harness(format!("{} exports no tail gate", frag.id)))?;
            text.push_str(&format!("MH1 {vb} {vb} {rail} {bulk} {model}\n"));
        }
        BlockType::Cm | BlockType::Inv => {}
        other => return Err(SynthError::Harness(format!("no harness for {other}"))),
    }
    text.push_str(&format!("CHARNESS {} {} 1p\n", cfg.vdd, cfg.gnd));
    Ok(text)
}

/// True iff decomposing the harnessed fragment yields a block of type
/// `expected` made of exactly the fragment's core devices.
pub fn roundtrip_check(frag: &Fragment, expected: BlockType) -> Result<bool, SynthError> {
    let text = harness(frag, expected)?;
    let n = parse_netlist(&text, &NetlistConfig::default())
        .map_err(|e| SynthError::Harness(e.to_string()))?;
    let dec = crate::hl34::decompose(&n);
    let want: Option<BTreeSet<usize>> = frag.core.iter().map(|c| n.device_index(c)).collect();
    let Some(want) = want else {
        return Err(SynthError::Harness(format!("{} lost a core device", frag.id)));
    };
    let found = dec
        .of_type(expected)
        .any(|b| b.devices.iter().copied().collect::<BTreeSet<_>>() == want);
    Ok(found)
}
