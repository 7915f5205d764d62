//! Flat transistor-level netlists.
//!
//! The accepted input is a small SPICE subset:
//!
//! ```text
//! * comment
//! M<name> <d> <g> <s> <b> <model> [params...]   ; model n* => NMOS, p* => PMOS
//! C<name> <p1> <p2> [value]
//! + continuation of the previous card
//! .end
//! ```
//!
//! Net and device names are case-insensitive and stored upper-cased. Devices
//! and nets are kept in lexicographic order so every downstream pass iterates
//! deterministically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NetlistError, ParseError};

/// Index of a net inside a [`Netlist`]. Ordering follows the net names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetId(u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Transistor polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Doping {
    #[serde(rename = "n")]
    N,
    #[serde(rename = "p")]
    P,
}

impl Doping {
    pub fn opposite(self) -> Doping {
        match self {
            Doping::N => Doping::P,
            Doping::P => Doping::N,
        }
    }
}

impl fmt::Display for Doping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Doping::N => "n",
            Doping::P => "p",
        })
    }
}

impl FromStr for Doping {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "n" | "nmos" => Ok(Doping::N),
            "p" | "pmos" => Ok(Doping::P),
            other => Err(format!("unknown doping `{other}` (expected n or p)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pin {
    D,
    G,
    S,
    B,
    P1,
    P2,
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pin::D => "d",
            Pin::G => "g",
            Pin::S => "s",
            Pin::B => "b",
            Pin::P1 => "p1",
            Pin::P2 => "p2",
        })
    }
}

impl FromStr for Pin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "d" => Ok(Pin::D),
            "g" => Ok(Pin::G),
            "s" => Ok(Pin::S),
            "b" => Ok(Pin::B),
            "p1" => Ok(Pin::P1),
            "p2" => Ok(Pin::P2),
            other => Err(format!("unknown pin `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviceKind {
    Mosfet(Doping),
    Capacitor,
}

/// A single device. Mosfet pins are stored as `[d, g, s, b]`, capacitor
/// pins as `[p1, p2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Device {
    pub name: String,
    pub kind: DeviceKind,
    pins: Vec<NetId>,
    /// Model name as written (mosfets only).
    pub model: Option<String>,
    /// Trailing tokens carried as opaque annotations (sizes, capacitance).
    pub params: Vec<String>,
}

impl Device {
    pub fn is_mosfet(&self) -> bool {
        matches!(self.kind, DeviceKind::Mosfet(_))
    }

    pub fn doping(&self) -> Option<Doping> {
        match self.kind {
            DeviceKind::Mosfet(d) => Some(d),
            DeviceKind::Capacitor => None,
        }
    }

    pub fn pin(&self, pin: Pin) -> Option<NetId> {
        let idx = match (self.kind, pin) {
            (DeviceKind::Mosfet(_), Pin::D) => 0,
            (DeviceKind::Mosfet(_), Pin::G) => 1,
            (DeviceKind::Mosfet(_), Pin::S) => 2,
            (DeviceKind::Mosfet(_), Pin::B) => 3,
            (DeviceKind::Capacitor, Pin::P1) => 0,
            (DeviceKind::Capacitor, Pin::P2) => 1,
            _ => return None,
        };
        Some(self.pins[idx])
    }

    pub fn pin_names(&self) -> &'static [Pin] {
        match self.kind {
            DeviceKind::Mosfet(_) => &[Pin::D, Pin::G, Pin::S, Pin::B],
            DeviceKind::Capacitor => &[Pin::P1, Pin::P2],
        }
    }

    // Unchecked accessors for the structural predicates; callers only use
    // them on mosfets.
    pub(crate) fn d(&self) -> NetId {
        self.pins[0]
    }
    pub(crate) fn g(&self) -> NetId {
        self.pins[1]
    }
    pub(crate) fn s(&self) -> NetId {
        self.pins[2]
    }
}

/// Supply classification of a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Supply {
    Vdd,
    Gnd,
    None,
}

/// Naming overrides for supplies and IO roles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetlistConfig {
    pub vdd: String,
    pub gnd: String,
    /// IO role (`in+`, `in-`, `out`, `out2`, `bias...`) to net name.
    pub io: BTreeMap<String, String>,
}

impl Default for NetlistConfig {
    fn default() -> Self {
        let io = [("in+", "INP"), ("in-", "INN"), ("out", "OUT"), ("out2", "OUT2")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        NetlistConfig {
            vdd: "VDD".into(),
            gnd: "GND".into(),
            io,
        }
    }
}

impl NetlistConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Immutable device/net graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    devices: Vec<Device>,
    net_names: Vec<String>,
    vdd: NetId,
    gnd: NetId,
    io: BTreeMap<String, NetId>,
}

fn normalize(token: &str) -> String {
    token.to_ascii_uppercase()
}

struct RawDevice {
    line: usize,
    name: String,
    kind: DeviceKind,
    nets: Vec<String>,
    model: Option<String>,
    params: Vec<String>,
}

/// Joins `+` continuation cards and strips comments. Returns (line, text).
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let without_comment = match raw.find(';') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = without_comment.trim();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('+') {
            if let Some(last) = out.last_mut() {
                last.1.push(' ');
                last.1.push_str(rest.trim());
                continue;
            }
        }
        out.push((line_no, trimmed.to_string()));
    }
    out
}

fn parse_card(line: usize, card: &str) -> Result<Option<RawDevice>, ParseError> {
    let tokens: Vec<&str> = card.split_whitespace().collect();
    let first = tokens[0];
    let lead = first.chars().next().map(|c| c.to_ascii_uppercase());
    match lead {
        Some('M') => {
            if tokens.len() < 6 {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("mosfet card needs `name d g s b model`, got {} tokens", tokens.len()),
                });
            }
            let model = tokens[5];
            let doping = match model.chars().next().map(|c| c.to_ascii_lowercase()) {
                Some('n') => Doping::N,
                Some('p') => Doping::P,
                _ => {
                    return Err(ParseError::UnknownModel {
                        line,
                        device: normalize(first),
                        model: model.to_string(),
                    })
                }
            };
            Ok(Some(RawDevice {
                line,
                name: normalize(first),
                kind: DeviceKind::Mosfet(doping),
                nets: tokens[1..5].iter().map(|t| normalize(t)).collect(),
                model: Some(model.to_string()),
                params: tokens[6..].iter().map(|t| t.to_string()).collect(),
            }))
        }
        Some('C') => {
            if tokens.len() < 3 {
                return Err(ParseError::Syntax {
                    line,
                    msg: "capacitor card needs `name p1 p2 [value]`".into(),
                });
            }
            Ok(Some(RawDevice {
                line,
                name: normalize(first),
                kind: DeviceKind::Capacitor,
                nets: tokens[1..3].iter().map(|t| normalize(t)).collect(),
                model: None,
                params: tokens[3..].iter().map(|t| t.to_string()).collect(),
            }))
        }
        Some('.') if first.eq_ignore_ascii_case(".end") => Ok(None),
        _ => Err(ParseError::Syntax {
            line,
            msg: format!("unsupported card `{first}`"),
        }),
    }
}

/// Parses netlist source text.
pub fn parse_netlist(text: &str, config: &NetlistConfig) -> Result<Netlist, ParseError> {
    let vdd_name = normalize(config.vdd.trim());
    let gnd_name = normalize(config.gnd.trim());
    if vdd_name.is_empty() || gnd_name.is_empty() {
        return Err(ParseError::Config("supply net names must be nonempty".into()));
    }
    if vdd_name == gnd_name {
        return Err(ParseError::Config(format!(
            "VDD and GND both map to net `{vdd_name}`"
        )));
    }

    let mut raw = Vec::new();
    for (line, card) in logical_lines(text) {
        match parse_card(line, &card)? {
            Some(dev) => raw.push(dev),
            None => break,
        }
    }

    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for dev in &raw {
        if let Some(first) = seen.insert(dev.name.clone(), dev.line) {
            return Err(ParseError::DuplicateDevice {
                line: dev.line,
                name: dev.name.clone(),
                first,
            });
        }
    }

    let mut names: BTreeSet<String> = raw.iter().flat_map(|d| d.nets.iter().cloned()).collect();
    if !raw.is_empty() {
        for supply in [&vdd_name, &gnd_name] {
            if !names.contains(supply) {
                return Err(ParseError::MissingSupply(supply.clone()));
            }
        }
    } else {
        names.insert(vdd_name.clone());
        names.insert(gnd_name.clone());
    }
    let net_names: Vec<String> = names.into_iter().collect();
    let lookup = |name: &str| -> NetId {
        NetId(net_names.binary_search_by(|n| n.as_str().cmp(name)).expect("interned") as u32)
    };

    let mut devices: Vec<Device> = raw
        .into_iter()
        .map(|r| Device {
            pins: r.nets.iter().map(|n| lookup(n)).collect(),
            name: r.name,
            kind: r.kind,
            model: r.model,
            params: r.params,
        })
        .collect();
    devices.sort_by(|a, b| a.name.cmp(&b.name));

    let io = config
        .io
        .iter()
        .filter_map(|(role, net)| {
            let net = normalize(net);
            net_names
                .binary_search(&net)
                .ok()
                .map(|idx| (role.clone(), NetId(idx as u32)))
        })
        .collect();

    Ok(Netlist {
        vdd: lookup(&vdd_name),
        gnd: lookup(&gnd_name),
        devices,
        net_names,
        io,
    })
}

impl Netlist {
    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    pub fn device(&self, idx: usize) -> &Device {
        &self.devices[idx]
    }

    /// Looks a device up by name. `N5` also matches a device card `MN5`.
    pub fn device_index(&self, name: &str) -> Option<usize> {
        let name = normalize(name);
        let find = |n: &str| self.devices.binary_search_by(|d| d.name.as_str().cmp(n)).ok();
        find(&name).or_else(|| find(&format!("M{name}")))
    }

    pub fn net_count(&self) -> usize {
        self.net_names.len()
    }

    pub fn nets(&self) -> impl Iterator<Item = NetId> + '_ {
        (0..self.net_names.len() as u32).map(NetId)
    }

    pub fn net_name(&self, net: NetId) -> &str {
        &self.net_names[net.index()]
    }

    pub fn net_id(&self, name: &str) -> Option<NetId> {
        let name = normalize(name);
        self.net_names
            .binary_search(&name)
            .ok()
            .map(|i| NetId(i as u32))
    }

    pub fn vdd(&self) -> NetId {
        self.vdd
    }

    pub fn gnd(&self) -> NetId {
        self.gnd
    }

    pub fn io(&self) -> &BTreeMap<String, NetId> {
        &self.io
    }

    pub fn is_supply(&self, net: NetId) -> Supply {
        if net == self.vdd {
            Supply::Vdd
        } else if net == self.gnd {
            Supply::Gnd
        } else {
            Supply::None
        }
    }

    /// Rail a transistor stack of the given doping sources from.
    pub fn rail_for(&self, doping: Doping) -> NetId {
        match doping {
            Doping::N => self.gnd,
            Doping::P => self.vdd,
        }
    }

    pub fn pin_net(&self, device: &str, pin: Pin) -> Result<NetId, NetlistError> {
        let idx = self
            .device_index(device)
            .ok_or_else(|| NetlistError::UnknownDevice(device.to_string()))?;
        let dev = &self.devices[idx];
        dev.pin(pin).ok_or_else(|| NetlistError::UnknownPin {
            device: dev.name.clone(),
            pin: pin.to_string(),
        })
    }

    /// True iff both device pins sit on the same net.
    pub fn connected(&self, a: (&str, Pin), b: (&str, Pin)) -> Result<bool, NetlistError> {
        Ok(self.pin_net(a.0, a.1)? == self.pin_net(b.0, b.1)?)
    }

    pub fn transistor_count(&self) -> usize {
        self.devices.iter().filter(|d| d.is_mosfet()).count()
    }

    /// Writes the netlist back in the accepted grammar.
    pub fn to_spice(&self) -> String {
        let mut out = String::new();
        for dev in &self.devices {
            out.push_str(&dev.name);
            for net in &dev.pins {
                out.push(' ');
                out.push_str(self.net_name(*net));
            }
            if let Some(model) = &dev.model {
                out.push(' ');
                out.push_str(model);
            }
            for p in &dev.params {
                out.push(' ');
                out.push_str(p);
            }
            out.push('\n');
        }
        out.push_str(".end\n");
        out
    }

    /// Config that reproduces this netlist's supply and IO naming.
    pub fn config(&self) -> NetlistConfig {
        NetlistConfig {
            vdd: self.net_name(self.vdd).to_string(),
            gnd: self.net_name(self.gnd).to_string(),
            io: self
                .io
                .iter()
                .map(|(k, v)| (k.clone(), self.net_name(*v).to_string()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Netlist {
        parse_netlist(text, &NetlistConfig::default()).unwrap()
    }

    #[test]
    fn mosfet_card() {
        let n = parse("M1 d1 g1 s1 b1 nmos\nMX VDD GND GND GND pmos\n");
        let idx = n.device_index("M1").unwrap();
        let dev = n.device(idx);
        assert_eq!(dev.kind, DeviceKind::Mosfet(Doping::N));
        assert_eq!(n.net_name(dev.pin(Pin::D).unwrap()), "D1");
        assert_eq!(n.net_name(dev.pin(Pin::G).unwrap()), "G1");
        assert_eq!(n.net_name(dev.pin(Pin::S).unwrap()), "S1");
        assert_eq!(n.net_name(dev.pin(Pin::B).unwrap()), "B1");
        assert!(dev.pin(Pin::P1).is_none());
    }

    #[test]
    fn capacitor_card() {
        let n = parse("C1 outp out 1p\nM0 VDD GND GND GND nmos\n");
        let dev = n.device(n.device_index("C1").unwrap());
        assert_eq!(dev.kind, DeviceKind::Capacitor);
        assert_eq!(dev.doping(), None);
        assert_eq!(n.net_name(dev.pin(Pin::P1).unwrap()), "OUTP");
        assert_eq!(n.net_name(dev.pin(Pin::P2).unwrap()), "OUT");
        assert_eq!(dev.params, vec!["1p".to_string()]);
    }

    #[test]
    fn continuation_and_comments() {
        let n = parse("* header\nM1 a b ; trailing\n+ c GND nch W=1u\nM2 VDD VDD GND GND nch\n.end\nM3 junk\n");
        let dev = n.device(n.device_index("M1").unwrap());
        assert_eq!(n.net_name(dev.pin(Pin::S).unwrap()), "C");
        assert_eq!(dev.params, vec!["W=1u".to_string()]);
        assert_eq!(n.devices().len(), 2);
    }

    #[test]
    fn errors() {
        let cfg = NetlistConfig::default();
        let e = parse_netlist("M1 a b c\n", &cfg).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 1, .. }));
        let e = parse_netlist("M1 VDD b GND d xmos\n", &cfg).unwrap_err();
        assert!(matches!(e, ParseError::UnknownModel { .. }));
        let e = parse_netlist("M1 a b c d nmos\n", &cfg).unwrap_err();
        assert!(matches!(e, ParseError::MissingSupply(_)));
        let e = parse_netlist("M1 VDD b GND d nmos\nm1 VDD b GND d nmos\n", &cfg).unwrap_err();
        assert!(matches!(e, ParseError::DuplicateDevice { line: 2, first: 1, .. }));
        let e = parse_netlist("R1 a b 1k\n", &cfg).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { .. }));
        let same = NetlistConfig {
            vdd: "x".into(),
            gnd: "X".into(),
            ..Default::default()
        };
        assert!(matches!(parse_netlist("", &same), Err(ParseError::Config(_))));
    }

    #[test]
    fn supply_classification_and_overrides() {
        let cfg = NetlistConfig {
            vdd: "vcc".into(),
            gnd: "vss".into(),
            ..Default::default()
        };
        let n = parse_netlist("M1 out in vss vss nmos\nM2 out in vcc vcc pmos\n", &cfg).unwrap();
        assert_eq!(n.is_supply(n.net_id("VCC").unwrap()), Supply::Vdd);
        assert_eq!(n.is_supply(n.net_id("vss").unwrap()), Supply::Gnd);
        assert_eq!(n.is_supply(n.net_id("out").unwrap()), Supply::None);
    }

    #[test]
    fn connected_queries() {
        let n = parse("M1 a a GND GND nmos\nM2 b a VDD VDD pmos\n");
        assert!(n.connected(("M1", Pin::D), ("M1", Pin::G)).unwrap());
        assert!(n.connected(("M1", Pin::G), ("M2", Pin::G)).unwrap());
        assert!(!n.connected(("M1", Pin::D), ("M2", Pin::D)).unwrap());
        assert!(matches!(
            n.connected(("M9", Pin::D), ("M1", Pin::D)),
            Err(NetlistError::UnknownDevice(_))
        ));
        assert!(matches!(
            n.connected(("M1", Pin::P1), ("M1", Pin::D)),
            Err(NetlistError::UnknownPin { .. })
        ));
    }

    #[test]
    fn empty_netlist_is_valid() {
        let n = parse("* nothing here\n");
        assert!(n.devices().is_empty());
        assert_ne!(n.vdd(), n.gnd());
    }
}
