//! Device-level classification: normal transistor, diode transistor, capacitor.

use std::collections::BTreeMap;

use crate::block::{BlockType, Child, Decomposition};
use crate::netlist::{Device, DeviceKind};

/// HL1 type of a device, or `None` when neither transistor form applies.
pub fn classify(dev: &Device) -> Option<BlockType> {
    match dev.kind {
        DeviceKind::Capacitor => Some(BlockType::Cap),
        DeviceKind::Mosfet(_) => {
            let (d, g, s) = (dev.d(), dev.g(), dev.s());
            if d == s {
                None
            } else if d == g {
                Some(BlockType::Dt)
            } else if g != s {
                Some(BlockType::Nt)
            } else {
                None
            }
        }
    }
}

/// Adds one HL1 block per classifiable device and returns the device to
/// block index map. Unclassifiable transistors get a warning diagnostic.
pub fn recognize_hl1(dec: &mut Decomposition) -> Vec<Option<usize>> {
    let count = dec.netlist().devices().len();
    let mut out = vec![None; count];
    for (i, slot) in out.iter_mut().enumerate() {
        let dev = dec.netlist().device(i).clone();
        match classify(&dev) {
            Some(t) => {
                let mut pins = BTreeMap::new();
                for &p in dev.pin_names() {
                    if p != crate::netlist::Pin::B {
                        pins.insert(p.to_string(), dev.pin(p).expect("pin"));
                    }
                }
                *slot = Some(dec.add(t, vec![Child::Device(i)], pins, None));
            }
            None => {
                let why = if dev.d() == dev.s() {
                    "drain and source share a net"
                } else {
                    "gate and source share a net"
                };
                dec.diagnose(
                    "unclassifiable-device",
                    format!("{} is neither a normal nor a diode transistor: {why}", dev.name),
                    vec![dev.name.clone()],
                );
            }
        }
    }
    out
}
