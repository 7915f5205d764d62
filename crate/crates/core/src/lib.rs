//! Hierarchical functional-block analysis of CMOS op-amp netlists.
//!
//! Parse a netlist with [`parse_netlist`], then [`decompose`] it into
//! functional blocks on five hierarchy levels. [`perf`] turns a decomposition
//! plus per-transistor small-signal values into stage gains, and [`synth`]
//! generates small block variants by rule-driven composition.

pub mod batch;
pub mod block;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod hl1;
pub mod hl2;
pub mod hl34;
pub mod netlist;
pub mod perf;
pub mod synth;

pub use block::{BlockDoping, BlockType, Child, Decomposition, FunctionalBlock, Stack};
pub use error::{BlockError, NetlistError, ParseError, PerfError, SynthError};
pub use hl34::decompose;
pub use netlist::{parse_netlist, Device, Doping, NetId, Netlist, NetlistConfig, Pin, Supply};
pub use perf::{analyze_perf, PerfParams, PerfReport, SmallSignal};
pub use synth::{compose, roundtrip_check, CompositionRule, Fragment};
