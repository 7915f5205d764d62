use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown model `{model}` for device {device} (expected n* or p*)")]
    UnknownModel {
        line: usize,
        device: String,
        model: String,
    },
    #[error("supply net `{0}` is not used by any device")]
    MissingSupply(String),
    #[error("line {line}: duplicate device `{name}` (first defined on line {first})")]
    DuplicateDevice {
        line: usize,
        name: String,
        first: usize,
    },
    #[error("invalid netlist config: {0}")]
    Config(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("unknown device `{0}`")]
    UnknownDevice(String),
    #[error("device {device} has no pin `{pin}`")]
    UnknownPin { device: String, pin: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("malformed transistor stack: {0}")]
    MalformedStack(String),
    #[error("block `{0}` has no transistor constituents")]
    NoTransistors(String),
    #[error("unknown device `{0}`")]
    UnknownDevice(String),
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PerfError {
    #[error("missing small-signal parameters for: {}", .0.join(", "))]
    MissingParams(Vec<String>),
    #[error("invalid parameters for {device}: {msg}")]
    InvalidParams { device: String, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("params file: {0}")]
    Format(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("rule `{rule}`: {msg}")]
    InvalidRule { rule: String, msg: String },
    #[error("slot `{slot}` implementation `{implementation}` has no pin `{pin}`")]
    PinMismatch {
        slot: String,
        implementation: String,
        pin: String,
    },
    #[error("slot `{0}` has no implementations")]
    EmptySlot(String),
    #[error("unknown block generator `{name}`; available: {}", .available.join(", "))]
    UnknownGenerator { name: String, available: Vec<String> },
    #[error("cannot build a recognition harness: {0}")]
    Harness(String),
}
