//! Small-signal performance composition over a decomposition: stack output
//! conductance, stage output resistance, stage and overall open-loop gain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::block::{BlockType, Child, Decomposition, Stack, StageRecord};
use crate::error::PerfError;
use crate::netlist::{NetId, Netlist};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmallSignal {
    /// Transconductance in S.
    pub gm: f64,
    /// Output conductance in S.
    pub gd: f64,
}

/// Per-device small-signal values keyed by upper-case device name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerfParams {
    values: BTreeMap<String, SmallSignal>,
}

impl PerfParams {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `DEVICE = {gm = <S>, gd = <S>}` entries.
    pub fn from_toml(text: &str) -> Result<Self, PerfError> {
        let raw: BTreeMap<String, SmallSignal> =
            toml::from_str(text).map_err(|e| PerfError::Format(e.to_string()))?;
        let mut p = PerfParams::new();
        for (k, v) in raw {
            p.insert(&k, v)?;
        }
        Ok(p)
    }

    pub fn insert(&mut self, device: &str, v: SmallSignal) -> Result<(), PerfError> {
        for (what, x) in [("gm", v.gm), ("gd", v.gd)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(PerfError::InvalidParams {
                    device: device.to_string(),
                    msg: format!("{what} must be positive and finite, got {x}"),
                });
            }
        }
        self.values.insert(device.to_ascii_uppercase(), v);
        Ok(())
    }

    /// Lookup by name; `N5` and `MN5` refer to the same device.
    pub fn get(&self, device: &str) -> Option<SmallSignal> {
        let up = device.to_ascii_uppercase();
        self.values
            .get(&up)
            .or_else(|| up.strip_prefix('M').and_then(|s| self.values.get(s)))
            .or_else(|| self.values.get(&format!("M{up}")))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Output conductance of a stack given bottom-to-top small-signal values:
/// `gd` for one transistor, `gd_out * gd_supply / gm_out` for two.
pub fn stack_gout(stack: &[SmallSignal]) -> Result<f64, PerfError> {
    match stack {
        [t] => Ok(t.gd),
        [supply, out] => Ok(out.gd * supply.gd / out.gm),
        [] => Err(PerfError::Unsupported("empty stack".into())),
        s => Err(PerfError::Unsupported(format!(
            "output conductance of a {}-transistor stack",
            s.len()
        ))),
    }
}

fn lookup(n: &Netlist, p: &PerfParams, devices: &[usize]) -> Result<Vec<SmallSignal>, PerfError> {
    let mut missing = Vec::new();
    let mut out = Vec::new();
    for &d in devices {
        match p.get(&n.device(d).name) {
            Some(v) => out.push(v),
            None => missing.push(n.device(d).name.clone()),
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(PerfError::MissingParams(missing))
    }
}

/// Output conductance of a stack-shaped block (ts, vb, cb, tc_inv).
pub fn block_gout(dec: &Decomposition, block: usize, p: &PerfParams) -> Result<f64, PerfError> {
    let b = dec.block(block);
    let stack = b
        .stack
        .as_ref()
        .ok_or_else(|| PerfError::Unsupported(format!("{} ({}) is not a transistor stack", b.id, b.btype)))?;
    stack_gout(&lookup(dec.netlist(), p, &stack.0)?)
}

/// `1 / sum(gout)`.
pub fn output_resistance(gouts: &[f64]) -> f64 {
    1.0 / gouts.iter().sum::<f64>()
}

pub fn to_db(gain: f64) -> f64 {
    20.0 * gain.abs().log10()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub devices: Vec<String>,
    pub gout_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub id: String,
    #[serde(rename = "type")]
    pub stype: BlockType,
    pub output_net: String,
    pub gin_device: String,
    pub gin_s: f64,
    pub branches: Vec<BranchReport>,
    pub r_out_ohm: f64,
    pub gain: f64,
    pub gain_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfReport {
    pub stages: Vec<StageReport>,
    /// Product of the gains of all non-CMFB stages.
    pub overall_gain: f64,
    pub overall_gain_db: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl PerfReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:<8} {:<8} {:>12} {:>12} {:>12} {:>10}",
            "stage", "type", "output", "gin [S]", "R_out [Ohm]", "A_D", "A_D [dB]"
        );
        for s in &self.stages {
            let _ = writeln!(
                out,
                "{:<8} {:<8} {:<8} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.2}",
                s.id,
                s.stype.name(),
                s.output_net,
                s.gin_s,
                s.r_out_ohm,
                s.gain,
                s.gain_db
            );
            for b in &s.branches {
                let _ = writeln!(out, "    gout[{}] = {:.4e} S", b.devices.join(","), b.gout_s);
            }
        }
        let _ = writeln!(
            out,
            "overall A_D,0 = {:.4e} ({:.2} dB)",
            self.overall_gain, self.overall_gain_db
        );
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn stage_stack(dec: &Decomposition, block: usize) -> Option<Stack> {
    let b = dec.block(block);
    if let Some(s) = &b.stack {
        return Some(s.clone());
    }
    b.children.iter().find_map(|c| match *c {
        Child::Block(i) => dec.block(i).stack.clone(),
        Child::Device(_) => None,
    })
}

/// Differential-pair transistors of a non-inverting stage's transconductance.
fn tc_inputs(dec: &Decomposition, stage: &StageRecord) -> Vec<usize> {
    let mut out = Vec::new();
    for c in &dec.block(stage.tc).children {
        if let Child::Block(dp) = *c {
            out.extend(dec.block(dp).devices.iter().copied());
        }
    }
    out
}

/// Output net used for the stage's gain: the one feeding a later stage,
/// otherwise the first output.
fn designated_output(dec: &Decomposition, stage: &StageRecord) -> NetId {
    let later: BTreeSet<NetId> = dec
        .stages
        .iter()
        .filter(|s| matches!((s.ordinal, stage.ordinal), (Some(a), Some(b)) if a > b))
        .filter_map(|s| dec.block(s.block).pins.get("in_1").copied())
        .collect();
    stage
        .outputs
        .iter()
        .copied()
        .find(|o| later.contains(o))
        .unwrap_or(stage.outputs[0])
}

/// Stacks at the stage output whose conductances add up to `1/R_out`,
/// plus the device whose gm is the stage input conductance.
pub fn stage_branches(dec: &Decomposition, stage: &StageRecord) -> (NetId, usize, Vec<Stack>) {
    let n = dec.netlist();
    let out = designated_output(dec, stage);
    if stage.load.is_none() {
        let tc = dec.block(stage.tc).stack.clone().expect("tc_inv stack");
        let gin = tc.bottom();
        let mut branches = vec![tc];
        branches.extend(stage_stack(dec, stage.bias));
        return (out, gin, branches);
    }
    let inputs = tc_inputs(dec, stage);
    let mut branches = Vec::new();
    for s in &stage.load_stacks {
        if s.drain(n) != out {
            continue;
        }
        let src = s.source(n);
        match inputs.iter().find(|&&t| n.device(t).d() == src) {
            Some(&t) => {
                let mut v = vec![t];
                v.extend(s.0.iter().copied());
                branches.push(Stack(v));
            }
            None => branches.push(s.clone()),
        }
    }
    for &t in &inputs {
        if n.device(t).d() == out {
            branches.push(Stack(vec![t]));
        }
    }
    (out, inputs[0], branches)
}

/// Evaluates every recognized stage. All missing device parameters are
/// reported together.
pub fn analyze_perf(dec: &Decomposition, p: &PerfParams) -> Result<PerfReport, PerfError> {
    let n = dec.netlist();
    let mut stages: Vec<&StageRecord> = dec.stages.iter().collect();
    stages.sort_by_key(|s| (s.ordinal.is_none(), s.ordinal));

    let mut needed = BTreeSet::new();
    let plans: Vec<_> = stages.iter().map(|s| stage_branches(dec, s)).collect();
    for (_, gin, branches) in &plans {
        needed.insert(*gin);
        for b in branches {
            needed.extend(b.0.iter().copied());
        }
    }
    let missing: Vec<String> = needed
        .iter()
        .filter(|&&d| p.get(&n.device(d).name).is_none())
        .map(|&d| n.device(d).name.clone())
        .collect();
    if !missing.is_empty() {
        return Err(PerfError::MissingParams(missing));
    }

    let mut reports = Vec::new();
    let mut overall = 1.0;
    let mut warnings = Vec::new();
    for (stage, (out, gin_dev, branches)) in stages.iter().zip(plans) {
        let id = dec.block(stage.block).id.clone();
        if branches.is_empty() {
            return Err(PerfError::Unsupported(format!("{id} has no branch at its output")));
        }
        let mut rows = Vec::new();
        for b in &branches {
            let g = stack_gout(&lookup(n, p, &b.0)?)
                .map_err(|e| PerfError::Unsupported(format!("{id}: {e}")))?;
            rows.push(BranchReport {
                devices: b.names(n),
                gout_s: g,
            });
        }
        let gouts: Vec<f64> = rows.iter().map(|r| r.gout_s).collect();
        let r_out = output_resistance(&gouts);
        let gin = p.get(&n.device(gin_dev).name).expect("checked").gm;
        let gain = gin * r_out;
        if gain <= 0.0 {
            warnings.push(format!("{id}: nonpositive gain {gain}, reporting magnitude"));
        }
        if stage.ordinal.is_some() {
            overall *= gain.abs();
        }
        reports.push(StageReport {
            id,
            stype: stage.stype,
            output_net: n.net_name(out).to_string(),
            gin_device: n.device(gin_dev).name.clone(),
            gin_s: gin,
            branches: rows,
            r_out_ohm: r_out,
            gain: gain.abs(),
            gain_db: to_db(gain),
        });
    }
    Ok(PerfReport {
        stages: reports,
        overall_gain: overall,
        overall_gain_db: to_db(overall),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ss(gm: f64, gd: f64) -> SmallSignal {
        SmallSignal { gm, gd }
    }

    #[test]
    fn single_transistor_gout_is_gd() {
        assert_eq!(stack_gout(&[ss(1e-4, 1e-5)]).unwrap(), 1e-5);
    }

    #[test]
    fn cascode_gout() {
        let g = stack_gout(&[ss(1e-4, 1e-5), ss(1e-4, 1e-5)]).unwrap();
        assert!((g - 1e-6).abs() < 1e-18);
        let g = stack_gout(&[ss(1.0, 5e-6), ss(2e-4, 2e-5)]).unwrap();
        assert!((g - 5e-7).abs() < 1e-18);
    }

    #[test]
    fn long_stack_is_unsupported() {
        let t = ss(1e-4, 1e-5);
        assert!(matches!(stack_gout(&[t, t, t]), Err(PerfError::Unsupported(_))));
    }

    #[test]
    fn resistance_and_gain() {
        let r = output_resistance(&[1e-6, 2e-6]);
        assert!((r - 333_333.333_333).abs() < 1e-3);
        assert!((output_resistance(&[1e-5]) - 1e5).abs() < 1e-9);
        let a: f64 = 1e-4 * 3.333e5;
        assert!((a - 33.33).abs() < 1e-9);
        assert!((to_db(a) - 30.457).abs() < 1e-3);
        assert!((to_db(a * a) - 60.913).abs() < 1e-3);
    }

    #[test]
    fn params_parse_and_validate() {
        let p = PerfParams::from_toml("MN5 = {gm = 1e-4, gd = 1e-6}\nP6 = { gm = 2e-4, gd = 3e-6 }\n").unwrap();
        assert_eq!(p.get("N5").unwrap().gm, 1e-4);
        assert_eq!(p.get("mp6").unwrap().gd, 3e-6);
        assert!(p.get("N1").is_none());
        assert!(matches!(
            PerfParams::from_toml("M1 = {gm = -1.0, gd = 1e-6}"),
            Err(PerfError::InvalidParams { .. })
        ));
        assert!(matches!(PerfParams::from_toml("M1 = 3"), Err(PerfError::Format(_))));
    }
}
