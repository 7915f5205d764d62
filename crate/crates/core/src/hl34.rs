//! HL3/HL4 recognition: transconductances, loads, stage biases, stages,
//! circuit bias and capacitor roles, plus the full `decompose` pipeline.

use std::collections::{BTreeMap, BTreeSet};

use crate::block::{stack_pins, BlockDoping, BlockType, Child, Decomposition, Stack, StageRecord};
use crate::hl1::recognize_hl1;
use crate::hl2::{recognize_hl2, DpInfo, Hl2};
use crate::netlist::{Doping, NetId, Netlist};

/// Number of gate-gate ties between two differential pairs.
fn gate_ties(n: &Netlist, a: &DpInfo, b: &DpInfo) -> usize {
    let ga = [n.device(a.pair.a).g(), n.device(a.pair.b).g()];
    let gb = [n.device(b.pair.a).g(), n.device(b.pair.b).g()];
    ga.iter().map(|x| gb.iter().filter(|y| *y == x).count()).sum()
}

/// Groups differential pairs into non-inverting transconductances. Returns
/// the groups and the pairs that were tied to others without matching any
/// transconductance form.
pub fn classify_transconductances(n: &Netlist, dps: &[DpInfo]) -> (Vec<(BlockType, Vec<usize>)>, Vec<usize>) {
    let k = dps.len();
    let mut used = vec![false; k];
    let mut out = Vec::new();
    for i in 0..k {
        if (0..k).all(|j| j == i || gate_ties(n, &dps[i], &dps[j]) == 0) {
            used[i] = true;
            out.push((BlockType::TcS, vec![i]));
        }
    }
    for i in 0..k {
        if used[i] {
            continue;
        }
        for j in i + 1..k {
            if used[j] {
                continue;
            }
            let (a, b) = (&dps[i], &dps[j]);
            let ga: BTreeSet<NetId> = [n.device(a.pair.a).g(), n.device(a.pair.b).g()].into();
            let gb: BTreeSet<NetId> = [n.device(b.pair.a).g(), n.device(b.pair.b).g()].into();
            let t = if a.doping != b.doping && ga == gb && ga.len() == 2 {
                BlockType::TcC
            } else if a.doping == b.doping && gate_ties(n, a, b) == 1 {
                BlockType::TcCmfb
            } else {
                continue;
            };
            used[i] = true;
            used[j] = true;
            out.push((t, vec![i, j]));
            break;
        }
    }
    out.sort_by_key(|(_, v)| v[0]);
    let stray = (0..k).filter(|&i| !used[i]).collect();
    (out, stray)
}

fn is_subchain(small: &Stack, big: &Stack) -> bool {
    small.len() < big.len() && small.0.iter().all(|t| big.0.contains(t))
}

struct Tc {
    block: usize,
    btype: BlockType,
    dps: Vec<usize>,
    outputs: Vec<NetId>,
    tails: Vec<NetId>,
}

struct StageCtx<'a> {
    n: Netlist,
    hl2: &'a Hl2,
    /// Devices already placed in an HL3 block.
    used: BTreeSet<usize>,
}

impl StageCtx<'_> {
    fn stack_children(&self, s: &Stack) -> Vec<Child> {
        s.0.iter()
            .map(|&t| Child::Block(self.hl2.hl1_of[t].expect("classified")))
            .collect()
    }

    fn ts_block(&self, dec: &mut Decomposition, s: &Stack) -> usize {
        let pins = stack_pins(&self.n, s).expect("valid stack");
        dec.add(BlockType::Ts, self.stack_children(s), pins, Some(s.clone()))
    }

    fn free(&self, s: &Stack) -> bool {
        s.0.iter().all(|t| !self.used.contains(t))
    }

    fn nt_only(&self, dec: &Decomposition, s: &Stack) -> bool {
        s.0.iter()
            .all(|&t| self.hl2.hl1_of[t].is_some_and(|b| dec.block(b).btype == BlockType::Nt))
    }
}

/// Builds the load for one transconductance. Returns the load block and the
/// harvested maximal stacks, or `None` when nothing qualifies.
fn find_load(dec: &mut Decomposition, ctx: &StageCtx, tc: &Tc) -> Option<(usize, Vec<Stack>)> {
    let n = &ctx.n;
    let mut nets = BTreeSet::new();
    let mut gccs = Vec::new();
    for &d in &tc.dps {
        if let Some(v) = ctx.hl2.vdp_of(d) {
            nets.insert(n.device(v.upper.0).d());
            nets.insert(n.device(v.upper.1).d());
            gccs.push((v.gcc_block, [v.upper.0, v.upper.1]));
        } else {
            let p = ctx.hl2.dps[d].pair;
            nets.insert(n.device(p.a).d());
            nets.insert(n.device(p.b).d());
        }
    }
    let outs: BTreeSet<NetId> = tc.outputs.iter().copied().collect();
    let harvested: Vec<&Stack> = ctx
        .hl2
        .stacks
        .iter()
        .filter(|s| {
            if !nets.contains(&s.drain(n)) || !ctx.free(s) {
                return false;
            }
            let src = s.source(n);
            match s.doping(n) {
                Some(Doping::N) => src == n.gnd() || outs.contains(&src),
                Some(Doping::P) => src == n.vdd() || outs.contains(&src),
                None => false,
            }
        })
        .collect();
    let maximal: Vec<Stack> = harvested
        .iter()
        .filter(|s| !harvested.iter().any(|o| is_subchain(s, o)))
        .map(|s| (*s).clone())
        .collect();
    if maximal.is_empty() {
        return None;
    }
    let mut parts = Vec::new();
    for doping in [Doping::N, Doping::P] {
        let stacks: Vec<&Stack> = maximal.iter().filter(|s| s.doping(n) == Some(doping)).collect();
        if stacks.is_empty() {
            continue;
        }
        let mut children = Vec::new();
        let mut rest: Vec<Stack> = Vec::new();
        let gcc = gccs
            .iter()
            .find(|(_, t)| n.device(t[0]).doping() == Some(doping));
        for s in &stacks {
            match gcc {
                Some((_, t)) => {
                    let r: Vec<usize> = s.0.iter().copied().filter(|d| !t.contains(d)).collect();
                    if !r.is_empty() {
                        rest.push(Stack(r));
                    }
                }
                None => rest.push((*s).clone()),
            }
        }
        if let Some((b, _)) = gcc {
            children.push(Child::Block(*b));
        }
        // mirrors first, then plain biases, then raw stacks
        for &cm in &ctx.hl2.cm {
            let parts: Vec<Stack> = dec
                .block(cm)
                .children
                .iter()
                .filter_map(|c| match *c {
                    Child::Block(b) => dec.block(b).stack.clone(),
                    Child::Device(_) => None,
                })
                .collect();
            if parts.len() == 2 && parts.iter().all(|p| rest.contains(p)) {
                rest.retain(|r| !parts.contains(r));
                children.push(Child::Block(cm));
            }
        }
        for s in &rest {
            let b = ctx
                .hl2
                .block_for_stack(dec, s, BlockType::Vb)
                .or_else(|| ctx.hl2.block_for_stack(dec, s, BlockType::Cb))
                .unwrap_or_else(|| ctx.ts_block(dec, s));
            children.push(Child::Block(b));
        }
        let mut pins = BTreeMap::new();
        for (i, s) in stacks.iter().enumerate() {
            pins.insert(format!("out_{}", i + 1), s.drain(n));
        }
        parts.push(Child::Block(dec.add(BlockType::LoadPart, children, pins, None)));
    }
    let pins = nets
        .iter()
        .enumerate()
        .map(|(i, &net)| (format!("out_{}", i + 1), net))
        .collect();
    Some((dec.add(BlockType::Load, parts, pins, None), maximal))
}

fn classify_stage(tc: BlockType, tcd: Option<BlockDoping>, bd: Option<BlockDoping>, ld: Option<BlockDoping>) -> Option<BlockType> {
    use BlockDoping::*;
    let single = |d: Option<BlockDoping>| matches!(d, Some(N | P));
    match tc {
        BlockType::TcS if single(tcd) && tcd == bd && ld != tcd => Some(BlockType::AS),
        BlockType::TcC if tcd == Some(Mixed) && bd == Some(Mixed) && ld == Some(Mixed) => Some(BlockType::AC),
        BlockType::TcCmfb if single(tcd) && tcd == bd && single(ld) && ld != tcd => Some(BlockType::ACmfb),
        _ => None,
    }
}

/// Runs HL3/HL4 recognition on top of a completed HL2 pass.
pub fn recognize_hl34(dec: &mut Decomposition, hl2: &Hl2) {
    let n = dec.netlist().clone();
    let mut ctx = StageCtx {
        n: n.clone(),
        hl2,
        used: BTreeSet::new(),
    };

    // non-inverting transconductances
    let (groups, stray) = classify_transconductances(&n, &hl2.dps);
    for i in stray {
        let id = dec.block(hl2.dps[i].block).id.clone();
        dec.note("tc-unmatched", format!("{id} is gate-tied to another pair but forms no transconductance"));
    }
    let mut tcs = Vec::new();
    for (t, members) in groups {
        let mut outputs = BTreeSet::new();
        let mut tails = BTreeSet::new();
        let mut pins = BTreeMap::new();
        let mut children = Vec::new();
        for (k, &d) in members.iter().enumerate() {
            let dp = &hl2.dps[d];
            outputs.insert(n.device(dp.pair.a).d());
            outputs.insert(n.device(dp.pair.b).d());
            tails.insert(dp.tail);
            pins.insert(format!("s_{}", k + 1), dp.tail);
            children.push(Child::Block(dp.block));
        }
        let first = &hl2.dps[members[0]];
        pins.insert("in_1".into(), n.device(first.pair.a).g());
        pins.insert("in_2".into(), n.device(first.pair.b).g());
        for (k, o) in outputs.iter().enumerate() {
            pins.insert(format!("out_{}", k + 1), *o);
        }
        let block = dec.add(t, children, pins, None);
        tcs.push(Tc {
            block,
            btype: t,
            dps: members,
            outputs: outputs.into_iter().collect(),
            tails: tails.into_iter().collect(),
        });
    }
    for tc in &tcs {
        ctx.used.extend(dec.block(tc.block).devices.iter().copied());
    }

    // loads, stage biases and non-inverting stages
    let mut stages: Vec<StageRecord> = Vec::new();
    for tc in &tcs {
        let tc_id = dec.block(tc.block).id.clone();
        let Some((load, load_stacks)) = find_load(dec, &ctx, tc) else {
            dec.diagnose("no-load", format!("{tc_id} has no load candidates"), vec![tc_id]);
            continue;
        };
        ctx.used.extend(dec.block(load).devices.iter().copied());
        let tc_doping = dec.block(tc.block).doping;
        let cbs: Vec<usize> = hl2
            .cb
            .iter()
            .copied()
            .filter(|&b| {
                let s = dec.block(b).stack.as_ref().expect("stack");
                tc.tails.contains(&s.drain(&n)) && ctx.free(s)
            })
            .collect();
        if cbs.is_empty() {
            dec.diagnose("no-stage-bias", format!("{tc_id} has no current bias at its tail"), vec![tc_id]);
            continue;
        }
        let mut pins = BTreeMap::new();
        for (k, &b) in cbs.iter().enumerate() {
            let s = dec.block(b).stack.clone().expect("stack");
            pins.insert(format!("out_{}", k + 1), s.drain(&n));
            for (l, g) in s.gates(&n).enumerate() {
                pins.insert(format!("in_{}_{}", k + 1, l + 1), g);
            }
        }
        let bias = dec.add(
            BlockType::StageBias,
            cbs.iter().map(|&b| Child::Block(b)).collect(),
            pins,
            None,
        );
        dec.set_variant(bias, BlockType::BiasC);
        ctx.used.extend(dec.block(bias).devices.iter().copied());

        let stype = classify_stage(
            tc.btype,
            tc_doping,
            dec.block(bias).doping,
            dec.block(load).doping,
        );
        let Some(stype) = stype else {
            let ids = vec![tc_id, dec.block(load).id.clone(), dec.block(bias).id.clone()];
            dec.diagnose(
                "stage-doping",
                format!("doping pattern of {} matches no stage type", ids.join(", ")),
                ids,
            );
            continue;
        };
        let mut outputs: Vec<NetId> = dec.block(load).pins.values().copied().collect();
        for o in &tc.outputs {
            if !outputs.contains(o) {
                outputs.push(*o);
            }
        }
        let mut pins: BTreeMap<String, NetId> = BTreeMap::new();
        pins.insert("in_1".into(), dec.block(tc.block).pins["in_1"]);
        pins.insert("in_2".into(), dec.block(tc.block).pins["in_2"]);
        for (k, o) in outputs.iter().enumerate() {
            pins.insert(format!("out_{}", k + 1), *o);
        }
        let block = dec.add_with_id(
            String::new(),
            stype,
            vec![Child::Block(tc.block), Child::Block(load), Child::Block(bias)],
            pins,
            None,
        );
        stages.push(StageRecord {
            block,
            stype,
            tc: tc.block,
            load: Some(load),
            bias,
            ordinal: (stype != BlockType::ACmfb).then_some(1),
            outputs,
            load_stacks,
        });
    }

    recognize_inverting(dec, &mut ctx, &mut stages);

    // stage ids
    let mut per_ordinal: BTreeMap<Option<u32>, usize> = BTreeMap::new();
    for s in &stages {
        *per_ordinal.entry(s.ordinal).or_default() += 1;
    }
    let mut seen: BTreeMap<Option<u32>, usize> = BTreeMap::new();
    for s in &stages {
        let k = seen.entry(s.ordinal).or_default();
        *k += 1;
        let base = match s.ordinal {
            Some(o) => format!("a_{o}"),
            None => "a_CMFB".to_string(),
        };
        let id = if per_ordinal[&s.ordinal] > 1 {
            format!("{base}_{k}")
        } else {
            base
        };
        dec.set_id(s.block, id);
    }

    let stage_devices: BTreeSet<usize> = stages
        .iter()
        .flat_map(|s| dec.block(s.block).devices.iter().copied())
        .collect();
    let circuit_bias = circuit_bias(dec, hl2, &stage_devices);
    let caps = capacitor_roles(dec, &stages);

    if stages.is_empty() {
        if n.transistor_count() > 0 {
            dec.diagnose("no-stage", "no amplification stage was recognized".into(), vec![]);
        }
    } else {
        let mut order: Vec<&StageRecord> = stages.iter().collect();
        order.sort_by_key(|s| (s.ordinal.is_none(), s.ordinal));
        let mut children: Vec<Child> = order.iter().map(|s| Child::Block(s.block)).collect();
        children.extend(circuit_bias.map(Child::Block));
        children.extend(caps.into_iter().map(Child::Block));
        let pins = n.io().clone().into_iter().collect();
        dec.add(BlockType::Opamp, children, pins, None);
    }
    dec.stages = stages;
}

/// Inverting-stage fixed point, including the single search for a
/// voltage-biased second stage in symmetrical op-amps.
fn recognize_inverting(dec: &mut Decomposition, ctx: &mut StageCtx, stages: &mut Vec<StageRecord>) {
    let n = ctx.n.clone();
    let hl2 = ctx.hl2;
    let mut pool: Vec<usize> = (0..hl2.invs.len()).collect();
    let mut searched_v = false;
    loop {
        let mut progress = false;
        let mut i = 0;
        while i < pool.len() {
            let inv = &hl2.invs[pool[i]];
            let all = Stack(inv.p.0.iter().chain(inv.n.0.iter()).copied().collect());
            if !ctx.free(&all) {
                pool.remove(i);
                continue;
            }
            let feeder = |s: &Stack| -> Option<u32> {
                let g = s.gate(&n, 0);
                stages
                    .iter()
                    .filter(|st| st.ordinal.is_some() && st.outputs.contains(&g))
                    .filter_map(|st| st.ordinal)
                    .max()
            };
            let mut options = Vec::new();
            for (tc, other) in [(&inv.p, &inv.n), (&inv.n, &inv.p)] {
                if let (Some(ord), Some(cb)) = (feeder(tc), hl2.block_for_stack(dec, other, BlockType::Cb)) {
                    options.push((tc.clone(), cb, ord));
                }
            }
            if options.is_empty() {
                i += 1;
                continue;
            }
            if options.len() == 2 {
                options.sort_by_key(|(s, _, _)| s.bottom());
                let id = dec.block(inv.block).id.clone();
                dec.note(
                    "inv-ambiguous",
                    format!("both stacks of {id} qualify as transconductance; using the lower device"),
                );
            }
            let (tc_stack, cb, ord) = options.swap_remove(0);
            pool.remove(i);
            let rec = add_inverting_stage(dec, ctx, BlockType::AInvC, &tc_stack, cb, BlockType::BiasC, ord + 1);
            stages.push(rec);
            progress = true;
            let n_inv = stages.iter().filter(|s| s.stype == BlockType::AInvC).count();
            if n_inv == 1 && !searched_v {
                searched_v = true;
                if let Some(rec) = find_voltage_biased_stage(dec, ctx, stages) {
                    stages.push(rec);
                }
            }
        }
        if !progress {
            break;
        }
    }
}

fn add_inverting_stage(
    dec: &mut Decomposition,
    ctx: &mut StageCtx,
    stype: BlockType,
    tc_stack: &Stack,
    bias_block: usize,
    variant: BlockType,
    ordinal: u32,
) -> StageRecord {
    let n = &ctx.n;
    let pins = stack_pins(n, tc_stack).expect("valid stack");
    let tc = dec.add(BlockType::TcInv, ctx.stack_children(tc_stack), pins, Some(tc_stack.clone()));
    let bstack = dec.block(bias_block).stack.clone().expect("stack");
    let mut bpins = BTreeMap::from([("out_1".to_string(), bstack.drain(n))]);
    for (l, g) in bstack.gates(n).enumerate() {
        bpins.insert(format!("in_{}", l + 1), g);
    }
    let bias = dec.add(BlockType::StageBias, vec![Child::Block(bias_block)], bpins, None);
    dec.set_variant(bias, variant);
    let out = tc_stack.drain(n);
    let pins = BTreeMap::from([("in_1".to_string(), tc_stack.gate(n, 0)), ("out_1".to_string(), out)]);
    let block = dec.add_with_id(String::new(), stype, vec![Child::Block(tc), Child::Block(bias)], pins, None);
    ctx.used.extend(dec.block(block).devices.iter().copied());
    StageRecord {
        block,
        stype,
        tc,
        load: None,
        bias,
        ordinal: Some(ordinal),
        outputs: vec![out],
        load_stacks: Vec::new(),
    }
}

fn find_voltage_biased_stage(dec: &mut Decomposition, ctx: &mut StageCtx, stages: &[StageRecord]) -> Option<StageRecord> {
    let n = ctx.n.clone();
    let hl2 = ctx.hl2;
    let first = stages.iter().find(|s| s.stype == BlockType::AS && s.ordinal == Some(1))?;
    let load = dec.block(first.load?);
    if load.children.len() != 1 {
        return None;
    }
    let Child::Block(part) = load.children[0] else { return None };
    let load_vbs: Vec<Stack> = dec
        .block(part)
        .children
        .iter()
        .filter_map(|c| match *c {
            Child::Block(b) if dec.block(b).btype == BlockType::Vb => dec.block(b).stack.clone(),
            _ => None,
        })
        .collect();
    if load_vbs.len() < 2 {
        return None;
    }
    let inv_c = stages.iter().find(|s| s.stype == BlockType::AInvC)?;
    let inv_in = dec.block(inv_c.block).pins["in_1"];
    let bias_stack = match dec.block(inv_c.bias).children[0] {
        Child::Block(b) => dec.block(b).stack.clone()?,
        Child::Device(_) => return None,
    };
    let inputs: BTreeSet<NetId> = load_vbs
        .iter()
        .map(|v| v.gate(&n, 0))
        .filter(|g| *g != inv_in)
        .collect();
    for ts in &hl2.stacks {
        if !inputs.contains(&ts.gate(&n, 0)) || !ctx.free(ts) || !ctx.nt_only(dec, ts) {
            continue;
        }
        for &vb in &hl2.vb {
            let vs = dec.block(vb).stack.clone().expect("stack");
            if vs.drain(&n) != ts.drain(&n)
                || vs.doping(&n) == ts.doping(&n)
                || !ctx.free(&vs)
                || vs.len() > bias_stack.len()
                || (0..vs.len()).any(|q| vs.gate(&n, q) != bias_stack.gate(&n, q))
            {
                continue;
            }
            let ord = inv_c.ordinal.unwrap_or(2);
            return Some(add_inverting_stage(dec, ctx, BlockType::AInvV, ts, vb, BlockType::BiasV, ord));
        }
    }
    None
}

/// Collects the biases outside every stage into the circuit bias.
fn circuit_bias(dec: &mut Decomposition, hl2: &Hl2, stage_devices: &BTreeSet<usize>) -> Option<usize> {
    let n = dec.netlist().clone();
    let mut covered = stage_devices.clone();
    let mut members = Vec::new();
    for &b in hl2.vb.iter().chain(hl2.cb.iter()) {
        let devs = &dec.block(b).devices;
        if devs.iter().any(|d| covered.contains(d)) {
            continue;
        }
        covered.extend(devs.iter().copied());
        members.push(b);
    }
    if members.is_empty() {
        return None;
    }
    let vbs: Vec<Stack> = members
        .iter()
        .filter(|&&b| dec.block(b).btype == BlockType::Vb)
        .filter_map(|&b| dec.block(b).stack.clone())
        .collect();
    let cbs: Vec<(usize, Stack)> = members
        .iter()
        .filter(|&&b| dec.block(b).btype == BlockType::Cb)
        .filter_map(|&b| Some((b, dec.block(b).stack.clone()?)))
        .collect();
    let mut pins = BTreeMap::new();
    for (k, v) in vbs.iter().enumerate() {
        pins.insert(format!("in_{}", k + 1), v.drain(&n));
    }
    let mut out_gates = BTreeSet::new();
    for v in &vbs {
        out_gates.extend(v.gates(&n));
    }
    for (k, g) in out_gates.iter().enumerate() {
        pins.insert(format!("out_{}", k + 1), *g);
    }
    let block = dec.add(BlockType::CircuitBias, members.iter().map(|&b| Child::Block(b)).collect(), pins, None);
    dec.set_variant(block, BlockType::BiasV);
    let id = dec.block(block).id.clone();
    if vbs.len() <= cbs.len() {
        dec.note("b_O-structure", format!("{id} has {} voltage and {} current biases", vbs.len(), cbs.len()));
    }
    for (b, c) in &cbs {
        let dd = vbs
            .iter()
            .any(|v| v.drain(&n) == c.drain(&n) && v.doping(&n) != c.doping(&n));
        let gg = vbs.iter().any(|v| {
            v.doping(&n) == c.doping(&n) && v.len() >= c.len() && (0..c.len()).all(|s| v.gate(&n, s) == c.gate(&n, s))
        });
        if !(dd && gg) {
            let cid = dec.block(*b).id.clone();
            dec.note(
                "b_O-structure",
                format!("{cid} in {id} lacks an opposite-doping drain partner or equal-doping gate partner"),
            );
        }
    }
    Some(block)
}

fn capacitor_roles(dec: &mut Decomposition, stages: &[StageRecord]) -> Vec<usize> {
    let n = dec.netlist().clone();
    let caps: Vec<usize> = (0..dec.blocks().len())
        .filter(|&b| dec.block(b).btype == BlockType::Cap)
        .collect();
    let max_ord = stages.iter().filter_map(|s| s.ordinal).max();
    let mut out = Vec::new();
    for cap in caps {
        let (p1, p2) = (dec.block(cap).pins["p1"], dec.block(cap).pins["p2"]);
        let on = |net: NetId| -> Vec<usize> {
            (0..stages.len()).filter(|&i| stages[i].outputs.contains(&net)).collect()
        };
        let (s1, s2) = (on(p1), on(p2));
        let compensation = s1.iter().any(|a| s2.iter().any(|b| a != b));
        let last = |net: NetId| {
            stages
                .iter()
                .any(|s| s.ordinal.is_some() && s.ordinal == max_ord && s.outputs.contains(&net))
        };
        let load = (p2 == n.gnd() && last(p1)) || (p1 == n.gnd() && last(p2));
        let t = if compensation {
            BlockType::CompCap
        } else if load {
            BlockType::LoadCap
        } else {
            let name = n.device(dec.block(cap).devices[0]).name.clone();
            dec.diagnose(
                "capacitor-role",
                format!("{name} is neither between two stage outputs nor a load on the last stage"),
                vec![name],
            );
            continue;
        };
        let pins = BTreeMap::from([("p1".to_string(), p1), ("p2".to_string(), p2)]);
        out.push(dec.add(t, vec![Child::Block(cap)], pins, None));
    }
    out
}

/// Full recognition pipeline.
pub fn decompose(netlist: &Netlist) -> Decomposition {
    let mut dec = Decomposition::new(netlist.clone());
    if netlist.devices().is_empty() {
        dec.diagnose("empty-netlist", "netlist has no devices".into(), vec![]);
        return dec;
    }
    let hl1 = recognize_hl1(&mut dec);
    let hl2 = recognize_hl2(&mut dec, hl1);
    recognize_hl34(&mut dec, &hl2);
    dec
}
