//! HL2 recognition: transistor stacks, biases, mirrors, differential pairs,
//! inverters and the irrelevant-assignment filter.

use std::collections::{BTreeMap, BTreeSet};

use crate::block::{stack_pins, BlockType, Child, Decomposition, Stack};
use crate::netlist::{Doping, NetId, Netlist};

/// All chains of 1..=3 transistors of one doping that form a valid stack.
/// `eligible[i]` marks devices classified as nt or dt. Sorted by length,
/// then by device indices.
pub fn find_transistor_stacks(n: &Netlist, eligible: &[bool], doping: Doping) -> Vec<Stack> {
    let members: Vec<usize> = (0..n.devices().len())
        .filter(|&i| eligible[i] && n.device(i).doping() == Some(doping))
        .collect();
    let mut by_source: BTreeMap<NetId, Vec<usize>> = BTreeMap::new();
    for &t in &members {
        by_source.entry(n.device(t).s()).or_default().push(t);
    }
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = members.iter().map(|&t| vec![t]).collect();
    for _ in 0..3 {
        let mut next = Vec::new();
        for chain in frontier {
            let top = n.device(*chain.last().expect("nonempty"));
            if let Some(ups) = by_source.get(&top.d()) {
                for &u in ups {
                    let up = n.device(u);
                    // the new top may not gate-connect to, or drain into, any lower level
                    let blocked = chain.iter().any(|&t| {
                        let low = n.device(t);
                        t == u || up.g() == low.d() || up.d() == low.s()
                    });
                    if blocked {
                        continue;
                    }
                    let mut c = chain.clone();
                    c.push(u);
                    next.push(c);
                }
            }
            out.push(Stack(chain));
        }
        frontier = next.into_iter().filter(|c| c.len() <= 3).collect();
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

fn gate_set(n: &Netlist, s: &Stack) -> BTreeSet<NetId> {
    s.gates(n).collect()
}

fn disjoint(a: &Stack, b: &Stack) -> bool {
    a.0.iter().all(|t| !b.0.contains(t))
}

/// Voltage-bias side of the pair test: the drain of `k` drives a gate of
/// `l` and every gate of `k` is tied to a gate of `l`.
fn vb_pair(n: &Netlist, k: &Stack, l: &Stack) -> bool {
    let gl = gate_set(n, l);
    gl.contains(&k.drain(n)) && k.gates(n).all(|g| gl.contains(&g))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BiasSets {
    /// Indices into the stack list.
    pub vb: BTreeSet<usize>,
    pub cb: BTreeSet<usize>,
    /// Voltage biases that were only admitted through an identified current bias.
    pub secondary: BTreeSet<usize>,
    pub passes: usize,
}

/// Fixed-point voltage/current bias search over the stacks of one doping.
///
/// A current bias must not drive, with its drain, any gate of a stack that
/// can act as a voltage bias. Restricting the drain test to those stacks
/// keeps amplifying transistors whose gates sit on a mirror output from
/// vetoing the mirror.
pub fn recognize_biases(n: &Netlist, stacks: &[Stack]) -> BiasSets {
    let m = stacks.len();
    let mut pair = vec![false; m * m];
    for k in 0..m {
        for l in 0..m {
            if k != l
                && stacks[k].doping(n) == stacks[l].doping(n)
                && disjoint(&stacks[k], &stacks[l])
                && vb_pair(n, &stacks[k], &stacks[l])
            {
                pair[k * m + l] = true;
            }
        }
    }
    let mut candidate_gates: BTreeMap<Option<Doping>, BTreeSet<NetId>> = BTreeMap::new();
    for k in 0..m {
        if (0..m).any(|l| pair[k * m + l]) {
            candidate_gates
                .entry(stacks[k].doping(n))
                .or_default()
                .extend(stacks[k].gates(n));
        }
    }
    let cb_ok = |k: usize, l: usize| -> bool {
        let (sk, sl) = (&stacks[k], &stacks[l]);
        let mut allowed = gate_set(n, sk);
        allowed.insert(sk.drain(n));
        sl.gates(n).all(|g| allowed.contains(&g))
            && !candidate_gates
                .get(&sl.doping(n))
                .is_some_and(|g| g.contains(&sl.drain(n)))
    };
    let mut out = BiasSets::default();
    loop {
        out.passes += 1;
        let mut changed = false;
        for k in 0..m {
            for l in 0..m {
                if !pair[k * m + l] {
                    continue;
                }
                if cb_ok(k, l) {
                    changed |= out.vb.insert(k);
                    changed |= out.cb.insert(l);
                    out.secondary.remove(&k);
                } else if out.cb.contains(&l) && out.vb.insert(k) {
                    out.secondary.insert(k);
                    changed = true;
                }
            }
        }
        if !changed || out.passes > m {
            break;
        }
    }
    out
}

/// Current mirror test between a voltage bias and a current bias.
pub fn is_current_mirror(n: &Netlist, vb: &Stack, cb: &Stack) -> bool {
    if vb.doping(n) != cb.doping(n)
        || !disjoint(vb, cb)
        || vb.source(n) != cb.source(n)
        || cb.len() < vb.len()
    {
        return false;
    }
    if (0..vb.len()).any(|l| vb.gate(n, l) != cb.gate(n, l)) {
        return false;
    }
    if !cb.gates(n).any(|g| g == vb.drain(n)) {
        return false;
    }
    let drains: Vec<NetId> = vb.0.iter().chain(cb.0.iter()).map(|&t| n.device(t).d()).collect();
    (0..vb.len() - 1).all(|j| {
        let g = vb.gate(n, j);
        drains.iter().filter(|&&d| d == g).count() == 1
    })
}

/// Pairs (vb index, cb index) into the given lists that form current mirrors.
pub fn recognize_current_mirrors(n: &Netlist, vbs: &[Stack], cbs: &[Stack]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, v) in vbs.iter().enumerate() {
        for (j, c) in cbs.iter().enumerate() {
            if is_current_mirror(n, v, c) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Two-transistor structure; `a < b` by device index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pair {
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cascode {
    pub dp: usize,
    pub gcc: usize,
    /// gcc transistor sitting on the drain of `dp.a`, then on `dp.b`.
    pub upper: (usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiffPairs {
    pub dp: Vec<Pair>,
    pub gcc: Vec<Pair>,
    pub vdp: Vec<Cascode>,
}

pub fn is_gcc(n: &Netlist, a: usize, b: usize) -> bool {
    let (x, y) = (n.device(a), n.device(b));
    x.doping() == y.doping()
        && x.g() == y.g()
        && x.d() != y.d()
        && x.s() != y.s()
        && x.d() != y.s()
        && x.s() != y.d()
}

/// Differential pairs over the normal transistors `nt`, their gate
/// connected couples, and the cascode combinations of both.
pub fn recognize_differential_pairs(n: &Netlist, nt: &[usize], cbs: &[Stack]) -> DiffPairs {
    let mut out = DiffPairs::default();
    for (i, &a) in nt.iter().enumerate() {
        for &b in &nt[i + 1..] {
            let (x, y) = (n.device(a), n.device(b));
            if x.doping() != y.doping() || x.s() != y.s() {
                continue;
            }
            let crossed = x.d() == y.d() || x.d() == y.g() || x.g() == y.d() || x.g() == y.g();
            let biased = cbs
                .iter()
                .any(|c| c.drain(n) == x.s() && c.doping(n) == x.doping() && !c.contains(a) && !c.contains(b));
            if !crossed && biased {
                out.dp.push(Pair { a: a.min(b), b: a.max(b) });
            }
        }
    }
    let mut gcc_all = Vec::new();
    for (i, &a) in nt.iter().enumerate() {
        for &b in &nt[i + 1..] {
            if is_gcc(n, a, b) {
                gcc_all.push(Pair { a: a.min(b), b: a.max(b) });
            }
        }
    }
    let mut used: BTreeMap<Pair, usize> = BTreeMap::new();
    for (di, dp) in out.dp.iter().enumerate() {
        let (da, db) = (n.device(dp.a), n.device(dp.b));
        let dp_nets = [da.s(), da.g(), db.g()];
        for g in &gcc_all {
            if [g.a, g.b].iter().any(|t| *t == dp.a || *t == dp.b) {
                continue;
            }
            let (ga, gb) = (n.device(g.a), n.device(g.b));
            let upper = if da.d() == ga.s() && db.d() == gb.s() {
                (g.a, g.b)
            } else if da.d() == gb.s() && db.d() == ga.s() {
                (g.b, g.a)
            } else {
                continue;
            };
            let gcc_nets = [ga.g(), ga.d(), gb.d()];
            if dp_nets.iter().any(|x| gcc_nets.contains(x)) {
                continue;
            }
            let next = used.len();
            let gi = *used.entry(*g).or_insert(next);
            out.vdp.push(Cascode { dp: di, gcc: gi, upper });
        }
    }
    let mut gccs: Vec<(usize, Pair)> = used.into_iter().map(|(p, i)| (i, p)).collect();
    gccs.sort();
    out.gcc = gccs.into_iter().map(|(_, p)| p).collect();
    out
}

/// Inverter pairs (p stack, n stack) among the given stacks.
pub fn recognize_inverters(n: &Netlist, stacks: &[Stack], nt_only: &dyn Fn(usize) -> bool) -> Vec<(Stack, Stack)> {
    let eligible: Vec<&Stack> = stacks.iter().filter(|s| s.0.iter().all(|&t| nt_only(t))).collect();
    let mut out = Vec::new();
    for p in eligible.iter().filter(|s| s.doping(n) == Some(Doping::P) && s.source(n) == n.vdd()) {
        for q in eligible.iter().filter(|s| s.doping(n) == Some(Doping::N) && s.source(n) == n.gnd()) {
            if p.drain(n) != q.drain(n) {
                continue;
            }
            let all: Vec<usize> = p.0.iter().chain(q.0.iter()).copied().collect();
            let clash = all.iter().any(|&i| {
                all.iter().any(|&j| {
                    let (x, y) = (n.device(i), n.device(j));
                    i != j && (x.g() == y.g() || x.d() == y.g() || x.s() == y.s())
                })
            });
            if !clash {
                out.push(((*p).clone(), (*q).clone()));
            }
        }
    }
    out
}

/// Indices of sets that are strict subsets of another set in the list.
pub fn irrelevant(sets: &[BTreeSet<usize>]) -> BTreeSet<usize> {
    (0..sets.len())
        .filter(|&i| {
            sets.iter()
                .enumerate()
                .any(|(j, o)| j != i && sets[i].len() < o.len() && sets[i].is_subset(o))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DpInfo {
    pub block: usize,
    pub pair: Pair,
    pub tail: NetId,
    pub doping: Doping,
}

#[derive(Debug, Clone)]
pub struct VdpInfo {
    pub block: usize,
    /// Index into `Hl2::dps`.
    pub dp: usize,
    pub gcc_block: usize,
    pub upper: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct InvInfo {
    pub block: usize,
    pub p: Stack,
    pub n: Stack,
}

/// HL2 outcome plus the intermediate data later levels build on.
#[derive(Debug, Clone, Default)]
pub struct Hl2 {
    pub hl1_of: Vec<Option<usize>>,
    /// Stacks that survive the differential-pair pruning.
    pub stacks: Vec<Stack>,
    pub dp_devices: BTreeSet<usize>,
    pub vb: Vec<usize>,
    pub cb: Vec<usize>,
    pub cm: Vec<usize>,
    pub dps: Vec<DpInfo>,
    pub vdps: Vec<VdpInfo>,
    pub invs: Vec<InvInfo>,
}

impl Hl2 {
    pub fn block_for_stack(&self, dec: &Decomposition, stack: &Stack, t: BlockType) -> Option<usize> {
        let list = match t {
            BlockType::Vb => &self.vb,
            BlockType::Cb => &self.cb,
            _ => return None,
        };
        list.iter().copied().find(|&b| dec.block(b).stack.as_ref() == Some(stack))
    }

    pub fn vdp_of(&self, dp: usize) -> Option<&VdpInfo> {
        self.vdps.iter().find(|v| v.dp == dp)
    }
}

fn stack_children(hl1_of: &[Option<usize>], s: &Stack) -> Vec<Child> {
    s.0.iter().map(|&t| Child::Block(hl1_of[t].expect("classified"))).collect()
}

fn pair_pins(n: &Netlist, p: Pair) -> BTreeMap<String, NetId> {
    let (x, y) = (n.device(p.a), n.device(p.b));
    BTreeMap::from([
        ("g_1".to_string(), x.g()),
        ("g_2".to_string(), y.g()),
        ("d_1".to_string(), x.d()),
        ("d_2".to_string(), y.d()),
        ("s_1".to_string(), x.s()),
        ("s_2".to_string(), y.s()),
    ])
}

/// Runs the full HL2 pass, adding kept blocks to `dec`.
pub fn recognize_hl2(dec: &mut Decomposition, hl1_of: Vec<Option<usize>>) -> Hl2 {
    let n = dec.netlist().clone();
    let kinds: Vec<Option<BlockType>> = hl1_of.iter().map(|b| b.map(|b| dec.block(b).btype)).collect();
    let kind = |t: usize| kinds[t];
    let eligible: Vec<bool> = (0..n.devices().len())
        .map(|t| matches!(kind(t), Some(BlockType::Nt | BlockType::Dt)))
        .collect();
    let nt: Vec<usize> = (0..n.devices().len()).filter(|&t| kind(t) == Some(BlockType::Nt)).collect();

    let mut stacks = find_transistor_stacks(&n, &eligible, Doping::N);
    stacks.extend(find_transistor_stacks(&n, &eligible, Doping::P));
    let bias = recognize_biases(&n, &stacks);
    dec.bias_passes = bias.passes;

    let cb_stacks: Vec<Stack> = bias.cb.iter().map(|&i| stacks[i].clone()).collect();
    let diff = recognize_differential_pairs(&n, &nt, &cb_stacks);
    let dp_devices: BTreeSet<usize> = diff.dp.iter().flat_map(|p| [p.a, p.b]).collect();
    let touches_dp = |s: &Stack| s.0.iter().any(|t| dp_devices.contains(t));

    let vb_stacks: Vec<Stack> = bias.vb.iter().map(|&i| stacks[i].clone()).filter(|s| !touches_dp(s)).collect();
    let cb_stacks: Vec<Stack> = cb_stacks.into_iter().filter(|s| !touches_dp(s)).collect();
    let pruned: Vec<Stack> = stacks.iter().filter(|s| !touches_dp(s)).cloned().collect();

    let mirrors = recognize_current_mirrors(&n, &vb_stacks, &cb_stacks);

    // irrelevant-assignment filter
    let sets = |v: &[Stack]| v.iter().map(Stack::device_set).collect::<Vec<_>>();
    let cm_sets: Vec<BTreeSet<usize>> = mirrors
        .iter()
        .map(|&(v, c)| vb_stacks[v].device_set().union(&cb_stacks[c].device_set()).copied().collect())
        .collect();
    let cm_drop = irrelevant(&cm_sets);
    let kept_mirrors: Vec<(usize, usize)> = mirrors
        .iter()
        .enumerate()
        .filter(|(i, _)| !cm_drop.contains(i))
        .map(|(_, m)| *m)
        .collect();
    let mut vb_drop = irrelevant(&sets(&vb_stacks));
    let mut cb_drop = irrelevant(&sets(&cb_stacks));
    for &(v, c) in &kept_mirrors {
        vb_drop.remove(&v);
        cb_drop.remove(&c);
    }

    let mut out = Hl2 {
        stacks: pruned.clone(),
        dp_devices: dp_devices.clone(),
        ..Default::default()
    };
    let mut vb_block = BTreeMap::new();
    for (i, s) in vb_stacks.iter().enumerate() {
        if vb_drop.contains(&i) {
            dec.note("irrelevant", format!("voltage bias {:?} is contained in a larger one", s.names(&n)));
            continue;
        }
        let pins = stack_pins(&n, s).expect("valid stack");
        let b = dec.add(BlockType::Vb, stack_children(&hl1_of, s), pins, Some(s.clone()));
        vb_block.insert(i, b);
        out.vb.push(b);
        let idx = stacks.iter().position(|x| x == s).expect("stack");
        if bias.secondary.contains(&idx) {
            dec.note("secondary-vb", format!("{} admitted through an identified current bias", dec.block(b).id));
        }
        vb_advisory(dec, &n, s, &vb_stacks, &cb_stacks, b);
    }
    let mut cb_block = BTreeMap::new();
    for (i, s) in cb_stacks.iter().enumerate() {
        if cb_drop.contains(&i) {
            dec.note("irrelevant", format!("current bias {:?} is contained in a larger one", s.names(&n)));
            continue;
        }
        let pins = stack_pins(&n, s).expect("valid stack");
        let b = dec.add(BlockType::Cb, stack_children(&hl1_of, s), pins, Some(s.clone()));
        cb_block.insert(i, b);
        out.cb.push(b);
        if kind(s.bottom()) == Some(BlockType::Dt) {
            dec.note(
                "cb-diode-bottom",
                format!("{} has a diode transistor at the bottom", dec.block(b).id),
            );
        }
    }
    for &(v, c) in &kept_mirrors {
        let (vs, cs) = (&vb_stacks[v], &cb_stacks[c]);
        let mut pins = BTreeMap::from([("s".to_string(), vs.source(&n)), ("out".to_string(), cs.drain(&n))]);
        for l in 0..cs.len() {
            pins.insert(format!("g_{}", l + 1), cs.gate(&n, l));
        }
        pins.insert("in".to_string(), vs.drain(&n));
        let b = dec.add(
            BlockType::Cm,
            vec![Child::Block(vb_block[&v]), Child::Block(cb_block[&c])],
            pins,
            None,
        );
        out.cm.push(b);
    }

    for p in &diff.dp {
        let doping = n.device(p.a).doping().expect("mosfet");
        let mut pins = pair_pins(&n, *p);
        let tail = n.device(p.a).s();
        pins.insert("s".to_string(), tail);
        let b = dec.add(
            BlockType::Dp,
            vec![Child::Block(hl1_of[p.a].expect("nt")), Child::Block(hl1_of[p.b].expect("nt"))],
            pins,
            None,
        );
        out.dps.push(DpInfo { block: b, pair: *p, tail, doping });
    }
    let mut gcc_blocks = Vec::new();
    for g in &diff.gcc {
        let mut pins = pair_pins(&n, *g);
        pins.insert("g".to_string(), n.device(g.a).g());
        let b = dec.add(
            BlockType::Gcc,
            vec![Child::Block(hl1_of[g.a].expect("nt")), Child::Block(hl1_of[g.b].expect("nt"))],
            pins,
            None,
        );
        gcc_blocks.push(b);
    }
    for v in &diff.vdp {
        let dp = &out.dps[v.dp];
        let t = if n.device(dp.pair.a).doping() == n.device(v.upper.0).doping() {
            BlockType::Cdp
        } else {
            BlockType::Fcdp
        };
        let (u1, u2) = (n.device(v.upper.0), n.device(v.upper.1));
        let pins = BTreeMap::from([
            ("s".to_string(), dp.tail),
            ("g_1".to_string(), n.device(dp.pair.a).g()),
            ("g_2".to_string(), n.device(dp.pair.b).g()),
            ("g_c".to_string(), u1.g()),
            ("d_1".to_string(), u1.d()),
            ("d_2".to_string(), u2.d()),
        ]);
        let b = dec.add(t, vec![Child::Block(dp.block), Child::Block(gcc_blocks[v.gcc])], pins, None);
        out.vdps.push(VdpInfo {
            block: b,
            dp: v.dp,
            gcc_block: gcc_blocks[v.gcc],
            upper: v.upper,
        });
    }

    let is_nt = |t: usize| kind(t) == Some(BlockType::Nt);
    for (p, q) in recognize_inverters(&n, &pruned, &is_nt) {
        let mut children = stack_children(&hl1_of, &p);
        children.extend(stack_children(&hl1_of, &q));
        let mut pins = BTreeMap::from([("out".to_string(), p.drain(&n))]);
        for l in 0..p.len() {
            pins.insert(format!("g_p_{}", l + 1), p.gate(&n, l));
        }
        for l in 0..q.len() {
            pins.insert(format!("g_n_{}", l + 1), q.gate(&n, l));
        }
        let b = dec.add(BlockType::Inv, children, pins, None);
        out.invs.push(InvInfo { block: b, p, n: q });
    }
    out.hl1_of = hl1_of;
    out
}

/// Advisory check of the gate-drain partner clause for voltage biases.
fn vb_advisory(dec: &mut Decomposition, n: &Netlist, s: &Stack, vbs: &[Stack], cbs: &[Stack], block: usize) {
    let biased: BTreeSet<usize> = vbs.iter().chain(cbs.iter()).flat_map(|x| x.0.iter().copied()).collect();
    for g in s.gates(n) {
        let partners: Vec<usize> = (0..n.devices().len())
            .filter(|&t| n.device(t).doping() == s.doping(n) && n.device(t).d() == g)
            .collect();
        if partners.len() != 1 || !biased.contains(&partners[0]) {
            dec.note(
                "vb-advisory",
                format!(
                    "{}: gate net {} has {} same-doping drain partner(s) inside biases",
                    dec.block(block).id,
                    n.net_name(g),
                    partners.iter().filter(|t| biased.contains(t)).count()
                ),
            );
        }
    }
}
