#![allow(dead_code)]
//! Brute-force HL2 oracle. Every predicate is evaluated directly over all
//! permutations of up to three transistors, and the bias fixed point is
//! replaced by its closed form: primary pairs never depend on loop state, so
//! the current biases are exactly the primary ones and a voltage bias is any
//! stack paired with a primary current bias.

use std::collections::{BTreeMap, BTreeSet};

use fbdecomp::{decompose, parse_netlist, BlockType, Doping, NetId, Netlist, NetlistConfig};

pub type Names = BTreeSet<String>;

#[derive(Clone, Copy)]
struct T {
    d: NetId,
    g: NetId,
    s: NetId,
    doping: Doping,
}

pub struct Oracle<'a> {
    n: &'a Netlist,
    t: Vec<Option<T>>,
}

impl<'a> Oracle<'a> {
    pub fn new(n: &'a Netlist) -> Self {
        let t = n
            .devices()
            .iter()
            .map(|dev| {
                let doping = dev.doping()?;
                let pin = |p| dev.pin(p).expect("mosfet pin");
                Some(T {
                    d: pin(fbdecomp::Pin::D),
                    g: pin(fbdecomp::Pin::G),
                    s: pin(fbdecomp::Pin::S),
                    doping,
                })
            })
            .collect();
        Oracle { n, t }
    }

    fn tr(&self, i: usize) -> T {
        self.t[i].expect("transistor")
    }

    fn is_nt(&self, i: usize) -> bool {
        self.t[i].is_some_and(|x| x.d != x.s && x.g != x.d && x.g != x.s)
    }

    fn is_dt(&self, i: usize) -> bool {
        self.t[i].is_some_and(|x| x.d != x.s && x.g == x.d)
    }

    fn is_stack(&self, v: &[usize]) -> bool {
        v.iter().all(|&i| self.is_nt(i) || self.is_dt(i))
            && v.windows(2).all(|w| {
                let (lo, hi) = (self.tr(w[0]), self.tr(w[1]));
                lo.doping == hi.doping && lo.d == hi.s
            })
            && (0..v.len()).all(|i| {
                (i + 1..v.len()).all(|j| {
                    let (lo, hi) = (self.tr(v[i]), self.tr(v[j]));
                    hi.g != lo.d && hi.d != lo.s
                })
            })
    }

    fn stacks(&self) -> Vec<Vec<usize>> {
        let m = self.t.len();
        let mut out = Vec::new();
        for a in 0..m {
            out.push(vec![a]);
            for b in 0..m {
                out.push(vec![a, b]);
                for c in 0..m {
                    out.push(vec![a, b, c]);
                }
            }
        }
        out.retain(|v| {
            let distinct: BTreeSet<_> = v.iter().collect();
            distinct.len() == v.len() && self.is_stack(v)
        });
        out
    }

    fn gates(&self, v: &[usize]) -> Vec<NetId> {
        v.iter().map(|&i| self.tr(i).g).collect()
    }

    fn drain(&self, v: &[usize]) -> NetId {
        self.tr(*v.last().unwrap()).d
    }

    fn source(&self, v: &[usize]) -> NetId {
        self.tr(v[0]).s
    }

    fn doping(&self, v: &[usize]) -> Doping {
        self.tr(v[0]).doping
    }

    fn names(&self, v: impl IntoIterator<Item = usize>) -> Names {
        v.into_iter().map(|i| self.n.device(i).name.clone()).collect()
    }

    pub fn run(&self) -> BTreeMap<BlockType, BTreeSet<Names>> {
        let st = self.stacks();
        let pair = |k: &[usize], l: &[usize]| {
            let gl = self.gates(l);
            self.doping(k) == self.doping(l)
                && k.iter().all(|t| !l.contains(t))
                && gl.contains(&self.drain(k))
                && self.gates(k).iter().all(|g| gl.contains(g))
        };
        let has_pair: Vec<bool> = st.iter().map(|k| st.iter().any(|l| pair(k, l))).collect();
        let ctrl_gate = |net: NetId, d: Doping| {
            st.iter()
                .zip(&has_pair)
                .any(|(k, &p)| p && self.doping(k) == d && self.gates(k).contains(&net))
        };
        let primary = |k: &[usize], l: &[usize]| {
            let mut allowed = self.gates(k);
            allowed.push(self.drain(k));
            pair(k, l)
                && self.gates(l).iter().all(|g| allowed.contains(g))
                && !ctrl_gate(self.drain(l), self.doping(l))
        };
        let cb: Vec<&Vec<usize>> = st.iter().filter(|l| st.iter().any(|k| primary(k, l))).collect();
        let vb: Vec<&Vec<usize>> = st
            .iter()
            .filter(|k| st.iter().any(|l| primary(k, l) || (pair(k, l) && cb.contains(&l))))
            .collect();

        // differential pairs
        let m = self.t.len();
        let mut dp = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if !(self.is_nt(a) && self.is_nt(b)) {
                    continue;
                }
                let (x, y) = (self.tr(a), self.tr(b));
                let separate = x.d != y.d && x.d != y.g && x.g != y.d && x.g != y.g;
                let tail = cb
                    .iter()
                    .any(|c| self.drain(c) == x.s && self.doping(c) == x.doping && !c.contains(&a) && !c.contains(&b));
                if x.doping == y.doping && x.s == y.s && separate && tail {
                    dp.push((a, b));
                }
            }
        }
        let in_dp: BTreeSet<usize> = dp.iter().flat_map(|&(a, b)| [a, b]).collect();
        let clean = |v: &&Vec<usize>| v.iter().all(|t| !in_dp.contains(t));
        let vb: Vec<&Vec<usize>> = vb.into_iter().filter(clean).collect();
        let cb: Vec<&Vec<usize>> = cb.into_iter().filter(clean).collect();
        let st: Vec<&Vec<usize>> = st.iter().filter(clean).collect();

        // mirrors
        let mut cm = Vec::new();
        for v in &vb {
            for c in &cb {
                let drains: Vec<NetId> = v.iter().chain(c.iter()).map(|&t| self.tr(t).d).collect();
                let (gv, gc) = (self.gates(v), self.gates(c));
                let ok = self.doping(v) == self.doping(c)
                    && v.iter().all(|t| !c.contains(t))
                    && self.source(v) == self.source(c)
                    && gc.len() >= gv.len()
                    && gv.iter().zip(&gc).all(|(a, b)| a == b)
                    && gc.contains(&self.drain(v))
                    && gv[..gv.len() - 1]
                        .iter()
                        .all(|g| drains.iter().filter(|&d| d == g).count() == 1);
                if ok {
                    cm.push((*v, *c));
                }
            }
        }
        let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<usize>>();
        let strictly_inside = |a: &BTreeSet<usize>, all: &[BTreeSet<usize>]| {
            all.iter().any(|o| a.len() < o.len() && a.is_subset(o))
        };
        let cm_sets: Vec<BTreeSet<usize>> = cm.iter().map(|(v, c)| set(v).union(&set(c)).copied().collect()).collect();
        let kept_cm: Vec<usize> = (0..cm.len()).filter(|&i| !strictly_inside(&cm_sets[i], &cm_sets)).collect();
        let vb_sets: Vec<_> = vb.iter().map(|v| set(v)).collect();
        let cb_sets: Vec<_> = cb.iter().map(|v| set(v)).collect();
        let keep = |s: &BTreeSet<usize>, all: &[BTreeSet<usize>], side: usize| {
            !strictly_inside(s, all)
                || kept_cm.iter().any(|&i| {
                    let part = if side == 0 { cm[i].0 } else { cm[i].1 };
                    set(part) == *s
                })
        };

        let mut out: BTreeMap<BlockType, BTreeSet<Names>> = BTreeMap::new();
        let mut put = |t: BlockType, s: Names| {
            out.entry(t).or_default().insert(s);
        };
        for s in &vb_sets {
            if keep(s, &vb_sets, 0) {
                put(BlockType::Vb, self.names(s.iter().copied()));
            }
        }
        for s in &cb_sets {
            if keep(s, &cb_sets, 1) {
                put(BlockType::Cb, self.names(s.iter().copied()));
            }
        }
        for &i in &kept_cm {
            put(BlockType::Cm, self.names(cm_sets[i].iter().copied()));
        }
        for &(a, b) in &dp {
            put(BlockType::Dp, self.names([a, b]));
        }

        // cascode pairs
        for &(a, b) in &dp {
            let (x, y) = (self.tr(a), self.tr(b));
            for c in 0..m {
                for e in c + 1..m {
                    if !(self.is_nt(c) && self.is_nt(e)) || [a, b].contains(&c) || [a, b].contains(&e) {
                        continue;
                    }
                    let (u, w) = (self.tr(c), self.tr(e));
                    let couple = u.doping == w.doping
                        && u.g == w.g
                        && u.d != w.d
                        && u.s != w.s
                        && u.d != w.s
                        && u.s != w.d;
                    let stacked = (x.d == u.s && y.d == w.s) || (x.d == w.s && y.d == u.s);
                    let shorts = [x.s, x.g, y.g].iter().any(|z| [u.g, u.d, w.d].contains(z));
                    if couple && stacked && !shorts {
                        put(BlockType::Gcc, self.names([c, e]));
                        let t = if u.doping == x.doping { BlockType::Cdp } else { BlockType::Fcdp };
                        put(t, self.names([a, b, c, e]));
                    }
                }
            }
        }

        // inverters
        let nt_stacks: Vec<&&Vec<usize>> = st.iter().filter(|v| v.iter().all(|&t| self.is_nt(t))).collect();
        for p in &nt_stacks {
            for q in &nt_stacks {
                if self.doping(p) != Doping::P
                    || self.doping(q) != Doping::N
                    || self.source(p) != self.n.vdd()
                    || self.source(q) != self.n.gnd()
                    || self.drain(p) != self.drain(q)
                {
                    continue;
                }
                let all: Vec<usize> = p.iter().chain(q.iter()).copied().collect();
                let clash = all.iter().any(|&i| {
                    all.iter().any(|&j| {
                        let (x, y) = (self.tr(i), self.tr(j));
                        i != j && (x.g == y.g || x.d == y.g || x.s == y.s)
                    })
                });
                if !clash {
                    put(BlockType::Inv, self.names(all));
                }
            }
        }
        out
    }
}

pub const COMPARED: [BlockType; 8] = [
    BlockType::Vb,
    BlockType::Cb,
    BlockType::Cm,
    BlockType::Dp,
    BlockType::Gcc,
    BlockType::Cdp,
    BlockType::Fcdp,
    BlockType::Inv,
];

pub fn recognized(n: &Netlist) -> BTreeMap<BlockType, BTreeSet<Names>> {
    let dec = decompose(n);
    let mut out: BTreeMap<BlockType, BTreeSet<Names>> = BTreeMap::new();
    for t in COMPARED {
        for b in dec.of_type(t) {
            out.entry(t)
                .or_default()
                .insert(b.devices.iter().map(|&i| n.device(i).name.clone()).collect());
        }
    }
    out
}

/// Oracle and recognizer block sets for one netlist.
pub fn compare(text: &str) -> (BTreeMap<BlockType, BTreeSet<Names>>, BTreeMap<BlockType, BTreeSet<Names>>) {
    let n = parse_netlist(text, &NetlistConfig::default()).unwrap();
    (Oracle::new(&n).run(), recognized(&n))
}

