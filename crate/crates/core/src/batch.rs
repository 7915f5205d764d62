//! Many netlists at once. Each netlist is parsed and decomposed on its own,
//! so the work splits cleanly across threads.

use crate::block::Decomposition;
use crate::error::ParseError;
use crate::hl34::decompose;
use crate::netlist::{parse_netlist, NetlistConfig};

#[derive(Debug)]
pub struct BatchItem {
    pub name: String,
    pub result: Result<Decomposition, ParseError>,
}

fn one(name: &str, text: &str, cfg: &NetlistConfig) -> BatchItem {
    BatchItem {
        name: name.to_string(),
        result: parse_netlist(text, cfg).map(|n| decompose(&n)),
    }
}

/// Sequential reference path. Results keep input order.
pub fn analyze_batch_sequential(inputs: &[(String, String)], cfg: &NetlistConfig) -> Vec<BatchItem> {
    inputs.iter().map(|(name, text)| one(name, text, cfg)).collect()
}

/// Decomposes every input, in parallel when the `parallel` feature is on.
/// Results keep input order either way.
#[cfg(feature = "parallel")]
pub fn analyze_batch(inputs: &[(String, String)], cfg: &NetlistConfig) -> Vec<BatchItem> {
    use rayon::prelude::*;
    inputs.par_iter().map(|(name, text)| one(name, text, cfg)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn analyze_batch(inputs: &[(String, String)], cfg: &NetlistConfig) -> Vec<BatchItem> {
    analyze_batch_sequential(inputs, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parallel_matches_sequential() {
        let mut inputs: Vec<(String, String)> = fixtures::ALL
            .iter()
            .map(|(n, t)| (n.to_string(), t.to_string()))
            .collect();
        inputs.push(("broken".into(), "M1 a b\n".into()));
        let cfg = NetlistConfig::default();
        let a = analyze_batch(&inputs, &cfg);
        let b = analyze_batch_sequential(&inputs, &cfg);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            match (&x.result, &y.result) {
                (Ok(p), Ok(q)) => assert_eq!(p.to_json(true), q.to_json(true)),
                (Err(p), Err(q)) => assert_eq!(p, q),
                _ => panic!("{} differs", x.name),
            }
        }
        assert!(b[4].result.is_err());
    }
}
