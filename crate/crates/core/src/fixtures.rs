//! Bundled example netlists.

pub const TELESCOPIC: &str = include_str!("../fixtures/telescopic.sp");
pub const SYMMETRICAL: &str = include_str!("../fixtures/symmetrical.sp");
pub const FOLDED_CASCODE_CMFB: &str = include_str!("../fixtures/folded_cascode_cmfb.sp");
pub const THREE_STAGE: &str = include_str!("../fixtures/three_stage.sp");

/// `(name, source)` for every bundled netlist.
pub const ALL: [(&str, &str); 4] = [
    ("telescopic", TELESCOPIC),
    ("symmetrical", SYMMETRICAL),
    ("folded_cascode_cmfb", FOLDED_CASCODE_CMFB),
    ("three_stage", THREE_STAGE),
];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
