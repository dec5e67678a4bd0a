//! Built-in scenarios for the three driven saddles, each with a slow and a
//! fast launch from the origin.

use crate::error::{CliError, Result};
use crate::scenario::{parse_scenario, Scenario};

const PRESETS: [(&str, &str); 6] = [
    ("fig1_nonrel", include_str!("../presets/fig1_nonrel.json")),
    ("fig1_rel", include_str!("../presets/fig1_rel.json")),
    ("fig2_nonrel", include_str!("../presets/fig2_nonrel.json")),
    ("fig2_rel", include_str!("../presets/fig2_rel.json")),
    ("fig3_nonrel", include_str!("../presets/fig3_nonrel.json")),
    ("fig3_rel", include_str!("../presets/fig3_rel.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

/// Raw JSON of a preset.
pub fn source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn load(name: &str) -> Result<Scenario> {
    let text = source(name).ok_or_else(|| {
        let known: Vec<_> = names().collect();
        CliError::validation("preset", format!("unknown preset `{name}`; known: {}", known.join(", ")))
    })?;
    parse_scenario(text)
}
