//! The built-in template corpus, embedded so every command and test runs
//! offline. The same documents ship as files under `fixtures/`.

use crate::error::{Error, Result};
use crate::format::parse_template;
use crate::template::OrigamiTemplate;

pub const FIXTURE_NAMES: [&str; 7] = [
    "t_square",
    "t_fold2",
    "t_ring4",
    "t_chain4",
    "t_cube2",
    "t_prismring",
    "t_fig1",
];

pub fn fixture_source(name: &str) -> Option<&'static str> {
    match name {
        "t_square" => Some(include_str!("../fixtures/t_square.json")),
        "t_fold2" => Some(include_str!("../fixtures/t_fold2.json")),
        "t_ring4" => Some(include_str!("../fixtures/t_ring4.json")),
        "t_chain4" => Some(include_str!("../fixtures/t_chain4.json")),
        "t_cube2" => Some(include_str!("../fixtures/t_cube2.json")),
        "t_prismring" => Some(include_str!("../fixtures/t_prismring.json")),
        "t_fig1" => Some(include_str!("../fixtures/t_fig1.json")),
        _ => None,
    }
}

pub fn template(name: &str) -> Result<OrigamiTemplate> {
    let source = fixture_source(name)
        .ok_or_else(|| Error::Index(format!("unknown fixture {name:?}")))?;
    Ok(parse_template(source)?.0)
}
