//! The bundled family catalogue.

use crate::report::{run_batch, BatchSummary, CaseReport, RunOptions};
use crate::schema::{parse_family, FamilySpec, SpecError};

pub const FIXTURES: &[(&str, &str)] = &[
    ("f20-i-mg1", include_str!("../fixtures/f20-i-mg1.json")),
    ("f20-i-mg2", include_str!("../fixtures/f20-i-mg2.json")),
    ("f20-ii-ab0", include_str!("../fixtures/f20-ii-ab0.json")),
    ("f20-ii-mg1", include_str!("../fixtures/f20-ii-mg1.json")),
    ("f20-ii-mg2", include_str!("../fixtures/f20-ii-mg2.json")),
    ("f31-main", include_str!("../fixtures/f31-main.json")),
    ("f31-star", include_str!("../fixtures/f31-star.json")),
    ("f31-z3x", include_str!("../fixtures/f31-z3x.json")),
    ("f37-half", include_str!("../fixtures/f37-half.json")),
    ("f37-third-a", include_str!("../fixtures/f37-third-a.json")),
    ("f37-third-zxs2", include_str!("../fixtures/f37-third-zxs2.json")),
    ("f47", include_str!("../fixtures/f47.json")),
    ("f51-generic", include_str!("../fixtures/f51-generic.json")),
    ("f51-star", include_str!("../fixtures/f51-star.json")),
    ("f59-mg1-2", include_str!("../fixtures/f59-mg1-2.json")),
    ("f59-mg3-2", include_str!("../fixtures/f59-mg3-2.json")),
    ("f64", include_str!("../fixtures/f64.json")),
    ("f71-fifth", include_str!("../fixtures/f71-fifth.json")),
    ("f71-quarter", include_str!("../fixtures/f71-quarter.json")),
    ("remark-toric", include_str!("../fixtures/remark-toric.json")),
    ("x5-general", include_str!("../fixtures/x5-general.json")),
    ("x5-special", include_str!("../fixtures/x5-special.json")),
];

pub fn fixtures() -> Result<Vec<FamilySpec>, SpecError> {
    FIXTURES.iter().map(|(_, text)| parse_family(text)).collect()
}

pub fn fixture(id: &str) -> Result<FamilySpec, SpecError> {
    let (_, text) = FIXTURES
        .iter()
        .find(|(name, _)| *name == id)
        .ok_or_else(|| SpecError::Invalid(format!("no bundled family {id}")))?;
    parse_family(text)
}

pub fn run_catalog(opts: RunOptions) -> Result<(Vec<CaseReport>, BatchSummary), SpecError> {
    run_batch(&fixtures()?, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_match_file_names() {
        for (name, text) in FIXTURES {
            assert_eq!(parse_family(text).unwrap().id, *name);
        }
    }
}
