//! The shipped example families, embedded from `sets/`.

use crate::document::{parse_document, Document};
use crate::error::{Error, Result};

/// A shipped family and the point its interesting behaviour happens at.
#[derive(Clone, Copy, Debug)]
pub struct Family {
    pub name: &'static str,
    pub source: &'static str,
    pub focus: &'static str,
}

impl Family {
    pub fn document(&self) -> Result<Document> {
        parse_document(self.source)
    }
}

macro_rules! family {
    ($name:literal, $focus:literal) => {
        Family { name: $name, source: include_str!(concat!("../sets/", $name, ".json")), focus: $focus }
    };
}

pub const FAMILIES: &[Family] = &[
    family!("empty", "0"),
    family!("full", "0"),
    family!("unit_interval", "0"),
    family!("two_bumps", "0"),
    family!("geometric", "0"),
    family!("vanishing", "0"),
    family!("removable_point", "1"),
    family!("single_point", "1/3"),
    family!("clopen_cylinder", "1(0)"),
    family!("clopen_three", "0(1)"),
    family!("co_point", "(0)"),
    family!("periodic_rule", "(01)"),
];

pub fn family(name: &str) -> Result<&'static Family> {
    FAMILIES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::Parse(format!("no library family named `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::SetDocument;

    #[test]
    fn every_family_parses_under_its_name() {
        for f in FAMILIES {
            let doc = f.document().unwrap();
            assert_eq!(doc.name.as_deref(), Some(f.name));
            match doc.set {
                SetDocument::Real(_) => f.focus.parse::<crate::Rational>().map(|_| ()).unwrap(),
                SetDocument::Cantor(_) => f.focus.parse::<crate::cantorsets::CantorPoint>().map(|_| ()).unwrap(),
            }
        }
        assert!(FAMILIES.len() >= 9);
        assert!(family("nope").is_err());
    }
}
