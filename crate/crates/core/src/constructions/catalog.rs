//! Line-oriented group catalog.
//!
//! Each non-blank line that does not start with `#` reads
//!
//! ```text
//! name<TAB>degree<TAB>tag,tag,...<TAB>gen;gen;...
//! ```
//!
//! with generators in 1-based disjoint cycle notation. The tag field may be
//! `-` for no tags. Tags that make a checkable claim are verified on load:
//! `transitive`, `primitive`, `imprimitive`, `symmetric`, `alternating`,
//! `set-transitive` and `order=N`. Other tags are carried along as labels.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::kset::DEFAULT_KSET_CAP;
use crate::perm::{Permutation, PointBase};

/// The catalog shipped with the crate.
pub const BUILTIN_CATALOG: &str = include_str!("catalog.tsv");

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
    pub tags: BTreeSet<String>,
    group: PermGroup,
}

impl CatalogEntry {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    /// Symmetric or alternating in its natural action.
    pub fn is_giant(&self) -> bool {
        self.has_tag("symmetric") || self.has_tag("alternating")
    }

    /// The entry as one catalog line.
    pub fn to_line(&self) -> String {
        let tags = if self.tags.is_empty() {
            "-".to_string()
        } else {
            self.tags.iter().cloned().collect::<Vec<_>>().join(",")
        };
        format!("{}\t{}\t{}\t{}", self.name, self.degree, tags, self.generators.join(";"))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# name\tdegree\ttags\tgenerators (1-based cycles)\n");
        for e in &self.entries {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }
}

pub fn builtin_catalog() -> Catalog {
    parse_catalog(BUILTIN_CATALOG).expect("builtin catalog is valid")
}

pub fn load_catalog(path: &Path) -> Result<Catalog> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read catalog {}: {e}", path.display())))?;
    parse_catalog(&text)
}

/// Parses, builds and validates every entry.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut entries = Vec::new();
    let mut names = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(parse_err(format!("expected 4 tab-separated fields, found {}", fields.len())));
        }
        let name = fields[0].trim().to_string();
        if name.is_empty() {
            return Err(parse_err("empty name".into()));
        }
        if !names.insert(name.clone()) {
            return Err(parse_err(format!("duplicate name {name:?}")));
        }
        let degree: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad degree {:?}", fields[1])))?;
        let tags: BTreeSet<String> = match fields[2].trim() {
            "" | "-" => BTreeSet::new(),
            t => t.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        };
        let generators: Vec<String> = fields[3]
            .split(';')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let perms = generators
            .iter()
            .map(|g| Permutation::parse_cycles(g, degree, PointBase::One))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| parse_err(format!("{name}: {e}")))?;
        let group = PermGroup::new(degree, perms).map_err(|e| parse_err(format!("{name}: {e}")))?;
        validate_tags(&name, &tags, &group).map_err(|e| parse_err(e.to_string()))?;
        entries.push(CatalogEntry {
            name,
            degree,
            generators,
            tags,
            group,
        });
    }
    Ok(Catalog { entries })
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

fn validate_tags(name: &str, tags: &BTreeSet<String>, group: &PermGroup) -> Result<()> {
    let fail = |what: &str| Err(Error::Validation(format!("{name}: tag {what:?} does not hold")));
    let n = group.degree();
    for tag in tags {
        let ok = match tag.as_str() {
            "transitive" => group.is_transitive(),
            "primitive" => group.is_primitive(),
            "imprimitive" => group.is_transitive() && !group.is_primitive(),
            "symmetric" => *group.order() == factorial(n),
            "alternating" => n >= 3 && group.order() * BigUint::from(2u32) == factorial(n),
            "set-transitive" => (1..=n / 2).all(|k| group.kset_orbit_count(k, DEFAULT_KSET_CAP) == Some(1)),
            t if t.starts_with("order=") => {
                let want: BigUint = t["order=".len()..]
                    .parse()
                    .map_err(|_| Error::Validation(format!("{name}: malformed tag {t:?}")))?;
                *group.order() == want
            }
            _ => true,
        };
        if !ok {
            return fail(tag);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_empty_catalog() {
        assert!(parse_catalog("").unwrap().is_empty());
        assert!(parse_catalog("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let err = parse_catalog("C5\t4\t-\t(1 2 3 4 5)\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn false_tag_is_rejected() {
        let err = parse_catalog("\n# x\nC4\t4\tprimitive\t(1 2 3 4)\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("primitive"));
            }
            other => panic!("unexpected {other}"),
        }
        assert!(parse_catalog("C4\t4\torder=5\t(1 2 3 4)\n").is_err());
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_catalog("C4\t4\t(1 2 3 4)\n").is_err());
        assert!(parse_catalog("C4\tfour\t-\t(1 2 3 4)\n").is_err());
        assert!(parse_catalog("C4\t4\t-\t(1 2 3 4)\nC4\t4\t-\t(1 2 3 4)\n").is_err());
    }

    #[test]
    fn round_trip_through_text() {
        let cat = parse_catalog("D5\t5\ttransitive,primitive,order=10\t(1 2 3 4 5);(2 5)(3 4)\n").unwrap();
        let again = parse_catalog(&cat.to_text()).unwrap();
        assert_eq!(again.entries[0].to_line(), cat.entries[0].to_line());
        assert_eq!(again.get("D5").unwrap().group().order(), &BigUint::from(10u32));
    }
}
