//! Compact connected Lie groups: fundamental group with chosen generators
//! and the simple-ideal profile of the Lie algebra.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;

use crate::abelian::FgAbGroup;
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::lifting::so_pi1;

static SO_NAME: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^SO\((\d+)\)$").unwrap());
static SO_KIND: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^so\((\d+)\)$").unwrap());

/// A simple ideal of a compact Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleIdeal {
    pub kind: String,
    pub dim: u32,
    /// Smallest `r` admitting a nontrivial map into `so(r)`.
    pub min_orth_rep_dim: u32,
    pub is_abelian: bool,
    pub provenance: String,
}

impl SimpleIdeal {
    pub fn new(kind: &str, dim: u32, min_orth_rep_dim: u32, provenance: &str) -> Result<Self> {
        if dim < 3 {
            return Err(Error::rejected(format!("{kind}: simple ideal of dimension {dim} < 3")));
        }
        if min_orth_rep_dim < 2 {
            return Err(Error::rejected(format!(
                "{kind}: min_orth_rep_dim {min_orth_rep_dim} < 2"
            )));
        }
        if let Some(c) = SO_KIND.captures(kind) {
            let k: u32 = c[1].parse().map_err(|_| Error::rejected(format!("bad kind {kind}")))?;
            let expected = match k {
                3 => Some(3),
                k if k >= 5 => Some(k),
                _ => None,
            };
            if let Some(e) = expected {
                if min_orth_rep_dim != e {
                    return Err(Error::rejected(format!(
                        "{kind}: min_orth_rep_dim must be {e}, got {min_orth_rep_dim}"
                    )));
                }
                if dim != k * (k - 1) / 2 {
                    return Err(Error::rejected(format!("{kind}: dimension must be {}", k * (k - 1) / 2)));
                }
            }
        }
        Ok(SimpleIdeal {
            kind: kind.to_owned(),
            dim,
            min_orth_rep_dim,
            is_abelian: false,
            provenance: provenance.to_owned(),
        })
    }
}

/// Center dimension plus the list of simple ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraProfile {
    pub center_rank: u32,
    pub ideals: Vec<SimpleIdeal>,
}

impl AlgebraProfile {
    pub fn new(center_rank: u32, ideals: Vec<SimpleIdeal>) -> Self {
        AlgebraProfile { center_rank, ideals }
    }

    pub fn dim(&self) -> u32 {
        self.center_rank + self.ideals.iter().map(|i| i.dim).sum::<u32>()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
}

impl fmt::Display for AlgebraProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.ideals.iter().map(|i| i.kind.clone()).collect();
        match self.center_rank {
            0 => {}
            1 => parts.push("u(1)".into()),
            c => parts.push(format!("u(1)^{c}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("⊕"))
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompactGroupRec {
    pub name: String,
    pub pi1: FgAbGroup,
    pub algebra: AlgebraProfile,
    pub connected: bool,
    pub provenance: String,
}

impl CompactGroupRec {
    /// Standard-value checks for records whose data is fixed by their
    /// name; currently the `SO(k)` series.
    pub(crate) fn check_standard(&self) -> std::result::Result<(), String> {
        if let Some(c) = SO_NAME.captures(&self.name) {
            let k: u32 = c[1].parse().map_err(|_| format!("bad name {}", self.name))?;
            if k == 0 {
                return Err("SO(0) is not a group in the catalog's sense".into());
            }
            if !self.pi1.same_shape(&so_pi1(k)) {
                return Err(format!("π₁({}) must be {}, got {}", self.name, so_pi1(k), self.pi1));
            }
            if self.algebra.dim() != k * (k - 1) / 2 {
                return Err(format!(
                    "{}: algebra dimension {} != {}",
                    self.name,
                    self.algebra.dim(),
                    k * (k - 1) / 2
                ));
            }
            if !self.connected {
                return Err(format!("{} is connected", self.name));
            }
        }
        Ok(())
    }
}

/// Looks a group up by name. Unknown names are an error listing the
/// available records.
pub fn lookup(catalog: &Catalog, name: &str) -> Result<CompactGroupRec> {
    catalog.group(name)
}

pub fn so_group(catalog: &Catalog, k: i64) -> Result<CompactGroupRec> {
    if k <= 0 {
        return Err(Error::rejected(format!("SO(k) needs k >= 1, got {k}")));
    }
    catalog.group(&format!("SO({k})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> &'static Catalog {
        Catalog::bundled()
    }

    #[test]
    fn lookup_examples() {
        assert!(lookup(cat(), "SU(4)").unwrap().pi1.is_trivial());
        let so2 = lookup(cat(), "SO(2)").unwrap();
        assert_eq!((so2.pi1.free_rank(), so2.pi1.torsion_orders()), (1, vec![]));
        let so4 = lookup(cat(), "SO(4)").unwrap();
        assert_eq!(so4.pi1.torsion_orders(), [2]);
        assert_eq!(so4.algebra.to_string(), "so(3)⊕so(3)");
    }

    #[test]
    fn unknown_name_lists_catalog() {
        match lookup(cat(), "E8") {
            Err(Error::NotInCatalog { name, available, .. }) => {
                assert_eq!(name, "E8");
                assert!(available.iter().any(|a| a.starts_with("G2")));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn so_group_examples() {
        assert!(so_group(cat(), 1).unwrap().pi1.is_trivial());
        assert_eq!(so_group(cat(), 2).unwrap().pi1.free_rank(), 1);
        assert_eq!(so_group(cat(), 7).unwrap().pi1.torsion_orders(), [2]);
        assert!(so_group(cat(), 0).is_err());
        assert!(so_group(cat(), -3).is_err());
    }

    #[test]
    fn so_series_invariants() {
        for k in 1..=12 {
            let g = so_group(cat(), k).unwrap();
            let expected = match k {
                1 => (0, vec![]),
                2 => (1, vec![]),
                _ => (0, vec![2]),
            };
            assert_eq!((g.pi1.free_rank(), g.pi1.torsion_orders()), expected, "SO({k})");
            assert_eq!(i64::from(g.algebra.dim()), k * (k - 1) / 2, "dim so({k})");
        }
    }

    #[test]
    fn shipped_records_connected_with_provenance() {
        for name in [
            "SO(3)", "SO(9)", "U(1)", "U(4)", "SU(2)", "SU(7)", "Sp(0)", "Sp(3)", "Sp(0)·U(1)",
            "Sp(2)·U(1)", "Sp(0)·Sp(1)", "Sp(4)·Sp(1)", "G2", "Spin(7)", "Spin(9)",
        ] {
            let g = lookup(cat(), name).unwrap();
            assert!(g.connected, "{name}");
            assert!(!g.provenance.trim().is_empty(), "{name}");
        }
    }

    #[test]
    fn ideal_validation() {
        assert!(SimpleIdeal::new("so(5)", 10, 4, "x").is_err());
        assert!(SimpleIdeal::new("so(3)", 3, 3, "x").is_ok());
        assert!(SimpleIdeal::new("weird", 2, 3, "x").is_err());
        assert!(SimpleIdeal::new("weird", 3, 1, "x").is_err());
    }
}
