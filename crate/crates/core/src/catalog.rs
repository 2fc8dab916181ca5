//! The catalog file: compact groups, simple ideals, representation
//! families, homogeneous spaces and holonomy records.
//!
//! The on-disk format is TOML with one array of tables per record type:
//!
//! ```toml
//! version = 1
//!
//! [[ideal]]
//! kind = "so({k})"
//! index = { var = "k", min = 5 }
//! dim = "k*(k-1)/2"
//! min_orth_rep_dim = "k"
//! provenance = "..."
//!
//! [[group]]
//! name = "SO({k})"
//! index = { var = "k", min = 5 }
//! pi1 = { free_rank = 0, torsion = [2] }
//! generators = ["rot"]
//! algebra = { center_rank = 0, ideals = ["so({k})"] }
//! connected = true
//! provenance = "..."
//!
//! [[repfamily]]
//! domain = "U({k})"
//! index = { var = "k", min = 1 }
//! target_r = 2
//! label = "A ↦ det(A)^s"
//! params = { name = "s", trivial_at = 0 }
//! pi1_images = [[{ coeff = 1 }]]
//! distinct_classes = "..."
//! extends_to = "U({k+1})"
//! certificate = "..."          # or "incomplete"
//! provenance = "..."
//!
//! [[space]]
//! name = "S{2*n+1}:U({n+1})"
//! index = { var = "n", min = 1 }
//! G = "U({n+1})"
//! H = "U({n})"
//! n = "2*n+1"
//! sigma_pi1_images = [[1]]
//! provenance = "..."
//!
//! [[holonomy]]
//! group = "U({k})"
//! index = { var = "k", min = 2 }
//! m = "2*k"
//! h_pi1_images = [[1]]
//! provenance = "..."
//! ```
//!
//! Every record is validated on load at its first few admissible index
//! values; any failure is reported with the line of the offending record.

use std::ops::Range;
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use toml::Spanned;

use crate::abelian::{AbHom, FgAbGroup};
use crate::error::{Error, Result};
use crate::lifting::so_pi1;
use crate::liecat::{AlgebraProfile, CompactGroupRec, SimpleIdeal};
use crate::repcat::{AffineImage, FamilyOrigin, FamilyParams, IntParam, OrthRepFamily};
use crate::spaces::{HolonomyRec, HomSpaceRec};
use crate::template::{match_name, normalize_name, render, Binding, Indexing, IntExpr};

pub const CATALOG_VERSION: u32 = 1;

/// Environment variable overriding the bundled catalog path.
pub const CATALOG_ENV: &str = "SPINR_CATALOG";

const BUNDLED: &str = include_str!("../catalog/catalog.toml");

/// Number of index values each template is checked at during load.
const LOAD_CHECKS: usize = 4;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: u32,
    #[serde(default)]
    ideal: Vec<Spanned<RawIdeal>>,
    #[serde(default)]
    group: Vec<Spanned<RawGroup>>,
    #[serde(default)]
    repfamily: Vec<Spanned<RawFamily>>,
    #[serde(default)]
    space: Vec<Spanned<RawSpace>>,
    #[serde(default)]
    holonomy: Vec<Spanned<RawHolonomy>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    kind: String,
    index: Option<Indexing>,
    dim: IntExpr,
    min_orth_rep_dim: IntExpr,
    provenance: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPi1 {
    free_rank: IntExpr,
    #[serde(default)]
    torsion: Vec<IntExpr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    #[serde(default)]
    center_rank: IntExpr,
    #[serde(default)]
    ideals: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    name: String,
    index: Option<Indexing>,
    pi1: RawPi1,
    #[serde(default)]
    generators: Vec<String>,
    algebra: RawAlgebra,
    connected: bool,
    provenance: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParam {
    name: String,
    #[serde(default = "one")]
    modulus: i64,
    #[serde(default)]
    residue: i64,
    trivial_at: Option<i64>,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAffine {
    coeff: IntExpr,
    #[serde(default)]
    offset: IntExpr,
    den: Option<IntExpr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawImage {
    Const(IntExpr),
    Affine(RawAffine),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    domain: String,
    index: Option<Indexing>,
    target_r: IntExpr,
    label: String,
    params: Option<RawParam>,
    pi1_images: Vec<Vec<RawImage>>,
    distinct_classes: String,
    extends_to: Option<String>,
    certificate: String,
    provenance: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    name: String,
    index: Option<Indexing>,
    #[serde(rename = "G")]
    g: String,
    #[serde(rename = "H")]
    h: String,
    n: IntExpr,
    sigma_pi1_images: Vec<Vec<IntExpr>>,
    provenance: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHolonomy {
    group: String,
    index: Option<Indexing>,
    m: IntExpr,
    h_pi1_images: Vec<Vec<IntExpr>>,
    provenance: String,
}

#[derive(Debug, Clone)]
struct Entry<T> {
    line: usize,
    raw: T,
}

/// A loaded, validated catalog. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Catalog {
    ideals: Vec<Entry<RawIdeal>>,
    groups: Vec<Entry<RawGroup>>,
    families: Vec<Entry<RawFamily>>,
    spaces: Vec<Entry<RawSpace>>,
    holonomy: Vec<Entry<RawHolonomy>>,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

fn entries<T: Clone>(text: &str, raw: Vec<Spanned<T>>) -> Vec<Entry<T>> {
    raw.into_iter()
        .map(|s| Entry {
            line: line_of(text, s.span()),
            raw: s.into_inner(),
        })
        .collect()
}

fn at(line: usize) -> impl Fn(String) -> Error {
    move |message| Error::Catalog { line, message }
}

/// Admissible bindings for an entry: the single concrete binding, or the
/// first few index values of a template.
fn load_bindings(index: Option<&Indexing>, line: usize) -> Result<Vec<Binding>> {
    match index {
        None => Ok(vec![Binding::none()]),
        Some(ix) => {
            let vals = ix.first_values(LOAD_CHECKS).map_err(at(line))?;
            if vals.is_empty() {
                return Err(Error::Catalog {
                    line,
                    message: format!("index constraint `{}` admits no value", ix.describe()),
                });
            }
            Ok(vals.into_iter().map(|v| Binding::new(&ix.var, v)).collect())
        }
    }
}

fn to_u32(v: i64, what: &str) -> std::result::Result<u32, String> {
    u32::try_from(v).map_err(|_| format!("{what} must be a non-negative integer, got {v}"))
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn bundled() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| Catalog::parse(BUNDLED).expect("bundled catalog is valid"))
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Catalog {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Catalog::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Catalog {
            line: e.span().map_or(0, |s| line_of(text, s)),
            message: e.message().to_owned(),
        })?;
        if raw.version != CATALOG_VERSION {
            return Err(Error::Catalog {
                line: 1,
                message: format!("unsupported catalog version {} (expected {CATALOG_VERSION})", raw.version),
            });
        }
        let cat = Catalog {
            ideals: entries(text, raw.ideal),
            groups: entries(text, raw.group),
            families: entries(text, raw.repfamily),
            spaces: entries(text, raw.space),
            holonomy: entries(text, raw.holonomy),
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        for e in &self.ideals {
            for b in load_bindings(e.raw.index.as_ref(), e.line)? {
                self.build_ideal(e, &b)?;
            }
        }
        for e in &self.groups {
            for b in load_bindings(e.raw.index.as_ref(), e.line)? {
                self.build_group(e, &b)?;
            }
        }
        for e in &self.families {
            for b in load_bindings(e.raw.index.as_ref(), e.line)? {
                self.build_family(e, &b)?;
            }
        }
        for e in &self.spaces {
            for b in load_bindings(e.raw.index.as_ref(), e.line)? {
                self.build_space(e, &b)?;
            }
        }
        for e in &self.holonomy {
            for b in load_bindings(e.raw.index.as_ref(), e.line)? {
                self.build_holonomy(e, &b)?;
            }
        }
        Ok(())
    }

    // ---- ideals -------------------------------------------------------

    fn build_ideal(&self, e: &Entry<RawIdeal>, b: &Binding) -> Result<SimpleIdeal> {
        let err = at(e.line);
        let kind = render(&e.raw.kind, b).map_err(&err)?;
        let dim = to_u32(e.raw.dim.eval(b).map_err(&err)?, "dim").map_err(&err)?;
        let min_rep = to_u32(e.raw.min_orth_rep_dim.eval(b).map_err(&err)?, "min_orth_rep_dim").map_err(&err)?;
        SimpleIdeal::new(&kind, dim, min_rep, &e.raw.provenance).map_err(|m| err(m.to_string()))
    }

    pub(crate) fn ideal(&self, kind: &str) -> Result<SimpleIdeal> {
        for e in &self.ideals {
            let b = match_name(&e.raw.kind, e.raw.index.as_ref(), kind).map_err(at(e.line))?;
            if let Some(b) = b {
                return self.build_ideal(e, &b);
            }
        }
        Err(Error::NotInCatalog {
            kind: "simple ideal",
            name: kind.to_owned(),
            available: self.ideals.iter().map(|e| pattern_desc(&e.raw.kind, e.raw.index.as_ref())).collect(),
        })
    }

    // ---- groups -------------------------------------------------------

    fn build_group(&self, e: &Entry<RawGroup>, b: &Binding) -> Result<CompactGroupRec> {
        let err = at(e.line);
        let name = render(&e.raw.name, b).map_err(&err)?;
        let free = to_u32(e.raw.pi1.free_rank.eval(b).map_err(&err)?, "free_rank").map_err(&err)?;
        let torsion = e
            .raw
            .pi1
            .torsion
            .iter()
            .map(|t| {
                let v = t.eval(b)?;
                match u64::try_from(v) {
                    Ok(d) if d >= 2 => Ok(d),
                    _ => Err(format!("torsion order {v} of {name} is not >= 2")),
                }
            })
            .collect::<std::result::Result<Vec<u64>, String>>()
            .map_err(&err)?;
        let labels: Vec<String> = e
            .raw
            .generators
            .iter()
            .map(|g| render(g, b))
            .collect::<std::result::Result<_, _>>()
            .map_err(&err)?;
        let pi1 = FgAbGroup::new(free as usize, &torsion, &labels).map_err(|m| err(format!("{name}: {m}")))?;
        let center = to_u32(e.raw.algebra.center_rank.eval(b).map_err(&err)?, "center_rank").map_err(&err)?;
        let ideals = e
            .raw
            .algebra
            .ideals
            .iter()
            .map(|k| {
                let kind = render(k, b).map_err(&err)?;
                self.ideal(&kind).map_err(|m| err(format!("{name}: {m}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if e.raw.provenance.trim().is_empty() {
            return Err(err(format!("{name}: empty provenance")));
        }
        let rec = CompactGroupRec {
            name,
            pi1,
            algebra: AlgebraProfile::new(center, ideals),
            connected: e.raw.connected,
            provenance: e.raw.provenance.clone(),
        };
        rec.check_standard().map_err(err)?;
        Ok(rec)
    }

    pub(crate) fn group(&self, name: &str) -> Result<CompactGroupRec> {
        let name = normalize_name(name);
        for e in &self.groups {
            let b = match_name(&e.raw.name, e.raw.index.as_ref(), &name).map_err(at(e.line))?;
            if let Some(b) = b {
                return self.build_group(e, &b);
            }
        }
        Err(Error::NotInCatalog {
            kind: "group",
            name,
            available: self.group_patterns(),
        })
    }

    pub fn group_patterns(&self) -> Vec<String> {
        self.groups.iter().map(|e| pattern_desc(&e.raw.name, e.raw.index.as_ref())).collect()
    }

    // ---- representation families ---------------------------------------

    fn build_family(&self, e: &Entry<RawFamily>, b: &Binding) -> Result<OrthRepFamily> {
        let err = at(e.line);
        let domain = render(&e.raw.domain, b).map_err(&err)?;
        let group = self.group(&domain).map_err(|m| err(format!("family domain: {m}")))?;
        let r = to_u32(e.raw.target_r.eval(b).map_err(&err)?, "target_r").map_err(&err)?;
        if r == 0 {
            return Err(err("target_r must be >= 1".into()));
        }
        let params = match &e.raw.params {
            None => FamilyParams::Fixed,
            Some(p) => FamilyParams::Integer(
                IntParam::new(&p.name, p.modulus, p.residue, p.trivial_at).map_err(|m| err(m.to_string()))?,
            ),
        };
        let images = e
            .raw
            .pi1_images
            .iter()
            .map(|row| {
                row.iter()
                    .map(|img| match img {
                        RawImage::Const(c) => Ok(AffineImage::constant(c.eval(b)?)),
                        RawImage::Affine(a) => Ok(AffineImage {
                            coeff: a.coeff.eval(b)?,
                            offset: a.offset.eval(b)?,
                            den: a.den.as_ref().map_or(Ok(1), |d| d.eval(b))?,
                        }),
                    })
                    .collect::<std::result::Result<Vec<_>, String>>()
            })
            .collect::<std::result::Result<Vec<_>, String>>()
            .map_err(&err)?;
        let extends_to = match &e.raw.extends_to {
            Some(g) => {
                let g = render(g, b).map_err(&err)?;
                self.group(&g).map_err(|m| err(format!("extends_to: {m}")))?;
                Some(g)
            }
            None => None,
        };
        let cert = e.raw.certificate.trim();
        let fam = OrthRepFamily::new(
            domain,
            group.pi1.clone(),
            r,
            e.raw.label.clone(),
            params,
            images,
            e.raw.distinct_classes.clone(),
            extends_to,
            (cert != "incomplete").then(|| cert.to_owned()),
            e.raw.provenance.clone(),
            FamilyOrigin::Catalog,
        )
        .map_err(|m| err(m.to_string()))?;
        Ok(fam)
    }

    /// Catalog families with the given domain and target rank.
    pub(crate) fn families_at(&self, domain: &str, r: u32) -> Result<Vec<OrthRepFamily>> {
        let domain = normalize_name(domain);
        let mut out = Vec::new();
        for e in &self.families {
            let b = match_name(&e.raw.domain, e.raw.index.as_ref(), &domain).map_err(at(e.line))?;
            let Some(b) = b else { continue };
            let tr = e.raw.target_r.eval(&b).map_err(at(e.line))?;
            if tr == i64::from(r) {
                out.push(self.build_family(e, &b)?);
            }
        }
        Ok(out)
    }

    // ---- spaces ---------------------------------------------------------

    fn pi1_map(
        &self,
        domain: &FgAbGroup,
        codomain: FgAbGroup,
        rows: &[Vec<IntExpr>],
        b: &Binding,
    ) -> std::result::Result<AbHom, String> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|x| x.eval(b)).collect::<std::result::Result<Vec<i64>, String>>())
            .collect::<std::result::Result<Vec<_>, String>>()?;
        AbHom::from_coords(domain.clone(), codomain, &rows).map_err(|e| e.to_string())
    }

    fn build_space(&self, e: &Entry<RawSpace>, b: &Binding) -> Result<HomSpaceRec> {
        let err = at(e.line);
        let name = render(&e.raw.name, b).map_err(&err)?;
        let g = render(&e.raw.g, b).map_err(&err)?;
        let h = render(&e.raw.h, b).map_err(&err)?;
        self.group(&g).map_err(|m| err(format!("{name}: G: {m}")))?;
        let hrec = self.group(&h).map_err(|m| err(format!("{name}: H: {m}")))?;
        let n = to_u32(e.raw.n.eval(b).map_err(&err)?, "n").map_err(&err)?;
        if n == 0 {
            return Err(err(format!("{name}: dimension must be >= 1")));
        }
        let sigma = self
            .pi1_map(&hrec.pi1, so_pi1(n), &e.raw.sigma_pi1_images, b)
            .map_err(|m| err(format!("{name}: isotropy π₁ map: {m}")))?;
        Ok(HomSpaceRec {
            name,
            g,
            h,
            h_connected: hrec.connected,
            n,
            sigma_pi1: sigma,
            provenance: e.raw.provenance.clone(),
        })
    }

    /// Looks up a homogeneous space by its record name, e.g. `S7:Sp(2)`.
    pub fn space(&self, name: &str) -> Result<HomSpaceRec> {
        let name = normalize_name(name);
        for e in &self.spaces {
            let b = match_name(&e.raw.name, e.raw.index.as_ref(), &name).map_err(at(e.line))?;
            if let Some(b) = b {
                return self.build_space(e, &b);
            }
        }
        Err(Error::NotInCatalog {
            kind: "space",
            name,
            available: self.space_patterns(),
        })
    }

    pub fn space_patterns(&self) -> Vec<String> {
        self.spaces.iter().map(|e| pattern_desc(&e.raw.name, e.raw.index.as_ref())).collect()
    }

    /// Concrete spaces for the first `count` admissible index values of
    /// every space record.
    pub fn sample_spaces(&self, count: usize) -> Result<Vec<HomSpaceRec>> {
        let mut out = Vec::new();
        for e in &self.spaces {
            let bindings = match &e.raw.index {
                None => vec![Binding::none()],
                Some(ix) => ix
                    .first_values(count)
                    .map_err(at(e.line))?
                    .into_iter()
                    .map(|v| Binding::new(&ix.var, v))
                    .collect(),
            };
            for b in bindings {
                out.push(self.build_space(e, &b)?);
            }
        }
        Ok(out)
    }

    // ---- holonomy -------------------------------------------------------

    fn build_holonomy(&self, e: &Entry<RawHolonomy>, b: &Binding) -> Result<HolonomyRec> {
        let err = at(e.line);
        let group = render(&e.raw.group, b).map_err(&err)?;
        let grec = self.group(&group).map_err(|m| err(format!("holonomy: {m}")))?;
        let m = to_u32(e.raw.m.eval(b).map_err(&err)?, "m").map_err(&err)?;
        if m == 0 {
            return Err(err(format!("{group}: m must be >= 1")));
        }
        let h = self
            .pi1_map(&grec.pi1, so_pi1(m), &e.raw.h_pi1_images, b)
            .map_err(|msg| err(format!("{group}: holonomy π₁ map: {msg}")))?;
        Ok(HolonomyRec {
            group,
            m,
            h_pi1: h,
            provenance: e.raw.provenance.clone(),
        })
    }

    pub fn holonomy(&self, group: &str) -> Result<HolonomyRec> {
        let group = normalize_name(group);
        for e in &self.holonomy {
            let b = match_name(&e.raw.group, e.raw.index.as_ref(), &group).map_err(at(e.line))?;
            if let Some(b) = b {
                return self.build_holonomy(e, &b);
            }
        }
        Err(Error::NotInCatalog {
            kind: "holonomy group",
            name: group,
            available: self
                .holonomy
                .iter()
                .map(|e| pattern_desc(&e.raw.group, e.raw.index.as_ref()))
                .collect(),
        })
    }

    /// Every catalog family instantiated at the first `count` admissible
    /// index values of its record.
    pub fn sample_families(&self, count: usize) -> Result<Vec<OrthRepFamily>> {
        let mut out = Vec::new();
        for e in &self.families {
            let bindings = match &e.raw.index {
                None => vec![Binding::none()],
                Some(ix) => ix
                    .first_values(count)
                    .map_err(at(e.line))?
                    .into_iter()
                    .map(|v| Binding::new(&ix.var, v))
                    .collect(),
            };
            for b in bindings {
                out.push(self.build_family(e, &b)?);
            }
        }
        Ok(out)
    }
}

fn pattern_desc(pattern: &str, index: Option<&Indexing>) -> String {
    match index {
        None => pattern.to_owned(),
        Some(ix) => format!("{pattern} [{}]", ix.describe()),
    }
}

/// Resolves the catalog to use: an explicit path, else the environment
/// override, else the bundled catalog.
pub fn resolve(path: Option<&Path>) -> Result<std::borrow::Cow<'static, Catalog>> {
    use std::borrow::Cow;
    if let Some(p) = path {
        return Catalog::load(p).map(Cow::Owned);
    }
    match std::env::var_os(CATALOG_ENV) {
        Some(p) if !p.is_empty() => Catalog::load(Path::new(&p)).map(Cow::Owned),
        _ => Ok(Cow::Borrowed(Catalog::bundled())),
    }
}
