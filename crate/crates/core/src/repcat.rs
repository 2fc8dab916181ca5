//! Conjugacy families of homomorphisms `H → SO(r)` and the rule engine
//! that certifies when only the trivial homomorphism exists.

use std::fmt;

use crate::abelian::{compose, AbHom, FgAbGroup};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::liecat::{self, AlgebraProfile};
use crate::lifting::{inclusion_pi1, so_pi1};

/// An integer parameter `s` restricted to `s ≡ residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntParam {
    pub name: String,
    pub modulus: i64,
    pub residue: i64,
    /// Parameter value at which the family is the trivial homomorphism.
    pub trivial_at: Option<i64>,
}

impl IntParam {
    pub fn new(name: &str, modulus: i64, residue: i64, trivial_at: Option<i64>) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::rejected(format!("parameter modulus must be >= 1, got {modulus}")));
        }
        let p = IntParam {
            name: name.to_owned(),
            modulus,
            residue: residue.rem_euclid(modulus),
            trivial_at,
        };
        if let Some(t) = trivial_at {
            if !p.admits(t) {
                return Err(Error::rejected(format!("trivial_at = {t} violates {}", p.describe())));
            }
        }
        Ok(p)
    }

    pub fn admits(&self, s: i64) -> bool {
        s.rem_euclid(self.modulus) == self.residue
    }

    /// `s ∈ Z`, `s even`, `s odd` or `s ≡ c mod m`.
    pub fn describe(&self) -> String {
        describe_class(&self.name, self.modulus, self.residue)
    }
}

pub(crate) fn describe_class(name: &str, modulus: i64, residue: i64) -> String {
    match (modulus, residue) {
        (1, _) => format!("{name} ∈ Z"),
        (2, 0) => format!("{name} even"),
        (2, 1) => format!("{name} odd"),
        (m, c) => format!("{name} ≡ {c} mod {m}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyParams {
    /// A single conjugacy class.
    Fixed,
    Integer(IntParam),
}

/// `(coeff · s + offset) / den`, required to be integral on admissible `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineImage {
    pub coeff: i64,
    pub offset: i64,
    pub den: i64,
}

impl AffineImage {
    pub fn constant(c: i64) -> Self {
        AffineImage {
            coeff: 0,
            offset: c,
            den: 1,
        }
    }

    pub fn eval(&self, s: i64) -> Result<i64> {
        let num = self.coeff * s + self.offset;
        if self.den == 0 || num % self.den != 0 {
            return Err(Error::rejected(format!(
                "π₁ image ({}·s + {})/{} is not an integer at s = {s}",
                self.coeff, self.offset, self.den
            )));
        }
        Ok(num / self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyOrigin {
    Catalog,
    Trivial,
    /// Pushed forward along `SO(from_r) ↪ SO(target_r)`.
    Induced { from_r: u32 },
    /// The diagonal choice `φ = σ`.
    Canonical,
}

impl fmt::Display for FamilyOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyOrigin::Catalog => write!(f, "catalog"),
            FamilyOrigin::Trivial => write!(f, "trivial"),
            FamilyOrigin::Induced { from_r } => write!(f, "induced from r={from_r}"),
            FamilyOrigin::Canonical => write!(f, "canonical"),
        }
    }
}

/// A conjugacy family of homomorphisms `domain → SO(target_r)` with its
/// (possibly parameter dependent) map on fundamental groups.
#[derive(Debug, Clone)]
pub struct OrthRepFamily {
    pub domain: String,
    pub target_r: u32,
    pub label: String,
    pub params: FamilyParams,
    pub distinct_classes: String,
    pub extends_to: Option<String>,
    /// Why the families at `(domain, target_r)` are exhaustive; `None` when
    /// the list is not known to be complete.
    pub completeness_cert: Option<String>,
    pub provenance: String,
    pub origin: FamilyOrigin,
    domain_pi1: FgAbGroup,
    base_r: u32,
    images: Vec<Vec<AffineImage>>,
    post: Option<AbHom>,
}

impl OrthRepFamily {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        domain: String,
        domain_pi1: FgAbGroup,
        target_r: u32,
        label: String,
        params: FamilyParams,
        images: Vec<Vec<AffineImage>>,
        distinct_classes: String,
        extends_to: Option<String>,
        completeness_cert: Option<String>,
        provenance: String,
        origin: FamilyOrigin,
    ) -> Result<Self> {
        let width = so_pi1(target_r).ngens();
        if images.len() != domain_pi1.ngens() || images.iter().any(|row| row.len() != width) {
            return Err(Error::rejected(format!(
                "{label}: π₁ images must be {} rows of {width} entries (π₁({domain}) → π₁(SO({target_r})))",
                domain_pi1.ngens()
            )));
        }
        if matches!(params, FamilyParams::Fixed) && images.iter().flatten().any(|a| a.coeff != 0) {
            return Err(Error::rejected(format!("{label}: parameter-dependent image without params")));
        }
        let fam = OrthRepFamily {
            domain,
            target_r,
            label,
            params,
            distinct_classes,
            extends_to,
            completeness_cert,
            provenance,
            origin,
            domain_pi1,
            base_r: target_r,
            images,
            post: None,
        };
        // integrality and well-definedness are affine in the parameter, so
        // two consecutive admissible values decide them for all
        match &fam.params {
            FamilyParams::Fixed => {
                fam.instantiate(None)?;
            }
            FamilyParams::Integer(p) => {
                for a in fam.images.iter().flatten() {
                    if a.den <= 0 || (a.coeff * p.modulus) % a.den != 0 {
                        return Err(Error::rejected(format!(
                            "{}: image ({}·{} + {})/{} is not integral for every admissible {}",
                            fam.label, a.coeff, p.name, a.offset, a.den, p.name
                        )));
                    }
                }
                fam.instantiate(Some(p.residue))?;
                fam.instantiate(Some(p.residue + p.modulus))?;
            }
        }
        Ok(fam)
    }

    pub fn trivial(domain: &str, domain_pi1: FgAbGroup, r: u32) -> Self {
        let width = so_pi1(r).ngens();
        OrthRepFamily {
            domain: domain.to_owned(),
            target_r: r,
            label: "trivial".into(),
            params: FamilyParams::Fixed,
            distinct_classes: "single class".into(),
            extends_to: None,
            completeness_cert: None,
            provenance: "the constant homomorphism".into(),
            origin: FamilyOrigin::Trivial,
            images: vec![vec![AffineImage::constant(0); width]; domain_pi1.ngens()],
            domain_pi1,
            base_r: r,
            post: None,
        }
    }

    /// The family composed with the block inclusion `SO(target_r) ↪ SO(s)`.
    pub fn induced(&self, s: u32) -> Result<Self> {
        let inc = inclusion_pi1(self.target_r, s)?;
        let post = match &self.post {
            Some(p) => compose(&inc, p)?,
            None => inc,
        };
        let from_r = match self.origin {
            FamilyOrigin::Induced { from_r } => from_r,
            _ => self.target_r,
        };
        Ok(OrthRepFamily {
            target_r: s,
            label: format!("{} in SO({from_r}) ⊂ SO({s})", self.base_label()),
            origin: FamilyOrigin::Induced { from_r },
            extends_to: self.extends_to.clone(),
            completeness_cert: None,
            post: Some(post),
            ..self.clone()
        })
    }

    fn base_label(&self) -> &str {
        match self.label.find(" in SO(") {
            Some(i) if matches!(self.origin, FamilyOrigin::Induced { .. }) => &self.label[..i],
            _ => &self.label,
        }
    }

    pub fn param(&self) -> Option<&IntParam> {
        match &self.params {
            FamilyParams::Integer(p) => Some(p),
            FamilyParams::Fixed => None,
        }
    }

    pub fn domain_pi1(&self) -> &FgAbGroup {
        &self.domain_pi1
    }

    pub fn is_trivial(&self) -> bool {
        self.origin == FamilyOrigin::Trivial
    }

    /// Largest denominator among the parameter-dependent images.
    pub fn image_denominator(&self) -> i64 {
        self.images.iter().flatten().map(|a| a.den).max().unwrap_or(1)
    }

    /// `φ_♯` for one member of the family.
    pub fn instantiate(&self, s: Option<i64>) -> Result<AbHom> {
        let s = match (&self.params, s) {
            (FamilyParams::Fixed, _) => 0,
            (FamilyParams::Integer(p), Some(s)) if p.admits(s) => s,
            (FamilyParams::Integer(p), Some(s)) => {
                return Err(Error::rejected(format!(
                    "{}: {} = {s} violates {}",
                    self.label,
                    p.name,
                    p.describe()
                )))
            }
            (FamilyParams::Integer(p), None) => {
                return Err(Error::rejected(format!("{}: a value for {} is required", self.label, p.name)))
            }
        };
        let rows = self
            .images
            .iter()
            .map(|row| row.iter().map(|a| a.eval(s)).collect::<Result<Vec<i64>>>())
            .collect::<Result<Vec<_>>>()?;
        let base = AbHom::from_coords(self.domain_pi1.clone(), so_pi1(self.base_r), &rows)
            .map_err(|e| Error::rejected(format!("{}: {e}", self.label)))?;
        match &self.post {
            Some(p) => compose(p, &base),
            None => Ok(base),
        }
    }
}

/// The homomorphisms `H → SO(r)` known to the catalog.
#[derive(Debug, Clone)]
pub struct EnumResult {
    pub domain: String,
    pub r: u32,
    pub families: Vec<OrthRepFamily>,
    pub complete: bool,
    pub certificate: String,
    pub trace: RuleTrace,
}

/// Record of the rule engine's case analysis over candidate kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTrace {
    pub proved: bool,
    pub algebra: String,
    pub r: u32,
    pub steps: Vec<String>,
    pub summary: String,
}

fn so_dim(r: u32) -> u32 {
    r * r.saturating_sub(1) / 2
}

/// Runs the kernel case analysis: a nonzero homomorphism `a → so(r)` has a
/// kernel made of some simple ideals plus part of the center, and its
/// image (the quotient) must fit inside `so(r)`.
pub fn rule_trace(a: &AlgebraProfile, r: u32) -> RuleTrace {
    let k = a.ideals.len();
    let mut steps = Vec::new();
    let mut survivor = None;
    for mask in 0u32..(1 << k) {
        for z in 0..=a.center_rank {
            if mask == 0 && z == 0 {
                continue;
            }
            let kept: Vec<_> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| &a.ideals[i]).collect();
            let mut parts: Vec<String> = kept.iter().map(|i| i.kind.clone()).collect();
            match z {
                0 => {}
                1 => parts.push("u(1)".into()),
                z => parts.push(format!("u(1)^{z}")),
            }
            let quotient = parts.join("⊕");
            let dim = z + kept.iter().map(|i| i.dim).sum::<u32>();
            let verdict = if r <= 2 && !kept.is_empty() {
                Some(format!("not abelian, but so({r}) is abelian"))
            } else if dim > so_dim(r) {
                Some(format!("dimension {dim} exceeds dim so({r}) = {}", so_dim(r)))
            } else {
                kept.iter().find(|i| i.min_orth_rep_dim > r).map(|i| {
                    format!("{} has no nontrivial real representation of dimension < {}", i.kind, i.min_orth_rep_dim)
                })
            };
            match verdict {
                Some(reason) => steps.push(format!("image {quotient}: {reason}")),
                None => {
                    steps.push(format!("image {quotient}: not excluded"));
                    survivor.get_or_insert(quotient);
                }
            }
        }
    }
    let algebra = a.to_string();
    let summary = match &survivor {
        None => format!("{algebra} admits no nontrivial map to so({r})"),
        Some(q) => format!("cannot rule out a map {algebra} → so({r}) with image {q}"),
    };
    RuleTrace {
        proved: survivor.is_none(),
        algebra,
        r,
        steps,
        summary,
    }
}

/// True when the rule engine proves every homomorphism `a → so(r)` is zero.
pub fn no_nontrivial_hom(a: &AlgebraProfile, r: u32) -> bool {
    rule_trace(a, r).proved
}

/// Catalog families `H → SO(r)` plus the trivial homomorphism, with the
/// completeness status of the list.
pub fn enumerate_homs(catalog: &Catalog, h: &str, r: u32) -> Result<EnumResult> {
    if r == 0 {
        return Err(Error::rejected("r must be >= 1"));
    }
    let grp = liecat::lookup(catalog, h)?;
    let listed = catalog.families_at(&grp.name, r)?;
    let trace = rule_trace(&grp.algebra, r);
    if trace.proved && !listed.is_empty() {
        return Err(Error::rejected(format!(
            "catalog lists nontrivial families {} → SO({r}) but {}",
            grp.name, trace.summary
        )));
    }
    let covers_trivial = listed.iter().any(|f| f.param().is_some_and(|p| p.trivial_at.is_some()));
    let mut families = Vec::new();
    if !covers_trivial {
        families.push(OrthRepFamily::trivial(&grp.name, grp.pi1.clone(), r));
    }
    let certified = !listed.is_empty() && listed.iter().all(|f| f.completeness_cert.is_some());
    let complete = trace.proved || certified;
    let certificate = if trace.proved {
        trace.summary.clone()
    } else if certified {
        let mut certs: Vec<&str> = Vec::new();
        for c in listed.iter().filter_map(|f| f.completeness_cert.as_deref()) {
            if !certs.contains(&c) {
                certs.push(c);
            }
        }
        certs.join("; ")
    } else {
        format!("incomplete: no certificate covers {} → SO({r}); {}", grp.name, trace.summary)
    };
    families.extend(listed);
    Ok(EnumResult {
        domain: grp.name,
        r,
        families,
        complete,
        certificate,
        trace,
    })
}
