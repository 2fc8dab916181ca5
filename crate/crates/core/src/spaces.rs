//! Homogeneous spaces `G/H`: classification of invariant spin^r structures,
//! the invariant spin type, the canonical structure and holonomy lifts.

use std::fmt;

use crate::abelian::AbHom;
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::liecat;
use crate::lifting::{lifts, so_pi1, LiftQuery, Witness};
use crate::repcat::{describe_class, enumerate_homs, rule_trace, FamilyOrigin, OrthRepFamily, RuleTrace};

/// A homogeneous space with its isotropy data on fundamental groups.
#[derive(Debug, Clone)]
pub struct HomSpaceRec {
    pub name: String,
    pub g: String,
    pub h: String,
    pub h_connected: bool,
    /// Dimension of `G/H`.
    pub n: u32,
    /// `σ_♯ : π₁(H) → π₁(SO(n))`.
    pub sigma_pi1: AbHom,
    pub provenance: String,
}

/// A holonomy group with its representation on fundamental groups.
#[derive(Debug, Clone)]
pub struct HolonomyRec {
    pub group: String,
    pub m: u32,
    /// `h_♯ : π₁(G) → π₁(SO(m))`.
    pub h_pi1: AbHom,
    pub provenance: String,
}

/// Residue classes of a parameter: `name ≡ r (mod modulus)` for `r` in
/// `residues`, reduced to the smallest period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    pub name: String,
    pub modulus: i64,
    pub residues: Vec<i64>,
}

impl ResidueSet {
    pub fn contains(&self, s: i64) -> bool {
        self.residues.contains(&s.rem_euclid(self.modulus))
    }

    /// Smallest-period description of the set `passing ⊆ Z/period`.
    fn reduce(name: &str, period: i64, passing: &[bool]) -> Self {
        let m = (1..=period)
            .filter(|m| period % m == 0)
            .find(|&m| (0..period).all(|x| passing[x as usize] == passing[((x + m) % period) as usize]))
            .unwrap_or(period);
        ResidueSet {
            name: name.to_owned(),
            modulus: m,
            residues: (0..m).filter(|&x| passing[x as usize]).collect(),
        }
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residues.as_slice() {
            [c] => write!(f, "{}", describe_class(&self.name, self.modulus, *c)),
            rs => {
                let list: Vec<String> = rs.iter().map(i64::to_string).collect();
                write!(f, "{} ≡ {} mod {}", self.name, list.join(", "), self.modulus)
            }
        }
    }
}

/// One conjugacy class (or parameterised family of classes) whose
/// product with the isotropy representation lifts.
#[derive(Debug, Clone)]
pub struct LiftClass {
    pub family: String,
    pub origin: FamilyOrigin,
    pub constraint: Option<ResidueSet>,
    /// `φ_♯` for one passing member (the first passing parameter value).
    pub representative: AbHom,
    pub representative_param: Option<i64>,
    pub extends_to: Option<String>,
    pub provenance: String,
}

/// A family none of whose members lifts.
#[derive(Debug, Clone)]
pub struct Rejection {
    pub family: String,
    pub param: Option<i64>,
    pub witnesses: Vec<Witness>,
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassCount {
    Finite(usize),
    /// Infinitely many pairwise inequivalent classes.
    Infinite,
}

impl fmt::Display for ClassCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassCount::Finite(k) => write!(f, "{k}"),
            ClassCount::Infinite => write!(f, "infinite family"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub space: String,
    pub r: u32,
    pub classes: Vec<LiftClass>,
    pub rejected: Vec<Rejection>,
    pub count: ClassCount,
    pub complete: bool,
    pub certificate: String,
    pub trace: Option<RuleTrace>,
}

impl Classification {
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn check_connected(catalog: &Catalog, h: &str, what: &str) -> Result<()> {
    let rec = liecat::lookup(catalog, h)?;
    if !rec.connected {
        return Err(Error::Hypothesis(format!(
            "{what} {h} is not connected; the correspondence between invariant structures and lifts of σ × φ requires connected H"
        )));
    }
    Ok(())
}

fn classify_family(
    n: u32,
    r: u32,
    sigma: &AbHom,
    fam: &OrthRepFamily,
    classes: &mut Vec<LiftClass>,
    rejected: &mut Vec<Rejection>,
) -> Result<()> {
    let test = |s: Option<i64>| -> Result<Vec<Witness>> {
        let phi = fam.instantiate(s)?;
        let q = LiftQuery::new(n, r, sigma.clone(), phi)?;
        Ok(lifts(&q).witness_failures)
    };
    let class = |constraint, param: Option<i64>| -> Result<LiftClass> {
        Ok(LiftClass {
            family: fam.label.clone(),
            origin: fam.origin,
            constraint,
            representative: fam.instantiate(param)?,
            representative_param: param,
            extends_to: fam.extends_to.clone(),
            provenance: fam.provenance.clone(),
        })
    };
    match fam.param() {
        None => {
            let w = test(None)?;
            if w.is_empty() {
                classes.push(class(None, None)?);
            } else {
                rejected.push(Rejection {
                    family: fam.label.clone(),
                    param: None,
                    witnesses: w,
                    provenance: fam.provenance.clone(),
                });
            }
        }
        Some(p) => {
            // whether a member lifts depends only on the parity of its
            // affine π₁ image, so it is periodic with period 2·den·modulus
            let period = 2 * fam.image_denominator() * p.modulus;
            let mut passing = vec![false; period as usize];
            let mut first_pass = None;
            for t in 0..(period / p.modulus) {
                let s = p.residue + p.modulus * t;
                if test(Some(s))?.is_empty() {
                    passing[s.rem_euclid(period) as usize] = true;
                    first_pass.get_or_insert(s);
                }
            }
            match first_pass {
                Some(s) => {
                    let set = ResidueSet::reduce(&p.name, period, &passing);
                    classes.push(class(Some(set), Some(s))?);
                }
                None => rejected.push(Rejection {
                    family: fam.label.clone(),
                    param: Some(p.residue),
                    witnesses: test(Some(p.residue))?,
                    provenance: fam.provenance.clone(),
                }),
            }
        }
    }
    Ok(())
}

/// Lifts of `σ × φ` for `φ` ranging over the known homomorphisms `H → SO(r)`.
///
/// When the families at `r` are not certified complete, families from
/// smaller targets pushed forward along `SO(r') ⊂ SO(r)` are tried as well.
fn classify_pi1(catalog: &Catalog, label: &str, h: &str, n: u32, sigma: &AbHom, r: u32) -> Result<Classification> {
    if r == 0 {
        return Err(Error::rejected("r must be >= 1"));
    }
    let en = enumerate_homs(catalog, h, r)?;
    let mut families = en.families;
    if !en.complete {
        for lower in 1..r {
            for fam in enumerate_homs(catalog, h, lower)?.families {
                if fam.origin == FamilyOrigin::Catalog {
                    families.push(fam.induced(r)?);
                }
            }
        }
    }
    let mut classes = Vec::new();
    let mut rejected = Vec::new();
    for fam in &families {
        classify_family(n, r, sigma, fam, &mut classes, &mut rejected)?;
    }
    let count = if classes.iter().any(|c| c.constraint.is_some()) {
        ClassCount::Infinite
    } else {
        ClassCount::Finite(classes.len())
    };
    Ok(Classification {
        space: label.to_owned(),
        r,
        classes,
        rejected,
        count,
        complete: en.complete,
        certificate: en.certificate,
        trace: Some(en.trace),
    })
}

/// Invariant spin^r structures on `space`, up to equivariant equivalence.
pub fn classify(catalog: &Catalog, space: &HomSpaceRec, r: u32) -> Result<Classification> {
    if !space.h_connected {
        return Err(Error::Hypothesis(format!(
            "isotropy group {} of {} is not connected; the lifting correspondence requires connected H",
            space.h, space.name
        )));
    }
    check_connected(catalog, &space.h, "isotropy group")?;
    classify_pi1(catalog, &space.name, &space.h, space.n, &space.sigma_pi1, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinTypeStatus {
    Exact,
    /// Some smaller `r` could not be ruled out.
    Bounded,
}

impl fmt::Display for SpinTypeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinTypeStatus::Exact => write!(f, "exact"),
            SpinTypeStatus::Bounded => write!(f, "bounded"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpinTypeResult {
    pub space: String,
    pub lo: u32,
    pub hi: u32,
    pub status: SpinTypeStatus,
    pub witnesses: Vec<LiftClass>,
}

impl SpinTypeResult {
    pub fn value(&self) -> Option<u32> {
        (self.status == SpinTypeStatus::Exact).then_some(self.hi)
    }
}

impl fmt::Display for SpinTypeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{} ({})", self.hi, self.status)
        } else {
            write!(f, "[{}, {}] ({})", self.lo, self.hi, self.status)
        }
    }
}

/// The least `r` admitting an invariant spin^r structure.
pub fn invariant_spin_type(catalog: &Catalog, space: &HomSpaceRec) -> Result<SpinTypeResult> {
    let mut lo = None;
    for r in 1..=space.n {
        let c = classify(catalog, space, r)?;
        if !c.is_empty() {
            let lo = lo.unwrap_or(r);
            return Ok(SpinTypeResult {
                space: space.name.clone(),
                lo,
                hi: r,
                status: if lo == r { SpinTypeStatus::Exact } else { SpinTypeStatus::Bounded },
                witnesses: c.classes,
            });
        }
        if !c.complete {
            lo.get_or_insert(r);
        }
    }
    // only reachable when the catalog misses the diagonal family at n
    let canon = canonical_structure(catalog, space)?;
    Ok(SpinTypeResult {
        space: space.name.clone(),
        lo: lo.unwrap_or(canon.r),
        hi: canon.r,
        status: SpinTypeStatus::Bounded,
        witnesses: canon.classes,
    })
}

/// The structure every space of dimension `n >= 3` carries: spin when
/// `σ_♯ = 0`, otherwise spin^n via the diagonal `φ = σ`.
pub fn canonical_structure(catalog: &Catalog, space: &HomSpaceRec) -> Result<Classification> {
    if space.n < 3 {
        return Err(Error::Hypothesis(format!(
            "{} has dimension {} < 3; the canonical construction needs n >= 3",
            space.name, space.n
        )));
    }
    check_connected(catalog, &space.h, "isotropy group")?;
    let h = liecat::lookup(catalog, &space.h)?;
    let sigma = &space.sigma_pi1;
    let (r, phi, family, certificate) = if sigma.is_zero() {
        (1, AbHom::zero(sigma.domain(), &so_pi1(1)), "trivial", "σ_♯ = 0: the isotropy representation lifts to Spin(n)")
    } else {
        (space.n, sigma.clone(), "diagonal φ = σ", "σ × σ lands in the diagonal of π₁(SO(n)) × π₁(SO(n))")
    };
    let q = LiftQuery::new(space.n, r, sigma.clone(), phi.clone())?;
    let verdict = lifts(&q);
    if !verdict.lifts {
        return Err(Error::rejected(format!("canonical class on {} does not lift", space.name)));
    }
    Ok(Classification {
        space: space.name.clone(),
        r,
        classes: vec![LiftClass {
            family: family.into(),
            origin: if r == 1 { FamilyOrigin::Trivial } else { FamilyOrigin::Canonical },
            constraint: None,
            representative: phi,
            representative_param: None,
            extends_to: None,
            provenance: space.provenance.clone(),
        }],
        rejected: Vec::new(),
        count: ClassCount::Finite(1),
        // r = 1 classes are unique; at r = n only the canonical one is listed
        complete: r == 1,
        certificate: certificate.into(),
        trace: Some(rule_trace(&h.algebra, r)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone)]
pub struct HolonomyVerdict {
    pub group: String,
    pub m: u32,
    pub r: u32,
    pub verdict: TriState,
    pub classification: Classification,
    pub provenance: String,
}

/// Does the holonomy representation `G → SO(m)` lift to `Spin^r(m)`
/// after pairing with some `ψ : G → SO(r)`?
pub fn holonomy_lift(catalog: &Catalog, group: &str, m: u32, r: u32) -> Result<HolonomyVerdict> {
    let rec = catalog.holonomy(group)?;
    if rec.m != m {
        return Err(Error::rejected(format!(
            "{} acts on R^{} as a holonomy group, not on R^{m}",
            rec.group, rec.m
        )));
    }
    check_connected(catalog, &rec.group, "holonomy group")?;
    let label = format!("holonomy {} ⊂ SO({m})", rec.group);
    let c = classify_pi1(catalog, &label, &rec.group, m, &rec.h_pi1, r)?;
    let verdict = match (c.is_empty(), c.complete) {
        (false, _) => TriState::Yes,
        (true, true) => TriState::No,
        (true, false) => TriState::Unknown,
    };
    Ok(HolonomyVerdict {
        group: rec.group,
        m,
        r,
        verdict,
        classification: c,
        provenance: rec.provenance,
    })
}
