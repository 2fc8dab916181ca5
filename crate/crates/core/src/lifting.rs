//! The covering `Spin^r(n) → SO(n) × SO(r)` on fundamental groups and the
//! lifting test for a pair of homomorphisms out of a connected group.

use crate::abelian::{direct_product, AbElem, AbHom, FgAbGroup, Subgroup};
use crate::error::{Error, Result};

/// `π₁(SO(k))`: trivial for `k = 1`, `Z` for `k = 2`, `Z2` for `k >= 3`.
/// The single generator is labelled `SO(k)`.
pub fn so_pi1(k: u32) -> FgAbGroup {
    let label = format!("SO({k})");
    match k {
        0 | 1 => FgAbGroup::trivial(),
        2 => FgAbGroup::integers(&label),
        _ => FgAbGroup::cyclic(&label, 2).expect("order 2 is valid"),
    }
}

fn z2() -> FgAbGroup {
    FgAbGroup::cyclic("w", 2).expect("order 2 is valid")
}

/// Parity of a loop in `SO(k)`: the obstruction to lifting it to a loop in
/// `Spin(k)`. Zero on the trivial group `π₁(SO(1))`.
fn parity(k: u32) -> AbHom {
    let dom = so_pi1(k);
    let rows: Vec<Vec<i64>> = (0..dom.ngens()).map(|_| vec![1]).collect();
    AbHom::from_coords(dom, z2(), &rows).expect("parity is well defined")
}

fn check_rank(k: u32, what: &str) -> Result<()> {
    if k == 0 {
        Err(Error::rejected(format!("{what} must be >= 1")))
    } else {
        Ok(())
    }
}

/// Image of `π₁(Spin^r(n))` in `π₁(SO(n)) × π₁(SO(r))`: the pairs whose
/// two parities agree.
pub fn lift_subgroup(n: u32, r: u32) -> Result<Subgroup> {
    check_rank(n, "n")?;
    check_rank(r, "r")?;
    let (pn, pr) = (parity(n), parity(r));
    let ambient = direct_product(pn.domain(), pr.domain());
    let rows: Vec<Vec<i64>> = pn
        .images()
        .iter()
        .chain(pr.images())
        .map(|x| x.coords().to_vec())
        .collect();
    let character = AbHom::from_coords(ambient, z2(), &rows)?;
    Ok(character.kernel())
}

/// The data of one lifting question: `σ_♯` and `φ_♯` out of `π₁(H)`.
#[derive(Debug, Clone)]
pub struct LiftQuery {
    pub n: u32,
    pub r: u32,
    pub sigma_pi1: AbHom,
    pub phi_pi1: AbHom,
}

impl LiftQuery {
    pub fn new(n: u32, r: u32, sigma_pi1: AbHom, phi_pi1: AbHom) -> Result<Self> {
        check_rank(n, "n")?;
        check_rank(r, "r")?;
        if !sigma_pi1.domain().same_presentation(phi_pi1.domain()) {
            return Err(Error::rejected(format!(
                "σ and φ have different domains ({} vs {})",
                sigma_pi1.domain(),
                phi_pi1.domain()
            )));
        }
        if !sigma_pi1.codomain().same_shape(&so_pi1(n)) {
            return Err(Error::rejected(format!(
                "σ_♯ must land in π₁(SO({n})) = {}, got {}",
                so_pi1(n),
                sigma_pi1.codomain()
            )));
        }
        if !phi_pi1.codomain().same_shape(&so_pi1(r)) {
            return Err(Error::rejected(format!(
                "φ_♯ must land in π₁(SO({r})) = {}, got {}",
                so_pi1(r),
                phi_pi1.codomain()
            )));
        }
        Ok(LiftQuery {
            n,
            r,
            sigma_pi1,
            phi_pi1,
        })
    }
}

/// A generator of `π₁(H)` whose image escapes the covering subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub generator: String,
    pub image: AbElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftVerdict {
    pub lifts: bool,
    pub witness_failures: Vec<Witness>,
}

/// Decides whether `σ × φ` lifts along `Spin^r(n) → SO(n) × SO(r)`.
pub fn lifts(q: &LiftQuery) -> LiftVerdict {
    let pair = q.sigma_pi1.pair(&q.phi_pi1).expect("LiftQuery domains agree");
    let target = lift_subgroup(q.n, q.r).expect("LiftQuery ranks are >= 1");
    let witness_failures: Vec<Witness> = pair
        .images()
        .iter()
        .enumerate()
        .filter(|(_, img)| !target.contains(img))
        .map(|(i, img)| Witness {
            generator: pair.domain().label(i).to_owned(),
            image: img.clone(),
        })
        .collect();
    LiftVerdict {
        lifts: witness_failures.is_empty(),
        witness_failures,
    }
}

/// `π₁` of the block inclusion `SO(r) ↪ SO(s)`.
pub fn inclusion_pi1(r: u32, s: u32) -> Result<AbHom> {
    check_rank(r, "r")?;
    if s <= r {
        return Err(Error::rejected(format!("inclusion SO({r}) → SO({s}) needs s > r")));
    }
    let dom = so_pi1(r);
    let rows: Vec<Vec<i64>> = (0..dom.ngens()).map(|_| vec![1]).collect();
    AbHom::from_coords(dom, so_pi1(s), &rows)
}

/// Pushes `φ_♯` forward along `SO(r) ↪ SO(s)`.
pub fn induce(phi_pi1: &AbHom, r: u32, s: u32) -> Result<AbHom> {
    if !phi_pi1.codomain().same_shape(&so_pi1(r)) {
        return Err(Error::rejected(format!(
            "φ_♯ lands in {}, not π₁(SO({r}))",
            phi_pi1.codomain()
        )));
    }
    crate::abelian::compose(&inclusion_pi1(r, s)?, phi_pi1)
}
