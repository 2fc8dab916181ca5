//! Finitely generated abelian groups with fixed, labelled generators.
//!
//! Every fundamental group in play (`SO(k)`, `Spin^r(n)`, isotropy groups)
//! is stored with an explicit ordered generating set. Elements are integer
//! coordinate vectors; torsion coordinates are kept reduced.

mod snf;

use std::fmt;

use crate::error::{Error, Result};
use snf::{smith, Mat};

/// One generator: a label and its order (`0` means infinite order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Generator {
    label: String,
    order: u64,
}

#[derive(Debug, Clone)]
pub struct FgAbGroup {
    gens: Vec<Generator>,
}

impl FgAbGroup {
    /// Free generators come first, then the torsion generators in order.
    pub fn new(free_rank: usize, torsion_orders: &[u64], labels: &[String]) -> Result<Self> {
        if labels.len() != free_rank + torsion_orders.len() {
            return Err(Error::rejected(format!(
                "{} generator labels for free rank {free_rank} and {} torsion orders",
                labels.len(),
                torsion_orders.len()
            )));
        }
        let orders = std::iter::repeat_n(0, free_rank).chain(torsion_orders.iter().copied());
        Self::from_generators(labels.iter().cloned().zip(orders))
    }

    /// Builds a group from `(label, order)` pairs in the given order.
    pub fn from_generators(gens: impl IntoIterator<Item = (String, u64)>) -> Result<Self> {
        let gens: Vec<Generator> = gens
            .into_iter()
            .map(|(label, order)| Generator { label, order })
            .collect();
        if let Some(g) = gens.iter().find(|g| g.order == 1) {
            return Err(Error::rejected(format!(
                "torsion generator `{}` has order 1; torsion orders must be >= 2",
                g.label
            )));
        }
        Ok(FgAbGroup { gens })
    }

    pub fn trivial() -> Self {
        FgAbGroup { gens: Vec::new() }
    }

    pub fn integers(label: &str) -> Self {
        FgAbGroup {
            gens: vec![Generator {
                label: label.to_owned(),
                order: 0,
            }],
        }
    }

    pub fn cyclic(label: &str, order: u64) -> Result<Self> {
        Self::from_generators([(label.to_owned(), order)])
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn free_rank(&self) -> usize {
        self.gens.iter().filter(|g| g.order == 0).count()
    }

    pub fn torsion_orders(&self) -> Vec<u64> {
        self.gens.iter().map(|g| g.order).filter(|&o| o != 0).collect()
    }

    /// Order of generator `i`, `None` when it has infinite order.
    pub fn order_of(&self, i: usize) -> Option<u64> {
        match self.gens[i].order {
            0 => None,
            d => Some(d),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.gens.iter().map(|g| g.label.as_str())
    }

    pub fn label(&self, i: usize) -> &str {
        &self.gens[i].label
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    /// Same generator orders in the same positions (labels ignored).
    pub fn same_shape(&self, other: &Self) -> bool {
        self.gens.len() == other.gens.len()
            && self.gens.iter().zip(&other.gens).all(|(a, b)| a.order == b.order)
    }

    /// Same generator orders and labels in the same positions.
    pub fn same_presentation(&self, other: &Self) -> bool {
        self.gens == other.gens
    }

    pub fn element(&self, coords: &[i64]) -> Result<AbElem> {
        if coords.len() != self.ngens() {
            return Err(Error::rejected(format!(
                "element has {} coordinates, group {self} has {} generators",
                coords.len(),
                self.ngens()
            )));
        }
        Ok(self.reduce(coords.to_vec()))
    }

    pub fn zero(&self) -> AbElem {
        AbElem {
            coords: vec![0; self.ngens()],
        }
    }

    /// The `i`-th generator as an element.
    pub fn basis(&self, i: usize) -> AbElem {
        let mut c = vec![0; self.ngens()];
        c[i] = 1;
        self.reduce(c)
    }

    fn reduce(&self, mut coords: Vec<i64>) -> AbElem {
        for (c, g) in coords.iter_mut().zip(&self.gens) {
            if g.order != 0 {
                *c = c.rem_euclid(g.order as i64);
            }
        }
        AbElem { coords }
    }

    pub fn contains_elem(&self, x: &AbElem) -> bool {
        x.coords.len() == self.ngens()
            && x.coords.iter().zip(&self.gens).all(|(&c, g)| g.order == 0 || (0..g.order as i64).contains(&c))
    }

    fn check_elem(&self, x: &AbElem) -> Result<()> {
        if self.contains_elem(x) {
            Ok(())
        } else {
            Err(Error::rejected(format!("{x} is not a reduced element of {self}")))
        }
    }

    pub fn add(&self, x: &AbElem, y: &AbElem) -> AbElem {
        self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64, x: &AbElem) -> AbElem {
        self.reduce(x.coords.iter().map(|a| k * a).collect())
    }

    pub fn neg(&self, x: &AbElem) -> AbElem {
        self.scale(-1, x)
    }

    /// Relation columns `d_i e_i` of the torsion generators.
    fn relation_columns(&self) -> Vec<Vec<i128>> {
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.order != 0)
            .map(|(i, g)| {
                let mut col = vec![0i128; self.ngens()];
                col[i] = i128::from(g.order);
                col
            })
            .collect()
    }
}

/// Equality is by free rank and the sorted torsion list.
impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        let sorted = |g: &FgAbGroup| {
            let mut t = g.torsion_orders();
            t.sort_unstable();
            t
        };
        self.free_rank() == other.free_rank() && sorted(self) == sorted(other)
    }
}

impl Eq for FgAbGroup {}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|g| match g.order {
                0 => "Z".to_owned(),
                d => format!("Z{d}"),
            })
            .collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// Direct product; generators of `a` precede those of `b` and labels are
/// prefixed with `1.` and `2.` respectively.
pub fn direct_product(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let tagged = |g: &FgAbGroup, tag: &str| {
        g.gens
            .iter()
            .map(|x| Generator {
                label: format!("{tag}.{}", x.label),
                order: x.order,
            })
            .collect::<Vec<_>>()
    };
    let mut gens = tagged(a, "1");
    gens.extend(tagged(b, "2"));
    FgAbGroup { gens }
}

/// An element given by coordinates on the ambient group's generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbElem {
    coords: Vec<i64>,
}

impl AbElem {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for AbElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A homomorphism given by the images of the domain generators.
#[derive(Debug, Clone)]
pub struct AbHom {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    images: Vec<AbElem>,
}

impl AbHom {
    /// Checks that each image is a reduced codomain element and that
    /// `d * image = 0` for every domain generator of order `d`.
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, images: Vec<AbElem>) -> Result<Self> {
        if images.len() != domain.ngens() {
            return Err(Error::rejected(format!(
                "{} images given for {} domain generators",
                images.len(),
                domain.ngens()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            codomain.check_elem(img)?;
            if let Some(d) = domain.order_of(i) {
                if !codomain.scale(d as i64, img).is_zero() {
                    return Err(Error::rejected(format!(
                        "generator `{}` has order {d} but its image {img} in {codomain} does not",
                        domain.label(i)
                    )));
                }
            }
        }
        Ok(AbHom {
            domain,
            codomain,
            images,
        })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_coords(domain: FgAbGroup, codomain: FgAbGroup, rows: &[Vec<i64>]) -> Result<Self> {
        let images = rows
            .iter()
            .map(|r| codomain.element(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, images)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        AbHom {
            domain: g.clone(),
            codomain: g.clone(),
            images: (0..g.ngens()).map(|i| g.basis(i)).collect(),
        }
    }

    pub fn zero(domain: &FgAbGroup, codomain: &FgAbGroup) -> Self {
        AbHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images: vec![codomain.zero(); domain.ngens()],
        }
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[AbElem] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(AbElem::is_zero)
    }

    pub fn apply(&self, x: &AbElem) -> Result<AbElem> {
        self.domain.check_elem(x)?;
        let coords = (0..self.codomain.ngens())
            .map(|j| {
                x.coords
                    .iter()
                    .zip(&self.images)
                    .map(|(&c, img)| c * img.coords[j])
                    .sum()
            })
            .collect();
        Ok(self.codomain.reduce(coords))
    }

    /// Pairs two maps out of the same domain into the product of codomains.
    pub fn pair(&self, other: &AbHom) -> Result<AbHom> {
        if !self.domain.same_presentation(&other.domain) {
            return Err(Error::rejected(format!(
                "cannot pair maps with domains {} and {}",
                self.domain, other.domain
            )));
        }
        let codomain = direct_product(&self.codomain, &other.codomain);
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut c = a.coords.clone();
                c.extend_from_slice(&b.coords);
                AbElem { coords: c }
            })
            .collect();
        Ok(AbHom {
            domain: self.domain.clone(),
            codomain,
            images,
        })
    }

    /// Kernel of the map, as a subgroup of the domain.
    pub fn kernel(&self) -> Subgroup {
        // x lies in the kernel iff F x is a combination of the codomain's
        // torsion relations: solve [F | -R] (x; y) = 0 over the integers.
        let m = self.domain.ngens();
        let rel = self.codomain.relation_columns();
        let rows = self.codomain.ngens();
        let cols = m + rel.len();
        let mat: Mat = (0..rows)
            .map(|j| {
                let mut row: Vec<i128> = self.images.iter().map(|img| i128::from(img.coords[j])).collect();
                row.extend(rel.iter().map(|c| -c[j]));
                row
            })
            .collect();
        let generators = if rows == 0 {
            (0..m).map(|i| self.domain.basis(i)).collect()
        } else {
            let s = smith(&mat, rows, cols);
            (s.rank()..cols)
                .map(|k| {
                    let coords = (0..m).map(|i| s.right[i][k] as i64).collect();
                    self.domain.reduce(coords)
                })
                .collect()
        };
        Subgroup {
            ambient: self.domain.clone(),
            generators,
        }
        .simplified()
    }
}

/// `f ∘ g`, defined when `codomain(g)` and `domain(f)` have the same shape.
pub fn compose(f: &AbHom, g: &AbHom) -> Result<AbHom> {
    if !g.codomain.same_shape(&f.domain) {
        return Err(Error::rejected(format!(
            "cannot compose: codomain {} does not match domain {}",
            g.codomain, f.domain
        )));
    }
    let images = g.images.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
    AbHom::new(g.domain.clone(), f.codomain.clone(), images)
}

pub fn image_subgroup(f: &AbHom) -> Subgroup {
    Subgroup {
        ambient: f.codomain.clone(),
        generators: f.images.clone(),
    }
}

/// Reduction onto `(Z2)^k`: each free generator and each even-order torsion
/// generator gets its own `Z2` factor; odd-order torsion maps to zero.
pub fn mod2(g: &FgAbGroup) -> AbHom {
    let kept: Vec<usize> = (0..g.ngens())
        .filter(|&i| g.order_of(i).is_none_or(|d| d % 2 == 0))
        .collect();
    let codomain = FgAbGroup {
        gens: kept
            .iter()
            .map(|&i| Generator {
                label: format!("{} mod 2", g.label(i)),
                order: 2,
            })
            .collect(),
    };
    let images = (0..g.ngens())
        .map(|i| match kept.iter().position(|&k| k == i) {
            Some(p) => codomain.basis(p),
            None => codomain.zero(),
        })
        .collect();
    AbHom {
        domain: g.clone(),
        codomain,
        images,
    }
}

#[derive(Debug, Clone)]
pub struct Subgroup {
    ambient: FgAbGroup,
    generators: Vec<AbElem>,
}

impl Subgroup {
    pub fn new(ambient: FgAbGroup, generators: Vec<AbElem>) -> Result<Self> {
        for g in &generators {
            ambient.check_elem(g)?;
        }
        Ok(Subgroup { ambient, generators })
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[AbElem] {
        &self.generators
    }

    /// Lattice in `Z^m` whose image in the ambient group is this subgroup:
    /// the generators plus the torsion relations, as columns.
    fn lattice(&self) -> (Mat, usize) {
        let m = self.ambient.ngens();
        let mut cols: Vec<Vec<i128>> = self
            .generators
            .iter()
            .map(|g| g.coords.iter().map(|&c| i128::from(c)).collect())
            .collect();
        cols.extend(self.ambient.relation_columns());
        let mat = (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        (mat, cols.len())
    }

    /// Exact membership test via Smith normal form of the lattice matrix.
    pub fn contains(&self, x: &AbElem) -> bool {
        if !self.ambient.contains_elem(x) {
            return false;
        }
        let m = self.ambient.ngens();
        if m == 0 {
            return true;
        }
        let (mat, cols) = self.lattice();
        if cols == 0 {
            return x.is_zero();
        }
        let s = smith(&mat, m, cols);
        let target: Vec<i128> = (0..m)
            .map(|i| (0..m).map(|k| s.left[i][k] * i128::from(x.coords[k])).sum())
            .collect();
        target.iter().enumerate().all(|(i, &t)| match s.diag.get(i) {
            Some(&d) => t % d == 0,
            None => t == 0,
        })
    }

    /// Index in the ambient group; `None` when infinite.
    pub fn index(&self) -> Option<u64> {
        let m = self.ambient.ngens();
        if m == 0 {
            return Some(1);
        }
        let (mat, cols) = self.lattice();
        if cols == 0 {
            return None;
        }
        let s = smith(&mat, m, cols);
        (s.rank() == m).then(|| s.diag.iter().product::<i128>() as u64)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient.same_shape(&other.ambient) && self.generators.iter().all(|g| other.contains(g))
    }

    /// Equality as sets of elements.
    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(AbElem::is_zero)
    }

    /// Drops zero generators, duplicates, and generators already in the
    /// span of the others (scanning from the back).
    pub fn simplified(&self) -> Subgroup {
        let mut gens: Vec<AbElem> = Vec::new();
        for g in &self.generators {
            if !g.is_zero() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let mut i = gens.len();
        while i > 0 {
            i -= 1;
            let mut rest = gens.clone();
            let g = rest.remove(i);
            let others = Subgroup {
                ambient: self.ambient.clone(),
                generators: rest.clone(),
            };
            if others.contains(&g) {
                gens = rest;
            }
        }
        Subgroup {
            ambient: self.ambient.clone(),
            generators: gens,
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(AbElem::to_string).collect();
        write!(f, "⟨{}⟩ ⊆ {}", gens.join(", "), self.ambient)
    }
}
