//! Brute-force membership oracle shared by the property and acceptance
//! targets.
#![allow(dead_code)]

use proptest::prelude::*;
use spinr::abelian::{FgAbGroup, Subgroup};

/// Coefficients searched per generator.
pub const BOX: i64 = 8;

#[derive(Debug, Clone)]
pub struct Instance {
    pub free: usize,
    pub torsion: Vec<u64>,
    pub gens: Vec<Vec<i64>>,
    pub x: Vec<i64>,
}

impl Instance {
    pub fn ambient(&self) -> FgAbGroup {
        let labels: Vec<String> = (0..self.free + self.torsion.len()).map(|i| format!("e{i}")).collect();
        FgAbGroup::new(self.free, &self.torsion, &labels).unwrap()
    }

    fn reduce(&self, v: &mut [i64]) {
        for (j, &d) in self.torsion.iter().enumerate() {
            let c = &mut v[self.free + j];
            *c = c.rem_euclid(d as i64);
        }
    }

    /// Searches every coefficient vector in `[-BOX, BOX]^k`.
    pub fn brute_force(&self) -> bool {
        let width = self.free + self.torsion.len();
        let mut target = self.x.clone();
        self.reduce(&mut target);
        let k = self.gens.len();
        let mut coeffs = vec![-BOX; k];
        loop {
            let mut v = vec![0i64; width];
            for (c, g) in coeffs.iter().zip(&self.gens) {
                for (vi, gi) in v.iter_mut().zip(g) {
                    *vi += c * gi;
                }
            }
            self.reduce(&mut v);
            if v == target {
                return true;
            }
            // odometer step
            let mut i = 0;
            loop {
                if i == k {
                    return false;
                }
                if coeffs[i] < BOX {
                    coeffs[i] += 1;
                    break;
                }
                coeffs[i] = -BOX;
                i += 1;
            }
        }
    }

    pub fn library(&self) -> bool {
        let amb = self.ambient();
        let gens = self.gens.iter().map(|g| amb.element(g).unwrap()).collect();
        let s = Subgroup::new(amb.clone(), gens).unwrap();
        s.contains(&amb.element(&self.x).unwrap())
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Ambient groups with free rank <= 2 and torsion orders <= 8; half of
/// the targets are built as small combinations of the generators so that
/// both verdicts occur often.
///
/// The coefficient box is only exhaustive when it covers every residue a
/// coefficient can matter modulo, so the torsion exponent (lcm of the
/// orders) is kept <= 8 and free coordinates stay in [-1, 1] (generators)
/// and [-2, 2] (targets): in Z3 × Z7 the
/// generator (1, 6) needs coefficient 10 to reach (1, 4).
pub fn instance() -> impl Strategy<Value = Instance> {
    let mut torsions: Vec<Vec<u64>> = vec![vec![]];
    for a in 2..=8u64 {
        torsions.push(vec![a]);
        for b in 2..=8u64 {
            if lcm(a, b) <= 8 {
                torsions.push(vec![a, b]);
            }
        }
    }
    (0usize..=2, prop::sample::select(torsions))
        .prop_map(|(f, t)| (if f + t.len() == 0 { 1 } else { f }, t))
        .prop_flat_map(|(free, torsion)| {
            let coord = |d: Option<u64>, lim: i64| -> BoxedStrategy<i64> {
                match d {
                    Some(d) => (0..d as i64).boxed(),
                    None => (-lim..=lim).boxed(),
                }
            };
            let shape: Vec<Option<u64>> =
                std::iter::repeat_n(None, free).chain(torsion.iter().copied().map(Some)).collect();
            let elem = move |lim: i64| shape.iter().map(|&d| coord(d, lim)).collect::<Vec<_>>();
            let gens = prop::collection::vec(elem(1), 0..=3);
            let random_x = elem(2);
            (Just(free), Just(torsion), gens, random_x, prop::collection::vec(-2i64..=2, 3), any::<bool>())
        })
        .prop_map(|(free, torsion, gens, random_x, c, combine)| {
            let x = if combine && !gens.is_empty() {
                let mut v = vec![0; random_x.len()];
                for (ci, g) in c.iter().zip(&gens) {
                    for (vi, gi) in v.iter_mut().zip(g) {
                        *vi += ci * gi;
                    }
                }
                v
            } else {
                random_x
            };
            Instance { free, torsion, gens, x }
        })
}
