//! `PSL(2,q) ≤ PGL(2,q) ≤ PΓL(2,q)` on the projective line, for the small
//! prime powers `q ∈ {4, 5, 7, 8, 9}`.
//!
//! Field elements are labelled `0..q`; the point at infinity is `q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Which projective group to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectiveKind {
    Psl,
    Pgl,
    PGammaL,
}

impl std::str::FromStr for ProjectiveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psl" => Ok(Self::Psl),
            "pgl" => Ok(Self::Pgl),
            "pgammal" | "pgaml" | "pγl" => Ok(Self::PGammaL),
            other => Err(Error::InvalidArgument(format!("unknown projective group kind {other:?}"))),
        }
    }
}

/// A finite field of order `p^e` with elements encoded as base-`p` digit
/// vectors of polynomial coefficients, stored as addition/multiplication tables.
#[derive(Debug, Clone)]
pub struct SmallField {
    pub p: usize,
    pub e: u32,
    pub q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl SmallField {
    /// `modulus` holds the low coefficients of a monic irreducible polynomial
    /// of degree `e` (the leading 1 is implicit).
    fn new(p: usize, e: u32, modulus: &[usize]) -> Self {
        let q = p.pow(e);
        let digits = |mut x: usize| -> Vec<usize> {
            (0..e)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = (0..e as usize).map(|i| (da[i] + db[i]) % p).collect();
                add[a * q + b] = encode(&sum);
                // schoolbook product, then reduce by the modulus
                let mut prod = vec![0usize; 2 * e as usize];
                for i in 0..e as usize {
                    for j in 0..e as usize {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for deg in (e as usize..2 * e as usize).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        prod[deg] = 0;
                        for (i, &m) in modulus.iter().enumerate() {
                            let idx = deg - e as usize + i;
                            prod[idx] = (prod[idx] + p * p - c * m % p) % p;
                        }
                    }
                }
                mul[a * q + b] = encode(&prod[..e as usize]);
            }
        }
        SmallField { p, e, q, add, mul }
    }

    /// The field of order `q`, for `q` a supported prime power.
    pub fn of_order(q: usize) -> Result<Self> {
        match q {
            4 => Ok(Self::new(2, 2, &[1, 1])),    // x^2 + x + 1
            8 => Ok(Self::new(2, 3, &[1, 1, 0])), // x^3 + x + 1
            9 => Ok(Self::new(3, 2, &[1, 0])),    // x^2 + 1
            2 | 3 | 5 | 7 | 11 | 13 => Ok(Self::new(q, 1, &[0])),
            _ => Err(Error::Unsupported(format!("field of order {q}"))),
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, _| self.mul(acc, a))
    }

    /// Smallest element generating the multiplicative group.
    pub fn primitive_element(&self) -> usize {
        (2..self.q)
            .find(|&a| {
                let mut x = a;
                let mut ord = 1;
                while x != 1 {
                    x = self.mul(x, a);
                    ord += 1;
                }
                ord == self.q - 1
            })
            .unwrap_or(1)
    }

    /// Frobenius automorphism `x -> x^p`.
    pub fn frobenius(&self, a: usize) -> usize {
        self.pow(a, self.p)
    }
}

/// Permutation of the projective line induced by a point map on `0..=q`.
fn line_map(q: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::from_images((0..=q).map(f).collect()).expect("projective map is a bijection")
}

/// The projective group of the given kind acting on the `q+1` points of the
/// projective line over `GF(q)`.
pub fn projective_group(q: usize, kind: ProjectiveKind) -> Result<PermGroup> {
    if ![4, 5, 7, 8, 9].contains(&q) {
        return Err(Error::Unsupported(format!(
            "projective groups are built for q in {{4, 5, 7, 8, 9}}, not {q}"
        )));
    }
    let f = SmallField::of_order(q)?;
    let inf = q;
    let omega = f.primitive_element();

    let translate = line_map(q, |x| if x == inf { inf } else { f.add(x, 1) });
    let scale = |a: usize| line_map(q, |x| if x == inf { inf } else { f.mul(a, x) });
    // x -> -1/x, which has determinant 1
    let neg_inv = line_map(q, |x| {
        if x == inf {
            0
        } else if x == 0 {
            inf
        } else {
            f.neg(f.inv(x).unwrap())
        }
    });

    let mut gens = vec![translate, neg_inv];
    match kind {
        ProjectiveKind::Psl => gens.push(scale(f.mul(omega, omega))),
        ProjectiveKind::Pgl => gens.push(scale(omega)),
        ProjectiveKind::PGammaL => {
            gens.push(scale(omega));
            gens.push(line_map(q, |x| if x == inf { inf } else { f.frobenius(x) }));
        }
    }
    PermGroup::new(q + 1, gens)
}
