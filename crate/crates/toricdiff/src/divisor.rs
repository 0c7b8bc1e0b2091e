//! Torus-invariant Weil divisors, linear equivalence, the divisor class
//! group, and the affine transport of divisors along a ray reflection.

use crate::fan::{Fan, ReflectionWitness};
use crate::intlat;
use num::{BigInt, One, Signed, ToPrimitive};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DivisorError {
    #[error("divisor has {got} coefficients but the fan has {expected} rays")]
    Length { got: usize, expected: usize },
    #[error("fan is not regular")]
    NotRegular,
    #[error("reflection witness does not relate the two fans")]
    BadWitness,
}

/// Invariant Weil divisor `sum a_i D_i`, one integer per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilDivisor {
    pub coeffs: Vec<i64>,
}

impl WeilDivisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        WeilDivisor { coeffs }
    }

    pub fn zero(rays: usize) -> Self {
        WeilDivisor { coeffs: vec![0; rays] }
    }

    /// `c * D_i` (0-based ray index).
    pub fn multiple_of_ray(rays: usize, i: usize, c: i64) -> Self {
        let mut coeffs = vec![0; rays];
        coeffs[i] = c;
        WeilDivisor { coeffs }
    }

    pub fn sub(&self, other: &WeilDivisor) -> WeilDivisor {
        WeilDivisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &WeilDivisor) -> WeilDivisor {
        WeilDivisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl fmt::Display for WeilDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Divisor of the character `mu`: coefficients `<mu, k_i>`.
pub fn character_divisor(fan: &Fan, mu: &[i64]) -> WeilDivisor {
    assert_eq!(mu.len(), fan.rank(), "character has wrong length");
    let coeffs = fan
        .generators()
        .iter()
        .map(|k| k.iter().zip(mu).map(|(&a, &b)| a * b).sum())
        .collect();
    WeilDivisor { coeffs }
}

/// Coordinates of a divisor class: torsion residues plus free coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|x| x.to_string()).collect();
        let fr: Vec<String> = self.free.iter().map(|x| x.to_string()).collect();
        if t.is_empty() {
            write!(f, "[{}]", fr.join(", "))
        } else {
            write!(f, "[torsion {}; {}]", t.join(", "), fr.join(", "))
        }
    }
}

/// The group of invariant Weil divisors modulo divisors of characters,
/// presented by invariant factors plus projection functionals computed from
/// the Smith form of the character matrix.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    torsion_functionals: Vec<(BigInt, Vec<BigInt>)>,
    free_functionals: Vec<Vec<BigInt>>,
}

impl ClassGroup {
    /// Class coordinates of a divisor under the stored projection.
    pub fn class_of(&self, d: &WeilDivisor) -> DivisorClass {
        let v: Vec<BigInt> = d.coeffs.iter().map(|&x| BigInt::from(x)).collect();
        let torsion = self
            .torsion_functionals
            .iter()
            .map(|(modulus, row)| {
                let pairing: BigInt = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                pairing.mod_floor(modulus)
            })
            .collect();
        let free = self
            .free_functionals
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        DivisorClass { torsion, free }
    }

    /// For class groups of rank one: the integer coordinate of the class.
    pub fn degree(&self, d: &WeilDivisor) -> Option<BigInt> {
        if self.free_rank == 1 && self.torsion.is_empty() {
            Some(self.class_of(d).free[0].clone())
        } else {
            None
        }
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self
            .torsion
            .iter()
            .map(|t| format!("Z/{t}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

trait ModFloor {
    fn mod_floor(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor(&self, m: &BigInt) -> BigInt {
        num::Integer::mod_floor(self, m)
    }
}

/// Class group of a regular fan: the cokernel of the character map
/// `mu -> sum <mu, k_i> D_i`.
///
/// For the split-sign catalog (rank-one class group, `d = n + 1` rays) the
/// free functional is sign-normalized so that the last ray's divisor class
/// is `+1`.
pub fn class_group(fan: &Fan) -> Result<ClassGroup, DivisorError> {
    if !fan.is_regular() {
        return Err(DivisorError::NotRegular);
    }
    let a = fan.character_matrix();
    let snf = intlat::smith_normal_form(&a);
    let factors = snf.invariant_factors();
    let rank = factors.len();
    let d = a.rows();

    let mut torsion_functionals = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        if !f.is_one() {
            torsion_functionals.push((f.clone(), snf.u.row(i)));
        }
    }
    // rows of U beyond the rank span the functionals vanishing on the image;
    // Hermite-reduce for a canonical choice
    let free_rows: Vec<Vec<BigInt>> = (rank..d).map(|i| snf.u.row(i)).collect();
    let mut free_functionals = intlat::hermite_basis(free_rows);
    if free_functionals.len() == 1 && free_functionals[0][d - 1].is_negative() {
        for x in free_functionals[0].iter_mut() {
            *x = -x.clone();
        }
    }
    Ok(ClassGroup {
        torsion: factors.iter().filter(|f| !f.is_one()).cloned().collect(),
        free_rank: d - rank,
        torsion_functionals,
        free_functionals,
    })
}

/// Decides linear equivalence `d1 ~ d2` and returns the witness character
/// when it exists.
pub fn linearly_equivalent(fan: &Fan, d1: &WeilDivisor, d2: &WeilDivisor) -> Option<Vec<i64>> {
    assert_eq!(d1.coeffs.len(), fan.ray_count());
    assert_eq!(d2.coeffs.len(), fan.ray_count());
    let a = fan.character_matrix();
    let b: Vec<BigInt> = d1
        .coeffs
        .iter()
        .zip(&d2.coeffs)
        .map(|(&x, &y)| BigInt::from(x - y))
        .collect();
    let mu = intlat::solve(&a, &b)?;
    Some(mu.iter().map(|x| x.to_i64().expect("witness overflow")).collect())
}

/// Transports a divisor along a ray reflection: coefficient `a_i` goes to
/// `a_i` on unflipped rays and to `-(a_i + 1)` on flipped ones, carried
/// through the ray renumbering. Well-defined on classes.
pub fn transport(
    f1: &Fan,
    f2: &Fan,
    witness: &ReflectionWitness,
    d: &WeilDivisor,
) -> Result<WeilDivisor, DivisorError> {
    if d.coeffs.len() != f1.ray_count() {
        return Err(DivisorError::Length { got: d.coeffs.len(), expected: f1.ray_count() });
    }
    if !witness.verify(f1, f2) {
        return Err(DivisorError::BadWitness);
    }
    let mut out = vec![0i64; f2.ray_count()];
    for (i, &j) in witness.renumbering.iter().enumerate() {
        out[j] = if witness.flips.contains(&i) {
            -(d.coeffs[i] + 1)
        } else {
            d.coeffs[i]
        };
    }
    Ok(WeilDivisor { coeffs: out })
}

/// Class-level version of [`transport`]: transports a representative and
/// projects into the partner class group.
pub fn transport_class(
    f1: &Fan,
    f2: &Fan,
    witness: &ReflectionWitness,
    d: &WeilDivisor,
) -> Result<DivisorClass, DivisorError> {
    let image = transport(f1, f2, witness, d)?;
    let cg = class_group(f2)?;
    Ok(cg.class_of(&image))
}
