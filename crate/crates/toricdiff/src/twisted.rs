//! Quotient presentation of the ring of twisted differential operators on a
//! regular toric variety: the torus-invariant subalgebra of the Weyl algebra
//! in one variable per ray, modulo the two-sided ideal generated by the
//! weighted Euler operators `sum_i m_i Q_i P_i - chi(m)` for `m` in the
//! kernel lattice of the ray map.
//!
//! The central piece is a decidable canonical form: an invariant element is
//! written in the weight-graded Euler form, and for each weight `w` the
//! polynomial part is reduced modulo the affine-linear relations
//! `<m, theta> = chi(m) - <m, w+>` obtained by commuting the ideal
//! generators past `Q^{w+}`. The generators are central in the invariant
//! subalgebra, so this graded substitution computes exactly the quotient.

use crate::divisor::WeilDivisor;
use crate::fan::{Fan, ReflectionWitness};
use crate::intlat::{self, ratmat::RatMatrix};
use crate::report::{Check, Report};
use crate::weyl::{coeff_int, Coeff, ThetaForm, ThetaPoly, WeylElement};
use num::{BigInt, BigRational, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TwistedError {
    #[error("fan is not regular")]
    NotRegular,
    #[error("divisor has {got} coefficients but the fan has {expected} rays")]
    DivisorLength { got: usize, expected: usize },
    #[error("element is not invariant: weight {0:?} does not pair to zero with the kernel")]
    NotInvariant(Vec<i64>),
    #[error("vector is not in the kernel lattice")]
    NotInKernel,
}

/// One relation used by the canonical form: a rational combination of the
/// kernel basis, normalized so the pivot Euler variable has coefficient one
/// and is eliminated everywhere else.
#[derive(Clone, Debug)]
struct ReductionRow {
    pivot: usize,
    coeffs: Vec<BigRational>,
}

/// Presentation data for the twisted operator ring of a regular fan and an
/// invariant divisor.
#[derive(Clone, Debug)]
pub struct TwistedRing {
    fan: Fan,
    divisor: WeilDivisor,
    kernel: Vec<Vec<i64>>,
    kernel_complement: Vec<Vec<i64>>,
    reduction: Vec<ReductionRow>,
}

impl TwistedRing {
    pub fn new(fan: Fan, divisor: WeilDivisor) -> Result<Self, TwistedError> {
        if divisor.coeffs.len() != fan.ray_count() {
            return Err(TwistedError::DivisorLength {
                got: divisor.coeffs.len(),
                expected: fan.ray_count(),
            });
        }
        if !fan.is_regular() {
            return Err(TwistedError::NotRegular);
        }
        let ray_map = fan.ray_matrix();
        let kernel_lattice = intlat::kernel_basis(&ray_map);
        let kernel: Vec<Vec<i64>> = kernel_lattice
            .basis()
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64().expect("kernel entry overflow")).collect())
            .collect();
        let complement_lattice = intlat::orthogonal_complement(&kernel_lattice);
        let kernel_complement: Vec<Vec<i64>> = complement_lattice
            .basis()
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64().expect("entry overflow")).collect())
            .collect();
        // rational elimination of the kernel rows with pivots scanned from
        // the last coordinate down, for a deterministic canonical form
        let reduction = if kernel.is_empty() {
            Vec::new()
        } else {
            let mut m = RatMatrix::from_i64_rows(&kernel);
            let order: Vec<usize> = (0..fan.ray_count()).rev().collect();
            let pivots = m.rref_with_column_order(&order);
            pivots
                .iter()
                .map(|&(r, c)| ReductionRow { pivot: c, coeffs: m.row(r) })
                .collect()
        };
        Ok(TwistedRing { fan, divisor, kernel, kernel_complement, reduction })
    }

    /// Same presentation with a different twist. The kernel lattice and the
    /// reduction pivots do not depend on the divisor, so no revalidation is
    /// needed.
    pub fn with_divisor(&self, divisor: WeilDivisor) -> Result<Self, TwistedError> {
        if divisor.coeffs.len() != self.fan.ray_count() {
            return Err(TwistedError::DivisorLength {
                got: divisor.coeffs.len(),
                expected: self.fan.ray_count(),
            });
        }
        let mut out = self.clone();
        out.divisor = divisor;
        Ok(out)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn divisor(&self) -> &WeilDivisor {
        &self.divisor
    }

    /// Number of Weyl-algebra variables (= number of rays).
    pub fn dim(&self) -> usize {
        self.fan.ray_count()
    }

    /// Canonical basis of the kernel lattice of the ray map.
    pub fn kernel_basis(&self) -> &[Vec<i64>] {
        &self.kernel
    }

    /// Canonical basis of the saturated orthogonal complement: the lattice
    /// of allowed torus weights.
    pub fn weight_lattice_basis(&self) -> &[Vec<i64>] {
        &self.kernel_complement
    }

    /// The twist functional `m -> sum_i a_i m_i`.
    pub fn twist(&self, m: &[i64]) -> i64 {
        self.divisor.coeffs.iter().zip(m).map(|(&a, &b)| a * b).sum()
    }

    fn twist_rat(&self, m: &[BigRational]) -> BigRational {
        self.divisor
            .coeffs
            .iter()
            .zip(m)
            .map(|(&a, b)| BigRational::from_integer(BigInt::from(a)) * b)
            .sum()
    }

    fn weight_is_allowed(&self, w: &[i64]) -> bool {
        self.kernel
            .iter()
            .all(|m| m.iter().zip(w).map(|(&a, &b)| a * b).sum::<i64>() == 0)
    }

    /// True iff every torus weight of the element pairs to zero with the
    /// kernel lattice.
    pub fn is_invariant(&self, a: &WeylElement) -> bool {
        a.torus_weights().iter().all(|w| self.weight_is_allowed(w))
    }

    /// The ideal generator attached to a kernel vector:
    /// `sum_i m_i Q_i P_i - chi(m)`.
    pub fn ideal_generator(&self, m: &[i64]) -> Result<WeylElement, TwistedError> {
        let d = self.dim();
        assert_eq!(m.len(), d, "dimension mismatch");
        let big: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
        let lattice = intlat::Sublattice::from_i64_rows(d, &self.kernel);
        if !lattice.contains(&big) {
            return Err(TwistedError::NotInKernel);
        }
        let mut out = WeylElement::zero(d);
        for (i, &mi) in m.iter().enumerate() {
            if mi != 0 {
                let mut e = vec![0u32; d];
                e[i] = 1;
                out = out.add(&WeylElement::monomial(d, &e, &e, coeff_int(mi)));
            }
        }
        Ok(out.sub(&WeylElement::one(d).scale(&coeff_int(self.twist(m)))))
    }

    /// Canonical representative in the quotient.
    pub fn reduce(&self, a: &WeylElement) -> Result<TwistedOperator, TwistedError> {
        assert_eq!(a.dim(), self.dim(), "dimension mismatch");
        for w in a.torus_weights() {
            if !self.weight_is_allowed(&w) {
                return Err(TwistedError::NotInvariant(w));
            }
        }
        let d = self.dim();
        let tf = a.to_theta_form();
        let mut components: BTreeMap<Vec<i64>, ThetaPoly> = BTreeMap::new();
        for (w, poly) in tf.components() {
            let w_plus: Vec<BigRational> = w
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x.max(0))))
                .collect();
            let mut p = poly.clone();
            for row in &self.reduction {
                // relation: <row, theta> = chi(row) - <row, w+>
                let rhs = self.twist_rat(&row.coeffs)
                    - row
                        .coeffs
                        .iter()
                        .zip(&w_plus)
                        .map(|(a, b)| a * b)
                        .sum::<BigRational>();
                let mut coeffs: Vec<Coeff> = row.coeffs.iter().map(|c| -c.clone()).collect();
                coeffs[row.pivot] = BigRational::zero();
                p = p.substitute(row.pivot, &coeffs, &rhs);
            }
            if !p.is_zero() {
                components.insert(w.clone(), p);
            }
        }
        Ok(TwistedOperator { form: ThetaForm::from_components(d, components) })
    }

    pub fn equal_in_quotient(&self, a: &WeylElement, b: &WeylElement) -> Result<bool, TwistedError> {
        Ok(self.reduce(a)? == self.reduce(b)?)
    }

    pub fn is_zero_in_quotient(&self, a: &WeylElement) -> Result<bool, TwistedError> {
        Ok(self.reduce(a)?.is_zero())
    }

    /// All invariant monomials `Q^q P^p` with `|q| + |p| <= degree_bound`,
    /// ordered by total degree, then exponents.
    pub fn invariant_monomials(&self, degree_bound: u32) -> Vec<WeylElement> {
        let d = self.dim();
        let mut exps: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let mut current = vec![0u32; 2 * d];
        enumerate_bounded(&mut current, 0, degree_bound, &mut |slots| {
            let q = slots[..d].to_vec();
            let p = slots[d..].to_vec();
            let w: Vec<i64> = q.iter().zip(&p).map(|(&a, &b)| a as i64 - b as i64).collect();
            if self.weight_is_allowed(&w) {
                exps.push((q, p));
            }
        });
        exps.sort_by_key(|(q, p)| {
            (
                q.iter().sum::<u32>() + p.iter().sum::<u32>(),
                q.clone(),
                p.clone(),
            )
        });
        exps.into_iter()
            .map(|(q, p)| WeylElement::monomial(d, &q, &p, coeff_int(1)))
            .collect()
    }

    /// Monomials of the natural module: sections over the open orbit are
    /// spanned by `Q^{mu + a}` with `mu` in the weight lattice. Used as an
    /// independent oracle for the reduction.
    pub fn action_probe_points(&self, radius: i64) -> Vec<Vec<i64>> {
        let basis = &self.kernel_complement;
        let k = basis.len();
        let mut points = Vec::new();
        let mut counter = vec![-radius; k];
        loop {
            let mut nu: Vec<i64> = self.divisor.coeffs.clone();
            for (ci, row) in counter.iter().zip(basis) {
                for (x, &b) in nu.iter_mut().zip(row) {
                    *x += ci * b;
                }
            }
            points.push(nu);
            let mut idx = 0;
            loop {
                if idx == k {
                    return points;
                }
                counter[idx] += 1;
                if counter[idx] <= radius {
                    break;
                }
                counter[idx] = -radius;
                idx += 1;
            }
        }
    }
}

fn enumerate_bounded(slots: &mut Vec<u32>, idx: usize, budget: u32, f: &mut impl FnMut(&[u32])) {
    if idx == slots.len() {
        f(slots);
        return;
    }
    for v in 0..=budget {
        slots[idx] = v;
        enumerate_bounded(slots, idx + 1, budget - v, f);
    }
    slots[idx] = 0;
}

/// Canonical reduced representative of a twisted differential operator.
#[derive(Clone, PartialEq, Eq)]
pub struct TwistedOperator {
    form: ThetaForm,
}

impl TwistedOperator {
    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn form(&self) -> &ThetaForm {
        &self.form
    }

    /// A normal-ordered representative of the class.
    pub fn representative(&self) -> WeylElement {
        self.form.to_weyl()
    }
}

impl fmt::Display for TwistedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

impl fmt::Debug for TwistedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

/// Applies the sign reflection to a kernel vector: negate flipped slots.
pub fn reflect_kernel_vector(m: &[i64], flips: &[usize]) -> Vec<i64> {
    let mut out = m.to_vec();
    for &i in flips {
        out[i] = -out[i];
    }
    out
}

/// Renames vector slots along a ray renumbering.
pub fn renumber_vector(m: &[i64], renumbering: &[usize]) -> Vec<i64> {
    let mut out = vec![0i64; m.len()];
    for (i, &j) in renumbering.iter().enumerate() {
        out[j] = m[i];
    }
    out
}

/// Verifies that the partial Fourier transform attached to a reflection
/// witness descends to an isomorphism of the two twisted rings:
///
/// 1. the divisor classes correspond under the affine transport map,
/// 2. every invariant monomial up to the degree bound maps to an invariant
///    element of the partner ring,
/// 3. each ideal generator maps exactly to the partner ideal generator of
///    the reflected kernel vector,
/// 4. products are preserved in the quotient on a deterministic sample.
pub fn verify_fourier_descent(
    src: &TwistedRing,
    dst: &TwistedRing,
    witness: &ReflectionWitness,
    degree_bound: u32,
) -> Report {
    let mut report = Report::new("fourier-descent");
    report.param("src-divisor", src.divisor());
    report.param("dst-divisor", dst.divisor());
    report.param(
        "flips",
        format!("{:?}", witness.flips.iter().map(|i| i + 1).collect::<Vec<_>>()),
    );
    report.param("degree-bound", degree_bound);

    if !witness.verify(src.fan(), dst.fan()) {
        report.push(Check::fail(
            "fans are related by the reflection witness",
            "witness does not match the generators",
        ));
        return report;
    }
    report.push(Check::pass("fans are related by the reflection witness"));

    match crate::divisor::transport(src.fan(), dst.fan(), witness, src.divisor()) {
        Ok(t) => {
            if crate::divisor::linearly_equivalent(dst.fan(), dst.divisor(), &t).is_some() {
                report.push(Check::pass("divisor classes correspond under transport"));
            } else {
                report.push(Check::fail(
                    "divisor classes correspond under transport",
                    format!("transported class {t} is not equivalent to {}", dst.divisor()),
                ));
                return report;
            }
        }
        Err(e) => {
            report.push(Check::fail("divisor classes correspond under transport", e.to_string()));
            return report;
        }
    }

    let monomials = src.invariant_monomials(degree_bound);
    let mut bad_invariance: Option<String> = None;
    let mut images: Vec<WeylElement> = Vec::with_capacity(monomials.len());
    for g in &monomials {
        let img = g
            .fourier(&witness.flips)
            .rename_variables(&witness.renumbering);
        if bad_invariance.is_none() && !dst.is_invariant(&img) {
            bad_invariance = Some(format!("{g} maps to non-invariant {img}"));
        }
        images.push(img);
    }
    match bad_invariance {
        None => report.push(
            Check::pass("invariant monomials map to invariant elements")
                .with_detail(format!("{} monomials", monomials.len())),
        ),
        Some(detail) => {
            report.push(Check::fail("invariant monomials map to invariant elements", detail))
        }
    }

    let mut generator_ok = true;
    for m in src.kernel_basis() {
        let gen = src.ideal_generator(m).expect("kernel basis vector");
        let image = gen
            .fourier(&witness.flips)
            .rename_variables(&witness.renumbering);
        let reflected = renumber_vector(&reflect_kernel_vector(m, &witness.flips), &witness.renumbering);
        match dst.ideal_generator(&reflected) {
            Ok(expected) => {
                if image != expected {
                    generator_ok = false;
                    report.push(Check::fail(
                        "ideal generators map to partner ideal generators",
                        format!("image {image} differs from {expected}"),
                    ));
                    break;
                }
            }
            Err(e) => {
                generator_ok = false;
                report.push(Check::fail(
                    "ideal generators map to partner ideal generators",
                    format!("reflected vector {reflected:?} rejected: {e}"),
                ));
                break;
            }
        }
    }
    if generator_ok {
        report.push(Check::pass("ideal generators map to partner ideal generators"));
    }

    // deterministic sample of product pairs
    let stride = (monomials.len() / 4).max(1);
    let mut product_ok = true;
    let mut samples = 0;
    'outer: for i in (0..monomials.len()).step_by(stride) {
        for j in (1..monomials.len()).step_by(stride + 1) {
            let product_image = monomials[i]
                .multiply(&monomials[j])
                .fourier(&witness.flips)
                .rename_variables(&witness.renumbering);
            let image_product = images[i].multiply(&images[j]);
            samples += 1;
            match dst.equal_in_quotient(&product_image, &image_product) {
                Ok(true) => {}
                Ok(false) => {
                    product_ok = false;
                    report.push(Check::fail(
                        "products are preserved in the quotient",
                        format!("pair ({}, {})", monomials[i], monomials[j]),
                    ));
                    break 'outer;
                }
                Err(e) => {
                    product_ok = false;
                    report.push(Check::fail(
                        "products are preserved in the quotient",
                        e.to_string(),
                    ));
                    break 'outer;
                }
            }
        }
    }
    if product_ok {
        report.push(
            Check::pass("products are preserved in the quotient")
                .with_detail(format!("{samples} sampled pairs")),
        );
    }
    report
}
