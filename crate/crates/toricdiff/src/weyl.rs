//! The Weyl algebra in `d` variables with exact rational coefficients.
//!
//! Elements are stored in the normal-ordered monomial basis `Q^a P^b`
//! (coordinates before derivatives), so equality of elements is equality of
//! coefficient maps. The module also provides the action on Laurent
//! polynomials (derivatives extended formally to negative exponents), partial
//! Fourier transforms, the torus grading, and the Euler-operator canonical
//! form used by the quotient presentations.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Coeff = BigRational;

pub fn coeff_int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn coeff_ratio(num: i64, den: i64) -> Coeff {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Normal-ordered monomial exponents: `Q^q P^p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub q: Vec<u32>,
    pub p: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.q.iter().sum::<u32>() + self.p.iter().sum::<u32>()
    }

    /// Torus weight `q - p`.
    pub fn weight(&self) -> Vec<i64> {
        self.q
            .iter()
            .zip(&self.p)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }
}

/// Finite rational-coefficient combination of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    dim: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl WeylElement {
    pub fn zero(dim: usize) -> Self {
        WeylElement { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(dim, &vec![0; dim], &vec![0; dim], coeff_int(1))
    }

    /// Coordinate function `Q_i` (0-based index).
    pub fn q(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(dim, &e, &vec![0; dim], coeff_int(1))
    }

    /// Derivative `P_i = d/dQ_i` (0-based index).
    pub fn p(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(dim, &vec![0; dim], &e, coeff_int(1))
    }

    pub fn monomial(dim: usize, q: &[u32], p: &[u32], c: Coeff) -> Self {
        assert_eq!(q.len(), dim);
        assert_eq!(p.len(), dim);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial { q: q.to_vec(), p: p.to_vec() }, c);
        }
        WeylElement { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn insert(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeylElement {
        self.scale(&coeff_int(-1))
    }

    pub fn scale(&self, c: &Coeff) -> WeylElement {
        if c.is_zero() {
            return WeylElement::zero(self.dim);
        }
        WeylElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Associative product under `[P_i, Q_i] = 1`, variables with distinct
    /// indices commuting; the result is normal-ordered.
    pub fn multiply(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = WeylElement::zero(d);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                // Q^a P^m * Q^l P^b: per index,
                //   P^m Q^l = sum_k k! C(m,k) C(l,k) Q^{l-k} P^{m-k}
                let caps: Vec<u32> = (0..d).map(|i| ma.p[i].min(mb.q[i])).collect();
                let mut k = vec![0u32; d];
                loop {
                    let mut coeff = BigInt::one();
                    for i in 0..d {
                        if k[i] > 0 {
                            coeff *= factorial(k[i])
                                * binomial(ma.p[i], k[i])
                                * binomial(mb.q[i], k[i]);
                        }
                    }
                    let q: Vec<u32> = (0..d).map(|i| ma.q[i] + mb.q[i] - k[i]).collect();
                    let p: Vec<u32> = (0..d).map(|i| ma.p[i] + mb.p[i] - k[i]).collect();
                    out.insert(
                        Monomial { q, p },
                        ca * cb * BigRational::from_integer(coeff),
                    );
                    // odometer over 0..=caps
                    let mut idx = 0;
                    loop {
                        if idx == d {
                            break;
                        }
                        k[idx] += 1;
                        if k[idx] <= caps[idx] {
                            break;
                        }
                        k[idx] = 0;
                        idx += 1;
                    }
                    if idx == d {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &WeylElement) -> WeylElement {
        self.multiply(other).sub(&other.multiply(self))
    }

    /// Action on a Laurent polynomial: `Q_i` multiplies, `P_i` differentiates
    /// formally (`P_i Q_i^v = v Q_i^{v-1}` for any integer `v`).
    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.dim, f.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = LaurentPoly::zero(d);
        for (m, c) in &self.terms {
            for (nu, x) in &f.terms {
                let mut coeff = BigInt::one();
                for i in 0..d {
                    for step in 0..m.p[i] as i64 {
                        coeff *= BigInt::from(nu[i] - step);
                    }
                    if coeff.is_zero() {
                        break;
                    }
                }
                if coeff.is_zero() {
                    continue;
                }
                let target: Vec<i64> = (0..d)
                    .map(|i| nu[i] - m.p[i] as i64 + m.q[i] as i64)
                    .collect();
                out.insert(target, c * x * BigRational::from_integer(coeff));
            }
        }
        out
    }

    /// Partial Fourier transform: `Q_i -> P_i`, `P_i -> -Q_i` for flipped
    /// indices (0-based), computed term-by-term in closed form.
    pub fn fourier(&self, flips: &[usize]) -> WeylElement {
        let d = self.dim;
        let mut flip = vec![false; d];
        for &i in flips {
            assert!(i < d, "flip index out of range");
            flip[i] = true;
        }
        let mut out = WeylElement::zero(d);
        for (m, c) in &self.terms {
            // per flipped index: the P-power turns into (-Q)^p, then the
            // leftover P^q Q^p factor is normal-ordered in closed form
            let mut sign = 0u32;
            for i in 0..d {
                if flip[i] {
                    sign += m.p[i];
                }
            }
            let base = if sign % 2 == 0 { c.clone() } else { -c.clone() };
            let caps: Vec<u32> = (0..d)
                .map(|i| if flip[i] { m.q[i].min(m.p[i]) } else { 0 })
                .collect();
            let mut k = vec![0u32; d];
            loop {
                let mut coeff = BigInt::one();
                let mut q = vec![0u32; d];
                let mut p = vec![0u32; d];
                for i in 0..d {
                    if flip[i] {
                        if k[i] > 0 {
                            coeff *= factorial(k[i])
                                * binomial(m.q[i], k[i])
                                * binomial(m.p[i], k[i]);
                        }
                        q[i] = m.p[i] - k[i];
                        p[i] = m.q[i] - k[i];
                    } else {
                        q[i] = m.q[i];
                        p[i] = m.p[i];
                    }
                }
                out.insert(Monomial { q, p }, &base * BigRational::from_integer(coeff));
                let mut idx = 0;
                loop {
                    if idx == d {
                        break;
                    }
                    k[idx] += 1;
                    if k[idx] <= caps[idx] {
                        break;
                    }
                    k[idx] = 0;
                    idx += 1;
                }
                if idx == d {
                    break;
                }
            }
        }
        out
    }

    /// Inverse of [`WeylElement::fourier`]: `Q_i -> -P_i`, `P_i -> Q_i` on
    /// flipped indices. The transform has order four, so three applications
    /// invert one.
    pub fn fourier_inverse(&self, flips: &[usize]) -> WeylElement {
        self.fourier(flips).fourier(flips).fourier(flips)
    }

    /// Splits into homogeneous components of torus weight `q - p`.
    pub fn torus_weight_decompose(&self) -> BTreeMap<Vec<i64>, WeylElement> {
        let mut out: BTreeMap<Vec<i64>, WeylElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            let w = m.weight();
            out.entry(w)
                .or_insert_with(|| WeylElement::zero(self.dim))
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Distinct torus weights present in the element.
    pub fn torus_weights(&self) -> Vec<Vec<i64>> {
        let mut ws: Vec<Vec<i64>> = self.terms.keys().map(|m| m.weight()).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn rename_variables(&self, perm: &[usize]) -> WeylElement {
        assert_eq!(perm.len(), self.dim);
        let mut seen = vec![false; self.dim];
        for &j in perm {
            assert!(j < self.dim && !seen[j], "not a permutation");
            seen[j] = true;
        }
        let mut out = WeylElement::zero(self.dim);
        for (m, c) in &self.terms {
            let mut q = vec![0u32; self.dim];
            let mut p = vec![0u32; self.dim];
            for i in 0..self.dim {
                q[perm[i]] = m.q[i];
                p[perm[i]] = m.p[i];
            }
            out.insert(Monomial { q, p }, c.clone());
        }
        out
    }

    /// Canonical form grouping terms by torus weight, the shared part of each
    /// term written as a polynomial in the Euler operators `theta_i = Q_i P_i`.
    pub fn to_theta_form(&self) -> ThetaForm {
        let d = self.dim;
        let mut components: BTreeMap<Vec<i64>, ThetaPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let w = m.weight();
            // Q^q P^p = Q^{w+} prod_i theta_i(theta_i-1)...(theta_i-c_i+1) P^{w-}
            let shared: Vec<u32> = (0..d).map(|i| m.q[i].min(m.p[i])).collect();
            let mut poly = ThetaPoly::constant(d, c.clone());
            for (i, &ci) in shared.iter().enumerate() {
                for step in 0..ci {
                    poly = poly.mul(&ThetaPoly::linear(d, i, coeff_int(-(step as i64))));
                }
            }
            components
                .entry(w)
                .or_insert_with(|| ThetaPoly::zero(d))
                .add_assign(&poly);
        }
        ThetaForm::from_components(d, components)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut parts: Vec<String> = Vec::new();
            for (i, &e) in m.q.iter().enumerate() {
                if e == 1 {
                    parts.push(format!("Q{}", i + 1));
                } else if e > 1 {
                    parts.push(format!("Q{}^{}", i + 1, e));
                }
            }
            for (i, &e) in m.p.iter().enumerate() {
                if e == 1 {
                    parts.push(format!("P{}", i + 1));
                } else if e > 1 {
                    parts.push(format!("P{}^{}", i + 1, e));
                }
            }
            let mono = parts.join("*");
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Finite rational combination of Laurent monomials `Q^v`, `v` integral.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, Coeff>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn monomial(dim: usize, exps: &[i64], c: Coeff) -> Self {
        assert_eq!(exps.len(), dim);
        let mut out = Self::zero(dim);
        out.insert(exps.to_vec(), c);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[i64]) -> Coeff {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert(&mut self, e: Vec<i64>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(&coeff_int(-1)))
    }

    pub fn scale(&self, c: &Coeff) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.dim);
        }
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Keeps only the monomials satisfying the predicate.
    pub fn filter(&self, keep: impl Fn(&[i64]) -> bool) -> LaurentPoly {
        LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mut parts: Vec<String> = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                if x == 1 {
                    parts.push(format!("Q{}", i + 1));
                } else if x != 0 {
                    parts.push(format!("Q{}^{}", i + 1, x));
                }
            }
            let mono = parts.join("*");
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Commutative polynomial in the Euler operators `theta_1..theta_d`.
#[derive(Clone, PartialEq, Eq)]
pub struct ThetaPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl ThetaPoly {
    pub fn zero(dim: usize) -> Self {
        ThetaPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Coeff) -> Self {
        let mut out = Self::zero(dim);
        out.insert(vec![0; dim], c);
        out
    }

    /// `theta_i + shift`
    pub fn linear(dim: usize, i: usize, shift: Coeff) -> Self {
        let mut out = Self::constant(dim, shift);
        let mut e = vec![0; dim];
        e[i] = 1;
        out.insert(e, coeff_int(1));
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    fn insert(&mut self, e: Vec<u32>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &ThetaPoly) {
        assert_eq!(self.dim, other.dim);
        for (e, c) in &other.terms {
            self.insert(e.clone(), c.clone());
        }
    }

    pub fn mul(&self, other: &ThetaPoly) -> ThetaPoly {
        assert_eq!(self.dim, other.dim);
        let mut out = ThetaPoly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> ThetaPoly {
        if c.is_zero() {
            return ThetaPoly::zero(self.dim);
        }
        ThetaPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Substitutes `theta_var := sum_j coeffs[j] theta_j + constant`.
    /// The linear form must not involve `theta_var` itself.
    pub fn substitute(&self, var: usize, coeffs: &[Coeff], constant: &Coeff) -> ThetaPoly {
        assert!(coeffs[var].is_zero(), "substitution must eliminate the variable");
        let mut form = ThetaPoly::constant(self.dim, constant.clone());
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; self.dim];
                e[j] = 1;
                form.insert(e, c.clone());
            }
        }
        let mut out = ThetaPoly::zero(self.dim);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let pow = rest[var];
            rest[var] = 0;
            let mut piece = ThetaPoly::zero(self.dim);
            piece.insert(rest, c.clone());
            for _ in 0..pow {
                piece = piece.mul(&form);
            }
            out.add_assign(&piece);
        }
        out
    }

    /// Evaluates at the integer point `theta = x`.
    pub fn eval(&self, x: &[i64]) -> Coeff {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &pow) in e.iter().enumerate() {
                for _ in 0..pow {
                    term *= coeff_int(x[i]);
                }
            }
            acc += term;
        }
        acc
    }
}

impl fmt::Display for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mut parts: Vec<String> = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                if x == 1 {
                    parts.push(format!("t{}", i + 1));
                } else if x != 0 {
                    parts.push(format!("t{}^{}", i + 1, x));
                }
            }
            let mono = parts.join("*");
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Weight-graded canonical form `sum_w Q^{w+} p_w(theta) P^{w-}`.
///
/// The per-index falling factorials of `theta` form a polynomial basis, so
/// the round trip to [`WeylElement`] is a bijection.
#[derive(Clone, PartialEq, Eq)]
pub struct ThetaForm {
    dim: usize,
    components: BTreeMap<Vec<i64>, ThetaPoly>,
}

impl ThetaForm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<i64>, &ThetaPoly)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn from_components(dim: usize, mut components: BTreeMap<Vec<i64>, ThetaPoly>) -> Self {
        components.retain(|_, p| !p.is_zero());
        ThetaForm { dim, components }
    }

    /// Expands back into the normal-ordered basis.
    pub fn to_weyl(&self) -> WeylElement {
        let d = self.dim;
        let mut out = WeylElement::zero(d);
        for (w, poly) in &self.components {
            let wplus: Vec<u32> = w.iter().map(|&x| x.max(0) as u32).collect();
            let wminus: Vec<u32> = w.iter().map(|&x| (-x).max(0) as u32).collect();
            for (e, c) in poly.terms() {
                // theta_i^k = sum_j S(k, j) Q_i^j P_i^j (Stirling, 2nd kind)
                let mut parts: Vec<Vec<(u32, BigInt)>> = Vec::with_capacity(d);
                for &k in e {
                    let mut options = Vec::new();
                    if k == 0 {
                        options.push((0u32, BigInt::one()));
                    } else {
                        for j in 1..=k {
                            options.push((j, stirling2(k, j)));
                        }
                    }
                    parts.push(options);
                }
                let mut idx = vec![0usize; d];
                loop {
                    let mut coeff = c.clone();
                    let mut q = wplus.clone();
                    let mut p = wminus.clone();
                    for i in 0..d {
                        let (j, ref s) = parts[i][idx[i]];
                        coeff *= BigRational::from_integer(s.clone());
                        q[i] += j;
                        p[i] += j;
                    }
                    out.insert(Monomial { q, p }, coeff);
                    let mut pos = 0;
                    loop {
                        if pos == d {
                            break;
                        }
                        idx[pos] += 1;
                        if idx[pos] < parts[pos].len() {
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                    if pos == d {
                        break;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ThetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, poly) in &self.components {
            if !first {
                write!(f, " (+) ")?;
            }
            first = false;
            let wstr: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            write!(f, "[w=({})] {}", wstr.join(","), poly)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ThetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn stirling2(n: u32, k: u32) -> BigInt {
    if n == 0 && k == 0 {
        return BigInt::one();
    }
    if k == 0 || k > n {
        return BigInt::zero();
    }
    // S(n, k) = k S(n-1, k) + S(n-1, k-1)
    let mut row = vec![BigInt::zero(); (n + 1) as usize];
    row[0] = BigInt::one();
    for _m in 1..=n {
        for j in (1..=n).rev() {
            let v = BigInt::from(j) * &row[j as usize] + &row[(j - 1) as usize];
            row[j as usize] = v;
        }
        row[0] = BigInt::zero();
    }
    row[k as usize].clone()
}

/// `sum_{i in indices} Q_i P_i` (0-based indices).
pub fn euler_operator(dim: usize, indices: &[usize]) -> WeylElement {
    let mut out = WeylElement::zero(dim);
    for &i in indices {
        let mut e = vec![0; dim];
        e[i] = 1;
        out = out.add(&WeylElement::monomial(dim, &e, &e, coeff_int(1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: usize, i: usize) -> WeylElement {
        WeylElement::q(d, i)
    }
    fn p(d: usize, i: usize) -> WeylElement {
        WeylElement::p(d, i)
    }

    #[test]
    fn commutation_relation() {
        // P1 * Q1 = Q1 P1 + 1
        let d = 1;
        let lhs = p(d, 0).multiply(&q(d, 0));
        let rhs = WeylElement::monomial(d, &[1], &[1], coeff_int(1)).add(&WeylElement::one(d));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_square() {
        // (Q1 P1)^2 = Q1^2 P1^2 + Q1 P1
        let d = 1;
        let theta = q(d, 0).multiply(&p(d, 0));
        let lhs = theta.multiply(&theta);
        let rhs = WeylElement::monomial(d, &[2], &[2], coeff_int(1))
            .add(&WeylElement::monomial(d, &[1], &[1], coeff_int(1)));
        assert_eq!(lhs, rhs);
        // cross-check by action on monomials Q^k, k <= 5
        for k in 0..=5i64 {
            let f = LaurentPoly::monomial(1, &[k], coeff_int(1));
            let via_lhs = lhs.apply(&f);
            let via_double = theta.apply(&theta.apply(&f));
            assert_eq!(via_lhs, via_double);
        }
    }

    #[test]
    fn two_variable_product() {
        // P1 P2 * Q1 Q2 = Q1 Q2 P1 P2 + Q1 P1 + Q2 P2 + 1
        let d = 2;
        let lhs = p(d, 0).multiply(&p(d, 1)).multiply(&q(d, 0).multiply(&q(d, 1)));
        let rhs = WeylElement::monomial(d, &[1, 1], &[1, 1], coeff_int(1))
            .add(&WeylElement::monomial(d, &[1, 0], &[1, 0], coeff_int(1)))
            .add(&WeylElement::monomial(d, &[0, 1], &[0, 1], coeff_int(1)))
            .add(&WeylElement::one(d));
        assert_eq!(lhs, rhs);
        // same oracle in 2 variables
        for a in 0..=3i64 {
            for b in 0..=3i64 {
                let f = LaurentPoly::monomial(2, &[a, b], coeff_int(1));
                let g = q(d, 0).multiply(&q(d, 1)).apply(&f);
                assert_eq!(lhs.apply(&f), p(d, 0).multiply(&p(d, 1)).apply(&g));
            }
        }
    }

    #[test]
    fn derivative_action() {
        let d = 1;
        let f = LaurentPoly::monomial(d, &[3], coeff_int(1));
        assert_eq!(p(d, 0).apply(&f), LaurentPoly::monomial(d, &[2], coeff_int(3)));
        // formal derivative on a negative exponent
        let g = LaurentPoly::monomial(d, &[-1], coeff_int(1));
        assert_eq!(p(d, 0).apply(&g), LaurentPoly::monomial(d, &[-2], coeff_int(-1)));
        // derivative of a constant vanishes
        let c = LaurentPoly::monomial(d, &[0], coeff_int(1));
        assert!(p(d, 0).apply(&c).is_zero());
    }

    #[test]
    fn fourier_on_generators() {
        let d = 2;
        assert_eq!(q(d, 0).fourier(&[0]), p(d, 0));
        assert_eq!(p(d, 0).fourier(&[0]), q(d, 0).neg());
        assert_eq!(q(d, 1).fourier(&[0]), q(d, 1));
        // identity on the empty flip set
        let x = q(d, 0).multiply(&p(d, 1)).add(&q(d, 1));
        assert_eq!(x.fourier(&[]), x);
    }

    #[test]
    fn fourier_of_euler_is_negated_shifted() {
        // Q1 P1 -> P1 (-Q1) = -Q1 P1 - 1
        let d = 1;
        let theta = WeylElement::monomial(d, &[1], &[1], coeff_int(1));
        let image = theta.fourier(&[0]);
        let expected = theta.neg().sub(&WeylElement::one(d));
        assert_eq!(image, expected);
    }

    #[test]
    fn fourier_is_an_algebra_map_and_period_four() {
        let d = 2;
        let a = q(d, 0).multiply(&p(d, 1)).add(&p(d, 0).scale(&coeff_ratio(1, 2)));
        let b = q(d, 1).multiply(&q(d, 0)).sub(&WeylElement::one(d));
        let flips = [0usize];
        assert_eq!(
            a.multiply(&b).fourier(&flips),
            a.fourier(&flips).multiply(&b.fourier(&flips))
        );
        let mut x = a.clone();
        for _ in 0..4 {
            x = x.fourier(&flips);
        }
        assert_eq!(x, a);
    }

    #[test]
    fn weight_decomposition() {
        let d = 2;
        let x = q(d, 0).multiply(&p(d, 1));
        let parts = x.torus_weight_decompose();
        assert_eq!(parts.len(), 1);
        assert!(parts.contains_key(&vec![1, -1]));

        let y = WeylElement::monomial(d, &[1, 0], &[1, 0], coeff_int(1)).add(&q(d, 0));
        let parts = y.torus_weight_decompose();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains_key(&vec![0, 0]));
        assert!(parts.contains_key(&vec![1, 0]));
    }

    #[test]
    fn fourier_flips_weights() {
        let d = 3;
        let x = q(d, 0).multiply(&p(d, 1)).multiply(&q(d, 2));
        let flips = [0usize, 2];
        for w in x.fourier(&flips).torus_weights() {
            assert_eq!(w, vec![-1, -1, -1]); // sign flip applied to (1, -1, 1)
        }
    }

    #[test]
    fn theta_form_examples() {
        let d = 1;
        // Q1 P1 -> w=0, p = t1
        let theta = WeylElement::monomial(d, &[1], &[1], coeff_int(1));
        let tf = theta.to_theta_form();
        let comps: Vec<_> = tf.components().collect();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0, &vec![0i64]);
        assert_eq!(format!("{}", comps[0].1), "t1");

        // Q1^2 P1^2 -> t1(t1 - 1)
        let sq = WeylElement::monomial(d, &[2], &[2], coeff_int(1));
        let tf = sq.to_theta_form();
        let comps: Vec<_> = tf.components().collect();
        assert_eq!(format!("{}", comps[0].1), "-t1 + t1^2");

        // Q1^2 P1 -> w = +1, p = t1
        let m = WeylElement::monomial(d, &[2], &[1], coeff_int(1));
        let tf = m.to_theta_form();
        let comps: Vec<_> = tf.components().collect();
        assert_eq!(comps[0].0, &vec![1i64]);
        assert_eq!(format!("{}", comps[0].1), "t1");
    }

    #[test]
    fn theta_roundtrip_is_identity() {
        let d = 2;
        let x = q(d, 0)
            .multiply(&p(d, 0))
            .multiply(&q(d, 0))
            .add(&p(d, 1).multiply(&q(d, 0)).scale(&coeff_ratio(3, 7)))
            .sub(&WeylElement::one(d));
        assert_eq!(x.to_theta_form().to_weyl(), x);
    }

    #[test]
    fn theta_form_agrees_with_action() {
        let d = 2;
        let x = q(d, 0).multiply(&p(d, 0)).multiply(&p(d, 1)).add(&q(d, 1));
        let y = x.to_theta_form().to_weyl();
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                let f = LaurentPoly::monomial(d, &[a, b], coeff_int(1));
                assert_eq!(x.apply(&f), y.apply(&f));
            }
        }
    }

    #[test]
    fn euler_operator_eigenvalue() {
        let d = 3;
        let e = euler_operator(d, &[0, 1, 2]);
        let f = LaurentPoly::monomial(d, &[2, -1, 4], coeff_int(1));
        assert_eq!(e.apply(&f), f.scale(&coeff_int(5)));
        assert!(euler_operator(d, &[]).is_zero());
    }

    #[test]
    fn rename_variables_moves_indices() {
        let d = 3;
        let x = q(d, 0).multiply(&p(d, 1));
        let y = x.rename_variables(&[2, 0, 1]);
        assert_eq!(y, q(d, 2).multiply(&p(d, 0)));
    }

    #[test]
    fn display_is_stable() {
        let d = 2;
        let x = q(d, 0)
            .multiply(&p(d, 1))
            .scale(&coeff_int(-2))
            .add(&WeylElement::monomial(d, &[0, 0], &[0, 0], coeff_ratio(1, 2)));
        assert_eq!(format!("{}", x), "1/2 - 2*Q1*P2");
    }

    #[test]
    fn stirling_small_values() {
        assert_eq!(stirling2(3, 2), BigInt::from(3));
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        assert_eq!(stirling2(5, 1), BigInt::one());
        assert_eq!(stirling2(5, 5), BigInt::one());
    }

    #[test]
    fn theta_substitution() {
        let d = 2;
        // p = t1^2 + t2; substitute t2 := 1 - t1  ->  t1^2 - t1 + 1
        let mut poly = ThetaPoly::zero(d);
        poly.insert(vec![2, 0], coeff_int(1));
        poly.insert(vec![0, 1], coeff_int(1));
        let coeffs = vec![coeff_int(-1), coeff_int(0)];
        let out = poly.substitute(1, &coeffs, &coeff_int(1));
        assert_eq!(format!("{}", out), "1 - t1 + t1^2");
    }
}
