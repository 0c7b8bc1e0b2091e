//! Regular fans given by primitive ray generators and maximal cones as index
//! sets, ray sign-reflections, the catalog of fan families built from a
//! projective fan by reflecting subsets of rays, and an exact refinement
//! test.
//!
//! Cones are stored as index sets into the generator list, so reflecting
//! rays and matching reflection partners is pure index bookkeeping.

use crate::intlat::{self, ratmat::RatMatrix, IntMatrix};
use num::{BigRational, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FanError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("generators do not span the lattice")]
    DoesNotSpan,
    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A fan in a rank-`n` lattice: ray generators `k_1..k_d` and maximal cones
/// as sorted index sets (0-based internally, 1-based in the file format).
#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    generators: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// A violated fan axiom, with the offending data spelled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanViolation(pub String);

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Regularity certificate: per-cone unimodularity plus the lattice-spanning
/// condition on the full generator set.
#[derive(Clone, Debug)]
pub struct RegularityCertificate {
    pub cone_unimodular: Vec<(Vec<usize>, bool)>,
    pub generators_span: bool,
}

impl RegularityCertificate {
    pub fn is_regular(&self) -> bool {
        self.generators_span && self.cone_unimodular.iter().all(|(_, ok)| *ok)
    }
}

/// Witness that two fans have the same rays up to sign flips: ray `i` of the
/// first fan matches ray `renumbering[i]` of the second, negated exactly on
/// the indices in `flips`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionWitness {
    pub flips: Vec<usize>,
    pub renumbering: Vec<usize>,
}

impl ReflectionWitness {
    pub fn verify(&self, f1: &Fan, f2: &Fan) -> bool {
        if f1.ray_count() != f2.ray_count() || f1.rank() != f2.rank() {
            return false;
        }
        if self.renumbering.len() != f1.ray_count() {
            return false;
        }
        let mut seen = vec![false; f2.ray_count()];
        for (i, &j) in self.renumbering.iter().enumerate() {
            if j >= f2.ray_count() || seen[j] {
                return false;
            }
            seen[j] = true;
            let flipped = self.flips.contains(&i);
            let expect: Vec<i64> = f1.generators[i]
                .iter()
                .map(|&x| if flipped { -x } else { x })
                .collect();
            if f2.generators[j] != expect {
                return false;
            }
        }
        true
    }

    pub fn size(&self) -> usize {
        self.flips.len()
    }
}

impl Fan {
    /// Builds a fan without checking the fan axioms; use [`Fan::validate`]
    /// to check them. Cone index sets are sorted and deduplicated.
    pub fn from_parts(rank: usize, generators: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Self {
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        Fan { rank, generators, max_cones }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ray_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Matrix of the ray map sending the `i`-th basis vector to `k_i`
    /// (generators as columns).
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(&self.generators)
    }

    /// Matrix of the character map: row `i` is `k_i`, so a character `mu`
    /// maps to the vector of its pairings with the rays.
    pub fn character_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.generators)
    }

    fn standard_basis(n: usize, i: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    /// Complete fan of the projective family: `k_i = e_i` for `i <= n` and
    /// `k_{n+1} = -(1,..,1)`, with every n-element subset a maximal cone.
    pub fn projective(n: usize) -> Result<Fan, FanError> {
        if n < 2 {
            return Err(FanError::Parameter(format!("projective fan needs n >= 2, got {n}")));
        }
        let mut gens: Vec<Vec<i64>> = (0..n).map(|i| Self::standard_basis(n, i)).collect();
        gens.push(vec![-1; n]);
        let cones = (0..=n)
            .map(|skip| (0..=n).filter(|&j| j != skip).collect())
            .collect();
        Ok(Fan::from_parts(n, gens, cones))
    }

    /// Blow-up of affine n-space at the origin: `k_i = e_i`, `k_{n+1} =
    /// (1,..,1)`, with every n-element subset except the first n rays a
    /// maximal cone.
    pub fn blowup(n: usize) -> Result<Fan, FanError> {
        if n < 2 {
            return Err(FanError::Parameter(format!("blow-up fan needs n >= 2, got {n}")));
        }
        let mut gens: Vec<Vec<i64>> = (0..n).map(|i| Self::standard_basis(n, i)).collect();
        gens.push(vec![1; n]);
        let cones = (0..n)
            .map(|skip| (0..=n).filter(|&j| j != skip).collect())
            .collect();
        Ok(Fan::from_parts(n, gens, cones))
    }

    /// Fan consisting of the rays alone.
    pub fn minimal(rank: usize, generators: Vec<Vec<i64>>) -> Result<Fan, FanError> {
        let m = IntMatrix::from_cols(&generators);
        if intlat::smith_normal_form(&m).rank() != rank {
            return Err(FanError::DoesNotSpan);
        }
        let cones = (0..generators.len()).map(|i| vec![i]).collect();
        Ok(Fan::from_parts(rank, generators, cones))
    }

    /// Projective fan with the rays in `flips` (0-based) negated; still a
    /// complete fan presenting projective space.
    pub fn reflected_projective(n: usize, flips: &[usize]) -> Result<Fan, FanError> {
        let base = Self::projective(n)?;
        let gens = base.reflected_generators(flips);
        Ok(Fan::from_parts(n, gens, base.max_cones.clone()))
    }

    /// Generators of the split-sign family: the projective generators with
    /// the first `r` rays negated. They satisfy
    /// `sum_{i <= r} k_i = sum_{i > r} k_i`.
    fn split_generators(n: usize, r: usize) -> Vec<Vec<i64>> {
        let mut gens: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = Self::standard_basis(n, i);
                if i < r {
                    v[i] = -1;
                }
                v
            })
            .collect();
        gens.push(vec![-1; n]);
        gens
    }

    /// Fan of the variety of rank-one `r x (n+1-r)` matrices: maximal cones
    /// are spanned by the rays indexed by `J` whose complement meets both
    /// `{1..r}` and its complement.
    pub fn zr(n: usize, r: usize) -> Result<Fan, FanError> {
        if n < 3 || r < 2 || r > n - 1 {
            return Err(FanError::Parameter(format!(
                "rank-one matrix fan needs 2 <= r <= n-1 and n >= 3, got n={n}, r={r}"
            )));
        }
        let gens = Self::split_generators(n, r);
        let mut cones = Vec::new();
        for a in 0..r {
            for b in r..=n {
                cones.push((0..=n).filter(|&j| j != a && j != b).collect());
            }
        }
        Ok(Fan::from_parts(n, gens, cones))
    }

    /// Resolution fans of the split-sign family with `I = {1..r}`: maximal
    /// cones `C_i` (all rays except `k_i`) for `i` in `I` (plus sign) or in
    /// the complement of `I` (minus sign).
    pub fn split_resolution(n: usize, r: usize, sign: Sign) -> Result<Fan, FanError> {
        if n < 2 || r < 1 || r > n {
            return Err(FanError::Parameter(format!(
                "split resolution fan needs 1 <= r <= n, got n={n}, r={r}"
            )));
        }
        let gens = Self::split_generators(n, r);
        let indices: Vec<usize> = match sign {
            Sign::Plus => (0..r).collect(),
            Sign::Minus => (r..=n).collect(),
        };
        let cones = indices
            .iter()
            .map(|&skip| (0..=n).filter(|&j| j != skip).collect())
            .collect();
        Ok(Fan::from_parts(n, gens, cones))
    }

    /// The two toric resolutions of the closure of the rank-one matrix
    /// variety, restricted to the parameter range where that variety exists.
    pub fn zr_resolution(n: usize, r: usize, sign: Sign) -> Result<Fan, FanError> {
        if n < 3 || r < 2 || r > n - 1 {
            return Err(FanError::Parameter(format!(
                "resolution fan needs 2 <= r <= n-1 and n >= 3, got n={n}, r={r}"
            )));
        }
        Self::split_resolution(n, r, sign)
    }

    /// Generators with signs flipped on the given ray indices; the cone
    /// structure of a partner fan is an independent choice.
    pub fn reflected_generators(&self, flips: &[usize]) -> Vec<Vec<i64>> {
        let mut flip = vec![false; self.ray_count()];
        for &i in flips {
            flip[i] = true;
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.iter().map(|&x| if flip[i] { -x } else { x }).collect())
            .collect()
    }

    /// Checks the fan axioms: ray sanity, linear independence of each cone's
    /// generators, and that pairwise intersections of cones are spanned by
    /// the common rays. Returns an empty list when the fan is valid.
    pub fn validate(&self) -> Vec<FanViolation> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.rank {
                out.push(FanViolation(format!(
                    "generator {} has length {} but the rank is {}",
                    i + 1,
                    g.len(),
                    self.rank
                )));
            }
            if g.iter().all(|&x| x == 0) {
                out.push(FanViolation(format!("generator {} is zero", i + 1)));
            }
        }
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                if self.generators[i] == self.generators[j] {
                    out.push(FanViolation(format!("generators {} and {} repeat", i + 1, j + 1)));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for cone in &self.max_cones {
            if cone.iter().any(|&i| i >= self.ray_count()) {
                out.push(FanViolation(format!(
                    "cone {:?} has an index out of range",
                    one_based(cone)
                )));
                continue;
            }
            let vectors = self.cone_vectors(cone);
            if geom::rank_of(&vectors) != cone.len() {
                out.push(FanViolation(format!(
                    "cone {:?} has linearly dependent generators",
                    one_based(cone)
                )));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                let ca = &self.max_cones[a];
                let cb = &self.max_cones[b];
                let common: Vec<usize> = ca.iter().copied().filter(|i| cb.contains(i)).collect();
                if !self.intersection_is_common_face(ca, cb, &common) {
                    out.push(FanViolation(format!(
                        "cones {:?} and {:?} do not intersect in the face spanned by {:?}",
                        one_based(ca),
                        one_based(cb),
                        one_based(&common)
                    )));
                }
            }
        }
        out
    }

    fn cone_vectors(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        cone.iter().map(|&i| self.generators[i].clone()).collect()
    }

    /// Exact check that `cone(A) ∩ cone(B) = cone(A ∩ B)`, via extreme rays
    /// of the intersection.
    fn intersection_is_common_face(&self, ca: &[usize], cb: &[usize], common: &[usize]) -> bool {
        let va = self.cone_vectors(ca);
        let vb = self.cone_vectors(cb);
        let vc = self.cone_vectors(common);
        let rays = geom::intersection_extreme_rays(&va, &vb);
        rays.iter().all(|r| geom::in_simplicial_cone_rat(r, &vc))
    }

    /// Regularity: every maximal cone is generated by part of a lattice
    /// basis and the rays span the lattice over the integers.
    pub fn regularity(&self) -> RegularityCertificate {
        let cone_unimodular = self
            .max_cones
            .iter()
            .map(|c| {
                let m = IntMatrix::from_cols(&self.cone_vectors(c));
                let snf = intlat::smith_normal_form(&m);
                let factors = snf.invariant_factors();
                let ok = factors.len() == c.len() && factors.iter().all(|f| f.is_one());
                (c.clone(), ok)
            })
            .collect();
        let snf = intlat::smith_normal_form(&self.ray_matrix());
        let factors = snf.invariant_factors();
        let generators_span = factors.len() == self.rank && factors.iter().all(|f| f.is_one());
        RegularityCertificate { cone_unimodular, generators_span }
    }

    pub fn is_regular(&self) -> bool {
        self.validate().is_empty() && self.regularity().is_regular()
    }

    /// True iff every cone of `self` is contained in a cone of `other` and
    /// the two supports coincide.
    pub fn refines(&self, other: &Fan) -> bool {
        if self.rank != other.rank {
            return false;
        }
        // every cone of self sits inside some cone of other
        for cone in &self.max_cones {
            let vectors = self.cone_vectors(cone);
            let inside = other.max_cones.iter().any(|oc| {
                let target = other.cone_vectors(oc);
                vectors.iter().all(|v| geom::in_cone(v, &target))
            });
            if !inside {
                return false;
            }
        }
        // support of other is covered by the cones of self
        for oc in &other.max_cones {
            if !self.covers_cone(&other.cone_vectors(oc)) {
                return false;
            }
        }
        true
    }

    /// Wall-crossing coverage test: the target cone is covered by this fan's
    /// cones iff some cone contains it outright, or the equal-dimension
    /// pieces inside it leave no facet that is neither on the target's
    /// boundary nor shared with a piece on the other side.
    fn covers_cone(&self, target: &[Vec<i64>]) -> bool {
        for cone in &self.max_cones {
            let mine = self.cone_vectors(cone);
            if target.iter().all(|v| geom::in_cone(v, &mine)) {
                return true;
            }
        }
        let dim = geom::rank_of(target);
        let pieces: Vec<Vec<Vec<i64>>> = self
            .max_cones
            .iter()
            .map(|c| self.cone_vectors(c))
            .filter(|vecs| vecs.len() == dim && vecs.iter().all(|v| geom::in_cone(v, target)))
            .collect();
        if pieces.is_empty() {
            return false;
        }
        // coordinates inside the span of the target cone
        let basis = geom::independent_subset(target, dim);
        let coord = |v: &[i64]| geom::coordinates_in_basis(v, &basis);
        let target_coords: Vec<Vec<BigRational>> = target.iter().map(|v| coord(v)).collect();
        let piece_coords: Vec<Vec<Vec<BigRational>>> = pieces
            .iter()
            .map(|p| p.iter().map(|v| coord(v)).collect())
            .collect();
        for (pi, piece) in piece_coords.iter().enumerate() {
            for drop in 0..piece.len() {
                let facet: Vec<Vec<BigRational>> = piece
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, v)| v.clone())
                    .collect();
                let Some(mut w) = geom::hyperplane_normal(&facet, dim) else {
                    return false;
                };
                let side = geom::dot(&w, &piece[drop]);
                if side.is_negative() {
                    for x in w.iter_mut() {
                        *x = -x.clone();
                    }
                } else if side.is_zero() {
                    return false;
                }
                let on_boundary = target_coords.iter().all(|g| !geom::dot(&w, g).is_negative());
                if on_boundary {
                    continue;
                }
                let shared = piece_coords.iter().enumerate().any(|(pj, other)| {
                    pj != pi
                        && facet.iter().all(|fv| geom::in_simplicial_cone_coords(fv, other))
                        && other.iter().any(|g| geom::dot(&w, g).is_negative())
                });
                if !shared {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical comparison key: generators sorted, cone index sets remapped
    /// through the sorting permutation and sorted.
    fn canonical_key(&self) -> (usize, Vec<Vec<i64>>, Vec<Vec<usize>>) {
        let mut order: Vec<usize> = (0..self.ray_count()).collect();
        order.sort_by(|&a, &b| self.generators[a].cmp(&self.generators[b]));
        let mut position = vec![0usize; self.ray_count()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let gens: Vec<Vec<i64>> = order.iter().map(|&i| self.generators[i].clone()).collect();
        let mut cones: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .map(|c| {
                let mut c2: Vec<usize> = c.iter().map(|&i| position[i]).collect();
                c2.sort_unstable();
                c2
            })
            .collect();
        cones.sort();
        cones.dedup();
        (self.rank, gens, cones)
    }

    /// Serializes to the text fan-file format, optionally with divisor
    /// coefficient lists. The output round-trips bit-exactly.
    pub fn to_text(&self, divisors: &[Vec<i64>]) -> String {
        let mut out = String::new();
        out.push_str(&format!("rank {}\n", self.rank));
        out.push_str(&format!("generators {}\n", self.ray_count()));
        for g in &self.generators {
            let row: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push_str(&format!("cones {}\n", self.max_cones.len()));
        for c in &self.max_cones {
            let row: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if !divisors.is_empty() {
            out.push_str(&format!("divisors {}\n", divisors.len()));
            for d in divisors {
                let row: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }

    /// Parses the text fan-file format; inverse of [`Fan::to_text`].
    pub fn parse_text(input: &str) -> Result<(Fan, Vec<Vec<i64>>), FanError> {
        let mut lines = input.lines();
        let parse_count = |line: Option<&str>, field: &str| -> Result<usize, FanError> {
            let line = line.ok_or_else(|| FanError::Parse {
                field: field.into(),
                message: "missing line".into(),
            })?;
            let rest = line
                .strip_prefix(field)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| FanError::Parse {
                    field: field.into(),
                    message: format!("expected `{field} <count>`, got `{line}`"),
                })?;
            rest.parse().map_err(|_| FanError::Parse {
                field: field.into(),
                message: format!("not a number: `{rest}`"),
            })
        };
        let rank = parse_count(lines.next(), "rank")?;
        let gen_count = parse_count(lines.next(), "generators")?;
        let mut generators = Vec::with_capacity(gen_count);
        for idx in 0..gen_count {
            let line = lines.next().ok_or_else(|| FanError::Parse {
                field: "generators".into(),
                message: format!("missing generator {}", idx + 1),
            })?;
            let row: Result<Vec<i64>, _> = line.split(' ').map(|t| t.parse()).collect();
            let row = row.map_err(|_| FanError::Parse {
                field: "generators".into(),
                message: format!("bad integer in `{line}`"),
            })?;
            if row.len() != rank {
                return Err(FanError::Parse {
                    field: "generators".into(),
                    message: format!(
                        "generator {} has length {}, expected {}",
                        idx + 1,
                        row.len(),
                        rank
                    ),
                });
            }
            generators.push(row);
        }
        let cone_count = parse_count(lines.next(), "cones")?;
        let mut max_cones = Vec::with_capacity(cone_count);
        for idx in 0..cone_count {
            let line = lines.next().ok_or_else(|| FanError::Parse {
                field: "cones".into(),
                message: format!("missing cone {}", idx + 1),
            })?;
            let row: Result<Vec<usize>, _> = line.split(' ').map(|t| t.parse::<usize>()).collect();
            let row = row.map_err(|_| FanError::Parse {
                field: "cones".into(),
                message: format!("bad index in `{line}`"),
            })?;
            if row.iter().any(|&i| i == 0 || i > gen_count) {
                return Err(FanError::Parse {
                    field: "cones".into(),
                    message: format!("cone {} has a 1-based index out of range", idx + 1),
                });
            }
            max_cones.push(row.iter().map(|&i| i - 1).collect());
        }
        let mut divisors = Vec::new();
        if let Some(line) = lines.next() {
            if !line.is_empty() {
                let count = parse_count(Some(line), "divisors")?;
                for idx in 0..count {
                    let line = lines.next().ok_or_else(|| FanError::Parse {
                        field: "divisors".into(),
                        message: format!("missing divisor {}", idx + 1),
                    })?;
                    let row: Result<Vec<i64>, _> = line.split(' ').map(|t| t.parse()).collect();
                    let row = row.map_err(|_| FanError::Parse {
                        field: "divisors".into(),
                        message: format!("bad integer in `{line}`"),
                    })?;
                    if row.len() != gen_count {
                        return Err(FanError::Parse {
                            field: "divisors".into(),
                            message: format!(
                                "divisor {} has length {}, expected {}",
                                idx + 1,
                                row.len(),
                                gen_count
                            ),
                        });
                    }
                    divisors.push(row);
                }
            }
        }
        Ok((Fan::from_parts(rank, generators, max_cones), divisors))
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

impl Eq for Fan {}

fn one_based(c: &[usize]) -> Vec<usize> {
    c.iter().map(|&i| i + 1).collect()
}

/// Deterministic search for a ray bijection and flip set relating two fans'
/// generators by sign reflection. Candidates are tried unflipped before
/// flipped and in increasing target index, so the first hit is the
/// lexicographically least witness.
pub fn reflection_witness(f1: &Fan, f2: &Fan) -> Option<ReflectionWitness> {
    if f1.rank() != f2.rank() || f1.ray_count() != f2.ray_count() {
        return None;
    }
    let d = f1.ray_count();
    let mut assignment: Vec<(usize, bool)> = Vec::with_capacity(d);
    let mut used = vec![false; d];

    fn search(
        i: usize,
        d: usize,
        f1: &Fan,
        f2: &Fan,
        used: &mut Vec<bool>,
        assignment: &mut Vec<(usize, bool)>,
    ) -> bool {
        if i == d {
            return true;
        }
        for flipped in [false, true] {
            let expect: Vec<i64> = f1.generators()[i]
                .iter()
                .map(|&x| if flipped { -x } else { x })
                .collect();
            for j in 0..d {
                if used[j] || f2.generators()[j] != expect {
                    continue;
                }
                used[j] = true;
                assignment.push((j, flipped));
                if search(i + 1, d, f1, f2, used, assignment) {
                    return true;
                }
                assignment.pop();
                used[j] = false;
            }
        }
        false
    }

    if search(0, d, f1, f2, &mut used, &mut assignment) {
        let renumbering: Vec<usize> = assignment.iter().map(|&(j, _)| j).collect();
        let flips: Vec<usize> = assignment
            .iter()
            .enumerate()
            .filter(|(_, &(_, f))| f)
            .map(|(i, _)| i)
            .collect();
        Some(ReflectionWitness { flips, renumbering })
    } else {
        None
    }
}

/// Searches for a lattice automorphism carrying one fan onto another: a ray
/// relabeling inducing a unimodular map that matches generators exactly and
/// maps maximal cones onto maximal cones. Returns the matrix (as rows) and
/// the relabeling; the first witness in lexicographic relabeling order.
pub fn find_fan_isomorphism(f1: &Fan, f2: &Fan) -> Option<(Vec<Vec<i64>>, Vec<usize>)> {
    if f1.rank() != f2.rank() || f1.ray_count() != f2.ray_count() {
        return None;
    }
    let n = f1.rank();
    let d = f1.ray_count();
    let base = geom::independent_subset(f1.generators(), n);
    if base.len() != n {
        return None;
    }
    let base_idx: Vec<usize> = base
        .iter()
        .map(|b| f1.generators().iter().position(|g| g == b).unwrap())
        .collect();
    let mut cones2: Vec<Vec<usize>> = f2.max_cones().to_vec();
    cones2.sort();
    cones2.dedup();

    let mut perm: Vec<usize> = (0..d).collect();
    permute(&mut perm, 0, &mut |p: &[usize]| {
        let cols: Vec<Vec<i64>> = base_idx.iter().map(|&i| f1.generators()[i].clone()).collect();
        let images: Vec<Vec<i64>> =
            base_idx.iter().map(|&i| f2.generators()[p[i]].clone()).collect();
        let g = geom::solve_change_of_basis(&cols, &images, n)?;
        if !IntMatrix::from_rows(&g).det().abs().is_one() {
            return None;
        }
        for i in 0..d {
            if geom::apply_matrix(&g, &f1.generators()[i]) != f2.generators()[p[i]] {
                return None;
            }
        }
        let mut mapped: Vec<Vec<usize>> = f1
            .max_cones()
            .iter()
            .map(|c| {
                let mut m: Vec<usize> = c.iter().map(|&i| p[i]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        mapped.sort();
        mapped.dedup();
        if mapped == cones2 {
            Some((g, p.to_vec()))
        } else {
            None
        }
    })
}

fn permute<T>(
    items: &mut Vec<usize>,
    k: usize,
    f: &mut impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if k == items.len() {
        return f(items);
    }
    let mut rest: Vec<usize> = items[k..].to_vec();
    rest.sort_unstable();
    for &x in &rest {
        let pos = items[k..].iter().position(|&y| y == x).unwrap() + k;
        items.swap(k, pos);
        if let Some(r) = permute(items, k + 1, f) {
            return Some(r);
        }
        let pos = items[k..].iter().position(|&y| y == x).unwrap() + k;
        items.swap(k, pos);
    }
    None
}

pub(crate) mod geom {
    //! Exact rational cone geometry on small inputs.

    use super::*;

    pub fn to_rat(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn rank_of(vectors: &[Vec<i64>]) -> usize {
        if vectors.is_empty() {
            return 0;
        }
        RatMatrix::from_i64_rows(vectors).rank()
    }

    /// Picks a maximal independent subset (first-found, deterministic).
    pub fn independent_subset(vectors: &[Vec<i64>], target: usize) -> Vec<Vec<i64>> {
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        for v in vectors {
            let mut candidate = chosen.clone();
            candidate.push(v.clone());
            if rank_of(&candidate) == candidate.len() {
                chosen = candidate;
                if chosen.len() == target {
                    break;
                }
            }
        }
        chosen
    }

    /// Coordinates of `v` in the given basis (must lie in its span).
    pub fn coordinates_in_basis(v: &[i64], basis: &[Vec<i64>]) -> Vec<BigRational> {
        let m = rat_matrix_from_cols(basis);
        m.solve(&to_rat(v)).expect("vector outside the basis span")
    }

    pub fn rat_matrix_from_cols(cols: &[Vec<i64>]) -> RatMatrix {
        let r = cols.first().map_or(0, |c| c.len());
        let mut m = RatMatrix::zeros(r, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, BigRational::from_integer(x.into()));
            }
        }
        m
    }

    fn solve_and_verify(m: &RatMatrix, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let u = m.solve(v)?;
        let mut residual = v.to_vec();
        for (j, uj) in u.iter().enumerate() {
            for (i, r) in residual.iter_mut().enumerate() {
                let x = &*r - uj * m.get(i, j);
                *r = x;
            }
        }
        if residual.iter().all(|x| x.is_zero()) {
            Some(u)
        } else {
            None
        }
    }

    /// Membership in a simplicial cone: independent generators give unique
    /// coordinates; checks span membership and nonnegativity.
    pub fn in_simplicial_cone(v: &[i64], gens: &[Vec<i64>]) -> bool {
        in_simplicial_cone_rat(&to_rat(v), gens)
    }

    pub fn in_simplicial_cone_rat(v: &[BigRational], gens: &[Vec<i64>]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        if gens.is_empty() {
            return false;
        }
        let m = rat_matrix_from_cols(gens);
        match solve_and_verify(&m, v) {
            None => false,
            Some(u) => u.iter().all(|x| !x.is_negative()),
        }
    }

    /// Coordinate-space variant used by the wall-crossing test.
    pub fn in_simplicial_cone_coords(v: &[BigRational], gens: &[Vec<BigRational>]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let r = gens.first().map_or(0, |c| c.len());
        let mut m = RatMatrix::zeros(r, gens.len());
        for (j, col) in gens.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        match solve_and_verify(&m, v) {
            None => false,
            Some(u) => u.iter().all(|x| !x.is_negative()),
        }
    }

    /// Membership in an arbitrary finitely generated cone, by
    /// Fourier-Motzkin elimination of the combination coefficients.
    pub fn in_cone(v: &[i64], gens: &[Vec<i64>]) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if gens.is_empty() {
            return false;
        }
        if rank_of(gens) == gens.len() {
            return in_simplicial_cone(v, gens);
        }
        let k = gens.len();
        let n = v.len();
        let mut constraints: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
        for j in 0..k {
            let mut c = vec![BigRational::zero(); k];
            c[j] = BigRational::one();
            constraints.push((c, BigRational::zero()));
        }
        for i in 0..n {
            let row: Vec<BigRational> = (0..k)
                .map(|j| BigRational::from_integer(gens[j][i].into()))
                .collect();
            let rhs = BigRational::from_integer(v[i].into());
            constraints.push((row.clone(), -rhs.clone()));
            constraints.push((row.iter().map(|x| -x.clone()).collect(), rhs));
        }
        fourier_motzkin_feasible(constraints, k)
    }

    /// Feasibility of a system `coeffs . x + constant >= 0`.
    pub fn fourier_motzkin_feasible(
        mut constraints: Vec<(Vec<BigRational>, BigRational)>,
        vars: usize,
    ) -> bool {
        for var in 0..vars {
            let mut zero_rows = Vec::new();
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for (c, b) in constraints.drain(..) {
                if c[var].is_zero() {
                    zero_rows.push((c, b));
                } else if c[var].is_positive() {
                    pos.push((c, b));
                } else {
                    neg.push((c, b));
                }
            }
            for (cp, bp) in &pos {
                for (cn, bn) in &neg {
                    let alpha = -cn[var].clone();
                    let beta = cp[var].clone();
                    let c: Vec<BigRational> = (0..vars)
                        .map(|j| &cp[j] * &alpha + &cn[j] * &beta)
                        .collect();
                    let b = bp * &alpha + bn * &beta;
                    zero_rows.push((c, b));
                }
            }
            constraints = zero_rows;
        }
        constraints.iter().all(|(_, b)| !b.is_negative())
    }

    /// Normal of the hyperplane spanned by `dim - 1` independent vectors in
    /// a `dim`-dimensional coordinate space.
    pub fn hyperplane_normal(facet: &[Vec<BigRational>], dim: usize) -> Option<Vec<BigRational>> {
        if facet.is_empty() {
            return if dim == 1 {
                Some(vec![BigRational::one()])
            } else {
                None
            };
        }
        let m = RatMatrix::from_rational_rows(facet.to_vec());
        let kernel = m.kernel();
        if kernel.len() != 1 || kernel[0].len() != dim {
            return None;
        }
        Some(kernel[0].clone())
    }

    /// Extreme rays of the intersection of two simplicial cones, as ambient
    /// rational vectors normalized to leading coefficient one.
    pub fn intersection_extreme_rays(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
        let ka = a.len();
        if ka == 0 || b.is_empty() {
            return Vec::new();
        }
        let n = a[0].len();
        // parametrize x = A u, u >= 0, and require x in cone(B)
        let bt = RatMatrix::from_i64_rows(b);
        let span_functionals = bt.kernel();
        let mut eq_rows: Vec<Vec<BigRational>> = Vec::new();
        for f in &span_functionals {
            let row: Vec<BigRational> = (0..ka)
                .map(|j| {
                    (0..n)
                        .map(|i| &f[i] * BigRational::from_integer(a[j][i].into()))
                        .sum()
                })
                .collect();
            eq_rows.push(row);
        }
        let mut ineq_rows: Vec<Vec<BigRational>> = Vec::new();
        for j in 0..ka {
            let mut row = vec![BigRational::zero(); ka];
            row[j] = BigRational::one();
            ineq_rows.push(row);
        }
        // coordinates of A e_j inside cone(B), valid on span(B); candidate
        // rays are verified against cone(B) again below, so partial data is
        // fine when some generator of A leaves span(B)
        let mb = rat_matrix_from_cols(b);
        let mut coord_rows: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); ka]; b.len()];
        let mut coords_ok = true;
        for j in 0..ka {
            match solve_and_verify(&mb, &to_rat(&a[j])) {
                Some(c) => {
                    for (bi, ci) in c.iter().enumerate() {
                        coord_rows[bi][j] = ci.clone();
                    }
                }
                None => {
                    coords_ok = false;
                    break;
                }
            }
        }
        if coords_ok {
            ineq_rows.extend(coord_rows);
        }

        let mut rays: Vec<Vec<BigRational>> = Vec::new();
        let total = ineq_rows.len();
        for mask in 0usize..(1 << total) {
            let mut stacked = eq_rows.clone();
            for (idx, row) in ineq_rows.iter().enumerate() {
                if mask & (1 << idx) != 0 {
                    stacked.push(row.clone());
                }
            }
            if stacked.is_empty() {
                if ka != 1 {
                    continue;
                }
                stacked.push(vec![BigRational::zero(); ka]);
            }
            let m = RatMatrix::from_rational_rows(stacked);
            let kernel = m.kernel();
            if kernel.len() != 1 {
                continue;
            }
            let neg: Vec<BigRational> = kernel[0].iter().map(|x| -x.clone()).collect();
            for dir in [kernel[0].clone(), neg] {
                if dir.iter().all(|x| !x.is_negative()) {
                    let x: Vec<BigRational> = (0..n)
                        .map(|i| {
                            (0..ka)
                                .map(|j| &dir[j] * BigRational::from_integer(a[j][i].into()))
                                .sum()
                        })
                        .collect();
                    if x.iter().all(|v| v.is_zero()) {
                        continue;
                    }
                    if in_simplicial_cone_rat(&x, b) {
                        let norm = normalize_ray(&x);
                        if !rays.contains(&norm) {
                            rays.push(norm);
                        }
                    }
                }
            }
        }
        rays
    }

    fn normalize_ray(x: &[BigRational]) -> Vec<BigRational> {
        // scale by a positive factor only: rays are directed
        let lead = x.iter().find(|v| !v.is_zero()).cloned().unwrap().abs();
        x.iter().map(|v| v / &lead).collect()
    }

    /// Solves `G * cols[j] = images[j]` for the integer matrix `G` (rows),
    /// given `n` independent columns; `None` if the solution is not integral.
    pub fn solve_change_of_basis(
        cols: &[Vec<i64>],
        images: &[Vec<i64>],
        n: usize,
    ) -> Option<Vec<Vec<i64>>> {
        // row i of G satisfies row . cols[j] = images[j][i]
        let mut mt = RatMatrix::zeros(cols.len(), n);
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                mt.set(j, i, BigRational::from_integer(x.into()));
            }
        }
        let mut g_rows: Vec<Vec<i64>> = Vec::with_capacity(n);
        for i in 0..n {
            let rhs: Vec<BigRational> = images
                .iter()
                .map(|img| BigRational::from_integer(img[i].into()))
                .collect();
            let sol = mt.solve(&rhs)?;
            let mut row = Vec::with_capacity(n);
            for v in sol {
                if !v.is_integer() {
                    return None;
                }
                row.push(num::ToPrimitive::to_i64(v.numer())?);
            }
            g_rows.push(row);
        }
        Some(g_rows)
    }

    pub fn apply_matrix(g: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
        g.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_fan_is_valid_and_regular() {
        let f = Fan::projective(2).unwrap();
        assert_eq!(f.generators(), &[vec![1, 0], vec![0, 1], vec![-1, -1]]);
        assert!(f.validate().is_empty());
        assert!(f.is_regular());
        for n in 3..=4 {
            assert!(Fan::projective(n).unwrap().is_regular());
        }
    }

    #[test]
    fn single_ray_fan_is_valid() {
        let f = Fan::from_parts(1, vec![vec![1]], vec![vec![0]]);
        assert!(f.validate().is_empty());
    }

    #[test]
    fn dependent_cone_generators_are_reported() {
        let f = Fan::from_parts(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1, 2]],
        );
        let violations = f.validate();
        assert_eq!(violations.len(), 1);
        assert!(violations[0].0.contains("linearly dependent"));
    }

    #[test]
    fn doubled_ray_is_not_regular() {
        let f = Fan::from_parts(1, vec![vec![2]], vec![vec![0]]);
        assert!(f.validate().is_empty());
        let cert = f.regularity();
        assert!(!cert.generators_span);
        assert!(!cert.is_regular());
    }

    #[test]
    fn blowup_fan_shape() {
        let f = Fan::blowup(2).unwrap();
        assert_eq!(f.generators()[2], vec![1, 1]);
        assert_eq!(f.max_cones(), &[vec![1, 2], vec![0, 2]]);
        assert!(f.validate().is_empty());
        assert!(f.is_regular());
    }

    #[test]
    fn split_resolution_fans_are_regular() {
        // checked computationally for the whole catalog, not assumed
        for n in 2..=4 {
            for r in 1..=n {
                for sign in [Sign::Plus, Sign::Minus] {
                    let f = Fan::split_resolution(n, r, sign).unwrap();
                    assert!(f.validate().is_empty(), "n={n} r={r} {sign:?}");
                    assert!(f.is_regular(), "n={n} r={r} {sign:?}");
                }
            }
        }
        assert!(Fan::zr_resolution(3, 2, Sign::Plus).unwrap().is_regular());
    }

    #[test]
    fn zr_fan_is_valid_and_cones_match_definition() {
        let f = Fan::zr(3, 2).unwrap();
        assert!(f.validate().is_empty());
        assert!(f.is_regular());
        // oracle: enumerate subsets whose complement meets both index
        // classes and compare against the stored maximal cones
        let mut expected: Vec<Vec<usize>> = Vec::new();
        for mask in 0u32..16 {
            let subset: Vec<usize> = (0..4).filter(|&i| mask & (1 << i) != 0).collect();
            let complement: Vec<usize> = (0..4).filter(|&i| mask & (1 << i) == 0).collect();
            let hits_i = complement.iter().any(|&i| i < 2);
            let hits_rest = complement.iter().any(|&i| i >= 2);
            if hits_i && hits_rest && subset.len() == 2 {
                expected.push(subset);
            }
        }
        expected.sort();
        let mut got = f.max_cones().to_vec();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn zr_resolution_plus_has_expected_cones() {
        let f = Fan::zr_resolution(3, 2, Sign::Plus).unwrap();
        assert_eq!(f.max_cones(), &[vec![1, 2, 3], vec![0, 2, 3]]);
        let g = Fan::zr_resolution(3, 2, Sign::Minus).unwrap();
        assert_eq!(g.max_cones(), &[vec![0, 1, 3], vec![0, 1, 2]]);
    }

    #[test]
    fn reflected_generators_is_an_involution() {
        let f = Fan::projective(3).unwrap();
        let flips = vec![0, 2];
        let once = f.reflected_generators(&flips);
        let twice = Fan::from_parts(3, once, vec![]).reflected_generators(&flips);
        assert_eq!(twice, f.generators());
        assert_eq!(f.reflected_generators(&[]), f.generators());
    }

    #[test]
    fn reflecting_the_last_projective_ray_gives_the_blowup_generators() {
        for n in 2..=4 {
            let p = Fan::projective(n).unwrap();
            let b = Fan::blowup(n).unwrap();
            assert_eq!(p.reflected_generators(&[n]), b.generators());
        }
    }

    #[test]
    fn projective_blowup_witness_is_the_last_ray() {
        let p = Fan::projective(2).unwrap();
        let b = Fan::blowup(2).unwrap();
        let w = reflection_witness(&p, &b).expect("witness");
        assert!(w.verify(&p, &b));
        assert_eq!(w.flips, vec![2]);
        assert_eq!(w.renumbering, vec![0, 1, 2]);
        // symmetric
        let w2 = reflection_witness(&b, &p).expect("witness");
        assert!(w2.verify(&b, &p));
        assert_eq!(w2.size(), 1);
    }

    #[test]
    fn split_resolution_witness_has_size_r() {
        for n in 2..=4usize {
            for r in 1..=n {
                let p = Fan::projective(n).unwrap();
                let x = Fan::split_resolution(n, r, Sign::Plus).unwrap();
                let w = reflection_witness(&p, &x).expect("witness");
                assert!(w.verify(&p, &x));
                assert_eq!(w.flips, (0..r).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn self_witness_is_empty() {
        let f = Fan::projective(3).unwrap();
        let w = reflection_witness(&f, &f).expect("witness");
        assert!(w.flips.is_empty());
        assert_eq!(w.renumbering, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rank_mismatch_has_no_witness() {
        let a = Fan::projective(2).unwrap();
        let b = Fan::projective(3).unwrap();
        assert!(reflection_witness(&a, &b).is_none());
    }

    #[test]
    fn full_flip_projective_pair() {
        let p = Fan::projective(3).unwrap();
        let q = Fan::reflected_projective(3, &[0, 1, 2, 3]).unwrap();
        let w = reflection_witness(&p, &q).expect("witness");
        assert_eq!(w.flips, vec![0, 1, 2, 3]);
        assert!(q.is_regular());
    }

    #[test]
    fn refines_is_reflexive() {
        let f = Fan::projective(2).unwrap();
        assert!(f.refines(&f));
        let g = Fan::blowup(3).unwrap();
        assert!(g.refines(&g));
    }

    #[test]
    fn resolution_refines_the_singular_cone() {
        // the resolution fan subdivides the rank-one matrix fan extended by
        // the full (non-simplicial) cone on all rays
        let res = Fan::zr_resolution(3, 2, Sign::Plus).unwrap();
        let zr = Fan::zr(3, 2).unwrap();
        let mut cones = zr.max_cones().to_vec();
        cones.push(vec![0, 1, 2, 3]);
        let closure = Fan::from_parts(3, zr.generators().to_vec(), cones);
        assert!(res.refines(&closure));
        let res_minus = Fan::zr_resolution(3, 2, Sign::Minus).unwrap();
        assert!(res_minus.refines(&closure));
    }

    #[test]
    fn projective_does_not_refine_blowup() {
        let p = Fan::projective(2).unwrap();
        let b = Fan::blowup(2).unwrap();
        assert!(!p.refines(&b));
        // sampled-point oracle for the support difference: (-1, 0) is in the
        // projective support but in no blow-up cone
        let v = vec![-1i64, 0];
        let in_blowup = b.max_cones().iter().any(|c| {
            geom::in_cone(
                &v,
                &c.iter().map(|&i| b.generators()[i].clone()).collect::<Vec<_>>(),
            )
        });
        assert!(!in_blowup);
    }

    #[test]
    fn file_format_roundtrip_is_bit_exact() {
        let f = Fan::blowup(2).unwrap();
        let divisors = vec![vec![0, 0, 5], vec![1, -2, 3]];
        let text = f.to_text(&divisors);
        let (g, d2) = Fan::parse_text(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(divisors, d2);
        assert_eq!(g.to_text(&d2), text);
        // and without divisors
        let t2 = f.to_text(&[]);
        let (h, d3) = Fan::parse_text(&t2).unwrap();
        assert_eq!(h.to_text(&d3), t2);
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = Fan::parse_text("rank x\n").unwrap_err();
        assert!(matches!(err, FanError::Parse { ref field, .. } if field == "rank"));
        let err = Fan::parse_text("rank 2\ngenerators 1\n1 zz\ncones 0\n").unwrap_err();
        assert!(matches!(err, FanError::Parse { ref field, .. } if field == "generators"));
        let err = Fan::parse_text("rank 2\ngenerators 1\n1 0\ncones 1\n0\n").unwrap_err();
        assert!(matches!(err, FanError::Parse { ref field, .. } if field == "cones"));
    }

    #[test]
    fn minimal_fan_requires_spanning_generators() {
        assert!(Fan::minimal(2, vec![vec![1, 0]]).is_err());
        let f = Fan::minimal(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        assert!(f.validate().is_empty());
        assert_eq!(f.max_cones().len(), 3);
    }

    #[test]
    fn fan_equality_ignores_numbering() {
        let a = Fan::from_parts(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]);
        let b = Fan::from_parts(2, vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1]]);
        assert_eq!(a, b);
    }

    #[test]
    fn fan_isomorphism_search_finds_identity() {
        let f = Fan::projective(2).unwrap();
        let (g, p) = find_fan_isomorphism(&f, &f).expect("isomorphism");
        assert_eq!(g, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn fan_isomorphism_search_rejects_unrelated_fans() {
        let a = Fan::projective(2).unwrap();
        let b = Fan::blowup(2).unwrap();
        assert!(find_fan_isomorphism(&a, &b).is_none());
    }

    #[test]
    fn catalog_fans_satisfy_the_split_relation() {
        for n in 2..=4usize {
            for r in 1..=n {
                let f = Fan::split_resolution(n, r, Sign::Plus).unwrap();
                let gens = f.generators();
                let lhs: Vec<i64> = (0..n).map(|c| (0..r).map(|i| gens[i][c]).sum()).collect();
                let rhs: Vec<i64> = (0..n).map(|c| (r..=n).map(|i| gens[i][c]).sum()).collect();
                assert_eq!(lhs, rhs, "n={n} r={r}");
            }
        }
    }
}

