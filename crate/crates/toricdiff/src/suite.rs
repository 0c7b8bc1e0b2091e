//! Verification grids shared by the acceptance test suite and the CLI
//! `report-all` command: the reflection-descent grid, the generator
//! correspondence for the blow-up, the Chevalley-Serre grid, the weight and
//! cohomology grids, and the seeded randomized property suites.

use crate::divisor::{self, WeilDivisor};
use crate::fan::{reflection_witness, Fan, ReflectionWitness, Sign};
use crate::report::{Check, Report};
use crate::slrep::{self, ChevalleyImages, Weight};
use crate::twisted::{verify_fourier_descent, TwistedRing};
use crate::weyl::{coeff_int, coeff_ratio, LaurentPoly, WeylElement};
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A named reflection pair from the projective catalog.
pub struct CatalogPair {
    pub name: String,
    pub src: Fan,
    pub dst: Fan,
    pub witness: ReflectionWitness,
}

fn pair(name: String, src: Fan, dst: Fan) -> CatalogPair {
    let witness = reflection_witness(&src, &dst).expect("catalog pair must be related");
    CatalogPair { name, src, dst, witness }
}

/// All reflection partners of the projective fan exercised by the descent
/// grid: the fan itself (empty and full flip sets), the blow-up with one and
/// with n flipped rays, and both matrix resolutions for each middle size.
pub fn catalog_pairs(n: usize) -> Vec<CatalogPair> {
    let p = Fan::projective(n).expect("n >= 2");
    let mut out = Vec::new();
    out.push(pair("identity".into(), p.clone(), p.clone()));
    out.push(pair("blowup".into(), p.clone(), Fan::blowup(n).unwrap()));
    for r in 2..n {
        out.push(pair(
            format!("matrix-resolution-plus-{r}"),
            p.clone(),
            Fan::zr_resolution(n, r, Sign::Plus).unwrap(),
        ));
        out.push(pair(
            format!("matrix-resolution-minus-{r}"),
            p.clone(),
            Fan::zr_resolution(n, r, Sign::Minus).unwrap(),
        ));
    }
    out.push(pair(
        "blowup-reflected".into(),
        p.clone(),
        Fan::split_resolution(n, n, Sign::Plus).unwrap(),
    ));
    let all: Vec<usize> = (0..=n).collect();
    out.push(pair(
        "projective-reflected".into(),
        p.clone(),
        Fan::reflected_projective(n, &all).unwrap(),
    ));
    out
}

/// Looks up a catalog pair by name.
pub fn catalog_pair_by_name(n: usize, name: &str) -> Option<CatalogPair> {
    catalog_pairs(n).into_iter().find(|p| p.name == name)
}

/// Builds the ring pair for a catalog entry and a projective-side twist.
pub fn descent_rings(
    entry: &CatalogPair,
    ell: i64,
) -> Result<(TwistedRing, TwistedRing), String> {
    let n = entry.src.rank();
    let src_divisor = WeilDivisor::multiple_of_ray(entry.src.ray_count(), n, ell);
    let src = TwistedRing::new(entry.src.clone(), src_divisor).map_err(|e| e.to_string())?;
    let dst_divisor = divisor::transport(&entry.src, &entry.dst, &entry.witness, src.divisor())
        .map_err(|e| e.to_string())?;
    let dst = TwistedRing::new(entry.dst.clone(), dst_divisor).map_err(|e| e.to_string())?;
    Ok((src, dst))
}

/// Retwists a base ring pair for another projective-side twist without
/// revalidating the fans.
fn retwist(
    entry: &CatalogPair,
    base: &(TwistedRing, TwistedRing),
    ell: i64,
) -> Result<(TwistedRing, TwistedRing), String> {
    let n = entry.src.rank();
    let src_divisor = WeilDivisor::multiple_of_ray(entry.src.ray_count(), n, ell);
    let dst_divisor = divisor::transport(&entry.src, &entry.dst, &entry.witness, &src_divisor)
        .map_err(|e| e.to_string())?;
    let src = base.0.with_divisor(src_divisor).map_err(|e| e.to_string())?;
    let dst = base.1.with_divisor(dst_divisor).map_err(|e| e.to_string())?;
    Ok((src, dst))
}

/// Descent grid: every catalog pair, projective twists in
/// `-ell_range..=ell_range`, fixed degree bound.
pub fn fourier_descent_grid(max_n: usize, ell_range: i64, degree_bound: u32) -> Report {
    let mut report = Report::new("fourier-descent-grid");
    report.param("n", format!("2..={max_n}"));
    report.param("ell", format!("-{ell_range}..={ell_range}"));
    report.param("degree-bound", degree_bound);
    for n in 2..=max_n {
        for entry in catalog_pairs(n) {
            let mut pass = true;
            let mut detail = String::new();
            match descent_rings(&entry, 0) {
                Err(e) => {
                    pass = false;
                    detail = e;
                }
                Ok(base) => {
                    for ell in -ell_range..=ell_range {
                        let (src, dst) = match retwist(&entry, &base, ell) {
                            Ok(rings) => rings,
                            Err(e) => {
                                pass = false;
                                detail = format!("ell={ell}: {e}");
                                break;
                            }
                        };
                        let rep = verify_fourier_descent(&src, &dst, &entry.witness, degree_bound);
                        if !rep.pass() {
                            pass = false;
                            detail = format!("ell={ell}:\n{}", rep.render_text());
                            break;
                        }
                    }
                }
            }
            let label = format!("n={n} pair={} (|flips|={})", entry.name, entry.witness.size());
            report.push(if pass {
                Check::pass(label)
            } else {
                Check::fail(label, detail)
            });
        }
    }
    report
}

/// Generator correspondence for the blow-up: the images of the homogeneous
/// lifts of the projective first-order generators equal, in the quotient,
/// the lifts of the blow-up generators (coordinates, coordinate-derivative
/// mixes, and derivative times shifted Euler operator).
pub fn generator_correspondence(max_n: usize, m_range: i64) -> Report {
    let mut report = Report::new("blowup-generator-correspondence");
    report.param("n", format!("2..={max_n}"));
    report.param("m", format!("-{m_range}..={m_range}"));
    for n in 2..=max_n {
        for m in -m_range..=m_range {
            let label = format!("n={n} m={m}");
            match blowup_generator_checks(n, m) {
                Ok(()) => report.push(Check::pass(label)),
                Err(e) => report.push(Check::fail(label, e)),
            }
        }
    }
    report
}

fn blowup_generator_checks(n: usize, m: i64) -> Result<(), String> {
    let ell = m - n as i64;
    let entry = catalog_pair_by_name(n, "blowup-reflected").unwrap();
    let (src, dst) = descent_rings(&entry, ell)?;
    let flips = &entry.witness.flips;
    let d = n + 1;
    let last = n;
    let q = WeylElement::q;
    let p = WeylElement::p;
    // homogeneous lift of the affine Euler operator on the blow-up side,
    // shifted by the twist: m + theta_1 + .. + theta_n
    let euler_shifted = crate::weyl::euler_operator(d, &(0..n).collect::<Vec<_>>())
        .add(&WeylElement::one(d).scale(&coeff_int(m)));
    let eq = |a: &WeylElement, b: &WeylElement, what: &str| -> Result<(), String> {
        match dst.equal_in_quotient(a, b) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("{what}: {a} != {b} in the quotient")),
            Err(e) => Err(format!("{what}: {e}")),
        }
    };
    let _ = &src;
    for j in 0..n {
        // derivative generator -> coordinate function z_j = Q_j Q_{n+1}
        let image = q(d, last).multiply(&p(d, j)).fourier(flips);
        let z_j = q(d, j).multiply(&q(d, last));
        eq(&image, &z_j.neg(), "derivative to coordinate")?;
        // coordinate times shifted Euler -> second-order derivative pair
        let lhs = q(d, j).multiply(&p(d, last)).neg().fourier(flips);
        let rhs = p(d, j).multiply(&p(d, last)).neg();
        if lhs != rhs {
            return Err(format!("coordinate-Euler generator: {lhs} != {rhs} exactly"));
        }
    }
    for i in 0..n {
        for j in 0..n {
            // z_i d_j + delta (e - ell) in the source lifts to
            // Q_i P_j + delta (theta_1 + ... + theta_n - ell)
            let mut lift = q(d, i).multiply(&p(d, j));
            if i == j {
                let shift = crate::weyl::euler_operator(d, &(0..n).collect::<Vec<_>>())
                    .sub(&WeylElement::one(d).scale(&coeff_int(ell)));
                lift = lift.add(&shift);
            }
            let image = lift.fourier(flips);
            // target: -(z_j d_i lift) - delta (shifted Euler + 1)
            let mut target = q(d, j).multiply(&p(d, i)).neg();
            if i == j {
                target = target.sub(&euler_shifted).sub(&WeylElement::one(d));
            }
            eq(&image, &target, "mixed generator")?;
        }
    }
    Ok(())
}

/// Chevalley-Serre relations over the descent grid.
pub fn sl_relations_grid(max_n: usize, ell_range: i64) -> Report {
    let mut report = Report::new("sl-relations-grid");
    report.param("n", format!("2..={max_n}"));
    report.param("ell", format!("-{ell_range}..={ell_range}"));
    for n in 2..=max_n {
        for entry in catalog_pairs(n) {
            let ci = ChevalleyImages::new(n, &entry.witness.flips);
            let mut pass = true;
            let mut detail = String::new();
            match descent_rings(&entry, 0) {
                Err(e) => {
                    pass = false;
                    detail = e;
                }
                Ok(base) => {
                    for ell in -ell_range..=ell_range {
                        let (_, dst) = match retwist(&entry, &base, ell) {
                            Ok(rings) => rings,
                            Err(e) => {
                                pass = false;
                                detail = format!("ell={ell}: {e}");
                                break;
                            }
                        };
                        let rep = check_sl_relations_renumbered(&ci, &dst, &entry.witness);
                        if !rep.pass() {
                            pass = false;
                            detail = format!("ell={ell}:\n{}", rep.render_text());
                            break;
                        }
                    }
                }
            }
            let label = format!("n={n} pair={}", entry.name);
            report.push(if pass {
                Check::pass(label)
            } else {
                Check::fail(label, detail)
            });
        }
    }
    report
}

fn check_sl_relations_renumbered(
    ci: &ChevalleyImages,
    ring: &TwistedRing,
    witness: &ReflectionWitness,
) -> Report {
    // transport the operators into the partner numbering before checking
    slrep::check_sl_relations(&ci.renumbered(&witness.renumbering), ring)
}

/// Primitive-monomial and highest-weight grid.
pub fn weight_grid(max_n: usize, ell_range: i64) -> Report {
    let mut report = Report::new("section-weight-grid");
    report.param("n", format!("2..={max_n}"));
    report.param("ell", format!("-{ell_range}..={ell_range}"));
    for n in 2..=max_n {
        let mut pass = true;
        let mut detail = String::new();
        'grid: for r in 0..=n + 1 {
            for ell in -ell_range..=ell_range {
                let m = ell + r as i64;
                let bound = m.unsigned_abs() as u32 + 2 * (n as u32 + 1);
                let found = slrep::primitive_sections(n, r, m, bound);
                match slrep::expected_primitive(n, r, m) {
                    None => {
                        if !found.is_empty() || !slrep::section_basis(n, r, m, bound).basis.is_empty()
                        {
                            pass = false;
                            detail = format!("r={r} ell={ell}: expected empty space");
                            break 'grid;
                        }
                    }
                    Some(nu) => {
                        if found != vec![nu.clone()] {
                            pass = false;
                            detail =
                                format!("r={r} ell={ell}: primitives {found:?}, expected {nu:?}");
                            break 'grid;
                        }
                        let hw = slrep::highest_weight(n, r, ell).expect("nonempty case");
                        if !hw.agree() {
                            pass = false;
                            detail = format!(
                                "r={r} ell={ell}: weight routes disagree: {} vs {}",
                                hw.explicit, hw.reflected
                            );
                            break 'grid;
                        }
                        if slrep::weight_of(&nu, r) != hw.explicit {
                            pass = false;
                            detail = format!("r={r} ell={ell}: primitive weight mismatch");
                            break 'grid;
                        }
                        // blow-up row: closed-form fundamental-weight formulas
                        if r == n {
                            let expected = if m >= 0 {
                                Weight::fundamental(n, n).scale(-(m + 1))
                            } else {
                                Weight::fundamental(n, n)
                                    .scale(m - 1)
                                    .add(&Weight::fundamental(n, n - 1).scale(-m))
                            };
                            if hw.explicit != expected {
                                pass = false;
                                detail = format!("r={r} ell={ell}: blow-up weight mismatch");
                                break 'grid;
                            }
                        }
                    }
                }
            }
        }
        let label = format!("n={n} all r, all ell");
        report.push(if pass { Check::pass(label) } else { Check::fail(label, detail) });
    }
    report
}

/// Graded dimension cross-check grid.
pub fn cech_grid(max_n: usize, degree_bound: u32) -> Report {
    let mut report = Report::new("cech-dimension-grid");
    report.param("n", format!("2..={max_n}"));
    report.param("degree-bound", degree_bound);
    for n in 2..=max_n {
        for r in 2..=n {
            let mut pass = true;
            let mut detail = String::new();
            for m in 0..=(r as i64 + 5) {
                match slrep::cech_dimension_profile(n, r, m, degree_bound) {
                    Ok(profile) => {
                        if !profile.agrees() {
                            pass = false;
                            detail = format!("m={m}:\n{}", profile.report().render_text());
                            break;
                        }
                        if (profile.top_direct > 0) != (m >= r as i64) {
                            pass = false;
                            detail = format!("m={m}: top cohomology threshold violated");
                            break;
                        }
                    }
                    Err(e) => {
                        pass = false;
                        detail = format!("m={m}: {e}");
                        break;
                    }
                }
            }
            let label = format!("n={n} r={r} m=0..={}", r + 5);
            report.push(if pass { Check::pass(label) } else { Check::fail(label, detail) });
        }
    }
    report
}

/// Irreducibility data for the top cohomology: unique primitive class,
/// Cartan eigenvalue, dimension formula, and generation witnesses.
pub fn cohomology_grid(max_n: usize, ell_max: i64) -> Report {
    let mut report = Report::new("cohomology-module-grid");
    report.param("n", format!("2..={max_n}"));
    report.param("ell", format!("0..={ell_max}"));
    for n in 2..=max_n {
        for r in 2..=n {
            let mut pass = true;
            let mut detail = String::new();
            let base_ring = match slrep::family_ring(n, r, 0) {
                Ok(ring) => ring,
                Err(e) => {
                    report.push(Check::fail(format!("n={n} r={r}"), e.to_string()));
                    continue;
                }
            };
            'grid: for ell in 0..=ell_max {
                let m = ell + r as i64;
                let space = match slrep::cohomology_space(n, r, m) {
                    Ok(s) => s,
                    Err(e) => {
                        pass = false;
                        detail = format!("ell={ell}: {e}");
                        break;
                    }
                };
                let primitives = slrep::primitive_cohomology_classes(&space);
                if primitives != vec![space.top_class()] {
                    pass = false;
                    detail = format!("ell={ell}: primitives {primitives:?}");
                    break;
                }
                let raw = slrep::raw_weight_of(&space.top_class(), r);
                if raw[0] != ell {
                    pass = false;
                    detail = format!("ell={ell}: Cartan eigenvalue {raw:?}");
                    break;
                }
                let w = slrep::weight_of(&space.top_class(), r);
                if w != Weight::fundamental(n, 1).scale(ell) {
                    pass = false;
                    detail = format!("ell={ell}: weight {w}");
                    break;
                }
                let dim = BigInt::from(space.dim() as i64);
                let expected = slrep::weyl_dim(n, &w).expect("dominant");
                if dim != expected {
                    pass = false;
                    detail = format!("ell={ell}: dim {dim} vs {expected}");
                    break;
                }
                let ring = base_ring
                    .with_divisor(WeilDivisor::multiple_of_ray(n + 1, n, m))
                    .expect("same ray count");
                for nu in &space.basis {
                    match slrep::verify_cohomology_generation_in(&ring, &space, ell, nu) {
                        Ok(true) => {}
                        Ok(false) => {
                            pass = false;
                            detail = format!("ell={ell}: witness misses {nu:?}");
                            break 'grid;
                        }
                        Err(e) => {
                            pass = false;
                            detail = format!("ell={ell} nu={nu:?}: {e}");
                            break 'grid;
                        }
                    }
                }
            }
            let label = format!("n={n} r={r}");
            report.push(if pass { Check::pass(label) } else { Check::fail(label, detail) });
        }
    }
    report
}

/// A random Weyl element: up to `terms` monomials with per-variable
/// exponents below `max_exp` and small rational coefficients.
pub fn random_element(rng: &mut ChaCha8Rng, dim: usize, terms: usize, max_exp: u32) -> WeylElement {
    let mut out = WeylElement::zero(dim);
    for _ in 0..terms {
        let q: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=max_exp)).collect();
        let p: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=max_exp)).collect();
        let num = rng.gen_range(-3..=3i64);
        let den = rng.gen_range(1..=3i64);
        out = out.add(&WeylElement::monomial(dim, &q, &p, coeff_ratio(num, den)));
    }
    out
}

fn random_laurent(rng: &mut ChaCha8Rng, dim: usize, terms: usize, range: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero(dim);
    for _ in 0..terms {
        let e: Vec<i64> = (0..dim).map(|_| rng.gen_range(-range..=range)).collect();
        out = out.add(&LaurentPoly::monomial(dim, &e, coeff_int(rng.gen_range(-3..=3))));
    }
    out
}

/// Seeded randomized property suites, every law checked as exact equality:
/// associativity, the transform laws, the action homomorphism, the Euler
/// canonical-form round trip, representative independence of the divisor
/// transport, and centrality of the ideal generators.
pub fn property_suite(seed: u64, cases: usize) -> Report {
    let mut report = Report::new("property-suite");
    report.param("seed", seed);
    report.param("cases", cases);

    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = true;
        for _ in 0..cases {
            let a = random_element(&mut rng, 3, 2, 2);
            let b = random_element(&mut rng, 3, 2, 2);
            let c = random_element(&mut rng, 3, 2, 2);
            if a.multiply(&b).multiply(&c) != a.multiply(&b.multiply(&c)) {
                ok = false;
                break;
            }
        }
        report.push(if ok {
            Check::pass("product associativity")
        } else {
            Check::fail("product associativity", "counterexample found")
        });
    }

    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut ok = true;
        for _ in 0..cases {
            let a = random_element(&mut rng, 3, 2, 2);
            let b = random_element(&mut rng, 3, 2, 2);
            let k = rng.gen_range(1..=2usize);
            let flips: Vec<usize> = (0..3).filter(|_| rng.gen_bool(0.6)).take(k).collect();
            if a.multiply(&b).fourier(&flips) != a.fourier(&flips).multiply(&b.fourier(&flips)) {
                ok = false;
                break;
            }
            let mut four = a.clone();
            for _ in 0..4 {
                four = four.fourier(&flips);
            }
            if four != a {
                ok = false;
                break;
            }
            if a.fourier_inverse(&flips).fourier(&flips) != a {
                ok = false;
                break;
            }
            // equivariance: weights of the image are sign-flipped weights
            let before = a.torus_weights();
            for w in a.fourier(&flips).torus_weights() {
                let mut unflipped = w.clone();
                for &i in &flips {
                    unflipped[i] = -unflipped[i];
                }
                if !before.contains(&unflipped) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
        }
        report.push(if ok {
            Check::pass("transform is an algebra automorphism of order four")
        } else {
            Check::fail("transform is an algebra automorphism of order four", "counterexample")
        });
    }

    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
        let mut ok = true;
        for _ in 0..cases {
            let a = random_element(&mut rng, 2, 2, 2);
            let b = random_element(&mut rng, 2, 2, 2);
            let f = random_laurent(&mut rng, 2, 2, 3);
            if a.multiply(&b).apply(&f) != a.apply(&b.apply(&f)) {
                ok = false;
                break;
            }
        }
        report.push(if ok {
            Check::pass("action is a module structure")
        } else {
            Check::fail("action is a module structure", "counterexample")
        });
    }

    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
        let mut ok = true;
        for _ in 0..cases {
            let a = random_element(&mut rng, 3, 3, 2);
            if a.to_theta_form().to_weyl() != a {
                ok = false;
                break;
            }
        }
        report.push(if ok {
            Check::pass("Euler canonical form round trip")
        } else {
            Check::fail("Euler canonical form round trip", "counterexample")
        });
    }

    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
        let n = 3usize;
        let p = Fan::projective(n).unwrap();
        let x = Fan::split_resolution(n, 2, Sign::Plus).unwrap();
        let w = reflection_witness(&p, &x).unwrap();
        let cg = divisor::class_group(&x).unwrap();
        let mut ok = true;
        for _ in 0..cases {
            let d = WeilDivisor::new((0..n + 1).map(|_| rng.gen_range(-5..=5)).collect());
            let mu: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let moved = d.add(&divisor::character_divisor(&p, &mu));
            let t1 = divisor::transport(&p, &x, &w, &d).unwrap();
            let t2 = divisor::transport(&p, &x, &w, &moved).unwrap();
            if cg.class_of(&t1) != cg.class_of(&t2)
                || divisor::linearly_equivalent(&x, &t1, &t2).is_none()
            {
                ok = false;
                break;
            }
        }
        report.push(if ok {
            Check::pass("divisor transport is representative-independent")
        } else {
            Check::fail("divisor transport is representative-independent", "counterexample")
        });
    }

    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
        let fan = Fan::projective(2).unwrap();
        let mut ok = true;
        for _ in 0..cases {
            let ell = rng.gen_range(-4..=4i64);
            let ring = TwistedRing::new(
                fan.clone(),
                WeilDivisor::multiple_of_ray(3, 2, ell),
            )
            .unwrap();
            let gen = ring.ideal_generator(&[1, 1, 1]).unwrap();
            let monomials = ring.invariant_monomials(3);
            let g = &monomials[rng.gen_range(0..monomials.len())];
            if gen.multiply(g) != g.multiply(&gen) {
                ok = false;
                break;
            }
        }
        report.push(if ok {
            Check::pass("ideal generators are central among invariants")
        } else {
            Check::fail("ideal generators are central among invariants", "counterexample")
        });
    }

    report
}

/// Runs every verification family. `max_n = 4` reproduces the full grid;
/// smaller values give a faster smoke pass.
pub fn run_all(max_n: usize) -> Vec<Report> {
    vec![
        fourier_descent_grid(max_n, 4, 4),
        generator_correspondence(max_n, 3),
        sl_relations_grid(max_n, 4),
        weight_grid(max_n, 4),
        cech_grid(max_n, 8),
        cohomology_grid(max_n, 4),
        property_suite(0x5eed, 200),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_pair_sizes() {
        let pairs = catalog_pairs(4);
        let sizes: Vec<(String, usize)> =
            pairs.iter().map(|p| (p.name.clone(), p.witness.size())).collect();
        assert_eq!(
            sizes,
            vec![
                ("identity".into(), 0),
                ("blowup".into(), 1),
                ("matrix-resolution-plus-2".into(), 2),
                ("matrix-resolution-minus-2".into(), 2),
                ("matrix-resolution-plus-3".into(), 3),
                ("matrix-resolution-minus-3".into(), 3),
                ("blowup-reflected".into(), 4),
                ("projective-reflected".into(), 5),
            ]
        );
    }

    #[test]
    fn small_descent_grid_passes() {
        let rep = fourier_descent_grid(2, 1, 3);
        assert!(rep.pass(), "{}", rep.render_text());
    }

    #[test]
    fn generator_correspondence_small() {
        let rep = generator_correspondence(2, 1);
        assert!(rep.pass(), "{}", rep.render_text());
    }

    #[test]
    fn property_suite_is_deterministic_and_green() {
        let a = property_suite(42, 25);
        let b = property_suite(42, 25);
        assert!(a.pass(), "{}", a.render_text());
        assert_eq!(a.render_text(), b.render_text());
    }
}
