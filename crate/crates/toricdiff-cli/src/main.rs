//! Command-line front end: fan catalog and validation, class groups,
//! divisor transport, descent verification, section and cohomology bases,
//! and the full verification grid. Output is deterministic for fixed inputs;
//! `--json` switches every subcommand to a machine-readable document.

use clap::{Parser, Subcommand};
use num::ToPrimitive;
use std::path::PathBuf;
use std::process::ExitCode;
use toricdiff::divisor::{self, WeilDivisor};
use toricdiff::fan::{Fan, Sign};
use toricdiff::slrep;
use toricdiff::suite::{self, CatalogPair};
use toricdiff::twisted::verify_fourier_descent;
use toricdiff::weyl::{coeff_int, LaurentPoly};

#[derive(Parser)]
#[command(
    name = "toricdiff",
    version,
    about = "Exact verification of twisted differential operator rings on toric fans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan axioms for a catalog fan or a fan file
    FanValidate {
        #[command(flatten)]
        fan: FanSelect,
    },
    /// Print a catalog fan in the fan-file format
    FanCatalog {
        #[command(flatten)]
        fan: FanSelect,
        /// Write to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Divisor class group of a regular fan
    ClassGroup {
        #[command(flatten)]
        fan: FanSelect,
    },
    /// Print the ray generators with a subset of signs flipped
    Reflect {
        #[command(flatten)]
        fan: FanSelect,
        /// 1-based ray indices to negate, comma separated
        #[arg(long, value_delimiter = ',')]
        flips: Vec<usize>,
    },
    /// Transport a divisor along a catalog reflection pair
    Phi {
        /// Pair name (see `verify-iso`)
        #[arg(long)]
        pair: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Divisor coefficients on the projective side, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        divisor: Vec<i64>,
    },
    /// Verify that the partial Fourier transform descends to a ring
    /// isomorphism for a catalog pair
    VerifyIso {
        /// Pair: identity | blowup | matrix-resolution-plus |
        /// matrix-resolution-minus | blowup-reflected |
        /// projective-reflected (alias: pn-blowup = blowup-reflected)
        #[arg(long, alias = "catalog")]
        pair: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Twist on the projective side
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        /// Twist on the partner side (class degree of the image)
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        #[arg(long, default_value_t = 4)]
        bound: u32,
    },
    /// Monomial basis of the section space with weights
    Sections {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Primitive section monomials within the degree bound
    Primitives {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Highest weight computed along two independent routes
    HighestWeight {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
    },
    /// Basis and dimension of the top cohomology
    Cohomology {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// Chevalley-Serre relations in the quotient ring
    SlCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Run every verification grid and print a summary table
    ReportAll {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

#[derive(clap::Args)]
struct FanSelect {
    /// Catalog name: projective | blowup | zr | zr-resolution |
    /// split-resolution | blowup-reflected | projective-reflected
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Sign for resolution fans: plus | minus
    #[arg(long)]
    sign: Option<String>,
    /// Fan file path (see the README for the format)
    #[arg(long)]
    file: Option<PathBuf>,
}

impl FanSelect {
    fn load(&self) -> Result<(Fan, Vec<Vec<i64>>), String> {
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            return Fan::parse_text(&text).map_err(|e| e.to_string());
        }
        let name = self
            .catalog
            .as_deref()
            .ok_or("either --catalog or --file is required")?;
        let n = self.n.ok_or("--n is required with --catalog")?;
        let need_r = || self.r.ok_or("--r is required for this catalog entry".to_string());
        let sign = match self.sign.as_deref() {
            None | Some("plus") | Some("+") => Sign::Plus,
            Some("minus") | Some("-") => Sign::Minus,
            Some(other) => return Err(format!("unknown sign `{other}`")),
        };
        let fan = match name {
            "projective" => Fan::projective(n),
            "blowup" => Fan::blowup(n),
            "zr" => Fan::zr(n, need_r()?),
            "zr-resolution" => Fan::zr_resolution(n, need_r()?, sign),
            "split-resolution" => Fan::split_resolution(n, need_r()?, sign),
            "blowup-reflected" => Fan::split_resolution(n, n, Sign::Plus),
            "projective-reflected" => {
                let all: Vec<usize> = (0..=n).collect();
                Fan::reflected_projective(n, &all)
            }
            other => return Err(format!("unknown catalog fan `{other}`")),
        };
        fan.map(|f| (f, Vec::new())).map_err(|e| e.to_string())
    }
}

fn resolve_pair(name: &str, n: usize, r: Option<usize>) -> Result<CatalogPair, String> {
    let resolved = match name {
        "identity" | "pn-pn" => "identity".to_string(),
        "blowup" | "pn-blowup-o1" => "blowup".to_string(),
        "blowup-reflected" | "pn-blowup" => "blowup-reflected".to_string(),
        "projective-reflected" | "pn-pn-full" => "projective-reflected".to_string(),
        "matrix-resolution-plus" | "pn-zr-plus" => {
            let r = r.ok_or("--r is required for matrix-resolution pairs")?;
            format!("matrix-resolution-plus-{r}")
        }
        "matrix-resolution-minus" | "pn-zr-minus" => {
            let r = r.ok_or("--r is required for matrix-resolution pairs")?;
            format!("matrix-resolution-minus-{r}")
        }
        other => other.to_string(),
    };
    suite::catalog_pair_by_name(n, &resolved)
        .ok_or_else(|| format!("no catalog pair `{resolved}` at n = {n}"))
}

/// Solves for the projective-side twist giving image class degree `m`; the
/// degree is an affine function of the twist with unit slope.
fn ell_for_image_degree(entry: &CatalogPair, m: i64) -> Result<i64, String> {
    let n = entry.src.rank();
    let cg = divisor::class_group(&entry.dst).map_err(|e| e.to_string())?;
    let degree_at = |ell: i64| -> Result<i64, String> {
        let d = WeilDivisor::multiple_of_ray(entry.src.ray_count(), n, ell);
        let t = divisor::transport(&entry.src, &entry.dst, &entry.witness, &d)
            .map_err(|e| e.to_string())?;
        cg.degree(&t)
            .and_then(|x| x.to_i64())
            .ok_or_else(|| "partner class group is not of rank one".to_string())
    };
    let base = degree_at(0)?;
    let slope = degree_at(1)? - base;
    if slope == 0 || (m - base) % slope != 0 {
        return Err(format!("no projective twist maps to partner degree {m}"));
    }
    Ok((m - base) / slope)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::FanValidate { fan } => {
            let (f, _) = fan.load()?;
            let violations = f.validate();
            let regular = violations.is_empty() && f.regularity().is_regular();
            if cli.json {
                let doc = serde_json::json!({
                    "valid": violations.is_empty(),
                    "regular": regular,
                    "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else if violations.is_empty() {
                println!("fan is valid; regular: {regular}");
            } else {
                for v in &violations {
                    println!("violation: {v}");
                }
            }
            Ok(violations.is_empty())
        }
        Command::FanCatalog { fan, out } => {
            let (f, divisors) = fan.load()?;
            let text = f.to_text(&divisors);
            match out {
                Some(path) => std::fs::write(path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::ClassGroup { fan } => {
            let (f, _) = fan.load()?;
            let cg = divisor::class_group(&f).map_err(|e| e.to_string())?;
            if cli.json {
                let doc = serde_json::json!({
                    "group": cg.describe(),
                    "torsion": cg.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "free_rank": cg.free_rank,
                    "ray_classes": (0..f.ray_count()).map(|i| {
                        cg.class_of(&WeilDivisor::multiple_of_ray(f.ray_count(), i, 1))
                            .to_string()
                    }).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("{}", cg.describe());
                for i in 0..f.ray_count() {
                    let c = cg.class_of(&WeilDivisor::multiple_of_ray(f.ray_count(), i, 1));
                    println!("[D{}] = {}", i + 1, c);
                }
            }
            Ok(true)
        }
        Command::Reflect { fan, flips } => {
            let (f, _) = fan.load()?;
            if flips.iter().any(|&i| i == 0 || i > f.ray_count()) {
                return Err("flip index out of range (1-based)".into());
            }
            let zero_based: Vec<usize> = flips.iter().map(|&i| i - 1).collect();
            let gens = f.reflected_generators(&zero_based);
            if cli.json {
                println!("{}", serde_json::json!({ "generators": gens }));
            } else {
                for g in gens {
                    let row: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                    println!("{}", row.join(" "));
                }
            }
            Ok(true)
        }
        Command::Phi { pair, n, r, divisor } => {
            let entry = resolve_pair(pair, *n, *r)?;
            if divisor.len() != entry.src.ray_count() {
                return Err(format!(
                    "divisor needs {} coefficients",
                    entry.src.ray_count()
                ));
            }
            let d = WeilDivisor::new(divisor.clone());
            let t = divisor::transport(&entry.src, &entry.dst, &entry.witness, &d)
                .map_err(|e| e.to_string())?;
            let cg = divisor::class_group(&entry.dst).map_err(|e| e.to_string())?;
            let class = cg.class_of(&t);
            if cli.json {
                let doc = serde_json::json!({
                    "image": t.coeffs,
                    "image_class": class.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("image divisor: {t}");
                println!("image class:   {class}");
            }
            Ok(true)
        }
        Command::VerifyIso { pair, n, r, ell, m, bound } => {
            let entry = resolve_pair(pair, *n, *r)?;
            let ell = match (ell, m) {
                (Some(e), None) => *e,
                (None, Some(m)) => ell_for_image_degree(&entry, *m)?,
                (Some(_), Some(_)) => return Err("give either --ell or --m, not both".into()),
                (None, None) => return Err("one of --ell or --m is required".into()),
            };
            let (src, dst) = suite::descent_rings(&entry, ell).map_err(|e| e.to_string())?;
            let report = verify_fourier_descent(&src, &dst, &entry.witness, *bound);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
            } else {
                print!("{}", report.render_text());
            }
            Ok(report.pass())
        }
        Command::Sections { n, r, m, bound } => {
            if *r > n + 1 {
                return Err(format!("--r must be at most n + 1 = {}", n + 1));
            }
            let space = slrep::section_basis(*n, *r, *m, *bound);
            if cli.json {
                let doc = serde_json::json!({
                    "n": n, "r": r, "m": m, "degree_bound": bound,
                    "count_within_bound": space.basis.len(),
                    "basis": space.basis.iter().zip(space.weights())
                        .map(|(nu, w)| serde_json::json!({
                            "exponents": nu,
                            "weight": w.representative(),
                        }))
                        .collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!(
                    "{} section monomials with total degree <= {bound}",
                    space.basis.len()
                );
                for (nu, w) in space.basis.iter().zip(space.weights()) {
                    println!("{} weight {w}", render_monomial(nu));
                }
            }
            Ok(true)
        }
        Command::Primitives { n, r, m, bound } => {
            if *r > n + 1 {
                return Err(format!("--r must be at most n + 1 = {}", n + 1));
            }
            let bound = bound.unwrap_or(m.unsigned_abs() as u32 + 2 * (*n as u32 + 1));
            let found = slrep::primitive_sections(*n, *r, *m, bound);
            if cli.json {
                let doc = serde_json::json!({
                    "n": n, "r": r, "m": m, "degree_bound": bound,
                    "primitives": found.iter().map(|nu| serde_json::json!({
                        "exponents": nu,
                        "weight": slrep::weight_of(nu, *r).representative(),
                    })).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("search bound: total degree <= {bound}");
                if found.is_empty() {
                    println!("no primitive monomials (space may be empty)");
                }
                for nu in &found {
                    println!(
                        "{} weight {}",
                        render_monomial(nu),
                        slrep::weight_of(nu, *r)
                    );
                }
            }
            Ok(true)
        }
        Command::HighestWeight { n, r, ell } => {
            if *r > n + 1 {
                return Err(format!("--r must be at most n + 1 = {}", n + 1));
            }
            match slrep::highest_weight(*n, *r, *ell) {
                None => {
                    if cli.json {
                        println!("{}", serde_json::json!({ "empty": true }));
                    } else {
                        println!("the section space is zero for these parameters");
                    }
                    Ok(true)
                }
                Some(hw) => {
                    if cli.json {
                        let doc = serde_json::json!({
                            "explicit": hw.explicit.representative(),
                            "reflected": hw.reflected.representative(),
                            "agree": hw.agree(),
                        });
                        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    } else {
                        println!("case formula:     {}", hw.explicit);
                        println!("reflection chain: {}", hw.reflected);
                        println!("agree: {}", hw.agree());
                    }
                    Ok(hw.agree())
                }
            }
        }
        Command::Cohomology { n, r, ell, m } => {
            let m = match (ell, m) {
                (Some(e), None) => e + *r as i64,
                (None, Some(m)) => *m,
                (Some(_), Some(_)) => return Err("give either --ell or --m, not both".into()),
                (None, None) => return Err("one of --ell or --m is required".into()),
            };
            let space = slrep::cohomology_space(*n, *r, m).map_err(|e| e.to_string())?;
            let degree = *r - 1;
            if cli.json {
                let doc = serde_json::json!({
                    "n": n, "r": r, "m": m,
                    "cohomology_degree": degree,
                    "dim": space.dim(),
                    "basis": space.basis,
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("dim H^{degree} = {}", space.dim());
                for nu in &space.basis {
                    println!("{}", render_monomial(nu));
                }
            }
            Ok(true)
        }
        Command::SlCheck { n, r, m } => {
            if *r > n + 1 {
                return Err(format!("--r must be at most n + 1 = {}", n + 1));
            }
            let ci = slrep::ChevalleyImages::standard(*n, *r);
            let ring = slrep::family_ring(*n, *r, *m).map_err(|e| e.to_string())?;
            let report = slrep::check_sl_relations(&ci, &ring);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
            } else {
                print!("{}", report.render_text());
            }
            Ok(report.pass())
        }
        Command::ReportAll { max_n } => {
            if *max_n < 2 {
                return Err("--max-n must be at least 2".into());
            }
            let reports = suite::run_all(*max_n);
            let all_pass = reports.iter().all(|r| r.pass());
            if cli.json {
                let doc = serde_json::json!({
                    "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    "pass": all_pass,
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                for r in &reports {
                    print!("{}", r.render_text());
                }
                let status = if all_pass { "PASS" } else { "FAIL" };
                println!("overall: {status}");
            }
            Ok(all_pass)
        }
    }
}

fn render_monomial(nu: &[i64]) -> String {
    let f = LaurentPoly::monomial(nu.len(), nu, coeff_int(1));
    format!("{f}")
}
