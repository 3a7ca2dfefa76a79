//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification report contains a
//! violation, 2 on usage or precondition errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{self, build_fiber_ring, GradedSlice};
use crate::molien::{self, GroupType};
use crate::params::{self, ParamVector};
use crate::preproj;
use crate::quiver::{build_from_label, CartanData, LatticeVector, Quiver};
use crate::rational::{frac, parse_int_list, Q};
use crate::roots::{self, WeightClass};
use crate::weyl::{self, WeylWord};
use crate::zalgebra::{self, AssociativityWitness, SpanWitness};

#[derive(Parser, Debug)]
#[command(name = "kleinian", version, about = "Exact computations for Kleinian singularities and affine quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct TypeArg {
    /// Affine Dynkin label: A<n>, D<n>, E6, E7, E8.
    #[arg(long = "type")]
    ty: String,
}

#[derive(Args, Debug)]
struct FiberArgs {
    /// Number of vertices of the cyclic quiver.
    #[arg(long)]
    n: usize,
    /// Character, comma-separated integers summing to zero.
    #[arg(long, allow_hyphen_values = true)]
    chi: String,
    #[arg(long)]
    dmax: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quiver, Cartan matrix, delta and defect.
    Quiver {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long)]
        doubled: bool,
    },
    /// Roots inside the box |a_i| <= bound.
    Roots {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long)]
        bound: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Classify a weight among Lambda, Lambda_+, Lambda_++.
    ClassifyWeight {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// Regularity, finite-dimensional modules and dominance of a parameter.
    Analyze {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Shift xi removing simple modules of dimension at most d.
    ChooseXi {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        d: u64,
        /// Exhaustive search for a shift of minimal coordinate sum.
        #[arg(long)]
        search_min: bool,
    },
    /// Translation by xi as a word in simple reflections and an automorphism.
    WeylDecompose {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a word (automorphism first, then reflections right to left).
    ApplyWord {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Vertex permutation; identity when omitted.
        #[arg(long)]
        automorphism: Option<String>,
        #[arg(long, default_value = "")]
        reflections: String,
    },
    /// Graded slices of S_m up to degree dmax.
    Semiinv {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long)]
        m: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Surjectivity of S_left x S_right -> S_{left+right}, or the minimal passing N.
    MultCheck {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long, requires = "right", conflicts_with = "max")]
        left: Option<i64>,
        #[arg(long, requires = "left")]
        right: Option<i64>,
        /// Check every pair in [1, max]^2 and report the minimal passing N.
        #[arg(long, required_unless_present = "left")]
        max: Option<i64>,
    },
    /// S_{jN} = (S_N)^j for j <= jmax.
    PowerCheck {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long = "N")]
        power: i64,
        #[arg(long, default_value_t = 4)]
        jmax: u32,
    },
    /// AB = x^n and S_0 spanned by x, A, B.
    KleinianCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dmax: u32,
    },
    /// Molien series of Z<n> or BD<4n>.
    Molien {
        #[arg(long)]
        group: String,
        #[arg(long)]
        dmax: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Filtration dimensions of the truncated deformed preprojective algebra.
    PreprojDims {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long = "L")]
        length: usize,
        #[arg(long, default_value_t = 0)]
        buffer: usize,
        /// Compare the spherical part with the Molien series instead.
        #[arg(long)]
        molien: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Associativity and Morita condition (ii) on a truncated Z-algebra.
    ZalgCheck {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        #[arg(long = "N")]
        morita_n: usize,
        #[arg(long = "M")]
        max_index: usize,
        #[arg(long)]
        cap: u32,
        /// Negative control: corrupt one multiplication table entry.
        #[arg(long, value_enum)]
        perturb: Option<Perturbation>,
    },
    /// Scan random dominant parameters for candidate simple modules of dimension <= d.
    XiConjecture {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Split m into parts in [N, 2N-1].
    DecomposeSum {
        #[arg(long)]
        m: u64,
        #[arg(long = "N")]
        n: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    #[value(name = "typeA")]
    TypeA,
    Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Perturbation {
    Scale,
    Delete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSummary {
    pub quiver: Quiver,
    pub cartan: Vec<Vec<i64>>,
    pub delta: LatticeVector,
    pub defect: LatticeVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    pub xi: LatticeVector,
    pub class: WeightClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub xi: LatticeVector,
    pub shifted: ParamVector,
    pub report: params::ParamReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordReport {
    pub automorphism: Vec<usize>,
    pub reflections: Vec<usize>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolienReport {
    pub group: GroupType,
    pub order: usize,
    pub dims: Vec<u64>,
    pub cumulative: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZalgReport {
    pub model: String,
    pub max_index: usize,
    pub degree_cap: u32,
    pub perturbation: Option<String>,
    pub graded: bool,
    pub unital: bool,
    pub associative: bool,
    pub triples_checked: u64,
    pub associativity_witness: Option<AssociativityWitness>,
    pub morita_n: usize,
    pub morita_ii: String,
    pub vacuous: bool,
    pub witnesses: Vec<SpanWitness>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub samples: usize,
    pub dominant: usize,
    pub d: u64,
    pub obstructed: Vec<params::DominanceTrial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumReport {
    pub m: u64,
    pub n: u64,
    pub parts: Vec<u64>,
}

/// Output of a subcommand: text for stdout and whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn json<T: Serialize>(value: &T) -> Outcome {
        Outcome::checked(value, true)
    }

    fn checked<T: Serialize>(value: &T, passed: bool) -> Outcome {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        Outcome { text, passed }
    }

    fn csv(header: &[&str], rows: Vec<Vec<String>>) -> Outcome {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for r in rows {
            w.write_record(&r).expect("in-memory write");
        }
        Outcome { text: String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8"), passed: true }
    }
}

fn quiver(ty: &TypeArg) -> Result<Quiver> {
    build_from_label(&ty.ty)
}

fn ints(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_int_list(s)
}

fn indices(s: &str) -> Result<Vec<usize>> {
    ints(s)?
        .into_iter()
        .map(|x| usize::try_from(x).map_err(|_| Error::InvalidArgument(format!("negative index {x}"))))
        .collect()
}

fn coords(v: &[i64]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn execute(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::Quiver { ty, doubled } => {
            let q = quiver(&ty)?;
            let CartanData { matrix } = q.cartan()?;
            let summary = QuiverSummary {
                delta: q.delta()?,
                defect: q.defect()?,
                cartan: matrix,
                quiver: if doubled { q.double()? } else { q },
            };
            Outcome::json(&summary)
        }
        Command::Roots { ty, bound, format } => {
            if bound < 0 {
                return Err(Error::InvalidArgument("bound must be nonnegative".into()));
            }
            let list = roots::enumerate_roots(&quiver(&ty)?, bound);
            match format {
                Format::Json => Outcome::json(&list),
                Format::Csv => Outcome::csv(
                    &["coords", "is_real", "is_dynkin", "is_positive"],
                    list.iter()
                        .map(|r| {
                            vec![coords(&r.coords), r.is_real.to_string(), r.is_dynkin.to_string(), r.is_positive.to_string()]
                        })
                        .collect(),
                ),
            }
        }
        Command::ClassifyWeight { ty, xi } => {
            let xi = ints(&xi)?;
            let class = roots::classify_weight(&quiver(&ty)?, &xi)?;
            Outcome::json(&WeightReport { xi: LatticeVector(xi), class })
        }
        Command::Analyze { ty, lambda } => {
            Outcome::json(&params::analyze(&quiver(&ty)?, &ParamVector::parse(&lambda)?)?)
        }
        Command::ChooseXi { ty, lambda, d, search_min } => {
            let q = quiver(&ty)?;
            let lambda = ParamVector::parse(&lambda)?;
            let xi = if search_min { params::search_min_xi(&q, &lambda, d)? } else { params::choose_xi(&q, &lambda, d)? };
            let shifted = lambda.add_lattice(&xi);
            let report = params::analyze(&q, &shifted)?;
            Outcome::json(&ShiftReport { xi, shifted, report })
        }
        Command::WeylDecompose { ty, xi, seed } => {
            let q = quiver(&ty)?;
            let xi = ints(&xi)?;
            let word = weyl::decompose_translation(&q, &xi, seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let verified = weyl::verify_translation(&q, &word, &xi, &mut rng)?;
            let WeylWord { automorphism, reflections } = word;
            Outcome::checked(&WordReport { automorphism, reflections, verified }, verified)
        }
        Command::ApplyWord { ty, lambda, automorphism, reflections } => {
            let q = quiver(&ty)?;
            let lambda = ParamVector::parse(&lambda)?;
            let word = WeylWord {
                automorphism: match automorphism {
                    Some(s) => indices(&s)?,
                    None => (0..q.vertex_count()).collect(),
                },
                reflections: indices(&reflections)?,
            };
            Outcome::json(&weyl::apply_word(&q, &word, &lambda)?)
        }
        Command::Semiinv { fiber: f, m, format } => {
            let ring = build_fiber_ring(f.n)?;
            let chi = ints(&f.chi)?;
            let slices: Vec<GradedSlice> = (0..=f.dmax).map(|d| fiber::slice(&ring, &chi, m, d)).collect::<Result<_>>()?;
            match format {
                Format::Json => Outcome::json(&slices),
                Format::Csv => Outcome::csv(
                    &["m", "degree", "dimension"],
                    slices.iter().map(|s| vec![s.m.to_string(), s.degree.to_string(), s.dimension.to_string()]).collect(),
                ),
            }
        }
        Command::MultCheck { fiber: f, left, right, max } => {
            let ring = build_fiber_ring(f.n)?;
            let chi = ints(&f.chi)?;
            match (left, right, max) {
                (Some(l), Some(r), _) => {
                    let rep = fiber::check_mult_surjective(&ring, &chi, l, r, f.dmax)?;
                    Outcome::checked(&rep, rep.surjective)
                }
                (_, _, Some(max)) => {
                    let rep = fiber::minimal_surjective_power(&ring, &chi, max, f.dmax)?;
                    let passed = rep.minimal_n.is_some();
                    Outcome::checked(&rep, passed)
                }
                _ => return Err(Error::InvalidArgument("give --left and --right, or --max".into())),
            }
        }
        Command::PowerCheck { fiber: f, power, jmax } => {
            let ring = build_fiber_ring(f.n)?;
            let rep = fiber::check_power_stabilization(&ring, &ints(&f.chi)?, power, jmax, f.dmax)?;
            Outcome::checked(&rep, rep.holds)
        }
        Command::KleinianCheck { n, dmax } => {
            let rep = fiber::verify_kleinian_presentation(&build_fiber_ring(n)?, dmax);
            Outcome::checked(&rep, rep.passed)
        }
        Command::Molien { group, dmax, format } => {
            let label: GroupType = group.parse()?;
            let dims = molien::molien_for(label, dmax)?;
            match format {
                Format::Json => Outcome::json(&MolienReport {
                    group: label,
                    order: label.order(),
                    cumulative: molien::cumulative(&dims),
                    dims,
                }),
                Format::Csv => Outcome::csv(
                    &["degree", "dimension"],
                    dims.iter().enumerate().map(|(d, x)| vec![d.to_string(), x.to_string()]).collect(),
                ),
            }
        }
        Command::PreprojDims { ty, lambda, length, buffer, molien, format } => {
            let q = quiver(&ty)?;
            let lambda = ParamVector::parse(&lambda)?;
            if !lambda.is_real() {
                return Err(Error::InvalidArgument("preproj-dims needs a real parameter".into()));
            }
            q.check_len(lambda.len())?;
            if molien {
                let rep = preproj::molien_check(&q, &lambda.re, length, buffer)?;
                let passed = rep.upper_bound_holds;
                return Ok(Outcome::checked(&rep, passed));
            }
            let table = preproj::truncated_dims(&q, &lambda.re, length, buffer)?;
            match format {
                Format::Json => Outcome::json(&table),
                Format::Csv => {
                    let mut rows = Vec::new();
                    for (i, row) in table.dims.iter().enumerate() {
                        for (j, dims) in row.iter().enumerate() {
                            for (l, d) in dims.iter().enumerate() {
                                rows.push(vec![i.to_string(), j.to_string(), l.to_string(), d.to_string()]);
                            }
                        }
                    }
                    Outcome::csv(&["source", "target", "length", "dimension"], rows)
                }
            }
        }
        Command::ZalgCheck { model, n, chi, morita_n, max_index, cap, perturb } => {
            let ring = match model {
                Model::TypeA => {
                    let (Some(n), Some(chi)) = (n, chi) else {
                        return Err(Error::InvalidArgument("model typeA needs --n and --chi".into()));
                    };
                    zalgebra::semi_invariant_ring(&build_fiber_ring(n)?, &ints(&chi)?, max_index, cap)?
                }
                Model::Polynomial => zalgebra::polynomial_ring(max_index),
            };
            let mut z = zalgebra::hat(&ring)?;
            if let Some(p) = perturb {
                let target = match p {
                    Perturbation::Scale => zalgebra::factored_entry(&z),
                    Perturbation::Delete => zalgebra::sole_preimage_entry(&z),
                };
                let (key, a, b) =
                    target.ok_or_else(|| Error::InvalidArgument("model too small for the requested perturbation".into()))?;
                match p {
                    Perturbation::Scale => z.scale_product(key, a, b, Q::from_integer(2.into())),
                    Perturbation::Delete => z.delete_product(key, a, b),
                }
            }
            let assoc = zalgebra::check_associativity(&z);
            let morita = zalgebra::morita_condition_ii(&z, morita_n, cap)?;
            let passed = assoc.associative && assoc.graded && assoc.unital && morita.surjective;
            let rep = ZalgReport {
                model: match model {
                    Model::TypeA => "typeA".into(),
                    Model::Polynomial => "polynomial".into(),
                },
                max_index,
                degree_cap: cap,
                perturbation: perturb.map(|p| format!("{p:?}").to_lowercase()),
                graded: assoc.graded,
                unital: assoc.unital,
                associative: assoc.associative,
                triples_checked: assoc.triples_checked,
                associativity_witness: assoc.witness,
                morita_n,
                morita_ii: if morita.surjective && !morita.vacuous { "surjective".into() } else { morita.status.clone() },
                vacuous: morita.vacuous,
                witnesses: morita.witnesses,
                note: format!(
                    "checked on the truncation i <= {max_index}, degree <= {cap}; injectivity of the tensor map is not decided"
                ),
            };
            Outcome::checked(&rep, passed)
        }
        Command::XiConjecture { ty, d, samples, seed } => {
            let q = quiver(&ty)?;
            let delta = q.delta()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lambdas: Vec<ParamVector> = (0..samples)
                .map(|_| {
                    let mut re: Vec<Q> = (0..q.vertex_count()).map(|_| frac(rng.gen_range(1..=6), rng.gen_range(1..=4))).collect();
                    let rest: Q = re.iter().zip(delta.iter()).skip(1).map(|(x, &k)| x * Q::from_integer(k.into())).sum();
                    re[0] = Q::one() - rest;
                    ParamVector::real(re)
                })
                .collect();
            let dominant = lambdas.iter().filter(|l| params::is_dominant(&q, l).unwrap_or(false)).count();
            let obstructed = params::dominance_obstructions(&q, &lambdas, d)?;
            Outcome::json(&ConjectureReport { samples, dominant, d, obstructed })
        }
        Command::DecomposeSum { m, n } => Outcome::json(&SumReport { m, n, parts: zalgebra::decompose_sum(m, n)? }),
    })
}

/// Runs the command line `argv` (including the program name), writing the
/// report to `out` and diagnostics to `err`.
pub fn run_with<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if outcome.passed {
                0
            } else {
                let _ = writeln!(err, "check failed");
                1
            }
        }
        Err(Error::Invariant(msg)) => {
            let _ = writeln!(err, "error: internal verification failed: {msg}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
