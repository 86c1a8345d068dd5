//! `grpd`: batch front end for the groupoid-cohomology engine.
//!
//! Reads JSON model files, dispatches one computation per process, and
//! prints a deterministic JSON report (byte-identical across runs for fixed
//! inputs and seed). Exit codes: 0 ok, 2 parse error, 3 validation failure,
//! 4 cutoff insufficient, 5 internal invariant violation.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use grpd_core::bundles::{
    bundle_invariants, char_class_xi, cycle_basis, diffchar_holonomy, iso_multiplicative,
    stokes_check, validate_bundle, ConnectionFamily, DifferentialCocycle, Gauge,
    MultiplicativeBundle,
};
use grpd_core::cochain::{CoefficientSpec, TotalCochain, TotalComplex};
use grpd_core::complexes::{cohomology_window, Filtration};
use grpd_core::error::Error;
use grpd_core::io::{
    self, bundle_from_json, cochain_from_entries, format_rat, BundleJson, CochainEntryJson,
    MixedGroupJson, ModelFile,
};
use grpd_core::secondary::{
    cs_iso_check, diffchar_group, mh_group, mh_les, xi_surjection, Lattice, SecondaryContext,
    SecondaryQuery,
};
use grpd_core::{samples, Rat};

#[derive(Parser)]
#[command(
    name = "grpd",
    version,
    about = "exact cohomology of finite groupoid nerves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// model file (groupoid / space / cover / action JSON)
    #[arg(long = "in")]
    input: std::path::PathBuf,
    /// nerve truncation; cohomology is guaranteed in degrees < cutoff
    #[arg(long, default_value_t = 4)]
    cutoff: usize,
}

#[derive(Args, Clone)]
struct SeedArg {
    /// randomization seed (the GRPD_SEED environment variable overrides it)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SeedArg {
    fn get(&self) -> u64 {
        match std::env::var("GRPD_SEED") {
            Ok(v) => v.parse().unwrap_or(self.seed),
            Err(_) => self.seed,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CoeffArg {
    Z,
    Q,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum LambdaArg {
    /// the zero lattice
    #[value(name = "0")]
    Zero,
    Z,
    Q,
}

impl LambdaArg {
    fn to_lattice(self) -> Lattice {
        match self {
            LambdaArg::Zero => Lattice::Zero,
            LambdaArg::Z => Lattice::Integers,
            LambdaArg::Q => Lattice::Rationals,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FiltrationArg {
    Bete,
    Column,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a model file; never aborts, lists violations
    Validate {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Level sizes and nondegenerate block ranks of the nerve
    Nerve {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Cohomology of the total complex
    Cohomology {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "z")]
        coeff: CoeffArg,
        /// degree window `a..b` (defaults to the guaranteed window)
        #[arg(long = "degree-window")]
        degree_window: Option<String>,
        /// dump the differential matrices into the report
        #[arg(long = "dump-matrices", default_value_t = false)]
        dump_matrices: bool,
    },
    /// Differential characters of degree k-1 (cone degree k)
    Diffchar {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        k: i64,
        #[arg(long, value_enum, default_value = "z")]
        lambda: LambdaArg,
        #[arg(long, value_enum, default_value = "bete")]
        filtration: FiltrationArg,
        /// filtration index (defaults to k)
        #[arg(long)]
        r: Option<usize>,
    },
    /// Multiplicative cohomology MH^{2r}_n
    Mh {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "z")]
        lambda: LambdaArg,
        #[arg(long, value_enum, default_value = "bete")]
        filtration: FiltrationArg,
    },
    /// The surjection from differential characters onto MH with its kernel
    Xi {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "z")]
        lambda: LambdaArg,
        #[arg(long, value_enum, default_value = "bete")]
        filtration: FiltrationArg,
    },
    /// Exactness report for the long exact sequence around MH
    Les {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "bete")]
        filtration: FiltrationArg,
    },
    /// Transgression form of a seeded random connection family
    Theta {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Randomized exact checks of the transgression Stokes identity
    Stokes {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Characteristic classes of a multiplicative bundle
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        /// bundle file: {"bundle": {...}, "omega_hat": {"1": [entries]}}
        #[arg(long)]
        bundle: std::path::PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "bete")]
        filtration: FiltrationArg,
    },
    /// Decide isomorphism of two multiplicative bundles under a gauge
    Iso {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        lhs: std::path::PathBuf,
        #[arg(long)]
        rhs: std::path::PathBuf,
        /// gauge file: {"b": [entries], "lambda": [entries]}
        #[arg(long)]
        gauge: std::path::PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "bete")]
        filtration: FiltrationArg,
    },
    /// Run the structural self-check battery on built-in and random models
    CheckAll {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

fn conventions() -> Value {
    json!({
        "composition": "(g, h) composable iff t(g) = s(h)",
        "totalization": "D = delta' + (-1)^r delta''",
        "cone": "cone(f)^n = A^n (+) B^(n-1), d(a, b) = (da, f(a) - db)",
        "cup": "(-1)^(qr) Cech-Alexander-Whitney",
        "stokes": "D Theta_q = (-1)^(q+1) sum_i (-1)^i Theta_(q-1)(omit i)",
        "gauge": "(c, h) -> (c - Db, h + b + D lambda)",
    })
}

fn envelope(cutoff: Option<usize>, result: Value) -> Value {
    let mut v = json!({
        "tool": "grpd",
        "version": grpd_core::VERSION,
        "conventions": conventions(),
        "result": result,
    });
    if let Some(r) = cutoff {
        v["cutoff_guarantee"] = json!({
            "cutoff": r,
            "guaranteed_degrees": format!("0..={}", r.saturating_sub(1)),
        });
    }
    v
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::CutoffTooSmall { .. } => 4,
        Error::Internal(_) => 5,
        _ => 3,
    }
}

fn read_model(args: &ModelArgs) -> Result<ModelFile, Error> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Error::Parse(format!("{}: {e}", args.input.display())))?;
    ModelFile::parse(&text)
}

fn build_filtration(tc: &TotalComplex, f: FiltrationArg) -> Filtration {
    match f {
        FiltrationArg::Bete => Filtration::bete(&tc.complex.to_rational()),
        FiltrationArg::Column => tc.column_filtration(),
        FiltrationArg::Full => Filtration::full(&tc.complex.to_rational(), tc.double.cutoff() + 2),
    }
}

fn secondary_context(
    model: &ModelArgs,
    filtration: FiltrationArg,
) -> Result<(Arc<TotalComplex>, SecondaryContext), Error> {
    let m = read_model(model)?;
    let nerve = m.build_nerve(model.cutoff)?;
    let tc = io::total_complex_of(nerve, true)?;
    let f = build_filtration(&tc, filtration);
    let zc = Arc::new(tc.complex.to_integral()?);
    let ctx = SecondaryContext::new(zc, f)?;
    Ok((tc, ctx))
}

fn sparse_entries(tc: &TotalComplex, c: &TotalCochain) -> Vec<Value> {
    let labels = tc.basis_labels(c.degree);
    c.coords
        .iter()
        .enumerate()
        .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
        .map(|(i, v)| json!({"basis": labels[i], "value": format_rat(v)}))
        .collect()
}

#[derive(serde::Deserialize)]
struct MultiplicativeBundleJson {
    bundle: BundleJson,
    #[serde(default)]
    omega_hat: BTreeMap<String, Vec<CochainEntryJson>>,
}

fn read_multiplicative(
    path: &std::path::Path,
    tc: &TotalComplex,
    k: usize,
) -> Result<MultiplicativeBundle, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let j: MultiplicativeBundleJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let bundle = bundle_from_json(tc, &j.bundle)?;
    let report = validate_bundle(tc, &bundle);
    if !report.is_valid() {
        return Err(Error::InvalidBundle(
            report
                .violations
                .iter()
                .map(|v| v.what.clone())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let mut mb = MultiplicativeBundle::monomial(
        bundle,
        k,
        TotalCochain::zero(CoefficientSpec::rationals(), (2 * k) as i64 - 1, tc),
    );
    for (r_str, entries) in &j.omega_hat {
        let r: usize = r_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad omega_hat index '{r_str}'")))?;
        let w = cochain_from_entries(tc, (2 * r) as i64 - 1, entries)?;
        mb.omega_hat.insert(r, w);
    }
    Ok(mb)
}

fn random_family(
    tc: &TotalComplex,
    q: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Result<ConnectionFamily, Error> {
    let c = random_int_cochain(tc, 1, rng).differential(tc);
    let hs: Vec<TotalCochain> = (0..=q).map(|_| random_rat_cochain(tc, 1, rng)).collect();
    ConnectionFamily::new(tc, c, hs)
}

fn random_int_cochain(
    tc: &TotalComplex,
    deg: i64,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> TotalCochain {
    let coords = (0..tc.dim(deg))
        .map(|_| Rat::from(samples::random_int(rng, 2)))
        .collect();
    TotalCochain::from_coords(CoefficientSpec::rationals(), deg, coords)
}

fn random_rat_cochain(
    tc: &TotalComplex,
    deg: i64,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> TotalCochain {
    let coords = (0..tc.dim(deg))
        .map(|_| samples::random_rat(rng, 2, 3))
        .collect();
    TotalCochain::from_coords(CoefficientSpec::rationals(), deg, coords)
}

fn run() -> Result<Value, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { model } => {
            let m = read_model(&model)?;
            let report = match &m {
                ModelFile::Groupoid(g) => {
                    let gpd = g.build()?;
                    let r = gpd.validate();
                    json!({
                        "kind": "groupoid",
                        "valid": r.is_valid(),
                        "violations": r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    })
                }
                ModelFile::Space(s) => {
                    let space = s.build()?;
                    json!({
                        "kind": "space",
                        "valid": true,
                        "dim": space.dim(),
                        "nondegenerate": (0..=space.dim()).map(|q| space.nondegenerate(q).len()).collect::<Vec<_>>(),
                    })
                }
                ModelFile::Cover(c) => {
                    let cover = c.build()?;
                    cover.validate()?;
                    json!({"kind": "cover", "valid": true, "pieces": cover.pieces.len()})
                }
                ModelFile::Action(_) => {
                    let nerve = m.build_nerve(1)?;
                    json!({"kind": "action", "valid": true, "level_one_size": nerve.space(1).size(0)})
                }
            };
            Ok(envelope(None, report))
        }
        Command::Nerve { model } => {
            let m = read_model(&model)?;
            let nerve = m.build_nerve(model.cutoff)?;
            nerve.validate()?;
            let tc = io::total_complex_of(nerve, true)?;
            let nd = tc.double.nerve();
            let sizes: Vec<Value> = (0..=nd.cutoff())
                .map(|r| {
                    json!({
                        "r": r,
                        "sizes": (0..=nd.space_dim()).map(|q| nd.space(r).size(q)).collect::<Vec<_>>(),
                        "block_ranks": (0..=nd.space_dim()).map(|s| tc.double.block_rank(r, s)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "levels": sizes,
                    "total_dims": (0..=tc.max_deg()).map(|k| tc.dim(k)).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Cohomology {
            model,
            coeff,
            degree_window,
            dump_matrices,
        } => {
            let m = read_model(&model)?;
            let nerve = m.build_nerve(model.cutoff)?;
            let tc = io::total_complex_of(nerve, true)?;
            let window = match &degree_window {
                Some(w) => {
                    let (a, b) = w
                        .split_once("..")
                        .ok_or_else(|| Error::Parse(format!("bad degree window '{w}'")))?;
                    let lo: i64 = a.parse().map_err(|_| Error::Parse("bad window".into()))?;
                    let hi: i64 = b.parse().map_err(|_| Error::Parse("bad window".into()))?;
                    if hi >= model.cutoff as i64 {
                        return Err(Error::CutoffTooSmall {
                            cutoff: model.cutoff,
                            degree: hi,
                            needed: (hi + 1).max(0) as usize,
                        });
                    }
                    (lo, hi)
                }
                None => (0, model.cutoff as i64 - 1),
            };
            let complex = match coeff {
                CoeffArg::Z => tc.complex.to_integral()?,
                CoeffArg::Q => tc.complex.to_rational(),
            };
            let h = cohomology_window(&complex, Some(window))?;
            let groups: Vec<Value> = h
                .groups
                .iter()
                .map(|g| {
                    json!({
                        "degree": g.degree,
                        "free_rank": g.free_rank,
                        "torsion": g.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                        "guaranteed": g.guaranteed,
                    })
                })
                .collect();
            let mut result = json!({ "groups": groups });
            if dump_matrices {
                let mats: Vec<Value> = (window.0..window.1)
                    .map(|k| {
                        let d = complex.diff(k);
                        json!({
                            "degree": k,
                            "rows": d.rows(),
                            "cols": d.cols(),
                            "entries": (0..d.rows())
                                .map(|i| (0..d.cols()).map(|j| format_rat(&d[(i, j)])).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                result["matrices"] = json!(mats);
            }
            Ok(envelope(Some(model.cutoff), result))
        }
        Command::Diffchar {
            model,
            k,
            lambda,
            filtration,
            r,
        } => {
            let (_, ctx) = secondary_context(&model, filtration)?;
            let q =
                SecondaryQuery::diffchar(k, lambda.to_lattice(), r.unwrap_or(k.max(0) as usize));
            let g = diffchar_group(&ctx, &q)?;
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "group": format!("diffchar degree {} (cone degree {k})", k - 1),
                    "value": MixedGroupJson::from(&g.group),
                }),
            ))
        }
        Command::Mh {
            model,
            r,
            n,
            lambda,
            filtration,
        } => {
            let (_, ctx) = secondary_context(&model, filtration)?;
            let q = SecondaryQuery::mh(r, n, lambda.to_lattice())?;
            let g = mh_group(&ctx, &q)?;
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "group": format!("MH^{}_{n}", 2 * r),
                    "value": MixedGroupJson::from(&g.group),
                }),
            ))
        }
        Command::Xi {
            model,
            r,
            n,
            lambda,
            filtration,
        } => {
            let (_, ctx) = secondary_context(&model, filtration)?;
            let q = SecondaryQuery::mh(r, n, lambda.to_lattice())?;
            let xi = xi_surjection(&ctx, &q)?;
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "diffchar": MixedGroupJson::from(&xi.diffchar),
                    "mh": MixedGroupJson::from(&xi.mh),
                    "surjective": xi.surjective,
                    "generators_checked": xi.generators_checked,
                    "kernel": MixedGroupJson::from(&xi.kernel),
                }),
            ))
        }
        Command::Les {
            model,
            r,
            n,
            filtration,
        } => {
            let (_, ctx) = secondary_context(&model, filtration)?;
            let q = SecondaryQuery::mh(r, n, Lattice::Integers)?;
            let les = mh_les(&ctx, &q)?;
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "nodes": les
                        .nodes
                        .iter()
                        .map(|node| json!({"at": node.name, "exact": node.exact}))
                        .collect::<Vec<_>>(),
                    "all_exact": les.all_exact(),
                }),
            ))
        }
        Command::Theta { model, k, q, seed } => {
            let m = read_model(&model)?;
            let nerve = m.build_nerve(model.cutoff)?;
            let tc = io::total_complex_of(nerve, true)?;
            let mut rng = samples::rng(seed.get());
            let fam = random_family(&tc, q, &mut rng)?;
            let theta = grpd_core::bundles::theta_transgression(k, &fam, &tc)?;
            let report = stokes_check(k, &fam, &tc)?;
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "k": k, "q": q, "seed": seed.get(),
                    "theta_degree": theta.degree,
                    "theta": sparse_entries(&tc, &theta),
                    "stokes_identity": report.identity_holds,
                }),
            ))
        }
        Command::Stokes {
            model,
            k,
            q,
            trials,
            seed,
        } => {
            let m = read_model(&model)?;
            let nerve = m.build_nerve(model.cutoff)?;
            let tc = io::total_complex_of(nerve, true)?;
            let mut rng = samples::rng(seed.get());
            let mut passed = 0;
            let mut anchor_passed = 0;
            for _ in 0..trials {
                let fam = random_family(&tc, q, &mut rng)?;
                let rep = stokes_check(k, &fam, &tc)?;
                if rep.identity_holds {
                    passed += 1;
                }
                if rep.anchor_holds.unwrap_or(true) {
                    anchor_passed += 1;
                }
            }
            if passed != trials || anchor_passed != trials {
                return Err(Error::Internal(format!(
                    "stokes identity failed in {} of {trials} trials",
                    trials - passed
                )));
            }
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "k": k, "q": q, "trials": trials,
                    "passed": passed, "seed": seed.get(),
                }),
            ))
        }
        Command::Classify {
            model,
            bundle,
            k,
            filtration,
        } => {
            let (tc, ctx) = secondary_context(&model, filtration)?;
            let f = build_filtration(&tc, filtration);
            let mb = read_multiplicative(&bundle, &tc, k)?;
            let class = char_class_xi(&mb, &f, &tc)?;
            let inv = bundle_invariants(&tc, &mb.bundle)?;
            let mut result = json!({
                "k": k,
                "chern_power_coords": class.chern_power_coords.iter().map(format_rat).collect::<Vec<_>>(),
                "mh_cocycle": {
                    "lambda": sparse_entries(&tc, &TotalCochain::from_coords(
                        CoefficientSpec::rationals(), (2 * k) as i64, class.mh_cocycle.lambda.clone())),
                    "v": sparse_entries(&tc, &TotalCochain::from_coords(
                        CoefficientSpec::rationals(), (2 * k) as i64 - 1, class.mh_cocycle.v.clone())),
                },
                "bundle": {
                    "chern_coords": inv.chern_coords.iter().map(format_rat).collect::<Vec<_>>(),
                    "curvature_coords": inv.curvature_coords.iter().map(format_rat).collect::<Vec<_>>(),
                    "holonomy": inv.holonomy.iter().map(format_rat).collect::<Vec<_>>(),
                },
            });
            if k == 1 {
                let hol: Vec<String> = cycle_basis(&tc, 1)
                    .iter()
                    .map(|z| format_rat(&diffchar_holonomy(&class, z)))
                    .collect();
                result["diffchar_holonomy"] = json!(hol);
            }
            let q = SecondaryQuery::mh(k, 0, Lattice::Integers)?;
            let mh = mh_group(&ctx, &q)?;
            result["mh_group"] = serde_json::to_value(MixedGroupJson::from(&mh.group)).unwrap();
            Ok(envelope(Some(model.cutoff), result))
        }
        Command::Iso {
            model,
            lhs,
            rhs,
            gauge,
            k,
            filtration,
        } => {
            let m = read_model(&model)?;
            let nerve = m.build_nerve(model.cutoff)?;
            let tc = io::total_complex_of(nerve, true)?;
            let f = build_filtration(&tc, filtration);
            let a = read_multiplicative(&lhs, &tc, k)?;
            let b = read_multiplicative(&rhs, &tc, k)?;
            let text = std::fs::read_to_string(&gauge)
                .map_err(|e| Error::Parse(format!("{}: {e}", gauge.display())))?;
            let gj: BTreeMap<String, Vec<CochainEntryJson>> =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let empty = vec![];
            let g = Gauge {
                b: cochain_from_entries(&tc, 1, gj.get("b").unwrap_or(&empty))?,
                lambda: cochain_from_entries(&tc, 0, gj.get("lambda").unwrap_or(&empty))?,
            };
            let rep = iso_multiplicative(&a, &b, &g, &f, &tc)?;
            Ok(envelope(
                Some(model.cutoff),
                json!({
                    "isomorphic": rep.isomorphic,
                    "failing_r": rep.failing_r,
                    "witnesses": rep.witnesses.iter().map(|w| json!({
                        "r": w.r,
                        "nonzero_solution_entries": w.solution.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count(),
                    })).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::CheckAll { trials, seed } => {
            let report = check_all(trials, seed.get())?;
            Ok(envelope(None, report))
        }
    }
}

/// Structural battery: exactness of the machinery on built-in and random
/// models, all with deterministic seeds.
fn check_all(trials: usize, seed: u64) -> Result<Value, Error> {
    let mut rng = samples::rng(seed);
    let mut checks: Vec<Value> = Vec::new();
    let mut all_ok = true;
    let record = |checks: &mut Vec<Value>, name: &str, ok: bool| -> bool {
        checks.push(json!({"check": name, "ok": ok}));
        ok
    };
    // random nerves: the double-complex constructor verifies the squares
    let mut squares_ok = true;
    for _ in 0..trials {
        let n = samples::random_nerve(&mut rng, 2);
        squares_ok &= io::total_complex_of(n, true).is_ok();
    }
    all_ok &= record(
        &mut checks,
        "double_complex_squares_and_totalization",
        squares_ok,
    );
    // SNF postconditions on random matrices
    let mut snf_ok = true;
    for t in 0..trials {
        let rows = 1 + t % 4;
        let cols = 1 + (t / 2) % 4;
        let m =
            grpd_core::matrix::IntMat::from_fn(rows, cols, |_, _| samples::random_int(&mut rng, 9));
        let (d, u, v) = grpd_core::snf::smith_normal_form(&m);
        snf_ok &= u.mul(&m).mul(&v) == d;
    }
    all_ok &= record(&mut checks, "snf_postconditions", snf_ok);
    // cup Leibniz on the circle model
    let circle = samples::circle_model(3);
    let tc = io::total_complex_of(circle, true)?;
    let mut leibniz_ok = true;
    for _ in 0..trials {
        let a = random_rat_cochain(&tc, 1, &mut rng);
        let b = random_rat_cochain(&tc, 1, &mut rng);
        let lhs = tc.cup(&a, &b)?.differential(&tc);
        let rhs = tc
            .cup(&a.differential(&tc), &b)?
            .add(&tc.cup(&a, &b.differential(&tc))?.neg());
        leibniz_ok &= lhs == rhs;
    }
    all_ok &= record(&mut checks, "cup_leibniz", leibniz_ok);
    // transgression Stokes identity
    let mut stokes_ok = true;
    for t in 0..trials {
        let k = 1 + t % 2;
        let q = 1 + t % 2;
        let fam = random_family(&tc, q, &mut rng)?;
        stokes_ok &= stokes_check(k, &fam, &tc)?.identity_holds;
    }
    all_ok &= record(&mut checks, "transgression_stokes", stokes_ok);
    // characteristic cocycle on random bundles
    let bete = Filtration::bete(&tc.complex.to_rational());
    let mut xi_ok = true;
    for _ in 0..trials.min(10) {
        let c = random_int_cochain(&tc, 1, &mut rng).differential(&tc);
        let h = random_rat_cochain(&tc, 1, &mut rng);
        let bundle = DifferentialCocycle::from_c_h(&tc, c, h);
        let mb = MultiplicativeBundle::monomial(
            bundle,
            1,
            TotalCochain::zero(CoefficientSpec::rationals(), 1, &tc),
        );
        xi_ok &= char_class_xi(&mb, &bete, &tc).is_ok();
    }
    all_ok &= record(&mut checks, "characteristic_cocycle", xi_ok);
    // Cheeger-Simons isomorphism on the circle model
    let zc = Arc::new(tc.complex.to_integral()?);
    let ctx = SecondaryContext::with_bete(zc)?;
    let cs = cs_iso_check(&ctx, 1, Lattice::Integers)?;
    all_ok &= record(&mut checks, "cheeger_simons_isomorphism", cs.isomorphism);
    if !all_ok {
        return Err(Error::Internal("self-check battery failed".into()));
    }
    Ok(json!({"seed": seed, "trials": trials, "checks": checks, "all_ok": all_ok}))
}

fn main() -> ExitCode {
    match run() {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("render"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
