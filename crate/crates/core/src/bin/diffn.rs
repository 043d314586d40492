use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use diffn::category::{coshift, jordan_basis, jordan_type, shift, DiffMorphism, DiffObject};
use diffn::derived::{derived_hom_dim, is_quasi_iso, minimal_model, theta_check};
use diffn::error::Error;
use diffn::exactla::{FieldSpec, Matrix};
use diffn::harness::format::{
    self, load_morphism, load_object, load_ses, morphism_to_string, resolve,
    save_object, write_file, FileKind, Header,
};
use diffn::harness::{run_verify, GenConfig, Selection};
use diffn::homotopy::{cone, hom_k, homology, les, null_homotopy_witness};

/// Exact computations with n-th differential modules.
#[derive(Parser)]
#[command(name = "diffn", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a DFN-1 file describes a valid object, morphism or sequence.
    Validate { file: PathBuf },
    /// Jordan type and a Jordan basis of an object.
    Jordan { object: PathBuf },
    /// Dimensions and representatives of H_(r).
    Homology {
        object: PathBuf,
        /// A degree in 1..n-1, or `all`.
        #[arg(long, default_value = "all")]
        r: String,
    },
    /// Whether two parallel morphisms are homotopic.
    Homotopic { mor_a: PathBuf, mor_b: PathBuf },
    /// A witness s for a null-homotopic morphism, or NONE.
    Nullhomotopy { morphism: PathBuf },
    /// Writes Cone(f), u and v.
    Cone {
        morphism: PathBuf,
        #[arg(long)]
        out: String,
    },
    /// Writes the shift (or with --inverse the coshift) of an object.
    Shift {
        object: PathBuf,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Whether a morphism is a quasi-isomorphism.
    Qiso { morphism: PathBuf },
    /// The six-term exact hexagon of a short exact sequence.
    Les {
        ses: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// dim Hom, the null-homotopic part and dim Hom_K (or dim Hom_D).
    Homdim {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        derived: bool,
    },
    /// Writes the minimal model (free summands stripped).
    Minimal {
        object: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compares Hom_K(T^i(k), X) with H_(i)(X).
    Theta {
        object: PathBuf,
        #[arg(long)]
        i: usize,
    },
    /// Runs the seeded property suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// A prime or Q.
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "max-dim", default_value_t = 12)]
        max_dim: usize,
        /// Property name or group prefix ending in `.`; repeatable.
        #[arg(long)]
        only: Vec<String>,
        /// Run a single trial index.
        #[arg(long)]
        trial: Option<u64>,
    },
}

/// Exit statuses.
const TRUE: u8 = 0;
const FALSE: u8 = 1;
const INPUT: u8 = 2;
const INTERNAL: u8 = 3;

type Out = Result<u8, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("diffn: {e}");
            if e.is_internal() { INTERNAL } else { INPUT }
        }
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code)
}

fn verdict(b: bool) -> u8 {
    if b { TRUE } else { FALSE }
}

fn print_matrix(m: &Matrix) {
    print!("{m}");
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Validate { file } => validate(&file),
        Cmd::Jordan { object } => {
            let x = load_object(&object)?;
            let jb = jordan_basis(&x)?;
            println!("jordan {}", jb.jordan_type);
            println!("basis");
            print_matrix(&jb.p);
            Ok(TRUE)
        }
        Cmd::Homology { object, r } => {
            let x = load_object(&object)?;
            let rs: Vec<usize> = if r == "all" {
                (1..x.n()).collect()
            } else {
                vec![r.parse().map_err(|_| Error::Parse(format!("bad --r `{r}`")))?]
            };
            for r in rs {
                let h = homology(&x, r)?;
                println!("H_({r}) dim={}", h.dim);
                print_matrix(&h.quot_reps);
            }
            Ok(TRUE)
        }
        Cmd::Homotopic { mor_a, mor_b } => {
            let f = load_morphism(&mor_a)?;
            let g = load_morphism(&mor_b)?;
            match null_homotopy_witness(&f.sub(&g)?)? {
                Some(w) => {
                    println!("homotopic true");
                    println!("witness");
                    print_matrix(&w.s);
                    Ok(TRUE)
                }
                None => {
                    println!("homotopic false");
                    Ok(FALSE)
                }
            }
        }
        Cmd::Nullhomotopy { morphism } => {
            let f = load_morphism(&morphism)?;
            match null_homotopy_witness(&f)? {
                Some(w) => {
                    print_matrix(&w.s);
                    Ok(TRUE)
                }
                None => {
                    println!("NONE");
                    Ok(FALSE)
                }
            }
        }
        Cmd::Cone { morphism, out } => {
            let f = load_morphism(&morphism)?;
            let tri = cone(&f)?;
            let prefix = PathBuf::from(&out);
            let name = |suffix: &str| -> Result<(PathBuf, String), Error> {
                let file = format!(
                    "{}.{suffix}.dfn",
                    prefix
                        .file_name()
                        .and_then(|s| s.to_str())
                        .ok_or_else(|| Error::Parse(format!("bad --out `{out}`")))?
                );
                Ok((prefix.with_file_name(&file), file))
            };
            let (cone_path, cone_file) = name("cone")?;
            let (y_path, y_file) = name("y")?;
            let (sx_path, sx_file) = name("sx")?;
            let (u_path, _) = name("u")?;
            let (v_path, _) = name("v")?;
            save_object(&cone_path, tri.cone())?;
            save_object(&y_path, tri.u.src())?;
            save_object(&sx_path, tri.v.dst())?;
            write_file(&u_path, &morphism_to_string(&tri.u, &y_file, &cone_file))?;
            write_file(&v_path, &morphism_to_string(&tri.v, &cone_file, &sx_file))?;
            for p in [&cone_path, &u_path, &v_path] {
                println!("wrote {}", p.display());
            }
            Ok(TRUE)
        }
        Cmd::Shift { object, inverse, out } => {
            let x = load_object(&object)?;
            let s = if inverse { coshift(&x)? } else { shift(&x)? };
            save_object(&out, &s)?;
            println!("wrote {} dim={}", out.display(), s.dim());
            Ok(TRUE)
        }
        Cmd::Qiso { morphism } => {
            let f = load_morphism(&morphism)?;
            let v = is_quasi_iso(&f)?;
            for (r, h, inv) in &v.per_r {
                println!("H_({r}) invertible={inv}");
                print_matrix(h);
            }
            println!("cone_acyclic {}", v.cone_acyclic);
            println!("qiso {}", v.is_qiso);
            Ok(verdict(v.is_qiso))
        }
        Cmd::Les { ses, r } => {
            let seq = load_ses(&ses)?;
            let w = les(&seq, r)?;
            let n = seq.a().n();
            let labels = ["H_r(A)", "H_r(B)", "H_r(C)", "H_n-r(A)", "H_n-r(B)", "H_n-r(C)"];
            println!("r={r} n-r={}", n - r);
            for k in 0..6 {
                println!("{} dim={} exact={}", labels[k], w.dims[k], w.exact[k]);
            }
            for (k, m) in w.maps.iter().enumerate() {
                println!("map {} -> {}", labels[k], labels[(k + 1) % 6]);
                print_matrix(m);
            }
            if !w.is_exact() {
                return Err(Error::Internal("hexagon is not exact".into()));
            }
            println!("exact true");
            Ok(TRUE)
        }
        Cmd::Homdim { x, y, derived } => {
            let x = load_object(&x)?;
            let y = load_object(&y)?;
            if derived {
                println!("hom_d {}", derived_hom_dim(&x, &y)?);
            } else {
                let hk = hom_k(&x, &y)?;
                println!("hom {}", hk.hom_dim);
                println!("null {}", hk.null_dim());
                println!("hom_k {}", hk.dim());
            }
            Ok(TRUE)
        }
        Cmd::Minimal { object, out } => {
            let x = load_object(&object)?;
            let mm = minimal_model(&x)?;
            save_object(&out, &mm.reduced)?;
            println!("reduced {}", jordan_type(&mm.reduced));
            println!("free_rank {}", mm.free_rank);
            println!("wrote {}", out.display());
            Ok(TRUE)
        }
        Cmd::Theta { object, i } => {
            let x = load_object(&object)?;
            let t = theta_check(&x, i)?;
            println!("hom_k {}", t.dim_hom_k);
            println!("homology {}", t.dim_h);
            println!("theta");
            print_matrix(&t.matrix);
            println!("bijective {}", t.bijective);
            if !t.bijective {
                return Err(Error::Internal("theta is not a bijection".into()));
            }
            Ok(TRUE)
        }
        Cmd::Verify { seed, trials, field, n, max_dim, only, trial } => {
            let field: FieldSpec = field.parse()?;
            let cfg = GenConfig::new(seed, field, n, max_dim, trials)?;
            let only = only.iter().flat_map(|o| o.split(',')).map(|s| s.trim().to_string()).collect();
            let report = run_verify(&cfg, &Selection { only, trial })?;
            print!("{}", report.body());
            eprint!("{}", report.timings());
            Ok(if report.has_internal_failure() {
                INTERNAL
            } else {
                verdict(report.failures() == 0)
            })
        }
    }
}

/// Errors that mean "well-formed but mathematically invalid".
fn invalid(e: &Error) -> bool {
    matches!(
        e,
        Error::NilpotencyViolated { .. }
            | Error::NotCommuting
            | Error::NotExact(_)
            | Error::FieldMismatch(..)
            | Error::DegreeMismatch(..)
            | Error::Shape(_)
    )
}

fn validate(file: &Path) -> Out {
    let text = format::read_file(file)?;
    let header = Header::parse(text.lines().find(|l| !l.trim().is_empty()).unwrap_or(""))?;
    let result = match header.kind {
        FileKind::Object => {
            let (field, n, eps) = format::parse_object_raw(&text)?;
            DiffObject::with_field(field, n, eps).map(|x| {
                format!("valid object field={} n={} dim={} jordan={}", x.field(), x.n(), x.dim(), jordan_type(&x))
            })
        }
        FileKind::Morphism => {
            let raw = format::parse_morphism_raw(&text)?;
            let src = load_object(&resolve(file, &raw.src))?;
            let dst = load_object(&resolve(file, &raw.dst))?;
            let (rows, cols) = raw.matrix.shape();
            DiffMorphism::new(&src, &dst, raw.matrix)
                .map(|f| format!("valid morphism {}x{} n={}", rows, cols, f.n()))
        }
        FileKind::Ses => load_ses(file).map(|s| {
            format!("valid ses dims={},{},{} n={}", s.a().dim(), s.b().dim(), s.c().dim(), s.a().n())
        }),
    };
    match result {
        Ok(msg) => {
            println!("{msg}");
            Ok(TRUE)
        }
        Err(e) if invalid(&e) => {
            println!("invalid: {e}");
            Ok(FALSE)
        }
        Err(e) => Err(e),
    }
}
