use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use discrete_tc::audit::{Auditor, Verdict};
use discrete_tc::invariants::{self, InvariantResult};
use discrete_tc::io::{parse_complex, parse_map, write_certificate, write_complex, write_file, write_map, write_sequence};
use discrete_tc::random::{random_complex, random_map, rng, RandomInstanceSpec};
use discrete_tc::suite::run_property_suite;
use discrete_tc::{
    contiguous, core, same_contiguity_class, sd, sd_oracle, verify_certificate, ClassVerdict, Error, SdCertificate,
    SearchOptions, SimplicialComplex, SimplicialMap, VertexLabel,
};

#[derive(Parser)]
#[command(name = "dtc", version, about = "Contiguity distance, discrete TC and scat of simplicial complexes and maps")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// State limit for each contiguity class search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Basepoint for constant maps and inclusions (default: least vertex).
    #[arg(long, global = true)]
    basepoint: Option<VertexLabel>,
    /// Cross-check the value with the brute-force oracle.
    #[arg(long, global = true)]
    oracle: bool,
    /// Search on the given complexes without core reduction.
    #[arg(long, global = true)]
    no_reduce: bool,
    /// Write the distance certificate to this file.
    #[arg(long, global = true)]
    emit_cert: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a `.cplx` or `.smap` file.
    Validate { file: PathBuf },
    /// Categorical product of two complexes, or the n-th power of one.
    Product {
        first: PathBuf,
        second: Option<PathBuf>,
        #[arg(long)]
        power: Option<usize>,
    },
    /// Strong-collapse core.
    Core { complex: PathBuf },
    /// Decide whether two maps are contiguous.
    Contiguous { f: PathBuf, g: PathBuf },
    /// Decide whether two maps lie in one contiguity class.
    SameClass { f: PathBuf, g: PathBuf },
    /// Contiguity distance of two or more maps.
    Sd {
        #[arg(required = true, num_args = 2..)]
        maps: Vec<PathBuf>,
    },
    /// Topological complexity TC_n of a complex.
    Tc {
        complex: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Simplicial LS-category of a complex.
    Scat {
        complex: PathBuf,
        /// Compute through the two axis inclusions into the square.
        #[arg(long)]
        inclusions: bool,
    },
    /// Topological complexity of a map.
    TcMap {
        map: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Fibration status is never checked; the flag only records intent.
        #[arg(long)]
        assume_fibration: bool,
    },
    /// LS-category of a map.
    ScatMap { map: PathBuf },
    /// Higher topological complexity TC_n of a map.
    TcMapN {
        map: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Check every applicable relation between the invariants.
    Audit {
        complex: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
        /// A second map, audited in composition after `--map`.
        #[arg(long)]
        then: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Random connected complex, or a random map between two complexes.
    Gen {
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        #[arg(long, default_value_t = 0.3)]
        probability: f64,
        #[arg(long)]
        allow_disconnected: bool,
        #[arg(long, num_args = 2, value_names = ["DOMAIN", "CODOMAIN"])]
        map: Option<Vec<PathBuf>>,
    },
    /// Seeded property suites; no names runs all of them.
    Suite {
        names: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted(_) => 3,
        Error::Parse(_) | Error::Label(_) | Error::Io { .. } | Error::EmptyInput(_) => 4,
        _ => 2,
    }
}

struct Ctx {
    opts: SearchOptions,
    global: Global,
}

fn complex(p: &Path) -> Result<Arc<SimplicialComplex>, Error> {
    parse_complex(p).map(Arc::new)
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or("domain.cplx".into(), |s| s.to_string_lossy().into_owned())
}

impl Ctx {
    fn finish_cert(&self, cert: &SdCertificate, maps: &[SimplicialMap]) -> Result<(), Error> {
        if let Some(path) = &self.global.emit_cert {
            write_file(path, &write_certificate(cert))?;
            println!("certificate written to {} (verified: {})", path.display(), verify_certificate(cert, maps));
        }
        Ok(())
    }

    fn oracle(&self, maps: &[SimplicialMap], value: usize) -> Result<bool, Error> {
        if !self.global.oracle {
            return Ok(true);
        }
        let o = sd_oracle(maps, value + 1)?;
        let agrees = o == Some(value);
        match o {
            Some(v) => println!("oracle value = {v} ({})", if agrees { "agrees" } else { "MISMATCH" }),
            None => println!("oracle found no cover with at most {} pieces (MISMATCH)", value + 1),
        }
        Ok(agrees)
    }

    fn report(&self, r: &InvariantResult) -> Result<u8, Error> {
        let agrees = self.oracle(&r.maps, r.value)?;
        self.finish_cert(&r.certificate, &r.maps)?;
        println!("RESULT {} = {} (pieces={})", r.name, r.value, r.pieces);
        Ok(if agrees { 0 } else { 1 })
    }

    fn map_with_warning(&self, p: &Path) -> Result<SimplicialMap, Error> {
        let phi = parse_map(p)?;
        let s = phi.surjectivity_report();
        if s.vertex_surjective != s.simplex_surjective {
            println!(
                "warning: map is {}vertex-surjective but {}simplex-surjective",
                if s.vertex_surjective { "" } else { "not " },
                if s.simplex_surjective { "" } else { "not " }
            );
        }
        Ok(phi)
    }

    fn run(&self, cmd: &Command) -> Result<u8, Error> {
        let v0 = self.global.basepoint.as_ref();
        match cmd {
            Command::Validate { file } => {
                let text = std::fs::read_to_string(file).map_err(|source| Error::Io {
                    path: file.display().to_string(),
                    source,
                })?;
                if text.trim_start().starts_with("map ") {
                    let f = parse_map(file)?;
                    println!(
                        "map: {} vertices -> {} vertices, simplicial",
                        f.domain().vertex_count(),
                        f.codomain().vertex_count()
                    );
                } else {
                    let k = parse_complex(file)?;
                    println!(
                        "complex: {} vertices, {} facets, dimension {}, connected: {}",
                        k.vertex_count(),
                        k.facet_count(),
                        k.dimension(),
                        k.is_edge_path_connected()
                    );
                }
                println!("RESULT valid = true");
                Ok(0)
            }
            Command::Product { first, second, power } => {
                let a = complex(first)?;
                let p = match (second, power) {
                    (Some(b), None) => a.categorical_product(&parse_complex(b)?),
                    (None, Some(n)) => a.power(*n)?,
                    (None, None) => a.power(2)?,
                    (Some(_), Some(_)) => return Err(Error::InvalidArity(0)),
                };
                print!("{}", write_complex(&p));
                Ok(0)
            }
            Command::Core { complex: c } => {
                let k = complex(c)?;
                let r = core(&k);
                for (v, w) in &r.collapse_log {
                    println!("# removed {v}, dominated by {w}");
                }
                print!("{}", write_complex(&r.core));
                Ok(0)
            }
            Command::Contiguous { f, g } => {
                let c = contiguous(&parse_map(f)?, &parse_map(g)?)?;
                println!("RESULT contiguous = {c}");
                Ok(0)
            }
            Command::SameClass { f, g } => {
                let (f, g) = (parse_map(f)?, parse_map(g)?);
                match same_contiguity_class(&f, &g, &self.opts)? {
                    ClassVerdict::Equivalent(seq) => {
                        print!("{}", write_sequence(&seq));
                        println!("RESULT same-class = true (steps={})", seq.step_count());
                        Ok(0)
                    }
                    ClassVerdict::NotEquivalent { states_exhausted } => {
                        println!("class exhausted after {states_exhausted} maps");
                        println!("RESULT same-class = false");
                        Ok(0)
                    }
                    ClassVerdict::Unknown { budget } => {
                        Err(Error::BudgetExhausted(format!("class search exceeded {budget} states")))
                    }
                }
            }
            Command::Sd { maps } => {
                let maps = maps.iter().map(|p| parse_map(p)).collect::<Result<Vec<_>, _>>()?;
                let out = sd(&maps, &self.opts)?;
                let agrees = self.oracle(&maps, out.value)?;
                self.finish_cert(&out.certificate, &maps)?;
                println!("RESULT SD = {} (pieces={})", out.value, out.pieces);
                Ok(if agrees { 0 } else { 1 })
            }
            Command::Tc { complex: c, n } => self.report(&invariants::tc(&complex(c)?, *n, &self.opts)?),
            Command::Scat { complex: c, inclusions } => {
                let k = complex(c)?;
                let r = if *inclusions {
                    invariants::scat_inclusions(&k, v0, &self.opts)?
                } else {
                    invariants::scat(&k, v0, &self.opts)?
                };
                self.report(&r)
            }
            Command::TcMap { map, n, .. } => {
                let phi = self.map_with_warning(map)?;
                println!("fibration assumed, not verified");
                let r = if *n == 2 {
                    invariants::tc_map(&phi, &self.opts)?
                } else {
                    invariants::tc_map_n(&phi, *n, &self.opts)?
                };
                self.report(&r)
            }
            Command::TcMapN { map, n } => {
                let phi = self.map_with_warning(map)?;
                println!("fibration assumed, not verified");
                self.report(&invariants::tc_map_n(&phi, *n, &self.opts)?)
            }
            Command::ScatMap { map } => {
                let phi = self.map_with_warning(map)?;
                self.report(&invariants::scat_map(&phi, v0, &self.opts)?)
            }
            Command::Audit {
                complex: c,
                map,
                then,
                n_max,
            } => {
                let l = match map {
                    Some(_) => None,
                    None => Some(complex(c)?),
                };
                let phi = map.as_deref().map(|p| self.map_with_warning(p)).transpose()?;
                let psi = then.as_deref().map(parse_map).transpose()?;
                // With a map the audited complex is its domain, which must
                // match the given file.
                let l = match (&phi, l) {
                    (Some(phi), _) => {
                        if **phi.domain() != parse_complex(c)? {
                            return Err(Error::DomainMismatch);
                        }
                        phi.domain().clone()
                    }
                    (None, l) => l.expect("parsed above"),
                };
                let mut auditor = Auditor::new(self.opts);
                let r = auditor.audit(&l, phi.as_ref(), psi.as_ref(), *n_max, self.global.seed)?;
                print!("{r}");
                let (pass, fail, skip, inc) = (
                    r.count(Verdict::Pass),
                    r.count(Verdict::Fail),
                    r.count(Verdict::Skipped),
                    r.count(Verdict::Inconclusive),
                );
                println!("RESULT audit = {fail} failed (passed={pass} skipped={skip} inconclusive={inc})");
                Ok(if fail > 0 {
                    1
                } else if inc > 0 {
                    3
                } else {
                    0
                })
            }
            Command::Gen {
                vertices,
                probability,
                allow_disconnected,
                map,
            } => {
                let mut r = rng(self.global.seed);
                match map {
                    Some(files) => {
                        let (d, c) = (complex(&files[0])?, complex(&files[1])?);
                        let f = random_map(&d, &c, &mut r)?;
                        print!("{}", write_map(&f, &file_name(&files[0]), &file_name(&files[1])));
                    }
                    None => {
                        let spec = RandomInstanceSpec {
                            vertex_count: *vertices,
                            facet_probability: *probability,
                            require_connected: !allow_disconnected,
                        };
                        print!("{}", write_complex(&random_complex(&spec, &mut r)?));
                    }
                }
                Ok(0)
            }
            Command::Suite { names, trials } => {
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                let r = run_property_suite(&names, *trials, self.global.seed, &self.opts)?;
                print!("{r}");
                let failed = r.outcomes.iter().filter(|o| !o.ok()).count();
                println!("RESULT suite = {failed} failed (suites={})", r.outcomes.len());
                Ok(if r.ok() { 0 } else { 1 })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = SearchOptions::default();
    if let Some(b) = cli.global.budget {
        opts.budget.max_bfs_states = b;
    }
    opts.reduce_cores = !cli.global.no_reduce;
    let ctx = Ctx {
        opts,
        global: cli.global,
    };
    match ctx.run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
