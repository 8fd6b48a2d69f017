//! Command-line front end. The binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 success, 1 validation failure, 2 check failure, 3 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chain_file::{self, ChainFile, DeclaredBody};
use crate::cycles::{self, Cycle, CycleKind};
use crate::kernel::Kernel;
use crate::measure::Measure;
use crate::piecewise::PiecewisePoly;
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::set_expr::{SetExpr, Span};
use crate::state_cycles::{self, StateCycle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Significant digits of the decimal trajectory column.
pub const DECIMAL_DIGITS: usize = 20;

const DEFAULT_MAX_PERIOD: usize = 8;

#[derive(Parser, Debug)]
#[command(
    name = "fa-cycles",
    version,
    about = "Exact measure cycles of piecewise polynomial and finite stochastic kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a chain file and report structural problems.
    Validate { path: String },
    /// Iterate the point dynamics exactly and emit CSV.
    Trajectory {
        path: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate cycles reachable from the canonical seeds.
    Cycles {
        path: String,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long)]
        json: bool,
    },
    /// Recurrent classes, periods and cyclic subclasses of a finite chain.
    Classes {
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the invariant suite on a chain.
    Check {
        path: String,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
    },
    /// List the bundled chains.
    Examples,
    /// Reproduce the reference results on the bundled chains.
    Reproduce,
}

enum Failure {
    Invalid(String),
    Io(String),
    Check,
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Io(_) => EXIT_IO,
            Failure::Check => EXIT_CHECK_FAILED,
        }
    }
}

type Outcome = Result<(), Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn io(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { path } => cmd_validate(&path, out),
        Command::Trajectory {
            path,
            x0,
            steps,
            out: target,
        } => cmd_trajectory(&path, &x0, steps, target, out),
        Command::Cycles {
            path,
            max_period,
            json,
        } => cmd_cycles(&path, max_period, json, out),
        Command::Classes { path, json } => cmd_classes(&path, json, out),
        Command::Check { path, max_period } => cmd_check(&path, max_period, out),
        Command::Examples => cmd_examples(out),
        Command::Reproduce => cmd_reproduce(out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Invalid(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                }
                Failure::Io(msg) => {
                    let _ = writeln!(err, "I/O error: {msg}");
                }
                Failure::Check => {}
            }
            f.code()
        }
    }
}

/// A chain file path, or `bundled:NAME` for a bundled chain.
fn load(path: &str) -> Result<ChainFile, Failure> {
    let (label, parsed) = match path.strip_prefix("bundled:") {
        Some(name) => {
            let text = chain_file::bundled(name)
                .ok_or_else(|| invalid(format!("no bundled chain named `{name}`")))?;
            (path.to_string(), ChainFile::parse(text))
        }
        None => (
            path.to_string(),
            ChainFile::load(Path::new(path)).map_err(|e| Failure::Io(format!("{path}: {e}")))?,
        ),
    };
    parsed.map_err(|e| match e.line {
        Some(line) => Failure::Invalid(format!("{label}:{line}: {}: {}", e.kind.code(), e.kind)),
        None => Failure::Invalid(format!("{label}: {}: {}", e.kind.code(), e.kind)),
    })
}

fn cmd_validate(path: &str, out: &mut dyn Write) -> Outcome {
    let file = load(path)?;
    let k = &file.kernel;
    writeln!(out, "valid: {}", file.name).map_err(io)?;
    writeln!(out, "space: {}", k.space()).map_err(io)?;
    writeln!(out, "deterministic pieces: {}", k.map().pieces().len()).map_err(io)?;
    writeln!(
        out,
        "stochastic states: {}",
        k.chain().map_or(0, |c| c.len())
    )
    .map_err(io)?;
    writeln!(out, "declared cycles: {}", file.declared_cycles.len()).map_err(io)?;
    Ok(())
}

/// `step,exact,approx` rows, step 0 being `x0`.
pub fn trajectory_csv(
    kernel: &Kernel,
    x0: &Rational,
    steps: usize,
) -> Result<String, crate::kernel::KernelError> {
    let mut csv = String::from("step,exact,approx\n");
    let mut x = x0.clone();
    if !kernel.space().contains(&x) {
        return Err(crate::kernel::KernelError::PointEscapesSpace(
            rational::to_text(&x),
        ));
    }
    for step in 0..=steps {
        if step > 0 {
            x = kernel.step_point(&x)?;
        }
        csv.push_str(&format!(
            "{step},{},{}\n",
            rational::to_text(&x),
            rational::to_decimal(&x, DECIMAL_DIGITS)
        ));
    }
    Ok(csv)
}

fn cmd_trajectory(
    path: &str,
    x0: &str,
    steps: usize,
    target: Option<PathBuf>,
    out: &mut dyn Write,
) -> Outcome {
    let file = load(path)?;
    let x0 = rational::parse_rational(x0).map_err(|e| invalid(format!("--x0: {e}")))?;
    let csv = trajectory_csv(&file.kernel, &x0, steps)
        .map_err(|e| invalid(format!("{}: {e}", e.code())))?;
    match target {
        Some(p) => {
            std::fs::write(&p, csv).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => out.write_all(csv.as_bytes()).map_err(io),
    }
}

#[derive(Serialize)]
struct DecompositionReport {
    ca: Option<Cycle>,
    pfa: Option<Cycle>,
}

#[derive(Serialize)]
struct CycleReport {
    period: usize,
    kind: CycleKind,
    coords: Vec<Measure>,
    mean: Measure,
    decomposition: Option<DecompositionReport>,
    rank: usize,
    linearly_independent: bool,
}

#[derive(Serialize)]
struct CyclesReport {
    chain: String,
    max_period: usize,
    cycles: Vec<CycleReport>,
}

fn cycles_report(file: &ChainFile, max_period: usize) -> Result<CyclesReport, Failure> {
    let k = &file.kernel;
    let found = cycles::enumerate_cycles(k, max_period).map_err(invalid)?;
    let mut reports = Vec::new();
    for c in found {
        let decomposition = match cycles::decompose_cycle(k, &c) {
            Ok(d) => Some(DecompositionReport {
                ca: d.ca,
                pfa: d.pfa,
            }),
            Err(cycles::CycleError::NotDisjointCycle { .. }) => None,
            Err(e) => return Err(invalid(e)),
        };
        reports.push(CycleReport {
            period: c.period(),
            kind: c.classify().map_err(invalid)?,
            mean: c.mean_measure(),
            decomposition,
            rank: c.rank(),
            linearly_independent: c.is_linearly_independent(),
            coords: c.coords().to_vec(),
        });
    }
    Ok(CyclesReport {
        chain: file.name.clone(),
        max_period,
        cycles: reports,
    })
}

fn show_side(c: &Option<Cycle>) -> String {
    c.as_ref()
        .map_or_else(|| "none".to_string(), |c| c.to_string())
}

fn cmd_cycles(path: &str, max_period: usize, json: bool, out: &mut dyn Write) -> Outcome {
    let file = load(path)?;
    let report = cycles_report(&file, max_period)?;
    if json {
        let text = serde_json::to_string_pretty(&report).map_err(invalid)?;
        return writeln!(out, "{text}").map_err(io);
    }
    let mut text = format!(
        "chain: {}\ncycles of period <= {}: {}\n",
        report.chain,
        max_period,
        report.cycles.len()
    );
    for (i, c) in report.cycles.iter().enumerate() {
        let coords: Vec<String> = c.coords.iter().map(ToString::to_string).collect();
        text.push_str(&format!(
            "cycle {}: period {}, {}\n",
            i + 1,
            c.period,
            c.kind
        ));
        text.push_str(&format!("  coords: ({})\n", coords.join(", ")));
        text.push_str(&format!("  mean: {}\n", c.mean));
        match &c.decomposition {
            Some(d) => text.push_str(&format!(
                "  decomposition: ca = {}, pfa = {}\n",
                show_side(&d.ca),
                show_side(&d.pfa)
            )),
            None => text.push_str("  decomposition: not disjoint\n"),
        }
        let independence = if c.linearly_independent {
            "linearly independent"
        } else {
            "linearly dependent"
        };
        text.push_str(&format!("  rank: {} ({independence})\n", c.rank));
    }
    out.write_all(text.as_bytes()).map_err(io)
}

#[derive(Serialize)]
struct ClassReport {
    states: Vec<String>,
    period: usize,
    subclasses: Vec<Vec<String>>,
    stationary: Measure,
}

fn cmd_classes(path: &str, json: bool, out: &mut dyn Write) -> Outcome {
    let file = load(path)?;
    let chain = file
        .kernel
        .chain()
        .ok_or_else(|| invalid("NotFiniteChain: the chain has no finite stochastic part"))?;
    let name = |i: &usize| rational::to_text(&chain.states()[*i]);
    let reports: Vec<ClassReport> = state_cycles::find_cyclic_classes(chain)
        .into_iter()
        .map(|c| ClassReport {
            states: c.states.iter().map(name).collect(),
            period: c.period,
            subclasses: c
                .subclasses
                .iter()
                .map(|s| s.iter().map(name).collect())
                .collect(),
            stationary: Measure::from_terms(
                chain
                    .states()
                    .iter()
                    .zip(&c.stationary)
                    .map(|(s, p)| (crate::Generator::Atom(s.clone()), p.clone())),
            ),
        })
        .collect();
    if json {
        let text = serde_json::to_string_pretty(&reports).map_err(invalid)?;
        return writeln!(out, "{text}").map_err(io);
    }
    let mut text = format!(
        "chain: {}\nrecurrent classes: {}\n",
        file.name,
        reports.len()
    );
    for (i, c) in reports.iter().enumerate() {
        let subs: Vec<String> = c
            .subclasses
            .iter()
            .map(|s| format!("{{{}}}", s.join(",")))
            .collect();
        text.push_str(&format!(
            "class {}: {{{}}} period {}\n",
            i + 1,
            c.states.join(","),
            c.period
        ));
        text.push_str(&format!("  subclasses: {}\n", subs.join(" -> ")));
        text.push_str(&format!("  stationary: {}\n", c.stationary));
    }
    out.write_all(text.as_bytes()).map_err(io)
}

fn cmd_examples(out: &mut dyn Write) -> Outcome {
    for (name, text) in chain_file::BUNDLED {
        let description = ChainFile::parse(text)
            .ok()
            .and_then(|s| s.description)
            .unwrap_or_default();
        writeln!(out, "{name}: {description}").map_err(io)?;
    }
    Ok(())
}

/// Collects named pass/fail lines.
#[derive(Default)]
pub struct CheckLog {
    lines: Vec<(String, Result<(), String>)>,
}

impl CheckLog {
    pub fn record(&mut self, name: impl Into<String>, result: Result<(), String>) {
        self.lines.push((name.into(), result));
    }

    pub fn expect(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        self.record(name, if ok { Ok(()) } else { Err(detail()) });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|(_, r)| r.is_ok())
    }

    pub fn render(&self) -> String {
        let mut text = String::new();
        for (name, r) in &self.lines {
            match r {
                Ok(()) => text.push_str(&format!("PASS {name}\n")),
                Err(why) => text.push_str(&format!("FAIL {name}: {why}\n")),
            }
        }
        let failed = self.lines.iter().filter(|(_, r)| r.is_err()).count();
        text.push_str(&format!("{} checks, {} failed\n", self.lines.len(), failed));
        text
    }
}

/// Test functions for the duality check: on each bounded span of the space
/// the given polynomial, on unbounded spans the constant 1.
fn test_functions(space: &SetExpr) -> Vec<PiecewisePoly> {
    let polys = [
        Polynomial::constant(Rational::one()),
        Polynomial::identity(),
        Polynomial::new(vec![Rational::one(), Rational::zero(), -Rational::one()]),
        Polynomial::new(vec![
            Rational::new(1.into(), 3.into()),
            Rational::from_integer((-2).into()),
            Rational::one(),
        ]),
    ];
    polys
        .iter()
        .map(|p| {
            let pieces = space
                .spans()
                .iter()
                .map(|s: &Span| {
                    let poly = if s.is_bounded() {
                        p.clone()
                    } else {
                        Polynomial::constant(Rational::one())
                    };
                    crate::piecewise::Piece::new(s.clone(), poly)
                })
                .collect();
            PiecewisePoly::new(pieces).expect("spans of a set do not overlap")
        })
        .collect()
}

/// Runs the invariant suite on `file` and records every check in `log`.
pub fn check_chain(file: &ChainFile, max_period: usize, log: &mut CheckLog) {
    let k = &file.kernel;
    for (i, d) in file.declared_cycles.iter().enumerate() {
        let name = format!("declared cycle {} (line {})", i + 1, d.line);
        match &d.body {
            DeclaredBody::Measures(coords) => match cycles::verify_cycle(k, coords) {
                Ok(ok) => log.expect(name, ok, || "not a cycle of the kernel".into()),
                Err(e) => log.record(name, Err(e.to_string())),
            },
            DeclaredBody::States(s) => match state_cycles::verify_state_cycle(k, s) {
                Ok(ok) => log.expect(name, ok, || "not a cycle of sets of states".into()),
                Err(e) => log.record(name, Err(e.to_string())),
            },
        }
    }

    let seeds = k.canonical_seeds();
    let functions = test_functions(k.space());
    let mut duality = Ok(());
    let mut isometry = Ok(());
    'seeds: for mu in &seeds {
        let image = match k.apply(mu) {
            Ok(m) => m,
            Err(e) => {
                duality = Err(format!("A({mu}): {e}"));
                break;
            }
        };
        if image.norm() != mu.norm() {
            isometry = Err(format!("norm(A({mu})) = {}", image.norm()));
        }
        for f in &functions {
            let lhs = k
                .apply_t(f)
                .and_then(|tf| tf.integrate(mu).map_err(Into::into));
            let rhs = f.integrate(&image);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(a), Ok(b)) => {
                    duality = Err(format!("seed {mu}: <Tf, mu> = {a} but <f, A mu> = {b}"));
                    break 'seeds;
                }
                (Err(e), _) => {
                    duality = Err(format!("T f: {e}"));
                    break 'seeds;
                }
                (_, Err(e)) => {
                    duality = Err(format!("<f, A mu>: {e}"));
                    break 'seeds;
                }
            }
        }
    }
    log.record("duality <Tf, mu> = <f, A mu> on canonical seeds", duality);
    log.record(
        "isometry norm(A mu) = norm(mu) on canonical seeds",
        isometry,
    );

    let found = match cycles::enumerate_cycles(k, max_period) {
        Ok(c) => c,
        Err(e) => {
            log.record("cycle enumeration", Err(e.to_string()));
            return;
        }
    };
    log.record(
        format!("cycle enumeration ({} cycles)", found.len()),
        Ok(()),
    );
    for c in &found {
        let label = format!("cycle {c}");
        check_cycle(k, c, &label, log);
    }

    match state_cycles::unique_cycle_check(k, &found) {
        Ok(Some(ok)) => log.expect(
            "unique cycle is countably additive with the invariant law as mean",
            ok,
            || "mean or classification differs".into(),
        ),
        Ok(None) => {}
        Err(e) => log.record("unique cycle check", Err(e.to_string())),
    }

    if let Some(chain) = k.chain() {
        for class in state_cycles::find_cyclic_classes(chain) {
            let d = class.period;
            let set_of =
                |idx: &[usize]| SetExpr::points(idx.iter().map(|&i| chain.states()[i].clone()));
            let mut result = Ok(());
            for r in 0..d {
                let here = set_of(&class.subclasses[r]);
                let next = set_of(&class.subclasses[(r + 1) % d]);
                match k.image_of(&here) {
                    Ok(img) if img.is_subset(&next) => {}
                    Ok(img) => result = Err(format!("image of {here} is {img}, not inside {next}")),
                    Err(e) => result = Err(e.to_string()),
                }
                let restricted = Measure::from_terms(class.subclasses[r].iter().map(|&i| {
                    (
                        crate::Generator::Atom(chain.states()[i].clone()),
                        class.stationary[i].clone(),
                    )
                }));
                match restricted
                    .normalize()
                    .map_err(|e| e.to_string())
                    .and_then(|m| {
                        k.apply_n(&m, d)
                            .map(|img| (m, img))
                            .map_err(|e| e.to_string())
                    }) {
                    Ok((m, img)) if m == img => {}
                    Ok((m, _)) => result = Err(format!("A^{d} does not fix {m}")),
                    Err(e) => result = Err(e),
                }
            }
            let states: Vec<String> = class
                .states
                .iter()
                .map(|&i| rational::to_text(&chain.states()[i]))
                .collect();
            log.record(
                format!(
                    "cyclic subclasses of class {{{}}} (period {d})",
                    states.join(",")
                ),
                result,
            );
        }
    }
}

fn check_cycle(k: &Kernel, c: &Cycle, label: &str, log: &mut CheckLog) {
    let m = c.period();
    let verified = cycles::verify_cycle(k, c.coords()).map_err(|e| e.to_string());
    log.record(
        format!("{label}: verified"),
        verified.and_then(|ok| {
            if ok {
                Ok(())
            } else {
                Err("not a cycle".into())
            }
        }),
    );

    let fixed = c
        .coords()
        .iter()
        .all(|mu| k.apply_n(mu, m).map(|x| x == *mu).unwrap_or(false));
    log.expect(
        format!("{label}: coordinates fixed by A^{m}"),
        fixed,
        || "a coordinate moves".into(),
    );

    let mean = c.mean_measure();
    let invariant = k.apply(&mean).map(|x| x == mean).unwrap_or(false);
    log.expect(
        format!("{label}: mean measure invariant"),
        invariant,
        || format!("A({mean}) differs"),
    );

    log.record(
        format!("{label}: classification homogeneity"),
        match cycles::mean_matches_classification(c) {
            Ok(true) => Ok(()),
            Ok(false) => Err("mean and cycle classification disagree".into()),
            Err(e) => Err(e.to_string()),
        },
    );
    log.expect(
        format!("{label}: linear independence"),
        c.is_linearly_independent(),
        || format!("rank {}", c.rank()),
    );

    let disjoint = c.is_pairwise_disjoint().unwrap_or(false);
    if !disjoint {
        return;
    }
    let decomposed = cycles::decompose_cycle(k, c)
        .map_err(|e| e.to_string())
        .and_then(|d| {
            if d.recombined() == c.coords() {
                Ok(())
            } else {
                Err("parts do not sum to the cycle".into())
            }
        });
    log.record(format!("{label}: decomposition round trip"), decomposed);

    if c.classify().ok() == Some(CycleKind::CountablyAdditive) {
        let round_trip = c
            .normalize()
            .map_err(|e| e.to_string())
            .and_then(|p| {
                state_cycles::state_cycle_from_measures(k, &p)
                    .map(|s| (p, s))
                    .map_err(|e| e.to_string())
            })
            .and_then(|(_, s)| {
                let back =
                    state_cycles::measures_from_state_cycle(k, &s).map_err(|e| e.to_string())?;
                let again: StateCycle =
                    state_cycles::state_cycle_from_measures(k, &back).map_err(|e| e.to_string())?;
                if again.same_as(&s) {
                    Ok(())
                } else {
                    Err(format!("sets {s} came back as {again}"))
                }
            });
        log.record(format!("{label}: state cycle correspondence"), round_trip);
    }
}

fn cmd_check(path: &str, max_period: usize, out: &mut dyn Write) -> Outcome {
    let file = load(path)?;
    let mut log = CheckLog::default();
    check_chain(&file, max_period, &mut log);
    writeln!(out, "chain: {}", file.name).map_err(io)?;
    out.write_all(log.render().as_bytes()).map_err(io)?;
    if log.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn bundled_spec(name: &str) -> ChainFile {
    ChainFile::parse(chain_file::bundled(name).expect("bundled chain exists"))
        .expect("bundled chains are valid")
}

fn cycle_of(coords: Vec<Measure>) -> Cycle {
    Cycle::from_coords_unchecked(coords)
}

/// Reference results on the bundled chains.
pub fn reproduce(log: &mut CheckLog) {
    let q = |n: i64, d: i64| rational::rat(n, d);
    let atom = |n: i64| Measure::atom(q(n, 1));
    let half = q(1, 2);

    let three = bundled_spec("three_state_swap");
    let k = &three.kernel;
    let found = cycles::enumerate_cycles(k, DEFAULT_MAX_PERIOD).unwrap_or_default();
    let expected = vec![cycle_of(vec![atom(1)]), cycle_of(vec![atom(2), atom(3)])];
    log.expect(
        "three_state_swap: cycles are [delta(1)] and [delta(2), delta(3)]",
        found == expected,
        || {
            format!(
                "found {}",
                found
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        },
    );
    let eta1 = atom(1).add(&atom(2));
    let eta2 = atom(1).add(&atom(3));
    let tilde = [eta1.scale(&half), eta2.scale(&half)];
    log.expect(
        "three_state_swap: (eta1/2, eta2/2) is a cycle",
        cycles::verify_cycle(k, &tilde).unwrap_or(false),
        || "rejected".into(),
    );
    log.expect(
        "three_state_swap: eta1 meet eta2 = delta(1)",
        eta1.meet(&eta2).ok() == Some(atom(1)),
        || format!("{:?}", eta1.meet(&eta2)),
    );
    log.expect(
        "three_state_swap: eta1, eta2 not singular",
        eta1.is_singular(&eta2).ok() == Some(false),
        || "reported singular".into(),
    );

    let germs = bundled_spec("two_interval_germs");
    let k = &germs.kernel;
    let found = cycles::enumerate_cycles(k, DEFAULT_MAX_PERIOD).unwrap_or_default();
    let germ_cycle = cycle_of(vec![
        Measure::right_limit(q(0, 1)),
        Measure::right_limit(q(1, 1)),
    ]);
    log.expect(
        "two_interval_germs: germ cycle [germ(0+), germ(1+)] found",
        found.contains(&germ_cycle),
        || "missing".into(),
    );
    log.expect(
        "two_interval_germs: germ cycle purely finitely additive",
        germ_cycle.classify().ok() == Some(CycleKind::PurelyFinitelyAdditive),
        || "wrong kind".into(),
    );
    let mean = germ_cycle.mean_measure();
    for eps in [q(1, 10), q(1, 1000)] {
        let near = SetExpr::span(Span::open(q(0, 1), eps.clone()).expect("nonempty"));
        log.expect(
            format!("two_interval_germs: mean(0, {eps}) = 1/2"),
            mean.evaluate(&near) == half,
            || format!("got {}", mean.evaluate(&near)),
        );
    }
    match trajectory_csv(k, &half, 12) {
        Ok(csv) => {
            let head: Vec<&str> = csv
                .lines()
                .skip(1)
                .take(5)
                .map(|l| l.split(',').nth(1).unwrap_or_default())
                .collect();
            log.expect(
                "two_interval_germs: trajectory from 1/2 begins 1/2, 5/4, 1/16, 257/256, 1/65536",
                head == ["1/2", "5/4", "1/16", "257/256", "1/65536"],
                || head.join(", "),
            );
        }
        Err(e) => log.record(
            "two_interval_germs: trajectory from 1/2",
            Err(e.to_string()),
        ),
    }

    let modified = bundled_spec("half_open_mixed");
    let k = &modified.kernel;
    let found = cycles::enumerate_cycles(k, DEFAULT_MAX_PERIOD).unwrap_or_default();
    let atomic = cycle_of(vec![atom(0), atom(1)]);
    log.expect(
        "half_open_mixed: [delta(0), delta(1)] found",
        found.contains(&atomic),
        || "missing".into(),
    );
    log.expect(
        "half_open_mixed: germ cycle persists",
        found.contains(&germ_cycle),
        || "missing".into(),
    );
    log.expect(
        "half_open_mixed: mean 1/2*delta(0) + 1/2*delta(1), countably additive",
        atomic.mean_measure() == atom(0).add(&atom(1)).scale(&half)
            && atomic.classify().ok() == Some(CycleKind::CountablyAdditive),
        || atomic.mean_measure().to_string(),
    );

    let f = PiecewisePoly::uniform(
        &SetExpr::span(Span::open(q(0, 1), q(1, 1)).expect("nonempty")),
        Polynomial::identity(),
    );
    match state_cycles::lemma_check(&f, &Measure::left_limit(q(1, 1))) {
        Ok(r) => log.expect(
            "f(x) = x with germ(1-): integral 1, mass of {f = 1} is 0",
            r.integral.is_one() && r.level_set_mass.is_zero() && !r.lemma_holds,
            || format!("integral {}, mass {}", r.integral, r.level_set_mass),
        ),
        Err(e) => log.record("f(x) = x with germ(1-)", Err(e.to_string())),
    }

    for (name, text) in chain_file::BUNDLED {
        let file = ChainFile::parse(text).expect("bundled chains are valid");
        let mut inner = CheckLog::default();
        check_chain(&file, DEFAULT_MAX_PERIOD, &mut inner);
        let failures: Vec<String> = inner
            .lines
            .iter()
            .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
            .collect();
        log.expect(
            format!("{name}: invariant suite"),
            failures.is_empty(),
            || failures.join("; "),
        );
    }
}

fn cmd_reproduce(out: &mut dyn Write) -> Outcome {
    let mut log = CheckLog::default();
    reproduce(&mut log);
    out.write_all(log.render().as_bytes()).map_err(io)?;
    if log.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
