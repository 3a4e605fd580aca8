use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nss_spin::anchors::run_anchors;
use nss_spin::diagram::{f_prime, EvalOptions};
use nss_spin::io::PresentationFile;
use nss_spin::repcat::ModuleCache;
use nss_spin::scalar::rel_dev;
use nss_spin::spin::{is_computable, solve_spin};
use nss_spin::surgery::{apply_move, invariant_n, kirby_colored, LinkPresentation, Move, NOptions};
use nss_spin::{Error, Mod2C, ScalarContext, C64};

#[derive(Parser)]
#[command(name = "nss-spin", version, about = "Non-semisimple spin invariants of surgery presentations")]
struct Cli {
    /// Level r, overriding the value in the file.
    #[arg(long, global = true)]
    r: Option<i64>,
    /// Absolute tolerance for integrality and spin tests.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Bound on the number of expanded Kirby colorings.
    #[arg(long, global = true)]
    terms_max: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print F′ of the colored link, surgery components Kirby colored.
    Eval {
        file: PathBuf,
        /// Component to open.
        #[arg(long)]
        open: Option<String>,
    },
    /// Print N with its signature, term count and computability.
    Invariant {
        file: PathBuf,
        #[arg(long)]
        open: Option<String>,
    },
    /// Solve the characteristic equation; spin values in the file are ignored.
    SpinSolve { file: PathBuf },
    /// Apply moves and write the resulting presentation.
    Kirby {
        file: PathBuf,
        /// Move, e.g. k1:K:+, k2:J:L, hopf:K:0.5,0, birth:1:0:1, orientation:L.
        #[arg(long = "move", required = true)]
        moves: Vec<String>,
        /// Output file (standard output when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Evaluate N on both sides and print the relative deviation.
        #[arg(long)]
        check: bool,
    },
    /// Run the closed-form anchor suite.
    Selftest,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotRenormalizable(_) | Error::NotComputable(_) => 2,
        Error::Resource(_) => 3,
        _ => 1,
    }
}

/// 15 significant digits.
fn num(x: f64) -> String {
    format!("{:.14e}", x)
}

fn pair(z: C64) -> String {
    format!("{} {}", num(z.re), num(z.im))
}

struct Loaded {
    file: PresentationFile,
    cache: ModuleCache,
}

impl Loaded {
    fn ctx(&self) -> &ScalarContext {
        self.cache.ctx()
    }

    fn presentation(&self, allow_missing_spin: bool) -> nss_spin::Result<LinkPresentation> {
        self.file.to_presentation(self.ctx(), allow_missing_spin)
    }
}

fn load(cli: &Cli, path: &Path) -> nss_spin::Result<Loaded> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
    let mut file = PresentationFile::parse(&text)?;
    if let Some(r) = cli.r {
        file.r = r;
    }
    let mut ctx = file.context()?;
    if let Some(t) = cli.tol {
        ctx = ctx.with_tol(t);
    }
    Ok(Loaded {
        file,
        cache: ModuleCache::new(ctx),
    })
}

fn n_options(cli: &Cli, p: &LinkPresentation, open: Option<&str>) -> nss_spin::Result<NOptions> {
    let mut o = NOptions::default();
    if let Some(t) = cli.terms_max {
        o.terms_max = t;
    }
    o.open = open.map(|id| p.index_of(id)).transpose()?;
    Ok(o)
}

fn eval(cli: &Cli, path: &Path, open: Option<&str>) -> nss_spin::Result<()> {
    let l = load(cli, path)?;
    let p = l.presentation(false)?;
    let o = n_options(cli, &p, open)?;
    let colors = kirby_colored(l.ctx(), &p, &o)?;
    let f = f_prime(&l.cache, p.diagram(), &colors, o.open, EvalOptions::default())?;
    println!("{}", pair(f));
    Ok(())
}

fn invariant(cli: &Cli, path: &Path, open: Option<&str>) -> nss_spin::Result<()> {
    let l = load(cli, path)?;
    let p = l.presentation(false)?;
    let v = p.validate(l.ctx());
    if !v.is_valid() {
        return Err(Error::InvalidPresentation(v.violations.join("; ")));
    }
    if !v.computable {
        eprintln!(
            "diagnosis: some surgery component has an integral spin value; {}",
            if v.admissible {
                "slide a physical component over it (kirby --move k2:K:L) to make it computable"
            } else {
                "the triple is not admissible, use a Hopf move on an rℤ-colored component"
            }
        );
    }
    let o = n_options(cli, &p, open)?;
    let n = invariant_n(&l.cache, &p, &o)?;
    let (bp, b0, bm) = n.signature;
    println!("N {}", pair(n.value));
    println!("F' {}", pair(n.f_prime));
    println!("signature {} {} {}", bp, b0, bm);
    println!("terms {}", n.terms);
    println!("computable {}", v.computable);
    println!("admissible {}", v.admissible);
    Ok(())
}

fn mod2(x: &Mod2C) -> String {
    pair(x.value())
}

fn spin_solve(cli: &Cli, path: &Path) -> nss_spin::Result<()> {
    let l = load(cli, path)?;
    let p = l.presentation(true)?;
    let ld = p.linking();
    let w = p.w();
    let sol = solve_spin(&ld.b, &ld.lk_lk, &w, l.ctx().tol())?;
    let row = |c: &[Mod2C]| c.iter().map(mod2).collect::<Vec<_>>().join("  ");
    println!("particular {}", row(&sol.particular));
    for (g, order) in &sol.torsion {
        println!("torsion {} {}", order, row(g));
    }
    println!("free rank {}", sol.free_rank());
    for d in &sol.free {
        println!("free {}", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    match sol.enumerate() {
        Some(all) => {
            println!("count {}", all.len());
            let colors = p.physical_colors();
            for c in all {
                let ok = is_computable(l.ctx(), &c, &colors);
                println!("solution {} computable {}", row(&c), ok);
            }
        }
        None => println!("count infinite"),
    }
    Ok(())
}

fn kirby(cli: &Cli, path: &Path, moves: &[String], output: Option<&Path>, check: bool) -> nss_spin::Result<()> {
    let l = load(cli, path)?;
    let start = l.presentation(false)?;
    let mut p = start.clone();
    for m in moves {
        let mv: Move = m.parse()?;
        p = apply_move(l.ctx(), &p, &mv)?.presentation;
    }
    let text = PresentationFile::from_presentation(l.file.r, &p)?.to_json();
    let mut report = Vec::new();
    if check {
        let before = invariant_n(&l.cache, &start, &n_options(cli, &start, None)?)?.value;
        let after = invariant_n(&l.cache, &p, &n_options(cli, &p, None)?)?.value;
        report.push(format!("before {}", pair(before)));
        report.push(format!("after {}", pair(after)));
        report.push(format!("deviation {}", num(rel_dev(before, after))));
    }
    match output {
        Some(out) => {
            fs::write(out, text + "\n").map_err(|e| Error::Io(format!("{}: {}", out.display(), e)))?;
            report.iter().for_each(|s| println!("{}", s));
        }
        None => {
            println!("{}", text);
            report.iter().for_each(|s| eprintln!("{}", s));
        }
    }
    Ok(())
}

fn selftest() -> bool {
    let mut ok = true;
    for a in run_anchors() {
        println!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
        ok &= a.passed;
    }
    ok
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.command {
        Command::Eval { file, open } => eval(&cli, file, open.as_deref()),
        Command::Invariant { file, open } => invariant(&cli, file, open.as_deref()),
        Command::SpinSolve { file } => spin_solve(&cli, file),
        Command::Kirby {
            file,
            moves,
            output,
            check,
        } => kirby(&cli, file, moves, output.as_deref(), *check),
        Command::Selftest => {
            return if selftest() { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}
