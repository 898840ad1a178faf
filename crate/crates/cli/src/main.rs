//! `qudit-magic`: Wigner tables, Lorenz curves, distillation bounds and
//! figure sweeps from the command line.
//!
//! Every flag can also be set in a flat `key = value` config file passed with
//! `--config`; flags win. Exit codes: 0 success, 1 i/o failure, 2 domain
//! error, 3 parse error.

mod commands;
mod config;
mod error;
mod figures;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qudit_magic::PrimeDim;

use commands::{BoundParams, Method, Reference, StateSpec};
use config::{parse_grid, parse_hamiltonian, parse_usize_list, ConfigFile, ExactValue, Resolver};
use error::CliError;
use figures::FigureId;
use output::{Format, LogBase, Sink};

#[derive(Parser, Debug)]
#[command(name = "qudit-magic", version, about = "Discrete Wigner functions, Lorenz curves and magic-distillation bounds")]
struct Cli {
    /// Flat `key = value` config file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Logarithm base for entropies and mana: e or 2
    #[arg(long, global = true)]
    log_base: Option<String>,
    /// Output directory for `lorenz` and `figure` (`-` for stdout)
    #[arg(long, global = true)]
    out_dir: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner function of a state, with sum-negativity and mana
    Wigner(WignerArgs),
    /// Lorenz-curve elbows of n copies, one file per (n, ε)
    Lorenz(LorenzArgs),
    /// A single distillation bound as JSON
    Bound(BoundArgs),
    /// Data for a figure: fig1, fig3a, fig3b, fig4, supp-entropy-contour
    Figure(FigureArgs),
}

#[derive(Args, Debug)]
struct StateArgs {
    /// strange, mixed, basis:K or file:PATH
    #[arg(long)]
    state: Option<String>,
    /// Local dimension (odd prime)
    #[arg(long)]
    d: Option<String>,
}

#[derive(Args, Debug)]
struct WignerArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Depolarizing noise ε
    #[arg(long)]
    eps: Option<String>,
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LorenzArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Noise levels: a list `0,0.1` or a grid `start:stop:step`
    #[arg(long)]
    eps: Option<String>,
    /// Copy counts, comma separated
    #[arg(long)]
    n: Option<String>,
    /// uniform or thermal
    #[arg(long)]
    reference: Option<String>,
    /// Inverse temperature of a thermal reference
    #[arg(long)]
    beta: Option<String>,
    /// Hamiltonian of a thermal reference
    #[arg(long)]
    hamiltonian: Option<String>,
}

#[derive(Args, Debug)]
struct BoundParamArgs {
    /// Input noise ε, e.g. `0.1` or `1/10`
    #[arg(long)]
    eps: Option<String>,
    /// Output noise ε' (default 0)
    #[arg(long)]
    eps_prime: Option<String>,
    /// Input copies for the numeric bound
    #[arg(long)]
    n: Option<String>,
    /// Rényi order, e.g. `10` or `10/9`
    #[arg(long)]
    alpha: Option<String>,
    /// Orders for the optimized Rényi bound, comma separated
    #[arg(long)]
    orders: Option<String>,
    /// Inverse temperature of the input (default 0)
    #[arg(long)]
    beta: Option<String>,
    /// Inverse temperature of the output (default: same as input)
    #[arg(long)]
    beta_prime: Option<String>,
    /// diag012, A0, A12-mix(p,q) or 18 reals
    #[arg(long)]
    hamiltonian: Option<String>,
    /// Output Hamiltonian (default: same as input)
    #[arg(long)]
    hamiltonian_prime: Option<String>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// unital, mana, numeric, renyi, renyi-optimized, thermal, no-processing
    method: Option<String>,
    #[command(flatten)]
    params: BoundParamArgs,
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// fig1, fig3a, fig3b, fig4 or supp-entropy-contour
    id: Option<String>,
    #[command(flatten)]
    params: BoundParamArgs,
    /// ε values: `start:stop:step` or a comma list
    #[arg(long)]
    eps_grid: Option<String>,
    /// β values (fig3a, fig3b)
    #[arg(long)]
    beta_grid: Option<String>,
    /// p values (fig4)
    #[arg(long)]
    p_grid: Option<String>,
    /// q values (fig4)
    #[arg(long)]
    q_grid: Option<String>,
    /// Rényi orders α (supp-entropy-contour)
    #[arg(long)]
    alpha_grid: Option<String>,
}

struct Ctx<'a> {
    r: Resolver<'a>,
    format: Format,
    log_base: LogBase,
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    file.check_keys()?;
    let r = Resolver::new(&file);
    let format = r.parsed::<Format>(cli.format.as_deref(), "format")?.unwrap_or(Format::Csv);
    let log_base = r.parsed::<LogBase>(cli.log_base.as_deref(), "log_base")?.unwrap_or(LogBase::E);
    let out_dir = config::out_dir(&r, cli.out_dir.as_deref());
    let ctx = Ctx { r, format, log_base, out_dir };
    match cli.command {
        Command::Wigner(a) => wigner(&ctx, a),
        Command::Lorenz(a) => lorenz(&ctx, a),
        Command::Bound(a) => bound(&ctx, a),
        Command::Figure(a) => figure(&ctx, a),
    }
}

fn prime_dim(ctx: &Ctx, flag: Option<&str>) -> Result<PrimeDim, CliError> {
    let d = ctx.r.parsed::<u32>(flag, "d")?.unwrap_or(3);
    Ok(PrimeDim::new(d)?)
}

fn exact(ctx: &Ctx, flag: Option<&str>, key: &str, default: &str) -> Result<ExactValue, CliError> {
    ExactValue::parse(&ctx.r.raw(flag, key).unwrap_or_else(|| default.to_string()))
}

fn float(ctx: &Ctx, flag: Option<&str>, key: &str, default: f64) -> Result<f64, CliError> {
    Ok(match ctx.r.raw(flag, key) {
        Some(s) => ExactValue::parse(&s)?.to_f64(),
        None => default,
    })
}

fn sink(output: Option<PathBuf>, ctx: &Ctx) -> Sink {
    output.or_else(|| ctx.r.raw(None, "output").map(PathBuf::from)).map_or(Sink::Stdout, Sink::File)
}

fn wigner(ctx: &Ctx, a: WignerArgs) -> Result<(), CliError> {
    let spec: StateSpec = ctx.r.require(a.state.state.as_deref(), "state")?.parse()?;
    let d = prime_dim(ctx, a.state.d.as_deref())?;
    let eps = exact(ctx, a.eps.as_deref(), "eps", "0")?;
    let text = commands::cmd_wigner(&spec, d, &eps, ctx.format, ctx.log_base)?;
    sink(a.output, ctx).write(&text)
}

fn lorenz(ctx: &Ctx, a: LorenzArgs) -> Result<(), CliError> {
    let spec: StateSpec = ctx.r.require(a.state.state.as_deref(), "state")?.parse()?;
    let d = prime_dim(ctx, a.state.d.as_deref())?;
    let eps_list = parse_grid(&ctx.r.raw(a.eps.as_deref(), "eps").unwrap_or_else(|| "0".into()))?;
    let ns = parse_usize_list(&ctx.r.raw(a.n.as_deref(), "n").unwrap_or_else(|| "1".into()))?;
    let reference = match ctx.r.raw(a.reference.as_deref(), "reference").as_deref().unwrap_or("uniform") {
        "uniform" => Reference::Uniform,
        "thermal" => Reference::Thermal {
            beta: float(ctx, a.beta.as_deref(), "beta", 0.0)?,
            hamiltonian: parse_hamiltonian(&ctx.r.raw(a.hamiltonian.as_deref(), "hamiltonian").unwrap_or_else(|| "diag012".into()))?,
        },
        other => return Err(CliError::Parse(format!("unknown reference {other:?} (uniform|thermal)"))),
    };
    commands::ensure_dir(&ctx.out_dir)?;
    for &n in &ns {
        for eps in &eps_list {
            let curve = commands::lorenz_curve(&spec, d, eps, n, &reference)?;
            let meta = serde_json::json!({ "n": n, "eps": eps.text });
            let text = commands::render_curve(&curve, ctx.format, meta);
            Sink::in_dir(&ctx.out_dir, &commands::lorenz_file_name(n, eps, ctx.format)).write(&text)?;
        }
    }
    Ok(())
}

fn bound_params(ctx: &Ctx, a: &BoundParamArgs, eps_default: &str) -> Result<BoundParams, CliError> {
    let beta = float(ctx, a.beta.as_deref(), "beta", 0.0)?;
    let h = ctx.r.raw(a.hamiltonian.as_deref(), "hamiltonian").unwrap_or_else(|| "diag012".into());
    let h_prime = ctx.r.raw(a.hamiltonian_prime.as_deref(), "hamiltonian_prime").unwrap_or_else(|| h.clone());
    Ok(BoundParams {
        eps: exact(ctx, a.eps.as_deref(), "eps", eps_default)?,
        eps_prime: exact(ctx, a.eps_prime.as_deref(), "eps_prime", "0")?,
        n: ctx.r.parsed::<usize>(a.n.as_deref(), "n")?.unwrap_or(10),
        order: qudit_magic::entropy::RenyiOrder::parse(&ctx.r.raw(a.alpha.as_deref(), "alpha").unwrap_or_else(|| "10".into()))?,
        orders: ctx.r.raw(a.orders.as_deref(), "orders").map(|s| commands::parse_orders(&s)).transpose()?,
        beta,
        beta_prime: float(ctx, a.beta_prime.as_deref(), "beta_prime", beta)?,
        hamiltonian: parse_hamiltonian(&h)?,
        hamiltonian_prime: parse_hamiltonian(&h_prime)?,
    })
}

fn bound(ctx: &Ctx, a: BoundArgs) -> Result<(), CliError> {
    let method: Method = ctx.r.require(a.method.as_deref(), "method")?.parse()?;
    let p = bound_params(ctx, &a.params, "0")?;
    let result = commands::cmd_bound(method, &p)?;
    sink(a.output, ctx).write(&commands::render_bound(&result))
}

fn figure(ctx: &Ctx, a: FigureArgs) -> Result<(), CliError> {
    let id: FigureId = ctx.r.require(a.id.as_deref(), "figure")?.parse()?;
    let grid = |flag: Option<&str>, key: &str| -> Result<Vec<ExactValue>, CliError> {
        parse_grid(&ctx.r.raw(flag, key).unwrap_or_else(|| id.default_grid(key).to_string()))
    };
    let (table, meta) = match id {
        FigureId::Fig1 => {
            let p = bound_params(ctx, &a.params, "0")?;
            figures::fig1(&grid(a.eps_grid.as_deref(), "eps_grid")?, &p.eps_prime, p.n)?
        }
        FigureId::Fig3a | FigureId::Fig3b => {
            let p = bound_params(ctx, &a.params, "0")?;
            let (betas, epss) = (grid(a.beta_grid.as_deref(), "beta_grid")?, grid(a.eps_grid.as_deref(), "eps_grid")?);
            if id == FigureId::Fig3a {
                figures::fig3a(&betas, &epss, &p.eps_prime, &p.hamiltonian, &p.hamiltonian_prime)?
            } else {
                figures::fig3b(&betas, &epss, &p.eps_prime, &p.hamiltonian, &p.hamiltonian_prime)?
            }
        }
        FigureId::Fig4 => {
            let h = ctx.r.raw(a.params.hamiltonian.as_deref(), "hamiltonian").unwrap_or_else(|| "A0".into());
            figures::fig4(
                &grid(a.p_grid.as_deref(), "p_grid")?,
                &grid(a.q_grid.as_deref(), "q_grid")?,
                &exact(ctx, a.params.eps.as_deref(), "eps", "0.1")?,
                &exact(ctx, a.params.eps_prime.as_deref(), "eps_prime", "0")?,
                &exact(ctx, a.params.beta.as_deref(), "beta", "0.2")?,
                &parse_hamiltonian(&h)?,
            )?
        }
        FigureId::SuppEntropyContour => {
            figures::supp_entropy_contour(&grid(a.alpha_grid.as_deref(), "alpha_grid")?, &grid(a.eps_grid.as_deref(), "eps_grid")?, ctx.log_base)?
        }
    };
    commands::ensure_dir(&ctx.out_dir)?;
    let name = format!("{}.{}", id.file_stem(), ctx.format.extension());
    Sink::in_dir(&ctx.out_dir, &name).write(&table.render(ctx.format, meta))
}
