//! The analyze, sweep, search, and bounds subcommands.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use minunc::linalg::{BipartiteState, ComplexMatrix, DensityMatrix, DEFAULT_RANK_TOL};
use minunc::mixedstate::{purity_bound_report, PurityBoundReport};
use minunc::models::{EprGaussian, ModelSpec};
use minunc::search::{minimize_gap, saturation_hunt, SearchProblem, SearchResult};
use minunc::uncertainty::{saturation_analysis, BoundKind, SaturationReport};

use crate::{
    emit, fmt, read_json, to_pretty_json, Constants, Ctx, Format, SearchArgs, EXIT_CLAIM_FAILED,
};

fn require_json(ctx: &Ctx, what: &str) -> Result<()> {
    if ctx.format == Some(Format::Csv) {
        bail!("{what} emits JSON only; drop --format csv");
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalyzeEnvelope {
    constants: Constants,
    tolerance: f64,
    rank_tolerance: f64,
    report: SaturationReport,
}

pub fn analyze(ctx: &Ctx, state: &Path, x: &Path, y: &Path, mode: BoundKind) -> Result<u8> {
    require_json(ctx, "analyze")?;
    let state: BipartiteState = read_json(state)?;
    let x: ComplexMatrix = read_json(x)?;
    let y: ComplexMatrix = read_json(y)?;
    let tol = ctx.tol.unwrap_or(1e-8);
    let report = saturation_analysis(&x, &y, &state, mode, tol, DEFAULT_RANK_TOL)?;

    let max_residual = report.residuals.iter().copied().fold(0.0f64, f64::max);
    println!(
        "verdict: {:?} (mode {:?}, gap {}, max annihilation residual {}, rank {})",
        report.verdict,
        report.mode,
        fmt(report.report.gap(report.mode)),
        fmt(max_residual),
        report.rank
    );

    let envelope = AnalyzeEnvelope {
        constants: ctx.constants,
        tolerance: tol,
        rank_tolerance: DEFAULT_RANK_TOL,
        report,
    };
    emit(&ctx.out, &to_pretty_json(&envelope)?)?;
    Ok(0)
}

#[derive(Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
enum RowStatus {
    Ok,
    GridTooCoarse,
}

impl RowStatus {
    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::GridTooCoarse => "grid_too_coarse",
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepRow {
    sigma: f64,
    omega: f64,
    closed_delta_x: f64,
    closed_delta_p: f64,
    closed_product: f64,
    grid_delta_x: f64,
    grid_delta_p: f64,
    grid_product: f64,
    /// closedProduct − ħ/2; zero exactly on the saturation locus.
    gap: f64,
    status: RowStatus,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepEnvelope {
    constants: Constants,
    model: &'static str,
    sigma_range: [f64; 2],
    omega_range: [f64; 2],
    steps: usize,
    grid_points: usize,
    rows: Vec<SweepRow>,
}

fn parse_range(text: &str, name: &str) -> Result<(f64, f64)> {
    let (lo, hi) = text
        .split_once(':')
        .with_context(|| format!("--{name}-range must look like lo:hi, got {text:?}"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .with_context(|| format!("bad {name} lower bound {lo:?}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .with_context(|| format!("bad {name} upper bound {hi:?}"))?;
    if !(lo > 0.0) || !(hi > 0.0) || !lo.is_finite() || !hi.is_finite() {
        bail!("{name} range must be positive, got {lo}:{hi}");
    }
    if hi < lo {
        bail!("{name} range is inverted: {lo}:{hi}");
    }
    Ok((lo, hi))
}

fn axis(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

pub fn sweep(ctx: &Ctx, sigma_range: &str, omega_range: &str, steps: usize) -> Result<u8> {
    let (s_lo, s_hi) = parse_range(sigma_range, "sigma")?;
    let (o_lo, o_hi) = parse_range(omega_range, "omega")?;
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    let h = ctx.constants.hbar;
    let n = ctx.grid_points;

    let mut rows = Vec::with_capacity(steps * steps);
    for &sigma in &axis(s_lo, s_hi, steps) {
        for &omega in &axis(o_lo, o_hi, steps) {
            let e = EprGaussian::new(sigma, omega, h)?;
            let grid = e.default_grid(n)?;
            // A failed convergence check degrades the row to the raw
            // quadrature and flags it rather than aborting the sweep.
            let (g, status) = match e.moments(&grid) {
                Ok(m) => (m.grid, RowStatus::Ok),
                Err(minunc::Error::GridTooCoarse(_)) => {
                    (e.grid_moments(&grid)?, RowStatus::GridTooCoarse)
                }
                Err(other) => return Err(other.into()),
            };
            rows.push(SweepRow {
                sigma,
                omega,
                closed_delta_x: e.delta_x_closed(),
                closed_delta_p: e.delta_p_closed(),
                closed_product: e.product_closed(),
                grid_delta_x: g.delta_x,
                grid_delta_p: g.delta_p,
                grid_product: g.product,
                gap: e.product_closed() - 0.5 * h,
                status,
            });
        }
    }

    let text = match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(ctx, (s_lo, s_hi), (o_lo, o_hi), steps, &rows),
        Format::Json => to_pretty_json(&SweepEnvelope {
            constants: ctx.constants,
            model: "epr",
            sigma_range: [s_lo, s_hi],
            omega_range: [o_lo, o_hi],
            steps,
            grid_points: n,
            rows,
        })?,
    };
    emit(&ctx.out, &text)?;
    Ok(0)
}

fn sweep_csv(
    ctx: &Ctx,
    sigma: (f64, f64),
    omega: (f64, f64),
    steps: usize,
    rows: &[SweepRow],
) -> String {
    let mut out = String::new();
    out.push_str("# model=epr\n");
    out.push_str(&format!("# hbar={}\n", fmt(ctx.constants.hbar)));
    out.push_str(&format!("# mass={}\n", fmt(ctx.constants.mass)));
    out.push_str(&format!("# omega={}\n", fmt(ctx.constants.omega)));
    out.push_str(&format!("# sigma_range={}:{}\n", fmt(sigma.0), fmt(sigma.1)));
    out.push_str(&format!("# omega_range={}:{}\n", fmt(omega.0), fmt(omega.1)));
    out.push_str(&format!("# steps={steps}\n"));
    out.push_str(&format!("# grid_points={}\n", ctx.grid_points));
    out.push_str(
        "sigma,omega,closed_delta_x,closed_delta_p,closed_product,\
         grid_delta_x,grid_delta_p,grid_product,gap,status\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            fmt(r.sigma),
            fmt(r.omega),
            fmt(r.closed_delta_x),
            fmt(r.closed_delta_p),
            fmt(r.closed_product),
            fmt(r.grid_delta_x),
            fmt(r.grid_delta_p),
            fmt(r.grid_product),
            fmt(r.gap),
            r.status.as_str()
        ));
    }
    out
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SearchEnvelope {
    constants: Constants,
    problem: SearchProblem,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    result: SearchResult,
}

pub fn search(ctx: &Ctx, args: SearchArgs) -> Result<u8> {
    require_json(ctx, "search")?;
    let mut problem = match &args.problem {
        Some(path) => read_json::<SearchProblem>(path)?,
        None => {
            let x: ComplexMatrix = read_json(args.x.as_ref().expect("clap enforces --x"))?;
            let y: ComplexMatrix = read_json(args.y.as_ref().expect("clap enforces --y"))?;
            SearchProblem::new(
                args.dim_a.expect("clap enforces --dim-a"),
                args.dim_b.expect("clap enforces --dim-b"),
                x,
                y,
                args.mode.into(),
                args.min_schmidt,
            )?
        }
    };
    if let Some(seed) = ctx.seed {
        problem.seed = seed;
    }
    if let Some(tol) = ctx.tol {
        problem.tolerance = tol;
    }
    if let Some(restarts) = args.restarts {
        problem = problem.with_restarts(restarts);
    }
    if let Some(max_iters) = args.max_iters {
        problem = problem.with_max_iters(max_iters);
    }

    let outcome = match args.rank {
        Some(s) => saturation_hunt(&problem, s),
        None => minimize_gap(&problem),
    };
    let result = match outcome {
        Ok(r) => r,
        Err(e @ minunc::Error::NoProgress(_)) => {
            eprintln!("search failed: {e}");
            return Ok(EXIT_CLAIM_FAILED);
        }
        Err(e) => return Err(e.into()),
    };

    let min_coeff = result.schmidt_profile.last().copied().unwrap_or(0.0);
    println!(
        "best gap {} after {} evaluations (converged: {}, smallest Schmidt coefficient {})",
        fmt(result.best_gap),
        result.iterations,
        result.converged,
        fmt(min_coeff)
    );
    let envelope = SearchEnvelope {
        constants: ctx.constants,
        problem,
        rank: args.rank,
        result,
    };
    emit(&ctx.out, &to_pretty_json(&envelope)?)?;
    Ok(0)
}

/// On-disk shape of a `bounds` input: a density matrix plus the model that
/// supplies its position/momentum pair.
#[derive(serde::Deserialize)]
struct RhoFile {
    model: ModelSpec,
    matrix: ComplexMatrix,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BoundsEnvelope {
    constants: Constants,
    model: ModelSpec,
    report: PurityBoundReport,
}

pub fn bounds(ctx: &Ctx, rho_path: &Path) -> Result<u8> {
    require_json(ctx, "bounds")?;
    let file: RhoFile = read_json(rho_path)?;
    match file.model {
        ModelSpec::Fock { .. } | ModelSpec::Grid { .. } => {}
        _ => bail!("bounds needs a position/momentum context: the model must be fock or grid"),
    }
    let (q, p) = file.model.observables()?;
    if file.matrix.rows() != q.rows() || !file.matrix.is_square() {
        bail!(
            "density matrix is {}x{} but the model acts on dimension {}",
            file.matrix.rows(),
            file.matrix.cols(),
            q.rows()
        );
    }
    let rho = DensityMatrix::new(file.matrix)?;
    let hbar = file.model.hbar();
    let report = purity_bound_report(&q, &p, &rho, hbar)?;

    println!(
        "{}: mu={} Phi={} dmLHS={} dmRHS={} S={} entropicRHS={}",
        if report.satisfied {
            "bounds satisfied"
        } else {
            "bounds VIOLATED"
        },
        fmt(report.mu),
        fmt(report.phi),
        fmt(report.dm_lhs),
        fmt(report.dm_rhs),
        fmt(report.entropy),
        fmt(report.entropic_rhs)
    );

    let constants = match &file.model {
        ModelSpec::Fock {
            mass, omega, hbar, ..
        } => Constants {
            hbar: *hbar,
            mass: *mass,
            omega: *omega,
        },
        _ => Constants {
            hbar,
            mass: 1.0,
            omega: 1.0,
        },
    };
    let envelope = BoundsEnvelope {
        constants,
        model: file.model,
        report,
    };
    emit(&ctx.out, &to_pretty_json(&envelope)?)?;
    Ok(if report.satisfied { 0 } else { EXIT_CLAIM_FAILED })
}
