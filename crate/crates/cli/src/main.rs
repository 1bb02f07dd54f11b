//! Command-line front end: evaluate induced velocities on tetrahedral
//! vorticity meshes, and run the built-in accuracy, convergence, and
//! scaling studies.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use vortrace::mesh::{
    ball_mesh, load_tetgen, load_vorticity_csv, random_ball_points, sample_node_ids,
    write_velocity_csv,
};
use vortrace::quadrature::build_fan;
use vortrace::reference::{
    rms_error, GaussianRing, HillVortex, RingTableSpec, RingVelocityTable, RING_PRESETS,
};
use vortrace::solver::{eval_points_at_nodes, evaluate, EvalPoint, EvalRequest};
use vortrace::{MeshError, QuadratureError, ReferenceError, Vec3};

#[derive(Parser)]
#[command(
    name = "vortrace",
    version,
    about = "Velocity fields induced by vorticity on tetrahedral meshes, \
             via ray-traced spherical quadrature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the induced velocity at every node of a TetGen mesh.
    Eval(EvalArgs),
    /// Accuracy study against the spherical vortex with its analytic field.
    Hill(HillArgs),
    /// Mesh-convergence study against a tabulated vortex-ring reference.
    RingConvergence(RingArgs),
    /// Wall-time scaling across worker counts on a fixed problem.
    Scale(ScaleArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// TetGen .node file (vorticity may ride along as the first three
    /// attribute columns).
    #[arg(long)]
    mesh: PathBuf,
    /// TetGen .ele file; defaults to the .node path with extension "ele".
    #[arg(long)]
    ele: Option<PathBuf>,
    /// Nodal vorticity CSV (node,wx,wy,wz); overrides any attributes found
    /// in the .node file.
    #[arg(long)]
    vorticity: Option<PathBuf>,
    /// Polar order of the ray fan.
    #[arg(long, default_value_t = 16)]
    nphi: usize,
    /// Azimuthal order of the ray fan.
    #[arg(long, default_value_t = 16)]
    ntheta: usize,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Accumulate in fixed cell chunks so the output is bit-identical
    /// across worker counts.
    #[arg(long)]
    deterministic: bool,
    /// Output CSV path (node,x,y,z,vx,vy,vz).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct HillArgs {
    /// Lattice resolution of the unit-ball mesh (cells per axis).
    #[arg(long, default_value_t = 10)]
    resolution: usize,
    /// Number of random interior evaluation points.
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Seed for the evaluation-point sampler.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Square fan orders to sweep (each value n gives an n-by-n fan).
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    nquad: Vec<usize>,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Args)]
struct RingArgs {
    /// Core radius of the Gaussian ring, in units of its ring radius.
    #[arg(long, default_value_t = 0.2)]
    core: f64,
    /// Total circulation.
    #[arg(long, default_value_t = 1.0)]
    circulation: f64,
    /// Tube half-width of the meshes, in core radii.
    #[arg(long, default_value_t = 4.0)]
    half_width_sigmas: f64,
    /// Square fan orders to run; the h-slope is fitted at the largest.
    #[arg(long, value_delimiter = ',', default_value = "64")]
    nquad: Vec<usize>,
    /// Cap on evaluation nodes per mesh (fixed-seed random subsample; a
    /// regular stride would alias onto planes of the node lattice).
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    max_eval: u64,
    /// Resolution presets to run, by name.
    #[arg(long, value_delimiter = ',', default_value = "low,medium,high")]
    presets: Vec<String>,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Also dump the tabulated reference field to this CSV.
    #[arg(long)]
    table_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleArgs {
    /// Worker counts to time.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8",
          value_parser = clap::value_parser!(u64).range(1..))]
    workers: Vec<u64>,
    /// Lattice resolution of the unit-ball workload mesh.
    #[arg(long, default_value_t = 10)]
    resolution: usize,
    /// Number of evaluation points.
    #[arg(long, default_value_t = 128)]
    points: usize,
    /// Square fan order.
    #[arg(long, default_value_t = 8)]
    nquad: usize,
    /// Seed for the evaluation-point sampler.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// 2 for I/O and malformed-file failures, 3 for inputs that parse but
/// describe something invalid (bad mesh topology, out-of-range quadrature
/// order, uncovered reference query).
fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(m) = cause.downcast_ref::<MeshError>() {
            return match m {
                MeshError::Validation(_) => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<QuadratureError>().is_some()
            || cause.downcast_ref::<ReferenceError>().is_some()
        {
            return 3;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    2
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Hill(args) => cmd_hill(args),
        Command::RingConvergence(args) => cmd_ring_convergence(args),
        Command::Scale(args) => cmd_scale(args),
    }
}

fn cmd_eval(args: EvalArgs) -> anyhow::Result<()> {
    let ele = args.ele.clone().unwrap_or_else(|| args.mesh.with_extension("ele"));
    let mut mesh = load_tetgen(&args.mesh, &ele)?;
    if let Some(vort) = &args.vorticity {
        load_vorticity_csv(&mut mesh, vort)
            .with_context(|| format!("loading vorticity from {}", vort.display()))?;
    }
    let fan = build_fan(args.nphi, args.ntheta)?;
    let points = eval_points_at_nodes(&mesh);
    let (field, elapsed) = evaluate(&EvalRequest {
        mesh: &mesh,
        points: &points,
        fan: &fan,
        r_min2: None,
        workers: args.workers as usize,
        deterministic: args.deterministic,
    });
    let ids: Vec<usize> = (0..mesh.nodes.len()).map(|i| mesh.index_base + i).collect();
    write_velocity_csv(&args.out, &ids, &mesh.nodes, &field.velocities)?;
    println!(
        "points={} cells={} fan={}x{} workers={} seconds={:.3}",
        points.len(),
        mesh.tets.len(),
        args.nphi,
        args.ntheta,
        args.workers,
        elapsed.as_secs_f64()
    );
    Ok(())
}

fn cmd_hill(args: HillArgs) -> anyhow::Result<()> {
    let hill = HillVortex::new(1.0, 1.0);
    let mut mesh = ball_mesh(hill.radius, args.resolution);
    mesh.set_vorticity(|p| hill.vorticity(p));
    // Sample away from the boundary shell, where the mesh only
    // approximates the sphere.
    let pts = random_ball_points(args.points, 0.9 * hill.radius, args.seed);
    let reference: Vec<Vec3> = pts.iter().map(|&p| hill.velocity(p)).collect();
    let points: Vec<EvalPoint> = pts.iter().map(|&p| EvalPoint::free(p)).collect();

    println!("n_points,n_quad,workers,eps,seconds");
    for &n in &args.nquad {
        let fan = build_fan(n, n)?;
        let (field, elapsed) = evaluate(&EvalRequest {
            mesh: &mesh,
            points: &points,
            fan: &fan,
            r_min2: None,
            workers: args.workers as usize,
            deterministic: true,
        });
        let stats = rms_error(&field.velocities, &reference, elapsed.as_secs_f64())?;
        println!("{},{},{},{:.6},{:.3}", pts.len(), n, args.workers, stats.eps, stats.seconds);
    }
    Ok(())
}

fn cmd_ring_convergence(args: RingArgs) -> anyhow::Result<()> {
    if args.nquad.is_empty() {
        return Err(QuadratureError::InvalidOrder {
            order: 0,
            max: vortrace::quadrature::MAX_ORDER,
        }
        .into());
    }
    let ring = GaussianRing::new(1.0, args.core, args.circulation);
    let table = RingVelocityTable::build(&ring, &RingTableSpec::standard(&ring))?;
    if let Some(path) = &args.table_out {
        table
            .write_csv(path)
            .with_context(|| format!("writing reference table to {}", path.display()))?;
    }

    let presets: Vec<_> =
        RING_PRESETS.iter().filter(|p| args.presets.iter().any(|name| name == p.name)).collect();
    if presets.is_empty() {
        return Err(ReferenceError::InvalidParameter(format!(
            "no known preset among {:?}; valid names are {:?}",
            args.presets,
            RING_PRESETS.map(|p| p.name)
        ))
        .into());
    }

    let max_quad = *args.nquad.iter().max().unwrap();
    let mut fit: Vec<(f64, f64)> = Vec::new();
    println!("resolution,h,n_quad,eps");
    for preset in presets {
        let mesh = preset.tube_mesh(&ring, args.half_width_sigmas * ring.core_radius);
        let h = mesh.max_diameter();
        let sample = sample_node_ids(&mesh, args.max_eval as usize, 7);
        let points: Vec<EvalPoint> = sample.iter().map(|&i| EvalPoint::at_node(&mesh, i)).collect();
        let reference: Vec<Vec3> =
            sample.iter().map(|&i| table.velocity(mesh.nodes[i])).collect::<Result<_, _>>()?;
        for &n in &args.nquad {
            let fan = build_fan(n, n)?;
            let (field, elapsed) = evaluate(&EvalRequest {
                mesh: &mesh,
                points: &points,
                fan: &fan,
                r_min2: None,
                workers: args.workers as usize,
                deterministic: true,
            });
            let stats = rms_error(&field.velocities, &reference, elapsed.as_secs_f64())?;
            println!("{},{:.6},{},{:.6}", preset.name, h, n, stats.eps);
            if n == max_quad {
                fit.push((h.ln(), stats.eps.ln()));
            }
        }
    }
    if fit.len() >= 2 {
        println!(
            "# least-squares slope of ln(eps) vs ln(h) at n_quad={}: {:.3}",
            max_quad,
            least_squares_slope(&fit)
        );
    }
    Ok(())
}

fn cmd_scale(args: ScaleArgs) -> anyhow::Result<()> {
    let hill = HillVortex::new(1.0, 1.0);
    let mut mesh = ball_mesh(hill.radius, args.resolution);
    mesh.set_vorticity(|p| hill.vorticity(p));
    let pts = random_ball_points(args.points, 0.9 * hill.radius, args.seed);
    let points: Vec<EvalPoint> = pts.iter().map(|&p| EvalPoint::free(p)).collect();
    let fan = build_fan(args.nquad, args.nquad)?;

    let mut fit: Vec<(f64, f64)> = Vec::new();
    println!("workers,seconds");
    for &w in &args.workers {
        let (_, elapsed) = evaluate(&EvalRequest {
            mesh: &mesh,
            points: &points,
            fan: &fan,
            r_min2: None,
            workers: w as usize,
            deterministic: true,
        });
        let secs = elapsed.as_secs_f64();
        println!("{},{:.4}", w, secs);
        fit.push(((w as f64).ln(), secs.max(1e-9).ln()));
    }
    if args.workers.iter().collect::<BTreeSet<_>>().len() >= 2 {
        println!(
            "# least-squares exponent of seconds vs workers: {:.2} (ideal -1.00)",
            least_squares_slope(&fit)
        );
    }
    Ok(())
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_line() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        assert!((least_squares_slope(&pts) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
