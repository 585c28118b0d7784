use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use secpath::instance::{gen_hex, gen_random, load_csv, write_points, PointSet};
use secpath::pipeline::{Instance, Params, DEFAULT_FRAME_MARGIN, DEFAULT_FRAME_PER_SIDE, DEFAULT_SHRINK};
use secpath::report::{emit_table, render_svg, Overlays, TableFormat};
use secpath::{Error, Result};
use secpath_core::RobustnessConfig;

/// Fewest new sites linking two sites of a Voronoi diagram through adjacent cells.
///
/// INPUT arguments name a point set: `hex:SIDE` for a triangular lattice,
/// `random:COUNT` for uniform points in the unit square (seeded by --seed),
/// or a path to a file of `x y` / `x,y` lines.
///
/// Every instance is enclosed by a frame of 16 points per side, set back 0.2
/// times the bounding-box diagonal; frame cells never carry a path.
#[derive(Parser, Debug)]
#[command(name = "secpath", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for random instances and the solver's perturbation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Perturbation of input coordinates, relative to the bounding-box diagonal.
    #[arg(long, global = true, default_value_t = RobustnessConfig::default().perturbation)]
    perturb: f64,
    /// Radius multiplier for inserted disks, in (0, 1].
    #[arg(long = "radius-factor", global = true, default_value_t = RobustnessConfig::default().radius_factor)]
    radius_factor: f64,
    /// Endpoints are the furthest pair inside the bounding box scaled by this factor.
    #[arg(long, global = true, default_value_t = DEFAULT_SHRINK)]
    shrink: f64,
    /// Keep every k-th point of a point file.
    #[arg(long, global = true, default_value_t = 1)]
    thin: usize,
    /// Output file (directory for `compare`); standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Table format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a side × side triangular lattice as a point file.
    GenHex { side: usize },
    /// Write COUNT uniform random points as a point file.
    GenRandom { count: usize },
    /// Run the wavefront and print the result; --out writes the chain (source, inserted points, target).
    Solve { input: String },
    /// Run the baseline and print its path; --out writes the path's points.
    Bfs { input: String },
    /// Results table for each input; with --out DIR also writes results.txt, results.csv and NAME.svg.
    Compare {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Timed runs over generated instances, in parallel.
    Bench {
        /// Lattice sides.
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 30, 60])]
        hex: Vec<usize>,
        /// Random instance sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 500, 2000, 8000])]
        sizes: Vec<usize>,
        /// Random instances per size, seeded from --seed upwards.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
    },
    /// Draw an instance as SVG (to --out or standard output).
    Render {
        input: String,
        /// Overlays to draw.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Overlay::Path, Overlay::Trace, Overlay::Baseline])]
        overlay: Vec<Overlay>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Overlay {
    Path,
    Trace,
    Baseline,
    None,
}

impl Global {
    fn params(&self) -> Params {
        let cfg = RobustnessConfig {
            perturbation: self.perturb,
            radius_factor: self.radius_factor,
            seed: self.seed,
            ..RobustnessConfig::default()
        };
        Params { shrink: self.shrink, frame_per_side: DEFAULT_FRAME_PER_SIDE, frame_margin: DEFAULT_FRAME_MARGIN, cfg }
    }

    fn table_format(&self) -> TableFormat {
        match self.format {
            Format::Text => TableFormat::Text,
            Format::Csv => TableFormat::Csv,
        }
    }

    fn point_set(&self, spec: &str) -> Result<PointSet> {
        let count = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad size in {spec:?}")));
        if let Some(side) = spec.strip_prefix("hex:") {
            gen_hex(count(side)?)
        } else if let Some(n) = spec.strip_prefix("random:") {
            gen_random(count(n)?, self.seed)
        } else {
            load_csv(Path::new(spec), self.thin)
        }
    }

    fn instance(&self, spec: &str) -> Result<Instance> {
        Instance::prepare(self.point_set(spec)?, &self.params())
    }

    /// Writes to --out, or standard output.
    fn emit(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, bytes).map_err(|source| Error::File { path: path.display().to_string(), source })?,
            None => std::io::stdout().write_all(bytes)?,
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::GenHex { side } => {
            let mut buf = Vec::new();
            write_points(&mut buf, &gen_hex(*side)?.points)?;
            g.emit(&buf)
        }
        Command::GenRandom { count } => {
            let mut buf = Vec::new();
            write_points(&mut buf, &gen_random(*count, g.seed)?.points)?;
            g.emit(&buf)
        }
        Command::Solve { input } => {
            let out = g.instance(input)?.run()?;
            let row = out.row();
            eprintln!(
                "{}: inserted points {} (baseline {}), rounds {}, disks {}, chain {}",
                row.name,
                row.alg,
                row.bfs,
                row.rounds,
                row.inserted,
                if row.valid { "valid" } else { "INVALID" }
            );
            let mut buf = Vec::new();
            write_points(&mut buf, &out.solution.path.chain())?;
            g.emit(&buf)?;
            if !row.valid {
                return Err(Error::InvalidArgument(format!("chain failed verification at link {:?}", out.report.failed_link)));
            }
            Ok(())
        }
        Command::Bfs { input } => {
            let inst = g.instance(input)?;
            let (d, r) = inst.bfs()?;
            eprintln!("{}: baseline intermediates {}", inst.name, r.intermediates());
            let pts: Vec<_> = r.path.iter().map(|&s| d.site(s).map(|rec| rec.disk.center)).collect::<std::result::Result<_, _>>()?;
            let mut buf = Vec::new();
            write_points(&mut buf, &pts)?;
            g.emit(&buf)
        }
        Command::Compare { inputs } => {
            let mut rows = Vec::new();
            let mut figures = Vec::new();
            for spec in inputs {
                let out = g.instance(spec)?.run()?;
                rows.push(out.row());
                if g.out.is_some() {
                    let svg = render_svg(&out.pristine, &Overlays::from_outcome(&out, true, true, true), &out.name);
                    figures.push((out.name.clone(), svg));
                }
            }
            match &g.out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    fs::write(dir.join("results.txt"), emit_table(&rows, TableFormat::Text, false))?;
                    fs::write(dir.join("results.csv"), emit_table(&rows, TableFormat::Csv, false))?;
                    for (name, svg) in figures {
                        fs::write(dir.join(format!("{name}.svg")), svg)?;
                    }
                    Ok(())
                }
                None => g.emit(emit_table(&rows, g.table_format(), false).as_bytes()),
            }
        }
        Command::Bench { hex, sizes, seeds } => {
            let mut sets = Vec::new();
            for &side in hex {
                sets.push(gen_hex(side)?);
            }
            for &n in sizes {
                for seed in g.seed..g.seed + seeds {
                    let mut set = gen_random(n, seed)?;
                    set.name = format!("{}_s{seed}", set.name);
                    sets.push(set);
                }
            }
            let params = g.params();
            let rows = sets
                .into_par_iter()
                .map(|set| Ok(Instance::prepare(set, &params)?.run()?.row()))
                .collect::<Result<Vec<_>>>()?;
            g.emit(emit_table(&rows, g.table_format(), true).as_bytes())
        }
        Command::Render { input, overlay } => {
            let out = g.instance(input)?.run()?;
            let has = |o: Overlay| overlay.contains(&o);
            let overlays = Overlays::from_outcome(&out, has(Overlay::Path), has(Overlay::Trace), has(Overlay::Baseline));
            g.emit(render_svg(&out.pristine, &overlays, &out.name).as_bytes())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
