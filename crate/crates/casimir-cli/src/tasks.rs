//! Task registry: parameter schemas, output columns and evaluators.
//!
//! Sweepable tasks write one row per sweep point. The first column is the
//! sweep variable (the task's primary variable when no sweep is given),
//! followed by the task's documented columns. All quantities are in reduced
//! units with ħ = c = k_B = 1.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use casimir_core::{lattice, media, piston, psa, regulate, scatter};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::output::{opt_cell, Cell, Table};
use crate::{acceptance, spectrum, CliError, CliResult};

pub const UNITS: &str = "reduced units, hbar = c = k_B = 1; lengths in the input length unit, temperatures as inverse lengths";

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Num,
    Int,
    Choice(&'static [&'static str]),
    Path,
}

#[derive(Debug, Clone, Copy)]
pub enum Default {
    Num(f64),
    Int(i64),
    Text(&'static str),
    /// No default; the task decides whether the parameter is needed.
    Unset,
}

#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Default,
    pub help: &'static str,
}

const fn num(name: &'static str, v: f64, help: &'static str) -> Param {
    Param { name, kind: Kind::Num, default: Default::Num(v), help }
}

const fn int(name: &'static str, v: i64, help: &'static str) -> Param {
    Param { name, kind: Kind::Int, default: Default::Int(v), help }
}

const fn choice(name: &'static str, opts: &'static [&'static str], help: &'static str) -> Param {
    Param { name, kind: Kind::Choice(opts), default: Default::Text(opts[0]), help }
}

const fn opt_num(name: &'static str, help: &'static str) -> Param {
    Param { name, kind: Kind::Num, default: Default::Unset, help }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    Path(PathBuf),
    Unset,
}

/// Resolved parameter values of one evaluation point.
#[derive(Debug, Clone)]
pub struct Params {
    values: Vec<(&'static str, Value)>,
}

impl Params {
    fn get(&self, k: &str) -> &Value {
        &self.values.iter().find(|(n, _)| *n == k).unwrap_or_else(|| panic!("parameter {k} not in schema")).1
    }

    pub fn num(&self, k: &str) -> f64 {
        match self.get(k) {
            Value::Num(v) => *v,
            other => panic!("parameter {k} is not numeric: {other:?}"),
        }
    }

    pub fn opt_num(&self, k: &str) -> Option<f64> {
        match self.get(k) {
            Value::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn require(&self, k: &str, why: &str) -> CliResult<f64> {
        self.opt_num(k).ok_or_else(|| CliError::config(format!("params.{k}: required {why}")))
    }

    pub fn int(&self, k: &str) -> i64 {
        match self.get(k) {
            Value::Int(v) => *v,
            other => panic!("parameter {k} is not an integer: {other:?}"),
        }
    }

    pub fn count(&self, k: &str) -> CliResult<usize> {
        usize::try_from(self.int(k)).map_err(|_| CliError::config(format!("params.{k}: must be non-negative")))
    }

    pub fn text(&self, k: &str) -> &str {
        match self.get(k) {
            Value::Text(v) => v,
            other => panic!("parameter {k} is not a string: {other:?}"),
        }
    }

    pub fn path(&self, k: &str) -> Option<&PathBuf> {
        match self.get(k) {
            Value::Path(p) => Some(p),
            _ => None,
        }
    }

    fn set_num(&mut self, k: &str, v: f64) {
        if let Some(slot) = self.values.iter_mut().find(|(n, _)| *n == k) {
            slot.1 = Value::Num(v);
        }
    }
}

/// Everything a task needs to evaluate.
pub struct Ctx<'a> {
    pub task: &'static Task,
    pub base: Params,
    pub sweep: Option<(&'static str, Vec<f64>)>,
    /// `--seed`, else the config seed, else 0.
    pub seed: u64,
    pub explicit_seed: Option<u64>,
    pub config: &'a RunConfig,
}

impl Ctx<'_> {
    fn variable(&self) -> &'static str {
        self.sweep.as_ref().map(|s| s.0).unwrap_or(self.task.primary)
    }

    /// Evaluation points as (independent value, parameters).
    pub fn points(&self) -> Vec<(f64, Params)> {
        match &self.sweep {
            None => vec![(self.base.opt_num(self.task.primary).unwrap_or(f64::NAN), self.base.clone())],
            Some((var, xs)) => xs
                .iter()
                .map(|&x| {
                    let mut p = self.base.clone();
                    p.set_num(var, x);
                    (x, p)
                })
                .collect(),
        }
    }

    /// Builds the standard table from a per-point evaluator.
    pub fn table<F: FnMut(&Params) -> CliResult<Vec<Cell>>>(&self, mut row: F) -> CliResult<Table> {
        let mut columns = vec![self.variable().to_string()];
        columns.extend(self.task.columns.iter().map(|c| c.to_string()));
        let mut rows = Vec::new();
        for (x, p) in self.points() {
            let mut r = vec![Cell::Num(x)];
            r.extend(row(&p)?);
            debug_assert_eq!(r.len(), columns.len());
            rows.push(r);
        }
        Ok(Table { task: self.task.name.to_string(), units: UNITS.to_string(), columns, rows, summary: Vec::new() })
    }
}

pub struct Task {
    pub name: &'static str,
    pub help: &'static str,
    pub params: &'static [Param],
    /// Independent variable when no sweep is configured; empty for
    /// tasks that do not accept sweeps.
    pub primary: &'static str,
    pub columns: &'static [&'static str],
    pub run: fn(&Ctx) -> CliResult<Table>,
}

impl Task {
    pub fn sweepable(&self) -> bool {
        !self.primary.is_empty()
    }

    fn param(&self, k: &str) -> Option<&'static Param> {
        self.params.iter().find(|p| p.name == k)
    }
}

// ---------------------------------------------------------------------------
// Schemas

const MEDIA: &[&str] = &["nematic", "reaction_diffusion", "two_field", "generalized_p"];
const NOISE: &[&str] = &["white", "temporal", "quenched", "spatial"];
const SPHERE_MATERIAL: &[&str] = &["perfect", "plasma", "drude"];
const REGIME: &[&str] = &["quantum", "classical"];
const BC: &[&str] = &["dirichlet", "neumann", "perfect_metal"];

const SPHERE_PARAMS: &[Param] = &[
    choice("material", SPHERE_MATERIAL, "sphere response model"),
    num("radius", 1.0, "sphere radius R"),
    num("separation", 10.0, "centre-to-centre distance d (R << d)"),
    num("lambda_p", 1.0, "plasma wavelength (plasma, drude)"),
    num("sigma", 1.0, "conductivity (drude)"),
    num("z", 1.0, "d/lambda_T = 2 pi d T"),
];

const SIM_PARAMS: [Param; 5] = [
    num("dt", 0.01, "time step"),
    int("burn_in", 2000, "discarded steps"),
    int("samples", 100_000, "recorded samples per realization"),
    int("stride", 10, "steps between samples"),
    int("realizations", 1, "independent trajectories"),
];

const LATTICE_MODES_PARAMS: &[Param] = &[
    num("mu", 1.0, "relaxation rate of mode 0; mode n has mu (n+1)^2"),
    int("count", 1, "number of modes"),
    num("gamma", 1.0, "noise intensity"),
    choice("kernel", &["white", "exponential"], "temporal noise correlation"),
    num("a", 1.0, "inverse correlation time (exponential)"),
    SIM_PARAMS[0],
    SIM_PARAMS[1],
    SIM_PARAMS[2],
    SIM_PARAMS[3],
    SIM_PARAMS[4],
];

const LATTICE_KERNEL_PARAMS: &[Param] = &[
    num("mu", 1.0, "mode relaxation rate"),
    num("gamma", 1.0, "noise intensity"),
    num("c2", 1.0, "coefficient of the second time derivative"),
    SIM_PARAMS[0],
    SIM_PARAMS[1],
    SIM_PARAMS[2],
    SIM_PARAMS[3],
    SIM_PARAMS[4],
];

const ATOM_PARAMS: &[Param] = &[
    num("l", 1.0, "atom-atom distance L"),
    num("h", 0.5, "height of both atoms above the wall H"),
    num("alpha1_z", 1.0, "atom 1 electric polarizability normal to the wall"),
    num("alpha1_par", 1.0, "atom 1 electric polarizability parallel to the wall"),
    num("beta1_z", 0.0, "atom 1 magnetic polarizability normal to the wall"),
    num("beta1_par", 0.0, "atom 1 magnetic polarizability parallel to the wall"),
    num("alpha2_z", 1.0, "atom 2 electric polarizability normal to the wall"),
    num("alpha2_par", 1.0, "atom 2 electric polarizability parallel to the wall"),
    num("beta2_z", 0.0, "atom 2 magnetic polarizability normal to the wall"),
    num("beta2_par", 0.0, "atom 2 magnetic polarizability parallel to the wall"),
];

const TI_PARAMS: &[Param] = &[
    num("w", 0.45, "resonance strength"),
    num("theta1", 1.0, "magnetoelectric angle of body 1, in units of pi"),
    num("theta2", -1.0, "magnetoelectric angle of body 2, in units of pi"),
    num("eps0", 1.0, "background permittivity"),
    num("omega_r", 1.0, "resonance frequency"),
    choice("regime", REGIME, "zero-temperature or classical limit"),
];

const TI_GAMMA_PARAMS: &[Param] = &[
    num("x", 1.0, "omega_r R"),
    num("w", 0.45, "resonance strength"),
    num("theta1", 1.0, "magnetoelectric angle of body 1, in units of pi"),
    num("theta2", -1.0, "magnetoelectric angle of body 2, in units of pi"),
    num("eps0", 1.0, "background permittivity"),
    num("omega_r", 1.0, "resonance frequency"),
];

const CYL_PARAMS: &[Param] = &[
    num("radius", 0.01, "cylinder radius R (R << d)"),
    num("separation", 1.0, "axis-to-axis distance d"),
    num("tilt", FRAC_PI_2, "angle gamma between the axes, in [0, pi/2]"),
    num("azimuth", 0.0, "direction of the separation vector"),
    choice("bc", BC, "boundary condition"),
    choice("limit", REGIME, "zero-temperature or classical limit"),
    num("temperature", 1.0, "temperature (classical)"),
];

const CYL_PFA_PARAMS: &[Param] = &[
    num("radius", 1.0, "cylinder radius R"),
    num("gap", 0.01, "surface gap l"),
    num("tilt", FRAC_PI_2, "angle gamma between the axes"),
    choice("limit", REGIME, "zero-temperature or classical limit"),
    num("temperature", 1.0, "temperature (classical)"),
];

const REGISTRY: &[Task] = &[
    Task {
        name: "zeta_1d",
        help: "one-dimensional Epstein zeta sum over (alpha^2 n^2 + omega^2)^-s by Chowla-Selberg resummation",
        params: &[num("s", 1.0, "exponent"), num("alpha", PI, "lattice spacing pi/L"), num("omega", 1.0, "mass term")],
        primary: "omega",
        columns: &["leading", "bessel_sum", "total"],
        run: run_zeta,
    },
    Task {
        name: "media_force",
        help: "force per unit area between plates in a fluctuating medium (positive is attraction)",
        params: &[
            choice("medium", MEDIA, "medium model"),
            choice("noise", NOISE, "noise correlation"),
            num("l", 1.0, "plate gap L"),
            num("gamma", 1.0, "noise intensity"),
            num("lambda", 1.0, "transport coefficient (nematic, reaction_diffusion)"),
            num("d", 1.0, "diffusion coefficient"),
            num("kappa1", 1.0, "mass coefficient"),
            num("kappa2", 1.0, "gradient coefficient"),
            num("a", 1.0, "inverse noise correlation time (temporal)"),
            int("p", 1, "temporal order (generalized_p)"),
            num("c_p", 1.0, "temporal coefficient (generalized_p)"),
            num("lambda1", 1.0, "two_field rate 1"),
            num("lambda2", 2.0, "two_field rate 2"),
            num("lambda12", 0.5, "two_field coupling"),
            num("kappa", 1.0, "two_field stress coefficient"),
        ],
        primary: "l",
        columns: &["force", "k0_l"],
        run: run_media,
    },
    Task {
        name: "piston_force",
        help: "Casimir force on an electromagnetic piston, its zero-temperature asymptotes and its variance",
        params: &[
            choice("section", &["circular", "spectrum"], "cross-section: disc or imported spectrum"),
            num("radius", 1.0, "disc radius R (circular)"),
            int("modes", 1000, "retained transverse modes (circular)"),
            Param { name: "spectrum", kind: Kind::Path, default: Default::Unset, help: "spectrum file (section = spectrum)" },
            opt_num("area", "section area (section = spectrum)"),
            opt_num("perimeter", "section perimeter (section = spectrum)"),
            opt_num("chi", "corner/curvature constant chi (section = spectrum)"),
            num("l", 1.0, "piston distance L"),
            num("temperature", 0.0, "temperature T"),
        ],
        primary: "l",
        columns: &["force", "variance", "force_near", "force_far"],
        run: run_piston,
    },
    Task {
        name: "lattice_modes",
        help: "stochastic simulation of relaxational modes; equal-time correlators with batch-means errors (seeded)",
        params: LATTICE_MODES_PARAMS,
        primary: "",
        columns: &["mode_n", "mode_m", "re", "im", "stderr", "predicted_re", "predicted_im"],
        run: run_lattice_modes,
    },
    Task {
        name: "lattice_kernel",
        help: "stochastic simulation of a mode with a second-order temporal kernel (seeded)",
        params: LATTICE_KERNEL_PARAMS,
        primary: "mu",
        columns: &["variance", "stderr", "predicted"],
        run: run_lattice_kernel,
    },
    Task {
        name: "psa_kernel",
        help: "finite-temperature pair kernel of the diluted approximation in units of 1/((4 pi)^3 R^7)",
        params: &[num("lambda", 0.1, "R T, distance over thermal wavelength")],
        primary: "lambda",
        columns: &["ee", "hh", "eh", "he"],
        run: run_psa_kernel,
    },
    Task {
        name: "psa_energy",
        help: "diluted-limit energy of two dielectric spheres",
        params: &[
            num("radius1", 1.0, "sphere 1 radius"),
            num("radius2", 1.0, "sphere 2 radius"),
            num("distance", 3.0, "centre-to-centre distance"),
            num("eps1", 0.1, "sphere 1 susceptibility eps - 1"),
            num("eps2", 0.1, "sphere 2 susceptibility eps - 1"),
            choice("regime", REGIME, "quantum (any T) or classical"),
            num("temperature", 0.0, "temperature"),
        ],
        primary: "distance",
        columns: &["energy"],
        run: run_psa_energy,
    },
    Task {
        name: "ti_phase",
        help: "phase of a pair of topological-insulator bodies: attract_all, repel_all or stable_equilibrium",
        params: TI_PARAMS,
        primary: "w",
        columns: &["class", "x_zero", "x_eq"],
        run: run_ti_phase,
    },
    Task {
        name: "ti_gamma0",
        help: "zero-temperature coefficient of the topological-insulator pair energy and the f1, f2 profiles",
        params: TI_GAMMA_PARAMS,
        primary: "x",
        columns: &["gamma0", "f1", "f2"],
        run: run_ti_gamma0,
    },
    Task {
        name: "spheres_energy",
        help: "free energy of two spheres at large separation",
        params: SPHERE_PARAMS,
        primary: "z",
        columns: &["temperature", "energy", "energy_ratio"],
        run: run_spheres_energy,
    },
    Task {
        name: "spheres_entropy",
        help: "entropy of two spheres at large separation; zeros of the entropy (in z) go to the summary",
        params: SPHERE_PARAMS,
        primary: "z",
        columns: &["temperature", "entropy"],
        run: run_spheres_entropy,
    },
    Task {
        name: "spheres_force",
        help: "force between two spheres at large separation (negative is attraction)",
        params: SPHERE_PARAMS,
        primary: "z",
        columns: &["temperature", "force"],
        run: run_spheres_force,
    },
    Task {
        name: "atoms_wall",
        help: "two atoms at equal height above a perfectly conducting wall: two- and three-body energies",
        params: ATOM_PARAMS,
        primary: "l",
        columns: &["total", "two_body_direct", "two_body_image", "three_body", "three_body_large_h", "casimir_polder"],
        run: run_atoms,
    },
    Task {
        name: "wall_coefficients",
        help: "force coefficients f6, f7, f8 of two spheres near a wall, h = H/L; the f6 extremum goes to the summary",
        params: &[
            num("h", 0.5, "height over sphere distance H/L"),
            num("radius", 0.1, "sphere radius"),
            num("l", 1.0, "sphere distance L"),
        ],
        primary: "h",
        columns: &["f6", "f7", "f8", "force"],
        run: run_wall,
    },
    Task {
        name: "cylinders",
        help: "asymptotic energy and force of two tilted cylinders (energy_source: direct or force_integrated)",
        params: CYL_PARAMS,
        primary: "separation",
        columns: &["energy", "force", "energy_source"],
        run: run_cylinders,
    },
    Task {
        name: "omega",
        help: "electromagnetic-to-Dirichlet ratio Omega(gamma) of tilted cylinders; cosine coefficients in the summary",
        params: &[num("tilt", FRAC_PI_2, "angle gamma"), int("fourier", 4, "number of cosine coefficients to report")],
        primary: "tilt",
        columns: &["omega"],
        run: run_omega,
    },
    Task {
        name: "cylinders_pfa",
        help: "proximity-force energy of tilted cylinders: closed form, exact local-gap integral and their ratio",
        params: CYL_PFA_PARAMS,
        primary: "gap",
        columns: &["pfa", "pfa_exact", "ratio"],
        run: run_cyl_pfa,
    },
    Task {
        name: "acceptance",
        help: "runs the acceptance suite and prints a PASS/FAIL table; exit status 1 if the failing set differs from the documented one",
        params: &[],
        primary: "",
        columns: &["id", "status", "seconds", "budget_seconds", "title", "detail"],
        run: run_acceptance,
    },
];

pub fn registry() -> &'static [Task] {
    REGISTRY
}

pub fn find(name: &str) -> CliResult<&'static Task> {
    REGISTRY.iter().find(|t| t.name == name).ok_or_else(|| {
        let names: Vec<_> = REGISTRY.iter().map(|t| t.name).collect();
        CliError::config(format!("unknown task `{name}`; expected one of: {}", names.join(", ")))
    })
}

/// Task list for `--help`.
pub fn help_text() -> String {
    let mut s = String::from("Tasks (parameters go in the [params] table of the config file):\n");
    for t in REGISTRY {
        s.push_str(&format!("\n  {}\n      {}\n", t.name, t.help));
        let first = if t.sweepable() { format!("<sweep variable, default {}>, ", t.primary) } else { String::new() };
        s.push_str(&format!("      columns: {first}{}\n", t.columns.join(", ")));
        for p in t.params {
            let kind = match p.kind {
                Kind::Num => "number".to_string(),
                Kind::Int => "integer".to_string(),
                Kind::Choice(o) => o.join("|"),
                Kind::Path => "path".to_string(),
            };
            let def = match p.default {
                Default::Num(v) => format!(" = {v}"),
                Default::Int(v) => format!(" = {v}"),
                Default::Text(v) => format!(" = \"{v}\""),
                Default::Unset => String::new(),
            };
            s.push_str(&format!("        {} ({kind}{def}): {}\n", p.name, p.help));
        }
    }
    s.push_str(&format!("\nAll outputs: {UNITS}.\n"));
    s
}

// ---------------------------------------------------------------------------
// Driver

fn resolve(task: &'static Task, cfg: &RunConfig) -> CliResult<Params> {
    for k in cfg.params.keys() {
        if task.param(k).is_none() {
            let known: Vec<_> = task.params.iter().map(|p| p.name).collect();
            let hint = if known.is_empty() { "this task takes no parameters".to_string() } else { format!("known: {}", known.join(", ")) };
            return Err(CliError::config(format!("params.{k}: unknown parameter for task {} ({hint})", task.name)));
        }
    }
    let mut values = Vec::with_capacity(task.params.len());
    for p in task.params {
        let err = |m: &str| CliError::config(format!("params.{}: {m}", p.name));
        let v = match (cfg.params.get(p.name), p.kind) {
            (None, _) => match p.default {
                Default::Num(v) => Value::Num(v),
                Default::Int(v) => Value::Int(v),
                Default::Text(v) => Value::Text(v.to_string()),
                Default::Unset => Value::Unset,
            },
            (Some(toml::Value::Float(v)), Kind::Num) => Value::Num(*v),
            (Some(toml::Value::Integer(v)), Kind::Num) => Value::Num(*v as f64),
            (Some(_), Kind::Num) => return Err(err("expected a number")),
            (Some(toml::Value::Integer(v)), Kind::Int) => Value::Int(*v),
            (Some(_), Kind::Int) => return Err(err("expected an integer")),
            (Some(toml::Value::String(s)), Kind::Choice(opts)) => {
                if !opts.contains(&s.as_str()) {
                    return Err(err(&format!("expected one of {}", opts.join(", "))));
                }
                Value::Text(s.clone())
            }
            (Some(_), Kind::Choice(opts)) => return Err(err(&format!("expected one of {}", opts.join(", ")))),
            (Some(toml::Value::String(s)), Kind::Path) => Value::Path(cfg.resolve_path(s)),
            (Some(_), Kind::Path) => return Err(err("expected a path string")),
        };
        if let Value::Num(x) = v {
            if !x.is_finite() {
                return Err(err("must be finite"));
            }
        }
        values.push((p.name, v));
    }
    Ok(Params { values })
}

/// Validates `cfg` against the task schema and evaluates it.
pub fn run(task_name: &str, cfg: &RunConfig, seed: Option<u64>) -> CliResult<Table> {
    let task = find(task_name)?;
    if let Some(t) = &cfg.task {
        if t != task_name {
            return Err(CliError::config(format!("task: config is for `{t}` but `{task_name}` was requested")));
        }
    }
    let base = resolve(task, cfg)?;
    let sweep = match &cfg.sweep {
        None => None,
        Some(_) if !task.sweepable() => {
            return Err(CliError::config(format!("sweep: task {} does not accept sweeps", task.name)));
        }
        Some(s) => {
            let p = task.param(&s.variable).ok_or_else(|| {
                CliError::config(format!("sweep.variable: `{}` is not a parameter of task {}", s.variable, task.name))
            })?;
            if !matches!(p.kind, Kind::Num) {
                return Err(CliError::config(format!("sweep.variable: `{}` is not a numeric parameter", s.variable)));
            }
            if cfg.params.contains_key(&s.variable) {
                return Err(CliError::config(format!("params.{}: also given as the sweep variable", s.variable)));
            }
            Some((p.name, s.values()?))
        }
    };
    let explicit_seed = seed.or(cfg.seed);
    let ctx = Ctx { task, base, sweep, seed: explicit_seed.unwrap_or(0), explicit_seed, config: cfg };
    (task.run)(&ctx)
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(";")
}

// ---------------------------------------------------------------------------
// Evaluators

fn run_zeta(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let z = regulate::chowla_selberg_1d(p.num("s"), p.num("alpha"), p.num("omega"))?;
        Ok(vec![z.leading.into(), z.bessel_sum.into(), z.total().into()])
    })
}

fn run_media(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let medium = match p.text("medium") {
            "nematic" => media::MediumSpec::nematic(p.num("lambda"), p.num("kappa1"), p.num("kappa2"))?,
            "reaction_diffusion" => media::MediumSpec::reaction_diffusion(p.num("lambda"), p.num("d"))?,
            "two_field" => media::MediumSpec::two_field(
                p.num("lambda1"),
                p.num("lambda2"),
                p.num("lambda12"),
                p.num("d"),
                p.num("kappa"),
            )?,
            _ => {
                let order = u32::try_from(p.int("p")).map_err(|_| CliError::config("params.p: must be a positive integer"))?;
                media::MediumSpec::generalized_p(order, p.num("c_p"), p.num("kappa1"), p.num("kappa2"))?
            }
        };
        let kind = match p.text("noise") {
            "white" => media::NoiseKind::White,
            "temporal" => media::NoiseKind::TemporalExponential { a: p.num("a") },
            "quenched" => media::NoiseKind::Quenched,
            _ => media::NoiseKind::SpatialHomogeneous,
        };
        let noise = media::NoiseSpec::new(kind, p.num("gamma"))?;
        let f = media::plate_force(&medium, &noise, p.num("l"))?;
        Ok(vec![f.into(), (medium.k0() * p.num("l")).into()])
    })
}

fn piston_section(p: &Params) -> CliResult<piston::CrossSection> {
    match p.text("section") {
        "circular" => Ok(piston::spectrum_circular(p.num("radius"), p.count("modes")?)?),
        _ => {
            let why = "when section = \"spectrum\"";
            let path = p.path("spectrum").ok_or_else(|| CliError::config(format!("params.spectrum: required {why}")))?;
            let s = spectrum::read_spectrum(path)?;
            Ok(piston::CrossSection::explicit(
                s.dirichlet,
                s.neumann,
                p.require("area", why)?,
                p.require("perimeter", why)?,
                p.require("chi", why)?,
            )?)
        }
    }
}

fn run_piston(ctx: &Ctx) -> CliResult<Table> {
    // The section depends only on non-swept parameters unless the radius
    // itself is swept.
    let fixed = match &ctx.sweep {
        Some(("radius", _)) => None,
        _ => Some(piston_section(&ctx.base)?),
    };
    let mut t = ctx.table(|p| {
        let owned;
        let cs = match &fixed {
            Some(cs) => cs,
            None => {
                owned = piston_section(p)?;
                &owned
            }
        };
        let (l, temp) = (p.num("l"), p.num("temperature"));
        let force = if temp == 0.0 {
            piston::piston_force_t0(cs, l)?
        } else {
            piston::piston_force(cs, l, &regulate::ThermalState::new(temp)?)?
        };
        let near = piston::piston_force_near(cs.area(), cs.perimeter(), cs.chi(), l, piston::Polarization::Total)?;
        let (l1, g1) = piston::lowest_mode(cs)?;
        let far = piston::piston_force_far(l1, g1, l)?;
        Ok(vec![force.into(), (2.0 * force * force).into(), near.into(), far.into()])
    })?;
    if let Some(cs) = &fixed {
        let (l1, g1) = piston::lowest_mode(cs)?;
        t.summary.push(("lowest_mode".into(), format!("lambda1 = {l1:e}, degeneracy = {g1}")));
    }
    t.summary.push(("variance".into(), "sigma^2 = 2 F^2 (force_near, force_far at T = 0)".into()));
    Ok(t)
}

fn sim_config(p: &Params, seed: u64) -> CliResult<lattice::SimConfig> {
    Ok(lattice::SimConfig::new(p.num("dt"), p.count("burn_in")?, p.count("samples")?, seed, p.count("realizations")?)?
        .with_stride(p.count("stride")?))
}

fn run_lattice_modes(ctx: &Ctx) -> CliResult<Table> {
    let p = &ctx.base;
    let count = p.count("count")?;
    if count == 0 {
        return Err(CliError::config("params.count: must be at least 1"));
    }
    let mu: Vec<Complex64> = (0..count).map(|n| Complex64::new(p.num("mu") * ((n + 1) * (n + 1)) as f64, 0.0)).collect();
    let kernel = match p.text("kernel") {
        "white" => media::TemporalKernel::White,
        _ => media::TemporalKernel::Exponential { a: p.num("a") },
    };
    let cfg = sim_config(p, ctx.seed)?;
    let sim = lattice::simulate_modes(&mu, p.num("gamma"), None, kernel, &cfg)?;
    let pred = lattice::predicted_correlators(&mu, p.num("gamma"), None, kernel)?;
    let rows = sim
        .rows()
        .into_iter()
        .map(|(n, m, re, im, se)| {
            let q = pred[n * count + m];
            vec![(n as f64).into(), (m as f64).into(), re.into(), im.into(), se.into(), q.re.into(), q.im.into()]
        })
        .collect();
    Ok(Table {
        task: ctx.task.name.into(),
        units: UNITS.into(),
        columns: ctx.task.columns.iter().map(|c| c.to_string()).collect(),
        rows,
        summary: vec![("seed".into(), ctx.seed.to_string())],
    })
}

fn run_lattice_kernel(ctx: &Ctx) -> CliResult<Table> {
    let mut t = ctx.table(|p| {
        let r = lattice::simulate_second_order(p.num("mu"), p.num("gamma"), p.num("c2"), &sim_config(p, ctx.seed)?)?;
        Ok(vec![r.variance.into(), r.stderr.into(), r.predicted.into()])
    })?;
    t.summary.push(("seed".into(), ctx.seed.to_string()));
    Ok(t)
}

fn run_psa_kernel(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let l = p.num("lambda");
        [psa::Channel::EE, psa::Channel::HH, psa::Channel::EH, psa::Channel::HE]
            .iter()
            .map(|&ch| Ok(psa::pair_kernel_finite_t(l, ch)?.into()))
            .collect()
    })
}

fn run_psa_energy(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let d = p.num("distance");
        let b1 = psa::BodyRegion::sphere(p.num("radius1"), [0.0, 0.0, 0.0])?;
        let b2 = psa::BodyRegion::sphere(p.num("radius2"), [0.0, 0.0, d])?;
        let m1 = psa::MaterialPSA::Static(psa::StaticMaterial::dielectric(p.num("eps1")));
        let m2 = psa::MaterialPSA::Static(psa::StaticMaterial::dielectric(p.num("eps2")));
        let temperature = p.num("temperature");
        let regime = match p.text("regime") {
            "quantum" => psa::PsaRegime::Quantum { temperature },
            _ => psa::PsaRegime::Classical { temperature },
        };
        Ok(vec![psa::psa_energy(&b1, &b2, &m1, &m2, regime)?.into()])
    })
}

fn ti_pair(p: &Params) -> CliResult<(psa::TiMaterial, psa::TiMaterial)> {
    let mk = |theta| psa::TiMaterial::new(p.num("eps0"), p.num("w"), theta, p.num("omega_r"));
    Ok((mk(p.num("theta1"))?, mk(p.num("theta2"))?))
}

fn run_ti_phase(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let (a, b) = ti_pair(p)?;
        let regime = match p.text("regime") {
            "quantum" => psa::PhaseRegime::Quantum,
            _ => psa::PhaseRegime::Classical,
        };
        let ph = psa::ti_phase(&a, &b, regime)?;
        let class = match ph.class {
            psa::PhaseClass::AttractAll => "attract_all",
            psa::PhaseClass::RepelAll => "repel_all",
            psa::PhaseClass::StableEquilibrium => "stable_equilibrium",
        };
        Ok(vec![class.into(), opt_cell(ph.x_zero), opt_cell(ph.x_eq)])
    })
}

fn run_ti_gamma0(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let (a, b) = ti_pair(p)?;
        let x = p.num("x");
        Ok(vec![psa::ti_gamma0(x, &a, &b)?.into(), psa::ti_f1(x)?.into(), psa::ti_f2(x)?.into()])
    })
}

fn sphere_model(p: &Params) -> CliResult<scatter::SphereModel> {
    let (r, d) = (p.num("radius"), p.num("separation"));
    Ok(match p.text("material") {
        "perfect" => scatter::SphereModel::perfect(r, d)?,
        "plasma" => scatter::SphereModel::plasma(p.num("lambda_p"), r, d)?,
        _ => scatter::SphereModel::drude(p.num("lambda_p"), p.num("sigma"), r, d)?,
    })
}

fn sphere_temperature(p: &Params) -> CliResult<f64> {
    let z = p.num("z");
    if !(z >= 0.0) {
        return Err(CliError::config("params.z: must be non-negative"));
    }
    Ok(z / (2.0 * PI * p.num("separation")))
}

fn run_spheres_energy(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let m = sphere_model(p)?;
        let t = sphere_temperature(p)?;
        let e = scatter::spheres_energy(&m, t)?;
        let e0 = scatter::spheres_energy(&m, 0.0)?;
        Ok(vec![t.into(), e.into(), (e / e0).into()])
    })
}

fn run_spheres_entropy(ctx: &Ctx) -> CliResult<Table> {
    let mut t = ctx.table(|p| {
        let m = sphere_model(p)?;
        let t = sphere_temperature(p)?;
        Ok(vec![t.into(), scatter::spheres_entropy(&m, t)?.into()])
    })?;
    let zeros = scatter::entropy_zeros(&sphere_model(&ctx.base)?)?;
    t.summary.push(("entropy_zeros_z".into(), if zeros.is_empty() { "none".into() } else { fmt_list(&zeros) }));
    Ok(t)
}

fn run_spheres_force(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let m = sphere_model(p)?;
        let t = sphere_temperature(p)?;
        Ok(vec![t.into(), scatter::spheres_force(&m, t)?.into()])
    })
}

fn atom(p: &Params, i: u8) -> CliResult<scatter::AtomPolarizability> {
    let k = |kind: &str, axis: &str| p.num(&format!("{kind}{i}_{axis}"));
    Ok(scatter::AtomPolarizability::new(k("alpha", "z"), k("alpha", "par"), k("beta", "z"), k("beta", "par"))?)
}

fn run_atoms(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let (a1, a2) = (atom(p, 1)?, atom(p, 2)?);
        let (l, h) = (p.num("l"), p.num("h"));
        let e = scatter::atoms_wall_energy(l, h, &a1, &a2)?;
        let large = if h > 0.0 { Cell::Num(scatter::three_body_large_h(l, h, &a1, &a2)) } else { opt_cell(None) };
        let cp = scatter::casimir_polder(l, &a1, &a2)?;
        Ok(vec![e.total.into(), e.two_body_direct.into(), e.two_body_image.into(), e.three_body.into(), large, cp.into()])
    })
}

fn run_wall(ctx: &Ctx) -> CliResult<Table> {
    let mut t = ctx.table(|p| {
        let h = p.num("h");
        let f = scatter::spheres_wall_force_series(p.num("radius"), p.num("l"), h, 8)?;
        Ok(vec![
            scatter::f6(h)?.into(),
            scatter::wall_force_coefficient(7, h)?.into(),
            scatter::f8(h)?.into(),
            f.into(),
        ])
    })?;
    let (h, v) = scatter::f6_extremum()?;
    t.summary.push(("f6_extremum".into(), format!("h = {h:e}, f6 = {v:e}")));
    Ok(t)
}

fn thermal_limit(p: &Params) -> scatter::ThermalLimit {
    match p.text("limit") {
        "quantum" => scatter::ThermalLimit::Quantum,
        _ => scatter::ThermalLimit::Classical { temperature: p.num("temperature") },
    }
}

fn run_cylinders(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let bc = match p.text("bc") {
            "dirichlet" => scatter::CylinderBc::Dirichlet,
            "neumann" => scatter::CylinderBc::Neumann,
            _ => scatter::CylinderBc::PerfectMetal,
        };
        let cfg = scatter::CylinderConfig::new(p.num("radius"), p.num("separation"), p.num("tilt"), p.num("azimuth"), bc)?;
        let a = scatter::cyl_energy_asymptotic(&cfg, thermal_limit(p))?;
        let src = match a.provenance {
            scatter::EnergyProvenance::Direct => "direct",
            scatter::EnergyProvenance::ForceIntegrated => "force_integrated",
        };
        Ok(vec![a.energy.into(), a.force.into(), src.into()])
    })
}

fn run_omega(ctx: &Ctx) -> CliResult<Table> {
    let mut t = ctx.table(|p| Ok(vec![scatter::omega_gamma(p.num("tilt"))?.into()]))?;
    let n = ctx.base.count("fourier")?;
    if n > 0 {
        t.summary.push(("cosine_coefficients".into(), fmt_list(&scatter::omega_fourier(n)?)));
    }
    Ok(t)
}

fn run_cyl_pfa(ctx: &Ctx) -> CliResult<Table> {
    ctx.table(|p| {
        let (r, l, g) = (p.num("radius"), p.num("gap"), p.num("tilt"));
        let lim = thermal_limit(p);
        let closed = scatter::cyl_pfa(r, l, g, lim)?;
        let exact = scatter::cyl_pfa_exact(r, l, g, lim)?;
        Ok(vec![closed.into(), exact.into(), (exact / closed).into()])
    })
}

fn run_acceptance(ctx: &Ctx) -> CliResult<Table> {
    let outcomes = acceptance::run_all(ctx.explicit_seed);
    Ok(acceptance::to_table(&outcomes))
}
