//! INI-style scenario files.
//!
//! ```text
//! seed = 42
//!
//! [mixture]
//! preset = hamel      ; optional: gross-krook, hamel, plasma, aap
//! m1 = 2
//! m2 = 1
//!
//! [grid]
//! nodes = 24          ; or three comma-separated counts
//! radius = 6
//!
//! [initial]
//! profile = uniform   ; uniform, layered, riemann
//! n1 = 1
//! u1 = 0.5, 0, 0
//! t1 = 1.5
//!
//! [solver]
//! scheme = exponential
//! steps = 2000
//! ```
//!
//! `#` and `;` start comments. Every section except `[mixture]` is optional
//! and unknown sections or keys are errors. See [`ScenarioConfig::to_text`]
//! for the full key list.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::params::{preset, MixtureParams, MomentPair, Preset, PresetAux, SpeciesMoments};
use crate::relax::{equilibrium_moments, KineticState, Monitors, Scheme};
use crate::transport::{Boundary, Reconstruction, SpatialField, Splitting, StreamingIntegrator, TransportOptions};
use crate::twofluid::{MhdState, Primitive};
use crate::vector::Vec3;
use crate::velocity::{MaxwellianKind, VelocityGrid, DEFAULT_RADIUS};

pub const DEFAULT_SEED: u64 = 42;

/// Named values accepted for an enumerated key.
trait Keyword: Sized + Copy + PartialEq + 'static {
    const CHOICES: &'static [(&'static str, Self)];

    fn keyword(self) -> &'static str {
        Self::CHOICES.iter().find(|(_, v)| *v == self).map(|(k, _)| *k).unwrap_or("?")
    }
}

impl Keyword for Preset {
    const CHOICES: &'static [(&'static str, Self)] = &[
        ("gross-krook", Preset::GrossKrook),
        ("hamel", Preset::Hamel),
        ("plasma", Preset::Plasma),
        ("aap", Preset::Aap),
    ];
}

impl Keyword for Scheme {
    const CHOICES: &'static [(&'static str, Self)] = &[
        ("exponential", Scheme::Exponential),
        ("exponential-midpoint", Scheme::ExponentialMidpoint),
        ("rk4", Scheme::Rk4),
    ];
}

impl Keyword for Boundary {
    const CHOICES: &'static [(&'static str, Self)] = &[("periodic", Boundary::Periodic), ("outflow", Boundary::Outflow)];
}

impl Keyword for Splitting {
    const CHOICES: &'static [(&'static str, Self)] = &[("strang", Splitting::Strang), ("lie", Splitting::Lie)];
}

impl Keyword for Reconstruction {
    const CHOICES: &'static [(&'static str, Self)] =
        &[("upwind", Reconstruction::Upwind), ("minmod", Reconstruction::Minmod)];
}

impl Keyword for StreamingIntegrator {
    const CHOICES: &'static [(&'static str, Self)] =
        &[("ssp-rk2", StreamingIntegrator::SspRk2), ("forward-euler", StreamingIntegrator::ForwardEuler)];
}

impl Keyword for MaxwellianKind {
    const CHOICES: &'static [(&'static str, Self)] =
        &[("discrete", MaxwellianKind::Discrete), ("continuous", MaxwellianKind::Continuous)];
}

/// Spatial layout of the initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Uniform,
    /// Right state on the middle half of the domain.
    Layered,
    /// Left state on the left half, right state on the right half.
    Riemann,
}

impl Keyword for Profile {
    const CHOICES: &'static [(&'static str, Self)] =
        &[("uniform", Profile::Uniform), ("layered", Profile::Layered), ("riemann", Profile::Riemann)];
}

/// `[mixture]` as written. Unset optional keys stay `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSection {
    pub preset: Option<Preset>,
    pub m1: f64,
    pub m2: f64,
    pub nu11: Option<f64>,
    pub nu21: Option<f64>,
    pub nu22: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    /// Free parameter of the `aap` preset.
    pub chi_over_nu: Option<f64>,
    /// Overrides the strict H-theorem check on `alpha` and `delta`.
    pub strict: Option<bool>,
}

const MIXTURE_KEYS: &[&str] =
    &["preset", "m1", "m2", "nu11", "nu21", "nu22", "epsilon", "delta", "alpha", "gamma", "chi_over_nu", "strict"];

impl MixtureSection {
    /// Keys a preset reads besides the masses and `strict`.
    fn preset_inputs(p: Preset) -> &'static [&'static str] {
        match p {
            Preset::GrossKrook => &["nu11", "nu21", "nu22", "alpha", "gamma"],
            Preset::Hamel => &["nu11", "nu21", "nu22"],
            Preset::Plasma => &["nu22"],
            Preset::Aap => &["nu11", "nu21", "nu22", "epsilon", "chi_over_nu"],
        }
    }

    /// Expands the preset, or assembles explicit values. `densities` feed the
    /// `aap` mapping.
    pub fn params(&self, densities: (f64, f64)) -> Result<MixtureParams> {
        let mut params = match self.preset {
            Some(p) => preset(
                p.keyword(),
                self.m1,
                self.m2,
                PresetAux {
                    nu11: self.nu11,
                    nu21: self.nu21,
                    nu22: self.nu22,
                    epsilon: self.epsilon,
                    alpha: self.alpha,
                    gamma: self.gamma,
                    chi_over_nu: self.chi_over_nu,
                    densities: Some(densities),
                },
            )?,
            None => {
                let d = MixtureParams::default();
                MixtureParams {
                    m1: self.m1,
                    m2: self.m2,
                    nu11: self.nu11.unwrap_or(d.nu11),
                    nu21: self.nu21.unwrap_or(d.nu21),
                    nu22: self.nu22.unwrap_or(d.nu22),
                    epsilon: self.epsilon.unwrap_or(d.epsilon),
                    delta: self.delta.unwrap_or(d.delta),
                    alpha: self.alpha.unwrap_or(d.alpha),
                    gamma: self.gamma.unwrap_or(d.gamma),
                    ..d
                }
            }
        };
        if let Some(strict) = self.strict {
            params.strict_h_theorem = strict;
        }
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub nodes: [usize; 3],
    /// Half-width in thermal speeds around each species' mean velocity.
    pub radius: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { nodes: [24; 3], radius: DEFAULT_RADIUS }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialSection {
    pub profile: Profile,
    pub left: MomentPair,
    /// Defaults to `left` key by key.
    pub right: MomentPair,
}

impl Default for InitialSection {
    fn default() -> Self {
        let s = SpeciesMoments::new(1.0, [0.0; 3], 1.0);
        InitialSection { profile: Profile::Uniform, left: MomentPair::new(s, s), right: MomentPair::new(s, s) }
    }
}

impl InitialSection {
    pub fn at(&self, x: f64, length: f64) -> MomentPair {
        let inside = match self.profile {
            Profile::Uniform => false,
            Profile::Layered => (0.25 * length..0.75 * length).contains(&x),
            Profile::Riemann => x >= 0.5 * length,
        };
        if inside {
            self.right
        } else {
            self.left
        }
    }

    fn states(&self) -> Vec<MomentPair> {
        match self.profile {
            Profile::Uniform => vec![self.left],
            _ => vec![self.left, self.right],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSection {
    pub scheme: Scheme,
    /// Defaults to a tenth of the inverse largest relaxation rate.
    pub dt: Option<f64>,
    pub steps: usize,
    pub cells: usize,
    pub length: f64,
    pub boundary: Boundary,
    pub splitting: Splitting,
    pub reconstruction: Reconstruction,
    pub streaming: StreamingIntegrator,
    pub attractors: MaxwellianKind,
    pub stop_at_equilibrium: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            scheme: Scheme::Exponential,
            dt: None,
            steps: 100,
            cells: 64,
            length: 1.0,
            boundary: Boundary::Periodic,
            splitting: Splitting::Strang,
            reconstruction: Reconstruction::Upwind,
            streaming: StreamingIntegrator::SspRk2,
            attractors: MaxwellianKind::Discrete,
            stop_at_equilibrium: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    /// Record every `every`-th step.
    pub every: usize,
    /// Also write binary distribution snapshots.
    pub snapshots: bool,
    /// Default output path when none is given on the command line.
    pub path: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { every: 1, snapshots: false, path: None }
    }
}

/// `[mhd]`: a 1D ideal-MHD Riemann problem.
#[derive(Debug, Clone, PartialEq)]
pub struct MhdSection {
    pub cells: usize,
    pub length: f64,
    pub bx: f64,
    pub boundary: Boundary,
    pub cfl: f64,
    pub t_end: f64,
    pub left: Primitive,
    pub right: Primitive,
}

impl Default for MhdSection {
    fn default() -> Self {
        MhdSection {
            cells: 400,
            length: 1.0,
            bx: 0.75,
            boundary: Boundary::Outflow,
            cfl: 0.4,
            t_end: 0.1,
            left: Primitive { n: 1.0, u: Vec3::ZERO, p: 1.0, b: Vec3::new(0.75, 1.0, 0.0) },
            right: Primitive { n: 0.125, u: Vec3::ZERO, p: 0.1, b: Vec3::new(0.75, -1.0, 0.0) },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub mixture: MixtureSection,
    /// Validated parameters expanded from `mixture`.
    pub params: MixtureParams,
    pub grid: GridSection,
    pub initial: InitialSection,
    pub solver: SolverSection,
    pub output: OutputSection,
    pub mhd: Option<MhdSection>,
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

const SECTIONS: &[&str] = &["mixture", "grid", "initial", "solver", "output", "mhd"];

fn tokenize(text: &str) -> Result<(Vec<Entry>, Vec<Section>)> {
    let mut top = Vec::new();
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split(['#', ';']).next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::config(line, format!("malformed section header `{content}`")))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(Error::config(line, format!("unknown section [{name}]")));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(Error::config(line, format!("duplicate section [{name}]")));
            }
            sections.push(Section { name: name.to_string(), line, entries: Vec::new() });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::config(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::config(line, "empty key"));
        }
        let entries = match sections.last_mut() {
            Some(s) => &mut s.entries,
            None => &mut top,
        };
        if entries.iter().any(|e: &Entry| e.key == key) {
            return Err(Error::config(line, format!("duplicate key `{key}`")));
        }
        entries.push(Entry { key: key.to_string(), value: value.to_string(), line });
    }
    Ok((top, sections))
}

/// Typed access to the entries of one section.
struct Fields<'a> {
    section: &'a str,
    entries: &'a [Entry],
}

impl<'a> Fields<'a> {
    fn new(section: &'a str, entries: &'a [Entry], known: &[&str]) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| !known.contains(&e.key.as_str())) {
            return Err(Error::config(e.line, format!("unknown key `{}` in [{section}]", e.key)));
        }
        Ok(Fields { section, entries })
    }

    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn line(&self, key: &str) -> usize {
        self.entry(key).map_or(0, |e| e.line)
    }

    fn parse<T>(&self, key: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.entry(key) {
            None => Ok(None),
            Some(e) => f(&e.value).map(Some).ok_or_else(|| {
                Error::config(e.line, format!("type mismatch: `{key}` expects {what}, got `{}`", e.value))
            }),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse(key, "a finite number", |v| v.parse::<f64>().ok().filter(|x| x.is_finite()))
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse(key, "a non-negative integer", |v| v.parse().ok())
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.parse(key, "true or false", |v| v.parse().ok())
    }

    fn vec3(&self, key: &str) -> Result<Option<Vec3>> {
        self.parse(key, "three comma-separated numbers", |v| {
            let xs: Vec<f64> = v.split(',').map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite())).collect::<Option<_>>()?;
            <[f64; 3]>::try_from(xs).ok().map(Vec3::from)
        })
    }

    fn keyword<T: Keyword>(&self, key: &str) -> Result<Option<T>> {
        let names: Vec<&str> = T::CHOICES.iter().map(|(k, _)| *k).collect();
        self.parse(key, &format!("one of {}", names.join(", ")), |v| {
            T::CHOICES.iter().find(|(k, _)| *k == v).map(|(_, t)| *t)
        })
    }

    fn string(&self, key: &str) -> Option<String> {
        self.entry(key).map(|e| e.value.clone())
    }

    fn require<T>(&self, key: &str, value: Option<T>) -> Result<T> {
        value.ok_or_else(|| Error::config(0, format!("[{}] is missing required key `{key}`", self.section)))
    }

    fn positive(&self, key: &str, value: f64) -> Result<f64> {
        if value > 0.0 {
            Ok(value)
        } else {
            Err(Error::config(self.line(key), format!("`{key}` must be positive, got {value}")))
        }
    }
}

fn parse_mixture(f: &Fields) -> Result<MixtureSection> {
    let m = MixtureSection {
        preset: f.keyword("preset")?,
        m1: f.require("m1", f.f64("m1")?)?,
        m2: f.require("m2", f.f64("m2")?)?,
        nu11: f.f64("nu11")?,
        nu21: f.f64("nu21")?,
        nu22: f.f64("nu22")?,
        epsilon: f.f64("epsilon")?,
        delta: f.f64("delta")?,
        alpha: f.f64("alpha")?,
        gamma: f.f64("gamma")?,
        chi_over_nu: f.f64("chi_over_nu")?,
        strict: f.bool("strict")?,
    };
    match m.preset {
        Some(p) => {
            let inputs = MixtureSection::preset_inputs(p);
            for e in f.entries {
                let k = e.key.as_str();
                if !matches!(k, "preset" | "m1" | "m2" | "strict") && !inputs.contains(&k) {
                    return Err(Error::config(e.line, format!("`{k}` is fixed by preset {}", p.keyword())));
                }
            }
        }
        None => {
            if let Some(e) = f.entry("chi_over_nu") {
                return Err(Error::config(e.line, "`chi_over_nu` is only read by preset aap"));
            }
        }
    }
    Ok(m)
}

const SPECIES_KEYS: [&str; 6] = ["n1", "u1", "t1", "n2", "u2", "t2"];

fn parse_pair(f: &Fields, suffix: &str, base: &MomentPair) -> Result<MomentPair> {
    let key = |k: &str| format!("{k}{suffix}");
    let species = |i: &str, b: &SpeciesMoments| -> Result<SpeciesMoments> {
        Ok(SpeciesMoments {
            n: f.f64(&key(&format!("n{i}")))?.unwrap_or(b.n),
            u: f.vec3(&key(&format!("u{i}")))?.unwrap_or(b.u),
            t: f.f64(&key(&format!("t{i}")))?.unwrap_or(b.t),
        })
    };
    let pair = MomentPair::new(species("1", &base.s1)?, species("2", &base.s2)?);
    for (k, v) in [("n1", pair.s1.n), ("t1", pair.s1.t), ("n2", pair.s2.n), ("t2", pair.s2.t)] {
        f.positive(&key(k), v)?;
    }
    Ok(pair)
}

fn parse_initial(f: &Fields) -> Result<InitialSection> {
    let d = InitialSection::default();
    let profile = f.keyword("profile")?.unwrap_or(d.profile);
    let left = parse_pair(f, "", &d.left)?;
    let right = parse_pair(f, "_right", &left)?;
    Ok(InitialSection { profile, left, right })
}

fn parse_grid(f: &Fields) -> Result<GridSection> {
    let d = GridSection::default();
    let nodes = f.parse("nodes", "one or three positive integers", |v| {
        let xs: Vec<usize> = v.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
        match xs.as_slice() {
            [n] => Some([*n; 3]),
            [a, b, c] => Some([*a, *b, *c]),
            _ => None,
        }
    })?;
    let radius = f.f64("radius")?.unwrap_or(d.radius);
    f.positive("radius", radius)?;
    Ok(GridSection { nodes: nodes.unwrap_or(d.nodes), radius })
}

fn parse_solver(f: &Fields) -> Result<SolverSection> {
    let d = SolverSection::default();
    let s = SolverSection {
        scheme: f.keyword("scheme")?.unwrap_or(d.scheme),
        dt: f.f64("dt")?,
        steps: f.usize("steps")?.unwrap_or(d.steps),
        cells: f.usize("cells")?.unwrap_or(d.cells),
        length: f.f64("length")?.unwrap_or(d.length),
        boundary: f.keyword("boundary")?.unwrap_or(d.boundary),
        splitting: f.keyword("splitting")?.unwrap_or(d.splitting),
        reconstruction: f.keyword("reconstruction")?.unwrap_or(d.reconstruction),
        streaming: f.keyword("streaming")?.unwrap_or(d.streaming),
        attractors: f.keyword("attractors")?.unwrap_or(d.attractors),
        stop_at_equilibrium: f.bool("stop_at_equilibrium")?.unwrap_or(d.stop_at_equilibrium),
    };
    if let Some(dt) = s.dt {
        f.positive("dt", dt)?;
    }
    f.positive("length", s.length)?;
    Ok(s)
}

fn parse_output(f: &Fields) -> Result<OutputSection> {
    let d = OutputSection::default();
    let every = f.usize("every")?.unwrap_or(d.every);
    if every == 0 {
        return Err(Error::config(f.line("every"), "`every` must be at least 1"));
    }
    Ok(OutputSection { every, snapshots: f.bool("snapshots")?.unwrap_or(d.snapshots), path: f.string("path") })
}

fn parse_primitive(f: &Fields, side: &str, base: &Primitive, bx: f64) -> Result<Primitive> {
    let key = |k: &str| format!("{k}_{side}");
    let p = Primitive {
        n: f.f64(&key("n"))?.unwrap_or(base.n),
        u: f.vec3(&key("u"))?.unwrap_or(base.u),
        p: f.f64(&key("p"))?.unwrap_or(base.p),
        b: Vec3::new(bx, f.f64(&key("by"))?.unwrap_or(base.b.y()), f.f64(&key("bz"))?.unwrap_or(base.b.z())),
    };
    f.positive(&key("n"), p.n)?;
    f.positive(&key("p"), p.p)?;
    Ok(p)
}

fn parse_mhd(f: &Fields) -> Result<MhdSection> {
    let d = MhdSection::default();
    let bx = f.f64("bx")?.unwrap_or(d.bx);
    let s = MhdSection {
        cells: f.usize("cells")?.unwrap_or(d.cells),
        length: f.f64("length")?.unwrap_or(d.length),
        bx,
        boundary: f.keyword("boundary")?.unwrap_or(d.boundary),
        cfl: f.f64("cfl")?.unwrap_or(d.cfl),
        t_end: f.f64("t_end")?.unwrap_or(d.t_end),
        left: parse_primitive(f, "left", &d.left, bx)?,
        right: parse_primitive(f, "right", &d.right, bx)?,
    };
    f.positive("length", s.length)?;
    f.positive("cfl", s.cfl)?;
    Ok(s)
}

fn with_suffix(keys: &[&str], suffix: &str) -> Vec<String> {
    keys.iter().map(|k| format!("{k}{suffix}")).collect()
}

/// Parses and validates a scenario. Reports the first error with its line.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let (top, sections) = tokenize(text)?;
    let seed = Fields::new("top level", &top, &["seed"])?
        .parse("seed", "a 64-bit unsigned integer", |v| v.parse::<u64>().ok())?
        .unwrap_or(DEFAULT_SEED);
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    let empty: &[Entry] = &[];
    let entries = |name: &str| find(name).map_or(empty, |s| s.entries.as_slice());

    let mixture_section = find("mixture").ok_or_else(|| Error::config(0, "missing [mixture]"))?;
    let mixture = parse_mixture(&Fields::new("mixture", &mixture_section.entries, MIXTURE_KEYS)?)?;

    let grid = parse_grid(&Fields::new("grid", entries("grid"), &["nodes", "radius"])?)?;

    let mut initial_keys: Vec<String> = vec!["profile".into()];
    initial_keys.extend(with_suffix(&SPECIES_KEYS, ""));
    initial_keys.extend(with_suffix(&SPECIES_KEYS, "_right"));
    let initial_refs: Vec<&str> = initial_keys.iter().map(String::as_str).collect();
    let initial = parse_initial(&Fields::new("initial", entries("initial"), &initial_refs)?)?;

    let solver = parse_solver(&Fields::new(
        "solver",
        entries("solver"),
        &[
            "scheme",
            "dt",
            "steps",
            "cells",
            "length",
            "boundary",
            "splitting",
            "reconstruction",
            "streaming",
            "attractors",
            "stop_at_equilibrium",
        ],
    )?)?;
    let output = parse_output(&Fields::new("output", entries("output"), &["every", "snapshots", "path"])?)?;

    let mhd = match find("mhd") {
        None => None,
        Some(s) => {
            let side = ["n", "u", "p", "by", "bz"];
            let mut keys: Vec<String> = ["cells", "length", "bx", "boundary", "cfl", "t_end"].map(String::from).to_vec();
            keys.extend(with_suffix(&side, "_left"));
            keys.extend(with_suffix(&side, "_right"));
            let refs: Vec<&str> = keys.iter().map(String::as_str).collect();
            Some(parse_mhd(&Fields::new("mhd", &s.entries, &refs)?)?)
        }
    };

    let params = mixture
        .params((initial.left.s1.n, initial.left.s2.n))
        .map_err(|e| Error::config(mixture_section.line, e.to_string()))?;
    let report = params.validate().map_err(|e| Error::config(mixture_section.line, e.to_string()))?;
    if !report.is_valid() {
        return Err(Error::config(mixture_section.line, format!("invalid [mixture]:\n{report}")));
    }

    Ok(ScenarioConfig { seed, mixture, params, grid, initial, solver, output, mhd })
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn vec3(v: Vec3) -> String {
    format!("{}, {}, {}", num(v.x()), num(v.y()), num(v.z()))
}

impl ScenarioConfig {
    /// Canonical text form; parsing it reproduces `self` exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kv = |s: &mut String, k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv(&mut s, "seed", self.seed.to_string());

        let m = &self.mixture;
        s.push_str("\n[mixture]\n");
        if let Some(p) = m.preset {
            kv(&mut s, "preset", p.keyword().into());
        }
        kv(&mut s, "m1", num(m.m1));
        kv(&mut s, "m2", num(m.m2));
        for (k, v) in [
            ("nu11", m.nu11),
            ("nu21", m.nu21),
            ("nu22", m.nu22),
            ("epsilon", m.epsilon),
            ("delta", m.delta),
            ("alpha", m.alpha),
            ("gamma", m.gamma),
            ("chi_over_nu", m.chi_over_nu),
        ] {
            if let Some(v) = v {
                kv(&mut s, k, num(v));
            }
        }
        if let Some(b) = m.strict {
            kv(&mut s, "strict", b.to_string());
        }

        let g = &self.grid;
        s.push_str("\n[grid]\n");
        kv(&mut s, "nodes", format!("{}, {}, {}", g.nodes[0], g.nodes[1], g.nodes[2]));
        kv(&mut s, "radius", num(g.radius));

        let i = &self.initial;
        s.push_str("\n[initial]\n");
        kv(&mut s, "profile", i.profile.keyword().into());
        for (pair, suffix) in [(&i.left, ""), (&i.right, "_right")] {
            for (idx, sp) in [("1", &pair.s1), ("2", &pair.s2)] {
                kv(&mut s, &format!("n{idx}{suffix}"), num(sp.n));
                kv(&mut s, &format!("u{idx}{suffix}"), vec3(sp.u));
                kv(&mut s, &format!("t{idx}{suffix}"), num(sp.t));
            }
        }

        let v = &self.solver;
        s.push_str("\n[solver]\n");
        kv(&mut s, "scheme", v.scheme.keyword().into());
        if let Some(dt) = v.dt {
            kv(&mut s, "dt", num(dt));
        }
        kv(&mut s, "steps", v.steps.to_string());
        kv(&mut s, "cells", v.cells.to_string());
        kv(&mut s, "length", num(v.length));
        kv(&mut s, "boundary", v.boundary.keyword().into());
        kv(&mut s, "splitting", v.splitting.keyword().into());
        kv(&mut s, "reconstruction", v.reconstruction.keyword().into());
        kv(&mut s, "streaming", v.streaming.keyword().into());
        kv(&mut s, "attractors", v.attractors.keyword().into());
        kv(&mut s, "stop_at_equilibrium", v.stop_at_equilibrium.to_string());

        let o = &self.output;
        s.push_str("\n[output]\n");
        kv(&mut s, "every", o.every.to_string());
        kv(&mut s, "snapshots", o.snapshots.to_string());
        if let Some(p) = &o.path {
            kv(&mut s, "path", p.clone());
        }

        if let Some(h) = &self.mhd {
            s.push_str("\n[mhd]\n");
            kv(&mut s, "cells", h.cells.to_string());
            kv(&mut s, "length", num(h.length));
            kv(&mut s, "bx", num(h.bx));
            kv(&mut s, "boundary", h.boundary.keyword().into());
            kv(&mut s, "cfl", num(h.cfl));
            kv(&mut s, "t_end", num(h.t_end));
            for (p, side) in [(&h.left, "left"), (&h.right, "right")] {
                kv(&mut s, &format!("n_{side}"), num(p.n));
                kv(&mut s, &format!("u_{side}"), vec3(p.u));
                kv(&mut s, &format!("p_{side}"), num(p.p));
                kv(&mut s, &format!("by_{side}"), num(p.b.y()));
                kv(&mut s, &format!("bz_{side}"), num(p.b.z()));
            }
        }
        s
    }

    /// Velocity grid covering every initial state and its predicted
    /// equilibrium.
    pub fn velocity_grid(&self) -> Result<VelocityGrid> {
        let p = &self.params;
        let light = p.m1.min(p.m2);
        let mut species = Vec::new();
        for pair in self.initial.states() {
            let (u, t) = equilibrium_moments(&pair, p);
            species.extend([(pair.s1, p.m1), (pair.s2, p.m2), (SpeciesMoments::new(1.0, u, t), light)]);
        }
        VelocityGrid::build(&species, self.grid.radius, self.grid.nodes)
    }

    /// Space-homogeneous state from the left initial state.
    pub fn kinetic_state(&self) -> Result<KineticState> {
        let mut s = KineticState::from_moments(&self.initial.left, self.velocity_grid()?, self.params)?;
        s.attractors = self.solver.attractors;
        Ok(s)
    }

    pub fn spatial_field(&self) -> Result<SpatialField> {
        let v = &self.solver;
        let mut f = SpatialField::from_profile(v.cells, v.length, v.boundary, self.velocity_grid()?, self.params, |x| {
            self.initial.at(x, v.length)
        })?;
        f.attractors = v.attractors;
        Ok(f)
    }

    pub fn mhd_state(&self) -> Result<MhdState> {
        let h = self.mhd.clone().unwrap_or_default();
        MhdState::riemann(h.cells, h.length, h.bx, h.boundary, h.left, h.right)
    }

    pub fn monitors(&self) -> Monitors {
        Monitors { scheme: self.solver.scheme, every: self.output.every, stop_at_equilibrium: self.solver.stop_at_equilibrium }
    }

    pub fn transport_options(&self) -> TransportOptions {
        TransportOptions {
            splitting: self.solver.splitting,
            streaming: self.solver.streaming,
            reconstruction: self.solver.reconstruction,
            relaxation: self.solver.scheme,
        }
    }
}
