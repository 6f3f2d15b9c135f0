use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use bgkmix::config::{parse_config, ScenarioConfig};
use bgkmix::relax;
use bgkmix::transport::{self, write_moments_csv};
use bgkmix::twofluid::{
    mhd_step, observed_orders, refinement_study, AdvectedLayer, DimensionlessConstants, LimitSystem, MhdState,
    MHD_CFL_LIMIT,
};
use bgkmix::verify::{self, Suite};

use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

/// Fraction of the streaming limit used when `[solver] dt` is absent.
const TRANSPORT_DT_FRACTION: f64 = 0.5;

fn load(path: &Path) -> CliResult<(String, ScenarioConfig)> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let cfg = parse_config(&text)?;
    Ok((text, cfg))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn write_with(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> CliResult<()> {
    let mut w = create(path)?;
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn make_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_path_buf(), source })
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn sibling_manifest(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn relax(config: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let (text, cfg) = load(config)?;
    let out = out
        .or_else(|| cfg.output.path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("series.csv"));
    let state = cfg.kinetic_state()?;
    let dt = match cfg.solver.dt {
        Some(dt) => dt,
        None => state.default_dt()?,
    };
    let series = relax::run(state, dt, cfg.solver.steps, cfg.monitors())?;
    write_with(&out, |w| series.write_csv(w))?;

    let mut manifest = Manifest::new("relax").with_config(config, &text).tolerance("dt", dt);
    manifest.seed = Some(cfg.seed);
    manifest.outputs.push(file_name(&out));
    if cfg.output.snapshots {
        let fin = &series.final_state;
        for (tag, f) in [("f1", &fin.f1), ("f2", &fin.f2)] {
            let path = out.with_extension(format!("{tag}.bin"));
            write_with(&path, |w| f.write_binary(&fin.grid, w))?;
            manifest.outputs.push(file_name(&path));
        }
    }
    manifest.write(&sibling_manifest(&out))?;

    let last = series.rows.last();
    println!(
        "relax: {} steps, dt {dt:e}, t_end {:.6}, equilibrium at {}",
        series.steps_taken,
        last.map_or(0.0, |r| r.t),
        series.equilibrium_time.map_or("-".to_string(), |t| format!("{t:.6}"))
    );
    for loss in &series.positivity_losses {
        eprintln!("warning: negative value {:e} at t = {:.6}", loss.min_value, loss.time);
    }
    Ok(())
}

pub fn transport(config: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let (text, cfg) = load(config)?;
    let dir = out.unwrap_or_else(|| PathBuf::from(cfg.output.path.as_deref().unwrap_or("transport")));
    make_dir(&dir)?;
    let field = cfg.spatial_field()?;
    let dt = cfg.solver.dt.unwrap_or(TRANSPORT_DT_FRACTION * field.max_streaming_dt());
    let courant = field.courant(dt);
    let every = if cfg.output.snapshots { cfg.output.every.max(1) } else { 0 };
    let run = transport::run(field, dt, cfg.solver.steps, cfg.transport_options(), every)?;

    let mut manifest = Manifest::new("transport")
        .with_config(config, &text)
        .tolerance("dt", dt)
        .tolerance("courant", courant);
    manifest.seed = Some(cfg.seed);
    for (k, (_, moments)) in run.snapshots.iter().enumerate() {
        let path = dir.join(format!("snapshot_{k:04}.csv"));
        write_with(&path, |w| write_moments_csv(moments, cfg.solver.length, w))?;
        manifest.outputs.push(file_name(&path));
    }
    let totals = dir.join("totals.csv");
    write_with(&totals, |w| run.write_totals_csv(w))?;
    manifest.outputs.push(file_name(&totals));
    manifest.write(&dir.join("manifest.json"))?;

    let budget = run.budget();
    println!(
        "transport: {} steps, dt {dt:e}, courant {courant:.4}, max mass drift {:.3e}, max H increment {:.3e}",
        cfg.solver.steps,
        run.max_relative_drift(|t| t.mass1 + t.mass2),
        budget.max_increment()
    );
    Ok(())
}

pub fn mhd(config: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let (text, cfg) = load(config)?;
    let h = cfg.mhd.clone().unwrap_or_default();
    if !(h.cfl > 0.0 && h.cfl <= MHD_CFL_LIMIT) {
        return Err(bgkmix::Error::config(0, format!("[mhd] cfl must lie in (0, {MHD_CFL_LIMIT}], got {}", h.cfl)).into());
    }
    let dir = out.unwrap_or_else(|| PathBuf::from(cfg.output.path.as_deref().unwrap_or("mhd")));
    make_dir(&dir)?;
    let mut manifest = Manifest::new("mhd").with_config(config, &text).tolerance("cfl", h.cfl);
    let every = cfg.output.every.max(1);

    let mut state = cfg.mhd_state()?;
    let initial = state.totals();
    let mut step = 0usize;
    let mut snapshot = 0usize;
    let mut save = |state: &MhdState, manifest: &mut Manifest| -> CliResult<()> {
        let path = dir.join(format!("snapshot_{snapshot:04}.csv"));
        write_with(&path, |w| state.write_csv(w).map_err(std::io::Error::other))?;
        manifest.outputs.push(file_name(&path));
        snapshot += 1;
        Ok(())
    };
    save(&state, &mut manifest)?;
    while state.time < h.t_end {
        let dt = state.stable_dt(h.cfl).min(h.t_end - state.time);
        state = mhd_step(&state, dt)?;
        step += 1;
        if step.is_multiple_of(every) || state.time >= h.t_end {
            save(&state, &mut manifest)?;
        }
    }
    manifest.write(&dir.join("manifest.json"))?;

    let fin = state.totals();
    println!(
        "mhd: {step} steps to t = {:.6}, mass change {:.3e}, energy change {:.3e}",
        state.time,
        fin.0[0] - initial.0[0],
        fin.0[4] - initial.0[4]
    );
    Ok(())
}

pub fn limits(system: LimitSystem, levels: usize, base: usize, c: [f64; 5], out: Option<PathBuf>) -> CliResult<()> {
    let [c1, c2, c3, c5, nu] = c;
    let consts = DimensionlessConstants { c1, c2, c3, c4: c2 * c3, c5, m: 1.0 };
    let layer = AdvectedLayer::default();
    let length = 2.0 * std::f64::consts::PI;
    let study = refinement_study(system, &layer, length, 0.3, base, levels.max(1), &consts, nu)?;
    let errors: Vec<f64> = study.iter().map(|r| r.max_norm()).collect();
    let orders = observed_orders(&errors);

    let mut table = String::from("cells,dx,max_residual,order\n");
    for (k, r) in study.iter().enumerate() {
        let order = if k == 0 { String::from("-") } else { format!("{:.3}", orders[k - 1]) };
        table.push_str(&format!("{},{:.6e},{:.6e},{order}\n", r.cells, r.dx, errors[k]));
    }
    print!("{table}");
    if let Some(last) = study.last() {
        for (name, value) in &last.equations {
            println!("# {} {name}: {value:.3e}", system.name());
        }
    }
    if let Some(path) = out {
        fs::write(&path, table).map_err(|source| CliError::Write { path, source })?;
    }
    Ok(())
}

pub fn verify(suite: Suite, seed: u64, out: Option<PathBuf>) -> CliResult<()> {
    let report = verify::verify(suite, seed)?;
    let text = report.to_string();
    print!("{text}");
    if let Some(path) = out {
        fs::write(&path, &text).map_err(|source| CliError::Write { path: path.clone(), source })?;
        let mut manifest = Manifest::new("verify");
        manifest.seed = Some(seed);
        for r in &report.results {
            manifest.tolerances.insert(format!("{}/{}", r.suite, r.property), r.tolerance);
        }
        manifest.outputs.push(file_name(&path));
        manifest.write(&sibling_manifest(&path))?;
    }
    match report.failures().count() {
        0 => Ok(()),
        n => Err(CliError::Violations(n)),
    }
}
