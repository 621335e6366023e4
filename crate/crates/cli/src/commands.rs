use std::path::{Path, PathBuf};

use jampack_core::construction::{
    assemble_square_piece, density, five_disc_config, junction_piece, symmetric_bridge_piece, tiling_3_12_12,
    tiling_density_limit, tune_epsilon, CurveFamily, Region, SquareOptions,
};
use jampack_core::io::{self, Metadata, SvgOptions};
use jampack_core::metropolis::{escape_experiment, run_chain, shrink_radius, ChainParams, RNG_ALGORITHM};
use jampack_core::verifier::{check_valid, verify_stable};
use jampack_core::{Configuration, Error, Result, Tolerances};
use serde_json::{json, Value};

use crate::{ChainArgs, Command, Common, CurveArgs, Format};

const OUT_DIR_ENV: &str = "JAMPACK_OUT_DIR";

fn resolve_out(path: &Path) -> PathBuf {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    io::output_path(dir.as_deref(), path)
}

fn tolerances(common: &Common) -> Result<Tolerances> {
    Tolerances::with_tangency(common.tol)
}

/// Print the report in the requested format; `lines` is the text rendering
/// of `result`.
fn emit(common: &Common, command: &str, params: Value, result: Value, lines: &[String]) -> Result<()> {
    let report = json!({ "command": command, "params": params, "result": result });
    match common.format {
        Format::Json => print!("{}", io::report_to_string(&report)),
        Format::Text => {
            println!("jampack {command}");
            if let Value::Object(map) = &report["params"] {
                for (k, v) in map {
                    println!("  {k} = {v}");
                }
            }
            for l in lines {
                println!("{l}");
            }
        }
    }
    Ok(())
}

fn save_config(common: &Common, config: &Configuration, meta: &Metadata) -> Result<Option<PathBuf>> {
    let Some(out) = &common.out else { return Ok(None) };
    let path = resolve_out(out);
    if path.extension().is_some_and(|e| e == "csv") {
        io::write_csv(&path, config)?;
    } else {
        io::write_config(&path, config, Some(meta))?;
    }
    Ok(Some(path))
}

fn save_report(common: &Common, report: &Value) -> Result<Option<PathBuf>> {
    let Some(out) = &common.out else { return Ok(None) };
    let path = resolve_out(out);
    io::write_report(report, &path)?;
    Ok(Some(path))
}

fn family(curve: &CurveArgs) -> Result<CurveFamily> {
    CurveFamily::exponential(curve.lambda)
}

fn common_params(common: &Common) -> Value {
    json!({ "tol": common.tol, "format": format!("{:?}", common.format).to_lowercase(), "out": common.out })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

fn written(path: Option<PathBuf>) -> Vec<String> {
    path.map(|p| vec![format!("wrote {}", p.display())]).unwrap_or_default()
}

fn load(file: &Path) -> Result<Configuration> {
    Ok(io::read_config(file)?.0)
}

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::BuildBridge { n, curve, common } => {
            let tol = tolerances(&common)?;
            let n = n as usize;
            let (eps, chain) = tune_epsilon(&family(&curve)?, n, curve.eps_hi, &tol)?;
            let piece = symmetric_bridge_piece(&chain, &tol)?;
            let meta = Metadata {
                construction: Some("symmetric-bridge".into()),
                bridge_n: Some(n),
                epsilon: Some(eps),
                lambda: Some(curve.lambda),
                ..Metadata::default()
            };
            let path = save_config(&common, &piece.config, &meta)?;
            let params = merge(json!({ "N": n, "lambda": curve.lambda, "eps_hi": curve.eps_hi }), common_params(&common));
            let result = json!({
                "epsilon": eps,
                "discs": piece.config.len(),
                "closure_residual": chain.closure_residual(),
                "max_tangency_residual": chain.max_tangency_residual(),
                "mirror_x": chain.mirror_x,
            });
            let mut lines = vec![
                format!("epsilon = {eps}"),
                format!("discs = {}", piece.config.len()),
                format!("closure residual = {:.3e}", chain.closure_residual()),
                format!("max tangency residual = {:.3e}", chain.max_tangency_residual()),
            ];
            lines.extend(written(path));
            emit(&common, "build-bridge", params, result, &lines)?;
            Ok(0)
        }
        Command::BuildSquare { n, layout, curve, common } => {
            let opts = SquareOptions { family: family(&curve)?, eps_hi: curve.eps_hi, tol: tolerances(&common)? };
            let (piece, metrics) = assemble_square_piece(n as usize, layout, &opts)?;
            let meta = Metadata {
                construction: Some("square".into()),
                bridge_n: Some(n as usize),
                epsilon: Some(metrics.epsilon_used),
                lambda: Some(curve.lambda),
                layout: Some(layout.to_string()),
                ..Metadata::default()
            };
            let path = save_config(&common, &piece.config, &meta)?;
            let params = merge(
                json!({ "N": n, "layout": layout.as_str(), "lambda": curve.lambda, "eps_hi": curve.eps_hi }),
                common_params(&common),
            );
            let result = merge(serde_json::to_value(&metrics).expect("metrics"), json!({ "beta_observed": metrics.n_times_r }));
            let mut lines = vec![
                format!("n = {}", metrics.n),
                format!("r = {}", metrics.r),
                format!("n*r = {}", metrics.n_times_r),
                format!("epsilon = {}", metrics.epsilon_used),
                "verify: 0 movable discs".to_string(),
            ];
            lines.extend(written(path));
            emit(&common, "build-square", params, result, &lines)?;
            Ok(0)
        }
        Command::Junction { common } => {
            let piece = junction_piece();
            let meta = Metadata { construction: Some("junction".into()), ..Metadata::default() };
            let path = save_config(&common, &piece.config, &meta)?;
            let mut lines = vec![format!("discs = {}", piece.config.len())];
            lines.extend(written(path));
            emit(&common, "junction", common_params(&common), json!({ "discs": piece.config.len() }), &lines)?;
            Ok(0)
        }
        Command::FiveDisc { common } => {
            let cfg = five_disc_config();
            let meta = Metadata { construction: Some("five-disc".into()), ..Metadata::default() };
            let path = save_config(&common, &cfg, &meta)?;
            let mut lines = vec![format!("discs = 5"), format!("radius = {}", cfg.radius)];
            lines.extend(written(path));
            emit(&common, "five-disc", common_params(&common), json!({ "discs": 5, "radius": cfg.radius }), &lines)?;
            Ok(0)
        }
        Command::Tiling { window, common } => {
            let cfg = tiling_3_12_12(window as usize)?;
            let half = window as f64 * jampack_core::construction::tiling::EDGE;
            let d = density(&cfg, &Region::square(half))?;
            let meta = Metadata { construction: Some("tiling-3.12.12".into()), ..Metadata::default() };
            let path = save_config(&common, &cfg, &meta)?;
            let params = merge(json!({ "window": window }), common_params(&common));
            let result = json!({ "discs": cfg.len(), "density": d, "limit": tiling_density_limit() });
            let mut lines = vec![
                format!("discs = {}", cfg.len()),
                format!("density = {d}"),
                format!("limit = {}", tiling_density_limit()),
            ];
            lines.extend(written(path));
            emit(&common, "tiling", params, result, &lines)?;
            Ok(0)
        }
        Command::Verify { file, common } => {
            let tol = tolerances(&common)?;
            let cfg = load(&file)?;
            let report = verify_stable(&cfg, &tol)?;
            let movable = report.movable_discs();
            let params = merge(json!({ "file": file }), common_params(&common));
            let result = serde_json::to_value(&report).expect("report");
            let path = save_report(&common, &json!({ "command": "verify", "params": params, "result": result }))?;
            let mut lines = vec![
                format!("discs = {}", report.n),
                format!("contact edges = {}", report.contact_edges),
                format!("wall contacts = {}", report.wall_contacts),
                format!("movable = {}", report.movable_count),
                format!("rattlers = {}", report.rattler_count),
                format!("stable = {}", report.stable),
            ];
            for m in &movable {
                lines.push(match (m.witness, m.cone) {
                    (Some(w), Some((lo, hi))) => format!(
                        "  disc {}: witness {:.3} deg, escape cone [{:.3}, {:.3}] deg",
                        m.index,
                        w.angle().to_degrees(),
                        lo.to_degrees(),
                        hi.to_degrees()
                    ),
                    _ => format!("  disc {}: no contacts", m.index),
                });
            }
            lines.extend(written(path));
            emit(&common, "verify", params, result, &lines)?;
            Ok(if report.stable { 0 } else { 2 })
        }
        Command::Simulate { file, chain, shrink, common } => {
            let cfg = shrink_radius(&load(&file)?, shrink)?;
            check_valid(&cfg, common.tol)?;
            let params = chain_params(&chain, &cfg);
            let (_, stats) = run_chain(&cfg, &params)?;
            let p = merge(
                json!({ "file": file, "steps": params.steps, "seed": params.seed, "step_radius": params.step_radius,
                        "shrink": shrink, "record_interval": params.record_interval, "rng": RNG_ALGORITHM }),
                common_params(&common),
            );
            let result = serde_json::to_value(&stats).expect("stats");
            let path = save_report(&common, &json!({ "command": "simulate", "params": p, "result": result }))?;
            let mut lines = vec![
                format!("proposed = {}", stats.proposed),
                format!("accepted = {}", stats.accepted),
                format!("acceptance rate = {}", stats.acceptance_rate),
                format!("max displacement = {}", stats.max_center_displacement),
            ];
            lines.extend(written(path));
            emit(&common, "simulate", p, result, &lines)?;
            Ok(0)
        }
        Command::Escape { file, chain, shrink, common } => {
            let cfg = load(&file)?;
            check_valid(&cfg, common.tol)?;
            let params = chain_params(&chain, &cfg);
            let rows = escape_experiment(&cfg, &shrink, &params)?;
            let p = merge(
                json!({ "file": file, "steps": params.steps, "seed": params.seed, "step_radius": params.step_radius,
                        "shrink": shrink, "rng": RNG_ALGORITHM }),
                common_params(&common),
            );
            let result = serde_json::to_value(&rows).expect("rows");
            let path = save_report(&common, &json!({ "command": "escape", "params": p, "result": result }))?;
            let mut lines = vec!["factor    accepted    rate".to_string()];
            for r in &rows {
                lines.push(format!("{:<9} {:<11} {}", r.factor, r.stats.accepted, r.stats.acceptance_rate));
            }
            lines.extend(written(path));
            emit(&common, "escape", p, result, &lines)?;
            Ok(0)
        }
        Command::Density { file, window, common } => {
            let cfg = load(&file)?;
            let region = match window {
                Some(w) => Region::square(w),
                None => {
                    let c = cfg.container;
                    match (c.x_min, c.x_max, c.y_min, c.y_max) {
                        (Some(x_min), Some(x_max), Some(y_min), Some(y_max)) => Region { x_min, x_max, y_min, y_max },
                        _ => return Err(Error::InvalidParameter { name: "window", reason: "required for unbounded containers".into() }),
                    }
                }
            };
            let d = density(&cfg, &region)?;
            let p = merge(json!({ "file": file, "window": window }), common_params(&common));
            let result = json!({ "density": d, "discs": cfg.len(),
                                 "region": [region.x_min, region.x_max, region.y_min, region.y_max] });
            let path = save_report(&common, &json!({ "command": "density", "params": p, "result": result }))?;
            let mut lines = vec![format!("density = {d}")];
            lines.extend(written(path));
            emit(&common, "density", p, result, &lines)?;
            Ok(0)
        }
        Command::Render { file, contacts, jamming, common } => {
            let cfg = load(&file)?;
            let opts = SvgOptions { contacts, jamming, tol: tolerances(&common)?, ..SvgOptions::default() };
            let svg = io::render_svg(&cfg, &opts);
            let out = resolve_out(&common.out.clone().unwrap_or_else(|| file.with_extension("svg")));
            std::fs::write(&out, svg).map_err(|source| Error::Io { path: out.clone(), source })?;
            let p = merge(json!({ "file": file, "contacts": contacts, "jamming": jamming }), common_params(&common));
            let lines = vec![format!("wrote {}", out.display())];
            emit(&common, "render", p, json!({ "svg": out, "circles": cfg.len() }), &lines)?;
            Ok(0)
        }
    }
}

fn chain_params(chain: &ChainArgs, cfg: &Configuration) -> ChainParams {
    ChainParams::new(chain.steps, chain.step_radius.unwrap_or(cfg.radius), chain.seed)
}
