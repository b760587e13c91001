use std::f64::consts::PI;

use serde_json::{json, Value};

use isosector::cgc::{self, UndularySpec};
use isosector::disk::{self, DiskDensity, DiskKind};
use isosector::measures::PowerDensity;
use isosector::oracle::{self, ClassifyOptions, CURVATURE_CUTOFF};
use isosector::rn::{self, star, RadialProfile};
use isosector::sector::{self, Classification, SectorKind};

use crate::report::{self, emit, json_document, num, opt_num, to_json, unsupported, Format, Series, Table};
use crate::{acceptance, domain, CliError, Command, Grid, Output};

pub const PHASE_HEADER: &[&str] = &["p", "theta0", "winner", "arc_ratio", "semi_ratio", "und_ratio", "margin"];
pub const PERIOD_HEADER: &[&str] = &["p", "r1", "half_period"];
const DISK_HEADER: &[&str] = &[
    "a",
    "theta0",
    "area",
    "winner",
    "margin",
    "arc_inside",
    "arc_enclosing",
    "annulus",
    "bite",
    "edge_semicircle",
    "enclosing_semicircle",
    "tangent_semicircle",
];
/// Sampling density of SVG curves.
const SVG_MIN_POINTS: usize = 512;

pub fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Classify { p, theta, output } => classify(p, theta, &output),
        Command::Phase { p_grid, theta_grid, output } => phase(&p_grid, &theta_grid, &output),
        Command::Period { p, r1_grid, output } => {
            let text = match output.format {
                Format::Csv => period_csv(p, &r1_grid)?,
                Format::Json => period_json(p, &r1_grid)?,
                f => return Err(unsupported("period", f)),
            };
            emit(&text, output.out.as_deref())
        }
        Command::Undulary { p, theta, r1, nodes, output } => undulary(p, theta, r1, nodes, &output),
        Command::Inequality { p, theta, trials, seed, floor, output } => {
            inequality_cmd(p, theta, trials, seed, floor, &output)
        }
        Command::Disk { a, theta, area, area_grid, thresholds, output } => {
            disk_cmd(a, theta, area, area_grid, thresholds, &output)
        }
        Command::DiskCurves { a_grid, deficit, output } => disk_curves(&a_grid, deficit, &output),
        Command::RnCheck { n, profile, grid_size, trials, amplitude, seed, output } => {
            rn_check(n, &profile, grid_size, trials, amplitude, seed, &output)
        }
        Command::RnDemo { n, p, volume, radii, output } => rn_demo(n, p, volume, &radii, &output),
        Command::Oracle { p, theta, area, starts, nodes, seed, output } => {
            oracle_cmd(p, theta, ClassifyOptions { area, starts, node_count: nodes, seed }, &output)
        }
        Command::Validate { seed, output } => validate(seed, &output),
    }
}

pub fn classification_row(c: &Classification) -> Vec<String> {
    vec![
        num(c.p),
        num(c.theta0),
        c.winner.name().into(),
        opt_num(c.ratio_of(SectorKind::Arc)),
        opt_num(c.ratio_of(SectorKind::Semicircle)),
        opt_num(c.ratio_of(SectorKind::Undulary)),
        num(c.margin),
    ]
}

fn classify(p: f64, theta: f64, output: &Output) -> Result<(), CliError> {
    let c = sector::classify_sector(PowerDensity::new(p), theta).map_err(domain)?;
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(PHASE_HEADER);
            t.push(classification_row(&c));
            t.render()
        }
        Format::Json => json_document("classify", vec![("result", to_json(&c)?)]),
        f => return Err(unsupported("classify", f)),
    };
    emit(&text, output.out.as_deref())
}

fn phase(p_grid: &Grid, theta_grid: &Grid, output: &Output) -> Result<(), CliError> {
    let ps = p_grid.points();
    let ts = theta_grid.points();
    let cells = sector::phase_sweep(&ps, &ts);
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(PHASE_HEADER);
            for cell in &cells {
                match &cell.result {
                    Ok(c) => t.push(classification_row(c)),
                    Err(_) => t.push(vec![
                        num(cell.p),
                        num(cell.theta0),
                        "error".into(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ]),
                }
            }
            t.render()
        }
        Format::Json => json_document(
            "phase",
            vec![
                ("p_grid", json!(p_grid.to_string())),
                ("theta_grid", json!(theta_grid.to_string())),
                ("cells", to_json(&cells)?),
            ],
        ),
        Format::Svg => {
            report::cells_svg("winner by (theta0, p)", &ts, &ps, |i, j| match &cells[j * ts.len() + i].result {
                Ok(c) => c.winner.name(),
                Err(_) => "error",
            })
        }
    };
    emit(&text, output.out.as_deref())
}

fn period_rows(p: f64, grid: &Grid) -> Result<Vec<(f64, f64)>, CliError> {
    let d = PowerDensity::new(p);
    grid.points().into_iter().map(|r1| cgc::half_period(r1, d).map(|t| (r1, t)).map_err(domain)).collect()
}

pub fn period_csv(p: f64, grid: &Grid) -> Result<String, CliError> {
    let mut t = Table::new(PERIOD_HEADER);
    for (r1, half) in period_rows(p, grid)? {
        t.push(vec![num(p), num(r1), num(half)]);
    }
    Ok(t.render())
}

fn period_json(p: f64, grid: &Grid) -> Result<String, CliError> {
    let rows = period_rows(p, grid)?;
    let (lo, hi) = cgc::half_period_limits(PowerDensity::new(p));
    Ok(json_document(
        "period",
        vec![
            ("p", json!(p)),
            ("r1", json!(rows.iter().map(|r| r.0).collect::<Vec<_>>())),
            ("half_period", json!(rows.iter().map(|r| r.1).collect::<Vec<_>>())),
            ("limits", json!([lo, hi])),
        ],
    ))
}

fn undulary(p: f64, theta: Option<f64>, r1: Option<f64>, nodes: usize, output: &Output) -> Result<(), CliError> {
    let d = PowerDensity::new(p);
    let spec = match (theta, r1) {
        (Some(t), _) => cgc::solve_equilibrium_undulary(t, d).map_err(domain)?,
        (None, Some(r)) => UndularySpec::new(r, d).map_err(domain)?,
        (None, None) => return Err(CliError::Usage("one of --theta or --r1 is required".into())),
    };
    let nodes = if output.format == Format::Svg { nodes.max(SVG_MIN_POINTS) } else { nodes };
    let g = cgc::integrate_undulary(&spec, nodes).map_err(domain)?;
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(&["theta", "r", "x", "y"]);
            for (&th, &r) in g.theta().iter().zip(g.radius()) {
                t.push(vec![num(th), num(r), num(r * th.cos()), num(r * th.sin())]);
            }
            t.render()
        }
        Format::Json => json_document(
            "undulary",
            vec![
                ("spec", to_json(&spec)?),
                ("half_period", json!(g.theta0())),
                ("theta", json!(g.theta())),
                ("radius", json!(g.radius())),
            ],
        ),
        Format::Svg => report::sector_svg(
            &format!("undulary p={p} r1={}", spec.r1),
            g.theta0(),
            &[Series {
                points: g.theta().iter().copied().zip(g.radius().iter().copied()).collect(),
                stroke: "#dd8452",
                label: format!("lambda={}", spec.lambda),
            }],
        ),
    };
    emit(&text, output.out.as_deref())
}

fn inequality_cmd(
    p: f64,
    theta: Option<f64>,
    trials: usize,
    seed: u64,
    floor: f64,
    output: &Output,
) -> Result<(), CliError> {
    let theta0 = theta.unwrap_or(PI / (p + 1.0));
    let s = sector::inequality_suite(PowerDensity::new(p), theta0, trials, seed, floor).map_err(domain)?;
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(&["p", "theta0", "trials", "violations", "worst_gap"]);
            t.push(vec![num(p), num(theta0), s.trials.to_string(), s.violations.to_string(), num(s.worst_gap)]);
            t.render()
        }
        Format::Json => json_document(
            "inequality",
            vec![("p", json!(p)), ("theta0", json!(theta0)), ("seed", json!(seed)), ("result", to_json(&s)?)],
        ),
        f => return Err(unsupported("inequality", f)),
    };
    emit(&text, output.out.as_deref())
}

fn disk_cmd(
    a: f64,
    theta: f64,
    area: Option<f64>,
    area_grid: Option<Grid>,
    thresholds: bool,
    output: &Output,
) -> Result<(), CliError> {
    let dd = DiskDensity::new(a).map_err(domain)?;
    if thresholds {
        let th = disk::transition_thresholds(dd, theta).map_err(domain)?;
        let text = match output.format {
            Format::Csv => {
                let mut t =
                    Table::new(&["a", "theta0", "small_area_winner", "first_area", "second_area", "large_area"]);
                let names: Vec<&str> = th.small_area_winners.iter().map(|k| k.name()).collect();
                t.push(vec![
                    num(a),
                    num(theta),
                    names.join("+"),
                    opt_num(th.first.map(|c| c.area)),
                    opt_num(th.second.map(|c| c.area)),
                    opt_num(th.large),
                ]);
                t.render()
            }
            Format::Json => json_document("disk", vec![("thresholds", to_json(&th)?)]),
            f => return Err(unsupported("disk", f)),
        };
        return emit(&text, output.out.as_deref());
    }
    let areas = match (area, area_grid) {
        (Some(x), _) => vec![x],
        (None, Some(g)) => g.points(),
        (None, None) => return Err(CliError::Usage("one of --area, --area-grid or --thresholds is required".into())),
    };
    let rows =
        areas.iter().map(|&x| disk::classify_disk(dd, theta, x).map_err(domain)).collect::<Result<Vec<_>, _>>()?;
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(DISK_HEADER);
            for c in &rows {
                let mut row = vec![num(c.a), num(c.theta0), num(c.area), c.winner_names(), num(c.margin)];
                row.extend(DiskKind::ALL.iter().map(|&k| opt_num(c.perimeter_of(k))));
                row.push(opt_num(c.tangent.map(|t| t.perimeter)));
                t.push(row);
            }
            t.render()
        }
        Format::Json => json_document("disk", vec![("rows", to_json(&rows)?)]),
        f => return Err(unsupported("disk", f)),
    };
    emit(&text, output.out.as_deref())
}

fn disk_curves(a_grid: &Grid, deficit: f64, output: &Output) -> Result<(), CliError> {
    let rows = disk::transition_curves_sweep(&a_grid.points(), deficit).map_err(domain)?;
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(&["a", "f_theta", "g_theta"]);
            for r in &rows {
                t.push(vec![num(r.a), num(r.f_theta), opt_num(r.g_theta.as_ref().ok().copied())]);
            }
            t.render()
        }
        Format::Json => json_document("disk-curves", vec![("deficit", json!(deficit)), ("rows", to_json(&rows)?)]),
        Format::Svg => report::xy_svg(
            "transition curves: theta0 against a",
            &[
                Series {
                    points: rows.iter().map(|r| (r.a, r.f_theta)).collect(),
                    stroke: "#4c72b0",
                    label: "f".into(),
                },
                Series {
                    points: rows.iter().filter_map(|r| r.g_theta.as_ref().ok().map(|&g| (r.a, g))).collect(),
                    stroke: "#c44e52",
                    label: "g".into(),
                },
            ],
        ),
    };
    emit(&text, output.out.as_deref())
}

/// Sphere-grid size used for averaging trials in Rⁿ.
pub fn averaging_nodes(n: usize) -> usize {
    if n == 2 {
        256
    } else {
        800
    }
}

fn rn_check(
    n: usize,
    profile: &str,
    grid_size: usize,
    trials: usize,
    amplitude: f64,
    seed: u64,
    output: &Output,
) -> Result<(), CliError> {
    let prof = RadialProfile::from_name(n, profile).map_err(domain)?;
    let verdict = rn::betta_convexity_check(&prof, grid_size).map_err(domain)?;
    let suite = if trials > 0 {
        Some(star::averaging_suite(&prof, averaging_nodes(n), trials, amplitude, seed).map_err(domain)?)
    } else {
        None
    };
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(&[
                "n",
                "profile",
                "betta_convex",
                "worst_second_difference",
                "scale",
                "trials",
                "failures",
                "worst_jensen_gap",
            ]);
            t.push(vec![
                n.to_string(),
                prof.name(),
                verdict.convex.to_string(),
                num(verdict.worst_second_difference),
                num(verdict.scale),
                suite.map(|s| s.trials.to_string()).unwrap_or_default(),
                suite.map(|s| s.failures.to_string()).unwrap_or_default(),
                opt_num(suite.map(|s| s.worst_jensen_gap)),
            ]);
            t.render()
        }
        Format::Json => json_document(
            "rn-check",
            vec![
                ("n", json!(n)),
                ("profile", json!(prof.name())),
                ("betta", to_json(&verdict)?),
                ("averaging", to_json(&suite)?),
            ],
        ),
        f => return Err(unsupported("rn-check", f)),
    };
    emit(&text, output.out.as_deref())
}

fn rn_demo(n: usize, p: f64, volume: f64, radii: &Grid, output: &Output) -> Result<(), CliError> {
    let rows = rn::vanishing_perimeter_demo(n, p, volume, &radii.points()).map_err(domain)?;
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(&["n", "p", "radius", "h", "volume", "perimeter"]);
            for r in &rows {
                t.push(vec![n.to_string(), num(p), num(r.radius), num(r.h), num(r.volume), num(r.perimeter)]);
            }
            t.render()
        }
        Format::Json => json_document("rn-demo", vec![("n", json!(n)), ("p", json!(p)), ("rows", to_json(&rows)?)]),
        f => return Err(unsupported("rn-demo", f)),
    };
    emit(&text, output.out.as_deref())
}

fn oracle_cmd(p: f64, theta: f64, opts: ClassifyOptions, output: &Output) -> Result<(), CliError> {
    let out = oracle::oracle_classify(p, theta, opts).map_err(domain)?;
    let closed = sector::classify_sector(PowerDensity::new(p), theta).map_err(domain)?;
    let spread = oracle::curvature_spread(&out.best, p, CURVATURE_CUTOFF).ok();
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(&[
                "p",
                "theta0",
                "oracle_winner",
                "classifier_winner",
                "oracle_ratio",
                "converged",
                "iterations",
                "gradient_norm",
                "curvature_dispersion",
            ]);
            t.push(vec![
                num(p),
                num(theta),
                out.winner.name().into(),
                closed.winner.name().into(),
                num(out.ratio),
                out.best.converged.to_string(),
                out.best.iterations.to_string(),
                num(out.best.gradient_norm),
                opt_num(spread.map(|s| s.relative())),
            ]);
            t.render()
        }
        Format::Json => json_document(
            "oracle",
            vec![
                ("result", to_json(&out)?),
                ("classifier_winner", json!(closed.winner.name())),
                ("curvature", to_json(&spread)?),
            ],
        ),
        Format::Svg => report::sector_svg(
            &format!("oracle p={p} theta0={theta}: {}", out.winner.name()),
            theta,
            &[Series {
                points: out.best.curve.theta().iter().copied().zip(out.best.curve.radius().iter().copied()).collect(),
                stroke: "#55a868",
                label: format!("start {}", out.starts[out.best_start].init),
            }],
        ),
    };
    emit(&text, output.out.as_deref())
}

fn validate(seed: u64, output: &Output) -> Result<(), CliError> {
    let reports = acceptance::run_suite(seed);
    let failed = reports.iter().filter(|r| !r.passed).count();
    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(&["id", "criterion", "status", "detail"]);
            for r in &reports {
                t.push(vec![r.id.to_string(), r.title.into(), r.status().into(), r.detail.clone()]);
            }
            t.render()
        }
        Format::Json => json_document(
            "validate",
            vec![
                ("seed", json!(seed)),
                ("criteria", Value::Array(reports.iter().map(to_json).collect::<Result<_, _>>()?)),
                ("failed", json!(failed)),
            ],
        ),
        f => return Err(unsupported("validate", f)),
    };
    emit(&text, output.out.as_deref())?;
    for r in &reports {
        eprintln!("{}", r.line());
    }
    if failed > 0 {
        return Err(CliError::Domain(format!("{failed} acceptance criteria failed")));
    }
    Ok(())
}
