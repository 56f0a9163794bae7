use crate::output::{out_paths, render, Format, Table, Value};
use crate::Command;
use exord::asymptotics::{self, NigRow};
use exord::distributions::{parse_model, Level};
use exord::expectiles::{equispaced, expectile, ier, iqr, ExpectileCurve};
use exord::orders::{self, GridSpec, OrderVerdict};
use exord::simulation::{run_clt_experiment, EstimatorKind, ExperimentConfig};
use exord::skewness::{skewness_grid, skewness_profile, ANALYTIC_TOL};
use exord::ContinuousModel;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] exord::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    /// A built-in consistency check on the output failed.
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) if e.is_domain() => 2,
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OrderName {
    St,
    Expectile,
    Cx,
    Icx,
    C,
    ExpectileC,
    S,
    Sf,
    MuD,
    Disp,
    WDisp,
    WDispMedian,
    EDisp,
    WeDisp,
    EDispComposite,
    Dil,
    DilTailMean,
    DeltaEx,
}

/// Run a subcommand: print its resolved configuration to stderr, compute
/// every table, then write them in one go.
pub fn run(command: &Command, format: Format, full: bool, out: Option<&Path>) -> Result<()> {
    let (config, tables) = execute(command)?;
    for (k, v) in &config {
        eprintln!("# {k} = {v}");
    }
    match out {
        None => print!("{}", render(&tables, format, full)?),
        Some(path) => {
            for (table, p) in tables.iter().zip(out_paths(path, &tables, format)) {
                let text = render(std::slice::from_ref(table), format, full)?;
                std::fs::write(&p, text).map_err(|source| CliError::Io {
                    path: p.display().to_string(),
                    source,
                })?;
                eprintln!("# wrote {}", p.display());
            }
        }
    }
    Ok(())
}

type Config = Vec<(String, String)>;

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn execute(command: &Command) -> Result<(Config, Vec<Table>)> {
    match command {
        Command::Eval { spec, alpha } => eval(spec, alpha),
        Command::Skew { spec, alpha, grid } => skew(spec, alpha, *grid),
        Command::Order {
            order,
            x,
            y,
            grid,
            tail_decades,
        } => order_cmd(*order, x, y, *grid, *tail_decades),
        Command::Table1 => table_t(false),
        Command::Table2 => table_t(true),
        Command::Table3 { symmetric_iqr } => table3(*symmetric_iqr),
        Command::NormalSare => normal_sare(),
        Command::LomaxCase { grid } => lomax_case(*grid),
        Command::Figure2 { grid } => figure2(*grid),
        Command::Clt {
            config,
            model,
            estimator,
            alpha,
            n,
            replications,
            seed,
            estimates,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    ExperimentConfig::parse(&text)?
                }
                None => ExperimentConfig::default(),
            };
            if let Some(m) = model {
                cfg.model = m.clone();
            }
            if let Some(e) = estimator {
                cfg.estimator = EstimatorKind::parse(e)?;
            }
            if let Some(a) = alpha {
                cfg.alpha = *a;
            }
            if let Some(n) = n {
                cfg.n = *n;
            }
            if let Some(r) = replications {
                cfg.replications = *r;
            }
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            clt(&cfg, *estimates)
        }
    }
}

fn model_config(spec: &str) -> Result<(ContinuousModel, Config)> {
    let model = parse_model(spec)?;
    let config = vec![kv("model", &model)];
    Ok((model, config))
}

fn eval(spec: &str, alphas: &[f64]) -> Result<(Config, Vec<Table>)> {
    let (model, mut config) = model_config(spec)?;
    config.push(kv("alpha", list(alphas)));
    let mean = model.mean()?;
    let mad = model.mad()?;
    config.push(kv("mean", mean));
    config.push(kv("mad", mad));
    let mut t = Table::new(
        "eval",
        &["alpha", "e_alpha", "e_1-alpha", "q_alpha", "q_1-alpha", "ier", "iqr", "mad"],
    );
    for &a in alphas {
        let l = Level::new(a)?;
        t.push(vec![
            a.into(),
            expectile(&model, a)?.into(),
            expectile(&model, 1.0 - a)?.into(),
            model.quantile_level(l).into(),
            model.quantile_level(l.mirror()).into(),
            ier(&model, a)?.into(),
            iqr(&model, a)?.into(),
            mad.into(),
        ]);
    }
    Ok((config, vec![t]))
}

fn skew(spec: &str, alphas: &[f64], grid: usize) -> Result<(Config, Vec<Table>)> {
    let (model, mut config) = model_config(spec)?;
    let alphas = if alphas.is_empty() {
        if grid == 49 {
            skewness_grid()
        } else {
            equispaced(0.01, 0.49, grid)
        }
    } else {
        alphas.to_vec()
    };
    config.push(kv("alpha", list(&alphas)));
    config.push(kv("tolerance", ANALYTIC_TOL));
    let p = skewness_profile(&model, &alphas, ANALYTIC_TOL)?;
    let mut t = Table::new("profile", &["alpha", "s2_tilde", "s2"]);
    for i in 0..p.alphas.len() {
        t.push(vec![p.alphas[i].into(), p.s2_tilde[i].into(), p.s2[i].into()]);
    }
    let mut s = Table::new("summary", &["model", "classification"]);
    s.push(vec![model.to_string().into(), format!("{:?}", p.classification).into()]);
    Ok((config, vec![t, s]))
}

fn verdict_table(v: &OrderVerdict) -> Table {
    let mut t = Table::new(
        "verdict",
        &[
            "order",
            "verdict",
            "margin",
            "points",
            "grid",
            "witness_point",
            "witness_lhs",
            "witness_rhs",
            "witness_tolerance",
        ],
    );
    let w = v.witness.as_ref();
    let point = w.map(|w| {
        w.point
            .iter()
            .map(|(k, x)| format!("{k}={x:e}"))
            .collect::<Vec<_>>()
            .join(";")
    });
    t.push(vec![
        v.order.clone().into(),
        format!("{:?}", v.verdict).into(),
        v.margin.into(),
        v.points.into(),
        v.grid.clone().into(),
        point.unwrap_or_default().into(),
        w.map(|w| w.lhs).into(),
        w.map(|w| w.rhs).into(),
        w.map(|w| w.tolerance).into(),
    ]);
    t
}

fn order_cmd(order: OrderName, x: &str, y: &str, levels: usize, tail: u32) -> Result<(Config, Vec<Table>)> {
    let mx = parse_model(x)?;
    let my = parse_model(y)?;
    let grid = GridSpec {
        levels,
        tail_decades: tail,
        ..GridSpec::default()
    };
    let config = vec![
        kv("order", clap::ValueEnum::to_possible_value(&order).expect("no skipped variants").get_name()),
        kv("x", &mx),
        kv("y", &my),
        kv("levels", levels),
        kv("pair_levels", grid.pair_levels),
        kv("tail_decades", tail),
    ];
    use OrderName::*;
    let v = match order {
        St => orders::check_st(&mx, &my, &grid),
        Expectile => orders::check_expectile_order(&mx, &my, &grid)?,
        Cx => orders::check_cx(&mx, &my, &grid)?,
        Icx => orders::check_icx(&mx, &my, &grid)?,
        C => orders::check_convex_transform(&mx, &my, &grid),
        ExpectileC => orders::check_expectile_convex_transform(&mx, &my, &grid)?,
        S => orders::check_s_order(&mx, &my, &grid)?,
        Sf => orders::check_sf(&mx, &my, None)?,
        Disp => orders::check_disp(&mx, &my, &grid),
        WDisp => orders::check_w_disp(&mx, &my, &grid),
        WDispMedian => orders::check_w_disp_median(&mx, &my, &grid),
        EDisp => orders::check_e_disp(&mx, &my, &grid)?,
        WeDisp => orders::check_we_disp(&mx, &my, &grid)?,
        EDispComposite => orders::check_e_disp_composite(&mx, &my, None)?,
        Dil => orders::check_dil(&mx, &my, &grid)?,
        DilTailMean => orders::check_dil_tail_mean(&mx, &my, &grid)?,
        DeltaEx => orders::check_delta_ex(&mx, &my, &grid)?,
        MuD => {
            let c = orders::check_mu_d_crossings(&mx, &my)?;
            let mut t = Table::new(
                "crossings",
                &["left", "right", "endpoint", "points_per_side", "ordered"],
            );
            t.push(vec![
                c.left.into(),
                c.right.into(),
                c.endpoint.into(),
                c.points_per_side.into(),
                c.is_ordered().into(),
            ]);
            return Ok((config, vec![t]));
        }
    };
    Ok((config, vec![verdict_table(&v)]))
}

fn report_columns(estimators: &[asymptotics::Estimator]) -> Vec<String> {
    estimators.iter().map(|e| e.to_string()).collect()
}

fn table_t(sare: bool) -> Result<(Config, Vec<Table>)> {
    let reports = asymptotics::t_table()?;
    let est = &asymptotics::T_TABLE_ESTIMATORS;
    let mut cols = vec!["model".to_string()];
    cols.extend(report_columns(est));
    if sare {
        cols.push("best".into());
    }
    let cols_ref: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new(if sare { "table2" } else { "table1" }, &cols_ref);
    if sare {
        for row in asymptotics::sare_table(&reports) {
            let mut r: Vec<Value> = vec![row.model.clone().into()];
            r.extend(row.values.iter().map(|&v| Value::from(v)));
            r.push(row.best.map(|b| est[b].to_string()).unwrap_or_default().into());
            t.push(r);
        }
    } else {
        for rep in &reports {
            let mut r: Vec<Value> = vec![rep.model.clone().into()];
            r.extend(rep.values.iter().map(|&v| Value::from(v)));
            t.push(r);
        }
    }
    let config = vec![
        kv("degrees_of_freedom", list(&asymptotics::T_TABLE_DF)),
        kv("estimators", cols[1..1 + est.len()].join(",")),
    ];
    Ok((config, vec![t]))
}

fn table3(symmetric_iqr: bool) -> Result<(Config, Vec<Table>)> {
    let rows: Vec<NigRow> = if symmetric_iqr {
        asymptotics::nig_table_symmetric_iqr()?
    } else {
        asymptotics::nig_table()?
    };
    let est = &asymptotics::NIG_TABLE_ESTIMATORS;
    let mut cols = vec!["alpha".to_string(), "beta".into(), "m3".into(), "m4".into()];
    cols.extend(report_columns(est));
    let cols_ref: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new("table3", &cols_ref);
    for row in &rows {
        let mut r: Vec<Value> = vec![row.alpha.into(), row.beta.into(), row.m3.into(), row.m4.into()];
        r.extend(row.report.values.iter().map(|&v| Value::from(v)));
        t.push(r);
    }
    let config = vec![
        kv("standardization", "mean 0, variance 1"),
        kv("iqr_variance", if symmetric_iqr { "symmetric-law form" } else { "general form" }),
    ];
    Ok((config, vec![t]))
}

fn normal_sare() -> Result<(Config, Vec<Table>)> {
    let s = asymptotics::normal_sare()?;
    let mut t = Table::new("normal_sare", &["quantity", "value", "alpha"]);
    t.push(vec!["sARE(Q)".into(), s.iqr_quarter.into(), 0.25.into()]);
    t.push(vec!["max sARE(Q)".into(), s.iqr_max.into(), s.iqr_argmax.into()]);
    t.push(vec!["sARE(E)".into(), s.ier_quarter.into(), 0.25.into()]);
    t.push(vec!["max sARE(E)".into(), s.ier_max.into(), s.ier_argmax.into()]);
    Ok((vec![kv("model", "normal(0, 1)"), kv("search", "golden section on [0.01, 0.49]")], vec![t]))
}

fn lomax_case(points: usize) -> Result<(Config, Vec<Table>)> {
    if points < 2 {
        return Err(exord::Error::Domain("the composite grid needs at least two points".into()).into());
    }
    let x = ContinuousModel::lomax(3.0, 3f64.sqrt())?;
    let y = ContinuousModel::lomax(2.0, 1.0)?;
    let config = vec![kv("x", &x), kv("y", &y), kv("EX", x.mean()?), kv("EY", y.mean()?)];

    let mut ier_t = Table::new("ier", &["p", "E_p(X)", "E_p(Y)"]);
    let cx = ExpectileCurve::new(&x)?;
    let cy = ExpectileCurve::new(&y)?;
    for i in 1..100 {
        let p = i as f64 / 200.0;
        let (ex, ey) = (cx.ier(p)?, cy.ier(p)?);
        if !(ex < ey) {
            return Err(CliError::Check(format!("IER dominance fails at p = {p}: {ex} ≥ {ey}")));
        }
        ier_t.push(vec![p.into(), ex.into(), ey.into()]);
    }

    let lo = expectile(&x, 0.005)?;
    let hi = expectile(&x, 0.995)?;
    let xs = equispaced(lo, hi, points);
    let curve = orders::e_disp_composite(&x, &y, &xs)?;
    if let Some(w) = curve.windows(2).find(|w| w[1].1 - w[0].1 <= -1e-9) {
        return Err(CliError::Check(format!(
            "composite decreases between x = {} and x = {}",
            w[0].0, w[1].0
        )));
    }
    let mut comp = Table::new("composite", &["x", "e_Y(F_X(x))-x"]);
    for (a, b) in curve {
        comp.push(vec![a.into(), b.into()]);
    }
    Ok((config, vec![ier_t, comp]))
}

fn figure2(points: usize) -> Result<(Config, Vec<Table>)> {
    let mut t = Table::new("figure2", &["alpha", "tau2_Q", "tau2_E"]);
    for (a, q, e) in asymptotics::figure2(points)? {
        t.push(vec![a.into(), q.into(), e.into()]);
    }
    Ok((vec![kv("model", "normal(0, 1)"), kv("points", points)], vec![t]))
}

fn clt(cfg: &ExperimentConfig, with_estimates: bool) -> Result<(Config, Vec<Table>)> {
    let config: Config = cfg
        .to_kv()
        .lines()
        .filter_map(|l| l.split_once(" = ").map(|(k, v)| kv(k, v)))
        .collect();
    let r = run_clt_experiment(cfg)?;
    let mut t = Table::new(
        "summary",
        &[
            "model",
            "estimator",
            "alpha",
            "n",
            "replications",
            "seed",
            "target",
            "mean",
            "asv",
            "scaled_variance",
            "scaled_variance_se",
            "relative_error",
            "z_skewness",
            "z_excess_kurtosis",
        ],
    );
    t.push(vec![
        cfg.model.clone().into(),
        cfg.estimator().to_string().into(),
        cfg.alpha.into(),
        cfg.n.into(),
        cfg.replications.into(),
        cfg.seed.into(),
        r.target.into(),
        r.mean.into(),
        r.asv.into(),
        r.scaled_variance.into(),
        r.scaled_variance_se.into(),
        r.relative_error.into(),
        r.z_summary.skewness.into(),
        r.z_summary.excess_kurtosis.into(),
    ]);
    let mut tables = vec![t];
    if with_estimates {
        let mut e = Table::new("estimates", &["replication", "estimate", "z"]);
        for (i, (est, z)) in r.estimates.iter().zip(&r.z_scores).enumerate() {
            e.push(vec![i.into(), (*est).into(), (*z).into()]);
        }
        tables.push(e);
    }
    Ok((config, tables))
}
