use std::io::Read;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use quasimicro_core::estimate::{
    garch_fit, garch_simulate, hill_tail_exponent, jls_fit, kinematic_crossover, regime_slopes,
    GarchSpec, JlsSearch, DEFAULT_TAIL_FRACTION,
};
use quasimicro_core::simulate::{
    fund_ecology_volumes, impact_tick_stream, jls_path, kinematic_displacements,
    two_population_ticks, wiener_path, CrashHazard, FundEcology, HazardParams, ImpactTickParams,
    JlsPathConfig, KinematicConfig, Regime, TwoPopulationConfig, WienerConfig,
};
use quasimicro_core::{Error, PriceSeries, RandomSource, ReturnSeries};

use crate::args::{FitInput, FitKind, SimulateKind};
use crate::csv_io::{Table, ValueKind};
use crate::{envelope, to_json, verify, CliError, Output, RunContext};

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("model results serialize")
}

fn with_ref(mut v: Value, model_ref: &str) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("model_ref".into(), model_ref.into());
    }
    v
}

fn usize_of(n: u64) -> Result<usize, CliError> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("n = {n} is too large")))
}

/// CSV body with a metadata sidecar, or one JSON document holding both.
fn series_output(ctx: &RunContext, table: Table, meta: Value) -> Output {
    let config = ctx.settings.echo();
    if ctx.json() {
        let key = match table.kind {
            ValueKind::Price => "price",
            ValueKind::Value => "value",
        };
        let mut results = json!({ "t": table.t, key: table.values });
        if let Some(labels) = table.labels {
            results["regime"] = labels.into();
        }
        results["metadata"] = meta;
        Output {
            body: to_json(&envelope(ctx.seed, config, results)),
            meta: None,
            exit_code: 0,
        }
    } else {
        Output {
            body: table.to_csv(),
            meta: Some(to_json(&envelope(ctx.seed, config, meta))),
            exit_code: 0,
        }
    }
}

pub fn simulate(kind: &SimulateKind, ctx: &mut RunContext) -> Result<Output, CliError> {
    let seed = ctx.seed;
    let s = &mut ctx.settings;
    let (table, meta) = match kind {
        SimulateKind::Wiener(a) => {
            s.record("command", "simulate wiener".into());
            let cfg = WienerConfig {
                mu0: s.get("mu", a.mu, 0.0)?,
                h0: s.get("h", a.h, 1e-4)?,
                p0: s.get("p0", a.p0, 1.0)?,
                n: usize_of(s.get("n", a.n, 1000)?)?,
                dt: s.get("dt", a.dt, 1.0)?,
            };
            let path = wiener_path(&cfg, &mut RandomSource::named(seed, "simulate.wiener"))?;
            let table = Table::new(ValueKind::Price, path.times().to_vec(), path.prices().to_vec());
            (table, json!({}))
        }
        SimulateKind::Jls(a) => {
            s.record("command", "simulate jls".into());
            let hazard = match s.get_opt("hazard", a.hazard)? {
                Some(h) => CrashHazard::Constant(h),
                None => CrashHazard::LogPeriodic(HazardParams::new(
                    s.get("b-prime", a.b_prime, 0.001)?,
                    s.get("c-prime", a.c_prime, 0.0005)?,
                    s.get("m", a.m, 0.5)?,
                    s.get("omega", a.omega, 6.0)?,
                    s.get("phi-prime", a.phi_prime, 0.0)?,
                    s.get("tc", a.tc, 100.0)?,
                )?),
            };
            let cfg = JlsPathConfig {
                hazard,
                k: s.get("k", a.k, 0.2)?,
                sigma: s.get("sigma", a.sigma, 0.01)?,
                p0: s.get("p0", a.p0, 1.0)?,
                t0: s.get("t0", a.t0, 0.0)?,
                n: usize_of(s.get("n", a.n, 900)?)?,
                dt: s.get("dt", a.dt, 0.1)?,
            };
            let path = jls_path(&cfg, &mut RandomSource::named(seed, "simulate.jls"))?;
            let table = Table::new(
                ValueKind::Price,
                path.series.times().to_vec(),
                path.series.prices().to_vec(),
            );
            (table, json!({ "crash_time": path.crash_time }))
        }
        SimulateKind::Ticks(a) => {
            s.record("command", "simulate ticks".into());
            let params = ImpactTickParams::martingale(
                s.get("p", a.p, 0.5)?,
                s.get("ds1", a.ds1, 1.0)?,
                s.get("pa", a.pa, 0.01)?,
                s.get("pb", a.pb, 0.01)?,
                s.get("ds3", a.ds3, 0.0)?,
            )?;
            let n = usize_of(s.get("n", a.n, 1000)?)?;
            let ticks = impact_tick_stream(&params, n, &mut RandomSource::named(seed, "simulate.ticks"))?;
            let count = |r: Regime| ticks.iter().filter(|t| t.regime == r).count();
            let meta = json!({
                "ds2": params.ds2,
                "regular_drift": params.regular_drift(),
                "counts": {
                    "regular": count(Regime::Regular),
                    "big_player": count(Regime::BigPlayer),
                    "compositional": count(Regime::Compositional),
                },
            });
            let mut table = Table::samples(ticks.iter().map(|t| t.dx).collect());
            table.labels = Some(ticks.iter().map(|t| t.regime.label().to_string()).collect());
            (table, meta)
        }
        SimulateKind::Ecology(a) => {
            s.record("command", "simulate ecology".into());
            let delta = s.get("delta", a.delta, 1.0)?;
            let s_min = s.get("s-min", a.s_min, 1.0)?;
            let s_max = s.get("s-max", a.s_max, 1e6 * s_min)?;
            let eco = FundEcology { delta, s_min, s_max };
            let n = usize_of(s.get("n", a.n, 100_000)?)?;
            let vols = fund_ecology_volumes(&eco, n, &mut RandomSource::named(seed, "simulate.ecology"))?;
            (Table::samples(vols), json!({ "combined_exponent": eco.combined_exponent() }))
        }
        SimulateKind::Kinematic(a) => {
            s.record("command", "simulate kinematic".into());
            let cfg = KinematicConfig {
                v0: s.get("v0", a.v0, 1.0)?,
                accel: s.get("accel", a.accel, 4.0)?,
                dt_max: s.get("dt-max", a.dt_max, 2.0)?,
                n: usize_of(s.get("n", a.n, 100_000)?)?,
            };
            let ds = kinematic_displacements(&cfg, &mut RandomSource::named(seed, "simulate.kinematic"))?;
            (Table::samples(ds), json!({ "crossover_interval": cfg.crossover_interval() }))
        }
        SimulateKind::Twopop(a) => {
            s.record("command", "simulate twopop".into());
            let cfg = TwoPopulationConfig {
                p: s.get("p", a.p, 0.9)?,
                ds1: s.get("ds1", a.ds1, 1.0)?,
                n: usize_of(s.get("n", a.n, 1000)?)?,
            };
            let sample = two_population_ticks(&cfg, &mut RandomSource::named(seed, "simulate.twopop"))?;
            let meta = json!({
                "ds2": cfg.ds2(),
                "decomposition": to_value(&sample.decomposition),
                "sample_variance": sample.sample_variance,
            });
            (Table::samples(sample.ticks), meta)
        }
        SimulateKind::Garch(a) => {
            s.record("command", "simulate garch".into());
            let spec = GarchSpec::garch11(
                s.get("omega", a.omega, 0.1)?,
                s.get("alpha", a.alpha, 0.1)?,
                s.get("beta", a.beta, 0.8)?,
                s.get("mu", a.mu, 0.0)?,
            );
            let n = usize_of(s.get("n", a.n, 10_000)?)?;
            let returns = garch_simulate(&spec, n, &mut RandomSource::named(seed, "simulate.garch"))?;
            let table = Table::new(ValueKind::Value, returns.times().to_vec(), returns.returns().to_vec());
            (table, json!({ "unconditional_variance": spec.unconditional_variance() }))
        }
    };
    Ok(series_output(ctx, table, meta))
}

fn read_input(input: &FitInput, ctx: &mut RunContext) -> Result<Table, CliError> {
    let text = match input.input.as_deref() {
        Some(p) if p != Path::new("-") => {
            ctx.settings.record("input", p.display().to_string().into());
            std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        _ => {
            ctx.settings.record("input", "-".into());
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Io(format!("standard input: {e}")))?;
            buf
        }
    };
    Table::from_csv(&text).map_err(CliError::Input)
}

fn mean_spacing(t: &[f64]) -> f64 {
    if t.len() < 2 {
        1.0
    } else {
        (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64
    }
}

fn fit_output(ctx: &RunContext, results: Value, exit_code: i32) -> Output {
    Output {
        body: to_json(&envelope(ctx.seed, ctx.settings.echo(), results)),
        meta: None,
        exit_code,
    }
}

pub fn fit(kind: &FitKind, ctx: &mut RunContext) -> Result<Output, CliError> {
    match kind {
        FitKind::Tail(a) => {
            ctx.settings.record("command", "fit tail".into());
            let table = read_input(&a.input, ctx)?;
            let fraction = ctx.settings.get("tail-fraction", a.tail_fraction, DEFAULT_TAIL_FRACTION)?;
            // magnitudes; exact zeros carry no tail information
            let xs: Vec<f64> = table.values.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
            let est = hill_tail_exponent(&xs, fraction)?;
            let results = with_ref(to_value(&est), "Hill estimator of the survival-function exponent");
            Ok(fit_output(ctx, results, 0))
        }
        FitKind::Garch(a) => {
            ctx.settings.record("command", "fit garch".into());
            let table = read_input(a, ctx)?;
            let returns = match table.kind {
                ValueKind::Price => {
                    let prices = PriceSeries::new(table.t, table.values)?;
                    let dt = prices.uniform_spacing()?;
                    prices.log_returns(dt)?
                }
                ValueKind::Value => {
                    let dt = mean_spacing(&table.t);
                    ReturnSeries::new(table.t, table.values, dt)?
                }
            };
            const REF: &str = "GARCH(1,1) Gaussian conditional maximum likelihood";
            match garch_fit(&returns) {
                Ok(f) => Ok(fit_output(ctx, with_ref(to_value(&f), REF), 0)),
                Err(Error::Convergence { iterations, best }) => {
                    eprintln!("error: likelihood maximization did not converge after {iterations} iterations");
                    Ok(fit_output(ctx, with_ref(to_value(&*best), REF), 3))
                }
                Err(e) => Err(e.into()),
            }
        }
        FitKind::Jls(a) => {
            ctx.settings.record("command", "fit jls".into());
            let table = read_input(&a.input, ctx)?;
            let series = PriceSeries::new(table.t, table.values)?;
            let mut search = JlsSearch::default_for(&series);
            let s = &mut ctx.settings;
            search.t_c.0 = s.get("tc-min", a.tc_min, search.t_c.0)?;
            search.t_c.1 = s.get("tc-max", a.tc_max, search.t_c.1)?;
            search.t_c_points = usize_of(s.get("tc-points", a.tc_points, search.t_c_points as u64)?)?;
            search.m_points = usize_of(s.get("m-points", a.m_points, search.m_points as u64)?)?;
            search.omega_points =
                usize_of(s.get("omega-points", a.omega_points, search.omega_points as u64)?)?;
            let f = jls_fit(&series, &search)?;
            let results = with_ref(to_value(&f), "log-periodic power law for the log price");
            Ok(fit_output(ctx, results, 0))
        }
        FitKind::Regimes(a) => {
            ctx.settings.record("command", "fit regimes".into());
            let table = read_input(&a.input, ctx)?;
            let raw = ctx.settings.get("breakpoints", a.breakpoints.clone(), String::new())?;
            let breakpoints = raw
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| CliError::Usage(format!("breakpoint `{s}`: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let dt_max = ctx.settings.get_opt("dt-max", a.dt_max)?;
            let slopes = regime_slopes(&table.values, &breakpoints)?;
            let mut results = with_ref(to_value(&slopes), "log-log density slopes per regime");
            if let Some(dt_max) = dt_max {
                let cross = kinematic_crossover(&slopes, dt_max)?;
                results["kinematic"] = with_ref(to_value(&cross), "constant-acceleration displacement law");
            }
            Ok(fit_output(ctx, results, 0))
        }
    }
}

pub fn verify(ctx: &mut RunContext) -> Result<Output, CliError> {
    ctx.settings.record("command", "verify".into());
    let checks = verify::run_suite(ctx.seed);
    let overall_pass = checks.iter().all(|c| c.pass);
    let results = json!({ "overall_pass": overall_pass, "checks": to_value(&checks) });
    Ok(fit_output(ctx, results, if overall_pass { 0 } else { 4 }))
}
