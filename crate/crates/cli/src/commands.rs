//! Subcommand implementations.

use anyhow::Context;
use logorder::distribution::{convolve, specializations, system_to_distribution, MomentTableJson};
use logorder::eisenstein::characters::GammaCharacter;
use logorder::eisenstein::{
    distribution_property_check, eisen_f_qexp, eisen_tilde_qexp, tilde_f_sides, DirichletCharacter, GroupRingElt,
    GroupRingSeries, RankinData, XPoly,
};
use logorder::growth::{alpha_beta_window, c_constant, is_separable, omega_one, omega_valuation, t_level};
use logorder::padic::{fmt_q, CycloJson, Prime, Q};
use logorder::projsys::{
    components, in_omega_ideal, lift_components, lift_denominator_floor, minimal_slack, reconstruct,
    vanishing_levels, SystemJson,
};
use logorder::series::SeriesJson;
use logorder::weierstrass::{divide_with, newton, prepare_with, DivideOpts, NewtonData};
use logorder::{Distribution, GrowthClass, TruncSeries, Window, WindowSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{input_error, read_json, validate};
use crate::report::{Outcome, Report};
use crate::{Cli, Command, EisensteinCommand, RunConfig, SeriesKind, Setup, VerifyCommand};

pub fn prime(config: &RunConfig) -> anyhow::Result<Prime> {
    validate(Prime::new(config.p), "--p")
}

fn config_json(c: &RunConfig, extra: Value) -> Value {
    let mut v = json!({ "p": c.p, "seed": c.seed });
    if let Some(u) = &c.u {
        v["u"] = json!(fmt_q(u));
    }
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn load_series(path: &std::path::Path) -> anyhow::Result<TruncSeries> {
    let j: SeriesJson = read_json(path)?;
    validate(TruncSeries::try_from(&j), "series")
}

fn load_system(path: &std::path::Path) -> anyhow::Result<WindowSystem> {
    let j: SystemJson = read_json(path)?;
    validate(WindowSystem::try_from(&j), "system")
}

fn load_moments(path: &std::path::Path) -> anyhow::Result<Distribution> {
    let j: MomentTableJson = read_json(path)?;
    validate(Distribution::try_from(&j), "moment table")
}

fn series_json(s: &TruncSeries) -> Value {
    serde_json::to_value(SeriesJson::from(s)).expect("series serializes")
}

fn newton_json(nd: &NewtonData) -> Value {
    json!({
        "t_min": fmt_q(&nd.t_min),
        "t_max": fmt_q(&nd.t_max),
        "break_points": nd.break_points.iter().map(fmt_q).collect::<Vec<_>>(),
        "segment_degrees": nd.segment_degrees,
        "segment_values": nd.segment_values.iter().map(fmt_q).collect::<Vec<_>>(),
    })
}

fn window(config: &RunConfig, p: Prime, d: Vec<i64>, e: Vec<i64>) -> anyhow::Result<Window> {
    match &config.u {
        Some(u) => validate(Window::new(p, d.clone(), e, vec![u.clone(); d.len()]), "window"),
        None => validate(Window::with_default_u(p, d, e), "window"),
    }
}

pub fn run(cli: &Cli) -> anyhow::Result<Report> {
    let c = &cli.config;
    let report = match &cli.command {
        Command::Divide { g, f, r, trunc } => {
            let (g, f) = (load_series(g)?, load_series(f)?);
            let d = divide_with(&g, &f, r, &DivideOpts { trunc: *trunc })?;
            let mut rep = Report::new("divide", config_json(c, json!({ "r": fmt_q(r), "trunc": trunc })));
            rep.output = json!({
                "quotient": series_json(&d.quotient),
                "remainder": series_json(&d.remainder),
                "certified": d.certified,
                "leading_index": d.leading_index,
            });
            rep.check("certified", || Outcome::from_bool(d.certified, "division precision certified", Value::Null));
            rep
        }
        Command::Prepare { f, r, trunc } => {
            let f = load_series(f)?;
            let pr = prepare_with(&f, r, &DivideOpts { trunc: *trunc })?;
            let mut rep = Report::new("prepare", config_json(c, json!({ "r": fmt_q(r), "trunc": trunc })));
            rep.output = json!({
                "poly": series_json(&pr.poly),
                "unit": series_json(&pr.unit),
                "degree": pr.degree,
            });
            rep
        }
        Command::Newton { f, tmin, tmax } => {
            let f = load_series(f)?;
            let nd = newton(&f, tmin, tmax)?;
            let mut rep = Report::new("newton", config_json(c, json!({ "tmin": fmt_q(tmin), "tmax": fmt_q(tmax) })));
            rep.output = newton_json(&nd);
            rep
        }
        Command::Omega { window: (d, e), level } => omega(c, *d, *e, *level)?,
        Command::Reconstruct { system } => {
            let s = load_system(system)?;
            let mut rep = Report::new("reconstruct", config_json(c, json!({ "top": s.top })));
            rep.check("compatible", || Outcome::from_bool(s.check_compatibility()?, "stored levels are compatible", Value::Null));
            let g = reconstruct(&s)?;
            rep.check("agrees", || {
                for (m, r) in &s.levels {
                    if !in_omega_ideal(&g.sub(r)?, &s.window, m)? {
                        return Outcome::fail("reconstruction differs from a stored level", json!({ "m": m }));
                    }
                }
                Outcome::pass(format!("agrees at {} levels", s.levels.len()))
            });
            rep.output = series_json(&g);
            rep
        }
        Command::Lift { system, slack } => {
            let s = load_system(system)?;
            let fam = components(&s)?;
            let n = match slack {
                Some(n) => *n,
                None => minimal_slack(&fam, &s.growth)?,
            };
            let l = lift_components(&fam, &s.growth, n)?;
            let floor = lift_denominator_floor(&s.window, s.p, n);
            let mut rep = Report::new("lift", config_json(c, json!({ "slack": n })));
            rep.check("round trip", || {
                for (m, r) in &s.levels {
                    if !in_omega_ideal(&l.at(m)?.sub(r)?, &s.window, m)? {
                        return Outcome::fail("lift differs from the input", json!({ "m": m }));
                    }
                }
                Outcome::pass("lift agrees with the input at every level")
            });
            rep.check("denominators", || {
                let b = l.denom_bound();
                Outcome::from_bool(
                    b >= logorder::Val::int(floor),
                    format!("denominator valuation {b} against floor {floor}"),
                    Value::Null,
                )
            });
            rep.output = json!({
                "slack": n,
                "denominator_floor": floor,
                "denominator_bound": l.denom_bound().to_string(),
                "system": SystemJson::from(&l),
            });
            rep
        }
        Command::Vanish { f, h, d, top } => {
            let f = load_series(f)?;
            let hc = validate(GrowthClass::new(h.clone()), "--h")?;
            let levels = vanishing_levels(&f, &hc, d, *top)?;
            let mut rep = Report::new("vanish", config_json(c, json!({ "top": top, "d": d })));
            rep.output = json!({ "levels": levels, "vanishes_through_top": levels.iter().all(|x| *x) });
            rep
        }
        Command::Moments { system } => {
            let s = load_system(system)?;
            let mu = system_to_distribution(&s)?;
            let mut rep = Report::new("moments", config_json(c, json!({ "level": mu.top })));
            rep.check("additivity", || Outcome::from_bool(mu.check_additivity(), "moments are additive over cosets", Value::Null));
            rep.output = serde_json::to_value(MomentTableJson::from(&mu))?;
            rep
        }
        Command::Interp { moments } => {
            let mu = load_moments(moments)?;
            let mut rows = vec![];
            for kappa in specializations(&mu.window, mu.top, mu.p) {
                let v = mu.integrate_specialization(&kappa)?;
                rows.push(json!({
                    "weight": kappa.weight,
                    "level": kappa.finite.level,
                    "exps": kappa.finite.exps,
                    "value": CycloJson::from(&v),
                }));
            }
            let mut rep = Report::new("interp", config_json(c, json!({ "level": mu.top })));
            rep.output = json!({ "values": rows });
            rep
        }
        Command::Convolve { a, b } => {
            let (a, b) = (load_moments(a)?, load_moments(b)?);
            let mu = convolve(&a, &b)?;
            let mut rep = Report::new("convolve", config_json(c, json!({ "level": mu.top })));
            rep.output = serde_json::to_value(MomentTableJson::from(&mu))?;
            rep
        }
        Command::Eisenstein { command } => eisenstein(c, command)?,
        Command::Verify { command } => verify(c, command)?,
        Command::Constants { h, window } => constants(c, h, window)?,
        Command::Selftest => crate::selftest::run(c)?,
    };
    if let Some(path) = &c.out {
        let text = serde_json::to_string_pretty(&report.output)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report)
}

fn omega(c: &RunConfig, d: i64, e: i64, level: u64) -> anyhow::Result<Report> {
    let p = prime(c)?;
    let w = window(c, p, vec![d], vec![e])?;
    let poly = omega_one(p, &w.u[0], d, e, level);
    let f = TruncSeries::poly1(p, poly.coeffs());
    let nd = newton(&f, &t_level(p, level + 1), &Q::from_integer(1.into()))?;
    let mut rows = vec![];
    let mut mismatches = vec![];
    for n in 0..=level {
        let t = t_level(p, n);
        let (deg, val) = omega_valuation(p, d, e, level, n)?;
        let (nd_deg, nd_val) = (nd.degree_at(&t), nd.value_at(&t));
        if nd_deg != deg || nd_val != val {
            mismatches.push(n);
        }
        rows.push(json!({
            "n": n,
            "t": fmt_q(&t),
            "degree": nd_deg,
            "valuation": fmt_q(&nd_val),
            "closed_form_degree": deg,
            "closed_form_valuation": fmt_q(&val),
        }));
    }
    let mut rep = Report::new(
        "omega",
        config_json(c, json!({ "window": [d, e], "level": level, "u": fmt_q(&w.u[0]) })),
    );
    rep.check("separable", || Outcome::from_bool(is_separable(&poly), "gcd(f, f') = 1", Value::Null));
    rep.check("closed form", || {
        Outcome::from_bool(
            mismatches.is_empty(),
            format!("newton table matches the closed form at {} levels", level + 1),
            json!({ "mismatched_levels": mismatches }),
        )
    });
    rep.output = json!({
        "degree": poly.degree(),
        "coeffs": poly.coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
        "newton_table": rows,
        "newton": newton_json(&nd),
    });
    Ok(rep)
}

fn eisenstein(c: &RunConfig, cmd: &EisensteinCommand) -> anyhow::Result<Report> {
    match cmd {
        EisensteinCommand::Qexp { kind, k, r, level, a, b, psi1, psi2, trunc } => {
            let h = match kind {
                SeriesKind::Tilde => eisen_tilde_qexp(*k, *level, *r, *a, *b, *trunc)?,
                SeriesKind::F => eisen_f_qexp(*k, *r, psi1, psi2, *trunc)?,
            };
            let mut rep = Report::new(
                "eisenstein qexp",
                config_json(c, json!({ "k": k, "r": r, "level": level, "a": a, "b": b, "trunc": trunc })),
            );
            rep.output = serde_json::to_value(h.to_json())?;
            Ok(rep)
        }
        EisensteinCommand::Characters { modulus } => {
            if *modulus == 0 {
                return Err(input_error("modulus must be positive"));
            }
            let rows: Vec<Value> = DirichletCharacter::all(*modulus)
                .iter()
                .enumerate()
                .map(|(i, chi)| {
                    json!({
                        "index": i,
                        "order": chi.order(),
                        "conductor": chi.conductor(),
                        "parity": chi.parity(),
                    })
                })
                .collect();
            let mut rep = Report::new("eisenstein characters", config_json(c, json!({ "modulus": modulus })));
            rep.output = json!({ "characters": rows });
            Ok(rep)
        }
    }
}

/// Rankin data for one of the fixed setups.
pub fn setup_data(p: Prime, k: i64, setup: Setup) -> anyhow::Result<RankinData> {
    let one = DirichletCharacter::trivial(1);
    let omega = DirichletCharacter::teichmuller(p);
    Ok(match setup {
        Setup::A => RankinData::new(p, k, 1, omega, 0, one)?,
        Setup::B => {
            let chi4 = DirichletCharacter::all(4).into_iter().find(|x| !x.is_trivial()).expect("odd character mod 4");
            RankinData::new(p, k, 4, chi4, 0, one)?
        }
        Setup::C => RankinData::new(p, k, 1, one, 0, omega)?,
        Setup::D => {
            let chi = DirichletCharacter::all(9)
                .into_iter()
                .find(|x| x.order() == 6 && x.parity() == -1)
                .expect("odd sextic character mod 9");
            RankinData::new(p, k, 1, chi, 1, one)?
        }
    })
}

/// Random coefficient family: points u^l for l < 9 with small integer coefficients, no constant term.
pub fn random_family(rng: &mut ChaCha8Rng, p: Prime, trunc: usize) -> GroupRingSeries {
    let u = p.default_u();
    let coeffs = (0..=trunc)
        .map(|n| {
            let mut e = GroupRingElt::default();
            if n > 0 {
                for _ in 0..rng.gen_range(0..=2) {
                    let l = rng.gen_range(0..9usize);
                    let c = Q::from_integer(rng.gen_range(-4..=4).into());
                    e.add_term(num_traits::pow(u.clone(), l), XPoly::from_q(c));
                }
            }
            e
        })
        .collect();
    GroupRingSeries::new(trunc, coeffs)
}

fn verify(c: &RunConfig, cmd: &VerifyCommand) -> anyhow::Result<Report> {
    let p = prime(c)?;
    match cmd {
        VerifyCommand::Interpolation { setup, k, weights, m1, m2, trunc, refine } => {
            let data = setup_data(p, *k, *setup).map_err(|e| input_error(format!("setup: {e:#}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            let g = random_family(&mut rng, p, 3 * trunc);
            let mut rep = Report::new(
                "verify interpolation",
                config_json(
                    c,
                    json!({ "setup": format!("{setup:?}"), "k": k, "weights": [weights.0, weights.1],
                            "m1": m1, "m2": m2, "trunc": trunc }),
                ),
            );
            let fam = data.phi_family(*weights, *m1, *m2, &g, *trunc)?;
            let phi1s = DirichletCharacter::all(p.pow(m1 + 1));
            let phi2s = GammaCharacter::all(p, *m2);
            for (i, phi1) in phi1s.iter().enumerate() {
                for (j, phi2) in phi2s.iter().enumerate() {
                    rep.check(&format!("interpolation chi{i} gamma{j}"), || {
                        let lhs = data.interpolation_lhs(&fam, phi1, phi2)?;
                        let rhs = data.interpolation_rhs(*weights, phi1, phi2, &g, *trunc)?;
                        Outcome::from_bool(
                            lhs == rhs,
                            if lhs.is_zero() { "both sides vanish" } else { "sides agree" },
                            json!({ "lhs": lhs.to_json(), "rhs": rhs.to_json() }),
                        )
                    });
                }
            }
            if *refine {
                for (n1, n2) in [(m1 + 1, *m2), (*m1, m2 + 1)] {
                    rep.check(&format!("distribution ({m1},{m2}) -> ({n1},{n2})"), || {
                        let fine = data.phi_family(*weights, n1, n2, &g, *trunc)?;
                        Outcome::from_bool(distribution_property_check(p, &fam, &fine)?, "coset sums agree", Value::Null)
                    });
                }
            }
            Ok(rep)
        }
        VerifyCommand::TildeF { k, level, r, trunc } => {
            let mut rep = Report::new(
                "verify tilde-f",
                config_json(c, json!({ "k": k, "level": level, "r": r, "trunc": trunc })),
            );
            let moduli: Vec<u64> = (1..=*level).filter(|m| level % m == 0).collect();
            let chars: Vec<(String, DirichletCharacter)> = moduli
                .iter()
                .flat_map(|m| DirichletCharacter::all(*m).into_iter().enumerate().map(move |(i, x)| (format!("{m}:{i}"), x)))
                .collect();
            let rs: Vec<i64> = match r {
                Some(r) => vec![*r],
                None => (0..*k).collect(),
            };
            let parity = if k % 2 == 0 { 1 } else { -1 };
            for r in rs {
                for (n1, c1) in &chars {
                    for (n2, c2) in &chars {
                        if c1.mul(c2).parity() != parity {
                            continue;
                        }
                        rep.check(&format!("r={r} psi1={n1} psi2={n2}"), || {
                            let (lhs, rhs) = tilde_f_sides(*k, *level, r, c1, c2, *trunc)?;
                            Outcome::from_bool(lhs == rhs, "character sum equals 2F", Value::Null)
                        });
                    }
                }
            }
            Ok(rep)
        }
    }
}

fn constants(c: &RunConfig, hs: &[Q], windows: &[(i64, i64)]) -> anyhow::Result<Report> {
    let p = prime(c)?;
    let mut rows = vec![];
    for h in hs {
        let hc = validate(GrowthClass::new(vec![h.clone()]), "--h")?;
        for (d, e) in windows {
            let w = window(c, p, vec![*d], vec![*e])?;
            let cc = c_constant(&w, p);
            let row = match alpha_beta_window(&hc, &w, p) {
                Ok((a, b)) => json!({ "h": fmt_q(h), "window": [d, e], "alpha": a, "beta": b, "c": cc }),
                Err(err) => json!({ "h": fmt_q(h), "window": [d, e], "error": err.to_string(), "c": cc }),
            };
            rows.push(row);
        }
    }
    let mut rep = Report::new("constants", config_json(c, Value::Null));
    rep.output = json!({ "rows": rows });
    Ok(rep)
}
