use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use dexbound::bound::{centralized_bound, generic_bound, permutation_bound, profile_bound, Permutation};
use dexbound::index_coding::{alpha_exact, clique_cover_scheme, tightness_check, verify_scheme, SideInfoInstance, Tightness};
use dexbound::oracle::{linear_optimal_load, OracleLimits};
use dexbound::rational::{self, Rational};
use dexbound::report::{ReportRow, CSV_HEADER};
use dexbound::reproduce;
use dexbound::scenarios::{
    averaged_bound, caching_closed_form, caching_instance, cdc_closed_form_s1, cdc_instance, cdc_normalized_bound,
    cdc_prop_bound, cyclic_demand_family, cyclic_mapping, cyclic_shuffle, cyclic_window_placement,
    decentralized_instance, man_placement, memory_sharing_placement, random_storage, shuffle_average_bound,
    shuffling_closed_form, shuffling_instance, symmetric_storage, CacheGroup, CachingSetting, CachingSpec, CdcSpec,
    DecentralizedMode, DemandVector,
};
use dexbound::{format, ExchangeInstance, OracleError};

use crate::{BoundArgs, Cli, Command, OracleArgs, ScenarioKind};

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure {
            message: e.to_string(),
            code: 2,
        }
    }

    fn io(e: impl std::fmt::Display) -> Self {
        Failure {
            message: e.to_string(),
            code: 1,
        }
    }
}

type Run = Result<Output, Failure>;

fn ok(text: String) -> Run {
    Ok(Output { text, code: 0 })
}

fn load(path: &Path) -> Result<ExchangeInstance, Failure> {
    format::read_file(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn side_info(instance: &ExchangeInstance) -> Result<SideInfoInstance, Failure> {
    SideInfoInstance::from_exchange(instance).map_err(Failure::input)
}

fn show(x: &Rational) -> String {
    rational::display(x)
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, Failure> {
    rational::parse(s).ok_or_else(|| Failure::input(format!("{what}: cannot parse {s:?} as a number")))
}

fn write_json(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Failure::io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Run {
    let json_out = cli.json_out.as_deref();
    match &cli.command {
        Command::Validate { instance } => validate(instance),
        Command::Bound(args) => bound(args),
        Command::Profile { instance } => profile(instance),
        Command::Scenario { kind } => scenario(kind, cli.seed, cli.csv, json_out),
        Command::Alpha { instance } => alpha(instance),
        Command::Tightness { instance } => tightness(instance),
        Command::Scheme { instance, trials } => scheme(instance, *trials, cli.seed, json_out),
        Command::Oracle(args) => oracle(args, json_out),
        Command::Reproduce { .. } => reproduce_all(cli.seed, cli.csv),
    }
}

fn validate(path: &Path) -> Run {
    let inst = load(path)?;
    let report = inst.validate();
    if report.is_ok() {
        ok(format!(
            "valid: {} nodes, {} classes, {} bits{}\n",
            inst.node_count,
            inst.classes.len(),
            rational::format_exact(&inst.total_bits()),
            if inst.centralized { ", centralized" } else { "" }
        ))
    } else {
        Ok(Output {
            text: format!("invalid:\n{report}\n"),
            code: 2,
        })
    }
}

fn bound(args: &BoundArgs) -> Run {
    let inst = load(&args.instance)?;
    let generic = generic_bound(&inst).map_err(Failure::input)?;
    let mut lines: Vec<(&str, String)> = Vec::new();
    if args.centralized {
        lines.push(("centralized", show(&centralized_bound(&side_info(&inst)?))));
    }
    if args.profile {
        lines.push(("profile", show(&profile_bound(&inst.profile()))));
    }
    if let Some(order) = &args.permutation {
        let si = side_info(&inst)?;
        let gamma = Permutation::new(order.clone(), si.clients()).map_err(Failure::input)?;
        let value = permutation_bound(&si, &gamma).map_err(Failure::input)?;
        lines.push(("permutation", value.to_string()));
    }
    if lines.is_empty() {
        return ok(format!("{}\n", show(&generic)));
    }
    if lines.len() == 1 {
        return ok(format!("{}\n", lines[0].1));
    }
    let mut text = format!("generic: {}\n", show(&generic));
    for (k, v) in lines {
        let _ = writeln!(text, "{k}: {v}");
    }
    ok(text)
}

fn profile(path: &Path) -> Run {
    let inst = load(path)?;
    generic_bound(&inst).map_err(Failure::input)?;
    let p = inst.profile();
    ok(format!("{p}bound: {}\n", show(&profile_bound(&p))))
}

fn alpha(path: &Path) -> Run {
    let inst = load(path)?;
    let si = side_info(&inst)?;
    let r = alpha_exact(&si).map_err(Failure::input)?;
    let b = centralized_bound(&si);
    let gap = rational::uint(r.alpha) - &b;
    ok(format!(
        "alpha: {}\npermutation: {}\ncentralized bound: {}\ngap: {}\n",
        r.alpha,
        r.permutation,
        show(&b),
        show(&gap)
    ))
}

fn tightness(path: &Path) -> Run {
    let inst = load(path)?;
    let si = side_info(&inst)?;
    match tightness_check(&si).map_err(Failure::input)? {
        Tightness::Tight => ok("tight\n".into()),
        Tightness::NotTight {
            clique,
            first,
            first_count,
            second,
            second_count,
        } => ok(format!(
            "not tight: S = {clique}, c_{first}^{} = {first_count}, c_{second}^{} = {second_count}\n",
            clique.without(first),
            clique.without(second)
        )),
    }
}

fn scheme(path: &Path, trials: usize, seed: u64, json_out: Option<&Path>) -> Run {
    let inst = load(path)?;
    let si = side_info(&inst)?;
    let s = clique_cover_scheme(&si).map_err(Failure::input)?;
    let verified = verify_scheme(&si, &s, trials, seed).map_err(Failure::input)?;
    let mut doc = s.to_json(&si);
    doc["centralized_bound"] = rational::format_exact(&centralized_bound(&si)).into();
    doc["verified"] = verified.into();
    let text = serde_json::to_string_pretty(&doc).expect("scheme documents serialize") + "\n";
    write_json(json_out, &text)?;
    ok(text)
}

fn oracle(args: &OracleArgs, json_out: Option<&Path>) -> Run {
    let inst = load(&args.instance)?;
    let defaults = OracleLimits::default();
    let limits = OracleLimits {
        max_bits: args.max_bits.unwrap_or(defaults.max_bits),
        max_nodes: args.max_nodes.unwrap_or(defaults.max_nodes),
        max_load: args.max_load.unwrap_or(defaults.max_load),
        budget: match args.budget {
            Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
            Some(_) => return Err(Failure::input("--budget must be a positive number of seconds")),
            None => defaults.budget,
        },
        ..defaults
    };
    let r = match linear_optimal_load(&inst, &limits) {
        Ok(r) => r,
        Err(OracleError::BudgetExhausted { lower, upper }) => {
            return Ok(Output {
                text: format!("budget exhausted\nlinear optimum in [{lower}, {upper}]\n"),
                code: 3,
            })
        }
        Err(e) => return Err(Failure::input(e)),
    };
    let mut text = format!("linear optimum: {}\nverdict: {}\ngeneric bound: {}\n", r.load, r.verdict, show(&r.generic));
    if let Some(a) = r.alpha {
        let si = side_info(&inst)?;
        let _ = writeln!(text, "centralized bound: {}\nalpha: {a}", show(&centralized_bound(&si)));
    }
    text.push_str("bits:\n");
    for (i, (p, q)) in r.scheme.bits.iter().enumerate() {
        let _ = writeln!(text, "  b{}: P = {p}, Q = {q}", i + 1);
    }
    text.push_str("witness:\n");
    for line in r.scheme.to_string().lines() {
        let _ = writeln!(text, "  {line}");
    }
    if json_out.is_some() {
        let doc = serde_json::json!({
            "load": r.load,
            "verdict": r.verdict.to_string(),
            "bits": r.scheme.bits.iter().map(|(p, q)| serde_json::json!({"p": p.to_vec(), "q": q.to_vec()})).collect::<Vec<_>>(),
            "rows": r.scheme.rows.iter().map(|(node, rows)| serde_json::json!({
                "node": node,
                "rows": rows.iter().map(|m| (0..64).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        write_json(json_out, &(serde_json::to_string_pretty(&doc).expect("serializes") + "\n"))?;
    }
    ok(text)
}

fn reproduce_all(seed: u64, csv: bool) -> Run {
    let outcomes = reproduce::run_all(seed);
    let code = if outcomes.iter().all(|o| o.passed) { 0 } else { 1 };
    let text = if csv {
        let mut t = String::from("id,name,passed,detail\n");
        for o in &outcomes {
            let _ = writeln!(t, "{},{},{},\"{}\"", o.id, o.name, o.passed, o.detail.replace('"', "\"\""));
        }
        t
    } else {
        reproduce::render(&outcomes)
    };
    Ok(Output { text, code })
}

struct Generated {
    row: ReportRow,
    instance: ExchangeInstance,
}

fn scenario(kind: &ScenarioKind, seed: u64, csv: bool, json_out: Option<&Path>) -> Run {
    let g = generate(kind, seed).map_err(Failure::input)?;
    write_json(json_out, &format::to_json(&g.instance))?;
    if csv {
        ok(format!("{CSV_HEADER}\n{}\n", g.row.to_csv()))
    } else {
        let mut text = g.row.to_text();
        if let Some(p) = json_out {
            let _ = writeln!(text, "instance: {}", p.display());
        }
        ok(text)
    }
}

fn parse_groups(s: &str) -> Result<Vec<CacheGroup>, dexbound::ScenarioError> {
    s.split(',')
        .map(|g| {
            let (size, frac) = g
                .split_once(':')
                .ok_or_else(|| dexbound::ScenarioError::InvalidSpec(format!("group {g:?} is not size:fraction")))?;
            Ok(CacheGroup {
                clients: size
                    .trim()
                    .parse()
                    .map_err(|_| dexbound::ScenarioError::InvalidSpec(format!("bad group size {size:?}")))?,
                fraction: rational::parse(frac)
                    .ok_or_else(|| dexbound::ScenarioError::InvalidSpec(format!("bad fraction {frac:?}")))?,
            })
        })
        .collect()
}

fn generate(kind: &ScenarioKind, seed: u64) -> Result<Generated, Box<dyn std::error::Error>> {
    let frac = |s: &str| parse_rational(s, "--m").map_err(|f| f.message);
    Ok(match kind {
        ScenarioKind::Caching { k, n, m, f, demand } => {
            let spec = CachingSpec::new(*k, *n, frac(m)?, *f);
            let placement = man_placement(&spec)?;
            let closed = caching_closed_form(&spec, CachingSetting::Centralized)?;
            let params = format!("K={k} N={n} M={m} F={f}");
            match demand {
                Some(d) => {
                    let d = DemandVector::parse(d).ok_or_else(|| format!("cannot parse demand {d:?}"))?;
                    let instance = caching_instance(&placement, &d)?;
                    let worst = if d.is_distinct() { "single demand vector" } else { "repeated files" };
                    Generated {
                        row: ReportRow {
                            scenario: "caching".into(),
                            params: format!("{params} d={d}"),
                            constructed: Some(generic_bound(&instance)?),
                            closed: Some(closed),
                            verdict: Some(format!("{worst}, not worst-case certified")),
                            ..ReportRow::default()
                        },
                        instance,
                    }
                }
                None => {
                    let family = cyclic_demand_family(*n, *k, 1)?;
                    Generated {
                        row: ReportRow {
                            scenario: "caching".into(),
                            params,
                            constructed: Some(averaged_bound(&placement, &family)?),
                            closed: Some(closed),
                            ..ReportRow::default()
                        },
                        instance: caching_instance(&placement, &family[0])?,
                    }
                }
            }
        }
        ScenarioKind::Hetero { k, n, f, groups, no_server } => {
            let groups = parse_groups(groups)?;
            let spec = CachingSpec::new(*k, *n, Rational::from_integer(0.into()), *f)
                .with_groups(groups)
                .with_server(!no_server);
            let placement = cyclic_window_placement(&spec)?;
            let family = cyclic_demand_family(*n, *k, 1)?;
            Generated {
                row: ReportRow {
                    scenario: "hetero".into(),
                    params: format!("K={k} N={n} F={f} server={}", !no_server),
                    constructed: Some(averaged_bound(&placement, &family)?),
                    closed: Some(caching_closed_form(&spec, CachingSetting::Heterogeneous)?),
                    ..ReportRow::default()
                },
                instance: caching_instance(&placement, &family[0])?,
            }
        }
        ScenarioKind::Multireq { k, n, m, f, delta } => {
            let spec = CachingSpec::new(*k, *n, frac(m)?, *f).with_requests(*delta);
            let placement = memory_sharing_placement(&spec)?;
            let family = cyclic_demand_family(*n, *k, *delta)?;
            Generated {
                row: ReportRow {
                    scenario: "multireq".into(),
                    params: format!("K={k} N={n} M={m} F={f} Delta={delta}"),
                    constructed: Some(averaged_bound(&placement, &family)?),
                    closed: Some(caching_closed_form(&spec, CachingSetting::MultipleRequests)?),
                    ..ReportRow::default()
                },
                instance: caching_instance(&placement, &family[0])?,
            }
        }
        ScenarioKind::Decentralized { k, n, m, f, sampled } => {
            let spec = CachingSpec::new(*k, *n, frac(m)?, *f);
            let mode = if *sampled {
                DecentralizedMode::Sampled { seed }
            } else {
                DecentralizedMode::Exact
            };
            let instance = decentralized_instance(&spec, mode)?;
            Generated {
                row: ReportRow {
                    scenario: "decentralized".into(),
                    params: format!("K={k} N={n} M={m} F={f} mode={}", if *sampled { "sampled" } else { "exact" }),
                    constructed: Some(generic_bound(&instance)?),
                    closed: Some(caching_closed_form(&spec, CachingSetting::Decentralized)?),
                    ..ReportRow::default()
                },
                instance,
            }
        }
        ScenarioKind::Shuffling { k, q, m, unit, random } => {
            let spec = if *random {
                random_storage(*k, *q, *m, *unit, seed)?
            } else {
                symmetric_storage(*k, *q, *m, *unit)?
            };
            Generated {
                row: ReportRow {
                    scenario: "shuffling".into(),
                    params: format!("K={k} q={q} M={m} B={unit} storage={}", if *random { "random" } else { "symmetric" }),
                    constructed: Some(shuffle_average_bound(&spec)?),
                    closed: Some(shuffling_closed_form(*k, *q, *m, *unit)?),
                    ..ReportRow::default()
                },
                instance: shuffling_instance(&spec, &cyclic_shuffle(*k, 1))?,
            }
        }
        ScenarioKind::Cdc { k, n, r, w, t, s } => {
            let spec = CdcSpec {
                nodes: *k,
                mappers: cyclic_mapping(*k, *n, *r),
                reducers: *w,
                value_bits: *t,
                replication: *s,
            };
            let closed = if *s == 1 {
                cdc_closed_form_s1(&spec.computation_load(), *k)?
            } else {
                cdc_prop_bound(&spec.mapping_profile(), *k, *s, *n)
            };
            Generated {
                row: ReportRow {
                    scenario: "cdc".into(),
                    params: format!("K={k} N={n} r={r} W={w} T={t} s={s}"),
                    constructed: Some(cdc_normalized_bound(&spec)?),
                    closed: Some(closed),
                    ..ReportRow::default()
                },
                instance: cdc_instance(&spec)?,
            }
        }
    })
}
