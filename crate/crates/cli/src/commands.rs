use serde_json::{json, Value};

use tnc_core::alignment::{
    align_search, build_instance, check_alignment, encode_decode, operating_plan, AlignError, AlignmentInstance,
    AlignmentReport,
};
use tnc_core::feasibility::{analyze, check_plan, find_plan, generation_report, root_of_unity_degree, SearchLimits};
use tnc_core::galois::{Embedding, Field, FieldElement, PolyMatrix};
use tnc_core::io::{element_json, field_json, network_json, poly_json, poly_matrix_json, Problem};
use tnc_core::netmodel::{convolve, min_cut, seeded_rng, LekAssignment, TimeSeries, TransferResult};
use tnc_core::transform::{predicted, run_block, run_block_matrix, Generations, TransformPlan};

use crate::input::{self, describe, input_error, CliError};
use crate::{Command, Common};

pub struct Report {
    pub value: Value,
    pub pass: bool,
}

impl Report {
    fn new(value: Value, pass: bool) -> Report {
        Report { value, pass }
    }
}

/// Random-stream ids, so each subcommand draws independently of the
/// network generator.
const INPUT_STREAM: u64 = 0x1;
const SYMBOL_STREAM: u64 = 0x2;

pub fn run(cmd: &Command, common: &Common) -> Result<Report, CliError> {
    let load = |path: &Option<std::path::PathBuf>| input::load(path.as_deref(), common.random_net, common.seed);
    match cmd {
        Command::Validate { input, dump_normalized } => validate(&load(input)?, *dump_normalized),
        Command::Mincut { input } => mincut(&load(input)?),
        Command::Transfer { input } => transfer(&load(input)?),
        Command::Simulate { input, slots } => simulate(&load(input)?, *slots, common.seed),
        Command::Feasibility {
            input,
            find_plan,
            n_min,
            max_ext_degree,
        } => feasibility(&load(input)?, *find_plan, *n_min, *max_ext_degree),
        Command::Transform {
            input,
            n,
            max_ext_degree,
        } => transform(&load(input)?, *n, *max_ext_degree, common.seed),
        Command::Align {
            input,
            verify_only,
            n,
            budget,
            max_ext_degree,
            trials,
        } => align(
            &load(input)?,
            &AlignArgs {
                verify_only: *verify_only,
                n: *n,
                budget: *budget,
                max_ext_degree: *max_ext_degree,
                trials: *trials,
                seed: common.seed,
            },
        ),
    }
}

fn validate(p: &Problem, dump_normalized: bool) -> Result<Report, CliError> {
    let mut v = json!({"valid": true, "field": field_json(p.field.spec())});
    let Some(net) = &p.network else {
        let tr = p
            .transfer
            .as_ref()
            .ok_or_else(|| CliError::Input("the file has neither a network nor a transfer matrix".into()))?;
        if dump_normalized {
            return Err(CliError::Input("--dump-normalized needs a network".into()));
        }
        v["transfer"] = json!({"mu": tr.mu_sizes, "nu": tr.nu_sizes, "d_max": tr.d_max});
        return Ok(Report::new(v, true));
    };
    let order = net.validate().map_err(input_error)?;
    let ch = match &p.leks {
        Some(_) => Some(input::channel(p)?),
        None => None,
    };
    if dump_normalized {
        let normalized = tnc_core::netmodel::normalize_delays(net);
        let leks = ch.as_ref().map(|c| &c.leks);
        return Ok(Report::new(network_json(&p.field, &normalized.net, leks), true));
    }
    v["nodes"] = json!(net.nodes.len());
    v["edges"] = json!(net.edges.len());
    v["sources"] = json!(net.sources.iter().map(|s| s.processes).collect::<Vec<_>>());
    v["sinks"] = json!(net.sinks.iter().map(|s| s.outputs).collect::<Vec<_>>());
    v["unit_delay"] = json!(net.is_unit_delay());
    v["kernels"] = json!(match &p.leks {
        None => "none",
        Some(LekAssignment::Invariant(_)) => "invariant",
        Some(LekAssignment::TimeIndexed { .. }) => "time-indexed",
    });
    v["topological_order"] = json!(order);
    Ok(Report::new(v, true))
}

fn mincut(p: &Problem) -> Result<Report, CliError> {
    let net = p
        .network
        .as_ref()
        .ok_or_else(|| CliError::Input("the file has no network".into()))?;
    net.validate().map_err(input_error)?;
    let cuts: Vec<Vec<usize>> = (0..net.sources.len())
        .map(|i| (0..net.sinks.len()).map(|j| min_cut(net, i, j)).collect())
        .collect();
    Ok(Report::new(json!({"min_cut": cuts}), true))
}

fn formatted(m: &PolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).format(m.field())).collect())
        .collect()
}

fn transfer_json(tr: &TransferResult) -> Value {
    json!({
        "mu": tr.mu_sizes,
        "nu": tr.nu_sizes,
        "d_prime_min": tr.d_prime_min,
        "d_prime_max": tr.d_prime_max,
        "d_max": tr.d_max,
        "raw": poly_matrix_json(&tr.raw),
        "normalized": poly_matrix_json(&tr.m),
        "display": formatted(&tr.raw),
    })
}

fn transfer(p: &Problem) -> Result<Report, CliError> {
    let tr = input::transfer(p)?;
    Ok(Report::new(transfer_json(&tr), true))
}

fn series_json(field: &Field, s: &TimeSeries) -> Value {
    json!({
        "start": s.start,
        "frames": s.frames.iter().map(|f| f.iter().map(|&e| element_json(field, e)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn simulate(p: &Problem, slots: usize, seed: u64) -> Result<Report, CliError> {
    let ch = input::channel(p)?;
    let f = &p.field;
    let mut rng = seeded_rng(seed, INPUT_STREAM);
    let inputs: Vec<TimeSeries> = ch
        .original
        .sources
        .iter()
        .map(|s| {
            TimeSeries::new(
                0,
                (0..slots)
                    .map(|_| (0..s.processes).map(|_| f.random(&mut rng)).collect())
                    .collect(),
            )
        })
        .collect();
    let outputs = ch.simulate(&inputs, 0, slots).map_err(input_error)?;
    let matches = match ch.transfer() {
        Ok(tr) => Some(convolve(&tr.raw, &tr.mu_sizes, &tr.nu_sizes, &inputs, 0, slots) == outputs),
        Err(_) => None,
    };
    let v = json!({
        "slots": slots,
        "inputs": inputs.iter().map(|s| series_json(f, s)).collect::<Vec<_>>(),
        "outputs": outputs.iter().map(|s| series_json(f, s)).collect::<Vec<_>>(),
        "matches_transfer": matches,
    });
    Ok(Report::new(v, matches.unwrap_or(true)))
}

fn plan_json(plan: &TransformPlan) -> Value {
    let f = plan.field();
    json!({
        "n": plan.n,
        "d_max": plan.d_max,
        "channel_uses": plan.slots(),
        "field": field_json(f.spec()),
        "alpha": element_json(f, plan.alpha),
        "alpha_order": f.order_of(plan.alpha),
        "alpha_primitive": f.order_of(plan.alpha) == f.order() - 1,
    })
}

fn limits(max_ext_degree: u32) -> SearchLimits {
    SearchLimits {
        max_degree: max_ext_degree,
        ..SearchLimits::default()
    }
}

fn feasibility(p: &Problem, search: bool, n_min: Option<usize>, max_ext_degree: u32) -> Result<Report, CliError> {
    let tr = input::transfer(p)?;
    let f = &p.field;
    let report = analyze(&tr, &p.demands).map_err(input_error)?;
    let sinks: Vec<Value> = report
        .sinks
        .iter()
        .map(|s| {
            json!({
                "sink": s.sink,
                "columns": s.columns,
                "det": s.det.format(f),
                "det_coefficients": poly_json(f, &s.det),
                "invertible": s.invertible(),
            })
        })
        .collect();
    let mut v = json!({
        "d_max": tr.d_max,
        "zero_interference": report.zero_interference(),
        "violations": report.violations,
        "invertible": report.invertible(),
        "feasible": report.feasible(),
        "sinks": sinks,
        "f": report.f.as_ref().map(|fp| fp.f.format(f)),
        "f_coefficients": report.f.as_ref().map(|fp| poly_json(f, &fp.f)),
        "f_at_one": report.f.as_ref().map(|fp| element_json(f, fp.f_at_one)),
        "transform_fixable": report.transform_fixable(),
    });
    let mut pass = report.feasible();
    if search {
        match &report.f {
            Some(fp) if pass => {
                let n_min = n_min.unwrap_or(tr.d_max + 1);
                match find_plan(&fp.f, f, n_min, limits(max_ext_degree)) {
                    Ok(plan) => {
                        let mut pj = plan_json(&plan);
                        pj["roots"] = json!(check_plan(&fp.f, &plan).roots);
                        v["plan"] = pj;
                    }
                    Err(e) => {
                        v["plan_error"] = json!(describe(&e));
                        pass = false;
                    }
                }
            }
            _ => v["plan_error"] = json!("not feasible"),
        }
    }
    Ok(Report::new(v, pass))
}

fn explicit_plan(p: &Problem, n: usize, d_max: usize) -> Result<TransformPlan, CliError> {
    match p.alpha {
        Some(alpha) if p.n == Some(n) => {
            let emb = Embedding::new(&p.field, &p.field).map_err(input_error)?;
            TransformPlan::new(emb, alpha, n, d_max).map_err(input_error)
        }
        _ => operating_plan(&p.field, n, d_max).map_err(input_error),
    }
}

fn transform(p: &Problem, n: Option<usize>, max_ext_degree: u32, seed: u64) -> Result<Report, CliError> {
    let tr = input::transfer(p)?;
    let plan = match n.or(p.n) {
        Some(n) => explicit_plan(p, n, tr.d_max)?,
        None => {
            let report = analyze(&tr, &p.demands).map_err(input_error)?;
            let found = match &report.f {
                Some(fp) if report.feasible() => find_plan(&fp.f, &p.field, tr.d_max + 1, limits(max_ext_degree)),
                _ => return Ok(Report::new(json!({"feasible": false, "plan": null}), false)),
            };
            match found {
                Ok(plan) => plan,
                Err(e) => {
                    return Ok(Report::new(
                        json!({"feasible": true, "plan": null, "plan_error": describe(&e)}),
                        false,
                    ))
                }
            }
        }
    };
    let f = plan.field();
    let mut rng = seeded_rng(seed, INPUT_STREAM);
    let x: Vec<Generations> = tr
        .mu_sizes
        .iter()
        .map(|&w| {
            (0..plan.n)
                .map(|_| (0..w).map(|_| f.random(&mut rng)).collect())
                .collect()
        })
        .collect();
    let run = match &p.network {
        Some(_) => run_block(&input::channel(p)?, &plan, &x),
        None => run_block_matrix(&tr, &plan, &x),
    }
    .map_err(input_error)?;
    let want = predicted(&tr, &plan, &x).map_err(input_error)?;
    let matches = run.decoded == want;
    let rows = generation_report(&tr, &p.demands, &plan).map_err(input_error)?;
    let solvable = rows.iter().all(|r| r.solvable());
    let v = json!({
        "plan": plan_json(&plan),
        "pipeline_matches": matches,
        "solvable": solvable,
        "generations": rows.iter().map(|r| json!({
            "sink": r.sink,
            "t": r.t,
            "det": element_json(f, r.det),
            "zero_interference": r.zero_interference,
            "solvable": r.solvable(),
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new(v, matches && solvable))
}

struct AlignArgs {
    verify_only: bool,
    n: Option<usize>,
    budget: usize,
    max_ext_degree: u32,
    trials: u64,
    seed: u64,
}

fn align_error(e: AlignError) -> Result<Report, CliError> {
    match e {
        AlignError::SingularBlock { .. } | AlignError::NotFound { .. } | AlignError::SingularDecodeSystem { .. } => {
            Ok(Report::new(json!({"passes": false, "error": describe(&e)}), false))
        }
        other => Err(input_error(other)),
    }
}

fn random_symbols(inst: &AlignmentInstance, seed: u64, trial: u64) -> Vec<Vec<FieldElement>> {
    let mut rng = seeded_rng(seed ^ (trial << 16), SYMBOL_STREAM);
    let widths = inst.widths();
    let mut x = vec![Vec::new(); 3];
    for k in 0..3 {
        x[inst.roles[k]] = (0..widths[k]).map(|_| inst.field().random(&mut rng)).collect();
    }
    x
}

fn alignment_json(
    inst: &AlignmentInstance,
    report: &AlignmentReport,
    args: &AlignArgs,
) -> Result<(Value, bool), CliError> {
    let mut v = serde_json::to_value(report).expect("plain data");
    v["ranks"] = json!(report.ranks());
    v["passes"] = json!(report.passes());
    v["plan"] = plan_json(&inst.plan);
    v["widths"] = json!(inst.widths());
    let mut exact = report.passes();
    if report.passes() && args.trials > 0 {
        let mut throughput = Vec::new();
        let mut uses = 0;
        for trial in 0..args.trials {
            let x = random_symbols(inst, args.seed, trial);
            match encode_decode(inst, &x) {
                Ok(rec) => {
                    exact &= rec.recovered == x;
                    throughput = rec.throughput.iter().map(ToString::to_string).collect();
                    uses = rec.channel_uses;
                }
                Err(AlignError::SingularDecodeSystem { .. }) => exact = false,
                Err(e) => return Err(input_error(e)),
            }
        }
        v["trials"] = json!({"count": args.trials, "exact": exact});
        v["throughput"] = json!(throughput);
        v["channel_uses"] = json!(uses);
    }
    Ok((v, exact))
}

fn align(p: &Problem, args: &AlignArgs) -> Result<Report, CliError> {
    let n = args.n.or(p.n).unwrap_or(3);
    let block = 2 * n + 1;
    let alpha = p.alpha.filter(|_| p.n == Some(n));
    if alpha.is_none() {
        if let Some(degree) = root_of_unity_degree(block as u64, p.field.order()) {
            if degree > u64::from(args.max_ext_degree) {
                return Err(CliError::Input(format!(
                    "block length {block} needs an extension of degree {degree} > --max-ext-degree {}",
                    args.max_ext_degree
                )));
            }
        }
    }
    if args.verify_only {
        let ch = input::channel(p)?;
        let inst = match build_instance(&ch, n, alpha, args.seed) {
            Ok(i) => i,
            Err(e) => return align_error(e),
        };
        let report = check_alignment(&inst);
        let (v, pass) = alignment_json(&inst, &report, args)?;
        return Ok(Report::new(v, pass));
    }
    let net = p
        .network
        .as_ref()
        .ok_or_else(|| CliError::Input("the file has no network".into()))?;
    net.validate().map_err(input_error)?;
    let out = match align_search(net, &p.field, n, alpha, args.seed, args.budget) {
        Ok(o) => o,
        Err(e) => return align_error(e),
    };
    let (mut v, pass) = alignment_json(&out.instance, &out.report, args)?;
    v["attempts"] = json!(out.attempts);
    let mut file = network_json(&p.field, net, Some(&out.leks));
    if let Some(a) = alpha {
        file["alpha"] = element_json(&p.field, a);
        file["n"] = json!(n);
    }
    v["problem"] = file;
    Ok(Report::new(v, pass))
}
