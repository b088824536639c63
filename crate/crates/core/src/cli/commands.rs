use std::io::Write;

use crate::circuits::{
    conventional_iqft, gate_count, generalized_iqft_with, post_process_order, qpe_circuit,
    qpe_generalized_oracle, shor57_circuit, shor_counting_dist, CountConvention,
    GeneralizedLayout, OrderFindingOutcome, SHOR_BASE, SHOR_COUNTING_QUBITS, SHOR_MODULUS,
};
use crate::distiller::{distill_resume, DistillOutcome, ReplayBuffer};
use crate::error::{Error, Result};
use crate::metrics::{b_ave, bhattacharyya, gate_fidelity, EvalMode};
use crate::neuralnet::{checkpoint_load_expecting, checkpoint_save, DualNet};
use crate::qsim::{
    measure_dist, run_circuit, run_noisy, unitary_of, Circuit, NoiseModel, ProbDist, StateVector,
    MAX_UNITARY_QUBITS,
};

use super::config::{parse_target, DistillFile};
use super::output::{config_hash, read_circuit, write_circuit, write_table, Sink};
use super::{
    DistillArgs, EvalArgs, EvalModeArg, GenIqftArgs, LayoutArg, NoiseArgs, QpeArgs, ShorArgs,
    ShorVariant, Variant,
};

fn header(command: &str, description: &str) -> String {
    format!("qdistill {command} config_hash={}", config_hash(description))
}

fn bits(value: usize, width: usize) -> String {
    format!("{value:0width$b}")
}

fn noise_model(a: &NoiseArgs) -> Result<NoiseModel> {
    NoiseModel::new(a.p1, a.p2, a.readout)
}

/// Runs a distillation from a config file and writes `circuit.json`,
/// `report.csv`, `loss.csv`, `episodes.csv`, `network.ckpt` and
/// `replay.qdrb` into the output directory.
pub fn cmd_distill(args: &DistillArgs, seed: Option<u64>) -> Result<()> {
    let file = DistillFile::load(&args.config)?;
    let s = file.settings(seed)?;
    let dir = args.out.clone().unwrap_or_else(|| s.output_dir.clone());
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let description = format!(
        "distill target={} search={:?} training={:?} network={:?} resume={:?}/{:?}",
        s.target.label(),
        s.search,
        s.training,
        s.network,
        s.resume_checkpoint,
        s.resume_replay
    );
    let head = header("distill", &description);

    let mut net = match &s.resume_checkpoint {
        Some(p) => checkpoint_load_expecting(p, s.network.g, s.network.max_len)?,
        None => DualNet::new(s.network.clone())?,
    };
    let replay = match &s.resume_replay {
        Some(p) => Some(ReplayBuffer::load(p, s.search.replay_capacity)?),
        None => None,
    };
    let result = distill_resume(&s.target, &s.search, &s.training, &mut net, replay);
    checkpoint_save(&net, &dir.join("network.ckpt"))?;
    let out: DistillOutcome = result?;
    out.replay.save(&dir.join("replay.qdrb"))?;
    write_circuit(&out.circuit, &dir.join("circuit.json"))?;

    let mut sink = Sink::open(Some(&dir.join("report.csv")))?;
    let mut preamble = vec![
        head.clone(),
        format!("target={} gates={} episodes={}", s.target.label(), out.circuit.len(), out.episodes),
    ];
    preamble.push(format!(
        "panel_b={}",
        out.panel_scores.iter().map(|b| format!("{b:.6}")).collect::<Vec<_>>().join(";")
    ));
    out.report.write_csv(&mut sink, &preamble)?;
    sink.finish()?;

    let rows: Vec<Vec<String>> = out
        .losses
        .iter()
        .map(|l| vec![l.episode.to_string(), l.step.to_string(), format!("{:.9}", l.loss)])
        .collect();
    let mut sink = Sink::open(Some(&dir.join("loss.csv")))?;
    write_table(&mut sink, std::slice::from_ref(&head), &["episode", "step", "loss"], &rows)?;
    sink.finish()?;

    let rows: Vec<Vec<String>> = out
        .history
        .iter()
        .map(|h| vec![h.episode.to_string(), h.length.to_string(), format!("{}", h.z)])
        .collect();
    let mut sink = Sink::open(Some(&dir.join("episodes.csv")))?;
    write_table(&mut sink, &[head], &["episode", "length", "z"], &rows)?;
    sink.finish()?;

    println!(
        "distilled {} into {} gates after {} episodes; B_ave={:.4}; wrote {}",
        s.target.label(),
        out.circuit.len(),
        out.episodes,
        out.report.b_ave()?,
        dir.display()
    );
    Ok(())
}

/// Per-input Bhattacharyya rows and summary rows for a circuit file.
pub fn cmd_eval(args: &EvalArgs, seed: Option<u64>) -> Result<()> {
    let circuit = read_circuit(&args.circuit)?;
    let target = parse_target(&args.reference)?;
    let seed = seed.unwrap_or(0);
    let mode = match args.mode {
        EvalModeArg::Exact => EvalMode::Exact,
        EvalModeArg::Sampled => EvalMode::Sampled {
            shots: args.shots,
            noise: noise_model(&args.noise)?,
        },
    };
    let mut report = b_ave(&circuit, &target, args.inputs, mode, seed)?;
    if mode == EvalMode::Exact && target.n() <= MAX_UNITARY_QUBITS {
        report.gate_fidelity = Some(gate_fidelity(&unitary_of(target.reference())?, &unitary_of(&circuit)?)?);
    }
    let description = format!(
        "eval circuit={} reference={} mode={mode:?} inputs={} seed={seed}",
        circuit.to_json(),
        target.label(),
        args.inputs
    );
    let mut sink = Sink::open(args.out.as_deref())?;
    let preamble = vec![
        header("eval", &description),
        format!("reference={} inputs={} seed={seed}", target.label(), args.inputs),
    ];
    report.write_csv(&mut sink, &preamble)?;
    let to_file = sink.is_file();
    sink.finish()?;
    if to_file {
        println!("B_ave={:.6}", report.b_ave()?);
        if let Some(f) = report.gate_fidelity {
            println!("F={f:.6}");
        }
    }
    Ok(())
}

fn iqft(n: usize, variant: Variant, layout: LayoutArg) -> Result<Circuit> {
    match variant {
        Variant::Conventional => conventional_iqft(n),
        Variant::Generalized => generalized_iqft_with(
            n,
            match layout {
                LayoutArg::CnotNetwork => GeneralizedLayout::CnotNetwork,
                LayoutArg::SwapLadder => GeneralizedLayout::SwapLadder,
            },
        ),
    }
}

/// Writes an inverse-QFT circuit and prints its gate counts.
pub fn cmd_gen_iqft(args: &GenIqftArgs, _seed: Option<u64>) -> Result<()> {
    let c = iqft(args.n, args.variant, args.layout)?;
    let counts = format!(
        "gates abstract={} decomposed={}",
        gate_count(&c, CountConvention::Abstract),
        gate_count(&c, CountConvention::Decomposed)
    );
    match &args.out {
        Some(p) => {
            write_circuit(&c, p)?;
            println!("{counts}");
        }
        None => {
            println!("{}", c.to_json());
            eprintln!("{counts}");
        }
    }
    if let Some(path) = &args.scaling {
        let layout = args.layout;
        let mut rows = Vec::new();
        for n in 2..=args.scaling_max {
            let conv = iqft(n, Variant::Conventional, layout)?;
            let gen = iqft(n, Variant::Generalized, layout)?;
            let (ca, ga) = (
                gate_count(&conv, CountConvention::Abstract),
                gate_count(&gen, CountConvention::Abstract),
            );
            rows.push(vec![
                n.to_string(),
                ca.to_string(),
                gate_count(&conv, CountConvention::Decomposed).to_string(),
                ga.to_string(),
                gate_count(&gen, CountConvention::Decomposed).to_string(),
                format!("{:.6}", ga as f64 / ca as f64),
            ]);
        }
        let description = format!("gen-iqft scaling layout={layout:?} max={}", args.scaling_max);
        let mut sink = Sink::open(Some(path))?;
        write_table(
            &mut sink,
            &[header("gen-iqft", &description)],
            &[
                "n",
                "conventional_abstract",
                "conventional_decomposed",
                "generalized_abstract",
                "generalized_decomposed",
                "ratio",
            ],
            &rows,
        )?;
        sink.finish()?;
    }
    Ok(())
}

/// `p/q` or a decimal in `[0, 1)`.
pub(crate) fn parse_theta(s: &str) -> Result<f64> {
    let bad = || Error::InvalidConfig(format!("theta {s:?} is not a number in [0, 1)"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if (0.0..1.0).contains(&v) {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Exact phase-estimation distribution, with the closed-form column for the
/// generalized circuit.
pub fn cmd_qpe(args: &QpeArgs, _seed: Option<u64>) -> Result<()> {
    let theta = parse_theta(&args.theta)?;
    let n = args.n;
    let c = qpe_circuit(n, theta, &iqft(n, args.variant, LayoutArg::CnotNetwork)?)?;
    let p = measure_dist(&run_circuit(&c, &StateVector::zero(n))?);
    let description = format!("qpe n={n} theta={theta:?} variant={:?}", args.variant);
    let mut preamble = vec![header("qpe", &description)];
    let mut head = vec!["outcome", "bits", "probability"];
    let oracle = match args.variant {
        Variant::Generalized => {
            let o = qpe_generalized_oracle(n, theta)?;
            preamble.push(format!("max_abs_diff={:e}", p.max_abs_diff(&o)?));
            head.extend(["oracle", "abs_diff"]);
            Some(o)
        }
        Variant::Conventional => None,
    };
    let rows: Vec<Vec<String>> = (0..p.len())
        .map(|k| {
            let mut r = vec![k.to_string(), bits(k, n), format!("{:.12}", p.probs()[k])];
            if let Some(o) = &oracle {
                r.push(format!("{:.12}", o.probs()[k]));
                r.push(format!("{:e}", (p.probs()[k] - o.probs()[k]).abs()));
            }
            r
        })
        .collect();
    let mut sink = Sink::open(args.out.as_deref())?;
    write_table(&mut sink, &preamble, &head, &rows)?;
    sink.finish()
}

/// Outcome, order and factors from the most probable nonzero outcome.
fn factor_report(p: &ProbDist) -> String {
    let best = (1..p.len())
        .filter(|&k| p.probs()[k] > 0.0)
        .max_by(|&a, &b| p.probs()[a].total_cmp(&p.probs()[b]).then(b.cmp(&a)));
    let Some(k) = best else {
        return "outcome=none factors=none".to_string();
    };
    let bits_in = SHOR_COUNTING_QUBITS as u32;
    match post_process_order(k as u64, bits_in, SHOR_BASE, SHOR_MODULUS) {
        OrderFindingOutcome::Factors { order, factors } => {
            format!("outcome={k} order={order} factors={},{}", factors.0, factors.1)
        }
        OrderFindingOutcome::NoFactor { order } => format!("outcome={k} order={order} factors=none"),
        OrderFindingOutcome::NoOrder | OrderFindingOutcome::Trivial => {
            format!("outcome={k} factors=none")
        }
    }
}

/// Counting-register distribution of the 57 = 3 x 19 order-finding circuit.
pub fn cmd_shor(args: &ShorArgs, seed: Option<u64>) -> Result<()> {
    let seed = seed.unwrap_or(0);
    let n = SHOR_COUNTING_QUBITS;
    let sub = match args.variant {
        ShorVariant::Conventional => conventional_iqft(n)?,
        ShorVariant::Generalized => iqft(n, Variant::Generalized, LayoutArg::CnotNetwork)?,
        ShorVariant::CircuitFile => {
            let path = args.circuit.as_deref().ok_or_else(|| {
                Error::InvalidConfig("--variant circuit-file needs --circuit".into())
            })?;
            read_circuit(path)?
        }
    };
    let full = shor57_circuit(&sub)?;
    let zero = StateVector::zero(full.n());
    let ideal = shor_counting_dist(&measure_dist(&run_circuit(
        &shor57_circuit(&conventional_iqft(n)?)?,
        &zero,
    )?))?;
    let noise = noise_model(&args.noise)?;
    let shots = args.shots.or((!noise.is_noiseless()).then_some(8192));
    let got = match shots {
        None => shor_counting_dist(&measure_dist(&run_circuit(&full, &zero)?))?,
        Some(shots) => shor_counting_dist(&run_noisy(&full, &zero, &noise, shots, seed)?)?,
    };
    let b = bhattacharyya(&got, &ideal)?;
    let report = factor_report(&got);
    let description = format!(
        "shor variant={:?} iqft={} shots={shots:?} noise={noise:?} seed={seed}",
        args.variant,
        sub.to_json()
    );
    let preamble = vec![
        header("shor", &description),
        format!("b_vs_ideal={b:.9}"),
        report.clone(),
    ];
    let rows: Vec<Vec<String>> = (0..got.len())
        .map(|k| {
            vec![
                k.to_string(),
                bits(k, n),
                format!("{:.12}", got.probs()[k]),
                format!("{:.12}", ideal.probs()[k]),
            ]
        })
        .collect();
    let mut sink = Sink::open(args.out.as_deref())?;
    write_table(&mut sink, &preamble, &["outcome", "bits", "probability", "ideal"], &rows)?;
    let to_file = sink.is_file();
    sink.finish()?;
    let mut console: Box<dyn Write> = if to_file {
        Box::new(std::io::stdout())
    } else {
        Box::new(std::io::stderr())
    };
    writeln!(console, "B vs ideal = {b:.6}; {report}").map_err(|e| Error::io("<console>", e))?;
    Ok(())
}
