//! Named experiments mapping onto the library's protocol benchmarks. Each
//! experiment resolves its parameters (with defaults reproducing the
//! reference figures), runs the sweep, and returns CSV-ready rows.

use num_complex::Complex64 as C64;

use bqsp_core::gkp::noisy_prep::{run_noisy_prep, NoisyPrepConfig};
use bqsp_core::gkp::readout::{readout_point, ReadoutScheme};
use bqsp_core::gkp::teleport::{
    bell_via_cx_teleport, pieceable_fidelity_formula, pieceable_teleport_mc, teleport_gate,
    TeleportMode, TeleportPlan,
};
use bqsp_core::gkp::{sbs_round, GkpAxis, GkpCode, Logical};
use bqsp_core::hilbert::diag::quadrature_moments;
use bqsp_core::hilbert::{quadrature_eig, FockBasisConfig, HybridState};
use bqsp_core::instr::{duration, DurationModel};
use bqsp_core::prep::cat::{prepare_cat, CatParity, CatSpec, Corrector};
use bqsp_core::prep::fock::prepare_fock1;
use bqsp_core::prep::gkp_prep::{prepare_gkp, GkpPrepPlan};
use bqsp_core::prep::squeeze::{run_squeezing, SqueezeSchedule};
use bqsp_core::pulses::{bb1_metrics, build_bb1, build_gcr, gcr_metrics, Bb1Spec, GcrSpec};
use bqsp_core::phase_est::{run_phase_estimation, PhaseEstSpec};

use crate::config::ExperimentConfig;

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct ExperimentInfo {
    pub name: &'static str,
    pub about: &'static str,
}

pub const REGISTRY: [ExperimentInfo; 12] = [
    ExperimentInfo {
        name: "gcr_vs_bb1_scaling",
        about: "failure probability and infidelity of GCR and BB1 over an |alpha| sweep",
    },
    ExperimentInfo {
        name: "duration_ratio",
        about: "circuit-duration ratio T_BB1 / T_GCR over an |alpha| sweep",
    },
    ExperimentInfo {
        name: "squeezing",
        about: "incremental squeezing run: dB, Fisher information, infidelity, duration",
    },
    ExperimentInfo {
        name: "cat_prep",
        about: "deterministic two-legged cat preparation with selectable corrector",
    },
    ExperimentInfo {
        name: "fock_prep",
        about: "Fock |1> circuits at depths 1..3",
    },
    ExperimentInfo {
        name: "gkp_prep",
        about: "noiseless stepwise GKP codeword preparation with per-step metrics",
    },
    ExperimentInfo {
        name: "gkp_noisy_prep",
        about: "error-detected GKP preparation under continuous noise (Monte Carlo)",
    },
    ExperimentInfo {
        name: "sbs_backaction",
        about: "stabilization-round back-action on displaced codewords",
    },
    ExperimentInfo {
        name: "readout_sweep",
        about: "logical readout error of the five schemes across the Voronoi cell",
    },
    ExperimentInfo {
        name: "teleport_pieces",
        about: "pieceable gate teleportation under biased ancilla noise",
    },
    ExperimentInfo {
        name: "two_qubit_bell",
        about: "two-ancilla entangling teleportation preparing a logical Bell pair",
    },
    ExperimentInfo {
        name: "phase_estimation",
        about: "oscillator-assisted estimation of a hidden qubit phase",
    },
];

fn fmt(x: f64) -> String {
    format!("{x:.10e}")
}

fn fock_dim(cfg: &ExperimentConfig, default: usize) -> usize {
    if let Ok(v) = std::env::var("BQSP_FOCK_DIM") {
        if let Ok(d) = v.parse::<usize>() {
            return d;
        }
    }
    cfg.fock_dim.unwrap_or(default)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Table, String> {
    match cfg.experiment.as_str() {
        "gcr_vs_bb1_scaling" => gcr_vs_bb1_scaling(cfg),
        "duration_ratio" => duration_ratio(cfg),
        "squeezing" => squeezing(cfg),
        "cat_prep" => cat_prep(cfg),
        "fock_prep" => fock_prep(cfg),
        "gkp_prep" => gkp_prep(cfg),
        "gkp_noisy_prep" => gkp_noisy_prep(cfg),
        "sbs_backaction" => sbs_backaction(cfg),
        "readout_sweep" => readout_sweep(cfg),
        "teleport_pieces" => teleport_pieces(cfg),
        "two_qubit_bell" => two_qubit_bell(cfg),
        "phase_estimation" => phase_estimation(cfg),
        other => Err(format!("unknown experiment '{other}'; see `bqsp list`")),
    }
}

fn gcr_vs_bb1_scaling(cfg: &ExperimentConfig) -> Result<Table, String> {
    let alphas = cfg
        .parameters
        .alphas
        .clone()
        .unwrap_or_else(|| vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0]);
    let theta = cfg.parameters.theta.unwrap_or(std::f64::consts::FRAC_PI_2);
    let delta = cfg.parameters.delta.unwrap_or(1.0);
    let dim = fock_dim(cfg, 64);
    let mut rows = Vec::new();
    for a in alphas {
        let g = gcr_metrics(theta, a, delta, dim).map_err(|e| e.to_string())?;
        let b = bb1_metrics(theta, a, delta, dim).map_err(|e| e.to_string())?;
        let chi = theta * delta / (2.0 * a);
        rows.push(vec![
            fmt(a),
            fmt(chi),
            fmt(g.p_e),
            fmt(b.p_e),
            fmt(g.f_hybrid),
            fmt(b.f_hybrid),
        ]);
    }
    Ok(Table {
        headers: vec!["alpha", "chi", "pe_gcr", "pe_bb1", "fh_gcr", "fh_bb1"],
        rows,
    })
}

fn duration_ratio(cfg: &ExperimentConfig) -> Result<Table, String> {
    let alphas =
        cfg.parameters.alphas.clone().unwrap_or_else(|| vec![5.0, 6.0, 8.0, 10.0, 12.0, 14.0]);
    let theta = cfg.parameters.theta.unwrap_or(std::f64::consts::FRAC_PI_2);
    let delta = cfg.parameters.delta.unwrap_or(1.0);
    let model = cfg.durations.map(|d| d.to_model()).unwrap_or_else(DurationModel::amplitude_only);
    let mut rows = Vec::new();
    for a in alphas {
        let tg = duration(&build_gcr(&GcrSpec::new(theta, a, delta).map_err(|e| e.to_string())?), &model);
        let tb = duration(&build_bb1(&Bb1Spec::new(theta, a).map_err(|e| e.to_string())?), &model);
        rows.push(vec![fmt(a), fmt(tg), fmt(tb), fmt(tb / tg)]);
    }
    Ok(Table { headers: vec!["alpha", "t_gcr_us", "t_bb1_us", "ratio"], rows })
}

fn squeezing(cfg: &ExperimentConfig) -> Result<Table, String> {
    let target = cfg.parameters.target_db.unwrap_or(8.5);
    let accelerated = cfg.parameters.accelerated.unwrap_or(false);
    let dim = fock_dim(cfg, if target > 10.0 { 160 } else { 120 });
    let schedule = if accelerated {
        SqueezeSchedule::accelerated(target)
    } else {
        SqueezeSchedule::baseline(target)
    };
    let (_, r) = run_squeezing(&schedule, dim).map_err(|e| e.to_string())?;
    Ok(Table {
        headers: vec!["target_db", "db_squeezed", "db_anti", "fisher", "infidelity", "duration_us", "steps"],
        rows: vec![vec![
            fmt(target),
            fmt(r.db_squeezed),
            fmt(r.db_anti),
            fmt(r.fisher),
            fmt(r.infidelity),
            fmt(r.duration_us),
            r.steps.to_string(),
        ]],
    })
}

fn parse_corrector(s: Option<&str>) -> Result<Corrector, String> {
    match s.unwrap_or("gcr") {
        "none" => Ok(Corrector::None),
        "gcr" => Ok(Corrector::Gcr),
        "bb1" => Ok(Corrector::Bb1),
        other => Err(format!("unknown corrector '{other}' (none|gcr|bb1)")),
    }
}

fn cat_prep(cfg: &ExperimentConfig) -> Result<Table, String> {
    let alphas = cfg.parameters.alphas.clone().unwrap_or_else(|| vec![2.0, 3.0, 4.0]);
    let corrector = parse_corrector(cfg.parameters.corrector.as_deref())?;
    let delta = cfg.parameters.delta.unwrap_or(1.0);
    let dim = fock_dim(cfg, 96);
    let mut rows = Vec::new();
    for a in alphas {
        let spec = CatSpec { alpha: a, delta, parity: CatParity::Even };
        let (_, m) = prepare_cat(&spec, corrector, dim).map_err(|e| e.to_string())?;
        rows.push(vec![fmt(a), fmt(m.p_e), fmt(m.f_hybrid), fmt(m.f_postselected)]);
    }
    Ok(Table { headers: vec!["alpha", "pe", "f_hybrid", "f_postselected"], rows })
}

fn fock_prep(cfg: &ExperimentConfig) -> Result<Table, String> {
    let dim = fock_dim(cfg, 64);
    let depths: Vec<usize> = match cfg.parameters.depth {
        Some(d) => vec![d],
        None => vec![1, 2, 3],
    };
    let mut rows = Vec::new();
    for d in depths {
        let (_, f) = prepare_fock1(d, dim).map_err(|e| e.to_string())?;
        rows.push(vec![d.to_string(), fmt(f), fmt(f.sqrt())]);
    }
    Ok(Table { headers: vec!["depth", "fidelity", "overlap_amplitude"], rows })
}

fn gkp_prep(cfg: &ExperimentConfig) -> Result<Table, String> {
    let delta = cfg.parameters.delta.unwrap_or(0.34);
    let dim = fock_dim(cfg, 140);
    let mut plan = GkpPrepPlan::square(delta);
    if let Some(n) = cfg.parameters.n_steps {
        plan.n_steps = Some(n);
    } else if (delta - 0.34).abs() < 1e-9 {
        plan.n_steps = Some(3);
    }
    if let Some(s) = cfg.parameters.append_sbs {
        plan.append_sbs = s;
    }
    let (_, metrics) = prepare_gkp(&plan, dim).map_err(|e| e.to_string())?;
    let rows = metrics
        .iter()
        .map(|m| {
            vec![
                m.step.to_string(),
                fmt(m.stab_x),
                fmt(m.stab_p),
                fmt(m.sigma_z),
                fmt(m.p_g),
                fmt(m.f_hybrid),
                fmt(m.f_postselected),
            ]
        })
        .collect();
    Ok(Table {
        headers: vec!["step", "stab_x", "stab_p", "sigma_z", "p_g", "f_hybrid", "f_postselected"],
        rows,
    })
}

fn gkp_noisy_prep(cfg: &ExperimentConfig) -> Result<Table, String> {
    let rounds = cfg.parameters.rounds.unwrap_or(2000);
    let mut ncfg = NoisyPrepConfig::benchmark(rounds, cfg.seed);
    ncfg.dim = fock_dim(cfg, 100);
    if let Some(d) = cfg.parameters.delta {
        ncfg.delta = d;
    }
    if let Some(n) = cfg.noise {
        ncfg.noise = n.to_model();
    }
    let r = run_noisy_prep(&ncfg).map_err(|e| e.to_string())?;
    Ok(Table {
        headers: vec!["rounds", "kept", "success_fraction", "mean_fidelity", "stderr_fidelity", "duration_us"],
        rows: vec![vec![
            rounds.to_string(),
            r.kept_rounds.to_string(),
            fmt(r.success_fraction),
            fmt(r.mean_fidelity),
            fmt(r.stderr_fidelity),
            fmt(r.duration_us),
        ]],
    })
}

fn sbs_backaction(cfg: &ExperimentConfig) -> Result<Table, String> {
    let delta = cfg.parameters.delta.unwrap_or(0.34);
    let eps = cfg.parameters.epsilons.clone().unwrap_or_else(|| vec![0.05, 0.10, 0.15]);
    let dim = fock_dim(cfg, 160);
    let code = GkpCode::square(delta);
    let fock = FockBasisConfig::new(dim)
        .and_then(|f| f.with_leakage_tol(1e-6))
        .map_err(|e| e.to_string())?;
    let eig = quadrature_eig(dim);
    let base = code.codeword(Logical::Zero, dim);
    let mut rows = Vec::new();
    for e in eps {
        let mut osc = base.clone();
        let mut scratch = vec![C64::new(0.0, 0.0); dim];
        eig.apply_displacement(C64::new(e, 0.0), osc.as_slice_mut().unwrap(), &mut scratch);
        let ((x_in, _), (_, vp_in)) = quadrature_moments(&osc);
        let state = HybridState::product(&osc, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let out = sbs_round(&state, &code, GkpAxis::Z, &fock).map_err(|er| er.to_string())?;
        let ((x_out, _), _) = quadrature_moments(&out.state_g.osc_branch(0));
        let shrink = out
            .state_e
            .map(|se| {
                let (_, (_, vp_out)) = quadrature_moments(&se.osc_branch(1));
                1.0 - (vp_out / vp_in).sqrt()
            })
            .unwrap_or(0.0);
        rows.push(vec![
            fmt(e),
            fmt(out.p_g),
            fmt(x_out - x_in),
            fmt((x_out - x_in) / e),
            fmt(shrink),
        ]);
    }
    Ok(Table {
        headers: vec!["epsilon", "p_g", "x_shift", "shift_per_epsilon", "e_branch_dp_reduction"],
        rows,
    })
}

fn readout_sweep(cfg: &ExperimentConfig) -> Result<Table, String> {
    let delta = cfg.parameters.delta.unwrap_or(0.34);
    let eps = cfg
        .parameters
        .epsilons
        .clone()
        .unwrap_or_else(|| vec![0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.45, 0.55]);
    let dim = fock_dim(cfg, 160);
    let code = GkpCode::square(delta);
    let schemes = [
        ("infinite_energy", ReadoutScheme::InfiniteEnergy),
        ("gcr_finite", ReadoutScheme::GcrFinite),
        ("bb1", ReadoutScheme::Bb1),
        ("gcr_bb1", ReadoutScheme::GcrBb1),
        ("bb1_of_gcr", ReadoutScheme::Bb1OfGcr),
    ];
    let mut rows = Vec::new();
    for (name, scheme) in schemes {
        for &e in &eps {
            let pt = readout_point(scheme, &code, e, dim).map_err(|er| er.to_string())?;
            rows.push(vec![
                name.to_string(),
                fmt(e),
                fmt(pt.p_wrong),
                fmt(pt.back_action_fidelity),
            ]);
        }
    }
    Ok(Table { headers: vec!["scheme", "epsilon", "p_wrong", "back_action_fidelity"], rows })
}

fn teleport_pieces(cfg: &ExperimentConfig) -> Result<Table, String> {
    let pieces = cfg.parameters.pieces.clone().unwrap_or_else(|| vec![1, 2, 4, 8]);
    let p_x = cfg.parameters.p_x.unwrap_or(0.05);
    let theta = cfg.parameters.theta.unwrap_or(std::f64::consts::FRAC_PI_4);
    let rounds = cfg.parameters.rounds.unwrap_or(800);
    let dim = fock_dim(cfg, 140);
    let code = GkpCode::square(cfg.parameters.delta.unwrap_or(0.34));
    let (_, success, fidelity) = teleport_gate(&code, &TeleportPlan::noiseless(theta), 160)
        .map_err(|e| e.to_string())?;
    let mut rows = vec![vec![
        "0".to_string(),
        fmt(success),
        fmt(fidelity),
        "0".to_string(),
        fmt(1.0),
    ]];
    for m in pieces {
        let plan = TeleportPlan {
            axis: GkpAxis::Z,
            theta,
            pieces: m,
            p_x,
            mode: TeleportMode::ErrorCorrected,
            compensate: false,
        };
        let (mc, stderr) =
            pieceable_teleport_mc(&code, &plan, rounds, dim, cfg.seed).map_err(|e| e.to_string())?;
        let f = pieceable_fidelity_formula(m, p_x, theta);
        rows.push(vec![m.to_string(), fmt(mc), fmt(stderr), fmt(f), fmt(1.0 - f)]);
    }
    Ok(Table {
        headers: vec!["pieces", "mc_fidelity", "stderr", "formula_fidelity", "formula_infidelity"],
        rows,
    })
}

fn two_qubit_bell(cfg: &ExperimentConfig) -> Result<Table, String> {
    let dim = fock_dim(cfg, 40);
    let code = GkpCode::square(cfg.parameters.delta.unwrap_or(0.34));
    let (_, success, fidelity) = bell_via_cx_teleport(&code, dim).map_err(|e| e.to_string())?;
    Ok(Table {
        headers: vec!["dim_per_mode", "success", "fidelity"],
        rows: vec![vec![dim.to_string(), fmt(success), fmt(fidelity)]],
    })
}

fn phase_estimation(cfg: &ExperimentConfig) -> Result<Table, String> {
    let thetas = cfg.parameters.thetas.clone().unwrap_or_else(|| {
        (1..=7).map(|k| k as f64 * std::f64::consts::PI / 8.0).collect()
    });
    let r = cfg.parameters.squeeze_r.unwrap_or(1.0);
    let shots = cfg.parameters.shots.unwrap_or(0);
    let dim = fock_dim(cfg, 96);
    let mut rows = Vec::new();
    for theta in thetas {
        let spec = PhaseEstSpec { theta, alpha: 1.0, squeeze_r: r, shots, repetitions: 80 };
        let res = run_phase_estimation(&spec, dim).map_err(|e| e.to_string())?;
        rows.push(vec![
            fmt(theta),
            fmt(r),
            fmt(res.mean_p),
            fmt(res.std_p),
            shots.to_string(),
            fmt(res.sampled_mean_p.unwrap_or(f64::NAN)),
        ]);
    }
    Ok(Table { headers: vec!["theta", "r", "mean_p", "std_p", "shots", "sampled_mean_p"], rows })
}
