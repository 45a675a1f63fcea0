use std::fs;

use renyi_core::entropy::{
    bsc_hmm, markov_entropy, markov_rate_with, markov_system, system_entropy, system_rate,
};
use renyi_core::format::{parse_model, Model};
use renyi_core::model::{identity_observation, HiddenMarkovModel, MarkovChain, ObservationMap};
use renyi_core::oracle::{brute_force_collision, brute_force_entropy};
use renyi_core::spectral::{
    characteristic_polynomial, growth_rate, DEFAULT_MAX_ITERATIONS, DEFAULT_POLYNOMIAL_CAP,
};
use renyi_core::tensor::{collision_system_with, noiseless_collision_system_with};
use renyi_core::{
    CollisionSystem, EntropyReport, GrowthAnalysis, NonnegMatrix, SpectralOptions, TensorOptions,
};

use crate::report::{
    to_json, ComponentOut, ComponentsOut, EntropyOut, Num, OracleOut, PolynomialOut, RateOut,
    REPORT_VERSION,
};
use crate::{CliError, LengthArgs, ModelArgs};

type Output = Result<(String, String), CliError>;

/// Which collision system a model is evaluated through.
enum Pipeline {
    Markov(MarkovChain),
    Hidden {
        hmm: HiddenMarkovModel,
        bsc: bool,
    },
    Noiseless {
        chain: MarkovChain,
        map: ObservationMap,
    },
}

impl Pipeline {
    fn name(&self) -> &'static str {
        match self {
            Pipeline::Markov(_) => "markov",
            Pipeline::Hidden { bsc: true, .. } => "bsc",
            Pipeline::Hidden { .. } => "hmm",
            Pipeline::Noiseless { .. } => "noiseless",
        }
    }

    fn to_hmm(&self) -> Result<HiddenMarkovModel, CliError> {
        Ok(match self {
            Pipeline::Markov(c) => identity_observation(c),
            Pipeline::Hidden { hmm, .. } => hmm.clone(),
            Pipeline::Noiseless { chain, map } => {
                renyi_core::model::deterministic_observation(chain, map)?
            }
        })
    }
}

/// A built system together with row labels.
enum System {
    Hadamard {
        matrix: NonnegMatrix,
        initial: Vec<f64>,
        labels: Vec<String>,
    },
    Collision {
        system: CollisionSystem,
        labels: Vec<String>,
    },
}

impl System {
    fn matrix(&self) -> &NonnegMatrix {
        match self {
            System::Hadamard { matrix, .. } => matrix,
            System::Collision { system, .. } => &system.matrix,
        }
    }

    fn initial(&self) -> &[f64] {
        match self {
            System::Hadamard { initial, .. } => initial,
            System::Collision { system, .. } => &system.initial,
        }
    }

    fn labels(&self) -> &[String] {
        match self {
            System::Hadamard { labels, .. } | System::Collision { labels, .. } => labels,
        }
    }
}

struct Settings {
    order: f64,
    tensor: TensorOptions,
    spectral: SpectralOptions,
}

fn settings(args: &ModelArgs) -> Result<Settings, CliError> {
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(CliError::Usage(format!(
            "--tolerance must be positive, got {}",
            args.tolerance
        )));
    }
    Ok(Settings {
        order: args.order,
        tensor: TensorOptions {
            max_dim: args.max_dim,
            prune_dead: args.prune,
        },
        spectral: SpectralOptions {
            tolerance: args.tolerance,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        },
    })
}

fn load(args: &ModelArgs) -> Result<Pipeline, CliError> {
    let text = fs::read_to_string(&args.model).map_err(|source| CliError::Io {
        path: args.model.clone(),
        source,
    })?;
    let model = parse_model(&text)?;
    match (model, args.epsilon) {
        (Model::Markov(chain), Some(eps)) => Ok(Pipeline::Hidden {
            hmm: bsc_hmm(&chain, eps)?,
            bsc: true,
        }),
        (_, Some(_)) => Err(CliError::Usage(
            "--epsilon applies only to models of kind \"markov\"".into(),
        )),
        (Model::Markov(chain), None) => Ok(Pipeline::Markov(chain)),
        (Model::Hidden(hmm), None) => Ok(Pipeline::Hidden { hmm, bsc: false }),
        (Model::Noiseless { chain, map }, None) => Ok(Pipeline::Noiseless { chain, map }),
    }
}

fn integer_order(order: f64) -> Result<u32, CliError> {
    if order.fract() == 0.0 && (2.0..=f64::from(u32::MAX)).contains(&order) {
        Ok(order as u32)
    } else {
        Err(CliError::Usage(format!(
            "--order must be an integer ≥ 2 for this model, got {order}"
        )))
    }
}

fn build(p: &Pipeline, s: &Settings) -> Result<System, CliError> {
    Ok(match p {
        Pipeline::Markov(chain) => {
            let (matrix, initial) = markov_system(chain, s.order)?;
            System::Hadamard {
                matrix,
                initial,
                labels: chain.states().to_vec(),
            }
        }
        Pipeline::Hidden { hmm, .. } => {
            let system = collision_system_with(hmm, integer_order(s.order)?, &s.tensor)?;
            let labels = system
                .indices
                .iter()
                .map(|i| i.label(hmm.chain().states(), hmm.observations()))
                .collect();
            System::Collision { system, labels }
        }
        Pipeline::Noiseless { chain, map } => {
            let system =
                noiseless_collision_system_with(chain, map, integer_order(s.order)?, &s.tensor)?;
            let labels = system
                .indices
                .iter()
                .map(|i| i.label(chain.states(), map.labels()))
                .collect();
            System::Collision { system, labels }
        }
    })
}

fn rate_report(p: &Pipeline, sys: &System, s: &Settings) -> Result<EntropyReport, CliError> {
    Ok(match (p, sys) {
        (Pipeline::Markov(chain), _) => markov_rate_with(chain, s.order, &s.spectral)?,
        (_, System::Collision { system, .. }) => system_rate(system, &s.spectral)?,
        _ => unreachable!("hidden pipelines build collision systems"),
    })
}

fn component_list(growth: &GrowthAnalysis, labels: &[String]) -> Vec<ComponentOut> {
    let d = &growth.decomposition;
    d.components
        .iter()
        .enumerate()
        .map(|(id, nodes)| ComponentOut {
            id,
            members: nodes.iter().map(|&n| labels[n].clone()).collect(),
            radius: Num(growth.component_radii[id]),
            reachable: growth.reachable.contains(&id),
            transient: d.dag_edges.range((id, 0)..(id + 1, 0)).next().is_some(),
        })
        .collect()
}

pub fn entropy(args: &LengthArgs) -> Output {
    let s = settings(&args.model)?;
    let p = load(&args.model)?;
    if args.length == 0 {
        return Err(renyi_core::Error::InvalidLength.into());
    }
    let sys = build(&p, &s)?;
    let report = match (&p, &sys) {
        (Pipeline::Markov(chain), _) => markov_entropy(chain, s.order, args.length)?,
        (_, System::Collision { system, .. }) => system_entropy(system, args.length),
        _ => unreachable!("hidden pipelines build collision systems"),
    };
    let out = EntropyOut {
        report_version: REPORT_VERSION,
        command: "entropy",
        pipeline: p.name(),
        order: Num(s.order),
        length: args.length,
        dimension: sys.matrix().dim(),
        value: Num(report.value),
        per_symbol: Num(report.per_symbol()),
        log2_collision_probability: Num(report.log2_collision),
        infinite: report.is_infinite(),
    };
    let summary = format!(
        "H_{} of {} symbols = {} bits ({} bits/symbol), system dimension {}",
        s.order,
        args.length,
        report.value,
        report.per_symbol(),
        out.dimension
    );
    Ok((to_json(&out), summary))
}

pub fn rate(args: &ModelArgs) -> Output {
    let s = settings(args)?;
    let p = load(args)?;
    let sys = build(&p, &s)?;
    let report = rate_report(&p, &sys, &s)?;
    let growth = report.growth.as_ref().expect("rates carry growth data");
    let components = component_list(growth, sys.labels());
    let dominant_transient = growth
        .dominant_component
        .is_some_and(|c| components[c].transient);
    let out = RateOut {
        report_version: REPORT_VERSION,
        command: "rate",
        pipeline: p.name(),
        order: Num(s.order),
        dimension: sys.matrix().dim(),
        value: Num(report.value),
        infinite: report.is_infinite(),
        rho_plus: Num(growth.rho_plus),
        log2_rho_plus: Num(report.log2_collision),
        degenerate: growth.degenerate,
        dominant_component: growth.dominant_component,
        dominant_transient,
        components,
    };
    let mut summary = format!(
        "H_{} rate = {} bits/symbol (rho+ = {}, {} components, dimension {})",
        s.order,
        report.value,
        growth.rho_plus,
        out.components.len(),
        out.dimension
    );
    if dominant_transient {
        summary.push_str("; the dominant component is transient");
    }
    Ok((to_json(&out), summary))
}

pub fn components(args: &ModelArgs) -> Output {
    let s = settings(args)?;
    let p = load(args)?;
    let sys = build(&p, &s)?;
    let a = sys.matrix();
    let growth = growth_rate(a, sys.initial(), &s.spectral)?;
    let small = a.dim() <= DEFAULT_POLYNOMIAL_CAP;
    let polynomial = if small {
        let poly = characteristic_polynomial(a, DEFAULT_POLYNOMIAL_CAP)?;
        Some(PolynomialOut {
            degree: poly.degree(),
            coefficients: poly.coeffs.iter().map(|&c| Num(c)).collect(),
        })
    } else {
        None
    };
    let out = ComponentsOut {
        report_version: REPORT_VERSION,
        command: "components",
        pipeline: p.name(),
        order: Num(s.order),
        dimension: a.dim(),
        nodes: sys.labels().to_vec(),
        initial: sys.initial().iter().map(|&v| Num(v)).collect(),
        matrix: small.then(|| {
            a.to_dense()
                .into_iter()
                .map(|row| row.into_iter().map(Num).collect())
                .collect()
        }),
        components: component_list(&growth, sys.labels()),
        condensation_edges: growth
            .decomposition
            .dag_edges
            .iter()
            .map(|&(x, y)| [x, y])
            .collect(),
        reachable: growth.reachable.iter().copied().collect(),
        rho_plus: Num(growth.rho_plus),
        dominant_component: growth.dominant_component,
        characteristic_polynomial: polynomial,
    };
    let summary = format!(
        "{} nodes, {} components, {} reachable, rho+ = {}",
        out.dimension,
        out.components.len(),
        out.reachable.len(),
        growth.rho_plus
    );
    Ok((to_json(&out), summary))
}

pub fn oracle(args: &LengthArgs) -> Output {
    let s = settings(&args.model)?;
    let p = load(&args.model)?;
    let order = integer_order(s.order)?;
    let hmm = p.to_hmm()?;
    let cp = brute_force_collision(&hmm, order, args.length)?;
    let h = brute_force_entropy(&hmm, order, args.length)?;
    let strings = (hmm.num_symbols() as u64).pow(args.length as u32);
    let out = OracleOut {
        report_version: REPORT_VERSION,
        command: "oracle",
        pipeline: p.name(),
        order: Num(s.order),
        length: args.length,
        strings,
        collision_probability: Num(cp),
        entropy: Num(h),
        infinite: h.is_infinite(),
    };
    let summary = format!("enumerated {strings} strings: CP = {cp}, H_{order} = {h} bits");
    Ok((to_json(&out), summary))
}
