//! Experiment-spec file format: serde schema, validation, and resolution
//! against a concrete group.

use std::fmt;

use gablab_core::density::default_theta_grid;
use gablab_core::group::{
    enumerate_subgroups, make_group_with_cap, span_subgroup, GroupSpec, Side, Subgroup,
    DEFAULT_EXHAUSTIVE_CAP, DEFAULT_MAX_ORDER,
};
use gablab_core::rng::Rng;
use gablab_core::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance used for verdicts when the spec file omits `tol`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A malformed or out-of-cap input (spec file, moduli list, environment
/// override). The CLI maps these to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn new(msg: impl Into<String>) -> InputError {
        InputError(msg.into())
    }
}

/// One experiment batch: a group, a window recipe, families of time and
/// frequency lattices, and the verification tasks to run on each pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Moduli of the group `Z_{n1} x ... x Z_{nk}`.
    pub group: Vec<i64>,
    pub window: WindowSpec,
    #[serde(rename = "timeLattice")]
    pub time_lattice: LatticeSpec,
    #[serde(rename = "freqLattice")]
    pub freq_lattice: LatticeSpec,
    /// Nonempty set of task names.
    pub tasks: Vec<Task>,
    /// Strictly descending positive θ grid for completeness sweeps;
    /// defaults to `{1, 1e-1, ..., 1e-6}`.
    #[serde(rename = "thetaGrid", default, skip_serializing_if = "Option::is_none")]
    pub theta_grid: Option<Vec<f64>>,
    /// Verdict tolerance; defaults to 1e-9.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// Window recipe. `random` draws componentwise uniform complex entries from
/// the documented seeded PRNG; `delta` is the indicator of the identity;
/// `values` lists `[re, im]` pairs; `canonical_parseval` derives, per lattice
/// pair, the canonical Parseval window of the delta window (skipping pairs
/// where that system is not a frame).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowSpec {
    Random { seed: u64 },
    Delta,
    Values { values: Vec<[f64; 2]> },
    CanonicalParseval,
}

impl WindowSpec {
    /// Short human-readable descriptor used to key report cases.
    pub fn describe(&self) -> String {
        match self {
            WindowSpec::Random { seed } => format!("random(seed={seed})"),
            WindowSpec::Delta => "delta".to_string(),
            WindowSpec::Values { .. } => "values".to_string(),
            WindowSpec::CanonicalParseval => "canonical_parseval".to_string(),
        }
    }

    /// Concrete window vector for lattice-independent kinds; `None` for
    /// `canonical_parseval` (which is realized per lattice pair).
    pub fn realize(&self, group: &GroupSpec) -> Option<Vec<Complex64>> {
        let n = group.order() as usize;
        match self {
            WindowSpec::Random { seed } => Some(Rng::from_seed(*seed).complex_vector(n)),
            WindowSpec::Delta => {
                let mut g = vec![Complex64::new(0.0, 0.0); n];
                g[0] = Complex64::new(1.0, 0.0);
                Some(g)
            }
            WindowSpec::Values { values } => Some(
                values
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
            ),
            WindowSpec::CanonicalParseval => None,
        }
    }
}

/// Either the literal string `"all"` (exhaustive subgroup enumeration) or an
/// explicit list of generators, each a residue vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Keyword(String),
    Generators(Vec<Vec<i64>>),
}

/// Verification tasks. Variant order is alphabetical so that the derived
/// `Ord` matches the report's task-name ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Completeness,
    Density,
    Duality,
    Excess,
    Rdual41,
    Rdual43,
    Tight,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Completeness => "completeness",
            Task::Density => "density",
            Task::Duality => "duality",
            Task::Excess => "excess",
            Task::Rdual41 => "rdual41",
            Task::Rdual43 => "rdual43",
            Task::Tight => "tight",
        }
    }
}

/// A spec checked against a concrete group: lattices spanned/enumerated,
/// tasks deduplicated, defaults filled in.
#[derive(Debug, Clone)]
pub struct ResolvedSpec {
    pub group: GroupSpec,
    pub window: WindowSpec,
    pub time_lattices: Vec<Subgroup>,
    pub freq_lattices: Vec<Subgroup>,
    pub tasks: Vec<Task>,
    pub theta_grid: Vec<f64>,
    pub tol: f64,
}

/// Parses a spec file's JSON text.
pub fn parse_spec(text: &str) -> Result<ExperimentSpec, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::new(format!("invalid spec JSON: {e}")))
}

/// Reads the `GABLAB_MAX_ORDER` override, falling back to the default cap.
pub fn max_order_from_env() -> Result<u64, InputError> {
    match std::env::var("GABLAB_MAX_ORDER") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| InputError::new(format!("GABLAB_MAX_ORDER must be a positive integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn resolve_lattice(
    group: &GroupSpec,
    side: Side,
    spec: &LatticeSpec,
    which: &str,
) -> Result<Vec<Subgroup>, InputError> {
    match spec {
        LatticeSpec::Keyword(word) => {
            if word != "all" {
                return Err(InputError::new(format!(
                    "{which}: expected \"all\" or a generator list, got {word:?}"
                )));
            }
            enumerate_subgroups(group, side, DEFAULT_EXHAUSTIVE_CAP)
                .map_err(|e| InputError::new(format!("{which}: {e}")))
        }
        LatticeSpec::Generators(gens) => {
            let mut elems = Vec::with_capacity(gens.len());
            for coords in gens {
                let elem = group
                    .elem(coords, side)
                    .map_err(|e| InputError::new(format!("{which}: generator {coords:?}: {e}")))?;
                elems.push(elem);
            }
            let sub = span_subgroup(group, side, &elems)
                .map_err(|e| InputError::new(format!("{which}: {e}")))?;
            Ok(vec![sub])
        }
    }
}

/// Validates every field of the spec and resolves it against the group.
/// `max_order` is the general order cap (possibly overridden by the
/// `GABLAB_MAX_ORDER` environment variable); exhaustive `"all"` enumeration
/// always uses the fixed exhaustive cap.
pub fn resolve_spec(spec: &ExperimentSpec, max_order: u64) -> Result<ResolvedSpec, InputError> {
    let group = make_group_with_cap(&spec.group, max_order)
        .map_err(|e| InputError::new(format!("group: {e}")))?;
    let n = group.order() as usize;

    if let WindowSpec::Values { values } = &spec.window {
        if values.len() != n {
            return Err(InputError::new(format!(
                "window values: expected {n} entries for group order {n}, got {}",
                values.len()
            )));
        }
        for (i, &[re, im]) in values.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(InputError::new(format!(
                    "window values: entry {i} is not finite"
                )));
            }
        }
    }

    let time_lattices = resolve_lattice(&group, Side::Primal, &spec.time_lattice, "timeLattice")?;
    let freq_lattices = resolve_lattice(&group, Side::Dual, &spec.freq_lattice, "freqLattice")?;

    if spec.tasks.is_empty() {
        return Err(InputError::new("tasks must be nonempty"));
    }
    let mut tasks = spec.tasks.clone();
    tasks.sort();
    tasks.dedup();

    let theta_grid = match &spec.theta_grid {
        None => default_theta_grid(),
        Some(grid) => {
            if grid.is_empty() {
                return Err(InputError::new("thetaGrid must be nonempty"));
            }
            for &t in grid {
                if !t.is_finite() || t <= 0.0 {
                    return Err(InputError::new(format!(
                        "thetaGrid entries must be finite and positive, got {t}"
                    )));
                }
            }
            for pair in grid.windows(2) {
                if pair[1] >= pair[0] {
                    return Err(InputError::new(
                        "thetaGrid must be strictly descending".to_string(),
                    ));
                }
            }
            grid.clone()
        }
    };

    let tol = spec.tol.unwrap_or(DEFAULT_TOL);
    if !tol.is_finite() || tol <= 0.0 {
        return Err(InputError::new(format!(
            "tol must be finite and positive, got {tol}"
        )));
    }

    Ok(ResolvedSpec {
        group,
        window: spec.window.clone(),
        time_lattices,
        freq_lattices,
        tasks,
        theta_grid,
        tol,
    })
}
