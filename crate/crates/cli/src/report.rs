//! Report documents. Field order is fixed by the struct definitions.

use osbc::arrangement::{ArrangementError, BiArrangement};
use osbc::bicomplex::OSBicomplex;
use osbc::blowup::{AbstractBiArrangement, Resolution};
use osbc::exactness::{Direction, ExactnessReport, ExactnessWitness, TamenessReport};
use osbc::linalg::format_rational;
use osbc::projective::{ProjectiveBiArrangement, WeightTable};
use osbc::Color;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct HyperplaneInfo {
    pub label: String,
    pub side: &'static str,
    pub coeffs: Vec<String>,
}

#[derive(Serialize)]
pub struct StratumInfo {
    pub index: usize,
    pub label: String,
    pub codim: usize,
    pub hyperplanes: Vec<String>,
    pub irreducible: bool,
    pub factors: Vec<String>,
    pub color: Option<&'static str>,
}

#[derive(Serialize)]
pub struct CircuitInfo {
    pub lambda: Vec<String>,
    pub mu: Vec<String>,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub schema: u32,
    pub command: &'static str,
    pub ambient_dim: usize,
    pub hyperplanes: Vec<HyperplaneInfo>,
    pub strata: Vec<StratumInfo>,
    pub circuits: Option<Vec<CircuitInfo>>,
    pub circuits_error: Option<String>,
    pub higher_irreducibles: Vec<String>,
}

fn color_name(c: Option<Color>) -> Option<&'static str> {
    c.map(Color::name)
}

fn hyperplane_labels(b: &BiArrangement, s: usize) -> Vec<String> {
    let p = b.poset();
    p.stratum(s).hyperplanes.iter().map(|h| p.forms()[h].label.clone()).collect()
}

pub fn analyze_report(b: &BiArrangement) -> AnalyzeReport {
    let p = b.poset();
    let strat = p.stratification();
    let strata = (0..p.len())
        .map(|s| StratumInfo {
            index: s,
            label: p.label(s),
            codim: p.stratum(s).codim,
            hyperplanes: hyperplane_labels(b, s),
            irreducible: strat.stratum(s).irreducible,
            factors: strat.stratum(s).factors.iter().map(|&f| p.label(f)).collect(),
            color: color_name(b.color(s)),
        })
        .collect();
    let (circuits, circuits_error) = match b.circuits() {
        Ok(cs) => (
            Some(
                cs.iter()
                    .map(|c| {
                        let side = |color| {
                            c.support
                                .iter()
                                .filter(|&h| p.forms()[h].side == color)
                                .map(|h| p.forms()[h].label.clone())
                                .collect()
                        };
                        CircuitInfo {
                            lambda: side(Color::Lambda),
                            mu: side(Color::Mu),
                        }
                    })
                    .collect(),
            ),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    AnalyzeReport {
        schema: SCHEMA,
        command: "analyze",
        ambient_dim: p.ambient_dim(),
        hyperplanes: p
            .forms()
            .iter()
            .map(|f| HyperplaneInfo {
                label: f.label.clone(),
                side: f.side.name(),
                coeffs: f.coeffs.iter().map(format_rational).collect(),
            })
            .collect(),
        strata,
        circuits,
        circuits_error,
        higher_irreducibles: b.higher_irreducibles().into_iter().map(|s| p.label(s)).collect(),
    }
}

#[derive(Serialize)]
pub struct StratumDims {
    pub label: String,
    pub codim: usize,
    pub color: Option<&'static str>,
    /// `dim A_{i,codim−i}` for `i = 0..=codim`.
    pub dims: Vec<usize>,
}

#[derive(Serialize)]
pub struct DifferentialRanks {
    pub source: String,
    pub target: String,
    pub i: usize,
    pub j: usize,
    pub dprime_rank: usize,
    pub ddouble_rank: usize,
}

#[derive(Serialize)]
pub struct OsComplexReport {
    pub schema: u32,
    pub command: &'static str,
    pub strata: Vec<StratumDims>,
    /// `Σ_S dim A^S_{i,j}`, indexed `[i][j]`.
    pub totals: Vec<Vec<usize>>,
    pub differentials: Vec<DifferentialRanks>,
    pub identities: String,
}

pub fn stratum_dims(bc: &OSBicomplex) -> Vec<StratumDims> {
    let st = bc.stratification();
    (0..st.len())
        .map(|s| StratumDims {
            label: st.label(s),
            codim: st.codim(s),
            color: color_name(bc.colors()[s]),
            dims: bc.dims(s).to_vec(),
        })
        .collect()
}

pub fn oscomplex_report(bc: &OSBicomplex) -> OsComplexReport {
    let st = bc.stratification();
    let mut differentials = Vec::new();
    for s in 0..st.len() {
        for &t in st.up(s) {
            for i in 0..=st.codim(s) {
                differentials.push(DifferentialRanks {
                    source: st.label(s),
                    target: st.label(t),
                    i,
                    j: st.codim(s) - i,
                    dprime_rank: bc.dprime(s, t, i).rank(),
                    ddouble_rank: bc.ddouble(s, t, i).rank(),
                });
            }
        }
    }
    OsComplexReport {
        schema: SCHEMA,
        command: "oscomplex",
        strata: stratum_dims(bc),
        totals: bc.total_dims(),
        differentials,
        identities: match bc.verify_identities() {
            Ok(()) => "ok".into(),
            Err(v) => format!("{v:?}"),
        },
    }
}

#[derive(Serialize)]
pub struct WitnessInfo {
    pub direction: &'static str,
    pub index: usize,
    pub position: [usize; 2],
    pub homology: usize,
    pub sequence: String,
}

impl From<&ExactnessWitness> for WitnessInfo {
    fn from(w: &ExactnessWitness) -> Self {
        WitnessInfo {
            direction: match w.direction {
                Direction::Row => "row",
                Direction::Column => "column",
            },
            index: w.index,
            position: [w.position.0, w.position.1],
            homology: w.homology,
            sequence: w.sequence(),
        }
    }
}

#[derive(Serialize)]
pub struct StratumVerdict {
    pub label: String,
    pub color: &'static str,
    pub irreducible: bool,
    pub exact: bool,
    pub witness: Option<WitnessInfo>,
}

#[derive(Serialize)]
pub struct TameVerdict {
    pub label: String,
    pub color: &'static str,
    pub tame: bool,
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct TamenessInfo {
    pub tame: Option<bool>,
    pub error: Option<String>,
    pub strata: Vec<TameVerdict>,
}

#[derive(Serialize)]
pub struct ExactnessInfo {
    pub exact: bool,
    pub first_failure: Option<StratumVerdict>,
    pub strata: Vec<StratumVerdict>,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub command: &'static str,
    pub kunneth: bool,
    pub kunneth_violation: Option<String>,
    pub tameness: Option<TamenessInfo>,
    pub exactness: Option<ExactnessInfo>,
}

fn tameness_info(b: &BiArrangement, tame: Result<TamenessReport, ArrangementError>) -> TamenessInfo {
    match tame {
        Ok(r) => TamenessInfo {
            tame: Some(r.tame()),
            error: None,
            strata: r
                .strata
                .iter()
                .map(|t| TameVerdict {
                    label: t.label.clone(),
                    color: t.color.name(),
                    tame: t.tame,
                    witness: t.witness.map(|h| b.forms()[h].label.clone()),
                })
                .collect(),
        },
        Err(e) => TamenessInfo {
            tame: None,
            error: Some(e.to_string()),
            strata: Vec::new(),
        },
    }
}

fn exactness_info(r: &ExactnessReport, skip: Option<usize>) -> ExactnessInfo {
    let strata: Vec<StratumVerdict> = r
        .strata
        .iter()
        .filter(|e| Some(e.stratum) != skip)
        .map(|e| StratumVerdict {
            label: e.label.clone(),
            color: e.color.name(),
            irreducible: e.irreducible,
            exact: e.exact,
            witness: e.witness.as_ref().map(WitnessInfo::from),
        })
        .collect();
    let first = r
        .strata
        .iter()
        .find(|e| Some(e.stratum) != skip && !e.exact)
        .map(|e| StratumVerdict {
            label: e.label.clone(),
            color: e.color.name(),
            irreducible: e.irreducible,
            exact: false,
            witness: e.witness.as_ref().map(WitnessInfo::from),
        });
    ExactnessInfo {
        exact: first.is_none(),
        first_failure: first,
        strata,
    }
}

impl CheckReport {
    pub fn new(
        b: &BiArrangement,
        tame: Result<TamenessReport, ArrangementError>,
        exact: &ExactnessReport,
    ) -> CheckReport {
        CheckReport {
            schema: SCHEMA,
            command: "check",
            kunneth: true,
            kunneth_violation: None,
            tameness: Some(tameness_info(b, tame)),
            exactness: Some(exactness_info(exact, None)),
        }
    }

    pub fn kunneth_failure(label: String) -> CheckReport {
        CheckReport {
            schema: SCHEMA,
            command: "check",
            kunneth: false,
            kunneth_violation: Some(label),
            tameness: None,
            exactness: None,
        }
    }
}

#[derive(Serialize)]
pub struct CompletionInfo {
    pub color: &'static str,
    pub defined: bool,
    pub exact: Option<bool>,
    pub failure: Option<String>,
    pub tame: Option<bool>,
}

#[derive(Serialize)]
pub struct ProjectiveCheckReport {
    pub schema: u32,
    pub command: &'static str,
    pub projective: bool,
    pub n: usize,
    pub kunneth: bool,
    /// Origin colors requested by the file.
    pub origin: Vec<&'static str>,
    pub exactness: ExactnessInfo,
    pub completions: Vec<CompletionInfo>,
}

impl ProjectiveCheckReport {
    pub fn new(pb: &ProjectiveBiArrangement, origin: &[Color]) -> ProjectiveCheckReport {
        let exact = osbc::exactness::check_exactness(pb.partial_bicomplex());
        let completions = [Color::Lambda, Color::Mu]
            .into_iter()
            .map(|c| {
                let defined = pb.is_defined(c);
                let failure = defined.then(|| pb.completion_failure(c)).flatten();
                CompletionInfo {
                    color: c.name(),
                    defined,
                    exact: defined.then_some(failure.is_none()),
                    failure,
                    tame: pb.tameness(c).and_then(|r| r.ok()).map(|r| r.tame()),
                }
            })
            .collect();
        ProjectiveCheckReport {
            schema: SCHEMA,
            command: "check",
            projective: true,
            n: pb.n(),
            kunneth: true,
            origin: origin.iter().map(|c| c.name()).collect(),
            exactness: exactness_info(&exact, Some(pb.origin())),
            completions,
        }
    }
}

#[derive(Serialize)]
pub struct WeightEntry {
    pub r: usize,
    pub weight: usize,
    pub dim: usize,
}

#[derive(Serialize)]
pub struct MotiveReport {
    pub schema: u32,
    pub command: &'static str,
    pub method: &'static str,
    pub n: usize,
    /// `gr^W_{2k} H^r`, indexed `[r][k]`.
    pub table: Vec<Vec<usize>>,
    pub betti: Vec<usize>,
    /// Non-zero entries only.
    pub entries: Vec<WeightEntry>,
    pub deduplicated: Vec<String>,
    pub arrangement: Option<String>,
}

impl MotiveReport {
    pub fn new(pb: &ProjectiveBiArrangement, method: &'static str, t: &WeightTable, text: Option<String>) -> MotiveReport {
        let mut entries = Vec::new();
        for (r, row) in t.entries.iter().enumerate() {
            for (k, &d) in row.iter().enumerate() {
                if d != 0 {
                    entries.push(WeightEntry { r, weight: 2 * k, dim: d });
                }
            }
        }
        MotiveReport {
            schema: SCHEMA,
            command: if text.is_some() { "multizeta" } else { "motive" },
            method,
            n: t.n,
            table: t.entries.clone(),
            betti: (0..t.entries.len()).map(|r| t.betti(r)).collect(),
            entries,
            deduplicated: pb.deduplicated.clone(),
            arrangement: text,
        }
    }
}

#[derive(Serialize)]
pub struct LabeledDims {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
}

#[derive(Serialize)]
pub struct StepInfo {
    pub step: usize,
    pub center: String,
    pub color: &'static str,
    pub divisor: String,
    pub strata: usize,
    pub identities: String,
    pub dims: Option<Vec<LabeledDims>>,
}

#[derive(Serialize)]
pub struct BlowupReport {
    pub schema: u32,
    pub command: &'static str,
    pub order: &'static str,
    pub higher_irreducibles: usize,
    pub steps: Vec<StepInfo>,
    pub terminal: Vec<LabeledDims>,
}

fn labeled_dims(a: &AbstractBiArrangement) -> Vec<LabeledDims> {
    a.dims_by_labels()
        .into_iter()
        .map(|(labels, dims)| LabeledDims { labels, dims })
        .collect()
}

impl BlowupReport {
    pub fn new(abs: &AbstractBiArrangement, res: &Resolution, trace: bool, last: bool) -> BlowupReport {
        let steps = res
            .steps
            .iter()
            .enumerate()
            .map(|(k, s)| StepInfo {
                step: k + 1,
                center: s.center_label.clone(),
                color: s.color.name(),
                divisor: s.result.strat.label(s.divisor),
                strata: s.result.strat.len(),
                identities: match s.result.bicomplex.verify_identities() {
                    Ok(()) => "ok".into(),
                    Err(v) => format!("{v:?}"),
                },
                dims: trace.then(|| labeled_dims(&s.result)),
            })
            .collect();
        BlowupReport {
            schema: SCHEMA,
            command: "blowup",
            order: if last { "last" } else { "first" },
            higher_irreducibles: abs.higher_irreducibles().len(),
            steps,
            terminal: labeled_dims(&res.terminal),
        }
    }
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub schema: u32,
    pub command: &'static str,
    pub status: &'static str,
    pub error: String,
}

impl ErrorReport {
    pub fn new(command: &'static str, msg: &str) -> ErrorReport {
        ErrorReport {
            schema: SCHEMA,
            command,
            status: "failed precondition",
            error: msg.to_string(),
        }
    }
}

fn tsv_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str(&format!("{prefix}\t\n"));
            }
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}\t{}\n", tsv_escape(s))),
        Value::Null => out.push_str(&format!("{prefix}\t\n")),
        other => out.push_str(&format!("{prefix}\t{other}\n")),
    }
}

/// One `path<TAB>value` line per leaf.
pub fn to_tsv(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}
