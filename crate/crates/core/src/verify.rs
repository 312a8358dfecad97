//! Identity suites behind `fsl verify`.
//!
//! Every suite runs seeded, independent trials (trial `i` of check family
//! `label` draws from `stream(seed, label, i)`) and merges them with exact,
//! order-independent reductions: sums of counts, maxima of residuals and the
//! lowest-index error. Reports are therefore identical for any thread count.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::batch::{self, Execution};
use crate::cross_ratios::{
    self, pi3, pi4, random_generic_tuple, relative_residual, ConfigTuple, Pair, Pi4,
};
use crate::dilog::{
    bloch_wigner, d3_infinity_residual, face_sum_pi3, maximise_bloch_wigner, spence_abel_residual,
    symmetry_residual, v_max, TrigTestFunction,
};
use crate::error::{Error, Result};
use crate::flags::{self, AffineFlag, BoundaryPoint, LinePair};
use crate::forms::{FormParams, FormedSpace};
use crate::linalg::{self, CMatrix, ONE};
use crate::norms::{self, Family, FamilyTag, NamedCocycle};
use crate::reduction::{self, phi3, phi4};
use crate::report::CheckRecord;
use crate::rng::{complex_normal, stream};
use crate::tolerances::{TOL_GROUP, TOL_REDUCE};

/// A verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    CrossRatios,
    Hats,
    Reduction,
    Dilog,
    D3,
    Cocycle,
    BbiValue,
    Constants,
    Norms,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const EACH: [Suite; 9] = [
        Suite::CrossRatios,
        Suite::Hats,
        Suite::Reduction,
        Suite::Dilog,
        Suite::D3,
        Suite::Cocycle,
        Suite::BbiValue,
        Suite::Constants,
        Suite::Norms,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::CrossRatios => "cross-ratios",
            Suite::Hats => "hats",
            Suite::Reduction => "reduction",
            Suite::Dilog => "dilog",
            Suite::D3 => "d3",
            Suite::Cocycle => "cocycle",
            Suite::BbiValue => "bbi-value",
            Suite::Constants => "constants",
            Suite::Norms => "norms",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Parameters shared by all suites.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Restricts form-dependent suites to one `(ε, d, r)`; by default every
    /// admissible `(ε, d)` is run at `r = 2, 3, 4`.
    pub form: Option<FormParams>,
    pub trials: u64,
    pub seed: u64,
    pub exec: Execution,
    /// Flag dimensions for the cocycle suite.
    pub flag_dims: Vec<usize>,
}

impl SuiteConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SuiteConfig {
            form: None,
            trials,
            seed,
            exec: Execution::Parallel,
            flag_dims: vec![2, 3, 4],
        }
    }

    pub fn with_form(mut self, form: FormParams) -> Self {
        self.form = Some(form);
        self
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_flag_dims(mut self, dims: Vec<usize>) -> Self {
        self.flag_dims = dims;
        self
    }

    fn spaces(&self) -> Vec<FormedSpace> {
        match self.form {
            Some(p) => vec![FormedSpace::from_params(p)],
            None => [(1, 1), (-1, 0), (1, 0)]
                .iter()
                .flat_map(|&(eps, d)| {
                    (2..=4).map(move |r| FormedSpace::new(eps, d, r).expect("admissible"))
                })
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if let Some(&n) = self.flag_dims.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidArgument(format!("flag dimension {n} < 2")));
        }
        Ok(())
    }
}

/// Runs one suite (or all of them).
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    cfg.validate()?;
    Ok(match suite {
        Suite::CrossRatios => cross_ratio_suite(cfg),
        Suite::Hats => hat_suite(cfg),
        Suite::Reduction => reduction_suite(cfg),
        Suite::Dilog => dilog_suite(cfg),
        Suite::D3 => d3_suite(cfg),
        Suite::Cocycle => cocycle_suite(cfg),
        Suite::BbiValue => bbi_value_suite(cfg),
        Suite::Constants => constants_suite(),
        Suite::Norms => norms_suite(cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run_suite(s, cfg)?);
            }
            out
        }
    })
}

/// Per-check running summary over trials.
#[derive(Debug, Clone)]
struct Acc {
    samples: u64,
    max: f64,
    failures: u64,
    first_error: Option<(u64, String)>,
}

impl Acc {
    const EMPTY: Acc = Acc {
        samples: 0,
        max: 0.0,
        failures: 0,
        first_error: None,
    };

    fn merge(self, other: Acc) -> Acc {
        let first_error = match (self.first_error, other.first_error) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        Acc {
            samples: self.samples + other.samples,
            max: self.max.max(other.max),
            failures: self.failures + other.failures,
            first_error,
        }
    }

    fn error(index: u64, e: String) -> Acc {
        Acc {
            samples: 1,
            max: 0.0,
            failures: 1,
            first_error: Some((index, e)),
        }
    }
}

/// What a trial yields for each check: residuals (several per trial are
/// allowed), or an error.
type TrialOutcome = Vec<Result<Vec<f64>>>;

/// Runs `trials` seeded trials of `f`, which returns one outcome per name.
fn run_trials<F>(cfg: &SuiteConfig, label: &str, names: &[(String, f64)], f: F) -> Vec<CheckRecord>
where
    F: Fn(&mut ChaCha8Rng) -> TrialOutcome + Sync + Send,
{
    let k = names.len();
    let accs = batch::map_reduce(
        cfg.exec,
        cfg.trials,
        vec![Acc::EMPTY; k],
        |index| {
            let mut rng = stream(cfg.seed, label, index);
            let out = f(&mut rng);
            debug_assert_eq!(out.len(), k);
            out.into_iter()
                .map(|r| match r {
                    Ok(vals) => {
                        if let Some(bad) = vals.iter().find(|v| !v.is_finite()) {
                            Acc::error(index, format!("non-finite residual {bad}"))
                        } else {
                            Acc {
                                samples: vals.len() as u64,
                                max: vals.iter().fold(0.0, |m, v| m.max(*v)),
                                failures: 0,
                                first_error: None,
                            }
                        }
                    }
                    Err(e) => Acc::error(index, e.to_string()),
                })
                .collect()
        },
        |a: Vec<Acc>, b: Vec<Acc>| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    );
    names
        .iter()
        .zip(accs)
        .map(|((name, threshold), acc)| {
            let rec = CheckRecord::new(name.clone(), acc.samples, acc.max, *threshold)
                .with_failures(acc.failures);
            match acc.first_error {
                Some((i, e)) => rec.with_note(format!(
                    "{} of {} trials failed; first failure (trial {i}): {e}",
                    acc.failures, cfg.trials
                )),
                None => rec,
            }
        })
        .collect()
}

fn named(prefix: &str, items: &[(&str, f64)], case: &str) -> Vec<(String, f64)> {
    items
        .iter()
        .map(|(n, t)| {
            let name = if case.is_empty() {
                format!("{prefix}/{n}")
            } else {
                format!("{prefix}/{n} {case}")
            };
            (name, *t)
        })
        .collect()
}

/// Rejection sampling of `Ω₃` parameters.
fn random_omega3(space: &FormedSpace, rng: &mut ChaCha8Rng) -> Result<Pair> {
    for _ in 0..100 {
        let a = (complex_normal(rng), complex_normal(rng));
        if reduction::check_omega3(space.epsilon(), a).is_ok() {
            return Ok(a);
        }
    }
    Err(Error::Internal("no parameters in Omega3 after 100 draws".into()))
}

/// Rejection sampling of `Ω₄` (and `Ω₄′` where it applies) parameters.
fn random_omega4(space: &FormedSpace, rng: &mut ChaCha8Rng) -> Result<Pi4> {
    for _ in 0..100 {
        let p = Pi4 {
            a: (complex_normal(rng), complex_normal(rng)),
            b: (complex_normal(rng), complex_normal(rng)),
            c1: complex_normal(rng),
        };
        if reduction::phi4_vector(space, &p).is_ok() {
            return Ok(p);
        }
    }
    Err(Error::Internal("no parameters in Omega4 after 100 draws".into()))
}

fn supports_quintuples(space: &FormedSpace) -> bool {
    space.rank() > space.params().r1()
}

fn cross_ratio_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for space in cfg.spaces() {
        if space.rank() < 2 {
            continue;
        }
        let case = space.params().to_string();
        let names = named(
            "cross-ratios",
            &[
                ("4-tuple identities", 1e-9),
                ("5-tuple identities", 1e-9),
                ("gram determinant", 1e-9),
            ],
            &case,
        );
        out.extend(run_trials(cfg, &format!("cross-ratios {case}"), &names, |rng| {
            let four = random_generic_tuple(&space, 4, rng);
            let five = random_generic_tuple(&space, 5, rng);
            let ids4 = four
                .as_ref()
                .map_err(Clone::clone)
                .and_then(cross_ratios::four_tuple_identities)
                .map(|r| vec![cross_ratios::max_residual(&r)]);
            let ids5 = five
                .as_ref()
                .map_err(Clone::clone)
                .and_then(cross_ratios::five_tuple_identities)
                .map(|r| vec![cross_ratios::max_residual(&r)]);
            let gram = four.and_then(|t| {
                let closed = cross_ratios::gram_determinant_closed_form(&t)?;
                Ok(vec![relative_residual(cross_ratios::gram_determinant(&t), closed)])
            });
            vec![ids4, ids5, gram]
        }));
    }
    out
}

fn table_residual(table: &[(Complex64, Complex64)]) -> f64 {
    table
        .iter()
        .map(|(got, want)| (got - want).norm() / (1.0 + want.norm()))
        .fold(0.0, f64::max)
}

fn hat_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for space in cfg.spaces() {
        if space.rank() < 2 {
            continue;
        }
        let case = space.params().to_string();
        let quint = supports_quintuples(&space);
        let mut items = vec![("phi3 pairings", 1e-10), ("pairing lemma", 1e-9)];
        if quint {
            items.push(("phi4 pairings", 1e-9));
        }
        let names = named("hats", &items, &case);
        out.extend(run_trials(cfg, &format!("hats {case}"), &names, |rng| {
            let p3 = random_omega3(&space, rng)
                .and_then(|a| reduction::phi3_pairing_table(&space, a))
                .map(|t| vec![table_residual(&t)]);
            let lemma = random_generic_tuple(&space, 5, rng)
                .and_then(|t| reduction::pairing_lemma_residuals(&t))
                .map(|r| r.to_vec());
            let mut res = vec![p3, lemma];
            if quint {
                res.push(
                    random_omega4(&space, rng)
                        .and_then(|p| reduction::phi4_pairing_table(&space, &p))
                        .map(|t| vec![table_residual(&t)]),
                );
            }
            res
        }));
    }
    out
}

fn pair_residual(x: Pair, y: Pair) -> f64 {
    relative_residual(x.0, y.0).max(relative_residual(x.1, y.1))
}

/// `‖mᵀJm − J‖_max / max(1, ‖m‖²_max)`.
fn normalized_group_residual(space: &FormedSpace, m: &CMatrix) -> f64 {
    space.group_residual(m) / linalg::max_abs(m).powi(2).max(1.0)
}

fn reduction_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for space in cfg.spaces() {
        let case = space.params().to_string();
        let quads = space.rank() >= 2;
        let quint = supports_quintuples(&space);
        let mut items = vec![("triple", TOL_REDUCE), ("group membership", TOL_GROUP)];
        if quads {
            items.extend([
                ("pi3 o phi3", 1e-10),
                ("quadruple", TOL_REDUCE),
                ("quadruple invariance", TOL_REDUCE),
            ]);
        }
        if quint {
            items.extend([
                ("pi4 o phi4", 1e-10),
                ("quintuple", TOL_REDUCE),
                ("quintuple invariance", TOL_REDUCE),
            ]);
        }
        let names = named("reduction", &items, &case);
        out.extend(run_trials(cfg, &format!("reduction {case}"), &names, |rng| {
            let mut group = Vec::new();
            let triple = random_generic_tuple(&space, 3, rng)
                .and_then(|t| reduction::reduce_triple(&t))
                .map(|r| {
                    group.push(normalized_group_residual(&space, r.g.matrix()));
                    vec![r.residual]
                });
            let mut res = vec![triple];
            let mut rest = Vec::new();
            if quads {
                rest.push(random_omega3(&space, rng).and_then(|a| {
                    let back = pi3(&phi3(&space, a)?)?;
                    Ok(vec![pair_residual(back, a)])
                }));
                let t = random_generic_tuple(&space, 4, rng);
                let h = space.random_group_element(rng);
                let reduced = t.as_ref().map_err(Clone::clone).and_then(|t| {
                    let r = reduction::reduce_quadruple(t)?;
                    group.push(normalized_group_residual(&space, r.g.matrix()));
                    // independent target: Φ₃ at the cross-ratio coordinates
                    let target = phi3(&space, pi3(t)?)?;
                    Ok((r.canonical.clone(), t.transform(&r.g)?.distance(&target)))
                });
                rest.push(reduced.as_ref().map(|r| vec![r.1]).map_err(Clone::clone));
                rest.push(invariance(&t, &h, &reduced, reduction::reduce_quadruple));
            }
            if quint {
                rest.push(random_omega4(&space, rng).and_then(|p| {
                    let back = pi4(&phi4(&space, &p)?)?;
                    let r = back
                        .as_array()
                        .iter()
                        .zip(p.as_array())
                        .map(|(x, y)| relative_residual(*x, y))
                        .fold(0.0, f64::max);
                    Ok(vec![r])
                }));
                let t = random_generic_tuple(&space, 5, rng);
                let h = space.random_group_element(rng);
                let reduced = t.as_ref().map_err(Clone::clone).and_then(|t| {
                    let r = reduction::reduce_quintuple(t)?;
                    group.push(normalized_group_residual(&space, r.g.matrix()));
                    let target = phi4(&space, &pi4(t)?)?;
                    Ok((r.canonical.clone(), t.transform(&r.g)?.distance(&target)))
                });
                rest.push(reduced.as_ref().map(|r| vec![r.1]).map_err(Clone::clone));
                rest.push(invariance(&t, &h, &reduced, reduction::reduce_quintuple));
            }
            res.push(Ok(group));
            res.extend(rest);
            res
        }));
    }
    out
}

/// Distance between the canonical forms of `t` and `h·t`.
fn invariance(
    t: &Result<ConfigTuple>,
    h: &Result<crate::forms::GroupElement>,
    reduced: &Result<(ConfigTuple, f64)>,
    reduce: fn(&ConfigTuple) -> Result<reduction::ReductionResult>,
) -> Result<Vec<f64>> {
    let t = t.as_ref().map_err(Clone::clone)?;
    let h = h.as_ref().map_err(Clone::clone)?;
    let (canon, _) = reduced.as_ref().map_err(Clone::clone)?;
    let moved = reduce(&t.transform(h)?)?;
    Ok(vec![moved.canonical.distance(canon)])
}

/// `2·N(0,1)` samples with the Spence–Abel guard band kept clear.
fn dilog_pair(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    loop {
        let a = complex_normal(rng) * 2.0;
        let b = complex_normal(rng) * 2.0;
        let far = |z: Complex64| z.norm() > 1e-6;
        if far(a) && far(b) && far(ONE - a) && far(ONE - b) && far(a - b) {
            return (a, b);
        }
    }
}

fn dilog_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let names = named(
        "dilog",
        &[("symmetries", 1e-10), ("spence-abel", 1e-10)],
        "",
    );
    let mut out = run_trials(cfg, "dilog", &names, |rng| {
        let (a, b) = dilog_pair(rng);
        vec![
            Ok(vec![symmetry_residual(a)]),
            spence_abel_residual(bloch_wigner, a, b).map(|r| vec![r.abs()]),
        ]
    });
    let (z, v) = maximise_bloch_wigner();
    let root = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    out.push(
        CheckRecord::new("dilog/maximum value", 1, (v - 1.0149).abs(), 5e-4)
            .with_note(format!("max D = {v:.16} at {z}")),
    );
    out.push(CheckRecord::new("dilog/maximum location", 1, (z - root).norm(), 1e-6));
    out
}

/// Number of random test functions in the `d3` suite.
pub const D3_FUNCTIONS: u64 = 10;

fn d3_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let spaces: Vec<FormedSpace> = match cfg.form {
        Some(p) => vec![FormedSpace::from_params(p)],
        None => [(1, 1), (-1, 0), (1, 0)]
            .iter()
            .map(|&(e, d)| FormedSpace::new(e, d, 2).expect("admissible"))
            .collect(),
    };
    let functions: Vec<TrigTestFunction> = (0..D3_FUNCTIONS)
        .map(|k| TrigTestFunction::random(&mut stream(cfg.seed, "d3 functions", k)))
        .collect();
    let mut out = Vec::new();
    for space in spaces.into_iter().filter(|s| s.rank() >= 2) {
        let case = space.params().to_string();
        let names = named("d3", &[("face sum vs operator", 1e-9)], &case);
        let eps = space.epsilon();
        out.extend(run_trials(cfg, &format!("d3 {case}"), &names, |rng| {
            let res = random_generic_tuple(&space, 5, rng).and_then(|t| {
                let x = pi4(&t)?;
                functions
                    .iter()
                    .map(|f| {
                        let bf = f.bounded();
                        Ok((face_sum_pi3(&bf, &t)? - d3_infinity_residual(&bf, &x, eps)?).abs())
                    })
                    .collect::<Result<Vec<f64>>>()
            });
            vec![res]
        }));
    }
    out
}

fn random_flags(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<AffineFlag> {
    (0..k).map(|_| AffineFlag::random(n, rng)).collect()
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn cocycle_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &n in &cfg.flag_dims {
        let case = format!("(n={n})");
        let names = named(
            "cocycle",
            &[
                ("cocycle relation", 1e-8),
                ("alternation", 1e-9),
                ("GL invariance", 1e-9),
                ("affine lift", 1e-9),
                ("contributing classes", 0.0),
            ],
            &case,
        );
        let expected = flags::contributing_count(n) as f64;
        out.extend(run_trials(cfg, &format!("cocycle {case}"), &names, |rng| {
            let five: [AffineFlag; 5] = random_flags(n, 5, rng).try_into().expect("five");
            let four: [AffineFlag; 4] = five[..4].to_vec().try_into().expect("four");
            let mut perm = [0, 1, 2, 3];
            perm.shuffle(rng);
            let g = CMatrix::from_fn(n, n, |_, _| complex_normal(rng));
            let factors: Vec<Vec<Complex64>> =
                (0..4).map(|_| (0..n).map(|_| complex_normal(rng)).collect()).collect();
            let base = flags::b_n(&four);
            let relation = flags::cocycle_residual(&five).map(|r| vec![r.abs()]);
            let alternation = base.clone().and_then(|b| {
                let permuted = perm.map(|i| four[i].clone());
                Ok(vec![(flags::b_n(&permuted)? - permutation_sign(&perm) * b).abs()])
            });
            let gl = base.clone().and_then(|b| {
                let moved: Vec<AffineFlag> =
                    four.iter().map(|f| f.transform(&g)).collect::<Result<_>>()?;
                Ok(vec![(flags::b_n(&moved.try_into().expect("four"))? - b).abs()])
            });
            let lift = base.and_then(|b| {
                let lifted: Vec<AffineFlag> =
                    four.iter().zip(&factors).map(|(f, s)| f.rescale(s)).collect();
                Ok(vec![(flags::b_n(&lifted.try_into().expect("four"))? - b).abs()])
            });
            let count = flags::contributing_indices(&four)
                .map(|js| vec![(js.len() as f64 - expected).abs()]);
            vec![relation, alternation, gl, lift, count]
        }));
    }
    out
}

/// The ten non-vanishing `J` of `B₄(F_∞, F₀, F₁, F_(a,b))` and their values.
pub fn bbi_table(a: Complex64, b: Complex64) -> [([usize; 4], f64); 10] {
    let d = bloch_wigner;
    let x = d(b);
    let y = -d(b / a);
    let z = d((ONE - b) / (ONE - a));
    let w = -d(a * (ONE - b) / (b * (ONE - a)));
    [
        ([2, 0, 0, 0], x),
        ([0, 2, 0, 0], x),
        ([0, 0, 2, 0], x),
        ([0, 0, 0, 2], x),
        ([1, 1, 0, 0], y),
        ([0, 0, 1, 1], y),
        ([1, 0, 1, 0], z),
        ([0, 1, 0, 1], z),
        ([1, 0, 0, 1], w),
        ([0, 1, 1, 0], w),
    ]
}

fn random_boundary_point(rng: &mut ChaCha8Rng) -> BoundaryPoint {
    BoundaryPoint::new(complex_normal(rng), complex_normal(rng))
}

fn bbi_value_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let names = named(
        "bbi-value",
        &[
            ("closed form", 1e-8),
            ("per-J table", 1e-9),
            ("other classes vanish", 1e-9),
            ("rho of boundary lines", 1e-9),
            ("SO4 invariance", 1e-8),
        ],
        "",
    );
    run_trials(cfg, "bbi-value", &names, |rng| {
        let (a, b) = (complex_normal(rng), complex_normal(rng));
        let pts: Vec<BoundaryPoint> = (0..4).map(|_| random_boundary_point(rng)).collect();
        let g = flags::random_so4(rng);
        let fl = flags::standard_quadruple_so4(a, b);
        let closed = fl.as_ref().map_err(Clone::clone).and_then(|fl| {
            Ok(vec![(flags::b_n(fl)? - 2.0 * (bloch_wigner(a) + bloch_wigner(b))).abs()])
        });
        let table = bbi_table(a, b);
        let per_j = fl.as_ref().map_err(Clone::clone).and_then(|fl| {
            table
                .iter()
                .map(|(j, want)| Ok((flags::b_n_j(fl, *j)? - want).abs()))
                .collect::<Result<Vec<f64>>>()
        });
        let others = fl.as_ref().map_err(Clone::clone).and_then(|fl| {
            let mut acc = 0.0;
            for j in flags::all_indices(4) {
                if !table.iter().any(|(k, _)| *k == j) {
                    acc += flags::b_n_j(fl, j)?.abs();
                }
            }
            Ok(vec![acc])
        });
        let rho = fl.as_ref().map_err(Clone::clone).and_then(|fl| {
            let via_lines = flags::b4_on_boundary(&flags::standard_lines_so4(a, b))?;
            Ok(vec![(via_lines - flags::b_n(fl)?).abs()])
        });
        let invariance = g.and_then(|g| {
            let lines: Vec<LinePair> = pts.iter().map(BoundaryPoint::lines).collect();
            let moved: Vec<LinePair> = lines.iter().map(|l| l.transform(&g)).collect();
            let before = flags::b4_on_boundary(&lines.try_into().expect("four"))?;
            let after = flags::b4_on_boundary(&moved.try_into().expect("four"))?;
            Ok(vec![(after - before).abs()])
        });
        vec![closed, per_j, others, rho, invariance]
    })
}

/// Independent oracles for the Dynkin indices, as sums of squares and
/// triangular numbers.
fn dynkin_by_sums(family: Family, r: u64) -> u64 {
    match family {
        Family::A => (1..=r).map(|k| k * (k + 1) / 2).sum(),
        Family::B => 2 * (1..=r).map(|k| k * k).sum::<u64>(),
        Family::C => (1..=r).map(|k| (2 * k - 1) * (2 * k - 1)).sum(),
        Family::D => 2 * (1..r).map(|k| k * k).sum::<u64>(),
    }
}

fn constants_suite() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for family in Family::ALL {
        let mismatches = (1..=10)
            .filter(|&r| {
                let tag = FamilyTag::new(family, r).expect("r >= 1");
                norms::dynkin_index(tag) != dynkin_by_sums(family, r)
            })
            .count();
        let mut rec = CheckRecord::new(
            format!("constants/dynkin index {family}_r, r=1..10"),
            10,
            mismatches as f64,
            0.0,
        );
        if family == Family::D {
            rec = rec.with_note(format!(
                "{}: {} (not checked beyond r = 2)",
                norms::D_FAMILY_CONJECTURE.label,
                norms::D_FAMILY_CONJECTURE.statement
            ));
        }
        out.push(rec);
    }
    let v = v_max();
    let bn = (2..=8u64)
        .map(|n| {
            let oracle = (1..n).map(|k| k * (k + 1) / 2).sum::<u64>() as f64;
            let got = norms::gromov_norm_bn(n).expect("n >= 2");
            (got / v - oracle).abs() / oracle
        })
        .fold(0.0, f64::max);
    out.push(CheckRecord::new("constants/norm of b_n, n=2..8", 7, bn, 1e-14));
    let mut iso = 0.0f64;
    for family in [Family::A, Family::B, Family::C] {
        for r in 1..=10 {
            let tag = FamilyTag::new(family, r).expect("r >= 1");
            let direct = norms::family_norm(tag).value;
            iso = iso.max((direct - norms::normalized_restriction_norm(tag)).abs() / direct);
        }
    }
    out.push(CheckRecord::new(
        "constants/normalized restriction A,B,C r=1..10",
        30,
        iso,
        1e-14,
    ));
    let d2 = norms::family_norm(FamilyTag::new(Family::D, 2).expect("r = 2"));
    out.push(CheckRecord::new(
        "constants/norm of b_D2 is 2v",
        1,
        (d2.value - 2.0 * v).abs(),
        1e-14,
    ));
    let ratio = norms::operator_norm_res2();
    out.push(
        CheckRecord::new(
            "constants/operator norm of res2",
            1,
            if (ratio.num, ratio.den) == (2, 5) { 0.0 } else { 1.0 },
            0.0,
        )
        .with_note(format!("exact value {ratio}")),
    );
    out
}

fn norms_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let v = v_max();
    let mut out = Vec::new();
    match NamedCocycle::VolP1.estimate(cfg.trials, cfg.seed, cfg.exec) {
        Ok(est) => out.push(
            CheckRecord::new("norms/sup of vol-p1", cfg.trials, (est.estimate - v).abs(), 5e-3)
                .with_note(format!("estimate {:.10}, target {v:.10}", est.estimate)),
        ),
        Err(e) => out.push(
            CheckRecord::new("norms/sup of vol-p1", cfg.trials, 0.0, 5e-3)
                .with_failures(1)
                .with_note(e.to_string()),
        ),
    }
    let target = 4.0 * v;
    let names = [
        "norms/sup of B4 o rho below 4v",
        "norms/sup of B4 o rho above 4v",
        "norms/res2 ratio below 2/5",
        "norms/res2 ratio above 2/5",
    ];
    match NamedCocycle::B4So4.estimate(cfg.trials, cfg.seed, cfg.exec) {
        Ok(est) => {
            let ratio = est.estimate / norms::gromov_norm_bn(4).expect("n = 4");
            let exact = norms::operator_norm_res2().to_f64();
            let note = format!(
                "estimate {:.10}, target {target:.10}, argmax (a, b) = ({}, {})",
                est.estimate,
                Complex64::new(est.argmax[0], est.argmax[1]),
                Complex64::new(est.argmax[2], est.argmax[3]),
            );
            out.push(
                CheckRecord::new(names[0], cfg.trials, (target - est.estimate).max(0.0), 0.05)
                    .with_note(note),
            );
            out.push(CheckRecord::new(names[1], cfg.trials, (est.estimate - target).max(0.0), 1e-6));
            out.push(
                CheckRecord::new(names[2], cfg.trials, (exact - ratio).max(0.0), 0.01)
                    .with_note(format!("sampled ratio {ratio:.10}, exact 2/5")),
            );
            out.push(CheckRecord::new(names[3], cfg.trials, (ratio - exact).max(0.0), 1e-4));
        }
        Err(e) => {
            for (name, t) in names.iter().zip([0.05, 1e-6, 0.01, 1e-4]) {
                out.push(
                    CheckRecord::new(*name, cfg.trials, 0.0, t)
                        .with_failures(1)
                        .with_note(e.to_string()),
                );
            }
        }
    }
    out
}
