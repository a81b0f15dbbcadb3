//! The staged proof.
//!
//! Stages, in order: small cases, Matveev bounds, homogeneous LLL,
//! Baker-Davenport families, pairwise lattice bounds, the bounded search,
//! and the special families `x1 = 1`, `x1 = 2`, `y1 = 1`. Every derived
//! bound goes through a [`BoundLedger`] so it can only tighten.

pub mod cache;
pub mod config;
pub mod report;
pub mod special;
pub mod stages;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linforms::{BoundLedger, LedgerValue, LogPowerBound};
use crate::numerics::{with_precision_retry, PrecisionContext};
use crate::search::{small_cases, SearchOutcome, SolutionSet};
use crate::sieve::SieveResult;

pub use cache::Cache;
pub use config::{PipelineConfig, StageToggles};
pub use report::{CoverageItem, ProofReport, ProofStatus, StageEntry, StageStatus};
use special::{X1One, Y1One};
use stages::{PairBound, Stage1, Stage2, Stage3, Stage4};

pub const STAGE_KEYS: [&str; 7] = [
    "stage0_small",
    "stage1_matveev",
    "stage2_lll",
    "stage3_bd",
    "stage4_pairwise",
    "stage5_search",
    "stage6_special",
];

/// Everything a run produced, for callers that want more than the report.
#[derive(Debug, Clone)]
pub struct ProofRun {
    pub report: ProofReport,
    pub small: Option<SolutionSet>,
    pub stage1: Option<Stage1>,
    pub stage2: Option<Stage2>,
    pub stage3: Option<Stage3>,
    pub stage4: Option<Stage4>,
    pub stage5: Option<SearchOutcome>,
    pub x1_two: Option<SieveResult>,
    pub x1_one: Option<X1One>,
    pub y1_one: Option<Y1One>,
}

struct Pipeline {
    config: PipelineConfig,
    ctx: PrecisionContext,
    cache: Cache,
    ledger: BoundLedger,
    entries: BTreeMap<String, StageEntry>,
    timings: BTreeMap<String, f64>,
    notes: Vec<String>,
    run: ProofRun,
}

fn sci(x: &crate::numerics::RigorousReal) -> String {
    format!("{:.4e}", x.hi_f64())
}

fn lp(b: &LogPowerBound, var: &str) -> LedgerValue {
    LedgerValue::LogPower {
        bound: b.clone(),
        variable: var.into(),
    }
}

impl Pipeline {
    fn new(config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        config.check_supported()?;
        let ctx = config.precision_context()?;
        let cache = match &config.cache_dir {
            Some(d) => Cache::at(d)?,
            None => Cache::disabled(),
        };
        Ok(Self {
            config,
            ctx,
            cache,
            ledger: BoundLedger::new(),
            entries: BTreeMap::new(),
            timings: BTreeMap::new(),
            notes: Vec::new(),
            run: ProofRun {
                report: empty_report(),
                small: None,
                stage1: None,
                stage2: None,
                stage3: None,
                stage4: None,
                stage5: None,
                x1_two: None,
                x1_one: None,
                y1_one: None,
            },
        })
    }

    /// Runs `f` if the stage is enabled and its prerequisite is present.
    fn stage(
        &mut self,
        key: &str,
        enabled: bool,
        missing: Option<&str>,
        f: impl FnOnce(&mut Self) -> Result<StageEntry>,
    ) {
        if !enabled {
            self.entries.insert(key.into(), StageEntry::new(StageStatus::Disabled));
            return;
        }
        if let Some(dep) = missing {
            self.entries
                .insert(key.into(), StageEntry::failed(format!("requires {dep}, which did not complete")));
            return;
        }
        let start = Instant::now();
        let entry = f(self).unwrap_or_else(|e| StageEntry::failed(e.to_string()));
        self.timings.insert(key.into(), start.elapsed().as_secs_f64());
        self.entries.insert(key.into(), entry);
    }

    fn ok(&self, key: &str) -> bool {
        self.entries.get(key).is_some_and(|e| e.status == StageStatus::Ok)
    }

    fn run_stage0(&mut self) -> Result<StageEntry> {
        let small = small_cases();
        let mut e = StageEntry::new(StageStatus::Ok);
        e.input("region", "x1 + x2 <= 3 or y1 + y2 <= 3");
        e.case("solutions", format!("{:?}", small.as_slice()));
        self.run.small = Some(small);
        Ok(e)
    }

    fn run_stage1(&mut self) -> Result<StageEntry> {
        let s1 = with_precision_retry(&self.ctx, stages::stage1)?;
        let l = &mut self.ledger;
        l.record("C1", lp(&s1.gamma1, "Z"), "stage1: Matveev, 2 logarithms")?;
        l.record("min(x1/lambda,y1)", lp(&s1.min_bound, "Z"), "stage1")?;
        l.record("C2", lp(&s1.gamma2, "Z"), "stage1: Matveev, 3 logarithms")?;
        l.record("C3", lp(&s1.gamma3, "Z"), "stage1: Matveev, 4 logarithms")?;
        l.record_int("z", s1.z_max.clone(), "stage1: polylog inequality")?;
        l.record_int("y1+y2", s1.ysum_max.clone(), "stage1")?;
        // the sums bound the single exponents until later stages tighten them
        for v in ["x1", "x2"] {
            l.record_int(v, s1.z_max.clone(), "stage1")?;
        }
        for v in ["y1", "y2"] {
            l.record_int(v, s1.ysum_max.clone(), "stage1")?;
        }
        let mut e = StageEntry::new(StageStatus::Ok);
        e.constant("C1", &s1.gamma1)
            .constant("min_bound", &s1.min_bound)
            .constant("A1", &s1.a1)
            .constant("C2", &s1.gamma2)
            .constant("C3", &s1.gamma3)
            .bound("z_max", &s1.z_max)
            .bound("ysum_max", &s1.ysum_max);
        self.notes
            .push("Gamma_{3,2} is formed with 3^x2 in the denominator of its middle expression".into());
        self.run.stage1 = Some(s1);
        Ok(e)
    }

    fn run_stage2(&mut self) -> Result<StageEntry> {
        let s1 = self.run.stage1.as_ref().expect("checked");
        let s2 = with_precision_retry(&self.ctx, |c| stages::stage2(s1, c))?;
        self.ledger
            .record("min(x1/lambda,y1)", LedgerValue::Real(s2.min_bound.clone()), "stage2: LLL")?;
        let mut e = StageEntry::new(StageStatus::Ok);
        e.input("bounds", format!("[{}, {}]", s1.z_max, s1.ysum_max))
            .constant("scaling", format!("10^{}", s2.scaling.to_string().len() - 1))
            .constant("lattice_lower", sci(&s2.lattice_lower))
            .bound("min_bound", sci(&s2.min_bound))
            .bound("case1_x1_max", s2.case1_x1_max)
            .bound("case2_y1_max", s2.case2_y1_max);
        self.run.stage2 = Some(s2);
        Ok(e)
    }

    fn run_stage3(&mut self) -> Result<StageEntry> {
        let s1 = self.run.stage1.as_ref().expect("checked");
        let s2 = self.run.stage2.as_ref().expect("checked");
        let fam = self.config.families;
        let s3 = with_precision_retry(&self.ctx, |c| {
            stages::stage3(s1, s2, fam.case1_x1_ceiling, fam.case2_y1_ceiling, c)
        })?;
        self.ledger.record_int("x1", s3.x1_max, "stage3: merged Case 1 / Case 2 bounds")?;
        self.ledger.record_int("y1", s3.y1_max, "stage3: merged Case 1 / Case 2 bounds")?;
        let mut e = StageEntry::new(StageStatus::Ok);
        e.input("case1_x1", format!("3..={} with 4 ∤ x1", s3.case1_x1.last().copied().unwrap_or(0)))
            .input("case2_y1", format!("3..={} odd", s3.case2_y1.last().copied().unwrap_or(0)))
            .case("case1_count", s3.case1.len())
            .case("case2_count", s3.case2.len())
            .bound("case1_y1_max", &s3.case1.max_k)
            .bound("case2_x1_max", &s3.case2.max_k)
            .bound("x1_max", s3.x1_max)
            .bound("y1_max", s3.y1_max);
        self.run.stage3 = Some(s3);
        Ok(e)
    }

    fn run_stage4(&mut self) -> Result<StageEntry> {
        let s1 = self.run.stage1.as_ref().expect("checked");
        let s3 = self.run.stage3.as_ref().expect("checked");
        let inputs = (
            s1.z_max.to_string(),
            s1.ysum_max.to_string(),
            s3.x1_max,
            s3.y1_max,
        );
        let (c1, c2): (Vec<PairBound>, Vec<PairBound>) =
            self.cache.get_or_compute("stage4_pairs", &inputs, self.ctx.working(), || {
                with_precision_retry(&self.ctx, |c| stages::stage4_pairs(s1, s3, c))
            })?;
        let s4 = stages::stage4_finish(s3, c1, c2, &self.ctx)?;
        self.ledger.record_int("x2", s4.x2_max, "stage4: pairwise LLL and size step")?;
        self.ledger.record_int("y2", s4.y2_max, "stage4: pairwise LLL and size step")?;
        let mut e = StageEntry::new(StageStatus::Ok);
        e.case("case1_pairs", s4.case1_pairs.len())
            .case("case2_pairs", s4.case2_pairs.len())
            .bound("case1_y2_max", s4.case1_y2_max)
            .bound("case1_x2_size", s4.case1_x2_size)
            .bound("case1_x2_max", s4.case1_x2_max)
            .bound("case2_x2_max", s4.case2_x2_max)
            .bound("case2_y2_size", s4.case2_y2_size)
            .bound("case2_y2_max", s4.case2_y2_max)
            .bound("x2_max", s4.x2_max)
            .bound("y2_max", s4.y2_max);
        self.run.stage4 = Some(s4);
        Ok(e)
    }

    fn run_stage5(&mut self) -> Result<StageEntry> {
        let s3 = self.run.stage3.as_ref().expect("checked");
        let s4 = self.run.stage4.as_ref().expect("checked");
        let bx = stages::main_box(s3, s4)?;
        let key = (
            bx.x1.clone(),
            bx.x2.clone(),
            bx.y1.clone(),
            bx.y2.clone(),
        );
        let out: SearchOutcome = self
            .cache
            .get_or_compute("stage5_search", &key, 0, || stages::stage5(&bx))?;
        let mut e = StageEntry::new(StageStatus::Ok);
        e.input(
            "box",
            format!("x1 {:?}, x2 {:?}, y1 {:?}, y2 {:?}", bx.x1, bx.x2, bx.y1, bx.y2),
        )
        .case("pairs", out.pairs)
        .case("candidates", out.candidates)
        .case("solutions", format!("{:?}", out.solutions.as_slice()));
        self.run.stage5 = Some(out);
        Ok(e)
    }

    fn run_stage6(&mut self) -> Result<StageEntry> {
        let mut e = StageEntry::new(StageStatus::Ok);
        let sieve = special::x1_two(self.config.families.sieve_modulus)?;
        e.input("sieve_modulus", self.config.families.sieve_modulus)
            .case("x1=2 grid", sieve.grid_size)
            .case("x1=2 survivors", sieve.survivors.len());
        if !sieve.eliminated() {
            self.notes.push(format!(
                "x1 = 2: {} residue classes survive modulo {}",
                sieve.survivors.len(),
                self.config.families.sieve_modulus
            ));
        }
        self.run.x1_two = Some(sieve);

        let a = with_precision_retry(&self.ctx, special::x1_one)?;
        let l = &mut self.ledger;
        l.record("x1=1: C6", lp(&a.gamma6, "x2"), "stage6: Matveev, 3 logarithms")?;
        l.record("x1=1: y1", lp(&a.k1, "x2"), "stage6")?;
        l.record("x1=1: C7", lp(&a.gamma7, "x2"), "stage6: Matveev, 4 logarithms")?;
        l.record("x1=1: y2", lp(&a.k2, "x2"), "stage6")?;
        l.record_int("x1=1: x2", a.x2_bound.clone(), "stage6: polylog inequality")?;
        l.record_int("x1=1: y1", a.k1_star, "stage6: LLL")?;
        l.record("x1=1: C7*", lp(&a.gamma7_star, "x2"), "stage6: Matveev with y1 bounded")?;
        l.record_int("x1=1: x2", a.x2_bound_star.clone(), "stage6: polylog inequality with y1 bounded")?;
        l.record_int("x1=1: y2", a.y2_max, "stage6: Baker-Davenport")?;
        e.constant("x1=1: C6", &a.gamma6)
            .constant("x1=1: K1", &a.k1)
            .constant("x1=1: C7", &a.gamma7)
            .constant("x1=1: K2", &a.k2)
            .bound("x1=1: x2_bound", &a.x2_bound)
            .constant("x1=1: lll_lower", sci(&a.lll_lower))
            .bound("x1=1: K1*", a.k1_star)
            .constant("x1=1: C7*", &a.gamma7_star)
            .constant("x1=1: K2*", &a.k2_star)
            .bound("x1=1: x2_bound*", &a.x2_bound_star)
            .bound("x1=1: y2_max", a.y2_max)
            .case("x1=1: checked", a.checked)
            .case("x1=1: solutions", format!("{:?}", a.solutions.as_slice()));
        self.run.x1_one = Some(a);

        let b = with_precision_retry(&self.ctx, special::y1_one)?;
        let l = &mut self.ledger;
        l.record("y1=1: C'", lp(&b.gamma_first, "z"), "stage6: Matveev, 3 logarithms")?;
        l.record("y1=1: C''", lp(&b.gamma_second, "z"), "stage6: Matveev, 4 logarithms")?;
        l.record_int("y1=1: z", b.z_bound.clone(), "stage6: polylog inequality")?;
        l.record_int("y1=1: x1", b.k1_star, "stage6: LLL")?;
        l.record_int("y1=1: x2", b.x2_max, "stage6: Baker-Davenport")?;
        e.constant("y1=1: K1", &b.k1)
            .constant("y1=1: K2", &b.k2)
            .bound("y1=1: z_bound", &b.z_bound)
            .constant("y1=1: lll_lower", sci(&b.lll_lower))
            .bound("y1=1: K1*", b.k1_star)
            .bound("y1=1: x2_max", b.x2_max)
            .case("y1=1: checked", b.checked)
            .case("y1=1: solutions", format!("{:?}", b.solutions.as_slice()));
        self.run.y1_one = Some(b);
        Ok(e)
    }

    fn coverage(&self) -> Vec<CoverageItem> {
        let sieve_ok = self.run.x1_two.as_ref().is_some_and(|s| s.eliminated());
        let special = self.ok("stage6_special");
        let item = |region: &str, by: &str, ok: bool| CoverageItem {
            region: region.into(),
            covered_by: by.into(),
            established: ok,
        };
        vec![
            item("x1 + x2 <= 3 or y1 + y2 <= 3", "stage0_small", self.ok("stage0_small")),
            item("x1 = 1, y1 = 1", "stage6_special (y1 = 1)", special),
            item("x1 = 1, y1 >= 2", "stage6_special (x1 = 1)", special),
            item("x1 = 2", "stage6_special (sieve)", special && sieve_ok),
            item("x1 >= 3, y1 = 1", "stage6_special (y1 = 1)", special),
            item(
                "x1 >= 3, y1 >= 2",
                "stage1..stage5",
                STAGE_KEYS[1..6].iter().all(|k| self.ok(k)),
            ),
        ]
    }

    fn execute(mut self) -> ProofRun {
        let t = self.config.stages;
        self.stage("stage0_small", true, None, Self::run_stage0);
        self.stage("stage1_matveev", t.matveev, None, Self::run_stage1);
        let m = (!self.ok("stage1_matveev")).then_some("stage1_matveev");
        self.stage("stage2_lll", t.lll, m, Self::run_stage2);
        let m = (!self.ok("stage2_lll")).then_some("stage2_lll");
        self.stage("stage3_bd", t.bd, m, Self::run_stage3);
        let m = (!self.ok("stage3_bd")).then_some("stage3_bd");
        self.stage("stage4_pairwise", t.pairwise, m, Self::run_stage4);
        let m = (!self.ok("stage4_pairwise")).then_some("stage4_pairwise");
        self.stage("stage5_search", t.search, m, Self::run_stage5);
        self.stage("stage6_special", t.special, None, Self::run_stage6);

        let mut all = self.run.small.clone().unwrap_or_else(|| SolutionSet::from_unsorted(vec![]));
        for s in [
            self.run.stage5.as_ref().map(|o| &o.solutions),
            self.run.x1_one.as_ref().map(|o| &o.solutions),
            self.run.y1_one.as_ref().map(|o| &o.solutions),
        ]
        .into_iter()
        .flatten()
        {
            all = all.union(s);
        }
        if let Some(s4) = &self.run.stage4 {
            if s4.case2_y2_size % 2 == 0 {
                self.notes.push(format!(
                    "Case 2 size step gives y2 <= {}, lowered to {} by parity",
                    s4.case2_y2_size, s4.case2_y2_max
                ));
            }
        }
        let coverage = self.coverage();
        let proved = coverage.iter().all(|c| c.established);
        for c in coverage.iter().filter(|c| !c.established) {
            self.notes.push(format!("region {} not established", c.region));
        }
        self.run.report = ProofReport {
            status: if proved { ProofStatus::Proved } else { ProofStatus::Incomplete },
            equation: self.config.equation,
            precision: self.config.precision,
            stages: self.entries,
            ledger: self.ledger.records(),
            solutions: all.as_slice().to_vec(),
            coverage,
            notes: self.notes,
            timings: self.timings,
        };
        self.run
    }
}

fn empty_report() -> ProofReport {
    ProofReport {
        status: ProofStatus::Incomplete,
        equation: Default::default(),
        precision: Default::default(),
        stages: BTreeMap::new(),
        ledger: BTreeMap::new(),
        solutions: vec![],
        coverage: vec![],
        notes: vec![],
        timings: BTreeMap::new(),
    }
}

/// Runs every enabled stage. Configuration problems are errors; a stage
/// that fails is recorded in the report, which is then `INCOMPLETE`.
pub fn prove(config: &PipelineConfig) -> Result<ProofRun> {
    let p = Pipeline::new(config.clone())?;
    let run = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| p.execute()),
        None => p.execute(),
    };
    if let Some(path) = &config.report {
        run.report.write(path)?;
    }
    Ok(run)
}

/// Integer entries of the ledger, for comparing runs.
pub fn integer_bounds(report: &ProofReport) -> BTreeMap<String, BigInt> {
    report
        .ledger
        .iter()
        .filter_map(|(k, r)| r.value.parse::<BigInt>().ok().map(|v| (k.clone(), v)))
        .collect()
}
