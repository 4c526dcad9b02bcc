//! Acceptance suite: one PASS / FAIL / SKIP line per criterion.
//!
//! Criterion 8 needs the public datasets and a LIWC-format dictionary:
//! set `VERITAG_DATASETS` to a directory holding the corpora `celebrity/`,
//! `us_election2016/` and `political_news/`, and `VERITAG_LIWC_DIC` to
//! the dictionary file. Without them the criterion is skipped.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng as _;
use serde_json::Value;
use veritag::config::RunConfig;
use veritag::formats::split_report;
use veritag::jobs::RayonJobs;
use veritag_core::eval::{cross_domain_eval, kfold_cv, temporal_eval, EvalConfig};
use veritag_core::features::{apply_paper_pruning, page_features, FeatureSchema, Granularity, Group};
use veritag_core::html::Document;
use veritag_core::markup::{extract_article, markup_features, AdDomains, MARKUP_FEATURE_NAMES};
use veritag_core::models::{
    knn_train, rf_train, svm_train_sparse, ClassifierConfig, ClassifierKind, Sample, SparseVec,
};
use veritag_core::rng::from_seed;
use veritag_core::selection::{aggregate_importance, geometric_mean4, select_features, SelectionConfig};
use veritag_core::text::{count_syllables, readability_features, tokenize_with, CategoryDictionary, TextResources};

use common::{corpus_samples, fixture, margin_separated, selection_suite, xor};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// 1. Readability formulas against values recomputed here from the module's
// own token, sentence, syllable and character counts.
fn readability_oracle() -> Check {
    let start = Instant::now();
    let text = std::fs::read_to_string(fixture("readability.txt")).map_err(|e| e.to_string())?;
    let res = TextResources::default();
    let tok = tokenize_with(&text, &res.abbreviations);
    let s = readability_features(&tok, &res);

    let w = tok.tokens.len() as f64;
    let stc = tok.sentences.len() as f64;
    ensure(stc == 10.0, || format!("expected 10 sentences, found {stc}"))?;
    let syl: Vec<usize> = tok.tokens.iter().map(|t| count_syllables(t)).collect();
    let sy = syl.iter().sum::<usize>() as f64;
    let complex = syl.iter().filter(|s| **s >= 3).count() as f64;
    let letters = tok.tokens.iter().flat_map(|t| t.chars()).filter(|c| c.is_alphabetic()).count() as f64;
    let ch = text.chars().filter(|c| !c.is_whitespace()).count() as f64;

    let expected = [
        ("FRI", 206.835 - 1.015 * (w / stc) - 84.6 * (sy / w), s.fri),
        ("FKI", 0.39 * (w / stc) + 11.8 * (sy / w) - 15.59, s.fki),
        ("CLI", 0.0588 * (100.0 * letters / w) - 0.296 * (100.0 * stc / w) - 15.8, s.cli),
        ("ARI", 4.71 * (ch / w) + 0.5 * (w / stc) - 21.43, s.ari),
        ("GFI", 0.4 * ((w / stc) + 100.0 * (complex / w)), s.gfi),
    ];
    for (name, want, got) in expected {
        ensure(close(want, got, 1e-6), || format!("{name}: expected {want}, got {got}"))?;
    }
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("W={w} STC={stc} SY={sy}; FRI={:.4} FKI={:.4} CLI={:.4} ARI={:.4} GFI={:.4}", s.fri, s.fki, s.cli, s.ari, s.gfi))
}

// 2. The geometric-mean importance.
fn eq1_suite() -> Check {
    let start = Instant::now();
    ensure(geometric_mean4([1.0; 4]) == 1.0, || "all ones must give 1".into())?;
    ensure(geometric_mean4([0.0625, 1.0, 1.0, 1.0]) == 0.5, || "(0.0625,1,1,1) must give 0.5".into())?;
    ensure(close(geometric_mean4([0.5, 0.5, 0.5, 0.5]), 0.5, 1e-15), || "(0.5)^4 must give 0.5".into())?;
    let mut rng = from_seed(2024);
    for i in 0..1000 {
        let f: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..=1.0));
        for j in 0..4 {
            let mut z = f;
            z[j] = 0.0;
            ensure(geometric_mean4(z) == 0.0, || format!("tuple {i}: zero factor {j} did not annihilate"))?;
            let mut up = f;
            up[j] = rng.gen_range(f[j]..=1.0);
            ensure(geometric_mean4(up) >= geometric_mean4(f), || format!("tuple {i}: not monotone in factor {j}"))?;
        }
        let prod = f.iter().product::<f64>();
        ensure(close(geometric_mean4(f), prod.powf(0.25), 1e-12), || format!("tuple {i}: not the fourth root"))?;
    }
    // Permuting features permutes the scores.
    let d = 12;
    let cols: Vec<Vec<f64>> = (0..4).map(|_| (0..d).map(|_| rng.gen_range(0.0..3.0)).collect()).collect();
    let base = aggregate_importance(&cols[0], &cols[1], &cols[2], &cols[3]).map_err(|e| e.to_string())?;
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let p: Vec<Vec<f64>> = cols.iter().map(|c| perm.iter().map(|i| c[*i]).collect()).collect();
    let permuted = aggregate_importance(&p[0], &p[1], &p[2], &p[3]).map_err(|e| e.to_string())?;
    for (k, i) in perm.iter().enumerate() {
        ensure(permuted.features[k] == base.features[*i], || format!("feature {i} changed under permutation"))?;
    }
    within_time(start, Duration::from_secs(5))?;
    Ok("annihilation, identity, fourth roots, 1000-tuple monotonicity, permutation equivariance".into())
}

// 3. Selection on label copy + constant + noise.
fn selection_sanity() -> Check {
    let start = Instant::now();
    let (x, y) = selection_suite(500, 18, 11);
    let names: Vec<String> = (0..20).map(|i| format!("R.F{i}")).collect();
    let schema = FeatureSchema {
        names,
        granularity: Granularity::HC,
        groups: vec![Group::R],
        pruning: Default::default(),
    };
    let (kept, report) = select_features(&x, &y, &schema, &SelectionConfig::default()).map_err(|e| e.to_string())?;
    let r: Vec<f64> = report.scores.features.iter().map(|f| f.r).collect();
    let max = r.iter().copied().fold(f64::MIN, f64::max);
    ensure(r[0] == max && r[0] > 0.0, || format!("label copy r={} but max r={max}", r[0]))?;
    ensure(report.retained[0], || "label copy not retained".into())?;
    ensure(r[1] == 0.0 && !report.retained[1], || format!("constant feature r={}", r[1]))?;
    within_time(start, Duration::from_secs(60))?;
    Ok(format!("label copy r={:.3}; constant r=0; {} of 20 features kept", r[0], kept.len()))
}

// 4. Classifiers.
fn classifier_suite() -> Check {
    let start = Instant::now();
    let (x, y) = margin_separated(200, 5);
    let rows: Vec<SparseVec> = x.iter().map(|r| SparseVec::from_dense(r)).collect();
    let (svm, trace) = svm_train_sparse(&rows, 2, &y, 0.1).map_err(|e| e.to_string())?;
    let svm_acc = x.iter().zip(&y).filter(|(r, c)| svm.predict(r).unwrap().class == **c).count() as f64 / 200.0;
    ensure(svm_acc == 1.0, || format!("svm training accuracy {svm_acc}"))?;
    for w in trace.dual_objective.windows(2) {
        ensure(w[1] <= w[0] + 1e-9, || format!("svm objective rose from {} to {}", w[0], w[1]))?;
    }
    let (svm2, _) = svm_train_sparse(&rows, 2, &y, 0.1).map_err(|e| e.to_string())?;
    ensure(serde_json::to_string(&svm).unwrap() == serde_json::to_string(&svm2).unwrap(), || "svm not reproducible".into())?;

    let knn = knn_train(&x, &y, 1).map_err(|e| e.to_string())?;
    let knn_ok = x.iter().zip(&y).all(|(r, c)| knn.predict(r).unwrap().class == *c);
    ensure(knn_ok, || "knn k=1 self-prediction below 100%".into())?;
    let knn2 = knn_train(&x, &y, 1).map_err(|e| e.to_string())?;
    ensure(serde_json::to_string(&knn).unwrap() == serde_json::to_string(&knn2).unwrap(), || "knn not reproducible".into())?;

    let (xs, ys) = xor(400, 17);
    let (train_x, test_x) = xs.split_at(300);
    let (train_y, test_y) = ys.split_at(300);
    let rf = rf_train(train_x, train_y, 100, 3).map_err(|e| e.to_string())?;
    let rf_acc = test_x.iter().zip(test_y).filter(|(r, c)| rf.predict(r).unwrap().class == **c).count() as f64
        / test_x.len() as f64;
    ensure(rf_acc > 0.9, || format!("rf held-out xor accuracy {rf_acc}"))?;
    let rf2 = rf_train(train_x, train_y, 100, 3).map_err(|e| e.to_string())?;
    ensure(serde_json::to_string(&rf).unwrap() == serde_json::to_string(&rf2).unwrap(), || "rf not reproducible".into())?;
    within_time(start, Duration::from_secs(120))?;
    Ok(format!("svm train acc 1.0 ({} passes, monotone), knn self 100%, rf xor held-out {rf_acc:.3}", trace.dual_objective.len()))
}

// 5. Markup fixtures against counts from an independent HTML parser.
fn markup_fixtures() -> Check {
    let expected: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("markup/expected.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let expected = expected.as_object().ok_or("expected.json is not an object")?;
    ensure(expected.len() == 12, || format!("{} fixture files, expected 12", expected.len()))?;
    let ads = AdDomains::default();
    let res = veritag_core::features::ExtractionResources::default();
    for (file, want) in expected {
        let html = std::fs::read(fixture(&format!("markup/{file}"))).map_err(|e| e.to_string())?;
        let doc = Document::parse(&html);
        let got = markup_features(&doc, &ads).values();
        for (name, v) in MARKUP_FEATURE_NAMES.iter().zip(got) {
            let w = want[*name].as_f64().ok_or_else(|| format!("{file}: no expected {name}"))?;
            ensure(v == w, || format!("{file}: {name} = {v}, expected {w}"))?;
        }
        let article = extract_article(&doc);
        let per_gran: Vec<_> =
            Granularity::ALL.iter().map(|g| page_features(&article, &doc, *g, &[Group::W], &res)).collect();
        ensure(per_gran.windows(2).all(|p| p[0] == p[1]), || format!("{file}: W features differ across granularities"))?;
    }
    Ok("12 files: tag groups, ADS and AU equal the oracle counts; W identical for H/C/HC".into())
}

fn report_mean(text: &str) -> Option<f64> {
    let (_, body) = split_report(text)?;
    body.lines().find_map(|l| l.strip_prefix("mean,")).and_then(|v| v.parse().ok())
}

// 6. End-to-end through the binary.
fn end_to_end() -> Check {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("cv.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_veritag"))
        .args(["evaluate", "--protocol", "cv", "--corpus"])
        .arg(fixture("mini_corpus"))
        .arg("--out")
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || format!("veritag exited {:?}: {}", status.status, String::from_utf8_lossy(&status.stderr)))?;
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let mean = report_mean(&text).ok_or("report has no mean row")?;
    ensure(mean >= 0.9, || format!("5-fold mean accuracy {mean} < 0.9"))?;
    within_time(start, Duration::from_secs(120))?;
    Ok(format!("mini-corpus 5-fold CV mean accuracy {mean}"))
}

fn within_year_cv(samples: &[Sample], schema: &FeatureSchema, cfg: &EvalConfig, jobs: &RayonJobs) -> Result<f64, String> {
    let years: BTreeSet<i32> = samples.iter().filter_map(|s| s.year).collect();
    let mut accs = Vec::new();
    for y in &years {
        let subset: Vec<Sample> = samples.iter().filter(|s| s.year == Some(*y)).cloned().collect();
        accs.push(kfold_cv(&subset, schema, cfg, jobs).map_err(|e| e.to_string())?.mean_accuracy);
    }
    Ok(accs.iter().sum::<f64>() / accs.len() as f64)
}

// 7. Drift: topic vocabulary swaps between years, style does not.
fn temporal_drift() -> Check {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let (schema, samples) = corpus_samples(&fixture("drift_corpus"), &cfg);
    let jobs = RayonJobs::new(0).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    let mut cross_within = Vec::new();
    for kind in [ClassifierKind::BaselineSvm, ClassifierKind::Svm] {
        let ecfg = EvalConfig { classifier: ClassifierConfig::with_kind(kind), folds: 5, seed: cfg.seed };
        let within = within_year_cv(&samples, &schema, &ecfg, &jobs)?;
        let report = temporal_eval(&samples, &schema, &ecfg, &jobs).map_err(|e| e.to_string())?;
        ensure(report.cells.len() == 2, || format!("{} temporal cells", report.cells.len()))?;
        let cross = report.cells.iter().map(|c| c.accuracy).sum::<f64>() / report.cells.len() as f64;
        summary.push(format!("{kind}: within {within:.3}, cross {cross:.3}"));
        cross_within.push((within, cross));
    }
    let (bw, bc) = cross_within[0];
    let (tw, tc) = cross_within[1];
    ensure(bw - bc >= 0.2, || format!("baseline drop {:.3} < 0.2 ({})", bw - bc, summary.join("; ")))?;
    ensure((tw - tc).abs() <= 0.05, || format!("TAG moved {:.3} > 0.05 ({})", (tw - tc).abs(), summary.join("; ")))?;
    within_time(start, Duration::from_secs(180))?;
    Ok(summary.join("; "))
}

// 8. Published numbers on the public corpora (dataset-gated).
fn dataset_reproduction() -> Outcome {
    let (Some(data), Some(dic)) = (std::env::var_os("VERITAG_DATASETS"), std::env::var_os("VERITAG_LIWC_DIC")) else {
        return Outcome::Skip("set VERITAG_DATASETS and VERITAG_LIWC_DIC to run".into());
    };
    let data = PathBuf::from(data);
    let names = ["celebrity", "us_election2016", "political_news"];
    if let Some(missing) = names.iter().find(|n| !data.join(n).join("manifest.jsonl").exists()) {
        return Outcome::Skip(format!("dataset {missing} not found under {}", data.display()));
    }
    let run = || -> Check {
        let jobs = RayonJobs::new(0).map_err(|e| e.to_string())?;
        let base = RunConfig { dictionary: Some(PathBuf::from(&dic)), ..RunConfig::default() };
        // Best configurations: (corpus, groups, granularity, reference accuracy).
        let best = [
            ("celebrity", "L-R-W", Granularity::C, 0.78),
            ("us_election2016", "L-N-R-W", Granularity::HC, 0.86),
            ("political_news", "L-N-R-W", Granularity::H, 0.83),
        ];
        let mut lines = Vec::new();
        let mut failures = Vec::new();
        for (name, groups, gran, reference) in best {
            let cfg = RunConfig { groups: groups.into(), granularity: gran, ..base.clone() };
            let (schema, samples) = corpus_samples(&data.join(name), &cfg);
            let ecfg = EvalConfig { classifier: cfg.classifier.clone(), folds: 5, seed: cfg.seed };
            let acc = kfold_cv(&samples, &schema, &ecfg, &jobs).map_err(|e| e.to_string())?.mean_accuracy;
            lines.push(format!("{name} {acc:.3} (ref {reference})"));
            if (acc - reference).abs() > 0.07 {
                failures.push(format!("{name}: {acc:.3} vs {reference}"));
            }
        }
        let cfg = RunConfig { groups: "L-N-R-W".into(), granularity: Granularity::HC, ..base.clone() };
        let (schema, celeb) = corpus_samples(&data.join("celebrity"), &cfg);
        let (_, election) = corpus_samples(&data.join("us_election2016"), &cfg);
        let svm = [ClassifierConfig::with_kind(ClassifierKind::Svm)];
        for (train, test, label, reference) in [(&celeb, &election, "celebrity->us_election2016", 0.70), (&election, &celeb, "us_election2016->celebrity", 0.63)] {
            let acc = cross_domain_eval(train, test, &schema, &svm, cfg.seed, &jobs).map_err(|e| e.to_string())?[0].accuracy;
            lines.push(format!("{label} svm {acc:.3} (ref {reference})"));
            if (acc - reference).abs() > 0.07 {
                failures.push(format!("{label}: {acc:.3} vs {reference}"));
            }
        }
        if failures.is_empty() {
            Ok(lines.join("; "))
        } else {
            Err(format!("outside ±0.07: {} [{}]", failures.join(", "), lines.join("; ")))
        }
    };
    match run() {
        Ok(m) => Outcome::Pass(m),
        Err(m) => Outcome::Fail(m),
    }
}

// 9. Published pruning lists, checked against hand-expanded expectations
// on the full schema built with the bundled dictionary.
fn pruning_lists() -> Check {
    let dict = CategoryDictionary::default();
    let markup_dropped = ["W.FT", "W.FIT", "W.FRT", "W.LT", "W.TT", "W.MT", "W.PT"];
    let cases: [(Granularity, Vec<&str>); 3] = [
        (
            Granularity::H,
            vec![
                "N.FOW", "N.IN", "N.JJR", "N.PRP$", "N.TO", "N.VBD", "N.VBG", "N.VBZ", "N.WP$", "R.MSI", "R.CW.cap",
                "R.CW.complex", "L.BP.ingest", "L.RL.time", "L.PC.home",
            ],
        ),
        (Granularity::C, vec!["N.DT", "N.PDT", "N.RBR", "N.RP", "L.OG.quant", "L.OG.interrog", "N.UH"]),
        (Granularity::HC, vec!["N.DT", "N.JJS", "N.PDT", "N.POS", "N.RBR", "N.RBS", "N.UH", "N.WRB"]),
    ];
    let mut sizes = Vec::new();
    for (g, listed) in cases {
        let full = FeatureSchema::full(g, &Group::ALL, &dict);
        let out = apply_paper_pruning(&full);
        let want: BTreeSet<&str> = listed.iter().chain(markup_dropped.iter()).copied().collect();
        let removed: BTreeSet<&str> =
            full.names.iter().map(String::as_str).filter(|n| out.schema.index_of(n).is_none()).collect();
        ensure(removed == want, || format!("{g}: removed {removed:?}, expected {want:?}"))?;
        let kept: BTreeSet<&str> = out.schema.names.iter().filter_map(|n| n.strip_prefix("W.")).collect();
        let kept_want: BTreeSet<&str> = ["IT", "AVT", "AU", "LKT", "ADS", "ST", "BT"].into();
        ensure(kept == kept_want, || format!("{g}: web-markup kept {kept:?}"))?;
        sizes.push(format!("{g} {}->{}", full.len(), out.schema.len()));
    }
    Ok(format!("exact removal sets; W kept = {{IT, AVT, AU, LKT, ADS, ST, BT}}; {}", sizes.join(", ")))
}

fn main() {
    let checks: [(&str, Box<dyn Fn() -> Outcome>); 9] = [
        ("readability oracle", Box::new(|| readability_oracle().into())),
        ("geometric-mean importance", Box::new(|| eq1_suite().into())),
        ("selection sanity", Box::new(|| selection_sanity().into())),
        ("classifier suite", Box::new(|| classifier_suite().into())),
        ("markup fixtures", Box::new(|| markup_fixtures().into())),
        ("end-to-end mini-corpus", Box::new(|| end_to_end().into())),
        ("temporal drift", Box::new(|| temporal_drift().into())),
        ("dataset reproduction", Box::new(dataset_reproduction)),
        ("pruning lists", Box::new(|| pruning_lists().into())),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Outcome::Fail("panicked".into()));
        let (tag, msg) = match outcome {
            Outcome::Pass(m) => ("PASS", m),
            Outcome::Fail(m) => {
                failed += 1;
                ("FAIL", m)
            }
            Outcome::Skip(m) => ("SKIP", m),
        };
        println!("criterion {} {tag}: {name}: {msg}", i + 1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

impl From<Check> for Outcome {
    fn from(c: Check) -> Self {
        match c {
            Ok(m) => Outcome::Pass(m),
            Err(m) => Outcome::Fail(m),
        }
    }
}
