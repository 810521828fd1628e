//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use expertrank::cohits::{
    iterate, l2_normalize, seed_from_weights, update_authority, update_hub, IterationState,
};
use expertrank::extractor::{extract_corpus, TopicPhrase};
use expertrank::matrices::{build_dpm, build_etopm, nidf, ntf, DfIndex};
use expertrank::ranking::rank_scores;
use expertrank::sparse::CsrMatrix;
use expertrank::{
    load_index, AuthorityInit, CoHitsParams, Corpus, CorpusFormat, Ecg, ExtractionConfig, HubInit,
    Index, NodeOrdering, Role, Vocabulary, WeightMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const T1: &str = "healthcare analytics";

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/table1")
}

fn table1() -> Corpus {
    Corpus::ingest(&fixture(), CorpusFormat::Csv).unwrap()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expertrank"))
        .args(args)
        .env_remove("EXPERTRANK_STOPWORDS")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn close(actual: &[f64], expected: &[f64], eps: f64, what: &str) -> Result<(), String> {
    check(actual.len() == expected.len(), || {
        format!("{what}: length {}", actual.len())
    })?;
    for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
        check((a - e).abs() <= eps, || {
            format!("{what}[{i}] = {a:.6}, expected {e} within {eps:e}")
        })?;
    }
    Ok(())
}

fn timed<T>(budget: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let value = f();
    let elapsed = start.elapsed();
    check(elapsed < budget, || {
        format!("{what} took {elapsed:?}, budget {budget:?}")
    })?;
    Ok(value)
}

fn built_table1() -> Index {
    Index::from_corpus(
        &table1(),
        &ExtractionConfig::default(),
        NodeOrdering::Interleaved,
    )
    .unwrap()
}

// ---------------------------------------------------------------- 1

fn formula_fixtures() -> Outcome {
    let corpus = table1();
    let extraction = extract_corpus(&corpus, &ExtractionConfig::default()).unwrap();
    let index = Index::build(
        &corpus,
        &extraction,
        ExtractionConfig::default().snapshot(),
        NodeOrdering::Interleaved,
    )
    .unwrap();
    let t = index.topics.index(T1).ok_or("topic missing")?;
    let ms = Duration::from_millis(1);
    let dtm = &index.matrices.dtm;

    let tf = timed(ms, "nTF", || {
        ntf(&TopicPhrase::from_key(T1), 0, dtm, &index.tokens)
    })
    .and_then(|r| r.map_err(|e| e.to_string()))?;
    check(tf == 1.5, || format!("nTF = {tf}, expected exactly 1.5"))?;

    let df = DfIndex::build(&extraction, dtm).unwrap();
    let idf = timed(ms, "nIDF", || nidf(df.topic_df[t], df.topic_conj_df[t], 3))?;
    close(&[idf], &[1.693], 1e-3, "nIDF")?;

    let dpm = timed(ms, "DPM", || build_dpm(&extraction, dtm, &df).unwrap())?;
    close(&[dpm.get(0, t)], &[2.540], 1e-3, "DPM[d1,t1]")?;

    let etopm = timed(ms, "ETopM", || {
        build_etopm(&index.matrices.edm, &dpm).unwrap()
    })?;
    close(&etopm.column(t), &[2.540, 2.540, 0.0], 1e-3, "ETopM[*,t1]")?;
    Ok(format!(
        "nTF={tf} nIDF={idf:.4} DPM={:.4} ETopM={:?}",
        dpm.get(0, t),
        etopm
            .column(t)
            .iter()
            .map(|v| format!("{v:.4}"))
            .collect::<Vec<_>>()
    ))
}

// ---------------------------------------------------------------- 2

fn graph_fixtures() -> Outcome {
    let index = built_table1();
    let labels = index.ecg.node_labels(&index.experts, &index.documents);
    check(labels == ["d1", "x1", "x2", "d2", "x3", "d3"], || {
        format!("ordering {labels:?}")
    })?;
    let expected = vec![
        vec![0.0, 1.0, 1.0, 0.0, 0.0, 0.0],
        vec![0.0; 6],
        vec![0.0; 6],
        vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
        vec![0.0; 6],
        vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    ];
    let m = index.ecg.adjacency().to_dense();
    check(m == expected, || format!("M = {m:?}"))?;
    let (cx, cd) = index.ecg.count_vectors();
    check(cx == [1.0, 2.0, 2.0, 1.0, 1.0, 1.0], || {
        format!("c_x = {cx:?}")
    })?;
    check(cd == [2.0, 1.0, 1.0, 2.0, 1.0, 1.0], || {
        format!("c_d = {cd:?}")
    })?;
    Ok("M, c_x and c_d exact".into())
}

// ---------------------------------------------------------------- 3

fn iteration_fixtures() -> Outcome {
    let index = built_table1();
    let (cx, cd) = index.ecg.count_vectors();
    let a1 = update_authority(
        &[0.0; 6],
        &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0],
        index.ecg.adjacency_transpose(),
        cd,
        1.0,
    );
    check(a1 == [0.0, 2.0, 2.0, 0.0, 1.0, 0.0], || {
        format!("a1 = {a1:?}")
    })?;
    let h1 = update_hub(
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &a1,
        index.ecg.adjacency(),
        cx,
        0.7,
    );
    // decimal constants are not representable; allow double rounding only
    close(&h1, &[3.1, 0.0, 0.0, 2.1, 0.0, 1.4], 1e-12, "h1")?;
    close(
        &l2_normalize(&a1),
        &[0.0, 0.667, 0.667, 0.0, 0.333, 0.0],
        1e-3,
        "a1 normalized",
    )?;
    close(
        &l2_normalize(&h1),
        &[0.776, 0.0, 0.0, 0.525, 0.0, 0.350],
        1e-3,
        "h1 normalized",
    )?;
    Ok(format!(
        "a1={a1:?} h1=[{:.1}, {:.1}, {:.1}] (nonzero)",
        h1[0], h1[3], h1[5]
    ))
}

// ---------------------------------------------------------------- 4

fn end_to_end() -> Outcome {
    let tmp = TempDir::new().unwrap();
    let idx = tmp.path().join("idx");
    let out = timed(Duration::from_secs(1), "pipeline", || {
        cli(&[
            "pipeline",
            "--in",
            path_str(&fixture()),
            "--out",
            path_str(&idx),
            "--hub-init",
            "uniform_docs",
        ])
    })?;
    check(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    let index = load_index(&idx).map_err(|e| e.to_string())?;
    let t = index.topics.index(T1).ok_or("topic missing")?;
    let column = index.retopm().unwrap().column(t);
    let ranked = cli(&[
        "rank",
        "--index",
        path_str(&idx),
        "--query",
        "health analytics",
    ]);
    let stdout = String::from_utf8_lossy(&ranked.stdout).into_owned();
    let order: Vec<&str> = stdout
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split('\t').nth(1))
        .collect();
    let detail = format!(
        "RETopM[*,t1]=({:.3}, {:.3}, {:.3}) rank order {order:?}",
        column[0], column[1], column[2]
    );
    let values = close(&column, &[0.577, 0.595, 0.560], 5e-3, "RETopM[*,t1]");
    let ordering = check(order == ["x2", "x1", "x3"], || {
        format!("rank order {order:?}")
    });
    match (values, ordering) {
        (Ok(()), Ok(())) => Ok(detail),
        (Err(e), _) | (_, Err(e)) => Err(format!("{e}; {detail}")),
    }
}

// ---------------------------------------------------------------- 5

struct RandomInstance {
    corpus: Corpus,
    etopm: Vec<Vec<f64>>,
    dtopm: Vec<Vec<f64>>,
}

fn random_instance(rng: &mut ChaCha8Rng) -> RandomInstance {
    let nodes = rng.gen_range(2..=12);
    let nd = rng.gen_range(1..nodes);
    let nx = nodes - nd;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for d in 0..nd {
        for x in 0..nx {
            if rng.gen_bool(0.35) {
                pairs.push((x, d));
            }
        }
    }
    for d in 0..nd {
        if !pairs.iter().any(|p| p.1 == d) {
            pairs.push((rng.gen_range(0..nx), d));
        }
    }
    for x in 0..nx {
        if !pairs.iter().any(|p| p.0 == x) {
            pairs.push((x, rng.gen_range(0..nd)));
        }
    }
    // shuffle records so expert indices and author order are arbitrary
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    let corpus = Corpus::from_records(
        (0..nd).map(|d| (format!("d{d}"), String::new())),
        pairs
            .iter()
            .map(|&(x, d)| (format!("x{x}"), format!("d{d}"))),
    )
    .unwrap();

    let topics = rng.gen_range(1..=10);
    let mut dtopm = vec![vec![0.0; topics]; nd];
    for row in &mut dtopm {
        for v in row.iter_mut() {
            if rng.gen_bool(0.5) {
                *v = rng.gen_range(0.1..5.0);
            }
        }
    }
    // authorship in corpus index space, multiplied out densely
    let mut etopm = vec![vec![0.0; topics]; corpus.num_experts()];
    for &(x, d) in corpus.authorship() {
        for t in 0..topics {
            etopm[x][t] += dtopm[d][t];
        }
    }
    RandomInstance {
        corpus,
        etopm,
        dtopm,
    }
}

/// Literal dense transcription over labels, independent of the graph type.
fn oracle(
    corpus: &Corpus,
    etopm: &[Vec<f64>],
    dtopm: &[Vec<f64>],
    params: &CoHitsParams,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let doc_label = |d: usize| corpus.documents()[d].id.label.clone();
    let expert_label = |x: usize| corpus.experts()[x].label.clone();
    let mut order: Vec<(bool, usize)> = Vec::new();
    for d in 0..corpus.num_documents() {
        order.push((true, d));
        for &(x, dd) in corpus.authorship() {
            if dd == d && !order.contains(&(false, x)) {
                order.push((false, x));
            }
        }
    }
    let n = order.len();
    let pos = |key: (bool, usize)| order.iter().position(|&k| k == key).unwrap();
    let mut m = vec![vec![0.0; n]; n];
    for &(x, d) in corpus.authorship() {
        m[pos((true, d))][pos((false, x))] = 1.0;
    }
    let mut c_x = vec![1.0; n];
    let mut c_d = vec![1.0; n];
    for (i, &(is_doc, _)) in order.iter().enumerate() {
        if is_doc {
            c_d[i] = (0..n).filter(|&j| m[i][j] == 1.0).count() as f64;
        } else {
            c_x[i] = (0..n).filter(|&j| m[j][i] == 1.0).count() as f64;
        }
    }
    let unit = |v: Vec<f64>| {
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if s > 1e-12 {
            v.iter().map(|x| x / s).collect()
        } else {
            v
        }
    };
    let topics = etopm.first().map_or(0, Vec::len);
    let mut columns = Vec::new();
    for t in 0..topics {
        let mut a = vec![0.0; n];
        let mut h = vec![0.0; n];
        for (i, &(is_doc, k)) in order.iter().enumerate() {
            if is_doc {
                h[i] = match params.hub_init {
                    HubInit::Nvsm => dtopm[k][t],
                    HubInit::UniformDocs => 1.0,
                };
            } else {
                a[i] = match params.authority_init {
                    AuthorityInit::Nvsm => etopm[k][t],
                    AuthorityInit::UniformExperts => 1.0,
                };
            }
        }
        if params.authority_init == AuthorityInit::Nvsm {
            a = unit(a);
        }
        if params.hub_init == HubInit::Nvsm {
            h = unit(h);
        }
        for _ in 0..params.iterations {
            let mut a_new = vec![0.0; n];
            for j in 0..n {
                let s: f64 = (0..n).map(|i| m[i][j] * h[i]).sum();
                a_new[j] = (1.0 - params.lambda_x) * a[j] + params.lambda_x * s / c_d[j];
            }
            let mut h_new = vec![0.0; n];
            for i in 0..n {
                let s: f64 = (0..n).map(|j| m[i][j] * a_new[j]).sum();
                h_new[i] = (1.0 - params.lambda_d) * h[i] + params.lambda_d * s / c_x[i];
            }
            a = unit(a_new);
            h = unit(h_new);
        }
        columns.push(
            (0..corpus.num_experts())
                .map(|x| a[pos((false, x))])
                .collect(),
        );
    }
    let labels = order
        .iter()
        .map(|&(is_doc, k)| {
            if is_doc {
                doc_label(k)
            } else {
                expert_label(k)
            }
        })
        .collect();
    (labels, columns)
}

fn matrix(role: Role, dense: &[Vec<f64>]) -> WeightMatrix {
    WeightMatrix::new(role, CsrMatrix::from_dense(dense).unwrap())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let grid = [0.0, 0.3, 0.7, 1.0];
    let mut runs = 0usize;
    let mut worst = 0.0f64;
    for g in 0..50 {
        let inst = random_instance(&mut rng);
        let ecg = Ecg::build(&inst.corpus, NodeOrdering::Interleaved);
        let topics = Vocabulary::new((0..inst.dtopm[0].len()).map(|t| format!("t{t:02}")));
        let etopm = matrix(Role::ETopM, &inst.etopm);
        let dtopm = matrix(Role::DTopM, &inst.dtopm);
        for hub_init in [HubInit::Nvsm, HubInit::UniformDocs] {
            for &lambda_x in &grid {
                for &lambda_d in &grid {
                    for iterations in [1, 5, 20] {
                        let params = CoHitsParams {
                            lambda_x,
                            lambda_d,
                            iterations,
                            hub_init,
                            authority_init: AuthorityInit::Nvsm,
                        };
                        let got =
                            expertrank::cohits::reinforce(&etopm, &dtopm, &ecg, &topics, &params)
                                .map_err(|e| e.to_string())?;
                        let (labels, expected) =
                            oracle(&inst.corpus, &inst.etopm, &inst.dtopm, &params);
                        let experts: Vec<String> = inst
                            .corpus
                            .experts()
                            .iter()
                            .map(|x| x.label.clone())
                            .collect();
                        let documents: Vec<String> = inst
                            .corpus
                            .documents()
                            .iter()
                            .map(|d| d.id.label.clone())
                            .collect();
                        check(ecg.node_labels(&experts, &documents) == labels, || {
                            format!("graph {g}: node order differs")
                        })?;
                        for (t, col) in expected.iter().enumerate() {
                            for (x, e) in col.iter().enumerate() {
                                let diff = (got.retopm.get(x, t) - e).abs();
                                worst = worst.max(diff);
                                check(diff <= 1e-9, || {
                                    format!(
                                        "graph {g} {params:?} topic {t} expert {x}: diff {diff:e}"
                                    )
                                })?;
                            }
                        }
                        runs += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{runs} runs over 50 graphs, max abs diff {worst:.1e}"
    ))
}

// ---------------------------------------------------------------- 6

fn random_corpus_json(rng: &mut ChaCha8Rng, docs: usize, experts: usize) -> String {
    const ADJ: [&str; 8] = [
        "deep", "sparse", "robust", "clinical", "spectral", "neural", "bayesian", "large",
    ];
    const NOUN: [&str; 12] = [
        "network",
        "graph",
        "model",
        "retrieval",
        "ranking",
        "embedding",
        "signal",
        "image",
        "protein",
        "record",
        "language",
        "kernel",
    ];
    let mut documents = Vec::new();
    let mut authorship = Vec::new();
    for d in 0..docs {
        let mut sentences = Vec::new();
        for _ in 0..rng.gen_range(2..6) {
            let mut words = vec!["we".to_string(), "study".to_string()];
            for _ in 0..rng.gen_range(1..3) {
                words.push(ADJ[rng.gen_range(0..ADJ.len())].into());
            }
            for _ in 0..rng.gen_range(1..4) {
                words.push(NOUN[rng.gen_range(0..NOUN.len())].into());
            }
            words.push("for".into());
            words.push(NOUN[rng.gen_range(0..NOUN.len())].into());
            sentences.push(words.join(" ") + ".");
        }
        documents.push(serde_json::json!({"id": format!("p{d}"), "text": sentences.join(" ")}));
        let mut authors: Vec<usize> = (0..rng.gen_range(1..4))
            .map(|_| rng.gen_range(0..experts))
            .collect();
        authors.sort_unstable();
        authors.dedup();
        for x in authors {
            authorship.push(serde_json::json!({"expert": format!("e{x}"), "doc": format!("p{d}")}));
        }
    }
    serde_json::json!({"documents": documents, "authorship": authorship}).to_string()
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0usize;
    for case in 0..200 {
        let inst = random_instance(&mut rng);
        let ecg = Ecg::build(&inst.corpus, NodeOrdering::Interleaved);
        let params = CoHitsParams {
            lambda_x: rng.gen_range(0.0..=1.0),
            lambda_d: rng.gen_range(0.0..=1.0),
            iterations: 1,
            hub_init: if rng.gen_bool(0.5) {
                HubInit::Nvsm
            } else {
                HubInit::UniformDocs
            },
            authority_init: AuthorityInit::Nvsm,
        };
        let t = rng.gen_range(0..inst.dtopm[0].len());
        let ew: Vec<f64> = inst.etopm.iter().map(|r| r[t]).collect();
        let dw: Vec<f64> = inst.dtopm.iter().map(|r| r[t]).collect();
        let experts: Vec<bool> = (0..ecg.num_nodes())
            .map(|i| matches!(ecg.nodes()[i], expertrank::Node::Expert(_)))
            .collect();

        let mut state: IterationState = seed_from_weights(&ew, &dw, &ecg, &params);
        for k in 1..=10 {
            state = iterate(state, &ecg, &params)
                .map_err(|i| format!("case {case}: non-finite at {i}"))?;
            for (name, v) in [("a", &state.authority), ("h", &state.hub)] {
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                check(norm == 0.0 || (norm - 1.0).abs() <= 1e-9, || {
                    format!("case {case} iteration {k}: |{name}| = {norm}")
                })?;
                check(v.iter().all(|&x| x >= 0.0), || {
                    format!("case {case}: negative {name}")
                })?;
            }
            for (i, &is_expert) in experts.iter().enumerate() {
                let leak = if is_expert {
                    state.hub[i]
                } else {
                    state.authority[i]
                };
                check(leak == 0.0, || {
                    format!("case {case}: role leak at node {i}")
                })?;
            }
        }

        // ETopM against a dense product
        let edm: Vec<Vec<f64>> = (0..inst.corpus.num_experts())
            .map(|x| {
                (0..inst.corpus.num_documents())
                    .map(|d| {
                        if inst.corpus.authorship().contains(&(x, d)) {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let product =
            build_etopm(&matrix(Role::Edm, &edm), &matrix(Role::Dpm, &inst.dtopm)).unwrap();
        for (x, row) in inst.etopm.iter().enumerate() {
            close(&product.matrix().row_dense(x), row, 1e-9, "ETopM")?;
        }

        // scaling the seed leaves rankings unchanged
        let scale = rng.gen_range(0.01..100.0);
        let scaled_e: Vec<f64> = ew.iter().map(|v| v * scale).collect();
        let scaled_d: Vec<f64> = dw.iter().map(|v| v * scale).collect();
        let five = CoHitsParams {
            iterations: 5,
            ..params
        };
        let base = iterate(seed_from_weights(&ew, &dw, &ecg, &five), &ecg, &five).unwrap();
        let other = iterate(
            seed_from_weights(&scaled_e, &scaled_d, &ecg, &five),
            &ecg,
            &five,
        )
        .unwrap();
        let ranking = |s: &IterationState| {
            let scores = ecg.project_experts(&s.authority);
            let keyed = scores
                .iter()
                .enumerate()
                .map(|(x, v)| (format!("{x:03}"), (v * 1e9).round()));
            rank_scores(keyed, usize::MAX)
                .into_iter()
                .map(|e| e.label)
                .collect::<Vec<_>>()
        };
        check(ranking(&base) == ranking(&other), || {
            format!("case {case}: scale changed ranking")
        })?;
        cases += 1;
    }

    // thread count does not change the exported index
    let tmp = TempDir::new().unwrap();
    let corpus = tmp.path().join("corpus.json");
    std::fs::write(&corpus, random_corpus_json(&mut rng, 60, 15)).unwrap();
    let mut exports = Vec::new();
    for threads in ["1", "8"] {
        let out_dir = tmp.path().join(format!("idx{threads}"));
        let out = cli(&[
            "pipeline",
            "--in",
            path_str(&corpus),
            "--out",
            path_str(&out_dir),
            "--threads",
            threads,
        ]);
        check(out.status.success(), || {
            String::from_utf8_lossy(&out.stderr).into_owned()
        })?;
        let mut files = Vec::new();
        for sub in ["matrices", "vocab", "labels", "graph"] {
            for entry in std::fs::read_dir(out_dir.join(sub)).unwrap() {
                let p = entry.unwrap().path();
                files.push((
                    p.file_name().unwrap().to_owned(),
                    std::fs::read(&p).unwrap(),
                ));
            }
        }
        files.push((
            "manifest.json".into(),
            std::fs::read(out_dir.join("manifest.json")).unwrap(),
        ));
        files.sort();
        exports.push(files);
    }
    check(exports[0] == exports[1], || {
        "exports differ between 1 and 8 threads".into()
    })?;
    let topics = load_index(&tmp.path().join("idx8")).unwrap().topics.len();
    Ok(format!(
        "{cases} randomized cases; --threads 1 vs 8 bitwise equal over {topics} topics"
    ))
}

// ---------------------------------------------------------------- 7

fn robustness() -> Outcome {
    // a topic column with no weight anywhere
    let corpus = table1();
    let ecg = Ecg::build(&corpus, NodeOrdering::Interleaved);
    let etopm = matrix(
        Role::ETopM,
        &[vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0]],
    );
    let dtopm = matrix(
        Role::DTopM,
        &[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0]],
    );
    let topics = Vocabulary::new(["a", "b"]);
    let result =
        expertrank::cohits::reinforce(&etopm, &dtopm, &ecg, &topics, &CoHitsParams::default())
            .map_err(|e| e.to_string())?;
    check(result.zero_seed_count() == 1, || {
        format!("zero-seed count {}", result.zero_seed_count())
    })?;
    check(result.retopm.column(1) == [0.0, 0.0, 0.0], || {
        "zero seed gave nonzero column".into()
    })?;
    check(
        result.retopm.matrix().iter().all(|(_, _, v)| v.is_finite()),
        || "non-finite output".into(),
    )?;
    let report = result.diagnostics_jsonl();
    check(
        report.lines().count() == 2 && report.contains("\"zero_seed\":true"),
        || format!("report {report}"),
    )?;

    // corrupted index file
    let tmp = TempDir::new().unwrap();
    let idx = tmp.path().join("idx");
    let out = cli(&[
        "pipeline",
        "--in",
        path_str(&fixture()),
        "--out",
        path_str(&idx),
    ]);
    check(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    let target = idx.join("matrices/etopm.txt");
    let mut bytes = std::fs::read(&target).unwrap();
    let i = bytes.len() - 2;
    bytes[i] ^= 0x01;
    std::fs::write(&target, bytes).unwrap();
    let out = cli(&[
        "rank",
        "--index",
        path_str(&idx),
        "--query",
        "word embedding",
    ]);
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    check(out.status.code() == Some(1), || {
        format!("corrupt index exit {:?}", out.status.code())
    })?;
    check(
        stderr.starts_with("ERROR checksum:") && stderr.contains("matrices/etopm.txt"),
        || format!("corrupt index stderr {stderr:?}"),
    )?;

    // lambda bounds at flag parse
    for bad in [
        ["--lambda-x", "1.5"],
        ["--lambda-d", "-0.1"],
        ["--lambda-x", "NaN"],
    ] {
        let out = cli(&["reinforce", "--index", path_str(&idx), bad[0], bad[1]]);
        let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
        check(
            out.status.code() == Some(2) && stderr.starts_with("ERROR usage:"),
            || {
                format!(
                    "{} {}: exit {:?} {stderr:?}",
                    bad[0],
                    bad[1],
                    out.status.code()
                )
            },
        )?;
    }
    Ok("zero-seed column zero with count 1; checksum names file; lambda bounds exit 2".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("worked-example formula fixtures", formula_fixtures),
        ("graph fixtures", graph_fixtures),
        ("iteration fixtures", iteration_fixtures),
        ("end-to-end reinforcement and ranking", end_to_end),
        ("oracle equivalence", oracle_equivalence),
        ("property suites", property_suites),
        ("robustness", robustness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
