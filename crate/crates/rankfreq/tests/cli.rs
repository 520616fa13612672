//! End-to-end tests of the command-line surface: golden outputs,
//! deterministic re-runs, exit codes, and the figure subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rankfreq")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env_remove("RANKFREQ_OUT")
        .output()
        .expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn rank_matches_checked_in_golden_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("tiny.txt"), dir.path().join("tiny.txt")).unwrap();
    let out = run_in(
        dir.path(),
        &["rank", "tiny.txt", "--id", "tiny", "--language", "en", "--out", "."],
    );
    assert_success(&out);
    let produced = std::fs::read(dir.path().join("tiny.rank.csv")).unwrap();
    let golden = std::fs::read(fixture("golden/tiny.rank.csv")).unwrap();
    assert_eq!(
        produced,
        golden,
        "rank CSV differs from the golden file (regenerate only with scripts/golden_rank_csv.py)"
    );
    // reject list: the two dash runs, "3", "42", "42nd", "3rd", and one more dash run
    let rejects = std::fs::read_to_string(dir.path().join("tiny.rejects.tsv")).unwrap();
    assert_eq!(rejects.lines().count(), 7, "rejects:\n{rejects}");
    assert!(rejects.contains("42nd\t"), "rejects:\n{rejects}");
}

#[test]
fn identical_invocations_produce_byte_identical_outputs() {
    let mk = |dir: &Path| {
        std::fs::copy(fixture("tiny.txt"), dir.join("tiny.txt")).unwrap();
        let out = run_in(
            dir,
            &["rank", "tiny.txt", "--id", "tiny", "--language", "en", "--out", "."],
        );
        assert_success(&out);
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    mk(a.path());
    mk(b.path());
    for name in ["tiny.rank.csv", "tiny.summary.json", "tiny.rejects.tsv"] {
        let fa = std::fs::read(a.path().join(name)).unwrap();
        let fb = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(fa, fb, "{name} differs between identical runs");
    }
}

#[test]
fn exit_codes_distinguish_error_classes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("tiny.txt"), dir.path().join("tiny.txt")).unwrap();
    std::fs::write(dir.path().join("empty.txt"), "").unwrap();

    // input error: unreadable file
    let out = run_in(dir.path(), &["rank", "ghost.txt"]);
    assert_eq!(out.status.code(), Some(10), "missing input file");

    // input error: empty input
    let out = run_in(dir.path(), &["rank", "empty.txt"]);
    assert_eq!(out.status.code(), Some(10), "empty input");

    // config error: malformed window
    let out = run_in(dir.path(), &["rank", "tiny.txt", "--window", "wide"]);
    assert_eq!(out.status.code(), Some(11), "bad window syntax");

    // numeric error: window too narrow for a meaningful fit
    let out = run_in(dir.path(), &["rank", "tiny.txt", "--window", "10:15"]);
    assert_eq!(out.status.code(), Some(12), "refused fit");

    // config error: fig2 without a lexicon
    let out = run_in(dir.path(), &["fig", "fig2", "tiny.txt"]);
    assert_eq!(out.status.code(), Some(11), "fig2 without lexicon");
}

#[test]
fn dictionary_drop_policy_shrinks_the_stream() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("tiny.txt"), dir.path().join("tiny.txt")).unwrap();
    std::fs::write(dir.path().join("dict.txt"), "the\nfox\ndog\nquick\n").unwrap();
    let out = run_in(
        dir.path(),
        &[
            "rank", "tiny.txt", "--id", "t", "--dictionary", "dict.txt", "--policy",
            "drop-misses", "--out", ".",
        ],
    );
    assert_success(&out);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["vocabulary"], 4);
    assert_eq!(summary["tokens"], 24.0); // the 11 + fox 6 + dog 4 + quick 3
    assert!(summary["rejects"]["dictionary_miss"].as_u64().unwrap() > 0);
}

#[test]
fn synth_rank_crossover_pipeline_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "synth", "zipf", "--alpha", "1.0", "--vocab", "2000", "--tokens", "300000",
            "--seed", "9", "--out", "sample.txt",
        ],
    );
    assert_success(&out);
    assert!(dir.path().join("sample.txt").exists());
    assert!(dir.path().join("sample.meta.json").exists());

    let out = run_in(
        dir.path(),
        &[
            "rank", "sample.txt", "--id", "s", "--window", "10:1000", "--log-binning",
            "--out", ".",
        ],
    );
    assert_success(&out);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.summary.json")).unwrap())
            .unwrap();
    let alpha = summary["fit"]["alpha"].as_f64().unwrap();
    assert!(
        (alpha - 1.0).abs() < 0.05,
        "sampled text should fit near its generator exponent, got {alpha}"
    );
    assert!(dir.path().join("s.binned.csv").exists());
}

#[test]
fn fig1_emits_one_series_per_text_with_fits() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, name) in [("5", "one.txt"), ("6", "two.txt")] {
        let out = run_in(
            dir.path(),
            &[
                "synth", "zipf", "--alpha", "1.1", "--vocab", "3000", "--tokens", "200000",
                "--seed", seed, "--out", name,
            ],
        );
        assert_success(&out);
    }
    let out = run_in(
        dir.path(),
        &["fig", "fig1", "one.txt", "two.txt", "--window", "10:1000", "--out", "figs"],
    );
    assert_success(&out);
    assert!(dir.path().join("figs/fig1.one.csv").exists());
    assert!(dir.path().join("figs/fig1.two.csv").exists());
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("figs/fig1.json")).unwrap(),
    )
    .unwrap();
    for id in ["one", "two"] {
        let alpha = json["series"][id]["fit"]["alpha"].as_f64().unwrap();
        assert!((alpha - 1.1).abs() < 0.08, "{id}: alpha = {alpha}");
    }
}

#[test]
fn fig3_with_identity_lexicon_produces_coinciding_series() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("tiny.txt"), dir.path().join("tiny.txt")).unwrap();

    // identity lexicon over the text's own vocabulary
    let raw = rankfreq::ingest::RawText::from_file("tiny", "en", &dir.path().join("tiny.txt"))
        .unwrap();
    let (stream, _) = rankfreq::ingest::tokenize(
        &raw,
        &rankfreq::config::TokenizationRules::default(),
    );
    let vocab: std::collections::BTreeSet<&String> = stream.iter().collect();
    let lexicon: String = vocab
        .iter()
        .map(|w| format!("{w}\t{w}\tNOUN\n"))
        .collect();
    std::fs::write(dir.path().join("identity.tsv"), lexicon).unwrap();

    let out = run_in(
        dir.path(),
        &["fig", "fig3", "tiny.txt", "--lexicon", "identity.tsv", "--out", "."],
    );
    assert_success(&out);
    let inflected = std::fs::read(dir.path().join("fig3.tiny.inflected.csv")).unwrap();
    let lemma = std::fs::read(dir.path().join("fig3.tiny.lemma.csv")).unwrap();
    assert_eq!(inflected, lemma, "identity lexicon must leave the series equal");
}

#[test]
fn fig2_emits_class_series_and_reference_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "synth", "zipf", "--alpha", "1.0", "--vocab", "500", "--tokens", "100000",
            "--seed", "3", "--out", "text.txt",
        ],
    );
    assert_success(&out);
    // small lexicon: a few words tagged, everything else falls back to OTHER
    std::fs::write(
        dir.path().join("lex.tsv"),
        "a\ta\tNOUN\nb\tb\tNOUN\nc\tc\tVERB\nd\td\tVERB\ne\te\tADJ\n",
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "fig", "fig2", "text.txt", "--lexicon", "lex.tsv", "--window", "5:400",
            "--out", ".",
        ],
    );
    assert_success(&out);
    assert!(dir.path().join("fig2.text.other.csv").exists());
    assert!(dir.path().join("fig2.text.noun.csv").exists());
    assert!(dir.path().join("fig2.text.reference.csv").exists());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig2.json")).unwrap())
            .unwrap();
    assert!(json["global_fit"]["alpha"].as_f64().is_some());
    // two-word classes cannot host a fit but still appear in the report
    assert!(json["classes"]["ADV"].is_null());
}

#[test]
fn fig4_comparison_reports_divergence_for_different_exponents() {
    let dir = tempfile::tempdir().unwrap();
    for (alpha, seed, name) in [("1.0", "21", "native1.txt"), ("1.0", "22", "native2.txt"), ("1.3", "23", "trans1.txt"), ("1.3", "24", "trans2.txt")] {
        let out = run_in(
            dir.path(),
            &[
                "synth", "zipf", "--alpha", alpha, "--vocab", "2000", "--tokens", "150000",
                "--seed", seed, "--out", name,
            ],
        );
        assert_success(&out);
    }
    std::fs::write(
        dir.path().join("native.toml"),
        r#"
name = "native-demo"

[[texts]]
id = "native1"
path = "native1.txt"
author = "gen"
language = "pl"
origin = "native"

[[texts]]
id = "native2"
path = "native2.txt"
author = "gen"
language = "pl"
origin = "native"
"#,
    )
    .unwrap();
    std::fs::write(
        dir.path().join("translated.toml"),
        r#"
name = "translated-demo"

[[texts]]
id = "trans1"
path = "trans1.txt"
author = "gen"
language = "pl"
origin = "translated"
source_language = "unknown"

[[texts]]
id = "trans2"
path = "trans2.txt"
author = "gen"
language = "pl"
origin = "translated"
source_language = "unknown"
"#,
    )
    .unwrap();

    let out = run_in(
        dir.path(),
        &[
            "fig", "fig4b", "--corpus-a", "native.toml", "--corpus-b", "translated.toml",
            "--window", "10:1000", "--out", ".",
        ],
    );
    assert_success(&out);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig4b.json")).unwrap())
            .unwrap();
    assert!(
        json["comparison"]["divergence_rank"].as_u64().is_some(),
        "different tail exponents must produce a divergence rank: {json}"
    );
    // the faster-decaying corpus B sits below A at the high-rank end
    let delta = json["comparison"]["delta"].as_array().unwrap();
    let last = delta.last().unwrap();
    assert!(last[1].as_f64().unwrap() > 0.0);
    assert!(dir.path().join("fig4b.delta.csv").exists());
    assert!(dir.path().join("fig4b.a.csv").exists());
    assert!(dir.path().join("fig4b.b.csv").exists());
}

#[test]
fn fetch_verifies_existing_files_against_manifest_checksums() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("text.txt"), "words here\n").unwrap();
    let sha = rankfreq::config::sha256_hex(b"words here\n");
    std::fs::write(
        dir.path().join("m.toml"),
        format!(
            r#"
name = "demo"

[[texts]]
id = "text"
path = "text.txt"
author = "a"
language = "en"
origin = "native"
sha256 = "{sha}"
"#
        ),
    )
    .unwrap();
    let out = run_in(dir.path(), &["fetch", "m.toml"]);
    assert_success(&out);
    assert!(String::from_utf8_lossy(&out.stdout).contains("verified"));

    // tamper and re-verify
    std::fs::write(dir.path().join("text.txt"), "tampered\n").unwrap();
    let out = run_in(dir.path(), &["fetch", "m.toml"]);
    assert_eq!(out.status.code(), Some(10), "checksum mismatch is an input error");
}
