use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use search_schemes::optimizer::{build_mip, parse_lp, MipOptions, ProblemSpec};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_search-schemes"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn total_of(out: &str) -> u64 {
    out.lines()
        .find_map(|l| l.strip_prefix("total: "))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn eval_prints_the_three_small_scheme_totals() {
    for (name, want) in [("lam_k2_p3.json", 71), ("uni_k2_p3.json", 62), ("opt_k2_p3.json", 59)] {
        let o = run(&["eval", "--scheme", &fixture(name), "-R", "6", "--sigma", "2"]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(total_of(&stdout(&o)), want, "{name}");
    }
}

#[test]
fn eval_csv() {
    let o = run(&[
        "eval",
        "--scheme",
        &fixture("opt_k2_p3.json"),
        "-R",
        "6",
        "--sigma",
        "2",
        "--csv",
    ]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scheme_id,search_idx,edges");
    assert_eq!(lines.last().unwrap(), &"opt_k2_p3,total,59");
    let sum: u64 = lines[1..lines.len() - 1]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(sum, 59);
}

#[test]
fn optimize_round_trips_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = run(&[
        "optimize",
        "-K",
        "2",
        "-P",
        "3",
        "-R",
        "6",
        "--sigma",
        "2",
        "--max-searches",
        "3",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("proof_status: optimal"), "{err}");
    assert!(err.contains("objective: 59"), "{err}");
    let e = run(&["eval", "--scheme", out.to_str().unwrap(), "--sigma", "2"]);
    assert_eq!(total_of(&stdout(&e)), 59);
    let v = run(&["validate", "--scheme", out.to_str().unwrap()]);
    assert!(v.status.success(), "{}", stdout(&v));
}

#[test]
fn optimize_is_deterministic() {
    let args = ["optimize", "-K", "2", "-P", "4", "-R", "12", "--sigma", "4", "-S", "3"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn solve_at_reduced_length_reports_both_objectives() {
    let o = run(&[
        "optimize",
        "-K",
        "2",
        "-P",
        "3",
        "-R",
        "30",
        "--sigma",
        "4",
        "-S",
        "3",
        "--solve-at-r",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("objective_at_solve_r: 289 (R = 6)"), "{err}");
    let json = stdout(&o);
    assert!(json.contains("\"R\": 30"));
}

#[test]
fn budget_exhausted_exits_3_with_a_scheme() {
    let o = run(&[
        "optimize",
        "-K",
        "3",
        "-P",
        "5",
        "-R",
        "20",
        "-S",
        "3",
        "--node-limit",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget-exhausted"));
    assert!(stdout(&o).contains("\"searches\""));
}

#[test]
fn validate_lists_the_missing_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.json");
    fs::write(
        &path,
        r#"{"K": 2, "P": 3, "searches": [
            {"pi": [3, 2, 1], "L": [0, 0, 0], "U": [0, 2, 2]},
            {"pi": [1, 2, 3], "L": [0, 0, 0], "U": [1, 1, 1]},
            {"pi": [1, 2, 3], "L": [0, 1, 1], "U": [1, 1, 2]}]}"#,
    )
    .unwrap();
    let o = run(&["validate", "--scheme", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l == "uncovered: 002"), "{}", stdout(&o));
}

#[test]
fn validate_accepts_every_bundled_scheme() {
    for name in search_schemes::scheme::builtin_names() {
        let o = run(&["validate", "--scheme", &format!("builtin:{name}")]);
        assert!(o.status.success(), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("feasible: yes"));
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["align"]).status.code(), Some(2));
    assert_eq!(run(&["optimize", "-K", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "--scheme", &fixture("opt_k2_p3.json")]).status.code(),
        Some(2),
        "no read length"
    );
    assert_eq!(
        run(&["optimize", "-K", "2", "-P", "0", "-R", "6", "-S", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_mip_writes_a_parseable_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.lp");
    let o = run(&[
        "gen-mip",
        "-K",
        "1",
        "-R",
        "4",
        "-P",
        "2",
        "-S",
        "2",
        "--sigma",
        "2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = parse_lp(&fs::read_to_string(&path).unwrap()).unwrap();
    let model = build_mip(&ProblemSpec::new(1, 4, 2, 2, 2).unwrap(), &MipOptions::default()).unwrap();
    assert_eq!(summary.variables, model.variables.len());
    assert_eq!(summary.binaries, model.num_binaries());
    assert_eq!(summary.rows, model.rows.len());
    let bad = run(&[
        "gen-mip",
        "-K",
        "1",
        "-R",
        "5",
        "-P",
        "2",
        "-S",
        "2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1), "unequal pieces");
}

struct Fixture {
    _dir: tempfile::TempDir,
    index: PathBuf,
    reads: PathBuf,
}

fn small_data() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("ref.fa");
    fs::write(
        &fasta,
        ">one first\nACGTTGCAAGGCTTACCGATCGGATCCAAGT\nTTGACCAGTACG\n>two\nGGGGCCCCAAAATTTTNNNNACGTACGTAC\n",
    )
    .unwrap();
    let index = dir.path().join("ref.idx");
    let o = run(&[
        "build-index",
        fasta.to_str().unwrap(),
        "-o",
        index.to_str().unwrap(),
        "--sa-rate",
        "4",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let reads = dir.path().join("reads.fq");
    // exact hit in `one`, a 1-substitution hit, the reverse complement of a piece of `one`, and a miss
    fs::write(
        &reads,
        "@exact\nGGCTTACCGATC\n+\nIIIIIIIIIIII\n@sub\nGGCTTACGGATC\n+\nIIIIIIIIIIII\n@rc\nGATCGGTAAGCC\n+\nIIIIIIIIIIII\n@none\nAAAAAAAAAAAA\n+\nIIIIIIIIIIII\n",
    )
    .unwrap();
    Fixture {
        _dir: dir,
        index,
        reads,
    }
}

#[test]
fn search_writes_tsv() {
    let f = small_data();
    let o = run(&[
        "search",
        "--index",
        f.index.to_str().unwrap(),
        "--reads",
        f.reads.to_str().unwrap(),
        "--scheme",
        "builtin:opt_k1_p2",
        "-K",
        "1",
        "--rc",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "read_id\trecord\tposition\tstrand\terrors\tsearch_idx");
    assert!(lines.iter().any(|l| l.starts_with("exact\tone\t9\t+\t0\t")), "{text}");
    assert!(lines.iter().any(|l| l.starts_with("sub\tone\t9\t+\t1\t")), "{text}");
    assert!(lines.iter().any(|l| l.starts_with("rc\tone\t9\t-\t0\t")), "{text}");
    assert!(!lines.iter().any(|l| l.starts_with("none\t")), "{text}");
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let f = small_data();
    let base = [
        "search",
        "--index",
        f.index.to_str().unwrap(),
        "--reads",
        f.reads.to_str().unwrap(),
        "--scheme",
        "builtin:opt_k2_p3",
        "-K",
        "2",
        "--rc",
    ];
    let one = run(&base);
    let mut more = base.to_vec();
    more.extend(["--threads", "3"]);
    let three = run(&more);
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(one.stdout, run(&base).stdout);
}

#[test]
fn search_stats_and_strata() {
    let f = small_data();
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("st.csv");
    let o = run(&[
        "search",
        "--index",
        f.index.to_str().unwrap(),
        "--reads",
        f.reads.to_str().unwrap(),
        "--scheme",
        "builtin:opt_k2_p3",
        "-K",
        "2",
        "--strata",
        "0",
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    // with 0-strata only the best error level is reported per read
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("exact\tone\t9\t+\t0\t")));
    assert!(
        !text.lines().any(|l| l.starts_with("exact\t") && !l.contains("\t0\t")),
        "{text}"
    );
    let csv = fs::read_to_string(&stats).unwrap();
    assert!(csv.starts_with("read_id,strand,extension_steps,reported,elapsed_ns\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn search_errors() {
    let f = small_data();
    let (ix, rd) = (f.index.to_str().unwrap(), f.reads.to_str().unwrap());
    let too_many = run(&[
        "search",
        "--index",
        ix,
        "--reads",
        rd,
        "--scheme",
        "builtin:opt_k1_p2",
        "-K",
        "2",
    ]);
    assert_eq!(too_many.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.idx");
    fs::write(&junk, b"not an index").unwrap();
    let bad = run(&[
        "search",
        "--index",
        junk.to_str().unwrap(),
        "--reads",
        rd,
        "--scheme",
        "builtin:opt_k1_p2",
        "-K",
        "1",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("bad magic"));
    let reads = dir.path().join("odd.fa");
    fs::write(&reads, ">r\nACGTXACGT\n").unwrap();
    let odd = run(&[
        "search",
        "--index",
        ix,
        "--reads",
        reads.to_str().unwrap(),
        "--scheme",
        "builtin:opt_k1_p2",
        "-K",
        "1",
    ]);
    assert_eq!(odd.status.code(), Some(1));
    let lenient = run(&[
        "search",
        "--index",
        ix,
        "--reads",
        reads.to_str().unwrap(),
        "--scheme",
        "builtin:opt_k1_p2",
        "-K",
        "1",
        "--unknown-as-wildcard",
    ]);
    assert!(lenient.status.success());
}

#[test]
fn bench_csv() {
    let f = small_data();
    let o = run(&[
        "bench",
        "--index",
        f.index.to_str().unwrap(),
        "--reads",
        f.reads.to_str().unwrap(),
        "-K",
        "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scheme_id,searches,reads,extension_steps,occurrences,incomplete_reads"
    );
    assert!(lines[1].starts_with("opt_k2_p3,3,4,"));
    assert!(lines[2].starts_with("backtracking_k2_p1,1,4,"));
    let occ = |l: &str| l.split(',').nth(4).unwrap().to_string();
    assert_eq!(occ(lines[1]), occ(lines[2]), "schemes disagree on results");
}
