use std::path::PathBuf;

use medcube_cli::{run, Outcome};

/// Golden cases: file stem and arguments after the program name. Paths are
/// relative to the package root, which is the working directory of tests.
pub const CASES: &[(&str, &[&str])] = &[
    ("validate_square", &["validate", "tests/data/square.walls"]),
    ("validate_z2_json", &["--json", "validate", "--preset", "z2-4"]),
    ("validate_table", &["validate", "--preset", "cube-3", "--table"]),
    ("validate_sampled", &["validate", "--preset", "z2-6", "--table", "--budget", "500", "--seed", "9"]),
    ("validate_not_closed", &["validate", "tests/data/hollow.walls"]),
    ("validate_bad_bits", &["validate", "tests/data/bad.walls"]),
    ("validate_unknown_directive", &["validate", "tests/data/unknown.walls"]),
    ("median_cube", &["median", "--preset", "cube-3", "001", "010", "100"]),
    ("median_names", &["median", "tests/data/square.walls", "a", "c", "b"]),
    ("median_unknown", &["median", "--preset", "square", "00", "11", "zz"]),
    ("interval_grid", &["interval", "--preset", "z2-4", "(0,0)", "(2,1)"]),
    ("interval_json", &["--json", "interval", "--preset", "tripod", "l1", "l2"]),
    ("hull_grid", &["hull", "--preset", "z2-5", "(0,1)", "(2,0)", "(1,3)"]),
    ("hull_pmq", &["hull", "--preset", "pmq-2", "(-1,1)", "(1,-1)"]),
    ("rank_cube", &["rank", "--preset", "cube-4"]),
    ("rank_interval", &["rank", "--preset", "z3-3", "(0,0,0)", "(2,1,0)"]),
    ("intersect_path", &["intersect", "--preset", "path-6", "0", "3", "2", "5"]),
    ("intersect_empty", &["--json", "intersect", "--preset", "path-6", "0", "1", "3", "5"]),
    ("square_in_grid", &["square-in", "--preset", "z2-3", "(0,0)", "(2,2)"]),
    ("square_in_path", &["square-in", "--preset", "path-4", "0", "3"]),
    ("flag_span_cube", &["flag-span", "--preset", "cube-3", "000", "001", "010", "100"]),
    ("flag_span_json", &["--json", "flag-span", "--preset", "z2-3", "(1,1)", "(2,1)", "(1,2)"]),
    ("cubulate_hollow", &["cubulate", "tests/data/hollow.walls"]),
    ("cubulate_json", &["--json", "cubulate", "--preset", "tripod"]),
    ("complex_grid", &["complex", "--preset", "z2-3"]),
    ("complex_hollow", &["complex", "tests/data/hollow.walls"]),
    ("check_local_interior", &["check-local", "--preset", "z2-5", "--vertex", "(2,2)", "--dim", "2"]),
    ("check_local_side", &["check-local", "--preset", "z2-5", "--vertex", "(0,2)", "--dim", "2"]),
    ("check_local_hollow", &["--json", "check-local", "tests/data/hollow.walls", "--vertex", "o", "--dim", "2"]),
    ("dist_weighted", &["dist", "tests/data/weighted.walls", "p00", "p21"]),
    ("dist_grid", &["dist", "--preset", "z2-5", "(0,0)", "(4,3)"]),
    ("verify_metric_weighted", &["verify-metric", "tests/data/weighted.walls"]),
    ("verify_metric_json", &["--json", "verify-metric", "--preset", "tripod"]),
    ("subdivide_weighted", &["subdivide", "tests/data/weighted.walls", "--wall", "y1", "-n", "3"]),
    ("subdivide_json", &["--json", "subdivide", "--preset", "square", "--wall", "e2", "--copies", "2"]),
    ("subdivide_unknown_wall", &["subdivide", "--preset", "square", "--wall", "q", "-n", "2"]),
    ("thicken_vertex", &["thicken", "--preset", "z2-7", "--set", "center"]),
    ("thicken_box", &["--json", "thicken", "--preset", "z2-7", "--set", "box:(2,2):(3,4)"]),
    ("thicken_not_convex", &["thicken", "--preset", "z2-5", "--set", "(0,0)+(2,2)"]),
    ("exhaust_grid", &["exhaust", "--preset", "z2-11", "--seed", "center", "--layers", "3"]),
    ("exhaust_json", &["--json", "exhaust", "--preset", "z2-11", "--seed", "center", "--layers", "3"]),
    ("exhaust_grow", &["exhaust", "--preset", "z2-11", "--seed", "(5,5)", "--layers", "3", "--grow", "(5,8)", "--grow", "(1,5)"]),
    ("exhaust_too_many", &["exhaust", "--preset", "z2-3", "--seed", "center", "--layers", "3"]),
    ("floyd_path", &["floyd", "--preset", "path-6", "--seed", "0+1", "--layers", "5"]),
    ("floyd_grid_json", &["--json", "floyd", "--preset", "z2-10", "--seed", "box:(4,4):(5,5)", "--layers", "5"]),
    ("retract_grid", &["retract", "--preset", "z2-5", "--seed", "center", "--layers", "3", "--layer", "1"]),
    ("retract_floyd", &["retract", "--preset", "path-6", "--seed", "0+1", "--layers", "5", "--layer", "3", "--floyd"]),
    ("export_dot_square", &["export-dot", "tests/data/square.walls"]),
    ("export_svg_grid", &["export-dot", "--preset", "z2-3", "--svg"]),
    ("export_svg_cube", &["export-dot", "--preset", "cube-3", "--svg"]),
    ("preset_list", &["preset", "--list"]),
    ("preset_tripod", &["preset", "tripod"]),
    ("preset_json", &["--json", "preset", "path-3"]),
    ("preset_unknown", &["preset", "nope"]),
    ("usage_missing_file", &["rank"]),
    ("usage_bad_flag", &["rank", "--preset", "square", "--frobnicate"]),
];

pub fn invoke(args: &[&str]) -> Outcome {
    run(std::iter::once("medcube").chain(args.iter().copied()))
}

pub fn render(out: &Outcome) -> String {
    format!("exit: {}\n--- stdout\n{}--- stderr\n{}", out.code, out.stdout, out.stderr)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.txt"))
}

/// Compares each case with its golden file (rewriting it when
/// `UPDATE_GOLDEN` is set) and returns the names that differ.
pub fn check_goldens() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (name, args) in CASES {
        let actual = render(&invoke(args));
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &actual).expect("write golden file");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == actual => {}
            Ok(expected) => {
                eprintln!("golden mismatch for {name}\n--- expected\n{expected}--- actual\n{actual}");
                failures.push(name.to_string());
            }
            Err(e) => {
                eprintln!("missing golden file {}: {e}", path.display());
                failures.push(name.to_string());
            }
        }
    }
    failures
}

/// Subcommands that have no golden case.
pub fn uncovered_subcommands() -> Vec<&'static str> {
    const ALL: &[&str] = &[
        "validate",
        "median",
        "interval",
        "hull",
        "rank",
        "intersect",
        "square-in",
        "flag-span",
        "cubulate",
        "complex",
        "check-local",
        "dist",
        "verify-metric",
        "subdivide",
        "thicken",
        "exhaust",
        "floyd",
        "retract",
        "export-dot",
        "preset",
    ];
    ALL.iter()
        .copied()
        .filter(|sub| !CASES.iter().any(|(_, args)| args.iter().any(|a| a == sub)))
        .collect()
}

/// Every data file and builtin preset survives parse → serialize → parse,
/// and serialization is a fixed point. Returns the inputs that fail.
pub fn round_trip_failures() -> Vec<String> {
    let mut texts: Vec<(String, String)> = Vec::new();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut entries: Vec<_> = std::fs::read_dir(&dir).expect("data dir").flatten().map(|e| e.path()).collect();
    entries.sort();
    for path in entries {
        let text = std::fs::read_to_string(&path).expect("read data file");
        if medcube_cli::file::parse(&text).is_ok() {
            texts.push((path.display().to_string(), text));
        }
    }
    for preset in ["square", "cube-4", "z2-5", "z3-3", "path-7", "pmq-3", "star-5", "tripod"] {
        let out = invoke(&["preset", preset]);
        texts.push((preset.to_string(), out.stdout));
    }
    let mut failures = Vec::new();
    for (name, text) in texts {
        let first = medcube_cli::file::parse(&text).expect("parses");
        let canon = first.serialize();
        let second = match medcube_cli::file::parse(&canon) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let mut a = first.clone();
        let mut b = second.clone();
        a.vertices.sort_by(|x, y| x.1.cmp(&y.1));
        b.vertices.sort_by(|x, y| x.1.cmp(&y.1));
        let normalize = |f: &mut medcube_cli::file::WallspaceFile| {
            for w in f.weights.iter_mut() {
                if w.as_ref().is_some_and(num_traits::One::is_one) {
                    *w = None;
                }
            }
        };
        normalize(&mut a);
        normalize(&mut b);
        if a != b || second.serialize() != canon {
            failures.push(name);
        }
    }
    failures
}

/// Runs every case twice and returns those whose output differs.
pub fn nondeterministic_cases() -> Vec<String> {
    CASES
        .iter()
        .filter(|(_, args)| invoke(args) != invoke(args))
        .map(|(name, _)| name.to_string())
        .collect()
}
