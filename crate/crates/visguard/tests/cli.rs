//! End-to-end checks of the command-line interface through the compiled
//! binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use visguard::corpus;
use visguard::generate;
use visguard::geom::PolygonWithHoles;
use visguard::io::write_polygon;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_visguard"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("visguard-cli-{}-{name}", std::process::id()));
    fs::write(&path, contents).unwrap();
    path
}

fn poly_file(name: &str, poly: &PolygonWithHoles) -> PathBuf {
    scratch(name, &write_polygon(poly))
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn greedy_guard_on_the_comb_emits_one_line_per_tooth() {
    let comb = generate::comb(3, 7).unwrap();
    let file = poly_file("comb3.poly", &comb);
    let out = bin().arg("guard").arg(&file).args(["--method", "greedy"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let ids: Vec<usize> =
        stdout_of(&out).lines().map(|l| l.parse().expect("guard id")).collect();
    assert_eq!(ids.len(), 3, "comb with 3 teeth needs 3 guards");
    assert!(ids.iter().all(|&i| i < comb.vertex_count()));
    assert!(stderr_of(&out).contains("3 guards"));
}

#[test]
fn stats_on_a_convex_hexagon_shows_one_cell_one_sink_no_windows() {
    let hex = PolygonWithHoles::from_ints(&[(0, 0), (4, -1), (7, 1), (8, 4), (3, 6), (-1, 3)], &[])
        .unwrap();
    let file = poly_file("hex.poly", &hex);

    let out = bin().arg("stats").arg(&file).arg("--csv").output().unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let field = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(field("cells"), "1");
    assert_eq!(field("sinks"), "1");
    assert_eq!(field("wl"), "0");
    assert_eq!(field("wr"), "0");
    assert_eq!(field("wt"), "0");
    assert_eq!(field("greedy"), "1");

    let table = bin().arg("stats").arg(&file).output().unwrap();
    assert!(table.status.success());
    assert!(stdout_of(&table).contains("cell_ratio"));
}

#[test]
fn verifying_an_empty_guard_file_fails() {
    let square = PolygonWithHoles::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)], &[]).unwrap();
    let file = poly_file("square.poly", &square);
    let guards = scratch("empty-guards.txt", "");
    let out = bin()
        .arg("verify")
        .arg(&file)
        .arg("--guards")
        .arg(&guards)
        .args(["--samples", "64"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stdout_of(&out).contains("covers: false"));
}

#[test]
fn verifying_a_real_guard_set_succeeds() {
    let ell = corpus::ell();
    let file = poly_file("ell.poly", &ell);
    let guards = scratch("ell-guards.txt", "0\n");
    let out = bin()
        .arg("verify")
        .arg(&file)
        .arg("--guards")
        .arg(&guards)
        .args(["--samples", "400"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("covers: true"));
    assert!(text.contains("audit: 0 failures out of 400 samples"));
    assert!(text.contains("opt: 1 (ratio 1.00)"));
}

#[test]
fn decompose_and_sinks_report_the_ell_shape() {
    let file = poly_file("ell-counts.poly", &corpus::ell());
    let out = bin().arg("decompose").arg(&file).arg("--cells").output().unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("n: 6"));
    assert!(text.contains("windows: 4 (left 2, right 2, trans 0)"));
    assert!(text.contains("cells: 5"));
    assert_eq!(text.matches("cell ").count(), 5);

    let out = bin().arg("sinks").arg(&file).output().unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("sinks: 2"));
}

#[test]
fn render_writes_a_well_formed_svg() {
    let file = poly_file("render.poly", &corpus::quad_with_hole());
    let svg_path = std::env::temp_dir()
        .join(format!("visguard-cli-render-{}.svg", std::process::id()));
    let out = bin().arg("render").arg(&file).arg("--svg").arg(&svg_path).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let doc = fs::read_to_string(&svg_path).unwrap();
    assert!(doc.starts_with("<svg "));
    assert!(doc.ends_with("</svg>\n"));
    assert!(doc.contains("<circle "), "greedy guards should be marked");
}

#[test]
fn malformed_input_fails_with_a_line_number() {
    let file = scratch("broken.poly", "4\n0 0\n1 zero\n1 1\n0 1\n0\n");
    let out = bin().arg("decompose").arg(&file).output().unwrap();
    assert!(!out.status.success());
    assert!(stderr_of(&out).contains("parse error at line 3"));
}

#[test]
fn oracle_cap_violations_surface_as_errors() {
    let blob = generate::blob(20, 0, 5).unwrap();
    let file = poly_file("blob20.poly", &blob);
    let out = bin()
        .arg("guard")
        .arg(&file)
        .args(["--method", "exact", "--oracle-cap", "8"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr_of(&out).contains("exceeds cap"));
}

#[test]
fn kk_rejects_polygons_with_holes() {
    let file = poly_file("kk-hole.poly", &corpus::quad_with_hole());
    let out = bin().arg("guard").arg(&file).args(["--method", "kk"]).output().unwrap();
    assert!(!out.status.success());
    assert!(stderr_of(&out).contains("invalid polygon"));
}

#[test]
fn the_seed_env_var_must_be_numeric() {
    let file = poly_file("env-seed.poly", &corpus::ell());
    let out = bin()
        .arg("guard")
        .arg(&file)
        .args(["--method", "bg"])
        .env("VISGUARD_SEED", "not-a-number")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr_of(&out).contains("VISGUARD_SEED"));
}

#[test]
fn guard_output_round_trips_through_verify() {
    let poly = generate::grid_holes(10, 1, 3).unwrap();
    let file = poly_file("grid.poly", &poly);
    let out = bin().arg("guard").arg(&file).args(["--method", "greedy"]).output().unwrap();
    assert!(out.status.success());
    let guards = scratch("grid-guards.txt", &stdout_of(&out));
    let verify = bin()
        .arg("verify")
        .arg(&file)
        .arg("--guards")
        .arg(&guards)
        .args(["--samples", "300"])
        .output()
        .unwrap();
    assert!(verify.status.success(), "stderr: {}", stderr_of(&verify));
}
