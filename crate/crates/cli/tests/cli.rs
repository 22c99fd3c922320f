use std::process::{Command, Output};

use vdc::disc::{brute_extreme, brute_plus_minus};
use vdc::numeric::{fmt_rational, rat, Rational};

fn vdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn omega_seven() {
    let o = vdc(&["perm", "--omega", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0,4,1,3,5,2,6\n");
}

#[test]
fn perm_families() {
    assert_eq!(stdout(&vdc(&["perm", "--tau", "4"])), "3,2,1,0\n");
    assert_eq!(stdout(&vdc(&["perm", "--affine", "5,2,0"])), "0,2,4,1,3\n");
    assert_eq!(
        stdout(&vdc(&["perm", "--fractional", "5,1,0,0"])),
        "0,1,3,2,4\n"
    );
    assert_eq!(
        stdout(&vdc(&["perm", "--intricate", "0,1", "0,1"])),
        "0,2,1,3\n"
    );
    assert_eq!(stdout(&vdc(&["perm", "--swapped", "0,2,1"])), "2,0,1\n");
    assert_eq!(
        stdout(&vdc(&["perm", "--carlitz2", "5,4,4,1,0"])),
        "0,2,4,3,1\n"
    );
}

#[test]
fn disc_rows_match_brute_force() {
    let o = vdc(&["disc", "--base", "2", "--perm", "0,1", "--N", "1..8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,Dplus,Dminus,D,Dstar"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    // Base-2 radical inverse of 0..7.
    let pts: Vec<Rational> = [0, 4, 2, 6, 1, 5, 3, 7]
        .iter()
        .map(|&k| rat(k, 8))
        .collect();
    for (i, row) in rows.iter().enumerate() {
        let n = i + 1;
        let (p, m) = brute_plus_minus(&pts[..n]).unwrap();
        let e = brute_extreme(&pts[..n]).unwrap();
        let star = p.clone().max(m.clone());
        let want = format!(
            "{n},{},{},{},{}",
            fmt_rational(&p),
            fmt_rational(&m),
            fmt_rational(&e),
            fmt_rational(&star)
        );
        assert_eq!(*row, want);
    }
}

#[test]
fn disc_float_and_normalized_columns() {
    let o = vdc(&[
        "disc",
        "--perm",
        "0,1",
        "--N",
        "3",
        "--float",
        "--normalized",
    ]);
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(
        row,
        "3,1/2,0/1,1/2,1/2,0.50000000000000000,0,0.50000000000000000,0.50000000000000000"
    );
}

#[test]
fn gen_points() {
    let o = vdc(&["gen", "--perm", "0,2,1", "--N", "4"]);
    assert_eq!(
        stdout(&o),
        "n,value_num,value_den\n0,0,1\n1,2,3\n2,1,3\n3,2,9\n"
    );
    let explicit = vdc(&[
        "gen",
        "--perm",
        "0,1",
        "--swap",
        "periodic:0",
        "--N",
        "1..2",
    ]);
    // Every digit, including the trailing zeros, goes through τ∘σ = (1,0).
    assert_eq!(stdout(&explicit), "n,value_num,value_den\n1,1,2\n2,3,4\n");
}

#[test]
fn psi_export_shows_omega9_pieces_at_one_third() {
    let omega = stdout(&vdc(&["perm", "--omega", "9"]));
    let o = vdc(&["psi", "--base", "9", "--perm", omega.trim(), "--csv"]);
    let text = stdout(&o);
    // 3x on [1/4, 1/3), then −3x + 2.
    assert!(text.contains("\n1,4,3,1,0,1\n1,3,-3,1,2,1\n"), "{text}");
    let svg = stdout(&vdc(&["psi", "--perm", omega.trim(), "--svg"]));
    assert!(svg.contains("viewBox=\"0 0 800 400\""));
}

#[test]
fn alpha_row_for_identity_base_three() {
    let o = vdc(&["alpha", "--perm", "0,1,2"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some(
            "base,perm_hash,n,upper_num,upper_den,cycle,lower_num,lower_den,s_float_lo,s_float_hi"
        )
    );
    let cols: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(cols[0], "3");
    assert_eq!((cols[3], cols[4], cols[6], cols[7]), ("1", "2", "1", "2"));
    let (lo, hi): (f64, f64) = (cols[8].parse().unwrap(), cols[9].parse().unwrap());
    let s = 1.0 / (2.0 * 3f64.ln());
    assert!(lo <= s && s <= hi);
}

#[test]
fn search_output_is_thread_independent() {
    let args = ["search", "--base", "7", "--threshold", "3/2", "--stage2"];
    let one = vdc(&[&["--threads", "1"][..], &args[..]].concat());
    let four = vdc(&[&["--threads", "4"][..], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let text = stdout(&one);
    assert!(text.starts_with("perm,max_psi_num,max_psi_den,f2_num,f2_den\n\"0,"));
}

#[test]
fn hammersley_report_line() {
    let o = vdc(&["hammersley", "--base", "2", "--m", "2", "--vec", "id,id"]);
    let text = stdout(&o);
    assert!(text.starts_with("i,x_num,x_den,y_num,y_den\n0,0,1,0,1\n1,1,2,1,4\n"));
    assert!(
        text.ends_with(
            "term_num,term_den,brute_num,brute_den,c_m_float\n3,4,2,1,1.2500000000000000\n"
        ),
        "{text}"
    );
}

#[test]
fn hammersley_vec_file() {
    let dir = std::env::temp_dir().join(format!("vdc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("vec.txt");
    std::fs::write(&file, "id\n# comment\n2,1,0\n").unwrap();
    let o = vdc(&[
        "hammersley",
        "--base",
        "3",
        "--vec-file",
        file.to_str().unwrap(),
        "--no-points",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_directory_from_environment() {
    let dir = std::env::temp_dir().join(format!("vdc-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_vdc"))
        .args(["perm", "--omega", "3"])
        .env("VDC_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_vdc"))
        .args(["gen", "--perm", "0,1", "--N", "2", "--output", "pts.csv"])
        .env("VDC_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(dir.join("pts.csv")).unwrap(),
        "n,value_num,value_den\n0,0,1\n1,1,2\n"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(vdc(&["perm"]).status.code(), Some(1));
    assert_eq!(
        vdc(&["disc", "--perm", "0,1", "--N", "1..3", "--bogus"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        vdc(&["disc", "--perm", "0,1", "--N", "0..3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        vdc(&["disc", "--perm", "0,0", "--N", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        vdc(&["disc", "--perm", "0,1", "--base", "3", "--N", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(vdc(&["perm", "--affine", "6,1,0"]).status.code(), Some(2));
    assert_eq!(
        vdc(&[
            "search",
            "--base",
            "10",
            "--threshold",
            "2",
            "--budget",
            "50"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        vdc(&["gen", "--perm-file", "/nonexistent/vdc.txt", "--N", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        vdc(&[
            "hammersley",
            "--base",
            "2",
            "--vec",
            "id,id,id,id,id,id,id,id,id,id,id,id,id,id"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn verify_quick_report() {
    let o = vdc(&["verify", "--quick"]);
    let text = stdout(&o);
    assert!(text.starts_with("check,status,expected,actual\n"));
    assert!(text.contains("\nidentity_b3_constant,PASS,"));
    assert!(text.contains("\nsigma60_psi_minus_zero,PASS,"));
    let failing: Vec<&str> = text.lines().filter(|l| l.contains(",FAIL,")).collect();
    // Exit 0 iff every check passed, 4 otherwise.
    let want = if failing.is_empty() { 0 } else { 4 };
    assert_eq!(o.status.code(), Some(want));
    let stderr = String::from_utf8_lossy(&o.stderr);
    for line in failing {
        let name = line.split(',').next().unwrap();
        assert!(stderr.contains(name));
    }
}
