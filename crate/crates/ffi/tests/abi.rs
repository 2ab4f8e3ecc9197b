use std::ffi::{CStr, CString};
use std::ptr;

use firegrid_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = fg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new_game(cfg: &str) -> *mut FgGame {
    let mut g = ptr::null_mut();
    let st = unsafe { fg_game_new(cstr(cfg).as_ptr(), &mut g) };
    assert_eq!(st, FgStatus::Ok, "{}", if st == FgStatus::Ok { String::new() } else { last_error() });
    g
}

#[test]
fn manual_round_on_small_grid() {
    let g = new_game(r#"{"lattice": {"kind": "finite_square", "n": 11}, "fires": [[0, 0]]}"#);
    unsafe {
        assert_eq!(fg_game_protect(g, [1i64, 0].as_ptr(), 1), FgStatus::Ok);
        let mut ignited = 0u64;
        assert_eq!(fg_game_spread(g, &mut ignited), FgStatus::Ok);
        assert_eq!(ignited, 3);
        let (mut turn, mut b, mut p) = (0u32, 0u64, 0u64);
        assert_eq!(fg_game_counts(g, &mut turn, &mut b, &mut p), FgStatus::Ok);
        assert_eq!((turn, b, p), (1, 4, 1));
        let mut contained = true;
        assert_eq!(fg_game_is_contained(g, &mut contained), FgStatus::Ok);
        assert!(!contained);
        fg_game_free(g);
    }
}

#[test]
fn engine_errors_map_to_codes() {
    let g = new_game(r#"{"lattice": {"kind": "finite_square", "n": 5}, "fires": [[0, 0]]}"#);
    unsafe {
        assert_eq!(fg_game_protect(g, [0i64, 0].as_ptr(), 1), FgStatus::ProtectBurning);
        assert!(last_error().contains("burning"));
        assert_eq!(fg_game_protect(g, [1i64, 0, 0, 1].as_ptr(), 2), FgStatus::BudgetExceeded);
        assert_eq!(fg_game_protect(g, [9i64, 9].as_ptr(), 1), FgStatus::InvalidVertex);
        assert_eq!(fg_game_protect(ptr::null_mut(), ptr::null(), 0), FgStatus::NullPointer);
        fg_game_free(g);
    }
    let mut g = ptr::null_mut();
    let st = unsafe { fg_game_new(cstr("{not json").as_ptr(), &mut g) };
    assert_eq!(st, FgStatus::InvalidJson);
    assert!(g.is_null());
    let st = unsafe { fg_game_new(cstr(r#"{"lattice": {"kind": "finite_square", "n": 0}}"#).as_ptr(), &mut g) };
    assert_eq!(st, FgStatus::InvalidLattice);
}

#[test]
fn strategy_handle_drives_a_game() {
    let g = new_game(
        r#"{"lattice": {"kind": "hexagonal", "window": 40}, "fires": [[0, 0]], "schedule": {"base": 1, "extras": [[1, 1], [1, 1]]}}"#,
    );
    let mut s = ptr::null_mut();
    unsafe {
        let spec = cstr(r#"{"name": "hex_contain", "params": {"t1": 1, "t2": 1}}"#);
        assert_eq!(fg_strategy_new(spec.as_ptr(), &mut s), FgStatus::Ok);
        let mut contained = false;
        for _ in 0..10 {
            fg_game_is_contained(g, &mut contained);
            if contained {
                break;
            }
            assert_eq!(fg_game_step(g, s), FgStatus::Ok);
        }
        assert!(contained);
        let mut out = ptr::null_mut();
        assert_eq!(fg_game_state_json(g, &mut out), FgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        assert_eq!(v["contained"], true);
        assert_eq!(v["burning"].as_array().unwrap().len(), 2);
        fg_string_free(out);
        fg_strategy_free(s);
        fg_game_free(g);

        let bad = cstr(r#"{"name": "no_such_strategy"}"#);
        assert_eq!(fg_strategy_new(bad.as_ptr(), &mut s), FgStatus::UnknownStrategy);
    }
}

#[test]
fn solve_through_json() {
    let mut out = ptr::null_mut();
    unsafe {
        let cfg = cstr(r#"{"lattice": {"kind": "finite_square", "n": 3}, "fires": [[-1, -1]]}"#);
        assert_eq!(fg_solve_json(cfg.as_ptr(), &mut out), FgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        fg_string_free(out);
        assert_eq!(v["sn"], 6);
        assert_eq!(v["proved"], true);

        let big = cstr(r#"{"lattice": {"kind": "finite_square", "n": 12}}"#);
        assert_eq!(fg_solve_json(big.as_ptr(), &mut out), FgStatus::TooLarge);
    }
}

#[test]
fn theorem1_bounds_are_exact_fractions() {
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { fg_bounds_theorem1(&mut lo, &mut hi) }, FgStatus::Ok);
    assert_eq!(lo, 5.0 / 8.0);
    assert!((hi - 67243.0 / 105300.0).abs() < 1e-15);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/firegrid.h")).unwrap();
    for f in [
        "fg_game_new",
        "fg_game_free",
        "fg_game_protect",
        "fg_game_spread",
        "fg_game_step",
        "fg_game_is_contained",
        "fg_game_counts",
        "fg_game_state_json",
        "fg_strategy_new",
        "fg_strategy_free",
        "fg_solve_json",
        "fg_bounds_theorem1",
        "fg_string_free",
        "fg_last_error_message",
        "FG_STATUS_PROTECT_BURNING",
    ] {
        assert!(header.contains(f), "{f} missing from the header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempdir();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"firegrid.h\"\nint main(void) { FgGame *g = 0; FgStatus s = fg_game_new(\"{}\", &g); return s == FG_STATUS_OK; }\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc);
        }
    }
    Err(())
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("firegrid-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
