use std::ffi::{CStr, CString};
use std::ptr;

use grafrepair_ffi::*;

fn fixture(name: &str) -> CString {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    CString::new(std::fs::read_to_string(path).expect("fixture")).expect("no nul")
}

fn last_error() -> String {
    let p = gr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn check_kmax_and_repair_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(gr_graph_from_json(fixture("G0.json").as_ptr(), ptr::null(), &mut g), GR_OK);
        let mut c = ptr::null_mut();
        assert_eq!(gr_constraint_from_json(fixture("c_one.json").as_ptr(), ptr::null(), &mut c), GR_OK);
        let mut n = 0;
        assert_eq!(gr_constraint_nlvl(c, &mut n), GR_OK);
        assert_eq!(n, 2);
        let mut sat = -1;
        assert_eq!(gr_check(g, c, &mut sat), GR_OK);
        assert_eq!(sat, 0);
        let mut k = 7;
        assert_eq!(gr_kmax(g, c, &mut k), GR_OK);
        assert_eq!(k, -1);

        let mut h = ptr::null_mut();
        assert_eq!(gr_repair(g, c, fixture("rules.json").as_ptr(), 7, &mut h), GR_OK);
        assert_eq!(gr_check(h, c, &mut sat), GR_OK);
        assert_eq!(sat, 1);
        let (mut nodes, mut edges) = (0, 0);
        assert_eq!(gr_graph_size(h, &mut nodes, &mut edges), GR_OK);
        assert_eq!((nodes, edges), (2, 1));

        let mut h2 = ptr::null_mut();
        assert_eq!(gr_repair(g, c, ptr::null(), 3, &mut h2), GR_OK);
        assert_eq!(gr_check(h2, c, &mut sat), GR_OK);
        assert_eq!(sat, 1);

        let mut s = ptr::null_mut();
        assert_eq!(gr_graph_to_json(h, &mut s), GR_OK);
        let text = CStr::from_ptr(s).to_str().expect("utf8").to_owned();
        gr_string_free(s);
        let mut back = ptr::null_mut();
        let ctext = CString::new(text).expect("no nul");
        assert_eq!(gr_graph_from_json(ctext.as_ptr(), ptr::null(), &mut back), GR_OK);
        assert_eq!(gr_check(back, c, &mut sat), GR_OK);
        assert_eq!(sat, 1);

        gr_graph_free(back);
        gr_graph_free(h2);
        gr_graph_free(h);
        gr_graph_free(g);
        gr_constraint_free(c);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = CString::new(r#"{"nodes":[{"id":0,"type":"Nope"}]}"#).unwrap();
        assert_eq!(gr_graph_from_json(bad.as_ptr(), fixture("typegraph.json").as_ptr(), &mut g), GR_ERR_PARSE);
        assert!(g.is_null());
        assert!(last_error().contains("/nodes/0/type"));

        assert_eq!(gr_graph_from_json(ptr::null(), ptr::null(), &mut g), GR_ERR_NULL);
        let mut sat = 0;
        assert_eq!(gr_check(ptr::null(), ptr::null(), &mut sat), GR_ERR_NULL);

        let mut c = ptr::null_mut();
        assert_eq!(gr_constraint_from_json(fixture("c_depChain.json").as_ptr(), ptr::null(), &mut c), GR_OK);
        let mut host = ptr::null_mut();
        assert_eq!(gr_graph_from_json(fixture("G_mixed.json").as_ptr(), ptr::null(), &mut host), GR_OK);
        let mut h = ptr::null_mut();
        assert_eq!(gr_repair(host, c, ptr::null(), 0, &mut h), GR_ERR_CYCLIC);
        assert!(h.is_null());
        gr_graph_free(host);
        gr_constraint_free(c);
        gr_graph_free(ptr::null_mut());
        gr_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(gr_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/grafrepair.h")).expect("generated header");
    for f in ["gr_graph_from_json", "gr_graph_to_json", "gr_graph_free", "gr_constraint_from_json", "gr_check", "gr_kmax", "gr_repair", "gr_last_error", "gr_string_free"] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct GrGraph GrGraph;"));
}

#[test]
fn c_program_links_against_the_static_library() {
    let Ok(exe) = std::env::current_exe() else { return };
    let profile_dir = exe.parent().and_then(|d| d.parent()).expect("target profile dir");
    let lib = profile_dir.join("libgrafrepair_ffi.a");
    if !lib.exists() || std::process::Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = tempfile::tempdir().expect("tempdir");
    let bin = out.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("run cc");
    assert!(status.success());
    let run = std::process::Command::new(&bin).output().expect("run smoke binary");
    assert!(run.status.success());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("rc=0 nodes=1"));
}
