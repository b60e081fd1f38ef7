use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rrr_ffi::*;

fn last_error() -> String {
    let p = rrr_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new_mrf(a: &[f64], n: usize, domain: RrrDomain) -> *mut RrrMrf {
    let mut m = ptr::null_mut();
    let status = unsafe { rrr_mrf_new(a.as_ptr(), n, domain as u32, &mut m) };
    assert_eq!(status, RrrStatus::Ok);
    m
}

#[test]
fn mrf_score_and_symmetrization() {
    let m = new_mrf(&[1.0, 2.0, 0.0, 1.0], 2, RrrDomain::PlusMinusOne);
    let mut a = [0.0; 4];
    let mut s = 0.0;
    unsafe {
        assert_eq!(rrr_mrf_n(m), 2);
        assert_eq!(rrr_mrf_matrix(m, a.as_mut_ptr(), 4), RrrStatus::Ok);
        assert_eq!(a, [1.0, 1.0, 1.0, 1.0]);
        assert_eq!(rrr_mrf_score(m, [1i8, -1].as_ptr(), 2, &mut s), RrrStatus::Ok);
        assert_eq!(s, 0.0);
        assert_eq!(rrr_mrf_score(m, [1i8, 0].as_ptr(), 2, &mut s), RrrStatus::DomainMismatch);
        assert!(last_error().contains("not a valid"));
        assert_eq!(rrr_mrf_score(m, [1i8].as_ptr(), 1, &mut s), RrrStatus::DimensionMismatch);
        assert_eq!(rrr_mrf_matrix(m, a.as_mut_ptr(), 3), RrrStatus::BufferTooSmall);
        rrr_mrf_free(m);
    }
}

#[test]
fn null_and_bad_arguments_are_reported() {
    let mut m = ptr::null_mut();
    let mut v = 0.0;
    unsafe {
        assert_eq!(rrr_mrf_new(ptr::null(), 2, 0, &mut m), RrrStatus::NullPointer);
        assert!(last_error().contains("a is NULL"));
        assert_eq!(rrr_mrf_new([0.0].as_ptr(), 1, 7, &mut m), RrrStatus::InvalidArgument);
        assert!(m.is_null());
        assert_eq!(rrr_exact_logz_mrf(ptr::null(), &mut v), RrrStatus::NullPointer);
        assert_eq!(rrr_mrf_new([f64::NAN].as_ptr(), 1, 0, &mut m), RrrStatus::Numeric);
        rrr_mrf_free(ptr::null_mut());
        rrr_rbm_free(ptr::null_mut());
        rrr_relaxed_free(ptr::null_mut());
        rrr_px_free(ptr::null_mut());
        rrr_string_free(ptr::null_mut());
        // a successful call clears the message
        let ok = new_mrf(&[0.0], 1, RrrDomain::ZeroOne);
        assert_eq!(rrr_exact_logz_mrf(ok, &mut v), RrrStatus::Ok);
        assert!(rrr_last_error().is_null());
        assert!((v - 2f64.ln()).abs() < 1e-15);
        rrr_mrf_free(ok);
    }
}

#[test]
fn json_round_trip() {
    let text = CString::new(r#"{"kind":"rbm","domain":"01","m":1,"p":2,"W":[[0.5,-1.0]],"a":[0.25],"b":[0.0,1.0]}"#).unwrap();
    let mut r = ptr::null_mut();
    let mut m = ptr::null_mut();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(rrr_rbm_from_json(text.as_ptr(), &mut r), RrrStatus::Ok);
        assert_eq!(rrr_mrf_from_json(text.as_ptr(), &mut m), RrrStatus::Format);
        assert_eq!(rrr_rbm_to_json(r, &mut out), RrrStatus::Ok);
        let written = CStr::from_ptr(out).to_str().unwrap().to_owned();
        rrr_string_free(out);
        let again = CString::new(written.clone()).unwrap();
        let mut r2 = ptr::null_mut();
        assert_eq!(rrr_rbm_from_json(again.as_ptr(), &mut r2), RrrStatus::Ok);
        assert_eq!(rrr_rbm_to_json(r2, &mut out), RrrStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), written);
        rrr_string_free(out);
        rrr_rbm_free(r);
        rrr_rbm_free(r2);
    }
}

#[test]
fn zero_one_rbm_embedding_offset() {
    // Brute-force the RBM directly and compare with the embedded MRF's MAP.
    let w = [0.5, -1.0, 2.0, 0.3];
    let (a, b) = ([0.25, -0.75], [-1.5, 0.5]);
    let mut r = ptr::null_mut();
    let mut m = ptr::null_mut();
    let mut offset = 0.0;
    unsafe {
        assert_eq!(
            rrr_rbm_new(w.as_ptr(), 2, 2, a.as_ptr(), b.as_ptr(), RrrDomain::ZeroOne as u32, &mut r),
            RrrStatus::Ok
        );
        assert_eq!(rrr_rbm_embed(r, &mut m, &mut offset), RrrStatus::Ok);
        let mut best = f64::NEG_INFINITY;
        for bits in 0..16u32 {
            let v = [(bits & 1) as i8, (bits >> 1 & 1) as i8];
            let h = [(bits >> 2 & 1) as i8, (bits >> 3 & 1) as i8];
            let mut s = 0.0;
            assert_eq!(rrr_rbm_score(r, v.as_ptr(), 2, h.as_ptr(), 2, &mut s), RrrStatus::Ok);
            best = best.max(s);
        }
        let mut x = [0i8; 5];
        let mut s = 0.0;
        assert_eq!(rrr_brute_force_map(m, x.as_mut_ptr(), 5, &mut s), RrrStatus::Ok);
        assert!((s + offset - best).abs() < 1e-12);
        rrr_mrf_free(m);
        rrr_rbm_free(r);
    }
}

#[test]
fn relaxation_sampling_and_distribution_agree() {
    let mut r = ptr::null_mut();
    let mut m = ptr::null_mut();
    let mut offset = 0.0;
    let mut sol = ptr::null_mut();
    let mut px = ptr::null_mut();
    unsafe {
        assert_eq!(rrr_rbm_random(3, 3, 2, &mut r), RrrStatus::Ok);
        assert_eq!(rrr_rbm_embed(r, &mut m, &mut offset), RrrStatus::Ok);
        assert_eq!(offset, 0.0);
        let n = rrr_mrf_n(m);
        let mut opts = std::mem::zeroed();
        assert_eq!(rrr_lrp_options_default(&mut opts), RrrStatus::Ok);
        opts.seed = 4;
        assert_eq!(rrr_solve_lrp(m, &opts, &mut sol), RrrStatus::Ok);
        assert_eq!(rrr_relaxed_width(sol), 2);
        let mut x = vec![0.0; n * 2];
        assert_eq!(rrr_relaxed_matrix(sol, x.as_mut_ptr(), x.len()), RrrStatus::Ok);
        assert!(x.chunks(2).all(|row| row[0].hypot(row[1]) <= 1.0 + 1e-12));

        let count = 200;
        let mut samples = vec![0i8; count * n];
        let mut scores = vec![0.0; count];
        assert_eq!(rrr_sample(m, sol, count, 9, samples.as_mut_ptr(), scores.as_mut_ptr()), RrrStatus::Ok);

        assert_eq!(rrr_px_build(sol, &mut px), RrrStatus::Ok);
        let mut support_size = 0;
        assert_eq!(
            rrr_px_support(px, ptr::null_mut(), ptr::null_mut(), 0, &mut support_size),
            RrrStatus::BufferTooSmall
        );
        assert!(support_size >= 2 && support_size <= 2 * n);
        let mut pats = vec![0i8; support_size * n];
        let mut probs = vec![0.0; support_size];
        assert_eq!(
            rrr_px_support(px, pats.as_mut_ptr(), probs.as_mut_ptr(), support_size, &mut support_size),
            RrrStatus::Ok
        );
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (pat, &p) in pats.chunks(n).zip(&probs) {
            let mut q = 0.0;
            assert_eq!(rrr_px_query(px, pat.as_ptr(), n, &mut q), RrrStatus::Ok);
            assert!((p - q).abs() < 1e-12);
        }
        // every drawn sample lies in the support and scores match
        for (t, sample) in samples.chunks(n).enumerate() {
            let mut q = 0.0;
            assert_eq!(rrr_px_query(px, sample.as_ptr(), n, &mut q), RrrStatus::Ok);
            assert!(q > 0.0);
            let mut s = 0.0;
            assert_eq!(rrr_mrf_score(m, sample.as_ptr(), n, &mut s), RrrStatus::Ok);
            assert_eq!(s, scores[t]);
        }

        let (mut exact, mut support_logz, mut is) = (0.0, 0.0, 0.0);
        assert_eq!(rrr_exact_logz_mrf(m, &mut exact), RrrStatus::Ok);
        assert_eq!(rrr_rrr_is_exact_support(m, sol, &mut support_logz), RrrStatus::Ok);
        assert_eq!(rrr_rrr_is(m, sol, 1000, 3, &mut is), RrrStatus::Ok);
        assert!(support_logz <= exact + 1e-9);
        assert!(is.is_finite());

        let mut best = vec![0i8; n];
        let (mut ag, mut rag, mut brute) = (0.0, 0.0, 0.0);
        assert_eq!(rrr_annealed_gibbs(m, 5.0, 50, 4, 0, 1, best.as_mut_ptr(), n, &mut ag), RrrStatus::Ok);
        assert_eq!(rrr_rrr_ag(m, sol, 5.0, 50, 4, 0, 1, best.as_mut_ptr(), n, &mut rag), RrrStatus::Ok);
        assert_eq!(rrr_brute_force_map(m, best.as_mut_ptr(), n, &mut brute), RrrStatus::Ok);
        assert!(ag <= brute + 1e-9 && rag <= brute + 1e-9);

        rrr_px_free(px);
        rrr_relaxed_free(sol);
        rrr_mrf_free(m);
        rrr_rbm_free(r);
    }
}

#[test]
fn width_three_has_no_exact_distribution() {
    let mut r = ptr::null_mut();
    let mut m = ptr::null_mut();
    let mut offset = 0.0;
    let mut sol = ptr::null_mut();
    let mut px = ptr::null_mut();
    unsafe {
        assert_eq!(rrr_rbm_hard(4, 4, 2, 50.0, 5.0, 1, &mut r), RrrStatus::Ok);
        assert_eq!(rrr_rbm_embed(r, &mut m, &mut offset), RrrStatus::Ok);
        let opts = RrrLrpOptions {
            width: 3,
            max_iters: 500,
            rel_tol: 1e-8,
            backtracking: 1,
            restarts: 2,
            seed: 0,
        };
        assert_eq!(rrr_solve_lrp(m, &opts, &mut sol), RrrStatus::Ok);
        assert_eq!(rrr_px_build(sol, &mut px), RrrStatus::UnsupportedWidth);
        assert!(px.is_null());
        let mut logz = 0.0;
        assert_eq!(rrr_ais_logz(r, 1, 10, 0, &mut logz, ptr::null_mut()), RrrStatus::InvalidArgument);
        rrr_relaxed_free(sol);
        rrr_mrf_free(m);
        rrr_rbm_free(r);
    }
}

#[test]
fn ais_zero_rbm_is_exact() {
    let zeros = [0.0; 6];
    let mut r = ptr::null_mut();
    let (mut logz, mut std) = (0.0, 1.0);
    unsafe {
        assert_eq!(
            rrr_rbm_new(zeros.as_ptr(), 3, 2, zeros.as_ptr(), zeros.as_ptr(), 0, &mut r),
            RrrStatus::Ok
        );
        assert_eq!(rrr_ais_logz(r, 20, 5, 8, &mut logz, &mut std), RrrStatus::Ok);
        rrr_rbm_free(r);
    }
    assert_eq!(logz, 5.0 * 2f64.ln());
    assert_eq!(std, 0.0);
}

/// Compiles and runs a C program against the generated header and the static
/// library. Skipped when no C compiler is available.
///
/// `cargo test` only builds the rlib, so the static library is built here into
/// a private target directory. Linking a leftover archive from an earlier
/// `cargo build` could pick up an outdated ABI.
#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = crate_dir.join("include");
    assert!(header_dir.join("rrr.h").exists(), "header is generated by the build script");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: C compiler unavailable");
        return;
    }
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let lib_target = out_dir.join("staticlib");
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "rrr-ffi", "--target-dir"])
        .arg(&lib_target)
        .current_dir(&crate_dir)
        .status()
        .unwrap();
    assert!(built.success(), "building the static library failed");
    let lib = lib_target.join("debug").join("librrr_ffi.a");
    let bin = out_dir.join("rrr_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to compile");
    let run = Command::new(&bin).output().unwrap();
    assert!(
        run.status.success(),
        "C smoke program failed: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
