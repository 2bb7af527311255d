use std::ffi::{CStr, CString};
use std::ptr;

use diaq::{Complex, DenseMatrix, DiaqMatrix};
use diaq_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(diaq_last_error_message()) }.to_string_lossy().into_owned()
}

fn interleave(values: &[Complex<f64>]) -> Vec<f64> {
    values.iter().flat_map(|v| [v.re, v.im]).collect()
}

fn from_dense(n: usize, data: &[f64]) -> *mut DiaqMatrixHandle {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { diaq_matrix_from_dense(n, data.as_ptr(), 0.0, &mut h) }, DiaqStatus::Ok);
    h
}

fn to_dense(h: *const DiaqMatrixHandle, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; 2 * n * n];
    assert_eq!(unsafe { diaq_matrix_to_dense(h, out.as_mut_ptr(), out.len()) }, DiaqStatus::Ok);
    out
}

/// Deterministic pseudo-random doubles with a fraction of exact zeros.
fn sample(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed;
    (0..2 * n * n)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (s >> 11) as f64 / (1u64 << 53) as f64;
            if u < 0.4 { 0.0 } else { 2.0 * u - 1.0 }
        })
        .collect()
}

#[test]
fn round_trips() {
    // a..f = 1..6 in the corner pattern
    let mut sample4 = vec![0.0; 32];
    for (r, c, v) in [(0, 0, 1.0), (0, 3, 2.0), (1, 1, 3.0), (2, 2, 4.0), (3, 0, 5.0), (3, 3, 6.0)] {
        sample4[2 * (r * 4 + c)] = v;
    }
    let h = from_dense(4, &sample4);
    assert_eq!(to_dense(h, 4), sample4);
    let mut count = 0;
    unsafe { diaq_matrix_diag_count(h, &mut count) };
    assert_eq!(count, 3);
    unsafe { diaq_matrix_free(h) };

    let zero = from_dense(1, &[0.0, 0.0]);
    unsafe { diaq_matrix_diag_count(zero, &mut count) };
    assert_eq!(count, 0);
    assert_eq!(to_dense(zero, 1), vec![0.0, 0.0]);
    unsafe { diaq_matrix_free(zero) };

    let data = sample(32, 1);
    let h = from_dense(32, &data);
    assert_eq!(to_dense(h, 32), data);
    let mut n = 0;
    unsafe { diaq_matrix_dim(h, &mut n) };
    assert_eq!(n, 32);
    unsafe { diaq_matrix_free(h) };
}

#[test]
fn kernels_match_core() {
    let n = 16;
    let (da, db) = (sample(n, 2), sample(n, 3));
    let (a, b) = (from_dense(n, &da), from_dense(n, &db));
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { diaq_matrix_matmul(a, b, &mut c) }, DiaqStatus::Ok);

    let core = |d: &[f64]| {
        let vals: Vec<Complex<f64>> = d.chunks(2).map(|p| Complex::new(p[0], p[1])).collect();
        DenseMatrix::from_row_major(n, vals).unwrap()
    };
    let want = core(&da).matmul(&core(&db)).unwrap();
    let got = to_dense(c, n);
    let diff = got.iter().zip(interleave(want.as_slice())).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff <= 1e-12 * n as f64);

    let x: Vec<f64> = (0..2 * n).map(|i| i as f64 * 0.25 - 1.0).collect();
    let mut y = vec![0.0; 2 * n];
    assert_eq!(unsafe { diaq_matrix_spmv(a, x.as_ptr(), n, y.as_mut_ptr()) }, DiaqStatus::Ok);
    let xv: Vec<Complex<f64>> = x.chunks(2).map(|p| Complex::new(p[0], p[1])).collect();
    let want = DiaqMatrix::from_dense(&core(&da), 0.0).spmv(&xv).unwrap();
    assert_eq!(y, interleave(&want));

    let mut t = ptr::null_mut();
    assert_eq!(unsafe { diaq_matrix_transpose(a, &mut t) }, DiaqStatus::Ok);
    let td = to_dense(t, n);
    for r in 0..n {
        for col in 0..n {
            assert_eq!(td[2 * (r * n + col)], da[2 * (col * n + r)]);
        }
    }

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { diaq_matrix_to_json(t, &mut json) }, DiaqStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { diaq_string_free(json) };
    let back: DiaqMatrix<f64> = serde_json::from_str(&text).unwrap();
    assert_eq!(interleave(back.to_dense().as_slice()), td);

    for h in [a, b, c, t] {
        assert_eq!(unsafe { diaq_matrix_free(h) }, DiaqStatus::Ok);
    }
}

#[test]
fn errors_are_reported_not_fatal() {
    let mut h = ptr::null_mut();
    let nan = [f64::NAN, 0.0];
    assert_eq!(unsafe { diaq_matrix_from_dense(1, nan.as_ptr(), 0.0, &mut h) }, DiaqStatus::InvalidArgument);
    assert!(last_error().contains("NaN"));
    assert_eq!(unsafe { diaq_matrix_from_dense(2, ptr::null(), 0.0, &mut h) }, DiaqStatus::NullPointer);

    let a = from_dense(2, &sample(2, 4));
    let b = from_dense(3, &sample(3, 5));
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { diaq_matrix_matmul(a, b, &mut c) }, DiaqStatus::Shape);
    assert!(last_error().contains("not multiplyable"));
    assert!(c.is_null());

    let mut small = vec![0.0; 3];
    assert_eq!(unsafe { diaq_matrix_to_dense(a, small.as_mut_ptr(), small.len()) }, DiaqStatus::Shape);

    // Use after free and double free are caught by the handle registry.
    assert_eq!(unsafe { diaq_matrix_free(a) }, DiaqStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { diaq_matrix_dim(a, &mut n) }, DiaqStatus::InvalidHandle);
    assert_eq!(unsafe { diaq_matrix_free(a) }, DiaqStatus::InvalidHandle);
    assert_eq!(unsafe { diaq_matrix_free(ptr::null_mut()) }, DiaqStatus::Ok);
    unsafe { diaq_matrix_free(b) };

    // A successful call clears the message.
    let ok = from_dense(1, &[1.0, 0.0]);
    assert_eq!(last_error(), "");
    unsafe { diaq_matrix_free(ok) };
}

fn simulate(src: &str, backend: &str, shots: u64, emit_state: bool) -> (DiaqStatus, *mut DiaqRunHandle) {
    let (src, backend) = (CString::new(src).unwrap(), CString::new(backend).unwrap());
    let mut r = ptr::null_mut();
    let status = unsafe { diaq_simulate(src.as_ptr(), backend.as_ptr(), shots, 7, false, emit_state, &mut r) };
    (status, r)
}

#[test]
fn simulate_matches_core_run() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../circuits/ghz_n4.qasm")).unwrap();
    let (status, r) = simulate(&src, "diaq", 0, true);
    assert_eq!(status, DiaqStatus::Ok);
    let mut nq = 0;
    unsafe { diaq_run_n_qubits(r, &mut nq) };
    assert_eq!(nq, 4);
    let mut state = vec![0.0; 32];
    assert_eq!(unsafe { diaq_run_state(r, state.as_mut_ptr(), state.len()) }, DiaqStatus::Ok);

    let circuit = diaq::qasm::load(&src).unwrap();
    let opts = diaq::RunOptions { shots: 0, emit_state: true, ..Default::default() };
    let core = diaq::sim::run::<f64>(&circuit, &opts).unwrap();
    assert_eq!(state, interleave(core.state.as_ref().unwrap()));
    unsafe { diaq_run_free(r) };

    let (_, dense) = simulate(&src, "dense", 1024, false);
    let (_, sparse) = simulate(&src, "diaq", 1024, false);
    let counts = |r| {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { diaq_run_counts_json(r, &mut s) }, DiaqStatus::Ok);
        let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
        unsafe { diaq_string_free(s) };
        text
    };
    assert_eq!(counts(dense), counts(sparse));
    let mut no_state = vec![0.0; 32];
    assert_eq!(unsafe { diaq_run_state(dense, no_state.as_mut_ptr(), 32) }, DiaqStatus::InvalidArgument);
    unsafe {
        diaq_run_free(dense);
        diaq_run_free(sparse);
    }
    assert_eq!(unsafe { diaq_run_free(sparse) }, DiaqStatus::InvalidHandle);
}

#[test]
fn simulate_errors_carry_location() {
    let (status, r) = simulate("qreg q[2];\nh q[0]\ncx q[0],q[1];", "diaq", 0, false);
    assert_eq!(status, DiaqStatus::Parse);
    assert!(r.is_null());
    let (mut line, mut col) = (0, 0);
    diaq_last_error_location(&mut line, &mut col);
    assert_eq!((line, col), (3, 1));

    let (status, _) = simulate("qreg q[1]; creg c[1];\nif(c==1) x q[0];", "diaq", 0, false);
    assert_eq!(status, DiaqStatus::Unsupported);
    assert!(last_error().contains("if"));
    assert_eq!(simulate("qreg q[1]; h q[0];", "gpu", 0, false).0, DiaqStatus::InvalidArgument);
    assert_eq!(simulate("qreg q[31]; h q[0];", "diaq", 0, false).0, DiaqStatus::Resource);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(diaq_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
