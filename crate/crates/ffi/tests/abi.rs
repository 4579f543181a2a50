use std::ffi::{CStr, CString};
use std::ptr;

use disco_ffi::*;

fn last_error() -> String {
    let p = disco_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn matrix(rows: usize, cols: usize, data: &[f64]) -> *mut DiscoMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { disco_matrix_new(data.as_ptr(), rows, cols, &mut m) }, DiscoStatus::Ok);
    m
}

#[test]
fn wraparound_single_point() {
    let m = matrix(1, 2, &[0.5, 0.5]);
    let mut v = 0.0;
    let status = unsafe { disco_discrepancy(m, DiscoMeasure::Wraparound, &mut v) };
    assert_eq!(status, DiscoStatus::Ok);
    assert!((v - 17.0 / 36.0).abs() < 1e-12);
    unsafe { disco_matrix_free(m) };
}

#[test]
fn out_of_range_point_reports_domain_error() {
    let m = matrix(2, 1, &[0.2, 1.5]);
    let mut v = -1.0;
    let status = unsafe { disco_discrepancy(m, DiscoMeasure::StarL2, &mut v) };
    assert_eq!(status, DiscoStatus::Domain);
    assert_eq!(v, -1.0);
    assert!(last_error().contains("row 2"), "{}", last_error());
    unsafe { disco_matrix_free(m) };
}

#[test]
fn ersatz_on_three_columns_is_usage_error() {
    let m = matrix(1, 3, &[0.1, 0.2, 0.3]);
    let mut v = 0.0;
    assert_eq!(unsafe { disco_discrepancy(m, DiscoMeasure::Ersatz, &mut v) }, DiscoStatus::Usage);
    unsafe { disco_matrix_free(m) };
}

#[test]
fn null_pointers_are_rejected() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { disco_discrepancy(ptr::null(), DiscoMeasure::L2, &mut v) },
        DiscoStatus::NullPointer
    );
    let m = matrix(1, 1, &[0.5]);
    assert_eq!(
        unsafe { disco_discrepancy(m, DiscoMeasure::L2, ptr::null_mut()) },
        DiscoStatus::NullPointer
    );
    unsafe {
        disco_matrix_free(m);
        disco_matrix_free(ptr::null_mut());
        disco_metafunction_free(ptr::null_mut());
        disco_string_free(ptr::null_mut());
    }
}

#[test]
fn sobol_sample_round_trip() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { disco_sample(1, 0, 0, 4, 1, &mut m) }, DiscoStatus::Ok);
    assert_eq!(unsafe { disco_matrix_rows(m) }, 4);
    assert_eq!(unsafe { disco_matrix_cols(m) }, 1);
    let mut buf = [0.0; 4];
    assert_eq!(unsafe { disco_matrix_copy(m, buf.as_mut_ptr(), 4) }, DiscoStatus::Ok);
    assert_eq!(buf, [0.0, 0.5, 0.75, 0.25]);
    assert_eq!(unsafe { disco_matrix_copy(m, buf.as_mut_ptr(), 3) }, DiscoStatus::Shape);
    unsafe { disco_matrix_free(m) };
}

#[test]
fn capacity_error_for_too_many_dimensions() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { disco_sample(1, 1, 3, 8, 5000, &mut m) }, DiscoStatus::Capacity);
    assert!(m.is_null());
}

#[test]
fn s_ersatz_and_savage() {
    let x = [0.1, 0.6, 0.1, 0.6];
    let y = [0.1, 0.1, 0.6, 0.6];
    let mut v = 0.0;
    assert_eq!(unsafe { disco_s_ersatz(x.as_ptr(), y.as_ptr(), 4, &mut v) }, DiscoStatus::Ok);
    assert_eq!(v, 1.0);

    let values = [3.0, 1.0, 2.0];
    let mut s = [0.0; 3];
    assert_eq!(unsafe { disco_savage_scores(values.as_ptr(), 3, 1, s.as_mut_ptr()) }, DiscoStatus::Ok);
    assert!((s[0] - (1.0 + 0.5 + 1.0 / 3.0)).abs() < 1e-15);
    assert!((s.iter().sum::<f64>() - 3.0).abs() < 1e-12);
}

#[test]
fn jansen_and_importance_pick_the_driver() {
    let (n, d) = (512usize, 3usize);
    let mut design = ptr::null_mut();
    assert_eq!(unsafe { disco_sample(1, 1, 9, n, 2 * d, &mut design) }, DiscoStatus::Ok);
    let mut ab = vec![0.0; n * 2 * d];
    unsafe { disco_matrix_copy(design, ab.as_mut_ptr(), ab.len()) };
    unsafe { disco_matrix_free(design) };
    let f = |x: &[f64]| (2.0 * std::f64::consts::PI * x[1]).sin() + 0.1 * x[0];
    let mut y = Vec::with_capacity(n * (d + 1));
    for block in 0..=d {
        for row in ab.chunks(2 * d) {
            let mut x = row[..d].to_vec();
            if block > 0 {
                x[block - 1] = row[d + block - 1];
            }
            y.push(f(&x));
        }
    }
    let mut t = [0.0; 3];
    assert_eq!(unsafe { disco_jansen(y.as_ptr(), n, d, t.as_mut_ptr()) }, DiscoStatus::Ok);
    assert!(t[1] > t[0] && t[1] > t[2], "{t:?}");

    let inputs: Vec<f64> = ab.chunks(2 * d).flat_map(|r| r[..d].to_vec()).collect();
    let m = matrix(n, d, &inputs);
    let mut scores = [0.0; 3];
    let status = unsafe { disco_importance(m, y.as_ptr(), DiscoMeasure::Symmetric, scores.as_mut_ptr()) };
    assert_eq!(status, DiscoStatus::Ok);
    assert!(scores[1] > scores[0] && scores[1] > scores[2], "{scores:?}");
    unsafe { disco_matrix_free(m) };
}

#[test]
fn constant_output_is_undefined() {
    let y = [1.0; 8];
    let mut t = [0.0; 3];
    assert_eq!(unsafe { disco_jansen(y.as_ptr(), 2, 3, t.as_mut_ptr()) }, DiscoStatus::Undefined);
    assert!(last_error().contains("constant output"));
}

#[test]
fn metafunction_json_round_trip() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { disco_metafunction_build(6, 42, &mut f) }, DiscoStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { disco_metafunction_to_json(f, &mut json) }, DiscoStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_owned();
    unsafe { disco_string_free(json) };

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { disco_metafunction_from_json(text.as_ptr(), &mut g) }, DiscoStatus::Ok);

    let mut pts = ptr::null_mut();
    unsafe { disco_sample(0, 0, 5, 16, 6, &mut pts) };
    let (mut a, mut b) = ([0.0; 16], [0.0; 16]);
    assert_eq!(unsafe { disco_metafunction_eval(f, pts, a.as_mut_ptr()) }, DiscoStatus::Ok);
    assert_eq!(unsafe { disco_metafunction_eval(g, pts, b.as_mut_ptr()) }, DiscoStatus::Ok);
    assert_eq!(a, b);

    let bad = CString::new("{not json").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { disco_metafunction_from_json(bad.as_ptr(), &mut h) }, DiscoStatus::Domain);
    assert!(h.is_null());
    unsafe {
        disco_matrix_free(pts);
        disco_metafunction_free(f);
        disco_metafunction_free(g);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/disco.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct DiscoMatrix DiscoMatrix;"));
    assert!(header.contains("DISCO_STATUS_OK = 0"));
}
