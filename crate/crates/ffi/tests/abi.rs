use std::ffi::CStr;
use std::ptr;

use diracdet_ffi::*;

#[test]
fn n_integral_fraction() {
    let (mut n, mut d) = (0i64, 0i64);
    let s = unsafe { dd_n_integral(4, 4, &mut n, &mut d) };
    assert_eq!(s, DdStatus::Ok);
    assert_eq!((n, d), (1, 8));
    let s = unsafe { dd_n_integral(2, 1, &mut n, &mut d) };
    assert_eq!(s, DdStatus::UnsupportedParity);
    let msg = dd_last_error();
    assert!(!msg.is_null());
    let text = unsafe { CStr::from_ptr(msg) }.to_string_lossy().into_owned();
    assert!(text.contains("odd"), "{text}");
    unsafe { dd_string_free(msg) };
}

#[test]
fn null_out_pointers_are_rejected() {
    let mut n = 0i64;
    assert_eq!(unsafe { dd_n_integral(2, 0, &mut n, ptr::null_mut()) }, DdStatus::NullPointer);
    assert_eq!(unsafe { dd_table_compute(ptr::null_mut()) }, DdStatus::NullPointer);
    assert_eq!(unsafe { dd_table_len(ptr::null()) }, 0);
    unsafe { dd_table_free(ptr::null_mut()) };
    unsafe { dd_string_free(ptr::null_mut()) };
}

#[test]
fn table_handle() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { dd_table_compute(&mut t) }, DdStatus::Ok);
    assert_eq!(unsafe { dd_table_len(t) }, 16);
    let mut sig = [9u8; 4];
    let (mut rn, mut rd, mut inum, mut id) = (0, 0, 0, 0);
    let mut found = false;
    for i in 0..16 {
        assert_eq!(unsafe { dd_table_signature(t, i, sig.as_mut_ptr()) }, DdStatus::Ok);
        let mut ok = false;
        assert_eq!(unsafe { dd_table_matches(t, i, &mut ok) }, DdStatus::Ok);
        assert!(ok);
        if sig == [0, 0, 0, 5] {
            found = true;
            let s = unsafe { dd_table_coefficient(t, i, 3, &mut rn, &mut rd, &mut inum, &mut id) };
            assert_eq!(s, DdStatus::Ok);
            assert_eq!((rn, inum, id), (0, -1, 1));
        }
    }
    assert!(found);
    let s = unsafe { dd_table_coefficient(t, 0, 4, &mut rn, &mut rd, &mut inum, &mut id) };
    assert_eq!(s, DdStatus::InvalidArgument);
    assert_eq!(unsafe { dd_table_signature(t, 16, sig.as_mut_ptr()) }, DdStatus::InvalidArgument);
    unsafe { dd_table_free(t) };
}

#[test]
fn report_handle() {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { dd_report_compute(3, &mut r) }, DdStatus::InvalidArgument);
    assert_eq!(unsafe { dd_report_compute(2, &mut r) }, DdStatus::Ok);
    let mut eq = false;
    assert_eq!(unsafe { dd_report_yang_mills(r, &mut eq) }, DdStatus::Ok);
    assert!(eq);
    let (mut n, mut d) = (0, 0);
    assert_eq!(unsafe { dd_report_mass_term(r, &mut n, &mut d) }, DdStatus::Ok);
    assert_eq!(d, 1);
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { dd_report_to_json(r, &mut js) }, DdStatus::Ok);
    let text = unsafe { CStr::from_ptr(js) }.to_string_lossy().into_owned();
    assert!(text.contains("\"yang_mills\""));
    assert!(text.contains("\"finite_part\":\"not computed\""));
    unsafe {
        dd_string_free(js);
        dd_report_free(r);
    }
}

#[test]
fn verify_through_the_abi() {
    let mut passed = false;
    assert_eq!(unsafe { dd_verify(2, &mut passed, ptr::null_mut()) }, DdStatus::InvalidArgument);
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { dd_verify(16, &mut passed, &mut js) }, DdStatus::Ok);
    assert!(passed);
    let text = unsafe { CStr::from_ptr(js) }.to_string_lossy().into_owned();
    assert!(text.contains("\"status\": \"pass\""));
    assert!(!text.contains("\"status\": \"fail\""));
    unsafe { dd_string_free(js) };
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/diracdet.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["dd_n_integral", "dd_table_compute", "dd_report_to_json", "dd_verify", "dd_string_free"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).output() else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
