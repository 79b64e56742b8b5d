//! C ABI for the secnet library.
//!
//! Networks and adversary placements are opaque handles created and released
//! through paired `_parse`/`_free` calls; every fallible function returns an
//! [`SnStatus`] code and writes results through out-pointers. The last error
//! message is kept per thread and can be copied out with
//! [`secnet_last_error`]. The generated header lives in `include/secnet.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::ptr;

use secnet::field::FieldSpec;
use secnet::hashing::{leakage_bound, rates, universal2_check, HashSpec};
use secnet::net::{channel_params, AdversaryPlacement, LinearNetwork};
use secnet::scenario::circle_network;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SnStatus {
    /// Success.
    SnOk = 0,
    /// A required pointer argument was null.
    SnNullArgument = 1,
    /// Input text was not valid UTF-8.
    SnInvalidUtf8 = 2,
    /// Parsing or validation failed; see `secnet_last_error`.
    SnParseError = 3,
    /// A computation rejected its inputs; see `secnet_last_error`.
    SnComputeError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// Copies the current thread's last error message (NUL-terminated, possibly
/// truncated) into `buf` and returns the full message length in bytes.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be null (then only the
/// length is returned).
#[no_mangle]
pub unsafe extern "C" fn secnet_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// An acyclic linear network with ordered edges (opaque).
pub struct SnNetwork {
    net: LinearNetwork,
    file_adversary: AdversaryPlacement,
}

/// A wiretap/injection edge placement (opaque).
pub struct SnPlacement {
    adv: AdversaryPlacement,
}

/// Table-I channel parameters: ranks m0..m2 and dimensions m3..m6.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct SnChannelParams {
    pub m0: u32,
    pub m1: u32,
    pub m2: u32,
    pub m3: u32,
    pub m4: u32,
    pub m5: u32,
    pub m6: u32,
}

/// Achievable rates for given channel parameters.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct SnRates {
    /// m0 - m1 - m2 when achievable, else 0.
    pub robust_secure: u32,
    /// m1 + m2 < m0.
    pub robust_achievable: bool,
    /// m0 - m2 when achievable, else 0.
    pub secrecy_only: u32,
    /// m2 < m0.
    pub secrecy_achievable: bool,
}

/// Parses a network description (the line-oriented file format) into a
/// handle. Adversary lines in the text are kept with the network and merged
/// into every placement query.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
/// The returned handle must be released with [`secnet_network_free`].
#[no_mangle]
pub unsafe extern "C" fn secnet_network_parse(
    text: *const c_char,
    out: *mut *mut SnNetwork,
) -> SnStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        set_error("network text is not UTF-8");
        return SnStatus::SnInvalidUtf8;
    };
    match LinearNetwork::parse(text) {
        Ok((net, adv)) => {
            let handle = Box::new(SnNetwork {
                net,
                file_adversary: adv,
            });
            unsafe { *out = Box::into_raw(handle) };
            SnStatus::SnOk
        }
        Err(e) => {
            set_error(e.to_string());
            SnStatus::SnParseError
        }
    }
}

/// Builds the circle QKD routing network over GF(2) with 1-based node
/// indices for `alice` and `bob`.
///
/// # Safety
/// `out` must be a valid pointer; release the handle with
/// [`secnet_network_free`].
#[no_mangle]
pub unsafe extern "C" fn secnet_circle_network(
    k: u32,
    l: u32,
    alice: u32,
    bob: u32,
    out: *mut *mut SnNetwork,
) -> SnStatus {
    if out.is_null() {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    let spec = FieldSpec::prime(2).expect("GF(2)");
    match circle_network(&spec, k as usize, l as usize, alice as usize, bob as usize) {
        Ok(net) => {
            let handle = Box::new(SnNetwork {
                net,
                file_adversary: AdversaryPlacement::empty(),
            });
            unsafe { *out = Box::into_raw(handle) };
            SnStatus::SnOk
        }
        Err(e) => {
            set_error(e.to_string());
            SnStatus::SnComputeError
        }
    }
}

/// Releases a network handle. Null is ignored.
///
/// # Safety
/// `net` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn secnet_network_free(net: *mut SnNetwork) {
    if !net.is_null() {
        drop(unsafe { Box::from_raw(net) });
    }
}

/// Converts attacked intermediate nodes (NUL-terminated names) into an edge
/// placement, merged with any adversary carried by the network file.
///
/// # Safety
/// `names` must point to `count` valid NUL-terminated strings; `out` must be
/// valid. Release the handle with [`secnet_placement_free`].
#[no_mangle]
pub unsafe extern "C" fn secnet_placement_from_nodes(
    net: *const SnNetwork,
    names: *const *const c_char,
    count: usize,
    out: *mut *mut SnPlacement,
) -> SnStatus {
    if net.is_null() || out.is_null() || (count > 0 && names.is_null()) {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    let net = unsafe { &*net };
    let mut owned = Vec::with_capacity(count);
    for i in 0..count {
        let p = unsafe { *names.add(i) };
        if p.is_null() {
            set_error("null node name");
            return SnStatus::SnNullArgument;
        }
        match unsafe { CStr::from_ptr(p) }.to_str() {
            Ok(s) => owned.push(s.to_string()),
            Err(_) => {
                set_error("node name is not UTF-8");
                return SnStatus::SnInvalidUtf8;
            }
        }
    }
    match net.net.node_to_edge_named(&owned) {
        Ok(adv) => {
            let merged = net.file_adversary.union(&adv);
            unsafe { *out = Box::into_raw(Box::new(SnPlacement { adv: merged })) };
            SnStatus::SnOk
        }
        Err(e) => {
            set_error(e.to_string());
            SnStatus::SnComputeError
        }
    }
}

/// Builds a placement from explicit 1-based edge index lists.
///
/// # Safety
/// `wiretap`/`inject` must point to the stated numbers of entries (null is
/// fine for empty lists); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn secnet_placement_from_edges(
    wiretap: *const usize,
    wiretap_len: usize,
    inject: *const usize,
    inject_len: usize,
    out: *mut *mut SnPlacement,
) -> SnStatus {
    if out.is_null()
        || (wiretap_len > 0 && wiretap.is_null())
        || (inject_len > 0 && inject.is_null())
    {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    let read = |p: *const usize, n: usize| -> Result<Vec<usize>, ()> {
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let idx = unsafe { *p.add(i) };
            if idx == 0 {
                return Err(());
            }
            v.push(idx - 1);
        }
        Ok(v)
    };
    let (Ok(w), Ok(a)) = (read(wiretap, wiretap_len), read(inject, inject_len)) else {
        set_error("edge indices are 1-based");
        return SnStatus::SnComputeError;
    };
    let adv = AdversaryPlacement::new(w, a);
    unsafe { *out = Box::into_raw(Box::new(SnPlacement { adv })) };
    SnStatus::SnOk
}

/// Releases a placement handle. Null is ignored.
///
/// # Safety
/// `adv` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn secnet_placement_free(adv: *mut SnPlacement) {
    if !adv.is_null() {
        drop(unsafe { Box::from_raw(adv) });
    }
}

/// Derives the transfer matrices and fills in the channel parameters. A null
/// placement means the adversary carried by the network file (possibly
/// empty).
///
/// # Safety
/// `net` and `out` must be valid; `adv` may be null.
#[no_mangle]
pub unsafe extern "C" fn secnet_channel_params(
    net: *const SnNetwork,
    adv: *const SnPlacement,
    out: *mut SnChannelParams,
) -> SnStatus {
    if net.is_null() || out.is_null() {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    let net = unsafe { &*net };
    let placement = if adv.is_null() {
        net.file_adversary.clone()
    } else {
        unsafe { &*adv }.adv.clone()
    };
    match net.net.derive_transfer(&placement) {
        Ok(tm) => {
            let p = channel_params(&tm);
            unsafe {
                *out = SnChannelParams {
                    m0: p.m0 as u32,
                    m1: p.m1 as u32,
                    m2: p.m2 as u32,
                    m3: p.m3 as u32,
                    m4: p.m4 as u32,
                    m5: p.m5 as u32,
                    m6: p.m6 as u32,
                };
            }
            SnStatus::SnOk
        }
        Err(e) => {
            set_error(e.to_string());
            SnStatus::SnComputeError
        }
    }
}

/// Achievable-rate arithmetic from channel parameters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn secnet_rates(m0: u32, m1: u32, m2: u32, out: *mut SnRates) -> SnStatus {
    if out.is_null() {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    let r = rates(m0 as usize, m1 as usize, m2 as usize);
    unsafe {
        *out = SnRates {
            robust_secure: r.robust_secure as u32,
            robust_achievable: r.robust_achievable,
            secrecy_only: r.secrecy_only as u32,
            secrecy_achievable: r.secrecy_achievable,
        };
    }
    SnStatus::SnOk
}

/// Evaluates the privacy-amplification leakage bound (the smaller of the two
/// displayed forms) for parameters `s in (0,1]`, output length `kbar_n`,
/// input length `k_n`, block length `l_n`, wiretap rank `m2`, field size
/// `q`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn secnet_leakage_bound(
    s: f64,
    kbar_n: u32,
    k_n: u32,
    l_n: u32,
    m2: u32,
    q: u64,
    out: *mut f64,
) -> SnStatus {
    if out.is_null() {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    match leakage_bound(
        s,
        kbar_n as usize,
        k_n as usize,
        l_n as usize,
        m2 as usize,
        q,
        None,
    ) {
        Ok(b) => {
            unsafe { *out = b.bound };
            SnStatus::SnOk
        }
        Err(e) => {
            set_error(e.to_string());
            SnStatus::SnComputeError
        }
    }
}

/// Exhaustively verifies the universal hash collision bound for the modified
/// Toeplitz family over GF(q); writes the worst collision probability and
/// whether it meets `q^-kbar_n`.
///
/// # Safety
/// `max_collision` and `pass` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn secnet_universal2_check(
    k_n: u32,
    kbar_n: u32,
    q: u64,
    cap: u64,
    max_collision: *mut f64,
    pass: *mut bool,
) -> SnStatus {
    if max_collision.is_null() || pass.is_null() {
        set_error("null argument");
        return SnStatus::SnNullArgument;
    }
    let spec = match FieldSpec::prime(q) {
        Ok(s) => s,
        Err(e) => {
            set_error(e.to_string());
            return SnStatus::SnComputeError;
        }
    };
    let h = match HashSpec::new(&spec, k_n as usize, kbar_n as usize) {
        Ok(h) => h,
        Err(e) => {
            set_error(e.to_string());
            return SnStatus::SnComputeError;
        }
    };
    match universal2_check(&h, cap) {
        Ok(report) => {
            unsafe {
                *max_collision =
                    *report.max_collision.numer() as f64 / *report.max_collision.denom() as f64;
                *pass = report.pass();
            }
            SnStatus::SnOk
        }
        Err(e) => {
            set_error(e.to_string());
            SnStatus::SnComputeError
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn circle_params_roundtrip() {
        let mut net: *mut SnNetwork = ptr::null_mut();
        let st = unsafe { secnet_circle_network(12, 2, 1, 8, &mut net) };
        assert_eq!(st, SnStatus::SnOk);
        let names = [CString::new("v(3)").unwrap()];
        let name_ptrs: Vec<*const c_char> = names.iter().map(|c| c.as_ptr()).collect();
        let mut adv: *mut SnPlacement = ptr::null_mut();
        let st = unsafe { secnet_placement_from_nodes(net, name_ptrs.as_ptr(), 1, &mut adv) };
        assert_eq!(st, SnStatus::SnOk);
        let mut p = SnChannelParams {
            m0: 0,
            m1: 0,
            m2: 0,
            m3: 0,
            m4: 0,
            m5: 0,
            m6: 0,
        };
        let st = unsafe { secnet_channel_params(net, adv, &mut p) };
        assert_eq!(st, SnStatus::SnOk);
        assert_eq!((p.m0, p.m1, p.m2), (4, 1, 1));
        let mut r = SnRates {
            robust_secure: 0,
            robust_achievable: false,
            secrecy_only: 0,
            secrecy_achievable: false,
        };
        assert_eq!(
            unsafe { secnet_rates(p.m0, p.m1, p.m2, &mut r) },
            SnStatus::SnOk
        );
        assert_eq!((r.robust_secure, r.secrecy_only), (2, 3));
        unsafe {
            secnet_placement_free(adv);
            secnet_network_free(net);
        }
    }

    #[test]
    fn parse_error_reports_message() {
        let text = CString::new("field GF(6)\n").unwrap();
        let mut net: *mut SnNetwork = ptr::null_mut();
        let st = unsafe { secnet_network_parse(text.as_ptr(), &mut net) };
        assert_eq!(st, SnStatus::SnParseError);
        let mut buf = vec![0u8; 128];
        let n = unsafe { secnet_last_error(buf.as_mut_ptr() as *mut c_char, buf.len()) };
        assert!(n > 0);
        let msg = String::from_utf8_lossy(&buf[..n.min(buf.len() - 1)]).into_owned();
        assert!(msg.contains("not prime"), "{msg}");
    }

    #[test]
    fn null_arguments_rejected() {
        assert_eq!(
            unsafe { secnet_network_parse(ptr::null(), ptr::null_mut()) },
            SnStatus::SnNullArgument
        );
        assert_eq!(
            unsafe { secnet_rates(1, 0, 0, ptr::null_mut()) },
            SnStatus::SnNullArgument
        );
        unsafe { secnet_network_free(ptr::null_mut()) };
        unsafe { secnet_placement_free(ptr::null_mut()) };
    }

    #[test]
    fn bound_and_hash_check() {
        let mut b = 0.0f64;
        let st = unsafe { secnet_leakage_bound(1.0, 4, 24, 16, 1, 2, &mut b) };
        assert_eq!(st, SnStatus::SnOk);
        assert!((b - 2f64.powi(-4)).abs() < 1e-12);
        let mut worst = 1.0f64;
        let mut pass = false;
        let st = unsafe { secnet_universal2_check(6, 2, 2, 1 << 20, &mut worst, &mut pass) };
        assert_eq!(st, SnStatus::SnOk);
        assert!(pass);
        assert!(worst <= 0.25 + 1e-12);
    }
}
