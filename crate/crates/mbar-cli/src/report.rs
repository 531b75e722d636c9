//! Report rendering. Every format is deterministic: JSON objects print with
//! sorted keys, CSV column orders are fixed, and nothing timestamps itself,
//! so identical runs produce identical bytes regardless of thread count.
//!
//! JSON schema, shared by all subcommands:
//!
//! ```json
//! {
//!   "command": "...",
//!   "config": { ... },
//!   "resolved_convention": {"k_start":0,"j_start":0,"verify_margin":5} | null,
//!   "results": [ ... ],
//!   "findings": [ ... ]
//! }
//! ```
//!
//! Big integers and rationals are rendered as decimal strings (`"p"` or
//! `"p/q"`) since they routinely exceed every native width.

use mbar_core::formulas::StirlingConvention;
use mbar_core::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

/// `"p"` when integral, `"p/q"` otherwise.
pub fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A short decimal approximation for humans; the exact value is what reports
/// carry and what every comparison used.
pub fn rational_approx(r: &BigRational) -> String {
    use mbar_core::BigInt;
    use num_traits::Pow;
    if r.is_zero() {
        return "0".to_string();
    }
    // bring the magnitude near 1 by stripping the power of ten implied by the
    // digit counts, so the residue converts to f64 safely
    let num_digits = r.numer().abs().to_string().len() as i64;
    let den_digits = r.denom().to_string().len() as i64;
    let e = num_digits - den_digits;
    let scaled = if e >= 0 {
        BigRational::new(
            r.numer().clone(),
            r.denom() * BigInt::from(10).pow(e as u32),
        )
    } else {
        BigRational::new(
            r.numer() * BigInt::from(10).pow((-e) as u32),
            r.denom().clone(),
        )
    };
    match scaled.to_f64() {
        Some(v) if v.is_finite() => format!("{v:.4}e{e}"),
        _ => "~".to_string(),
    }
}

pub fn convention_json(conv: &StirlingConvention) -> Value {
    json!({
        "k_start": conv.k_start(),
        "j_start": conv.j_start(),
        "verify_margin": conv.verify_margin(),
    })
}

pub fn assemble(
    command: &str,
    config: Value,
    resolved_convention: Option<&StirlingConvention>,
    results: Value,
    findings: Vec<Value>,
) -> Value {
    json!({
        "command": command,
        "config": config,
        "resolved_convention": resolved_convention.map(convention_json),
        "results": results,
        "findings": findings,
    })
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("valid json"));
}
