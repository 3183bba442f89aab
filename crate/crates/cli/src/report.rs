//! Run reports: a fixed-layout text block summarizing one invocation.
//!
//! Reports are rendered with 17-significant-digit floats and a stable line
//! order, then sealed with a digest of their own body, so two runs on the
//! same input can be compared byte for byte.

use sha2::{Digest, Sha256};

/// Exact text round trip for any finite f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_triple(v: &[f64; 3]) -> String {
    format!("{} {} {}", fmt_float(v[0]), fmt_float(v[1]), fmt_float(v[2]))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// One invariant check: passes when `measured <= tolerance`.
#[derive(Debug, Clone, Copy)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn new(name: &'static str, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            measured,
            tolerance,
        }
    }

    pub fn pass(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    command: String,
    input_digest: String,
    checks: Vec<CheckResult>,
}

impl RunReport {
    pub fn new(command: String, input: &[u8], checks: Vec<CheckResult>) -> Self {
        RunReport {
            command,
            input_digest: sha256_hex(input),
            checks,
        }
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass()).count()
    }

    pub fn total(&self) -> usize {
        self.checks.len()
    }

    /// Full report text. The trailing line digests everything above it.
    pub fn render(&self) -> String {
        let mut body = String::new();
        body.push_str("# kpolar run report\n");
        body.push_str(&format!("command {}\n", self.command));
        body.push_str(&format!("input sha256 {}\n", self.input_digest));
        body.push_str(&format!("checks {}\n", self.checks.len()));
        for check in &self.checks {
            body.push_str(&format!(
                "{} measured {} tolerance {:e} {}\n",
                check.name,
                fmt_float(check.measured),
                check.tolerance,
                if check.pass() { "PASS" } else { "FAIL" }
            ));
        }
        body.push_str(&format!(
            "result {}\n",
            if self.failed() == 0 { "PASS" } else { "FAIL" }
        ));
        let digest = sha256_hex(body.as_bytes());
        body.push_str(&format!("report sha256 {digest}\n"));
        body
    }
}
