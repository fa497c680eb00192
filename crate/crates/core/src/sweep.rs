//! Coupling analysis over a range of odd `p`, and the text reports.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::coupling::{analyze, scaling_equivalence, CouplingAnalysis, PRESENCE_TAU};
use crate::error::{Error, Result};
use crate::spectral::{pair_spectrum, quasi_harmonic, QuasiHarmonicSystem};

/// Upper limit on `p` accepted by [`sweep`].
pub const MAX_SWEEP_P: usize = 199;

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub p: usize,
    pub prime: bool,
    /// `(acoustic, optical)` eigenvalues per pair.
    pub pairs: Vec<(f64, f64)>,
    pub analysis: Option<CouplingAnalysis>,
    /// `(reference name, residual)` for every reference table of this size.
    pub scaling_residuals: Vec<(String, f64)>,
    /// Failed assertions (empty when the row passes).
    pub failures: Vec<String>,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn interaction(&self) -> Option<bool> {
        self.analysis.as_ref().map(|a| a.squares.interaction_verdict())
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub a: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(SweepRow::passed)
    }

    pub fn row(&self, p: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.p == p)
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn sweep_one(p: usize, a: f64, references: &[(String, QuasiHarmonicSystem)]) -> SweepRow {
    let prime = is_prime(p);
    let mut failures = Vec::new();
    let mut scaling_residuals = Vec::new();
    let analysis = match quasi_harmonic(p, a, 1.0).and_then(|(_, _, qh)| Ok((analyze(&qh, PRESENCE_TAU)?, qh))) {
        Ok((an, qh)) => {
            if !an.jan_agrees() {
                failures.push("pair permutation disagrees with min(2i, p-2i)".into());
            }
            if prime && !an.squares.interaction_verdict() {
                failures.push("no acoustic/optical interaction through forcing squares".into());
            }
            for (name, r) in references.iter().filter(|(_, r)| r.p == p && r.dim() == qh.dim()) {
                match scaling_equivalence(&qh, r, PRESENCE_TAU) {
                    Ok(fit) => scaling_residuals.push((name.clone(), fit.residual)),
                    Err(e) => failures.push(format!("scaling fit against {name}: {e}")),
                }
            }
            Some(an)
        }
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };
    SweepRow { p, prime, pairs: pair_spectrum(a, p).chunks(2).map(|c| (c[0], c[1])).collect(), analysis, scaling_residuals, failures }
}

/// Analyses every odd `p` in `3..=p_max` (in parallel; rows in ascending `p`).
pub fn sweep(p_max: usize, a: f64, references: &[(String, QuasiHarmonicSystem)]) -> Result<SweepReport> {
    if p_max < 3 || p_max > MAX_SWEEP_P {
        return Err(Error::InvalidParameter(format!("p_max must lie in 3..={MAX_SWEEP_P}, got {p_max}")));
    }
    let ps: Vec<usize> = (3..=p_max).step_by(2).collect();
    let rows = ps.par_iter().map(|&p| sweep_one(p, a, references)).collect();
    Ok(SweepReport { a, rows })
}

fn fmt_modes(modes: &[usize]) -> String {
    let items: Vec<String> = modes.iter().map(|m| (m + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Human-readable analysis of one system (1-based numbering throughout).
pub fn format_analysis(sys: &QuasiHarmonicSystem, an: &CouplingAnalysis) -> String {
    let n = sys.dim();
    let mut s = String::new();
    let _ = writeln!(s, "p = {}, a = {}, modes = {n}, nonzero couplings = {}", sys.p, sys.a, sys.coupling.nnz());
    let _ = writeln!(s, "eigenvalues:");
    for (m, (l, lab)) in sys.lambdas.iter().zip(&sys.labels).enumerate() {
        let _ = writeln!(s, "  x{:<3} {lab:<12} {l:.9}", m + 1);
    }
    let _ = writeln!(s, "forcing squares:");
    for (pair, ev) in an.squares.evidence.iter().enumerate() {
        let items: Vec<String> = ev
            .iter()
            .map(|o| format!("x{}^2 in eq {} ({:+.4e})", o.mode + 1, o.equation + 1, o.coefficient))
            .collect();
        let _ = writeln!(s, "  pair {} -> pair {}: {}", pair + 1, an.squares.rho.apply(pair) + 1, items.join(", "));
    }
    let _ = writeln!(s, "rho: {}", an.squares.rho);
    let _ = writeln!(s, "rho cycles: {}", an.cycles);
    let exc = an.squares.excitation_map();
    let _ = writeln!(s, "mode excitation cycles: {}", exc.cycles());
    let jan: Vec<String> = an.jan.iter().map(|r| format!("{}:{}/{}", r.pair, r.rho, r.formula)).collect();
    let _ = writeln!(s, "min(2i, p-2i) check [{}]: {}", if an.jan_agrees() { "agrees" } else { "DISAGREES" }, jan.join(" "));
    let _ = writeln!(s, "acoustic/optical interaction: {}", if an.squares.interaction_verdict() { "yes" } else { "no" });
    let _ = writeln!(s, "candidate V(Y) (unions of rho-cycles): {}", an.candidates.len());
    let inv = an.invariant_manifolds();
    if inv.is_empty() {
        let _ = writeln!(s, "invariant V(Y): none");
    }
    for (k, c) in inv.iter().enumerate() {
        let kept = c.kept(n);
        let _ = writeln!(s, "invariant V(Y) #{}: {} surviving modes {}, frozen {}", k + 1, kept.len(), fmt_modes(&kept), fmt_modes(&c.frozen));
    }
    for &(o, i) in &an.containments {
        let _ = writeln!(s, "containment: #{} contains #{}", o + 1, i + 1);
    }
    s
}

pub fn format_sweep(report: &SweepReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# coupling sweep, a = {}", report.a);
    let _ = writeln!(s, "# p  prime  rho-cycles  jan  interaction  invariant-modes  containments  status");
    for r in &report.rows {
        let (cycles, jan, inter, inv, cont) = match &r.analysis {
            Some(an) => (
                format!("{:?}", an.cycles.lengths()),
                if an.jan_agrees() { "ok" } else { "FAIL" }.to_string(),
                if an.squares.interaction_verdict() { "yes" } else { "no" }.to_string(),
                format!("{:?}", an.invariant_mode_counts(r.p - 1)),
                an.containments.len().to_string(),
            ),
            None => ("-".into(), "-".into(), "-".into(), "-".into(), "-".into()),
        };
        let status = if r.passed() { "pass".to_string() } else { format!("FAIL: {}", r.failures.join("; ")) };
        let _ = writeln!(s, "{:>3}  {:<5}  {cycles:<10}  {jan:<4} {inter:<11}  {inv:<15}  {cont:<12}  {status}", r.p, r.prime);
    }
    let _ = writeln!(s);
    for r in &report.rows {
        let _ = writeln!(s, "== p = {} ==", r.p);
        let _ = writeln!(s, "pair eigenvalues (acoustic, optical, sum - 2 - 2a):");
        for (j, (ac, op)) in r.pairs.iter().enumerate() {
            let _ = writeln!(s, "  j={:<3} {ac:.12e}  {op:.12e}  {:+.1e}", j + 1, ac + op - 2.0 - 2.0 * report.a);
        }
        if let Some(an) = &r.analysis {
            let _ = writeln!(s, "rho: {}", an.squares.rho);
            let _ = writeln!(s, "rho cycles: {}", an.cycles);
            let n = r.p - 1;
            for (k, c) in an.invariant_manifolds().iter().enumerate() {
                let kept = c.kept(n);
                let _ = writeln!(s, "invariant V(Y) #{}: {} modes {}", k + 1, kept.len(), fmt_modes(&kept));
            }
            for &(o, i) in &an.containments {
                let _ = writeln!(s, "containment: #{} contains #{}", o + 1, i + 1);
            }
        }
        for (name, res) in &r.scaling_residuals {
            let _ = writeln!(s, "scaling fit vs {name}: residual {res:.3e}");
        }
        for f in &r.failures {
            let _ = writeln!(s, "FAILURE: {f}");
        }
    }
    s
}
