//! Forcing squares and the pair permutation.
//!
//! For every pair `i` the squares of its two modes appear, above the
//! presence threshold, in the equations of exactly one pair `ρ(i)` (both
//! equations of that pair) and nowhere else. `ρ` is conjectured to be
//! `ρ(i) = min(2i, p - 2i)`.

use crate::coupling::perm::Permutation;
use crate::error::{Error, Result};
use crate::spectral::{ModeKind, QuasiHarmonicSystem};

/// Default presence threshold relative to `max |C|`. Unit M-norm modes make
/// the acoustic squares small at large `p`: physical entries reach ~1e-9 by
/// p = 37, while round-off stays below ~5e-11 up to p = 55.
pub const PRESENCE_TAU: f64 = 1e-10;

/// One occurrence of a square `x_mode²` in the equation of mode `equation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareOccurrence {
    pub mode: usize,
    pub equation: usize,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareMap {
    /// Pair permutation (0-based pair indices).
    pub rho: Permutation,
    /// For each pair (0-based), where its two squares occur.
    pub evidence: Vec<Vec<SquareOccurrence>>,
    /// Mode indices `(acoustic, optical)` of each pair (0-based).
    pub pair_modes: Vec<(usize, usize)>,
}

/// Locates the (acoustic, optical) mode of every pair from the labels.
pub fn pair_modes(sys: &QuasiHarmonicSystem) -> Result<Vec<(usize, usize)>> {
    let n = sys.dim();
    if n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("odd number of modes ({n})")));
    }
    let h = n / 2;
    let mut slots = vec![(usize::MAX, usize::MAX); h];
    for (m, l) in sys.labels.iter().enumerate() {
        if l.pair == 0 || l.pair > h {
            return Err(Error::InvalidParameter(format!("mode label {l} out of range for {n} modes")));
        }
        let slot = &mut slots[l.pair - 1];
        let target = match l.kind {
            ModeKind::Acoustic => &mut slot.0,
            ModeKind::Optical => &mut slot.1,
        };
        if *target != usize::MAX {
            return Err(Error::InvalidParameter(format!("duplicate mode label {l}")));
        }
        *target = m;
    }
    Ok(slots)
}

pub fn square_map(sys: &QuasiHarmonicSystem, tau_rel: f64) -> Result<SquareMap> {
    let pairs = pair_modes(sys)?;
    let n = sys.dim();
    let mut pair_of_mode = vec![0; n];
    for (j, &(ac, op)) in pairs.iter().enumerate() {
        pair_of_mode[ac] = j;
        pair_of_mode[op] = j;
    }
    let tau = tau_rel * sys.coupling.max_abs();

    let mut images = Vec::with_capacity(pairs.len());
    let mut evidence = Vec::with_capacity(pairs.len());
    for (i, &(ac, op)) in pairs.iter().enumerate() {
        let mut occ = Vec::new();
        for mode in [ac, op] {
            for equation in 0..n {
                let c = sys.coupling.get(equation, mode, mode);
                if c.abs() > tau {
                    occ.push(SquareOccurrence { mode, equation, coefficient: c });
                }
            }
        }
        let violation = |detail: String| Error::PatternViolation { pair: i + 1, detail };
        let Some(first) = occ.first() else {
            return Err(violation("squares occur in no equation".into()));
        };
        let target = pair_of_mode[first.equation];
        let (tac, top) = pairs[target];
        let mut expected = vec![(ac, tac), (ac, top), (op, tac), (op, top)];
        let mut found: Vec<(usize, usize)> = occ.iter().map(|o| (o.mode, o.equation)).collect();
        expected.sort_unstable();
        found.sort_unstable();
        if found != expected {
            let listed: Vec<String> = occ
                .iter()
                .map(|o| format!("x{}^2 in eq {} ({:.3e})", o.mode + 1, o.equation + 1, o.coefficient))
                .collect();
            return Err(violation(listed.join(", ")));
        }
        images.push(target);
        evidence.push(occ);
    }
    let rho = Permutation::new(images).map_err(|e| Error::PatternViolation { pair: 0, detail: e.to_string() })?;
    Ok(SquareMap { rho, evidence, pair_modes: pairs })
}

impl SquareMap {
    /// Cross-group forcing: mode `m` maps to the mode of the other group in
    /// pair `ρ(pair(m))`, i.e. the mode whose equation `x_m²` forces.
    pub fn excitation_map(&self) -> Permutation {
        let n = 2 * self.pair_modes.len();
        let mut images = vec![0; n];
        for (i, &(ac, op)) in self.pair_modes.iter().enumerate() {
            let (tac, top) = self.pair_modes[self.rho.apply(i)];
            images[ac] = top;
            images[op] = tac;
        }
        Permutation::new(images).expect("pair modes form a permutation")
    }

    /// Whether some optical square forces an acoustic equation and some
    /// acoustic square forces an optical equation.
    pub fn interaction_verdict(&self) -> bool {
        let is_acoustic = |m: usize| self.pair_modes.iter().any(|&(ac, _)| ac == m);
        let occ = self.evidence.iter().flatten();
        let opt_to_ac = occ.clone().any(|o| !is_acoustic(o.mode) && is_acoustic(o.equation));
        let ac_to_opt = occ.clone().any(|o| is_acoustic(o.mode) && !is_acoustic(o.equation));
        opt_to_ac && ac_to_opt
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JanRow {
    /// 1-based pair index.
    pub pair: usize,
    pub rho: usize,
    pub formula: usize,
}

impl JanRow {
    pub fn agrees(&self) -> bool {
        self.rho == self.formula
    }
}

/// `min(2i, p - 2i)` for 1-based `i`.
pub fn jan_formula(p: usize, i: usize) -> usize {
    (2 * i).min(p.saturating_sub(2 * i))
}

/// Compares a pair permutation with `min(2i, p - 2i)`, index by index.
pub fn jan_check(p: usize, rho: &Permutation) -> Vec<JanRow> {
    (0..rho.len())
        .map(|i| JanRow { pair: i + 1, rho: rho.apply(i) + 1, formula: jan_formula(p, i + 1) })
        .collect()
}

/// The permutation `min(2i, p - 2i)` itself.
pub fn jan_permutation(p: usize) -> Result<Permutation> {
    let h = (p - 1) / 2;
    Permutation::from_one_based(&(1..=h).map(|i| jan_formula(p, i)).collect::<Vec<_>>())
}
