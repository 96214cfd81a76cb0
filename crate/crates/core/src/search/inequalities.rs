//! Exact integer sweep of the numeric implications behind the existence
//! thresholds. Each lemma is a hypothesis on `(n, d, r, q)` and a conclusion;
//! a grid point violating an implication is recorded as a counterexample.

use serde::Serialize;

/// `(n - r) d (d-1)^r`, the very transverse threshold at level `r`.
pub fn vt_gate(n: u32, d: u32, r: u32) -> Option<u128> {
    let base = (d as u128).checked_sub(1)?.checked_pow(r)?;
    ((n - r) as u128).checked_mul(d as u128)?.checked_mul(base)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub n: u32,
    pub d: u32,
    pub r: u32,
    pub q: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaTally {
    pub name: &'static str,
    pub statement: &'static str,
    /// Grid points satisfying the hypothesis.
    pub checked: u64,
    pub counterexamples: Vec<GridPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub nmax: u32,
    pub dmax: u32,
    pub lemmas: Vec<LemmaTally>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.lemmas.iter().all(|l| l.counterexamples.is_empty())
    }

    pub fn failures(&self) -> u64 {
        self.lemmas.iter().map(|l| l.counterexamples.len() as u64).sum()
    }
}

struct Lemma {
    name: &'static str,
    statement: &'static str,
    /// Threshold on `q` when the hypothesis applies at `(n, d, r)`.
    gate: fn(u32, u32, u32) -> Option<u128>,
    /// `None` on arithmetic overflow, which counts as a failure.
    holds: fn(GridPoint) -> Option<bool>,
}

fn pow(q: u128, e: u32) -> Option<u128> {
    q.checked_pow(e)
}

fn dd(d: u32, e: u32) -> Option<u128> {
    (d as u128).checked_mul((d as u128 - 1).checked_pow(e)?)
}

fn geometric(q: u128, top: u32) -> Option<u128> {
    (0..=top).try_fold(0u128, |acc, i| acc.checked_add(pow(q, i)?))
}

const LEMMAS: &[Lemma] = &[
    Lemma {
        name: "bernoulli",
        statement: "d>=3, 1<=r<=n-2, q>=(n-r)d(d-1)^r => q^(n-r) > d(d-1)^r (q+1)^(n-r-1)",
        gate: |n, d, r| (d >= 3 && r >= 1 && r + 2 <= n).then(|| vt_gate(n, d, r)).flatten(),
        holds: |g| Some(pow(g.q, g.n - g.r)? > dd(g.d, g.r)?.checked_mul(pow(g.q + 1, g.n - g.r - 1)?)?),
    },
    Lemma {
        name: "inductive-hypothesis",
        statement: "d>=3, 1<=r<=n-1, q>=(n-r)d(d-1)^r => q >= (n-r+1)d(d-1)^(r-1)",
        gate: |n, d, r| (d >= 3 && r >= 1 && r < n).then(|| vt_gate(n, d, r)).flatten(),
        holds: |g| Some(g.q >= vt_gate(g.n, g.d, g.r - 1)?),
    },
    Lemma {
        name: "dual-term-low-r",
        statement: "d>=3, 1<=r<=n-3, q>=(n-r)d(d-1)^r => q^(n-r-1) > d(d-1)^(n-1)",
        gate: |n, d, r| (d >= 3 && r >= 1 && r + 3 <= n).then(|| vt_gate(n, d, r)).flatten(),
        holds: |g| Some(pow(g.q, g.n - g.r - 1)? > dd(g.d, g.n - 1)?),
    },
    Lemma {
        name: "dual-term-r-eq-n-2",
        statement: "d>=3, r=n-2>=1, q>=2d(d-1)^(n-2) => q^2+q+1 > d(d-1)^(n-2) (q+d)",
        gate: |n, d, r| (d >= 3 && r >= 1 && r + 2 == n).then(|| vt_gate(n, d, r)).flatten(),
        holds: |g| Some(geometric(g.q, 2)? > dd(g.d, g.n - 2)?.checked_mul(g.q + g.d as u128)?),
    },
    Lemma {
        name: "hyperplane-step",
        statement: "d>=3, r=n-1>=1, q>=d(d-1)^(n-1) => q+1 > d(d-1)^(n-1)",
        gate: |n, d, r| (d >= 3 && r >= 1 && r + 1 == n).then(|| vt_gate(n, d, r)).flatten(),
        holds: |g| Some(g.q + 1 > dd(g.d, g.n - 1)?),
    },
    Lemma {
        name: "good-candidate-exists",
        statement: "d>=3, 1<=r<=n-2, q>=(n-r)d(d-1)^r => sum_{i=0}^{n-r} q^i > d(d-1)^r (q+1)^(n-r-1) + d(d-1)^(n-1)",
        gate: |n, d, r| (d >= 3 && r >= 1 && r + 2 <= n).then(|| vt_gate(n, d, r)).flatten(),
        holds: |g| {
            let bad = dd(g.d, g.r)?.checked_mul(pow(g.q + 1, g.n - g.r - 1)?)?.checked_add(dd(g.d, g.n - 1)?)?;
            Some(geometric(g.q, g.n - g.r)? > bad)
        },
    },
    Lemma {
        name: "initial-point",
        statement: "d>=3, r=0, q>=nd => q+1 > d",
        gate: |n, d, r| (d >= 3 && r == 0).then(|| vt_gate(n, d, 0)).flatten(),
        holds: |g| Some(g.q + 1 > g.d as u128),
    },
    Lemma {
        name: "reduced-hyperplane-count",
        statement: "d>=2, n=3 and q>=d(d-1)+1, or n>=4 and q>=d => q^(n-3)(q-1) >= d(d-1)",
        gate: |n, d, r| {
            let d = d as u128;
            match (r + 1 == n, n) {
                (true, 3) if d >= 2 => Some(d * (d - 1) + 1),
                (true, n) if n >= 4 && d >= 2 => Some(d),
                _ => None,
            }
        },
        holds: |g| Some(pow(g.q, g.n - 3)?.checked_mul(g.q - 1)? >= dd(g.d, 1)?),
    },
    Lemma {
        name: "phi-maximum",
        statement: "d>=1 => (d-t)(d-1) + t(t-1)/2 <= d(d-1) for every 0<=t<=d",
        gate: |_, _, r| (r == 0).then_some(1),
        holds: |g| {
            let d = g.d as u128;
            Some((0..=d).all(|t| 2 * (d - t) * (d - 1) + t * t.saturating_sub(1) <= 2 * d * (d - 1)))
        },
    },
    Lemma {
        name: "reduced-line-dominates",
        statement: "d>=2, q>=ceil(3d(d-1)/2) => q>=d(d-1)+1 and q>=d",
        gate: |_, d, _| (d >= 2).then(|| (3 * d as u128 * (d as u128 - 1)).div_ceil(2)),
        holds: |g| {
            let d = g.d as u128;
            Some(g.q >= d * (d - 1) + 1 && g.q >= d)
        },
    },
];

/// Checks every lemma at `q ∈ {gate, gate+1, gate+7}` over
/// `1 <= n <= nmax`, `1 <= d <= dmax`, `0 <= r <= n-1`.
pub fn check_inequality_lemmas(nmax: u32, dmax: u32) -> InequalityReport {
    let lemmas = LEMMAS
        .iter()
        .map(|lemma| {
            let mut tally = LemmaTally { name: lemma.name, statement: lemma.statement, checked: 0, counterexamples: vec![] };
            for n in 1..=nmax {
                for d in 1..=dmax {
                    for r in 0..n {
                        let Some(gate) = (lemma.gate)(n, d, r) else { continue };
                        for q in [gate, gate + 1, gate + 7] {
                            let g = GridPoint { n, d, r, q };
                            tally.checked += 1;
                            if (lemma.holds)(g) != Some(true) {
                                tally.counterexamples.push(g);
                            }
                        }
                    }
                }
            }
            tally
        })
        .collect();
    InequalityReport { nmax, dmax, lemmas }
}
