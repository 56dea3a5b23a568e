//! Device-independent bipartite boxes: conditional tables `P(A, B | a, b)`
//! over binary inputs and outputs.
//!
//! Tables are generic over [`Probability`] so the same constructors serve the
//! Monte Carlo path (`f64`) and the exact enumeration oracles ([`Rational`]).
//!
//! [`Rational`]: crate::prob::Rational

use rand::Rng;

use crate::bits::spin;
use crate::error::{domain, Error, Result};
use crate::prob::{half, Probability};

/// Measurement choices of Alice (`a`) and Bob (`b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxInput {
    pub a: bool,
    pub b: bool,
}

impl BoxInput {
    pub fn new(a: bool, b: bool) -> Self {
        Self { a, b }
    }

    pub fn all() -> [BoxInput; 4] {
        [
            Self::new(false, false),
            Self::new(false, true),
            Self::new(true, false),
            Self::new(true, true),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxOutcome {
    pub alice: bool,
    pub bob: bool,
}

impl BoxOutcome {
    pub fn alice_spin(&self) -> i8 {
        spin(self.alice)
    }

    pub fn bob_spin(&self) -> i8 {
        spin(self.bob)
    }

    /// `Â·B̂`, equal to `(-1)^(A ⊕ B)`.
    pub fn product(&self) -> i8 {
        spin(self.alice ^ self.bob)
    }
}

/// Table indexed `[a][b][A][B]`.
pub type BoxTable<P> = [[[[P; 2]; 2]; 2]; 2];

/// A bipartite box pair with its Bell–CHSH correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct NsBox<P> {
    table: BoxTable<P>,
    chsh: P,
}

impl<P: Probability> NsBox<P> {
    /// Builds a box from an explicit table. Entries must lie in `[0, 1]` and
    /// each `(a, b)` block must sum to one. No-signaling is not required here;
    /// see [`no_signaling_check`].
    pub fn from_table(table: BoxTable<P>) -> Result<Self> {
        for a in 0..2 {
            for b in 0..2 {
                let mut sum = P::zero();
                for oa in 0..2 {
                    for ob in 0..2 {
                        let p = &table[a][b][oa][ob];
                        if *p < P::zero() || *p > P::one() {
                            return Err(domain(format!("entry P({oa},{ob}|{a},{b}) = {p:?}")));
                        }
                        sum = sum + p.clone();
                    }
                }
                if !sum.near(&P::one()) {
                    return Err(domain(format!("block ({a},{b}) sums to {sum:?}")));
                }
            }
        }
        let chsh = chsh_of(&table);
        Ok(Self { table, chsh })
    }

    pub fn table(&self) -> &BoxTable<P> {
        &self.table
    }

    pub fn prob(&self, input: BoxInput, outcome: BoxOutcome) -> &P {
        &self.table[input.a as usize][input.b as usize][outcome.alice as usize][outcome.bob as usize]
    }

    pub fn chsh(&self) -> &P {
        &self.chsh
    }

    pub fn to_f64(&self) -> NsBox<f64> {
        let mut table = [[[[0.0; 2]; 2]; 2]; 2];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, block) in row.iter_mut().enumerate() {
                for (oa, pair) in block.iter_mut().enumerate() {
                    for (ob, p) in pair.iter_mut().enumerate() {
                        *p = self.table[a][b][oa][ob].to_f64();
                    }
                }
            }
        }
        NsBox { table, chsh: self.chsh.to_f64() }
    }

    /// `P(A ⊕ B = a·b | a, b)`.
    pub fn win_probability(&self, input: BoxInput) -> P {
        let target = input.a & input.b;
        let block = &self.table[input.a as usize][input.b as usize];
        let mut p = P::zero();
        for oa in [false, true] {
            for ob in [false, true] {
                if oa ^ ob == target {
                    p = p + block[oa as usize][ob as usize].clone();
                }
            }
        }
        p
    }

    /// Alice's marginal `P(A = alice | a, b)`.
    pub fn alice_marginal(&self, a: bool, b: bool, alice: bool) -> P {
        let row = &self.table[a as usize][b as usize][alice as usize];
        row[0].clone() + row[1].clone()
    }

    /// Bob's marginal `P(B = bob | a, b)`.
    pub fn bob_marginal(&self, a: bool, b: bool, bob: bool) -> P {
        let block = &self.table[a as usize][b as usize];
        block[0][bob as usize].clone() + block[1][bob as usize].clone()
    }
}

fn chsh_of<P: Probability>(table: &BoxTable<P>) -> P {
    let mut total = P::zero();
    for input in BoxInput::all() {
        let block = &table[input.a as usize][input.b as usize];
        let mut e = P::zero();
        for oa in [false, true] {
            for ob in [false, true] {
                let p = block[oa as usize][ob as usize].clone();
                e = if oa ^ ob { e - p } else { e + p };
            }
        }
        total = if input.a && input.b { total - e } else { total + e };
    }
    total * P::from_ratio(1, 4)
}

/// The isotropic box with Bell–CHSH correlation `c`: uniform marginals, mass
/// `(1+c)/4` on each outcome with `A ⊕ B = a·b` and `(1−c)/4` on each other.
pub fn make_isotropic_box<P: Probability>(c: P) -> Result<NsBox<P>> {
    if c.abs() > P::one() {
        return Err(domain(format!("|c| > 1 (c = {c:?})")));
    }
    let quarter = P::from_ratio(1, 4);
    let win = (P::one() + c.clone()) * quarter.clone();
    let lose = (P::one() - c.clone()) * quarter;
    let mut table: BoxTable<P> = std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| P::zero())))
    });
    for input in BoxInput::all() {
        let target = input.a & input.b;
        for oa in [false, true] {
            for ob in [false, true] {
                table[input.a as usize][input.b as usize][oa as usize][ob as usize] =
                    if oa ^ ob == target { win.clone() } else { lose.clone() };
            }
        }
    }
    Ok(NsBox { table, chsh: c })
}

/// A deterministic response function of one party: output as a function of input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalStrategy {
    Constant(bool),
    Copy,
    Flip,
}

impl LocalStrategy {
    pub const ALL: [LocalStrategy; 4] = [
        LocalStrategy::Constant(false),
        LocalStrategy::Constant(true),
        LocalStrategy::Copy,
        LocalStrategy::Flip,
    ];

    pub fn respond(self, input: bool) -> bool {
        match self {
            LocalStrategy::Constant(v) => v,
            LocalStrategy::Copy => input,
            LocalStrategy::Flip => !input,
        }
    }
}

/// The box realized by two deterministic local strategies.
pub fn local_box<P: Probability>(alice: LocalStrategy, bob: LocalStrategy) -> NsBox<P> {
    let mut table: BoxTable<P> = std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| P::zero())))
    });
    for input in BoxInput::all() {
        let oa = alice.respond(input.a) as usize;
        let ob = bob.respond(input.b) as usize;
        table[input.a as usize][input.b as usize][oa][ob] = P::one();
    }
    NsBox::from_table(table).expect("deterministic table is normalized")
}

/// Draws one joint outcome for `input` by inverse CDF over the four outcomes
/// in the order `(0,0), (0,1), (1,0), (1,1)`.
pub fn sample_box<P: Probability, R: Rng + ?Sized>(
    ns_box: &NsBox<P>,
    input: BoxInput,
    rng: &mut R,
) -> BoxOutcome {
    let block = &ns_box.table[input.a as usize][input.b as usize];
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, (oa, ob)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        acc += block[oa][ob].to_f64();
        if u < acc || k == 3 {
            return BoxOutcome { alice: oa == 1, bob: ob == 1 };
        }
    }
    unreachable!()
}

/// `(E[ÂB̂|0,0] + E[ÂB̂|0,1] + E[ÂB̂|1,0] − E[ÂB̂|1,1]) / 4`, evaluated from the table.
pub fn chsh_correlation<P: Probability>(ns_box: &NsBox<P>) -> P {
    chsh_of(&ns_box.table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoSignalingReport {
    pub pass: bool,
    pub max_deviation: f64,
}

/// Compares each party's marginal across the other party's input.
pub fn no_signaling_check<P: Probability>(ns_box: &NsBox<P>, tol: f64) -> Result<NoSignalingReport> {
    if !(tol >= 0.0) {
        return Err(domain(format!("tolerance must be non-negative, got {tol}")));
    }
    let mut max_dev = P::zero();
    for own in [false, true] {
        for out in [false, true] {
            let alice = (ns_box.alice_marginal(own, false, out) - ns_box.alice_marginal(own, true, out)).abs();
            let bob = (ns_box.bob_marginal(false, own, out) - ns_box.bob_marginal(true, own, out)).abs();
            for d in [alice, bob] {
                if d > max_dev {
                    max_dev = d;
                }
            }
        }
    }
    let max_deviation = max_dev.to_f64();
    Ok(NoSignalingReport { pass: max_deviation <= tol, max_deviation })
}

/// Sequential sampler for one box pair, querying one side at a time.
///
/// The first side to query draws from its marginal; the second draws from its
/// conditional given the first side's input and output. For a no-signaling
/// table this reproduces `P(A, B | a, b)` whichever side goes first.
#[derive(Debug, Clone)]
pub struct SequentialSampler {
    /// `P(A = 0 | a)`.
    alice_zero: [f64; 2],
    /// `P(B = 0 | b)`.
    bob_zero: [f64; 2],
    /// `P(B = 0 | A, a, b)` indexed `[a][b][A]`.
    bob_given_alice: [[[f64; 2]; 2]; 2],
    /// `P(A = 0 | B, a, b)` indexed `[a][b][B]`.
    alice_given_bob: [[[f64; 2]; 2]; 2],
    uniform_alice: bool,
}

impl SequentialSampler {
    pub fn new<P: Probability>(ns_box: &NsBox<P>) -> Result<Self> {
        let report = no_signaling_check(ns_box, 1e-12)?;
        if !report.pass {
            return Err(Error::Domain(format!(
                "sequential sampling needs a no-signaling box (deviation {})",
                report.max_deviation
            )));
        }
        let t = ns_box.to_f64();
        let alice_zero = [t.alice_marginal(false, false, false), t.alice_marginal(true, false, false)];
        let bob_zero = [t.bob_marginal(false, false, false), t.bob_marginal(false, true, false)];
        let mut bob_given_alice = [[[0.5; 2]; 2]; 2];
        let mut alice_given_bob = [[[0.5; 2]; 2]; 2];
        for input in BoxInput::all() {
            let (a, b) = (input.a as usize, input.b as usize);
            let block = &t.table[a][b];
            for o in 0..2 {
                let pa = block[o][0] + block[o][1];
                if pa > 0.0 {
                    bob_given_alice[a][b][o] = block[o][0] / pa;
                }
                let pb = block[0][o] + block[1][o];
                if pb > 0.0 {
                    alice_given_bob[a][b][o] = block[0][o] / pb;
                }
            }
        }
        let h = half::<P>();
        let uniform_alice = [false, true]
            .iter()
            .all(|&a| ns_box.alice_marginal(a, false, false).near(&h));
        Ok(Self { alice_zero, bob_zero, bob_given_alice, alice_given_bob, uniform_alice })
    }

    /// Whether Alice's output is a fair coin independent of her input.
    pub fn has_uniform_alice_marginal(&self) -> bool {
        self.uniform_alice
    }

    #[inline]
    pub fn alice_first<R: Rng + ?Sized>(&self, a: bool, rng: &mut R) -> bool {
        rng.gen::<f64>() >= self.alice_zero[a as usize]
    }

    #[inline]
    pub fn bob_first<R: Rng + ?Sized>(&self, b: bool, rng: &mut R) -> bool {
        rng.gen::<f64>() >= self.bob_zero[b as usize]
    }

    #[inline]
    pub fn bob_after<R: Rng + ?Sized>(&self, a: bool, alice: bool, b: bool, rng: &mut R) -> bool {
        rng.gen::<f64>() >= self.bob_given_alice[a as usize][b as usize][alice as usize]
    }

    #[inline]
    pub fn alice_after<R: Rng + ?Sized>(&self, b: bool, bob: bool, a: bool, rng: &mut R) -> bool {
        rng.gen::<f64>() >= self.alice_given_bob[a as usize][b as usize][bob as usize]
    }
}
