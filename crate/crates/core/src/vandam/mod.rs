//! The van Dam oblivious-transfer protocol over a tree of `2^n − 1` box pairs.
//!
//! Indexing: levels run `1..=n` from Alice's inputs up to the single box that
//! emits the transmitted bit; level `k` holds boxes `j = 1..=2^(n−k)`. Box
//! `(1, j)` consumes `x_{2j−2}, x_{2j−1}` and box `(k, j)` consumes outputs
//! `2j−1, 2j` of level `k−1`. Every box applies
//! `f(q1, q2) = q1 ⊕ A_{q1 ⊕ q2}`. Bob starts at box `(n, 1)`, feeds it address
//! bit `i_{n−1}`, and descends with `j_{k−1} = 2 j_k − 1 + i_{k−1}`.

pub mod exact;

use rand::Rng;
use serde::Serialize;

use crate::channel::{BernoulliSource, ChannelChain, SymmetricBinaryChannel};
use crate::error::{domain, Error, Result};
use crate::nsbox::{make_isotropic_box, NsBox, SequentialSampler};
use crate::prob::Probability;

pub use exact::{enumerate_exact, enumerate_exact_with_box, AddressLaw, ExactLaw};

/// Largest level count accepted by [`VanDamConfig`].
pub const MAX_LEVELS: u32 = 60;
/// Largest level count for which a full box tree is materialized.
pub const MAX_FULL_TREE_LEVELS: u32 = 24;
/// [`Engine::Auto`] materializes the full tree up to this many levels.
pub const AUTO_FULL_TREE_LEVELS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanDamConfig {
    n: u32,
    c: f64,
    c_prime: f64,
}

impl VanDamConfig {
    pub fn new(n: u32, c: f64, c_prime: f64) -> Result<Self> {
        if n == 0 || n > MAX_LEVELS {
            return Err(domain(format!("level count must be in 1..={MAX_LEVELS}, got {n}")));
        }
        if !(c.abs() <= 1.0) {
            return Err(domain(format!("|c| must be at most 1, got {c}")));
        }
        if !(c_prime.abs() <= 1.0) {
            return Err(domain(format!("|c'| must be at most 1, got {c_prime}")));
        }
        Ok(Self { n, c, c_prime })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn c_prime(&self) -> f64 {
        self.c_prime
    }

    /// Number of Alice's bits, `2^n`.
    pub fn width(&self) -> usize {
        1usize << self.n
    }

    /// Correlation of the end-to-end channel, `(c c′)^n`.
    pub fn effective_correlation(&self) -> f64 {
        (self.c * self.c_prime).powi(self.n as i32)
    }
}

/// Which of Alice's bits Bob asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Address {
    index: u64,
    n: u32,
}

impl Address {
    pub fn new(index: u64, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_LEVELS {
            return Err(domain(format!("level count must be in 1..={MAX_LEVELS}, got {n}")));
        }
        if index >> n != 0 {
            return Err(domain(format!("address {index} out of range for n = {n}")));
        }
        Ok(Self { index, n })
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn levels(&self) -> u32 {
        self.n
    }

    /// Bit `i_k` of the binary expansion.
    pub fn bit(&self, k: u32) -> bool {
        (self.index >> k) & 1 == 1
    }

    pub fn all(n: u32) -> Result<impl Iterator<Item = Address>> {
        Address::new(0, n)?;
        Ok((0..1u64 << n).map(move |index| Address { index, n }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Fresh,
    Alice { a: bool, out: bool },
    Bob { b: bool, out: bool },
    Spent,
}

/// The `2^n − 1` box pairs shared by Alice and Bob. Each pair can be queried
/// once per side; [`BoxTree::refresh`] replaces every pair with a new one.
#[derive(Debug, Clone)]
pub struct BoxTree {
    n: u32,
    sampler: SequentialSampler,
    slots: Vec<Slot>,
}

impl BoxTree {
    pub fn new<P: Probability>(n: u32, ns_box: &NsBox<P>) -> Result<Self> {
        Self::from_sampler(n, SequentialSampler::new(ns_box)?)
    }

    pub fn from_sampler(n: u32, sampler: SequentialSampler) -> Result<Self> {
        if n == 0 || n > MAX_FULL_TREE_LEVELS {
            return Err(domain(format!("box tree needs 1..={MAX_FULL_TREE_LEVELS} levels, got {n}")));
        }
        Ok(Self { n, sampler, slots: vec![Slot::Fresh; (1usize << n) - 1] })
    }

    pub fn levels(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn boxes_on_level(&self, level: u32) -> usize {
        1usize << (self.n - level)
    }

    pub fn refresh(&mut self) {
        self.slots.fill(Slot::Fresh);
    }

    /// Number of pairs that have been queried on at least one side.
    pub fn touched(&self) -> usize {
        self.slots.iter().filter(|s| **s != Slot::Fresh).count()
    }

    fn slot_index(&self, level: u32, index: usize) -> Result<usize> {
        if level == 0 || level > self.n || index == 0 || index > self.boxes_on_level(level) {
            return Err(domain(format!("no box ({level}, {index}) in a {}-level tree", self.n)));
        }
        // Levels 1..level-1 hold 2^n − 2^(n−level+1) boxes.
        Ok((1usize << self.n) - (1usize << (self.n - level + 1)) + index - 1)
    }

    /// Alice feeds `a` into box `(level, index)` and reads her output.
    pub fn query_alice<R: Rng + ?Sized>(&mut self, level: u32, index: usize, a: bool, rng: &mut R) -> Result<bool> {
        let s = self.slot_index(level, index)?;
        let (out, next) = match self.slots[s] {
            Slot::Fresh => {
                let out = self.sampler.alice_first(a, rng);
                (out, Slot::Alice { a, out })
            }
            Slot::Bob { b, out: bob } => (self.sampler.alice_after(b, bob, a, rng), Slot::Spent),
            Slot::Alice { .. } | Slot::Spent => return Err(Error::BoxReused { level, index }),
        };
        self.slots[s] = next;
        Ok(out)
    }

    /// Bob feeds `b` into his half of box `(level, index)`.
    pub fn query_bob<R: Rng + ?Sized>(&mut self, level: u32, index: usize, b: bool, rng: &mut R) -> Result<bool> {
        let s = self.slot_index(level, index)?;
        let (out, next) = match self.slots[s] {
            Slot::Fresh => {
                let out = self.sampler.bob_first(b, rng);
                (out, Slot::Bob { b, out })
            }
            Slot::Alice { a, out: alice } => (self.sampler.bob_after(a, alice, b, rng), Slot::Spent),
            Slot::Bob { .. } | Slot::Spent => return Err(Error::BoxReused { level, index }),
        };
        self.slots[s] = next;
        Ok(out)
    }
}

/// Wires Alice's `2^n` bits through the tree and returns the bit she transmits.
pub fn alice_encode<R: Rng + ?Sized>(bits: &[bool], tree: &mut BoxTree, rng: &mut R) -> Result<bool> {
    let mut buf = bits.to_vec();
    encode_in_place(&mut buf, tree, rng)
}

fn encode_in_place<R: Rng + ?Sized>(buf: &mut Vec<bool>, tree: &mut BoxTree, rng: &mut R) -> Result<bool> {
    let n = tree.levels();
    if buf.len() != 1usize << n {
        return Err(domain(format!("expected {} bits for n = {n}, got {}", 1usize << n, buf.len())));
    }
    for level in 1..=n {
        let pairs = buf.len() / 2;
        for j in 0..pairs {
            let (q1, q2) = (buf[2 * j], buf[2 * j + 1]);
            let out = tree.query_alice(level, j + 1, q1 ^ q2, rng)?;
            buf[j] = q1 ^ out;
        }
        buf.truncate(pairs);
    }
    Ok(buf[0])
}

/// Bob's estimate of `x_i` from the received bit and one box per level.
pub fn bob_decode<R: Rng + ?Sized>(received: bool, addr: Address, tree: &mut BoxTree, rng: &mut R) -> Result<bool> {
    if addr.levels() != tree.levels() {
        return Err(domain(format!(
            "address for n = {} used with a {}-level tree",
            addr.levels(),
            tree.levels()
        )));
    }
    let mut y = received;
    let mut j = 1usize;
    for level in (1..=tree.levels()).rev() {
        let b = addr.bit(level - 1);
        y ^= tree.query_bob(level, j, b, rng)?;
        j = 2 * j - 1 + b as usize;
    }
    Ok(y)
}

/// How a protocol run realizes the box tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Materialize all `2^n − 1` pairs and all `2^n` source bits.
    FullTree,
    /// Sample only the `n` pairs on Bob's path, the addressed bit and its
    /// level-1 neighbour. Every other subtree feeds the path a bit of the form
    /// `q ⊕ A` with `A` a fresh fair coin, so it is replaced by a fair coin.
    /// Exact in law, and only valid when Alice's marginal is uniform for both
    /// inputs.
    PathSampled,
    /// Full tree up to [`AUTO_FULL_TREE_LEVELS`], path sampling above.
    Auto,
}

/// Flat record of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolTranscript {
    pub n: u32,
    pub c: f64,
    pub c_prime: f64,
    pub address: u64,
    /// All of Alice's bits; `None` when the run was path-sampled.
    pub alice_bits: Option<Vec<bool>>,
    /// `x_i` at the requested address.
    pub target_bit: bool,
    /// `x^(n)`, the bit Alice transmits.
    pub wire_bit: bool,
    /// `z`, the bit Bob receives.
    pub received_bit: bool,
    /// `y_i`.
    pub decoded: bool,
}

impl ProtocolTranscript {
    pub fn success(&self) -> bool {
        self.decoded == self.target_bit
    }

    /// Alice's bits as a `0`/`1` string, empty when not materialized.
    pub fn alice_bit_string(&self) -> String {
        self.alice_bits
            .as_deref()
            .map(|bits| bits.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .unwrap_or_default()
    }
}

/// The observable part of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    pub target_bit: bool,
    pub wire_bit: bool,
    pub received_bit: bool,
    pub decoded: bool,
}

/// Reusable state for repeated runs with one configuration. Every run uses a
/// fresh box tree and fresh source bits.
#[derive(Debug, Clone)]
pub struct ProtocolRunner {
    cfg: VanDamConfig,
    engine: Engine,
    sampler: SequentialSampler,
    link: ChannelChain,
    tree: Option<BoxTree>,
    bits: Vec<bool>,
}

impl ProtocolRunner {
    /// Runner on isotropic boxes of correlation `cfg.c()`.
    pub fn new(cfg: VanDamConfig, engine: Engine) -> Result<Self> {
        Self::with_box(cfg, &make_isotropic_box(cfg.c())?, engine)
    }

    /// Runner on an arbitrary no-signaling box; `cfg.c()` is only recorded.
    pub fn with_box<P: Probability>(cfg: VanDamConfig, ns_box: &NsBox<P>, engine: Engine) -> Result<Self> {
        let sampler = SequentialSampler::new(ns_box)?;
        let engine = match engine {
            Engine::Auto if cfg.n() <= AUTO_FULL_TREE_LEVELS || !sampler.has_uniform_alice_marginal() => {
                Engine::FullTree
            }
            Engine::Auto => Engine::PathSampled,
            e => e,
        };
        if engine == Engine::PathSampled && !sampler.has_uniform_alice_marginal() {
            return Err(domain("path sampling requires boxes with uniform Alice marginals"));
        }
        let tree = match engine {
            Engine::FullTree => Some(BoxTree::from_sampler(cfg.n(), sampler.clone())?),
            _ => None,
        };
        let link = ChannelChain::new(SymmetricBinaryChannel::new(cfg.c_prime())?, cfg.n());
        Ok(Self { cfg, engine, sampler, link, tree, bits: Vec::new() })
    }

    pub fn config(&self) -> &VanDamConfig {
        &self.cfg
    }

    /// The resolved engine (never [`Engine::Auto`]).
    pub fn engine(&self) -> Engine {
        self.engine
    }

    fn check_address(&self, addr: Address) -> Result<()> {
        if addr.levels() != self.cfg.n() {
            return Err(domain(format!("address for n = {} used with n = {}", addr.levels(), self.cfg.n())));
        }
        Ok(())
    }

    /// One run at `addr`, keeping only the observable bits.
    pub fn sample_outcome<R: Rng + ?Sized>(
        &mut self,
        src: &BernoulliSource,
        addr: Address,
        rng: &mut R,
    ) -> Result<RunOutcome> {
        self.check_address(addr)?;
        match self.engine {
            Engine::PathSampled => Ok(self.path_run(src, addr, rng)),
            _ => {
                self.fill_bits(src, rng);
                self.full_run(addr, rng)
            }
        }
    }

    /// One run at `addr` with its full transcript.
    pub fn run<R: Rng + ?Sized>(
        &mut self,
        src: &BernoulliSource,
        addr: Address,
        rng: &mut R,
    ) -> Result<ProtocolTranscript> {
        self.check_address(addr)?;
        let (outcome, alice_bits) = match self.engine {
            Engine::PathSampled => (self.path_run(src, addr, rng), None),
            _ => {
                self.fill_bits(src, rng);
                let bits = self.bits.clone();
                (self.full_run(addr, rng)?, Some(bits))
            }
        };
        Ok(self.transcript(addr, outcome, alice_bits))
    }

    /// Runs the protocol once per address with given bits; full tree only.
    pub fn run_with_bits<R: Rng + ?Sized>(
        &mut self,
        bits: &[bool],
        addr: Address,
        rng: &mut R,
    ) -> Result<ProtocolTranscript> {
        self.check_address(addr)?;
        if self.engine != Engine::FullTree {
            return Err(domain("explicit input bits need the full-tree engine"));
        }
        if bits.len() != self.cfg.width() {
            return Err(domain(format!("expected {} bits, got {}", self.cfg.width(), bits.len())));
        }
        self.bits.clear();
        self.bits.extend_from_slice(bits);
        let outcome = self.full_run(addr, rng)?;
        Ok(self.transcript(addr, outcome, Some(bits.to_vec())))
    }

    /// One fresh run per address, `2^n` runs in all.
    pub fn run_all<R: Rng + ?Sized>(&mut self, src: &BernoulliSource, rng: &mut R) -> Result<Vec<ProtocolTranscript>> {
        Address::all(self.cfg.n())?.map(|addr| self.run(src, addr, rng)).collect()
    }

    /// Decoded spins `ŷ_0 … ŷ_{2^n−1}`, one fresh run per address, appended to `out`.
    pub fn decode_all_spins<R: Rng + ?Sized>(
        &mut self,
        src: &BernoulliSource,
        rng: &mut R,
        out: &mut Vec<i8>,
    ) -> Result<()> {
        for addr in Address::all(self.cfg.n())? {
            let o = self.sample_outcome(src, addr, rng)?;
            out.push(crate::bits::spin(o.decoded));
        }
        Ok(())
    }

    fn transcript(&self, addr: Address, o: RunOutcome, alice_bits: Option<Vec<bool>>) -> ProtocolTranscript {
        ProtocolTranscript {
            n: self.cfg.n(),
            c: self.cfg.c(),
            c_prime: self.cfg.c_prime(),
            address: addr.index(),
            alice_bits,
            target_bit: o.target_bit,
            wire_bit: o.wire_bit,
            received_bit: o.received_bit,
            decoded: o.decoded,
        }
    }

    fn fill_bits<R: Rng + ?Sized>(&mut self, src: &BernoulliSource, rng: &mut R) {
        self.bits.clear();
        self.bits.extend((0..self.cfg.width()).map(|_| src.sample_bit(rng)));
    }

    fn full_run<R: Rng + ?Sized>(&mut self, addr: Address, rng: &mut R) -> Result<RunOutcome> {
        let tree = self.tree.as_mut().expect("full-tree engine owns a tree");
        tree.refresh();
        let target_bit = self.bits[addr.index() as usize];
        let wire_bit = encode_in_place(&mut self.bits, tree, rng)?;
        let received_bit = self.link.send_bit(wire_bit, rng);
        let decoded = bob_decode(received_bit, addr, tree, rng)?;
        Ok(RunOutcome { target_bit, wire_bit, received_bit, decoded })
    }

    fn path_run<R: Rng + ?Sized>(&mut self, src: &BernoulliSource, addr: Address, rng: &mut R) -> RunOutcome {
        let left = src.sample_bit(rng);
        let right = src.sample_bit(rng);
        let target_bit = if addr.bit(0) { right } else { left };
        let mut bob_parity = false;
        let (mut q1, mut q2) = (left, right);
        let mut carried = false;
        for level in 1..=self.cfg.n() {
            let b = addr.bit(level - 1);
            if level > 1 {
                let sibling: bool = rng.gen();
                (q1, q2) = if b { (sibling, carried) } else { (carried, sibling) };
            }
            let a = q1 ^ q2;
            let alice = self.sampler.alice_first(a, rng);
            bob_parity ^= self.sampler.bob_after(a, alice, b, rng);
            carried = q1 ^ alice;
        }
        let wire_bit = carried;
        let received_bit = self.link.send_bit(wire_bit, rng);
        RunOutcome { target_bit, wire_bit, received_bit, decoded: received_bit ^ bob_parity }
    }
}

/// Which addresses a protocol call decodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddressMode {
    Single(Address),
    /// Every address, each with fresh bits and fresh boxes.
    All,
}

/// Samples source bits, encodes, sends through `n` concatenated `c′` links and decodes.
pub fn run_protocol<R: Rng + ?Sized>(
    cfg: VanDamConfig,
    src: &BernoulliSource,
    mode: AddressMode,
    engine: Engine,
    rng: &mut R,
) -> Result<Vec<ProtocolTranscript>> {
    let mut runner = ProtocolRunner::new(cfg, engine)?;
    match mode {
        AddressMode::Single(addr) => Ok(vec![runner.run(src, addr, rng)?]),
        AddressMode::All => runner.run_all(src, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsbox::{local_box, LocalStrategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits_of(v: u64, width: usize) -> Vec<bool> {
        (0..width).map(|k| (v >> k) & 1 == 1).collect()
    }

    #[test]
    fn slot_layout_is_dense() {
        let tree = BoxTree::new(3, &make_isotropic_box(1.0).unwrap()).unwrap();
        let mut seen = Vec::new();
        for level in 1..=3 {
            for j in 1..=tree.boxes_on_level(level) {
                seen.push(tree.slot_index(level, j).unwrap());
            }
        }
        assert_eq!(seen, (0..7).collect::<Vec<_>>());
        assert!(tree.slot_index(1, 5).is_err());
        assert!(tree.slot_index(4, 1).is_err());
    }

    #[test]
    fn deterministic_zero_tree_transmits_first_bit() {
        let zero = local_box::<f64>(LocalStrategy::Constant(false), LocalStrategy::Constant(false));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for n in 1..=4u32 {
            let mut tree = BoxTree::new(n, &zero).unwrap();
            for v in 0..(1u64 << (1 << n)).min(256) {
                tree.refresh();
                let bits = bits_of(v, 1 << n);
                assert_eq!(alice_encode(&bits, &mut tree, &mut rng).unwrap(), bits[0]);
            }
        }
    }

    #[test]
    fn two_level_wiring() {
        // With box outputs forced to A ≡ 1 the wiring gives
        // x^(2) = x_0 ⊕ A^{1,1} ⊕ A^{2,1} = x_0.
        let one = local_box::<f64>(LocalStrategy::Constant(true), LocalStrategy::Constant(false));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut tree = BoxTree::new(2, &one).unwrap();
        for v in 0..16 {
            tree.refresh();
            let bits = bits_of(v, 4);
            assert_eq!(alice_encode(&bits, &mut tree, &mut rng).unwrap(), bits[0]);
        }
        // A = a: x^(1)_1 = x_0 ⊕ (x_0 ⊕ x_1) = x_1, x^(1)_2 = x_3, x^(2) = x^(1)_2.
        let copy = local_box::<f64>(LocalStrategy::Copy, LocalStrategy::Constant(false));
        let mut tree = BoxTree::new(2, &copy).unwrap();
        for v in 0..16 {
            tree.refresh();
            let bits = bits_of(v, 4);
            assert_eq!(alice_encode(&bits, &mut tree, &mut rng).unwrap(), bits[3]);
        }
    }

    #[test]
    fn encode_rejects_wrong_width() {
        let mut tree = BoxTree::new(2, &make_isotropic_box(0.5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(alice_encode(&[true; 3], &mut tree, &mut rng), Err(Error::Domain(_))));
    }

    #[test]
    fn boxes_are_single_use() {
        let mut tree = BoxTree::new(1, &make_isotropic_box(0.5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        alice_encode(&[false, true], &mut tree, &mut rng).unwrap();
        assert_eq!(
            alice_encode(&[false, true], &mut tree, &mut rng),
            Err(Error::BoxReused { level: 1, index: 1 })
        );
        let addr = Address::new(1, 1).unwrap();
        bob_decode(false, addr, &mut tree, &mut rng).unwrap();
        assert!(bob_decode(false, addr, &mut tree, &mut rng).is_err());
    }

    #[test]
    fn address_validation() {
        assert!(Address::new(4, 2).is_err());
        let a = Address::new(6, 3).unwrap();
        assert_eq!((a.bit(0), a.bit(1), a.bit(2)), (false, true, true));
        assert_eq!(Address::all(3).unwrap().count(), 8);
        let mut tree = BoxTree::new(2, &make_isotropic_box(0.5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(bob_decode(false, Address::new(0, 3).unwrap(), &mut tree, &mut rng).is_err());
    }

    #[test]
    fn bob_queries_one_box_per_level() {
        let mut tree = BoxTree::new(4, &make_isotropic_box(0.7).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        bob_decode(true, Address::new(11, 4).unwrap(), &mut tree, &mut rng).unwrap();
        assert_eq!(tree.touched(), 4);
    }

    #[test]
    fn pr_boxes_decode_every_bit() {
        let cfg = VanDamConfig::new(3, 1.0, 1.0).unwrap();
        let mut runner = ProtocolRunner::new(cfg, Engine::FullTree).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for v in 0..256u64 {
            let bits = bits_of(v, 8);
            for addr in Address::all(3).unwrap() {
                let t = runner.run_with_bits(&bits, addr, &mut rng).unwrap();
                assert_eq!(t.decoded, bits[addr.index() as usize]);
            }
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let cfg = VanDamConfig::new(4, 0.8, 0.95).unwrap();
        let src = BernoulliSource::new(0.2).unwrap();
        let go = |engine| {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            run_protocol(cfg, &src, AddressMode::All, engine, &mut rng).unwrap()
        };
        assert_eq!(go(Engine::FullTree), go(Engine::FullTree));
        assert_eq!(go(Engine::PathSampled), go(Engine::PathSampled));
    }

    #[test]
    fn auto_engine_resolution() {
        let small = ProtocolRunner::new(VanDamConfig::new(8, 0.9, 1.0).unwrap(), Engine::Auto).unwrap();
        assert_eq!(small.engine(), Engine::FullTree);
        let large = ProtocolRunner::new(VanDamConfig::new(20, 0.9, 1.0).unwrap(), Engine::Auto).unwrap();
        assert_eq!(large.engine(), Engine::PathSampled);
        let biased = local_box::<f64>(LocalStrategy::Constant(false), LocalStrategy::Constant(false));
        let cfg = VanDamConfig::new(3, 0.5, 1.0).unwrap();
        assert!(ProtocolRunner::with_box(cfg, &biased, Engine::PathSampled).is_err());
    }

    #[test]
    fn path_transcripts_omit_bits() {
        let cfg = VanDamConfig::new(12, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let src = BernoulliSource::new(0.0).unwrap();
        let t = run_protocol(cfg, &src, AddressMode::Single(Address::new(77, 12).unwrap()), Engine::PathSampled, &mut rng)
            .unwrap();
        assert!(t[0].alice_bits.is_none());
        assert!(t[0].success());
        assert_eq!(t[0].alice_bit_string(), "");
    }
}
