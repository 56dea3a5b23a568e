//! Exhaustive rational-arithmetic law of the protocol for small trees.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::nsbox::{make_isotropic_box, no_signaling_check, BoxInput, BoxOutcome, NsBox};
use crate::prob::{agreement, Rational};

use super::Address;

/// Largest tree the enumeration accepts.
pub const MAX_EXACT_LEVELS: u32 = 3;

/// Exact law at one address. Input vectors are encoded with `x_k` in bit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AddressLaw {
    pub address: u64,
    /// `P(y_i = x_i)` with Alice's bits uniform.
    pub success: Rational,
    /// `P(y_i = x_i | x_0 … x_{2^n−1})` per input vector.
    pub agree_given_inputs: Vec<Rational>,
    /// `P(y_i = 1 | x_0 … x_{2^n−1})` per input vector.
    pub y_one_given_inputs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactLaw {
    pub n: u32,
    pub addresses: Vec<AddressLaw>,
}

impl ExactLaw {
    /// Whether every `P(y_i = x_i | x)` depends on `x` only through `x_i`.
    pub fn is_memoryless(&self) -> bool {
        self.addresses.iter().all(|law| {
            let mut seen: [Option<&Rational>; 2] = [None, None];
            law.agree_given_inputs.iter().enumerate().all(|(x, p)| {
                let target = ((x as u64 >> law.address) & 1) as usize;
                match seen[target] {
                    None => {
                        seen[target] = Some(p);
                        true
                    }
                    Some(q) => q == p,
                }
            })
        })
    }
}

/// Exact protocol law on isotropic boxes of correlation `c` with a classical
/// link of `n` concatenated channels of correlation `c_prime`.
pub fn enumerate_exact(n: u32, c: Rational, c_prime: Rational) -> Result<ExactLaw> {
    enumerate_exact_with_box(n, &make_isotropic_box(c)?, c_prime)
}

pub fn enumerate_exact_with_box(n: u32, ns_box: &NsBox<Rational>, c_prime: Rational) -> Result<ExactLaw> {
    if n > MAX_EXACT_LEVELS {
        return Err(Error::TooLarge { n, max: MAX_EXACT_LEVELS });
    }
    if n == 0 {
        return Err(domain("level count must be at least 1"));
    }
    if c_prime > Rational::one() || c_prime < -Rational::one() {
        return Err(domain(format!("|c'| must be at most 1, got {c_prime}")));
    }
    if !no_signaling_check(ns_box, 0.0)?.pass {
        return Err(domain("exact enumeration needs a no-signaling box"));
    }
    let keep = link_keep_probability(n, &c_prime);
    let width = 1usize << n;
    let inputs = 1usize << width;
    let uniform = Rational::new(1, inputs as i128);

    let mut addresses = Vec::with_capacity(width);
    for addr in Address::all(n)? {
        let mut success = Rational::zero();
        let mut agree_given_inputs = Vec::with_capacity(inputs);
        let mut y_one_given_inputs = Vec::with_capacity(inputs);
        for x in 0..inputs {
            let (wire_one_parity, wire_zero_parity) = wire_and_parity_law(ns_box, n, x as u64, addr);
            let mut y_one = Rational::zero();
            for (wire, dist) in [(true, &wire_one_parity), (false, &wire_zero_parity)] {
                for (parity, p) in [(false, &dist[0]), (true, &dist[1])] {
                    // y = z ⊕ parity, z = wire with probability `keep`.
                    let p_z_one = if wire { keep } else { Rational::one() - keep };
                    let p_y_one = if parity { Rational::one() - p_z_one } else { p_z_one };
                    y_one += *p * p_y_one;
                }
            }
            let target = (x >> addr.index()) & 1 == 1;
            let agree = if target { y_one } else { Rational::one() - y_one };
            success += agree * uniform;
            agree_given_inputs.push(agree);
            y_one_given_inputs.push(y_one);
        }
        addresses.push(AddressLaw { address: addr.index(), success, agree_given_inputs, y_one_given_inputs });
    }
    Ok(ExactLaw { n, addresses })
}

/// `P(z = x^(n))` for `n` concatenated links, summed over every flip pattern.
fn link_keep_probability(n: u32, c_prime: &Rational) -> Rational {
    let stay = agreement(c_prime);
    let flip = Rational::one() - stay;
    // [P(even flips), P(odd flips)] after each link.
    let mut dist = [Rational::one(), Rational::zero()];
    for _ in 0..n {
        dist = [dist[0] * stay + dist[1] * flip, dist[0] * flip + dist[1] * stay];
    }
    dist[0]
}

/// Joint law of Alice's transmitted bit and the parity of Bob's path outputs,
/// returned as `([P(wire=1, par=0), P(wire=1, par=1)], [P(wire=0, par=0), P(wire=0, par=1)])`.
fn wire_and_parity_law(ns_box: &NsBox<Rational>, n: u32, x: u64, addr: Address) -> ([Rational; 2], [Rational; 2]) {
    // State: (current level values packed LSB-first, Bob parity) → probability.
    let mut states: HashMap<(u64, bool), Rational> = HashMap::new();
    states.insert((x, false), Rational::one());
    let mut path_j = 1usize;
    let mut path: Vec<usize> = vec![0; n as usize + 1];
    for level in (1..=n).rev() {
        path[level as usize] = path_j;
        path_j = 2 * path_j - 1 + addr.bit(level - 1) as usize;
    }
    for level in 1..=n {
        let boxes = 1usize << (n - level);
        let b = addr.bit(level - 1);
        let on_path = path[level as usize] - 1;
        let mut next: HashMap<(u64, bool), Rational> = HashMap::new();
        for ((values, parity), weight) in states {
            // Enumerate this level box by box.
            let mut partial: Vec<(u64, bool, Rational)> = vec![(0, parity, weight)];
            for j in 0..boxes {
                let q1 = (values >> (2 * j)) & 1 == 1;
                let q2 = (values >> (2 * j + 1)) & 1 == 1;
                let a = q1 ^ q2;
                let mut expanded = Vec::with_capacity(partial.len() * 4);
                for (out_bits, par, w) in &partial {
                    if j == on_path {
                        for alice in [false, true] {
                            for bob in [false, true] {
                                let p = *ns_box.prob(BoxInput::new(a, b), BoxOutcome { alice, bob });
                                if p.is_zero() {
                                    continue;
                                }
                                let out = (q1 ^ alice) as u64;
                                expanded.push((out_bits | out << j, par ^ bob, *w * p));
                            }
                        }
                    } else {
                        for alice in [false, true] {
                            let p = ns_box.alice_marginal(a, false, alice);
                            if p.is_zero() {
                                continue;
                            }
                            let out = (q1 ^ alice) as u64;
                            expanded.push((out_bits | out << j, *par, *w * p));
                        }
                    }
                }
                partial = expanded;
            }
            for (out_bits, par, w) in partial {
                *next.entry((out_bits, par)).or_insert_with(Rational::zero) += w;
            }
        }
        states = next;
    }
    let mut one = [Rational::zero(), Rational::zero()];
    let mut zero = [Rational::zero(), Rational::zero()];
    for ((wire, parity), p) in states {
        let slot = if wire & 1 == 1 { &mut one } else { &mut zero };
        slot[parity as usize] += p;
    }
    (one, zero)
}
