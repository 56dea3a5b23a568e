//! Bit/spin conversions. A bit `x` maps to the spin `(-1)^x`: 0 ↦ +1, 1 ↦ −1.

#[inline]
pub fn spin(bit: bool) -> i8 {
    if bit {
        -1
    } else {
        1
    }
}

#[inline]
pub fn bit(spin: i8) -> bool {
    spin < 0
}
