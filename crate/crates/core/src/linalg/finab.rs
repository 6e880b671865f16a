use std::fmt;

/// Isomorphism class of a finite abelian p-group, ⊕ Z/p^{e_i} with
/// e_1 <= e_2 <= ...; the empty list is the zero group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAb {
    p: u64,
    exps: Vec<u32>,
}

impl FinAb {
    /// Drops zero exponents and sorts the rest.
    pub fn new(p: u64, exps: impl IntoIterator<Item = u32>) -> Self {
        let mut exps: Vec<u32> = exps.into_iter().filter(|&a| a > 0).collect();
        exps.sort_unstable();
        FinAb { p, exps }
    }

    pub fn zero(p: u64) -> Self {
        FinAb { p, exps: Vec::new() }
    }

    pub fn cyclic(p: u64, a: u32) -> Self {
        FinAb::new(p, [a])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// log_p of the group order.
    pub fn order_log(&self) -> u64 {
        self.exps.iter().map(|&a| a as u64).sum()
    }

    /// The group order, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        let mut n: u128 = 1;
        for _ in 0..self.order_log() {
            n = n.saturating_mul(self.p as u128);
        }
        n
    }

    /// The cyclic orders p^{e_i}.
    pub fn cyclic_orders(&self) -> Vec<u64> {
        self.exps.iter().map(|&a| self.p.pow(a)).collect()
    }

    pub fn direct_sum(&self, other: &FinAb) -> FinAb {
        FinAb::new(self.p, self.exps.iter().chain(&other.exps).copied())
    }
}

impl fmt::Display for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "0");
        }
        for (i, &a) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "Z/{}", self.p.pow(a))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_sorted() {
        assert_eq!(FinAb::new(2, [2, 0, 1]).to_string(), "Z/2 ⊕ Z/4");
        assert_eq!(FinAb::zero(3).to_string(), "0");
        assert_eq!(FinAb::new(3, [2, 1]).order(), 27);
    }
}
