//! Finite groups given by multiplication tables.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 24;

/// A finite group on elements 0..n with 0 the identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    label: Option<String>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>, label: Option<String>) -> Result<Self> {
        Self::from_table_with_cap(table, label, DEFAULT_ORDER_CAP)
    }

    /// Validates closure, identity, inverses and associativity.
    pub fn from_table_with_cap(table: Vec<Vec<usize>>, label: Option<String>, cap: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if n > cap {
            return Err(Error::InvalidGroup(format!("order {n} exceeds cap {cap}")));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has length {}, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {a} contains {x}, outside 0..{n}")));
            }
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::InvalidGroup(format!("0 is not an identity: 0*{a}={}, {a}*0={}", table[0][a], table[a][0])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = table[table[a][b]][c];
                    let r = table[a][table[b][c]];
                    if l != r {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c}): ({a}*{b})*{c} = {l} but {a}*({b}*{c}) = {r}"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) if table[b][a] == 0 => inv[a] = b,
                _ => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        Ok(FiniteGroup { n, table: table.concat(), inv, label })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with element k the residue k.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut g = Self::from_table_with_cap(table, None, usize::MAX).expect("cyclic table is a group");
        g.label = Some(format!("Z/{n}"));
        g
    }

    /// Builds a group from an explicit list of distinct elements of some
    /// ambient structure closed under `mul`, with `elems[0]` the identity.
    pub fn from_elements<T: PartialEq + Clone>(elems: &[T], mul: impl Fn(&T, &T) -> T, label: &str) -> Result<Self> {
        let idx = |x: &T| elems.iter().position(|y| y == x);
        let mut table = Vec::with_capacity(elems.len());
        for a in elems {
            let mut row = Vec::with_capacity(elems.len());
            for b in elems {
                row.push(idx(&mul(a, b)).ok_or_else(|| Error::InvalidGroup("element list not closed".into()))?);
            }
            table.push(row);
        }
        Self::from_table_with_cap(table, Some(label.to_string()), usize::MAX)
    }

    /// S_n as permutations in lexicographic order (identity first).
    pub fn symmetric(n: usize) -> Self {
        let mut perms = vec![(0..n).collect::<Vec<usize>>()];
        let mut cur: Vec<usize> = (0..n).collect();
        while next_permutation(&mut cur) {
            perms.push(cur.clone());
        }
        // (a*b)(i) = a(b(i)): apply b first.
        Self::from_elements(&perms, |a, b| b.iter().map(|&i| a[i]).collect(), &format!("S{n}")).expect("S_n")
    }

    /// The dihedral group of order 2n: r^k s^f ordered as (f, k).
    pub fn dihedral(n: usize) -> Self {
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|f| (0..n).map(move |k| (f, k))).collect();
        // r^k1 s^f1 · r^k2 s^f2 = r^{k1 ± k2} s^{f1+f2}
        Self::from_elements(
            &elems,
            |&(f1, k1), &(f2, k2)| {
                let k = if f1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                ((f1 + f2) % 2, k)
            },
            &format!("D{n}"),
        )
        .expect("dihedral")
    }

    /// The quaternion group of order 8.
    pub fn quaternion() -> Self {
        // Unit quaternions ±1, ±i, ±j, ±k as (sign, axis).
        let elems: Vec<(i8, u8)> = vec![(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)];
        let mul = |&(s1, a): &(i8, u8), &(s2, b): &(i8, u8)| -> (i8, u8) {
            let (s, c) = match (a, b) {
                (0, x) | (x, 0) => (1, x),
                (x, y) if x == y => (-1, 0),
                (1, 2) => (1, 3),
                (2, 1) => (-1, 3),
                (2, 3) => (1, 1),
                (3, 2) => (-1, 1),
                (3, 1) => (1, 2),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            };
            (s1 * s2 * s, c)
        };
        Self::from_elements(&elems, mul, "Q8").expect("Q8")
    }

    /// Direct product with element (a, b) at index a * |other| + b.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let m = other.n;
        let n = self.n * m;
        let table = (0..n)
            .map(|x| (0..n).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect())
            .collect();
        let label = format!("{}x{}", self.label(), other.label());
        Self::from_table_with_cap(table, Some(label), usize::MAX).expect("product of groups")
    }

    /// Builtin names: `cyclic:n`, `trivial`, `s3`, `d4`, `q8`, `klein`,
    /// and products joined by `x`, e.g. `cyclic:2xcyclic:4`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        let parts: Vec<&str> = name.split('x').collect();
        if parts.len() > 1 {
            let mut g = Self::builtin(parts[0])?;
            for part in &parts[1..] {
                g = g.product(&Self::builtin(part)?);
            }
            return Ok(g);
        }
        match name {
            "trivial" => Ok(Self::trivial()),
            "s3" => Ok(Self::symmetric(3)),
            "d4" => Ok(Self::dihedral(4)),
            "q8" => Ok(Self::quaternion()),
            "klein" => Ok(Self::cyclic(2).product(&Self::cyclic(2))),
            _ => {
                let n = name
                    .strip_prefix("cyclic:")
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::InvalidGroup(format!("unknown builtin group '{name}'")))?;
                if n > DEFAULT_ORDER_CAP {
                    return Err(Error::InvalidGroup(format!("order {n} exceeds cap {DEFAULT_ORDER_CAP}")));
                }
                Ok(Self::cyclic(n))
            }
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("G{}", self.n))
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The least generator, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.n).find(|&g| self.element_order(g) == self.n)
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn check_subgroup(&self, elems: &[usize]) -> Result<()> {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        if set.is_empty() || !set.contains(&0) {
            return Err(Error::NotASubgroup("subset does not contain the identity".into()));
        }
        if let Some(&x) = set.iter().find(|&&x| x >= self.n) {
            return Err(Error::NotASubgroup(format!("{x} is not an element")));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("{a}*{b} = {} leaves the subset", self.mul(a, b))));
                }
            }
        }
        Ok(())
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        (0..self.n).all(|g| set.iter().all(|&u| set.contains(&self.conj(g, u))))
    }

    /// The subgroup on sorted `elems` as a group in its own right; element i
    /// of the result is `elems[i]`.
    pub fn subgroup(&self, elems: &[usize]) -> Result<FiniteGroup> {
        self.check_subgroup(elems)?;
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let pos = |x: usize| elems.binary_search(&x).expect("closed");
        let table = elems.iter().map(|&a| elems.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        Self::from_table_with_cap(table, Some(format!("{}<{}", elems.len(), self.label())), usize::MAX)
    }

    /// Checks that `map` (indexed by elements of `self`) is a homomorphism into `target`.
    pub fn check_hom(&self, target: &FiniteGroup, map: &[usize]) -> Result<()> {
        if map.len() != self.n {
            return Err(Error::InvalidGroup(format!("homomorphism table has {} entries, expected {}", map.len(), self.n)));
        }
        if let Some(&x) = map.iter().find(|&&x| x >= target.n) {
            return Err(Error::InvalidGroup(format!("homomorphism value {x} is not an element of the target")));
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if map[self.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidGroup(format!("not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    /// Left cosets gU, each sorted, ordered by least element.
    pub fn left_cosets(&self, u: &[usize]) -> Vec<Vec<usize>> {
        self.cosets(|g| u.iter().map(|&x| self.mul(g, x)).collect())
    }

    /// Right cosets Ug, each sorted, ordered by least element.
    pub fn right_cosets(&self, u: &[usize]) -> Vec<Vec<usize>> {
        self.cosets(|g| u.iter().map(|&x| self.mul(x, g)).collect())
    }

    fn cosets(&self, coset_of: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for g in 0..self.n {
            if !seen[g] {
                let mut c = coset_of(g);
                c.sort_unstable();
                for &x in &c {
                    seen[x] = true;
                }
                out.push(c);
            }
        }
        out
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label(), self.n)
    }
}

/// One representative of each isomorphism class of groups of order at most 8.
pub fn small_groups() -> Vec<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    vec![
        c(1),
        c(2),
        c(3),
        c(4),
        c(2).product(&c(2)),
        c(5),
        c(6),
        FiniteGroup::symmetric(3),
        c(7),
        c(8),
        c(4).product(&c(2)),
        c(2).product(&c(2)).product(&c(2)),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_groups() {
        assert_eq!(FiniteGroup::builtin("s3").unwrap().order(), 6);
        assert!(!FiniteGroup::builtin("d4").unwrap().is_abelian());
        assert!(!FiniteGroup::quaternion().is_abelian());
        assert_eq!(FiniteGroup::builtin("cyclic:2xcyclic:4").unwrap().order(), 8);
        assert!(FiniteGroup::builtin("cyclic:0").is_err());
    }

    #[test]
    fn rejects_nonassociative() {
        // A Latin square with identity 0 that is not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(t, None).unwrap_err();
        assert!(err.to_string().contains("not associative"), "{err}");
    }
}
