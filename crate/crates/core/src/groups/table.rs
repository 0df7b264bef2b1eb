//! Finite groups given by Cayley tables, plus the built-in catalog.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// A finite group stored as a full multiplication table.
///
/// Elements are the indices `0..order`; index 0 is always the identity. The
/// constructors relabel the input so that this holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    name: String,
    names: Vec<String>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteTable {
    /// Builds a table group from element names and a square table of indices
    /// (`table[a][b]` is the index of `a * b`). The group axioms are checked
    /// exhaustively.
    pub fn new(name: impl Into<String>, names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let name = name.into();
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup(format!("{name}: empty element list")));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!("{name}: table is not {n}x{n}")));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::InvalidGroup(format!("{name}: table entry out of range")));
        }
        let mut seen = HashMap::new();
        for (i, nm) in names.iter().enumerate() {
            if nm.is_empty() || nm.chars().any(char::is_whitespace) || nm == "x" {
                return Err(Error::InvalidGroup(format!("{name}: bad element name `{nm}`")));
            }
            if seen.insert(nm.clone(), i).is_some() {
                return Err(Error::InvalidGroup(format!("{name}: duplicate element name `{nm}`")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup(format!("{name}: no identity element")))?;

        // identity first, everything else keeps its relative order
        let mut order: Vec<usize> = vec![identity];
        order.extend((0..n).filter(|&i| i != identity));
        let mut new_index = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[new_index[a] * n + new_index[b]] = new_index[table[a][b]] as u32;
            }
        }
        let names: Vec<String> = order.iter().map(|&old| names[old].clone()).collect();
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 && mul[b * n + a] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX {
                return Err(Error::InvalidGroup(format!("{name}: `{}` has no inverse", names[a])));
            }
        }
        let group = FiniteTable { name, names, mul, inv };
        group.check_associativity()?;
        Ok(group)
    }

    /// Closes a set of permutations of `0..degree` under composition. The
    /// product `p * q` applies `p` first. Elements are named in cycle notation
    /// on the points `1..=degree`, with `e` for the identity.
    pub fn from_permutations(name: impl Into<String>, degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let name = name.into();
        for g in generators {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if g.len() != degree || sorted.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::InvalidGroup(format!("{name}: {g:?} is not a permutation of degree {degree}")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p: Vec<usize> = (0..degree).map(|pt| g[elements[i][pt]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..degree).map(|pt| b[a[pt]]).collect() };
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        let names = elements.iter().map(|p| cycle_notation(p)).collect();
        FiniteTable::new(name, names, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.names.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `a^{-1} x a`.
    pub fn conj(&self, x: u32, a: u32) -> u32 {
        self.mul(self.mul(self.inv(a), x), a)
    }

    pub fn element_name(&self, a: u32) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order() as u32;
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exhaustive check of associativity, identity and inverse laws.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.order() as u32;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvalidGroup(format!("{}: identity law fails at {}", self.name, self.element_name(a))));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::InvalidGroup(format!("{}: inverse law fails at {}", self.name, self.element_name(a))));
            }
        }
        self.check_associativity()
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order() as u32;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "{}: not associative at ({}, {}, {})",
                            self.name,
                            self.element_name(a),
                            self.element_name(b),
                            self.element_name(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic group of order `n` with elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteTable::new(format!("C{n}"), names, table).expect("cyclic table is a group")
    }

    /// Direct product of two table groups; elements are named `(a,b)`.
    pub fn direct_product(name: impl Into<String>, left: &FiniteTable, right: &FiniteTable) -> Self {
        let (n, m) = (left.order(), right.order());
        let names = (0..n * m)
            .map(|i| format!("({},{})", left.names[i / m], right.names[i % m]))
            .collect();
        let table = (0..n * m)
            .map(|i| {
                (0..n * m)
                    .map(|j| {
                        let a = left.mul((i / m) as u32, (j / m) as u32) as usize;
                        let b = right.mul((i % m) as u32, (j % m) as u32) as usize;
                        a * m + b
                    })
                    .collect()
            })
            .collect();
        FiniteTable::new(name, names, table).expect("product of groups is a group")
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut cur = p[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur + 1);
            cur = p[cur];
        }
        let body: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        out.push('(');
        out.push_str(&body.join(","));
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// Names accepted by [`catalog`].
pub const CATALOG: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "V4", "C2xC4", "C2xC2xC2", "C3xC3",
    "C2xC6", "S3", "D4", "Q8", "D5", "D6", "A4", "Dic3",
];

/// Looks up a built-in group by name.
pub fn catalog(name: &str) -> Option<FiniteTable> {
    if let Some(n) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
        return (n >= 1).then(|| FiniteTable::cyclic(n));
    }
    let group = match name {
        "V4" => {
            let names = ["e", "a", "b", "c"].map(String::from).to_vec();
            let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
            FiniteTable::new("V4", names, table).ok()?
        }
        "C2xC4" => FiniteTable::direct_product("C2xC4", &FiniteTable::cyclic(2), &FiniteTable::cyclic(4)),
        "C3xC3" => FiniteTable::direct_product("C3xC3", &FiniteTable::cyclic(3), &FiniteTable::cyclic(3)),
        "C2xC6" => FiniteTable::direct_product("C2xC6", &FiniteTable::cyclic(2), &FiniteTable::cyclic(6)),
        "C2xC2xC2" => {
            let c2 = FiniteTable::cyclic(2);
            FiniteTable::direct_product("C2xC2xC2", &FiniteTable::direct_product("C2xC2", &c2, &c2), &c2)
        }
        "S3" => FiniteTable::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).ok()?,
        "D4" => FiniteTable::from_permutations("D4", 4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).ok()?,
        "D5" => FiniteTable::from_permutations("D5", 5, &[vec![1, 2, 3, 4, 0], vec![0, 4, 3, 2, 1]]).ok()?,
        "D6" => FiniteTable::from_permutations("D6", 6, &[vec![1, 2, 3, 4, 5, 0], vec![0, 5, 4, 3, 2, 1]]).ok()?,
        "A4" => FiniteTable::from_permutations("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).ok()?,
        "Q8" => quaternion_group(),
        "Dic3" => dicyclic3(),
        _ => return None,
    };
    Some(group)
}

fn quaternion_group() -> FiniteTable {
    // units 1, i, j, k as 0..4; element index = 4 * sign + unit
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let label = ["1", "i", "j", "k"];
    let names = (0..8)
        .map(|e| format!("{}{}", if e >= 4 { "-" } else { "" }, label[e % 4]))
        .collect();
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (neg, unit) = UNIT[a % 4][b % 4];
                    let sign = (a >= 4) ^ (b >= 4) ^ neg;
                    usize::from(sign) * 4 + unit
                })
                .collect()
        })
        .collect();
    FiniteTable::new("Q8", names, table).expect("quaternion table is a group")
}

fn dicyclic3() -> FiniteTable {
    // a^k b^f with a^6 = 1, b^2 = a^3, b a = a^-1 b; index = 2k + f
    let names = (0..12)
        .map(|i| {
            let (k, f) = (i / 2, i % 2);
            match (k, f) {
                (0, 0) => "1".to_string(),
                (0, 1) => "b".to_string(),
                (k, 0) => format!("a{k}"),
                (k, _) => format!("a{k}b"),
            }
        })
        .collect();
    let mul = |x: usize, y: usize| -> usize {
        let (k, e) = (x / 2, x % 2);
        let (l, f) = (y / 2, y % 2);
        let (power, b) = if e == 0 { (k + l, f) } else { (k + 6 - l, 1 + f) };
        let (power, b) = if b == 2 { (power + 3, 0) } else { (power, b) };
        2 * (power % 6) + b
    };
    let table = (0..12).map(|x| (0..12).map(|y| mul(x, y)).collect()).collect();
    FiniteTable::new("Dic3", names, table).expect("dicyclic table is a group")
}
