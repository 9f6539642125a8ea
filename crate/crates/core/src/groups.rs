//! Finite vertex groups given by multiplication tables, and isomorphisms between them.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An element of a finite group, identified by its id. Id 0 is always the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ID: Elem = Elem(0);

    pub fn is_id(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element id {id} out of range for group {group} of order {order}")]
    IdOutOfRange { group: String, id: u32, order: usize },
    #[error("group mismatch: expected {expected}, found {found}")]
    OracleMismatch { expected: String, found: String },
    #[error("invalid multiplication table for {group}: {reason}")]
    InvalidTable { group: String, reason: String },
    #[error("not an isomorphism {source_group} -> {target_group}: {reason}")]
    NotIsomorphism { source_group: String, target_group: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Trivial,
    Cyclic(u32),
    Table,
}

/// A finite group with precomputed multiplication and inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    kind: GroupKind,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    /// Generator symbol for cyclic groups; element names for table groups.
    names: Vec<String>,
    generators: Vec<Elem>,
}

impl FiniteGroup {
    pub fn trivial(name: &str) -> FiniteGroup {
        FiniteGroup {
            name: name.to_string(),
            kind: GroupKind::Trivial,
            order: 1,
            table: vec![0],
            inverse: vec![0],
            names: vec!["1".to_string()],
            generators: Vec::new(),
        }
    }

    /// Cyclic group of order `n` with generator symbol `gen`; element k is `gen^k`.
    pub fn cyclic(name: &str, n: u32, gen: &str) -> Result<FiniteGroup, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidTable {
                group: name.to_string(),
                reason: "cyclic order must be positive".into(),
            });
        }
        if n == 1 {
            return Ok(FiniteGroup::trivial(name));
        }
        let order = n as usize;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..n {
            for b in 0..n {
                table.push((a + b) % n);
            }
        }
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        Ok(FiniteGroup {
            name: name.to_string(),
            kind: GroupKind::Cyclic(n),
            order,
            table,
            inverse,
            names: vec![gen.to_string()],
            generators: vec![Elem(1)],
        })
    }

    /// Group from an explicit multiplication table. `names[0]` must name the identity.
    pub fn from_table(name: &str, names: Vec<String>, rows: Vec<Vec<u32>>) -> Result<FiniteGroup, GroupError> {
        let order = names.len();
        let bad = |reason: String| GroupError::InvalidTable { group: name.to_string(), reason };
        if order == 0 {
            return Err(bad("empty table".into()));
        }
        if rows.len() != order || rows.iter().any(|r| r.len() != order) {
            return Err(bad(format!("table must be {order}x{order}")));
        }
        let mut table = Vec::with_capacity(order * order);
        for row in &rows {
            for &x in row {
                if x as usize >= order {
                    return Err(bad(format!("entry {x} out of range")));
                }
                table.push(x);
            }
        }
        let m = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            if m(0, a) != a || m(a, 0) != a {
                return Err(bad(format!("{} is not the identity", names[0])));
            }
        }
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            match (0..order).find(|&b| m(a, b) == 0 && m(b, a) == 0) {
                Some(b) => inverse[a] = b as u32,
                None => return Err(bad(format!("{} has no inverse", names[a]))),
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(bad(format!("not associative at ({}, {}, {})", names[a], names[b], names[c])));
                    }
                }
            }
        }
        let mut g = FiniteGroup {
            name: name.to_string(),
            kind: if order == 1 { GroupKind::Trivial } else { GroupKind::Table },
            order,
            table,
            inverse,
            names,
            generators: Vec::new(),
        };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.order];
        reached[0] = true;
        for x in 1..self.order {
            if !reached[x] {
                gens.push(Elem(x as u32));
                reached = self.closure(&gens);
            }
        }
        gens
    }

    /// Membership vector of the subgroup generated by `gens`.
    fn closure(&self, gens: &[Elem]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([Elem::ID]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order as u32).map(Elem)
    }

    /// Generator symbol of a cyclic group.
    pub fn cyclic_symbol(&self) -> Option<&str> {
        match self.kind {
            GroupKind::Cyclic(_) => Some(&self.names[0]),
            _ => None,
        }
    }

    /// Names of table elements (identity first).
    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn check(&self, a: Elem) -> Result<Elem, GroupError> {
        if a.index() < self.order {
            Ok(a)
        } else {
            Err(GroupError::IdOutOfRange { group: self.name.clone(), id: a.0, order: self.order })
        }
    }

    pub fn try_mul(&self, a: Elem, b: Elem) -> Result<Elem, GroupError> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn try_inv(&self, a: Elem) -> Result<Elem, GroupError> {
        Ok(self.inv(self.check(a)?))
    }

    pub fn try_eq(&self, a: Elem, b: Elem) -> Result<bool, GroupError> {
        Ok(self.check(a)? == self.check(b)?)
    }

    pub fn try_is_id(&self, a: Elem) -> Result<bool, GroupError> {
        Ok(self.check(a)?.is_id())
    }

    /// Unchecked multiplication; ids must be in range.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.table[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inverse[a.index()])
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = Elem::ID;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `g x g^-1`.
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Token for an element relative to the group's naming: `(symbol, power)`.
    /// The identity is `None`.
    pub fn token(&self, a: Elem) -> Option<(String, u32)> {
        if a.is_id() {
            return None;
        }
        match self.kind {
            GroupKind::Cyclic(_) => Some((self.names[0].clone(), a.0)),
            _ => Some((self.names[a.index()].clone(), 1)),
        }
    }

    /// Inverse of [`FiniteGroup::token`]: resolve `symbol^power`.
    pub fn from_token(&self, symbol: &str, power: i64) -> Option<Elem> {
        if symbol == "1" {
            return Some(Elem::ID);
        }
        let base = match self.kind {
            GroupKind::Cyclic(_) if self.names[0] == symbol => Elem(1),
            GroupKind::Table => Elem(self.names.iter().position(|n| n == symbol)? as u32),
            _ => return None,
        };
        Some(self.pow(base, power))
    }

    pub fn display_elem(&self, a: Elem) -> String {
        match self.token(a) {
            None => "1".to_string(),
            Some((s, 1)) => s,
            Some((s, k)) => format!("{s}^{k}"),
        }
    }

    /// Smallest element of the conjugacy class of `a`.
    pub fn class_min(&self, a: Elem) -> Elem {
        self.elements().map(|g| self.conj(g, a)).min().unwrap_or(a)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Structural equality of group values, cheap when the handles are shared.
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An isomorphism between vertex groups, or the unique map out of a trivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupIso {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    table: Vec<Elem>,
}

impl GroupIso {
    pub fn identity(g: &Arc<FiniteGroup>) -> GroupIso {
        GroupIso { source: g.clone(), target: g.clone(), table: g.elements().collect() }
    }

    /// The map from a trivial group into `target`.
    pub fn from_trivial(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> GroupIso {
        debug_assert!(source.is_trivial());
        GroupIso { source: source.clone(), target: target.clone(), table: vec![Elem::ID] }
    }

    /// Validated construction from a full table. A trivial source may map into anything;
    /// otherwise the table must be a bijective homomorphism.
    pub fn new(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, table: Vec<Elem>) -> Result<GroupIso, GroupError> {
        let err = |reason: String| GroupError::NotIsomorphism {
            source_group: source.name().to_string(),
            target_group: target.name().to_string(),
            reason,
        };
        if table.len() != source.order() {
            return Err(err("table size differs from source order".into()));
        }
        for &x in &table {
            target.check(x)?;
        }
        if source.is_trivial() {
            return if table[0].is_id() { Ok(GroupIso::from_trivial(source, target)) } else { Err(err("identity not preserved".into())) };
        }
        if source.order() != target.order() {
            return Err(err("orders differ".into()));
        }
        let mut hit = vec![false; target.order()];
        for &x in &table {
            if std::mem::replace(&mut hit[x.index()], true) {
                return Err(err("not injective".into()));
            }
        }
        for a in source.elements() {
            for b in source.elements() {
                if table[source.mul(a, b).index()] != target.mul(table[a.index()], table[b.index()]) {
                    return Err(err(format!(
                        "not a homomorphism at ({}, {})",
                        source.display_elem(a),
                        source.display_elem(b)
                    )));
                }
            }
        }
        Ok(GroupIso { source: source.clone(), target: target.clone(), table })
    }

    /// Extend generator images to a full table and validate.
    pub fn from_generators(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        images: &[(Elem, Elem)],
    ) -> Result<GroupIso, GroupError> {
        let err = |reason: String| GroupError::NotIsomorphism {
            source_group: source.name().to_string(),
            target_group: target.name().to_string(),
            reason,
        };
        let mut table: Vec<Option<Elem>> = vec![None; source.order()];
        table[0] = Some(Elem::ID);
        let mut queue = VecDeque::from([Elem::ID]);
        while let Some(x) = queue.pop_front() {
            let fx = table[x.index()].expect("visited");
            for &(g, h) in images {
                source.check(g)?;
                target.check(h)?;
                let y = source.mul(x, g);
                let fy = target.mul(fx, h);
                match table[y.index()] {
                    None => {
                        table[y.index()] = Some(fy);
                        queue.push_back(y);
                    }
                    Some(prev) if prev != fy => return Err(err("generator images are inconsistent".into())),
                    Some(_) => {}
                }
            }
        }
        let table: Option<Vec<Elem>> = table.into_iter().collect();
        let table = table.ok_or_else(|| err("images do not cover a generating set".into()))?;
        GroupIso::new(source, target, table)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Checked application.
    pub fn try_apply(&self, group: &Arc<FiniteGroup>, g: Elem) -> Result<Elem, GroupError> {
        if !same_group(group, &self.source) {
            return Err(GroupError::OracleMismatch {
                expected: self.source.name().to_string(),
                found: group.name().to_string(),
            });
        }
        self.source.check(g)?;
        Ok(self.table[g.index()])
    }

    #[inline]
    pub fn apply(&self, g: Elem) -> Elem {
        self.table[g.index()]
    }

    /// Inverse isomorphism. Not available for the embedding of a trivial group
    /// into a nontrivial one.
    pub fn inverse(&self) -> Option<GroupIso> {
        if self.source.order() != self.target.order() {
            return None;
        }
        let mut inv = vec![Elem::ID; self.table.len()];
        for (i, &x) in self.table.iter().enumerate() {
            inv[x.index()] = Elem(i as u32);
        }
        Some(GroupIso { source: self.target.clone(), target: self.source.clone(), table: inv })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupIso) -> GroupIso {
        let table = self.table.iter().map(|&x| other.apply(x)).collect();
        GroupIso { source: self.source.clone(), target: other.target.clone(), table }
    }

    /// `x ↦ c · self(x) · c⁻¹`.
    pub fn conjugated(&self, c: Elem) -> GroupIso {
        let t = &self.target;
        let table = self.table.iter().map(|&x| t.conj(c, x)).collect();
        GroupIso { source: self.source.clone(), target: self.target.clone(), table }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, x)| x.index() == i)
    }
}
