//! Finite groups as complete multiplication tables, built from permutation
//! generators, plus subgroups-as-bitsets and embeddings between groups.

use crate::bitset::Bitset;
use crate::perm::Perm;
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Default cap on closure enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

static NEXT_TABLE_ID: AtomicU64 = AtomicU64::new(1);

/// A finite group with elements indexed `0..order`, index 0 the identity.
///
/// Elements are enumerated breadth-first over generator application in input
/// order, so indices are deterministic for a given generator list. Every
/// element remembers the permutation realizing it; labels come from cycle
/// notation.
pub struct GroupTable {
    id: u64,
    name: String,
    degree: usize,
    perms: Vec<Perm>,
    index: HashMap<Perm, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    generator_indices: Vec<usize>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.perms.len())
            .finish_non_exhaustive()
    }
}

impl GroupTable {
    /// Close the generators under multiplication; breadth-first, generators
    /// applied on the right in input order.
    pub fn from_generators(name: &str, degree: usize, generators: Vec<Perm>) -> Result<Arc<GroupTable>> {
        GroupTable::from_generators_capped(name, degree, generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn from_generators_capped(
        name: &str,
        degree: usize,
        generators: Vec<Perm>,
        cap: usize,
    ) -> Result<Arc<GroupTable>> {
        if degree == 0 {
            return Err(Error::EmptyDomain);
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(g.degree(), degree));
            }
        }
        let mut perms = vec![Perm::identity(degree)];
        let mut index = HashMap::new();
        index.insert(perms[0].clone(), 0u32);
        let mut frontier = 0;
        while frontier < perms.len() {
            let current = perms[frontier].clone();
            for g in &generators {
                let next = current.compose(g)?;
                if !index.contains_key(&next) {
                    if perms.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    index.insert(next.clone(), perms.len() as u32);
                    perms.push(next);
                }
            }
            frontier += 1;
        }
        let n = perms.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&perms[a].compose(&perms[b]).unwrap()];
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            inv[a] = index[&perms[a].inverse()];
        }
        let generator_indices = generators.iter().map(|g| index[g] as usize).collect();
        Ok(Arc::new(GroupTable {
            id: NEXT_TABLE_ID.fetch_add(1, Ordering::Relaxed),
            name: name.to_string(),
            degree,
            perms,
            index,
            mul,
            inv,
            generator_indices,
        }))
    }

    /// Direct product acting on the disjoint union of the factors' domains;
    /// the pair `(a, b)` gets index `a * other.order() + b`.
    pub fn direct_product(a: &Arc<GroupTable>, b: &Arc<GroupTable>) -> Arc<GroupTable> {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let mut perms = Vec::with_capacity(n);
        for i in 0..na {
            for j in 0..nb {
                perms.push(a.perms[i].juxtapose(&b.perms[j]));
            }
        }
        let index = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut mul = vec![0u32; n * n];
        for i in 0..na {
            for j in 0..nb {
                for k in 0..na {
                    for l in 0..nb {
                        let x = i * nb + j;
                        let y = k * nb + l;
                        mul[x * n + y] = (a.mul(i, k) * nb + b.mul(j, l)) as u32;
                    }
                }
            }
        }
        let mut inv = vec![0u32; n];
        for i in 0..na {
            for j in 0..nb {
                inv[i * nb + j] = (a.inv(i) * nb + b.inv(j)) as u32;
            }
        }
        Arc::new(GroupTable {
            id: NEXT_TABLE_ID.fetch_add(1, Ordering::Relaxed),
            name: format!("{} x {}", a.name, b.name),
            degree: a.degree + b.degree,
            perms,
            index,
            mul,
            inv,
            generator_indices: Vec::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn conjugate(&self, s: usize, x: usize) -> usize {
        self.mul(self.mul(s, x), self.inv(s))
    }

    pub fn perm(&self, a: usize) -> &Perm {
        &self.perms[a]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    /// Cycle-notation label of an element.
    pub fn label(&self, a: usize) -> String {
        self.perms[a].to_string()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    fn assert_same_table(&self, h: &Subgroup) {
        assert_eq!(
            self.id, h.table_id,
            "subgroup belongs to a different group table"
        );
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup_closure(&[])
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let mut set = Bitset::empty(self.order());
        for i in 0..self.order() {
            set.insert(i);
        }
        Subgroup::new(self.id, set)
    }

    /// Smallest subgroup containing the seed elements.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Subgroup {
        let mut set = Bitset::empty(self.order());
        set.insert(0);
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &g in seed {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    queue.push(y);
                }
            }
        }
        Subgroup::new(self.id, set)
    }

    /// Subgroup from an explicit member set; checks closure.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup> {
        let mut set = Bitset::empty(self.order());
        for &m in members {
            set.insert(m);
        }
        if !set.contains(0) {
            return Err(Error::NoSuchSubgroup("member set misses the identity".into()));
        }
        for a in set.iter() {
            for b in set.iter() {
                if !set.contains(self.mul(a, b)) {
                    return Err(Error::NoSuchSubgroup(format!(
                        "member set not closed: {} * {}",
                        self.label(a),
                        self.label(b)
                    )));
                }
            }
        }
        Ok(Subgroup::new(self.id, set))
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, s: usize) -> Subgroup {
        self.assert_same_table(h);
        let mut set = Bitset::empty(self.order());
        for x in h.set.iter() {
            set.insert(self.conjugate(s, x));
        }
        Subgroup::new(self.id, set)
    }

    /// `N_G(H) = { s : sHs^-1 = H }`.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        self.assert_same_table(h);
        let mut set = Bitset::empty(self.order());
        for s in 0..self.order() {
            if h.set.iter().all(|x| h.set.contains(self.conjugate(s, x))) {
                set.insert(s);
            }
        }
        Subgroup::new(self.id, set)
    }

    /// `C_G(H) = { s : sx = xs for all x in H }`.
    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        self.assert_same_table(h);
        let mut set = Bitset::empty(self.order());
        for s in 0..self.order() {
            if h.set.iter().all(|x| self.mul(s, x) == self.mul(x, s)) {
                set.insert(s);
            }
        }
        Subgroup::new(self.id, set)
    }

    /// `|N_G(Q, P)| = |{ s : sQs^-1 <= P }|`, the transporter count behind the
    /// mark formula.
    pub fn transporter_count(&self, q: &Subgroup, p: &Subgroup) -> u64 {
        self.assert_same_table(q);
        self.assert_same_table(p);
        let mut count = 0;
        for s in 0..self.order() {
            if q.set.iter().all(|x| p.set.contains(self.conjugate(s, x))) {
                count += 1;
            }
        }
        count
    }

    /// Canonical generator list: greedily extend by the smallest member index
    /// not yet generated. Deterministic; used for labels.
    pub fn canonical_generators(&self, h: &Subgroup) -> Vec<usize> {
        self.assert_same_table(h);
        let mut gens = Vec::new();
        let mut have = self.trivial_subgroup();
        for x in h.set.iter() {
            if !have.set.contains(x) {
                gens.push(x);
                have = self.subgroup_closure(&gens);
                if have.order() == h.order() {
                    break;
                }
            }
        }
        gens
    }

    /// Label a subgroup by its canonical generators, e.g. `<(1 3),(2 4)>`.
    pub fn subgroup_label(&self, h: &Subgroup) -> String {
        let gens = self.canonical_generators(h);
        if gens.is_empty() {
            return "<>".to_string();
        }
        let parts: Vec<String> = gens.iter().map(|&g| self.label(g)).collect();
        format!("<{}>", parts.join(","))
    }

    /// Exhaustive group-law check; meant for tests at desk scale.
    pub fn validate(&self) -> bool {
        let n = self.order();
        if self.mul(0, 0) != 0 {
            return false;
        }
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return false;
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return false;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A subgroup as a membership bitset keyed to one `GroupTable`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    table_id: u64,
    set: Bitset,
    order: u32,
}

impl Subgroup {
    fn new(table_id: u64, set: Bitset) -> Subgroup {
        let order = set.len() as u32;
        Subgroup {
            table_id,
            set,
            order,
        }
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn contains(&self, x: usize) -> bool {
        self.set.contains(x)
    }

    pub fn members(&self) -> Vec<usize> {
        self.set.members()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.set.iter()
    }

    pub fn bitset(&self) -> &Bitset {
        &self.set
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        assert_eq!(
            self.table_id, other.table_id,
            "subgroups belong to different group tables"
        );
        self.set.is_subset_of(&other.set)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(
            self.table_id, other.table_id,
            "subgroups belong to different group tables"
        );
        Subgroup::new(self.table_id, self.set.intersection(&other.set))
    }

    pub fn cmp_canonical(&self, other: &Subgroup) -> std::cmp::Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.set.cmp_members(&other.set))
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.set)
    }
}

/// An injective homomorphism `S -> G` recovered by matching permutations on a
/// shared domain.
pub struct Embedding {
    sub: Arc<GroupTable>,
    ambient: Arc<GroupTable>,
    image_of: Vec<u32>,
    preimage_of: Vec<Option<u32>>,
}

impl Embedding {
    pub fn new(sub: Arc<GroupTable>, ambient: Arc<GroupTable>) -> Result<Embedding> {
        if sub.degree() != ambient.degree() {
            return Err(Error::DegreeMismatch(sub.degree(), ambient.degree()));
        }
        let mut image_of = Vec::with_capacity(sub.order());
        let mut preimage_of = vec![None; ambient.order()];
        for (i, p) in sub.perms.iter().enumerate() {
            let j = ambient
                .index_of(p)
                .ok_or_else(|| Error::NotASubgroup(p.to_string()))? as u32;
            image_of.push(j);
            preimage_of[j as usize] = Some(i as u32);
        }
        let e = Embedding {
            sub,
            ambient,
            image_of,
            preimage_of,
        };
        // A matched permutation map is automatically a homomorphism, but the
        // check is cheap and guards table corruption.
        for a in 0..e.sub.order() {
            for b in 0..e.sub.order() {
                if e.image(e.sub.mul(a, b)) != e.ambient.mul(e.image(a), e.image(b)) {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        Ok(e)
    }

    pub fn identity(g: Arc<GroupTable>) -> Embedding {
        let n = g.order();
        Embedding {
            sub: Arc::clone(&g),
            ambient: g,
            image_of: (0..n as u32).collect(),
            preimage_of: (0..n as u32).map(Some).collect(),
        }
    }

    pub fn sub(&self) -> &Arc<GroupTable> {
        &self.sub
    }

    pub fn ambient(&self) -> &Arc<GroupTable> {
        &self.ambient
    }

    pub fn image(&self, sub_elem: usize) -> usize {
        self.image_of[sub_elem] as usize
    }

    pub fn preimage(&self, ambient_elem: usize) -> Option<usize> {
        self.preimage_of[ambient_elem].map(|i| i as usize)
    }

    /// Push a subgroup of `S` forward to a subgroup of `G`.
    pub fn map_subgroup(&self, h: &Subgroup) -> Subgroup {
        assert_eq!(
            h.table_id, self.sub.id,
            "subgroup belongs to a different group table"
        );
        let mut set = Bitset::empty(self.ambient.order());
        for x in h.iter() {
            set.insert(self.image(x));
        }
        Subgroup::new(self.ambient.id, set)
    }

    /// Pull a subgroup of `G` back, provided it lies in the image.
    pub fn preimage_subgroup(&self, h: &Subgroup) -> Option<Subgroup> {
        assert_eq!(
            h.table_id, self.ambient.id,
            "subgroup belongs to a different group table"
        );
        let mut set = Bitset::empty(self.sub.order());
        for x in h.iter() {
            set.insert(self.preimage(x)?);
        }
        Some(Subgroup::new(self.sub.id, set))
    }

    /// Whether `S` is a Sylow `p`-subgroup of `G`.
    pub fn is_sylow(&self, p: u64) -> Result<bool> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut s = self.sub.order() as u64;
        while s.is_multiple_of(p) {
            s /= p;
        }
        if s != 1 {
            return Ok(false);
        }
        let index = (self.ambient.order() / self.sub.order()) as u64;
        Ok(!index.is_multiple_of(p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d8() -> Arc<GroupTable> {
        GroupTable::from_generators(
            "D8",
            4,
            vec![
                Perm::parse("(1 2 3 4)", 4).unwrap(),
                Perm::parse("(1 3)", 4).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn builds_d8_and_validates_laws() {
        let g = d8();
        assert_eq!(g.order(), 8);
        assert!(g.validate());
        assert_eq!(g.label(0), "()");
        // BFS order: e, r, s, r^2, rs, sr, r^3, r^2 s
        assert_eq!(g.label(1), "(1 2 3 4)");
        assert_eq!(g.label(2), "(1 3)");
        assert_eq!(g.label(3), "(1 3)(2 4)");
    }

    #[test]
    fn no_generators_give_the_trivial_group() {
        let g = GroupTable::from_generators("1", 3, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(GroupTable::from_generators("x", 0, vec![]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let gens = vec![
            Perm::parse("(1 2 3 4)", 4).unwrap(),
            Perm::parse("(1 3)", 4).unwrap(),
        ];
        match GroupTable::from_generators_capped("D8", 4, gens, 5) {
            Err(Error::GroupTooLarge { cap: 5 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn closure_of_the_rotation_is_c4() {
        let g = d8();
        let c4 = g.subgroup_closure(&[1]);
        assert_eq!(c4.order(), 4);
        assert!(c4.contains(1) && c4.contains(3) && c4.contains(6));
        let whole = g.subgroup_closure(&[1, 2]);
        assert_eq!(whole.order(), 8);
        assert_eq!(g.subgroup_closure(&[]).order(), 1);
    }

    #[test]
    fn conjugating_a_reflection_gives_the_opposite_reflection() {
        let g = d8();
        let c2 = g.subgroup_closure(&[2]); // <(1 3)>
        let conj = g.conjugate_subgroup(&c2, 1); // by r
        let other = g.subgroup_closure(&[g.index_of(&Perm::parse("(2 4)", 4).unwrap()).unwrap()]);
        assert_eq!(conj, other);
        assert_eq!(g.element_order(1), 4);
    }

    #[test]
    fn normalizer_and_centralizer() {
        let g = d8();
        let c2 = g.subgroup_closure(&[2]);
        let n = g.normalizer(&c2);
        assert_eq!(n.order(), 4); // <r^2, s>
        assert!(c2.is_subgroup_of(&n));
        let z = g.subgroup_closure(&[3]);
        assert_eq!(g.normalizer(&z).order(), 8);
        assert_eq!(g.centralizer(&z).order(), 8);
        // every subgroup normalizes itself
        for seed in 0..g.order() {
            let h = g.subgroup_closure(&[seed]);
            assert!(h.is_subgroup_of(&g.normalizer(&h)));
        }
    }

    #[test]
    fn transporter_counts_match_coset_fixed_points() {
        let g = d8();
        let subs: Vec<Subgroup> = (0..g.order()).map(|s| g.subgroup_closure(&[s])).collect();
        for q in &subs {
            for p in &subs {
                let t = g.transporter_count(q, p);
                assert_eq!(t % p.order() as u64, 0);
                // direct fixed-point count of Q acting on G/P
                let mut fixed = 0u64;
                for x in 0..g.order() {
                    // coset xP is fixed iff x^-1 q x in P for all q in Q
                    if q.iter().all(|u| p.contains(g.mul(g.mul(g.inv(x), u), x))) {
                        fixed += 1;
                    }
                }
                assert_eq!(t / p.order() as u64, fixed / p.order() as u64);
            }
        }
        // trivial q: transporter is all of G
        let trivial = g.trivial_subgroup();
        assert_eq!(g.transporter_count(&trivial, &subs[1]), 8);
    }

    #[test]
    fn conjugation_preserves_order_exhaustively() {
        let g = d8();
        for seed in 0..g.order() {
            let h = g.subgroup_closure(&[seed]);
            for s in 0..g.order() {
                assert_eq!(g.conjugate_subgroup(&h, s).order(), h.order());
            }
        }
    }

    #[test]
    #[should_panic(expected = "different group table")]
    fn cross_table_subgroup_use_is_rejected() {
        let g1 = d8();
        let g2 = d8();
        let h = g1.subgroup_closure(&[1]);
        let _ = g2.normalizer(&h);
    }

    #[test]
    fn embedding_d8_in_s4() {
        let s4 = GroupTable::from_generators(
            "S4",
            4,
            vec![
                Perm::parse("(1 2 3 4)", 4).unwrap(),
                Perm::parse("(1 2)", 4).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s4.order(), 24);
        let e = Embedding::new(d8(), s4).unwrap();
        assert!(e.is_sylow(2).unwrap());
        assert!(!e.is_sylow(3).unwrap());
        assert!(e.is_sylow(4).is_err());
        let z = e.sub().subgroup_closure(&[3]);
        assert_eq!(e.map_subgroup(&z).order(), 2);
    }

    #[test]
    fn embedding_rejects_non_subgroups() {
        let a4 = GroupTable::from_generators(
            "A4",
            4,
            vec![
                Perm::parse("(1 2 3)", 4).unwrap(),
                Perm::parse("(2 3 4)", 4).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(a4.order(), 12);
        assert!(Embedding::new(d8(), a4).is_err());
    }

    #[test]
    fn direct_product_of_d8_with_itself() {
        let g = d8();
        let p = GroupTable::direct_product(&g, &g);
        assert_eq!(p.order(), 64);
        assert!(p.validate());
        assert_eq!(p.degree(), 8);
        // pair indexing: (a, b) at a * 8 + b
        assert_eq!(p.mul(2 * 8 + 1, 3 * 8 + 4), g.mul(2, 3) * 8 + g.mul(1, 4));
        // the diagonal is a subgroup of order 8
        let diag: Vec<usize> = (0..8).map(|a| a * 8 + a).collect();
        let d = p.subgroup_from_members(&diag).unwrap();
        assert_eq!(d.order(), 8);
    }

    #[test]
    fn canonical_generators_are_minimal_and_deterministic() {
        let g = d8();
        let whole = g.full_subgroup();
        let gens = g.canonical_generators(&whole);
        assert_eq!(g.subgroup_closure(&gens).order(), 8);
        assert_eq!(gens, vec![1, 2]);
        assert_eq!(g.subgroup_label(&g.trivial_subgroup()), "<>");
        assert_eq!(g.subgroup_label(&g.subgroup_closure(&[3])), "<(1 3)(2 4)>");
    }
}
