//! Alternating sums over broken chains: the second, independent route to the
//! fused mark matrix and the irreducible basis.
//!
//! A broken chain from Q to the fusion class of P is a sequence of strictly
//! ascending subgroup chains (segments). The first segment starts at Q and may
//! be trivial; every later segment is nonempty and starts at the chosen
//! representative of the fusion class of the previous segment's end; the last
//! end lies in the target class. Its total length is the number of breaks plus
//! the number of inclusions, and each chain contributes its sign `(-1)^length`.

use crate::burnside::BurnsideElement;
use crate::fusion::{self, FusionSystem};
use crate::group::{GroupTable, Subgroup};
use crate::lattice::SubgroupLattice;
use crate::{rat, Error, Rat, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// A graded poset of subgroups of an ambient p-group with a fusion-class
/// structure on top: the interface the broken-chain machinery runs over.
/// Implemented by [`FusionSystem`] (all subgroups of S) and by the poset of
/// twisted diagonal subgroups of S x S used for bisets.
pub trait FusionPoset {
    fn ambient_group(&self) -> &Arc<GroupTable>;
    fn prime(&self) -> u64;
    fn node_count(&self) -> usize;
    fn node_subgroup(&self, node: usize) -> &Subgroup;
    /// Nodes whose subgroups strictly contain this node's, ascending.
    fn strictly_above(&self, node: usize) -> &[usize];
    fn node_of_subgroup(&self, sub: &Subgroup) -> Option<usize>;
    fn f_class_of(&self, node: usize) -> usize;
    fn f_class_count(&self) -> usize;
    /// The chosen representative node of a fusion class.
    fn rep_node(&self, f: usize) -> usize;
    /// Ambient-conjugacy class of a node (among nodes).
    fn s_class_of(&self, node: usize) -> usize;
    /// Weyl group order `|N(P)/P|` of a node in the ambient group.
    fn weyl_order(&self, node: usize) -> u64;

    fn node_order(&self, node: usize) -> u64 {
        self.node_subgroup(node).order() as u64
    }

    /// Node holding the ambient conjugate of a node's subgroup.
    fn conjugate_node(&self, node: usize, g: usize) -> Option<usize> {
        let conj = self
            .ambient_group()
            .conjugate_subgroup(self.node_subgroup(node), g);
        self.node_of_subgroup(&conj)
    }

    /// Least ambient element conjugating node `a` onto node `b`.
    fn least_conjugator(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.ambient_group().order()).find(|&g| self.conjugate_node(a, g) == Some(b))
    }

    /// Whether a node is ambient-conjugate to its fusion class representative.
    fn conjugate_to_rep(&self, node: usize) -> bool {
        self.s_class_of(node) == self.s_class_of(self.rep_node(self.f_class_of(node)))
    }
}

/// A broken chain: segments of strictly ascending node indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BrokenChain {
    pub segments: Vec<Vec<usize>>,
}

impl BrokenChain {
    /// Breaks plus inclusions.
    pub fn length(&self) -> usize {
        self.segments.len() - 1 + self.segments.iter().map(|s| s.len() - 1).sum::<usize>()
    }

    pub fn sign(&self) -> i64 {
        if self.length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn start(&self) -> usize {
        self.segments[0][0]
    }

    pub fn end(&self) -> usize {
        *self.segments.last().unwrap().last().unwrap()
    }
}

/// Which chains enter an alternating sum.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainFilter {
    All,
    /// Chains without starred nodes. Preserves every alternating sum.
    DrabOnly,
    /// Chains whose segments are elementary abelian normal extensions
    /// end-to-end. Also preserves every alternating sum.
    ElabOnly,
    /// Both restrictions at once; does NOT preserve the sums in general and
    /// exists as a negative control.
    DrabElab,
}

/// The two positional flavors of a starred node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StarType {
    /// Interior of a segment, or the start of a nontrivial first segment.
    One,
    /// End of a segment that is not the last.
    Two,
}

/// Enumerate every broken chain from `from` to the fusion class `target`,
/// in a deterministic order. With `tethered`, the first segment is pinned
/// trivial, which computes marks instead of basis coefficients.
pub fn broken_chains<P: FusionPoset + ?Sized>(
    poset: &P,
    from: usize,
    target: usize,
    tethered: bool,
) -> Vec<BrokenChain> {
    let target_order = poset.node_order(poset.rep_node(target));
    let mut out = Vec::new();
    let mut chain = BrokenChain {
        segments: vec![vec![from]],
    };
    grow(poset, target, target_order, tethered, &mut chain, &mut out);
    out
}

fn grow<P: FusionPoset + ?Sized>(
    poset: &P,
    target: usize,
    target_order: u64,
    tethered: bool,
    chain: &mut BrokenChain,
    out: &mut Vec<BrokenChain>,
) {
    let end = chain.end();
    if poset.f_class_of(end) == target {
        out.push(chain.clone());
    }
    if poset.node_order(end) >= target_order {
        return;
    }
    if !(tethered && chain.segments.len() == 1) {
        for &j in poset.strictly_above(end) {
            chain.segments.last_mut().unwrap().push(j);
            grow(poset, target, target_order, tethered, chain, out);
            chain.segments.last_mut().unwrap().pop();
        }
    }
    // break: the next segment restarts at the representative of the current
    // end's fusion class and must grow at least once
    let rep = poset.rep_node(poset.f_class_of(end));
    chain.segments.push(vec![rep]);
    for &j in poset.strictly_above(rep) {
        chain.segments.last_mut().unwrap().push(j);
        grow(poset, target, target_order, tethered, chain, out);
        chain.segments.last_mut().unwrap().pop();
    }
    chain.segments.pop();
}

/// The smallest starred node of a chain as `(segment, position, node, type)`,
/// or None for a drab chain. Starred means: positioned as a non-boundary node
/// (interior, start of a growing first segment, or non-final segment end) and
/// ambient-conjugate to its fusion class representative. Smallest is by
/// subgroup order, ties broken by earliest position.
pub fn sparkle<P: FusionPoset + ?Sized>(
    poset: &P,
    chain: &BrokenChain,
) -> Option<(usize, usize, usize, StarType)> {
    let k = chain.segments.len() - 1;
    let mut best: Option<(u64, usize, usize, usize, StarType)> = None;
    for (i, seg) in chain.segments.iter().enumerate() {
        let n_i = seg.len() - 1;
        for (j, &node) in seg.iter().enumerate() {
            let flavor = if (j > 0 && j < n_i) || (i == 0 && j == 0 && n_i > 0) {
                StarType::One
            } else if j == n_i && i < k {
                StarType::Two
            } else {
                continue;
            };
            if !poset.conjugate_to_rep(node) {
                continue;
            }
            let key = (poset.node_order(node), i, j, node, flavor);
            if best.is_none_or(|b| (key.0, key.1, key.2) < (b.0, b.1, b.2)) {
                best = Some(key);
            }
        }
    }
    best.map(|(_, i, j, node, flavor)| (i, j, node, flavor))
}

/// Whether every segment runs from its start to its end through an
/// elementary abelian normal extension (trivial segments pass vacuously).
pub fn chain_is_elab<P: FusionPoset + ?Sized>(poset: &P, chain: &BrokenChain) -> bool {
    chain.segments.iter().all(|seg| {
        seg.len() == 1 || elab_extension(poset, seg[0], *seg.last().unwrap())
    })
}

/// `b` normalizes `a`, with `b/a` elementary abelian for the poset's prime.
pub fn elab_extension<P: FusionPoset + ?Sized>(poset: &P, a: usize, b: usize) -> bool {
    let g = poset.ambient_group();
    let sa = poset.node_subgroup(a);
    let sb = poset.node_subgroup(b);
    if a == b || !sa.is_subgroup_of(sb) {
        return false;
    }
    let p = poset.prime() as usize;
    for x in sb.iter() {
        if g.conjugate_subgroup(sa, x).bitset() != sa.bitset() {
            return false;
        }
        let mut power = 0;
        for _ in 0..p {
            power = g.mul(power, x);
        }
        if !sa.contains(power) {
            return false;
        }
        for y in sb.iter() {
            let commutator = g.mul(
                g.mul(g.inv(x), g.inv(y)),
                g.mul(x, y),
            );
            if !sa.contains(commutator) {
                return false;
            }
        }
    }
    true
}

pub fn passes_filter<P: FusionPoset + ?Sized>(
    poset: &P,
    chain: &BrokenChain,
    filter: ChainFilter,
) -> bool {
    match filter {
        ChainFilter::All => true,
        ChainFilter::DrabOnly => sparkle(poset, chain).is_none(),
        ChainFilter::ElabOnly => chain_is_elab(poset, chain),
        ChainFilter::DrabElab => {
            sparkle(poset, chain).is_none() && chain_is_elab(poset, chain)
        }
    }
}

/// Alternating sum of the filtered chains.
pub fn signed_chain_sum<P: FusionPoset + ?Sized>(
    poset: &P,
    from: usize,
    target: usize,
    filter: ChainFilter,
    tethered: bool,
) -> i64 {
    broken_chains(poset, from, target, tethered)
        .iter()
        .filter(|c| passes_filter(poset, c, filter))
        .map(BrokenChain::sign)
        .sum()
}

/// Coefficient of `[S/Q]` in `alpha_P` via chains:
/// `(|W P*| / |W Q|) * sum of signs`.
pub fn coefficient_via_chains<P: FusionPoset + ?Sized>(
    poset: &P,
    from: usize,
    target: usize,
    filter: ChainFilter,
) -> Rat {
    let w_target = poset.weyl_order(poset.rep_node(target)) as i64;
    let w_from = poset.weyl_order(from) as i64;
    rat(w_target, w_from) * rat(signed_chain_sum(poset, from, target, filter, false), 1)
}

/// Fused mark `|alpha_P fixed by Q*|` via tethered chains:
/// `|W P*| * sum of signs`.
pub fn fmark_via_chains<P: FusionPoset + ?Sized>(poset: &P, from: usize, target: usize) -> i64 {
    let w_target = poset.weyl_order(poset.rep_node(target)) as i64;
    w_target * signed_chain_sum(poset, poset.rep_node(from), target, ChainFilter::All, true)
}

/// The basis element for a fusion class by the chain method: one coefficient
/// per S-class, gated exactly like the matrix route.
pub fn alpha_via_chains(
    fs: &FusionSystem,
    target: usize,
    filter: ChainFilter,
) -> Result<BurnsideElement> {
    let lattice: &SubgroupLattice = fs.lattice();
    let coeffs: Vec<Rat> = (0..lattice.class_count())
        .map(|sc| coefficient_via_chains(fs, lattice.class(sc).rep, target, filter))
        .collect();
    fusion::gate_alpha(lattice, &fs.label_of_class(target), coeffs)
}

/// Tally of the pairing that cancels starred chains against each other.
#[derive(Debug, PartialEq, Eq)]
pub struct CancellationReport {
    pub chains: usize,
    pub drab: usize,
    pub type_one: usize,
    pub type_two: usize,
}

/// Verify the cancellation argument behind the drab restriction: splitting a
/// chain at its smallest starred node (type one) and merging at it (type two)
/// are mutually inverse, length-shifting bijections, so starred chains cancel
/// pairwise and only drab chains survive the alternating sum.
pub fn verify_cancellation<P: FusionPoset + ?Sized>(
    poset: &P,
    from: usize,
    target: usize,
) -> Result<CancellationReport> {
    let all = broken_chains(poset, from, target, false);
    let index: HashMap<&BrokenChain, usize> =
        all.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut drab = 0usize;
    let mut ones: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut twos: Vec<usize> = Vec::new();
    for (ci, chain) in all.iter().enumerate() {
        match sparkle(poset, chain) {
            None => drab += 1,
            Some((i, j, node, StarType::One)) => ones.push((ci, i, j, node)),
            Some((_, _, _, StarType::Two)) => twos.push(ci),
        }
    }
    let mut hit = vec![false; all.len()];
    for &(ci, i, j, node) in &ones {
        let chain = &all[ci];
        let split = split_at(poset, chain, i, j, node)?;
        let &si = index.get(&split).ok_or_else(|| {
            Error::Cancellation(format!("split of chain {ci} is not an enumerated chain"))
        })?;
        if split.length() != chain.length() + 1 {
            return Err(Error::Cancellation(format!(
                "split of chain {ci} does not lengthen it by one"
            )));
        }
        match sparkle(poset, &split) {
            Some((mi, _, mnode, StarType::Two)) if mnode == node => {
                let merged = merge_at(poset, &split, mi)?;
                if &merged != chain {
                    return Err(Error::Cancellation(format!(
                        "merging the split of chain {ci} does not restore it"
                    )));
                }
            }
            other => {
                return Err(Error::Cancellation(format!(
                    "split of chain {ci} has sparkle {other:?}, expected type two at the same node"
                )));
            }
        }
        if hit[si] {
            return Err(Error::Cancellation(format!(
                "two chains split onto chain {si}"
            )));
        }
        hit[si] = true;
    }
    for &ci in &twos {
        if !hit[ci] {
            return Err(Error::Cancellation(format!(
                "type-two chain {ci} is not the split of any chain"
            )));
        }
    }
    if ones.len() != twos.len() {
        return Err(Error::Cancellation(format!(
            "{} type-one chains vs {} type-two chains",
            ones.len(),
            twos.len()
        )));
    }
    Ok(CancellationReport {
        chains: all.len(),
        drab,
        type_one: ones.len(),
        type_two: twos.len(),
    })
}

/// Split a chain at a type-one starred node: cut its segment there and
/// conjugate the upper part onto the class representative.
fn split_at<P: FusionPoset + ?Sized>(
    poset: &P,
    chain: &BrokenChain,
    i: usize,
    j: usize,
    node: usize,
) -> Result<BrokenChain> {
    let rep = poset.rep_node(poset.f_class_of(node));
    let s = poset
        .least_conjugator(node, rep)
        .ok_or_else(|| Error::Cancellation("starred node has no conjugator onto its representative".into()))?;
    let seg = &chain.segments[i];
    let head = seg[..=j].to_vec();
    let tail: Vec<usize> = seg[j..]
        .iter()
        .map(|&n| {
            poset
                .conjugate_node(n, s)
                .expect("conjugates of nodes are nodes")
        })
        .collect();
    debug_assert_eq!(tail[0], rep);
    let mut segments = chain.segments[..i].to_vec();
    segments.push(head);
    segments.push(tail);
    segments.extend_from_slice(&chain.segments[i + 1..]);
    Ok(BrokenChain { segments })
}

/// Merge a chain at a type-two starred node: conjugate the following segment
/// back onto the node and graft it on, removing the break.
fn merge_at<P: FusionPoset + ?Sized>(
    poset: &P,
    chain: &BrokenChain,
    i: usize,
) -> Result<BrokenChain> {
    let node = *chain.segments[i].last().unwrap();
    let rep = chain.segments[i + 1][0];
    debug_assert_eq!(rep, poset.rep_node(poset.f_class_of(node)));
    let s = poset
        .least_conjugator(node, rep)
        .ok_or_else(|| Error::Cancellation("starred node has no conjugator onto its representative".into()))?;
    let s_inv = poset.ambient_group().inv(s);
    let mut merged = chain.segments[i].clone();
    for &n in &chain.segments[i + 1][1..] {
        merged.push(
            poset
                .conjugate_node(n, s_inv)
                .expect("conjugates of nodes are nodes"),
        );
    }
    let mut segments = chain.segments[..i].to_vec();
    segments.push(merged);
    segments.extend_from_slice(&chain.segments[i + 2..]);
    Ok(BrokenChain { segments })
}

impl FusionPoset for FusionSystem {
    fn ambient_group(&self) -> &Arc<GroupTable> {
        self.lattice().group()
    }

    fn prime(&self) -> u64 {
        FusionSystem::prime(self)
    }

    fn node_count(&self) -> usize {
        self.lattice().len()
    }

    fn node_subgroup(&self, node: usize) -> &Subgroup {
        self.lattice().subgroup(node)
    }

    fn strictly_above(&self, node: usize) -> &[usize] {
        FusionSystem::strictly_above(self, node)
    }

    fn node_of_subgroup(&self, sub: &Subgroup) -> Option<usize> {
        self.lattice().index_of(sub)
    }

    fn f_class_of(&self, node: usize) -> usize {
        self.f_class_of_subgroup(node)
    }

    fn f_class_count(&self) -> usize {
        self.class_count()
    }

    fn rep_node(&self, f: usize) -> usize {
        self.class(f).rep
    }

    fn s_class_of(&self, node: usize) -> usize {
        self.lattice().class_of(node)
    }

    fn weyl_order(&self, node: usize) -> u64 {
        self.lattice()
            .class(self.lattice().class_of(node))
            .weyl_order
    }
}
