//! Characteristic bisets: the broken-chain machinery applied inside the poset
//! of twisted diagonal subgroups of S x S.
//!
//! A twisted diagonal `Delta(P, phi) = {(phi(x), x) : x in P}` for a fusion
//! morphism `phi: P -> S` is a subgroup of S x S. These form a downward-closed
//! family: every chain below one stays inside the family, so the alternating
//! sums that produce the irreducible basis element of the top class can run
//! entirely inside this small poset. The result is the minimal characteristic
//! biset of the fusion system.

use crate::bitset::Bitset;
use crate::chains::{self, ChainFilter, FusionPoset};
use crate::fusion::FusionSystem;
use crate::group::{GroupTable, Subgroup};
use crate::{Error, Rat, Result};
use num::traits::Zero;
use std::collections::HashMap;
use std::sync::Arc;

/// One S x S-conjugacy class of twisted diagonals.
pub struct SxSClass {
    /// Least node index in the class.
    pub rep: usize,
    /// All node indices, ascending.
    pub members: Vec<usize>,
    pub weyl_order: u64,
}

/// The poset of all twisted diagonal subgroups of S x S for a fusion system,
/// with its conjugacy classes and fusion-class structure.
pub struct DiagonalPoset {
    fusion: Arc<FusionSystem>,
    product: Arc<GroupTable>,
    nodes: Vec<Subgroup>,
    node_index: HashMap<Bitset, usize>,
    above: Vec<Vec<usize>>,
    /// S-lattice index of the domain of each node's morphism.
    domain: Vec<usize>,
    f_class: Vec<usize>,
    s_class: Vec<usize>,
    s_classes: Vec<SxSClass>,
    /// Node of `Delta(P*, id)` for each fusion class.
    f_reps: Vec<usize>,
}

impl DiagonalPoset {
    /// Enumerate every twisted diagonal `Delta(P, phi)` for every subgroup P
    /// of S and every fusion morphism `phi: P -> S`. Requires the fusion
    /// system to carry an ambient backend.
    pub fn build(fusion: &Arc<FusionSystem>) -> Result<DiagonalPoset> {
        let lattice = fusion.lattice();
        let s = lattice.group();
        let n = s.order();
        let product = GroupTable::direct_product(s, s);
        let mut raw: Vec<(Subgroup, usize)> = Vec::new();
        for p_idx in 0..lattice.len() {
            let members = lattice.subgroup(p_idx).members();
            for hom in fusion.homs_to_s(p_idx)? {
                let pairs: Vec<usize> = members
                    .iter()
                    .zip(hom)
                    .map(|(&x, &fx)| fx * n + x)
                    .collect();
                let sub = product
                    .subgroup_from_members(&pairs)
                    .expect("a morphism graph is a subgroup of S x S");
                raw.push((sub, p_idx));
            }
        }
        raw.sort_by(|a, b| a.0.cmp_canonical(&b.0));
        let nodes: Vec<Subgroup> = raw.iter().map(|(s, _)| s.clone()).collect();
        let domain: Vec<usize> = raw.iter().map(|(_, d)| *d).collect();
        let node_index: HashMap<Bitset, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.bitset().clone(), i))
            .collect();
        assert_eq!(node_index.len(), nodes.len(), "distinct morphism graphs");
        let above: Vec<Vec<usize>> = (0..nodes.len())
            .map(|i| {
                (0..nodes.len())
                    .filter(|&j| j != i && nodes[i].is_subgroup_of(&nodes[j]))
                    .collect()
            })
            .collect();
        let f_class: Vec<usize> = domain
            .iter()
            .map(|&d| fusion.f_class_of_subgroup(d))
            .collect();
        let mut s_class = vec![usize::MAX; nodes.len()];
        let mut s_classes = Vec::new();
        for i in 0..nodes.len() {
            if s_class[i] != usize::MAX {
                continue;
            }
            let mut members = Vec::new();
            for t in 0..product.order() {
                let conj = product.conjugate_subgroup(&nodes[i], t);
                let j = *node_index
                    .get(conj.bitset())
                    .expect("conjugates of twisted diagonals are twisted diagonals");
                if s_class[j] == usize::MAX {
                    s_class[j] = s_classes.len();
                    members.push(j);
                }
            }
            members.sort_unstable();
            debug_assert_eq!(members[0], i);
            let normalizer = product.normalizer(&nodes[i]).order() as u64;
            s_classes.push(SxSClass {
                rep: i,
                weyl_order: normalizer / nodes[i].order() as u64,
                members,
            });
        }
        let f_reps: Vec<usize> = (0..fusion.class_count())
            .map(|f| {
                let rep_members = lattice.subgroup(fusion.class(f).rep).members();
                let pairs: Vec<usize> = rep_members.iter().map(|&x| x * n + x).collect();
                let sub = product
                    .subgroup_from_members(&pairs)
                    .expect("the identity diagonal is a subgroup");
                *node_index
                    .get(sub.bitset())
                    .expect("the identity diagonal of a representative is a node")
            })
            .collect();
        for (f, &r) in f_reps.iter().enumerate() {
            debug_assert_eq!(f_class[r], f);
        }
        Ok(DiagonalPoset {
            fusion: Arc::clone(fusion),
            product,
            nodes,
            node_index,
            above,
            domain,
            f_class,
            s_class,
            s_classes,
            f_reps,
        })
    }

    pub fn fusion(&self) -> &Arc<FusionSystem> {
        &self.fusion
    }

    pub fn product(&self) -> &Arc<GroupTable> {
        &self.product
    }

    pub fn class_count(&self) -> usize {
        self.s_classes.len()
    }

    pub fn class(&self, c: usize) -> &SxSClass {
        &self.s_classes[c]
    }

    /// S-lattice index of the domain of a node's morphism.
    pub fn domain_of(&self, node: usize) -> usize {
        self.domain[node]
    }

    /// The morphism of a node, as images aligned with its domain's members.
    pub fn morphism_of(&self, node: usize) -> Vec<usize> {
        let n = self.fusion.lattice().group().order();
        let mut pairs: Vec<(usize, usize)> = self.nodes[node]
            .members()
            .into_iter()
            .map(|pair| (pair % n, pair / n))
            .collect();
        pairs.sort_unstable();
        pairs.into_iter().map(|(_, fx)| fx).collect()
    }
}

impl FusionPoset for DiagonalPoset {
    fn ambient_group(&self) -> &Arc<GroupTable> {
        &self.product
    }

    fn prime(&self) -> u64 {
        self.fusion.prime()
    }

    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn node_subgroup(&self, node: usize) -> &Subgroup {
        &self.nodes[node]
    }

    fn strictly_above(&self, node: usize) -> &[usize] {
        &self.above[node]
    }

    fn node_of_subgroup(&self, sub: &Subgroup) -> Option<usize> {
        self.node_index.get(sub.bitset()).copied()
    }

    fn f_class_of(&self, node: usize) -> usize {
        self.f_class[node]
    }

    fn f_class_count(&self) -> usize {
        self.fusion.class_count()
    }

    fn rep_node(&self, f: usize) -> usize {
        self.f_reps[f]
    }

    fn s_class_of(&self, node: usize) -> usize {
        self.s_class[node]
    }

    fn weyl_order(&self, node: usize) -> u64 {
        self.s_classes[self.s_class[node]].weyl_order
    }
}

/// An S-S-biset supported on twisted diagonals: one integer coefficient per
/// S x S-class of the diagonal poset.
pub struct CharacteristicBiset {
    poset: Arc<DiagonalPoset>,
    coeffs: Vec<i64>,
}

impl CharacteristicBiset {
    pub fn poset(&self) -> &Arc<DiagonalPoset> {
        &self.poset
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// Nonzero `(class, coefficient)` pairs, ascending by class.
    pub fn support(&self) -> Vec<(usize, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect()
    }

    /// Total number of points of the biset.
    pub fn points(&self) -> i64 {
        let t = self.poset.product().order() as i64;
        self.support()
            .iter()
            .map(|&(c, k)| k * (t / self.poset.class(c).rep_order(&self.poset)))
            .sum()
    }

    /// `|Omega| / |S|`, an integer because every stabilizer lies in a copy
    /// of a subgroup of S.
    pub fn points_over_s(&self) -> i64 {
        let s = self.poset.fusion().lattice().group().order() as i64;
        self.support()
            .iter()
            .map(|&(c, k)| k * (s / self.poset.class(c).rep_order(&self.poset)))
            .sum()
    }

    /// The same biset with every coefficient scaled; for probing the
    /// minimality and coprimality properties.
    pub fn scaled(&self, k: i64) -> CharacteristicBiset {
        CharacteristicBiset {
            poset: Arc::clone(&self.poset),
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// Mark of the biset at a node: fixed points of the diagonal acting on
    /// the disjoint union of transitive pieces.
    pub fn mark_at(&self, node: usize) -> i64 {
        let product = self.poset.product();
        let q = self.poset.node_subgroup(node);
        self.support()
            .iter()
            .map(|&(c, k)| {
                let rep = self.poset.node_subgroup(self.poset.class(c).rep);
                let t = product.transporter_count(q, rep) as i64;
                k * (t / rep.order() as i64)
            })
            .sum()
    }
}

impl SxSClass {
    fn rep_order(&self, poset: &DiagonalPoset) -> i64 {
        poset.node_subgroup(self.rep).order() as i64
    }
}

/// Compute the minimal characteristic biset: the irreducible basis element of
/// the class of `Delta(S, id)`, with every coefficient obtained from
/// alternating sums over broken chains inside the diagonal poset.
pub fn minimal_biset(fusion: &Arc<FusionSystem>) -> Result<CharacteristicBiset> {
    let poset = Arc::new(DiagonalPoset::build(fusion)?);
    let top = fusion.f_class_of_subgroup(fusion.lattice().top());
    let mut coeffs = Vec::with_capacity(poset.class_count());
    for c in 0..poset.class_count() {
        let rep = poset.class(c).rep;
        let value = chains::coefficient_via_chains(&*poset, rep, top, ChainFilter::All);
        if !value.is_integer() || value < Rat::zero() {
            return Err(Error::BisetCoefficient {
                label: poset.product().subgroup_label(poset.node_subgroup(rep)),
                value,
            });
        }
        coeffs.push(value.to_integer());
    }
    Ok(CharacteristicBiset { poset, coeffs })
}

/// Verdicts for the three defining properties of a characteristic biset.
#[derive(Debug, PartialEq, Eq)]
pub struct CharacteristicReport {
    /// Every transitive piece is a twisted diagonal of a fusion morphism.
    pub twisted_diagonal: bool,
    /// Marks are constant on the fusion classes of twisted diagonals.
    pub stable: bool,
    /// `|Omega| / |S|` is prime to p.
    pub coprime: bool,
}

impl CharacteristicReport {
    pub fn is_characteristic(&self) -> bool {
        self.twisted_diagonal && self.stable && self.coprime
    }
}

/// Check the three defining properties directly, from the definitions.
pub fn verify_characteristic(biset: &CharacteristicBiset) -> CharacteristicReport {
    let poset = biset.poset();
    let fusion = poset.fusion();
    let twisted_diagonal = biset.support().iter().all(|&(c, _)| {
        poset.class(c).members.iter().all(|&node| {
            let domain = poset.domain_of(node);
            let morphism = poset.morphism_of(node);
            fusion
                .homs_to_s(domain)
                .map(|homs| homs.contains(&morphism))
                .unwrap_or(false)
        })
    });
    let mut stable = true;
    for f in 0..poset.f_class_count() {
        let marks: Vec<i64> = (0..poset.node_count())
            .filter(|&node| poset.f_class_of(node) == f)
            .map(|node| biset.mark_at(node))
            .collect();
        if marks.windows(2).any(|w| w[0] != w[1]) {
            stable = false;
        }
    }
    let coprime = biset.points_over_s() % fusion.prime() as i64 != 0;
    CharacteristicReport {
        twisted_diagonal,
        stable,
        coprime,
    }
}

/// The largest subgroup normal in the whole fusion system: every fusion
/// morphism extends to one that fixes it. Found by brute-force extension
/// tests over the ambient group, largest candidates first.
pub fn op_subgroup(fusion: &FusionSystem) -> Result<usize> {
    let backend = fusion.ambient().ok_or(Error::NoAmbientBackend)?;
    let lattice = fusion.lattice();
    let g = &backend.group;
    let emb = &backend.embedding;
    let s_order = lattice.group().order() as u64;
    'candidate: for p_idx in (0..lattice.len()).rev() {
        if lattice
            .class(lattice.class_of(p_idx))
            .normalizer_order
            != s_order
        {
            continue;
        }
        let p_image = emb.map_subgroup(lattice.subgroup(p_idx));
        for q_idx in 0..lattice.len() {
            let members = lattice.subgroup(q_idx).members();
            for hom in fusion.homs_to_s(q_idx)? {
                let extends = (0..g.order()).any(|h| {
                    members
                        .iter()
                        .zip(hom)
                        .all(|(&x, &fx)| g.conjugate(h, emb.image(x)) == emb.image(fx))
                        && g.conjugate_subgroup(&p_image, h).bitset() == p_image.bitset()
                });
                if !extends {
                    continue 'candidate;
                }
            }
        }
        return Ok(p_idx);
    }
    unreachable!("the trivial subgroup is normal in every fusion system");
}

/// Whether every transitive piece of the biset has its domain above the
/// given subgroup; the minimal characteristic biset always contains the
/// normal subgroup `O_p` this way.
pub fn check_op_containment(biset: &CharacteristicBiset, op: usize) -> bool {
    let poset = biset.poset();
    let lattice = poset.fusion().lattice();
    let op_sub = lattice.subgroup(op);
    biset.support().iter().all(|&(c, _)| {
        let node = poset.class(c).rep;
        op_sub.is_subgroup_of(lattice.subgroup(poset.domain_of(node)))
    })
}
