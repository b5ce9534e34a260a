//! Fusion systems on a finite p-group S: conjugacy classes coarsened by an
//! ambient overgroup or an explicit partition, the fused Mobius/mark matrix
//! pair over fusion classes, and the canonical irreducible basis `alpha_P`
//! computed by exact matrix inversion.

use crate::burnside::{self, BurnsideElement, MarkVector};
use crate::group::{is_prime, Embedding, GroupTable};
use crate::lattice::SubgroupLattice;
use crate::matrix::SquareMat;
use crate::{rat, Error, Rat, Result};
use num::traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// One fusion class: a union of S-conjugacy classes of subgroups.
pub struct FClass {
    /// Lattice index of the chosen fully normalized representative.
    pub rep: usize,
    /// Constituent S-class indices, ascending.
    pub s_classes: Vec<usize>,
    pub subgroup_order: u64,
}

/// The overgroup inducing the fusion, with the embedding of S into it.
pub struct AmbientBackend {
    pub group: Arc<GroupTable>,
    pub embedding: Embedding,
}

/// Matrices over fusion classes, ordered by ascending subgroup order.
/// `mu_f` sums the modified Mobius function over each fusion class,
/// `zeta_f` is its inverse, `fmark(Q, P) = |alpha_P fixed by Q|`, and
/// `fmob = fmark^-1` exactly.
pub struct FMatrices {
    pub mu_f: SquareMat<i64>,
    pub zeta_f: SquareMat<i64>,
    pub fmark: SquareMat<i64>,
    pub fmob: SquareMat<Rat>,
}

/// A fusion system on the group of a subgroup lattice.
pub struct FusionSystem {
    lattice: Arc<SubgroupLattice>,
    prime: u64,
    f_of_s: Vec<usize>,
    classes: Vec<FClass>,
    ambient: Option<AmbientBackend>,
    /// Morphisms from each subgroup into S, as image lists aligned with the
    /// subgroup's member list; present only with an ambient backend.
    homs: Option<Vec<Vec<Vec<usize>>>>,
    warnings: Vec<String>,
    matrices: OnceLock<FMatrices>,
    above: OnceLock<Vec<Vec<usize>>>,
}

impl FusionSystem {
    /// The fusion system `F_S(G)` induced on `s` by conjugation in `ambient`.
    /// `s` must be a p-group; a non-Sylow `s` is an error unless
    /// `allow_non_sylow` is set, which downgrades it to a warning.
    pub fn from_ambient(
        s: &Arc<GroupTable>,
        ambient: &Arc<GroupTable>,
        prime: u64,
        allow_non_sylow: bool,
    ) -> Result<FusionSystem> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let embedding = Embedding::new(Arc::clone(s), Arc::clone(ambient))?;
        check_p_group(s.order() as u64, prime)?;
        let mut warnings = Vec::new();
        if !embedding.is_sylow(prime)? {
            let index = (ambient.order() / s.order()) as u64;
            if allow_non_sylow {
                warnings.push(format!(
                    "subgroup of index {index} is not Sylow at p = {prime}; \
                     the fusion system need not be saturated"
                ));
            } else {
                return Err(Error::NotSylow {
                    index,
                    p: prime,
                });
            }
        }
        let lattice = Arc::new(SubgroupLattice::enumerate(Arc::clone(s))?);
        let g = ambient;
        // Group S-classes by the canonical key of the ambient orbit of their
        // representative's image.
        let mut key_to_block: HashMap<crate::bitset::Bitset, Vec<usize>> = HashMap::new();
        let mut keys_in_order = Vec::new();
        for sc in 0..lattice.class_count() {
            let image = embedding.map_subgroup(lattice.subgroup(lattice.class(sc).rep));
            let mut best = image.bitset().clone();
            for t in 0..g.order() {
                let conj = g.conjugate_subgroup(&image, t);
                if conj.bitset().cmp_members(&best) == std::cmp::Ordering::Less {
                    best = conj.bitset().clone();
                }
            }
            let block = key_to_block.entry(best.clone()).or_insert_with(|| {
                keys_in_order.push(best);
                Vec::new()
            });
            block.push(sc);
        }
        let blocks: Vec<Vec<usize>> = keys_in_order
            .iter()
            .map(|k| key_to_block.remove(k).unwrap())
            .collect();
        let (classes, f_of_s) = assemble_classes(&lattice, blocks);
        let homs = Some(all_homs(&lattice, &embedding));
        Ok(FusionSystem {
            lattice,
            prime,
            f_of_s,
            classes,
            ambient: Some(AmbientBackend {
                group: Arc::clone(ambient),
                embedding,
            }),
            homs,
            warnings,
            matrices: OnceLock::new(),
            above: OnceLock::new(),
        })
    }

    /// A fusion system given directly by a partition of the S-classes.
    /// `blocks` lists the fused S-class indices; classes not mentioned stay
    /// singletons. Blocks must be disjoint and constant on subgroup order.
    /// No saturation check is performed: downstream computations surface
    /// inconsistent partitions through diagnostics instead.
    pub fn from_partition(
        lattice: Arc<SubgroupLattice>,
        prime: u64,
        blocks: &[Vec<usize>],
    ) -> Result<FusionSystem> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        check_p_group(lattice.group().order() as u64, prime)?;
        let n = lattice.class_count();
        let mut assigned = vec![false; n];
        let mut full: Vec<Vec<usize>> = Vec::new();
        for block in blocks {
            if block.is_empty() {
                return Err(Error::BadPartition("empty block".into()));
            }
            let mut sorted = block.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != block.len() {
                return Err(Error::BadPartition("repeated class inside a block".into()));
            }
            for &sc in &sorted {
                if sc >= n {
                    return Err(Error::BadPartition(format!(
                        "class index {sc} out of range (the lattice has {n} classes)"
                    )));
                }
                if assigned[sc] {
                    return Err(Error::BadPartition(format!(
                        "class {sc} appears in two blocks"
                    )));
                }
                assigned[sc] = true;
                if lattice.class(sc).subgroup_order != lattice.class(sorted[0]).subgroup_order {
                    return Err(Error::BadPartition(format!(
                        "block mixes subgroup orders {} and {}",
                        lattice.class(sorted[0]).subgroup_order,
                        lattice.class(sc).subgroup_order
                    )));
                }
            }
            full.push(sorted);
        }
        for (sc, taken) in assigned.iter().enumerate() {
            if !taken {
                full.push(vec![sc]);
            }
        }
        let (classes, f_of_s) = assemble_classes(&lattice, full);
        Ok(FusionSystem {
            lattice,
            prime,
            f_of_s,
            classes,
            ambient: None,
            homs: None,
            warnings: Vec::new(),
            matrices: OnceLock::new(),
            above: OnceLock::new(),
        })
    }

    /// The trivial fusion system `F_S(S)`: every S-class its own fusion class.
    pub fn trivial(lattice: Arc<SubgroupLattice>, prime: u64) -> Result<FusionSystem> {
        FusionSystem::from_partition(lattice, prime, &[])
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, f: usize) -> &FClass {
        &self.classes[f]
    }

    pub fn classes(&self) -> &[FClass] {
        &self.classes
    }

    /// Fusion class of an S-class.
    pub fn f_class_of_s_class(&self, sc: usize) -> usize {
        self.f_of_s[sc]
    }

    /// Fusion class of a subgroup by lattice index.
    pub fn f_class_of_subgroup(&self, i: usize) -> usize {
        self.f_of_s[self.lattice.class_of(i)]
    }

    pub fn ambient(&self) -> Option<&AmbientBackend> {
        self.ambient.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// All fusion-system morphisms from a subgroup into S, each given by the
    /// images of the subgroup's member list, sorted for determinism.
    /// Requires an ambient backend.
    pub fn homs_to_s(&self, sub: usize) -> Result<&[Vec<usize>]> {
        match &self.homs {
            Some(h) => Ok(&h[sub]),
            None => Err(Error::NoAmbientBackend),
        }
    }

    pub fn matrices(&self) -> &FMatrices {
        self.matrices.get_or_init(|| self.compute_matrices())
    }

    fn compute_matrices(&self) -> FMatrices {
        let k = self.classes.len();
        let tables = burnside::tables(&self.lattice);
        let mut mu_f = SquareMat::zero(k);
        for (i, ci) in self.classes.iter().enumerate() {
            let row = self.lattice.class_of(ci.rep);
            for (j, cj) in self.classes.iter().enumerate() {
                let total: i64 = cj
                    .s_classes
                    .iter()
                    .map(|&sc| *tables.mu_tilde().get(row, sc))
                    .sum();
                mu_f.set(i, j, total);
            }
        }
        let zeta_f = mu_f.unitriangular_inverse();
        let mut fmark = SquareMat::zero(k);
        let mut fmob = SquareMat::zero(k);
        for i in 0..k {
            let wi = self.weyl_of_class(i) as i64;
            for j in 0..k {
                let wj = self.weyl_of_class(j) as i64;
                fmark.set(i, j, zeta_f.get(i, j) * wj);
                fmob.set(i, j, rat(*mu_f.get(i, j), wi));
            }
        }
        FMatrices {
            mu_f,
            zeta_f,
            fmark,
            fmob,
        }
    }

    /// `|W_S P*|` for the chosen representative of a fusion class.
    pub fn weyl_of_class(&self, f: usize) -> u64 {
        self.lattice
            .class(self.lattice.class_of(self.classes[f].rep))
            .weyl_order
    }

    /// The mark vector over S-classes of `alpha` for fusion class `f`:
    /// the fused mark spread back to every constituent S-class.
    pub fn stable_mark_vector(&self, f: usize) -> MarkVector {
        let m = self.matrices();
        let values = (0..self.lattice.class_count())
            .map(|sc| rat(*m.fmark.get(self.f_of_s[sc], f), 1))
            .collect();
        MarkVector { values }
    }

    /// The irreducible basis element `alpha_P` for fusion class `f`, by exact
    /// inversion of the mark matrix. Fails with a diagnostic when the fusion
    /// data does not produce a genuine basis element.
    pub fn alpha(&self, f: usize) -> Result<BurnsideElement> {
        let marks = self.stable_mark_vector(f);
        let dec = burnside::to_orbits(&self.lattice, &marks);
        let p_label = self.label_of_class(f);
        gate_alpha(&self.lattice, &p_label, dec.coeffs)
    }

    /// All basis elements, indexed by fusion class.
    pub fn alpha_all(&self) -> Result<Vec<BurnsideElement>> {
        (0..self.class_count()).map(|f| self.alpha(f)).collect()
    }

    /// Whether the marks of `x` are constant on every fusion class.
    pub fn is_stable(&self, x: &BurnsideElement) -> bool {
        let marks = burnside::to_marks(&self.lattice, x);
        self.classes.iter().all(|c| {
            let first = marks.values[c.s_classes[0]];
            c.s_classes.iter().all(|&sc| marks.values[sc] == first)
        })
    }

    /// Generator label of the chosen representative of a fusion class.
    pub fn label_of_class(&self, f: usize) -> String {
        self.lattice
            .group()
            .subgroup_label(self.lattice.subgroup(self.classes[f].rep))
    }

    /// Lattice indices of the strict supergroups of each subgroup, cached.
    pub(crate) fn strictly_above(&self, node: usize) -> &[usize] {
        let above = self.above.get_or_init(|| {
            (0..self.lattice.len())
                .map(|i| {
                    (0..self.lattice.len())
                        .filter(|&j| self.lattice.lt(i, j))
                        .collect()
                })
                .collect()
        });
        &above[node]
    }
}

fn check_p_group(order: u64, p: u64) -> Result<()> {
    let mut rest = order;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    if rest != 1 {
        return Err(Error::NotAPGroup { order, p });
    }
    Ok(())
}

/// Turn blocks of S-classes into ordered fusion classes with chosen
/// representatives: classes sort by (subgroup order, least S-class); the
/// representative is fully normalized (maximal normalizer, ties broken by
/// the canonical subgroup order).
fn assemble_classes(
    lattice: &SubgroupLattice,
    mut blocks: Vec<Vec<usize>>,
) -> (Vec<FClass>, Vec<usize>) {
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort_by_key(|b| (lattice.class(b[0]).subgroup_order, b[0]));
    let mut f_of_s = vec![usize::MAX; lattice.class_count()];
    let mut classes = Vec::with_capacity(blocks.len());
    for (f, block) in blocks.into_iter().enumerate() {
        let rep_class = *block
            .iter()
            .max_by(|&&a, &&b| {
                let ca = lattice.class(a);
                let cb = lattice.class(b);
                ca.normalizer_order.cmp(&cb.normalizer_order).then(
                    // prefer the canonically smaller subgroup on ties
                    lattice
                        .subgroup(cb.rep)
                        .cmp_canonical(lattice.subgroup(ca.rep)),
                )
            })
            .unwrap();
        for &sc in &block {
            f_of_s[sc] = f;
        }
        classes.push(FClass {
            rep: lattice.class(rep_class).rep,
            subgroup_order: lattice.class(rep_class).subgroup_order,
            s_classes: block,
        });
    }
    debug_assert!(f_of_s.iter().all(|&f| f != usize::MAX));
    (classes, f_of_s)
}

/// Every morphism from every subgroup into S induced by ambient conjugation,
/// deduplicated by graph and sorted.
fn all_homs(lattice: &SubgroupLattice, emb: &Embedding) -> Vec<Vec<Vec<usize>>> {
    let g = emb.ambient();
    let mut out = Vec::with_capacity(lattice.len());
    for i in 0..lattice.len() {
        let members = lattice.subgroup(i).members();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        'outer: for t in 0..g.order() {
            let mut images = Vec::with_capacity(members.len());
            for &x in &members {
                match emb.preimage(g.conjugate(t, emb.image(x))) {
                    Some(y) => images.push(y),
                    None => continue 'outer,
                }
            }
            if !seen.contains(&images) {
                seen.push(images);
            }
        }
        seen.sort_unstable();
        out.push(seen);
    }
    out
}

/// Shared acceptance gate for a candidate basis element: coefficients must be
/// integral and nonnegative.
pub(crate) fn gate_alpha(
    lattice: &SubgroupLattice,
    p_label: &str,
    coeffs: Vec<Rat>,
) -> Result<BurnsideElement> {
    for (sc, &c) in coeffs.iter().enumerate() {
        if !c.is_integer() || c < Rat::zero() {
            return Err(Error::AlphaDiagnostic {
                p_label: p_label.to_string(),
                q_label: lattice
                    .group()
                    .subgroup_label(lattice.subgroup(lattice.class(sc).rep)),
                value: c,
            });
        }
    }
    Ok(BurnsideElement {
        coeffs: coeffs.iter().map(|c| c.to_integer()).collect(),
    })
}
