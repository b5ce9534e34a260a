//! The Burnside ring of a finite group: table of marks, its inverse, the
//! modified zeta/Mobius pair, multiplication by double cosets, and the
//! obstruction homomorphism.
//!
//! Basis elements `[S/P]` are indexed by conjugacy classes of subgroups in
//! lattice-class order. The table of marks factors as `Mark = zeta~ * W` with
//! `W` the diagonal of Weyl-group orders, so all inversions happen over the
//! integers; rationals appear only in `Mob = Mark^-1` and in mark vectors.

use crate::lattice::SubgroupLattice;
use crate::matrix::SquareMat;
use crate::{rat, Error, Rat, Result};
use num::traits::Zero;

/// Cached mark/Mobius matrices of one lattice, all indexed by S-class.
pub struct MarkTables {
    mark: SquareMat<i64>,
    zeta_tilde: SquareMat<i64>,
    mu_tilde: SquareMat<i64>,
    mob: SquareMat<Rat>,
}

/// Mark matrices for a lattice, computed once and cached on it.
pub fn tables(l: &SubgroupLattice) -> &MarkTables {
    l.marks.get_or_init(|| compute_tables(l))
}

fn compute_tables(l: &SubgroupLattice) -> MarkTables {
    let n = l.class_count();
    let g = l.group();
    let mut mark = SquareMat::zero(n);
    for qc in 0..n {
        let q = l.subgroup(l.class(qc).rep);
        for pc in 0..n {
            let p = l.subgroup(l.class(pc).rep);
            let t = g.transporter_count(q, p);
            debug_assert_eq!(t % p.order() as u64, 0);
            mark.set(qc, pc, (t / p.order() as u64) as i64);
        }
    }
    // zeta~(Q, P) = Mark(Q, P) / |W_S P| = #{ P' ~ P : Q <= P' }
    let mut zeta_tilde = SquareMat::zero(n);
    for qc in 0..n {
        for pc in 0..n {
            let w = l.class(pc).weyl_order as i64;
            let m = *mark.get(qc, pc);
            debug_assert_eq!(m % w, 0);
            zeta_tilde.set(qc, pc, m / w);
        }
    }
    let mu_tilde = zeta_tilde.unitriangular_inverse();
    // Mob = W^-1 * mu~, row Q scaled by 1/|W_S Q|
    let mut mob = SquareMat::zero(n);
    for qc in 0..n {
        let w = l.class(qc).weyl_order as i64;
        for pc in 0..n {
            mob.set(qc, pc, rat(*mu_tilde.get(qc, pc), w));
        }
    }
    MarkTables {
        mark,
        zeta_tilde,
        mu_tilde,
        mob,
    }
}

impl MarkTables {
    /// The table of marks: `mark[Q][P] = |N_S(Q, P)| / |P|`.
    pub fn mark(&self) -> &SquareMat<i64> {
        &self.mark
    }

    /// Inverse of the table of marks, with exact rational entries.
    pub fn mob(&self) -> &SquareMat<Rat> {
        &self.mob
    }

    /// Modified incidence: class-summed zeta, integer and unitriangular.
    pub fn zeta_tilde(&self) -> &SquareMat<i64> {
        &self.zeta_tilde
    }

    /// Modified Mobius function: `mu~(Q, P) = |W_S Q| * Mob(Q, P)`.
    pub fn mu_tilde(&self) -> &SquareMat<i64> {
        &self.mu_tilde
    }
}

/// An element of the Burnside ring in the transitive basis: integer
/// coefficients per subgroup class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BurnsideElement {
    pub coeffs: Vec<i64>,
}

impl BurnsideElement {
    pub fn zero(l: &SubgroupLattice) -> BurnsideElement {
        BurnsideElement {
            coeffs: vec![0; l.class_count()],
        }
    }

    /// The basis element `[S/P]` for the class of index `class`.
    pub fn basis(l: &SubgroupLattice, class: usize) -> BurnsideElement {
        let mut x = BurnsideElement::zero(l);
        x.coeffs[class] = 1;
        x
    }
}

/// A ghost-ring vector: one exact rational value per subgroup class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkVector {
    pub values: Vec<Rat>,
}

impl MarkVector {
    pub fn from_integers(values: Vec<i64>) -> MarkVector {
        MarkVector {
            values: values.into_iter().map(|v| rat(v, 1)).collect(),
        }
    }

    /// Indicator vector of one class.
    pub fn indicator(classes: usize, class: usize) -> MarkVector {
        let mut values = vec![Rat::zero(); classes];
        values[class] = rat(1, 1);
        MarkVector { values }
    }

    pub fn integer_values(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect()
    }
}

/// Result of applying `Mob` to a mark vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitDecomposition {
    pub coeffs: Vec<Rat>,
    pub integral: bool,
}

impl OrbitDecomposition {
    /// Convert to a Burnside element if every coefficient is an integer.
    pub fn into_element(self) -> Option<BurnsideElement> {
        self.integral.then(|| BurnsideElement {
            coeffs: self.coeffs.iter().map(|c| c.to_integer()).collect(),
        })
    }
}

/// The mark homomorphism: fixed-point counts of `x` for every class.
pub fn to_marks(l: &SubgroupLattice, x: &BurnsideElement) -> MarkVector {
    let t = tables(l);
    let coeffs: Vec<Rat> = x.coeffs.iter().map(|&c| rat(c, 1)).collect();
    MarkVector {
        values: t.mark.map(|&e| rat(e, 1)).mul_vec(&coeffs),
    }
}

/// Invert the mark homomorphism: orbit coefficients of a ghost vector.
pub fn to_orbits(l: &SubgroupLattice, v: &MarkVector) -> OrbitDecomposition {
    let t = tables(l);
    let coeffs = t.mob.mul_vec(&v.values);
    let integral = coeffs.iter().all(|c| c.is_integer());
    OrbitDecomposition { coeffs, integral }
}

/// Multiply two Burnside elements via the double-coset formula
/// `[S/P][S/Q] = sum over P\S/Q of [S/(P meet sQs^-1)]`.
pub fn multiply(
    l: &SubgroupLattice,
    x: &BurnsideElement,
    y: &BurnsideElement,
) -> BurnsideElement {
    let mut out = BurnsideElement::zero(l);
    for (pc, &cx) in x.coeffs.iter().enumerate() {
        if cx == 0 {
            continue;
        }
        for (qc, &cy) in y.coeffs.iter().enumerate() {
            if cy == 0 {
                continue;
            }
            for (term_class, mult) in basis_product(l, pc, qc) {
                out.coeffs[term_class] += cx * cy * mult as i64;
            }
        }
    }
    out
}

/// `[S/P][S/Q]` as a list of `(class, multiplicity)` terms.
fn basis_product(l: &SubgroupLattice, pc: usize, qc: usize) -> Vec<(usize, u64)> {
    let g = l.group();
    let p = l.subgroup(l.class(pc).rep);
    let q = l.subgroup(l.class(qc).rep);
    let n = g.order();
    let mut seen = vec![false; n];
    let mut terms: Vec<(usize, u64)> = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        for a in p.iter() {
            let as_ = g.mul(a, s);
            for b in q.iter() {
                seen[g.mul(as_, b)] = true;
            }
        }
        let term = p.intersection(&g.conjugate_subgroup(q, s));
        let class = l.class_of(l.index_of(&term).expect("intersection is a subgroup"));
        match terms.iter_mut().find(|(c, _)| *c == class) {
            Some((_, m)) => *m += 1,
            None => terms.push((class, 1)),
        }
    }
    terms
}

/// Residues of the obstruction homomorphism, one per subgroup class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ObstructionVector {
    pub residues: Vec<u64>,
    pub moduli: Vec<u64>,
}

impl ObstructionVector {
    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

/// The obstruction homomorphism: for each class `[P]`,
/// `Psi_P(v) = sum over cosets sP in W_S P of v(<s>P) mod |W_S P|`.
/// Defined on integer ghost vectors only.
pub fn psi(l: &SubgroupLattice, v: &MarkVector) -> Result<ObstructionVector> {
    let values = v.integer_values().ok_or_else(|| {
        let bad = v.values.iter().position(|x| !x.is_integer()).unwrap();
        Error::NonIntegralMarks {
            q_label: l.group().subgroup_label(l.subgroup(l.class(bad).rep)),
            value: v.values[bad],
        }
    })?;
    let g = l.group();
    let mut residues = Vec::with_capacity(l.class_count());
    let mut moduli = Vec::with_capacity(l.class_count());
    for c in 0..l.class_count() {
        let p = l.subgroup(l.class(c).rep);
        let w = l.class(c).weyl_order;
        let normalizer = g.normalizer(p);
        let mut covered = vec![false; g.order()];
        let mut acc: i64 = 0;
        for s in normalizer.iter() {
            if covered[s] {
                continue;
            }
            for x in p.iter() {
                covered[g.mul(s, x)] = true;
            }
            let mut seed = p.members();
            seed.push(s);
            let gen = g.subgroup_closure(&seed);
            acc += values[l.class_of(l.index_of(&gen).expect("generated subgroup"))];
        }
        residues.push(acc.rem_euclid(w as i64) as u64);
        moduli.push(w);
    }
    Ok(ObstructionVector { residues, moduli })
}
