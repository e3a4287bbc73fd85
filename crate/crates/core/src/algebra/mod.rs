//! Dense operators, states and density matrices on tensor products of
//! per-atom level sets.
//!
//! Basis ordering is lexicographic over atoms (atom 0 most significant) with
//! the per-atom order `g0, g1, ryd, leak`.

mod operator;
mod sparse;
mod state;

pub use operator::Operator;
pub use sparse::SparseOp;
pub use state::{DensityMatrix, StateVector};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Single-atom level label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Computational `|0>`, never driven.
    G0,
    /// Computational `|1>`, coupled to the Rydberg level.
    G1,
    /// Rydberg level `|r>`.
    Ryd,
    /// Ground sublevels outside the computational space, `|g>`.
    Leak,
}

impl Level {
    pub fn symbol(self) -> char {
        match self {
            Level::G0 => '0',
            Level::G1 => '1',
            Level::Ryd => 'r',
            Level::Leak => 'g',
        }
    }
}

/// Ordered levels of one atom. Always contains `g0, g1, ryd`, optionally `leak`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelScheme {
    levels: Vec<Level>,
}

impl LevelScheme {
    pub fn new(mut levels: Vec<Level>) -> Result<Self> {
        levels.sort();
        if levels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLevels("duplicate level".into()));
        }
        for required in [Level::G0, Level::G1, Level::Ryd] {
            if !levels.contains(&required) {
                return Err(Error::InvalidLevels(format!("missing required level {required:?}")));
            }
        }
        Ok(Self { levels })
    }

    /// `{g0, g1, ryd}`.
    pub fn three_level() -> Self {
        Self { levels: vec![Level::G0, Level::G1, Level::Ryd] }
    }

    /// `{g0, g1, ryd, leak}`.
    pub fn with_leak() -> Self {
        Self { levels: vec![Level::G0, Level::G1, Level::Ryd, Level::Leak] }
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn index_of(&self, level: Level) -> Result<usize> {
        self.levels.iter().position(|&l| l == level).ok_or(Error::MissingLevel(level))
    }

    pub fn has(&self, level: Level) -> bool {
        self.levels.contains(&level)
    }

    /// Single-atom `|a><b|`.
    pub fn transition<T: Real>(&self, a: Level, b: Level) -> Result<Operator<T>> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let mut op = Operator::zeros(self.dim());
        op[(i, j)] = num_complex::Complex::new(T::one(), T::zero());
        Ok(op)
    }
}

/// Tensor-product Hilbert space of several atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Space {
    atoms: Vec<LevelScheme>,
}

impl Space {
    pub fn new(atoms: Vec<LevelScheme>) -> Self {
        Self { atoms }
    }

    pub fn uniform(n_atoms: usize, scheme: LevelScheme) -> Self {
        Self { atoms: vec![scheme; n_atoms] }
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, i: usize) -> Result<&LevelScheme> {
        self.atoms.get(i).ok_or(Error::AtomOutOfRange { index: i, n_atoms: self.atoms.len() })
    }

    pub fn atoms(&self) -> &[LevelScheme] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms.iter().map(LevelScheme::dim).product()
    }

    /// Global index of a product state given one level per atom.
    pub fn index(&self, levels: &[Level]) -> Result<usize> {
        if levels.len() != self.atoms.len() {
            return Err(Error::DimensionMismatch { expected: self.atoms.len(), found: levels.len() });
        }
        let mut idx = 0;
        for (scheme, &lvl) in self.atoms.iter().zip(levels) {
            idx = idx * scheme.dim() + scheme.index_of(lvl)?;
        }
        Ok(idx)
    }

    /// Levels of each atom for a global basis index.
    pub fn levels_of(&self, mut index: usize) -> Vec<Level> {
        let mut out = vec![Level::G0; self.atoms.len()];
        for (k, scheme) in self.atoms.iter().enumerate().rev() {
            out[k] = scheme.levels()[index % scheme.dim()];
            index /= scheme.dim();
        }
        out
    }

    /// Label such as `"1r0"`.
    pub fn label(&self, index: usize) -> String {
        self.levels_of(index).into_iter().map(Level::symbol).collect()
    }

    /// Global index of a computational bitstring (`bits[k]` is atom `k`).
    pub fn computational_index(&self, bits: &[bool]) -> Result<usize> {
        let levels: Vec<Level> = bits.iter().map(|&b| if b { Level::G1 } else { Level::G0 }).collect();
        self.index(&levels)
    }

    /// Global indices of the `2^n` computational states, ordered `0..0, 0..01, ...`.
    pub fn computational_indices(&self) -> Vec<usize> {
        let n = self.n_atoms();
        (0..1usize << n)
            .map(|code| {
                let bits: Vec<bool> = (0..n).map(|k| code >> (n - 1 - k) & 1 == 1).collect();
                self.computational_index(&bits).expect("computational levels always present")
            })
            .collect()
    }

    /// Number of atoms in `ryd` for each basis index.
    pub fn rydberg_count(&self, index: usize) -> usize {
        self.levels_of(index).into_iter().filter(|&l| l == Level::Ryd).count()
    }
}

/// Computational bitstring label for code `code` of an `n`-qubit register.
pub fn bit_label(code: usize, n: usize) -> String {
    (0..n).map(|k| if code >> (n - 1 - k) & 1 == 1 { '1' } else { '0' }).collect()
}

/// `identity ⊗ ... ⊗ op ⊗ ... ⊗ identity` with `op` acting on `atom`.
pub fn embed<T: Real>(op: &Operator<T>, atom: usize, space: &Space) -> Result<Operator<T>> {
    let scheme = space.atom(atom)?;
    if op.dim() != scheme.dim() {
        return Err(Error::DimensionMismatch { expected: scheme.dim(), found: op.dim() });
    }
    let left: usize = space.atoms()[..atom].iter().map(LevelScheme::dim).product();
    let right: usize = space.atoms()[atom + 1..].iter().map(LevelScheme::dim).product();
    Ok(Operator::identity(left).kron(op).kron(&Operator::identity(right)))
}

/// Projector onto `|a>_i |b>_j`, identity on every other atom.
pub fn pair_projector<T: Real>(a: Level, b: Level, atoms: (usize, usize), space: &Space) -> Result<Operator<T>> {
    let (i, j) = atoms;
    if i == j {
        return Err(Error::InvalidParameter { name: "atoms", reason: "pair projector needs two distinct atoms".into() });
    }
    let pa = embed(&space.atom(i)?.transition(a, a)?, i, space)?;
    let pb = embed(&space.atom(j)?.transition(b, b)?, j, space)?;
    Ok(pa.matmul(&pb))
}

/// `A + A^dagger`.
pub fn hermitian_close<T: Real>(op: &Operator<T>) -> Operator<T> {
    op + &op.dagger()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn two_atoms() -> Space {
        Space::uniform(2, LevelScheme::three_level())
    }

    #[test]
    fn embed_identity_is_global_identity() {
        let space = two_atoms();
        for atom in 0..2 {
            let id = embed(&Operator::<f64>::identity(3), atom, &space).unwrap();
            assert_eq!(id, Operator::identity(9));
        }
    }

    #[test]
    fn embed_transition_has_three_unit_entries() {
        let space = two_atoms();
        let op = space.atom(0).unwrap().transition::<f64>(Level::G1, Level::Ryd).unwrap();
        let e = embed(&op, 0, &space).unwrap();
        // |1 x><r x| for x in {0, 1, r}: rows 3..6, columns 6..9.
        let nonzero: Vec<(usize, usize)> = (0..9)
            .flat_map(|r| (0..9).map(move |c| (r, c)))
            .filter(|&(r, c)| e[(r, c)].norm() > 0.0)
            .collect();
        assert_eq!(nonzero, vec![(3, 6), (4, 7), (5, 8)]);
        assert!(nonzero.iter().all(|&(r, c)| e[(r, c)] == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn embed_rejects_bad_input() {
        let space = two_atoms();
        assert!(matches!(
            embed(&Operator::<f64>::identity(4), 0, &space),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        ));
        assert!(matches!(embed(&Operator::<f64>::identity(3), 2, &space), Err(Error::AtomOutOfRange { .. })));
    }

    #[test]
    fn disjoint_embeddings_commute_and_match_kron() {
        let space = two_atoms();
        let a = space.atom(0).unwrap().transition::<f64>(Level::G1, Level::Ryd).unwrap();
        let b = space.atom(1).unwrap().transition::<f64>(Level::Ryd, Level::G0).unwrap();
        let ea = embed(&a, 0, &space).unwrap();
        let eb = embed(&b, 1, &space).unwrap();
        assert_eq!(ea.matmul(&eb), eb.matmul(&ea));
        assert_eq!(ea.matmul(&eb), a.kron(&b));
    }

    #[test]
    fn pair_projector_traces() {
        let p2: Operator<f64> = pair_projector(Level::Ryd, Level::Ryd, (0, 1), &two_atoms()).unwrap();
        assert!((p2.trace().re - 1.0).abs() < 1e-15);
        assert_eq!(p2.matmul(&p2), p2);

        let three = Space::uniform(3, LevelScheme::three_level());
        let p3: Operator<f64> = pair_projector(Level::Ryd, Level::Ryd, (0, 2), &three).unwrap();
        assert!((p3.trace().re - 3.0).abs() < 1e-15);
        assert_eq!(p3.matmul(&p3), p3);
        assert!(pair_projector::<f64>(Level::Ryd, Level::Ryd, (1, 1), &three).is_err());
    }

    #[test]
    fn pair_projector_missing_level() {
        let space = two_atoms();
        assert!(matches!(
            pair_projector::<f64>(Level::Leak, Level::Ryd, (0, 1), &space),
            Err(Error::MissingLevel(Level::Leak))
        ));
    }

    #[test]
    fn hermitian_close_examples() {
        let zero = Operator::<f64>::zeros(3);
        assert_eq!(hermitian_close(&zero), zero);

        let s = LevelScheme::three_level();
        let a = s.transition::<f64>(Level::G1, Level::Ryd).unwrap().scale(Complex64::i());
        let h = hermitian_close(&a);
        assert_eq!(h[(1, 2)], Complex64::i());
        assert_eq!(h[(2, 1)], -Complex64::i());
        assert!(h.is_hermitian(0.0));

        let herm = h.clone();
        assert_eq!(hermitian_close(&herm), herm.scale(Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn computational_projectors_are_orthogonal() {
        let space = Space::uniform(2, LevelScheme::with_leak());
        let idx = space.computational_indices();
        assert_eq!(idx.len(), 4);
        for &a in &idx {
            for &b in &idx {
                let pa = Operator::<f64>::basis_projector(space.dim(), a);
                let pb = Operator::<f64>::basis_projector(space.dim(), b);
                let prod = pa.matmul(&pb);
                if a == b {
                    assert_eq!(prod, pa);
                } else {
                    assert_eq!(prod, Operator::zeros(space.dim()));
                }
            }
        }
    }

    #[test]
    fn labels_follow_basis_order() {
        let space = two_atoms();
        let labels: Vec<String> = (0..9).map(|i| space.label(i)).collect();
        assert_eq!(labels, ["00", "01", "0r", "10", "11", "1r", "r0", "r1", "rr"]);
        assert_eq!(space.index(&[Level::Ryd, Level::G1]).unwrap(), 7);
        assert_eq!(bit_label(1, 3), "001");
    }

    #[test]
    fn level_scheme_validation() {
        assert!(LevelScheme::new(vec![Level::G0, Level::G1]).is_err());
        assert!(LevelScheme::new(vec![Level::G0, Level::G1, Level::Ryd, Level::Ryd]).is_err());
        let s = LevelScheme::new(vec![Level::Leak, Level::Ryd, Level::G1, Level::G0]).unwrap();
        assert_eq!(s, LevelScheme::with_leak());
    }
}
