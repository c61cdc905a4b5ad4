use crate::numerics::{ComplexMatrix, ComplexVector, C64};
use crate::{Error, Result};

/// Largest ensemble for which full-space (oracle) operators are built.
pub const MAX_ORACLE_ATOMS: u32 = 3;
/// Default cap on the dimension of embedded state vectors.
pub const DEFAULT_STATE_DIM_CAP: usize = 1_000_000;
/// Default Fock cutoff for oracles: one level beyond what single-excitation
/// dynamics needs, so that spurious leakage shows up.
pub const DEFAULT_FOCK_CUTOFF: usize = 2;

pub const LEVEL_G: usize = 0;
pub const LEVEL_E: usize = 1;
pub const LEVEL_S: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomLevels {
    /// {g, e}
    Two,
    /// {g, e, s}
    Three,
}

impl AtomLevels {
    pub fn count(self) -> usize {
        match self {
            Self::Two => 2,
            Self::Three => 3,
        }
    }
}

/// Collective atomic states: |E⟩ and |S⟩ are symmetric single excitations,
/// |G⟩ has all atoms in |g⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectiveKind {
    E,
    G,
    S,
}

/// Tensor-product space `atom₁ ⊗ … ⊗ atom_N ⊗ field` with a truncated Fock
/// space `{|0⟩ … |fock_cutoff⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullSpace {
    pub n_atoms: u32,
    pub levels: AtomLevels,
    pub fock_cutoff: usize,
}

impl FullSpace {
    /// Validates `fock_cutoff ≥ 1` and the dimension against `cap`.
    pub fn with_cap(n_atoms: u32, levels: AtomLevels, fock_cutoff: usize, cap: usize) -> Result<Self> {
        if n_atoms < 1 {
            return Err(Error::InvalidParameter { name: "n_atoms", reason: "N must be ≥ 1".into() });
        }
        if fock_cutoff < 1 {
            return Err(Error::InvalidParameter {
                name: "fock_cutoff",
                reason: "must be ≥ 1".into(),
            });
        }
        let dim = (levels.count() as u128)
            .checked_pow(n_atoms)
            .map(|a| a * (fock_cutoff as u128 + 1))
            .unwrap_or(u128::MAX);
        if dim > cap as u128 {
            return Err(Error::DimensionCap { dim: dim.min(usize::MAX as u128) as usize, cap });
        }
        Ok(Self { n_atoms, levels, fock_cutoff })
    }

    pub fn new(n_atoms: u32, levels: AtomLevels, fock_cutoff: usize) -> Result<Self> {
        Self::with_cap(n_atoms, levels, fock_cutoff, DEFAULT_STATE_DIM_CAP)
    }

    /// A space small enough for dense operators (`N ≤ MAX_ORACLE_ATOMS`).
    pub fn oracle(n_atoms: u32, levels: AtomLevels, fock_cutoff: usize) -> Result<Self> {
        let space = Self::new(n_atoms, levels, fock_cutoff)?;
        if n_atoms > MAX_ORACLE_ATOMS {
            let cap = levels.count().pow(MAX_ORACLE_ATOMS) * (fock_cutoff + 1);
            return Err(Error::DimensionCap { dim: space.dim(), cap });
        }
        Ok(space)
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_cutoff + 1
    }

    pub fn atom_dim(&self) -> usize {
        self.levels.count().pow(self.n_atoms)
    }

    pub fn dim(&self) -> usize {
        self.atom_dim() * self.fock_dim()
    }

    /// Flat index of `|l₁ … l_N⟩|n⟩`.
    pub fn index(&self, atom_levels: &[usize], photons: usize) -> usize {
        debug_assert_eq!(atom_levels.len(), self.n_atoms as usize);
        let d = self.levels.count();
        let atoms = atom_levels.iter().fold(0usize, |acc, &l| acc * d + l);
        atoms * self.fock_dim() + photons
    }

    /// `I ⊗ … ⊗ local_j ⊗ … ⊗ I ⊗ I_field` for atom `j` (0-based).
    pub fn atom_op(&self, j: usize, local: &ComplexMatrix) -> ComplexMatrix {
        let d = self.levels.count();
        let mut out = ComplexMatrix::identity(1);
        for k in 0..self.n_atoms as usize {
            let factor = if k == j { local.clone() } else { ComplexMatrix::identity(d) };
            out = out.kron(&factor);
        }
        out.kron(&ComplexMatrix::identity(self.fock_dim()))
    }

    /// `I_atoms ⊗ local`.
    pub fn field_op(&self, local: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::identity(self.atom_dim()).kron(local)
    }

    /// `|to⟩⟨from|` on a single atom.
    pub fn transition(&self, to: usize, from: usize) -> ComplexMatrix {
        let d = self.levels.count();
        let mut m = ComplexMatrix::zeros(d, d);
        m[(to, from)] = C64::new(1.0, 0.0);
        m
    }

    /// Truncated annihilation operator on the field.
    pub fn annihilation(&self) -> ComplexMatrix {
        let f = self.fock_dim();
        let mut a = ComplexMatrix::zeros(f, f);
        for n in 1..f {
            a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        self.field_op(&a)
    }

    pub fn photon_number(&self) -> ComplexMatrix {
        let diag: Vec<f64> = (0..self.fock_dim()).map(|n| n as f64).collect();
        self.field_op(&ComplexMatrix::from_real_diag(&diag))
    }

    /// `Σ_j |l⟩⟨l|_j`.
    pub fn level_count(&self, level: usize) -> ComplexMatrix {
        let p = self.transition(level, level);
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for j in 0..self.n_atoms as usize {
            out.axpy(C64::new(1.0, 0.0), &self.atom_op(j, &p));
        }
        out
    }

    /// Conserved excitation number: photons plus atoms outside |g⟩.
    pub fn excitation_number(&self) -> ComplexMatrix {
        let mut n = self.photon_number();
        n.axpy(C64::new(1.0, 0.0), &self.level_count(LEVEL_E));
        if self.levels == AtomLevels::Three {
            n.axpy(C64::new(1.0, 0.0), &self.level_count(LEVEL_S));
        }
        n
    }

    /// Normalized embedding of `|kind⟩|fock⟩`.
    pub fn collective_state(&self, kind: CollectiveKind, fock: usize) -> Result<ComplexVector> {
        if fock > self.fock_cutoff {
            return Err(Error::InvalidArgument(format!(
                "photon number {fock} above cutoff {}",
                self.fock_cutoff
            )));
        }
        let excited = match kind {
            CollectiveKind::G => None,
            CollectiveKind::E => Some(LEVEL_E),
            CollectiveKind::S => {
                if self.levels != AtomLevels::Three {
                    return Err(Error::InvalidArgument("|S⟩ needs three-level atoms".into()));
                }
                Some(LEVEL_S)
            }
        };
        let n = self.n_atoms as usize;
        let mut v = ComplexVector::zeros(self.dim());
        let mut levels = vec![LEVEL_G; n];
        match excited {
            None => v[self.index(&levels, fock)] = C64::new(1.0, 0.0),
            Some(level) => {
                let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
                for j in 0..n {
                    levels[j] = level;
                    v[self.index(&levels, fock)] = amp;
                    levels[j] = LEVEL_G;
                }
            }
        }
        Ok(v)
    }

    /// `(|+⟩, |−⟩, |G0⟩)` for two-level atoms, `(|u₁⟩, |u₂⟩, |u₃⟩)` for Λ atoms.
    pub fn collective_basis(&self) -> Result<[ComplexVector; 3]> {
        let third = match self.levels {
            AtomLevels::Two => self.collective_state(CollectiveKind::G, 0)?,
            AtomLevels::Three => self.collective_state(CollectiveKind::S, 0)?,
        };
        Ok([
            self.collective_state(CollectiveKind::E, 0)?,
            self.collective_state(CollectiveKind::G, 1)?,
            third,
        ])
    }
}

/// `|kind⟩|fock⟩` embedded in the full space of `n_atoms` atoms with the given
/// level structure, subject to [`DEFAULT_STATE_DIM_CAP`].
pub fn collective_state(
    n_atoms: u32,
    levels: AtomLevels,
    kind: CollectiveKind,
    fock: usize,
    fock_cutoff: usize,
) -> Result<ComplexVector> {
    FullSpace::new(n_atoms, levels, fock_cutoff)?.collective_state(kind, fock)
}
