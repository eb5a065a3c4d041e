use crate::CoreError;

/// A subset of qubit indices `0..n-1` (n <= 30), stored as a bitmask with bit
/// `q` marking qubit `q`. Note the mask ordering is independent of the
/// MSB-first basis convention; conversions happen inside the matrix ops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QubitSubset(pub u32);

impl QubitSubset {
    pub const EMPTY: Self = Self(0);

    pub fn from_qubits(qubits: &[usize]) -> Self {
        let mut m = 0u32;
        for &q in qubits {
            assert!(q < 30, "qubit index {q} out of supported range");
            m |= 1 << q;
        }
        Self(m)
    }

    pub fn singleton(q: usize) -> Self {
        Self::from_qubits(&[q])
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= 30);
        Self(((1u64 << n) - 1) as u32)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0 >> q & 1 == 1
    }

    pub fn union(&self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(&self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(&self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset_of(&self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Checks containment in the full set of an `n`-qubit register.
    pub fn check_in(&self, n: usize) -> Result<(), CoreError> {
        if self.is_subset_of(Self::full(n)) {
            Ok(())
        } else {
            Err(CoreError::NotASubset { subset: self.0, n })
        }
    }

    /// Qubit indices in ascending order.
    pub fn qubits(&self) -> Vec<usize> {
        (0..30).filter(|q| self.contains(*q)).collect()
    }
}

impl std::fmt::Display for QubitSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.qubits().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}
