use std::collections::BTreeSet;

use nalgebra::DMatrix;

use super::HamiltonianMatrix;
use crate::error::{PiteError, Result};

/// Largest chain accepted by [`build_heisenberg_chain`].
pub const DEFAULT_MAX_SITES: usize = 14;

/// `H = J Σ_<j,k> σ_j·σ_k + h Σ_j σ^z_j` over an explicit set of undirected bonds.
///
/// Site `j` is qubit `j` of the computational basis; bit value 0 is the
/// `σ^z = +1` eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergModel {
    sites: usize,
    coupling: f64,
    field: f64,
    bonds: Vec<(usize, usize)>,
}

impl HeisenbergModel {
    /// Closed chain: bonds `(j, j+1 mod n)`, each undirected bond kept once.
    pub fn periodic_chain(sites: usize, coupling: f64, field: f64) -> Result<Self> {
        if sites < 2 {
            return Err(PiteError::invalid(format!(
                "Heisenberg chain needs at least 2 sites, got {sites}"
            )));
        }
        Self::with_bonds(
            sites,
            coupling,
            field,
            (0..sites).map(|j| (j, (j + 1) % sites)),
        )
    }

    /// Arbitrary bond list. Duplicates (in either orientation) collapse.
    pub fn with_bonds(
        sites: usize,
        coupling: f64,
        field: f64,
        bonds: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if sites < 2 {
            return Err(PiteError::invalid(format!(
                "Heisenberg model needs at least 2 sites, got {sites}"
            )));
        }
        if !coupling.is_finite() || !field.is_finite() {
            return Err(PiteError::invalid("coupling and field must be finite"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in bonds {
            if a >= sites || b >= sites || a == b {
                return Err(PiteError::invalid(format!(
                    "bond ({a}, {b}) is not a pair of distinct sites below {sites}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            sites,
            coupling,
            field,
            bonds: set.into_iter().collect(),
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    pub fn build(&self, max_sites: usize) -> Result<HamiltonianMatrix> {
        if self.sites > max_sites {
            return Err(PiteError::ResourceLimit {
                what: "sites",
                requested: self.sites,
                max: max_sites,
            });
        }
        let dim = 1usize << self.sites;
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        let z = |state: usize, site: usize| if state >> site & 1 == 0 { 1.0 } else { -1.0 };

        for state in 0..dim {
            let mut diag = 0.0;
            for site in 0..self.sites {
                diag += self.field * z(state, site);
            }
            for &(a, b) in &self.bonds {
                let za = z(state, a);
                let zb = z(state, b);
                diag += self.coupling * za * zb;
                // σxσx + σyσy flips an anti-aligned pair with amplitude 2.
                if za != zb {
                    let flipped = state ^ (1 << a) ^ (1 << b);
                    h[(flipped, state)] += 2.0 * self.coupling;
                }
            }
            h[(state, state)] = diag;
        }
        HamiltonianMatrix::new(h)
    }
}

/// Periodic Heisenberg chain with Pauli (not spin-1/2) operators.
pub fn build_heisenberg_chain(
    sites: usize,
    coupling: f64,
    field: f64,
) -> Result<HamiltonianMatrix> {
    HeisenbergModel::periodic_chain(sites, coupling, field)?.build(DEFAULT_MAX_SITES)
}
