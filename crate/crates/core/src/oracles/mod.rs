//! Cayley graphs used as divergence oracles.

pub mod coxeter;
pub mod free;
pub mod grid;
pub mod laurent;
pub mod sl;

pub use coxeter::{coxeter_oracle, CoxeterOracle};
pub use free::{free_oracle, FreeOracle};
pub use grid::{grid_oracle, GridOracle};
pub use laurent::{laurent_mul, parse_laurent, LaurentPoly};
pub use sl::{sl2_oracle, sl_mul, Sl2Oracle, SlMatrix, DEFAULT_DEGREE_BOUND};

use crate::coxeter::CoxeterSystem;
use crate::divergence::GraphOracle;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub parameters: &'static str,
    pub generators: &'static str,
    pub vertex_transitive: bool,
}

/// The shipped oracles. Every generating set is symmetric and omits the
/// identity.
pub const REGISTRY: [RegistryEntry; 4] = [
    RegistryEntry {
        name: "sl2",
        parameters: "q in {2, 3}; degree_bound",
        generators: "E12(c t^k), E21(c t^k) for c in F_q^*, k in {-1, 0, 1}",
        vertex_transitive: true,
    },
    RegistryEntry {
        name: "coxeter",
        parameters: "system (named or matrix file)",
        generators: "simple reflections",
        vertex_transitive: true,
    },
    RegistryEntry {
        name: "grid",
        parameters: "d >= 1",
        generators: "+-e_i",
        vertex_transitive: true,
    },
    RegistryEntry {
        name: "free",
        parameters: "rank >= 2",
        generators: "free generators and their inverses",
        vertex_transitive: true,
    },
];

/// An oracle chosen at run time.
#[derive(Clone, Debug)]
pub enum OracleSpec {
    Sl2 { q: u8, degree_bound: usize },
    Coxeter { system: CoxeterSystem },
    Grid { d: usize },
    Free { rank: usize },
}

/// Something to do with an oracle of statically unknown type.
pub trait OracleVisitor {
    type Output;

    fn visit<O: GraphOracle>(self, oracle: &O) -> Self::Output;
}

impl OracleSpec {
    /// Builds the oracle and hands it to `visitor`.
    pub fn visit<V: OracleVisitor>(&self, visitor: V) -> Result<V::Output> {
        Ok(match self {
            OracleSpec::Sl2 { q, degree_bound } => visitor.visit(&sl2_oracle(*q, *degree_bound)?),
            OracleSpec::Coxeter { system } => visitor.visit(&coxeter_oracle(system.clone())),
            OracleSpec::Grid { d } => visitor.visit(&grid_oracle(*d)?),
            OracleSpec::Free { rank } => visitor.visit(&free_oracle(*rank)?),
        })
    }
}
