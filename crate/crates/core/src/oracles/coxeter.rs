//! Cayley graph of a Coxeter group on its simple reflections, i.e. the
//! chamber graph of the Coxeter complex.

use crate::coxeter::{parse_word, CoxeterSystem, Element};
use crate::divergence::GraphOracle;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct CoxeterOracle {
    system: CoxeterSystem,
}

pub fn coxeter_oracle(system: CoxeterSystem) -> CoxeterOracle {
    CoxeterOracle { system }
}

impl CoxeterOracle {
    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }
}

impl GraphOracle for CoxeterOracle {
    type Vertex = Element;

    fn name(&self) -> String {
        format!("coxeter({})", self.system.name())
    }

    fn basepoint(&self) -> Element {
        Element::identity()
    }

    /// `w s` for `s = 0, 1, ...`.
    fn neighbors(&self, v: &Element, out: &mut Vec<Element>) -> Result<()> {
        out.extend((0..self.system.rank() as u8).map(|s| self.system.right_mul_gen(v, s)));
        Ok(())
    }

    fn canonical_key(&self, v: &Element) -> Vec<u8> {
        v.word().to_vec()
    }

    fn render(&self, v: &Element) -> String {
        v.to_string()
    }

    fn parse_vertex(&self, s: &str) -> Result<Element> {
        self.system.element_from_normal_word(parse_word(s)?)
    }

    fn vertex_transitive(&self) -> bool {
        true
    }
}
