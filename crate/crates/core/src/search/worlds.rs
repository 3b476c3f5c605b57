use crate::cost::Cost;
use crate::graph::{ImplicitGraph, NodeId, NodeRecord, WorldError};

/// Presents a world with unit estimates and zero edge costs, the setting in
/// which the dual scheme reduces to proof and disproof numbers.
#[derive(Clone, Debug)]
pub struct UnitWorld<W> {
    inner: W,
}

impl<W> UnitWorld<W> {
    pub fn new(inner: W) -> Self {
        UnitWorld { inner }
    }

    pub fn into_inner(self) -> W {
        self.inner
    }
}

fn unit(rec: NodeRecord) -> NodeRecord {
    NodeRecord { h: Cost::ONE, hbar: Cost::ONE, ..rec }.normalized()
}

impl<W: ImplicitGraph> ImplicitGraph for UnitWorld<W> {
    fn root(&mut self) -> Result<NodeRecord, WorldError> {
        Ok(unit(self.inner.root()?))
    }

    fn expand(&mut self, id: NodeId) -> Result<Vec<(NodeRecord, Cost)>, WorldError> {
        Ok(self.inner.expand(id)?.into_iter().map(|(r, _)| (unit(r), Cost::ZERO)).collect())
    }
}

/// Presents a world of static evaluations as a minimax problem: each
/// nonterminal node keeps its `h` and gets `hbar = scale - h`, edge costs
/// are zero. Fails if some `h` exceeds the scale.
#[derive(Clone, Debug)]
pub struct MinimaxWorld<W> {
    inner: W,
    scale: Cost,
}

impl<W> MinimaxWorld<W> {
    pub fn new(inner: W, scale: Cost) -> Self {
        MinimaxWorld { inner, scale }
    }

    pub fn scale(&self) -> Cost {
        self.scale
    }

    fn map(&self, rec: NodeRecord) -> Result<NodeRecord, WorldError> {
        if rec.is_terminal() {
            return Ok(rec.normalized());
        }
        if rec.h > self.scale {
            return Err(WorldError(format!("node {} has h = {} above the value scale {}", rec.id, rec.h, self.scale)));
        }
        let hbar = Cost::new(self.scale.value() - rec.h.value()).unwrap_or(Cost::ZERO);
        Ok(NodeRecord { hbar, ..rec })
    }
}

impl<W: ImplicitGraph> ImplicitGraph for MinimaxWorld<W> {
    fn root(&mut self) -> Result<NodeRecord, WorldError> {
        let r = self.inner.root()?;
        self.map(r)
    }

    fn expand(&mut self, id: NodeId) -> Result<Vec<(NodeRecord, Cost)>, WorldError> {
        self.inner.expand(id)?.into_iter().map(|(r, _)| Ok((self.map(r)?, Cost::ZERO))).collect()
    }
}
