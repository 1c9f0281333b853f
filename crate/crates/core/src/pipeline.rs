//! Decompose, attach a path family to each part, merge, certify.

use crate::cover::{certify_with_limit, clique_family, gadget_family, merge_families, Certificate, CertifyMode, CoverError};
use crate::decompose::{h_decompose_with_limit, odd_clique_decompose_with_limit};
use crate::error::Error;
use crate::graph::{Decomposition, Graph, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    OddCliques,
    Gadgets,
}

impl Target {
    /// Load bound the canonical families are built to meet.
    pub fn default_bound(self) -> u32 {
        match self {
            Target::OddCliques => 2,
            Target::Gadgets => 3,
        }
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd-cliques" => Ok(Target::OddCliques),
            "h" => Ok(Target::Gadgets),
            _ => Err(format!("unknown target {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub target: Target,
    /// Defaults to `target.default_bound()`.
    pub bound: Option<u32>,
    pub mode: CertifyMode,
    pub max_edges: usize,
    pub symbolic_limit: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            target: Target::OddCliques,
            bound: None,
            mode: CertifyMode::Auto,
            max_edges: crate::decompose::DEFAULT_MAX_EDGES,
            symbolic_limit: crate::cover::DEFAULT_SYMBOLIC_EDGE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOutcome {
    pub decomposition: Decomposition,
    pub certificate: Certificate,
}

/// `None` when the graph has no decomposition of the requested kind.
pub fn run_pipeline(g: &Graph, cfg: &PipelineConfig) -> Result<Option<PipelineOutcome>, Error> {
    let d = match cfg.target {
        Target::OddCliques => odd_clique_decompose_with_limit(g, cfg.max_edges)?,
        Target::Gadgets => h_decompose_with_limit(g, cfg.max_edges)?,
    };
    let Some(d) = d else { return Ok(None) };
    let families = d
        .parts
        .iter()
        .enumerate()
        .map(|(i, part)| match part.shape {
            Shape::Triangle | Shape::K5 | Shape::K7 => clique_family(g, &part.vertices),
            Shape::H => {
                let image: [_; 5] = part.vertices.as_slice().try_into().map_err(|_| CoverError::PartMismatch(i))?;
                gadget_family(g, image)
            }
            Shape::Edge => Err(CoverError::PartMismatch(i)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let family = merge_families(g, &d, &families)?;
    let bound = cfg.bound.unwrap_or(cfg.target.default_bound());
    let certificate = certify_with_limit(g, &family, bound, cfg.mode, cfg.symbolic_limit)?;
    Ok(Some(PipelineOutcome { decomposition: d, certificate }))
}
