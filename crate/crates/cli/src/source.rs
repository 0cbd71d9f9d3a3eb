//! Turning `--input` / `--builder` into networks and block transports.

use anyhow::{bail, Context, Result};

use qtransport::network::{
    assemble_composite, build_bottleneck, build_composite, build_ladder, build_triangle,
    default_ladder, hat_block_transport, BlockTransport, Network,
};

use crate::{BuilderKind, Opts};

/// What a source provides: a full network, or only blocks.
pub enum Source {
    Network { net: Network, default_split: Option<(usize, usize, usize)> },
    Blocks(BlockTransport),
}

pub fn describe(opts: &Opts) -> String {
    match (&opts.input, opts.builder) {
        (Some(p), _) => format!("file {}", p.display()),
        (None, Some(BuilderKind::Triangle)) => format!("triangle n={}", opts.n),
        (None, Some(BuilderKind::Hat)) => format!("hat r={}", opts.r.unwrap_or(3)),
        (None, Some(BuilderKind::Composite)) => {
            let (a, b, c, d) = opts.parts.unwrap_or((1, 1, 2, 1));
            format!("composite {a},{b},{c},{d}")
        }
        (None, Some(BuilderKind::Ladder)) => "ladder".into(),
        (None, Some(BuilderKind::Bottleneck)) => {
            let (n1, _, n2) = opts.split.unwrap_or((2, 1, 2));
            format!("bottleneck {n1},{n2}")
        }
        (None, None) => "none".into(),
    }
}

pub fn load(opts: &Opts) -> Result<Source> {
    if let Some(path) = &opts.input {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let net = Network::from_json_str(&text)
            .with_context(|| format!("cannot load network from {}", path.display()))?;
        return Ok(Source::Network { net, default_split: None });
    }
    let Some(kind) = opts.builder else {
        bail!("this command needs --input FILE or --builder NAME");
    };
    Ok(match kind {
        BuilderKind::Triangle => Source::Network { net: build_triangle(opts.n)?, default_split: None },
        BuilderKind::Ladder => {
            Source::Network { net: build_ladder(&default_ladder())?, default_split: Some((2, 1, 2)) }
        }
        BuilderKind::Bottleneck => {
            let (n1, m, n2) = opts.split.unwrap_or((2, 1, 2));
            if m != 1 {
                bail!("the bottleneck builder takes --split n1,1,n2");
            }
            Source::Network { net: build_bottleneck(n1, n2)?, default_split: Some((n1, 1, n2)) }
        }
        BuilderKind::Composite => {
            let (n1, m2, m1, n2) = opts.parts.unwrap_or((1, 1, 2, 1));
            Source::Blocks(assemble_composite(&build_composite(n1, m2, m1, n2)?)?)
        }
        BuilderKind::Hat => Source::Blocks(hat_block_transport(opts.r.unwrap_or(3))?),
    })
}

impl Source {
    pub fn network(&self) -> Result<&Network> {
        match self {
            Source::Network { net, .. } => Ok(net),
            Source::Blocks(_) => bail!("this builder provides blocks only, not a network"),
        }
    }

    /// Blocks for the requested split, else the source's preferred split,
    /// else the first admissible one.
    pub fn blocks(&self, split: Option<(usize, usize, usize)>) -> Result<BlockTransport> {
        match self {
            Source::Blocks(b) => {
                if let Some(s) = split {
                    if s != (b.n1, b.m, b.n2) {
                        bail!("this builder has the fixed split {},{},{}", b.n1, b.m, b.n2);
                    }
                }
                Ok(b.clone())
            }
            Source::Network { net, default_split } => {
                let m = net.transport_matrix()?;
                let s = match split.or(*default_split) {
                    Some(s) => s,
                    None => *qtransport::network::BlockTransport::admissible_splits(m.rows(), m.cols())
                        .first()
                        .context("transport matrix admits no block split")?,
                };
                Ok(BlockTransport::split(&m, s.0, s.1, s.2)?)
            }
        }
    }

    /// Every split to check: the requested one, or all admissible ones.
    pub fn all_blocks(&self, split: Option<(usize, usize, usize)>) -> Result<Vec<BlockTransport>> {
        match (self, split) {
            (Source::Network { net, .. }, None) => {
                let m = net.transport_matrix()?;
                BlockTransport::admissible_splits(m.rows(), m.cols())
                    .into_iter()
                    .map(|(a, b, c)| Ok(BlockTransport::split(&m, a, b, c)?))
                    .collect()
            }
            _ => Ok(vec![self.blocks(split)?]),
        }
    }
}
