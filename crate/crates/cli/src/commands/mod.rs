//! Subcommand implementations and the shared graph/filter loading pipeline.

pub mod eigvec;
pub mod graph;
pub mod range;
pub mod spectrum;
pub mod verify;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use graph_uncertainty::experiment::{self, Fixture, PairParams};
use graph_uncertainty::filters::{distance_spatial, projection_spatial, projection_spectral};
use graph_uncertainty::graph::{geodesic, normalized_laplacian, radius_graph};
use graph_uncertainty::{
    build_bundle, dual_bundle, io, EigenDecomposition, Error as CoreError, FilterPair, Graph,
    OperatorBundle, PairKind, SpatialFilter, SpectralFilter,
};
use nalgebra::DVector;

use crate::config::{GraphSource, PairChoice, PairSpec, RunConfig};
use crate::error::{CliError, Result};

/// Tolerance for checking a user-supplied eigenbasis against the Laplacian.
const BASIS_TOL: f64 = 1e-8;

/// Everything a subcommand needs: graph, eigenbasis, filter pair and operators.
pub struct Pipeline {
    pub config: RunConfig,
    pub graph: Graph,
    pub decomp: EigenDecomposition,
    pub pair: FilterPair,
    pub bundle: OperatorBundle,
    pub center: usize,
}

impl Pipeline {
    pub fn load(config: RunConfig) -> Result<Self> {
        let (graph, fixture) = load_graph(&config)?;
        let decomp = match &config.basis {
            Some(path) => load_basis(&graph, path)?,
            None => match &fixture {
                Some(fx) => fx.decomp.clone(),
                None => EigenDecomposition::of_graph(&graph)?,
            },
        };
        let center = match config.pair.index("center")? {
            Some(c) if c >= graph.n() => {
                return Err(CoreError::NodeOutOfRange { index: c, n: graph.n() }.into())
            }
            Some(c) => c,
            None => experiment::center_node(&graph),
        };
        let pair = build_pair(&config.pair, &graph, &decomp, fixture.as_ref(), center)?;
        let dual = config
            .pair
            .flag("dual")?
            .unwrap_or(pair.kind == PairKind::LaplaceLaplace);
        let bundle = if dual {
            dual_bundle(&decomp, &pair)?
        } else {
            build_bundle(&decomp, &pair)?
        };
        Ok(Self {
            config,
            graph,
            decomp,
            pair,
            bundle,
            center,
        })
    }

    /// Header lines recorded at the top of every output file.
    pub fn comments(&self) -> Vec<String> {
        vec![
            format!("graph-uncertainty {}", env!("CARGO_PKG_VERSION")),
            self.config.provenance(),
        ]
    }

    pub fn pair_params(&self) -> Result<PairParams> {
        pair_params(&self.config.pair)
    }
}

/// Reads the graph; fixtures come with their own eigenbasis and pair.
pub fn load_graph(config: &RunConfig) -> Result<(Graph, Option<Fixture>)> {
    match &config.graph {
        GraphSource::Sensor(params) => Ok((experiment::sensor_graph(*params)?, None)),
        GraphSource::Fixture(name) => {
            let fx = match name.as_str() {
                "bipartite4" => experiment::bipartite4()?,
                _ => experiment::complete4()?,
            };
            Ok((fx.graph.clone(), Some(fx)))
        }
        GraphSource::File(path) => {
            let text = read_text(path)?;
            let input = |source| CliError::Input {
                path: path.clone(),
                source,
            };
            let graph = if is_edge_list(&text) {
                io::read_edge_list(&text).map_err(input)?
            } else {
                let cloud = io::read_point_cloud(&text).map_err(input)?;
                radius_graph(&cloud, config.radius)
                    .and_then(|g| g.with_points(cloud))
                    .map_err(input)?
            };
            Ok((graph, None))
        }
    }
}

fn is_edge_list(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.split_whitespace().next() == Some("n"))
}

fn load_basis(graph: &Graph, path: &Path) -> Result<EigenDecomposition> {
    let input = |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    };
    let u = io::read_matrix(&read_text(path)?).map_err(input)?;
    let l = normalized_laplacian(graph)?;
    if u.shape() != l.shape() {
        return Err(input(CoreError::DimensionMismatch {
            expected: l.nrows(),
            found: u.nrows(),
        }));
    }
    let values = DVector::from_iterator(
        u.ncols(),
        u.column_iter().map(|c| c.dot(&(&l * c))),
    );
    EigenDecomposition::from_parts(&l, values, u, BASIS_TOL).map_err(input)
}

fn pair_params(spec: &PairSpec) -> Result<PairParams> {
    let mut p = PairParams::default();
    if let Some(r) = spec.number("radius")? {
        p.disk_radius = r;
    }
    if let Some(n) = spec.index("bandwidth")? {
        p.bandwidth = n;
    }
    if let Some(a) = spec.number("alpha")? {
        p.alpha = a;
        p.alpha_laplace = a;
    }
    if let Some(b) = spec.number("beta")? {
        p.beta = b;
    }
    Ok(p)
}

fn build_pair(
    spec: &PairSpec,
    graph: &Graph,
    decomp: &EigenDecomposition,
    fixture: Option<&Fixture>,
    center: usize,
) -> Result<FilterPair> {
    let kind = match spec.choice {
        PairChoice::Fixture => {
            return fixture.map(|fx| fx.pair.clone()).ok_or_else(|| {
                CliError::usage("pair `fixture` needs a fixture graph (fixture:bipartite4|complete4)")
            })
        }
        PairChoice::Kind(kind) => kind,
    };
    let n = graph.n();
    if kind == PairKind::Custom {
        let f = spec.list::<f64>("f")?;
        let g = spec.list::<f64>("g")?;
        let (Some(f), Some(g)) = (f, g) else {
            return Err(CoreError::ExplicitFiltersRequired(kind.label()).into());
        };
        return Ok(FilterPair::new(SpatialFilter::new(f)?, SpectralFilter::new(g)?, kind)?);
    }
    let params = pair_params(spec)?;
    let mut pair = experiment::standard_pair(kind, graph, decomp, center, &params)?;
    if kind == PairKind::DistanceProjection {
        if let Some(alpha) = spec.number("alpha")? {
            pair.spatial = distance_spatial(&geodesic(graph, center)?, alpha)?;
        }
    }
    if let Some(nodes) = spec.list::<usize>("nodes")? {
        pair.spatial = projection_spatial(n, &nodes.into_iter().collect())?;
    }
    if let Some(band) = spec.list::<usize>("band")? {
        let band: BTreeSet<usize> = band.into_iter().collect();
        pair.spectral = projection_spectral(n, &band)?;
    }
    Ok(pair)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Sequential file writer rooted at the output directory.
pub struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    pub fn report(&self) {
        for p in &self.written {
            println!("wrote {}", p.display());
        }
    }
}
