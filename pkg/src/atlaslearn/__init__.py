"""Atlas learning for manifold-sampled point clouds.

Learns a cover of overlapping coordinate charts over a neighborhood
graph, merging charts only where their overlap is connected and free
of topological holes, then embeds each chart with geodesic MDS and
builds barycentric inverse maps back to ambient space.
"""

__version__ = "0.1.0"

from .atlas import (
    Atlas,
    ChartDomain,
    can_combine,
    combine_until_fixpoint,
    farthest_point_sample,
    initialize_charts,
    intersect,
)
from .cycles import (
    find_atomic_cycle_longer_than,
    has_atomic_cycle_longer_than,
    is_atomic_cycle,
)
from .embed import ChartEmbedding, classical_mds, embed_atlas, geodesic_matrix
from .errors import (
    ArtifactError,
    ArtifactFormatError,
    ArtifactVersionError,
    AtlasError,
    DegeneracyError,
    OutOfDomainError,
    ParameterError,
    ParseError,
    StructuralError,
)
from .graph import (
    NeighborhoodGraph,
    PointCloud,
    Subgraph,
    as_point_cloud,
    build_epsilon_graph,
    build_knn_graph,
    connected_components,
    shortest_path_distances,
)
from .inverse import (
    BarycentricCoords,
    Triangulation,
    barycentric,
    delaunay,
    lift,
    locate,
)
from .metrics import TrustworthinessReport, report, trustworthiness
from .pipeline import (
    AtlasArtifact,
    PipelineConfig,
    ingest_csv,
    load_artifact,
    run,
    save_artifact,
)
from .synthetic import (
    LabeledCloud,
    add_gaussian_noise,
    sample_cylinder,
    sample_klein,
    sample_so3,
    sample_sphere,
    sample_torus,
)

__all__ = [
    "__version__",
    "Atlas",
    "AtlasArtifact",
    "AtlasError",
    "ArtifactError",
    "ArtifactFormatError",
    "ArtifactVersionError",
    "BarycentricCoords",
    "ChartDomain",
    "ChartEmbedding",
    "DegeneracyError",
    "LabeledCloud",
    "NeighborhoodGraph",
    "OutOfDomainError",
    "ParameterError",
    "ParseError",
    "PipelineConfig",
    "PointCloud",
    "StructuralError",
    "Subgraph",
    "Triangulation",
    "TrustworthinessReport",
    "add_gaussian_noise",
    "as_point_cloud",
    "barycentric",
    "build_epsilon_graph",
    "build_knn_graph",
    "can_combine",
    "classical_mds",
    "combine_until_fixpoint",
    "connected_components",
    "delaunay",
    "embed_atlas",
    "farthest_point_sample",
    "find_atomic_cycle_longer_than",
    "geodesic_matrix",
    "has_atomic_cycle_longer_than",
    "ingest_csv",
    "initialize_charts",
    "intersect",
    "is_atomic_cycle",
    "lift",
    "load_artifact",
    "locate",
    "report",
    "run",
    "sample_cylinder",
    "sample_klein",
    "sample_so3",
    "sample_sphere",
    "sample_torus",
    "save_artifact",
    "shortest_path_distances",
    "trustworthiness",
]
