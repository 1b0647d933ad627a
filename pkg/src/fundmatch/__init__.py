"""fundmatch: match researchers to funding calls.

Bibliometric publication sets per researcher are compared to call texts in an
embedding space; cosine similarities are aggregated, normalized within each
researcher, and converted to institution-relative percentile rankings.
"""

from .analytics import DistributionStats, IndicatorSummary, OverlapCell, distribution, overlap_matrix, spearman, summary
from .config import PipelineConfig, load_config, save_config
from .embedding import (
    EmbeddingVector,
    HashEmbedder,
    SidecarEmbedder,
    VectorStore,
    compute_baseline,
    debias,
    embed_batch,
    export_vectors,
    hash_embed,
    import_vectors,
)
from .errors import FundmatchError, IdentityConflictError, ProviderError, ValidationError
from .identity import filter_population, normalize_name, resolve_identities, resolve_identities_detailed
from .ingest import ingest_author_profiles, ingest_calls, ingest_master_list, ingest_publications, enrich_topics
from .pipeline import MatchingEngine, RunSnapshot
from .profiling import IndicatorSpec, PublicationSet, build_set, default_indicators, in_window, is_leading
from .ranking import Assignment, PercentileEntry, RankingBook, assign, percentiles
from .records import (
    AuthorSlot,
    CallPart,
    CallRecord,
    MasterRecord,
    PublicationRecord,
    ResearcherProfile,
    ScholarlyDocument,
    SourceAuthorProfile,
    to_document,
)
from .scoring import AggregatedScore, NormalizedScore, PairScore, ScoreRow, aggregate, cosine, normalize, score_matrix, top_k_for

__version__ = "0.1.0"
