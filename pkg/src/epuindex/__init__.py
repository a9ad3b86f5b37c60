"""Token-distance triple EPU index construction and nowcasting evaluation."""

from epuindex.corpus import Document, TokenizerConfig, parse_corpus, tokenize
from epuindex.errors import ConfigError, DataError, EpuError, NumericalError
from epuindex.index import (
    EpuIndex,
    MonthlySourceSeries,
    NormalizationParams,
    aggregate_index,
    monthly_frequency,
    normalize_source,
)
from epuindex.lexicon import KeywordOccurrence, Lexicon, load_lexicon, match_keywords
from epuindex.triples import (
    CandidateTriple,
    TripleParams,
    TripleSelection,
    candidate_triples,
    count_triples,
    max_disjoint_oracle,
    pairwise_distance,
    select_unique_triples,
)

__all__ = [
    "CandidateTriple",
    "ConfigError",
    "DataError",
    "Document",
    "EpuError",
    "EpuIndex",
    "KeywordOccurrence",
    "Lexicon",
    "MonthlySourceSeries",
    "NormalizationParams",
    "NumericalError",
    "TokenizerConfig",
    "TripleParams",
    "TripleSelection",
    "aggregate_index",
    "candidate_triples",
    "count_triples",
    "load_lexicon",
    "match_keywords",
    "max_disjoint_oracle",
    "monthly_frequency",
    "normalize_source",
    "pairwise_distance",
    "parse_corpus",
    "select_unique_triples",
    "tokenize",
]
