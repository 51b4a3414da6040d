"""Topical user profiling from archived micro-blog posts.

The package turns a static post archive into an evolving store of
user profiles: bounded topical contexts select posts, retweet
networks and their communities scope the audience, per-user metrics
accumulate across contexts, and rankings over the store surface the
accounts worth reviewing next.
"""

from .communities import (
    CommunityAssignment,
    ComparisonSummary,
    DetectionReport,
    codelength,
    compare,
    demon,
    detection_report,
    infomap,
)
from .contexts import Context, PostSet, evaluate, evaluate_complement
from .corpus import Archive, LoadReport, Post, UserSnapshot, fetch_timeline, load_archive
from .discovery import CandidateContext, CandidateQueue, discover, monitor_recurring
from .metrics import CoreFeatures, MetricVector, core_features, metric_vector
from .network import ContextNetwork, NetworkStats, assortativity, build, stats
from .pipeline import IterationReport, Pipeline, PipelineConfig, derive_seed
from .ranking import (
    RankedList,
    RankEntry,
    apply_inactive_rule,
    custom_rank,
    rank1,
    rank2,
    rank3,
    ranked_csv,
)
from .store import ProfileEntry, ProfileStore, StoreIntegrityError

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "CandidateContext",
    "CandidateQueue",
    "CommunityAssignment",
    "ComparisonSummary",
    "Context",
    "ContextNetwork",
    "CoreFeatures",
    "DetectionReport",
    "IterationReport",
    "LoadReport",
    "MetricVector",
    "NetworkStats",
    "Pipeline",
    "PipelineConfig",
    "Post",
    "PostSet",
    "ProfileEntry",
    "ProfileStore",
    "RankEntry",
    "RankedList",
    "StoreIntegrityError",
    "UserSnapshot",
    "apply_inactive_rule",
    "assortativity",
    "build",
    "codelength",
    "compare",
    "core_features",
    "custom_rank",
    "demon",
    "derive_seed",
    "detection_report",
    "discover",
    "evaluate",
    "evaluate_complement",
    "fetch_timeline",
    "infomap",
    "load_archive",
    "metric_vector",
    "monitor_recurring",
    "rank1",
    "rank2",
    "rank3",
    "ranked_csv",
    "stats",
]
