"""Corpus construction: cleaning, TF-IDF features, datasets, splits, and
multi-label oversampling."""

from apilabels.corpus.cleaning import clean_text, remove_templates, stopwords
from apilabels.corpus.dataset import (
    CORPUS_FIELD_CHOICES,
    Document,
    MultiLabelDataset,
    assemble_text,
    compose_row_id,
    diagnostics,
    filter_labels,
    merge_datasets,
    restrict_labels,
    select_fields,
)
from apilabels.corpus.mlsmote import irlbl, mean_ir, mlsmote
from apilabels.corpus.splits import SplitPlan, shuffle_split
from apilabels.corpus.tfidf import TfidfModel, fit_tfidf, ngrams, transform

__all__ = [
    "CORPUS_FIELD_CHOICES",
    "Document",
    "MultiLabelDataset",
    "SplitPlan",
    "TfidfModel",
    "assemble_text",
    "clean_text",
    "compose_row_id",
    "diagnostics",
    "filter_labels",
    "fit_tfidf",
    "irlbl",
    "mean_ir",
    "merge_datasets",
    "mlsmote",
    "ngrams",
    "remove_templates",
    "restrict_labels",
    "select_fields",
    "shuffle_split",
    "stopwords",
    "transform",
]
