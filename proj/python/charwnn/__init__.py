"""Named entity recognition with word and character embeddings."""

from ._charwnn import (
    ConfigError,
    DataError,
    DivergenceError,
    Model,
    evaluate,
    gradient_check,
    iob2_decode,
    iob2_encode,
    log_likelihood,
    log_partition,
    normalize_word,
    path_score,
    train,
    viterbi_decode,
)

__all__ = [
    "ConfigError",
    "DataError",
    "DivergenceError",
    "Model",
    "evaluate",
    "gradient_check",
    "iob2_decode",
    "iob2_encode",
    "log_likelihood",
    "log_partition",
    "normalize_word",
    "path_score",
    "train",
    "viterbi_decode",
]
