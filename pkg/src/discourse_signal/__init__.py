"""discourse_signal: crowd-labeled sentiment, n-gram classifiers, and
lead-lag market analysis for online discussion channels.

The pipeline runs corpus -> annotation -> features -> classify to turn raw
discussion posts into daily sentiment counts, then econometrics relates
those counts to market movements. The cli module chains the stages behind
the discourse-signal command.
"""

__version__ = "0.1.0"

from . import (annotation, classify, corpus, econometrics, features, market,
               synthetic)
from .errors import (DiscourseSignalError, NumericError, ParseError,
                     RangeError, SchemaError, ValidationError)

__all__ = [
    "DiscourseSignalError", "NumericError", "ParseError", "RangeError",
    "SchemaError", "ValidationError", "annotation", "classify", "corpus",
    "econometrics", "features", "market", "synthetic",
]
