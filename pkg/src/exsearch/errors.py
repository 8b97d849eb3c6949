"""Exception taxonomy shared by the library, the HTTP service and the CLI.

Transport layers map these onto status codes / exit codes; the library
itself only ever raises.
"""


class ExsearchError(Exception):
    """Base class for all errors raised by this package."""


class CorpusFormatError(ExsearchError):
    """A corpus, index or embedding file could not be parsed."""


class DuplicateDocIdError(ExsearchError):
    """Two documents in one corpus share a doc_id."""


class InvalidParameterError(ExsearchError):
    """A request parameter violates its contract (bad k, n_samples, ...)."""


class EmptyQueryError(InvalidParameterError):
    """Query text contains no tokens."""


class UnknownRankerError(InvalidParameterError):
    """Ranker identifier not in the registry; message lists what is."""


class UnknownConverterError(InvalidParameterError):
    """Converter identifier is not one of topk/score/rank."""


class UnknownDocumentError(ExsearchError):
    """doc_id does not exist in the loaded corpus."""


class NotInTopKError(ExsearchError):
    """The document to explain is not inside the current top-k list."""


class PairOrderError(ExsearchError):
    """Pair explanation requested with doc_a not ranked above doc_b."""


class ScoreShiftRequiredError(ExsearchError):
    """Score-based conversion needs a positive top score; shift scores first."""


class DegenerateLocalRegionError(ExsearchError):
    """All perturbation labels are identical: the local region is flat."""


class NoResultsError(ExsearchError):
    """Query retrieved nothing, so there is no list to explain."""
