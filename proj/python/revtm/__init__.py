"""Reversible Turing machines, a universal prefix machine and budgeted logical depth."""

from ._revtm import (
    DepthLab,
    MachineError,
    NotReversibleError,
    ParseError,
    UniversalMachine,
    __version__,
    bennett_compile,
    bijective_binary,
    catalog_encoding,
    corpus_names,
    corpus_text,
    encode_index,
    literal_payload,
    run,
    validate,
    verify_reversible,
)

__all__ = [
    "DepthLab",
    "MachineError",
    "NotReversibleError",
    "ParseError",
    "UniversalMachine",
    "__version__",
    "bennett_compile",
    "bijective_binary",
    "catalog_encoding",
    "corpus_names",
    "corpus_text",
    "encode_index",
    "literal_payload",
    "run",
    "validate",
    "verify_reversible",
]
