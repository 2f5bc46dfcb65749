"""Python bindings for the residue generator library."""

import json

from ._rgen import (  # noqa: F401
    BudgetExceeded,
    Generator,
    NetlistError,
    ParameterError,
    __version__,
    compare_sharing,
    d1_decode,
    d1_encode,
    generate,
    residue,
    verify,
)


def report(p, n, family="universal-d1"):
    """Build report of a generator as a dict."""
    return json.loads(generate(p, n, family).report_json())
