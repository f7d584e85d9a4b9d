"""Python front end for the koszulkit C++ library."""

from ._koszulkit import (
    AlgebraError,
    Document,
    DslError,
    __version__,
    augmentations,
    check_ainf,
    check_coainf,
    check_d2,
    diagnostics,
    example_ids,
    example_text,
    formal_dimension,
    koszul_verdict,
    leg_from_degree,
    load_example,
    parse,
    run_cli,
    verify_twist,
)

__all__ = [
    "AlgebraError",
    "Document",
    "DslError",
    "__version__",
    "augmentations",
    "check_ainf",
    "check_coainf",
    "check_d2",
    "diagnostics",
    "example_ids",
    "example_text",
    "formal_dimension",
    "koszul_verdict",
    "leg_from_degree",
    "load_example",
    "parse",
    "run_cli",
    "verify_twist",
]
