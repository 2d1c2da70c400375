from ._revpeb import (
    Graph,
    Solution,
    dt_value,
    erank,
    generate,
    rev_oracle,
    solve,
    validate,
    vrev_oracle,
)

__all__ = [
    "Graph",
    "Solution",
    "dt_value",
    "erank",
    "generate",
    "rev_oracle",
    "solve",
    "validate",
    "vrev_oracle",
]
