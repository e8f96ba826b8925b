"""Python interface to the twisted-thunk combinator interpreter."""

import os
from pathlib import Path

_bundled = Path(__file__).resolve().parent / "lib"
if (_bundled / "prelude.eg").exists():
    os.environ.setdefault("TWIST_PRELUDE_DIR", str(_bundled))

from ._twist import (  # noqa: E402
    CompileError,
    InternalFault,
    Session,
    check_trace,
    disassemble,
    evaluate,
    live_nodes,
    run_file,
    trace,
)

__all__ = [
    "CompileError",
    "InternalFault",
    "Session",
    "check_trace",
    "disassemble",
    "evaluate",
    "live_nodes",
    "run_file",
    "trace",
]
