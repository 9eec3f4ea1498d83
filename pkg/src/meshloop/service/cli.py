"""meshloop-serve: run the session service over HTTP.

Configuration comes from flags, falling back to MESHLOOP_* environment
variables, falling back to defaults.
"""
from __future__ import annotations

import argparse
import os

from .app import create_app
from .manager import DEFAULT_MAX_ITERATIONS, SessionManager


def _env(name: str, default, cast):
    raw = os.environ.get(f"MESHLOOP_{name}")
    return cast(raw) if raw is not None else default


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshloop-serve",
        description="HTTP service for preference-guided mesh reduction sessions",
    )
    parser.add_argument("--host", default=_env("HOST", "127.0.0.1", str))
    parser.add_argument("--port", type=int, default=_env("PORT", 8337, int))
    parser.add_argument("--data-dir",
                        default=_env("DATA_DIR", "./meshloop-data", str),
                        help="directory for the event log and mesh payloads")
    parser.add_argument("--workers", type=int,
                        default=_env("WORKERS", 0, int),
                        help="decimation worker threads (0 = CPU count)")
    parser.add_argument("--max-iterations", type=int,
                        default=_env("MAX_ITERATIONS", DEFAULT_MAX_ITERATIONS, int))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    manager = SessionManager(
        args.data_dir,
        max_iterations=args.max_iterations,
        workers=args.workers or None,
    )
    app = create_app(manager)
    import uvicorn
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
