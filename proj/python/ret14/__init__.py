"""Relativistic 14-moment closure checks."""

from ._ret14 import *  # noqa: F401,F403
from ._ret14 import __version__, run_verify as _run_verify


def verify(config, suites=(), threads=0):
    """Run the verification suites and return (report, exit_code).

    ``config`` may be a path, a JSON string or a parsed ``RunConfig``.
    """
    if isinstance(config, RunConfig):  # noqa: F405
        cfg = config
    elif isinstance(config, str) and config.lstrip().startswith("{"):
        cfg = parse_config(config)  # noqa: F405
    else:
        cfg = load_config(str(config))  # noqa: F405
    return _run_verify(cfg, list(suites), threads)
