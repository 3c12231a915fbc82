from typing import List, Optional, Sequence

from .management.commands.koppelman import Command


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run ``koppelman`` in-process and return its exit code."""
    argv: List[str] = list(argv or [])
    try:
        Command().run_from_argv(["manage.py", "koppelman", *argv])
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return 0
