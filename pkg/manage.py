#!/usr/bin/env python
"""Entry point for the ``koppelman`` command.

    python manage.py koppelman moment --r 2 --s 3 --phi "tau^2"

A bare verb is shorthand for ``koppelman <verb>``.
"""
import os
import sys

VERBS = {"semigroup", "represent", "solve", "moment", "verify", "growth"}


def main(argv=None):
    argv = list(sys.argv if argv is None else argv)
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install requirements.txt into the active "
            "environment first."
        ) from exc
    if len(argv) > 1 and argv[1] in VERBS:
        argv.insert(1, "koppelman")
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
