#!/usr/bin/env python
"""Run the kernelforge command line from a source checkout."""
import sys


def main():
    try:
        from kernelforge.cli.main import main as run
    except ImportError as exc:
        raise ImportError(
            "Couldn't import kernelforge. Are numpy and scipy installed and "
            "is the checkout on your PYTHONPATH?"
        ) from exc
    return run(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())
