"""Entry point: flair-stream COMMAND [options], or python -m flair_stream."""

import logging
import sys

from flair_stream.settings import LOG_LEVEL


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    from flair_stream.cli import cli

    return cli.run(argv)


if __name__ == "__main__":
    sys.exit(main())
