import logging
import sys
from typing import Sequence

from core.config import settings
from cli.parser import build_parser
from exceptions.sim_exceptions import SimException

settings.logging.configure_logging()
log = logging.getLogger(__name__)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except SimException as exc:
        log.error("%s > %s", type(exc).__name__, exc.detail)
        return exc.exit_code
    except Exception as e:
        log.exception("Unexpected failure > %s", e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
