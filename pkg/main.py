import sys
from typing import Optional, Sequence

from cli.commands import BenchmarkController
from cli.parser import build_parser
from core.config import CurrentConfig
from core.logger import log_debug, set_level


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad arguments and 0 after --help
        return int(e.code or 0)
    if args.log_level:
        set_level(args.log_level)
    log_debug(f"Active configuration:\n{CurrentConfig.summary()}")
    return BenchmarkController().dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
