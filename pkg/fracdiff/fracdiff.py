#
# Command-line front end: closed-form propagators of fractional diffusion
# equations, their numerical oracles and the verification suite.
#

import logging
import sys
import traceback

import fracdiff
from fracdiff.cli.commands import run_command
from fracdiff.cli.config import RunConfig, parse_config
from fracdiff.core.errors import ConfigError, FracDiffError

# Exit statuses
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


# Class defining ANSI color codes for terminal output
class color:
    RED = '\033[91m'
    BOLD = '\033[1m'
    GREY = '\033[90m'
    END = '\033[0m'


class FracDiff:

    # Runs one configured subcommand; stdout is reserved for the command output,
    # so diagnostics go to stderr.

    version = fracdiff.__version__

    def __init__(self, config: RunConfig, debug: bool = False):
        self.config = config
        self.debug = debug

    def debug_log(self, message: str, level: int = 0):
        """Structured debug logging with color-coded levels."""
        if not self.debug:
            return

        colors = {
            0: color.GREY,    # general info
            1: color.BOLD,    # important info
            2: color.RED      # errors and failed checks
        }

        color_code = colors.get(level, color.GREY)
        print(f"{color_code}{message}{color.END}", file=sys.stderr)

    def debug_exception(self, exception):
        """Log exceptions with structured formatting and full stack trace."""
        if not self.debug:
            return

        exception_str = str(traceback.format_exc()).strip()
        print(f"{color.RED}Exception: {exception}{color.END}", file=sys.stderr)
        print(f"{color.GREY}{exception_str}{color.END}", file=sys.stderr)
        print(f"{color.GREY}---{color.END}", file=sys.stderr)

    def run(self) -> int:
        self.debug_log(f"Command {self.config.command}: {self.config.model}", 1)
        return run_command(self.config, self)


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except ConfigError as e:
        print(f"fracdiff: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if config is None:
        print(FracDiff.version)
        return EXIT_OK

    app = FracDiff(config, debug=config.debug)
    if config.debug:
        logging.getLogger("fracdiff").setLevel(logging.DEBUG)
        app.debug_log(f"Debug mode is enabled (v {FracDiff.version})", 2)

    try:
        return app.run()
    except ConfigError as e:
        app.debug_exception(e)
        print(f"fracdiff: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (FracDiffError, OSError) as e:
        app.debug_exception(e)
        print(f"fracdiff: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

# Helper for tests

def create_fracdiff(argv=("profile",), debug: bool = False) -> FracDiff:
    return FracDiff(parse_config(list(argv)), debug=debug)
