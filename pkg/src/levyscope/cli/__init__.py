"""src/levyscope/cli/__init__.py

Command-line interface: flat run configuration and subcommand dispatch.
"""

from levyscope.cli.config import RunConfig, load_config, parse_config
from levyscope.cli.main import main, run

__all__ = ["RunConfig", "load_config", "parse_config", "main", "run"]
