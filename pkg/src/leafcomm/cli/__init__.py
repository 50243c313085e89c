from .commands import COMMAND_FUNCTIONS
from .config import COMMANDS, validate_config
from .driver import EXIT_FAILED, EXIT_INVALID, EXIT_OK, build_parser, main, run
from .report import (
    Outcome,
    deterministic_part,
    dump_report,
    make_report,
    render_checks,
    render_result,
    versions,
)
from .suite import check_names, register_check, run_suite

del commands
del config
del driver
del report
del suite
