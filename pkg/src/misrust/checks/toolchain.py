from __future__ import annotations

from dataclasses import replace

from ..diagnostic import CONFIG_FILE, RUN_LEVEL_SPAN, Diagnostic
from . import CheckRun, register

PINNED_TOOLCHAIN = "rustc 1.92.0 (ded5c06cf 2025-12-08)"


@register("CHK-4.1.1", "4.1.1", run_level=True)
def check_toolchain_pinned(run: CheckRun) -> list[Diagnostic]:
    """Run-level: the configuration must name the compiler the code is qualified against."""
    if run.toolchain and run.toolchain.strip():
        return []
    d = run.diag(RUN_LEVEL_SPAN, "configuration does not pin a toolchain; set a non-empty `toolchain`")
    return [replace(d, file=CONFIG_FILE)]
