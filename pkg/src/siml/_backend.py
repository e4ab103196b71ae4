"""Select the compiled core when it was built, else the NumPy fallback.

Set ``SIML_BACKEND=python`` to force the fallback (``compiled`` makes a
missing extension an import error instead of a silent downgrade).
"""

import logging
import os

from siml import _fallback

logger = logging.getLogger(__name__)

_requested = os.environ.get("SIML_BACKEND", "auto").lower()

if _requested == "python":
    core = _fallback
else:
    try:
        from siml import _core as core
    except ImportError:
        if _requested == "compiled":
            raise
        logger.info("compiled core unavailable; using NumPy fallback")
        core = _fallback

NAME = "compiled" if core is not _fallback else "python"

BACKENDS = {"python": _fallback}
if NAME == "compiled":
    BACKENDS["compiled"] = core
else:
    try:
        from siml import _core as _compiled

        BACKENDS["compiled"] = _compiled
    except ImportError:
        pass
