from __future__ import annotations

import uuid


def new_run_id(prefix: str | None = None) -> str:
    """
    Generate an identifier for one CLI run or sweep.

    Parameters:
        prefix: Optional string to prepend to the UUID4 hex component.

    Returns:
        str: "{prefix}_{uuid4hex}" when prefix is provided; otherwise "uuid4hex".

    Notes:
        - Run ids only ever land in the metadata block of an output file, so they
          never affect the reproducible payload.
    """
    id_part = uuid.uuid4().hex
    if prefix:
        return f"{prefix}_{id_part}"
    return id_part
