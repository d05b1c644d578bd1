"""
Atomic file output.

All files written by the package go through atomic_write_text so an
interrupted run never leaves a truncated report or grid function behind.
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Union

logger = logging.getLogger(__name__)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    Write text to path via a temporary file in the same directory and a rename.

    Args:
        path: Destination file
        text: Full file content

    Returns:
        The destination path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f'.{path.name}.', suffix='.tmp', dir=path.parent)
    try:
        with os.fdopen(fd, 'w', newline='\n') as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.info("wrote %s", path)
    return path


def format_number(value: float) -> str:
    """Format a real number with 17 significant digits (round-trip exact)."""
    return format(float(value), '.17g')
