import json
import logging
import os

from ..core.simplex import LatticeSimplex, from_columns
from .errors import ParameterError

__all__ = ['read_simplex_file']

logger = logging.getLogger(__name__)


def _parse_matrix_lines(lines, path):
    rows = []
    for number, line in enumerate(lines, start=1):
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([int(x) for x in line.split()])
        except ValueError:
            raise ParameterError(f"{path}, line {number}: expected integers, got {line!r}")
    return rows


def read_simplex_file(path, label=None):
    """
    Read a simplex from a JSON or plain matrix file.

    JSON files hold {"vertices": [[...], ...]} with every vertex explicit.
    Text files hold one matrix row per line, whitespace separated, with the
    vertices as columns; with as many columns as rows the origin is added
    as vertex 0. Lines starting with '#' are skipped.

    Args:
        path (str): File to read
        label (str): Name for the simplex, defaults to the file name

    Returns:
        LatticeSimplex
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Simplex file not found: {path}")
    label = label or os.path.basename(path)

    with open(path, "r", encoding="utf-8") as f:
        text = f.read()

    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParameterError(f"{path}: invalid JSON ({e})")
        vertices = data.get("vertices") if isinstance(data, dict) else None
        if not isinstance(vertices, list) or not vertices:
            raise ParameterError(f"{path}: JSON input needs a nonempty 'vertices' list")
        if not all(isinstance(v, list) for v in vertices):
            raise ParameterError(f"{path}: every vertex must be a list of coordinates")
        logger.debug(f"Read {len(vertices)} vertices from {path}")
        return LatticeSimplex(tuple(tuple(v) for v in vertices), label=label)

    rows = _parse_matrix_lines([line.strip() for line in text.splitlines()], path)
    if not rows:
        raise ParameterError(f"{path}: no matrix rows found")
    logger.debug(f"Read a {len(rows)}x{len(rows[0])} vertex matrix from {path}")
    return from_columns(rows, label=label)
