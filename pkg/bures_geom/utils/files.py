import json
import sys
from pathlib import Path
from typing import List, Optional

from ..errors import ParseError


def read_json(path: Path):
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError(f"{path}: invalid JSON ({e})") from None
    except OSError as e:
        raise ParseError(f"{path}: cannot be read ({e.strerror or e})") from None


def write_text(text: str, path: Optional[Path] = None):
    """Write to `path`, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(text)


def tail_lines(path: Path, n: int = 200) -> List[str]:
    if not path.exists():
        return []
    with path.open("r", encoding="utf-8") as f:
        lines = f.readlines()
    return lines[-n:]
