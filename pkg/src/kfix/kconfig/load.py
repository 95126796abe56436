"""File loading with `source` resolution.

Sourced paths are resolved relative to the directory of the root
file, matching how a model tree is laid out on disk.  Inclusion
cycles are reported with the full chain.
"""

from __future__ import annotations

from pathlib import Path

from .ast import KconfigModel
from .lexer import tokenize
from .linker import link
from .parser import parse


def load_model(path: str | Path, do_link: bool = True) -> KconfigModel:
    root_path = Path(path)
    root_dir = root_path.parent

    def loader(rel: str):
        target = root_dir / rel
        text = target.read_text()
        return tokenize(text, str(target)), str(target)

    text = root_path.read_text()
    model = parse(tokenize(text, str(root_path)), str(root_path), loader)
    return link(model) if do_link else model
