from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from toda_topo import complex as cx  # noqa: E402
from toda_topo import rootsys  # noqa: E402


@lru_cache(maxsize=None)
def group(label: str):
    return rootsys.load(label)


@lru_cache(maxsize=None)
def chain_complex(label: str):
    rs, W = group(label)
    return cx.build_complex(rs, W)
