"""On-disk JSON cache of symbolic bundles, keyed by (n, A, r)."""

from __future__ import annotations

import json
import os
from pathlib import Path

from .algebra import RatFunc
from .linear_forms import FormParams, LinearFormBundle, PfcTable, build_bundle

FORMAT_VERSION = 1
ENV_VAR = "QBETA_CACHE_DIR"


def resolve_cache_dir(cli_value: str | None) -> Path | None:
    """The environment variable wins over the command-line flag."""
    env = os.environ.get(ENV_VAR)
    chosen = env or cli_value
    return Path(chosen) if chosen else None


def _path(cache_dir: Path, params: FormParams) -> Path:
    return cache_dir / f"bundle_{params.key()}.json"


def dump(table: PfcTable, bundle: LinearFormBundle) -> dict:
    p = table.params
    return {
        "format_version": FORMAT_VERSION,
        "params": {"n": p.n, "A": p.A, "r": p.r},
        "c": {f"{s},{j}": v.to_json() for (s, j), v in sorted(table.c.items())},
        "phat0": bundle.phat0.to_json(),
        "phat": {str(j): v.to_json() for j, v in sorted(bundle.phat.items())},
    }


def load(data: dict) -> tuple[PfcTable, LinearFormBundle]:
    if data.get("format_version") != FORMAT_VERSION:
        raise ValueError("stale cache format")
    p = FormParams(**data["params"])
    c, d = {}, {}
    for key, v in data["c"].items():
        s, j = map(int, key.split(","))
        c[s, j] = RatFunc.from_json(v)
        d[s, j] = c[s, j].shifted((2 * j - 1) * s) * (-1 if s % 2 else 1)
    table = PfcTable(p, c, d)
    bundle = LinearFormBundle(
        p,
        RatFunc.from_json(data["phat0"]),
        {int(j): RatFunc.from_json(v) for j, v in data["phat"].items()},
    )
    return table, bundle


def get_bundle(params: FormParams, cache_dir: Path | None = None, force: bool = False):
    """(table, bundle, cache_hit) — computes and stores on a miss."""
    if cache_dir is not None:
        path = _path(cache_dir, params)
        if path.exists():
            try:
                table, bundle = load(json.loads(path.read_text()))
                if table.params == params:
                    return table, bundle, True
            except (ValueError, KeyError, TypeError):
                pass  # stale or corrupt: rebuild
    table, _, bundle = build_bundle(params, force=force)
    if cache_dir is not None:
        cache_dir.mkdir(parents=True, exist_ok=True)
        tmp = _path(cache_dir, params).with_suffix(".tmp")
        tmp.write_text(json.dumps(dump(table, bundle), sort_keys=True))
        tmp.replace(_path(cache_dir, params))
    return table, bundle, False
