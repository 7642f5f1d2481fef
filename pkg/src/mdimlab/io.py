"""JSON and CSV serialization. Rationals are always written as ``"p/q"``."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .groups import FiniteSubset, GroupContext, group_for
from .tiling import FolnerData, TilingScheme
from .transport import DiscreteMeasure, FiniteMetric


class ConfigError(ValueError):
    pass


def frac_str(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_frac(v) -> Fraction:
    if isinstance(v, bool):
        raise ConfigError(f"not a rational: {v!r}")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"not a rational: {v!r}")


def jsonable(obj: Any) -> Any:
    """Plain JSON data: rationals as ``"p/q"``, tuples as lists, sets sorted."""
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, FiniteSubset):
        return [jsonable(g) for g in obj]
    if isinstance(obj, Mapping):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj, key=repr)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    _atomic_write(Path(path), dumps(obj))


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)  # RFC 4180 quoting and CRLF line ends
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return frac_str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    return str(v)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    _atomic_write(Path(path), csv_text(header, rows))


def load_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None


# -- tilings --------------------------------------------------------------------------


def _element(group: GroupContext, v):
    try:
        return group.parse(v)
    except (TypeError, ValueError):
        raise ConfigError(f"bad group element {v!r}") from None


def scheme_to_dict(scheme: TilingScheme) -> dict:
    fd = scheme.folner
    return {
        "group": fd.group.family.value,
        "sets": [jsonable(F) for F in fd.sets],
        "bounds": list(fd.bounds),
        "centers": [
            {"k": k, "n": n, "c": jsonable(C)} for (k, n), C in sorted(scheme.centers.items())
        ],
    }


def scheme_from_dict(d: Mapping) -> TilingScheme:
    try:
        group = group_for(d.get("group", "IntegerLine"))
        sets = tuple(FiniteSubset(group, (_element(group, g) for g in F)) for F in d["sets"])
        bounds = tuple(int(b) for b in d["bounds"])
        centers = {}
        for entry in d.get("centers", ()):
            key = (int(entry["k"]), int(entry["n"]))
            centers[key] = FiniteSubset(group, (_element(group, g) for g in entry["c"]))
        return TilingScheme(FolnerData(sets, bounds), centers)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed tiling scheme: {exc}") from None


# -- measures and metrics --------------------------------------------------------------


def metric_from_dict(d: Mapping) -> FiniteMetric:
    """``{"points": [...], "distances": [[...]]}`` (full matrix) or
    ``{"points": [...], "pairs": [[p, q, d], ...]}``."""
    if "points" not in d:
        raise ConfigError("metric needs a point list")
    points = [str(p) for p in d["points"]]
    if "pairs" in d:
        table = {(str(p), str(q)): parse_frac(v) for p, q, v in d["pairs"]}
    elif "distances" in d:
        dist = d["distances"]
        if len(dist) != len(points) or any(len(row) != len(points) for row in dist):
            raise ConfigError("distance matrix does not match the points")
        table = {}
        for a, p in enumerate(points):
            for b, q in enumerate(points):
                v = parse_frac(dist[a][b])
                if (q, p) in table and table[(q, p)] != v:
                    raise ConfigError("distance matrix is not symmetric")
                if a == b and v != 0:
                    raise ConfigError("distance matrix needs a zero diagonal")
                table[(p, q)] = v
    else:
        raise ConfigError("metric needs 'distances' or 'pairs'")
    try:
        return FiniteMetric(points, table)
    except KeyError as exc:
        raise ConfigError(f"missing distance for {exc.args[0]}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def measure_from_dict(d: Mapping) -> DiscreteMeasure:
    return DiscreteMeasure({str(p): parse_frac(v) for p, v in d.items()})
