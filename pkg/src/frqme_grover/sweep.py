"""Grid sweeps over the scaled coordinates, optimum search and emitters."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import csv
import hashlib
import io
import json
import math
import os
import time
import warnings

import numpy as np

from . import __version__
from .engine import MODES, PositivityWarning, check_density_matrix, compile_sequence
from .grover import NegativeOverlapWarning, efficiency, fidelity, purity, target_state, uniform_state
from .linalg import unvec, vec
from .model import PhysicalParams
from .seqdsl import oracle_sequence, to_text

CSV_COLUMNS = ("omega1_s", "tauc_s", "fidelity", "purity", "efficiency", "mode", "j_hz", "flags")
WORKERS_ENV = "FRQME_GROVER_WORKERS"

DEFAULT_OMEGA_SE = 2 * math.pi * 1e3
DEFAULT_J = 10e3
J_PRESETS = {"10k": 10e3, "100k": 100e3}


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepGrid:
    """Log-spaced grid; each axis is ``(min, max, count)``."""

    omega1_s: tuple = (1e-2, 1e2, 49)
    tauc_s: tuple = (1e-4, 1e0, 49)
    mode: str = "both"
    j_coupling: float = DEFAULT_J
    omega_se: float = DEFAULT_OMEGA_SE
    target: str = "01"

    def __post_init__(self):
        for name in ("omega1_s", "tauc_s"):
            lo, hi, n = getattr(self, name)
            if not (lo > 0 and hi > lo and int(n) >= 1):
                raise ValueError(f"{name} axis needs 0 < min < max and count >= 1")
            object.__setattr__(self, name, (float(lo), float(hi), int(n)))
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.omega_se > 0:
            raise ValueError("omega_se must be > 0")

    @staticmethod
    def _axis(spec):
        lo, hi, n = spec
        return np.logspace(math.log10(lo), math.log10(hi), n)

    @property
    def omega1_axis(self):
        return self._axis(self.omega1_s)

    @property
    def tauc_axis(self):
        return self._axis(self.tauc_s)

    def points(self):
        """(tauc_s, omega1_s) pairs, tauc_s outer."""
        return [(t, w) for t in self.tauc_axis for w in self.omega1_axis]

    def params(self, omega1_s, tauc_s):
        return PhysicalParams.from_scaled(omega1_s, tauc_s, self.omega_se, self.j_coupling)

    def describe(self):
        d = asdict(self)
        d["spacing"] = "log10"
        return d


@dataclass(frozen=True)
class SweepRecord:
    omega1_s: float
    tauc_s: float
    fidelity: float
    purity: float
    efficiency: float
    mode: str
    j_coupling: float
    wall_time: float = field(default=0.0, compare=False)
    flags: tuple = ()

    def csv_row(self):
        num = lambda x: repr(float(x))
        return [num(self.omega1_s), num(self.tauc_s), num(self.fidelity),
                num(self.purity), num(self.efficiency), self.mode,
                num(self.j_coupling), ";".join(self.flags)]


def run_point(p, seq, mode, target="01", channels=None):
    """Compile ``seq`` under ``p``, run it on the uniform superposition and
    collect fidelity, purity and efficiency.

    Positivity and negative-overlap diagnostics end up in ``flags``; trace or
    Hermiticity violations raise.
    """
    start = time.perf_counter()
    flags = set()
    phi = target_state(target)
    rho = uniform_state()
    total = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for seg in compile_sequence(p, seq, mode, channels):
            u = seg.propagator()
            total = u if total is None else u @ total
            rho = unvec(u @ vec(rho), 4)
            check_density_matrix(rho, "state after segment")
        f = fidelity(phi, rho)
    for w in caught:
        if issubclass(w.category, PositivityWarning):
            flags.add("positivity")
        elif issubclass(w.category, NegativeOverlapWarning):
            flags.add("negative-overlap")
        else:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    return SweepRecord(omega1_s=p.omega1_s, tauc_s=p.tauc_s, fidelity=f,
                       purity=purity(rho), efficiency=efficiency(total), mode=mode,
                       j_coupling=p.j_coupling, wall_time=time.perf_counter() - start,
                       flags=tuple(sorted(flags)))


def _sweep_task(args):
    grid, seq, tauc_s, omega1_s = args
    tauc_s, omega1_s = float(tauc_s), float(omega1_s)
    try:
        return run_point(grid.params(omega1_s, tauc_s), seq, grid.mode, grid.target)
    except Exception as exc:
        raise SweepError(f"point omega1_s={omega1_s!r}, tauc_s={tauc_s!r} failed: {exc}") from exc


def default_workers():
    value = os.environ.get(WORKERS_ENV)
    return max(1, int(value)) if value else 1


def run_sweep(grid, seq=None, workers=None):
    """One record per grid point in row-major order (tauc_s outer).

    Output order and values do not depend on ``workers``.
    """
    if seq is None:
        seq = oracle_sequence(grid.target)
    workers = default_workers() if workers is None else int(workers)
    tasks = [(grid, seq, t, w) for t, w in grid.points()]
    if workers <= 1:
        return [_sweep_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_task, tasks, chunksize=chunk))


@dataclass(frozen=True)
class Optimum:
    tauc_s: float
    omega1_s: float
    index: int
    fidelity: float
    interior: bool


def find_optimum(omega1_s, fidelities, tauc_s=float("nan"), atol=1e-12):
    """Fidelity argmax over one fixed-tauc_s row.

    Values within ``atol`` of the maximum count as ties, and ties go to the
    smaller drive amplitude. ``interior`` is False when the
    maximum sits on either edge of the row.
    """
    w = np.asarray(omega1_s, dtype=float)
    f = np.asarray(fidelities, dtype=float)
    if w.size != f.size:
        raise ValueError("row coordinates and values differ in length")
    if w.size < 3:
        raise ValueError("need at least 3 points in the row")
    order = np.argsort(w, kind="stable")
    w, f = w[order], f[order]
    k = int(np.flatnonzero(f >= f.max() - atol)[0])
    return Optimum(float(tauc_s), float(w[k]), k, float(f[k]), 0 < k < w.size - 1)


def rows(records):
    """Group records by tauc_s, preserving grid order."""
    out = {}
    for r in records:
        out.setdefault(r.tauc_s, []).append(r)
    return out


def optimum_table(records):
    return [find_optimum([r.omega1_s for r in row], [r.fidelity for r in row], t)
            for t, row in rows(records).items()]


# -- emitters --------------------------------------------------------------

def sequence_hash(seq):
    return hashlib.sha256(to_text(seq).encode()).hexdigest()


def csv_text(records):
    if not records:
        raise ValueError("nothing to emit")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def read_csv(text):
    recs = []
    for row in csv.DictReader(io.StringIO(text)):
        recs.append(SweepRecord(
            omega1_s=float(row["omega1_s"]), tauc_s=float(row["tauc_s"]),
            fidelity=float(row["fidelity"]), purity=float(row["purity"]),
            efficiency=float(row["efficiency"]), mode=row["mode"],
            j_coupling=float(row["j_hz"]),
            flags=tuple(row["flags"].split(";")) if row["flags"] else ()))
    return recs


def json_text(records, grid=None, seq=None):
    if not records:
        raise ValueError("nothing to emit")
    meta = {"tool": "frqme-grover", "version": __version__}
    if grid is not None:
        meta["grid"] = grid.describe()
    if seq is not None:
        meta["sequence_sha256"] = sequence_hash(seq)
        meta["sequence"] = to_text(seq)
    body = [dict(asdict(r), flags=list(r.flags)) for r in records]
    return json.dumps({"metadata": meta, "records": body}, indent=2) + "\n"


def emit(records, fmt, out=None, grid=None, seq=None):
    """Write records as ``csv`` or ``json`` to ``out`` (path or file object)."""
    if fmt == "csv":
        text = csv_text(records)
    elif fmt == "json":
        text = json_text(records, grid, seq)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is None:
        return text
    if hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def analytic_rows(xs, numeric=False, target="01", omega_se=DEFAULT_OMEGA_SE,
                  j_coupling=DEFAULT_J, seq=None):
    """Closed-form DID-only fidelity/purity over omega1*tau_c values, optionally
    next to the engine's DID-only values for the built-in sequence."""
    from .grover import fidelity_did, purity_did

    if numeric and seq is None:
        seq = oracle_sequence(target)
    out = []
    for x in xs:
        row = {"omega1_tauc": float(x), "fidelity_did": fidelity_did(x),
               "purity_did": purity_did(x)}
        if numeric:
            p = PhysicalParams(omega1=omega_se, tau_c=x / omega_se, omega_se=omega_se,
                               j_coupling=j_coupling)
            rec = run_point(p, seq, "did-only", target)
            row["fidelity_numeric"] = rec.fidelity
            row["purity_numeric"] = rec.purity
        out.append(row)
    return out


def load_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    conf = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if not key:
                raise ValueError(f"{path}:{lineno}: empty key")
            conf[key.replace("-", "_")] = value
    return conf

