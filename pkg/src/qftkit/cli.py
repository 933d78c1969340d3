"""Command-line entry point: parameter sweeps and verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import densities
from .errors import ConsistencyWarning, DomainError, QFTError
from .expansion import SeriesTruncation, h_series, kernel_exact
from .gaussianqft import classical_gaussian_ft, fixed_q_params, gaussian_real_oracle, qft_gaussian_real
from .qcore import QIndex
from .qft import real_axis_values, transform_values
from .verify import INVERSION_TOL, SCHEMA, SUITES, inversion_error, run_suite


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return "%.17g" % v


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QFTKIT_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, chunks):
    """fn over chunks with at most QFTKIT_THREADS workers; results in chunk order."""
    n = _threads()
    if n == 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, chunks))


def _chunks(a, size=8):
    return [a[i:i + size] for i in range(0, len(a), size)]


def grid(lo, hi, n):
    if not n >= 2:
        raise UsageError("--n must be at least 2")
    if not lo < hi:
        raise UsageError(f"grid minimum {lo} must be below maximum {hi}")
    return np.linspace(lo, hi, n)


def _qindex(q) -> QIndex:
    try:
        return QIndex(q)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _positive(name, v):
    if not v > 0:
        raise UsageError(f"{name} must be positive, got {v}")
    return v


def emit(columns, rows, fmt, out, meta=None):
    """Write a table as CSV (17 significant digits) or JSON."""
    if fmt == "csv":
        out.write(",".join(columns) + "\n")
        for r in rows:
            out.write(",".join(_fmt(v) for v in r) + "\n")
    else:
        doc = {"schema": SCHEMA, **(meta or {}), "columns": list(columns), "rows": [[float(v) for v in r] for r in rows]}
        out.write(json.dumps(doc, indent=1) + "\n")


# ------------------------------------------------------------ commands


def cmd_gaussian(a):
    q = _qindex(a.q)
    alpha = _positive("--alpha", a.alpha)
    ks = grid(a.k_min, a.k_max, a.n)
    if q.is_classical:
        closed = classical_gaussian_ft(ks, alpha)
        f = densities.gaussian(alpha)

        def oracle(chunk):
            return real_axis_values(f, q, chunk, tol=1e-13, rel_tol=1e-13)[0].real
    else:
        p = fixed_q_params(q, alpha)
        closed = qft_gaussian_real(p, ks)

        def oracle(chunk):
            return gaussian_real_oracle(p, chunk)[0].real

    orc = np.concatenate(parallel_map(oracle, _chunks(ks)))
    err = np.abs(closed - orc)
    rows = list(zip(ks, closed, orc, err))
    failed = a.check and bool(np.any(err > a.tol))
    return ("k", "closed_form", "oracle", "abs_err"), rows, failed, {"q": q.q, "alpha": alpha}


def _density(a):
    name = a.density
    if name == "qgaussian":
        return densities.q_gaussian(a.qprime, _positive("--alpha", a.alpha))
    if name == "gaussian":
        return densities.gaussian(_positive("--alpha", a.alpha))
    table = {
        "box": densities.box,
        "laplace": densities.laplace,
        "triangle": densities.triangle,
        "logistic": densities.logistic,
        "sech": densities.sech,
        "mixture": densities.mixture,
    }
    return table[name]()


def cmd_transform(a):
    q = _qindex(a.q)
    if a.density == "qgaussian":
        _qindex(a.qprime)
    f = _density(a)
    ks = grid(a.k_min, a.k_max, a.n)
    if a.imag == 0:
        if q.q == 1.0 and f.decay.kind == "algebraic":
            raise UsageError("the real-axis integral at q=1 needs a density with exponential decay; pass --imag")

        def fn(chunk):
            v, e, _ = real_axis_values(f, q, chunk)
            return v, e
    else:
        def fn(chunk):
            v, e, _ = transform_values(f, q, np.asarray(chunk) + 1j * a.imag)
            return v, e

    parts = parallel_map(fn, _chunks(ks))
    vals = np.concatenate([p[0] for p in parts])
    errs = np.concatenate([p[1] for p in parts])
    rows = [(k, v.real, v.imag, e) for k, v, e in zip(ks, vals, errs)]
    failed = a.check and bool(np.any(errs > a.tol))
    meta = {"q": q.q, "density": f.name, "imag": a.imag}
    return ("k", "value_re", "value_im", "abs_err_estimate"), rows, failed, meta


def cmd_series(a):
    q = _qindex(a.q)
    if not 0 < a.f_value <= 1e300:
        raise UsageError("--f-value must be positive")
    ks = grid(a.k_min, a.k_max, a.n)
    trunc = SeriesTruncation(a.order)
    rows = []
    for k in ks:
        s = h_series(a.x, k, q, trunc, a.f_value)
        e = kernel_exact(a.x, k, q, a.f_value)
        rows.append((k, s.real, s.imag, e.real, e.imag, abs(s - e)))
    failed = a.check and any(r[-1] > a.tol for r in rows)
    cols = ("k", "series_re", "series_im", "exact_re", "exact_im", "abs_err")
    return cols, rows, failed, {"q": q.q, "x": a.x, "f_value": a.f_value, "order": a.order}


def cmd_invert(a):
    if a.density == "qgaussian":
        _qindex(a.q)
        if a.q == 1.0:
            raise UsageError("the qgaussian round trip needs --q > 1")
    xs = grid(a.x_min, a.x_max, a.n)
    tol = a.tol if a.tol is not None else INVERSION_TOL[a.density]
    rec, orig, err, mask = inversion_error(a.density, xs, q=a.q)
    rows = list(zip(xs, rec, orig, err))
    worst = float(np.max(err[mask])) if np.any(mask) else 0.0
    meta = {"density": a.density, "max_abs_err": worst, "excluded_points": int(np.sum(~mask))}
    return ("x", "reconstructed", "original", "abs_err"), rows, worst > tol, meta


def cmd_verify(a):
    rep = run_suite(a.suite, a.tol)
    return rep


# ------------------------------------------------------------ parser


def build_parser():
    p = argparse.ArgumentParser(prog="qftkit", description="Complex q-Fourier transform toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_default=11, tol_default=1e-6):
        sp.add_argument("--tol", type=float, default=tol_default)
        sp.add_argument("--n", type=int, default=n_default)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", default=None, help="write here instead of stdout")
        sp.add_argument("--check", action="store_true", help="exit 1 if any error exceeds --tol")

    def kgrid(sp, lo=-5.0, hi=5.0):
        sp.add_argument("--k-min", type=float, default=lo)
        sp.add_argument("--k-max", type=float, default=hi)

    g = sub.add_parser("gaussian", help="elementary transform of the q-Gaussian vs quadrature")
    g.add_argument("--q", type=float, default=1.5)
    g.add_argument("--alpha", type=float, default=1.0)
    kgrid(g)
    common(g)

    t = sub.add_parser("transform", help="transform of a built-in density on a k grid")
    t.add_argument("--q", type=float, default=1.5)
    t.add_argument("--density", default="gaussian",
                   choices=("gaussian", "qgaussian", "box", "laplace", "triangle", "logistic", "sech", "mixture"))
    t.add_argument("--qprime", type=float, default=1.3, help="index of the qgaussian density")
    t.add_argument("--alpha", type=float, default=1.0)
    t.add_argument("--imag", type=float, default=0.0, help="evaluate at k + i*imag (0: real axis)")
    kgrid(t)
    common(t)

    s = sub.add_parser("series", help="truncated (q-1) series of the kernel vs the exact q-exponential")
    s.add_argument("--q", type=float, default=1.05)
    s.add_argument("--x", type=float, default=0.5)
    s.add_argument("--f-value", type=float, default=0.5)
    s.add_argument("--order", type=int, default=6)
    kgrid(s, -1.0, 1.0)
    common(s)

    v = sub.add_parser("invert", help="round trip through the inversion contour")
    v.add_argument("--density", choices=("gaussian", "qgaussian", "box"), default="gaussian")
    v.add_argument("--q", type=float, default=1.3, help="index of the qgaussian family")
    v.add_argument("--x-min", type=float, default=-3.0)
    v.add_argument("--x-max", type=float, default=3.0)
    common(v, n_default=21, tol_default=None)

    r = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    r.add_argument("suite", choices=SUITES + ("all",))
    r.add_argument("--tol", type=float, default=None, help="override every tolerance of the suite")
    r.add_argument("--output", default=None)
    r.add_argument("--format", choices=("json",), default="json")
    return p


COMMANDS = {"gaussian": cmd_gaussian, "transform": cmd_transform, "series": cmd_series, "invert": cmd_invert}


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(a, "tol", None) is not None and not a.tol > 0:
            raise UsageError("--tol must be positive")
        if a.command == "verify":
            rep = cmd_verify(a)
            _write(a.output, json.dumps(rep.to_dict(), indent=1) + "\n")
            status = "PASS" if rep.passed else "FAIL"
            print(f"{rep.suite}: {status} ({len(rep.cases)} cases, max rel err {rep.max_rel_err:.3g})", file=sys.stderr)
            return 0 if rep.passed else 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConsistencyWarning)
            cols, rows, failed, meta = COMMANDS[a.command](a)
    except UsageError as exc:
        print(f"qftkit: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        print(f"qftkit: error: {exc}", file=sys.stderr)
        return 2
    except QFTError as exc:
        print(f"qftkit: numerical failure: {exc}", file=sys.stderr)
        return 1
    buf = io.StringIO()
    emit(cols, rows, a.format, buf, {"command": a.command, **meta})
    _write(a.output, buf.getvalue())
    if failed:
        print("qftkit: tolerance exceeded", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
