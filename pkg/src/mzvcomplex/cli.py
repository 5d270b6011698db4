"""Command line: ``mzvc {dim,cobracket,verify,eval,tables}``.

Exit codes: 0 when every verification passed, 1 when one failed, 2 on a
usage error.  Tables are written with a fixed row and column order so two
runs on the same input produce identical files; timings go to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

SCHEMA = 1
log = logging.getLogger("mzvc")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- jobs and reports

@dataclass(frozen=True)
class JobSpec:
    command: str
    N: tuple = (1,)
    w: tuple = ()
    m: tuple = ()
    prec: int = 128
    bound: int = 1
    suite: str = "all"
    word: str = ""
    tol: str = "1e-20"
    fmt: str = "text"
    out: str | None = None
    cache_dir: str | None = None
    workers: int = 1

    def validate(self) -> None:
        if self.command not in {"dim", "cobracket", "verify", "eval", "tables"}:
            raise UsageError(f"unknown command {self.command}")
        if self.command in {"dim", "cobracket", "tables"} and (not self.w or not self.m or not self.N):
            raise UsageError("empty N, w or m range")
        if self.prec < 64:
            raise UsageError("precision must be at least 64 bits")
        if self.workers < 1:
            raise UsageError("workers must be positive")
        if any(n < 1 for n in self.N):
            raise UsageError("N must be positive")


@dataclass
class Report:
    columns: list
    records: list = field(default_factory=list)
    checks: list = field(default_factory=list)  # (identity, passed, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def check(self, identity: str, ok: bool, detail="") -> None:
        self.checks.append((identity, bool(ok), detail))


def emit_tables(report: Report, fmt: str, out: str | None = None) -> str:
    """Render ``report`` as csv, json or text; write it to ``out`` if given."""
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(report.columns)
        for r in report.records:
            wr.writerow([_cell(r.get(c)) for c in report.columns])
        text = buf.getvalue()
    elif fmt == "json":
        doc = {"schema": SCHEMA, "columns": report.columns,
               "records": [{c: r.get(c) for c in report.columns} for r in report.records],
               "checks": [{"identity": i, "passed": ok, "detail": str(d)} for i, ok, d in report.checks]}
        text = json.dumps(doc, indent=1, sort_keys=False, default=str) + "\n"
    elif fmt == "text":
        lines = ["  ".join(report.columns)] if report.columns else []
        lines += ["  ".join(_cell(r.get(c)) for c in report.columns) for r in report.records]
        lines += [f"{'PASS' if ok else 'FAIL'}  {i}" + (f"  [{d}]" if d != "" else "")
                  for i, ok, d in report.checks]
        text = "\n".join(lines) + "\n"
    else:
        raise UsageError(f"unknown format {fmt}")
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    return text


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (list, tuple)):
        return " ".join(_cell(y) for y in x)
    return str(x)


def _pool_map(fn, jobs: list, workers: int) -> list:
    """Map over jobs, in order.  Each job is pure; assembly stays here."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(os.environ.get("MZVC_CACHE_DIR"),)) as ex:
        return list(ex.map(fn, jobs))


def _init_worker(cache_dir):
    from . import cache
    if cache_dir:
        cache.set_cache_dir(cache_dir)


# ---------------------------------------------------------------- dim / tables

DIM_COLUMNS = ["N", "w", "m", "dim", "formula", "match", "parity_zero"]


def _dim_job(job):
    from . import dihedral
    N, w, m = job
    d = dihedral.dimension(N, w, m)
    f = dihedral.dimension_formula(w, m) if N == 1 else None
    return {"N": N, "w": w, "m": m, "dim": d, "formula": f,
            "match": None if f is None else d == f,
            "parity_zero": None if N != 1 or (w + m) % 2 == 0 else d == 0}


def run_dim(req: JobSpec) -> Report:
    jobs = [(N, w, m) for N in req.N for m in req.m for w in req.w if w >= m]
    rep = Report(list(DIM_COLUMNS))
    for rec in _pool_map(_dim_job, jobs, req.workers):
        rep.records.append(rec)
        if rec["match"] is not None:
            rep.check(f"dim D_{{{rec['w']},{rec['m']}}}({rec['N']}) = closed form",
                      rec["match"], f"{rec['dim']} vs {rec['formula']}")
        if rec["parity_zero"] is not None:
            rep.check(f"dim D_{{{rec['w']},{rec['m']}}}(1) = 0 for w+m odd", rec["parity_zero"])
    return rep


COHOMOLOGY_COLUMNS = ["N", "w", "m", "complex_dims", "cohomology_dims", "euler", "euler_oracle"]


def _cohomology_job(job):
    from . import dihedral
    N, w, m = job
    rec = {"N": N, "w": w, "m": m, "complex_dims": dihedral.complex_dims(N, w, m),
           "cohomology_dims": dihedral.cohomology_dims(N, w, m),
           "euler": dihedral.euler_characteristic(N, w, m), "euler_oracle": None}
    if N == 1 and m == 2 and w % 2 == 0:
        rec["euler_oracle"] = dihedral.euler_oracle(w)
    return rec


def run_tables(req: JobSpec) -> list[tuple[str, Report]]:
    dims = run_dim(req)
    jobs = [(N, w, m) for N in req.N for m in req.m for w in req.w if w >= m and m >= 2]
    coh = Report(list(COHOMOLOGY_COLUMNS))
    for rec in _pool_map(_cohomology_job, jobs, req.workers):
        coh.records.append(rec)
        if rec["euler_oracle"] is not None:
            coh.check(f"euler characteristic at w={rec['w']} equals the GL_2 oracle",
                      rec["euler"] == rec["euler_oracle"], f"{rec['euler']} vs {rec['euler_oracle']}")
    return [("dimensions", dims), ("cohomology", coh)]


# ---------------------------------------------------------------- cobracket

def run_cobracket(req: JobSpec) -> Report:
    from . import dihedral
    rep = Report(["N", "w", "m", "basis", "term", "coefficient"])
    for N in req.N:
        for m in req.m:
            for w in req.w:
                if w < m:
                    continue
                sp = dihedral.space(N, w, m)
                for i, key in enumerate(sp.basis):
                    for pair, c in sorted(dihedral.cobracket(N, {key: 1}).items()):
                        rep.records.append({"N": N, "w": w, "m": m, "basis": _fmt_key(key),
                                            "term": " ^ ".join(f"e{a}_{b}[{k}]" for a, b, k in pair),
                                            "coefficient": str(c)})
    return rep


def _fmt_key(key) -> str:
    alphas, n = key
    return "{" + ",".join(map(str, alphas)) + "}_" + ",".join(map(str, n))


# ---------------------------------------------------------------- verify

SUITES = ("dims", "euler", "cobracket", "modular", "mu", "voronoi", "numeric")


def _verify_job(job):
    suite, args = job
    return suite, args, SUITE_FUNCS[suite](*args)


def _suite_dims(w_max):
    from . import dihedral
    out = []
    for m, lo, hi in ((1, 1, min(w_max, 17)), (2, 2, min(w_max, 20)), (3, 3, min(w_max, 15))):
        for w in range(lo, hi + 1):
            d = dihedral.dimension(1, w, m)
            out.append((f"dim D_{{{w},{m}}}(1) = closed form", d == dihedral.dimension_formula(w, m), d))
    return out


def _suite_euler(w_max):
    from . import dihedral
    return [(f"euler characteristic w={w} equals oracle",
             dihedral.euler_characteristic(1, w, 2) == dihedral.euler_oracle(w),
             dihedral.euler_characteristic(1, w, 2))
            for w in range(2, min(w_max, 16) + 1, 2)]


def _suite_cobracket(N, w_max, m_max):
    from . import dihedral
    out = []
    for m in range(1, m_max + 1):
        for w in range(m, w_max + 1):
            tag = f"(N={N}, w={w}, m={m})"
            out.append((f"delta kills relations {tag}", dihedral.relation_kill_residual(N, w, m) == 0, ""))
            out.append((f"co-antisymmetry {tag}", dihedral.co_antisymmetry_residual(N, w, m) == 0, ""))
            out.append((f"co-Jacobi {tag}", dihedral.co_jacobi_residual(N, w, m) == 0, ""))
    return out


def _suite_modular(N, w_max, m_max):
    from . import modular
    out = []
    for w in range(3, min(w_max, 8) + 1):
        if m_max >= 3:
            r = modular.square_zero_residual(N, w, 3)
            out.append((f"d^2 = 0 on MC(N={N}, w={w}, m=3)", not any(r), r))
    if N == 1:
        for m in range(2, min(m_max, 4) + 1):
            r = modular.dihedral_from_shuffle_check(m)
            ok = r["cyclic"] and r["reflection"] and r["negation"]
            out.append((f"dihedral symmetries follow from shuffles, m={m}", ok, r))
    return out


def _suite_mu(N, w_max, m_max):
    from . import modular
    out = []
    for m in range(2, min(m_max, 3) + 1):
        for w in range(m, min(w_max, 8 if m == 2 else 6) + 1):
            tag = f"(N={N}, w={w}, m={m})"
            res = modular.chain_map_residual(N, w, m)
            out.append((f"mu is a chain map {tag}", not any(res), res))
            mus = modular.mu_map(N, w, m)
            ranks = [modular.rank(M) for M in mus]
            tg = [M.ncols for M in mus]
            out.append((f"mu surjective {tag}", ranks == tg, (ranks, tg)))
            if N == 1:
                qd = [modular.mc_space(N, w, m, l).quotient_dim for l in range(1, m + 1)]
                out.append((f"mu bijective {tag}", qd == tg and ranks == tg, (qd, tg)))
    return out


def _suite_voronoi(bound):
    from . import voronoi
    out = []
    sig = voronoi.chain_signs(2, bound)
    out.append(("psi2 commutes with differentials", sig == {1: {1}}, sig))
    sig = voronoi.chain_signs(3, min(bound, 1))
    out.append(("psi3 commutes with differentials", sig == {1: {1}, 2: {1}}, sig))
    r = voronoi.shuffle_identities(bound)
    out.append(("psi3 kills the first shuffle", r["first_nonzero"] == 0, r))
    out.append(("psi3 sends the second shuffle to the 5-simplex boundary (frozen sign)",
                r["second_mismatch"] == 0, r))
    c = voronoi.coker_observations(bound)
    out.append(("each 5-simplex has 3 generic 3-cells", c["generic_per_simplex"] == {3: c["simplices"]}, c))
    out.append(("each generic 3-cell lies in 3 5-simplices",
                set(c["simplices_per_generic_cell"]) == {3}, c["simplices_per_generic_cell"]))
    out.append(("3-cells are generic or special", set(c["face_types"]) <= {"generic", "special"},
                c["face_types"]))
    return out


def _suite_numeric(prec):
    import mpmath

    from . import numeric as nu
    F = Fraction
    W = nu.PolylogWord
    out = []
    z21 = nu.zeta(2, 1, eps_tail=F(1, 10 ** 6), prec=prec)
    z3 = nu.zeta(3, eps_tail=F(1, 10 ** 9), prec=prec)
    d = abs(z21.value - z3.value)
    out.append(("|zeta(2,1) - zeta(3)| < 1e-6", d < 1e-6, mpmath.nstr(d, 3)))
    r = nu.stuffle_check(W((2,), (F(9, 10),)), W((1, 1), (F(-9, 10), F(1, 2))), prec=prec)
    out.append(("stuffle residual < 1e-20", r < 1e-20, mpmath.nstr(r, 3)))
    r = nu.distribution_check(W((2, 1), (F(4, 5), F(-4, 5))), 3, prec=prec)
    out.append(("distribution residual (l=3) < 1e-20", r < 1e-20, mpmath.nstr(r, 3)))
    return out


SUITE_FUNCS = {"dims": _suite_dims, "euler": _suite_euler, "cobracket": _suite_cobracket,
               "modular": _suite_modular, "mu": _suite_mu, "voronoi": _suite_voronoi,
               "numeric": _suite_numeric}


def run_verify(req: JobSpec, w_max: int, m_max: int) -> Report:
    suites = SUITES if req.suite == "all" else (req.suite,)
    jobs = []
    for s in suites:
        if s == "dims":
            jobs.append((s, (w_max,)))
        elif s == "euler":
            jobs.append((s, (w_max,)))
        elif s in ("cobracket", "modular", "mu"):
            jobs += [(s, (N, w_max, m_max)) for N in req.N]
        elif s == "voronoi":
            jobs.append((s, (req.bound,)))
        elif s == "numeric":
            jobs.append((s, (req.prec,)))
    rep = Report([])
    for suite, _, checks in _pool_map(_verify_job, jobs, req.workers):
        for identity, ok, detail in checks:
            rep.check(f"[{suite}] {identity}", ok, detail)
    return rep


# ---------------------------------------------------------------- eval

_WORD = re.compile(r"^\s*(Li|zeta)\s*\((.*)\)\s*$")
_ROOT = re.compile(r"^w\{\s*(-?\d+)\s*/\s*(\d+)\s*\}$")


def parse_word(text: str):
    """``Li(n1,...,nm; x1,...,xm)`` or ``zeta(n1,...,nm)``; arguments are
    rationals like ``-3/4`` or roots of unity ``w{k/N}``."""
    from . import numeric
    mt = _WORD.match(text)
    if not mt:
        raise UsageError(f"cannot parse word {text!r}")
    head, body = mt.groups()
    if head == "zeta":
        try:
            s = tuple(int(x) for x in body.split(","))
        except ValueError as exc:
            raise UsageError(f"bad zeta arguments {body!r}") from exc
        if not s or s[0] < 2 or min(s) < 1:
            raise UsageError("zeta(s_1,...) needs s_1 >= 2 and all s_i >= 1")
        return numeric.PolylogWord(tuple(reversed(s)), (1,) * len(s))
    if ";" not in body:
        raise UsageError("Li(...) needs exponents and arguments separated by ';'")
    ns, xs = body.split(";", 1)
    try:
        exps = tuple(int(x) for x in ns.split(","))
    except ValueError as exc:
        raise UsageError(f"bad exponents {ns!r}") from exc
    args = []
    for tok in xs.split(","):
        tok = tok.strip()
        r = _ROOT.match(tok)
        if r:
            k, N = int(r.group(1)), int(r.group(2))
            if N < 1:
                raise UsageError("root of unity needs N >= 1")
            args.append(numeric.root_of_unity(k, N, 256) if k % N else 1)
            continue
        try:
            args.append(Fraction(tok))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad argument {tok!r}") from exc
    if len(args) != len(exps) or min(exps, default=1) < 1:
        raise UsageError("exponent and argument counts differ")
    return numeric.PolylogWord(exps, tuple(args))


def run_eval(req: JobSpec) -> Report:
    import mpmath

    from . import numeric
    word = parse_word(req.word)
    try:
        tol = Fraction(req.tol)
    except ValueError as exc:
        raise UsageError(f"bad tolerance {req.tol!r}") from exc
    rep = Report(["word", "re", "im", "tail", "rounding", "terms", "method", "prec"])
    try:
        v = numeric.li(word, tol, req.prec)
    except (numeric.DivergentWordError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    except numeric.ToleranceError as exc:
        rep.check(f"tail below {req.tol} for {req.word}", False, str(exc))
        if exc.best is not None:
            rep.records.append({"word": req.word, **exc.best.to_dict()})
        return rep
    rep.records.append({"word": req.word, **v.to_dict()})
    rep.check(f"tail below {req.tol} for {req.word}",
              v.error <= mpmath.mpf(tol.numerator) / tol.denominator, "")
    return rep


# ---------------------------------------------------------------- argument parsing

def _range(text: str) -> tuple:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            out = tuple(range(int(a), int(b) + 1))
        else:
            out = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mzvc", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "csv", "json"), default="text")
    common.add_argument("--out", help="write the table to this file")
    common.add_argument("--cache-dir", help="cache directory (default: $MZVC_CACHE_DIR)")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dim", parents=[common], help="dimensions of D_{w,m}(N)")
    d.add_argument("--N", type=_range, default=(1,))
    d.add_argument("--w", type=_range, required=True)
    d.add_argument("--m", type=_range, required=True)

    c = sub.add_parser("cobracket", parents=[common], help="cobracket of the quotient basis")
    c.add_argument("--N", type=_range, default=(1,))
    c.add_argument("--w", type=_range, required=True)
    c.add_argument("--m", type=_range, required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--N", type=_range, default=(1,))
    v.add_argument("--w-max", type=int, default=6)
    v.add_argument("--m-max", type=int, default=3)
    v.add_argument("--bound", type=int, default=1, help="entry bound for lattice enumeration")
    v.add_argument("--prec", type=int, default=128)

    e = sub.add_parser("eval", parents=[common], help="evaluate a multiple polylogarithm")
    e.add_argument("--word", required=True)
    e.add_argument("--tol", default="1e-20")
    e.add_argument("--prec", type=int, default=128)

    t = sub.add_parser("tables", parents=[common], help="dimension and cohomology tables")
    t.add_argument("--N", type=_range, default=(1,))
    t.add_argument("--w", type=_range, required=True)
    t.add_argument("--m", type=_range, required=True)
    t.add_argument("--out-dir", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    from . import cache
    if ns.cache_dir:
        cache.set_cache_dir(ns.cache_dir)
        os.environ[cache.ENV_VAR] = ns.cache_dir
    req = JobSpec(command=ns.command, N=getattr(ns, "N", (1,)), w=getattr(ns, "w", ()),
                   m=getattr(ns, "m", ()), prec=getattr(ns, "prec", 128),
                   bound=getattr(ns, "bound", 1), suite=getattr(ns, "suite", "all"),
                   word=getattr(ns, "word", ""), tol=getattr(ns, "tol", "1e-20"),
                   fmt=ns.fmt, out=ns.out, cache_dir=ns.cache_dir, workers=ns.workers)
    t0 = time.perf_counter()
    try:
        req.validate()
        if req.command == "dim":
            reports = [("dimensions", run_dim(req))]
        elif req.command == "cobracket":
            reports = [("cobracket", run_cobracket(req))]
        elif req.command == "verify":
            if ns.w_max < 1 or ns.m_max < 1 or ns.bound < 1:
                raise UsageError("w-max, m-max and bound must be positive")
            reports = [("verify", run_verify(req, ns.w_max, ns.m_max))]
        elif req.command == "eval":
            reports = [("eval", run_eval(req))]
        else:
            reports = run_tables(req)
    except UsageError as exc:
        print(f"mzvc: error: {exc}", file=sys.stderr)
        return 2
    if req.command == "tables":
        outdir = Path(ns.out_dir)
        ext = {"text": "txt", "csv": "csv", "json": "json"}[req.fmt]
        for name, rep in reports:
            emit_tables(rep, req.fmt, str(outdir / f"{name}.{ext}"))
            emit_tables(rep, "json", str(outdir / f"{name}.json")) if req.fmt != "json" else None
    else:
        for _, rep in reports:
            sys.stdout.write(emit_tables(rep, req.fmt, req.out))
    log.info("finished in %.2fs", time.perf_counter() - t0)
    return 0 if all(rep.passed for _, rep in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
