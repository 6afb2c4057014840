"""Command-line front end: ``li-lab <command> ...`` or ``python3 -m li_lab``.

Exit codes: 0 success, 1 a cross-method or acceptance deviation, 2 bad input,
64 usage error. The effective configuration is printed to stderr; tables go
to stdout as CSV (default) or JSON.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import mpmath

from . import asymptotics, cumulants, li
from .errors import LiLabError
from .numerics import PrecisionContext
from .secondary_zeta import TailModel, z_continued, z_eval
from .zeros import bundled_zeros, density_band, empty_synthetic, load_zeros, smooth_count

EXIT_OK, EXIT_DEVIATION, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


@dataclasses.dataclass
class RunConfig:
    command: str
    bits: int = 128
    zeros: str | None = None
    tail_T: float | None = None
    tail_K: int = 8
    averaging_window: tuple = (0.6, 1.0)
    format: str = "csv"
    plot: str | None = None
    options: dict = dataclasses.field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["averaging_window"] = list(self.averaging_window)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["averaging_window"] = tuple(d.get("averaging_window", (0.6, 1.0)))
        return cls(**d)

    def tail(self) -> TailModel:
        return TailModel(cutoff=self.tail_T, order=self.tail_K, window=self.averaging_window)

    def ctx(self, bits: int | None = None) -> PrecisionContext:
        return PrecisionContext(bits=bits or self.bits)

    @property
    def digits(self) -> int:
        return max(20, math.ceil(self.bits * 0.3))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--bits", type=int, default=d(128), help="working precision in bits")
    p.add_argument("--zeros", default=d(os.environ.get("LI_LAB_ZEROS")),
                   help="zeros file (default: $LI_LAB_ZEROS, else the bundled 100 zeros)")
    p.add_argument("--tail-T", type=float, default=d(None), help="tail cutoff height")
    p.add_argument("--tail-K", type=int, default=d(8), help="tail expansion order")
    p.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    p.add_argument("--plot", nargs="?", const="", default=d(None), metavar="PREFIX",
                   help="also write PREFIX.dat and PREFIX.gp (gnuplot)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="li-lab", description="Li coefficients and the secondary zeta function")
    _global_flags(p, suppress=False)
    # the same flags are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    zs = sub.add_parser("zeros", help="zero table utilities")
    zsub = zs.add_subparsers(dest="action", parser_class=_Parser, required=True)
    zv = zsub.add_parser("validate", help="load and validate a zeros file", parents=[common])
    zv.add_argument("path", nargs="?")

    ze = sub.add_parser("z", help="secondary zeta function")
    zesub = ze.add_subparsers(dest="action", parser_class=_Parser, required=True)
    zev = zesub.add_parser("eval", help="evaluate Z(sigma)", parents=[common])
    zev.add_argument("--sigma", required=True, action="append",
                     help="real or complex (e.g. 2+3j); repeatable")

    lam = sub.add_parser("lambda", help="Li coefficients", parents=[common])
    lam.add_argument("--from", dest="n_from", type=int, default=1)
    lam.add_argument("--to", dest="n_to", type=int, required=True)
    lam.add_argument("--method", choices=("zero-sum", "binomial", "cauchy", "all"), default="zero-sum")

    cmp_ = sub.add_parser("compare", help="lambda_n against the large-n prediction", parents=[common])
    cmp_.add_argument("--from", dest="n_from", type=int, default=1)
    cmp_.add_argument("--to", dest="n_to", type=int, required=True)
    cmp_.add_argument("--step", type=int, default=1)
    cmp_.add_argument("--delta", action="store_true", help="include the constant 7/4 term")

    sb = sub.add_parser("sandbox", help="inject an off-axis zero quadruple", parents=[common])
    sb.add_argument("--tau-star", required=True, help="complex tau*, e.g. 50+2i")
    sb.add_argument("--base", default="bundled", help="bundled | empty | zeros | PATH")
    sb.add_argument("--to", dest="n_to", type=int, required=True)

    cu = sub.add_parser("cumulants", help="Stieltjes cumulants and S_n", parents=[common])
    cu.add_argument("--to", dest="n_to", type=int, required=True)
    cu.add_argument("--prime-sum", type=int, default=None, metavar="M")

    sn = sub.add_parser("sn", help="S_n and S_n / n", parents=[common])
    sn.add_argument("--to", dest="n_to", type=int, required=True)
    return p


def parse_config(argv=None) -> tuple[RunConfig, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(args).items()
            if k not in ("bits", "zeros", "tail_T", "tail_K", "format", "plot", "command")}
    if args.bits < 64:
        raise UsageError("--bits must be at least 64")
    if "n_to" in opts:
        lo = opts.get("n_from", 1)
        if opts["n_to"] < lo or lo < 1:
            raise UsageError(f"empty range of n: {lo}..{opts['n_to']}")
    if opts.get("step") is not None and opts["step"] < 1:
        raise UsageError("--step must be positive")
    plot = args.plot
    if plot == "":
        plot = args.command
    cfg = RunConfig(command=args.command, bits=args.bits, zeros=args.zeros, tail_T=args.tail_T,
                    tail_K=args.tail_K, format=args.format, plot=plot, options=opts)
    return cfg, args


# --------------------------------------------------------------------------
# output


class Output:
    def __init__(self, cfg: RunConfig, columns: list[str], stream=None):
        self.cfg = cfg
        self.columns = columns
        self.rows: list[list] = []
        self.summary: dict = {}
        self.stream = stream or sys.stdout

    def fmt(self, v):
        if isinstance(v, (bool, int, str)) or v is None:
            return v
        if isinstance(v, float):
            return repr(v)
        if hasattr(v, "_mpc_") or isinstance(v, complex):
            return mpmath.nstr(mpmath.mpc(v), self.cfg.digits)
        return mpmath.nstr(v, self.cfg.digits)

    def add(self, *values):
        self.rows.append([self.fmt(v) for v in values])

    def emit(self):
        if self.cfg.format == "json":
            doc = {"config": self.cfg.to_dict(),
                   "rows": [dict(zip(self.columns, r)) for r in self.rows]}
            if self.summary:
                doc["summary"] = self.summary
            json.dump(doc, self.stream, indent=1, default=str)
            self.stream.write("\n")
        else:
            w = csv.writer(self.stream, lineterminator="\n")
            w.writerow(self.columns)
            w.writerows(self.rows)
            for k, v in self.summary.items():
                print(f"# {k}: {v}", file=sys.stderr)
        if self.cfg.plot:
            self.write_plot(self.cfg.plot)

    def write_plot(self, prefix: str):
        dat, gp = Path(prefix + ".dat"), Path(prefix + ".gp")
        numeric = [i for i, c in enumerate(self.columns)
                   if i > 0 and not c.endswith("abs_error") and self._numeric(i)]
        with dat.open("w") as fh:
            fh.write("# " + " ".join(self.columns) + "\n")
            for r in self.rows:
                fh.write(" ".join(str(x) for x in r) + "\n")
        lines = [f"set title '{self.cfg.command}'", "set key left top",
                 f"set xlabel '{self.columns[0]}'"]
        plots = [f"'{dat.name}' using 1:{i + 1} with lines title '{self.columns[i]}'" for i in numeric]
        lines.append("plot " + ", \\\n     ".join(plots) if plots else "# no numeric columns")
        gp.write_text("\n".join(lines) + "\n")
        print(f"# plot: wrote {dat} and {gp}", file=sys.stderr)

    def _numeric(self, i):
        try:
            for r in self.rows:
                float(r[i])
            return bool(self.rows)
        except (TypeError, ValueError):
            return False


# --------------------------------------------------------------------------
# commands


def _table(cfg: RunConfig, path: str | None = None):
    path = path or cfg.zeros
    return load_zeros(path) if path else bundled_zeros()


def cmd_zeros_validate(cfg: RunConfig) -> int:
    table = _table(cfg, cfg.options.get("path"))
    meta = table.metadata()
    band = float(density_band(table.T))
    gap = abs(meta["count"] - float(smooth_count(table.T)))
    report = {"status": "OK", "count": meta["count"], "T": meta["T"], "digits": meta["digits"],
              "checksum_sha256": meta["checksum_sha256"],
              "density_band": f"|count - smooth count| = {gap:.3f} < {band:.3f}: pass"}
    if cfg.format == "json":
        json.dump({"config": cfg.to_dict(), "report": report}, sys.stdout, indent=1)
        print()
    else:
        print(f"OK, {meta['count']} zeros, T≈{float(meta['T']):.1f}")
        print(f"checksum {meta['checksum_sha256']}")
        print(report["density_band"])
    return EXIT_OK


def _parse_complex(s: str):
    s = s.strip().replace("i", "j")
    c = complex(s)
    return c.real if c.imag == 0 else c


def cmd_z_eval(cfg: RunConfig) -> int:
    table = _table(cfg)
    tail = cfg.tail()
    ctx = cfg.ctx()
    out = Output(cfg, ["sigma", "value", "abs_error", "error_kind"])
    for raw in cfg.options["sigma"]:
        s = _parse_complex(raw)
        if isinstance(s, float) and -0.25 < s < 0.5:
            v = z_continued(s, table, tail, ctx)
        else:
            v = z_eval(s, table, tail, ctx)
        out.add(raw, v.value, v.abs_error, v.error_kind.value)
    out.emit()
    return EXIT_OK


def cmd_lambda(cfg: RunConfig) -> int:
    lo, hi, method = cfg.options["n_from"], cfg.options["n_to"], cfg.options["method"]
    ns = list(range(lo, hi + 1))
    table = _table(cfg)
    tail = cfg.tail()
    results: dict[str, dict[int, li.LambdaValue]] = {}
    if method in ("zero-sum", "all"):
        results["zero_sum"] = {v.n: v for v in li.lambda_zero_sum_many(ns, table, tail, cfg.ctx())}
    if method in ("binomial", "all"):
        bctx = cfg.ctx(max(cfg.bits, li.precision_for(hi)))
        from .secondary_zeta import z_integers
        zvals = z_integers(hi, table, tail, bctx)
        results["binomial"] = {n: li.lambda_binomial(n, zvals, bctx) for n in ns}
    if method in ("cauchy", "all"):
        cn = [n for n in ns if n <= 32] if method == "all" else ns
        results["cauchy"] = {n: li.lambda_cauchy(n, ctx=cfg.ctx()) for n in cn}
    out = Output(cfg, ["n", "value", "abs_error", "method"])
    for n in ns:
        for name, vals in results.items():
            if n in vals:
                v = vals[n].value
                out.add(n, v.value, v.abs_error, name)
    status = EXIT_OK
    if method == "all":
        bad = []
        names = list(results)
        for n in ns:
            for i, a in enumerate(names):
                for b in names[i + 1:]:
                    if n in results[a] and n in results[b]:
                        va, vb = results[a][n].value, results[b][n].value
                        dev = abs(va.value - vb.value)
                        comb = va.abs_error + vb.abs_error
                        out.add(n, dev, comb, f"deviation {a}-{b}")
                        if dev > comb:
                            bad.append((n, a, b))
        out.summary["cross_method_failures"] = len(bad)
        if bad:
            status = EXIT_DEVIATION
    out.emit()
    return status


def cmd_compare(cfg: RunConfig) -> int:
    lo, hi, step = cfg.options["n_from"], cfg.options["n_to"], cfg.options["step"]
    delta = cfg.options["delta"]
    ns = list(range(lo, hi + 1, step))
    table = _table(cfg)
    ctx = cfg.ctx()
    vals = li.lambda_zero_sum_many(ns, table, cfg.tail(), ctx)
    out = Output(cfg, ["n", "lambda", "predictor", "difference", "relative_difference"])
    dev_plain, dev_delta = [], []
    for v in vals:
        lam = v.value.value
        p0 = asymptotics.predict_riemann(v.n, ctx)
        p = p0 + asymptotics.DELTA if delta else p0
        out.add(v.n, lam, p, lam - p, (lam - p) / lam)
        dev_plain.append(lam - p0)
        dev_delta.append(lam - p0 - asymptotics.DELTA)
    if len(ns) >= 20:
        half = len(ns) // 2
        m0 = sum(dev_plain[half:]) / (len(ns) - half)
        m1 = sum(dev_delta[half:]) / (len(ns) - half)
        out.summary["mean_signed_deviation_without_delta"] = mpmath.nstr(m0, 12)
        out.summary["mean_signed_deviation_with_delta"] = mpmath.nstr(m1, 12)
        out.summary["delta_improves_mean"] = bool(abs(m1) < abs(m0))
    out.emit()
    return EXIT_OK


def cmd_sandbox(cfg: RunConfig) -> int:
    base_opt = cfg.options["base"]
    if base_opt == "bundled":
        base = bundled_zeros()
    elif base_opt == "empty":
        base = empty_synthetic()
    elif base_opt == "zeros":
        base = _table(cfg)
    else:
        base = load_zeros(base_opt)
    tau = _parse_complex(cfg.options["tau_star"])
    if not isinstance(tau, complex):
        from .errors import DomainError
        raise DomainError("tau* is real: that is an on-axis zero, not an off-axis injection")
    res = asymptotics.sandbox(tau, base, cfg.options["n_to"], cfg.tail() if base.continuable else None)
    out = Output(cfg, ["n", "lambda", "rh_true_predictor", "rh_false_predictor", "abs_deviation"])
    for i, n in enumerate(res.ns):
        out.add(int(n), float(res.lambdas[i]), float(res.riemann[i]), float(res.rh_false[i]),
                float(abs(res.lambdas[i] - res.riemann[i])))
    out.summary.update({
        "fitted_growth_rate": res.fit.rate, "theoretical_growth_rate": res.theory_rate,
        "fit_window": list(res.fit.window), "n_onset_estimate": res.n_onset,
        "first_negative_lambda": res.first_negative, "first_abs_deviation_gt_1": res.onset,
        "first_quadruple_excess_gt_1": res.excess_onset,
        "injected_only_growth_rate": res.extra["quadruple_fit"].rate,
        "base_deviation_std": res.extra["base_deviation_std"],
    })
    out.emit()
    return EXIT_OK


def cmd_cumulants(cfg: RunConfig, sn_only: bool = False) -> int:
    nmax = cfg.options["n_to"]
    bits = max(cfg.bits, cumulants.sn_precision(nmax))
    ctx = cfg.ctx(bits)
    table = cumulants.stieltjes_constants(nmax, ctx)
    g = cumulants.cumulants_series(nmax, table, ctx)
    S = cumulants.s_n_many(nmax, table, ctx)
    prime = None
    if not sn_only and cfg.options.get("prime_sum"):
        prime = cumulants.cumulants_prime_sum(nmax, cfg.options["prime_sum"])
    if sn_only:
        out = Output(cfg, ["n", "S_n", "S_n_abs_error", "S_n_over_n"])
        for n in range(1, nmax + 1):
            s = S[n - 1]
            out.add(n, s.value, s.abs_error, s.value / n)
    else:
        cols = ["n", "g_series", "g_series_abs_error"]
        if prime:
            cols += ["g_prime_sum", "g_prime_sum_abs_error"]
        out = Output(cfg, cols + ["S_n", "S_n_over_n"])
        for n in range(1, nmax + 1):
            row = [n, g[n - 1].g.value, g[n - 1].g.abs_error]
            if prime:
                row += [prime[n - 1].g.value, prime[n - 1].g.abs_error]
            s = S[n - 1].value
            out.add(*row, s, s / n)
    out.emit()
    return EXIT_OK


COMMANDS = {
    "zeros": cmd_zeros_validate,
    "z": cmd_z_eval,
    "lambda": cmd_lambda,
    "compare": cmd_compare,
    "sandbox": cmd_sandbox,
    "cumulants": cmd_cumulants,
    "sn": lambda cfg: cmd_cumulants(cfg, sn_only=True),
}


def main(argv=None) -> int:
    try:
        cfg, _ = parse_config(argv)
    except UsageError as exc:
        print(f"li-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    print("# config: " + json.dumps(cfg.to_dict(), default=str), file=sys.stderr)
    try:
        return COMMANDS[cfg.command](cfg)
    except (LiLabError, ValueError, ArithmeticError) as exc:
        print(f"li-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
