"""Command-line front end: comparison tables, moment dumps, self checks.

Commands
--------
compare    exact log-average vs the closed-form asymptotic prediction
coeffs     exact recurrence coefficients vs their asymptotic expansions
diff-id    finite-difference log-derivative vs the differential identity
mc         Monte Carlo estimate vs the exact ratio
moments    dump the moment table
selfcheck  run the reduced invariant suite

Numbers are emitted in scientific notation with 30 significant digits
(lowercase e); JSON carries the same strings as the CSV cells so the two
formats round-trip identically.  Rows are sorted by n.  Exit codes:
0 success, 1 selfcheck failure, 2 invalid input, 3 precision unreachable.

Configuration can come from a flat key=value file (--config); explicit
flags override it, and the GUELAB_DIGITS environment variable supplies
the default working digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpf

from . import asymptotics, mc_gue
from .exceptions import InvalidSpecError, PrecisionUnreachableError
from .hankel import char_poly_average_log, hankel_log_determinant
from .orthopoly import recurrence_from_moments
from .precision import PrecisionContext
from .selfcheck import run_selfcheck
from .weights import WeightSpec, moment_table

ENV_DIGITS = "GUELAB_DIGITS"
SIG_DIGITS = 30


def format_sci(x) -> str:
    """Scientific notation, 30 significant digits, lowercase e.

    Never routes an existing mpf through mp.mpf(), which would silently
    round it to the ambient (possibly 15-digit) working precision.
    """
    if not hasattr(x, "_mpf_"):
        with mp.workdps(2 * SIG_DIGITS):
            x = mp.mpf(x)
    if not mp.isfinite(x):
        raise InvalidSpecError(f"non-finite value in output: {x}")
    return mpmath.nstr(
        x,
        SIG_DIGITS,
        min_fixed=1,
        max_fixed=0,
        strip_zeros=False,
        show_zero_exponent=True,
    )


@dataclass
class RunConfig:
    digits: int = 60
    n_list: list[int] = field(default_factory=list)
    lambdas: list[str] = field(default_factory=list)
    alphas: list[str] = field(default_factory=list)
    seed: int = 1
    samples: int = 100000
    fmt: str = "csv"
    out: str | None = None
    regime: str = "inside"
    nu: int = 0
    kmax: int | None = None
    fd_step: str = "1e-6"

    def ctx(self) -> PrecisionContext:
        return PrecisionContext(digits=self.digits)

    def spec(self, n: int) -> WeightSpec:
        if not self.lambdas:
            raise InvalidSpecError("no --lambdas given")
        return WeightSpec(lambdas=self.lambdas, alphas=self.alphas, n=n)


def _parse_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidSpecError(f"config line is not key=value: {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    env_digits = os.environ.get(ENV_DIGITS)
    if env_digits:
        cfg.digits = int(env_digits)
    file_values = _parse_config_file(args.config) if args.config else {}
    parsers = {
        "digits": ("digits", int),
        "n_list": ("n_list", lambda s: [int(v) for v in _csv_list(s)]),
        "lambdas": ("lambdas", _csv_list),
        "alphas": ("alphas", _csv_list),
        "seed": ("seed", int),
        "samples": ("samples", int),
        "format": ("fmt", str),
        "out": ("out", str),
        "regime": ("regime", str),
        "nu": ("nu", int),
        "kmax": ("kmax", int),
        "fd_step": ("fd_step", str),
    }
    for key, value in file_values.items():
        if key not in parsers:
            raise InvalidSpecError(f"unknown config key {key!r}")
        attr, conv = parsers[key]
        setattr(cfg, attr, conv(value))
    flag_map = {
        "digits": "digits",
        "n_list": "n_list",
        "lambdas": "lambdas",
        "alphas": "alphas",
        "seed": "seed",
        "samples": "samples",
        "format": "fmt",
        "out": "out",
        "regime": "regime",
        "nu": "nu",
        "kmax": "kmax",
        "fd_step": "fd_step",
    }
    for flag, attr in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    if cfg.fmt not in {"csv", "json"}:
        raise InvalidSpecError(f"format must be csv or json, got {cfg.fmt!r}")
    if len(cfg.lambdas) != len(cfg.alphas):
        raise InvalidSpecError("--lambdas and --alphas must have equal length")
    return cfg


def _emit(cfg: RunConfig, command: str, columns: list[str], rows: list[list[str]]):
    if cfg.fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = (
            json.dumps(
                {"command": command, "columns": columns, "rows": rows}, indent=2
            )
            + "\n"
        )
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _normalized_cell(diff, n: int) -> str:
    if n < 2:
        return ""
    with mp.workdps(40):
        return format_sci(diff * n / mp.log(n))


def cmd_compare(cfg: RunConfig) -> int:
    ctx = cfg.ctx()
    rows = []
    for n in sorted(cfg.n_list):
        started = time.perf_counter()
        spec = cfg.spec(n)
        if cfg.regime == "outside":
            if spec.m != 1:
                raise InvalidSpecError("--regime outside requires a single position")
            pred = asymptotics.johansson_log(
                spec.lambdas[0], spec.alphas[0], n, ctx
            )
        elif cfg.regime == "inside":
            pred = asymptotics.theorem1_log(spec, ctx)
        else:
            raise InvalidSpecError(f"unknown regime {cfg.regime!r}")
        exact = char_poly_average_log(spec, ctx)
        with mp.workdps(ctx.work_dps):
            diff = exact - pred.log_value
        elapsed = time.perf_counter() - started
        rows.append(
            [
                str(n),
                format_sci(exact),
                format_sci(pred.log_value),
                format_sci(diff),
                _normalized_cell(diff, n),
                f"{elapsed:.3f}",
            ]
        )
    _emit(
        cfg,
        "compare",
        ["n", "exact_log", "asym_log", "diff", "normalized", "runtime_s"],
        rows,
    )
    return 0


def cmd_coeffs(cfg: RunConfig) -> int:
    ctx = cfg.ctx()
    rows = []
    for n in sorted(cfg.n_list):
        spec = cfg.spec(n)
        table = moment_table(spec, 2 * n, ctx)
        rec = recurrence_from_moments(table, n, ctx)
        pred = asymptotics.coeff_asym(spec, n, ctx)
        with mp.workdps(ctx.work_dps):
            k2_exact = rec.kappa[n - 1] ** 2
            k2_asym = mp.exp(pred.kappa2_log.log_value)
            n2dev = n * n * (k2_exact / k2_asym - 1)
            rows.append(
                [
                    str(n),
                    format_sci(k2_exact),
                    format_sci(k2_asym),
                    format_sci(rec.beta[n]),
                    format_sci(pred.beta_value),
                    format_sci(rec.gamma[n]),
                    format_sci(pred.gamma_value),
                    format_sci(n2dev),
                ]
            )
    _emit(
        cfg,
        "coeffs",
        [
            "n",
            "kappa2_exact",
            "kappa2_asym",
            "beta_exact",
            "beta_asym",
            "gamma_exact",
            "gamma_asym",
            "kappa2_n2dev",
        ],
        rows,
    )
    return 0


def cmd_diff_id(cfg: RunConfig) -> int:
    ctx = cfg.ctx()
    if ctx.digits < 60:
        raise InvalidSpecError("diff-id requires at least 60 digits")
    rows = []
    for n in sorted(cfg.n_list):
        started = time.perf_counter()
        spec = cfg.spec(n)
        with mp.workdps(ctx.work_dps + 10):
            h = mpf(cfg.fd_step)
            alphas_up = list(spec.alphas)
            alphas_dn = list(spec.alphas)
            alphas_up[cfg.nu] = alphas_up[cfg.nu] + h
            alphas_dn[cfg.nu] = alphas_dn[cfg.nu] - h
            up = char_poly_average_log(
                WeightSpec(lambdas=spec.lambdas, alphas=alphas_up, n=n), ctx
            )
            dn = char_poly_average_log(
                WeightSpec(lambdas=spec.lambdas, alphas=alphas_dn, n=n), ctx
            )
            fd = (up - dn) / (2 * h)
            rhs = asymptotics.diff_identity_rhs(spec, cfg.nu, ctx).log_value
            diff = fd - rhs
        elapsed = time.perf_counter() - started
        rows.append(
            [
                str(n),
                format_sci(fd),
                format_sci(rhs),
                format_sci(diff),
                _normalized_cell(diff, n),
                f"{elapsed:.3f}",
            ]
        )
    _emit(
        cfg,
        "diff-id",
        ["n", "fd_log_derivative", "identity_rhs", "diff", "normalized", "runtime_s"],
        rows,
    )
    return 0


def cmd_mc(cfg: RunConfig) -> int:
    ctx = cfg.ctx()
    rows = []
    for n in sorted(cfg.n_list):
        started = time.perf_counter()
        spec = cfg.spec(n)
        est = mc_gue.mc_average_log(spec, cfg.samples, cfg.seed)
        exact = char_poly_average_log(spec, ctx)
        with mp.workdps(ctx.work_dps):
            sigma = (
                abs(mpf(est.mean_log) - exact) / mpf(est.stderr_rel)
                if est.stderr_rel > 0
                else mp.mpf(0)
            )
        elapsed = time.perf_counter() - started
        rows.append(
            [
                str(n),
                str(est.samples),
                str(est.seed),
                format_sci(mpf(est.mean_log)),
                format_sci(mpf(est.stderr_rel)),
                format_sci(exact),
                format_sci(sigma),
                f"{elapsed:.3f}",
            ]
        )
    _emit(
        cfg,
        "mc",
        [
            "n",
            "samples",
            "seed",
            "mc_mean_log",
            "stderr_rel",
            "exact_log",
            "sigma_dev",
            "runtime_s",
        ],
        rows,
    )
    return 0


def cmd_moments(cfg: RunConfig) -> int:
    ctx = cfg.ctx()
    if len(cfg.n_list) != 1:
        raise InvalidSpecError("moments expects exactly one n in --n-list")
    n = cfg.n_list[0]
    spec = cfg.spec(n)
    kmax = cfg.kmax if cfg.kmax is not None else 2 * n
    table = moment_table(spec, kmax, ctx)
    rows = [[str(k), format_sci(table.values[k])] for k in range(kmax + 1)]
    _emit(cfg, "moments", ["k", "moment"], rows)
    return 0


def cmd_selfcheck(cfg: RunConfig, corrupt_moments: bool = False) -> int:
    results = run_selfcheck(cfg.ctx(), corrupt_moments=corrupt_moments)
    failures = 0
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        failures += not res.ok
        sys.stdout.write(f"{status} {res.name}: {res.detail}\n")
    sys.stdout.write(
        f"{len(results) - failures}/{len(results)} selfchecks passed\n"
    )
    return 1 if failures else 0


def _add_shared_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--lambdas", type=_csv_list, help="comma-separated positions")
    sub.add_argument("--alphas", type=_csv_list, help="comma-separated exponents")
    sub.add_argument(
        "--n-list", dest="n_list", type=lambda s: [int(v) for v in _csv_list(s)]
    )
    sub.add_argument("--digits", type=int)
    sub.add_argument("--format", choices=["csv", "json"])
    sub.add_argument("--out")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--samples", type=int)
    sub.add_argument("--config")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guelab",
        description="Exact finite-n GUE characteristic-polynomial averages "
        "vs their closed-form asymptotics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="exact vs asymptotic log-average")
    p.add_argument("--regime", choices=["inside", "outside"])
    _add_shared_flags(p)

    p = sub.add_parser("coeffs", help="recurrence coefficients vs asymptotics")
    _add_shared_flags(p)

    p = sub.add_parser("diff-id", help="finite difference vs differential identity")
    p.add_argument("--nu", type=int, help="0-based index of the varied exponent")
    p.add_argument("--fd-step", dest="fd_step", help="central difference step")
    _add_shared_flags(p)

    p = sub.add_parser("mc", help="Monte Carlo cross-check")
    _add_shared_flags(p)

    p = sub.add_parser("moments", help="dump the moment table")
    p.add_argument("--kmax", type=int)
    _add_shared_flags(p)

    p = sub.add_parser("selfcheck", help="run the reduced invariant suite")
    p.add_argument("--corrupt-moments", action="store_true", help=argparse.SUPPRESS)
    _add_shared_flags(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "compare":
            return cmd_compare(cfg)
        if args.command == "coeffs":
            return cmd_coeffs(cfg)
        if args.command == "diff-id":
            return cmd_diff_id(cfg)
        if args.command == "mc":
            return cmd_mc(cfg)
        if args.command == "moments":
            return cmd_moments(cfg)
        if args.command == "selfcheck":
            return cmd_selfcheck(cfg, corrupt_moments=args.corrupt_moments)
        parser.error(f"unknown command {args.command}")
    except InvalidSpecError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except PrecisionUnreachableError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
