"""Command-line entry point: ``kafourier {verify,spectrum,transform,basis-table}``.

Exit status: 0 when every check passes, 1 when an identity fails, 2 for
configuration or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import List, Optional

from .config import ConfigError, RunConfig, load_config
from .dunkl import k_harmonic_basis
from .exact import fraction_str
from .radial import DivergentIntegrand, IncompatibleExponentials, basis_value
from .sl2 import eigenvalue_of_k
from .spectral import (
    UnboundedRegime,
    coefficients_csv,
    expand,
    format_float,
    generalized_ft,
    inverse_ft,
    laguerre_semigroup,
)
from .verify import run_verification

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def cmd_verify(cfg: RunConfig, out: Path) -> int:
    report = run_verification(cfg)
    path = _write(out, "report.txt", report.render())
    n_fail = len(report.failures)
    print(f"{len(report.checks) - n_fail}/{len(report.checks)} checks passed; report written to {path}")
    for c in report.failures:
        print(c.line())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_spectrum(cfg: RunConfig, out: Path) -> int:
    """Eigenvalues of the compact generator, computed by exact application."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["branch", "m", "multiplicity", "l", "eigenvalue", "eigenvalue_float"])
    mismatches = 0
    for sign in (1, -1):
        for m in cfg.sectors:
            dim = k_harmonic_basis(cfg.k, m).dimension
            if dim == 0:
                continue
            spec = cfg.sector_spec(m, sign)
            for l in range(cfg.spectrum_max_l + 1):
                mu = eigenvalue_of_k(spec, l)
                want = spec.lam + 2 * l + 1 if sign > 0 else spec.lam - 2 * l - 1
                mismatches += mu != want
                w.writerow(["+" if sign > 0 else "-", m, dim, l, fraction_str(mu), format_float(float(mu))])
    path = _write(out, "spectrum.csv", buf.getvalue())
    print(f"spectrum written to {path}")
    if mismatches:
        print(f"FAIL {mismatches} eigenvalue(s) differ from the closed form")
        return EXIT_FAIL
    return EXIT_OK


def cmd_transform(cfg: RunConfig, out: Path) -> int:
    req = cfg.transform
    if req is None or req.terms is None:
        raise ConfigError("transform needs 'transform' and 'input' sections")
    spec = cfg.sector_spec(req.sector, req.sign)
    try:
        spec.check()
        before = expand(req.terms, spec, cfg.truncation, cfg.nodes)
    except (DivergentIntegrand, IncompatibleExponentials) as exc:
        raise ConfigError(f"input: {exc}") from exc
    try:
        if req.kind == "ft":
            after = generalized_ft(before)
        elif req.kind == "inverse_ft":
            after = inverse_ft(before)
        else:
            after = laguerre_semigroup(req.z, before)
    except UnboundedRegime as exc:
        raise ConfigError(str(exc)) from exc
    m = req.sector
    p1 = _write(out, "coefficients_before.csv", coefficients_csv((m, l, c) for l, c in enumerate(before.coeffs)))
    p2 = _write(out, "coefficients_after.csv", coefficients_csv((m, l, c) for l, c in enumerate(after.coeffs)))
    print(f"expansion residual {before.residual:.3e}; wrote {p1} and {p2}")
    return EXIT_OK


def cmd_basis_table(cfg: RunConfig, out: Path) -> int:
    written = []
    for sign in (1, -1):
        tag = "plus" if sign > 0 else "minus"
        for m in cfg.sectors:
            spec = cfg.sector_spec(m, sign)
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["l", "r", "f_value"])
            for l in range(cfg.ladder_max_l + 1):
                for r in cfg.grid:
                    w.writerow([l, format_float(r), format_float(float(basis_value(spec, l, r)))])
            written.append(_write(out, f"basis_m{m}_{tag}.csv", buf.getvalue()))
    print(f"wrote {len(written)} basis tables to {out}")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "transform": cmd_transform,
    "basis-table": cmd_basis_table,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kafourier",
        description="Verify and apply the (k,a)-generalized Laguerre/Fourier calculus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "run every identity check and write report.txt",
        "spectrum": "tabulate eigenvalues of the compact generator",
        "transform": "expand an input function and apply the Fourier transform or semigroup",
        "basis-table": "tabulate the basis functions on the configured radial grid",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--nodes", type=int, help="override the quadrature node count")
        p.add_argument("--truncation", type=int, help="override the expansion length L")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config).with_overrides(args.nodes, args.truncation)
        return COMMANDS[args.command](cfg, Path(args.out))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
