"""Command-line interface: ``coulomb-born {amplitude,xsec,compare,verify}``.

Exit codes: 0 success, 1 a comparison or identity failed, 2 invalid input
(domain or ladder errors), 3 a numerical procedure failed to converge.
Output is deterministic: fixed column order and shortest round-trip floats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from . import born
from .distributions import IDENTITIES, run_identity_suite
from .errors import ConvergenceError, DomainError, IdentityError
from .kinematics import Kinematics, angle_from_q, momentum_transfer
from .potentials import Coulomb, Sign, Yukawa
from .quadrature import validate_ladder

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3

COMMANDS = ("amplitude", "xsec", "compare", "verify")

# CLI spelling -> Method; several spellings per method
_METHOD_ALIASES = {
    "closed": born.Method.CLOSED_FORM,
    "closed_form": born.Method.CLOSED_FORM,
    "screened": born.Method.SCREENED_LIMIT,
    "screened_limit": born.Method.SCREENED_LIMIT,
    "cylindrical": born.Method.CYLINDRICAL,
    "hard": born.Method.OPPENHEIMER_HARD_MODE,
    "oppenheimer": born.Method.OPPENHEIMER_HARD_MODE,
    "oppenheimer_hard_mode": born.Method.OPPENHEIMER_HARD_MODE,
    "generic": born.Method.GENERIC_RADIAL,
    "generic_radial": born.Method.GENERIC_RADIAL,
}

COLUMNS = {
    "amplitude": ("q", "method", "value", "est_err"),
    "xsec": ("theta_deg", "q", "method", "amplitude", "dsigma_domega", "est_err"),
    "compare": ("q", "closed", "screened", "cylindrical", "max_gap", "pass"),
    "verify": ("identity", "phi_params", "value", "expected", "gap", "est_err", "pass"),
}


@dataclass(frozen=True)
class GridPoint:
    q: float
    p: Optional[float] = None
    theta: Optional[float] = None
    degrees: Optional[float] = None  # the angle as given on the command line

    @property
    def theta_deg(self) -> Optional[float]:
        if self.degrees is not None:
            return self.degrees
        return None if self.theta is None else math.degrees(self.theta)


@dataclass(frozen=True)
class RunConfig:
    command: str
    potential: str = "coulomb"
    e2: float = 1.0
    lam: Optional[float] = None
    sign: Sign = Sign.REPULSIVE
    m: float = 1.0
    grid: tuple[GridPoint, ...] = ()
    tol: Optional[float] = None
    ladder: tuple[float, ...] = born.DEFAULT_LADDER
    methods: tuple[born.Method, ...] = ()
    fmt: str = "csv"
    out: Optional[str] = None
    strict: bool = False
    identities: tuple[str, ...] = ()
    samples: int = 20
    seed: int = 20240601
    raw: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.command != "verify" and not self.grid:
            raise DomainError("the kinematic grid is empty: give --q or --theta-deg with --p")
        if self.tol is not None and not self.tol > 0:
            raise DomainError(f"tolerance must be > 0, got {self.tol!r}")
        if self.fmt not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.fmt!r}")

    def describe(self) -> dict:
        return {
            "command": self.command,
            "potential": self.potential,
            "e2": self.e2,
            "lambda": self.lam,
            "sign": self.sign.name.lower(),
            "m": self.m,
            "grid": [{"q": g.q, "p": g.p, "theta_deg": g.theta_deg} for g in self.grid],
            "tol": self.tol,
            "ladder": list(self.ladder),
            "methods": [mt.value for mt in self.methods],
            "format": self.fmt,
            "strict": self.strict,
            "identities": list(self.identities),
            "samples": self.samples,
            "seed": self.seed,
        }


# --------------------------------------------------------------------------
# argument handling


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise DomainError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coulomb-born", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("amplitude", "Born amplitudes on a q or angle grid"),
        ("xsec", "differential cross sections on an angle grid"),
        ("compare", "compare the Coulomb routes against the closed form"),
        ("verify", "run the distribution identity suite"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value file mirroring the flags; flags win")
        p.add_argument("--potential", choices=("coulomb", "yukawa"))
        p.add_argument("--e2", type=float, help="coupling strength (fold integer charges in)")
        p.add_argument("--lambda", dest="lam", type=float, help="Yukawa screening mass")
        p.add_argument("--sign", choices=("repulsive", "attractive"))
        p.add_argument("--m", type=float, help="reduced mass")
        p.add_argument("--m1", type=float, help="mass of particle 1 (with --m2)")
        p.add_argument("--m2", type=float, help="mass of particle 2 (with --m1)")
        p.add_argument("--p", type=float, help="centre-of-mass momentum")
        p.add_argument("--theta-deg", dest="theta_deg", help="comma-separated angles in degrees (needs --p)")
        p.add_argument("--q", help="comma-separated momentum transfers")
        p.add_argument("--tol", type=float, help="relative tolerance (pass threshold for compare)")
        p.add_argument("--lambda-start", dest="lambda_start", type=float)
        p.add_argument("--lambda-ratio", dest="lambda_ratio", type=float)
        p.add_argument("--lambda-steps", dest="lambda_steps", type=int)
        p.add_argument("--method", help="comma-separated: closed, screened, cylindrical, hard, generic")
        p.add_argument("--strict", action="store_true", default=None)
        p.add_argument("--format", dest="fmt", choices=("csv", "json"))
        p.add_argument("--out", help="output path (default: standard output)")
        p.add_argument("--identity", help="comma-separated identity names (verify only)")
        p.add_argument("--samples", type=int, help="test functions per identity (verify only)")
        p.add_argument("--seed", type=int, help="random seed for the test functions (verify only)")
    return parser


_CONFIG_KEYS = {
    "potential": "potential", "e2": "e2", "lambda": "lam", "sign": "sign", "m": "m", "m1": "m1",
    "m2": "m2", "p": "p", "theta_deg": "theta_deg", "q": "q", "tol": "tol",
    "lambda_start": "lambda_start", "lambda_ratio": "lambda_ratio", "lambda_steps": "lambda_steps",
    "method": "method", "strict": "strict", "format": "fmt", "out": "out", "identity": "identity",
    "samples": "samples", "seed": "seed",
}
_CONFIG_TYPES = {"e2": float, "lam": float, "m": float, "m1": float, "m2": float, "p": float,
                 "tol": float, "lambda_start": float, "lambda_ratio": float, "lambda_steps": int,
                 "samples": int, "seed": int}


def read_config(path: str) -> dict[str, Any]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment, dashes and underscores are interchangeable."""
    out: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (t.strip() for t in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            dest = _CONFIG_KEYS[key]
            if dest == "strict":
                out[dest] = value.lower() in ("1", "true", "yes", "on")
            elif dest in _CONFIG_TYPES:
                try:
                    out[dest] = _CONFIG_TYPES[dest](value)
                except ValueError as exc:
                    raise DomainError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
            else:
                out[dest] = value
    return out


def _resolve_grid(ns: dict) -> tuple[GridPoint, ...]:
    p = ns.get("p")
    if ns.get("theta_deg") is not None and ns.get("q") is not None:
        raise DomainError("give either --theta-deg or --q, not both")
    if ns.get("theta_deg") is not None:
        if p is None:
            raise DomainError("--theta-deg needs --p")
        pts = []
        for deg in _floats(ns["theta_deg"]):
            k = Kinematics(p, math.radians(deg))
            pts.append(GridPoint(momentum_transfer(k), p, k.theta, deg))
        return tuple(pts)
    if ns.get("q") is not None:
        pts = []
        for q in _floats(ns["q"]):
            if not (q >= 0 and math.isfinite(q)):
                raise DomainError(f"momentum transfer must be finite and >= 0, got {q!r}")
            theta = angle_from_q(p, q) if p is not None else None
            pts.append(GridPoint(q, p, theta))
        return tuple(pts)
    return ()


def _resolve_methods(text: Optional[str], command: str, potential: str, lam: Optional[float]) -> tuple[born.Method, ...]:
    if command == "compare":
        return (born.Method.CLOSED_FORM, born.Method.SCREENED_LIMIT, born.Method.CYLINDRICAL)
    if text is None:
        coulomb_like = potential == "coulomb" or not lam
        return (born.Method.CLOSED_FORM if coulomb_like else born.Method.GENERIC_RADIAL,)
    out = []
    for name in text.replace(" ", "").split(","):
        if name not in _METHOD_ALIASES:
            raise DomainError(f"unknown method {name!r}; choose from {sorted(_METHOD_ALIASES)}")
        out.append(_METHOD_ALIASES[name])
    return tuple(out)


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    merged: dict[str, Any] = {}
    if ns.get("config"):
        merged.update(read_config(ns["config"]))
    merged.update({k: v for k, v in ns.items() if v is not None})
    command = merged["command"]

    if merged.get("m") is not None:
        m = merged["m"]
    elif merged.get("m1") is not None or merged.get("m2") is not None:
        if merged.get("m1") is None or merged.get("m2") is None:
            raise DomainError("--m1 and --m2 go together")
        m = born.reduced_mass(merged["m1"], merged["m2"])
    else:
        m = 1.0

    potential = merged.get("potential", "coulomb")
    lam = merged.get("lam")
    if potential == "yukawa" and lam is None:
        raise DomainError("the yukawa potential needs --lambda")

    start = merged.get("lambda_start", 0.4)
    ratio = merged.get("lambda_ratio", 0.5)
    steps = merged.get("lambda_steps", 5)
    ladder = tuple(start * ratio**k for k in range(steps))
    if command in ("compare",) or "screened" in (merged.get("method") or ""):
        validate_ladder(ladder)

    identities = tuple(n for n in (merged.get("identity") or "").replace(" ", "").split(",") if n)
    unknown = [n for n in identities if n not in IDENTITIES]
    if unknown:
        raise DomainError(f"unknown identities {unknown}; choose from {list(IDENTITIES)}")

    return RunConfig(
        command=command,
        potential=potential,
        e2=merged.get("e2", 1.0),
        lam=lam,
        sign=Sign.parse(merged.get("sign", "repulsive")),
        m=m,
        grid=_resolve_grid(merged),
        tol=merged.get("tol"),
        ladder=ladder,
        methods=_resolve_methods(merged.get("method"), command, potential, lam),
        fmt=merged.get("fmt", "csv"),
        out=merged.get("out"),
        strict=bool(merged.get("strict", False)),
        identities=identities,
        samples=merged.get("samples", 20),
        seed=merged.get("seed", 20240601),
        raw=merged,
    )


# --------------------------------------------------------------------------
# commands


def _coulomb_like(cfg: RunConfig) -> bool:
    return cfg.potential == "coulomb" or not cfg.lam


def _potential(cfg: RunConfig):
    if cfg.potential == "coulomb":
        return Coulomb(cfg.e2, cfg.sign)
    return Yukawa(cfg.e2, cfg.lam, cfg.sign)


def _evaluate(cfg: RunConfig, point: GridPoint, method: born.Method) -> born.Amplitude:
    tol = {} if cfg.tol is None else {"tol": cfg.tol}
    if method is born.Method.GENERIC_RADIAL:
        return born.born_radial(_potential(cfg), cfg.m, point.q, strict=cfg.strict, **tol)
    if method is born.Method.CLOSED_FORM:
        if _coulomb_like(cfg):
            return born.coulomb_closed(cfg.m, cfg.e2, cfg.sign, point.q)
        return born.yukawa_closed(cfg.m, cfg.e2, cfg.lam, cfg.sign, point.q)
    if not _coulomb_like(cfg):
        raise DomainError(f"method {method.value} applies to the Coulomb potential only")
    if method is born.Method.SCREENED_LIMIT:
        return born.coulomb_screened_limit(cfg.m, cfg.e2, cfg.sign, point.q, cfg.ladder, **tol)
    if method is born.Method.CYLINDRICAL:
        return born.coulomb_cylindrical(cfg.m, cfg.e2, cfg.sign, point.q, strict=cfg.strict, **tol)
    if point.p is None or point.theta is None:
        raise DomainError("oppenheimer_hard_mode needs --p (with --q or --theta-deg)")
    if point.theta == 0.0:
        raise DomainError("Coulomb amplitude diverges at theta = 0 (forward scattering)")
    return born.coulomb_oppenheimer_hard_mode(cfg.m, cfg.e2, cfg.sign, point.p, point.theta, **tol)


def run_amplitude(cfg: RunConfig) -> tuple[list[dict], dict, int]:
    rows = []
    for point in cfg.grid:
        for method in cfg.methods:
            amp = _evaluate(cfg, point, method)
            rows.append({"q": point.q, "method": amp.method.value, "value": amp.value, "est_err": amp.est_err})
    return rows, {"rows": len(rows)}, EXIT_OK


def run_xsec(cfg: RunConfig) -> tuple[list[dict], dict, int]:
    rows = []
    for point in cfg.grid:
        if point.theta is None:
            raise DomainError("xsec needs angles: give --theta-deg (or --q) together with --p")
        k = Kinematics(point.p, point.theta)
        for method in cfg.methods:
            amp = _evaluate(cfg, point, method)
            xs = born.cross_section(amp, k)
            rows.append({
                "theta_deg": point.theta_deg,
                "q": point.q,
                "method": amp.method.value,
                "amplitude": amp.value,
                "dsigma_domega": xs.value,
                "est_err": 2.0 * abs(amp.value) * amp.est_err + amp.est_err**2,
            })
    return rows, {"rows": len(rows)}, EXIT_OK


def run_compare(cfg: RunConfig) -> tuple[list[dict], dict, int]:
    if not _coulomb_like(cfg):
        raise DomainError("compare needs the Coulomb potential (or yukawa with lambda = 0)")
    tol = 1e-6 if cfg.tol is None else cfg.tol
    rows = []
    for point in cfg.grid:
        closed = born.coulomb_closed(cfg.m, cfg.e2, cfg.sign, point.q)
        screened = born.coulomb_screened_limit(cfg.m, cfg.e2, cfg.sign, point.q, cfg.ladder)
        cyl = born.coulomb_cylindrical(cfg.m, cfg.e2, cfg.sign, point.q, strict=cfg.strict)
        gap = max(abs(screened.value - closed.value), abs(cyl.value - closed.value)) / abs(closed.value)
        rows.append({"q": point.q, "closed": closed.value, "screened": screened.value,
                     "cylindrical": cyl.value, "max_gap": gap, "pass": gap <= tol})
    all_pass = all(r["pass"] for r in rows)
    summary = {"rows": len(rows), "tol": tol, "max_gap": max(r["max_gap"] for r in rows), "all_pass": all_pass}
    return rows, summary, EXIT_OK if all_pass else EXIT_FAILED


def run_verify(cfg: RunConfig) -> tuple[list[dict], dict, int]:
    records = run_identity_suite(cfg.samples, cfg.seed, cfg.identities or None, strict=cfg.strict)
    rows = [r.to_dict() for r in records]
    failed = sum(not r.passed for r in records)
    summary = {"records": len(rows), "passed": len(rows) - failed, "failed": failed, "all_pass": failed == 0}
    return rows, summary, EXIT_OK if failed == 0 else EXIT_FAILED


_RUNNERS = {"amplitude": run_amplitude, "xsec": run_xsec, "compare": run_compare, "verify": run_verify}


# --------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    return str(v)


def render(cfg: RunConfig, rows: list[dict], summary: dict) -> str:
    if cfg.fmt == "json":
        doc = {"config": cfg.describe(), "rows": rows, "summary": summary}
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = COLUMNS[cfg.command]
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in cols])
    return buf.getvalue()


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = config_from_args(argv)
        rows, summary, code = _RUNNERS[cfg.command](cfg)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except IdentityError as exc:
        print(f"identity violated: {exc}", file=sys.stderr)
        return EXIT_FAILED
    text = render(cfg, rows, summary)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
