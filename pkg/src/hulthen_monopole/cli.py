"""Command-line interface: energies, phase shifts, potential scans, wavefunctions, verification.

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import click
import numpy as np

from . import acceptance, reports
from .model import ModelParams, ParameterError
from .monopole import SeriesToleranceError
from .potentials import Mode, RangeError
from .presets import EnergyPreset, ScanPreset, WavefunctionPreset, get_preset


class InputError(click.ClickException):
    exit_code = 2


@dataclass
class RunConfig:
    """Validated run configuration (JSON file keys match these field names)."""

    alpha: float = 1.0
    xi: float = 0.1
    z: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0
    charge: float = 1.0
    l: list[int] = field(default_factory=lambda: [0])
    n: list[int] = field(default_factory=lambda: [0])
    mode: str = "exact"
    preset: str | None = None
    out: str | None = None
    format: str = "csv"
    tol: float = 1e-12
    xi_limit: bool = False
    energies: list[float] | None = None
    e_min: float = 0.1
    e_max: float = 2.0
    n_energies: int = 20
    oracle: bool = False
    r_min: float = 0.05
    r_max: float = 60.0
    n_points: int = 2000

    def __post_init__(self) -> None:
        if self.mode not in {m.value for m in Mode}:
            raise InputError(f"mode must be exact or approx, got {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise InputError(f"format must be csv or json, got {self.format!r}")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise InputError(f"tol must be positive, got {self.tol!r}")
        for name in ("l", "n"):
            values = getattr(self, name)
            if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in values):
                raise InputError(f"{name} must be a list of non-negative integers, got {values!r}")
        if self.energies is not None and not all(e > 0 for e in self.energies):
            raise InputError("energies must be > 0")
        if not (0 < self.e_min <= self.e_max) or self.n_energies < 1:
            raise InputError("need 0 < e_min <= e_max and n_energies >= 1")
        if self.preset is not None:
            try:
                get_preset(self.preset)
            except KeyError as exc:
                raise InputError(exc.args[0]) from None
        self.params()

    @classmethod
    def from_sources(cls, config_file: str | None, overrides: dict) -> "RunConfig":
        data: dict = {}
        if config_file:
            try:
                with open(config_file) as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read config {config_file}: {exc}") from None
            if not isinstance(data, dict):
                raise InputError("config file must hold a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InputError(f"unknown config key(s): {', '.join(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None and v != ()})
        for key in ("l", "n"):
            if key in data and isinstance(data[key], (int, tuple)):
                data[key] = list(data[key]) if isinstance(data[key], tuple) else [data[key]]
        try:
            return cls(**data)
        except TypeError as exc:
            raise InputError(str(exc)) from None

    def params(self) -> ModelParams:
        try:
            return ModelParams(alpha=self.alpha, xi=self.xi, Z=self.z, mass=self.mass, hbar=self.hbar, charge=self.charge)
        except (ParameterError, TypeError) as exc:
            raise InputError(str(exc)) from None

    def canonical(self) -> str:
        data = dataclasses.asdict(self)
        data.pop("out")
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def energy_grid(self) -> list[float]:
        if self.energies is not None:
            return [float(e) for e in self.energies]
        return [float(e) for e in np.linspace(self.e_min, self.e_max, self.n_energies)]


# ---------------------------------------------------------------- output


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))  # shortest string that round-trips exactly
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def render(table: reports.Table, config: RunConfig) -> str:
    if config.format == "json":
        payload = {
            "config": json.loads(config.canonical()),
            "columns": table.columns,
            "rows": [[_json_value(v) for v in row] for row in table.rows],
            "notes": table.notes,
        }
        return json.dumps(payload, indent=1, sort_keys=False) + "\n"
    lines = [f"# config: {config.canonical()}", ",".join(table.columns)]
    lines += [",".join(_csv_cell(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def write_output(text: str, out: str | None) -> None:
    """Write to ``out`` atomically (temp file + rename), or to stdout."""
    if out is None:
        click.echo(text, nl=False)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(out))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(table: reports.Table, config: RunConfig) -> None:
    if config.format == "csv":
        for note in table.notes:
            click.echo(f"note: {note}", err=True)
    write_output(render(table, config), config.out)


def _preset(config: RunConfig, kind: type):
    if config.preset is None:
        return None
    preset = get_preset(config.preset)
    if not isinstance(preset, kind):
        raise InputError(f"preset {config.preset!r} is not a {kind.__name__}")
    return preset


# ------------------------------------------------------------------- CLI


def common_options(fn):
    options = [
        click.option("--config", "config_file", type=click.Path(dir_okay=False), help="JSON config file; flags override it."),
        click.option("--alpha", type=float, help="Deficit parameter alpha (> 0)."),
        click.option("--xi", type=float, help="Screening parameter xi (> 0)."),
        click.option("--z", type=float, help="Charge number Z."),
        click.option("--l", "l", type=int, multiple=True, help="Orbital quantum number (repeatable)."),
        click.option("--n", "n", type=int, multiple=True, help="Radial quantum number (repeatable)."),
        click.option("--mode", type=click.Choice(["exact", "approx"]), help="Exact or exponentially approximated potential."),
        click.option("--preset", help="Named table/figure preset."),
        click.option("--out", type=click.Path(dir_okay=False), help="Output file (default stdout)."),
        click.option("--format", "format", type=click.Choice(["csv", "json"]), help="Output format."),
        click.option("--tol", type=float, help="Tolerance of the S(alpha) summation."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _config(config_file, **flags) -> RunConfig:
    try:
        return RunConfig.from_sources(config_file, flags)
    except SeriesToleranceError as exc:
        raise InputError(str(exc)) from None


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Hulthen potential in a global-monopole background: analytic results and a numerical oracle."""


@main.command()
@common_options
@click.option("--xi-limit", is_flag=True, default=None, help="Report the xi -> 0 limit of the energies.")
def energies(config_file, xi_limit, **flags):
    """Bound-state energies E_nl with state counts and S(alpha) audit columns."""
    config = _config(config_file, xi_limit=xi_limit, **flags)
    params = config.params()
    preset = _preset(config, EnergyPreset)
    try:
        if preset:
            table = reports.energies_from_preset(preset, params, config.tol)
        else:
            table = reports.energies_table(params, [params.alpha], [params.xi], config.l, config.n, config.tol, config.xi_limit)
    except SeriesToleranceError as exc:
        raise InputError(str(exc)) from None
    _emit(table, config)


@main.command()
@common_options
@click.option("--energy", "energies", type=float, multiple=True, help="Scattering energy E > 0 (repeatable).")
@click.option("--e-min", type=float, help="Lower end of the energy grid.")
@click.option("--e-max", type=float, help="Upper end of the energy grid.")
@click.option("--n-energies", type=int, help="Number of grid energies.")
@click.option("--oracle", is_flag=True, default=None, help="Append numeric (Numerov) phases and differences.")
def phase(config_file, **flags):
    """Phase shifts delta_l and S-matrix elements on an energy grid."""
    config = _config(config_file, **flags)
    table = reports.phase_table(config.params(), config.l, config.energy_grid(), config.tol, Mode.APPROX, config.oracle)
    _emit(table, config)


@main.command("scan")
@common_options
@click.option("--r-min", type=float, help="Smallest radius.")
@click.option("--r-max", type=float, help="Largest radius.")
@click.option("--n-points", type=int, help="Number of radii.")
def scan_cmd(config_file, **flags):
    """Effective-potential decomposition V_eff(r) = V_H + V_SI + V_centrifugal."""
    config = _config(config_file, **flags)
    params = config.params()
    preset = _preset(config, ScanPreset)
    try:
        if preset:
            table = reports.scan_from_preset(preset, params, config.tol)
        else:
            table = reports.scan_table(
                params, [params.alpha], params.xi, config.l[0], config.mode,
                config.r_min, config.r_max, config.n_points, config.tol,
            )
    except RangeError as exc:
        raise InputError(str(exc)) from None
    _emit(table, config)


@main.command()
@common_options
@click.option("--n-points", type=int, help="Number of radii.")
def wavefunction(config_file, **flags):
    """Normalized bound radial functions u(r) and |u|^2."""
    config = _config(config_file, **flags)
    params = config.params()
    preset = _preset(config, WavefunctionPreset)
    if preset:
        table = reports.wavefunction_from_preset(preset, params, config.tol)
    else:
        n_points = flags.get("n_points") or 20001
        table = reports.wavefunction_table(params, config.l[0], config.n, n_points, config.tol)
    if not table.rows:
        raise InputError("NO_BOUND: " + "; ".join(note for note in table.notes if "NO_BOUND" in note))
    _emit(table, config)


@main.command()
@click.option("--criterion", "criteria", type=int, multiple=True, help="Run only these criteria (repeatable).")
@click.option("--out", type=click.Path(dir_okay=False), help="Report file (default stdout).")
def verify(criteria, out):
    """Run the acceptance suite; JSON report, exit status 1 on any failure."""
    known = [c[0] for c in acceptance.CRITERIA]
    selected = list(criteria) or known
    bad = sorted(set(selected) - set(known))
    if bad:
        raise InputError(f"unknown criterion number(s): {bad}")
    results = [acceptance.run_criterion(n) for n in selected]
    for r in results:
        click.echo(r.line(), err=True)
    report = {
        "passed": all(r.passed for r in results),
        "criteria": [r.to_dict() for r in results],
    }
    write_output(json.dumps(report, indent=1, default=_json_value) + "\n", out)
    sys.exit(0 if report["passed"] else 1)


if __name__ == "__main__":  # pragma: no cover
    main()
