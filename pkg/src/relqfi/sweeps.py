"""Parameter sweeps behind the figure data, and their CSV/JSON serialisation.

A sweep is a list of independent points evaluated in input order; with
``jobs > 1`` points run in worker processes but rows are still assembled in
input order, so output never depends on scheduling.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import io
import json

import numpy as np

from . import __version__, _accel
from .errors import InvalidParameters, RelqfiError
from .model import MODEL_QUAD, ModelParams, zeta_xi
from .numerics import QuadratureSpec
from .tradeoff import lambda_star, omega, omega_limit0_core
from .wavepacket import AMPLITUDE_QUAD, peak_radius

QUANTITIES = ("peak_radius", "omega_vs_lambda", "lambda_star_vs_V", "omega0_vs_kappa")

FIGURE_OF = {
    "peak_radius": "fig1",
    "omega_vs_lambda": "fig3",
    "lambda_star_vs_V": "fig4",
    "omega0_vs_kappa": "fig5",
}


def _grid(values, digits=12):
    return [round(float(v), digits) for v in values]


# figure defaults, in the dimensionless product m*kappa
DEFAULTS = {
    "peak_radius": dict(
        kappa_primes=[0.1, 0.5, 1.0],
        velocities=_grid(np.linspace(0.05, 1.0, 20)),
        lambdas=[],
    ),
    "omega_vs_lambda": dict(
        kappa_primes=[1.0],
        velocities=[1.0],
        lambdas=_grid(np.linspace(0.01, 0.99, 99)),
    ),
    "lambda_star_vs_V": dict(
        kappa_primes=[0.1, 0.5, 1.0, 2.0],
        velocities=_grid(np.linspace(0.01, 1.0, 100)),
        lambdas=[],
    ),
    "omega0_vs_kappa": dict(
        kappa_primes=_grid(np.geomspace(1e-3, 10.0, 121), 15),
        velocities=[0.85, 0.9, 0.95, 1.0],
        lambdas=[],
    ),
}


class SweepPointError(RelqfiError):
    """A numerical failure at one sweep point; carries the point for the message."""

    def __init__(self, point, cause):
        self.point = point
        self.cause = cause
        super().__init__(f"{type(cause).__name__} at {point}: {cause}")

    def __reduce__(self):
        # keeps the exception picklable across worker processes
        return (SweepPointError, (self.point, self.cause))


@dataclass(frozen=True)
class SweepRequest:
    quantity: str
    kappa_primes: tuple = ()
    velocities: tuple = ()
    lambdas: tuple = ()
    mass: float = 1.0
    relative_tolerance: float = MODEL_QUAD.relative_tolerance
    jobs: int = 1

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise InvalidParameters(f"unknown quantity {self.quantity!r}; choose from {', '.join(QUANTITIES)}")
        defaults = DEFAULTS[self.quantity]
        for name in ("kappa_primes", "velocities", "lambdas"):
            values = tuple(float(v) for v in getattr(self, name)) or tuple(float(v) for v in defaults[name])
            object.__setattr__(self, name, values)
        if not self.mass > 0:
            raise InvalidParameters("mass must be positive")
        if not self.relative_tolerance > 0:
            raise InvalidParameters("tolerance must be positive")
        if any(not kp > 0 for kp in self.kappa_primes):
            raise InvalidParameters("m*kappa values must be positive")
        if any(not 0.0 <= v <= 1.0 for v in self.velocities):
            raise InvalidParameters("velocities must lie in [0, 1]")
        if any(not 0.0 <= lam <= 1.0 for lam in self.lambdas):
            raise InvalidParameters("lambda values must lie in [0, 1]")
        if self.quantity in ("peak_radius", "lambda_star_vs_V", "omega0_vs_kappa"):
            if any(v == 0.0 for v in self.velocities):
                raise InvalidParameters(f"{self.quantity} needs V > 0")
        if self.quantity == "omega_vs_lambda" and not self.lambdas:
            raise InvalidParameters("omega_vs_lambda needs lambda values")

    @property
    def model_spec(self):
        return QuadratureSpec(relative_tolerance=self.relative_tolerance,
                              absolute_tolerance=MODEL_QUAD.absolute_tolerance)

    @property
    def amplitude_spec(self):
        return QuadratureSpec(relative_tolerance=max(self.relative_tolerance, 1e-12),
                              absolute_tolerance=AMPLITUDE_QUAD.absolute_tolerance)

    def points(self):
        if self.quantity == "omega_vs_lambda":
            return [(kp, v, lam) for kp in self.kappa_primes for v in self.velocities for lam in self.lambdas]
        if self.quantity == "omega0_vs_kappa":
            return [(kp, v) for v in self.velocities for kp in self.kappa_primes]
        return [(kp, v) for kp in self.kappa_primes for v in self.velocities]


@dataclass
class Table:
    quantity: str
    columns: list
    units: list
    rows: list
    meta: dict = field(default_factory=dict)
    series_column: str = ""
    x_column: str = ""
    y_column: str = ""

    def column(self, name):
        k = self.columns.index(name)
        return [row[k] for row in self.rows]


# Column layouts: (name, unit). Lengths carry 1/E, the inverse of the mass unit.
LAYOUT = {
    "peak_radius": [("m_kappa", "1"), ("velocity", "1"), ("kappa", "1/E"),
                    ("peak_radius", "1/E"), ("peak_radius_over_kappa", "1")],
    "omega_vs_lambda": [("m_kappa", "1"), ("velocity", "1"), ("lambda", "1"),
                        ("omega", "1/E^2"), ("omega_over_half_kappa2", "1")],
    "lambda_star_vs_V": [("m_kappa", "1"), ("velocity", "1"), ("lambda_star", "1")],
    "omega0_vs_kappa": [("velocity", "1"), ("m_kappa", "1"), ("omega0", "1/E^2"),
                        ("omega0_over_half_kappa2", "1")],
}
PLOT_AXES = {
    "peak_radius": ("m_kappa", "velocity", "peak_radius"),
    "omega_vs_lambda": ("velocity", "lambda", "omega"),
    "lambda_star_vs_V": ("m_kappa", "velocity", "lambda_star"),
    "omega0_vs_kappa": ("velocity", "m_kappa", "omega0"),
}


def _evaluate(task):
    quantity, point, mass, model_spec, amplitude_spec = task
    try:
        if quantity == "peak_radius":
            kp, v = point
            params = ModelParams.from_kappa_prime(kp, v, mass)
            r = peak_radius(params, spec=amplitude_spec)
            return (kp, v, params.kappa, r, r / params.kappa)
        if quantity == "omega_vs_lambda":
            kp, v, lam = point
            params = ModelParams.from_kappa_prime(kp, v, mass)
            w = omega(lam, params, zeta_xi(params, spec=model_spec))
            return (kp, v, lam, w, w / (0.5 * params.kappa**2))
        if quantity == "lambda_star_vs_V":
            kp, v = point
            params = ModelParams.from_kappa_prime(kp, v, mass)
            return (kp, v, lambda_star(params, zeta_xi(params, spec=model_spec)))
        kp, v = point
        params = ModelParams.from_kappa_prime(kp, v, mass)
        core = omega_limit0_core(*zeta_xi(params, spec=model_spec))
        return (v, kp, 0.5 * params.kappa**2 * core, core)
    except InvalidParameters:
        raise
    except (ArithmeticError, RuntimeError) as exc:
        raise SweepPointError(dict(zip(("m_kappa", "velocity", "lambda"), point)), exc) from exc


def run_sweep(request):
    """Evaluate every point of ``request`` and return a Table."""
    tasks = [(request.quantity, pt, request.mass, request.model_spec, request.amplitude_spec)
             for pt in request.points()]
    if request.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=request.jobs) as pool:
            rows = list(pool.map(_evaluate, tasks))
    else:
        rows = [_evaluate(t) for t in tasks]
    layout = LAYOUT[request.quantity]
    series, x, y = PLOT_AXES[request.quantity]
    meta = {
        "library": f"relqfi {__version__}",
        "figure": FIGURE_OF[request.quantity],
        "quantity": request.quantity,
        "mass": request.mass,
        "m_kappa": list(request.kappa_primes),
        "velocity": list(request.velocities),
        "model_quadrature": _spec_text(request.model_spec),
        "amplitude_quadrature": _spec_text(request.amplitude_spec),
        "kernel_backend": _accel.backend_name(),
    }
    if request.lambdas:
        meta["lambda"] = list(request.lambdas)
    if request.quantity == "omega_vs_lambda":
        meta["lambda_star"] = [
            lambda_star(p, zeta_xi(p, spec=request.model_spec)) if p.velocity > 0 else 0.0
            for p in (ModelParams.from_kappa_prime(kp, v, request.mass)
                      for kp in request.kappa_primes for v in request.velocities)
        ]
    return Table(request.quantity, [c for c, _ in layout], [u for _, u in layout], rows, meta, series, x, y)


def _spec_text(spec):
    return (f"adaptive GL15 rtol={spec.relative_tolerance:g} atol={spec.absolute_tolerance:g} "
            f"truncation={spec.truncation_radius_in_decay_units:g} decay units")


def _fmt(value):
    return format(float(value), ".17g")


def _meta_value(value):
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def to_csv(table):
    buf = io.StringIO()
    for key, value in table.meta.items():
        buf.write(f"# {key}: {_meta_value(value)}\n")
    buf.write("# units: E is the unit of the rest mass; lengths are in 1/E (natural units)\n")
    buf.write(",".join(f"{c} [{u}]" for c, u in zip(table.columns, table.units)) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def to_json(table):
    cols = {c: [float(row[k]) for row in table.rows] for k, c in enumerate(table.columns)}
    obj = {
        "quantity": table.quantity,
        "meta": table.meta,
        "units": dict(zip(table.columns, table.units)),
        "columns": cols,
    }
    return json.dumps(obj, indent=1) + "\n"


def parse_values(text):
    """Parse "a,b,c" or "start:stop:count" (inclusive linspace) into floats."""
    text = text.strip()
    if not text:
        raise InvalidParameters("empty value list")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidParameters(f"range {text!r} must look like start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise InvalidParameters(f"cannot parse range {text!r}") from exc
        if count < 1:
            raise InvalidParameters("range count must be at least 1")
        return [float(v) for v in np.linspace(start, stop, count)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidParameters(f"cannot parse value list {text!r}") from exc
