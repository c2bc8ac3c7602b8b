"""Vector fields on R^n, possibly defined only on an open box-like domain.

Flows take a closed-form fast path whenever the field allows it:

* fields constant along their own integral curves (L_X X = 0 symbolically)
  flow in straight lines,
* affine fields x' = A x + b flow by a matrix exponential,
* everything else goes through an adaptive Runge-Kutta integration at
  relative tolerance 1e-10.

Tangent vectors are pushed forward along flow words by transporting them
with the exact Jacobian of each step (closed form where the flow is closed
form, otherwise the variational equation dv/dt = DX(x(t)) v integrated
jointly with the trajectory).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .expr import Expr, ZERO, const, poly_coeff_dict

__all__ = [
    "DomainPredicate",
    "VectorField",
    "FlowWord",
    "FlowError",
    "DomainExitError",
    "IntegrationError",
    "lie_bracket",
    "flow",
    "apply_word",
    "pushforward_along_word",
    "scale_field",
    "add_fields",
    "multiply_field",
    "jacobian_exprs",
]

DEFAULT_BOX = 1e6
DEFAULT_RTOL = 1e-10


class FlowError(Exception):
    pass


class DomainExitError(FlowError):
    def __init__(self, message, exit_time=None, step=None):
        super().__init__(message)
        self.exit_time = exit_time
        self.step = step


class IntegrationError(FlowError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class DomainPredicate:
    """Conjunction of strict one-variable inequalities; empty means all of R^n."""

    constraints: Tuple[Tuple[int, str, Fraction], ...] = ()

    def __post_init__(self):
        for index, rel, _ in self.constraints:
            if rel not in ("<", ">"):
                raise ValueError(f"bad relation {rel!r}")
            if index < 1:
                raise ValueError("constraint variable indices are 1-based")

    @property
    def is_full(self):
        return not self.constraints

    def contains(self, point):
        for index, rel, bound in self.constraints:
            v = point[index - 1]
            if rel == "<" and not v < bound:
                return False
            if rel == ">" and not v > bound:
                return False
        return True

    def intersect(self, other):
        merged = tuple(dict.fromkeys(self.constraints + other.constraints))
        return DomainPredicate(merged)

    def __str__(self):
        if self.is_full:
            return "R^n"
        return " and ".join(f"x{i} {rel} {bound}" for i, rel, bound in self.constraints)


FULL_DOMAIN = DomainPredicate()


@dataclass(frozen=True)
class VectorField:
    name: str
    components: Tuple[Expr, ...]
    domain: DomainPredicate = FULL_DOMAIN

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for index, _, _ in self.domain.constraints:
            if index > self.dim:
                raise ValueError(f"domain constraint on x{index} exceeds dimension")

    @property
    def dim(self):
        return len(self.components)

    def is_polynomial(self):
        return all(c.is_polynomial() for c in self.components)

    def value(self, point):
        """Value at a point: Fractions when exactly evaluable, else floats."""
        vals = [c.eval(point) for c in self.components]
        if all(isinstance(v, (int, Fraction)) for v in vals):
            return vals
        return [float(v) for v in vals]

    def value_float(self, point):
        return np.array([c.eval_float(point) for c in self.components], dtype=float)

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __str__(self):
        comps = ", ".join(str(c) for c in self.components)
        body = f"{self.name} = ({comps})"
        if not self.domain.is_full:
            body += f" on {self.domain}"
        return body


@dataclass(frozen=True)
class FlowWord:
    """A composite of flows: apply step (index, time) left to right."""

    steps: Tuple[Tuple[int, float], ...]

    @property
    def net_time(self):
        return sum(t for _, t in self.steps)

    def inverse(self):
        return FlowWord(tuple((i, -t) for i, t in reversed(self.steps)))

    def __len__(self):
        return len(self.steps)


def _as_steps(word):
    if isinstance(word, FlowWord):
        return word.steps
    return tuple((int(i), float(t)) for i, t in word)


def lie_bracket(X, Y, name=None):
    """[X, Y] in coordinates, with the intersected domain."""
    if X.dim != Y.dim:
        raise ValueError("bracket of fields of different dimensions")
    n = X.dim
    comps = []
    for i in range(n):
        acc = ZERO
        for j in range(n):
            acc = acc + X.components[j] * Y.components[i].diff(j + 1)
            acc = acc - Y.components[j] * X.components[i].diff(j + 1)
        comps.append(acc)
    return VectorField(
        name or f"[{X.name},{Y.name}]",
        tuple(comps),
        X.domain.intersect(Y.domain),
    )


def scale_field(c, X, name=None):
    c = Fraction(c)
    return VectorField(
        name or f"{c}*{X.name}",
        tuple(const(c) * comp for comp in X.components),
        X.domain,
    )


def add_fields(X, Y, name=None):
    if X.dim != Y.dim:
        raise ValueError("sum of fields of different dimensions")
    return VectorField(
        name or f"{X.name}+{Y.name}",
        tuple(a + b for a, b in zip(X.components, Y.components)),
        X.domain.intersect(Y.domain),
    )


def multiply_field(f, X, name=None):
    """Scalar-function multiple f*X (module action)."""
    return VectorField(
        name or f"f*{X.name}",
        tuple(f * comp for comp in X.components),
        X.domain,
    )


# -- flow kind detection ----------------------------------------------------------


@lru_cache(maxsize=None)
def jacobian_exprs(X):
    return tuple(
        tuple(X.components[i].diff(j + 1) for j in range(X.dim)) for i in range(X.dim)
    )


def _jacobian_at(X, point):
    J = jacobian_exprs(X)
    return np.array([[e.eval_float(point) for e in row] for row in J], dtype=float)


@lru_cache(maxsize=None)
def _flow_kind(X):
    # straight lines: the field is constant along its own integral curves
    straight = True
    for i in range(X.dim):
        acc = ZERO
        for j in range(X.dim):
            acc = acc + X.components[j] * X.components[i].diff(j + 1)
        if not acc.is_zero():
            straight = False
            break
    if straight:
        return ("straight",)
    if all(c.is_polynomial() and c.total_degree() <= 1 for c in X.components):
        n = X.dim
        A = [[Fraction(0)] * n for _ in range(n)]
        b = [Fraction(0)] * n
        for i, comp in enumerate(X.components):
            for mono, c in poly_coeff_dict(comp, n).items():
                deg = sum(mono)
                if deg == 0:
                    b[i] = c
                else:
                    j = mono.index(1)
                    A[i][j] = c
        return ("affine", tuple(map(tuple, A)), tuple(b))
    return ("ode",)


def _affine_maps(A, b, t):
    n = len(b)
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = np.array(A, dtype=float)
    M[:n, n] = np.array(b, dtype=float)
    E = expm(M * t)
    return E[:n, :n], E[:n, n]


def _check_domain_endpoints(X, points, step=None):
    for s, p in points:
        if not X.domain.contains(p):
            raise DomainExitError(
                f"trajectory of {X.name} left its domain", exit_time=s, step=step
            )


def _check_box(p, box, step=None):
    if np.max(np.abs(p)) > box:
        raise IntegrationError("trajectory escaped the bounding box", step=step)


def _flow_step(X, t, p, v=None, rtol=DEFAULT_RTOL, box=DEFAULT_BOX, method="auto", step=None):
    """Advance p by the time-t flow of X; optionally transport tangent v."""
    p = np.asarray(p, dtype=float)
    if not X.domain.contains(p):
        raise DomainExitError(
            f"start point outside the domain of {X.name}", exit_time=0.0, step=step
        )
    if t == 0.0:
        return (p.copy(), None if v is None else np.array(v, dtype=float))
    kind = _flow_kind(X) if method == "auto" else ("ode",)
    if kind[0] == "straight":
        direction = X.value_float(p)
        end = p + t * direction
        _check_domain_endpoints(X, [(t, end)], step)
        _check_box(end, box, step)
        if v is None:
            return end, None
        J = np.eye(X.dim) + t * _jacobian_at(X, p)
        return end, J @ np.asarray(v, dtype=float)
    if kind[0] == "affine":
        _, A, b = kind
        E, c = _affine_maps(A, b, t)
        end = E @ p + c
        if not X.domain.is_full:
            diagonal = all(
                A[i][j] == 0 for i in range(X.dim) for j in range(X.dim) if i != j
            )
            if diagonal:
                _check_domain_endpoints(X, [(t, end)], step)
            else:
                for k in range(1, 17):
                    s = t * k / 16.0
                    Es, cs = _affine_maps(A, b, s)
                    _check_domain_endpoints(X, [(s, Es @ p + cs)], step)
        _check_box(end, box, step)
        if v is None:
            return end, None
        return end, E @ np.asarray(v, dtype=float)
    return _flow_step_ode(X, t, p, v, rtol, box, step)


MAX_RHS_EVALS = 50_000


def _flow_step_ode(X, t, p, v, rtol, box, step):
    n = X.dim
    transport = v is not None
    evals = [0]

    def rhs(_, y):
        evals[0] += 1
        if evals[0] > MAX_RHS_EVALS:
            raise IntegrationError(
                "integration budget exceeded (likely finite-time blow-up)",
                step=step,
            )
        x = y[:n]
        out = np.empty_like(y)
        out[:n] = X.value_float(x)
        if transport:
            out[n:] = _jacobian_at(X, x) @ y[n:]
        return out

    events = []
    for index, rel, bound in X.domain.constraints:
        bnd = float(bound)

        def make(idx=index, b=bnd):
            def ev(_, y):
                return y[idx - 1] - b

            ev.terminal = True
            return ev

        events.append(make())

    y0 = np.concatenate([p, np.asarray(v, dtype=float)]) if transport else p.copy()
    sol = solve_ivp(
        rhs,
        (0.0, t),
        y0,
        method="RK45",
        rtol=rtol,
        atol=1e-12,
        events=events or None,
        dense_output=False,
    )
    if sol.status == 1:
        hit = min(
            (te[0] for te in sol.t_events if len(te)), default=None, key=abs
        )
        raise DomainExitError(
            f"trajectory of {X.name} left its domain",
            exit_time=hit,
            step=step,
        )
    if sol.status != 0:
        raise IntegrationError(f"integrator failed: {sol.message}", step=step)
    if np.max(np.abs(sol.y[:n])) > box:
        raise IntegrationError("trajectory escaped the bounding box", step=step)
    yT = sol.y[:, -1]
    if transport:
        return yT[:n], yT[n:]
    return yT, None


def flow(X, t, point, rtol=DEFAULT_RTOL, box=DEFAULT_BOX, method="auto"):
    """Flow the point for time t along X.  Raises on domain exit or blow-up."""
    end, _ = _flow_step(X, float(t), point, None, rtol, box, method)
    return end


def apply_word(family, word, point, rtol=DEFAULT_RTOL, box=DEFAULT_BOX, method="auto"):
    """Apply a flow word left to right: step k flows along family[i_k]."""
    p = np.asarray(point, dtype=float)
    for k, (i, t) in enumerate(_as_steps(word)):
        try:
            p, _ = _flow_step(family[i], t, p, None, rtol, box, method, step=k)
        except FlowError as err:
            err.step = k
            raise
    return p


def pushforward_along_word(
    family, word, X, point, rtol=DEFAULT_RTOL, box=DEFAULT_BOX, method="auto"
):
    """Pushforward of X under the word's composite diffeomorphism, at point.

    Walks back to y = Phi^{-1}(point), takes v = X(y), and transports v
    forward through every step with the step's exact flow Jacobian.
    """
    steps = _as_steps(word)
    inverse = tuple((i, -t) for i, t in reversed(steps))
    y = apply_word(family, inverse, point, rtol, box, method)
    if not X.domain.contains(y):
        raise DomainExitError(f"{X.name} is undefined at the pulled-back point")
    v = X.value_float(y)
    p = y
    for k, (i, t) in enumerate(steps):
        try:
            p, v = _flow_step(family[i], t, p, v, rtol, box, method, step=k)
        except FlowError as err:
            err.step = k
            raise
    drift = np.max(np.abs(p - np.asarray(point, dtype=float)))
    if drift > 1e-6 * (1.0 + np.max(np.abs(point))):
        raise IntegrationError(f"round-trip drift {drift:.2e} exceeds tolerance")
    return v
