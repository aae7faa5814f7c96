"""
Edge-chain straightening.

A chain is a sequence of faces f_0..f_{n-1} where f_i is entered through
edge e_i and left through e_{i+1}. Each crossing i is the point at
parameter t_i on e_i (arclength fraction from the lower label). The
length of the chain is the sum of the face-local chord lengths

    F(t) = sum_i d(P_i(t_i), Q_i(t_{i+1}))

and in negative curvature F is strictly convex in t. Its minimiser is the
geodesic through the chain: the straight segment of the development.
Iterates are kept inside (0, 1); a minimiser pressed against an edge
endpoint means the segment escapes the strip.

Open chains pin t_0 and t_n and solve a tridiagonal Newton system;
cyclic chains identify e_n with e_0 and solve the periodic system densely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import LinAlgError, solve, solveh_banded

from tetrageo.exceptions import ConvergenceFailure, SegmentEscapesDevelopment
from tetrageo.geometry.hypmath import SIGNATURE
from tetrageo.geometry.tetrahedron import Edge, Surface, face_of_edges
from tetrageo.logging import get_logger

logger = get_logger(__name__)

GRADIENT_TOLERANCE = 1e-13
STEP_TOLERANCE = 1e-12
ARMIJO = 1e-4
ROUNDOFF = 64 * float(np.finfo(float).eps)
MIN_STEP = 1e-12
INTERIOR_FRACTION = 0.99
BOUNDARY_GAP = 1e-9
DEGENERATE_CHORD = 1e-14


def _dot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.sum(u * SIGNATURE * v, axis=-1)


def _gap(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """<p - q, p - q> = 2 (cosh d - 1), exact for short chords."""
    diff = p - q
    return np.maximum(_dot(diff, diff), 0.0)


@dataclass(frozen=True, eq=False)
class EdgeChain:
    a: float
    edges: tuple[Edge, ...]
    faces: tuple[int, ...]
    in_start: np.ndarray
    in_tangent: np.ndarray
    out_start: np.ndarray
    out_tangent: np.ndarray
    cyclic: bool

    @property
    def size(self) -> int:
        """Number of crossing parameters."""
        return len(self.faces) if self.cyclic else len(self.faces) + 1

    @property
    def entry_index(self) -> np.ndarray:
        return np.arange(len(self.faces))

    @property
    def exit_index(self) -> np.ndarray:
        exits = np.arange(1, len(self.faces) + 1)
        return exits % len(self.faces) if self.cyclic else exits

    def points(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Entry and exit chord endpoints, each (n, 3), in the face charts."""
        s_in = (self.a * t[self.entry_index])[:, None]
        s_out = (self.a * t[self.exit_index])[:, None]
        entry = self.in_start * np.cosh(s_in) + self.in_tangent * np.sinh(s_in)
        exit_ = self.out_start * np.cosh(s_out) + self.out_tangent * np.sinh(s_out)
        return entry, exit_

    def chord_lengths(self, t: np.ndarray) -> np.ndarray:
        entry, exit_ = self.points(t)
        return 2.0 * np.arcsinh(0.5 * np.sqrt(_gap(entry, exit_)))

    def length(self, t: np.ndarray) -> float:
        return float(np.sum(self.chord_lengths(t)))


def build_chain(surface: Surface, edges: Sequence[Edge], *, cyclic: bool) -> EdgeChain:
    """
    Chain through `edges` in order. An open chain over edges e_0..e_n has n
    faces; a cyclic chain over e_0..e_{n-1} has n faces, the last closing
    back onto e_0.
    """
    edges = tuple(edges)
    count = len(edges) if cyclic else len(edges) - 1
    faces = tuple(face_of_edges(edges[i], edges[(i + 1) % len(edges)]) for i in range(count))
    entry = [surface.edge_frame(face, edges[i]) for i, face in enumerate(faces)]
    exit_ = [
        surface.edge_frame(face, edges[(i + 1) % len(edges)]) for i, face in enumerate(faces)
    ]
    return EdgeChain(
        a=surface.a,
        edges=edges,
        faces=faces,
        in_start=np.array([frame[0] for frame in entry]),
        in_tangent=np.array([frame[1] for frame in entry]),
        out_start=np.array([frame[0] for frame in exit_]),
        out_tangent=np.array([frame[1] for frame in exit_]),
        cyclic=cyclic,
    )


def _derivatives(chain: EdgeChain, t: np.ndarray):
    """Per-face first and second derivatives of the chord length."""
    a = chain.a
    s_in = (a * t[chain.entry_index])[:, None]
    s_out = (a * t[chain.exit_index])[:, None]
    cosh_in, sinh_in = np.cosh(s_in), np.sinh(s_in)
    cosh_out, sinh_out = np.cosh(s_out), np.sinh(s_out)
    p = chain.in_start * cosh_in + chain.in_tangent * sinh_in
    dp = a * (chain.in_start * sinh_in + chain.in_tangent * cosh_in)
    q = chain.out_start * cosh_out + chain.out_tangent * sinh_out
    dq = a * (chain.out_start * sinh_out + chain.out_tangent * cosh_out)

    # <dp, p> = <dq, q> = 0, so the first derivatives only see p - q
    diff = p - q
    excess = 0.5 * np.maximum(_dot(diff, diff), 0.0)
    g = 1.0 + excess
    w = np.sqrt(excess * (2.0 + excess))
    if float(np.min(w, initial=np.inf)) < DEGENERATE_CHORD:
        raise ConvergenceFailure("a chord collapsed onto a vertex")

    g_t = _dot(dp, diff)
    g_s = -_dot(diff, dq)
    g_ts = -_dot(dp, dq)
    g_tt = a * a * g
    w3 = w**3

    grad_t = g_t / w
    grad_s = g_s / w
    hess_tt = g_tt / w - g * g_t * g_t / w3
    hess_ss = g_tt / w - g * g_s * g_s / w3
    hess_ts = g_ts / w - g * g_t * g_s / w3
    return grad_t, grad_s, hess_tt, hess_ss, hess_ts


def _gradient(chain: EdgeChain, grad_t: np.ndarray, grad_s: np.ndarray) -> np.ndarray:
    grad = np.zeros(chain.size)
    np.add.at(grad, chain.entry_index, grad_t)
    np.add.at(grad, chain.exit_index, grad_s)
    return grad


def _newton_step(chain: EdgeChain, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Newton direction and gradient over the free parameters."""
    grad_t, grad_s, h_tt, h_ss, h_ts = _derivatives(chain, t)
    grad = _gradient(chain, grad_t, grad_s)
    if not all(np.all(np.isfinite(part)) for part in (grad, h_tt, h_ss, h_ts)):
        raise ConvergenceFailure("chain derivatives are not finite")
    n = len(chain.faces)
    if not chain.cyclic and n == 1:
        return np.zeros(0), grad[1:1]

    if chain.cyclic:
        hessian = np.zeros((n, n))
        entry, exit_ = chain.entry_index, chain.exit_index
        np.add.at(hessian, (entry, entry), h_tt)
        np.add.at(hessian, (exit_, exit_), h_ss)
        np.add.at(hessian, (entry, exit_), h_ts)
        np.add.at(hessian, (exit_, entry), h_ts)
        free_grad = grad

        def solver(shift: float) -> np.ndarray:
            return solve(hessian + shift * np.eye(n), -free_grad, assume_a="pos")

    else:
        diag = np.zeros(n + 1)
        diag[:n] += h_tt
        diag[1:] += h_ss
        free_grad = grad[1:n]

        if n == 2:

            def solver(shift: float) -> np.ndarray:
                pivot = diag[1] + shift
                if not pivot > 0.0:
                    raise LinAlgError("chain Hessian is not positive")
                return -free_grad / pivot

        else:
            ab = np.zeros((2, n - 1))
            ab[1] = diag[1:n]
            ab[0, 1:] = h_ts[1 : n - 1]

            def solver(shift: float) -> np.ndarray:
                shifted = ab.copy()
                shifted[1] += shift
                return solveh_banded(shifted, -free_grad)

    shift = 0.0
    scale = 1e-10 * (1.0 + float(np.max(np.abs(free_grad), initial=0.0)))
    for _ in range(30):
        try:
            return solver(shift), free_grad
        except (LinAlgError, ValueError):
            shift = scale if shift == 0.0 else shift * 10.0
            logger.debug(f"Hessian not positive definite, damping with {shift:.3g}")
    raise ConvergenceFailure("could not damp the chain Hessian into positive definiteness")


def _free(chain: EdgeChain, t: np.ndarray) -> np.ndarray:
    return t if chain.cyclic else t[1:-1]


def _embed(chain: EdgeChain, t: np.ndarray, free: np.ndarray) -> np.ndarray:
    if chain.cyclic:
        return free.copy()
    full = t.copy()
    full[1:-1] = free
    return full


def _interior_step(free: np.ndarray, direction: np.ndarray) -> float:
    """Largest step in (0, 1] that keeps every free parameter inside (0, 1)."""
    step = 1.0
    down = direction < 0.0
    up = direction > 0.0
    if np.any(down):
        step = min(step, INTERIOR_FRACTION * float(np.min(free[down] / -direction[down])))
    if np.any(up):
        step = min(step, INTERIOR_FRACTION * float(np.min((1.0 - free[up]) / direction[up])))
    return step


def _largest(values: np.ndarray) -> float:
    return float(np.max(np.abs(values), initial=0.0))


def straighten(
    chain: EdgeChain, initial: Sequence[float], *, max_iter: int = 100
) -> np.ndarray:
    """
    Minimise the chain length from `initial` (all crossing parameters).

    Open chains keep initial[0] and initial[-1] fixed. Iterates stay inside
    (0, 1); the minimiser is accepted once the Newton step itself is below
    STEP_TOLERANCE or the gradient below GRADIENT_TOLERANCE.

    Raises:
        SegmentEscapesDevelopment: the iterate is pinned against an edge endpoint.
        ConvergenceFailure: Newton stalls before the gradient vanishes.
    """
    t = np.asarray(initial, dtype=float).copy()
    if len(t) != chain.size:
        raise ValueError(f"expected {chain.size} parameters, got {len(t)}")
    if not np.all((t > 0.0) & (t < 1.0)):
        raise ValueError("chain parameters must start inside (0, 1)")

    value = chain.length(t)
    direction, grad = _newton_step(chain, t)
    for iteration in range(max_iter):
        if _largest(grad) < GRADIENT_TOLERANCE:
            return t
        free = _free(chain, t)
        if _largest(direction) < STEP_TOLERANCE:
            return _embed(chain, t, np.clip(free + direction, 0.0, 1.0))

        slope = float(np.dot(grad, direction))
        norm = _largest(grad)
        step = _interior_step(free, direction)
        while True:
            trial = _embed(chain, t, free + step * direction)
            trial_value = chain.length(trial)
            if trial_value <= value + ARMIJO * step * slope:
                trial_direction, trial_grad = _newton_step(chain, trial)
                break
            if trial_value <= value + ROUNDOFF * max(value, 1.0):
                # decrease below resolution: accept on the gradient instead
                trial_direction, trial_grad = _newton_step(chain, trial)
                if _largest(trial_grad) < norm:
                    break
            step *= 0.5
            if step < MIN_STEP:
                _stalled(chain, t, iteration, norm)
        t, value, direction, grad = trial, trial_value, trial_direction, trial_grad

    if _largest(grad) < GRADIENT_TOLERANCE or _largest(direction) < STEP_TOLERANCE:
        return t
    raise ConvergenceFailure(
        f"chain straightening did not converge in {max_iter} steps "
        f"(gradient {_largest(grad):.2e})"
    )


def _stalled(chain: EdgeChain, t: np.ndarray, iteration: int, norm: float) -> None:
    free = _free(chain, t)
    gap = float(np.min(np.minimum(free, 1.0 - free), initial=1.0))
    if gap < BOUNDARY_GAP:
        raise SegmentEscapesDevelopment(
            f"chain parameters pinned at an edge endpoint after {iteration} Newton steps"
        )
    raise ConvergenceFailure(
        f"line search stalled after {iteration} Newton steps (gradient {norm:.2e})"
    )
