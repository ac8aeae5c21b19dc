"""Floating-point Schottky groups: periods, differentials, certificates.

Words are handled as batches of 2x2 complex matrices (det 1). A batch of
length-n words is extended on the right by every admissible letter, so each
length comes out in the documented order (lexicographic for
``1 < -1 < 2 < -2 < ...``) and all reductions run in that fixed order.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .moebius import DegenerateError, FixedPointForm, MoebiusMap, cross_ratio, from_fixed_points
from .words import alphabet

TWO_PI_I = 2j * math.pi


class SingularConfigurationError(DegenerateError):
    """An orbit point collided with a fixed point (vanishing cross-ratio factor)."""


class PoleProximityError(ValueError):
    """Evaluation point too close to a pole of the differential."""


Circle = Tuple[complex, float]


def _normalized_matrix(f: FixedPointForm) -> np.ndarray:
    m = from_fixed_points(f)
    a, b, c, d = (complex(x) for x in m.as_tuple())
    r = cmath.sqrt(a * d - b * c)
    return np.array([[a / r, b / r], [c / r, d / r]], dtype=complex)


@dataclass
class SchottkyGroupNumeric:
    """Rank-g Schottky group given by fixed-point data.

    ``circles`` maps each signed index k in +-1..+-g to ``(center, radius)``
    of the disk D_k. When omitted, the isometric circles of the det-1
    normalized generators are used: D_{-i} is ``|c z + d| <= 1`` (center
    ``-d/c``) and D_i is its image circle (center ``a/c``), both of radius
    ``1/|c|``.
    """

    generators: List[FixedPointForm]
    circles: Optional[Dict[int, Circle]] = None
    matrices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        gens = []
        for f in self.generators:
            f = FixedPointForm(complex(f.t_plus), complex(f.t_minus), complex(f.s))
            f.check_contracting()
            gens.append(f)
        self.generators = gens
        if not gens:
            raise ValueError("need at least one generator")
        pts = self.fixed_points()
        vals = list(pts.values())
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                if vals[a] == vals[b]:
                    raise DegenerateError("fixed points are not pairwise distinct")
        mats = {}
        for i, f in enumerate(gens, start=1):
            m = _normalized_matrix(f)
            mats[i] = m
            mats[-i] = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
        self.matrices = mats
        if self.circles is not None:
            self.circles = {int(k): (complex(c), float(r)) for k, (c, r) in self.circles.items()}
            if sorted(self.circles) != sorted(pts):
                raise ValueError("circles must be given for every index +-1..+-g")
            bad = _overlaps(self.circles)
            if bad:
                raise ValueError(f"circles are not pairwise disjoint: {bad}")

    @classmethod
    def from_data(cls, t_plus: Sequence, t_minus: Sequence, s: Sequence, circles=None):
        gens = [FixedPointForm(complex(a), complex(b), complex(c)) for a, b, c in zip(t_plus, t_minus, s)]
        return cls(gens, circles)

    @property
    def g(self) -> int:
        return len(self.generators)

    def fixed_points(self) -> Dict[int, complex]:
        out = {}
        for i, f in enumerate(self.generators, start=1):
            out[i] = f.t_plus
            out[-i] = f.t_minus
        return out

    def moebius(self, k: int) -> MoebiusMap:
        m = self.matrices[k]
        return MoebiusMap(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def isometric_circles(self) -> Dict[int, Circle]:
        out = {}
        for i in range(1, self.g + 1):
            (a, _b), (c, d) = self.matrices[i]
            if c == 0:
                raise DegenerateError(f"generator {i} fixes infinity; no isometric circle")
            r = float(1.0 / abs(c))
            out[i] = (complex(a / c), r)
            out[-i] = (complex(-d / c), r)
        return out

    def disk_system(self) -> Dict[int, Circle]:
        return self.circles if self.circles is not None else self.isometric_circles()

    def diameter(self) -> float:
        pts = list(self.fixed_points().values())
        for c, r in self.disk_system().values():
            pts += [c + r, c - r, c + 1j * r, c - 1j * r]
        return max(abs(a - b) for a in pts for b in pts)

    def with_multiplier(self, k: int, s) -> "SchottkyGroupNumeric":
        gens = list(self.generators)
        f = gens[k - 1]
        gens[k - 1] = FixedPointForm(f.t_plus, f.t_minus, complex(s))
        return SchottkyGroupNumeric(gens, None)

    def without(self, k: int) -> "SchottkyGroupNumeric":
        gens = [f for i, f in enumerate(self.generators, start=1) if i != k]
        return SchottkyGroupNumeric(gens, None)


def _overlaps(circles: Dict[int, Circle]) -> List[Tuple[int, int]]:
    keys = sorted(circles, key=lambda k: (abs(k), k < 0))
    bad = []
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            (c1, r1), (c2, r2) = circles[keys[x]], circles[keys[y]]
            if abs(c1 - c2) <= r1 + r2:
                bad.append((keys[x], keys[y]))
    return bad


# -- word batches ------------------------------------------------------------

@dataclass
class WordBatch:
    """All admissible words of one length, lexicographically ordered."""

    letters: np.ndarray  # (n, length) int
    mats: np.ndarray  # (n, 2, 2) complex

    def __len__(self):
        return self.letters.shape[0]

    @property
    def last(self):
        return self.letters[:, -1]

    def images(self, z: complex) -> np.ndarray:
        a, b, c, d = self.mats[:, 0, 0], self.mats[:, 0, 1], self.mats[:, 1, 0], self.mats[:, 1, 1]
        return (a * z + b) / (c * z + d)


def word_batches(G: SchottkyGroupNumeric, n_max: int, first_ok=None) -> Iterator[WordBatch]:
    """Yield one :class:`WordBatch` per length 1..n_max (first letter filtered)."""
    letters = np.array(alphabet(G.g))
    gm = np.stack([G.matrices[int(k)] for k in letters])
    first = letters if first_ok is None else np.array([k for k in letters if first_ok(int(k))], dtype=int)
    if n_max < 1 or first.size == 0:
        return
    batch = WordBatch(first.reshape(-1, 1), np.stack([G.matrices[int(k)] for k in first]))
    yield batch
    for _ in range(1, n_max):
        last = batch.last
        # (n, 2g) admissible pairs, row-major keeps the lexicographic order
        ok = letters[None, :] != -last[:, None]
        wi, li = np.nonzero(ok)
        mats = np.einsum("nij,njk->nik", batch.mats[wi], gm[li])
        words = np.concatenate([batch.letters[wi], letters[li].reshape(-1, 1)], axis=1)
        batch = WordBatch(words, mats)
        yield batch


# -- period matrix -------------------------------------------------------------

@dataclass
class PeriodMatrixNumeric:
    P: np.ndarray
    Z: np.ndarray
    N: int
    tail_bound: float
    certified: bool
    sum_L: float
    shell_deltas: np.ndarray  # |(product of the length-N factors) - 1| per entry

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.P - self.P.T)))

    def to_json(self) -> dict:
        def pairs(M):
            return [[[float(v.real), float(v.imag)] for v in row] for row in M]

        return {
            "P": pairs(self.P),
            "Z": pairs(self.Z),
            "metadata": {
                "N": self.N,
                "certified": self.certified,
                "tail_bound": self.tail_bound if math.isfinite(self.tail_bound) else None,
                "sum_L": self.sum_L,
            },
        }


def _psi_factors(t_i, t_mi, A, B):
    num = (t_i - A) * (t_mi - B)
    den = (t_i - B) * (t_mi - A)
    if np.any(den == 0) or np.any(num == 0) or not np.all(np.isfinite(num / den)):
        raise SingularConfigurationError("orbit point collides with a fixed point")
    return num / den


def period_entry(G: SchottkyGroupNumeric, i: int, j: int, N: int):
    """``(p_ij, z_ij, shell products)`` for the double-coset product up to length N.

    ``z_ij`` is ``(Log base + sum Log psi) / 2 pi i`` with the principal
    branch on every factor; ``base`` is ``s_i`` on the diagonal and the
    cross-ratio of ``(t_i, t_-i; t_j, t_-j)`` off it.
    """
    pts = G.fixed_points()
    if i == j:
        base = G.generators[i - 1].s
    else:
        base = complex(cross_ratio(pts[i], pts[-i], pts[j], pts[-j]))
    p = base
    logsum = cmath.log(base)
    shells = []
    for batch in word_batches(G, N, first_ok=lambda k: abs(k) != i):
        keep = np.abs(batch.last) != j
        if not np.any(keep):
            shells.append(1.0 + 0j)
            continue
        mats = batch.mats[keep]
        sub = WordBatch(batch.letters[keep], mats)
        psi = _psi_factors(pts[i], pts[-i], sub.images(pts[j]), sub.images(pts[-j]))
        shell = complex(np.prod(psi))
        shells.append(shell)
        p = p * shell
        logsum += complex(np.sum(np.log(psi)))
    return p, logsum / TWO_PI_I, shells


def period_matrix(G: SchottkyGroupNumeric, N: int) -> PeriodMatrixNumeric:
    """Multiplicative periods ``p_ij`` truncated at word length N.

    The tail bound is ``max|p| * delta_N * q / (1 - q)`` with ``q`` the
    certificate's sum of L and ``delta_N`` the largest distance from 1 of a
    length-N shell product; infinite when the disk system is not certified.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    g = G.g
    P = np.zeros((g, g), dtype=complex)
    Z = np.zeros((g, g), dtype=complex)
    deltas = np.zeros((g, g))
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            p, z, shells = period_entry(G, i, j, N)
            P[i - 1, j - 1] = p
            Z[i - 1, j - 1] = z
            deltas[i - 1, j - 1] = abs(shells[-1] - 1) if shells else 0.0
    cert = convergence_certificate(G)
    q = cert["sum_L"]
    if cert["certified"]:
        tail = float(np.max(np.abs(P)) * np.max(deltas) * q / (1 - q))
    else:
        tail = math.inf
    return PeriodMatrixNumeric(P, Z, N, tail, cert["certified"], q, deltas)


def imaginary_part_eigenvalues(Z: np.ndarray) -> np.ndarray:
    im = (Z.imag + Z.imag.T) / 2
    return np.linalg.eigvalsh(im)


# -- certificate -------------------------------------------------------------------

def pair_constants(ci: complex, ri: float, cj: complex, rj: float) -> Tuple[float, float]:
    rho = abs(ci - cj)
    K = (ri * ri + rj * rj - rho * rho) ** 2 / (4 * ri * ri * rj * rj) - 1
    K = max(K, 0.0)
    L = 1.0 / (math.sqrt(1 + K) + math.sqrt(K))
    return K, L


def convergence_certificate(G: SchottkyGroupNumeric, circles: Optional[Dict[int, Circle]] = None) -> dict:
    """Disk-system constants K_ij, L_ij over ordered pairs i != j in +-1..+-g.

    Certified when the circles are pairwise disjoint and the sum of all L_ij
    is below 1. The sum is over ordered pairs, so every unordered pair is
    counted twice. ``tail_ratio`` is that sum: successive word shells shrink
    at least geometrically with it.
    """
    circles = circles if circles is not None else G.disk_system()
    keys = sorted(circles, key=lambda k: (abs(k), k < 0))
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            (c1, r1), (c2, r2) = circles[keys[x]], circles[keys[y]]
            if abs(c1 - c2) == 0 and r1 == r2:
                raise ValueError(f"identical disks D_{keys[x]} and D_{keys[y]}")
    K, L = {}, {}
    for a in keys:
        for b in keys:
            if a == b:
                continue
            (c1, r1), (c2, r2) = circles[a], circles[b]
            K[(a, b)], L[(a, b)] = pair_constants(c1, r1, c2, r2)
    overlaps = _overlaps(circles)
    total = float(sum(L.values()))
    certified = not overlaps and total < 1
    diag = None
    if overlaps:
        diag = f"circles not disjoint: {overlaps}"
    elif not certified:
        diag = f"sum of L is {total:.6g} >= 1"
    return {
        "K": K,
        "L": L,
        "sum_L": total,
        "certified": certified,
        "tail_ratio": total,
        "diagnostic": diag,
    }


def tail_bound_for_length(cert: dict, m: int, C: float = 1.0) -> float:
    """Geometric bound ``C * (sum L)^m``; C is left to the caller."""
    if not cert["certified"]:
        return math.inf
    return C * cert["sum_L"] ** m


# -- differentials -------------------------------------------------------------------

def _coset_images(G: SchottkyGroupNumeric, i: int, N: int) -> Tuple[np.ndarray, np.ndarray]:
    pts = G.fixed_points()
    A = [np.array([pts[i]])]
    B = [np.array([pts[-i]])]
    for batch in word_batches(G, N):
        keep = np.abs(batch.last) != i
        if np.any(keep):
            sub = WordBatch(batch.letters[keep], batch.mats[keep])
            A.append(sub.images(pts[i]))
            B.append(sub.images(pts[-i]))
    return np.concatenate(A), np.concatenate(B)


def differential_eval(G: SchottkyGroupNumeric, i: int, z, N: int, exclusion: Optional[float] = None):
    """Coefficient of ``omega_i`` at ``z`` (scalar or array).

    Sum over coset representatives (empty word and words whose last letter
    is not +-i) of ``1/(z - gamma t_i) - 1/(z - gamma t_-i)``, divided by
    ``2 pi i``. Each term is evaluated as one fraction to avoid cancellation.
    """
    if not 1 <= i <= G.g:
        raise ValueError("index out of range")
    if exclusion is None:
        exclusion = 1e-8 * G.diameter()
    A, B = _coset_images(G, i, N)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    dA = zz[:, None] - A[None, :]
    dB = zz[:, None] - B[None, :]
    if np.min(np.abs(dA)) < exclusion or np.min(np.abs(dB)) < exclusion:
        raise PoleProximityError("evaluation point within the exclusion distance of a pole")
    terms = (A - B)[None, :] / (dA * dB)
    out = terms.sum(axis=1) / TWO_PI_I
    return complex(out[0]) if np.ndim(z) == 0 else out


def contour_integral(G: SchottkyGroupNumeric, i: int, k: int, N: int = 4, M: int = 256) -> complex:
    """Trapezoidal ``oint_{dD_k} omega_i`` (counterclockwise, M nodes)."""
    c, r = G.disk_system()[k]
    theta = 2 * math.pi * np.arange(M) / M
    e = np.exp(1j * theta)
    zs = c + r * e
    vals = differential_eval(G, i, zs, N)
    return complex(np.sum(vals * 1j * r * e) * (2 * math.pi / M))


# -- degeneration ---------------------------------------------------------------------

def degeneration_probe(G: SchottkyGroupNumeric, k: int, s_values: Sequence[float], N: int = 4) -> dict:
    """Periods as the multiplier of generator k shrinks.

    Reports ``p_kk / s_k`` for each value and the surviving entries
    ``p_ij`` (i, j != k), with the rank-(g-1) group's periods as reference.
    """
    s_values = [float(s) for s in s_values]
    if any(not 0 < s < 1 for s in s_values):
        raise ValueError("multipliers must lie in (0, 1)")
    if any(b >= a for a, b in zip(s_values, s_values[1:])):
        raise ValueError("s_values must be strictly decreasing")
    surviving = [i for i in range(1, G.g + 1) if i != k]
    rows = []
    for s in s_values:
        H = G.with_multiplier(k, s)
        pm = period_matrix(H, N)
        rows.append({
            "s": s,
            "ratio": complex(pm.P[k - 1, k - 1] / s),
            "surviving": {(i, j): complex(pm.P[i - 1, j - 1]) for i in surviving for j in surviving},
            "tail_bound": pm.tail_bound,
        })
    reference = {}
    if surviving:
        pm0 = period_matrix(G.without(k), N)
        for a, i in enumerate(surviving):
            for b, j in enumerate(surviving):
                reference[(i, j)] = complex(pm0.P[a, b])
    # polynomial extrapolation to s_k = 0; dropping the largest s gives the
    # error estimate
    limits, limit_errors = {}, {}
    for key in reference:
        fs = [row["surviving"][key] for row in rows]
        limits[key] = richardson_limit(s_values, fs)
        if len(s_values) > 1:
            limit_errors[key] = abs(limits[key] - richardson_limit(s_values[1:], fs[1:]))
        else:
            limit_errors[key] = math.inf
    return {
        "k": k,
        "N": N,
        "rows": rows,
        "reference": reference,
        "surviving": surviving,
        "limits": limits,
        "limit_errors": limit_errors,
    }


def richardson_limit(xs: Sequence[float], fs: Sequence[complex]) -> complex:
    """Value at x = 0 of the interpolating polynomial through ``(xs, fs)``."""
    total = 0j
    for a, xa in enumerate(xs):
        w = 1.0
        for b, xb in enumerate(xs):
            if a != b:
                w *= (0 - xb) / (xa - xb)
        total += w * fs[a]
    return total


# -- limit set ---------------------------------------------------------------------------

def limit_set_sample(G: SchottkyGroupNumeric, depth: int, dedup: bool = True, rel_tol: float = 1e-12) -> List[complex]:
    """Images of all fixed points under all reduced words of length ``depth``.

    Order: words lexicographically, then fixed points t_1, t_-1, t_2, ...
    With ``dedup`` a point is dropped when it lies within
    ``rel_tol * diameter`` of an earlier one.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    batch = None
    for batch in word_batches(G, depth):
        pass
    pts = G.fixed_points()
    keys = sorted(pts, key=lambda k: (abs(k), k < 0))
    imgs = np.stack([batch.images(pts[k]) for k in keys], axis=1).reshape(-1)
    if not dedup:
        return [complex(v) for v in imgs]
    tol = rel_tol * G.diameter()
    out: List[complex] = []
    seen = {}
    for v in imgs:
        v = complex(v)
        key = (round(v.real / tol), round(v.imag / tol)) if tol > 0 else (v.real, v.imag)
        hit = False
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for u in seen.get((key[0] + dx, key[1] + dy), ()):
                    if abs(u - v) <= tol:
                        hit = True
        if not hit:
            seen.setdefault(key, []).append(v)
            out.append(v)
    return out


def points_to_csv(points: Sequence[complex]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for p in points:
        w.writerow([repr(float(p.real)), repr(float(p.imag))])
    return buf.getvalue()


def points_to_json(points: Sequence[complex]) -> str:
    return json.dumps({"points": [[float(p.real), float(p.imag)] for p in points]})
