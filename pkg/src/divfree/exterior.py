"""Index combinatorics for antisymmetric coefficient arrays.

A degree-p coefficient array over dimension d stores one real number per
strictly increasing p-tuple of axis indices (0-based, axis 0 is time in the
physical models).  Everything else in the package is built on three small
pieces of bookkeeping:

* canonical ordering of index tuples with the permutation sign,
* lexicographic enumeration of the canonical tuples (the storage order),
* minors of a matrix indexed by pairs of tuples, which give the action of a
  linear change of variables on the coefficients.

Conventions are frozen here once and reused everywhere: coefficients read
through a permuted tuple pick up the permutation sign, a tuple with a repeated
index reads as zero, and the substitution action is
``B_J = sum_I A_I * minor(M, I, J)`` so that composition satisfies
``(M1 @ M2)^* = M2^* o M1^*``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MultiIndex = tuple


def canonicalize(raw, d=None):
    """Sort an index tuple and report the sign of the sorting permutation.

    Returns ``(sorted_tuple, parity)`` with parity +1 or -1; a repeated index
    gives parity 0 because the corresponding coefficient annihilates.
    """
    raw = tuple(int(i) for i in raw)
    if d is not None:
        for i in raw:
            if not 0 <= i < d:
                raise ValueError(f"index {i} out of range for dimension {d}")
    ordered = tuple(sorted(raw))
    for a in range(len(ordered) - 1):
        if ordered[a] == ordered[a + 1]:
            return ordered, 0
    inversions = 0
    for a in range(len(raw)):
        for b in range(a + 1, len(raw)):
            if raw[a] > raw[b]:
                inversions += 1
    return ordered, (-1 if inversions % 2 else 1)


def between_sign(i, j, K):
    """Sign (-1)^q with q the number of elements of K strictly between i and j.

    This is the relative parity of inserting i versus j into the sorted tuple
    K; it is symmetric in (i, j).  Endpoints must be distinct and not in K.
    """
    if i == j:
        raise ValueError("between_sign requires distinct endpoints")
    if i in K or j in K:
        raise ValueError("endpoints must not belong to K")
    lo, hi = (i, j) if i < j else (j, i)
    q = sum(1 for k in K if lo < k < hi)
    return -1 if q % 2 else 1


def enumerate_subsets(d, p):
    """All strictly increasing p-tuples from range(d), lexicographically."""
    if d < 0 or not 0 <= p <= d:
        raise ValueError(f"no degree-{p} tuples in dimension {d}")
    return list(itertools.combinations(range(d), p))


class FormBasis:
    """Canonical storage layout for degree-p coefficients in dimension d.

    ``tuples`` is the lexicographic list of increasing p-tuples; ``index``
    maps each tuple to its storage slot; ``slot`` extends the lookup to
    arbitrarily ordered tuples by folding in the permutation sign.
    """

    def __init__(self, d, p):
        if not 0 <= p <= d:
            raise ValueError(f"degree {p} out of range for dimension {d}")
        self.d = d
        self.p = p
        self.tuples = tuple(itertools.combinations(range(d), p))
        self.index = {J: k for k, J in enumerate(self.tuples)}
        self.size = len(self.tuples)

    def slot(self, raw):
        """(storage slot, sign) for a raw tuple; (None, 0) if annihilated."""
        J, sign = canonicalize(raw, self.d)
        if sign == 0:
            return None, 0
        return self.index[J], sign

    def __repr__(self):
        return f"FormBasis(d={self.d}, p={self.p}, size={self.size})"


@lru_cache(maxsize=None)
def form_basis(d, p):
    return FormBasis(d, p)


@dataclass(frozen=True)
class PFormValue:
    """Pointwise value of a degree-p coefficient array, plus an optional
    scalar (entropy) slot that rides along untouched by the algebra."""

    d: int
    p: int
    coeffs: np.ndarray
    entropy: float | None = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        expected = math.comb(self.d, self.p)
        if coeffs.shape != (expected,):
            raise ValueError(
                f"need {expected} coefficients for (d={self.d}, p={self.p}), "
                f"got shape {coeffs.shape}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def basis(self):
        return form_basis(self.d, self.p)

    def __getitem__(self, raw):
        """Coefficient read through an arbitrarily ordered tuple."""
        k, sign = self.basis.slot(raw)
        if sign == 0:
            return 0.0
        return sign * float(self.coeffs[k])

    def as_dict(self):
        return {J: float(v) for J, v in zip(self.basis.tuples, self.coeffs)}

    def with_coeffs(self, coeffs):
        return PFormValue(self.d, self.p, coeffs, self.entropy)

    @classmethod
    def zero(cls, d, p, entropy=None):
        return cls(d, p, np.zeros(math.comb(d, p)), entropy)

    @classmethod
    def from_dict(cls, d, p, mapping, entropy=None):
        """Build from {tuple: value}; non-canonical tuples fold in their sign,
        and the same canonical slot may be hit several times (accumulates)."""
        basis = form_basis(d, p)
        coeffs = np.zeros(basis.size)
        for raw, val in mapping.items():
            k, sign = basis.slot(tuple(raw))
            if sign == 0:
                if val != 0:
                    raise ValueError(f"repeated index in {raw} with nonzero value")
                continue
            coeffs[k] += sign * float(val)
        return cls(d, p, coeffs, entropy)


def _det_batch(sub):
    # direct expansion up to 4x4, LU (numpy) above; batched over leading axes
    k = sub.shape[-1]
    if k == 0:
        return np.ones(sub.shape[:-2])
    if k == 1:
        return sub[..., 0, 0]
    if k == 2:
        return sub[..., 0, 0] * sub[..., 1, 1] - sub[..., 0, 1] * sub[..., 1, 0]
    if k == 3:
        return (
            sub[..., 0, 0] * (sub[..., 1, 1] * sub[..., 2, 2] - sub[..., 1, 2] * sub[..., 2, 1])
            - sub[..., 0, 1] * (sub[..., 1, 0] * sub[..., 2, 2] - sub[..., 1, 2] * sub[..., 2, 0])
            + sub[..., 0, 2] * (sub[..., 1, 0] * sub[..., 2, 1] - sub[..., 1, 1] * sub[..., 2, 0])
        )
    if k == 4:
        cols = list(range(4))
        acc = 0.0
        for j in range(4):
            rest = [c for c in cols if c != j]
            m3 = sub[..., 1:, :][..., :, rest]
            term = sub[..., 0, j] * _det_batch(m3)
            acc = acc + (term if j % 2 == 0 else -term)
        return acc
    return np.linalg.det(sub)


def minor(M, I, J):
    """Determinant of the submatrix of M with rows I and columns J.

    M may carry leading batch axes; the result is batched accordingly.
    """
    if len(I) != len(J):
        raise ValueError("row and column tuples must have equal length")
    M = np.asarray(M, dtype=float)
    sub = M[..., list(I), :][..., :, list(J)]
    return _det_batch(sub)


def pullback_matrix(M, d, p):
    """Matrix of p-minors P with P[..., a, b] = minor(M, tuples[a], tuples[b]).

    Coefficients transform as B = A @ P (sum over the row tuple).
    """
    basis = form_basis(d, p)
    M = np.asarray(M, dtype=float)
    if M.shape[-2:] != (d, d):
        raise ValueError(f"matrix must be {d}x{d}, got {M.shape[-2:]}")
    out = np.empty(M.shape[:-2] + (basis.size, basis.size))
    for a, I in enumerate(basis.tuples):
        for b, J in enumerate(basis.tuples):
            out[..., a, b] = minor(M, I, J)
    return out


def pullback_coeffs(M, A, d, p):
    """Substitution action on a coefficient array; A has trailing axis of
    length C(d, p) and M may be batched alongside it."""
    P = pullback_matrix(M, d, p)
    A = np.asarray(A, dtype=float)
    return np.einsum("...i,...ij->...j", A, P)


def pullback(M, form):
    """Pullback of a PFormValue by the linear map y -> M y.

    Composition convention: pullback(M1 @ M2, a) == pullback(M2, pullback(M1, a)).
    The entropy slot passes through unchanged.
    """
    B = pullback_coeffs(M, form.coeffs, form.d, form.p)
    return form.with_coeffs(B)


@lru_cache(maxsize=None)
def _infinitesimal_table(d, p):
    # terms (slot_J, slot_I, i, j, sign): B[slot_J] += sign * N[i, j] * A[slot_I]
    if p == 0:
        return ()
    basis = form_basis(d, p)
    lower = form_basis(d, p - 1)
    terms = []
    for K in lower.tuples:
        ks = set(K)
        for j in range(d):
            if j in ks:
                continue
            slot_j, sign_j = basis.slot((j,) + K)
            for i in range(d):
                if i in ks:
                    continue
                slot_i, sign_i = basis.slot((i,) + K)
                terms.append((slot_j, slot_i, i, j, sign_j * sign_i))
    return tuple(terms)


def infinitesimal_pullback_coeffs(N, A, d, p):
    N = np.asarray(N, dtype=float)
    A = np.asarray(A, dtype=float)
    B = np.zeros_like(A)
    for slot_j, slot_i, i, j, sign in _infinitesimal_table(d, p):
        B[..., slot_j] += sign * N[..., i, j] * A[..., slot_i]
    return B


def infinitesimal_pullback(N, form):
    """First-order coefficient of the pullback along exp(t N) at t = 0.

    Exactly the t-derivative of ``pullback(expm(t N), form)``; in relaxed
    index notation the target coefficient B_{jK} collects n_ij A_{iK} over
    all i outside K.  Entropy passes through unchanged.
    """
    B = infinitesimal_pullback_coeffs(N, form.coeffs, form.d, form.p)
    return form.with_coeffs(B)


def pfaffian_2form(form):
    """E . B invariant of a 2-form in dimension 4.

    Under the electromagnetic identification (A_{j0} = E_j, spatial slots
    carrying B through the 3-index signature) this equals the dot product
    E . B; it squares to the determinant of the antisymmetric coefficient
    matrix.  Only defined for (d, p) = (4, 2).
    """
    if (form.d, form.p) != (4, 2):
        raise ValueError("pfaffian is defined for 2-forms in dimension 4 only")
    a = form.coeffs  # order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
    return float(-(a[0] * a[5] - a[1] * a[4] + a[2] * a[3]))


@lru_cache(maxsize=None)
def exterior_derivative_table(d, p):
    """Rows (J_up, ((axis, lower_slot, sign), ...)) for the alternating-sum
    formula (dA)_{J} = sum_a (-1)^a  d/dy_{J[a]}  A_{J minus a}."""
    if p >= d:
        return ()
    upper = form_basis(d, p + 1)
    lower = form_basis(d, p)
    rows = []
    for J in upper.tuples:
        terms = []
        for a, axis in enumerate(J):
            sub = J[:a] + J[a + 1:]
            terms.append((axis, lower.index[sub], -1 if a % 2 else 1))
        rows.append((J, tuple(terms)))
    return tuple(rows)
