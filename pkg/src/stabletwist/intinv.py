"""Integer-matrix invariants that separate congruence classes.

Congruence M -> P^T M P with det P = +-1 preserves the determinant, the Smith
normal form and whether x^T M x takes an odd value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactcore import WorkbenchError


class NotSymmetric(WorkbenchError):
    pass


class SizeMismatch(WorkbenchError):
    pass


def _square(M):
    M = [[int(x) for x in row] for row in M]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix is not square")
    return M


def determinant(M) -> int:
    """Fraction-free Bareiss elimination."""
    A = _square(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(M) -> list:
    """Diagonal invariants d_1 | d_2 | ... (nonnegative, zeros last)."""
    A = _square(M)
    n = len(A)
    A = [row[:] for row in A]
    diag = []
    for t in range(n):
        # bring a nonzero entry of least absolute value to (t, t)
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, n) if A[i][j]]
            if not nz:
                return diag + [0] * (n - t)
            _, i, j = min(nz)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            p = A[t][t]
            done = True
            for i in range(t + 1, n):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
    return diag


def is_symmetric(M) -> bool:
    A = _square(M)
    return all(A[i][j] == A[j][i] for i in range(len(A)) for j in range(i))


def odd_diagonal_invariant(M) -> bool:
    """True iff x -> x^T M x takes an odd value (for symmetric M: some diagonal entry is odd)."""
    if not is_symmetric(M):
        raise NotSymmetric("odd_diagonal_invariant needs a symmetric matrix")
    A = _square(M)
    return any(A[i][i] % 2 for i in range(len(A)))


@dataclass
class CongruenceVerdict:
    verdict: str  # "NotCongruent" | "Inconclusive"
    invariant: str | None
    details: dict

    def to_json(self):
        return {"verdict": self.verdict, "invariant": self.invariant, "details": self.details}


def congruence_report(M, N) -> CongruenceVerdict:
    if not (is_symmetric(M) and is_symmetric(N)):
        raise NotSymmetric("congruence_report needs symmetric matrices")
    if len(M) != len(N):
        raise SizeMismatch(f"sizes {len(M)} and {len(N)} differ")
    details = {
        "determinant": [determinant(M), determinant(N)],
        "smith_normal_form": [smith_normal_form(M), smith_normal_form(N)],
        "odd_diagonal": [odd_diagonal_invariant(M), odd_diagonal_invariant(N)],
    }
    for name in ("determinant", "smith_normal_form", "odd_diagonal"):
        a, b = details[name]
        if a != b:
            return CongruenceVerdict("NotCongruent", name, details)
    return CongruenceVerdict("Inconclusive", None, details)


def derived_equivalence_conclusion(v: CongruenceVerdict) -> str:
    if v.verdict == "NotCongruent":
        return (
            f"NOT CONGRUENT ({'parity' if v.invariant == 'odd_diagonal' else v.invariant}): "
            "the endomorphism algebras are not derived equivalent, so the stable "
            "auto-equivalence cannot be lifted to a derived auto-equivalence"
        )
    return "INCONCLUSIVE: all computed congruence invariants agree"
