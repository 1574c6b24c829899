"""Edit distance and character error rate."""

from __future__ import annotations

from ..errors import M2VError


class EmptyTargetError(M2VError):
    """CER against an empty target name is undefined."""


def levenshtein(a: str, b: str) -> int:
    """Unit-cost insert/delete/substitute edit distance."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,            # delete from a
                    current[j - 1] + 1,         # insert into a
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


def cer(recognized: str, target: str) -> float:
    """Character error rate: edit distance over target length."""
    if not target:
        raise EmptyTargetError("CER target must be non-empty")
    return levenshtein(recognized, target) / len(target)
