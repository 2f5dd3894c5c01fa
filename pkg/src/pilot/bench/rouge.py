"""ROUGE-L F-score over case-folded whitespace tokens."""

from __future__ import annotations

from typing import Sequence


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence (classic DP, O(len*len))."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                current[j] = previous[j - 1] + 1
            else:
                current[j] = max(previous[j], current[j - 1])
        previous = current
    return previous[len(b)]


def rouge_l(reference: Sequence[str], candidate: Sequence[str]) -> float:
    """LCS-based F1: P = LCS/|candidate|, R = LCS/|reference|."""
    if not reference or not candidate:
        return 0.0
    lcs = lcs_length(reference, candidate)
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    return 2.0 * precision * recall / (precision + recall)


def rouge_tokens(text: str) -> list[str]:
    """Benchmark tokenization: case-folded whitespace split."""
    return text.casefold().split()


def rouge_l_text(reference: str, candidate: str) -> float:
    return rouge_l(rouge_tokens(reference), rouge_tokens(candidate))
